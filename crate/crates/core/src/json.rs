//! Exact JSON encoding. Integers are written as decimal strings and
//! rationals as `"p/q"` strings; on input both strings and JSON integers
//! are accepted.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::chipfiring::Stabilization;
use crate::deformation::{certify, hat_laplacian, DeformationResult, DeformationStep};
use crate::digraph::{left_kernel_sigma, LaplacianMatrix, WeightedDigraph};
use crate::error::{Error, Result};
use crate::exact::{BigRat, ExactMatrix, Lattice};
use crate::groebner::MarkedGb;
use crate::laplacianize::LaplacianPresentation;
use crate::pipeline::Resolution;
use crate::pitfall::PitfallReport;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn int(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn int64(v: i64) -> Value {
    Value::String(v.to_string())
}

pub fn rat(v: &BigRat) -> Value {
    Value::String(v.to_string())
}

pub fn ints(v: &[i64]) -> Value {
    Value::Array(v.iter().map(|&x| int64(x)).collect())
}

pub fn int_rows(m: &[Vec<i64>]) -> Value {
    Value::Array(m.iter().map(|r| ints(r)).collect())
}

pub fn matrix(m: &ExactMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(rat).collect())).collect())
}

pub fn parse_rational(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad(format!("bad numerator in {s:?}")))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad(format!("bad denominator in {s:?}")))?;
            if q == BigInt::from(0) {
                return Err(bad(format!("zero denominator in {s:?}")));
            }
            BigRat::new(p, q)
        }
        None => BigRat::from_integer(BigInt::from_str(s).map_err(|_| bad(format!("not a number: {s:?}")))?),
    };
    Ok(r)
}

pub fn read_rational(v: &Value) -> Result<BigRat> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => Ok(BigRat::from_integer(i.into())),
            (_, Some(u)) => Ok(BigRat::from_integer(u.into())),
            _ => Err(bad(format!("non-integral JSON number {n}; write rationals as \"p/q\""))),
        },
        _ => Err(bad(format!("expected a number, got {v}"))),
    }
}

pub fn read_int(v: &Value) -> Result<BigInt> {
    let r = read_rational(v)?;
    if !r.is_integer() {
        return Err(bad(format!("expected an integer, got {r}")));
    }
    Ok(r.to_integer())
}

pub fn read_i64(v: &Value) -> Result<i64> {
    let b = read_int(v)?;
    i64::try_from(&b).map_err(|_| Error::Overflow(b.to_string()))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

pub fn read_vector(v: &Value) -> Result<Vec<i64>> {
    array(v, "vector")?.iter().map(read_i64).collect()
}

fn read_matrix(v: &Value) -> Result<Vec<Vec<BigRat>>> {
    let rows = array(v, "matrix")?;
    let out: Vec<Vec<BigRat>> = rows
        .iter()
        .map(|r| array(r, "matrix row")?.iter().map(read_rational).collect())
        .collect::<Result<_>>()?;
    if out.is_empty() || out.iter().any(|r| r.len() != out[0].len()) {
        return Err(bad("matrix must be non-empty and rectangular"));
    }
    Ok(out)
}

fn int_matrix(m: Vec<Vec<BigRat>>) -> Result<Vec<Vec<BigInt>>> {
    m.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(bad("lattice vectors must be integral")) })
                .collect()
        })
        .collect()
}

pub fn read_digraph(v: &Value) -> Result<WeightedDigraph> {
    let n = v
        .get("n")
        .ok_or_else(|| bad("digraph needs \"n\""))
        .and_then(read_i64)?;
    if n < 1 {
        return Err(bad("digraph needs n ≥ 1"));
    }
    let mut g = WeightedDigraph::new(n as usize + 1);
    for e in array(v.get("edges").unwrap_or(&Value::Null), "edges")? {
        let e = array(e, "edge")?;
        if e.len() != 3 {
            return Err(bad("edge must be [src, dst, weight]"));
        }
        let (s, d) = (read_i64(&e[0])?, read_i64(&e[1])?);
        if s < 0 || d < 0 || s > n || d > n {
            return Err(bad(format!("edge ({s}, {d}) out of range")));
        }
        g.add_edge(s as usize, d as usize, read_rational(&e[2])?)?;
    }
    Ok(g)
}

/// What a command received: an explicit Laplacian or just a lattice.
#[derive(Clone, Debug)]
pub enum Input {
    Laplacian(LaplacianMatrix),
    Lattice(Lattice),
}

fn looks_like_laplacian(m: &[Vec<BigRat>]) -> bool {
    let n = m.len();
    let zero = BigRat::from_integer(0.into());
    m.iter().all(|r| r.len() == n)
        && m.iter().all(|r| r.iter().sum::<BigRat>() == zero)
        && (0..n).all(|i| (0..n).all(|j| i == j || m[i][j] <= zero))
}

/// Accepted shapes: a bare matrix, `{"laplacian": ...}`, `{"basis": ...}`,
/// `{"generators": ...}` or a digraph `{"n": ..., "edges": ...}`. A bare
/// square matrix with zero row sums and nonpositive off-diagonal entries is
/// read as a Laplacian; any other bare matrix lists lattice generators.
pub fn read_input(v: &Value) -> Result<Input> {
    if let Some(obj) = v.as_object() {
        if let Some(m) = obj.get("laplacian") {
            return Ok(Input::Laplacian(LaplacianMatrix::new(ExactMatrix::from_rows(read_matrix(m)?)?)?));
        }
        if obj.contains_key("edges") {
            return Ok(Input::Laplacian(read_digraph(v)?.laplacian()));
        }
        if let Some(m) = obj.get("basis").or_else(|| obj.get("generators")) {
            return Ok(Input::Lattice(Lattice::from_generators(&int_matrix(read_matrix(m)?)?)?));
        }
        return Err(bad("expected one of \"laplacian\", \"basis\", \"generators\" or a digraph"));
    }
    let m = read_matrix(v)?;
    if looks_like_laplacian(&m) {
        return Ok(Input::Laplacian(LaplacianMatrix::new(ExactMatrix::from_rows(m)?)?));
    }
    Ok(Input::Lattice(Lattice::from_generators(&int_matrix(m)?)?))
}

impl Input {
    pub fn lattice(&self) -> Result<Lattice> {
        match self {
            Input::Lattice(l) => Ok(l.clone()),
            Input::Laplacian(q) => {
                let rows = q
                    .matrix()
                    .to_int_rows()
                    .ok_or_else(|| bad("Laplacian must be integral to define a lattice"))?;
                Lattice::from_generators(&rows)
            }
        }
    }

    /// An explicit Laplacian is kept as given; a lattice is laplacianized.
    pub fn presentation(&self) -> Result<LaplacianPresentation> {
        match self {
            Input::Laplacian(q) => LaplacianPresentation::from_laplacian(q.clone()),
            Input::Lattice(l) => crate::laplacianize::laplacianize(l),
        }
    }

    pub fn laplacian(&self) -> Result<LaplacianMatrix> {
        match self {
            Input::Laplacian(q) => Ok(q.clone()),
            Input::Lattice(_) => Err(bad("this command needs a Laplacian or a digraph, not a lattice basis")),
        }
    }
}

pub fn digraph(g: &WeightedDigraph) -> Value {
    json!({
        "n": int64(g.vertex_count() as i64 - 1),
        "edges": g.edges().map(|(s, d, w)| json!([int64(s as i64), int64(d as i64), rat(w)])).collect::<Vec<_>>(),
    })
}

pub fn presentation(p: &LaplacianPresentation) -> Value {
    json!({
        "q": matrix(p.q.matrix()),
        "sigma": Value::Array(p.sigma.entries().iter().map(int).collect()),
        "edges": digraph(&p.graph)["edges"].clone(),
        "index": int(&p.lattice().index()),
    })
}

pub fn stabilization(initial: &[i64], s: &Stabilization) -> Value {
    json!({
        "initial": ints(initial),
        "final": ints(s.config.chips()),
        "script": ints(&s.script),
    })
}

pub fn grobner(gb: &MarkedGb) -> Value {
    let bins: Vec<Value> = gb
        .binomials
        .iter()
        .map(|b| {
            json!({
                "u": ints(b.binomial.exponent()),
                "leading": if b.positive_leads { "+" } else { "-" },
            })
        })
        .collect();
    json!({
        "ranking": Value::Array(gb.order.ranking().iter().map(|&r| int64(r as i64)).collect()),
        "count": int64(bins.len() as i64),
        "binomials": bins,
    })
}

fn step(s: &DeformationStep, sigma: &crate::digraph::SigmaVector) -> Result<Value> {
    let violation = match &s.violation {
        Some((x, i)) => json!({"x": ints(x), "i": int64(*i as i64)}),
        None => Value::Null,
    };
    Ok(json!({
        "r": int64(s.r as i64),
        "q_r": matrix(s.q_r.matrix()),
        "lambda_r": rat(&s.lambda_r),
        "violation": violation,
        "i": int64(s.i as i64),
        "j": int64(s.j as i64),
        "q_hat": matrix(hat_laplacian(s.i, s.j, sigma)?.matrix()),
        "epsilon": rat(&s.epsilon_r),
    }))
}

pub fn deformation(d: &DeformationResult, delta: &BigRat) -> Result<Value> {
    let steps: Vec<Value> = d.steps.iter().map(|s| step(s, &d.sigma)).collect::<Result<_>>()?;
    let cert = certify(d, delta)?;
    let scaled = d.scaled_laplacian();
    Ok(json!({
        "delta": rat(delta),
        "q0": matrix(d.q0.matrix()),
        "sigma": Value::Array(d.sigma.entries().iter().map(int).collect()),
        "q_gen": matrix(d.q_gen.matrix()),
        "lambda": rat(&d.lambda),
        "scaled": matrix(scaled.matrix()),
        "steps": steps,
        "distance_bound": {
            "squared": rat(&d.distance_bound.squared),
            "decimal": d.distance_bound.decimal,
        },
        "certificate": {
            "sign_preservation": cert.sign_preservation,
            "strict_progress": cert.strict_progress,
            "sigma_invariant": cert.sigma_invariant,
            "cone_membership": cert.cone_membership,
            "drift_within": cert.drift_within,
            "iterations_within": cert.iterations_within,
            "generic": cert.generic,
            "distance_within": cert.distance_within,
            "all": cert.all(),
        },
    }))
}

pub fn resolution(r: &Resolution, delta: &BigRat) -> Result<Value> {
    let faces: Vec<Value> = r
        .labelled
        .classes
        .iter()
        .map(|layer| {
            Value::Array(
                layer
                    .iter()
                    .map(|f| {
                        json!({
                            "vertices": int_rows(&f.vertices),
                            "vertex_labels": int_rows(&f.vertex_labels),
                            "label": ints(&f.label),
                        })
                    })
                    .collect(),
            )
        })
        .collect();
    let usizes = |v: &[usize]| Value::Array(v.iter().map(|&x| int64(x as i64)).collect());
    Ok(json!({
        "presentation": presentation(&r.presentation),
        "deformation": deformation(&r.deformation, delta)?,
        "scarf": {
            "f_vector": usizes(&r.scarf.f_vector()),
            "homology": usizes(&r.quotient_homology),
            "euler_characteristic": int64(r.scarf.euler_characteristic()),
        },
        "initial_ideal": {
            "generators": int_rows(r.initial_ideal.generators()),
            "scarf_f_vector": usizes(&r.initial_scarf_f_vector),
        },
        "faces": faces,
        "ranks": usizes(&r.complex.ranks()),
        "exact": r.exact,
        "betti": usizes(&r.betti),
    }))
}

pub fn pitfall(p: &PitfallReport) -> Value {
    let gens: Vec<Value> = p
        .generators
        .iter()
        .map(|(a, b)| json!({"plus": ints(a), "minus": ints(b)}))
        .collect();
    let conclusion = if p.not_saturated() {
        format!(
            "I_{k} is not saturated with respect to x0*x1*x2*x3, hence not a lattice ideal: \
             x1^2*x2^{} - x0^{}*x3^2 lies in the saturation but not in I_{k}",
            p.k + 1,
            p.k + 1,
            k = p.k
        )
    } else {
        "the non-saturation argument does not apply".to_string()
    };
    json!({
        "k": int64(p.k),
        "generators": gens,
        "witness": ints(&p.witness),
        "coefficients": Value::Array(p.coefficients.iter().map(rat).collect()),
        "in_lattice": p.in_lattice,
        "monomial": ints(&p.monomial),
        "leading_divides": p.leading_divides,
        "any_term_divides": p.any_term_divides,
        "saturated": !p.not_saturated(),
        "conclusion": conclusion,
    })
}

pub fn error(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), Value::String(e.kind().into()));
    m.insert("message".into(), Value::String(e.to_string()));
    json!({ "error": Value::Object(m) })
}

/// Recomputes `Σ` of a Laplacian read from JSON, for round-trip checks.
pub fn sigma_of(q: &LaplacianMatrix) -> Result<Value> {
    Ok(Value::Array(left_kernel_sigma(q)?.entries().iter().map(int).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_numbers_and_strings() {
        let v: Value = serde_json::from_str(r#"[[5,"-3","-2"],["-1",3,-2],[-1,-1,"2/1"]]"#).unwrap();
        match read_input(&v).unwrap() {
            Input::Laplacian(q) => assert_eq!(sigma_of(&q).unwrap(), json!(["1", "2", "3"])),
            Input::Lattice(_) => panic!("should read as a Laplacian"),
        }
    }

    #[test]
    fn basis_input() {
        let v = json!({"basis": [[-1, 3, -2], [-1, -1, 2]]});
        let l = read_input(&v).unwrap().lattice().unwrap();
        assert_eq!(l.index(), BigInt::from(4));
    }

    #[test]
    fn digraph_input() {
        let v = json!({"n": 1, "edges": [[0, 1, "1/2"], [1, 0, "1"]]});
        let q = read_input(&v).unwrap().laplacian().unwrap();
        assert_eq!(q.get(0, 0), &BigRat::new(1.into(), 2.into()));
        assert_eq!(sigma_of(&q).unwrap(), json!(["2", "1"]));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_rational("1/0"), Err(Error::InvalidInput(_))));
        assert!(matches!(read_rational(&json!(1.5)), Err(Error::InvalidInput(_))));
        assert!(matches!(read_input(&json!({"foo": 1})), Err(Error::InvalidInput(_))));
        assert!(matches!(read_input(&json!([[1, 2], [3]])), Err(Error::InvalidInput(_))));
    }

    proptest! {
        #[test]
        fn rational_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
            let r = BigRat::new(p.into(), q.into());
            prop_assert_eq!(read_rational(&rat(&r)).unwrap(), r);
        }

        #[test]
        fn big_integer_round_trip(digits in "[1-9][0-9]{0,60}", neg in any::<bool>()) {
            let s = if neg { format!("-{digits}") } else { digits };
            let b = BigInt::from_str(&s).unwrap();
            prop_assert_eq!(read_int(&int(&b)).unwrap(), b);
        }
    }
}
