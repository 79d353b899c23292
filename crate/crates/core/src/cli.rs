//! Command-line front end. [`run`] is pure: the binary only handles
//! argument parsing and I/O, so the same (config, input) pair always gives
//! the same document and exit code.

use serde_json::{json, Value};

use crate::chipfiring::ChipGame;
use crate::deformation::{apply_template, deform_laplacian, stable_sequence_from};
use crate::error::{Error, Result};
use crate::exact::BigRat;
use crate::groebner::{check_spairs, grobner_basis, spanning_tree_order, TermOrder};
use crate::json::{self, read_input};
use crate::laplacianize::laplacianize;
use crate::pipeline::{resolve_deformation, ResolveOptions};
use crate::pitfall::pitfall_demo;
use crate::scarf::Field;

pub const FINGERPRINT: &str = "\
firing box: f in prod [0, sigma_i], f_0 = 0, lexicographic scan
superstabilize: single-vertex firings from v_n down to v_1, then first legal f of the box
genericity scan: first x of the box (excluding 0 and sigma) in lex order, smallest i with Q^T x vanishing
j choice: smallest j with x_j/sigma_j != x_i/sigma_i
epsilon: largest power of two not above half of min(sign-flip ratios, delta/(|Q_hat|_1 (n+1) prod sigma))
stable sequence: level l replays the step template with epsilon_r * 2^-l
term order: grevlex; default ranking v_1 > ... > v_n > v_0; deformed ideals use the spanning-tree order
exactness: acyclicity of <= b subcomplexes, rank mod 2147483647 with exact fallback";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrobnerOrder {
    Standard,
    SpanningTree,
    Ranking(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Laplacianize,
    Superstabilize { config: Vec<i64> },
    Grobner { order: GrobnerOrder, check_spairs: bool },
    Deform { levels: Option<usize> },
    Resolve,
    DemoPitfall { k: i64 },
}

impl Command {
    pub fn needs_input(&self) -> bool {
        !matches!(self, Command::DemoPitfall { .. })
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub command: Command,
    pub delta: BigRat,
    pub seed: u64,
    pub field: Field,
    /// Explicit deformation steps `(i, j)` with their ε; empty means run
    /// the algorithm.
    pub template: Vec<(usize, usize)>,
    pub epsilons: Vec<BigRat>,
}

impl PipelineConfig {
    pub fn new(command: Command) -> Self {
        PipelineConfig {
            command,
            delta: BigRat::from_integer(1.into()),
            seed: 0,
            field: Field::Rationals,
            template: Vec::new(),
            epsilons: Vec::new(),
        }
    }
}

/// Parses `"i,j"`.
pub fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("expected i,j, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn parse_order(s: &str) -> Result<GrobnerOrder> {
    match s {
        "standard" => Ok(GrobnerOrder::Standard),
        "tree" | "spanning-tree" => Ok(GrobnerOrder::SpanningTree),
        _ => s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(GrobnerOrder::Ranking)
            .map_err(|_| Error::InvalidInput(format!("unknown order {s:?}"))),
    }
}

pub fn run(config: &PipelineConfig, input: &Value) -> (Value, i32) {
    match run_inner(config, input) {
        Ok(v) => (v, 0),
        Err(e) => (json::error(&e), e.exit_code()),
    }
}

fn run_inner(config: &PipelineConfig, input: &Value) -> Result<Value> {
    if config.template.len() != config.epsilons.len() {
        return Err(Error::InvalidInput("each --template step needs one --epsilon".into()));
    }
    if let Command::DemoPitfall { k } = config.command {
        return Ok(json::pitfall(&pitfall_demo(k)?));
    }
    let parsed = read_input(input)?;
    match &config.command {
        Command::Laplacianize => Ok(json::presentation(&laplacianize(&parsed.lattice()?)?)),
        Command::Superstabilize { config: c } => {
            let p = parsed.presentation()?;
            let game = ChipGame::new(&p.q, &p.sigma)?;
            if c.len() != game.size() {
                return Err(Error::InvalidInput(format!("config has {} entries, expected {}", c.len(), game.size())));
            }
            Ok(json::stabilization(c, &game.superstabilize(c)?))
        }
        Command::Grobner { order, check_spairs: check } => {
            let p = parsed.presentation()?;
            let vars = p.q.size();
            let ord = match order {
                GrobnerOrder::Standard => TermOrder::standard(vars),
                GrobnerOrder::SpanningTree => spanning_tree_order(&p.graph)?,
                GrobnerOrder::Ranking(r) => TermOrder::grevlex(r.clone())?,
            };
            let gb = grobner_basis(&p.q, &p.sigma, &ord)?;
            let mut out = json::grobner(&gb);
            if *check {
                out["spairs_reduce_to_zero"] = Value::Bool(check_spairs(&gb));
            }
            Ok(out)
        }
        Command::Deform { levels } => {
            let p = parsed.presentation()?;
            match levels {
                Some(k) => {
                    let seq = stable_sequence_from(&p.q, &p.sigma, &config.delta, *k)?;
                    let docs: Vec<Value> =
                        seq.iter().map(|d| json::deformation(d, &config.delta)).collect::<Result<_>>()?;
                    Ok(json!({ "levels": docs }))
                }
                None => {
                    let d = if config.template.is_empty() {
                        deform_laplacian(&p.q, &p.sigma, &config.delta)?
                    } else {
                        apply_template(&p.q, &p.sigma, &config.template, &config.epsilons)?
                    };
                    json::deformation(&d, &config.delta)
                }
            }
        }
        Command::Resolve => {
            let p = parsed.presentation()?;
            let d = if config.template.is_empty() {
                deform_laplacian(&p.q, &p.sigma, &config.delta)?
            } else {
                apply_template(&p.q, &p.sigma, &config.template, &config.epsilons)?
            };
            let opts = ResolveOptions {
                delta: config.delta.clone(),
                field: config.field,
                seed: config.seed,
            };
            let r = resolve_deformation(p, d, &opts)?;
            let mut out = json::resolution(&r, &config.delta)?;
            out["field"] = Value::String(config.field.name());
            Ok(out)
        }
        Command::DemoPitfall { .. } => unreachable!("handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn example() -> Value {
        json!([[5, -3, -2], [-1, 3, -2], [-1, -1, 2]])
    }

    #[test]
    fn grobner_on_example() {
        let cfg = PipelineConfig::new(Command::Grobner {
            order: GrobnerOrder::Standard,
            check_spairs: true,
        });
        let (out, code) = run(&cfg, &example());
        assert_eq!(code, 0);
        assert_eq!(out["count"], json!("11"));
        assert_eq!(out["spairs_reduce_to_zero"], json!(true));
    }

    #[test]
    fn deform_with_template() {
        let mut cfg = PipelineConfig::new(Command::Deform { levels: None });
        cfg.template = vec![(1, 2)];
        cfg.epsilons = vec![rat(1, 2)];
        let (out, code) = run(&cfg, &example());
        assert_eq!(code, 0);
        let hat = &out["steps"][0]["q_hat"];
        assert_eq!(hat[1], json!(["0", "1/2", "-1/2"]));
        assert_eq!(hat[2], json!(["0", "-1/3", "1/3"]));
        assert_eq!(out["lambda"], json!("12"));
    }

    #[test]
    fn error_codes() {
        let cfg = PipelineConfig::new(Command::Laplacianize);
        let (out, code) = run(&cfg, &json!({"nope": 1}));
        assert_eq!(code, 2);
        assert_eq!(out["error"]["kind"], json!("InvalidInput"));
        // rank-deficient lattice
        let (out, code) = run(&cfg, &json!({"basis": [[1, -1, 0], [2, -2, 0]]}));
        assert_eq!(code, 4, "{out}");
        let g = json!({"n": 2, "edges": [[0, 1, "1"], [1, 0, "1"], [1, 2, "1"]]});
        let (_, code) = run(&PipelineConfig::new(Command::Resolve), &g);
        assert_eq!(code, 3);
        let mut t = PipelineConfig::new(Command::Resolve);
        t.template = vec![(1, 2)];
        t.epsilons = vec![];
        assert_eq!(run(&t, &example()).1, 2);
    }

    #[test]
    fn pitfall_needs_no_input() {
        let (out, code) = run(&PipelineConfig::new(Command::DemoPitfall { k: 2 }), &Value::Null);
        assert_eq!(code, 0);
        assert_eq!(out["in_lattice"], json!(true));
        assert_eq!(out["saturated"], json!(false));
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_pair("1, 2").unwrap(), (1, 2));
        assert!(parse_pair("1").is_err());
        assert_eq!(parse_order("2,0,1").unwrap(), GrobnerOrder::Ranking(vec![2, 0, 1]));
        assert_eq!(parse_order("tree").unwrap(), GrobnerOrder::SpanningTree);
    }
}
