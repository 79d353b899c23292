use std::io::Write;
use std::process::{Command, Output, Stdio};

use latdeform::deformation::hat_laplacian;
use latdeform::digraph::SigmaVector;
use latdeform::json::{self, read_input, Input};
use serde_json::{json, Value};

const EXAMPLE: &str = "[[5,-3,-2],[-1,3,-2],[-1,-1,2]]";

fn latdeform(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_latdeform"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // the binary may exit before reading stdin
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn grobner_lists_eleven_binomials() {
    let out = latdeform(&["grobner", "--order", "tree", "--check-spairs"], EXAMPLE);
    assert_eq!(out.status.code(), Some(0));
    let d = doc(&out);
    assert_eq!(d["binomials"].as_array().unwrap().len(), 11);
    assert_eq!(d["spairs_reduce_to_zero"], json!(true));
    assert!(d["binomials"].as_array().unwrap().iter().any(|b| b["u"] == json!(["-1", "-1", "2"])
        || b["u"] == json!(["1", "1", "-2"])));
}

#[test]
fn deform_step_log() {
    let sigma = SigmaVector::from_i64(&[1, 2, 3]).unwrap();
    let out = latdeform(&["deform", "--delta", "1"], EXAMPLE);
    assert_eq!(out.status.code(), Some(0));
    let d = doc(&out);
    assert_eq!(d["certificate"]["all"], json!(true));
    for step in d["steps"].as_array().unwrap() {
        let (i, j) = (json::read_i64(&step["i"]).unwrap() as usize, json::read_i64(&step["j"]).unwrap() as usize);
        let hat = json::matrix(hat_laplacian(i, j, &sigma).unwrap().matrix());
        assert_eq!(step["q_hat"], hat);
        assert!(!step["violation"].is_null());
    }

    let out = latdeform(&["deform", "--template", "1,2", "--epsilon", "1/2"], EXAMPLE);
    let d = doc(&out);
    assert_eq!(d["steps"][0]["q_hat"], json::matrix(hat_laplacian(1, 2, &sigma).unwrap().matrix()));
    assert_eq!(d["lambda"], json!("12"));
    assert_eq!(
        d["scaled"],
        json!([["60", "-36", "-24"], ["-12", "39", "-27"], ["-12", "-14", "26"]])
    );
}

#[test]
fn resolve_reports_ranks_and_betti() {
    let out = latdeform(&["resolve"], EXAMPLE);
    assert_eq!(out.status.code(), Some(0));
    let d = doc(&out);
    assert_eq!(d["ranks"], json!(["1", "3", "2"]));
    assert_eq!(d["betti"], json!(["1", "2", "1"]));
    assert_eq!(d["exact"], json!(true));
    assert_eq!(d["faces"].as_array().unwrap().len(), 3);

    let out = latdeform(&["resolve", "--field", "F3"], EXAMPLE);
    assert_eq!(doc(&out)["betti"], json!(["1", "2", "1"]));
    assert_eq!(doc(&out)["field"], json!("F3"));
}

#[test]
fn output_is_reproducible() {
    let args: [&[&str]; 3] = [&["resolve"], &["resolve", "--threads", "1"], &["resolve", "--threads", "4"]];
    let outs: Vec<Vec<u8>> = args.iter().map(|a| latdeform(a, EXAMPLE).stdout).collect();
    assert!(!outs[0].is_empty());
    assert!(outs.iter().all(|o| o == &outs[0]));
    assert_eq!(latdeform(&["resolve"], EXAMPLE).stdout, outs[0]);
}

#[test]
fn numbers_round_trip() {
    let d = doc(&latdeform(&["deform"], EXAMPLE));
    // every rational parses back, and the emitted Laplacian reads back to itself
    match read_input(&d["q_gen"]).unwrap() {
        Input::Laplacian(q) => assert_eq!(json::matrix(q.matrix()), d["q_gen"]),
        Input::Lattice(_) => panic!("q_gen must read as a Laplacian"),
    }
    let fed = latdeform(&["grobner", "--order", "tree"], &d["scaled"].to_string());
    assert_eq!(fed.status.code(), Some(0));
    assert!(doc(&fed)["binomials"]
        .as_array()
        .unwrap()
        .iter()
        .all(|b| b["u"].as_array().unwrap().iter().all(|x| x != "0")));
}

#[test]
fn exit_codes() {
    let out = latdeform(&["resolve"], "not json");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(doc(&out)["error"]["kind"], json!("InvalidInput"));

    let broken = r#"{"n": 2, "edges": [[0, 1, 1], [1, 0, 1], [1, 2, 1]]}"#;
    assert_eq!(latdeform(&["grobner"], broken).status.code(), Some(3));

    let thin = r#"{"basis": [[1, -1, 0], [2, -2, 0]]}"#;
    assert_eq!(latdeform(&["laplacianize"], thin).status.code(), Some(4));

    let partial = latdeform(&["deform", "--template", "2,0", "--epsilon", "1/128"], EXAMPLE);
    assert_eq!(partial.status.code(), Some(5));
    assert_eq!(doc(&partial)["error"]["kind"], json!("NonGenericResult"));

    assert_eq!(latdeform(&["deform", "--delta", "-1"], EXAMPLE).status.code(), Some(2));
    assert_eq!(latdeform(&["resolve", "--field", "F4"], EXAMPLE).status.code(), Some(2));
    assert_eq!(latdeform(&["superstabilize", "--config", "[1,2]"], EXAMPLE).status.code(), Some(2));
}

#[test]
fn files_and_version() {
    let dir = std::env::temp_dir().join(format!("latdeform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("in.json");
    let output = dir.join("out.json");
    std::fs::write(&input, r#"{"basis": [[-1, 3, -2], [-1, -1, 2]]}"#).unwrap();
    let out = latdeform(
        &["laplacianize", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(d["index"], json!("4"));
    assert_eq!(d["sigma"][0], json!("1"));
    std::fs::remove_dir_all(&dir).unwrap();

    let v = latdeform(&["--version"], "");
    let text = String::from_utf8(v.stdout).unwrap();
    assert!(text.starts_with(concat!("latdeform ", env!("CARGO_PKG_VERSION"))));
    assert!(text.contains("epsilon"));
}

#[test]
fn superstabilize_and_pitfall() {
    let out = latdeform(&["superstabilize", "--config", "[0, 1, 2]"], EXAMPLE);
    let d = doc(&out);
    let q = [[5i64, -3, -2], [-1, 3, -2], [-1, -1, 2]];
    let int = |v: &Value| -> Vec<i64> { v.as_array().unwrap().iter().map(|x| json::read_i64(x).unwrap()).collect() };
    let (fin, script) = (int(&d["final"]), int(&d["script"]));
    for i in 0..3 {
        let fired: i64 = (0..3).map(|k| q[k][i] * script[k]).sum();
        assert_eq!(fin[i], [0, 1, 2][i] - fired);
    }
    assert!(fin[1..].iter().all(|&x| x >= 0));

    for k in ["2", "3"] {
        let d = doc(&latdeform(&["demo-pitfall", "--k", k], ""));
        assert_eq!(d["in_lattice"], json!(true));
        assert_eq!(d["leading_divides"], json!([false, false, false]));
        assert_eq!(d["saturated"], json!(false));
    }
}
