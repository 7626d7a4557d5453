use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_ffec");
const SAMPLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample_corpus.json");

fn run(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn conductor_verb() {
    let (ok, out, _) = run(&["conductor", "--input", SAMPLE, "--id", "ex1"]);
    assert!(ok);
    assert!(out.starts_with("curve_id,place,deg_v,v_delta,type,n_v,a_v\n"));
    assert!(out.contains("ex1,\"2,1\",1,1,mult_split,1,1"));
}

#[test]
fn lpoly_and_rank_verbs() {
    let (ok, out, _) = run(&["lpoly", "--input", SAMPLE, "--id", "ex1"]);
    assert!(ok && out.contains("L: [1, -5]") && out.contains("truncation_ok: true"));
    let (ok, out, _) = run(&["rank", "--input", SAMPLE, "--id", "ex1"]);
    assert!(ok && out.contains("rank_an: 1"));
}

#[test]
fn points_and_heights_verbs() {
    let (ok, out, _) = run(&["points", "--input", SAMPLE, "--id", "ex1", "--max-deg", "0"]);
    assert!(ok);
    assert!(out.contains("ex1,0,1,0,0.5,false") && out.contains("ex1,0,4,0,0.5,false"));
    let (ok, out, _) = run(&["heights", "--input", SAMPLE, "--id", "ex1", "--point", "0;1"]);
    assert!(ok && out.contains("0;1,0,0.5,"));
    let (ok, _, err) = run(&["points", "--input", SAMPLE, "--id", "ex1", "--max-deg", "7"]);
    assert!(!ok && err.contains("--force"));
}

#[test]
fn packing_verb() {
    let (ok, out, _) = run(&["packing", "--n", "1", "--eps", "0.2", "--samples", "1000"]);
    assert!(ok);
    assert!(out.contains("1,0.2,1,2.71828,6,21,1000,0,"));
}

#[test]
fn report_verb_writes_csv_and_json() {
    let dir = std::env::temp_dir().join(format!("ffec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.csv");
    let (ok, _, err) = run(&["report", "--random", "5", "2", "1", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert!(ok, "{err}");
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(std::fs::read_to_string(dir.join("report.json")).unwrap().contains("\"rows\""));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bad_input_is_diagnosed() {
    let dir = std::env::temp_dir().join(format!("ffec-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.json");
    std::fs::write(&p, "{\"q\": 5,\n \"curves\": [\n {\"id\": \"x\", \"a\": 1}]}").unwrap();
    let (ok, _, err) = run(&["report", "--input", p.to_str().unwrap()]);
    assert!(!ok && err.contains("line 3"), "{err}");
    std::fs::remove_dir_all(dir).unwrap();
}
