use serde_json::Value;
use wittkit_cli::run;

fn args(line: &str) -> Vec<String> {
    std::iter::once("wittkit".to_string()).chain(line.split_whitespace().map(String::from)).collect()
}

fn code(line: &str) -> i32 {
    run(args(line))
}

/// Runs with --json --out and returns the machine report.
fn machine(line: &str) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let mut a = args(line);
    a.push("--json".into());
    a.push("--out".into());
    a.push(path.to_str().unwrap().into());
    let c = run(a);
    let text = std::fs::read_to_string(&path).unwrap();
    (c, serde_json::from_str(&text).unwrap())
}

#[test]
fn orbit_dim_example() {
    let (c, v) = machine("ore orbit-dim --type 2,0 --n 2 --r 1");
    assert_eq!(c, 0);
    assert_eq!(v["outputs"]["dim"], 2);
}

#[test]
fn canonical_weight_example() {
    let (c, v) = machine("rla canonical-weight --n 2 --r 1 --p 2");
    assert_eq!(c, 0);
    assert_eq!(v["outputs"]["mixed"], -6);
    assert_eq!(v["outputs"]["equal_char"], -2);
}

#[test]
fn homdim_values() {
    assert_eq!(machine("lattice homdim --type 2,0 --n 2").1["outputs"]["dim"], 2);
    assert_eq!(machine("lattice homdim --type 1,1 --n 2").1["outputs"]["dim"], 4);
}

#[test]
fn atlas_counts() {
    let (c, v) = machine("atlas --n 2 --r 1 --p 2");
    assert_eq!(c, 0);
    let types = v["outputs"]["types"].as_array().unwrap();
    let points: Vec<(Value, Value)> = types.iter().map(|t| (t["type"].clone(), t["points"].clone())).collect();
    assert_eq!(points, vec![(serde_json::json!([2, 0]), 6.into()), (serde_json::json!([1, 1]), 1.into())]);
}

#[test]
fn exit_codes() {
    assert_eq!(code("lattice ci-check"), 2);
    assert_eq!(code("lattice ci-check --seed 5 --trials 10"), 0);
    assert_eq!(code("verify nonsense --seed 1"), 2);
    assert_eq!(code("plin lattice --input {\"n\":2,\"rows\":[[1,0],[0,0]]}"), 2);
    assert_eq!(code("witt add --a 1,1 --b 1"), 2);
    assert_eq!(code("no-such-command"), 2);
}

#[test]
fn failing_check_exits_one() {
    assert_eq!(code("verify transport --seed 1"), 1);
}

#[test]
fn machine_output_is_byte_stable() {
    let once = |_: ()| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let mut a = args("verify family --seed 11");
        a.push("--out".into());
        a.push(path.to_str().unwrap().into());
        run(a);
        std::fs::read(&path).unwrap()
    };
    assert_eq!(once(()), once(()));
}

#[test]
fn plin_round_trip_through_json() {
    let (c, v) = machine("plin lattice --p 2 --m 2 --input {\"n\":2,\"rows\":[[0,3],[0,0]]}");
    assert_eq!(c, 0);
    let lat = v["outputs"]["lattice"].to_string();
    let (c2, back) = machine(&format!("plin inverse --p 2 --m 2 --input {lat}"));
    assert_eq!(c2, 0);
    assert_eq!(back["outputs"]["map"]["rows"], serde_json::json!([[0, 3], [0, 0]]));
}

#[test]
fn witt_digits_of_five() {
    let (_, v) = machine("witt digits --p 2 --s 3 --coeffs 5");
    assert_eq!(v["outputs"]["digits"], serde_json::json!([1, 0, 1]));
}
