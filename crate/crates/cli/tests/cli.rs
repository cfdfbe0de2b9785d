// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(rel)
}

fn nassc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nassc")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stats(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn route_compliant_circuit() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("in.qasm");
    std::fs::write(
        &input,
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncx q[0],q[1];\ncx q[1],q[2];\n",
    )
    .unwrap();
    let (out, st) = (dir.path().join("out.qasm"), dir.path().join("stats.json"));
    let o = nassc(&[
        "route", "--in", s(&input), "--coupling", "linear(3)", "--router", "sabre",
        "--layout", "trivial", "--out", s(&out), "--stats", s(&st),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stats(&st);
    assert_eq!(v["swaps_inserted"], 0);
    assert_eq!(v["cnot_add"], 0);
    assert_eq!(v["final_mapping"], serde_json::json!([0, 1, 2]));
}

#[test]
fn route_three_rotations_then_verify() {
    let dir = TempDir::new().unwrap();
    let input = fixture("micro/three_rotations.qasm");
    let (out, st) = (dir.path().join("out.qasm"), dir.path().join("stats.json"));
    let o = nassc(&[
        "route", "--in", s(&input), "--coupling", "linear(3)", "--router", "nassc",
        "--layout", "trivial", "--seed", "5", "--out", s(&out), "--stats", s(&st),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stats(&st)["cnot_add"], 1);
    let o = nassc(&["verify", "--a", s(&input), "--b", s(&out), "--perm", s(&st)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_grover_on_montreal() {
    let dir = TempDir::new().unwrap();
    let input = fixture("bench/grover_4.qasm");
    let (out, st) = (dir.path().join("out.qasm"), dir.path().join("stats.json"));
    let o = nassc(&[
        "route", "--in", s(&input), "--coupling", "montreal", "--router", "nassc",
        "--seed", "2", "--out", s(&out), "--stats", s(&st),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = nassc(&["verify", "--a", s(&input), "--b", s(&out), "--perm", s(&st)]);
    assert_eq!(o.status.code(), Some(0));

    // a wrong final placement is rejected
    let mut v = stats(&st);
    let fin = v["final"].as_array_mut().unwrap();
    fin.swap(0, 1);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = nassc(&["verify", "--a", s(&input), "--b", s(&out), "--perm", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn disable_opt_and_noise_flags() {
    let dir = TempDir::new().unwrap();
    let input = fixture("micro/three_rotations.qasm");
    let noise = dir.path().join("noise.json");
    std::fs::write(
        &noise,
        r#"{"edges":[{"a":0,"b":1,"cx_error":0.01},{"a":1,"b":2,"cx_error":0.03}]}"#,
    )
    .unwrap();
    let out = dir.path().join("out.qasm");
    let o = nassc(&[
        "route", "--in", s(&input), "--coupling", "linear(3)", "--router", "nassc",
        "--disable-opt", "2q,commute1", "--noise", s(&noise), "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["cnot_total"].as_u64().unwrap() >= 4);

    let o = nassc(&[
        "route", "--in", s(&input), "--coupling", "linear(3)", "--disable-opt", "bogus",
        "--out", s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn route_reports_errors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.qasm");
    let o = nassc(&[
        "route", "--in", s(&fixture("bench/grover_4.qasm")), "--coupling", "linear(2)",
        "--out", s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
    let o = nassc(&["route", "--in", "/nonexistent.qasm", "--coupling", "linear(3)", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("spec.json");
    let json = serde_json::json!({
        "circuits": [fixture("micro/three_rotations.qasm"), fixture("bench/grover_4.qasm")],
        "topology": "grid(2,3)",
        "routers": [{"algorithm": "sabre"}, {"algorithm": "nassc"}],
        "trials": 2,
        "output": "out.csv",
    });
    std::fs::write(&spec, json.to_string()).unwrap();
    let o = nassc(&["bench", "--spec", s(&spec)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    // header, 2 circuits x 2 routers, a summary row for the non-reference router
    assert_eq!(csv.lines().count(), 1 + 4 + 1, "{csv}");
    assert!(csv.lines().last().unwrap().starts_with("geomean,nassc"));
    assert!(csv.lines().next().unwrap().starts_with("name,router"));
}
