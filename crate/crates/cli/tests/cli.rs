use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn agcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agcodes")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/golden")
        .join(name);
    fs::read_to_string(path).unwrap()
}

#[test]
fn build_then_replay_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rs.code");
    let out_s = out.to_str().unwrap();
    let r = agcodes(&["goppa", "build", "--q", "5", "--divisor", "inf:2", "--out", out_s]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(summary["measured_distance"], "3");
    let manifest = format!("{out_s}.manifest.json");
    let original = fs::read_to_string(&out).unwrap();

    let again = dir.path().join("again.code");
    let r = agcodes(&["replay", "manifest", &manifest, "--out", again.to_str().unwrap()]);
    assert_eq!(code(&r), 0);
    assert_eq!(fs::read_to_string(&again).unwrap(), original);
    assert_eq!(fs::read_to_string(&out).unwrap(), golden("goppa_p1_q5_inf2.code"));

    let r = agcodes(&["verify", "distance", out_s]);
    assert_eq!(code(&r), 0);
    let r = agcodes(&["verify", "averaging", &manifest]);
    assert_eq!(code(&r), 2, "averaging does not apply to Goppa codes");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.code");
    let out_s = out.to_str().unwrap();
    // precondition: deg D >= N
    assert_eq!(
        code(&agcodes(&[
            "goppa",
            "build",
            "--q",
            "5",
            "--divisor",
            "inf:9",
            "--out",
            out_s
        ])),
        2
    );
    assert!(!out.exists());
    // usage error from argument parsing
    assert_eq!(code(&agcodes(&["goppa", "build", "--q", "5"])), 2);
    // missing input file
    assert_eq!(code(&agcodes(&["verify", "distance", "/nonexistent/file.code"])), 1);

    // a code file whose claimed distance is raised past the truth
    let tampered = golden("goppa_p1_q5_inf2.code").replace("claimed_distance: 3", "claimed_distance: 4");
    fs::write(&out, tampered).unwrap();
    assert_eq!(code(&agcodes(&["verify", "distance", out_s])), 3);

    // a manifest whose digest no longer matches
    let manifest = golden("goppa_p1_q5_inf2.code.manifest.json");
    let digest: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    let sha = digest["code_sha256"].as_str().unwrap();
    let bad = dir.path().join("bad.manifest.json");
    fs::write(&bad, manifest.replace(sha, &"0".repeat(64))).unwrap();
    let r = agcodes(&["replay", "manifest", bad.to_str().unwrap(), "--out", out_s]);
    assert_eq!(code(&r), 3);
}

#[test]
fn frontier_table_matches_golden() {
    let r = agcodes(&["bounds", "table", "--q", "49"]);
    assert_eq!(code(&r), 0);
    assert_eq!(String::from_utf8(r.stdout).unwrap(), golden("frontier_q49.csv"));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("c{threads}.code"));
        let r = Command::new(env!("CARGO_BIN_EXE_agcodes"))
            .env("AGCODES_THREADS", threads)
            .args([
                "combined", "build", "--q", "4", "--h", "2", "--s0", "1", "--d0", "2", "--out",
            ])
            .arg(&out)
            .output()
            .unwrap();
        assert_eq!(code(&r), 0);
        texts.push(fs::read_to_string(&out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    assert_eq!(texts[0], golden("combined_q4_h2.code"));
}

#[test]
fn info_commands() {
    let r = agcodes(&["curve", "info", "--curve", "hermitian", "--q", "9"]);
    assert_eq!(code(&r), 0);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["points"], 28);
    assert_eq!(code(&agcodes(&["field", "selftest", "--q", "16"])), 0);
    let r = agcodes(&["bounds", "crossing", "--q", "25"]);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["crosses"], false);
}
