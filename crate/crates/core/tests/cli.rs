use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn filtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filtk")).args(args).output().unwrap()
}

fn fx(args: &[&str]) -> Output {
    let owned: Vec<String> =
        args.iter().map(|a| if a.ends_with(".json") && !a.contains('/') { fixture(a).display().to_string() } else { a.to_string() }).collect();
    let refs: Vec<&str> = owned.iter().map(|s| s.as_str()).collect();
    filtk(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn space_reports() {
    let o = fx(&["space", "diamond.json"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("unique_path: false"));
    assert!(out.contains("two_paths"));
    assert!(stdout(&fx(&["space", "chain4.json"])).contains("accordion: true"));
    let q = stdout(&fx(&["space", "q_space.json"]));
    assert!(q.contains("ebp: false") && q.contains("unique_path: true"));
}

#[test]
fn space_json_lines_parse() {
    let o = fx(&["--json", "space", "pseudocircle.json"]);
    assert_eq!(code(&o), 0);
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["class"]["ebp"], true);
        assert_eq!(v["locally_closed"], 16);
    }
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&fx(&["check", "sierpinski_extension_st.json"])), 0);
    for k in ["b", "r", "tb"] {
        assert_eq!(code(&fx(&["check", &format!("sierpinski_extension_{k}.json"), "--kind", k])), 0);
    }
    let bad = fx(&["check", "chain3_extension_perturbed_delta_st.json"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("(7)"));

    let junk = scratch("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&filtk(&["check", junk.to_str().unwrap()])), 2);
    assert_eq!(code(&filtk(&["check", "/no/such/file.json"])), 2);
    assert_eq!(code(&fx(&["check", "sierpinski_extension_st.json", "--kind", "b"])), 2);
    assert_eq!(code(&filtk(&["frobnicate"])), 2);
}

#[test]
fn extend_writes_a_verified_module() {
    let out = scratch("extended.json");
    let o = fx(&["extend", "sierpinski_extension_b.json", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (m, _) = filtk::invariants::load_module(&out).unwrap();
    assert!(m.st_group(m.space().all(), 0).is_trivial());
    assert_eq!(code(&filtk(&["check", out.to_str().unwrap()])), 0);
    // ST input is not a B-module
    assert_ne!(code(&fx(&["extend", "sierpinski_extension_st.json", "-o", out.to_str().unwrap()])), 0);
}

#[test]
fn lift_identity() {
    let out = scratch("lifted.json");
    let o = fx(&["lift", "--map", "lift_identity_map.json", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("isomorphism: true") && text.contains("identity: true"));
    assert!(out.exists());
}

#[test]
fn classify_pointed_fixture() {
    let o = fx(&["classify", "one_point_z2_z2_pointed_st.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("phantom criteria: satisfied"));

    let o = fx(&["classify", "chain3_point_1_odd_z2_st.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn selftest_is_deterministic() {
    let a = filtk(&["--json", "selftest", "--seed", "7"]);
    let b = filtk(&["--json", "selftest", "--seed", "7"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 9);
}

#[test]
fn selftest_with_corrupted_fixtures_fails() {
    let dir = scratch("corrupt");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("diamond.json"), "{").unwrap();
    let o = filtk(&["selftest", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("[FAIL] 2."));
}
