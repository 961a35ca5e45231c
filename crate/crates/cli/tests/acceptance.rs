//! Acceptance criterion 8: determinism of the full verification run.

use std::process::Command;
use std::time::Instant;

/// Two runs of `verify --suite all --seed 42` produce byte-identical JSON
/// reports.
#[test]
fn criterion_8_byte_identical_reports() {
    let started = Instant::now();
    let dir = std::env::temp_dir().join("eulersum-acceptance");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let paths = [dir.join("run-a.json"), dir.join("run-b.json")];
    for path in &paths {
        let out = Command::new(env!("CARGO_BIN_EXE_eulersum"))
            .args([
                "verify",
                "--suite",
                "all",
                "--seed",
                "42",
                "--out",
                path.to_str().expect("utf-8 path"),
            ])
            .env_remove("EULERSUM_PRECISION")
            .output()
            .expect("binary runs");
        assert_eq!(
            out.status.code(),
            Some(0),
            "verification failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = std::fs::read(&paths[0]).expect("first report");
    let b = std::fs::read(&paths[1]).expect("second report");
    assert!(!a.is_empty());
    assert_eq!(a, b, "criterion 8: FAIL — reports differ");
    println!(
        "criterion 8 (byte-identical verification reports): PASS ({:.1}s)",
        started.elapsed().as_secs_f64()
    );
}
