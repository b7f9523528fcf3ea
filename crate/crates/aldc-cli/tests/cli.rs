//! End-to-end command line tests: file round trips, exit codes, and
//! experiment determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aldc"))
}

struct WorkDir(PathBuf);

impl WorkDir {
    fn new(tag: &str) -> WorkDir {
        let dir = std::env::temp_dir().join(format!("aldc-cli-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        WorkDir(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for WorkDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

/// Packs a message of `k` bits (pattern) into the bit-file format.
fn write_message(path: &Path, k: usize) {
    let mut bytes = (k as u64).to_le_bytes().to_vec();
    let mut body = vec![0u8; k / 8];
    for (i, b) in body.iter_mut().enumerate() {
        *b = (i as u8).wrapping_mul(29) ^ 0x5A;
    }
    bytes.extend_from_slice(&body);
    fs::write(path, bytes).unwrap();
}

#[test]
fn validate_default_configs() {
    for code in ["paldc", "insdel_paldc", "raldc_hamming", "raldc_insdel"] {
        let out = bin().args(["validate", "--code", code]).output().unwrap();
        assert!(out.status.success(), "{code}: {out:?}");
    }
}

#[test]
fn validate_rejects_bad_config_with_exit_2() {
    let dir = WorkDir::new("badcfg");
    let cfg = dir.path("bad.cfg");
    fs::write(&cfg, "code = paldc\nsubblock_bits = 48\nk = 2048\n").unwrap();
    let out = bin()
        .args(["validate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn paldc_encode_decode_round_trip_via_files() {
    let dir = WorkDir::new("paldc-rt");
    let msg = dir.path("msg.bits");
    write_message(&msg, 2048);
    let cfg = dir.path("cfg");
    fs::write(&cfg, "code = paldc\nk = 2048\n").unwrap();

    let status = bin()
        .args(["encode", "--config"])
        .arg(&cfg)
        .args(["--in"])
        .arg(&msg)
        .args(["--out"])
        .arg(dir.path("code.bits"))
        .args(["--key"])
        .arg(dir.path("key.bin"))
        .status()
        .unwrap();
    assert!(status.success());

    let status = bin()
        .args(["decode", "--config"])
        .arg(&cfg)
        .args(["--in"])
        .arg(dir.path("code.bits"))
        .args(["--out"])
        .arg(dir.path("back.bits"))
        .args(["--key"])
        .arg(dir.path("key.bin"))
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        fs::read(&msg).unwrap(),
        fs::read(dir.path("back.bits")).unwrap()
    );
}

#[test]
fn insdel_corrupt_then_decode_succeeds() {
    let dir = WorkDir::new("insdel-rt");
    let msg = dir.path("msg.bits");
    write_message(&msg, 2048);
    let cfg = dir.path("cfg");
    fs::write(
        &cfg,
        "code = insdel_paldc\nk = 2048\ntau = 64\nsubblock_bits = 128\n\
         ecc_code_symbols = 128\necc_message_symbols = 64\n",
    )
    .unwrap();

    assert!(bin()
        .args(["encode", "--config"])
        .arg(&cfg)
        .args(["--in"])
        .arg(&msg)
        .args(["--out"])
        .arg(dir.path("code.bits"))
        .args(["--key"])
        .arg(dir.path("key.bin"))
        .status()
        .unwrap()
        .success());

    assert!(bin()
        .args(["corrupt", "--config"])
        .arg(&cfg)
        .args(["--in"])
        .arg(dir.path("code.bits"))
        .args(["--out"])
        .arg(dir.path("noisy.bits"))
        .args(["--script"])
        .arg(dir.path("edits.txt"))
        .args([
            "--strategy",
            "burst_delete",
            "--delta",
            "0.0001",
            "--seed",
            "5"
        ])
        .status()
        .unwrap()
        .success());

    assert!(bin()
        .args(["decode", "--config"])
        .arg(&cfg)
        .args(["--in"])
        .arg(dir.path("noisy.bits"))
        .args(["--out"])
        .arg(dir.path("back.bits"))
        .args(["--key"])
        .arg(dir.path("key.bin"))
        .status()
        .unwrap()
        .success());
    assert_eq!(
        fs::read(&msg).unwrap(),
        fs::read(dir.path("back.bits")).unwrap()
    );

    // classify over the artifacts written above
    let out = bin()
        .args(["classify", "--config"])
        .arg(&cfg)
        .args(["--clean"])
        .arg(dir.path("code.bits"))
        .args(["--corrupted"])
        .arg(dir.path("noisy.bits"))
        .args(["--script"])
        .arg(dir.path("edits.txt"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("gamma-bad fraction"), "{text}");
}

#[test]
fn destroyed_codeword_exits_1() {
    let dir = WorkDir::new("fail");
    let msg = dir.path("msg.bits");
    write_message(&msg, 2048);
    let cfg = dir.path("cfg");
    fs::write(&cfg, "code = paldc\nk = 2048\n").unwrap();

    assert!(bin()
        .args(["encode", "--config"])
        .arg(&cfg)
        .args(["--in"])
        .arg(&msg)
        .args(["--out"])
        .arg(dir.path("code.bits"))
        .args(["--key"])
        .arg(dir.path("key.bin"))
        .status()
        .unwrap()
        .success());

    // Zero out the whole codeword body (keep the header).
    let mut bytes = fs::read(dir.path("code.bits")).unwrap();
    for b in bytes[8..].iter_mut() {
        *b = 0;
    }
    fs::write(dir.path("dead.bits"), bytes).unwrap();

    let out = bin()
        .args(["decode", "--config"])
        .arg(&cfg)
        .args(["--in"])
        .arg(dir.path("dead.bits"))
        .args(["--out"])
        .arg(dir.path("back.bits"))
        .args(["--key"])
        .arg(dir.path("key.bin"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn experiment_runs_are_deterministic() {
    let dir = WorkDir::new("exp");
    let cfg = dir.path("exp.cfg");
    fs::write(
        &cfg,
        "code = paldc\nk = 2048\nmaster_seed = 11\n\
         sweep = delta:0.002 kappa:256 strategy:uniform_random trials:6\n",
    )
    .unwrap();
    for out_name in ["a.csv", "b.csv"] {
        assert!(bin()
            .args(["experiment", "--config"])
            .arg(&cfg)
            .args(["--out"])
            .arg(dir.path(out_name))
            .status()
            .unwrap()
            .success());
    }
    let a = fs::read(dir.path("a.csv")).unwrap();
    let b = fs::read(dir.path("b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
