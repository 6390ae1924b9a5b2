//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixtures")
}

pub fn fixture_config() -> PathBuf {
    fixtures().join("fixture.toml")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn emotopic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emotopic"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("spawn emotopic")
}

/// Run and fail with the captured stderr unless the exit code is 0.
pub fn emotopic_ok(args: &[&str]) -> Result<Output, String> {
    let out = emotopic(args);
    if out.status.success() {
        Ok(out)
    } else {
        Err(format!(
            "`emotopic {}` exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

/// Report files compared byte for byte against `tests/golden/`.
pub const GOLDEN_FILES: &[&str] = &[
    "emotion_distribution.csv",
    "emotion_intensity.csv",
    "emotion_top_words_idd.csv",
    "emotion_top_words_peer.csv",
    "emotions.json",
    "emotion_intensity.svg",
    "sentiment_series.csv",
    "sentiment_cross_case.csv",
    "sentiment.json",
    "sentiment.svg",
    "topics_idd_k5_top_terms.csv",
    "topics_idd_k5_document_topics.csv",
    "topics_idd_k5.svg",
    "topics_peer_k8_top_terms.csv",
    "topics_peer_k8_document_topics.csv",
    "topics_peer_k8.svg",
];

/// All three analyses over the shipped fixture, as in the README.
pub fn run_fixture_pipeline(out: &Path) -> Result<(), String> {
    let cfg = fixture_config();
    let cfg = cfg.to_str().unwrap();
    let out = out.to_str().unwrap();
    emotopic_ok(&["emotions", "--config", cfg, "--out", out])?;
    emotopic_ok(&["sentiment", "--config", cfg, "--out", out])?;
    emotopic_ok(&["topics", "--config", cfg, "--out", out, "--cohort", "idd", "-k", "5"])?;
    emotopic_ok(&["topics", "--config", cfg, "--out", out, "--cohort", "peer", "-k", "8"])?;
    Ok(())
}

/// Compare each golden file with the one in `out`. With `UPDATE_GOLDEN=1`
/// the goldens are rewritten instead.
pub fn check_golden(out: &Path) -> Result<(), String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1");
    let dir = golden_dir();
    let mut problems = Vec::new();
    for name in GOLDEN_FILES {
        let actual = std::fs::read_to_string(out.join(name)).map_err(|e| format!("{name}: {e}"))?;
        let path = dir.join(name);
        if update {
            std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            std::fs::write(&path, &actual).map_err(|e| e.to_string())?;
            continue;
        }
        let expected = std::fs::read_to_string(&path)
            .map_err(|e| format!("{}: {e} (run with UPDATE_GOLDEN=1 to create)", path.display()))?;
        if expected != actual {
            let line = expected
                .lines()
                .zip(actual.lines())
                .position(|(a, b)| a != b)
                .map_or_else(|| "length".to_string(), |i| format!("line {}", i + 1));
            problems.push(format!("{name} differs at {line}"));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems.join("; "))
    }
}
