//! Files written by the binary: `--out`, `--svg`, round-trips and seeded runs.

use std::path::{Path, PathBuf};
use std::process::Command;

use loometric::random::{clustered_space, hypercube_space};
use loometric_cli::io::{parse_space, parse_space_str, write_space, Format};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn loometric(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_loometric"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn random_spaces_round_trip_in_both_formats() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dir = tempfile::tempdir().unwrap();
    for t in 0..40 {
        let s = if t % 2 == 0 {
            hypercube_space(&mut rng, 2 + t % 9, 1 + t % 3)
        } else {
            clustered_space(&mut rng, 3, 3, 0.05 * (1 + t % 2) as f64)
        };
        for (format, ext) in [(Format::Json, "json"), (Format::Csv, "csv")] {
            let text = write_space(&s, format);
            assert_eq!(parse_space_str(&text, format, "mem").unwrap(), s);
            let file = dir.path().join(format!("s{t}.{ext}"));
            std::fs::write(&file, &text).unwrap();
            assert_eq!(parse_space(&file, Format::from_path(&file)).unwrap(), s);
        }
    }
}

#[test]
fn perturb_output_is_a_valid_injective_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let (code, _) = loometric(&["perturb", path(&fixture("cycle4.json")), "--eps", "1/8", "--seed", "3", "--out", path(&out)]);
    assert_eq!(code, 0);
    let (code, stdout) = loometric(&["pattern", path(&out)]);
    assert_eq!(code, 0);
    let json: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(json["injective"], Value::Bool(true));
    let (code, _) = loometric(&["embed-line", path(&out)]);
    assert_eq!(code, 0);
}

#[test]
fn csv_and_json_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let s = parse_space(&fixture("line4.csv"), Format::Csv).unwrap();
    let json = dir.path().join("line4.json");
    std::fs::write(&json, write_space(&s, Format::Json)).unwrap();
    let a = loometric(&["pattern", path(&fixture("line4.csv"))]);
    let b = loometric(&["pattern", path(&json)]);
    assert_eq!(a, b);
    // --format overrides the extension.
    let renamed = dir.path().join("line4.txt");
    std::fs::copy(fixture("line4.csv"), &renamed).unwrap();
    assert_eq!(loometric(&["pattern", path(&renamed), "--format", "csv"]), a);
}

#[test]
fn experiment_is_reproducible() {
    let run = |seed: &str| {
        let (code, stdout) = loometric(&["experiment", "--trials", "20", "--points", "6", "--seed", seed]);
        assert_eq!(code, 0);
        let mut json: Value = serde_json::from_str(&stdout).unwrap();
        json.as_object_mut().unwrap().remove("runtime_ms");
        json
    };
    let first = run("42");
    assert_eq!(first, run("42"));
    assert_eq!(first["injective_after_perturbation"], Value::from(20));
    assert_eq!(first["seed"], Value::from(42));
    let hits = first["mnm_hits"].as_array().unwrap();
    for n in [1, 2, 4] {
        let row: Vec<u64> = hits
            .iter()
            .filter(|c| c["N"] == Value::from(n))
            .map(|c| c["hits"].as_u64().unwrap())
            .collect();
        assert_eq!(row.len(), 4);
        assert!(row.windows(2).all(|w| w[0] <= w[1]), "N={n}: {row:?}");
    }
}

#[test]
fn svg_has_one_marker_and_label_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("cycle.svg");
    let (code, _) = loometric(&["embed", path(&fixture("cycle4.json")), "--dim", "2", "--svg", path(&svg)]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<circle").count(), 4);
    for label in ["n", "e", "s", "w"] {
        assert!(text.contains(&format!(">{label}</text>")), "missing {label}");
    }

    let line = dir.path().join("line.svg");
    let (code, _) = loometric(&["embed-line", path(&fixture("line4.csv")), "--svg", path(&line)]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&line).unwrap().matches("<circle").count(), 4);
}

#[test]
fn svg_is_skipped_above_two_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("s.svg");
    let (code, _) = loometric(&["embed", path(&fixture("simplex4.json")), "--dim", "3", "--svg", path(&svg)]);
    assert!(code == 0 || code == 1);
    assert!(!svg.exists());
}

#[test]
fn out_replaces_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gh.json");
    let (code, stdout) = loometric(&[
        "gh",
        path(&fixture("point.json")),
        path(&fixture("pair.json")),
        "--out",
        path(&out),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["value"], "1/2");
}

#[test]
fn seeded_commands_are_deterministic() {
    for args in [
        vec!["embed-line", "LINE", "--seed", "9"],
        vec!["perturb", "CYCLE", "--eps", "1/10", "--seed", "9"],
        vec!["embed", "CYCLE", "--dim", "1", "--seed", "9", "--restarts", "2"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| match *a {
                "LINE" => path(&fixture("line4.csv")).to_string(),
                "CYCLE" => path(&fixture("cycle4.json")).to_string(),
                other => other.to_string(),
            })
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(loometric(&args), loometric(&args), "{args:?}");
    }
}
