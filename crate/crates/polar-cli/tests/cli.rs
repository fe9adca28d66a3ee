//! End-to-end checks of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polar"))
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polar-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn base_config(dir: &Path) -> String {
    format!(
        r#"
[code]
block_len = 8
rate = 0.5

[channel]
kind = "bec"
epsilon = 0.4

[sim]
trials = 300
min_errors = 0
seed = 11

[output]
dir = "{}"
"#,
        dir.join("out").display()
    )
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn construct_writes_codespec_matching_exhaustive_oracle() {
    let dir = temp_dir("construct");
    let cfg = write_config(&dir, &base_config(&dir));
    let out = bin().arg("construct").arg(&cfg).output().unwrap();
    assert!(out.status.success(), "{}", stderr_text(&out));

    let text = std::fs::read_to_string(dir.join("out/codespec.toml")).unwrap();
    let value: toml::Table = text.parse().unwrap();
    assert_eq!(value["block_len"].as_integer(), Some(8));
    assert_eq!(value["info_len"].as_integer(), Some(4));

    let z: Vec<f64> = value["z"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_float().unwrap())
        .collect();
    let exact = polar::oracle::bec_exact_subchannel_erasure(3, 0.4);
    for (a, b) in z.iter().zip(&exact) {
        assert!(
            (a - b).abs() <= 1e-12 * b.max(1e-300),
            "z {a} vs oracle {b}"
        );
    }

    let info: Vec<usize> = value["info_set"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_integer().unwrap() as usize)
        .collect();
    let (want_info, _) = polar::select_information_set(&exact, 4);
    assert_eq!(info, want_info);
}

#[test]
fn construct_rejects_non_power_of_two() {
    let dir = temp_dir("badn");
    let cfg = write_config(&dir, &base_config(&dir));
    let out = bin()
        .arg("construct")
        .arg(&cfg)
        .arg("--set")
        .arg("code.block_len=3")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = stderr_text(&out);
    assert!(err.contains("power of two"), "stderr: {err}");
}

#[test]
fn construct_rejects_zero_info_bits() {
    let dir = temp_dir("badk");
    let cfg = write_config(&dir, &base_config(&dir));
    for setting in ["code.rate=0.0", "code.info_len=0"] {
        let out = bin()
            .arg("construct")
            .arg(&cfg)
            .arg("--set")
            .arg(setting)
            .output()
            .unwrap();
        assert!(!out.status.success(), "{setting} should fail");
    }
}

#[test]
fn simulate_reports_exact_sc_call_count_at_n512() {
    let dir = temp_dir("sc512");
    let cfg = write_config(&dir, &base_config(&dir));
    let out = bin()
        .arg("simulate")
        .arg(&cfg)
        .arg("--set")
        .arg("code.block_len=512")
        .arg("--set")
        .arg("decode.decoders=[\"sc\"]")
        .arg("--set")
        .arg("sim.trials=50")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_text(&out));
    let csv = std::fs::read_to_string(dir.join("out/results.csv")).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "decoder,channel,N,k,L,frames,errors,fer,fer_ci,mean_lr_calls,mean_m,eq12_estimate,ml_lower,union_upper"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "sc");
    assert_eq!(row[2], "512");
    assert_eq!(row[9], "5120", "mean_lr_calls must be exactly 5120");
}

#[test]
fn simulate_rejects_empty_decoder_set() {
    let dir = temp_dir("nodec");
    let cfg = write_config(&dir, &base_config(&dir));
    let out = bin()
        .arg("simulate")
        .arg(&cfg)
        .arg("--set")
        .arg("decode.decoders=[]")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr_text(&out).contains("decoders"));
}

#[test]
fn simulate_rerun_is_byte_identical_except_timestamp() {
    let dir = temp_dir("rerun");
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    let cfg = write_config(&dir, &base_config(&dir));
    for out_dir in [&out_a, &out_b] {
        let out = bin()
            .arg("simulate")
            .arg(&cfg)
            .arg("--set")
            .arg(format!("output.dir=\"{}\"", out_dir.display()))
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr_text(&out));
    }
    let csv_a = std::fs::read(out_a.join("results.csv")).unwrap();
    let csv_b = std::fs::read(out_b.join("results.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "CSV must be byte-identical across reruns");

    // The manifest may differ only in the timestamp and in the output.dir
    // echo this test itself overrides per run.
    let strip_varying = |p: &Path| -> String {
        std::fs::read_to_string(p.join("manifest.toml"))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("timestamp_unix") && !l.starts_with("dir = "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip_varying(&out_a), strip_varying(&out_b));
}

#[test]
fn bounds_table_is_internally_consistent() {
    let dir = temp_dir("bounds");
    let cfg = write_config(&dir, &base_config(&dir));
    let out = bin()
        .arg("bounds")
        .arg(&cfg)
        .arg("--set")
        .arg("code.rates=[0.25,0.5,0.75]")
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "k,rate,ml_lower,union_upper,z_th,a");
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let k: usize = f[0].parse().unwrap();
        let ml: f64 = f[2].parse().unwrap();
        let union: f64 = f[3].parse().unwrap();
        let z_th: f64 = f[4].parse().unwrap();
        let a: usize = f[5].parse().unwrap();
        assert!(union >= ml);
        assert!((z_th - ml / k as f64).abs() <= 1e-15 * ml.max(1.0));
        assert!(a >= 1 && a <= k);
    }
}

#[test]
fn bounds_single_bit_code_matches_closed_form() {
    let dir = temp_dir("bounds1");
    let cfg = write_config(&dir, &base_config(&dir));
    let out = bin()
        .arg("bounds")
        .arg(&cfg)
        .arg("--set")
        .arg("code.info_len=1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = stdout.lines().nth(1).unwrap().split(',').collect();
    let z_th: f64 = row[4].parse().unwrap();
    // Best subchannel of the N=8, eps=0.4 construction: Z = 0.4^8.
    let z_best = polar::evolve_bhattacharyya(0.4f64, 3)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let want = 0.5 * (1.0 - (1.0 - z_best * z_best).sqrt());
    assert!((z_th - want).abs() <= 1e-15);
    assert_eq!(row[5], "1");
}

#[test]
fn bounds_noiseless_toy_clamps_split_index() {
    let dir = temp_dir("bounds0");
    let cfg = write_config(&dir, &base_config(&dir));
    let out = bin()
        .arg("bounds")
        .arg(&cfg)
        .arg("--set")
        .arg("channel.epsilon=0.0")
        .arg("--set")
        .arg("code.info_len=1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = stdout.lines().nth(1).unwrap().split(',').collect();
    let z_th: f64 = row[4].parse().unwrap();
    assert!(z_th.abs() < 1e-15);
    assert_eq!(row[5], "1");
}

#[test]
fn simulate_trace_exports_per_frame_modes() {
    let dir = temp_dir("trace");
    let cfg = write_config(&dir, &base_config(&dir));
    let out = bin()
        .arg("simulate")
        .arg(&cfg)
        .arg("--trace")
        .arg("5")
        .arg("--set")
        .arg("decode.decoders=[\"lclsc\"]")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_text(&out));
    let trace = std::fs::read_to_string(dir.join("out/trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(
        lines.next().unwrap(),
        "decoder,k,frame,frame_error,lr_calls,m,modes"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[0], "lclsc");
        let m: usize = f[5].parse().unwrap();
        let modes = f[6];
        assert_eq!(modes.len(), 4);
        // The mode string is SC decisions followed by list decisions.
        assert_eq!(modes.chars().filter(|&c| c == 'S').count(), m);
        assert!(!modes.contains("LS"), "SC cannot resume after the switch");
    }
}

#[test]
fn selftest_passes_and_corrupt_negative_control_fails() {
    let ok = bin().arg("selftest").output().unwrap();
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stdout)
    );
    let stdout = String::from_utf8(ok.stdout).unwrap();
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 5);

    let bad = bin().arg("selftest").arg("--corrupt-f").output().unwrap();
    assert!(
        !bad.status.success(),
        "corrupted kernel must make selftest fail"
    );
    assert!(String::from_utf8(bad.stdout).unwrap().contains("FAIL"));
}
