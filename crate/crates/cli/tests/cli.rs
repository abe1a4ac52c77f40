use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

use majorana_readout_cli::commands::{run_chi, MethodSel};
use majorana_readout_cli::output::Table;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_majorana-readout"))
}

fn write_config(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn box_config() -> Value {
    json!({
        "qubit_type": "majorana-box",
        "qubit": {"e_tot": 1.0, "eps_dot": 4.0, "t_l": 1.0, "t_r": 1.0, "phi_x": std::f64::consts::FRAC_PI_2},
        "resonator": {"lambda_GHz": 0.1, "delta_over_g": -10.0}
    })
}

fn mt_config(e_m: f64) -> Value {
    json!({
        "qubit_type": "majorana-transmon",
        "qubit": {"e_c": 0.25, "e_j": 12.5, "e_m": e_m},
        "resonator": {"lambda_GHz": 0.1, "delta_over_g": -10.0}
    })
}

#[test]
fn chi_stdout_round_trips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "box.json", &box_config());
    let o = run(&[
        "chi",
        "--config",
        cfg.to_str().unwrap(),
        "--sweep",
        "qubit.phi_x=0:3.14:7",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = Table::read_csv(&o.stdout[..]).unwrap();
    let sweep = "qubit.phi_x=0:3.14:7".parse().unwrap();
    let direct = run_chi(&box_config(), Some(&sweep), MethodSel::Both)
        .unwrap()
        .table;
    assert_eq!(parsed, direct);
    assert_eq!(parsed.to_csv_string().as_bytes(), &o.stdout[..]);
}

#[test]
fn out_directory_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "mt.json", &mt_config(0.475));
    let cfg = cfg.to_str().unwrap();
    let out = dir.path().join("o");
    let a = run(&["spectrum", "--config", cfg, "--sweep", "qubit.n_g=0:1:5"]);
    let b = run(&[
        "spectrum",
        "--config",
        cfg,
        "--sweep",
        "qubit.n_g=0:1:5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    assert_eq!(std::fs::read(out.join("spectrum.csv")).unwrap(), a.stdout);

    let r = run(&["readout", "--config", cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let report: Value =
        serde_json::from_slice(&std::fs::read(out.join("readout.json")).unwrap()).unwrap();
    assert!(report["tau_to_target_us"].as_f64().unwrap() > 0.0);
    assert_eq!(report["scheme"], "dispersive");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), "good.json", &box_config());
    let good = good.to_str().unwrap();
    assert_eq!(code(&run(&["chi", "--config", good])), 0);

    // Configuration errors: unknown field, bad value, bad sweep key, unparsable flag.
    let mut unknown = box_config();
    unknown["qubit"]["e_tott"] = json!(1.0);
    let unknown = write_config(dir.path(), "unknown.json", &unknown);
    let o = run(&["chi", "--config", unknown.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("e_tott"));
    let mut negative = box_config();
    negative["resonator"]["lambda_GHz"] = json!(-0.1);
    let negative = write_config(dir.path(), "negative.json", &negative);
    assert_eq!(
        code(&run(&["chi", "--config", negative.to_str().unwrap()])),
        2
    );
    assert_eq!(
        code(&run(&[
            "chi",
            "--config",
            good,
            "--sweep",
            "qubit.missing=0:1:3"
        ])),
        2
    );
    assert_eq!(
        code(&run(&["chi", "--config", good, "--method", "exact"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "reproduce",
            "9",
            "--out",
            dir.path().to_str().unwrap()
        ])),
        2
    );

    // Numeric failure: the shift vanishes at E_M = 0, so no readout budget exists.
    let flat = write_config(dir.path(), "flat.json", &mt_config(0.0));
    let o = run(&["readout", "--config", flat.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));

    // An unreadable config is a configuration error.
    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&run(&["chi", "--config", missing.to_str().unwrap()])),
        2
    );

    // Output I/O failure: `--out` names an existing regular file.
    let o = run(&["chi", "--config", good, "--out", good]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn reproduce_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["a", "b"] {
        let out = dir.path().join(sub);
        let o = run(&["reproduce", "2", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let files: Vec<_> = std::fs::read_dir(dir.path().join("a/fig2"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(files.len(), 5);
    for f in files {
        let a = std::fs::read(dir.path().join("a/fig2").join(&f)).unwrap();
        let b = std::fs::read(dir.path().join("b/fig2").join(&f)).unwrap();
        assert!(a == b, "{f:?} differs");
    }
}
