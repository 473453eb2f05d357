use std::process::Command;

fn stokesband() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stokesband"));
    cmd.env("STOKESBAND_THREADS", "2");
    cmd
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("stokesband-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn help_lists_every_subcommand() {
    let out = stokesband().arg("--help").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "mre",
        "props",
        "kernels",
        "lemmas",
        "halfspace-consistency",
        "convergence",
    ] {
        assert!(text.contains(name), "{name} missing from help");
    }
}

#[test]
fn mre_writes_csv_and_plot_script() {
    let csv = scratch("mre.csv");
    let out = stokesband()
        .args([
            "mre",
            "--R",
            "1,0.5",
            "--ensemble",
            "2",
            "--nz",
            "16",
            "--nt",
            "8",
            "--seed",
            "3",
            "--out",
        ])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.trim_end().ends_with("PASS"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment,R,L,d,n_modes,nz,nt,Zmax,horizon,seed,sample,norm_name,lhs,rhs,ratio,lower_or_upper,refine_level"
    );
    assert_eq!(lines.count(), 2 * 2 * 11);
    assert!(scratch("mre_plot.py").exists());
}

#[test]
fn quiet_runs_print_nothing() {
    let out = stokesband().args(["kernels", "--quiet"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn config_file_is_read() {
    let cfg = scratch("run.toml");
    let csv = scratch("from_config.csv");
    std::fs::write(
        &cfg,
        "r_grid = [0.5]\nnz = 16\nnt = 8\n[ensemble]\nsamples = 2\nseed = 5\n",
    )
    .unwrap();
    let out = stokesband()
        .args(["mre", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // One R value and two samples, each with eleven rows.
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 11);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(9) == Some("5")));
}

#[test]
fn errors_exit_with_code_two() {
    let out = stokesband()
        .args(["lemmas", "--ensemble", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error:"));

    let cfg = scratch("bad.toml");
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    let out = stokesband()
        .args(["mre", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = stokesband().args(["mre", "--R", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_rejected() {
    let out = stokesband().args(["mre", "--bogus"]).output().unwrap();
    assert!(!out.status.success());
}
