use std::path::Path;
use std::process::{Command, Output};

fn lanestitch(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lanestitch"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

const SMALL: &str = "[generator]\nseed = 5\n[generator.counts]\nstraight = 3\nleft_turn = 2\nright_turn = 1\nintersection_straight_vs_turn = 2\nu_turn = 1\n";

fn generated(dir: &Path) {
    std::fs::write(dir.join("small.toml"), SMALL).unwrap();
    let out = lanestitch(
        &["generate", "--config", "small.toml", "--out", "s.json"],
        dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn run_writes_metrics_and_detail() {
    let dir = tempfile::tempdir().unwrap();
    generated(dir.path());
    let out = lanestitch(
        &[
            "run",
            "--scenarios",
            "s.json",
            "--out",
            "res",
            "--methods",
            "us,pp",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let metrics = std::fs::read_to_string(dir.path().join("res/metrics.csv")).unwrap();
    let mut lines = metrics.lines();
    assert_eq!(
        lines.next(),
        Some("method,horizon_s,maneuver,mean_cte_m,count")
    );
    assert!(lines
        .clone()
        .all(|l| l.starts_with("pp,") || l.starts_with("us,")));
    assert!(metrics.contains("us,6,all,"));
    let detail = std::fs::read_to_string(dir.path().join("res/detail.csv")).unwrap();
    assert!(detail.starts_with("scenario_id,maneuver,method,horizon_s,cte_m\n"));
    // 9 scenarios x 2 methods x 6 horizons
    assert_eq!(detail.lines().count(), 1 + 9 * 2 * 6);
}

#[test]
fn sweep_writes_one_file_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    generated(dir.path());
    let out = lanestitch(
        &[
            "sweep",
            "--scenarios",
            "s.json",
            "--out",
            "sw",
            "--lambda0",
            "0.55,10",
            "--alpha",
            "0.8,-",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    for cell in [
        "cell_l0.55_a0.8.csv",
        "cell_l0.55_a-.csv",
        "cell_l10_a0.8.csv",
        "cell_l10_a-.csv",
        "sweep.csv",
    ] {
        assert!(dir.path().join("sw").join(cell).exists(), "{cell}");
    }
    let sweep = std::fs::read_to_string(dir.path().join("sw/sweep.csv")).unwrap();
    assert!(sweep.starts_with("lambda0,alpha,method,horizon_s,maneuver,mean_cte_m,count\n"));
    assert!(sweep.contains("\n10,-,us,1,all,"));
}

#[test]
fn render_scene_only_and_with_methods() {
    let dir = tempfile::tempdir().unwrap();
    generated(dir.path());
    let text = std::fs::read_to_string(dir.path().join("s.json")).unwrap();
    let records = lanestitch::scenarios::load_from_str(&text).unwrap();
    let id = records[0].id.as_str();
    let out = lanestitch(
        &[
            "render",
            id,
            "--scenarios",
            "s.json",
            "--out",
            "bare.svg",
            "--methods",
            "",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let bare = std::fs::read_to_string(dir.path().join("bare.svg")).unwrap();
    assert!(!bare.contains(">us<"));
    let out = lanestitch(
        &["render", id, "--scenarios", "s.json", "--out", "full.svg"],
        dir.path(),
    );
    assert!(out.status.success());
    let full = std::fs::read_to_string(dir.path().join("full.svg")).unwrap();
    assert!(full.contains(">us<") && full.contains(">pp<"));
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    generated(dir.path());
    let cases: [&[&str]; 6] = [
        &["frobnicate"],
        &["run", "--scenarios", "s.json"],
        &[
            "run",
            "--scenarios",
            "s.json",
            "--out",
            "r",
            "--methods",
            "us,nope",
        ],
        &["run", "--scenarios", "missing.json", "--out", "r"],
        &[
            "render",
            "no-such-id",
            "--scenarios",
            "s.json",
            "--out",
            "x.svg",
        ],
        &[
            "sweep",
            "--scenarios",
            "s.json",
            "--out",
            "sw",
            "--alpha",
            "1.5",
        ],
    ];
    for args in cases {
        let out = lanestitch(args, dir.path());
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    std::fs::write(dir.path().join("bad.toml"), "[stitch]\nlambda = 1\n").unwrap();
    let out = lanestitch(
        &["generate", "--config", "bad.toml", "--out", "x.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupt_scenario_file_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        "{\"schema_version\": 1, \"records\": [",
    )
    .unwrap();
    let out = lanestitch(
        &["run", "--scenarios", "bad.json", "--out", "r"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn generate_is_deterministic_and_seed_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("small.toml"), SMALL).unwrap();
    for name in ["a.json", "b.json"] {
        assert!(lanestitch(
            &["generate", "--config", "small.toml", "--out", name],
            dir.path()
        )
        .status
        .success());
    }
    assert!(lanestitch(
        &[
            "generate",
            "--config",
            "small.toml",
            "--out",
            "c.json",
            "--seed",
            "6"
        ],
        dir.path()
    )
    .status
    .success());
    let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_ne!(read("a.json"), read("c.json"));
}

#[test]
fn help_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = lanestitch(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for verb in ["generate", "run", "sweep", "render"] {
        assert!(text.contains(verb));
    }
}

#[test]
fn documented_config_is_the_default() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../docs/default_config.toml"
    );
    let cfg = lanestitch::cli::config::Config::load(std::path::Path::new(path)).unwrap();
    assert_eq!(cfg, lanestitch::cli::config::Config::default());
}
