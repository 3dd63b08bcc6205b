//! Every example under `examples/` runs to completion. `cargo test` builds
//! the examples next to the test binaries, so they are run from there.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 8] = [
    "stitch_basic",
    "compatibility",
    "pure_pursuit",
    "baselines",
    "evaluate_suite",
    "parameter_sweep",
    "render_scene",
    "scenario_io",
];

fn example_binary(name: &str) -> PathBuf {
    // target/<profile>/deps/examples-<hash> -> target/<profile>/examples/<name>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    profile_dir
        .join("examples")
        .join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

#[test]
fn examples_run() {
    let out_dir = tempfile::tempdir().unwrap();
    for name in EXAMPLES {
        let bin = example_binary(name);
        assert!(bin.exists(), "{} was not built", bin.display());
        let mut cmd = Command::new(&bin);
        if name == "render_scene" {
            cmd.arg(out_dir.path().join("scene.svg"));
        }
        let out = cmd.output().unwrap();
        assert!(
            out.status.success(),
            "{name} failed:\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
    assert!(out_dir.path().join("scene.svg").exists());
}
