//! Render an intersection scenario with the stitched and pure-pursuit
//! outputs to an SVG file.
//!
//! `cargo run --example render_scene -- scene.svg`

use std::error::Error;
use std::path::PathBuf;

use lanestitch::cli::methods::{prepare, run_methods, Method, MethodSettings};
use lanestitch::cli::render::render_scene;
use lanestitch::scenarios::{generate_record, GeneratorConfig, Maneuver};

fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("lanestitch_scene.svg"));
    let record = generate_record(
        "intersection".into(),
        Maneuver::IntersectionStraightVsTurn,
        &GeneratorConfig::default(),
        5,
    );
    let prepared = prepare(&record)?.ok_or("no goal in range")?;
    let outputs = run_methods(
        &[Method::Us, Method::Pp, Method::Raw],
        &prepared,
        &MethodSettings::default(),
    )?;
    let svg = render_scene(&prepared, &outputs);
    std::fs::write(&out, &svg)?;
    println!("wrote {} ({} bytes)", out.display(), svg.len());
    Ok(())
}
