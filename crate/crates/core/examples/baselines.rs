//! The comparison methods on one generated left-turn scenario, scored by
//! cross-track error against the ground truth.

use std::error::Error;

use lanestitch::cli::methods::{prepare, run_methods, Method, MethodSettings};
use lanestitch::eval::evaluate;
use lanestitch::scenarios::{generate_record, GeneratorConfig, Maneuver};

fn main() -> Result<(), Box<dyn Error>> {
    let record = generate_record(
        "left".into(),
        Maneuver::LeftTurn,
        &GeneratorConfig::default(),
        42,
    );
    let prepared = prepare(&record)?.ok_or("no goal in range")?;
    let outputs = run_methods(&Method::DEFAULT_SET, &prepared, &MethodSettings::default())?;
    let table = evaluate(&outputs, &record.gt_track, record.maneuver.label())?;

    print!("{:>10}", "method");
    for h in 1..=6 {
        print!(" {:>6}", format!("{h}s"));
    }
    println!();
    for method in outputs.keys() {
        print!("{method:>10}");
        for h in 1..=6 {
            let e = table
                .mean(method, h, record.maneuver.label())
                .unwrap_or(f64::NAN);
            print!(" {e:>6.3}");
        }
        println!();
    }
    Ok(())
}
