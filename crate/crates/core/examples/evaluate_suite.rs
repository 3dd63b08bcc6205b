//! Generate a small synthetic suite, score every method on it and print
//! the pooled mean cross-track error per horizon.

use std::error::Error;

use lanestitch::cli::methods::{score_suite, Method, MethodSettings};
use lanestitch::eval::{ALL_MANEUVERS, HORIZONS_S};
use lanestitch::scenarios::{generate, GeneratorConfig, ManeuverCounts};

fn main() -> Result<(), Box<dyn Error>> {
    let config = GeneratorConfig {
        counts: ManeuverCounts {
            straight: 10,
            left_turn: 5,
            right_turn: 5,
            intersection_straight_vs_turn: 5,
            u_turn: 3,
        },
        ..GeneratorConfig::default()
    };
    let records = generate(&config)?;
    let result = score_suite(
        &records,
        &Method::DEFAULT_SET,
        &MethodSettings::default(),
        true,
    )?;
    let table = result.table.with_pooled();

    println!(
        "{} scenarios, {} skipped",
        records.len(),
        result.skipped.len()
    );
    for m in Method::DEFAULT_SET {
        let name = m.to_string();
        let row: Vec<String> = HORIZONS_S
            .iter()
            .map(|&h| {
                format!(
                    "{:.3}",
                    table.mean(&name, h, ALL_MANEUVERS).unwrap_or(f64::NAN)
                )
            })
            .collect();
        println!("{name:>10} {}", row.join(" "));
    }
    Ok(())
}
