//! Sweep (λ₀, α) on veer-off scenarios: a large weight pins the path to
//! the goal, a tiny one leaves it on the prediction, and dropping the
//! schedule hurts at long horizons.

use std::error::Error;

use lanestitch::cli::config::SweepCell;
use lanestitch::cli::methods::{score_suite, Method, MethodSettings};
use lanestitch::eval::ALL_MANEUVERS;
use lanestitch::scenarios::{generate, GeneratorConfig, ManeuverCounts};
use lanestitch::StitchParams;

fn main() -> Result<(), Box<dyn Error>> {
    let config = GeneratorConfig {
        counts: ManeuverCounts {
            straight: 12,
            ..ManeuverCounts::zero()
        },
        divergence_fraction: 1.0,
        prediction_noise: 0.05,
        ..GeneratorConfig::default()
    };
    let records = generate(&config)?;
    let cells = [
        SweepCell {
            lambda0: 0.55,
            alpha: Some(0.5),
        },
        SweepCell {
            lambda0: 10.0,
            alpha: Some(0.8),
        },
        SweepCell {
            lambda0: 0.01,
            alpha: Some(0.2),
        },
        SweepCell {
            lambda0: 0.55,
            alpha: None,
        },
    ];
    println!("{:>14} {:>7} {:>7} {:>7}", "cell", "1s", "3s", "6s");
    for cell in cells {
        let settings = MethodSettings {
            stitch: cell.apply(&StitchParams::default()),
            ..MethodSettings::default()
        };
        let table = score_suite(&records, &[Method::Us], &settings, true)?.table;
        let e = |h| {
            table
                .with_pooled()
                .mean("us", h, ALL_MANEUVERS)
                .unwrap_or(f64::NAN)
        };
        println!(
            "{:>14} {:>7.3} {:>7.3} {:>7.3}",
            cell.label(),
            e(1),
            e(3),
            e(6)
        );
    }
    Ok(())
}
