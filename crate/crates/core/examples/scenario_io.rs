//! Save generated scenarios as JSON and read them back unchanged.

use std::error::Error;

use lanestitch::scenarios::{
    generate, load, save, GeneratorConfig, ManeuverCounts, SCHEMA_VERSION,
};

fn main() -> Result<(), Box<dyn Error>> {
    let config = GeneratorConfig {
        counts: ManeuverCounts {
            straight: 2,
            left_turn: 1,
            right_turn: 1,
            intersection_straight_vs_turn: 1,
            u_turn: 1,
        },
        seed: 99,
        ..GeneratorConfig::default()
    };
    let records = generate(&config)?;
    let path =
        std::env::temp_dir().join(format!("lanestitch_scenarios_{}.json", std::process::id()));
    save(&records, &path)?;
    let loaded = load(&path)?;
    println!(
        "schema version {SCHEMA_VERSION}, {} bytes",
        std::fs::metadata(&path)?.len()
    );
    for r in &loaded {
        println!(
            "{:<36} {:>2} lane(s) {:>2} mode(s) divergent={}",
            r.id,
            r.goal_candidates.len(),
            r.predicted.len(),
            r.is_divergent()
        );
    }
    assert_eq!(loaded, records);
    std::fs::remove_file(&path)?;
    Ok(())
}
