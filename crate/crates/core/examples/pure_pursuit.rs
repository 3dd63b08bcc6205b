//! Track a right-angle lane with pure pursuit and retime the same lane
//! with the shared speed profile.

use std::error::Error;

use lanestitch::scenarios::lane;
use lanestitch::tracker::{retime, rollout_with, ActorState, SpeedProfile, TrackerConfig};
use lanestitch::Point2;

fn main() -> Result<(), Box<dyn Error>> {
    let path = lane(15.0, std::f64::consts::FRAC_PI_2);
    let actor = ActorState {
        position: Point2::new(-20.0, 0.5),
        heading: 0.0,
        speed: 8.0,
        acceleration: 1.0,
        length: 4.5,
        width: 1.9,
        is_large: false,
    };
    let config = TrackerConfig::default();
    let tracked = rollout_with(&actor, &path, &config);
    let retimed = retime(
        path.suffix_from(40.0).unwrap().points(),
        &actor,
        &config.profile,
        config.output_dt,
        config.horizon_steps,
    )?;
    let profile = SpeedProfile::from_state(&actor, config.profile);

    println!(
        "{:>4} {:>7} {:>7} {:>18} {:>18}",
        "t", "v", "dist", "tracked", "retimed"
    );
    for k in (0..=config.horizon_steps).step_by(10) {
        let t = k as f64 * config.output_dt;
        let a = tracked.states[k].position;
        let b = retimed.states[k].position;
        println!(
            "{t:>4.1} {:>7.3} {:>7.2} ({:>7.2}, {:>7.2}) ({:>7.2}, {:>7.2})",
            profile.speed(t),
            profile.distance(t),
            a.x,
            a.y,
            b.x,
            b.y
        );
    }
    Ok(())
}
