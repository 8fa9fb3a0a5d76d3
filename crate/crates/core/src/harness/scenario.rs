//! Synthetic flights: straight-line ownship and intruder tracks.
//!
//! Positions are in feet, velocities in feet per second and one tick is
//! one second. The generated trace carries these signals:
//!
//! | signal | kind | value |
//! |---|---|---|
//! | `flight_mode` | bool | `tick >= takeoff_tick` |
//! | `altitude` | num | ownship z |
//! | `horizontal_intruder_distance` | num | xy distance to the intruder |
//! | `vertical_intruder_distance` | num | z distance to the intruder |
//! | `geofence_distance` | num | fence radius minus xy distance to its center (only with a fence) |

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trace::{Column, Trace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Track {
    pub position: [f64; 3],
    pub velocity: [f64; 3],
}

impl Track {
    pub fn at(&self, t: f64) -> [f64; 3] {
        [
            self.position[0] + self.velocity[0] * t,
            self.position[1] + self.velocity[1] * t,
            self.position[2] + self.velocity[2] * t,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geofence {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub ownship: Track,
    pub intruder: Track,
    pub duration: u64,
    /// First tick in flight; `None` keeps the aircraft on the ground.
    pub takeoff_tick: Option<u64>,
    pub geofence: Option<Geofence>,
    /// Half-width of uniform noise added to the intruder distances.
    pub noise: f64,
    pub seed: u64,
}

pub const BUILTIN_SCENARIOS: &[&str] = &["climb", "converging", "mode-off", "separating"];

fn converging() -> Scenario {
    Scenario {
        name: "converging".into(),
        ownship: Track {
            position: [0.0, 0.0, 200.0],
            velocity: [50.0, 0.0, 0.0],
        },
        intruder: Track {
            position: [2000.0, 0.0, 230.0],
            velocity: [-50.0, 0.0, 0.0],
        },
        duration: 40,
        takeoff_tick: Some(2),
        geofence: Some(Geofence {
            center: [0.0, 0.0],
            radius: 10_000.0,
        }),
        noise: 0.0,
        seed: 0,
    }
}

/// Look up a built-in scenario by name.
pub fn builtin_scenario(name: &str) -> Option<Scenario> {
    let base = converging();
    Some(match name {
        "converging" => base,
        "mode-off" => Scenario {
            name: name.into(),
            takeoff_tick: None,
            ..base
        },
        "separating" => Scenario {
            name: name.into(),
            intruder: Track {
                position: [1000.0, 0.0, 230.0],
                velocity: [100.0, 0.0, 0.0],
            },
            ..base
        },
        "climb" => Scenario {
            name: name.into(),
            ownship: Track {
                position: [0.0, 0.0, 100.0],
                velocity: [0.0, 0.0, 35.0],
            },
            intruder: Track {
                position: [50_000.0, 0.0, 100.0],
                velocity: [0.0, 0.0, 0.0],
            },
            duration: 20,
            takeoff_tick: Some(0),
            ..base
        },
        _ => return None,
    })
}

/// Sample the scenario once per tick.
pub fn generate_scenario(s: &Scenario) -> Trace {
    let n = s.duration as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut noise = |v: f64| {
        if s.noise > 0.0 {
            (v + rng.gen_range(-s.noise..=s.noise)).max(0.0)
        } else {
            v
        }
    };

    let mut mode = Vec::with_capacity(n);
    let mut alt = Vec::with_capacity(n);
    let mut horiz = Vec::with_capacity(n);
    let mut vert = Vec::with_capacity(n);
    let mut fence = Vec::with_capacity(n);
    for tick in 0..s.duration {
        let t = tick as f64;
        let own = s.ownship.at(t);
        let other = s.intruder.at(t);
        mode.push(s.takeoff_tick.is_some_and(|k| tick >= k));
        alt.push(own[2]);
        horiz.push(noise((own[0] - other[0]).hypot(own[1] - other[1])));
        vert.push(noise((own[2] - other[2]).abs()));
        if let Some(g) = s.geofence {
            fence.push(g.radius - (own[0] - g.center[0]).hypot(own[1] - g.center[1]));
        }
    }

    let mut trace = Trace::new(n);
    let columns = [
        ("flight_mode", Column::Bool(mode)),
        ("altitude", Column::Num(alt)),
        ("horizontal_intruder_distance", Column::Num(horiz)),
        ("vertical_intruder_distance", Column::Num(vert)),
    ];
    for (name, col) in columns {
        trace.insert(name, col).expect("generated columns are consistent");
    }
    if s.geofence.is_some() {
        trace
            .insert("geofence_distance", Column::Num(fence))
            .expect("generated columns are consistent");
    }
    trace
}
