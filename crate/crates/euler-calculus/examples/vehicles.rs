//! Counting vehicles from the number of passes each sensor records.

use euler_calculus::integrate::integrate_cf;
use euler_calculus::scene::{simulate_vehicle_counts, Trajectory};

fn main() {
    let fleet = [
        Trajectory::new(vec![[0.05, 0.3, 0.0], [0.95, 0.3, 1.0]], 0.04),
        Trajectory::new(vec![[0.5, 0.95, 0.0], [0.5, 0.05, 1.0]], 0.04),
        Trajectory::new(vec![[0.05, 0.1, 0.0], [0.95, 0.85, 1.5]], 0.03),
    ];
    for k in 1..=fleet.len() {
        let h = simulate_vehicle_counts(&fleet[..k], [0.0, 0.0, 1.0, 1.0], 200, 1e-6).unwrap();
        let busiest = h.values().iter().max().unwrap();
        println!("{k} vehicles: integral {}, busiest sensor saw {busiest} passes", integrate_cf(&h));
    }
}
