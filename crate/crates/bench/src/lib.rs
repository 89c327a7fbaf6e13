//! Benchmark inputs shared by the criterion targets.

use cellres::constructions::{chord_complex, elongated_pyramid, polygon_complex, wheel_polytope};
use cellres::CellComplex;

/// Complexes of increasing size used across benchmarks.
pub fn bench_complexes() -> Vec<(&'static str, CellComplex)> {
    vec![
        ("pentagon", polygon_complex(5).expect("pentagon")),
        ("chord_7_3", chord_complex(7, 3).expect("chord complex")),
        ("wheel_4", wheel_polytope(4).expect("wheel")),
        ("ep_pentagon", elongated_pyramid(&polygon_complex(5).expect("pentagon")).expect("elongated pyramid")),
    ]
}
