//! Shared inputs for the criterion benchmarks.

use std::f64::consts::PI;

use conevac_core::{BoundaryCondition, FieldPoint, Geometry, PointPair};

/// A generic off-axis pair with moderate separation.
pub fn pair() -> PointPair {
    PointPair::new(0.3, 1.0, 1.4, 0.4, 0.1, 0.2, 0.0).expect("valid pair")
}

/// One representative of each geometry.
pub fn geometries() -> Vec<(&'static str, Geometry)> {
    vec![
        ("minkowski", Geometry::Minkowski),
        ("cone_pi_2", Geometry::Cone { theta1: PI / 2.0 }),
        ("cone_8pi", Geometry::Cone { theta1: 8.0 * PI }),
        ("dowker", Geometry::Dowker),
        (
            "wedge_pi_3",
            Geometry::Wedge {
                theta0: PI / 3.0,
                bc: BoundaryCondition::Dirichlet,
            },
        ),
        ("periodic", Geometry::PeriodicLine { period: 2.0 }),
    ]
}

/// Field point inside every geometry above.
pub fn field_point() -> FieldPoint {
    FieldPoint::new(1.5, 0.5, 0.0).expect("valid point")
}
