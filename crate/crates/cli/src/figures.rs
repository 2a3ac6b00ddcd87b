//! Datasets behind the published figures. Each figure is a set of curves;
//! each curve is one scan with a `t = 1` column set and a `t -> 0` one.

use std::f64::consts::PI;

use anyhow::{bail, Result};
use conevac_core::{BoundaryCondition, Geometry, RenormMode};

use crate::parse::Cutoff;
use crate::scan::{Quantity, ScanSpec, Spacing, SweepVar};

pub const FIGURE_IDS: [&str; 16] = [
    "fig1", "fig1b", "fig2mis", "fig2ext", "fig2b", "fig3", "fig3b", "fig4", "coneang1", "coneang2", "fig5",
    "fig5b", "fig6", "fig6b", "fig7", "fig7b",
];

pub struct Curve {
    /// File stem inside the figure directory.
    pub name: String,
    pub spec: ScanSpec,
}

const ALL: [usize; 4] = [0, 1, 2, 3];
const ENERGY: [usize; 1] = [0];

const R_RANGE: (f64, f64) = (0.1, 10.0);
const R_NEAR_ZERO: (f64, f64) = (0.01, 1.0);
const THETA1_RANGE: (f64, f64) = (0.25 * PI, 4.0 * PI);

const MISC_ANGLES: [(&str, f64); 3] = [("pi_4", PI / 4.0), ("pi_2", PI / 2.0), ("pi", PI)];
const EXT_ANGLES: [(&str, f64); 3] = [("2.5pi", 2.5 * PI), ("8pi", 8.0 * PI), ("10000pi", 1e4 * PI)];
const WEDGE_ANGLES: [(&str, f64); 3] = [("pi_3", PI / 3.0), ("2pi_5", 2.0 * PI / 5.0), ("2pi_3", 2.0 * PI / 3.0)];
const WEDGE_THETAS: [(&str, f64); 3] = [("pi_16", PI / 16.0), ("pi_8", PI / 8.0), ("pi_4", PI / 4.0)];

const QUARTER: f64 = 0.0;
const CONFORMAL: f64 = -1.0 / 12.0;

fn base(geometry: Geometry, sweep: SweepVar, range: (f64, f64), points: usize) -> ScanSpec {
    ScanSpec {
        geometry,
        sweep,
        from: range.0,
        to: range.1,
        points,
        spacing: if sweep == SweepVar::R { Spacing::Log } else { Spacing::Linear },
        r: 1.0,
        theta: 0.0,
        z: 0.0,
        beta: QUARTER,
        quantity: Quantity::Stress,
        cutoffs: vec![Cutoff::At(1.0), Cutoff::Zero],
        renorm: RenormMode::KernelSubtraction,
        components: ALL.to_vec(),
    }
}

fn r_curve(geometry: Geometry, range: (f64, f64), points: usize) -> ScanSpec {
    base(geometry, SweepVar::R, range, points)
}

fn cone(theta1: f64) -> Geometry {
    Geometry::Cone { theta1 }
}

fn wedge(theta0: f64) -> Geometry {
    Geometry::Wedge {
        theta0,
        bc: BoundaryCondition::Dirichlet,
    }
}

fn xi_tag(beta: f64) -> &'static str {
    if beta == CONFORMAL {
        "xi_1_6"
    } else {
        "xi_1_4"
    }
}

/// θ range across the open wedge, or its part near the `θ = 0` plate.
fn theta_range(theta0: f64, near_plate: bool) -> (f64, f64) {
    if near_plate {
        (theta0 / 500.0, theta0 / 8.0)
    } else {
        (theta0 / 500.0, theta0 * (1.0 - 1.0 / 500.0))
    }
}

fn cone_set(
    angles: &[(&str, f64)],
    range: (f64, f64),
    quantity: Quantity,
    components: &[usize],
    points: usize,
) -> Vec<Curve> {
    angles
        .iter()
        .map(|&(tag, theta1)| {
            let mut spec = r_curve(cone(theta1), range, points);
            spec.quantity = quantity;
            spec.components = components.to_vec();
            let suffix = if quantity == Quantity::BetaCorrection { "_beta1" } else { "" };
            Curve {
                name: format!("theta1_{tag}{suffix}"),
                spec,
            }
        })
        .collect()
}

/// Wedge θ sweeps at θ₀ = π/2: ξ = 1/4 at r ∈ {2, 4, 8}, ξ = 1/6 at r ∈ {4, 8, 16}.
fn wedge_by_r(near_plate: bool, points: usize) -> Vec<Curve> {
    let theta0 = PI / 2.0;
    let mut out = Vec::new();
    for (beta, radii) in [(QUARTER, [2.0, 4.0, 8.0]), (CONFORMAL, [4.0, 8.0, 16.0])] {
        for r in radii {
            let mut spec = base(wedge(theta0), SweepVar::Theta, theta_range(theta0, near_plate), points);
            spec.r = r;
            spec.beta = beta;
            spec.components = ENERGY.to_vec();
            out.push(Curve {
                name: format!("{}_r{r}", xi_tag(beta)),
                spec,
            });
        }
    }
    out
}

/// Wedge θ sweeps at r = 8 for θ₀ ∈ {π/3, 2π/5, 2π/3}.
fn wedge_by_theta0(near_plate: bool, points: usize) -> Vec<Curve> {
    let mut out = Vec::new();
    for beta in [QUARTER, CONFORMAL] {
        for (tag, theta0) in WEDGE_ANGLES {
            let mut spec = base(wedge(theta0), SweepVar::Theta, theta_range(theta0, near_plate), points);
            spec.r = 8.0;
            spec.beta = beta;
            spec.components = ENERGY.to_vec();
            out.push(Curve {
                name: format!("{}_theta0_{tag}", xi_tag(beta)),
                spec,
            });
        }
    }
    out
}

/// Wedge r sweeps at θ₀ = π/2 for θ ∈ {π/16, π/8, π/4}.
fn wedge_by_theta(range: (f64, f64), points: usize) -> Vec<Curve> {
    let mut out = Vec::new();
    for beta in [QUARTER, CONFORMAL] {
        for (tag, theta) in WEDGE_THETAS {
            let mut spec = r_curve(wedge(PI / 2.0), range, points);
            spec.theta = theta;
            spec.beta = beta;
            spec.components = ENERGY.to_vec();
            out.push(Curve {
                name: format!("{}_theta_{tag}", xi_tag(beta)),
                spec,
            });
        }
    }
    out
}

/// The curves of figure `id`, each sampled at `points` grid points.
pub fn curves(id: &str, points: usize) -> Result<Vec<Curve>> {
    let curves = match id {
        "fig1" => vec![Curve {
            name: "dowker".into(),
            spec: r_curve(Geometry::Dowker, R_RANGE, points),
        }],
        "fig1b" => {
            let mut spec = r_curve(Geometry::Dowker, R_RANGE, points);
            spec.quantity = Quantity::BetaCorrection;
            vec![Curve {
                name: "dowker_beta1".into(),
                spec,
            }]
        }
        "fig2mis" => cone_set(&MISC_ANGLES, R_RANGE, Quantity::Stress, &ALL, points),
        "fig2ext" => cone_set(&EXT_ANGLES, R_RANGE, Quantity::Stress, &ALL, points),
        "fig2b" => {
            let mut v = cone_set(&MISC_ANGLES, R_NEAR_ZERO, Quantity::Stress, &ENERGY, points);
            v.extend(cone_set(&EXT_ANGLES, R_NEAR_ZERO, Quantity::Stress, &ENERGY, points));
            v
        }
        "fig3" => cone_set(&MISC_ANGLES, R_RANGE, Quantity::BetaCorrection, &ALL, points),
        "fig3b" => cone_set(&MISC_ANGLES, R_NEAR_ZERO, Quantity::BetaCorrection, &ENERGY, points),
        "fig4" => {
            let mut out = Vec::new();
            for (panel, range) in [("", R_RANGE), ("_near0", R_NEAR_ZERO)] {
                for beta in [CONFORMAL, QUARTER] {
                    let mut spec = r_curve(cone(0.8 * PI), range, points);
                    spec.beta = beta;
                    spec.components = ENERGY.to_vec();
                    out.push(Curve {
                        name: format!("{}{panel}", xi_tag(beta)),
                        spec,
                    });
                }
            }
            out
        }
        "coneang1" | "coneang2" => {
            let mut spec = base(cone(2.0 * PI), SweepVar::Theta1, THETA1_RANGE, points);
            let name = if id == "coneang1" {
                "r1_beta0"
            } else {
                spec.quantity = Quantity::BetaCorrection;
                "r1_beta1"
            };
            vec![Curve { name: name.into(), spec }]
        }
        "fig5" => wedge_by_r(false, points),
        "fig5b" => wedge_by_r(true, points),
        "fig6" => wedge_by_theta0(false, points),
        "fig6b" => wedge_by_theta0(true, points),
        "fig7" => wedge_by_theta(R_RANGE, points),
        "fig7b" => wedge_by_theta(R_NEAR_ZERO, points),
        _ => bail!("unknown figure id `{id}`; valid ids: {}", FIGURE_IDS.join(", ")),
    };
    Ok(curves)
}
