//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use conevac_core::kernels::{
    tbar_3d, tbar_3d_z_reduction, tbar_cone, tbar_cone_via_images, tbar_dowker, tbar_minkowski, tbar_modesum_4d,
    tbar_wedge_full, tbar_wedge_renormalized, ModeSumConfig,
};
use conevac_core::oracles::{
    conformal_wedge_energies, half_space_image, mode_sum_nmax, quarter_space_images, sample_pair, sign_change_pair,
    tensor_rel,
};
use conevac_core::quadrature::QuadConfig;
use conevac_core::stress::{stress_from_kernel, TangentialForm};
use conevac_core::{
    conservation_residual, stress_at, stress_t0, trace, BoundaryCondition, Coupling, FieldPoint, Geometry, Ladder,
    PointPair, RenormMode, Scalar, StressTensor,
};
use conevac_core::u_of_pair;
use rayon::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

const SEED: u64 = 0x5eed_acce;

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED + criterion)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn ok<E: std::fmt::Display>(r: Result<f64, E>) -> Result<f64, String> {
    r.map_err(|e| e.to_string())
}

fn verdict(worst: f64, tol: f64, what: &str) -> Outcome {
    let line = format!("{what}: worst {worst:.2e} (limit {tol:.0e})");
    if worst <= tol {
        Ok(line)
    } else {
        Err(line)
    }
}

fn flat_pipeline() -> Outcome {
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let r = log_uniform(&mut rng, 0.1, 10.0);
        let t = log_uniform(&mut rng, 0.05, 5.0);
        let beta = rng.random_range(-1.0..1.0);
        let fp = FieldPoint::new(r, rng.random_range(0.0..TAU), 0.0).map_err(|e| e.to_string())?;
        let s = stress_at(&Geometry::Minkowski, &fp, Coupling::new(beta), t, RenormMode::Raw)
            .map_err(|e| e.to_string())?
            .components();
        let p = 1.0 / (2.0 * PI * PI * t.powi(4));
        for (got, want) in s.iter().zip([3.0 * p, p, p, p]) {
            worst = worst.max(rel(*got, want));
        }
    }
    verdict(worst, 1e-10, "20 points, componentwise relative error")
}

fn minkowski_renormalized() -> Outcome {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let r = log_uniform(&mut rng, 0.1, 10.0);
        let t = log_uniform(&mut rng, 0.05, 5.0);
        let beta = rng.random_range(-2.0..2.0);
        let fp = FieldPoint::new(r, rng.random_range(0.0..TAU), 0.0).map_err(|e| e.to_string())?;
        for mode in [RenormMode::KernelSubtraction, RenormMode::ComponentSubtraction] {
            let s = stress_at(&Geometry::Minkowski, &fp, Coupling::new(beta), t, mode).map_err(|e| e.to_string())?;
            worst = worst.max(s.max_abs() * t.powi(4));
        }
    }
    verdict(worst, 1e-10, "20 points x 2 modes, max |T| t^4")
}

fn cone_vs_image_sum() -> Outcome {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let theta1 = log_uniform(&mut rng, PI / 4.0, 8.0 * PI);
        let u = log_uniform(&mut rng, 0.05, 5.0);
        let p = sample_pair(&mut rng, u, (0.0, theta1));
        let images = tbar_cone_via_images(&p, theta1, 1000).map_err(|e| e.to_string())?.value;
        worst = worst.max(rel(images, ok(tbar_cone(&p, theta1))?));
    }
    verdict(worst, 1e-8, "50 points, N = 1000 with tail")
}

fn cone_vs_mode_sum() -> Outcome {
    let mut rng = rng(4);
    let points: Vec<(PointPair, f64)> = (0..10)
        .map(|_| {
            let theta1 = rng.random_range(PI / 2.0..4.0 * PI);
            let u = log_uniform(&mut rng, 0.05, 2.0);
            (sample_pair(&mut rng, u, (0.0, theta1)), theta1)
        })
        .collect();
    let errs: Vec<Result<(f64, f64), String>> = points
        .par_iter()
        .map(|(p, theta1)| {
            let cfg = ModeSumConfig {
                n_max: mode_sum_nmax(p, *theta1).map_err(|e| e.to_string())?,
                ..ModeSumConfig::default()
            };
            let m = tbar_modesum_4d(p, *theta1, cfg).map_err(|e| e.to_string())?;
            let u = u_of_pair(p).map_err(|e| e.to_string())?.u;
            Ok((rel(m.value, ok(tbar_cone(p, *theta1))?), u))
        })
        .collect();
    let mut worst = 0.0f64;
    let mut umin = f64::INFINITY;
    for e in errs {
        let (err, u) = e?;
        worst = worst.max(err);
        umin = umin.min(u);
    }
    verdict(worst, 1e-6, &format!("10 points, smallest u {umin:.3}"))
}

/// Cartesian images for the quarter space or the half space.
fn images<S: Scalar>(quarter: bool, p: &PointPair<S>) -> S {
    if quarter {
        quarter_space_images(p)
    } else {
        half_space_image(p)
    }
}

fn wedge_good_angles() -> Outcome {
    let mut rng = rng(5);
    let bc = BoundaryCondition::Dirichlet;
    let mut kernel = 0.0f64;
    let mut stress = 0.0f64;
    for theta0 in [FRAC_PI_2, PI] {
        let quarter = theta0 == FRAC_PI_2;
        for _ in 0..20 {
            let u = log_uniform(&mut rng, 0.05, 3.0);
            let p = sample_pair(&mut rng, u, (0.05 * theta0, 0.95 * theta0));
            let polar = ok(tbar_wedge_renormalized(&p, theta0, bc))?;
            kernel = kernel.max(rel(polar, images(quarter, &p)));
            let full = ok(tbar_wedge_full(&p, theta0, bc))?;
            kernel = kernel.max(rel(full, images(quarter, &p) + ok(tbar_minkowski(&p))?));
        }
        let g = Geometry::Wedge { theta0, bc };
        for _ in 0..10 {
            let r = rng.random_range(0.5..8.0);
            let th = rng.random_range(0.1..theta0 - 0.1);
            let t = r * rng.random_range(0.02..1.0);
            let c = Coupling::new(rng.random_range(-1.0..1.0));
            let fp = FieldPoint::new(r, th, 0.0).map_err(|e| e.to_string())?;
            let polar = stress_at(&g, &fp, c, t, RenormMode::KernelSubtraction).map_err(|e| e.to_string())?;
            let cart = stress_from_kernel(|q| Ok(images(quarter, q)), &fp, c, t, TangentialForm::General)
                .map_err(|e| e.to_string())?;
            stress = stress.max(tensor_rel(&polar, &cart));
        }
    }
    verdict(
        kernel.max(stress),
        1e-8,
        &format!("theta0 = pi/2 and pi; kernel {kernel:.2e}, stress {stress:.2e}"),
    )
}

fn dirichlet_plates() -> Outcome {
    let mut rng = rng(6);
    let bc = BoundaryCondition::Dirichlet;
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let theta0 = rng.random_range(0.3..TAU);
        let u = log_uniform(&mut rng, 0.05, 3.0);
        let p = sample_pair(&mut rng, u, (0.1 * theta0, 0.9 * theta0));
        let interior = ok(tbar_wedge_full(&p, theta0, bc))?.abs();
        for edge in [0.0, theta0] {
            let q = PointPair { theta: edge, ..p };
            worst = worst.max(ok(tbar_wedge_full(&q, theta0, bc))?.abs() / interior);
        }
    }
    verdict(worst, 1e-10, "30 wedges, |T| at plate / interior")
}

fn large_angle() -> Outcome {
    let mut rng = rng(7);
    let theta1 = 1e4 * PI;
    let mut kernel = 0.0f64;
    for _ in 0..20 {
        let u = log_uniform(&mut rng, 0.05, 3.0);
        let p = sample_pair(&mut rng, u, (-1.0, 1.0));
        kernel = kernel.max(rel(ok(tbar_cone(&p, theta1))?, ok(tbar_dowker(&p))?));
    }
    let cone = Geometry::Cone { theta1 };
    let mut stress = 0.0f64;
    for (r, beta) in [(1.0, 0.0), (2.0, -0.25), (0.5, -1.0 / 12.0), (3.0, 1.0)] {
        let fp = FieldPoint::new(r, 0.0, 0.0).map_err(|e| e.to_string())?;
        let c = Coupling::new(beta);
        let pair = |g: &Geometry| -> Result<(StressTensor, StressTensor), String> {
            Ok((
                stress_at(g, &fp, c, 1.0, RenormMode::KernelSubtraction).map_err(|e| e.to_string())?,
                stress_t0(g, &fp, c, &Ladder::default()).map_err(|e| e.to_string())?.stress,
            ))
        };
        let (a1, a0) = pair(&cone)?;
        let (b1, b0) = pair(&Geometry::Dowker)?;
        stress = stress.max(tensor_rel(&a1, &b1)).max(tensor_rel(&a0, &b0));
    }
    verdict(
        kernel.max(stress),
        1e-6,
        &format!("theta1 = 1e4 pi vs Dowker; kernel {kernel:.2e}, stress {stress:.2e}"),
    )
}

fn sign_change() -> Outcome {
    let (a, b) = sign_change_pair().map_err(|e| e.to_string())?;
    let line = format!("T00(pi) = {a:.4e}, T00(4pi) = {b:.4e}");
    if a * b < 0.0 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn conformal_angle_independence() -> Outcome {
    let e = conformal_wedge_energies().map_err(|e| e.to_string())?;
    let lo = e.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = e.iter().sum::<f64>() / e.len() as f64;
    verdict((hi - lo) / mean.abs(), 1e-4, &format!("T00 = {mean:.6e} at three angles, spread"))
}

fn scaling_and_affinity() -> Outcome {
    let mut rng = rng(10);
    let mut scaling = 0.0f64;
    let mut affinity = 0.0f64;
    let kernel = RenormMode::KernelSubtraction;
    for _ in 0..20 {
        let g = Geometry::Cone {
            theta1: log_uniform(&mut rng, PI / 4.0, 8.0 * PI),
        };
        let r = log_uniform(&mut rng, 0.2, 5.0);
        let t = r / log_uniform(&mut rng, 0.1, 20.0);
        let lambda = log_uniform(&mut rng, 0.1, 10.0);
        let theta = rng.random_range(0.0..TAU);
        let beta = rng.random_range(-1.0..1.0);
        let c = Coupling::new(beta);
        let at = |r: f64, t: f64, c: Coupling| -> Result<StressTensor, String> {
            let fp = FieldPoint::new(r, theta, 0.0).map_err(|e| e.to_string())?;
            stress_at(&g, &fp, c, t, kernel).map_err(|e| e.to_string())
        };
        let s = at(r, t, c)?;
        let scaled = at(lambda * r, lambda * t, c)?;
        let back = StressTensor::from_components(scaled.components().map(|v| v * lambda.powi(4)), kernel, t);
        scaling = scaling.max(tensor_rel(&s, &back));

        let s0 = at(r, t, Coupling::new(0.0))?;
        let s1 = at(r, t, Coupling::new(1.0))?;
        let pred: Vec<f64> = (0..4)
            .map(|i| s0.components()[i] + beta * (s1.components()[i] - s0.components()[i]))
            .collect();
        let scale = s0.max_abs().max(beta.abs() * s1.minus(&s0).max_abs());
        for (p, v) in pred.iter().zip(s.components()) {
            affinity = affinity.max((p - v).abs() / scale);
        }
    }
    verdict(
        scaling.max(affinity),
        1e-10,
        &format!("20 cone points; scaling {scaling:.2e}, beta-affinity {affinity:.2e}"),
    )
}

fn conservation_and_trace() -> Outcome {
    let geometries = [Geometry::Cone { theta1: PI }, Geometry::Cone { theta1: 4.0 * PI }, Geometry::Dowker];
    let mut conservation = 0.0f64;
    let mut tr = 0.0f64;
    for g in &geometries {
        for r in [1.0, 2.0] {
            for beta in [0.0, -1.0 / 12.0, -0.25, 1.0] {
                conservation = conservation.max(conservation_residual(g, r, Coupling::new(beta)).map_err(|e| e.to_string())?);
            }
            let fp = FieldPoint::new(r, 0.0, 0.0).map_err(|e| e.to_string())?;
            let s = stress_t0(g, &fp, Coupling::conformal(), &Ladder::default()).map_err(|e| e.to_string())?;
            tr = tr.max(trace(&s.stress).abs() / s.stress.max_abs());
        }
    }
    let line = format!("conservation {conservation:.2e} (limit 1e-3), conformal trace {tr:.2e} (limit 1e-4)");
    if conservation <= 1e-3 && tr <= 1e-4 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn three_d() -> Outcome {
    let mut rng = rng(12);
    let quad = QuadConfig::with_rel(1e-10);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let theta1 = rng.random_range(PI / 2.0..4.0 * PI);
        let r = rng.random_range(0.5..2.0);
        let rp = rng.random_range(0.5..2.0);
        let t = rng.random_range(0.2..1.5);
        let th = rng.random_range(0.0..theta1);
        let p = PointPair::new(t, r, rp, th, 0.0, 0.0, 0.0).map_err(|e| e.to_string())?;
        worst = worst.max(rel(ok(tbar_3d(&p, theta1, quad))?, ok(tbar_3d_z_reduction(&p, theta1, quad))?));
    }
    verdict(worst, 1e-6, "5 points, quadrature vs z-integral of the 4-D kernel")
}

const FIGURES: [&str; 16] = [
    "fig1", "fig1b", "fig2mis", "fig2ext", "fig2b", "fig3", "fig3b", "fig4", "coneang1", "coneang2", "fig5",
    "fig5b", "fig6", "fig6b", "fig7", "fig7b",
];

fn snapshot(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let key = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(key, std::fs::read(&path).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(out)
}

fn run_figures(dir: &Path, workers: Option<usize>) -> Result<BTreeMap<String, Vec<u8>>, String> {
    for id in FIGURES {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_conevac"));
        cmd.args(["figure", id, "--out-dir"]).arg(dir);
        if let Some(w) = workers {
            cmd.args(["--workers", &w.to_string()]);
        }
        let out = cmd.output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("figure {id} failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
    }
    snapshot(dir)
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [(Some(1), "a"), (Some(1), "b"), (Some(4), "c"), (None, "d")];
    let mut snaps = Vec::new();
    for (workers, name) in runs {
        snaps.push(run_figures(&tmp.path().join(name), workers)?);
    }
    let files = snaps[0].len();
    let csvs = snaps[0].keys().filter(|k| k.ends_with(".csv")).count();
    let empty = snaps[0]
        .iter()
        .filter(|(k, _)| k.ends_with(".csv"))
        .any(|(_, v)| String::from_utf8_lossy(v).lines().skip(1).any(|l| l.split(',').any(str::is_empty)));
    if empty {
        return Err("some figure CSV has empty cells".into());
    }
    for (i, s) in snaps.iter().enumerate().skip(1) {
        if s != &snaps[0] {
            let differing: Vec<&String> = s.keys().filter(|k| snaps[0].get(*k) != s.get(*k)).collect();
            return Err(format!("run {i} differs from run 0 in {differing:?}"));
        }
    }
    Ok(format!(
        "{csvs} CSV files ({files} with sidecars), identical over 2 runs with 1 worker, 4 workers and the default"
    ))
}

fn main() {
    let criteria: [(&str, Check); 13] = [
        ("flat-space pipeline reproduces the zero-point stress", flat_pipeline),
        ("renormalized Minkowski stress vanishes", minkowski_renormalized),
        ("cone closed form vs Dowker image sum", cone_vs_image_sum),
        ("cone closed form vs Fourier-Bessel mode sum", cone_vs_mode_sum),
        ("wedge at good angles vs Cartesian images", wedge_good_angles),
        ("Dirichlet wedge kernel vanishes on the plates", dirichlet_plates),
        ("large-angle cone matches Dowker", large_angle),
        ("energy density changes sign across 2pi", sign_change),
        ("conformal wedge energy is angle independent", conformal_angle_independence),
        ("scaling law and beta-affinity", scaling_and_affinity),
        ("conservation and conformal trace", conservation_and_trace),
        ("3-D kernel consistency", three_d),
        ("figure output is deterministic", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("{tag} {:>2}. {name}: {detail} [{secs:.1}s]", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
