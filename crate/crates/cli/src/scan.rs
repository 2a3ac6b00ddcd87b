//! Parameter scans: evaluation grid, parallel evaluation, CSV and JSON output.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use conevac_core::stress::COMPONENT_NAMES;
use conevac_core::{stress_at, stress_t0, Coupling, FieldPoint, Geometry, Ladder, RenormMode, StressTensor};
use rayon::prelude::*;
use serde::Serialize;

use crate::parse::Cutoff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    R,
    Theta,
    Theta1,
}

impl SweepVar {
    pub fn column(&self) -> &'static str {
        match self {
            SweepVar::R => "r",
            SweepVar::Theta => "theta",
            SweepVar::Theta1 => "theta1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// What each row reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Stress,
    /// `stress(β = 1) - stress(β = 0)`
    BetaCorrection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSpec {
    pub geometry: Geometry,
    pub sweep: SweepVar,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// Fixed coordinates; the swept one is ignored.
    pub r: f64,
    pub theta: f64,
    pub z: f64,
    pub beta: f64,
    pub quantity: Quantity,
    #[serde(serialize_with = "ser_cutoffs")]
    pub cutoffs: Vec<Cutoff>,
    pub renorm: RenormMode,
    /// Indices into `[T00, Trr, Tperp, Tzz]`.
    #[serde(serialize_with = "ser_components")]
    pub components: Vec<usize>,
}

fn ser_cutoffs<S: serde::Serializer>(c: &[Cutoff], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|c| c.label()))
}

fn ser_components<S: serde::Serializer>(c: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|&i| COMPONENT_NAMES[i]))
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            bail!("a scan needs at least 2 points, got {}", self.points);
        }
        if !(self.from < self.to) || !self.from.is_finite() || !self.to.is_finite() {
            bail!("scan range must satisfy from < to, got [{}, {}]", self.from, self.to);
        }
        if self.components.is_empty() {
            bail!("no components requested");
        }
        if self.cutoffs.is_empty() {
            bail!("no cutoff requested");
        }
        if self.spacing == Spacing::Log && self.from <= 0.0 {
            bail!("log spacing needs a positive range start, got {}", self.from);
        }
        match self.sweep {
            SweepVar::R if self.from <= 0.0 => bail!("r sweep must stay positive, got from = {}", self.from),
            SweepVar::Theta1 => {
                if !matches!(self.geometry, Geometry::Cone { .. }) {
                    bail!("a theta1 sweep needs --geometry cone");
                }
                if self.from <= 0.0 {
                    bail!("theta1 sweep must stay positive, got from = {}", self.from);
                }
            }
            SweepVar::Theta => {
                if let Geometry::Wedge { theta0, .. } = self.geometry {
                    if self.from <= 0.0 || self.to >= theta0 {
                        bail!(
                            "theta sweep must lie inside the open wedge (0, {theta0}), got [{}, {}]",
                            self.from,
                            self.to
                        );
                    }
                }
            }
            _ => {}
        }
        if self.sweep != SweepVar::Theta1 {
            self.geometry.validate()?;
        }
        if self.sweep != SweepVar::R && !(self.r > 0.0) {
            bail!("--r must be positive, got {}", self.r);
        }
        if self.sweep != SweepVar::Theta {
            self.geometry.check_angle(self.theta)?;
        }
        if self.renorm == RenormMode::ComponentSubtraction && matches!(self.geometry, Geometry::Wedge { .. }) {
            bail!("--renorm component is not available for the wedge; use --renorm kernel");
        }
        Ok(())
    }

    /// Sweep values in ascending order.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                let v = match self.spacing {
                    Spacing::Linear => self.from + s * (self.to - self.from),
                    Spacing::Log => (self.from.ln() + s * (self.to.ln() - self.from.ln())).exp(),
                };
                // pin the endpoints exactly
                if i == 0 {
                    self.from
                } else if i == n - 1 {
                    self.to
                } else {
                    v
                }
            })
            .collect()
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec![self.sweep.column().to_string()];
        for c in &self.cutoffs {
            for &i in &self.components {
                let name = COMPONENT_NAMES[i];
                h.push(if self.cutoffs.len() == 1 {
                    name.to_string()
                } else {
                    match c {
                        Cutoff::At(t) => format!("{name}@t={t}"),
                        Cutoff::Zero => format!("{name}@t=0"),
                    }
                });
            }
        }
        h
    }

    fn stress(&self, geometry: &Geometry, fp: &FieldPoint, beta: f64, cutoff: Cutoff) -> Result<StressTensor> {
        let c = Coupling::new(beta);
        Ok(match cutoff {
            Cutoff::At(t) => stress_at(geometry, fp, c, t, self.renorm)?,
            Cutoff::Zero => stress_t0(geometry, fp, c, &Ladder::default())?.stress,
        })
    }

    fn quantity_at(&self, geometry: &Geometry, fp: &FieldPoint, cutoff: Cutoff) -> Result<[f64; 4]> {
        match self.quantity {
            Quantity::Stress => Ok(self.stress(geometry, fp, self.beta, cutoff)?.components()),
            Quantity::BetaCorrection => {
                let one = self.stress(geometry, fp, 1.0, cutoff)?;
                let zero = self.stress(geometry, fp, 0.0, cutoff)?;
                Ok(one.minus(&zero).components())
            }
        }
    }

    /// One row: the sweep value, then a cell per cutoff and component.
    /// Failed evaluations leave empty cells and a warning.
    pub fn row(&self, x: f64) -> (Vec<Option<f64>>, Vec<String>) {
        let (mut geometry, mut r, mut theta) = (self.geometry, self.r, self.theta);
        match self.sweep {
            SweepVar::R => r = x,
            SweepVar::Theta => theta = x,
            SweepVar::Theta1 => geometry = Geometry::Cone { theta1: x },
        }
        let mut cells = vec![Some(x)];
        let mut warnings = Vec::new();
        for &cutoff in &self.cutoffs {
            let res = FieldPoint::new(r, theta, self.z)
                .map_err(anyhow::Error::from)
                .and_then(|fp| self.quantity_at(&geometry, &fp, cutoff));
            match res {
                Ok(v) => cells.extend(self.components.iter().map(|&i| v[i].is_finite().then_some(v[i]))),
                Err(e) => {
                    warnings.push(format!("{}={x}, {}: {e}", self.sweep.column(), cutoff.label()));
                    cells.extend(self.components.iter().map(|_| None));
                }
            }
        }
        (cells, warnings)
    }
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub warnings: Vec<String>,
}

impl Table {
    pub fn failed_cells(&self) -> usize {
        self.rows.iter().flatten().filter(|c| c.is_none()).count()
    }

    /// RFC-4180 style, shortest round-trip numbers, empty cells for failures.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.map(|v| format!("{v:?}")).unwrap_or_default()))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// Evaluates every grid point (in parallel on the current rayon pool) and
/// assembles rows in sweep order.
pub fn run(spec: &ScanSpec) -> Result<Table> {
    spec.validate()?;
    let grid = spec.grid();
    let results: Vec<(Vec<Option<f64>>, Vec<String>)> = grid.par_iter().map(|&x| spec.row(x)).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for (r, w) in results {
        rows.push(r);
        warnings.extend(w);
    }
    Ok(Table {
        header: spec.header(),
        rows,
        warnings,
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    git_describe: &'static str,
    csv: String,
    spec: &'a ScanSpec,
    xi: f64,
    columns: &'a [String],
    rows: usize,
    failed_cells: usize,
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes the CSV body and its JSON metadata sidecar.
pub fn write(spec: &ScanSpec, table: &Table, csv_path: &Path) -> Result<()> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(csv_path, table.to_csv()?).with_context(|| format!("writing {}", csv_path.display()))?;
    let meta = Sidecar {
        tool: "conevac",
        version: env!("CARGO_PKG_VERSION"),
        git_describe: env!("CONEVAC_GIT_DESCRIBE"),
        csv: csv_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        spec,
        xi: Coupling::new(spec.beta).xi(),
        columns: &table.header,
        rows: table.rows.len(),
        failed_cells: table.failed_cells(),
    };
    let json_path = sidecar_path(csv_path);
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    std::fs::write(&json_path, text).with_context(|| format!("writing {}", json_path.display()))?;
    Ok(())
}
