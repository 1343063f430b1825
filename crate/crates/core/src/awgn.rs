//! Gaussian broadcast channel `Y_k = X + Z_k`, `Z_k ~ N(0, N_k)`, `N2 > N1`,
//! with input power `P` split across the three messages.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::ConferenceCapacity;
use crate::polytope::{HPolytope3, HalfSpace3, Hull, Vec3, VertexSet};

/// `0.5 * log2(1 + snr)`.
pub fn gaussian_capacity(snr: f64) -> Result<f64> {
    if !(snr >= 0.0) {
        return Err(Error::InvalidInput(format!("snr must be >= 0, got {snr}")));
    }
    Ok(0.5 * snr.ln_1p() / std::f64::consts::LN_2)
}

fn cap(snr: f64) -> f64 {
    0.5 * snr.max(0.0).ln_1p() / std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AwgnParams {
    pub power: f64,
    pub n1: f64,
    pub n2: f64,
    pub c1: ConferenceCapacity,
}

impl AwgnParams {
    pub fn new(power: f64, n1: f64, n2: f64, c1: ConferenceCapacity) -> Result<Self> {
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::InvalidInput(format!("power must be finite and > 0, got {power}")));
        }
        if !(n1.is_finite() && n1 > 0.0 && n2.is_finite()) {
            return Err(Error::InvalidInput(format!("noise variances must be finite and > 0, got n1 = {n1}, n2 = {n2}")));
        }
        if !(n2 > n1) {
            return Err(Error::InvalidInput(format!("receiver 2 must be the noisier one: need n2 > n1, got n1 = {n1}, n2 = {n2}")));
        }
        Ok(AwgnParams { power, n1, n2, c1 })
    }
}

/// Power fractions for the common, residual common and private layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub a0: f64,
    pub a0p: f64,
    pub a1: f64,
}

impl PowerSplit {
    pub fn new(a0: f64, a0p: f64, a1: f64) -> Result<Self> {
        if [a0, a0p, a1].iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidInput(format!("power fractions must be >= 0, got ({a0}, {a0p}, {a1})")));
        }
        if (a0 + a0p + a1 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("power fractions must sum to 1, got {}", a0 + a0p + a1)));
        }
        Ok(PowerSplit { a0, a0p, a1 })
    }
}

/// Right-hand sides of the four bounds for one split, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AwgnBounds {
    pub r0_max: f64,
    pub r0p_max: f64,
    pub r1_max: f64,
    pub r0p_plus_r1_max: f64,
}

/// Evaluates the four bounds. Receiver 2 treats the two inner layers as
/// noise when decoding the cloud centre, and the private layer as noise
/// when decoding the satellite; receiver 1 sees only its own noise.
pub fn bounds(p: &AwgnParams, s: &PowerSplit) -> AwgnBounds {
    let pw = p.power;
    AwgnBounds {
        r0_max: cap(s.a0 * pw / (p.n2 + (s.a0p + s.a1) * pw)),
        r0p_max: cap(s.a0p * pw / (p.n2 + s.a1 * pw)) + p.c1.value(),
        r1_max: cap(s.a1 * pw / p.n1),
        r0p_plus_r1_max: cap((s.a0p + s.a1) * pw / p.n1),
    }
}

/// The polytope of one split: four bounds plus nonnegativity.
pub fn awgn_bounds(p: &AwgnParams, s: &PowerSplit) -> HPolytope3 {
    let b = bounds(p, s);
    let mut h = vec![
        HalfSpace3 { normal: [1.0, 0.0, 0.0], offset: b.r0_max },
        HalfSpace3 { normal: [0.0, 1.0, 0.0], offset: b.r0p_max },
        HalfSpace3 { normal: [0.0, 0.0, 1.0], offset: b.r1_max },
        HalfSpace3 { normal: [0.0, 1.0, 1.0], offset: b.r0p_plus_r1_max },
    ];
    h.extend(HPolytope3::nonnegative_orthant());
    HPolytope3::new(h)
}

/// Barycentric grid on the 2-simplex with `grid` points per edge,
/// `grid * (grid + 1) / 2` splits in total.
pub fn simplex_grid(grid: usize) -> Result<Vec<PowerSplit>> {
    if grid < 2 {
        return Err(Error::InvalidInput(format!("grid must be >= 2, got {grid}")));
    }
    let m = grid - 1;
    let d = m as f64;
    let mut out = Vec::with_capacity(grid * (grid + 1) / 2);
    for i in 0..=m {
        for j in 0..=m - i {
            let k = m - i - j;
            out.push(PowerSplit { a0: i as f64 / d, a0p: j as f64 / d, a1: k as f64 / d });
        }
    }
    Ok(out)
}

/// Region swept over a power-split grid.
#[derive(Debug, Clone)]
pub struct AwgnRegion {
    pub params: AwgnParams,
    pub splits: Vec<(PowerSplit, AwgnBounds)>,
    pub hull: Hull,
}

impl AwgnRegion {
    pub fn hull_vertices(&self) -> &VertexSet {
        self.hull.vertices()
    }

    /// CSV header `a0,a0p,a1,r0_max,r0p_max,r1_max,r0p_plus_r1_max`, one row per split.
    pub fn boundary_csv(&self) -> String {
        let mut s = String::from("a0,a0p,a1,r0_max,r0p_max,r1_max,r0p_plus_r1_max\n");
        for (sp, b) in &self.splits {
            writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                sp.a0, sp.a0p, sp.a1, b.r0_max, b.r0p_max, b.r1_max, b.r0p_plus_r1_max
            )
            .expect("string write");
        }
        s
    }

    pub fn write_boundary_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.boundary_csv()).map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }
}

pub fn awgn_region(p: &AwgnParams, grid: usize) -> Result<AwgnRegion> {
    awgn_region_with(p, grid, Execution::default())
}

pub fn awgn_region_with(p: &AwgnParams, grid: usize, exec: Execution) -> Result<AwgnRegion> {
    let grid_pts = simplex_grid(grid)?;
    let per_split: Vec<(AwgnBounds, Vec<Vec3>)> = exec.map_slice(&grid_pts, |s| {
        (bounds(p, s), awgn_bounds(p, s).vertices().points().to_vec())
    });
    let cloud: Vec<Vec3> = per_split.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    let splits = grid_pts.into_iter().zip(per_split.into_iter().map(|(b, _)| b)).collect();
    Ok(AwgnRegion { params: *p, splits, hull: Hull::new(&cloud) })
}
