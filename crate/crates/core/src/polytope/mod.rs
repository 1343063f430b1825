//! Small exact geometry in three dimensions: half-space systems, vertex
//! enumeration by active-constraint triples, containment and convex hulls.
//!
//! Coordinates are `(R0, R0', R1)` when used for rate regions, but nothing
//! here depends on that.

mod hull;

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hull::{convex_hull, Hull};

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dist(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

/// Numerical tolerances shared by enumeration and the region checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Slack allowed when testing `normal . x <= offset`.
    pub feasibility: f64,
    /// Smallest singular value for three normals to count as independent.
    pub rank: f64,
    /// Points closer than this are the same vertex.
    pub dedup: f64,
    /// Slack for declaring a constraint active at a vertex.
    pub active: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            feasibility: 1e-9,
            rank: 1e-10,
            dedup: 1e-9,
            active: 1e-8,
        }
    }
}

/// `normal . x <= offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace3 {
    pub normal: Vec3,
    pub offset: f64,
}

impl HalfSpace3 {
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        if norm(normal) == 0.0 || !normal.iter().all(|c| c.is_finite()) || !offset.is_finite() {
            return Err(Error::InvalidInput(format!(
                "half-space needs a finite nonzero normal, got {normal:?} <= {offset}"
            )));
        }
        Ok(HalfSpace3 { normal, offset })
    }

    /// `normal . x - offset`; positive means violated.
    pub fn excess(&self, x: Vec3) -> f64 {
        dot(self.normal, x) - self.offset
    }

    pub fn is_active(&self, x: Vec3, tol: f64) -> bool {
        self.excess(x).abs() <= tol
    }
}

/// Intersection of finitely many half-spaces.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HPolytope3 {
    halfspaces: Vec<HalfSpace3>,
}

impl HPolytope3 {
    pub fn new(halfspaces: Vec<HalfSpace3>) -> Self {
        HPolytope3 { halfspaces }
    }

    /// Builds from rows `(a, b)` meaning `a . x <= b`; panics on a zero row.
    pub fn from_rows(rows: &[(Vec3, f64)]) -> Self {
        HPolytope3::new(
            rows.iter()
                .map(|&(a, b)| HalfSpace3::new(a, b).expect("nonzero normal"))
                .collect(),
        )
    }

    /// The three half-spaces `x_i >= 0`.
    pub fn nonnegative_orthant() -> Vec<HalfSpace3> {
        vec![
            HalfSpace3 { normal: [-1.0, 0.0, 0.0], offset: 0.0 },
            HalfSpace3 { normal: [0.0, -1.0, 0.0], offset: 0.0 },
            HalfSpace3 { normal: [0.0, 0.0, -1.0], offset: 0.0 },
        ]
    }

    /// Axis-aligned box `lo <= x <= hi`.
    pub fn cuboid(lo: Vec3, hi: Vec3) -> Self {
        let mut h = Vec::with_capacity(6);
        for i in 0..3 {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            h.push(HalfSpace3 { normal: e, offset: hi[i] });
            h.push(HalfSpace3 { normal: scale(e, -1.0), offset: -lo[i] });
        }
        HPolytope3::new(h)
    }

    pub fn halfspaces(&self) -> &[HalfSpace3] {
        &self.halfspaces
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn push(&mut self, h: HalfSpace3) {
        self.halfspaces.push(h);
    }

    pub fn with(mut self, h: HalfSpace3) -> Self {
        self.push(h);
        self
    }

    /// Adds `normal . x = offset` as two opposing half-spaces.
    pub fn with_equality(self, normal: Vec3, offset: f64) -> Self {
        self.with(HalfSpace3 { normal, offset })
            .with(HalfSpace3 { normal: scale(normal, -1.0), offset: -offset })
    }

    pub fn contains(&self, x: Vec3, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.excess(x) <= tol)
    }

    /// Largest violation over all half-spaces (`<= 0` inside).
    pub fn max_excess(&self, x: Vec3) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| h.excess(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of the half-spaces tight at `x`.
    pub fn active_set(&self, x: Vec3, tol: f64) -> Vec<usize> {
        (0..self.halfspaces.len())
            .filter(|&i| self.halfspaces[i].is_active(x, tol))
            .collect()
    }

    pub fn enumerate_vertices(&self, tol: &Tolerances) -> Enumeration {
        enumerate_vertices(self, tol)
    }

    /// Vertex set with default tolerances; empty for empty or unbounded input.
    pub fn vertices(&self) -> VertexSet {
        match enumerate_vertices(self, &Tolerances::default()) {
            Enumeration::Bounded(v) => v,
            _ => VertexSet::empty(Tolerances::default().dedup),
        }
    }
}

/// A finite point set with no two points within `dedup_tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexSet {
    points: Vec<Vec3>,
    dedup_tolerance: f64,
}

impl VertexSet {
    pub fn empty(dedup_tolerance: f64) -> Self {
        VertexSet { points: Vec::new(), dedup_tolerance }
    }

    /// Greedy deduplication in input order, then lexicographic sort.
    pub fn from_points(points: impl IntoIterator<Item = Vec3>, dedup_tolerance: f64) -> Self {
        let mut kept: Vec<Vec3> = Vec::new();
        for p in points {
            if !kept.iter().any(|q| dist(*q, p) <= dedup_tolerance) {
                kept.push(p);
            }
        }
        kept.sort_by(|a, b| a.partial_cmp(b).expect("finite vertex coordinates"));
        VertexSet { points: kept, dedup_tolerance }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dedup_tolerance(&self) -> f64 {
        self.dedup_tolerance
    }

    /// Whether some member is within `tol` of `p`.
    pub fn has_point(&self, p: Vec3, tol: f64) -> bool {
        self.points.iter().any(|q| dist(*q, p) <= tol)
    }

    /// Same points up to `tol`, in both directions.
    pub fn matches(&self, other: &VertexSet, tol: f64) -> bool {
        self.points.iter().all(|p| other.has_point(*p, tol))
            && other.points.iter().all(|p| self.has_point(*p, tol))
    }

    /// CSV with header `r0,r0p,r1`, one vertex per row in sorted order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r0,r0p,r1\n");
        for p in &self.points {
            writeln!(s, "{:.16e},{:.16e},{:.16e}", p[0], p[1], p[2]).expect("string write");
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("r0,r0p,r1") {
            return Err(Error::InvalidInput("vertex CSV must start with header r0,r0p,r1".into()));
        }
        let mut pts = Vec::new();
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidInput(format!("vertex CSV row {}: {e}", i + 1)))?;
            if cols.len() != 3 {
                return Err(Error::InvalidInput(format!("vertex CSV row {} needs 3 columns", i + 1)));
            }
            pts.push([cols[0], cols[1], cols[2]]);
        }
        Ok(VertexSet::from_points(pts, Tolerances::default().dedup))
    }
}

/// Result of vertex enumeration.
#[derive(Debug, Clone, PartialEq)]
pub enum Enumeration {
    Bounded(VertexSet),
    Empty,
    Unbounded,
}

impl Enumeration {
    pub fn bounded(self) -> Option<VertexSet> {
        match self {
            Enumeration::Bounded(v) => Some(v),
            _ => None,
        }
    }
}

/// Unit-normal rows with the slack each may use: `tol / max(1, |n|)`, so a
/// point accepted here also passes [`HPolytope3::contains`] at `tol`.
fn unit_rows(p: &HPolytope3, tol: f64) -> Vec<(Vec3, f64, f64)> {
    p.halfspaces
        .iter()
        .map(|h| {
            let n = norm(h.normal);
            (scale(h.normal, 1.0 / n), h.offset / n, tol / n.max(1.0))
        })
        .collect()
}

fn smallest_singular_value(rows: [Vec3; 3]) -> f64 {
    let m = Matrix3::from_rows(&[
        Vector3::from(rows[0]).transpose(),
        Vector3::from(rows[1]).transpose(),
        Vector3::from(rows[2]).transpose(),
    ]);
    m.singular_values().min()
}

fn solve3(rows: [Vec3; 3], b: Vec3) -> Option<Vec3> {
    let m = Matrix3::from_rows(&[
        Vector3::from(rows[0]).transpose(),
        Vector3::from(rows[1]).transpose(),
        Vector3::from(rows[2]).transpose(),
    ]);
    let x = m.lu().solve(&Vector3::from(b))?;
    Some([x[0], x[1], x[2]])
}

fn normals_rank(rows: &[(Vec3, f64, f64)], rank_tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(rows.len(), 3, |i, j| rows[i].0[j]);
    m.singular_values().iter().filter(|s| **s > rank_tol).count()
}

/// Whether some nonzero direction `d` satisfies every `n_i . d <= 0`.
fn has_recession_ray(rows: &[(Vec3, f64, f64)]) -> bool {
    const RAY_TOL: f64 = 1e-12;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let c = cross(rows[i].0, rows[j].0);
            let l = norm(c);
            if l <= 1e-12 {
                continue;
            }
            let d = scale(c, 1.0 / l);
            for dir in [d, scale(d, -1.0)] {
                if rows.iter().all(|(n, _, _)| dot(*n, dir) <= RAY_TOL) {
                    return true;
                }
            }
        }
    }
    false
}

fn triple_vertices(rows: &[(Vec3, f64, f64)], tol: &Tolerances) -> Vec<Vec3> {
    let m = rows.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let a = [rows[i].0, rows[j].0, rows[k].0];
                if smallest_singular_value(a) <= tol.rank {
                    continue;
                }
                let Some(x) = solve3(a, [rows[i].1, rows[j].1, rows[k].1]) else {
                    continue;
                };
                if rows.iter().all(|(n, b, slack)| dot(*n, x) - b <= *slack) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Enumerates the vertices of `p` by solving every independent triple of
/// bounding planes and keeping the feasible solutions.
///
/// Normals are scaled to unit length first. A candidate is feasible when it
/// violates no row by more than `tol.feasibility`, measured both as a
/// Euclidean distance and in the row's own units.
pub fn enumerate_vertices(p: &HPolytope3, tol: &Tolerances) -> Enumeration {
    let rows = unit_rows(p, tol.feasibility);
    let rank = normals_rank(&rows, tol.rank);
    if rank < 3 {
        // No vertices exist; tell empty from unbounded with a large box.
        const BOX: f64 = 1e6;
        let mut boxed = rows.clone();
        for i in 0..3 {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            boxed.push((e, BOX, tol.feasibility));
            boxed.push((scale(e, -1.0), BOX, tol.feasibility));
        }
        return if triple_vertices(&boxed, tol).is_empty() {
            Enumeration::Empty
        } else {
            Enumeration::Unbounded
        };
    }
    let pts = triple_vertices(&rows, tol);
    if pts.is_empty() {
        // A nonempty pointed polyhedron always has a vertex.
        return Enumeration::Empty;
    }
    if has_recession_ray(&rows) {
        return Enumeration::Unbounded;
    }
    Enumeration::Bounded(VertexSet::from_points(pts, tol.dedup))
}
