//! Inner and outer rate polytopes, the two-dimensional special-case regions
//! and distribution sampling for the union over auxiliary laws.
//!
//! Each polytope lives in `(R0, R0', R1)` space. A special-case region is a
//! planar polytope embedded in 3-D by pinning one coordinate to zero with a
//! pair of opposing half-spaces.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{mix_seed, Execution};
use crate::model::{mi_vector, AuxJoint, ChannelLaw, ConferenceCapacity, MiVector};
use crate::polytope::{Enumeration, HPolytope3, HalfSpace3, Hull, Tolerances, Vec3, VertexSet};
use crate::prob::JointPmf;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateTriple {
    pub r0: f64,
    pub r0p: f64,
    pub r1: f64,
}

impl RateTriple {
    pub fn new(r0: f64, r0p: f64, r1: f64) -> Result<Self> {
        for (name, v) in [("r0", r0), ("r0p", r0p), ("r1", r1)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(format!("rate {name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(RateTriple { r0, r0p, r1 })
    }

    pub fn as_array(&self) -> Vec3 {
        [self.r0, self.r0p, self.r1]
    }

    pub fn from_array(p: Vec3) -> Result<Self> {
        RateTriple::new(p[0], p[1], p[2])
    }

    pub fn scaled(&self, s: f64) -> Self {
        RateTriple { r0: self.r0 * s, r0p: self.r0p * s, r1: self.r1 * s }
    }

    pub fn sum(&self) -> f64 {
        self.r0 + self.r0p + self.r1
    }
}

impl fmt::Display for RateTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(R0 = {}, R0' = {}, R1 = {})", self.r0, self.r0p, self.r1)
    }
}

/// Coordinate axes of rate space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    R0,
    R0p,
    R1,
}

impl Axis {
    pub fn index(self) -> usize {
        self as usize
    }

    fn unit(self) -> Vec3 {
        let mut e = [0.0; 3];
        e[self.index()] = 1.0;
        e
    }
}

fn hs(normal: Vec3, offset: f64) -> HalfSpace3 {
    HalfSpace3 { normal, offset }
}

const E0: Vec3 = [1.0, 0.0, 0.0];
const E0P: Vec3 = [0.0, 1.0, 0.0];
const E1: Vec3 = [0.0, 0.0, 1.0];
const E0_0P: Vec3 = [1.0, 1.0, 0.0];
const E0P_1: Vec3 = [0.0, 1.0, 1.0];
const E0_1: Vec3 = [1.0, 0.0, 1.0];
const ALL: Vec3 = [1.0, 1.0, 1.0];

/// Labels of the five bound rows of [`inner_polytope`], in order.
pub const INNER_LABELS: [&str; 5] = [
    "R0 <= I(U;Y2)",
    "R0' <= I(V;Y2|U) + C1",
    "R1 <= I(X;Y1|UV)",
    "R0' + R1 <= I(X;Y1|U)",
    "R0 + R0' + R1 <= I(X;Y1)",
];

/// Labels of the five bound rows of [`outer_polytope`], in order.
pub const OUTER_LABELS: [&str; 5] = [
    "R0 <= I(U;Y2)",
    "R0 + R0' <= I(UV;Y2) + C1",
    "R0 + R0' + R1 <= I(X;Y1)",
    "R0 + R0' + R1 <= I(U;Y2) + I(X;Y1|U)",
    "R0 + R0' + R1 <= I(UV;Y2) + C1 + I(X;Y1|UV)",
];

/// Achievable polytope of one auxiliary law: five bounds plus nonnegativity.
pub fn inner_polytope(mi: &MiVector, c1: ConferenceCapacity) -> HPolytope3 {
    let c1 = c1.value();
    let mut h = vec![
        hs(E0, mi.i_u_y2),
        hs(E0P, mi.i_v_y2_given_u + c1),
        hs(E1, mi.i_x_y1_given_uv),
        hs(E0P_1, mi.i_x_y1_given_u),
        hs(ALL, mi.i_x_y1),
    ];
    h.extend(HPolytope3::nonnegative_orthant());
    HPolytope3::new(h)
}

/// Outer-bound polytope of one auxiliary law: five bounds plus nonnegativity.
pub fn outer_polytope(mi: &MiVector, c1: ConferenceCapacity) -> HPolytope3 {
    let c1 = c1.value();
    let mut h = vec![
        hs(E0, mi.i_u_y2),
        hs(E0_0P, mi.i_uv_y2 + c1),
        hs(ALL, mi.i_x_y1),
        hs(ALL, mi.i_u_y2 + mi.i_x_y1_given_u),
        hs(ALL, mi.i_uv_y2 + c1 + mi.i_x_y1_given_uv),
    ];
    h.extend(HPolytope3::nonnegative_orthant());
    HPolytope3::new(h)
}

/// `p` intersected with the plane `axis = 0`.
pub fn slice(p: &HPolytope3, axis: Axis) -> HPolytope3 {
    p.clone().with_equality(axis.unit(), 0.0)
}

/// The planar special-case regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpecialKind {
    /// No residual common message (`R0' = 0`): the broadcast channel with
    /// degraded message sets, `V` degenerate.
    Bc,
    /// No common message (`R0 = 0`): conferencing decoders, `U` degenerate.
    Bcc,
    /// No private message (`R1 = 0`), achievable form with `V = X`.
    NoR1Inner,
    /// No private message (`R1 = 0`), outer-bound trapezoid.
    NoR1Outer,
}

impl SpecialKind {
    pub const ALL: [SpecialKind; 4] =
        [SpecialKind::Bc, SpecialKind::Bcc, SpecialKind::NoR1Inner, SpecialKind::NoR1Outer];

    /// The coordinate pinned to zero.
    pub fn pinned_axis(self) -> Axis {
        match self {
            SpecialKind::Bc => Axis::R0p,
            SpecialKind::Bcc => Axis::R0,
            SpecialKind::NoR1Inner | SpecialKind::NoR1Outer => Axis::R1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpecialKind::Bc => "BC",
            SpecialKind::Bcc => "BCC",
            SpecialKind::NoR1Inner => "NO_R1_INNER",
            SpecialKind::NoR1Outer => "NO_R1_OUTER",
        }
    }
}

impl FromStr for SpecialKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SpecialKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown special region `{s}` (expected BC, BCC, NO_R1_INNER or NO_R1_OUTER)"
                ))
            })
    }
}

/// Planar special-case region, embedded in 3-D.
///
/// The sum-rate forms are written so that, for the matched auxiliary law
/// (`V` constant for BC, `(U,V)` merged for BCC, `V = X` for the `R1 = 0`
/// pair), the bounds coincide with those of the outer polytope restricted to
/// the same plane.
pub fn special_region(kind: SpecialKind, mi: &MiVector, c1: ConferenceCapacity) -> HPolytope3 {
    let c1 = c1.value();
    let mut h = match kind {
        SpecialKind::Bc => vec![
            hs(E0, mi.i_u_y2),
            hs(E0_1, mi.i_x_y1),
            hs(E0_1, mi.i_u_y2 + mi.i_x_y1_given_u),
        ],
        SpecialKind::Bcc => vec![
            hs(E0P, mi.i_uv_y2 + c1),
            hs(E0P_1, mi.i_x_y1),
            hs(E0P_1, mi.i_uv_y2 + c1 + mi.i_x_y1_given_uv),
        ],
        SpecialKind::NoR1Inner => vec![
            hs(E0, mi.i_u_y2),
            hs(E0P, mi.i_x_y1_given_u),
            hs(E0P, mi.i_x_y2_given_u + c1),
            hs(E0_0P, mi.i_x_y1),
        ],
        SpecialKind::NoR1Outer => vec![
            hs(E0, mi.i_u_y2),
            hs(E0_0P, mi.i_u_y2 + mi.i_x_y1_given_u),
            hs(E0_0P, mi.i_x_y2 + c1),
            hs(E0_0P, mi.i_x_y1),
        ],
    };
    h.extend(HPolytope3::nonnegative_orthant());
    HPolytope3::new(h).with_equality(kind.pinned_axis().unit(), 0.0)
}

fn entropies(aux: &AuxJoint) -> Result<JointPmf> {
    JointPmf::new(&["U", "V", "X"], &[aux.u_size(), aux.v_size(), aux.x_size()], aux.weights().to_vec())
}

/// Checks the substitution each special region assumes.
pub fn validate_substitution(kind: SpecialKind, aux: &AuxJoint) -> Result<()> {
    const TOL: f64 = 1e-9;
    let j = entropies(aux)?;
    let h = |g: &[&str]| j.entropy_of(g);
    let ok = match kind {
        SpecialKind::Bc => h(&["U", "V"])? - h(&["U"])? <= TOL,
        SpecialKind::Bcc => h(&["U"])? <= TOL,
        SpecialKind::NoR1Inner | SpecialKind::NoR1Outer => {
            h(&["U", "V", "X"])? - h(&["U", "V"])? <= TOL && h(&["U", "V", "X"])? - h(&["U", "X"])? <= TOL
        }
    };
    if ok {
        Ok(())
    } else {
        let need = match kind {
            SpecialKind::Bc => "V a function of U",
            SpecialKind::Bcc => "U constant",
            _ => "V = X",
        };
        Err(Error::InvalidInput(format!("{} requires {need}", kind.name())))
    }
}

/// [`special_region`] for an explicit auxiliary law, validating the substitution.
pub fn special_region_for_aux(
    kind: SpecialKind,
    aux: &AuxJoint,
    ch: &ChannelLaw,
    c1: ConferenceCapacity,
) -> Result<HPolytope3> {
    validate_substitution(kind, aux)?;
    Ok(special_region(kind, &mi_vector(aux, ch)?, c1))
}

/// The auxiliary law matched to the slice `axis = 0`.
pub fn matched_aux(aux: &AuxJoint, axis: Axis) -> AuxJoint {
    match axis {
        Axis::R0p => aux.project_ux(),
        Axis::R0 => aux.merge_uv(),
        Axis::R1 => aux.with_v_equal_x(),
    }
}

/// The special region used to certify vertices on the plane `axis = 0`.
pub fn boundary_kind(axis: Axis) -> SpecialKind {
    match axis {
        Axis::R0p => SpecialKind::Bc,
        Axis::R0 => SpecialKind::Bcc,
        Axis::R1 => SpecialKind::NoR1Outer,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexFailure {
    pub vertex: Vec3,
    pub reason: String,
}

/// Outcome of the vertex-level equivalence check for one auxiliary law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub passed: bool,
    pub outer_vertices: Vec<Vec3>,
    pub inner_vertices: Vec<Vec3>,
    pub positive_vertices: usize,
    pub boundary_vertices: usize,
    pub failures: Vec<VertexFailure>,
}

impl EquivalenceReport {
    pub fn first_failure(&self) -> Option<&VertexFailure> {
        self.failures.first()
    }
}

/// Coordinates at or below this are on the boundary of the orthant.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Verifies, vertex by vertex, that the outer polytope of `mi` is covered by
/// the achievable constructions.
///
/// Vertices with all coordinates positive must have the first two outer
/// rows active and satisfy every inner bound. Vertices on a coordinate plane
/// must lie in the special region for that plane. Every inner vertex must lie
/// in the outer polytope.
pub fn check_equivalence(mi: &MiVector, c1: ConferenceCapacity, tol: &Tolerances) -> EquivalenceReport {
    let outer = outer_polytope(mi, c1);
    let inner = inner_polytope(mi, c1);
    let mut failures = Vec::new();
    let outer_v = match outer.enumerate_vertices(tol) {
        Enumeration::Bounded(v) => v,
        other => {
            failures.push(VertexFailure {
                vertex: [f64::NAN; 3],
                reason: format!("outer polytope enumeration returned {other:?}"),
            });
            VertexSet::empty(tol.dedup)
        }
    };
    let inner_v = inner.vertices();
    let (mut positive, mut boundary) = (0, 0);
    for &v in outer_v.points() {
        if v.iter().all(|c| *c > BOUNDARY_TOL) {
            positive += 1;
            for (row, label) in outer.halfspaces()[..2].iter().zip(&OUTER_LABELS) {
                if !row.is_active(v, tol.active) {
                    failures.push(VertexFailure {
                        vertex: v,
                        reason: format!("positive vertex does not activate `{label}` (excess {:e})", row.excess(v)),
                    });
                }
            }
            for (row, label) in inner.halfspaces().iter().zip(&INNER_LABELS) {
                if row.excess(v) > tol.feasibility {
                    failures.push(VertexFailure {
                        vertex: v,
                        reason: format!("positive vertex violates inner `{label}` by {:e}", row.excess(v)),
                    });
                }
            }
        } else {
            boundary += 1;
            for axis in [Axis::R0, Axis::R0p, Axis::R1] {
                if v[axis.index()] > BOUNDARY_TOL {
                    continue;
                }
                let kind = boundary_kind(axis);
                let region = special_region(kind, mi, c1);
                // The pinned coordinate is within BOUNDARY_TOL of zero, not exactly zero.
                if !region.contains(v, tol.feasibility.max(BOUNDARY_TOL)) {
                    failures.push(VertexFailure {
                        vertex: v,
                        reason: format!(
                            "boundary vertex outside {} region (excess {:e})",
                            kind.name(),
                            region.max_excess(v)
                        ),
                    });
                }
            }
        }
    }
    for &v in inner_v.points() {
        if !outer.contains(v, tol.feasibility) {
            failures.push(VertexFailure {
                vertex: v,
                reason: format!("inner vertex outside outer polytope (excess {:e})", outer.max_excess(v)),
            });
        }
    }
    EquivalenceReport {
        passed: failures.is_empty(),
        outer_vertices: outer_v.points().to_vec(),
        inner_vertices: inner_v.points().to_vec(),
        positive_vertices: positive,
        boundary_vertices: boundary,
        failures,
    }
}

/// Outcome of the corner check for the `R1 = 0` trapezoid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerReport {
    pub passed: bool,
    pub corners: Vec<Vec3>,
    pub failures: Vec<VertexFailure>,
}

/// Every vertex of the `R1 = 0` outer trapezoid with both coordinates
/// positive must satisfy the achievable `R1 = 0` bounds.
pub fn check_no_r1_corners(mi: &MiVector, c1: ConferenceCapacity, tol: &Tolerances) -> CornerReport {
    let outer = special_region(SpecialKind::NoR1Outer, mi, c1);
    let inner = special_region(SpecialKind::NoR1Inner, mi, c1);
    let corners: Vec<Vec3> = outer
        .vertices()
        .points()
        .iter()
        .copied()
        .filter(|v| v[0] > BOUNDARY_TOL && v[1] > BOUNDARY_TOL)
        .collect();
    let failures: Vec<VertexFailure> = corners
        .iter()
        .filter(|v| !inner.contains(**v, tol.feasibility))
        .map(|&v| VertexFailure {
            vertex: v,
            reason: format!("corner violates the achievable bounds by {:e}", inner.max_excess(v)),
        })
        .collect();
    CornerReport { passed: failures.is_empty(), corners, failures }
}

/// One term of the union: an auxiliary law and its two polytopes.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSample {
    pub aux: AuxJoint,
    pub mi: MiVector,
    pub inner_poly: HPolytope3,
    pub outer_poly: HPolytope3,
    pub inner_vertices: VertexSet,
}

impl RegionSample {
    pub fn new(aux: AuxJoint, ch: &ChannelLaw, c1: ConferenceCapacity) -> Result<Self> {
        let mi = mi_vector(&aux, ch)?;
        let inner_poly = inner_polytope(&mi, c1);
        let outer_poly = outer_polytope(&mi, c1);
        let inner_vertices = inner_poly.vertices();
        Ok(RegionSample { aux, mi, inner_poly, outer_poly, inner_vertices })
    }
}

/// Sampled approximation of the achievable region.
///
/// The hull is an inner approximation of the union; treating it as
/// achievable relies on time sharing between the sampled laws.
#[derive(Debug, Clone)]
pub struct RegionApprox {
    pub samples: Vec<RegionSample>,
    pub hull: Hull,
    pub c1: ConferenceCapacity,
}

impl RegionApprox {
    pub fn hull_vertices(&self) -> &VertexSet {
        self.hull.vertices()
    }
}

/// Hull over an explicit list of auxiliary laws.
pub fn region_from_auxes(
    auxes: Vec<AuxJoint>,
    ch: &ChannelLaw,
    c1: ConferenceCapacity,
    exec: Execution,
) -> Result<RegionApprox> {
    let samples: Vec<RegionSample> = exec
        .map_slice(&auxes, |a| RegionSample::new(a.clone(), ch, c1))
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(assemble(samples, c1))
}

fn assemble(samples: Vec<RegionSample>, c1: ConferenceCapacity) -> RegionApprox {
    let cloud: Vec<Vec3> = samples
        .iter()
        .flat_map(|s| s.inner_vertices.points().iter().copied())
        .collect();
    RegionApprox { hull: Hull::new(&cloud), samples, c1 }
}

/// Compositions of `total` into `parts` nonnegative integers, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Coarse lattice of input laws `p(x)` with at most 64 points.
fn px_lattice(x_size: usize) -> Vec<Vec<f64>> {
    let resolution = (1..=4)
        .rev()
        .find(|&l| binomial(l + x_size - 1, x_size - 1) <= 64)
        .unwrap_or(0);
    if resolution == 0 {
        return (0..x_size.min(64))
            .map(|x| (0..x_size).map(|k| if k == x { 1.0 } else { 0.0 }).collect())
            .collect();
    }
    compositions(resolution, x_size)
        .into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / resolution as f64).collect())
        .collect()
}

/// The deterministic prefix of every sampling run: for each lattice point
/// `p(x)`, the laws `U = X` (V constant), `V = X` (U constant), both
/// constant, and `U = V = X`.
pub fn structured_auxes(x_size: usize) -> Vec<AuxJoint> {
    let mut out = Vec::new();
    for px in px_lattice(x_size) {
        let diag = |u: usize, x: usize| if u == x { px[x] } else { 0.0 };
        out.push(AuxJoint::from_fn(x_size, 1, x_size, |u, _, x| diag(u, x)).expect("lattice law"));
        out.push(AuxJoint::from_fn(1, x_size, x_size, |_, v, x| diag(v, x)).expect("lattice law"));
        out.push(AuxJoint::from_fn(1, 1, x_size, |_, _, x| px[x]).expect("lattice law"));
        out.push(
            AuxJoint::from_fn(x_size, x_size, x_size, |u, v, x| if u == v { diag(u, x) } else { 0.0 })
                .expect("lattice law"),
        );
    }
    out
}

/// Default auxiliary cardinalities `(|U|, |V|)` for an input alphabet.
pub fn default_cards(x_size: usize) -> (usize, usize) {
    (x_size + 3, x_size + 3)
}

/// Sample `index` of a sampling run; depends only on `(seed, index)`.
///
/// After the structured prefix the draws cycle through a flat Dirichlet law
/// on the full `(u, v, x)` simplex, `V` constant, `U` constant, and `V = X`.
pub fn sample_aux(x_size: usize, cards: (usize, usize), seed: u64, index: usize, prefix: &[AuxJoint]) -> AuxJoint {
    if let Some(a) = prefix.get(index) {
        return a.clone();
    }
    let k = index - prefix.len();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0x5245_4749_4f4e, index as u64));
    let (us, vs) = cards;
    match k % 4 {
        0 => AuxJoint::random_dirichlet(&mut rng, us, vs, x_size),
        1 => AuxJoint::random_dirichlet(&mut rng, us, 1, x_size),
        2 => AuxJoint::random_dirichlet(&mut rng, 1, vs, x_size),
        _ => AuxJoint::random_dirichlet(&mut rng, us, 1, x_size).with_v_equal_x(),
    }
}

/// Approximates the achievable region by `n_samples` auxiliary laws.
pub fn sample_region(
    ch: &ChannelLaw,
    c1: ConferenceCapacity,
    n_samples: usize,
    cards: (usize, usize),
    seed: u64,
) -> Result<RegionApprox> {
    sample_region_with(ch, c1, n_samples, cards, seed, Execution::default())
}

pub fn sample_region_with(
    ch: &ChannelLaw,
    c1: ConferenceCapacity,
    n_samples: usize,
    cards: (usize, usize),
    seed: u64,
    exec: Execution,
) -> Result<RegionApprox> {
    if n_samples == 0 {
        return Err(Error::InvalidInput("number of samples must be >= 1".into()));
    }
    if cards.0 == 0 || cards.1 == 0 || cards.0 > 255 || cards.1 > 255 {
        return Err(Error::InvalidInput(format!("auxiliary cardinalities must be in 1..=255, got {cards:?}")));
    }
    let prefix = structured_auxes(ch.x_size());
    let samples: Vec<RegionSample> = exec
        .map_indexed(n_samples, |i| {
            RegionSample::new(sample_aux(ch.x_size(), cards, seed, i, &prefix), ch, c1)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(assemble(samples, c1))
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub index: usize,
    pub mi: MiVector,
    pub inner_vertices: Vec<Vec3>,
    pub outer_vertices: Vec<Vec3>,
    pub equivalence_passed: bool,
    pub failures: Vec<VertexFailure>,
}

/// JSON-ready description of a sampled region.
#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    pub c1: f64,
    pub samples: usize,
    pub hull_vertices: Vec<Vec3>,
    pub hull_kind: &'static str,
    pub assumptions: Vec<&'static str>,
    pub all_checks_passed: bool,
    pub per_sample: Vec<SampleReport>,
}

impl RegionReport {
    pub fn new(region: &RegionApprox, tol: &Tolerances, exec: Execution) -> Self {
        let per_sample: Vec<SampleReport> = exec.map_indexed(region.samples.len(), |i| {
            let s = &region.samples[i];
            let check = check_equivalence(&s.mi, region.c1, tol);
            SampleReport {
                index: i,
                mi: s.mi,
                inner_vertices: check.inner_vertices,
                outer_vertices: check.outer_vertices,
                equivalence_passed: check.passed,
                failures: check.failures,
            }
        });
        RegionReport {
            c1: region.c1.value(),
            samples: region.samples.len(),
            hull_vertices: region.hull_vertices().points().to_vec(),
            hull_kind: "inner approximation of the union over sampled auxiliary laws",
            assumptions: vec![
                "points between sampled polytopes are taken as achievable by time sharing (convexity of the region)",
                "auxiliary cardinalities are a finite choice; the true union may be larger",
            ],
            all_checks_passed: per_sample.iter().all(|s| s.equivalence_passed),
            per_sample,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("region report serialises")
    }
}
