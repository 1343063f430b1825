//! The broadcast channel, auxiliary laws and the information functionals
//! that parametrise the inner and outer rate regions.

use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{conditional_mutual_information, mutual_information, JointPmf, MASS_TOL};

/// Stochasticity tolerance applied when loading channel or auxiliary files.
pub const LOAD_TOL: f64 = 1e-9;

/// Axis labels of the composed joint law.
pub const AXES: [&str; 5] = ["U", "V", "X", "Y1", "Y2"];

/// Capacity `C1` of the conference link, bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ConferenceCapacity(f64);

impl ConferenceCapacity {
    pub const ZERO: ConferenceCapacity = ConferenceCapacity(0.0);

    pub fn new(c1: f64) -> Result<Self> {
        if !(c1.is_finite() && c1 >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "conference capacity must be finite and >= 0, got {c1}"
            )));
        }
        Ok(ConferenceCapacity(c1))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ConferenceCapacity {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        ConferenceCapacity::new(v)
    }
}

impl From<ConferenceCapacity> for f64 {
    fn from(c: ConferenceCapacity) -> f64 {
        c.0
    }
}

fn check_rows(rows: impl Iterator<Item = (usize, f64)>, what: &str, tol: f64) -> Result<()> {
    for (i, total) in rows {
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidPmf(format!(
                "{what} {i} sums to {total}, violating stochasticity (tolerance {tol:e})"
            )));
        }
    }
    Ok(())
}

fn check_entries(w: &[f64], what: &str) -> Result<()> {
    if let Some((i, v)) = w.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidPmf(format!(
            "{what} entry {i} is {v}; probabilities must be finite and >= 0"
        )));
    }
    Ok(())
}

fn dirichlet_one<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Conditional law `P(y1, y2 | x)` of the broadcast channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelLaw {
    x_size: usize,
    y1_size: usize,
    y2_size: usize,
    /// Row-major in `(x, y1, y2)`.
    transition: Vec<f64>,
}

/// On-disk channel description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub x_size: usize,
    pub y1_size: usize,
    pub y2_size: usize,
    /// `transition[x][y1][y2] = P(y1, y2 | x)`.
    pub transition: Vec<Vec<Vec<f64>>>,
}

impl ChannelLaw {
    pub fn new(x_size: usize, y1_size: usize, y2_size: usize, transition: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(x_size, y1_size, y2_size, transition, MASS_TOL)
    }

    fn with_tolerance(
        x_size: usize,
        y1_size: usize,
        y2_size: usize,
        transition: Vec<f64>,
        tol: f64,
    ) -> Result<Self> {
        if x_size == 0 || y1_size == 0 || y2_size == 0 {
            return Err(Error::ShapeMismatch("channel alphabets must be nonempty".into()));
        }
        if x_size > 255 || y1_size > 255 || y2_size > 255 {
            return Err(Error::InvalidInput("alphabets are limited to 255 symbols".into()));
        }
        if transition.len() != x_size * y1_size * y2_size {
            return Err(Error::ShapeMismatch(format!(
                "transition has {} entries, expected {}",
                transition.len(),
                x_size * y1_size * y2_size
            )));
        }
        check_entries(&transition, "transition")?;
        let row = y1_size * y2_size;
        check_rows(
            transition.chunks(row).map(|r| r.iter().sum::<f64>()).enumerate(),
            "transition row for x =",
            tol,
        )?;
        let mut ch = ChannelLaw {
            x_size,
            y1_size,
            y2_size,
            transition,
        };
        // Rows accepted at a loose tolerance are renormalised exactly.
        for r in ch.transition.chunks_mut(row) {
            let total: f64 = r.iter().sum();
            r.iter_mut().for_each(|p| *p /= total);
        }
        Ok(ch)
    }

    /// Channel whose two outputs are conditionally independent given `x`.
    pub fn product(y1_given_x: &[Vec<f64>], y2_given_x: &[Vec<f64>]) -> Result<Self> {
        if y1_given_x.len() != y2_given_x.len() || y1_given_x.is_empty() {
            return Err(Error::ShapeMismatch("marginal channels disagree on |X|".into()));
        }
        let y1 = y1_given_x[0].len();
        let y2 = y2_given_x[0].len();
        let mut t = Vec::with_capacity(y1_given_x.len() * y1 * y2);
        for (r1, r2) in y1_given_x.iter().zip(y2_given_x) {
            if r1.len() != y1 || r2.len() != y2 {
                return Err(Error::ShapeMismatch("ragged marginal channel".into()));
            }
            for a in r1 {
                for b in r2 {
                    t.push(a * b);
                }
            }
        }
        ChannelLaw::new(y1_given_x.len(), y1, y2, t)
    }

    /// Two independent binary symmetric marginals with the given crossovers.
    pub fn bsc_pair(p1: f64, p2: f64) -> Result<Self> {
        let bsc = |p: f64| vec![vec![1.0 - p, p], vec![p, 1.0 - p]];
        ChannelLaw::product(&bsc(p1), &bsc(p2))
    }

    /// `Y1 = Y2 = X` over a `k`-ary alphabet.
    pub fn noiseless(k: usize) -> Self {
        let mut t = vec![0.0; k * k * k];
        for x in 0..k {
            t[(x * k + x) * k + x] = 1.0;
        }
        ChannelLaw::new(k, k, k, t).expect("identity channel is stochastic")
    }

    /// Physically degraded channel `X -> Y1 -> Y2`.
    pub fn degraded(y1_given_x: &[Vec<f64>], y2_given_y1: &[Vec<f64>]) -> Result<Self> {
        let y1 = y2_given_y1.len();
        if y1_given_x.iter().any(|r| r.len() != y1) || y1 == 0 {
            return Err(Error::ShapeMismatch("degrading kernel disagrees on |Y1|".into()));
        }
        let y2 = y2_given_y1[0].len();
        let mut t = Vec::new();
        for r in y1_given_x {
            for (a, p) in r.iter().enumerate() {
                for q in &y2_given_y1[a] {
                    t.push(p * q);
                }
            }
        }
        ChannelLaw::new(y1_given_x.len(), y1, y2, t)
    }

    /// Each row drawn from the flat Dirichlet over the `(y1, y2)` simplex.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, x_size: usize, y1_size: usize, y2_size: usize) -> Self {
        let t: Vec<f64> = (0..x_size)
            .flat_map(|_| dirichlet_one(rng, y1_size * y2_size))
            .collect();
        ChannelLaw::with_tolerance(x_size, y1_size, y2_size, t, 1e-9).expect("dirichlet rows")
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y1_size(&self) -> usize {
        self.y1_size
    }

    pub fn y2_size(&self) -> usize {
        self.y2_size
    }

    pub fn transition(&self) -> &[f64] {
        &self.transition
    }

    pub fn prob(&self, x: usize, y1: usize, y2: usize) -> f64 {
        self.transition[(x * self.y1_size + y1) * self.y2_size + y2]
    }

    /// The pair `(y1, y2)` distribution given `x`, flattened as `y1 * |Y2| + y2`.
    pub fn row(&self, x: usize) -> &[f64] {
        let r = self.y1_size * self.y2_size;
        &self.transition[x * r..(x + 1) * r]
    }

    pub fn y1_given_x(&self, x: usize, y1: usize) -> f64 {
        (0..self.y2_size).map(|b| self.prob(x, y1, b)).sum()
    }

    pub fn y2_given_x(&self, x: usize, y2: usize) -> f64 {
        (0..self.y1_size).map(|a| self.prob(x, a, y2)).sum()
    }

    pub fn from_spec(spec: &ChannelSpec) -> Result<Self> {
        if spec.transition.len() != spec.x_size {
            return Err(Error::ShapeMismatch(format!(
                "transition has {} rows, x_size is {}",
                spec.transition.len(),
                spec.x_size
            )));
        }
        let mut flat = Vec::with_capacity(spec.x_size * spec.y1_size * spec.y2_size);
        for (x, plane) in spec.transition.iter().enumerate() {
            if plane.len() != spec.y1_size {
                return Err(Error::ShapeMismatch(format!(
                    "transition[{x}] has {} entries, y1_size is {}",
                    plane.len(),
                    spec.y1_size
                )));
            }
            for (a, row) in plane.iter().enumerate() {
                if row.len() != spec.y2_size {
                    return Err(Error::ShapeMismatch(format!(
                        "transition[{x}][{a}] has {} entries, y2_size is {}",
                        row.len(),
                        spec.y2_size
                    )));
                }
                flat.extend_from_slice(row);
            }
        }
        ChannelLaw::with_tolerance(spec.x_size, spec.y1_size, spec.y2_size, flat, LOAD_TOL)
    }

    pub fn to_spec(&self) -> ChannelSpec {
        let transition = (0..self.x_size)
            .map(|x| {
                (0..self.y1_size)
                    .map(|a| (0..self.y2_size).map(|b| self.prob(x, a, b)).collect())
                    .collect()
            })
            .collect();
        ChannelSpec {
            x_size: self.x_size,
            y1_size: self.y1_size,
            y2_size: self.y2_size,
            transition,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: ChannelSpec = serde_json::from_str(s).map_err(|e| Error::json("channel spec", e))?;
        ChannelLaw::from_spec(&spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::InvalidInput(format!("channel spec not found: {}", path.display()))
            } else {
                Error::io(format!("reading {}", path.display()), e)
            }
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("channel spec serialises")
    }
}

/// Joint law `p(u, v, x)` of the auxiliaries and the channel input.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxJoint {
    u_size: usize,
    v_size: usize,
    x_size: usize,
    /// Row-major in `(u, v, x)`.
    weights: Vec<f64>,
}

/// On-disk auxiliary law. `weights[u][v][x] = p(u, v, x)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuxSpec {
    pub u_size: usize,
    pub v_size: usize,
    pub x_size: usize,
    pub weights: Vec<Vec<Vec<f64>>>,
}

impl AuxJoint {
    pub fn new(u_size: usize, v_size: usize, x_size: usize, weights: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(u_size, v_size, x_size, weights, MASS_TOL)
    }

    fn with_tolerance(
        u_size: usize,
        v_size: usize,
        x_size: usize,
        mut weights: Vec<f64>,
        tol: f64,
    ) -> Result<Self> {
        if u_size == 0 || v_size == 0 || x_size == 0 {
            return Err(Error::ShapeMismatch("auxiliary alphabets must be nonempty".into()));
        }
        if u_size > 255 || v_size > 255 || x_size > 255 {
            return Err(Error::InvalidInput("alphabets are limited to 255 symbols".into()));
        }
        if weights.len() != u_size * v_size * x_size {
            return Err(Error::ShapeMismatch(format!(
                "aux weights have {} entries, expected {}",
                weights.len(),
                u_size * v_size * x_size
            )));
        }
        check_entries(&weights, "aux")?;
        let total: f64 = weights.iter().sum();
        check_rows(std::iter::once((0, total)), "aux joint", tol)?;
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(AuxJoint {
            u_size,
            v_size,
            x_size,
            weights,
        })
    }

    /// Flat Dirichlet(1) draw over the full `(u, v, x)` simplex.
    pub fn random_dirichlet<R: Rng + ?Sized>(rng: &mut R, u_size: usize, v_size: usize, x_size: usize) -> Self {
        let w = dirichlet_one(rng, u_size * v_size * x_size);
        AuxJoint::with_tolerance(u_size, v_size, x_size, w, 1e-9).expect("dirichlet draw")
    }

    pub fn point_mass(sizes: (usize, usize, usize), at: (usize, usize, usize)) -> Self {
        let (us, vs, xs) = sizes;
        let mut w = vec![0.0; us * vs * xs];
        w[(at.0 * vs + at.1) * xs + at.2] = 1.0;
        AuxJoint::new(us, vs, xs, w).expect("point mass")
    }

    /// `p(u, x)` with `V` constant (`|V| = 1`).
    pub fn from_ux(u_size: usize, x_size: usize, p_ux: &[f64]) -> Result<Self> {
        AuxJoint::new(u_size, 1, x_size, p_ux.to_vec())
    }

    /// Builds `p(u,v,x)` from a function of the indices (e.g. a product of factors).
    pub fn from_fn(
        u_size: usize,
        v_size: usize,
        x_size: usize,
        f: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut w = Vec::with_capacity(u_size * v_size * x_size);
        for u in 0..u_size {
            for v in 0..v_size {
                for x in 0..x_size {
                    w.push(f(u, v, x));
                }
            }
        }
        AuxJoint::with_tolerance(u_size, v_size, x_size, w, 1e-9)
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn v_size(&self) -> usize {
        self.v_size
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn prob(&self, u: usize, v: usize, x: usize) -> f64 {
        self.weights[(u * self.v_size + v) * self.x_size + x]
    }

    pub fn p_u(&self) -> Vec<f64> {
        (0..self.u_size)
            .map(|u| self.weights[u * self.v_size * self.x_size..(u + 1) * self.v_size * self.x_size].iter().sum())
            .collect()
    }

    pub fn p_x(&self) -> Vec<f64> {
        let mut px = vec![0.0; self.x_size];
        for (i, w) in self.weights.iter().enumerate() {
            px[i % self.x_size] += w;
        }
        px
    }

    /// `P(V | U = u)`; uniform when `p(u) = 0` (such rows are never sampled).
    pub fn p_v_given_u(&self, u: usize) -> Vec<f64> {
        let mut row: Vec<f64> = (0..self.v_size)
            .map(|v| (0..self.x_size).map(|x| self.prob(u, v, x)).sum())
            .collect();
        normalise_or_uniform(&mut row);
        row
    }

    /// `P(X | U = u, V = v)`; uniform when `p(u, v) = 0`.
    pub fn p_x_given_uv(&self, u: usize, v: usize) -> Vec<f64> {
        let base = (u * self.v_size + v) * self.x_size;
        let mut row = self.weights[base..base + self.x_size].to_vec();
        normalise_or_uniform(&mut row);
        row
    }

    /// Drops `V`: the `(u, x)` marginal with a constant `V`.
    pub fn project_ux(&self) -> AuxJoint {
        let mut w = vec![0.0; self.u_size * self.x_size];
        for u in 0..self.u_size {
            for v in 0..self.v_size {
                for x in 0..self.x_size {
                    w[u * self.x_size + x] += self.prob(u, v, x);
                }
            }
        }
        AuxJoint::with_tolerance(self.u_size, 1, self.x_size, w, 1e-9).expect("marginal")
    }

    /// Constant `U` and `V' = (U, V)`; the matched law for the `R0 = 0` slice.
    pub fn merge_uv(&self) -> AuxJoint {
        AuxJoint {
            u_size: 1,
            v_size: self.u_size * self.v_size,
            x_size: self.x_size,
            weights: self.weights.clone(),
        }
    }

    /// The `(u, x)` marginal with `V = X`; the matched law for the `R1 = 0` slice.
    pub fn with_v_equal_x(&self) -> AuxJoint {
        let ux = self.project_ux();
        let xs = self.x_size;
        let mut w = vec![0.0; self.u_size * xs * xs];
        for u in 0..self.u_size {
            for x in 0..xs {
                w[(u * xs + x) * xs + x] = ux.prob(u, 0, x);
            }
        }
        AuxJoint {
            u_size: self.u_size,
            v_size: xs,
            x_size: xs,
            weights: w,
        }
    }

    pub fn from_spec(spec: &AuxSpec) -> Result<Self> {
        let mut flat = Vec::new();
        if spec.weights.len() != spec.u_size
            || spec.weights.iter().any(|p| p.len() != spec.v_size)
            || spec.weights.iter().flatten().any(|r| r.len() != spec.x_size)
        {
            return Err(Error::ShapeMismatch(
                "aux weights must be nested [u][v][x] with the declared sizes".into(),
            ));
        }
        for plane in &spec.weights {
            for row in plane {
                flat.extend_from_slice(row);
            }
        }
        AuxJoint::with_tolerance(spec.u_size, spec.v_size, spec.x_size, flat, LOAD_TOL)
    }

    pub fn to_spec(&self) -> AuxSpec {
        AuxSpec {
            u_size: self.u_size,
            v_size: self.v_size,
            x_size: self.x_size,
            weights: (0..self.u_size)
                .map(|u| {
                    (0..self.v_size)
                        .map(|v| (0..self.x_size).map(|x| self.prob(u, v, x)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::InvalidInput(format!("aux spec not found: {}", path.display()))
            } else {
                Error::io(format!("reading {}", path.display()), e)
            }
        })?;
        let spec: AuxSpec = serde_json::from_str(&text).map_err(|e| Error::json("aux spec", e))?;
        AuxJoint::from_spec(&spec)
    }
}

fn normalise_or_uniform(row: &mut [f64]) {
    let total: f64 = row.iter().sum();
    if total > 0.0 {
        row.iter_mut().for_each(|p| *p /= total);
    } else {
        let k = row.len() as f64;
        row.iter_mut().for_each(|p| *p = 1.0 / k);
    }
}

/// `p(u,v,x) P(y1,y2|x)` over axes `U, V, X, Y1, Y2`.
pub fn compose_full_joint(aux: &AuxJoint, ch: &ChannelLaw) -> Result<JointPmf> {
    if aux.x_size != ch.x_size {
        return Err(Error::ShapeMismatch(format!(
            "aux has |X| = {}, channel has |X| = {}",
            aux.x_size, ch.x_size
        )));
    }
    let out = ch.y1_size * ch.y2_size;
    let mut w = Vec::with_capacity(aux.weights.len() * out);
    for (i, p) in aux.weights.iter().enumerate() {
        let x = i % aux.x_size;
        w.extend(ch.row(x).iter().map(|q| p * q));
    }
    JointPmf::new(
        &AXES,
        &[aux.u_size, aux.v_size, aux.x_size, ch.y1_size, ch.y2_size],
        w,
    )
}

/// The information functionals appearing on the right-hand sides of both
/// regions, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MiVector {
    /// `I(U;Y2)`
    pub i_u_y2: f64,
    /// `I(V;Y2|U)`
    pub i_v_y2_given_u: f64,
    /// `I(X;Y1|U,V)`
    pub i_x_y1_given_uv: f64,
    /// `I(X;Y1|U)`
    pub i_x_y1_given_u: f64,
    /// `I(X;Y1)`
    pub i_x_y1: f64,
    /// `I(U,V;Y2)`
    pub i_uv_y2: f64,
    /// `I(X;Y2|U)`
    pub i_x_y2_given_u: f64,
    /// `I(X;Y2)`
    pub i_x_y2: f64,
}

impl MiVector {
    pub fn as_array(&self) -> [f64; 8] {
        [
            self.i_u_y2,
            self.i_v_y2_given_u,
            self.i_x_y1_given_uv,
            self.i_x_y1_given_u,
            self.i_x_y1,
            self.i_uv_y2,
            self.i_x_y2_given_u,
            self.i_x_y2,
        ]
    }

    /// `I(UV;Y2) - I(U;Y2) - I(V;Y2|U)`, zero for a consistent vector.
    pub fn chain_rule_residual(&self) -> f64 {
        self.i_uv_y2 - self.i_u_y2 - self.i_v_y2_given_u
    }

    /// Checks nonnegativity and the chain-rule identity within `tol`.
    pub fn validate(&self, tol: f64) -> std::result::Result<(), String> {
        if let Some(v) = self.as_array().iter().find(|v| !v.is_finite() || **v < -tol) {
            return Err(format!("negative or non-finite functional {v}"));
        }
        let r = self.chain_rule_residual();
        if r.abs() > tol {
            return Err(format!("chain rule I(UV;Y2) = I(U;Y2) + I(V;Y2|U) off by {r:e}"));
        }
        Ok(())
    }
}

pub fn mi_vector(aux: &AuxJoint, ch: &ChannelLaw) -> Result<MiVector> {
    let j = compose_full_joint(aux, ch)?;
    mi_vector_of_joint(&j)
}

/// Same as [`mi_vector`] for an already composed `U, V, X, Y1, Y2` joint.
pub fn mi_vector_of_joint(j: &JointPmf) -> Result<MiVector> {
    Ok(MiVector {
        i_u_y2: mutual_information(j, &["U"], &["Y2"])?,
        i_v_y2_given_u: conditional_mutual_information(j, &["V"], &["Y2"], &["U"])?,
        i_x_y1_given_uv: conditional_mutual_information(j, &["X"], &["Y1"], &["U", "V"])?,
        i_x_y1_given_u: conditional_mutual_information(j, &["X"], &["Y1"], &["U"])?,
        i_x_y1: mutual_information(j, &["X"], &["Y1"])?,
        i_uv_y2: mutual_information(j, &["U", "V"], &["Y2"])?,
        i_x_y2_given_u: conditional_mutual_information(j, &["X"], &["Y2"], &["U"])?,
        i_x_y2: mutual_information(j, &["X"], &["Y2"])?,
    })
}
