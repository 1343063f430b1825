//! Finite-alphabet probability primitives.
//!
//! Joint laws are dense row-major tensors with named axes. Information
//! quantities are computed from entropies of marginals, in bits, with the
//! convention `0 log 0 = 0`.

use crate::error::{Error, Result};

/// Mass tolerance for a valid pmf.
pub const MASS_TOL: f64 = 1e-12;

/// Negative information values down to this magnitude are rounding noise and
/// are clamped to zero.
pub const NEG_CLAMP: f64 = 1e-12;

fn check_weights(weights: &[f64], tol: f64) -> Result<()> {
    if let Some((i, w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !w.is_finite() || **w < 0.0)
    {
        return Err(Error::InvalidPmf(format!("entry {i} is {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidPmf(format!("total mass {total} differs from 1")));
    }
    Ok(())
}

/// A pmf over `{0, .., support_size-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    weights: Vec<f64>,
}

impl Pmf {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidPmf("empty support".into()));
        }
        check_weights(&weights, MASS_TOL)?;
        Ok(Pmf { weights })
    }

    /// Normalises nonnegative weights with a positive total.
    pub fn from_unnormalized(mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidPmf(format!(
                "cannot normalise weights with total {total}"
            )));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Pmf::new(weights)
    }

    pub fn uniform(k: usize) -> Self {
        Pmf {
            weights: vec![1.0 / k as f64; k],
        }
    }

    pub fn point_mass(k: usize, at: usize) -> Self {
        let mut weights = vec![0.0; k];
        weights[at] = 1.0;
        Pmf { weights }
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Shannon entropy in bits.
pub fn entropy(p: &Pmf) -> f64 {
    entropy_of_weights(&p.weights)
}

pub(crate) fn entropy_of_weights(weights: &[f64]) -> f64 {
    let h: f64 = weights
        .iter()
        .filter(|w| **w > 0.0)
        .map(|w| -w * w.log2())
        .sum();
    h.max(0.0)
}

/// Binary entropy function in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_weights(&[p, 1.0 - p])
}

/// A joint pmf over named discrete axes, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axis_names: Vec<String>,
    shape: Vec<usize>,
    weights: Vec<f64>,
}

impl JointPmf {
    pub fn new<S: AsRef<str>>(axis_names: &[S], shape: &[usize], weights: Vec<f64>) -> Result<Self> {
        let names: Vec<String> = axis_names.iter().map(|s| s.as_ref().to_owned()).collect();
        if names.is_empty() || names.len() != shape.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} axis names for a {}-dimensional shape",
                names.len(),
                shape.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidInput(format!("duplicate axis label `{n}`")));
            }
        }
        if shape.contains(&0) {
            return Err(Error::ShapeMismatch("zero-sized axis".into()));
        }
        let len: usize = shape.iter().product();
        if len != weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape:?} needs {len} weights, got {}",
                weights.len()
            )));
        }
        check_weights(&weights, MASS_TOL)?;
        Ok(JointPmf {
            axis_names: names,
            shape: shape.to_vec(),
            weights,
        })
    }

    pub fn axis_names(&self) -> &[String] {
        &self.axis_names
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn axis_index(&self, label: &str) -> Result<usize> {
        self.axis_names
            .iter()
            .position(|n| n == label)
            .ok_or_else(|| Error::UnknownAxis(label.to_owned()))
    }

    /// Flattens the joint into a pmf over its row-major index.
    pub fn to_pmf(&self) -> Pmf {
        Pmf {
            weights: self.weights.clone(),
        }
    }

    /// Sums out every axis not in `keep`. Kept axes stay in their original order.
    pub fn marginalize<S: AsRef<str>>(&self, keep: &[S]) -> Result<JointPmf> {
        if keep.is_empty() {
            return Err(Error::EmptyGroup);
        }
        let mut kept = vec![false; self.shape.len()];
        for label in keep {
            kept[self.axis_index(label.as_ref())?] = true;
        }
        let out_shape: Vec<usize> = self
            .shape
            .iter()
            .zip(&kept)
            .filter(|(_, k)| **k)
            .map(|(s, _)| *s)
            .collect();
        let out_names: Vec<String> = self
            .axis_names
            .iter()
            .zip(&kept)
            .filter(|(_, k)| **k)
            .map(|(n, _)| n.clone())
            .collect();

        // Output stride of each input axis, zero for summed-out axes.
        let mut out_strides = vec![0usize; self.shape.len()];
        let mut stride = 1;
        for axis in (0..self.shape.len()).rev() {
            if kept[axis] {
                out_strides[axis] = stride;
                stride *= self.shape[axis];
            }
        }

        let mut out = vec![0.0; out_shape.iter().product()];
        let mut digits = vec![0usize; self.shape.len()];
        let mut target = 0usize;
        for &w in &self.weights {
            out[target] += w;
            // Odometer increment over the input index, tracking the output offset.
            for axis in (0..self.shape.len()).rev() {
                digits[axis] += 1;
                target += out_strides[axis];
                if digits[axis] < self.shape[axis] {
                    break;
                }
                target -= out_strides[axis] * self.shape[axis];
                digits[axis] = 0;
            }
        }
        Ok(JointPmf {
            axis_names: out_names,
            shape: out_shape,
            weights: out,
        })
    }

    /// Joint entropy `H(group)` in bits.
    pub fn entropy_of<S: AsRef<str>>(&self, group: &[S]) -> Result<f64> {
        Ok(entropy_of_weights(&self.marginalize(group)?.weights))
    }

    pub fn mutual_information<S: AsRef<str>>(&self, a: &[S], b: &[S]) -> Result<f64> {
        mutual_information(self, a, b)
    }

    pub fn conditional_mutual_information<S: AsRef<str>>(
        &self,
        a: &[S],
        b: &[S],
        c: &[S],
    ) -> Result<f64> {
        conditional_mutual_information(self, a, b, c)
    }
}

fn check_disjoint<S: AsRef<str>>(groups: &[&[S]]) -> Result<()> {
    for (i, g) in groups.iter().enumerate() {
        for label in g.iter() {
            for other in &groups[i + 1..] {
                if other.iter().any(|o| o.as_ref() == label.as_ref()) {
                    return Err(Error::OverlappingGroups(label.as_ref().to_owned()));
                }
            }
            let dup = g.iter().filter(|l| l.as_ref() == label.as_ref()).count();
            if dup > 1 {
                return Err(Error::OverlappingGroups(label.as_ref().to_owned()));
            }
        }
    }
    Ok(())
}

fn clamp_information(value: f64) -> f64 {
    if (-NEG_CLAMP..0.0).contains(&value) {
        0.0
    } else {
        value
    }
}

fn union<S: AsRef<str>>(groups: &[&[S]]) -> Vec<String> {
    groups
        .iter()
        .flat_map(|g| g.iter().map(|s| s.as_ref().to_owned()))
        .collect()
}

/// `I(A;B) = H(A) + H(B) - H(A,B)` in bits.
pub fn mutual_information<S: AsRef<str>>(j: &JointPmf, a: &[S], b: &[S]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyGroup);
    }
    check_disjoint(&[a, b])?;
    let h_a = j.entropy_of(a)?;
    let h_b = j.entropy_of(b)?;
    let h_ab = j.entropy_of(&union(&[a, b]))?;
    Ok(clamp_information(h_a + h_b - h_ab))
}

/// `I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)` in bits. An empty `c`
/// reduces to [`mutual_information`].
pub fn conditional_mutual_information<S: AsRef<str>>(
    j: &JointPmf,
    a: &[S],
    b: &[S],
    c: &[S],
) -> Result<f64> {
    if c.is_empty() {
        return mutual_information(j, a, b);
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyGroup);
    }
    check_disjoint(&[a, b, c])?;
    let h_ac = j.entropy_of(&union(&[a, c]))?;
    let h_bc = j.entropy_of(&union(&[b, c]))?;
    let h_abc = j.entropy_of(&union(&[a, b, c]))?;
    let h_c = j.entropy_of(c)?;
    Ok(clamp_information(h_ac + h_bc - h_abc - h_c))
}
