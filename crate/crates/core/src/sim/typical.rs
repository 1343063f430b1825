//! Entropy-typicality tests against the design law `p(u,v,x,y1,y2)`.
//!
//! A tuple of sequences over a variable set `S` is jointly typical when, for
//! every nonempty `T` in `S`, `| -log2 p_T(t^n) / n - H(T) | <= eps`.
//! Checks are split into levels so that a decoder can reject a cloud centre
//! before looking at any of its satellites: each level tests only the
//! subsets that contain the variable it introduces.

use crate::error::Result;
use crate::model::{compose_full_joint, AuxJoint, ChannelLaw};
use crate::prob::entropy_of_weights;

pub const U: usize = 0;
pub const V: usize = 1;
pub const X: usize = 2;
pub const Y1: usize = 3;
pub const Y2: usize = 4;

/// Marginal of the design law on one variable subset.
#[derive(Debug, Clone)]
struct Marginal {
    vars: Vec<usize>,
    log_p: Vec<f64>,
    entropy: f64,
}

/// All 31 marginals of the five-variable design law.
#[derive(Debug, Clone)]
pub struct DesignLaw {
    sizes: [usize; 5],
    marginals: Vec<Marginal>,
}

fn vars_of(mask: usize) -> Vec<usize> {
    (0..5).filter(|v| mask >> v & 1 == 1).collect()
}

impl DesignLaw {
    pub fn new(aux: &AuxJoint, ch: &ChannelLaw) -> Result<Self> {
        let joint = compose_full_joint(aux, ch)?;
        let sizes = [aux.u_size(), aux.v_size(), aux.x_size(), ch.y1_size(), ch.y2_size()];
        let mut marginals = Vec::with_capacity(32);
        marginals.push(Marginal { vars: Vec::new(), log_p: vec![0.0], entropy: 0.0 });
        for mask in 1..32 {
            let vars = vars_of(mask);
            let labels: Vec<&str> = vars.iter().map(|&v| crate::model::AXES[v]).collect();
            let w = joint.marginalize(&labels)?.weights().to_vec();
            marginals.push(Marginal {
                vars,
                entropy: entropy_of_weights(&w),
                log_p: w.iter().map(|p| if *p > 0.0 { p.log2() } else { f64::NEG_INFINITY }).collect(),
            });
        }
        Ok(DesignLaw { sizes, marginals })
    }

    pub fn sizes(&self) -> [usize; 5] {
        self.sizes
    }

    /// Whether a single output sequence is typical on its own.
    pub fn single_typical(&self, var: usize, seq: &[u8], eps: f64) -> bool {
        let m = &self.marginals[1 << var];
        let s: f64 = seq.iter().map(|&a| m.log_p[a as usize]).sum();
        (-s / seq.len() as f64 - m.entropy).abs() <= eps
    }

    /// Level over `vars` that tests every subset containing `new_var`.
    pub fn level(&self, vars: &[usize], new_var: usize) -> Level {
        let sizes: Vec<usize> = vars.iter().map(|&v| self.sizes[v]).collect();
        let cells: usize = sizes.iter().product();
        let mut strides = vec![1usize; vars.len()];
        for k in (0..vars.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * sizes[k + 1];
        }
        let pos = vars.iter().position(|&v| v == new_var).expect("new variable in level");
        let mut subsets = Vec::new();
        for sub in 1usize..(1 << vars.len()) {
            if sub >> pos & 1 == 0 {
                continue;
            }
            let mask: usize = (0..vars.len()).filter(|k| sub >> k & 1 == 1).map(|k| 1 << vars[k]).sum();
            let m = &self.marginals[mask];
            // Row-major strides of the marginal table over its own variable order.
            let msizes: Vec<usize> = m.vars.iter().map(|&v| self.sizes[v]).collect();
            let mut log_p = Vec::with_capacity(cells);
            for cell in 0..cells {
                let mut idx = 0;
                for (j, &v) in m.vars.iter().enumerate() {
                    let k = vars.iter().position(|&w| w == v).expect("subset var");
                    let a = cell / strides[k] % sizes[k];
                    idx = idx * msizes[j] + a;
                }
                log_p.push(m.log_p[idx]);
            }
            subsets.push(SubsetTable { entropy: m.entropy, log_p });
        }
        Level { strides, cells, subsets }
    }
}

#[derive(Debug, Clone)]
struct SubsetTable {
    entropy: f64,
    /// `log2 p_T` indexed by the level's cell.
    log_p: Vec<f64>,
}

/// Precomputed test for one decoding level.
#[derive(Debug, Clone)]
pub struct Level {
    strides: Vec<usize>,
    cells: usize,
    subsets: Vec<SubsetTable>,
}

/// Reusable histogram buffers.
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    counts: Vec<u32>,
    touched: Vec<usize>,
    sums: Vec<f64>,
}

impl Level {
    /// Tests the sequences `seqs` (one per level variable, same order as
    /// the level was built with) against every subset of this level.
    pub fn typical(&self, seqs: &[&[u8]], eps: f64, scratch: &mut Scratch) -> bool {
        let n = seqs[0].len();
        if scratch.counts.len() < self.cells {
            scratch.counts.resize(self.cells, 0);
        }
        scratch.touched.clear();
        for i in 0..n {
            let mut cell = 0;
            for (s, st) in seqs.iter().zip(&self.strides) {
                cell += s[i] as usize * st;
            }
            if scratch.counts[cell] == 0 {
                scratch.touched.push(cell);
            }
            scratch.counts[cell] += 1;
        }
        scratch.sums.clear();
        scratch.sums.resize(self.subsets.len(), 0.0);
        let mut impossible = false;
        for &cell in &scratch.touched {
            let c = scratch.counts[cell] as f64;
            scratch.counts[cell] = 0;
            if impossible {
                continue;
            }
            for (t, sub) in self.subsets.iter().enumerate() {
                let lp = sub.log_p[cell];
                if lp == f64::NEG_INFINITY {
                    impossible = true;
                    break;
                }
                scratch.sums[t] += c * lp;
            }
        }
        if impossible {
            return false;
        }
        let n = n as f64;
        self.subsets
            .iter()
            .zip(&scratch.sums)
            .all(|(sub, s)| (-s / n - sub.entropy).abs() <= eps)
    }
}
