use crate::error::{Error, Result};
use crate::model::{AuxJoint, ChannelLaw};

use super::codebook::Codebook;
use super::typical::{DesignLaw, Level, Scratch, U, V, X, Y1, Y2};

/// Joint-typicality decoders for one design law.
#[derive(Debug, Clone)]
pub struct Decoders {
    law: DesignLaw,
    d1_u: Level,
    d1_v: Level,
    d1_x: Level,
    d2_u: Level,
    d2_v: Level,
}

fn check_len(cb: &Codebook, y: &[u8]) -> Result<()> {
    if y.len() != cb.n() {
        return Err(Error::ShapeMismatch(format!(
            "output has length {}, codebook blocklength is {}",
            y.len(),
            cb.n()
        )));
    }
    Ok(())
}

/// Counts hits up to two and remembers the first.
struct Unique<T> {
    first: Option<T>,
    hits: usize,
}

impl<T> Unique<T> {
    fn new() -> Self {
        Unique { first: None, hits: 0 }
    }

    fn push(&mut self, t: T) {
        if self.hits == 0 {
            self.first = Some(t);
        }
        self.hits += 1;
    }

    fn get(self) -> Option<T> {
        if self.hits == 1 {
            self.first
        } else {
            None
        }
    }
}

impl Decoders {
    pub fn new(aux: &AuxJoint, ch: &ChannelLaw) -> Result<Self> {
        let law = DesignLaw::new(aux, ch)?;
        Ok(Decoders {
            d1_u: law.level(&[U, Y1], U),
            d1_v: law.level(&[U, V, Y1], V),
            d1_x: law.level(&[U, V, X, Y1], X),
            d2_u: law.level(&[U, Y2], U),
            d2_v: law.level(&[U, V, Y2], V),
            law,
        })
    }

    /// Calls `f` for every triple `(m0, m0', m1)` jointly typical with `y1`.
    pub fn for_each_typical_triple(
        &self,
        cb: &Codebook,
        y1: &[u8],
        eps: f64,
        scratch: &mut Scratch,
        mut f: impl FnMut(u64, u64, u64),
    ) -> Result<()> {
        check_len(cb, y1)?;
        if !self.law.single_typical(Y1, y1, eps) {
            return Ok(());
        }
        let (mu0, mu0p, mu1) = cb.counts();
        for m0 in 1..=mu0 {
            let u = cb.u_word(m0);
            if !self.d1_u.typical(&[u, y1], eps, scratch) {
                continue;
            }
            for m0p in 1..=mu0p {
                let v = cb.v_word(m0, m0p);
                if !self.d1_v.typical(&[u, v, y1], eps, scratch) {
                    continue;
                }
                for m1 in 1..=mu1 {
                    if self.d1_x.typical(&[u, v, cb.x_word(m0, m0p, m1), y1], eps, scratch) {
                        f(m0, m0p, m1);
                    }
                }
            }
        }
        Ok(())
    }

    /// Calls `f` for every `m0` whose cloud centre is typical with `y2`.
    pub fn for_each_typical_centre(
        &self,
        cb: &Codebook,
        y2: &[u8],
        eps: f64,
        scratch: &mut Scratch,
        mut f: impl FnMut(u64),
    ) -> Result<()> {
        check_len(cb, y2)?;
        if !self.law.single_typical(Y2, y2, eps) {
            return Ok(());
        }
        let (mu0, _, _) = cb.counts();
        for m0 in 1..=mu0 {
            if self.d2_u.typical(&[cb.u_word(m0), y2], eps, scratch) {
                f(m0);
            }
        }
        Ok(())
    }

    /// Whether `(u(m0), v(m0, m0'), y2)` is typical, given `u(m0)` already is.
    pub fn satellite_typical(&self, cb: &Codebook, y2: &[u8], m0: u64, m0p: u64, eps: f64, scratch: &mut Scratch) -> bool {
        self.d2_v.typical(&[cb.u_word(m0), cb.v_word(m0, m0p), y2], eps, scratch)
    }

    /// The unique typical triple, or `None` on decoding failure.
    pub fn decode1(&self, cb: &Codebook, y1: &[u8], eps: f64) -> Result<Option<(u64, u64, u64)>> {
        let mut hit = Unique::new();
        let mut s = Scratch::default();
        self.for_each_typical_triple(cb, y1, eps, &mut s, |a, b, c| hit.push((a, b, c)))?;
        Ok(hit.get())
    }

    /// The unique typical cloud centre, or `None`.
    pub fn decode2_no_conf(&self, cb: &Codebook, y2: &[u8], eps: f64) -> Result<Option<u64>> {
        let mut hit = Unique::new();
        let mut s = Scratch::default();
        self.for_each_typical_centre(cb, y2, eps, &mut s, |m| hit.push(m))?;
        Ok(hit.get())
    }

    /// The unique typical pair with the residual message in bin `bin`, or `None`.
    pub fn decode2_conf(&self, cb: &Codebook, y2: &[u8], bin: u64, eps: f64) -> Result<Option<(u64, u64)>> {
        let mut centres = Vec::new();
        let mut s = Scratch::default();
        self.for_each_typical_centre(cb, y2, eps, &mut s, |m| centres.push(m))?;
        let mut hit = Unique::new();
        for m0 in centres {
            for m0p in cb.bin_members(bin) {
                if self.satellite_typical(cb, y2, m0, m0p, eps, &mut s) {
                    hit.push((m0, m0p));
                }
            }
        }
        Ok(hit.get())
    }
}

/// Bin index sent over the conference link; bin 1 when decoder 1 failed.
pub fn conference_map(cb: &Codebook, decoded: Option<(u64, u64, u64)>) -> u64 {
    decoded.map_or(1, |(_, m0p, _)| cb.bin_of(m0p))
}
