use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{AuxJoint, ChannelLaw};

/// Index of message `m` (1-based) under round-robin binning into `bins` bins.
pub fn bin_of(m: u64, bins: u64) -> u64 {
    (m - 1) % bins + 1
}

/// Nested superposition codebook. Messages and bins are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    n: usize,
    mu0: u64,
    mu0p: u64,
    mu1: u64,
    nu1: u64,
    u: Vec<u8>,
    v: Vec<u8>,
    x: Vec<u8>,
}

fn weighted(w: &[f64]) -> WeightedIndex<f64> {
    WeightedIndex::new(w).expect("conditional rows are normalised")
}

impl Codebook {
    /// Draws `u(m0)` i.i.d. from `p(u)`, `v(m0, m0')` from `p(v|u)` and
    /// `x(m0, m0', m1)` from `p(x|u,v)`, symbol by symbol.
    pub fn generate<R: Rng + ?Sized>(
        n: usize,
        counts: (u64, u64, u64),
        nu1: u64,
        aux: &AuxJoint,
        rng: &mut R,
    ) -> Result<Self> {
        let (mu0, mu0p, mu1) = counts;
        if n == 0 || mu0 == 0 || mu0p == 0 || mu1 == 0 || nu1 == 0 {
            return Err(Error::InvalidInput("blocklength and all counts must be >= 1".into()));
        }
        mu0.checked_mul(mu0p)
            .and_then(|a| a.checked_mul(mu1))
            .and_then(|a| a.checked_mul(n as u64))
            .filter(|&s| s <= isize::MAX as u64)
            .ok_or_else(|| Error::Budget("codebook does not fit in memory".into()))?;
        let pu = weighted(&aux.p_u());
        let pv: Vec<WeightedIndex<f64>> = (0..aux.u_size()).map(|u| weighted(&aux.p_v_given_u(u))).collect();
        let px: Vec<WeightedIndex<f64>> = (0..aux.u_size())
            .flat_map(|u| (0..aux.v_size()).map(move |v| (u, v)))
            .map(|(u, v)| weighted(&aux.p_x_given_uv(u, v)))
            .collect();
        let vs = aux.v_size();

        let (mu0, mu0p, mu1) = (mu0 as usize, mu0p as usize, mu1 as usize);
        let mut u = vec![0u8; mu0 * n];
        for w in u.chunks_mut(n) {
            for s in w.iter_mut() {
                *s = pu.sample(rng) as u8;
            }
        }
        let mut v = vec![0u8; mu0 * mu0p * n];
        for (k, w) in v.chunks_mut(n).enumerate() {
            let uw = &u[(k / mu0p) * n..][..n];
            for (s, &ui) in w.iter_mut().zip(uw) {
                *s = pv[ui as usize].sample(rng) as u8;
            }
        }
        let mut x = vec![0u8; mu0 * mu0p * mu1 * n];
        for (k, w) in x.chunks_mut(n).enumerate() {
            let uv = k / mu1;
            let uw = &u[(uv / mu0p) * n..][..n];
            let vw = &v[uv * n..][..n];
            for i in 0..n {
                w[i] = px[uw[i] as usize * vs + vw[i] as usize].sample(rng) as u8;
            }
        }
        Ok(Codebook {
            n,
            mu0: mu0 as u64,
            mu0p: mu0p as u64,
            mu1: mu1 as u64,
            nu1,
            u,
            v,
            x,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(mu0, mu0', mu1)`.
    pub fn counts(&self) -> (u64, u64, u64) {
        (self.mu0, self.mu0p, self.mu1)
    }

    pub fn bins(&self) -> u64 {
        self.nu1
    }

    fn check(&self, m0: u64, m0p: u64, m1: u64) -> Result<()> {
        if !(1..=self.mu0).contains(&m0) || !(1..=self.mu0p).contains(&m0p) || !(1..=self.mu1).contains(&m1) {
            return Err(Error::InvalidInput(format!(
                "message ({m0}, {m0p}, {m1}) outside [1..{}] x [1..{}] x [1..{}]",
                self.mu0, self.mu0p, self.mu1
            )));
        }
        Ok(())
    }

    pub fn u_word(&self, m0: u64) -> &[u8] {
        &self.u[(m0 as usize - 1) * self.n..][..self.n]
    }

    pub fn v_word(&self, m0: u64, m0p: u64) -> &[u8] {
        let k = (m0 as usize - 1) * self.mu0p as usize + (m0p as usize - 1);
        &self.v[k * self.n..][..self.n]
    }

    pub fn x_word(&self, m0: u64, m0p: u64, m1: u64) -> &[u8] {
        let k = ((m0 as usize - 1) * self.mu0p as usize + (m0p as usize - 1)) * self.mu1 as usize + (m1 as usize - 1);
        &self.x[k * self.n..][..self.n]
    }

    /// Bin of residual message `m0p`.
    pub fn bin_of(&self, m0p: u64) -> u64 {
        bin_of(m0p, self.nu1)
    }

    /// Residual messages in bin `b`, ascending.
    pub fn bin_members(&self, b: u64) -> impl Iterator<Item = u64> {
        let end = if (1..=self.nu1).contains(&b) { self.mu0p } else { 0 };
        (b.max(1)..=end).step_by(usize::try_from(self.nu1).unwrap_or(usize::MAX))
    }

    /// Sends `x(m0, m0', m1)` through the channel.
    pub fn transmit<R: Rng + ?Sized>(
        &self,
        msg: (u64, u64, u64),
        ch: &ChannelLaw,
        rng: &mut R,
    ) -> Result<(Vec<u8>, Vec<u8>)> {
        self.check(msg.0, msg.1, msg.2)?;
        let rows = ChannelSampler::new(ch);
        Ok(rows.send(self.x_word(msg.0, msg.1, msg.2), rng))
    }
}

/// Per-input samplers of the pair `(y1, y2)`.
pub struct ChannelSampler {
    rows: Vec<WeightedIndex<f64>>,
    y2_size: usize,
}

impl ChannelSampler {
    pub fn new(ch: &ChannelLaw) -> Self {
        ChannelSampler {
            rows: (0..ch.x_size()).map(|x| weighted(ch.row(x))).collect(),
            y2_size: ch.y2_size(),
        }
    }

    pub fn send<R: Rng + ?Sized>(&self, x: &[u8], rng: &mut R) -> (Vec<u8>, Vec<u8>) {
        let mut y1 = Vec::with_capacity(x.len());
        let mut y2 = Vec::with_capacity(x.len());
        for &xi in x {
            let k = self.rows[xi as usize].sample(rng);
            y1.push((k / self.y2_size) as u8);
            y2.push((k % self.y2_size) as u8);
        }
        (y1, y2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bin_sizes(mu0p: u64, nu1: u64) -> Vec<usize> {
        let aux = AuxJoint::new(1, 1, 2, vec![0.5, 0.5]).unwrap();
        let cb = Codebook::generate(4, (1, mu0p, 1), nu1, &aux, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        (1..=nu1).map(|b| cb.bin_members(b).count()).collect()
    }

    #[test]
    fn round_robin_bins() {
        assert_eq!(bin_sizes(8, 4), vec![2, 2, 2, 2]);
        let mut s = bin_sizes(7, 4);
        s.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(s, vec![2, 2, 2, 1]);
        assert_eq!(bin_of(5, 4), 1);
        assert_eq!(bin_of(1, 4), 1);
        assert_eq!(bin_of(6, 1), 1);
        assert_eq!(bin_sizes(3, 5), vec![1, 1, 1, 0, 0]);
    }

    #[test]
    fn bins_partition_messages() {
        for (mu, nu) in [(1, 1), (9, 2), (16, 5), (10, 10), (13, 1)] {
            let aux = AuxJoint::new(1, 1, 2, vec![0.5, 0.5]).unwrap();
            let cb = Codebook::generate(2, (1, mu, 1), nu, &aux, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            let mut all: Vec<u64> = (1..=nu).flat_map(|b| cb.bin_members(b).collect::<Vec<_>>()).collect();
            all.sort_unstable();
            assert_eq!(all, (1..=mu).collect::<Vec<_>>());
        }
    }

    #[test]
    fn point_mass_gives_identical_words() {
        let aux = AuxJoint::point_mass((2, 2, 3), (1, 0, 2));
        let cb = Codebook::generate(16, (3, 2, 2), 1, &aux, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        for m0 in 1..=3 {
            assert!(cb.u_word(m0).iter().all(|&s| s == 1));
            for m0p in 1..=2 {
                assert!(cb.v_word(m0, m0p).iter().all(|&s| s == 0));
                for m1 in 1..=2 {
                    assert!(cb.x_word(m0, m0p, m1).iter().all(|&s| s == 2));
                }
            }
        }
    }

    #[test]
    fn generation_is_seeded_and_follows_conditionals() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let aux = AuxJoint::random_dirichlet(&mut rng, 2, 2, 2);
        let a = Codebook::generate(2000, (2, 2, 2), 1, &aux, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let b = Codebook::generate(2000, (2, 2, 2), 1, &aux, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(a, b);
        // Empirical p(u, v, x) along the (1, 1, 1) branch.
        let mut counts = [0usize; 8];
        for i in 0..2000 {
            let (u, v, x) = (a.u_word(1)[i], a.v_word(1, 1)[i], a.x_word(1, 1, 1)[i]);
            counts[(u as usize * 2 + v as usize) * 2 + x as usize] += 1;
        }
        for (k, c) in counts.iter().enumerate() {
            let p = aux.weights()[k];
            let sd = (p * (1.0 - p) / 2000.0).sqrt();
            assert!((*c as f64 / 2000.0 - p).abs() < 5.0 * sd + 1e-12, "cell {k}");
        }
    }

    #[test]
    fn transmit_noiseless_and_range_checks() {
        let aux = AuxJoint::new(1, 1, 3, vec![1.0 / 3.0; 3]).unwrap();
        let cb = Codebook::generate(50, (2, 1, 3), 1, &aux, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (y1, y2) = cb.transmit((2, 1, 3), &ChannelLaw::noiseless(3), &mut rng).unwrap();
        assert_eq!(y1, cb.x_word(2, 1, 3));
        assert_eq!(y2, cb.x_word(2, 1, 3));
        assert!(cb.transmit((3, 1, 1), &ChannelLaw::noiseless(3), &mut rng).unwrap_err().is_input_error());
        assert!(cb.transmit((1, 1, 0), &ChannelLaw::noiseless(3), &mut rng).is_err());
    }

    #[test]
    fn zero_crossover_is_faithful() {
        let aux = AuxJoint::new(1, 1, 2, vec![0.5, 0.5]).unwrap();
        let cb = Codebook::generate(64, (1, 1, 4), 1, &aux, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let ch = ChannelLaw::bsc_pair(0.0, 0.0).unwrap();
        let (y1, y2) = cb.transmit((1, 1, 4), &ch, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(y1, cb.x_word(1, 1, 4));
        assert_eq!(y2, cb.x_word(1, 1, 4));
    }
}
