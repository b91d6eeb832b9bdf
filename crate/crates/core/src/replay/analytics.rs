//! Closed-form false-positive and state-size accounting.

use super::{ReplayScheme, COUNTER_BYTES};
use crate::error::{Error, Result};
use crate::hashes::SHA1_LEN;
use crate::num::Real;
use crate::Scalar;

/// Bloom filter of `m` cells addressed by `k` hash functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FalsePositiveModel<F: Real> {
    pub m: u64,
    pub k: u32,
    _f: std::marker::PhantomData<F>,
}

impl<F: Real> FalsePositiveModel<F> {
    pub fn new(m: u64, k: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::NonPositive("m"));
        }
        if k == 0 {
            return Err(Error::NonPositive("k"));
        }
        Ok(FalsePositiveModel {
            m,
            k,
            _f: std::marker::PhantomData,
        })
    }

    /// `(1 − (1 − 1/m)^{kn})^k`
    pub fn exact(&self, n: u64) -> F {
        let one = F::one();
        let m = F::from_u64_lossy(self.m);
        let kn = F::from_u64_lossy(self.k as u64 * n);
        let empty = (one - one / m).powf(kn);
        (one - empty).powi(self.k as i32)
    }

    /// `(1 − e^{−kn/m})^k`
    pub fn exponential(&self, n: u64) -> F {
        let one = F::one();
        let kn = F::from_u64_lossy(self.k as u64 * n);
        (one - (-kn / F::from_u64_lossy(self.m)).exp()).powi(self.k as i32)
    }

    /// `2^{−k}`, the rate at the optimal load.
    pub fn saturated(&self) -> F {
        F::from_u64_lossy(2).powi(-(self.k as i32))
    }

    /// Load at which `k` is optimal, `m ln 2 / k`.
    pub fn optimal_load(&self) -> F {
        F::from_u64_lossy(self.m) * F::from_u64_lossy(2).ln() / F::from_u64_lossy(self.k as u64)
    }

    /// Mean and variance of the false positives seen while a filter that
    /// resets on the first fresh tag after `capacity` insertions runs
    /// through one epoch. While `n` tags are
    /// stored, each fresh query is a false positive with probability
    /// `p = exact(n)`, so the count before the next insertion is geometric
    /// with mean `p/(1−p)` and variance `p/(1−p)²`.
    pub fn epoch_false_positives(&self, capacity: u64) -> (F, F) {
        let one = F::one();
        (0..=capacity).fold((F::zero(), F::zero()), |(mean, var), n| {
            let p = self.exact(n);
            let q = one - p;
            (mean + p / q, var + p / (q * q))
        })
    }

    /// Long-run fraction of fresh queries flagged when the filter resets
    /// every `capacity` insertions.
    pub fn streaming_rate(&self, capacity: u64) -> F {
        let (fp, _) = self.epoch_false_positives(capacity);
        fp / (fp + F::from_u64_lossy(capacity))
    }
}

/// Long-run behaviour of a streaming filter under the reset rule, assuming
/// ideal hashing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamingOutcome<F: Real> {
    /// Fraction of fresh queries flagged.
    pub rate: F,
    /// Mean queries between resets.
    pub cycle_queries: F,
    /// Variance of `flagged − rate·queries` over one cycle.
    pub cycle_variance: F,
}

impl<F: Real> StreamingOutcome<F> {
    /// Standard deviation of the flagged count over `queries` queries.
    pub fn sigma(&self, queries: u64) -> F {
        (F::from_u64_lossy(queries) / self.cycle_queries * self.cycle_variance).sqrt()
    }
}

impl<F: Real> FalsePositiveModel<F> {
    /// `hit[x][j]`: probability that `k` uniform addresses hit exactly `j`
    /// distinct clear cells when `x` of `m` cells are set.
    fn hit_table(&self) -> Vec<Vec<F>> {
        let m = self.m as usize;
        let k = self.k as usize;
        let mf = F::from_u64_lossy(self.m);
        (0..=m)
            .map(|x| {
                let mut d = vec![F::zero(); k + 1];
                d[0] = F::one();
                for _ in 0..k {
                    let mut next = vec![F::zero(); k + 1];
                    for (j, &p) in d.iter().enumerate() {
                        if p == F::zero() {
                            continue;
                        }
                        let set = F::from_u64_lossy((x + j).min(m) as u64) / mf;
                        next[j] = next[j] + p * set;
                        if j < k && x + j < m {
                            next[j + 1] = next[j + 1] + p * (F::one() - set);
                        }
                    }
                    d = next;
                }
                d
            })
            .collect()
    }

    /// Exact renewal analysis of a filter that receives an endless stream of
    /// distinct tags, flags a tag when all its cells are set, and otherwise
    /// inserts it, resetting on the fresh tag after `capacity` insertions or
    /// right after a query finds every cell set.
    ///
    /// The state is (insertions, set cells); the per-query false-positive
    /// probability is `(set/m)^k`, the quantity the closed form approximates.
    pub fn streaming(&self, capacity: u64) -> Result<StreamingOutcome<F>> {
        if capacity == 0 {
            return Err(Error::NonPositive("capacity"));
        }
        let hit = self.hit_table();
        let (flagged, queries, _) = self.cycle_moments(&hit, capacity, F::zero());
        let rate = flagged / queries;
        let (_, _, var) = self.cycle_moments(&hit, capacity, rate);
        Ok(StreamingOutcome {
            rate,
            cycle_queries: queries,
            cycle_variance: var,
        })
    }

    /// Returns E[flagged], E[queries] and E[Z²] per cycle, where
    /// Z = flagged − r·queries.
    fn cycle_moments(&self, hit: &[Vec<F>], capacity: u64, r: F) -> (F, F, F) {
        let m = self.m as usize;
        let k = self.k as usize;
        let zero = F::zero();
        let one = F::one();
        let a = one - r;
        let b = -r;
        // mass, E[Z; state], E[Z²; state] indexed by set cells
        let mut mass = vec![zero; m + 1];
        let mut s1 = vec![zero; m + 1];
        let mut s2 = vec![zero; m + 1];
        mass[0] = one;
        let (mut flagged, mut queries, mut z2) = (zero, zero, zero);
        for f in 0..=capacity {
            let mut nm = vec![zero; m + 1];
            let mut n1 = vec![zero; m + 1];
            let mut n2 = vec![zero; m + 1];
            for x in 0..=m {
                let p = mass[x];
                if p == zero {
                    continue;
                }
                if x == m {
                    // one flagged query, then reset
                    flagged = flagged + p;
                    queries = queries + p;
                    z2 = z2 + s2[x] + (a + a) * s1[x] + a * a * p;
                    continue;
                }
                let q = hit[x][0];
                let mu = q / (one - q);
                let var = q / ((one - q) * (one - q));
                let g2 = var + mu * mu;
                flagged = flagged + p * mu;
                if f == capacity {
                    queries = queries + p * mu;
                    z2 = z2 + s2[x] + (a + a) * mu * s1[x] + a * a * g2 * p;
                    continue;
                }
                queries = queries + p * (mu + one);
                let ec = a * mu + b;
                let ec2 = a * a * g2 + (a + a) * b * mu + b * b;
                let t1 = s1[x] + ec * p;
                let t2 = s2[x] + (ec + ec) * s1[x] + ec2 * p;
                for j in 1..=k.min(m - x) {
                    let w = hit[x][j] / (one - q);
                    nm[x + j] = nm[x + j] + p * w;
                    n1[x + j] = n1[x + j] + t1 * w;
                    n2[x + j] = n2[x + j] + t2 * w;
                }
            }
            mass = nm;
            s1 = n1;
            s2 = n2;
        }
        (flagged, queries, z2)
    }
}

pub fn fp_rate(m: u64, k: u32, n: u64) -> Result<Scalar> {
    Ok(FalsePositiveModel::<Scalar>::new(m, k)?.exact(n))
}

pub fn fp_rate_exponential(m: u64, k: u32, n: u64) -> Result<Scalar> {
    Ok(FalsePositiveModel::<Scalar>::new(m, k)?.exponential(n))
}

pub fn fp_rate_saturated(k: u32) -> Result<Scalar> {
    Ok(FalsePositiveModel::<Scalar>::new(1, k)?.saturated())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateScope {
    /// State held by one node for its `nodes − 1` neighbors.
    PerNode,
    /// Sum over all `nodes`.
    Network,
}

/// Replay-state bytes for `scheme` in a network of `nodes`. Counters are
/// two bytes, digests are SHA-1 sized, the Bloom vector is `m` bits.
pub fn replay_state_bytes(scheme: &str, nodes: usize, window: usize, m: usize, scope: StateScope) -> Result<usize> {
    let scheme: ReplayScheme = scheme.parse()?;
    if nodes < 2 {
        return Err(Error::TooFewNodes);
    }
    let per_node = match scheme {
        ReplayScheme::Counter => (nodes - 1) * COUNTER_BYTES,
        ReplayScheme::Digest => (nodes - 1) * window * SHA1_LEN,
        ReplayScheme::Bloom => m.div_ceil(8),
    };
    Ok(match scope {
        StateScope::PerNode => per_node,
        StateScope::Network => per_node * nodes,
    })
}
