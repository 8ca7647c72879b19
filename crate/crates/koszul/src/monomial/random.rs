//! Seeded random monomial ideals with a prescribed number of minimal
//! generators and generator degree range.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{minimalize, ExponentVector, MonomialIdeal};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RandomIdealError {
    #[error("need at least one variable")]
    NoVariables,
    #[error("empty degree range: min_deg {min_deg} > max_deg {max_deg}")]
    EmptyDegreeRange { min_deg: u32, max_deg: u32 },
    #[error("gave up after {attempts} samples without reaching {target} minimal generators")]
    AttemptCapExceeded { attempts: usize, target: usize },
}

/// Sample a monomial ideal with exactly `g` minimal generators whose total
/// degrees lie in `[min_deg, max_deg]`.
///
/// Candidates are drawn with uniform total degree in the range and a
/// uniform weak composition of that degree into `n` parts, accumulated and
/// minimalized until the minimal generator count is exactly `g`. The same
/// seed always produces the same ideal; infeasible parameters fail
/// deterministically at the attempt cap.
pub fn random_ideal(
    n: usize,
    g: usize,
    min_deg: u32,
    max_deg: u32,
    seed: u64,
) -> Result<MonomialIdeal, RandomIdealError> {
    if n == 0 {
        return Err(RandomIdealError::NoVariables);
    }
    if min_deg > max_deg {
        return Err(RandomIdealError::EmptyDegreeRange { min_deg, max_deg });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = 10_000.max(1_000 * g);
    let mut pool: Vec<ExponentVector> = Vec::new();
    for _attempt in 0..cap {
        if pool.len() == g {
            return Ok(MonomialIdeal { num_vars: n, gens: pool });
        }
        pool.push(random_monomial(n, min_deg, max_deg, &mut rng));
        pool = minimalize(pool);
    }
    if pool.len() == g {
        return Ok(MonomialIdeal { num_vars: n, gens: pool });
    }
    Err(RandomIdealError::AttemptCapExceeded { attempts: cap, target: g })
}

fn random_monomial(n: usize, min_deg: u32, max_deg: u32, rng: &mut ChaCha8Rng) -> ExponentVector {
    let d = rng.gen_range(min_deg..=max_deg);
    ExponentVector::new(random_composition(d, n, rng))
}

/// Uniform weak composition of `d` into `n` parts by stars and bars: a
/// uniform (n-1)-subset of the d+n-1 slots marks the bars.
fn random_composition(d: u32, n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let slots = d as usize + n - 1;
    let mut positions: Vec<usize> = (0..slots).collect();
    // Partial Fisher-Yates: the first n-1 entries become the bar slots.
    for i in 0..(n - 1) {
        let j = rng.gen_range(i..slots);
        positions.swap(i, j);
    }
    let mut bars: Vec<isize> = positions[..n - 1].iter().map(|&p| p as isize).collect();
    bars.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    let mut prev: isize = -1;
    for &b in &bars {
        parts.push((b - prev - 1) as u32);
        prev = b;
    }
    parts.push((slots as isize - prev - 1) as u32);
    parts
}
