//! Exponent vectors, monomial ideals, and their canonical form.
//!
//! A monomial `x^a` in `n` variables is identified with its exponent
//! vector `a`; an ideal is stored as the canonically sorted list of its
//! minimal generators. Lex order on exponent sequences is the canonical
//! total order used everywhere for sorting and output.

mod parse;
mod random;

pub use parse::{format_ideal, parse_ideal, ParseError};
pub use random::{random_ideal, RandomIdealError};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("generator has {found} exponents, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
}

/// Exponent vector of a monomial; doubles as a multidegree.
///
/// Comparison is lexicographic on the exponent sequence, which is the
/// canonical order for generators, lattice elements, and table keys.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True for the unit monomial (all exponents zero).
    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// 0-based indices of the variables with positive exponent, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] > 0).collect()
    }

    /// Componentwise maximum. Panics if the lengths differ.
    pub fn lcm(&self, other: &Self) -> Self {
        assert_eq!(self.0.len(), other.0.len(), "lcm of exponent vectors of different lengths");
        ExponentVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    /// Componentwise `<=`. Panics if the lengths differ.
    pub fn divides(&self, other: &Self) -> bool {
        assert_eq!(self.0.len(), other.0.len(), "divisibility of exponent vectors of different lengths");
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    /// The product with `x_var` (0-based).
    pub fn times_var(&self, var: usize) -> Self {
        let mut e = self.0.clone();
        e[var] += 1;
        ExponentVector(e)
    }

    /// Subtract one from each variable in `vars`; `None` if that would go
    /// negative. `vars` holds 0-based indices.
    pub fn checked_sub_vars(&self, vars: &[usize]) -> Option<Self> {
        let mut e = self.0.clone();
        for &v in vars {
            if e[v] == 0 {
                return None;
            }
            e[v] -= 1;
        }
        Some(ExponentVector(e))
    }

    /// Componentwise difference `self - other`; `None` unless `other`
    /// divides `self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        Some(ExponentVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.0.len(), other.0.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

/// A monomial ideal in canonical form: the number of variables together
/// with its minimal generators, deduplicated and sorted lexicographically.
///
/// The zero ideal is the empty generator list; the unit ideal is the
/// single generator `x^0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialIdeal {
    num_vars: usize,
    gens: Vec<ExponentVector>,
}

impl MonomialIdeal {
    /// Build an ideal from arbitrary generators, minimalizing them.
    pub fn new(num_vars: usize, gens: Vec<ExponentVector>) -> Result<Self, IdealError> {
        for g in &gens {
            if g.len() != num_vars {
                return Err(IdealError::ArityMismatch { expected: num_vars, found: g.len() });
            }
        }
        Ok(MonomialIdeal { num_vars, gens: minimalize(gens) })
    }

    pub fn zero(num_vars: usize) -> Self {
        MonomialIdeal { num_vars, gens: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_principal(&self) -> bool {
        self.gens.len() == 1
    }

    /// Monomial membership: some generator divides `m`.
    pub fn contains(&self, m: &ExponentVector) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }
}

/// Reduce a set of monomials to the minimal generators of the ideal they
/// generate: deduplicate, drop every monomial divisible by another, sort
/// canonically. Idempotent and insensitive to input order.
pub fn minimalize(mut gens: Vec<ExponentVector>) -> Vec<ExponentVector> {
    gens.sort();
    gens.dedup();
    let keep: Vec<bool> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| !gens.iter().enumerate().any(|(j, h)| j != i && h != g && h.divides(g)))
        .collect();
    gens.into_iter().zip(keep).filter_map(|(g, k)| k.then_some(g)).collect()
}
