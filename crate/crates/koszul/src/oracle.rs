//! Brute-force oracles for multigraded Betti numbers.
//!
//! Two independent routes with no shared machinery beyond the field
//! arithmetic:
//!
//! * the Koszul complex of the module `I` itself, built degree by
//!   multidegree (`koszul_homology_dim`), and
//! * the Taylor complex of `R/I` tensored down to the field
//!   (`taylor_betti`), shifted by one homological degree.
//!
//! Both are exponential and exist to check the production path, so they
//! stay deliberately direct.

use itertools::Itertools;
use std::collections::HashMap;

use thiserror::Error;

use crate::linalg::{homology_dim, PrimeFieldMatrix};
use crate::monomial::{ExponentVector, MonomialIdeal};

/// Generator cap for the Taylor oracle; the complex has 2^r cells.
pub const TAYLOR_GENERATOR_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("Taylor oracle supports at most {cap} generators, ideal has {count}")]
    GeneratorCapExceeded { count: usize, cap: usize },
    #[error("multidegree has {found} entries, ideal ring has {expected} variables")]
    ArityMismatch { expected: usize, found: usize },
}

/// Basis element `x^monomial (x) wedge` of the Koszul complex, with the
/// wedge as sorted 0-based variable indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KoszulBasisElement {
    pub wedge: Vec<usize>,
    pub monomial: ExponentVector,
}

/// Basis of `K_q(I)` in multidegree `a`: wedge subsets `S` of the support
/// of `a` with `x^(a - e_S)` in `I`, in lex order on `S`.
pub fn koszul_basis(ideal: &MonomialIdeal, a: &ExponentVector, q: usize) -> Vec<KoszulBasisElement> {
    assert_eq!(a.len(), ideal.num_vars(), "multidegree arity mismatch");
    let support = a.support();
    if q > support.len() {
        return Vec::new();
    }
    support
        .iter()
        .copied()
        .combinations(q)
        .filter_map(|wedge| {
            let monomial = a.checked_sub_vars(&wedge).expect("wedge is inside the support");
            ideal.contains(&monomial).then_some(KoszulBasisElement { wedge, monomial })
        })
        .collect()
}

/// Matrix of the Koszul differential `K_q(I)_a -> K_{q-1}(I)_a` over F_p.
///
/// On a basis element `w (x) x_{i_0} ^ ... ^ x_{i_{q-1}}` the differential
/// is `sum_j (-1)^(j+1) w x_{i_j} (x) (wedge with x_{i_j} omitted)`, `j`
/// counted from 0 in the sorted wedge.
pub fn koszul_differential(
    ideal: &MonomialIdeal,
    a: &ExponentVector,
    q: usize,
    p: u64,
) -> PrimeFieldMatrix {
    assert!(q >= 1, "differential starts at wedge size 1");
    let domain = koszul_basis(ideal, a, q);
    let codomain = koszul_basis(ideal, a, q - 1);
    let row_of: HashMap<&[usize], usize> =
        codomain.iter().enumerate().map(|(r, e)| (e.wedge.as_slice(), r)).collect();
    let mut d = PrimeFieldMatrix::zero(codomain.len(), domain.len(), p);
    for (col, elem) in domain.iter().enumerate() {
        for j in 0..elem.wedge.len() {
            let mut target: Vec<usize> = elem.wedge.clone();
            target.remove(j);
            let row = *row_of
                .get(target.as_slice())
                .expect("omitting a wedge variable lands in the ideal again");
            let sign: i64 = if j % 2 == 0 { -1 } else { 1 };
            d.set(row, col, sign);
        }
    }
    d
}

/// `beta_{i,a}(I) = dim H_i(K(I))_a` computed directly from the complex.
pub fn koszul_homology_dim(ideal: &MonomialIdeal, a: &ExponentVector, i: usize, p: u64) -> usize {
    let n = ideal.num_vars();
    assert_eq!(a.len(), n, "multidegree arity mismatch");
    if i > n {
        return 0;
    }
    let dim_i = koszul_basis(ideal, a, i).len();
    if dim_i == 0 {
        return 0;
    }
    let d_in = if i == 0 {
        PrimeFieldMatrix::zero(0, dim_i, p)
    } else {
        koszul_differential(ideal, a, i, p)
    };
    let d_out = if i + 1 > n {
        PrimeFieldMatrix::zero(dim_i, 0, p)
    } else {
        koszul_differential(ideal, a, i + 1, p)
    };
    homology_dim(&d_in, &d_out).expect("Koszul window is a chain complex")
}

/// Independent oracle via the Taylor complex of `R/I`.
///
/// The degree-`a` slice of the tensored Taylor complex has the subsets
/// `sigma` of the generators with `lcm(sigma) = x^a` as its basis, graded
/// by `|sigma|`; a face `sigma \ {k}` survives exactly when its lcm is
/// still `x^a`, with sign `(-1)^(position of k in sorted sigma)`. Then
/// `beta_{i,a}(I) = dim H_{i+1}` of that slice, the shift converting Tor
/// of `R/I` into Tor of `I`.
///
/// That shift needs `I` inside the irrelevant maximal ideal; for the unit
/// ideal (where `R/I = 0` has no Tor at all) the Betti numbers are taken
/// from the free module `I = R` directly.
pub fn taylor_betti(
    ideal: &MonomialIdeal,
    i: usize,
    a: &ExponentVector,
    p: u64,
) -> Result<usize, OracleError> {
    let r = ideal.num_generators();
    if r > TAYLOR_GENERATOR_CAP {
        return Err(OracleError::GeneratorCapExceeded { count: r, cap: TAYLOR_GENERATOR_CAP });
    }
    if a.len() != ideal.num_vars() {
        return Err(OracleError::ArityMismatch { expected: ideal.num_vars(), found: a.len() });
    }
    if ideal.generators().first().is_some_and(ExponentVector::is_unit) {
        return Ok(usize::from(i == 0 && a.is_unit()));
    }
    let j = i + 1;
    if j > r {
        return Ok(0);
    }
    // Only generators dividing x^a can appear in a subset with lcm x^a.
    let dividing: Vec<usize> =
        (0..r).filter(|&k| ideal.generators()[k].divides(a)).collect();
    let level = |size: usize| taylor_level(ideal, &dividing, size, a);
    let here = level(j);
    if here.is_empty() {
        return Ok(0);
    }
    let below = level(j - 1);
    let above = level(j + 1);
    let d_in = taylor_boundary(ideal, &here, &below, a, p);
    let d_out = taylor_boundary(ideal, &above, &here, a, p);
    Ok(homology_dim(&d_in, &d_out).expect("Taylor window is a chain complex"))
}

/// Subsets of `dividing` of the given size whose lcm is exactly `a`, in
/// lex order. `lcm({}) = x^0`.
fn taylor_level(
    ideal: &MonomialIdeal,
    dividing: &[usize],
    size: usize,
    a: &ExponentVector,
) -> Vec<Vec<usize>> {
    if size > dividing.len() {
        return Vec::new();
    }
    dividing
        .iter()
        .copied()
        .combinations(size)
        .filter(|sigma| subset_lcm(ideal, sigma) == *a)
        .collect()
}

fn subset_lcm(ideal: &MonomialIdeal, sigma: &[usize]) -> ExponentVector {
    let mut acc = ExponentVector::zero(ideal.num_vars());
    for &k in sigma {
        acc = acc.lcm(&ideal.generators()[k]);
    }
    acc
}

fn taylor_boundary(
    ideal: &MonomialIdeal,
    domain: &[Vec<usize>],
    codomain: &[Vec<usize>],
    a: &ExponentVector,
    p: u64,
) -> PrimeFieldMatrix {
    let row_of: HashMap<&[usize], usize> =
        codomain.iter().enumerate().map(|(r, s)| (s.as_slice(), r)).collect();
    let mut d = PrimeFieldMatrix::zero(codomain.len(), domain.len(), p);
    for (col, sigma) in domain.iter().enumerate() {
        for t in 0..sigma.len() {
            let mut tau = sigma.clone();
            tau.remove(t);
            if subset_lcm(ideal, &tau) != *a {
                continue;
            }
            let row = *row_of.get(tau.as_slice()).expect("face with full lcm is in the level");
            let sign: i64 = if t % 2 == 0 { 1 } else { -1 };
            d.set(row, col, sign);
        }
    }
    d
}
