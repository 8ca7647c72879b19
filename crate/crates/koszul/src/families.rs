//! Classifiers and fast paths for special ideal families: generic ideals
//! with their Scarf complexes, and quasi-stable ideals with Pommaret
//! bases.
//!
//! For a generic ideal the Scarf complex (subsets of generators whose lcm
//! is unique among all subset lcms) supports the minimal resolution, so
//! Betti numbers can be read off by counting faces. Quasi-stability is
//! decided by running involutive completion under Pommaret division up to
//! an explicit degree bound; the answer is honest about that bound.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use thiserror::Error;

use crate::lattice::{lcm_lattice, mv_split, BettiTable, CheckStats, EngineError};
use crate::monomial::{ExponentVector, MonomialIdeal};
use crate::oracle::koszul_homology_dim;

/// Scarf enumeration visits all 2^r generator subsets; refuse beyond this.
pub const SCARF_GENERATOR_CAP: usize = 25;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("the Scarf formula applies only to generic ideals")]
    NotGeneric,
    #[error("Scarf enumeration over {generators} generators exceeds the cap of {cap}")]
    GeneratorCapExceeded { generators: usize, cap: usize },
    #[error("the unit monomial has no Pommaret class")]
    UnitMonomial,
    #[error("degree bound {bound} is below the largest generator degree {max_generator_degree}")]
    DegreeBoundBelowGenerators { bound: u32, max_generator_degree: u32 },
}

/// `divisor` strictly divides `m`: it divides `m` after `m` is stripped
/// of one copy of each variable in its support, so every positive
/// exponent of `m` strictly exceeds the matching exponent of `divisor`.
fn strictly_divides(divisor: &ExponentVector, m: &ExponentVector) -> bool {
    (0..m.len()).all(|k| {
        let e = m.exponent(k);
        if e == 0 {
            divisor.exponent(k) == 0
        } else {
            divisor.exponent(k) < e
        }
    })
}

/// A monomial ideal is generic when any two generators sharing the same
/// positive exponent in some variable have a third generator strictly
/// dividing their lcm. Plain divisibility by a third generator is not
/// enough: the Scarf formula genuinely fails on ideals like
/// <x^2 y, x^2 z, x y z>, where the lcm x^2 y z of the first two
/// generators is divisible by the third yet carries a rank-2 syzygy.
pub fn is_generic(ideal: &MonomialIdeal) -> bool {
    let gens = ideal.generators();
    for (i, u) in gens.iter().enumerate() {
        for v in &gens[i + 1..] {
            let shares =
                (0..u.len()).any(|k| u.exponent(k) > 0 && u.exponent(k) == v.exponent(k));
            if !shares {
                continue;
            }
            let l = u.lcm(v);
            let rescued = gens.iter().any(|w| w != u && w != v && strictly_divides(w, &l));
            if !rescued {
                return false;
            }
        }
    }
    true
}

/// Faces are subsets of generator positions (0-based, into the canonical
/// generator order) whose lcm is unique among all nonempty subset lcms;
/// the empty face is always present.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScarfComplex {
    faces: BTreeSet<Vec<usize>>,
    lcm_of: BTreeMap<Vec<usize>, ExponentVector>,
}

impl ScarfComplex {
    pub fn faces(&self) -> &BTreeSet<Vec<usize>> {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.faces.contains(face)
    }

    pub fn lcm_of(&self, face: &[usize]) -> Option<&ExponentVector> {
        self.lcm_of.get(face)
    }

    pub fn is_downward_closed(&self) -> bool {
        self.faces.iter().all(|face| {
            (0..face.len()).all(|k| {
                let mut sub = face.clone();
                sub.remove(k);
                self.faces.contains(&sub)
            })
        })
    }
}

/// Enumerates subset lcms depth-first, counting multiplicities, then
/// keeps the subsets whose lcm value occurs exactly once.
pub fn scarf_complex(ideal: &MonomialIdeal) -> Result<ScarfComplex, FamilyError> {
    let gens = ideal.generators();
    let r = gens.len();
    if r > SCARF_GENERATOR_CAP {
        return Err(FamilyError::GeneratorCapExceeded { generators: r, cap: SCARF_GENERATOR_CAP });
    }
    let mut seen: HashMap<ExponentVector, (u32, u64)> = HashMap::new();
    for mask in 1u64..(1 << r) {
        let mut lcm: Option<ExponentVector> = None;
        for (k, g) in gens.iter().enumerate() {
            if mask >> k & 1 == 1 {
                lcm = Some(match lcm {
                    Some(l) => l.lcm(g),
                    None => g.clone(),
                });
            }
        }
        let entry = seen.entry(lcm.expect("mask is nonempty")).or_insert((0, mask));
        entry.0 += 1;
    }
    let mut faces = BTreeSet::new();
    let mut lcm_of = BTreeMap::new();
    faces.insert(Vec::new());
    lcm_of.insert(Vec::new(), ExponentVector::zero(ideal.num_vars()));
    for (lcm, (count, mask)) in seen {
        if count == 1 {
            let face: Vec<usize> = (0..r).filter(|k| mask >> k & 1 == 1).collect();
            lcm_of.insert(face.clone(), lcm);
            faces.insert(face);
        }
    }
    Ok(ScarfComplex { faces, lcm_of })
}

/// Betti table of a generic ideal read off its Scarf complex:
/// `beta_{i,a}` counts faces with `i + 1` vertices and lcm `x^a`.
pub fn scarf_betti(ideal: &MonomialIdeal, p: u64) -> Result<BettiTable, EngineError> {
    if !is_generic(ideal) {
        return Err(EngineError::Family(FamilyError::NotGeneric));
    }
    let scarf = scarf_complex(ideal).map_err(EngineError::Family)?;
    let r = ideal.num_generators();
    let mut entries: BTreeMap<(usize, ExponentVector), usize> = BTreeMap::new();
    let mut checked: BTreeSet<&ExponentVector> = BTreeSet::new();
    for face in scarf.faces() {
        if face.is_empty() {
            continue;
        }
        let a = scarf.lcm_of(face).expect("every face carries its lcm");
        *entries.entry((face.len() - 1, a.clone())).or_insert(0) += 1;
        checked.insert(a);
    }
    let stats = CheckStats {
        multidegrees_checked: checked.len(),
        rank_computations: 0,
        les_shortcuts: 0,
        taylor_size: 1u128 << r,
        minimal_total: 0,
    };
    BettiTable::from_parts(entries, p, stats, r)
}

/// Confirms that for every lattice multidegree the Mayer-Vietoris long
/// exact sequence of a generic ideal has at most two nonzero terms.
pub fn les_two_term_check(ideal: &MonomialIdeal, p: u64) -> Result<bool, FamilyError> {
    Ok(les_two_term_counterexample(ideal, p)?.is_none())
}

/// First lattice multidegree whose long exact sequence has more than two
/// nonzero terms, with the term count.
pub fn les_two_term_counterexample(
    ideal: &MonomialIdeal,
    p: u64,
) -> Result<Option<(ExponentVector, usize)>, FamilyError> {
    if !is_generic(ideal) {
        return Err(FamilyError::NotGeneric);
    }
    if ideal.num_generators() < 2 {
        return Ok(None);
    }
    let split = mv_split(ideal).expect("at least two generators");
    let principal = MonomialIdeal::new(ideal.num_vars(), vec![split.split_generator.clone()])
        .expect("a single monomial generates an ideal");
    for a in lcm_lattice(ideal).elements() {
        let mut nonzero = 0usize;
        for i in 0..=ideal.num_generators() {
            if koszul_homology_dim(&split.i_tilde, a, i, p) > 0 {
                nonzero += 1;
            }
            let middle = koszul_homology_dim(&split.i_prime, a, i, p)
                + koszul_homology_dim(&principal, a, i, p);
            if middle > 0 {
                nonzero += 1;
            }
            if koszul_homology_dim(ideal, a, i, p) > 0 {
                nonzero += 1;
            }
        }
        if nonzero > 2 {
            return Ok(Some((a.clone(), nonzero)));
        }
    }
    Ok(None)
}

/// Pommaret class of a monomial: 1 + the smallest variable index with a
/// positive exponent. The multiplicative variables are exactly the first
/// `cls` variables (0-based indices `0..cls`).
pub fn pommaret_class(m: &ExponentVector) -> Result<usize, FamilyError> {
    match m.support().first() {
        Some(&j) => Ok(j + 1),
        None => Err(FamilyError::UnitMonomial),
    }
}

/// The 0-based multiplicative variable indices of `m`.
pub fn multiplicative_variables(m: &ExponentVector) -> Result<Vec<usize>, FamilyError> {
    Ok((0..pommaret_class(m)?).collect())
}

fn class_bound(m: &ExponentVector) -> usize {
    // The unit monomial is treated as having every variable multiplicative.
    match m.support().first() {
        Some(&j) => j + 1,
        None => m.len(),
    }
}

/// Pommaret involutive divisibility: `divisor | m` with the quotient
/// supported on the divisor's multiplicative variables.
pub fn involutively_divides(divisor: &ExponentVector, m: &ExponentVector) -> bool {
    if !divisor.divides(m) {
        return false;
    }
    let cls = class_bound(divisor);
    (cls..divisor.len()).all(|k| m.exponent(k) == divisor.exponent(k))
}

/// A finite Pommaret basis: every monomial of the ideal has exactly one
/// involutive divisor here, and all non-multiplicative prolongations are
/// covered.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PommaretBasis {
    elements: BTreeSet<ExponentVector>,
}

impl PommaretBasis {
    pub fn elements(&self) -> impl Iterator<Item = &ExponentVector> + '_ {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &ExponentVector) -> bool {
        self.elements.contains(m)
    }

    /// Pommaret class of a basis element (None for non-members and for
    /// the unit monomial).
    pub fn class_of(&self, m: &ExponentVector) -> Option<usize> {
        if self.contains(m) {
            pommaret_class(m).ok()
        } else {
            None
        }
    }

    pub fn involutive_divisor(&self, m: &ExponentVector) -> Option<&ExponentVector> {
        self.elements.iter().find(|b| involutively_divides(b, m))
    }

    pub fn involutive_divisors(&self, m: &ExponentVector) -> Vec<&ExponentVector> {
        self.elements.iter().filter(|b| involutively_divides(b, m)).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Completion {
    Complete(PommaretBasis),
    /// Completion was still adding elements past the degree bound; the
    /// chain walks from a minimal generator through the successive
    /// prolongations to the first element over the bound.
    NotQuasiStableWithinBound { chain: Vec<ExponentVector>, degree_bound: u32 },
}

/// Default completion bound: twice the largest generator degree plus the
/// number of variables.
pub fn default_degree_bound(ideal: &MonomialIdeal) -> u32 {
    let max = ideal.generators().iter().map(ExponentVector::total_degree).max().unwrap_or(0);
    2 * max + ideal.num_vars() as u32
}

/// Involutive cover test against a basis set without scanning it: a
/// divisor of class `c` vanishes before variable `c-1`, is positive
/// there, and matches `m` exactly from variable `c` on, so only
/// `total_degree(m)` candidates can exist.
fn has_involutive_divisor(basis: &BTreeSet<ExponentVector>, m: &ExponentVector) -> bool {
    let n = m.len();
    if basis.contains(&ExponentVector::zero(n)) {
        return true;
    }
    let exps = m.exponents();
    for k in 0..n {
        if exps[k] == 0 {
            continue;
        }
        let mut candidate = vec![0u32; n];
        candidate[k + 1..].copy_from_slice(&exps[k + 1..]);
        for e in 1..=exps[k] {
            candidate[k] = e;
            if basis.contains(&ExponentVector::new(candidate.clone())) {
                return true;
            }
        }
    }
    false
}

/// Involutive completion under Pommaret division, processing uncovered
/// non-multiplicative prolongations lowest total degree first (ties by
/// monomial, then by originating element).
pub fn pommaret_complete(
    ideal: &MonomialIdeal,
    degree_bound: u32,
) -> Result<Completion, FamilyError> {
    let max_gen = ideal.generators().iter().map(ExponentVector::total_degree).max().unwrap_or(0);
    if degree_bound < max_gen {
        return Err(FamilyError::DegreeBoundBelowGenerators {
            bound: degree_bound,
            max_generator_degree: max_gen,
        });
    }
    let n = ideal.num_vars();
    let mut basis: BTreeSet<ExponentVector> = ideal.generators().iter().cloned().collect();
    let mut parent: HashMap<ExponentVector, ExponentVector> = HashMap::new();
    let mut queue: BinaryHeap<Reverse<(u32, ExponentVector, ExponentVector)>> = BinaryHeap::new();
    for h in &basis {
        for j in class_bound(h)..n {
            let prolonged = h.times_var(j);
            queue.push(Reverse((prolonged.total_degree(), prolonged, h.clone())));
        }
    }
    while let Some(Reverse((degree, prolonged, from))) = queue.pop() {
        if has_involutive_divisor(&basis, &prolonged) {
            continue;
        }
        if degree > degree_bound {
            let mut chain = vec![prolonged, from];
            while let Some(p) = parent.get(chain.last().expect("nonempty")) {
                chain.push(p.clone());
            }
            chain.reverse();
            return Ok(Completion::NotQuasiStableWithinBound { chain, degree_bound });
        }
        for j in class_bound(&prolonged)..n {
            let next = prolonged.times_var(j);
            queue.push(Reverse((next.total_degree(), next, prolonged.clone())));
        }
        parent.insert(prolonged.clone(), from);
        basis.insert(prolonged);
    }
    Ok(Completion::Complete(PommaretBasis { elements: basis }))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuasiStability {
    Yes(PommaretBasis),
    NoWithinBound,
}

/// Quasi-stability up to the given completion bound.
pub fn is_quasi_stable(
    ideal: &MonomialIdeal,
    degree_bound: u32,
) -> Result<QuasiStability, FamilyError> {
    Ok(match pommaret_complete(ideal, degree_bound)? {
        Completion::Complete(basis) => QuasiStability::Yes(basis),
        Completion::NotQuasiStableWithinBound { .. } => QuasiStability::NoWithinBound,
    })
}
