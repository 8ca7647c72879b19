//! The lcm lattice, candidate pruning, Mayer-Vietoris splitting with
//! long-exact-sequence shortcuts, and the top-level Betti table driver.
//!
//! All homology of `I` is concentrated on the lcm lattice `L_I` (the lcms
//! of nonempty subsets of the minimal generators), and the multidegrees of
//! the `i`-th syzygies are pairwise lcms of those of the `(i-1)`-th. The
//! driver walks homological degrees upward, keeping only the candidate
//! multidegrees this chaining allows, and at each candidate either settles
//! the dimension through the long exact sequence of a Mayer-Vietoris split
//! or falls back to a truncated upper Koszul computation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use crate::families::{is_generic, scarf_betti, FamilyError, SCARF_GENERATOR_CAP};
use crate::linalg::{is_prime, PrimeFieldMatrix};
use crate::monomial::{ExponentVector, MonomialIdeal};
use crate::oracle::{koszul_basis, koszul_differential, KoszulBasisElement};
use crate::simplicial::betti_with_cost;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("Mayer-Vietoris split needs at least two generators, found {generators}")]
    SplitUnavailable { generators: usize },
    #[error("field characteristic {p} is not prime")]
    CharacteristicNotPrime { p: u64 },
    #[error("Euler relation violated: alternating Betti sum is {alternating_sum}, expected 1")]
    EulerViolation { alternating_sum: i64 },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// The lcm lattice `L_I`: lcms of all nonempty subsets of the minimal
/// generators, with the divisibility relation among them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LcmLattice {
    elements: BTreeSet<ExponentVector>,
    divides: BTreeMap<ExponentVector, BTreeSet<ExponentVector>>,
}

impl LcmLattice {
    pub fn elements(&self) -> &BTreeSet<ExponentVector> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &ExponentVector) -> bool {
        self.elements.contains(a)
    }

    /// Lattice elements that `u` divides (including `u` itself), when `u`
    /// is an element.
    pub fn divisibility(&self, u: &ExponentVector) -> Option<&BTreeSet<ExponentVector>> {
        self.divides.get(u)
    }
}

/// Enumerates `L_I` over the nonempty generator subsets.
pub fn lcm_lattice(ideal: &MonomialIdeal) -> LcmLattice {
    let gens = ideal.generators();
    let r = gens.len();
    assert!(r >= 1, "lcm lattice needs at least one generator");
    assert!(r <= 24, "lattice enumeration is exponential in the number of generators");
    let mut by_mask: Vec<ExponentVector> = Vec::with_capacity(1 << r);
    by_mask.push(ExponentVector::zero(ideal.num_vars()));
    let mut elements = BTreeSet::new();
    for mask in 1usize..(1 << r) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let lcm =
            if rest == 0 { gens[low].clone() } else { by_mask[rest].lcm(&gens[low]) };
        by_mask.push(lcm.clone());
        elements.insert(lcm);
    }
    let divides = elements
        .iter()
        .map(|u| {
            let below: BTreeSet<ExponentVector> =
                elements.iter().filter(|v| u.divides(v)).cloned().collect();
            (u.clone(), below)
        })
        .collect();
    LcmLattice { elements, divides }
}

/// Membership test for `L_I` without enumerating it: `a` is in the
/// lattice iff the lcm of the generators dividing `a` is `a` itself.
pub fn in_lcm_lattice(ideal: &MonomialIdeal, a: &ExponentVector) -> bool {
    assert_eq!(a.len(), ideal.num_vars(), "multidegree arity mismatch");
    let mut acc: Option<ExponentVector> = None;
    for g in ideal.generators() {
        if g.divides(a) {
            acc = Some(match acc {
                Some(l) => l.lcm(g),
                None => g.clone(),
            });
        }
    }
    acc.as_ref() == Some(a)
}

/// Upper bound for the multidegrees of the `i`-th syzygies: iterated
/// pairwise lcms (pairs with `u = v` included) of the generator
/// multidegrees, `i` rounds deep.
pub fn candidate_multidegrees(ideal: &MonomialIdeal, i: usize) -> BTreeSet<ExponentVector> {
    let mut current: BTreeSet<ExponentVector> = ideal.generators().iter().cloned().collect();
    for _ in 0..i {
        let list: Vec<&ExponentVector> = current.iter().collect();
        let mut next = BTreeSet::new();
        for (k, u) in list.iter().enumerate() {
            for v in &list[k..] {
                next.insert(u.lcm(v));
            }
        }
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// A Mayer-Vietoris split of `I`: the split generator `m_r`, the ideal
/// `I'` of the remaining generators, and `I~ = I' intersect <m_r>`
/// generated by the lcms with `m_r`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MvSplit {
    pub split_generator: ExponentVector,
    pub i_prime: MonomialIdeal,
    pub i_tilde: MonomialIdeal,
}

/// Splits off the generator of maximal total degree (ties broken by the
/// canonical generator order).
pub fn mv_split(ideal: &MonomialIdeal) -> Result<MvSplit, EngineError> {
    let gens = ideal.generators();
    if gens.len() < 2 {
        return Err(EngineError::SplitUnavailable { generators: gens.len() });
    }
    let max_degree = gens.iter().map(ExponentVector::total_degree).max().expect("nonempty");
    let split_at = gens
        .iter()
        .position(|g| g.total_degree() == max_degree)
        .expect("some generator attains the maximum");
    let split_generator = gens[split_at].clone();
    let rest: Vec<ExponentVector> =
        gens.iter().enumerate().filter(|&(k, _)| k != split_at).map(|(_, g)| g.clone()).collect();
    let tilde_gens: Vec<ExponentVector> = rest.iter().map(|g| g.lcm(&split_generator)).collect();
    let i_prime = MonomialIdeal::new(ideal.num_vars(), rest).expect("arity preserved");
    let i_tilde = MonomialIdeal::new(ideal.num_vars(), tilde_gens).expect("arity preserved");
    Ok(MvSplit { split_generator, i_prime, i_tilde })
}

/// Checks exactness of `0 -> K(I~)_a -> K(I')_a (+) K(<m_r>)_a -> K(I)_a -> 0`
/// with the maps `u -> (u, -u)` and `(v, w) -> v + w`, in every Koszul
/// degree, including that both maps are chain maps.
pub fn verify_exactness(
    ideal: &MonomialIdeal,
    a: &ExponentVector,
    p: u64,
) -> Result<bool, EngineError> {
    assert_eq!(a.len(), ideal.num_vars(), "multidegree arity mismatch");
    let split = mv_split(ideal)?;
    let principal = MonomialIdeal::new(ideal.num_vars(), vec![split.split_generator.clone()])
        .expect("a single monomial generates an ideal");
    let s = a.support().len();
    let bases = |j: &MonomialIdeal| -> Vec<Vec<KoszulBasisElement>> {
        (0..=s).map(|q| koszul_basis(j, a, q)).collect()
    };
    let b_tilde = bases(&split.i_tilde);
    let b_prime = bases(&split.i_prime);
    let b_m = bases(&principal);
    let b_full = bases(ideal);
    let alpha: Vec<PrimeFieldMatrix> =
        (0..=s).map(|q| inclusion_pair(&b_tilde[q], &b_prime[q], &b_m[q], p)).collect();
    let beta: Vec<PrimeFieldMatrix> =
        (0..=s).map(|q| inclusion_sum(&b_prime[q], &b_m[q], &b_full[q], p)).collect();
    for q in 0..=s {
        let rank_alpha = alpha[q].rank();
        let rank_beta = beta[q].rank();
        if rank_alpha != b_tilde[q].len()
            || rank_beta != b_full[q].len()
            || rank_alpha + rank_beta != b_prime[q].len() + b_m[q].len()
        {
            return Ok(false);
        }
        let composite = beta[q].mul(&alpha[q]).expect("compatible shapes");
        if !composite.is_zero() {
            return Ok(false);
        }
    }
    for q in 1..=s {
        let d_tilde = koszul_differential(&split.i_tilde, a, q, p);
        let d_full = koszul_differential(ideal, a, q, p);
        let d_sum = block_diag(
            &koszul_differential(&split.i_prime, a, q, p),
            &koszul_differential(&principal, a, q, p),
        );
        let through_tilde = alpha[q - 1].mul(&d_tilde).expect("compatible shapes");
        let through_sum = d_sum.mul(&alpha[q]).expect("compatible shapes");
        if through_tilde != through_sum {
            return Ok(false);
        }
        let from_sum = beta[q - 1].mul(&d_sum).expect("compatible shapes");
        let from_full = d_full.mul(&beta[q]).expect("compatible shapes");
        if from_sum != from_full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix of `u -> (u, -u)` on Koszul bases, indexed by wedge sets.
fn inclusion_pair(
    domain: &[KoszulBasisElement],
    upper: &[KoszulBasisElement],
    lower: &[KoszulBasisElement],
    p: u64,
) -> PrimeFieldMatrix {
    let upper_of: HashMap<&[usize], usize> =
        upper.iter().enumerate().map(|(r, e)| (e.wedge.as_slice(), r)).collect();
    let lower_of: HashMap<&[usize], usize> =
        lower.iter().enumerate().map(|(r, e)| (e.wedge.as_slice(), r)).collect();
    let mut m = PrimeFieldMatrix::zero(upper.len() + lower.len(), domain.len(), p);
    for (col, e) in domain.iter().enumerate() {
        let u = upper_of[e.wedge.as_slice()];
        let l = lower_of[e.wedge.as_slice()];
        m.set(u, col, 1);
        m.set(upper.len() + l, col, -1);
    }
    m
}

/// Matrix of `(v, w) -> v + w` on Koszul bases.
fn inclusion_sum(
    upper: &[KoszulBasisElement],
    lower: &[KoszulBasisElement],
    target: &[KoszulBasisElement],
    p: u64,
) -> PrimeFieldMatrix {
    let target_of: HashMap<&[usize], usize> =
        target.iter().enumerate().map(|(r, e)| (e.wedge.as_slice(), r)).collect();
    let mut m = PrimeFieldMatrix::zero(target.len(), upper.len() + lower.len(), p);
    for (col, e) in upper.iter().enumerate() {
        m.set(target_of[e.wedge.as_slice()], col, 1);
    }
    for (col, e) in lower.iter().enumerate() {
        m.set(target_of[e.wedge.as_slice()], upper.len() + col, 1);
    }
    m
}

fn block_diag(a: &PrimeFieldMatrix, b: &PrimeFieldMatrix) -> PrimeFieldMatrix {
    let mut m = PrimeFieldMatrix::zero(a.rows() + b.rows(), a.cols() + b.cols(), a.modulus());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j) as i64);
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j) as i64);
        }
    }
    m
}

/// The three sub-ideals of a Mayer-Vietoris split, as seen by the long
/// exact sequence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubIdeal {
    Prime,
    Principal,
    Tilde,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LesOutcome {
    Determined(usize),
    Unknown,
}

/// Attempts to read `dim H_i(K(I))_a` off the long exact sequence
/// `H_i(I~) -> H_i(I') (+) H_i(m_r) -> H_i(I) -> H_{i-1}(I~) -> ...`
/// without computing at `I` itself. `sub_betti(which, j)` must return
/// `dim H_j(K(which))_a`; it is only consulted as needed.
pub fn les_shortcut<F>(i: usize, mut sub_betti: F) -> LesOutcome
where
    F: FnMut(SubIdeal, usize) -> usize,
{
    let middle = sub_betti(SubIdeal::Prime, i) + sub_betti(SubIdeal::Principal, i);
    if middle == 0 {
        let tilde_prev = if i == 0 { 0 } else { sub_betti(SubIdeal::Tilde, i - 1) };
        if tilde_prev == 0 {
            // Nothing maps in and nothing to connect to.
            return LesOutcome::Determined(0);
        }
        let middle_prev = if i == 0 {
            0
        } else {
            sub_betti(SubIdeal::Prime, i - 1) + sub_betti(SubIdeal::Principal, i - 1)
        };
        if middle_prev == 0 {
            // The connecting map is an isomorphism.
            return LesOutcome::Determined(tilde_prev);
        }
        return LesOutcome::Unknown;
    }
    if sub_betti(SubIdeal::Tilde, i) != 0 {
        return LesOutcome::Unknown;
    }
    let tilde_prev = if i == 0 { 0 } else { sub_betti(SubIdeal::Tilde, i - 1) };
    if tilde_prev == 0 {
        // The middle map is an isomorphism.
        return LesOutcome::Determined(middle);
    }
    LesOutcome::Unknown
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Simplicial,
    Mv,
    Scarf,
}

/// Work accounting for a Betti table computation.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CheckStats {
    /// Distinct multidegrees where a rank computation or LES shortcut
    /// settled a homology dimension.
    pub multidegrees_checked: usize,
    pub rank_computations: usize,
    pub les_shortcuts: usize,
    /// Size of the full Taylor complex, `2^r`.
    pub taylor_size: u128,
    /// Total of all Betti numbers in the table.
    pub minimal_total: usize,
}

/// All nonzero multigraded Betti numbers of an ideal over `F_p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BettiTable {
    entries: BTreeMap<(usize, ExponentVector), usize>,
    field_char: u64,
    stats: CheckStats,
}

impl BettiTable {
    pub(crate) fn from_parts(
        entries: BTreeMap<(usize, ExponentVector), usize>,
        field_char: u64,
        mut stats: CheckStats,
        num_generators: usize,
    ) -> Result<BettiTable, EngineError> {
        debug_assert!(entries.values().all(|&d| d >= 1), "zero entries must be omitted");
        stats.minimal_total = entries.values().sum();
        if num_generators >= 1 {
            let alternating_sum: i64 = entries
                .iter()
                .map(|(&(i, _), &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
                .sum();
            if alternating_sum != 1 {
                return Err(EngineError::EulerViolation { alternating_sum });
            }
        }
        Ok(BettiTable { entries, field_char, stats })
    }

    /// `beta_{i,a}`, zero when absent.
    pub fn entry(&self, i: usize, a: &ExponentVector) -> usize {
        self.entries.get(&(i, a.clone())).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ExponentVector, usize)> + '_ {
        self.entries.iter().map(|((i, a), &d)| (*i, a, d))
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total Betti numbers per homological degree.
    pub fn totals(&self) -> Vec<usize> {
        let Some(max_i) = self.entries.keys().map(|&(i, _)| i).max() else {
            return Vec::new();
        };
        let mut totals = vec![0usize; max_i + 1];
        for (&(i, _), &d) in &self.entries {
            totals[i] += d;
        }
        totals
    }

    /// Number of distinct multidegrees carrying a nonzero entry.
    pub fn distinct_multidegrees(&self) -> usize {
        self.entries.keys().map(|(_, a)| a).collect::<BTreeSet<_>>().len()
    }

    pub fn field_char(&self) -> u64 {
        self.field_char
    }

    pub fn stats(&self) -> &CheckStats {
        &self.stats
    }
}

/// Computes the full Betti table of `I` over `F_p`.
pub fn betti_table(
    ideal: &MonomialIdeal,
    strategy: Strategy,
    p: u64,
) -> Result<BettiTable, EngineError> {
    if !is_prime(p) {
        return Err(EngineError::CharacteristicNotPrime { p });
    }
    let r = ideal.num_generators();
    assert!(r < 128, "generator count overflows Taylor size accounting");
    if r == 0 {
        let stats = CheckStats { taylor_size: 1, ..CheckStats::default() };
        return BettiTable::from_parts(BTreeMap::new(), p, stats, 0);
    }
    let resolved = resolve_strategy(ideal, strategy);
    if resolved == Resolved::Scarf {
        return scarf_betti(ideal, p);
    }
    let book = StatsBook::new();
    let entries = match resolved {
        Resolved::Simplicial => run_levels(ideal, &|i, a| {
            let (dim, ranks) = betti_with_cost(ideal, i, a, p);
            book.commit(a, ranks, 0);
            dim
        }),
        Resolved::Mv => {
            let engine = MvEngine { p, memo: Mutex::new(HashMap::new()), book: &book };
            run_levels(ideal, &|i, a| engine.eval(ideal, i, a))
        }
        Resolved::Scarf => unreachable!("handled above"),
    };
    BettiTable::from_parts(entries, p, book.into_stats(r), r)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Resolved {
    Simplicial,
    Mv,
    Scarf,
}

fn resolve_strategy(ideal: &MonomialIdeal, strategy: Strategy) -> Resolved {
    let r = ideal.num_generators();
    match strategy {
        Strategy::Simplicial => Resolved::Simplicial,
        Strategy::Mv if r <= 1 => Resolved::Simplicial,
        Strategy::Mv => Resolved::Mv,
        Strategy::Scarf => Resolved::Scarf,
        Strategy::Auto => {
            if r <= SCARF_GENERATOR_CAP && is_generic(ideal) {
                Resolved::Scarf
            } else if r <= 1 {
                Resolved::Simplicial
            } else if r <= 2 * ideal.num_vars() {
                Resolved::Mv
            } else {
                Resolved::Simplicial
            }
        }
    }
}

/// Walks homological degrees upward; candidates at level `i` are the
/// pairwise lcms of the multidegrees observed nonzero at level `i - 1`.
fn run_levels<F>(ideal: &MonomialIdeal, eval: &F) -> BTreeMap<(usize, ExponentVector), usize>
where
    F: Fn(usize, &ExponentVector) -> usize + Sync,
{
    let r = ideal.num_generators();
    let mut entries = BTreeMap::new();
    let mut candidates: BTreeSet<ExponentVector> = ideal.generators().iter().cloned().collect();
    let mut i = 0usize;
    while i < r && !candidates.is_empty() {
        let level: Vec<ExponentVector> = candidates.iter().cloned().collect();
        let dims: Vec<usize> = level.par_iter().map(|a| eval(i, a)).collect();
        let mut nonzero: Vec<ExponentVector> = Vec::new();
        for (a, dim) in level.into_iter().zip(dims) {
            if dim > 0 {
                entries.insert((i, a.clone()), dim);
                nonzero.push(a);
            }
        }
        let mut next = BTreeSet::new();
        for (k, u) in nonzero.iter().enumerate() {
            for v in &nonzero[k..] {
                next.insert(u.lcm(v));
            }
        }
        candidates = next;
        i += 1;
    }
    entries
}

/// Statistics shared across worker threads; totals are committed once per
/// settled multidegree so they do not depend on scheduling.
struct StatsBook {
    checked: Mutex<BTreeSet<ExponentVector>>,
    ranks: AtomicUsize,
    les: AtomicUsize,
}

impl StatsBook {
    fn new() -> Self {
        StatsBook { checked: Mutex::new(BTreeSet::new()), ranks: AtomicUsize::new(0), les: AtomicUsize::new(0) }
    }

    fn commit(&self, a: &ExponentVector, ranks: usize, les: usize) {
        if ranks == 0 && les == 0 {
            return;
        }
        self.ranks.fetch_add(ranks, Ordering::Relaxed);
        self.les.fetch_add(les, Ordering::Relaxed);
        self.checked.lock().expect("stats lock").insert(a.clone());
    }

    fn into_stats(self, num_generators: usize) -> CheckStats {
        CheckStats {
            multidegrees_checked: self.checked.into_inner().expect("stats lock").len(),
            rank_computations: self.ranks.into_inner(),
            les_shortcuts: self.les.into_inner(),
            taylor_size: 1u128 << num_generators,
            minimal_total: 0,
        }
    }
}

/// Memoized Mayer-Vietoris recursion. Each `(ideal, i, a)` is settled by
/// a closed form, a LES shortcut over the split sub-ideals, or an upper
/// Koszul rank computation; results and their costs are committed by
/// whichever thread first writes the memo entry.
struct MvEngine<'b> {
    p: u64,
    memo: Mutex<HashMap<(MonomialIdeal, usize, ExponentVector), usize>>,
    book: &'b StatsBook,
}

impl MvEngine<'_> {
    fn eval(&self, ideal: &MonomialIdeal, i: usize, a: &ExponentVector) -> usize {
        let r = ideal.num_generators();
        if r == 0 || i >= r {
            return 0;
        }
        if r == 1 {
            return usize::from(i == 0 && a == &ideal.generators()[0]);
        }
        if !ideal.contains(a) || !in_lcm_lattice(ideal, a) {
            return 0;
        }
        let key = (ideal.clone(), i, a.clone());
        if let Some(&dim) = self.memo.lock().expect("memo lock").get(&key) {
            return dim;
        }
        let split = mv_split(ideal).expect("at least two generators");
        let principal =
            MonomialIdeal::new(ideal.num_vars(), vec![split.split_generator.clone()])
                .expect("a single monomial generates an ideal");
        let outcome = les_shortcut(i, |which, j| {
            let sub = match which {
                SubIdeal::Prime => &split.i_prime,
                SubIdeal::Principal => &principal,
                SubIdeal::Tilde => &split.i_tilde,
            };
            self.eval(sub, j, a)
        });
        let (dim, ranks, les) = match outcome {
            LesOutcome::Determined(dim) => (dim, 0, 1),
            LesOutcome::Unknown => {
                let (dim, ranks) = betti_with_cost(ideal, i, a, self.p);
                (dim, ranks, 0)
            }
        };
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.insert(key, dim).is_none() {
            drop(memo);
            self.book.commit(a, ranks, les);
        }
        dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::koszul_homology_dim;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: u64 = 32003;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(n, gens.iter().map(|g| ev(g)).collect()).unwrap()
    }

    fn random_small(rng: &mut ChaCha8Rng) -> MonomialIdeal {
        let n = rng.gen_range(2..=4);
        let gens: Vec<ExponentVector> = (0..rng.gen_range(1..=5))
            .map(|_| ExponentVector::new((0..n).map(|_| rng.gen_range(0..4)).collect()))
            .collect();
        MonomialIdeal::new(n, gens).unwrap()
    }

    #[test]
    fn lattice_of_the_maximal_ideal() {
        let l = lcm_lattice(&ideal(2, &[&[1, 0], &[0, 1]]));
        let expect: BTreeSet<ExponentVector> =
            [ev(&[1, 0]), ev(&[0, 1]), ev(&[1, 1])].into_iter().collect();
        assert_eq!(l.elements(), &expect);
    }

    #[test]
    fn lattice_of_the_squared_maximal_ideal() {
        let l = lcm_lattice(&ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
        let expect: BTreeSet<ExponentVector> =
            [ev(&[2, 0]), ev(&[1, 1]), ev(&[0, 2]), ev(&[2, 1]), ev(&[1, 2]), ev(&[2, 2])]
                .into_iter()
                .collect();
        assert_eq!(l.elements(), &expect);
        let above = l.divisibility(&ev(&[2, 0])).unwrap();
        let expect_above: BTreeSet<ExponentVector> =
            [ev(&[2, 0]), ev(&[2, 1]), ev(&[2, 2])].into_iter().collect();
        assert_eq!(above, &expect_above);
    }

    #[test]
    fn lattice_of_a_principal_ideal_is_the_generator() {
        let l = lcm_lattice(&ideal(3, &[&[1, 2, 0]]));
        assert_eq!(l.len(), 1);
        assert!(l.contains(&ev(&[1, 2, 0])));
    }

    #[test]
    fn fast_membership_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..50 {
            let ideal = random_small(&mut rng);
            if ideal.is_zero() {
                continue;
            }
            let l = lcm_lattice(&ideal);
            for _ in 0..20 {
                let n = ideal.num_vars();
                let a = ExponentVector::new((0..n).map(|_| rng.gen_range(0..5)).collect());
                assert_eq!(in_lcm_lattice(&ideal, &a), l.contains(&a), "at {a:?} for {ideal:?}");
            }
            for a in l.elements() {
                assert!(in_lcm_lattice(&ideal, a));
            }
        }
    }

    #[test]
    fn candidates_level_zero_are_the_generators() {
        let i = ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        let c = candidate_multidegrees(&i, 0);
        assert_eq!(c, i.generators().iter().cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn candidates_level_one_of_the_squared_maximal_ideal() {
        let c = candidate_multidegrees(&ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]), 1);
        assert_eq!(c.len(), 6);
        assert!(c.contains(&ev(&[2, 1])));
        assert!(c.contains(&ev(&[1, 2])));
    }

    #[test]
    fn candidates_stabilize_inside_the_lattice() {
        let i = ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        let l = lcm_lattice(&i);
        for level in 0..6 {
            for a in candidate_multidegrees(&i, level) {
                assert!(l.contains(&a));
            }
        }
        assert_eq!(candidate_multidegrees(&i, 4), candidate_multidegrees(&i, 5));
    }

    #[test]
    fn split_of_the_squared_maximal_ideal() {
        let split = mv_split(&ideal(2, &[&[2, 0], &[1, 1], &[0, 2]])).unwrap();
        assert_eq!(split.split_generator, ev(&[0, 2]));
        assert_eq!(split.i_prime, ideal(2, &[&[2, 0], &[1, 1]]));
        assert_eq!(split.i_tilde, ideal(2, &[&[1, 2]]));
    }

    #[test]
    fn split_of_the_maximal_ideal() {
        let split = mv_split(&ideal(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(split.split_generator, ev(&[0, 1]));
        assert_eq!(split.i_prime, ideal(2, &[&[1, 0]]));
        assert_eq!(split.i_tilde, ideal(2, &[&[1, 1]]));
    }

    #[test]
    fn split_needs_two_generators() {
        assert_eq!(
            mv_split(&ideal(2, &[&[1, 1]])),
            Err(EngineError::SplitUnavailable { generators: 1 })
        );
    }

    #[test]
    fn split_invariants_on_random_ideals() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..50 {
            let ideal = random_small(&mut rng);
            if ideal.num_generators() < 2 {
                continue;
            }
            let split = mv_split(&ideal).unwrap();
            let mut rest: Vec<ExponentVector> = ideal.generators().to_vec();
            rest.retain(|g| g != &split.split_generator);
            assert_eq!(split.i_prime.generators(), rest.as_slice());
            for g in split.i_tilde.generators() {
                assert!(split.split_generator.divides(g));
                assert!(split.i_prime.contains(g));
            }
        }
    }

    #[test]
    fn exactness_on_worked_examples() {
        let i = ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        assert_eq!(verify_exactness(&i, &ev(&[1, 2]), P), Ok(true));
        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(verify_exactness(&m, &ev(&[1, 1]), P), Ok(true));
        // Outside every lattice: all three windows vanish.
        assert_eq!(verify_exactness(&i, &ev(&[0, 1]), P), Ok(true));
    }

    #[test]
    fn exactness_on_random_ideals_across_the_lattice() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..25 {
            let ideal = random_small(&mut rng);
            if ideal.num_generators() < 2 {
                continue;
            }
            for a in lcm_lattice(&ideal).elements() {
                assert_eq!(verify_exactness(&ideal, a, P), Ok(true), "at {a:?} for {ideal:?}");
            }
        }
    }

    #[test]
    fn shortcut_on_all_zero_dimensions() {
        assert_eq!(les_shortcut(3, |_, _| 0), LesOutcome::Determined(0));
    }

    #[test]
    fn shortcut_connects_through_the_tilde_ideal() {
        // Squared maximal ideal at a = (1,2), i = 1: the middle terms all
        // vanish and the connecting map is an isomorphism from H_0(I~).
        let i = ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        let split = mv_split(&i).unwrap();
        let principal = ideal(2, &[&[0, 2]]);
        let a = ev(&[1, 2]);
        let outcome = les_shortcut(1, |which, j| {
            let sub = match which {
                SubIdeal::Prime => &split.i_prime,
                SubIdeal::Principal => &principal,
                SubIdeal::Tilde => &split.i_tilde,
            };
            koszul_homology_dim(sub, &a, j, P)
        });
        assert_eq!(outcome, LesOutcome::Determined(1));
        assert_eq!(koszul_homology_dim(&i, &a, 1, P), 1);
    }

    #[test]
    fn shortcut_determinations_match_the_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let mut determined = 0usize;
        for _ in 0..40 {
            let ideal = random_small(&mut rng);
            if ideal.num_generators() < 2 {
                continue;
            }
            let split = mv_split(&ideal).unwrap();
            let principal =
                MonomialIdeal::new(ideal.num_vars(), vec![split.split_generator.clone()]).unwrap();
            for a in lcm_lattice(&ideal).elements() {
                for i in 0..ideal.num_generators() {
                    let outcome = les_shortcut(i, |which, j| {
                        let sub = match which {
                            SubIdeal::Prime => &split.i_prime,
                            SubIdeal::Principal => &principal,
                            SubIdeal::Tilde => &split.i_tilde,
                        };
                        koszul_homology_dim(sub, a, j, P)
                    });
                    if let LesOutcome::Determined(dim) = outcome {
                        determined += 1;
                        assert_eq!(
                            dim,
                            koszul_homology_dim(&ideal, a, i, P),
                            "unsound shortcut at {a:?} i={i} for {ideal:?}"
                        );
                    }
                }
            }
        }
        assert!(determined > 50, "shortcut fired only {determined} times");
    }

    #[test]
    fn table_of_the_maximal_ideal_in_three_variables() {
        let table = betti_table(&ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), Strategy::Auto, P)
            .unwrap();
        assert_eq!(table.totals(), vec![3, 3, 1]);
        assert_eq!(table.entry(1, &ev(&[1, 1, 0])), 1);
        assert_eq!(table.entry(2, &ev(&[1, 1, 1])), 1);
        assert_eq!(table.entry(1, &ev(&[1, 1, 1])), 0);
    }

    #[test]
    fn table_of_the_squared_maximal_ideal() {
        for strategy in [Strategy::Auto, Strategy::Simplicial, Strategy::Mv] {
            let table =
                betti_table(&ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]), strategy, P).unwrap();
            let entries: Vec<(usize, ExponentVector, usize)> =
                table.iter().map(|(i, a, d)| (i, a.clone(), d)).collect();
            assert_eq!(
                entries,
                vec![
                    (0, ev(&[0, 2]), 1),
                    (0, ev(&[1, 1]), 1),
                    (0, ev(&[2, 0]), 1),
                    (1, ev(&[1, 2]), 1),
                    (1, ev(&[2, 1]), 1),
                ],
                "strategy {strategy:?}"
            );
        }
    }

    #[test]
    fn table_of_trivial_ideals() {
        let zero = betti_table(&MonomialIdeal::zero(3), Strategy::Auto, P).unwrap();
        assert!(zero.is_empty());
        assert_eq!(zero.stats().taylor_size, 1);
        let unit = betti_table(&ideal(2, &[&[0, 0]]), Strategy::Simplicial, P).unwrap();
        assert_eq!(unit.entry(0, &ev(&[0, 0])), 1);
        assert_eq!(unit.num_entries(), 1);
        let principal = betti_table(&ideal(2, &[&[3, 1]]), Strategy::Mv, P).unwrap();
        assert_eq!(principal.entry(0, &ev(&[3, 1])), 1);
        assert_eq!(principal.num_entries(), 1);
        assert_eq!(principal.stats().minimal_total, 1);
    }

    #[test]
    fn scarf_strategy_rejects_non_generic_ideals() {
        let err = betti_table(&ideal(3, &[&[1, 1, 0], &[1, 0, 1]]), Strategy::Scarf, P)
            .unwrap_err();
        assert!(matches!(err, EngineError::Family(FamilyError::NotGeneric)));
    }

    #[test]
    fn strategies_agree_with_the_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..25 {
            let ideal = random_small(&mut rng);
            if ideal.is_zero() {
                continue;
            }
            let reference = betti_table(&ideal, Strategy::Simplicial, P).unwrap();
            for (i, a, d) in reference.iter() {
                assert_eq!(d, koszul_homology_dim(&ideal, a, i, P), "at {a:?} i={i}");
            }
            for strategy in [Strategy::Auto, Strategy::Mv] {
                let table = betti_table(&ideal, strategy, P).unwrap();
                assert_eq!(
                    table.iter().collect::<Vec<_>>(),
                    reference.iter().collect::<Vec<_>>(),
                    "strategy {strategy:?} for {ideal:?}"
                );
            }
        }
    }

    #[test]
    fn stats_are_within_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for strategy in [Strategy::Simplicial, Strategy::Mv] {
            for _ in 0..20 {
                let ideal = random_small(&mut rng);
                if ideal.is_zero() {
                    continue;
                }
                let table = betti_table(&ideal, strategy, P).unwrap();
                let stats = table.stats();
                let lattice = lcm_lattice(&ideal);
                assert!(stats.multidegrees_checked <= lattice.len());
                assert!(stats.multidegrees_checked >= table.distinct_multidegrees());
                assert_eq!(stats.taylor_size, 1u128 << ideal.num_generators());
                assert_eq!(stats.minimal_total, table.iter().map(|(_, _, d)| d).sum::<usize>());
                assert!(stats.minimal_total >= ideal.num_generators());
            }
        }
    }

    #[test]
    fn tables_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for _ in 0..10 {
            let ideal = random_small(&mut rng);
            for strategy in [Strategy::Simplicial, Strategy::Mv] {
                let first = betti_table(&ideal, strategy, P).unwrap();
                let second = betti_table(&ideal, strategy, P).unwrap();
                assert_eq!(first, second);
            }
        }
    }

    #[test]
    fn non_prime_characteristic_is_rejected() {
        let err = betti_table(&ideal(2, &[&[1, 0]]), Strategy::Auto, 6).unwrap_err();
        assert_eq!(err, EngineError::CharacteristicNotPrime { p: 6 });
    }
}
