//! Per-multidegree computation through upper Koszul simplicial complexes.
//!
//! For a multidegree `a` the upper Koszul complex of `I` has the subsets
//! `tau` of the support of `a` with `x^(a - e_tau)` in `I` as faces; the
//! degree-`a` slice of the Koszul complex of `I` is its (shifted) reduced
//! chain complex, so `beta_{i,a}(I) = dim H~_{i-1}`.
//!
//! Conventions: the empty face generates homological degree -1, the
//! complex `{empty}` has `H~_{-1} = k`, and the complex with no faces at
//! all (which happens exactly when `x^a` is not in `I`) has no homology
//! anywhere. Only the three chain levels around the requested degree are
//! ever materialized; truncating to a skeleton does not change the
//! homology below the cut.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::linalg::{homology_dim, PrimeFieldMatrix};
use crate::monomial::{ExponentVector, MonomialIdeal};
use crate::oracle::KoszulBasisElement;

/// A finite simplicial complex with labeled vertices; faces are stored as
/// bitmasks over positions into `vertex_labels`, including the empty face
/// whenever the complex is nonempty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    vertex_labels: Vec<usize>,
    faces: BTreeSet<u64>,
}

impl SimplicialComplex {
    /// Complex with no faces at all.
    pub fn empty() -> Self {
        SimplicialComplex { vertex_labels: Vec::new(), faces: BTreeSet::new() }
    }

    /// Downward closure of the given faces (position lists into
    /// `vertex_labels`). The empty face is always included.
    pub fn from_faces<I, F>(vertex_labels: Vec<usize>, faces: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = usize>,
    {
        assert!(vertex_labels.len() <= 64, "complex too large for mask representation");
        let mut closed: BTreeSet<u64> = BTreeSet::new();
        closed.insert(0);
        for face in faces {
            let mut mask: u64 = 0;
            for v in face {
                assert!(v < vertex_labels.len(), "face vertex out of range");
                mask |= 1 << v;
            }
            // Insert every subset of `mask`.
            let mut sub = mask;
            loop {
                closed.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        SimplicialComplex { vertex_labels, faces: closed }
    }

    pub fn vertex_labels(&self) -> &[usize] {
        &self.vertex_labels
    }

    /// True when there are no faces at all (not even the empty face).
    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn includes_empty_face(&self) -> bool {
        self.faces.contains(&0)
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Dimension of the complex; -1 for `{empty}`, None for no faces.
    pub fn dim(&self) -> Option<isize> {
        self.faces.iter().map(|m| m.count_ones() as isize - 1).max()
    }

    pub fn contains_face(&self, positions: &[usize]) -> bool {
        let mut mask: u64 = 0;
        for &v in positions {
            mask |= 1 << v;
        }
        self.faces.contains(&mask)
    }

    /// Faces with exactly `size` vertices as sorted position lists, in lex
    /// order (the canonical chain basis order).
    pub fn faces_of_size(&self, size: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .faces
            .iter()
            .filter(|m| m.count_ones() as usize == size)
            .map(|&m| mask_positions(m))
            .collect();
        out.sort();
        out
    }

    /// All faces, grouped by size.
    pub fn downward_closed(&self) -> bool {
        self.faces.iter().all(|&m| {
            (0..64).filter(|&v| m >> v & 1 == 1).all(|v| self.faces.contains(&(m & !(1 << v))))
        })
    }

    /// The (d+1)-skeleton: all faces of dimension at most d+1.
    pub fn truncate_for_degree(&self, d: isize) -> SimplicialComplex {
        let max_size = (d + 2).max(0) as u32;
        SimplicialComplex {
            vertex_labels: self.vertex_labels.clone(),
            faces: self.faces.iter().copied().filter(|m| m.count_ones() <= max_size).collect(),
        }
    }
}

fn mask_positions(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// The upper Koszul simplicial complex of `I` at `a`: faces are the
/// subsets `tau` of the support of `a` with `x^(a - e_tau)` in `I`.
/// Returns the complex with no faces when `x^a` is not in `I`.
pub fn upper_koszul_complex(ideal: &MonomialIdeal, a: &ExponentVector) -> SimplicialComplex {
    assert_eq!(a.len(), ideal.num_vars(), "multidegree arity mismatch");
    let labels = a.support();
    if !ideal.contains(a) {
        return SimplicialComplex::empty();
    }
    let s = labels.len();
    assert!(s <= 64, "support too large for mask representation");
    let mut faces = BTreeSet::new();
    for mask in 0u64..(1 << s) {
        let vars: Vec<usize> = (0..s).filter(|&k| mask >> k & 1 == 1).map(|k| labels[k]).collect();
        let reduced = a.checked_sub_vars(&vars).expect("support subtraction stays nonnegative");
        if ideal.contains(&reduced) {
            faces.insert(mask);
        }
    }
    SimplicialComplex { vertex_labels: labels, faces }
}

/// Simplicial boundary matrix from faces with `size` vertices to faces
/// with `size - 1` vertices; sign `(-1)^j` for dropping the j-th smallest
/// vertex. For `size = 0` this is the zero map out of the empty face.
fn boundary_matrix(
    domain: &[Vec<usize>],
    codomain: &[Vec<usize>],
    p: u64,
) -> PrimeFieldMatrix {
    let row_of: HashMap<&[usize], usize> =
        codomain.iter().enumerate().map(|(r, f)| (f.as_slice(), r)).collect();
    let mut d = PrimeFieldMatrix::zero(codomain.len(), domain.len(), p);
    for (col, face) in domain.iter().enumerate() {
        for j in 0..face.len() {
            let mut target = face.clone();
            target.remove(j);
            if let Some(&row) = row_of.get(target.as_slice()) {
                let sign: i64 = if j % 2 == 0 { 1 } else { -1 };
                d.set(row, col, sign);
            }
        }
    }
    d
}

/// `dim H~_d` of the complex over F_p; `d` may be -1.
pub fn reduced_homology_dim(complex: &SimplicialComplex, d: isize, p: u64) -> usize {
    if complex.is_void() || d < -1 {
        return 0;
    }
    let size_here = (d + 1) as usize;
    let here = complex.faces_of_size(size_here);
    if here.is_empty() {
        return 0;
    }
    let above = complex.faces_of_size(size_here + 1);
    let d_out = boundary_matrix(&above, &here, p);
    let d_in = if d == -1 {
        PrimeFieldMatrix::zero(0, here.len(), p)
    } else {
        let below = complex.faces_of_size(size_here - 1);
        boundary_matrix(&here, &below, p)
    };
    homology_dim(&d_in, &d_out).expect("simplicial window is a chain complex")
}

/// Three consecutive chain levels of a complex: the support labels, then
/// the faces with `i-1`, `i`, and `i+1` vertices as position lists.
type ChainWindow = (Vec<usize>, Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<Vec<usize>>);

/// The chain window of the upper Koszul complex at `a` around homological
/// degree `i` (faces with `i-1`, `i`, `i+1` vertices as position lists
/// into the support), built by membership tests only.
fn upper_koszul_window(ideal: &MonomialIdeal, a: &ExponentVector, i: usize) -> Option<ChainWindow> {
    if !ideal.contains(a) {
        return None;
    }
    let labels = a.support();
    let level = |size: usize| -> Vec<Vec<usize>> {
        if size > labels.len() {
            return Vec::new();
        }
        (0..labels.len())
            .combinations(size)
            .filter(|tau| {
                let vars: Vec<usize> = tau.iter().map(|&k| labels[k]).collect();
                let reduced = a.checked_sub_vars(&vars).expect("inside support");
                ideal.contains(&reduced)
            })
            .collect()
    };
    let here = level(i);
    let below = if i == 0 { Vec::new() } else { level(i - 1) };
    let above = level(i + 1);
    Some((labels, below, here, above))
}

/// `beta_{i,a}(I)` through the upper Koszul complex, materializing only
/// the three relevant chain levels.
pub fn betti_via_simplicial(ideal: &MonomialIdeal, i: usize, a: &ExponentVector, p: u64) -> usize {
    betti_with_cost(ideal, i, a, p).0
}

/// As `betti_via_simplicial`, also reporting the number of matrix rank
/// computations performed (0 when the window is empty, 2 otherwise).
pub(crate) fn betti_with_cost(
    ideal: &MonomialIdeal,
    i: usize,
    a: &ExponentVector,
    p: u64,
) -> (usize, usize) {
    assert_eq!(a.len(), ideal.num_vars(), "multidegree arity mismatch");
    let Some((_, below, here, above)) = upper_koszul_window(ideal, a, i) else {
        return (0, 0);
    };
    if here.is_empty() {
        return (0, 0);
    }
    let d_out = boundary_matrix(&above, &here, p);
    let d_in = if i == 0 {
        PrimeFieldMatrix::zero(0, here.len(), p)
    } else {
        boundary_matrix(&here, &below, p)
    };
    let dim = homology_dim(&d_in, &d_out).expect("upper Koszul window is a chain complex");
    (dim, 2)
}

/// A homology class representative: a cycle in `K_i(I)_a`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyClassRep {
    pub multidegree: ExponentVector,
    pub degree: usize,
    /// Coefficients in F_p paired with Koszul basis elements of wedge
    /// size `degree`.
    pub chain: Vec<(u64, KoszulBasisElement)>,
}

/// Representatives of a basis of `H_i(K(I))_a`: kernel vectors of the
/// simplicial boundary completed to a basis modulo the image of the next
/// boundary, mapped through `tau -> x^(a - e_tau) (x) wedge(tau)`.
/// Returns exactly `beta_{i,a}` chains.
pub fn homology_class_reps(
    ideal: &MonomialIdeal,
    a: &ExponentVector,
    i: usize,
    p: u64,
) -> Vec<HomologyClassRep> {
    assert_eq!(a.len(), ideal.num_vars(), "multidegree arity mismatch");
    let Some((labels, below, here, above)) = upper_koszul_window(ideal, a, i) else {
        return Vec::new();
    };
    if here.is_empty() {
        return Vec::new();
    }
    let d_out = boundary_matrix(&above, &here, p);
    let d_in = if i == 0 {
        PrimeFieldMatrix::zero(0, here.len(), p)
    } else {
        boundary_matrix(&here, &below, p)
    };
    let mut span = Eliminator::new(here.len(), p);
    for col in 0..d_out.cols() {
        let v: Vec<u64> = (0..d_out.rows()).map(|r| d_out.get(r, col)).collect();
        span.absorb(&v);
    }
    let mut reps = Vec::new();
    for v in d_in.kernel_basis() {
        if !span.absorb(&v) {
            continue;
        }
        let chain = v
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(k, &c)| {
                let wedge: Vec<usize> = here[k].iter().map(|&t| labels[t]).collect();
                let monomial = a.checked_sub_vars(&wedge).expect("inside support");
                (c, KoszulBasisElement { wedge, monomial })
            })
            .collect();
        reps.push(HomologyClassRep { multidegree: a.clone(), degree: i, chain });
    }
    reps
}

/// Incremental row space for rank-extension tests during rep selection.
struct Eliminator {
    rows: Vec<Vec<u64>>,
    width: usize,
    p: u64,
}

impl Eliminator {
    fn new(width: usize, p: u64) -> Self {
        Eliminator { rows: Vec::new(), width, p }
    }

    /// Reduce `v` against the stored echelon rows; if a nonzero residue
    /// remains, keep it and report that the rank grew.
    fn absorb(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.width);
        let p = self.p;
        let mut w: Vec<u64> = v.iter().map(|&x| x % p).collect();
        for row in &self.rows {
            let lead = row.iter().position(|&x| x != 0).expect("stored rows are nonzero");
            if w[lead] != 0 {
                let factor = w[lead]; // rows are normalized to lead 1
                for (wx, &rx) in w.iter_mut().zip(row) {
                    *wx = (*wx + p - factor * rx % p) % p;
                }
            }
        }
        let Some(lead) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = mod_inv(w[lead], p);
        for x in &mut w {
            *x = *x * inv % p;
        }
        // Keep rows ordered by leading position for deterministic sweeps.
        let at = self.rows.partition_point(|r| {
            r.iter().position(|&x| x != 0).expect("nonzero") < lead
        });
        self.rows.insert(at, w);
        true
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r): (i64, i64) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1);
    t.rem_euclid(p as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{koszul_basis, koszul_differential, koszul_homology_dim};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: u64 = 32003;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(n, gens.iter().map(|g| ev(g)).collect()).unwrap()
    }

    #[test]
    fn upper_complex_of_maximal_ideal_at_one_one() {
        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        let c = upper_koszul_complex(&m, &ev(&[1, 1]));
        assert_eq!(c.vertex_labels(), &[0, 1]);
        assert!(c.includes_empty_face());
        assert!(c.contains_face(&[0]));
        assert!(c.contains_face(&[1]));
        assert!(!c.contains_face(&[0, 1]));
        assert_eq!(reduced_homology_dim(&c, 0, P), 1);
        assert_eq!(reduced_homology_dim(&c, -1, P), 0);
    }

    #[test]
    fn upper_complex_at_a_generator_degree_is_just_the_empty_face() {
        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        let c = upper_koszul_complex(&m, &ev(&[1, 0]));
        assert_eq!(c.num_faces(), 1);
        assert!(c.includes_empty_face());
        assert_eq!(reduced_homology_dim(&c, -1, P), 1);
    }

    #[test]
    fn upper_complex_outside_the_ideal_is_void() {
        let m = ideal(2, &[&[2, 0]]);
        let c = upper_koszul_complex(&m, &ev(&[1, 0]));
        assert!(c.is_void());
        assert_eq!(reduced_homology_dim(&c, -1, P), 0);
        assert_eq!(reduced_homology_dim(&c, 0, P), 0);
    }

    #[test]
    fn hollow_and_full_triangle() {
        let hollow = SimplicialComplex::from_faces(vec![0, 1, 2], [[0, 1], [0, 2], [1, 2]]);
        assert_eq!(reduced_homology_dim(&hollow, 1, P), 1);
        assert_eq!(reduced_homology_dim(&hollow, 0, P), 0);
        assert_eq!(reduced_homology_dim(&hollow, -1, P), 0);
        let full = SimplicialComplex::from_faces(vec![0, 1, 2], [[0, 1, 2]]);
        for d in -1..=2 {
            assert_eq!(reduced_homology_dim(&full, d, P), 0, "full simplex at d={d}");
        }
    }

    #[test]
    fn two_points_have_reduced_h0() {
        let c = SimplicialComplex::from_faces(vec![3, 7], [[0], [1]]);
        assert_eq!(reduced_homology_dim(&c, 0, P), 1);
    }

    #[test]
    fn upper_complexes_are_downward_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..60 {
            let n = rng.gen_range(2..=5);
            let gens: Vec<ExponentVector> = (0..rng.gen_range(1..=5))
                .map(|_| ExponentVector::new((0..n).map(|_| rng.gen_range(0..4)).collect()))
                .collect();
            let ideal = MonomialIdeal::new(n, gens).unwrap();
            let a = ExponentVector::new((0..n).map(|_| rng.gen_range(0..5)).collect());
            let c = upper_koszul_complex(&ideal, &a);
            assert!(c.downward_closed(), "not closed at {a:?} for {ideal:?}");
            assert_eq!(!c.is_void(), ideal.contains(&a));
        }
    }

    #[test]
    fn truncation_preserves_homology_at_the_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..200 {
            let k = rng.gen_range(1..=6);
            let num_faces = rng.gen_range(1..=5);
            let faces: Vec<Vec<usize>> = (0..num_faces)
                .map(|_| {
                    let size = rng.gen_range(0..=k);
                    let mut f: Vec<usize> = (0..k).collect();
                    for i in 0..size {
                        let j = rng.gen_range(i..k);
                        f.swap(i, j);
                    }
                    f.truncate(size);
                    f
                })
                .collect();
            let c = SimplicialComplex::from_faces((0..k).collect(), faces);
            let top = c.dim().unwrap();
            for d in -1..=top {
                let full = reduced_homology_dim(&c, d, P);
                let trunc = reduced_homology_dim(&c.truncate_for_degree(d), d, P);
                assert_eq!(full, trunc, "truncation changed H~_{d}");
            }
        }
    }

    #[test]
    fn agrees_with_koszul_oracle_on_random_ideals() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..60 {
            let n = rng.gen_range(2..=5);
            let gens: Vec<ExponentVector> = (0..rng.gen_range(1..=6))
                .map(|_| ExponentVector::new((0..n).map(|_| rng.gen_range(0..4)).collect()))
                .collect();
            let ideal = MonomialIdeal::new(n, gens).unwrap();
            if ideal.is_zero() {
                continue;
            }
            for _ in 0..6 {
                let a = ExponentVector::new((0..n).map(|_| rng.gen_range(0..6)).collect());
                for i in 0..=n {
                    assert_eq!(
                        betti_via_simplicial(&ideal, i, &a, P),
                        koszul_homology_dim(&ideal, &a, i, P),
                        "disagree at {a:?} i={i} for {ideal:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn rep_for_a_minimal_generator_is_the_generator() {
        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        let reps = homology_class_reps(&m, &ev(&[1, 0]), 0, P);
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].chain.len(), 1);
        let (c, ref elem) = reps[0].chain[0];
        assert_eq!(c, 1);
        assert!(elem.wedge.is_empty());
        assert_eq!(elem.monomial, ev(&[1, 0]));
    }

    #[test]
    fn rep_counts_match_betti_numbers() {
        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(homology_class_reps(&m, &ev(&[1, 1]), 1, P).len(), 1);
        assert!(homology_class_reps(&m, &ev(&[1, 1]), 0, P).is_empty());
        let top = ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let reps = homology_class_reps(&top, &ev(&[1, 1, 1]), 2, P);
        assert_eq!(reps.len(), 1);
        assert!(reps[0].chain.iter().all(|(_, e)| e.wedge.len() == 2));
    }

    #[test]
    fn reps_are_cycles_of_full_rank_modulo_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..40 {
            let n = rng.gen_range(2..=4);
            let gens: Vec<ExponentVector> = (0..rng.gen_range(1..=5))
                .map(|_| ExponentVector::new((0..n).map(|_| rng.gen_range(0..4)).collect()))
                .collect();
            let ideal = MonomialIdeal::new(n, gens).unwrap();
            if ideal.is_zero() {
                continue;
            }
            let a = ExponentVector::new((0..n).map(|_| rng.gen_range(0..5)).collect());
            for i in 0..=n {
                let beta = koszul_homology_dim(&ideal, &a, i, P);
                let reps = homology_class_reps(&ideal, &a, i, P);
                assert_eq!(reps.len(), beta, "rep count at {a:?} i={i}");
                if beta == 0 {
                    continue;
                }
                let basis = koszul_basis(&ideal, &a, i);
                let col_of: std::collections::HashMap<&[usize], usize> = basis
                    .iter()
                    .enumerate()
                    .map(|(c, e)| (e.wedge.as_slice(), c))
                    .collect();
                let d_i = if i == 0 {
                    PrimeFieldMatrix::zero(0, basis.len(), P)
                } else {
                    koszul_differential(&ideal, &a, i, P)
                };
                let d_next = if i + 1 > n {
                    PrimeFieldMatrix::zero(basis.len(), 0, P)
                } else {
                    koszul_differential(&ideal, &a, i + 1, P)
                };
                // Image of the next differential, then the reps on top: the
                // rank must grow by exactly beta.
                let mut span = Eliminator::new(basis.len(), P);
                let mut rank = 0usize;
                for col in 0..d_next.cols() {
                    let v: Vec<u64> = (0..d_next.rows()).map(|r| d_next.get(r, col)).collect();
                    if span.absorb(&v) {
                        rank += 1;
                    }
                }
                assert_eq!(rank, d_next.rank());
                for rep in &reps {
                    let mut v = vec![0u64; basis.len()];
                    for (c, elem) in &rep.chain {
                        v[col_of[elem.wedge.as_slice()]] = *c;
                    }
                    assert!(
                        d_i.apply(&v).iter().all(|&x| x == 0),
                        "rep is not a cycle at {a:?} i={i}"
                    );
                    assert!(span.absorb(&v), "rep dependent modulo boundaries at {a:?} i={i}");
                }
            }
        }
    }
}
