//! Matroids on the ground set `E = {0, ..., n}` given by a rank oracle.
//!
//! A [`Matroid`] is an immutable, cheaply clonable handle around one of
//! several backends. Derived matroids (truncations, duals, free extensions,
//! simplifications) wrap the oracle of the matroid they came from instead of
//! materializing a rank table, so they stay usable for ground sets well past
//! the size where `2^(n+1)` tables get unpleasant.

mod json;
mod memo;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg;
use crate::subset::{subsets_of_size, SubsetMask, MAX_N};

pub use json::{Entry, MatroidSpec, NamedMatroid};
use memo::RankMemo;

/// A closed set together with its rank.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Flat {
    pub mask: SubsetMask,
    pub rank: usize,
}

/// Coordinates of the vectors of a linear matroid.
#[derive(Clone, Debug)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

#[derive(Clone, Debug)]
enum LinearColumns {
    Rational(Vec<Vec<BigRational>>),
    Prime { p: u64, cols: Vec<Vec<u64>> },
}

#[derive(Debug)]
enum Backend {
    Uniform { rank: usize },
    Free,
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Linear(LinearColumns),
    Bases(Vec<SubsetMask>),
    RankTable(Vec<u8>),
    Truncation { inner: Matroid, cap: usize },
    Dual { inner: Matroid },
    FreeExtension { inner: Matroid },
    /// `elements[i]` is the element of `inner` playing the role of `i`.
    Restriction { inner: Matroid, elements: Vec<usize> },
}

struct Inner {
    size: usize,
    backend: Backend,
    memo: Option<RankMemo>,
}

/// A matroid on `{0, ..., size - 1}`.
#[derive(Clone)]
pub struct Matroid(Arc<Inner>);

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("size", &self.0.size)
            .field("backend", &self.0.backend)
            .finish()
    }
}

/// Result of [`Matroid::simplify`].
#[derive(Clone, Debug)]
pub struct Simplification {
    pub matroid: Matroid,
    /// `mapping[old] = Some(new)` for survivors, `None` for loops and for
    /// non-representative parallel elements.
    pub mapping: Vec<Option<usize>>,
    pub loops: Vec<usize>,
    /// Parallel classes of size at least two, as old labels.
    pub parallel_classes: Vec<Vec<usize>>,
}

impl Simplification {
    pub fn changed(&self) -> bool {
        self.mapping.iter().any(Option::is_none)
    }
}

fn check_size(size: usize) -> Result<()> {
    if size > MAX_N + 1 {
        return Err(Error::GroundSetTooLarge(size));
    }
    Ok(())
}

impl Matroid {
    fn build(size: usize, backend: Backend) -> Self {
        let memo = match backend {
            Backend::Uniform { .. } | Backend::Free | Backend::RankTable(_) => None,
            Backend::Truncation { .. } => None,
            _ => Some(RankMemo::new(size)),
        };
        Matroid(Arc::new(Inner {
            size,
            backend,
            memo,
        }))
    }

    /// The uniform matroid `U_{rank,size}`.
    pub fn uniform(rank: usize, size: usize) -> Result<Self> {
        check_size(size)?;
        if rank > size {
            return Err(Error::OutOfRange {
                what: "uniform rank",
                value: rank,
                max: size,
            });
        }
        Ok(Self::build(size, Backend::Uniform { rank }))
    }

    /// The free matroid, in which every subset is independent.
    pub fn free(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(Self::build(size, Backend::Free))
    }

    /// The cycle matroid of a multigraph; edge `i` is element `i`.
    /// Parallel edges and loops are allowed.
    pub fn graphic(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        check_size(edges.len())?;
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::Schema(format!(
                "edge ({u},{v}) references a vertex outside 0..{vertices}"
            )));
        }
        Ok(Self::build(edges.len(), Backend::Graphic { vertices, edges }))
    }

    /// Column matroid of a rational matrix given by rows.
    pub fn linear_rational(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let cols = transpose(rows)?;
        check_size(cols.len())?;
        Ok(Self::build(
            cols.len(),
            Backend::Linear(LinearColumns::Rational(cols)),
        ))
    }

    /// Column matroid of an integer matrix, rows given, reduced mod `p`.
    pub fn linear_mod_p(p: u64, rows: Vec<Vec<i64>>) -> Result<Self> {
        if !(linalg::is_prime(p) && p < 1 << 31) {
            return Err(Error::NotPrime(p));
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.rem_euclid(p as i64) as u64).collect())
            .collect();
        let cols = transpose(rows)?;
        check_size(cols.len())?;
        Ok(Self::build(
            cols.len(),
            Backend::Linear(LinearColumns::Prime { p, cols }),
        ))
    }

    /// Matroid given by its list of bases (as masks over `size` elements).
    pub fn from_bases(size: usize, bases: Vec<SubsetMask>) -> Result<Self> {
        check_size(size)?;
        let Some(first) = bases.first() else {
            return Err(Error::Schema("a matroid needs at least one basis".into()));
        };
        let rank = first.len();
        if let Some(b) = bases.iter().find(|b| !b.fits(size)) {
            return Err(Error::InvalidSubset { mask: *b, size });
        }
        if bases.iter().any(|b| b.len() != rank) {
            return Err(Error::Schema("bases have different cardinalities".into()));
        }
        let set: HashSet<SubsetMask> = bases.iter().copied().collect();
        for &b1 in &set {
            for &b2 in &set {
                for x in b1.difference(b2).iter() {
                    let ok = b2
                        .difference(b1)
                        .iter()
                        .any(|y| set.contains(&b1.remove(x).insert(y)));
                    if !ok {
                        return Err(Error::Schema(format!(
                            "basis exchange fails for {b1} and {b2} at element {x}"
                        )));
                    }
                }
            }
        }
        let mut bases: Vec<_> = set.into_iter().collect();
        bases.sort();
        Ok(Self::build(size, Backend::Bases(bases)))
    }

    /// Matroid given by an explicit rank for every subset, indexed by mask.
    /// The table is checked against the rank axioms.
    pub fn from_rank_table(size: usize, ranks: Vec<u8>) -> Result<Self> {
        check_size(size)?;
        if size > 20 {
            return Err(Error::Schema("rank tables are limited to 20 elements".into()));
        }
        if ranks.len() != 1 << size {
            return Err(Error::Schema(format!(
                "rank table has {} entries, expected {}",
                ranks.len(),
                1u64 << size
            )));
        }
        validate_rank_table(size, &ranks)?;
        Ok(Self::build(size, Backend::RankTable(ranks)))
    }

    /// Number of elements `n + 1`.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// The largest element index `n`. Zero for the empty ground set.
    pub fn n(&self) -> usize {
        self.0.size.saturating_sub(1)
    }

    pub fn ground(&self) -> SubsetMask {
        SubsetMask::full(self.0.size)
    }

    /// Rank of `s`, which must lie in the ground set.
    pub fn rank(&self, s: SubsetMask) -> usize {
        assert!(s.fits(self.size()), "{s} outside ground set of {}", self.size());
        if let Some(m) = &self.0.memo {
            if let Some(r) = m.get(s) {
                return r;
            }
            let r = self.compute_rank(s);
            m.put(s, r);
            r
        } else {
            self.compute_rank(s)
        }
    }

    pub fn try_rank(&self, s: SubsetMask) -> Result<usize> {
        if !s.fits(self.size()) {
            return Err(Error::InvalidSubset {
                mask: s,
                size: self.size(),
            });
        }
        Ok(self.rank(s))
    }

    /// Rank of the whole ground set (`r + 1` for a rank `r + 1` matroid).
    pub fn full_rank(&self) -> usize {
        self.rank(self.ground())
    }

    fn compute_rank(&self, s: SubsetMask) -> usize {
        match &self.0.backend {
            Backend::Uniform { rank } => s.len().min(*rank),
            Backend::Free => s.len(),
            Backend::Graphic { vertices, edges } => graphic_rank(*vertices, edges, s),
            Backend::Linear(LinearColumns::Rational(cols)) => {
                let rows: Vec<_> = s.iter().map(|i| cols[i].clone()).collect();
                linalg::rank_rational(&rows)
            }
            Backend::Linear(LinearColumns::Prime { p, cols }) => {
                let rows: Vec<_> = s.iter().map(|i| cols[i].clone()).collect();
                linalg::rank_mod_p(&rows, *p)
            }
            Backend::Bases(bases) => bases
                .iter()
                .map(|b| b.intersection(s).len())
                .max()
                .unwrap_or(0),
            Backend::RankTable(t) => t[s.bits() as usize] as usize,
            Backend::Truncation { inner, cap } => inner.rank(s).min(*cap),
            Backend::Dual { inner } => {
                let e = inner.ground();
                s.len() + inner.rank(e.difference(s)) - inner.rank(e)
            }
            Backend::FreeExtension { inner } => {
                let old = s.intersection(inner.ground());
                let r = inner.rank(old);
                if s.contains(inner.size()) && r < inner.full_rank() {
                    r + 1
                } else {
                    r
                }
            }
            Backend::Restriction { inner, elements } => {
                inner.rank(SubsetMask::from_elements(s.iter().map(|i| elements[i])))
            }
        }
    }

    pub fn is_independent(&self, s: SubsetMask) -> bool {
        self.rank(s) == s.len()
    }

    /// Smallest flat containing `s`.
    pub fn closure(&self, s: SubsetMask) -> Flat {
        let r = self.rank(s);
        let mut mask = s;
        for x in self.ground().difference(s).iter() {
            if self.rank(s.insert(x)) == r {
                mask = mask.insert(x);
            }
        }
        Flat { mask, rank: r }
    }

    pub fn is_flat(&self, s: SubsetMask) -> bool {
        self.closure(s).mask == s
    }

    /// All flats stratified by rank, each stratum sorted by mask.
    ///
    /// Built upward from `closure(∅)`: the flats of rank `k + 1` are the
    /// distinct closures of `F ∪ {x}` for rank-`k` flats `F` and `x ∉ F`.
    pub fn flats_by_rank(&self) -> Vec<Vec<Flat>> {
        let mut strata = vec![vec![self.closure(SubsetMask::EMPTY)]];
        let top = self.ground();
        while strata.last().unwrap().iter().all(|f| f.mask != top) {
            let mut next: Vec<Flat> = Vec::new();
            let mut seen = HashSet::new();
            for f in strata.last().unwrap() {
                let mut rest = top.difference(f.mask);
                while let Some(x) = rest.min() {
                    let g = self.closure(f.mask.insert(x));
                    rest = rest.difference(g.mask);
                    if seen.insert(g.mask) {
                        next.push(g);
                    }
                }
            }
            next.sort();
            strata.push(next);
        }
        strata
    }

    /// Flats of rank `k`, sorted by mask.
    pub fn flats_of_rank(&self, k: usize) -> Result<Vec<Flat>> {
        let top = self.full_rank();
        if k > top {
            return Err(Error::OutOfRange {
                what: "flat rank",
                value: k,
                max: top,
            });
        }
        Ok(self.flats_by_rank().swap_remove(k))
    }

    pub fn loops(&self) -> SubsetMask {
        self.closure(SubsetMask::EMPTY).mask
    }

    pub fn is_simple(&self) -> bool {
        self.loops().is_empty()
            && (0..self.size()).all(|x| {
                (x + 1..self.size()).all(|y| self.rank(SubsetMask::from_elements([x, y])) == 2)
            })
    }

    /// The associated simple matroid: loops deleted, each parallel class
    /// collapsed to its smallest element, survivors relabeled in increasing
    /// order.
    pub fn simplify(&self) -> Simplification {
        let loops = self.loops();
        let mut mapping = vec![None; self.size()];
        let mut survivors = Vec::new();
        let mut parallel_classes = Vec::new();
        let mut assigned = loops;
        for x in 0..self.size() {
            if assigned.contains(x) {
                continue;
            }
            // parallel class of x = closure({x}) minus loops
            let class = self.closure(SubsetMask::singleton(x)).mask.difference(loops);
            assigned = assigned.union(class);
            if class.len() > 1 {
                parallel_classes.push(class.iter().collect());
            }
            mapping[x] = Some(survivors.len());
            survivors.push(x);
        }
        let matroid = if survivors.len() == self.size() {
            self.clone()
        } else {
            Self::build(
                survivors.len(),
                Backend::Restriction {
                    inner: self.clone(),
                    elements: survivors,
                },
            )
        };
        Simplification {
            matroid,
            mapping,
            loops: loops.iter().collect(),
            parallel_classes,
        }
    }

    /// Truncation to rank `k + 1`: `r_k(I) = min(r(I), k + 1)`.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        let full = self.full_rank();
        if full == 0 || k + 1 > full {
            return Err(Error::OutOfRange {
                what: "truncation level",
                value: k,
                max: full.saturating_sub(1),
            });
        }
        if k + 1 == full {
            return Ok(self.clone());
        }
        // collapse nested truncations onto the original oracle
        let base = match &self.0.backend {
            Backend::Truncation { inner, .. } => inner.clone(),
            _ => self.clone(),
        };
        Ok(Self::build(
            self.size(),
            Backend::Truncation {
                inner: base,
                cap: k + 1,
            },
        ))
    }

    /// The dual matroid, `r*(S) = |S| + r(E \ S) - r(E)`.
    pub fn dual(&self) -> Self {
        if let Backend::Dual { inner } = &self.0.backend {
            return inner.clone();
        }
        Self::build(
            self.size(),
            Backend::Dual {
                inner: self.clone(),
            },
        )
    }

    /// Adds a new element `size()` in general position.
    pub fn free_extension(&self) -> Result<Self> {
        check_size(self.size() + 1)?;
        Ok(Self::build(
            self.size() + 1,
            Backend::FreeExtension {
                inner: self.clone(),
            },
        ))
    }

    /// Dual of the free extension of the dual.
    pub fn free_coextension(&self) -> Result<Self> {
        Ok(self.dual().free_extension()?.dual())
    }

    /// `f_i` = number of independent sets of size `i`, for `i = 0..=rank`.
    pub fn independent_set_counts(&self) -> Vec<u64> {
        let r = self.full_rank();
        let mut f = vec![0u64; r + 1];
        self.count_independent(SubsetMask::EMPTY, 0, &mut f);
        f
    }

    // extends independent sets by elements larger than their maximum, so
    // only independent sets are visited
    fn count_independent(&self, s: SubsetMask, from: usize, f: &mut [u64]) {
        f[s.len()] += 1;
        for x in from..self.size() {
            let t = s.insert(x);
            if self.rank(t) == t.len() {
                self.count_independent(t, x + 1, f);
            }
        }
    }

    /// Compares rank functions on every subset.
    pub fn same_rank_function(&self, other: &Matroid) -> bool {
        self.size() == other.size()
            && (0..=self.size())
                .flat_map(|k| subsets_of_size(self.size(), k))
                .all(|s| self.rank(s) == other.rank(s))
    }

    /// Materializes the rank function as a table indexed by mask.
    pub fn rank_table(&self) -> Result<Vec<u8>> {
        if self.size() > 20 {
            return Err(Error::OutOfRange {
                what: "rank table size",
                value: self.size(),
                max: 20,
            });
        }
        Ok((0..1u32 << self.size())
            .map(|m| self.rank(SubsetMask(m)) as u8)
            .collect())
    }
}

fn transpose<T: Clone>(rows: Vec<Vec<T>>) -> Result<Vec<Vec<T>>> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Schema("matrix rows have different lengths".into()));
    }
    Ok((0..width)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect())
}

fn graphic_rank(vertices: usize, edges: &[(usize, usize)], s: SubsetMask) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut rank = 0;
    for i in s.iter() {
        let (u, v) = edges[i];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            rank += 1;
        }
    }
    rank
}

fn validate_rank_table(size: usize, t: &[u8]) -> Result<()> {
    if t[0] != 0 {
        return Err(Error::RankAxiom {
            reason: "rank of the empty set is not zero",
            s: SubsetMask::EMPTY,
            t: SubsetMask::EMPTY,
        });
    }
    for m in 0..1u32 << size {
        let s = SubsetMask(m);
        let rs = t[m as usize];
        for x in s.complement(size).iter() {
            let sx = t[s.insert(x).bits() as usize];
            if sx < rs || sx > rs + 1 {
                return Err(Error::RankAxiom {
                    reason: "adding one element must raise the rank by 0 or 1",
                    s,
                    t: SubsetMask::singleton(x),
                });
            }
            for y in s.complement(size).iter().filter(|&y| y > x) {
                let sy = t[s.insert(y).bits() as usize];
                let sxy = t[s.insert(x).insert(y).bits() as usize];
                if sxy as u16 + rs as u16 > sx as u16 + sy as u16 {
                    return Err(Error::RankAxiom {
                        reason: "submodularity fails",
                        s,
                        t: SubsetMask::from_elements([x, y]),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Standard 3x7 matrix of the Fano plane over GF(2): columns are the
/// nonzero vectors of `GF(2)^3`.
pub fn fano_matrix() -> Vec<Vec<i64>> {
    vec![
        vec![1, 0, 0, 1, 1, 0, 1],
        vec![0, 1, 0, 1, 0, 1, 1],
        vec![0, 0, 1, 0, 1, 1, 1],
    ]
}

/// Edge list of the complete graph `K_m`, lexicographic.
pub fn complete_graph_edges(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|u| (u + 1..m).map(move |v| (u, v)))
        .collect()
}

pub(crate) fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Matroid {
        Matroid::graphic(4, complete_graph_edges(4)).unwrap()
    }

    fn fano() -> Matroid {
        Matroid::linear_mod_p(2, fano_matrix()).unwrap()
    }

    // spanning-forest oracle independent of the union-find in graphic_rank
    fn forest_rank(vertices: usize, edges: &[(usize, usize)], s: SubsetMask) -> usize {
        let mut comp: Vec<usize> = (0..vertices).collect();
        let mut r = 0;
        for i in s.iter() {
            let (a, b) = (comp[edges[i].0], comp[edges[i].1]);
            if a != b {
                r += 1;
                for c in comp.iter_mut() {
                    if *c == a {
                        *c = b;
                    }
                }
            }
        }
        r
    }

    #[test]
    fn rank_examples() {
        let u = Matroid::uniform(2, 3).unwrap();
        assert_eq!(u.rank(SubsetMask::from_elements([0, 1])), 2);
        // edges (0,1),(0,2),(1,2) of K4 form a triangle
        let tri = SubsetMask::from_elements([0, 1, 3]);
        assert_eq!(k4().rank(tri), 2);
        assert_eq!(forest_rank(4, &complete_graph_edges(4), tri), 2);
        // columns 0,1,3 = e1, e2, e1+e2: a line of the Fano plane
        assert_eq!(fano().rank(SubsetMask::from_elements([0, 1, 3])), 2);
        assert_eq!(fano().full_rank(), 3);
    }

    #[test]
    fn graphic_rank_matches_forest_oracle() {
        let edges = vec![(0, 1), (1, 2), (0, 2), (2, 3), (3, 0), (1, 1), (0, 1)];
        let m = Matroid::graphic(4, edges.clone()).unwrap();
        for s in 0..1u32 << edges.len() {
            let s = SubsetMask(s);
            assert_eq!(m.rank(s), forest_rank(4, &edges, s));
        }
    }

    #[test]
    fn closure_examples() {
        let f4 = Matroid::free(4).unwrap();
        let s = SubsetMask::from_elements([1, 3]);
        assert_eq!(f4.closure(s).mask, s);
        let u = Matroid::uniform(2, 3).unwrap();
        assert_eq!(u.closure(SubsetMask::from_elements([0, 1])).mask, u.ground());
        assert_eq!(
            k4().closure(SubsetMask::from_elements([0, 1])).mask,
            SubsetMask::from_elements([0, 1, 3])
        );
    }

    #[test]
    fn flats_examples() {
        let u = Matroid::uniform(2, 3).unwrap();
        let f1: Vec<_> = u.flats_of_rank(1).unwrap().iter().map(|f| f.mask).collect();
        assert_eq!(
            f1,
            vec![
                SubsetMask::singleton(0),
                SubsetMask::singleton(1),
                SubsetMask::singleton(2)
            ]
        );
        let lines = fano().flats_of_rank(2).unwrap();
        assert_eq!(lines.len(), 7);
        assert!(lines.iter().all(|l| l.mask.len() == 3));
        let top = fano().flats_of_rank(3).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].mask, fano().ground());
        assert!(fano().flats_of_rank(4).is_err());
    }

    #[test]
    fn flats_match_exhaustive_closure() {
        for m in [k4(), fano(), Matroid::uniform(3, 6).unwrap()] {
            let mut expected: Vec<Flat> = (0..1u32 << m.size())
                .map(|s| m.closure(SubsetMask(s)))
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            expected.sort_by_key(|f| (f.rank, f.mask));
            let got: Vec<Flat> = m.flats_by_rank().into_iter().flatten().collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn simplify_examples() {
        let s = k4().simplify();
        assert!(!s.changed());
        assert_eq!(s.matroid.size(), 6);

        // triangle with edge (0,1) doubled
        let g = Matroid::graphic(3, vec![(0, 1), (1, 2), (0, 2), (0, 1)]).unwrap();
        let s = g.simplify();
        assert_eq!(s.matroid.size(), 3);
        assert!(s.matroid.is_simple());
        assert_eq!(s.mapping, vec![Some(0), Some(1), Some(2), None]);
        assert_eq!(s.parallel_classes, vec![vec![0, 3]]);
        let tri = Matroid::graphic(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(s.matroid.same_rank_function(&tri));

        let looped = Matroid::graphic(3, vec![(0, 1), (2, 2), (1, 2)]).unwrap();
        let s = looped.simplify();
        assert_eq!(s.matroid.size(), 2);
        assert_eq!(s.loops, vec![1]);
        assert_eq!(s.mapping, vec![Some(0), None, Some(1)]);
    }

    #[test]
    fn truncation_examples() {
        let m = fano();
        assert!(m.truncate(2).unwrap().same_rank_function(&m));
        let t = Matroid::free(3).unwrap().truncate(1).unwrap();
        assert!(t.same_rank_function(&Matroid::uniform(2, 3).unwrap()));
        assert!(m.truncate(3).is_err());

        let t1 = m.truncate(1).unwrap();
        let strata = t1.flats_by_rank();
        let orig = m.flats_by_rank();
        assert_eq!(strata.len(), 3);
        assert_eq!(strata[0], orig[0]);
        assert_eq!(strata[1], orig[1]);
        assert_eq!(strata[2].len(), 1);
        assert_eq!(strata[2][0].mask, m.ground());

        let k = k4();
        let tt = k.truncate(1).unwrap().truncate(0).unwrap();
        assert!(tt.same_rank_function(&k.truncate(0).unwrap()));
    }

    #[test]
    fn duality_and_free_coextension() {
        let k = k4();
        assert!(k.dual().dual().same_rank_function(&k));
        let d = Matroid::graphic(4, complete_graph_edges(4)).unwrap().dual();
        assert_eq!(d.full_rank(), 3);
        let c = k.free_coextension().unwrap();
        assert_eq!(c.size(), 7);
        assert_eq!(c.full_rank(), 4);
        let e = k.free_extension().unwrap();
        assert_eq!(e.full_rank(), 3);
        assert_eq!(e.rank(SubsetMask::from_elements([6])), 1);
        assert_eq!(e.rank(SubsetMask::from_elements([0, 1, 6])), 3);
        assert_eq!(e.rank(SubsetMask::from_elements([0, 1, 3, 6])), 3);
    }

    #[test]
    fn independent_counts() {
        assert_eq!(
            Matroid::uniform(2, 3).unwrap().independent_set_counts(),
            vec![1, 3, 3]
        );
        // exhaustive oracle over all 2^6 subsets
        let k = k4();
        let mut f = vec![0u64; 4];
        for s in 0..64u32 {
            let s = SubsetMask(s);
            if k.rank(s) == s.len() {
                f[s.len()] += 1;
            }
        }
        assert_eq!(f, vec![1, 6, 15, 16]);
        assert_eq!(k.independent_set_counts(), f);
    }

    #[test]
    fn bases_and_rank_table_backends() {
        let bases: Vec<_> = subsets_of_size(4, 2).collect();
        let u = Matroid::from_bases(4, bases).unwrap();
        assert!(u.same_rank_function(&Matroid::uniform(2, 4).unwrap()));

        let bad = Matroid::from_bases(
            4,
            vec![SubsetMask::from_elements([0, 1]), SubsetMask::from_elements([2, 3])],
        );
        assert!(bad.is_err());

        let table = k4().rank_table().unwrap();
        let t = Matroid::from_rank_table(6, table).unwrap();
        assert!(t.same_rank_function(&k4()));

        let mut broken = Matroid::uniform(2, 3).unwrap().rank_table().unwrap();
        broken[0b111] = 1;
        match Matroid::from_rank_table(3, broken) {
            Err(Error::RankAxiom { .. }) => {}
            other => panic!("expected a rank axiom error, got {other:?}"),
        }
    }

    #[test]
    fn linear_rational_backend() {
        // non-Fano: Fano vectors over Q, where e1+e2+e3 is independent of
        // the three "diagonal" points
        let rows = fano_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(big).collect())
            .collect();
        let m = Matroid::linear_rational(rows).unwrap();
        assert_eq!(m.full_rank(), 3);
        assert_eq!(m.flats_of_rank(2).unwrap().iter().filter(|f| f.mask.len() == 3).count(), 6);
        assert!(Matroid::linear_mod_p(4, fano_matrix()).is_err());
    }
}
