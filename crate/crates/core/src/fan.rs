//! Flag cones of the fine permutohedral fan and Minkowski weights on them.
//!
//! The lattice is `N = Z^E / <e_0 + ... + e_n>` with coordinates chosen so
//! that `e_1, ..., e_n` are the unit vectors and `e_0 = (-1, ..., -1)`.
//! A cone is stored as its flag `I_1 ⊊ ... ⊊ I_k` of proper nonempty
//! subsets; its rays are the incidence vectors `e_{I_j}`. Geometry is only
//! derived when a computation needs coordinates.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charpoly::FlatLattice;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matroid::Matroid;
use crate::subset::SubsetMask;

/// A point of `N` in the coordinates described in the module docs.
pub type LatticePoint = Vec<i64>;

/// `e_I = Σ_{i ∈ I} e_i` for a proper nonempty `I` of a ground set with
/// `size = n + 1` elements.
pub fn incidence_vector(i: SubsetMask, size: usize) -> Result<LatticePoint> {
    if i.is_empty() || !i.fits(size) || i == SubsetMask::full(size) {
        return Err(Error::ImproperSubset(i));
    }
    Ok(ray(i, size))
}

/// `e_I` without validation; `e_∅ = e_E = 0`.
pub(crate) fn ray(i: SubsetMask, size: usize) -> LatticePoint {
    let shift = if i.contains(0) { -1 } else { 0 };
    (1..size)
        .map(|j| shift + i64::from(i.contains(j)))
        .collect()
}

/// A cone of the fine permutohedral fan, keyed by its flag.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlagCone {
    flag: Vec<SubsetMask>,
}

impl FlagCone {
    /// The zero cone.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Validates strict inclusions and properness within `size` elements.
    pub fn new(flag: Vec<SubsetMask>, size: usize) -> Result<Self> {
        let full = SubsetMask::full(size);
        for (j, s) in flag.iter().enumerate() {
            if s.is_empty() || *s == full || !s.fits(size) {
                return Err(Error::ImproperSubset(*s));
            }
            if j > 0 && !(flag[j - 1].is_subset(*s) && flag[j - 1] != *s) {
                return Err(Error::Schema(format!(
                    "flag is not strictly increasing at position {j}"
                )));
            }
        }
        Ok(Self { flag })
    }

    pub(crate) fn from_sorted(flag: Vec<SubsetMask>) -> Self {
        Self { flag }
    }

    pub fn flag(&self) -> &[SubsetMask] {
        &self.flag
    }

    pub fn dim(&self) -> usize {
        self.flag.len()
    }

    /// Ray generators `e_{I_1}, ..., e_{I_k}`.
    pub fn rays(&self, size: usize) -> Vec<LatticePoint> {
        self.flag.iter().map(|&s| ray(s, size)).collect()
    }

    /// Facets: the flag with one member removed. The removed subset comes
    /// along, since it is the inserted subset from the facet's viewpoint.
    pub fn facets(&self) -> impl Iterator<Item = (FlagCone, SubsetMask)> + '_ {
        (0..self.flag.len()).map(move |j| {
            let mut f = self.flag.clone();
            let removed = f.remove(j);
            (FlagCone { flag: f }, removed)
        })
    }

    /// Image under `x -> -x`: `I_1 ⊊ ... ⊊ I_k` becomes
    /// `E∖I_k ⊊ ... ⊊ E∖I_1`.
    pub fn negated(&self, size: usize) -> FlagCone {
        FlagCone {
            flag: self.flag.iter().rev().map(|s| s.complement(size)).collect(),
        }
    }

    /// True when the rays extend to a basis of `N`.
    pub fn is_unimodular(&self, size: usize) -> bool {
        let m: Vec<_> = self.rays(size).iter().map(|r| linalg::int_row(r)).collect();
        linalg::extends_to_basis(&m)
    }

    pub fn masks(&self) -> Vec<u32> {
        self.flag.iter().map(|s| s.bits()).collect()
    }
}

/// An integer weight on the cones of one dimension of the permutohedral
/// fan of `{0, ..., n}`. Zero weights are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinkowskiWeight {
    size: usize,
    codim: usize,
    weights: BTreeMap<FlagCone, BigInt>,
}

impl MinkowskiWeight {
    pub fn new(size: usize, codim: usize) -> Self {
        assert!(size >= 1 && codim < size, "codim {codim} out of range for {size} elements");
        Self {
            size,
            codim,
            weights: BTreeMap::new(),
        }
    }

    pub fn from_cones<I>(size: usize, codim: usize, cones: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FlagCone, BigInt)>,
    {
        let mut w = Self::new(size, codim);
        for (c, v) in cones {
            if c.dim() != w.cone_dim() {
                return Err(Error::Dimension(format!(
                    "cone of dimension {} in a weight on {}-dimensional cones",
                    c.dim(),
                    w.cone_dim()
                )));
            }
            w.add(c, v);
        }
        Ok(w)
    }

    /// Ground-set size `n + 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.size - 1
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn cone_dim(&self) -> usize {
        self.ambient_dim() - self.codim
    }

    pub fn get(&self, c: &FlagCone) -> BigInt {
        self.weights.get(c).cloned().unwrap_or_default()
    }

    pub fn add(&mut self, c: FlagCone, v: BigInt) {
        if v.is_zero() {
            return;
        }
        match self.weights.entry(c) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Supported cones with their weights, in flag order.
    pub fn support(&self) -> impl Iterator<Item = (&FlagCone, &BigInt)> {
        self.weights.iter()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    /// Value on the zero cone; meaningful when `codim == n`.
    pub fn degree(&self) -> BigInt {
        self.get(&FlagCone::zero())
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        let mut out = Self::new(self.size, self.codim);
        for (c, v) in &self.weights {
            out.add(c.clone(), v * k);
        }
        out
    }

    /// Groups the supported cones by facet: for each facet `τ`, the list
    /// of `(inserted subset, weight)` over supported cones containing it.
    pub(crate) fn stars(&self) -> BTreeMap<FlagCone, Vec<(SubsetMask, BigInt)>> {
        let mut out: BTreeMap<FlagCone, Vec<(SubsetMask, BigInt)>> = BTreeMap::new();
        for (sigma, c) in &self.weights {
            for (tau, inserted) in sigma.facets() {
                out.entry(tau).or_default().push((inserted, c.clone()));
            }
        }
        out
    }
}

/// A failure of the balancing condition at the cone `tau`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancingViolation {
    pub tau: FlagCone,
    /// `Σ c(σ) u_{σ/τ}`, which should lie in the lattice span of `τ`.
    pub residual: LatticePoint,
}

/// `Σ_{σ ⊃ τ} c(σ) e_F` over the star of `tau`, in `N` coordinates.
pub(crate) fn star_sum(star: &[(SubsetMask, BigInt)], size: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); size - 1];
    for (f, c) in star {
        for (x, r) in s.iter_mut().zip(ray(*f, size)) {
            *x += c * r;
        }
    }
    s
}

/// Integer coordinates of `x` in the rays of `tau`, if `x` lies in their
/// lattice span.
pub(crate) fn coordinates_in_cone(tau: &FlagCone, x: &[BigInt], size: usize) -> Option<Vec<BigInt>> {
    let gens: Vec<_> = tau.rays(size).iter().map(|r| linalg::int_row(r)).collect();
    linalg::integer_coordinates(&gens, x)
}

/// Checks the balancing condition at every codimension-one face of the
/// support, using `u_{σ/τ} = e_F` for the subset `F` that refines `τ` to `σ`.
pub fn check_balancing(w: &MinkowskiWeight) -> Vec<BalancingViolation> {
    let size = w.size();
    let stars: Vec<_> = w.stars().into_iter().collect();
    let mut out: Vec<BalancingViolation> = stars
        .par_iter()
        .filter_map(|(tau, star)| {
            let s = star_sum(star, size);
            match coordinates_in_cone(tau, &s, size) {
                Some(_) => None,
                None => Some(BalancingViolation {
                    tau: tau.clone(),
                    residual: s.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect(),
                }),
            }
        })
        .collect();
    out.sort_by(|a, b| a.tau.cmp(&b.tau));
    out
}

/// Weight one on each complete flag of proper flats of `m`.
///
/// `m` must be loopless so that the bottom flat is empty.
pub fn bergman_weight(m: &Matroid) -> Result<MinkowskiWeight> {
    let lattice = FlatLattice::new(m);
    bergman_weight_of_lattice(&lattice, m.size())
}

pub(crate) fn bergman_weight_of_lattice(
    lattice: &FlatLattice,
    size: usize,
) -> Result<MinkowskiWeight> {
    if !lattice.bottom().mask.is_empty() {
        return Err(Error::HasLoops);
    }
    let height = lattice.height();
    if height == 0 {
        return Err(Error::Dimension("rank-zero matroid has no Bergman fan".into()));
    }
    let r = height - 1;
    let n = size - 1;
    let flats = lattice.flats();
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); flats.len()];
    for i in 0..flats.len() {
        for &j in lattice.lower_covers(i) {
            upper[j].push(i);
        }
    }
    let top = flats.len() - 1;
    let mut w = MinkowskiWeight::new(size, n - r);
    let mut stack = Vec::with_capacity(r);
    fn walk(
        i: usize,
        top: usize,
        flats: &[crate::matroid::Flat],
        upper: &[Vec<usize>],
        stack: &mut Vec<SubsetMask>,
        w: &mut MinkowskiWeight,
    ) {
        for &j in &upper[i] {
            if j == top {
                w.add(FlagCone::from_sorted(stack.clone()), BigInt::from(1));
            } else {
                stack.push(flats[j].mask);
                walk(j, top, flats, upper, stack, w);
                stack.pop();
            }
        }
    }
    if r == 0 {
        w.add(FlagCone::zero(), BigInt::from(1));
    } else {
        walk(0, top, flats, &upper, &mut stack, &mut w);
    }
    Ok(w)
}

/// Weight one on the flags `I_1 ⊊ ... ⊊ I_{n-k}` with `|I_j| = j`, which
/// is the Bergman fan of the free matroid truncated to rank `n - k + 1`.
pub fn permutohedral_weight(n: usize, k: usize) -> Result<MinkowskiWeight> {
    if k > n {
        return Err(Error::OutOfRange {
            what: "codimension",
            value: k,
            max: n,
        });
    }
    let size = n + 1;
    let mut w = MinkowskiWeight::new(size, k);
    let len = n - k;
    let mut stack: Vec<SubsetMask> = Vec::with_capacity(len);
    fn grow(size: usize, len: usize, stack: &mut Vec<SubsetMask>, w: &mut MinkowskiWeight) {
        if stack.len() == len {
            w.add(FlagCone::from_sorted(stack.clone()), BigInt::from(1));
            return;
        }
        let cur = stack.last().copied().unwrap_or_default();
        for x in cur.complement(size).iter() {
            stack.push(cur.insert(x));
            grow(size, len, stack, w);
            stack.pop();
        }
    }
    grow(size, len, &mut stack, &mut w);
    Ok(w)
}

/// Pullback along the Cremona involution: each cone `σ` is replaced by
/// `-σ` with the same weight.
pub fn cremona_pullback_weight(w: &MinkowskiWeight) -> MinkowskiWeight {
    let size = w.size();
    MinkowskiWeight {
        size,
        codim: w.codim(),
        weights: w
            .support()
            .map(|(c, v)| (c.negated(size), v.clone()))
            .collect(),
    }
}

/// The union of the faces of a set of maximal flag cones.
#[derive(Clone, Debug)]
pub struct Fan {
    size: usize,
    maximal: Vec<FlagCone>,
}

impl Fan {
    pub fn from_weight(w: &MinkowskiWeight) -> Self {
        Self {
            size: w.size(),
            maximal: w.support().map(|(c, _)| c.clone()).collect(),
        }
    }

    pub fn maximal(&self) -> &[FlagCone] {
        &self.maximal
    }

    /// Every face of every listed cone (all subflags), sorted.
    pub fn cones(&self) -> Vec<FlagCone> {
        let mut all: Vec<FlagCone> = self
            .maximal
            .iter()
            .flat_map(|c| {
                let k = c.dim();
                (0u32..1 << k).map(move |pick| {
                    FlagCone::from_sorted(
                        (0..k)
                            .filter(|j| pick >> j & 1 == 1)
                            .map(|j| c.flag()[j])
                            .collect(),
                    )
                })
            })
            .collect();
        all.sort();
        all.dedup();
        all
    }

    /// Rays as subsets, sorted.
    pub fn rays(&self) -> Vec<SubsetMask> {
        let mut r: Vec<_> = self.maximal.iter().flat_map(|c| c.flag().to_vec()).collect();
        r.sort();
        r.dedup();
        r
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// JSON form of a weight, `{"n", "codim", "cones": [{"flag", "weight"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightJson {
    pub n: usize,
    pub codim: usize,
    pub cones: Vec<ConeJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeJson {
    pub flag: Vec<u32>,
    pub weight: serde_json::Number,
}

impl MinkowskiWeight {
    pub fn to_json(&self) -> WeightJson {
        WeightJson {
            n: self.ambient_dim(),
            codim: self.codim,
            cones: self
                .support()
                .map(|(c, v)| ConeJson {
                    flag: c.masks(),
                    weight: v
                        .to_i64()
                        .map(serde_json::Number::from)
                        .expect("weights fit in 64 bits"),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &WeightJson) -> Result<Self> {
        let size = j.n + 1;
        let mut cones = Vec::with_capacity(j.cones.len());
        for c in &j.cones {
            let flag = FlagCone::new(c.flag.iter().map(|&m| SubsetMask(m)).collect(), size)?;
            let v = c
                .weight
                .as_i64()
                .ok_or_else(|| Error::Schema(format!("weight {} is not an integer", c.weight)))?;
            cones.push((flag, BigInt::from(v)));
        }
        if j.codim > j.n {
            return Err(Error::OutOfRange {
                what: "codim",
                value: j.codim,
                max: j.n,
            });
        }
        Self::from_cones(size, j.codim, cones)
    }
}

/// Counts supported cones by dimension of their faces; handy in reports.
pub fn face_counts(fan: &Fan) -> Vec<usize> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for c in fan.cones() {
        *counts.entry(c.dim()).or_default() += 1;
    }
    let top = counts.keys().max().copied().unwrap_or(0);
    (0..=top).map(|d| counts.get(&d).copied().unwrap_or(0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{complete_graph_edges, fano_matrix};

    fn s(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    #[test]
    fn incidence_vector_examples() {
        assert_eq!(incidence_vector(s(&[1, 3]), 5).unwrap(), vec![1, 0, 1, 0]);
        assert_eq!(incidence_vector(s(&[0]), 3).unwrap(), vec![-1, -1]);
        assert_eq!(incidence_vector(s(&[0, 2]), 3).unwrap(), vec![-1, 0]);
        assert!(incidence_vector(SubsetMask::EMPTY, 3).is_err());
        assert!(incidence_vector(s(&[0, 1, 2]), 3).is_err());
    }

    #[test]
    fn complements_are_negatives() {
        let size = 5;
        for m in 1..(1u32 << size) - 1 {
            let i = SubsetMask(m);
            let a = incidence_vector(i, size).unwrap();
            let b = incidence_vector(i.complement(size), size).unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| x + y == 0));
        }
    }

    #[test]
    fn flag_cone_validation() {
        assert!(FlagCone::new(vec![s(&[1]), s(&[1, 2])], 3).is_ok());
        assert!(FlagCone::new(vec![s(&[1, 2]), s(&[1])], 3).is_err());
        assert!(FlagCone::new(vec![s(&[1]), s(&[1])], 3).is_err());
        assert!(FlagCone::new(vec![s(&[0, 1, 2])], 3).is_err());
    }

    #[test]
    fn bergman_examples() {
        let free2 = Matroid::free(3).unwrap();
        let w = bergman_weight(&free2).unwrap();
        assert_eq!(w.codim(), 0);
        assert_eq!(w.support_len(), 6);

        let u = Matroid::uniform(2, 3).unwrap();
        let w = bergman_weight(&u).unwrap();
        let cones: Vec<_> = w.support().map(|(c, _)| c.flag().to_vec()).collect();
        assert_eq!(cones, vec![vec![s(&[0])], vec![s(&[1])], vec![s(&[2])]]);
        assert_eq!(w.codim(), 1);

        let fano = Matroid::linear_mod_p(2, fano_matrix()).unwrap();
        assert_eq!(bergman_weight(&fano).unwrap().support_len(), 21);

        let looped = Matroid::graphic(2, vec![(0, 1), (1, 1)]).unwrap();
        assert_eq!(bergman_weight(&looped), Err(Error::HasLoops));
    }

    #[test]
    fn permutohedral_examples() {
        assert_eq!(permutohedral_weight(2, 0).unwrap().support_len(), 6);
        assert_eq!(permutohedral_weight(2, 1).unwrap().support_len(), 3);
        let top = permutohedral_weight(3, 3).unwrap();
        assert_eq!(top.degree(), BigInt::from(1));
        assert_eq!(permutohedral_weight(4, 1).unwrap().support_len(), 60);
        for n in 1..=4 {
            for k in 0..=n {
                let free = Matroid::free(n + 1).unwrap();
                let expected = if k == n {
                    let mut w = MinkowskiWeight::new(n + 1, n);
                    w.add(FlagCone::zero(), BigInt::from(1));
                    w
                } else {
                    bergman_weight(&free.truncate(n - k).unwrap()).unwrap()
                };
                assert_eq!(permutohedral_weight(n, k).unwrap(), expected);
            }
        }
    }

    #[test]
    fn balancing() {
        let k4 = Matroid::graphic(4, complete_graph_edges(4)).unwrap();
        let fano = Matroid::linear_mod_p(2, fano_matrix()).unwrap();
        for m in [k4, fano, Matroid::uniform(3, 5).unwrap()] {
            assert!(check_balancing(&bergman_weight(&m).unwrap()).is_empty());
        }
        for n in 1..=4 {
            for k in 0..=n {
                assert!(check_balancing(&permutohedral_weight(n, k).unwrap()).is_empty());
            }
        }
        let lone = MinkowskiWeight::from_cones(
            3,
            1,
            [(FlagCone::new(vec![s(&[1])], 3).unwrap(), BigInt::from(1))],
        )
        .unwrap();
        let v = check_balancing(&lone);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].tau, FlagCone::zero());
        assert_eq!(v[0].residual, vec![1, 0]);
    }

    #[test]
    fn cremona_examples() {
        // only the complete family is stable under complementation
        let w = permutohedral_weight(3, 0).unwrap();
        assert_eq!(cremona_pullback_weight(&w), w);
        let w1 = permutohedral_weight(3, 1).unwrap();
        let c1 = cremona_pullback_weight(&w1);
        assert_ne!(c1, w1);
        assert!(c1.support().all(|(c, _)| c.flag()[0].len() == 2));
        assert!(check_balancing(&c1).is_empty());
        let u = bergman_weight(&Matroid::uniform(2, 3).unwrap()).unwrap();
        let c = cremona_pullback_weight(&u);
        let cones: Vec<_> = c.support().map(|(c, _)| c.flag().to_vec()).collect();
        assert_eq!(cones, vec![vec![s(&[0, 1])], vec![s(&[0, 2])], vec![s(&[1, 2])]]);
        assert_eq!(cremona_pullback_weight(&c), u);
        assert!(check_balancing(&c).is_empty());
    }

    #[test]
    fn unimodular_cones() {
        let fano = Matroid::linear_mod_p(2, fano_matrix()).unwrap();
        let w = bergman_weight(&fano).unwrap();
        assert!(w.support().all(|(c, _)| c.is_unimodular(7)));
        assert!(permutohedral_weight(3, 0).unwrap().support().all(|(c, _)| c.is_unimodular(4)));
    }

    #[test]
    fn fan_faces() {
        let w = bergman_weight(&Matroid::uniform(2, 3).unwrap()).unwrap();
        let fan = Fan::from_weight(&w);
        assert_eq!(fan.cones().len(), 4);
        assert_eq!(face_counts(&fan), vec![1, 3]);
        assert_eq!(fan.rays().len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let w = bergman_weight(&Matroid::uniform(3, 4).unwrap()).unwrap();
        let j = w.to_json();
        assert_eq!(j.n, 3);
        assert_eq!(j.codim, 1);
        assert_eq!(MinkowskiWeight::from_json(&j).unwrap(), w);
    }
}
