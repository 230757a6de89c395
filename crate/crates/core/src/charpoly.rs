//! Lattice of flats, its Möbius function, and the characteristic
//! polynomial together with the descending-flag count of its reduced
//! coefficients.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::{Flat, Matroid};
use crate::poly::IntPolynomial;
use crate::subset::SubsetMask;

/// Flats of a matroid graded by rank, with the covering relation.
#[derive(Clone, Debug)]
pub struct FlatLattice {
    /// All flats ordered by `(rank, mask)`.
    flats: Vec<Flat>,
    /// `offsets[k]..offsets[k + 1]` indexes the rank-`k` flats.
    offsets: Vec<usize>,
    /// `lower_covers[i]`: indices of the flats covered by flat `i`.
    lower_covers: Vec<Vec<usize>>,
    index: HashMap<SubsetMask, usize>,
}

impl FlatLattice {
    pub fn new(m: &Matroid) -> Self {
        let strata = m.flats_by_rank();
        let mut offsets = vec![0];
        let mut flats = Vec::new();
        for s in &strata {
            flats.extend_from_slice(s);
            offsets.push(flats.len());
        }
        let index: HashMap<_, _> = flats.iter().enumerate().map(|(i, f)| (f.mask, i)).collect();
        let mut lower_covers = vec![Vec::new(); flats.len()];
        for k in 1..strata.len() {
            for i in offsets[k]..offsets[k + 1] {
                lower_covers[i] = (offsets[k - 1]..offsets[k])
                    .filter(|&j| flats[j].mask.is_subset(flats[i].mask))
                    .collect();
            }
        }
        Self {
            flats,
            offsets,
            lower_covers,
            index,
        }
    }

    /// Rank of the top flat.
    pub fn height(&self) -> usize {
        self.offsets.len() - 2
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn stratum(&self, k: usize) -> &[Flat] {
        &self.flats[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn stratum_sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn bottom(&self) -> Flat {
        self.flats[0]
    }

    pub fn top(&self) -> Flat {
        *self.flats.last().unwrap()
    }

    pub fn index_of(&self, mask: SubsetMask) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower_covers[i]
    }

    /// Number of covering pairs.
    pub fn edge_count(&self) -> usize {
        self.lower_covers.iter().map(Vec::len).sum()
    }
}

/// Values `μ(0̂, F)` aligned with [`FlatLattice::flats`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    pub values: Vec<BigInt>,
}

impl MobiusTable {
    pub fn get(&self, lattice: &FlatLattice, mask: SubsetMask) -> Option<&BigInt> {
        lattice.index_of(mask).map(|i| &self.values[i])
    }
}

/// Möbius function from its defining recursion
/// `μ(0̂, F) = -Σ_{G < F} μ(0̂, G)`.
pub fn mobius(lattice: &FlatLattice) -> MobiusTable {
    let flats = lattice.flats();
    let mut values: Vec<BigInt> = Vec::with_capacity(flats.len());
    values.push(BigInt::one());
    for (i, f) in flats.iter().enumerate().skip(1) {
        let below = lattice.offsets[f.rank];
        let sum: BigInt = (0..below)
            .filter(|&j| flats[j].mask.is_subset(f.mask))
            .map(|j| &values[j])
            .sum();
        debug_assert_eq!(values.len(), i);
        values.push(-sum);
    }
    MobiusTable { values }
}

/// Möbius function from Weisner's recursion: for an atom `a ≤ F`,
/// `μ(0̂, F) = -Σ μ(0̂, G)` over flats `G ⋖ F` with `a ∉ G`.
pub fn mobius_weisner(lattice: &FlatLattice) -> MobiusTable {
    let flats = lattice.flats();
    let bottom = lattice.bottom().mask;
    let mut values = vec![BigInt::zero(); flats.len()];
    values[0] = BigInt::one();
    for i in 1..flats.len() {
        let a = flats[i].mask.difference(bottom).min().expect("flat above bottom");
        let sum: BigInt = lattice.lower_covers[i]
            .iter()
            .filter(|&&j| !flats[j].mask.contains(a))
            .map(|&j| &values[j])
            .sum();
        values[i] = -sum;
    }
    MobiusTable { values }
}

/// `χ_M(q) = Σ_F μ(0̂, F) q^{rank(M) - r(F)}`; the zero polynomial when
/// `M` has a loop.
pub fn char_poly(m: &Matroid) -> IntPolynomial {
    if !m.loops().is_empty() {
        return IntPolynomial::zero();
    }
    let lattice = FlatLattice::new(m);
    char_poly_of_lattice(&lattice, &mobius(&lattice))
}

pub(crate) fn char_poly_of_lattice(lattice: &FlatLattice, mu: &MobiusTable) -> IntPolynomial {
    let top = lattice.height();
    let mut coeffs = vec![BigInt::zero(); top + 1];
    for (f, v) in lattice.flats().iter().zip(&mu.values) {
        // degree-descending: q^{top - r(F)} sits at index r(F)
        coeffs[f.rank] += v;
    }
    IntPolynomial::new(coeffs)
}

/// `χ̄_M(q) = χ_M(q) / (q - 1)` and its unsigned coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedCharPoly {
    #[serde(serialize_with = "ser_poly")]
    pub char_poly: IntPolynomial,
    #[serde(serialize_with = "ser_poly")]
    pub reduced: IntPolynomial,
    /// `μ^0, ..., μ^r` with `χ̄ = Σ (-1)^i μ^i q^{r-i}`.
    #[serde(serialize_with = "ser_big_vec")]
    pub mu: Vec<BigInt>,
}

pub(crate) fn ser_poly<S: serde::Serializer>(p: &IntPolynomial, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.to_decimal_strings())
}

pub(crate) fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn reduced_char_poly(m: &Matroid) -> Result<ReducedCharPoly> {
    if !m.loops().is_empty() {
        return Err(Error::HasLoops);
    }
    let chi = char_poly(m);
    let (reduced, rem) = chi.div_linear(&BigInt::one());
    if !rem.is_zero() || reduced.is_zero() {
        return Err(Error::NonDivisible(rem.to_string()));
    }
    let mu = reduced
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
        .collect();
    Ok(ReducedCharPoly {
        char_poly: chi,
        reduced,
        mu,
    })
}

/// Number of initial descending `k`-step flags of proper flats
/// `F_1 ⊊ ... ⊊ F_k` with `r(F_i) = i` and
/// `min F_1 > min F_2 > ... > min F_k > 0`.
pub fn count_descending_flags(lattice: &FlatLattice, k: usize) -> Result<BigInt> {
    let r = lattice.height().checked_sub(1).ok_or(Error::OutOfRange {
        what: "flag length",
        value: k,
        max: 0,
    })?;
    if k > r {
        return Err(Error::OutOfRange {
            what: "flag length",
            value: k,
            max: r,
        });
    }
    if k == 0 {
        return Ok(BigInt::one());
    }
    // chains[i] = number of descending initial chains ending at flat i,
    // filled rank by rank from the atoms up
    let flats = lattice.flats();
    let min_of = |i: usize| flats[i].mask.min().unwrap_or(usize::MAX);
    let mut chains = vec![BigInt::zero(); flats.len()];
    for i in lattice.offsets[1]..lattice.offsets[2] {
        chains[i] = BigInt::one();
    }
    for rank in 2..=k {
        for i in lattice.offsets[rank]..lattice.offsets[rank + 1] {
            let m = min_of(i);
            chains[i] = lattice.lower_covers[i]
                .iter()
                .filter(|&&j| min_of(j) > m)
                .map(|&j| &chains[j])
                .sum();
        }
    }
    Ok((lattice.offsets[k]..lattice.offsets[k + 1])
        .filter(|&i| min_of(i) > 0)
        .map(|i| &chains[i])
        .sum())
}

/// The flags counted by [`count_descending_flags`], listed explicitly.
/// Each flag is given bottom-up as masks `[F_1, ..., F_k]`.
pub fn descending_flags(lattice: &FlatLattice, k: usize) -> Vec<Vec<SubsetMask>> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    if k + 1 > lattice.height() {
        return out;
    }
    let flats = lattice.flats();
    // walk down the covering relation from each rank-k flat avoiding 0
    fn walk(
        lattice: &FlatLattice,
        i: usize,
        stack: &mut Vec<SubsetMask>,
        out: &mut Vec<Vec<SubsetMask>>,
    ) {
        let f = lattice.flats[i];
        stack.push(f.mask);
        if f.rank == 1 {
            out.push(stack.iter().rev().copied().collect());
        } else {
            let m = f.mask.min().unwrap_or(usize::MAX);
            for &j in &lattice.lower_covers[i] {
                if lattice.flats[j].mask.min().is_some_and(|x| x > m) {
                    walk(lattice, j, stack, out);
                }
            }
        }
        stack.pop();
    }
    let mut stack = Vec::with_capacity(k);
    for i in lattice.offsets[k]..lattice.offsets[k + 1] {
        if !flats[i].mask.contains(0) && !flats[i].mask.is_empty() {
            walk(lattice, i, &mut stack, &mut out);
        }
    }
    out.sort();
    out
}

/// `|S_k|` for every `k = 0..=r`.
pub fn descending_flag_counts(m: &Matroid) -> Result<Vec<BigInt>> {
    let lattice = FlatLattice::new(m);
    let r = lattice.height().saturating_sub(1);
    (0..=r).map(|k| count_descending_flags(&lattice, k)).collect()
}
