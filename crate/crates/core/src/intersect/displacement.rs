use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{cremona_pullback_weight, ray, FlagCone, MinkowskiWeight};
use crate::linalg::{self, SquareSolve};
use crate::matroid::Matroid;
use crate::subset::SubsetMask;

/// Translation vector for the fan displacement rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplacementVector {
    coords: Vec<BigRational>,
}

impl DisplacementVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self { coords }
    }

    /// `(1, 2, ..., n)`.
    pub fn increasing(n: usize) -> Self {
        Self::new((1..=n as i64).map(|i| BigRational::from_integer(i.into())).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `0 < v_1 < v_2 < ... < v_n`.
    pub fn is_positive_increasing(&self) -> bool {
        self.coords.first().is_none_or(|c| c.is_positive())
            && self.coords.windows(2).all(|w| w[0] < w[1])
    }

    /// Adds `p_i / q` to each coordinate with `q` a fixed large denominator
    /// and `|p_i / q| < 1/4`, so a vector with unit gaps stays increasing.
    pub fn perturbed<R: Rng>(&self, rng: &mut R) -> Self {
        const Q: i64 = 1_000_003;
        Self::new(
            self.coords
                .iter()
                .map(|c| c + BigRational::new(rng.gen_range(-Q / 4 + 1..Q / 4).into(), Q.into()))
                .collect(),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(ToString::to_string).collect()
    }
}

/// Where `σ` meets `τ + v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeIntersection {
    pub point: Vec<BigRational>,
    /// Coefficients of the point in the rays of `σ`, then of `τ`.
    pub sigma_coords: Vec<BigRational>,
    pub tau_coords: Vec<BigRational>,
    pub transversal: bool,
}

fn rational_rays(c: &FlagCone, size: usize) -> Vec<Vec<BigRational>> {
    c.flag().iter().map(|&f| linalg::rat_row(&ray(f, size))).collect()
}

/// Intersects `σ` with `τ + v` for cones of complementary dimension.
///
/// Solves `Σ s_i g_i - Σ t_j h_j = v` over the rays. `Ok(None)` when the
/// cones miss each other, `Ok(Some(_))` for a transversal meeting point,
/// and a degeneracy error when `v` sits on a wall (a zero coordinate, or a
/// singular but consistent system).
pub fn cone_displacement_intersect(
    sigma: &FlagCone,
    tau: &FlagCone,
    v: &DisplacementVector,
) -> Result<Option<ConeIntersection>> {
    let n = v.dim();
    let size = n + 1;
    if sigma.dim() + tau.dim() != n {
        return Err(Error::Dimension(format!(
            "cones of dimensions {} and {} in ambient dimension {n}",
            sigma.dim(),
            tau.dim()
        )));
    }
    let g = rational_rays(sigma, size);
    let h = rational_rays(tau, size);
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            g.iter()
                .map(|r| r[i].clone())
                .chain(h.iter().map(|r| -&r[i]))
                .collect()
        })
        .collect();
    let degenerate = || Error::DegenerateDisplacement {
        sigma: sigma.flag().to_vec(),
        tau: tau.flag().to_vec(),
    };
    match linalg::solve_square(&a, v.coords()) {
        SquareSolve::Singular { consistent: false } => Ok(None),
        SquareSolve::Singular { consistent: true } => Err(degenerate()),
        SquareSolve::Unique(x) => {
            if x.iter().any(Signed::is_negative) {
                return Ok(None);
            }
            if x.iter().any(Zero::is_zero) {
                return Err(degenerate());
            }
            let (s, t) = x.split_at(sigma.dim());
            let mut point = vec![BigRational::zero(); n];
            for (c, r) in s.iter().zip(&g) {
                for (p, x) in point.iter_mut().zip(r) {
                    *p += c * x;
                }
            }
            Ok(Some(ConeIntersection {
                point,
                sigma_coords: s.to_vec(),
                tau_coords: t.to_vec(),
                transversal: true,
            }))
        }
    }
}

/// `[N : N_σ + N_τ]` for cones whose rays together form a square matrix.
/// Zero when the rays are dependent.
pub fn lattice_index(sigma: &FlagCone, tau: &FlagCone, size: usize) -> BigInt {
    let m: Vec<Vec<BigInt>> = sigma
        .flag()
        .iter()
        .chain(tau.flag())
        .map(|&f| linalg::int_row(&ray(f, size)))
        .collect();
    let d = linalg::det(&m).abs();
    if d.is_zero() || m.len() != size - 1 {
        // not a full-rank square system; fall back to the Smith form of the
        // combined generators
        let inv = linalg::smith_invariants(&m);
        if inv.len() < size - 1 {
            return BigInt::zero();
        }
        return inv.iter().product();
    }
    d
}

/// One nonzero contribution to a degree pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingTerm {
    pub sigma: FlagCone,
    pub tau: FlagCone,
    #[serde(serialize_with = "ser_rationals")]
    pub point: Vec<BigRational>,
    #[serde(serialize_with = "ser_big")]
    pub index: BigInt,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub degree: BigInt,
    /// Contributing pairs, ordered by `(σ, τ)`.
    pub terms: Vec<PairingTerm>,
}

fn check_dims(w1: &MinkowskiWeight, w2: &MinkowskiWeight, v: &DisplacementVector) -> Result<()> {
    let n = w1.ambient_dim();
    if w2.size() != w1.size() || v.dim() != n {
        return Err(Error::Dimension("weights and vector live in different lattices".into()));
    }
    if w1.codim() + w2.codim() != n {
        return Err(Error::Dimension(format!(
            "codimensions {} + {} do not add up to {n}",
            w1.codim(),
            w2.codim()
        )));
    }
    Ok(())
}

/// `deg(w1 ∪ w2)` by the fan displacement rule at the zero cone.
///
/// Every cone of the fine permutohedral fan is cut out by which coordinates
/// of a point coincide and in what order the blocks come. So instead of
/// trying every `σ` against every `τ`, each `τ + v` is intersected with the
/// coincidence patterns having as many blocks as `σ` needs, and the cone
/// containing the resulting point is read off. When that is cheaper, the
/// roles are swapped and each `σ - v` is intersected with the patterns of
/// `τ`. Degeneracy is reported whenever `v` is not transversal for some
/// supported pair, as in [`degree_pairing_exhaustive`].
pub fn degree_pairing(
    w1: &MinkowskiWeight,
    w2: &MinkowskiWeight,
    v: &DisplacementVector,
) -> Result<Pairing> {
    check_dims(w1, w2, v)?;
    let size = w1.size();
    let cost = |fixed: &MinkowskiWeight, moving: &MinkowskiWeight| {
        stirling2(size, fixed.cone_dim() + 1).saturating_mul(moving.support_len() as u128)
    };
    let swap = cost(w2, w1) < cost(w1, w2);
    let (fixed, moving) = if swap { (w2, w1) } else { (w1, w2) };
    let patterns = set_partitions(size, fixed.cone_dim() + 1);
    let shift: Vec<BigRational> = std::iter::once(BigRational::zero())
        .chain(v.coords().iter().map(|c| if swap { -c } else { c.clone() }))
        .collect();
    let scaled = ScaledShift::new(&shift);
    let movers: Vec<_> = moving.support().collect();
    let per_cone: Vec<Result<Vec<(PairingTerm, BigInt)>>> = movers
        .par_iter()
        .map(|(mover, c_moving)| {
            let mut out = Vec::new();
            for blocks in &patterns {
                let Some((hit, mut point)) = meet_pattern(fixed, mover, blocks, &shift, scaled.as_ref())? else {
                    continue;
                };
                let c_fixed = fixed.get(&hit);
                if c_fixed.is_zero() {
                    continue;
                }
                let (sigma, tau) = if swap {
                    // the point found lies in τ; translate it back into σ
                    for (p, c) in point.iter_mut().zip(v.coords()) {
                        *p += c;
                    }
                    ((*mover).clone(), hit)
                } else {
                    (hit, (*mover).clone())
                };
                let index = lattice_index(&sigma, &tau, size);
                let contribution = &index * c_fixed * *c_moving;
                out.push((
                    PairingTerm {
                        sigma,
                        tau,
                        point,
                        index,
                    },
                    contribution,
                ));
            }
            Ok(out)
        })
        .collect();
    let mut degree = BigInt::zero();
    let mut terms = Vec::new();
    for r in per_cone {
        for (t, c) in r? {
            degree += c;
            terms.push(t);
        }
    }
    terms.sort_by(|a, b| (&a.sigma, &a.tau).cmp(&(&b.sigma, &b.tau)));
    Ok(Pairing { degree, terms })
}

/// `shift` scaled to integers by a common denominator, when that fits in
/// machine words.
struct ScaledShift {
    values: Vec<i128>,
    denom: BigInt,
}

impl ScaledShift {
    fn new(shift: &[BigRational]) -> Option<Self> {
        let denom = shift
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let values = shift
            .iter()
            .map(|c| (c.numer() * (&denom / c.denom())).to_i128())
            .collect::<Option<Vec<_>>>()?;
        // keep Cramer numerators far from overflow
        values.iter().all(|v| v.unsigned_abs() < 1 << 60).then_some(Self { values, denom })
    }
}

/// Finds the point of `mover + shift` whose coordinates coincide exactly
/// along `blocks`. Returns the permutohedral cone containing it in its
/// relative interior and the point itself, or `None` when there is no such
/// point or its cone is not supported by `fixed`. `shift` carries a leading
/// zero for element 0.
fn meet_pattern(
    fixed: &MinkowskiWeight,
    mover: &FlagCone,
    blocks: &[SubsetMask],
    shift: &[BigRational],
    scaled: Option<&ScaledShift>,
) -> Result<Option<(FlagCone, Vec<BigRational>)>> {
    let gens = mover.flag();
    let size = shift.len();
    // one equation x_a = x_b for each element after the first in a block
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(gens.len());
    let mut pairs = Vec::with_capacity(gens.len());
    for blk in blocks {
        let mut it = blk.iter();
        let first = it.next().expect("blocks are nonempty");
        for e in it {
            let row: Vec<i64> = gens
                .iter()
                .map(|g| i64::from(g.contains(e)) - i64::from(g.contains(first)))
                .collect();
            if row.iter().all(|&c| c == 0) {
                // e and first move together, so they coincide only if they
                // already do in the shift
                if shift[e] != shift[first] {
                    return Ok(None);
                }
            }
            rows.push(row);
            pairs.push((first, e));
        }
    }
    let degenerate = |flag: Vec<SubsetMask>| Error::DegenerateDisplacement {
        sigma: flag,
        tau: gens.to_vec(),
    };
    // the point as integers over a positive common denominator when
    // possible, exactly otherwise
    let (chain, on_wall, point): (_, _, Box<dyn Fn() -> Vec<BigRational>>) =
        match scaled.and_then(|sc| cramer_nonnegative(&rows, &pairs, sc)) {
            Some(None) => return Ok(None),
            Some(Some((nums, d, sc))) => {
                let mut x: Vec<i128> = sc.values.iter().map(|v| v * d).collect();
                for (tj, g) in nums.iter().zip(gens) {
                    for e in g.iter() {
                        x[e] += tj;
                    }
                }
                let den = BigInt::from(d) * &sc.denom;
                let chain = ordered_chain(&x);
                let point = move || {
                    x[1..]
                        .iter()
                        .map(|c| BigRational::new((c - x[0]).into(), den.clone()))
                        .collect()
                };
                (chain, nums.contains(&0), Box::new(point))
            }
            None => {
                let a: Vec<Vec<BigRational>> = rows.iter().map(|r| linalg::rat_row(r)).collect();
                let b: Vec<BigRational> =
                    pairs.iter().map(|&(f, e)| &shift[f] - &shift[e]).collect();
                let t = match linalg::solve_square(&a, &b) {
                    SquareSolve::Singular { consistent: false } => return Ok(None),
                    SquareSolve::Singular { consistent: true } => {
                        // no cone with this pattern meets the translate
                        // transversally; it matters only if one is supported
                        return match supported_with_pattern(fixed, blocks, size) {
                            Some(c) => Err(degenerate(c.flag().to_vec())),
                            None => Ok(None),
                        };
                    }
                    SquareSolve::Unique(t) => t,
                };
                if t.iter().any(Signed::is_negative) {
                    return Ok(None);
                }
                let mut x: Vec<BigRational> = shift.to_vec();
                for (tj, g) in t.iter().zip(gens) {
                    for e in g.iter() {
                        x[e] += tj;
                    }
                }
                let chain = ordered_chain(&x);
                let point = move || x[1..].iter().map(|c| c - &x[0]).collect();
                (chain, t.iter().any(Zero::is_zero), Box::new(point))
            }
        };
    let hit = FlagCone::from_sorted(chain);
    if on_wall || hit.dim() + 1 != blocks.len() {
        // the translate touches a wall; only a problem if a supported cone is there
        if fixed.support().any(|(c, _)| is_face(&hit, c)) {
            return Err(degenerate(hit.flag().to_vec()));
        }
        return Ok(None);
    }
    if fixed.get(&hit).is_zero() {
        return Ok(None);
    }
    Ok(Some((hit, point())))
}

/// Solves the coincidence system by Cramer's rule in machine integers.
/// `Some(None)` when some coordinate is negative or the system is
/// inconsistent. `Some(Some((nums, d, _)))` for a nonnegative solution
/// `t_j = nums_j / (d * denom)` with `d > 0`. `None` when the system is
/// singular but consistent or the arithmetic would overflow.
fn cramer_nonnegative<'a>(
    rows: &[Vec<i64>],
    pairs: &[(usize, usize)],
    sc: &'a ScaledShift,
) -> Option<Option<(Vec<i128>, i128, &'a ScaledShift)>> {
    let a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
    let b: Vec<i128> = pairs
        .iter()
        .map(|&(f, e)| sc.values[f] - sc.values[e])
        .collect();
    let d = linalg::det_i128(&a)?;
    if d == 0 {
        let aug: Vec<Vec<i128>> = a
            .iter()
            .zip(&b)
            .map(|(r, bi)| r.iter().copied().chain([*bi]).collect())
            .collect();
        if linalg::rank_i128(&aug)? > linalg::rank_i128(&a)? {
            return Some(None);
        }
        return None;
    }
    let mut nums = Vec::with_capacity(a.len());
    let mut aj = a.clone();
    for j in 0..a.len() {
        for (row, bi) in aj.iter_mut().zip(&b) {
            row[j] = *bi;
        }
        let dj = linalg::det_i128(&aj)? * d.signum();
        if dj < 0 {
            return Some(None);
        }
        nums.push(dj);
        for (row, orig) in aj.iter_mut().zip(&a) {
            row[j] = orig[j];
        }
    }
    Some(Some((nums, d.abs(), sc)))
}

/// Stirling number of the second kind.
fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = row[j - 1].saturating_add((j as u128).saturating_mul(row[j]));
        }
        row[0] = 0;
    }
    row[k]
}

/// The flag `F_1 ⊂ F_2 ⊂ ...` with `F_i` the elements carrying the `i`
/// largest values of `x`.
fn ordered_chain<T: Ord>(x: &[T]) -> Vec<SubsetMask> {
    let mut values: Vec<&T> = x.iter().collect();
    values.sort_by(|a, b| b.cmp(a));
    values.dedup();
    let mut chain = Vec::with_capacity(values.len().saturating_sub(1));
    let mut acc = SubsetMask::EMPTY;
    for val in &values[..values.len().saturating_sub(1)] {
        for (e, xe) in x.iter().enumerate() {
            if xe == *val {
                acc = acc.insert(e);
            }
        }
        chain.push(acc);
    }
    chain
}

/// A supported cone whose coincidence blocks `F_1, F_2 ∖ F_1, ..., E ∖ F_m`
/// are exactly `blocks`.
fn supported_with_pattern<'a>(
    fixed: &'a MinkowskiWeight,
    blocks: &[SubsetMask],
    size: usize,
) -> Option<&'a FlagCone> {
    let mut want = blocks.to_vec();
    want.sort();
    fixed.support().map(|(c, _)| c).find(|c| {
        if c.dim() + 1 != blocks.len() {
            return false;
        }
        let mut prev = SubsetMask::EMPTY;
        let mut got: Vec<SubsetMask> = c
            .flag()
            .iter()
            .chain(std::iter::once(&SubsetMask::full(size)))
            .map(|&f| {
                let b = f.difference(prev);
                prev = f;
                b
            })
            .collect();
        got.sort();
        got == want
    })
}

fn is_face(face: &FlagCone, cone: &FlagCone) -> bool {
    face.flag().iter().all(|f| cone.flag().contains(f))
}

/// All partitions of `{0, ..., size-1}` into exactly `blocks` blocks, via
/// restricted growth strings.
pub(crate) fn set_partitions(size: usize, blocks: usize) -> Vec<Vec<SubsetMask>> {
    fn go(
        e: usize,
        size: usize,
        blocks: usize,
        cur: &mut Vec<SubsetMask>,
        out: &mut Vec<Vec<SubsetMask>>,
    ) {
        if cur.len() + (size - e) < blocks {
            return;
        }
        if e == size {
            out.push(cur.clone());
            return;
        }
        for i in 0..cur.len() {
            cur[i] = cur[i].insert(e);
            go(e + 1, size, blocks, cur, out);
            cur[i] = cur[i].remove(e);
        }
        if cur.len() < blocks {
            cur.push(SubsetMask::singleton(e));
            go(e + 1, size, blocks, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if blocks <= size {
        go(0, size, blocks, &mut Vec::new(), &mut out);
    }
    out
}

/// Reference version of [`degree_pairing`] that tests every pair of
/// supported cones. Quadratic in the supports; meant for cross-checks.
pub fn degree_pairing_exhaustive(
    w1: &MinkowskiWeight,
    w2: &MinkowskiWeight,
    v: &DisplacementVector,
) -> Result<Pairing> {
    check_dims(w1, w2, v)?;
    let size = w1.size();
    let left: Vec<_> = w1.support().collect();
    let right: Vec<_> = w2.support().collect();
    let per_sigma: Vec<Result<Vec<(PairingTerm, BigInt)>>> = left
        .par_iter()
        .map(|(sigma, c1)| {
            let mut out = Vec::new();
            for (tau, c2) in &right {
                if let Some(hit) = cone_displacement_intersect(sigma, tau, v)? {
                    let index = lattice_index(sigma, tau, size);
                    let contribution = &index * *c1 * *c2;
                    out.push((
                        PairingTerm {
                            sigma: (*sigma).clone(),
                            tau: (*tau).clone(),
                            point: hit.point,
                            index,
                        },
                        contribution,
                    ));
                }
            }
            Ok(out)
        })
        .collect();
    let mut degree = BigInt::zero();
    let mut terms = Vec::new();
    for r in per_sigma {
        for (t, c) in r? {
            degree += c;
            terms.push(t);
        }
    }
    Ok(Pairing { degree, terms })
}

/// `deg(Δ_{Trunc_{n-k}(U_n)} ∪ Crem*(Δ_{Trunc_k(M)}))`.
pub fn mu_via_displacement(m: &Matroid, k: usize, v: &DisplacementVector) -> Result<Pairing> {
    let (perm, crem) = displacement_weights(m, k)?;
    degree_pairing(&perm, &crem, v)
}

/// The two weights paired to obtain `μ^k`.
pub fn displacement_weights(m: &Matroid, k: usize) -> Result<(MinkowskiWeight, MinkowskiWeight)> {
    let n = m.n();
    let r = m.full_rank().checked_sub(1).ok_or(Error::Dimension("rank-zero matroid".into()))?;
    if k > r {
        return Err(Error::OutOfRange {
            what: "coefficient index",
            value: k,
            max: r,
        });
    }
    let perm = crate::fan::permutohedral_weight(n, k)?;
    let trunc = crate::fan::bergman_weight(&m.truncate(k)?)?;
    Ok((perm, cremona_pullback_weight(&trunc)))
}

/// Outcome of a displacement computation with certified genericity.
#[derive(Clone, Debug)]
pub struct CertifiedPairing {
    pub pairing: Pairing,
    pub vector: DisplacementVector,
    /// Number of perturbations needed before every pair was transversal.
    pub retries: usize,
}

/// Runs `f` on `v`, perturbing `v` after each degenerate outcome, up to
/// `max_retries` times.
pub fn with_generic_vector<R, F>(
    v: &DisplacementVector,
    rng: &mut R,
    max_retries: usize,
    mut f: F,
) -> Result<CertifiedPairing>
where
    R: Rng,
    F: FnMut(&DisplacementVector) -> Result<Pairing>,
{
    let mut cur = v.clone();
    for retries in 0..=max_retries {
        match f(&cur) {
            Ok(pairing) => {
                return Ok(CertifiedPairing {
                    pairing,
                    vector: cur,
                    retries,
                })
            }
            Err(Error::DegenerateDisplacement { .. }) => cur = v.perturbed(rng),
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted(max_retries + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{bergman_weight, permutohedral_weight};
    use crate::matroid::{complete_graph_edges, fano_matrix};
    use crate::subset::SubsetMask;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    fn vec_of(v: &[i64]) -> DisplacementVector {
        DisplacementVector::new(linalg::rat_row(v))
    }

    #[test]
    fn translated_point_in_orthant() {
        // flag {1} ⊂ {1,2} spans cone(e1, e1 + e2) ⊇ {x1 > x2 > 0}; use v in it
        let sigma = FlagCone::new(vec![s(&[1]), s(&[1, 2])], 3).unwrap();
        let v = vec_of(&[3, 1]);
        let hit = cone_displacement_intersect(&sigma, &FlagCone::zero(), &v)
            .unwrap()
            .unwrap();
        assert_eq!(hit.point, linalg::rat_row(&[3, 1]));
        assert!(hit.transversal);
    }

    #[test]
    fn separated_cones_miss() {
        let sigma = FlagCone::new(vec![s(&[1]), s(&[1, 2])], 3).unwrap();
        let v = vec_of(&[-2, -1]);
        assert_eq!(cone_displacement_intersect(&sigma, &FlagCone::zero(), &v).unwrap(), None);
    }

    #[test]
    fn wall_is_degenerate() {
        let sigma = FlagCone::new(vec![s(&[1]), s(&[1, 2])], 3).unwrap();
        let v = vec_of(&[1, 1]);
        assert!(matches!(
            cone_displacement_intersect(&sigma, &FlagCone::zero(), &v),
            Err(Error::DegenerateDisplacement { .. })
        ));
    }

    #[test]
    fn k4_coefficients() {
        let k4 = Matroid::graphic(4, complete_graph_edges(4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = DisplacementVector::increasing(5);
        let mu: Vec<BigInt> = (0..=2)
            .map(|k| {
                with_generic_vector(&v, &mut rng, 8, |v| mu_via_displacement(&k4, k, v))
                    .unwrap()
                    .pairing
                    .degree
            })
            .collect();
        assert_eq!(mu, vec![1.into(), 5.into(), 6.into()]);
    }

    #[test]
    fn fano_top_coefficient() {
        let fano = Matroid::linear_mod_p(2, fano_matrix()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = with_generic_vector(&DisplacementVector::increasing(6), &mut rng, 8, |v| {
            mu_via_displacement(&fano, 2, v)
        })
        .unwrap();
        assert_eq!(p.pairing.degree, BigInt::from(8));
        assert!(p.pairing.terms.iter().all(|t| t.index == BigInt::from(1)));
    }

    #[test]
    fn lattice_index_matches_smith() {
        let size = 4;
        let sigma = FlagCone::new(vec![s(&[1]), s(&[1, 2])], size).unwrap();
        let tau = FlagCone::new(vec![s(&[2, 3])], size).unwrap();
        let m: Vec<_> = sigma
            .flag()
            .iter()
            .chain(tau.flag())
            .map(|&f| linalg::int_row(&ray(f, size)))
            .collect();
        let snf: BigInt = linalg::smith_invariants(&m).iter().product();
        assert_eq!(lattice_index(&sigma, &tau, size), snf);
        assert_eq!(snf, BigInt::from(1));
        // e_{0,3} = (-1,-1,0) is dependent on e_1, e_{1,2}
        let flat = FlagCone::new(vec![s(&[0, 3])], size).unwrap();
        assert_eq!(lattice_index(&sigma, &flat, size), BigInt::zero());
    }

    #[test]
    fn pairing_rejects_bad_codims() {
        let a = permutohedral_weight(3, 1).unwrap();
        let b = bergman_weight(&Matroid::uniform(3, 4).unwrap()).unwrap();
        assert!(degree_pairing(&a, &b, &DisplacementVector::increasing(3)).is_err());
    }

    #[test]
    fn partition_counts_are_stirling() {
        assert_eq!(set_partitions(5, 2).len(), 15);
        assert_eq!(set_partitions(6, 3).len(), 90);
        assert_eq!(set_partitions(4, 4).len(), 1);
        assert!(set_partitions(3, 4).is_empty());
        for (n, k) in [(5, 2), (6, 3), (7, 4), (0, 0), (3, 0)] {
            assert_eq!(stirling2(n, k), set_partitions(n, k).len() as u128, "S({n},{k})");
        }
    }

    #[test]
    fn fast_pairing_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ms = [
            Matroid::graphic(4, complete_graph_edges(4)).unwrap(),
            Matroid::uniform(3, 5).unwrap(),
            Matroid::free(4).unwrap(),
        ];
        for m in &ms {
            for k in 0..m.full_rank() {
                let (a, b) = displacement_weights(m, k).unwrap();
                let v = DisplacementVector::increasing(m.n()).perturbed(&mut rng);
                let fast = degree_pairing(&a, &b, &v).unwrap();
                let slow = degree_pairing_exhaustive(&a, &b, &v).unwrap();
                assert_eq!(fast, slow, "{m:?} k={k}");
            }
        }
    }

    #[test]
    fn perturbation_keeps_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = DisplacementVector::increasing(8);
        for _ in 0..20 {
            assert!(v.perturbed(&mut rng).is_positive_increasing());
        }
    }
}
