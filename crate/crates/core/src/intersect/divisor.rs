use std::collections::BTreeMap;
use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{coordinates_in_cone, permutohedral_weight, star_sum, FlagCone, MinkowskiWeight};
use crate::linalg;
use crate::subset::SubsetMask;

/// An integral piecewise-linear function on the permutohedral fan, stored
/// by its values on the rays `e_F`. Missing rays have value zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLDivisor {
    size: usize,
    values: BTreeMap<SubsetMask, BigInt>,
}

impl PLDivisor {
    pub fn zero(size: usize) -> Self {
        Self {
            size,
            values: BTreeMap::new(),
        }
    }

    pub fn from_values<I: IntoIterator<Item = (SubsetMask, BigInt)>>(
        size: usize,
        values: I,
    ) -> Result<Self> {
        let mut d = Self::zero(size);
        for (f, v) in values {
            if f.is_empty() || !f.fits(size) || f == SubsetMask::full(size) {
                return Err(Error::ImproperSubset(f));
            }
            if !v.is_zero() {
                d.values.insert(f, v);
            }
        }
        Ok(d)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Value at the ray `e_F`.
    pub fn ray_value(&self, f: SubsetMask) -> BigInt {
        self.values.get(&f).cloned().unwrap_or_default()
    }

    pub fn nonzero_rays(&self) -> impl Iterator<Item = (&SubsetMask, &BigInt)> {
        self.values.iter()
    }

    /// The linear function agreeing with `self` on `cone`, applied to `x`,
    /// which must lie in the lattice span of the cone's rays.
    pub fn on_cone(&self, cone: &FlagCone, x: &[BigInt]) -> Option<BigInt> {
        let coords = coordinates_in_cone(cone, x, self.size)?;
        Some(
            coords
                .iter()
                .zip(cone.flag())
                .map(|(c, f)| c * self.ray_value(*f))
                .sum(),
        )
    }

    /// Evaluates at an arbitrary rational point of `N_R`: finds the flag cone
    /// containing the point and expands it in that cone's rays.
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        let cone = containing_cone(point, self.size);
        let gens: Vec<Vec<BigRational>> = cone
            .rays(self.size)
            .iter()
            .map(|r| linalg::rat_row(r))
            .collect();
        if gens.is_empty() {
            return BigRational::zero();
        }
        // columns = rays, last column = point
        let mut m: Vec<Vec<BigRational>> = (0..point.len())
            .map(|i| {
                gens.iter()
                    .map(|g| g[i].clone())
                    .chain(std::iter::once(point[i].clone()))
                    .collect()
            })
            .collect();
        let pivots = linalg::rref(&mut m);
        let k = gens.len();
        debug_assert!(!pivots.contains(&k), "point must lie in its cone");
        pivots
            .iter()
            .enumerate()
            .map(|(row, &c)| &m[row][k] * BigRational::from_integer(self.ray_value(cone.flag()[c])))
            .sum()
    }
}

/// Smallest flag cone containing `point`: lift to `R^E` with `x_0 = 0`,
/// then `I_j` collects the elements whose coordinate is among the `j`
/// largest distinct values (excluding the minimum).
pub fn containing_cone(point: &[BigRational], size: usize) -> FlagCone {
    assert_eq!(point.len() + 1, size);
    let lifted: Vec<BigRational> = std::iter::once(BigRational::zero())
        .chain(point.iter().cloned())
        .collect();
    let mut levels: Vec<BigRational> = lifted.clone();
    levels.sort();
    levels.dedup();
    levels.reverse();
    let flag = levels[..levels.len() - 1]
        .iter()
        .map(|lvl| SubsetMask::from_elements((0..size).filter(|&i| &lifted[i] >= lvl)))
        .collect();
    FlagCone::new(flag, size).expect("level sets form a flag")
}

impl Add for &PLDivisor {
    type Output = PLDivisor;

    fn add(self, rhs: &PLDivisor) -> PLDivisor {
        assert_eq!(self.size, rhs.size);
        let mut out = self.clone();
        for (f, v) in &rhs.values {
            let e = out.values.entry(*f).or_default();
            *e += v;
        }
        out.values.retain(|_, v| !v.is_zero());
        out
    }
}

impl Neg for &PLDivisor {
    type Output = PLDivisor;

    fn neg(self) -> PLDivisor {
        PLDivisor {
            size: self.size,
            values: self.values.iter().map(|(f, v)| (*f, -v)).collect(),
        }
    }
}

/// `α = min{0, x_1, ..., x_n}`: value `-1` on `e_F` when `0 ∈ F`, else `0`.
/// For `n = 0` there are no rays and `α` is zero.
pub fn alpha(n: usize) -> Result<PLDivisor> {
    let size = n + 1;
    let full = SubsetMask::full(size);
    let values = (0..1u32 << n)
        .map(|rest| SubsetMask(rest << 1 | 1))
        .filter(|&f| f != full)
        .map(|f| (f, BigInt::from(-1)));
    PLDivisor::from_values(size, values)
}

/// Pullback along `x -> -x`: the value at `e_F` becomes the value at
/// `e_{E∖F} = -e_F`.
pub fn cremona_pullback_divisor(d: &PLDivisor) -> PLDivisor {
    PLDivisor {
        size: d.size,
        values: d
            .values
            .iter()
            .map(|(f, v)| (f.complement(d.size), v.clone()))
            .collect(),
    }
}

/// Cup product of a T-Cartier divisor with a Minkowski weight:
///
/// `(d ∪ c)(τ) = -Σ_{σ ⊃ τ} d_σ(u_{σ/τ}) c(σ) + d_τ(Σ_{σ ⊃ τ} c(σ) u_{σ/τ})`
///
/// with `u_{σ/τ} = e_F` for the subset `F` inserted into `τ`'s flag.
pub fn divisor_cup(d: &PLDivisor, w: &MinkowskiWeight) -> Result<MinkowskiWeight> {
    if d.size != w.size() {
        return Err(Error::Dimension(format!(
            "divisor on {} elements, weight on {}",
            d.size,
            w.size()
        )));
    }
    if w.cone_dim() == 0 {
        return Err(Error::Dimension("cannot cup a weight on the zero cone".into()));
    }
    let size = w.size();
    let stars: Vec<_> = w.stars().into_iter().collect();
    let values: Vec<(FlagCone, BigInt)> = stars
        .into_par_iter()
        .map(|(tau, star)| {
            let local: BigInt = star.iter().map(|(f, c)| d.ray_value(*f) * c).sum();
            let s = star_sum(&star, size);
            let on_tau = d
                .on_cone(&tau, &s)
                .ok_or_else(|| Error::NotBalanced(tau.flag().to_vec()))?;
            Ok((tau, on_tau - local))
        })
        .collect::<Result<_>>()?;
    MinkowskiWeight::from_cones(size, w.codim() + 1, values)
}

/// Repeated cups `d^times ∪ w`.
pub fn cup_power(d: &PLDivisor, times: usize, w: &MinkowskiWeight) -> Result<MinkowskiWeight> {
    (0..times).try_fold(w.clone(), |acc, _| divisor_cup(d, &acc))
}

/// Values of `d` on the codimension-one cones, obtained by cupping with the
/// weight that is one on every maximal cone.
pub fn nef_values(d: &PLDivisor) -> Result<MinkowskiWeight> {
    let fundamental = permutohedral_weight(d.size - 1, 0)?;
    divisor_cup(d, &fundamental)
}

/// True when `d` is nonnegative on every codimension-one cone.
pub fn nef_check(d: &PLDivisor) -> Result<bool> {
    Ok(nef_values(d)?.support().all(|(_, v)| *v >= BigInt::zero()))
}

/// JSON form of a divisor, `{"rays": {"mask": value}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub n: usize,
    pub rays: BTreeMap<String, i64>,
}

impl PLDivisor {
    pub fn to_json(&self) -> DivisorJson {
        DivisorJson {
            n: self.size - 1,
            rays: self
                .values
                .iter()
                .map(|(f, v)| (f.bits().to_string(), i64::try_from(v).expect("small ray value")))
                .collect(),
        }
    }

    pub fn from_json(j: &DivisorJson) -> Result<Self> {
        let mut vals = Vec::new();
        for (k, v) in &j.rays {
            let m: u32 = k
                .parse()
                .map_err(|_| Error::Schema(format!("ray key {k:?} is not a mask")))?;
            vals.push((SubsetMask(m), BigInt::from(*v)));
        }
        Self::from_values(j.n + 1, vals)
    }
}
