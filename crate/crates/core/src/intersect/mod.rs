//! Exact tropical intersection on the permutohedral fan: divisor cup
//! products, the fan displacement rule, and the two intersection-theoretic
//! formulas for the reduced characteristic polynomial coefficients.

mod displacement;
mod divisor;

pub use displacement::{
    cone_displacement_intersect, degree_pairing, degree_pairing_exhaustive, displacement_weights, lattice_index,
    mu_via_displacement, with_generic_vector, CertifiedPairing, ConeIntersection,
    DisplacementVector, Pairing, PairingTerm,
};
pub use divisor::{
    alpha, containing_cone, cremona_pullback_divisor, cup_power, divisor_cup, nef_check,
    nef_values, DivisorJson, PLDivisor,
};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::{bergman_weight, check_balancing, MinkowskiWeight};
use crate::matroid::Matroid;

/// Result of `deg(α^{r-k} ∪ (Crem*α)^k ∪ Δ_M)` with the intermediate
/// weights' balancing re-checked after every cup.
#[derive(Clone, Debug)]
pub struct DivisorRun {
    pub degree: BigInt,
    /// Number of cups whose output failed the balancing check.
    pub unbalanced_steps: usize,
}

/// `μ^k` from iterated cups of `α` and `Crem*α` on the Bergman fan.
pub fn mu_via_divisors(m: &Matroid, k: usize) -> Result<BigInt> {
    Ok(mu_via_divisors_checked(m, k, &mut |_| {})?.degree)
}

/// As [`mu_via_divisors`], calling `inspect` on every intermediate weight
/// and counting unbalanced ones.
pub fn mu_via_divisors_checked(
    m: &Matroid,
    k: usize,
    inspect: &mut dyn FnMut(&MinkowskiWeight),
) -> Result<DivisorRun> {
    let r = m
        .full_rank()
        .checked_sub(1)
        .ok_or_else(|| Error::Dimension("rank-zero matroid".into()))?;
    if k > r {
        return Err(Error::OutOfRange {
            what: "coefficient index",
            value: k,
            max: r,
        });
    }
    let a = alpha(m.n())?;
    let ca = cremona_pullback_divisor(&a);
    let mut w = bergman_weight(m)?;
    let mut unbalanced_steps = 0;
    let steps = std::iter::repeat_n(&a, r - k).chain(std::iter::repeat_n(&ca, k));
    for d in steps {
        w = divisor_cup(d, &w)?;
        if !check_balancing(&w).is_empty() {
            unbalanced_steps += 1;
        }
        inspect(&w);
    }
    Ok(DivisorRun {
        degree: w.degree(),
        unbalanced_steps,
    })
}

/// `μ^k` with the cups applied in the given order: `true` means `Crem*α`,
/// `false` means `α`.
pub fn mu_via_divisor_sequence(m: &Matroid, order: &[bool]) -> Result<BigInt> {
    let a = alpha(m.n())?;
    let ca = cremona_pullback_divisor(&a);
    let mut w = bergman_weight(m)?;
    for &use_crem in order {
        w = divisor_cup(if use_crem { &ca } else { &a }, &w)?;
    }
    Ok(w.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::complete_graph_edges;

    #[test]
    fn k4_and_free() {
        let k4 = Matroid::graphic(4, complete_graph_edges(4)).unwrap();
        let mu: Vec<BigInt> = (0..=2).map(|k| mu_via_divisors(&k4, k).unwrap()).collect();
        assert_eq!(mu, vec![1.into(), 5.into(), 6.into()]);
        // four elements: χ̄ = (q-1)^3
        let f = Matroid::free(4).unwrap();
        let mu: Vec<BigInt> = (0..=3).map(|k| mu_via_divisors(&f, k).unwrap()).collect();
        assert_eq!(mu, vec![1.into(), 3.into(), 3.into(), 1.into()]);
    }

    #[test]
    fn order_does_not_matter() {
        let k4 = Matroid::graphic(4, complete_graph_edges(4)).unwrap();
        for order in [[true, false], [false, true]] {
            assert_eq!(mu_via_divisor_sequence(&k4, &order).unwrap(), BigInt::from(5));
        }
    }
}
