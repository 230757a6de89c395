use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Univariate polynomial with big-integer coefficients, stored
/// degree-descending. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// From degree-descending coefficients; leading zeros are dropped.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        Self {
            coeffs: coeffs[lead..].to_vec(),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `(q - a)` for a root `a`.
    pub fn linear(a: i64) -> Self {
        Self::from_i64(&[1, -a])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree-descending coefficients.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^k`.
    pub fn coeff(&self, k: usize) -> BigInt {
        match self.degree() {
            Some(d) if k <= d => self.coeffs[d - k].clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    /// Synthetic division by `(q - a)`: returns quotient and remainder.
    pub fn div_linear(&self, a: &BigInt) -> (IntPolynomial, BigInt) {
        let Some((last, init)) = self.coeffs.split_last() else {
            return (Self::zero(), BigInt::zero());
        };
        let mut quot = Vec::with_capacity(init.len());
        let mut carry = BigInt::zero();
        for c in init {
            carry = carry * a + c;
            quot.push(carry.clone());
        }
        let rem = carry * a + last;
        (Self::new(quot), rem)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a IntPolynomial>>(factors: I) -> Self {
        factors
            .into_iter()
            .fold(Self::new(vec![BigInt::one()]), |acc, f| acc.mul(f))
    }

    /// Absolute values of the coefficients, degree-descending. For a
    /// polynomial with alternating signs these are the unsigned
    /// coefficients.
    pub fn unsigned_coeffs(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(Signed::abs).collect()
    }

    /// True when the signs strictly alternate starting from a positive
    /// leading coefficient and no coefficient vanishes.
    pub fn alternates(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| {
            if i % 2 == 0 {
                c.is_positive()
            } else {
                c.is_negative()
            }
        })
    }

    /// Coefficients as decimal strings, degree-descending.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = deg - i;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            if power == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match power {
                0 => {}
                1 => write!(f, "q")?,
                p => write!(f, "q^{p}")?,
            }
        }
        Ok(())
    }
}

/// True when `a[k]^2 >= a[k-1] a[k+1]` for every interior `k`.
pub fn is_log_concave(a: &[BigInt]) -> bool {
    a.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn division_by_q_minus_one() {
        // q^3 - 6q^2 + 11q - 6 = (q-1)(q-2)(q-3)
        let p = IntPolynomial::from_i64(&[1, -6, 11, -6]);
        let (quot, rem) = p.div_linear(&BigInt::one());
        assert!(rem.is_zero());
        assert_eq!(quot, IntPolynomial::from_i64(&[1, -5, 6]));
        let (_, rem) = IntPolynomial::from_i64(&[1, 0, 1]).div_linear(&BigInt::one());
        assert_eq!(rem, BigInt::from(2));
    }

    #[test]
    fn products_and_eval() {
        let p = IntPolynomial::product(&[IntPolynomial::linear(1), IntPolynomial::linear(1)]);
        assert_eq!(p, IntPolynomial::from_i64(&[1, -2, 1]));
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(4));
        assert!(p.alternates());
        assert_eq!(p.coeff(1), BigInt::from(-2));
        assert_eq!(p.coeff(7), BigInt::zero());
        assert!(IntPolynomial::new(ints(&[0, 0])).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(IntPolynomial::from_i64(&[1, -7, 14, -8]).to_string(), "q^3 - 7q^2 + 14q - 8");
        assert_eq!(IntPolynomial::from_i64(&[-1, 0, 1]).to_string(), "-q^2 + 1");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn log_concavity() {
        assert!(is_log_concave(&ints(&[1, 6, 8])));
        assert!(is_log_concave(&ints(&[1, 9, 26, 24])));
        assert!(!is_log_concave(&ints(&[1, 1, 2])));
        assert!(is_log_concave(&ints(&[5])));
    }
}
