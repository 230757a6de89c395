//! Exact linear algebra over the rationals, the integers, and prime fields.
//!
//! Everything here is exact. Matrices are dense `Vec<Vec<_>>` in row-major
//! order; the sizes that occur (at most a few dozen rows) do not warrant a
//! dedicated matrix type.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced row echelon form in place. Returns the pivot column of each
/// nonzero row.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r][c..].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rational matrix.
pub fn rank_rational(m: &[Vec<BigRational>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

/// Rank of a matrix over GF(p); entries are taken modulo `p`.
pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut w: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let rows = w.len();
    let cols = w.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| w[i][c] != 0) else {
            continue;
        };
        w.swap(r, piv);
        let inv = pow_mod(w[r][c], p - 2, p);
        for x in w[r][c..].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && w[i][c] != 0 {
                let f = w[i][c];
                for j in c..cols {
                    w[i][j] = (w[i][j] + p - f * w[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Outcome of solving a square system `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum SquareSolve {
    Unique(Vec<BigRational>),
    /// `A` is singular; `consistent` says whether some solution exists.
    Singular { consistent: bool },
}

/// Solves `A x = b` for a square rational matrix `A`.
pub fn solve_square(a: &[Vec<BigRational>], b: &[BigRational]) -> SquareSolve {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() == n && pivots.iter().all(|&c| c < n) {
        SquareSolve::Unique(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
    } else {
        SquareSolve::Singular {
            consistent: !pivots.contains(&n),
        }
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Bareiss determinant in machine integers; `None` on overflow.
pub fn det_i128(m: &[Vec<i128>]) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Some(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Rank by fraction-free elimination in machine integers, reducing each
/// row by its content; `None` on overflow.
pub fn rank_i128(m: &[Vec<i128>]) -> Option<usize> {
    let mut a = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (x, y) = (a[rank][c], a[i][c]);
            for j in c..cols {
                a[i][j] = a[i][j].checked_mul(x)?.checked_sub(a[rank][j].checked_mul(y)?)?;
            }
            let g = a[i].iter().fold(0i128, |g, &v| g.gcd(&v));
            if g > 1 {
                a[i].iter_mut().for_each(|v| *v /= g);
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// Writes `target` as an integer combination of `gens` when possible.
///
/// The generators must be linearly independent. Returns `None` when the
/// target lies outside their rational span or needs non-integer
/// coefficients.
pub fn integer_coordinates(gens: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = gens.len();
    let dim = target.len();
    // columns = generators, last column = target
    let mut m: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            gens.iter()
                .map(|g| BigRational::from_integer(g[i].clone()))
                .chain(std::iter::once(BigRational::from_integer(target[i].clone())))
                .collect()
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    debug_assert_eq!(pivots.len(), k, "generators must be independent");
    let mut coeffs = vec![BigInt::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        let v = &m[row][k];
        if !v.is_integer() {
            return None;
        }
        coeffs[c] = v.to_integer();
    }
    Some(coeffs)
}

/// Diagonal of the Smith normal form of an integer matrix (nonzero
/// invariant factors only, each positive, each dividing the next).
pub fn smith_invariants(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                }
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                // pivot must divide the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let (head, tail) = a.split_at_mut(i);
                        for (x, y) in head[t].iter_mut().zip(tail[0].iter()).skip(t) {
                            *x += y;
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.1 == t {
                a.swap(t, best.0);
            } else {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// True when the rows of `m` are part of a basis of the integer lattice,
/// i.e. all Smith invariants equal one.
pub fn extends_to_basis(m: &[Vec<BigInt>]) -> bool {
    let inv = smith_invariants(m);
    inv.len() == m.len() && inv.iter().all(One::is_one)
}

pub fn int_row(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat_row(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_det_matches_big() {
        let rows: Vec<Vec<i64>> = vec![
            vec![2, -1, 0, 3],
            vec![0, 0, 1, 1],
            vec![1, 1, 1, 0],
            vec![4, 0, -2, 1],
        ];
        let small: Vec<Vec<i128>> =
            rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        assert_eq!(det_i128(&small).map(BigInt::from), Some(det(&rows.iter().map(|r| int_row(r)).collect::<Vec<_>>())));
        assert_eq!(det_i128(&[vec![i128::MAX, 2], vec![2, i128::MAX]]), None);
        assert_eq!(rank_i128(&small), Some(4));
        let dup = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_i128(&dup), Some(2));
    }

    fn ints(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| int_row(r)).collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(det(&ints(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(det(&ints(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det(&ints(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            det(&ints(&[&[0, 2, 1], &[3, 0, 1], &[1, 1, 0]])),
            BigInt::from(5)
        );
    }

    #[test]
    fn rank_over_gf2_and_q() {
        // x + y + z over GF(2) vs Q
        let m = [vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(rank_mod_p(&m, 2), 2);
        let q: Vec<_> = m
            .iter()
            .map(|r| rat_row(&r.iter().map(|&x| x as i64).collect::<Vec<_>>()))
            .collect();
        assert_eq!(rank_rational(&q), 3);
    }

    #[test]
    fn square_solve_cases() {
        let a = vec![rat_row(&[1, 1]), rat_row(&[1, -1])];
        let b = rat_row(&[3, 1]);
        assert_eq!(solve_square(&a, &b), SquareSolve::Unique(rat_row(&[2, 1])));
        let s = vec![rat_row(&[1, 1]), rat_row(&[2, 2])];
        assert_eq!(
            solve_square(&s, &rat_row(&[1, 2])),
            SquareSolve::Singular { consistent: true }
        );
        assert_eq!(
            solve_square(&s, &rat_row(&[1, 3])),
            SquareSolve::Singular { consistent: false }
        );
    }

    #[test]
    fn span_membership() {
        let gens = ints(&[&[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(
            integer_coordinates(&gens, &int_row(&[2, 5, 3])),
            Some(int_row(&[2, 3]))
        );
        assert_eq!(integer_coordinates(&gens, &int_row(&[1, 0, 0])), None);
        let half = ints(&[&[2, 0]]);
        assert_eq!(integer_coordinates(&half, &int_row(&[1, 0])), None);
        assert_eq!(integer_coordinates(&[], &int_row(&[0, 0])), Some(vec![]));
    }

    #[test]
    fn smith_form() {
        assert_eq!(
            smith_invariants(&ints(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])),
            int_row(&[2, 6, 12])
        );
        assert!(extends_to_basis(&ints(&[&[1, 1, 0], &[0, 1, 1]])));
        assert!(!extends_to_basis(&ints(&[&[1, 1], &[1, -1]])));
        assert!(!extends_to_basis(&ints(&[&[2, 0, 0]])));
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(7) && is_prime(2_147_483_647));
        assert!(!is_prime(1) && !is_prime(9));
        assert_eq!(pow_mod(3, 4, 7), 4);
    }
}
