//! Published coefficient vectors, checked against the Möbius computation.

use num_bigint::BigInt;
use tropmu::charpoly::reduced_char_poly;
use tropmu::corpus::by_name;

fn mu_of(name: &str) -> Vec<BigInt> {
    let m = by_name(name).unwrap().build().unwrap();
    reduced_char_poly(&m).unwrap().mu
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

#[test]
fn graphic_and_fano() {
    assert_eq!(mu_of("K4"), ints(&[1, 5, 6]));
    assert_eq!(mu_of("K5"), ints(&[1, 9, 26, 24]));
    assert_eq!(mu_of("Fano"), ints(&[1, 6, 8]));
    assert_eq!(mu_of("U(2,3)"), ints(&[1, 2]));
}

#[test]
fn free_matroids_are_binomial() {
    assert_eq!(mu_of("Free(4)"), ints(&[1, 4, 6, 4, 1]));
    assert_eq!(mu_of("Free(6)"), ints(&[1, 6, 15, 20, 15, 6, 1]));
}

// Six three-point lines on seven points give χ = q³ - 7q² + 15q - 9, so
// μ = (1, 6, 9). The value asserted here is the one we were asked to
// reproduce; it cannot hold for this matroid.
#[test]
#[ignore = "expected value (1,6,7) is inconsistent with the matroid; every method gives (1,6,9)"]
fn non_fano_as_requested() {
    assert_eq!(mu_of("NonFano"), ints(&[1, 6, 7]));
}

#[test]
fn non_fano_actual() {
    assert_eq!(mu_of("NonFano"), ints(&[1, 6, 9]));
}
