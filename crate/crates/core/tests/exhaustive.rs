//! Every pair of supported cones, not just the ones the fast pairing visits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropmu::charpoly::{descending_flags, FlatLattice};
use tropmu::corpus::builtin;
use tropmu::fan::FlagCone;
use tropmu::intersect::{
    degree_pairing, degree_pairing_exhaustive, displacement_weights, with_generic_vector,
    DisplacementVector,
};

/// `σ ∩ (τ + v)` is nonempty exactly for `τ = -σ_F` with `F` a descending
/// flag, and the fast pairing finds the same terms.
#[test]
fn meeting_pairs_are_descending_flags() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for e in builtin() {
        let m = e.build().unwrap();
        if m.n() > 5 {
            continue;
        }
        let lattice = FlatLattice::new(&m);
        let size = m.size();
        for k in 0..m.full_rank() {
            let (a, b) = displacement_weights(&m, k).unwrap();
            let v = DisplacementVector::increasing(m.n());
            assert_eq!(
                degree_pairing(&a, &b, &v).is_ok(),
                degree_pairing_exhaustive(&a, &b, &v).is_ok(),
                "{} k={k}: implementations disagree on degeneracy",
                e.name()
            );
            let slow = with_generic_vector(&v, &mut rng, 16, |v| degree_pairing_exhaustive(&a, &b, v))
                .unwrap();
            let fast = degree_pairing(&a, &b, &slow.vector).unwrap();
            assert_eq!(fast, slow.pairing, "{} k={k}", e.name());
            let mut taus: Vec<FlagCone> = slow.pairing.terms.iter().map(|t| t.tau.clone()).collect();
            taus.sort();
            let mut want: Vec<FlagCone> = descending_flags(&lattice, k)
                .into_iter()
                .map(|f| FlagCone::new(f, size).unwrap().negated(size))
                .collect();
            want.sort();
            assert_eq!(taus, want, "{} k={k}", e.name());
        }
    }
}
