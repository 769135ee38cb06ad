//! Property tests for Kirby moves: every invariant the crate computes must
//! survive random move sequences, and the signature bookkeeping of the
//! individual moves must be exact.

use linkhom::homology::smith_normal_form;
use linkhom::invariants::signature;
use linkhom::kirby::{certify_random_moves, handle_slide, random_move_sequence, stabilize};
use linkhom::links::{AmbientLinkPresentation, ColouredLinkingData};
use linkhom::Coupling;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn symmetric_from(upper: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut matrix = vec![vec![0i64; n]; n];
    let mut it = upper.iter().copied();
    for i in 0..n {
        for j in i..n {
            let e = it.next().unwrap();
            matrix[i][j] = e;
            matrix[j][i] = e;
        }
    }
    matrix
}

fn presentation(max_ns: usize, max_nl: usize) -> impl Strategy<Value = AmbientLinkPresentation> {
    (1..=max_ns, 1..=max_nl).prop_flat_map(move |(ns, nl)| {
        (
            prop::collection::vec(-3i64..=3, ns * (ns + 1) / 2),
            prop::collection::vec(-2i64..=2, ns * nl),
            prop::collection::vec(-2i64..=2, nl * (nl + 1) / 2),
            prop::collection::vec(-2i64..=2, nl),
        )
            .prop_map(move |(surgery_upper, cross_flat, link_upper, colours)| {
                let surgery = symmetric_from(&surgery_upper, ns);
                let cross = (0..ns).map(|i| cross_flat[i * nl..(i + 1) * nl].to_vec()).collect();
                let link =
                    ColouredLinkingData::new(symmetric_from(&link_upper, nl), colours).unwrap();
                AmbientLinkPresentation::new(surgery, cross, link).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn random_moves_change_no_invariant(
        p in presentation(3, 2), k in 1i64..=3, length in 0usize..=8, seed in any::<u64>()
    ) {
        let k = Coupling::new(k).unwrap();
        let cert = certify_random_moves(&p, k, length, seed, 4).unwrap();
        prop_assert!(cert.passed(), "moves {:?}", cert.moves);
    }

    #[test]
    fn moves_preserve_determinant_and_invariant_factors(
        p in presentation(3, 1), length in 0usize..=8, seed in any::<u64>()
    ) {
        let (moved, _) = random_move_sequence(&p, length, seed, 5);
        // moves may add or remove unit factors; the nontrivial ones are fixed
        let nontrivial = |b: &[Vec<i64>]| -> Vec<num_bigint::BigInt> {
            smith_normal_form(b).diagonal().into_iter().filter(|d| !d.is_one()).collect()
        };
        prop_assert_eq!(nontrivial(p.surgery_matrix()), nontrivial(moved.surgery_matrix()));
        prop_assert_eq!(
            linkhom::homology::determinant(p.surgery_matrix()).abs(),
            linkhom::homology::determinant(moved.surgery_matrix()).abs()
        );
    }
}

proptest! {
    #[test]
    fn stabilization_shifts_one_signature_count(
        upper in prop::collection::vec(-4i64..=4, 6), positive in prop::bool::ANY
    ) {
        let b = symmetric_from(&upper, 3);
        let p = AmbientLinkPresentation::manifold_only(b.clone()).unwrap();
        let before = signature(&b).unwrap();
        let sign = if positive { 1 } else { -1 };
        let after = signature(stabilize(&p, sign).surgery_matrix()).unwrap();
        if positive {
            prop_assert_eq!(after.n_plus(), before.n_plus() + 1);
            prop_assert_eq!(after.n_minus(), before.n_minus());
        } else {
            prop_assert_eq!(after.n_plus(), before.n_plus());
            prop_assert_eq!(after.n_minus(), before.n_minus() + 1);
        }
        prop_assert_eq!(after.n_zero(), before.n_zero());
    }

    #[test]
    fn handle_slides_preserve_the_signature_triple(
        upper in prop::collection::vec(-4i64..=4, 10),
        i in 0usize..4, j in 0usize..4, positive in prop::bool::ANY
    ) {
        prop_assume!(i != j);
        let b = symmetric_from(&upper, 4);
        let p = AmbientLinkPresentation::manifold_only(b.clone()).unwrap();
        let slid = handle_slide(&p, i, j, if positive { 1 } else { -1 }).unwrap();
        prop_assert_eq!(
            signature(slid.surgery_matrix()).unwrap(),
            signature(&b).unwrap()
        );
    }
}
