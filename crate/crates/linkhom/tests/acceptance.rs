//! Acceptance suite: one test per advertised guarantee, each printing a
//! single pass line (run with `--nocapture` to see them). Every comparison
//! is exact in canonical cyclotomic form unless stated otherwise.

use linkhom::homology::first_homology;
use linkhom::invariants::{
    connected_sum, genus_times_circle, lens_closed_form, lens_presentation, reciprocity_check,
    rt_invariant, subgroup_invariant,
};
use linkhom::kirby::certify_random_moves;
use linkhom::links::{AmbientLinkPresentation, ColouredLinkingData};
use linkhom::observables::{
    observable_s3, observable_split_homology_sphere, observable_surgery, push_to_sphere,
    unknot_union_check,
};
use linkhom::{Coupling, CyclotomicNumber};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn coupling(k: i64) -> Coupling {
    Coupling::new(k).unwrap()
}

fn rt(b: &[Vec<i64>], k: i64) -> CyclotomicNumber {
    rt_invariant(b, coupling(k)).unwrap().value().clone()
}

fn sqrt(m: u64) -> CyclotomicNumber {
    CyclotomicNumber::sqrt_positive_integer(m)
}

fn imaginary_unit() -> CyclotomicNumber {
    CyclotomicNumber::root_of_unity(4, 1)
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut matrix = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let e = rng.gen_range(-bound..=bound);
            matrix[i][j] = e;
            matrix[j][i] = e;
        }
    }
    matrix
}

fn random_diagonal_signs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            let mut row = vec![0i64; n];
            row[i] = if rng.gen() { 1 } else { -1 };
            row
        })
        .collect()
}

fn random_presentation(
    rng: &mut ChaCha8Rng,
    surgery: Vec<Vec<i64>>,
    nl: usize,
    bound: i64,
) -> AmbientLinkPresentation {
    let ns = surgery.len();
    let cross = (0..ns)
        .map(|_| (0..nl).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    let colours = (0..nl).map(|_| rng.gen_range(-3..=3)).collect();
    let link = ColouredLinkingData::new(random_symmetric(rng, nl, bound), colours).unwrap();
    AmbientLinkPresentation::new(surgery, cross, link).unwrap()
}

#[test]
fn criterion_01_sphere_and_handle_invariants() {
    for k in 1..=5 {
        assert_eq!(rt(&[], k), CyclotomicNumber::one(), "sphere at k = {k}");
        assert_eq!(rt(&[vec![0]], k), sqrt(2 * k as u64), "handle product at k = {k}");
    }
    println!("criterion 01: PASS — sphere invariant 1 and handle-product invariant sqrt(2k), k = 1..5");
}

#[test]
fn criterion_02_determinant_five_lens_pair_at_k2() {
    let one_chart = lens_presentation(5, 1).unwrap();
    assert_eq!(one_chart, vec![vec![5]]);
    assert_eq!(rt(&one_chart, 2), CyclotomicNumber::from_integer(-1));
    let two_chart = lens_presentation(5, 2).unwrap();
    assert_eq!(rt(&two_chart, 2), CyclotomicNumber::one());
    println!("criterion 02: PASS — lens(5,1) gives -1 and lens(5,2) gives 1 at k = 2");
}

#[test]
fn criterion_03_conjugate_lens_pair_with_equal_homology() {
    let first = lens_presentation(9, 1).unwrap();
    let second = lens_presentation(9, 2).unwrap();
    let i_sqrt3 = imaginary_unit().mul(&sqrt(3));
    assert_eq!(rt(&first, 3), i_sqrt3);
    assert_eq!(rt(&second, 3), i_sqrt3.negate());
    assert_eq!(rt(&first, 3), rt(&second, 3).conjugate());
    let h1 = first_homology(&first).unwrap();
    let h2 = first_homology(&second).unwrap();
    assert_eq!(h1, h2);
    assert_eq!(h1.to_string(), "Z/9");
    assert_ne!(rt(&first, 3), rt(&second, 3));
    println!(
        "criterion 03: PASS — lens(9,1)/lens(9,2) give i*sqrt(3) and its conjugate over equal homology Z/9"
    );
}

#[test]
fn criterion_04_quadratic_residue_lens_pair_agrees() {
    let minus_i = imaginary_unit().negate();
    assert_eq!(rt(&lens_presentation(7, 1).unwrap(), 3), minus_i);
    assert_eq!(rt(&lens_presentation(7, 2).unwrap(), 3), minus_i);
    println!("criterion 04: PASS — lens(7,1) and lens(7,2) both give -i at k = 3");
}

#[test]
fn criterion_05_connected_sums_split_the_homotopy_classes() {
    let first = connected_sum(
        &lens_presentation(9, 1).unwrap(),
        &lens_presentation(7, 1).unwrap(),
    );
    let second = connected_sum(
        &lens_presentation(9, 2).unwrap(),
        &lens_presentation(7, 2).unwrap(),
    );
    assert_eq!(rt(&first, 3), sqrt(3));
    assert_eq!(rt(&second, 3), sqrt(3).negate());
    println!("criterion 05: PASS — the two lens connected sums give sqrt(3) and -sqrt(3) at k = 3");
}

#[test]
fn criterion_06_single_chart_lens_closed_form() {
    for p in 2..=12 {
        for k in 1..=4 {
            let closed = lens_closed_form(p, coupling(k)).unwrap();
            assert_eq!(
                rt(&[vec![p]], k),
                closed.value().clone(),
                "closed form mismatch at p = {p}, k = {k}"
            );
        }
    }
    println!("criterion 06: PASS — surgery invariant equals the lens closed form for p = 2..12, k = 1..4");
}

#[test]
fn criterion_07_circle_bundle_powers() {
    for g in 0..=2usize {
        let b = genus_times_circle(g);
        assert_eq!(b.len(), 2 * g + 1);
        for k in 1..=3 {
            let expected = sqrt(2 * k as u64).pow((2 * g + 1) as i64);
            assert_eq!(rt(&b, k), expected, "g = {g}, k = {k}");
        }
    }
    println!("criterion 07: PASS — surface-times-circle invariant is (2k)^((2g+1)/2) for g = 0..2, k = 1..3");
}

#[test]
fn criterion_08_homology_spheres_have_unit_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..200 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=4);
        let b = random_diagonal_signs(&mut rng, n);
        assert_eq!(rt(&b, k), CyclotomicNumber::one(), "case {case}: n = {n}, k = {k}");
    }
    println!("criterion 08: PASS — 200 random split +-1 presentations all give invariant 1");
}

#[test]
fn criterion_09_split_closed_form_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..200 {
        let ns = rng.gen_range(1..=3);
        let nl = rng.gen_range(1..=3);
        let k = coupling(rng.gen_range(1..=3));
        let surgery = random_diagonal_signs(&mut rng, ns);
        let p = random_presentation(&mut rng, surgery, nl, 3);
        assert_eq!(
            observable_split_homology_sphere(&p, k).unwrap(),
            observable_surgery(&p, k).unwrap(),
            "case {case}"
        );
    }
    println!("criterion 09: PASS — closed form equals colour enumeration on 200 random split presentations");
}

#[test]
fn criterion_10_move_sequences_change_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..500 {
        let ns = rng.gen_range(1..=4);
        let nl = rng.gen_range(1..=2);
        let k = coupling(rng.gen_range(1..=3));
        let surgery = random_symmetric(&mut rng, ns, 3);
        let p = random_presentation(&mut rng, surgery, nl, 2);
        let length = rng.gen_range(0..=8);
        let seed = rng.gen();
        let cert = certify_random_moves(&p, k, length, seed, 4).unwrap();
        assert!(
            cert.passed(),
            "case {case}: moves {:?} changed an invariant",
            cert.moves
        );
    }
    println!("criterion 10: PASS — 500 random move sequences left every invariant and observable fixed");
}

#[test]
fn criterion_11_structural_invariances_of_the_observable() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    // satellite equality, in the sphere and through surgery
    for _ in 0..200 {
        let ns = rng.gen_range(0..=2);
        let nl = rng.gen_range(1..=3);
        let k = coupling(rng.gen_range(1..=4));
        let surgery = random_symmetric(&mut rng, ns, 3);
        let p = random_presentation(&mut rng, surgery, nl, 3);
        let satellite = p.simplicial_satellite();
        assert_eq!(
            observable_surgery(&satellite, k).unwrap(),
            observable_surgery(&p, k).unwrap()
        );
        assert_eq!(
            observable_s3(&p.link().simplicial_satellite(), k),
            observable_s3(p.link(), k)
        );
    }

    // band sums of same-coloured components, and the equivalent knot
    for _ in 0..200 {
        let nl = rng.gen_range(2..=4);
        let k = coupling(rng.gen_range(1..=4));
        let matrix = random_symmetric(&mut rng, nl, 4);
        let mut colours: Vec<i64> = (0..nl).map(|_| rng.gen_range(-3..=3)).collect();
        let i = rng.gen_range(0..nl);
        let j = (i + rng.gen_range(1..nl)) % nl;
        colours[j] = colours[i];
        let link = ColouredLinkingData::new(matrix, colours).unwrap();
        let summed = link.sum_components(i, j).unwrap();
        assert_eq!(observable_s3(&summed, k), observable_s3(&link, k));
        let folded = CyclotomicNumber::root_of_unity(k.four_k() as u64, -link.equivalent_knot());
        assert_eq!(observable_s3(&link, k).value().unwrap(), &folded);
    }

    // colour periodicity mod 2k
    for _ in 0..200 {
        let ns = rng.gen_range(0..=3);
        let nl = rng.gen_range(1..=3);
        let k = coupling(rng.gen_range(1..=4));
        let surgery = random_symmetric(&mut rng, ns, 3);
        let p = random_presentation(&mut rng, surgery, nl, 3);
        let component = rng.gen_range(0..nl);
        let mut colours = p.link().colours().to_vec();
        colours[component] += if rng.gen() { k.two_k() } else { -k.two_k() };
        let shifted = AmbientLinkPresentation::new(
            p.surgery_matrix().to_vec(),
            p.cross_matrix().to_vec(),
            ColouredLinkingData::new(p.link().matrix().to_vec(), colours).unwrap(),
        )
        .unwrap();
        assert_eq!(
            observable_surgery(&shifted, k).unwrap(),
            observable_surgery(&p, k).unwrap()
        );
    }

    // a split zero-framed unknot never changes the observable
    for _ in 0..200 {
        let ns = rng.gen_range(0..=3);
        let nl = rng.gen_range(1..=2);
        let k = coupling(rng.gen_range(1..=4));
        let surgery = random_symmetric(&mut rng, ns, 3);
        let p = random_presentation(&mut rng, surgery, nl, 3);
        let colour = rng.gen_range(-3..=3);
        match unknot_union_check(&p, colour, k) {
            Ok(equal) => assert!(equal),
            Err(linkhom::Error::UndefinedObservable) => {}
            Err(e) => panic!("unexpected error: {e}"),
        }
    }

    println!("criterion 11: PASS — satellite, band-sum, colour-periodicity and unknot-union equalities on 200 instances each");
}

#[test]
fn criterion_12_vanishing_controlled_by_the_cross_charge() {
    for k in 1..=3i64 {
        let coupling = coupling(k);
        for t in 0..=4 * k {
            let link = ColouredLinkingData::new(vec![vec![0]], vec![1]).unwrap();
            let p =
                AmbientLinkPresentation::new(vec![vec![0]], vec![vec![t]], link).unwrap();
            let value = observable_surgery(&p, coupling).unwrap();
            let v = value.value().expect("defined for the zero-framed handle");
            if t % (2 * k) == 0 {
                assert_eq!(v, &CyclotomicNumber::one(), "t = {t}, k = {k}");
            } else {
                assert!(v.is_zero(), "t = {t}, k = {k}");
            }
        }
    }
    println!("criterion 12: PASS — zero-framed handle observable vanishes exactly off the 2k-divisible charges");
}

#[test]
fn criterion_13_pushed_links_reproduce_the_observable() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut verified = 0;
    let mut attempts = 0;
    while verified < 100 {
        attempts += 1;
        assert!(attempts < 3000, "witness yield too low: {verified} in {attempts}");
        let ns = rng.gen_range(1..=3);
        let nl = rng.gen_range(1..=2);
        let k = coupling(rng.gen_range(1..=3));
        let surgery = random_symmetric(&mut rng, ns, 3);
        let p = random_presentation(&mut rng, surgery, nl, 2);
        let Ok(pushed) = push_to_sphere(&p, k) else {
            continue; // no witness: the class is not trivial mod 2k
        };
        let through_surgery = observable_surgery(&p, k).unwrap();
        if !through_surgery.is_defined() {
            continue;
        }
        assert_eq!(
            observable_s3(&pushed, k).value().unwrap(),
            through_surgery.value().unwrap()
        );
        verified += 1;
    }
    println!("criterion 13: PASS — 100 homologically trivial presentations evaluate identically after the push");
}

#[test]
fn criterion_14_subgroup_consistency_across_the_catalog() {
    let mut catalog: Vec<Vec<Vec<i64>>> = vec![vec![], genus_times_circle(0), genus_times_circle(1)];
    for p in 2..=12 {
        catalog.push(lens_presentation(p, 1).unwrap());
    }
    for (p, r) in [(5, 2), (7, 2), (9, 2), (8, 3), (11, 4), (12, 5)] {
        catalog.push(lens_presentation(p, r).unwrap());
    }
    catalog.push(connected_sum(
        &lens_presentation(9, 1).unwrap(),
        &lens_presentation(7, 1).unwrap(),
    ));
    catalog.push(connected_sum(
        &lens_presentation(9, 2).unwrap(),
        &lens_presentation(7, 2).unwrap(),
    ));
    for b in &catalog {
        for k in 1..=4 {
            let full = subgroup_invariant(b, coupling(k), 2 * k).unwrap();
            assert_eq!(full.value(), &rt(b, k), "full subgroup at k = {k}");
            let trivial = subgroup_invariant(b, coupling(k), 1).unwrap();
            assert_eq!(trivial.value(), &CyclotomicNumber::one(), "trivial subgroup at k = {k}");
        }
    }
    println!("criterion 14: PASS — order-2k subgroup equals the invariant and order-1 equals 1 on the catalog");
}

#[test]
fn criterion_15_gauss_sum_reciprocity() {
    let mut checked = 0;
    for a in -6i64..=6 {
        for c in -6i64..=6 {
            if a == 0 || c == 0 {
                continue;
            }
            for b in -8i64..=8 {
                if (a * c + b) % 2 != 0 {
                    continue;
                }
                assert!(
                    reciprocity_check(a, b, c).unwrap(),
                    "reciprocity failed at a = {a}, b = {b}, c = {c}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 1000, "only {checked} triples checked");
    println!("criterion 15: PASS — reciprocity identity verified exactly on {checked} parameter triples");
}
