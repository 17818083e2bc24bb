use golay3::arrays::{project, unproject, ProjectionSpec};
use golay3::construct::stacking_identities_hold;
use golay3::equivalence::{linear_offset, normalise, reverse_conjugate_member, reverse_dimension, OrbitEngine};
use golay3::theory::{alternating_periodic_sum, diff_roots_residue, residue_witness};
use golay3::{aperiodic_autocorrelation, cross_correlation, is_golay_triad, periodic_autocorrelation};
use golay3::{EisensteinInt, Triad, Z3Array};
use proptest::prelude::*;

fn eisenstein() -> impl Strategy<Value = EisensteinInt> {
    (-50i64..50, -50i64..50).prop_map(|(p, q)| EisensteinInt::new(p, q))
}

fn array_with_shape(max_rank: usize, max_extent: usize) -> impl Strategy<Value = Z3Array> {
    prop::collection::vec(1..=max_extent, 1..=max_rank).prop_flat_map(|shape| {
        let n: usize = shape.iter().product();
        prop::collection::vec(0u8..3, n).prop_map(move |d| Z3Array::new(shape.clone(), d).unwrap())
    })
}

fn sequence(max_len: usize) -> impl Strategy<Value = Z3Array> {
    prop::collection::vec(0u8..3, 1..=max_len).prop_map(|d| Z3Array::sequence(&d).unwrap())
}

fn same_shape_triple(max_rank: usize, max_extent: usize) -> impl Strategy<Value = [Z3Array; 3]> {
    prop::collection::vec(1..=max_extent, 1..=max_rank).prop_flat_map(|shape| {
        let n: usize = shape.iter().product();
        let member = move |shape: Vec<usize>| prop::collection::vec(0u8..3, n).prop_map(move |d| Z3Array::new(shape.clone(), d).unwrap());
        (member(shape.clone()), member(shape.clone()), member(shape)).prop_map(|(a, b, c)| [a, b, c])
    })
}

fn known_triads() -> Vec<Triad> {
    vec![
        Triad::sequences(&[0, 2, 0, 0, 2, 0], &[0, 1, 2, 2, 2, 1], &[0, 1, 1, 1, 0, 2]).unwrap(),
        Triad::from_digits(&[2, 3], [&[0, 0, 2, 2, 0, 0], &[0, 2, 2, 1, 2, 1], &[0, 1, 0, 1, 1, 2]]).unwrap(),
        Triad::sequences(&[0, 0, 0, 1, 0], &[0, 1, 2, 2, 1], &[0, 0, 2, 1, 2]).unwrap(),
    ]
}

proptest! {
    #[test]
    fn eisenstein_ring_laws(a in eisenstein(), b in eisenstein(), c in eisenstein()) {
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!((a * b).norm_squared(), a.norm_squared() * b.norm_squared());
        prop_assert_eq!(a * a.conj(), EisensteinInt::from_int(a.norm_squared()));
        prop_assert_eq!(a.rotate(1), a * EisensteinInt::OMEGA);
    }

    #[test]
    fn autocorrelation_is_conjugate_symmetric(a in array_with_shape(3, 4)) {
        let auto = aperiodic_autocorrelation(&a);
        let full = cross_correlation(&a, &a).unwrap();
        for u in full.all_shifts() {
            let neg: Vec<isize> = u.iter().map(|x| -x).collect();
            prop_assert_eq!(full.get(&u), full.get(&neg).conj());
            prop_assert_eq!(auto.get(&u), full.get(&u));
        }
        prop_assert_eq!(auto.get(&vec![0; a.rank()]), EisensteinInt::from_int(a.len() as i64));
    }

    #[test]
    fn periodic_is_folded_aperiodic(a in sequence(12)) {
        let s = a.len() as isize;
        let c = aperiodic_autocorrelation(&a);
        let r = periodic_autocorrelation(&a).unwrap();
        prop_assert_eq!(r[0], EisensteinInt::from_int(s as i64));
        for u in 1..s {
            prop_assert_eq!(r[u as usize], c.get(&[u]) + c.get(&[s - u]).conj());
        }
    }

    #[test]
    fn projection_identity(a in array_with_shape(3, 4).prop_filter("rank 2+", |a| a.rank() >= 2)) {
        let psi = project(&a, ProjectionSpec::new(0, 1)).unwrap();
        let cp = aperiodic_autocorrelation(&psi);
        let ca = aperiodic_autocorrelation(&a);
        let s1 = a.shape()[0] as isize;
        for u in cross_correlation(&a, &a).unwrap().all_shifts().into_iter().filter(|u| (0..s1).contains(&u[0])) {
            let mut joined = vec![u[0] + s1 * u[1]];
            joined.extend(&u[2..]);
            let mut wrapped = u.clone();
            wrapped[0] -= s1;
            wrapped[1] += 1;
            prop_assert_eq!(cp.get(&joined), ca.get(&u) + ca.get(&wrapped));
        }
    }

    #[test]
    fn unprojection_inverts_projection(a in array_with_shape(3, 4).prop_filter("rank 2+", |a| a.rank() >= 2)) {
        let psi = project(&a, ProjectionSpec::new(0, 1)).unwrap();
        prop_assert_eq!(unproject(&psi, 0, a.shape()[0]).unwrap(), a);
    }

    #[test]
    fn stacking_identities(t in same_shape_triple(2, 4)) {
        prop_assert!(stacking_identities_hold(&t[0], &t[1], &t[2]).unwrap());
    }

    #[test]
    fn alternating_sum_identity(half in 1usize..=6, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let n = 2 * half;
        let m: Vec<Vec<u8>> = (0..3).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
        let t = Triad::sequences(&m[0], &m[1], &m[2]).unwrap();
        let s = residue_witness(&t).unwrap().s;
        prop_assert_eq!(alternating_periodic_sum(&t).unwrap(), EisensteinInt::from_int(s));
    }

    #[test]
    fn diff_roots_random(y in prop::collection::vec(0u8..3, 1..=10), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let z: Vec<u8> = (0..y.len()).map(|_| rng.gen_range(0..3)).collect();
        let w = diff_roots_residue(&Z3Array::sequence(&y).unwrap(), &Z3Array::sequence(&z).unwrap()).unwrap();
        prop_assert_eq!(w.residue, if w.products_equal { 0 } else { 3 });
    }

    #[test]
    fn equivalence_preserves_golay(pick in 0usize..3, e in prop::collection::vec(0u8..3, 2), k in 0usize..2, which in 0usize..3) {
        let t = &known_triads()[pick];
        let e = &e[..t.rank()];
        let k = k % t.rank();
        let engine = OrbitEngine::new(t.shape());
        let rep = engine.representative(t).unwrap();
        for u in [
            linear_offset(t, e).unwrap(),
            reverse_dimension(t, k).unwrap(),
            reverse_conjugate_member(t, which).unwrap(),
            normalise(t),
        ] {
            prop_assert!(is_golay_triad(&u));
            prop_assert_eq!(engine.representative(&u).unwrap(), rep.clone());
        }
    }
}

#[test]
fn diff_roots_hundred_thousand_cases() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..100_000 {
        let n = rng.gen_range(1..=10);
        let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let z: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let w = diff_roots_residue(&Z3Array::sequence(&y).unwrap(), &Z3Array::sequence(&z).unwrap()).unwrap();
        assert_eq!(w.residue, if w.products_equal { 0 } else { 3 });
    }
}
