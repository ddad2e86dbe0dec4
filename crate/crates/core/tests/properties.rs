use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

use tauhurwitz::characters::CharacterTable;
use tauhurwitz::hurwitz::{parity_forbids, pure_hurwitz_bruteforce, weighted_hurwitz_direct, ProfileTuple};
use tauhurwitz::matrix::{tau_at_x_determinant, tau_at_x_levels, tau_at_x_wronskian, DiagonalMatrix};
use tauhurwitz::meijer::{mellin_barnes_phi, ContourSpec};
use tauhurwitz::partition::{contents, enumerate_partitions, hook_product, z_order, Partition};
use tauhurwitz::rational::{factorial, format_rational, parse_rational, pow, rat};
use tauhurwitz::spectral::{phi_series, pochhammer_coefficient};
use tauhurwitz::tau::{extract_weighted_hurwitz, r_value, rho_value};
use tauhurwitz::{Rational, WeightData};

fn partition_of(n: usize) -> impl Strategy<Value = Partition> {
    let parts = enumerate_partitions(n).unwrap();
    (0..parts.len()).prop_map(move |i| parts[i].clone())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (1i64..9, 1i64..9, any::<bool>()).prop_map(|(p, q, neg)| rat(if neg { -p } else { p }, q))
}

fn weights() -> impl Strategy<Value = WeightData> {
    (
        proptest::collection::vec(small_rational(), 0..3),
        proptest::collection::vec(small_rational(), 0..2),
    )
        .prop_filter_map("poles on the lattice", |(c, d)| WeightData::new(c, d, rat(4, 7)).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn column_orthogonality(n in 1usize..=6, i in 0usize..11, j in 0usize..11) {
        let t = CharacterTable::new(n).unwrap();
        let (i, j) = (i % t.partitions.len(), j % t.partitions.len());
        let sum: BigInt = (0..t.partitions.len()).map(|l| &t.chi[l][i] * &t.chi[l][j]).sum();
        let expect = if i == j { t.z[i].clone() } else { BigInt::zero() };
        prop_assert_eq!(sum, expect);
    }

    #[test]
    fn dimension_is_hook_formula(lam in (1usize..=6).prop_flat_map(partition_of)) {
        let n = lam.weight();
        let t = CharacterTable::new(n).unwrap();
        let li = t.index_of(&lam).unwrap();
        let id = t.index_of(&Partition::identity_class(n)).unwrap();
        prop_assert_eq!(&t.chi[li][id] * hook_product(&lam), factorial(n as u64));
    }

    #[test]
    fn class_sizes_sum_to_group_order(n in 1usize..=8) {
        let total: Rational = enumerate_partitions(n)
            .unwrap()
            .iter()
            .map(|mu| Rational::from_integer(factorial(n as u64)) / Rational::from_integer(z_order(mu)))
            .sum();
        prop_assert_eq!(total, Rational::from_integer(factorial(n as u64)));
    }

    #[test]
    fn contents_count_and_conjugate(lam in (1usize..=9).prop_flat_map(partition_of)) {
        let c = contents(&lam);
        prop_assert_eq!(c.len(), lam.weight());
        let mut neg: Vec<i64> = c.iter().map(|x| -x).collect();
        let mut conj = contents(&lam.conjugate());
        neg.sort();
        conj.sort();
        prop_assert_eq!(neg, conj);
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hurwitz_symmetric_under_reordering(
        tuple in (2usize..=4).prop_flat_map(|n| proptest::collection::vec(partition_of(n), 2..=3)),
        seed in any::<u64>(),
    ) {
        let base = pure_hurwitz_bruteforce(&ProfileTuple::new(tuple.clone()).unwrap()).unwrap();
        let mut shuffled = tuple.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.swap(0, len - 1);
        prop_assert_eq!(pure_hurwitz_bruteforce(&ProfileTuple::new(shuffled).unwrap()).unwrap(), base);
    }

    #[test]
    fn identity_profile_is_neutral(tuple in (2usize..=4).prop_flat_map(|n| proptest::collection::vec(partition_of(n), 1..=2))) {
        let n = tuple[0].weight();
        let base = pure_hurwitz_bruteforce(&ProfileTuple::new(tuple.clone()).unwrap()).unwrap();
        let mut padded = tuple.clone();
        padded.push(Partition::identity_class(n));
        prop_assert_eq!(pure_hurwitz_bruteforce(&ProfileTuple::new(padded).unwrap()).unwrap(), base);
    }

    #[test]
    fn weighted_hurwitz_is_homogeneous(
        w in weights(),
        t in small_rational(),
        mu in (1usize..=4).prop_flat_map(partition_of),
        d in 0usize..=3,
    ) {
        let scaled: Option<WeightData> = WeightData::new(
            w.c().iter().map(|c| c * &t).collect(),
            w.d().iter().map(|x| x * &t).collect(),
            w.beta().clone(),
        ).ok();
        prop_assume!(scaled.is_some());
        let a = weighted_hurwitz_direct(&w, d, &mu).unwrap();
        let b = weighted_hurwitz_direct(&scaled.unwrap(), d, &mu).unwrap();
        prop_assert_eq!(b, a * pow(&t, d as i64));
    }

    #[test]
    fn r_times_rho_is_next_rho(w in weights(), i in -8i64..=8) {
        let order = 10;
        let lhs = &r_value(&w, i, order).unwrap() * &rho_value(&w, i - 1, order).unwrap();
        let rhs = rho_value(&w, i, order).unwrap();
        for e in lhs.start().max(rhs.start())..=lhs.order().min(rhs.order()) {
            prop_assert_eq!(lhs.coefficient(e).unwrap(), rhs.coefficient(e).unwrap());
        }
    }

    #[test]
    fn extraction_does_not_depend_on_beta(
        w in weights(),
        mu in (1usize..=3).prop_flat_map(partition_of),
        d in 0usize..=3,
        p in 1i64..20,
        q in 1i64..20,
    ) {
        let other = w.with_beta(rat(p, q + 20));
        prop_assume!(other.is_ok());
        prop_assert_eq!(
            extract_weighted_hurwitz(&w, d, &mu).unwrap(),
            extract_weighted_hurwitz(&other.unwrap(), d, &mu).unwrap()
        );
    }

    #[test]
    fn parity_zeros(w in weights(), mu in (1usize..=4).prop_flat_map(partition_of), d in 0usize..=3) {
        if parity_forbids(&mu, d) {
            prop_assert!(extract_weighted_hurwitz(&w, d, &mu).unwrap().is_zero());
        }
    }

    #[test]
    fn hypergeometric_coefficients_match_recursion(w in weights(), k in -3i64..=5, j in 0usize..12) {
        let phi = phi_series(&w, k, 12).unwrap();
        prop_assert_eq!(pochhammer_coefficient(&w, k, j).unwrap(), phi.coefficients[j].clone());
    }

    #[test]
    fn scale_covariance(
        xs in proptest::collection::vec((-9i64..=9).prop_filter("nonzero", |v| *v != 0), 1..=3),
        t in small_rational(),
    ) {
        let w = WeightData::new(vec![rat(1, 2)], vec![rat(1, 5)], rat(4, 7)).unwrap();
        let x: Vec<Rational> = xs.iter().map(|&v| rat(v, 100)).collect();
        let scaled: Vec<Rational> = x.iter().map(|v| v * &t).collect();
        let a = tau_at_x_levels(&w, &x, 5).unwrap();
        let b = tau_at_x_levels(&w, &scaled, 5).unwrap();
        for (n, (la, lb)) in a.iter().zip(&b).enumerate() {
            prop_assert_eq!(lb.clone(), la * pow(&t, n as i64));
        }
        prop_assert!(a[0].is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn determinant_equals_wronskian(
        xs in proptest::collection::btree_set(-10i64..=10, 2..=3),
        cfg in 0usize..4,
    ) {
        let xs: Vec<f64> = xs.into_iter().filter(|v| *v != 0).map(|v| v as f64 / 100.0).collect();
        prop_assume!(xs.len() >= 2);
        let w = [
            WeightData::new(vec![], vec![], rat(4, 7)),
            WeightData::new(vec![rat(1, 2)], vec![], rat(4, 7)),
            WeightData::new(vec![], vec![rat(1, 5)], rat(4, 7)),
            WeightData::new(vec![rat(1, 2)], vec![rat(1, 5)], rat(4, 7)),
        ][cfg].clone().unwrap();
        let x = DiagonalMatrix::new(xs).unwrap();
        let d = tau_at_x_determinant(&w, &x, 25).unwrap();
        let wr = tau_at_x_wronskian(&w, &x, 25).unwrap();
        prop_assert!((d - wr).abs() <= 1e-9 * wr.abs());
    }

    #[test]
    fn contour_shift_invariance(re in -1.5f64..1.5, im in -1.5f64..1.5, shift in prop_oneof![Just(-0.2), Just(0.2)]) {
        prop_assume!(re.hypot(im) > 0.1);
        let w = WeightData::new(vec![rat(1, 2), rat(1, 3), rat(1, 5)], vec![], rat(4, 7)).unwrap();
        let x = Complex64::new(re, im);
        let spec = ContourSpec::default();
        let base = mellin_barnes_phi(&w, 1, x, &spec);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let moved = ContourSpec { sigma: Some(base.sigma + shift), ..spec };
        let v = mellin_barnes_phi(&w, 1, x, &moved).unwrap();
        prop_assert!((v.value - base.value).norm() <= 1e-9 * base.value.norm());
    }
}
