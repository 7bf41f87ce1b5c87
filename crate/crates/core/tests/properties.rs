use filiform_ricci::algebra::DerivationMatrix;
use filiform_ricci::catalog::{make_ln, make_qn, qn_diagonal_derivation, qn_eigenvalues};
use filiform_ricci::construct::{cone_vectors_qn, ConeProblem};
use filiform_ricci::criterion::{
    decide_qn, iota_qn, solve_system18_default, trace_from_tail, trace_t, z_closed_forms, IotaProfile,
};
use filiform_ricci::linalg::{dot, qf, QMatrix, Rational};
use filiform_ricci::ricci::{descending_frame, ricci_in_frame, ricci_operator_general, sample_gram, ExtensionMetric};
use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn even_n() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![6usize, 8, 10, 12])
}

fn rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=8).prop_map(|(p, d)| qf(p, d))
}

fn nonzero_pair() -> impl Strategy<Value = (Rational, Rational)> {
    (rat(), rat()).prop_filter("a = d = 0 is nilpotent", |(a, d)| !(a.is_zero() && d.is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn answer_is_sign_symmetric(n in even_n(), (a, d) in nonzero_pair()) {
        let plus = decide_qn(n, &a, &d).unwrap();
        let minus = decide_qn(n, &-a.clone(), &-d.clone()).unwrap();
        prop_assert_eq!(plus.answer, minus.answer);
        if plus.answer {
            prop_assert_ne!(plus.sign_flipped, minus.sign_flipped);
        }
    }

    #[test]
    fn iota_is_tail_sum_and_closed_form(n in even_n(), a in rat(), d in rat()) {
        let lambda = qn_eigenvalues(n, &a, &d);
        for k in 3..=n {
            let tail: Rational = lambda[k - 1..].iter().sum();
            let iota = iota_qn(n, &a, &d, k).unwrap();
            prop_assert_eq!(&iota, &tail);
            let (ni, ki) = (n as i64, k as i64);
            let closed = qf((ni - 3) * ni - (ki - 3) * (ki - 2), 2) * &a + qf(ni - ki + 2, 1) * &d;
            prop_assert_eq!(iota, closed);
        }
        prop_assert_eq!(trace_t(n, &a, &d), lambda.iter().sum::<Rational>());
    }

    #[test]
    fn trace_from_last_two_iotas(n in even_n(), a in rat(), d in rat()) {
        let t = trace_from_tail(n, &iota_qn(n, &a, &d, n - 1).unwrap(), &iota_qn(n, &a, &d, n).unwrap());
        prop_assert_eq!(t, trace_t(n, &a, &d));
    }

    #[test]
    fn yes_means_every_iota_positive(n in even_n(), (a, d) in nonzero_pair()) {
        let dec = decide_qn(n, &a, &d).unwrap();
        let s = if dec.sign_flipped { qf(-1, 1) } else { qf(1, 1) };
        let profile = IotaProfile::new(n, &(&s * &a), &(&s * &d)).unwrap();
        let all = (3..=n).all(|k| profile.get(k).is_positive());
        let flipped = IotaProfile::new(n, &-(&s * &a), &-(&s * &d)).unwrap();
        let all_flipped = (3..=n).all(|k| flipped.get(k).is_positive());
        prop_assert_eq!(dec.answer, all || all_flipped);
    }

    #[test]
    fn torus_is_orthogonal_to_bracket_vectors(n in even_n()) {
        let cone = cone_vectors_qn(n).unwrap();
        for f in &cone.f {
            prop_assert!(dot(f, &cone.v1).is_zero());
            prop_assert!(dot(f, &cone.v2).is_zero());
        }
    }

    #[test]
    fn system18_reconstructs_the_eigenvalues(n in even_n(), (a, d) in nonzero_pair()) {
        prop_assume!(decide_qn(n, &a, &d).unwrap().answer && !decide_qn(n, &a, &d).unwrap().sign_flipped);
        let sol = solve_system18_default(n, &a, &d).unwrap();
        let cone = cone_vectors_qn(n).unwrap();
        let mut sum = vec![Rational::zero(); n];
        for (c, v) in sol.w.iter().chain(&sol.y).zip(&cone.f) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += c * x;
            }
        }
        sum[0] += &sol.z1;
        sum[1] += &sol.z2;
        prop_assert_eq!(sum, qn_eigenvalues(n, &a, &d));
        prop_assert_eq!((sol.z1, sol.z2), z_closed_forms(n, &a, &d).unwrap());
    }

    #[test]
    fn change_of_basis_round_trips(n in 3usize..9, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = make_ln(n).unwrap();
        let mut p = QMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                p[(i, j)] = qf(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            }
            p[(i, i)] = qf(rng.gen_range(1..=4), 1);
        }
        let back = alg.change_basis(&p).unwrap().change_basis(&p.inverse().unwrap()).unwrap();
        prop_assert_eq!(back, alg);
    }

    #[test]
    fn ricci_does_not_depend_on_the_frame(seed in any::<u64>(), angle in 0.0f64..std::f64::consts::TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nil = make_qn(6).unwrap();
        let der: DerivationMatrix = qn_diagonal_derivation(6, &qf(1, 1), &qf(-1, 2)).unwrap();
        let ext = ExtensionMetric::new(nil, der, sample_gram(6, &mut rng)).unwrap();
        let m = ext.flattened();
        let c = descending_frame(m.gram()).unwrap();
        let mut rot = DMatrix::<f64>::identity(7, 7);
        rot[(0, 0)] = angle.cos();
        rot[(0, 3)] = -angle.sin();
        rot[(3, 0)] = angle.sin();
        rot[(3, 3)] = angle.cos();
        let ric = ricci_operator_general(&m).unwrap();
        let rotated = ricci_in_frame(&m, &(&c * &rot)).unwrap();
        let expected = rot.transpose() * &ric * &rot;
        prop_assert!((rotated - &expected).abs().max() <= 1e-9 * ric.abs().max().max(1.0));
    }

    #[test]
    fn potential_gradient_matches_finite_differences(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = cone_vectors_qn(6).unwrap().f;
        let target = DVector::from_fn(6, |_, _| rng.gen_range(-2.0..2.0));
        let problem = ConeProblem::from_f_vectors(&f, target).unwrap();
        let x = DVector::from_fn(6, |_, _| rng.gen_range(-1.0..1.0));
        let g = problem.gradient(&x);
        let h = 1e-6;
        for i in 0..6 {
            let mut e = DVector::zeros(6);
            e[i] = h;
            let fd = (problem.potential(&(&x + &e)) - problem.potential(&(&x - &e))) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() < 1e-6 * g[i].abs().max(1.0), "{fd} vs {}", g[i]);
        }
    }
}
