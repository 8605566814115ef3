use edgedom_core::cone::{assemble_domain, numerical_rank, projection::max_abs_diff, AsymptoticType, ConeOperator};
use edgedom_core::edge::{
    edge_conormal, edge_domain_sample, fixtures, kappa_matrix, principal_edge_conormal, EtaSample,
};
use edgedom_core::oracle::apply_cone_jet;
use edgedom_core::spec::{Operator, OperatorSpec};
use edgedom_core::tolerance::Tolerances;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_op(seed: u64, mu: usize) -> ConeOperator {
    ConeOperator::random(&mut ChaCha8Rng::seed_from_u64(seed), mu, 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cone_pipeline_invariants(seed in any::<u64>(), mu in 1usize..=4) {
        let op = random_op(seed, mu);
        let dd = assemble_domain(&op, &Tolerances::default()).unwrap();
        prop_assert!(dd.recursion_residual <= 1e-9);
        for p in &dd.poles {
            prop_assert_eq!(p.hat_basis.len(), p.pole.n_sigma + 1);
            prop_assert_eq!(p.basis.len(), p.pole.n_sigma + 1);
            prop_assert!(p.pole.sigma.re > 0.5 - mu as f64 && p.pole.sigma.re < 0.5);
            // theta restricts to the leading level and inverts theta_inv
            for h in &p.hat_basis {
                let back = p.theta(&p.theta_inv(h).unwrap());
                prop_assert!(back.add(&h.scaled(Complex64::new(-1.0, 0.0))).max_abs() < 1e-12);
            }
        }
        let proj = dd.projection(None).unwrap();
        let q = &proj.q;
        prop_assert!(max_abs_diff(&(q * q), q) <= 1e-10);
        prop_assert_eq!(numerical_rank(q, 1e-9), dd.dim());
        for e in dd.basis() {
            let v = proj.s.to_vector(&e).unwrap();
            prop_assert!((q * &v - &v).iter().all(|c| c.norm() <= 1e-10));
            let applied = apply_cone_jet(&op, &e).asymptotic;
            let scale = applied.max_abs().max(e.max_abs());
            prop_assert!(applied.terms().iter().filter(|t| t.p.re >= 0.5).all(|t| t.c.norm() <= 1e-9 * scale));
        }
    }

    #[test]
    fn spec_round_trip(seed in any::<u64>(), mu in 1usize..=4) {
        let op = random_op(seed, mu);
        let spec = OperatorSpec::from_cone(&op);
        let back = OperatorSpec::from_toml(&spec.to_toml().unwrap()).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.build().unwrap(), Operator::Cone(op));
    }

    #[test]
    fn kappa_group_law(a in 0.05f64..20.0, b in 0.05f64..20.0, re in -3.0f64..0.5, im in -1.0f64..1.0, n in 0usize..3) {
        let s = AsymptoticType::new([(Complex64::new(re, im), n), (Complex64::new(re - 1.0, im), n + 1)]);
        let ab = &kappa_matrix(a, &s).matrix * &kappa_matrix(b, &s).matrix;
        let direct = kappa_matrix(a * b, &s).matrix;
        let scale = direct.iter().map(|c| c.norm()).fold(1.0, f64::max);
        prop_assert!(max_abs_diff(&ab, &direct) <= 1e-10 * scale);
    }

    #[test]
    fn edge_symbols_and_projection(x in -5.0f64..5.0, y in -5.0f64..5.0, lambda in 1.0f64..50.0) {
        prop_assume!(x.hypot(y) >= 1.0);
        let eta = EtaSample::new(vec![x, y]).unwrap();
        let scaled = eta.scaled(lambda).unwrap();
        for op in [fixtures::fix_e(2), fixtures::fix_f(2), fixtures::fix_g(2)] {
            let f = edge_conormal(&op, &eta);
            let mu = op.mu() as i32;
            prop_assert!(f[0].max_abs_diff(&op.cone_symbol(0).scaled(Complex64::new(eta.bracket.powi(mu), 0.0))) < 1e-9);
            let a = principal_edge_conormal(&op, &eta);
            let b = principal_edge_conormal(&op, &scaled);
            for (p, q) in a.iter().zip(&b) {
                let expect = p.scaled(Complex64::new(lambda.powi(mu), 0.0));
                prop_assert!(expect.max_abs_diff(q) <= 1e-10 * (1.0 + expect.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)));
            }
            let s = edge_domain_sample(&op, &eta, &Tolerances::default(), None).unwrap();
            let p = &s.projection;
            let scale = p.iter().map(|c| c.norm()).fold(1.0, f64::max);
            prop_assert!(max_abs_diff(&(p * p), p) <= 1e-10 * scale);
            prop_assert!(s.k_slot_identity);
        }
    }
}
