use nalgebra::DMatrix;
use num_complex::Complex64;
use opball::ball::{midpoint, mobius_apply, rho};
use opball::cli::{self, matrix_to_json, Overrides};
use opball::fixtures::{random_ball_point, random_junitary, Seed};
use opball::indefinite::{symplectic_apply, Signature};
use opball::matfun::{max_abs, polar, psd_func, PsdFn};
use opball::BallPoint;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 1usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_moves_origin_to_a((n, k) in dims(), seed in any::<u64>(), r in 0.05f64..0.99) {
        let a = random_ball_point::<Complex64>(n, k, r, Seed(seed));
        let image = mobius_apply(&a, &BallPoint::zero(n, k)).unwrap();
        prop_assert!(max_abs(&(image.matrix() - a.matrix())) <= 1e-12);
    }

    #[test]
    fn junitaries_are_isometries((n, k) in dims(), seed in any::<u64>()) {
        let sig = Signature::new(n, k).unwrap();
        let u = random_junitary::<f64>(sig, Seed(seed));
        let x = random_ball_point::<f64>(n, k, 0.8, Seed(seed).derive(1));
        let y = random_ball_point::<f64>(n, k, 0.8, Seed(seed).derive(2));
        let d = rho(&x, &y).unwrap();
        let d2 = rho(&symplectic_apply(&u, &x).unwrap(), &symplectic_apply(&u, &y).unwrap()).unwrap();
        prop_assert!((d - d2).abs() <= 1e-8 * (1.0 + d));
    }

    #[test]
    fn midpoint_is_symmetric((n, k) in dims(), seed in any::<u64>()) {
        let a = random_ball_point::<Complex64>(n, k, 0.9, Seed(seed));
        let b = random_ball_point::<Complex64>(n, k, 0.9, Seed(seed).derive(1));
        let m1 = midpoint(&a, &b).unwrap();
        let m2 = midpoint(&b, &a).unwrap();
        prop_assert!(rho(&m1, &m2).unwrap() <= 1e-9);
    }

    #[test]
    fn polar_reconstructs(rows in 1usize..6, extra in 0usize..3, seed in any::<u64>()) {
        let m = random_ball_point::<f64>(rows + extra, rows, 0.9, Seed(seed)).into_matrix();
        let p = polar(&m).unwrap();
        prop_assert!(max_abs(&(&p.isometry * &p.positive - &m)) <= 1e-12);
        let sq = psd_func(&p.positive, PsdFn::Sqrt).unwrap();
        prop_assert!(max_abs(&(&sq * &sq - &p.positive)) <= 1e-12);
    }

    #[test]
    fn emitted_matrices_parse_back((n, k) in dims(), seed in any::<u64>()) {
        let a = random_ball_point::<Complex64>(n, k, 0.9, Seed(seed));
        let doc = serde_json::json!({"field": "complex", "n": n, "k": k, "mode": "metric",
                                     "payload": {"A": matrix_to_json(a.matrix()), "B": matrix_to_json(a.matrix())}});
        let input = cli::parse_input(doc.to_string().as_bytes(), &Overrides::default()).unwrap();
        match input.payload {
            cli::Payload::Metric { a: parsed, .. } => {
                let back: DMatrix<Complex64> = parsed;
                prop_assert_eq!(&back, a.matrix());
            }
            _ => prop_assert!(false),
        }
    }
}
