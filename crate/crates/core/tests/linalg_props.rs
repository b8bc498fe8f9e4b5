use faer::Mat;
use majorana_chain::linalg::{canonical_form, orthogonality_residual, pfaffian, pfaffian_log, AntisymmetricMatrix};
use majorana_chain::random::special_orthogonal;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_antisymmetric(n: usize, seed: u64) -> AntisymmetricMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper: Vec<f64> = (0..n * n.saturating_sub(1) / 2).map(|_| rng.random_range(-1.0..1.0)).collect();
    AntisymmetricMatrix::from_upper(n, &upper).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pfaffian_squared_is_determinant(n in 1usize..24, seed in any::<u64>()) {
        let a = random_antisymmetric(n, seed);
        let pf = pfaffian(&a);
        let det = a.as_mat().determinant();
        if n % 2 == 1 {
            prop_assert_eq!(pf, 0.0);
            // exactly singular; rounding scales with the other singular values
            let s = a.as_mat().singular_values().unwrap();
            let scale: f64 = s[..n - 1].iter().product();
            prop_assert!(det.abs() < 1e-10 * scale.max(1.0));
        } else {
            prop_assert!(close(pf * pf, det, 1e-9), "n={n} pf^2={} det={det}", pf * pf);
        }
    }

    #[test]
    fn pfaffian_is_covariant_under_congruence(n in 1usize..8, seed in any::<u64>(), flip in any::<bool>()) {
        let a = random_antisymmetric(2 * n, seed);
        let mut o = special_orthogonal(2 * n, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        if flip {
            for i in 0..2 * n {
                o[(i, 0)] = -o[(i, 0)];
            }
        }
        let det_o = o.determinant();
        let rotated = a.congruence(&o).unwrap();
        prop_assert!((pfaffian(&rotated) - det_o * pfaffian(&a)).abs() < 1e-10 * (1.0 + pfaffian(&a).abs()));
    }

    #[test]
    fn canonical_values_are_the_singular_values(n in 1usize..16, seed in any::<u64>()) {
        // a normal matrix: |eigenvalues| = singular values, each l_k twice
        let a = random_antisymmetric(n, seed);
        let cf = canonical_form(&a).unwrap();
        prop_assert!(orthogonality_residual(&cf.orthogonal) < 1e-10);
        let s = a.as_mat().singular_values().unwrap();
        for (k, &l) in cf.values.iter().enumerate() {
            prop_assert!((l - s[2 * k]).abs() < 1e-10 && (l - s[2 * k + 1]).abs() < 1e-10);
        }
        let back = cf.reconstruct();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((back.get(i, j) - a.get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn log_form_matches_direct_value(n in 1usize..20, seed in any::<u64>()) {
        let a = random_antisymmetric(2 * n, seed);
        let lp = pfaffian_log(&a);
        prop_assert!(close(lp.value(), pfaffian(&a), 1e-10));
    }
}

#[test]
fn block_diagonal_pfaffian_is_the_product() {
    let d = Mat::<f64>::from_fn(6, 6, |i, j| match (i, j) {
        (0, 1) => 2.0,
        (1, 0) => -2.0,
        (2, 3) => -3.0,
        (3, 2) => 3.0,
        (4, 5) => 0.5,
        (5, 4) => -0.5,
        _ => 0.0,
    });
    let a = AntisymmetricMatrix::new(d).unwrap();
    assert!((pfaffian(&a) + 3.0).abs() <= 4.0 * f64::EPSILON);
}
