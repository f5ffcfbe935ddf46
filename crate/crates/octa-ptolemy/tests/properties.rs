//! Generative property tests for the algebraic invariants of the systems and
//! the special functions.

use num_complex::Complex64;
use proptest::prelude::*;

use octa_ptolemy::builtin;
use octa_ptolemy::diagram::parse_pd;
use octa_ptolemy::gluing::{build_t5_system, Assignment, Mode};
use octa_ptolemy::invariants::{cusp_shape, lambda_at};
use octa_ptolemy::ptolemy::sigma_at_crossing;
use octa_ptolemy::special::{bloch_wigner, dilog, principal_sqrt};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn nonzero_complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -3.0f64..3.0).prop_map(|(x, y)| c(x, y).exp())
}

fn disk_complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(x, y)| c(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn residual_scaling_invariance(scale in nonzero_complex()) {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let sys = build_t5_system(&d).unwrap();
        let a = builtin::trefoil_kink_solution();
        let b = a.scaled(scale);
        let r1 = sys.residuals(&a).unwrap();
        let r2 = sys.residuals(&b).unwrap();
        for (x, y) in r1.iter().zip(&r2) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn sigma_lambda_scaling_invariance(scale in nonzero_complex()) {
        let d = parse_pd(builtin::FIG8_PD).unwrap();
        let a = builtin::fig8_solution();
        let b = a.scaled(scale);
        for ci in 0..d.n() {
            prop_assert!((sigma_at_crossing(&d, ci, &a) - sigma_at_crossing(&d, ci, &b)).norm() < 1e-10);
            prop_assert!((lambda_at(&d, ci, &a) - lambda_at(&d, ci, &b)).norm() < 1e-10);
        }
    }

    #[test]
    fn euler_identity_at_random_points(values in proptest::collection::vec(nonzero_complex(), 6)) {
        let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
        let sys = build_t5_system(&d).unwrap();
        let pairs: Vec<(usize, Complex64)> =
            values.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
        let a = Assignment::from_pairs(Mode::W, &pairs);
        if sys.check_assignment(&a).is_ok() {
            for row in sys.log_derivatives(&a).unwrap() {
                let s: Complex64 = row.iter().sum();
                prop_assert!(s.norm() < 1e-10 * (1.0 + row.iter().map(|x| x.norm()).sum::<f64>()));
            }
        }
    }

    #[test]
    fn lambda_agreement_along_scaling_orbit(scale in nonzero_complex()) {
        // lambda and lambda' give the same cusp shape wherever both are defined
        let d = parse_pd(builtin::FIG8_PD).unwrap();
        let a = builtin::fig8_solution().scaled(scale);
        let cs = cusp_shape(&d, &a).unwrap();
        let s1: Complex64 = cs.lambda.iter().sum();
        let s2: Complex64 = cs.lambda_prime.iter().sum();
        prop_assert!((s1 - s2).norm() < 1e-9);
    }

    #[test]
    fn dilog_reflection(z in disk_complex(0.9)) {
        prop_assume!(z.norm() > 1e-3);
        prop_assume!((z - c(1.0, 0.0)).norm() > 0.05);
        let one = c(1.0, 0.0);
        let lhs = dilog(z) + dilog(one - z);
        let rhs = c(std::f64::consts::PI.powi(2) / 6.0, 0.0) - z.ln() * (one - z).ln();
        prop_assert!((lhs - rhs).norm() < 1e-11, "z = {z}: {lhs} vs {rhs}");
    }

    #[test]
    fn bloch_wigner_five_term(x in disk_complex(0.9), y in disk_complex(0.9)) {
        prop_assume!(x.norm() > 1e-3 && y.norm() > 1e-3);
        let one = c(1.0, 0.0);
        let xy = x * y;
        prop_assume!((one - xy).norm() > 0.05);
        prop_assume!((one - x).norm() > 1e-3 && (one - y).norm() > 1e-3);
        let d = |z: Complex64| bloch_wigner(z).unwrap_or(0.0);
        let sum = d(x) + d(y) + d((one - x) / (one - xy)) + d(one - xy) + d((one - y) / (one - xy));
        prop_assert!(sum.abs() < 1e-10, "five-term sum {sum}");
    }

    #[test]
    fn bloch_wigner_antisymmetry(z in disk_complex(3.0)) {
        prop_assume!(z.im.abs() > 1e-6);
        let a = bloch_wigner(z).unwrap();
        let b = bloch_wigner(z.conj()).unwrap();
        prop_assert!((a + b).abs() < 1e-13);
    }

    #[test]
    fn sqrt_squares_back(z in disk_complex(5.0)) {
        prop_assume!(z.norm() > 1e-6);
        let s = principal_sqrt(z);
        prop_assert!((s * s - z).norm() < 1e-15 * z.norm().max(1.0));
        let arg = s.arg();
        prop_assert!(-std::f64::consts::PI / 2.0 < arg && arg <= std::f64::consts::PI / 2.0 + 1e-15);
    }

    #[test]
    fn pd_roundtrip_preserves_structure(rot in 0usize..8) {
        // relabelling a valid PD by rotation keeps counts and writhe
        let base = parse_pd(builtin::FIG8_PD).unwrap();
        let rows: Vec<String> = builtin::FIG8_PD
            .split(';')
            .map(|tok| {
                let inner = tok.trim().strip_prefix("X[").unwrap().strip_suffix(']').unwrap();
                let labels: Vec<usize> = inner.split(',').map(|x| x.parse().unwrap()).collect();
                let mapped: Vec<String> = labels
                    .iter()
                    .map(|&x| (((x - 1 + rot) % 8) + 1).to_string())
                    .collect();
                format!("X[{}]", mapped.join(","))
            })
            .collect();
        let d = parse_pd(&rows.join(";")).unwrap();
        prop_assert_eq!(d.num_segments(), base.num_segments());
        prop_assert_eq!(d.num_regions(), base.num_regions());
        prop_assert_eq!(d.writhe(), base.writhe());
        let d2 = parse_pd(&d.to_pd_string()).unwrap();
        prop_assert_eq!(d.to_pd_string(), d2.to_pd_string());
    }
}
