//! Solver-driven integration tests: solution-set contents and the cross-check
//! between the two variable modes on the same diagram.

use num_complex::Complex64;

use octa_ptolemy::builtin;
use octa_ptolemy::diagram::parse_pd;
use octa_ptolemy::gluing::{build_t4_system, build_t5_system};
use octa_ptolemy::invariants::{complex_volume, cusp_shape, obstruction_class};
use octa_ptolemy::solver::{search_solutions, SolverConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn trefoil_t5_search_contains_cusp_minus_six() {
    let d = parse_pd(builtin::TREFOIL_KINK_PD).unwrap();
    let sys = build_t5_system(&d).unwrap();
    let cfg = SolverConfig {
        seed: 0,
        restarts: 100,
        ..SolverConfig::default()
    };
    let set = search_solutions(&sys, &cfg).unwrap();
    assert!(!set.is_empty());
    let found = set.solutions.iter().any(|rec| {
        cusp_shape(&d, &rec.assignment)
            .map(|cs| (cs.cusp - c(-6.0, 0.0)).norm() < 1e-7)
            .unwrap_or(false)
    });
    assert!(
        found,
        "no solution with cusp shape -6 among {} found",
        set.len()
    );
}

#[test]
fn fig8_modes_agree_on_the_geometric_representation() {
    // same diagram, both variable systems; pick solutions with the same cusp
    // shape and compare the representation invariants
    let d = parse_pd(builtin::FIG8_PD).unwrap();
    let a_z = builtin::fig8_solution();
    let cusp_z = cusp_shape(&d, &a_z).unwrap().cusp;
    let obs_z = obstruction_class(&d, &a_z).unwrap();
    let vol_z = complex_volume(&d, &a_z).unwrap().vol;

    let sys_w = build_t5_system(&d).unwrap();
    let cfg = SolverConfig {
        seed: 0,
        restarts: 120,
        ..SolverConfig::default()
    };
    let set = search_solutions(&sys_w, &cfg).unwrap();
    let mut matched = 0usize;
    for rec in &set.solutions {
        let cs = match cusp_shape(&d, &rec.assignment) {
            Ok(cs) => cs,
            Err(_) => continue,
        };
        if (cs.cusp - cusp_z).norm() < 1e-8 {
            matched += 1;
            let obs_w = obstruction_class(&d, &rec.assignment).unwrap();
            let vol_w = complex_volume(&d, &rec.assignment).unwrap().vol;
            assert_eq!(obs_w, obs_z, "obstruction class must agree across modes");
            assert!(
                (vol_w - vol_z).abs() < 1e-6,
                "volume must agree across modes: {vol_w} vs {vol_z}"
            );
        }
    }
    assert!(
        matched > 0,
        "no w-mode solution with the matching cusp shape found"
    );
}

#[test]
fn empty_solution_sets_are_reported_as_such() {
    // an under-resourced search that converges nowhere must come back as an
    // empty set (a valid outcome), not as an error
    let d = parse_pd(builtin::FIG8_PD).unwrap();
    let sys = build_t4_system(&d).unwrap();
    let cfg = SolverConfig {
        seed: 0,
        restarts: 3,
        max_iters: 1,
        tol_residual: 1e-13,
        ..SolverConfig::default()
    };
    let set = search_solutions(&sys, &cfg).unwrap();
    assert!(set.is_empty());
}

#[test]
fn unknot_kink_t5_solutions_are_abelian() {
    // the 1-crossing kink admits region solutions; their holonomy is the
    // abelian boundary-parabolic representation: cusp shape equals the
    // writhe defect and the volume vanishes
    let d = parse_pd("X[1,1,2,2]").unwrap();
    let sys = build_t5_system(&d).unwrap();
    let cfg = SolverConfig {
        seed: 0,
        restarts: 40,
        ..SolverConfig::default()
    };
    let set = search_solutions(&sys, &cfg).unwrap();
    for rec in &set.solutions {
        if let Ok(v) = complex_volume(&d, &rec.assignment) {
            assert!(v.vol.abs() < 1e-8);
        }
    }
}
