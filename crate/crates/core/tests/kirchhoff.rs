use kirchhoff_lab::branch::{classify_regime, find_roots, KirchhoffParams, DEFAULT_ROOT_TOL};
use kirchhoff_lab::grid::{DomainSpec, Grid};
use kirchhoff_lab::groundstate::{ground_state, GroundState};
use kirchhoff_lab::kirchhoff::homotopy::validate_schedule;
use kirchhoff_lab::kirchhoff::*;
use kirchhoff_lab::Error;

fn disk(n: usize) -> Grid {
    Grid::new(DomainSpec::disk(1.0, n)).unwrap()
}

fn gs(grid: &Grid, p: f64) -> GroundState {
    ground_state(grid, p, 1e-10).unwrap()
}

#[test]
fn resonant_fixture_realised_on_pde() {
    // aS = 1 and bS = 1/2 make y = 2 the unique root for p = 3, alpha = 1
    let g = disk(128);
    let v = gs(&g, 3.0);
    let params = KirchhoffParams::new(1.0 / v.s, 0.5 / v.s, 1.0, 3.0).unwrap();
    let rep = find_roots(&params, v.s, DEFAULT_ROOT_TOL).unwrap();
    assert_eq!(rep.roots.len(), 1);
    assert!((rep.roots[0] - 2.0).abs() < 1e-10);
    let rec = reconstruct(&g, &v, rep.roots[0], &params, 0).unwrap();
    assert!((rec.grad_sq - 2.0).abs() <= 1e-6 * 2.0, "{}", rec.grad_sq);
    assert!(rec.residual_rel <= 1e-8);
    assert!(rec.min_value > 0.0);
}

#[test]
fn b_zero_reconstruction_solves_semilinear_problem() {
    let g = disk(64);
    let v = gs(&g, 2.0);
    let a = 0.3;
    let u = semilinear_solution(&v, a);
    let params = KirchhoffParams {
        a,
        b: 0.0,
        alpha: 1.0,
        p: 2.0,
    };
    let res = kirchhoff_residual(&g, &u, &params, &PerturbationSpec::None, 1.0).unwrap();
    assert!(res <= 1e-8, "{res}");
}

#[test]
fn round_trip_recovers_ground_state() {
    let g = disk(64);
    let v = gs(&g, 2.0);
    let thr = classify_regime(&KirchhoffParams::new(1.0, 1.0, 1.0, 2.0).unwrap(), v.s).unwrap();
    let params = KirchhoffParams::new(0.5 * thr.threshold_rhs.unwrap(), 1.0, 1.0, 2.0).unwrap();
    let rep = find_roots(&params, v.s, DEFAULT_ROOT_TOL).unwrap();
    assert_eq!(rep.roots.len(), 2);
    for (i, &beta) in rep.roots.iter().enumerate() {
        let rec = reconstruct(&g, &v, beta, &params, i).unwrap();
        let back = recover_ground_state(&g, &rec.u, &params).unwrap();
        assert!(back.sup_distance(&v.v) <= 1e-6 * v.v.sup());
    }
}

#[test]
fn identity_violation_detected() {
    let g = disk(64);
    let v = gs(&g, 3.0);
    let params = KirchhoffParams::new(1.0, 1.0, 1.0, 3.0).unwrap();
    // not a root: the scaled profile cannot have ‖∇u‖² = 5
    let err = reconstruct(&g, &v, 5.0, &params, 0).unwrap_err();
    assert!(matches!(err, Error::IdentityViolation { .. }));
}

#[test]
fn zero_field_residual_flag() {
    let g = disk(32);
    let params = KirchhoffParams::new(1.0, 1.0, 1.0, 3.0).unwrap();
    let r = kirchhoff_residual(&g, &g.zeros(), &params, &PerturbationSpec::None, 1.0).unwrap();
    assert!(r.is_infinite());
}

#[test]
fn k0_ignores_kirchhoff_parameters() {
    let g = disk(64);
    let u = g.field_from_fn(|x, y| 1.0 - x * x - y * y + 0.1);
    let pert = PerturbationSpec::Sublinear {
        mu: 1.0,
        q: 0.7,
        q1: 0.8,
    };
    let h1 = Homotopy::new(&g, KirchhoffParams::new(2.0, 1.0, 1.0, 0.5).unwrap(), pert).unwrap();
    let h2 = Homotopy::new(&g, KirchhoffParams::new(2.0, 7.0, 0.3, 0.5).unwrap(), pert).unwrap();
    let k1 = h1.apply(&u, 0.0, None, 1e-12).unwrap();
    let k2 = h2.apply(&u, 0.0, None, 1e-12).unwrap();
    assert_eq!(k1.values(), k2.values());
}

#[test]
fn sublinear_t0_unique_from_any_start() {
    let g = disk(64);
    let params = KirchhoffParams::new(1.0, 1.0, 1.0, 0.5).unwrap();
    let h = Homotopy::new(&g, params, PerturbationSpec::None).unwrap();
    let opts = FixedPointOptions::default();
    let small = h.step(0.0, &g.constant(1e-3), &opts).unwrap();
    let large = h.step(0.0, &g.constant(1e3), &opts).unwrap();
    assert!(small.u.sup_distance(&large.u) <= 1e-8 * small.sup_norm);
    // a = 1: the solution is the ground state itself
    let v = gs(&g, 0.5);
    assert!(small.u.sup_distance(&v.v) <= 1e-6 * v.v.sup());
}

#[test]
fn superlinear_t0_fixed_point_is_stationary() {
    let g = disk(64);
    let v = gs(&g, 5.0);
    let a = 2.0;
    let params = KirchhoffParams::new(a, 1.0, 1.0, 5.0).unwrap();
    let h = Homotopy::new(&g, params, PerturbationSpec::None).unwrap();
    let start = semilinear_solution(&v, a);
    let rec = h.step(0.0, &start, &FixedPointOptions::default()).unwrap();
    assert!(rec.u.sup_distance(&start) <= 1e-6 * start.sup());
}

#[test]
fn above_threshold_has_no_nontrivial_fixed_point() {
    let g = disk(64);
    let v = gs(&g, 2.0);
    let params = KirchhoffParams::new(1.0, 1.0, 1.0, 2.0).unwrap();
    assert!(find_roots(&params, v.s, DEFAULT_ROOT_TOL)
        .unwrap()
        .roots
        .is_empty());
    let h = Homotopy::new(&g, params, PerturbationSpec::None).unwrap();
    for scale in [1e-2, 1.0, 1e2] {
        let err = h
            .step(1.0, &v.v.scaled(scale), &FixedPointOptions::default())
            .unwrap_err();
        assert!(
            matches!(
                err,
                Error::Collapse { .. } | Error::Divergence { .. } | Error::Convergence { .. }
            ),
            "{err}"
        );
    }
}

#[test]
fn continuation_without_perturbation_matches_reconstruction() {
    let g = disk(64);
    let opts = FixedPointOptions::default();
    for p in [0.5, 5.0] {
        let v = gs(&g, p);
        let params = KirchhoffParams::new(1.0, 0.5, 1.0, p).unwrap();
        let path = continuation(
            &g,
            &params,
            &PerturbationSpec::None,
            &uniform_schedule(10),
            &g.constant(1.0),
            &opts,
        )
        .unwrap();
        let end = path.last().unwrap();
        let rep = find_roots(&params, v.s, DEFAULT_ROOT_TOL).unwrap();
        let rec = reconstruct(&g, &v, rep.roots[0], &params, 0).unwrap();
        assert!(end.u.sup_distance(&rec.u) <= 1e-6 * rec.sup_norm, "p = {p}");
    }
}

#[test]
fn perturbed_continuation_reaches_endpoint() {
    let g = disk(64);
    let opts = FixedPointOptions::default();
    let sub = continuation(
        &g,
        &KirchhoffParams::new(1.0, 1.0, 1.0, 0.5).unwrap(),
        &PerturbationSpec::Sublinear {
            mu: 1.0,
            q: 0.7,
            q1: 0.8,
        },
        &uniform_schedule(10),
        &g.constant(1.0),
        &opts,
    )
    .unwrap();
    assert_eq!(sub.len(), 11);
    assert!(sub
        .iter()
        .all(|r| r.residual_rel <= 1e-8 && r.min_value > 0.0));

    let params = KirchhoffParams::new(1.0, 1.0, 1.0, 5.0).unwrap();
    let l1 = g.smallest_eigenvalue(1e-8).unwrap().lambda;
    let pert = PerturbationSpec::Superlinear {
        lambda: 0.5 * l1,
        q: 2.0,
    };
    let sup = continuation(
        &g,
        &params,
        &pert,
        &uniform_schedule(10),
        &g.constant(1.0),
        &opts,
    )
    .unwrap();
    assert!(sup.last().unwrap().residual_rel <= 1e-8);
}

#[test]
fn hypothesis_errors_name_the_condition() {
    let g = disk(32);
    let params = KirchhoffParams::new(1.0, 1.0, 1.0, 5.0).unwrap();
    let err = Homotopy::new(
        &g,
        params,
        PerturbationSpec::Superlinear {
            lambda: 1e6,
            q: 6.0,
        },
    )
    .unwrap_err();
    let Error::Hypothesis(msgs) = err else {
        panic!("{err}")
    };
    assert_eq!(msgs.len(), 2);
    assert!(msgs[0].contains("(H2) requires 1 < q < p"));
    assert!(msgs[1].contains("lambda < a*lambda1"));

    // continuation is only defined for the sublinear and supercritical regimes
    let h = Homotopy::new(
        &g,
        KirchhoffParams::new(1.0, 1.0, 1.0, 2.0).unwrap(),
        PerturbationSpec::None,
    )
    .unwrap();
    let fail = h
        .continuation(
            &uniform_schedule(10),
            &g.constant(1.0),
            &FixedPointOptions::default(),
        )
        .unwrap_err();
    assert!(matches!(fail.error, Error::Hypothesis(_)));
}

#[test]
fn schedule_validation() {
    assert!(validate_schedule(&uniform_schedule(10)).is_ok());
    assert!(validate_schedule(&uniform_schedule(5)).is_err());
    assert!(validate_schedule(&[0.0, 0.1, 0.1, 0.2]).is_err());
    assert!(validate_schedule(&[0.1, 0.2]).is_err());
}

#[test]
fn sweeps_are_bounded_and_ordered() {
    let g = disk(64);
    let opts = FixedPointOptions::default();
    let spec = SweepSpec {
        t_values: vec![0.0, 0.5, 1.0],
        b_values: vec![0.5, 2.0],
        perturbations: vec![PerturbationSpec::Sublinear {
            mu: 1.0,
            q: 0.7,
            q1: 0.8,
        }],
        lambda_is_fraction: false,
    };
    let params = KirchhoffParams::new(1.0, 1.0, 1.0, 0.5).unwrap();
    let rep = bound_sweep(&g, &params, SweepRegime::Sublinear, &spec, None, &opts).unwrap();
    assert!(rep.bounded());
    assert_eq!(rep.cells.len(), 6);
    assert!(rep.cells.iter().enumerate().all(|(k, c)| c.key == k));
    let again = bound_sweep(&g, &params, SweepRegime::Sublinear, &spec, None, &opts).unwrap();
    assert_eq!(
        serde_json::to_string(&rep).unwrap(),
        serde_json::to_string(&again).unwrap()
    );

    let err = bound_sweep(&g, &params, SweepRegime::Superlinear, &spec, None, &opts).unwrap_err();
    assert!(matches!(err, Error::Hypothesis(_)));
}

#[test]
fn intermediate_sweep_grows_as_b_shrinks() {
    let g = disk(64);
    let v = gs(&g, 2.0);
    let thr = classify_regime(&KirchhoffParams::new(1.0, 1.0, 1.0, 2.0).unwrap(), v.s).unwrap();
    let params = KirchhoffParams::new(0.5 * thr.threshold_rhs.unwrap(), 1.0, 1.0, 2.0).unwrap();
    let spec = SweepSpec {
        t_values: vec![],
        b_values: vec![1.0, 0.25, 0.0625, 0.015625],
        perturbations: vec![PerturbationSpec::None],
        lambda_is_fraction: false,
    };
    let rep = bound_sweep(
        &g,
        &params,
        SweepRegime::Intermediate { t0: 1.0 },
        &spec,
        Some(&v),
        &FixedPointOptions::default(),
    )
    .unwrap();
    assert_eq!(rep.failures, 0, "{:?}", rep.cells);
    assert!(rep.max_sup_by_b.windows(2).all(|w| w[1].1 > w[0].1));
}

#[test]
fn blowup_probe_tracks_both_branches() {
    let g = disk(64);
    let v = gs(&g, 2.0);
    let thr = classify_regime(&KirchhoffParams::new(1.0, 1.0, 1.0, 2.0).unwrap(), v.s).unwrap();
    let params = KirchhoffParams::new(0.5 * thr.threshold_rhs.unwrap(), 1.0, 1.0, 2.0).unwrap();
    let bs: Vec<f64> = (0..=12).map(|k| 2f64.powi(-k)).collect();
    let t = blowup_probe(&g, &v, &params, &bs).unwrap();
    assert!(t.lower_error_monotone && t.upper_increasing);
    let slope = t.upper_slope.unwrap();
    assert!(
        (slope - t.upper_slope_target).abs() <= 0.05 * t.upper_slope_target.abs(),
        "{slope}"
    );
}
