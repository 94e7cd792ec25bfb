//! Acceptance suite. One test per criterion; each prints a pass line with
//! its timing (visible under `--nocapture`, and implicit in the harness
//! result either way). Every tolerance is pinned here, in code.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cffrac::continuous::{
    by_parts_c_check, by_parts_caputo_c_check, caputo_inversion_check_c, cfc_left_c, cfc_right_c,
    cf_int_left_c, cf_int_right_c, cfr_left_c, cfr_right_c, riemann_inversion_check_c, battery,
    CompositionOrder, Interval, QuadratureConfig, SmoothFunction,
};
use cffrac::discrete::{
    by_parts_riemann_check, by_parts_sum_check, caputo_riemann_gap, cf_sum_left, cf_sum_right,
    cfc_left, cfc_right, cfr_left, cfr_right, Side,
};
use cffrac::grid::{delta_diff, nabla_diff, q_reflect};
use cffrac::transform::{
    convolution_theorem_check, laplace, laplace_of_discrete_operators, nabla_shift_check,
    riemann_transform_closed_form, Signal, TransformPoint,
};
use cffrac::varcalc::{
    action, by_parts_caputo_d_check, by_parts_caputo_d_check_right, el_residual, solve_el,
    ActionProblem, BoundaryCondition, DiscreteLagrangian, SolverConfig,
};
use cffrac::{GridDomain, GridFunction, Order, Scalar};

fn order(p: i64, q: i64) -> Order {
    Order::new(Scalar::new(p, q)).unwrap()
}

fn random_fn(rng: &mut ChaCha8Rng, a: i64, b: i64) -> GridFunction<Scalar> {
    let domain = GridDomain::new(a, b).unwrap();
    GridFunction::from_fn(domain, |_| {
        Scalar::new(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000))
    })
}

const ORDERS: [(i64, i64); 7] = [(1, 5), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (4, 5)];

#[test]
fn criterion_1_exact_discrete_identity_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let cases_per_grid = 50;

    for (p, q) in ORDERS {
        let ord = order(p, q);
        for b in 3..=12i64 {
            for _ in 0..cases_per_grid {
                let f = random_fn(&mut rng, 0, b);
                let g = random_fn(&mut rng, 0, b);
                let center = b;

                // Q-dualities
                let reflected = q_reflect(&f);
                assert_eq!(
                    cfr_left(&reflected, &ord).unwrap().reflect_about(center),
                    cfr_right(&f, &ord).unwrap()
                );
                assert_eq!(
                    cfc_left(&reflected, &ord).unwrap().reflect_about(center),
                    cfc_right(&f, &ord).unwrap()
                );
                assert_eq!(
                    cf_sum_left(&reflected, &ord, 0).unwrap().reflect_about(center),
                    cf_sum_right(&f, &ord, b).unwrap()
                );

                // sum after Riemann difference and Riemann difference after
                // sum recover f, on both sides
                let back = cf_sum_left(&cfr_left(&f, &ord).unwrap(), &ord, 0).unwrap();
                for (t, v) in back.points() {
                    assert_eq!(v, f.eval(t).unwrap());
                }
                let back = cfr_left(&cf_sum_left(&f, &ord, 0).unwrap(), &ord).unwrap();
                for (t, v) in back.points() {
                    assert_eq!(v, f.eval(t).unwrap());
                }
                let back = cf_sum_right(&cfr_right(&f, &ord).unwrap(), &ord, b).unwrap();
                for (t, v) in back.points() {
                    assert_eq!(v, f.eval(t).unwrap());
                }
                let back = cfr_right(&cf_sum_right(&f, &ord, b).unwrap(), &ord).unwrap();
                for (t, v) in back.points() {
                    assert_eq!(v, f.eval(t).unwrap());
                }

                // sum after Caputo difference recovers f minus the anchored
                // value
                let back = cf_sum_left(&cfc_left(&f, &ord).unwrap(), &ord, 0).unwrap();
                let fa = f.eval(0).unwrap();
                for (t, v) in back.points() {
                    assert_eq!(v, &(f.eval(t).unwrap() - fa));
                }
                let back = cf_sum_right(&cfc_right(&f, &ord).unwrap(), &ord, b).unwrap();
                let fb = f.eval(b).unwrap();
                for (t, v) in back.points() {
                    assert_eq!(v, &(f.eval(t).unwrap() - fb));
                }

                // Caputo-Riemann relation, both sides
                let gap = caputo_riemann_gap(&f, &ord, Side::Left).unwrap();
                let caputo = cfc_left(&f, &ord).unwrap();
                let riemann = cfr_left(&f, &ord).unwrap();
                for (t, v) in caputo.points() {
                    assert_eq!(v, &(riemann.eval(t).unwrap() - gap.eval(t).unwrap()));
                }
                let gap = caputo_riemann_gap(&f, &ord, Side::Right).unwrap();
                let caputo = cfc_right(&f, &ord).unwrap();
                let riemann = cfr_right(&f, &ord).unwrap();
                for (t, v) in caputo.points() {
                    assert_eq!(v, &(riemann.eval(t).unwrap() - gap.eval(t).unwrap()));
                }

                // integration by parts: Riemann, sum form, Caputo (derived
                // convention) on both sides
                let (lhs, rhs) = by_parts_riemann_check(&f, &g, &ord).unwrap();
                assert_eq!(lhs, rhs);
                let (lhs, rhs) = by_parts_sum_check(&f, &g, &ord).unwrap();
                assert_eq!(lhs, rhs);
                let (lhs, rhs) = by_parts_caputo_d_check(&f, &g, &ord).unwrap();
                assert_eq!(lhs, rhs);
                let (lhs, rhs) = by_parts_caputo_d_check_right(&f, &g, &ord).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 60.0, "suite took {elapsed:?}, budget 60 s");
    println!("criterion 1 (exact discrete identity suite, {elapsed:?}): PASS");
}

#[test]
fn criterion_2_limiting_orders() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    let at_zero = order(0, 1);
    let at_one = order(1, 1);

    let mut battery_fns: Vec<GridFunction<Scalar>> = vec![
        GridFunction::constant(GridDomain::new(0, 9).unwrap(), Scalar::new(7, 3)),
        GridFunction::from_fn(GridDomain::new(0, 9).unwrap(), Scalar::from_int),
        GridFunction::from_fn(GridDomain::new(0, 9).unwrap(), |t| Scalar::from_int(t * t)),
    ];
    for _ in 0..25 {
        battery_fns.push(random_fn(&mut rng, 0, 9));
    }

    for f in &battery_fns {
        let (a, b) = (0i64, 9i64);
        let fa = f.eval(a).unwrap();
        let fb = f.eval(b).unwrap();
        let nd = nabla_diff(f).unwrap();
        let dd = delta_diff(f).unwrap();

        // order 0: f(t) - f(a), f(t) - f(b), f(t), f(t)
        for (t, v) in cfc_left(f, &at_zero).unwrap().points() {
            assert_eq!(v, &(f.eval(t).unwrap() - fa));
        }
        for (t, v) in cfc_right(f, &at_zero).unwrap().points() {
            assert_eq!(v, &(f.eval(t).unwrap() - fb));
        }
        for (t, v) in cfr_left(f, &at_zero).unwrap().points() {
            assert_eq!(v, f.eval(t).unwrap());
        }
        for (t, v) in cfr_right(f, &at_zero).unwrap().points() {
            assert_eq!(v, f.eval(t).unwrap());
        }

        // order 1: the first-order differences; the Riemann pair reduces to
        // them away from its anchored endpoint, where the defining sum is a
        // single kernel-free term
        assert_eq!(cfc_left(f, &at_one).unwrap(), nd);
        let right = cfc_right(f, &at_one).unwrap();
        for (t, v) in right.points() {
            assert_eq!(v, &(-dd.eval(t).unwrap().clone()));
        }
        let left_riemann = cfr_left(f, &at_one).unwrap();
        assert_eq!(left_riemann.eval(a + 1).unwrap(), f.eval(a + 1).unwrap());
        for t in (a + 2)..=b {
            assert_eq!(left_riemann.eval(t).unwrap(), nd.eval(t).unwrap());
        }
        let right_riemann = cfr_right(f, &at_one).unwrap();
        assert_eq!(right_riemann.eval(b - 1).unwrap(), f.eval(b - 1).unwrap());
        for t in a..=(b - 2) {
            assert_eq!(right_riemann.eval(t).unwrap(), &(-dd.eval(t).unwrap().clone()));
        }
    }

    println!("criterion 2 (limiting orders, {:?}): PASS", start.elapsed());
}

#[test]
fn criterion_3_transform_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);

    // convolution theorem, supports up to 8
    for (p, q) in [(1i64, 4i64), (1, 2), (3, 4)] {
        let z = TransformPoint::new(Scalar::new(p, q));
        for _ in 0..40 {
            let len = rng.gen_range(2..=8);
            let base = rng.gen_range(-3..=3);
            let f = Signal::finite(
                base,
                (0..len).map(|_| Scalar::new(rng.gen_range(-50..=50), rng.gen_range(1..=50))).collect(),
            );
            let len = rng.gen_range(2..=8);
            let g = Signal::finite(
                base,
                (0..len).map(|_| Scalar::new(rng.gen_range(-50..=50), rng.gen_range(1..=50))).collect(),
            );
            let (lhs, rhs) = convolution_theorem_check(&f, &g, &z).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    // closed-form transforms of the constant and the exponentials
    for (p, q) in [(1i64, 4i64), (1, 2), (3, 4)] {
        let z = TransformPoint::new(Scalar::new(p, q));
        let one = Signal::constant(Scalar::one(), 0);
        assert_eq!(laplace(&one, &z).unwrap(), Scalar::one() / &z.z);
        for rate in [Scalar::from_int(-1), Scalar::new(-1, 2)] {
            let e = Signal::nabla_exponential(&rate, 0).unwrap();
            assert_eq!(laplace(&e, &z).unwrap(), Scalar::one() / (&z.z - &rate));
        }
    }

    // transform-of-difference identity across bases
    for base in [-2i64, 0, 3] {
        for _ in 0..40 {
            let len = rng.gen_range(2..=8);
            let f = Signal::finite(
                base,
                (0..len).map(|_| Scalar::new(rng.gen_range(-50..=50), rng.gen_range(1..=50))).collect(),
            );
            for (p, q) in [(1i64, 4i64), (1, 2), (3, 4)] {
                let (lhs, rhs) = nabla_shift_check(&f, &TransformPoint::new(Scalar::new(p, q))).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 10.0, "suite took {elapsed:?}, budget 10 s");
    println!("criterion 3 (transform suite, {elapsed:?}): PASS");
}

#[test]
fn criterion_4_riemann_difference_spectral_check() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let ord = order(1, 2);
    let z = TransformPoint::new(Scalar::new(1, 2));
    for _ in 0..50 {
        let len = rng.gen_range(2..=8);
        let f = Signal::finite(
            0,
            (0..len).map(|_| Scalar::new(rng.gen_range(-100..=100), rng.gen_range(1..=100))).collect(),
        );
        let lhs = laplace_of_discrete_operators(&f, &ord, &z).unwrap();
        let rhs = riemann_transform_closed_form(&f, &ord, &z).unwrap();
        assert_eq!(lhs, rhs);
    }
    println!("criterion 4 (spectral check of the Riemann difference, {:?}): PASS", start.elapsed());
}

#[test]
fn criterion_5_continuous_suite() {
    let start = Instant::now();
    let q = QuadratureConfig::with_abs_tol(1e-10);
    let ord = order(1, 2);
    let iv = Interval::new(0.0, 1.0).unwrap();
    let (a, b) = (0.0, 1.0);
    let tol = 1e-8;

    // pinned closed form: the ramp's left Caputo derivative at t = 1
    let ramp = SmoothFunction::with_deriv("ramp", |t| t, |_| 1.0);
    let v = cfc_left_c(&ramp, &ord, 0.0, 1.0, &q).unwrap();
    assert!((v - 2.0 * (1.0 - (-1.0f64).exp())).abs() <= 1e-10);

    for f in battery() {
        let reflected = f.reflected(a + b);
        for t in [0.2, 0.5, 0.8] {
            let x = a + b - t;
            // reflection dualities
            assert!((cfc_left_c(&reflected, &ord, a, t, &q).unwrap()
                - cfc_right_c(&f, &ord, x, b, &q).unwrap())
            .abs()
                <= tol);
            assert!((cfr_left_c(&reflected, &ord, a, t, &q).unwrap()
                - cfr_right_c(&f, &ord, x, b, &q).unwrap())
            .abs()
                <= tol);
            assert!((cf_int_left_c(&reflected, &ord, a, t, &q).unwrap()
                - cf_int_right_c(&f, &ord, x, b, &q).unwrap())
            .abs()
                <= tol);

            // Caputo-Riemann relation
            let rate = ord.kernel_rate().unwrap().to_f64();
            let scale = (ord.b_norm() / &ord.one_minus_alpha()).to_f64();
            let lhs = cfc_left_c(&f, &ord, a, t, &q).unwrap();
            let rhs = cfr_left_c(&f, &ord, a, t, &q).unwrap()
                - scale * f.eval(a) * (rate * (t - a)).exp();
            assert!((lhs - rhs).abs() <= tol, "{}", f.label());
            let lhs = cfc_right_c(&f, &ord, t, b, &q).unwrap();
            let rhs = cfr_right_c(&f, &ord, t, b, &q).unwrap()
                - scale * f.eval(b) * (rate * (b - t)).exp();
            assert!((lhs - rhs).abs() <= tol, "{}", f.label());
        }

        // both Riemann inversions, both sides
        for (side, comp) in [
            (Side::Left, CompositionOrder::IntegralAfterDerivative),
            (Side::Left, CompositionOrder::DerivativeAfterIntegral),
            (Side::Right, CompositionOrder::IntegralAfterDerivative),
            (Side::Right, CompositionOrder::DerivativeAfterIntegral),
        ] {
            let (lhs, rhs) = riemann_inversion_check_c(&f, &ord, side, comp, &iv, 0.6, &q).unwrap();
            assert!((lhs - rhs).abs() <= tol, "{} {side:?} {comp:?}", f.label());
        }

        // Caputo inversion to f(x) - f(a) and f(x) - f(b)
        let (lhs, rhs) = caputo_inversion_check_c(&f, &ord, Side::Left, &iv, 0.7, &q).unwrap();
        assert!((lhs - rhs).abs() <= tol, "{}", f.label());
        let (lhs, rhs) = caputo_inversion_check_c(&f, &ord, Side::Right, &iv, 0.3, &q).unwrap();
        assert!((lhs - rhs).abs() <= tol, "{}", f.label());
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 30.0, "suite took {elapsed:?}, budget 30 s");
    println!("criterion 5 (continuous suite, {elapsed:?}): PASS");
}

#[test]
fn criterion_6_continuous_by_parts() {
    let start = Instant::now();
    let q = QuadratureConfig::with_abs_tol(1e-10);
    let iv = Interval::new(0.0, 1.0).unwrap();
    let polys = [
        SmoothFunction::with_deriv("p0", |_| 1.5, |_| 0.0),
        SmoothFunction::with_deriv("p1", |t| 2.0 * t - 1.0, |_| 2.0),
        SmoothFunction::with_deriv("p2", |t| t * t + 0.5 * t, |t| 2.0 * t + 0.5),
        SmoothFunction::with_deriv("p3", |t| t * t * t - t, |t| 3.0 * t * t - 1.0),
    ];
    for (p, qd) in [(1i64, 3i64), (1, 2), (2, 3)] {
        let ord = order(p, qd);
        for f in &polys {
            for g in &polys {
                let (lhs, rhs) = by_parts_c_check(f, g, &ord, &iv, &q).unwrap();
                assert!((lhs - rhs).abs() <= 1e-6, "riemann {}/{}", f.label(), g.label());
                for side in [Side::Left, Side::Right] {
                    let (lhs, rhs) = by_parts_caputo_c_check(f, g, &ord, side, &iv, &q).unwrap();
                    assert!((lhs - rhs).abs() <= 1e-6, "caputo {side:?} {}/{}", f.label(), g.label());
                }
            }
        }
    }
    println!("criterion 6 (continuous integration by parts, {:?}): PASS", start.elapsed());
}

#[test]
fn criterion_7_variational_suite() {
    let start = Instant::now();
    let cfg = SolverConfig::default();

    // classical limit: order 1, no potential, linear interpolant
    let problem: ActionProblem<f64> = ActionProblem::new(
        DiscreteLagrangian::kinetic(),
        GridDomain::new(0, 8).unwrap(),
        order(1, 1),
        BoundaryCondition::Fixed { left: 0.0, right: 8.0 },
    )
    .unwrap();
    let sol = solve_el(&problem, &cfg).unwrap();
    assert!(sol.converged);
    for (t, v) in sol.y.points() {
        assert!((v - t as f64).abs() <= 1e-12, "t = {t}");
    }

    // quadratic potentials against the dense linear oracle
    for (p, qd, k) in [(1i64, 2i64, (0i64, 1i64)), (1, 2, (-1, 2)), (2, 3, (-1, 3)), (3, 4, (1, 4))] {
        let ord = order(p, qd);
        let lagrangian = if k.0 == 0 {
            DiscreteLagrangian::kinetic()
        } else {
            DiscreteLagrangian::with_quadratic_well(Scalar::new(k.0, k.1))
        };
        let problem: ActionProblem<f64> = ActionProblem::new(
            lagrangian,
            GridDomain::new(-1, 7).unwrap(),
            ord,
            BoundaryCondition::Fixed { left: 0.0, right: 1.0 },
        )
        .unwrap();
        let interior = problem.interior();
        let n = interior.len();
        let path = |x: &[f64]| {
            let mut vals = Vec::with_capacity(n + 2);
            vals.push(0.0);
            vals.extend_from_slice(x);
            vals.push(1.0);
            GridFunction::new(problem.grid, vals).unwrap()
        };
        let r0 = el_residual(&problem, &path(&vec![0.0; n])).unwrap();
        let mut a = nalgebra::DMatrix::zeros(n, n);
        for j in 0..n {
            let mut x = vec![0.0; n];
            x[j] = 1.0;
            let rj = el_residual(&problem, &path(&x)).unwrap();
            for i in 0..n {
                a[(i, j)] = rj.values()[i] - r0.values()[i];
            }
        }
        let rhs = -nalgebra::DVector::from_vec(r0.values().to_vec());
        let direct = a.lu().solve(&rhs).expect("nonsingular system");
        let sol = solve_el(&problem, &cfg).unwrap();
        assert!(sol.converged, "alpha = {p}/{qd}, k = {}/{}", k.0, k.1);
        assert!(sol.residual_norm <= 1e-8);
        for (i, s) in interior.points().enumerate() {
            assert!(
                (sol.y.eval(s).unwrap() - direct[i]).abs() <= 1e-10,
                "alpha = {p}/{qd}, node {s}"
            );
        }
    }

    // finite-difference gradient of the action matches the assembled first
    // variation to relative 1e-5
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    let problem: ActionProblem<f64> = ActionProblem::new(
        DiscreteLagrangian::with_quadratic_well(Scalar::new(2, 5)),
        GridDomain::new(-1, 7).unwrap(),
        order(1, 2),
        BoundaryCondition::Fixed { left: 0.25, right: -1.5 },
    )
    .unwrap();
    let y = GridFunction::from_fn(problem.grid, |_| rng.gen_range(-2.0..2.0));
    let residual = el_residual(&problem, &y).unwrap();
    let h = 1e-6;
    for s in residual.domain().points() {
        let idx = (s - problem.grid.a()) as usize;
        let mut up = y.values().to_vec();
        up[idx] += h;
        let mut down = y.values().to_vec();
        down[idx] -= h;
        let ju = action(&problem, &GridFunction::new(problem.grid, up).unwrap()).unwrap();
        let jd = action(&problem, &GridFunction::new(problem.grid, down).unwrap()).unwrap();
        let fd = (ju - jd) / (2.0 * h);
        let assembled = *residual.eval(s).unwrap();
        assert!(
            ((fd - assembled) / assembled.abs().max(1e-3)).abs() <= 1e-5,
            "node {s}: fd {fd} vs assembled {assembled}"
        );
    }

    println!("criterion 7 (variational suite, {:?}): PASS", start.elapsed());
}
