//! Discrete fractional variational problems: action functionals, first
//! variations, integration by parts with boundary terms, and a minimizer.
//!
//! A path `y` lives on a grid `{lo, ..., hi}` whose endpoints carry the
//! boundary data. Writing `a = lo + 1` and `D` for the left Caputo
//! difference anchored at `lo`, the action is
//!
//! ```text
//! J(y) = sum_{t = a}^{hi} L(t, y(t-1), D(t))
//! ```
//!
//! Expanding the first variation exactly (swap the double kernel sum, then
//! sum by parts) gives, for a perturbation vanishing at both endpoints,
//!
//! ```text
//! dJ = sum_{s = a}^{hi-1} eta(s) * [ L1(s+1) + (right Riemann difference of L2)(s) ]
//! ```
//!
//! where `L1`, `L2` are the partials of `L` in its value and rate slots on
//! `{a, ..., hi}`, and the right Riemann difference is taken with its kernel
//! sum covering all of `L2` (realized here by extending `L2` with a zero
//! value one past `hi`). That bracket is the Euler-Lagrange residual, and it
//! is exactly the gradient of the action in the interior values — a fact the
//! tests check against finite differences. Perturbations that move the
//! endpoints pick up the two boundary coefficients
//!
//! ```text
//! d/dy(lo): L1(a) - B * sum_{t = a}^{hi} k(t-a) L2(t)
//! d/dy(hi): B * L2(hi)
//! ```
//!
//! whose kernel-sum parts are the discrete exponential integral boundary
//! terms of the Caputo by-parts identity; they vanish at free extremals of
//! the potential-free battery and join the unknowns when the boundary is
//! unconstrained.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::discrete::{cfc_left, cfc_right, cfr_left, cfr_right};
use crate::error::{Error, Result};
use crate::grid::{cf_kernel, GridDomain, GridFunction, Order, Value};
use crate::scalar::Scalar;

/// Left discrete exponential integral operator: with `p = 1/(1-rate)`,
///
/// ```text
/// sum_{s = a+1}^{t} p^(s-a) phi(s),    a = left end of phi's grid
/// ```
///
/// An empty summation range yields zero. The kernel exponent follows the
/// summation variable, which is the form the by-parts boundary terms need.
pub fn exp_int_left_d<V: Value>(phi: &GridFunction<V>, rate: &Scalar, t: i64) -> Result<V> {
    if rate.is_one() {
        return Err(Error::NablaExpUndefined);
    }
    let d = phi.domain();
    if t > d.b() {
        return Err(Error::OutOfDomain { t, lo: d.a(), hi: d.b() });
    }
    let p = Scalar::one() / (Scalar::one() - rate);
    let mut acc = V::zero();
    for s in (d.a() + 1)..=t {
        acc = acc + V::from_scalar(&p.pow(s - d.a())?) * phi.eval(s)?.clone();
    }
    Ok(acc)
}

/// Right discrete exponential integral operator:
///
/// ```text
/// sum_{s = t}^{b-1} p^(b-s) phi(s),    b = right end of phi's grid
/// ```
pub fn exp_int_right_d<V: Value>(phi: &GridFunction<V>, rate: &Scalar, t: i64) -> Result<V> {
    if rate.is_one() {
        return Err(Error::NablaExpUndefined);
    }
    let d = phi.domain();
    if t < d.a() {
        return Err(Error::OutOfDomain { t, lo: d.a(), hi: d.b() });
    }
    let p = Scalar::one() / (Scalar::one() - rate);
    let mut acc = V::zero();
    for s in t..=(d.b() - 1) {
        acc = acc + V::from_scalar(&p.pow(d.b() - s)?) * phi.eval(s)?.clone();
    }
    Ok(acc)
}

fn require_same_grid(f: &GridFunction<Scalar>, g: &GridFunction<Scalar>) -> Result<GridDomain> {
    let (df, dg) = (f.domain(), g.domain());
    if df != dg {
        return Err(Error::GridMismatch { a1: df.a(), b1: df.b(), a2: dg.a(), b2: dg.b() });
    }
    Ok(df)
}

/// Both sides of the Caputo integration-by-parts identity for functions on
/// a common grid `{a, ..., b}`:
///
/// ```text
/// sum_{t=a+1}^{b-1} (left Caputo f)(t) g(t)
///   = sum_{t=a+1}^{b-1} f(t) (right Riemann g)(t)
///   - B/(1-alpha) * f(a) * sum_{s=a+1}^{b-1} (1-alpha)^(s-a) g(s)
/// ```
///
/// The boundary sum is the left discrete exponential integral of `g` at
/// `b-1`. The identity follows exactly from the Caputo-Riemann relation plus
/// the Riemann by-parts identity; the derivation example enumerates the
/// convention on a basis of impulses.
pub fn by_parts_caputo_d_check(
    f: &GridFunction<Scalar>,
    g: &GridFunction<Scalar>,
    order: &Order,
) -> Result<(Scalar, Scalar)> {
    order.require_strictly_fractional("integration by parts")?;
    let d = require_same_grid(f, g)?;
    if d.b() - d.a() < 3 {
        return Err(Error::DomainTooSmall { need: 4, got: d.len() });
    }
    let caputo_of_f = cfc_left(f, order)?;
    let riemann_of_g = cfr_right(g, order)?;
    let mut lhs = Scalar::zero();
    let mut bulk = Scalar::zero();
    for t in (d.a() + 1)..=(d.b() - 1) {
        lhs = lhs + caputo_of_f.eval(t)? * g.eval(t)?;
        bulk = bulk + f.eval(t)? * riemann_of_g.eval(t)?;
    }
    let rate = order.kernel_rate()?;
    let coeff = order.b_norm() / &order.one_minus_alpha();
    let boundary = coeff * f.eval(d.a())? * &exp_int_left_d(g, &rate, d.b() - 1)?;
    Ok((lhs, bulk - boundary))
}

/// Mirror of [`by_parts_caputo_d_check`] for the right Caputo difference:
///
/// ```text
/// sum_{t=a+1}^{b-1} (right Caputo f)(t) g(t)
///   = sum_{t=a+1}^{b-1} f(t) (left Riemann g)(t)
///   - B/(1-alpha) * f(b) * sum_{s=a+1}^{b-1} (1-alpha)^(b-s) g(s)
/// ```
pub fn by_parts_caputo_d_check_right(
    f: &GridFunction<Scalar>,
    g: &GridFunction<Scalar>,
    order: &Order,
) -> Result<(Scalar, Scalar)> {
    order.require_strictly_fractional("integration by parts")?;
    let d = require_same_grid(f, g)?;
    if d.b() - d.a() < 3 {
        return Err(Error::DomainTooSmall { need: 4, got: d.len() });
    }
    let caputo_of_f = cfc_right(f, order)?;
    let riemann_of_g = cfr_left(g, order)?;
    let mut lhs = Scalar::zero();
    let mut bulk = Scalar::zero();
    for t in (d.a() + 1)..=(d.b() - 1) {
        lhs = lhs + caputo_of_f.eval(t)? * g.eval(t)?;
        bulk = bulk + f.eval(t)? * riemann_of_g.eval(t)?;
    }
    let rate = order.kernel_rate()?;
    let coeff = order.b_norm() / &order.one_minus_alpha();
    let boundary = coeff * f.eval(d.b())? * &exp_int_right_d(g, &rate, d.a() + 1)?;
    Ok((lhs, bulk - boundary))
}

type LagrangianFn<V> = Arc<dyn Fn(i64, &V, &V) -> V + Send + Sync>;

/// A discrete Lagrangian `L(t, y, d)` with its two partial derivatives.
/// `d` is the fractional rate slot (the Caputo difference of the path).
#[derive(Clone)]
pub struct DiscreteLagrangian<V> {
    label: String,
    eval: LagrangianFn<V>,
    d_value: Option<LagrangianFn<V>>,
    d_rate: Option<LagrangianFn<V>>,
}

impl<V: Value> DiscreteLagrangian<V> {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(i64, &V, &V) -> V + Send + Sync + 'static,
    ) -> Self {
        DiscreteLagrangian { label: label.into(), eval: Arc::new(eval), d_value: None, d_rate: None }
    }

    pub fn with_partials(
        label: impl Into<String>,
        eval: impl Fn(i64, &V, &V) -> V + Send + Sync + 'static,
        d_value: impl Fn(i64, &V, &V) -> V + Send + Sync + 'static,
        d_rate: impl Fn(i64, &V, &V) -> V + Send + Sync + 'static,
    ) -> Self {
        DiscreteLagrangian {
            label: label.into(),
            eval: Arc::new(eval),
            d_value: Some(Arc::new(d_value)),
            d_rate: Some(Arc::new(d_rate)),
        }
    }

    /// Kinetic Lagrangian `L = d^2 / 2`.
    pub fn kinetic() -> Self {
        let half = Scalar::new(1, 2);
        DiscreteLagrangian::with_partials(
            "kinetic",
            move |_, _: &V, d: &V| V::from_scalar(&half) * d.clone() * d.clone(),
            |_, _: &V, _: &V| V::zero(),
            |_, _: &V, d: &V| d.clone(),
        )
    }

    /// `L = d^2 / 2 - k y^2 / 2`.
    pub fn with_quadratic_well(k: Scalar) -> Self {
        let half = Scalar::new(1, 2);
        let half_k = &half * &k;
        let k2 = k.clone();
        DiscreteLagrangian::with_partials(
            format!("quadratic-well(k = {k})"),
            move |_, y: &V, d: &V| {
                V::from_scalar(&half) * d.clone() * d.clone()
                    - V::from_scalar(&half_k) * y.clone() * y.clone()
            },
            move |_, y: &V, _: &V| -(V::from_scalar(&k2) * y.clone()),
            |_, _: &V, d: &V| d.clone(),
        )
    }

    /// `L = d^2 / 2 - V(y)` with a polynomial potential
    /// `V(y) = sum_i coeffs[i] y^i`.
    pub fn with_polynomial_well(coeffs: Vec<Scalar>) -> Self {
        fn horner<V: Value>(coeffs: &[Scalar], y: &V) -> V {
            let mut acc = V::zero();
            for c in coeffs.iter().rev() {
                acc = acc * y.clone() + V::from_scalar(c);
            }
            acc
        }
        let half = Scalar::new(1, 2);
        let derivative: Vec<Scalar> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Scalar::from_int(i as i64) * c)
            .collect();
        let c_eval = coeffs;
        let c_grad = derivative;
        DiscreteLagrangian::with_partials(
            "polynomial-well",
            move |_, y: &V, d: &V| {
                V::from_scalar(&half) * d.clone() * d.clone() - horner(&c_eval, y)
            },
            move |_, y: &V, _: &V| -horner(&c_grad, y),
            |_, _, d| d.clone(),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: i64, y: &V, d: &V) -> V {
        (self.eval)(t, y, d)
    }

    pub fn partial_value(&self, t: i64, y: &V, d: &V) -> Result<V> {
        match &self.d_value {
            Some(f) => Ok(f(t, y, d)),
            None => Err(Error::MissingPartial("value slot")),
        }
    }

    pub fn partial_rate(&self, t: i64, y: &V, d: &V) -> Result<V> {
        match &self.d_rate {
            Some(f) => Ok(f(t, y, d)),
            None => Err(Error::MissingPartial("rate slot")),
        }
    }
}

impl DiscreteLagrangian<f64> {
    /// Real-mode Lagrangian whose partials are taken by central differences
    /// with step `h`.
    pub fn with_fd_partials(
        label: impl Into<String>,
        eval: impl Fn(i64, &f64, &f64) -> f64 + Send + Sync + 'static,
        h: f64,
    ) -> Self {
        let eval: LagrangianFn<f64> = Arc::new(eval);
        let ev = Arc::clone(&eval);
        let d_value = move |t: i64, y: &f64, d: &f64| (ev(t, &(y + h), d) - ev(t, &(y - h), d)) / (2.0 * h);
        let ev = Arc::clone(&eval);
        let d_rate = move |t: i64, y: &f64, d: &f64| (ev(t, y, &(d + h)) - ev(t, y, &(d - h))) / (2.0 * h);
        DiscreteLagrangian {
            label: label.into(),
            eval,
            d_value: Some(Arc::new(d_value)),
            d_rate: Some(Arc::new(d_rate)),
        }
    }
}

impl<V> std::fmt::Debug for DiscreteLagrangian<V> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DiscreteLagrangian({})", self.label)
    }
}

/// Boundary data for a variational problem.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryCondition<V> {
    /// `y(lo)` and `y(hi)` are pinned.
    Fixed { left: V, right: V },
    /// Endpoints join the unknowns.
    Natural,
}

/// A discrete variational problem: Lagrangian, path grid (both boundary
/// points included), fractional order, boundary data.
#[derive(Clone, Debug)]
pub struct ActionProblem<V> {
    pub lagrangian: DiscreteLagrangian<V>,
    pub grid: GridDomain,
    pub order: Order,
    pub bc: BoundaryCondition<V>,
}

impl<V: Value> ActionProblem<V> {
    /// Validates the order (positive, at most 1 — the classical endpoint is
    /// admitted so order-1 problems reduce to the plain second difference)
    /// and requires at least two interior grid points.
    pub fn new(
        lagrangian: DiscreteLagrangian<V>,
        grid: GridDomain,
        order: Order,
        bc: BoundaryCondition<V>,
    ) -> Result<Self> {
        if order.alpha().is_zero() {
            return Err(Error::OrderNotStrictlyFractional {
                alpha: order.alpha().to_string(),
                context: "the variational problem",
            });
        }
        if grid.len() < 4 {
            return Err(Error::DomainTooSmall { need: 4, got: grid.len() });
        }
        Ok(ActionProblem { lagrangian, grid, order, bc })
    }

    /// The free interior nodes `{lo+1, ..., hi-1}`.
    pub fn interior(&self) -> GridDomain {
        GridDomain::new(self.grid.a() + 1, self.grid.b() - 1).expect("grid has interior")
    }

    fn require_path(&self, y: &GridFunction<V>) -> Result<()> {
        if y.domain() != self.grid {
            return Err(Error::GridMismatch {
                a1: self.grid.a(),
                b1: self.grid.b(),
                a2: y.domain().a(),
                b2: y.domain().b(),
            });
        }
        Ok(())
    }

    /// Rate slot of the Lagrangian along the path: the left Caputo
    /// difference of `y`, on `{lo+1, ..., hi}`.
    pub fn rates(&self, y: &GridFunction<V>) -> Result<GridFunction<V>> {
        self.require_path(y)?;
        cfc_left(y, &self.order)
    }

    /// `L1` and `L2` along the path, on `{lo+1, ..., hi}`.
    fn partials(&self, y: &GridFunction<V>) -> Result<(GridFunction<V>, GridFunction<V>)> {
        let rates = self.rates(y)?;
        let domain = rates.domain();
        let mut l1 = Vec::with_capacity(domain.len());
        let mut l2 = Vec::with_capacity(domain.len());
        for (t, d) in rates.points() {
            let yv = y.eval(t - 1)?;
            l1.push(self.lagrangian.partial_value(t, yv, d)?);
            l2.push(self.lagrangian.partial_rate(t, yv, d)?);
        }
        Ok((GridFunction::new(domain, l1)?, GridFunction::new(domain, l2)?))
    }
}

/// The action `J(y)`.
pub fn action<V: Value>(problem: &ActionProblem<V>, y: &GridFunction<V>) -> Result<V> {
    let rates = problem.rates(y)?;
    let mut total = V::zero();
    for (t, d) in rates.points() {
        total = total + problem.lagrangian.eval(t, y.eval(t - 1)?, d);
    }
    Ok(total)
}

/// Euler-Lagrange residual on the interior nodes `{lo+1, ..., hi-1}`:
/// `L1(s+1) + (right Riemann difference of the zero-extended L2)(s)`.
/// This is exactly the gradient of the action in the interior values.
pub fn el_residual<V: Value>(
    problem: &ActionProblem<V>,
    y: &GridFunction<V>,
) -> Result<GridFunction<V>> {
    let (l1, l2) = problem.partials(y)?;
    let d = l2.domain();
    // extend L2 by a zero one past the grid so the right difference's
    // kernel sum covers every L2 value
    let extended_domain = GridDomain::new(d.a(), d.b() + 1)?;
    let mut extended = l2.values().to_vec();
    extended.push(V::zero());
    let l2e = GridFunction::new(extended_domain, extended)?;
    let rr = cfr_right(&l2e, &problem.order)?;
    let interior = problem.interior();
    let mut values = Vec::with_capacity(interior.len());
    for s in interior.points() {
        values.push(l1.eval(s + 1)?.clone() + rr.eval(s)?.clone());
    }
    GridFunction::new(interior, values)
}

/// The two endpoint coefficients of the first variation:
/// `(d/dy(lo), d/dy(hi))`. Both vanish at an unconstrained extremal.
pub fn boundary_coefficients<V: Value>(
    problem: &ActionProblem<V>,
    y: &GridFunction<V>,
) -> Result<(V, V)> {
    let (l1, l2) = problem.partials(y)?;
    let d = l2.domain();
    let b_norm = problem.order.b_norm();
    // kernel-weighted sum over all of L2 from its first point
    let mut weighted = V::zero();
    for (t, v) in l2.points() {
        weighted = weighted + V::from_scalar(&cf_kernel(&problem.order, t - d.a())?) * v.clone();
    }
    let left = l1.eval(d.a())?.clone() - V::from_scalar(b_norm) * weighted;
    let right = V::from_scalar(b_norm) * l2.eval(d.b())?.clone();
    Ok((left, right))
}

/// The natural-boundary expression: the kernel-sum boundary pair of the
/// by-parts identity, reported as `|B * sum k(t-a) L2(t)| + |B * L2(hi)|`.
/// For the potential-free battery this is the whole endpoint gradient, so it
/// vanishes at free extremals; with a fixed boundary it is reported, not
/// required to be zero. (The full endpoint gradient, including the `L1`
/// contribution at the left end, is [`boundary_coefficients`].)
pub fn natural_bc_residual<V: Value>(
    problem: &ActionProblem<V>,
    y: &GridFunction<V>,
) -> Result<V> {
    let (_, l2) = problem.partials(y)?;
    let d = l2.domain();
    let b_norm = problem.order.b_norm();
    let mut weighted = V::zero();
    for (t, v) in l2.points() {
        weighted = weighted + V::from_scalar(&cf_kernel(&problem.order, t - d.a())?) * v.clone();
    }
    let left = V::from_scalar(b_norm) * weighted;
    let right = V::from_scalar(b_norm) * l2.eval(d.b())?.clone();
    Ok(left.abs() + right.abs())
}

/// Damped-Newton controls for [`solve_el`].
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub grad_tol: f64,
    pub max_iterations: u32,
    pub hessian_fd_step: f64,
    pub max_line_search: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { grad_tol: 1e-10, max_iterations: 80, hessian_fd_step: 1e-6, max_line_search: 40 }
    }
}

/// Result of the Euler-Lagrange solve.
#[derive(Clone, Debug)]
pub struct ELSolution {
    pub y: GridFunction<f64>,
    pub residual_norm: f64,
    pub action_value: f64,
    pub iterations: u32,
    pub converged: bool,
}

struct Unknowns {
    grid: GridDomain,
    fixed: Option<(f64, f64)>,
}

impl Unknowns {
    fn count(&self) -> usize {
        match self.fixed {
            Some(_) => self.grid.len() - 2,
            None => self.grid.len(),
        }
    }

    fn path(&self, x: &DVector<f64>) -> GridFunction<f64> {
        let values: Vec<f64> = match self.fixed {
            Some((left, right)) => std::iter::once(left)
                .chain(x.iter().copied())
                .chain(std::iter::once(right))
                .collect(),
            None => x.iter().copied().collect(),
        };
        GridFunction::new(self.grid, values).expect("sized to the grid")
    }

    fn initial(&self) -> DVector<f64> {
        match self.fixed {
            Some((left, right)) => {
                let n = self.grid.len();
                let vals: Vec<f64> = (1..n - 1)
                    .map(|i| left + (right - left) * i as f64 / (n - 1) as f64)
                    .collect();
                DVector::from_vec(vals)
            }
            None => DVector::zeros(self.grid.len()),
        }
    }
}

fn gradient(
    problem: &ActionProblem<f64>,
    unknowns: &Unknowns,
    x: &DVector<f64>,
) -> Result<DVector<f64>> {
    let y = unknowns.path(x);
    let interior = el_residual(problem, &y)?;
    match unknowns.fixed {
        Some(_) => Ok(DVector::from_vec(interior.values().to_vec())),
        None => {
            let (left, right) = boundary_coefficients(problem, &y)?;
            let mut g = Vec::with_capacity(unknowns.count());
            g.push(left);
            g.extend_from_slice(interior.values());
            g.push(right);
            Ok(DVector::from_vec(g))
        }
    }
}

/// Minimizes the action over the free values by damped Newton iteration on
/// the assembled gradient, with a finite-difference Hessian and a
/// backtracking line search on the action value. On non-convergence the
/// best iterate found is still returned, flagged accordingly.
pub fn solve_el(problem: &ActionProblem<f64>, cfg: &SolverConfig) -> Result<ELSolution> {
    let unknowns = Unknowns {
        grid: problem.grid,
        fixed: match &problem.bc {
            BoundaryCondition::Fixed { left, right } => Some((*left, *right)),
            BoundaryCondition::Natural => None,
        },
    };
    let n = unknowns.count();
    let mut x = unknowns.initial();
    let mut best_x = x.clone();
    let mut best_norm = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    for iter in 0..cfg.max_iterations {
        iterations = iter;
        let g = gradient(problem, &unknowns, &x)?;
        let norm = g.amax();
        if norm < best_norm {
            best_norm = norm;
            best_x = x.clone();
        }
        if norm <= cfg.grad_tol {
            converged = true;
            break;
        }

        // finite-difference Hessian, column by column
        let h = cfg.hessian_fd_step;
        let mut hess = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut xp = x.clone();
            xp[j] += h;
            let gp = gradient(problem, &unknowns, &xp)?;
            let mut xm = x.clone();
            xm[j] -= h;
            let gm = gradient(problem, &unknowns, &xm)?;
            for i in 0..n {
                hess[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
            }
        }
        // symmetrize against finite-difference noise
        for i in 0..n {
            for j in (i + 1)..n {
                let m = 0.5 * (hess[(i, j)] + hess[(j, i)]);
                hess[(i, j)] = m;
                hess[(j, i)] = m;
            }
        }

        let newton = hess.lu().solve(&g);
        let mut direction = match newton {
            Some(d) if d.iter().all(|v| v.is_finite()) && d.dot(&g) > 0.0 => d,
            _ => g.clone(),
        };

        // backtracking on the action value
        let j0 = action(problem, &unknowns.path(&x))?;
        let slope = direction.dot(&g);
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..cfg.max_line_search {
            let candidate = &x - &direction * step;
            let j1 = action(problem, &unknowns.path(&candidate))?;
            if j1 <= j0 - 1e-4 * step * slope {
                x = candidate;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // try a bare gradient step before giving up on this iterate
            direction = g.clone();
            let mut step = 1.0;
            let mut moved = false;
            for _ in 0..cfg.max_line_search {
                let candidate = &x - &direction * step;
                let j1 = action(problem, &unknowns.path(&candidate))?;
                if j1 < j0 {
                    x = candidate;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
    }

    if !converged {
        let g = gradient(problem, &unknowns, &x)?;
        if g.amax() < best_norm {
            best_x = x.clone();
        }
    }
    let y = unknowns.path(&best_x);
    let residual_norm = el_residual(problem, &y)?.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let action_value = action(problem, &y)?;
    Ok(ELSolution { y, residual_norm, action_value, iterations, converged })
}
