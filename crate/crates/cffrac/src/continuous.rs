//! Quadrature-based operators with exponential kernel on the real line.
//!
//! With rate `r = -alpha/(1-alpha)` and `c = B(alpha)/(1-alpha)`, the four
//! derivatives of a function on `[a, b]` are
//!
//! ```text
//! left Caputo    c * integral_a^t f'(s) exp(r (t-s)) ds
//! right Caputo  -c * integral_t^b f'(s) exp(r (s-t)) ds
//! left Riemann   c * d/dt integral_a^t f(s) exp(r (t-s)) ds
//! right Riemann -c * d/dt integral_t^b f(s) exp(r (s-t)) ds
//! ```
//!
//! and the fractional integrals inverting the Riemann pair are
//! `(1-alpha)/B * u(t) + alpha/B * (running integral of u)`.
//!
//! The Riemann derivatives are evaluated through the analytically expanded
//! form `c * (f(t) + r * integral f exp)` rather than by differencing the
//! integral numerically; the kernel is smooth and nonsingular, so adaptive
//! Simpson with a Richardson stopping estimate handles every integrand here.
//! Orders 0 and 1 are rejected: the rate degenerates at both endpoints.

use std::sync::Arc;

use crate::discrete::Side;
use crate::error::{Error, Result};
use crate::grid::Order;

/// Real interval `[a, b]` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Interval { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Quadrature and finite-difference controls.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureConfig {
    /// Absolute tolerance the adaptive rule refines down to.
    pub abs_tol: f64,
    /// Maximum bisection depth before giving up.
    pub max_subdivisions: u32,
    /// Step for the central-difference fallback when a closed-form
    /// derivative is not supplied.
    pub fd_step: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-10, max_subdivisions: 48, fd_step: 1e-5 }
    }
}

impl QuadratureConfig {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        QuadratureConfig { abs_tol, ..Default::default() }
    }

    /// Same configuration with the tolerance tightened by `factor`; used for
    /// the inner integrals of nested checks so their noise stays below the
    /// outer refinement threshold.
    pub fn tighter(&self, factor: f64) -> Self {
        QuadratureConfig { abs_tol: self.abs_tol / factor, ..*self }
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function handle with an optional closed-form derivative.
/// Handles are immutable and cheap to clone, so many evaluation points can
/// be processed in parallel.
#[derive(Clone)]
pub struct SmoothFunction {
    label: String,
    eval: RealFn,
    deriv: Option<RealFn>,
}

impl SmoothFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SmoothFunction { label: label.into(), eval: Arc::new(f), deriv: None }
    }

    pub fn with_deriv(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SmoothFunction { label: label.into(), eval: Arc::new(f), deriv: Some(Arc::new(df)) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn has_closed_form_deriv(&self) -> bool {
        self.deriv.is_some()
    }

    /// Closed-form derivative when available, central difference otherwise.
    pub fn deriv_at(&self, t: f64, fd_step: f64) -> f64 {
        match &self.deriv {
            Some(df) => df(t),
            None => (self.eval(t + fd_step) - self.eval(t - fd_step)) / (2.0 * fd_step),
        }
    }

    /// The reflected function `t -> f(center - t)`.
    pub fn reflected(&self, center: f64) -> SmoothFunction {
        let f = Arc::clone(&self.eval);
        let eval: RealFn = Arc::new(move |t| f(center - t));
        let deriv = self.deriv.as_ref().map(|df| {
            let df = Arc::clone(df);
            let out: RealFn = Arc::new(move |t| -df(center - t));
            out
        });
        SmoothFunction { label: format!("{}-reflected", self.label), eval, deriv }
    }
}

impl std::fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SmoothFunction({})", self.label)
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    max_subdivisions: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let estimate = left + right - whole;
    if estimate.abs() <= 15.0 * tol {
        return Ok(left + right + estimate / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureDidNotConverge { max_subdivisions });
    }
    let half_tol = 0.5 * tol;
    let l = adapt(f, a, m, fa, flm, fm, left, half_tol, depth - 1, max_subdivisions)?;
    let r = adapt(f, m, b, fm, frm, fb, right, half_tol, depth - 1, max_subdivisions)?;
    Ok(l + r)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` (requires `a <= b`).
/// Non-finite integrand values are never accepted as converged, so an inner
/// evaluation that signals failure through NaN surfaces as non-convergence.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, q: &QuadratureConfig) -> Result<f64> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    let out = adapt(f, a, b, fa, fm, fb, whole, q.abs_tol, q.max_subdivisions, q.max_subdivisions)?;
    if !out.is_finite() {
        return Err(Error::QuadratureDidNotConverge { max_subdivisions: q.max_subdivisions });
    }
    Ok(out)
}

struct RealOrder {
    rate: f64,
    scale: f64,      // B/(1-alpha)
    pointwise: f64,  // (1-alpha)/B
    cumulative: f64, // alpha/B
}

fn real_order(order: &Order, context: &'static str) -> Result<RealOrder> {
    order.require_strictly_fractional(context)?;
    let rate = order.kernel_rate()?.to_f64();
    let scale = (order.b_norm() / &order.one_minus_alpha()).to_f64();
    let pointwise = (order.one_minus_alpha() / order.b_norm()).to_f64();
    let cumulative = (order.alpha() / order.b_norm()).to_f64();
    Ok(RealOrder { rate, scale, pointwise, cumulative })
}

/// Left Caputo derivative at `t`.
pub fn cfc_left_c(
    f: &SmoothFunction,
    order: &Order,
    a: f64,
    t: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let ro = real_order(order, "the continuous Caputo derivative")?;
    let h = q.fd_step;
    let value = integrate(&|s| f.deriv_at(s, h) * ((ro.rate * (t - s)).exp()), a, t, q)?;
    Ok(ro.scale * value)
}

/// Right Caputo derivative at `t`.
pub fn cfc_right_c(
    f: &SmoothFunction,
    order: &Order,
    t: f64,
    b: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let ro = real_order(order, "the continuous Caputo derivative")?;
    let h = q.fd_step;
    let value = integrate(&|s| f.deriv_at(s, h) * ((ro.rate * (s - t)).exp()), t, b, q)?;
    Ok(-ro.scale * value)
}

/// Left Riemann derivative at `t`, via the expanded form
/// `B/(1-alpha) * (f(t) + rate * integral_a^t f(s) exp(rate (t-s)) ds)`.
pub fn cfr_left_c(
    f: &SmoothFunction,
    order: &Order,
    a: f64,
    t: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let ro = real_order(order, "the continuous Riemann derivative")?;
    let value = integrate(&|s| f.eval(s) * ((ro.rate * (t - s)).exp()), a, t, q)?;
    Ok(ro.scale * (f.eval(t) + ro.rate * value))
}

/// Right Riemann derivative at `t`, expanded the same way.
pub fn cfr_right_c(
    f: &SmoothFunction,
    order: &Order,
    t: f64,
    b: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let ro = real_order(order, "the continuous Riemann derivative")?;
    let value = integrate(&|s| f.eval(s) * ((ro.rate * (s - t)).exp()), t, b, q)?;
    Ok(ro.scale * (f.eval(t) + ro.rate * value))
}

/// Left fractional integral at `t`.
pub fn cf_int_left_c(
    u: &SmoothFunction,
    order: &Order,
    a: f64,
    t: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let ro = real_order(order, "the continuous fractional integral")?;
    let value = integrate(&|s| u.eval(s), a, t, q)?;
    Ok(ro.pointwise * u.eval(t) + ro.cumulative * value)
}

/// Right fractional integral at `t`.
pub fn cf_int_right_c(
    u: &SmoothFunction,
    order: &Order,
    t: f64,
    b: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let ro = real_order(order, "the continuous fractional integral")?;
    let value = integrate(&|s| u.eval(s), t, b, q)?;
    Ok(ro.pointwise * u.eval(t) + ro.cumulative * value)
}

/// Left exponential integral operator `integral_a^x exp(rate (t-a)) phi(t) dt`.
pub fn exp_int_left_c(
    phi: &SmoothFunction,
    rate: f64,
    a: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    integrate(&|t| (rate * (t - a)).exp() * phi.eval(t), a, x, q)
}

/// Right exponential integral operator `integral_x^b exp(rate (b-t)) phi(t) dt`.
pub fn exp_int_right_c(
    phi: &SmoothFunction,
    rate: f64,
    x: f64,
    b: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    integrate(&|t| (rate * (b - t)).exp() * phi.eval(t), x, b, q)
}

fn nan_on_error(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// Composition of the fractional integral with the Caputo derivative:
/// returns the composed value at `x` and the target `f(x) - f(a)` (left) or
/// `f(x) - f(b)` (right). The inner derivative runs at a tolerance tightened
/// by 100 so its noise stays below the outer refinement threshold.
pub fn caputo_inversion_check_c(
    f: &SmoothFunction,
    order: &Order,
    side: Side,
    interval: &Interval,
    x: f64,
    q: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let inner_q = q.tighter(100.0);
    let (a, b) = (interval.a(), interval.b());
    match side {
        Side::Left => {
            let deriv = SmoothFunction::new("caputo-left", {
                let f = f.clone();
                let order = order.clone();
                move |s| nan_on_error(cfc_left_c(&f, &order, a, s, &inner_q))
            });
            let lhs = cf_int_left_c(&deriv, order, a, x, q)?;
            Ok((lhs, f.eval(x) - f.eval(a)))
        }
        Side::Right => {
            let deriv = SmoothFunction::new("caputo-right", {
                let f = f.clone();
                let order = order.clone();
                move |s| nan_on_error(cfc_right_c(&f, &order, s, b, &inner_q))
            });
            let lhs = cf_int_right_c(&deriv, order, x, b, q)?;
            Ok((lhs, f.eval(x) - f.eval(b)))
        }
    }
}

/// Which way round a Riemann derivative and its fractional integral are
/// composed in [`riemann_inversion_check_c`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositionOrder {
    IntegralAfterDerivative,
    DerivativeAfterIntegral,
}

/// Round-trip of the Riemann derivative and its fractional integral, either
/// way round; returns the composed value at `x` and the target `f(x)`.
pub fn riemann_inversion_check_c(
    f: &SmoothFunction,
    order: &Order,
    side: Side,
    comp: CompositionOrder,
    interval: &Interval,
    x: f64,
    q: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let inner_q = q.tighter(100.0);
    let (a, b) = (interval.a(), interval.b());
    let f_inner = f.clone();
    let order_inner = order.clone();
    let lhs = match (side, comp) {
        (Side::Left, CompositionOrder::IntegralAfterDerivative) => {
            let inner = SmoothFunction::new("riemann-left", move |s| {
                nan_on_error(cfr_left_c(&f_inner, &order_inner, a, s, &inner_q))
            });
            cf_int_left_c(&inner, order, a, x, q)?
        }
        (Side::Left, CompositionOrder::DerivativeAfterIntegral) => {
            let inner = SmoothFunction::new("integral-left", move |s| {
                nan_on_error(cf_int_left_c(&f_inner, &order_inner, a, s, &inner_q))
            });
            cfr_left_c(&inner, order, a, x, q)?
        }
        (Side::Right, CompositionOrder::IntegralAfterDerivative) => {
            let inner = SmoothFunction::new("riemann-right", move |s| {
                nan_on_error(cfr_right_c(&f_inner, &order_inner, s, b, &inner_q))
            });
            cf_int_right_c(&inner, order, x, b, q)?
        }
        (Side::Right, CompositionOrder::DerivativeAfterIntegral) => {
            let inner = SmoothFunction::new("integral-right", move |s| {
                nan_on_error(cf_int_right_c(&f_inner, &order_inner, s, b, &inner_q))
            });
            cfr_right_c(&inner, order, x, b, q)?
        }
    };
    Ok((lhs, f.eval(x)))
}

/// Both sides of the Riemann integration-by-parts identity
/// `integral_a^b f (left Riemann g) = integral_a^b (right Riemann f) g`,
/// each through its own nested quadrature.
pub fn by_parts_c_check(
    f: &SmoothFunction,
    g: &SmoothFunction,
    order: &Order,
    interval: &Interval,
    q: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let inner_q = q.tighter(100.0);
    let (a, b) = (interval.a(), interval.b());
    let lhs = {
        let g = g.clone();
        let order = order.clone();
        let inner = move |x: f64| nan_on_error(cfr_left_c(&g, &order, a, x, &inner_q));
        integrate(&|x| f.eval(x) * inner(x), a, b, q)?
    };
    let rhs = {
        let f = f.clone();
        let order = order.clone();
        let inner = move |x: f64| nan_on_error(cfr_right_c(&f, &order, x, b, &inner_q));
        integrate(&|x| inner(x) * g.eval(x), a, b, q)?
    };
    Ok((lhs, rhs))
}

/// Both sides of the Caputo integration-by-parts identity with its boundary
/// term. The boundary the identity needs is the exponential integral of `g`
/// over the whole interval, weighted by the value of `f` at the anchored
/// endpoint:
///
/// ```text
/// integral_a^b (left Caputo f) g
///   = integral_a^b f (right Riemann g)
///   - B/(1-alpha) * f(a) * integral_a^b exp(rate (t-a)) g(t) dt
/// ```
///
/// which follows from the Caputo-Riemann relation plus the Riemann by-parts
/// identity. The mirrored right-Caputo version uses the kernel anchored at
/// `b` and the weight `f(b)`.
pub fn by_parts_caputo_c_check(
    f: &SmoothFunction,
    g: &SmoothFunction,
    order: &Order,
    side: Side,
    interval: &Interval,
    q: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let ro = real_order(order, "integration by parts")?;
    let inner_q = q.tighter(100.0);
    let (a, b) = (interval.a(), interval.b());
    match side {
        Side::Left => {
            let lhs = {
                let f = f.clone();
                let order = order.clone();
                let inner = move |t: f64| nan_on_error(cfc_left_c(&f, &order, a, t, &inner_q));
                integrate(&|t| inner(t) * g.eval(t), a, b, q)?
            };
            let bulk = {
                let g = g.clone();
                let order = order.clone();
                let inner = move |t: f64| nan_on_error(cfr_right_c(&g, &order, t, b, &inner_q));
                integrate(&|t| f.eval(t) * inner(t), a, b, q)?
            };
            let boundary = ro.scale * f.eval(a) * exp_int_left_c(g, ro.rate, a, b, q)?;
            Ok((lhs, bulk - boundary))
        }
        Side::Right => {
            let lhs = {
                let f = f.clone();
                let order = order.clone();
                let inner = move |t: f64| nan_on_error(cfc_right_c(&f, &order, t, b, &inner_q));
                integrate(&|t| inner(t) * g.eval(t), a, b, q)?
            };
            let bulk = {
                let g = g.clone();
                let order = order.clone();
                let inner = move |t: f64| nan_on_error(cfr_left_c(&g, &order, a, t, &inner_q));
                integrate(&|t| f.eval(t) * inner(t), a, b, q)?
            };
            let boundary = ro.scale * f.eval(b) * exp_int_right_c(g, ro.rate, a, b, q)?;
            Ok((lhs, bulk - boundary))
        }
    }
}

/// The fixed test battery: every function carries a closed-form derivative.
pub fn battery() -> Vec<SmoothFunction> {
    vec![
        SmoothFunction::with_deriv("one", |_| 1.0, |_| 0.0),
        SmoothFunction::with_deriv("ramp", |t| t, |_| 1.0),
        SmoothFunction::with_deriv("square", |t| t * t, |t| 2.0 * t),
        SmoothFunction::with_deriv("exp-decay", |t| (-t).exp(), |t| -(-t).exp()),
        SmoothFunction::with_deriv("exp-half", |t| (0.5 * t).exp(), |t| 0.5 * (0.5 * t).exp()),
        SmoothFunction::with_deriv("sine", f64::sin, f64::cos),
    ]
}
