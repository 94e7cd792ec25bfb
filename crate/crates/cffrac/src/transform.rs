//! Nabla discrete Laplace transform, discrete convolution, and the
//! transform-side identities, all in exact rational arithmetic.
//!
//! The transform of a signal `f` defined on the integers from `a` upward is
//!
//! ```text
//! N_a f(z) = sum_{t = a+1}^{inf} (1-z)^(t-1) f(t)
//! ```
//!
//! The signal algebra is deliberately tiny: finite-support charts and
//! geometric signals `c * r^(t-a)`. It is closed under the backward
//! difference and under convolution with finite-support signals, and it
//! admits closed-form transforms, which is all the identities here need.

use crate::error::{Error, Result};
use crate::grid::Order;
use crate::scalar::Scalar;

/// A signal on the integers from `base` upward.
#[derive(Clone, PartialEq, Debug)]
pub enum Signal {
    /// Values `chart[i] = f(base + i)`; zero beyond the chart.
    FiniteSupport { base: i64, values: Vec<Scalar> },
    /// `f(t) = scale * ratio^(t - base)`.
    Geometric { scale: Scalar, ratio: Scalar, base: i64 },
}

impl Signal {
    pub fn finite(base: i64, values: Vec<Scalar>) -> Self {
        Signal::FiniteSupport { base, values }
    }

    pub fn geometric(scale: Scalar, ratio: Scalar, base: i64) -> Result<Self> {
        if ratio.is_zero() {
            return Err(Error::ZeroGeometricRatio);
        }
        Ok(Signal::Geometric { scale, ratio, base })
    }

    /// The constant signal `c` on the integers from `base` upward.
    pub fn constant(c: Scalar, base: i64) -> Self {
        Signal::Geometric { scale: c, ratio: Scalar::one(), base }
    }

    /// The nabla exponential signal with the given rate, `(1/(1-rate))^(t-base)`.
    pub fn nabla_exponential(rate: &Scalar, base: i64) -> Result<Self> {
        if rate.is_one() {
            return Err(Error::NablaExpUndefined);
        }
        Signal::geometric(Scalar::one(), Scalar::one() / (Scalar::one() - rate), base)
    }

    pub fn base(&self) -> i64 {
        match self {
            Signal::FiniteSupport { base, .. } | Signal::Geometric { base, .. } => *base,
        }
    }

    /// Value at `t`; finite-support signals are zero off their chart.
    pub fn eval(&self, t: i64) -> Result<Scalar> {
        match self {
            Signal::FiniteSupport { base, values } => {
                if t < *base {
                    return Ok(Scalar::zero());
                }
                Ok(values.get((t - base) as usize).cloned().unwrap_or_else(Scalar::zero))
            }
            Signal::Geometric { scale, ratio, base } => Ok(scale * &ratio.pow(t - base)?),
        }
    }

    /// Backward difference `f(t) - f(t-1)` as a signal on the same base.
    /// The chart entry at the base itself is irrelevant to any transform
    /// (the transform sum starts one past the base) and is set to zero.
    pub fn nabla(&self) -> Signal {
        match self {
            Signal::FiniteSupport { base, values } => {
                let mut out = Vec::with_capacity(values.len() + 1);
                out.push(Scalar::zero());
                for i in 1..=values.len() {
                    let cur = values.get(i).cloned().unwrap_or_else(Scalar::zero);
                    let prev = values[i - 1].clone();
                    out.push(cur - prev);
                }
                Signal::FiniteSupport { base: *base, values: out }
            }
            Signal::Geometric { scale, ratio, base } => Signal::Geometric {
                scale: scale * &(Scalar::one() - Scalar::one() / ratio),
                ratio: ratio.clone(),
                base: *base,
            },
        }
    }

    fn chart(&self) -> Result<(&i64, &Vec<Scalar>)> {
        match self {
            Signal::FiniteSupport { base, values } => Ok((base, values)),
            Signal::Geometric { .. } => Err(Error::NotFiniteSupport),
        }
    }
}

/// Evaluation point of the transform. Finite-support signals accept any
/// point; geometric signals converge only when `|1-z| * |ratio| < 1`,
/// checked at evaluation time.
#[derive(Clone, PartialEq, Debug)]
pub struct TransformPoint {
    pub z: Scalar,
}

impl TransformPoint {
    pub fn new(z: Scalar) -> Self {
        TransformPoint { z }
    }
}

fn pow_or_divergent(base: &Scalar, k: i64) -> Result<Scalar> {
    base.pow(k).map_err(|_| {
        Error::TransformDiverges(format!("0^{k} arises from the kernel at this point"))
    })
}

/// Exact nabla discrete Laplace transform `N_a f(z)`.
pub fn laplace(f: &Signal, point: &TransformPoint) -> Result<Scalar> {
    let z = &point.z;
    let one_minus_z = Scalar::one() - z;
    match f {
        Signal::FiniteSupport { base, values } => {
            let mut acc = Scalar::zero();
            for (i, v) in values.iter().enumerate().skip(1) {
                if v.is_zero() {
                    continue;
                }
                let t = base + i as i64;
                acc = acc + pow_or_divergent(&one_minus_z, t - 1)? * v;
            }
            Ok(acc)
        }
        Signal::Geometric { scale, ratio, base } => {
            let w = &one_minus_z * ratio;
            if w.abs() >= Scalar::one() {
                return Err(Error::TransformDiverges(format!(
                    "|1-z|*|ratio| = {} >= 1",
                    w.abs()
                )));
            }
            // sum_{t=a+1}^inf (1-z)^(t-1) c r^(t-a) = c (1-z)^a r / (1 - (1-z) r)
            let front = pow_or_divergent(&one_minus_z, *base)?;
            Ok(scale * &front * ratio / (Scalar::one() - w))
        }
    }
}

/// Nabla discrete convolution of two finite-support signals on a common
/// base `a`:
///
/// ```text
/// (f * g)(t) = sum_{s = a+1}^{t} g(t - s + 1) f(s)
/// ```
///
/// where `g` is read in chart coordinates (re-based at 0), so `g(k)` above
/// means the chart entry `k` positions past the base. The result is a
/// finite-support signal on base `a` supported inside
/// `{a+1, ..., a + len(f) + len(g)}`.
pub fn convolve(f: &Signal, g: &Signal) -> Result<Signal> {
    let (fb, fv) = f.chart()?;
    let (gb, gv) = g.chart()?;
    if fb != gb {
        return Err(Error::BaseMismatch { left: *fb, right: *gb });
    }
    let m = fv.len();
    let n = gv.len();
    if m < 2 || n < 2 {
        return Ok(Signal::finite(*fb, vec![Scalar::zero()]));
    }
    let j_max = (m - 1) + (n - 1) - 1;
    let mut out = vec![Scalar::zero(); j_max + 1];
    for (j, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = Scalar::zero();
        for i in 1..=j.min(m - 1) {
            let k = j - i + 1;
            if k <= n - 1 {
                acc = acc + &gv[k] * &fv[i];
            }
        }
        *slot = acc;
    }
    Ok(Signal::finite(*fb, out))
}

/// Both sides of the convolution theorem
/// `N_a(f * g)(z) = N_a f(z) * N g(z)`, computed independently. The second
/// factor is the base-0 transform of `g`'s chart, matching the convention
/// under which the convolution is defined. Exact equality is the contract.
pub fn convolution_theorem_check(
    f: &Signal,
    g: &Signal,
    point: &TransformPoint,
) -> Result<(Scalar, Scalar)> {
    let lhs = laplace(&convolve(f, g)?, point)?;
    let (_, gv) = g.chart()?;
    let g_rebased = Signal::finite(0, gv.clone());
    let rhs = laplace(f, point)? * laplace(&g_rebased, point)?;
    Ok((lhs, rhs))
}

/// Both sides of the transform-of-difference identity
/// `N_a(nabla f)(z) = z N_a f(z) - (1-z)^a f(a)`, computed independently.
pub fn nabla_shift_check(f: &Signal, point: &TransformPoint) -> Result<(Scalar, Scalar)> {
    let lhs = laplace(&f.nabla(), point)?;
    let a = f.base();
    let front = pow_or_divergent(&(Scalar::one() - &point.z), a)?;
    let rhs = &point.z * &laplace(f, point)? - front * f.eval(a)?;
    Ok((lhs, rhs))
}

/// Transform of the left Riemann fractional difference of a finite-support
/// signal, evaluated by splitting the difference into its finite head and
/// geometric tail. Past the support the inner convolution
/// `g(t) = sum f(s) k(t-s)` decays geometrically with ratio `1-alpha`, so
/// the tail transforms in closed form through the signal algebra.
pub fn laplace_of_discrete_operators(
    f: &Signal,
    order: &Order,
    point: &TransformPoint,
) -> Result<Scalar> {
    order.require_strictly_fractional("the Riemann difference transform")?;
    let (base, values) = f.chart()?;
    let a = *base;
    let kernel_base = order.one_minus_alpha();
    if values.len() < 2 {
        return Ok(Scalar::zero());
    }
    let last = a + values.len() as i64 - 1;
    // inner convolution on {a, ..., last}, empty at t = a
    let mut inner = Vec::with_capacity(values.len());
    for t in a..=last {
        let mut acc = Scalar::zero();
        for s in (a + 1)..=t {
            acc = acc + kernel_base.pow(t - s)? * f.eval(s)?;
        }
        inner.push(acc);
    }
    let mut head = vec![Scalar::zero()];
    for i in 1..inner.len() {
        head.push(order.b_norm() * &(inner[i].clone() - inner[i - 1].clone()));
    }
    let head_signal = Signal::finite(a, head);
    // past the support the difference is geometric with ratio 1-alpha:
    // its value at last+1 is -alpha B g(last)
    let g_last = inner.last().expect("nonempty").clone();
    let tail_scale = -(order.alpha() * order.b_norm()) * &g_last / &kernel_base;
    let mut out = laplace(&head_signal, point)?;
    if !tail_scale.is_zero() {
        let tail = Signal::geometric(tail_scale, kernel_base, last)?;
        out = out + laplace(&tail, point)?;
    }
    Ok(out)
}

/// Closed form the Riemann difference transform must equal:
/// `B/(1-alpha) * z F(z) / (z - rate)` with `F = N_a f` and `rate` the
/// kernel rate. The evaluation point must avoid the pole at the rate.
pub fn riemann_transform_closed_form(
    f: &Signal,
    order: &Order,
    point: &TransformPoint,
) -> Result<Scalar> {
    order.require_strictly_fractional("the Riemann difference transform")?;
    let rate = order.kernel_rate()?;
    if point.z == rate {
        return Err(Error::TransformDiverges(format!("evaluation at the pole z = {rate}")));
    }
    let big_f = laplace(f, point)?;
    let coeff = order.b_norm() / &order.one_minus_alpha();
    Ok(coeff * &point.z * big_f / (&point.z - &rate))
}
