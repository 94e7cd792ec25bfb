//! Discrete fractional differences and sums with exponential kernel.
//!
//! For a function on `{a, ..., b}` and order `alpha` with kernel
//! `k(j) = (1-alpha)^j`:
//!
//! - left Caputo difference, on `{a+1, ..., b}`:
//!   `B(alpha) * sum_{s=a+1..t} (f(s)-f(s-1)) * k(t-s)`
//! - right Caputo difference, on `{a, ..., b-1}`:
//!   `B(alpha) * sum_{s=t..b-1} (f(s)-f(s+1)) * k(s-t)`
//! - left Riemann difference, on `{a+1, ..., b}`: the backward difference of
//!   `g(t) = sum_{s=a+1..t} f(s) k(t-s)`, scaled by `B(alpha)`, with the
//!   empty-sum convention `g(a) = 0`
//! - right Riemann difference, on `{a, ..., b-1}`: minus the forward
//!   difference of `h(t) = sum_{s=t..b-1} f(s) k(s-t)`, scaled by `B(alpha)`,
//!   with `h(b) = 0`
//! - the fractional sums inverting the Riemann differences:
//!   `(1-alpha)/B * u(t) + alpha/B * (running sum of u)`
//!
//! All operators are exact over rational values and also run over `f64`.
//! Results are returned only on the index sets where the defining sums are
//! nonempty; callers needing alignment restrict explicitly.
//!
//! Orders 0 and 1 are accepted by the four differences (the limits are exact
//! under the `0^0 = 1` kernel convention) but rejected by the sums, whose
//! inverse-pair structure needs `0 < alpha < 1`. One caveat worth pinning
//! down: at order 1 the Riemann differences reduce to the plain first-order
//! differences only away from the anchored endpoint. At `t = a+1` the
//! empty-sum convention gives `f(a+1)` rather than `f(a+1) - f(a)` (mirrored
//! on the right); the limit `alpha -> 1` of the defining sum does the same,
//! so this is a property of the operator, not of the convention.

use crate::error::{Error, Result};
use crate::grid::{cf_kernel, delta_diff, nabla_diff, GridDomain, GridFunction, Order, Value};
use crate::scalar::Scalar;

/// Which endpoint an operator is anchored at.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Operator family selector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OpKind {
    Caputo,
    Riemann,
    Sum,
}

fn require_grid(f: &GridFunction<impl Value>, need: usize) -> Result<GridDomain> {
    let d = f.domain();
    if d.len() < need {
        return Err(Error::DomainTooSmall { need, got: d.len() });
    }
    Ok(d)
}

fn scale<V: Value>(c: &Scalar, v: &V) -> V {
    V::from_scalar(c) * v.clone()
}

/// Left Caputo fractional difference on `{a+1, ..., b}`.
pub fn cfc_left<V: Value>(f: &GridFunction<V>, order: &Order) -> Result<GridFunction<V>> {
    require_grid(f, 2)?;
    let diff = nabla_diff(f)?;
    let domain = diff.domain();
    let mut values = Vec::with_capacity(domain.len());
    for t in domain.points() {
        let mut acc = V::zero();
        for (s, df) in diff.points().take_while(|(s, _)| *s <= t) {
            let w = order.b_norm() * &cf_kernel(order, t - s)?;
            acc = acc + scale(&w, df);
        }
        values.push(acc);
    }
    GridFunction::new(domain, values)
}

/// Right Caputo fractional difference on `{a, ..., b-1}`.
pub fn cfc_right<V: Value>(f: &GridFunction<V>, order: &Order) -> Result<GridFunction<V>> {
    require_grid(f, 2)?;
    let diff = delta_diff(f)?; // forward difference on {a, ..., b-1}
    let domain = diff.domain();
    let mut values = Vec::with_capacity(domain.len());
    for t in domain.points() {
        let mut acc = V::zero();
        for (s, df) in diff.points().skip_while(|(s, _)| *s < t) {
            let w = order.b_norm() * &cf_kernel(order, s - t)?;
            // the definition convolves -delta f
            acc = acc - scale(&w, df);
        }
        values.push(acc);
    }
    GridFunction::new(domain, values)
}

/// Left Riemann fractional difference on `{a+1, ..., b}`.
pub fn cfr_left<V: Value>(f: &GridFunction<V>, order: &Order) -> Result<GridFunction<V>> {
    let d = require_grid(f, 2)?;
    let a = d.a();
    // g(t) = sum_{s=a+1..t} f(s) k(t-s); empty at t = a
    let inner_domain = GridDomain::new(a, d.b())?;
    let mut inner = Vec::with_capacity(inner_domain.len());
    for t in inner_domain.points() {
        let mut acc = V::zero();
        for s in (a + 1)..=t {
            let w = cf_kernel(order, t - s)?;
            acc = acc + scale(&w, f.eval(s)?);
        }
        inner.push(acc);
    }
    let g = GridFunction::new(inner_domain, inner)?;
    let dg = nabla_diff(&g)?;
    Ok(dg.map(|v| scale(order.b_norm(), v)))
}

/// Right Riemann fractional difference on `{a, ..., b-1}`.
pub fn cfr_right<V: Value>(f: &GridFunction<V>, order: &Order) -> Result<GridFunction<V>> {
    let d = require_grid(f, 2)?;
    let b = d.b();
    // h(t) = sum_{s=t..b-1} f(s) k(s-t); empty at t = b
    let inner_domain = GridDomain::new(d.a(), b)?;
    let mut inner = Vec::with_capacity(inner_domain.len());
    for t in inner_domain.points() {
        let mut acc = V::zero();
        for s in t..=(b - 1) {
            let w = cf_kernel(order, s - t)?;
            acc = acc + scale(&w, f.eval(s)?);
        }
        inner.push(acc);
    }
    let h = GridFunction::new(inner_domain, inner)?;
    let dh = delta_diff(&h)?;
    Ok(dh.map(|v| -scale(order.b_norm(), v)))
}

/// Left fractional sum. `base` is the anchor `a` of the operator: for a
/// function on the full grid `{a, ..., b}` pass `base = a` (the running sum
/// skips the anchored endpoint); for a difference living on `{a+1, ..., b}`
/// pass `base = a` as well. Requires `0 < alpha < 1`.
pub fn cf_sum_left<V: Value>(u: &GridFunction<V>, order: &Order, base: i64) -> Result<GridFunction<V>> {
    order.require_strictly_fractional("the fractional sum")?;
    let d = u.domain();
    if base != d.a() && base != d.a() - 1 {
        return Err(Error::InvalidBase { base, lo: d.a(), hi: d.b() });
    }
    let pointwise = order.one_minus_alpha() / order.b_norm();
    let cumulative = order.alpha() / order.b_norm();
    let mut values = Vec::with_capacity(d.len());
    let mut running = V::zero();
    for (t, v) in u.points() {
        if t >= base + 1 {
            running = running + v.clone();
        }
        values.push(scale(&pointwise, v) + scale(&cumulative, &running));
    }
    GridFunction::new(d, values)
}

/// Right fractional sum, mirror of [`cf_sum_left`]: the running sum covers
/// `{t, ..., base-1}`, so pass `base = b` for a function on `{a, ..., b}`
/// and for a difference living on `{a, ..., b-1}` alike.
pub fn cf_sum_right<V: Value>(u: &GridFunction<V>, order: &Order, base: i64) -> Result<GridFunction<V>> {
    order.require_strictly_fractional("the fractional sum")?;
    let d = u.domain();
    if base != d.b() && base != d.b() + 1 {
        return Err(Error::InvalidBase { base, lo: d.a(), hi: d.b() });
    }
    let pointwise = order.one_minus_alpha() / order.b_norm();
    let cumulative = order.alpha() / order.b_norm();
    let mut values = vec![V::zero(); d.len()];
    let mut running = V::zero();
    for t in (d.a()..=d.b()).rev() {
        let v = u.eval(t)?;
        if t <= base - 1 {
            running = running + v.clone();
        }
        values[(t - d.a()) as usize] = scale(&pointwise, v) + scale(&cumulative, &running);
    }
    GridFunction::new(d, values)
}

/// Correction term between the Caputo and Riemann differences:
/// `caputo = riemann - gap` holds exactly pointwise. On the left the gap is
/// `B/(1-alpha) * f(a) * k(t-a)` on `{a+1, ..., b}`; on the right it is
/// `B/(1-alpha) * f(b) * k(b-t)` on `{a, ..., b-1}`. Undefined at order 1.
pub fn caputo_riemann_gap<V: Value>(
    f: &GridFunction<V>,
    order: &Order,
    side: Side,
) -> Result<GridFunction<V>> {
    if order.alpha().is_one() {
        return Err(Error::GapUndefinedAtOrderOne);
    }
    let d = require_grid(f, 2)?;
    let coeff = order.b_norm() / &order.one_minus_alpha();
    match side {
        Side::Left => {
            let anchor_value = f.eval(d.a())?.clone();
            let domain = GridDomain::new(d.a() + 1, d.b())?;
            let mut values = Vec::with_capacity(domain.len());
            for t in domain.points() {
                let w = &coeff * &cf_kernel(order, t - d.a())?;
                values.push(scale(&w, &anchor_value));
            }
            GridFunction::new(domain, values)
        }
        Side::Right => {
            let anchor_value = f.eval(d.b())?.clone();
            let domain = GridDomain::new(d.a(), d.b() - 1)?;
            let mut values = Vec::with_capacity(domain.len());
            for t in domain.points() {
                let w = &coeff * &cf_kernel(order, d.b() - t)?;
                values.push(scale(&w, &anchor_value));
            }
            GridFunction::new(domain, values)
        }
    }
}

fn require_same_grid(f: &GridFunction<Scalar>, g: &GridFunction<Scalar>) -> Result<GridDomain> {
    let (df, dg) = (f.domain(), g.domain());
    if df != dg {
        return Err(Error::GridMismatch { a1: df.a(), b1: df.b(), a2: dg.a(), b2: dg.b() });
    }
    Ok(df)
}

/// Both sides of the Riemann integration-by-parts identity
/// `sum_{t=a+1..b-1} f(t) (left Riemann g)(t) = sum_{t=a+1..b-1} (right Riemann f)(t) g(t)`,
/// computed independently. The contract is exact equality.
pub fn by_parts_riemann_check(
    f: &GridFunction<Scalar>,
    g: &GridFunction<Scalar>,
    order: &Order,
) -> Result<(Scalar, Scalar)> {
    order.require_strictly_fractional("integration by parts")?;
    let d = require_same_grid(f, g)?;
    if d.b() - d.a() < 3 {
        return Err(Error::DomainTooSmall { need: 4, got: d.len() });
    }
    let left_of_g = cfr_left(g, order)?;
    let right_of_f = cfr_right(f, order)?;
    let mut lhs = Scalar::zero();
    let mut rhs = Scalar::zero();
    for t in (d.a() + 1)..=(d.b() - 1) {
        lhs = lhs + f.eval(t)? * left_of_g.eval(t)?;
        rhs = rhs + right_of_f.eval(t)? * g.eval(t)?;
    }
    Ok((lhs, rhs))
}

/// Both sides of the sum-form by-parts identity
/// `sum phi * (left sum of psi) = sum psi * (right sum of phi)` over the
/// interior `{a+1, ..., b-1}`; exact by a finite Fubini swap.
pub fn by_parts_sum_check(
    phi: &GridFunction<Scalar>,
    psi: &GridFunction<Scalar>,
    order: &Order,
) -> Result<(Scalar, Scalar)> {
    order.require_strictly_fractional("integration by parts")?;
    let d = require_same_grid(phi, psi)?;
    if d.b() - d.a() < 3 {
        return Err(Error::DomainTooSmall { need: 4, got: d.len() });
    }
    let sum_of_psi = cf_sum_left(psi, order, d.a())?;
    let sum_of_phi = cf_sum_right(phi, order, d.b())?;
    let mut lhs = Scalar::zero();
    let mut rhs = Scalar::zero();
    for t in (d.a() + 1)..=(d.b() - 1) {
        lhs = lhs + phi.eval(t)? * sum_of_psi.eval(t)?;
        rhs = rhs + psi.eval(t)? * sum_of_phi.eval(t)?;
    }
    Ok((lhs, rhs))
}

/// A fully specified discrete operator: order, side, family and anchor.
#[derive(Clone, Debug)]
pub struct DiscreteOperatorSpec {
    pub order: Order,
    pub side: Side,
    pub kind: OpKind,
    pub base: i64,
}

impl DiscreteOperatorSpec {
    /// Applies the operator to `f`, validating that the anchor matches the
    /// function's grid.
    pub fn apply<V: Value>(&self, f: &GridFunction<V>) -> Result<GridFunction<V>> {
        let d = f.domain();
        match (self.kind, self.side) {
            (OpKind::Sum, Side::Left) => cf_sum_left(f, &self.order, self.base),
            (OpKind::Sum, Side::Right) => cf_sum_right(f, &self.order, self.base),
            (kind, side) => {
                let expected = if side == Side::Left { d.a() } else { d.b() };
                if self.base != expected {
                    return Err(Error::InvalidBase { base: self.base, lo: d.a(), hi: d.b() });
                }
                match (kind, side) {
                    (OpKind::Caputo, Side::Left) => cfc_left(f, &self.order),
                    (OpKind::Caputo, Side::Right) => cfc_right(f, &self.order),
                    (OpKind::Riemann, Side::Left) => cfr_left(f, &self.order),
                    (OpKind::Riemann, Side::Right) => cfr_right(f, &self.order),
                    (OpKind::Sum, _) => unreachable!(),
                }
            }
        }
    }
}
