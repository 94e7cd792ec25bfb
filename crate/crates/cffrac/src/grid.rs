//! Integer time-scale grids, grid functions, first-order differences,
//! reflection, and the exponential kernels shared by every discrete operator.
//!
//! The grid is always `{a, a+1, ..., b}` with unit step. Values are exact
//! rationals by default; the same operators run over `f64` for the
//! floating-point variational path, so grid functions and operators are
//! generic over [`Value`].

use std::fmt;
use std::ops::{Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Value types a grid function can carry: exact rationals or doubles.
pub trait Value:
    Clone + PartialEq + fmt::Debug + Zero + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_scalar(s: &Scalar) -> Self;
    fn abs(&self) -> Self;
}

impl Value for Scalar {
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn abs(&self) -> Self {
        Scalar::abs(self)
    }
}

impl Value for f64 {
    fn from_scalar(s: &Scalar) -> Self {
        s.to_f64()
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Fractional order `alpha` in `[0, 1]` together with its normalization
/// constant. The kernel rate `-alpha/(1-alpha)` is derived on demand and is
/// undefined at `alpha = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Order {
    alpha: Scalar,
    b_norm: Scalar,
}

impl Order {
    /// Order with the default normalization `B(alpha) = 1`.
    pub fn new(alpha: Scalar) -> Result<Self> {
        Order::with_norm(alpha, Scalar::one())
    }

    /// Order with an explicit (nonzero) normalization constant.
    pub fn with_norm(alpha: Scalar, b_norm: Scalar) -> Result<Self> {
        if alpha.is_negative() || alpha > Scalar::one() {
            return Err(Error::OrderOutOfRange(alpha.to_string()));
        }
        if b_norm.is_zero() {
            return Err(Error::ZeroNormalization);
        }
        Ok(Order { alpha, b_norm })
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn b_norm(&self) -> &Scalar {
        &self.b_norm
    }

    pub fn one_minus_alpha(&self) -> Scalar {
        Scalar::one() - &self.alpha
    }

    /// Rate of the exponential kernel, `-alpha/(1-alpha)`.
    pub fn kernel_rate(&self) -> Result<Scalar> {
        if self.alpha.is_one() {
            return Err(Error::KernelRateUndefined);
        }
        Ok(-(&self.alpha / &self.one_minus_alpha()))
    }

    /// True when `0 < alpha < 1`; the fractional sums and the continuous
    /// operators require this.
    pub fn is_strictly_fractional(&self) -> bool {
        !self.alpha.is_zero() && !self.alpha.is_one()
    }

    pub(crate) fn require_strictly_fractional(&self, context: &'static str) -> Result<()> {
        if self.is_strictly_fractional() {
            Ok(())
        } else {
            Err(Error::OrderNotStrictlyFractional { alpha: self.alpha.to_string(), context })
        }
    }
}

impl fmt::Debug for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Order(alpha = {}, B = {})", self.alpha, self.b_norm)
    }
}

/// Finite integer grid `{a, a+1, ..., b}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridDomain {
    a: i64,
    b: i64,
}

impl GridDomain {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a > b {
            return Err(Error::InvalidDomain { a, b });
        }
        Ok(GridDomain { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn len(&self) -> usize {
        (self.b - self.a + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: i64) -> bool {
        self.a <= t && t <= self.b
    }

    pub fn points(&self) -> impl Iterator<Item = i64> {
        self.a..=self.b
    }
}

impl fmt::Debug for GridDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// A function on a finite integer grid, one value per point.
#[derive(Clone, PartialEq)]
pub struct GridFunction<V = Scalar> {
    domain: GridDomain,
    values: Vec<V>,
}

impl<V: Value> GridFunction<V> {
    pub fn new(domain: GridDomain, values: Vec<V>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::LengthMismatch {
                lo: domain.a,
                hi: domain.b,
                expected: domain.len(),
                got: values.len(),
            });
        }
        Ok(GridFunction { domain, values })
    }

    pub fn from_fn(domain: GridDomain, f: impl FnMut(i64) -> V) -> Self {
        let values = domain.points().map(f).collect();
        GridFunction { domain, values }
    }

    pub fn constant(domain: GridDomain, value: V) -> Self {
        GridFunction { domain, values: vec![value; domain.len()] }
    }

    pub fn domain(&self) -> GridDomain {
        self.domain
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    /// Value at grid point `t`; evaluation outside the domain is an error.
    pub fn eval(&self, t: i64) -> Result<&V> {
        if !self.domain.contains(t) {
            return Err(Error::OutOfDomain { t, lo: self.domain.a, hi: self.domain.b });
        }
        Ok(&self.values[(t - self.domain.a) as usize])
    }

    pub fn points(&self) -> impl Iterator<Item = (i64, &V)> {
        self.domain.points().zip(self.values.iter())
    }

    /// Restriction to a subgrid.
    pub fn restrict(&self, sub: GridDomain) -> Result<Self> {
        if sub.a < self.domain.a || sub.b > self.domain.b {
            return Err(Error::OutOfDomain {
                t: if sub.a < self.domain.a { sub.a } else { sub.b },
                lo: self.domain.a,
                hi: self.domain.b,
            });
        }
        let lo = (sub.a - self.domain.a) as usize;
        let hi = (sub.b - self.domain.a) as usize;
        Ok(GridFunction { domain: sub, values: self.values[lo..=hi].to_vec() })
    }

    /// Reflection `t -> center - t`. The result lives on
    /// `[center - b, center - a]` with the value order reversed.
    pub fn reflect_about(&self, center: i64) -> Self {
        let domain = GridDomain { a: center - self.domain.b, b: center - self.domain.a };
        let mut values = self.values.clone();
        values.reverse();
        GridFunction { domain, values }
    }

    pub fn map<W: Value>(&self, f: impl Fn(&V) -> W) -> GridFunction<W> {
        GridFunction { domain: self.domain, values: self.values.iter().map(f).collect() }
    }
}

impl<V: Value> fmt::Debug for GridFunction<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridFunction{:?} {:?}", self.domain, self.values)
    }
}

/// Backward difference `f(t) - f(t-1)` on `{a+1, ..., b}`.
pub fn nabla_diff<V: Value>(f: &GridFunction<V>) -> Result<GridFunction<V>> {
    let d = f.domain();
    if d.len() < 2 {
        return Err(Error::DomainTooSmall { need: 2, got: d.len() });
    }
    let domain = GridDomain { a: d.a + 1, b: d.b };
    let values = f.values.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
    Ok(GridFunction { domain, values })
}

/// Forward difference `f(t+1) - f(t)` on `{a, ..., b-1}`.
pub fn delta_diff<V: Value>(f: &GridFunction<V>) -> Result<GridFunction<V>> {
    let d = f.domain();
    if d.len() < 2 {
        return Err(Error::DomainTooSmall { need: 2, got: d.len() });
    }
    let domain = GridDomain { a: d.a, b: d.b - 1 };
    let values = f.values.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
    Ok(GridFunction { domain, values })
}

/// Reflection `(Qf)(t) = f(a+b-t)` on the function's own grid. Involutive.
pub fn q_reflect<V: Value>(f: &GridFunction<V>) -> GridFunction<V> {
    f.reflect_about(f.domain().a + f.domain().b)
}

/// Nabla exponential `(1/(1-rate))^k`, exact for any integer `k`.
pub fn nabla_exp(rate: &Scalar, k: i64) -> Result<Scalar> {
    if rate.is_one() {
        return Err(Error::NablaExpUndefined);
    }
    (Scalar::one() / (Scalar::one() - rate)).pow(k)
}

/// Delta exponential `(1+rate)^k`, exact for any integer `k`.
pub fn delta_exp(rate: &Scalar, k: i64) -> Result<Scalar> {
    let base = Scalar::one() + rate;
    if base.is_zero() {
        return Err(Error::DeltaExpUndefined);
    }
    base.pow(k)
}

/// Discrete exponential kernel `(1-alpha)^k` for `k >= 0`, with `0^0 = 1`
/// so that order 1 yields the Kronecker kernel.
pub fn cf_kernel(order: &Order, k: i64) -> Result<Scalar> {
    if k < 0 {
        return Err(Error::NegativeKernelExponent(k));
    }
    order.one_minus_alpha().pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(a: i64, vals: &[i64]) -> GridFunction<Scalar> {
        let domain = GridDomain::new(a, a + vals.len() as i64 - 1).unwrap();
        GridFunction::new(domain, vals.iter().map(|&v| Scalar::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn nabla_of_constant_is_zero() {
        let f = gf(0, &[7, 7, 7, 7, 7, 7]);
        let d = nabla_diff(&f).unwrap();
        assert_eq!(d.domain(), GridDomain::new(1, 5).unwrap());
        assert!(d.values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn nabla_of_linear_is_one() {
        let f = GridFunction::from_fn(GridDomain::new(0, 3).unwrap(), Scalar::from_int);
        let d = nabla_diff(&f).unwrap();
        assert!(d.values().iter().all(|v| v.is_one()));
    }

    #[test]
    fn nabla_of_squares() {
        let f = gf(1, &[1, 4, 9, 16]);
        let d = nabla_diff(&f).unwrap();
        assert_eq!(d.domain(), GridDomain::new(2, 4).unwrap());
        assert_eq!(d.values(), gf(2, &[3, 5, 7]).values());
    }

    #[test]
    fn delta_of_squares() {
        let f = gf(1, &[1, 4, 9, 16]);
        let d = delta_diff(&f).unwrap();
        assert_eq!(d.domain(), GridDomain::new(1, 3).unwrap());
        assert_eq!(d.values(), gf(1, &[3, 5, 7]).values());
    }

    #[test]
    fn diff_needs_two_points() {
        let f = gf(0, &[1]);
        assert!(matches!(nabla_diff(&f), Err(Error::DomainTooSmall { .. })));
        assert!(matches!(delta_diff(&f), Err(Error::DomainTooSmall { .. })));
    }

    #[test]
    fn reflection_reverses() {
        let f = gf(0, &[1, 2, 3]);
        let r = q_reflect(&f);
        assert_eq!(r.domain(), f.domain());
        assert_eq!(r.values(), gf(0, &[3, 2, 1]).values());
        // symmetric function is a fixed point
        let s = gf(0, &[1, 2, 1]);
        assert_eq!(q_reflect(&s), s);
    }

    #[test]
    fn nabla_exp_values() {
        assert_eq!(nabla_exp(&Scalar::zero(), 5).unwrap(), Scalar::one());
        assert_eq!(nabla_exp(&Scalar::from_int(-1), 2).unwrap(), Scalar::new(1, 4));
        assert_eq!(nabla_exp(&Scalar::new(1, 2), -1).unwrap(), Scalar::new(1, 2));
        assert!(nabla_exp(&Scalar::one(), 1).is_err());
    }

    #[test]
    fn delta_exp_values() {
        assert_eq!(delta_exp(&Scalar::zero(), 9).unwrap(), Scalar::one());
        // rate -1/2 corresponds to order 1/3: (1-2a)/(1-a) = 1/2
        assert_eq!(delta_exp(&Scalar::new(-1, 2), 1).unwrap(), Scalar::new(1, 2));
        assert_eq!(delta_exp(&Scalar::one(), 3).unwrap(), Scalar::from_int(8));
        assert!(delta_exp(&Scalar::from_int(-1), 1).is_err());
    }

    #[test]
    fn kernel_values() {
        let half = Order::new(Scalar::new(1, 2)).unwrap();
        assert_eq!(cf_kernel(&half, 3).unwrap(), Scalar::new(1, 8));
        let zero = Order::new(Scalar::zero()).unwrap();
        assert_eq!(cf_kernel(&zero, 11).unwrap(), Scalar::one());
        let one = Order::new(Scalar::one()).unwrap();
        assert_eq!(cf_kernel(&one, 0).unwrap(), Scalar::one());
        assert_eq!(cf_kernel(&one, 1).unwrap(), Scalar::zero());
        assert!(cf_kernel(&half, -1).is_err());
    }

    #[test]
    fn order_invariants() {
        assert!(Order::new(Scalar::new(3, 2)).is_err());
        assert!(Order::new(Scalar::from_int(-1)).is_err());
        assert!(Order::new(Scalar::one()).unwrap().kernel_rate().is_err());
        let third = Order::new(Scalar::new(1, 3)).unwrap();
        assert_eq!(third.kernel_rate().unwrap(), Scalar::new(-1, 2));
        assert!(Order::with_norm(Scalar::new(1, 2), Scalar::zero()).is_err());
    }

    fn small_scalar() -> impl Strategy<Value = Scalar> {
        (-60i64..=60, 1i64..=12).prop_map(|(p, q)| Scalar::new(p, q))
    }

    proptest! {
        #[test]
        fn reflection_is_involutive(vals in proptest::collection::vec(small_scalar(), 2..10), a in -5i64..5) {
            let domain = GridDomain::new(a, a + vals.len() as i64 - 1).unwrap();
            let f = GridFunction::new(domain, vals).unwrap();
            prop_assert_eq!(q_reflect(&q_reflect(&f)), f.clone());
            // value multiset is preserved (here: sorted value list)
            let mut orig = f.values().to_vec();
            let mut refl = q_reflect(&f).values().to_vec();
            orig.sort();
            refl.sort();
            prop_assert_eq!(orig, refl);
        }

        // nabla of the reflection is the negated, reflected delta difference
        #[test]
        fn nabla_delta_mixing(vals in proptest::collection::vec(small_scalar(), 2..10), a in -5i64..5) {
            let domain = GridDomain::new(a, a + vals.len() as i64 - 1).unwrap();
            let f = GridFunction::new(domain, vals).unwrap();
            let lhs = nabla_diff(&q_reflect(&f)).unwrap();
            let delta = delta_diff(&f).unwrap();
            let center = domain.a() + domain.b();
            for (t, v) in lhs.points() {
                let rhs = -delta.eval(center - t).unwrap().clone();
                prop_assert_eq!(v.clone(), rhs);
            }
        }

        #[test]
        fn nabla_exp_addition_law(
            p in -6i64..=6, q in 1i64..=6, k in -8i64..=8, m in -8i64..=8,
        ) {
            let rate = Scalar::new(p, q);
            prop_assume!(!rate.is_one());
            let lhs = nabla_exp(&rate, k).unwrap() * nabla_exp(&rate, m).unwrap();
            prop_assert_eq!(lhs, nabla_exp(&rate, k + m).unwrap());
        }
    }
}
