//! Truncated formal power series over exact rationals.
//!
//! A [`TruncSeries`] of order `N` stores the coefficients of `x^0..=x^N`.
//! Binary operations truncate to the smaller order of their operands, so a
//! result never claims more precision than its inputs carry.
//!
//! Generating functions are built from their quadratic functional equations
//! `F = u0 + u1 F + u2 F^2` by coefficient recursion, never from radicals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binom_gen, int, pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    /// Builds a series of the given order, padding with zeros or dropping
    /// coefficients past `order`.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The series `x` (or `0` at order 0).
    pub fn x(order: usize) -> Self {
        Self::new(vec![Rational::zero(), Rational::one()], order)
    }

    /// `1 / (1 - c x)`.
    pub fn geometric(c: &Rational, order: usize) -> Self {
        Self::new((0..=order).map(|k| pow(c, k as i64)).collect(), order)
    }

    /// `(1 + x)^s` for rational `s`.
    pub fn binomial(s: &Rational, order: usize) -> Self {
        Self::new((0..=order).map(|k| binom_gen(s, k as u64)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `[x^n]`, or an error past the truncation order.
    pub fn coeff(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::BeyondOrder {
            requested: n,
            order: self.order(),
        })
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise the order of a truncated series");
        Self::new(self.coeffs[..=order].to_vec(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `x^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); k.min(n + 1)];
        coeffs.extend(self.coeffs.iter().take((n + 1).saturating_sub(k)).cloned());
        Self::new(coeffs, n)
    }

    /// `f(c x)`.
    pub fn dilate(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &p);
            p *= c;
        }
        TruncSeries { coeffs }
    }

    /// Formal derivative. The result has order one less (order 0 stays 0).
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let coeffs = (1..=n).map(|k| &self.coeffs[k] * int(k as i64)).collect();
        Self::new(coeffs, n.saturating_sub(1))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f^s` for rational `s`; needs `f(0) = 1`.
    pub fn pow_rational(&self, s: &Rational) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::InvalidParameter(format!(
                "rational power needs constant term 1, got {}",
                self.constant_term()
            )));
        }
        let tail = self - &Self::one(self.order());
        Self::binomial(s, self.order()).compose(&tail)
    }

    /// Multiplicative inverse; needs `f(0) != 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::InvalidParameter("reciprocal of a series with f(0) = 0".into()));
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let s: Rational = (1..=k).map(|i| &self.coeffs[i] * &out[k - i]).sum();
            out.push(-(s * &inv0));
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `f(g(x))` by Horner's scheme; `g(0)` must vanish.
    pub fn compose(&self, g: &TruncSeries) -> Result<Self> {
        if !g.constant_term().is_zero() {
            return Err(Error::NonZeroConstant(g.constant_term().clone()));
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = &acc * &g;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> Self {
        self.dilate(&-Rational::one())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let n = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..=n).map(|k| f(&self.coeffs[k], &other.coeffs[k])).collect(),
        }
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        TruncSeries { coeffs }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: TruncSeries) -> TruncSeries {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Solves `F = u0 + u1 F + u2 F^2` coefficient by coefficient.
///
/// `F(0)` is taken to be `u0(0)` and must be consistent with the constant
/// terms of `u1`, `u2`. At each order the unknown coefficient appears with
/// multiplier `1 - u1(0) - 2 u2(0) F(0)`; when that vanishes the solution is
/// either not unique or does not exist and the order is reported.
pub fn solve_quadratic(u0: &TruncSeries, u1: &TruncSeries, u2: &TruncSeries) -> Result<TruncSeries> {
    let n = u0.order().min(u1.order()).min(u2.order());
    let f0 = u0.coeffs[0].clone();
    let lead = &u0.coeffs[0] + &u1.coeffs[0] * &f0 + &u2.coeffs[0] * &f0 * &f0;
    if lead != f0 {
        return Err(Error::FunctionalEquation { kind: "inconsistent constant term", order: 0 });
    }
    let pivot = Rational::one() - &u1.coeffs[0] - int(2) * &u2.coeffs[0] * &f0;
    let mut f = vec![f0];
    // sq[m] = [x^m] F^2, filled as F becomes known
    let mut sq: Vec<Rational> = vec![&f[0] * &f[0]];
    for k in 1..=n {
        // right-hand side at order k with F_k set to zero
        let mut rhs = u0.coeffs[k].clone();
        for i in 1..=k {
            rhs += &u1.coeffs[i] * &f[k - i];
        }
        let partial_sq: Rational = (1..k).map(|j| &f[j] * &f[k - j]).sum();
        rhs += &u2.coeffs[0] * &partial_sq;
        for i in 1..=k {
            rhs += &u2.coeffs[i] * &sq[k - i];
        }
        if pivot.is_zero() {
            let kind = if rhs.is_zero() { "non-unique coefficient" } else { "inconsistent coefficient" };
            return Err(Error::FunctionalEquation { kind, order: k });
        }
        let fk = rhs / &pivot;
        sq.push(partial_sq + int(2) * &f[0] * &fk);
        f.push(fk);
    }
    Ok(TruncSeries { coeffs: f })
}

/// `F - u0 - u1 F - u2 F^2`.
pub fn quadratic_residual(f: &TruncSeries, u0: &TruncSeries, u1: &TruncSeries, u2: &TruncSeries) -> TruncSeries {
    let ff = f * f;
    &(&(f - u0) - &(u1 * f)) - &(u2 * &ff)
}

/// Coefficients `(u0, u1, u2)` of `F = u0 + u1 F + u2 F^2` for the weighted
/// Schröder generating function.
pub fn schroder_equation(a: &Rational, b: &Rational, order: usize) -> [TruncSeries; 3] {
    let x = TruncSeries::x(order);
    [TruncSeries::one(order), x.scale(a), x.scale(b)]
}

/// `S(a, b; x) = 1 + a x S + b x S^2`.
pub fn schroder(a: &Rational, b: &Rational, order: usize) -> TruncSeries {
    let [u0, u1, u2] = schroder_equation(a, b, order);
    solve_quadratic(&u0, &u1, &u2).expect("x divides u1 and u2")
}

/// `C(a, b; x) = 1 + (a - b) x C + b x C^2`.
pub fn catalan(a: &Rational, b: &Rational, order: usize) -> TruncSeries {
    schroder(&(a - b), b, order)
}

/// `M(a, b; x) = 1 + a x M + b x^2 M^2`.
pub fn motzkin(a: &Rational, b: &Rational, order: usize) -> TruncSeries {
    let x = TruncSeries::x(order);
    let u2 = x.shift(1).scale(b);
    solve_quadratic(&TruncSeries::one(order), &x.scale(a), &u2).expect("x divides u1 and u2")
}

/// Generating function of `r`-colored Dyck paths with no same-colored `dd`:
/// `S_r = 1 + x S_r + (r - 1) x S_r^2`.
pub fn colored_schroder(r: u32, order: usize) -> TruncSeries {
    schroder(&int(1), &int(r as i64 - 1), order)
}

/// Equation for the `udu`-avoiding paths:
/// `T0 = 1 + r x - (r - 1) x T0 + (r - 1) x T0^2`.
pub fn udu_free_equation(r: u32, order: usize) -> [TruncSeries; 3] {
    let x = TruncSeries::x(order);
    let r1 = int(r as i64 - 1);
    [
        &TruncSeries::one(order) + &x.scale(&int(r as i64)),
        x.scale(&-r1.clone()),
        x.scale(&r1),
    ]
}

pub fn udu_free(r: u32, order: usize) -> TruncSeries {
    let [u0, u1, u2] = udu_free_equation(r, order);
    solve_quadratic(&u0, &u1, &u2).expect("x divides u1 and u2")
}

/// `A_r(x, y)` at a fixed `y`: `A = 1 + x (1 - y) A + x (y + r - 1) A^2`,
/// marking same-colored `dd` pairs with `y`.
pub fn dd_bivariate(r: u32, y: &Rational, order: usize) -> TruncSeries {
    let x = TruncSeries::x(order);
    let u1 = x.scale(&(Rational::one() - y));
    let u2 = x.scale(&(y + int(r as i64 - 1)));
    solve_quadratic(&TruncSeries::one(order), &u1, &u2).expect("x divides u1 and u2")
}

/// `T_r(x, y)` at a fixed `y`, marking `udu` windows with `y`:
/// `T = 1 + r x + r x y (T - 1) + (r - 1) x (T - 1) T`.
pub fn udu_bivariate(r: u32, y: &Rational, order: usize) -> TruncSeries {
    let x = TruncSeries::x(order);
    let rr = int(r as i64);
    let r1 = int(r as i64 - 1);
    let u0 = &TruncSeries::one(order) + &x.scale(&(&rr * (Rational::one() - y)));
    let u1 = x.scale(&(&rr * y - &r1));
    let u2 = x.scale(&r1);
    solve_quadratic(&u0, &u1, &u2).expect("x divides u1 and u2")
}

/// Recovers the rows `[x^n] F(x, y)` as polynomials in `y` (ascending
/// coefficients) from exact specializations `y = 0, 1, 2, ...`, assuming
/// row `n` has degree at most `n`.
pub fn bivariate_rows(order: usize, specialize: impl Fn(&Rational) -> TruncSeries) -> Vec<Vec<Rational>> {
    let ys: Vec<Rational> = (0..=order as i64).map(int).collect();
    let samples: Vec<TruncSeries> = ys.iter().map(&specialize).collect();
    (0..=order)
        .map(|n| {
            let vals: Vec<Rational> = samples[..=n].iter().map(|s| s.coeffs[n].clone()).collect();
            interpolate(&ys[..=n], &vals)
        })
        .collect()
}

/// Monomial coefficients of the polynomial through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    // Newton divided differences
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut poly = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (y - xs[i]) + dd[i]
        let mut next = vec![Rational::zero(); n];
        for k in 0..n {
            if poly[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &poly[k];
            }
            next[k] -= &poly[k] * &xs[i];
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly
}

/// `[x^n] psi(f(x))` for the unique `f = x u(f)`, via
/// `(1/n) [t^(n-1)] psi'(t) u(t)^n`. Valid for `n >= 1`.
pub fn lagrange_coeff(psi: &TruncSeries, u: &TruncSeries, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidParameter("Lagrange inversion needs n >= 1".into()));
    }
    if u.constant_term().is_zero() {
        return Err(Error::InvalidParameter("Lagrange inversion needs u(0) != 0".into()));
    }
    if psi.order() < n {
        return Err(Error::BeyondOrder { requested: n, order: psi.order() });
    }
    if u.order() < n - 1 {
        return Err(Error::BeyondOrder { requested: n - 1, order: u.order() });
    }
    let dpsi = psi.derivative().truncate(n - 1);
    let un = u.truncate(n - 1).pow(n);
    let prod = &dpsi * &un;
    Ok(&prod.coeffs[n - 1] / int(n as i64))
}

/// Parameter `b^(2^m) / a^(2^m - 1)` of the `m`-th tower series.
pub fn tower_parameter(m: u32, a: &Rational, b: &Rational) -> Rational {
    let e = 1i64 << m;
    pow(b, e) * pow(a, 1 - e)
}

/// Builds `Z_m` by `Z_0 = S(-a, b; x)`,
/// `Z_(k+1)(x) = Z_k(x) Z_k((b/a)^(2^k) x Z_k(x)^2)`.
///
/// Each stage is checked against `Z = 1 - a x Z + c_k x Z^2` with
/// `c_k = b^(2^k) / a^(2^k - 1)`; a nonzero residual is reported at its first
/// order instead of being assumed away.
pub fn z_series(m: u32, a: &Rational, b: &Rational, order: usize) -> Result<TruncSeries> {
    if a.is_zero() {
        return Err(Error::InvalidParameter("the tower needs a != 0".into()));
    }
    let x = TruncSeries::x(order);
    let mut z = schroder(&-a, b, order);
    for k in 0..m {
        let e = 1i64 << k;
        let c = pow(b, e) * pow(a, -e);
        let inner = (&x * &(&z * &z)).scale(&c);
        z = &z * &z.compose(&inner)?;
        let [u0, u1, u2] = schroder_equation(&-a, &tower_parameter(k + 1, a, b), order);
        let residual = quadratic_residual(&z, &u0, &u1, &u2);
        if let Some(bad) = residual.first_nonzero() {
            return Err(Error::FunctionalEquation { kind: "tower residual", order: bad });
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn ints(s: &TruncSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "{c}");
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn ring_basics() {
        let p = TruncSeries::from_ints(&[1, 1], 4);
        assert_eq!(&p * &p, TruncSeries::from_ints(&[1, 2, 1], 4));
        assert_eq!(&p + &TruncSeries::zero(4), p);
        assert_eq!((&p * &TruncSeries::from_ints(&[1, 2], 2)).order(), 2);
        assert_eq!(p.shift(2), TruncSeries::from_ints(&[0, 0, 1, 1], 4));
        assert_eq!(p.shift(9), TruncSeries::zero(4));
        assert_eq!(
            TruncSeries::from_ints(&[1, 2, 3, 4], 3).derivative(),
            TruncSeries::from_ints(&[2, 6, 12], 2)
        );
        assert_eq!(TruncSeries::binomial(&int(3), 5), TruncSeries::from_ints(&[1, 3, 3, 1], 5));
    }

    #[test]
    fn coefficient_past_order_is_an_error() {
        let s = TruncSeries::one(3);
        assert_eq!(s.coeff(4), Err(Error::BeyondOrder { requested: 4, order: 3 }));
    }

    #[test]
    fn reciprocal_of_large_schroder() {
        let s = colored_schroder(2, 16);
        let inv = s.reciprocal().unwrap();
        assert_eq!(&s * &inv, TruncSeries::one(16));
    }

    #[test]
    fn composition() {
        let f = colored_schroder(3, 10);
        assert_eq!(f.compose(&TruncSeries::x(10)).unwrap(), f);
        let geo = TruncSeries::geometric(&int(1), 8);
        let x2 = TruncSeries::x(8).shift(1);
        assert_eq!(geo.compose(&x2).unwrap(), TruncSeries::from_ints(&[1, 0, 1, 0, 1, 0, 1, 0, 1], 8));
        assert!(matches!(
            geo.compose(&TruncSeries::one(8)),
            Err(Error::NonZeroConstant(_))
        ));
    }

    #[test]
    fn schroder_inverse_relation() {
        let n = 20;
        let s = colored_schroder(2, n);
        let inner = -&(&TruncSeries::x(n) * &(&s * &s));
        assert_eq!(&s * &s.compose(&inner).unwrap(), TruncSeries::one(n));
    }

    #[test]
    fn generating_functions_from_equations() {
        assert_eq!(ints(&colored_schroder(2, 6)), [1, 2, 6, 22, 90, 394, 1806]);
        assert_eq!(ints(&colored_schroder(3, 4)), [1, 3, 15, 93, 645]);
        assert_eq!(ints(&udu_free(2, 6)), [1, 2, 2, 6, 14, 42, 122]);
        assert_eq!(ints(&schroder(&int(1), &int(1), 4)), [1, 2, 6, 22, 90]);
        assert_eq!(ints(&catalan(&int(1), &int(1), 4)), [1, 1, 2, 5, 14]);
        assert_eq!(ints(&motzkin(&int(1), &int(1), 6)), [1, 1, 2, 4, 9, 21, 51]);
        assert_eq!(schroder(&int(-1), &int(1), 4), TruncSeries::one(4));
        // b = 0 degenerates to a geometric series
        assert_eq!(schroder(&int(3), &int(0), 5), TruncSeries::geometric(&int(3), 5));
    }

    #[test]
    fn solver_reports_bad_orders() {
        let one = TruncSeries::one(4);
        let x = TruncSeries::x(4);
        // F = 1 + 1*F has no solution with F(0) = 1
        assert_eq!(
            solve_quadratic(&one, &one, &x),
            Err(Error::FunctionalEquation { kind: "inconsistent constant term", order: 0 })
        );
        // F = 0 + 1*F + 0: every F works, first free coefficient is order 1
        assert_eq!(
            solve_quadratic(&TruncSeries::zero(4), &one, &TruncSeries::zero(4)),
            Err(Error::FunctionalEquation { kind: "non-unique coefficient", order: 1 })
        );
        // F = x + 1*F: pivot vanishes while the right side does not
        assert_eq!(
            solve_quadratic(&x, &one, &TruncSeries::zero(4)),
            Err(Error::FunctionalEquation { kind: "inconsistent coefficient", order: 1 })
        );
        // nonzero constant terms are fine when the pivot is nonzero:
        // F = 1/2 + F^2/2 ... F(0) = 1/2 requires 1/2 = 1/2 + 1/8, inconsistent
        let half = TruncSeries::constant(frac(1, 2), 4);
        assert!(solve_quadratic(&half, &TruncSeries::zero(4), &half).is_err());
        // F = 2 - F/2 + 0 with F(0) = 2: consistent only if 2 = 2 - 1
        assert!(solve_quadratic(&TruncSeries::constant(int(2), 4), &TruncSeries::constant(frac(-1, 2), 4), &TruncSeries::zero(4)).is_err());
    }

    #[test]
    fn lagrange_examples() {
        let t = TruncSeries::x(6);
        let one_plus_t = TruncSeries::from_ints(&[1, 1], 6);
        assert_eq!(lagrange_coeff(&t, &one_plus_t.pow(2), 3).unwrap(), int(5));
        assert_eq!(lagrange_coeff(&t.pow(2), &one_plus_t, 2).unwrap(), int(1));
        // alpha = S_r - 1 satisfies alpha = x (1 + alpha)((r - 1)(1 + alpha) + 1)
        let u2 = &one_plus_t * &TruncSeries::from_ints(&[2, 1], 6);
        assert_eq!(lagrange_coeff(&t, &u2, 3).unwrap(), int(22));
        let u3 = &one_plus_t * &TruncSeries::from_ints(&[3, 2], 6);
        assert_eq!(lagrange_coeff(&t, &u3, 3).unwrap(), int(93));
        assert!(lagrange_coeff(&t, &u2, 0).is_err());
        assert!(lagrange_coeff(&t, &t, 2).is_err());
        assert!(matches!(lagrange_coeff(&t.truncate(2), &u2, 3), Err(Error::BeyondOrder { .. })));
    }

    #[test]
    fn lagrange_agrees_with_solver() {
        let order = 12;
        let t = TruncSeries::x(order);
        let one_plus_t = TruncSeries::from_ints(&[1, 1], order);
        for r in 2..=5u32 {
            let u = &one_plus_t * &TruncSeries::from_ints(&[r as i64, r as i64 - 1], order);
            let s = colored_schroder(r, order);
            // beta = T0 - 1 satisfies beta = x (r + (r - 1) beta (beta + 1))
            let v = TruncSeries::from_ints(&[r as i64, r as i64 - 1, r as i64 - 1], order);
            let t0 = udu_free(r, order);
            for n in 1..=order {
                assert_eq!(&lagrange_coeff(&t, &u, n).unwrap(), s.coeff(n).unwrap());
                assert_eq!(&lagrange_coeff(&t, &v, n).unwrap(), t0.coeff(n).unwrap());
            }
        }
    }

    #[test]
    fn tower_examples() {
        for m in 0..=3 {
            assert_eq!(z_series(m, &int(1), &int(1), 12).unwrap(), TruncSeries::one(12));
        }
        assert_eq!(z_series(1, &int(1), &int(2), 6).unwrap().coeff(1).unwrap(), &int(3));
        assert_eq!(
            z_series(2, &int(2), &int(3), 14).unwrap(),
            schroder(&int(-2), &frac(81, 8), 14)
        );
        assert!(z_series(1, &int(0), &int(1), 4).is_err());
        assert_eq!(
            z_series(2, &frac(1, 2), &int(3), 10).unwrap(),
            z_series(2, &frac(1, 2), &int(-3), 10).unwrap()
        );
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let xs: Vec<Rational> = (0..4).map(int).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| x * x * x - int(2) * x + int(5)).collect();
        assert_eq!(interpolate(&xs, &ys), vec![int(5), int(-2), int(0), int(1)]);
    }

    #[test]
    fn dd_bivariate_rows_at_r2() {
        let rows = bivariate_rows(4, |y| dd_bivariate(2, y, 4));
        // n = 2: 6 paths without a same-colored pair, 2 with one
        assert_eq!(rows[2], vec![int(6), int(2), int(0)]);
        let total: Rational = rows[4].iter().sum();
        assert_eq!(total, int(14 * 16));
    }

    #[test]
    fn pow_rational_squares_back() {
        let s = colored_schroder(3, 10);
        let half = s.pow_rational(&frac(1, 2)).unwrap();
        assert_eq!(&half * &half, s);
        assert!(TruncSeries::from_ints(&[2, 1], 3).pow_rational(&frac(1, 2)).is_err());
    }

    #[test]
    fn display_form() {
        let s = TruncSeries::new(vec![int(1), int(0), frac(-1, 2)], 3);
        assert_eq!(s.to_string(), "1 + -1/2x^2 + O(x^4)");
    }
}
