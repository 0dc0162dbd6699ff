//! Riordan arrays `(d(x), h(x))` over truncated series.
//!
//! Column `k` of the array has generating function `d(x) h(x)^k`. The
//! arrays for the tabulated statistics all share `h = (r-1) x S_r(x)^2`
//! (or `b x C(a,b;x)^2` for weighted paths) and differ in `d`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, to_integer, BigInt, Rational};
use crate::paths::Statistic;
use crate::series::{self, TruncSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiordanArray {
    d: TruncSeries,
    h: TruncSeries,
    proper: bool,
}

impl RiordanArray {
    pub fn new(d: TruncSeries, h: TruncSeries) -> Result<Self> {
        if d.constant_term().is_zero() {
            return Err(Error::InvalidParameter("Riordan array needs d(0) != 0".into()));
        }
        if !h.constant_term().is_zero() {
            return Err(Error::InvalidParameter("Riordan array needs h(0) = 0".into()));
        }
        let proper = h.coeff(1).map(|c| !c.is_zero()).unwrap_or(false);
        Ok(RiordanArray { d, h, proper })
    }

    pub fn d(&self) -> &TruncSeries {
        &self.d
    }

    pub fn h(&self) -> &TruncSeries {
        &self.h
    }

    /// `h'(0) != 0`.
    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn order(&self) -> usize {
        self.d.order().min(self.h.order())
    }

    fn check_row(&self, n: usize) -> Result<()> {
        if n > self.order() {
            return Err(Error::BeyondOrder { requested: n, order: self.order() });
        }
        Ok(())
    }

    /// Generating function of column `k`, `d h^k`.
    pub fn column(&self, k: usize) -> TruncSeries {
        &self.d * &self.h.pow(k)
    }

    /// `[x^n] d(x) h(x)^k`.
    pub fn entry(&self, n: usize, k: usize) -> Result<Rational> {
        self.check_row(n)?;
        if self.proper && k > n {
            return Ok(Rational::zero());
        }
        Ok(self.column(k).coeff(n)?.clone())
    }

    /// Rows `0..=n_max`, each of length `n + 1`.
    pub fn triangle(&self, n_max: usize) -> Result<Vec<Vec<Rational>>> {
        self.check_row(n_max)?;
        let mut rows: Vec<Vec<Rational>> = (0..=n_max).map(|n| Vec::with_capacity(n + 1)).collect();
        let mut col = self.d.clone();
        for k in 0..=n_max {
            for (n, row) in rows.iter_mut().enumerate().skip(k) {
                row.push(col.coeff(n)?.clone());
            }
            col = &col * &self.h;
        }
        Ok(rows)
    }

    /// Action on a column vector with generating function `a`: `d(x) a(h(x))`.
    pub fn apply(&self, a: &TruncSeries) -> Result<TruncSeries> {
        Ok(&self.d * &a.compose(&self.h)?)
    }
}

fn check_colors(r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("arrays need r >= 2, got {r}")));
    }
    Ok(())
}

fn check_weight(b: &Rational) -> Result<()> {
    if b.is_zero() {
        return Err(Error::InvalidParameter("arrays need b != 0".into()));
    }
    Ok(())
}

/// Shared multiplier `(r - 1) x S_r^2`, plus `S_r^2`.
fn colored_parts(r: u32, order: usize) -> (TruncSeries, TruncSeries, TruncSeries) {
    let s = series::colored_schroder(r, order);
    let s2 = &s * &s;
    let h = (&TruncSeries::x(order) * &s2).scale(&int(r as i64 - 1));
    (s, s2, h)
}

/// `(S_r^2 + 1/(r-1), (r-1) x S_r^2)`; entries exceed the point counts by
/// `1/(r-1)` at `(0, 0)` only.
pub fn points_array(r: u32, order: usize) -> Result<RiordanArray> {
    check_colors(r)?;
    let (_, s2, h) = colored_parts(r, order);
    let head = TruncSeries::constant(Rational::new(BigInt::one(), BigInt::from(r - 1)), order);
    RiordanArray::new(&s2 + &head, h)
}

/// `(S_r^2 (1 + (r-1) S_r), (r-1) x S_r^2)`.
pub fn usteps_array(r: u32, order: usize) -> Result<RiordanArray> {
    check_colors(r)?;
    let (s, s2, h) = colored_parts(r, order);
    let tail = &TruncSeries::one(order) + &s.scale(&int(r as i64 - 1));
    RiordanArray::new(&s2 * &tail, h)
}

/// `(r S_r^2, (r-1) x S_r^2)`.
pub fn peaks_array(r: u32, order: usize) -> Result<RiordanArray> {
    check_colors(r)?;
    let (_, s2, h) = colored_parts(r, order);
    RiordanArray::new(s2.scale(&int(r as i64)), h)
}

fn weighted_parts(a: &Rational, b: &Rational, order: usize) -> (TruncSeries, TruncSeries, TruncSeries) {
    let c = series::catalan(a, b, order);
    let c2 = &c * &c;
    let h = (&TruncSeries::x(order) * &c2).scale(b);
    (c, c2, h)
}

/// `(C^2 + (a-b)/b, b x C^2)` with `C = C(a, b; x)`.
pub fn points_array_ab(a: &Rational, b: &Rational, order: usize) -> Result<RiordanArray> {
    check_weight(b)?;
    let (_, c2, h) = weighted_parts(a, b, order);
    let head = TruncSeries::constant((a - b) / b, order);
    RiordanArray::new(&c2 + &head, h)
}

/// `(C^2 (a - b + b C), b x C^2)`.
pub fn usteps_array_ab(a: &Rational, b: &Rational, order: usize) -> Result<RiordanArray> {
    check_weight(b)?;
    let (c, c2, h) = weighted_parts(a, b, order);
    let tail = &TruncSeries::constant(a - b, order) + &c.scale(b);
    RiordanArray::new(&c2 * &tail, h)
}

/// `(a C^2, b x C^2)`.
pub fn peaks_array_ab(a: &Rational, b: &Rational, order: usize) -> Result<RiordanArray> {
    check_weight(b)?;
    let (_, c2, h) = weighted_parts(a, b, order);
    RiordanArray::new(c2.scale(a), h)
}

pub fn array_for(stat: Statistic, r: u32, order: usize) -> Result<RiordanArray> {
    match stat {
        Statistic::Points => points_array(r, order),
        Statistic::USteps => usteps_array(r, order),
        Statistic::Peaks => peaks_array(r, order),
        Statistic::Udu => Err(Error::InvalidParameter("no Riordan array for udu counts".into())),
    }
}

pub fn array_for_ab(stat: Statistic, a: &Rational, b: &Rational, order: usize) -> Result<RiordanArray> {
    match stat {
        Statistic::Points => points_array_ab(a, b, order),
        Statistic::USteps => usteps_array_ab(a, b, order),
        Statistic::Peaks => peaks_array_ab(a, b, order),
        Statistic::Udu => Err(Error::InvalidParameter("no Riordan array for udu counts".into())),
    }
}

/// Count triangle for a statistic read off its array, rows `0..=n_max`.
/// The points array is corrected at `(0, 0)`.
pub fn statistic_triangle(stat: Statistic, r: u32, n_max: usize) -> Result<Vec<Vec<BigInt>>> {
    let array = array_for(stat, r, n_max)?;
    let mut rows = array.triangle(n_max)?;
    if stat == Statistic::Points {
        rows[0][0] -= Rational::new(BigInt::one(), BigInt::from(r - 1));
    }
    rows.into_iter()
        .enumerate()
        .map(|(n, row)| {
            row.iter()
                .enumerate()
                .map(|(l, v)| to_integer(v, format!("{stat} array entry ({n}, {l}), r = {r}")))
                .collect()
        })
        .collect()
}

/// Single count from the array, e.g. `point_count(n, l, r)` with the
/// `(0, 0)` correction applied. Zero above the diagonal.
pub fn statistic_entry(stat: Statistic, n: usize, l: usize, r: u32) -> Result<BigInt> {
    let array = array_for(stat, r, n)?;
    let mut v = array.entry(n, l)?;
    if stat == Statistic::Points && n == 0 && l == 0 {
        v -= Rational::new(BigInt::one(), BigInt::from(r - 1));
    }
    to_integer(&v, format!("{stat} array entry ({n}, {l}), r = {r}"))
}

/// Weighted counterpart of [`statistic_entry`], exact rational.
pub fn statistic_entry_ab(stat: Statistic, n: usize, l: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    let array = array_for_ab(stat, a, b, n)?;
    let mut v = array.entry(n, l)?;
    if stat == Statistic::Points && n == 0 && l == 0 {
        v -= (a - b) / b;
    }
    Ok(v)
}
