//! Closed-form evaluators for the counting formulas.
//!
//! Sums are evaluated in exact rationals exactly as written, including the
//! fractional prefactors; count-valued results pass through
//! [`to_integer`] so a non-integral value surfaces as an error.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{choose, int, pow, powu, to_integer, BigInt, Rational};
use crate::paths::Statistic;

/// Catalan number `C_n`.
pub fn catalan_number(n: usize) -> BigInt {
    let n = n as i64;
    crate::exact::binom(2 * n, n).unwrap() / BigInt::from(n + 1)
}

fn catalan_q(n: usize) -> Rational {
    Rational::from_integer(catalan_number(n))
}

/// Total weight of `(a, b)`-Dyck paths of length `2n`.
pub fn catalan_ab(n: usize, a: &Rational, b: &Rational) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let ni = n as i64;
    (1..=n)
        .map(|k| {
            let ki = k as i64;
            choose(ni, ki - 1) * choose(ni, ki) * powu(a, k) * powu(b, n - k) / int(ni)
        })
        .sum()
}

/// Total weight of `(a, b)`-Motzkin paths of length `n`.
pub fn motzkin_ab(n: usize, a: &Rational, b: &Rational) -> Rational {
    (0..=n / 2)
        .map(|k| choose(n as i64, 2 * k as i64) * catalan_q(k) * powu(a, n - 2 * k) * powu(b, k))
        .sum()
}

/// Total weight of `(a, b)`-Schröder paths of length `2n`.
pub fn schroder_ab(n: usize, a: &Rational, b: &Rational) -> Rational {
    (0..=n)
        .map(|k| {
            choose((n + k) as i64, 2 * k as i64) * catalan_q(k) * powu(a, n - k) * powu(b, k)
        })
        .sum()
}

/// `S_n^(r)`: `r`-colored Dyck paths of length `2n` with no same-colored `dd`.
pub fn colored_schroder_number(n: usize, r: u32) -> Result<BigInt> {
    let v = schroder_ab(n, &int(1), &int(r as i64 - 1));
    to_integer(&v, format!("S_{n}^({r})"))
}

/// `r`-colored Dyck paths of length `2n` with exactly `k` same-colored `dd`
/// pairs, via the Narayana expansion.
pub fn colored_dd_count(n: usize, k: usize, r: u32) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if n == 0 {
        return Ok(if k == 0 { BigInt::one() } else { BigInt::zero() });
    }
    if k > n {
        return Ok(BigInt::zero());
    }
    let (ni, ki) = (n as i64, k as i64);
    let rq = int(r as i64);
    let r1 = int(r as i64 - 1);
    let v: Rational = (1..=n.saturating_sub(k))
        .map(|l| {
            let li = l as i64;
            choose(ni, li - 1) * choose(ni, li) * choose(ni - li, ki) * powu(&rq, l)
                * powu(&r1, n - l - k)
                / int(ni)
        })
        .sum();
    to_integer(&v, format!("A_({n},{k})^({r})"))
}

fn check_r(r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("counting formulas need r >= 2, got {r}")));
    }
    Ok(())
}

/// Total number of points at level `l` over admissible paths of length `2n`.
pub fn point_count(n: usize, l: usize, r: u32) -> Result<BigInt> {
    check_r(r)?;
    if l > n {
        return Ok(BigInt::zero());
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let (ni, li) = (n as i64, l as i64);
    let r1 = int(r as i64 - 1);
    let v: Rational = (0..=n - l)
        .map(|j| {
            let ji = j as i64;
            let first = int(2 * li) / (int(2 * ni - ji) * &r1) * choose(2 * ni - ji, ni - li);
            let second = int(2 * li + 2) / int(2 * ni - ji + 2) * choose(2 * ni - ji + 2, ni - li);
            choose(ni - li, ji) * (first + second) * powu(&r1, n - j)
        })
        .sum();
    to_integer(&v, format!("P_({n},{l})^({r})"))
}

/// Total number of up steps at level `l + 1` over admissible paths of
/// length `2n + 2`.
pub fn ustep_count(n: usize, l: usize, r: u32) -> Result<BigInt> {
    check_r(r)?;
    if l > n {
        return Ok(BigInt::zero());
    }
    let (ni, li) = (n as i64, l as i64);
    let r1 = int(r as i64 - 1);
    let v: Rational = (0..=n - l)
        .map(|j| {
            let ji = j as i64;
            let first = int(2 * li + 2) / int(2 * ni - ji + 2) * choose(2 * ni - ji + 2, ni - li);
            let second =
                int(2 * li + 3) * &r1 / int(2 * ni - ji + 3) * choose(2 * ni - ji + 3, ni - li);
            choose(ni - li, ji) * (first + second) * powu(&r1, n - j)
        })
        .sum();
    to_integer(&v, format!("U_({n},{l})^({r})"))
}

/// Total number of peaks at level `l + 1` over admissible paths of length
/// `2n + 2`.
pub fn peak_count(n: usize, l: usize, r: u32) -> Result<BigInt> {
    check_r(r)?;
    if l > n {
        return Ok(BigInt::zero());
    }
    let (ni, li) = (n as i64, l as i64);
    let r1 = int(r as i64 - 1);
    let v: Rational = (0..=n - l)
        .map(|j| {
            let ji = j as i64;
            int(2 * r as i64 * (li + 1)) / int(2 * ni - ji + 2)
                * choose(2 * ni - ji + 2, ni - li)
                * choose(ni - li, ji)
                * powu(&r1, n - j)
        })
        .sum();
    to_integer(&v, format!("p_({n},{l})^({r})"))
}

/// Admissible paths of length `2n` with no `udu` window.
pub fn udu_free_count(n: usize, r: u32) -> Result<BigInt> {
    check_r(r)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let ni = n as i64;
    let rq = int(r as i64);
    let r1 = int(r as i64 - 1);
    let v: Rational = (n / 2..n)
        .map(|j| {
            let ji = j as i64;
            choose(ni - 1, ji) / int(ji + 1) * choose(ji + 1, ni - ji) * powu(&rq, n - j)
                * powu(&r1, j)
        })
        .sum();
    to_integer(&v, format!("T_({n},0)^({r})"))
}

/// Admissible paths of length `2n` with exactly `l` `udu` windows. Cells on
/// or above the diagonal (other than `(0, 0)`) are zero.
pub fn udu_count(n: usize, l: usize, r: u32) -> Result<BigInt> {
    check_r(r)?;
    if n == 0 {
        return Ok(if l == 0 { BigInt::one() } else { BigInt::zero() });
    }
    if l >= n {
        return Ok(BigInt::zero());
    }
    let base = udu_free_count(n - l, r)?;
    Ok(crate::exact::binom(n as i64 - 1, l as i64)? * base * num_traits::pow(BigInt::from(r), l))
}

fn check_b(b: &Rational) -> Result<()> {
    if b.is_zero() {
        return Err(Error::InvalidParameter("weighted formulas need b != 0".into()));
    }
    Ok(())
}

/// Weighted total of points at level `l` over `(a, b)`-Dyck paths of length
/// `2n`.
pub fn point_count_ab(n: usize, l: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    check_b(b)?;
    if l > n {
        return Ok(Rational::zero());
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    let (ni, li) = (n as i64, l as i64);
    let amb = a - b;
    Ok((0..=n - l)
        .map(|j| {
            let ji = j as i64;
            let first = int(2 * li) * &amb / int(2 * ni - ji) * choose(2 * ni - ji, ni - li);
            let second = int(2 * li + 2) * b / int(2 * ni - ji + 2) * choose(2 * ni - ji + 2, ni - li);
            choose(ni - li, ji) * (first + second) * powu(&amb, j) * pow(b, ni - ji - 1)
        })
        .sum())
}

/// Weighted total of up steps at level `l + 1` over `(a, b)`-Dyck paths of
/// length `2n + 2`.
pub fn ustep_count_ab(n: usize, l: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    check_b(b)?;
    if l > n {
        return Ok(Rational::zero());
    }
    let (ni, li) = (n as i64, l as i64);
    let amb = a - b;
    Ok((0..=n - l)
        .map(|j| {
            let ji = j as i64;
            let first = int(2 * li + 2) * &amb / int(2 * ni - ji + 2) * choose(2 * ni - ji + 2, ni - li);
            let second = int(2 * li + 3) * b / int(2 * ni - ji + 3) * choose(2 * ni - ji + 3, ni - li);
            choose(ni - li, ji) * (first + second) * powu(&amb, j) * powu(b, n - j)
        })
        .sum())
}

/// Weighted total of peaks at level `l + 1` over `(a, b)`-Dyck paths of
/// length `2n + 2`.
pub fn peak_count_ab(n: usize, l: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    check_b(b)?;
    if l > n {
        return Ok(Rational::zero());
    }
    let (ni, li) = (n as i64, l as i64);
    let amb = a - b;
    Ok((0..=n - l)
        .map(|j| {
            let ji = j as i64;
            int(2 * (li + 1)) * a / int(2 * ni - ji + 2)
                * choose(2 * ni - ji + 2, ni - li)
                * choose(ni - li, ji)
                * powu(&amb, j)
                * powu(b, n - j)
        })
        .sum())
}

/// Dispatches to the closed form for a tabulated statistic.
pub fn count(stat: Statistic, n: usize, l: usize, r: u32) -> Result<BigInt> {
    match stat {
        Statistic::Points => point_count(n, l, r),
        Statistic::USteps => ustep_count(n, l, r),
        Statistic::Peaks => peak_count(n, l, r),
        Statistic::Udu => udu_count(n, l, r),
    }
}

pub fn count_ab(stat: Statistic, n: usize, l: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    match stat {
        Statistic::Points => point_count_ab(n, l, a, b),
        Statistic::USteps => ustep_count_ab(n, l, a, b),
        Statistic::Peaks => peak_count_ab(n, l, a, b),
        Statistic::Udu => Err(Error::InvalidParameter("no weighted udu formula".into())),
    }
}

/// Rows `0..=n_max` of a closed-form triangle. Udu rows stop below the
/// diagonal (row 0 keeps its single cell).
pub fn triangle(stat: Statistic, r: u32, n_max: usize) -> Result<Vec<Vec<BigInt>>> {
    (0..=n_max)
        .map(|n| {
            let width = row_width(stat, n);
            (0..width).map(|l| count(stat, n, l, r)).collect()
        })
        .collect()
}

/// Number of cells in row `n` of a printed triangle.
pub fn row_width(stat: Statistic, n: usize) -> usize {
    match stat {
        Statistic::Udu => n.max(1),
        _ => n + 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaParams {
    pub stat: Statistic,
    pub n: usize,
    pub l: usize,
    pub r: u32,
}

/// A closed-form count with its inputs echoed back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaResult {
    #[serde(serialize_with = "crate::exact::serialize_decimal")]
    pub value: BigInt,
    pub route: Route,
    pub params: FormulaParams,
    /// False for cells outside the printed triangle, whose value is 0.
    pub in_triangle: bool,
}

pub fn evaluate(stat: Statistic, n: usize, l: usize, r: u32) -> Result<FormulaResult> {
    let value = count(stat, n, l, r)?;
    Ok(FormulaResult {
        value,
        route: Route::ClosedForm,
        params: FormulaParams { stat, n, l, r },
        in_triangle: l < row_width(stat, n),
    })
}
