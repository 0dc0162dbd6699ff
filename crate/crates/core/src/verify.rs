//! Identity checks over finite parameter grids.
//!
//! Each check expands its [`Grid`] into instances, evaluates both sides of
//! an identity by independent routes and records the first failing
//! instance. Instances are evaluated in parallel; results keep grid order,
//! so reports are deterministic. These are finite-grid certifications, not
//! proofs.

use std::fmt;
use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{big, binom_gen, choose, frac, int, pow, powu, sign, to_integer, BigInt, Rational};
use crate::formulas::{self, catalan_ab, catalan_number, motzkin_ab, schroder_ab};
use crate::paths::{Oracle, Statistic};
use crate::riordan::{self, peaks_array, points_array, usteps_array};
use crate::series::{self, TruncSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub instance: Value,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceResult {
    pub instance: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Outcome of one check. Serializes to
/// `{"check-id", "grid", "status", "counterexample", "millis"}`; the
/// per-instance results stay in memory.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    #[serde(rename = "check-id")]
    pub check_id: String,
    pub grid: Value,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub millis: u64,
    #[serde(skip)]
    pub instances: Vec<InstanceResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed_instances(&self) -> usize {
        self.instances.iter().filter(|i| i.status == Status::Fail).count()
    }
}

/// Why an instance failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Mismatch(String),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Mismatch(s) => f.write_str(s),
            Failure::Error(e) => write!(f, "error: {e}"),
        }
    }
}

pub type Outcome = std::result::Result<(), Failure>;

pub fn expect_eq<T: PartialEq + fmt::Display>(what: &str, lhs: &T, rhs: &T) -> Outcome {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{what}: {lhs} != {rhs}")))
    }
}

fn expect_rows(what: &str, lhs: &[BigInt], rhs: &[BigInt]) -> Outcome {
    if lhs == rhs {
        return Ok(());
    }
    let show = |row: &[BigInt]| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    Err(Failure::Mismatch(format!("{what}: [{}] != [{}]", show(lhs), show(rhs))))
}

/// Evaluates every instance and assembles the report. The counterexample is
/// the first failing instance in grid order.
pub fn run_instances<I, F>(check_id: &str, grid: Value, instances: &[I], eval: F) -> CheckReport
where
    I: Serialize + Sync,
    F: Fn(&I) -> Outcome + Sync,
{
    let start = Instant::now();
    let results: Vec<InstanceResult> = instances
        .par_iter()
        .map(|inst| {
            let instance = serde_json::to_value(inst).expect("instances serialize");
            match eval(inst) {
                Ok(()) => InstanceResult { instance, status: Status::Pass, detail: None },
                Err(f) => InstanceResult {
                    instance,
                    status: Status::Fail,
                    detail: Some(f.to_string()),
                },
            }
        })
        .collect();
    let counterexample = results.iter().find(|r| r.status == Status::Fail).map(|r| Counterexample {
        instance: r.instance.clone(),
        detail: r.detail.clone().unwrap_or_default(),
    });
    CheckReport {
        check_id: check_id.to_string(),
        grid,
        status: if counterexample.is_some() { Status::Fail } else { Status::Pass },
        counterexample,
        millis: start.elapsed().as_millis() as u64,
        instances: results,
    }
}

/// Parameter grid shared by all checks; each check reads the fields it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n_max: usize,
    pub r_values: Vec<u32>,
    pub ab_pairs: Vec<(Rational, Rational)>,
    pub m_max: u32,
    /// Exponents for the generalized-binomial check.
    pub m_values: Vec<Rational>,
    /// Truncation order for series-level checks.
    pub order: usize,
    /// Largest row index that is also checked against the enumeration oracle.
    pub oracle_n_max: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            n_max: 12,
            r_values: vec![2, 3, 4, 5],
            ab_pairs: Vec::new(),
            m_max: 0,
            m_values: vec![int(0), int(1), int(2), frac(1, 2), frac(-1, 2)],
            order: 24,
            oracle_n_max: 6,
        }
    }
}

fn pairs(list: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
    list.iter().map(|&(a, b)| (int(a), int(b))).collect()
}

impl Grid {
    /// JSON view restricted to `keys`.
    pub fn to_json(&self, keys: &[&str]) -> Value {
        let mut map = serde_json::Map::new();
        for &key in keys {
            let v = match key {
                "n_max" => json!(self.n_max),
                "r" => json!(self.r_values),
                "ab" => Value::Array(
                    self.ab_pairs
                        .iter()
                        .map(|(a, b)| json!([a.to_string(), b.to_string()]))
                        .collect(),
                ),
                "m_max" => json!(self.m_max),
                "m" => Value::Array(self.m_values.iter().map(|m| json!(m.to_string())).collect()),
                "order" => json!(self.order),
                "oracle_n_max" => json!(self.oracle_n_max),
                _ => continue,
            };
            map.insert(key.to_string(), v);
        }
        Value::Object(map)
    }
}

/// Command-line style adjustments to a check's default grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridOverrides {
    pub n_max: Option<usize>,
    pub r_values: Option<Vec<u32>>,
    /// Setting either of `a`, `b` replaces the pair list with one pair; the
    /// missing coordinate defaults to 1.
    pub a: Option<Rational>,
    pub b: Option<Rational>,
    pub m_max: Option<u32>,
    pub m_values: Option<Vec<Rational>>,
    pub order: Option<usize>,
    pub oracle_n_max: Option<usize>,
}

impl GridOverrides {
    pub fn apply(&self, grid: &mut Grid) {
        if let Some(n) = self.n_max {
            grid.n_max = n;
        }
        if let Some(r) = &self.r_values {
            grid.r_values = r.clone();
        }
        if self.a.is_some() || self.b.is_some() {
            let a = self.a.clone().unwrap_or_else(Rational::one);
            let b = self.b.clone().unwrap_or_else(Rational::one);
            grid.ab_pairs = vec![(a, b)];
        }
        if let Some(m) = self.m_max {
            grid.m_max = m;
        }
        if let Some(m) = &self.m_values {
            grid.m_values = m.clone();
        }
        if let Some(o) = self.order {
            grid.order = o;
        }
        if let Some(o) = self.oracle_n_max {
            grid.oracle_n_max = o;
        }
    }
}

fn empty(id: &str) -> Error {
    Error::InvalidParameter(format!("{id}: empty grid"))
}

fn nonempty<T>(id: &str, v: Vec<T>) -> Result<Vec<T>> {
    if v.is_empty() {
        Err(empty(id))
    } else {
        Ok(v)
    }
}

fn require_r(id: &str, grid: &Grid, min: u32) -> Result<()> {
    if let Some(r) = grid.r_values.iter().find(|&&r| r < min) {
        return Err(Error::InvalidParameter(format!("{id}: needs r >= {min}, got {r}")));
    }
    Ok(())
}

fn require_nonzero_a(id: &str, grid: &Grid) -> Result<()> {
    if grid.ab_pairs.iter().any(|(a, _)| a.is_zero()) {
        return Err(Error::InvalidParameter(format!("{id}: needs a != 0 on the grid")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Instances

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoredInstance {
    pub n: usize,
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightInstance {
    pub n: usize,
    #[serde(with = "crate::exact::rational_str")]
    pub a: Rational,
    #[serde(with = "crate::exact::rational_str")]
    pub b: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerInstance {
    pub n: usize,
    pub m: u32,
    #[serde(with = "crate::exact::rational_str")]
    pub a: Rational,
    #[serde(with = "crate::exact::rational_str")]
    pub b: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerSeriesInstance {
    pub m: u32,
    #[serde(with = "crate::exact::rational_str")]
    pub a: Rational,
    #[serde(with = "crate::exact::rational_str")]
    pub b: Rational,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub r: u32,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinomialInstance {
    pub n: usize,
    pub r: u32,
    #[serde(with = "crate::exact::rational_str")]
    pub m: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedStatInstance {
    pub stat: Statistic,
    pub n: usize,
    #[serde(with = "crate::exact::rational_str")]
    pub a: Rational,
    #[serde(with = "crate::exact::rational_str")]
    pub b: Rational,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteInstance {
    pub stat: Statistic,
    pub n: usize,
    pub r: u32,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdInstance {
    pub n: usize,
    pub r: u32,
    pub oracle: bool,
}

fn colored(id: &str, grid: &Grid, n_min: usize) -> Result<Vec<ColoredInstance>> {
    require_r(id, grid, 2)?;
    let v = grid
        .r_values
        .iter()
        .flat_map(|&r| (n_min..=grid.n_max).map(move |n| ColoredInstance { n, r }))
        .collect();
    nonempty(id, v)
}

fn oracle_reaches(stat: Statistic, n: usize, r: u32, oracle_n_max: usize) -> bool {
    n <= oracle_n_max && Oracle::new().cap().check(stat.semilength(n), r).is_ok()
}

// ---------------------------------------------------------------------------
// Shared values

fn rq(r: u32) -> Rational {
    int(r as i64)
}

fn r1(r: u32) -> Rational {
    int(r as i64 - 1)
}

/// `S_k^(r)` for `k = 0..=n_max`.
fn s_values(r: u32, n_max: usize) -> Vec<Rational> {
    (0..=n_max).map(|k| schroder_ab(k, &int(1), &r1(r))).collect()
}

/// `S_k(-1, (r-1)^2)`, signed, integrality asserted.
fn s_neg(r: u32, k: usize) -> Result<Rational> {
    let v = schroder_ab(k, &int(-1), &(r1(r) * r1(r)));
    to_integer(&v, format!("S_{k}(-1, (r-1)^2), r = {r}")).map(Rational::from_integer)
}

fn formula_row(stat: Statistic, n: usize, r: u32) -> Result<Vec<Rational>> {
    (0..=n).map(|l| formulas::count(stat, n, l, r).map(Rational::from_integer)).collect()
}

fn formula_row_int(stat: Statistic, n: usize, r: u32) -> Result<Vec<BigInt>> {
    (0..=n).map(|l| formulas::count(stat, n, l, r)).collect()
}

fn udu_series_row(n: usize, r: u32) -> Result<Vec<BigInt>> {
    let rows = series::bivariate_rows(n, |y| series::udu_bivariate(r, y, n));
    rows[n]
        .iter()
        .enumerate()
        .map(|(l, v)| to_integer(v, format!("[x^{n} y^{l}] T_{r}(x, y)")))
        .collect()
}

/// `[x^n] d(x) A(h(x))`, the weighted row sum of an array.
fn applied(array: &riordan::RiordanArray, a: &TruncSeries, n: usize) -> Result<Rational> {
    Ok(array.apply(a)?.coeff(n)?.clone())
}

// ---------------------------------------------------------------------------
// Relations between Schröder, Catalan and Motzkin totals

fn schroder_catalan_motzkin_instances(id: &str, grid: &Grid) -> Result<Vec<WeightInstance>> {
    let v = grid
        .ab_pairs
        .iter()
        .flat_map(|(a, b)| (1..=grid.n_max).map(move |n| WeightInstance { n, a: a.clone(), b: b.clone() }))
        .collect();
    nonempty(id, v)
}

fn schroder_catalan_motzkin(i: &WeightInstance) -> Outcome {
    let (n, a, b) = (i.n, &i.a, &i.b);
    let s = schroder_ab(n, a, b);
    let apb = a + b;
    let c = catalan_ab(n, &apb, b);
    let m = &apb * motzkin_ab(n - 1, &(a + b + b), &(&apb * b));
    let from_series = series::schroder(a, b, n).coeff(n)?.clone();
    expect_eq("S_n(a,b) vs C_n(a+b,b)", &s, &c)?;
    expect_eq("S_n(a,b) vs (a+b) M_(n-1)(a+2b,(a+b)b)", &s, &m)?;
    expect_eq("S_n(a,b) vs series coefficient", &s, &from_series)
}

// ---------------------------------------------------------------------------
// Schröder tower

fn tower_instances(id: &str, grid: &Grid) -> Result<Vec<TowerInstance>> {
    require_nonzero_a(id, grid)?;
    let mut v = Vec::new();
    for (a, b) in &grid.ab_pairs {
        for m in 0..=grid.m_max {
            for n in 0..=grid.n_max {
                v.push(TowerInstance { n, m, a: a.clone(), b: b.clone() });
            }
        }
    }
    nonempty(id, v)
}

fn tower_expansion(i: &TowerInstance) -> Outcome {
    let (n, m, a, b) = (i.n, i.m, &i.a, &i.b);
    let lhs = schroder_ab(n, &-a, &series::tower_parameter(m + 1, a, b));
    let inner = series::tower_parameter(m, a, b);
    let e = 1i64 << m;
    let ni = n as i64;
    let mut rhs = Rational::zero();
    for l in 0..=n {
        let li = l as i64;
        let s_l = schroder_ab(l, &-a, &inner);
        for j in 0..=n - l {
            let ji = j as i64;
            rhs += sign(ji) * int(2 * li + 1) / int(2 * ni - ji + 1)
                * choose(2 * ni - ji + 1, ni - li)
                * choose(ni - li, ji)
                * &s_l
                * pow(a, ni - li - e * (ni - ji))
                * pow(b, e * (ni - ji));
        }
    }
    let z = series::z_series(m + 1, a, b, n)?.coeff(n)?.clone();
    expect_eq("S_n(-a, c_(m+1)) vs double sum", &lhs, &rhs)?;
    expect_eq("S_n(-a, c_(m+1)) vs tower series", &lhs, &z)
}

fn tower_series_instances(id: &str, grid: &Grid) -> Result<Vec<TowerSeriesInstance>> {
    require_nonzero_a(id, grid)?;
    let v = grid
        .ab_pairs
        .iter()
        .flat_map(|(a, b)| {
            (0..=grid.m_max).map(move |m| TowerSeriesInstance { m, a: a.clone(), b: b.clone(), order: grid.order })
        })
        .collect();
    nonempty(id, v)
}

fn tower_series(i: &TowerSeriesInstance) -> Outcome {
    let (m, a, b, order) = (i.m, &i.a, &i.b, i.order);
    let z = series::z_series(m, a, b, order)?;
    let c = series::tower_parameter(m, a, b);
    let [u0, u1, u2] = series::schroder_equation(&-a, &c, order);
    let residual = series::quadratic_residual(&z, &u0, &u1, &u2);
    if let Some(k) = residual.first_nonzero() {
        return Err(Failure::Mismatch(format!("functional equation residual nonzero at x^{k}")));
    }
    expect_eq("Z_m vs S(-a, c_m)", &z, &series::schroder(&-a, &c, order))?;
    if m >= 1 {
        expect_eq("Z_m(a,b) vs Z_m(a,-b)", &z, &series::z_series(m, a, &-b, order)?)?;
    }
    expect_eq("Z_m(a,a) vs 1", &series::z_series(m, a, a, order)?, &TruncSeries::one(order))?;
    if m == 1 {
        let x = TruncSeries::x(order);
        let s = series::schroder(a, b, order);
        let s_neg = s.reflect();
        let inner = (&x * &(&s_neg * &s_neg)).scale(&(b / a));
        let z1 = &s_neg * &s.compose(&inner)?;
        expect_eq("S(a,b;-x) S(a,b;(b/a)x S(a,b;-x)^2) vs Z_1", &z1, &z)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Composition identity for S_r

fn family_instances(id: &str, grid: &Grid) -> Result<Vec<FamilyInstance>> {
    require_r(id, grid, 2)?;
    let v = grid.r_values.iter().map(|&r| FamilyInstance { r, order: grid.order }).collect();
    nonempty(id, v)
}

fn composition_family(i: &FamilyInstance) -> Outcome {
    let (r, order) = (i.r, i.order);
    let x = TruncSeries::x(order);
    let s = series::colored_schroder(r, order);
    let inner = (&x * &(&s * &s)).scale(&-r1(r));
    let lhs = &s * &s.compose(&inner)?;
    let sq = r1(r) * r1(r);
    let rhs = series::schroder(&int(1), &-sq.clone(), order);
    let rhs_reflected = series::schroder(&int(-1), &sq, order).reflect();
    expect_eq("S_r(x) S_r(-(r-1)x S_r^2) vs S(1,-(r-1)^2;x)", &lhs, &rhs)?;
    expect_eq("S(1,-(r-1)^2;x) vs S(-1,(r-1)^2;-x)", &rhs, &rhs_reflected)?;
    if r == 2 {
        expect_eq("S(x) S(-x S(x)^2) vs 1", &lhs, &TruncSeries::one(order))?;
    }
    let svals = s_values(r, order);
    for n in 0..=order {
        let ni = n as i64;
        let left: Rational = (0..=n)
            .map(|k| {
                let ki = k as i64;
                sign(ki) * choose(ni + ki, 2 * ki) * big(&catalan_number(k)) * powu(&sq, k)
            })
            .sum();
        let mut right = Rational::zero();
        for l in 0..=n {
            let li = l as i64;
            for j in 0..=n - l {
                let ji = j as i64;
                right += sign(li) * int(2 * li + 1) / int(2 * ni - ji + 1)
                    * choose(2 * ni - ji + 1, ni - li)
                    * choose(ni - li, ji)
                    * &svals[l]
                    * powu(&r1(r), n - j);
            }
        }
        expect_eq(&format!("alternating sums at n = {n}"), &left, &right)?;
        expect_eq(&format!("alternating sum vs series at n = {n}"), &left, lhs.coeff(n)?)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Points

fn points_alternating(i: &ColoredInstance) -> Outcome {
    let (n, r) = (i.n, i.r);
    let row = formula_row(Statistic::Points, n, r)?;
    let lhs: Rational = row.iter().enumerate().map(|(l, v)| sign(l as i64) * v).sum();
    let s_n = schroder_ab(n, &int(1), &r1(r));
    expect_eq("sum (-1)^l P_(n,l) vs S_n", &lhs, &s_n)?;
    let array = points_array(r, n)?;
    let mut via_array = applied(&array, &TruncSeries::geometric(&int(-1), n), n)?;
    if n == 0 {
        via_array -= Rational::one() / r1(r);
    }
    expect_eq("array applied to 1/(1+x) vs S_n", &via_array, &s_n)
}

fn points_weighted_alternating(i: &ColoredInstance) -> Outcome {
    let (n, r) = (i.n, i.r);
    let row = formula_row(Statistic::Points, n + 1, r)?;
    let lhs: Rational = (1..=n + 1).map(|l| sign(l as i64 - 1) * int(l as i64) * &row[l]).sum();
    let svals = s_values(r, n + 1);
    let rhs: Rational = svals[1..].iter().sum();
    expect_eq("sum (-1)^(l-1) l P_(n+1,l) vs sum S_(l+1)", &lhs, &rhs)?;
    let order = n + 1;
    let x = TruncSeries::x(order);
    let s = series::colored_schroder(r, order);
    let s2 = &s * &s;
    let h = (&x * &s2).scale(&r1(r));
    let d = &s2 + &TruncSeries::constant(Rational::one() / r1(r), order);
    let one_h = &TruncSeries::one(order) + &h;
    let lhs_series = &(&d * &h) * &(&one_h * &one_h).reciprocal()?;
    let rhs_series = &(&s - &TruncSeries::one(order)) * &TruncSeries::geometric(&int(1), order);
    expect_eq("series form, left side", lhs_series.coeff(order)?, &lhs)?;
    expect_eq("series form, right side", rhs_series.coeff(order)?, &rhs)
}

// ---------------------------------------------------------------------------
// Up steps

fn usteps_against_s(i: &ColoredInstance) -> Outcome {
    let (n, r) = (i.n, i.r);
    let row = formula_row(Statistic::USteps, n, r)?;
    let svals = s_values(r, n + 1);
    let lhs: Rational = (0..=n).map(|l| sign(l as i64) * &row[l] * &svals[l]).sum();
    let mut rhs = Rational::zero();
    for l in 0..=n {
        rhs += sign((n - l) as i64) * &svals[l + 1] * s_neg(r, n - l)?;
    }
    expect_eq("sum (-1)^l U_(n,l) S_l vs convolution", &lhs, &rhs)?;
    if r == 2 {
        expect_eq("r = 2 case vs S_(n+1)", &lhs, &svals[n + 1])?;
    }
    let s_minus = series::colored_schroder(r, n).reflect();
    expect_eq("array applied to S_r(-x)", &applied(&usteps_array(r, n)?, &s_minus, n)?, &lhs)
}

fn usteps_against_s_differences(i: &ColoredInstance) -> Outcome {
    let (n, r) = (i.n, i.r);
    let row = formula_row(Statistic::USteps, n, r)?;
    let svals = s_values(r, n + 1);
    let lhs: Rational = (0..=n)
        .map(|l| sign(l as i64) * &row[l] * (&svals[l + 1] - &svals[l]))
        .sum();
    let mut rhs = Rational::zero();
    for l in 0..=n {
        let delta = if l == 0 { Rational::one() / r1(r) } else { Rational::zero() };
        rhs += sign((n - l) as i64) * (delta + &svals[l]) * (s_neg(r, n - l)? + s_neg(r, n - l + 1)?);
    }
    expect_eq("sum (-1)^l U_(n,l) (S_(l+1) - S_l) vs convolution", &lhs, &rhs)?;
    if r == 2 {
        let delta = if n == 0 { int(1) } else { int(0) };
        expect_eq("r = 2 case vs delta + S_n", &lhs, &(delta + &svals[n]))?;
    }
    let s_minus = series::colored_schroder(r, n).reflect();
    let via_array = r1(r) * applied(&usteps_array(r, n)?, &(&s_minus * &s_minus), n)?;
    expect_eq("array applied to (r-1) S_r(-x)^2", &via_array, &lhs)
}

fn usteps_linear_weights(i: &ColoredInstance) -> Outcome {
    let (n, r) = (i.n, i.r);
    let row = formula_row(Statistic::USteps, n, r)?;
    let svals = s_values(r, n);
    let lhs: Rational = (0..=n).map(|l| sign(l as i64) * int(l as i64 + 1) * &row[l]).sum();
    let tail: Rational = (0..=n).map(|l| int(l as i64 + 1) * &svals[n - l]).sum();
    let rhs = int(n as i64 + 1) + r1(r) * tail;
    expect_eq("sum (-1)^l (l+1) U_(n,l) vs closed expression", &lhs, &rhs)?;
    let weights = TruncSeries::binomial(&int(-2), n);
    expect_eq("array applied to (1+x)^-2", &applied(&usteps_array(r, n)?, &weights, n)?, &lhs)
}

// ---------------------------------------------------------------------------
// Peaks

fn peaks_against_s(i: &ColoredInstance) -> Outcome {
    let (n, r) = (i.n, i.r);
    let row = formula_row(Statistic::Peaks, n, r)?;
    let svals = s_values(r, n + 1);
    let lhs1: Rational = (0..=n).map(|l| sign(l as i64) * &row[l] * &svals[l]).sum();
    let mut rhs1 = Rational::zero();
    for l in 0..=n {
        rhs1 += sign((n - l) as i64) * &svals[l] * s_neg(r, n - l)?;
    }
    rhs1 *= rq(r);
    expect_eq("sum (-1)^l p_(n,l) S_l vs convolution", &lhs1, &rhs1)?;
    let lhs2: Rational = (0..=n)
        .map(|l| sign(l as i64) * &row[l] * (&svals[l + 1] - &svals[l]))
        .sum();
    let rhs2 = rq(r) / r1(r) * sign(n as i64) * (s_neg(r, n + 1)? + s_neg(r, n)?);
    expect_eq("sum (-1)^l p_(n,l) (S_(l+1) - S_l) vs closed expression", &lhs2, &rhs2)?;
    if r == 2 {
        expect_eq("r = 2 case vs 2 S_n", &lhs1, &(int(2) * &svals[n]))?;
        let delta = if n == 0 { int(2) } else { int(0) };
        expect_eq("r = 2 case vs 2 delta", &lhs2, &delta)?;
    }
    let array = peaks_array(r, n)?;
    let s_minus = series::colored_schroder(r, n).reflect();
    expect_eq("array applied to S_r(-x)", &applied(&array, &s_minus, n)?, &lhs1)?;
    let via_array = r1(r) * applied(&array, &(&s_minus * &s_minus), n)?;
    expect_eq("array applied to (r-1) S_r(-x)^2", &via_array, &lhs2)
}

fn binomial_instances(id: &str, grid: &Grid) -> Result<Vec<BinomialInstance>> {
    require_r(id, grid, 2)?;
    let mut v = Vec::new();
    for &r in &grid.r_values {
        for m in &grid.m_values {
            for n in 0..=grid.n_max {
                v.push(BinomialInstance { n, r, m: m.clone() });
            }
        }
    }
    nonempty(id, v)
}

/// `[x^k] S_r(x)^s` term `s/q * binom(q, k)` with `q = k + j + s`. At `q = 0`
/// the removable singularity is replaced by its limit.
fn power_term(k: usize, j: usize, s: &Rational) -> Rational {
    let q = int((k + j) as i64) + s;
    if k == 0 {
        return Rational::one();
    }
    if q.is_zero() {
        s / int(k as i64) * binom_gen(&(q - int(1)), k as u64 - 1)
    } else {
        s / &q * binom_gen(&q, k as u64)
    }
}

fn peaks_binomial_weights(i: &BinomialInstance) -> Outcome {
    let (n, r, m) = (i.n, i.r, &i.m);
    let row = formula_row(Statistic::Peaks, n, r)?;
    let weight = |l: usize| binom_gen(&(m + int(l as i64)), l as u64);
    let lhs: Rational = (0..=n).map(|l| sign(l as i64) * weight(l) * &row[l]).sum();
    let s = Rational::one() - m;
    let mut rhs = Rational::zero();
    for l in 0..=n {
        let k = n - l;
        let inner: Rational = (0..=k)
            .map(|j| choose(k as i64, j as i64) * power_term(k, j, &s) * powu(&r1(r), j))
            .sum();
        rhs += weight(l) * inner;
    }
    rhs *= rq(r);
    expect_eq("sum (-1)^l binom(m+l,l) p_(n,l) vs double sum", &lhs, &rhs)?;
    let svals = s_values(r, n);
    if m.is_zero() {
        let total: Rational = svals.iter().sum();
        expect_eq("m = 0 case vs r sum S_l", &lhs, &(rq(r) * total))?;
    }
    if m.is_one() {
        expect_eq("m = 1 case vs r (n+1)", &lhs, &(rq(r) * int(n as i64 + 1)))?;
    }
    let exponent = -(m + int(1));
    let weights = TruncSeries::binomial(&exponent, n);
    expect_eq("array applied to (1+x)^-(m+1)", &applied(&peaks_array(r, n)?, &weights, n)?, &lhs)?;
    let closed = &series::colored_schroder(r, n).pow_rational(&s)?.scale(&rq(r))
        * &TruncSeries::binomial(&exponent, n).reflect();
    expect_eq("r S_r^(1-m) (1-x)^-(m+1)", closed.coeff(n)?, &lhs)
}

// ---------------------------------------------------------------------------
// udu windows

fn udu_linear_weights(i: &ColoredInstance) -> Outcome {
    let (n, r) = (i.n, i.r);
    let row = formula_row(Statistic::Udu, n + 1, r)?;
    let lhs: Rational = (1..=n).map(|l| int(l as i64) * &row[l]).sum();
    let s_n = schroder_ab(n, &int(1), &r1(r));
    let rhs = rq(r) * int(n as i64) * &s_n;
    expect_eq("sum l T_(n+1,l) vs r n S_n", &lhs, &rhs)?;
    let order = n + 1;
    let series_row = udu_series_row(order, r)?;
    let via_series: BigInt = series_row.iter().enumerate().map(|(l, v)| v * BigInt::from(l)).sum();
    expect_eq("bivariate series, y-derivative at 1", &big(&via_series), &rhs)?;
    let x = TruncSeries::x(order);
    let s = series::colored_schroder(r, order);
    let num = (&x * &(&s - &TruncSeries::one(order))).scale(&rq(r));
    let den = &(&TruncSeries::one(order) - &x) - &(&x * &s).scale(&(int(2) * r1(r)));
    let derivative = &num * &den.reciprocal()?;
    expect_eq("r x (S_r - 1) / (1 - x - 2(r-1) x S_r)", derivative.coeff(order)?, &rhs)
}

// ---------------------------------------------------------------------------
// Same-colored dd distribution

fn dd_instances(id: &str, grid: &Grid) -> Result<Vec<DdInstance>> {
    require_r(id, grid, 1)?;
    let v = grid
        .r_values
        .iter()
        .flat_map(|&r| {
            (0..=grid.n_max).map(move |n| DdInstance {
                n,
                r,
                oracle: n <= grid.oracle_n_max && Oracle::new().cap().check(n, r).is_ok(),
            })
        })
        .collect();
    nonempty(id, v)
}

fn dd_distribution(i: &DdInstance) -> Outcome {
    let (n, r) = (i.n, i.r);
    let formula: Vec<BigInt> = (0..=n)
        .map(|k| formulas::colored_dd_count(n, k, r))
        .collect::<Result<_>>()?;
    let rows = series::bivariate_rows(n, |y| series::dd_bivariate(r, y, n));
    let from_series: Vec<BigInt> = rows[n]
        .iter()
        .map(|v| to_integer(v, format!("[x^{n}] A_{r}(x, y)")))
        .collect::<Result<_>>()?;
    expect_rows("closed form vs bivariate series", &formula, &from_series)?;
    let total: BigInt = formula.iter().sum();
    expect_eq("row total vs C_n r^n", &total, &(catalan_number(n) * num_traits::pow(BigInt::from(r), n)))?;
    if r >= 2 {
        expect_eq("k = 0 vs S_n^(r)", &formula[0], &formulas::colored_schroder_number(n, r)?)?;
    }
    if i.oracle {
        expect_rows("closed form vs enumeration", &formula, &Oracle::new().dd_distribution(n, r)?)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Weighted (a, b) statistics

fn weighted_instances(id: &str, grid: &Grid) -> Result<Vec<WeightedStatInstance>> {
    if grid.ab_pairs.iter().any(|(_, b)| b.is_zero()) {
        return Err(Error::InvalidParameter(format!("{id}: needs b != 0 on the grid")));
    }
    let mut v = Vec::new();
    for (a, b) in &grid.ab_pairs {
        for stat in [Statistic::Points, Statistic::USteps, Statistic::Peaks] {
            for n in 0..=grid.n_max {
                v.push(WeightedStatInstance {
                    stat,
                    n,
                    a: a.clone(),
                    b: b.clone(),
                    oracle: n <= grid.oracle_n_max
                        && Oracle::new().cap().check(stat.semilength(n), 1).is_ok(),
                });
            }
        }
    }
    nonempty(id, v)
}

fn weighted_statistic(i: &WeightedStatInstance) -> Outcome {
    let (stat, n, a, b) = (i.stat, i.n, &i.a, &i.b);
    let formula: Vec<Rational> = (0..=n)
        .map(|l| formulas::count_ab(stat, n, l, a, b))
        .collect::<Result<_>>()?;
    for (l, f) in formula.iter().enumerate() {
        let via_array = riordan::statistic_entry_ab(stat, n, l, a, b)?;
        expect_eq(&format!("closed form vs array at l = {l}"), f, &via_array)?;
    }
    if i.oracle {
        let enumerated = Oracle::new().weighted_row(stat, n, a, b)?;
        for (l, (f, e)) in formula.iter().zip(&enumerated).enumerate() {
            expect_eq(&format!("closed form vs weighted enumeration at l = {l}"), f, e)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Recurrences

/// Count triangle (rows `0..=n_max`) built only from the convolution
/// recurrences, with `S_k^(r)` read from the solved series.
pub fn recurrence_table(stat: Statistic, r: u32, n_max: usize) -> Result<Vec<Vec<BigInt>>> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("recurrences need r >= 2, got {r}")));
    }
    if stat == Statistic::Udu {
        return Err(Error::InvalidParameter("no convolution recurrence for udu counts".into()));
    }
    let s: Vec<BigInt> = series::colored_schroder(r, n_max + 1)
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, v)| to_integer(v, format!("S_{k}^({r})")))
        .collect::<Result<_>>()?;
    let rb = BigInt::from(r);
    let r1 = BigInt::from(r - 1);
    let mut t: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
    let at = |t: &Vec<Vec<BigInt>>, n: usize, l: usize| -> BigInt {
        t[n].get(l).cloned().unwrap_or_else(BigInt::zero)
    };
    t.push(vec![match stat {
        Statistic::Points => BigInt::one(),
        _ => rb.clone(),
    }]);
    for n in 0..n_max {
        let mut row = Vec::with_capacity(n + 2);
        for l in 0..=n + 1 {
            // column convolution shared by every case
            let mut v: BigInt = (l..=n).map(|k| at(&t, k, l) * &s[n - k]).sum::<BigInt>() * &r1;
            if l >= 1 {
                let upper = n + 1 - l;
                v += (0..=upper).map(|k| &s[k] * at(&t, n - k, l - 1)).sum::<BigInt>() * &r1;
            }
            v += at(&t, n, l);
            match (stat, l) {
                (Statistic::Points, 0) => v += &s[n + 1],
                (Statistic::Points, 1) => v += &s[n],
                (Statistic::USteps, 0) => {
                    v += (0..=n).map(|k| &s[k + 1] * &s[n - k]).sum::<BigInt>() * &r1;
                    v += &rb * &s[n + 1];
                }
                (Statistic::Peaks, 0) => v += &rb * &s[n + 1],
                _ => {}
            }
            row.push(v);
        }
        t.push(row);
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// Route agreement

fn route_instances(stat: Statistic, id: &str, grid: &Grid) -> Result<Vec<RouteInstance>> {
    require_r(id, grid, 2)?;
    let v = grid
        .r_values
        .iter()
        .flat_map(|&r| {
            (0..=grid.n_max).map(move |n| RouteInstance {
                stat,
                n,
                r,
                oracle: oracle_reaches(stat, n, r, grid.oracle_n_max),
            })
        })
        .collect();
    nonempty(id, v)
}

fn route_agreement(i: &RouteInstance) -> Outcome {
    let (stat, n, r) = (i.stat, i.n, i.r);
    let formula = formula_row_int(stat, n, r)?;
    if stat == Statistic::Udu {
        expect_rows("closed form vs bivariate series", &formula, &udu_series_row(n, r)?)?;
    } else {
        let array = riordan::statistic_triangle(stat, r, n)?.swap_remove(n);
        expect_rows("closed form vs Riordan array", &formula, &array)?;
        let rec = recurrence_table(stat, r, n)?.swap_remove(n);
        expect_rows("closed form vs recurrence", &formula, &rec)?;
    }
    if i.oracle {
        expect_rows("closed form vs enumeration", &formula, &Oracle::new().row(stat, n, r)?)?;
    }
    Ok(())
}

const CROSS_KEYS: &[&str] = &["n_max", "r", "oracle_n_max"];

/// Closed form, Riordan array, recurrence and enumeration agree on rows
/// `0..=n_max` (series replaces the array and recurrence for `udu`).
/// Rows beyond the oracle cap skip the enumeration route.
pub fn cross_check(stat: Statistic, n_max: usize, r_values: &[u32]) -> Result<CheckReport> {
    let grid = Grid {
        n_max,
        r_values: r_values.to_vec(),
        oracle_n_max: n_max,
        ..Grid::default()
    };
    cross_check_grid(stat, &grid)
}

fn cross_id(stat: Statistic) -> String {
    format!("cross.{}", stat.name())
}

pub fn cross_check_grid(stat: Statistic, grid: &Grid) -> Result<CheckReport> {
    let id = cross_id(stat);
    let inst = route_instances(stat, &id, grid)?;
    Ok(run_instances(&id, grid.to_json(CROSS_KEYS), &inst, route_agreement))
}

// ---------------------------------------------------------------------------
// Registry

/// A named check with its default grid.
pub struct CheckDef {
    pub id: &'static str,
    pub summary: &'static str,
    keys: &'static [&'static str],
    default_grid: fn() -> Grid,
    run: fn(&Grid) -> Result<CheckReport>,
    rerun: fn(&Value) -> Result<Outcome>,
}

impl CheckDef {
    pub fn default_grid(&self) -> Grid {
        (self.default_grid)()
    }

    pub fn grid_keys(&self) -> &'static [&'static str] {
        self.keys
    }

    pub fn run(&self, grid: &Grid) -> Result<CheckReport> {
        (self.run)(grid)
    }

    /// Re-evaluates a single instance as serialized in a report.
    pub fn rerun(&self, instance: &Value) -> Result<Outcome> {
        (self.rerun)(instance)
    }
}

impl fmt::Debug for CheckDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CheckDef").field("id", &self.id).finish()
    }
}

fn rerun_with<I: DeserializeOwned>(v: &Value, eval: fn(&I) -> Outcome) -> Result<Outcome> {
    let inst: I = serde_json::from_value(v.clone())
        .map_err(|e| Error::InvalidParameter(format!("bad instance {v}: {e}")))?;
    Ok(eval(&inst))
}

macro_rules! check {
    ($id:literal, $summary:literal, $keys:expr, $grid:expr, $inst:expr, $eval:path) => {
        CheckDef {
            id: $id,
            summary: $summary,
            keys: $keys,
            default_grid: $grid,
            run: |g| {
                let inst = $inst($id, g)?;
                Ok(run_instances($id, g.to_json($keys), &inst, $eval))
            },
            rerun: |v| rerun_with(v, $eval),
        }
    };
}

const COLORED_KEYS: &[&str] = &["n_max", "r"];

fn colored_from_0(id: &str, g: &Grid) -> Result<Vec<ColoredInstance>> {
    colored(id, g, 0)
}

fn colored_from_1(id: &str, g: &Grid) -> Result<Vec<ColoredInstance>> {
    colored(id, g, 1)
}

fn cross_grid() -> Grid {
    Grid { n_max: 6, r_values: vec![2, 3], ..Grid::default() }
}

/// All checks, in report order.
pub fn registry() -> Vec<CheckDef> {
    vec![
        check!(
            "eq1.5",
            "S_n(a,b) = C_n(a+b,b) = (a+b) M_(n-1)(a+2b,(a+b)b), n >= 1",
            &["n_max", "ab"],
            || Grid { n_max: 16, ab_pairs: vec![(int(1), int(1)), (int(2), int(1)), (int(1), int(2)), (int(3), int(5)), (int(-1), int(2))], ..Grid::default() },
            schroder_catalan_motzkin_instances,
            schroder_catalan_motzkin
        ),
        check!(
            "thm2.1",
            "same-colored dd distribution: closed form = bivariate series = enumeration",
            &["n_max", "r", "oracle_n_max"],
            || Grid { n_max: 8, r_values: vec![1, 2, 3, 4], ..Grid::default() },
            dd_instances,
            dd_distribution
        ),
        check!(
            "lemma2.2",
            "tower Z_m: functional equation, closed form, b -> -b symmetry, Z_m(a,a) = 1",
            &["m_max", "ab", "order"],
            || Grid { m_max: 3, ab_pairs: pairs(&[(1, 2), (2, 3), (3, -1)]), order: 20, ..Grid::default() },
            tower_series_instances,
            tower_series
        ),
        check!(
            "cor2.3",
            "S_n(-a, c_(m+1)) as a double sum over S_l(-a, c_m)",
            &["n_max", "m_max", "ab"],
            || Grid { n_max: 10, m_max: 2, ab_pairs: pairs(&[(1, 2), (2, 3), (-1, 3)]), ..Grid::default() },
            tower_instances,
            tower_expansion
        ),
        check!(
            "eq2.5",
            "S_r(x) S_r(-(r-1)x S_r^2) = S(1,-(r-1)^2;x) and its coefficient identity",
            &["r", "order"],
            || Grid { order: 20, ..Grid::default() },
            family_instances,
            composition_family
        ),
        check!(
            "cor3.2",
            "sum (-1)^l P_(n,l) = S_n",
            COLORED_KEYS,
            Grid::default,
            colored_from_0,
            points_alternating
        ),
        check!(
            "cor3.3",
            "sum (-1)^(l-1) l P_(n+1,l) = sum S_(l+1)",
            COLORED_KEYS,
            Grid::default,
            colored_from_0,
            points_weighted_alternating
        ),
        check!(
            "cor4.2",
            "sum (-1)^l U_(n,l) S_l against S(-1,(r-1)^2)",
            COLORED_KEYS,
            Grid::default,
            colored_from_0,
            usteps_against_s
        ),
        check!(
            "cor4.3",
            "sum (-1)^l U_(n,l) (S_(l+1) - S_l) against S(-1,(r-1)^2)",
            COLORED_KEYS,
            Grid::default,
            colored_from_0,
            usteps_against_s_differences
        ),
        check!(
            "cor4.4",
            "sum (-1)^l (l+1) U_(n,l) = (n+1) + (r-1) sum (l+1) S_(n-l)",
            COLORED_KEYS,
            Grid::default,
            colored_from_0,
            usteps_linear_weights
        ),
        check!(
            "cor5.2",
            "sum (-1)^l p_(n,l) S_l and sum (-1)^l p_(n,l) (S_(l+1) - S_l)",
            COLORED_KEYS,
            Grid::default,
            colored_from_0,
            peaks_against_s
        ),
        check!(
            "cor5.3",
            "sum (-1)^l binom(m+l,l) p_(n,l) for rational m",
            &["n_max", "r", "m"],
            Grid::default,
            binomial_instances,
            peaks_binomial_weights
        ),
        check!(
            "thm6.2",
            "sum l T_(n+1,l) = r n S_n",
            COLORED_KEYS,
            Grid::default,
            colored_from_1,
            udu_linear_weights
        ),
        check!(
            "thm7",
            "(a,b)-weighted points, up steps and peaks: closed form = array = enumeration",
            &["n_max", "ab", "oracle_n_max"],
            || Grid { n_max: 8, ab_pairs: vec![(int(3), int(1)), (int(2), int(5)), (frac(1, 2), frac(-3, 2))], ..Grid::default() },
            weighted_instances,
            weighted_statistic
        ),
        check!(
            "cross.points",
            "points: closed form = array = recurrence = enumeration",
            CROSS_KEYS,
            cross_grid,
            |id, g| route_instances(Statistic::Points, id, g),
            route_agreement
        ),
        check!(
            "cross.usteps",
            "up steps: closed form = array = recurrence = enumeration",
            CROSS_KEYS,
            cross_grid,
            |id, g| route_instances(Statistic::USteps, id, g),
            route_agreement
        ),
        check!(
            "cross.peaks",
            "peaks: closed form = array = recurrence = enumeration",
            CROSS_KEYS,
            cross_grid,
            |id, g| route_instances(Statistic::Peaks, id, g),
            route_agreement
        ),
        check!(
            "cross.udu",
            "udu windows: closed form = bivariate series = enumeration",
            CROSS_KEYS,
            cross_grid,
            |id, g| route_instances(Statistic::Udu, id, g),
            route_agreement
        ),
    ]
}

pub fn check_ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.id).collect()
}

pub fn find(id: &str) -> Option<CheckDef> {
    registry().into_iter().find(|c| c.id == id)
}

/// Runs one check on its default grid with `overrides` applied.
pub fn run_check(id: &str, overrides: &GridOverrides) -> Result<CheckReport> {
    let def = find(id).ok_or_else(|| {
        Error::InvalidParameter(format!("unknown check id {id:?}; valid ids: {}", check_ids().join(", ")))
    })?;
    let mut grid = def.default_grid();
    overrides.apply(&mut grid);
    def.run(&grid)
}

/// Runs every check; reports come back in registry order.
pub fn run_all(overrides: &GridOverrides) -> Result<Vec<CheckReport>> {
    registry()
        .par_iter()
        .map(|def| {
            let mut grid = def.default_grid();
            overrides.apply(&mut grid);
            def.run(&grid)
        })
        .collect()
}
