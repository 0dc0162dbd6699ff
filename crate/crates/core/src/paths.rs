//! Lattice paths, exhaustive enumerators and brute-force oracles.
//!
//! Enumeration is depth-first and lexicographic in `(kind, color)` with
//! `Up < Down < Horiz < DoubleHoriz`, so streams are reproducible.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binom, powu, BigInt, Rational};

/// Environment variable overriding the oracle cap (a single maximum `n`).
pub const ORACLE_CAP_ENV: &str = "RIORDAN_PATHS_ORACLE_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StepKind {
    Up,
    Down,
    Horiz,
    DoubleHoriz,
}

/// One step. `color` is 1-based on colored down steps and 0 everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub color: u32,
}

impl Step {
    pub const UP: Step = Step { kind: StepKind::Up, color: 0 };
    pub const DOWN: Step = Step { kind: StepKind::Down, color: 0 };
    pub const HORIZ: Step = Step { kind: StepKind::Horiz, color: 0 };
    pub const DOUBLE_HORIZ: Step = Step { kind: StepKind::DoubleHoriz, color: 0 };

    pub fn down(color: u32) -> Step {
        Step { kind: StepKind::Down, color }
    }

    pub fn rise(self) -> i64 {
        match self.kind {
            StepKind::Up => 1,
            StepKind::Down => -1,
            StepKind::Horiz | StepKind::DoubleHoriz => 0,
        }
    }

    /// Horizontal extent; the Schröder flat step covers two units.
    pub fn width(self) -> usize {
        match self.kind {
            StepKind::DoubleHoriz => 2,
            _ => 1,
        }
    }

    fn is_down(self) -> bool {
        self.kind == StepKind::Down
    }

    fn is_up(self) -> bool {
        self.kind == StepKind::Up
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            StepKind::Up => write!(f, "u"),
            StepKind::Down if self.color == 0 => write!(f, "d"),
            StepKind::Down => write!(f, "d{}", self.color),
            StepKind::Horiz => write!(f, "h"),
            StepKind::DoubleHoriz => write!(f, "H"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Dyck,
    Motzkin,
    Schroder,
}

impl Family {
    fn alphabet(self, colors: u32) -> Vec<Step> {
        let mut steps = vec![Step::UP];
        if colors == 0 {
            steps.push(Step::DOWN);
        } else {
            steps.extend((1..=colors).map(Step::down));
        }
        match self {
            Family::Dyck => {}
            Family::Motzkin => steps.push(Step::HORIZ),
            Family::Schroder => steps.push(Step::DOUBLE_HORIZ),
        }
        steps
    }

    /// Horizontal length of a path of size `n` (Motzkin paths have length `n`,
    /// the others `2n`).
    pub fn length(self, n: usize) -> usize {
        match self {
            Family::Motzkin => n,
            Family::Dyck | Family::Schroder => 2 * n,
        }
    }

    fn allows(self, kind: StepKind) -> bool {
        match kind {
            StepKind::Up | StepKind::Down => true,
            StepKind::Horiz => self == Family::Motzkin,
            StepKind::DoubleHoriz => self == Family::Schroder,
        }
    }
}

/// A complete path from height 0 back to height 0, never dipping below 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    family: Family,
    colors: u32,
    steps: Vec<Step>,
}

impl Path {
    /// Validates and builds a path. `colors = 0` means uncolored; otherwise
    /// every down step must carry a color in `1..=colors`.
    pub fn new(family: Family, colors: u32, steps: Vec<Step>) -> Result<Path> {
        let mut height = 0i64;
        for (i, s) in steps.iter().enumerate() {
            if !family.allows(s.kind) {
                return Err(Error::InvalidParameter(format!(
                    "step {s} at position {i} is not a {family:?} step"
                )));
            }
            let color_ok = match (s.kind, colors) {
                (StepKind::Down, 0) => s.color == 0,
                (StepKind::Down, r) => (1..=r).contains(&s.color),
                _ => s.color == 0,
            };
            if !color_ok {
                return Err(Error::InvalidParameter(format!(
                    "step {i} has color {} in a path with {colors} colors",
                    s.color
                )));
            }
            height += s.rise();
            if height < 0 {
                return Err(Error::InvalidParameter(format!(
                    "path goes below the axis at step {i}"
                )));
            }
        }
        if height != 0 {
            return Err(Error::InvalidParameter(format!(
                "path ends at height {height}"
            )));
        }
        Ok(Path { family, colors, steps })
    }

    /// Parses the `Display` form, e.g. `"uud1d2"`, `"uhd"` or `"uHd"`.
    pub fn parse(family: Family, colors: u32, text: &str) -> Result<Path> {
        let mut steps = Vec::new();
        let mut chars = text.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let step = match c {
                'u' => Step::UP,
                'h' => Step::HORIZ,
                'H' => Step::DOUBLE_HORIZ,
                'd' => {
                    let mut digits = String::new();
                    while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                        digits.push(*d);
                        chars.next();
                    }
                    let color = if digits.is_empty() { 0 } else { digits.parse().unwrap() };
                    Step::down(color)
                }
                other => {
                    return Err(Error::InvalidParameter(format!("unknown step {other:?}")))
                }
            };
            steps.push(step);
        }
        Path::new(family, colors, steps)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Horizontal length.
    pub fn length(&self) -> usize {
        self.steps.iter().map(|s| s.width()).sum()
    }

    /// Ordinates of all `steps + 1` points.
    pub fn heights(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut h = 0i64;
        out.push(0);
        for s in &self.steps {
            h += s.rise();
            out.push(h as usize);
        }
        out
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Per-path statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatKind {
    /// Points with ordinate `l`.
    PointsAtLevel(usize),
    /// Up steps ending at ordinate `l`.
    UStepsAtLevel(usize),
    /// `ud` occurrences whose apex has ordinate `l`.
    PeaksAtLevel(usize),
    /// Windows `u d u`, whatever the color of the down step.
    UduCount,
    /// Adjacent down steps with equal colors.
    SameColorDDCount,
}

pub fn stat_value(path: &Path, stat: StatKind) -> Result<usize> {
    let steps = &path.steps;
    let value = match stat {
        StatKind::PointsAtLevel(l) => path.heights().into_iter().filter(|&h| h == l).count(),
        StatKind::UStepsAtLevel(l) => {
            let heights = path.heights();
            steps
                .iter()
                .enumerate()
                .filter(|(i, s)| s.is_up() && heights[i + 1] == l)
                .count()
        }
        StatKind::PeaksAtLevel(l) => {
            let heights = path.heights();
            steps
                .windows(2)
                .enumerate()
                .filter(|(i, w)| w[0].is_up() && w[1].is_down() && heights[i + 1] == l)
                .count()
        }
        StatKind::UduCount => steps
            .windows(3)
            .filter(|w| w[0].is_up() && w[1].is_down() && w[2].is_up())
            .count(),
        StatKind::SameColorDDCount => {
            if path.colors == 0 {
                return Err(Error::Uncolored(format!("{stat:?}")));
            }
            steps
                .windows(2)
                .filter(|w| w[0].is_down() && w[1].is_down() && w[0].color == w[1].color)
                .count()
        }
    };
    Ok(value)
}

/// The four tabulated statistics on paths with no equal-colored `dd`, in
/// table indexing: row `n`, column `l`.
///
/// * `Points`: points at level `l` over paths of semilength `n`;
/// * `USteps`: up steps at level `l + 1` over paths of semilength `n + 1`;
/// * `Peaks`: peaks at level `l + 1` over paths of semilength `n + 1`;
/// * `Udu`: number of paths of semilength `n` with exactly `l` `udu` windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Points,
    USteps,
    Peaks,
    Udu,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::Points,
        Statistic::USteps,
        Statistic::Peaks,
        Statistic::Udu,
    ];

    /// Semilength of the paths that row `n` is taken over.
    pub fn semilength(self, n: usize) -> usize {
        match self {
            Statistic::Points | Statistic::Udu => n,
            Statistic::USteps | Statistic::Peaks => n + 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Points => "points",
            Statistic::USteps => "usteps",
            Statistic::Peaks => "peaks",
            Statistic::Udu => "udu",
        }
    }

    /// Adds this path's contribution to a row indexed by table column.
    fn accumulate(self, path: &Path, weight: u64, row: &mut [u64]) {
        let heights = path.heights();
        let steps = &path.steps;
        match self {
            Statistic::Points => {
                for h in heights {
                    row[h] += weight;
                }
            }
            Statistic::USteps => {
                for (i, s) in steps.iter().enumerate() {
                    if s.is_up() {
                        row[heights[i + 1] - 1] += weight;
                    }
                }
            }
            Statistic::Peaks => {
                for (i, w) in steps.windows(2).enumerate() {
                    if w[0].is_up() && w[1].is_down() {
                        row[heights[i + 1] - 1] += weight;
                    }
                }
            }
            Statistic::Udu => {
                let k = stat_value(path, StatKind::UduCount).unwrap();
                row[k] += weight;
            }
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Depth-first lexicographic enumerator over complete paths of one family.
pub struct PathIter {
    family: Family,
    colors: u32,
    length: usize,
    alphabet: Vec<Step>,
    // (alphabet index, height after, length after)
    stack: Vec<(usize, i64, usize)>,
    started: bool,
    done: bool,
}

impl PathIter {
    fn new(family: Family, colors: u32, length: usize) -> Self {
        PathIter {
            family,
            colors,
            length,
            alphabet: family.alphabet(colors),
            stack: Vec::with_capacity(length),
            started: false,
            done: false,
        }
    }

    fn top(&self) -> (i64, usize) {
        self.stack.last().map(|&(_, h, l)| (h, l)).unwrap_or((0, 0))
    }

    fn feasible(&self, idx: usize, height: i64, used: usize) -> Option<(i64, usize)> {
        let step = self.alphabet[idx];
        let h = height + step.rise();
        let l = used + step.width();
        if h < 0 || l > self.length || h as usize > self.length - l {
            return None;
        }
        Some((h, l))
    }

    /// Extends the current prefix with the smallest completion.
    fn fill(&mut self) -> bool {
        loop {
            let (h, l) = self.top();
            if l == self.length {
                return h == 0;
            }
            let next = (0..self.alphabet.len())
                .find_map(|i| self.feasible(i, h, l).map(|(nh, nl)| (i, nh, nl)));
            match next {
                Some(entry) => self.stack.push(entry),
                None => return false,
            }
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((idx, _, _)) = self.stack.pop() {
            let (h, l) = self.top();
            let next = (idx + 1..self.alphabet.len())
                .find_map(|i| self.feasible(i, h, l).map(|(nh, nl)| (i, nh, nl)));
            if let Some(entry) = next {
                self.stack.push(entry);
                if self.fill() {
                    return true;
                }
            }
        }
        false
    }

    fn current(&self) -> Path {
        Path {
            family: self.family,
            colors: self.colors,
            steps: self.stack.iter().map(|&(i, _, _)| self.alphabet[i]).collect(),
        }
    }
}

impl Iterator for PathIter {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        if self.done {
            return None;
        }
        let ok = if self.started {
            self.advance()
        } else {
            self.started = true;
            self.fill()
        };
        if ok {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

/// Largest semilength the brute-force oracle will enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCap {
    /// Cap for `r <= 3` (and uncolored enumeration).
    pub small_r: usize,
    /// Cap for `r >= 4`.
    pub large_r: usize,
}

impl Default for OracleCap {
    fn default() -> Self {
        OracleCap { small_r: 8, large_r: 7 }
    }
}

impl OracleCap {
    pub fn uniform(n: usize) -> Self {
        OracleCap { small_r: n, large_r: n }
    }

    /// The default cap, or a uniform one taken from [`ORACLE_CAP_ENV`].
    pub fn from_env() -> Self {
        std::env::var(ORACLE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(OracleCap::uniform)
            .unwrap_or_default()
    }

    pub fn limit(&self, r: u32) -> usize {
        if r <= 3 {
            self.small_r
        } else {
            self.large_r
        }
    }

    pub fn check(&self, n: usize, r: u32) -> Result<()> {
        let cap = self.limit(r);
        if n > cap {
            return Err(Error::OracleCap {
                n,
                r,
                cap,
                estimate: estimated_paths(n, r).to_string(),
            });
        }
        Ok(())
    }
}

/// `C_n r^n`, the number of `r`-colored Dyck paths of semilength `n`
/// (`r = 0` counts uncolored paths).
pub fn estimated_paths(n: usize, r: u32) -> BigInt {
    let catalan = binom(2 * n as i64, n as i64).unwrap() / BigInt::from(n + 1);
    catalan * num_traits::pow(BigInt::from(r.max(1)), n)
}

/// Brute-force oracle: enumerates paths and sums statistics.
///
/// The tabulated statistics do not look at colors, so aggregates enumerate
/// each Dyck shape once, exhaust its `r^n` colorings to count the admissible
/// ones, and weight the shape's profile by that count. Shapes are processed
/// in parallel; sums are order-independent.
#[derive(Debug, Clone, Copy, Default)]
pub struct Oracle {
    cap: OracleCap,
}

impl Oracle {
    pub fn new() -> Self {
        Oracle { cap: OracleCap::from_env() }
    }

    pub fn with_cap(cap: OracleCap) -> Self {
        Oracle { cap }
    }

    pub fn cap(&self) -> OracleCap {
        self.cap
    }

    /// Every `r`-colored Dyck path of length `2n`, in lexicographic order.
    pub fn colored_dyck(&self, n: usize, r: u32) -> Result<PathIter> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        self.cap.check(n, r)?;
        Ok(PathIter::new(Family::Dyck, r, 2 * n))
    }

    /// Every uncolored path of the family with size `n`.
    pub fn paths(&self, family: Family, n: usize) -> Result<PathIter> {
        self.cap.check(n, 1)?;
        Ok(PathIter::new(family, 0, family.length(n)))
    }

    fn shapes(n: usize) -> Vec<Path> {
        PathIter::new(Family::Dyck, 0, 2 * n).collect()
    }

    /// Histogram of same-colored `dd` pairs over all `r`-colored paths:
    /// entry `k` is the number of paths with exactly `k` such pairs.
    pub fn dd_distribution(&self, n: usize, r: u32) -> Result<Vec<BigInt>> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        self.cap.check(n, r)?;
        let rows: Vec<Vec<u64>> = Self::shapes(n)
            .par_iter()
            .map(|shape| {
                let mut hist = vec![0u64; n + 1];
                for_each_coloring(shape, r, |same| hist[same] += 1);
                hist
            })
            .collect();
        Ok(sum_rows(rows, n + 1))
    }

    /// Number of `r`-colored paths of semilength `n` with no same-colored `dd`.
    pub fn admissible_count(&self, n: usize, r: u32) -> Result<BigInt> {
        Ok(self.dd_distribution(n, r)?.swap_remove(0))
    }

    /// Row `n` of a tabulated statistic, columns `l = 0..=n`.
    pub fn row(&self, stat: Statistic, n: usize, r: u32) -> Result<Vec<BigInt>> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        let m = stat.semilength(n);
        self.cap.check(m, r)?;
        let rows: Vec<Vec<u64>> = Self::shapes(m)
            .par_iter()
            .map(|shape| {
                let mut admissible = 0u64;
                for_each_coloring(shape, r, |same| {
                    if same == 0 {
                        admissible += 1
                    }
                });
                let mut row = vec![0u64; m + 2];
                if admissible > 0 {
                    stat.accumulate(shape, admissible, &mut row);
                }
                row
            })
            .collect();
        let mut out = sum_rows(rows, m + 2);
        out.truncate(n + 1);
        Ok(out)
    }

    pub fn entry(&self, stat: Statistic, n: usize, l: usize, r: u32) -> Result<BigInt> {
        if l > n {
            return Ok(BigInt::zero());
        }
        Ok(self.row(stat, n, r)?.swap_remove(l))
    }

    /// Sum of a per-path statistic over the admissible paths. Up-step and
    /// peak levels are read on semilength `n + 1`, matching table indexing
    /// (`UStepsAtLevel(l + 1)` at `n` is column `l` of the `USteps` row `n`).
    /// `SameColorDDCount` is summed over all colored paths instead.
    pub fn total(&self, stat: StatKind, n: usize, r: u32) -> Result<BigInt> {
        let m = match stat {
            StatKind::UStepsAtLevel(_) | StatKind::PeaksAtLevel(_) => n + 1,
            _ => n,
        };
        if let StatKind::SameColorDDCount = stat {
            let dist = self.dd_distribution(n, r)?;
            return Ok(dist
                .iter()
                .enumerate()
                .map(|(k, c)| c * BigInt::from(k))
                .sum());
        }
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        self.cap.check(m, r)?;
        let total: u64 = Self::shapes(m)
            .par_iter()
            .map(|shape| {
                let mut admissible = 0u64;
                for_each_coloring(shape, r, |same| {
                    if same == 0 {
                        admissible += 1
                    }
                });
                admissible * stat_value(shape, stat).unwrap() as u64
            })
            .sum();
        Ok(BigInt::from(total))
    }

    /// Total weight of all paths of the family with size `n`.
    ///
    /// Up steps weigh 1. Dyck: down steps in peaks weigh `a`, other downs `b`.
    /// Motzkin: flat steps `a`, downs `b`. Schröder: double flat steps `a`,
    /// downs `b`.
    pub fn weighted_count(&self, family: Family, n: usize, a: &Rational, b: &Rational) -> Result<Rational> {
        let mut exponents: HashMap<(usize, usize), u64> = HashMap::new();
        for path in self.paths(family, n)? {
            *exponents.entry(weight_exponents(&path)).or_default() += 1;
        }
        Ok(exponents
            .into_iter()
            .map(|((i, j), c)| powu(a, i) * powu(b, j) * Rational::from_integer(c.into()))
            .sum())
    }

    /// Row `n` of a tabulated statistic over weighted Dyck paths: each path
    /// contributes `a^peaks * b^(other downs)` times its profile. For positive
    /// integers this counts paths whose peak downs take one of `a` colors and
    /// whose other downs take one of `b` colors.
    pub fn weighted_row(&self, stat: Statistic, n: usize, a: &Rational, b: &Rational) -> Result<Vec<Rational>> {
        if stat == Statistic::Udu {
            return Err(Error::InvalidParameter(
                "weighted rows are defined for points, usteps and peaks".into(),
            ));
        }
        let m = stat.semilength(n);
        self.cap.check(m, 1)?;
        let mut by_weight: HashMap<(usize, usize), Vec<u64>> = HashMap::new();
        for path in PathIter::new(Family::Dyck, 0, 2 * m) {
            let row = by_weight
                .entry(weight_exponents(&path))
                .or_insert_with(|| vec![0; m + 2]);
            stat.accumulate(&path, 1, row);
        }
        let mut out = vec![Rational::zero(); n + 1];
        for ((i, j), row) in by_weight {
            let w = powu(a, i) * powu(b, j);
            for (l, c) in row.into_iter().take(n + 1).enumerate() {
                out[l] += &w * Rational::from_integer(c.into());
            }
        }
        Ok(out)
    }
}

/// `(#a-weighted steps, #b-weighted steps)` for an uncolored path.
fn weight_exponents(path: &Path) -> (usize, usize) {
    let steps = path.steps();
    let mut a = 0;
    let mut b = 0;
    for (i, s) in steps.iter().enumerate() {
        match (path.family, s.kind) {
            (Family::Dyck, StepKind::Down) => {
                if i > 0 && steps[i - 1].is_up() {
                    a += 1
                } else {
                    b += 1
                }
            }
            (_, StepKind::Down) => b += 1,
            (_, StepKind::Horiz | StepKind::DoubleHoriz) => a += 1,
            (_, StepKind::Up) => {}
        }
    }
    (a, b)
}

/// Runs `f(same_color_dd_pairs)` for each of the `r^downs` colorings of an
/// uncolored Dyck shape.
fn for_each_coloring(shape: &Path, r: u32, mut f: impl FnMut(usize)) {
    let steps = shape.steps();
    // follows[i]: down i immediately follows down i - 1
    let follows: Vec<bool> = steps
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_down())
        .map(|(i, _)| i > 0 && steps[i - 1].is_down())
        .collect();
    let downs = follows.len();
    let mut colors = vec![1u32; downs];
    loop {
        let same = (1..downs)
            .filter(|&i| follows[i] && colors[i] == colors[i - 1])
            .count();
        f(same);
        // odometer, last position fastest
        let mut i = downs;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if colors[i] < r {
                colors[i] += 1;
                break;
            }
            colors[i] = 1;
        }
    }
}

fn sum_rows(rows: Vec<Vec<u64>>, width: usize) -> Vec<BigInt> {
    let mut acc = vec![0u128; width];
    for row in rows {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v as u128;
        }
    }
    acc.into_iter().map(BigInt::from).collect()
}

pub fn enumerate_colored_dyck(n: usize, r: u32) -> Result<PathIter> {
    Oracle::new().colored_dyck(n, r)
}

pub fn oracle_total(stat: StatKind, n: usize, r: u32) -> Result<BigInt> {
    Oracle::new().total(stat, n, r)
}

pub fn weighted_count(family: Family, n: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    Oracle::new().weighted_count(family, n, a, b)
}
