//! First-server advantage, its diagonal zeros and extrema, and side-by-side
//! comparison statistics, all computed from exact chain solves.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::rational::{fraction_string, int, ratio, sign_of, sqrt_to_fixed, to_f64, Rational};
use crate::solver::AbsorbingChain;
use crate::state_space::{ScoringSystem, Team};
use crate::transitions::{RallyParams, TransitionModel};

fn win_given_each_first_server(system: ScoringSystem, params: &RallyParams) -> Result<(Rational, Rational)> {
    let model = TransitionModel::build(system, params.clone())?;
    let wins = AbsorbingChain::from_model(&model)?.absorption_column(Team::A.column())?;
    let a_first = model.index_of(&system.initial_state(Team::A))?.0;
    let b_first = model.index_of(&system.initial_state(Team::B))?.0;
    Ok((wins[a_first].clone(), wins[b_first].clone()))
}

/// Exact probability that Team A wins from the opening serve.
pub fn win_probability(system: ScoringSystem, params: &RallyParams, first_server: Team) -> Result<Rational> {
    let (a_first, b_first) = win_given_each_first_server(system, params)?;
    Ok(match first_server {
        Team::A => a_first,
        Team::B => b_first,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageResult {
    pub system: ScoringSystem,
    pub p_a: Rational,
    pub p_b: Rational,
    /// `P(A wins | A serves first)`
    pub win_a_first: Rational,
    /// `P(A wins | B serves first)`
    pub win_b_first: Rational,
    pub value: Rational,
    pub sign: i8,
}

/// `f(p_A, p_B) = P(A wins | A serves first) - P(A wins | B serves first)`, exactly.
pub fn first_server_advantage(system: ScoringSystem, params: &RallyParams) -> Result<AdvantageResult> {
    let (win_a_first, win_b_first) = win_given_each_first_server(system, params)?;
    let value = &win_a_first - &win_b_first;
    Ok(AdvantageResult {
        system,
        p_a: params.p_a().clone(),
        p_b: params.p_b().clone(),
        sign: sign_of(&value),
        win_a_first,
        win_b_first,
        value,
    })
}

/// `f(x, x)` for `0 < x <= 1`.
pub fn diagonal_advantage(system: ScoringSystem, x: &Rational) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::DegenerateChain);
    }
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::Domain(format!("diagonal point {} outside (0, 1]", fraction_string(x))));
    }
    Ok(first_server_advantage(system, &RallyParams::even(x.clone())?)?.value)
}

/// Exact sign bracket around one zero of `x ↦ f(x, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
    /// Sign of `f` just left of the root (at `lo`, or further left when `lo` is itself a zero).
    pub sign_left: i8,
    pub sign_right: i8,
}

impl RootInterval {
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub system: ScoringSystem,
    pub tolerance: Rational,
    /// Step of the final scan, after any automatic refinement.
    pub scan_step: Rational,
    pub roots: Vec<RootInterval>,
}

pub fn default_zero_tolerance() -> Rational {
    ratio(1, 10_000_000)
}

pub fn default_scan_step() -> Rational {
    ratio(1, 1024)
}

/// Sign changes of `f(x, x)` over `(0, 1)`: a scan at `scan_step` followed by exact-sign bisection.
pub fn find_diagonal_zeros(system: ScoringSystem, tolerance: &Rational, scan_step: &Rational) -> Result<ZeroSet> {
    find_diagonal_zeros_with(system, tolerance, scan_step, Execution::default())
}

const MAX_SCAN_REFINEMENTS: u32 = 6;

pub fn find_diagonal_zeros_with(
    system: ScoringSystem,
    tolerance: &Rational,
    scan_step: &Rational,
    exec: Execution,
) -> Result<ZeroSet> {
    if !tolerance.is_positive() {
        return Err(Error::Domain("zero tolerance must be positive".into()));
    }
    if !scan_step.is_positive() || *scan_step >= Rational::one() {
        return Err(Error::Domain("scan step must lie in (0, 1)".into()));
    }
    let f = |x: &Rational| diagonal_advantage(system, x);

    let mut step = scan_step.clone();
    let mut refinements = 0;
    let (grid, signs) = loop {
        let mut grid: Vec<Rational> = Vec::new();
        let mut x = step.clone();
        while x < Rational::one() {
            grid.push(x.clone());
            x += &step;
        }
        grid.push(Rational::one());
        let signs: Vec<i8> = par::try_map(exec, &grid, |x| f(x).map(|v| sign_of(&v)))?;
        // Brackets in neighbouring cells mean two roots sit within two steps of
        // each other; a finer scan guards against pairs hidden in one cell.
        let crowded = (2..signs.len()).any(|k| signs[k - 2] * signs[k - 1] < 0 && signs[k - 1] * signs[k] < 0);
        if crowded && refinements < MAX_SCAN_REFINEMENTS && step > *tolerance {
            step /= int(2);
            refinements += 1;
            continue;
        }
        break (grid, signs);
    };

    // exact zeros on the grid, and brackets between consecutive nonzero signs
    let mut exact = Vec::new();
    let mut brackets = Vec::new();
    let mut last_nonzero: Option<usize> = None;
    for k in 0..grid.len() {
        if signs[k] == 0 {
            let left = last_nonzero.map_or(0, |p| signs[p]);
            let right = signs[k + 1..].iter().copied().find(|s| *s != 0).unwrap_or(0);
            exact.push(RootInterval { lo: grid[k].clone(), hi: grid[k].clone(), sign_left: left, sign_right: right });
            continue;
        }
        if let Some(p) = last_nonzero {
            if p == k - 1 && signs[p] * signs[k] < 0 {
                brackets.push((grid[p].clone(), grid[k].clone(), signs[p], signs[k]));
            }
        }
        last_nonzero = Some(k);
    }

    let bisected = par::try_map(exec, &brackets, |(lo, hi, s_lo, s_hi)| -> Result<RootInterval> {
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        while &hi - &lo > *tolerance {
            let mid = (&lo + &hi) / int(2);
            match sign_of(&f(&mid)?) {
                0 => return Ok(RootInterval { lo: mid.clone(), hi: mid, sign_left: *s_lo, sign_right: *s_hi }),
                s if s == *s_lo => lo = mid,
                _ => hi = mid,
            }
        }
        Ok(RootInterval { lo, hi, sign_left: *s_lo, sign_right: *s_hi })
    })?;

    let mut roots: Vec<RootInterval> = exact.into_iter().chain(bisected).collect();
    roots.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(ZeroSet { system, tolerance: tolerance.clone(), scan_step: step, roots })
}

/// Box `x_lo ≤ x ≤ x_hi`, `y_lo ≤ y ≤ y_hi`, `s_lo ≤ x + y ≤ s_hi` inside the unit square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRegion {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
    pub s_lo: Rational,
    pub s_hi: Rational,
}

impl SearchRegion {
    pub fn new(bounds: [Rational; 6]) -> Result<Self> {
        let [x_lo, x_hi, y_lo, y_hi, s_lo, s_hi] = bounds;
        let region = SearchRegion { x_lo, x_hi, y_lo, y_hi, s_lo, s_hi };
        let unit = |v: &Rational| !v.is_negative() && *v <= Rational::one();
        if ![&region.x_lo, &region.x_hi, &region.y_lo, &region.y_hi].into_iter().all(unit) {
            return Err(Error::Domain("region must lie inside [0, 1] x [0, 1]".into()));
        }
        if region.x_lo > region.x_hi || region.y_lo > region.y_hi || region.s_lo > region.s_hi {
            return Err(Error::Domain("region bounds are inverted".into()));
        }
        if region.feasible_point().is_none() {
            return Err(Error::Domain("region is empty".into()));
        }
        Ok(region)
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        let s = x + y;
        *x >= self.x_lo && *x <= self.x_hi && *y >= self.y_lo && *y <= self.y_hi && s >= self.s_lo && s <= self.s_hi
    }

    /// Some point of the region with the largest attainable `x + y` at the lowest admissible sum.
    fn feasible_point(&self) -> Option<(Rational, Rational)> {
        let lo = (&self.x_lo + &self.y_lo).max(self.s_lo.clone());
        let hi = (&self.x_hi + &self.y_hi).min(self.s_hi.clone());
        if lo > hi {
            return None;
        }
        // prefer a strictly positive sum so p_A + p_B > 0 holds
        let sum = if lo.is_zero() { hi } else { lo };
        let x = (&sum - &self.y_hi).max(self.x_lo.clone());
        let y = &sum - &x;
        Some((x, y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremumOptions {
    pub grid_step: Rational,
    /// Search stops once the pattern step falls below this.
    pub point_tol: Rational,
    /// Moves must improve the objective by more than this.
    pub value_tol: Rational,
}

impl Default for ExtremumOptions {
    fn default() -> Self {
        ExtremumOptions { grid_step: ratio(1, 64), point_tol: ratio(1, 10_000_000), value_tol: Rational::zero() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extremum {
    pub x: Rational,
    pub y: Rational,
    pub value: Rational,
    pub evaluations: usize,
}

/// Grid scan of the region followed by a compass search on exact values.
///
/// The compass polls the axis and diagonal directions, so a minimum lying on
/// the ridge `x = y` is reached without zig-zagging.
pub fn find_extremum(
    system: ScoringSystem,
    region: &SearchRegion,
    mode: Mode,
    options: &ExtremumOptions,
    exec: Execution,
) -> Result<Extremum> {
    if !options.grid_step.is_positive() || !options.point_tol.is_positive() {
        return Err(Error::Domain("grid step and point tolerance must be positive".into()));
    }
    let admissible = |x: &Rational, y: &Rational| region.contains(x, y) && (x + y).is_positive();
    let better = |a: &Rational, b: &Rational| match mode {
        Mode::Min => a < &(b - &options.value_tol),
        Mode::Max => a > &(b + &options.value_tol),
    };
    let f = |p: &(Rational, Rational)| -> Result<Rational> {
        let params = RallyParams::new(p.0.clone(), p.1.clone())?;
        Ok(first_server_advantage(system, &params)?.value)
    };

    let mut candidates = Vec::new();
    let mut x = region.x_lo.clone();
    while x <= region.x_hi {
        let mut y = region.y_lo.clone();
        while y <= region.y_hi {
            if admissible(&x, &y) {
                candidates.push((x.clone(), y.clone()));
            }
            y += &options.grid_step;
        }
        x += &options.grid_step;
    }
    if let Some(p) = region.feasible_point().filter(|p| admissible(&p.0, &p.1)) {
        if !candidates.contains(&p) {
            candidates.push(p);
        }
    }
    if candidates.is_empty() {
        return Err(Error::Domain("region has no point with p_A + p_B > 0".into()));
    }

    let mut evaluations = candidates.len();
    let values = par::try_map(exec, &candidates, f)?;
    let mut best_at = 0;
    for k in 1..values.len() {
        if better(&values[k], &values[best_at]) {
            best_at = k;
        }
    }
    let (mut bx, mut by) = candidates.swap_remove(best_at);
    let mut best = values[best_at].clone();

    let directions: [(i64, i64); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)];
    let mut step = options.grid_step.clone();
    while step >= options.point_tol {
        let polls: Vec<(Rational, Rational)> = directions
            .iter()
            .map(|(dx, dy)| (&bx + &step * int(*dx), &by + &step * int(*dy)))
            .filter(|(x, y)| admissible(x, y))
            .collect();
        evaluations += polls.len();
        let values = par::try_map(exec, &polls, f)?;
        let mut improved = None;
        for (k, v) in values.iter().enumerate() {
            let reference = improved.map_or(&best, |i: usize| &values[i]);
            if better(v, reference) {
                improved = Some(k);
            }
        }
        match improved {
            Some(k) => {
                best = values[k].clone();
                (bx, by) = polls[k].clone();
            }
            None => step /= int(2),
        }
    }
    Ok(Extremum { x: bx, y: by, value: best, evaluations })
}

/// Fair-coin-first-server statistics of one system at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub system: ScoringSystem,
    pub p_a: Rational,
    pub p_b: Rational,
    pub win_prob_a: Rational,
    pub mean_duration: Rational,
    pub duration_variance: Rational,
    /// `sqrt(duration_variance)` correctly rounded to `sd_digits` places.
    pub sd_duration: String,
    pub sd_digits: u32,
}

pub const DEFAULT_SD_DIGITS: u32 = 12;

/// Averages both first-server conditionals: probabilities, means and second moments.
pub fn comparison_row(system: ScoringSystem, params: &RallyParams, sd_digits: u32) -> Result<ComparisonRow> {
    let model = TransitionModel::build(system, params.clone())?;
    let solution = AbsorbingChain::from_model(&model)?.solve_all()?;
    let a = model.index_of(&system.initial_state(Team::A))?.0;
    let b = model.index_of(&system.initial_state(Team::B))?.0;
    let half = ratio(1, 2);
    let win_prob_a = (&solution.absorption[a][0] + &solution.absorption[b][0]) * &half;
    let mean_duration = (&solution.mean[a] + &solution.mean[b]) * &half;
    let second = |r: usize| &solution.variance[r] + &solution.mean[r] * &solution.mean[r];
    let second_moment = (second(a) + second(b)) * &half;
    let duration_variance = second_moment - &mean_duration * &mean_duration;
    Ok(ComparisonRow {
        system,
        p_a: params.p_a().clone(),
        p_b: params.p_b().clone(),
        sd_duration: sqrt_to_fixed(&duration_variance, sd_digits),
        sd_digits,
        win_prob_a,
        mean_duration,
        duration_variance,
    })
}

/// Double-precision `(win_prob_a, mean_duration, sd_duration)`; bulk tables only.
pub fn comparison_row_f64(system: ScoringSystem, params: &RallyParams) -> Result<(f64, f64, f64)> {
    let model = TransitionModel::build(system, params.clone())?;
    let solution = AbsorbingChain::from_model_f64(&model)?.solve_all()?;
    let a = model.index_of(&system.initial_state(Team::A))?.0;
    let b = model.index_of(&system.initial_state(Team::B))?.0;
    let win = 0.5 * (solution.absorption[a][0] + solution.absorption[b][0]);
    let mean = 0.5 * (solution.mean[a] + solution.mean[b]);
    let second = |r: usize| solution.variance[r] + solution.mean[r] * solution.mean[r];
    let variance = 0.5 * (second(a) + second(b)) - mean * mean;
    Ok((win, mean, variance.max(0.0).sqrt()))
}

/// One row per `(system, p_B, p_A)`, in that order.
pub fn cross_section_table(
    systems: &[ScoringSystem],
    p_b_values: &[Rational],
    p_a_grid: &[Rational],
    sd_digits: u32,
    exec: Execution,
) -> Result<Vec<ComparisonRow>> {
    if systems.is_empty() || p_b_values.is_empty() || p_a_grid.is_empty() {
        return Err(Error::Domain("cross-section grids must be nonempty".into()));
    }
    let points: Vec<(ScoringSystem, Rational, Rational)> = systems
        .iter()
        .flat_map(|s| p_b_values.iter().flat_map(move |pb| p_a_grid.iter().map(move |pa| (*s, pa.clone(), pb.clone()))))
        .collect();
    par::try_map(exec, &points, |(system, pa, pb)| {
        let at = |e: Error| {
            Error::Domain(format!("{system} at (p_A, p_B) = ({}, {}): {e}", fraction_string(pa), fraction_string(pb)))
        };
        let params = RallyParams::new(pa.clone(), pb.clone()).map_err(at)?;
        comparison_row(*system, &params, sd_digits).map_err(at)
    })
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
    match count {
        0 => Vec::new(),
        1 => vec![lo.clone()],
        _ => {
            let step = (hi - lo) / int(count as i64 - 1);
            (0..count).map(|k| lo + &step * int(k as i64)).collect()
        }
    }
}

/// Win-probability cross sections: `p_B = m/10`, `p_A` over `[0, 1]`.
pub fn win_probability_grid(p_a_points: usize) -> (Vec<Rational>, Vec<Rational>) {
    ((1..=9).map(|m| ratio(m, 10)).collect(), linspace(&int(0), &int(1), p_a_points))
}

/// Duration cross sections: `p_B = 0.36, 0.38, …, 0.54`, `p_A` over `[0.35, 0.55]`.
pub fn duration_grid(p_a_points: usize) -> (Vec<Rational>, Vec<Rational>) {
    ((18..=27).map(|m| ratio(m, 50)).collect(), linspace(&ratio(35, 100), &ratio(55, 100), p_a_points))
}

/// Advantage at every point of a square grid over `[0, 1]²`, skipping `(0, 0)`; rows ordered by `(p_A, p_B)`.
pub fn advantage_grid(system: ScoringSystem, points_per_axis: usize, exec: Execution) -> Result<Vec<AdvantageResult>> {
    let axis = linspace(&int(0), &int(1), points_per_axis);
    let points: Vec<(Rational, Rational)> = axis
        .iter()
        .flat_map(|x| axis.iter().map(move |y| (x.clone(), y.clone())))
        .filter(|(x, y)| !(x.is_zero() && y.is_zero()))
        .collect();
    par::try_map(exec, &points, |(x, y)| first_server_advantage(system, &RallyParams::new(x.clone(), y.clone())?))
}

/// `f(x, x)` along `x = k/(points)`, `k = 1..=points`.
pub fn diagonal_curve(system: ScoringSystem, points: usize, exec: Execution) -> Result<Vec<(Rational, Rational)>> {
    let xs: Vec<Rational> = (1..=points).map(|k| ratio(k as i64, points as i64)).collect();
    par::try_map(exec, &xs, |x| Ok((x.clone(), diagonal_advantage(system, x)?)))
}

/// Decimal value for quick inspection of exact results.
pub fn approx(r: &Rational) -> f64 {
    to_f64(r)
}
