//! Sum-rate maximization over scheme parameters, Pareto frontiers and
//! per-channel winner selection.
//!
//! The parameter boxes are at most two-dimensional and the objectives have
//! kinks from `[.]^+` clamps and `min`s, so the search is a dense coarse grid
//! followed by a few shrinking local grids around the best grid maxima.
//! Results are exact up to the final grid resolution; there is no global
//! optimality guarantee beyond that.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::channel::{validate, ChannelParams, RatePair};
use crate::error::{Error, Result};
use crate::schemes::{scheme_region, sum_rate_closed_form, Scheme, SchemeParams};

/// Tie tolerance for comparing searched optima.
pub const SEARCHED_TIE_TOL: f64 = 1e-4;

/// Number of coarse-grid local maxima that get refined.
const MAX_SEEDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Points per parameter axis in the coarse grid.
    pub coarse_grid: usize,
    pub refine_iters: usize,
    /// Step shrink factor per refinement pass.
    pub refine_shrink: f64,
    /// Refinement stops once a pass improves the objective by less than this.
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            coarse_grid: 201,
            refine_iters: 3,
            refine_shrink: 0.1,
            tol: 1e-6,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_grid < 2 {
            return Err(Error::invalid("coarse_grid", ">= 2"));
        }
        if !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
            return Err(Error::invalid("refine_shrink", "in (0, 1)"));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::invalid("tol", "> 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeResult {
    pub scheme: Scheme,
    pub sum_rate: f64,
    pub best_params: SchemeParams,
    /// Maximizing rate pair, in the caller's user order.
    pub argmax: RatePair,
    /// The user roles were exchanged internally (rate splitting with `p2 > p1`).
    pub swapped: bool,
}

/// Lexicographic comparison of parameter vectors.
fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// `(value, x)` beats `(best_value, best_x)`: larger value, then
/// lexicographically larger parameters.
fn beats(value: f64, x: &[f64], best_value: f64, best_x: &[f64]) -> bool {
    value > best_value || (value == best_value && lex(x, best_x).is_gt())
}

/// Maximizes `f` over the unit box `[0, 1]^dims`. Returns the maximizer and
/// the maximum. Deterministic for a fixed `cfg`.
///
/// # Panics
///
/// If `dims > 8`.
pub fn maximize_on_unit_box(
    dims: usize,
    cfg: &SearchConfig,
    f: impl Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    assert!(dims <= 8, "at most 8 search dimensions");
    if dims == 0 {
        return (vec![], f(&[]));
    }
    let n = cfg.coarse_grid;
    let last = (n - 1) as f64;
    let total = n.pow(dims as u32);
    let fill = |mut idx: usize, x: &mut [f64]| {
        for d in (0..dims).rev() {
            x[d] = (idx % n) as f64 / last;
            idx /= n;
        }
    };
    let point = |idx: usize| -> Vec<f64> {
        let mut x = vec![0.0; dims];
        fill(idx, &mut x);
        x
    };

    let mut buf = vec![0.0; dims];
    let values: Vec<f64> = (0..total)
        .map(|i| {
            fill(i, &mut buf);
            f(&buf)
        })
        .collect();

    // Coarse-grid local maxima over the full (3^dims - 1) neighbourhood.
    let mut seeds: Vec<usize> = (0..total)
        .filter(|&i| is_local_max(i, dims, n, &values))
        .collect();
    // Index order on the grid is lexicographic order on points.
    seeds.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(j.cmp(&i)));
    seeds.truncate(MAX_SEEDS);
    if seeds.is_empty() {
        // Only possible with NaN values everywhere.
        seeds.push(0);
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for &s in &seeds {
        let (x, v) = refine(point(s), values[s], 1.0 / last, cfg, &f);
        match &best {
            Some((bx, bv)) if !beats(v, &x, *bv, bx) => {}
            _ => best = Some((x, v)),
        }
    }
    best.expect("at least one seed")
}

fn is_local_max(i: usize, dims: usize, n: usize, values: &[f64]) -> bool {
    let v = values[i];
    if v.is_nan() {
        return false;
    }
    let mut coords = [0usize; 8];
    let coords = &mut coords[..dims];
    let mut rem = i;
    for d in (0..dims).rev() {
        coords[d] = rem % n;
        rem /= n;
    }
    let neighbours = 3usize.pow(dims as u32);
    for k in 0..neighbours {
        let mut idx = 0usize;
        let mut kk = k;
        let mut is_self = true;
        let mut inside = true;
        for &c in coords.iter() {
            let off = (kk % 3) as isize - 1;
            kk /= 3;
            if off != 0 {
                is_self = false;
            }
            let nc = c as isize + off;
            if nc < 0 || nc >= n as isize {
                inside = false;
                break;
            }
            idx = idx * n + nc as usize;
        }
        if inside && !is_self && values[idx] > v {
            return false;
        }
    }
    true
}

fn refine(
    mut center: Vec<f64>,
    mut value: f64,
    mut step: f64,
    cfg: &SearchConfig,
    f: &impl Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let dims = center.len();
    let half = (1.0 / cfg.refine_shrink).ceil() as isize;
    let side = (2 * half + 1) as usize;
    let total = side.pow(dims as u32);
    for _ in 0..cfg.refine_iters {
        let fine = step * cfg.refine_shrink;
        let start_value = value;
        let origin = center.clone();
        let mut x = vec![0.0; dims];
        for mut k in 0..total {
            for d in (0..dims).rev() {
                let off = (k % side) as isize - half;
                k /= side;
                x[d] = (origin[d] + off as f64 * fine).clamp(0.0, 1.0);
            }
            let v = f(&x);
            if beats(v, &x, value, &center) {
                value = v;
                center.copy_from_slice(&x);
            }
        }
        step = fine;
        if value - start_value < cfg.tol {
            break;
        }
    }
    (center, value)
}

/// Maximum sum rate of `scheme` over its parameter box.
///
/// Rate-splitting schemes are evaluated with the user roles exchanged when
/// `p2 > p1`; the result is reported in the caller's order with
/// `swapped = true`.
pub fn optimize_sum_rate(
    scheme: Scheme,
    params: &ChannelParams,
    cfg: &SearchConfig,
) -> Result<SchemeResult> {
    validate(params)?;
    cfg.validate()?;
    let (x, _) = maximize_on_unit_box(scheme.dims(), cfg, |x| {
        sum_rate_closed_form(scheme, params, &unit_params(scheme, x))
    });
    let best_params = SchemeParams::from_unit(scheme, &x)?;
    let region = scheme_region(scheme, params, &best_params)?;
    let (sum_rate, argmax) = region.max_sum_rate();
    Ok(SchemeResult {
        scheme,
        sum_rate,
        best_params,
        argmax,
        swapped: scheme.needs_orientation() && params.p2 > params.p1,
    })
}

// Search points are always inside the unit box.
fn unit_params(scheme: Scheme, x: &[f64]) -> SchemeParams {
    use crate::schemes::{NestedParams, RsSimParams, TdmParams};
    match scheme {
        Scheme::OuterBound | Scheme::Cdf => SchemeParams::None {},
        Scheme::FdfNested => SchemeParams::Nested(NestedParams {
            delta1: x[0],
            delta2: x[1],
        }),
        Scheme::FdfRsSim => SchemeParams::RsSim(RsSimParams {
            eta1: x[0],
            eta2: x[1],
        }),
        Scheme::FdfRsTdm => SchemeParams::Tdm(TdmParams { alpha: x[0] }),
    }
}

/// Upper-right boundary of the union over scheme parameters of the scheme's
/// regions.
///
/// Targets `t` are spaced evenly over `[0, max R1]`. For each target the
/// point with the largest `R2` among union points with `R1 >= t` is
/// returned, preferring the smallest such `R1`. For regions closed under
/// decreasing either rate this is `(t, max R2 at R1 = t)`. Rate-splitting
/// regions require `R2 <= R1`, so their low targets land on the diagonal.
/// No time-sharing across parameters is applied.
pub fn pareto_frontier(
    scheme: Scheme,
    params: &ChannelParams,
    cfg: &SearchConfig,
    n_points: usize,
) -> Result<Vec<RatePair>> {
    validate(params)?;
    cfg.validate()?;
    if n_points < 2 {
        return Err(Error::invalid("n_points", ">= 2"));
    }
    let region_at = |x: &[f64]| scheme_region(scheme, params, &unit_params(scheme, x));

    let (x_r1, r1_max) = maximize_on_unit_box(scheme.dims(), cfg, |x| {
        region_at(x).map_or(f64::NEG_INFINITY, |r| r.max_r1())
    });

    let mut points = Vec::with_capacity(n_points);
    for k in 0..n_points {
        let t = if k + 1 == n_points {
            r1_max
        } else {
            r1_max * k as f64 / (n_points - 1) as f64
        };
        let score = |x: &[f64]| {
            region_at(x)
                .ok()
                .and_then(|r| r.max_r2_beyond(t))
                .map_or(f64::NEG_INFINITY, |p| p.r2)
        };
        let (mut x, mut v) = maximize_on_unit_box(scheme.dims(), cfg, score);
        let v_r1 = score(&x_r1);
        if v_r1 > v {
            (x, v) = (x_r1.clone(), v_r1);
        }
        let p = if v.is_finite() {
            region_at(&x)?.max_r2_beyond(t)
        } else {
            None
        };
        points.push(p.unwrap_or(RatePair::new(t, 0.0)));
    }

    // A point found for a larger target also serves every smaller one.
    for k in (0..n_points - 1).rev() {
        if points[k + 1].r2 > points[k].r2 {
            points[k] = points[k + 1];
        }
    }
    Ok(points)
}

/// Searched optima of a set of schemes, and which of them win.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub results: Vec<SchemeResult>,
    /// Schemes within the tie tolerance of the best, in the order given.
    pub winners: Vec<Scheme>,
    /// Best sum rate minus the best non-winning one (0 if all tie).
    pub margin: f64,
}

impl Ranking {
    pub fn best(&self) -> f64 {
        self.results
            .iter()
            .map(|r| r.sum_rate)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn get(&self, scheme: Scheme) -> Option<&SchemeResult> {
        self.results.iter().find(|r| r.scheme == scheme)
    }
}

/// Optimizes each of `schemes` and ranks them by sum rate.
pub fn rank_schemes(
    params: &ChannelParams,
    cfg: &SearchConfig,
    tie_tol: f64,
    schemes: &[Scheme],
) -> Result<Ranking> {
    if tie_tol.is_nan() || tie_tol <= 0.0 {
        return Err(Error::invalid("tie_tol", "> 0"));
    }
    if schemes.is_empty() {
        return Err(Error::invalid("scheme set", "nonempty"));
    }
    let results = schemes
        .iter()
        .map(|&s| optimize_sum_rate(s, params, cfg))
        .collect::<Result<Vec<_>>>()?;
    let best = results
        .iter()
        .map(|r| r.sum_rate)
        .fold(f64::NEG_INFINITY, f64::max);
    let winners: Vec<Scheme> = results
        .iter()
        .filter(|r| r.sum_rate >= best - tie_tol)
        .map(|r| r.scheme)
        .collect();
    let runner_up = results
        .iter()
        .filter(|r| !winners.contains(&r.scheme))
        .map(|r| r.sum_rate)
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = if runner_up.is_finite() {
        best - runner_up
    } else {
        0.0
    };
    Ok(Ranking {
        results,
        winners,
        margin,
    })
}

/// One point of the best-scheme map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinnerCell {
    pub snr1: f64,
    pub snr2: f64,
    pub cdf: f64,
    pub fdf_nested: f64,
    pub fdf_rs_sim: f64,
    pub fdf_rs_tdm: f64,
    /// Tie set in display precedence order.
    pub winners: Vec<Scheme>,
    pub margin: f64,
}

impl WinnerCell {
    /// Single label for display: the first winner in precedence order.
    pub fn display_winner(&self) -> Scheme {
        self.winners[0]
    }

    pub fn sum_of(&self, scheme: Scheme) -> Option<f64> {
        match scheme {
            Scheme::Cdf => Some(self.cdf),
            Scheme::FdfNested => Some(self.fdf_nested),
            Scheme::FdfRsSim => Some(self.fdf_rs_sim),
            Scheme::FdfRsTdm => Some(self.fdf_rs_tdm),
            Scheme::OuterBound => None,
        }
    }

    /// The same cell with the two users exchanged.
    pub fn transposed(&self) -> Self {
        WinnerCell {
            snr1: self.snr2,
            snr2: self.snr1,
            ..self.clone()
        }
    }
}

/// Compares the four achievable schemes at `params`. The outer bound is
/// not a contender.
pub fn winner_at(params: &ChannelParams, cfg: &SearchConfig, tie_tol: f64) -> Result<WinnerCell> {
    let ranking = rank_schemes(params, cfg, tie_tol, &Scheme::ACHIEVABLE)?;
    let sum = |s| ranking.get(s).map(|r| r.sum_rate).unwrap_or(0.0);
    Ok(WinnerCell {
        snr1: params.p1 / params.n0,
        snr2: params.p2 / params.n0,
        cdf: sum(Scheme::Cdf),
        fdf_nested: sum(Scheme::FdfNested),
        fdf_rs_sim: sum(Scheme::FdfRsSim),
        fdf_rs_tdm: sum(Scheme::FdfRsTdm),
        winners: ranking.winners,
        margin: ranking.margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(p1: f64, p2: f64, n0: f64) -> ChannelParams {
        ChannelParams::uplink(p1, p2, n0)
    }

    #[test]
    fn search_config_checks() {
        assert!(SearchConfig::default().validate().is_ok());
        let bad = SearchConfig {
            coarse_grid: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            refine_shrink: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn unit_box_search_finds_interior_max() {
        let cfg = SearchConfig::default();
        let (x, v) = maximize_on_unit_box(2, &cfg, |x| {
            -(x[0] - 0.3137).powi(2) - (x[1] - 0.777).powi(2)
        });
        assert!((x[0] - 0.3137).abs() < 1e-5 && (x[1] - 0.777).abs() < 1e-5);
        assert!(v > -1e-9);
        let (x, _) = maximize_on_unit_box(1, &cfg, |x| -(x[0] - 0.123456).abs());
        assert!((x[0] - 0.123456).abs() < 1e-5);
    }

    #[test]
    fn unit_box_search_prefers_better_basin() {
        // Two peaks; the narrower one is higher.
        let cfg = SearchConfig::default();
        let f = |x: &[f64]| {
            let a = 1.0 - 4.0 * (x[0] - 0.2).abs();
            let b = 1.01 - 40.0 * (x[0] - 0.8123).abs();
            a.max(b)
        };
        let (x, v) = maximize_on_unit_box(1, &cfg, f);
        assert!((x[0] - 0.8123).abs() < 1e-5, "{x:?}");
        assert!((v - 1.01).abs() < 1e-3);
    }

    #[test]
    fn plateau_tie_break_is_lexicographically_largest() {
        let (x, v) = maximize_on_unit_box(2, &SearchConfig::default(), |_| 0.0);
        assert_eq!(v, 0.0);
        assert_eq!(x, vec![1.0, 1.0]);
    }

    #[test]
    fn cdf_needs_no_search() {
        let r =
            optimize_sum_rate(Scheme::Cdf, &up(10.0, 2.0, 2.0), &SearchConfig::default()).unwrap();
        assert!((r.sum_rate - 0.5 * 7f64.log2()).abs() < 1e-12);
        assert_eq!(r.best_params, SchemeParams::None {});
        assert!(!r.swapped);
    }

    #[test]
    fn nested_equal_power_corner() {
        let r = optimize_sum_rate(
            Scheme::FdfNested,
            &up(10.0, 10.0, 2.0),
            &SearchConfig::default(),
        )
        .unwrap();
        assert!((r.sum_rate - 5.5f64.log2()).abs() < 1e-12);
        assert_eq!(r.best_params.to_unit(), vec![1.0, 1.0]);
    }

    #[test]
    fn tdm_optimum() {
        let cfg = SearchConfig::default();
        let r = optimize_sum_rate(Scheme::FdfRsTdm, &up(10.0, 2.0, 2.0), &cfg).unwrap();
        assert!((r.sum_rate - 1.543752).abs() < 1e-5, "{}", r.sum_rate);
        let alpha = r.best_params.to_unit()[0];
        assert!((alpha - 0.283).abs() < 0.01, "{alpha}");
        let r = optimize_sum_rate(Scheme::FdfRsTdm, &up(20.0, 2.0, 2.0), &cfg).unwrap();
        assert!((r.sum_rate - 1.937771).abs() < 1e-5, "{}", r.sum_rate);
        assert!((r.best_params.to_unit()[0] - 0.20).abs() < 0.01);
    }

    #[test]
    fn swapped_roles_reported_in_caller_order() {
        let cfg = SearchConfig::default();
        let a = optimize_sum_rate(Scheme::FdfRsTdm, &up(10.0, 2.0, 2.0), &cfg).unwrap();
        let b = optimize_sum_rate(Scheme::FdfRsTdm, &up(2.0, 10.0, 2.0), &cfg).unwrap();
        assert!(!a.swapped && b.swapped);
        assert_eq!(a.sum_rate, b.sum_rate);
        assert_eq!(a.argmax, b.argmax.swapped());
        assert!(b.argmax.r2 >= b.argmax.r1);
    }

    #[test]
    fn winner_examples() {
        let cfg = SearchConfig::default();
        let c = winner_at(&up(1.0, 1.0, 2.0), &cfg, SEARCHED_TIE_TOL).unwrap();
        assert_eq!(c.winners, vec![Scheme::Cdf]);
        assert!((c.cdf - 0.5).abs() < 1e-12);
        assert!((c.fdf_rs_tdm - 0.334649).abs() < 1e-5);

        let c = winner_at(&up(10.0, 10.0, 2.0), &cfg, SEARCHED_TIE_TOL).unwrap();
        assert_eq!(
            c.winners,
            vec![Scheme::FdfNested, Scheme::FdfRsSim, Scheme::FdfRsTdm]
        );
        assert!((c.cdf - 0.5 * 11f64.log2()).abs() < 1e-12);
        assert!((c.margin - (5.5f64.log2() - 0.5 * 11f64.log2())).abs() < 1e-9);
        assert_eq!(c.display_winner(), Scheme::FdfNested);

        let c = winner_at(&up(10.0, 2.0, 2.0), &cfg, SEARCHED_TIE_TOL).unwrap();
        assert_eq!(c.winners, vec![Scheme::FdfRsTdm]);
        assert!((c.fdf_nested - 1.383356).abs() < 1e-5);
    }

    #[test]
    fn frontier_cdf_pentagon() {
        let pts =
            pareto_frontier(Scheme::Cdf, &up(2.0, 2.0, 2.0), &SearchConfig::default(), 5).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(pts[0].r1.abs() < 1e-12 && (pts[0].r2 - 0.5).abs() < 1e-12);
        assert!((pts[4].r1 - 0.5).abs() < 1e-12 && (pts[4].r2 - 0.292481).abs() < 1e-6);
        for w in pts.windows(2) {
            assert!(w[1].r2 <= w[0].r2 + 1e-12);
        }
    }

    #[test]
    fn frontier_nested_starts_at_single_user_corner() {
        let cfg = SearchConfig {
            coarse_grid: 51,
            ..Default::default()
        };
        let pts = pareto_frontier(Scheme::FdfNested, &up(2.0, 2.0, 2.0), &cfg, 3).unwrap();
        assert!(pts[0].r1.abs() < 1e-12 && (pts[0].r2 - 0.5).abs() < 1e-9);
        assert!((pts[2].r1 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn frontier_zero_power() {
        let cfg = SearchConfig {
            coarse_grid: 11,
            ..Default::default()
        };
        for s in Scheme::ALL {
            let pts = pareto_frontier(s, &up(0.0, 0.0, 2.0), &cfg, 4).unwrap();
            assert!(pts.iter().all(|p| p.r2 == 0.0 && p.r1 == 0.0), "{s}");
        }
        assert!(pareto_frontier(Scheme::Cdf, &up(1.0, 1.0, 1.0), &cfg, 1).is_err());
    }
}
