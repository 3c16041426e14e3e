//! Brute-force reference computations.
//!
//! Everything here goes through the explicit region constructors and vertex
//! enumeration on a uniform parameter grid. Nothing is refined and nothing
//! shares code with the optimizer's closed-form objectives, so the results
//! can certify optimizer output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{validate, ChannelParams, RatePair};
use crate::error::{Error, Result};
use crate::region::FEASIBILITY_SLACK;
use crate::schemes::{outer_bound_region, scheme_region, Scheme, SchemeParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Grid step for scheme parameters.
    pub step: f64,
    /// Grid step for rate sampling in [`membership_max_r2`].
    pub rate_step: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            step: 1e-3,
            rate_step: 1e-3,
        }
    }
}

impl OracleConfig {
    pub fn with_step(step: f64) -> Self {
        OracleConfig {
            step,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step <= 0.1) {
            return Err(Error::invalid("step", "in (0, 0.1]"));
        }
        if !(self.rate_step > 0.0 && self.rate_step <= 0.1) {
            return Err(Error::invalid("rate_step", "in (0, 0.1]"));
        }
        Ok(())
    }
}

/// Grid `0, step, 2*step, ...` over `[0, 1]`, always ending at 1.
fn axis(step: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..)
        .map(|i| i as f64 * step)
        .take_while(|&x| x < 1.0 - 1e-12)
        .collect();
    v.push(1.0);
    v
}

/// All grid points of the scheme's parameter box.
fn parameter_grid(scheme: Scheme, step: f64) -> Vec<Vec<f64>> {
    let ax = axis(step);
    match scheme.dims() {
        0 => vec![vec![]],
        1 => ax.iter().map(|&a| vec![a]).collect(),
        _ => ax
            .iter()
            .flat_map(|&a| ax.iter().map(move |&b| vec![a, b]))
            .collect(),
    }
}

/// Largest sum rate over the parameter grid.
pub fn grid_max_sum(scheme: Scheme, params: &ChannelParams, cfg: &OracleConfig) -> Result<f64> {
    validate(params)?;
    cfg.validate()?;
    parameter_grid(scheme, cfg.step)
        .par_iter()
        .map(|x| {
            let sp = SchemeParams::from_unit(scheme, x)?;
            Ok(scheme_region(scheme, params, &sp)?.max_sum_rate().0)
        })
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))
}

/// Whether some grid point of the parameter box yields a region containing
/// `point` (up to [`FEASIBILITY_SLACK`]).
pub fn contains(
    scheme: Scheme,
    params: &ChannelParams,
    point: RatePair,
    cfg: &OracleConfig,
) -> Result<bool> {
    validate(params)?;
    cfg.validate()?;
    let grid = parameter_grid(scheme, cfg.step);
    for x in &grid {
        let sp = SchemeParams::from_unit(scheme, x)?;
        if scheme_region(scheme, params, &sp)?.contains_with_slack(point, FEASIBILITY_SLACK) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest multiple of `rate_step` that, paired with `r1`, is contained in
/// the union region; `None` if no such multiple is. Scans `R2` up to the
/// outer-bound cap, so it is exact to within `rate_step` even for regions
/// that are not closed under decreasing `R2`.
pub fn membership_max_r2(
    scheme: Scheme,
    params: &ChannelParams,
    r1: f64,
    cfg: &OracleConfig,
) -> Result<Option<f64>> {
    let cap = outer_bound_region(params)?
        .vertices()
        .iter()
        .map(|p| p.r2)
        .fold(0.0, f64::max);
    let steps = (cap / cfg.rate_step).floor() as usize;
    for k in (0..=steps).rev() {
        let r2 = k as f64 * cfg.rate_step;
        if contains(scheme, params, RatePair::new(r1, r2), cfg)? {
            return Ok(Some(r2));
        }
    }
    Ok(None)
}
