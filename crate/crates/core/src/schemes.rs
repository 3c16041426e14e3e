//! Rate regions of the cut-set outer bound and the four downlink-optimal
//! relaying schemes, each at fixed scheme parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{cap, clamp_plus, validate, ChannelParams};
use crate::error::{Error, Result};
use crate::region::{LinearConstraint, RateRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    OuterBound,
    #[serde(rename = "CDF")]
    Cdf,
    FdfNested,
    FdfRsSim,
    FdfRsTdm,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::OuterBound,
        Scheme::Cdf,
        Scheme::FdfNested,
        Scheme::FdfRsSim,
        Scheme::FdfRsTdm,
    ];

    /// The four achievable schemes in display precedence order.
    pub const ACHIEVABLE: [Scheme; 4] = [
        Scheme::Cdf,
        Scheme::FdfNested,
        Scheme::FdfRsSim,
        Scheme::FdfRsTdm,
    ];

    /// Label used in winner sets.
    pub fn label(self) -> &'static str {
        match self {
            Scheme::OuterBound => "OuterBound",
            Scheme::Cdf => "CDF",
            Scheme::FdfNested => "FdfNested",
            Scheme::FdfRsSim => "FdfRsSim",
            Scheme::FdfRsTdm => "FdfRsTdm",
        }
    }

    /// Command-line and column name.
    pub fn key(self) -> &'static str {
        match self {
            Scheme::OuterBound => "outer",
            Scheme::Cdf => "cdf",
            Scheme::FdfNested => "fdf_nested",
            Scheme::FdfRsSim => "fdf_rs_sim",
            Scheme::FdfRsTdm => "fdf_rs_tdm",
        }
    }

    /// Number of free scheme parameters.
    pub fn dims(self) -> usize {
        match self {
            Scheme::OuterBound | Scheme::Cdf => 0,
            Scheme::FdfRsTdm => 1,
            Scheme::FdfNested | Scheme::FdfRsSim => 2,
        }
    }

    /// Rate-splitting schemes assume `p1 >= p2`.
    pub fn needs_orientation(self) -> bool {
        matches!(self, Scheme::FdfRsSim | Scheme::FdfRsTdm)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|sc| s == sc.key() || s == sc.label())
            .ok_or_else(|| {
                format!(
                    "unknown scheme '{s}' (expected one of: {})",
                    Scheme::ALL.map(Scheme::key).join(", ")
                )
            })
    }
}

fn check_fraction(field: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Validation {
            field,
            requirement: "in [0, 1]",
        })
    }
}

/// Power fractions of the nested-lattice scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedParams {
    pub delta1: f64,
    pub delta2: f64,
}

/// Power split of simultaneous rate splitting: `eta2` scales the lattice
/// layer, `eta1` the leftover Gaussian layer of user 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsSimParams {
    pub eta1: f64,
    pub eta2: f64,
}

/// Fraction of time spent in the lattice-coded phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TdmParams {
    pub alpha: f64,
}

impl NestedParams {
    pub fn new(delta1: f64, delta2: f64) -> Result<Self> {
        check_fraction("delta1", delta1)?;
        check_fraction("delta2", delta2)?;
        Ok(NestedParams { delta1, delta2 })
    }
}

impl RsSimParams {
    pub fn new(eta1: f64, eta2: f64) -> Result<Self> {
        check_fraction("eta1", eta1)?;
        check_fraction("eta2", eta2)?;
        Ok(RsSimParams { eta1, eta2 })
    }
}

impl TdmParams {
    pub fn new(alpha: f64) -> Result<Self> {
        check_fraction("alpha", alpha)?;
        Ok(TdmParams { alpha })
    }
}

/// Free parameters of one scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemeParams {
    Nested(NestedParams),
    RsSim(RsSimParams),
    Tdm(TdmParams),
    None {},
}

impl SchemeParams {
    /// Maps a point of the unit box `[0, 1]^dims` to the scheme's parameters.
    pub fn from_unit(scheme: Scheme, x: &[f64]) -> Result<Self> {
        if x.len() != scheme.dims() {
            return Err(Error::Validation {
                field: "scheme parameters",
                requirement: "of the scheme's dimension",
            });
        }
        Ok(match scheme {
            Scheme::OuterBound | Scheme::Cdf => SchemeParams::None {},
            Scheme::FdfNested => SchemeParams::Nested(NestedParams::new(x[0], x[1])?),
            Scheme::FdfRsSim => SchemeParams::RsSim(RsSimParams::new(x[0], x[1])?),
            Scheme::FdfRsTdm => SchemeParams::Tdm(TdmParams::new(x[0])?),
        })
    }

    pub fn to_unit(&self) -> Vec<f64> {
        match *self {
            SchemeParams::None {} => vec![],
            SchemeParams::Nested(p) => vec![p.delta1, p.delta2],
            SchemeParams::RsSim(p) => vec![p.eta1, p.eta2],
            SchemeParams::Tdm(p) => vec![p.alpha],
        }
    }

    /// `(name, value)` pairs, in declaration order.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        match *self {
            SchemeParams::None {} => vec![],
            SchemeParams::Nested(p) => vec![("delta1", p.delta1), ("delta2", p.delta2)],
            SchemeParams::RsSim(p) => vec![("eta1", p.eta1), ("eta2", p.eta2)],
            SchemeParams::Tdm(p) => vec![("alpha", p.alpha)],
        }
    }
}

fn with_downlink(params: &ChannelParams, mut cons: Vec<LinearConstraint>) -> Vec<LinearConstraint> {
    if let Some((d1, d2)) = params.downlink_caps() {
        cons.push(LinearConstraint::r1_at_most(d1));
        cons.push(LinearConstraint::r2_at_most(d2));
    }
    cons
}

fn oriented(params: &ChannelParams) -> Result<()> {
    validate(params)?;
    if params.p1 < params.p2 {
        return Err(Error::Orientation {
            p1: params.p1,
            p2: params.p2,
        });
    }
    Ok(())
}

/// Cut-set outer bound.
pub fn outer_bound_region(params: &ChannelParams) -> Result<RateRegion> {
    validate(params)?;
    let (mut b1, mut b2) = (cap(params.p1 / params.n0), cap(params.p2 / params.n0));
    if let Some((d1, d2)) = params.downlink_caps() {
        b1 = b1.min(d1);
        b2 = b2.min(d2);
    }
    RateRegion::new([
        LinearConstraint::r1_at_most(b1),
        LinearConstraint::r2_at_most(b2),
    ])
}

/// Complete decode-forward: uplink multiple-access pentagon plus downlink caps.
pub fn cdf_region(params: &ChannelParams) -> Result<RateRegion> {
    validate(params)?;
    let n0 = params.n0;
    RateRegion::new(with_downlink(
        params,
        vec![
            LinearConstraint::r1_at_most(cap(params.p1 / n0)),
            LinearConstraint::r2_at_most(cap(params.p2 / n0)),
            LinearConstraint::sum_at_most(cap((params.p1 + params.p2) / n0)),
        ],
    ))
}

/// Uplink bounds `(R1, R2)` of nested-lattice functional decode-forward.
/// Zero total transmit power gives `(0, 0)`.
pub fn nested_bounds(params: &ChannelParams, np: &NestedParams) -> (f64, f64) {
    let x1 = np.delta1 * params.p1;
    let x2 = np.delta2 * params.p2;
    let total = x1 + x2;
    if total <= 0.0 {
        return (0.0, 0.0);
    }
    let bound = |x: f64| clamp_plus(0.5 * (x / total + x / params.n0).log2());
    (bound(x1), bound(x2))
}

pub fn fdf_nested_region(params: &ChannelParams, np: &NestedParams) -> Result<RateRegion> {
    validate(params)?;
    let (b1, b2) = nested_bounds(params, np);
    RateRegion::new(with_downlink(
        params,
        vec![
            LinearConstraint::r1_at_most(b1),
            LinearConstraint::r2_at_most(b2),
        ],
    ))
}

/// `(R2 bound, R1 - R2 bound)` of simultaneous rate splitting, `p1 >= p2`.
///
/// The lattice layer is decoded as a modulo sum at effective SNR
/// `eta2*P2 / (N0 + eta1*(P1 - eta2*P2))`, which supports
/// `1/2 log2(1/2 + SNR)` rather than `1/2 log2(1 + SNR)`.
pub fn rs_sim_bounds(params: &ChannelParams, rp: &RsSimParams) -> (f64, f64) {
    let lattice = rp.eta2 * params.p2;
    let gaussian = rp.eta1 * (params.p1 - lattice).max(0.0);
    let snr = lattice / (params.n0 + gaussian);
    let r2 = clamp_plus(0.5 * (0.5 + snr).log2());
    (r2, cap(gaussian / params.n0))
}

/// Rate splitting with simultaneous transmission. Requires `p1 >= p2`.
pub fn fdf_rs_sim_region(params: &ChannelParams, rp: &RsSimParams) -> Result<RateRegion> {
    oriented(params)?;
    let (r2, excess) = rs_sim_bounds(params, rp);
    rate_split_region(params, r2, excess)
}

/// `(R2 bound, R1 - R2 bound)` of time-division rate splitting, `p1 >= p2`.
/// Both endpoints of `alpha` are taken as limits.
pub fn tdm_bounds(params: &ChannelParams, tp: &TdmParams) -> (f64, f64) {
    let alpha = tp.alpha;
    let r2 = if alpha > 0.0 {
        clamp_plus(0.5 * alpha * (0.5 + params.p2 / (alpha * params.n0)).log2())
    } else {
        0.0
    };
    let rest = 1.0 - alpha;
    let excess = if rest > 0.0 {
        rest * cap((params.p1 - params.p2).max(0.0) / (rest * params.n0))
    } else {
        0.0
    };
    (r2, excess)
}

/// Rate splitting with time-division multiplexing. Requires `p1 >= p2`.
pub fn fdf_rs_tdm_region(params: &ChannelParams, tp: &TdmParams) -> Result<RateRegion> {
    oriented(params)?;
    let (r2, excess) = tdm_bounds(params, tp);
    rate_split_region(params, r2, excess)
}

// The split-off part of user 1's message carries R1 - R2 >= 0 bits.
fn rate_split_region(params: &ChannelParams, r2: f64, excess: f64) -> Result<RateRegion> {
    RateRegion::new(with_downlink(
        params,
        vec![
            LinearConstraint::r2_at_most(r2),
            LinearConstraint::excess_at_most(excess),
            LinearConstraint::r2_below_r1(),
        ],
    ))
}

/// Region of `scheme` at `sp`, in the caller's user order. Rate-splitting
/// schemes with `p2 > p1` are built with the roles exchanged and mirrored
/// back.
pub fn scheme_region(
    scheme: Scheme,
    params: &ChannelParams,
    sp: &SchemeParams,
) -> Result<RateRegion> {
    let mismatch = || Error::Validation {
        field: "scheme parameters",
        requirement: "of the scheme's kind",
    };
    let checked = validate(params)?;
    match (scheme, sp) {
        (Scheme::OuterBound, SchemeParams::None {}) => outer_bound_region(params),
        (Scheme::Cdf, SchemeParams::None {}) => cdf_region(params),
        (Scheme::FdfNested, SchemeParams::Nested(np)) => fdf_nested_region(params, np),
        (Scheme::FdfRsSim, SchemeParams::RsSim(rp)) => {
            if checked.swap_needed {
                Ok(fdf_rs_sim_region(&params.mirrored(), rp)?.mirrored())
            } else {
                fdf_rs_sim_region(params, rp)
            }
        }
        (Scheme::FdfRsTdm, SchemeParams::Tdm(tp)) => {
            if checked.swap_needed {
                Ok(fdf_rs_tdm_region(&params.mirrored(), tp)?.mirrored())
            } else {
                fdf_rs_tdm_region(params, tp)
            }
        }
        _ => Err(mismatch()),
    }
}

/// Maximum sum rate of `scheme`'s region at `sp`, by closed form rather than
/// vertex enumeration. Agrees with
/// `scheme_region(..).max_sum_rate().0` (up to rounding). `params` must
/// already be validated; rate-splitting schemes are oriented internally.
pub fn sum_rate_closed_form(scheme: Scheme, params: &ChannelParams, sp: &SchemeParams) -> f64 {
    let (d1, d2) = params
        .downlink_caps()
        .unwrap_or((f64::INFINITY, f64::INFINITY));
    let rate_split = |r2: f64, excess: f64, d1: f64, d2: f64| {
        let shared = r2.min(d2).min(d1);
        shared + (shared + excess).min(d1)
    };
    match (scheme, sp) {
        (Scheme::OuterBound, _) => {
            cap(params.p1 / params.n0).min(d1) + cap(params.p2 / params.n0).min(d2)
        }
        (Scheme::Cdf, _) => {
            let b1 = cap(params.p1 / params.n0).min(d1);
            let b2 = cap(params.p2 / params.n0).min(d2);
            (b1 + b2).min(cap((params.p1 + params.p2) / params.n0))
        }
        (Scheme::FdfNested, SchemeParams::Nested(np)) => {
            let (b1, b2) = nested_bounds(params, np);
            b1.min(d1) + b2.min(d2)
        }
        (Scheme::FdfRsSim, SchemeParams::RsSim(rp)) => {
            if params.p2 > params.p1 {
                let (r2, e) = rs_sim_bounds(&params.mirrored(), rp);
                rate_split(r2, e, d2, d1)
            } else {
                let (r2, e) = rs_sim_bounds(params, rp);
                rate_split(r2, e, d1, d2)
            }
        }
        (Scheme::FdfRsTdm, SchemeParams::Tdm(tp)) => {
            if params.p2 > params.p1 {
                let (r2, e) = tdm_bounds(&params.mirrored(), tp);
                rate_split(r2, e, d2, d1)
            } else {
                let (r2, e) = tdm_bounds(params, tp);
                rate_split(r2, e, d1, d2)
            }
        }
        _ => f64::NEG_INFINITY,
    }
}
