//! Channel model, rate pairs and the Gaussian capacity function.
//!
//! All powers and noise powers are linear (not dB). Rates are in bits per
//! channel use, so every logarithm in this crate is base 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C(x) = 1/2 log2(1 + x)`.
pub fn capacity_c(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(x));
    }
    Ok(cap(x))
}

/// Unchecked `C(x)` for arguments already known to be finite and nonnegative.
#[inline]
pub(crate) fn cap(x: f64) -> f64 {
    debug_assert!(x >= 0.0 && x.is_finite(), "capacity argument {x}");
    0.5 * (1.0 + x).log2()
}

/// `[x]^+ = max(x, 0)`. Maps `-inf` (the log of zero power) and NaN to 0.
#[inline]
pub fn clamp_plus(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Relay-to-users broadcast link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Downlink {
    /// Relay transmit power.
    pub p0: f64,
    /// Noise power at user 1.
    pub n1: f64,
    /// Noise power at user 2.
    pub n2: f64,
}

/// AWGN two-way relay channel. `downlink: None` means the relay power is
/// large enough that the broadcast constraints never bind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub p1: f64,
    pub p2: f64,
    pub n0: f64,
    pub downlink: Option<Downlink>,
}

impl ChannelParams {
    pub fn uplink(p1: f64, p2: f64, n0: f64) -> Self {
        ChannelParams {
            p1,
            p2,
            n0,
            downlink: None,
        }
    }

    pub fn with_downlink(mut self, p0: f64, n1: f64, n2: f64) -> Self {
        self.downlink = Some(Downlink { p0, n1, n2 });
        self
    }

    /// Same channel with the two users relabelled.
    pub fn mirrored(&self) -> Self {
        ChannelParams {
            p1: self.p2,
            p2: self.p1,
            n0: self.n0,
            downlink: self.downlink.map(|d| Downlink {
                p0: d.p0,
                n1: d.n2,
                n2: d.n1,
            }),
        }
    }

    /// Downlink caps `(C(P0/N2), C(P0/N1))` on `(R1, R2)`; `None` when inactive.
    pub(crate) fn downlink_caps(&self) -> Option<(f64, f64)> {
        self.downlink.map(|d| (cap(d.p0 / d.n2), cap(d.p0 / d.n1)))
    }
}

/// Result of [`validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckedParams {
    pub params: ChannelParams,
    /// `p2 > p1`: rate-splitting schemes must exchange the user roles.
    pub swap_needed: bool,
}

pub fn validate(params: &ChannelParams) -> Result<CheckedParams> {
    fn power(field: &'static str, v: f64) -> Result<()> {
        if !v.is_finite() {
            Err(Error::invalid(field, "finite"))
        } else if v < 0.0 {
            Err(Error::invalid(field, ">= 0"))
        } else {
            Ok(())
        }
    }
    fn noise(field: &'static str, v: f64) -> Result<()> {
        if !v.is_finite() {
            Err(Error::invalid(field, "finite"))
        } else if v <= 0.0 {
            Err(Error::invalid(field, "> 0"))
        } else {
            Ok(())
        }
    }

    power("p1", params.p1)?;
    power("p2", params.p2)?;
    noise("n0", params.n0)?;
    if let Some(d) = &params.downlink {
        power("p0", d.p0)?;
        noise("n1", d.n1)?;
        noise("n2", d.n2)?;
    }
    Ok(CheckedParams {
        params: *params,
        swap_needed: params.p2 > params.p1,
    })
}

/// A point `(R1, R2)` in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const ORIGIN: RatePair = RatePair { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        RatePair { r1, r2 }
    }

    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }

    pub fn swapped(&self) -> Self {
        RatePair {
            r1: self.r2,
            r2: self.r1,
        }
    }
}
