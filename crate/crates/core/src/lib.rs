//! Capacity outer bounds and downlink-optimal achievable rate regions of the
//! AWGN two-way relay channel.
//!
//! Two users exchange messages through a relay. On the uplink both users
//! transmit to the relay simultaneously (powers `p1`, `p2`, noise `n0`); on
//! the downlink the relay broadcasts (power `p0`, noise `n1`, `n2`). The
//! crate builds the rate region of each scheme as a small polygon, maximizes
//! sum rate over each scheme's free parameters, and runs the sweeps and
//! best-scheme maps built on top of that.
//!
//! ```
//! use twrc::{optimize_sum_rate, ChannelParams, Scheme, SearchConfig};
//!
//! let ch = ChannelParams::uplink(10.0, 2.0, 2.0);
//! let cdf = optimize_sum_rate(Scheme::Cdf, &ch, &SearchConfig::default()).unwrap();
//! assert!((cdf.sum_rate - 0.5 * 7f64.log2()).abs() < 1e-12);
//! ```

pub mod channel;
pub mod error;
pub mod experiments;
pub mod format;
pub mod optimizer;
pub mod oracle;
pub mod region;
pub mod schemes;

pub use channel::{
    capacity_c, clamp_plus, validate, ChannelParams, CheckedParams, Downlink, RatePair,
};
pub use error::{Error, Result};
pub use experiments::{
    emit_csv, emit_json, sum_rate_sweep, winner_map, MapSpec, Range, SweepRow, SweepSpec,
    SweepTable, WinnerMap,
};
pub use optimizer::{
    optimize_sum_rate, pareto_frontier, rank_schemes, winner_at, Ranking, SchemeResult,
    SearchConfig, WinnerCell, SEARCHED_TIE_TOL,
};
pub use region::{LinearConstraint, RateRegion};
pub use schemes::{
    cdf_region, fdf_nested_region, fdf_rs_sim_region, fdf_rs_tdm_region, outer_bound_region,
    scheme_region, NestedParams, RsSimParams, Scheme, SchemeParams, TdmParams,
};
