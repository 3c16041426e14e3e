//! Sum-rate sweeps over user 1's power and best-scheme maps over the SNR
//! plane, with CSV and JSON serialization.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{validate, ChannelParams, Downlink};
use crate::error::{Error, Result};
use crate::format::sig9;
use crate::optimizer::{
    optimize_sum_rate, rank_schemes, winner_at, SearchConfig, WinnerCell, SEARCHED_TIE_TOL,
};
use crate::schemes::{NestedParams, RsSimParams, Scheme, SchemeParams, TdmParams};

/// Evenly spaced values `start..=stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Range { start, stop, count }
    }

    /// A single value may be given as `count = 1` with `start == stop`.
    pub fn validate(&self, field: &'static str) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::invalid(field, "finite"));
        }
        if self.start > self.stop {
            return Err(Error::invalid(field, "ordered (start <= stop)"));
        }
        if self.count < 2 && !(self.count == 1 && self.start == self.stop) {
            return Err(Error::invalid(
                field,
                "at least 2 points (or 1 with start == stop)",
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

fn default_n0() -> f64 {
    2.0
}

fn default_snr_range() -> Range {
    Range::new(0.0, 5.0, 101)
}

fn default_tie_tol() -> f64 {
    SEARCHED_TIE_TOL
}

/// Sum rate of every scheme as user 1's power varies, the other user's
/// power and the uplink noise held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub n0: f64,
    pub p2: f64,
    pub p1_range: Range,
    /// `None` leaves the downlink inactive.
    #[serde(default)]
    pub downlink: Option<Downlink>,
    #[serde(default)]
    pub search: SearchConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.p1_range.validate("p1_range")?;
        if self.p1_range.start < 0.0 {
            return Err(Error::invalid("p1_range", "nonnegative"));
        }
        self.search.validate()?;
        validate(&self.channel(self.p1_range.start))?;
        Ok(())
    }

    fn channel(&self, p1: f64) -> ChannelParams {
        ChannelParams {
            p1,
            p2: self.p2,
            n0: self.n0,
            downlink: self.downlink,
        }
    }
}

/// Best searched parameters of the parameterized schemes in one sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub fdf_nested: NestedParams,
    pub fdf_rs_sim: RsSimParams,
    pub fdf_rs_tdm: TdmParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub n0: f64,
    /// Outer-bound sum rate.
    pub ub: f64,
    pub cdf: f64,
    pub fdf_nested: f64,
    pub fdf_rs_sim: f64,
    pub fdf_rs_tdm: f64,
    /// First scheme, in display precedence, within the tie tolerance of the best.
    pub best_scheme: Scheme,
    pub best_sum: f64,
    pub best_params: SweepParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

pub fn sum_rate_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let rows = spec
        .p1_range
        .values()
        .into_par_iter()
        .map(|p1| sweep_row(spec, p1))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { spec: *spec, rows })
}

fn sweep_row(spec: &SweepSpec, p1: f64) -> Result<SweepRow> {
    let ch = spec.channel(p1);
    let ub = optimize_sum_rate(Scheme::OuterBound, &ch, &spec.search)?.sum_rate;
    let ranking = rank_schemes(&ch, &spec.search, SEARCHED_TIE_TOL, &Scheme::ACHIEVABLE)?;
    let result = |s| ranking.get(s).expect("ranked every achievable scheme");
    let nested = match result(Scheme::FdfNested).best_params {
        SchemeParams::Nested(p) => p,
        _ => unreachable!("nested scheme carries nested parameters"),
    };
    let rs_sim = match result(Scheme::FdfRsSim).best_params {
        SchemeParams::RsSim(p) => p,
        _ => unreachable!("rate splitting carries eta parameters"),
    };
    let tdm = match result(Scheme::FdfRsTdm).best_params {
        SchemeParams::Tdm(p) => p,
        _ => unreachable!("time division carries alpha"),
    };
    Ok(SweepRow {
        p1,
        p2: spec.p2,
        n0: spec.n0,
        ub,
        cdf: result(Scheme::Cdf).sum_rate,
        fdf_nested: result(Scheme::FdfNested).sum_rate,
        fdf_rs_sim: result(Scheme::FdfRsSim).sum_rate,
        fdf_rs_tdm: result(Scheme::FdfRsTdm).sum_rate,
        best_scheme: ranking.winners[0],
        best_sum: ranking.best(),
        best_params: SweepParams {
            fdf_nested: nested,
            fdf_rs_sim: rs_sim,
            fdf_rs_tdm: tdm,
        },
    })
}

/// Best-scheme map over `(P1/N0, P2/N0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default = "default_snr_range")]
    pub snr1_range: Range,
    #[serde(default = "default_snr_range")]
    pub snr2_range: Range,
    #[serde(default = "default_n0")]
    pub n0: f64,
    #[serde(default = "default_tie_tol")]
    pub tie_tol: f64,
    #[serde(default)]
    pub search: SearchConfig,
}

impl Default for MapSpec {
    fn default() -> Self {
        MapSpec {
            snr1_range: default_snr_range(),
            snr2_range: default_snr_range(),
            n0: default_n0(),
            tie_tol: default_tie_tol(),
            search: SearchConfig::default(),
        }
    }
}

impl MapSpec {
    pub fn validate(&self) -> Result<()> {
        for (field, r) in [
            ("snr1_range", &self.snr1_range),
            ("snr2_range", &self.snr2_range),
        ] {
            r.validate(field)?;
            if r.start < 0.0 {
                return Err(Error::invalid(field, "nonnegative"));
            }
        }
        validate(&ChannelParams::uplink(0.0, 0.0, self.n0))?;
        if self.tie_tol.is_nan() || self.tie_tol <= 0.0 {
            return Err(Error::invalid("tie_tol", "> 0"));
        }
        self.search.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinnerMap {
    pub spec: MapSpec,
    /// Row-major: `snr2` outer, `snr1` inner.
    pub rows: Vec<WinnerCell>,
}

impl WinnerMap {
    pub fn cell(&self, i1: usize, i2: usize) -> &WinnerCell {
        &self.rows[i2 * self.spec.snr1_range.count + i1]
    }
}

/// Evaluates [`winner_at`] on the SNR grid. Each unordered SNR pair is
/// computed once with the larger SNR as user 1 and mirrored, so the map is
/// symmetric across the diagonal.
pub fn winner_map(spec: &MapSpec) -> Result<WinnerMap> {
    spec.validate()?;
    let s1 = spec.snr1_range.values();
    let s2 = spec.snr2_range.values();

    let key = |a: f64, b: f64| {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        (hi.to_bits(), lo.to_bits())
    };
    let mut pairs: Vec<(u64, u64)> = s2
        .iter()
        .flat_map(|&b| s1.iter().map(move |&a| key(a, b)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let solved: HashMap<(u64, u64), WinnerCell> = pairs
        .into_par_iter()
        .map(|k| {
            let (hi, lo) = (f64::from_bits(k.0), f64::from_bits(k.1));
            let ch = ChannelParams::uplink(hi * spec.n0, lo * spec.n0, spec.n0);
            let mut cell = winner_at(&ch, &spec.search, spec.tie_tol)?;
            cell.snr1 = hi;
            cell.snr2 = lo;
            Ok((k, cell))
        })
        .collect::<Result<_>>()?;

    let rows = s2
        .iter()
        .flat_map(|&b| s1.iter().map(move |&a| (a, b)))
        .map(|(a, b)| {
            let cell = &solved[&key(a, b)];
            if a >= b {
                cell.clone()
            } else {
                cell.transposed()
            }
        })
        .collect();
    Ok(WinnerMap { spec: *spec, rows })
}

/// A result set with a fixed CSV layout.
pub trait Tabular: Serialize {
    const HEADER: &'static str;
    fn csv_lines(&self) -> Vec<String>;
}

impl Tabular for SweepTable {
    const HEADER: &'static str =
        "p1,p2,n0,ub,cdf,fdf_nested,fdf_rs_sim,fdf_rs_tdm,best_scheme,best_sum";

    fn csv_lines(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                let nums = [
                    r.p1,
                    r.p2,
                    r.n0,
                    r.ub,
                    r.cdf,
                    r.fdf_nested,
                    r.fdf_rs_sim,
                    r.fdf_rs_tdm,
                ]
                .map(sig9)
                .join(",");
                format!("{nums},{},{}", r.best_scheme.label(), sig9(r.best_sum))
            })
            .collect()
    }
}

impl Tabular for WinnerMap {
    const HEADER: &'static str = "snr1,snr2,cdf,fdf_nested,fdf_rs_sim,fdf_rs_tdm,winners,margin";

    fn csv_lines(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|c| {
                let nums = [
                    c.snr1,
                    c.snr2,
                    c.cdf,
                    c.fdf_nested,
                    c.fdf_rs_sim,
                    c.fdf_rs_tdm,
                ]
                .map(sig9)
                .join(",");
                let winners: Vec<&str> = c.winners.iter().map(|s| s.label()).collect();
                format!("{nums},{},{}", winners.join("|"), sig9(c.margin))
            })
            .collect()
    }
}

pub fn to_csv<T: Tabular>(data: &T) -> String {
    let mut out = String::from(T::HEADER);
    out.push('\n');
    for line in data.csv_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn to_json<T: Tabular>(data: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(data)?;
    s.push('\n');
    Ok(s)
}

/// Writes `bytes` to `destination`, or to stdout when `None`.
pub fn write_output(destination: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match destination {
        Some(path) => fs::write(path, bytes).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn emit_csv<T: Tabular>(data: &T, destination: Option<&Path>) -> Result<()> {
    write_output(destination, to_csv(data).as_bytes())
}

pub fn emit_json<T: Tabular>(data: &T, destination: Option<&Path>) -> Result<()> {
    write_output(destination, to_json(data)?.as_bytes())
}
