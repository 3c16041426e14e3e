//! Two-dimensional rate regions as intersections of half-planes.
//!
//! Every region lives in the nonnegative quadrant and is cut by at most a
//! handful of constraints `a*R1 + b*R2 <= c` with `a, b` in `{-1, 0, 1}`, so
//! linear objectives are maximized by enumerating vertices directly.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::channel::RatePair;
use crate::error::{Error, Result};

/// Relative slack used when testing whether a point satisfies a constraint.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// Sums closer than this are treated as equal when picking a maximizing vertex.
const TIE_EPS: f64 = 1e-12;

/// `a*R1 + b*R2 <= c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub a: i8,
    pub b: i8,
    pub c: f64,
}

impl LinearConstraint {
    pub fn new(a: i8, b: i8, c: f64) -> Result<Self> {
        if !(-1..=1).contains(&a) || !(-1..=1).contains(&b) {
            return Err(Error::Constraint("coefficients must be -1, 0 or 1"));
        }
        if a == 0 && b == 0 {
            return Err(Error::Constraint("(a, b) must not both be zero"));
        }
        if !c.is_finite() {
            return Err(Error::Constraint("bound must be finite"));
        }
        Ok(LinearConstraint { a, b, c })
    }

    /// `R1 <= c`
    pub fn r1_at_most(c: f64) -> Self {
        LinearConstraint { a: 1, b: 0, c }
    }

    /// `R2 <= c`
    pub fn r2_at_most(c: f64) -> Self {
        LinearConstraint { a: 0, b: 1, c }
    }

    /// `R1 + R2 <= c`
    pub fn sum_at_most(c: f64) -> Self {
        LinearConstraint { a: 1, b: 1, c }
    }

    /// `R1 - R2 <= c`
    pub fn excess_at_most(c: f64) -> Self {
        LinearConstraint { a: 1, b: -1, c }
    }

    /// `R2 <= R1`
    pub fn r2_below_r1() -> Self {
        LinearConstraint {
            a: -1,
            b: 1,
            c: 0.0,
        }
    }

    /// `R1 >= t`
    pub fn r1_at_least(t: f64) -> Self {
        LinearConstraint { a: -1, b: 0, c: -t }
    }

    #[inline]
    pub fn lhs(&self, p: RatePair) -> f64 {
        f64::from(self.a) * p.r1 + f64::from(self.b) * p.r2
    }

    #[inline]
    pub fn holds(&self, p: RatePair, slack: f64) -> bool {
        self.lhs(p) <= self.c + slack * (1.0 + self.c.abs())
    }

    /// Same constraint with the roles of `R1` and `R2` exchanged.
    pub fn mirrored(&self) -> Self {
        LinearConstraint {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.a, self.b)
            .cmp(&(other.a, other.b))
            .then(self.c.total_cmp(&other.c))
    }
}

// Implicit nonnegativity.
const NONNEG: [LinearConstraint; 2] = [
    LinearConstraint {
        a: -1,
        b: 0,
        c: 0.0,
    },
    LinearConstraint {
        a: 0,
        b: -1,
        c: 0.0,
    },
];

/// A bounded, nonempty convex polygon in the nonnegative quadrant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    constraints: Vec<LinearConstraint>,
}

impl RateRegion {
    /// Builds a region, dropping exact duplicate constraints. Fails if the
    /// polygon is unbounded or empty.
    pub fn new(constraints: impl IntoIterator<Item = LinearConstraint>) -> Result<Self> {
        let mut kept: Vec<LinearConstraint> = Vec::new();
        for con in constraints {
            let con = LinearConstraint::new(con.a, con.b, con.c)?;
            if !kept.contains(&con) {
                kept.push(con);
            }
        }
        let region = RateRegion { constraints: kept };
        if !region.is_bounded() {
            return Err(Error::Unbounded);
        }
        if region.vertices().is_empty() {
            return Err(Error::Constraint("region is empty"));
        }
        Ok(region)
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    /// Constraints sorted by `(a, b, c)`, for order-insensitive comparison.
    pub fn canonical(&self) -> Vec<LinearConstraint> {
        let mut v = self.constraints.clone();
        v.sort_by(LinearConstraint::canonical_cmp);
        v
    }

    pub fn mirrored(&self) -> Self {
        RateRegion {
            constraints: self.constraints.iter().map(|c| c.mirrored()).collect(),
        }
    }

    /// Membership with [`FEASIBILITY_SLACK`].
    pub fn contains(&self, p: RatePair) -> bool {
        self.contains_with_slack(p, FEASIBILITY_SLACK)
    }

    pub fn contains_with_slack(&self, p: RatePair, slack: f64) -> bool {
        NONNEG
            .iter()
            .chain(&self.constraints)
            .all(|c| c.holds(p, slack))
    }

    pub fn vertices(&self) -> Vec<RatePair> {
        self.vertices_with(&[])
    }

    /// Vertices of the region intersected with the `extra` half-planes.
    pub fn vertices_with(&self, extra: &[LinearConstraint]) -> Vec<RatePair> {
        let all: Vec<LinearConstraint> = NONNEG
            .iter()
            .chain(&self.constraints)
            .chain(extra)
            .copied()
            .collect();
        let mut out = Vec::new();
        for (i, ci) in all.iter().enumerate() {
            for cj in &all[i + 1..] {
                let Some(p) = intersect(ci, cj) else { continue };
                if all.iter().all(|c| c.holds(p, FEASIBILITY_SLACK)) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Maximum of `R1 + R2` and a vertex attaining it. Among vertices whose
    /// sums tie, the lexicographically largest `(R1, R2)` is returned.
    pub fn max_sum_rate(&self) -> (f64, RatePair) {
        let best = best_vertex(self.vertices(), |p| p.sum(), lex_cmp)
            .expect("a constructed region has at least one vertex");
        (best.sum(), best)
    }

    /// Largest `R1` over the region.
    pub fn max_r1(&self) -> f64 {
        self.vertices()
            .into_iter()
            .map(|p| p.r1)
            .fold(0.0, f64::max)
    }

    /// The point with the largest `R2` among points with `R1 >= t`, taking the
    /// smallest such `R1` on ties. `None` if no point of the region has
    /// `R1 >= t`.
    pub fn max_r2_beyond(&self, t: f64) -> Option<RatePair> {
        let vs = self.vertices_with(&[LinearConstraint::r1_at_least(t)]);
        best_vertex(vs, |p| p.r2, |p, q| lex_cmp(q, p))
    }

    /// Unbounded iff some nonzero direction `d >= 0` has `a*d1 + b*d2 <= 0`
    /// for every constraint. The extreme rays of that cone are the two axes
    /// or are parallel to some constraint line.
    fn is_bounded(&self) -> bool {
        let mut rays = vec![(1.0, 0.0), (0.0, 1.0)];
        for c in &self.constraints {
            let (a, b) = (f64::from(c.a), f64::from(c.b));
            for d in [(b, -a), (-b, a)] {
                if d.0 >= 0.0 && d.1 >= 0.0 {
                    rays.push(d);
                }
            }
        }
        !rays.iter().any(|&(d1, d2)| {
            self.constraints
                .iter()
                .all(|c| f64::from(c.a) * d1 + f64::from(c.b) * d2 <= 0.0)
        })
    }
}

fn intersect(p: &LinearConstraint, q: &LinearConstraint) -> Option<RatePair> {
    let (a1, b1, a2, b2) = (
        f64::from(p.a),
        f64::from(p.b),
        f64::from(q.a),
        f64::from(q.b),
    );
    let det = a1 * b2 - a2 * b1;
    if det == 0.0 {
        return None;
    }
    Some(RatePair {
        r1: (p.c * b2 - q.c * b1) / det,
        r2: (a1 * q.c - a2 * p.c) / det,
    })
}

fn lex_cmp(p: &RatePair, q: &RatePair) -> Ordering {
    p.r1.total_cmp(&q.r1).then(p.r2.total_cmp(&q.r2))
}

/// Maximizes `score`, resolving near-ties with `prefer` (greater wins).
fn best_vertex(
    vs: Vec<RatePair>,
    score: impl Fn(&RatePair) -> f64,
    prefer: impl Fn(&RatePair, &RatePair) -> Ordering,
) -> Option<RatePair> {
    let top = vs.iter().map(&score).fold(f64::NEG_INFINITY, f64::max);
    vs.into_iter()
        .filter(|p| score(p) >= top - TIE_EPS)
        .max_by(|p, q| prefer(p, q))
}
