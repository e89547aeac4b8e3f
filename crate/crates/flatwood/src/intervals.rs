//! Interval collections on the circle: good/bad classification of the
//! lattice intervals `[10πj/n, 10π(j+1)/n]`, validation of the six
//! suitable/well-separated properties, trapezoidal bump functions, symmetric
//! colorings and the piecewise-linear target `G_α` with closed-form Fourier
//! coefficients.
//!
//! All interval endpoints are stored as integer multiples of the lattice
//! step `10π/n`, so the two symmetry maps `θ ↦ π−θ` and `θ ↦ π+θ` are exact
//! integer permutations.

use crate::grid::CircleGrid;
use crate::trigcore::{PeriodicFunction, TrigPoly};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;

/// Lattice step `10π/n`.
pub fn lattice_step(n: u64) -> f64 {
    10.0 * PI / n as f64
}

/// Ramp width `5π/n` (half a lattice step).
pub fn ramp_width(n: u64) -> f64 {
    5.0 * PI / n as f64
}

/// A maximal run of consecutive bad base intervals: covers lattice indices
/// `[start, start+len]` in units of `10π/n`, i.e. the circle arc
/// `[2π·start/P, 2π·(start+len)/P]` with `P = n/5`. Runs may wrap (then
/// `start + len > P`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub start: i64,
    pub len: i64,
}

/// A set of lattice-aligned intervals, closed (when valid) under the maps
/// `θ ↦ π−θ` and `θ ↦ π+θ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CollectionRepr", into = "CollectionRepr")]
pub struct IntervalCollection {
    n: u64,
    runs: Vec<Run>,
}

#[derive(Serialize, Deserialize)]
struct CollectionRepr {
    n: u64,
    intervals: Vec<[i64; 2]>,
    #[serde(rename = "N")]
    quarter_count: usize,
}

impl From<IntervalCollection> for CollectionRepr {
    fn from(c: IntervalCollection) -> Self {
        CollectionRepr {
            n: c.n,
            intervals: c.runs.iter().map(|r| [r.start, r.start + r.len]).collect(),
            quarter_count: c.quarter_count(),
        }
    }
}

impl TryFrom<CollectionRepr> for IntervalCollection {
    type Error = String;

    fn try_from(r: CollectionRepr) -> std::result::Result<Self, String> {
        let runs = r
            .intervals
            .iter()
            .map(|&[lo, hi]| Run { start: lo, len: hi - lo })
            .collect();
        IntervalCollection::new(r.n, runs).map_err(|e| e.to_string())
    }
}

impl IntervalCollection {
    pub fn new(n: u64, mut runs: Vec<Run>) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(10) {
            return Err(Error::NotDivisibleByTen { n });
        }
        let p = (n / 5) as i64;
        for r in &mut runs {
            if r.len < 1 || r.len > p {
                return Err(Error::InvalidCollection(format!(
                    "run length {} outside [1, {}]",
                    r.len, p
                )));
            }
            r.start = r.start.rem_euclid(p);
        }
        runs.sort_by_key(|r| r.start);
        Ok(IntervalCollection { n, runs })
    }

    pub fn empty(n: u64) -> Result<Self> {
        IntervalCollection::new(n, vec![])
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of base intervals on the circle, `P = n/5`.
    pub fn period(&self) -> i64 {
        (self.n / 5) as i64
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Image of a run under `θ ↦ π−θ`.
    pub fn reflect(&self, r: Run) -> Run {
        let p = self.period();
        Run { start: (p / 2 - r.start - r.len).rem_euclid(p), len: r.len }
    }

    /// Image of a run under `θ ↦ π+θ`.
    pub fn translate(&self, r: Run) -> Run {
        let p = self.period();
        Run { start: (r.start + p / 2).rem_euclid(p), len: r.len }
    }

    /// Indices of the free representatives: runs lying strictly inside the
    /// open first quadrant `(0, π/2)`.
    pub fn free_indices(&self) -> Vec<usize> {
        let p = self.period();
        self.runs
            .iter()
            .enumerate()
            .filter(|(_, r)| r.start > 0 && 4 * (r.start + r.len) < p)
            .map(|(i, _)| i)
            .collect()
    }

    /// `N`: the free-representative count when the collection splits into
    /// orbits of four, otherwise `⌈|runs|/4⌉`.
    pub fn quarter_count(&self) -> usize {
        let free = self.free_indices().len();
        if 4 * free == self.runs.len() {
            free
        } else {
            self.runs.len().div_ceil(4)
        }
    }

    /// Arc endpoints of a run in radians.
    pub fn run_arc(&self, r: Run) -> (f64, f64) {
        let step = 2.0 * PI / self.period() as f64;
        (r.start as f64 * step, (r.start + r.len) as f64 * step)
    }

    /// Whether the circle point `t` lies in some run (closed intervals).
    pub fn covers(&self, t: f64) -> bool {
        let p = self.period() as f64;
        let k = t.rem_euclid(2.0 * PI) / (2.0 * PI) * p;
        self.runs.iter().any(|r| {
            let rel = (k - r.start as f64).rem_euclid(p);
            rel <= r.len as f64
        })
    }

    /// Removes the base intervals whose closure meets
    /// `(π/2)ℤ + [−5π/n, 5π/n]`, splitting runs as needed. Returns the
    /// trimmed collection and the removed base-interval indices.
    ///
    /// The classified bad set can touch the quarter points: the cosine
    /// polynomial vanishes at `t = π/2` exactly (the underlying `P_m(−1) = 0`
    /// for odd `m`), so the interval containing `π/2` is never good. The
    /// axis-avoidance property is restored by excision; the excised
    /// intervals are reported, not hidden.
    pub fn trim_axis_zones(&self) -> (IntervalCollection, Vec<i64>) {
        let p = self.period();
        // base interval j (covering [j, j+1] lattice units) is excised iff
        // [4j, 4j+4] meets [qp-2, qp+2] for some quarter point q
        let forbidden = |j: i64| -> bool {
            (0..4).any(|q| {
                let centre = q * p;
                let lo = 4 * j;
                lo <= centre + 2 && lo + 4 >= centre - 2
            })
        };
        let mut removed = Vec::new();
        let mut new_runs = Vec::new();
        for r in &self.runs {
            let mut cur: Option<Run> = None;
            for off in 0..r.len {
                let j = (r.start + off).rem_euclid(p);
                if forbidden(j) {
                    removed.push(j);
                    if let Some(run) = cur.take() {
                        new_runs.push(run);
                    }
                } else {
                    match &mut cur {
                        Some(run) => run.len += 1,
                        None => cur = Some(Run { start: r.start + off, len: 1 }),
                    }
                }
            }
            if let Some(run) = cur.take() {
                new_runs.push(run);
            }
        }
        removed.sort_unstable();
        removed.dedup();
        (IntervalCollection::new(self.n, new_runs).unwrap(), removed)
    }
}

/// Result of good/bad classification of the `P = n/5` base intervals.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub n: u64,
    pub threshold: f64,
    /// Subtracted from every subgrid minimum: `‖U′‖ · h/2` with `‖U′‖`
    /// bounded through Bernstein, making "good" a sound certificate.
    pub margin: f64,
    pub good: Vec<usize>,
    pub bad: IntervalCollection,
}

/// Partitions the base intervals by whether the certified minimum of `|U|`
/// over the interval clears `threshold`, and merges the bad intervals into
/// maximal (possibly wrapping) runs.
pub fn classify(u: &TrigPoly, n: u64, threshold: f64) -> Result<Classification> {
    assert!(threshold > 0.0);
    if n == 0 || !n.is_multiple_of(10) {
        return Err(Error::NotDivisibleByTen { n });
    }
    let p = (n / 5) as usize;
    let grid_n = 64 * p;
    if u.degree() + 1 > grid_n {
        return Err(Error::TooLarge {
            what: "polynomial degree for classification grid",
            size: u.degree() as u64,
            limit: grid_n as u64,
        });
    }
    let grid = CircleGrid::new(grid_n, false);
    let values = grid.eval_trig(u.cos_coeffs(), u.sin_coeffs());
    let margin = if u.degree() == 0 {
        0.0
    } else {
        let cert = u.certified_sup_norm()?;
        let h = 2.0 * PI / grid_n as f64;
        u.degree() as f64 * cert.upper_bound * h / 2.0
    };

    let mut bad_flags = vec![false; p];
    let mut good = Vec::new();
    for (j, flag) in bad_flags.iter_mut().enumerate() {
        let mut min = f64::INFINITY;
        for s in 64 * j..=64 * j + 64 {
            min = min.min(values[s % grid_n].abs());
        }
        if min - margin >= threshold {
            good.push(j);
        } else {
            *flag = true;
        }
    }

    let mut runs = Vec::new();
    match bad_flags.iter().position(|&b| !b) {
        None => runs.push(Run { start: 0, len: p as i64 }),
        Some(g) => {
            // scan one full period starting just after a good interval so no
            // run is split across the scan boundary; wrapped runs keep their
            // true start with len extending past P
            let mut cur: Option<Run> = None;
            for off in 1..=p {
                let j = (g + off) % p;
                if bad_flags[j] {
                    match &mut cur {
                        Some(r) => r.len += 1,
                        None => cur = Some(Run { start: j as i64, len: 1 }),
                    }
                } else if let Some(r) = cur.take() {
                    runs.push(r);
                }
            }
            debug_assert!(cur.is_none());
        }
    }

    Ok(Classification {
        n,
        threshold,
        margin,
        good,
        bad: IntervalCollection::new(n, runs)?,
    })
}

/// Per-property validation outcome, with witnesses on failure.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    /// (a) endpoints on the `10π/n` lattice (exact by construction)
    pub lattice_endpoints: bool,
    /// (b) closed under `θ ↦ π−θ` and `θ ↦ π+θ`
    pub symmetric: bool,
    /// (c) `|runs| = 4N` with `N ≤ 2γn` (the zero-counting budget for a
    /// threshold classification of a degree-`4γn` trig polynomial)
    pub count: bool,
    /// (d) every run length `≤ 3990π/n` (399 lattice units)
    pub length: bool,
    /// (e) pairwise gaps `≥ 10π/n`
    pub gaps: bool,
    /// (f) disjoint from `(π/2)ℤ + [−5π/n, 5π/n]`
    pub avoids_axes: bool,
    /// set when `4N ≠ |runs|` and the count check fell back to padding
    pub padded: bool,
    pub witnesses: Vec<String>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.lattice_endpoints
            && self.symmetric
            && self.count
            && self.length
            && self.gaps
            && self.avoids_axes
    }
}

/// Checks the six suitable/well-separated properties against the supplied
/// density `γ`.
pub fn validate(c: &IntervalCollection, gamma: f64) -> PropertyReport {
    let p = c.period();
    let mut witnesses = Vec::new();

    let run_set: HashMap<(i64, i64), usize> =
        c.runs.iter().enumerate().map(|(i, r)| ((r.start, r.len), i)).collect();
    let mut symmetric = true;
    for (i, &r) in c.runs.iter().enumerate() {
        for (name, img) in [("pi-theta", c.reflect(r)), ("pi+theta", c.translate(r))] {
            if !run_set.contains_key(&(img.start, img.len)) {
                symmetric = false;
                witnesses.push(format!("(b) run {i} has no {name} image {img:?}"));
            }
        }
    }

    let free = c.free_indices().len();
    let padded = 4 * free != c.runs.len();
    let big_n = c.quarter_count();
    // zero counting: each maximal bad run of U (degree 4γn) crosses the
    // threshold at both ends, so there are at most 4γn runs in total and
    // 2γn per symmetry class of four
    let count = big_n as f64 <= 2.0 * gamma * c.n as f64;
    if !count {
        witnesses.push(format!("(c) N = {big_n} exceeds 2*gamma*n = {}", 2.0 * gamma * c.n as f64));
    }
    if padded && !c.runs.is_empty() {
        witnesses.push(format!(
            "(c) |runs| = {} is not 4N for free count {free}; padded count used",
            c.runs.len()
        ));
    }

    let mut length = true;
    for (i, r) in c.runs.iter().enumerate() {
        if r.len > 399 {
            length = false;
            witnesses.push(format!("(d) run {i} has length {} > 399 lattice units", r.len));
        }
    }

    let mut gaps = true;
    if c.runs.len() >= 2 {
        for i in 0..c.runs.len() {
            let cur = c.runs[i];
            let next = c.runs[(i + 1) % c.runs.len()];
            let gap = (next.start - (cur.start + cur.len)).rem_euclid(p);
            if gap < 1 {
                gaps = false;
                witnesses.push(format!("(e) runs {i} and {} touch or overlap", (i + 1) % c.runs.len()));
            }
        }
    } else if c.runs.len() == 1 && c.runs[0].len >= p {
        gaps = false;
        witnesses.push("(e) single run covers the whole circle".into());
    }

    let mut avoids_axes = true;
    for (i, r) in c.runs.iter().enumerate() {
        // run covers [start, start+len] lattice units; forbidden zones are
        // [qP/4 - 1/2, qP/4 + 1/2]; scale by 4 for exact integer tests
        for q in 0..=4 {
            let centre = q * p;
            let lo = 4 * r.start;
            let hi = 4 * (r.start + r.len);
            if lo <= centre + 2 && hi >= centre - 2 {
                avoids_axes = false;
                witnesses.push(format!("(f) run {i} meets the zone around {}·π/2", q));
            }
        }
    }

    PropertyReport {
        lattice_endpoints: true,
        symmetric,
        count,
        length,
        gaps,
        avoids_axes,
        padded,
        witnesses,
    }
}

/// Trapezoidal bump `Φ_{[a,b]}`: 1 on `[a, b]`, 0 outside
/// `[a − 5π/n, b + 5π/n]`, linear ramps of slope `±n/(5π)` between.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BumpFunction {
    pub a: f64,
    pub b: f64,
    pub n: u64,
}

impl BumpFunction {
    pub fn value(&self, t: f64) -> f64 {
        let w = ramp_width(self.n);
        // reduce t into the period starting at the left support edge
        let s = self.a - w + (t - self.a + w).rem_euclid(2.0 * PI);
        if s < self.a {
            (s - (self.a - w)) / w
        } else if s <= self.b {
            1.0
        } else if s < self.b + w {
            ((self.b + w) - s) / w
        } else {
            0.0
        }
    }
}

/// `∫ Φ_{[a,b]}(t) cos(λt) dt` and `∫ Φ_{[a,b]}(t) sin(λt) dt` over the
/// support, in closed form.
pub fn bump_trig_integrals(a: f64, b: f64, w: f64, lambda: u64) -> (f64, f64) {
    if lambda == 0 {
        return (b - a + w, 0.0);
    }
    let k = lambda as f64;
    let s1 = |t: f64| -(k * t).cos() / k;
    let s2 = |t: f64| (k * t).sin() / (k * k) - t * (k * t).cos() / k;
    let c1 = |t: f64| (k * t).sin() / k;
    let c2 = |t: f64| (k * t).cos() / (k * k) + t * (k * t).sin() / k;

    let is = (s2(a) - s2(a - w) - (a - w) * (s1(a) - s1(a - w))) / w
        + (s1(b) - s1(a))
        + ((b + w) * (s1(b + w) - s1(b)) - (s2(b + w) - s2(b))) / w;
    let ic = (c2(a) - c2(a - w) - (a - w) * (c1(a) - c1(a - w))) / w
        + (c1(b) - c1(a))
        + ((b + w) * (c1(b + w) - c1(b)) - (c2(b + w) - c2(b))) / w;
    (ic, is)
}

/// A ±1 assignment to the runs of a collection obeying `α(I) = α(π−I)` and
/// `α(I) = −α(π+I)`, determined by free choices on the first-quadrant runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetricColoring {
    signs: Vec<i8>,
}

impl SymmetricColoring {
    /// Extends `free` signs (one per first-quadrant run, in index order) to
    /// the whole collection by the symmetry rules.
    pub fn from_free(c: &IntervalCollection, free: &[i8]) -> Result<Self> {
        let free_idx = c.free_indices();
        if free.len() != free_idx.len() {
            return Err(Error::DimensionMismatch { expected: free_idx.len(), got: free.len() });
        }
        assert!(free.iter().all(|&s| s == 1 || s == -1));
        let run_set: HashMap<(i64, i64), usize> =
            c.runs().iter().enumerate().map(|(i, r)| ((r.start, r.len), i)).collect();
        let mut signs = vec![0i8; c.runs().len()];
        for (&i, &s) in free_idx.iter().zip(free) {
            let r = c.runs()[i];
            // orbit {I, π−I, π+I, 2π−I} with signs {s, s, −s, −s}
            for (img, sign) in [
                (r, s),
                (c.reflect(r), s),
                (c.translate(r), -s),
                (c.translate(c.reflect(r)), -s),
            ] {
                let &idx = run_set.get(&(img.start, img.len)).ok_or_else(|| {
                    Error::InvalidCollection(format!("missing symmetry image {img:?}"))
                })?;
                if signs[idx] != 0 && signs[idx] != sign {
                    return Err(Error::InvalidCollection(format!(
                        "conflicting signs for run {idx}"
                    )));
                }
                signs[idx] = sign;
            }
        }
        if signs.contains(&0) {
            return Err(Error::InvalidCollection(
                "free choices do not reach every run".into(),
            ));
        }
        Ok(SymmetricColoring { signs })
    }

    pub fn empty() -> Self {
        SymmetricColoring { signs: vec![] }
    }

    pub fn sign(&self, run_index: usize) -> i8 {
        self.signs[run_index]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }
}

/// The target `G_α = K√n Σ_j α(I_j) Φ_{I_j}`.
#[derive(Clone, Debug, Serialize)]
pub struct TargetFunction {
    pub collection: IntervalCollection,
    pub coloring: SymmetricColoring,
    /// the amplitude constant `K`
    pub amplitude: f64,
    pub n: u64,
}

impl TargetFunction {
    pub fn new(
        collection: IntervalCollection,
        coloring: SymmetricColoring,
        amplitude: f64,
        n: u64,
    ) -> Result<Self> {
        if coloring.signs.len() != collection.runs().len() {
            return Err(Error::DimensionMismatch {
                expected: collection.runs().len(),
                got: coloring.signs.len(),
            });
        }
        Ok(TargetFunction { collection, coloring, amplitude, n })
    }

    /// Peak value `K√n`.
    pub fn peak(&self) -> f64 {
        self.amplitude * (self.n as f64).sqrt()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let peak = self.peak();
        let mut acc = 0.0;
        for (i, &r) in self.collection.runs().iter().enumerate() {
            let (a, b) = self.collection.run_arc(r);
            let bump = BumpFunction { a, b, n: self.n };
            acc += self.coloring.sign(i) as f64 * peak * bump.value(t);
        }
        acc
    }

    /// Modulus of continuity `ω(G_α, δ) ≤ K√n · min(1, δ·n/(5π))`.
    pub fn modulus_of_continuity(&self, delta: f64) -> f64 {
        self.peak() * (delta * self.n as f64 / (5.0 * PI)).min(1.0)
    }

    /// Exact Fourier coefficient `(a_k, b_k)` from the closed-form bump
    /// integrals.
    pub fn fourier(&self, k: usize) -> (f64, f64) {
        let peak = self.peak();
        let w = ramp_width(self.n);
        let mut sa = 0.0;
        let mut sb = 0.0;
        for (i, &r) in self.collection.runs().iter().enumerate() {
            let (a, b) = self.collection.run_arc(r);
            let (ic, is) = bump_trig_integrals(a, b, w, k as u64);
            sa += self.coloring.sign(i) as f64 * ic;
            sb += self.coloring.sign(i) as f64 * is;
        }
        let norm = if k == 0 { 2.0 * PI } else { PI };
        (peak * sa / norm, if k == 0 { 0.0 } else { peak * sb / norm })
    }
}

impl PeriodicFunction for TargetFunction {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    fn fourier_coefficient(&self, k: usize) -> Option<(f64, f64)> {
        Some(self.fourier(k))
    }
}

/// The test vector `y_k = (y_{k,1}, …, y_{k,N})` over the free runs:
/// `y_{k,j} = (4K√n/π) ∫ Φ_{I_j}(t) sin((2k−1)t) dt`.
pub fn bump_sine_vector(c: &IntervalCollection, amplitude: f64, k: usize) -> Vec<f64> {
    assert!(k >= 1);
    let peak = amplitude * (c.n() as f64).sqrt();
    let w = ramp_width(c.n());
    let lambda = (2 * k - 1) as u64;
    c.free_indices()
        .iter()
        .map(|&i| {
            let (a, b) = c.run_arc(c.runs()[i]);
            let (_, is) = bump_trig_integrals(a, b, w, lambda);
            4.0 * peak * is / PI
        })
        .collect()
}

/// `b_{2k−1}(G_α) = Σ_j α(I_j) y_{k,j}` over the free runs.
pub fn odd_sine_coefficient(g: &TargetFunction, k: usize) -> f64 {
    let y = bump_sine_vector(&g.collection, g.amplitude, k);
    g.collection
        .free_indices()
        .iter()
        .zip(&y)
        .map(|(&i, yv)| g.coloring.sign(i) as f64 * yv)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigcore;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    // A small symmetric collection at n = 200 (P = 40, quadrant = 10 units):
    // free runs {2..5} and {7..8}, orbit images filled in by hand.
    fn sample_collection() -> IntervalCollection {
        let free = [Run { start: 2, len: 3 }, Run { start: 7, len: 1 }];
        let mut runs = Vec::new();
        let c = IntervalCollection::empty(200).unwrap();
        for r in free {
            runs.push(r);
            runs.push(c.reflect(r));
            runs.push(c.translate(r));
            runs.push(c.translate(c.reflect(r)));
        }
        IntervalCollection::new(200, runs).unwrap()
    }

    #[test]
    fn symmetry_maps_are_involutions() {
        let c = sample_collection();
        assert_eq!(c.runs().len(), 8);
        assert_eq!(c.free_indices().len(), 2);
        for &r in c.runs() {
            assert_eq!(c.reflect(c.reflect(r)), r);
            assert_eq!(c.translate(c.translate(r)), r);
        }
        // the set is closed under both maps
        let report = validate(&c, 0.05);
        assert!(report.all_pass(), "{:?}", report.witnesses);
        assert!(!report.padded);
        // count budget: N = 2 violates 2γn = 1.6
        assert!(!validate(&c, 0.004).count);
        assert_eq!(c.quarter_count(), 2);
    }

    #[test]
    fn validation_catches_constructed_violations() {
        // run touching π/2 (lattice unit 10 at P = 40)
        let mut runs = Vec::new();
        let c0 = IntervalCollection::empty(200).unwrap();
        for r in [Run { start: 9, len: 2 }] {
            runs.push(r);
            runs.push(c0.reflect(r));
            runs.push(c0.translate(r));
            runs.push(c0.translate(c0.reflect(r)));
        }
        let c = IntervalCollection::new(200, runs).unwrap();
        let report = validate(&c, 1.0);
        assert!(!report.avoids_axes);
        assert!(report.witnesses.iter().any(|w| w.starts_with("(f)")));

        // asymmetric collection
        let c = IntervalCollection::new(200, vec![Run { start: 2, len: 3 }]).unwrap();
        assert!(!validate(&c, 1.0).symmetric);

        // overlong run
        let c = IntervalCollection::new(10000, vec![Run { start: 5, len: 400 }]).unwrap();
        assert!(!validate(&c, 1.0).length);

        // touching runs
        let c = IntervalCollection::new(200, vec![
            Run { start: 2, len: 2 },
            Run { start: 4, len: 2 },
        ])
        .unwrap();
        assert!(!validate(&c, 1.0).gaps);

        // empty passes
        assert!(validate(&IntervalCollection::empty(200).unwrap(), 0.0).all_pass());
    }

    #[test]
    fn classify_constant_all_good() {
        let u = TrigPoly::constant(1.0);
        let cl = classify(&u, 40, 0.5).unwrap();
        assert_eq!(cl.good.len(), 8);
        assert!(cl.bad.is_empty());
    }

    #[test]
    fn classify_sine_matches_dense_oracle() {
        let u = TrigPoly::harmonic(1, 0.0, 1.0);
        let n = 40;
        let cl = classify(&u, n, 0.5).unwrap();
        // dense-grid oracle for the sublevel set
        let p = 8;
        let mut oracle_bad = Vec::new();
        for j in 0..p {
            let mut min = f64::INFINITY;
            for s in 0..=1000 {
                let t = 2.0 * PI * (j as f64 + s as f64 / 1000.0) / p as f64;
                min = min.min(t.sin().abs());
            }
            if min < 0.5 {
                oracle_bad.push(j);
            }
        }
        assert_eq!(oracle_bad, vec![0, 3, 4, 7]);
        let mut classified_bad: Vec<usize> = (0..p).filter(|j| !cl.good.contains(j)).collect();
        classified_bad.sort_unstable();
        assert_eq!(classified_bad, oracle_bad);
        // merged with wraparound: {3,4} and {7,0}
        assert_eq!(cl.bad.runs().len(), 2);
        assert!(cl.bad.runs().contains(&Run { start: 3, len: 2 }));
        assert!(cl.bad.runs().contains(&Run { start: 7, len: 2 }));
        // run count bound |runs| <= 2 deg(U)
        assert!(cl.bad.runs().len() <= 2 * u.degree());
    }

    #[test]
    fn classify_is_monotone_in_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cos: Vec<f64> = (0..=6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sin: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = TrigPoly::new(cos, sin).unwrap();
        let mut prev = 0usize;
        for &th in &[0.05, 0.2, 0.5, 1.0, 2.0] {
            let cl = classify(&u, 100, th).unwrap();
            let bad_count = 20 - cl.good.len();
            assert!(bad_count >= prev, "threshold {th}");
            prev = bad_count;
        }
    }

    #[test]
    fn bump_values() {
        let n = 200;
        let b = BumpFunction { a: 1.0, b: 1.5, n };
        let w = ramp_width(n);
        assert_eq!(b.value(1.25), 1.0);
        assert_eq!(b.value(1.0 - w), 0.0);
        assert!((b.value(1.0 - w / 2.0) - 0.5).abs() < 1e-12);
        assert_eq!(b.value(3.0), 0.0);
        // periodicity
        assert_eq!(b.value(1.25 + 2.0 * PI), 1.0);
        // slope n/(5π) on the ramp
        let h = 1e-7;
        let slope = (b.value(1.0 - w / 2.0 + h) - b.value(1.0 - w / 2.0)) / h;
        assert!((slope - n as f64 / (5.0 * PI)).abs() < 1e-3);
    }

    #[test]
    fn bump_integrals_match_simpson() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let n: u64 = 10 * rng.gen_range(2..40);
            let w = ramp_width(n);
            let a = rng.gen_range(0.0..3.0);
            let b = a + rng.gen_range(0.1..1.0);
            let k: u64 = rng.gen_range(1..200);
            let (ic, is) = bump_trig_integrals(a, b, w, k);
            let bump = BumpFunction { a, b, n };
            let steps = 200_000;
            let lo = a - w;
            let hi = b + w;
            let h = (hi - lo) / steps as f64;
            let mut qc = 0.0;
            let mut qs = 0.0;
            for i in 0..steps {
                // Simpson on each panel
                let t0 = lo + i as f64 * h;
                let tm = t0 + h / 2.0;
                let t1 = t0 + h;
                let f = |t: f64| bump.value(t);
                qc += h / 6.0
                    * (f(t0) * (k as f64 * t0).cos()
                        + 4.0 * f(tm) * (k as f64 * tm).cos()
                        + f(t1) * (k as f64 * t1).cos());
                qs += h / 6.0
                    * (f(t0) * (k as f64 * t0).sin()
                        + 4.0 * f(tm) * (k as f64 * tm).sin()
                        + f(t1) * (k as f64 * t1).sin());
            }
            let scale = (ic.abs() + is.abs()).max(1e-3);
            assert!((ic - qc).abs() < 1e-10 * scale.max(1.0), "k={k}");
            assert!((is - qs).abs() < 1e-10 * scale.max(1.0), "k={k}");
        }
    }

    #[test]
    fn symmetric_coloring_kills_cosines_and_even_sines() {
        let c = sample_collection();
        for free in [[1i8, 1], [1, -1], [-1, 1]] {
            let alpha = SymmetricColoring::from_free(&c, &free).unwrap();
            let g = TargetFunction::new(c.clone(), alpha, 1.0, 200).unwrap();
            let peak = g.peak();
            for k in 0..=64 {
                let (a, b) = g.fourier(k);
                assert!(a.abs() <= 1e-10 * peak, "a_{k} = {a}");
                if k % 2 == 0 {
                    assert!(b.abs() <= 1e-10 * peak, "b_{k} = {b}");
                }
            }
            // quadrature oracle agrees with the closed form
            let coeffs = trigcore::fourier_by_quadrature(&g, 32, 1 << 15, 1e-4 * peak).unwrap();
            for k in 0..=32 {
                let (a, b) = g.fourier(k);
                assert!((coeffs[k].0 - a).abs() < 1e-4 * peak);
                assert!((coeffs[k].1 - b).abs() < 1e-4 * peak);
            }
        }
    }

    #[test]
    fn odd_sine_coefficients_via_free_orbit_sum() {
        let c = sample_collection();
        let alpha = SymmetricColoring::from_free(&c, &[1, -1]).unwrap();
        let g = TargetFunction::new(c.clone(), alpha, 2.0, 200).unwrap();
        for k in 1..=40 {
            let b = odd_sine_coefficient(&g, k);
            let (_, b_full) = g.fourier(2 * k - 1);
            assert!((b - b_full).abs() < 1e-9 * g.peak().max(1.0), "k={k}");
        }
    }

    #[test]
    fn bump_sine_vector_bound() {
        let c = sample_collection();
        let amplitude = 512.0;
        let n = c.n() as f64;
        for k in 1..=64 {
            let y = bump_sine_vector(&c, amplitude, k);
            for (slot, &i) in c.free_indices().iter().enumerate() {
                let r = c.runs()[i];
                let width = r.len as f64 * lattice_step(c.n());
                let bound = 4.0 * amplitude * n.sqrt() / PI * (width + lattice_step(c.n()));
                assert!(y[slot].abs() <= bound + 1e-9);
                assert!(y[slot].abs() <= 16000.0 * amplitude / n.sqrt() * (width * c.n() as f64).max(1.0));
            }
        }
    }

    #[test]
    fn target_evaluation_and_peak() {
        let c = sample_collection();
        let alpha = SymmetricColoring::from_free(&c, &[1, 1]).unwrap();
        let g = TargetFunction::new(c.clone(), alpha, 3.0, 200).unwrap();
        let peak = g.peak();
        // |G| <= K√n everywhere, equality inside intervals
        for s in 0..2000 {
            let t = 2.0 * PI * s as f64 / 2000.0;
            assert!(g.eval(t).abs() <= peak + 1e-12);
        }
        let (a, b) = c.run_arc(c.runs()[c.free_indices()[0]]);
        assert!((g.eval((a + b) / 2.0).abs() - peak).abs() < 1e-12);
        // zero at distance >= 5π/n from all intervals
        assert_eq!(g.eval(0.0), 0.0);
        // modulus of continuity cap
        assert_eq!(g.modulus_of_continuity(1.0), peak);
    }

    #[test]
    fn coloring_symmetry_rules() {
        let c = sample_collection();
        let alpha = SymmetricColoring::from_free(&c, &[1, -1]).unwrap();
        for (i, &r) in c.runs().iter().enumerate() {
            let refl = c.reflect(r);
            let trans = c.translate(r);
            let find = |run: Run| c.runs().iter().position(|&x| x == run).unwrap();
            assert_eq!(alpha.sign(i), alpha.sign(find(refl)));
            assert_eq!(alpha.sign(i), -alpha.sign(find(trans)));
        }
        // wrong free length rejected
        assert!(SymmetricColoring::from_free(&c, &[1]).is_err());
        // asymmetric collection rejected
        let bad = IntervalCollection::new(200, vec![Run { start: 2, len: 3 }]).unwrap();
        assert!(SymmetricColoring::from_free(&bad, &[1]).is_err());
    }

    #[test]
    fn trim_axis_zones_restores_property_f() {
        // symmetric bad set with runs across all four quarter points
        let c0 = IntervalCollection::empty(200).unwrap();
        let mut runs = Vec::new();
        for r in [Run { start: 9, len: 3 }] {
            runs.push(r);
            runs.push(c0.reflect(r));
            runs.push(c0.translate(r));
            runs.push(c0.translate(c0.reflect(r)));
        }
        let c = IntervalCollection::new(200, runs).unwrap();
        assert!(!validate(&c, 1.0).avoids_axes);
        let (trimmed, removed) = c.trim_axis_zones();
        assert!(validate(&trimmed, 1.0).avoids_axes, "{trimmed:?}");
        assert!(validate(&trimmed, 1.0).symmetric);
        assert!(!removed.is_empty());
        // removed indices really were near quarter points
        for j in &removed {
            let dist = (0..=4).map(|q| (4 * j - 40 * q).abs().min((4 * (j + 1) - 40 * q).abs())).min().unwrap();
            assert!(dist <= 2 + 4, "j={j}");
        }
    }

    #[test]
    fn collection_json_round_trip() {
        let c = sample_collection();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"N\":2"));
        let back: IntervalCollection = serde_json::from_str(&json).unwrap();
        assert_eq!(c, back);
    }
}
