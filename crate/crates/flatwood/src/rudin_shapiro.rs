//! Rudin–Shapiro pairs, prefixes, the nine-block polynomial `T` and the
//! cosine polynomial `c(t) = T(2t)`, with numeric audits of the
//! parallelogram identity and the peak lemmas.
//!
//! Pointwise evaluation never touches the coefficient vectors: the defining
//! recursion gives `(P_m(z), Q_m(z))` in `O(m)` operations by repeated
//! squaring of `z`, and a prefix `P_{<n}` splits along the binary digits of
//! `n` into full `P_j`/`Q_j` blocks, giving `O(log^2 n)` per point. Both
//! routes are cross-checked against coefficient Horner evaluation in tests.

use crate::trigcore::{self, SupNormCert, TrigPoly};
use crate::{Error, Result};
use rustfft::num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Memory guard for coefficient-vector construction.
pub const MAX_GENERATION: u32 = 24;

/// δ = sin²(π/8) from the adjacent-peak lemma.
pub fn delta() -> f64 {
    (PI / 8.0).sin().powi(2)
}

/// The Rudin–Shapiro pair `P_m`, `Q_m`: coefficient vectors of length
/// `M = 2^m` with entries in {-1, 1}.
#[derive(Clone, Debug, Serialize)]
pub struct RsPair {
    pub m: u32,
    pub p_coeffs: Vec<i32>,
    pub q_coeffs: Vec<i32>,
}

impl RsPair {
    pub fn big_m(&self) -> usize {
        1 << self.m
    }
}

/// The degree-(n-1) prefix polynomial `P_{<n}`.
#[derive(Clone, Debug, Serialize)]
pub struct RsPrefix {
    pub n: usize,
    pub coeffs: Vec<i32>,
}

/// `P_m`, `Q_m` by the recursion `P_{m+1} = P_m + z^{2^m} Q_m`,
/// `Q_{m+1} = P_m - z^{2^m} Q_m`.
pub fn rs_pair(m: u32) -> Result<RsPair> {
    if m > MAX_GENERATION {
        return Err(Error::GenerationOutOfRange { m, max: MAX_GENERATION });
    }
    let mut p = vec![1i32];
    let mut q = vec![1i32];
    for j in 0..m {
        let half = 1usize << j;
        let mut np = Vec::with_capacity(2 * half);
        let mut nq = Vec::with_capacity(2 * half);
        np.extend_from_slice(&p);
        np.extend_from_slice(&q);
        nq.extend_from_slice(&p);
        nq.extend(q.iter().map(|c| -c));
        p = np;
        q = nq;
    }
    Ok(RsPair { m, p_coeffs: p, q_coeffs: q })
}

/// First `n` coefficients of every sufficiently long `P_m`.
pub fn rs_prefix(n: usize) -> Result<RsPrefix> {
    assert!(n >= 1, "prefix length must be positive");
    let m = (usize::BITS - (n - 1).leading_zeros()).max(1);
    if n == 1 {
        return Ok(RsPrefix { n, coeffs: vec![1] });
    }
    let pair = rs_pair(m)?;
    Ok(RsPrefix { n, coeffs: pair.p_coeffs[..n].to_vec() })
}

/// `(P_m(z), Q_m(z))` at `z = e^{it}` in `O(m)` operations.
pub fn pair_eval(m: u32, t: f64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(1.0, 0.0);
    let mut zp = Complex64::from_polar(1.0, t);
    for _ in 0..m {
        let shifted = zp * q;
        let np = p + shifted;
        let nq = p - shifted;
        p = np;
        q = nq;
        zp = zp * zp;
    }
    (p, q)
}

/// `P_{<n}(e^{it})` in `O(log^2 n)` by descending the binary structure of
/// the prefix.
pub fn prefix_eval(n: usize, t: f64) -> Complex64 {
    debug_assert!(n >= 1);
    let levels = (usize::BITS - (n - 1).leading_zeros()).max(1) as usize;
    // Tables P_j(z), Q_j(z), z^{2^j} for j = 0..=levels.
    let mut pv = Vec::with_capacity(levels + 1);
    let mut qv = Vec::with_capacity(levels + 1);
    let mut zpow = Vec::with_capacity(levels + 1);
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(1.0, 0.0);
    let mut zp = Complex64::from_polar(1.0, t);
    pv.push(p);
    qv.push(q);
    zpow.push(zp);
    for _ in 0..levels {
        let shifted = zp * q;
        let np = p + shifted;
        let nq = p - shifted;
        p = np;
        q = nq;
        zp = zp * zp;
        pv.push(p);
        qv.push(q);
        zpow.push(zp);
    }

    let mut acc = Complex64::new(0.0, 0.0);
    let mut shift = Complex64::new(1.0, 0.0);
    let mut sign = 1.0;
    let mut in_q = false;
    let mut len = n;
    let mut level = levels;
    loop {
        if len == 1usize << level {
            let v = if in_q { qv[level] } else { pv[level] };
            acc += sign * shift * v;
            break;
        }
        let half = 1usize << (level - 1);
        if len <= half {
            // first half of both P_level and Q_level is P_{level-1}
            in_q = false;
            level -= 1;
            continue;
        }
        // emit the full first half, recurse into the signed second half
        acc += sign * shift * pv[level - 1];
        if in_q {
            sign = -sign;
        }
        shift *= zpow[level - 1];
        in_q = true;
        len -= half;
        level -= 1;
    }
    acc
}

/// `P_m(1)` as an exact integer: `2^{(m+1)/2}` for odd `m`, `2^{m/2}` for
/// even `m`.
pub fn p_at_one(pair: &RsPair) -> i64 {
    pair.p_coeffs.iter().map(|&c| c as i64).sum()
}

/// Certified sup-norm of `|P_{<n}(e^{it})|` via the Lemma 3.7 grid applied
/// to the real trigonometric polynomial `|P_{<n}|^2` of degree `n-1`.
pub fn prefix_sup_cert(n: usize) -> SupNormCert {
    let nu = (n - 1).max(1);
    let grid_points = trigcore::CERT_POINTS_PER_DEGREE * nu;
    let mut grid_max = 0.0_f64;
    for j in 0..grid_points {
        let t = (2 * j + 1) as f64 * PI / grid_points as f64;
        grid_max = grid_max.max(prefix_eval(n, t).norm());
    }
    // sup |P|^2 <= grid_max(|P|^2)/cos(π/64), so sup |P| gets the square root.
    SupNormCert {
        grid_size: grid_points,
        grid_max,
        lower_bound: grid_max,
        upper_bound: grid_max * trigcore::grid_safety_factor().sqrt(),
    }
}

/// `T(t) = Re((1 + e^{iMt} + ... + e^{8iMt}) P_m(e^{it}))` in `O(m)`.
pub fn t_eval(m: u32, t: f64) -> f64 {
    let (p, _) = pair_eval(m, t);
    let zm = Complex64::from_polar(1.0, (1u64 << m) as f64 * t);
    let mut geom = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..8 {
        geom *= zm;
        acc += geom;
    }
    (acc * p).re
}

/// Coefficient form of `T`: the `P_m` coefficients tiled nine times, a pure
/// cosine polynomial of degree `9M - 1`.
pub fn build_t(m: u32) -> Result<TrigPoly> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenGeneration { m });
    }
    let pair = rs_pair(m)?;
    let mut cos = Vec::with_capacity(9 * pair.big_m());
    for _ in 0..9 {
        cos.extend(pair.p_coeffs.iter().map(|&c| c as f64));
    }
    Ok(TrigPoly::from_cos_coeffs(cos))
}

/// `|T(0)| = 9 * 2^{(m+1)/2}` as an exact integer (odd `m`).
pub fn t_at_zero(m: u32) -> i64 {
    debug_assert!(m % 2 == 1);
    9 * (1i64 << m.div_ceil(2))
}

/// Certified sup-norm of `T` via pointwise recursion evaluation.
pub fn t_sup_cert(m: u32) -> SupNormCert {
    let nu = 9 * (1usize << m) - 1;
    trigcore::certify_pointwise(nu, |t| t_eval(m, t))
}

/// The cosine polynomial `c(t) = T(2t) = Σ_k d_k cos(2kt)` with ±1
/// coefficients `d_k`, `k = 0..μ-1`, tiled from the Rudin–Shapiro pair.
#[derive(Clone, Debug, Serialize)]
pub struct FlatCosine {
    pub n: u64,
    pub m: u32,
    pub big_m: usize,
    pub mu: usize,
    pub gamma: f64,
    pub coeffs: Vec<i32>,
}

impl FlatCosine {
    pub fn eval(&self, t: f64) -> f64 {
        t_eval(self.m, 2.0 * t)
    }

    /// Degree `2(μ-1)` coefficient form with support on even frequencies.
    pub fn as_trig_poly(&self) -> TrigPoly {
        let mut cos = vec![0.0; 2 * (self.mu - 1) + 1];
        for (k, &d) in self.coeffs.iter().enumerate() {
            cos[2 * k] = d as f64;
        }
        TrigPoly::from_cos_coeffs(cos)
    }

    pub fn sup_cert(&self) -> SupNormCert {
        trigcore::certify_pointwise(2 * (self.mu - 1), |t| self.eval(t))
    }
}

/// Selects the smallest odd `m` with `γ = 9·2^m/(2n)` inside `window` and
/// tiles the cosine coefficients.
pub fn build_cosine(n: u64, window: (f64, f64)) -> Result<FlatCosine> {
    if n == 0 || !n.is_multiple_of(10) {
        return Err(Error::NotDivisibleByTen { n });
    }
    let (lo, hi) = window;
    let mut chosen = None;
    for m in (1u32..=39).step_by(2) {
        let gamma = 9.0 * 2f64.powi(m as i32) / (2.0 * n as f64);
        if gamma >= lo && gamma < hi {
            chosen = Some((m, gamma));
            break;
        }
        if gamma >= hi {
            break;
        }
    }
    let (m, gamma) = chosen.ok_or(Error::WindowInfeasible {
        lo,
        hi,
        n,
        // γ(m=1) = 9/n must fall below hi before any odd m can fit
        min_n: 9.0 / hi,
    })?;
    let pair = rs_pair(m)?;
    assert_eq!(pair.p_coeffs[0], 1, "assembly relies on d_0 = +1");
    let big_m = pair.big_m();
    let mu = 9 * big_m;
    let mut coeffs = Vec::with_capacity(mu);
    for _ in 0..9 {
        coeffs.extend_from_slice(&pair.p_coeffs);
    }
    Ok(FlatCosine { n, m, big_m, mu, gamma, coeffs })
}

/// Max over a uniform grid of `| |P_m|^2 + |Q_m|^2 - 2^{m+1} |`.
pub fn audit_parallelogram(pair: &RsPair, grid_size: usize) -> f64 {
    assert!(grid_size >= 4 * pair.big_m());
    let target = 2f64.powi(pair.m as i32 + 1);
    let mut defect = 0.0_f64;
    for j in 0..grid_size {
        let t = 2.0 * PI * j as f64 / grid_size as f64;
        let (p, q) = pair_eval(pair.m, t);
        defect = defect.max((p.norm_sqr() + q.norm_sqr() - target).abs());
    }
    defect
}

/// Min over adjacent root-of-unity pairs of `max(|P_m(z_j)|^2, |P_m(z_{j+1})|^2)`
/// at `z_j = e^{2πij/M}`; compare against `2δM`.
pub fn audit_adjacent_peaks(pair: &RsPair) -> f64 {
    assert!(pair.m >= 1);
    let big_m = pair.big_m();
    let values: Vec<f64> = (0..big_m)
        .map(|j| pair_eval(pair.m, 2.0 * PI * j as f64 / big_m as f64).0.norm_sqr())
        .collect();
    (0..big_m)
        .map(|j| values[j].max(values[(j + 1) % big_m]))
        .fold(f64::INFINITY, f64::min)
}

/// One peak-point witness row for the Lemma 2.4 audit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PeakWitness {
    pub j: usize,
    /// Whether `|P_m(z_j)|^2 >= 2δM` (the lemma's hypothesis).
    pub applicable: bool,
    pub a_j: f64,
    pub b_j: f64,
    pub t_abs_at_a: f64,
    pub t_abs_at_b: f64,
    pub pass: bool,
}

/// Searches the two Lemma 2.4 windows around every qualifying `t_j` on a
/// 1000-point subgrid for witnesses with `|T| >= 0.005 ‖T‖`.
pub fn audit_peak_points(m: u32) -> Result<Vec<PeakWitness>> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenGeneration { m });
    }
    if m > 16 {
        return Err(Error::GenerationOutOfRange { m, max: 16 });
    }
    let big_m = 1usize << m;
    let mf = big_m as f64;
    let threshold = 0.005 * t_at_zero(m) as f64;
    let two_delta_m = 2.0 * delta() * mf;
    let subgrid = 1000;
    let best_in = |lo: f64, hi: f64| -> (f64, f64) {
        let mut best_t = lo;
        let mut best_v = -1.0;
        for s in 0..subgrid {
            let t = lo + (hi - lo) * s as f64 / (subgrid - 1) as f64;
            let v = t_eval(m, t).abs();
            if v > best_v {
                best_v = v;
                best_t = t;
            }
        }
        (best_t, best_v)
    };
    let mut out = Vec::with_capacity(big_m);
    for j in 0..big_m {
        let t_j = 2.0 * PI * j as f64 / mf;
        let peak = pair_eval(m, t_j).0.norm_sqr();
        if peak < two_delta_m {
            out.push(PeakWitness {
                j,
                applicable: false,
                a_j: f64::NAN,
                b_j: f64::NAN,
                t_abs_at_a: f64::NAN,
                t_abs_at_b: f64::NAN,
                pass: true,
            });
            continue;
        }
        let (a_j, va) = best_in(t_j - 3.0 * PI / (32.0 * mf), t_j - PI / (32.0 * mf));
        let (b_j, vb) = best_in(t_j + PI / (32.0 * mf), t_j + 3.0 * PI / (32.0 * mf));
        out.push(PeakWitness {
            j,
            applicable: true,
            a_j,
            b_j,
            t_abs_at_a: va,
            t_abs_at_b: vb,
            pass: va >= threshold && vb >= threshold,
        });
    }
    Ok(out)
}

/// Result of the Lemma 2.3 neighborhood audit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NeighborhoodAudit {
    pub qualifying: usize,
    pub audited: usize,
    /// min over audited neighborhoods of min |P_m|^2
    pub min_modulus_sq: f64,
    /// the bound δM
    pub bound: f64,
    pub pass: bool,
}

/// Audits `|P_m(e^{it})|^2 >= δM` on `[t_j - δ/(2M), t_j + δ/(2M)]` for
/// qualifying `j`, on a 1000-point subgrid per neighborhood. `max_samples`
/// caps the number of audited neighborhoods (evenly spaced) for large `M`.
pub fn audit_neighborhood(pair: &RsPair, max_samples: Option<usize>) -> NeighborhoodAudit {
    let big_m = pair.big_m();
    let mf = big_m as f64;
    let d = delta();
    let two_delta_m = 2.0 * d * mf;
    let qualifying: Vec<usize> = (0..big_m)
        .filter(|&j| pair_eval(pair.m, 2.0 * PI * j as f64 / mf).0.norm_sqr() >= two_delta_m)
        .collect();
    let audited: Vec<usize> = match max_samples {
        Some(cap) if qualifying.len() > cap => {
            (0..cap).map(|i| qualifying[i * qualifying.len() / cap]).collect()
        }
        _ => qualifying.clone(),
    };
    let subgrid = 1000;
    let mut min_sq = f64::INFINITY;
    for &j in &audited {
        let t_j = 2.0 * PI * j as f64 / mf;
        let half = d / (2.0 * mf);
        for s in 0..subgrid {
            let t = t_j - half + 2.0 * half * s as f64 / (subgrid - 1) as f64;
            min_sq = min_sq.min(pair_eval(pair.m, t).0.norm_sqr());
        }
    }
    let bound = d * mf;
    NeighborhoodAudit {
        qualifying: qualifying.len(),
        audited: audited.len(),
        min_modulus_sq: min_sq,
        bound,
        pass: min_sq >= bound,
    }
}
