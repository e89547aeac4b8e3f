//! Real trigonometric polynomials with exact coefficients: evaluation,
//! certified sup-norms, derivatives, Fourier partial sums and de la Vallée
//! Poussin sums.

use crate::grid::CircleGrid;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Ratio of grid points per degree on the certification grid: `4L/ν = 128`
/// with `L = 32ν`, which is what drives the `(cos(π/64))^{-1}` lift.
pub const CERT_POINTS_PER_DEGREE: usize = 128;

/// The exact certification lift `(cos(π/64))^{-1} ≈ 1.001206`.
pub fn grid_safety_factor() -> f64 {
    1.0 / (PI / 64.0).cos()
}

/// A real trigonometric polynomial
/// `p(t) = a_0 + Σ_{k=1}^{ν} (a_k cos(kt) + b_k sin(kt))`.
///
/// The stored degree is tight: the trailing pair `(a_ν, b_ν)` is not both
/// zero unless the polynomial is the zero polynomial (ν = 0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolyRepr", into = "TrigPolyRepr")]
pub struct TrigPoly {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TrigPolyRepr {
    degree: usize,
    cos: Vec<String>,
    sin: Vec<String>,
}

impl From<TrigPoly> for TrigPolyRepr {
    fn from(p: TrigPoly) -> Self {
        TrigPolyRepr {
            degree: p.degree(),
            cos: p.cos.iter().map(|x| x.to_string()).collect(),
            sin: p.sin.iter().map(|x| x.to_string()).collect(),
        }
    }
}

impl TryFrom<TrigPolyRepr> for TrigPoly {
    type Error = String;

    fn try_from(r: TrigPolyRepr) -> std::result::Result<Self, String> {
        let cos: Vec<f64> = r
            .cos
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| e.to_string()))
            .collect::<std::result::Result<_, _>>()?;
        let sin: Vec<f64> = r
            .sin
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| e.to_string()))
            .collect::<std::result::Result<_, _>>()?;
        TrigPoly::new(cos, sin).map_err(|e| e.to_string())
    }
}

impl TrigPoly {
    /// Builds a polynomial from cosine coefficients `a_0..a_ν` and sine
    /// coefficients `b_1..b_ν`, trimming trailing all-zero pairs so the
    /// stored degree is tight.
    pub fn new(mut cos: Vec<f64>, mut sin: Vec<f64>) -> Result<Self> {
        if cos.is_empty() || cos.len() != sin.len() + 1 {
            return Err(Error::CoefficientLengths { cos: cos.len(), sin: sin.len() });
        }
        while cos.len() > 1 && *cos.last().unwrap() == 0.0 && *sin.last().unwrap() == 0.0 {
            cos.pop();
            sin.pop();
        }
        Ok(TrigPoly { cos, sin })
    }

    pub fn zero() -> Self {
        TrigPoly { cos: vec![0.0], sin: vec![] }
    }

    pub fn constant(a0: f64) -> Self {
        TrigPoly { cos: vec![a0], sin: vec![] }
    }

    /// `a cos(kt) + b sin(kt)` for `k >= 1`.
    pub fn harmonic(k: usize, a: f64, b: f64) -> Self {
        assert!(k >= 1);
        let mut cos = vec![0.0; k + 1];
        let mut sin = vec![0.0; k];
        cos[k] = a;
        sin[k - 1] = b;
        TrigPoly::new(cos, sin).unwrap()
    }

    pub fn from_cos_coeffs(cos: Vec<f64>) -> Self {
        let sin = vec![0.0; cos.len().saturating_sub(1)];
        TrigPoly::new(cos, sin).unwrap()
    }

    pub fn from_sin_coeffs(sin: Vec<f64>) -> Self {
        let cos = vec![0.0; sin.len() + 1];
        TrigPoly::new(cos, sin).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// Cosine coefficient `a_k` (0 beyond the degree).
    pub fn a(&self, k: usize) -> f64 {
        self.cos.get(k).copied().unwrap_or(0.0)
    }

    /// Sine coefficient `b_k` for `k >= 1` (0 beyond the degree).
    pub fn b(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.sin.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 0 && self.cos[0] == 0.0
    }

    /// Sum of |a_k| + |b_k|; the scale used in evaluation accuracy contracts.
    pub fn coeff_abs_sum(&self) -> f64 {
        self.cos.iter().map(|x| x.abs()).sum::<f64>()
            + self.sin.iter().map(|x| x.abs()).sum::<f64>()
    }

    /// Evaluates the polynomial at `t` (radians).
    ///
    /// Per-term angles are formed after reducing `t` to `[-π, π]`, which keeps
    /// the absolute error within `1e-10 · Σ|coeffs|` up to degree `2^21`.
    pub fn eval(&self, t: f64) -> f64 {
        let mut tr = t.rem_euclid(2.0 * PI);
        if tr > PI {
            tr -= 2.0 * PI;
        }
        let mut acc = self.cos[0];
        for k in 1..self.cos.len() {
            let (s, c) = (k as f64 * tr).sin_cos();
            acc += self.cos[k] * c + self.sin[k - 1] * s;
        }
        acc
    }

    /// Values on the degree-appropriate certification grid
    /// `t_r = (2r-1)π/(4L)`, `L = 32ν`, returned in grid order (`r = j+1`).
    pub fn cert_grid_values(&self) -> Vec<f64> {
        let nu = self.degree().max(1);
        let grid = CircleGrid::new(CERT_POINTS_PER_DEGREE * nu, true);
        grid.eval_trig(&self.cos, &self.sin)
    }

    /// Certified sup-norm via the `4L`-point grid of Lemma-3.7 shape with
    /// `L = 32ν`. The true sup-norm lies in `[grid_max, grid_max/cos(π/64)]`.
    pub fn certified_sup_norm(&self) -> Result<SupNormCert> {
        if self.degree() < 1 {
            return Err(Error::DegreeTooSmall);
        }
        let values = self.cert_grid_values();
        let grid_max = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(SupNormCert::from_grid_max(values.len(), grid_max))
    }

    /// Exact term-wise derivative.
    pub fn derivative(&self) -> TrigPoly {
        let nu = self.degree();
        if nu == 0 {
            return TrigPoly::zero();
        }
        let mut cos = vec![0.0; nu + 1];
        let mut sin = vec![0.0; nu];
        for k in 1..=nu {
            // d/dt (a cos(kt) + b sin(kt)) = kb cos(kt) - ka sin(kt)
            cos[k] = k as f64 * self.sin[k - 1];
            sin[k - 1] = -(k as f64) * self.cos[k];
        }
        TrigPoly::new(cos, sin).unwrap()
    }

    pub fn scale(&self, factor: f64) -> TrigPoly {
        TrigPoly::new(
            self.cos.iter().map(|x| x * factor).collect(),
            self.sin.iter().map(|x| x * factor).collect(),
        )
        .unwrap()
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let n = self.cos.len().max(other.cos.len());
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n - 1];
        for k in 0..n {
            cos[k] = self.a(k) + other.a(k);
            if k >= 1 {
                sin[k - 1] = self.b(k) + other.b(k);
            }
        }
        TrigPoly::new(cos, sin).unwrap()
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        self.add(&other.scale(-1.0))
    }

    /// CSV dump `(t, value)` over `points` uniform samples of `[0, 2π)`,
    /// 17 significant digits.
    pub fn grid_csv(&self, points: usize) -> String {
        let grid = CircleGrid::new(points, false);
        let values = grid.eval_trig(&self.cos, &self.sin);
        let mut out = String::from("t,value\n");
        for (j, v) in values.iter().enumerate() {
            out.push_str(&format!("{:.16e},{:.16e}\n", grid.point(j), v));
        }
        out
    }
}

/// Grid-based sup-norm certificate: the true sup-norm lies in
/// `[lower_bound, upper_bound]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SupNormCert {
    pub grid_size: usize,
    pub grid_max: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

impl SupNormCert {
    pub fn from_grid_max(grid_size: usize, grid_max: f64) -> Self {
        SupNormCert {
            grid_size,
            grid_max,
            lower_bound: grid_max,
            upper_bound: grid_max * grid_safety_factor(),
        }
    }
}

/// Certifies the sup-norm of an arbitrary degree-`nu` trigonometric
/// polynomial supplied as a point-evaluation closure. Used where the
/// coefficient form is expensive but pointwise evaluation is cheap
/// (Rudin–Shapiro prefixes and the nine-block polynomial `T`).
pub fn certify_pointwise(nu: usize, f: impl Fn(f64) -> f64) -> SupNormCert {
    let n = CERT_POINTS_PER_DEGREE * nu.max(1);
    let mut grid_max = 0.0_f64;
    for j in 0..n {
        let t = (2 * j + 1) as f64 * PI / n as f64;
        grid_max = grid_max.max(f(t).abs());
    }
    SupNormCert::from_grid_max(n, grid_max)
}

/// A continuous 2π-periodic function, optionally exposing exact Fourier
/// coefficients `k ↦ (a_k, b_k)` (with `b_0 = 0`).
pub trait PeriodicFunction {
    fn value(&self, t: f64) -> f64;

    fn fourier_coefficient(&self, _k: usize) -> Option<(f64, f64)> {
        None
    }
}

impl PeriodicFunction for TrigPoly {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    fn fourier_coefficient(&self, k: usize) -> Option<(f64, f64)> {
        Some((self.a(k), self.b(k)))
    }
}

/// Degree-`n` truncation of the Fourier series of `f`, using exact
/// coefficients. Fails with [`Error::FourierUnavailable`] when `f` does not
/// expose them; use [`partial_sum_quadrature`] in that case.
pub fn partial_sum(f: &dyn PeriodicFunction, n: usize) -> Result<TrigPoly> {
    let mut cos = vec![0.0; n + 1];
    let mut sin = vec![0.0; n];
    for k in 0..=n {
        let (a, b) = f.fourier_coefficient(k).ok_or(Error::FourierUnavailable)?;
        cos[k] = a;
        if k >= 1 {
            sin[k - 1] = b;
        }
    }
    TrigPoly::new(cos, sin)
}

/// Fourier coefficients `(a_k, b_k)` for `k <= n` by trapezoid quadrature on
/// `nodes` uniform points, with an error estimate from node doubling.
pub fn fourier_by_quadrature(
    f: &dyn PeriodicFunction,
    n: usize,
    nodes: usize,
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let coarse = quadrature_pass(f, n, nodes);
    let fine = quadrature_pass(f, n, 2 * nodes);
    let mut err = 0.0_f64;
    for k in 0..=n {
        err = err.max((coarse[k].0 - fine[k].0).abs());
        err = err.max((coarse[k].1 - fine[k].1).abs());
    }
    if err > tol {
        return Err(Error::QuadratureTolerance { requested: tol, achieved: err, nodes });
    }
    Ok(fine)
}

fn quadrature_pass(f: &dyn PeriodicFunction, n: usize, nodes: usize) -> Vec<(f64, f64)> {
    // Uniform trapezoid rule on a periodic integrand.
    let values: Vec<f64> = (0..nodes)
        .map(|j| f.value(2.0 * PI * j as f64 / nodes as f64))
        .collect();
    (0..=n)
        .map(|k| {
            let mut sa = 0.0;
            let mut sb = 0.0;
            for (j, &v) in values.iter().enumerate() {
                let (s, c) = (k as f64 * 2.0 * PI * j as f64 / nodes as f64).sin_cos();
                sa += v * c;
                sb += v * s;
            }
            let norm = if k == 0 { 1.0 } else { 2.0 };
            (norm * sa / nodes as f64, if k == 0 { 0.0 } else { norm * sb / nodes as f64 })
        })
        .collect()
}

/// Quadrature-backed variant of [`partial_sum`].
pub fn partial_sum_quadrature(
    f: &dyn PeriodicFunction,
    n: usize,
    nodes: usize,
    tol: f64,
) -> Result<TrigPoly> {
    let coeffs = fourier_by_quadrature(f, n, nodes, tol)?;
    let cos: Vec<f64> = coeffs.iter().map(|c| c.0).collect();
    let sin: Vec<f64> = coeffs.iter().skip(1).map(|c| c.1).collect();
    TrigPoly::new(cos, sin)
}

/// Weight of frequency `q` in `V_n = (1/n) Σ_{j=n}^{2n-1} S_j`:
/// 1 for `q <= n`, `(2n-q)/n` for `n < q <= 2n-1`, 0 beyond.
pub fn vallee_poussin_weight(n: usize, q: usize) -> f64 {
    if q <= n {
        1.0
    } else if q < 2 * n {
        (2 * n - q) as f64 / n as f64
    } else {
        0.0
    }
}

/// de la Vallée Poussin sum `V_n(f) = (1/n) Σ_{j=n}^{2n-1} S_j(f)`, computed
/// coefficient-wise through the taper weights. Requires exact coefficients.
pub fn vallee_poussin(f: &dyn PeriodicFunction, n: usize) -> Result<TrigPoly> {
    assert!(n >= 1);
    let top = 2 * n - 1;
    let mut cos = vec![0.0; top + 1];
    let mut sin = vec![0.0; top];
    for q in 0..=top {
        let (a, b) = f.fourier_coefficient(q).ok_or(Error::FourierUnavailable)?;
        let w = vallee_poussin_weight(n, q);
        cos[q] = w * a;
        if q >= 1 {
            sin[q - 1] = w * b;
        }
    }
    TrigPoly::new(cos, sin)
}

/// Quadrature-backed variant of [`vallee_poussin`].
pub fn vallee_poussin_quadrature(
    f: &dyn PeriodicFunction,
    n: usize,
    nodes: usize,
    tol: f64,
) -> Result<TrigPoly> {
    assert!(n >= 1);
    let top = 2 * n - 1;
    let coeffs = fourier_by_quadrature(f, top, nodes, tol)?;
    let mut cos = vec![0.0; top + 1];
    let mut sin = vec![0.0; top];
    for q in 0..=top {
        let w = vallee_poussin_weight(n, q);
        cos[q] = w * coeffs[q].0;
        if q >= 1 {
            sin[q - 1] = w * coeffs[q].1;
        }
    }
    TrigPoly::new(cos, sin)
}

/// The Jackson bound `E_n(f) <= ω(f, π/(n+1))`: an identity map on the
/// supplied modulus-of-continuity value, named so the bound chain can log it.
pub fn jackson_bound(omega_at: f64) -> Result<f64> {
    if omega_at < 0.0 {
        return Err(Error::NegativeModulus { value: omega_at });
    }
    Ok(omega_at)
}

/// Riesz lower envelope `t ↦ |p(t_0)| cos(ν(t - t_0))`, valid for
/// `|t - t_0| <= π/(2ν)` when `|p(t_0)| = ‖p‖`.
#[derive(Clone, Copy, Debug)]
pub struct RieszEnvelope {
    pub amplitude: f64,
    pub degree: usize,
    pub center: f64,
}

impl RieszEnvelope {
    pub fn value(&self, t: f64) -> f64 {
        self.amplitude * (self.degree as f64 * (t - self.center)).cos()
    }

    pub fn valid_radius(&self) -> f64 {
        PI / (2.0 * self.degree as f64)
    }
}

/// Builds the Riesz envelope at `t0`, checking that `|p(t0)|` reaches the
/// certified lower estimate of the sup-norm (within the grid lift).
pub fn riesz_lower_envelope(p: &TrigPoly, t0: f64) -> Result<RieszEnvelope> {
    let cert = p.certified_sup_norm()?;
    let required = cert.lower_bound / grid_safety_factor();
    let value = p.eval(t0).abs();
    if value < required {
        return Err(Error::NotAnExtremum { value, required });
    }
    Ok(RieszEnvelope { amplitude: value, degree: p.degree(), center: t0 })
}

/// One sampled violation of the Riesz envelope.
#[derive(Clone, Copy, Debug)]
pub struct EnvelopeViolation {
    pub t: f64,
    pub poly_abs: f64,
    pub envelope: f64,
}

/// Samples `|p|` against the envelope on `points` points of the validity
/// window and reports everything below the envelope beyond `tol`.
pub fn audit_riesz_envelope(
    p: &TrigPoly,
    env: &RieszEnvelope,
    points: usize,
    tol: f64,
) -> Vec<EnvelopeViolation> {
    let r = env.valid_radius();
    let mut violations = Vec::new();
    for j in 0..points {
        let t = env.center - r + 2.0 * r * j as f64 / (points - 1) as f64;
        let pa = p.eval(t).abs();
        let ev = env.value(t);
        if pa < ev - tol {
            violations.push(EnvelopeViolation { t, poly_abs: pa, envelope: ev });
        }
    }
    violations
}
