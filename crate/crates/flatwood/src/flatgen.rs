//! The end-to-end pipeline: cosine stage, symmetric coloring stage, odd-sine
//! rounding stage, even-sine filler, coefficient assembly into a ±1
//! polynomial of degree `4n`, and the bound-chain audit.

use crate::discrepancy::{
    self, ColoringResult, PartialColoringInstance, SolverConfig, TestVectors,
};
use crate::grid::CircleGrid;
use crate::intervals::{
    self, classify, validate, IntervalCollection, PropertyReport, SymmetricColoring,
    TargetFunction,
};
use crate::rudin_shapiro::{self, FlatCosine};
use crate::trigcore::{self, SupNormCert, TrigPoly};
use crate::{Error, Result, SCHEMA_VERSION};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `K = 2^9`.
pub const DEFAULT_AMPLITUDE: f64 = 512.0;

pub fn desk_window() -> (f64, f64) {
    (2f64.powi(-10), 2f64.powi(-7))
}

pub fn paper_window() -> (f64, f64) {
    (2f64.powi(-75), 2f64.powi(-72))
}

/// `η1 = (0.005/400)·(η/18π)^200` with `η = 10πγ`. Underflows to 0 for any
/// desk-scale `γ`; the classification threshold takes a configurable floor.
pub fn paper_eta1(gamma: f64) -> f64 {
    let eta = 10.0 * PI * gamma;
    0.005 / 400.0 * (eta / (18.0 * PI)).powi(200)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Paper,
    Desk,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub n: u64,
    pub gamma_window: (f64, f64),
    /// the amplitude constant `K`
    pub amplitude: f64,
    pub profile: Profile,
    pub seed: u64,
    pub max_restarts: u32,
    /// classification threshold floor, as a fraction of `‖c‖`
    pub threshold_ratio: f64,
}

impl PipelineConfig {
    pub fn desk(n: u64, seed: u64) -> Self {
        PipelineConfig {
            n,
            gamma_window: desk_window(),
            amplitude: DEFAULT_AMPLITUDE,
            profile: Profile::Desk,
            seed,
            max_restarts: 20,
            threshold_ratio: 1e-3,
        }
    }

    pub fn paper(n: u64, seed: u64) -> Self {
        PipelineConfig { gamma_window: paper_window(), profile: Profile::Paper, ..Self::desk(n, seed) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || !self.n.is_multiple_of(10) {
            return Err(Error::NotDivisibleByTen { n: self.n });
        }
        let (lo, hi) = self.gamma_window;
        assert!(lo > 0.0 && hi / lo >= 8.0, "gamma window must span a factor of 8");
        assert!(self.amplitude > 0.0);
        assert!(self.threshold_ratio > 0.0);
        Ok(())
    }
}

/// Compact, serializable record of one solver invocation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverSummary {
    pub constraints: usize,
    pub dimension: usize,
    pub seed: u64,
    pub phases: u32,
    pub restarts_used: u32,
    pub all_satisfied: bool,
    pub max_achieved: f64,
    pub max_normalized: f64,
    pub entropy_value: f64,
    pub entropy_pass: bool,
}

fn summarize(instance: &PartialColoringInstance, result: &ColoringResult) -> SolverSummary {
    let (entropy_value, entropy_pass) = discrepancy::check_entropy(instance);
    SolverSummary {
        constraints: instance.u(),
        dimension: instance.v(),
        seed: result.seed,
        phases: result.phases,
        restarts_used: result.restarts_used,
        all_satisfied: result.all_satisfied(),
        max_achieved: result.max_achieved(),
        max_normalized: result.max_normalized(),
        entropy_value,
        entropy_pass,
    }
}

pub struct CosineStage {
    pub cosine: FlatCosine,
    pub cert: SupNormCert,
    pub threshold: f64,
    pub margin: f64,
    pub good_count: usize,
    /// base intervals excised around `(π/2)ℤ` (the cosine vanishes at `π/2`
    /// exactly, so the raw bad set always touches the axis zones)
    pub excluded: Vec<i64>,
    pub collection: IntervalCollection,
    pub properties: PropertyReport,
}

/// Builds the cosine polynomial, classifies the circle, excises the axis
/// zones and validates the collection.
pub fn cosine_stage(cfg: &PipelineConfig) -> Result<CosineStage> {
    cfg.validate()?;
    let cosine = rudin_shapiro::build_cosine(cfg.n, cfg.gamma_window)?;
    let u = cosine.as_trig_poly();
    let cert = u.certified_sup_norm()?;
    let threshold = paper_eta1(cosine.gamma)
        .max(cfg.threshold_ratio * cert.lower_bound);
    let classification = classify(&u, cfg.n, threshold)?;
    let (collection, excluded) = classification.bad.trim_axis_zones();
    let properties = validate(&collection, cosine.gamma);
    if !properties.all_pass() {
        return Err(Error::InvalidCollection(properties.witnesses.join("; ")));
    }
    Ok(CosineStage {
        cosine,
        cert,
        threshold,
        margin: classification.margin,
        good_count: classification.good.len(),
        excluded,
        collection,
        properties,
    })
}

pub struct ColoringStage {
    pub target: TargetFunction,
    /// `b_{2k−1}(G_α)` for `k = 1..n`
    pub b: Vec<f64>,
    pub b_max: f64,
    pub solver: Option<SolverSummary>,
}

/// Chooses the free signs by partial coloring of the odd-sine moment
/// vectors, then extends symmetrically.
pub fn coloring_stage(cos: &CosineStage, cfg: &PipelineConfig) -> Result<ColoringStage> {
    let n = cfg.n as usize;
    if cos.collection.is_empty() {
        let target = TargetFunction::new(
            cos.collection.clone(),
            SymmetricColoring::empty(),
            cfg.amplitude,
            cfg.n,
        )?;
        return Ok(ColoringStage { target, b: vec![0.0; n], b_max: 0.0, solver: None });
    }

    let free = cos.collection.free_indices();
    let big_n = free.len();
    let rows: Vec<Vec<f64>> = (1..=n)
        .map(|k| intervals::bump_sine_vector(&cos.collection, cfg.amplitude, k))
        .collect();
    let c_k = 14.0 * ((16.0 * n as f64 / big_n as f64).ln()).sqrt();
    let instance =
        PartialColoringInstance::uniform(TestVectors::Dense(rows.clone()), vec![0.0; big_n], c_k)?;
    let solver_cfg = SolverConfig::with_seed(cfg.seed);
    let result = discrepancy::solve(&instance, &SolverConfig {
        max_restarts: cfg.max_restarts,
        ..solver_cfg
    })?;
    let summary = summarize(&instance, &result);

    let coloring = SymmetricColoring::from_free(&cos.collection, &result.x)?;
    let target =
        TargetFunction::new(cos.collection.clone(), coloring, cfg.amplitude, cfg.n)?;
    let b: Vec<f64> = rows
        .iter()
        .map(|y| y.iter().zip(&result.x).map(|(yj, &xj)| yj * xj as f64).sum())
        .collect();
    let b_max = b.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    Ok(ColoringStage { target, b, b_max, solver: Some(summary) })
}

pub struct SineStage {
    pub s_o: TrigPoly,
    pub epsilon: Vec<i8>,
    /// the clamped coefficients of `V_n(G_α)`, used as the solver's `x0`
    pub epsilon_tilde: Vec<f64>,
    /// `max_k (|ε̃| − 1)_+` before clamping
    pub clamp_loss_max: f64,
    /// `Σ_k (|ε̃| − 1)_+`: a sup-norm bound on `Ṽ − V_n(G_α)`
    pub clamp_loss_sum: f64,
    /// `max_{r ≤ L} |s_o(t_r) − Ṽ(t_r)|`
    pub grid_defect: f64,
    /// max over all `4L` grid points (equals `grid_defect` by symmetry)
    pub full_grid_defect: f64,
    /// grid defect against the unclamped tapered target `V_n(G_α)`
    pub target_grid_defect: f64,
    /// `grid_defect / cos(π/64)`, a certified sup bound on `s_o − Ṽ`
    pub lifted_defect: f64,
    pub solver: SolverSummary,
}

/// Rounds the tapered target coefficients to ±1 by partial coloring against
/// the odd-sine grid rows.
pub fn sine_stage(col: &ColoringStage, cfg: &PipelineConfig) -> Result<SineStage> {
    let n = cfg.n as usize;
    // ε̃(2k−1) = V_n taper weight at frequency 2k−1 times b_{2k−1}
    let raw: Vec<f64> = (1..=n)
        .map(|k| trigcore::vallee_poussin_weight(n, 2 * k - 1) * col.b[k - 1])
        .collect();
    let mut clamp_loss_max = 0.0_f64;
    let mut clamp_loss_sum = 0.0_f64;
    let epsilon_tilde: Vec<f64> = raw
        .iter()
        .map(|&x| {
            let excess = (x.abs() - 1.0).max(0.0);
            clamp_loss_max = clamp_loss_max.max(excess);
            clamp_loss_sum += excess;
            x.clamp(-1.0, 1.0)
        })
        .collect();

    let c_r = 42.0 * (2.0_f64.ln()).sqrt();
    let instance = PartialColoringInstance::uniform(
        TestVectors::OddSineGrid { n },
        epsilon_tilde.clone(),
        c_r,
    )?;
    let solver_cfg = SolverConfig {
        max_restarts: cfg.max_restarts,
        ..SolverConfig::with_seed(cfg.seed ^ 0x51_4e45)
    };
    let result = discrepancy::solve(&instance, &solver_cfg)?;
    let summary = summarize(&instance, &result);
    let grid_defect = result.max_achieved();

    let epsilon = result.x.clone();
    let mut sin = vec![0.0; 2 * n - 1];
    for (k, &e) in epsilon.iter().enumerate() {
        sin[2 * k] = e as f64;
    }
    let s_o = TrigPoly::from_sin_coeffs(sin);

    // difference polynomial on the full 4L grid
    let mut dsin = vec![0.0; 2 * n - 1];
    for (k, (&e, &et)) in epsilon.iter().zip(&epsilon_tilde).enumerate() {
        dsin[2 * k] = e as f64 - et;
    }
    let l = 32 * n;
    let grid = CircleGrid::new(4 * l, true);
    let diff = grid.eval_trig(&vec![0.0; 2 * n], &dsin);
    let full_grid_defect = diff.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    for (k, (&e, &r)) in epsilon.iter().zip(&raw).enumerate() {
        dsin[2 * k] = e as f64 - r;
    }
    let tdiff = grid.eval_trig(&vec![0.0; 2 * n], &dsin);
    let target_grid_defect = tdiff.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    Ok(SineStage {
        s_o,
        epsilon,
        epsilon_tilde,
        clamp_loss_max,
        clamp_loss_sum,
        grid_defect,
        full_grid_defect,
        target_grid_defect,
        lifted_defect: full_grid_defect * trigcore::grid_safety_factor(),
        solver: summary,
    })
}

pub struct EvenSineStage {
    pub s_e: TrigPoly,
    pub cert: SupNormCert,
    pub mu: usize,
    pub prefix: Vec<i32>,
}

/// `s_e(t) = Σ_{k=μ}^{n} p_k sin(2kt)` with `p` the length-(n+1)
/// Rudin–Shapiro prefix: the unique even-sine filler whose support
/// complements the cosine support `{0..μ−1}` without gap or overlap.
pub fn even_sine_stage(n: u64, mu: usize) -> Result<EvenSineStage> {
    let n = n as usize;
    assert!(mu >= 1 && mu <= n);
    let prefix = rudin_shapiro::rs_prefix(n + 1)?.coeffs;
    let mut sin = vec![0.0; 2 * n];
    for (k, &p) in prefix.iter().enumerate().take(n + 1).skip(mu) {
        sin[2 * k - 1] = p as f64;
    }
    let s_e = TrigPoly::from_sin_coeffs(sin);
    let cert = s_e.certified_sup_norm()?;
    Ok(EvenSineStage { s_e, cert, mu, prefix })
}

/// A polynomial with every coefficient in {−1, +1}, serialized as a sign
/// string ('+' for +1, '-' for −1, constant term first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LittlewoodPoly {
    coeffs: Vec<i8>,
}

impl LittlewoodPoly {
    pub fn new(coeffs: Vec<i8>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        assert!(coeffs.iter().all(|&c| c == 1 || c == -1));
        Ok(LittlewoodPoly { coeffs })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(s.len());
        for (position, ch) in s.chars().enumerate() {
            match ch {
                '+' => coeffs.push(1),
                '-' | '−' => coeffs.push(-1),
                found => return Err(Error::BadCoefficientChar { found, position }),
            }
        }
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        Ok(LittlewoodPoly { coeffs })
    }

    pub fn coeff_string(&self) -> String {
        self.coeffs.iter().map(|&c| if c == 1 { '+' } else { '-' }).collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i8] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, t);
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + Complex64::new(c as f64, 0.0))
    }

    /// `|P|` on the degree-matched certification grid, by FFT.
    pub fn modulus_grid(&self) -> (CircleGrid, Vec<f64>) {
        let nu = self.degree().max(1);
        let grid = CircleGrid::new(trigcore::CERT_POINTS_PER_DEGREE * nu, true);
        let coeffs: Vec<Complex64> =
            self.coeffs.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect();
        let values = grid.eval(&coeffs).into_iter().map(|z| z.norm()).collect();
        (grid, values)
    }
}

impl From<LittlewoodPoly> for String {
    fn from(p: LittlewoodPoly) -> Self {
        p.coeff_string()
    }
}

impl TryFrom<String> for LittlewoodPoly {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        LittlewoodPoly::parse(&s).map_err(|e| e.to_string())
    }
}

/// The degree-`4n` assembly: center coefficient from `2d_0 − 1`, odd offsets
/// from `s_o` (antisymmetric), low even offsets from the cosine
/// (symmetric), high even offsets from the even-sine prefix (antisymmetric).
pub fn assemble(
    cosine: &FlatCosine,
    sine: &SineStage,
    even: &EvenSineStage,
    cfg: &PipelineConfig,
) -> Result<LittlewoodPoly> {
    let n = cfg.n as usize;
    assert_eq!(cosine.coeffs[0], 1);
    assert_eq!(sine.epsilon.len(), n);

    let centre = 2 * n;
    let mut coeffs = vec![0i8; 4 * n + 1];
    let mut filled = vec![false; 4 * n + 1];
    let set = |idx: usize, value: i8, coeffs: &mut [i8], filled: &mut [bool]| -> Result<()> {
        if filled[idx] {
            return Err(Error::SupportConflict { offset: idx.abs_diff(centre) });
        }
        coeffs[idx] = value;
        filled[idx] = true;
        Ok(())
    };

    set(centre, 2 * cosine.coeffs[0] as i8 - 1, &mut coeffs, &mut filled)?;
    for k in 1..=n {
        let o = 2 * k - 1;
        let e = sine.epsilon[k - 1];
        set(centre + o, e, &mut coeffs, &mut filled)?;
        set(centre - o, -e, &mut coeffs, &mut filled)?;
    }
    for (k, &d) in cosine.coeffs.iter().enumerate().skip(1) {
        let o = 2 * k;
        set(centre + o, d as i8, &mut coeffs, &mut filled)?;
        set(centre - o, d as i8, &mut coeffs, &mut filled)?;
    }
    for k in even.mu..=n {
        let o = 2 * k;
        let p = even.prefix[k] as i8;
        set(centre + o, p, &mut coeffs, &mut filled)?;
        set(centre - o, -p, &mut coeffs, &mut filled)?;
    }
    if let Some(gap) = filled.iter().position(|&f| !f) {
        return Err(Error::SupportConflict { offset: gap.abs_diff(centre) });
    }
    LittlewoodPoly::new(coeffs)
}

/// Max over `samples` seeded random points of
/// `|P(e^{it}) e^{−2int} − ((−1 + 2c(t)) + 2i(s_o + s_e)(t))|`.
pub fn audit_assembly(
    poly: &LittlewoodPoly,
    cosine: &FlatCosine,
    s_o: &TrigPoly,
    s_e: &TrigPoly,
    samples: usize,
    seed: u64,
) -> f64 {
    let n = poly.degree() / 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let t: f64 = rng.gen_range(0.0..2.0 * PI);
        let lhs = poly.eval(t) * Complex64::from_polar(1.0, -2.0 * n as f64 * t);
        let rhs = Complex64::new(
            -1.0 + 2.0 * cosine.eval(t),
            2.0 * (s_o.eval(t) + s_e.eval(t)),
        );
        worst = worst.max((lhs - rhs).norm());
    }
    worst
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentNorms {
    pub cosine: f64,
    pub s_odd: f64,
    pub s_even: f64,
    pub vn_target_max: f64,
    pub b_max: f64,
    pub rounding_defect: f64,
    pub clamp_loss: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `m_n`: measured width of the center zone, `2μ − 1` for pipeline output
    pub center_width: usize,
    pub antisymmetric_ok: bool,
    pub center_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundChainEntry {
    pub id: String,
    pub bound: f64,
    pub measured: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub n: u64,
    pub m: u32,
    pub mu: usize,
    pub gamma: f64,
    pub amplitude: f64,
    pub certified_max: f64,
    /// grid statistic, an upper estimate of the true minimum (no lower
    /// certification is claimed)
    pub grid_min: f64,
    pub eta1_measured: f64,
    pub eta2_measured: f64,
    pub component_norms: Option<ComponentNorms>,
    pub symmetry: Option<SymmetryReport>,
    pub bound_chain: Vec<BoundChainEntry>,
    pub identity_residual: Option<f64>,
    pub fallback: bool,
}

/// Exact-symmetry check of the two zones: odd offsets and even offsets
/// `≥ 2μ` antisymmetric, even offsets `< 2μ` symmetric.
pub fn symmetry_report(poly: &LittlewoodPoly, mu: usize) -> SymmetryReport {
    let d = poly.degree();
    let centre = d / 2;
    let a = poly.coeffs();
    let mut antisymmetric_ok = true;
    let mut center_ok = true;
    for o in 1..=centre {
        let (hi, lo) = (a[centre + o], a[centre - o]);
        if o % 2 == 0 && o < 2 * mu {
            center_ok &= hi == lo;
        } else {
            antisymmetric_ok &= hi == -lo;
        }
    }
    SymmetryReport { center_width: 2 * mu - 1, antisymmetric_ok, center_ok }
}

/// Grid statistics and symmetry scan for a bare polynomial (no pipeline
/// context, so no component norms or bound chain).
pub fn analyze_littlewood(poly: &LittlewoodPoly) -> FlatnessReport {
    let (_, values) = poly.modulus_grid();
    let grid_max = values.iter().fold(0.0_f64, |m, &v| m.max(v));
    let grid_min = values.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let certified_max = grid_max * trigcore::grid_safety_factor().sqrt();
    let scale = (poly.degree().max(1) as f64).sqrt();
    let symmetry = measured_symmetry(poly);
    FlatnessReport {
        n: poly.degree() as u64 / 4,
        m: 0,
        mu: 0,
        gamma: 0.0,
        amplitude: 0.0,
        certified_max,
        grid_min,
        eta1_measured: grid_min / scale,
        eta2_measured: certified_max / scale,
        component_norms: None,
        symmetry,
        bound_chain: Vec::new(),
        identity_residual: None,
        fallback: false,
    }
}

fn measured_symmetry(poly: &LittlewoodPoly) -> Option<SymmetryReport> {
    let d = poly.degree();
    if !d.is_multiple_of(4) || d < 4 {
        return None;
    }
    let centre = d / 2;
    let a = poly.coeffs();
    let mut antisymmetric_ok = true;
    let mut sym_even: Vec<usize> = Vec::new();
    for o in 1..=centre {
        let (hi, lo) = (a[centre + o], a[centre - o]);
        if o % 2 == 1 {
            antisymmetric_ok &= hi == -lo;
        } else if hi == lo {
            sym_even.push(o);
        }
    }
    // the symmetric even offsets should be a contiguous prefix 2, 4, ..
    let center_ok = sym_even.iter().enumerate().all(|(i, &o)| o == 2 * (i + 1));
    let center_width = if sym_even.is_empty() { 1 } else { sym_even.len() * 2 + 1 };
    Some(SymmetryReport { center_width, antisymmetric_ok, center_ok })
}

/// Grid-index mask of `∪ℐ` on a circle grid (`half_offset` matching the
/// grid the values came from).
fn covered_mask(collection: &IntervalCollection, size: usize, half_offset: bool) -> Vec<bool> {
    let mut mask = vec![false; size];
    let nf = size as f64;
    for &run in collection.runs() {
        let (a, b) = collection.run_arc(run);
        // t_j = (2j+1)π/size (half) or 2πj/size (plain); j range covering [a,b]
        let (j_lo, j_hi) = if half_offset {
            (((a * nf / PI - 1.0) / 2.0).ceil(), ((b * nf / PI - 1.0) / 2.0).floor())
        } else {
            ((a * nf / (2.0 * PI)).ceil(), (b * nf / (2.0 * PI)).floor())
        };
        let (j_lo, j_hi) = (j_lo as i64, j_hi as i64);
        for j in j_lo..=j_hi {
            mask[j.rem_euclid(size as i64) as usize] = true;
        }
    }
    mask
}

/// Everything `generate` produces, serializable as one JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunArtifact {
    pub schema_version: u32,
    pub config: PipelineConfig,
    pub fallback: bool,
    pub collection: Option<IntervalCollection>,
    pub coloring: Option<SymmetricColoring>,
    pub excluded_intervals: Vec<i64>,
    pub coloring_solver: Option<SolverSummary>,
    pub sine_solver: Option<SolverSummary>,
    pub epsilon: Option<Vec<i8>>,
    pub poly: LittlewoodPoly,
    pub report: FlatnessReport,
}

/// Runs the whole pipeline. Paper-profile configs are refused with the
/// minimal-`n` diagnostic; desk configs too small for the window emit the
/// `1 − z − … − z^{4n}` fallback flagged as such.
pub fn generate(cfg: &PipelineConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    let stage1 = match cosine_stage(cfg) {
        Ok(s) => s,
        Err(Error::WindowInfeasible { lo, hi, n, min_n }) => {
            if cfg.profile == Profile::Paper {
                return Err(Error::PaperProfile(format!(
                    "window [{lo:e}, {hi:e}) needs n of about {min_n:e}; n = {n} is far below"
                )));
            }
            let mut coeffs = vec![-1i8; 4 * cfg.n as usize + 1];
            coeffs[0] = 1;
            let poly = LittlewoodPoly::new(coeffs)?;
            let mut report = analyze_littlewood(&poly);
            report.fallback = true;
            return Ok(RunArtifact {
                schema_version: SCHEMA_VERSION,
                config: cfg.clone(),
                fallback: true,
                collection: None,
                coloring: None,
                excluded_intervals: Vec::new(),
                coloring_solver: None,
                sine_solver: None,
                epsilon: None,
                poly,
                report,
            });
        }
        Err(e) => return Err(e),
    };
    if cfg.profile == Profile::Paper {
        // unreachable in practice (the paper window needs n ≈ 9·2^72), but
        // keep the refusal in one place
        return Err(Error::PaperProfile("paper-profile constants exceed desk scale".into()));
    }

    let stage2 = coloring_stage(&stage1, cfg)?;
    let stage3 = sine_stage(&stage2, cfg)?;
    let stage4 = even_sine_stage(cfg.n, stage1.cosine.mu)?;
    let poly = assemble(&stage1.cosine, &stage3, &stage4, cfg)?;
    let residual =
        audit_assembly(&poly, &stage1.cosine, &stage3.s_o, &stage4.s_e, 1000, cfg.seed ^ 0xA0D17);

    let report = build_report(cfg, &stage1, &stage2, &stage3, &stage4, &poly, residual)?;
    Ok(RunArtifact {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        fallback: false,
        collection: Some(stage1.collection.clone()),
        coloring: Some(stage2.target.coloring.clone()),
        excluded_intervals: stage1.excluded.clone(),
        coloring_solver: stage2.solver.clone(),
        sine_solver: Some(stage3.solver.clone()),
        epsilon: Some(stage3.epsilon.clone()),
        poly,
        report,
    })
}

fn build_report(
    cfg: &PipelineConfig,
    stage1: &CosineStage,
    stage2: &ColoringStage,
    stage3: &SineStage,
    stage4: &EvenSineStage,
    poly: &LittlewoodPoly,
    residual: f64,
) -> Result<FlatnessReport> {
    let n = cfg.n as usize;
    let nf = cfg.n as f64;
    let sqrt_n = nf.sqrt();
    let peak = cfg.amplitude * sqrt_n;

    // V_n(G_α) from the tapered odd-sine coefficients (all other Fourier
    // coefficients of G_α vanish by symmetry)
    let mut vsin = vec![0.0; 2 * n - 1];
    for k in 1..=n {
        vsin[2 * k - 2] = trigcore::vallee_poussin_weight(n, 2 * k - 1) * stage2.b[k - 1];
    }
    let vn = TrigPoly::from_sin_coeffs(vsin);

    // dense-grid comparison of V_n(G_α) against G_α
    let dense = 1usize << 18;
    let grid = CircleGrid::new(dense, false);
    let vn_values = grid.eval_trig(vn.cos_coeffs(), vn.sin_coeffs());
    let mask_dense = covered_mask(&stage1.collection, dense, false);
    let mut vn_defect = 0.0_f64;
    let mut vn_max = 0.0_f64;
    let mut vn_min_on_i = f64::INFINITY;
    for (j, &v) in vn_values.iter().enumerate() {
        let g = stage2.target.eval(grid.point(j));
        vn_defect = vn_defect.max((v - g).abs());
        vn_max = vn_max.max(v.abs());
        if mask_dense[j] {
            vn_min_on_i = vn_min_on_i.min(v.abs());
        }
    }
    if !vn_min_on_i.is_finite() {
        vn_min_on_i = 0.0;
    }

    // |P| on the certification grid, split by membership in ∪ℐ
    let (pgrid, pvalues) = poly.modulus_grid();
    let mask_p = covered_mask(&stage1.collection, pgrid.size(), true);
    let mut grid_min = f64::INFINITY;
    let mut grid_max = 0.0_f64;
    let mut p_min_on_i = f64::INFINITY;
    let mut p_min_off_i = f64::INFINITY;
    for (j, &v) in pvalues.iter().enumerate() {
        grid_min = grid_min.min(v);
        grid_max = grid_max.max(v);
        if mask_p[j] {
            p_min_on_i = p_min_on_i.min(v);
        } else {
            p_min_off_i = p_min_off_i.min(v);
        }
    }
    let certified_max = grid_max * trigcore::grid_safety_factor().sqrt();

    let s_o_cert = stage3.s_o.certified_sup_norm()?;
    let tol = 1e-6 * peak;

    let mut chain = Vec::new();
    let mut push = |id: &str, bound: f64, measured: f64, pass: bool| {
        chain.push(BoundChainEntry { id: id.to_string(), bound, measured, pass });
    };

    let vn_bound = 4.0 * peak / 5.0;
    push("vn-approximation", vn_bound, vn_defect, vn_defect <= vn_bound + tol);
    push("vn-lower-on-intervals", peak / 5.0, vn_min_on_i, vn_min_on_i >= peak / 5.0 - tol);
    push("vn-upper", 2.0 * peak, vn_max, vn_max <= 2.0 * peak + tol);
    let solver_ok = stage3.solver.all_satisfied;
    push(
        "sine-defect-grid",
        65.0 * sqrt_n,
        stage3.grid_defect,
        !solver_ok || stage3.grid_defect <= 65.0 * sqrt_n,
    );
    push(
        "sine-defect-lifted",
        66.0 * sqrt_n * trigcore::grid_safety_factor(),
        stage3.lifted_defect,
        !solver_ok || stage3.lifted_defect <= 66.0 * sqrt_n * trigcore::grid_safety_factor(),
    );
    push("cosine-norm", sqrt_n, stage1.cert.upper_bound, stage1.cert.upper_bound <= sqrt_n);
    push(
        "even-sine-norm",
        6.0 * sqrt_n,
        stage4.cert.upper_bound,
        stage4.cert.upper_bound <= 6.0 * sqrt_n,
    );
    let p_lower_bound = 2.0 * (peak / 5.0 - stage3.lifted_defect - stage3.clamp_loss_sum)
        - 2.0 * stage4.cert.upper_bound;
    push(
        "p-lower-on-intervals",
        p_lower_bound,
        p_min_on_i,
        !solver_ok || p_min_on_i >= p_lower_bound - tol,
    );
    let off_bound = 2.0 * stage1.threshold - 1.0;
    push("p-lower-off-intervals", off_bound, p_min_off_i, p_min_off_i >= off_bound - tol);
    let upper_bound = 1.0
        + 2.0 * stage1.cert.upper_bound
        + 2.0 * s_o_cert.upper_bound
        + 2.0 * stage4.cert.upper_bound;
    push("p-upper-triangle", upper_bound, certified_max, certified_max <= upper_bound + tol);

    Ok(FlatnessReport {
        n: cfg.n,
        m: stage1.cosine.m,
        mu: stage1.cosine.mu,
        gamma: stage1.cosine.gamma,
        amplitude: cfg.amplitude,
        certified_max,
        grid_min,
        eta1_measured: grid_min / (4.0 * nf).sqrt(),
        eta2_measured: certified_max / (4.0 * nf).sqrt(),
        component_norms: Some(ComponentNorms {
            cosine: stage1.cert.upper_bound,
            s_odd: s_o_cert.upper_bound,
            s_even: stage4.cert.upper_bound,
            vn_target_max: vn_max,
            b_max: stage2.b_max,
            rounding_defect: stage3.grid_defect,
            clamp_loss: stage3.clamp_loss_sum,
        }),
        symmetry: Some(symmetry_report(poly, stage1.cosine.mu)),
        bound_chain: chain,
        identity_residual: Some(residual),
        fallback: false,
    })
}

/// One line of the paper-constant arithmetic: integer coefficients of `√n`
/// (plus an integer constant), checked exactly.
#[derive(Clone, Debug, Serialize)]
pub struct PaperChainEntry {
    pub id: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub lhs_sqrt_coeff: i64,
    pub lhs_const: i64,
    pub rhs_sqrt_coeff: i64,
    pub rhs_const: i64,
    /// lhs equals rhs exactly
    pub exact: bool,
    /// lhs ≤ rhs (the chain direction)
    pub pass: bool,
}

/// The final-assembly arithmetic with paper-profile constants, reproduced in
/// exact integer arithmetic: the lower chain is an identity, the upper chain
/// rounds 2 + 2·1090 + 2·6 = 2194 up to the stated 2196.
pub fn paper_bound_chain() -> Vec<PaperChainEntry> {
    let lower_lhs = 2 * 36 - 2 * 6;
    let upper_lhs = 2 + 2 * 1090 + 2 * 6;
    vec![
        PaperChainEntry {
            id: "lower-on-intervals",
            lhs: "2*36*sqrt(n) - 2*6*sqrt(n)".into(),
            rhs: "60*sqrt(n)".into(),
            lhs_sqrt_coeff: lower_lhs,
            lhs_const: 0,
            rhs_sqrt_coeff: 60,
            rhs_const: 0,
            exact: lower_lhs == 60,
            pass: lower_lhs >= 60,
        },
        PaperChainEntry {
            id: "upper-everywhere",
            lhs: "1 + 2*sqrt(n) + 2*1090*sqrt(n) + 2*6*sqrt(n)".into(),
            rhs: "1 + 2196*sqrt(n)".into(),
            lhs_sqrt_coeff: upper_lhs,
            lhs_const: 1,
            rhs_sqrt_coeff: 2196,
            rhs_const: 1,
            exact: upper_lhs == 2196,
            pass: upper_lhs <= 2196,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mini_cfg() -> PipelineConfig {
        // small profile exercising every stage: n = 2000 puts m = 1
        // (γ = 9/2000) inside the window [2^-9, 2^-6); the 400 base
        // intervals comfortably exceed the 34 cosine zeros
        PipelineConfig {
            n: 2000,
            gamma_window: (2f64.powi(-9), 2f64.powi(-6)),
            amplitude: 8.0,
            profile: Profile::Desk,
            seed: 11,
            max_restarts: 20,
            // at this scale the Bernstein classification margin is larger
            // than 1e-3 of the norm; a higher ratio keeps the bad set
            // confined to the actual zeros of the cosine
            threshold_ratio: 0.02,
        }
    }

    #[test]
    fn config_validation() {
        assert!(PipelineConfig::desk(10240, 0).validate().is_ok());
        assert!(PipelineConfig::desk(10241, 0).validate().is_err());
    }

    #[test]
    fn paper_profile_is_refused_with_diagnostic() {
        let cfg = PipelineConfig::paper(10240, 0);
        match generate(&cfg) {
            Err(Error::PaperProfile(msg)) => assert!(msg.contains("e22"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_n_fallback() {
        let cfg = PipelineConfig::desk(10, 0);
        let run = generate(&cfg).unwrap();
        assert!(run.fallback);
        assert_eq!(run.poly.degree(), 40);
        assert_eq!(run.poly.coeffs()[0], 1);
        assert!(run.poly.coeffs()[1..].iter().all(|&c| c == -1));
        assert!(run.report.fallback);
        assert!(run.report.certified_max >= run.report.grid_min);
    }

    #[test]
    fn even_sine_stage_structure() {
        // μ = n: a single term of norm 1
        let s = even_sine_stage(20, 20).unwrap();
        assert_eq!(s.s_e.degree(), 40);
        assert!(s.cert.upper_bound <= 1.0 * trigcore::grid_safety_factor() + 1e-12);
        assert!(s.cert.lower_bound > 0.99);

        // coefficients match the complex prefix-difference oracle
        let n = 20u64;
        let mu = 5usize;
        let s = even_sine_stage(n, mu).unwrap();
        for k in 0..=(n as usize) {
            let expect = if k >= mu { s.prefix[k] as f64 } else { 0.0 };
            assert_eq!(s.s_e.b(2 * k), expect, "k={k}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t: f64 = rng.gen_range(0.0..2.0 * PI);
            let oracle = rudin_shapiro::prefix_eval(n as usize + 1, 2.0 * t).im
                - rudin_shapiro::prefix_eval(mu, 2.0 * t).im;
            assert!((s.s_e.eval(t) - oracle).abs() < 1e-9);
        }
        // ‖s_e‖ ≤ 5√(n+1) + 5√μ
        assert!(s.cert.upper_bound <= 5.0 * 21f64.sqrt() + 5.0 * 5f64.sqrt());
    }

    #[test]
    fn coefficient_string_round_trip() {
        let p = LittlewoodPoly::parse("+-+").unwrap();
        assert_eq!(p.coeffs(), &[1, -1, 1]);
        assert_eq!(p.coeff_string(), "+-+");
        // unicode minus accepted
        assert_eq!(LittlewoodPoly::parse("+−+").unwrap(), p);
        assert!(matches!(
            LittlewoodPoly::parse("+x"),
            Err(Error::BadCoefficientChar { found: 'x', position: 1 })
        ));
        assert!(matches!(LittlewoodPoly::parse(""), Err(Error::EmptyCoefficients)));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "\"+-+\"");
        let back: LittlewoodPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn mini_pipeline_end_to_end() {
        let cfg = mini_cfg();
        let run = generate(&cfg).unwrap();
        assert!(!run.fallback);
        let n = cfg.n as usize;
        assert_eq!(run.poly.coeffs().len(), 4 * n + 1);
        assert!(run.poly.coeffs().iter().all(|&c| c == 1 || c == -1));
        assert_eq!(run.poly.coeffs()[2 * n], 1);

        let report = &run.report;
        assert_eq!(report.m, 1);
        assert_eq!(report.mu, 18);
        let symmetry = report.symmetry.as_ref().unwrap();
        assert_eq!(symmetry.center_width, 35);
        assert!(symmetry.antisymmetric_ok);
        assert!(symmetry.center_ok);
        assert!(report.identity_residual.unwrap() <= 1e-8 * (n as f64).sqrt());
        assert!(report.eta2_measured >= report.eta1_measured);
        for entry in &report.bound_chain {
            assert!(entry.pass, "bound chain entry failed: {entry:?}");
        }

        // determinism: bit-identical reproduction
        let again = generate(&cfg).unwrap();
        assert_eq!(run.poly, again.poly);
        assert_eq!(
            serde_json::to_string(&run.report).unwrap(),
            serde_json::to_string(&again.report).unwrap()
        );

        // artifact serializes and round-trips
        let json = serde_json::to_string(&run).unwrap();
        let back: RunArtifact = serde_json::from_str(&json).unwrap();
        assert_eq!(back.poly, run.poly);

        // measured symmetry scan agrees with the constructed zone
        let measured = measured_symmetry(&run.poly).unwrap();
        assert_eq!(measured.center_width, 35);
        assert!(measured.antisymmetric_ok && measured.center_ok);
    }

    #[test]
    fn mini_pipeline_stage_properties() {
        let cfg = mini_cfg();
        let stage1 = cosine_stage(&cfg).unwrap();
        assert!(stage1.properties.all_pass());
        assert!(!stage1.collection.is_empty());
        // the axis zones always get excised (c vanishes at π/2)
        assert!(!stage1.excluded.is_empty());
        // every run of 400 consecutive intervals contains a good one
        assert!(stage1.collection.runs().iter().all(|r| r.len <= 399));
        // run count bound from the zero-counting argument
        assert!(stage1.collection.runs().len() <= 2 * stage1.cosine.mu * 2);

        let stage2 = coloring_stage(&stage1, &cfg).unwrap();
        let solver = stage2.solver.as_ref().unwrap();
        assert!(solver.entropy_pass);
        assert!(solver.all_satisfied);
        assert_eq!(stage2.b.len(), cfg.n as usize);

        let stage3 = sine_stage(&stage2, &cfg).unwrap();
        assert!(stage3.epsilon.iter().all(|&e| e == 1 || e == -1));
        assert!(stage3.solver.entropy_pass);
        assert!(stage3.solver.all_satisfied);
        // the full 4L grid adds nothing beyond the first L points
        assert!((stage3.full_grid_defect - stage3.grid_defect).abs() <= 1e-9 * stage3.grid_defect.max(1.0));
        assert!(stage3.grid_defect <= 65.0 * (cfg.n as f64).sqrt());
        // ε̃ really is clamped V_n coefficients
        for (k, &et) in stage3.epsilon_tilde.iter().enumerate() {
            let raw = trigcore::vallee_poussin_weight(cfg.n as usize, 2 * k + 1) * stage2.b[k];
            assert_eq!(et, raw.clamp(-1.0, 1.0));
        }
    }

    #[test]
    fn assembly_rejects_support_conflicts() {
        let cfg = mini_cfg();
        let stage1 = cosine_stage(&cfg).unwrap();
        let stage2 = coloring_stage(&stage1, &cfg).unwrap();
        let stage3 = sine_stage(&stage2, &cfg).unwrap();
        // wrong μ creates a gap (too large) or an overlap (too small)
        let bad_even = even_sine_stage(cfg.n, stage1.cosine.mu + 1).unwrap();
        assert!(matches!(
            assemble(&stage1.cosine, &stage3, &bad_even, &cfg),
            Err(Error::SupportConflict { .. })
        ));
        let bad_even = even_sine_stage(cfg.n, stage1.cosine.mu - 1).unwrap();
        assert!(matches!(
            assemble(&stage1.cosine, &stage3, &bad_even, &cfg),
            Err(Error::SupportConflict { .. })
        ));
    }

    #[test]
    fn paper_chain_is_exact_integer_arithmetic() {
        let chain = paper_bound_chain();
        assert_eq!(chain.len(), 2);
        assert!(chain[0].exact);
        assert!(chain[0].pass);
        assert_eq!(chain[0].lhs_sqrt_coeff, 60);
        // the paper rounds 2194 up to 2196; the inequality is exact
        assert!(!chain[1].exact);
        assert!(chain[1].pass);
        assert_eq!(chain[1].lhs_sqrt_coeff, 2194);
        assert_eq!(chain[1].rhs_sqrt_coeff, 2196);
    }

    #[test]
    fn analyze_standalone() {
        // the constant polynomial 1: modulus exactly 1 on the whole circle
        let p = LittlewoodPoly::parse("+").unwrap();
        let report = analyze_littlewood(&p);
        assert!(report.grid_min > 1.0 - 1e-12);
        assert!(report.certified_max >= 1.0 && report.certified_max < 1.01);
        assert!(report.component_norms.is_none());

        // 1 - z + z² vanishes at e^{iπ/3}: the grid minimum is tiny
        let p = LittlewoodPoly::parse("+-+").unwrap();
        let report = analyze_littlewood(&p);
        assert!(report.grid_min < 0.05);
        assert!(report.certified_max > 2.9);
    }
}
