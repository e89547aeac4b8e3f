//! Brute-force oracles: exhaustive flattest search over small-degree ±1
//! polynomials (optionally restricted to a symmetry class) and unit-circle
//! zero verification for the self-reciprocal class.

use crate::flatgen::LittlewoodPoly;
use crate::grid::CircleGrid;
use crate::trigcore;
use crate::{Error, Result};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    All,
    SelfReciprocal,
    SkewReciprocal,
}

impl SymmetryClass {
    /// Exact membership check. Skew-reciprocal uses the convention
    /// `a_j = (−1)^j a_{d−j}`.
    pub fn member(&self, coeffs: &[i8]) -> bool {
        let d = coeffs.len() - 1;
        match self {
            SymmetryClass::All => true,
            SymmetryClass::SelfReciprocal => {
                (0..=d).all(|j| coeffs[j] == coeffs[d - j])
            }
            SymmetryClass::SkewReciprocal => {
                (0..=d).all(|j| coeffs[j] == if j % 2 == 0 { coeffs[d - j] } else { -coeffs[d - j] })
            }
        }
    }
}

fn horner_modulus(coeffs: &[i8], t: f64) -> f64 {
    let z = Complex64::from_polar(1.0, t);
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + Complex64::new(c as f64, 0.0))
        .norm()
}

fn golden_section_min(coeffs: &[i8], mut a: f64, mut b: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = horner_modulus(coeffs, c);
    let mut fd = horner_modulus(coeffs, d);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = horner_modulus(coeffs, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = horner_modulus(coeffs, d);
        }
    }
    fc.min(fd)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioStats {
    pub grid_min: f64,
    /// golden-section refinement around the grid argmin
    pub refined_min: f64,
    pub certified_max: f64,
    /// `certified_max / refined_min` (infinite when the minimum vanishes)
    pub ratio: f64,
}

/// Modulus extremes on the degree-matched grid (`4L` points, `L = 32·d`)
/// with the minimum sharpened by golden-section search.
pub fn modulus_extremes(coeffs: &[i8]) -> RatioStats {
    let d = coeffs.len() - 1;
    let size = 128 * d.max(1);
    let grid = CircleGrid::new(size, true);
    let complex: Vec<Complex64> =
        coeffs.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect();
    let values = grid.eval(&complex);
    let mut grid_min = f64::INFINITY;
    let mut grid_max = 0.0_f64;
    let mut argmin = 0usize;
    for (j, v) in values.iter().enumerate() {
        let m = v.norm();
        if m < grid_min {
            grid_min = m;
            argmin = j;
        }
        grid_max = grid_max.max(m);
    }
    let h = 2.0 * PI / size as f64;
    let t0 = grid.point(argmin);
    let refined_min = golden_section_min(coeffs, t0 - h, t0 + h).min(grid_min);
    let certified_max = grid_max * trigcore::grid_safety_factor().sqrt();
    // a refined minimum at rounding scale is a circle zero
    let ratio = if refined_min > 1e-9 * certified_max {
        certified_max / refined_min
    } else {
        f64::INFINITY
    };
    RatioStats { grid_min, refined_min, certified_max, ratio }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HistogramBin {
    /// inclusive upper edge of the ratio bin (the last bin is unbounded)
    pub upper: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    pub degree: usize,
    pub class: SymmetryClass,
    pub best_coeffs: LittlewoodPoly,
    pub best_ratio: f64,
    pub best_stats: RatioStats,
    pub histogram: Vec<HistogramBin>,
    /// number of polynomials scanned (leading coefficient fixed to +1)
    pub enumerated: usize,
}

const HISTOGRAM_EDGES: [f64; 8] = [1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0, f64::INFINITY];

/// Free coefficient positions for a symmetry class at degree `d`; the
/// remaining positions are determined (`a_0 = +1` is always fixed since `P`
/// and `−P` share a modulus). Skew-reciprocal polynomials exist only when
/// `4 | d` (the relation at `j` and `d−j` forces `d` even, and the middle
/// coefficient forces `d/2` even).
fn free_positions(d: usize, class: SymmetryClass) -> Result<Vec<usize>> {
    match class {
        SymmetryClass::All => Ok((1..=d).collect()),
        SymmetryClass::SelfReciprocal => Ok((1..=d / 2).collect()),
        SymmetryClass::SkewReciprocal => {
            if !d.is_multiple_of(4) {
                return Err(Error::EmptySymmetryClass { degree: d });
            }
            Ok((1..=d / 2).collect())
        }
    }
}

fn complete(coeffs: &mut [i8], class: SymmetryClass) {
    let d = coeffs.len() - 1;
    if class == SymmetryClass::All {
        return;
    }
    for j in 0..=d / 2 {
        let mirrored = match class {
            SymmetryClass::SelfReciprocal => coeffs[j],
            SymmetryClass::SkewReciprocal => {
                if j % 2 == 0 {
                    coeffs[j]
                } else {
                    -coeffs[j]
                }
            }
            SymmetryClass::All => unreachable!(),
        };
        coeffs[d - j] = mirrored;
    }
}

/// Exhaustive scan of a symmetry class at degree `d`, minimizing the
/// flatness ratio. Deterministic: ties break toward the lexicographically
/// smaller coefficient vector.
pub fn enumerate_flattest(degree: usize, class: SymmetryClass) -> Result<SearchResult> {
    if degree == 0 {
        return Err(Error::DegreeTooSmall);
    }
    let free = free_positions(degree, class)?;
    if free.len() >= 26 {
        return Err(Error::TooLarge {
            what: "enumeration size",
            size: 1u64 << free.len().min(63),
            limit: 1 << 26,
        });
    }
    let mut histogram: Vec<HistogramBin> =
        HISTOGRAM_EDGES.iter().map(|&upper| HistogramBin { upper, count: 0 }).collect();
    let mut best: Option<(f64, Vec<i8>, RatioStats)> = None;
    let mut coeffs = vec![1i8; degree + 1];
    let total = 1usize << free.len();
    for mask in 0..total {
        for (bit, &pos) in free.iter().enumerate() {
            coeffs[pos] = if mask >> bit & 1 == 1 { -1 } else { 1 };
        }
        complete(&mut coeffs, class);
        debug_assert!(class.member(&coeffs));
        let stats = modulus_extremes(&coeffs);
        let bin = histogram.iter_mut().find(|b| stats.ratio <= b.upper).unwrap();
        bin.count += 1;
        let better = match &best {
            None => true,
            Some((r, c, _)) => {
                stats.ratio < *r || (stats.ratio == *r && coeffs.as_slice() < c.as_slice())
            }
        };
        if better {
            best = Some((stats.ratio, coeffs.clone(), stats));
        }
    }
    let (best_ratio, best_coeffs, best_stats) = best.unwrap();
    Ok(SearchResult {
        degree,
        class,
        best_coeffs: LittlewoodPoly::new(best_coeffs)?,
        best_ratio,
        best_stats,
        histogram,
        enumerated: total,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroCheckRow {
    pub degree: usize,
    pub checked: usize,
    pub all_have_zero: bool,
    /// how the zeros were found at this degree
    pub method: String,
    /// coefficient strings of any polynomial with no detected zero
    pub witnesses: Vec<String>,
}

/// Verifies that every self-reciprocal ±1 polynomial up to `max_degree` has
/// a unit-circle zero. Even degree: `z^{−d/2}P(z)` is real on the circle,
/// so a sign change on a 2^12 grid is a zero witness (falling back to a
/// refined minimum below `10^-6·√d`). Odd degree: the symmetry forces
/// `P(−1) = 0` exactly.
pub fn self_reciprocal_zero_check(max_degree: usize) -> Result<Vec<ZeroCheckRow>> {
    if max_degree > 20 {
        return Err(Error::TooLarge { what: "max_degree", size: max_degree as u64, limit: 20 });
    }
    let grid_size = 1usize << 12;
    let mut rows = Vec::new();
    for d in 1..=max_degree {
        let free = free_positions(d, SymmetryClass::SelfReciprocal)?;
        let total = 1usize << free.len();
        if d % 2 == 1 {
            // a_j = a_{d−j} pairs terms of opposite parity at z = −1
            let mut coeffs = vec![1i8; d + 1];
            for mask in 0..total {
                for (bit, &pos) in free.iter().enumerate() {
                    coeffs[pos] = if mask >> bit & 1 == 1 { -1 } else { 1 };
                }
                complete(&mut coeffs, SymmetryClass::SelfReciprocal);
                let at_minus_one: i64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| if j % 2 == 0 { c as i64 } else { -(c as i64) })
                    .sum();
                assert_eq!(at_minus_one, 0);
            }
            rows.push(ZeroCheckRow {
                degree: d,
                checked: total,
                all_have_zero: true,
                method: "factor (z+1)".into(),
                witnesses: vec![],
            });
            continue;
        }
        let half = d / 2;
        let mut witnesses = Vec::new();
        let mut coeffs = vec![1i8; d + 1];
        for mask in 0..total {
            for (bit, &pos) in free.iter().enumerate() {
                coeffs[pos] = if mask >> bit & 1 == 1 { -1 } else { 1 };
            }
            complete(&mut coeffs, SymmetryClass::SelfReciprocal);
            // f(t) = e^{−i·half·t} P(e^{it}) = a_half + 2 Σ_{j<half} a_j cos((half−j)t)
            let mut sign_change = false;
            let mut prev = 0.0_f64;
            for r in 0..=grid_size {
                let t = 2.0 * PI * r as f64 / grid_size as f64;
                let mut f = coeffs[half] as f64;
                for (j, &a) in coeffs.iter().take(half).enumerate() {
                    f += 2.0 * a as f64 * ((half - j) as f64 * t).cos();
                }
                if r > 0 && (f == 0.0 || f.signum() != prev.signum()) {
                    sign_change = true;
                    break;
                }
                prev = f;
            }
            if !sign_change {
                let stats = modulus_extremes(&coeffs);
                if stats.refined_min > 1e-6 * (d as f64).sqrt() {
                    witnesses.push(LittlewoodPoly::new(coeffs.clone())?.coeff_string());
                }
            }
        }
        rows.push(ZeroCheckRow {
            degree: d,
            checked: total,
            all_have_zero: witnesses.is_empty(),
            method: "sign change of the real normalization".into(),
            witnesses,
        });
    }
    Ok(rows)
}
