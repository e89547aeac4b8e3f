//! Evaluation of polynomials on uniform circle grids.
//!
//! Every certification grid in this crate is of one of two shapes:
//!
//! * plain: `t_j = 2πj/N`, `j = 0..N-1`;
//! * half-offset: `t_j = (2j+1)π/N`, `j = 0..N-1`, which is the
//!   `t_r = (2r-1)π/(4L)` grid with `N = 4L` and `j = r-1`.
//!
//! Evaluating `Σ_k c_k e^{ikt_j}` on either grid is a single unnormalized
//! inverse DFT of the (twiddled) coefficient vector, so grids of a few
//! million points are cheap even at degree `4n ≈ 41000`.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct CircleGrid {
    size: usize,
    half_offset: bool,
    fft: Arc<dyn Fft<f64>>,
}

impl CircleGrid {
    pub fn new(size: usize, half_offset: bool) -> Self {
        assert!(size > 0);
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_inverse(size);
        CircleGrid { size, half_offset, fft }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Grid point for output index `j`.
    pub fn point(&self, j: usize) -> f64 {
        if self.half_offset {
            (2 * j + 1) as f64 * std::f64::consts::PI / self.size as f64
        } else {
            2.0 * std::f64::consts::PI * j as f64 / self.size as f64
        }
    }

    /// Values of `Σ_k coeffs[k] e^{i k t_j}` at every grid point.
    pub fn eval(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert!(
            coeffs.len() <= self.size,
            "grid of {} points cannot resolve {} coefficients",
            self.size,
            coeffs.len()
        );
        let mut buf = vec![Complex64::new(0.0, 0.0); self.size];
        if self.half_offset {
            let step = std::f64::consts::PI / self.size as f64;
            for (k, &c) in coeffs.iter().enumerate() {
                let phase = Complex64::from_polar(1.0, k as f64 * step);
                buf[k] = c * phase;
            }
        } else {
            buf[..coeffs.len()].copy_from_slice(coeffs);
        }
        self.fft.process(&mut buf);
        buf
    }

    /// Values of a real trigonometric polynomial
    /// `a_0 + Σ_k (a_k cos(kt) + b_k sin(kt))` at every grid point.
    ///
    /// `sin_coeffs` is indexed from frequency 1 (as in `TrigPoly`).
    pub fn eval_trig(&self, cos_coeffs: &[f64], sin_coeffs: &[f64]) -> Vec<f64> {
        let coeffs: Vec<Complex64> = cos_coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let b = if k == 0 { 0.0 } else { sin_coeffs[k - 1] };
                // Re((a - ib) e^{ikt}) = a cos(kt) + b sin(kt)
                Complex64::new(a, -b)
            })
            .collect();
        self.eval(&coeffs).into_iter().map(|z| z.re).collect()
    }
}
