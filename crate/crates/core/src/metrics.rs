//! Cover/stego image quality: MSE, PSNR, windowed SSIM, the quality index Q,
//! and the composite fitness Z = 0.5*SSIM + 0.5*PSNR/100.

use crate::buffer::{ImageBuffer, CHANNELS};
use crate::error::MetricsError;

/// Side length of the non-overlapping SSIM/Q windows.
pub const DEFAULT_WINDOW: usize = 8;

/// PSNR reported for a zero-MSE pair; keeps PSNR/100 inside [0, 1].
pub const PSNR_CAP_DB: f64 = 100.0;

/// SSIM stabilizer c1 = (0.01 * 255)^2.
pub const C1: f64 = 6.5025;

/// SSIM stabilizer c2 = (0.03 * 255)^2.
pub const C2: f64 = 58.5225;

/// Weight of the SSIM term in the composite fitness.
pub const FITNESS_ETA: f64 = 0.5;

/// Per-window first and second moments of a cover/stego channel pair.
#[derive(Debug, Clone, Copy)]
pub struct SsimWindowStats {
    pub mean_u: f64,
    pub mean_v: f64,
    pub var_u: f64,
    pub var_v: f64,
    pub cov_uv: f64,
}

impl SsimWindowStats {
    fn ssim(&self) -> f64 {
        ((2.0 * self.mean_u * self.mean_v + C1) * (2.0 * self.cov_uv + C2))
            / ((self.mean_u * self.mean_u + self.mean_v * self.mean_v + C1)
                * (self.var_u + self.var_v + C2))
    }

    /// Unstabilized quality index; `None` when a denominator factor is zero.
    fn q(&self) -> Option<f64> {
        let lum = self.mean_u * self.mean_u + self.mean_v * self.mean_v;
        let con = self.var_u + self.var_v;
        if lum == 0.0 || con == 0.0 {
            None
        } else {
            Some(4.0 * self.cov_uv * self.mean_u * self.mean_v / (lum * con))
        }
    }
}

/// All metrics for a cover/stego pair.
#[derive(Debug, Clone)]
pub struct QualityReport {
    pub mse: f64,
    pub psnr_db: f64,
    pub ssim: f64,
    /// `None` when every window has a zero denominator (constant images).
    pub q_index: Option<f64>,
    pub fitness_z: f64,
}

impl QualityReport {
    pub fn compute(cover: &ImageBuffer, stego: &ImageBuffer) -> Result<Self, MetricsError> {
        Self::compute_windowed(cover, stego, DEFAULT_WINDOW)
    }

    pub fn compute_windowed(
        cover: &ImageBuffer,
        stego: &ImageBuffer,
        window: usize,
    ) -> Result<Self, MetricsError> {
        let mse_v = mse(cover, stego)?;
        let psnr_v = psnr_from_mse(mse_v);
        let ssim_v = ssim(cover, stego, window)?;
        let q_v = q_index(cover, stego, window).ok();
        Ok(Self {
            mse: mse_v,
            psnr_db: psnr_v,
            ssim: ssim_v,
            q_index: q_v,
            fitness_z: combine_fitness(ssim_v, psnr_v),
        })
    }
}

fn check_shapes(a: &ImageBuffer, b: &ImageBuffer) -> Result<(), MetricsError> {
    if !a.same_shape(b) {
        return Err(MetricsError::ShapeMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}

/// Mean squared difference over all channel samples.
pub fn mse(cover: &ImageBuffer, stego: &ImageBuffer) -> Result<f64, MetricsError> {
    check_shapes(cover, stego)?;
    let sum: u64 = cover
        .data()
        .iter()
        .zip(stego.data())
        .map(|(a, b)| {
            let d = *a as i64 - *b as i64;
            (d * d) as u64
        })
        .sum();
    Ok(sum as f64 / cover.total_samples() as f64)
}

/// `20*log10(255) - 10*log10(mse)` in decibels, capped at 100 when mse = 0.
pub fn psnr(cover: &ImageBuffer, stego: &ImageBuffer) -> Result<f64, MetricsError> {
    Ok(psnr_from_mse(mse(cover, stego)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse <= 0.0 {
        PSNR_CAP_DB
    } else {
        20.0 * 255f64.log10() - 10.0 * mse.log10()
    }
}

fn check_window(img: &ImageBuffer, window: usize) -> Result<(), MetricsError> {
    if window < 2 || window > img.width() || window > img.height() {
        return Err(MetricsError::BadWindow {
            window,
            width: img.width(),
            height: img.height(),
        });
    }
    Ok(())
}

/// Visits every non-overlapping window of every channel, in channel-major,
/// row-major order. Trailing partial windows are included with their actual
/// sizes. Deterministic reduction order.
fn for_each_window<F: FnMut(SsimWindowStats)>(
    cover: &ImageBuffer,
    stego: &ImageBuffer,
    window: usize,
    mut visit: F,
) {
    let (w, h) = (cover.width(), cover.height());
    for channel in 0..CHANNELS {
        for wy in (0..h).step_by(window) {
            let wh = window.min(h - wy);
            for wx in (0..w).step_by(window) {
                let ww = window.min(w - wx);
                let mut su = 0.0f64;
                let mut sv = 0.0f64;
                let mut suu = 0.0f64;
                let mut svv = 0.0f64;
                let mut suv = 0.0f64;
                for y in wy..wy + wh {
                    for x in wx..wx + ww {
                        let u = cover.sample(x, y, channel) as f64;
                        let v = stego.sample(x, y, channel) as f64;
                        su += u;
                        sv += v;
                        suu += u * u;
                        svv += v * v;
                        suv += u * v;
                    }
                }
                let n = (ww * wh) as f64;
                let mean_u = su / n;
                let mean_v = sv / n;
                visit(SsimWindowStats {
                    mean_u,
                    mean_v,
                    var_u: (suu / n - mean_u * mean_u).max(0.0),
                    var_v: (svv / n - mean_v * mean_v).max(0.0),
                    cov_uv: suv / n - mean_u * mean_v,
                });
            }
        }
    }
}

/// Mean SSIM over non-overlapping windows of all three channels.
pub fn ssim(cover: &ImageBuffer, stego: &ImageBuffer, window: usize) -> Result<f64, MetricsError> {
    check_shapes(cover, stego)?;
    check_window(cover, window)?;
    let mut total = 0.0;
    let mut count = 0usize;
    for_each_window(cover, stego, window, |stats| {
        total += stats.ssim();
        count += 1;
    });
    Ok(total / count as f64)
}

/// Mean quality index Q over the windows whose denominators are nonzero.
/// Errors when every window is degenerate.
pub fn q_index(
    cover: &ImageBuffer,
    stego: &ImageBuffer,
    window: usize,
) -> Result<f64, MetricsError> {
    check_shapes(cover, stego)?;
    check_window(cover, window)?;
    let mut total = 0.0;
    let mut contributing = 0usize;
    for_each_window(cover, stego, window, |stats| {
        if let Some(q) = stats.q() {
            total += q;
            contributing += 1;
        }
    });
    if contributing == 0 {
        return Err(MetricsError::UndefinedMetric);
    }
    Ok(total / contributing as f64)
}

/// Composite fitness `eta*ssim + (1 - eta)*psnr/100` with eta = 0.5.
pub fn fitness_z(cover: &ImageBuffer, stego: &ImageBuffer) -> Result<f64, MetricsError> {
    fitness_z_windowed(cover, stego, DEFAULT_WINDOW)
}

/// `fitness_z` with an explicit SSIM window (the embedding engine clamps the
/// window for covers narrower than the default).
pub fn fitness_z_windowed(
    cover: &ImageBuffer,
    stego: &ImageBuffer,
    window: usize,
) -> Result<f64, MetricsError> {
    let s = ssim(cover, stego, window)?;
    let p = psnr(cover, stego)?;
    Ok(combine_fitness(s, p))
}

pub fn combine_fitness(ssim: f64, psnr_db: f64) -> f64 {
    FITNESS_ETA * ssim + (1.0 - FITNESS_ETA) * psnr_db / 100.0
}
