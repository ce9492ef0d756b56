//! Non-coherent energy detection of on-off keying.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::complex_gaussian;
use crate::error::{Error, Result};

/// Largest antenna count for joint energy detection (`2^8` hypotheses).
pub const ED_JOINT_MAX_ANTENNAS: usize = 8;

/// Calibration sample count used by [`ThresholdPolicy::for_noise`].
pub const DEFAULT_CALIBRATION_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPolicy {
    Fixed(f64),
    /// Midpoint of the two noiseless energy levels.
    Midpoint,
    /// Minimises the empirical error rate over `samples` seeded calibration
    /// draws (half per level) at noise power `n0`.
    Optimized {
        n0: f64,
        samples: usize,
        seed: u64,
    },
}

impl ThresholdPolicy {
    /// Optimized when the noise power is known, midpoint otherwise.
    pub fn for_noise(n0: Option<f64>) -> Self {
        match n0 {
            Some(n0) if n0 > 0.0 => ThresholdPolicy::Optimized {
                n0,
                samples: DEFAULT_CALIBRATION_SAMPLES,
                seed: 0x0e_d0_0c,
            },
            _ => ThresholdPolicy::Midpoint,
        }
    }

    /// Threshold for the noiseless amplitudes `a0` (bit 0) and `a1` (bit 1).
    pub fn resolve(&self, a0: Complex64, a1: Complex64) -> f64 {
        let (e0, e1) = (a0.norm_sqr(), a1.norm_sqr());
        match *self {
            ThresholdPolicy::Fixed(t) => t,
            ThresholdPolicy::Midpoint => (e0 + e1) / 2.0,
            ThresholdPolicy::Optimized { n0, samples, seed } => {
                calibrate_threshold(a0, a1, n0, samples, seed)
            }
        }
    }
}

/// Sweeps every cut point of the pooled calibration energies and returns the
/// midpoint of the cut with the fewest errors.
pub fn calibrate_threshold(
    a0: Complex64,
    a1: Complex64,
    n0: f64,
    samples: usize,
    seed: u64,
) -> f64 {
    let (e0, e1) = (a0.norm_sqr(), a1.norm_sqr());
    if !(n0 > 0.0) || samples < 2 {
        return (e0 + e1) / 2.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = (n0 / 2.0).sqrt();
    let half = samples / 2;
    let mut pool: Vec<(f64, bool)> = Vec::with_capacity(2 * half);
    for _ in 0..half {
        pool.push(((a0 + complex_gaussian(&mut rng, sigma)).norm_sqr(), false));
        pool.push(((a1 + complex_gaussian(&mut rng, sigma)).norm_sqr(), true));
    }
    pool.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ones_total = pool.iter().filter(|p| p.1).count();
    // Cut after position i: ones below it are misses, zeros above are false alarms.
    let mut ones_below = 0usize;
    let mut zeros_below = 0usize;
    let zeros_total = pool.len() - ones_total;
    let mut best = (zeros_total, 0usize); // cut before everything
    for (i, &(_, one)) in pool.iter().enumerate() {
        if one {
            ones_below += 1;
        } else {
            zeros_below += 1;
        }
        let errors = ones_below + (zeros_total - zeros_below);
        if errors < best.0 {
            best = (errors, i + 1);
        }
    }
    match best.1 {
        0 => pool[0].0 / 2.0,
        n if n >= pool.len() => pool[pool.len() - 1].0 * 2.0,
        n => (pool[n - 1].0 + pool[n].0) / 2.0,
    }
}

/// `1` where `|y|^2 > threshold`.
pub fn energy_detect(y: &[Complex64], threshold: f64) -> Vec<u8> {
    y.iter().map(|s| (s.norm_sqr() > threshold) as u8).collect()
}

/// Independent per-antenna decisions for an `N x N` OOK link. Antenna `m`
/// uses the noiseless levels `0` and `sqrt(2) h_mm`. Output bits are
/// column-major: antenna order within each symbol period.
pub fn energy_detect_per_antenna(
    y: &DMatrix<Complex64>,
    h: &DMatrix<Complex64>,
    policy: &ThresholdPolicy,
) -> Result<Vec<u8>> {
    if y.nrows() != h.nrows() || h.nrows() != h.ncols() {
        return Err(Error::Dimension(format!(
            "per-antenna detection needs square H matching Y rows (H {}x{}, Y {} rows)",
            h.nrows(),
            h.ncols(),
            y.nrows()
        )));
    }
    let on = Complex64::new(2f64.sqrt(), 0.0);
    let thresholds: Vec<f64> = (0..h.nrows())
        .map(|m| policy.resolve(Complex64::new(0.0, 0.0), h[(m, m)] * on))
        .collect();
    energy_detect_columns(y, &thresholds)
}

/// Row `m` of `y` compared against `thresholds[m]`; bits column-major.
pub fn energy_detect_columns(y: &DMatrix<Complex64>, thresholds: &[f64]) -> Result<Vec<u8>> {
    if thresholds.len() != y.nrows() {
        return Err(Error::Dimension(format!(
            "{} thresholds for {} rows",
            thresholds.len(),
            y.nrows()
        )));
    }
    let mut out = Vec::with_capacity(y.len());
    for col in y.column_iter() {
        for (s, t) in col.iter().zip(thresholds) {
            out.push((s.norm_sqr() > *t) as u8);
        }
    }
    Ok(out)
}

/// Joint OOK decision on received energies.
///
/// Per column of `energies` (`M x K`, entries `|y_m|^2`), chooses the OOK
/// vector `x` in `{0, sqrt 2}^N` minimising
/// `sum_m (e_m - |(H x)_m|^2 - n0)^2`, ties to the lowest bit pattern
/// (antenna 0 is the MSB). This squared-residual metric treats the
/// post-detection noise as Gaussian with mean `n0`.
pub fn ed_mimo_joint(energies: &DMatrix<f64>, h: &DMatrix<Complex64>, n0: f64) -> Result<Vec<u8>> {
    let n = h.ncols();
    if n > ED_JOINT_MAX_ANTENNAS {
        return Err(Error::HypothesisBudget {
            count: 1u128 << n,
            budget: 1u128 << ED_JOINT_MAX_ANTENNAS,
        });
    }
    if energies.nrows() != h.nrows() {
        return Err(Error::Dimension(format!(
            "{} energy rows, H has {}",
            energies.nrows(),
            h.nrows()
        )));
    }
    let amp = 2f64.sqrt();
    let expected: Vec<Vec<f64>> = (0..1usize << n)
        .map(|p| {
            (0..h.nrows())
                .map(|m| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..n {
                        if (p >> (n - 1 - a)) & 1 == 1 {
                            acc += h[(m, a)] * amp;
                        }
                    }
                    acc.norm_sqr() + n0
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(energies.ncols() * n);
    for col in energies.column_iter() {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (p, e) in expected.iter().enumerate() {
            let d: f64 = col.iter().zip(e).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
        crate::bits::push_index(best, n, &mut out);
    }
    Ok(out)
}

/// `|y|^2` element-wise.
pub fn energies(y: &DMatrix<Complex64>) -> DMatrix<f64> {
    y.map(|s| s.norm_sqr())
}
