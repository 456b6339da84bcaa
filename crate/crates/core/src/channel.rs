//! Rayleigh fast fading with AWGN and Eb/N0 bookkeeping.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Operating point of one BER measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub code_rate: f64,
    pub bits_per_symbol: usize,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, code_rate: f64, bits_per_symbol: usize) -> Result<Self> {
        let p = ChannelParams {
            ebn0_db,
            code_rate,
            bits_per_symbol,
        };
        p.n0()?;
        Ok(p)
    }

    /// Complex noise variance for unit-energy symbols; `n0 / 2` per dimension.
    pub fn n0(&self) -> Result<f64> {
        noise_variance(self)
    }
}

/// `1 / (R * bps * 10^(Eb/N0 / 10))`; Eb counts information bits only.
pub fn noise_variance(params: &ChannelParams) -> Result<f64> {
    if !(params.code_rate > 0.0 && params.code_rate <= 1.0) {
        return Err(Error::Config(format!("code rate {} outside (0, 1]", params.code_rate)));
    }
    if params.bits_per_symbol == 0 {
        return Err(Error::Config("bits per symbol must be >= 1".into()));
    }
    let ebn0 = 10f64.powf(params.ebn0_db / 10.0);
    Ok(1.0 / (params.code_rate * params.bits_per_symbol as f64 * ebn0))
}

/// Received sample and the fading gain the receiver knows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadedObservation<T> {
    pub y: Complex<T>,
    pub h: Complex<T>,
}

/// Draws a circularly symmetric complex Gaussian with `E|z|^2 = var`.
#[inline]
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex<f64> {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re * s, im * s)
}

/// Independent Rayleigh gain per symbol, then AWGN of variance `n0`.
///
/// Each symbol consumes four standard normals (gain, then noise), drawn
/// in `f64` with the ziggurat sampler, so `f32` and `f64` runs see the
/// same channel realization.
pub fn transmit<T: Real, R: Rng + ?Sized>(x: &[Complex<T>], n0: f64, rng: &mut R) -> Vec<FadedObservation<T>> {
    x.iter()
        .map(|&xi| {
            let h = complex_gaussian(rng, 1.0);
            let n = complex_gaussian(rng, n0);
            let xf = Complex::new(xi.re.as_f64(), xi.im.as_f64());
            let y = h * xf + n;
            FadedObservation {
                y: Complex::new(T::lit(y.re), T::lit(y.im)),
                h: Complex::new(T::lit(h.re), T::lit(h.im)),
            }
        })
        .collect()
}

/// Unit-gain, noise-free channel.
pub fn transmit_ideal<T: Real>(x: &[Complex<T>]) -> Vec<FadedObservation<T>> {
    x.iter()
        .map(|&y| FadedObservation {
            y,
            h: Complex::new(T::one(), T::zero()),
        })
        .collect()
}

/// Uncoded BPSK bit error probability on Rayleigh fading at mean SNR `gamma`.
pub fn rayleigh_bpsk_ber(gamma: f64) -> f64 {
    0.5 * (1.0 - (gamma / (1.0 + gamma)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::FrameRng;
    use rand::SeedableRng;

    #[test]
    fn noise_variance_examples() {
        let n0 = |db, r, b| noise_variance(&ChannelParams { ebn0_db: db, code_rate: r, bits_per_symbol: b }).unwrap();
        assert_eq!(n0(0.0, 1.0, 1), 1.0);
        assert!((n0(10.0, 0.5, 2) - 0.1).abs() < 1e-15);
        assert!(n0(300.0, 1.0, 1) < 1e-29);
        assert!(ChannelParams::new(0.0, 0.0, 1).is_err());
        assert!(ChannelParams::new(0.0, 0.5, 0).is_err());
    }

    #[test]
    fn zero_noise_is_pure_fading() {
        let mut rng = FrameRng::seed_from_u64(4);
        let x = vec![Complex::new(1.0f64, 0.0), Complex::new(-0.3, 0.7)];
        for o in transmit(&x, 0.0, &mut rng).iter().zip(&x) {
            assert_eq!(o.0.y, o.0.h * o.1);
        }
    }

    #[test]
    fn seeded_transmit_reproduces() {
        let x = vec![Complex::new(1.0f64, 0.0); 100];
        let a = transmit(&x, 0.3, &mut FrameRng::seed_from_u64(9));
        let b = transmit(&x, 0.3, &mut FrameRng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
