//! Floating evaluation of the `c_k` formula, kept independent of the
//! Bernoulli route used by [`super::p_coeffs`].

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// `ζ(s)` for integer `s ≥ 2` by a partial sum with an Euler–Maclaurin tail.
pub fn zeta_f64(s: u32) -> f64 {
    assert!(s >= 2, "zeta_f64 needs s >= 2");
    const N: f64 = 32.0;
    let sf = f64::from(s);
    let mut sum = 0.0;
    // smallest terms first
    for n in (1..32).rev() {
        sum += libm::pow(f64::from(n), -sf);
    }
    let tail = libm::pow(N, 1.0 - sf) / (sf - 1.0)
        + libm::pow(N, -sf) / 2.0
        + sf * libm::pow(N, -sf - 1.0) / 12.0
        - sf * (sf + 1.0) * (sf + 2.0) * libm::pow(N, -sf - 3.0) / 720.0
        + sf * (sf + 1.0) * (sf + 2.0) * (sf + 3.0) * (sf + 4.0) * libm::pow(N, -sf - 5.0)
            / 30240.0
        - sf * (sf + 1.0)
            * (sf + 2.0)
            * (sf + 3.0)
            * (sf + 4.0)
            * (sf + 5.0)
            * (sf + 6.0)
            * libm::pow(N, -sf - 7.0)
            / 1_209_600.0;
    sum + tail
}

/// Coefficients `c_0 … c_d` of `p` evaluated term by term from the
/// `(2πi)^{d-k}` form with floating `ζ` values. The imaginary parts vanish up
/// to rounding.
pub fn p_coeffs_float(axes: &[f64]) -> Result<Vec<Complex64>> {
    if let Some(index) = axes.iter().position(|&a| a.is_nan() || a <= 0.0) {
        return Err(Error::InvalidAxis { index });
    }
    let d = axes.len();
    let zeta: Vec<f64> = (0..=d as u32)
        .map(|s| if s >= 2 { zeta_f64(s) } else { 0.0 })
        .collect();
    let volume = libm::exp2(d as f64) * axes.iter().product::<f64>();
    let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
    for (k, c) in out.iter_mut().enumerate() {
        let kfact: f64 = (1..=k).map(|i| i as f64).product();
        if k == d {
            *c = Complex64::new(volume / kfact, 0.0);
            continue;
        }
        let rest = d - k;
        let mut sum = 0.0;
        // nonempty index sets j_1 < ⋯ < j_l, each with an even part i_m ≥ 2
        for mask in 1usize..(1 << d) {
            let js: Vec<usize> = (0..d).filter(|j| mask >> j & 1 == 1).collect();
            sum += compositions(&js, rest, &zeta, axes);
        }
        let denom = Complex64::new(0.0, 2.0 * PI).powi(rest as i32) * kfact;
        *c = Complex64::new(volume * sum, 0.0) / denom;
    }
    Ok(out)
}

/// `Σ_{i_1+⋯+i_l = total, i_m even ≥ 2} Π_m (-2ζ(i_m) / a_{j_m}^{i_m})`.
fn compositions(js: &[usize], total: usize, zeta: &[f64], axes: &[f64]) -> f64 {
    let Some((&j, rest)) = js.split_first() else {
        return if total == 0 { 1.0 } else { 0.0 };
    };
    let mut sum = 0.0;
    let mut i = 2;
    while i + 2 * rest.len() <= total {
        let factor = -2.0 * zeta[i] / libm::pow(axes[j], i as f64);
        sum += factor * compositions(rest, total - i, zeta, axes);
        i += 2;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        assert!((zeta_f64(2) - PI * PI / 6.0).abs() < 2e-15);
        assert!((zeta_f64(4) - libm::pow(PI, 4.0) / 90.0).abs() < 1e-15);
        assert!((zeta_f64(3) - 1.202_056_903_159_594).abs() < 1e-14);
    }

    #[test]
    fn two_dimensional_example() {
        let c = p_coeffs_float(&[2f64.sqrt(), 1.0 + 2f64.sqrt()]).unwrap();
        assert!((c[2].re - 6.828_427_124_746_19).abs() < 1e-12);
        assert!((c[0].re - 0.764_297_739_604_484).abs() < 1e-12);
        assert!(c[1].norm() < 1e-15);
        assert!(c.iter().all(|z| z.im.abs() <= 1e-12));
    }

    #[test]
    fn one_dimension_has_no_constant() {
        let c = p_coeffs_float(&[2f64.sqrt()]).unwrap();
        assert!(c[0].norm() < 1e-15);
        assert!((c[1].re - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_axes() {
        assert_eq!(
            p_coeffs_float(&[1.0, 0.0]),
            Err(Error::InvalidAxis { index: 1 })
        );
        assert_eq!(
            p_coeffs_float(&[f64::NAN]),
            Err(Error::InvalidAxis { index: 0 })
        );
    }
}
