//! The scalar heat kernel of hyperbolic 3-space.
//!
//! In curvature -1 units the kernel is, as a function of geodesic distance,
//!
//! ```text
//! p_t(r) = (4 pi t)^{-3/2} (r / sinh r) exp(-t - r^2/(4t))
//! ```
//!
//! The `exp(-t)` factor is the bottom of the L^2 spectrum of the (positive)
//! scalar Laplacian, which sits at 1. Evaluation goes through log space so
//! large radii never overflow; values whose logarithm drops below the
//! smallest representable float underflow gracefully to zero, with
//! [`heat_kernel_ln`] as the always-finite companion.

use crate::error::{Error, Result};
use crate::field::{RadialField, RadialGrid};
use crate::scalar::Real;

/// Threshold below which removable singularities switch to series.
const SERIES_THRESHOLD: f64 = 1e-4;

/// Time/viscosity bundle; viscosity rescales time, `p(t, mu) = p_{mu t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernelParams<F> {
    pub t: F,
    pub mu: F,
}

impl<F: Real> HeatKernelParams<F> {
    pub fn new(t: F, mu: F) -> Result<Self> {
        if t <= F::zero() || !t.is_finite() {
            return Err(Error::param("heat kernel time must be positive"));
        }
        if mu <= F::zero() || !mu.is_finite() {
            return Err(Error::param("viscosity must be positive"));
        }
        Ok(HeatKernelParams { t, mu })
    }

    pub fn effective_time(&self) -> F {
        self.t * self.mu
    }
}

/// `r / sinh r`, with the removable singularity at r = 0 expanded in series.
pub(crate) fn r_over_sinh<F: Real>(r: F) -> F {
    if r < F::of(SERIES_THRESHOLD) {
        let r2 = r * r;
        F::one() - r2 / F::of(6.0) + F::of(7.0 / 360.0) * r2 * r2
    } else {
        r / r.sinh()
    }
}

/// `ln(r / sinh r)`, stable for all r >= 0.
pub(crate) fn ln_r_over_sinh<F: Real>(r: F) -> F {
    if r < F::of(SERIES_THRESHOLD) {
        let r2 = r * r;
        -r2 / F::of(6.0) + r2 * r2 / F::of(180.0)
    } else {
        // ln sinh r = r - ln 2 + ln(1 - e^{-2r})
        r.ln() - (r - F::LN_2() + (-(-(F::of(2.0) * r)).exp()).ln_1p())
    }
}

/// `sin(x)/x` with series fallback near zero.
pub(crate) fn sinc<F: Real>(x: F) -> F {
    if x.abs() < F::of(SERIES_THRESHOLD) {
        let x2 = x * x;
        F::one() - x2 / F::of(6.0) + x2 * x2 / F::of(120.0)
    } else {
        x.sin() / x
    }
}

/// Natural logarithm of the heat kernel; finite for every `t > 0`, `r >= 0`.
pub fn heat_kernel_ln<F: Real>(t: F, r: F) -> Result<F> {
    if t <= F::zero() || !t.is_finite() {
        return Err(Error::param("heat kernel time must be positive"));
    }
    if r < F::zero() {
        return Err(Error::param("heat kernel radius must be nonnegative"));
    }
    let log_prefactor = -F::of(1.5) * (F::of(4.0) * F::PI() * t).ln();
    Ok(log_prefactor + ln_r_over_sinh(r) - t - r * r / (F::of(4.0) * t))
}

/// Heat kernel value. Positive wherever it is representable; for extreme
/// arguments (ln value below about -745 in f64) the result underflows to
/// zero, never overflows and is never NaN.
pub fn heat_kernel_value<F: Real>(t: F, r: F) -> Result<F> {
    Ok(heat_kernel_ln(t, r)?.exp())
}

/// The kernel sampled on a grid at effective time `mu * t`.
pub fn heat_kernel_field<F: Real>(
    grid: &RadialGrid<F>,
    params: &HeatKernelParams<F>,
) -> RadialField<F> {
    let te = params.effective_time();
    RadialField::from_fn(grid, |r| {
        heat_kernel_ln(te, r).expect("grid radii are valid").exp()
    })
}
