//! hypflow-core: numerical analysis of heat semigroups, spectral gaps and
//! the small-data mild-solution machinery on hyperbolic 3-space.
//!
//! What lives where:
//!
//! * [`field`], [`heat`], [`spectral`] — radial functions on hyperbolic
//!   3-space: quadrature grids, L^p norms, the explicit heat kernel, the
//!   spherical transform and radial convolution;
//! * [`semigroup`] — gap-shifted heat semigroups, decay-rate fitting and
//!   L^p -> L^q bound verification;
//! * [`gaps`] — every closed-form spectral gap, in exact rational
//!   arithmetic;
//! * [`kato`] — the Fujita–Kato exponent algebra, the Beta function, the
//!   scaling integral and its divergence diagnostics;
//! * [`contraction`], [`galerkin`] — the scalar majorant recursion and a
//!   truncated energy-conserving mode surrogate of the mild equation;
//! * [`quadrature`], [`special`], [`scalar`], [`report`] — shared numerics
//!   and output plumbing.
//!
//! All floating-point code is generic over the scalar type via [`scalar::Real`];
//! the `*64` aliases below pin the common `f64` instantiations.

pub mod contraction;
pub mod error;
pub mod field;
pub mod galerkin;
pub mod gaps;
pub mod heat;
pub mod kato;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod semigroup;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

pub type RadialGrid64 = field::RadialGrid<f64>;
pub type RadialField64 = field::RadialField<f64>;
pub type HeatKernelParams64 = heat::HeatKernelParams<f64>;
pub type SpectralField64 = spectral::SpectralField<f64>;
pub type SphericalTransform64 = spectral::SphericalTransform<f64>;
pub type SemigroupSpec64 = semigroup::SemigroupSpec<f64>;
pub type DecayFit64 = semigroup::DecayFit<f64>;
pub type IntegralParams64 = kato::IntegralParams<f64>;
pub type IntegralResult64 = kato::IntegralResult<f64>;
pub type MajorantTrace64 = contraction::MajorantTrace<f64>;
pub type GalerkinConfig64 = galerkin::GalerkinConfig<f64>;
pub type GalerkinSystem64 = galerkin::GalerkinSystem<f64>;
pub type Trajectory64 = galerkin::Trajectory<f64>;
pub type CompareConfig64 = galerkin::CompareConfig<f64>;
