//! Scalar abstraction.
//!
//! Every numerical routine in this crate is generic over a floating-point
//! type implementing [`Real`] (`f32` or `f64`). Exact spectral quantities
//! live in [`crate::gaps`] and [`crate::kato`] as rationals instead; they
//! are converted to a `Real` only at the boundary where quadrature starts.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into `Self`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    /// Lossy view as `f64`, used at reporting boundaries.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// `n` equally spaced points covering `[a, b]` inclusively.
pub fn linspace<F: Real>(a: F, b: F, n: usize) -> Vec<F> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (b - a) / F::from_usize(n - 1).unwrap();
    (0..n).map(|i| a + step * F::from_usize(i).unwrap()).collect()
}

/// `n` geometrically spaced points covering `[a, b]`, `0 < a < b`.
pub fn logspace<F: Real>(a: F, b: F, n: usize) -> Vec<F> {
    assert!(n >= 2 && a > F::zero() && b > a, "logspace needs 0 < a < b");
    let la = a.ln();
    let step = (b.ln() - la) / F::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| (la + step * F::from_usize(i).unwrap()).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0f64, 1.0, 5);
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn logspace_is_geometric() {
        let v = logspace(1e-3f64, 1e-1, 3);
        assert!((v[1] - 1e-2).abs() < 1e-15);
    }

    #[test]
    fn works_for_f32_too() {
        let v = linspace(0.0f32, 2.0, 3);
        assert_eq!(v[2], 2.0f32);
        assert_eq!(f32::of(0.5), 0.5f32);
    }
}
