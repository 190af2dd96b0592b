//! Scalar majorant recursion for the small-data fixed point.
//!
//! With a linear bound `C1` and a bilinear bound `C2`, the Picard iterates
//! of the mild equation are dominated in norm by
//!
//! ```text
//! a_0 = C1 |u0|,    a_{n+1} = C1 |u0| + C2 a_n^2 ,
//! ```
//!
//! which converges exactly when `|u0| < epsilon_0 = 1/(4 C1 C2)`, to the
//! smaller root of `C2 a^2 - a + C1 |u0| = 0`, and that limit never exceeds
//! `2 C1 |u0|`. The threshold depends only on the product `C1 C2`; no
//! spectral-gap or geometry parameter enters it.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Smallness threshold `(4 C1 C2)^{-1}`.
pub fn epsilon0<F: Real>(c1: F, c2: F) -> Result<F> {
    if c1 <= F::zero() || c2 <= F::zero() || !c1.is_finite() || !c2.is_finite() {
        return Err(Error::param("contraction constants must be positive"));
    }
    Ok((F::of(4.0) * c1 * c2).recip())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MajorantVerdict<F> {
    Converged { limit: F, steps: usize },
    Diverged { step: usize },
}

/// Full record of one majorant run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantTrace<F> {
    pub c1: F,
    pub c2: F,
    pub u0_norm: F,
    pub epsilon0: F,
    pub iterates: Vec<F>,
    pub verdict: MajorantVerdict<F>,
}

const FIXED_POINT_TOL: f64 = 1e-12;

/// Runs the recursion until the fixed-point tolerance (1e-12) is met or
/// divergence is detected (iterate above ten times the ball radius
/// `2 C1 |u0|`, or `max_steps` exhausted). The iterates are nondecreasing.
pub fn majorant_iterate<F: Real>(
    c1: F,
    c2: F,
    u0_norm: F,
    max_steps: usize,
) -> Result<MajorantTrace<F>> {
    let eps0 = epsilon0(c1, c2)?;
    if u0_norm < F::zero() || !u0_norm.is_finite() {
        return Err(Error::param("initial norm must be nonnegative and finite"));
    }
    if max_steps == 0 {
        return Err(Error::param("max_steps must be positive"));
    }

    let source = c1 * u0_norm;
    let ball = F::of(2.0) * source;
    let blowup = F::of(10.0) * ball;
    let tol = F::of(FIXED_POINT_TOL);

    let mut iterates = vec![source];
    let mut a = source;
    let verdict = loop {
        let next = source + c2 * a * a;
        let step = iterates.len();
        if !next.is_finite() || (next > blowup && next > tol) {
            iterates.push(next);
            break MajorantVerdict::Diverged { step };
        }
        let increment = next - a;
        iterates.push(next);
        a = next;
        if increment.abs() <= tol {
            break MajorantVerdict::Converged {
                limit: a,
                steps: step,
            };
        }
        if step >= max_steps {
            break MajorantVerdict::Diverged { step };
        }
    };

    Ok(MajorantTrace {
        c1,
        c2,
        u0_norm,
        epsilon0: eps0,
        iterates,
        verdict,
    })
}
