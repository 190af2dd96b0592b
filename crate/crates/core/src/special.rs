//! Gamma and Beta functions via the Lanczos approximation (g = 7, n = 9,
//! the coefficient set circulated with the GNU Scientific Library).

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(x)` for `x > 0`. Arguments below 1/2 go through the recurrence
/// `Gamma(x) = Gamma(x + 1) / x` to keep the Lanczos sum well conditioned.
pub fn ln_gamma<F: Real>(x: F) -> F {
    debug_assert!(x > F::zero(), "ln_gamma requires a positive argument");
    if x < F::of(0.5) {
        return ln_gamma(x + F::one()) - x.ln();
    }
    let z = x - F::one();
    let mut sum = F::of(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += F::of(c) / (z + F::from_usize(i).unwrap());
    }
    let w = z + F::of(LANCZOS_G) + F::of(0.5);
    F::of(0.5) * (F::of(2.0) * F::PI()).ln() + (z + F::of(0.5)) * w.ln() - w + sum.ln()
}

/// `Gamma(x)` for `x > 0`.
pub fn gamma<F: Real>(x: F) -> F {
    ln_gamma(x).exp()
}

/// Euler Beta function `B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)`,
/// positive arguments only.
pub fn beta<F: Real>(a: F, b: F) -> F {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}
