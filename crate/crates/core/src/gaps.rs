//! Closed-form spectral quantities, kept exact.
//!
//! Every gap in this module is a rational number and is computed in exact
//! rational arithmetic; conversion to floating point happens only at the
//! output boundary. The building blocks:
//!
//! * scalar heat spectrum bottom in L^p:  `lambda_0(p) = 4(p-1)/p^2`,
//! * deformation semigroup lower bound:   `lambda_0(p) + 2`,
//! * exact L^2 gap on divergence-free fields: `4`,
//! * effective bilinear gap: `gamma(r) = 2 + lambda_0(r')/2 + lambda_0(r)/2`.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Exact rational scalar used for all gap algebra.
pub type Rat = Ratio<i64>;

/// Provenance string for the exact L^2 divergence-free gap.
pub const EXACT_L2_SOURCE: &str = "Donnelly + Weitzenböck";

/// An integrability exponent: a rational in `[1, oo)` or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(Rat),
    Infinity,
}

impl Exponent {
    pub fn from_int(p: i64) -> Self {
        Exponent::Finite(Rat::from_integer(p))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Exponent::Finite(Rat::new(num, den))
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// The dual exponent `p' = p / (p - 1)`; `1 <-> oo`.
    pub fn dual(&self) -> Result<Exponent> {
        let one = Rat::from_integer(1);
        match self {
            Exponent::Infinity => Ok(Exponent::Finite(one)),
            Exponent::Finite(p) => {
                if *p < one {
                    Err(Error::param("dual exponent needs p >= 1"))
                } else if *p == one {
                    Ok(Exponent::Infinity)
                } else {
                    Ok(Exponent::Finite(*p / (*p - one)))
                }
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => write!(f, "{r}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts integers (`3`), fractions (`3/2`), decimals (`1.5`, parsed as
    /// an exact power-of-ten rational) and `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") || s == "oo" {
            return Ok(Exponent::Infinity);
        }
        let bad = || Error::param(format!("cannot parse exponent '{s}'"));
        if let Some((num, den)) = s.split_once('/') {
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            let d: i64 = den.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Error::param("exponent denominator is zero"));
            }
            return Ok(Exponent::Finite(Rat::new(n, d)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let digits = frac.len() as u32;
            if digits > 15 {
                return Err(Error::param("decimal exponent has too many digits"));
            }
            let scale = 10i64.pow(digits);
            let ip: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let fp: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            let sign = if s.starts_with('-') { -1 } else { 1 };
            return Ok(Exponent::Finite(Rat::new(
                ip * scale + sign * fp,
                scale,
            )));
        }
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(Exponent::Finite(Rat::from_integer(n)))
    }
}

fn require_ge_one(p: &Exponent, what: &str) -> Result<()> {
    if let Exponent::Finite(r) = p {
        if *r < Rat::from_integer(1) {
            return Err(Error::param(format!("{what} must satisfy p >= 1, got {r}")));
        }
    }
    Ok(())
}

/// Bottom of the scalar L^p spectrum, `4(p-1)/p^2`; zero at `p = 1` and
/// `p = oo`, maximal (`= 1`) at the self-dual point `p = 2`.
pub fn scalar_gap(p: Exponent) -> Result<Rat> {
    require_ge_one(&p, "integrability exponent")?;
    match p {
        Exponent::Infinity => Ok(Rat::from_integer(0)),
        Exponent::Finite(r) => {
            let one = Rat::from_integer(1);
            Ok(Rat::from_integer(4) * (r - one) / (r * r))
        }
    }
}

/// Floating-point twin of [`scalar_gap`] for measured-rate comparisons.
pub fn scalar_gap_f64(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::param("integrability exponent must satisfy p >= 1"));
    }
    if p.is_infinite() {
        return Ok(0.0);
    }
    Ok(4.0 * (p - 1.0) / (p * p))
}

/// All closed-form gap data for one integrability exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub p: Exponent,
    /// `lambda_0(p)`, bottom of the scalar L^p spectrum.
    pub scalar_bottom: Rat,
    /// Lower bound for the deformation semigroup gap, `lambda_0(p) + 2`.
    pub deformation_lower: Rat,
    /// Exact gap on divergence-free fields; known only at p = 2, where it
    /// is 4 and beats the lower bound 3.
    pub exact_l2: Option<Rat>,
    pub scalar_source: String,
    pub deformation_source: String,
    pub exact_source: Option<String>,
}

/// Gap report for the deformation (Stokes) semigroup at exponent `p`.
pub fn deformation_gap(p: Exponent) -> Result<GapReport> {
    let scalar_bottom = scalar_gap(p)?;
    let deformation_lower = scalar_bottom + Rat::from_integer(2);
    let exact = p == Exponent::from_int(2);
    Ok(GapReport {
        p,
        scalar_bottom,
        deformation_lower,
        exact_l2: exact.then(|| Rat::from_integer(4)),
        scalar_source: "4(p-1)/p^2 (scalar heat spectrum bottom)".to_string(),
        deformation_source: "scalar bottom + 2 (diamagnetic comparison)".to_string(),
        exact_source: exact.then(|| EXACT_L2_SOURCE.to_string()),
    })
}

impl GapReport {
    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{:<22} {:>10}  {}\n", "quantity", "value", "source"));
        s.push_str(&format!(
            "{:<22} {:>10}  {}\n",
            format!("scalar_bottom (p={})", self.p),
            self.scalar_bottom.to_string(),
            self.scalar_source
        ));
        s.push_str(&format!(
            "{:<22} {:>10}  {}\n",
            "deformation_lower",
            self.deformation_lower.to_string(),
            self.deformation_source
        ));
        match (&self.exact_l2, &self.exact_source) {
            (Some(v), Some(src)) => {
                s.push_str(&format!("{:<22} {:>10}  {}\n", "exact_l2", v.to_string(), src));
            }
            _ => {
                s.push_str(&format!(
                    "{:<22} {:>10}  {}\n",
                    "exact_l2", "-", "not known for this exponent"
                ));
            }
        }
        s
    }
}

/// Effective bilinear gap `gamma(r) = 2 + lambda_0(r')/2 + lambda_0(r)/2`
/// for `1 < r < oo`; symmetric under `r <-> r'`.
pub fn bilinear_gamma(r: Exponent) -> Result<Rat> {
    let rr = match r {
        Exponent::Infinity => return Err(Error::param("bilinear gap needs 1 < r < oo")),
        Exponent::Finite(v) => v,
    };
    if rr <= Rat::from_integer(1) {
        return Err(Error::param("bilinear gap needs 1 < r < oo"));
    }
    let half = Rat::new(1, 2);
    let gap_r = scalar_gap(Exponent::Finite(rr))?;
    let gap_dual = scalar_gap(Exponent::Finite(rr / (rr - Rat::from_integer(1))))?;
    Ok(Rat::from_integer(2) + half * gap_dual + half * gap_r)
}

/// L^2 divergence-free gaps of the three natural vector Laplacians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaplacianComparison {
    pub hodge: Rat,
    pub bochner: Rat,
    pub deformation: Rat,
}

/// Hodge has no gap on divergence-free fields, Bochner shifts by 2, the
/// deformation Laplacian by 4. Only the last gives the full gap.
pub fn laplacian_comparison() -> LaplacianComparison {
    LaplacianComparison {
        hodge: Rat::from_integer(0),
        bochner: Rat::from_integer(2),
        deformation: Rat::from_integer(4),
    }
}

impl LaplacianComparison {
    pub fn to_table(&self) -> String {
        format!(
            "{:<14} {}\n{:<14} {}\n{:<14} {}\n{:<14} {}\n",
            "laplacian",
            "l2 divergence-free gap",
            "Hodge",
            self.hodge,
            "Bochner",
            self.bochner,
            "Deformation",
            self.deformation
        )
    }
}
