//! Gauss–Legendre quadrature, plain and composite.
//!
//! Nodes and weights are computed at construction by Newton iteration on
//! the Legendre recurrence, so no tables are baked in and any [`Real`]
//! scalar works.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A Gauss–Legendre rule of fixed degree on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre<F> {
    nodes: Vec<F>,
    weights: Vec<F>,
}

impl<F: Real> GaussLegendre<F> {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("Gauss-Legendre rule needs at least 2 points"));
        }
        let mut nodes = vec![F::zero(); n];
        let mut weights = vec![F::zero(); n];
        let nf = F::from_usize(n).unwrap();
        let eps = F::epsilon() * F::of(4.0);
        for i in 0..n.div_ceil(2) {
            // standard cosine initial guess, then Newton on P_n
            let mut x = (F::PI() * (F::from_usize(i).unwrap() + F::of(0.75))
                / (nf + F::of(0.5)))
            .cos();
            let mut pp = F::zero();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                pp = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= eps {
                    break;
                }
            }
            let w = F::of(2.0) / ((F::one() - x * x) * pp * pp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node/weight pairs mapped affinely onto `[a, b]`.
    pub fn mapped(&self, a: F, b: F) -> impl Iterator<Item = (F, F)> + '_ {
        let half = (b - a) * F::of(0.5);
        let mid = (a + b) * F::of(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }

    /// Integrates `f` over `[a, b]` with this rule.
    pub fn integrate<G: Fn(F) -> F>(&self, a: F, b: F, f: G) -> F {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Integrates `f` over consecutive panels `[b_0,b_1], [b_1,b_2], ...`.
    pub fn integrate_panels<G: Fn(F) -> F>(&self, boundaries: &[F], f: G) -> F {
        boundaries
            .windows(2)
            .map(|ab| self.integrate(ab[0], ab[1], &f))
            .sum()
    }
}

/// (P_n(x), P_n'(x)) by upward recurrence.
fn legendre_with_derivative<F: Real>(n: usize, x: F) -> (F, F) {
    let mut p0 = F::one();
    let mut p1 = x;
    for k in 1..n {
        let kf = F::from_usize(k).unwrap();
        let p2 = ((F::of(2.0) * kf + F::one()) * x * p1 - kf * p0) / (kf + F::one());
        p0 = p1;
        p1 = p2;
    }
    let nf = F::from_usize(n).unwrap();
    let dp = nf * (x * p1 - p0) / (x * x - F::one());
    (p1, dp)
}

/// Flattened nodes and weights of a composite rule over the given panel
/// boundaries, `pts` Gauss points per panel.
pub fn composite_nodes_weights<F: Real>(
    boundaries: &[F],
    pts: usize,
) -> Result<(Vec<F>, Vec<F>)> {
    if boundaries.len() < 2 {
        return Err(Error::param("composite rule needs at least one panel"));
    }
    if boundaries.windows(2).any(|ab| ab[1] <= ab[0]) {
        return Err(Error::param("panel boundaries must be strictly increasing"));
    }
    let rule = GaussLegendre::new(pts)?;
    let n = pts * (boundaries.len() - 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for ab in boundaries.windows(2) {
        for (x, w) in rule.mapped(ab[0], ab[1]) {
            nodes.push(x);
            weights.push(w);
        }
    }
    Ok((nodes, weights))
}
