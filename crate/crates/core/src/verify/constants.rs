use crate::error::{Error, Result};

/// Curvature constants attached to a dimension `n` and degree `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsBundle {
    pub dim: u32,
    pub degree: u32,
    /// Lower-bound parameter of the Weitzenböck operator, `W ≥ γ p(n-p)`.
    pub gamma: f64,
    /// `C_{n,p} = n + (4 + 2(n-2p)²)/(p(n-p+1)) + n(n-2p)²/(p²(n-p+1)²)`.
    pub c_np: f64,
    /// `γ p (n-p+1)`, lower bound for `λ_{1,p}`.
    pub dirichlet_bound: f64,
    /// Same bound, for `Λ_{1,p} > λ_{1,p}`.
    pub buckling_bound: f64,
    /// `γ² p² (n-p+1)²`, lower bound for `Γ_{1,p}`.
    pub clamped_bound: f64,
}

/// `C_{n,p}` as an exact fraction `(numerator, denominator)` over the common
/// denominator `p²(n-p+1)²`.
pub fn c_np_fraction(n: u32, p: u32) -> (i128, i128) {
    let (n, p) = (i128::from(n), i128::from(p));
    let a = p * (n - p + 1);
    let d = n - 2 * p;
    let numerator = n * a * a + (4 + 2 * d * d) * a + n * d * d;
    (numerator, a * a)
}

/// `C_{n,p}`, rounded once from the exact fraction.
pub fn c_np(n: u32, p: u32) -> f64 {
    let (num, den) = c_np_fraction(n, p);
    num as f64 / den as f64
}

/// `1 + 16/(n²(n+2))`, which `C_{n,n/2}/n` must equal.
pub fn half_degree_ratio(n: u32) -> f64 {
    let n = f64::from(n);
    1.0 + 16.0 / (n * n * (n + 2.0))
}

pub fn evaluate_constants(n: u32, p: u32, gamma: f64) -> Result<ConstantsBundle> {
    if p < 1 || p > n / 2 {
        return Err(Error::InvalidInput(format!("degree must satisfy 1 <= p <= n/2, got n = {n}, p = {p}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    let spread = f64::from(p) * f64::from(n - p + 1);
    let dirichlet_bound = gamma * spread;
    Ok(ConstantsBundle {
        dim: n,
        degree: p,
        gamma,
        c_np: c_np(n, p),
        dirichlet_bound,
        buckling_bound: dirichlet_bound,
        clamped_bound: dirichlet_bound * dirichlet_bound,
    })
}
