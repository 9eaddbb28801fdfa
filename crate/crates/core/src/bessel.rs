//! Bessel functions `J_ν`, `I_ν` of integer and half-integer order, their
//! first positive zeros, and the closed-form first eigenvalues of a Euclidean
//! ball that follow from them.
//!
//! `J_ν` is summed from its ascending series for `x ≤ 8`. Beyond that the
//! alternating terms grow like `e^x` and cancel, so larger arguments use
//! Miller's backward recurrence, normalized by the Neumann sum
//! `J_0 + 2 Σ J_2k = 1` for integer orders and by the elementary
//! `J_{±1/2}` for half-integer ones. `I_ν` has positive terms and is summed
//! directly on the whole contract range `0 ≤ x ≤ 50`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest argument evaluated with the ascending series for `J_ν`.
const SERIES_LIMIT: f64 = 8.0;

/// Relative size of the next term below which a series is truncated.
const SERIES_CUTOFF: f64 = 1e-17;

const SCAN_STEP: f64 = 0.1;

/// How far past the scan start a sign change must appear.
const SCAN_RANGE: f64 = 20.0;

const BISECTION_STEPS: usize = 60;

/// Order `ν = twice_order / 2` of a Bessel function, restricted to integers
/// and half-odd-integers so that `Γ(ν + 1)` has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BesselOrder {
    twice_order: u32,
}

impl BesselOrder {
    pub const fn from_twice(twice_order: u32) -> Self {
        Self { twice_order }
    }

    pub const fn integer(order: u32) -> Self {
        Self::from_twice(2 * order)
    }

    /// `ν = n/2`, the order attached to dimension `n`.
    pub const fn half_of(n: u32) -> Self {
        Self::from_twice(n)
    }

    pub const fn twice_order(self) -> u32 {
        self.twice_order
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_order) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice_order.is_multiple_of(2)
    }

    pub const fn plus_one(self) -> Self {
        Self::from_twice(self.twice_order + 2)
    }

    /// `Γ(ν + 1)`. Half-integer orders use `Γ(m + 3/2) = (2m+1)!! √π / 2^(m+1)`.
    fn gamma_of_successor(self) -> f64 {
        let m = self.twice_order / 2;
        if self.is_integer() {
            (1..=m).map(f64::from).product()
        } else {
            let double_factorial: f64 = (0..=m).map(|k| f64::from(2 * k + 1)).product();
            double_factorial * PI.sqrt() / 2f64.powi(m as i32 + 1)
        }
    }
}

impl std::fmt::Display for BesselOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_order / 2)
        } else {
            write!(f, "{}/2", self.twice_order)
        }
    }
}

/// An interval known to contain a sign change of a continuous function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl ZeroBracket {
    fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Option<Self> {
        (lo > 0.0 && hi > lo && f_lo * f_hi < 0.0).then_some(Self { lo, hi, f_lo, f_hi })
    }

    /// Bisects until the bracket is at the resolution of `f64`.
    pub fn bisect(mut self, f: impl Fn(f64) -> f64) -> f64 {
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (self.lo + self.hi);
            if mid <= self.lo || mid >= self.hi {
                break;
            }
            let f_mid = f(mid);
            if f_mid == 0.0 {
                return mid;
            }
            if (f_mid < 0.0) == (self.f_lo < 0.0) {
                self.lo = mid;
                self.f_lo = f_mid;
            } else {
                self.hi = mid;
                self.f_hi = f_mid;
            }
        }
        0.5 * (self.lo + self.hi)
    }
}

fn check_argument(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be >= 0, got {x}")));
    }
    Ok(())
}

/// Sums `Σ_k s^k (x/2)^(2k+ν) / (k! Γ(k+ν+1))` with `s = -1` for `J`, `+1` for `I`.
fn ascending_series(nu: BesselOrder, x: f64, alternating: bool) -> f64 {
    if x == 0.0 {
        return if nu.twice_order == 0 { 1.0 } else { 0.0 };
    }
    let order = nu.value();
    let half = 0.5 * x;
    let step = if alternating { -half * half } else { half * half };
    let mut term = half.powf(order) / nu.gamma_of_successor();
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= step / (k * (k + order));
        sum += term;
        if term.abs() < SERIES_CUTOFF * sum.abs() || term == 0.0 {
            return sum;
        }
    }
}

/// Miller's backward recurrence for `J_ν(x)`, `x > 0`.
fn backward_recurrence(nu: BesselOrder, x: f64) -> f64 {
    const RESCALE_ABOVE: f64 = 1e250;
    const RESCALE_BY: f64 = 1e-250;

    let order = nu.value();
    let reach = order.max(x);
    // Starting index: twice-order of the (unnormalized) seed, same parity as ν.
    let start = (reach + (60.0 * reach).sqrt() + 20.0).ceil() as u32;
    let mut twice = 2 * start + (nu.twice_order % 2);
    let mut upper = 0.0_f64; // f at order + 1
    let mut current = 1e-30_f64; // f at order
    let mut kept = 0.0_f64;
    let mut neumann_sum = 0.0_f64;
    let mut half_pair = (0.0_f64, 0.0_f64);
    let integer = nu.is_integer();
    loop {
        if twice == nu.twice_order {
            kept = current;
        }
        if integer && twice.is_multiple_of(4) {
            neumann_sum += if twice == 0 { current } else { 2.0 * current };
        }
        if !integer && twice == 1 {
            half_pair.0 = current;
        }
        let lowest = if integer { 0 } else { 1 };
        if twice == lowest {
            if !integer {
                // One more step down to order -1/2.
                let order_here = f64::from(twice) / 2.0;
                half_pair.1 = (2.0 * order_here / x) * current - upper;
            }
            break;
        }
        let order_here = f64::from(twice) / 2.0;
        let lower = (2.0 * order_here / x) * current - upper;
        upper = current;
        current = lower;
        twice -= 2;
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            upper *= RESCALE_BY;
            kept *= RESCALE_BY;
            neumann_sum *= RESCALE_BY;
        }
    }
    if integer {
        kept / neumann_sum
    } else {
        let envelope = (2.0 / (PI * x)).sqrt();
        let (sin_part, cos_part) = (envelope * x.sin(), envelope * x.cos());
        let (f_half, f_minus_half) = half_pair;
        let scale = (f_half * sin_part + f_minus_half * cos_part)
            / (f_half * f_half + f_minus_half * f_minus_half);
        kept * scale
    }
}

/// `J_ν(x)` for `0 ≤ x ≤ 50`.
pub fn bessel_j(nu: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(ascending_or_recurrence(nu, x))
}

/// `I_ν(x)` for `0 ≤ x ≤ 50`.
pub fn bessel_i(nu: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(ascending_series(nu, x, false))
}

/// Scans forward from `max(start, 0.1)` in steps of 0.1 and bisects the first
/// bracketed sign change.
fn first_sign_change(
    start: f64,
    limit: f64,
    name: impl Fn() -> String,
    f: impl Fn(f64) -> f64,
) -> Result<f64> {
    let origin = start.max(SCAN_STEP);
    let mut lo = origin;
    let mut f_lo = f(lo);
    for step in 1.. {
        let hi = origin + f64::from(step) * SCAN_STEP;
        if hi > limit {
            break;
        }
        let f_hi = f(hi);
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if let Some(bracket) = ZeroBracket::new(lo, hi, f_lo, f_hi) {
            return Ok(bracket.bisect(&f));
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::ZeroNotBracketed { function: name(), limit })
}

/// `j_{ν,1}`, the first positive zero of `J_ν`.
pub fn first_zero_j(nu: BesselOrder) -> Result<f64> {
    let order = nu.value();
    first_sign_change(order, order + SCAN_RANGE, || format!("J_{nu}"), |x| {
        ascending_or_recurrence(nu, x)
    })
}

/// The cross product `J_a I_{a+1} + J_{a+1} I_a` whose first zero fixes the
/// clamped-plate eigenvalue of a ball.
pub fn cross_function(a: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(cross_unchecked(a, x))
}

fn cross_unchecked(a: BesselOrder, x: f64) -> f64 {
    let next = a.plus_one();
    ascending_or_recurrence(a, x) * ascending_series(next, x, false)
        + ascending_or_recurrence(next, x) * ascending_series(a, x, false)
}

fn ascending_or_recurrence(nu: BesselOrder, x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        ascending_series(nu, x, true)
    } else {
        backward_recurrence(nu, x)
    }
}

/// `k_{a,1}`, the first positive zero of [`cross_function`].
pub fn first_zero_cross(a: BesselOrder) -> Result<f64> {
    let order = a.value();
    first_sign_change(
        order,
        order + SCAN_RANGE,
        || format!("J_{a} I_{} + J_{} I_{a}", a.plus_one(), a.plus_one()),
        |x| cross_unchecked(a, x),
    )
}

/// First Dirichlet, buckling and clamped-plate eigenvalues of the ball of
/// radius `radius` in `R^dim`. Buckling and clamped values hold for every
/// form degree; `lambda1` is the scalar Dirichlet value `j²_{n/2-1,1} / R²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpectrum {
    pub dim: u32,
    pub radius: f64,
    pub lambda1: f64,
    pub big_lambda1: f64,
    pub big_gamma1: f64,
}

impl BallSpectrum {
    /// `1 / R`.
    pub fn mean_curvature(&self) -> f64 {
        1.0 / self.radius
    }

    /// The links `Λ² ≥ Γ ≥ Λλ > λ²` as `(smaller, larger)` pairs.
    pub fn chain_links(&self) -> [(f64, f64); 3] {
        let (l, bl, bg) = (self.lambda1, self.big_lambda1, self.big_gamma1);
        [(bg, bl * bl), (bl * l, bg), (l * l, bl * l)]
    }
}

pub fn ball_spectrum(dim: u32, radius: f64) -> Result<BallSpectrum> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!("ball dimension must be >= 2, got {dim}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!("ball radius must be > 0, got {radius}")));
    }
    let below = BesselOrder::from_twice(dim - 2);
    let dirichlet_zero = first_zero_j(below)?;
    let buckling_zero = first_zero_j(BesselOrder::half_of(dim))?;
    let clamped_zero = first_zero_cross(below)?;
    let curvature = 1.0 / radius;
    let h2 = curvature * curvature;
    Ok(BallSpectrum {
        dim,
        radius,
        lambda1: dirichlet_zero * dirichlet_zero * h2,
        big_lambda1: buckling_zero * buckling_zero * h2,
        big_gamma1: clamped_zero.powi(4) * h2 * h2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(BesselOrder::integer(0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(BesselOrder::integer(1), 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(BesselOrder::integer(0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(BesselOrder::integer(1), 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(BesselOrder::from_twice(1), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_argument_is_a_domain_error() {
        assert!(matches!(bessel_j(BesselOrder::integer(0), -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i(BesselOrder::integer(2), -0.5), Err(Error::Domain(_))));
        assert!(cross_function(BesselOrder::integer(0), f64::NAN).is_err());
    }

    #[test]
    fn gamma_factor_matches_double_factorial_identity() {
        // Γ(3/2) = √π/2, Γ(5/2) = 3√π/4, Γ(4) = 6
        let sqrt_pi = PI.sqrt();
        assert!((BesselOrder::from_twice(1).gamma_of_successor() - sqrt_pi / 2.0).abs() < 1e-15);
        assert!((BesselOrder::from_twice(3).gamma_of_successor() - 0.75 * sqrt_pi).abs() < 1e-15);
        assert_eq!(BesselOrder::integer(3).gamma_of_successor(), 6.0);
    }

    #[test]
    fn series_and_recurrence_agree_where_both_are_accurate() {
        for twice in 0..8 {
            let nu = BesselOrder::from_twice(twice);
            for &x in &[1.0, 3.3, 6.0, 7.9] {
                let s = ascending_series(nu, x, true);
                let r = backward_recurrence(nu, x);
                assert!((s - r).abs() < 1e-13, "nu={nu} x={x}: {s} vs {r}");
            }
        }
    }

    #[test]
    fn half_order_zero_is_pi() {
        let z = first_zero_j(BesselOrder::from_twice(1)).unwrap();
        assert!((z - PI).abs() < 1e-12);
    }

    #[test]
    fn cross_function_is_positive_near_origin() {
        for twice in 0..12 {
            let a = BesselOrder::from_twice(twice);
            let start = a.value().max(SCAN_STEP);
            assert!(cross_function(a, start).unwrap() > 0.0, "a = {a}");
        }
    }

    #[test]
    fn ball_rejects_bad_arguments() {
        assert!(ball_spectrum(1, 1.0).is_err());
        assert!(ball_spectrum(2, 0.0).is_err());
        assert!(ball_spectrum(2, -1.0).is_err());
    }

    #[test]
    fn ball_scales_with_inverse_radius() {
        let one = ball_spectrum(2, 1.0).unwrap();
        let two = ball_spectrum(2, 2.0).unwrap();
        assert!((one.big_lambda1 / 4.0 - two.big_lambda1).abs() < 1e-12);
        assert!((one.lambda1 / 4.0 - two.lambda1).abs() < 1e-12);
        assert!((one.big_gamma1 / 16.0 - two.big_gamma1).abs() < 1e-10);
    }

    #[test]
    fn order_display() {
        assert_eq!(BesselOrder::from_twice(3).to_string(), "3/2");
        assert_eq!(BesselOrder::integer(2).to_string(), "2");
    }
}
