//! Bessel routines against brute-force oracles: a plain ascending series,
//! closed forms of half-integer orders and bisection on a fine scan.

use hodge_spectra::bessel::{bessel_i, bessel_j, cross_function, first_zero_cross, first_zero_j};
use hodge_spectra::{ball_spectrum, BesselOrder};
use proptest::prelude::*;
use std::f64::consts::PI;

/// Γ(k + 1 + ν) for ν ∈ {0, 1/2, 1, 3/2}, by the recursion from Γ(1) or Γ(1/2).
fn gamma_shifted(k: u32, twice_nu: u32) -> f64 {
    let target = 2 * k + 2 + twice_nu;
    let (mut g, mut x2) = if target.is_multiple_of(2) { (1.0, 2) } else { (PI.sqrt(), 1) };
    while x2 < target {
        g *= x2 as f64 / 2.0;
        x2 += 2;
    }
    g
}

fn naive_series(twice_nu: u32, x: f64, alternating: bool) -> f64 {
    let nu = f64::from(twice_nu) / 2.0;
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 0..80u32 {
        if k > 0 {
            fact *= f64::from(k);
        }
        let sign = if alternating && k % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * (x / 2.0).powf(2.0 * f64::from(k) + nu) / (fact * gamma_shifted(k, twice_nu));
    }
    sum
}

fn oracle_j(twice_nu: u32, x: f64) -> f64 {
    naive_series(twice_nu, x, true)
}

fn oracle_i(twice_nu: u32, x: f64) -> f64 {
    naive_series(twice_nu, x, false)
}

fn bisect(f: impl Fn(f64) -> f64, start: f64) -> f64 {
    let step = 1e-3;
    let mut lo = start;
    while f(lo).signum() == f(lo + step).signum() {
        lo += step;
    }
    let mut hi = lo + step;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo).signum() == f(mid).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn j(twice: u32, x: f64) -> f64 {
    bessel_j(BesselOrder::from_twice(twice), x).unwrap()
}

#[test]
fn first_zeros_against_brute_force_bisection() {
    let cases = [(0, 2.404825557695773), (2, 3.831705970207512), (1, PI)];
    for (twice, frozen) in cases {
        let oracle = bisect(|x| oracle_j(twice, x), 0.5);
        assert!((oracle - frozen).abs() < 1e-12, "oracle drift for 2ν = {twice}");
        let got = first_zero_j(BesselOrder::from_twice(twice)).unwrap();
        assert!((got - oracle).abs() < 1e-9, "2ν = {twice}: {got} vs {oracle}");
    }
}

#[test]
fn cross_zeros_against_brute_force_bisection() {
    let cross = |twice: u32, x: f64| {
        oracle_j(twice, x) * oracle_i(twice + 2, x) + oracle_j(twice + 2, x) * oracle_i(twice, x)
    };
    for (twice, frozen) in [(0, 3.196220616582541), (1, 3.926602312047919)] {
        let oracle = bisect(|x| cross(twice, x), 0.5);
        assert!((oracle - frozen).abs() < 1e-10);
        let got = first_zero_cross(BesselOrder::from_twice(twice)).unwrap();
        assert!((got - oracle).abs() < 1e-9, "2a = {twice}: {got} vs {oracle}");
    }
    // J_{1/2} I_{3/2} + J_{3/2} I_{1/2} vanishes where tan x = tanh x.
    let tan_tanh = bisect(|x| x.tan() - x.tanh(), 3.2);
    assert!((tan_tanh - 3.926602312047919).abs() < 1e-10);
}

#[test]
fn series_values_match_on_the_small_argument_range() {
    for twice in [0, 1, 2, 3] {
        for i in 1..=40 {
            let x = 0.2 * f64::from(i);
            let want = oracle_j(twice, x);
            assert!((j(twice, x) - want).abs() <= 1e-13, "J 2ν={twice} x={x}");
            let want_i = oracle_i(twice, x);
            let got_i = bessel_i(BesselOrder::from_twice(twice), x).unwrap();
            assert!((got_i - want_i).abs() <= 1e-13 * want_i.abs().max(1.0), "I 2ν={twice} x={x}");
        }
    }
    assert!((bessel_i(BesselOrder::integer(0), 1.0).unwrap() - 1.266065877752008).abs() < 1e-14);
}

fn half_closed_form(x: f64) -> (f64, f64) {
    let c = (2.0 / (PI * x)).sqrt();
    (c * x.sin(), c * (x.sin() / x - x.cos()))
}

#[test]
fn half_orders_follow_closed_forms_up_to_thirty() {
    for i in 1..=3000 {
        let x = 0.01 * f64::from(i);
        let (j_half, j_three_halves) = half_closed_form(x);
        let envelope = (2.0 / (PI * x)).sqrt();
        for (twice, want) in [(1, j_half), (3, j_three_halves)] {
            let got = j(twice, x);
            let scale = want.abs().max(envelope);
            assert!((got - want).abs() <= 1e-10 * scale, "2ν={twice} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn ball_values_frozen() {
    let disk = ball_spectrum(2, 1.0).unwrap();
    assert!((disk.lambda1 - 5.783185962946784).abs() < 1e-8);
    assert!((disk.big_lambda1 - 14.681970642123893).abs() < 1e-8);
    assert!((disk.big_gamma1 - 104.36310555884431).abs() < 1e-7);
    let ball = ball_spectrum(3, 1.0).unwrap();
    assert!((ball.big_lambda1 - 20.19072855642663).abs() < 1e-8);
    assert!((ball.big_gamma1 - 237.72106753111666).abs() < 1e-7);
}

proptest! {
    #[test]
    fn zeros_increase_with_order(twice in 0u32..16) {
        let a = first_zero_j(BesselOrder::from_twice(twice)).unwrap();
        let b = first_zero_j(BesselOrder::from_twice(twice + 1)).unwrap();
        prop_assert!(a < b);
        let c = first_zero_cross(BesselOrder::from_twice(twice)).unwrap();
        let d = first_zero_cross(BesselOrder::from_twice(twice + 1)).unwrap();
        prop_assert!(c < d);
        prop_assert!(cross_function(BesselOrder::from_twice(twice), c).unwrap().abs() < 1e-6 * c.powf(2.0 * f64::from(twice) / 2.0 + 1.0));
    }

    #[test]
    fn ball_chain_is_strict(dim in 2u32..=8, radius in 0.1f64..10.0) {
        let s = ball_spectrum(dim, radius).unwrap();
        for (small, large) in s.chain_links() {
            prop_assert!(small < large);
        }
    }

    #[test]
    fn ball_scale_covariance(dim in 2u32..=8, radius in 0.1f64..10.0) {
        let unit = ball_spectrum(dim, 1.0).unwrap();
        let s = ball_spectrum(dim, radius).unwrap();
        let r2 = radius * radius;
        prop_assert!((s.lambda1 * r2 / unit.lambda1 - 1.0).abs() < 1e-12);
        prop_assert!((s.big_lambda1 * r2 / unit.big_lambda1 - 1.0).abs() < 1e-12);
        prop_assert!((s.big_gamma1 * r2 * r2 / unit.big_gamma1 - 1.0).abs() < 1e-12);
    }
}
