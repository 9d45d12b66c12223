//! Independent reference computations. Nothing here calls the engine's
//! probability code.
#![allow(dead_code)]

use convlab_core::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `P(accept(bits))` for `n` IID Bernoulli(θ) bits, by enumerating all
/// `2^n` strings.
pub fn brute_bernoulli(theta: &Rational, n: u32, accept: impl Fn(&[bool]) -> bool) -> Rational {
    let mut total = Rational::zero();
    let mut bits = vec![false; n as usize];
    for code in 0..(1u64 << n) {
        let mut p = Rational::one();
        for (i, b) in bits.iter_mut().enumerate() {
            *b = code >> i & 1 == 1;
            p *= if *b { theta.clone() } else { Rational::one() - theta };
        }
        if accept(&bits) {
            total += p;
        }
    }
    total
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `Σ_{k : accept(k)} n!/(k!(n-k)!) θ^k (1-θ)^(n-k)` from factorials.
pub fn binomial_sum(theta: &Rational, n: u64, accept: impl Fn(u64) -> bool) -> Rational {
    let mut total = Rational::zero();
    for k in 0..=n {
        if !accept(k) {
            continue;
        }
        let c = factorial(n) / (factorial(k) * factorial(n - k));
        let w = num_traits::pow(theta.clone(), k as usize) * num_traits::pow(Rational::one() - theta, (n - k) as usize);
        total += Rational::from_integer(c) * w;
    }
    total
}

/// The fair-coin rule in floating point; only trustworthy away from the
/// threshold.
pub fn fair_by_float(n: u64, k: u64) -> bool {
    ((k as f64 / n as f64) - 0.5).abs() < (n as f64).powf(-0.25)
}

pub fn one_minus_pow(p: &Rational, n: u64) -> Rational {
    Rational::one() - num_traits::pow(p.clone(), n as usize)
}

/// Standard error of a mean of `trials` Bernoulli(p) draws, from the
/// true p, so a degenerate sample cannot shrink it to zero.
pub fn binomial_stderr(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
