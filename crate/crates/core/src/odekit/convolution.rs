//! Σ over compositions (a₁,…,a_l) of b of (a₁⋯a_l)⁻², against C^(l−1)/b².

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Rational upper bound for 2π²/3 ≈ 6.5797.
pub fn c_upper_bound() -> BigRational {
    BigRational::new(BigInt::from(329), BigInt::from(50))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvolutionReport {
    pub l: usize,
    pub b: usize,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

fn inv_sq(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n * n))
}

/// S_l(b) by dynamic programming over the last part.
pub fn composition_sum(l: usize, b: usize) -> BigRational {
    // s[n] = S_k(n) for the current k
    let mut s: Vec<BigRational> = (0..=b).map(|n| if n == 0 { BigRational::zero() } else { inv_sq(n) }).collect();
    for k in 2..=l {
        let mut next = vec![BigRational::zero(); b + 1];
        for n in k..=b {
            let mut acc = BigRational::zero();
            for a in 1..=n - (k - 1) {
                acc += &s[n - a] * inv_sq(a);
            }
            next[n] = acc;
        }
        s = next;
    }
    s[b].clone()
}

pub fn check_convolution_inequality(l: usize, b: usize) -> ConvolutionReport {
    assert!(2 <= l && l <= b, "need 2 <= l <= b");
    let lhs = composition_sum(l, b);
    let rhs = num_traits::pow(c_upper_bound(), l - 1) * inv_sq(b);
    ConvolutionReport { l, b, holds: lhs <= rhs, lhs: lhs.to_string(), rhs: rhs.to_string() }
}
