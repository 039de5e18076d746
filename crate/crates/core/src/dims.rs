//! Dimension formula for M_k(N, chi) (Cohen-Oesterle) and the
//! classification of the two-dimensional spaces M_k(N, chi_{(-1)^k N}).
//!
//! Restricted to k >= 2, where dim S_{2-k}(N, chi) = 0 and the formula
//! yields the dimension of M_k directly.

use num_traits::{Signed, Zero};

use crate::dirichlet::QuadCharacter;
use crate::exactnum::rational;
use crate::{Int, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DimError {
    #[error("weight {0} < 2 is unsupported")]
    WeightTooSmall(u32),
    #[error("character modulus {0} does not divide the level {1}")]
    ModulusMismatch(i64, i64),
}

/// The local factor lambda(r_p, s_p, p) of the Cohen-Oesterle formula,
/// where r_p and s_p are the p-adic valuations of the level and of the
/// conductor of chi.
pub fn lambda_factor(r_p: u32, s_p: u32, p: i64) -> Int {
    assert!(r_p >= 1 && s_p <= r_p);
    let p = Int::from(p);
    if 2 * s_p <= r_p {
        if r_p % 2 == 0 {
            let r2 = r_p / 2;
            p.pow(r2) + p.pow(r2 - 1)
        } else {
            Int::from(2) * p.pow(r_p / 2)
        }
    } else {
        Int::from(2) * p.pow(r_p - s_p)
    }
}

/// alpha(chi) = sum of chi(x) over x mod N with x^2 + 1 = 0 (mod N), and
/// beta(chi) over x^2 + x + 1 = 0 (mod N), by direct summation.
pub fn alpha_beta(chi: &QuadCharacter, n: i64) -> (i64, i64) {
    let mut alpha = 0i64;
    let mut beta = 0i64;
    for x in 0..n {
        if (x * x + 1) % n == 0 {
            alpha += chi.eval(x) as i64;
        }
        if (x * x + x + 1) % n == 0 {
            beta += chi.eval(x) as i64;
        }
    }
    (alpha, beta)
}

fn nu(k: i64) -> Rat {
    if k.rem_euclid(2) == 1 {
        Rat::zero()
    } else if k.rem_euclid(4) == 2 {
        rational(-1, 4)
    } else {
        rational(1, 4)
    }
}

fn mu(k: i64) -> Rat {
    match k.rem_euclid(3) {
        1 => Rat::zero(),
        2 => rational(-1, 3),
        _ => rational(1, 3),
    }
}

fn prime_factorization(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// dim M_k(N, chi) for k >= 2.
///
/// Returns 0 immediately when chi(-1) != (-1)^k (the space is {0});
/// otherwise evaluates the Cohen-Oesterle right-hand side exactly in
/// rational arithmetic and asserts it is a nonnegative integer.
pub fn dim_mk(k: u32, n: i64, chi: &QuadCharacter) -> Result<u64, DimError> {
    if k < 2 {
        return Err(DimError::WeightTooSmall(k));
    }
    if n % chi.modulus() != 0 {
        return Err(DimError::ModulusMismatch(chi.modulus(), n));
    }
    let want_parity = if k % 2 == 0 { 1 } else { -1 };
    if chi.parity() != want_parity {
        return Ok(0);
    }
    let conductor = chi.primitivity().1;
    let factors = prime_factorization(n);

    // (k-1) N / 12 * prod (1 + 1/p)
    let mut main = rational((k as i64 - 1) * n, 12);
    for &(p, _) in &factors {
        main *= rational(p + 1, p);
    }
    // (1/2) prod lambda(r_p, s_p, p)
    let mut lam = rational(1, 2);
    for &(p, r_p) in &factors {
        let mut s_p = 0u32;
        let mut c = conductor;
        while c % p == 0 {
            c /= p;
            s_p += 1;
        }
        lam *= Rat::from_integer(lambda_factor(r_p, s_p, p));
    }
    let (alpha, beta) = alpha_beta(chi, n);
    let idx = 2 - k as i64;
    let dim = main + lam - nu(idx) * rational(alpha, 1) - mu(idx) * rational(beta, 1);
    assert!(
        dim.is_integer() && !dim.is_negative(),
        "dimension formula did not produce a nonnegative integer: {dim}"
    );
    Ok(u64::try_from(dim.to_integer()).expect("small dimension"))
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Candidate pairs (k, N): primes N and weights k >= 2 with (-1)^k N a
/// fundamental discriminant and (k-1)(N+1) <= 26 (the bound forced by
/// a two-dimensional space).
pub fn dim2_candidates() -> Vec<(u32, i64)> {
    let mut out = Vec::new();
    for k in 2u32..=14 {
        for n in 2i64..=26 {
            if !is_prime(n) || (k as i64 - 1) * (n + 1) > 26 {
                continue;
            }
            let disc = if k % 2 == 0 { n } else { -n };
            let Ok(chi) = QuadCharacter::from_disc(disc) else {
                continue;
            };
            if chi.is_primitive() {
                out.push((k, n));
            }
        }
    }
    out.sort();
    out
}

/// The pairs (k, N) among the candidates whose space is exactly
/// two-dimensional.
pub fn classify_dim2() -> Vec<(u32, i64)> {
    dim2_candidates()
        .into_iter()
        .filter(|&(k, n)| {
            let disc = if k % 2 == 0 { n } else { -n };
            let chi = QuadCharacter::from_disc(disc).expect("candidate disc is valid");
            dim_mk(k, n, &chi).expect("k >= 2 and modulus divides level") == 2
        })
        .collect()
}
