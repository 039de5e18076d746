//! Closed-form representation-number formulas and the verification
//! suites tying them to enumerated counts.
//!
//! Everything that "verifies" here compares a formula against lattice
//! enumeration (the ground truth), never formula against formula.

use num_traits::Zero;

use crate::bernoulli;
use crate::dirichlet::QuadCharacter;
use crate::exactnum::rational;
use crate::lattice::{rep_count_shell, theta_series};
use crate::qform::GramMatrix;
use crate::{Int, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum IdentityError {
    #[error("(-1)^k det(A) = {0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("level {0} is not prime")]
    LevelNotPrime(i64),
    #[error("r_Q(1) = 0: the square formula divides by it")]
    ZeroR1,
    #[error("p = {0} divides the level {1}")]
    PrimeDividesLevel(u64, i64),
    #[error("chi(p)^m = {0} != 1: Theorem main needs chi(p^m) = 1")]
    CharConditionFailed(i32),
    #[error("level data does not fit the closed form: {0}")]
    BadLevel(String),
}

/// The data of Theorem main(i): r_Q(n) = c1 sum chi(d)d^{k-1}
/// + c2 sum chi(n/d)d^{k-1} with c1 = 2/L(1-k,chi), c2 = r_Q(1) - c1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub k: u32,
    pub level: i64,
    pub chi: QuadCharacter,
    pub c1: Rat,
    pub c2: Rat,
    pub rq1: u64,
}

impl ClosedForm {
    /// Derive the closed form of a Gram matrix: character from
    /// (-1)^k det(A), c1 from the L-value, r_Q(1) by shell enumeration.
    pub fn for_form(a: &GramMatrix) -> Result<Self, IdentityError> {
        let profile = a.profile();
        let k = profile.weight as u32;
        let level = i64::try_from(&profile.level)
            .map_err(|_| IdentityError::BadLevel("level does not fit i64".into()))?;
        let disc = i64::try_from(&profile.char_disc)
            .map_err(|_| IdentityError::BadLevel("discriminant does not fit i64".into()))?;
        let chi = QuadCharacter::from_disc(disc)
            .map_err(|_| IdentityError::NotFundamental(disc))?;
        if !chi.is_primitive() {
            return Err(IdentityError::NotFundamental(disc));
        }
        let l = bernoulli::l_value(&chi, k)
            .map_err(|e| IdentityError::BadLevel(e.to_string()))?;
        if l.is_zero() {
            return Err(IdentityError::BadLevel("L(1-k, chi) vanishes".into()));
        }
        let c1 = rational(2, 1) / &l;
        let rq1 = u64::try_from(rep_count_shell(a, 1)).expect("r_Q(1) fits u64");
        let c2 = rational(rq1 as i64, 1) - &c1;
        Ok(ClosedForm {
            k,
            level,
            chi,
            c1,
            c2,
            rq1,
        })
    }
}

/// c1 sum_{d|n} chi(d) d^{k-1} + c2 sum_{d|n} chi(n/d) d^{k-1}, exact.
pub fn closed_rq(cf: &ClosedForm, n: u64) -> Rat {
    assert!(n >= 1);
    let mut s1 = Int::zero();
    let mut s2 = Int::zero();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let pow = Int::from(d).pow(cf.k - 1);
        let cd = cf.chi.eval(d as i64);
        if cd != 0 {
            s1 += Int::from(cd) * &pow;
        }
        let cq = cf.chi.eval((n / d) as i64);
        if cq != 0 {
            s2 += Int::from(cq) * &pow;
        }
    }
    &cf.c1 * Rat::from_integer(s1) + &cf.c2 * Rat::from_integer(s2)
}

/// r_Q(p^m) in closed form: c1 + c2 p^{m(k-1)} when p divides the level,
/// otherwise (c1 + c2 chi(p)^m) * sum_{a=0}^{m} (chi(p) p^{k-1})^a.
pub fn rq_prime_power(cf: &ClosedForm, p: u64, m: u32) -> Rat {
    let chi_p = cf.chi.eval(p as i64);
    let pk = Rat::from_integer(Int::from(p).pow(cf.k - 1));
    if chi_p == 0 {
        // p | N: only d = 1 and d = p^m survive the character
        let pm = Rat::from_integer(Int::from(p).pow(m * (cf.k - 1)));
        return &cf.c1 + &cf.c2 * pm;
    }
    let step = pk * rational(chi_p as i64, 1);
    let mut geom = Rat::zero();
    let mut term = rational(1, 1);
    for _ in 0..=m {
        geom += &term;
        term *= &step;
    }
    let chi_pm = if m % 2 == 0 { 1 } else { chi_p };
    (&cf.c1 + &cf.c2 * rational(chi_pm as i64, 1)) * geom
}

/// r_Q(n^2) by the multiplicative square formula: with n = N^m prod p_i^{m_i}
/// (N the prime level), r_Q(n^2) = r_Q(N^{2m}) prod r_Q(p_i^{2m_i}) / r_Q(1)^t
/// where t is the number of distinct primes p_i != N.
pub fn rq_square(cf: &ClosedForm, n: u64) -> Result<Rat, IdentityError> {
    if !is_prime(cf.level as u64) {
        return Err(IdentityError::LevelNotPrime(cf.level));
    }
    if cf.rq1 == 0 {
        return Err(IdentityError::ZeroR1);
    }
    assert!(n >= 1);
    let mut m_level = 0u32;
    let mut rest = n;
    while rest % cf.level as u64 == 0 {
        rest /= cf.level as u64;
        m_level += 1;
    }
    let mut value = rq_prime_power(cf, cf.level as u64, 2 * m_level);
    let mut t = 0u32;
    for (p, e) in factorize(rest) {
        value *= rq_prime_power(cf, p, 2 * e);
        t += 1;
    }
    let r1 = rational(cf.rq1 as i64, 1);
    for _ in 0..t {
        value /= &r1;
    }
    Ok(value)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
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

/// Outcome of checking r_Q(1) r_Q(p^m n) = r_Q(p^m) r_Q(n) over a range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainIdentityReport {
    pub p: u64,
    pub m: u32,
    pub checked: usize,
    /// n values where the identity failed (expected empty).
    pub failures: Vec<u64>,
}

impl MainIdentityReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Theorem main(ii) by pure enumeration: for every n <= n_max coprime to
/// p, compare r_Q(1) r_Q(p^m n) with r_Q(p^m) r_Q(n) from one theta table.
pub fn verify_main_identity(
    a: &GramMatrix,
    p: u64,
    m: u32,
    n_max: u64,
) -> Result<MainIdentityReport, IdentityError> {
    let cf = ClosedForm::for_form(a)?;
    if cf.level as u64 % p == 0 {
        return Err(IdentityError::PrimeDividesLevel(p, cf.level));
    }
    let chi_pm = if m % 2 == 0 { 1 } else { cf.chi.eval(p as i64) };
    if chi_pm != 1 {
        return Err(IdentityError::CharConditionFailed(chi_pm));
    }
    let pm = p.pow(m);
    let bound = usize::try_from(pm * n_max).expect("table bound fits usize");
    let table = theta_series(a, bound);
    let r1 = table.count(1);
    let rpm = table.count(pm as usize);
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=n_max {
        if n % p == 0 {
            continue;
        }
        checked += 1;
        if r1 * table.count((pm * n) as usize) != rpm * table.count(n as usize) {
            failures.push(n);
        }
    }
    Ok(MainIdentityReport {
        p,
        m,
        checked,
        failures,
    })
}

/// Eq. (primecondition) for m = 2: true iff the enumerated r_Q(p^2)
/// equals r_Q(1) * (1 + chi(p) p^{k-1} + p^{2(k-1)}).
pub fn verify_conditional(a: &GramMatrix, p: u64) -> Result<bool, IdentityError> {
    let cf = ClosedForm::for_form(a)?;
    if cf.level as u64 % p == 0 {
        return Err(IdentityError::PrimeDividesLevel(p, cf.level));
    }
    let mut predicted = Rat::zero();
    for a_exp in 0..=2u32 {
        let chi_pa = if a_exp % 2 == 0 { 1 } else { cf.chi.eval(p as i64) };
        predicted += rational(chi_pa as i64, 1)
            * Rat::from_integer(Int::from(p).pow(a_exp * (cf.k - 1)));
    }
    predicted *= rational(cf.rq1 as i64, 1);
    let actual = rep_count_shell(a, p * p);
    Ok(Rat::from_integer(Int::from(actual)) == predicted)
}

/// Jacobi's six-squares count: the number of (x_1..x_6) in Z^6 with
/// sum x_i^2 = n is 16 sum_{d|n} chi_{-4}(n/d) d^2 - 4 sum_{d|n} chi_{-4}(d) d^2.
pub fn jacobi_r6(n: u64) -> u128 {
    if n == 0 {
        return 1;
    }
    let chi = QuadCharacter::from_disc(-4).expect("-4 is a fundamental discriminant");
    let mut acc = 0i128;
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let d2 = (d as i128) * (d as i128);
        acc += 16 * chi.eval((n / d) as i64) as i128 * d2;
        acc -= 4 * chi.eval(d as i64) as i128 * d2;
    }
    u128::try_from(acc).expect("six-squares count is nonnegative")
}
