//! Generalized Bernoulli numbers B_{k,chi} and the special values
//! L(1-k, chi) = -B_{k,chi}/k, computed exactly.
//!
//! B_{k,chi} is extracted from the generating identity
//!
//!   sum_{a=1}^{N-1} chi(a) t e^{at} / (e^{Nt} - 1) = sum_k B_{k,chi} t^k / k!
//!
//! by truncated power-series arithmetic in t with rational coefficients.
//! Factoring e^{Nt} - 1 = t g(t) with g(0) = N turns this into a plain
//! series division.

use num_traits::{One, Zero};

use crate::dirichlet::QuadCharacter;
use crate::{Int, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BernoulliError {
    #[error("the trivial character is not supported (only nontrivial primitive characters)")]
    TrivialCharacter,
    #[error("character of discriminant {0} is not primitive (conductor {1})")]
    NotPrimitive(i64, i64),
}

/// A (k, chi) pair with its Bernoulli number and L-value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliResult {
    pub k: u32,
    pub chi: QuadCharacter,
    pub bernoulli: Rat,
    pub l_value: Rat,
}

fn require_nontrivial_primitive(chi: &QuadCharacter) -> Result<(), BernoulliError> {
    // modulus 1 covers both the trivial character and disc = 1
    if chi.is_trivial() || chi.modulus() == 1 {
        return Err(BernoulliError::TrivialCharacter);
    }
    let (primitive, conductor) = chi.primitivity();
    if !primitive {
        return Err(BernoulliError::NotPrimitive(
            chi.disc().unwrap_or(0),
            conductor,
        ));
    }
    Ok(())
}

/// B_{k,chi} for a nontrivial primitive quadratic character.
pub fn gen_bernoulli(chi: &QuadCharacter, k: u32) -> Result<Rat, BernoulliError> {
    require_nontrivial_primitive(chi)?;
    let n = chi.modulus();
    let order = k as usize + 1; // coefficients of t^0..t^k

    // factorials 0!..(k+1)!
    let mut fact = vec![Int::one()];
    for j in 1..=order {
        let prev = fact[j - 1].clone();
        fact.push(prev * Int::from(j as u64));
    }

    // h(t) = sum_a chi(a) e^{at}: coefficient of t^j is sum_a chi(a) a^j / j!
    let mut h = vec![Rat::zero(); order];
    for a in 1..n {
        let chi_a = chi.eval(a);
        if chi_a == 0 {
            continue;
        }
        let mut a_pow = Int::one();
        for (j, hj) in h.iter_mut().enumerate() {
            let term = Rat::new(&a_pow * Int::from(chi_a), fact[j].clone());
            *hj += term;
            a_pow *= Int::from(a);
        }
    }

    // g(t) = (e^{Nt} - 1)/t: coefficient of t^j is N^{j+1} / (j+1)!
    let mut g = vec![Rat::zero(); order];
    let mut n_pow = Int::from(n);
    for (j, gj) in g.iter_mut().enumerate() {
        *gj = Rat::new(n_pow.clone(), fact[j + 1].clone());
        n_pow *= Int::from(n);
    }

    // q = h/g by long division; B_{k,chi} = k! * q_k
    let mut q = vec![Rat::zero(); order];
    for m in 0..order {
        let mut acc = h[m].clone();
        for i in 1..=m {
            acc -= &g[i] * &q[m - i];
        }
        q[m] = acc / &g[0];
    }
    Ok(&q[k as usize] * Rat::from_integer(fact[k as usize].clone()))
}

/// L(1-k, chi) = -B_{k,chi}/k for k >= 1.
pub fn l_value(chi: &QuadCharacter, k: u32) -> Result<Rat, BernoulliError> {
    assert!(k >= 1, "l_value requires k >= 1");
    let b = gen_bernoulli(chi, k)?;
    Ok(-b / Rat::from_integer(Int::from(k)))
}

/// Both values bundled.
pub fn bernoulli_result(chi: &QuadCharacter, k: u32) -> Result<BernoulliResult, BernoulliError> {
    let bernoulli = gen_bernoulli(chi, k)?;
    let l = -&bernoulli / Rat::from_integer(Int::from(k.max(1)));
    Ok(BernoulliResult {
        k,
        chi: *chi,
        bernoulli,
        l_value: l,
    })
}
