//! Integral quadratic forms given by Gram matrices.
//!
//! A form Q(x) = (1/2) x^T A x for a symmetric positive definite integer
//! matrix A with even diagonal entries (so Q takes integer values). All
//! invariants are decided exactly: positive definiteness by leading
//! principal minors, the level through the exact adjugate.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Polynomial;
use crate::{Int, IntPolynomial, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("diagonal entry at index {0} is odd")]
    OddDiagonal(usize),
    #[error("matrix is not positive definite (leading principal minor {0} is nonpositive)")]
    NotPositiveDefinite(usize),
    #[error("dimension {0} is odd; only even-dimensional forms are supported")]
    OddDimension(usize),
    #[error("malformed gram matrix encoding: {0}")]
    BadEncoding(String),
}

/// A validated even-diagonal positive definite symmetric integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    dim: usize,
    entries: Vec<Vec<Int>>,
}

/// Derived invariants of a form: determinant, level, dual diagonal,
/// weight k = r/2, and the discriminant (-1)^k det(A) of its character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormProfile {
    pub det: Int,
    pub level: Int,
    pub dual_diag: Vec<Int>,
    pub weight: usize,
    pub char_disc: Int,
}

/// Exact determinant of an integer matrix by fraction-free (Bareiss)
/// elimination.
pub fn bareiss_det(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // pivot swap
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact in Bareiss elimination
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

impl GramMatrix {
    /// Validate an integer matrix as a Gram matrix: square, symmetric,
    /// even diagonal, even dimension, positive definite.
    pub fn validate(entries: Vec<Vec<Int>>) -> Result<Self, FormError> {
        let dim = entries.len();
        if entries.iter().any(|row| row.len() != dim) {
            return Err(FormError::NotSquare);
        }
        for i in 0..dim {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(FormError::NotSymmetric);
                }
            }
            if entries[i][i].is_odd() {
                return Err(FormError::OddDiagonal(i));
            }
        }
        if dim % 2 != 0 || dim == 0 {
            return Err(FormError::OddDimension(dim));
        }
        for k in 1..=dim {
            let sub: Vec<Vec<Int>> = entries[..k].iter().map(|row| row[..k].to_vec()).collect();
            if bareiss_det(&sub) <= Int::zero() {
                return Err(FormError::NotPositiveDefinite(k));
            }
        }
        Ok(GramMatrix { dim, entries })
    }

    pub fn from_i64(entries: &[&[i64]]) -> Result<Self, FormError> {
        Self::validate(
            entries
                .iter()
                .map(|row| row.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Vec<Int>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Int {
        &self.entries[i][j]
    }

    /// Weight of the associated theta series: k = r/2.
    pub fn weight(&self) -> usize {
        self.dim / 2
    }

    pub fn determinant(&self) -> Int {
        bareiss_det(&self.entries)
    }

    /// Adjugate matrix, computed exactly as det(A) * A^{-1} via rational
    /// Gauss-Jordan elimination.
    pub fn adjugate(&self) -> Vec<Vec<Int>> {
        let det = self.determinant();
        let inv = rational_inverse(&self.entries);
        inv.iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let scaled = x * Rat::from_integer(det.clone());
                        debug_assert!(scaled.is_integer());
                        scaled.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// The level: the minimal positive N with N * A^{-1} integral with even
    /// diagonal, found among the divisors of 2*det(A) in increasing order
    /// (2*det(A) itself always qualifies). Also returns the diagonal of
    /// N * A^{-1}.
    pub fn level(&self) -> (Int, Vec<Int>) {
        let det = self.determinant();
        let adj = self.adjugate();
        let two_det = &det * 2;
        for n in sorted_divisors(&two_det) {
            // N*A^{-1} = N*adj/det integral with even diagonal
            let integral = adj
                .iter()
                .flatten()
                .all(|a| (a * &n).mod_floor(&det).is_zero());
            if !integral {
                continue;
            }
            let even_diag = (0..self.dim).all(|i| ((&adj[i][i] * &n) / &det).is_even());
            if even_diag {
                let diag = (0..self.dim).map(|i| (&adj[i][i] * &n) / &det).collect();
                return (n, diag);
            }
        }
        unreachable!("2*det(A) always satisfies the level condition");
    }

    /// Characteristic polynomial det(xI - A), exact (Faddeev-LeVerrier
    /// over rationals; the divisions are by integers so the result is
    /// integral).
    pub fn char_poly(&self) -> IntPolynomial {
        let r = self.dim;
        let a: Vec<Vec<Rat>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let mut coeffs = vec![Rat::zero(); r + 1];
        coeffs[r] = Rat::one();
        // m starts as the identity
        let mut m: Vec<Vec<Rat>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        for step in 1..=r {
            let am = mat_mul(&a, &m);
            let trace: Rat = (0..r).map(|i| am[i][i].clone()).sum();
            let c = -trace / Rat::from_integer(Int::from(step as i64));
            coeffs[r - step] = c.clone();
            m = am;
            for (i, row) in m.iter_mut().enumerate().take(r) {
                row[i] += &c;
            }
        }
        Polynomial::new(
            coeffs
                .into_iter()
                .map(|c| {
                    debug_assert!(c.is_integer());
                    c.to_integer()
                })
                .collect(),
        )
    }

    /// All derived invariants at once.
    pub fn profile(&self) -> FormProfile {
        let det = self.determinant();
        let (level, dual_diag) = self.level();
        let weight = self.weight();
        let char_disc = if weight % 2 == 0 { det.clone() } else { -det.clone() };
        FormProfile {
            det,
            level,
            dual_diag,
            weight,
            char_disc,
        }
    }

    /// Q(x) = (1/2) x^T A x, exact.
    pub fn eval(&self, x: &[Int]) -> Int {
        let mut two_q = Int::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                two_q += &self.entries[i][j] * &x[i] * &x[j];
            }
        }
        two_q / 2
    }

    /// JSON encoding {"dim": r, "entries": [[...], ...]}.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<serde_json::Value>> = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| serde_json::Value::Number(i64::try_from(x).expect("small entry").into()))
                    .collect()
            })
            .collect();
        serde_json::json!({"dim": self.dim, "entries": rows})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, FormError> {
        let entries = v
            .get("entries")
            .and_then(|e| e.as_array())
            .ok_or_else(|| FormError::BadEncoding("missing entries".into()))?;
        let rows: Result<Vec<Vec<Int>>, FormError> = entries
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| FormError::BadEncoding("row is not an array".into()))?
                    .iter()
                    .map(|x| {
                        x.as_i64()
                            .map(Int::from)
                            .ok_or_else(|| FormError::BadEncoding(format!("bad entry {x}")))
                    })
                    .collect()
            })
            .collect();
        let rows = rows?;
        if let Some(dim) = v.get("dim").and_then(|d| d.as_u64()) {
            if dim as usize != rows.len() {
                return Err(FormError::BadEncoding("dim does not match entries".into()));
            }
        }
        Self::validate(rows)
    }

    /// Inline CLI encoding: rows separated by ';', entries by ','
    /// (e.g. "2,1;1,2").
    pub fn from_inline(s: &str) -> Result<Self, FormError> {
        let rows: Result<Vec<Vec<Int>>, FormError> = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<i64>()
                            .map(Int::from)
                            .map_err(|_| FormError::BadEncoding(format!("bad entry {x:?}")))
                    })
                    .collect()
            })
            .collect();
        Self::validate(rows?)
    }
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Exact inverse of a nonsingular integer matrix over the rationals.
fn rational_inverse(m: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .expect("matrix is nonsingular");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[i][j] -= t;
                let t = &f * &inv[col][j];
                inv[i][j] -= t;
            }
        }
    }
    inv
}

/// Positive divisors of n in increasing order.
pub fn sorted_divisors(n: &Int) -> Vec<Int> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Int::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
