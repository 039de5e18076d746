//! Brute-force box enumeration used as an independent oracle.
//!
//! For Q(x) = (1/2) x^T A x <= B every solution satisfies the exact dual
//! bound x_i^2 <= 2B * (A^{-1})_ii = 2B * adj(A)_ii / det(A), so the box
//! |x_i| <= floor(sqrt(floor(2B * adj_ii / det))) contains all of them.
//! No pruning beyond the box; values are accumulated incrementally so
//! the inner loop is two additions and a compare.

use crate::qform::GramMatrix;
use crate::Int;

use super::ldl::to_i64_matrix;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle box has {volume} points, above the guard of {guard}")]
    BoxTooLarge { volume: u128, guard: u128 },
}

/// Documented guard on the box volume; larger instances must use the
/// pruned enumeration.
pub const ORACLE_BOX_GUARD: u128 = 700_000_000;

/// counts[n] = #{x : (1/2) x^T A x = n} for n <= b, by naive box search.
pub(crate) fn box_counts(a: &GramMatrix, b: usize) -> Result<Vec<u128>, OracleError> {
    let dim = a.dim();
    let det = a.determinant();
    let adj = a.adjugate();
    let radii: Vec<i64> = (0..dim)
        .map(|i| {
            let sq = Int::from(2 * b as i64) * &adj[i][i] / &det;
            i64::try_from(sq).expect("box radius fits i64").isqrt()
        })
        .collect();
    let volume = radii
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(2 * r as u128 + 1))
        .unwrap_or(u128::MAX);
    if volume > ORACLE_BOX_GUARD {
        return Err(OracleError::BoxTooLarge {
            volume,
            guard: ORACLE_BOX_GUARD,
        });
    }
    let m = to_i64_matrix(a.entries());
    let v_max = 2 * b as i64;
    let mut hist = vec![0u128; v_max as usize + 1];
    let mut w = vec![vec![0i64; dim]; dim + 1];
    box_walk(&m, &radii, v_max, dim, 0, &mut w, &mut hist);
    Ok((0..=b).map(|n| hist[2 * n]).collect())
}

fn box_walk(
    m: &[Vec<i64>],
    radii: &[i64],
    v_max: i64,
    level: usize,
    v_partial: i64,
    w: &mut [Vec<i64>],
    hist: &mut [u128],
) {
    let i = level - 1;
    let r = radii[i];
    if i == 0 {
        let m00 = m[0][0];
        let w0 = w[1][0];
        let lo = -r;
        let mut v = m00 * lo * lo + 2 * w0 * lo + v_partial;
        let mut dv = m00 * (2 * lo + 1) + 2 * w0;
        for _ in lo..=r {
            if (0..=v_max).contains(&v) {
                hist[v as usize] += 1;
            }
            v += dv;
            dv += 2 * m00;
        }
        return;
    }
    for xi in -r..=r {
        for j in 0..i {
            w[i][j] = w[level][j] + m[j][i] * xi;
        }
        let vp = v_partial + m[i][i] * xi * xi + 2 * w[level][i] * xi;
        box_walk(m, radii, v_max, i, vp, w, hist);
    }
}
