//! Exact representation numbers r_Q(n) by lattice-point enumeration.
//!
//! The public entry points are [`theta_series`] (full table of counts up
//! to a bound), [`rep_count_shell`] (a single shell without a table) and
//! [`theta_series_oracle`] (naive box enumeration, used to cross-check
//! the pruned paths on small instances).
//!
//! `theta_series` first splits the Gram matrix into connected blocks
//! (components of the nonzero-entry graph) and convolves their tables.
//! Each block is enumerated either by pruned depth-first search (small
//! dimensions, parallelized over the top coordinate) or by a
//! meet-in-the-middle coset split that brings the work down to roughly
//! the square root of the number of lattice points in the ball.

mod ldl;
mod oracle;
mod split;

pub use oracle::{OracleError, ORACLE_BOX_GUARD};

use rayon::prelude::*;

use crate::qform::GramMatrix;
use crate::qseries::{CharLabel, QSeries};
use crate::{Int, Rat};

use ldl::{scaled_ldl, shell_count, to_i64_matrix, Enumerator, HistogramSink};

/// The table (r_Q(0), ..., r_Q(B)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepTable {
    bound: usize,
    counts: Vec<u128>,
}

impl RepTable {
    pub(crate) fn new(bound: usize, counts: Vec<u128>) -> Self {
        debug_assert_eq!(counts.len(), bound + 1);
        debug_assert_eq!(counts[0], 1, "the zero vector is the unique solution of Q(x)=0");
        RepTable { bound, counts }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn count(&self, n: usize) -> u128 {
        self.counts[n]
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    /// View as a q-expansion tagged with the space it lives in.
    pub fn to_qseries(&self, weight: i64, level: i64, char_label: CharLabel) -> QSeries<Rat> {
        QSeries::new(
            self.counts
                .iter()
                .map(|&c| Rat::from_integer(Int::from(c)))
                .collect(),
            weight,
            level,
            char_label,
        )
    }

    /// {"bound": B, "counts": [...]} with plain integers.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bound": self.bound,
            "counts": self
                .counts
                .iter()
                .map(|&c| u64::try_from(c).expect("count fits u64"))
                .collect::<Vec<u64>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let bound = v.get("bound")?.as_u64()? as usize;
        let counts: Option<Vec<u128>> = v
            .get("counts")?
            .as_array()?
            .iter()
            .map(|c| c.as_u64().map(u128::from))
            .collect();
        let counts = counts?;
        if counts.len() != bound + 1 {
            return None;
        }
        Some(RepTable { bound, counts })
    }
}

/// Connected components of the graph on coordinates with an edge where
/// the Gram matrix has a nonzero off-diagonal entry. Q splits as a direct
/// sum over these blocks.
fn components(m: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for j in 0..n {
                if !seen[j] && m[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                    queue.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn principal_submatrix(m: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<i64>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| m[i][j]).collect())
        .collect()
}

/// counts[n] = #{x : x^T A_block x = 2n} for one block, by parallel
/// pruned DFS with {x, -x} symmetry folding.
fn block_counts_direct(m: &[Vec<i64>], b: usize) -> Vec<u128> {
    let v_max = 2 * b as i64;
    let ldl = scaled_ldl(m);
    let hist = if m.len() == 1 {
        let mut sink = HistogramSink::new(v_max);
        Enumerator {
            m,
            ldl: &ldl,
            v_max,
            half: true,
        }
        .run(&mut sink);
        sink.hist
    } else {
        let en = Enumerator {
            m,
            ldl: &ldl,
            v_max,
            half: true,
        };
        let (lo, hi) = en.top_range();
        (lo..=hi)
            .into_par_iter()
            .fold(
                || vec![0u64; v_max as usize + 1],
                |mut hist, xi| {
                    let mut sink = HistogramSink { hist: std::mem::take(&mut hist) };
                    en.run_top_value(xi, &mut sink);
                    sink.hist
                },
            )
            .reduce(
                || vec![0u64; v_max as usize + 1],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(&b) {
                        *x += y;
                    }
                    a
                },
            )
    };
    (0..=b).map(|n| hist[2 * n] as u128).collect()
}

/// Blocks of dimension up to this use direct DFS; larger ones use the
/// meet-in-the-middle split.
const DIRECT_DFS_MAX_DIM: usize = 4;

fn block_counts(m: &[Vec<i64>], b: usize) -> Vec<u128> {
    if m.len() <= DIRECT_DFS_MAX_DIM {
        return block_counts_direct(m, b);
    }
    split::block_counts_split(m, b).unwrap_or_else(|| block_counts_direct(m, b))
}

fn convolve(a: &[u128], b: &[u128], bound: usize) -> Vec<u128> {
    let mut out = vec![0u128; bound + 1];
    for (i, &x) in a.iter().enumerate().take(bound + 1) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(bound + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// The theta table (r_Q(0), ..., r_Q(B)) of Q(x) = (1/2) x^T A x.
pub fn theta_series(a: &GramMatrix, b: usize) -> RepTable {
    let m = to_i64_matrix(a.entries());
    let mut total = vec![0u128; b + 1];
    total[0] = 1;
    for comp in components(&m) {
        let sub = principal_submatrix(&m, &comp);
        let counts = block_counts(&sub, b);
        total = convolve(&total, &counts, b);
    }
    RepTable::new(b, total)
}

/// r_Q(n) for a single n, with O(dim^2) memory and no table: the pruned
/// DFS solves the last coordinate exactly by integer square root.
pub fn rep_count_shell(a: &GramMatrix, n: u64) -> u128 {
    let m = to_i64_matrix(a.entries());
    let ldl = scaled_ldl(&m);
    let target = i64::try_from(2 * n).expect("shell target fits i64");
    shell_count(&m, &ldl, target)
}

/// Brute-force reference: enumerate the full dual-bound box. Guarded to
/// small instances; see [`ORACLE_BOX_GUARD`].
pub fn theta_series_oracle(a: &GramMatrix, b: usize) -> Result<RepTable, OracleError> {
    Ok(RepTable::new(b, oracle::box_counts(a, b)?))
}
