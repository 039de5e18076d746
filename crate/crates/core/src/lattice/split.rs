//! Meet-in-the-middle enumeration for higher-dimensional blocks.
//!
//! Split the coordinates of a block A into x = (g, z) with
//! A = [[P, C], [C^T, R]] and P the leading h x h minor, dP = det P > 0.
//! With w = P g + C z one has the exact integer identity
//!
//!   dP * x^T A x = w^T adj(P) w + z^T G_z z,
//!   G_z = dP * R - C^T adj(P) C,
//!
//! and w ranges exactly over { w : adj(P) (w - C z) = 0 (mod dP) }. Both
//! sides are therefore enumerated independently up to value dP * 2B,
//! bucketed by the coset key adj(P) w mod dP (resp. adj(P) C z mod dP),
//! and the representation numbers recovered by convolving matching
//! buckets at the offsets dP * 2n. The work is O(sqrt(total points))
//! instead of O(total points).


use crate::qform::bareiss_det;
use crate::Int;

use super::ldl::{scaled_ldl, Enumerator, PointSink};

/// Realized-coset histogram store. Keys are the flattened vectors
/// kappa in (Z/dP)^h; only cosets actually hit allocate a histogram.
struct CosetHists {
    dp: i64,
    h: usize,
    /// flat key -> dense id + 1 (0 = unused).
    ids: Vec<u32>,
    keys: Vec<usize>,
    hists: Vec<Vec<u64>>,
    slots: usize,
}

impl CosetHists {
    fn new(dp: i64, h: usize, slots: usize) -> Self {
        let size = (dp as usize).pow(h as u32);
        CosetHists {
            dp,
            h,
            ids: vec![0; size],
            keys: Vec::new(),
            hists: Vec::new(),
            slots,
        }
    }

    #[inline]
    fn hist_mut(&mut self, key: usize) -> &mut Vec<u64> {
        let id = self.ids[key];
        if id == 0 {
            self.keys.push(key);
            self.hists.push(vec![0; self.slots]);
            self.ids[key] = self.hists.len() as u32;
            return self.hists.last_mut().unwrap();
        }
        &mut self.hists[id as usize - 1]
    }

    fn get(&self, key: usize) -> Option<&Vec<u64>> {
        match self.ids[key] {
            0 => None,
            id => Some(&self.hists[id as usize - 1]),
        }
    }

    /// Flat key of -kappa.
    fn negate_key(&self, mut key: usize) -> usize {
        let dp = self.dp as usize;
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..self.h {
            let digit = key % dp;
            out += ((dp - digit) % dp) * stride;
            key /= dp;
            stride *= dp;
        }
        out
    }
}

/// Sink bucketing points by kappa = (K x) mod dP. The flat key for each
/// residue class of the innermost coordinate is precomputed per prefix,
/// so the hot loop is a table lookup and a histogram increment.
struct CosetSink<'a> {
    kmat: &'a [Vec<i64>],
    dp: i64,
    /// flat keys for x0 = phase (mod dP), rebuilt per prefix
    phase_keys: Vec<usize>,
    phase: usize,
    store: CosetHists,
}

impl<'a> CosetSink<'a> {
    fn new(kmat: &'a [Vec<i64>], dp: i64, slots: usize) -> Self {
        let h = kmat.len();
        CosetSink {
            kmat,
            dp,
            phase_keys: vec![0; dp as usize],
            phase: 0,
            store: CosetHists::new(dp, h, slots),
        }
    }
}

impl PointSink for CosetSink<'_> {
    fn begin_prefix(&mut self, x: &[i64], lo: i64) {
        let dp = self.dp;
        let mut stride = 1usize;
        self.phase_keys.fill(0);
        for row in self.kmat {
            let mut base = 0i64;
            for (j, &c) in row.iter().enumerate().skip(1) {
                base += c * x[j];
            }
            let step = row[0].rem_euclid(dp);
            let mut digit = base.rem_euclid(dp);
            for key in self.phase_keys.iter_mut() {
                *key += digit as usize * stride;
                digit += step;
                if digit >= dp {
                    digit -= dp;
                }
            }
            stride *= dp as usize;
        }
        self.phase = lo.rem_euclid(dp) as usize;
    }

    #[inline]
    fn emit(&mut self, v: i64, weight: u64) {
        let key = self.phase_keys[self.phase];
        self.phase += 1;
        if self.phase == self.dp as usize {
            self.phase = 0;
        }
        self.store.hist_mut(key)[v as usize] += weight;
    }
}

fn adjugate_i64(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let big: Vec<Vec<Int>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // adj[i][j] = (-1)^{i+j} * minor(j, i)
                    let minor: Vec<Vec<Int>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| {
                            (0..n)
                                .filter(|&c| c != i)
                                .map(|c| big[r][c].clone())
                                .collect()
                        })
                        .collect();
                    let det = bareiss_det(&minor);
                    let signed = if (i + j) % 2 == 0 { det } else { -det };
                    i64::try_from(signed).expect("adjugate entry fits i64")
                })
                .collect()
        })
        .collect()
}

fn submatrix(m: &[Vec<i64>], rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Vec<i64>> {
    m[rows]
        .iter()
        .map(|r| r[cols.clone()].to_vec())
        .collect()
}

fn mat_mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| a[i][t].checked_mul(b[t][j]).unwrap()).sum())
                .collect()
        })
        .collect()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (n, m) = (a.len(), a[0].len());
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

/// Value counts of one connected block by meet-in-the-middle: returns
/// counts[n] = #{x : x^T A x = 2n} for n <= b, or None if the coset key
/// space is too large for the flat index table.
pub(crate) fn block_counts_split(m: &[Vec<i64>], b: usize) -> Option<Vec<u128>> {
    let d = m.len();
    debug_assert!(d >= 2);
    let h = d / 2;
    let p = submatrix(m, 0..h, 0..h);
    let dp = i64::try_from(bareiss_det(
        &p.iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect::<Vec<Vec<Int>>>(),
    ))
    .ok()?;
    if (dp as u128).checked_pow(h as u32)? > 4_000_000 {
        return None;
    }
    let adj_p = adjugate_i64(&p);
    let c = submatrix(m, 0..h, h..d);
    let r = submatrix(m, h..d, h..d);
    // G_z = dP * R - C^T adj(P) C
    let ct_adj = mat_mul_i64(&transpose(&c), &adj_p);
    let ct_adj_c = mat_mul_i64(&ct_adj, &c);
    let g_z: Vec<Vec<i64>> = (0..d - h)
        .map(|i| {
            (0..d - h)
                .map(|j| dp.checked_mul(r[i][j]).unwrap() - ct_adj_c[i][j])
                .collect()
        })
        .collect();
    // coset key matrices: adj(P) for w, adj(P) C for z
    let k_z = mat_mul_i64(&adj_p, &c);

    let v_side = dp.checked_mul(2 * b as i64)?;
    let slots = v_side as usize + 1;

    let ldl_w = scaled_ldl(&adj_p);
    let mut w_sink = CosetSink::new(&adj_p, dp, slots);
    Enumerator {
        m: &adj_p,
        ldl: &ldl_w,
        v_max: v_side,
        half: true,
    }
    .run(&mut w_sink);

    let ldl_z = scaled_ldl(&g_z);
    let mut z_sink = CosetSink::new(&k_z, dp, slots);
    Enumerator {
        m: &g_z,
        ldl: &ldl_z,
        v_max: v_side,
        half: true,
    }
    .run(&mut z_sink);

    let w_store = w_sink.store;
    let z_store = z_sink.store;

    // The halved-with-weight-2 z histograms already equal the full point
    // counts after pairing with a negation-symmetric w table, so only the
    // w side is symmetrized: W_full[kappa][v] = (W[kappa][v] + W[-kappa][v])/2.
    let mut out = vec![0u128; b + 1];
    let zero_w = vec![0u64; slots];
    for (zi, &zkey) in z_store.keys.iter().enumerate() {
        let zh = &z_store.hists[zi];
        let w_pos = w_store.get(zkey);
        let w_neg = w_store.get(w_store.negate_key(zkey));
        if w_pos.is_none() && w_neg.is_none() {
            continue;
        }
        let w_pos = w_pos.unwrap_or(&zero_w);
        let w_neg = w_neg.unwrap_or(&zero_w);
        let wf: Vec<u64> = w_pos
            .iter()
            .zip(w_neg)
            .map(|(&a, &bb)| {
                debug_assert!((a + bb) % 2 == 0);
                (a + bb) / 2
            })
            .collect();
        for (n, slot) in out.iter_mut().enumerate() {
            let t = 2 * n as i64 * dp;
            let hi = t.min(v_side) as usize;
            let lo = (t - v_side).max(0) as usize;
            let mut acc = 0u128;
            for v in lo..=hi {
                let a = zh[v];
                if a != 0 {
                    acc += a as u128 * wf[(t as usize) - v] as u128;
                }
            }
            *slot += acc;
        }
    }
    Some(out)
}
