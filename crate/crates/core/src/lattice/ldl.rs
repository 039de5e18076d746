//! Scaled-integer LDL^T decomposition and the pruned depth-first
//! enumerator built on it.
//!
//! For a symmetric positive definite integer matrix M the rational
//! decomposition x^T M x = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2 is
//! cleared of denominators: with S the common denominator of the u_ij and
//! y_i = S x_i + sum_{j>i} (S u_ij) x_j, there is an integer C with
//!
//!   sum_i D_i y_i^2 = C * x^T M x,   D_i > 0 integers.
//!
//! The enumerator prunes each coordinate to the exact integer interval
//! allowed by the remaining budget C*V - (partial sum), so it visits a
//! node set proportional to the number of solutions. The true value
//! x^T M x is carried alongside in plain integer arithmetic (second
//! differences in the innermost loop), so no division happens per point.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

pub(crate) struct ScaledLdl {
    pub dim: usize,
    /// Common denominator of the unit-triangular factor.
    pub s: i64,
    /// l[i][j] = S * u_ij for j > i (other entries unused).
    pub l: Vec<Vec<i64>>,
    /// D_i > 0.
    pub d: Vec<i64>,
    /// sum D_i y_i^2 = C * x^T M x.
    pub c: i64,
}

pub(crate) fn to_i64_matrix(m: &[Vec<Int>]) -> Vec<Vec<i64>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| i64::try_from(x).expect("matrix entry fits i64"))
                .collect()
        })
        .collect()
}

pub(crate) fn scaled_ldl(m: &[Vec<i64>]) -> ScaledLdl {
    let n = m.len();
    let rat = |v: i64| Rat::from_integer(Int::from(v));
    let mut u = vec![vec![Rat::zero(); n]; n];
    let mut d = vec![Rat::zero(); n];
    for i in 0..n {
        let mut di = rat(m[i][i]);
        for k in 0..i {
            di -= &d[k] * &u[k][i] * &u[k][i];
        }
        assert!(di.is_positive(), "matrix is not positive definite");
        for j in i + 1..n {
            let mut x = rat(m[i][j]);
            for k in 0..i {
                x -= &d[k] * &u[k][i] * &u[k][j];
            }
            u[i][j] = x / &di;
        }
        d[i] = di;
    }
    let mut s = Int::one();
    for i in 0..n {
        for j in i + 1..n {
            s = s.lcm(u[i][j].denom());
        }
    }
    let mut md = Int::one();
    for di in &d {
        md = md.lcm(di.denom());
    }
    let small = |x: Int| i64::try_from(x).expect("scaled LDL data fits i64");
    let s_rat = Rat::from_integer(s.clone());
    let md_rat = Rat::from_integer(md.clone());
    let l = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j > i {
                        small((&u[i][j] * &s_rat).to_integer())
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let dd = d
        .iter()
        .map(|di| small((di * &md_rat).to_integer()))
        .collect();
    let c = small(&s * &s * &md);
    ScaledLdl {
        dim: n,
        s: small(s),
        l,
        d: dd,
        c,
    }
}

/// Receiver for enumerated lattice points. `begin_prefix` is called once
/// per innermost loop with the fixed coordinates x[1..] and the first
/// innermost value `lo`; `emit` is then called for x_0 = lo, lo+1, ... in
/// order with the exact value v = x^T M x and the symmetry weight.
pub(crate) trait PointSink {
    fn begin_prefix(&mut self, x: &[i64], lo: i64);
    fn emit(&mut self, v: i64, weight: u64);
}

/// Plain value histogram: hist[v] += weight.
pub(crate) struct HistogramSink {
    pub hist: Vec<u64>,
}

impl HistogramSink {
    pub fn new(v_max: i64) -> Self {
        HistogramSink {
            hist: vec![0; v_max as usize + 1],
        }
    }
}

impl PointSink for HistogramSink {
    #[inline]
    fn begin_prefix(&mut self, _x: &[i64], _lo: i64) {}
    #[inline]
    fn emit(&mut self, v: i64, weight: u64) {
        self.hist[v as usize] += weight;
    }
}

struct Workspace {
    x: Vec<i64>,
    /// t[level][j] for j < level: sum of l[j][k] x_k over k >= level.
    t: Vec<Vec<i64>>,
    /// w[level][j] for j < level: sum of m[j][k] x_k over k >= level.
    w: Vec<Vec<i64>>,
}

impl Workspace {
    fn new(dim: usize) -> Self {
        Workspace {
            x: vec![0; dim],
            t: vec![vec![0; dim]; dim + 1],
            w: vec![vec![0; dim]; dim + 1],
        }
    }
}

pub(crate) struct Enumerator<'a> {
    pub m: &'a [Vec<i64>],
    pub ldl: &'a ScaledLdl,
    /// Enumerate all x with x^T M x <= v_max.
    pub v_max: i64,
    /// When set, enumerate one representative of each {x, -x} pair: the
    /// highest-index nonzero coordinate is positive and the weight is 2
    /// (the zero vector has weight 1).
    pub half: bool,
}

impl Enumerator<'_> {
    fn budget(&self) -> i64 {
        self.ldl
            .c
            .checked_mul(self.v_max)
            .expect("enumeration budget fits i64")
    }

    /// Serial enumeration.
    pub fn run<S: PointSink>(&self, sink: &mut S) {
        let mut ws = Workspace::new(self.ldl.dim);
        self.dfs(self.ldl.dim, 0, 0, true, &mut ws, sink);
    }

    /// Range of the top coordinate (after the symmetry clamp).
    pub fn top_range(&self) -> (i64, i64) {
        let i = self.ldl.dim - 1;
        let (mut lo, hi) = self.coord_range(self.budget(), 0, i);
        if self.half {
            lo = lo.max(0);
        }
        (lo, hi)
    }

    /// Enumerate the subtree below one fixed value of the top coordinate.
    /// Splitting the top range over workers and summing the resulting
    /// histograms reproduces `run` exactly.
    pub fn run_top_value<S: PointSink>(&self, xi: i64, sink: &mut S) {
        let dim = self.ldl.dim;
        assert!(dim >= 2, "top splitting needs at least two coordinates");
        let i = dim - 1;
        let mut ws = Workspace::new(dim);
        ws.x[i] = xi;
        for j in 0..i {
            ws.t[i][j] = self.ldl.l[j][i] * xi;
            ws.w[i][j] = self.m[j][i] * xi;
        }
        let y = self.ldl.s * xi;
        let scaled = self.ldl.d[i] * y * y;
        let vp = self.m[i][i] * xi * xi;
        self.dfs(i, scaled, vp, xi == 0, &mut ws, sink);
    }

    fn coord_range(&self, budget: i64, t_i: i64, i: usize) -> (i64, i64) {
        debug_assert!(budget >= 0);
        let mm = (budget / self.ldl.d[i]).isqrt();
        let s = self.ldl.s;
        // s > 0, so div_euclid is floor division
        let lo = -(mm + t_i).div_euclid(s);
        let hi = (mm - t_i).div_euclid(s);
        (lo, hi)
    }

    fn dfs<S: PointSink>(
        &self,
        level: usize,
        scaled_sum: i64,
        v_partial: i64,
        zero_prefix: bool,
        ws: &mut Workspace,
        sink: &mut S,
    ) {
        let i = level - 1;
        let remaining = self.budget() - scaled_sum;
        let t_i = ws.t[level][i];
        let (mut lo, hi) = self.coord_range(remaining, t_i, i);
        if self.half && zero_prefix {
            lo = lo.max(0);
        }
        if lo > hi {
            return;
        }
        if i == 0 {
            let m00 = self.m[0][0];
            let w0 = ws.w[1][0];
            sink.begin_prefix(&ws.x, lo);
            // v(x0) = m00 x0^2 + 2 w0 x0 + v_partial, stepped by second
            // differences.
            let mut v = m00 * lo * lo + 2 * w0 * lo + v_partial;
            let mut dv = m00 * (2 * lo + 1) + 2 * w0;
            let base_weight = if self.half { 2 } else { 1 };
            for x0 in lo..=hi {
                debug_assert!((0..=self.v_max).contains(&v));
                let weight = if zero_prefix && x0 == 0 { 1 } else { base_weight };
                sink.emit(v, weight);
                v += dv;
                dv += 2 * m00;
            }
            return;
        }
        for xi in lo..=hi {
            ws.x[i] = xi;
            let y = self.ldl.s * xi + t_i;
            let add = self.ldl.d[i] * y * y;
            for j in 0..i {
                ws.t[i][j] = ws.t[level][j] + self.ldl.l[j][i] * xi;
                ws.w[i][j] = ws.w[level][j] + self.m[j][i] * xi;
            }
            let vp = v_partial + self.m[i][i] * xi * xi + 2 * ws.w[level][i] * xi;
            self.dfs(i, scaled_sum + add, vp, zero_prefix && xi == 0, ws, sink);
        }
    }
}

/// Count x with x^T M x = target exactly, solving the last coordinate by
/// integer square root instead of tabulating. Memory O(dim^2), no table.
pub(crate) fn shell_count(m: &[Vec<i64>], ldl: &ScaledLdl, target: i64) -> u128 {
    if target < 0 {
        return 0;
    }
    let mut ws = Workspace::new(ldl.dim);
    let budget = ldl.c.checked_mul(target).expect("shell budget fits i64");
    shell_dfs(m, ldl, target, budget, ldl.dim, 0, 0, true, &mut ws)
}

#[allow(clippy::too_many_arguments)]
fn shell_dfs(
    m: &[Vec<i64>],
    ldl: &ScaledLdl,
    target: i64,
    budget: i64,
    level: usize,
    scaled_sum: i64,
    v_partial: i64,
    zero_prefix: bool,
    ws: &mut Workspace,
) -> u128 {
    let i = level - 1;
    let t_i = ws.t[level][i];
    if i == 0 {
        // m00 x^2 + 2 w0 x + (v_partial - target) = 0 over the integers
        let m00 = m[0][0];
        let w0 = ws.w[1][0];
        let disc = w0 * w0 + m00 * (target - v_partial);
        if disc < 0 {
            return 0;
        }
        let mm = disc.isqrt();
        if mm * mm != disc {
            return 0;
        }
        let mut count = 0u128;
        for root_num in [-w0 + mm, -w0 - mm] {
            if root_num % m00 != 0 {
                continue;
            }
            let x0 = root_num / m00;
            // weight the {x,-x} symmetry: representatives have the
            // highest-index nonzero coordinate positive
            if zero_prefix {
                if x0 > 0 {
                    count += 2;
                } else if x0 == 0 {
                    count += 1;
                }
            } else {
                count += 2;
            }
            if mm == 0 {
                break; // double root: count it once
            }
        }
        return count;
    }
    let remaining = budget - scaled_sum;
    let mm = (remaining / ldl.d[i]).isqrt();
    let s = ldl.s;
    let mut lo = -(mm + t_i).div_euclid(s);
    let hi = (mm - t_i).div_euclid(s);
    if zero_prefix {
        lo = lo.max(0);
    }
    let mut count = 0u128;
    for xi in lo..=hi {
        ws.x[i] = xi;
        let y = s * xi + t_i;
        let add = ldl.d[i] * y * y;
        for j in 0..i {
            ws.t[i][j] = ws.t[level][j] + ldl.l[j][i] * xi;
            ws.w[i][j] = ws.w[level][j] + m[j][i] * xi;
        }
        let vp = v_partial + m[i][i] * xi * xi + 2 * ws.w[level][i] * xi;
        count += shell_dfs(
            m,
            ldl,
            target,
            budget,
            i,
            scaled_sum + add,
            vp,
            zero_prefix && xi == 0,
            ws,
        );
    }
    count
}
