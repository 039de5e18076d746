//! Built-in catalog of positive definite even-diagonal forms whose theta
//! series lie in a two-dimensional Eisenstein space, together with their
//! published invariants. These are fixtures: golden tests compare computed
//! values against the constants recorded here.

use std::sync::OnceLock;

use crate::exactnum::rational;
use crate::qform::GramMatrix;
use crate::Rat;

/// One catalog form and its expected invariants.
pub struct CatalogEntry {
    /// Weight k = dim/2 of the theta series.
    pub weight: u32,
    /// Level N = det(A).
    pub level: i64,
    pub entries: &'static [&'static [i64]],
    /// Diagonal of N * A^{-1}.
    pub dual_diag: &'static [i64],
    /// r_Q(1).
    pub r1: u64,
    /// L(1-k, chi) as (num, den).
    pub l_value: (i64, i64),
    /// Decomposition coefficients of the theta series as (num, den).
    pub c1: (i64, i64),
    pub c2: (i64, i64),
    /// Leading theta coefficients r_Q(0), r_Q(1), ...
    pub lead_coeffs: &'static [u64],
    gram: OnceLock<GramMatrix>,
}

impl CatalogEntry {
    pub fn gram(&self) -> &GramMatrix {
        self.gram
            .get_or_init(|| GramMatrix::from_i64(self.entries).expect("catalog matrix is valid"))
    }

    pub fn l_value_rat(&self) -> Rat {
        rational(self.l_value.0, self.l_value.1)
    }

    pub fn c1_rat(&self) -> Rat {
        rational(self.c1.0, self.c1.1)
    }

    pub fn c2_rat(&self) -> Rat {
        rational(self.c2.0, self.c2.1)
    }
}

macro_rules! entry {
    (k: $k:expr, n: $n:expr, gram: [$([$($e:expr),*]),* $(,)?],
     dual: [$($d:expr),*], r1: $r1:expr, l: ($ln:expr, $ld:expr),
     c1: ($c1n:expr, $c1d:expr), c2: ($c2n:expr, $c2d:expr), lead: [$($lc:expr),*]) => {
        CatalogEntry {
            weight: $k,
            level: $n,
            entries: &[$(&[$($e),*]),*],
            dual_diag: &[$($d),*],
            r1: $r1,
            l_value: ($ln, $ld),
            c1: ($c1n, $c1d),
            c2: ($c2n, $c2d),
            lead_coeffs: &[$($lc),*],
            gram: OnceLock::new(),
        }
    };
}

static CATALOG: [CatalogEntry; 6] = [
    entry!(k: 2, n: 5,
        gram: [[2,1,1,1],[1,2,1,1],[1,1,2,1],[1,1,1,2]],
        dual: [4,4,4,4], r1: 20, l: (-2, 5), c1: (-5, 1), c2: (25, 1),
        lead: [1, 20, 30]),
    entry!(k: 2, n: 13,
        gram: [[2,0,1,1],[0,4,0,1],[1,0,2,0],[1,1,0,2]],
        dual: [14,4,10,12], r1: 12, l: (-2, 1), c1: (-1, 1), c2: (13, 1),
        lead: [1, 12, 14]),
    entry!(k: 2, n: 17,
        gram: [[2,1,0,0],[1,2,0,1],[0,0,2,1],[0,1,1,4]],
        dual: [12,14,10,6], r1: 8, l: (-4, 1), c1: (-1, 2), c2: (17, 2),
        lead: [1, 8, 24, 18]),
    entry!(k: 3, n: 3,
        gram: [
            [2,0,0,0,0,1],
            [0,2,0,0,1,0],
            [0,0,2,1,0,0],
            [0,0,1,2,0,1],
            [0,1,0,0,2,1],
            [1,0,0,1,1,2]],
        dual: [6,4,4,10,10,18], r1: 72, l: (-2, 9), c1: (-9, 1), c2: (81, 1),
        lead: [1, 72, 270]),
    entry!(k: 4, n: 5,
        gram: [
            [2,1,0,0,0,0,0,0],
            [1,2,1,0,0,0,0,0],
            [0,1,2,1,0,0,0,0],
            [0,0,1,2,2,0,0,0],
            [0,0,0,2,4,1,0,0],
            [0,0,0,0,1,2,1,0],
            [0,0,0,0,0,1,2,1],
            [0,0,0,0,0,0,1,4]],
        dual: [12,38,78,132,50,28,12,2], r1: 126, l: (2, 1), c1: (1, 1), c2: (125, 1),
        lead: [1, 126, 868]),
    entry!(k: 5, n: 3,
        gram: [
            [2,1,0,0,0,0,0,0,0,0],
            [1,2,0,0,0,0,0,0,0,0],
            [0,0,2,1,0,0,0,0,0,0],
            [0,0,1,2,1,0,0,0,0,0],
            [0,0,0,1,2,1,0,0,0,0],
            [0,0,0,0,1,2,2,0,0,0],
            [0,0,0,0,0,2,4,1,0,0],
            [0,0,0,0,0,0,1,2,1,0],
            [0,0,0,0,0,0,0,1,2,1],
            [0,0,0,0,0,0,0,0,1,2]],
        dual: [2,2,12,42,90,156,60,36,18,6], r1: 246, l: (2, 3), c1: (3, 1), c2: (243, 1),
        lead: [1, 246, 3600]),
];

/// All six built-in forms, ordered by (weight, level).
pub fn all() -> &'static [CatalogEntry] {
    &CATALOG
}

/// Look up a catalog form by (k, N).
pub fn by_invariants(weight: u32, level: i64) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.weight == weight && e.level == level)
}
