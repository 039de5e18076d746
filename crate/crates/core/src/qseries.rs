//! Truncated q-expansions with exact coefficients, Eisenstein series,
//! Hecke operators and two-dimensional decomposition.
//!
//! A `QSeries` holds coefficients a(0..=B) and is tagged with the weight,
//! level and character of the space it lives in; arithmetic is only
//! defined between series with matching tags. Truncation bookkeeping is
//! explicit: the Hecke operator refuses inputs that are too short rather
//! than fabricating coefficients.

use num_traits::Zero;

use crate::bernoulli::{self, BernoulliError};
use crate::dirichlet::QuadCharacter;
use crate::dims;
use crate::exactnum::{rat_from_json, rat_to_json};
use crate::{Int, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("series tags differ: ({0}, {1}, {2:?}) vs ({3}, {4}, {5:?})")]
    TagMismatch(i64, i64, CharLabel, i64, i64, CharLabel),
    #[error("character parity chi(-1)psi(-1) = {0} does not match (-1)^k = {1}")]
    ParityMismatch(i32, i32),
    #[error("E_2 with both characters trivial is excluded")]
    ForbiddenWeightTwo,
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("input truncation {have} is insufficient for T_{m} at output truncation {want_out}: need at least {need}")]
    InsufficientTruncation {
        m: u64,
        have: usize,
        want_out: usize,
        need: usize,
    },
    #[error("space M_{k}({n}, chi) has dimension {dim}, not 2")]
    DimensionNot2 { k: u32, n: i64, dim: u64 },
    #[error("coefficient mismatch at q^{0}: series is not in the span of G and H")]
    NotInSpan(usize),
    #[error(transparent)]
    Bernoulli(#[from] BernoulliError),
    #[error("malformed q-series encoding: {0}")]
    BadEncoding(String),
}

/// Structural identifier of the character a series transforms under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharLabel {
    Trivial,
    Disc(i64),
    /// Product of two Kronecker characters, recorded by the product of
    /// their discriminants.
    DiscProduct(i64),
}

impl CharLabel {
    pub fn name(&self) -> String {
        match self {
            CharLabel::Trivial => "trivial".into(),
            CharLabel::Disc(d) => format!("disc:{d}"),
            CharLabel::DiscProduct(d) => format!("disc-product:{d}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self, QSeriesError> {
        if s == "trivial" {
            return Ok(CharLabel::Trivial);
        }
        if let Some(d) = s.strip_prefix("disc:").and_then(|x| x.parse().ok()) {
            return Ok(CharLabel::Disc(d));
        }
        if let Some(d) = s.strip_prefix("disc-product:").and_then(|x| x.parse().ok()) {
            return Ok(CharLabel::DiscProduct(d));
        }
        Err(QSeriesError::BadEncoding(format!("bad character label {s:?}")))
    }

    fn product(chi: &QuadCharacter, psi: &QuadCharacter) -> CharLabel {
        match (chi.disc(), psi.disc()) {
            (None, None) => CharLabel::Trivial,
            (Some(d), None) | (None, Some(d)) => CharLabel::Disc(d),
            (Some(a), Some(b)) => CharLabel::DiscProduct(a * b),
        }
    }
}

/// Truncated formal power series in q with coefficients a(0..=truncation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries<T> {
    coeffs: Vec<T>,
    weight: i64,
    level: i64,
    char_label: CharLabel,
}

impl<T: Clone + Zero> QSeries<T> {
    pub fn new(coeffs: Vec<T>, weight: i64, level: i64, char_label: CharLabel) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least a(0)");
        QSeries {
            coeffs,
            weight,
            level,
            char_label,
        }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn char_label(&self) -> CharLabel {
        self.char_label
    }

    /// Drop coefficients beyond `b`.
    pub fn truncated(&self, b: usize) -> Self {
        let end = b.min(self.truncation());
        QSeries::new(
            self.coeffs[..=end].to_vec(),
            self.weight,
            self.level,
            self.char_label,
        )
    }

    fn check_tags(&self, other: &Self) -> Result<(), QSeriesError> {
        if self.weight != other.weight
            || self.level != other.level
            || self.char_label != other.char_label
        {
            return Err(QSeriesError::TagMismatch(
                self.weight,
                self.level,
                self.char_label,
                other.weight,
                other.level,
                other.char_label,
            ));
        }
        Ok(())
    }
}

impl<T> QSeries<T>
where
    T: Clone + Zero,
    for<'a> &'a T: std::ops::Add<&'a T, Output = T> + std::ops::Mul<&'a T, Output = T>,
{
    /// Sum of two series in the same space; result truncation is the
    /// shorter of the two.
    pub fn add(&self, other: &Self) -> Result<Self, QSeriesError> {
        self.check_tags(other)?;
        let len = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..len).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(QSeries::new(coeffs, self.weight, self.level, self.char_label))
    }

    pub fn scale(&self, c: &T) -> Self {
        QSeries::new(
            self.coeffs.iter().map(|a| c * a).collect(),
            self.weight,
            self.level,
            self.char_label,
        )
    }
}

impl QSeries<Rat> {
    /// JSON encoding with rationals as ["num","den"] string pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weight": self.weight,
            "level": self.level,
            "char": self.char_label.name(),
            "truncation": self.truncation(),
            "coeffs": self.coeffs.iter().map(rat_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, QSeriesError> {
        let get_i64 = |key: &str| {
            v.get(key)
                .and_then(|x| x.as_i64())
                .ok_or_else(|| QSeriesError::BadEncoding(format!("missing {key}")))
        };
        let weight = get_i64("weight")?;
        let level = get_i64("level")?;
        let char_label = CharLabel::parse(
            v.get("char")
                .and_then(|x| x.as_str())
                .ok_or_else(|| QSeriesError::BadEncoding("missing char".into()))?,
        )?;
        let coeffs: Result<Vec<Rat>, _> = v
            .get("coeffs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| QSeriesError::BadEncoding("missing coeffs".into()))?
            .iter()
            .map(|c| rat_from_json(c).map_err(|e| QSeriesError::BadEncoding(e.to_string())))
            .collect();
        let coeffs = coeffs?;
        if let Some(b) = v.get("truncation").and_then(|x| x.as_u64()) {
            if coeffs.len() != b as usize + 1 {
                return Err(QSeriesError::BadEncoding(
                    "truncation does not match coefficient count".into(),
                ));
            }
        }
        Ok(QSeries::new(coeffs, weight, level, char_label))
    }
}

/// The Eisenstein series E_{k,chi,psi} as a truncated q-expansion:
/// a(n) = sum over divisors d of n of chi(n/d) psi(d) d^{k-1} for n >= 1,
/// and a(0) = L(1-k, psi)/2 when chi has modulus 1, else 0.
///
/// Each character vanishes outside the units of its own modulus (the
/// trivial character of modulus 1 is identically 1).
pub fn eisenstein_general(
    chi: &QuadCharacter,
    psi: &QuadCharacter,
    k: u32,
    truncation: usize,
) -> Result<QSeries<Rat>, QSeriesError> {
    let parity = chi.parity() * psi.parity();
    let want = if k % 2 == 0 { 1 } else { -1 };
    if parity != want {
        return Err(QSeriesError::ParityMismatch(parity, want));
    }
    if k == 2 && chi.is_trivial() && psi.is_trivial() {
        return Err(QSeriesError::ForbiddenWeightTwo);
    }
    let c0 = if chi.modulus() == 1 {
        bernoulli::l_value(psi, k)? / Rat::from_integer(Int::from(2))
    } else {
        Rat::zero()
    };
    let mut coeffs = vec![Rat::zero(); truncation + 1];
    coeffs[0] = c0;
    for (n, cn) in coeffs.iter_mut().enumerate().skip(1) {
        *cn = Rat::from_integer(twisted_divisor_sum(chi, psi, n as i64, k));
    }
    Ok(QSeries::new(
        coeffs,
        k as i64,
        chi.modulus() * psi.modulus(),
        CharLabel::product(chi, psi),
    ))
}

/// sum over d | n of chi(n/d) psi(d) d^{k-1}, exact.
fn twisted_divisor_sum(chi: &QuadCharacter, psi: &QuadCharacter, n: i64, k: u32) -> Int {
    let mut acc = Int::zero();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let c = chi.eval(n / d) * psi.eval(d);
        if c == 0 {
            continue;
        }
        acc += Int::from(c) * Int::from(d).pow(k - 1);
    }
    acc
}

fn fundamental_char(k: u32, n: i64) -> Result<QuadCharacter, QSeriesError> {
    let disc = if k % 2 == 0 { n } else { -n };
    let chi = QuadCharacter::from_disc(disc).map_err(|_| QSeriesError::NotFundamental(disc))?;
    if !chi.is_primitive() {
        return Err(QSeriesError::NotFundamental(disc));
    }
    Ok(chi)
}

/// G_{k,N} = L(1-k,chi)/2 + sum (sum_{d|n} chi(d) d^{k-1}) q^n
/// for chi = chi_{(-1)^k N}.
pub fn eisenstein_g(k: u32, n: i64, truncation: usize) -> Result<QSeries<Rat>, QSeriesError> {
    let chi = fundamental_char(k, n)?;
    eisenstein_general(&QuadCharacter::trivial(), &chi, k, truncation)
}

/// H_{k,N} = sum (sum_{d|n} chi(n/d) d^{k-1}) q^n = q + O(q^2).
pub fn eisenstein_h(k: u32, n: i64, truncation: usize) -> Result<QSeries<Rat>, QSeriesError> {
    let chi = fundamental_char(k, n)?;
    eisenstein_general(&chi, &QuadCharacter::trivial(), k, truncation)
}

/// The Hecke operator T_{m,k,chi}:
/// a'(n) = sum_{d | gcd(m,n), d > 0} chi(d) d^{k-1} a(m n / d^2),
/// with the convention gcd(m, 0) = m for the constant term. chi(d) is 0
/// whenever d shares a factor with the level.
///
/// Every needed input coefficient must exist: the input truncation must be
/// at least m * b_out.
pub fn hecke_apply(
    f: &QSeries<Rat>,
    m: u64,
    k: u32,
    chi: &QuadCharacter,
    b_out: usize,
) -> Result<QSeries<Rat>, QSeriesError> {
    let need = m as usize * b_out;
    if f.truncation() < need {
        return Err(QSeriesError::InsufficientTruncation {
            m,
            have: f.truncation(),
            want_out: b_out,
            need,
        });
    }
    let level = f.level();
    let mut coeffs = vec![Rat::zero(); b_out + 1];
    for (n, cn) in coeffs.iter_mut().enumerate() {
        let g = if n == 0 {
            m
        } else {
            num_integer::gcd(m, n as u64)
        };
        let mut acc = Rat::zero();
        for d in 1..=g {
            if g % d != 0 {
                continue;
            }
            if num_integer::gcd(d as i64, level) != 1 {
                continue;
            }
            let c = chi.eval(d as i64);
            if c == 0 {
                continue;
            }
            let idx = (m as usize * n) / (d * d) as usize;
            let factor = Rat::from_integer(Int::from(c) * Int::from(d).pow(k - 1));
            acc += factor * f.coeff(idx);
        }
        *cn = acc;
    }
    Ok(QSeries::new(coeffs, f.weight, f.level, f.char_label))
}

/// Decompose f = c1 G_{k,N} + c2 H_{k,N} in the two-dimensional space:
/// c1 = 2 a(0) / L(1-k,chi), c2 = a(1) - c1, then verify every remaining
/// coefficient of f up to its truncation.
pub fn decompose(f: &QSeries<Rat>, k: u32, n: i64) -> Result<(Rat, Rat), QSeriesError> {
    let chi = fundamental_char(k, n)?;
    let dim = dims::dim_mk(k, n, &chi).map_err(|e| QSeriesError::BadEncoding(e.to_string()))?;
    if dim != 2 {
        return Err(QSeriesError::DimensionNot2 { k, n, dim });
    }
    let l = bernoulli::l_value(&chi, k)?;
    let c1 = Rat::from_integer(Int::from(2)) * f.coeff(0) / &l;
    let c2 = f.coeff(1) - &c1;
    let b = f.truncation();
    let g = eisenstein_g(k, n, b)?;
    let h = eisenstein_h(k, n, b)?;
    for i in 0..=b {
        let expect = &c1 * g.coeff(i) + &c2 * h.coeff(i);
        if &expect != f.coeff(i) {
            return Err(QSeriesError::NotInSpan(i));
        }
    }
    Ok((c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;

    fn chi(d: i64) -> QuadCharacter {
        QuadCharacter::from_disc(d).unwrap()
    }

    fn rats(v: &[(i64, i64)]) -> Vec<Rat> {
        v.iter().map(|&(n, d)| rational(n, d)).collect()
    }

    /// Independent oracle: enumerate divisor pairs (d, e) with d*e = n
    /// directly.
    fn divisor_sum_oracle(top: &QuadCharacter, bottom: &QuadCharacter, n: i64, k: u32) -> Rat {
        let mut acc = rational(0, 1);
        for d in 1..=n {
            for e in 1..=n {
                if d * e == n {
                    acc += rational(
                        (top.eval(e) * bottom.eval(d)) as i64 * d.pow(k - 1),
                        1,
                    );
                }
            }
        }
        acc
    }

    #[test]
    fn eisenstein_examples() {
        // trivial, chi_13, k=2: c0 = L(-1,chi_13)/2 = -1; a(2) = 1 + chi(2)*2 = -1
        let e = eisenstein_general(&QuadCharacter::trivial(), &chi(13), 2, 2).unwrap();
        assert_eq!(e.coeffs(), rats(&[(-1, 1), (1, 1), (-1, 1)]));
        // chi_13, trivial, k=2: a(2) = chi(2) + 2 = 1
        let e = eisenstein_general(&chi(13), &QuadCharacter::trivial(), 2, 2).unwrap();
        assert_eq!(e.coeffs(), rats(&[(0, 1), (1, 1), (1, 1)]));
        // trivial, chi_-4, k=1: constant L(0, chi_-4)/2, then q
        let e = eisenstein_general(&QuadCharacter::trivial(), &chi(-4), 1, 1).unwrap();
        let l0 = bernoulli::l_value(&chi(-4), 1).unwrap();
        assert_eq!(e.coeff(0), &(l0 / rational(2, 1)));
        assert_eq!(e.coeff(1), &rational(1, 1));
    }

    #[test]
    fn eisenstein_matches_divisor_oracle() {
        for (top, bottom, k) in [
            (QuadCharacter::trivial(), chi(13), 2),
            (chi(13), QuadCharacter::trivial(), 2),
            (QuadCharacter::trivial(), chi(-3), 3),
            (chi(5), QuadCharacter::trivial(), 4),
        ] {
            let e = eisenstein_general(&top, &bottom, k, 30).unwrap();
            for n in 1..=30i64 {
                assert_eq!(
                    e.coeff(n as usize),
                    &divisor_sum_oracle(&top, &bottom, n, k),
                    "n={n}"
                );
            }
        }
    }

    #[test]
    fn eisenstein_rejections() {
        // parity mismatch: chi_13(-1) = 1 but k odd
        assert!(matches!(
            eisenstein_general(&QuadCharacter::trivial(), &chi(13), 3, 5),
            Err(QSeriesError::ParityMismatch(1, -1))
        ));
        assert!(matches!(
            eisenstein_general(&QuadCharacter::trivial(), &QuadCharacter::trivial(), 2, 5),
            Err(QSeriesError::ForbiddenWeightTwo)
        ));
        // (-1)^k N not fundamental (45 = 9*5 has conductor 5)
        assert!(matches!(
            eisenstein_g(2, 45, 5),
            Err(QSeriesError::NotFundamental(45))
        ));
        assert!(matches!(
            eisenstein_g(3, 5, 5),
            Err(QSeriesError::NotFundamental(-5))
        ));
    }

    #[test]
    fn g_and_h_leading_terms() {
        let g = eisenstein_g(2, 13, 2).unwrap();
        assert_eq!(g.coeff(0), &rational(-1, 1));
        assert_eq!(g.coeff(1), &rational(1, 1));
        let h = eisenstein_h(2, 13, 2).unwrap();
        assert_eq!(h.coeff(0), &rational(0, 1));
        assert_eq!(h.coeff(1), &rational(1, 1));
        // -G + 13H = 1 + 12q + 14q^2 + ...
        let combo = g.scale(&rational(-1, 1))
            .add(&h.scale(&rational(13, 1)))
            .unwrap();
        assert_eq!(combo.coeffs(), rats(&[(1, 1), (12, 1), (14, 1)]));
    }

    #[test]
    fn linear_independence_witness() {
        use num_traits::Zero;
        for e in crate::catalog::all() {
            let g = eisenstein_g(e.weight, e.level, 1).unwrap();
            let h = eisenstein_h(e.weight, e.level, 1).unwrap();
            // det of the (a(0), a(1)) matrix is -a0(G) != 0
            let det = g.coeff(0) * h.coeff(1) - g.coeff(1) * h.coeff(0);
            assert!(!det.is_zero(), "(k,N)=({},{})", e.weight, e.level);
        }
    }

    #[test]
    fn hecke_identity_operator() {
        let g = eisenstein_g(2, 13, 20).unwrap();
        let t1 = hecke_apply(&g, 1, 2, &chi(13), 10).unwrap();
        assert_eq!(t1.coeffs(), &g.coeffs()[..=10]);
    }

    #[test]
    fn hecke_constant_terms() {
        // theta-like series: 1 + 12q + 14q^2 ... use -G + 13H
        let g = eisenstein_g(2, 13, 8).unwrap();
        let h = eisenstein_h(2, 13, 8).unwrap();
        let theta = g.scale(&rational(-1, 1)).add(&h.scale(&rational(13, 1))).unwrap();
        let t2 = hecke_apply(&theta, 2, 2, &chi(13), 4).unwrap();
        assert_eq!(t2.coeff(0), &rational(-1, 1));
        let t4 = hecke_apply(&theta, 4, 2, &chi(13), 2).unwrap();
        assert_eq!(t4.coeff(0), &rational(3, 1));
    }

    #[test]
    fn hecke_refuses_short_input() {
        let g = eisenstein_g(2, 13, 5).unwrap();
        let err = hecke_apply(&g, 3, 2, &chi(13), 4).unwrap_err();
        assert_eq!(
            err,
            QSeriesError::InsufficientTruncation { m: 3, have: 5, want_out: 4, need: 12 }
        );
    }

    #[test]
    fn decompose_recovers_coefficients() {
        let g = eisenstein_g(2, 17, 25).unwrap();
        let h = eisenstein_h(2, 17, 25).unwrap();
        let f = g.scale(&rational(-1, 2)).add(&h.scale(&rational(17, 2))).unwrap();
        assert_eq!(decompose(&f, 2, 17).unwrap(), (rational(-1, 2), rational(17, 2)));
    }

    #[test]
    fn decompose_detects_off_span_series() {
        let g = eisenstein_g(2, 13, 10).unwrap();
        let h = eisenstein_h(2, 13, 10).unwrap();
        let mut f = g.add(&h).unwrap();
        let mut coeffs = f.coeffs().to_vec();
        coeffs[7] += rational(1, 1);
        f = QSeries::new(coeffs, f.weight(), f.level(), f.char_label());
        assert_eq!(decompose(&f, 2, 13), Err(QSeriesError::NotInSpan(7)));
    }

    #[test]
    fn decompose_requires_dimension_two() {
        let g = eisenstein_g(3, 7, 5).unwrap();
        assert_eq!(
            decompose(&g, 3, 7),
            Err(QSeriesError::DimensionNot2 { k: 3, n: 7, dim: 3 })
        );
    }

    #[test]
    fn tag_mismatch_is_rejected() {
        let a = eisenstein_g(2, 13, 5).unwrap();
        let b = eisenstein_g(2, 17, 5).unwrap();
        assert!(matches!(a.add(&b), Err(QSeriesError::TagMismatch(..))));
    }

    #[test]
    fn json_round_trip() {
        let g = eisenstein_g(2, 13, 6).unwrap();
        let j = g.to_json();
        assert_eq!(QSeries::from_json(&j).unwrap(), g);
        // byte-identical re-emission
        assert_eq!(
            serde_json::to_string(&QSeries::from_json(&j).unwrap().to_json()).unwrap(),
            serde_json::to_string(&j).unwrap()
        );
    }
}
