//! Kronecker-symbol quadratic characters.
//!
//! The only character family needed here: the trivial character of modulus 1
//! and the real character chi_D(d) = (D/d) attached to a discriminant
//! D = 0 or 1 (mod 4). Values are always in {-1, 0, +1}.

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CharError {
    #[error("discriminant {0} is not congruent to 0 or 1 mod 4")]
    BadDiscriminant(i64),
    #[error("discriminant must be nonzero")]
    ZeroDiscriminant,
    #[error("malformed character name {0:?} (expected \"trivial\" or \"disc:D\")")]
    BadName(String),
}

/// A quadratic Dirichlet character: either the trivial character of
/// modulus 1 or the Kronecker character of a discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadCharacter {
    Trivial,
    Disc(i64),
}

/// Kronecker symbol (a/n), defined for all integers.
///
/// Multiplicative in the bottom argument over the factorization of |n|,
/// with (a/2) determined by a mod 8, (a/-1) by the sign of a, and
/// (a/0) nonzero only for a = +-1. Odd prime parts are handled by the
/// usual Jacobi-symbol reciprocity descent.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result: i32 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // Strip factors of 2 from the bottom.
    if n % 2 == 0 {
        if a % 2 == 0 {
            return 0;
        }
        while n % 2 == 0 {
            n /= 2;
            match a.rem_euclid(8) {
                1 | 7 => {}
                3 | 5 => result = -result,
                _ => unreachable!("a is odd"),
            }
        }
    }
    // Now n is odd and positive: Jacobi symbol with reciprocity.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n.rem_euclid(8) {
                3 | 5 => result = -result,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

impl QuadCharacter {
    /// The character chi_D for a discriminant D (nonzero, 0 or 1 mod 4).
    pub fn from_disc(disc: i64) -> Result<Self, CharError> {
        if disc == 0 {
            return Err(CharError::ZeroDiscriminant);
        }
        match disc.rem_euclid(4) {
            0 | 1 => Ok(QuadCharacter::Disc(disc)),
            _ => Err(CharError::BadDiscriminant(disc)),
        }
    }

    pub fn trivial() -> Self {
        QuadCharacter::Trivial
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, QuadCharacter::Trivial)
    }

    pub fn disc(&self) -> Option<i64> {
        match self {
            QuadCharacter::Trivial => None,
            QuadCharacter::Disc(d) => Some(*d),
        }
    }

    /// Modulus: |D| for chi_D, 1 for the trivial character.
    pub fn modulus(&self) -> i64 {
        match self {
            QuadCharacter::Trivial => 1,
            QuadCharacter::Disc(d) => d.abs(),
        }
    }

    /// Evaluate at any integer. The trivial character is 1 everywhere
    /// (including 0); chi_D(d) = (D/d).
    pub fn eval(&self, d: i64) -> i32 {
        match self {
            QuadCharacter::Trivial => 1,
            QuadCharacter::Disc(disc) => kronecker(*disc, d),
        }
    }

    /// chi(-1): +1 for positive discriminants (and the trivial character),
    /// -1 for negative ones.
    pub fn parity(&self) -> i32 {
        match self {
            QuadCharacter::Trivial => 1,
            QuadCharacter::Disc(d) => {
                if *d > 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Whether the discriminant is fundamental (so the character is
    /// primitive modulo |D|), together with the conductor.
    pub fn primitivity(&self) -> (bool, i64) {
        match self {
            QuadCharacter::Trivial => (true, 1),
            QuadCharacter::Disc(d) => {
                let conductor = conductor_of_disc(*d);
                (conductor == d.abs(), conductor)
            }
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.primitivity().0
    }

    /// CLI / JSON name: "trivial" or "disc:D".
    pub fn name(&self) -> String {
        match self {
            QuadCharacter::Trivial => "trivial".into(),
            QuadCharacter::Disc(d) => format!("disc:{d}"),
        }
    }

    pub fn parse(name: &str) -> Result<Self, CharError> {
        if name == "trivial" {
            return Ok(QuadCharacter::Trivial);
        }
        let d = name
            .strip_prefix("disc:")
            .and_then(|s| s.parse::<i64>().ok())
            .ok_or_else(|| CharError::BadName(name.to_string()))?;
        QuadCharacter::from_disc(d)
    }
}

/// Conductor of chi_D: the absolute value of the fundamental discriminant
/// attached to the squarefree part of D (1 when that part is a square,
/// i.e. when the character is principal).
fn conductor_of_disc(d: i64) -> i64 {
    let mut m: i64 = d.signum();
    let mut rest = d.abs();
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 {
            m *= p;
        }
        p += 1;
    }
    m *= rest; // remaining prime factor, exponent 1
    if m == 1 {
        return 1;
    }
    if m.rem_euclid(4) == 1 {
        m.abs()
    } else {
        4 * m.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        let chi13 = QuadCharacter::from_disc(13).unwrap();
        let chi_m4 = QuadCharacter::from_disc(-4).unwrap();
        assert_eq!(chi13.eval(13), 0);
        assert_eq!(chi_m4.eval(-1), -1);
        // 2 is a nonresidue mod 13, 3 = 4^2 mod 13 is a residue.
        assert_eq!(chi13.eval(2), -1);
        assert_eq!(chi13.eval(3), 1);
    }

    #[test]
    fn primitivity_examples() {
        assert_eq!(QuadCharacter::from_disc(13).unwrap().primitivity(), (true, 13));
        assert_eq!(QuadCharacter::from_disc(-4).unwrap().primitivity(), (true, 4));
        let chi36 = QuadCharacter::from_disc(36).unwrap();
        assert!(!chi36.is_primitive());
        // 36 = 6^2: the character is principal, conductor 1.
        assert_eq!(chi36.primitivity().1, 1);
        // 12 = 4*3 with 3 squarefree, 3 = 3 mod 4: fundamental.
        assert!(QuadCharacter::from_disc(12).unwrap().is_primitive());
        // -8: m = -2, disc -8 fundamental.
        assert!(QuadCharacter::from_disc(-8).unwrap().is_primitive());
        // 45 = 9*5: conductor 5.
        assert_eq!(QuadCharacter::from_disc(45).unwrap().primitivity(), (false, 5));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(QuadCharacter::from_disc(13).unwrap().parity(), 1);
        assert_eq!(QuadCharacter::from_disc(-3).unwrap().parity(), -1);
        assert_eq!(QuadCharacter::trivial().parity(), 1);
        // parity agrees with evaluation at -1
        for d in [-20, -15, -8, -4, -3, 5, 8, 12, 13, 17] {
            let chi = QuadCharacter::from_disc(d).unwrap();
            assert_eq!(chi.eval(-1), chi.parity(), "disc {d}");
        }
    }

    #[test]
    fn chi_zero_convention() {
        assert_eq!(QuadCharacter::trivial().eval(0), 1);
        assert_eq!(QuadCharacter::from_disc(13).unwrap().eval(0), 0);
    }

    #[test]
    fn rejects_bad_discriminants() {
        assert!(QuadCharacter::from_disc(0).is_err());
        assert!(QuadCharacter::from_disc(7).is_err());
        assert!(QuadCharacter::from_disc(-5).is_err());
    }

    /// Independent oracle for prime modulus: Euler's criterion.
    fn euler_criterion(a: i64, p: i64) -> i32 {
        let mut r: i64 = 1;
        let mut base = a.rem_euclid(p);
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        if r == 1 {
            1
        } else if r == p - 1 {
            -1
        } else {
            0
        }
    }

    #[test]
    fn matches_euler_criterion_for_odd_prime_modulus() {
        for (d, p) in [(13i64, 13i64), (-3, 3), (5, 5), (17, 17), (-7, 7), (-11, 11)] {
            let chi = QuadCharacter::from_disc(d).unwrap();
            for a in 1..200 {
                if a % p == 0 {
                    assert_eq!(chi.eval(a), 0);
                } else {
                    assert_eq!(chi.eval(a), euler_criterion(a, p), "d={d} a={a}");
                }
            }
        }
    }

    fn fundamental_discs(limit: i64) -> Vec<i64> {
        let mut v = Vec::new();
        for d in -limit..=limit {
            if d == 0 || d == 1 {
                continue;
            }
            if d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1 {
                if conductor_of_disc(d) == d.abs() {
                    v.push(d);
                }
            }
        }
        v
    }

    #[test]
    fn multiplicativity_and_periodicity() {
        for d in fundamental_discs(200) {
            let chi = QuadCharacter::from_disc(d).unwrap();
            for a in 1..=500i64 {
                for b in [2i64, 3, 7, 10, 49, 123] {
                    assert_eq!(chi.eval(a * b), chi.eval(a) * chi.eval(b), "d={d} a={a} b={b}");
                }
                assert_eq!(chi.eval(a + d.abs()), chi.eval(a), "d={d} a={a}");
            }
        }
    }

    #[test]
    fn name_round_trip() {
        for chi in [QuadCharacter::trivial(), QuadCharacter::from_disc(-4).unwrap()] {
            assert_eq!(QuadCharacter::parse(&chi.name()).unwrap(), chi);
        }
        assert!(QuadCharacter::parse("disc:7").is_err());
        assert!(QuadCharacter::parse("bogus").is_err());
    }

    proptest! {
        #[test]
        fn kronecker_fully_multiplicative_in_top(a in -300i64..300, b in -300i64..300, n in -100i64..100) {
            prop_assert_eq!(kronecker(a, n) * kronecker(b, n), kronecker(a * b, n));
        }

        #[test]
        fn kronecker_multiplicative_in_bottom(
            a in -300i64..300,
            m in (-100i64..100).prop_filter("nonzero", |m| *m != 0),
            n in (-100i64..100).prop_filter("nonzero", |n| *n != 0),
        ) {
            prop_assert_eq!(kronecker(a, m) * kronecker(a, n), kronecker(a, m * n));
        }
    }
}
