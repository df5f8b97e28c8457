//! Prime fields F_p and sparse polynomials in one variable over them.
//!
//! Everything here is exact: coefficients are canonical residues, exponents
//! are checked machine integers, and binomials are reduced digit-wise.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    /// Validates primality by trial division.
    pub fn new(p: u64) -> Result<Prime> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d.saturating_mul(d) <= p {
            if p % d == 0 {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// p^k as a checked u64.
    pub fn pow(self, k: u32) -> Result<u64> {
        self.0
            .checked_pow(k)
            .ok_or(Error::Overflow("prime power"))
    }

    /// p^k as a checked u128.
    pub fn pow_u128(self, k: u32) -> Result<u128> {
        (self.0 as u128)
            .checked_pow(k)
            .ok_or(Error::Overflow("prime power"))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p stored as the canonical residue in 0..p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: Prime,
}

impl Fp {
    pub fn new(value: u64, modulus: Prime) -> Fp {
        Fp {
            value: value % modulus.get(),
            modulus,
        }
    }

    pub fn zero(modulus: Prime) -> Fp {
        Fp { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Fp {
        Fp::new(1, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, rhs: Fp) -> Fp {
        assert_eq!(
            self.modulus, rhs.modulus,
            "mixed moduli in field arithmetic"
        );
        rhs
    }

    pub fn add(self, rhs: Fp) -> Fp {
        let rhs = self.check(rhs);
        Fp::new(self.value + rhs.value, self.modulus)
    }

    pub fn sub(self, rhs: Fp) -> Fp {
        let rhs = self.check(rhs);
        Fp::new(self.value + self.modulus.get() - rhs.value, self.modulus)
    }

    pub fn mul(self, rhs: Fp) -> Fp {
        let rhs = self.check(rhs);
        let wide = self.value as u128 * rhs.value as u128;
        Fp {
            value: (wide % self.modulus.get() as u128) as u64,
            modulus: self.modulus,
        }
    }

    pub fn neg(self) -> Fp {
        Fp::new(self.modulus.get() - self.value, self.modulus)
    }

    pub fn pow(self, mut k: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::one(self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; the modulus is prime, so x^(p-2) works.
    pub fn inv(self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        Ok(self.pow(self.modulus.get() - 2))
    }
}

/// C(n, k) mod p via the base-p digit product; zero whenever k > n.
pub fn binom_mod_p(n: u64, k: u64, p: Prime) -> Fp {
    if k > n {
        return Fp::zero(p);
    }
    if p.get() == 2 {
        // Digit test collapses to a mask check.
        return Fp::new((n & k == k) as u64, p);
    }
    let q = p.get();
    let (mut n, mut k) = (n, k);
    let mut acc = Fp::one(p);
    while k > 0 {
        let (nd, kd) = (n % q, k % q);
        if kd > nd {
            return Fp::zero(p);
        }
        acc = acc.mul(binom_digit(nd, kd, p));
        n /= q;
        k /= q;
    }
    acc
}

/// C(a, b) mod p for single base-p digits b <= a < p.
fn binom_digit(a: u64, b: u64, p: Prime) -> Fp {
    debug_assert!(b <= a && a < p.get());
    let mut acc = Fp::one(p);
    for j in 1..=b {
        // Denominators 1..b are below p, hence invertible.
        acc = acc.mul(Fp::new(a + j - b, p));
        acc = acc.mul(Fp::new(j, p).inv().expect("nonzero digit"));
    }
    acc
}

/// How deep a polynomial sits in the tower of p-th power subrings:
/// `Finite(s)` means every exponent is divisible by p^s but not p^(s+1);
/// constants and zero are in every subring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrobeniusLevel {
    Finite(u32),
    Infinite,
}

/// Degree with a tagged value for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u64),
}

/// A sparse polynomial over F_p keyed by exponent; zero coefficients are
/// never stored, so the zero polynomial is the empty map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    modulus: Prime,
    terms: BTreeMap<u64, u64>,
}

impl SparsePoly {
    pub fn zero(modulus: Prime) -> SparsePoly {
        SparsePoly {
            modulus,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(modulus: Prime) -> SparsePoly {
        SparsePoly::monomial(modulus, 1, 0)
    }

    /// c * x^exp with c reduced mod p.
    pub fn monomial(modulus: Prime, coeff: u64, exp: u64) -> SparsePoly {
        let mut poly = SparsePoly::zero(modulus);
        let c = coeff % modulus.get();
        if c != 0 {
            poly.terms.insert(exp, c);
        }
        poly
    }

    /// x^exp.
    pub fn x_pow(modulus: Prime, exp: u64) -> SparsePoly {
        SparsePoly::monomial(modulus, 1, exp)
    }

    pub fn constant(modulus: Prime, c: u64) -> SparsePoly {
        SparsePoly::monomial(modulus, c, 0)
    }

    /// Sums up (exp, coeff) pairs, reducing mod p and dropping zeros.
    pub fn from_terms(modulus: Prime, pairs: impl IntoIterator<Item = (u64, u64)>) -> SparsePoly {
        let mut poly = SparsePoly::zero(modulus);
        for (exp, coeff) in pairs {
            poly.add_term(exp, coeff % modulus.get());
        }
        poly
    }

    fn add_term(&mut self, exp: u64, coeff: u64) {
        if coeff == 0 {
            return;
        }
        let p = self.modulus.get();
        let entry = self.terms.entry(exp).or_insert(0);
        *entry = (*entry + coeff) % p;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            Some(&e) => Degree::Finite(e),
            None => Degree::NegInfinity,
        }
    }

    pub fn coeff(&self, exp: u64) -> Fp {
        Fp::new(self.terms.get(&exp).copied().unwrap_or(0), self.modulus)
    }

    /// Term iterator in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, Fp)> + '_ {
        self.terms
            .iter()
            .map(move |(&e, &c)| (e, Fp::new(c, self.modulus)))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn check(&self, rhs: &SparsePoly) -> Result<()> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.get(),
                rhs.modulus.get(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &SparsePoly) -> Result<SparsePoly> {
        self.check(rhs)?;
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &SparsePoly) -> Result<SparsePoly> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        let p = self.modulus.get();
        SparsePoly {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(&e, &c)| (e, p - c)).collect(),
        }
    }

    pub fn scale(&self, c: Fp) -> Result<SparsePoly> {
        if c.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.get(),
                c.modulus().get(),
            ));
        }
        let mut out = SparsePoly::zero(self.modulus);
        for (&e, &v) in &self.terms {
            out.add_term(e, c.mul(Fp::new(v, self.modulus)).value());
        }
        Ok(out)
    }

    /// Product with checked exponent addition.
    pub fn mul(&self, rhs: &SparsePoly) -> Result<SparsePoly> {
        self.check(rhs)?;
        let mut out = SparsePoly::zero(self.modulus);
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                let e = e1
                    .checked_add(e2)
                    .ok_or(Error::Overflow("polynomial product exponent"))?;
                let c = Fp::new(c1, self.modulus).mul(Fp::new(c2, self.modulus));
                out.add_term(e, c.value());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u32) -> Result<SparsePoly> {
        let mut base = self.clone();
        let mut acc = SparsePoly::one(self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Largest s such that every exponent is divisible by p^s, i.e. the
    /// deepest subring R^(p^s) containing the polynomial.
    pub fn frobenius_level(&self) -> FrobeniusLevel {
        let p = self.modulus.get();
        let mut level = FrobeniusLevel::Infinite;
        for &e in self.terms.keys() {
            if e == 0 {
                continue; // constants lie in every subring
            }
            let mut v = 0u32;
            let mut e = e;
            while e % p == 0 {
                e /= p;
                v += 1;
            }
            level = level.min(FrobeniusLevel::Finite(v));
        }
        level
    }

    /// Parses the canonical text form: terms joined by `+`, each term one of
    /// `c`, `c*x`, `c*x^e`, `x`, `x^e` with `c` already reduced mod p.
    pub fn parse(text: &str, modulus: Prime) -> Result<SparsePoly> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut poly = SparsePoly::zero(modulus);
        let mut seen = std::collections::BTreeSet::new();
        for raw in text.split('+') {
            let (exp, coeff) = parse_term(raw, modulus)?;
            if !seen.insert(exp) {
                return Err(Error::Parse(format!("duplicate exponent {exp}")));
            }
            poly.add_term(exp, coeff);
        }
        Ok(poly)
    }
}

fn parse_term(raw: &str, modulus: Prime) -> Result<(u64, u64)> {
    let s = raw.trim();
    let malformed = || Error::Parse(format!("malformed term `{}`", s));
    if s.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let digits = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let (coeff_str, rest) = s.split_at(digits);
    let coeff = if coeff_str.is_empty() {
        1
    } else {
        coeff_str
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad coefficient `{coeff_str}`")))?
    };
    if coeff >= modulus.get() {
        return Err(Error::Parse(format!(
            "coefficient {coeff} not reduced mod {modulus}"
        )));
    }
    let var = if rest.is_empty() {
        if coeff_str.is_empty() {
            return Err(malformed());
        }
        return Ok((0, coeff)); // plain constant
    } else if !coeff_str.is_empty() {
        rest.strip_prefix('*').ok_or_else(malformed)?
    } else {
        rest
    };
    let exp_part = var.strip_prefix('x').ok_or_else(malformed)?;
    let exp = if exp_part.is_empty() {
        1
    } else {
        let e = exp_part.strip_prefix('^').ok_or_else(malformed)?;
        if e.starts_with('-') {
            return Err(Error::Parse(format!("negative exponent in `{s}`")));
        }
        e.parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?
    };
    Ok((exp, coeff))
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c, e) {
                (c, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, e) => write!(f, "x^{e}")?,
                (c, 1) => write!(f, "{c}*x")?,
                (c, e) => write!(f, "{c}*x^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn prime_validation() {
        for v in [2, 3, 5, 97, 7919] {
            assert!(Prime::new(v).is_ok());
        }
        for v in [0, 1, 4, 9, 15, 1000] {
            assert_eq!(Prime::new(v), Err(Error::NotPrime(v)));
        }
    }

    #[test]
    fn binomials_reduce_digitwise() {
        assert_eq!(binom_mod_p(6, 2, p(2)).value(), 1);
        assert_eq!(binom_mod_p(4, 2, p(2)).value(), 0);
        assert_eq!(binom_mod_p(12, 4, p(2)).value(), 1);
        assert_eq!(binom_mod_p(5, 0, p(3)).value(), 1);
        assert_eq!(binom_mod_p(3, 7, p(5)).value(), 0);
        // 252 = C(10, 5) is divisible by 3
        assert_eq!(binom_mod_p(10, 5, p(3)).value(), 0);
        // 21 = 41 base 5, 7 = 12 base 5: the low digit pair (1, 2) kills it
        assert_eq!(binom_mod_p(21, 7, p(5)).value(), 0);
        // 705432 = C(22, 11); digit pairs (2, 1) and (4, 2) give 2 * 6 = 12
        assert_eq!(binom_mod_p(22, 11, p(5)).value(), 705432 % 5);
    }

    #[test]
    fn field_inverse() {
        for q in [2, 3, 5, 13] {
            let q = p(q);
            for v in 1..q.get() {
                let x = Fp::new(v, q);
                assert_eq!(x.mul(x.inv().unwrap()).value(), 1);
            }
        }
        assert!(Fp::zero(p(5)).inv().is_err());
    }

    #[test]
    fn ring_ops() {
        let f = SparsePoly::parse("x + 1", p(2)).unwrap();
        assert_eq!(f.mul(&f).unwrap().to_string(), "1 + x^2");
        assert!(f.add(&f).unwrap().is_zero());
        let g = SparsePoly::parse("x + x^4", p(2)).unwrap();
        let h = SparsePoly::x_pow(p(2), 1);
        assert_eq!(g.add(&h).unwrap().to_string(), "x^4");
        assert_eq!(g.sub(&g).unwrap().to_string(), "0");
        let s = SparsePoly::parse("x^2 + 2", p(3))
            .unwrap()
            .scale(Fp::new(2, p(3)))
            .unwrap();
        assert_eq!(s.to_string(), "1 + 2*x^2");
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        let f = SparsePoly::one(p(2));
        let g = SparsePoly::one(p(3));
        assert_eq!(f.add(&g), Err(Error::ModulusMismatch(2, 3)));
        assert!(f.scale(Fp::one(p(3))).is_err());
    }

    #[test]
    fn product_exponent_overflow_is_detected() {
        let f = SparsePoly::x_pow(p(2), 1 << 63);
        assert_eq!(
            f.mul(&f),
            Err(Error::Overflow("polynomial product exponent"))
        );
    }

    #[test]
    fn degrees() {
        assert_eq!(SparsePoly::zero(p(2)).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        let f = SparsePoly::parse("x^2 + x^5", p(2)).unwrap();
        assert_eq!(f.degree(), Degree::Finite(5));
    }

    #[test]
    fn frobenius_levels() {
        let f = SparsePoly::parse("x^6 + x^12", p(2)).unwrap();
        assert_eq!(f.frobenius_level(), FrobeniusLevel::Finite(1));
        assert_eq!(
            SparsePoly::x_pow(p(2), 4).frobenius_level(),
            FrobeniusLevel::Finite(2)
        );
        assert_eq!(
            SparsePoly::one(p(5)).frobenius_level(),
            FrobeniusLevel::Infinite
        );
        assert_eq!(
            SparsePoly::zero(p(3)).frobenius_level(),
            FrobeniusLevel::Infinite
        );
        // (p+1)p^r has valuation exactly r
        assert_eq!(
            SparsePoly::x_pow(p(3), 36).frobenius_level(),
            FrobeniusLevel::Finite(2)
        );
        assert!(FrobeniusLevel::Finite(7) < FrobeniusLevel::Infinite);
    }

    #[test]
    fn parse_and_format() {
        let f = SparsePoly::parse("x + x^4", p(2)).unwrap();
        assert_eq!(f.coeff(1).value(), 1);
        assert_eq!(f.coeff(4).value(), 1);
        assert_eq!(f.to_string(), "x + x^4");
        assert_eq!(SparsePoly::parse("0", p(2)).unwrap(), SparsePoly::zero(p(2)));
        assert_eq!(
            SparsePoly::parse("2*x^2 + 1", p(3)).unwrap().to_string(),
            "1 + 2*x^2"
        );
        assert_eq!(SparsePoly::zero(p(7)).to_string(), "0");
        assert_eq!(SparsePoly::parse(" 2 ", p(3)).unwrap().to_string(), "2");
    }

    #[test]
    fn parse_rejects_bad_input() {
        for bad in ["", "y", "x^", "x^-2", "2x", "x*2", "3*x", "+ x", "x + x", "1 + 1"] {
            assert!(
                SparsePoly::parse(bad, p(3)).is_err(),
                "`{bad}` should not parse"
            );
        }
    }

    fn arb_poly(q: u64) -> impl Strategy<Value = SparsePoly> {
        proptest::collection::vec((0u64..40, 0u64..q), 0..6)
            .prop_map(move |pairs| SparsePoly::from_terms(p(q), pairs))
    }

    proptest! {
        #[test]
        fn add_commutes(f in arb_poly(3), g in arb_poly(3)) {
            prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        }

        #[test]
        fn mul_distributes(f in arb_poly(5), g in arb_poly(5), h in arb_poly(5)) {
            let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
            let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_round_trips(f in arb_poly(5)) {
            let back = SparsePoly::parse(&f.to_string(), p(5)).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn freshman_dream(f in arb_poly(3), g in arb_poly(3)) {
            let lhs = f.add(&g).unwrap().pow(3).unwrap();
            let rhs = f.pow(3).unwrap().add(&g.pow(3).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pth_power_raises_level(f in arb_poly(3)) {
            prop_assume!(f.degree() > Degree::Finite(0));
            let lifted = f.pow(3).unwrap().frobenius_level();
            match (f.frobenius_level(), lifted) {
                (FrobeniusLevel::Finite(a), FrobeniusLevel::Finite(b)) => prop_assert_eq!(b, a + 1),
                other => prop_assert!(false, "unexpected levels {:?}", other),
            }
        }
    }
}
