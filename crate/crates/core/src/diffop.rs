//! Divided-power differential operators on F_p[x].
//!
//! The basis operator `x^a D_b` sends x^v to C(v, b) x^(v-b+a); composition
//! is rewritten to this normal form, so equal operators compare equal.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fieldpoly::{binom_mod_p, Fp, Prime, SparsePoly};

/// `x^a D_b` with a = `x_pow`, b = `order`. The field order makes the
/// derived `Ord` sort by divided-power order first, then x-power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisOp {
    pub order: u64,
    pub x_pow: u64,
}

impl BasisOp {
    /// `x^x_pow D_order`, written positionally as (a, b).
    pub fn new(x_pow: u64, order: u64) -> BasisOp {
        BasisOp { order, x_pow }
    }

    /// a + b, the Bernstein-filtration degree.
    pub fn bernstein_degree(self) -> Result<u64> {
        self.x_pow
            .checked_add(self.order)
            .ok_or(Error::Overflow("Bernstein degree"))
    }

    /// Action on one polynomial.
    pub fn apply(self, f: &SparsePoly) -> Result<SparsePoly> {
        let p = f.modulus();
        let mut out = SparsePoly::zero(p);
        for (v, c) in f.terms() {
            if v < self.order {
                continue;
            }
            let coeff = c.mul(binom_mod_p(v, self.order, p));
            if coeff.is_zero() {
                continue;
            }
            let e = (v - self.order)
                .checked_add(self.x_pow)
                .ok_or(Error::Overflow("operator image exponent"))?;
            out = out.add(&SparsePoly::monomial(p, coeff.value(), e))?;
        }
        Ok(out)
    }
}

/// Applies `x^a D_b` to f; see [`BasisOp::apply`].
pub fn apply_basis(op: BasisOp, f: &SparsePoly) -> Result<SparsePoly> {
    op.apply(f)
}

/// Least s with b < p^s, i.e. the smallest subring level at which D_b is
/// linear over R^(p^s).
pub fn min_level(order: u64, p: Prime) -> u32 {
    let mut s = 0u32;
    let mut pw = 1u64;
    while pw <= order {
        pw = pw.saturating_mul(p.get());
        s += 1;
    }
    s
}

/// All basis operators of Bernstein degree at most i, in (order, x_pow)
/// ascending order; there are (i+1)(i+2)/2 of them.
pub fn bernstein_basis(i: u64) -> Vec<BasisOp> {
    let mut ops = Vec::new();
    for b in 0..=i {
        for a in 0..=(i - b) {
            ops.push(BasisOp::new(a, b));
        }
    }
    ops
}

/// A finite F_p-combination of basis operators in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    modulus: Prime,
    terms: BTreeMap<BasisOp, u64>,
}

impl Operator {
    pub fn zero(modulus: Prime) -> Operator {
        Operator {
            modulus,
            terms: BTreeMap::new(),
        }
    }

    /// D_0, the identity.
    pub fn identity(modulus: Prime) -> Operator {
        Operator::basis_term(modulus, BasisOp::new(0, 0))
    }

    pub fn basis_term(modulus: Prime, op: BasisOp) -> Operator {
        Operator::from_terms(modulus, [(op, 1)])
    }

    pub fn from_terms(
        modulus: Prime,
        pairs: impl IntoIterator<Item = (BasisOp, u64)>,
    ) -> Operator {
        let mut out = Operator::zero(modulus);
        for (op, c) in pairs {
            out.add_term(op, c % modulus.get());
        }
        out
    }

    fn add_term(&mut self, op: BasisOp, coeff: u64) {
        if coeff == 0 {
            return;
        }
        let p = self.modulus.get();
        let entry = self.terms.entry(op).or_insert(0);
        *entry = (*entry + coeff) % p;
        if *entry == 0 {
            self.terms.remove(&op);
        }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending (order, x_pow) order.
    pub fn terms(&self) -> impl Iterator<Item = (BasisOp, Fp)> + '_ {
        self.terms
            .iter()
            .map(move |(&op, &c)| (op, Fp::new(c, self.modulus)))
    }

    /// Largest divided-power order present.
    pub fn max_order(&self) -> Option<u64> {
        self.terms.keys().map(|op| op.order).max()
    }

    fn check(&self, rhs: &Operator) -> Result<()> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.get(),
                rhs.modulus.get(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        self.check(rhs)?;
        let mut out = self.clone();
        for (&op, &c) in &rhs.terms {
            out.add_term(op, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Fp) -> Result<Operator> {
        if c.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.get(),
                c.modulus().get(),
            ));
        }
        let mut out = Operator::zero(self.modulus);
        for (&op, &v) in &self.terms {
            out.add_term(op, c.mul(Fp::new(v, self.modulus)).value());
        }
        Ok(out)
    }

    /// Composition, normalized via D_b x^m = sum_j C(m, j) x^(m-j) D_(b-j)
    /// and D_a D_b = C(a+b, a) D_(a+b).
    pub fn op_mul(&self, rhs: &Operator) -> Result<Operator> {
        self.check(rhs)?;
        let p = self.modulus;
        let mut out = Operator::zero(p);
        for (&u, &cu) in &self.terms {
            for (&v, &cv) in &rhs.terms {
                let x_total = u
                    .x_pow
                    .checked_add(v.x_pow)
                    .ok_or(Error::Overflow("composed x-power"))?;
                let order_total = u
                    .order
                    .checked_add(v.order)
                    .ok_or(Error::Overflow("composed order"))?;
                let base = Fp::new(cu, p).mul(Fp::new(cv, p));
                for j in 0..=u.order.min(v.x_pow) {
                    let c = base
                        .mul(binom_mod_p(v.x_pow, j, p))
                        .mul(binom_mod_p(order_total - j, v.order, p));
                    out.add_term(BasisOp::new(x_total - j, order_total - j), c.value());
                }
            }
        }
        Ok(out)
    }

    /// Linear extension of the basis action.
    pub fn apply(&self, f: &SparsePoly) -> Result<SparsePoly> {
        if self.modulus != f.modulus() {
            return Err(Error::ModulusMismatch(
                self.modulus.get(),
                f.modulus().get(),
            ));
        }
        let mut out = SparsePoly::zero(self.modulus);
        for (&op, &c) in &self.terms {
            let image = op.apply(f)?.scale(Fp::new(c, self.modulus))?;
            out = out.add(&image)?;
        }
        Ok(out)
    }

    /// Parses terms like `c*x^a*D_b` joined by `+`; factor order is fixed.
    pub fn parse(text: &str, modulus: Prime) -> Result<Operator> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty operator".into()));
        }
        let mut out = Operator::zero(modulus);
        let mut seen = std::collections::BTreeSet::new();
        for raw in text.split('+') {
            let (op, coeff) = parse_op_term(raw, modulus)?;
            if !seen.insert(op) {
                return Err(Error::Parse(format!(
                    "duplicate operator term x^{}*D_{}",
                    op.x_pow, op.order
                )));
            }
            out.add_term(op, coeff);
        }
        Ok(out)
    }
}

fn parse_op_term(raw: &str, modulus: Prime) -> Result<(BasisOp, u64)> {
    let s = raw.trim();
    let malformed = || Error::Parse(format!("malformed operator term `{s}`"));
    if s.is_empty() {
        return Err(Error::Parse("empty operator term".into()));
    }
    let mut coeff: Option<u64> = None;
    let mut x_pow: Option<u64> = None;
    let mut order: Option<u64> = None;
    for part in s.split('*') {
        let part = part.trim();
        if part.is_empty() {
            return Err(malformed());
        }
        if part.chars().all(|c| c.is_ascii_digit()) {
            // Coefficient: only once, only first.
            if coeff.is_some() || x_pow.is_some() || order.is_some() {
                return Err(malformed());
            }
            let c = part
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad coefficient `{part}`")))?;
            if c >= modulus.get() {
                return Err(Error::Parse(format!(
                    "coefficient {c} not reduced mod {modulus}"
                )));
            }
            coeff = Some(c);
        } else if let Some(rest) = part.strip_prefix("D_") {
            if order.is_some() {
                return Err(malformed());
            }
            if rest.starts_with('-') {
                return Err(Error::Parse(format!("negative order in `{s}`")));
            }
            order = Some(
                rest.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad order `{rest}`")))?,
            );
        } else if let Some(rest) = part.strip_prefix('x') {
            // x-power must precede D_b and follow the coefficient.
            if x_pow.is_some() || order.is_some() {
                return Err(malformed());
            }
            let e = if rest.is_empty() {
                1
            } else {
                let e = rest.strip_prefix('^').ok_or_else(malformed)?;
                if e.starts_with('-') {
                    return Err(Error::Parse(format!("negative exponent in `{s}`")));
                }
                e.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?
            };
            x_pow = Some(e);
        } else {
            return Err(malformed());
        }
    }
    Ok((
        BasisOp::new(x_pow.unwrap_or(0), order.unwrap_or(0)),
        coeff.unwrap_or(1),
    ))
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&op, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut pieces: Vec<String> = Vec::new();
            if c != 1 || (op.x_pow == 0 && op.order == 0) {
                pieces.push(c.to_string());
            }
            match op.x_pow {
                0 => {}
                1 => pieces.push("x".into()),
                a => pieces.push(format!("x^{a}")),
            }
            if op.order > 0 {
                pieces.push(format!("D_{}", op.order));
            }
            write!(f, "{}", pieces.join("*"))?;
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

    fn poly(s: &str, q: u64) -> SparsePoly {
        SparsePoly::parse(s, p(q)).unwrap()
    }

    #[test]
    fn basis_action() {
        let d2 = BasisOp::new(0, 2);
        assert_eq!(d2.apply(&poly("x^6", 2)).unwrap().to_string(), "x^4");
        let xd1 = BasisOp::new(1, 1);
        assert_eq!(xd1.apply(&poly("x^3", 2)).unwrap().to_string(), "x^3");
        let d3 = BasisOp::new(0, 3);
        assert!(d3.apply(&poly("x^2", 5)).unwrap().is_zero());
        let id = BasisOp::new(0, 0);
        let f = poly("1 + 2*x^7", 3);
        assert_eq!(id.apply(&f).unwrap(), f);
    }

    #[test]
    fn linear_action() {
        let op = Operator::from_terms(p(2), [(BasisOp::new(0, 2), 1), (BasisOp::new(0, 1), 1)]);
        assert_eq!(op.apply(&poly("x^3", 2)).unwrap().to_string(), "x + x^2");
        assert!(Operator::zero(p(2)).apply(&poly("x^3", 2)).unwrap().is_zero());
        let f = poly("x + x^4", 2);
        assert_eq!(Operator::identity(p(2)).apply(&f).unwrap(), f);
    }

    #[test]
    fn composition_normal_form() {
        let d1 = Operator::basis_term(p(2), BasisOp::new(0, 1));
        assert!(d1.op_mul(&d1).unwrap().is_zero());

        let d1_f3 = Operator::basis_term(p(3), BasisOp::new(0, 1));
        let sq = d1_f3.op_mul(&d1_f3).unwrap();
        assert_eq!(
            sq,
            Operator::from_terms(p(3), [(BasisOp::new(0, 2), 2)])
        );

        // D_1 x = x D_1 + D_0
        let x = Operator::basis_term(p(5), BasisOp::new(1, 0));
        let d1_f5 = Operator::basis_term(p(5), BasisOp::new(0, 1));
        let prod = d1_f5.op_mul(&x).unwrap();
        let expected = Operator::from_terms(
            p(5),
            [(BasisOp::new(1, 1), 1), (BasisOp::new(0, 0), 1)],
        );
        assert_eq!(prod, expected);

        // D_a D_b = C(a+b, a) D_(a+b)
        for (a, b, q) in [(2u64, 6u64, 2u64), (3, 9, 3), (4, 4, 5), (1, 2, 2)] {
            let da = Operator::basis_term(p(q), BasisOp::new(0, a));
            let db = Operator::basis_term(p(q), BasisOp::new(0, b));
            let lhs = da.op_mul(&db).unwrap();
            let c = binom_mod_p(a + b, a, p(q));
            let rhs = Operator::from_terms(p(q), [(BasisOp::new(0, a + b), c.value())]);
            assert_eq!(lhs, rhs, "D_{a} D_{b} mod {q}");
        }
    }

    #[test]
    fn composition_agrees_with_iterated_application() {
        let u = Operator::parse("x^2*D_3", p(2)).unwrap();
        let v = Operator::parse("x*D_1", p(2)).unwrap();
        let uv = u.op_mul(&v).unwrap();
        for e in 0..12u64 {
            let f = SparsePoly::x_pow(p(2), e);
            let two_step = u.apply(&v.apply(&f).unwrap()).unwrap();
            assert_eq!(uv.apply(&f).unwrap(), two_step, "on x^{e}");
        }
    }

    #[test]
    fn bernstein_enumeration() {
        let ops: Vec<(u64, u64)> = bernstein_basis(2)
            .into_iter()
            .map(|op| (op.x_pow, op.order))
            .collect();
        assert_eq!(ops, [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)]);
        assert_eq!(bernstein_basis(0).len(), 1);
        assert_eq!(bernstein_basis(5).len(), 21);
    }

    #[test]
    fn min_levels() {
        assert_eq!(min_level(0, p(2)), 0);
        assert_eq!(min_level(1, p(2)), 1);
        assert_eq!(min_level(4, p(2)), 3);
        assert_eq!(min_level(9, p(3)), 3);
        assert_eq!(min_level(8, p(3)), 2);
    }

    #[test]
    fn operator_text_round_trips() {
        for (text, q) in [
            ("x^2*D_4 + D_1", 2),
            ("2*x*D_3 + 1", 3),
            ("2*D_2 + 4*x^7", 5),
            ("0", 3),
        ] {
            let op = Operator::parse(text, p(q)).unwrap();
            assert_eq!(op.to_string(), text, "mod {q}");
        }
        // `D_0` and `x^0` are accepted on input; the canonical form drops them.
        let id = Operator::parse("D_0", p(2)).unwrap();
        assert_eq!(id, Operator::identity(p(2)));
        assert_eq!(id.to_string(), "1");
    }

    #[test]
    fn operator_parse_rejects_bad_input() {
        for bad in ["", "D_", "D_-1", "x*2", "D_1*x", "3*D_1", "x^", "D_1*D_2", "y"] {
            assert!(Operator::parse(bad, p(3)).is_err(), "`{bad}` should not parse");
        }
    }

    /// The divided-power derivative of x^(p^alpha + p^beta) follows a short
    /// case table; the one exception in the source table is p = 2 with
    /// alpha = beta = k-1, where the direct binomial value is the constant 1.
    #[test]
    fn derivative_table_for_prime_power_monomial_products() {
        for q in [2u64, 3, 5] {
            let pq = p(q);
            for alpha in 0..=4u32 {
                for beta in alpha..=4u32 {
                    for k in 0..=5u32 {
                        let e = pq.pow(alpha).unwrap() + pq.pow(beta).unwrap();
                        let f = SparsePoly::x_pow(pq, e);
                        let got = BasisOp::new(0, pq.pow(k).unwrap()).apply(&f).unwrap();
                        let expected = if q == 2 && alpha == beta && k == alpha + 1 {
                            SparsePoly::one(pq)
                        } else if k == alpha && alpha == beta {
                            SparsePoly::from_terms(pq, [(pq.pow(alpha).unwrap(), 2)])
                        } else if k == alpha && alpha < beta {
                            SparsePoly::x_pow(pq, pq.pow(beta).unwrap())
                        } else if k == beta && alpha < beta {
                            SparsePoly::x_pow(pq, pq.pow(alpha).unwrap())
                        } else {
                            SparsePoly::zero(pq)
                        };
                        assert_eq!(got, expected, "p={q} alpha={alpha} beta={beta} k={k}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn leibniz_rule(
            fe in proptest::collection::vec((0u64..60, 1u64..3), 1..5),
            ge in proptest::collection::vec((0u64..60, 1u64..3), 1..5),
            b in 0u64..20,
        ) {
            let q = p(3);
            let f = SparsePoly::from_terms(q, fe);
            let g = SparsePoly::from_terms(q, ge);
            let lhs = BasisOp::new(0, b).apply(&f.mul(&g).unwrap()).unwrap();
            let mut rhs = SparsePoly::zero(q);
            for j in 0..=b {
                let part = BasisOp::new(0, j)
                    .apply(&f)
                    .unwrap()
                    .mul(&BasisOp::new(0, b - j).apply(&g).unwrap())
                    .unwrap();
                rhs = rhs.add(&part).unwrap();
            }
            prop_assert_eq!(lhs, rhs);
        }
    }
}
