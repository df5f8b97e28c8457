//! Exact dimension counts for Bernstein-filtration images, the closed
//! dimension formula and lower bound they are checked against, and growth
//! series built from both.
//!
//! All linear algebra is row reduction over F_p on the monomial basis of
//! R s1 + R s2; no floating point enters any computation.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::diffop::{bernstein_basis, BasisOp};
use crate::error::{Error, Result};
use crate::fieldpoly::{Fp, Prime, SparsePoly};
use crate::frobmod::{FrobModule, GeneratorKind, ModuleElement};
use crate::par::par_map_collect;

/// Coordinate labels of the rank-two module, in pivot order: the s2
/// coordinate sorts before the s1 coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    S2,
    S1,
}

/// A monomial basis vector x^exponent s_component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub component: Component,
    pub exponent: u64,
}

/// Sparse row over the monomial basis; absent keys are zero.
pub type Row = BTreeMap<Mono, u64>;

fn row_of(elem: &ModuleElement) -> Row {
    let mut row = Row::new();
    for (exponent, c) in elem.f2().terms() {
        row.insert(
            Mono {
                component: Component::S2,
                exponent,
            },
            c.value(),
        );
    }
    for (exponent, c) in elem.f1().terms() {
        row.insert(
            Mono {
                component: Component::S1,
                exponent,
            },
            c.value(),
        );
    }
    row
}

fn element_of(row: &Row, modulus: Prime) -> ModuleElement {
    let pick = |which: Component| {
        SparsePoly::from_terms(
            modulus,
            row.iter()
                .filter(|(m, _)| m.component == which)
                .map(|(m, &c)| (m.exponent, c)),
        )
    };
    ModuleElement::new(pick(Component::S1), pick(Component::S2)).expect("same modulus")
}

/// Incremental reduced row echelon form over F_p.
///
/// Rows are keyed by pivot monomial; every pivot has coefficient 1 and is
/// eliminated from all other rows, so the stored basis depends only on the
/// spanned subspace, not on insertion order.
#[derive(Debug, Clone)]
pub struct SpanAccumulator {
    modulus: Prime,
    rows: BTreeMap<Mono, Row>,
}

impl SpanAccumulator {
    pub fn new(modulus: Prime) -> SpanAccumulator {
        SpanAccumulator {
            modulus,
            rows: BTreeMap::new(),
        }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Reduced rows in pivot order.
    pub fn basis(&self) -> impl Iterator<Item = &Row> {
        self.rows.values()
    }

    /// The reduced basis converted back to module elements, pivot order.
    pub fn basis_elements(&self) -> Vec<ModuleElement> {
        self.rows
            .values()
            .map(|row| element_of(row, self.modulus))
            .collect()
    }

    /// Adds one element to the span. Returns whether the dimension grew.
    pub fn insert(&mut self, elem: &ModuleElement) -> Result<bool> {
        if elem.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.get(),
                elem.modulus().get(),
            ));
        }
        Ok(self.insert_row(row_of(elem)))
    }

    fn insert_row(&mut self, mut row: Row) -> bool {
        let p = self.modulus;
        // chase the leading entry until it lands on a fresh pivot
        let pivot = loop {
            let (&pivot, &lead) = match row.first_key_value() {
                Some(entry) => entry,
                None => return false,
            };
            match self.rows.get(&pivot) {
                Some(existing) => Self::eliminate(&mut row, Fp::new(lead, p), existing, p),
                None => break pivot,
            }
        };
        // clear existing pivots out of the tail; stored rows carry no pivot
        // mono but their own, so one pass settles it
        let touched: Vec<Mono> = row
            .keys()
            .copied()
            .filter(|m| self.rows.contains_key(m))
            .collect();
        for mono in touched {
            if let Some(&c) = row.get(&mono) {
                let existing = &self.rows[&mono];
                Self::eliminate(&mut row, Fp::new(c, p), existing, p);
            }
        }
        let lead = row[&pivot];
        let inv = Fp::new(lead, p).inv().expect("pivot entries are nonzero");
        for c in row.values_mut() {
            *c = Fp::new(*c, p).mul(inv).value();
        }
        for other in self.rows.values_mut() {
            if let Some(&c) = other.get(&pivot) {
                Self::eliminate(other, Fp::new(c, p), &row, p);
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    /// row -= factor * other, dropping zero entries.
    fn eliminate(row: &mut Row, factor: Fp, other: &Row, p: Prime) {
        for (&mono, &c) in other {
            let delta = factor.mul(Fp::new(c, p));
            let entry = Fp::new(row.get(&mono).copied().unwrap_or(0), p).sub(delta);
            if entry.is_zero() {
                row.remove(&mono);
            } else {
                row.insert(mono, entry.value());
            }
        }
    }
}

/// Dimension of the K-span of the given elements.
pub fn span_dim(modulus: Prime, elements: &[ModuleElement]) -> Result<usize> {
    let mut acc = SpanAccumulator::new(modulus);
    for elem in elements {
        acc.insert(elem)?;
    }
    Ok(acc.dimension())
}

/// The image F_i (gens): span of all x^a D_b g with a+b <= i, g in gens.
#[derive(Debug, Clone)]
pub struct FiltrationImage {
    pub i: u64,
    pub dim: usize,
    /// Reduced echelon basis of the image, in pivot order.
    pub basis: Vec<ModuleElement>,
}

fn image_from_elements(i: u64, modulus: Prime, images: Vec<ModuleElement>) -> FiltrationImage {
    let mut seen = HashSet::new();
    let mut acc = SpanAccumulator::new(modulus);
    for elem in images {
        // Zero images and repeats of the same polynomial vector cannot move
        // the span; skipping them here is checked against the plain path in
        // the tests.
        if elem.is_zero() || !seen.insert(elem.clone()) {
            continue;
        }
        acc.insert(&elem).expect("modulus fixed by construction");
    }
    FiltrationImage {
        i,
        dim: acc.dimension(),
        basis: acc.basis_elements(),
    }
}

/// Computes F_i (gens), fanning the operator applications out across
/// threads when the `parallel` feature is on.
pub fn filtration_image(
    module: &FrobModule,
    gens: &[ModuleElement],
    i: u64,
) -> Result<FiltrationImage> {
    let pairs: Vec<(BasisOp, &ModuleElement)> = bernstein_basis(i)
        .into_iter()
        .flat_map(|op| gens.iter().map(move |g| (op, g)))
        .collect();
    let images = par_map_collect(&pairs, |(op, g)| module.act_basis(*op, g, None))?;
    Ok(image_from_elements(i, module.modulus(), images))
}

/// Sequential twin of [`filtration_image`]; kept for benchmarking and for
/// asserting that parallel dispatch is behavior-invisible.
pub fn filtration_image_seq(
    module: &FrobModule,
    gens: &[ModuleElement],
    i: u64,
) -> Result<FiltrationImage> {
    let mut images = Vec::new();
    for op in bernstein_basis(i) {
        for g in gens {
            images.push(module.act_basis(op, g, None)?);
        }
    }
    Ok(image_from_elements(i, module.modulus(), images))
}

/// Largest e with p^e <= i. Requires i >= 1.
pub fn e_of(i: u64, p: Prime) -> u32 {
    assert!(i >= 1, "e_of needs i >= 1");
    let mut e = 0u32;
    let mut power = p.get();
    while power <= i {
        e += 1;
        power = match power.checked_mul(p.get()) {
            Some(next) => next,
            None => break,
        };
    }
    e
}

fn e_of_u128(i: u128, p: Prime) -> u32 {
    assert!(i >= 1, "e_of needs i >= 1");
    let mut e = 0u32;
    let mut power = p.get() as u128;
    while power <= i {
        e += 1;
        power = match power.checked_mul(p.get() as u128) {
            Some(next) => next,
            None => break,
        };
    }
    e
}

/// Closed form for dim F_i s2 on EX2, valid for large enough i:
/// with p^e <= i < p^(e+1),
///   2i + p^(e+1) - p^e + 2   if i >= p^(e+1) - p^e + p^(e-1),
///   3i - p^(e-1) + 3         otherwise.
/// Undefined for i < p, where e = 0 would put p^(e-1) outside the integers.
pub fn thm42_formula(i: u64, p: Prime) -> Result<u64> {
    if i < p.get() {
        return Err(Error::FormulaUndefined {
            i: i as u128,
            p: p.get(),
        });
    }
    let e = e_of(i, p);
    let low = p.pow(e - 1)?;
    let mid = p.pow(e)?;
    let high = p.pow(e + 1)?;
    let boundary = high - mid + low;
    let value = if i >= boundary {
        (2 * i).checked_add(high - mid + 2)
    } else {
        (3 * i).checked_sub(low).map(|v| v + 3)
    };
    value.ok_or(Error::Overflow("closed dimension formula"))
}

/// [`thm42_formula`] in 128-bit arithmetic, for ratio analysis at exponents
/// far beyond any brute-forceable range.
pub fn thm42_formula_u128(i: u128, p: Prime) -> Result<u128> {
    if i < p.get() as u128 {
        return Err(Error::FormulaUndefined { i, p: p.get() });
    }
    let e = e_of_u128(i, p);
    let low = p.pow_u128(e - 1)?;
    let mid = p.pow_u128(e)?;
    let high = p.pow_u128(e + 1)?;
    let boundary = high - mid + low;
    let value = if i >= boundary {
        (2 * i).checked_add(high - mid + 2)
    } else {
        (3 * i).checked_sub(low).map(|v| v + 3)
    };
    value.ok_or(Error::Overflow("closed dimension formula"))
}

/// Lower bound for dim F_(p^e) {s1, s2} on EX1:
/// (e - ceil(e/2) + 1) p^e - p^(ceil(e/2)) (p^(e - ceil(e/2) + 1) - 1)/(p - 1).
pub fn thm32_bound(e: u32, p: Prime) -> Result<u64> {
    let half = e.div_ceil(2);
    let main = ((e - half) as u64 + 1)
        .checked_mul(p.pow(e)?)
        .ok_or(Error::Overflow("growth lower bound"))?;
    let geometric = (p.pow(e - half + 1)? - 1) / (p.get() - 1);
    let correction = p
        .pow(half)?
        .checked_mul(geometric)
        .ok_or(Error::Overflow("growth lower bound"))?;
    main.checked_sub(correction)
        .ok_or(Error::Overflow("growth lower bound"))
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn reduced(num: u64, den: u64) -> (u64, u64) {
    debug_assert!(den != 0);
    if num == 0 {
        return (0, 1);
    }
    let g = gcd(num, den);
    (num / g, den / g)
}

/// One row of a growth table. `ratio_num`/`ratio_den` hold dim/i in lowest
/// terms (absent at i = 0); `formula` and `match` are filled only where the
/// closed form applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRecord {
    pub i: u64,
    pub dim: u64,
    pub ratio_num: Option<u64>,
    pub ratio_den: Option<u64>,
    pub formula: Option<u64>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

impl GrowthRecord {
    pub fn ratio(&self) -> Option<(u64, u64)> {
        Some((self.ratio_num?, self.ratio_den?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthSeries {
    pub records: Vec<GrowthRecord>,
    /// max over records of dim/i, as an exact reduced rational.
    pub empirical_slope_bound: Option<(u64, u64)>,
}

/// Dimension growth along the given filtration indices; `i_values` must be
/// strictly ascending. The closed form column appears only for EX2 acting
/// on exactly {s2}, where it is meaningful.
pub fn growth_series(
    module: &FrobModule,
    gens: &[ModuleElement],
    i_values: &[u64],
) -> Result<GrowthSeries> {
    if i_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "filtration indices must be strictly ascending".into(),
        ));
    }
    let p = module.modulus();
    let closed_form_applies = *module.generator_sequence().kind() == GeneratorKind::Ex2
        && gens == [ModuleElement::s2(p)];
    let mut records = Vec::with_capacity(i_values.len());
    let mut slope: Option<(u64, u64)> = None;
    for &i in i_values {
        let dim = filtration_image(module, gens, i)?.dim as u64;
        let ratio = (i > 0).then(|| reduced(dim, i));
        if let Some((num, den)) = ratio {
            // num/den > sn/sd iff num*sd > sn*den, exactly in u128.
            let bigger = match slope {
                Some((sn, sd)) => num as u128 * sd as u128 > sn as u128 * den as u128,
                None => true,
            };
            if bigger {
                slope = Some((num, den));
            }
        }
        let formula = if closed_form_applies {
            match thm42_formula(i, p) {
                Ok(v) => Some(v),
                Err(Error::FormulaUndefined { .. }) => None,
                Err(other) => return Err(other),
            }
        } else {
            None
        };
        records.push(GrowthRecord {
            i,
            dim,
            ratio_num: ratio.map(|r| r.0),
            ratio_den: ratio.map(|r| r.1),
            formula,
            matches: formula.map(|v| v == dim),
        });
    }
    Ok(GrowthSeries {
        records,
        empirical_slope_bound: slope,
    })
}
