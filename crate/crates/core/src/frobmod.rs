//! The rank-two module R s1 + R s2 with descent twists along p-th power
//! subrings.
//!
//! A generator sequence g_0, g_1, ... with g_r a p^r-th power fixes, for
//! every level s, a change of basis (s1, sigma_(s-1) s1 + s2) under which
//! operators of order below p^s act coordinatewise. The induced action on
//! the standard coordinates is implemented by [`FrobModule::act_basis`];
//! it does not depend on the chosen admissible level.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::Deserialize;

use crate::diffop::{min_level, BasisOp, Operator};
use crate::error::{Error, Result};
use crate::fieldpoly::{Fp, FrobeniusLevel, Prime, SparsePoly};

/// The built-in generator sequences and the user-supplied escape hatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// g_r = x^(p^r + p^(2r))
    Ex1,
    /// g_r = x^((p+1) p^r)
    Ex2,
    /// Explicit list; entry r must have Frobenius level at least r.
    Custom(Vec<SparsePoly>),
}

/// A generator sequence over a fixed prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSequence {
    modulus: Prime,
    kind: GeneratorKind,
}

/// Outcome of checking the level constraint on a generator sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceCheck {
    Ok,
    Violation { r: u32, level: FrobeniusLevel },
}

impl GeneratorSequence {
    pub fn ex1(modulus: Prime) -> GeneratorSequence {
        GeneratorSequence {
            modulus,
            kind: GeneratorKind::Ex1,
        }
    }

    pub fn ex2(modulus: Prime) -> GeneratorSequence {
        GeneratorSequence {
            modulus,
            kind: GeneratorKind::Ex2,
        }
    }

    pub fn custom(modulus: Prime, entries: Vec<SparsePoly>) -> Result<GeneratorSequence> {
        for g in &entries {
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus.get(), g.modulus().get()));
            }
        }
        Ok(GeneratorSequence {
            modulus,
            kind: GeneratorKind::Custom(entries),
        })
    }

    /// Reads `{"p": 2, "g": ["x^3", "x^6", ...]}`.
    pub fn from_json_str(text: &str) -> Result<GeneratorSequence> {
        #[derive(Deserialize)]
        struct File {
            p: u64,
            g: Vec<String>,
        }
        let file: File = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("generator sequence file: {e}")))?;
        let modulus = Prime::new(file.p)?;
        let entries = file
            .g
            .iter()
            .map(|s| SparsePoly::parse(s, modulus))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSequence::custom(modulus, entries)
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    /// g_r.
    pub fn generator(&self, r: u32) -> Result<SparsePoly> {
        let p = self.modulus;
        match &self.kind {
            GeneratorKind::Ex1 => {
                let e = p
                    .pow(r)?
                    .checked_add(p.pow(2 * r)?)
                    .ok_or(Error::Overflow("generator exponent"))?;
                Ok(SparsePoly::x_pow(p, e))
            }
            GeneratorKind::Ex2 => {
                let e = (p.get() + 1)
                    .checked_mul(p.pow(r)?)
                    .ok_or(Error::Overflow("generator exponent"))?;
                Ok(SparsePoly::x_pow(p, e))
            }
            GeneratorKind::Custom(entries) => {
                entries
                    .get(r as usize)
                    .cloned()
                    .ok_or(Error::ShortSequence {
                        needed: r,
                        have: entries.len(),
                    })
            }
        }
    }

    /// Checks frobenius_level(g_r) >= r for all r <= rmax, reporting the
    /// first violation.
    pub fn validate(&self, rmax: u32) -> Result<SequenceCheck> {
        for r in 0..=rmax {
            let level = self.generator(r)?.frobenius_level();
            if level < FrobeniusLevel::Finite(r) {
                return Ok(SequenceCheck::Violation { r, level });
            }
        }
        Ok(SequenceCheck::Ok)
    }
}

/// An element f1 s1 + f2 s2 in standard coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    f1: SparsePoly,
    f2: SparsePoly,
}

impl ModuleElement {
    pub fn new(f1: SparsePoly, f2: SparsePoly) -> Result<ModuleElement> {
        if f1.modulus() != f2.modulus() {
            return Err(Error::ModulusMismatch(
                f1.modulus().get(),
                f2.modulus().get(),
            ));
        }
        Ok(ModuleElement { f1, f2 })
    }

    pub fn zero(modulus: Prime) -> ModuleElement {
        ModuleElement {
            f1: SparsePoly::zero(modulus),
            f2: SparsePoly::zero(modulus),
        }
    }

    pub fn s1(modulus: Prime) -> ModuleElement {
        ModuleElement {
            f1: SparsePoly::one(modulus),
            f2: SparsePoly::zero(modulus),
        }
    }

    pub fn s2(modulus: Prime) -> ModuleElement {
        ModuleElement {
            f1: SparsePoly::zero(modulus),
            f2: SparsePoly::one(modulus),
        }
    }

    pub fn f1(&self) -> &SparsePoly {
        &self.f1
    }

    pub fn f2(&self) -> &SparsePoly {
        &self.f2
    }

    pub fn modulus(&self) -> Prime {
        self.f1.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.f1.is_zero() && self.f2.is_zero()
    }

    pub fn add(&self, rhs: &ModuleElement) -> Result<ModuleElement> {
        Ok(ModuleElement {
            f1: self.f1.add(&rhs.f1)?,
            f2: self.f2.add(&rhs.f2)?,
        })
    }

    pub fn sub(&self, rhs: &ModuleElement) -> Result<ModuleElement> {
        Ok(ModuleElement {
            f1: self.f1.sub(&rhs.f1)?,
            f2: self.f2.sub(&rhs.f2)?,
        })
    }

    pub fn scale(&self, c: Fp) -> Result<ModuleElement> {
        Ok(ModuleElement {
            f1: self.f1.scale(c)?,
            f2: self.f2.scale(c)?,
        })
    }

    /// Parses `(f1, f2)` with both components in canonical polynomial form.
    pub fn parse(text: &str, modulus: Prime) -> Result<ModuleElement> {
        let s = text.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("module element `{s}` must be parenthesized")))?;
        let mut parts = inner.split(',');
        let (f1, f2) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse(format!(
                    "module element `{s}` must have exactly two components"
                )))
            }
        };
        Ok(ModuleElement {
            f1: SparsePoly::parse(f1, modulus)?,
            f2: SparsePoly::parse(f2, modulus)?,
        })
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}

/// The first map of the exact sequence R -> M -> R: f maps to f s1.
pub fn ses_embed(f: SparsePoly) -> ModuleElement {
    let zero = SparsePoly::zero(f.modulus());
    ModuleElement { f1: f, f2: zero }
}

/// The second map of the exact sequence: f1 s1 + f2 s2 maps to f2.
pub fn ses_project(m: &ModuleElement) -> SparsePoly {
    m.f2.clone()
}

/// The module together with a memoized twist cache.
#[derive(Debug)]
pub struct FrobModule {
    gseq: GeneratorSequence,
    sigma_cache: RwLock<HashMap<u32, Arc<SparsePoly>>>,
}

impl FrobModule {
    pub fn new(gseq: GeneratorSequence) -> FrobModule {
        FrobModule {
            gseq,
            sigma_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn ex1(modulus: Prime) -> FrobModule {
        FrobModule::new(GeneratorSequence::ex1(modulus))
    }

    pub fn ex2(modulus: Prime) -> FrobModule {
        FrobModule::new(GeneratorSequence::ex2(modulus))
    }

    pub fn modulus(&self) -> Prime {
        self.gseq.modulus()
    }

    pub fn generator_sequence(&self) -> &GeneratorSequence {
        &self.gseq
    }

    /// The twist polynomial sigma_n = g_0 + ... + g_n; sigma_(-1) = 0.
    ///
    /// Results are memoized. Entries are inserted fully formed under a write
    /// lock, so concurrent readers only ever see complete polynomials, and a
    /// racing double fill writes the identical value.
    pub fn sigma(&self, n: i64) -> Result<SparsePoly> {
        if n < 0 {
            return Ok(SparsePoly::zero(self.modulus()));
        }
        Ok(self.sigma_arc(n as u32)?.as_ref().clone())
    }

    fn sigma_arc(&self, n: u32) -> Result<Arc<SparsePoly>> {
        if let Some(hit) = self.sigma_cache.read().expect("cache lock").get(&n) {
            return Ok(hit.clone());
        }
        let prev = if n == 0 {
            SparsePoly::zero(self.modulus())
        } else {
            self.sigma_arc(n - 1)?.as_ref().clone()
        };
        let value = Arc::new(prev.add(&self.gseq.generator(n)?)?);
        let mut cache = self.sigma_cache.write().expect("cache lock");
        Ok(cache.entry(n).or_insert(value).clone())
    }

    /// Twist used by an operator acting at level s.
    fn twist(&self, s: u32) -> Result<Arc<SparsePoly>> {
        if s == 0 {
            Ok(Arc::new(SparsePoly::zero(self.modulus())))
        } else {
            self.sigma_arc(s - 1)
        }
    }

    /// Action of `x^a D_b` on an element.
    ///
    /// `level` picks the subring level s used for the change of basis; it
    /// must satisfy b < p^s and defaults to the least such s. The result is
    /// the same for every admissible level.
    pub fn act_basis(
        &self,
        op: BasisOp,
        m: &ModuleElement,
        level: Option<u32>,
    ) -> Result<ModuleElement> {
        let p = self.modulus();
        if m.modulus() != p {
            return Err(Error::ModulusMismatch(p.get(), m.modulus().get()));
        }
        let s = level.unwrap_or_else(|| min_level(op.order, p));
        // p^s can exceed u64 for large explicit levels; that only makes the
        // constraint easier, so treat overflow as satisfied.
        if let Ok(pw) = p.pow(s) {
            if op.order >= pw {
                return Err(Error::InvalidLevel {
                    order: op.order,
                    level: s,
                });
            }
        }
        let shift = SparsePoly::x_pow(p, op.x_pow);
        let d = BasisOp::new(0, op.order);
        let image_f2 = d.apply(&m.f2)?;
        let image_f1 = if m.f2.is_zero() {
            d.apply(&m.f1)?
        } else {
            let sigma = self.twist(s)?;
            let twisted = m.f1.add(&m.f2.mul(&sigma)?)?;
            d.apply(&twisted)?.sub(&image_f2.mul(&sigma)?)?
        };
        Ok(ModuleElement {
            f1: shift.mul(&image_f1)?,
            f2: shift.mul(&image_f2)?,
        })
    }

    /// Linear extension of [`FrobModule::act_basis`] at default levels.
    pub fn act(&self, op: &Operator, m: &ModuleElement) -> Result<ModuleElement> {
        if op.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch(
                self.modulus().get(),
                op.modulus().get(),
            ));
        }
        let mut out = ModuleElement::zero(self.modulus());
        for (basis, c) in op.terms() {
            let image = self.act_basis(basis, m, None)?.scale(c)?;
            out = out.add(&image)?;
        }
        Ok(out)
    }

    /// The coordinatewise shorthand for D_(p^k): (f1, f2) maps to
    /// (D f1 + (D sigma_k) f2, D f2).
    ///
    /// This agrees with [`FrobModule::act_basis`] whenever f2 is constant
    /// and differs on general f2 (the derivative lands on f2 sigma_k as a
    /// product there); it exists for cross-checking only.
    pub fn displayed_formula_act(&self, k: u32, m: &ModuleElement) -> Result<ModuleElement> {
        let p = self.modulus();
        if m.modulus() != p {
            return Err(Error::ModulusMismatch(p.get(), m.modulus().get()));
        }
        let d = BasisOp::new(0, p.pow(k)?);
        let sigma = self.sigma(k as i64)?;
        let f1 = d.apply(&m.f1)?.add(&d.apply(&sigma)?.mul(&m.f2)?)?;
        Ok(ModuleElement {
            f1,
            f2: d.apply(&m.f2)?,
        })
    }
}
