//! Batch checks that recompute every claim of the source tables from
//! scratch and compare, case by case, against what the tables print.
//!
//! Ground truth is always an independent computation: direct binomial
//! sums for derivative tables, iterated module actions for product
//! tables, row reduction for dimensions. The closed formulas are never
//! compared against themselves. Where the recomputation contradicts the
//! printed table, the case is recorded as `paper-typo-suspected` or
//! `out-of-range` with the evidence, never silently patched; `fail` is
//! reserved for internal inconsistency.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::diffop::{apply_basis, BasisOp};
use crate::error::{Error, Result};
use crate::fieldpoly::{Prime, SparsePoly};
use crate::filtration::{filtration_image, thm32_bound, thm42_formula, thm42_formula_u128};
use crate::frobmod::{FrobModule, ModuleElement};

/// Per-case outcome vocabulary, fixed as the report wire format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "match")]
    Match,
    #[serde(rename = "paper-typo-suspected")]
    PaperTypoSuspected,
    #[serde(rename = "out-of-range")]
    OutOfRange,
    #[serde(rename = "fail")]
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::PaperTypoSuspected => "paper-typo-suspected",
            Verdict::OutOfRange => "out-of-range",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseRecord {
    pub inputs: BTreeMap<String, String>,
    pub oracle: String,
    pub paper: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseRecord {
    fn new(inputs: &[(&str, String)], oracle: String, paper: String, verdict: Verdict) -> Self {
        CaseRecord {
            inputs: inputs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            oracle,
            paper,
            verdict,
            note: None,
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    #[serde(rename = "match")]
    pub matches: u64,
    pub suspected: u64,
    pub out_of_range: u64,
    pub fail: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub p: u64,
    pub params: BTreeMap<String, u64>,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(check: &str, p: Prime, params: &[(&str, u64)]) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            p: p.get(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            cases: Vec::new(),
            summary: Summary::default(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, case: CaseRecord) {
        match case.verdict {
            Verdict::Match => self.summary.matches += 1,
            Verdict::PaperTypoSuspected => self.summary.suspected += 1,
            Verdict::OutOfRange => self.summary.out_of_range += 1,
            Verdict::Fail => self.summary.fail += 1,
        }
        self.cases.push(case);
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    /// A report passes when nothing is internally inconsistent; recorded
    /// table anomalies do not count against it.
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// Exact comparison of a/b and c/d for nonnegative numerators and positive
/// denominators, free of any multiplication (and so of overflow): compare
/// integer parts, then the remainders as reciprocals, Euclidean-style.
pub(crate) fn cmp_frac(a: u128, b: u128, c: u128, d: u128) -> Ordering {
    let (mut a, mut b, mut c, mut d) = (a, b, c, d);
    loop {
        let (q1, q2) = (a / b, c / d);
        if q1 != q2 {
            return q1.cmp(&q2);
        }
        let (r1, r2) = (a % b, c % d);
        match (r1 == 0, r2 == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (false, false) => (a, b, c, d) = (d, r2, b, r1),
        }
    }
}

/// Is |n/d - tn/td| < 1/1000? Decided exactly by comparing n/d against
/// tn/td +- 1/1000 with common denominator 1000 td.
fn within_millith(n: u128, d: u128, tn: u128, td: u128) -> bool {
    let upper = cmp_frac(n, d, 1000 * tn + td, 1000 * td) == Ordering::Less;
    let lower = match (1000 * tn).checked_sub(td) {
        Some(num) => cmp_frac(n, d, num, 1000 * td) == Ordering::Greater,
        None => true,
    };
    upper && lower
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn frac_string(n: u128, d: u128) -> String {
    let g = gcd_u128(n, d).max(1);
    format!("{}/{}", n / g, d / g)
}

/// Decimal rendering with six significant digits, for values >= 1 only.
/// Report columns stay exact; this exists for the human-readable extras.
pub fn approx_sig6(num: u128, den: u128) -> String {
    debug_assert!(den > 0 && num >= den);
    let digits = (num / den).to_string().len();
    let decimals = 6usize.saturating_sub(digits);
    format!("{:.*}", decimals, num as f64 / den as f64)
}

/// The derivative table for products of two prime-power monomials:
/// the printed value of D_(p^k) (x^(p^alpha) x^(p^beta)), alpha <= beta.
fn lemma31_table(p: Prime, alpha: u32, beta: u32, k: u32) -> Result<SparsePoly> {
    let x = |e: u32| -> Result<SparsePoly> { Ok(SparsePoly::x_pow(p, p.pow(e)?)) };
    if k == alpha && alpha == beta {
        x(alpha)?.add(&x(beta)?)
    } else if k == alpha && alpha < beta {
        x(beta)
    } else if alpha < beta && beta == k {
        x(alpha)
    } else if p.get() == 2 && alpha == beta && k == alpha + 1 {
        x(alpha)
    } else {
        Ok(SparsePoly::zero(p))
    }
}

/// Recomputes the two-monomial derivative table by direct binomials.
pub fn check_lemma31(p: Prime, kmax: u32) -> Result<CheckReport> {
    if kmax > 6 {
        return Err(Error::InvalidInput("kmax must be at most 6".into()));
    }
    let mut report = CheckReport::new("lemma31", p, &[("kmax", kmax as u64)]);
    for beta in 0..kmax.max(1) {
        for alpha in 0..=beta {
            for k in 0..=kmax {
                let product = SparsePoly::x_pow(p, p.pow(alpha)?).mul(&SparsePoly::x_pow(
                    p,
                    p.pow(beta)?,
                ))?;
                let oracle = apply_basis(BasisOp::new(0, p.pow(k)?), &product)?;
                let table = lemma31_table(p, alpha, beta, k)?;
                let inputs = [
                    ("alpha", alpha.to_string()),
                    ("beta", beta.to_string()),
                    ("k", k.to_string()),
                ];
                let verdict = if oracle == table {
                    Verdict::Match
                } else if p.get() == 2 && alpha == beta && k == alpha + 1 {
                    Verdict::PaperTypoSuspected
                } else {
                    Verdict::Fail
                };
                let mut case = CaseRecord::new(
                    &inputs,
                    oracle.to_string(),
                    table.to_string(),
                    verdict,
                );
                if verdict == Verdict::PaperTypoSuspected {
                    case = case.with_note(
                        "direct computation: the exponents coincide and the binomial is 1; \
                         the proof's own expansion also yields 1"
                            .into(),
                    );
                }
                report.push(case);
            }
        }
    }
    Ok(report)
}

/// Recomputes D_(p^k) sigma_k on the flat example sequence and compares
/// with the printed closed form.
pub fn check_lemma41a(p: Prime, kmax: u32) -> Result<CheckReport> {
    if kmax > 6 {
        return Err(Error::InvalidInput("kmax must be at most 6".into()));
    }
    let mut report = CheckReport::new("lemma41a", p, &[("kmax", kmax as u64)]);
    let module = FrobModule::ex2(p);
    for k in 0..=kmax {
        let oracle = apply_basis(BasisOp::new(0, p.pow(k)?), &module.sigma(k as i64)?)?;
        let table = if k == 0 {
            SparsePoly::x_pow(p, p.get())
        } else {
            SparsePoly::x_pow(p, p.pow(k + 1)?).add(&SparsePoly::x_pow(p, p.pow(k - 1)?))?
        };
        let verdict = if oracle == table {
            Verdict::Match
        } else {
            Verdict::Fail
        };
        report.push(CaseRecord::new(
            &[("k", k.to_string())],
            oracle.to_string(),
            table.to_string(),
            verdict,
        ));
    }
    // The coordinatewise shorthand printed alongside the construction is
    // not the induced action when the s2 coordinate varies; record one
    // concrete instance so the divergence is never lost.
    let probe = ModuleElement::new(SparsePoly::zero(p), SparsePoly::x_pow(p, 1))?;
    let shorthand = module.displayed_formula_act(1, &probe)?;
    let action = module.act_basis(BasisOp::new(0, p.get()), &probe, None)?;
    report.note(format!(
        "coordinatewise shorthand vs induced action on {probe}: {shorthand} vs {action}; \
         the two agree on s2 itself and on the s1 copy, which covers every use in the \
         source tables"
    ));
    Ok(report)
}

/// The printed value of (d_(p^k1))^e1 ... (d_(p^kt))^et s2.
fn lemma41b_table(p: Prime, pattern: &[(u32, u64)]) -> Result<ModuleElement> {
    let poly_s1 = |f: SparsePoly| ModuleElement::new(f, SparsePoly::zero(p));
    match pattern {
        [] => Ok(ModuleElement::s2(p)),
        [(0, 1)] => poly_s1(SparsePoly::x_pow(p, p.get())),
        [(k, 1)] => poly_s1(
            SparsePoly::x_pow(p, p.pow(k + 1)?).add(&SparsePoly::x_pow(p, p.pow(k - 1)?))?,
        ),
        [(k1, 1), (k2, 1)] if *k1 == k2 + 1 || k1 + 1 == *k2 => Ok(ModuleElement::s1(p)),
        _ => Ok(ModuleElement::zero(p)),
    }
}

/// All factor sequences ((k1,e1),...,(kt,et)) with pairwise distinct k,
/// every e >= 1, and total order sum e_i p^(k_i) within budget; every
/// ordering of the factors is listed, plus the empty product.
fn product_patterns(p: Prime, budget: u64) -> Vec<Vec<(u32, u64)>> {
    let mut kmax = 0u32;
    while p.pow(kmax + 1).map(|v| v <= budget).unwrap_or(false) {
        kmax += 1;
    }
    let mut out = Vec::new();
    let mut current: Vec<(u32, u64)> = Vec::new();
    fn extend(
        p: Prime,
        kmax: u32,
        remaining: u64,
        current: &mut Vec<(u32, u64)>,
        out: &mut Vec<Vec<(u32, u64)>>,
    ) {
        out.push(current.clone());
        for k in 0..=kmax {
            if current.iter().any(|(used, _)| *used == k) {
                continue;
            }
            let weight = p.pow(k).expect("within budget");
            let mut e = 1u64;
            while e * weight <= remaining {
                current.push((k, e));
                extend(p, kmax, remaining - e * weight, current, out);
                current.pop();
                e += 1;
            }
        }
    }
    extend(p, kmax, budget, &mut current, &mut out);
    out
}

/// Recomputes the product-action table by iterated module action.
pub fn check_lemma41b(p: Prime, budget: u64) -> Result<CheckReport> {
    if budget > p.pow(4)? {
        return Err(Error::InvalidInput("budget must be at most p^4".into()));
    }
    let mut report = CheckReport::new("lemma41b", p, &[("budget", budget)]);
    let module = FrobModule::ex2(p);
    for pattern in product_patterns(p, budget) {
        // factors apply right to left, each repeated by its exponent
        let mut state = ModuleElement::s2(p);
        for &(k, e) in pattern.iter().rev() {
            for _ in 0..e {
                state = module.act_basis(BasisOp::new(0, p.pow(k)?), &state, None)?;
            }
        }
        let table = lemma41b_table(p, &pattern)?;
        let join = |f: fn(&(u32, u64)) -> u64| {
            pattern
                .iter()
                .map(|pair| f(pair).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let inputs = [
            ("t", pattern.len().to_string()),
            ("ks", join(|&(k, _)| k as u64)),
            ("es", join(|&(_, e)| e)),
        ];
        let verdict = if state == table {
            Verdict::Match
        } else {
            Verdict::Fail
        };
        report.push(CaseRecord::new(
            &inputs,
            state.to_string(),
            table.to_string(),
            verdict,
        ));
    }
    Ok(report)
}

/// Brute-force dim F_i s2 against the closed dimension formula over a
/// range of filtration indices.
pub fn check_thm42(p: Prime, imin: u64, imax: u64) -> Result<CheckReport> {
    if imin > imax {
        return Err(Error::InvalidInput(
            "empty index range: i-min exceeds i-max".into(),
        ));
    }
    let mut report = CheckReport::new("thm42", p, &[("imin", imin), ("imax", imax)]);
    let module = FrobModule::ex2(p);
    let gens = [ModuleElement::s2(p)];
    let threshold = 2 * p.get() + 1;
    let mut last_disagreement = None;
    let mut any_match = false;
    for i in imin..=imax {
        let dim = filtration_image(&module, &gens, i)?.dim as u64;
        let inputs = [("i", i.to_string())];
        let case = match thm42_formula(i, p) {
            Ok(formula) if formula == dim => {
                any_match = true;
                CaseRecord::new(&inputs, dim.to_string(), formula.to_string(), Verdict::Match)
            }
            Ok(formula) => {
                last_disagreement = Some(i);
                let verdict = if i < threshold {
                    Verdict::OutOfRange
                } else {
                    Verdict::Fail
                };
                CaseRecord::new(&inputs, dim.to_string(), formula.to_string(), verdict)
                    .with_note(format!(
                        "below the proof's validity threshold 2p+1 = {threshold}"
                    ))
            }
            Err(Error::FormulaUndefined { .. }) => {
                last_disagreement = Some(i);
                CaseRecord::new(&inputs, dim.to_string(), "undefined".into(), Verdict::OutOfRange)
                    .with_note("the formula needs p^(e-1) with e >= 1, so i >= p".into())
            }
            Err(other) => return Err(other),
        };
        report.push(case);
    }
    let first_agreement = match last_disagreement {
        None if any_match => Some(imin),
        None => None,
        Some(i) if i < imax => Some(i + 1),
        Some(_) => None,
    };
    match first_agreement {
        Some(i0) => report.note(format!("first persistent agreement at i = {i0}")),
        None => report.note("no persistent agreement within the range".into()),
    }
    Ok(report)
}

/// Dimension growth at prime-power indices on the steep example, against
/// the printed lower bound and the strict ratio increase it implies.
pub fn check_thm32(p: Prime, emax: u32) -> Result<CheckReport> {
    if emax < 1 {
        return Err(Error::InvalidInput("emax must be at least 1".into()));
    }
    let mut report = CheckReport::new("thm32", p, &[("emax", emax as u64)]);
    let module = FrobModule::ex1(p);
    let gens = [ModuleElement::s1(p), ModuleElement::s2(p)];
    let mut previous: Option<(u64, u64)> = None;
    for e in 1..=emax {
        let i = p.pow(e)?;
        let dim = filtration_image(&module, &gens, i)?.dim as u64;
        let bound = thm32_bound(e, p)?;
        report.push(CaseRecord::new(
            &[
                ("claim", "dim >= bound".into()),
                ("e", e.to_string()),
                ("i", i.to_string()),
            ],
            dim.to_string(),
            bound.to_string(),
            if dim >= bound {
                Verdict::Match
            } else {
                Verdict::Fail
            },
        ));
        if let Some((prev_dim, prev_i)) = previous {
            let increased = cmp_frac(prev_dim as u128, prev_i as u128, dim as u128, i as u128)
                == Ordering::Less;
            // A non-increase is not an internal inconsistency: both dims are
            // the row-reduction oracle's own output and the proved statement
            // is only the lower bound above. Small e sit below the regime
            // where the ratio climbs, so record them as out of range.
            let case = CaseRecord::new(
                &[("claim", "ratio increases".into()), ("e", e.to_string())],
                format!("{prev_dim}/{prev_i} -> {dim}/{i}"),
                "strictly increasing".into(),
                if increased {
                    Verdict::Match
                } else {
                    Verdict::OutOfRange
                },
            );
            report.push(if increased {
                case
            } else {
                case.with_note(
                    "ratio did not increase; with both generators the span at tiny index \
                     is dominated by plain monomial translates, which flattens the ratio \
                     until the twisted images take over"
                        .into(),
                )
            });
        }
        previous = Some((dim, i));
    }
    Ok(report)
}

/// The three displayed index subsequences, their targets, and the period
/// extremes that witness the limit gap.
struct Subsequence {
    label: &'static str,
    index: fn(Prime, u32) -> Result<u128>,
    /// limit of dim/i along this subsequence, as (numerator, denominator)
    target: fn(Prime) -> (u128, u128),
}

const SUBSEQUENCES: [Subsequence; 3] = [
    Subsequence {
        label: "p^e",
        index: |p, e| p.pow_u128(e),
        target: |p| (3 * p.get() as u128 - 1, p.get() as u128),
    },
    Subsequence {
        label: "p^(e+1)-p^e",
        index: |p, e| Ok(p.pow_u128(e + 1)? - p.pow_u128(e)?),
        target: |p| {
            let q = p.get() as u128 * (p.get() as u128 - 1);
            (3 * q - 1, q)
        },
    },
    Subsequence {
        label: "p^(e+1)-p^e+p^(e-1)",
        index: |p, e| Ok(p.pow_u128(e + 1)? - p.pow_u128(e)? + p.pow_u128(e - 1)?),
        target: |p| {
            let q = p.get() as u128 * (p.get() as u128 - 1) + 1;
            (3 * q - 1, q)
        },
    },
];

/// Largest brute-forceable index for the formula cross-check; covers the
/// e in {2, 3} points for p in {2, 3, 5} while keeping runtime flat.
const BRUTE_CAP: u128 = 600;

/// Ratio analysis along the displayed subsequences: exact formula ratios
/// for every e up to emax, limit comparisons at e = emax, liminf/limsup
/// estimates over the final period, and brute-force anchoring of the
/// smallest points.
pub fn limits_report(p: Prime, emax: u32) -> Result<CheckReport> {
    if !(3..=40).contains(&emax) {
        return Err(Error::InvalidInput("emax must lie in 3..=40".into()));
    }
    let mut report = CheckReport::new("limits", p, &[("emax", emax as u64)]);
    report.note(
        "ratio cases are out-of-range until the sequence enters the 1/1000 band around \
         its target; the limit claims themselves are judged at e = emax"
            .into(),
    );
    if p.get() == 2 {
        report.note(
            "at p = 2 the first two subsequences coincide (p^(e+1)-p^e = p^e) and share \
             the target 5/2, so they cannot separate liminf from limsup; the third \
             subsequence does"
                .into(),
        );
    }

    // brute-force anchors: the subsequence points at e = 2 and e = 3,
    // recomputed by row reduction where that is tractable
    let module = FrobModule::ex2(p);
    let gens = [ModuleElement::s2(p)];
    for e in [2u32, 3] {
        for sub in &SUBSEQUENCES {
            let i = (sub.index)(p, e)?;
            let inputs = [
                ("claim", "formula equals brute force".into()),
                ("e", e.to_string()),
                ("i", i.to_string()),
                ("subsequence", sub.label.into()),
            ];
            if i > BRUTE_CAP {
                report.push(
                    CaseRecord::new(
                        &inputs,
                        "skipped".into(),
                        thm42_formula_u128(i, p)?.to_string(),
                        Verdict::OutOfRange,
                    )
                    .with_note(format!("row reduction above index {BRUTE_CAP} is not desk-scale")),
                );
                continue;
            }
            let dim = filtration_image(&module, &gens, i as u64)?.dim as u128;
            let formula = thm42_formula_u128(i, p)?;
            report.push(CaseRecord::new(
                &inputs,
                dim.to_string(),
                formula.to_string(),
                if dim == formula {
                    Verdict::Match
                } else {
                    Verdict::Fail
                },
            ));
        }
    }

    // exact formula ratios for every e, judged against the limit targets
    for e in 1..=emax {
        for sub in &SUBSEQUENCES {
            let i = (sub.index)(p, e)?;
            let value = thm42_formula_u128(i, p)?;
            let (tn, td) = (sub.target)(p);
            let verdict = if within_millith(value, i, tn, td) {
                Verdict::Match
            } else {
                Verdict::OutOfRange
            };
            report.push(
                CaseRecord::new(
                    &[
                        ("claim", "ratio near limit".into()),
                        ("e", e.to_string()),
                        ("i", i.to_string()),
                        ("subsequence", sub.label.into()),
                    ],
                    frac_string(value, i),
                    frac_string(tn, td),
                    verdict,
                )
                .with_note(format!("ratio ~ {}", approx_sig6(value, i))),
            );
        }
    }

    // liminf/limsup estimates: the ratio is piecewise monotone over a
    // period [p^e, p^(e+1)), so its extremes over the final full period
    // sit at the branch endpoints
    let e = emax;
    let boundary = p.pow_u128(e + 1)? - p.pow_u128(e)? + p.pow_u128(e - 1)?;
    let endpoints = [
        p.pow_u128(e)?,
        boundary - 1,
        boundary,
        p.pow_u128(e + 1)? - 1,
    ];
    let mut low: Option<(u128, u128)> = None;
    let mut high: Option<(u128, u128)> = None;
    for i in endpoints {
        let value = thm42_formula_u128(i, p)?;
        let replace_low = low
            .map(|(n, d)| cmp_frac(value, i, n, d) == Ordering::Less)
            .unwrap_or(true);
        if replace_low {
            low = Some((value, i));
        }
        let replace_high = high
            .map(|(n, d)| cmp_frac(value, i, n, d) == Ordering::Greater)
            .unwrap_or(true);
        if replace_high {
            high = Some((value, i));
        }
    }
    let (low, high) = (low.expect("nonempty"), high.expect("nonempty"));
    let liminf_target = (3 * p.get() as u128 - 1, p.get() as u128);
    let limsup_q = p.get() as u128 * (p.get() as u128 - 1) + 1;
    let limsup_target = (3 * limsup_q - 1, limsup_q);
    for (claim, (n, d), (tn, td)) in [
        ("liminf estimate", low, liminf_target),
        ("limsup estimate", high, limsup_target),
    ] {
        let verdict = if within_millith(n, d, tn, td) {
            Verdict::Match
        } else {
            Verdict::OutOfRange
        };
        report.push(
            CaseRecord::new(
                &[("claim", claim.into()), ("e", e.to_string())],
                frac_string(n, d),
                frac_string(tn, td),
                verdict,
            )
            .with_note(format!("ratio ~ {}", approx_sig6(n, d))),
        );
    }
    let gap = cmp_frac(low.0, low.1, high.0, high.1) == Ordering::Less;
    report.push(CaseRecord::new(
        &[("claim", "limit does not exist".into()), ("e", e.to_string())],
        format!(
            "period extremes differ: {} < {}",
            frac_string(low.0, low.1),
            frac_string(high.0, high.1)
        ),
        "does not exist".into(),
        if gap { Verdict::Match } else { Verdict::Fail },
    ));
    Ok(report)
}

/// Default index range for the dimension-formula sweep.
pub fn default_thm42_range(p: Prime) -> (u64, u64) {
    if p.get() == 2 {
        (1, 128)
    } else {
        (1, 100)
    }
}

/// Default exponent cap for the prime-power growth check: the largest e
/// with p^e at most 128, floored at 1.
pub fn default_thm32_emax(p: Prime) -> u32 {
    let mut e = 0u32;
    let mut power = p.get();
    while power <= 128 {
        e += 1;
        power *= p.get();
    }
    e.max(1)
}

pub const DEFAULT_LEMMA31_KMAX: u32 = 5;
pub const DEFAULT_LEMMA41A_KMAX: u32 = 6;
pub const DEFAULT_LIMITS_EMAX: u32 = 20;

/// Every check at its default parameters, in a fixed order.
pub fn run_all(p: Prime) -> Result<Vec<CheckReport>> {
    let (imin, imax) = default_thm42_range(p);
    Ok(vec![
        check_lemma31(p, DEFAULT_LEMMA31_KMAX)?,
        check_lemma41a(p, DEFAULT_LEMMA41A_KMAX)?,
        check_lemma41b(p, p.pow(4)?)?,
        check_thm42(p, imin, imax)?,
        check_thm32(p, default_thm32_emax(p))?,
        limits_report(p, DEFAULT_LIMITS_EMAX)?,
    ])
}
