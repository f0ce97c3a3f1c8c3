//! Canonical endomorphisms of the reduced power monoid and the checks built
//! on them: min/max transport, the linear system that pins the image of
//! `{0,1}`, and the fixed-set suite for automorphisms fixing `{0,1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::monoid::{candidates_with_bounds, is_atom, ZeroSet};
use crate::report::{Check, Report};
use crate::sample;
use crate::setcore::{interval, kfold, sumset, FinSet};

/// Min/max transport parameters: `{0,1}` maps to a set with bounds `(-a, b)`
/// and `{-1,0}` to one with bounds `(-c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AffineMinMaxParams {
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl AffineMinMaxParams {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Result<AffineMinMaxParams> {
        if a + b == 0 || c + d == 0 {
            return Err(Error::InvalidImagePair(format!(
                "(a,b,c,d) = ({a},{b},{c},{d}) needs a+b > 0 and c+d > 0"
            )));
        }
        Ok(AffineMinMaxParams { a, b, c, d })
    }

    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn b(&self) -> u64 {
        self.b
    }
    pub fn c(&self) -> u64 {
        self.c
    }
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn as_tuple(&self) -> (u64, u64, u64, u64) {
        (self.a, self.b, self.c, self.d)
    }
}

/// An injective finite map of zero-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMap {
    map: BTreeMap<ZeroSet, ZeroSet>,
}

impl TableMap {
    pub fn new<I: IntoIterator<Item = (ZeroSet, ZeroSet)>>(pairs: I) -> Result<TableMap> {
        let mut map = BTreeMap::new();
        let mut images = BTreeSet::new();
        for (k, v) in pairs {
            if let Some(old) = map.insert(k.clone(), v.clone()) {
                if old != v {
                    return Err(Error::InvalidWindowMap(format!("{k} mapped twice")));
                }
                continue;
            }
            if !images.insert(v.clone()) {
                return Err(Error::NotInjective(v.to_string()));
            }
        }
        Ok(TableMap { map })
    }

    pub fn get(&self, x: &ZeroSet) -> Option<&ZeroSet> {
        self.map.get(x)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ZeroSet, &ZeroSet)> {
        self.map.iter()
    }
}

/// A named endomorphism of the reduced monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomorphismSpec {
    Identity,
    /// `X ↦ -X`.
    Negation,
    /// `X ↦ max X - X`. Additive everywhere, bijective only on sets anchored at 0.
    Sigma0,
    /// Negation after the inner map.
    Reversal(Box<AutomorphismSpec>),
    Table(TableMap),
}

impl AutomorphismSpec {
    pub fn reversal(inner: AutomorphismSpec) -> AutomorphismSpec {
        AutomorphismSpec::Reversal(Box::new(inner))
    }

    pub fn apply(&self, x: &ZeroSet) -> Result<ZeroSet> {
        apply(self, x)
    }
}

impl fmt::Display for AutomorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomorphismSpec::Identity => f.write_str("identity"),
            AutomorphismSpec::Negation => f.write_str("negation"),
            AutomorphismSpec::Sigma0 => f.write_str("sigma0"),
            AutomorphismSpec::Reversal(inner) => write!(f, "reversal({inner})"),
            AutomorphismSpec::Table(t) => write!(f, "table[{}]", t.len()),
        }
    }
}

/// Parses `identity`, `negation`, `sigma0` and `reversal(<spec>)`.
impl FromStr for AutomorphismSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<AutomorphismSpec> {
        let s = s.trim();
        match s {
            "identity" | "id" => return Ok(AutomorphismSpec::Identity),
            "negation" | "neg" => return Ok(AutomorphismSpec::Negation),
            "sigma0" => return Ok(AutomorphismSpec::Sigma0),
            _ => {}
        }
        if let Some(inner) = s
            .strip_prefix("reversal(")
            .and_then(|r| r.strip_suffix(')'))
        {
            return Ok(AutomorphismSpec::reversal(inner.parse()?));
        }
        Err(Error::Parse(s.to_string()))
    }
}

pub fn apply(auto: &AutomorphismSpec, x: &ZeroSet) -> Result<ZeroSet> {
    match auto {
        AutomorphismSpec::Identity => Ok(x.clone()),
        AutomorphismSpec::Negation => ZeroSet::new(x.reflect(0)?),
        AutomorphismSpec::Sigma0 => ZeroSet::new(x.reflect(x.max_elem())?),
        AutomorphismSpec::Reversal(inner) => {
            let y = apply(inner, x)?;
            ZeroSet::new(y.reflect(0)?)
        }
        AutomorphismSpec::Table(t) => t
            .get(x)
            .cloned()
            .ok_or_else(|| Error::ImageUndefined(x.to_string())),
    }
}

/// Reads `(a,b,c,d)` off the images of `{0,1}` and `{-1,0}`.
pub fn params_from_images(img01: &ZeroSet, img_neg10: &ZeroSet) -> Result<AffineMinMaxParams> {
    if img01.is_identity() || img_neg10.is_identity() {
        return Err(Error::InvalidImagePair(format!(
            "({img01}, {img_neg10}): an image equals {{0}}"
        )));
    }
    AffineMinMaxParams::new(
        img01.x_minus(),
        img01.x_plus(),
        img_neg10.x_minus(),
        img_neg10.x_plus(),
    )
}

/// `(min, max) = (-c·x- - a·x+, d·x- + b·x+)`.
pub fn predict_bounds(p: &AffineMinMaxParams, x_minus: u64, x_plus: u64) -> Result<(i64, i64)> {
    let (a, b, c, d) = (p.a as i128, p.b as i128, p.c as i128, p.d as i128);
    let (xm, xp) = (x_minus as i128, x_plus as i128);
    let lo = -c * xm - a * xp;
    let hi = d * xm + b * xp;
    let lo = i64::try_from(lo).map_err(|_| Error::Overflow("predict_bounds"))?;
    let hi = i64::try_from(hi).map_err(|_| Error::Overflow("predict_bounds"))?;
    Ok((lo, hi))
}

/// Evaluates both sides of
/// `X + k[[-1,0]] + k[[0,1]] = (k + x-)[[-1,0]] + (k + x+)[[0,1]]`.
pub fn check_lemma21_identity(x: &ZeroSet, k: u64) -> Result<bool> {
    let (xm, xp) = (x.x_minus(), x.x_plus());
    let need = xm.max(xp);
    if k < need {
        return Err(Error::KTooSmall { k, need });
    }
    let down = interval(-1, 0)?;
    let up = interval(0, 1)?;
    let lhs = sumset(&sumset(x, &kfold(&down, k)?)?, &kfold(&up, k)?)?;
    let rhs = sumset(&kfold(&down, k + xm)?, &kfold(&up, k + xp)?)?;
    Ok(lhs == rhs)
}

/// One nonnegative solution of `c·x- + a·x+ = 0`, `d·x- + b·x+ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Lemma22Solution {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub x_minus: u64,
    pub x_plus: u64,
}

/// Every tuple in `[0, bound]^6` with `a+b`, `c+d`, `x- + x+` positive that
/// solves the system.
pub fn solve_lemma22_system(bound: u64) -> Vec<Lemma22Solution> {
    let mut out = Vec::new();
    for x_minus in 0..=bound {
        for x_plus in 0..=bound {
            if x_minus + x_plus == 0 {
                continue;
            }
            for a in 0..=bound {
                for c in 0..=bound {
                    if c * x_minus + a * x_plus != 0 {
                        continue;
                    }
                    for b in 0..=bound {
                        if a + b == 0 {
                            continue;
                        }
                        for d in 0..=bound {
                            if c + d == 0 || d * x_minus + b * x_plus != 1 {
                                continue;
                            }
                            out.push(Lemma22Solution {
                                a,
                                b,
                                c,
                                d,
                                x_minus,
                                x_plus,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn projection(solutions: &[Lemma22Solution]) -> BTreeSet<(u64, u64)> {
    solutions.iter().map(|s| (s.x_minus, s.x_plus)).collect()
}

/// True iff `f(X + Y) = f(X) + f(Y)` on every pair.
pub fn verify_homomorphism(auto: &AutomorphismSpec, pairs: &[(ZeroSet, ZeroSet)]) -> Result<bool> {
    for (x, y) in pairs {
        let lhs = apply(auto, &x.add(y)?)?;
        let rhs = apply(auto, x)?.add(&apply(auto, y)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Proof identity and closed-form bounds on `samples` random zero-sets in
/// `[[-20, 20]]`, each with the least admissible `k`.
pub fn lemma21_suite(seed: u64, samples: usize) -> Result<Report> {
    let mut rng = sample::rng(seed);
    let corpus: Vec<ZeroSet> = (0..samples)
        .map(|_| sample::zero_set(&mut rng, -20, 20))
        .collect();
    let mut report = Report::new("lemma21");

    let mut failures = Vec::new();
    for x in &corpus {
        let k = x.x_minus().max(x.x_plus());
        if !check_lemma21_identity(x, k)? {
            failures.push(json!({"set": x.to_string(), "k": k}));
        }
    }
    report.push(Check::new(
        "proof-identity",
        failures.is_empty(),
        json!({"samples": corpus.len(), "failures": failures}),
    ));

    let rejected = matches!(
        check_lemma21_identity(&"{-3,0,1}".parse()?, 2),
        Err(Error::KTooSmall { .. })
    );
    report.push(Check::new(
        "k-precondition",
        rejected,
        json!({"set": "{-3,0,1}", "k": 2}),
    ));

    let unit: ZeroSet = "{0,1}".parse()?;
    let neg_unit: ZeroSet = "{-1,0}".parse()?;
    for (name, auto) in [
        ("bounds-identity", AutomorphismSpec::Identity),
        ("bounds-negation", AutomorphismSpec::Negation),
    ] {
        let params = params_from_images(&apply(&auto, &unit)?, &apply(&auto, &neg_unit)?)?;
        let mut failures = Vec::new();
        for x in &corpus {
            let predicted = predict_bounds(&params, x.x_minus(), x.x_plus())?;
            let actual = apply(&auto, x)?.bounds();
            if predicted != actual {
                failures
                    .push(json!({"set": x.to_string(), "predicted": predicted, "actual": actual}));
            }
        }
        report.push(Check::new(
            name,
            failures.is_empty(),
            json!({"params": params.as_tuple(), "samples": corpus.len(), "failures": failures}),
        ));
    }
    Ok(report)
}

pub fn lemma22_suite(bound: u64) -> Report {
    let solutions = solve_lemma22_system(bound);
    let proj = projection(&solutions);
    let expected: BTreeSet<(u64, u64)> = [(0, 1), (1, 0)].into_iter().collect();
    let mut report = Report::new("lemma22");
    report.push(Check::new(
        "projection",
        proj == expected,
        json!({"bound": bound, "solutions": solutions.len(), "projection": proj}),
    ));
    let left_branch = solutions
        .iter()
        .filter(|s| s.x_minus == 1)
        .all(|s| s.d == 1 && s.c == 0 && s.x_plus == 0);
    report.push(Check::new(
        "branch-x_minus",
        left_branch,
        json!("x- = 1 forces d = 1, c = 0, x+ = 0"),
    ));
    let right_branch = solutions
        .iter()
        .filter(|s| s.x_plus == 1)
        .all(|s| s.b == 1 && s.a == 0 && s.x_minus == 0);
    report.push(Check::new(
        "branch-x_plus",
        right_branch,
        json!("x+ = 1 forces b = 1, a = 0, x- = 0"),
    ));
    report
}

/// Finite checks behind the fixed-set properties of an automorphism fixing
/// `{0,1}`. Failures are recorded in the report, not returned as errors.
pub fn lemma23_suite(seed: u64, samples: usize) -> Result<Report> {
    let mut report = Report::new("lemma23");

    let cands = candidates_with_bounds(-1, 2)?;
    let atom = is_atom(&"{-1,0,2}".parse()?)?;
    let non_atom = is_atom(&"{-1,0,1,2}".parse()?)?;
    let expected: Vec<ZeroSet> = vec!["{-1,0,2}".parse()?, "{-1,0,1,2}".parse()?];
    report.push(Check::new(
        "iii-candidates",
        cands == expected && atom && !non_atom,
        json!({
            "candidates": cands.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "atom({-1,0,2})": atom,
            "atom({-1,0,1,2})": non_atom,
        }),
    ));

    let down = interval(-1, 0)?;
    let up = interval(0, 1)?;
    let mut gen_failures = Vec::new();
    for k in 0..=8u64 {
        for l in 0..=8u64 {
            let lhs = interval(-(k as i64), l as i64)?;
            let rhs = sumset(&kfold(&down, k)?, &kfold(&up, l)?)?;
            if lhs != rhs {
                gen_failures.push(json!([k, l]));
            }
        }
    }
    report.push(Check::new(
        "iv-generation",
        gen_failures.is_empty(),
        json!({"range": [0, 8], "failures": gen_failures}),
    ));

    let a: FinSet = "{-1,0,2}".parse()?;
    let left = sumset(&a, &"{0,1,3}".parse()?)?;
    let right = sumset(&a, &"{0,2,3}".parse()?)?;
    let target = interval(-1, 5)?;
    let sigma_image = apply(&AutomorphismSpec::Sigma0, &"{0,2,3}".parse()?)?;
    let pass = left.to_string() == "{-1,0,1,2,3,5}"
        && left != target
        && right == target
        && sigma_image.to_string() == "{0,1,3}";
    report.push(Check::new(
        "v-contradiction",
        pass,
        json!({
            "{-1,0,2}+{0,1,3}": left.to_string(),
            "{-1,0,2}+{0,2,3}": right.to_string(),
            "sigma0({0,2,3})": sigma_image.to_string(),
        }),
    ));

    let mut rng = sample::rng(seed);
    let corpus: Vec<ZeroSet> = (0..samples)
        .map(|_| sample::nat_zero_set(&mut rng, 12))
        .collect();
    let table = TableMap::new(
        corpus
            .iter()
            .map(|x| apply(&AutomorphismSpec::Negation, x).map(|n| (n.clone(), n)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let conj = AutomorphismSpec::reversal(AutomorphismSpec::Table(table));
    let mut rev_failures = Vec::new();
    for x in &corpus {
        let y = apply(&conj, &apply(&AutomorphismSpec::Negation, x)?)?;
        if &y != x {
            rev_failures.push(x.to_string());
        }
    }
    report.push(Check::new(
        "vi-reversal",
        rev_failures.is_empty(),
        json!({"samples": corpus.len(), "failures": rev_failures}),
    ));

    Ok(report)
}
