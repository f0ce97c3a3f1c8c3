//! Single induction steps of the rigidity argument on concrete pairs.
//!
//! Given `A` and a candidate image `B` with the same minimum and maximum, the
//! flattened run endpoints of the two sets are compared. The first differing
//! index `v` decides the construction: an even index is handled by adding
//! `[[0, d]]` (case I), an odd one by adding `D = {0} ∪ C` for a long interval
//! `C` (case II). In both cases a witness point lies in `A + helper` and not in
//! `B + helper`, which is what contradicts `A + helper = B + helper`.

use rand::Rng as _;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boxing::{bdim, runs};
use crate::error::{Error, Result};
use crate::monoid::ZeroSet;
use crate::report::Check;
use crate::sample::Rng;
use crate::setcore::{interval, sumset, FinSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    CaseI,
    CaseII,
    NoDivergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub v: usize,
    pub case: CaseTag,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceWitness {
    pub case_tag: CaseTag,
    pub v: usize,
    pub helper_set: FinSet,
    pub witness_point: i64,
    pub lhs: FinSet,
    pub rhs: FinSet,
    /// Case-specific quantities (`d`, or `c`, `c0`, `C`, `h`).
    pub params: Value,
    pub checks: Vec<Check>,
}

impl DivergenceWitness {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check_pair(a: &ZeroSet, b: &ZeroSet) -> Result<()> {
    if a.bounds() != b.bounds() {
        return Err(Error::InconsistentPair(format!(
            "{a} has bounds {:?} but {b} has {:?}",
            a.bounds(),
            b.bounds()
        )));
    }
    let (lo, hi) = a.bounds();
    if !(lo < 0 && 0 < hi) {
        return Err(Error::InconsistentPair(format!(
            "need min < 0 < max, got ({lo},{hi})"
        )));
    }
    Ok(())
}

/// Least index where the flattened run endpoints of `a` and `b` differ, or
/// `None` when the sets are equal.
pub fn first_divergence(a: &ZeroSet, b: &ZeroSet) -> Result<Option<Divergence>> {
    check_pair(a, b)?;
    if a == b {
        return Ok(None);
    }
    let ea = runs(a).endpoints();
    let eb = runs(b).endpoints();
    let v =
        ea.iter().zip(&eb).position(|(x, y)| x != y).expect(
            "sets with equal bounds and different elements diverge within the shorter profile",
        );
    let case = if v % 2 == 0 {
        CaseTag::CaseI
    } else {
        CaseTag::CaseII
    };
    Ok(Some(Divergence { v, case }))
}

pub fn induction_measure(a: &ZeroSet, b: &ZeroSet) -> usize {
    bdim(a) + bdim(b)
}

/// Case I: divergence at an even index `2u` with `a_{2u} < b_{2u}`.
pub fn case1_witness(a: &ZeroSet, b: &ZeroSet) -> Result<DivergenceWitness> {
    let div = first_divergence(a, b)?
        .ok_or_else(|| Error::Divergence("A = B, nothing to witness".into()))?;
    if div.case != CaseTag::CaseI {
        return Err(Error::Divergence(format!(
            "first divergence at odd index {}; use case II",
            div.v
        )));
    }
    let ea = runs(a).endpoints();
    let eb = runs(b).endpoints();
    let v = div.v;
    let r = ea.len() / 2 - 1;
    if ea[v] > eb[v] {
        return Err(Error::Divergence(format!(
            "a_{v} = {} > b_{v} = {}; swap A and B",
            ea[v], eb[v]
        )));
    }
    let d = ea[v] - ea[v - 1] - 1;
    let helper = interval(0, d)?;
    let lhs = sumset(a, &helper)?;
    let rhs = sumset(b, &helper)?;
    let point = ea[v];

    // Union of the widened runs, computed run by run.
    let widened = union_of(runs(a).runs.iter().map(|&(lo, hi)| (lo, hi + d)))?;
    let measure = induction_measure(a, b);
    let (bl, br) = (bdim(&lhs), bdim(&rhs));

    let checks = vec![
        Check::new(
            "lhs-run-structure",
            lhs == widened,
            json!(widened.to_string()),
        ),
        Check::new(
            "witness-in-lhs",
            lhs.contains(point),
            json!({"point": point}),
        ),
        Check::new(
            "witness-not-in-rhs",
            !rhs.contains(point),
            json!({"point": point, "b_prev_plus_d": eb[v - 1] + d, "b_v": eb[v]}),
        ),
        Check::new("bdim-drop", bl <= r, json!({"bdim_lhs": bl, "r": r})),
        Check::new(
            "measure-decrease",
            bl + br < measure,
            json!({"bdim_lhs": bl, "bdim_rhs": br, "measure": measure}),
        ),
    ];
    Ok(DivergenceWitness {
        case_tag: CaseTag::CaseI,
        v,
        helper_set: helper,
        witness_point: point,
        lhs,
        rhs,
        params: json!({"u": v / 2, "d": d}),
        checks,
    })
}

/// `c0 = -a_0 + a_{2u+1} + max(a_{2r} - a_1, b_{2s} - b_1)` for a case II pair.
pub fn case2_c0(a: &ZeroSet, b: &ZeroSet) -> Result<i64> {
    let (ea, eb, v) = case2_setup(a, b)?;
    Ok(c0_of(&ea, &eb, v))
}

fn c0_of(ea: &[i64], eb: &[i64], v: usize) -> i64 {
    let (na, nb) = (ea.len(), eb.len());
    -ea[0] + ea[v] + (ea[na - 2] - ea[1]).max(eb[nb - 2] - eb[1])
}

fn case2_setup(a: &ZeroSet, b: &ZeroSet) -> Result<(Vec<i64>, Vec<i64>, usize)> {
    let div = first_divergence(a, b)?
        .ok_or_else(|| Error::Divergence("A = B, nothing to witness".into()))?;
    if div.case != CaseTag::CaseII {
        return Err(Error::Divergence(format!(
            "first divergence at even index {}; use case I",
            div.v
        )));
    }
    let ea = runs(a).endpoints();
    let eb = runs(b).endpoints();
    let v = div.v;
    let u = (v - 1) / 2;
    let r = ea.len() / 2 - 1;
    if u == 0 {
        return Err(Error::Divergence(
            "divergence at the right end of the first run (u = 0) is outside the \
             covered range 1 <= u <= r-1; flagged for manual review"
                .into(),
        ));
    }
    if u + 1 > r {
        return Err(Error::Divergence(format!(
            "divergence at the final run (u = {u}, r = {r}) cannot occur when maxima agree"
        )));
    }
    if ea[v] < eb[v] {
        return Err(Error::Divergence(format!(
            "a_{v} = {} < b_{v} = {}; swap A and B",
            ea[v], eb[v]
        )));
    }
    Ok((ea, eb, v))
}

/// Case II: divergence at an odd index `2u+1`, `1 <= u <= r-1`, with
/// `a_{2u+1} > b_{2u+1}`. `c` defaults to the least admissible value `c0`.
pub fn case2_witness(a: &ZeroSet, b: &ZeroSet, c: Option<i64>) -> Result<DivergenceWitness> {
    let (ea, eb, v) = case2_setup(a, b)?;
    let u = (v - 1) / 2;
    let c0 = c0_of(&ea, &eb, v);
    let c = c.unwrap_or(c0);
    if c < c0 {
        return Err(Error::CBelowMinimum { c, c0 });
    }
    let (amin, amax) = a.bounds();
    let cset = interval(-amin + ea[v] + 1, c)?;
    let dset = cset.union(&FinSet::zero());
    let top = amax
        .checked_add(c)
        .ok_or(Error::Overflow("case II construction"))?;

    let a_c = sumset(a, &cset)?;
    let b_c = sumset(b, &cset)?;
    let collapsed = interval(ea[v] + 1, top)?;

    let lhs = sumset(a, &dset)?;
    let rhs = sumset(b, &dset)?;
    let nb = eb.len();
    let h = eb[nb - 2].min(ea[v] + 1);
    let a_runs = runs(a).runs;
    let b_runs = runs(b).runs;
    let lhs_expected = union_of(
        a_runs[..u]
            .iter()
            .copied()
            .chain(std::iter::once((ea[v - 1], top))),
    )?;
    let rhs_expected = union_of(
        b_runs[..b_runs.len() - 1]
            .iter()
            .copied()
            .chain(std::iter::once((h, top))),
    )?;

    let point = eb[v] + 1;
    let measure = induction_measure(a, b);
    let (bl, br) = (bdim(&lhs), bdim(&rhs));
    let r = ea.len() / 2 - 1;

    let checks = vec![
        Check::new(
            "A+C-interval",
            a_c == collapsed,
            json!({"A+C": a_c.to_string(), "expected": collapsed.to_string()}),
        ),
        Check::new(
            "B+C-interval",
            b_c == collapsed,
            json!({"B+C": b_c.to_string(), "expected": collapsed.to_string()}),
        ),
        Check::new(
            "A+D-run-structure",
            lhs == lhs_expected,
            json!(lhs_expected.to_string()),
        ),
        Check::new(
            "B+D-run-structure",
            rhs == rhs_expected,
            json!(rhs_expected.to_string()),
        ),
        Check::new(
            "bdim-A+D",
            bl == u + 1 && bl <= r,
            json!({"bdim": bl, "u": u, "r": r}),
        ),
        Check::new(
            "witness-in-lhs",
            lhs.contains(point),
            json!({"point": point}),
        ),
        Check::new(
            "witness-not-in-rhs",
            !rhs.contains(point),
            json!({"point": point}),
        ),
        Check::new(
            "measure-decrease",
            bl + br < measure,
            json!({"bdim_lhs": bl, "bdim_rhs": br, "measure": measure}),
        ),
    ];
    Ok(DivergenceWitness {
        case_tag: CaseTag::CaseII,
        v,
        helper_set: dset,
        witness_point: point,
        lhs,
        rhs,
        params: json!({
            "u": u,
            "c": c,
            "c0": c0,
            "C": cset.to_string(),
            "h": h,
            "A+C": a_c.to_string(),
            "B+C": b_c.to_string(),
        }),
        checks,
    })
}

fn union_of<I: IntoIterator<Item = (i64, i64)>>(pieces: I) -> Result<FinSet> {
    let mut acc: Option<FinSet> = None;
    for (lo, hi) in pieces {
        let piece = interval(lo, hi)?;
        acc = Some(match acc {
            Some(s) => s.union(&piece),
            None => piece,
        });
    }
    acc.ok_or(Error::EmptySet)
}

/// Random zero-set with `min < 0 < max` and at least `min_runs` runs.
fn random_straddling(rng: &mut Rng, min_runs: usize) -> ZeroSet {
    loop {
        let lo = rng.random_range(-10..=-1i64);
        let hi = rng.random_range(1..=12i64);
        let density = rng.random_range(0.3..0.85);
        let mut v: Vec<i64> = (lo..=hi).filter(|_| rng.random_bool(density)).collect();
        v.extend([lo, 0, hi]);
        let x = ZeroSet::new(FinSet::new(v).expect("nonempty")).expect("contains 0");
        if bdim(&x) >= min_runs {
            return x;
        }
    }
}

fn random_tail(rng: &mut Rng, from: i64, to: i64) -> Vec<i64> {
    let density = rng.random_range(0.3..0.9);
    let mut v: Vec<i64> = (from..=to).filter(|_| rng.random_bool(density)).collect();
    v.push(to);
    v
}

/// A random pair whose first divergence is at an even index with `a < b`.
pub fn random_case1_instance(rng: &mut Rng) -> (ZeroSet, ZeroSet) {
    loop {
        let a = random_straddling(rng, 2);
        let ea = runs(&a).endpoints();
        let r = ea.len() / 2 - 1;
        let u = rng.random_range(1..=r);
        let hi = a.max_elem();
        let start = ea[2 * u] + 1 + rng.random_range(0..=2);
        if start > hi {
            continue;
        }
        let mut v: Vec<i64> = a.iter().copied().filter(|&x| x <= ea[2 * u - 1]).collect();
        v.extend(random_tail(rng, start, hi));
        if start <= 0 {
            v.push(0);
        }
        let Ok(b) = ZeroSet::new(FinSet::new(v).expect("nonempty")) else {
            continue;
        };
        if let Ok(Some(d)) = first_divergence(&a, &b) {
            if d.v == 2 * u {
                return (a, b);
            }
        }
    }
}

/// A random pair whose first divergence is at an odd index `2u+1`,
/// `1 <= u <= r-1`, with `a > b` there.
pub fn random_case2_instance(rng: &mut Rng) -> (ZeroSet, ZeroSet) {
    loop {
        let a = random_straddling(rng, 3);
        let ea = runs(&a).endpoints();
        let r = ea.len() / 2 - 1;
        let u = rng.random_range(1..=r - 1);
        let (run_lo, run_hi) = (ea[2 * u], ea[2 * u + 1]);
        if run_lo == run_hi {
            continue;
        }
        let cut = rng.random_range(run_lo..run_hi);
        let hi = a.max_elem();
        let mut v: Vec<i64> = a.iter().copied().filter(|&x| x <= cut).collect();
        v.extend(random_tail(rng, cut + 2, hi));
        if cut + 2 <= 0 {
            v.push(0);
        }
        let Ok(b) = ZeroSet::new(FinSet::new(v).expect("nonempty")) else {
            continue;
        };
        if let Ok(Some(d)) = first_divergence(&a, &b) {
            if d.v == 2 * u + 1 {
                return (a, b);
            }
        }
    }
}
