//! Exhaustive search for automorphisms of a finite window of the reduced
//! monoid: the zero-sets inside `[[-m, m]]`, with addition defined only where
//! the sum stays inside the window.
//!
//! A window map is a bijection `f` of the elements with
//! `f(X) + f(Y) = f(X + Y)` whenever `X + Y` is in the window (so the image
//! sum must be in the window too). Such maps preserve, for every element,
//! the number of partners it can be added to and the number of ordered pairs
//! summing to it; the search only pairs elements with equal counts.
//!
//! Elements whose only partner is `{0}` and which are not a nontrivial sum
//! take part in no constraint at all. They are permuted freely, so the
//! survivor count is `core maps × (free elements)!`.

use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::autos::{AutomorphismSpec, TableMap};
use crate::error::{Error, Result};
use crate::monoid::ZeroSet;
use crate::setcore::FinSet;

pub const MAX_WINDOW: u32 = 6;

/// Largest survivor list [`find_window_automorphisms`] will materialize.
pub const MAX_EXPANDED_MAPS: u64 = 2_000_000;

/// Largest candidate count the unpruned oracle will scan.
pub const MAX_ORACLE_CANDIDATES: u64 = 50_000_000;

const NONE: u16 = u16::MAX;

#[derive(Debug, Clone)]
pub struct WindowUniverse {
    pub m: u32,
    /// Zero-sets in `[[-m, m]]`, ordered by size, then lexicographically.
    pub elements: Vec<ZeroSet>,
    masks: Vec<u32>,
    index_of_mask: HashMap<u32, u16>,
    /// Row-major `n × n` partial Cayley table; [`NONE`] marks sums leaving the window.
    sums: Vec<u16>,
}

impl WindowUniverse {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn partial_sum(&self, i: usize, j: usize) -> Option<usize> {
        let s = self.sums[i * self.len() + j];
        (s != NONE).then_some(s as usize)
    }

    pub fn index_of(&self, x: &FinSet) -> Option<usize> {
        let m = self.m as i64;
        let mut mask = 0u32;
        for &v in x {
            if v < -m || v > m {
                return None;
            }
            mask |= 1 << (v + m);
        }
        self.index_of_mask.get(&mask).map(|&i| i as usize)
    }

    /// Number of in-window partners and number of in-window ordered pairs
    /// summing to each element.
    pub fn signatures(&self) -> Vec<(u32, u32)> {
        let n = self.len();
        let mut sig = vec![(0u32, 0u32); n];
        for i in 0..n {
            for j in 0..n {
                if let Some(s) = self.partial_sum(i, j) {
                    sig[i].0 += 1;
                    sig[s].1 += 1;
                }
            }
        }
        sig
    }

    fn negation_images(&self) -> Vec<u16> {
        let w = 2 * self.m;
        self.masks
            .iter()
            .map(|&mask| {
                let rev = mask.reverse_bits() >> (31 - w);
                self.index_of_mask[&rev]
            })
            .collect()
    }
}

pub fn build_window(m: u32) -> Result<WindowUniverse> {
    if !(1..=MAX_WINDOW).contains(&m) {
        return Err(Error::WindowOutOfRange(m));
    }
    let width = 2 * m + 1;
    let zero_bit = 1u32 << m;
    let mut masks: Vec<u32> = (0u32..(1 << width)).filter(|x| x & zero_bit != 0).collect();
    let to_set = |mask: u32| -> FinSet {
        FinSet::new(
            (0..width)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| b as i64 - m as i64),
        )
        .expect("contains 0")
    };
    masks.sort_by_cached_key(|&mask| (mask.count_ones(), to_set(mask)));
    let elements: Vec<ZeroSet> = masks
        .iter()
        .map(|&mask| ZeroSet::new(to_set(mask)).expect("contains 0"))
        .collect();
    let index_of_mask: HashMap<u32, u16> = masks
        .iter()
        .enumerate()
        .map(|(i, &mask)| (mask, i as u16))
        .collect();

    let n = masks.len();
    // Bit k of a shifted-or product stands for value k - 2m; the window is
    // bits m..=3m.
    let window = ((1u64 << width) - 1) << m;
    let sums: Vec<u16> = (0..n * n)
        .into_par_iter()
        .map(|ij| {
            let (x, y) = (masks[ij / n] as u64, masks[ij % n] as u64);
            let mut acc = 0u64;
            let mut rest = x;
            while rest != 0 {
                let b = rest.trailing_zeros();
                acc |= y << b;
                rest &= rest - 1;
            }
            if acc & !window != 0 {
                NONE
            } else {
                index_of_mask[&((acc >> m) as u32)]
            }
        })
        .collect();

    Ok(WindowUniverse {
        m,
        elements,
        masks,
        index_of_mask,
        sums,
    })
}

/// A bijection of the window, as the image index of each element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindowMap {
    pub images: Vec<u16>,
}

impl WindowMap {
    pub fn identity(n: usize) -> WindowMap {
        WindowMap {
            images: (0..n as u16).collect(),
        }
    }

    pub fn negation(u: &WindowUniverse) -> WindowMap {
        WindowMap {
            images: u.negation_images(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &j)| i == j as usize)
    }

    /// Pairs `(X, f(X))` with `f(X) != X`.
    pub fn moved(&self, u: &WindowUniverse) -> Vec<(ZeroSet, ZeroSet)> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i != j as usize)
            .map(|(i, &j)| (u.elements[i].clone(), u.elements[j as usize].clone()))
            .collect()
    }

    pub fn to_table(&self, u: &WindowUniverse) -> AutomorphismSpec {
        let pairs = self
            .images
            .iter()
            .enumerate()
            .map(|(i, &j)| (u.elements[i].clone(), u.elements[j as usize].clone()));
        AutomorphismSpec::Table(TableMap::new(pairs).expect("window maps are bijections"))
    }
}

fn images_hold(u: &WindowUniverse, f: &[u16]) -> bool {
    let n = u.len();
    (0..n).all(|i| {
        (0..n).all(|j| match u.partial_sum(i, j) {
            None => true,
            Some(s) => u.sums[f[i] as usize * n + f[j] as usize] == f[s],
        })
    })
}

/// Full check of the partial-homomorphism condition for a table that must be
/// total and bijective on the window.
pub fn verify_window_map(u: &WindowUniverse, table: &AutomorphismSpec) -> Result<bool> {
    let AutomorphismSpec::Table(t) = table else {
        return Err(Error::InvalidWindowMap(format!("{table} is not a table")));
    };
    let n = u.len();
    let mut images = vec![NONE; n];
    let mut hit = vec![false; n];
    for (i, x) in u.elements.iter().enumerate() {
        let y = t
            .get(x)
            .ok_or_else(|| Error::InvalidWindowMap(format!("no image for {x}")))?;
        let j = u.index_of(y).ok_or_else(|| {
            Error::InvalidWindowMap(format!("image {y} of {x} leaves the window"))
        })?;
        if hit[j] {
            return Err(Error::InvalidWindowMap(format!("{y} is hit twice")));
        }
        hit[j] = true;
        images[i] = j as u16;
    }
    Ok(images_hold(u, &images))
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSummary {
    pub m: u32,
    /// Total number of surviving window maps.
    #[serde(serialize_with = "serialize_biguint")]
    pub survivors: BigUint,
    /// Survivors restricted to the constrained elements (free elements fixed).
    pub core_maps: usize,
    pub free_elements: usize,
}

fn serialize_biguint<S: serde::Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let n: serde_json::Number = v
        .to_str_radix(10)
        .parse()
        .map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

/// Result of the pruned search, before expanding free permutations.
#[derive(Debug, Clone)]
pub struct WindowSearch {
    pub m: u32,
    /// Survivors with every free element fixed, sorted.
    pub core_maps: Vec<WindowMap>,
    /// Indices of unconstrained elements.
    pub free: Vec<usize>,
}

impl WindowSearch {
    pub fn survivors(&self) -> BigUint {
        let mut fact = BigUint::from(1u32);
        for k in 2..=self.free.len() as u32 {
            fact *= k;
        }
        fact * self.core_maps.len()
    }

    pub fn summary(&self) -> SearchSummary {
        SearchSummary {
            m: self.m,
            survivors: self.survivors(),
            core_maps: self.core_maps.len(),
            free_elements: self.free.len(),
        }
    }

    /// Every survivor, sorted by image vector.
    pub fn expand(&self) -> Result<Vec<WindowMap>> {
        let total = self.survivors();
        if total > BigUint::from(MAX_EXPANDED_MAPS) {
            return Err(Error::TooLarge {
                size: u128::try_from(&total).unwrap_or(u128::MAX),
                limit: MAX_EXPANDED_MAPS as u128,
            });
        }
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..self.free.len()).collect();
        loop {
            for core in &self.core_maps {
                let mut images = core.images.clone();
                for (k, &slot) in self.free.iter().enumerate() {
                    images[slot] = self.free[perm[k]] as u16;
                }
                out.push(WindowMap { images });
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out.sort();
        Ok(out)
    }
}

/// Lexicographic successor; false once `v` is the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[j] > v[i])
        .expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

struct Searcher<'a> {
    u: &'a WindowUniverse,
    class: Vec<u32>,
    order: Vec<usize>,
    /// Ordered pairs `(p, q)` with `p + q = s`, per element `s`.
    reps: Vec<Vec<(u16, u16)>>,
}

struct State {
    f: Vec<u16>,
    inv: Vec<u16>,
}

impl Searcher<'_> {
    fn sum(&self, i: usize, j: usize) -> u16 {
        self.u.sums[i * self.u.len() + j]
    }

    /// All constraints among assigned elements that involve `a` hold after
    /// assigning it, and every forced image is still available.
    fn consistent(&self, st: &State, a: usize) -> bool {
        let fa = st.f[a] as usize;
        for &(p, q) in &self.reps[a] {
            let (fp, fq) = (st.f[p as usize], st.f[q as usize]);
            if fp != NONE && fq != NONE && self.sum(fp as usize, fq as usize) as usize != fa {
                return false;
            }
        }
        for b in 0..self.u.len() {
            let fb = st.f[b];
            if fb == NONE {
                continue;
            }
            let s = self.sum(a, b);
            if s == NONE {
                continue;
            }
            let t = self.sum(fa, fb as usize);
            if t == NONE {
                return false;
            }
            let fs = st.f[s as usize];
            if fs != NONE {
                if fs != t {
                    return false;
                }
            } else if st.inv[t as usize] != NONE || self.class[t as usize] != self.class[s as usize]
            {
                return false;
            }
        }
        true
    }

    fn candidates(&self, st: &State, a: usize) -> Vec<u16> {
        for &(p, q) in &self.reps[a] {
            let (fp, fq) = (st.f[p as usize], st.f[q as usize]);
            if fp != NONE && fq != NONE {
                let t = self.sum(fp as usize, fq as usize);
                if t == NONE
                    || st.inv[t as usize] != NONE
                    || self.class[t as usize] != self.class[a]
                {
                    return Vec::new();
                }
                return vec![t];
            }
        }
        self.order
            .iter()
            .filter(|&&c| st.inv[c] == NONE && self.class[c] == self.class[a])
            .map(|&c| c as u16)
            .collect()
    }

    fn dfs(&self, st: &mut State, depth: usize, out: &mut Vec<Vec<u16>>) {
        if depth == self.order.len() {
            out.push(st.f.clone());
            return;
        }
        let a = self.order[depth];
        for c in self.candidates(st, a) {
            st.f[a] = c;
            st.inv[c as usize] = a as u16;
            if self.consistent(st, a) {
                self.dfs(st, depth + 1, out);
            }
            st.f[a] = NONE;
            st.inv[c as usize] = NONE;
        }
    }
}

/// Signature classes of the window, numbered by first occurrence.
fn classes(u: &WindowUniverse) -> Vec<u32> {
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    u.signatures()
        .into_iter()
        .map(|sig| {
            let next = ids.len() as u32;
            *ids.entry(sig).or_insert(next)
        })
        .collect()
}

/// Backtracking search over the constrained elements, in enumeration order
/// (ascending size). The first branching level is explored in parallel.
pub fn search_window(u: &WindowUniverse) -> WindowSearch {
    let n = u.len();
    let sig = u.signatures();
    let class = classes(u);
    let free: Vec<usize> = (0..n).filter(|&i| sig[i] == (1, 2)).collect();
    let order: Vec<usize> = (0..n).filter(|&i| sig[i] != (1, 2)).collect();
    let mut reps = vec![Vec::new(); n];
    for p in 0..n {
        for q in 0..n {
            if let Some(s) = u.partial_sum(p, q) {
                reps[s].push((p as u16, q as u16));
            }
        }
    }
    let searcher = Searcher {
        u,
        class,
        order,
        reps,
    };

    let mut base = State {
        f: vec![NONE; n],
        inv: vec![NONE; n],
    };
    for &i in &free {
        base.f[i] = i as u16;
        base.inv[i] = i as u16;
    }

    // Walk forced levels sequentially, then split on the first real choice.
    let mut results = Vec::new();
    let mut depth = 0;
    loop {
        if depth == searcher.order.len() {
            results.push(base.f.clone());
            break;
        }
        let a = searcher.order[depth];
        let cands = searcher.candidates(&base, a);
        if cands.len() == 1 {
            let c = cands[0];
            base.f[a] = c;
            base.inv[c as usize] = a as u16;
            if !searcher.consistent(&base, a) {
                break;
            }
            depth += 1;
            continue;
        }
        results = cands
            .into_par_iter()
            .flat_map_iter(|c| {
                let mut st = State {
                    f: base.f.clone(),
                    inv: base.inv.clone(),
                };
                st.f[a] = c;
                st.inv[c as usize] = a as u16;
                let mut out = Vec::new();
                if searcher.consistent(&st, a) {
                    searcher.dfs(&mut st, depth + 1, &mut out);
                }
                out.into_iter()
            })
            .collect();
        break;
    }

    let mut core_maps: Vec<WindowMap> = results
        .into_iter()
        .map(|images| WindowMap { images })
        .filter(|w| images_hold(u, &w.images))
        .collect();
    core_maps.sort();
    WindowSearch {
        m: u.m,
        core_maps,
        free,
    }
}

/// All surviving window maps, sorted. Fails with [`Error::TooLarge`] when
/// there are more than [`MAX_EXPANDED_MAPS`]; use [`search_window`] for the
/// count in that case.
pub fn find_window_automorphisms(u: &WindowUniverse) -> Result<Vec<WindowMap>> {
    search_window(u).expand()
}

/// Unpruned reference: every bijection that maps each signature class onto
/// itself, kept iff it passes the full check.
pub fn oracle_window_automorphisms(u: &WindowUniverse) -> Result<Vec<WindowMap>> {
    let n = u.len();
    let class = classes(u);
    let n_classes = class.iter().max().map_or(0, |&c| c as usize + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &c) in class.iter().enumerate() {
        members[c as usize].push(i);
    }
    let mut total = BigUint::from(1u32);
    for g in &members {
        for k in 2..=g.len() as u32 {
            total *= k;
        }
    }
    if total > BigUint::from(MAX_ORACLE_CANDIDATES) {
        return Err(Error::TooLarge {
            size: u128::try_from(&total).unwrap_or(u128::MAX),
            limit: MAX_ORACLE_CANDIDATES as u128,
        });
    }

    let mut perms: Vec<Vec<usize>> = members.iter().map(|g| (0..g.len()).collect()).collect();
    let mut out = Vec::new();
    let mut images = vec![0u16; n];
    'outer: loop {
        for (g, p) in members.iter().zip(&perms) {
            for (k, &slot) in g.iter().enumerate() {
                images[slot] = g[p[k]] as u16;
            }
        }
        if images_hold(u, &images) {
            out.push(WindowMap {
                images: images.clone(),
            });
        }
        // Odometer over the per-class permutations.
        for p in perms.iter_mut() {
            if next_permutation(p) {
                continue 'outer;
            }
            p.sort_unstable();
        }
        break;
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> ZeroSet {
        s.parse().unwrap()
    }

    #[test]
    fn window_sizes() {
        let u = build_window(1).unwrap();
        let names: Vec<String> = u.elements.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["{0}", "{-1,0}", "{0,1}", "{-1,0,1}"]);
        assert_eq!(build_window(2).unwrap().len(), 16);
        assert_eq!(build_window(3).unwrap().len(), 64);
        assert!(build_window(0).is_err());
        assert!(build_window(7).is_err());
    }

    #[test]
    fn partial_table() {
        let u = build_window(1).unwrap();
        let i = u.index_of(&z("{0,1}")).unwrap();
        let j = u.index_of(&z("{-1,0}")).unwrap();
        let s = u.partial_sum(i, j).unwrap();
        assert_eq!(u.elements[s], z("{-1,0,1}"));
        assert_eq!(u.partial_sum(i, i), None);
        // symmetric, and agrees with direct sumsets
        let u = build_window(2).unwrap();
        for i in 0..u.len() {
            for j in 0..u.len() {
                assert_eq!(u.partial_sum(i, j), u.partial_sum(j, i));
                let direct = u.elements[i].add(&u.elements[j]).unwrap();
                assert_eq!(u.partial_sum(i, j), u.index_of(&direct));
            }
        }
    }

    #[test]
    fn m1_has_exactly_identity_and_negation() {
        let u = build_window(1).unwrap();
        let maps = find_window_automorphisms(&u).unwrap();
        assert_eq!(maps.len(), 2);
        assert!(maps[0].is_identity());
        assert_eq!(maps[1], WindowMap::negation(&u));
    }

    #[test]
    fn m1_against_all_bijections() {
        let u = build_window(1).unwrap();
        let mut perm: Vec<usize> = (0..u.len()).collect();
        let mut found = Vec::new();
        loop {
            let images: Vec<u16> = perm.iter().map(|&x| x as u16).collect();
            if images_hold(&u, &images) {
                found.push(WindowMap { images });
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(found, find_window_automorphisms(&u).unwrap());
    }

    #[test]
    fn verify_examples() {
        let u = build_window(2).unwrap();
        let id = WindowMap::identity(u.len()).to_table(&u);
        assert!(verify_window_map(&u, &id).unwrap());
        let neg = WindowMap::negation(&u).to_table(&u);
        assert!(verify_window_map(&u, &neg).unwrap());

        let mut swap = WindowMap::identity(u.len());
        let (a, b) = (
            u.index_of(&z("{0,1}")).unwrap(),
            u.index_of(&z("{0,2}")).unwrap(),
        );
        swap.images.swap(a, b);
        assert!(!verify_window_map(&u, &swap.to_table(&u)).unwrap());

        let partial = AutomorphismSpec::Table(TableMap::new([(z("{0}"), z("{0}"))]).unwrap());
        assert!(verify_window_map(&u, &partial).is_err());
        assert!(verify_window_map(&u, &AutomorphismSpec::Negation).is_err());
    }

    #[test]
    fn survivors_fix_zero_and_verify() {
        for m in 1..=2 {
            let u = build_window(m).unwrap();
            let maps = find_window_automorphisms(&u).unwrap();
            assert!(maps.contains(&WindowMap::identity(u.len())));
            assert!(maps.contains(&WindowMap::negation(&u)));
            for w in &maps {
                assert_eq!(w.images[0], 0);
                assert!(verify_window_map(&u, &w.to_table(&u)).unwrap());
            }
        }
    }

    #[test]
    fn pruned_matches_oracle_small() {
        for m in 1..=2 {
            let u = build_window(m).unwrap();
            assert_eq!(
                find_window_automorphisms(&u).unwrap(),
                oracle_window_automorphisms(&u).unwrap(),
                "m = {m}"
            );
        }
    }

    #[test]
    fn next_permutation_enumerates_all() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
