//! Finite nonempty integer sets and setwise arithmetic.
//!
//! [`FinSet`] keeps its elements as a strictly increasing vector, so equality,
//! ordering and hashing are those of the sequence. Sumsets are computed on a
//! dense bit vector anchored at the minimum; a pairwise enumeration path is
//! kept alongside as a reference.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest bit width the dense sumset path will allocate. Wider results fall
/// back to pairwise enumeration.
pub const DENSE_LIMIT_BITS: u64 = 1 << 26;

/// Largest interval [`interval`] will materialize.
const NAIVE_TABLE_LIMIT: u128 = 1 << 20;
pub const MAX_INTERVAL_LEN: u64 = 1 << 26;

/// A finite nonempty subset of the integers in canonical (sorted, deduplicated) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet {
    elems: Vec<i64>,
}

impl FinSet {
    /// Builds a set from arbitrary values, sorting and removing duplicates.
    pub fn new<I: IntoIterator<Item = i64>>(values: I) -> Result<FinSet> {
        let mut elems: Vec<i64> = values.into_iter().collect();
        if elems.is_empty() {
            return Err(Error::EmptySet);
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(FinSet { elems })
    }

    /// Wraps an already strictly increasing, nonempty vector.
    pub(crate) fn from_sorted_unchecked(elems: Vec<i64>) -> FinSet {
        debug_assert!(!elems.is_empty());
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        FinSet { elems }
    }

    pub fn singleton(x: i64) -> FinSet {
        FinSet { elems: vec![x] }
    }

    /// The monoid identity `{0}`.
    pub fn zero() -> FinSet {
        FinSet::singleton(0)
    }

    pub fn min_elem(&self) -> i64 {
        self.elems[0]
    }

    pub fn max_elem(&self) -> i64 {
        self.elems[self.elems.len() - 1]
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.min_elem(), self.max_elem())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// Always false; kept for the `len`/`is_empty` pairing convention.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, i64> {
        self.elems.iter()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        if self.min_elem() < other.min_elem() || self.max_elem() > other.max_elem() {
            return false;
        }
        let mut it = other.elems.iter();
        self.elems.iter().all(|x| it.any(|y| y == x))
    }

    /// `max - min + 1`, the number of bits of a dense encoding.
    pub fn span(&self) -> u64 {
        (self.max_elem() as i128 - self.min_elem() as i128 + 1) as u64
    }

    pub fn is_interval(&self) -> bool {
        self.span() == self.elems.len() as u64
    }

    pub fn union(&self, other: &FinSet) -> FinSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elems, &other.elems);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FinSet::from_sorted_unchecked(out)
    }

    /// `l + X`.
    pub fn translate(&self, l: i64) -> Result<FinSet> {
        self.max_elem()
            .checked_add(l)
            .ok_or(Error::Overflow("translate"))?;
        self.min_elem()
            .checked_add(l)
            .ok_or(Error::Overflow("translate"))?;
        Ok(FinSet::from_sorted_unchecked(
            self.elems.iter().map(|x| x + l).collect(),
        ))
    }

    /// `l - X`.
    pub fn reflect(&self, l: i64) -> Result<FinSet> {
        let mut out = Vec::with_capacity(self.len());
        for &x in self.elems.iter().rev() {
            out.push(l.checked_sub(x).ok_or(Error::Overflow("reflect"))?);
        }
        Ok(FinSet::from_sorted_unchecked(out))
    }

    pub fn neg(&self) -> Result<FinSet> {
        self.reflect(0)
    }

    pub fn sumset(&self, other: &FinSet) -> Result<FinSet> {
        sumset(self, other)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = &'a i64;
    type IntoIter = std::slice::Iter<'a, i64>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// Parses `{a,b,...}` or the interval shorthand `i..j`. Whitespace around
/// tokens is tolerated.
impl FromStr for FinSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<FinSet> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('{') {
            let inner = rest
                .strip_suffix('}')
                .ok_or_else(|| Error::Parse(s.to_string()))?;
            if inner.trim().is_empty() {
                return Err(Error::EmptySet);
            }
            let values = inner
                .split(',')
                .map(parse_int)
                .collect::<Result<Vec<_>>>()?;
            return FinSet::new(values);
        }
        if let Some((lo, hi)) = s.split_once("..") {
            return interval(parse_int(lo)?, parse_int(hi)?);
        }
        Err(Error::Parse(s.to_string()))
    }
}

fn parse_int(tok: &str) -> Result<i64> {
    let t = tok.trim();
    t.parse::<i64>().map_err(|_| Error::Parse(t.to_string()))
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical set from arbitrary values.
pub fn make_set<I: IntoIterator<Item = i64>>(values: I) -> Result<FinSet> {
    FinSet::new(values)
}

/// The discrete interval `[[i, j]]`.
pub fn interval(i: i64, j: i64) -> Result<FinSet> {
    if i > j {
        return Err(Error::EmptyInterval(i, j));
    }
    let len = (j as i128 - i as i128 + 1) as u128;
    if len > MAX_INTERVAL_LEN as u128 {
        return Err(Error::TooLarge {
            size: len,
            limit: MAX_INTERVAL_LEN as u128,
        });
    }
    Ok(FinSet::from_sorted_unchecked((i..=j).collect()))
}

pub fn translate(x: &FinSet, l: i64) -> Result<FinSet> {
    x.translate(l)
}

pub fn reflect(x: &FinSet, l: i64) -> Result<FinSet> {
    x.reflect(l)
}

pub fn bounds(x: &FinSet) -> (i64, i64) {
    x.bounds()
}

fn sum_bounds(x: &FinSet, y: &FinSet) -> Result<(i64, i64)> {
    let lo = x
        .min_elem()
        .checked_add(y.min_elem())
        .ok_or(Error::Overflow("sumset"))?;
    let hi = x
        .max_elem()
        .checked_add(y.max_elem())
        .ok_or(Error::Overflow("sumset"))?;
    Ok((lo, hi))
}

/// `X + Y`. Uses the dense path whenever the result fits in
/// [`DENSE_LIMIT_BITS`], pairwise enumeration otherwise.
pub fn sumset(x: &FinSet, y: &FinSet) -> Result<FinSet> {
    let (lo, hi) = sum_bounds(x, y)?;
    if x.len() == 1 {
        return y.translate(x.min_elem());
    }
    if y.len() == 1 {
        return x.translate(y.min_elem());
    }
    let width = (hi as i128 - lo as i128 + 1) as u128;
    if width <= DENSE_LIMIT_BITS as u128 {
        sumset_dense(x, y)
    } else {
        sumset_naive(x, y)
    }
}

/// Reference path: every pairwise sum, marked in a byte table when the span
/// is small, sorted and deduplicated otherwise.
pub fn sumset_naive(x: &FinSet, y: &FinSet) -> Result<FinSet> {
    let (lo, hi) = sum_bounds(x, y)?;
    let width = (hi as i128 - lo as i128 + 1) as u128;
    if width <= NAIVE_TABLE_LIMIT {
        let mut seen = vec![false; width as usize];
        for &a in x {
            for &b in y {
                seen[(a as i128 + b as i128 - lo as i128) as usize] = true;
            }
        }
        let out = (0..width as usize)
            .filter(|&i| seen[i])
            .map(|i| lo + i as i64)
            .collect();
        return Ok(FinSet::from_sorted_unchecked(out));
    }
    let mut out = Vec::with_capacity(x.len() * y.len());
    for &a in x {
        for &b in y {
            out.push(a + b);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(FinSet::from_sorted_unchecked(out))
}

/// Bit-parallel path: the union of shifted copies of one operand's bit
/// vector, one copy per element of the other operand.
pub fn sumset_dense(x: &FinSet, y: &FinSet) -> Result<FinSet> {
    let (lo, hi) = sum_bounds(x, y)?;
    let width = (hi as i128 - lo as i128 + 1) as u128;
    if width > DENSE_LIMIT_BITS as u128 {
        return Err(Error::TooLarge {
            size: width,
            limit: DENSE_LIMIT_BITS as u128,
        });
    }
    // Shift the operand whose bit vector is cheaper to copy |other| times.
    let cost_x = x.span().div_ceil(64) * y.len() as u64;
    let cost_y = y.span().div_ceil(64) * x.len() as u64;
    let (src, shifts) = if cost_x <= cost_y { (x, y) } else { (y, x) };

    let src_bits = DenseBits::encode(src);
    let mut acc = vec![0u64; (width as usize).div_ceil(64) + 1];
    let base = shifts.min_elem();
    for &s in shifts {
        or_shifted(&mut acc, &src_bits.words, (s - base) as usize);
    }
    Ok(DenseBits {
        base: lo,
        words: acc,
    }
    .decode())
}

struct DenseBits {
    base: i64,
    words: Vec<u64>,
}

impl DenseBits {
    fn encode(x: &FinSet) -> DenseBits {
        let base = x.min_elem();
        let mut words = vec![0u64; (x.span() as usize).div_ceil(64)];
        for &e in x {
            let off = (e - base) as usize;
            words[off / 64] |= 1 << (off % 64);
        }
        DenseBits { base, words }
    }

    fn decode(&self) -> FinSet {
        let count: u32 = self.words.iter().map(|w| w.count_ones()).sum();
        let mut out = Vec::with_capacity(count as usize);
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as i64;
                out.push(self.base + (i as i64) * 64 + b);
                w &= w - 1;
            }
        }
        FinSet::from_sorted_unchecked(out)
    }
}

/// `dst |= src << shift`, bitwise over little-endian word vectors.
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let q = shift / 64;
    let r = shift % 64;
    if r == 0 {
        for (d, &w) in dst[q..].iter_mut().zip(src) {
            *d |= w;
        }
        return;
    }
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        dst[q + i] |= w << r;
        let carry = w >> (64 - r);
        if carry != 0 {
            dst[q + i + 1] |= carry;
        }
    }
}

/// `kX`, by repeated doubling. `0X = {0}`.
pub fn kfold(x: &FinSet, k: u64) -> Result<FinSet> {
    let mut acc = FinSet::zero();
    let mut base = x.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = sumset(&acc, &base)?;
        }
        k >>= 1;
        if k > 0 {
            base = sumset(&base, &base)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> FinSet {
        FinSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn make_set_canonicalizes() {
        assert_eq!(make_set([2, 0, -1, 2]).unwrap().as_slice(), &[-1, 0, 2]);
        assert_eq!(make_set([0]).unwrap(), FinSet::zero());
        assert_eq!(
            make_set([5, -5, -4, 7, 6, 1, 0, -2]).unwrap().as_slice(),
            &[-5, -4, -2, 0, 1, 5, 6, 7]
        );
        assert_eq!(make_set([]).unwrap_err(), Error::EmptySet);
        assert_eq!(
            Error::EmptySet.to_string(),
            "empty set not an element of the power monoid"
        );
    }

    #[test]
    fn intervals() {
        assert_eq!(interval(0, 1).unwrap(), s(&[0, 1]));
        assert_eq!(interval(-1, 5).unwrap(), s(&[-1, 0, 1, 2, 3, 4, 5]));
        assert_eq!(interval(3, 3).unwrap(), s(&[3]));
        assert!(matches!(interval(2, 1), Err(Error::EmptyInterval(2, 1))));
        assert!(matches!(interval(0, i64::MAX), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(
            sumset(&s(&[-1, 0, 2]), &s(&[0, 1, 3])).unwrap(),
            s(&[-1, 0, 1, 2, 3, 5])
        );
        assert_eq!(
            sumset(&s(&[-1, 0, 2]), &s(&[0, 2, 3])).unwrap(),
            interval(-1, 5).unwrap()
        );
        let x = s(&[-7, 3, 4, 100]);
        assert_eq!(sumset(&FinSet::zero(), &x).unwrap(), x);
    }

    #[test]
    fn sumset_overflow_is_an_error() {
        let big = s(&[0, i64::MAX]);
        assert_eq!(
            sumset(&big, &s(&[0, 1])).unwrap_err(),
            Error::Overflow("sumset")
        );
        assert!(sumset_naive(&big, &s(&[1])).is_err());
        assert!(s(&[i64::MIN]).neg().is_err());
        assert!(s(&[1]).translate(i64::MAX).is_err());
    }

    #[test]
    fn wide_sets_use_the_sparse_path() {
        let x = s(&[-(1 << 40), 0, 1 << 40]);
        let y = s(&[0, 1]);
        let z = sumset(&x, &y).unwrap();
        assert_eq!(z, sumset_naive(&x, &y).unwrap());
        assert!(matches!(sumset_dense(&x, &y), Err(Error::TooLarge { .. })));
        assert_eq!(
            z.as_slice(),
            &[-(1 << 40), -(1 << 40) + 1, 0, 1, 1 << 40, (1 << 40) + 1]
        );
    }

    #[test]
    fn dense_crosses_word_boundaries() {
        let x = s(&[0, 63, 64, 127, 130]);
        let y = s(&[0, 1, 65, 200]);
        assert_eq!(sumset_dense(&x, &y).unwrap(), sumset_naive(&x, &y).unwrap());
        assert_eq!(sumset_dense(&y, &x).unwrap(), sumset_naive(&x, &y).unwrap());
    }

    #[test]
    fn kfold_examples() {
        assert_eq!(kfold(&s(&[0, 1]), 4).unwrap(), interval(0, 4).unwrap());
        // brute force: all a+b with a, b in {-1,0,2}
        let x = s(&[-1, 0, 2]);
        let brute: Vec<i64> = x
            .iter()
            .flat_map(|a| x.iter().map(move |b| a + b))
            .collect();
        let expected = FinSet::new(brute).unwrap();
        assert_eq!(expected.as_slice(), &[-2, -1, 0, 1, 2, 4]);
        assert_eq!(kfold(&x, 2).unwrap(), expected);
        assert_eq!(kfold(&s(&[3, 9]), 0).unwrap(), FinSet::zero());
        assert_eq!(kfold(&x, 1).unwrap(), x);
    }

    #[test]
    fn translate_and_reflect() {
        assert_eq!(s(&[-1, 0, 2]).translate(3).unwrap(), s(&[2, 3, 5]));
        assert_eq!(s(&[0, 1]).translate(-1).unwrap(), s(&[-1, 0]));
        assert_eq!(s(&[4, 5]).translate(0).unwrap(), s(&[4, 5]));
        assert_eq!(s(&[0, 2, 3]).reflect(3).unwrap(), s(&[0, 1, 3]));
        assert_eq!(s(&[-1, 0, 2]).reflect(0).unwrap(), s(&[-2, 0, 1]));
        assert_eq!(s(&[0]).reflect(7).unwrap(), s(&[7]));
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(bounds(&s(&[-5, -4, -2, 0, 1, 5, 6, 7])), (-5, 7));
        assert_eq!(bounds(&FinSet::zero()), (0, 0));
        assert_eq!(bounds(&s(&[-1, 0, 2])), (-1, 2));
    }

    #[test]
    fn literal_round_trip() {
        let x: FinSet = "{2, 0,-1,2}".parse().unwrap();
        assert_eq!(x.to_string(), "{-1,0,2}");
        let y: FinSet = "-1..5".parse().unwrap();
        assert_eq!(y.to_string(), "{-1,0,1,2,3,4,5}");
        assert_eq!(
            "bad".parse::<FinSet>().unwrap_err(),
            Error::Parse("bad".into())
        );
        assert_eq!(
            "{1,x,3}".parse::<FinSet>().unwrap_err(),
            Error::Parse("x".into())
        );
        assert_eq!("{}".parse::<FinSet>().unwrap_err(), Error::EmptySet);
        assert!(matches!(
            "5..3".parse::<FinSet>(),
            Err(Error::EmptyInterval(5, 3))
        ));
        assert_eq!(
            "{1,2".parse::<FinSet>().unwrap_err(),
            Error::Parse("{1,2".into())
        );
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"{-1,0,2}\"");
        assert_eq!(serde_json::from_str::<FinSet>(&json).unwrap(), x);
    }

    #[test]
    fn subset_and_union() {
        assert!(s(&[0, 2]).is_subset(&s(&[-1, 0, 1, 2])));
        assert!(!s(&[0, 3]).is_subset(&s(&[-1, 0, 1, 2])));
        assert_eq!(s(&[0, 2]).union(&s(&[-1, 2, 5])), s(&[-1, 0, 2, 5]));
    }
}
