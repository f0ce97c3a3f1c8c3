//! The reduced monoid of finite integer sets containing 0.
//!
//! Every nontrivial factorization `X = Y + Z` of a zero-set has `Y ⊆ X` and
//! `Z ⊆ X` (because `Y = Y + {0} ⊆ Y + Z`), so the search runs over subset
//! pairs of `X` encoded as bitmasks on its element positions.

use std::ops::Deref;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setcore::FinSet;

/// Default bound on `|X|` for [`factorizations`].
pub const DEFAULT_FACTOR_CAP: usize = 24;

/// Bound on the number of free interior points in [`candidates_with_bounds`].
pub const CANDIDATE_FREE_CAP: u32 = 24;

/// A finite set of integers containing 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "FinSet", into = "FinSet")]
pub struct ZeroSet(FinSet);

impl ZeroSet {
    pub fn new(set: FinSet) -> Result<ZeroSet> {
        if set.contains(0) {
            Ok(ZeroSet(set))
        } else {
            Err(Error::NotZeroSet(set.to_string()))
        }
    }

    pub fn identity() -> ZeroSet {
        ZeroSet(FinSet::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.0.len() == 1
    }

    pub fn as_set(&self) -> &FinSet {
        &self.0
    }

    pub fn into_set(self) -> FinSet {
        self.0
    }

    /// `X + Y`; the result contains 0 again.
    pub fn add(&self, other: &ZeroSet) -> Result<ZeroSet> {
        Ok(ZeroSet(self.0.sumset(&other.0)?))
    }

    /// `x- = -min X`, nonnegative for zero-sets.
    pub fn x_minus(&self) -> u64 {
        self.0.min_elem().unsigned_abs()
    }

    /// `x+ = max X`, nonnegative for zero-sets.
    pub fn x_plus(&self) -> u64 {
        self.0.max_elem() as u64
    }
}

impl Deref for ZeroSet {
    type Target = FinSet;

    fn deref(&self) -> &FinSet {
        &self.0
    }
}

impl TryFrom<FinSet> for ZeroSet {
    type Error = Error;

    fn try_from(set: FinSet) -> Result<ZeroSet> {
        ZeroSet::new(set)
    }
}

impl From<ZeroSet> for FinSet {
    fn from(z: ZeroSet) -> FinSet {
        z.0
    }
}

impl std::fmt::Display for ZeroSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for ZeroSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<ZeroSet> {
        ZeroSet::new(s.parse()?)
    }
}

pub fn as_zero_set(x: FinSet) -> Result<ZeroSet> {
    ZeroSet::new(x)
}

/// A nontrivial decomposition `left + right = product`, with `left <= right`
/// in lexicographic order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Factorization {
    pub left: ZeroSet,
    pub right: ZeroSet,
    pub product: ZeroSet,
}

impl Factorization {
    pub fn pair(&self) -> [String; 2] {
        [self.left.to_string(), self.right.to_string()]
    }
}

/// All unordered nontrivial factorizations of `x`, sorted lexicographically
/// by `(left, right)`. Bounded by [`DEFAULT_FACTOR_CAP`].
pub fn factorizations(x: &ZeroSet) -> Result<Vec<Factorization>> {
    factorizations_with_cap(x, DEFAULT_FACTOR_CAP)
}

pub fn factorizations_with_cap(x: &ZeroSet, cap: usize) -> Result<Vec<Factorization>> {
    let n = x.len();
    if n > cap || n > 32 {
        return Err(Error::TooLarge {
            size: n as u128,
            limit: cap.min(32) as u128,
        });
    }
    if n == 1 {
        return Ok(Vec::new());
    }
    let elems = x.as_slice();
    let zero = elems.binary_search(&0).expect("zero-set contains 0");
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let zbit = 1u32 << zero;

    // sum_bit[i][j]: bit of elems[i] + elems[j] inside X, or 0 when the sum
    // falls outside X.
    let sum_bit: Vec<Vec<u32>> = elems
        .iter()
        .map(|&a| {
            elems
                .iter()
                .map(|&b| match elems.binary_search(&(a + b)) {
                    Ok(k) => 1u32 << k,
                    Err(_) => 0,
                })
                .collect()
        })
        .collect();

    let others: Vec<usize> = (0..n).filter(|&i| i != zero).collect();
    let n_other = others.len() as u32;
    let expand = |m: u32| -> u32 {
        let mut out = zbit;
        for (k, &i) in others.iter().enumerate() {
            if m >> k & 1 == 1 {
                out |= 1 << i;
            }
        }
        out
    };
    let to_set = |mask: u32| -> ZeroSet {
        let v: Vec<i64> = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| elems[i])
            .collect();
        ZeroSet(FinSet::from_sorted_unchecked(v))
    };

    let mut found: Vec<(u32, u32)> = (1u32..(1u32 << n_other))
        .into_par_iter()
        .flat_map_iter(|ym| {
            let y = expand(ym);
            // Columns j that keep Y + {x_j} inside X.
            let mut col = vec![0u32; n];
            let mut zmax = 0u32;
            for j in 0..n {
                let mut c = 0u32;
                let mut ok = true;
                for (i, row) in sum_bit.iter().enumerate() {
                    if y >> i & 1 == 1 {
                        let b = row[j];
                        if b == 0 {
                            ok = false;
                            break;
                        }
                        c |= b;
                    }
                }
                if ok {
                    col[j] = c;
                    zmax |= 1 << j;
                }
            }
            let free = zmax & !zbit;
            let mut hits = Vec::new();
            // Nonempty submasks of `free`.
            let mut sub = free;
            while sub != 0 {
                let z = sub | zbit;
                let mut cover = 0u32;
                let mut rest = z;
                while rest != 0 {
                    let j = rest.trailing_zeros() as usize;
                    cover |= col[j];
                    rest &= rest - 1;
                }
                if cover == full {
                    hits.push((y, z));
                }
                sub = (sub - 1) & free;
            }
            hits.into_iter()
        })
        .collect();

    let mut out: Vec<Factorization> = found
        .drain(..)
        .filter_map(|(ym, zm)| {
            let (l, r) = (to_set(ym), to_set(zm));
            (l <= r).then(|| Factorization {
                left: l,
                right: r,
                product: x.clone(),
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// True iff `x` is not the identity and admits no nontrivial factorization.
pub fn is_atom(x: &ZeroSet) -> Result<bool> {
    if x.is_identity() {
        return Ok(false);
    }
    Ok(factorizations(x)?.is_empty())
}

/// All zero-sets with the given minimum and maximum, enumerated by the
/// subset of free interior points (bit `k` of the counter selects the
/// `k`-th free point, ascending).
pub fn candidates_with_bounds(lo: i64, hi: i64) -> Result<Vec<ZeroSet>> {
    if lo > 0 || hi < 0 {
        return Err(Error::BadBounds { lo, hi });
    }
    if lo == hi {
        return Ok(vec![ZeroSet::identity()]);
    }
    let free: Vec<i64> = (lo + 1..hi).filter(|&v| v != 0).collect();
    if free.len() as u32 > CANDIDATE_FREE_CAP {
        return Err(Error::TooLarge {
            size: 1u128 << free.len().min(127),
            limit: 1u128 << CANDIDATE_FREE_CAP,
        });
    }
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u64..(1u64 << free.len()) {
        let mut v = vec![lo, 0, hi];
        v.extend(
            free.iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e),
        );
        out.push(ZeroSet(FinSet::new(v)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZeroSet {
        ZeroSet::new(FinSet::new(v.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn zero_set_membership() {
        assert!(as_zero_set(FinSet::new([-1, 0, 2]).unwrap()).is_ok());
        let err = as_zero_set(FinSet::new([1, 2]).unwrap()).unwrap_err();
        assert!(err.to_string().contains("not in the reduced monoid"));
        assert!(as_zero_set(FinSet::zero()).unwrap().is_identity());
    }

    #[test]
    fn factorizations_of_minus1_to_2() {
        let f = factorizations(&z(&[-1, 0, 1, 2])).unwrap();
        let pairs: Vec<_> = f
            .iter()
            .map(|f| (f.left.clone(), f.right.clone()))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (z(&[-1, 0]), z(&[0, 1, 2])),
                (z(&[-1, 0]), z(&[0, 2])),
                (z(&[-1, 0, 1]), z(&[0, 1])),
            ]
        );
        for fac in &f {
            assert_eq!(fac.left.add(&fac.right).unwrap(), fac.product);
        }
    }

    #[test]
    fn atoms() {
        assert!(factorizations(&z(&[-1, 0, 2])).unwrap().is_empty());
        assert!(is_atom(&z(&[-1, 0, 2])).unwrap());
        assert!(!is_atom(&z(&[-1, 0, 1, 2])).unwrap());
        assert!(!is_atom(&ZeroSet::identity()).unwrap());
        assert!(factorizations(&ZeroSet::identity()).unwrap().is_empty());
        assert!(is_atom(&z(&[0, 1])).unwrap());
    }

    #[test]
    fn symmetric_square_is_found_once() {
        // {0,1,2} = {0,1} + {0,1}
        let f = factorizations(&z(&[0, 1, 2])).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].left, z(&[0, 1]));
        assert_eq!(f[0].right, z(&[0, 1]));
    }

    #[test]
    fn cap_is_enforced() {
        let x = ZeroSet::new(crate::setcore::interval(0, 9).unwrap()).unwrap();
        assert!(matches!(
            factorizations_with_cap(&x, 5),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn candidates() {
        assert_eq!(
            candidates_with_bounds(-1, 2).unwrap(),
            vec![z(&[-1, 0, 2]), z(&[-1, 0, 1, 2])]
        );
        assert_eq!(
            candidates_with_bounds(0, 0).unwrap(),
            vec![ZeroSet::identity()]
        );
        assert_eq!(
            candidates_with_bounds(0, 2).unwrap(),
            vec![z(&[0, 2]), z(&[0, 1, 2])]
        );
        assert!(candidates_with_bounds(1, 3).is_err());
        assert!(candidates_with_bounds(-3, -1).is_err());
    }

    #[test]
    fn candidate_counts() {
        for lo in -4..=0i64 {
            for hi in 0..=4i64 {
                if hi == lo {
                    continue;
                }
                let free = if lo < 0 && hi > 0 {
                    hi - lo - 2
                } else {
                    hi - lo - 1
                };
                let c = candidates_with_bounds(lo, hi).unwrap();
                assert_eq!(c.len(), 1 << free, "({lo},{hi})");
                assert!(c.iter().all(|x| x.bounds() == (lo, hi)));
            }
        }
    }

    #[test]
    fn serde_rejects_sets_without_zero() {
        assert!(serde_json::from_str::<ZeroSet>("\"{1,2}\"").is_err());
        assert_eq!(
            serde_json::from_str::<ZeroSet>("\"{0,2}\"").unwrap(),
            z(&[0, 2])
        );
    }
}
