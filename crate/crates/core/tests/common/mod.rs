use std::collections::BTreeSet;

use pfin::monoid::ZeroSet;
use pfin::setcore::{sumset_naive, FinSet};

/// Every way of writing `x` as `y + z` with `y <= z` both nontrivial, found
/// by trying all pairs of subsets of `x` that contain 0.
pub fn subset_pair_oracle(x: &ZeroSet) -> BTreeSet<(FinSet, FinSet)> {
    let others: Vec<i64> = x.iter().copied().filter(|&e| e != 0).collect();
    let subsets: Vec<FinSet> = (0u32..1 << others.len())
        .map(|mask| {
            let mut v = vec![0];
            v.extend(
                (0..others.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| others[i]),
            );
            FinSet::new(v).unwrap()
        })
        .filter(|s| s.len() > 1)
        .collect();
    let mut out = BTreeSet::new();
    for y in &subsets {
        for z in &subsets {
            if y <= z && sumset_naive(y, z).unwrap() == **x {
                out.insert((y.clone(), z.clone()));
            }
        }
    }
    out
}
