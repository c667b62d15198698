//! Brute-force reference answers for small inputs.
//!
//! Nothing here touches `psi` or cir. Invariance is decided from the
//! definition, `M P(A)` lying in the column space of `P(A)`, by exact
//! elimination.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::linalg::column_space_contains;
use crate::partition::{Partition, PartitionPair};
use crate::refine::MatrixFamily;

/// Streams every partition of `{1..n}` in increasing coloring order, from
/// the singleton to the discrete partition, via the restricted-growth
/// successor.
#[derive(Clone, Debug)]
pub struct PartitionIterator {
    labels: Vec<u32>,
    /// `prefix_max[i]`: largest label among positions `0..i`
    prefix_max: Vec<u32>,
    done: bool,
}

/// All `Bell(n)` partitions of `{1..n}`, `1 <= n <= 12`.
pub fn all_partitions(n: usize) -> Result<PartitionIterator> {
    if !(1..=12).contains(&n) {
        return Err(invalid!("partition enumeration supports 1 <= n <= 12, got {n}"));
    }
    Ok(PartitionIterator {
        labels: alloc::vec![0; n],
        prefix_max: alloc::vec![0; n],
        done: false,
    })
}

impl Iterator for PartitionIterator {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let classes = self.labels.iter().max().map_or(0, |m| m + 1);
        let current = Partition::from_canonical(self.labels.clone(), classes);
        // bump the last position that can still grow, reset everything after it
        let n = self.labels.len();
        match (1..n).rev().find(|&i| self.labels[i] <= self.prefix_max[i]) {
            None => self.done = true,
            Some(i) => {
                self.labels[i] += 1;
                let top = self.prefix_max[i].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.prefix_max[j] = top;
                }
            }
        }
        Some(current)
    }
}

/// `M sys(B) ⊆ sys(A)` for every `M`, straight from the definition.
pub fn maps_into(family: &MatrixFamily, a: &Partition, b: &Partition) -> Result<bool> {
    let pa = a.characteristic_matrix();
    for m in family.matrices() {
        if !column_space_contains(&pa, &m.colored_product(b)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invariance from the definition: `M P(A)` has its columns in `Col(P(A))`.
pub fn is_invariant_direct(family: &MatrixFamily, a: &Partition) -> Result<bool> {
    maps_into(family, a, a)
}

/// Tactical test from the definition, in both directions.
pub fn is_tactical_direct(
    family: &MatrixFamily,
    transposed: &MatrixFamily,
    pair: &PartitionPair,
) -> Result<bool> {
    Ok(maps_into(family, &pair.rows, &pair.cols)?
        && maps_into(transposed, &pair.cols, &pair.rows)?)
}

/// Every invariant partition, by exhaustive scan. `n <= 10`.
pub fn brute_invariant_set(family: &MatrixFamily) -> Result<Vec<Partition>> {
    let n = family.cols();
    if !family.is_square() {
        return Err(crate::error::dim_err!(
            "invariant partitions need square matrices, got {}x{}",
            family.rows(),
            n
        ));
    }
    if n > 10 {
        return Err(Error::TooLarge(alloc::format!(
            "brute-force scan is limited to n <= 10, got {n}"
        )));
    }
    let mut out = Vec::new();
    for a in all_partitions(n)? {
        if is_invariant_direct(family, &a)? {
            out.push(a);
        }
    }
    Ok(out)
}

const BELL: [u64; 13] = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597];

/// Every tactical decomposition, by scanning `Pi(m) x Pi(n)`. Requires
/// `Bell(m) * Bell(n) <= 10^6`.
pub fn brute_tactical_set(family: &MatrixFamily) -> Result<Vec<PartitionPair>> {
    let (m, n) = (family.rows(), family.cols());
    let size = BELL.get(m).zip(BELL.get(n)).map(|(a, b)| a * b);
    if size.map_or(true, |s| s > 1_000_000) {
        return Err(Error::TooLarge(alloc::format!(
            "brute-force tactical scan of Pi({m}) x Pi({n}) exceeds 10^6 pairs"
        )));
    }
    let transposed = family.transpose();
    let cols: Vec<Partition> = all_partitions(n)?.collect();
    let mut out = Vec::new();
    for a in all_partitions(m)? {
        for b in &cols {
            let pair = PartitionPair::new(a.clone(), b.clone());
            if is_tactical_direct(family, &transposed, &pair)? {
                out.push(pair);
            }
        }
    }
    Ok(out)
}
