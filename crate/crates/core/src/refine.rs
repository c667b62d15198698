//! Invariance predicates and coarsest invariant refinement.
//!
//! `cir` iterates `A_{k+1} = psi([c(A_k) | M_1 P(A_k) | ... | M_r P(A_k)])`
//! until the class count stops changing. The products are never formed as
//! rational matrices: every `M_l` is scaled by a positive integer so its
//! entries are integral (which leaves `psi` unchanged), stored sparsely, and
//! each row of `M_l P(A)` is accumulated as a sorted list of
//! `(l * k + color, value)` pairs. Equal rows are grouped by hashing.

use alloc::vec;
use alloc::vec::Vec;
use core::hash::{Hash, Hasher};
use core::ops::AddAssign;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHasher;

use crate::error::{dim_err, invalid, Error, Result};
use crate::linalg::RationalMatrix;
use crate::partition::{induced_partition, Partition, PartitionPair, Refines};

/// A nonempty list of matrices of one common shape `m x n`.
#[derive(Clone, Debug)]
pub struct MatrixFamily {
    matrices: Vec<RationalMatrix>,
    forward: Kernel,
    backward: Kernel,
}

impl PartialEq for MatrixFamily {
    fn eq(&self, other: &Self) -> bool {
        self.matrices == other.matrices
    }
}

impl Eq for MatrixFamily {}

impl MatrixFamily {
    pub fn new(matrices: Vec<RationalMatrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| invalid!("a matrix family needs at least one matrix"))?;
        let (m, n) = (first.rows(), first.cols());
        for (l, a) in matrices.iter().enumerate() {
            if (a.rows(), a.cols()) != (m, n) {
                return Err(dim_err!(
                    "matrix {} is {}x{}, expected {m}x{n}",
                    l + 1,
                    a.rows(),
                    a.cols()
                ));
            }
        }
        let forward = Kernel::build(&matrices, false);
        let backward = Kernel::build(&matrices, true);
        Ok(MatrixFamily {
            matrices,
            forward,
            backward,
        })
    }

    pub fn single(matrix: RationalMatrix) -> Self {
        MatrixFamily::new(vec![matrix]).expect("one matrix is a valid family")
    }

    pub fn matrices(&self) -> &[RationalMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rows(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.matrices[0].cols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// The family of transposes, in the same order.
    pub fn transpose(&self) -> MatrixFamily {
        MatrixFamily {
            matrices: self.matrices.iter().map(RationalMatrix::transpose).collect(),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// True iff the family, as a set, is closed under transposition.
    pub fn is_transpose_closed(&self) -> bool {
        self.matrices
            .iter()
            .all(|a| self.matrices.contains(&a.transpose()))
    }

    fn require_square(&self, n: usize) -> Result<()> {
        if !self.is_square() {
            return Err(dim_err!(
                "expected square matrices, got {}x{}",
                self.rows(),
                self.cols()
            ));
        }
        if n != self.cols() {
            return Err(dim_err!(
                "partition of {n} elements against {}x{} matrices",
                self.rows(),
                self.cols()
            ));
        }
        Ok(())
    }

    fn require_shape(&self, m: usize, n: usize) -> Result<()> {
        if (m, n) != (self.rows(), self.cols()) {
            return Err(dim_err!(
                "partitions of {m} and {n} elements against {}x{} matrices",
                self.rows(),
                self.cols()
            ));
        }
        Ok(())
    }

    pub(crate) fn forward(&self) -> &Kernel {
        &self.forward
    }

    pub(crate) fn backward(&self) -> &Kernel {
        &self.backward
    }
}

/// Integer-scaled sparse copy of a family, all matrices interleaved by row.
#[derive(Clone, Debug)]
pub(crate) enum Kernel {
    Small(Csr<i64>),
    Big(Csr<BigInt>),
}

#[derive(Clone, Debug)]
pub(crate) struct Csr<T> {
    rows: usize,
    blocks: u32,
    starts: Vec<u32>,
    /// `(matrix index, column)` of each stored entry.
    slots: Vec<(u32, u32)>,
    values: Vec<T>,
}

impl Kernel {
    fn build(matrices: &[RationalMatrix], transpose: bool) -> Kernel {
        let scaled: Vec<Vec<Vec<(u32, BigInt)>>> = matrices
            .iter()
            .map(|a| {
                let lcm = a
                    .entries()
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                let rows = if transpose { a.cols() } else { a.rows() };
                let mut out = vec![Vec::new(); rows];
                for i in 0..a.rows() {
                    for (j, v) in a.row(i).iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        let w = v.numer() * (&lcm / v.denom());
                        if transpose {
                            out[j].push((i as u32, w));
                        } else {
                            out[i].push((j as u32, w));
                        }
                    }
                }
                out
            })
            .collect();
        let limit = BigInt::from(i64::MAX / 4);
        let small = scaled.iter().all(|m| {
            m.iter().all(|row| {
                row.iter().fold(BigInt::zero(), |acc, (_, v)| acc + v.abs()) <= limit
            })
        });
        if small {
            Kernel::Small(Csr::from_scaled(&scaled, |v| v.to_i64().expect("bounded")))
        } else {
            Kernel::Big(Csr::from_scaled(&scaled, Clone::clone))
        }
    }

    pub(crate) fn rows(&self) -> usize {
        match self {
            Kernel::Small(c) => c.rows,
            Kernel::Big(c) => c.rows,
        }
    }
}

impl<T> Csr<T> {
    fn from_scaled(scaled: &[Vec<Vec<(u32, BigInt)>>], conv: impl Fn(&BigInt) -> T) -> Self {
        let rows = scaled[0].len();
        let mut starts = Vec::with_capacity(rows + 1);
        let mut slots = Vec::new();
        let mut values = Vec::new();
        starts.push(0);
        for i in 0..rows {
            for (l, m) in scaled.iter().enumerate() {
                for (j, v) in &m[i] {
                    slots.push((l as u32, *j));
                    values.push(conv(v));
                }
            }
            starts.push(slots.len() as u32);
        }
        Csr {
            rows,
            blocks: scaled.len() as u32,
            starts,
            slots,
            values,
        }
    }
}

pub(crate) trait Scalar: Clone + Eq + Hash + Zero + for<'a> AddAssign<&'a Self> {}

impl<T: Clone + Eq + Hash + Zero + for<'a> AddAssign<&'a T>> Scalar for T {}

/// Scratch space for repeated `psi` evaluations. Reusing one per worker keeps
/// the inner loop free of allocation.
#[derive(Default)]
pub struct Workspace {
    small: Buffers<i64>,
    big: Buffers<BigInt>,
    table: Probe,
    next: Vec<u32>,
    next_cols: Vec<u32>,
    /// `psi` evaluations performed by cir calls on this workspace.
    pub(crate) iterations: u64,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }
}

#[derive(Default)]
struct Probe {
    slots: Vec<u32>,
    hashes: Vec<u64>,
}

/// Rows with at most this many stored entries are merged by sorting instead
/// of through the dense accumulator.
const SHORT_ROW: usize = 16;

struct Buffers<T> {
    acc: Vec<T>,
    stamp: Vec<u32>,
    epoch: u32,
    touched: Vec<u32>,
    pairs: Vec<(u32, T)>,
    keys: Vec<u32>,
    values: Vec<T>,
    offsets: Vec<u32>,
}

impl<T> Default for Buffers<T> {
    fn default() -> Self {
        Buffers {
            acc: Vec::new(),
            stamp: Vec::new(),
            epoch: 0,
            touched: Vec::new(),
            pairs: Vec::new(),
            keys: Vec::new(),
            values: Vec::new(),
            offsets: Vec::new(),
        }
    }
}

/// Computes `psi([prefix | M_1 P(C) | ... | M_r P(C)])` where `C` has labels
/// `color` with `k` classes. Writes canonical labels into `out` and returns
/// the class count.
fn psi_step(
    kernel: &Kernel,
    prefix: Option<&[u32]>,
    color: &[u32],
    k: u32,
    ws: &mut Workspace,
    out: &mut Vec<u32>,
) -> u32 {
    match kernel {
        Kernel::Small(c) => psi_generic(c, prefix, color, k, &mut ws.small, &mut ws.table, out),
        Kernel::Big(c) => psi_generic(c, prefix, color, k, &mut ws.big, &mut ws.table, out),
    }
}

fn psi_generic<T: Scalar>(
    csr: &Csr<T>,
    prefix: Option<&[u32]>,
    color: &[u32],
    k: u32,
    buf: &mut Buffers<T>,
    table: &mut Probe,
    out: &mut Vec<u32>,
) -> u32 {
    let width = (csr.blocks * k) as usize;
    if buf.acc.len() < width {
        buf.acc.resize(width, T::zero());
        buf.stamp.resize(width, 0);
    }
    buf.keys.clear();
    buf.values.clear();
    buf.offsets.clear();
    buf.offsets.push(0);

    for i in 0..csr.rows {
        let (lo, hi) = (csr.starts[i] as usize, csr.starts[i + 1] as usize);
        let entries = csr.slots[lo..hi].iter().zip(&csr.values[lo..hi]);
        if hi - lo <= SHORT_ROW {
            buf.pairs.clear();
            buf.pairs.extend(
                entries.map(|(&(l, j), v)| (l * k + color[j as usize], v.clone())),
            );
            buf.pairs.sort_unstable_by_key(|e| e.0);
            let mut run = buf.pairs.drain(..);
            if let Some((mut key, mut acc)) = run.next() {
                for (next, v) in run {
                    if next == key {
                        acc += &v;
                    } else {
                        if !acc.is_zero() {
                            buf.keys.push(key);
                            buf.values.push(acc);
                        }
                        key = next;
                        acc = v;
                    }
                }
                if !acc.is_zero() {
                    buf.keys.push(key);
                    buf.values.push(acc);
                }
            }
            buf.offsets.push(buf.keys.len() as u32);
            continue;
        }
        buf.epoch = buf.epoch.wrapping_add(1);
        if buf.epoch == 0 {
            buf.stamp.iter_mut().for_each(|s| *s = 0);
            buf.epoch = 1;
        }
        buf.touched.clear();
        for (&(l, j), v) in entries {
            let key = (l * k + color[j as usize]) as usize;
            if buf.stamp[key] != buf.epoch {
                buf.stamp[key] = buf.epoch;
                buf.touched.push(key as u32);
                buf.acc[key] = v.clone();
            } else {
                buf.acc[key] += v;
            }
        }
        buf.touched.sort_unstable();
        for &key in &buf.touched {
            let v = core::mem::replace(&mut buf.acc[key as usize], T::zero());
            if !v.is_zero() {
                buf.keys.push(key);
                buf.values.push(v);
            }
        }
        buf.offsets.push(buf.keys.len() as u32);
    }

    let row = |i: usize| {
        let (lo, hi) = (buf.offsets[i] as usize, buf.offsets[i + 1] as usize);
        (&buf.keys[lo..hi], &buf.values[lo..hi])
    };
    // linear probing over row indices; colors come out in first-occurrence order
    let size = (2 * csr.rows).next_power_of_two().max(16);
    let mask = size - 1;
    table.slots.clear();
    table.slots.resize(size, u32::MAX);
    table.hashes.clear();
    out.clear();
    let mut classes = 0u32;
    for i in 0..csr.rows {
        let head = prefix.map_or(0, |p| p[i]);
        let (keys, values) = row(i);
        let mut h = FxHasher::default();
        h.write_u32(head);
        keys.hash(&mut h);
        values.hash(&mut h);
        let hash = h.finish();
        table.hashes.push(hash);
        let mut pos = (hash >> 20 ^ hash) as usize & mask;
        loop {
            let r = table.slots[pos];
            if r == u32::MAX {
                table.slots[pos] = i as u32;
                out.push(classes);
                classes += 1;
                break;
            }
            let r = r as usize;
            if table.hashes[r] == hash
                && prefix.map_or(true, |p| p[r] == head)
                && row(r) == (keys, values)
            {
                out.push(out[r]);
                break;
            }
            pos = (pos + 1) & mask;
        }
    }
    classes
}

/// `psi([M_1 P(C) | ... | M_r P(C)])` for a right-hand partition `C`.
fn psi_of_products(kernel: &Kernel, c: &Partition, ws: &mut Workspace) -> Partition {
    let mut out = Vec::with_capacity(kernel.rows());
    let k = psi_step(kernel, None, c.labels(), c.num_classes() as u32, ws, &mut out);
    Partition::from_canonical(out, k)
}

/// True iff `M sys(A) ⊆ sys(A)` for every `M` in the family, i.e.
/// `A <= psi([M_1 P(A) | ... | M_r P(A)])`.
pub fn is_invariant(family: &MatrixFamily, a: &Partition) -> Result<bool> {
    family.require_square(a.len())?;
    let image = psi_of_products(family.forward(), a, &mut Workspace::new());
    Ok(a.refines(&image))
}

/// True iff `M_l sys(B) ⊆ sys(A)` for every `l`, i.e.
/// `A <= psi([M_1 P(B) | ... | M_r P(B)])`.
pub fn directed_containment(family: &MatrixFamily, a: &Partition, b: &Partition) -> Result<bool> {
    family.require_shape(a.len(), b.len())?;
    let image = psi_of_products(family.forward(), b, &mut Workspace::new());
    Ok(a.refines(&image))
}

/// True iff `(A, B)` is a tactical decomposition: `M sys(B) ⊆ sys(A)` and
/// `M^T sys(A) ⊆ sys(B)` for every `M` in the family.
pub fn is_tactical(family: &MatrixFamily, pair: &PartitionPair) -> Result<bool> {
    let (m, n) = pair.shape();
    family.require_shape(m, n)?;
    let mut ws = Workspace::new();
    let rows = psi_of_products(family.forward(), &pair.cols, &mut ws);
    if !pair.rows.refines(&rows) {
        return Ok(false);
    }
    let cols = psi_of_products(family.backward(), &pair.rows, &mut ws);
    Ok(pair.cols.refines(&cols))
}

/// Coarsest `M`-invariant partition finer than `a`.
pub fn cir(family: &MatrixFamily, a: &Partition) -> Result<Partition> {
    family.require_square(a.len())?;
    cir_with(family, a, &mut Workspace::new(), |_| {})
}

/// Like [`cir`], returning every iterate `A_0 = a, A_1, ...` up to the fixed
/// point. Consecutive entries are strictly decreasing.
pub fn cir_trace(family: &MatrixFamily, a: &Partition) -> Result<Vec<Partition>> {
    family.require_square(a.len())?;
    let mut trace = vec![a.clone()];
    let last = cir_with(family, a, &mut Workspace::new(), |p| trace.push(p.clone()))?;
    debug_assert_eq!(trace.last(), Some(&last));
    Ok(trace)
}

/// Runs the cir iteration with a caller-owned workspace. `on_step` sees each
/// strictly finer iterate.
pub(crate) fn cir_with(
    family: &MatrixFamily,
    a: &Partition,
    ws: &mut Workspace,
    mut on_step: impl FnMut(&Partition),
) -> Result<Partition> {
    let n = a.len();
    let mut labels = a.labels().to_vec();
    let mut classes = a.num_classes() as u32;
    let mut next = core::mem::take(&mut ws.next);
    let mut result = Err(Error::Internal(alloc::format!(
        "cir did not stabilize within {n} iterations"
    )));
    for _ in 0..=n {
        if classes as usize == n {
            // the discrete partition is invariant under everything
            result = Ok(Partition::from_canonical(labels, classes));
            break;
        }
        let k = psi_step(family.forward(), Some(&labels), &labels, classes, ws, &mut next);
        ws.iterations += 1;
        if k == classes {
            result = Ok(Partition::from_canonical(labels, classes));
            break;
        }
        debug_assert!(k > classes);
        core::mem::swap(&mut labels, &mut next);
        classes = k;
        on_step(&Partition::from_canonical(labels.clone(), classes));
    }
    ws.next = next;
    result
}

/// Coarsest tactical decomposition finer than `pair`. Both sides are updated
/// from the previous iterate:
/// `A' = psi([c(A) | M_l P(B)])`, `B' = psi([c(B) | M_l^T P(A)])`.
pub fn tactical_cir(family: &MatrixFamily, pair: &PartitionPair) -> Result<PartitionPair> {
    let (m, n) = pair.shape();
    family.require_shape(m, n)?;
    tactical_cir_with(family, pair, &mut Workspace::new(), |_| {})
}

pub(crate) fn tactical_cir_with(
    family: &MatrixFamily,
    pair: &PartitionPair,
    ws: &mut Workspace,
    mut on_step: impl FnMut(&PartitionPair),
) -> Result<PartitionPair> {
    let (m, n) = pair.shape();
    let mut a = pair.rows.labels().to_vec();
    let mut b = pair.cols.labels().to_vec();
    let mut ka = pair.rows.num_classes() as u32;
    let mut kb = pair.cols.num_classes() as u32;
    let mut next_a = core::mem::take(&mut ws.next);
    let mut next_b = core::mem::take(&mut ws.next_cols);
    let mut result = Err(Error::Internal(alloc::format!(
        "tactical cir did not stabilize within {} iterations",
        m + n
    )));
    for _ in 0..=m + n {
        let ka2 = psi_step(family.forward(), Some(&a), &b, kb, ws, &mut next_a);
        let kb2 = psi_step(family.backward(), Some(&b), &a, ka, ws, &mut next_b);
        ws.iterations += 1;
        if ka2 == ka && kb2 == kb {
            result = Ok(PartitionPair::new(
                Partition::from_canonical(a, ka),
                Partition::from_canonical(b, kb),
            ));
            break;
        }
        core::mem::swap(&mut a, &mut next_a);
        core::mem::swap(&mut b, &mut next_b);
        ka = ka2;
        kb = kb2;
        on_step(&PartitionPair::new(
            Partition::from_canonical(a.clone(), ka),
            Partition::from_canonical(b.clone(), kb),
        ));
    }
    ws.next = next_a;
    ws.next_cols = next_b;
    result
}

/// Reference cir over rational matrices:
/// `A_{k+1} = psi([P(A_k) | M_1 P(A_k) | ... | M_r P(A_k)])`. Slow; used to
/// cross-check [`cir`].
pub fn cir_dense(family: &MatrixFamily, a: &Partition) -> Result<Partition> {
    family.require_square(a.len())?;
    let mut current = a.clone();
    for _ in 0..=a.len() {
        let mut blocks = vec![current.characteristic_matrix()];
        for m in family.matrices() {
            blocks.push(m.colored_product(&current)?);
        }
        let next = induced_partition(&RationalMatrix::augment(&blocks)?);
        if next == current {
            return Ok(current);
        }
        current = next;
    }
    Err(Error::Internal(alloc::format!(
        "dense cir did not stabilize within {} iterations",
        a.len()
    )))
}
