//! Canonical set partitions of `{1..n}` and the lattice operations on them.
//!
//! A partition is stored as its coloring vector in restricted-growth form:
//! element 1 has color 1 and every later element either reuses a color or
//! takes the next unused one. Internally colors are 0-based; the 1-based
//! coloring is what crosses the wire.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::BuildHasherDefault;

use num_traits::One;
use rustc_hash::FxHasher;

use crate::error::{dim_err, invalid, parse_err, Result};
use crate::linalg::{Rational, RationalMatrix};

pub(crate) type FxMap<K, V> = hashbrown::HashMap<K, V, BuildHasherDefault<FxHasher>>;
pub(crate) type FxSet<K> = hashbrown::HashSet<K, BuildHasherDefault<FxHasher>>;

/// Partial order shared by partitions and partition pairs.
pub trait Refines {
    /// `self <= other`: every class of `self` lies inside a class of `other`.
    /// Values of different shapes are incomparable.
    fn refines(&self, other: &Self) -> bool;
}

/// A partition of `{1..n}`, `n >= 1`, in canonical coloring form.
///
/// Ordering is lexicographic on the coloring vector, which lists coarser
/// partitions before their refinements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u32>,
    classes: u32,
}

impl Partition {
    /// The one-class partition `12...n`.
    pub fn singleton(n: usize) -> Self {
        assert!(n >= 1, "partitions need a nonempty ground set");
        Partition {
            labels: vec![0; n],
            classes: 1,
        }
    }

    /// The partition into singletons `1|2|...|n`.
    pub fn discrete(n: usize) -> Self {
        assert!(n >= 1, "partitions need a nonempty ground set");
        Partition {
            labels: (0..n as u32).collect(),
            classes: n as u32,
        }
    }

    /// Canonicalizes arbitrary class labels: `i` and `j` share a class iff
    /// `labels[i] == labels[j]`.
    pub fn from_labels(labels: &[u32]) -> Result<Self> {
        if labels.is_empty() {
            return Err(invalid!("partitions need a nonempty ground set"));
        }
        let mut out = labels.to_vec();
        let classes = canonicalize_sparse(&mut out);
        Ok(Partition {
            labels: out,
            classes,
        })
    }

    /// Accepts a 1-based coloring that is already in restricted-growth form.
    pub fn from_coloring(coloring: &[u32]) -> Result<Self> {
        if coloring.is_empty() {
            return Err(invalid!("partitions need a nonempty ground set"));
        }
        let mut max = 0u32;
        for (i, &c) in coloring.iter().enumerate() {
            if c == 0 || c > max + 1 {
                return Err(invalid!(
                    "coloring is not in restricted-growth form at position {}",
                    i + 1
                ));
            }
            max = max.max(c);
        }
        Ok(Partition {
            labels: coloring.iter().map(|c| c - 1).collect(),
            classes: max,
        })
    }

    pub(crate) fn from_canonical(labels: Vec<u32>, classes: u32) -> Self {
        debug_assert!(is_restricted_growth(&labels, classes));
        Partition { labels, classes }
    }

    /// Parses bar notation such as `14|235`. For `n > 9` the elements of a
    /// class are separated by commas (`1,10|2,3,...`).
    pub fn parse_bar(text: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(parse_err!("ground set size must be at least 1"));
        }
        let mut labels = vec![u32::MAX; n];
        for (class, part) in text.trim().split('|').enumerate() {
            let part = part.trim();
            if part.is_empty() {
                return Err(parse_err!("empty class in {text:?}"));
            }
            let elements: Vec<&str> = if part.contains(',') || n > 9 {
                part.split(',').map(str::trim).collect()
            } else {
                part.split_terminator("")
                    .skip(1)
                    .filter(|s| !s.trim().is_empty())
                    .collect()
            };
            for e in elements {
                let v: usize = e
                    .parse()
                    .map_err(|_| parse_err!("bad element {e:?} in {text:?}"))?;
                if v == 0 || v > n {
                    return Err(parse_err!("element {v} out of range 1..={n}"));
                }
                if labels[v - 1] != u32::MAX {
                    return Err(parse_err!("element {v} listed twice in {text:?}"));
                }
                labels[v - 1] = class as u32;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == u32::MAX) {
            return Err(parse_err!("element {} missing from {text:?}", i + 1));
        }
        Partition::from_labels(&labels)
    }

    /// Ground set size `n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn num_classes(&self) -> usize {
        self.classes as usize
    }

    /// 0-based class index of every element.
    #[inline]
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// The 1-based coloring vector `c(A)`.
    pub fn coloring(&self) -> Vec<u32> {
        self.labels.iter().map(|l| l + 1).collect()
    }

    /// Classes as lists of 0-based elements, in class order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i);
        }
        out
    }

    pub fn is_singleton(&self) -> bool {
        self.classes == 1
    }

    pub fn is_discrete(&self) -> bool {
        self.classes as usize == self.labels.len()
    }

    /// Characteristic matrix `P(A)`: `n x k`, entry `(i, a)` is 1 iff `c_i = a`.
    pub fn characteristic_matrix(&self) -> RationalMatrix {
        let k = self.num_classes();
        let mut data = vec![Rational::from_integer(0.into()); self.len() * k];
        for (i, &l) in self.labels.iter().enumerate() {
            data[i * k + l as usize] = Rational::one();
        }
        RationalMatrix::new(self.len(), k, data).expect("nonempty by construction")
    }

    /// `self <= other` in the refinement order.
    pub fn is_finer(&self, other: &Partition) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.refines(other))
    }

    /// Coarsest common refinement.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_len(other)?;
        let kb = other.classes;
        let mut labels: Vec<u32> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(&a, &b)| a * kb + b)
            .collect();
        let classes = if (self.classes as u64) * (kb as u64) <= 4 * self.len() as u64 + 64 {
            canonicalize_dense(&mut labels, self.classes * kb)
        } else {
            canonicalize_sparse(&mut labels)
        };
        Ok(Partition { labels, classes })
    }

    /// Finest common coarsening, by union-find over shared classes.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_len(other)?;
        let n = self.len();
        let mut uf = UnionFind::new(n);
        for p in [self, other] {
            let mut first = vec![u32::MAX; p.num_classes()];
            for (i, &l) in p.labels.iter().enumerate() {
                let f = &mut first[l as usize];
                if *f == u32::MAX {
                    *f = i as u32;
                } else {
                    uf.union(*f as usize, i);
                }
            }
        }
        let mut labels: Vec<u32> = (0..n).map(|i| uf.find(i) as u32).collect();
        let classes = canonicalize_dense(&mut labels, n as u32);
        Ok(Partition { labels, classes })
    }

    /// Number of lower covers: `sum over classes of 2^(s-1) - 1`.
    pub fn lower_cover_count(&self) -> u128 {
        self.class_sizes()
            .iter()
            .map(|&s| (1u128 << (s - 1)) - 1)
            .sum()
    }

    /// All partitions obtained by splitting one class into two nonempty parts.
    pub fn lower_covers(&self) -> Vec<Partition> {
        self.splits().collect()
    }

    /// Lazy iterator over the lower covers. Each unordered bipartition of a
    /// class is produced once: the smallest element of the class stays in
    /// the first part and the remaining elements follow the bits of a mask.
    ///
    /// # Panics
    /// If a class has more than 64 elements.
    pub fn splits(&self) -> Splits<'_> {
        let members = self.classes();
        assert!(
            members.iter().all(|c| c.len() <= 64),
            "class too large to enumerate its splits"
        );
        Splits {
            base: self,
            members: members
                .into_iter()
                .map(|c| c.into_iter().map(|e| e as u32).collect())
                .collect(),
            class: 0,
            mask: 0,
            scratch: Vec::new(),
        }
    }

    /// Splits `members` (a full class, ascending) so that `members[0]` and the
    /// members selected by `mask` (bit `j` selects `members[j + 1]`) keep the
    /// class, and the rest form a new class.
    pub(crate) fn split_class(&self, members: &[u32], mask: u64, scratch: &mut Vec<u32>) -> Partition {
        let mut labels = self.labels.clone();
        let fresh = self.classes;
        for (j, &e) in members[1..].iter().enumerate() {
            if mask >> j & 1 == 0 {
                labels[e as usize] = fresh;
            }
        }
        let classes = canonicalize_with(&mut labels, fresh + 1, scratch);
        debug_assert_eq!(classes, fresh + 1);
        Partition { labels, classes }
    }

    pub(crate) fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_classes()];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    fn check_len(&self, other: &Partition) -> Result<()> {
        if self.len() != other.len() {
            return Err(dim_err!(
                "partitions of {} and {} elements",
                self.len(),
                other.len()
            ));
        }
        Ok(())
    }

    /// Bar notation, e.g. `1|2|35|4`.
    pub fn to_bar(&self) -> String {
        alloc::format!("{self}")
    }
}

impl Refines for Partition {
    fn refines(&self, other: &Partition) -> bool {
        if self.len() != other.len() || self.classes < other.classes {
            return false;
        }
        let mut image = vec![u32::MAX; self.num_classes()];
        for (&a, &b) in self.labels.iter().zip(&other.labels) {
            let slot = &mut image[a as usize];
            if *slot == u32::MAX {
                *slot = b;
            } else if *slot != b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.len() > 9;
        for (c, class) in self.classes().iter().enumerate() {
            if c > 0 {
                f.write_str("|")?;
            }
            for (t, e) in class.iter().enumerate() {
                if wide && t > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", e + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

/// Iterator returned by [`Partition::splits`].
pub struct Splits<'a> {
    base: &'a Partition,
    members: Vec<Vec<u32>>,
    class: usize,
    mask: u64,
    scratch: Vec<u32>,
}

impl Iterator for Splits<'_> {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        loop {
            let members = self.members.get(self.class)?;
            let limit = split_limit(members.len());
            if self.mask < limit {
                let p = self.base.split_class(members, self.mask, &mut self.scratch);
                self.mask += 1;
                return Some(p);
            }
            self.class += 1;
            self.mask = 0;
        }
    }
}

/// Number of masks `0..limit` that split a class of `size` elements.
#[inline]
pub(crate) fn split_limit(size: usize) -> u64 {
    if size < 2 {
        0
    } else {
        // 2^(size-1) - 1
        u64::MAX >> (65 - size)
    }
}

/// The partition induced by the rows of `q`: `i ~ j` iff rows `i` and `j` are equal.
pub fn induced_partition(q: &RationalMatrix) -> Partition {
    let mut seen: FxMap<&[Rational], u32> = FxMap::default();
    let labels = q
        .row_iter()
        .map(|row| {
            let next = seen.len() as u32;
            *seen.entry(row).or_insert(next)
        })
        .collect();
    Partition::from_canonical(labels, seen.len() as u32)
}

/// An element of the product lattice `Pi(m) x Pi(n)`, ordered coordinatewise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionPair {
    pub rows: Partition,
    pub cols: Partition,
}

impl PartitionPair {
    pub fn new(rows: Partition, cols: Partition) -> Self {
        PartitionPair { rows, cols }
    }

    pub fn singleton(m: usize, n: usize) -> Self {
        PartitionPair::new(Partition::singleton(m), Partition::singleton(n))
    }

    pub fn discrete(m: usize, n: usize) -> Self {
        PartitionPair::new(Partition::discrete(m), Partition::discrete(n))
    }

    /// Parses `"A / B"` with each side in bar notation.
    pub fn parse(text: &str, m: usize, n: usize) -> Result<Self> {
        let (a, b) = text
            .split_once('/')
            .ok_or_else(|| parse_err!("expected \"rows / cols\", got {text:?}"))?;
        Ok(PartitionPair::new(
            Partition::parse_bar(a, m)?,
            Partition::parse_bar(b, n)?,
        ))
    }

    /// `(m, n)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn is_finer(&self, other: &PartitionPair) -> Result<bool> {
        self.check_shape(other)?;
        Ok(self.refines(other))
    }

    pub fn meet(&self, other: &PartitionPair) -> Result<PartitionPair> {
        Ok(PartitionPair::new(
            self.rows.meet(&other.rows)?,
            self.cols.meet(&other.cols)?,
        ))
    }

    pub fn join(&self, other: &PartitionPair) -> Result<PartitionPair> {
        Ok(PartitionPair::new(
            self.rows.join(&other.rows)?,
            self.cols.join(&other.cols)?,
        ))
    }

    /// Split one class on the row side (with the column side fixed), or one
    /// class on the column side (with the row side fixed).
    pub fn lower_covers(&self) -> Vec<PartitionPair> {
        let rows = self
            .rows
            .splits()
            .map(|r| PartitionPair::new(r, self.cols.clone()));
        let cols = self
            .cols
            .splits()
            .map(|c| PartitionPair::new(self.rows.clone(), c));
        rows.chain(cols).collect()
    }

    fn check_shape(&self, other: &PartitionPair) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(dim_err!(
                "partition pairs of shape {:?} and {:?}",
                self.shape(),
                other.shape()
            ));
        }
        Ok(())
    }
}

impl Refines for PartitionPair {
    fn refines(&self, other: &PartitionPair) -> bool {
        self.rows.refines(&other.rows) && self.cols.refines(&other.cols)
    }
}

impl fmt::Display for PartitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.rows, self.cols)
    }
}

impl fmt::Debug for PartitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rows, self.cols)
    }
}

fn is_restricted_growth(labels: &[u32], classes: u32) -> bool {
    let mut next = 0u32;
    for &l in labels {
        if l > next {
            return false;
        }
        if l == next {
            next += 1;
        }
    }
    next == classes
}

/// Relabels in first-occurrence order; labels must be `< bound`.
pub(crate) fn canonicalize_with(labels: &mut [u32], bound: u32, map: &mut Vec<u32>) -> u32 {
    map.clear();
    map.resize(bound as usize, u32::MAX);
    let mut next = 0u32;
    for l in labels.iter_mut() {
        let slot = &mut map[*l as usize];
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
        *l = *slot;
    }
    next
}

fn canonicalize_dense(labels: &mut [u32], bound: u32) -> u32 {
    canonicalize_with(labels, bound, &mut Vec::new())
}

fn canonicalize_sparse(labels: &mut [u32]) -> u32 {
    let mut map: FxMap<u32, u32> = FxMap::default();
    for l in labels.iter_mut() {
        let next = map.len() as u32;
        *l = *map.entry(*l).or_insert(next);
    }
    map.len() as u32
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so roots stay stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
