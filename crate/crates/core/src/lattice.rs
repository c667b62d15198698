//! Split-and-cir enumeration of invariant partitions and tactical pairs.
//!
//! Starting from the coarsest invariant element, every lower cover (one class
//! split in two) is pushed through cir; anything new is queued. Every
//! invariant element is reached this way because cir of a suitable split of
//! any invariant element above it lands on it.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Display;
use core::hash::Hash;

use crate::error::{dim_err, Error, Result};
use crate::partition::{split_limit, FxSet, Partition, PartitionPair, Refines};
use crate::refine::{cir_with, tactical_cir_with, MatrixFamily, Workspace};

/// Elements an [`InvariantLattice`] can hold.
pub trait LatticeElement: Clone + Eq + Ord + Hash + Refines + Display + Send + Sync {
    /// Ground set sizes: `(n, n)` for a partition, `(m, n)` for a pair.
    fn shape(&self) -> (usize, usize);
}

impl LatticeElement for Partition {
    fn shape(&self) -> (usize, usize) {
        (self.len(), self.len())
    }
}

impl LatticeElement for PartitionPair {
    fn shape(&self) -> (usize, usize) {
        PartitionPair::shape(self)
    }
}

/// Enumeration limits and parallelism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Abort with [`Error::ElementCap`] once more elements than this are found.
    pub cap: usize,
    /// Worker threads; `0` means all available, `1` the sequential path.
    pub workers: usize,
    /// Stop tracking distinct visited partitions beyond this many.
    pub visited_cap: usize,
    /// Build the Hasse diagram of the result.
    pub cover_edges: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            cap: 1_000_000,
            workers: 0,
            visited_cap: 1 << 20,
            cover_edges: true,
        }
    }
}

/// Counters collected during enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub cir_calls: u64,
    pub splits_examined: u64,
    pub queue_peak: usize,
    /// Refinement steps summed over all cir calls, including the final
    /// step that confirms the fixed point.
    pub cir_iterations: u64,
    /// Distinct elements encountered anywhere: the start, every cir iterate
    /// and every split. `None` once the count passed the tracking cap.
    pub visited: Option<u64>,
}

/// A finite lattice of partitions (or pairs) with its cover relation.
///
/// Elements are sorted by coloring vector, so coarser elements come first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantLattice<E> {
    elements: Vec<E>,
    cover_edges: Vec<(usize, usize)>,
    stats: EnumStats,
}

impl<E: LatticeElement> InvariantLattice<E> {
    /// Sorts and deduplicates `elements` and builds their cover relation.
    pub fn from_elements(mut elements: Vec<E>) -> Self {
        elements.sort();
        elements.dedup();
        let cover_edges = hasse_edges(&elements);
        InvariantLattice {
            elements,
            cover_edges,
            stats: EnumStats::default(),
        }
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<E> {
        self.elements
    }

    /// `(coarser, finer)` index pairs of the cover relation.
    pub fn cover_edges(&self) -> &[(usize, usize)] {
        &self.cover_edges
    }

    pub fn stats(&self) -> &EnumStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.elements.binary_search(e).ok()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index_of(e).is_some()
    }

    /// The coarsest element.
    pub fn top(&self) -> Option<&E> {
        self.elements.first()
    }

    /// The finest element.
    pub fn bottom(&self) -> Option<&E> {
        self.elements.last()
    }

    /// Greatest lower bound of two elements inside this lattice, which can be
    /// coarser than their meet in the full partition lattice would suggest:
    /// it is the coarsest element below both.
    pub fn infimum(&self, a: &E, b: &E) -> Option<&E> {
        // the first common lower bound in sorted order is the coarsest one
        // when the lower bounds have a maximum
        let lower: Vec<&E> = self
            .elements
            .iter()
            .filter(|e| e.refines(a) && e.refines(b))
            .collect();
        let best = *lower.first()?;
        lower.iter().all(|e| e.refines(best)).then_some(best)
    }

    /// Least upper bound of two elements inside this lattice.
    pub fn supremum(&self, a: &E, b: &E) -> Option<&E> {
        let upper: Vec<&E> = self
            .elements
            .iter()
            .filter(|e| a.refines(e) && b.refines(e))
            .collect();
        let best = *upper.last()?;
        upper.iter().all(|e| best.refines(e)).then_some(best)
    }

    /// The elements finer than `t`, with the cover relation recomputed.
    pub fn filter_below(&self, t: &E) -> Result<InvariantLattice<E>> {
        if let Some(e) = self.elements.first() {
            if e.shape() != t.shape() {
                return Err(dim_err!(
                    "filter of shape {:?} against elements of shape {:?}",
                    t.shape(),
                    e.shape()
                ));
            }
        }
        let kept: Vec<E> = self
            .elements
            .iter()
            .filter(|e| e.refines(t))
            .cloned()
            .collect();
        let cover_edges = hasse_edges(&kept);
        Ok(InvariantLattice {
            elements: kept,
            cover_edges,
            stats: self.stats.clone(),
        })
    }
}

/// Transitive reduction of the refinement order on `elements`, as
/// `(coarser, finer)` index pairs sorted ascending. `elements` must be sorted
/// by coloring, which places every element after all elements coarser than it.
pub fn hasse_edges<E: LatticeElement>(elements: &[E]) -> Vec<(usize, usize)> {
    let k = elements.len();
    let words = k.div_ceil(64);
    // below[i]: indices of elements strictly finer than element i
    let mut below = vec![0u64; k * words];
    let mut edges = Vec::new();
    let mut covered = vec![0u64; words];
    for i in (0..k).rev() {
        for j in i + 1..k {
            if elements[j].refines(&elements[i]) {
                below[i * words + j / 64] |= 1 << (j % 64);
            }
        }
        covered.iter_mut().for_each(|w| *w = 0);
        for j in i + 1..k {
            if below[i * words + j / 64] >> (j % 64) & 1 == 1 {
                for w in 0..words {
                    covered[w] |= below[j * words + w];
                }
            }
        }
        for j in i + 1..k {
            let bit = 1u64 << (j % 64);
            if below[i * words + j / 64] & bit != 0 && covered[j / 64] & bit == 0 {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// `Pi_M(n)`: every partition whose synchrony subspace is invariant under all
/// matrices of a square family.
pub fn invariant_lattice(family: &MatrixFamily) -> Result<InvariantLattice<Partition>> {
    invariant_lattice_with(family, &EnumConfig::default())
}

pub fn invariant_lattice_with(
    family: &MatrixFamily,
    config: &EnumConfig,
) -> Result<InvariantLattice<Partition>> {
    if !family.is_square() {
        return Err(dim_err!(
            "invariant partitions need square matrices, got {}x{}",
            family.rows(),
            family.cols()
        ));
    }
    enumerate(&Square(family), config)
}

/// `Pi_M(m, n)`: every tactical decomposition of a family of `m x n` matrices.
pub fn tactical_lattice(family: &MatrixFamily) -> Result<InvariantLattice<PartitionPair>> {
    tactical_lattice_with(family, &EnumConfig::default())
}

pub fn tactical_lattice_with(
    family: &MatrixFamily,
    config: &EnumConfig,
) -> Result<InvariantLattice<PartitionPair>> {
    enumerate(&Tactical(family), config)
}

/// One class that can be split: which side it lives on and its members.
struct Unit {
    side: u8,
    members: Vec<u32>,
}

/// What the enumerator needs to know about a search space.
trait Space: Sync {
    type Elem: LatticeElement;

    fn start(&self) -> Self::Elem;

    fn units(&self, e: &Self::Elem) -> Vec<Unit>;

    fn split(&self, e: &Self::Elem, unit: &Unit, mask: u64, scratch: &mut Vec<u32>) -> Self::Elem;

    /// Coarsest invariant element below `e`; `on_step` sees every iterate.
    fn close(
        &self,
        e: &Self::Elem,
        ws: &mut Workspace,
        on_step: &mut dyn FnMut(&Self::Elem),
    ) -> Result<Self::Elem>;
}

struct Square<'a>(&'a MatrixFamily);

impl Space for Square<'_> {
    type Elem = Partition;

    fn start(&self) -> Partition {
        Partition::singleton(self.0.cols())
    }

    fn units(&self, e: &Partition) -> Vec<Unit> {
        class_units(e, 0)
    }

    fn split(&self, e: &Partition, unit: &Unit, mask: u64, scratch: &mut Vec<u32>) -> Partition {
        e.split_class(&unit.members, mask, scratch)
    }

    fn close(
        &self,
        e: &Partition,
        ws: &mut Workspace,
        on_step: &mut dyn FnMut(&Partition),
    ) -> Result<Partition> {
        cir_with(self.0, e, ws, on_step)
    }
}

struct Tactical<'a>(&'a MatrixFamily);

impl Space for Tactical<'_> {
    type Elem = PartitionPair;

    fn start(&self) -> PartitionPair {
        PartitionPair::singleton(self.0.rows(), self.0.cols())
    }

    fn units(&self, e: &PartitionPair) -> Vec<Unit> {
        let mut units = class_units(&e.rows, 0);
        units.extend(class_units(&e.cols, 1));
        units
    }

    fn split(
        &self,
        e: &PartitionPair,
        unit: &Unit,
        mask: u64,
        scratch: &mut Vec<u32>,
    ) -> PartitionPair {
        if unit.side == 0 {
            PartitionPair::new(e.rows.split_class(&unit.members, mask, scratch), e.cols.clone())
        } else {
            PartitionPair::new(e.rows.clone(), e.cols.split_class(&unit.members, mask, scratch))
        }
    }

    fn close(
        &self,
        e: &PartitionPair,
        ws: &mut Workspace,
        on_step: &mut dyn FnMut(&PartitionPair),
    ) -> Result<PartitionPair> {
        tactical_cir_with(self.0, e, ws, on_step)
    }
}

fn class_units(p: &Partition, side: u8) -> Vec<Unit> {
    p.classes()
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|c| Unit {
            side,
            members: c.into_iter().map(|e| e as u32).collect(),
        })
        .collect()
}

/// Distinct-element tracker behind [`EnumStats::visited`].
struct Visited<E> {
    seen: FxSet<E>,
    cap: usize,
    saturated: bool,
}

impl<E: LatticeElement> Visited<E> {
    fn new(cap: usize) -> Self {
        Visited {
            seen: FxSet::default(),
            cap,
            saturated: false,
        }
    }

    #[inline]
    fn active(&self) -> bool {
        !self.saturated
    }

    fn add(&mut self, e: &E) {
        if self.saturated || self.seen.contains(e) {
            return;
        }
        if self.seen.len() >= self.cap {
            self.saturated = true;
            self.seen = FxSet::default();
            return;
        }
        self.seen.insert(e.clone());
    }

    fn count(&self) -> Option<u64> {
        (!self.saturated).then_some(self.seen.len() as u64)
    }
}

fn enumerate<S: Space>(space: &S, config: &EnumConfig) -> Result<InvariantLattice<S::Elem>> {
    #[cfg(feature = "parallel")]
    {
        let workers = if config.workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            config.workers
        };
        if workers > 1 {
            return parallel::enumerate(space, config, workers);
        }
    }
    enumerate_sequential(space, config)
}

fn finish<E: LatticeElement>(
    mut elements: Vec<E>,
    stats: EnumStats,
    config: &EnumConfig,
) -> InvariantLattice<E> {
    elements.sort();
    let cover_edges = if config.cover_edges {
        hasse_edges(&elements)
    } else {
        Vec::new()
    };
    InvariantLattice {
        elements,
        cover_edges,
        stats,
    }
}

/// FIFO reference implementation.
fn enumerate_sequential<S: Space>(
    space: &S,
    config: &EnumConfig,
) -> Result<InvariantLattice<S::Elem>> {
    let mut ws = Workspace::new();
    let mut scratch = Vec::new();
    let mut stats = EnumStats::default();
    let mut visited = Visited::new(config.visited_cap);

    let start = space.start();
    visited.add(&start);
    let top = space.close(&start, &mut ws, &mut |e| visited.add(e))?;
    stats.cir_calls += 1;

    let mut seen: FxSet<S::Elem> = FxSet::default();
    let mut elements = vec![top.clone()];
    seen.insert(top.clone());
    let mut queue = VecDeque::from([top]);
    stats.queue_peak = 1;

    while let Some(a) = queue.pop_front() {
        for unit in space.units(&a) {
            for mask in 0..split_limit(unit.members.len()) {
                let b = space.split(&a, &unit, mask, &mut scratch);
                stats.splits_examined += 1;
                let c = if visited.active() {
                    visited.add(&b);
                    space.close(&b, &mut ws, &mut |e| visited.add(e))?
                } else {
                    space.close(&b, &mut ws, &mut |_| {})?
                };
                stats.cir_calls += 1;
                if !seen.contains(&c) {
                    if seen.len() >= config.cap {
                        return Err(Error::ElementCap { cap: config.cap });
                    }
                    seen.insert(c.clone());
                    elements.push(c.clone());
                    queue.push_back(c);
                    stats.queue_peak = stats.queue_peak.max(queue.len());
                }
            }
        }
    }
    stats.visited = visited.count();
    stats.cir_iterations = ws.iterations;
    Ok(finish(elements, stats, config))
}

#[cfg(feature = "parallel")]
mod parallel {
    //! Level-synchronous variant: the whole frontier is expanded at once, its
    //! splits cut into chunks that rayon spreads over the workers, and new
    //! elements are merged in task order so the result never depends on
    //! scheduling.

    use super::*;
    use rayon::prelude::*;

    const CHUNK: u64 = 4096;

    struct Task {
        elem: usize,
        unit: usize,
        lo: u64,
        hi: u64,
    }

    struct Outcome<E> {
        found: Vec<E>,
        visited: Vec<E>,
        splits: u64,
        cir_calls: u64,
        iterations: u64,
    }

    pub(super) fn enumerate<S: Space>(
        space: &S,
        config: &EnumConfig,
        workers: usize,
    ) -> Result<InvariantLattice<S::Elem>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Internal(alloc::format!("thread pool: {e}")))?;
        pool.install(|| run(space, config))
    }

    fn run<S: Space>(space: &S, config: &EnumConfig) -> Result<InvariantLattice<S::Elem>> {
        let mut stats = EnumStats::default();
        let mut visited = Visited::new(config.visited_cap);
        let start = space.start();
        visited.add(&start);
        let mut ws = Workspace::new();
        let top = space.close(&start, &mut ws, &mut |e| visited.add(e))?;
        stats.cir_calls += 1;
        stats.cir_iterations = ws.iterations;

        let mut seen: FxSet<S::Elem> = FxSet::default();
        seen.insert(top.clone());
        let mut elements = vec![top.clone()];
        let mut frontier = vec![top];
        stats.queue_peak = 1;

        while !frontier.is_empty() {
            let units: Vec<Vec<Unit>> = frontier.iter().map(|e| space.units(e)).collect();
            let mut tasks = Vec::new();
            for (elem, us) in units.iter().enumerate() {
                for (unit, u) in us.iter().enumerate() {
                    let limit = split_limit(u.members.len());
                    let mut lo = 0;
                    while lo < limit {
                        let hi = limit.min(lo + CHUNK);
                        tasks.push(Task { elem, unit, lo, hi });
                        lo = hi;
                    }
                }
            }
            let track = visited.active();
            let local_cap = config.visited_cap;
            let outcomes: Vec<Result<Outcome<S::Elem>>> = tasks
                .par_iter()
                .map_init(
                    || (Workspace::new(), Vec::new()),
                    |(ws, scratch), t| {
                        let a = &frontier[t.elem];
                        let unit = &units[t.elem][t.unit];
                        let mut local: FxSet<S::Elem> = FxSet::default();
                        let mut out = Outcome {
                            found: Vec::new(),
                            visited: Vec::new(),
                            splits: 0,
                            cir_calls: 0,
                            iterations: 0,
                        };
                        let before = ws.iterations;
                        let mut seen_here: FxSet<S::Elem> = FxSet::default();
                        for mask in t.lo..t.hi {
                            let b = space.split(a, unit, mask, scratch);
                            out.splits += 1;
                            let c = if track && seen_here.len() <= local_cap {
                                let mut note = |e: &S::Elem| {
                                    if seen_here.insert(e.clone()) {
                                        out.visited.push(e.clone());
                                    }
                                };
                                note(&b);
                                space.close(&b, ws, &mut note)?
                            } else {
                                space.close(&b, ws, &mut |_| {})?
                            };
                            out.cir_calls += 1;
                            if !seen.contains(&c) && local.insert(c.clone()) {
                                out.found.push(c);
                            }
                        }
                        out.iterations = ws.iterations - before;
                        Ok(out)
                    },
                )
                .collect();

            let mut next = Vec::new();
            for outcome in outcomes {
                let outcome = outcome?;
                stats.splits_examined += outcome.splits;
                stats.cir_calls += outcome.cir_calls;
                stats.cir_iterations += outcome.iterations;
                if track {
                    if outcome.visited.len() > local_cap {
                        visited.saturated = true;
                    }
                    for e in &outcome.visited {
                        visited.add(e);
                    }
                }
                for c in outcome.found {
                    if seen.contains(&c) {
                        continue;
                    }
                    if seen.len() >= config.cap {
                        return Err(Error::ElementCap { cap: config.cap });
                    }
                    seen.insert(c.clone());
                    elements.push(c.clone());
                    next.push(c);
                }
            }
            stats.queue_peak = stats.queue_peak.max(next.len());
            frontier = next;
        }
        stats.visited = visited.count();
        Ok(finish(elements, stats, config))
    }
}
