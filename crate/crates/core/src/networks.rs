//! Front ends that turn graphs, coupled cell networks, Cayley digraphs and
//! incidence structures into matrix families.
//!
//! Adjacency is in-adjacency throughout: `A[i][j]` counts the arrows from
//! cell `j` to cell `i`. A graph given the other way round must be
//! transposed first. All indices here are 0-based.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{dim_err, invalid, Result};
use crate::lattice::{invariant_lattice_with, EnumConfig, InvariantLattice};
use crate::linalg::{Rational, RationalMatrix};
use crate::partition::{FxSet, Partition};
use crate::refine::MatrixFamily;

/// One arrow `from -> to` of arrow type `color`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub color: usize,
}

/// A digraph with typed cells and typed arrows (parallel arrows allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredNetwork {
    n: usize,
    colors: usize,
    cell_types: Partition,
    arrows: Vec<Arrow>,
    warnings: Vec<String>,
}

impl ColoredNetwork {
    /// Validates indices and records (but accepts) consistency violations:
    /// all arrows of one type should share the head cell type and the tail
    /// cell type.
    pub fn new(cell_types: Partition, colors: usize, arrows: Vec<Arrow>) -> Result<Self> {
        let n = cell_types.len();
        if colors == 0 {
            return Err(invalid!("a network needs at least one arrow type"));
        }
        for a in &arrows {
            if a.from >= n || a.to >= n {
                return Err(invalid!(
                    "arrow {} -> {} leaves the cell range 1..={n}",
                    a.from + 1,
                    a.to + 1
                ));
            }
            if a.color >= colors {
                return Err(invalid!(
                    "arrow type {} out of range 1..={colors}",
                    a.color + 1
                ));
            }
        }
        let mut net = ColoredNetwork {
            n,
            colors,
            cell_types,
            arrows,
            warnings: Vec::new(),
        };
        net.warnings = net.consistency_warnings();
        Ok(net)
    }

    /// Network whose arrows are given by 0/1 or counting in-adjacency matrices,
    /// one per arrow type.
    pub fn from_adjacency(matrices: &[RationalMatrix], cell_types: Partition) -> Result<Self> {
        let n = cell_types.len();
        let mut arrows = Vec::new();
        for (color, a) in matrices.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(dim_err!(
                    "adjacency matrix {} is {}x{}, expected {n}x{n}",
                    color + 1,
                    a.rows(),
                    a.cols()
                ));
            }
            for i in 0..n {
                for j in 0..n {
                    let v = a.get(i, j);
                    if !v.is_integer() || v.numer().sign() == num_bigint::Sign::Minus {
                        return Err(invalid!(
                            "arrow counts must be nonnegative integers, got {v} at ({}, {})",
                            i + 1,
                            j + 1
                        ));
                    }
                    let count: usize = v
                        .to_integer()
                        .try_into()
                        .map_err(|_| invalid!("arrow count {v} too large"))?;
                    arrows.extend((0..count).map(|_| Arrow { from: j, to: i, color }));
                }
            }
        }
        ColoredNetwork::new(cell_types, matrices.len(), arrows)
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn cell_types(&self) -> &Partition {
        &self.cell_types
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Problems found at construction; never fatal.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn consistency_warnings(&self) -> Vec<String> {
        let types = self.cell_types.labels();
        let mut heads = vec![None; self.colors];
        let mut tails = vec![None; self.colors];
        let mut out = Vec::new();
        let mut flagged = vec![false; self.colors];
        for a in &self.arrows {
            let head = types[a.to];
            let tail = types[a.from];
            let h = heads[a.color].get_or_insert(head);
            let t = tails[a.color].get_or_insert(tail);
            if (*h != head || *t != tail) && !flagged[a.color] {
                flagged[a.color] = true;
                out.push(format!(
                    "arrows of type {} join cells of different types",
                    a.color + 1
                ));
            }
        }
        out
    }
}

/// One in-adjacency matrix per arrow type; entry `(i, j)` counts arrows `j -> i`.
pub fn monochrome_adjacency(net: &ColoredNetwork) -> MatrixFamily {
    let n = net.n;
    let mut counts = vec![vec![0u64; n * n]; net.colors];
    for a in &net.arrows {
        counts[a.color][a.to * n + a.from] += 1;
    }
    let matrices = counts
        .into_iter()
        .map(|c| {
            RationalMatrix::new(n, n, c.into_iter().map(|v| Rational::from_integer(v.into())).collect())
                .expect("n >= 1")
        })
        .collect();
    MatrixFamily::new(matrices).expect("at least one arrow type")
}

/// `L = D - W` with `D` the diagonal of row sums of `W`.
pub fn laplacian(w: &RationalMatrix) -> Result<RationalMatrix> {
    if !w.is_square() {
        return Err(dim_err!("Laplacian needs a square matrix, got {}x{}", w.rows(), w.cols()));
    }
    RationalMatrix::diagonal(&w.row_sums())?.sub(w)
}

/// The adjacency of `G_L`: the Laplacian `D - W` read as a weighted network.
/// Its balanced partitions are the exo-balanced partitions of `W`.
pub fn weighted_laplacian_network(w: &RationalMatrix) -> Result<RationalMatrix> {
    laplacian(w)
}

/// Replaces cell types by loops: one new arrow type per cell type class,
/// carrying a loop at each cell of that class. The result has one cell type.
pub fn cell_types_to_loops(net: &ColoredNetwork) -> ColoredNetwork {
    let mut arrows = net.arrows.clone();
    for (i, &t) in net.cell_types.labels().iter().enumerate() {
        arrows.push(Arrow {
            from: i,
            to: i,
            color: net.colors + t as usize,
        });
    }
    ColoredNetwork::new(
        Partition::singleton(net.n),
        net.colors + net.cell_types.num_classes(),
        arrows,
    )
    .expect("indices stay in range")
}

/// Invariant partitions of a family, restricted to those finer than `types`.
pub fn invariant_below(
    family: &MatrixFamily,
    types: &Partition,
    config: &EnumConfig,
) -> Result<InvariantLattice<Partition>> {
    invariant_lattice_with(family, config)?.filter_below(types)
}

/// Balanced partitions: `Pi_M` of the monochrome adjacencies below the cell types.
pub fn balanced_partitions(net: &ColoredNetwork) -> Result<InvariantLattice<Partition>> {
    balanced_partitions_with(net, &EnumConfig::default())
}

pub fn balanced_partitions_with(
    net: &ColoredNetwork,
    config: &EnumConfig,
) -> Result<InvariantLattice<Partition>> {
    invariant_below(&monochrome_adjacency(net), &net.cell_types, config)
}

/// Exo-balanced partitions: the same with each adjacency replaced by its Laplacian.
pub fn exo_balanced_partitions(net: &ColoredNetwork) -> Result<InvariantLattice<Partition>> {
    exo_balanced_partitions_with(net, &EnumConfig::default())
}

pub fn exo_balanced_partitions_with(
    net: &ColoredNetwork,
    config: &EnumConfig,
) -> Result<InvariantLattice<Partition>> {
    let family = laplacian_family(&monochrome_adjacency(net))?;
    invariant_below(&family, &net.cell_types, config)
}

/// The Laplacian of every matrix in a family.
pub fn laplacian_family(family: &MatrixFamily) -> Result<MatrixFamily> {
    MatrixFamily::new(
        family
            .matrices()
            .iter()
            .map(laplacian)
            .collect::<Result<Vec<_>>>()?,
    )
}

fn check_simple_graph(a: &RationalMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(dim_err!("adjacency must be square, got {}x{}", a.rows(), a.cols()));
    }
    if !a.is_symmetric() {
        return Err(invalid!("adjacency of a simple graph must be symmetric"));
    }
    for i in 0..a.rows() {
        if !a.get(i, i).is_zero() {
            return Err(invalid!("simple graph has a loop at vertex {}", i + 1));
        }
        for j in 0..a.cols() {
            let v = a.get(i, j);
            if !v.is_zero() && !v.is_one() {
                return Err(invalid!("adjacency entry ({}, {}) is {v}, expected 0 or 1", i + 1, j + 1));
            }
        }
    }
    Ok(())
}

/// Equitable partitions of a simple graph: `Pi_A`.
pub fn equitable_partitions(a: &RationalMatrix) -> Result<InvariantLattice<Partition>> {
    equitable_partitions_with(a, &EnumConfig::default())
}

pub fn equitable_partitions_with(
    a: &RationalMatrix,
    config: &EnumConfig,
) -> Result<InvariantLattice<Partition>> {
    check_simple_graph(a)?;
    invariant_lattice_with(&MatrixFamily::single(a.clone()), config)
}

/// Almost equitable partitions of a simple graph: `Pi_L` for the Laplacian `L`.
pub fn almost_equitable_partitions(a: &RationalMatrix) -> Result<InvariantLattice<Partition>> {
    almost_equitable_partitions_with(a, &EnumConfig::default())
}

pub fn almost_equitable_partitions_with(
    a: &RationalMatrix,
    config: &EnumConfig,
) -> Result<InvariantLattice<Partition>> {
    check_simple_graph(a)?;
    invariant_lattice_with(&MatrixFamily::single(laplacian(a)?), config)
}

/// Finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
}

impl GroupTable {
    /// `table[i][j]` is the index of `g_i g_j`. The table must be a Latin
    /// square with a two-sided identity; associativity is checked
    /// exhaustively for orders up to 256.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let g = table.len();
        if g == 0 {
            return Err(invalid!("a group needs at least one element"));
        }
        let mut flat = Vec::with_capacity(g * g);
        for (i, row) in table.iter().enumerate() {
            if row.len() != g {
                return Err(dim_err!("row {} of the group table has {} entries, expected {g}", i + 1, row.len()));
            }
            let mut seen = vec![false; g];
            for &v in row {
                if v >= g {
                    return Err(invalid!("group table entry {} out of range 1..={g}", v + 1));
                }
                if core::mem::replace(&mut seen[v], true) {
                    return Err(invalid!("row {} of the group table repeats an element", i + 1));
                }
                flat.push(v as u32);
            }
        }
        for j in 0..g {
            let mut seen = vec![false; g];
            for i in 0..g {
                if core::mem::replace(&mut seen[flat[i * g + j] as usize], true) {
                    return Err(invalid!("column {} of the group table repeats an element", j + 1));
                }
            }
        }
        let identity = (0..g)
            .find(|&e| (0..g).all(|x| flat[e * g + x] as usize == x && flat[x * g + e] as usize == x))
            .ok_or_else(|| invalid!("the group table has no identity element"))?;
        if g <= 256 {
            for a in 0..g {
                for b in 0..g {
                    let ab = flat[a * g + b] as usize;
                    for c in 0..g {
                        let bc = flat[b * g + c] as usize;
                        if flat[ab * g + c] != flat[a * g + bc] {
                            return Err(invalid!(
                                "the group table is not associative at ({}, {}, {})",
                                a + 1,
                                b + 1,
                                c + 1
                            ));
                        }
                    }
                }
            }
        }
        let inverse = (0..g)
            .map(|a| (0..g).find(|&b| flat[a * g + b] as usize == identity).unwrap() as u32)
            .collect();
        Ok(GroupTable {
            order: g,
            table: flat,
            identity,
            inverse,
        })
    }

    /// `Z_n` with element `k` at index `k`.
    pub fn cyclic(n: usize) -> Self {
        GroupTable::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
            .expect("cyclic tables are groups")
    }

    /// Dihedral group of order `2n`: index `k` is the rotation `r^k`, index
    /// `n + k` the reflection `s r^k`.
    pub fn dihedral(n: usize) -> Self {
        let idx = |refl: bool, k: usize| if refl { n + k % n } else { k % n };
        let table = (0..2 * n)
            .map(|a| {
                let (sa, ka) = (a >= n, a % n);
                (0..2 * n)
                    .map(|b| {
                        let (sb, kb) = (b >= n, b % n);
                        // s^sa r^ka s^sb r^kb = s^(sa+sb) r^(±ka + kb)
                        let k = if sb { n - ka + kb } else { ka + kb };
                        idx(sa != sb, k)
                    })
                    .collect()
            })
            .collect();
        GroupTable::new(table).expect("dihedral tables are groups")
    }

    /// `Q_8` with indices `1, i, j, k, -1, -i, -j, -k`.
    pub fn quaternion() -> Self {
        // unit products of 1, i, j, k as (sign flip, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let table = (0..8)
            .map(|a: usize| {
                (0..8)
                    .map(|b: usize| {
                        let (neg, u) = UNIT[a % 4][b % 4];
                        let neg = neg ^ (a >= 4) ^ (b >= 4);
                        u + if neg { 4 } else { 0 }
                    })
                    .collect()
            })
            .collect();
        GroupTable::new(table).expect("quaternion table is a group")
    }

    /// `G x H` with `(g, h)` at index `g * |H| + h`.
    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> Self {
        let (p, q) = (a.order, b.order);
        let table = (0..p * q)
            .map(|x| {
                (0..p * q)
                    .map(|y| a.mul(x / q, y / q) * q + b.mul(x % q, y % q))
                    .collect()
            })
            .collect();
        GroupTable::new(table).expect("products of groups are groups")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// The subgroup generated by `gens`, as a membership mask.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        member
    }

    pub fn is_generating(&self, gens: &[usize]) -> bool {
        self.closure(gens).iter().all(|&m| m)
    }

    fn check_index(&self, s: usize) -> Result<()> {
        if s >= self.order {
            return Err(invalid!("group element {} out of range 1..={}", s + 1, self.order));
        }
        Ok(())
    }
}

/// The Cayley color digraph: one arrow type per generator `s`, arrows
/// `g -> g s`, a single cell type. A non-generating `S` is accepted with a
/// warning.
pub fn cayley_network(group: &GroupTable, gens: &[usize]) -> Result<ColoredNetwork> {
    if gens.is_empty() {
        return Err(invalid!("the generating set is empty"));
    }
    for &s in gens {
        group.check_index(s)?;
    }
    let g = group.order();
    let arrows = gens
        .iter()
        .enumerate()
        .flat_map(|(color, &s)| (0..g).map(move |x| Arrow { from: x, to: group.mul(x, s), color }))
        .collect();
    let mut net = ColoredNetwork::new(Partition::singleton(g), gens.len(), arrows)?;
    if !group.is_generating(gens) {
        net.warnings.push(String::from("the given elements do not generate the group"));
    }
    Ok(net)
}

/// Partitions of the group into right cosets `Hg`, one for every subgroup
/// `H`, sorted by coloring.
///
/// Subgroups are found by growing: start from the cyclic subgroups and keep
/// adjoining one element to each subgroup found until nothing new appears.
pub fn subgroup_coset_partitions(group: &GroupTable) -> Result<Vec<Partition>> {
    let g = group.order();
    if g > 1024 {
        return Err(crate::error::Error::TooLarge(format!(
            "subgroup enumeration is limited to order 1024, got {g}"
        )));
    }
    let mut found: FxSet<Vec<bool>> = FxSet::default();
    let mut queue = VecDeque::new();
    for x in 0..g {
        let h = group.closure(&[x]);
        if found.insert(h.clone()) {
            queue.push_back(h);
        }
    }
    while let Some(h) = queue.pop_front() {
        let elems: Vec<usize> = (0..g).filter(|&x| h[x]).collect();
        for x in (0..g).filter(|&x| !h[x]) {
            let mut gens = elems.clone();
            gens.push(x);
            let bigger = group.closure(&gens);
            if found.insert(bigger.clone()) {
                queue.push_back(bigger);
            }
        }
    }
    let mut parts: Vec<Partition> = found
        .iter()
        .map(|h| {
            // x ~ y iff y x^-1 in H; label each element by the least member of Hx
            let labels: Vec<u32> = (0..g)
                .map(|x| {
                    (0..g)
                        .filter(|&e| h[e])
                        .map(|e| group.mul(e, x))
                        .min()
                        .unwrap() as u32
                })
                .collect();
            Partition::from_labels(&labels).expect("g >= 1")
        })
        .collect();
    parts.sort();
    Ok(parts)
}

/// Points, lines and one or more incidence relations between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    points: usize,
    lines: usize,
    matrices: Vec<RationalMatrix>,
}

impl IncidenceStructure {
    /// Every matrix is `points x lines` with 0/1 entries; row `i`, column `j`
    /// marks point `i` lying on line `j`.
    pub fn new(points: usize, lines: usize, matrices: Vec<RationalMatrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(invalid!("an incidence structure needs at least one relation"));
        }
        for (l, m) in matrices.iter().enumerate() {
            if (m.rows(), m.cols()) != (points, lines) {
                return Err(dim_err!(
                    "incidence matrix {} is {}x{}, expected {points}x{lines}",
                    l + 1,
                    m.rows(),
                    m.cols()
                ));
            }
            if let Some(v) = m.entries().iter().find(|v| !v.is_zero() && !v.is_one()) {
                return Err(invalid!("incidence entries must be 0 or 1, got {v}"));
            }
        }
        Ok(IncidenceStructure {
            points,
            lines,
            matrices,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn matrices(&self) -> &[RationalMatrix] {
        &self.matrices
    }
}

/// The incidence matrices as a family ready for tactical enumeration.
pub fn incidence_family(inc: &IncidenceStructure) -> MatrixFamily {
    MatrixFamily::new(inc.matrices.clone()).expect("validated at construction")
}

fn graph(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> RationalMatrix {
    let mut a = RationalMatrix::zeros(n, n).expect("n >= 1");
    for (i, j) in edges {
        a.set(i, j, Rational::one());
        a.set(j, i, Rational::one());
    }
    a
}

/// Path `P_n`, vertices in order.
pub fn path_graph(n: usize) -> RationalMatrix {
    graph(n, (1..n).map(|i| (i - 1, i)))
}

/// Cycle `C_n`, `n >= 3`.
pub fn cycle_graph(n: usize) -> RationalMatrix {
    assert!(n >= 3, "cycles need at least 3 vertices");
    graph(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Complete graph `K_n`.
pub fn complete_graph(n: usize) -> RationalMatrix {
    graph(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// Grid `P_m x P_n`; vertex `(r, c)` has index `r * n + c`.
pub fn grid_graph(m: usize, n: usize) -> RationalMatrix {
    let edges = (0..m).flat_map(|r| {
        (0..n).flat_map(move |c| {
            let v = r * n + c;
            let right = (c + 1 < n).then_some((v, v + 1));
            let down = (r + 1 < m).then_some((v, v + n));
            right.into_iter().chain(down)
        })
    });
    graph(m * n, edges)
}

/// Star `K_{1,n}` with the center at index 0.
pub fn star_graph(n: usize) -> RationalMatrix {
    graph(n + 1, (1..=n).map(|i| (0, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;

    fn p(text: &str, n: usize) -> Partition {
        Partition::parse_bar(text, n).unwrap()
    }

    fn ints(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_ints(rows).unwrap()
    }

    fn bars(l: &InvariantLattice<Partition>) -> Vec<String> {
        l.elements().iter().map(Partition::to_bar).collect()
    }

    fn arrow(from: usize, to: usize, color: usize) -> Arrow {
        Arrow { from: from - 1, to: to - 1, color: color - 1 }
    }

    #[test]
    fn monochrome_adjacency_counts_in_arrows() {
        // quotient digraph: 1 -> 1, 2 -> 1, 1 -> 2 three times
        let mut arrows = vec![arrow(1, 1, 1), arrow(2, 1, 1)];
        arrows.extend((0..3).map(|_| arrow(1, 2, 1)));
        let net = ColoredNetwork::new(Partition::singleton(2), 1, arrows).unwrap();
        assert_eq!(monochrome_adjacency(&net).matrices(), [ints(&[&[1, 1], &[3, 0]])]);

        let net = ColoredNetwork::new(Partition::singleton(2), 2, vec![arrow(1, 2, 1)]).unwrap();
        assert!(monochrome_adjacency(&net).matrices()[1].is_zero());
    }

    #[test]
    fn network_validation() {
        assert!(ColoredNetwork::new(Partition::singleton(2), 1, vec![arrow(1, 3, 1)]).is_err());
        assert!(ColoredNetwork::new(Partition::singleton(2), 1, vec![arrow(1, 2, 2)]).is_err());
        assert!(ColoredNetwork::new(Partition::singleton(2), 0, vec![]).is_err());
        let net = ColoredNetwork::new(p("1|23", 3), 1, vec![arrow(1, 2, 1), arrow(2, 3, 1)]).unwrap();
        assert_eq!(net.warnings().len(), 1);
    }

    #[test]
    fn laplacian_examples() {
        let w = ints(&[&[1, 0, -1], &[2, 0, 0], &[2, 1, 0]]);
        assert_eq!(laplacian(&w).unwrap(), ints(&[&[-1, 0, 1], &[-2, 2, 0], &[-2, -1, 3]]));
        let path = ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(laplacian(&path).unwrap(), ints(&[&[0, 0, 0], &[-1, 1, 0], &[0, -1, 1]]));
        let z = RationalMatrix::zeros(3, 3).unwrap();
        assert_eq!(laplacian(&z).unwrap(), z);
        assert!(laplacian(&RationalMatrix::zeros(2, 3).unwrap()).is_err());
    }

    #[test]
    fn weighted_laplacian_network_examples() {
        let d = RationalMatrix::diagonal(&[rational(2), rational(-3)]).unwrap();
        assert!(weighted_laplacian_network(&d).unwrap().is_zero());
        // constant row sums s give s I - W
        let w = ints(&[&[0, 2, 1], &[1, 1, 1], &[3, 0, 0]]);
        let three = RationalMatrix::diagonal(&[rational(3), rational(3), rational(3)]).unwrap();
        let expect = three.sub(&w).unwrap();
        assert_eq!(weighted_laplacian_network(&w).unwrap(), expect);
    }

    #[test]
    fn loops_replace_cell_types() {
        let net = ColoredNetwork::new(
            p("12|34", 4),
            2,
            vec![arrow(2, 1, 1), arrow(3, 1, 2), arrow(4, 1, 2)],
        )
        .unwrap();
        let looped = cell_types_to_loops(&net);
        assert!(looped.cell_types().is_singleton());
        let fam = monochrome_adjacency(&looped);
        let one = rational(1);
        let zero = rational(0);
        assert_eq!(fam.matrices()[2], RationalMatrix::diagonal(&[one.clone(), one.clone(), zero.clone(), zero.clone()]).unwrap());
        assert_eq!(fam.matrices()[3], RationalMatrix::diagonal(&[zero.clone(), zero, one.clone(), one]).unwrap());

        let single = ColoredNetwork::new(Partition::singleton(3), 1, vec![]).unwrap();
        assert_eq!(monochrome_adjacency(&cell_types_to_loops(&single)).matrices()[1], RationalMatrix::identity(3).unwrap());
        let discrete = ColoredNetwork::new(Partition::discrete(2), 1, vec![]).unwrap();
        assert_eq!(cell_types_to_loops(&discrete).colors(), 3);
    }

    #[test]
    fn forward_path_exo_balanced() {
        let net = ColoredNetwork::new(Partition::singleton(3), 1, vec![arrow(1, 2, 1), arrow(2, 3, 1)]).unwrap();
        assert_eq!(bars(&exo_balanced_partitions(&net).unwrap()), ["123", "12|3", "1|2|3"]);
        assert_eq!(bars(&balanced_partitions(&net).unwrap()), ["1|2|3"]);
    }

    #[test]
    fn complete_graph_regular() {
        let net = ColoredNetwork::from_adjacency(&[complete_graph(3)], Partition::singleton(3)).unwrap();
        assert_eq!(
            exo_balanced_partitions(&net).unwrap().elements(),
            balanced_partitions(&net).unwrap().elements()
        );
        assert_eq!(equitable_partitions(&complete_graph(4)).unwrap().len(), 15);
    }

    #[test]
    fn simple_graph_contract() {
        assert!(equitable_partitions(&ints(&[&[0, 1], &[0, 0]])).is_err());
        assert!(equitable_partitions(&ints(&[&[1, 0], &[0, 0]])).is_err());
        assert!(almost_equitable_partitions(&ints(&[&[0, 2], &[2, 0]])).is_err());
    }

    #[test]
    fn generators() {
        assert_eq!(path_graph(3), ints(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]));
        assert_eq!(cycle_graph(4).row_sums(), vec![rational(2); 4]);
        assert_eq!(star_graph(3).row_sums(), [rational(3), rational(1), rational(1), rational(1)]);
        let g = grid_graph(2, 3);
        assert_eq!(g.nonzero_count(), 2 * 7);
        assert!(g.is_symmetric());
        assert_eq!(complete_graph(5).nonzero_count(), 20);
        assert_eq!(path_graph(1), RationalMatrix::zeros(1, 1).unwrap());
    }

    #[test]
    fn group_tables() {
        let q = GroupTable::quaternion();
        assert_eq!(q.order(), 8);
        assert_eq!(q.identity(), 0);
        // i j = k, j i = -k, i i = -1
        assert_eq!(q.mul(1, 2), 3);
        assert_eq!(q.mul(2, 1), 7);
        assert_eq!(q.mul(1, 1), 4);
        assert_eq!(q.inverse(1), 5);
        assert!(q.is_generating(&[1, 2]));
        assert!(!q.is_generating(&[1]));
        assert_eq!(GroupTable::dihedral(3).order(), 6);
        assert_ne!(GroupTable::dihedral(3).mul(1, 3), GroupTable::dihedral(3).mul(3, 1));
        assert_eq!(GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(3)).order(), 6);
        assert!(GroupTable::new(vec![vec![0, 1], vec![0, 1]]).is_err());
        // Latin square without an identity: x * y = -x - y mod 3
        assert!(GroupTable::new(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).is_err());
        // Latin square with identity 0 that is not associative
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(GroupTable::new(loop5).is_err());
    }

    #[test]
    fn coset_partitions() {
        let z2: Vec<String> = subgroup_coset_partitions(&GroupTable::cyclic(2)).unwrap().iter().map(Partition::to_bar).collect();
        assert_eq!(z2, ["12", "1|2"]);
        assert_eq!(subgroup_coset_partitions(&GroupTable::cyclic(6)).unwrap().len(), 4);
        let q8: Vec<String> = subgroup_coset_partitions(&GroupTable::quaternion()).unwrap().iter().map(Partition::to_bar).collect();
        assert_eq!(q8, ["12345678", "1256|3478", "1357|2468", "1458|2367", "15|26|37|48", "1|2|3|4|5|6|7|8"]);
        // S_3 has 6 subgroups
        assert_eq!(subgroup_coset_partitions(&GroupTable::dihedral(3)).unwrap().len(), 6);
    }

    #[test]
    fn cayley_examples() {
        let z4 = GroupTable::cyclic(4);
        let net = cayley_network(&z4, &[1]).unwrap();
        assert!(net.warnings().is_empty());
        assert_eq!(
            balanced_partitions(&net).unwrap().into_elements(),
            subgroup_coset_partitions(&z4).unwrap()
        );
        let trivial = GroupTable::cyclic(1);
        let net = cayley_network(&trivial, &[0]).unwrap();
        assert_eq!(net.arrows(), [Arrow { from: 0, to: 0, color: 0 }]);
        assert!(cayley_network(&z4, &[2]).unwrap().warnings().len() == 1);
        assert!(cayley_network(&z4, &[4]).is_err());
        assert!(cayley_network(&z4, &[]).is_err());
    }

    #[test]
    fn incidence_validation() {
        let m = ints(&[&[1, 1, 1], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let inc = IncidenceStructure::new(4, 3, vec![m.clone()]).unwrap();
        assert_eq!(incidence_family(&inc).matrices(), [m]);
        assert!(IncidenceStructure::new(4, 3, vec![]).is_err());
        assert!(IncidenceStructure::new(3, 3, vec![ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])]).is_ok());
        assert!(IncidenceStructure::new(2, 2, vec![ints(&[&[2, 0], &[0, 1]])]).is_err());
        assert!(IncidenceStructure::new(2, 3, vec![ints(&[&[1, 0], &[0, 1]])]).is_err());
    }
}
