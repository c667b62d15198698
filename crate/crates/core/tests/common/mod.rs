#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use synclat::networks::{Arrow, ColoredNetwork};
use synclat::{ratio, rational, MatrixFamily, Partition, PartitionPair, Rational, RationalMatrix};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn ints<R: AsRef<[i64]>>(rows: &[R]) -> RationalMatrix {
    RationalMatrix::from_ints(rows).unwrap()
}

pub fn family<R: AsRef<[i64]>>(ms: &[&[R]]) -> MatrixFamily {
    MatrixFamily::new(ms.iter().map(|m| ints(m)).collect()).unwrap()
}

pub fn p(text: &str, n: usize) -> Partition {
    Partition::parse_bar(text, n).unwrap()
}

pub fn pair(text: &str, m: usize, n: usize) -> PartitionPair {
    PartitionPair::parse(text, m, n).unwrap()
}

pub fn bars(ps: &[Partition]) -> Vec<String> {
    ps.iter().map(Partition::to_bar).collect()
}

/// Arrow `from -> to` with 1-based cells and colors.
pub fn arrow(from: usize, to: usize, color: usize) -> Arrow {
    Arrow { from: from - 1, to: to - 1, color: color - 1 }
}

pub fn block_matrix() -> RationalMatrix {
    ints(&[
        [1, 1, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [0, 0, 1, 1, 0],
        [0, 0, 0, 1, 1],
    ])
}

pub fn two_matrix_family() -> MatrixFamily {
    family(&[
        &[[0, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0]],
        &[[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]],
    ])
}

/// Two arrow colors on five cells of one type.
pub fn net5() -> ColoredNetwork {
    let arrows = vec![
        arrow(1, 2, 1),
        arrow(3, 4, 1),
        arrow(1, 5, 1),
        arrow(4, 1, 2),
        arrow(2, 3, 2),
    ];
    ColoredNetwork::new(Partition::singleton(5), 2, arrows).unwrap()
}

/// Two cell types `12|34`, arrows into cell 1 only.
pub fn typed4() -> ColoredNetwork {
    let arrows = vec![arrow(2, 1, 1), arrow(3, 1, 2), arrow(4, 1, 2)];
    ColoredNetwork::new(p("12|34", 4), 2, arrows).unwrap()
}

pub fn typed4_loops() -> MatrixFamily {
    family(&[
        &[[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
        &[[0, 0, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
        &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
        &[[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    ])
}

pub fn poset_matrix() -> RationalMatrix {
    ints(&[
        [0, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 0],
    ])
}

pub fn weighted_matrix() -> RationalMatrix {
    ints(&[[1, 0, -1], [2, 0, 0], [2, 1, 0]])
}

pub fn k13() -> RationalMatrix {
    ints(&[[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
}

pub fn k24_family() -> MatrixFamily {
    family(&[&[[1, 1, 0, 0], [0, 0, 1, 1]], &[[0, 0, 1, 0], [0, 1, 0, 0]]])
}

pub fn k22_family() -> MatrixFamily {
    family(&[&[[1, 0], [0, 1]], &[[0, 1], [1, 0]]])
}

pub fn fano() -> RationalMatrix {
    ints(&[
        [1, 1, 1, 0, 0, 0, 0],
        [1, 0, 0, 1, 1, 0, 0],
        [0, 1, 0, 1, 0, 1, 0],
        [0, 0, 1, 0, 1, 1, 0],
        [0, 1, 0, 0, 1, 0, 1],
        [0, 0, 1, 1, 0, 0, 1],
        [1, 0, 0, 0, 0, 1, 1],
    ])
}

/// Orbit representatives listed for the Fano incidence matrix, points / lines.
pub const FANO_REPS: [&str; 9] = [
    "1234567 / 1234567",
    "123456|7 / 167|2345",
    "1234|567 / 123456|7",
    "1234|56|7 / 16|2345|7",
    "1234|5|6|7 / 16|25|34|7",
    "123|4|567 / 124|356|7",
    "12|34|56|7 / 1|2345|6|7",
    "12|34|5|6|7 / 1|25|34|6|7",
    "1|2|3|4|5|6|7 / 1|2|34|5|6|7",
];

/// Number of rotation-and-reflection orbit partitions of the cycle `C_n`.
pub fn cycle_orbit_count(n: usize) -> usize {
    (1..=n).filter(|d| n % d == 0).map(|d| if d <= 2 { 1 } else { d + 1 }).sum()
}

// random inputs

const VALUES: [(i64, i64); 9] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (1, 2), (-3, 2), (2, 3), (5, 1)];

pub fn random_value(rng: &mut TestRng) -> Rational {
    let (a, b) = *VALUES.choose(rng).unwrap();
    ratio(a, b).unwrap()
}

pub fn random_partition(rng: &mut TestRng, n: usize) -> Partition {
    let k = rng.gen_range(1..=n) as u32;
    let labels: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_labels(&labels).unwrap()
}

/// A partition at most `depth` random splits below `a`.
pub fn random_refinement(rng: &mut TestRng, a: &Partition, depth: usize) -> Partition {
    let mut cur = a.clone();
    for _ in 0..depth {
        let covers = cur.lower_covers();
        match covers.choose(rng) {
            Some(c) => cur = c.clone(),
            None => break,
        }
    }
    cur
}

pub fn random_sparse(rng: &mut TestRng, rows: usize, cols: usize, density: f64) -> RationalMatrix {
    let data = (0..rows * cols)
        .map(|_| if rng.gen_bool(density) { random_value(rng) } else { rational(0) })
        .collect();
    RationalMatrix::new(rows, cols, data).unwrap()
}

pub fn random_01(rng: &mut TestRng, rows: usize, cols: usize, density: f64) -> RationalMatrix {
    let data = (0..rows * cols).map(|_| rational(rng.gen_bool(density) as i64)).collect();
    RationalMatrix::new(rows, cols, data).unwrap()
}

/// Random square matrix for which `a` is invariant: every block of rows
/// `I x J` has a common row sum.
pub fn planted(rng: &mut TestRng, a: &Partition) -> RationalMatrix {
    let n = a.len();
    let classes = a.classes();
    let mut m = RationalMatrix::zeros(n, n).unwrap();
    for rows in &classes {
        for cols in &classes {
            if rng.gen_bool(0.4) {
                continue;
            }
            let target = random_value(rng);
            for &i in rows {
                let mut sum = rational(0);
                for &j in &cols[..cols.len() - 1] {
                    if rng.gen_bool(0.5) {
                        let v = random_value(rng);
                        sum += &v;
                        m.set(i, j, v);
                    }
                }
                m.set(i, *cols.last().unwrap(), &target - sum);
            }
        }
    }
    m
}

/// One to three square matrices: sparse rational, planted, or 0/1, by `kind`.
pub fn random_family(rng: &mut TestRng, n: usize, kind: usize) -> MatrixFamily {
    let count = rng.gen_range(1..=3);
    let target = random_partition(rng, n);
    let ms = (0..count)
        .map(|_| match kind % 3 {
            0 => random_sparse(rng, n, n, 0.3),
            1 => planted(rng, &target),
            _ => random_01(rng, n, n, 0.3),
        })
        .collect();
    MatrixFamily::new(ms).unwrap()
}

/// One or two random 0/1 `m x n` incidence matrices.
pub fn random_incidence(rng: &mut TestRng, m: usize, n: usize) -> Vec<RationalMatrix> {
    let count = rng.gen_range(1..=2);
    (0..count).map(|_| random_01(rng, m, n, 0.4)).collect()
}
