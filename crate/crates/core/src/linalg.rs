//! Dense exact-rational matrices.
//!
//! Entries are arbitrary-precision rationals kept in lowest terms, so equality
//! is exact. Only the handful of primitives the refinement algorithms need are
//! provided: transpose, products, horizontal augmentation and a fraction-free
//! column-space containment test.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{dim_err, invalid, parse_err, Result};
use crate::partition::Partition;

/// Exact rational scalar. Always normalized: lowest terms, positive denominator.
pub type Rational = BigRational;

/// Builds a rational from a machine integer.
pub fn rational(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Builds `num/den`, reduced. Fails on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Result<Rational> {
    if den == 0 {
        return Err(invalid!("zero denominator"));
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Parses `"p"` or `"p/q"`. The fraction must already be in lowest terms with
/// `q > 0`; anything else (floats, NaN, `2/4`, `1/0`) is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err!("not an exact rational: {text:?}"));
        }
        s.parse::<BigInt>()
            .map_err(|_| parse_err!("not an exact rational: {text:?}"))
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if !q.is_positive() {
                return Err(parse_err!("denominator must be positive in {text:?}"));
            }
            if !p.gcd(&q).is_one() {
                return Err(parse_err!("{text:?} is not in lowest terms"));
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

/// Dense row-major matrix of exact rationals with at least one row and column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(dim_err!("matrix must be at least 1x1, got {rows}x{cols}"));
        }
        if data.len() != rows * cols {
            return Err(dim_err!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            ));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    /// Builds from row vectors; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(dim_err!("row {} has {} entries, expected {n}", i + 1, r.len()));
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    /// Builds from integer rows, e.g. `from_ints(&[&[1, 0], &[0, 1]])`.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| rational(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        Ok(m)
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[Rational]) -> Result<Self> {
        let n = entries.len();
        let mut m = Self::zeros(n, n)?;
        for (i, v) in entries.iter().enumerate() {
            m.data[i * n + i] = v.clone();
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        self.row_iter()
            .map(|r| r.iter().fold(Rational::zero(), |acc, v| acc + v))
            .collect()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        RationalMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Dense product `self * rhs`.
    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(dim_err!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                rhs.rows,
                rhs.cols
            ));
        }
        let mut data = vec![Rational::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for (t, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in rhs.row(t).iter().enumerate() {
                    if !b.is_zero() {
                        data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        RationalMatrix::new(self.rows, rhs.cols, data)
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(dim_err!(
                "cannot subtract {}x{} from {}x{}",
                rhs.rows,
                rhs.cols,
                self.rows,
                self.cols
            ));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        RationalMatrix::new(self.rows, self.cols, data)
    }

    /// `M * P(A)` computed from the coloring of `A`, without building `P(A)`.
    ///
    /// Column `a` of the result is the sum of the columns of `M` whose index
    /// has color `a`. Matrices that are more than half zeros are walked through
    /// a compressed row view.
    pub fn colored_product(&self, partition: &Partition) -> Result<RationalMatrix> {
        if partition.len() != self.cols {
            return Err(dim_err!(
                "coloring of length {} does not match {} columns",
                partition.len(),
                self.cols
            ));
        }
        let k = partition.num_classes();
        let labels = partition.labels();
        let mut data = vec![Rational::zero(); self.rows * k];
        if 2 * self.nonzero_count() < self.data.len() {
            let view = CompressedRows::new(self);
            for i in 0..self.rows {
                for &(j, v) in view.row(i) {
                    data[i * k + labels[j] as usize] += v;
                }
            }
        } else {
            for i in 0..self.rows {
                for (j, v) in self.row(i).iter().enumerate() {
                    data[i * k + labels[j] as usize] += v;
                }
            }
        }
        RationalMatrix::new(self.rows, k, data)
    }

    /// Horizontal concatenation `[B1 | B2 | ...]`.
    pub fn augment(blocks: &[RationalMatrix]) -> Result<RationalMatrix> {
        let first = blocks
            .first()
            .ok_or_else(|| dim_err!("cannot augment an empty list of blocks"))?;
        let rows = first.rows;
        if let Some(b) = blocks.iter().find(|b| b.rows != rows) {
            return Err(dim_err!(
                "cannot augment blocks with {} and {} rows",
                rows,
                b.rows
            ));
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(i));
            }
        }
        RationalMatrix::new(rows, cols, data)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut work = integral_rows(self, None);
        echelon_pivots(&mut work, self.cols).len()
    }
}

/// True iff every column of `q` lies in the column space of `r`.
///
/// Eliminates `[r | q]` without fractions (Bareiss) and reports whether any
/// pivot lands in the `q` block.
pub fn column_space_contains(r: &RationalMatrix, q: &RationalMatrix) -> Result<bool> {
    if r.rows != q.rows {
        return Err(dim_err!(
            "column space test needs equal row counts, got {} and {}",
            r.rows,
            q.rows
        ));
    }
    let mut work = integral_rows(r, Some(q));
    let pivots = echelon_pivots(&mut work, r.cols + q.cols);
    Ok(pivots.iter().all(|&c| c < r.cols))
}

/// Rows of `[a | b]` scaled by the lcm of their denominators. Row scaling does
/// not change linear relations between columns.
fn integral_rows(a: &RationalMatrix, b: Option<&RationalMatrix>) -> Vec<Vec<BigInt>> {
    (0..a.rows)
        .map(|i| {
            let entries = a.row(i).iter().chain(b.into_iter().flat_map(|b| b.row(i)));
            let lcm = entries
                .clone()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            entries
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free row echelon reduction in place; returns the pivot columns.
fn echelon_pivots(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = core::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = v / &prev;
            }
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Borrowed compressed-row view over the nonzero entries of a matrix.
struct CompressedRows<'a> {
    starts: Vec<usize>,
    entries: Vec<(usize, &'a Rational)>,
}

impl<'a> CompressedRows<'a> {
    fn new(m: &'a RationalMatrix) -> Self {
        let mut starts = Vec::with_capacity(m.rows + 1);
        let mut entries = Vec::new();
        starts.push(0);
        for i in 0..m.rows {
            entries.extend(
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero()),
            );
            starts.push(entries.len());
        }
        CompressedRows { starts, entries }
    }

    fn row(&self, i: usize) -> &[(usize, &'a Rational)] {
        &self.entries[self.starts[i]..self.starts[i + 1]]
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<_> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_ints(rows).unwrap()
    }

    #[test]
    fn transpose_small() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).transpose(), m(&[&[1, 3], &[2, 4]]));
        let id = RationalMatrix::identity(3).unwrap();
        assert_eq!(id.transpose(), id);
    }

    #[test]
    fn transpose_star_incidence() {
        let inc = m(&[&[1, 1, 1], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let t = inc.transpose();
        assert_eq!((t.rows(), t.cols()), (3, 4));
        assert_eq!(t, m(&[&[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1]]));
    }

    #[test]
    fn colored_product_matches_dense() {
        let m2 = m(&[&[1, 0, -1], &[0, 2, 0], &[0, 0, 0]]);
        let a = Partition::parse_bar("13|2", 3).unwrap();
        let fast = m2.colored_product(&a).unwrap();
        let dense = m2.mul(&a.characteristic_matrix()).unwrap();
        assert_eq!(fast, dense);
        assert_eq!(fast, m(&[&[0, 0], &[0, 2], &[0, 0]]));
    }

    #[test]
    fn colored_product_discrete_is_identity_map() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(a.colored_product(&Partition::discrete(3)).unwrap(), a);
    }

    #[test]
    fn colored_product_rejects_length_mismatch() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert!(matches!(
            a.colored_product(&Partition::discrete(3)),
            Err(crate::Error::Dimension(_))
        ));
    }

    #[test]
    fn augment_blocks() {
        let a = m(&[&[1, 2], &[3, 4], &[5, 6]]);
        let b = m(&[&[7], &[8], &[9]]);
        assert_eq!(
            RationalMatrix::augment(&[a.clone(), b]).unwrap(),
            m(&[&[1, 2, 7], &[3, 4, 8], &[5, 6, 9]])
        );
        assert_eq!(RationalMatrix::augment(core::slice::from_ref(&a)).unwrap(), a);
        assert!(RationalMatrix::augment(&[a, m(&[&[1]])]).is_err());
    }

    #[test]
    fn containment_examples() {
        let p = Partition::parse_bar("13|2|4", 4).unwrap().characteristic_matrix();
        let q = m(&[&[5, 6], &[7, 8], &[5, 6], &[7, 8]]);
        assert!(column_space_contains(&p, &q).unwrap());
        let aug = RationalMatrix::augment(&[p.clone(), q]).unwrap();
        assert_eq!((aug.rows(), aug.cols()), (4, 5));
        assert_eq!(aug.rank(), 3);

        let m2 = m(&[&[1, 0, -1], &[0, 2, 0], &[0, 0, 0]]);
        let p12 = Partition::parse_bar("12|3", 3).unwrap().characteristic_matrix();
        let q = m2.mul(&p12).unwrap();
        assert!(!column_space_contains(&p12, &q).unwrap());

        let zero = RationalMatrix::zeros(3, 1).unwrap();
        assert!(column_space_contains(&m2, &zero).unwrap());
        assert!(column_space_contains(&m(&[&[1, 2], &[2, 4], &[3, 6]]), &m(&[&[-2], &[-4], &[-6]])).unwrap());
    }

    #[test]
    fn containment_with_fractions() {
        let r = RationalMatrix::from_rows(vec![
            vec![ratio(1, 2).unwrap(), rational(0)],
            vec![rational(0), ratio(1, 3).unwrap()],
            vec![ratio(1, 2).unwrap(), ratio(1, 3).unwrap()],
        ])
        .unwrap();
        assert!(column_space_contains(&r, &m(&[&[1], &[1], &[2]])).unwrap());
        assert!(!column_space_contains(&r, &m(&[&[1], &[1], &[1]])).unwrap());
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("5").unwrap(), rational(5));
        assert_eq!(parse_rational("-3/4").unwrap(), ratio(-3, 4).unwrap());
        for bad in ["2/4", "1/0", "1/-2", "1.5", "NaN", "", "x", "1e3", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn constructor_validation() {
        assert!(RationalMatrix::new(0, 1, vec![]).is_err());
        assert!(RationalMatrix::new(2, 2, vec![rational(1)]).is_err());
        assert!(RationalMatrix::from_ints(&[&[1, 2][..], &[1][..]]).is_err());
        assert!(m(&[&[1, 2]]).mul(&m(&[&[1, 2]])).is_err());
    }
}
