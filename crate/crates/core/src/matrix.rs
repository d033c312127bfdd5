//! Dense exact-rational matrices with 1-based indexing.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used everywhere in the crate.
pub type Rational = BigRational;

/// Shorthand for an integral rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`. Panics when `d == 0`.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `num` or `num/den` with a positive denominator. The result is reduced.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: BigInt = parse_int(num)?;
    match den {
        None => Some(Rational::from_integer(num)),
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return None;
            }
            let den: BigInt = parse_int(d)?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
    }
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// True when `x` is an integer.
pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// True when `x` is `1` or `-1`.
pub fn is_unit(x: &Rational) -> bool {
    is_integral(x) && x.numer().abs().is_one()
}

/// A dense `rows × cols` matrix of exact rationals.
///
/// Indexing is 1-based: `a[(1, 1)]` is the top-left entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = QMatrix::zeros(n, n);
        for i in 1..=n {
            a[(i, i)] = Rational::one();
        }
        a
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut a = QMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                a[(i + 1, j + 1)] = q(v);
            }
        }
        a
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "index ({i}, {j}) outside a {}x{} matrix",
            self.rows,
            self.cols
        );
        (i - 1) * self.cols + (j - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        let k = self.offset(i, j);
        self.data[k] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (1..=self.rows).all(|i| {
                (1..=self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Nonzero entries as `(i, j, value)` in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols + 1, k % self.cols + 1, v))
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (1..=self.cols).all(|j| self.get(i, j).is_zero())
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (1..=self.rows).all(|i| self.get(i, j).is_zero())
    }

    /// Column `j` as a vector (index 0 holds row 1).
    pub fn column(&self, j: usize) -> Vec<Rational> {
        (1..=self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row `i` as a vector (index 0 holds column 1).
    pub fn row(&self, i: usize) -> Vec<Rational> {
        (1..=self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.nonzeros() {
            t[(j, i)] = v.clone();
        }
        t
    }

    /// The submatrix on the given (1-based) row and column labels, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut s = QMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                s[(a + 1, b + 1)] = self.get(i, j).clone();
            }
        }
        s
    }

    /// Exact product `self · rhs`. Zero entries are skipped, which matters
    /// because connection matrices are sparse.
    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 1..=self.rows {
            for k in 1..=self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 1..=rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let o = out.offset(i, j);
                    out.data[o] += a * b;
                }
            }
        }
        out
    }

    /// True when every entry below the main diagonal vanishes.
    pub fn is_upper_triangular(&self) -> bool {
        self.nonzeros().all(|(i, j, _)| i <= j)
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.nonzeros().all(|(i, j, _)| i < j)
    }

    /// Inverse of an upper triangular matrix by back substitution, or
    /// `None` if the matrix is not square upper triangular with nonzero diagonal.
    pub fn upper_triangular_inverse(&self) -> Option<QMatrix> {
        if !self.is_square() || !self.is_upper_triangular() {
            return None;
        }
        let n = self.rows;
        if (1..=n).any(|i| self.get(i, i).is_zero()) {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        // Solve U x = e_j column by column, bottom row first.
        for j in 1..=n {
            for i in (1..=j).rev() {
                let mut acc = if i == j { Rational::one() } else { Rational::zero() };
                for k in i + 1..=j {
                    let u = self.get(i, k);
                    if !u.is_zero() {
                        acc -= u * inv.get(k, j);
                    }
                }
                inv[(i, j)] = acc / self.get(i, i);
            }
        }
        Some(inv)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 1..=a.cols {
            let Some(p) = (rank + 1..=a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            rank += 1;
            a.swap_rows(p, rank);
            let pivot = a.get(rank, col).clone();
            for i in rank + 1..=a.rows {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let factor = a.get(i, col) / &pivot;
                for j in col..=a.cols {
                    let delta = &factor * a.get(rank, j);
                    if !delta.is_zero() {
                        let o = a.offset(i, j);
                        a.data[o] -= delta;
                    }
                }
            }
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 1..=self.cols {
            let (x, y) = (self.offset(a, j), self.offset(b, j));
            self.data.swap(x, y);
        }
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(is_integral)
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        self.get(i, j)
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        let k = self.offset(i, j);
        &mut self.data[k]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 1..=self.rows {
            let row: Vec<String> = (1..=self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reduced_and_unreduced_fractions() {
        assert_eq!(parse_rational("-3"), Some(q(-3)));
        assert_eq!(parse_rational("6/4"), Some(qf(3, 2)));
        assert_eq!(parse_rational("-6/4"), Some(qf(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational("a"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("--1"), None);
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(qf(6, -4).to_string(), "-3/2");
        assert_eq!(q(2).to_string(), "2");
    }

    #[test]
    fn triangular_inverse_round_trips() {
        let u = QMatrix::from_i64_rows(&[vec![2, 1, 0], vec![0, 1, -3], vec![0, 0, 5]]);
        let inv = u.upper_triangular_inverse().unwrap();
        assert!(u.mul(&inv).is_identity());
        assert!(inv.mul(&u).is_identity());
        assert!(QMatrix::zeros(2, 2).upper_triangular_inverse().is_none());
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(QMatrix::zeros(3, 2).rank(), 0);
        assert_eq!(QMatrix::from_i64_rows(&[vec![1, -1], vec![1, -1]]).rank(), 1);
        assert_eq!(QMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0], vec![1, 1]]).rank(), 2);
    }
}
