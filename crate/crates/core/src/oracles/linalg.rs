//! Small exact linear-algebra routines written independently of [`QMatrix`]'s
//! own methods, so the oracles do not share code with what they check.

use num_traits::{One, Zero};

use crate::matrix::{QMatrix, Rational};

/// Incremental column space of vectors indexed `0..len`.
///
/// Stored vectors are kept reduced against each other's pivots, so a new
/// vector is independent exactly when something survives reduction.
pub struct ColumnSpace {
    basis: Vec<(usize, Vec<Rational>)>,
}

impl ColumnSpace {
    pub fn new() -> Self {
        ColumnSpace { basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Adds `v`; returns true when the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (p, b) in &self.basis {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone() / &b[*p];
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.basis.push((p, v));
                true
            }
            None => false,
        }
    }
}

impl Default for ColumnSpace {
    fn default() -> Self {
        Self::new()
    }
}

/// `ranks[b]` = rank of `a` restricted to rows `rows` and the first `b` of `cols`.
pub fn prefix_column_ranks(a: &QMatrix, rows: &[usize], cols: &[usize]) -> Vec<usize> {
    let mut space = ColumnSpace::new();
    let mut out = Vec::with_capacity(cols.len() + 1);
    out.push(0);
    for &j in cols {
        space.insert(rows.iter().map(|&i| a.get(i, j).clone()).collect());
        out.push(space.dim());
    }
    out
}

pub fn rank(a: &QMatrix) -> usize {
    let rows: Vec<usize> = (1..=a.rows()).collect();
    let cols: Vec<usize> = (1..=a.cols()).collect();
    *prefix_column_ranks(a, &rows, &cols).last().expect("non-empty")
}

/// Gauss–Jordan inverse of a square matrix.
pub fn inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "inverse of a non-square matrix");
    let mut aug: Vec<Vec<Rational>> = (1..=n)
        .map(|i| {
            let mut row = a.row(i);
            row.extend((1..=n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let inv = Rational::one() / &aug[c][c];
        for x in aug[c].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = aug[c].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    let mut out = QMatrix::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            out[(i, j)] = aug[i - 1][n + j - 1].clone();
        }
    }
    Some(out)
}

/// Plain triple-loop product.
pub fn product(a: &QMatrix, b: &QMatrix) -> QMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = QMatrix::zeros(a.rows(), b.cols());
    for i in 1..=a.rows() {
        for j in 1..=b.cols() {
            let mut s = Rational::zero();
            for k in 1..=a.cols() {
                s += a.get(i, k) * b.get(k, j);
            }
            out[(i, j)] = s;
        }
    }
    out
}

/// `a^{-1} b a`.
pub fn conjugate(a: &QMatrix, b: &QMatrix) -> Option<QMatrix> {
    Some(product(&product(&inverse(a)?, b), a))
}

/// Basis of the rational null space `{x : a x = 0}`, one vector per free column.
pub fn nullspace(a: &QMatrix) -> Vec<Vec<Rational>> {
    let (n, c) = (a.rows(), a.cols());
    let mut m: Vec<Vec<Rational>> = (1..=n).map(|i| a.row(i)).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        let Some(p) = (row..n).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pr = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, y) in r.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..c)
        .filter(|j| !pivots.contains(j))
        .map(|free| {
            let mut v = vec![Rational::zero(); c];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][free].clone();
            }
            v
        })
        .collect()
}
