//! Integer kernels and the minimal-leading-coordinate problem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::QMatrix;

/// Rows of `a` scaled by the lcm of their denominators, so the integer
/// matrix has the same kernel.
pub fn integer_rows(a: &QMatrix) -> Vec<Vec<BigInt>> {
    (1..=a.rows())
        .map(|i| {
            let row = a.row(i);
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Column-operation sweep: returns a basis of `{x ∈ ℤ^c : A x = 0}`.
///
/// Unimodular column operations bring `A` to column echelon form `A U = [H | 0]`;
/// the columns of `U` facing the zero block span the integer kernel.
pub fn kernel_basis(rows: &[Vec<BigInt>], c: usize) -> Vec<Vec<BigInt>> {
    // Work column-major so column operations touch contiguous vectors.
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = (0..c).map(|j| (0..n).map(|i| rows[i][j].clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> =
        (0..c).map(|j| (0..c).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut piv = 0;
    for row in 0..n {
        if piv == c {
            break;
        }
        while let Some(best) =
            (piv..c).filter(|&j| !a[j][row].is_zero()).min_by(|&x, &y| a[x][row].abs().cmp(&a[y][row].abs()))
        {
            a.swap(piv, best);
            u.swap(piv, best);
            let mut clean = true;
            for j in piv + 1..c {
                if a[j][row].is_zero() {
                    continue;
                }
                let quot = a[j][row].div_floor(&a[piv][row]);
                sub_multiple(&mut a, j, piv, &quot);
                sub_multiple(&mut u, j, piv, &quot);
                clean &= a[j][row].is_zero();
            }
            if clean {
                piv += 1;
                break;
            }
        }
    }
    u.split_off(piv)
}

/// `cols[target] -= factor * cols[source]`.
fn sub_multiple(cols: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let src = cols[source].clone();
    for (t, s) in cols[target].iter_mut().zip(&src) {
        *t -= factor * s;
    }
}

fn sub_vec(target: &mut [BigInt], source: &[BigInt], factor: &BigInt) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= factor * s;
    }
}

/// Minimal positive last coordinate over an integer lattice given by its
/// basis, with a canonical witness. Returns `None` when every lattice vector
/// has last coordinate zero.
///
/// The achievable last coordinates form `gℤ` with `g` the gcd of the basis
/// last coordinates; a Euclid pass over the basis produces a vector with last
/// coordinate `g` and leaves the rest spanning `L₀ = {x : x_c = 0}`. The
/// witness is then reduced modulo the Hermite form of `L₀`.
pub fn min_leading(basis: Vec<Vec<BigInt>>, c: usize) -> Option<Vec<BigInt>> {
    let last = c.checked_sub(1)?;
    let mut vs = basis;
    loop {
        let best = (0..vs.len())
            .filter(|&i| !vs[i][last].is_zero())
            .min_by(|&x, &y| vs[x][last].abs().cmp(&vs[y][last].abs()))?;
        let pivot = vs[best].clone();
        let mut clean = true;
        for (i, v) in vs.iter_mut().enumerate() {
            if i == best || v[last].is_zero() {
                continue;
            }
            let quot = v[last].div_floor(&pivot[last]);
            sub_vec(v, &pivot, &quot);
            clean &= v[last].is_zero();
        }
        if clean {
            let mut x = vs.swap_remove(best);
            if x[last].is_negative() {
                x.iter_mut().for_each(|e| *e = -&*e);
            }
            let hermite = hermite_rows(vs, c);
            for (col, h) in &hermite {
                let quot = x[*col].div_floor(&h[*col]);
                sub_vec(&mut x, h, &quot);
            }
            return Some(x);
        }
    }
}

/// Row Hermite normal form of the lattice spanned by `vs`: pairs
/// `(pivot column, row)` with increasing pivot columns, positive pivots and
/// entries above each pivot reduced into `[0, pivot)`.
fn hermite_rows(mut vs: Vec<Vec<BigInt>>, c: usize) -> Vec<(usize, Vec<BigInt>)> {
    let mut out: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for col in 0..c {
        while let Some(best) =
            (0..vs.len()).filter(|&i| !vs[i][col].is_zero()).min_by(|&x, &y| vs[x][col].abs().cmp(&vs[y][col].abs()))
        {
            let pivot = vs[best].clone();
            let mut clean = true;
            for (i, v) in vs.iter_mut().enumerate() {
                if i == best || v[col].is_zero() {
                    continue;
                }
                let quot = v[col].div_floor(&pivot[col]);
                sub_vec(v, &pivot, &quot);
                clean &= v[col].is_zero();
            }
            if clean {
                let mut h = vs.swap_remove(best);
                if h[col].is_negative() {
                    h.iter_mut().for_each(|e| *e = -&*e);
                }
                for (_, prev) in out.iter_mut() {
                    let quot = prev[col].div_floor(&h[col]);
                    sub_vec(prev, &h, &quot);
                }
                out.push((col, h));
                break;
            }
        }
        vs.retain(|v| v.iter().any(|e| !e.is_zero()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn apply(rows: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
        rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let a = ints(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&a, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn full_rank_square_has_trivial_kernel() {
        let a = ints(&[&[2, 1], &[1, 1]]);
        assert!(kernel_basis(&a, 2).is_empty());
    }

    #[test]
    fn hermite_reduction_is_basis_independent() {
        // Two different bases of ℤ³.
        let x0 = vec![BigInt::from(7), BigInt::from(-5), BigInt::from(1)];
        let b1 = vec![x0.clone(), vec![1.into(), 0.into(), 0.into()], vec![0.into(), 1.into(), 0.into()]];
        let b2 = vec![
            vec![BigInt::from(3), BigInt::from(2), BigInt::from(1)],
            vec![2.into(), 1.into(), 0.into()],
            vec![1.into(), 1.into(), 0.into()],
        ];
        assert_eq!(min_leading(b1, 3), min_leading(b2, 3));
    }
}
