//! Brute-force oracles and random instance generators.

pub mod linalg;
mod random;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::matrix::QMatrix;
use crate::model::{ConnectionMatrix, Position};
use crate::sweep_z::KernelProblem;

pub use random::{random_connection_matrix, random_one_block, random_tu_matrix, PartitionStyle, RandomSpec, ValueSet};

/// Primary pivot positions predicted from ranks alone.
///
/// Block by block, with the rows of the previous block's pivot columns zeroed,
/// `(i, j)` is a pivot of the block `B` exactly when
/// `ρ(i, j) - ρ(i+1, j) - ρ(i, j-1) + ρ(i+1, j-1) = 1`, where `ρ(a, b)` is the
/// rank of `B` restricted to rows `≥ a` and columns `≤ b`.
pub fn pivot_rank_oracle(matrix: &ConnectionMatrix) -> BTreeSet<Position> {
    let partition = matrix.partition();
    let a = matrix.matrix();
    let mut pivots = BTreeSet::new();
    let mut zeroed: BTreeSet<usize> = BTreeSet::new();
    for k in 1..=matrix.b() {
        let rows: Vec<usize> = partition.subset(k - 1);
        let cols: Vec<usize> = partition.subset(k);
        let mut block = QMatrix::zeros(rows.len().max(1), cols.len().max(1));
        for (r, &i) in rows.iter().enumerate() {
            if zeroed.contains(&i) {
                continue;
            }
            for (c, &j) in cols.iter().enumerate() {
                block[(r + 1, c + 1)] = a.get(i, j).clone();
            }
        }
        let nr = rows.len();
        let local_cols: Vec<usize> = (1..=cols.len()).collect();
        // rho[t][b]: rows t+1..=nr (1-based local), first b columns; rho[nr] is empty.
        let mut rho: Vec<Vec<usize>> = (0..nr)
            .map(|t| {
                let rs: Vec<usize> = (t + 1..=nr).collect();
                linalg::prefix_column_ranks(&block, &rs, &local_cols)
            })
            .collect();
        rho.push(vec![0; cols.len() + 1]);
        let mut found = BTreeSet::new();
        for t in 0..nr {
            for b in 1..=cols.len() {
                let jump = rho[t][b] + rho[t + 1][b - 1];
                if jump == rho[t + 1][b] + rho[t][b - 1] + 1 {
                    pivots.insert(Position::new(rows[t], cols[b - 1]));
                    found.insert(cols[b - 1]);
                }
            }
        }
        zeroed = found;
    }
    pivots
}

/// Result of [`ilp_brute_force`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpSolution {
    pub min: BigInt,
    pub witness: Vec<BigInt>,
}

/// Enumerates `x ∈ ℤ^c` with `|x_i| ≤ bound`, `A x = 0` and `x_c ≥ 1`, and
/// returns the least `x_c` with a witness, or `None` if nothing is in range.
///
/// `x_c` is tried in increasing order, the middle coordinates in the order
/// `0, 1, -1, 2, -2, …`, and `x_1` is solved for from the first row that uses
/// it. A zero-column instance is accepted (`c = 1` means `A x_1 = 0`).
pub fn ilp_brute_force(problem: &KernelProblem, bound: i64) -> Option<IlpSolution> {
    let c = problem.c();
    if c == 0 {
        return None;
    }
    let rows: Vec<Vec<i128>> = (1..=problem.a.rows())
        .map(|i| {
            let row = problem.a.row(i);
            let l = row.iter().fold(BigInt::from(1), |l, x| l.lcm(x.denom()));
            row.iter().map(|x| (x.numer() * (&l / x.denom())).to_i128().expect("desk-scale entries")).collect()
        })
        .collect();
    let values: Vec<i128> = std::iter::once(0).chain((1..=bound as i128).flat_map(|v| [v, -v])).collect();
    let solver_row = rows.iter().position(|r| r[0] != 0).filter(|_| c > 1);
    let mut x = vec![0i128; c];
    for lead in 1..=bound as i128 {
        x[c - 1] = lead;
        let free: Vec<usize> = if solver_row.is_some() { (1..c - 1).collect() } else { (0..c - 1).collect() };
        let mut digits = vec![0usize; free.len()];
        loop {
            for (d, &f) in digits.iter().zip(&free) {
                x[f] = values[*d];
            }
            if let Some(r) = solver_row {
                let rest: i128 = (1..c).map(|t| rows[r][t] * x[t]).sum();
                if rest % rows[r][0] == 0 {
                    x[0] = -rest / rows[r][0];
                } else {
                    x[0] = i128::MAX;
                }
            }
            if x[0].abs() <= bound as i128
                && rows.iter().all(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<i128>().is_zero())
            {
                return Some(IlpSolution {
                    min: BigInt::from(lead),
                    witness: x.iter().map(|&v| BigInt::from(v)).collect(),
                });
            }
            // Odometer over the value order, least significant digit first.
            let mut t = 0;
            loop {
                if t == digits.len() {
                    break;
                }
                digits[t] += 1;
                if digits[t] < values.len() {
                    break;
                }
                digits[t] = 0;
                t += 1;
            }
            if t == digits.len() {
                break;
            }
        }
    }
    None
}
