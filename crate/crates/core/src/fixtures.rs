//! Small hand-checked connection matrices used by tests, docs and the CLI.

use crate::matrix::q;
use crate::model::{ConnectionMatrix, Partition};

fn build(subsets: &[Vec<usize>], entries: &[(usize, usize, i64)]) -> ConnectionMatrix {
    let partition = Partition::from_subsets(subsets).expect("fixture partition");
    ConnectionMatrix::from_entries(partition, entries.iter().map(|&(i, j, v)| (i, j, q(v)))).expect("fixture entries")
}

/// `m = 3`, one index per chain, no entries.
pub fn zero() -> ConnectionMatrix {
    build(&[vec![1], vec![2], vec![3]], &[])
}

/// Two wells joined by a saddle and an isolated source: the sphere.
pub fn sphere() -> ConnectionMatrix {
    build(&[vec![1, 2], vec![3], vec![4]], &[(1, 3, 1), (2, 3, -1)])
}

/// A totally unimodular single block with a change of basis in column 4.
pub fn tucb() -> ConnectionMatrix {
    build(&[vec![1, 2], vec![3, 4]], &[(1, 3, 1), (2, 3, -1), (1, 4, 1), (2, 4, -1)])
}

/// Same shape as [`tucb`], scaled so that it is not totally unimodular.
pub fn cb() -> ConnectionMatrix {
    build(&[vec![1, 2], vec![3, 4]], &[(1, 3, 2), (2, 3, -2), (1, 4, 3), (2, 4, -3)])
}

/// [`tucb`] with an empty third subset, so that it has the surface shape.
pub fn tucb_surface() -> ConnectionMatrix {
    build(&[vec![1, 2], vec![3, 4], vec![]], &[(1, 3, 1), (2, 3, -1), (1, 4, 1), (2, 4, -1)])
}

/// Grouped partition `1..3 | 4..8 | 9..10 | 11..12`.
pub fn fig3_left_partition() -> Partition {
    Partition::grouped(&[3, 5, 2, 2]).expect("fixture partition")
}

/// Scattered partition `{2,4,7} | {1,6,9,10,12} | {3,8} | {5,11}`.
pub fn fig3_right_partition() -> Partition {
    Partition::from_subsets(&[vec![2, 4, 7], vec![1, 6, 9, 10, 12], vec![3, 8], vec![5, 11]])
        .expect("fixture partition")
}
