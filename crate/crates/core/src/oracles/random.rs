use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::nullspace;
use crate::matrix::{q, QMatrix, Rational};
use crate::model::{ConnectionMatrix, Partition};
use crate::tu::is_totally_unimodular;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionStyle {
    /// `J_0, J_1, …` are consecutive runs.
    Grouped,
    /// A random permutation of the labels is cut into runs.
    Scattered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueSet {
    /// Nonzero entries in `{-1, 1}`.
    Unit,
    /// Nonzero entries in `{-n..=n} \ {0}`.
    Bounded(i64),
}

impl ValueSet {
    fn bound(self) -> i64 {
        match self {
            ValueSet::Unit => 1,
            ValueSet::Bounded(n) => n.max(1),
        }
    }

    fn sample(self, rng: &mut ChaCha8Rng) -> i64 {
        let n = self.bound();
        let v = rng.gen_range(1..=n);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    }
}

/// Everything a random instance depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomSpec {
    pub seed: u64,
    pub m: usize,
    pub b: usize,
    pub style: PartitionStyle,
    /// Probability that an allowable position (or, with `square_zero`, a column) is nonzero.
    pub density: f64,
    pub values: ValueSet,
    /// Draw every column from the kernel of the previous block so that `Δ² = 0`.
    pub square_zero: bool,
    /// Subset sizes `|J_0|..|J_b|`; drawn at random when absent.
    pub sizes: Option<Vec<usize>>,
    /// Keep only the block `Δ_{J_{k-1} J_k}` for this `k`.
    pub only_block: Option<usize>,
}

impl RandomSpec {
    pub fn new(seed: u64, m: usize, b: usize) -> Self {
        RandomSpec {
            seed,
            m,
            b,
            style: PartitionStyle::Grouped,
            density: 0.4,
            values: ValueSet::Bounded(3),
            square_zero: false,
            sizes: None,
            only_block: None,
        }
    }
}

/// Deterministic random connection matrix.
///
/// Panics when the spec itself is inconsistent (`m = 0`, `b > m`, or sizes
/// that do not add up to `m`).
pub fn random_connection_matrix(spec: &RandomSpec) -> ConnectionMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let partition = random_partition(&mut rng, spec);
    let m = spec.m;
    let mut a = QMatrix::zeros(m, m);
    let wanted = |k: usize| spec.only_block.is_none_or(|only| only == k);

    // Columns in increasing chain index, so kernels see finished earlier blocks.
    for k in 1..=spec.b {
        if !wanted(k) {
            continue;
        }
        let rows_all = partition.subset(k - 1);
        for j in partition.subset(k) {
            let rows: Vec<usize> = rows_all.iter().copied().filter(|&i| i < j).collect();
            if rows.is_empty() {
                continue;
            }
            if spec.square_zero && k >= 2 {
                if rng.gen_bool(spec.density.clamp(0.0, 1.0)) {
                    if let Some(col) = kernel_column(&mut rng, &a, &partition.subset(k - 2), &rows, spec.values) {
                        for (&i, v) in rows.iter().zip(col) {
                            a[(i, j)] = q(v);
                        }
                    }
                }
            } else {
                for &i in &rows {
                    if rng.gen_bool(spec.density.clamp(0.0, 1.0)) {
                        a[(i, j)] = q(spec.values.sample(&mut rng));
                    }
                }
            }
        }
    }
    ConnectionMatrix::from_matrix(partition, a).expect("generator respects the pattern")
}

fn random_partition(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> Partition {
    let (m, b) = (spec.m, spec.b);
    assert!(m > 0 && b <= m, "random spec needs 0 < m and b <= m");
    let sizes = match &spec.sizes {
        Some(s) => {
            assert_eq!(s.len(), b + 1, "one size per subset");
            assert_eq!(s.iter().sum::<usize>(), m, "sizes must add up to m");
            s.clone()
        }
        None => random_composition(rng, m, b + 1),
    };
    let mut labels: Vec<usize> = (1..=m).collect();
    if spec.style == PartitionStyle::Scattered {
        labels.shuffle(rng);
    }
    let mut chain = vec![0; m];
    let mut next = labels.into_iter();
    for (k, &s) in sizes.iter().enumerate() {
        for label in next.by_ref().take(s) {
            chain[label - 1] = k;
        }
    }
    Partition::new(chain, b).expect("sizes cover 1..=m")
}

/// `parts` sizes adding up to `n`; all positive when `n >= parts`.
fn random_composition(rng: &mut ChaCha8Rng, n: usize, parts: usize) -> Vec<usize> {
    let floor = usize::from(n >= parts);
    let mut sizes = vec![floor; parts];
    for _ in 0..n - floor * parts {
        sizes[rng.gen_range(0..parts)] += 1;
    }
    sizes
}

/// A primitive integer vector on `rows` annihilated by `Δ_{prev, rows}`, with
/// entries within the value bound, or `None` after a few failed draws.
fn kernel_column(
    rng: &mut ChaCha8Rng,
    a: &QMatrix,
    prev: &[usize],
    rows: &[usize],
    values: ValueSet,
) -> Option<Vec<i64>> {
    let basis = if prev.is_empty() {
        (0..rows.len())
            .map(|t| (0..rows.len()).map(|s| if s == t { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        nullspace(&a.submatrix(prev, rows))
    };
    if basis.is_empty() {
        return None;
    }
    // Scale every basis vector to a primitive integer vector first.
    let basis: Vec<Vec<BigInt>> = basis.iter().map(|v| primitive(v)).collect();
    let bound = values.bound();
    for _ in 0..8 {
        let mut v = vec![BigInt::zero(); rows.len()];
        for b in &basis {
            let c: i64 = rng.gen_range(-1..=1);
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += y * c;
                }
            }
        }
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            continue;
        }
        let v: Vec<BigInt> = v.into_iter().map(|x| x / &g).collect();
        if v.iter().all(|x| x.abs() <= BigInt::from(bound)) {
            return Some(v.iter().map(|x| x.to_i64().expect("bounded")).collect());
        }
    }
    None
}

fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Random unit-valued matrices with `Δ² = 0`, redrawn until the exhaustive
/// check certifies total unimodularity. Needs `m <= 16`.
pub fn random_tu_matrix(seed: u64, m: usize, b: usize, style: PartitionStyle) -> ConnectionMatrix {
    for attempt in 0.. {
        let mut spec = RandomSpec::new(seed.wrapping_mul(7919).wrapping_add(attempt), m, b);
        spec.style = style;
        spec.values = ValueSet::Unit;
        spec.square_zero = true;
        spec.density = 0.3 + 0.1 * (attempt % 4) as f64;
        let a = random_connection_matrix(&spec);
        if is_totally_unimodular(&a).expect("m within guard") {
            return a;
        }
    }
    unreachable!("the zero matrix is totally unimodular")
}

/// Random matrix with at most one nonzero block `Δ_{J_{k-1} J_k}`.
pub fn random_one_block(seed: u64, m: usize, style: PartitionStyle) -> ConnectionMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let b = rng.gen_range(1..=m.clamp(1, 4));
    let mut spec = RandomSpec::new(seed, m, b);
    spec.style = style;
    spec.only_block = Some(rng.gen_range(1..=b));
    spec.density = rng.gen_range(0.2..0.8);
    random_connection_matrix(&spec)
}
