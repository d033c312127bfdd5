use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SweepError;
use crate::matrix::{q, QMatrix};
use crate::model::{ConnectionMatrix, Partition};

/// Sign normalization found for an accepted surface matrix.
///
/// Negating the rows in `row_flips` and the columns in `col_flips` gives the
/// canonical representative: every nonzero column of `Δ_{J_0 J_1}` reads
/// `+1` then `-1` from top to bottom, and every nonzero row of `Δ_{J_1 J_2}`
/// reads `+1` then `-1` from left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceProfile {
    pub wells: usize,
    pub saddles: usize,
    pub sources: usize,
    pub row_flips: BTreeSet<usize>,
    pub col_flips: BTreeSet<usize>,
}

impl SurfaceProfile {
    pub fn canonical(&self, matrix: &ConnectionMatrix) -> QMatrix {
        let mut a = matrix.matrix().clone();
        for (i, j, _) in matrix.matrix().nonzeros() {
            if self.row_flips.contains(&i) != self.col_flips.contains(&j) {
                a[(i, j)] = -a.get(i, j).clone();
            }
        }
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurfaceProperty {
    /// Entries in `{0, 1, -1}`.
    Entries,
    /// Columns of `Δ_{J_0 J_1}`.
    WellColumns,
    /// Rows of `Δ_{J_1 J_2}`.
    SourceRows,
}

impl SurfaceProperty {
    pub fn label(&self) -> &'static str {
        match self {
            SurfaceProperty::Entries => "(i)",
            SurfaceProperty::WellColumns => "(iii)",
            SurfaceProperty::SourceRows => "(iv)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceRejection {
    pub property: SurfaceProperty,
    pub detail: String,
}

impl fmt::Display for SurfaceRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "property {} violated: {}", self.property.label(), self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceVerdict {
    Accepted(SurfaceProfile),
    Rejected(SurfaceRejection),
}

impl SurfaceVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, SurfaceVerdict::Accepted(_))
    }
}

/// Checks the surface structure up to sign flips.
///
/// Each two-entry column of `Δ_{J_0 J_1}` fixes the relative sign of its two
/// row flips, and each two-entry row of `Δ_{J_1 J_2}` that of its two column
/// flips. Both systems are parity constraints on a graph, so breadth-first
/// 2-coloring decides them exactly. Saddle rows and columns are then flipped
/// to put `+1` first.
pub fn is_surface_connection_matrix(matrix: &ConnectionMatrix) -> Result<SurfaceVerdict, SweepError> {
    // Property (i) does not depend on the partition, so it is tested first.
    if let Some((at, v)) = matrix.entries().find(|(_, v)| !crate::matrix::is_unit(v)) {
        return Ok(reject(SurfaceProperty::Entries, format!("entry {v} at {at} is not in {{0, 1, -1}}")));
    }
    if matrix.b() != 2 {
        return Err(SweepError::WrongSubsetCount { found: matrix.b() + 1 });
    }
    let a = matrix.matrix();
    let p = matrix.partition();
    let (j0, j1, j2) = (p.subset(0), p.subset(1), p.subset(2));

    // Parity edges: (u, v, same) means flip(u) == flip(v) iff `same`.
    let mut row_edges = Vec::new();
    for &j in &j1 {
        let support: Vec<usize> = j0.iter().copied().filter(|&i| !a.get(i, j).is_zero()).collect();
        match support.as_slice() {
            [] => {}
            &[u, v] => row_edges.push((u, v, a.get(u, j).is_positive() != a.get(v, j).is_positive())),
            _ => {
                return Ok(reject(
                    SurfaceProperty::WellColumns,
                    format!("column {j} has {} nonzero entries in the wells block", support.len()),
                ))
            }
        }
    }
    let Some(mut row_flips) = two_color(&row_edges) else {
        return Ok(reject(SurfaceProperty::WellColumns, "no row sign flips give every column one 1 and one -1".into()));
    };

    let mut col_edges = Vec::new();
    for &i in &j1 {
        let support: Vec<usize> = j2.iter().copied().filter(|&j| !a.get(i, j).is_zero()).collect();
        match support.as_slice() {
            [] => {}
            &[u, v] => col_edges.push((u, v, a.get(i, u).is_positive() != a.get(i, v).is_positive())),
            _ => {
                return Ok(reject(
                    SurfaceProperty::SourceRows,
                    format!("row {i} has {} nonzero entries in the sources block", support.len()),
                ))
            }
        }
    }
    let Some(mut col_flips) = two_color(&col_edges) else {
        return Ok(reject(SurfaceProperty::SourceRows, "no column sign flips give every row one 1 and one -1".into()));
    };

    for &j in &j1 {
        if let Some(top) = j0.iter().copied().find(|&i| !a.get(i, j).is_zero()) {
            if a.get(top, j).is_negative() != row_flips.contains(&top) {
                col_flips.insert(j);
            }
        }
    }
    for &i in &j1 {
        if let Some(left) = j2.iter().copied().find(|&j| !a.get(i, j).is_zero()) {
            if a.get(i, left).is_negative() != col_flips.contains(&left) {
                row_flips.insert(i);
            }
        }
    }

    Ok(SurfaceVerdict::Accepted(SurfaceProfile {
        wells: j0.len(),
        saddles: j1.len(),
        sources: j2.len(),
        row_flips,
        col_flips,
    }))
}

fn reject(property: SurfaceProperty, detail: String) -> SurfaceVerdict {
    SurfaceVerdict::Rejected(SurfaceRejection { property, detail })
}

/// Labels to flip, or `None` when the parity constraints are inconsistent.
/// The smallest label of each component keeps its sign.
fn two_color(edges: &[(usize, usize, bool)]) -> Option<BTreeSet<usize>> {
    let mut adj: BTreeMap<usize, Vec<(usize, bool)>> = BTreeMap::new();
    for &(u, v, same) in edges {
        adj.entry(u).or_default().push((v, same));
        adj.entry(v).or_default().push((u, same));
    }
    let mut color: BTreeMap<usize, bool> = BTreeMap::new();
    let nodes: Vec<usize> = adj.keys().copied().collect();
    for start in nodes {
        if color.contains_key(&start) {
            continue;
        }
        color.insert(start, false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[&u];
            for &(v, same) in &adj[&u] {
                let want = if same { cu } else { !cu };
                match color.get(&v) {
                    Some(&cv) if cv != want => return None,
                    Some(_) => {}
                    None => {
                        color.insert(v, want);
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    Some(color.into_iter().filter(|&(_, f)| f).map(|(u, _)| u).collect())
}

/// Parameters of the surface generator.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSpec {
    pub seed: u64,
    pub wells: usize,
    pub saddles: usize,
    pub sources: usize,
    /// Probability that a saddle outside the sphere cell structure is connected at all.
    pub density: f64,
    /// Apply a random similarity sign change `D Δ D`.
    pub flips: bool,
    /// Interleave the three groups with a random topological labelling.
    pub scatter: bool,
}

impl SurfaceSpec {
    pub fn new(seed: u64, wells: usize, saddles: usize, sources: usize) -> Self {
        SurfaceSpec { seed, wells, saddles, sources, density: 0.5, flips: false, scatter: false }
    }
}

/// A random cell structure on the sphere, padded with extra critical points.
///
/// The sphere part is a connected planar map with `V` vertices (wells), `E`
/// edges (saddles) and `F = E + 2 - V` faces (sources), grown as a random tree
/// plus face-splitting chords. Remaining saddles join two wells or two sources
/// (never both), so `Δ² = 0` and every block is an incidence matrix.
pub fn generate_surface_matrix(spec: &SurfaceSpec) -> ConnectionMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (w, s, src) = (spec.wells, spec.saddles, spec.sources);
    let m = w + s + src;
    if m == 0 {
        // There is no empty matrix; the generator degenerates to a single isolated well.
        return ConnectionMatrix::zero(Partition::grouped(&[1, 0, 0]).expect("one label"));
    }

    // Columns of the incidence blocks, indexed by group-local numbers.
    let mut b1: Vec<Vec<(usize, i64)>> = vec![Vec::new(); s];
    let mut b2_rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); s];

    let mut used = 0;
    if w > 0 && src > 0 {
        let e = s.min(w + src - 2);
        let v = w.min(e + 1);
        let map = PlanarMap::random(&mut rng, v, e);
        let faces = map.faces();
        debug_assert_eq!(faces.len(), e + 2 - v);
        let wells: Vec<usize> = pick(&mut rng, w, v);
        let sources: Vec<usize> = pick(&mut rng, src, faces.len());
        for (edge, column) in b1.iter_mut().enumerate().take(e) {
            let (tail, head) = (map.vertex[2 * edge], map.vertex[2 * edge + 1]);
            if tail != head {
                *column = vec![(wells[head], 1), (wells[tail], -1)];
            }
        }
        for (f, cycle) in faces.iter().enumerate() {
            let mut coeff: BTreeMap<usize, i64> = BTreeMap::new();
            for &d in cycle {
                *coeff.entry(d / 2).or_default() += if d % 2 == 0 { 1 } else { -1 };
            }
            for (edge, c) in coeff {
                if c != 0 {
                    b2_rows[edge].push((sources[f], c));
                }
            }
        }
        used = e;
    }
    for saddle in used..s {
        if !rng.gen_bool(spec.density.clamp(0.0, 1.0)) {
            continue;
        }
        let primal = rng.gen_bool(0.5);
        let (pool, primal) = match (w >= 2, src >= 2) {
            (true, true) => (if primal { w } else { src }, primal),
            (true, false) => (w, true),
            (false, true) => (src, false),
            (false, false) => continue,
        };
        let ends = pick(&mut rng, pool, 2);
        let entries = vec![(ends[0], 1), (ends[1], -1)];
        if primal {
            b1[saddle] = entries;
        } else {
            b2_rows[saddle] = entries;
        }
    }
    // Shuffle saddle numbering so the sphere edges are not always first.
    let mut order: Vec<usize> = (0..s).collect();
    order.shuffle(&mut rng);

    // Nodes: wells 0..w, saddles w..w+s, sources w+s..m; arcs from row to column.
    let mut arcs: Vec<(usize, usize, i64)> = Vec::new();
    for (edge, &slot) in order.iter().enumerate() {
        for &(well, c) in &b1[edge] {
            arcs.push((well, w + slot, c));
        }
        for &(source, c) in &b2_rows[edge] {
            arcs.push((w + slot, w + s + source, c));
        }
    }
    let chain: Vec<usize> = (0..m)
        .map(|n| {
            if n < w {
                0
            } else if n < w + s {
                1
            } else {
                2
            }
        })
        .collect();
    let label = if spec.scatter { random_topological_order(&mut rng, m, &arcs) } else { (1..=m).collect() };

    let mut labelled_chain = vec![0; m];
    for n in 0..m {
        labelled_chain[label[n] - 1] = chain[n];
    }
    let partition = Partition::new(labelled_chain, 2).expect("m >= 1 labels over three groups");
    let flips: BTreeSet<usize> =
        if spec.flips { (1..=m).filter(|_| rng.gen_bool(0.5)).collect() } else { BTreeSet::new() };
    let entries = arcs.into_iter().map(|(u, v, c)| {
        let (i, j) = (label[u], label[v]);
        let sign = if flips.contains(&i) != flips.contains(&j) { -c } else { c };
        (i, j, q(sign))
    });
    ConnectionMatrix::from_entries(partition, entries).expect("generator respects the pattern")
}

/// `k` distinct numbers from `0..n` in random order.
fn pick(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, n, k).into_vec()
}

/// Labels `1..=m` for nodes such that every arc goes from a smaller to a larger label.
fn random_topological_order(rng: &mut ChaCha8Rng, m: usize, arcs: &[(usize, usize, i64)]) -> Vec<usize> {
    let mut indegree = vec![0usize; m];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(u, v, _) in arcs {
        indegree[v] += 1;
        out[u].push(v);
    }
    let mut ready: Vec<usize> = (0..m).filter(|&n| indegree[n] == 0).collect();
    let mut label = vec![0; m];
    let mut next = 1;
    while !ready.is_empty() {
        let n = ready.swap_remove(rng.gen_range(0..ready.len()));
        label[n] = next;
        next += 1;
        for &v in &out[n] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    label
}

/// Oriented combinatorial map: edge `e` has darts `2e` (at its tail) and
/// `2e + 1` (at its head); `sigma` rotates darts around their vertex and faces
/// are the cycles of `sigma ∘ alpha` with `alpha(d) = d ^ 1`.
struct PlanarMap {
    vertex: Vec<usize>,
    sigma: Vec<usize>,
}

impl PlanarMap {
    fn random(rng: &mut ChaCha8Rng, vertices: usize, edges: usize) -> Self {
        let mut map = PlanarMap { vertex: Vec::new(), sigma: Vec::new() };
        for v in 1..vertices {
            let u = rng.gen_range(0..v);
            let corner_u = map.corner_at(rng, u);
            map.add_edge(u, corner_u, v, None);
        }
        for _ in vertices.saturating_sub(1)..edges {
            if map.vertex.is_empty() {
                // A single vertex: the new edge is a loop.
                map.add_edge(0, None, 0, None);
                continue;
            }
            let faces = map.faces();
            let face = &faces[rng.gen_range(0..faces.len())];
            let a = face[rng.gen_range(0..face.len())] ^ 1;
            let b = face[rng.gen_range(0..face.len())] ^ 1;
            map.add_edge(map.vertex[a], Some(a), map.vertex[b], Some(b));
        }
        map
    }

    fn corner_at(&self, rng: &mut ChaCha8Rng, u: usize) -> Option<usize> {
        let darts: Vec<usize> = (0..self.vertex.len()).filter(|&d| self.vertex[d] == u).collect();
        darts.choose(rng).copied()
    }

    /// Adds an edge from `u` to `v`, inserting each new dart right after the
    /// given dart in the rotation (or alone when there is none).
    fn add_edge(&mut self, u: usize, after_u: Option<usize>, v: usize, after_v: Option<usize>) {
        let (x, y) = (self.vertex.len(), self.vertex.len() + 1);
        self.vertex.extend([u, v]);
        self.sigma.extend([x, y]);
        for (d, after) in [(x, after_u), (y, after_v)] {
            if let Some(a) = after {
                self.sigma[d] = self.sigma[a];
                self.sigma[a] = d;
            }
        }
        if u == v && after_u.is_none() && after_v.is_none() {
            self.sigma[x] = y;
            self.sigma[y] = x;
        }
    }

    fn faces(&self) -> Vec<Vec<usize>> {
        let n = self.vertex.len();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                cycle.push(d);
                d = self.sigma[d ^ 1];
            }
            faces.push(cycle);
        }
        if faces.is_empty() {
            // The map with one vertex and no edge has a single face.
            faces.push(Vec::new());
        }
        faces
    }
}
