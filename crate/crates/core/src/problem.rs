//! Logical problem graphs, Cartesian products and product-structure detection.

use std::collections::{BTreeSet, HashMap};

use crate::error::{input, Result};

/// Undirected simple graph over labelled variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl ProblemGraph {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return input(format!("label {l:?} must be a non-empty token"));
            }
            if index.insert(l.clone(), i).is_some() {
                return input(format!("duplicate label {l:?}"));
            }
        }
        let adjacency = vec![BTreeSet::new(); labels.len()];
        Ok(Self {
            labels,
            index,
            edges: BTreeSet::new(),
            adjacency,
        })
    }

    /// Graph on vertices labelled `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string())).expect("numeric labels are unique")
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.labels.len();
        if u >= n || v >= n {
            return input(format!("edge ({u},{v}) outside vertex range 0..{n}"));
        }
        if u == v {
            return input(format!("self-loop on vertex {u}"));
        }
        let e = (u.min(v), u.max(v));
        if self.edges.insert(e) {
            self.adjacency[u].insert(v);
            self.adjacency[v].insert(u);
        }
        Ok(())
    }

    pub fn add_edge_by_label(&mut self, u: &str, v: &str) -> Result<()> {
        let (Some(a), Some(b)) = (self.index_of(u), self.index_of(v)) else {
            return input(format!("edge {u}-{v} references an unknown label"));
        };
        self.add_edge(a, b)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Edges as `(low, high)` vertex index pairs in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Edge set keyed by labels, each pair ordered lexicographically.
    pub fn labelled_edges(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.labels[u].clone(), self.labels[v].clone());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect()
    }

    /// Dense 0/1 adjacency matrix in vertex order.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.num_vertices();
        let mut a = vec![vec![0u8; n]; n];
        for &(u, v) in &self.edges {
            a[u][v] = 1;
            a[v][u] = 1;
        }
        a
    }
}

/// The complete graph `K_m` on labels `0..m`.
pub fn complete_graph(m: usize) -> Result<ProblemGraph> {
    if m == 0 {
        return input("complete graph needs at least one vertex");
    }
    let mut g = ProblemGraph::with_vertices(m);
    for u in 0..m {
        for v in (u + 1)..m {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Cartesian product `g1 □ g2`.
///
/// Vertex `(v1, v2)` has index `v1 * |V2| + v2` and label `"l1:l2"`.
pub fn cartesian_product(g1: &ProblemGraph, g2: &ProblemGraph) -> Result<ProblemGraph> {
    let (n1, n2) = (g1.num_vertices(), g2.num_vertices());
    if n1 == 0 || n2 == 0 {
        return input("cartesian product of an empty graph");
    }
    let labels = (0..n1).flat_map(|a| (0..n2).map(move |b| (a, b)));
    let mut g = ProblemGraph::new(labels.map(|(a, b)| format!("{}:{}", g1.label(a), g2.label(b))))?;
    let idx = |a: usize, b: usize| a * n2 + b;
    for a in 0..n1 {
        for (u, v) in g2.edges() {
            g.add_edge(idx(a, u), idx(a, v))?;
        }
    }
    for b in 0..n2 {
        for (u, v) in g1.edges() {
            g.add_edge(idx(u, b), idx(v, b))?;
        }
    }
    Ok(g)
}

/// `K_m □ K_n` with labels `"a:i"`, `a < m`, `i < n`.
pub fn complete_product(m: usize, n: usize) -> Result<ProblemGraph> {
    cartesian_product(&complete_graph(m)?, &complete_graph(n)?)
}

/// Bijection between variable indices and index pairs `(i, k)`, `i < rows`, `k < cols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublyIndexedLabeling {
    rows: usize,
    cols: usize,
    pairs: Vec<(usize, usize)>,
    inverse: Vec<usize>,
}

impl DoublyIndexedLabeling {
    /// Row-major labeling: variable `i * cols + k` is `(i, k)`.
    pub fn row_major(rows: usize, cols: usize) -> Self {
        let pairs = (0..rows)
            .flat_map(|i| (0..cols).map(move |k| (i, k)))
            .collect();
        let inverse = (0..rows * cols).collect();
        Self {
            rows,
            cols,
            pairs,
            inverse,
        }
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.len() != rows * cols {
            return input(format!(
                "{} pairs cannot cover a {rows}x{cols} index grid",
                pairs.len()
            ));
        }
        let mut inverse = vec![usize::MAX; rows * cols];
        for (var, &(i, k)) in pairs.iter().enumerate() {
            if i >= rows || k >= cols {
                return input(format!("pair ({i},{k}) outside {rows}x{cols}"));
            }
            let slot = &mut inverse[i * cols + k];
            if *slot != usize::MAX {
                return input(format!("pair ({i},{k}) assigned twice"));
            }
            *slot = var;
        }
        Ok(Self {
            rows,
            cols,
            pairs,
            inverse,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, var: usize) -> (usize, usize) {
        self.pairs[var]
    }

    pub fn var(&self, i: usize, k: usize) -> usize {
        self.inverse[i * self.cols + k]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `"i:k"` labels in variable order.
    pub fn labels(&self) -> Vec<String> {
        self.pairs.iter().map(|(i, k)| format!("{i}:{k}")).collect()
    }
}

/// A detected `K_m □ K_n` structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductStructure {
    pub m: usize,
    pub n: usize,
    /// Vertex index to `(a, i)`: position `a` inside copy `i` of `K_m`.
    pub labeling: DoublyIndexedLabeling,
}

/// Recognise `g` as `K_m □ K_n` with `m >= n >= 2`.
///
/// Every edge of such a product lies in exactly one maximal clique, namely the
/// edge plus its common neighbours. Those cliques split into `n` disjoint copies
/// of `K_m` and `m` disjoint copies of `K_n`, with each copy of one family
/// meeting each copy of the other in exactly one vertex. The labeling is
/// confirmed by rebuilding the product and comparing edge sets.
pub fn detect_cpcg(g: &ProblemGraph) -> Option<ProductStructure> {
    let v = g.num_vertices();
    if v < 4 {
        return None;
    }
    let d = g.degree(0);
    if (0..v).any(|u| g.degree(u) != d) {
        return None;
    }
    // m + n = d + 2, m * n = v
    let s = d + 2;
    let disc = (s * s).checked_sub(4 * v)?;
    let root = isqrt(disc);
    if root * root != disc || !(s + root).is_multiple_of(2) {
        return None;
    }
    let m = (s + root) / 2;
    let n = (s - root) / 2;
    if n < 2 || m * n != v {
        return None;
    }

    // maximal clique through each edge
    let mut clique_of: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for (a, b) in g.edges() {
        let mut c: Vec<usize> = g
            .neighbors(a)
            .intersection(g.neighbors(b))
            .copied()
            .collect();
        c.push(a);
        c.push(b);
        c.sort_unstable();
        if c.len() != m && c.len() != n {
            return None;
        }
        if !clique_of.contains_key(&c) {
            clique_of.insert(c.clone(), cliques.len());
            cliques.push(c);
        }
    }
    if cliques.len() != m + n {
        return None;
    }

    // split into two families by intersection with the first clique
    let first: BTreeSet<usize> = cliques[0].iter().copied().collect();
    let (mut same, mut cross) = (Vec::new(), Vec::new());
    for c in &cliques {
        match c.iter().filter(|x| first.contains(x)).count() {
            0 => same.push(c),
            1 => cross.push(c),
            k if k == first.len() => same.push(c),
            _ => return None,
        }
    }
    // family of K_m copies has n members, each of size m
    let (copies, positions) = if same.len() == n && same.iter().all(|c| c.len() == m) {
        (same, cross)
    } else if cross.len() == n && cross.iter().all(|c| c.len() == m) {
        (cross, same)
    } else {
        return None;
    };
    if positions.len() != m || positions.iter().any(|c| c.len() != n) {
        return None;
    }

    let mut copy_of = vec![usize::MAX; v];
    for (i, c) in copies.iter().enumerate() {
        for &x in c.iter() {
            if copy_of[x] != usize::MAX {
                return None;
            }
            copy_of[x] = i;
        }
    }
    let mut pos_of = vec![usize::MAX; v];
    for (a, c) in positions.iter().enumerate() {
        for &x in c.iter() {
            if pos_of[x] != usize::MAX {
                return None;
            }
            pos_of[x] = a;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..v).map(|x| (pos_of[x], copy_of[x])).collect();
    let labeling = DoublyIndexedLabeling::from_pairs(m, n, pairs).ok()?;

    // rebuild and compare
    let mut rebuilt = 0usize;
    for x in 0..v {
        for y in (x + 1)..v {
            let ((a, i), (b, j)) = (labeling.pair(x), labeling.pair(y));
            let adjacent = (a == b) != (i == j);
            if adjacent != g.has_edge(x, y) {
                return None;
            }
            rebuilt += adjacent as usize;
        }
    }
    (rebuilt == g.num_edges()).then_some(ProductStructure { m, n, labeling })
}

fn isqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}
