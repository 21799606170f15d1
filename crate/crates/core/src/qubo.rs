//! QUBO and Ising models, their conversion, and the K-way partitioning QUBO.
//!
//! Quadratic forms count each unordered pair once: a coefficient stored at
//! `(i, j)` with `i < j` contributes `c * x_i * x_j`, never twice.

use std::collections::BTreeMap;

use crate::error::{input, Result};
use crate::problem::{DoublyIndexedLabeling, ProblemGraph};
use crate::scalar::Scalar;

/// Sparse upper-triangular QUBO with a constant offset.
///
/// Energy: `offset + sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j`, `x in {0,1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboMatrix<T> {
    dim: usize,
    coeffs: BTreeMap<(usize, usize), T>,
    offset: T,
}

impl<T: Scalar> QuboMatrix<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
            offset: T::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Accumulate `value` at `(i, j)`; `(j, i)` folds onto the same entry.
    pub fn add(&mut self, i: usize, j: usize, value: T) -> Result<()> {
        if i >= self.dim || j >= self.dim {
            return input(format!(
                "QUBO index ({i},{j}) outside dimension {}",
                self.dim
            ));
        }
        let key = (i.min(j), i.max(j));
        let slot = self.coeffs.entry(key).or_insert_with(T::zero);
        *slot = *slot + value;
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.coeffs
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn set_offset(&mut self, offset: T) {
        self.offset = offset;
    }

    /// Stored entries `((i, j), value)` with `i <= j`, in index order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), T)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn energy(&self, x: &[u8]) -> Result<T> {
        if x.len() != self.dim {
            return input(format!(
                "assignment length {} != dimension {}",
                x.len(),
                self.dim
            ));
        }
        if let Some(bad) = x.iter().find(|v| **v > 1) {
            return input(format!("QUBO assignment value {bad} not in {{0,1}}"));
        }
        let mut e = self.offset;
        for (&(i, j), &c) in &self.coeffs {
            if x[i] == 1 && x[j] == 1 {
                e = e + c;
            }
        }
        Ok(e)
    }
}

/// Ising model `sum_i h_i s_i + sum_{i<j} J_ij s_i s_j`, `s in {-1,+1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel<T> {
    h: Vec<T>,
    j: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> IsingModel<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            h: vec![T::zero(); dim],
            j: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn add_field(&mut self, i: usize, value: T) -> Result<()> {
        match self.h.get_mut(i) {
            Some(slot) => {
                *slot = *slot + value;
                Ok(())
            }
            None => input(format!("field index {i} outside dimension {}", self.dim())),
        }
    }

    pub fn add_coupling(&mut self, i: usize, j: usize, value: T) -> Result<()> {
        if i >= self.dim() || j >= self.dim() {
            return input(format!(
                "coupling ({i},{j}) outside dimension {}",
                self.dim()
            ));
        }
        if i == j {
            return input(format!("coupling ({i},{i}) on the diagonal"));
        }
        let slot = self.j.entry((i.min(j), i.max(j))).or_insert_with(T::zero);
        *slot = *slot + value;
        Ok(())
    }

    pub fn field(&self, i: usize) -> T {
        self.h[i]
    }

    pub fn fields(&self) -> &[T] {
        &self.h
    }

    pub fn coupling(&self, i: usize, j: usize) -> T {
        self.j
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Stored couplings `((i, j), value)` with `i < j`.
    pub fn couplings(&self) -> impl Iterator<Item = ((usize, usize), T)> + '_ {
        self.j.iter().map(|(&k, &v)| (k, v))
    }

    pub fn energy(&self, s: &[i8]) -> Result<T> {
        if s.len() != self.dim() {
            return input(format!(
                "assignment length {} != dimension {}",
                s.len(),
                self.dim()
            ));
        }
        if let Some(bad) = s.iter().find(|v| **v != 1 && **v != -1) {
            return input(format!("spin value {bad} not in {{-1,+1}}"));
        }
        let spin = |v: i8| if v > 0 { T::one() } else { -T::one() };
        let mut e = T::zero();
        for (i, &h) in self.h.iter().enumerate() {
            e = e + h * spin(s[i]);
        }
        for (&(a, b), &c) in &self.j {
            e = e + c * spin(s[a] * s[b]);
        }
        Ok(e)
    }
}

/// Substitute `x = (1 + s) / 2`; returns the model and the constant with
/// `E_qubo(x) = E_ising(s) + constant` for every configuration.
pub fn ising_from_qubo<T: Scalar>(q: &QuboMatrix<T>) -> (IsingModel<T>, T) {
    let two = T::two();
    let four = two * two;
    let mut model = IsingModel::new(q.dim());
    let mut offset = q.offset();
    for ((i, j), c) in q.iter() {
        if i == j {
            model.h[i] = model.h[i] + c / two;
            offset = offset + c / two;
        } else {
            let quarter = c / four;
            model.h[i] = model.h[i] + quarter;
            model.h[j] = model.h[j] + quarter;
            let slot = model.j.entry((i, j)).or_insert_with(T::zero);
            *slot = *slot + quarter;
            offset = offset + quarter;
        }
    }
    (model, offset)
}

/// Graph with one vertex per variable and an edge per non-zero off-diagonal entry.
pub fn qubo_problem_graph<T: Scalar>(q: &QuboMatrix<T>) -> ProblemGraph {
    let mut g = ProblemGraph::with_vertices(q.dim());
    add_qubo_edges(&mut g, q);
    g
}

/// As [`qubo_problem_graph`], with explicit variable labels.
pub fn qubo_problem_graph_labelled<T: Scalar>(
    q: &QuboMatrix<T>,
    labels: &[String],
) -> Result<ProblemGraph> {
    if labels.len() != q.dim() {
        return input(format!("{} labels for {} variables", labels.len(), q.dim()));
    }
    let mut g = ProblemGraph::new(labels.iter().cloned())?;
    add_qubo_edges(&mut g, q);
    Ok(g)
}

fn add_qubo_edges<T: Scalar>(g: &mut ProblemGraph, q: &QuboMatrix<T>) {
    for ((i, j), c) in q.iter() {
        if i != j && !c.is_zero() {
            g.add_edge(i, j).expect("indices checked on insertion");
        }
    }
}

/// QUBO of balanced K-way graph partitioning (maximise intra-part edges).
///
/// Minimises
/// `-sum_k sum_{(i1,i2) in E} x_{i1 k} x_{i2 k} + A sum_k (sum_i x_ik - P)^2 + B sum_i (sum_k x_ik - 1)^2`
/// with `P = N / K` kept fractional. Variable `(i, k)` has index `i * K + k`;
/// the constant `A K P^2 + B N` is stored as the offset.
pub fn partitioning_qubo<T: Scalar>(
    g: &ProblemGraph,
    parts: usize,
    a: T,
    b: T,
) -> Result<(QuboMatrix<T>, DoublyIndexedLabeling)> {
    if parts < 2 {
        return input(format!("partitioning needs at least 2 parts, got {parts}"));
    }
    if a <= T::zero() || b <= T::zero() {
        return input("penalty constants must be positive");
    }
    let n = g.num_vertices();
    let labeling = DoublyIndexedLabeling::row_major(n, parts);
    let var = |i: usize, k: usize| i * parts + k;
    let p = T::from_count(n) / T::from_count(parts);
    let two = T::two();
    let mut q = QuboMatrix::new(n * parts);

    // (sum x - P)^2 = sum (1 - 2P) x + 2 sum_{i<j} x_i x_j + P^2, using x^2 = x
    for i in 0..n {
        for k in 0..parts {
            q.add(var(i, k), var(i, k), a * (T::one() - two * p) - b)?;
        }
    }
    for k in 0..parts {
        for i1 in 0..n {
            for i2 in (i1 + 1)..n {
                q.add(var(i1, k), var(i2, k), two * a)?;
            }
        }
        for (i1, i2) in g.edges() {
            q.add(var(i1, k), var(i2, k), -T::one())?;
        }
    }
    for i in 0..n {
        for k1 in 0..parts {
            for k2 in (k1 + 1)..parts {
                q.add(var(i, k1), var(i, k2), two * b)?;
            }
        }
    }
    q.set_offset(a * T::from_count(parts) * p * p + b * T::from_count(n));
    Ok((q, labeling))
}
