//! Chimera hardware graphs `C(N, M, L)`: coordinates, adjacency and fault masks.
//!
//! A chip is an `N x M` grid of `K(L,L)` unit cells. Each cell has two shores of
//! `L` qubits. The vertical shore (`V`) couples to the same wire in the cells
//! above and below, the horizontal shore (`H`) to the same wire in the cells to
//! the left and right. Inside a cell every `V` qubit couples to every `H` qubit.
//!
//! Linear ids are row-major over cells, `V` before `H`:
//! `id = 2L * (row * M + col) + shore * L + wire`.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Linear qubit index on a chip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub u32);

impl QubitId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shore {
    /// Couples vertically between rows.
    V = 0,
    /// Couples horizontally between columns.
    H = 1,
}

impl Shore {
    pub fn other(self) -> Shore {
        match self {
            Shore::V => Shore::H,
            Shore::H => Shore::V,
        }
    }
}

/// Cell-level coordinate of a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitCoord {
    pub row: usize,
    pub col: usize,
    pub shore: Shore,
    pub wire: usize,
}

impl QubitCoord {
    pub fn new(row: usize, col: usize, shore: Shore, wire: usize) -> Self {
        Self {
            row,
            col,
            shore,
            wire,
        }
    }

    pub fn v(row: usize, col: usize, wire: usize) -> Self {
        Self::new(row, col, Shore::V, wire)
    }

    pub fn h(row: usize, col: usize, wire: usize) -> Self {
        Self::new(row, col, Shore::H, wire)
    }

    /// Translate by a cell offset.
    pub fn offset(self, drow: usize, dcol: usize) -> Self {
        Self {
            row: self.row + drow,
            col: self.col + dcol,
            ..self
        }
    }
}

/// Dimensions of a Chimera chip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChimeraSpec {
    pub rows: usize,
    pub cols: usize,
    #[serde(rename = "shore")]
    pub shore_size: usize,
}

impl ChimeraSpec {
    pub fn new(rows: usize, cols: usize, shore_size: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return input(format!(
                "chip must have at least one cell, got {rows}x{cols}"
            ));
        }
        if shore_size < 2 {
            return input(format!("shore size must be at least 2, got {shore_size}"));
        }
        let spec = Self {
            rows,
            cols,
            shore_size,
        };
        if spec.num_qubits() > u32::MAX as usize {
            return input("chip too large for 32-bit qubit ids");
        }
        Ok(spec)
    }

    /// Square chip `C(n, n, L)`.
    pub fn square(n: usize, shore_size: usize) -> Result<Self> {
        Self::new(n, n, shore_size)
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.shore_size * self.rows * self.cols
    }

    /// Coupler count of the fault-free chip.
    pub fn ideal_coupler_count(&self) -> usize {
        let (n, m, l) = (self.rows, self.cols, self.shore_size);
        n * m * l * l + l * (m * (n - 1) + n * (m - 1))
    }

    pub fn contains_cell(&self, row: usize, col: usize) -> bool {
        row < self.rows && col < self.cols
    }

    pub fn contains(&self, q: QubitId) -> bool {
        q.index() < self.num_qubits()
    }

    pub fn id(&self, c: QubitCoord) -> QubitId {
        debug_assert!(self.contains_cell(c.row, c.col) && c.wire < self.shore_size);
        let l = self.shore_size;
        QubitId((2 * l * (c.row * self.cols + c.col) + c.shore as usize * l + c.wire) as u32)
    }

    /// Checked version of [`ChimeraSpec::id`].
    pub fn try_id(&self, c: QubitCoord) -> Option<QubitId> {
        (self.contains_cell(c.row, c.col) && c.wire < self.shore_size).then(|| self.id(c))
    }

    pub fn coord(&self, q: QubitId) -> QubitCoord {
        let l = self.shore_size;
        let i = q.index();
        let cell = i / (2 * l);
        let within = i % (2 * l);
        QubitCoord {
            row: cell / self.cols,
            col: cell % self.cols,
            shore: if within < l { Shore::V } else { Shore::H },
            wire: within % l,
        }
    }

    /// Whether `a` and `b` are coupled on the fault-free chip.
    pub fn ideal_adjacent(&self, a: QubitId, b: QubitId) -> bool {
        if !self.contains(a) || !self.contains(b) || a == b {
            return false;
        }
        let (ca, cb) = (self.coord(a), self.coord(b));
        if ca.row == cb.row && ca.col == cb.col {
            return ca.shore != cb.shore;
        }
        if ca.shore != cb.shore || ca.wire != cb.wire {
            return false;
        }
        match ca.shore {
            Shore::V => ca.col == cb.col && ca.row.abs_diff(cb.row) == 1,
            Shore::H => ca.row == cb.row && ca.col.abs_diff(cb.col) == 1,
        }
    }

    fn ideal_neighbor_coords(&self, c: QubitCoord) -> Vec<QubitCoord> {
        let mut out: Vec<QubitCoord> = (0..self.shore_size)
            .map(|w| QubitCoord::new(c.row, c.col, c.shore.other(), w))
            .collect();
        match c.shore {
            Shore::V => {
                if c.row > 0 {
                    out.push(QubitCoord::v(c.row - 1, c.col, c.wire));
                }
                if c.row + 1 < self.rows {
                    out.push(QubitCoord::v(c.row + 1, c.col, c.wire));
                }
            }
            Shore::H => {
                if c.col > 0 {
                    out.push(QubitCoord::h(c.row, c.col - 1, c.wire));
                }
                if c.col + 1 < self.cols {
                    out.push(QubitCoord::h(c.row, c.col + 1, c.wire));
                }
            }
        }
        out
    }
}

impl fmt::Display for ChimeraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{},{})", self.rows, self.cols, self.shore_size)
    }
}

/// A hardware fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    Qubit(QubitId),
    Coupler(QubitId, QubitId),
}

fn ordered(a: QubitId, b: QubitId) -> (QubitId, QubitId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A Chimera chip together with its inoperable qubits and couplers.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct HardwareGraph {
    spec: ChimeraSpec,
    dead_qubits: BTreeSet<QubitId>,
    dead_couplers: BTreeSet<(QubitId, QubitId)>,
    alive: Vec<bool>,
    adjacency: Vec<Vec<QubitId>>,
}

impl HardwareGraph {
    pub fn ideal(spec: ChimeraSpec) -> Self {
        Self::build(spec, &[]).expect("fault-free chip always builds")
    }

    /// Build a chip, removing the given faults.
    pub fn build(spec: ChimeraSpec, faults: &[Fault]) -> Result<Self> {
        let mut dead_qubits = BTreeSet::new();
        let mut dead_couplers = BTreeSet::new();
        for fault in faults {
            match *fault {
                Fault::Qubit(q) => {
                    if !spec.contains(q) {
                        return input(format!("dead qubit {q} outside {spec}"));
                    }
                    dead_qubits.insert(q);
                }
                Fault::Coupler(a, b) => {
                    if !spec.contains(a) || !spec.contains(b) {
                        return input(format!("dead coupler {a}-{b} outside {spec}"));
                    }
                    if !spec.ideal_adjacent(a, b) {
                        return input(format!("{a}-{b} is not a coupler of {spec}"));
                    }
                    dead_couplers.insert(ordered(a, b));
                }
            }
        }

        let n = spec.num_qubits();
        let mut alive = vec![true; n];
        for q in &dead_qubits {
            alive[q.index()] = false;
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, slot) in adjacency.iter_mut().enumerate() {
            if !alive[i] {
                continue;
            }
            let q = QubitId(i as u32);
            let mut nbrs: Vec<QubitId> = spec
                .ideal_neighbor_coords(spec.coord(q))
                .into_iter()
                .map(|c| spec.id(c))
                .filter(|p| alive[p.index()] && !dead_couplers.contains(&ordered(q, *p)))
                .collect();
            nbrs.sort_unstable();
            *slot = nbrs;
        }

        Ok(Self {
            spec,
            dead_qubits,
            dead_couplers,
            alive,
            adjacency,
        })
    }

    /// Chip with `count` distinct dead qubits drawn uniformly from a seeded stream.
    pub fn with_random_faults(spec: ChimeraSpec, count: usize, seed: u64) -> Result<Self> {
        Self::build(spec, &random_fault_mask(spec, count, seed)?)
    }

    pub fn spec(&self) -> ChimeraSpec {
        self.spec
    }

    pub fn dead_qubits(&self) -> &BTreeSet<QubitId> {
        &self.dead_qubits
    }

    pub fn dead_couplers(&self) -> &BTreeSet<(QubitId, QubitId)> {
        &self.dead_couplers
    }

    pub fn faults(&self) -> Vec<Fault> {
        self.dead_qubits
            .iter()
            .map(|&q| Fault::Qubit(q))
            .chain(
                self.dead_couplers
                    .iter()
                    .map(|&(a, b)| Fault::Coupler(a, b)),
            )
            .collect()
    }

    pub fn has_faults(&self) -> bool {
        !self.dead_qubits.is_empty() || !self.dead_couplers.is_empty()
    }

    pub fn num_qubits(&self) -> usize {
        self.spec.num_qubits()
    }

    pub fn operable_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    pub fn is_operable(&self, q: QubitId) -> bool {
        self.alive.get(q.index()).copied().unwrap_or(false)
    }

    pub fn is_coord_operable(&self, c: QubitCoord) -> bool {
        self.spec.try_id(c).is_some_and(|q| self.is_operable(q))
    }

    /// Operable neighbours of an operable qubit, sorted by id.
    pub fn neighbors(&self, q: QubitId) -> Result<&[QubitId]> {
        if !self.spec.contains(q) {
            return input(format!("qubit {q} outside {}", self.spec));
        }
        if !self.is_operable(q) {
            return input(format!("qubit {q} is dead"));
        }
        Ok(&self.adjacency[q.index()])
    }

    /// Neighbours without the operability check; empty for dead or foreign ids.
    pub(crate) fn adjacent(&self, q: QubitId) -> &[QubitId] {
        self.adjacency.get(q.index()).map_or(&[], Vec::as_slice)
    }

    /// Whether an operable coupler joins `a` and `b`.
    pub fn has_coupler(&self, a: QubitId, b: QubitId) -> bool {
        self.is_operable(a)
            && self.is_operable(b)
            && self.spec.ideal_adjacent(a, b)
            && !self.dead_couplers.contains(&ordered(a, b))
    }

    pub fn degree(&self, q: QubitId) -> usize {
        self.adjacent(q).len()
    }

    /// Operable couplers as `(low, high)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (QubitId, QubitId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, nbrs)| {
            let q = QubitId(i as u32);
            nbrs.iter().filter(move |p| **p > q).map(move |&p| (q, p))
        })
    }

    pub fn num_couplers(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn capacity_map(&self) -> CapacityMap {
        let s = self.spec;
        let mut cells = Vec::with_capacity(s.rows * s.cols);
        for row in 0..s.rows {
            for col in 0..s.cols {
                let count = |shore| {
                    (0..s.shore_size)
                        .filter(|&w| self.is_coord_operable(QubitCoord::new(row, col, shore, w)))
                        .count()
                };
                cells.push(CellCapacity {
                    vertical: count(Shore::V),
                    horizontal: count(Shore::H),
                });
            }
        }
        CapacityMap {
            rows: s.rows,
            cols: s.cols,
            cells,
        }
    }
}

/// Distinct dead qubits drawn from a seeded stream.
pub fn random_fault_mask(spec: ChimeraSpec, count: usize, seed: u64) -> Result<Vec<Fault>> {
    let n = spec.num_qubits();
    if count > n {
        return input(format!("cannot kill {count} of {n} qubits"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<u32> = sample(&mut rng, n, count)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    picked.sort_unstable();
    Ok(picked
        .into_iter()
        .map(|i| Fault::Qubit(QubitId(i)))
        .collect())
}

/// Operable wire counts of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellCapacity {
    pub vertical: usize,
    pub horizontal: usize,
}

impl CellCapacity {
    pub fn get(&self, shore: Shore) -> usize {
        match shore {
            Shore::V => self.vertical,
            Shore::H => self.horizontal,
        }
    }
}

/// Per-cell operable wire counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityMap {
    rows: usize,
    cols: usize,
    cells: Vec<CellCapacity>,
}

impl CapacityMap {
    /// All-zero map.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            cells: vec![CellCapacity::default(); rows * cols],
        }
    }

    pub fn add(&mut self, row: usize, col: usize, shore: Shore, count: usize) {
        let cell = &mut self.cells[row * self.cols + col];
        match shore {
            Shore::V => cell.vertical += count,
            Shore::H => cell.horizontal += count,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> CellCapacity {
        self.cells[row * self.cols + col]
    }

    pub fn total(&self) -> usize {
        self.cells.iter().map(|c| c.vertical + c.horizontal).sum()
    }
}
