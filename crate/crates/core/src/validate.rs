//! Minor-embedding validation against a (possibly faulty) chip.

use std::collections::VecDeque;
use std::fmt;

use crate::chimera::{HardwareGraph, QubitId};
use crate::embedding::Embedding;
use crate::problem::ProblemGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Overlap,
    DisconnectedChain,
    DeadQubit,
    MissingEdge,
    UnmappedVariable,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Overlap => "OVERLAP",
            ViolationKind::DisconnectedChain => "DISCONNECTED_CHAIN",
            ViolationKind::DeadQubit => "DEAD_QUBIT",
            ViolationKind::MissingEdge => "MISSING_EDGE",
            ViolationKind::UnmappedVariable => "UNMAPPED_VARIABLE",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
    /// Labels of the variables involved.
    pub variables: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    fn push(&mut self, kind: ViolationKind, detail: String, variables: Vec<String>) {
        self.violations.push(Violation {
            kind,
            detail,
            variables,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Check that `emb` is a minor embedding of `problem` into `hw`.
///
/// Every variable needs a chain of operable qubits, chains must be pairwise
/// disjoint and connected through operable couplers, and every problem edge
/// needs at least one operable coupler between the two chains.
pub fn validate(problem: &ProblemGraph, hw: &HardwareGraph, emb: &Embedding) -> ValidationReport {
    let mut report = ValidationReport::default();
    let spec = hw.spec();

    let chains: Vec<Option<&[QubitId]>> = problem.labels().iter().map(|l| emb.chain(l)).collect();
    for (v, chain) in chains.iter().enumerate() {
        if chain.is_none() {
            let label = problem.label(v).to_string();
            report.push(
                ViolationKind::UnmappedVariable,
                format!("{label} has no chain"),
                vec![label],
            );
        }
    }

    // owners over every chain in the embedding, problem variables or not
    let mut owners: Vec<Vec<u32>> = vec![Vec::new(); spec.num_qubits()];
    let all: Vec<(&str, &[QubitId])> = emb.iter().collect();
    for (ci, (label, chain)) in all.iter().enumerate() {
        for &q in chain.iter() {
            if !spec.contains(q) {
                report.push(
                    ViolationKind::DeadQubit,
                    format!("{label} uses qubit {q} outside {spec}"),
                    vec![label.to_string()],
                );
            } else {
                if !hw.is_operable(q) {
                    report.push(
                        ViolationKind::DeadQubit,
                        format!("{label} uses inoperable qubit {q}"),
                        vec![label.to_string()],
                    );
                }
                owners[q.index()].push(ci as u32);
            }
        }
    }
    for (i, own) in owners.iter().enumerate() {
        if own.len() > 1 {
            let names: Vec<String> = own.iter().map(|&c| all[c as usize].0.to_string()).collect();
            report.push(
                ViolationKind::Overlap,
                format!("qubit {i} shared by {}", names.join(", ")),
                names,
            );
        }
    }

    for (label, chain) in &all {
        if !chain_connected(hw, chain) {
            report.push(
                ViolationKind::DisconnectedChain,
                format!("chain of {label} is not connected"),
                vec![label.to_string()],
            );
        }
    }

    let chain_index: Vec<Option<u32>> = problem
        .labels()
        .iter()
        .map(|l| {
            all.iter()
                .position(|(k, _)| *k == l.as_str())
                .map(|p| p as u32)
        })
        .collect();
    for (u, v) in problem.edges() {
        let (Some(cu), Some(cv)) = (chain_index[u], chain_index[v]) else {
            continue;
        };
        let (su, sv) = (all[cu as usize].1, all[cv as usize].1);
        let (from, target) = if su.len() <= sv.len() {
            (su, cv)
        } else {
            (sv, cu)
        };
        let linked = from.iter().any(|&q| {
            hw.adjacent(q)
                .iter()
                .any(|p| owners[p.index()].contains(&target))
        });
        if !linked {
            let (a, b) = (problem.label(u).to_string(), problem.label(v).to_string());
            report.push(
                ViolationKind::MissingEdge,
                format!("no coupler between chains of {a} and {b}"),
                vec![a, b],
            );
        }
    }
    report
}

/// Whether the qubits form a connected subgraph of operable couplers.
pub fn chain_connected(hw: &HardwareGraph, chain: &[QubitId]) -> bool {
    if chain.is_empty() {
        return false;
    }
    if chain.iter().any(|&q| !hw.is_operable(q)) {
        return false;
    }
    let mut seen = vec![false; chain.len()];
    let pos = |q: QubitId| chain.binary_search(&q).ok();
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        for &p in hw.adjacent(chain[i]) {
            if let Some(j) = pos(p) {
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    queue.push_back(j);
                }
            }
        }
    }
    reached == chain.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chimera::{ChimeraSpec, Fault, QubitCoord};
    use crate::problem::complete_graph;

    /// K_4 on one cell: variable o uses {H(o), V(o)}.
    fn k4_cell() -> (ProblemGraph, HardwareGraph, Embedding) {
        let spec = ChimeraSpec::new(1, 1, 4).unwrap();
        let mut e = Embedding::new(spec);
        for o in 0..4 {
            e.insert_coords(
                o.to_string(),
                [QubitCoord::h(0, 0, o), QubitCoord::v(0, 0, o)],
            )
            .unwrap();
        }
        (complete_graph(4).unwrap(), HardwareGraph::ideal(spec), e)
    }

    #[test]
    fn valid_embedding_passes() {
        let (g, hw, e) = k4_cell();
        let r = validate(&g, &hw, &e);
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn detects_each_violation_kind() {
        let (g, hw, e) = k4_cell();

        let mut missing = e.clone();
        missing.remove("3");
        assert!(validate(&g, &hw, &missing).has(ViolationKind::UnmappedVariable));

        let mut overlap = e.clone();
        overlap.insert("1", [QubitId(0), QubitId(5)]).unwrap();
        assert!(validate(&g, &hw, &overlap).has(ViolationKind::Overlap));

        let mut split = e.clone();
        split.insert("0", [QubitId(0), QubitId(1)]).unwrap();
        split.insert("1", [QubitId(5)]).unwrap();
        let r = validate(&g, &hw, &split);
        assert!(r.has(ViolationKind::DisconnectedChain), "{r}");

        let dead = HardwareGraph::build(hw.spec(), &[Fault::Qubit(QubitId(4))]).unwrap();
        assert!(validate(&g, &dead, &e).has(ViolationKind::DeadQubit));

        // single-qubit chains on one shore cannot touch each other
        let mut shore = Embedding::new(hw.spec());
        for o in 0..4 {
            shore.insert(o.to_string(), [QubitId(o)]).unwrap();
        }
        assert_eq!(
            validate(&g, &hw, &shore).count(ViolationKind::MissingEdge),
            6
        );

        let mut bad = Embedding::new(hw.spec());
        bad.insert("0", [QubitId(99)]).unwrap();
        assert!(validate(&g, &hw, &bad).has(ViolationKind::DeadQubit));
    }

    #[test]
    fn dead_coupler_breaks_single_link() {
        let spec = ChimeraSpec::new(1, 1, 4).unwrap();
        let mut g = ProblemGraph::with_vertices(2);
        g.add_edge(0, 1).unwrap();
        let mut e = Embedding::new(spec);
        e.insert("0", [QubitId(0)]).unwrap();
        e.insert("1", [QubitId(4)]).unwrap();
        assert!(validate(&g, &HardwareGraph::ideal(spec), &e).is_valid());
        let hw = HardwareGraph::build(spec, &[Fault::Coupler(QubitId(0), QubitId(4))]).unwrap();
        assert!(validate(&g, &hw, &e).has(ViolationKind::MissingEdge));
    }
}
