//! Lowering logical Ising models onto embedded chains, and decoding samples back.

use std::collections::{BTreeSet, VecDeque};

use crate::chimera::{HardwareGraph, QubitId};
use crate::embedding::Embedding;
use crate::error::{input, Error, Result};
use crate::qubo::IsingModel;
use crate::scalar::Scalar;
use crate::validate::chain_connected;

/// Ising model over physical qubits. Index `p` refers to `qubits[p]`.
///
/// For any sample in which every chain is uniform,
/// `logical energy = model.energy(sample) + chain_offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalModel<T> {
    pub qubits: Vec<QubitId>,
    pub model: IsingModel<T>,
    pub chain_offset: T,
}

impl<T: Scalar> PhysicalModel<T> {
    pub fn index_of(&self, q: QubitId) -> Option<usize> {
        self.qubits.binary_search(&q).ok()
    }

    /// Physical sample where each qubit copies its variable's spin.
    pub fn expand(&self, emb: &Embedding, labels: &[String], logical: &[i8]) -> Result<Vec<i8>> {
        if logical.len() != labels.len() {
            return input("sample length does not match variable count");
        }
        let mut out = vec![0i8; self.qubits.len()];
        for (label, &s) in labels.iter().zip(logical) {
            let chain = emb
                .chain(label)
                .ok_or_else(|| Error::Input(format!("{label} has no chain")))?;
            for &q in chain {
                let p = self
                    .index_of(q)
                    .ok_or_else(|| Error::Input(format!("qubit {q} not in model")))?;
                out[p] = s;
            }
        }
        Ok(out)
    }
}

/// Spanning tree of a connected chain, grown breadth-first from its lowest id
/// with neighbours taken in ascending order.
pub fn chain_tree(hw: &HardwareGraph, chain: &[QubitId]) -> Option<Vec<(QubitId, QubitId)>> {
    if !chain_connected(hw, chain) {
        return None;
    }
    let members: BTreeSet<QubitId> = chain.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let root = *members.iter().next()?;
    seen.insert(root);
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::with_capacity(chain.len().saturating_sub(1));
    while let Some(q) = queue.pop_front() {
        let mut nbrs: Vec<QubitId> = hw
            .adjacent(q)
            .iter()
            .copied()
            .filter(|p| members.contains(p))
            .collect();
        nbrs.sort_unstable();
        for p in nbrs {
            if seen.insert(p) {
                edges.push((q.min(p), q.max(p)));
                queue.push_back(p);
            }
        }
    }
    Some(edges)
}

/// Lowest-id operable coupler joining two chains.
pub fn inter_chain_coupler(
    hw: &HardwareGraph,
    a: &[QubitId],
    b: &[QubitId],
) -> Option<(QubitId, QubitId)> {
    let other: BTreeSet<QubitId> = b.iter().copied().collect();
    let mut best: Option<(QubitId, QubitId)> = None;
    for &q in a {
        for &p in hw.adjacent(q) {
            if other.contains(&p) {
                let pair = (q.min(p), q.max(p));
                if best.is_none_or(|cur| pair < cur) {
                    best = Some(pair);
                }
            }
        }
    }
    best
}

/// Chain strength equal to twice the largest logical coefficient magnitude.
pub fn default_chain_strength<T: Scalar>(model: &IsingModel<T>) -> T {
    let mut m = T::one();
    for &h in model.fields() {
        if h.abs() > m {
            m = h.abs();
        }
    }
    for (_, j) in model.couplings() {
        if j.abs() > m {
            m = j.abs();
        }
    }
    T::two() * m
}

/// Map a logical Ising model onto the chains of `emb`.
///
/// `labels[i]` names the chain of logical variable `i`. Fields are split evenly
/// across the chain, each coupling lands on the lowest-id coupler between the
/// two chains, and each chain's spanning tree is bound by `-chain_strength`.
pub fn lower_model<T: Scalar>(
    model: &IsingModel<T>,
    labels: &[String],
    emb: &Embedding,
    hw: &HardwareGraph,
    chain_strength: T,
) -> Result<PhysicalModel<T>> {
    if labels.len() != model.dim() {
        return input(format!(
            "{} labels for {} variables",
            labels.len(),
            model.dim()
        ));
    }
    if chain_strength <= T::zero() {
        return input("chain strength must be positive");
    }
    let mut chains = Vec::with_capacity(labels.len());
    for label in labels {
        match emb.chain(label) {
            Some(c) => chains.push(c),
            None => return input(format!("{label} has no chain")),
        }
    }
    let mut qubits: Vec<QubitId> = chains.iter().flat_map(|c| c.iter().copied()).collect();
    qubits.sort_unstable();
    let before = qubits.len();
    qubits.dedup();
    if qubits.len() != before {
        return input("chains overlap");
    }
    let pos = |q: QubitId| qubits.binary_search(&q).expect("qubit collected above");

    let mut phys = IsingModel::new(qubits.len());
    let mut chain_offset = T::zero();
    let mut broken = Vec::new();
    for (i, chain) in chains.iter().enumerate() {
        let share = model.field(i) / T::from_count(chain.len());
        for &q in chain.iter() {
            phys.add_field(pos(q), share)?;
        }
        match chain_tree(hw, chain) {
            Some(tree) => {
                for (a, b) in tree {
                    phys.add_coupling(pos(a), pos(b), -chain_strength)?;
                    chain_offset = chain_offset + chain_strength;
                }
            }
            None => broken.push(labels[i].clone()),
        }
    }
    if !broken.is_empty() {
        return Err(Error::BrokenChains(broken));
    }
    for ((i, j), value) in model.couplings() {
        match inter_chain_coupler(hw, chains[i], chains[j]) {
            Some((a, b)) => phys.add_coupling(pos(a), pos(b), value)?,
            None => {
                return input(format!(
                    "no coupler between chains of {} and {}",
                    labels[i], labels[j]
                ))
            }
        }
    }
    Ok(PhysicalModel {
        qubits,
        model: phys,
        chain_offset,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Any non-uniform chain is an error.
    Strict,
    /// Majority vote per chain.
    Majority,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Values in {-1, +1}; ties decode to -1.
    Spin,
    /// Values in {0, 1}; ties decode to 0.
    Binary,
}

/// Recover logical values from a physical sample in the given domain.
pub fn decode<T: Scalar>(
    phys: &PhysicalModel<T>,
    emb: &Embedding,
    labels: &[String],
    sample: &[i8],
    domain: Domain,
    policy: Policy,
) -> Result<Vec<i8>> {
    if sample.len() != phys.qubits.len() {
        return input(format!(
            "sample has {} values for {} qubits",
            sample.len(),
            phys.qubits.len()
        ));
    }
    let (low, high) = match domain {
        Domain::Spin => (-1i8, 1i8),
        Domain::Binary => (0, 1),
    };
    if let Some(bad) = sample.iter().find(|&&v| v != low && v != high) {
        return input(format!("value {bad} outside the {domain:?} domain"));
    }
    let mut out = Vec::with_capacity(labels.len());
    let mut broken = Vec::new();
    for label in labels {
        let chain = emb
            .chain(label)
            .ok_or_else(|| Error::Input(format!("{label} has no chain")))?;
        let mut ups = 0usize;
        for &q in chain {
            let p = phys
                .index_of(q)
                .ok_or_else(|| Error::Input(format!("qubit {q} not in model")))?;
            if sample[p] == high {
                ups += 1;
            }
        }
        let downs = chain.len() - ups;
        if policy == Policy::Strict && ups != 0 && downs != 0 {
            broken.push(label.clone());
        }
        out.push(if ups > downs { high } else { low });
    }
    if !broken.is_empty() {
        return Err(Error::BrokenChains(broken));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chimera::{ChimeraSpec, Fault, QubitCoord};
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    /// Two variables, chains {V0,H0} and {V1,H1} in one cell.
    fn setup() -> (HardwareGraph, Embedding, Vec<String>) {
        let spec = ChimeraSpec::new(1, 1, 2).unwrap();
        let mut e = Embedding::new(spec);
        e.insert_coords("a", [QubitCoord::v(0, 0, 0), QubitCoord::h(0, 0, 0)])
            .unwrap();
        e.insert_coords("b", [QubitCoord::v(0, 0, 1), QubitCoord::h(0, 0, 1)])
            .unwrap();
        (HardwareGraph::ideal(spec), e, vec!["a".into(), "b".into()])
    }

    #[test]
    fn lowering_places_terms_deterministically() {
        let (hw, e, labels) = setup();
        let mut m = IsingModel::new(2);
        m.add_field(0, r(1, 1)).unwrap();
        m.add_coupling(0, 1, r(-3, 1)).unwrap();
        let p = lower_model(&m, &labels, &e, &hw, r(5, 1)).unwrap();
        // qubit ids: V0=0, V1=1, H0=2, H1=3
        assert_eq!(
            p.qubits,
            vec![QubitId(0), QubitId(1), QubitId(2), QubitId(3)]
        );
        assert_eq!(p.model.fields(), &[r(1, 2), r(0, 1), r(1, 2), r(0, 1)]);
        assert_eq!(p.model.coupling(0, 2), r(-5, 1));
        assert_eq!(p.model.coupling(1, 3), r(-5, 1));
        // lowest coupler between {0,2} and {1,3} is (0,3)
        assert_eq!(p.model.coupling(0, 3), r(-3, 1));
        assert_eq!(p.model.coupling(1, 2), r(0, 1));
        assert_eq!(p.chain_offset, r(10, 1));
    }

    #[test]
    fn uniform_chains_preserve_energy() {
        let (hw, e, labels) = setup();
        let mut m = IsingModel::new(2);
        m.add_field(0, r(1, 3)).unwrap();
        m.add_field(1, r(-2, 1)).unwrap();
        m.add_coupling(0, 1, r(7, 4)).unwrap();
        let p = lower_model(&m, &labels, &e, &hw, r(3, 1)).unwrap();
        for s in [[-1i8, -1], [-1, 1], [1, -1], [1, 1]] {
            let x = p.expand(&e, &labels, &s).unwrap();
            assert_eq!(
                p.model.energy(&x).unwrap() + p.chain_offset,
                m.energy(&s).unwrap()
            );
        }
    }

    #[test]
    fn decode_policies() {
        let spec = ChimeraSpec::new(1, 1, 4).unwrap();
        let hw = HardwareGraph::ideal(spec);
        let mut e = Embedding::new(spec);
        e.insert_coords(
            "a",
            [
                QubitCoord::v(0, 0, 0),
                QubitCoord::h(0, 0, 0),
                QubitCoord::h(0, 0, 1),
            ],
        )
        .unwrap();
        e.insert_coords("b", [QubitCoord::v(0, 0, 1), QubitCoord::h(0, 0, 2)])
            .unwrap();
        let labels = vec!["a".to_string(), "b".to_string()];
        let p = lower_model(&IsingModel::<f64>::new(2), &labels, &e, &hw, 1.0).unwrap();
        // qubits: 0(a) 1(b) 4(a) 5(a) 6(b)
        let sample = [1, -1, 1, -1, 1];
        assert_eq!(
            decode(&p, &e, &labels, &sample, Domain::Spin, Policy::Majority).unwrap(),
            vec![1, -1]
        );
        match decode(&p, &e, &labels, &sample, Domain::Spin, Policy::Strict) {
            Err(Error::BrokenChains(b)) => assert_eq!(b, vec!["a".to_string(), "b".to_string()]),
            other => panic!("{other:?}"),
        }
        let bin = [1, 1, 1, 0, 0];
        assert_eq!(
            decode(&p, &e, &labels, &bin, Domain::Binary, Policy::Majority).unwrap(),
            vec![1, 0]
        );
        assert!(decode(&p, &e, &labels, &bin, Domain::Spin, Policy::Majority).is_err());
        assert!(decode(&p, &e, &labels, &[1, 1], Domain::Spin, Policy::Majority).is_err());
    }

    #[test]
    fn broken_chain_is_reported() {
        let (_, e, labels) = setup();
        let hw = HardwareGraph::build(e.spec(), &[Fault::Coupler(QubitId(0), QubitId(2))]).unwrap();
        match lower_model(&IsingModel::<f64>::new(2), &labels, &e, &hw, 1.0) {
            Err(Error::BrokenChains(b)) => assert_eq!(b, vec!["a".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tree_is_bfs_from_lowest() {
        let spec = ChimeraSpec::new(1, 1, 2).unwrap();
        let hw = HardwareGraph::ideal(spec);
        let all = [QubitId(0), QubitId(1), QubitId(2), QubitId(3)];
        assert_eq!(
            chain_tree(&hw, &all).unwrap(),
            vec![
                (QubitId(0), QubitId(2)),
                (QubitId(0), QubitId(3)),
                (QubitId(1), QubitId(2))
            ]
        );
        assert_eq!(default_chain_strength(&IsingModel::<f64>::new(1)), 2.0);
    }
}
