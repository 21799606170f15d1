//! Minor embeddings: variable-to-chain maps and their statistics.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::chimera::{ChimeraSpec, QubitCoord, QubitId};
use crate::error::{input, Result};

/// Map from logical variable label to its chain of physical qubits.
///
/// Chains are stored sorted and deduplicated; insertion order of variables is
/// preserved so serialisation is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    spec: ChimeraSpec,
    chains: IndexMap<String, Vec<QubitId>>,
}

impl Embedding {
    pub fn new(spec: ChimeraSpec) -> Self {
        Self {
            spec,
            chains: IndexMap::new(),
        }
    }

    pub fn spec(&self) -> ChimeraSpec {
        self.spec
    }

    pub fn insert(
        &mut self,
        label: impl Into<String>,
        chain: impl IntoIterator<Item = QubitId>,
    ) -> Result<()> {
        let label = label.into();
        let mut chain: Vec<QubitId> = chain.into_iter().collect();
        chain.sort_unstable();
        chain.dedup();
        if chain.is_empty() {
            return input(format!("empty chain for {label:?}"));
        }
        self.chains.insert(label, chain);
        Ok(())
    }

    /// Insert a chain given in cell coordinates.
    pub fn insert_coords(
        &mut self,
        label: impl Into<String>,
        coords: impl IntoIterator<Item = QubitCoord>,
    ) -> Result<()> {
        let spec = self.spec;
        let mut ids = Vec::new();
        for c in coords {
            match spec.try_id(c) {
                Some(q) => ids.push(q),
                None => return input(format!("coordinate {c:?} outside {spec}")),
            }
        }
        self.insert(label, ids)
    }

    pub fn chain(&self, label: &str) -> Option<&[QubitId]> {
        self.chains.get(label).map(Vec::as_slice)
    }

    pub fn chain_mut(&mut self, label: &str) -> Option<&mut Vec<QubitId>> {
        self.chains.get_mut(label)
    }

    pub fn remove(&mut self, label: &str) -> Option<Vec<QubitId>> {
        self.chains.shift_remove(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[QubitId])> {
        self.chains.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.chains.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Sum of chain lengths.
    pub fn qubit_total(&self) -> usize {
        self.chains.values().map(Vec::len).sum()
    }

    pub fn distinct_qubits(&self) -> usize {
        let mut all: Vec<QubitId> = self.chains.values().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }

    /// Same chains re-expressed on another spec with the same shore size.
    pub fn respec(&self, spec: ChimeraSpec) -> Result<Self> {
        if spec.shore_size != self.spec.shore_size {
            return input("cannot move an embedding between shore sizes");
        }
        let mut out = Self::new(spec);
        for (label, chain) in &self.chains {
            out.insert_coords(label.clone(), chain.iter().map(|&q| self.spec.coord(q)))?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("embedding serialises")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("embedding serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(text)?;
        let spec = ChimeraSpec::new(raw.spec.rows, raw.spec.cols, raw.spec.shore_size)?;
        let mut emb = Self::new(spec);
        for (label, chain) in raw.chains {
            emb.insert(label, chain)?;
        }
        Ok(emb)
    }
}

/// Chain length statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStats {
    pub chains: usize,
    pub qubit_total: usize,
    pub chain_min: usize,
    pub chain_max: usize,
    pub chain_mean: f64,
    /// Population standard deviation.
    pub chain_stddev: f64,
    pub histogram: BTreeMap<usize, usize>,
}

impl ChainStats {
    pub fn is_uniform(&self) -> bool {
        self.chain_min == self.chain_max
    }
}

pub fn chain_stats(emb: &Embedding) -> ChainStats {
    let lengths: Vec<usize> = emb.iter().map(|(_, c)| c.len()).collect();
    let mut histogram = BTreeMap::new();
    for &l in &lengths {
        *histogram.entry(l).or_insert(0) += 1;
    }
    let total: usize = lengths.iter().sum();
    let count = lengths.len();
    let mean = if count == 0 {
        0.0
    } else {
        total as f64 / count as f64
    };
    let var = if count == 0 {
        0.0
    } else {
        lengths
            .iter()
            .map(|&l| (l as f64 - mean).powi(2))
            .sum::<f64>()
            / count as f64
    };
    ChainStats {
        chains: count,
        qubit_total: total,
        chain_min: lengths.iter().copied().min().unwrap_or(0),
        chain_max: lengths.iter().copied().max().unwrap_or(0),
        chain_mean: mean,
        chain_stddev: var.sqrt(),
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ChimeraSpec {
        ChimeraSpec::new(2, 2, 4).unwrap()
    }

    #[test]
    fn single_qubit_chain_stats() {
        let mut e = Embedding::new(spec());
        e.insert("a", [QubitId(3)]).unwrap();
        let s = chain_stats(&e);
        assert_eq!((s.chain_min, s.chain_max, s.qubit_total), (1, 1, 1));
        assert_eq!(s.chain_mean, 1.0);
        assert_eq!(s.chain_stddev, 0.0);
    }

    #[test]
    fn stats_of_mixed_lengths() {
        let mut e = Embedding::new(spec());
        e.insert("a", [QubitId(0), QubitId(4)]).unwrap();
        e.insert("b", [QubitId(1), QubitId(5), QubitId(13), QubitId(21)])
            .unwrap();
        let s = chain_stats(&e);
        assert_eq!(s.qubit_total, 6);
        assert_eq!(s.chain_mean, 3.0);
        assert_eq!(s.chain_stddev, 1.0);
        assert_eq!(s.histogram, BTreeMap::from([(2, 1), (4, 1)]));
        assert_eq!(e.distinct_qubits(), 6);
    }

    #[test]
    fn chains_are_normalised_and_non_empty() {
        let mut e = Embedding::new(spec());
        e.insert("a", [QubitId(5), QubitId(1), QubitId(5)]).unwrap();
        assert_eq!(e.chain("a").unwrap(), &[QubitId(1), QubitId(5)]);
        assert!(e.insert("b", []).is_err());
        assert!(e.insert_coords("c", [QubitCoord::v(2, 0, 0)]).is_err());
    }

    #[test]
    fn json_round_trip_preserves_order() {
        let mut e = Embedding::new(spec());
        e.insert("z", [QubitId(2)]).unwrap();
        e.insert("a", [QubitId(9), QubitId(1)]).unwrap();
        let text = e.to_json();
        assert_eq!(
            text,
            r#"{"spec":{"rows":2,"cols":2,"shore":4},"chains":{"z":[2],"a":[1,9]}}"#
        );
        assert_eq!(Embedding::from_json(&text).unwrap(), e);
        assert!(Embedding::from_json(
            r#"{"spec":{"rows":2,"cols":2,"shore":4},"chains":{"a":[]}}"#
        )
        .is_err());
    }

    #[test]
    fn respec_moves_ids() {
        let mut e = Embedding::new(spec());
        e.insert_coords("a", [QubitCoord::h(1, 1, 2)]).unwrap();
        let big = e.respec(ChimeraSpec::new(3, 3, 4).unwrap()).unwrap();
        let q = big.chain("a").unwrap()[0];
        assert_eq!(big.spec().coord(q), QubitCoord::h(1, 1, 2));
    }
}
