//! Deterministic embedding of `K_m □ K_n` by diagonal nexus placement.
//!
//! Copy `i` of the nexus sits on the diagonal block anchored at `(s·i, s·i)`.
//! X chains leave through LEFT and DOWN buses, Y chains through UP and RIGHT
//! buses. Copies `i < j` meet in the lower-left bus space for X variables
//! and in the upper-right bus space for Y variables.

use std::collections::HashSet;

use crate::chimera::{ChimeraSpec, QubitCoord, Shore};
use crate::embedding::Embedding;
use crate::error::{input, Error, Result};
use crate::triangular::{Face, NexusTemplate, Subset};

/// Chip side needed for `K_m □ K_n` at shore size `l`.
pub fn required_size(m: usize, n: usize, l: usize) -> usize {
    let k = m.div_ceil(l);
    k.div_ceil(2) * n.saturating_sub(1) + k
}

/// Label of variable `a` in copy `i`.
pub fn product_label(a: usize, i: usize) -> String {
    format!("{a}:{i}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub index: usize,
    /// Top-left cell of the copy's block.
    pub anchor: (usize, usize),
    /// Absolute cells carrying nexus chains.
    pub cells: Vec<(usize, usize)>,
}

/// Straight run of cells carrying one wire group of one copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BusRun {
    pub copy: usize,
    pub subset: Subset,
    pub face: Face,
    pub group: usize,
    pub shore: Shore,
    pub cells: Vec<(usize, usize)>,
    pub variables: Vec<usize>,
    pub wires: Vec<usize>,
}

/// Cell where a bus of copy `copies.0` crosses a bus of copy `copies.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Junction {
    pub cell: (usize, usize),
    pub copies: (usize, usize),
    pub subset: Subset,
    /// `(lower copy qubit, upper copy qubit, variable)`.
    pub couplers: Vec<(QubitCoord, QubitCoord, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BusPlan {
    pub m: usize,
    pub n: usize,
    pub spec: ChimeraSpec,
    pub template: NexusTemplate,
    pub placements: Vec<Placement>,
    pub buses: Vec<BusRun>,
    pub junctions: Vec<Junction>,
    /// Elementary construction operations: one per qubit placed, one per junction coupler.
    pub steps: u64,
}

/// Plan for `K_m □ K_n` on the smallest square chip.
pub fn bus_plan(m: usize, n: usize, l: usize) -> Result<BusPlan> {
    let size = required_size(m, n, l);
    bus_plan_on(ChimeraSpec::square(size, l)?, m, n)
}

/// Plan anchored at cell `(0, 0)` of `spec`, which must be at least `required_size` on each side.
pub fn bus_plan_on(spec: ChimeraSpec, m: usize, n: usize) -> Result<BusPlan> {
    if m == 0 || n == 0 {
        return input("product factors must be non-empty");
    }
    let l = spec.shore_size;
    let size = required_size(m, n, l);
    if spec.rows < size || spec.cols < size {
        return Err(Error::UnsupportedSize(format!(
            "K_{m} □ K_{n} needs C({size},{size},{l}), chip is {spec}"
        )));
    }
    let t = NexusTemplate::for_clique(m, l)?;
    let (k, s) = (t.k, t.gx);
    let mut steps = 0u64;

    let placements: Vec<Placement> = (0..n)
        .map(|i| Placement {
            index: i,
            anchor: (s * i, s * i),
            cells: t
                .cells
                .iter()
                .map(|&(r, c)| (r + s * i, c + s * i))
                .collect(),
        })
        .collect();

    let members = |subset: Subset, group: usize| -> (Vec<usize>, Vec<usize>) {
        (0..m)
            .filter(|&v| t.subset(v) == subset && t.slot(v).0 == group)
            .map(|v| (v, t.slot(v).1))
            .unzip()
    };
    let groups_x = t.x_size().div_ceil(l);
    let groups_y = t.y_size().div_ceil(l);

    let mut buses = Vec::new();
    for i in 0..n {
        let base = s * i;
        for g in 0..groups_x {
            let (variables, wires) = members(Subset::X, g);
            let row = base + t.x_row(g);
            let col = base + g;
            buses.push(BusRun {
                copy: i,
                subset: Subset::X,
                face: Face::Left,
                group: g,
                shore: Shore::H,
                cells: (0..base).map(|c| (row, c)).collect(),
                variables: variables.clone(),
                wires: wires.clone(),
            });
            buses.push(BusRun {
                copy: i,
                subset: Subset::X,
                face: Face::Down,
                group: g,
                shore: Shore::V,
                cells: (base + k..size).map(|r| (r, col)).collect(),
                variables,
                wires,
            });
        }
        for h in 0..groups_y {
            let (variables, wires) = members(Subset::Y, h);
            let row = base + h;
            let col = base + t.y_col(h);
            buses.push(BusRun {
                copy: i,
                subset: Subset::Y,
                face: Face::Up,
                group: h,
                shore: Shore::V,
                cells: (0..base).map(|r| (r, col)).collect(),
                variables: variables.clone(),
                wires: wires.clone(),
            });
            buses.push(BusRun {
                copy: i,
                subset: Subset::Y,
                face: Face::Right,
                group: h,
                shore: Shore::H,
                cells: (base + k..size).map(|c| (row, c)).collect(),
                variables,
                wires,
            });
        }
    }
    buses.retain(|b| !b.cells.is_empty());

    let mut junctions = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for g in 0..groups_x {
                let cell = (s * j + t.x_row(g), s * i + g);
                let (variables, wires) = members(Subset::X, g);
                let couplers = variables
                    .iter()
                    .zip(&wires)
                    .map(|(&v, &o)| {
                        (
                            QubitCoord::v(cell.0, cell.1, o),
                            QubitCoord::h(cell.0, cell.1, o),
                            v,
                        )
                    })
                    .collect::<Vec<_>>();
                steps += couplers.len() as u64;
                junctions.push(Junction {
                    cell,
                    copies: (i, j),
                    subset: Subset::X,
                    couplers,
                });
            }
            for h in 0..groups_y {
                let cell = (s * i + h, s * j + t.y_col(h));
                let (variables, wires) = members(Subset::Y, h);
                let couplers = variables
                    .iter()
                    .zip(&wires)
                    .map(|(&v, &o)| {
                        (
                            QubitCoord::h(cell.0, cell.1, o),
                            QubitCoord::v(cell.0, cell.1, o),
                            v,
                        )
                    })
                    .collect::<Vec<_>>();
                steps += couplers.len() as u64;
                junctions.push(Junction {
                    cell,
                    copies: (i, j),
                    subset: Subset::Y,
                    couplers,
                });
            }
        }
    }

    steps += (n * t.chains.iter().map(Vec::len).sum::<usize>()) as u64;
    steps += buses
        .iter()
        .map(|b| (b.cells.len() * b.variables.len()) as u64)
        .sum::<u64>();

    Ok(BusPlan {
        m,
        n,
        spec,
        template: t,
        placements,
        buses,
        junctions,
        steps,
    })
}

impl BusPlan {
    /// Absolute chain of variable `a` in copy `i`, nexus part first.
    pub fn chain(&self, a: usize, i: usize) -> Vec<QubitCoord> {
        let (dr, dc) = self.placements[i].anchor;
        let mut chain: Vec<QubitCoord> = self.template.chains[a]
            .iter()
            .map(|c| c.offset(dr, dc))
            .collect();
        let subset = self.template.subset(a);
        let (group, wire) = self.template.slot(a);
        for b in &self.buses {
            if b.copy == i && b.subset == subset && b.group == group {
                chain.extend(
                    b.cells
                        .iter()
                        .map(|&(r, c)| QubitCoord::new(r, c, b.shore, wire)),
                );
            }
        }
        chain
    }

    /// Embedding with labels `a:i`, inserted variable-major.
    pub fn embedding(&self) -> Result<Embedding> {
        let mut emb = Embedding::new(self.spec);
        for a in 0..self.m {
            for i in 0..self.n {
                emb.insert_coords(product_label(a, i), self.chain(a, i))?;
            }
        }
        Ok(emb)
    }

    /// No qubit is claimed twice across nexus and bus runs.
    pub fn is_disjoint(&self) -> bool {
        let mut seen = HashSet::new();
        for a in 0..self.m {
            for i in 0..self.n {
                for c in self.chain(a, i) {
                    if !seen.insert(c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Cells touched by any nexus or bus.
    pub fn used_cells(&self) -> HashSet<(usize, usize)> {
        let mut cells: HashSet<(usize, usize)> = self
            .placements
            .iter()
            .flat_map(|p| p.cells.iter().copied())
            .collect();
        cells.extend(self.buses.iter().flat_map(|b| b.cells.iter().copied()));
        cells
    }
}

/// Embed `K_m □ K_n` on the smallest square chip, using `K_m` as the nexus.
pub fn cpcg_embed(m: usize, n: usize, l: usize) -> Result<(ChimeraSpec, Embedding)> {
    let plan = bus_plan(m, n, l)?;
    Ok((plan.spec, plan.embedding()?))
}

/// Same as [`cpcg_embed`] but placed on a given chip.
pub fn cpcg_embed_on(spec: ChimeraSpec, m: usize, n: usize) -> Result<Embedding> {
    bus_plan_on(spec, m, n)?.embedding()
}

/// Embedding together with its construction step count.
pub fn cpcg_embed_counted(m: usize, n: usize, l: usize) -> Result<(Embedding, u64)> {
    let plan = bus_plan(m, n, l)?;
    Ok((plan.embedding()?, plan.steps))
}

/// Result of trying both nexus orientations.
#[derive(Debug, Clone)]
pub struct BestEmbedding {
    pub spec: ChimeraSpec,
    pub embedding: Embedding,
    /// `K_n` served as the nexus; labels were mapped back to `a:i`.
    pub swapped: bool,
}

/// Use whichever factor as nexus gives the smaller chip, falling back to the other.
pub fn cpcg_embed_best(m: usize, n: usize, l: usize) -> Result<BestEmbedding> {
    let direct = required_size(m, n, l);
    let swapped = required_size(n, m, l);
    let order = if swapped < direct {
        [true, false]
    } else {
        [false, true]
    };
    let mut last = None;
    for swap in order {
        let attempt = if swap {
            cpcg_embed(n, m, l)
        } else {
            cpcg_embed(m, n, l)
        };
        match attempt {
            Ok((spec, emb)) if !swap => {
                return Ok(BestEmbedding {
                    spec,
                    embedding: emb,
                    swapped: false,
                })
            }
            Ok((spec, emb)) => {
                let mut out = Embedding::new(spec);
                for a in 0..m {
                    for i in 0..n {
                        let chain = emb
                            .chain(&product_label(i, a))
                            .expect("swapped plan covers every variable");
                        out.insert(product_label(a, i), chain.iter().copied())?;
                    }
                }
                return Ok(BestEmbedding {
                    spec,
                    embedding: out,
                    swapped: true,
                });
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("two attempts were made"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chimera::HardwareGraph;
    use crate::embedding::chain_stats;
    use crate::problem::complete_product;
    use crate::validate::validate;

    fn check(m: usize, n: usize, l: usize) -> Embedding {
        let (spec, e) = cpcg_embed(m, n, l).unwrap();
        let r = validate(
            &complete_product(m, n).unwrap(),
            &HardwareGraph::ideal(spec),
            &e,
        );
        assert!(r.is_valid(), "K{m}□K{n} L={l}: {r}");
        e
    }

    #[test]
    fn sizes() {
        assert_eq!(required_size(8, 7, 4), 8);
        assert_eq!(required_size(8, 15, 4), 16);
        assert_eq!(required_size(8, 1, 4), 2);
        assert_eq!(required_size(4, 3, 4), 3);
        assert_eq!(required_size(12, 5, 4), 2 * 4 + 3);
    }

    #[test]
    fn flagship_k8_k7() {
        let plan = bus_plan(8, 7, 4).unwrap();
        assert_eq!(plan.spec, ChimeraSpec::square(8, 4).unwrap());
        let e = plan.embedding().unwrap();
        let s = chain_stats(&e);
        assert_eq!(
            (s.chains, s.chain_min, s.chain_max, s.qubit_total),
            (56, 9, 9, 504)
        );
        assert!(plan.is_disjoint());
        assert_eq!(
            plan.junctions
                .iter()
                .filter(|j| j.subset == Subset::X)
                .count(),
            21
        );
        assert_eq!(
            plan.junctions
                .iter()
                .filter(|j| j.subset == Subset::Y)
                .count(),
            21
        );
        assert!(!plan.used_cells().contains(&(0, 0)));
        check(8, 7, 4);
    }

    #[test]
    fn rotated_l_geometry() {
        let plan = bus_plan(8, 4, 4).unwrap();
        assert_eq!(plan.placements[2].cells, vec![(2, 3), (3, 2), (3, 3)]);
        let left = plan
            .buses
            .iter()
            .find(|b| b.copy == 2 && b.face == Face::Left)
            .unwrap();
        assert_eq!(left.cells, vec![(3, 0), (3, 1)]);
        let down = plan
            .buses
            .iter()
            .find(|b| b.copy == 2 && b.face == Face::Down)
            .unwrap();
        assert_eq!(down.cells, vec![(4, 2)]);
        let up = plan
            .buses
            .iter()
            .find(|b| b.copy == 2 && b.face == Face::Up)
            .unwrap();
        assert_eq!(up.cells, vec![(0, 3), (1, 3)]);
        let right = plan
            .buses
            .iter()
            .find(|b| b.copy == 2 && b.face == Face::Right)
            .unwrap();
        assert_eq!(right.cells, vec![(2, 4)]);
        let j = plan
            .junctions
            .iter()
            .find(|j| j.copies == (1, 3) && j.subset == Subset::X)
            .unwrap();
        assert_eq!(j.cell, (4, 1));
        let j = plan
            .junctions
            .iter()
            .find(|j| j.copies == (1, 3) && j.subset == Subset::Y)
            .unwrap();
        assert_eq!(j.cell, (1, 4));
    }

    #[test]
    fn single_copy_has_no_buses() {
        let plan = bus_plan(8, 1, 4).unwrap();
        assert!(plan.buses.is_empty() && plan.junctions.is_empty());
        let e = plan.embedding().unwrap();
        assert!(e.iter().all(|(_, c)| c.len() == 3));
        assert_eq!(bus_plan(8, 2, 4).unwrap().junctions.len(), 2);
    }

    #[test]
    fn uniform_chains_for_k8() {
        for n in 1..=15 {
            let e = check(8, n, 4);
            let s = chain_stats(&e);
            assert_eq!((s.chain_min, s.chain_max), (n + 2, n + 2));
            assert_eq!(s.qubit_total, 8 * n * (n + 2));
        }
    }

    #[test]
    fn small_cliques_validate() {
        for m in 1..=8 {
            for n in 1..=15 {
                let e = check(m, n, 4);
                assert_eq!(e.spec().rows, required_size(m, n, 4));
            }
        }
    }

    #[test]
    fn general_footprints_validate() {
        for l in 2..=4 {
            for m in 2 * l + 1..=5 * l {
                for n in 1..=6 {
                    let plan = bus_plan(m, n, l).unwrap();
                    assert!(plan.is_disjoint());
                    check(m, n, l);
                }
            }
        }
    }

    #[test]
    fn deterministic_and_too_small_chip() {
        assert_eq!(
            cpcg_embed(8, 5, 4).unwrap().1.to_json(),
            cpcg_embed(8, 5, 4).unwrap().1.to_json()
        );
        assert!(matches!(
            cpcg_embed_on(ChimeraSpec::square(8, 4).unwrap(), 8, 8),
            Err(Error::UnsupportedSize(_))
        ));
        let bigger = cpcg_embed_on(ChimeraSpec::square(10, 4).unwrap(), 8, 7).unwrap();
        let hw = HardwareGraph::ideal(bigger.spec());
        assert!(validate(&complete_product(8, 7).unwrap(), &hw, &bigger).is_valid());
    }

    #[test]
    fn best_orientation_relabels() {
        // K_2 □ K_16 needs 16 cells with K_2 as nexus, 6 with K_16
        let b = cpcg_embed_best(2, 16, 4).unwrap();
        assert!(b.swapped);
        assert_eq!(b.spec.rows, required_size(16, 2, 4));
        let hw = HardwareGraph::ideal(b.spec);
        assert!(validate(&complete_product(2, 16).unwrap(), &hw, &b.embedding).is_valid());
        assert!(!cpcg_embed_best(8, 7, 4).unwrap().swapped);
    }
}
