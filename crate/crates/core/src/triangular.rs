//! Clique embeddings into square Chimera regions.
//!
//! Two geometries live here. [`triangular_embed`] is the lower-triangle clique
//! scheme used for whole-chip cliques. [`NexusTemplate`] is the rotated-L
//! cluster that the product embedder repeats along the diagonal.

use std::fmt;

use crate::chimera::{ChimeraSpec, HardwareGraph, QubitCoord, Shore};
use crate::embedding::Embedding;
use crate::error::{input, Error, Result};
use crate::problem::complete_graph;
use crate::validate::{validate, ValidationReport};

/// Cells per side of the smallest square region holding `K_m` at shore size `l`.
pub fn region_size(m: usize, l: usize) -> usize {
    m.div_ceil(l)
}

/// Chains of the lower-triangle clique scheme, relative to `(0, 0)`.
///
/// Variable `v` sits on wire `v % l` of block row `r = v / l`: horizontally along
/// row `r` over columns `0..=r`, then vertically down column `r` to the bottom.
pub fn triangular_chains(m: usize, l: usize) -> Vec<Vec<QubitCoord>> {
    let size = region_size(m, l);
    (0..m)
        .map(|v| {
            let (r, o) = (v / l, v % l);
            let mut chain: Vec<QubitCoord> = (0..=r).map(|c| QubitCoord::h(r, c, o)).collect();
            chain.extend((r..size).map(|row| QubitCoord::v(row, r, o)));
            chain
        })
        .collect()
}

/// Embed `K_m` with the triangular scheme on the region whose top-left cell is `origin`.
/// Variables are labelled `"0".."m-1"`.
pub fn triangular_embed(m: usize, spec: ChimeraSpec, origin: (usize, usize)) -> Result<Embedding> {
    if m == 0 {
        return input("clique size must be positive");
    }
    let size = region_size(m, spec.shore_size);
    if origin.0 + size > spec.rows || origin.1 + size > spec.cols {
        return input(format!(
            "K_{m} needs a {size}x{size} region at {origin:?}, outside {spec}"
        ));
    }
    let mut emb = Embedding::new(spec);
    for (v, chain) in triangular_chains(m, spec.shore_size)
        .into_iter()
        .enumerate()
    {
        emb.insert_coords(
            v.to_string(),
            chain.into_iter().map(|c| c.offset(origin.0, origin.1)),
        )?;
    }
    Ok(emb)
}

/// Largest clique the triangular scheme fits on an `n × n` chip.
pub fn triangular_capacity(n: usize, l: usize) -> usize {
    n * l
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Face {
    Up,
    Down,
    Left,
    Right,
}

impl Face {
    pub fn as_str(self) -> &'static str {
        match self {
            Face::Up => "UP",
            Face::Down => "DOWN",
            Face::Left => "LEFT",
            Face::Right => "RIGHT",
        }
    }

    /// Shore carrying wires that leave through this face.
    pub fn shore(self) -> Shore {
        match self {
            Face::Up | Face::Down => Shore::V,
            Face::Left | Face::Right => Shore::H,
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which half of the clique a variable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subset {
    X,
    Y,
}

/// Terminals of one variable group on one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interface {
    pub face: Face,
    pub subset: Subset,
    /// Relative cell on the template boundary where the wires leave.
    pub anchor: (usize, usize),
    pub variables: Vec<usize>,
    /// `wires[t]` is the wire index of `variables[t]`.
    pub wires: Vec<usize>,
}

impl Interface {
    pub fn is_injective(&self) -> bool {
        let mut w = self.wires.clone();
        w.sort_unstable();
        w.dedup();
        w.len() == self.wires.len()
    }
}

/// A cluster of cells hosting one copy of `K_m`.
///
/// The block is `rows × cols` cells. X variables occupy horizontal lines in the
/// bottom rows and turn down at the left; Y variables occupy vertical lines in
/// the right columns and turn right at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NexusTemplate {
    pub m: usize,
    pub shore_size: usize,
    /// Cell footprint parameter; the block is `k × k` unless stretched.
    pub k: usize,
    /// Number of X wire groups, which is also the diagonal stride.
    pub gx: usize,
    pub gy: usize,
    pub rows: usize,
    pub cols: usize,
    /// Variables `0..split` form S_X, the rest S_Y.
    pub split: usize,
    pub cells: Vec<(usize, usize)>,
    pub chains: Vec<Vec<QubitCoord>>,
    pub interfaces: Vec<Interface>,
}

impl NexusTemplate {
    /// Template on a `k × k` block with `gx = ⌈k/2⌉` X groups.
    pub fn with_footprint(m: usize, l: usize, k: usize) -> Result<Self> {
        if m < 1 || k < 1 || l < 1 {
            return input("nexus needs m, k, L all positive");
        }
        if m > k * l {
            return Err(Error::UnsupportedSize(format!(
                "K_{m} does not fit a {k}x{k} nexus at L={l}"
            )));
        }
        let gx = k.div_ceil(2);
        let gy = k - gx;
        let split = m.div_ceil(2).max(m.saturating_sub(gy * l));
        let xrows: Vec<usize> = (0..gx).map(|g| gy + g).collect();
        let ycols: Vec<usize> = (0..gy).map(|h| gx + h).collect();
        Ok(Self::assemble(
            m,
            l,
            k,
            gx,
            gy,
            split,
            k,
            k,
            &xrows,
            &(0..gx).collect::<Vec<_>>(),
            &(0..gy).collect::<Vec<_>>(),
            &ycols,
        ))
    }

    /// Template with the smallest footprint `k = ⌈m/L⌉`.
    pub fn for_clique(m: usize, l: usize) -> Result<Self> {
        Self::with_footprint(m, l, region_size(m.max(1), l))
    }

    /// Rotated-L template on a 2×2 block, stretched by `extra_rows` between the
    /// Y row and the X row and by `extra_cols` between the X column and the Y column.
    pub fn stretched(m: usize, l: usize, extra_rows: usize, extra_cols: usize) -> Result<Self> {
        if m < 1 || l < 1 {
            return input("nexus needs m and L positive");
        }
        if m > 2 * l {
            return Err(Error::UnsupportedSize(format!(
                "rotated-L nexus holds at most {} variables",
                2 * l
            )));
        }
        let (rows, cols) = (2 + extra_rows, 2 + extra_cols);
        Ok(Self::assemble(
            m,
            l,
            2,
            1,
            1,
            m.div_ceil(2),
            rows,
            cols,
            &[rows - 1],
            &[0],
            &[0],
            &[cols - 1],
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        m: usize,
        l: usize,
        k: usize,
        gx: usize,
        gy: usize,
        split: usize,
        rows: usize,
        cols: usize,
        xrows: &[usize],
        xcols: &[usize],
        yrows: &[usize],
        ycols: &[usize],
    ) -> Self {
        let mut chains = Vec::with_capacity(m);
        let mut interfaces: Vec<Interface> = Vec::new();
        for v in 0..m {
            let (subset, t) = if v < split {
                (Subset::X, v)
            } else {
                (Subset::Y, v - split)
            };
            let (g, o) = (t / l, t % l);
            let chain: Vec<QubitCoord> = match subset {
                Subset::X => {
                    let (r, c) = (xrows[g], xcols[g]);
                    let mut ch: Vec<QubitCoord> =
                        (0..cols).map(|cc| QubitCoord::h(r, cc, o)).collect();
                    ch.extend((r..rows).map(|rr| QubitCoord::v(rr, c, o)));
                    ch
                }
                Subset::Y => {
                    let (r, c) = (yrows[g], ycols[g]);
                    let mut ch: Vec<QubitCoord> =
                        (0..rows).map(|rr| QubitCoord::v(rr, c, o)).collect();
                    ch.extend((c..cols).map(|cc| QubitCoord::h(r, cc, o)));
                    ch
                }
            };
            chains.push(chain);
            let faces = match subset {
                Subset::X => [
                    (Face::Left, (xrows[g], 0)),
                    (Face::Down, (rows - 1, xcols[g])),
                ],
                Subset::Y => [
                    (Face::Up, (0, ycols[g])),
                    (Face::Right, (yrows[g], cols - 1)),
                ],
            };
            for (face, anchor) in faces {
                match interfaces
                    .iter_mut()
                    .find(|i| i.face == face && i.anchor == anchor)
                {
                    Some(i) => {
                        i.variables.push(v);
                        i.wires.push(o);
                    }
                    None => interfaces.push(Interface {
                        face,
                        subset,
                        anchor,
                        variables: vec![v],
                        wires: vec![o],
                    }),
                }
            }
        }
        let mut cells: Vec<(usize, usize)> =
            chains.iter().flatten().map(|c| (c.row, c.col)).collect();
        cells.sort_unstable();
        cells.dedup();
        interfaces.sort_by_key(|i| (i.subset, i.face, i.anchor));
        Self {
            m,
            shore_size: l,
            k,
            gx,
            gy,
            rows,
            cols,
            split,
            cells,
            chains,
            interfaces,
        }
    }

    pub fn subset(&self, v: usize) -> Subset {
        if v < self.split {
            Subset::X
        } else {
            Subset::Y
        }
    }

    pub fn x_size(&self) -> usize {
        self.split
    }

    pub fn y_size(&self) -> usize {
        self.m - self.split
    }

    /// `(group, wire)` of a variable within its subset.
    pub fn slot(&self, v: usize) -> (usize, usize) {
        let t = if v < self.split { v } else { v - self.split };
        (t / self.shore_size, t % self.shore_size)
    }

    /// Block row of X group `g` in the unstretched layout.
    pub fn x_row(&self, g: usize) -> usize {
        self.gy + g
    }

    /// Block column of Y group `h` in the unstretched layout.
    pub fn y_col(&self, h: usize) -> usize {
        self.gx + h
    }

    pub fn interface(&self, subset: Subset, face: Face) -> Vec<&Interface> {
        self.interfaces
            .iter()
            .filter(|i| i.subset == subset && i.face == face)
            .collect()
    }

    /// Chip exactly covering the template block.
    pub fn isolated_spec(&self) -> Result<ChimeraSpec> {
        ChimeraSpec::new(self.rows, self.cols, self.shore_size)
    }

    /// The template as an embedding of `K_m` labelled `"0".."m-1"`.
    pub fn isolated_embedding(&self) -> Result<Embedding> {
        let mut emb = Embedding::new(self.isolated_spec()?);
        for (v, chain) in self.chains.iter().enumerate() {
            emb.insert_coords(v.to_string(), chain.iter().copied())?;
        }
        Ok(emb)
    }

    pub fn validate_isolated(&self) -> Result<ValidationReport> {
        let emb = self.isolated_embedding()?;
        let hw = HardwareGraph::ideal(emb.spec());
        Ok(validate(&complete_graph(self.m)?, &hw, &emb))
    }
}

/// The rotated-L 2×2 nexus for `m ≤ 2L`.
pub fn nexus_template(m: usize, l: usize) -> Result<NexusTemplate> {
    if m > 2 * l {
        return Err(Error::UnsupportedSize(format!(
            "nexus_template covers m <= 2L = {}; use NexusTemplate::for_clique for K_{m}",
            2 * l
        )));
    }
    NexusTemplate::with_footprint(m, l, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn k8_triangle_occupies_three_cells() {
        let spec = ChimeraSpec::new(2, 2, 4).unwrap();
        let e = triangular_embed(8, spec, (0, 0)).unwrap();
        assert_eq!(e.qubit_total(), 24);
        assert!(e.iter().all(|(_, c)| c.len() == 3));
        let mut cells: Vec<(usize, usize)> = e
            .iter()
            .flat_map(|(_, c)| c.iter().map(|&q| (spec.coord(q).row, spec.coord(q).col)))
            .collect();
        cells.sort_unstable();
        cells.dedup();
        assert_eq!(cells, vec![(0, 0), (1, 0), (1, 1)]);
        let hw = HardwareGraph::ideal(spec);
        assert!(validate(&complete_graph(8).unwrap(), &hw, &e).is_valid());
    }

    #[test]
    fn k4_single_cell() {
        let spec = ChimeraSpec::new(1, 1, 4).unwrap();
        let e = triangular_embed(4, spec, (0, 0)).unwrap();
        for o in 0..4 {
            let want = vec![
                spec.id(QubitCoord::v(0, 0, o)),
                spec.id(QubitCoord::h(0, 0, o)),
            ];
            assert_eq!(e.chain(&o.to_string()).unwrap(), want.as_slice());
        }
    }

    #[test]
    fn region_must_fit() {
        let spec = ChimeraSpec::new(3, 3, 4).unwrap();
        assert!(triangular_embed(8, spec, (2, 0)).is_err());
        assert!(triangular_embed(8, spec, (1, 1)).is_ok());
        assert!(triangular_embed(13, spec, (0, 0)).is_err());
    }

    #[test]
    fn k8_nexus_matches_rotated_l() {
        let t = nexus_template(8, 4).unwrap();
        assert_eq!(t.cells, vec![(0, 1), (1, 0), (1, 1)]);
        assert_eq!(t.split, 4);
        assert!(t.chains.iter().all(|c| c.len() == 3));
        let x: Vec<QubitCoord> = vec![
            QubitCoord::h(1, 0, 2),
            QubitCoord::h(1, 1, 2),
            QubitCoord::v(1, 0, 2),
        ];
        assert_eq!(t.chains[2], x);
        let y: Vec<QubitCoord> = vec![
            QubitCoord::v(0, 1, 1),
            QubitCoord::v(1, 1, 1),
            QubitCoord::h(0, 1, 1),
        ];
        assert_eq!(t.chains[5], y);
        let faces: Vec<(Subset, Face)> = t.interfaces.iter().map(|i| (i.subset, i.face)).collect();
        assert_eq!(
            faces,
            vec![
                (Subset::X, Face::Down),
                (Subset::X, Face::Left),
                (Subset::Y, Face::Up),
                (Subset::Y, Face::Right)
            ]
        );
        assert!(t.validate_isolated().unwrap().is_valid());
    }

    #[test]
    fn small_nexuses() {
        let t = nexus_template(5, 4).unwrap();
        assert_eq!((t.x_size(), t.y_size()), (3, 2));
        assert!(t.validate_isolated().unwrap().is_valid());

        let t = nexus_template(2, 4).unwrap();
        assert_eq!((t.x_size(), t.y_size()), (1, 1));
        // the only X/Y contact is H(1,1,0) against V(1,1,0)
        let x: std::collections::BTreeSet<_> = t.chains[0].iter().map(|c| (c.row, c.col)).collect();
        let y: std::collections::BTreeSet<_> = t.chains[1].iter().map(|c| (c.row, c.col)).collect();
        assert_eq!(
            x.intersection(&y).copied().collect::<Vec<_>>(),
            vec![(1, 1)]
        );
        assert!(t.validate_isolated().unwrap().is_valid());

        assert!(matches!(
            nexus_template(9, 4),
            Err(Error::UnsupportedSize(_))
        ));
    }

    #[test]
    fn general_footprints_validate() {
        for l in 2..=4 {
            for m in 1..=6 * l {
                let t = NexusTemplate::for_clique(m, l).unwrap();
                let r = t.validate_isolated().unwrap();
                assert!(r.is_valid(), "m={m} l={l}: {r}");
                // the top-left gy×gx corner stays free for the next copy's overlap
                assert!(t.cells.iter().all(|&(r, c)| r >= t.gy || c >= t.gx));
            }
        }
    }

    #[test]
    fn stretched_templates_validate() {
        for (dr, dc) in [(0, 0), (1, 0), (0, 2), (3, 1)] {
            let t = NexusTemplate::stretched(8, 4, dr, dc).unwrap();
            assert_eq!((t.rows, t.cols), (2 + dr, 2 + dc));
            assert!(t.validate_isolated().unwrap().is_valid());
        }
        assert_eq!(
            NexusTemplate::stretched(8, 4, 0, 0).unwrap(),
            nexus_template(8, 4).unwrap()
        );
    }

    proptest! {
        #[test]
        fn nexus_is_clique(l in 2usize..=4, m0 in 2usize..=8) {
            let m = 2 + (m0 - 2) % (2 * l - 1);
            let t = nexus_template(m, l).unwrap();
            prop_assert!(t.validate_isolated().unwrap().is_valid());
            prop_assert!(t.interfaces.iter().all(Interface::is_injective));
        }

        #[test]
        fn triangular_uniform_chains(nr in 1usize..=16, l in 2usize..=4) {
            let m = l * nr;
            let spec = ChimeraSpec::square(nr, l).unwrap();
            let e = triangular_embed(m, spec, (0, 0)).unwrap();
            prop_assert!(e.iter().all(|(_, c)| c.len() == nr + 1));
            prop_assert_eq!(e.qubit_total(), m * (nr + 1));
            prop_assert!(validate(&complete_graph(m).unwrap(), &HardwareGraph::ideal(spec), &e).is_valid());
        }
    }
}
