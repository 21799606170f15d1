//! Product embedding on chips with inoperable qubits and couplers.
//!
//! Every copy of the nexus is described by four lines: the Y row above the X
//! row, and the X column left of the Y column. Each variable subset of a copy
//! then occupies two straight runs:
//!
//! * X row: row `x_row[i]`, columns `x_col[0]..=y_col[i]`, H shore.
//! * X column: column `x_col[i]`, rows `x_row[i]..=end_row`, V shore.
//! * Y column: column `y_col[i]`, rows `y_row[0]..=x_row[i]`, V shore.
//! * Y row: row `y_row[i]`, columns `y_col[i]..=end_col`, H shore.
//!
//! All four line sequences strictly increase with `i`, which keeps runs of
//! different copies disjoint. The ideal layout `y_row = x_col = i`,
//! `x_row = y_col = i + 1` reproduces the ideal product embedding. Faults are
//! avoided by shifting lines apart; a gap between the two rows or the two
//! columns of one copy is an extension of its nexus.

use std::collections::HashMap;
use std::fmt;

use crate::chimera::{CapacityMap, HardwareGraph, QubitCoord, Shore};
use crate::cpcg::{product_label, BusPlan};
use crate::embedding::Embedding;
use crate::problem::complete_product;
use crate::triangular::NexusTemplate;
use crate::validate::{validate, ValidationReport, ViolationKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FtConfig {
    /// Extra rows plus extra columns allowed inside one nexus.
    pub max_extensions: usize,
    /// Largest diagonal offset of any copy from its ideal position; `None` means the chip side.
    pub max_total_shift: Option<usize>,
    /// Largest summed line displacement tried per copy.
    pub search_depth: usize,
    /// Candidate line placements evaluated before giving up.
    pub search_budget: usize,
    /// Wire reassignments attempted after dead-coupler violations.
    pub retry_budget: usize,
}

impl Default for FtConfig {
    fn default() -> Self {
        Self {
            max_extensions: 4,
            max_total_shift: None,
            search_depth: 8,
            search_budget: 200_000,
            retry_budget: 256,
        }
    }
}

/// Line positions of one copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopyLines {
    pub y_row: usize,
    pub x_row: usize,
    pub x_col: usize,
    pub y_col: usize,
}

impl CopyLines {
    /// Gaps inside the nexus, rows plus columns. Zero for single-cell nexuses.
    pub fn extensions(&self) -> usize {
        (self.x_row - self.y_row).saturating_sub(1) + (self.y_col - self.x_col).saturating_sub(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RunKind {
    XRow,
    XCol,
    YCol,
    YRow,
}

impl RunKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RunKind::XRow => "X_ROW",
            RunKind::XCol => "X_COL",
            RunKind::YCol => "Y_COL",
            RunKind::YRow => "Y_ROW",
        }
    }

    fn shore(self) -> Shore {
        match self {
            RunKind::XRow | RunKind::YRow => Shore::H,
            RunKind::XCol | RunKind::YCol => Shore::V,
        }
    }

    fn is_x(self) -> bool {
        matches!(self, RunKind::XRow | RunKind::XCol)
    }
}

impl fmt::Display for RunKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailReason {
    Unsupported,
    InsufficientQubits,
    NoPlacement,
    UnresolvedCouplers,
}

impl FailReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailReason::Unsupported => "unsupported",
            FailReason::InsufficientQubits => "insufficient_qubits",
            FailReason::NoPlacement => "no_placement",
            FailReason::UnresolvedCouplers => "unresolved_couplers",
        }
    }
}

/// Why no embedding was produced. Displays as `key=value` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FtFailure {
    pub reason: FailReason,
    pub copy: Option<usize>,
    pub run: Option<RunKind>,
    pub operable: usize,
    pub required: usize,
    pub detail: String,
}

impl fmt::Display for FtFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status=failed")?;
        writeln!(f, "reason={}", self.reason.as_str())?;
        if let Some(c) = self.copy {
            writeln!(f, "copy={c}")?;
        }
        if let Some(r) = self.run {
            writeln!(f, "run={r}")?;
        }
        writeln!(f, "operable_qubits={}", self.operable)?;
        writeln!(f, "required_qubits={}", self.required)?;
        writeln!(f, "detail={}", self.detail)
    }
}

impl std::error::Error for FtFailure {}

/// Successful fault-tolerant embedding and how it was obtained.
#[derive(Debug, Clone)]
pub struct FtEmbedding {
    pub embedding: Embedding,
    pub lines: Vec<CopyLines>,
    /// Copies whose lines differ from the ideal layout.
    pub shifted_copies: usize,
    pub total_extensions: usize,
    pub wire_retries: usize,
}

/// Per-cell wire demand of a plan: one unit per chain qubit.
pub fn capacity_requirements(plan: &BusPlan) -> CapacityMap {
    let mut req = CapacityMap::zeros(plan.spec.rows, plan.spec.cols);
    for a in 0..plan.m {
        for i in 0..plan.n {
            for c in plan.chain(a, i) {
                req.add(c.row, c.col, c.shore, 1);
            }
        }
    }
    req
}

#[derive(Debug, Clone)]
struct Run {
    copy: usize,
    kind: RunKind,
    cells: Vec<(usize, usize)>,
    /// Template variables carried, in wire-assignment order.
    vars: Vec<usize>,
    /// Wires operable along the whole run, ascending.
    operable: Vec<usize>,
    /// Indices into `operable`, one per variable.
    pick: Vec<usize>,
}

impl Run {
    fn wire(&self, t: usize) -> usize {
        self.operable[self.pick[t]]
    }

    /// Next injective pick in lexicographic order.
    fn advance(&mut self) -> bool {
        let avail = self.operable.len();
        let k = self.pick.len();
        for p in (0..k).rev() {
            let used: Vec<usize> = self.pick[..p].to_vec();
            if let Some(next) = (self.pick[p] + 1..avail).find(|x| !used.contains(x)) {
                self.pick[p] = next;
                let mut taken: Vec<usize> = self.pick[..=p].to_vec();
                for q in p + 1..k {
                    let v = (0..avail)
                        .find(|x| !taken.contains(x))
                        .expect("enough wires");
                    self.pick[q] = v;
                    taken.push(v);
                }
                return true;
            }
        }
        false
    }
}

struct Ctx<'a> {
    hw: &'a HardwareGraph,
    cap: CapacityMap,
    m: usize,
    n: usize,
    l: usize,
    template: NexusTemplate,
    has_y: bool,
    cfg: &'a FtConfig,
    max_shift: usize,
    stretch_ok: HashMap<(usize, usize), bool>,
}

impl Ctx<'_> {
    fn run_vars(&self, kind: RunKind) -> Vec<usize> {
        let xs = 0..self.template.split;
        let ys = self.template.split..self.m;
        if kind.is_x() {
            xs.collect()
        } else {
            ys.collect()
        }
    }

    fn cells(
        &self,
        kind: RunKind,
        me: &CopyLines,
        first: &CopyLines,
        end_r: usize,
        end_c: usize,
    ) -> Vec<(usize, usize)> {
        let row_end = if self.has_y { me.y_col } else { me.x_col };
        match kind {
            RunKind::XRow => (first.x_col..=row_end).map(|c| (me.x_row, c)).collect(),
            RunKind::XCol => (me.x_row..=end_r.max(me.x_row))
                .map(|r| (r, me.x_col))
                .collect(),
            RunKind::YCol => (first.y_row..=me.x_row).map(|r| (r, me.y_col)).collect(),
            RunKind::YRow => (me.y_col..=end_c.max(me.y_col))
                .map(|c| (me.y_row, c))
                .collect(),
        }
    }

    fn kinds(&self) -> &'static [RunKind] {
        if self.has_y {
            &[RunKind::XRow, RunKind::XCol, RunKind::YCol, RunKind::YRow]
        } else {
            &[RunKind::XRow, RunKind::XCol]
        }
    }

    /// Wires whose qubits and along-run couplers are all operable.
    fn operable_wires(&self, kind: RunKind, cells: &[(usize, usize)]) -> Vec<usize> {
        let spec = self.hw.spec();
        let shore = kind.shore();
        (0..self.l)
            .filter(|&w| {
                let ids: Vec<_> = cells
                    .iter()
                    .map(|&(r, c)| spec.id(QubitCoord::new(r, c, shore, w)))
                    .collect();
                ids.iter().all(|&q| self.hw.is_operable(q))
                    && ids.windows(2).all(|p| self.hw.has_coupler(p[0], p[1]))
            })
            .collect()
    }

    /// First run of a candidate copy that lacks wires, if any.
    fn blocked_run(
        &self,
        me: &CopyLines,
        first: &CopyLines,
        end_r: usize,
        end_c: usize,
    ) -> Option<RunKind> {
        for &kind in self.kinds() {
            let need = self.run_vars(kind).len();
            if need == 0 {
                continue;
            }
            let cells = self.cells(kind, me, first, end_r, end_c);
            if cells
                .iter()
                .any(|&(r, c)| self.cap.get(r, c).get(kind.shore()) < need)
            {
                return Some(kind);
            }
            if self.operable_wires(kind, &cells).len() < need {
                return Some(kind);
            }
        }
        None
    }

    fn stretch_valid(&mut self, lines: &CopyLines) -> bool {
        if !self.has_y {
            return true;
        }
        let key = (lines.x_row - lines.y_row - 1, lines.y_col - lines.x_col - 1);
        if key == (0, 0) {
            return true;
        }
        let (m, l) = (self.m, self.l);
        *self.stretch_ok.entry(key).or_insert_with(|| {
            NexusTemplate::stretched(m, l, key.0, key.1)
                .and_then(|t| t.validate_isolated())
                .map(|r| r.is_valid())
                .unwrap_or(false)
        })
    }

    fn failure(
        &self,
        reason: FailReason,
        copy: Option<usize>,
        run: Option<RunKind>,
        detail: String,
    ) -> FtFailure {
        FtFailure {
            reason,
            copy,
            run,
            operable: self.hw.operable_count(),
            required: self.m * self.n,
            detail,
        }
    }

    /// Depth-first placement for fixed run ends. Copies are placed in diagonal
    /// order; each tries its candidates by total displacement, then lexicographically.
    fn place(&mut self, end_r: usize, end_c: usize) -> Result<Vec<CopyLines>, FtFailure> {
        let dims = if self.has_y { 4 } else { 2 };
        let shapes: Vec<Vec<usize>> = (0..=self.cfg.search_depth)
            .flat_map(|t| compositions(t, dims))
            .collect();
        let mut placed = Vec::with_capacity(self.n);
        let mut budget = self.cfg.search_budget;
        let mut deepest = (0usize, None);
        if self.dfs(
            &shapes,
            &mut placed,
            end_r,
            end_c,
            &mut budget,
            &mut deepest,
        ) {
            return Ok(placed);
        }
        let why = if budget == 0 {
            "search budget exhausted"
        } else {
            "no line placement"
        };
        Err(self.failure(
            FailReason::NoPlacement,
            Some(deepest.0),
            deepest.1,
            format!(
                "{why} within displacement {}, {} extensions, shift {}",
                self.cfg.search_depth, self.cfg.max_extensions, self.max_shift
            ),
        ))
    }

    fn dfs(
        &mut self,
        shapes: &[Vec<usize>],
        placed: &mut Vec<CopyLines>,
        end_r: usize,
        end_c: usize,
        budget: &mut usize,
        deepest: &mut (usize, Option<RunKind>),
    ) -> bool {
        let i = placed.len();
        if i == self.n {
            return true;
        }
        let spec = self.hw.spec();
        let left = self.n - 1 - i;
        let prev = placed.last().copied();
        let mut blocker = None;
        // furthest copy index a pruned candidate would have pushed off the chip
        let mut overflow = i;
        for d in shapes {
            if *budget == 0 {
                return false;
            }
            let lines = self.candidate(prev, d);
            // every later copy needs at least one fresh row and column
            if lines.x_row + left >= spec.rows || lines.y_col + left >= spec.cols {
                let room = spec
                    .rows
                    .saturating_sub(lines.x_row)
                    .min(spec.cols.saturating_sub(lines.y_col));
                overflow = overflow.max(i + room);
                continue;
            }
            if lines.extensions() > self.cfg.max_extensions {
                continue;
            }
            let ideal = if self.has_y { i + 1 } else { i };
            if lines.x_row.max(lines.y_col) - ideal > self.max_shift {
                continue;
            }
            *budget -= 1;
            let first = if i == 0 { lines } else { placed[0] };
            match self.blocked_run(&lines, &first, end_r, end_c) {
                None if self.stretch_valid(&lines) => {
                    placed.push(lines);
                    if self.dfs(shapes, placed, end_r, end_c, budget, deepest) {
                        return true;
                    }
                    placed.pop();
                }
                None => {}
                Some(kind) => {
                    blocker.get_or_insert(kind);
                }
            }
        }
        if overflow >= deepest.0 {
            *deepest = (overflow, blocker.or(deepest.1));
        }
        false
    }

    fn candidate(&self, prev: Option<CopyLines>, d: &[usize]) -> CopyLines {
        let next = |p: Option<usize>| p.map_or(0, |v| v + 1);
        if self.has_y {
            let y_row = next(prev.map(|p| p.y_row)) + d[0];
            let x_row = next(prev.map(|p| p.x_row)).max(y_row + 1) + d[1];
            let x_col = next(prev.map(|p| p.x_col)) + d[2];
            let y_col = next(prev.map(|p| p.y_col)).max(x_col + 1) + d[3];
            CopyLines {
                y_row,
                x_row,
                x_col,
                y_col,
            }
        } else {
            let x_row = next(prev.map(|p| p.x_row)) + d[0];
            let x_col = next(prev.map(|p| p.x_col)) + d[1];
            CopyLines {
                y_row: x_row,
                x_row,
                x_col,
                y_col: x_col,
            }
        }
    }

    fn ends(&self, lines: &[CopyLines]) -> (usize, usize) {
        let last = lines.last().expect("n >= 1");
        (last.x_row, if self.has_y { last.y_col } else { last.x_col })
    }

    fn build_runs(&self, lines: &[CopyLines]) -> Vec<Run> {
        let (end_r, end_c) = self.ends(lines);
        let mut runs = Vec::new();
        for (i, me) in lines.iter().enumerate() {
            for &kind in self.kinds() {
                let vars = self.run_vars(kind);
                if vars.is_empty() {
                    continue;
                }
                let cells = self.cells(kind, me, &lines[0], end_r, end_c);
                let operable = self.operable_wires(kind, &cells);
                let pick = (0..vars.len()).collect();
                runs.push(Run {
                    copy: i,
                    kind,
                    cells,
                    vars,
                    operable,
                    pick,
                });
            }
        }
        runs
    }

    fn assemble(&self, runs: &[Run]) -> Embedding {
        let spec = self.hw.spec();
        let mut chains: Vec<Vec<Vec<QubitCoord>>> = vec![vec![Vec::new(); self.n]; self.m];
        for run in runs {
            for (t, &a) in run.vars.iter().enumerate() {
                let w = run.wire(t);
                chains[a][run.copy].extend(
                    run.cells
                        .iter()
                        .map(|&(r, c)| QubitCoord::new(r, c, run.kind.shore(), w)),
                );
            }
        }
        let mut emb = Embedding::new(spec);
        for (a, per_copy) in chains.into_iter().enumerate() {
            for (i, chain) in per_copy.into_iter().enumerate() {
                emb.insert_coords(product_label(a, i), chain)
                    .expect("runs stay on chip");
            }
        }
        emb
    }
}

/// All length-`dims` tuples of non-negative integers summing to `total`, in lexicographic order.
fn compositions(total: usize, dims: usize) -> Vec<Vec<usize>> {
    if dims == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for head in 0..=total {
        for mut tail in compositions(total - head, dims - 1) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn parse_label(label: &str) -> Option<(usize, usize)> {
    let (a, i) = label.split_once(':')?;
    Some((a.parse().ok()?, i.parse().ok()?))
}

/// Runs that could be responsible for a violation, most specific last.
fn suspects(runs: &[Run], report: &ValidationReport, split: usize) -> Vec<usize> {
    let Some(v) = report.violations.iter().find(|v| {
        matches!(
            v.kind,
            ViolationKind::MissingEdge | ViolationKind::DisconnectedChain
        )
    }) else {
        return Vec::new();
    };
    let vars: Vec<(usize, usize)> = v.variables.iter().filter_map(|l| parse_label(l)).collect();
    let mut out = Vec::new();
    for &(a, i) in &vars {
        for (idx, r) in runs.iter().enumerate() {
            if r.copy == i && r.kind.is_x() == (a < split) && !out.contains(&idx) {
                out.push(idx);
            }
        }
    }
    out
}

/// Embed `K_m □ K_n` into a faulty square chip.
pub fn ft_cpcg_embed(
    hw: &HardwareGraph,
    m: usize,
    n: usize,
    cfg: &FtConfig,
) -> Result<FtEmbedding, FtFailure> {
    let spec = hw.spec();
    let l = spec.shore_size;
    let base = FtFailure {
        reason: FailReason::Unsupported,
        copy: None,
        run: None,
        operable: hw.operable_count(),
        required: m * n,
        detail: String::new(),
    };
    if m == 0 || n == 0 {
        return Err(FtFailure {
            detail: "product factors must be non-empty".into(),
            ..base
        });
    }
    if spec.rows != spec.cols {
        return Err(FtFailure {
            detail: format!("chip {spec} is not square"),
            ..base
        });
    }
    if m > 2 * l {
        return Err(FtFailure {
            detail: format!("nexus for K_{m} exceeds two cells at L={l}"),
            ..base
        });
    }
    if hw.operable_count() < m * n {
        return Err(FtFailure {
            reason: FailReason::InsufficientQubits,
            detail: format!(
                "{} operable qubits cannot host {} chains",
                hw.operable_count(),
                m * n
            ),
            ..base
        });
    }
    let template = NexusTemplate::for_clique(m, l).map_err(|e| FtFailure {
        detail: e.to_string(),
        ..base.clone()
    })?;
    let has_y = template.k == 2;
    let mut ctx = Ctx {
        hw,
        cap: hw.capacity_map(),
        m,
        n,
        l,
        template,
        has_y,
        cfg,
        max_shift: cfg.max_total_shift.unwrap_or(spec.rows),
        stretch_ok: HashMap::new(),
    };

    let ideal_end = (if has_y { n } else { n - 1 }).min(spec.rows - 1);
    let (mut end_r, mut end_c) = (ideal_end, ideal_end);
    let lines = loop {
        let lines = ctx.place(end_r, end_c)?;
        let (ar, ac) = ctx.ends(&lines);
        if ar <= end_r && ac <= end_c {
            break lines;
        }
        end_r = end_r.max(ar);
        end_c = end_c.max(ac);
    };

    let problem = complete_product(m, n).expect("m, n >= 1");
    let mut runs = ctx.build_runs(&lines);
    let mut retries = 0usize;
    loop {
        let emb = ctx.assemble(&runs);
        let report = validate(&problem, hw, &emb);
        if report.is_valid() {
            let ideal = |i: usize| {
                if has_y {
                    CopyLines {
                        y_row: i,
                        x_row: i + 1,
                        x_col: i,
                        y_col: i + 1,
                    }
                } else {
                    CopyLines {
                        y_row: i,
                        x_row: i,
                        x_col: i,
                        y_col: i,
                    }
                }
            };
            return Ok(FtEmbedding {
                embedding: emb,
                shifted_copies: lines
                    .iter()
                    .enumerate()
                    .filter(|(i, l)| **l != ideal(*i))
                    .count(),
                total_extensions: lines.iter().map(CopyLines::extensions).sum(),
                lines,
                wire_retries: retries,
            });
        }
        let cands = suspects(&runs, &report, ctx.template.split);
        if retries >= cfg.retry_budget || cands.is_empty() {
            let first = report
                .violations
                .first()
                .map(|v| v.to_string())
                .unwrap_or_default();
            return Err(ctx.failure(FailReason::UnresolvedCouplers, None, None, first));
        }
        // rotate through suspects so no single run absorbs the whole budget
        let target = cands[retries % cands.len()];
        if !runs[target].advance() {
            runs[target].pick = (0..runs[target].vars.len()).collect();
        }
        retries += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chimera::{ChimeraSpec, Fault, QubitId};
    use crate::cpcg::{bus_plan, cpcg_embed_on};

    fn c8() -> ChimeraSpec {
        ChimeraSpec::square(8, 4).unwrap()
    }

    fn check(hw: &HardwareGraph, m: usize, n: usize) -> FtEmbedding {
        let out = ft_cpcg_embed(hw, m, n, &FtConfig::default()).unwrap_or_else(|f| panic!("{f}"));
        let r = validate(&complete_product(m, n).unwrap(), hw, &out.embedding);
        assert!(r.is_valid(), "{r}");
        out
    }

    #[test]
    fn zero_faults_reproduce_ideal() {
        for (m, n, size) in [
            (8, 7, 8),
            (8, 3, 8),
            (5, 4, 6),
            (4, 5, 5),
            (3, 6, 6),
            (8, 1, 2),
        ] {
            let spec = ChimeraSpec::square(size, 4).unwrap();
            let out = check(&HardwareGraph::ideal(spec), m, n);
            assert_eq!(
                out.embedding.to_json(),
                cpcg_embed_on(spec, m, n).unwrap().to_json(),
                "K{m}□K{n}"
            );
            assert_eq!(out.shifted_copies, 0);
        }
    }

    #[test]
    fn dead_qubit_in_first_nexus() {
        let spec = c8();
        let dead = spec.id(QubitCoord::h(1, 0, 0));
        let hw = HardwareGraph::build(spec, &[Fault::Qubit(dead)]).unwrap();
        let out = check(&hw, 8, 6);
        assert!(out.shifted_copies > 0);
        assert!(out.embedding.iter().all(|(_, c)| !c.contains(&dead)));
    }

    #[test]
    fn dead_coupler_triggers_wire_retry() {
        let spec = c8();
        // in-nexus coupler of copy 2: X row H(3,2,0) to X column V(3,2,0)
        let a = spec.id(QubitCoord::h(3, 2, 0));
        let b = spec.id(QubitCoord::v(3, 2, 0));
        let hw = HardwareGraph::build(spec, &[Fault::Coupler(a, b)]).unwrap();
        let out = check(&hw, 8, 6);
        assert!(out.wire_retries > 0 || out.shifted_copies > 0);
    }

    #[test]
    fn honest_failures() {
        let spec = ChimeraSpec::square(2, 4).unwrap();
        let faults: Vec<Fault> = (0..21).map(|q| Fault::Qubit(QubitId(q))).collect();
        let hw = HardwareGraph::build(spec, &faults).unwrap();
        let f = ft_cpcg_embed(&hw, 4, 3, &FtConfig::default()).unwrap_err();
        assert_eq!(f.reason, FailReason::InsufficientQubits);
        assert!(f.to_string().contains("reason=insufficient_qubits\n"));

        let wide = HardwareGraph::ideal(ChimeraSpec::new(4, 5, 4).unwrap());
        assert_eq!(
            ft_cpcg_embed(&wide, 4, 2, &FtConfig::default())
                .unwrap_err()
                .reason,
            FailReason::Unsupported
        );
        assert_eq!(
            ft_cpcg_embed(&HardwareGraph::ideal(c8()), 9, 2, &FtConfig::default())
                .unwrap_err()
                .reason,
            FailReason::Unsupported
        );
        let f = ft_cpcg_embed(&HardwareGraph::ideal(c8()), 8, 8, &FtConfig::default()).unwrap_err();
        assert_eq!(f.reason, FailReason::NoPlacement);
        assert_eq!(f.copy, Some(7));
    }

    #[test]
    fn requirements_census() {
        let plan = bus_plan(8, 3, 4).unwrap();
        let req = capacity_requirements(&plan);
        assert_eq!((req.get(1, 1).vertical, req.get(1, 1).horizontal), (4, 4));
        assert_eq!(req.get(0, 0), Default::default());
        // S_X DOWN bus of copy 0 runs down column 0
        assert_eq!(req.get(3, 0).vertical, 4);
        assert_eq!(req.total(), 8 * 3 * 5);
    }

    #[test]
    fn advance_enumerates_injective_picks() {
        let mut run = Run {
            copy: 0,
            kind: RunKind::XRow,
            cells: vec![],
            vars: vec![0, 1],
            operable: vec![0, 1, 2],
            pick: vec![0, 1],
        };
        let mut seen = vec![run.pick.clone()];
        while run.advance() {
            seen.push(run.pick.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 2],
                vec![2, 0],
                vec![2, 1]
            ]
        );
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn random_masks_are_sound() {
        let spec = c8();
        for seed in 0..40u64 {
            let dead = 1 + (seed as usize % 8);
            let hw = HardwareGraph::with_random_faults(spec, dead, seed).unwrap();
            if let Ok(out) = ft_cpcg_embed(&hw, 8, 6, &FtConfig::default()) {
                assert!(validate(&complete_product(8, 6).unwrap(), &hw, &out.embedding).is_valid());
            }
        }
    }
}
