//! Invariant coordinate subspaces of the truncated carrier space under a set
//! of operators.
//!
//! Components are connected components of the undirected support graph of
//! the operators' matrices in the canonical basis. A component is complete
//! when no operator maps any of its vectors past `m_max`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{FockError, Result};
use crate::fock::{enumerate_basis_upto, BasisVector, FockParams, SparseVector};
use crate::operators::derived::DerivedOp;
use crate::operators::eval::{DerivedMode, Evaluator};
use crate::operators::expr::OperatorExpr;
use crate::operators::generator::Generator;
use crate::operators::matrix::window_columns;
use crate::realization::{act, gl11_spec, SuperAlgebraSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    pub name: String,
    pub exprs: Vec<OperatorExpr>,
}

impl GeneratorSet {
    pub fn new(name: impl Into<String>, exprs: Vec<OperatorExpr>) -> Self {
        GeneratorSet { name: name.into(), exprs }
    }
}

/// A named generator set, optionally carrying the superalgebra it realizes.
pub trait Preset: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn generators(&self) -> GeneratorSet;
    fn realization_spec(&self) -> Option<SuperAlgebraSpec> {
        None
    }
}

struct Fixed {
    name: &'static str,
    description: &'static str,
    exprs: fn() -> Vec<OperatorExpr>,
    spec: Option<fn() -> SuperAlgebraSpec>,
}

impl Preset for Fixed {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn generators(&self) -> GeneratorSet {
        GeneratorSet::new(self.name, (self.exprs)())
    }

    fn realization_spec(&self) -> Option<SuperAlgebraSpec> {
        self.spec.map(|f| f())
    }
}

fn ops(ds: &[DerivedOp], gs: &[Generator]) -> Vec<OperatorExpr> {
    ds.iter()
        .map(|d| OperatorExpr::derived(*d))
        .chain(gs.iter().map(|g| OperatorExpr::gen(*g)))
        .collect()
}

/// Presets looked up by name.
pub struct PresetRegistry {
    presets: Vec<Box<dyn Preset>>,
}

impl PresetRegistry {
    pub fn empty() -> Self {
        PresetRegistry { presets: Vec::new() }
    }

    /// `gl11`, `l00l01`, `osp12`, `sp2`, `so3`, `so2`.
    pub fn with_defaults() -> Self {
        use DerivedOp::*;
        use Generator::*;
        let mut r = PresetRegistry::empty();
        r.register(Box::new(Fixed {
            name: "gl11",
            description: "gl(1|1): Nb, Nf, Q+, Q-",
            exprs: || ops(&[Nb, Nf, QPlus, QMinus], &[]),
            spec: Some(gl11_spec),
        }));
        r.register(Box::new(Fixed {
            name: "l00l01",
            description: "quadratic superalgebra: Nb, Nf, (b+)^2, (b-)^2, Q+, Q-, R+, R-",
            exprs: || ops(&[Nb, Nf, BPlusSq, BMinusSq, QPlus, QMinus, RPlus, RMinus], &[]),
            spec: None,
        }));
        r.register(Box::new(Fixed {
            name: "osp12",
            description: "osp(1|2): Nb, (b+)^2, (b-)^2, b+, b-",
            exprs: || ops(&[Nb, BPlusSq, BMinusSq], &[BPlus, BMinus]),
            spec: None,
        }));
        r.register(Box::new(Fixed {
            name: "sp2",
            description: "sp(2): Nb, (b+)^2, (b-)^2",
            exprs: || ops(&[Nb, BPlusSq, BMinusSq], &[]),
            spec: None,
        }));
        r.register(Box::new(Fixed {
            name: "so3",
            description: "so(3): Nf, f+, f-",
            exprs: || ops(&[Nf], &[FPlus, FMinus]),
            spec: None,
        }));
        r.register(Box::new(Fixed {
            name: "so2",
            description: "so(2): Nf",
            exprs: || ops(&[Nf], &[]),
            spec: None,
        }));
        r
    }

    /// Adds a preset, replacing any preset of the same name.
    pub fn register(&mut self, preset: Box<dyn Preset>) {
        self.presets.retain(|p| p.name() != preset.name());
        self.presets.push(preset);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Preset> {
        self.presets
            .iter()
            .find(|p| p.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| FockError::UnknownPreset(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.presets.iter().map(|p| p.name()).collect()
    }
}

impl Default for PresetRegistry {
    fn default() -> Self {
        PresetRegistry::with_defaults()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantComponent {
    pub id: usize,
    pub dimension: usize,
    pub complete: bool,
    pub basis: Vec<BasisVector>,
}

/// Directed edge `from → to` contributed by operator `op` (an index into the
/// generator set). Self-loops are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub op: usize,
    pub from: BasisVector,
    pub to: BasisVector,
}

/// Support of every operator on the window `m ≤ m_max`.
#[derive(Clone, Debug)]
pub struct SupportGraph {
    pub window: Vec<BasisVector>,
    pub edges: Vec<Edge>,
    /// Window vectors some operator maps past `m_max`.
    pub leaks: BTreeSet<BasisVector>,
}

pub fn support_graph(gens: &GeneratorSet, params: &FockParams) -> Result<SupportGraph> {
    let window = enumerate_basis_upto(params.p(), params.m_max());
    let mut edges = Vec::new();
    let mut leaks = BTreeSet::new();
    for (op, expr) in gens.exprs.iter().enumerate() {
        for (from, img) in window_columns(expr, params)? {
            for to in img.support() {
                if to.m > params.m_max() {
                    leaks.insert(from);
                } else {
                    edges.push(Edge { op, from, to: *to });
                }
            }
        }
    }
    edges.sort();
    Ok(SupportGraph { window, edges, leaks })
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

fn components_of(graph: &SupportGraph) -> Vec<InvariantComponent> {
    let idx = |b: &BasisVector| graph.window.binary_search(b).expect("edge inside window");
    let mut uf = UnionFind::new(graph.window.len());
    for e in &graph.edges {
        uf.union(idx(&e.from), idx(&e.to));
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<BasisVector>> = Default::default();
    for (i, b) in graph.window.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(*b);
    }
    let mut comps: Vec<Vec<BasisVector>> = groups.into_values().collect();
    comps.sort_by(|a, b| a[0].cmp(&b[0]));
    comps
        .into_iter()
        .enumerate()
        .map(|(id, basis)| InvariantComponent {
            id,
            dimension: basis.len(),
            complete: basis.iter().all(|b| !graph.leaks.contains(b)),
            basis,
        })
        .collect()
}

/// Partition of the window into connected components, sorted by their
/// smallest basis vector.
pub fn decompose(gens: &GeneratorSet, params: &FockParams) -> Result<Vec<InvariantComponent>> {
    if params.m_max() < 2 {
        return Err(FockError::TruncationTooSmall { needed: 2, m_max: params.m_max() });
    }
    Ok(components_of(&support_graph(gens, params)?))
}

/// Smallest coordinate subspace containing the seeds and closed under the
/// operators, within the window. Overflow past `m_max` marks it incomplete.
pub fn closure(seeds: &[SparseVector], gens: &GeneratorSet, params: &FockParams) -> Result<InvariantComponent> {
    let cap = params.m_max() + gens.exprs.iter().map(|e| e.raising_degree()).max().unwrap_or(0);
    let ev = Evaluator::new(params.p(), cap, DerivedMode::ClosedForm);
    let mut seen: BTreeSet<BasisVector> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut complete = true;
    for s in seeds {
        for b in s.support() {
            if b.m > params.m_max() {
                complete = false;
            } else if seen.insert(*b) {
                queue.push_back(*b);
            }
        }
    }
    while let Some(b) = queue.pop_front() {
        let v = SparseVector::basis(b);
        for e in &gens.exprs {
            for w in ev.apply(e, &v)?.support() {
                if w.m > params.m_max() {
                    complete = false;
                } else if seen.insert(*w) {
                    queue.push_back(*w);
                }
            }
        }
    }
    let basis: Vec<BasisVector> = seen.into_iter().collect();
    Ok(InvariantComponent { id: 0, dimension: basis.len(), complete, basis })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Lower,
    Upper,
}

/// One family of anti-diagonal subspaces `⊕ V_{level−i,i}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalFamily {
    pub kind: FamilyKind,
    /// `k` for lower families, `s` for upper ones.
    pub index: u32,
    /// Common value of `m + n`.
    pub level: u32,
    pub dimension: usize,
    /// `2p` for lower families, `2s` for upper ones.
    pub formula_dimension: usize,
    pub matches_formula: bool,
    pub invariant: bool,
    pub basis: Vec<BasisVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalReport {
    pub p: u32,
    pub m_max: u32,
    pub families: Vec<DiagonalFamily>,
    pub disjoint: bool,
    /// The families cover every basis vector with `m + n ≤ m_max`.
    pub covers_window: bool,
    pub all_invariant: bool,
    /// Families whose measured dimension differs from the formula.
    pub formula_mismatches: Vec<String>,
}

fn diagonal(params: &FockParams, level: u32) -> Vec<BasisVector> {
    enumerate_basis_upto(params.p(), level)
        .into_iter()
        .filter(|b| b.m + b.n == level)
        .collect()
}

/// Lower families at levels `k + p` (`k ≥ 0`) and upper families at levels
/// `s < p`, checked for disjointness, coverage, and invariance under every
/// element of `spec` acting through the realization.
pub fn diagonal_decomposition(params: &FockParams, spec: &SuperAlgebraSpec) -> Result<DiagonalReport> {
    let p = params.p();
    if params.m_max() < p {
        return Err(FockError::TruncationTooSmall { needed: p, m_max: params.m_max() });
    }
    let mut families = Vec::new();
    for s in 0..p {
        families.push((FamilyKind::Upper, s, s, 2 * s as usize));
    }
    for k in 0..=(params.m_max() - p) {
        families.push((FamilyKind::Lower, k, k + p, 2 * p as usize));
    }
    let mut out = Vec::new();
    for (kind, index, level, formula) in families {
        let basis = diagonal(params, level);
        let members: BTreeSet<BasisVector> = basis.iter().copied().collect();
        let mut invariant = true;
        'outer: for b in &basis {
            let v = SparseVector::basis(*b);
            for el in &spec.basis {
                let img = act(spec, &el.name, &v, &params.with_m_max(params.m_max() + 1))?;
                if img.support().any(|w| !members.contains(w)) {
                    invariant = false;
                    break 'outer;
                }
            }
        }
        out.push(DiagonalFamily {
            kind,
            index,
            level,
            dimension: basis.len(),
            formula_dimension: formula,
            matches_formula: basis.len() == formula,
            invariant,
            basis,
        });
    }
    let mut seen = BTreeSet::new();
    let disjoint = out.iter().flat_map(|f| f.basis.iter()).all(|b| seen.insert(*b));
    let window: BTreeSet<BasisVector> = enumerate_basis_upto(p, params.m_max())
        .into_iter()
        .filter(|b| b.m + b.n <= params.m_max())
        .collect();
    let formula_mismatches = out
        .iter()
        .filter(|f| !f.matches_formula)
        .map(|f| {
            let label = match f.kind {
                FamilyKind::Lower => format!("lower k={}", f.index),
                FamilyKind::Upper => format!("upper s={}", f.index),
            };
            format!("{label}: dimension {} vs formula {}", f.dimension, f.formula_dimension)
        })
        .collect();
    Ok(DiagonalReport {
        p,
        m_max: params.m_max(),
        all_invariant: out.iter().all(|f| f.invariant),
        families: out,
        disjoint,
        covers_window: seen == window,
        formula_mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilledEmptyReport {
    pub p: u32,
    pub m_max: u32,
    /// `m + n` even; contains the vacuum.
    pub empty: Vec<BasisVector>,
    /// `m + n` odd.
    pub filled: Vec<BasisVector>,
    pub vacuum_in_empty: bool,
    pub component_count: usize,
    /// The decomposition under `gens` is exactly `{empty, filled}`.
    pub matches_decomposition: bool,
}

/// Splits the window by the parity of `m + n` and compares with the
/// decomposition under `gens` (normally the `l00l01` preset).
pub fn filled_empty_split(gens: &GeneratorSet, params: &FockParams) -> Result<FilledEmptyReport> {
    if params.m_max() < 4 {
        return Err(FockError::TruncationTooSmall { needed: 4, m_max: params.m_max() });
    }
    let (empty, filled): (Vec<BasisVector>, Vec<BasisVector>) = enumerate_basis_upto(params.p(), params.m_max())
        .into_iter()
        .partition(|b| (b.m + b.n) % 2 == 0);
    let comps = decompose(gens, params)?;
    let mut found: Vec<&Vec<BasisVector>> = comps.iter().map(|c| &c.basis).collect();
    found.sort();
    let mut expected = vec![&empty, &filled];
    expected.sort();
    Ok(FilledEmptyReport {
        p: params.p(),
        m_max: params.m_max(),
        vacuum_in_empty: empty.contains(&BasisVector::VACUUM),
        component_count: comps.len(),
        matches_decomposition: found == expected,
        empty,
        filled,
    })
}

/// Edges of `graph` restricted to column `n`, keyed by `(op, m_from, m_to)`.
pub fn column_edge_pattern(graph: &SupportGraph, n: u32) -> BTreeSet<(usize, u32, u32)> {
    graph
        .edges
        .iter()
        .filter(|e| e.from.n == n && e.to.n == n)
        .map(|e| (e.op, e.from.m, e.to.m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::enumerate_basis;

    fn params(p: u32, m_max: u32) -> FockParams {
        FockParams::new(p, m_max).unwrap()
    }

    fn preset(name: &str) -> GeneratorSet {
        PresetRegistry::with_defaults().get(name).unwrap().generators()
    }

    #[test]
    fn registry_lookup() {
        let r = PresetRegistry::with_defaults();
        assert_eq!(r.names(), vec!["gl11", "l00l01", "osp12", "sp2", "so3", "so2"]);
        assert!(r.get("gl11").unwrap().realization_spec().is_some());
        assert!(matches!(r.get("su5"), Err(FockError::UnknownPreset(_))));
    }

    #[test]
    fn closure_examples() {
        let pr = params(3, 4);
        let c = closure(&[SparseVector::vacuum()], &preset("so3"), &pr).unwrap();
        assert_eq!(c.basis, (0..=3).map(|n| BasisVector::alpha(0, n)).collect::<Vec<_>>());
        assert!(c.complete);
        let c = closure(&[SparseVector::vacuum()], &preset("gl11"), &pr).unwrap();
        assert_eq!(c.basis, vec![BasisVector::VACUUM]);
        let c = closure(&[SparseVector::new()], &preset("gl11"), &pr).unwrap();
        assert_eq!(c.dimension, 0);
    }

    #[test]
    fn so3_rows_and_so2_singletons() {
        let pr = params(2, 3);
        let rows = decompose(&preset("so3"), &pr).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|c| c.complete));
        assert!(rows.iter().all(|c| c.basis.iter().all(|b| b.m == c.basis[0].m)));
        let single = decompose(&preset("so2"), &pr).unwrap();
        assert_eq!(single.len(), enumerate_basis(&pr).len());
    }

    #[test]
    fn gl11_components_sit_on_diagonals() {
        let pr = params(2, 8);
        let comps = decompose(&preset("gl11"), &pr).unwrap();
        assert_eq!(comps[0].basis, vec![BasisVector::VACUUM]);
        for c in &comps {
            let level = c.basis[0].m + c.basis[0].n;
            assert!(c.basis.iter().all(|b| b.m + b.n == level));
        }
    }

    #[test]
    fn partition_property() {
        let pr = params(3, 5);
        for name in PresetRegistry::with_defaults().names() {
            let comps = decompose(&preset(name), &pr).unwrap();
            let mut all: Vec<BasisVector> = comps.iter().flat_map(|c| c.basis.clone()).collect();
            all.sort();
            assert_eq!(all, enumerate_basis(&pr), "{name}");
        }
    }

    #[test]
    fn diagonal_s0_flagged() {
        let r = diagonal_decomposition(&params(3, 8), &gl11_spec()).unwrap();
        assert!(r.disjoint && r.covers_window && r.all_invariant);
        assert_eq!(r.formula_mismatches, vec!["upper s=0: dimension 1 vs formula 0".to_string()]);
        let lower0 = r.families.iter().find(|f| f.kind == FamilyKind::Lower && f.index == 0).unwrap();
        assert_eq!(lower0.dimension, 6);
        let upper2 = r.families.iter().find(|f| f.kind == FamilyKind::Upper && f.index == 2).unwrap();
        assert_eq!(upper2.dimension, 4);
    }

    #[test]
    fn filled_empty() {
        let r = filled_empty_split(&preset("l00l01"), &params(2, 8)).unwrap();
        assert!(r.vacuum_in_empty);
        assert!(r.matches_decomposition, "{} components", r.component_count);
    }

    #[test]
    fn order_of_generators_is_irrelevant() {
        let pr = params(2, 6);
        let mut g = preset("l00l01");
        let a = decompose(&g, &pr).unwrap();
        g.exprs.reverse();
        assert_eq!(decompose(&g, &pr).unwrap(), a);
    }
}
