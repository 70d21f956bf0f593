use std::collections::{BTreeMap, BTreeSet};

use pbf_core::decomposition::{
    closure, decompose, diagonal_decomposition, filled_empty_split, support_graph, FamilyKind, GeneratorSet,
    InvariantComponent, Preset, PresetRegistry,
};
use pbf_core::fock::enumerate_basis;
use pbf_core::operators::{DerivedMode, Evaluator, Generator, OperatorExpr};
use pbf_core::realization::gl11_spec;
use pbf_core::{BasisVector, FockError, FockParams, SparseVector};
use proptest::prelude::*;

fn params(p: u32, m_max: u32) -> FockParams {
    FockParams::new(p, m_max).unwrap()
}

fn preset(name: &str) -> GeneratorSet {
    PresetRegistry::with_defaults().get(name).unwrap().generators()
}

fn containing(cs: &[InvariantComponent], b: BasisVector) -> &InvariantComponent {
    cs.iter().find(|c| c.basis.contains(&b)).unwrap()
}

#[test]
fn registry_contents() {
    let reg = PresetRegistry::default();
    assert_eq!(reg.names(), vec!["gl11", "l00l01", "osp12", "sp2", "so3", "so2"]);
    assert!(reg.get("gl11").unwrap().realization_spec().is_some());
    assert!(reg.get("so3").unwrap().realization_spec().is_none());
    assert!(matches!(reg.get("e8"), Err(FockError::UnknownPreset(_))));
    assert_eq!(reg.get("l00l01").unwrap().generators().exprs.len(), 8);
}

struct Bosons;

impl Preset for Bosons {
    fn name(&self) -> &'static str {
        "so2"
    }
    fn description(&self) -> &'static str {
        "b+, b-"
    }
    fn generators(&self) -> GeneratorSet {
        GeneratorSet::new("so2", vec![OperatorExpr::gen(Generator::BPlus), OperatorExpr::gen(Generator::BMinus)])
    }
}

#[test]
fn registering_replaces_by_name() {
    let mut reg = PresetRegistry::with_defaults();
    reg.register(Box::new(Bosons));
    assert_eq!(reg.names().len(), 6);
    assert_eq!(reg.get("so2").unwrap().description(), "b+, b-");
}

#[test]
fn closure_examples() {
    for p in 1..=4u32 {
        let pr = params(p, 6);
        let row = closure(&[SparseVector::vacuum()], &preset("so3"), &pr).unwrap();
        assert_eq!(row.dimension, p as usize + 1);
        assert!(row.complete);
        let star = closure(&[SparseVector::vacuum()], &preset("gl11"), &pr).unwrap();
        assert_eq!(star.basis, vec![BasisVector::VACUUM]);
        let empty = closure(&[SparseVector::new()], &preset("gl11"), &pr).unwrap();
        assert_eq!(empty.dimension, 0);
    }
}

#[test]
fn closure_marks_truncation() {
    let pr = params(2, 4);
    let c = closure(&[SparseVector::vacuum()], &preset("osp12"), &pr).unwrap();
    assert!(!c.complete);
    assert_eq!(c.basis.iter().map(|b| b.m).max(), Some(4));
}

#[test]
fn gl11_diagonals() {
    let pr = params(2, 8);
    let cs = decompose(&preset("gl11"), &pr).unwrap();
    assert_eq!(cs[0].basis, vec![BasisVector::VACUUM]);
    assert_eq!(containing(&cs, BasisVector::alpha(0, 1)).dimension, 2);
    let mut per_level: BTreeMap<u32, usize> = BTreeMap::new();
    for c in &cs {
        let level = c.basis[0].m + c.basis[0].n;
        assert!(c.basis.iter().all(|b| b.m + b.n == level));
        *per_level.entry(level).or_default() += c.dimension;
    }
    for (level, dim) in per_level.range(2..=8) {
        assert_eq!(*dim, 4, "level {level}");
    }
}

#[test]
fn so3_rows() {
    let cs = decompose(&preset("so3"), &params(2, 3)).unwrap();
    assert_eq!(cs.len(), 4);
    for (m, c) in cs.iter().enumerate() {
        assert!(c.complete);
        assert!(c.basis.iter().all(|b| b.m as usize == m));
    }
}

#[test]
fn so2_singletons() {
    for p in 1..=4u32 {
        let pr = params(p, 4);
        let cs = decompose(&preset("so2"), &pr).unwrap();
        assert_eq!(cs.len(), enumerate_basis(&pr).len());
    }
}

#[test]
fn osp12_columns() {
    for p in 1..=4u32 {
        let cs = decompose(&preset("osp12"), &params(p, 8)).unwrap();
        assert_eq!(cs.len(), p as usize + 1);
        for (n, c) in cs.iter().enumerate() {
            assert!(c.basis.iter().all(|b| b.n as usize == n));
        }
    }
}

#[test]
fn filled_and_empty() {
    let r = filled_empty_split(&preset("l00l01"), &params(2, 8)).unwrap();
    assert_eq!(r.component_count, 2);
    assert!(r.vacuum_in_empty);
    assert!(r.matches_decomposition);
    assert!(r.empty.contains(&BasisVector::VACUUM));
    assert!(r.empty.iter().all(|b| (b.m + b.n) % 2 == 0));
    assert!(r.filled.iter().all(|b| (b.m + b.n) % 2 == 1));
}

#[test]
fn diagonal_family_sizes() {
    let r = diagonal_decomposition(&params(3, 10), &gl11_spec()).unwrap();
    let find = |kind, index| r.families.iter().find(|f| f.kind == kind && f.index == index).unwrap();
    assert_eq!(find(FamilyKind::Lower, 0).dimension, 6);
    assert_eq!(find(FamilyKind::Upper, 2).dimension, 4);
    let star = find(FamilyKind::Upper, 0);
    assert_eq!(star.basis, vec![BasisVector::VACUUM]);
    assert!(!star.matches_formula);
    assert_eq!(r.formula_mismatches.len(), 1);
    assert!(r.disjoint && r.covers_window && r.all_invariant);
}

#[test]
fn preconditions() {
    let e = |r: Result<(), FockError>| matches!(r, Err(FockError::TruncationTooSmall { .. }));
    assert!(e(decompose(&preset("gl11"), &params(2, 1)).map(|_| ())));
    assert!(e(diagonal_decomposition(&params(4, 3), &gl11_spec()).map(|_| ())));
    assert!(e(filled_empty_split(&preset("l00l01"), &params(2, 3)).map(|_| ())));
}

#[test]
fn complete_components_are_invariant() {
    for name in PresetRegistry::with_defaults().names() {
        for p in 1..=3u32 {
            let pr = params(p, 8);
            let gens = preset(name);
            let ev = Evaluator::new(p, 10, DerivedMode::Definition);
            for c in decompose(&gens, &pr).unwrap().iter().filter(|c| c.complete) {
                let span: BTreeSet<_> = c.basis.iter().copied().collect();
                for b in &c.basis {
                    for e in &gens.exprs {
                        let img = ev.apply(e, &SparseVector::basis(*b)).unwrap();
                        assert!(img.support().all(|w| span.contains(w)), "{name} p={p}: {e} on {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn leaks_reach_past_window() {
    let g = support_graph(&preset("osp12"), &params(2, 4)).unwrap();
    assert!(!g.leaks.is_empty());
    assert!(g.leaks.iter().all(|b| b.m == 4 || b.m == 3));
}

fn arb_preset() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["gl11", "l00l01", "osp12", "sp2", "so3", "so2"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn components_partition_the_basis(name in arb_preset(), p in 1u32..=4, m_max in 2u32..9) {
        let pr = params(p, m_max);
        let cs = decompose(&preset(name), &pr).unwrap();
        let mut all: Vec<BasisVector> = cs.iter().flat_map(|c| c.basis.iter().copied()).collect();
        let total = all.len();
        all.sort();
        all.dedup();
        prop_assert_eq!(all.len(), total);
        prop_assert_eq!(all, enumerate_basis(&pr));
        prop_assert!(cs.windows(2).all(|w| w[0].basis[0] < w[1].basis[0]));
    }

    #[test]
    fn order_of_generators_is_irrelevant(name in arb_preset(), p in 1u32..=4, seed in any::<u64>()) {
        let pr = params(p, 6);
        let gens = preset(name);
        let mut shuffled = gens.exprs.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        let a = decompose(&gens, &pr).unwrap();
        let b = decompose(&GeneratorSet::new(name, shuffled), &pr).unwrap();
        prop_assert_eq!(
            a.iter().map(|c| &c.basis).collect::<Vec<_>>(),
            b.iter().map(|c| &c.basis).collect::<Vec<_>>()
        );
    }
}
