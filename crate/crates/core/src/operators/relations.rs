//! The catalog of identities satisfied by the generators, and exact
//! verification of each identity on a truncated carrier space.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FockError, Result};
use crate::fock::{enumerate_basis_upto, BasisVector, FockParams, SparseVector};
use crate::operators::derived::DerivedOp;
use crate::operators::eval::{DerivedMode, Evaluator};
use crate::operators::expr::OperatorExpr;
use crate::operators::generator::Generator;
use crate::scalar::Scalar;

/// `lhs = rhs`, optionally only asserted on the vacuum.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub name: String,
    pub lhs: OperatorExpr,
    pub rhs: OperatorExpr,
    pub vacuum_only: bool,
}

impl Identity {
    pub fn new(name: impl Into<String>, lhs: OperatorExpr, rhs: OperatorExpr) -> Self {
        Identity { name: name.into(), lhs, rhs, vacuum_only: false }
    }

    pub fn on_vacuum(name: impl Into<String>, lhs: OperatorExpr, rhs: OperatorExpr) -> Self {
        Identity { name: name.into(), lhs, rhs, vacuum_only: true }
    }

    /// Number of `m` levels to keep free above the checked vectors.
    pub fn margin(&self) -> u32 {
        self.lhs.raising_degree().max(self.rhs.raising_degree())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub basis: BasisVector,
    pub residual: SparseVector,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub relation: String,
    pub identity: String,
    pub p: u32,
    pub m_max: u32,
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<Failure>,
}

/// Checks `lhs·v = rhs·v` for every basis vector `v` with
/// `m ≤ m_max − margin` (or for the vacuum alone).
pub fn verify_relation(identity: &Identity, params: &FockParams) -> Result<VerificationReport> {
    let margin = identity.margin();
    if margin > params.m_max() {
        return Err(FockError::TruncationTooSmall { needed: margin, m_max: params.m_max() });
    }
    let ev = Evaluator::new(params.p(), params.m_max(), DerivedMode::Definition);
    let targets = if identity.vacuum_only {
        vec![BasisVector::VACUUM]
    } else {
        enumerate_basis_upto(params.p(), params.m_max() - margin)
    };
    let residuals = targets
        .par_iter()
        .map(|b| {
            let v = SparseVector::basis(*b);
            let lhs = ev.apply(&identity.lhs, &v)?;
            let rhs = ev.apply(&identity.rhs, &v)?;
            Ok((*b, lhs.sub(&rhs)))
        })
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<Failure> = residuals
        .into_iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(basis, residual)| Failure { basis, residual })
        .collect();
    Ok(VerificationReport {
        relation: identity.name.clone(),
        identity: format!("{} = {}", identity.lhs, identity.rhs),
        p: params.p(),
        m_max: params.m_max(),
        pass: failures.is_empty(),
        checked: targets.len(),
        failures,
    })
}

/// Named identities for a fixed order `p` (only the Fock conditions depend on it).
#[derive(Clone, Debug)]
pub struct RelationCatalog {
    identities: Vec<Identity>,
}

fn g(x: Generator) -> OperatorExpr {
    OperatorExpr::gen(x)
}

fn d(x: DerivedOp) -> OperatorExpr {
    OperatorExpr::derived(x)
}

fn c(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
    OperatorExpr::comm(a, b)
}

fn ac(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
    OperatorExpr::anti(a, b)
}

fn k(v: i64, e: OperatorExpr) -> OperatorExpr {
    e.scale(Scalar::from_int(v))
}

fn zero() -> OperatorExpr {
    OperatorExpr::zero()
}

fn b(sign: i64) -> OperatorExpr {
    g(if sign > 0 { Generator::BPlus } else { Generator::BMinus })
}

fn f(sign: i64) -> OperatorExpr {
    g(if sign > 0 { Generator::FPlus } else { Generator::FMinus })
}

fn sign_char(s: i64) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

/// Sum of `coeff·term`, skipping zero coefficients.
fn combo(terms: Vec<(Scalar, OperatorExpr)>) -> OperatorExpr {
    OperatorExpr::Sum(
        terms
            .into_iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| e.scale(c))
            .collect(),
    )
}

fn int(v: i64) -> Scalar {
    Scalar::from_int(v)
}

fn half_sq(v: i64) -> Scalar {
    Scalar::ratio(v * v, 2)
}

impl RelationCatalog {
    pub fn for_order(p: u32) -> Self {
        use Generator::*;
        let (bp, bm, fp, fm) = (g(BPlus), g(BMinus), g(FPlus), g(FMinus));
        let mut ids = Vec::new();

        let mixed = vec![
            (c(ac(bp.clone(), bp.clone()), fm.clone()), zero()),
            (c(c(fp.clone(), fm.clone()), bm.clone()), zero()),
            (c(ac(bm.clone(), bm.clone()), fm.clone()), zero()),
            (c(ac(bp.clone(), bm.clone()), fm.clone()), zero()),
            (c(ac(fm.clone(), bp.clone()), bm.clone()), k(-2, fm.clone())),
            (ac(ac(bm.clone(), fp.clone()), fm.clone()), k(2, bm.clone())),
            (c(ac(bm.clone(), fm.clone()), bp.clone()), k(2, fm.clone())),
            (ac(ac(fm.clone(), bm.clone()), fp.clone()), k(2, bm.clone())),
            (c(ac(bm.clone(), bp.clone()), fp.clone()), zero()),
            (c(c(fm.clone(), fp.clone()), bp.clone()), zero()),
            (c(ac(fp.clone(), bm.clone()), bp.clone()), k(2, fp.clone())),
            (ac(ac(bp.clone(), fm.clone()), fp.clone()), k(2, bp.clone())),
            (c(ac(bp.clone(), fp.clone()), bm.clone()), k(-2, fp.clone())),
            (ac(ac(fp.clone(), bp.clone()), fm.clone()), k(2, bp.clone())),
            (c(ac(fm.clone(), bm.clone()), bm.clone()), zero()),
            (c(ac(fm.clone(), bp.clone()), bp.clone()), zero()),
            (c(ac(bp.clone(), bp.clone()), fp.clone()), zero()),
            (c(ac(bm.clone(), bm.clone()), fp.clone()), zero()),
            (c(ac(fp.clone(), bp.clone()), bp.clone()), zero()),
            (c(ac(fp.clone(), bm.clone()), bm.clone()), zero()),
            (ac(ac(bm.clone(), fm.clone()), fm.clone()), zero()),
            (ac(ac(bm.clone(), fp.clone()), fp.clone()), zero()),
            (ac(ac(bp.clone(), fp.clone()), fp.clone()), zero()),
            (ac(ac(bp.clone(), fm.clone()), fm.clone()), zero()),
        ];
        for (i, (l, r)) in mixed.into_iter().enumerate() {
            ids.push(Identity::new(format!("mixed.{:02}", i + 1), l, r));
        }

        let pure = vec![
            (c(bm.clone(), ac(bp.clone(), bm.clone())), k(2, bm.clone())),
            (c(bp.clone(), ac(bp.clone(), bp.clone())), zero()),
            (c(bm.clone(), ac(bm.clone(), bm.clone())), zero()),
            (c(bm.clone(), ac(bp.clone(), bp.clone())), k(4, bp.clone())),
            (c(bp.clone(), ac(bm.clone(), bm.clone())), k(-4, bm.clone())),
            (c(fm.clone(), c(fp.clone(), fm.clone())), k(2, fm.clone())),
            (c(bp.clone(), ac(bm.clone(), bp.clone())), k(-2, bp.clone())),
            (c(fp.clone(), c(fm.clone(), fp.clone())), k(2, fp.clone())),
        ];
        for (i, (l, r)) in pure.into_iter().enumerate() {
            ids.push(Identity::new(format!("pure.{:02}", i + 1), l, r));
        }

        let (qp, qm) = (d(DerivedOp::QPlus), d(DerivedOp::QMinus));
        let rewritten = vec![
            (c(bm.clone(), qm.clone()), fm.clone()),
            (c(bm.clone(), qp.clone()), zero()),
            (ac(fm.clone(), qp.clone()), bm.clone()),
            (ac(fm.clone(), qm.clone()), zero()),
            (c(bp.clone(), qp.clone()), k(-1, fp.clone())),
            (c(bp.clone(), qm.clone()), zero()),
            (ac(fp.clone(), qm.clone()), bp.clone()),
            (ac(fp.clone(), qp.clone()), zero()),
            (c(d(DerivedOp::Nb), fp.clone()), zero()),
            (c(d(DerivedOp::Nf), bp.clone()), zero()),
        ];
        for (i, (l, r)) in rewritten.into_iter().enumerate() {
            ids.push(Identity::new(format!("rewritten.{:02}", i + 1), l, r));
        }

        ids.extend(lie_superalgebra_identities());
        ids.extend(general_linear_identities());

        for (name, op) in [
            ("qplus", DerivedOp::QPlus),
            ("qminus", DerivedOp::QMinus),
            ("rplus", DerivedOp::RPlus),
            ("rminus", DerivedOp::RMinus),
        ] {
            ids.push(Identity::new(format!("nilpotency.{name}"), d(op).pow(2), zero()));
        }

        let p_id = OperatorExpr::scalar(int(p as i64));
        ids.push(Identity::on_vacuum("fock.b-minus-b-plus", bm.clone() * bp.clone(), p_id.clone()));
        ids.push(Identity::on_vacuum("fock.f-minus-f-plus", fm.clone() * fp.clone(), p_id));
        ids.push(Identity::on_vacuum("fock.b-minus-f-plus", bm.clone() * fp.clone(), zero()));
        ids.push(Identity::on_vacuum("fock.f-minus-b-plus", fm.clone() * bp.clone(), zero()));
        ids.push(Identity::on_vacuum("fock.b-minus-vacuum", bm, zero()));
        ids.push(Identity::on_vacuum("fock.f-minus-vacuum", fm, zero()));

        let (nb, nf, ns) = (d(DerivedOp::Nb), d(DerivedOp::Nf), d(DerivedOp::Ns));
        ids.push(Identity::new("csco.nb-nf", c(nb.clone(), nf.clone()), zero()));
        ids.push(Identity::new("csco.nb-ns", c(nb, ns.clone()), zero()));
        ids.push(Identity::new("csco.nf-ns", c(nf, ns), zero()));

        RelationCatalog { identities: ids }
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.identities.iter().map(|i| i.name.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&Identity> {
        self.identities.iter().find(|i| i.name == name)
    }

    /// Identities whose name equals one of `selectors` or starts with
    /// `selector.` (so `mixed` picks the whole family). Catalog order is kept.
    pub fn select(&self, selectors: &[String]) -> Result<Vec<&Identity>> {
        for s in selectors {
            let hit = self
                .identities
                .iter()
                .any(|i| i.name == *s || i.name.starts_with(&format!("{s}.")));
            if !hit {
                return Err(FockError::UnknownRelation(s.clone()));
            }
        }
        Ok(self
            .identities
            .iter()
            .filter(|i| {
                selectors
                    .iter()
                    .any(|s| i.name == *s || i.name.starts_with(&format!("{s}.")))
            })
            .collect())
    }

    /// Verifies the selected identities (all when `selectors` is empty) in
    /// parallel. Reports come back in catalog order.
    pub fn verify(&self, params: &FockParams, selectors: &[String]) -> Result<Vec<VerificationReport>> {
        let chosen: Vec<&Identity> = if selectors.is_empty() {
            self.identities.iter().collect()
        } else {
            self.select(selectors)?
        };
        chosen.par_iter().map(|i| verify_relation(i, params)).collect()
    }
}

/// Brackets of the quadratic elements at one bosonic and one fermionic
/// mode, for every choice of the four signs.
fn lie_superalgebra_identities() -> Vec<Identity> {
    let mut out = Vec::new();
    let signs = [1i64, -1];
    for fam in 1..=6 {
        for &xi in &signs {
            for &eta in &signs {
                for &eps in &signs {
                    for &phi in &signs {
                        let (lhs, rhs) = match fam {
                            1 => (
                                c(ac(b(xi), b(eta)), ac(b(eps), b(phi))),
                                combo(vec![
                                    (int(eps - eta), ac(b(xi), b(phi))),
                                    (int(eps - xi), ac(b(eta), b(phi))),
                                    (int(phi - eta), ac(b(xi), b(eps))),
                                    (int(phi - xi), ac(b(eta), b(eps))),
                                ]),
                            ),
                            2 => (c(ac(b(xi), b(eta)), c(f(eps), f(phi))), zero()),
                            3 => (
                                c(ac(b(xi), b(eta)), ac(f(eps), b(phi))),
                                combo(vec![
                                    (int(phi - eta), ac(f(eps), b(xi))),
                                    (int(phi - xi), ac(f(eps), b(eta))),
                                ]),
                            ),
                            4 => (
                                c(c(f(xi), f(eta)), c(f(eps), f(phi))),
                                combo(vec![
                                    (half_sq(phi - eta), c(f(eps), f(xi))),
                                    (half_sq(phi - xi), c(f(eta), f(eps))),
                                    (half_sq(eps - eta), c(f(xi), f(phi))),
                                    (half_sq(eps - xi), c(f(phi), f(eta))),
                                ]),
                            ),
                            5 => (
                                c(c(f(xi), f(eta)), ac(f(eps), b(phi))),
                                combo(vec![
                                    (half_sq(eps - eta), ac(f(xi), b(phi))),
                                    (-half_sq(eps - xi), ac(f(eta), b(phi))),
                                ]),
                            ),
                            _ => (
                                ac(ac(f(xi), b(eta)), ac(f(eps), b(phi))),
                                combo(vec![
                                    (int(phi - eta), c(f(xi), f(eps))),
                                    (half_sq(eps - xi), ac(b(eta), b(phi))),
                                ]),
                            ),
                        };
                        let name = format!(
                            "lsa.{fam}.{}{}{}{}",
                            sign_char(xi),
                            sign_char(eta),
                            sign_char(eps),
                            sign_char(phi)
                        );
                        out.push(Identity::new(name, lhs, rhs));
                    }
                }
            }
        }
    }
    out
}

/// The general linear superalgebra brackets at one bosonic and one
/// fermionic mode.
fn general_linear_identities() -> Vec<Identity> {
    let bb = || ac(b(1), b(-1));
    let ff = || c(f(1), f(-1));
    let fb_minus = || ac(f(1), b(-1));
    let fb_plus = || ac(f(-1), b(1));
    vec![
        Identity::new("gl.1", c(bb(), bb()), k(2, bb()) - k(2, bb())),
        Identity::new("gl.2", c(bb(), ff()), zero()),
        Identity::new("gl.3", c(ff(), ff()), k(2, ff()) - k(2, ff())),
        Identity::new("gl.4a", ac(fb_minus(), fb_minus()), zero()),
        Identity::new("gl.4b", ac(fb_plus(), fb_plus()), zero()),
        Identity::new("gl.5", ac(fb_minus(), fb_plus()), k(2, ff()) + k(2, ac(b(1), b(-1)))),
        Identity::new("gl.6", c(bb(), fb_minus()), k(-2, fb_minus())),
        Identity::new("gl.7", c(bb(), fb_plus()), k(2, fb_plus())),
        Identity::new("gl.8", c(ff(), fb_minus()), k(2, fb_minus())),
        Identity::new("gl.9", c(ff(), fb_plus()), k(-2, ac(f(-1), b(1)))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_stable() {
        let cat = RelationCatalog::for_order(2);
        let mut names: Vec<&str> = cat.names().collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
        assert!(cat.get("mixed.24").is_some());
        assert!(cat.get("pure.08").is_some());
        assert!(cat.get("nilpotency.qplus").is_some());
        assert!(cat.get("fock.b-minus-b-plus").is_some());
        assert_eq!(cat.names().filter(|s| s.starts_with("lsa.")).count(), 96);
    }

    #[test]
    fn family_selection() {
        let cat = RelationCatalog::for_order(2);
        assert_eq!(cat.select(&["mixed".into()]).unwrap().len(), 24);
        assert_eq!(cat.select(&["pure.03".into(), "gl".into()]).unwrap().len(), 11);
        assert!(matches!(cat.select(&["nope".into()]), Err(FockError::UnknownRelation(_))));
    }

    #[test]
    fn mixed_relation_example() {
        let cat = RelationCatalog::for_order(2);
        let pr = FockParams::new(2, 8).unwrap();
        let r = verify_relation(cat.get("mixed.05").unwrap(), &pr).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.checked, enumerate_basis_upto(2, 7).len());
    }

    #[test]
    fn wrong_identity_reports_residuals() {
        let pr = FockParams::new(2, 4).unwrap();
        let bogus = Identity::new("bogus", g(Generator::FMinus), zero());
        let r = verify_relation(&bogus, &pr).unwrap();
        assert!(!r.pass);
        assert!(r.failures.iter().all(|f| !f.residual.is_zero()));
    }

    #[test]
    fn margin_larger_than_truncation_is_an_error() {
        let pr = FockParams::new(2, 1).unwrap();
        let cat = RelationCatalog::for_order(2);
        let err = verify_relation(cat.get("pure.02").unwrap(), &pr).unwrap_err();
        assert_eq!(err, FockError::TruncationTooSmall { needed: 3, m_max: 1 });
    }
}
