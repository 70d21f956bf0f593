//! Applies operator expressions to sparse vectors.

use crate::error::Result;
use crate::fock::SparseVector;
use crate::operators::derived::{apply_closed_form_capped, DerivedOp};
use crate::operators::expr::OperatorExpr;
use crate::operators::generator::apply_generator_capped;
use crate::scalar::Scalar;

/// How derived operators are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivedMode {
    /// Expand through the generator definitions.
    Definition,
    /// Use closed forms where they exist, definitions otherwise.
    ClosedForm,
}

/// Evaluates expressions at a fixed order `p`. Any intermediate vector with a
/// term above `cap` is a `TruncationOverflow` error.
#[derive(Clone, Debug)]
pub struct Evaluator {
    p: u32,
    cap: u32,
    mode: DerivedMode,
    definitions: Vec<OperatorExpr>,
}

impl Evaluator {
    pub fn new(p: u32, cap: u32, mode: DerivedMode) -> Self {
        let definitions = DerivedOp::ALL.iter().map(|d| d.definition(p)).collect();
        Evaluator { p, cap, mode, definitions }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn mode(&self) -> DerivedMode {
        self.mode
    }

    fn definition(&self, d: DerivedOp) -> &OperatorExpr {
        let idx = DerivedOp::ALL.iter().position(|x| *x == d).expect("listed in ALL");
        &self.definitions[idx]
    }

    pub fn apply(&self, expr: &OperatorExpr, v: &SparseVector) -> Result<SparseVector> {
        if v.is_zero() {
            return Ok(SparseVector::new());
        }
        match expr {
            OperatorExpr::Identity => Ok(v.clone()),
            OperatorExpr::Gen(g) => {
                let mut out = SparseVector::new();
                for (b, c) in v.iter() {
                    out.add_scaled(c, &apply_generator_capped(*g, b, self.p, self.cap)?);
                }
                Ok(out)
            }
            OperatorExpr::Derived(d) => {
                if self.mode == DerivedMode::ClosedForm && d.has_closed_form() {
                    let mut out = SparseVector::new();
                    for (b, c) in v.iter() {
                        out.add_scaled(c, &apply_closed_form_capped(*d, b, self.p, self.cap)?);
                    }
                    Ok(out)
                } else {
                    self.apply(self.definition(*d), v)
                }
            }
            OperatorExpr::Scaled(c, x) => {
                if c.is_zero() {
                    Ok(SparseVector::new())
                } else {
                    Ok(self.apply(x, v)?.scaled(c))
                }
            }
            OperatorExpr::Sum(xs) => {
                let mut out = SparseVector::new();
                for x in xs {
                    out.add_scaled(&Scalar::one(), &self.apply(x, v)?);
                }
                Ok(out)
            }
            OperatorExpr::Product(xs) => {
                let mut cur = v.clone();
                for x in xs.iter().rev() {
                    cur = self.apply(x, &cur)?;
                    if cur.is_zero() {
                        break;
                    }
                }
                Ok(cur)
            }
            OperatorExpr::Commutator(a, b) => {
                let ab = self.apply(a, &self.apply(b, v)?)?;
                let ba = self.apply(b, &self.apply(a, v)?)?;
                Ok(ab.sub(&ba))
            }
            OperatorExpr::Anticommutator(a, b) => {
                let mut ab = self.apply(a, &self.apply(b, v)?)?;
                let ba = self.apply(b, &self.apply(a, v)?)?;
                ab.add_scaled(&Scalar::one(), &ba);
                Ok(ab)
            }
        }
    }
}
