//! Number operators, the mixed bilinears `Q±`, `R±`, and their closed forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::{BasisVector, FockParams, Kind, SparseVector};
use crate::operators::expr::OperatorExpr;
use crate::operators::generator::{collect_terms, sign, Generator, RawTerm};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DerivedOp {
    Nb,
    Nf,
    Ns,
    QPlus,
    QMinus,
    RPlus,
    RMinus,
    BPlusSq,
    BMinusSq,
}

impl DerivedOp {
    pub const ALL: [DerivedOp; 9] = [
        DerivedOp::Nb,
        DerivedOp::Nf,
        DerivedOp::Ns,
        DerivedOp::QPlus,
        DerivedOp::QMinus,
        DerivedOp::RPlus,
        DerivedOp::RMinus,
        DerivedOp::BPlusSq,
        DerivedOp::BMinusSq,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            DerivedOp::Nb => "Nb",
            DerivedOp::Nf => "Nf",
            DerivedOp::Ns => "Ns",
            DerivedOp::QPlus => "Q+",
            DerivedOp::QMinus => "Q-",
            DerivedOp::RPlus => "R+",
            DerivedOp::RMinus => "R-",
            DerivedOp::BPlusSq => "(b+)^2",
            DerivedOp::BMinusSq => "(b-)^2",
        }
    }

    /// Whether `apply_derived_closed_form` handles this operator.
    pub fn has_closed_form(self) -> bool {
        matches!(self, DerivedOp::Nb | DerivedOp::Nf | DerivedOp::QPlus | DerivedOp::QMinus)
    }

    /// Expansion in terms of the generators. This is the reference path the
    /// closed forms are checked against.
    pub fn definition(self, p: u32) -> OperatorExpr {
        use Generator::*;
        let half = Scalar::ratio(1, 2);
        let p_half = Scalar::ratio(p as i64, 2);
        let g = OperatorExpr::gen;
        match self {
            DerivedOp::Nb => OperatorExpr::anti(g(BPlus), g(BMinus)).scale(half)
                - OperatorExpr::scalar(p_half),
            DerivedOp::Nf => OperatorExpr::comm(g(FPlus), g(FMinus)).scale(half)
                + OperatorExpr::scalar(p_half),
            DerivedOp::Ns => {
                let nf = OperatorExpr::derived(DerivedOp::Nf);
                let inner = nf.pow(2)
                    - nf.scale(Scalar::from_int(p as i64 + 1))
                    + g(FPlus) * g(FMinus)
                    + OperatorExpr::scalar(p_half);
                inner.scale(Scalar::ratio(1, p as i64))
            }
            DerivedOp::QPlus => OperatorExpr::anti(g(BMinus), g(FPlus)).scale(half),
            DerivedOp::QMinus => OperatorExpr::anti(g(BPlus), g(FMinus)).scale(half),
            DerivedOp::RPlus => OperatorExpr::anti(g(BPlus), g(FPlus)).scale(half),
            DerivedOp::RMinus => OperatorExpr::anti(g(BMinus), g(FMinus)).scale(half),
            DerivedOp::BPlusSq => g(BPlus) * g(BPlus),
            DerivedOp::BMinusSq => g(BMinus) * g(BMinus),
        }
    }
}

impl fmt::Display for DerivedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

fn closed_form_terms(op: DerivedOp, m: i64, n: i64, kind: Kind) -> Option<Vec<RawTerm>> {
    let s = sign(n);
    let even = m % 2 == 0;
    let terms = match (op, kind) {
        (DerivedOp::Nb, k) => vec![(m, m, n, k)],
        (DerivedOp::Nf, k) => vec![(n, m, n, k)],
        (DerivedOp::QMinus, Kind::Alpha) => vec![
            (-s * n, m + 1, n - 1, Kind::Alpha),
            (s * n * (n - 1), m + 1, n - 1, Kind::Beta),
        ],
        (DerivedOp::QMinus, Kind::Beta) => vec![
            (-s, m + 1, n - 1, Kind::Alpha),
            (s * (n - 1), m + 1, n - 1, Kind::Beta),
        ],
        (DerivedOp::QPlus, Kind::Alpha) if even => vec![(s * m, m - 1, n + 1, Kind::Beta)],
        (DerivedOp::QPlus, Kind::Alpha) => vec![
            (s, m - 1, n + 1, Kind::Alpha),
            (s * (m - 1), m - 1, n + 1, Kind::Beta),
        ],
        (DerivedOp::QPlus, Kind::Beta) if even => vec![(-s, m - 1, n + 1, Kind::Beta)],
        (DerivedOp::QPlus, Kind::Beta) => Vec::new(),
        _ => return None,
    };
    Some(terms)
}

/// Closed-form action of `Nb`, `Nf`, `Q+` or `Q-` on a canonical basis vector.
///
/// `Q+` uses the parity-split formula for every `m`, including `m ∈ {0,1}`.
pub fn apply_derived_closed_form(op: DerivedOp, v: &BasisVector, params: &FockParams) -> Result<SparseVector> {
    apply_closed_form_capped(op, v, params.p(), params.m_max())
}

pub(crate) fn apply_closed_form_capped(op: DerivedOp, v: &BasisVector, p: u32, cap: u32) -> Result<SparseVector> {
    let terms = closed_form_terms(op, v.m as i64, v.n as i64, v.kind)
        .ok_or_else(|| FockError::NoClosedForm(op.symbol().to_string()))?;
    collect_terms(&terms, p, cap)
}
