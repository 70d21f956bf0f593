//! Compiled sparse matrices of operator expressions.

use rayon::prelude::*;

use crate::error::{FockError, Result};
use crate::fock::{enumerate_basis_upto, BasisVector, FockParams, GradeZ2Z2, SparseVector};
use crate::operators::eval::{DerivedMode, Evaluator};
use crate::operators::expr::OperatorExpr;
use crate::scalar::Scalar;

/// Column-sparse matrix from the basis with `m ≤ m_max_in` into the basis
/// with `m ≤ m_max_out`. Column `j` is the image of `domain[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub p: u32,
    pub m_max_in: u32,
    pub m_max_out: u32,
    pub domain: Vec<BasisVector>,
    pub columns: Vec<SparseVector>,
}

impl OperatorMatrix {
    /// Compiles `expr` on the interior of `params`: the domain is every basis
    /// vector with `m ≤ m_max − margin`, where `margin` is the expression's
    /// raising degree. Derived operators expand through their definitions.
    pub fn compile(expr: &OperatorExpr, params: &FockParams) -> Result<OperatorMatrix> {
        Self::compile_with(expr, params, DerivedMode::Definition)
    }

    /// Same domain as `compile`, but derived operators use closed forms.
    pub fn compile_closed_form(expr: &OperatorExpr, params: &FockParams) -> Result<OperatorMatrix> {
        Self::compile_with(expr, params, DerivedMode::ClosedForm)
    }

    pub fn compile_with(expr: &OperatorExpr, params: &FockParams, mode: DerivedMode) -> Result<OperatorMatrix> {
        let margin = expr.raising_degree();
        if margin > params.m_max() {
            return Err(FockError::TruncationTooSmall { needed: margin, m_max: params.m_max() });
        }
        let m_max_in = params.m_max() - margin;
        let ev = Evaluator::new(params.p(), params.m_max(), mode);
        let domain = enumerate_basis_upto(params.p(), m_max_in);
        let columns = domain
            .par_iter()
            .map(|b| ev.apply(expr, &SparseVector::basis(*b)))
            .collect::<Result<Vec<_>>>()?;
        let m_max_out = (m_max_in as i64 + expr.net_m_shift().max(0)) as u32;
        Ok(OperatorMatrix { p: params.p(), m_max_in, m_max_out, domain, columns })
    }

    pub fn identity(params: &FockParams) -> OperatorMatrix {
        let domain = enumerate_basis_upto(params.p(), params.m_max());
        let columns = domain.iter().map(|b| SparseVector::basis(*b)).collect();
        OperatorMatrix {
            p: params.p(),
            m_max_in: params.m_max(),
            m_max_out: params.m_max(),
            domain,
            columns,
        }
    }

    pub fn column(&self, b: &BasisVector) -> Option<&SparseVector> {
        self.domain.binary_search(b).ok().map(|i| &self.columns[i])
    }

    /// Entry `⟨row| M |col⟩`; zero outside the domain.
    pub fn entry(&self, row: &BasisVector, col: &BasisVector) -> Scalar {
        self.column(col).map(|c| c.get(row)).unwrap_or_else(Scalar::zero)
    }

    /// All nonzero entries as `(row, col, value)`, ordered by column then row.
    pub fn nonzeros(&self) -> impl Iterator<Item = (&BasisVector, &BasisVector, &Scalar)> {
        self.domain
            .iter()
            .zip(&self.columns)
            .flat_map(|(col, c)| c.iter().map(move |(row, v)| (row, col, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    /// Compares two matrices on the columns both domains contain.
    pub fn agrees_with(&self, other: &OperatorMatrix) -> bool {
        self.mismatches(other).is_empty()
    }

    /// Columns on the common domain where the two matrices differ.
    pub fn mismatches(&self, other: &OperatorMatrix) -> Vec<BasisVector> {
        self.domain
            .iter()
            .zip(&self.columns)
            .filter(|(b, c)| other.column(b).is_some_and(|o| o != *c))
            .map(|(b, _)| *b)
            .collect()
    }

    /// Checks that every nonzero entry maps a vector of degree `d` to one of
    /// degree `d + g`.
    pub fn is_homogeneous_with<F>(&self, g: GradeZ2Z2, degree: F) -> bool
    where
        F: Fn(&BasisVector) -> GradeZ2Z2,
    {
        self.nonzeros().all(|(row, col, _)| degree(row) == degree(col) + g)
    }
}

/// Image of every basis vector with `m ≤ m_max` under `expr`, evaluated with
/// enough headroom that nothing overflows. Terms above `m_max` are kept so the
/// caller can see which columns leave the window.
pub(crate) fn window_columns(expr: &OperatorExpr, params: &FockParams) -> Result<Vec<(BasisVector, SparseVector)>> {
    let cap = params.m_max() + expr.raising_degree();
    let ev = Evaluator::new(params.p(), cap, DerivedMode::ClosedForm);
    enumerate_basis_upto(params.p(), params.m_max())
        .into_par_iter()
        .map(|b| ev.apply(expr, &SparseVector::basis(b)).map(|img| (b, img)))
        .collect()
}
