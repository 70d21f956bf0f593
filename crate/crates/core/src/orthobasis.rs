//! The inner product fixed by `(b⁻)† = b⁺`, `(f⁻)† = f⁺`, `⟨0|0⟩ = 1`;
//! Gram matrices of the cells `V_{m,n}`; orthogonal directions and the
//! commuting observables that label them.
//!
//! Normalizers are square roots and are never formed. Directions are kept
//! unnormalized next to their exact squared norms.

use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{FockError, Result};
use crate::fock::{subspace_dimension, BasisVector, FockParams, Kind, SparseVector};
use crate::operators::derived::DerivedOp;
use crate::operators::eval::{DerivedMode, Evaluator};
use crate::operators::expr::OperatorExpr;
use crate::operators::generator::Generator;
use crate::operators::relations::{verify_relation, RelationCatalog, VerificationReport};
use crate::scalar::Scalar;

/// Formal adjoint, with derived operators expanded first.
pub fn adjoint(expr: &OperatorExpr, p: u32) -> OperatorExpr {
    match expr {
        OperatorExpr::Identity => OperatorExpr::Identity,
        OperatorExpr::Gen(g) => OperatorExpr::Gen(g.adjoint()),
        OperatorExpr::Derived(d) => adjoint(&d.definition(p), p),
        OperatorExpr::Scaled(c, x) => OperatorExpr::Scaled(c.conj(), Box::new(adjoint(x, p))),
        OperatorExpr::Sum(xs) => OperatorExpr::Sum(xs.iter().map(|x| adjoint(x, p)).collect()),
        OperatorExpr::Product(xs) => OperatorExpr::Product(xs.iter().rev().map(|x| adjoint(x, p)).collect()),
        OperatorExpr::Commutator(a, b) => OperatorExpr::comm(adjoint(b, p), adjoint(a, p)),
        OperatorExpr::Anticommutator(a, b) => OperatorExpr::anti(adjoint(a, p), adjoint(b, p)),
    }
}

/// Creation word producing a basis vector from the vacuum:
/// `φ = (f⁺)ⁿ(b⁺)ᵐ|0⟩`, `ψ = (f⁺)ⁿ⁻¹(b⁺)ᵐ⁻¹R⁺|0⟩`.
pub fn defining_word(b: &BasisVector) -> OperatorExpr {
    let fp = OperatorExpr::gen(Generator::FPlus);
    let bp = OperatorExpr::gen(Generator::BPlus);
    match b.kind {
        Kind::Alpha => fp.pow(b.n as usize) * bp.pow(b.m as usize),
        Kind::Beta => {
            let r_plus = OperatorExpr::anti(bp.clone(), fp.clone()).scale(Scalar::ratio(1, 2));
            fp.pow(b.n as usize - 1) * bp.pow(b.m as usize - 1) * r_plus
        }
    }
}

type Gram = Vec<Vec<Scalar>>;

pub struct InnerProductContext {
    params: FockParams,
    grams: RwLock<HashMap<(u32, u32), Gram>>,
}

impl InnerProductContext {
    pub fn new(params: FockParams) -> Self {
        InnerProductContext { params, grams: RwLock::new(HashMap::new()) }
    }

    pub fn params(&self) -> &FockParams {
        &self.params
    }

    /// `⟨v, w⟩`, antilinear in `v`. Each basis vector of `w` is replaced by
    /// its creation word, whose adjoint is then moved onto `v`.
    pub fn inner_product(&self, v: &SparseVector, w: &SparseVector) -> Result<Scalar> {
        let p = self.params.p();
        let cap = self.params.m_max().max(v.max_m().unwrap_or(0));
        let ev = Evaluator::new(p, cap, DerivedMode::Definition);
        let mut acc = Scalar::zero();
        for (b, c) in w.iter() {
            let moved = ev.apply(&adjoint(&defining_word(b), p), v)?;
            acc += &(c * &moved.get(&BasisVector::VACUUM).conj());
        }
        Ok(acc)
    }

    /// Basis of `V_{m,n}`: `[φ]` or `[φ, ψ]`.
    pub fn cell_basis(&self, m: i64, n: i64) -> Result<Vec<BasisVector>> {
        match subspace_dimension(&self.params, m, n) {
            0 => Err(FockError::DimensionZero { m, n }),
            1 => Ok(vec![BasisVector::alpha(m as u32, n as u32)]),
            _ => Ok(vec![BasisVector::alpha(m as u32, n as u32), BasisVector::beta(m as u32, n as u32)]),
        }
    }

    /// Gram matrix of `V_{m,n}` in the basis of `cell_basis`. Cached.
    pub fn gram(&self, m: i64, n: i64) -> Result<Vec<Vec<Scalar>>> {
        let basis = self.cell_basis(m, n)?;
        let key = (m as u32, n as u32);
        if let Some(g) = self.grams.read().expect("gram cache poisoned").get(&key) {
            return Ok(g.clone());
        }
        let mut g = Vec::with_capacity(basis.len());
        for x in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for y in &basis {
                row.push(self.inner_product(&SparseVector::basis(*x), &SparseVector::basis(*y))?);
            }
            g.push(row);
        }
        self.grams.write().expect("gram cache poisoned").insert(key, g.clone());
        Ok(g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn half(self) -> Scalar {
        match self {
            Sign::Plus => Scalar::ratio(1, 2),
            Sign::Minus => Scalar::ratio(-1, 2),
        }
    }
}

/// An unnormalized orthogonal direction in `V_{m,n}` and its squared norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthoVector {
    pub m: u32,
    pub n: u32,
    pub sign: Sign,
    pub direction: SparseVector,
    pub norm_sqr: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthoBasis {
    pub m: u32,
    pub n: u32,
    pub gram: Vec<Vec<Scalar>>,
    pub vectors: Vec<OrthoVector>,
    /// `⟨dir₊, dir₋⟩ = 0` (vacuously true in one-dimensional cells).
    pub orthogonal: bool,
}

fn is_positive(s: &Scalar) -> bool {
    s.is_real() && s.re().is_positive()
}

/// Directions `φ` and `φ − p·ψ` (the latter only when `V_{m,n}` is
/// two-dimensional).
pub fn orthonormal_basis(m: i64, n: i64, ctx: &InnerProductContext) -> Result<OrthoBasis> {
    let g = ctx.gram(m, n)?;
    let (mu, nu) = (m as u32, n as u32);
    let det = if g.len() == 1 {
        g[0][0].clone()
    } else {
        &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0])
    };
    if !is_positive(&g[0][0]) || !is_positive(&det) {
        return Err(FockError::GramDegenerate { m: mu, n: nu });
    }
    let plus = SparseVector::basis(BasisVector::alpha(mu, nu));
    let mut vectors = vec![OrthoVector {
        m: mu,
        n: nu,
        sign: Sign::Plus,
        norm_sqr: ctx.inner_product(&plus, &plus)?,
        direction: plus.clone(),
    }];
    let mut orthogonal = true;
    if g.len() == 2 {
        let p = ctx.params().p() as i64;
        let minus = SparseVector::from_terms([
            (BasisVector::alpha(mu, nu), Scalar::one()),
            (BasisVector::beta(mu, nu), Scalar::from_int(-p)),
        ]);
        orthogonal = ctx.inner_product(&plus, &minus)?.is_zero();
        vectors.push(OrthoVector {
            m: mu,
            n: nu,
            sign: Sign::Minus,
            norm_sqr: ctx.inner_product(&minus, &minus)?,
            direction: minus,
        });
    }
    Ok(OrthoBasis { m: mu, n: nu, gram: g, vectors, orthogonal })
}

/// `λ` with `image = λ·v`, if any.
pub fn eigenvalue(image: &SparseVector, v: &SparseVector) -> Option<Scalar> {
    let (b, c) = v.iter().next()?;
    let lambda = image.get(b).checked_div(c)?;
    (image == &v.scaled(&lambda)).then_some(lambda)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenCheck {
    pub m: u32,
    pub n: u32,
    pub sign: Sign,
    pub nb: Option<Scalar>,
    pub nf: Option<Scalar>,
    pub ns: Option<Scalar>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CscoReport {
    pub p: u32,
    pub m_max: u32,
    pub pass: bool,
    pub commutators: Vec<VerificationReport>,
    pub eigen: Vec<EigenCheck>,
}

/// Commutators of `Nb`, `Nf`, `Ns` on the interior, and their eigenvalues
/// `m`, `n`, `±½` on every orthogonal direction with `m ≤ m_max`.
pub fn csco_check(ctx: &InnerProductContext) -> Result<CscoReport> {
    let params = ctx.params();
    if params.m_max() < 3 {
        return Err(FockError::TruncationTooSmall { needed: 3, m_max: params.m_max() });
    }
    let cat = RelationCatalog::for_order(params.p());
    let commutators = cat
        .select(&["csco".to_string()])?
        .into_iter()
        .map(|i| verify_relation(i, params))
        .collect::<Result<Vec<_>>>()?;
    let ops = [DerivedOp::Nb, DerivedOp::Nf, DerivedOp::Ns].map(OperatorExpr::derived);
    let headroom = ops.iter().map(|o| o.raising_degree()).max().unwrap_or(0);
    let ev = Evaluator::new(params.p(), params.m_max() + headroom, DerivedMode::Definition);
    let mut eigen = Vec::new();
    for m in 0..=params.m_max() {
        for n in 0..=params.p() {
            let basis = orthonormal_basis(m as i64, n as i64, ctx)?;
            for v in basis.vectors {
                let vals = ops
                    .iter()
                    .map(|op| Ok(eigenvalue(&ev.apply(op, &v.direction)?, &v.direction)))
                    .collect::<Result<Vec<_>>>()?;
                let pass = vals[0] == Some(Scalar::from_int(m as i64))
                    && vals[1] == Some(Scalar::from_int(n as i64))
                    && vals[2] == Some(v.sign.half());
                let [nb, nf, ns]: [Option<Scalar>; 3] = vals.try_into().expect("three operators");
                eigen.push(EigenCheck { m, n, sign: v.sign, nb, nf, ns, pass });
            }
        }
    }
    Ok(CscoReport {
        p: params.p(),
        m_max: params.m_max(),
        pass: commutators.iter().all(|r| r.pass) && eigen.iter().all(|e| e.pass),
        commutators,
        eigen,
    })
}
