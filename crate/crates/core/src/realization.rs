//! Lie superalgebras given by structure constants and a 2×2 graded matrix
//! representation, and the representation they induce on the carrier space.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::{enumerate_basis_upto, FockParams, SparseVector};
use crate::operators::derived::{apply_closed_form_capped, DerivedOp};
use crate::operators::eval::{DerivedMode, Evaluator};
use crate::operators::expr::OperatorExpr;
use crate::operators::relations::{Failure, VerificationReport};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    fn from_bit(b: u8) -> Parity {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Block entries of a 2×2 supermatrix `[[A, B], [C, D]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperMatrix2 {
    #[serde(rename = "A", default = "Scalar::zero")]
    pub a: Scalar,
    #[serde(rename = "B", default = "Scalar::zero")]
    pub b: Scalar,
    #[serde(rename = "C", default = "Scalar::zero")]
    pub c: Scalar,
    #[serde(rename = "D", default = "Scalar::zero")]
    pub d: Scalar,
}

impl SuperMatrix2 {
    pub fn even(a: Scalar, d: Scalar) -> Self {
        SuperMatrix2 { a, b: Scalar::zero(), c: Scalar::zero(), d }
    }

    pub fn odd(b: Scalar, c: Scalar) -> Self {
        SuperMatrix2 { a: Scalar::zero(), b, c, d: Scalar::zero() }
    }

    pub fn zero() -> Self {
        SuperMatrix2::even(Scalar::zero(), Scalar::zero())
    }

    fn entries(&self) -> [[Scalar; 2]; 2] {
        [[self.a.clone(), self.b.clone()], [self.c.clone(), self.d.clone()]]
    }

    fn from_entries(e: [[Scalar; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = e;
        SuperMatrix2 { a, b, c, d }
    }

    fn mul(&self, rhs: &SuperMatrix2) -> SuperMatrix2 {
        let (x, y) = (self.entries(), rhs.entries());
        let mut out: [[Scalar; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
            }
        }
        SuperMatrix2::from_entries(out)
    }

    fn lin(&self, s: &Scalar, rhs: &SuperMatrix2) -> SuperMatrix2 {
        SuperMatrix2 {
            a: &self.a + &(s * &rhs.a),
            b: &self.b + &(s * &rhs.b),
            c: &self.c + &(s * &rhs.c),
            d: &self.d + &(s * &rhs.d),
        }
    }

    fn fits_parity(&self, parity: Parity) -> bool {
        match parity {
            Parity::Even => self.b.is_zero() && self.c.is_zero(),
            Parity::Odd => self.a.is_zero() && self.d.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisElement {
    pub name: String,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub elem: String,
    pub coeff: Scalar,
}

/// `⟨x, y⟩ = Σ coeff·elem`: a commutator unless both `x` and `y` are odd.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bracket {
    pub x: String,
    pub y: String,
    #[serde(default)]
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperAlgebraSpec {
    #[serde(default)]
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub brackets: Vec<Bracket>,
    #[serde(default)]
    pub rep2: BTreeMap<String, SuperMatrix2>,
}

/// Coefficient vector over the spec's basis.
type Coords = Vec<Scalar>;

/// Structure constants in dense form, after validation of names and
/// antisymmetry.
struct Table {
    parities: Vec<Parity>,
    bracket: Vec<Vec<Coords>>,
}

impl Table {
    fn dim(&self) -> usize {
        self.parities.len()
    }

    /// `⟨u, v⟩` extended bilinearly.
    fn apply(&self, u: &Coords, v: &Coords) -> Coords {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let w = ui * vj;
                for (k, c) in self.bracket[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&w * c);
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Coords {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }
}

fn invalid(msg: impl Into<String>) -> FockError {
    FockError::SpecInvalid(msg.into())
}

fn sign_of(bits: u8) -> Scalar {
    if bits.is_multiple_of(2) {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

impl SuperAlgebraSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn element(&self, name: &str) -> Result<&BasisElement> {
        self.basis
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| FockError::UnknownElement(name.to_string()))
    }

    /// True when `⟨x, y⟩` is an anticommutator.
    pub fn is_anticommutator(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.element(x)?.parity == Parity::Odd && self.element(y)?.parity == Parity::Odd)
    }

    fn table(&self) -> Result<Table> {
        let n = self.basis.len();
        for (i, b) in self.basis.iter().enumerate() {
            if self.basis[..i].iter().any(|o| o.name == b.name) {
                return Err(invalid(format!("duplicate basis element {:?}", b.name)));
            }
        }
        let parities: Vec<Parity> = self.basis.iter().map(|b| b.parity).collect();
        let mut given: Vec<Vec<Option<Coords>>> = vec![vec![None; n]; n];
        for br in &self.brackets {
            let i = self.index_of(&br.x).ok_or_else(|| FockError::UnknownElement(br.x.clone()))?;
            let j = self.index_of(&br.y).ok_or_else(|| FockError::UnknownElement(br.y.clone()))?;
            let mut coords = vec![Scalar::zero(); n];
            for t in &br.terms {
                let k = self.index_of(&t.elem).ok_or_else(|| FockError::UnknownElement(t.elem.clone()))?;
                coords[k] += &t.coeff;
            }
            if given[i][j].is_some() {
                return Err(invalid(format!("bracket <{}, {}> given twice", br.x, br.y)));
            }
            given[i][j] = Some(coords);
        }
        let mut bracket = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let sym = if parities[i] == Parity::Odd && parities[j] == Parity::Odd {
                    Scalar::one()
                } else {
                    Scalar::from_int(-1)
                };
                let direct = given[i][j].clone();
                let mirrored = given[j][i].as_ref().map(|v| v.iter().map(|c| c * &sym).collect::<Coords>());
                bracket[i][j] = match (direct, mirrored) {
                    (Some(a), Some(b)) => {
                        if a != b {
                            return Err(invalid(format!(
                                "graded antisymmetry violated by <{}, {}> and <{}, {}>",
                                self.basis[i].name, self.basis[j].name, self.basis[j].name, self.basis[i].name
                            )));
                        }
                        a
                    }
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => vec![Scalar::zero(); n],
                };
            }
        }
        for i in 0..n {
            if parities[i] == Parity::Even && bracket[i][i].iter().any(|c| !c.is_zero()) {
                return Err(invalid(format!(
                    "graded antisymmetry violated: [{0}, {0}] must vanish for even {0}",
                    self.basis[i].name
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let expected = Parity::from_bit(parities[i].bit() + parities[j].bit());
                for (k, c) in bracket[i][j].iter().enumerate() {
                    if !c.is_zero() && parities[k] != expected {
                        return Err(invalid(format!(
                            "parity violated: <{}, {}> has a component along {}",
                            self.basis[i].name, self.basis[j].name, self.basis[k].name
                        )));
                    }
                }
            }
        }
        Ok(Table { parities, bracket })
    }

    fn rep(&self, name: &str) -> Result<&SuperMatrix2> {
        self.rep2
            .get(name)
            .ok_or_else(|| invalid(format!("rep2 has no matrix for {name:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub dimension: usize,
    pub even: usize,
    pub odd: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
}

/// Checks graded antisymmetry, bracket parity, the graded Jacobi identity on
/// all basis triples, and that `rep2` satisfies every bracket.
pub fn validate_spec(spec: &SuperAlgebraSpec) -> Result<ValidationReport> {
    let t = spec.table()?;
    let n = t.dim();
    let name = |i: usize| spec.basis[i].name.as_str();

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (pi, pj, pk) = (t.parities[i].bit(), t.parities[j].bit(), t.parities[k].bit());
                let (x, y, z) = (t.unit(i), t.unit(j), t.unit(k));
                let a = t.apply(&x, &t.apply(&y, &z));
                let b = t.apply(&y, &t.apply(&z, &x));
                let c = t.apply(&z, &t.apply(&x, &y));
                let (sa, sb, sc) = (sign_of(pi * pk), sign_of(pj * pi), sign_of(pk * pj));
                if (0..n).any(|l| !(&(&(&sa * &a[l]) + &(&sb * &b[l])) + &(&sc * &c[l])).is_zero()) {
                    return Err(invalid(format!("graded Jacobi identity fails on ({}, {}, {})", name(i), name(j), name(k))));
                }
            }
        }
    }

    let mats = spec
        .basis
        .iter()
        .map(|b| {
            let m = spec.rep(&b.name)?;
            if !m.fits_parity(b.parity) {
                return Err(invalid(format!("rep2 matrix of {:?} does not match its parity", b.name)));
            }
            Ok(m.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    for extra in spec.rep2.keys() {
        spec.element(extra).map_err(|_| invalid(format!("rep2 names unknown element {extra:?}")))?;
    }
    for i in 0..n {
        for j in 0..n {
            let sym = sign_of(t.parities[i].bit() * t.parities[j].bit());
            let lhs = mats[i].mul(&mats[j]).lin(&-sym, &mats[j].mul(&mats[i]));
            let mut rhs = SuperMatrix2::zero();
            for (k, c) in t.bracket[i][j].iter().enumerate() {
                rhs = rhs.lin(c, &mats[k]);
            }
            if lhs != rhs {
                return Err(invalid(format!("rep2 does not satisfy the bracket <{}, {}>", name(i), name(j))));
            }
        }
    }
    let odd = t.parities.iter().filter(|p| **p == Parity::Odd).count();
    Ok(ValidationReport {
        dimension: n,
        even: n - odd,
        odd,
        pairs_checked: n * n,
        triples_checked: n * n * n,
    })
}

/// The image of a basis element under the paraparticle realization.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizedElement {
    pub name: String,
    pub parity: Parity,
    pub operator: OperatorExpr,
}

fn realize_matrix(parity: Parity, m: &SuperMatrix2, p: u32) -> OperatorExpr {
    let mut terms = Vec::new();
    match parity {
        Parity::Even => {
            if !m.a.is_zero() {
                terms.push(OperatorExpr::derived(DerivedOp::Nb).scale(m.a.clone()));
            }
            if !m.d.is_zero() {
                terms.push(OperatorExpr::derived(DerivedOp::Nf).scale(m.d.clone()));
            }
            let shift = &(&m.a - &m.d) * &Scalar::ratio(p as i64, 2);
            if !shift.is_zero() {
                terms.push(OperatorExpr::scalar(shift));
            }
        }
        Parity::Odd => {
            if !m.b.is_zero() {
                terms.push(OperatorExpr::derived(DerivedOp::QMinus).scale(m.b.clone()));
            }
            if !m.c.is_zero() {
                terms.push(OperatorExpr::derived(DerivedOp::QPlus).scale(m.c.clone()));
            }
        }
    }
    OperatorExpr::Sum(terms)
}

/// Even `X ↦ A·Nb + D·Nf + (A−D)·p/2`, odd `Y ↦ B·Q⁻ + C·Q⁺`. Zero terms are
/// dropped.
pub fn realize(spec: &SuperAlgebraSpec, element: &str, params: &FockParams) -> Result<RealizedElement> {
    let el = spec.element(element)?;
    let m = spec.rep(element)?;
    Ok(RealizedElement {
        name: el.name.clone(),
        parity: el.parity,
        operator: realize_matrix(el.parity, m, params.p()),
    })
}

/// Action of a basis element on `v` through the closed forms of `Nb`, `Nf`
/// and `Q±`.
pub fn act(spec: &SuperAlgebraSpec, element: &str, v: &SparseVector, params: &FockParams) -> Result<SparseVector> {
    let el = spec.element(element)?;
    let m = spec.rep(element)?;
    let p = params.p();
    let mut out = SparseVector::new();
    for (b, c) in v.iter() {
        match el.parity {
            Parity::Even => {
                let half_p = Scalar::ratio(p as i64, 2);
                let mm = &Scalar::from_int(b.m as i64) + &half_p;
                let nn = &Scalar::from_int(b.n as i64) - &half_p;
                let ev = &(&mm * &m.a) + &(&nn * &m.d);
                out.add_term(*b, &(c * &ev));
            }
            Parity::Odd => {
                if !m.b.is_zero() {
                    let img = apply_closed_form_capped(DerivedOp::QMinus, b, p, params.m_max())?;
                    out.add_scaled(&(c * &m.b), &img);
                }
                if !m.c.is_zero() {
                    let img = apply_closed_form_capped(DerivedOp::QPlus, b, p, params.m_max())?;
                    out.add_scaled(&(c * &m.c), &img);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub p: u32,
    pub m_max: u32,
    pub pass: bool,
    pub pairs: Vec<VerificationReport>,
}

/// For every pair `i ≤ j`, checks `⟨J(xᵢ), J(xⱼ)⟩ = J(⟨xᵢ, xⱼ⟩)` on every basis
/// vector with `m ≤ m_max − 2`, expanding derived operators through their
/// definitions.
pub fn check_bracket_preservation(spec: &SuperAlgebraSpec, params: &FockParams) -> Result<BracketReport> {
    if params.m_max() < 4 {
        return Err(FockError::TruncationTooSmall { needed: 4, m_max: params.m_max() });
    }
    validate_spec(spec)?;
    let t = spec.table()?;
    let n = t.dim();
    let p = params.p();
    let images: Vec<OperatorExpr> = spec
        .basis
        .iter()
        .map(|b| realize(spec, &b.name, params).map(|r| r.operator))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let ev = Evaluator::new(p, params.m_max(), DerivedMode::Definition);
    let reports = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&spec.basis[i], &spec.basis[j]);
            let anti = x.parity == Parity::Odd && y.parity == Parity::Odd;
            let lhs = if anti {
                OperatorExpr::anti(images[i].clone(), images[j].clone())
            } else {
                OperatorExpr::comm(images[i].clone(), images[j].clone())
            };
            let rhs = OperatorExpr::Sum(
                t.bracket[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| images[k].clone().scale(c.clone()))
                    .collect(),
            );
            let margin = lhs.raising_degree().max(rhs.raising_degree());
            let targets = enumerate_basis_upto(p, params.m_max() - margin);
            let mut failures = Vec::new();
            for b in &targets {
                let v = SparseVector::basis(*b);
                let residual = ev.apply(&lhs, &v)?.sub(&ev.apply(&rhs, &v)?);
                if !residual.is_zero() {
                    failures.push(Failure { basis: *b, residual });
                }
            }
            let (open, close) = if anti { ('{', '}') } else { ('[', ']') };
            Ok(VerificationReport {
                relation: format!("{open}{},{}{close}", x.name, y.name),
                identity: format!("{lhs} = {rhs}"),
                p,
                m_max: params.m_max(),
                pass: failures.is_empty(),
                checked: targets.len(),
                failures,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BracketReport {
        p,
        m_max: params.m_max(),
        pass: reports.iter().all(|r| r.pass),
        pairs: reports,
    })
}

/// `gl(1|1)` with `E11, E22` even, `E12, E21` odd, in its defining
/// representation.
pub fn gl11_spec() -> SuperAlgebraSpec {
    let el = |name: &str, parity| BasisElement { name: name.into(), parity };
    let br = |x: &str, y: &str, terms: &[(&str, i64)]| Bracket {
        x: x.into(),
        y: y.into(),
        terms: terms
            .iter()
            .map(|(e, c)| Term { elem: (*e).into(), coeff: Scalar::from_int(*c) })
            .collect(),
    };
    let one = Scalar::one;
    let zero = Scalar::zero;
    SuperAlgebraSpec {
        basis: vec![
            el("E11", Parity::Even),
            el("E22", Parity::Even),
            el("E12", Parity::Odd),
            el("E21", Parity::Odd),
        ],
        brackets: vec![
            br("E11", "E12", &[("E12", 1)]),
            br("E11", "E21", &[("E21", -1)]),
            br("E22", "E12", &[("E12", -1)]),
            br("E22", "E21", &[("E21", 1)]),
            br("E12", "E21", &[("E11", 1), ("E22", 1)]),
        ],
        rep2: BTreeMap::from([
            ("E11".to_string(), SuperMatrix2::even(one(), zero())),
            ("E22".to_string(), SuperMatrix2::even(zero(), one())),
            ("E12".to_string(), SuperMatrix2::odd(one(), zero())),
            ("E21".to_string(), SuperMatrix2::odd(zero(), one())),
        ]),
    }
}
