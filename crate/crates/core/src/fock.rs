//! The carrier space `⊕_{n=0}^{p} ⊕_{m=0}^{m_max} V_{m,n}` and its bases.
//!
//! Every cell `V_{m,n}` is spanned by `φ_{m,n}` (kind [`Kind::Alpha`]) and,
//! away from the boundary rows/columns, by `ψ_{m,n}` (kind [`Kind::Beta`]).
//! Degenerate labels never appear as keys: `ψ_{0,n} = ψ_{m,0} = 0` and
//! `ψ_{m,p} = φ_{m,p} / p` are rewritten by [`canonicalize`].

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::scalar::Scalar;

/// Representation order `p` together with the truncation `m_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockParams {
    p: u32,
    m_max: u32,
}

impl FockParams {
    pub fn new(p: u32, m_max: u32) -> Result<Self> {
        if p == 0 {
            return Err(FockError::InvalidParams("p must be a positive integer".into()));
        }
        Ok(FockParams { p, m_max })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn with_m_max(&self, m_max: u32) -> FockParams {
        FockParams { p: self.p, m_max }
    }

    /// Number of basis vectors in the truncated space.
    pub fn dimension(&self) -> usize {
        (0..=self.m_max as i64)
            .flat_map(|m| (0..=self.p as i64).map(move |n| (m, n)))
            .map(|(m, n)| subspace_dimension(self, m, n) as usize)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `φ_{m,n} = (f⁺)ⁿ (b⁺)ᵐ |0⟩`
    Alpha,
    /// `ψ_{m,n} = (f⁺)ⁿ⁻¹ (b⁺)ᵐ⁻¹ R⁺ |0⟩`
    Beta,
}

/// A canonical basis label `|m,n,α⟩` or `|m,n,β⟩`.
///
/// Ordering is lexicographic on `(m, n, kind)` with `Alpha < Beta`; matrix
/// layouts and reports depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisVector {
    pub m: u32,
    pub n: u32,
    pub kind: Kind,
}

impl BasisVector {
    pub const VACUUM: BasisVector = BasisVector { m: 0, n: 0, kind: Kind::Alpha };

    pub fn alpha(m: u32, n: u32) -> Self {
        BasisVector { m, n, kind: Kind::Alpha }
    }

    pub fn beta(m: u32, n: u32) -> Self {
        BasisVector { m, n, kind: Kind::Beta }
    }

    /// True iff this label is a canonical basis vector for order `p`
    /// (ignores the truncation).
    pub fn is_canonical(&self, p: u32) -> bool {
        match self.kind {
            Kind::Alpha => self.n <= p,
            Kind::Beta => self.m >= 1 && self.n >= 1 && self.n < p,
        }
    }

    pub fn is_valid(&self, params: &FockParams) -> bool {
        self.is_canonical(params.p) && self.m <= params.m_max
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            Kind::Alpha => "phi",
            Kind::Beta => "psi",
        };
        write!(f, "{tag}({},{})", self.m, self.n)
    }
}

/// Element of `Z₂ × Z₂`, written additively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GradeZ2Z2(pub u8, pub u8);

impl GradeZ2Z2 {
    pub const ZERO: GradeZ2Z2 = GradeZ2Z2(0, 0);

    pub fn new(a: i64, b: i64) -> Self {
        GradeZ2Z2(a.rem_euclid(2) as u8, b.rem_euclid(2) as u8)
    }
}

impl Add for GradeZ2Z2 {
    type Output = GradeZ2Z2;
    fn add(self, rhs: GradeZ2Z2) -> GradeZ2Z2 {
        GradeZ2Z2(self.0 ^ rhs.0, self.1 ^ rhs.1)
    }
}

impl fmt::Display for GradeZ2Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// The four `Z₂` gradings of the carrier space: alternating on rows (by `m`)
/// or on columns (by `n`), starting even or odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Z2Scheme {
    RowsEvenFirst,
    RowsOddFirst,
    ColsEvenFirst,
    ColsOddFirst,
}

impl Z2Scheme {
    pub const ALL: [Z2Scheme; 4] = [
        Z2Scheme::RowsEvenFirst,
        Z2Scheme::RowsOddFirst,
        Z2Scheme::ColsEvenFirst,
        Z2Scheme::ColsOddFirst,
    ];
}

/// Canonical basis, ordered by `(m, n, kind)`.
pub fn enumerate_basis(params: &FockParams) -> Vec<BasisVector> {
    enumerate_basis_upto(params.p, params.m_max)
}

/// Canonical basis for order `p` with `m ≤ m_limit`.
pub fn enumerate_basis_upto(p: u32, m_limit: u32) -> Vec<BasisVector> {
    let mut out = Vec::new();
    for m in 0..=m_limit {
        for n in 0..=p {
            out.push(BasisVector::alpha(m, n));
            if m >= 1 && n >= 1 && n < p {
                out.push(BasisVector::beta(m, n));
            }
        }
    }
    out
}

pub fn subspace_dimension(params: &FockParams, m: i64, n: i64) -> u32 {
    let p = params.p as i64;
    if m < 0 || n < 0 || n > p {
        0
    } else if m == 0 || n == 0 || n == p {
        1
    } else {
        2
    }
}

pub fn grade_z2z2(v: &BasisVector) -> GradeZ2Z2 {
    GradeZ2Z2((v.m % 2) as u8, (v.n % 2) as u8)
}

pub fn grade_z2(v: &BasisVector, scheme: Z2Scheme) -> u8 {
    let (m, n) = ((v.m % 2) as u8, (v.n % 2) as u8);
    match scheme {
        Z2Scheme::RowsEvenFirst => m,
        Z2Scheme::RowsOddFirst => 1 - m,
        Z2Scheme::ColsEvenFirst => n,
        Z2Scheme::ColsOddFirst => 1 - n,
    }
}

/// Rewrites a possibly degenerate label into the canonical basis.
pub fn canonicalize(m: i64, n: i64, kind: Kind, params: &FockParams) -> SparseVector {
    canonicalize_label(m, n, kind, params.p)
}

pub(crate) fn canonicalize_label(m: i64, n: i64, kind: Kind, p: u32) -> SparseVector {
    let p_i = p as i64;
    if m < 0 || n < 0 || n > p_i {
        return SparseVector::new();
    }
    let (m, n) = (m as u32, n as u32);
    match kind {
        Kind::Alpha => SparseVector::basis(BasisVector::alpha(m, n)),
        Kind::Beta if m == 0 || n == 0 => SparseVector::new(),
        Kind::Beta if n == p => {
            SparseVector::from_terms([(BasisVector::alpha(m, n), Scalar::ratio(1, p_i))])
        }
        Kind::Beta => SparseVector::basis(BasisVector::beta(m, n)),
    }
}

/// Finite linear combination of canonical basis vectors. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVector {
    terms: BTreeMap<BasisVector, Scalar>,
}

impl SparseVector {
    pub fn new() -> Self {
        SparseVector { terms: BTreeMap::new() }
    }

    pub fn basis(v: BasisVector) -> Self {
        let mut out = SparseVector::new();
        out.terms.insert(v, Scalar::one());
        out
    }

    pub fn vacuum() -> Self {
        SparseVector::basis(BasisVector::VACUUM)
    }

    pub fn from_terms<I: IntoIterator<Item = (BasisVector, Scalar)>>(terms: I) -> Self {
        let mut out = SparseVector::new();
        for (b, c) in terms {
            out.add_term(b, &c);
        }
        out
    }

    pub fn add_term(&mut self, b: BasisVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &SparseVector) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(*b, &(c * x));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVector {
        if c.is_zero() {
            return SparseVector::new();
        }
        SparseVector {
            terms: self.terms.iter().map(|(b, x)| (*b, c * x)).collect(),
        }
    }

    pub fn sub(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.add_scaled(&Scalar::from_int(-1), other);
        out
    }

    pub fn get(&self, b: &BasisVector) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisVector, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisVector> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_m(&self) -> Option<u32> {
        self.terms.keys().map(|b| b.m).max()
    }
}

impl FromIterator<(BasisVector, Scalar)> for SparseVector {
    fn from_iter<I: IntoIterator<Item = (BasisVector, Scalar)>>(iter: I) -> Self {
        SparseVector::from_terms(iter)
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{b}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SparseTerm {
    basis: BasisVector,
    re: String,
    im: String,
}

impl Serialize for SparseVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::scalar::format_rational;
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (b, c) in &self.terms {
            seq.serialize_element(&SparseTerm {
                basis: *b,
                re: format_rational(c.re()),
                im: format_rational(c.im()),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for SparseVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use crate::scalar::parse_rational;
        use serde::de::Error;
        let raw: Vec<SparseTerm> = Vec::deserialize(deserializer)?;
        let mut out = SparseVector::new();
        for t in raw {
            let re = parse_rational(&t.re).map_err(D::Error::custom)?;
            let im = parse_rational(&t.im).map_err(D::Error::custom)?;
            out.add_term(t.basis, &Scalar::new(re, im));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u32, m_max: u32) -> FockParams {
        FockParams::new(p, m_max).unwrap()
    }

    /// Counts cells by brute force over the (m, n) grid, independently of
    /// `enumerate_basis`.
    fn brute_count(p: u32, m_max: u32) -> usize {
        let mut count = 0;
        for m in 0..=m_max {
            for n in 0..=p {
                count += if m == 0 || n == 0 || n == p { 1 } else { 2 };
            }
        }
        count
    }

    #[test]
    fn smallest_space_is_first_row() {
        let b = enumerate_basis(&params(1, 0));
        assert_eq!(b, vec![BasisVector::alpha(0, 0), BasisVector::alpha(0, 1)]);
    }

    #[test]
    fn p2_mmax1_has_seven_vectors() {
        let b = enumerate_basis(&params(2, 1));
        assert_eq!(
            b,
            vec![
                BasisVector::alpha(0, 0),
                BasisVector::alpha(0, 1),
                BasisVector::alpha(0, 2),
                BasisVector::alpha(1, 0),
                BasisVector::alpha(1, 1),
                BasisVector::beta(1, 1),
                BasisVector::alpha(1, 2),
            ]
        );
    }

    #[test]
    fn p3_mmax2_has_sixteen_vectors() {
        assert_eq!(brute_count(3, 2), 16);
        assert_eq!(enumerate_basis(&params(3, 2)).len(), 16);
    }

    #[test]
    fn dimensions_of_cells() {
        let pr = params(3, 10);
        assert_eq!(subspace_dimension(&pr, 0, 2), 1);
        assert_eq!(subspace_dimension(&pr, 5, 2), 2);
        assert_eq!(subspace_dimension(&pr, 5, 4), 0);
        assert_eq!(subspace_dimension(&pr, 5, 3), 1);
        assert_eq!(subspace_dimension(&pr, 5, 0), 1);
        assert_eq!(subspace_dimension(&pr, -1, 0), 0);
        assert_eq!(subspace_dimension(&pr, 1, -1), 0);
    }

    #[test]
    fn gradings() {
        assert_eq!(grade_z2z2(&BasisVector::alpha(0, 0)), GradeZ2Z2(0, 0));
        assert_eq!(grade_z2z2(&BasisVector::beta(1, 1)), GradeZ2Z2(1, 1));
        assert_eq!(grade_z2z2(&BasisVector::alpha(2, 3)), GradeZ2Z2(0, 1));
        assert_eq!(grade_z2(&BasisVector::alpha(0, 5), Z2Scheme::RowsEvenFirst), 0);
        assert_eq!(grade_z2(&BasisVector::alpha(3, 2), Z2Scheme::RowsEvenFirst), 1);
        assert_eq!(grade_z2(&BasisVector::alpha(3, 2), Z2Scheme::ColsEvenFirst), 0);
        assert_eq!(grade_z2(&BasisVector::alpha(3, 2), Z2Scheme::RowsOddFirst), 0);
        assert_eq!(grade_z2(&BasisVector::alpha(3, 2), Z2Scheme::ColsOddFirst), 1);
    }

    #[test]
    fn canonicalize_degenerate_labels() {
        for p in 1..=5u32 {
            let pr = params(p, 10);
            let got = canonicalize(4, p as i64, Kind::Beta, &pr);
            assert_eq!(
                got,
                SparseVector::from_terms([(BasisVector::alpha(4, p), Scalar::ratio(1, p as i64))])
            );
            assert!(canonicalize(0, 2, Kind::Beta, &pr).is_zero());
            assert!(canonicalize(3, 0, Kind::Beta, &pr).is_zero());
            assert!(canonicalize(2, p as i64 + 1, Kind::Alpha, &pr).is_zero());
            assert!(canonicalize(-1, 0, Kind::Alpha, &pr).is_zero());
        }
        let pr = params(3, 10);
        assert_eq!(canonicalize(2, 1, Kind::Alpha, &pr), SparseVector::basis(BasisVector::alpha(2, 1)));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut v = SparseVector::basis(BasisVector::alpha(1, 1));
        v.add_term(BasisVector::alpha(1, 1), &Scalar::from_int(-1));
        assert!(v.is_zero());
        v.add_term(BasisVector::beta(1, 1), &Scalar::zero());
        assert!(v.is_zero());
    }

    #[test]
    fn sparse_vector_json_shape() {
        let v = SparseVector::from_terms([
            (BasisVector::alpha(0, 1), Scalar::ratio(-1, 2)),
            (BasisVector::beta(2, 1), Scalar::i()),
        ]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"[{"basis":{"m":0,"n":1,"kind":"alpha"},"re":"-1/2","im":"0/1"},{"basis":{"m":2,"n":1,"kind":"beta"},"re":"0/1","im":"1/1"}]"#
        );
        let back: SparseVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn p_must_be_positive() {
        assert!(FockParams::new(0, 3).is_err());
    }
}
