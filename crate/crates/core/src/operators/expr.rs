//! Symbolic operator expressions over the generators and derived operators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::fock::GradeZ2Z2;
use crate::operators::derived::DerivedOp;
use crate::operators::generator::Generator;
use crate::scalar::Scalar;

/// A formal linear combination of words, kept as a tree so that
/// commutators and anticommutators stay readable in reports.
///
/// `Product(vec![a, b, c])` means `a·b·c`: `c` acts first.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr {
    Identity,
    Gen(Generator),
    Derived(DerivedOp),
    Scaled(Scalar, Box<OperatorExpr>),
    Sum(Vec<OperatorExpr>),
    Product(Vec<OperatorExpr>),
    Commutator(Box<OperatorExpr>, Box<OperatorExpr>),
    Anticommutator(Box<OperatorExpr>, Box<OperatorExpr>),
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr::Sum(Vec::new())
    }

    pub fn identity() -> Self {
        OperatorExpr::Identity
    }

    pub fn scalar(c: Scalar) -> Self {
        OperatorExpr::Scaled(c, Box::new(OperatorExpr::Identity))
    }

    pub fn gen(g: Generator) -> Self {
        OperatorExpr::Gen(g)
    }

    pub fn derived(d: DerivedOp) -> Self {
        OperatorExpr::Derived(d)
    }

    pub fn comm(a: OperatorExpr, b: OperatorExpr) -> Self {
        OperatorExpr::Commutator(Box::new(a), Box::new(b))
    }

    pub fn anti(a: OperatorExpr, b: OperatorExpr) -> Self {
        OperatorExpr::Anticommutator(Box::new(a), Box::new(b))
    }

    pub fn product(factors: Vec<OperatorExpr>) -> Self {
        OperatorExpr::Product(factors)
    }

    pub fn pow(&self, k: usize) -> Self {
        if k == 0 {
            OperatorExpr::Identity
        } else {
            OperatorExpr::Product(vec![self.clone(); k])
        }
    }

    pub fn scale(self, c: Scalar) -> Self {
        OperatorExpr::Scaled(c, Box::new(self))
    }

    /// Upper bound on how far above its input an intermediate result can
    /// climb in `m`: the total number of `m`-raising letters along the
    /// longest word.
    pub fn raising_degree(&self) -> u32 {
        match self {
            OperatorExpr::Identity => 0,
            OperatorExpr::Gen(g) => g.m_shift().max(0) as u32,
            OperatorExpr::Derived(d) => d.definition(1).raising_degree(),
            OperatorExpr::Scaled(_, x) => x.raising_degree(),
            OperatorExpr::Sum(xs) => xs.iter().map(|x| x.raising_degree()).max().unwrap_or(0),
            OperatorExpr::Product(xs) => xs.iter().map(|x| x.raising_degree()).sum(),
            OperatorExpr::Commutator(a, b) | OperatorExpr::Anticommutator(a, b) => {
                a.raising_degree() + b.raising_degree()
            }
        }
    }

    /// Largest net shift in `m` over all words.
    pub fn net_m_shift(&self) -> i64 {
        match self {
            OperatorExpr::Identity => 0,
            OperatorExpr::Gen(g) => g.m_shift(),
            OperatorExpr::Derived(d) => d.definition(1).net_m_shift(),
            OperatorExpr::Scaled(_, x) => x.net_m_shift(),
            OperatorExpr::Sum(xs) => xs.iter().map(|x| x.net_m_shift()).max().unwrap_or(0),
            OperatorExpr::Product(xs) => xs.iter().map(|x| x.net_m_shift()).sum(),
            OperatorExpr::Commutator(a, b) | OperatorExpr::Anticommutator(a, b) => {
                a.net_m_shift() + b.net_m_shift()
            }
        }
    }

    fn needs_parens(&self) -> bool {
        matches!(self, OperatorExpr::Sum(xs) if xs.len() > 1)
            || matches!(self, OperatorExpr::Product(xs) if xs.len() > 1)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Identity => write!(f, "1"),
            OperatorExpr::Gen(g) => write!(f, "{g}"),
            OperatorExpr::Derived(d) => write!(f, "{d}"),
            OperatorExpr::Scaled(c, x) => {
                if matches!(**x, OperatorExpr::Identity) {
                    write!(f, "({c})")
                } else if x.needs_parens() {
                    write!(f, "({c})·({x})")
                } else {
                    write!(f, "({c})·{x}")
                }
            }
            OperatorExpr::Sum(xs) => {
                if xs.is_empty() {
                    return write!(f, "0");
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            OperatorExpr::Product(xs) => {
                if xs.is_empty() {
                    return write!(f, "1");
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "·")?;
                    }
                    if x.needs_parens() {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            OperatorExpr::Commutator(a, b) => write!(f, "[{a},{b}]"),
            OperatorExpr::Anticommutator(a, b) => write!(f, "{{{a},{b}}}"),
        }
    }
}

impl From<Generator> for OperatorExpr {
    fn from(g: Generator) -> Self {
        OperatorExpr::Gen(g)
    }
}

impl From<DerivedOp> for OperatorExpr {
    fn from(d: DerivedOp) -> Self {
        OperatorExpr::Derived(d)
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: OperatorExpr) -> OperatorExpr {
        match self {
            OperatorExpr::Sum(mut xs) => {
                xs.push(rhs);
                OperatorExpr::Sum(xs)
            }
            other => OperatorExpr::Sum(vec![other, rhs]),
        }
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        self + (-rhs)
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(Scalar::from_int(-1))
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        match self {
            OperatorExpr::Product(mut xs) => {
                xs.push(rhs);
                OperatorExpr::Product(xs)
            }
            other => OperatorExpr::Product(vec![other, rhs]),
        }
    }
}

/// Result of grading an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExprGrade {
    Homogeneous(GradeZ2Z2),
    NonHomogeneous,
}

#[derive(Clone, Copy)]
enum Partial {
    Zero,
    Grade(GradeZ2Z2),
    Mixed,
}

fn grade_partial(expr: &OperatorExpr) -> Partial {
    match expr {
        OperatorExpr::Identity => Partial::Grade(GradeZ2Z2::ZERO),
        OperatorExpr::Gen(g) => Partial::Grade(g.grade()),
        OperatorExpr::Derived(d) => grade_partial(&d.definition(1)),
        OperatorExpr::Scaled(c, x) => {
            if c.is_zero() {
                Partial::Zero
            } else {
                grade_partial(x)
            }
        }
        OperatorExpr::Sum(xs) => {
            let mut acc = Partial::Zero;
            for x in xs {
                acc = match (acc, grade_partial(x)) {
                    (Partial::Mixed, _) | (_, Partial::Mixed) => Partial::Mixed,
                    (Partial::Zero, other) | (other, Partial::Zero) => other,
                    (Partial::Grade(a), Partial::Grade(b)) if a == b => Partial::Grade(a),
                    _ => Partial::Mixed,
                };
            }
            acc
        }
        OperatorExpr::Product(xs) => {
            let mut acc = Partial::Grade(GradeZ2Z2::ZERO);
            for x in xs {
                acc = match (acc, grade_partial(x)) {
                    (Partial::Zero, _) | (_, Partial::Zero) => Partial::Zero,
                    (Partial::Mixed, _) | (_, Partial::Mixed) => Partial::Mixed,
                    (Partial::Grade(a), Partial::Grade(b)) => Partial::Grade(a + b),
                };
            }
            acc
        }
        OperatorExpr::Commutator(a, b) | OperatorExpr::Anticommutator(a, b) => {
            match (grade_partial(a), grade_partial(b)) {
                (Partial::Zero, _) | (_, Partial::Zero) => Partial::Zero,
                (Partial::Mixed, _) | (_, Partial::Mixed) => Partial::Mixed,
                (Partial::Grade(x), Partial::Grade(y)) => Partial::Grade(x + y),
            }
        }
    }
}

/// `Z₂ × Z₂` degree of an expression: the common degree of all its words,
/// with `deg b± = (1,0)` and `deg f± = (0,1)`. The zero expression counts as
/// degree `(0,0)`.
pub fn grade_of_expr(expr: &OperatorExpr) -> ExprGrade {
    match grade_partial(expr) {
        Partial::Zero => ExprGrade::Homogeneous(GradeZ2Z2::ZERO),
        Partial::Grade(g) => ExprGrade::Homogeneous(g),
        Partial::Mixed => ExprGrade::NonHomogeneous,
    }
}

/// Color function `θ(a,b) = (−1)^(a₁b₁ + a₂b₂)`.
pub fn theta(a: GradeZ2Z2, b: GradeZ2Z2) -> Scalar {
    let e = (a.0 & b.0) ^ (a.1 & b.1);
    if e == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}
