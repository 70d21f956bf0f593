//! A second, deliberately naive implementation of the ladder action used as
//! a reference in tests: labels are plain tuples, operators are flat lists of
//! words, and nothing is shared with the library except the conversion to
//! `SparseVector` at the boundary.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pbf_core::{BasisVector, Kind, Scalar, SparseVector};

/// `(m, n, is_psi)`.
pub type Label = (i64, i64, bool);
pub type Vector = BTreeMap<Label, BigRational>;
/// Linear combination of words; each word acts right to left.
pub type Poly = Vec<(BigRational, Vec<&'static str>)>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn parity_sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn canon((m, n, psi): Label, p: i64) -> Vector {
    let mut out = Vector::new();
    if m < 0 || n < 0 || n > p {
        return out;
    }
    if psi {
        if m == 0 || n == 0 {
            return out;
        }
        if n == p {
            out.insert((m, p, false), BigRational::new(BigInt::one(), BigInt::from(p)));
            return out;
        }
    }
    out.insert((m, n, psi), BigRational::one());
    out
}

fn accumulate(out: &mut Vector, c: &BigRational, v: &Vector) {
    for (k, x) in v {
        let e = out.entry(*k).or_insert_with(BigRational::zero);
        *e += c * x;
    }
    out.retain(|_, x| !x.is_zero());
}

pub fn gen_on_label(g: &str, (m, n, psi): Label, p: i64) -> Vector {
    let s = parity_sign(n);
    let even = m % 2 == 0;
    let raw: Vec<(i64, Label)> = match (g, psi) {
        ("b-", false) if even => vec![(s * m, (m - 1, n, false)), (-2 * s * n * m, (m - 1, n, true))],
        ("b-", false) => vec![
            (-s * (2 * n - m - (p - 1)), (m - 1, n, false)),
            (-2 * s * n * (m - 1), (m - 1, n, true)),
        ],
        ("b-", true) if even => vec![(-s, (m - 1, n, false)), (s * (2 * n - m - p), (m - 1, n, true))],
        ("b-", true) => vec![(-s, (m - 1, n, false)), (-s * (m - 1), (m - 1, n, true))],
        ("f-", false) => vec![(n * (p + 1 - n), (m, n - 1, false))],
        ("f-", true) => vec![(1, (m, n - 1, false)), ((n - 1) * (p - n), (m, n - 1, true))],
        ("b+", false) => vec![(s, (m + 1, n, false)), (-s * 2 * n, (m + 1, n, true))],
        ("b+", true) => vec![(-s, (m + 1, n, true))],
        ("f+", k) => {
            if n < p {
                vec![(1, (m, n + 1, k))]
            } else {
                vec![]
            }
        }
        _ => panic!("unknown generator {g}"),
    };
    let mut out = Vector::new();
    for (c, l) in raw {
        accumulate(&mut out, &q(c), &canon(l, p));
    }
    out
}

pub fn gen(g: &str, v: &Vector, p: i64) -> Vector {
    let mut out = Vector::new();
    for (l, c) in v {
        accumulate(&mut out, c, &gen_on_label(g, *l, p));
    }
    out
}

pub fn word(w: &[&str], v: &Vector, p: i64) -> Vector {
    let mut cur = v.clone();
    for g in w.iter().rev() {
        cur = gen(g, &cur, p);
    }
    cur
}

pub fn eval(e: &Poly, v: &Vector, p: i64) -> Vector {
    let mut out = Vector::new();
    for (c, w) in e {
        accumulate(&mut out, c, &word(w, v, p));
    }
    out
}

pub fn g(x: &'static str) -> Poly {
    vec![(BigRational::one(), vec![x])]
}

pub fn scale(c: BigRational, e: Poly) -> Poly {
    e.into_iter().map(|(x, w)| (&c * x, w)).collect()
}

pub fn plus(a: Poly, b: Poly) -> Poly {
    a.into_iter().chain(b).collect()
}

fn products(a: &Poly, b: &Poly, sign: i64) -> Poly {
    let mut out = Poly::new();
    for (ca, wa) in a {
        for (cb, wb) in b {
            out.push((ca * cb, wa.iter().chain(wb).copied().collect()));
            out.push((q(sign) * ca * cb, wb.iter().chain(wa).copied().collect()));
        }
    }
    out
}

pub fn comm(a: Poly, b: Poly) -> Poly {
    products(&a, &b, -1)
}

pub fn anti(a: Poly, b: Poly) -> Poly {
    products(&a, &b, 1)
}

pub fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

pub fn q_plus() -> Poly {
    scale(half(), anti(g("b-"), g("f+")))
}

pub fn q_minus() -> Poly {
    scale(half(), anti(g("b+"), g("f-")))
}

pub fn r_plus() -> Poly {
    scale(half(), anti(g("b+"), g("f+")))
}

pub fn n_b(p: i64) -> Poly {
    plus(scale(half(), anti(g("b+"), g("b-"))), vec![(-q(p) * half(), vec![])])
}

pub fn n_f(p: i64) -> Poly {
    plus(scale(half(), comm(g("f+"), g("f-"))), vec![(q(p) * half(), vec![])])
}

/// The 32 trilinear relations, transcribed independently of the library's
/// catalog. `lhs − rhs` for each.
pub fn defining_relations() -> Vec<Poly> {
    let (bp, bm, fp, fm) = (|| g("b+"), || g("b-"), || g("f+"), || g("f-"));
    let k = |c: i64, e: Poly| scale(q(c), e);
    let zero = Poly::new;
    let pairs: Vec<(Poly, Poly)> = vec![
        (comm(anti(bp(), bp()), fm()), zero()),
        (comm(comm(fp(), fm()), bm()), zero()),
        (comm(anti(bm(), bm()), fm()), zero()),
        (comm(anti(bp(), bm()), fm()), zero()),
        (comm(anti(fm(), bp()), bm()), k(-2, fm())),
        (anti(anti(bm(), fp()), fm()), k(2, bm())),
        (comm(anti(bm(), fm()), bp()), k(2, fm())),
        (anti(anti(fm(), bm()), fp()), k(2, bm())),
        (comm(anti(bm(), bp()), fp()), zero()),
        (comm(comm(fm(), fp()), bp()), zero()),
        (comm(anti(fp(), bm()), bp()), k(2, fp())),
        (anti(anti(bp(), fm()), fp()), k(2, bp())),
        (comm(anti(bp(), fp()), bm()), k(-2, fp())),
        (anti(anti(fp(), bp()), fm()), k(2, bp())),
        (comm(anti(fm(), bm()), bm()), zero()),
        (comm(anti(fm(), bp()), bp()), zero()),
        (comm(anti(bp(), bp()), fp()), zero()),
        (comm(anti(bm(), bm()), fp()), zero()),
        (comm(anti(fp(), bp()), bp()), zero()),
        (comm(anti(fp(), bm()), bm()), zero()),
        (anti(anti(bm(), fm()), fm()), zero()),
        (anti(anti(bm(), fp()), fp()), zero()),
        (anti(anti(bp(), fp()), fp()), zero()),
        (anti(anti(bp(), fm()), fm()), zero()),
        (comm(bm(), anti(bp(), bm())), k(2, bm())),
        (comm(bp(), anti(bp(), bp())), zero()),
        (comm(bm(), anti(bm(), bm())), zero()),
        (comm(bm(), anti(bp(), bp())), k(4, bp())),
        (comm(bp(), anti(bm(), bm())), k(-4, bm())),
        (comm(fm(), comm(fp(), fm())), k(2, fm())),
        (comm(bp(), anti(bm(), bp())), k(-2, bp())),
        (comm(fp(), comm(fm(), fp())), k(2, fp())),
    ];
    pairs.into_iter().map(|(l, r)| plus(l, k(-1, r))).collect()
}

pub fn all_labels(p: i64, m_limit: i64) -> Vec<Label> {
    let mut out = Vec::new();
    for m in 0..=m_limit {
        for n in 0..=p {
            out.push((m, n, false));
            if m >= 1 && n >= 1 && n < p {
                out.push((m, n, true));
            }
        }
    }
    out
}

pub fn unit(l: Label) -> Vector {
    BTreeMap::from([(l, BigRational::one())])
}

pub fn to_sparse(v: &Vector) -> SparseVector {
    v.iter()
        .map(|((m, n, psi), c)| {
            let kind = if *psi { Kind::Beta } else { Kind::Alpha };
            (BasisVector { m: *m as u32, n: *n as u32, kind }, Scalar::real(c.clone()))
        })
        .collect()
}

pub fn label_of(b: &BasisVector) -> Label {
    (b.m as i64, b.n as i64, b.kind == Kind::Beta)
}

/// Inner product by moving the adjoint of the creation word onto `x`,
/// so `x` may be any vector.
pub fn inner(x: &Vector, (m, n, psi): Label, p: i64) -> BigRational {
    let lowering = |k: i64, g: &'static str| vec![g; k as usize];
    let adj: Poly = if psi {
        let r_adj = scale(half(), anti(g("f-"), g("b-")));
        let tail: Vec<&'static str> = lowering(m - 1, "b-").into_iter().chain(lowering(n - 1, "f-")).collect();
        r_adj.into_iter().map(|(c, w)| (c, w.into_iter().chain(tail.iter().copied()).collect())).collect()
    } else {
        vec![(q(1), lowering(m, "b-").into_iter().chain(lowering(n, "f-")).collect())]
    };
    eval(&adj, x, p).get(&(0, 0, false)).cloned().unwrap_or_else(BigRational::zero)
}
