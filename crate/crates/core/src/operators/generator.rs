//! The four generators `b±`, `f±` and their action on the carrier space.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::{canonicalize_label, BasisVector, FockParams, GradeZ2Z2, Kind, SparseVector};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    BPlus,
    BMinus,
    FPlus,
    FMinus,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::BPlus,
        Generator::BMinus,
        Generator::FPlus,
        Generator::FMinus,
    ];

    /// Shift in the parabosonic label `m`.
    pub fn m_shift(self) -> i64 {
        match self {
            Generator::BPlus => 1,
            Generator::BMinus => -1,
            Generator::FPlus | Generator::FMinus => 0,
        }
    }

    /// Shift in the parafermionic label `n`.
    pub fn n_shift(self) -> i64 {
        match self {
            Generator::FPlus => 1,
            Generator::FMinus => -1,
            Generator::BPlus | Generator::BMinus => 0,
        }
    }

    pub fn grade(self) -> GradeZ2Z2 {
        match self {
            Generator::BPlus | Generator::BMinus => GradeZ2Z2(1, 0),
            Generator::FPlus | Generator::FMinus => GradeZ2Z2(0, 1),
        }
    }

    /// `(b⁻)† = b⁺`, `(f⁻)† = f⁺`.
    pub fn adjoint(self) -> Generator {
        match self {
            Generator::BPlus => Generator::BMinus,
            Generator::BMinus => Generator::BPlus,
            Generator::FPlus => Generator::FMinus,
            Generator::FMinus => Generator::FPlus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::BPlus => "b+",
            Generator::BMinus => "b-",
            Generator::FPlus => "f+",
            Generator::FMinus => "f-",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One output term of a raw action formula: integer coefficient and a label
/// that may still be degenerate.
pub(crate) type RawTerm = (i64, i64, i64, Kind);

pub(crate) fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The ladder formulas, evaluated on any label `(m, n, kind)` without
/// canonicalizing the output.
pub(crate) fn raw_generator_action(g: Generator, m: i64, n: i64, kind: Kind, p: i64) -> Vec<RawTerm> {
    let s = sign(n);
    let even = m % 2 == 0;
    match (g, kind) {
        (Generator::BMinus, Kind::Alpha) if even => vec![
            (s * m, m - 1, n, Kind::Alpha),
            (-2 * s * n * m, m - 1, n, Kind::Beta),
        ],
        (Generator::BMinus, Kind::Alpha) => vec![
            (-s * (2 * n - m - (p - 1)), m - 1, n, Kind::Alpha),
            (-2 * s * n * (m - 1), m - 1, n, Kind::Beta),
        ],
        (Generator::BMinus, Kind::Beta) if even => vec![
            (-s, m - 1, n, Kind::Alpha),
            (s * (2 * n - m - p), m - 1, n, Kind::Beta),
        ],
        (Generator::BMinus, Kind::Beta) => vec![
            (-s, m - 1, n, Kind::Alpha),
            (-s * (m - 1), m - 1, n, Kind::Beta),
        ],
        (Generator::FMinus, Kind::Alpha) => vec![(n * (p + 1 - n), m, n - 1, Kind::Alpha)],
        (Generator::FMinus, Kind::Beta) => vec![
            (1, m, n - 1, Kind::Alpha),
            ((n - 1) * (p - n), m, n - 1, Kind::Beta),
        ],
        (Generator::BPlus, Kind::Alpha) => vec![
            (s, m + 1, n, Kind::Alpha),
            (-s * 2 * n, m + 1, n, Kind::Beta),
        ],
        (Generator::BPlus, Kind::Beta) => vec![(-s, m + 1, n, Kind::Beta)],
        (Generator::FPlus, kind) => {
            if n < p {
                vec![(1, m, n + 1, kind)]
            } else {
                Vec::new()
            }
        }
    }
}

/// Sums raw terms into the canonical basis and rejects anything above `cap`.
pub(crate) fn collect_terms(terms: &[RawTerm], p: u32, cap: u32) -> Result<SparseVector> {
    let mut out = SparseVector::new();
    for &(c, m, n, kind) in terms {
        if c == 0 {
            continue;
        }
        let canon = canonicalize_label(m, n, kind, p);
        out.add_scaled(&Scalar::from_int(c), &canon);
    }
    if let Some(top) = out.max_m() {
        if top > cap {
            return Err(FockError::TruncationOverflow { needed: top as i64, m_max: cap });
        }
    }
    Ok(out)
}

/// Action of a generator on a canonical basis vector, canonicalized.
///
/// Fails with `TruncationOverflow` if the image leaves `m ≤ m_max`.
pub fn apply_generator(g: Generator, v: &BasisVector, params: &FockParams) -> Result<SparseVector> {
    apply_generator_capped(g, v, params.p(), params.m_max())
}

pub(crate) fn apply_generator_capped(g: Generator, v: &BasisVector, p: u32, cap: u32) -> Result<SparseVector> {
    debug_assert!(v.is_canonical(p), "non-canonical basis vector {v}");
    let terms = raw_generator_action(g, v.m as i64, v.n as i64, v.kind, p as i64);
    collect_terms(&terms, p, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u32, m_max: u32) -> FockParams {
        FockParams::new(p, m_max).unwrap()
    }

    #[test]
    fn f_minus_lowers_column() {
        let out = apply_generator(Generator::FMinus, &BasisVector::alpha(2, 2), &params(3, 5)).unwrap();
        assert_eq!(out, SparseVector::from_terms([(BasisVector::alpha(2, 1), Scalar::from_int(4))]));
    }

    #[test]
    fn vacuum_is_annihilated() {
        let pr = params(3, 5);
        assert!(apply_generator(Generator::BMinus, &BasisVector::VACUUM, &pr).unwrap().is_zero());
        assert!(apply_generator(Generator::FMinus, &BasisVector::VACUUM, &pr).unwrap().is_zero());
    }

    #[test]
    fn b_plus_on_phi_and_psi() {
        let pr = params(3, 5);
        let out = apply_generator(Generator::BPlus, &BasisVector::alpha(2, 1), &pr).unwrap();
        assert_eq!(
            out,
            SparseVector::from_terms([
                (BasisVector::alpha(3, 1), Scalar::from_int(-1)),
                (BasisVector::beta(3, 1), Scalar::from_int(2)),
            ])
        );
        let out = apply_generator(Generator::BPlus, &BasisVector::beta(1, 1), &pr).unwrap();
        assert_eq!(out, SparseVector::basis(BasisVector::beta(2, 1)));
    }

    #[test]
    fn f_plus_stops_at_last_column() {
        let pr = params(2, 3);
        assert!(apply_generator(Generator::FPlus, &BasisVector::alpha(1, 2), &pr).unwrap().is_zero());
        // ψ_{1,1} → ψ_{1,2} = φ_{1,2}/2
        let out = apply_generator(Generator::FPlus, &BasisVector::beta(1, 1), &pr).unwrap();
        assert_eq!(out, SparseVector::from_terms([(BasisVector::alpha(1, 2), Scalar::ratio(1, 2))]));
    }

    #[test]
    fn b_plus_overflows_at_cap() {
        let pr = params(2, 3);
        let err = apply_generator(Generator::BPlus, &BasisVector::alpha(3, 0), &pr).unwrap_err();
        assert_eq!(err, FockError::TruncationOverflow { needed: 4, m_max: 3 });
    }

    /// The raw formulas evaluated on the degenerate label ψ_{m,p} must agree
    /// with (1/p)·(formula on φ_{m,p}).
    #[test]
    fn degenerate_last_column_label_is_consistent() {
        for p in 1..=6i64 {
            for m in 1..=9i64 {
                for g in Generator::ALL {
                    let via_psi = collect_terms(&raw_generator_action(g, m, p, Kind::Beta, p), p as u32, 100).unwrap();
                    let via_phi = collect_terms(&raw_generator_action(g, m, p, Kind::Alpha, p), p as u32, 100)
                        .unwrap()
                        .scaled(&Scalar::ratio(1, p));
                    assert_eq!(via_psi, via_phi, "g={g} m={m} p={p}");
                }
            }
        }
    }
}
