//! The Farkas alternative used by every certificate in the crate.
//!
//! For a matrix `A` exactly one of these holds:
//!
//! 1. some `x ≥ 0` with `Ax ≤ 0` and `Ax ≠ 0` (a cone witness), or
//! 2. some `y > 0` with `Aᵀy ≥ 0` (a positive certificate).
//!
//! Both feasible sets are cones, so `y > 0` is encoded as `y ≥ 1` and
//! `Ax ≠ 0` as `1ᵀ(-Ax) ≥ 1` without losing solutions. Witnesses are
//! chosen with the smallest entry sum.

use num_traits::{One, Signed, Zero};

use super::{
    all_zero, is_nonnegative, lp_feasible, lp_minimize, LinearSystem, Optimum, Rational,
    RationalMatrix,
};

#[derive(Debug, Clone, PartialEq)]
pub enum FarkasResult {
    /// `x ≥ 0`, `Ax ≤ 0`, `Ax ≠ 0`.
    ConeWitness(Vec<Rational>),
    /// `y > 0` (every entry at least one), `Aᵀy ≥ 0`.
    PositiveCertificate(Vec<Rational>),
}

impl FarkasResult {
    pub fn witness(&self) -> &[Rational] {
        match self {
            FarkasResult::ConeWitness(v) | FarkasResult::PositiveCertificate(v) => v,
        }
    }

    /// 1 for a cone witness, 2 for a positive certificate.
    pub fn branch(&self) -> u8 {
        match self {
            FarkasResult::ConeWitness(_) => 1,
            FarkasResult::PositiveCertificate(_) => 2,
        }
    }
}

/// `{y ≥ 1, Aᵀy ≥ 0}` over `rows(A)` variables.
pub fn positive_certificate_system(a: &RationalMatrix) -> LinearSystem {
    let mut sys = LinearSystem::new(a.rows());
    for i in 0..a.rows() {
        sys.lower_bound(i, Rational::one());
    }
    for j in 0..a.cols() {
        sys.add_ge(a.column(j), Rational::zero());
    }
    sys
}

/// `{x ≥ 0, Ax ≤ 0, 1ᵀAx ≤ -1}` over `cols(A)` variables.
pub fn cone_witness_system(a: &RationalMatrix) -> LinearSystem {
    let mut sys = LinearSystem::new(a.cols());
    sys.nonnegative();
    let mut total = vec![Rational::zero(); a.cols()];
    for i in 0..a.rows() {
        let row = a.row(i).to_vec();
        for (t, v) in total.iter_mut().zip(&row) {
            *t += v;
        }
        sys.add_le(row, Rational::zero());
    }
    sys.add_le(total, -Rational::one());
    sys
}

pub fn is_cone_witness(a: &RationalMatrix, x: &[Rational]) -> bool {
    if x.len() != a.cols() || !is_nonnegative(x) {
        return false;
    }
    let ax = a.mul_vec(x);
    ax.iter().all(|v| !v.is_positive()) && !all_zero(&ax)
}

pub fn is_positive_certificate(a: &RationalMatrix, y: &[Rational]) -> bool {
    y.len() == a.rows()
        && y.iter().all(Signed::is_positive)
        && a.left_mul_vec(y).iter().all(|v| !v.is_negative())
}

/// Returns whichever side of the alternative holds, with a witness that
/// re-verifies exactly.
pub fn farkas_alternative(a: &RationalMatrix) -> FarkasResult {
    if let Optimum::Optimal(y) = lp_minimize(&positive_certificate_system(a), &vec![Rational::one(); a.rows()]) {
        debug_assert!(is_positive_certificate(a, &y));
        return FarkasResult::PositiveCertificate(y);
    }
    match lp_minimize(&cone_witness_system(a), &vec![Rational::one(); a.cols()]) {
        Optimum::Optimal(x) => {
            debug_assert!(is_cone_witness(a, &x));
            FarkasResult::ConeWitness(x)
        }
        other => panic!("Farkas alternative: neither branch holds ({other:?})"),
    }
}

/// Finds `c` with `cᵀM = 0`, `c_i ≥ 1` on `positive`, `c_i = 0` on `zero`
/// and `c_i ≥ 0` elsewhere. `M` has one row per entry of `c`.
pub fn sign_constrained_nullvector(
    m: &RationalMatrix,
    positive: &[usize],
    zero: &[usize],
) -> Option<Vec<Rational>> {
    assert!(
        positive.iter().all(|p| !zero.contains(p)),
        "positive and zero supports overlap"
    );
    let n = m.rows();
    let mut sys = LinearSystem::new(n);
    sys.nonnegative();
    for &p in positive {
        sys.lower_bound(p, Rational::one());
    }
    for &z in zero {
        let mut e = vec![Rational::zero(); n];
        e[z] = Rational::one();
        sys.add_eq(e, Rational::zero());
    }
    for j in 0..m.cols() {
        sys.add_eq(m.column(j), Rational::zero());
    }
    lp_feasible(&sys).point()
}
