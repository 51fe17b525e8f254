//! Weak dynamical non-emptiability of a siphon.
//!
//! For a siphon `I` the reactions are partially ordered by their reactant
//! coefficients on `I`: a pair `(slow, fast)` means reaction `slow` consumes
//! at least as much of every species of `I` as `fast`, and strictly more of
//! one, so near the face `x_I = 0` its rate is at most `ε` times the rate of
//! `fast`. Choosing a set `J` of such pairs stacks the rows of `Γ` on `I`
//! over one row per pair (`+1` at `slow`, `-ε` at `fast`). A strictly
//! positive `c` with `cᵀΓ̃ ≥ 0` certifies the siphon; otherwise a cone
//! witness shows why this particular `(J, ε)` fails.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::exactla::{
    cone_witness_system, farkas_alternative, is_cone_witness, lp_feasible, pow2_inv, primitive,
    FarkasResult, Feasibility, LinearSystem, Rational, RationalMatrix,
};
use crate::netmodel::{stoichiometric_matrix, Network};
use crate::siphon::{full_support_conservation, semi_conservation_within};
use crate::structure::{complex_graph, face_geometry, is_weakly_reversible};

pub const DEFAULT_EPSILON_EXPONENT: u32 = 40;
pub const DEFAULT_J_SUBSET_CAP: usize = 1 << 16;
const MAX_REFUTATIONS: usize = 8;

/// `2⁻⁴⁰`
pub fn default_epsilon() -> Rational {
    pow2_inv(DEFAULT_EPSILON_EXPONENT)
}

/// Reaction `slow` precedes reaction `fast` on the siphon. Zero-based;
/// serialized one-based as `[slow, fast]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderPair {
    pub slow: usize,
    pub fast: usize,
}

impl OrderPair {
    pub fn new(slow: usize, fast: usize) -> Self {
        Self { slow, fast }
    }
}

impl fmt::Display for OrderPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.slow + 1, self.fast + 1)
    }
}

impl Serialize for OrderPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&(self.slow + 1))?;
        t.serialize_element(&(self.fast + 1))?;
        t.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WdneError {
    #[error("siphon is empty")]
    EmptySiphon,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("pair {0} is not ordered on the siphon")]
    PairNotOrdered(OrderPair),
    #[error("reaction index {0} out of range")]
    ReactionOutOfRange(usize),
}

/// `α_slow ≥ α_fast` on every species of `siphon`, strictly on one.
pub fn precedes(net: &Network, siphon: &[usize], slow: usize, fast: usize) -> bool {
    let a = &net.reactions()[slow].reactant;
    let b = &net.reactions()[fast].reactant;
    let mut strict = false;
    for &k in siphon {
        let (x, y) = (a.coefficient(k), b.coefficient(k));
        if x < y {
            return false;
        }
        strict |= x > y;
    }
    strict
}

/// Every ordered pair, sorted lexicographically.
pub fn order_pairs(net: &Network, siphon: &[usize]) -> Vec<OrderPair> {
    let r = net.num_reactions();
    let mut out = Vec::new();
    for slow in 0..r {
        for fast in 0..r {
            if slow != fast && precedes(net, siphon, slow, fast) {
                out.push(OrderPair::new(slow, fast));
            }
        }
    }
    out
}

/// `Γ` restricted to the siphon rows, stacked over one row per pair.
pub fn build_gamma_tilde(
    net: &Network,
    siphon: &[usize],
    pairs: &[OrderPair],
    epsilon: &Rational,
) -> Result<RationalMatrix, WdneError> {
    if siphon.is_empty() {
        return Err(WdneError::EmptySiphon);
    }
    if !epsilon.is_positive() {
        return Err(WdneError::NonPositiveEpsilon);
    }
    let r = net.num_reactions();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(pairs.len());
    for &p in pairs {
        if p.slow >= r || p.fast >= r {
            return Err(WdneError::ReactionOutOfRange(p.slow.max(p.fast)));
        }
        if !precedes(net, siphon, p.slow, p.fast) {
            return Err(WdneError::PairNotOrdered(p));
        }
        let mut row = vec![Rational::zero(); r];
        row[p.slow] = Rational::one();
        row[p.fast] = -epsilon.clone();
        rows.push(row);
    }
    let top = stoichiometric_matrix(net).to_rational().select_rows(siphon);
    Ok(top.vstack(&RationalMatrix::from_rows(r, rows)))
}

/// A positive `c = (c_I, c_J)` with `cᵀΓ̃ ≥ 0`, and the derived `α`
/// (`-c_I` on the siphon, zero elsewhere).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WdneCertificate {
    #[serde(serialize_with = "crate::ser::one_based")]
    pub siphon: Vec<usize>,
    pub pairs: Vec<OrderPair>,
    #[serde(serialize_with = "crate::ser::rational")]
    pub epsilon: Rational,
    #[serde(serialize_with = "crate::ser::rationals")]
    pub c: Vec<Rational>,
    #[serde(serialize_with = "crate::ser::rationals")]
    pub alpha: Vec<Rational>,
}

impl WdneCertificate {
    pub fn new(
        net: &Network,
        siphon: &[usize],
        pairs: &[OrderPair],
        epsilon: Rational,
        c: Vec<Rational>,
    ) -> Self {
        let mut alpha = vec![Rational::zero(); net.num_species()];
        for (&s, ci) in siphon.iter().zip(&c) {
            alpha[s] = -ci.clone();
        }
        Self {
            siphon: siphon.to_vec(),
            pairs: pairs.to_vec(),
            epsilon,
            c,
            alpha,
        }
    }

    /// `cᵀΓ̃` at the stored `ε`.
    pub fn slack(&self, net: &Network) -> Option<Vec<Rational>> {
        self.slack_at(net, &self.epsilon)
    }

    pub fn slack_at(&self, net: &Network, epsilon: &Rational) -> Option<Vec<Rational>> {
        let gt = build_gamma_tilde(net, &self.siphon, &self.pairs, epsilon).ok()?;
        (self.c.len() == gt.rows()).then(|| gt.left_mul_vec(&self.c))
    }

    pub fn verify(&self, net: &Network) -> bool {
        self.verify_at(net, &self.epsilon)
    }

    /// Exact re-check of `c ≥ 1`, `cᵀΓ̃ ≥ 0` at `epsilon`, and the sign
    /// pattern of `α`.
    pub fn verify_at(&self, net: &Network, epsilon: &Rational) -> bool {
        let Some(slack) = self.slack_at(net, epsilon) else {
            return false;
        };
        let one = Rational::one();
        self.c.iter().all(|v| *v >= one)
            && slack.iter().all(|v| !v.is_negative())
            && self.alpha.len() == net.num_species()
            && self.alpha.iter().enumerate().all(|(k, a)| {
                if self.siphon.contains(&k) {
                    a.is_negative()
                } else {
                    a.is_zero()
                }
            })
            && self
                .siphon
                .iter()
                .zip(&self.c)
                .all(|(&s, ci)| self.alpha[s] == -ci.clone())
    }

    /// Independent check that the opposite Farkas branch is infeasible,
    /// by re-solving it and verifying the returned dual multipliers.
    pub fn other_branch_infeasible(&self, net: &Network) -> bool {
        let Ok(gt) = build_gamma_tilde(net, &self.siphon, &self.pairs, &self.epsilon) else {
            return false;
        };
        let sys = cone_witness_system(&gt);
        match lp_feasible(&sys) {
            Feasibility::Infeasible(cert) => sys.verify_infeasibility(&cert),
            Feasibility::Feasible(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WdneOutcome {
    Certified(WdneCertificate),
    /// `v ≥ 0` with `Γ̃v ≤ 0` and `Γ̃v ≠ 0`.
    Refuted(Vec<Rational>),
}

impl WdneOutcome {
    pub fn certificate(&self) -> Option<&WdneCertificate> {
        match self {
            WdneOutcome::Certified(c) => Some(c),
            WdneOutcome::Refuted(_) => None,
        }
    }
}

pub fn check_wdne(
    net: &Network,
    siphon: &[usize],
    pairs: &[OrderPair],
    epsilon: &Rational,
) -> Result<WdneOutcome, WdneError> {
    let gt = build_gamma_tilde(net, siphon, pairs, epsilon)?;
    Ok(match farkas_alternative(&gt) {
        FarkasResult::PositiveCertificate(c) => WdneOutcome::Certified(WdneCertificate::new(
            net,
            siphon,
            pairs,
            epsilon.clone(),
            c,
        )),
        FarkasResult::ConeWitness(v) => WdneOutcome::Refuted(v),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassicDne {
    NonEmptiable,
    /// A nonzero `v ≥ 0`, normalised to `Σv = 1`, in the cone.
    Witness(Vec<Rational>),
}

/// The older, stronger notion: every pair of the order is used at once and
/// the cone `{v ≥ 0 : Γ_I v ≤ 0, v_slow ≤ ε v_fast}` must be `{0}`.
pub fn check_dne_classic(
    net: &Network,
    siphon: &[usize],
    epsilon: &Rational,
) -> Result<ClassicDne, WdneError> {
    if siphon.is_empty() {
        return Err(WdneError::EmptySiphon);
    }
    if !epsilon.is_positive() {
        return Err(WdneError::NonPositiveEpsilon);
    }
    let r = net.num_reactions();
    let gamma_i = stoichiometric_matrix(net).to_rational().select_rows(siphon);
    let mut sys = LinearSystem::new(r);
    sys.nonnegative();
    for i in 0..gamma_i.rows() {
        sys.add_le(gamma_i.row(i).to_vec(), Rational::zero());
    }
    for p in order_pairs(net, siphon) {
        let mut row = vec![Rational::zero(); r];
        row[p.slow] = Rational::one();
        row[p.fast] = -epsilon.clone();
        sys.add_le(row, Rational::zero());
    }
    sys.add_eq(vec![Rational::one(); r], Rational::one());
    Ok(match lp_feasible(&sys).point() {
        Some(v) => ClassicDne::Witness(v),
        None => ClassicDne::NonEmptiable,
    })
}

/// Rank-one data behind the facet construction: `Γ_I = z γᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetShortcut {
    pub pairs: Vec<OrderPair>,
    pub z: Vec<Rational>,
    pub gamma: Vec<Rational>,
}

/// Proposes `J` for a siphon whose rows of `Γ` have rank one with a
/// positive left factor, on a weakly reversible network. Within each
/// linkage class every reaction that decreases the siphon is paired with
/// one increasing reaction that it precedes. The proposal still has to
/// pass [`check_wdne`].
pub fn facet_shortcut(net: &Network, siphon: &[usize]) -> Option<FacetShortcut> {
    if siphon.is_empty() {
        return None;
    }
    let graph = complex_graph(net);
    if !is_weakly_reversible(&graph) {
        return None;
    }
    let gamma_i = stoichiometric_matrix(net).to_rational().select_rows(siphon);
    if gamma_i.rank() != 1 {
        return None;
    }
    let r = net.num_reactions();
    let first = (0..r).map(|j| gamma_i.column(j)).find(|c| c.iter().any(|v| !v.is_zero()))?;
    let positive = first.iter().all(Signed::is_positive);
    let negative = first.iter().all(Signed::is_negative);
    if !positive && !negative {
        return None;
    }
    let z: Vec<Rational> = primitive(&first).into_iter().map(|v| v.abs()).collect();
    let mut gamma = Vec::with_capacity(r);
    for j in 0..r {
        let col = gamma_i.column(j);
        let g = &col[0] / &z[0];
        if col.iter().zip(&z).any(|(c, zk)| *c != &g * zk) {
            return None;
        }
        gamma.push(g);
    }

    let mut pairs = Vec::new();
    for class in 0..graph.num_linkage_classes() {
        let members: Vec<usize> = (0..r).filter(|&i| graph.class_of_reaction(i) == class).collect();
        let up: Vec<usize> = members.iter().copied().filter(|&i| gamma[i].is_positive()).collect();
        let down: Vec<usize> = members.iter().copied().filter(|&i| gamma[i].is_negative()).collect();
        if down.is_empty() {
            continue;
        }
        let target = up
            .iter()
            .copied()
            .max_by_key(|&u| {
                let dominated = down.iter().filter(|&&d| precedes(net, siphon, d, u)).count();
                (dominated, std::cmp::Reverse(u))
            })?;
        for &d in &down {
            if !precedes(net, siphon, d, target) {
                return None;
            }
            pairs.push(OrderPair::new(d, target));
        }
    }
    pairs.sort();
    Some(FacetShortcut { pairs, z, gamma })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateRoute {
    /// Found by searching subsets of the order.
    Direct,
    FacetShortcut,
}

/// One failed `(J, ε)` attempt and its cone witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refutation {
    pub pairs: Vec<OrderPair>,
    #[serde(serialize_with = "crate::ser::rationals")]
    pub witness: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(serialize_with = "crate::ser::rational")]
    pub epsilon: Rational,
    pub attempts: usize,
    /// The first few refutations, in search order.
    pub refutations: Vec<Refutation>,
    /// The subset search stopped at the cap before exhausting the order.
    pub cap_exceeded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SiphonStatus {
    /// Some semi-conservation vector is supported inside the siphon, so its
    /// face is never reached from positive initial data. When a vector with
    /// support exactly the siphon exists, the `J = ∅` certificate it gives
    /// is attached.
    ExcludedByConservation {
        conservation: Vec<Rational>,
        certificate: Option<WdneCertificate>,
    },
    WdneCertified {
        certificate: WdneCertificate,
        via: CertificateRoute,
    },
    /// Complex balanced for all rate constants and the face is a vertex.
    VertexOrEmpty,
    Unresolved(Diagnostics),
}

impl SiphonStatus {
    pub fn is_resolved(&self) -> bool {
        !matches!(self, SiphonStatus::Unresolved(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SiphonStatus::ExcludedByConservation { .. } => "ExcludedByConservation",
            SiphonStatus::WdneCertified { .. } => "WdneCertified",
            SiphonStatus::VertexOrEmpty => "VertexOrEmpty",
            SiphonStatus::Unresolved(_) => "Unresolved",
        }
    }

    pub fn certificate(&self) -> Option<&WdneCertificate> {
        match self {
            SiphonStatus::ExcludedByConservation { certificate, .. } => certificate.as_ref(),
            SiphonStatus::WdneCertified { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    /// Re-checks every stored vector exactly.
    pub fn verify(&self, net: &Network, siphon: &[usize]) -> bool {
        match self {
            SiphonStatus::ExcludedByConservation {
                conservation,
                certificate,
            } => {
                let gamma = stoichiometric_matrix(net).to_rational();
                conservation.len() == net.num_species()
                    && conservation.iter().all(|v| !v.is_negative())
                    && conservation.iter().any(Signed::is_positive)
                    && conservation
                        .iter()
                        .enumerate()
                        .all(|(k, v)| v.is_zero() || siphon.contains(&k))
                    && gamma.left_mul_vec(conservation).iter().all(Zero::is_zero)
                    && certificate.as_ref().is_none_or(|c| c.verify(net))
            }
            SiphonStatus::WdneCertified { certificate, .. } => {
                certificate.siphon == siphon && certificate.verify(net)
            }
            SiphonStatus::VertexOrEmpty => face_geometry(net, siphon).is_vertex,
            SiphonStatus::Unresolved(d) => d.refutations.iter().all(|f| {
                build_gamma_tilde(net, siphon, &f.pairs, &d.epsilon)
                    .is_ok_and(|gt| is_cone_witness(&gt, &f.witness))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyConfig {
    pub epsilon: Rational,
    pub j_subset_cap: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            epsilon: default_epsilon(),
            j_subset_cap: DEFAULT_J_SUBSET_CAP,
        }
    }
}

/// Subsets of `0..n` in search order: empty, singletons, the full set, then
/// the remaining sizes in increasing order, each lexicographic.
fn subset_order(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let singles = (0..n).map(|i| vec![i]);
    let full = (n >= 2).then(|| (0..n).collect::<Vec<_>>());
    let middle = (2..n).flat_map(move |k| Combinations::new(n, k));
    std::iter::once(Vec::new())
        .chain(singles)
        .chain(full)
        .chain(middle)
}

struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for t in i + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Runs the exclusion routes in turn: conservation, the facet construction,
/// then a search over subsets of the order, and finally the vertex route
/// for networks that are complex balanced for every choice of rates.
pub fn certify_siphon(net: &Network, siphon: &[usize], config: &CertifyConfig) -> SiphonStatus {
    if let Some(conservation) = semi_conservation_within(net, siphon) {
        let certificate = full_support_conservation(net, siphon).map(|full| {
            let c = siphon.iter().map(|&s| full[s].clone()).collect();
            WdneCertificate::new(net, siphon, &[], config.epsilon.clone(), c)
        });
        return SiphonStatus::ExcludedByConservation {
            conservation,
            certificate,
        };
    }

    if let Some(shortcut) = facet_shortcut(net, siphon) {
        if let Ok(WdneOutcome::Certified(certificate)) =
            check_wdne(net, siphon, &shortcut.pairs, &config.epsilon)
        {
            return SiphonStatus::WdneCertified {
                certificate,
                via: CertificateRoute::FacetShortcut,
            };
        }
    }

    let order = order_pairs(net, siphon);
    let total = u32::try_from(order.len())
        .ok()
        .and_then(|n| 1usize.checked_shl(n))
        .unwrap_or(usize::MAX);
    let mut attempts = 0;
    let mut refutations = Vec::new();
    for subset in subset_order(order.len()).take(config.j_subset_cap) {
        let pairs: Vec<OrderPair> = subset.iter().map(|&k| order[k]).collect();
        attempts += 1;
        match check_wdne(net, siphon, &pairs, &config.epsilon) {
            Ok(WdneOutcome::Certified(certificate)) => {
                return SiphonStatus::WdneCertified {
                    certificate,
                    via: CertificateRoute::Direct,
                }
            }
            Ok(WdneOutcome::Refuted(witness)) => {
                if refutations.len() < MAX_REFUTATIONS {
                    refutations.push(Refutation { pairs, witness });
                }
            }
            Err(e) => unreachable!("pairs drawn from the order were rejected: {e}"),
        }
    }

    let graph = complex_graph(net);
    let complex_balanced = is_weakly_reversible(&graph) && crate::structure::deficiency(net) == 0;
    if complex_balanced && face_geometry(net, siphon).is_vertex {
        return SiphonStatus::VertexOrEmpty;
    }
    SiphonStatus::Unresolved(Diagnostics {
        epsilon: config.epsilon.clone(),
        attempts,
        refutations,
        cap_exceeded: total > config.j_subset_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int, ratio};
    use crate::fixtures::*;
    use crate::netmodel::parse_network;

    /// One-based pairs, as written in the literature.
    fn pairs(list: &[(usize, usize)]) -> Vec<OrderPair> {
        list.iter().map(|&(a, b)| OrderPair::new(a - 1, b - 1)).collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn order_pairs_of_examples() {
        assert_eq!(order_pairs(&example1(), &[0]), pairs(&[(2, 1), (2, 3)]));
        assert_eq!(
            order_pairs(&example2(), &[0, 1]),
            pairs(&[(2, 4), (3, 1), (3, 4), (5, 4)])
        );
        assert_eq!(order_pairs(&example3(), &[0, 1]), pairs(&[(2, 3)]));
    }

    #[test]
    fn gamma_tilde_rows() {
        let eps = ratio(1, 4);
        let gt = build_gamma_tilde(&example2(), &[0, 1], &pairs(&[(3, 4)]), &eps).unwrap();
        assert_eq!(gt.rows(), 3);
        assert_eq!(gt.row(2), &[int(0), int(0), int(1), -eps.clone(), int(0)]);
        let gt = build_gamma_tilde(&example3(), &[0, 1], &pairs(&[(2, 3)]), &eps).unwrap();
        assert_eq!(gt.row(2), &[int(0), int(1), -eps.clone(), int(0)]);
        let gt = build_gamma_tilde(&example3(), &[0, 1], &[], &eps).unwrap();
        assert_eq!(gt, stoichiometric_matrix(&example3()).to_rational().select_rows(&[0, 1]));
    }

    #[test]
    fn gamma_tilde_rejections() {
        let net = example2();
        assert_eq!(
            build_gamma_tilde(&net, &[0, 1], &pairs(&[(4, 3)]), &ratio(1, 4)),
            Err(WdneError::PairNotOrdered(OrderPair::new(3, 2)))
        );
        assert_eq!(
            build_gamma_tilde(&net, &[0, 1], &[], &int(0)),
            Err(WdneError::NonPositiveEpsilon)
        );
        assert_eq!(build_gamma_tilde(&net, &[], &[], &int(1)), Err(WdneError::EmptySiphon));
    }

    #[test]
    fn example2_single_pair_certifies() {
        let net = example2();
        let out = check_wdne(&net, &[0, 1], &pairs(&[(3, 4)]), &ratio(1, 4)).unwrap();
        let cert = out.certificate().expect("certified").clone();
        assert!(cert.verify(&net));
        assert!(cert.other_branch_infeasible(&net));
        assert!(cert.alpha[0].is_negative() && cert.alpha[1].is_negative());
        assert!(cert.alpha[2].is_zero());
    }

    #[test]
    fn example2_hand_certificate() {
        let net = example2();
        let cert = WdneCertificate::new(&net, &[0, 1], &pairs(&[(3, 4)]), ratio(1, 4), ints(&[2, 1, 2]));
        assert_eq!(
            cert.slack(&net).unwrap(),
            vec![int(0), int(1), int(0), ratio(1, 2), int(0)]
        );
        assert_eq!(cert.alpha, ints(&[-2, -1, 0]));
        assert!(cert.verify(&net));
        assert!(cert.verify_at(&net, &ratio(1, 2)));
        assert!(!cert.verify_at(&net, &ratio(3, 4)));
    }

    #[test]
    fn example2_three_pairs_refuted_along_a_ray() {
        let net = example2();
        let j = pairs(&[(2, 4), (3, 1), (3, 4)]);
        for eps in [ratio(1, 4), default_epsilon()] {
            match check_wdne(&net, &[0, 1], &j, &eps).unwrap() {
                WdneOutcome::Refuted(v) => assert_eq!(primitive(&v), ints(&[1, 0, 0, 0, 1])),
                other => panic!("expected refutation, got {other:?}"),
            }
        }
    }

    #[test]
    fn example2_full_order_certifies() {
        let net = example2();
        let all = order_pairs(&net, &[0, 1]);
        assert!(check_wdne(&net, &[0, 1], &all, &default_epsilon())
            .unwrap()
            .certificate()
            .is_some());
    }

    #[test]
    fn example3_never_certified() {
        let net = example3();
        let eps = default_epsilon();
        for j in [vec![], pairs(&[(2, 3)])] {
            assert!(matches!(
                check_wdne(&net, &[0, 1], &j, &eps).unwrap(),
                WdneOutcome::Refuted(_)
            ));
        }
        for eps in [ratio(1, 4), ratio(1, 1024), eps] {
            let gt = build_gamma_tilde(&net, &[0, 1], &pairs(&[(2, 3)]), &eps).unwrap();
            let v = ints(&[0, 0, 1, 2]);
            assert!(is_cone_witness(&gt, &v));
            assert!(gt.mul_vec(&v).iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn classic_dne() {
        assert_eq!(
            check_dne_classic(&example1(), &[0], &ratio(1, 4)).unwrap(),
            ClassicDne::Witness(ints(&[0, 0, 1]))
        );
        assert_eq!(
            check_dne_classic(&example2(), &[0, 1], &ratio(1, 4)).unwrap(),
            ClassicDne::NonEmptiable
        );
        // no order pairs and Γ_I has a nonpositive column
        let net = parse_network("A -> B ; k = 1").unwrap();
        assert!(matches!(
            check_dne_classic(&net, &[0], &ratio(1, 4)).unwrap(),
            ClassicDne::Witness(_)
        ));
    }

    #[test]
    fn facet_construction() {
        let s = facet_shortcut(&example1(), &[0]).unwrap();
        assert_eq!(s.pairs, pairs(&[(2, 1)]));
        assert_eq!(s.z, ints(&[1]));
        assert_eq!(s.gamma, ints(&[1, -1, 0]));
        assert!(facet_shortcut(&example2(), &[0, 1]).is_none());
        let ab = parse_network("A -> B ; k = 1").unwrap();
        assert!(facet_shortcut(&ab, &[0, 1]).is_none());
    }

    #[test]
    fn subset_search_order() {
        let all: Vec<Vec<usize>> = subset_order(3).collect();
        assert_eq!(
            all,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1, 2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2]
            ]
        );
        assert_eq!(subset_order(1).count(), 2);
        assert_eq!(subset_order(6).count(), 64);
    }

    #[test]
    fn certify_examples() {
        let cfg = CertifyConfig::default();
        let net = example1();
        match certify_siphon(&net, &[0], &cfg) {
            SiphonStatus::WdneCertified { certificate, via } => {
                assert_eq!(via, CertificateRoute::FacetShortcut);
                assert_eq!(certificate.pairs, pairs(&[(2, 1)]));
            }
            other => panic!("{other:?}"),
        }
        let net = example2();
        let status = certify_siphon(&net, &[0, 1], &cfg);
        match &status {
            SiphonStatus::WdneCertified { certificate, via } => {
                assert_eq!(*via, CertificateRoute::Direct);
                assert_eq!(certificate.pairs, pairs(&[(3, 4)]));
            }
            other => panic!("{other:?}"),
        }
        assert!(status.verify(&net, &[0, 1]));
        let net = example3();
        let status = certify_siphon(&net, &[0, 1], &cfg);
        match &status {
            SiphonStatus::Unresolved(d) => {
                assert_eq!(d.attempts, 2);
                assert!(!d.cap_exceeded);
            }
            other => panic!("{other:?}"),
        }
        assert!(status.verify(&net, &[0, 1]));
    }

    #[test]
    fn conservation_route() {
        let net = reversible();
        let status = certify_siphon(&net, &[0, 1], &CertifyConfig::default());
        let SiphonStatus::ExcludedByConservation { certificate, .. } = &status else {
            panic!("{status:?}");
        };
        assert!(certificate.is_some());
        assert!(status.verify(&net, &[0, 1]));
    }

    #[test]
    fn cap_is_reported() {
        let cfg = CertifyConfig {
            epsilon: default_epsilon(),
            j_subset_cap: 1,
        };
        match certify_siphon(&example3(), &[0, 1], &cfg) {
            SiphonStatus::Unresolved(d) => assert!(d.cap_exceeded && d.attempts == 1),
            other => panic!("{other:?}"),
        }
    }
}
