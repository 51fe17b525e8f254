//! Semi-locking sets (siphons) and locking sets (deadlocks).
//!
//! Species sets are sorted zero-based index lists. Enumeration works on
//! `u64` masks internally, so at most 64 species are supported regardless of
//! the configured cap.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactla::{lp_feasible, sign_constrained_nullvector, LinearSystem, Rational};
use crate::netmodel::{stoichiometric_matrix, Network};
use crate::structure::{face_geometry, FaceGeometry};

pub const DEFAULT_SIPHON_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SiphonError {
    #[error("enumeration overflow: network has {species} species, cap is {cap}")]
    EnumerationOverflow { species: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiphonRecord {
    #[serde(serialize_with = "crate::ser::one_based")]
    pub species: Vec<usize>,
    pub is_locking: bool,
    pub is_critical: bool,
    /// The siphon is the full species set.
    pub is_trivial: bool,
    /// Some semi-conservation vector has support exactly equal to the set.
    pub has_full_support_conservation: bool,
    pub geometry: FaceGeometry,
}

/// Every reaction that produces a species of `set` also consumes one.
pub fn is_semilocking(net: &Network, set: &[usize]) -> bool {
    !set.is_empty()
        && net
            .reactions()
            .iter()
            .all(|r| !r.product.touches(set) || r.reactant.touches(set))
}

/// Every reactant complex meets `set`.
pub fn is_locking(net: &Network, set: &[usize]) -> bool {
    !set.is_empty() && net.reactions().iter().all(|r| r.reactant.touches(set))
}

/// A semi-conservation vector `c ≥ 0`, `c ≠ 0`, `cᵀΓ = 0` with support
/// inside `set`, normalised to `Σ c = 1`.
pub fn semi_conservation_within(net: &Network, set: &[usize]) -> Option<Vec<Rational>> {
    let gamma_i = stoichiometric_matrix(net).to_rational().select_rows(set);
    let n = set.len();
    let mut sys = LinearSystem::new(n);
    sys.nonnegative();
    sys.add_eq(vec![Rational::one(); n], Rational::one());
    for j in 0..gamma_i.cols() {
        sys.add_eq(gamma_i.column(j), Rational::zero());
    }
    let y = lp_feasible(&sys).point()?;
    let mut c = vec![Rational::zero(); net.num_species()];
    for (&s, v) in set.iter().zip(y) {
        c[s] = v;
    }
    Some(c)
}

/// Critical: contains the support of no semi-conservation vector.
pub fn is_critical(net: &Network, set: &[usize]) -> bool {
    semi_conservation_within(net, set).is_none()
}

/// A semi-conservation vector whose support is exactly `set`, with every
/// positive entry at least one.
pub fn full_support_conservation(net: &Network, set: &[usize]) -> Option<Vec<Rational>> {
    let gamma = stoichiometric_matrix(net).to_rational();
    let outside: Vec<usize> = (0..net.num_species()).filter(|j| !set.contains(j)).collect();
    sign_constrained_nullvector(&gamma, set, &outside)
}

pub fn classify(net: &Network, set: &[usize]) -> SiphonRecord {
    SiphonRecord {
        species: set.to_vec(),
        is_locking: is_locking(net, set),
        is_critical: is_critical(net, set),
        is_trivial: set.len() == net.num_species(),
        has_full_support_conservation: full_support_conservation(net, set).is_some(),
        geometry: face_geometry(net, set),
    }
}

pub(crate) fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

fn set_to_mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &s| m | 1 << s)
}

struct Masks {
    reactant: Vec<u64>,
    product: Vec<u64>,
    all: u64,
}

impl Masks {
    fn new(net: &Network) -> Self {
        let reactant = net
            .reactions()
            .iter()
            .map(|r| set_to_mask(&r.reactant.species().collect::<Vec<_>>()))
            .collect();
        let product = net
            .reactions()
            .iter()
            .map(|r| set_to_mask(&r.product.species().collect::<Vec<_>>()))
            .collect();
        let m = net.num_species();
        let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Self {
            reactant,
            product,
            all,
        }
    }

    /// Extends `inc` with forced species; `None` when some reaction feeding
    /// `inc` has all its reactants excluded.
    fn propagate(&self, mut inc: u64, exc: u64) -> Option<u64> {
        loop {
            let mut changed = false;
            for (&p, &r) in self.product.iter().zip(&self.reactant) {
                if p & inc == 0 || r & inc != 0 {
                    continue;
                }
                let open = r & !exc;
                if open == 0 {
                    return None;
                }
                if open.count_ones() == 1 {
                    inc |= open;
                    changed = true;
                }
            }
            if !changed {
                return Some(inc);
            }
        }
    }

    fn dfs(&self, inc: u64, exc: u64, out: &mut Vec<u64>) {
        let Some(inc) = self.propagate(inc, exc) else {
            return;
        };
        let undecided = self.all & !inc & !exc;
        if undecided == 0 {
            if inc != 0 {
                out.push(inc);
            }
            return;
        }
        let bit = 1u64 << undecided.trailing_zeros();
        self.dfs(inc | bit, exc, out);
        self.dfs(inc, exc | bit, out);
    }
}

/// All siphons (or only the inclusion-minimal ones), ordered by size then
/// lexicographically. Each is classified.
pub fn enumerate_siphons(
    net: &Network,
    minimal_only: bool,
    cap: usize,
) -> Result<Vec<SiphonRecord>, SiphonError> {
    let sets = enumerate_siphon_sets(net, minimal_only, cap)?;
    Ok(sets.iter().map(|s| classify(net, s)).collect())
}

/// Enumeration without classification.
pub fn enumerate_siphon_sets(
    net: &Network,
    minimal_only: bool,
    cap: usize,
) -> Result<Vec<Vec<usize>>, SiphonError> {
    let m = net.num_species();
    if m > cap.min(64) {
        return Err(SiphonError::EnumerationOverflow {
            species: m,
            cap: cap.min(64),
        });
    }
    let masks = Masks::new(net);
    let mut found = Vec::new();
    masks.dfs(0, 0, &mut found);
    if minimal_only {
        let all = found.clone();
        found.retain(|&s| !all.iter().any(|&t| t != s && t & s == t));
    }
    let mut sets: Vec<Vec<usize>> = found.into_iter().map(mask_to_set).collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(sets)
}

/// Two distinct critical locking sets, one inside the other.
pub fn has_nested_critical_locking_sets(records: &[SiphonRecord]) -> bool {
    let crit: Vec<u64> = records
        .iter()
        .filter(|r| r.is_locking && r.is_critical)
        .map(|r| set_to_mask(&r.species))
        .collect();
    crit.iter()
        .any(|&a| crit.iter().any(|&b| a != b && a & b == a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::netmodel::parse_network;

    fn brute(net: &Network) -> Vec<Vec<usize>> {
        let m = net.num_species();
        let mut out: Vec<Vec<usize>> = (1u64..1 << m)
            .map(mask_to_set)
            .filter(|s| is_semilocking(net, s))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn semilocking_predicate() {
        let n1 = example1();
        assert!(is_semilocking(&n1, &[0]));
        assert!(!is_semilocking(&n1, &[1]));
        assert!(is_semilocking(&example2(), &[0, 1]));
    }

    #[test]
    fn locking_predicate() {
        assert!(is_locking(&example1(), &[0]));
        let ab = parse_network("A -> B ; k = 1").unwrap();
        assert!(!is_locking(&ab, &[1]));
        assert!(is_locking(&example2(), &[0, 1, 2]));
    }

    #[test]
    fn example_siphons() {
        let sets = |n: &Network| enumerate_siphon_sets(n, false, 20).unwrap();
        assert_eq!(sets(&example1()), vec![vec![0], vec![0, 1]]);
        assert_eq!(sets(&example2()), vec![vec![0, 1], vec![0, 1, 2]]);
        assert_eq!(sets(&example3()), vec![vec![0, 1], vec![0, 1, 2]]);
        for n in [example1(), example2(), example3()] {
            assert_eq!(sets(&n), brute(&n));
        }
    }

    #[test]
    fn minimal_only() {
        assert_eq!(
            enumerate_siphon_sets(&example1(), true, 20).unwrap(),
            vec![vec![0]]
        );
    }

    #[test]
    fn criticality() {
        assert!(is_critical(&example1(), &[0]));
        assert!(is_critical(&example2(), &[0, 1]));
        let ab = reversible();
        assert!(!is_critical(&ab, &[0, 1]));
        assert!(full_support_conservation(&ab, &[0, 1]).is_some());
    }

    #[test]
    fn support_gap_is_visible() {
        // A + B is conserved but C is not, so the full set is non-critical
        // while no conservation vector covers all of it.
        let net = parse_network("A <-> B ; k = 1, 1\nA -> A + C ; k = 1\nC -> 0 ; k = 1").unwrap();
        let set = [0, 1, 2];
        assert!(is_semilocking(&net, &set));
        assert!(!is_critical(&net, &set));
        assert!(full_support_conservation(&net, &set).is_none());
    }

    #[test]
    fn overflow_reported() {
        let err = enumerate_siphon_sets(&example2(), false, 2).unwrap_err();
        assert_eq!(err, SiphonError::EnumerationOverflow { species: 3, cap: 2 });
    }

    #[test]
    fn inflow_species_never_in_siphon() {
        let net = parse_network("0 -> A ; k = 1\nA -> B ; k = 1\nB -> 0 ; k = 1").unwrap();
        assert!(enumerate_siphon_sets(&net, false, 20).unwrap().is_empty());
    }

    #[test]
    fn nested_locking_detection() {
        let records: Vec<_> = enumerate_siphons(&example1(), false, 20).unwrap();
        // {A1} and {A1, A2} are both critical locking sets
        assert!(has_nested_critical_locking_sets(&records));
    }
}
