//! Reaction networks, their stoichiometric matrix and mass-action rates.

mod parse;

pub use parse::{parse_network, ParseError, ParseErrorKind};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactla::{int, to_f64, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Species {
    pub id: usize,
    pub name: String,
}

/// Non-negative integer combination of species. Zero coefficients are never
/// stored; the empty complex is the zero complex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex(BTreeMap<usize, u32>);

impl Complex {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (s, c) in terms {
            if c > 0 {
                *map.entry(s).or_insert(0) += c;
            }
        }
        Self(map)
    }

    pub fn coefficient(&self, species: usize) -> u32 {
        self.0.get(&species).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&s, &c)| (s, c))
    }

    pub fn species(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    /// Whether some species of `set` appears in this complex.
    pub fn touches(&self, set: &[usize]) -> bool {
        set.iter().any(|s| self.0.contains_key(s))
    }

    fn render(&self, names: &[Species]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(s, c)| {
                if c == 1 {
                    names[s].name.clone()
                } else {
                    format!("{c} {}", names[s].name)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Rate constant kept both exactly and as a float for simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RateConstant {
    exact: Rational,
    value: f64,
}

impl RateConstant {
    /// `None` unless `k > 0`.
    pub fn new(exact: Rational) -> Option<Self> {
        if !exact.is_positive() {
            return None;
        }
        let value = to_f64(&exact);
        Some(Self { exact, value })
    }

    pub fn exact(&self) -> &Rational {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub reactant: Complex,
    pub product: Complex,
    pub rate: RateConstant,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("network has no species")]
    NoSpecies,
    #[error("network has no reactions")]
    NoReactions,
    #[error("duplicate species name `{0}`")]
    DuplicateSpecies(String),
    #[error("species `{0}` does not occur in any reaction")]
    UnusedSpecies(String),
    #[error("reaction {0} refers to unknown species index {1}")]
    UnknownSpecies(usize, usize),
    #[error("reaction {0} has identical reactant and product")]
    NoOpReaction(usize),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("concentration vector has length {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("negative concentration {value} for species {species}")]
    NegativeConcentration { species: usize, value: String },
}

/// Species plus mass-action reactions. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    species: Vec<Species>,
    reactions: Vec<Reaction>,
}

impl Network {
    /// Validates and builds a network. Species ids are the positions in
    /// `names`.
    pub fn new(names: Vec<String>, reactions: Vec<Reaction>) -> Result<Self, NetworkError> {
        if names.is_empty() {
            return Err(NetworkError::NoSpecies);
        }
        if reactions.is_empty() {
            return Err(NetworkError::NoReactions);
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if seen.insert(n.as_str(), i).is_some() {
                return Err(NetworkError::DuplicateSpecies(n.clone()));
            }
        }
        let m = names.len();
        let mut used = vec![false; m];
        for (i, r) in reactions.iter().enumerate() {
            if r.reactant == r.product {
                return Err(NetworkError::NoOpReaction(i));
            }
            for s in r.reactant.species().chain(r.product.species()) {
                if s >= m {
                    return Err(NetworkError::UnknownSpecies(i, s));
                }
                used[s] = true;
            }
        }
        if let Some(unused) = used.iter().position(|u| !u) {
            return Err(NetworkError::UnusedSpecies(names[unused].clone()));
        }
        let species = names
            .into_iter()
            .enumerate()
            .map(|(id, name)| Species { id, name })
            .collect();
        Ok(Self { species, reactions })
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn species_names(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&i| self.species[i].name.clone()).collect()
    }

    /// Same species and reactions with different rate constants.
    pub fn with_rates(&self, rates: &[Rational]) -> Option<Self> {
        if rates.len() != self.reactions.len() {
            return None;
        }
        let reactions = self
            .reactions
            .iter()
            .zip(rates)
            .map(|(r, k)| {
                Some(Reaction {
                    rate: RateConstant::new(k.clone())?,
                    ..r.clone()
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            species: self.species.clone(),
            reactions,
        })
    }

    /// Canonical `.crn` text: a species header, then one irreversible
    /// reaction per line with an exact rate constant.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.species.iter().map(|s| s.name.as_str()).collect();
        out.push_str(&format!("species: {}\n", names.join(", ")));
        for r in &self.reactions {
            out.push_str(&format!(
                "{} -> {} ; k = {}\n",
                r.reactant.render(&self.species),
                r.product.render(&self.species),
                r.rate.exact
            ));
        }
        out
    }

    pub fn reaction_label(&self, i: usize) -> String {
        let r = &self.reactions[i];
        format!(
            "{} -> {}",
            r.reactant.render(&self.species),
            r.product.render(&self.species)
        )
    }
}

/// `m × r` integer matrix with `[Γ]_ji = β_ij − α_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoichMatrix {
    species: usize,
    reactions: usize,
    entries: Vec<i64>,
}

impl StoichMatrix {
    pub fn get(&self, species: usize, reaction: usize) -> i64 {
        self.entries[species * self.reactions + reaction]
    }

    pub fn rows(&self) -> usize {
        self.species
    }

    pub fn cols(&self) -> usize {
        self.reactions
    }

    pub fn column(&self, reaction: usize) -> Vec<i64> {
        (0..self.species).map(|j| self.get(j, reaction)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.species)
            .map(|j| (0..self.reactions).map(|i| self.get(j, i)).collect())
            .collect()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.species, self.reactions);
        for j in 0..self.species {
            for i in 0..self.reactions {
                m.set(j, i, int(self.get(j, i)));
            }
        }
        m
    }
}

impl fmt::Display for StoichMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn stoichiometric_matrix(net: &Network) -> StoichMatrix {
    let (m, r) = (net.num_species(), net.num_reactions());
    let mut entries = vec![0i64; m * r];
    for (i, rx) in net.reactions.iter().enumerate() {
        for j in 0..m {
            entries[j * r + i] =
                i64::from(rx.product.coefficient(j)) - i64::from(rx.reactant.coefficient(j));
        }
    }
    StoichMatrix {
        species: m,
        reactions: r,
        entries,
    }
}

fn check_state(net: &Network, x: &[f64]) -> Result<(), EvalError> {
    if x.len() != net.num_species() {
        return Err(EvalError::Dimension {
            expected: net.num_species(),
            got: x.len(),
        });
    }
    if let Some((j, v)) = x.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(EvalError::NegativeConcentration {
            species: j,
            value: v.to_string(),
        });
    }
    Ok(())
}

/// Mass-action rates `R_i(x) = k_i ∏ x_j^{α_ij}` with `0^0 = 1`.
pub fn rate_vector(net: &Network, x: &[f64]) -> Result<Vec<f64>, EvalError> {
    check_state(net, x)?;
    Ok(rates_unchecked(net, x, None))
}

/// Rates with optional float rate constants replacing the network's own.
pub(crate) fn rates_unchecked(net: &Network, x: &[f64], k: Option<&[f64]>) -> Vec<f64> {
    net.reactions
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let ki = k.map_or(r.rate.value, |k| k[i]);
            r.reactant
                .terms()
                .fold(ki, |acc, (s, c)| acc * x[s].powi(c as i32))
        })
        .collect()
}

/// `f(x) = Γ R(x)`.
pub fn ode_rhs(net: &Network, x: &[f64]) -> Result<Vec<f64>, EvalError> {
    check_state(net, x)?;
    Ok(rhs_unchecked(net, x, None))
}

pub(crate) fn rhs_unchecked(net: &Network, x: &[f64], k: Option<&[f64]>) -> Vec<f64> {
    let rates = rates_unchecked(net, x, k);
    let mut f = vec![0.0; net.num_species()];
    for (r, rate) in net.reactions.iter().zip(&rates) {
        for (s, c) in r.product.terms() {
            f[s] += f64::from(c) * rate;
        }
        for (s, c) in r.reactant.terms() {
            f[s] -= f64::from(c) * rate;
        }
    }
    f
}

/// Exact rates for rational concentrations.
pub fn rate_vector_exact(net: &Network, x: &[Rational]) -> Result<Vec<Rational>, EvalError> {
    if x.len() != net.num_species() {
        return Err(EvalError::Dimension {
            expected: net.num_species(),
            got: x.len(),
        });
    }
    if let Some((j, v)) = x.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(EvalError::NegativeConcentration {
            species: j,
            value: v.to_string(),
        });
    }
    Ok(net
        .reactions
        .iter()
        .map(|r| {
            r.reactant.terms().fold(r.rate.exact.clone(), |acc, (s, c)| {
                if acc.is_zero() {
                    acc
                } else {
                    acc * num_traits::pow(x[s].clone(), c as usize)
                }
            })
        })
        .collect())
}

/// Exact `Γ R(x)`.
pub fn ode_rhs_exact(net: &Network, x: &[Rational]) -> Result<Vec<Rational>, EvalError> {
    let rates = rate_vector_exact(net, x)?;
    Ok(stoichiometric_matrix(net).to_rational().mul_vec(&rates))
}

/// `α_ij`: coefficient of `species` in the reactant of `reaction`.
pub fn reactant_coefficient(net: &Network, reaction: usize, species: usize) -> u32 {
    net.reactions[reaction].reactant.coefficient(species)
}

/// Convenience for tests and fixtures: `1` as a rate constant.
pub fn unit_rate() -> RateConstant {
    RateConstant::new(Rational::one()).expect("one is positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE1: &str = "A1 -> 2 A1 + A2 ; k = 1\n2 A1 + A2 -> A1 + A2 ; k = 1\nA1 + A2 -> A1 ; k = 1\n";
    const EXAMPLE2: &str = "A1 -> 2 A2 ; k = 1\n2 A2 -> A1 + A2 ; k = 1\nA1 + A2 -> A2 + A3 ; k = 1\nA2 + A3 -> A1 ; k = 1\n2 A2 -> A1 ; k = 1\n";

    #[test]
    fn example1_stoichiometry() {
        let net = parse_network(EXAMPLE1).unwrap();
        assert_eq!(
            stoichiometric_matrix(&net).to_rows(),
            vec![vec![1, -1, 0], vec![1, 0, -1]]
        );
    }

    #[test]
    fn example2_stoichiometry() {
        let net = parse_network(EXAMPLE2).unwrap();
        assert_eq!(
            stoichiometric_matrix(&net).to_rows(),
            vec![
                vec![-1, 1, -1, 1, 1],
                vec![2, -1, 0, -1, -2],
                vec![0, 0, 1, -1, 0]
            ]
        );
    }

    #[test]
    fn reversible_pair_stoichiometry() {
        let net = parse_network("A <-> B ; k = 1, 2").unwrap();
        assert_eq!(stoichiometric_matrix(&net).to_rows(), vec![vec![-1, 1], vec![1, -1]]);
    }

    #[test]
    fn example1_rates_and_rhs() {
        let net = parse_network(EXAMPLE1).unwrap();
        assert_eq!(rate_vector(&net, &[2.0, 3.0]).unwrap(), vec![2.0, 12.0, 6.0]);
        assert_eq!(ode_rhs(&net, &[2.0, 3.0]).unwrap(), vec![-10.0, -4.0]);
    }

    #[test]
    fn rates_vanish_at_origin() {
        let net = parse_network(EXAMPLE2).unwrap();
        assert!(rate_vector(&net, &[0.0; 3]).unwrap().iter().all(|v| *v == 0.0));
        assert!(ode_rhs(&net, &[0.0; 3]).unwrap().iter().all(|v| *v == 0.0));
        assert_eq!(rate_vector(&net, &[1.0; 3]).unwrap(), vec![1.0; 5]);
    }

    #[test]
    fn detailed_balance_point() {
        let net = parse_network("A <-> B ; k = 1, 1").unwrap();
        assert_eq!(ode_rhs(&net, &[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn zero_power_is_one() {
        let net = parse_network("0 -> A ; k = 3\nA -> 0 ; k = 1").unwrap();
        assert_eq!(rate_vector(&net, &[0.0]).unwrap(), vec![3.0, 0.0]);
    }

    #[test]
    fn negative_concentration_rejected() {
        let net = parse_network(EXAMPLE1).unwrap();
        assert!(matches!(
            rate_vector(&net, &[1.0, -0.5]),
            Err(EvalError::NegativeConcentration { species: 1, .. })
        ));
        assert!(matches!(ode_rhs(&net, &[1.0]), Err(EvalError::Dimension { .. })));
    }

    #[test]
    fn exact_rhs_matches_float() {
        let net = parse_network(EXAMPLE1).unwrap();
        let f = ode_rhs_exact(&net, &[int(2), int(3)]).unwrap();
        assert_eq!(f, vec![int(-10), int(-4)]);
    }

    #[test]
    fn network_validation() {
        let a = Complex::from_terms([(0, 1)]);
        let b = Complex::from_terms([(1, 1)]);
        let rx = |p: &Complex, q: &Complex| Reaction {
            reactant: p.clone(),
            product: q.clone(),
            rate: unit_rate(),
        };
        assert_eq!(
            Network::new(vec!["A".into(), "A".into()], vec![rx(&a, &b)]),
            Err(NetworkError::DuplicateSpecies("A".into()))
        );
        assert_eq!(
            Network::new(vec!["A".into(), "B".into(), "C".into()], vec![rx(&a, &b)]),
            Err(NetworkError::UnusedSpecies("C".into()))
        );
        assert_eq!(
            Network::new(vec!["A".into(), "B".into()], vec![rx(&a, &a), rx(&a, &b)]),
            Err(NetworkError::NoOpReaction(0))
        );
        assert_eq!(
            Network::new(vec!["A".into()], vec![]),
            Err(NetworkError::NoReactions)
        );
    }
}
