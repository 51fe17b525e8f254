//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use crnpersist::netmodel::{unit_rate, Complex, Reaction};
use crnpersist::{Network, RationalMatrix};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_matrix(rng: &mut impl Rng, max_rows: usize, max_cols: usize, bound: i64) -> RationalMatrix {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    RationalMatrix::from_i64_rows(&data)
}

fn random_complex(rng: &mut impl Rng, m: usize, density: f64) -> Complex {
    Complex::from_terms((0..m).filter_map(|s| {
        if rng.gen_bool(density) { Some((s, rng.gen_range(1..=2))) } else { None }
    }))
}

/// Drops species that no reaction mentions and renumbers the rest.
fn compact(m: usize, reactions: Vec<(Complex, Complex)>) -> Network {
    let mut used = vec![false; m];
    for (a, b) in &reactions {
        for s in a.species().chain(b.species()) {
            used[s] = true;
        }
    }
    let mut new_id = vec![usize::MAX; m];
    let mut names = Vec::new();
    for s in 0..m {
        if used[s] {
            new_id[s] = names.len();
            names.push(format!("S{}", names.len() + 1));
        }
    }
    let remap = |c: &Complex| Complex::from_terms(c.terms().map(|(s, k)| (new_id[s], k)));
    let reactions = reactions
        .iter()
        .map(|(a, b)| Reaction {
            reactant: remap(a),
            product: remap(b),
            rate: unit_rate(),
        })
        .collect();
    Network::new(names, reactions).expect("generated network is valid")
}

/// Up to `max_m` species and between 1 and `max_r` reactions with
/// coefficients in `0..=2`.
pub fn random_network(rng: &mut impl Rng, max_m: usize, max_r: usize) -> Network {
    let m = rng.gen_range(1..=max_m);
    let r = rng.gen_range(1..=max_r);
    let mut reactions = Vec::with_capacity(r);
    while reactions.len() < r {
        let a = random_complex(rng, m, 0.3);
        let b = random_complex(rng, m, 0.3);
        if a != b && !(a.is_zero() && b.is_zero()) {
            reactions.push((a, b));
        }
    }
    if reactions.iter().all(|(a, b)| a.is_zero() && b.is_zero()) {
        reactions.push((Complex::from_terms([(0, 1)]), Complex::zero()));
    }
    compact(m, reactions)
}

/// One or two linkage classes, each a directed cycle through 2 to 4
/// distinct complexes, with some edges also reversed.
pub fn random_weakly_reversible(rng: &mut impl Rng, max_m: usize) -> Network {
    let m = rng.gen_range(1..=max_m);
    let classes = rng.gen_range(1..=2);
    let mut seen: Vec<Complex> = Vec::new();
    let mut reactions = Vec::new();
    for _ in 0..classes {
        let size = rng.gen_range(2..=4);
        let mut nodes = Vec::new();
        let mut tries = 0;
        while nodes.len() < size && tries < 50 {
            tries += 1;
            let c = random_complex(rng, m, 0.4);
            if !seen.contains(&c) {
                seen.push(c.clone());
                nodes.push(c);
            }
        }
        if nodes.len() < 2 {
            continue;
        }
        nodes.shuffle(rng);
        for i in 0..nodes.len() {
            let (a, b) = (nodes[i].clone(), nodes[(i + 1) % nodes.len()].clone());
            if nodes.len() > 2 && rng.gen_bool(0.3) {
                reactions.push((b.clone(), a.clone()));
            }
            reactions.push((a, b));
        }
    }
    if reactions.is_empty() {
        let a = Complex::from_terms([(0, 1)]);
        reactions.push((a.clone(), Complex::zero()));
        reactions.push((Complex::zero(), a));
    }
    compact(m, reactions)
}

/// Semi-locking test written directly against the coefficients.
pub fn brute_force_siphons(net: &Network) -> Vec<Vec<usize>> {
    let m = net.num_species();
    let mut out = Vec::new();
    for mask in 1u32..(1 << m) {
        let set: Vec<usize> = (0..m).filter(|s| mask >> s & 1 == 1).collect();
        let ok = net.reactions().iter().all(|r| {
            let produces = set.iter().any(|&s| r.product.coefficient(s) > 0);
            let consumes = set.iter().any(|&s| r.reactant.coefficient(s) > 0);
            !produces || consumes
        });
        if ok {
            out.push(set);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}
