mod common;

use crnpersist::exactla::{
    cone_witness_system, farkas_alternative, int, is_cone_witness, is_positive_certificate,
    lp_feasible, positive_certificate_system, FarkasResult, Feasibility, Rational,
};
use crnpersist::netmodel::ode_rhs_exact;
use crnpersist::siphon::enumerate_siphon_sets;
use crnpersist::structure::summarize;
use crnpersist::wdne::{check_wdne, order_pairs, WdneOutcome};
use crnpersist::{parse_network, stoichiometric_matrix, RationalMatrix};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
            .prop_map(|rows| RationalMatrix::from_i64_rows(&rows))
    })
}

/// Rank as the size of the largest nonsingular square minor, with
/// determinants by cofactor expansion.
fn rank_by_minors(a: &RationalMatrix) -> usize {
    fn det(m: &[Vec<Rational>]) -> Rational {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut total = Rational::zero();
        for (j, pivot) in m[0].iter().enumerate() {
            if pivot.is_zero() {
                continue;
            }
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = pivot * det(&minor);
            total = if j % 2 == 0 { total + term } else { total - term };
        }
        total
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    }
    for k in (1..=a.rows().min(a.cols())).rev() {
        for rows in subsets(a.rows(), k) {
            for cols in subsets(a.cols(), k) {
                let sub: Vec<Vec<Rational>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| a.get(i, j).clone()).collect())
                    .collect();
                if !det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn farkas_exactly_one_branch(a in matrix(5, 6)) {
        let res = farkas_alternative(&a);
        match &res {
            FarkasResult::PositiveCertificate(y) => {
                prop_assert!(is_positive_certificate(&a, y));
                let sys = cone_witness_system(&a);
                match lp_feasible(&sys) {
                    Feasibility::Infeasible(cert) => prop_assert!(sys.verify_infeasibility(&cert)),
                    Feasibility::Feasible(_) => prop_assert!(false, "both branches feasible"),
                }
            }
            FarkasResult::ConeWitness(x) => {
                prop_assert!(is_cone_witness(&a, x));
                let sys = positive_certificate_system(&a);
                match lp_feasible(&sys) {
                    Feasibility::Infeasible(cert) => prop_assert!(sys.verify_infeasibility(&cert)),
                    Feasibility::Feasible(_) => prop_assert!(false, "both branches feasible"),
                }
            }
        }
    }

    #[test]
    fn rank_plus_nullity(a in matrix(5, 6)) {
        let basis = a.nullspace();
        prop_assert_eq!(a.rank() + basis.len(), a.cols());
        for v in &basis {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rank_matches_minor_oracle(a in matrix(4, 4)) {
        prop_assert_eq!(a.rank(), rank_by_minors(&a));
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn siphons_closed_under_union(seed in any::<u64>()) {
        let net = common::random_network(&mut ChaCha8Rng::seed_from_u64(seed), 7, 8);
        let sets = enumerate_siphon_sets(&net, false, 20).unwrap();
        prop_assert_eq!(&sets, &common::brute_force_siphons(&net));
        for a in &sets {
            for b in &sets {
                let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
                u.sort_unstable();
                u.dedup();
                prop_assert!(sets.contains(&u));
            }
        }
    }

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let net = common::random_network(&mut ChaCha8Rng::seed_from_u64(seed), 6, 6);
        let text = net.render();
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(back.render(), text);
    }

    #[test]
    fn rhs_lies_in_stoichiometric_subspace(
        seed in any::<u64>(),
        xs in prop::collection::vec(0i64..6, 8),
    ) {
        let net = common::random_network(&mut ChaCha8Rng::seed_from_u64(seed), 6, 6);
        let x: Vec<Rational> = xs[..net.num_species()].iter().map(|&v| int(v)).collect();
        let f = ode_rhs_exact(&net, &x).unwrap();
        let gamma = stoichiometric_matrix(&net).to_rational();
        let rows: Vec<Vec<Rational>> = (0..gamma.rows())
            .map(|i| gamma.row(i).iter().cloned().chain(std::iter::once(f[i].clone())).collect())
            .collect();
        let augmented = RationalMatrix::from_rows(gamma.cols() + 1, rows);
        prop_assert_eq!(augmented.rank(), gamma.rank());
    }

    #[test]
    fn deficiency_is_nonnegative(seed in any::<u64>()) {
        let net = common::random_network(&mut ChaCha8Rng::seed_from_u64(seed), 6, 8);
        prop_assert!(summarize(&net).deficiency >= 0);
    }

    #[test]
    fn smaller_epsilon_keeps_certificates(seed in any::<u64>(), k in 1u32..6) {
        let net = common::random_weakly_reversible(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let eps = crnpersist::exactla::pow2_inv(k);
        for set in enumerate_siphon_sets(&net, false, 20).unwrap() {
            let order = order_pairs(&net, &set);
            for pair in &order {
                if let WdneOutcome::Certified(cert) = check_wdne(&net, &set, &[*pair], &eps).unwrap() {
                    prop_assert!(cert.verify(&net));
                    prop_assert!(cert.verify_at(&net, &(&eps / int(2))));
                    prop_assert!(cert.verify_at(&net, &(&eps / int(4))));
                }
            }
        }
    }
}
