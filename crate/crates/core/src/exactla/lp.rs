//! Exact feasibility for small systems of linear constraints.
//!
//! Phase-1 simplex over rationals with Bland's rule. When the system is
//! infeasible the phase-1 duals are turned into a Farkas multiplier over the
//! original constraints, which [`LinearSystem::verify_infeasibility`] can
//! check independently.

use num_traits::{One, Signed, Zero};

use super::{dot, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `aᵀx ≤ b`
    Le,
    /// `aᵀx = b`
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Linear constraints over `n` rational variables.
///
/// Variables are free unless given a lower bound. `≥` rows are stored
/// negated as `≤` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    vars: usize,
    constraints: Vec<Constraint>,
    lower: Vec<Option<Rational>>,
}

/// Outcome of [`lp_feasible`].
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(InfeasibilityCertificate),
}

impl Feasibility {
    pub fn point(self) -> Option<Vec<Rational>> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible(_) => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Multipliers `λ` (one per constraint, `≥ 0` on `≤` rows) and `μ ≥ 0` (one
/// per lower bound, read as `-x_i ≤ -l_i`) whose combination gives
/// `0ᵀx ≤ negative`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityCertificate {
    pub row_multipliers: Vec<Rational>,
    pub bound_multipliers: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            constraints: Vec::new(),
            lower: vec![None; vars],
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn lower_bounds(&self) -> &[Option<Rational>] {
        &self.lower
    }

    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.push(coeffs, Relation::Le, rhs)
    }

    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        let coeffs = coeffs.into_iter().map(|c| -c).collect();
        self.push(coeffs, Relation::Le, -rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.push(coeffs, Relation::Eq, rhs)
    }

    /// Sets `x_i ≥ bound`, replacing any previous lower bound.
    pub fn lower_bound(&mut self, i: usize, bound: Rational) -> &mut Self {
        self.lower[i] = Some(bound);
        self
    }

    pub fn nonnegative(&mut self) -> &mut Self {
        for l in &mut self.lower {
            *l = Some(Rational::zero());
        }
        self
    }

    fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.vars, "constraint has wrong arity");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    /// Exact membership test.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.vars {
            return false;
        }
        let bounds_ok = self
            .lower
            .iter()
            .zip(x)
            .all(|(l, xi)| l.as_ref().is_none_or(|l| xi >= l));
        bounds_ok
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    /// Checks a Farkas multiplier exactly: signs, cancellation of every
    /// variable, and a strictly negative combined right-hand side.
    pub fn verify_infeasibility(&self, cert: &InfeasibilityCertificate) -> bool {
        if cert.row_multipliers.len() != self.constraints.len()
            || cert.bound_multipliers.len() != self.vars
        {
            return false;
        }
        let signs_ok = self
            .constraints
            .iter()
            .zip(&cert.row_multipliers)
            .all(|(c, l)| c.relation == Relation::Eq || !l.is_negative());
        let bounds_ok = self
            .lower
            .iter()
            .zip(&cert.bound_multipliers)
            .all(|(lb, mu)| if lb.is_some() { !mu.is_negative() } else { mu.is_zero() });
        if !signs_ok || !bounds_ok {
            return false;
        }
        let mut combo = vec![Rational::zero(); self.vars];
        let mut rhs = Rational::zero();
        for (c, l) in self.constraints.iter().zip(&cert.row_multipliers) {
            if l.is_zero() {
                continue;
            }
            for (acc, a) in combo.iter_mut().zip(&c.coeffs) {
                *acc += l * a;
            }
            rhs += l * &c.rhs;
        }
        for (i, mu) in cert.bound_multipliers.iter().enumerate() {
            if let Some(lb) = &self.lower[i] {
                combo[i] -= mu;
                rhs -= mu * lb;
            }
        }
        combo.iter().all(Zero::is_zero) && rhs.is_negative()
    }
}

/// How an original variable is represented in standard form.
#[derive(Clone, Copy)]
enum VarMap {
    /// `x = l + col`
    Shifted(usize),
    /// `x = pos - neg`
    Split(usize, usize),
}

/// Standard-form tableau after phase 1.
struct Tableau {
    maps: Vec<VarMap>,
    tab: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    structural: usize,
    total: usize,
}

impl Tableau {
    fn point(&self, sys: &LinearSystem) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.total];
        for (r, &b) in self.basis.iter().enumerate() {
            values[b] = self.tab[r][self.total].clone();
        }
        let x: Vec<Rational> = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| match *m {
                VarMap::Shifted(col) => sys.lower[i].clone().unwrap() + &values[col],
                VarMap::Split(p, n) => &values[p] - &values[n],
            })
            .collect();
        debug_assert!(sys.satisfied_by(&x));
        x
    }
}

/// Decides feasibility exactly.
///
/// Deterministic: the same system always yields the same point or
/// certificate.
pub fn lp_feasible(sys: &LinearSystem) -> Feasibility {
    match phase_one(sys) {
        Ok(t) => Feasibility::Feasible(t.point(sys)),
        Err(cert) => Feasibility::Infeasible(cert),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Optimum {
    Optimal(Vec<Rational>),
    Infeasible(InfeasibilityCertificate),
    Unbounded,
}

/// Minimises `objectiveᵀx` over the system, continuing from the phase-1
/// basis with Bland's rule.
pub fn lp_minimize(sys: &LinearSystem, objective: &[Rational]) -> Optimum {
    assert_eq!(objective.len(), sys.vars, "objective has wrong arity");
    let mut t = match phase_one(sys) {
        Ok(t) => t,
        Err(cert) => return Optimum::Infeasible(cert),
    };
    let (structural, total) = (t.structural, t.total);
    let mut col_cost = vec![Rational::zero(); total];
    for (i, m) in t.maps.iter().enumerate() {
        match *m {
            VarMap::Shifted(col) => col_cost[col] = objective[i].clone(),
            VarMap::Split(p, n) => {
                col_cost[p] = objective[i].clone();
                col_cost[n] = -objective[i].clone();
            }
        }
    }
    let mut cost = vec![Rational::zero(); total + 1];
    cost[..total].clone_from_slice(&col_cost);
    for (r, &b) in t.basis.iter().enumerate() {
        if col_cost[b].is_zero() {
            continue;
        }
        let f = col_cost[b].clone();
        for (v, a) in cost.iter_mut().zip(&t.tab[r]) {
            if !a.is_zero() {
                *v -= &f * a;
            }
        }
    }
    loop {
        let Some(enter) = (0..structural).find(|&j| cost[j].is_negative()) else {
            return Optimum::Optimal(t.point(sys));
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in t.tab.iter().enumerate() {
            // an artificial left basic at zero must not become positive
            let stuck = t.basis[r] >= structural && !row[enter].is_zero();
            if !row[enter].is_positive() && !stuck {
                continue;
            }
            let ratio = if stuck {
                Rational::zero()
            } else {
                &row[total] / &row[enter]
            };
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && t.basis[r] < t.basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            return Optimum::Unbounded;
        };
        pivot(&mut t.tab, &mut cost, pr, enter);
        t.basis[pr] = enter;
    }
}

fn phase_one(sys: &LinearSystem) -> Result<Tableau, InfeasibilityCertificate> {
    let rows = sys.constraints.len();

    let mut maps = Vec::with_capacity(sys.vars);
    let mut ncols = 0;
    for l in &sys.lower {
        if l.is_some() {
            maps.push(VarMap::Shifted(ncols));
            ncols += 1;
        } else {
            maps.push(VarMap::Split(ncols, ncols + 1));
            ncols += 2;
        }
    }
    let mut slack_of_row = vec![None; rows];
    for (r, c) in sys.constraints.iter().enumerate() {
        if c.relation == Relation::Le {
            slack_of_row[r] = Some(ncols);
            ncols += 1;
        }
    }
    let structural = ncols;
    let total = structural + rows;

    // tableau rows: [A' | I_artificial | rhs]
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    let mut flipped = vec![false; rows];
    for (r, c) in sys.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); total + 1];
        let mut rhs = c.rhs.clone();
        for (i, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match maps[i] {
                VarMap::Shifted(col) => {
                    row[col] = a.clone();
                    rhs -= a * sys.lower[i].as_ref().expect("shifted var has bound");
                }
                VarMap::Split(p, n) => {
                    row[p] = a.clone();
                    row[n] = -a.clone();
                }
            }
        }
        if let Some(s) = slack_of_row[r] {
            row[s] = Rational::one();
        }
        if rhs.is_negative() {
            flipped[r] = true;
            for v in row.iter_mut().take(structural) {
                *v = -v.clone();
            }
            rhs = -rhs;
        }
        row[structural + r] = Rational::one();
        row[total] = rhs;
        tab.push(row);
    }

    // Unflipped `≤` rows start with their slack basic; every other row gets a
    // real artificial. Each row keeps an identity column so the final
    // reduced costs expose the duals.
    let real_artificial: Vec<bool> = (0..rows)
        .map(|r| slack_of_row[r].is_none() || flipped[r])
        .collect();
    let mut basis: Vec<usize> = (0..rows)
        .map(|r| match slack_of_row[r] {
            Some(s) if !real_artificial[r] => s,
            _ => structural + r,
        })
        .collect();

    // phase-1 reduced costs: minimise the sum of real artificials
    let mut cost = vec![Rational::zero(); total + 1];
    for (r, row) in tab.iter().enumerate() {
        if !real_artificial[r] {
            continue;
        }
        cost[structural + r] = Rational::one();
        for j in 0..structural {
            cost[j] -= &row[j];
        }
        cost[structural + r] -= Rational::one();
        cost[total] -= &row[total];
    }

    // artificial columns never re-enter
    while let Some(enter) = (0..structural).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in tab.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[total] / &row[enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // phase-1 objective is bounded below by zero
        let (pr, _) = leave.expect("phase-1 simplex cannot be unbounded");
        pivot(&mut tab, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    // cost[total] holds -w at the optimum
    if cost[total].is_zero() {
        return Ok(Tableau {
            maps,
            tab,
            basis,
            structural,
            total,
        });
    }

    // duals of the flipped system: y_r = c_r - reduced cost of column r
    let lambda: Vec<Rational> = (0..rows)
        .map(|r| {
            let c = if real_artificial[r] { Rational::one() } else { Rational::zero() };
            let y = c - &cost[structural + r];
            let w = if flipped[r] { -y } else { y };
            -w
        })
        .collect();
    let mut mu = vec![Rational::zero(); sys.vars];
    for (i, m) in maps.iter().enumerate() {
        if let VarMap::Shifted(_) = m {
            mu[i] = sys
                .constraints
                .iter()
                .zip(&lambda)
                .fold(Rational::zero(), |acc, (c, l)| acc + l * &c.coeffs[i]);
        }
    }
    let cert = InfeasibilityCertificate {
        row_multipliers: lambda,
        bound_multipliers: mu,
    };
    assert!(
        sys.verify_infeasibility(&cert),
        "phase-1 duals failed to certify infeasibility"
    );
    Err(cert)
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip();
    for v in tab[pr].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let pivot_row = tab[pr].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
}
