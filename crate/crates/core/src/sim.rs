//! Floating-point integration of the mass-action ODE, used only to
//! falsify certificates and verdicts, never to produce them.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactla::{to_f64, to_f64_vec};
use crate::netmodel::{rates_unchecked, rhs_unchecked, stoichiometric_matrix, Network};
use crate::wdne::WdneCertificate;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("initial state has {got} entries, network has {expected} species")]
    Dimension { expected: usize, got: usize },
    #[error("expected {expected} rate constants, got {got}")]
    RateCount { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("species {species} driven to {value} at t = {t}")]
    NegativeComponent { t: f64, species: usize, value: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

/// Accepted steps of one run. `states[k]` is the state at `times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub rejected_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryStats {
    pub min_per_species: Vec<f64>,
    /// Largest infinity norm over the run.
    pub max_norm: f64,
    /// `max_t |cᵀx(t) − cᵀx(0)|` for each supplied vector.
    pub conservation_drift: Vec<f64>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn stats(&self, conservation: &[Vec<f64>]) -> TrajectoryStats {
        let m = self.states[0].len();
        let mut min_per_species = vec![f64::INFINITY; m];
        let mut max_norm = 0.0f64;
        for x in &self.states {
            for (lo, v) in min_per_species.iter_mut().zip(x) {
                *lo = lo.min(*v);
            }
            max_norm = x.iter().fold(max_norm, |a, v| a.max(v.abs()));
        }
        TrajectoryStats {
            min_per_species,
            max_norm,
            conservation_drift: conservation.iter().map(|c| self.drift(c)).collect(),
        }
    }

    pub fn drift(&self, c: &[f64]) -> f64 {
        let dot = |x: &[f64]| x.iter().zip(c).map(|(a, b)| a * b).sum::<f64>();
        let start = dot(&self.states[0]);
        self.states
            .iter()
            .map(|x| (dot(x) - start).abs())
            .fold(0.0, f64::max)
    }

    /// Header `t,x_1,...,x_m`, one row per accepted step.
    pub fn to_csv(&self) -> String {
        let m = self.states[0].len();
        let mut out = String::from("t");
        for j in 1..=m {
            let _ = write!(out, ",x_{j}");
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.states) {
            let _ = write!(out, "{t}");
            for v in x {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes are unused.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 1_000_000;

/// Adaptive Dormand–Prince integration with absolute and relative
/// tolerance `tol`. Components that end a step slightly negative (above
/// `-tol`) are clipped to zero; anything lower rejects the step.
pub fn integrate(
    net: &Network,
    k_override: Option<&[f64]>,
    x0: &[f64],
    t_final: f64,
    tol: f64,
) -> Result<Trajectory, SimError> {
    let m = net.num_species();
    if x0.len() != m {
        return Err(SimError::Dimension { expected: m, got: x0.len() });
    }
    if let Some(k) = k_override {
        if k.len() != net.num_reactions() {
            return Err(SimError::RateCount {
                expected: net.num_reactions(),
                got: k.len(),
            });
        }
        if k.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(SimError::InvalidArgument("rate constants must be positive"));
        }
    }
    if x0.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(SimError::InvalidArgument("initial state must be non-negative"));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(SimError::InvalidArgument("final time must be positive"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SimError::InvalidArgument("tolerance must be positive"));
    }

    let f = |x: &[f64]| rhs_unchecked(net, x, k_override);
    let mut t = 0.0;
    let mut x = x0.to_vec();
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x.clone()],
        rejected_steps: 0,
    };
    let mut k1 = f(&x);
    let scale0 = x.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let rate0 = k1.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut h = if rate0 > 0.0 {
        (0.01 * scale0 / rate0).min(t_final)
    } else {
        t_final
    };
    let mut stage = vec![vec![0.0; m]; 7];

    for _ in 0..MAX_STEPS {
        if t >= t_final {
            return Ok(traj);
        }
        h = h.min(t_final - t);
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(SimError::StepUnderflow { t });
        }
        let (mut next, err) = dopri_step(&f, &x, &k1, h, &mut stage, tol);
        if !err.is_finite() || next.iter().any(|v| !v.is_finite()) {
            traj.rejected_steps += 1;
            h *= 0.25;
            continue;
        }
        if err > 1.0 {
            traj.rejected_steps += 1;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            continue;
        }
        if let Some((j, &v)) = next.iter().enumerate().find(|(_, v)| **v < -tol) {
            traj.rejected_steps += 1;
            h *= 0.5;
            if h <= 1e-14 * t.abs().max(1.0) {
                return Err(SimError::NegativeComponent { t, species: j, value: v });
            }
            continue;
        }
        let clipped = next.iter().any(|v| *v < 0.0);
        for v in next.iter_mut() {
            *v = v.max(0.0);
        }
        t += h;
        // FSAL: the last stage is f at the unclipped new state.
        k1 = if clipped { f(&next) } else { stage[6].clone() };
        x = next;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite { t });
        }
        traj.times.push(t);
        traj.states.push(x.clone());
        let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= grow;
    }
    Err(SimError::StepUnderflow { t })
}

/// One Dormand–Prince step from `x` with `k1 = f(x)`. Returns the fifth
/// order update and the scaled RMS error estimate; `stage[6]` ends up as
/// `f` at the update.
fn dopri_step(
    f: &impl Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
    k1: &[f64],
    h: f64,
    stage: &mut [Vec<f64>],
    tol: f64,
) -> (Vec<f64>, f64) {
    let m = x.len();
    stage[0].copy_from_slice(k1);
    let mut tmp = vec![0.0; m];
    for s in 1..7 {
        for j in 0..m {
            tmp[j] = x[j] + h * (0..s).map(|p| A[s][p] * stage[p][j]).sum::<f64>();
        }
        stage[s] = f(&tmp);
    }
    let next: Vec<f64> = (0..m)
        .map(|j| x[j] + h * (0..7).map(|s| B5[s] * stage[s][j]).sum::<f64>())
        .collect();
    let sum = (0..m)
        .map(|j| {
            let e = h * (0..7).map(|s| (B5[s] - B4[s]) * stage[s][j]).sum::<f64>();
            let sc = tol + tol * x[j].abs().max(next[j].abs());
            (e / sc).powi(2)
        })
        .sum::<f64>();
    (next, (sum / m.max(1) as f64).sqrt())
}

/// The same scheme with a constant step and no error control, for
/// convergence-order checks.
pub fn integrate_fixed_step(
    net: &Network,
    k_override: Option<&[f64]>,
    x0: &[f64],
    t_final: f64,
    steps: usize,
) -> Result<Vec<f64>, SimError> {
    if x0.len() != net.num_species() {
        return Err(SimError::Dimension {
            expected: net.num_species(),
            got: x0.len(),
        });
    }
    if steps == 0 || t_final.is_nan() || t_final <= 0.0 {
        return Err(SimError::InvalidArgument("need a positive horizon and step count"));
    }
    let f = |x: &[f64]| rhs_unchecked(net, x, k_override);
    let h = t_final / steps as f64;
    let mut stage = vec![vec![0.0; x0.len()]; 7];
    let mut x = x0.to_vec();
    let mut k1 = f(&x);
    for _ in 0..steps {
        let (next, _) = dopri_step(&f, &x, &k1, h, &mut stage, 1.0);
        k1 = stage[6].clone();
        x = next;
    }
    Ok(x)
}

/// Largest Euclidean distance from `x(t) − x(0)` to the column space of `Γ`.
pub fn range_residual(net: &Network, traj: &Trajectory) -> f64 {
    let gamma = stoichiometric_matrix(net).to_rational();
    // Orthonormal basis of the left kernel; the residual is the length of
    // the projection onto it.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in gamma.transpose().nullspace() {
        let mut w = to_f64_vec(&v);
        for b in &basis {
            let d: f64 = w.iter().zip(b).map(|(a, c)| a * c).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= d * bi;
            }
        }
        let n = w.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-12 {
            basis.push(w.into_iter().map(|a| a / n).collect());
        }
    }
    let x0 = &traj.states[0];
    traj.states
        .iter()
        .map(|x| {
            let dx: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a - b).collect();
            basis
                .iter()
                .map(|b| dx.iter().zip(b).map(|(a, c)| a * c).sum::<f64>().powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

pub const PROBE_ETAS: [f64; 2] = [1e-3, 1e-6];
pub const PROBE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeLevel {
    pub eta: f64,
    pub samples: usize,
    pub premise_satisfied: usize,
    pub premise_rate: f64,
    /// Largest `⟨α, f(x)⟩` among samples where the premise held.
    pub max_inner_product: Option<f64>,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub seed: u64,
    pub levels: Vec<ProbeLevel>,
}

impl ProbeReport {
    pub fn violations(&self) -> usize {
        self.levels.iter().map(|l| l.violations).sum()
    }

    pub fn premise_satisfied(&self) -> usize {
        self.levels.iter().map(|l| l.premise_satisfied).sum()
    }
}

/// Samples states near the face of the certificate's siphon (siphon
/// coordinates set to `η`, the rest uniform in `[0.1, 10]`) and checks
/// `⟨α, f(x)⟩ ≤ 1e-12` wherever every pair satisfies
/// `R_slow(x) ≤ ε R_fast(x)`.
pub fn certificate_probe(
    net: &Network,
    cert: &WdneCertificate,
    samples: usize,
    seed: u64,
) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = to_f64(&cert.epsilon);
    let alpha = to_f64_vec(&cert.alpha);
    let m = net.num_species();
    let levels = PROBE_ETAS
        .iter()
        .map(|&eta| {
            let mut level = ProbeLevel {
                eta,
                samples,
                premise_satisfied: 0,
                premise_rate: 0.0,
                max_inner_product: None,
                violations: 0,
            };
            for _ in 0..samples {
                let x: Vec<f64> = (0..m)
                    .map(|j| {
                        if cert.siphon.contains(&j) {
                            eta
                        } else {
                            rng.gen_range(0.1..=10.0)
                        }
                    })
                    .collect();
                let rates = rates_unchecked(net, &x, None);
                if !cert.pairs.iter().all(|p| rates[p.slow] <= eps * rates[p.fast]) {
                    continue;
                }
                level.premise_satisfied += 1;
                let f = rhs_unchecked(net, &x, None);
                let inner: f64 = alpha.iter().zip(&f).map(|(a, b)| a * b).sum();
                level.max_inner_product = Some(level.max_inner_product.map_or(inner, |v| v.max(inner)));
                if inner > PROBE_TOLERANCE {
                    level.violations += 1;
                }
            }
            if samples > 0 {
                level.premise_rate = level.premise_satisfied as f64 / samples as f64;
            }
            level
        })
        .collect();
    ProbeReport { seed, levels }
}
