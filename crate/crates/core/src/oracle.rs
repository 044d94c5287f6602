//! Brute-force checks that do not use any closed form.
//!
//! Payoffs come from walking the game tree leaf by leaf; equilibria come
//! from testing every profile on a grid for profitable unilateral
//! deviations; Monte-Carlo sampling gives a statistical check of the tree.
//! Nothing here calls into [`crate::equilibrium`] except
//! [`closed_form_profile`] and [`agreement`], which exist to compare the
//! two routes.
//!
//! Firms and the inspector are assumed to commit simultaneously to mixed
//! strategies. Their strategies are checked in the collusion subgame even
//! when the regulator blocks collusion, so a blocked profile must still
//! carry a credible continuation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::{inspector_mixing_probability, EquilibriumOutcome, Regime};
use crate::model::Scenario;

/// Name of the generator behind [`monte_carlo_estimate`].
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), seeded with seed_from_u64";

const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub allow_collusion: bool,
    /// Probability that firms price high when the cost is low.
    pub eta: f64,
    /// Probability that the inspector investigates a high price.
    pub mu: f64,
}

impl StrategyProfile {
    pub fn new(allow_collusion: bool, eta: f64, mu: f64) -> Self {
        Self {
            allow_collusion,
            eta,
            mu,
        }
    }

    /// Largest coordinate gap in `(eta, mu)`; infinite when the collusion
    /// decisions differ.
    pub fn distance(&self, other: &StrategyProfile) -> f64 {
        if self.allow_collusion != other.allow_collusion {
            return f64::INFINITY;
        }
        (self.eta - other.eta).abs().max((self.mu - other.mu).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PayoffVector {
    pub regulator_welfare: f64,
    pub firm_payoff: f64,
    pub inspector_payoff: f64,
}

impl PayoffVector {
    fn add_scaled(&mut self, p: f64, leaf: PayoffVector) {
        self.regulator_welfare += p * leaf.regulator_welfare;
        self.firm_payoff += p * leaf.firm_payoff;
        self.inspector_payoff += p * leaf.inspector_payoff;
    }
}

/// Payoffs at one terminal node. `violate` and `investigate` are ignored
/// where the tree has no such move.
fn leaf(s: &Scenario, allow: bool, high_cost: bool, violate: bool, investigate: bool) -> PayoffVector {
    let w = s.welfare();
    let v = s.firms();
    let e = s.enforcement();
    match (allow, high_cost) {
        (false, true) => PayoffVector {
            regulator_welfare: w.w_d,
            firm_payoff: v.v_d,
            inspector_payoff: 0.0,
        },
        (false, false) => PayoffVector {
            regulator_welfare: w.w_g,
            firm_payoff: v.v_g,
            inspector_payoff: 0.0,
        },
        // Justified high price; an investigation finds nothing.
        (true, true) => PayoffVector {
            regulator_welfare: w.w_h,
            firm_payoff: v.v_h,
            inspector_payoff: if investigate { -e.d } else { 0.0 },
        },
        (true, false) if violate => PayoffVector {
            regulator_welfare: w.w_h_prime,
            firm_payoff: if investigate { v.v_h_prime - e.f() } else { v.v_h_prime },
            inspector_payoff: if investigate { e.g - e.d } else { 0.0 },
        },
        // Low price: nothing to inspect.
        (true, false) => PayoffVector {
            regulator_welfare: w.w_l,
            firm_payoff: v.v_l,
            inspector_payoff: 0.0,
        },
    }
}

/// Exact expected payoffs, summing over every leaf of the game tree.
pub fn game_tree_payoffs(s: &Scenario, p: &StrategyProfile) -> PayoffVector {
    let rho = s.rho();
    let mut total = PayoffVector::default();
    if !p.allow_collusion {
        total.add_scaled(rho, leaf(s, false, true, false, false));
        total.add_scaled(1.0 - rho, leaf(s, false, false, false, false));
        return total;
    }
    for (high_cost, p_cost) in [(true, rho), (false, 1.0 - rho)] {
        let violate_branches: &[(bool, f64)] = if high_cost {
            &[(false, 1.0)]
        } else {
            &[(true, p.eta), (false, 1.0 - p.eta)]
        };
        for &(violate, p_violate) in violate_branches {
            let high_price = high_cost || violate;
            let inspect_branches: &[(bool, f64)] = if high_price {
                &[(true, p.mu), (false, 1.0 - p.mu)]
            } else {
                &[(false, 1.0)]
            };
            for &(investigate, p_inspect) in inspect_branches {
                total.add_scaled(
                    p_cost * p_violate * p_inspect,
                    leaf(s, true, high_cost, violate, investigate),
                );
            }
        }
    }
    total
}

/// Largest gain each player can get from a unilateral deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub firm_gain: f64,
    pub inspector_gain: f64,
    pub regulator_gain: f64,
    /// Expected regulator welfare with and without collusion, at the
    /// profile's continuation strategies.
    pub welfare_collusion: f64,
    pub welfare_no_collusion: f64,
    pub epsilon: f64,
    pub passes: bool,
}

impl DeviationReport {
    pub fn max_gain(&self) -> f64 {
        self.firm_gain.max(self.inspector_gain).max(self.regulator_gain)
    }
}

/// Check whether `p` is an `epsilon`-equilibrium.
///
/// Payoffs are linear in each player's own probability, so deviating to
/// the pure strategies 0 and 1 is enough.
pub fn best_response_check(s: &Scenario, p: &StrategyProfile, epsilon: f64) -> DeviationReport {
    let sub = StrategyProfile {
        allow_collusion: true,
        ..*p
    };
    let base = game_tree_payoffs(s, &sub);

    let firm_gain = [0.0, 1.0]
        .iter()
        .map(|&eta| game_tree_payoffs(s, &StrategyProfile { eta, ..sub }).firm_payoff - base.firm_payoff)
        .fold(0.0, f64::max);
    let inspector_gain = [0.0, 1.0]
        .iter()
        .map(|&mu| game_tree_payoffs(s, &StrategyProfile { mu, ..sub }).inspector_payoff - base.inspector_payoff)
        .fold(0.0, f64::max);

    let welfare_collusion = base.regulator_welfare;
    let welfare_no_collusion = game_tree_payoffs(
        s,
        &StrategyProfile {
            allow_collusion: false,
            ..sub
        },
    )
    .regulator_welfare;
    let regulator_gain = if p.allow_collusion {
        (welfare_no_collusion - welfare_collusion).max(0.0)
    } else {
        (welfare_collusion - welfare_no_collusion).max(0.0)
    };

    let passes = firm_gain <= epsilon && inspector_gain <= epsilon && regulator_gain <= epsilon;
    DeviationReport {
        firm_gain,
        inspector_gain,
        regulator_gain,
        welfare_collusion,
        welfare_no_collusion,
        epsilon,
        passes,
    }
}

/// Default tolerance for a grid of spacing `1/grid_n`:
/// `4 max(1, L) / grid_n`, where `L = (1-rho) max(w_L - w'_H, f, g - d)`
/// bounds how fast any player's deviation gain moves per unit of
/// probability. The grid point nearest an exact equilibrium then has a
/// gain of at most `epsilon / 8`.
pub fn default_epsilon(s: &Scenario, grid_n: usize) -> f64 {
    let w = s.welfare();
    let e = s.enforcement();
    let slope = (1.0 - s.rho()) * w.violation_loss().max(e.f()).max(e.g - e.d);
    4.0 * slope.max(1.0) / grid_n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridEquilibrium {
    #[serde(flatten)]
    pub profile: StrategyProfile,
    pub max_gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSearchResult {
    pub profiles: Vec<GridEquilibrium>,
    pub grid_n: usize,
    pub epsilon: f64,
}

impl EquilibriumSearchResult {
    /// Passing profile closest to `target`.
    pub fn nearest(&self, target: &StrategyProfile) -> Option<(&GridEquilibrium, f64)> {
        self.profiles
            .iter()
            .map(|g| (g, g.profile.distance(target)))
            .filter(|(_, dist)| dist.is_finite())
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Passing profile with the smallest deviation gain (first on ties).
    pub fn best(&self) -> Option<&GridEquilibrium> {
        self.profiles.iter().min_by(|a, b| a.max_gain.total_cmp(&b.max_gain))
    }
}

/// Every profile on the `(grid_n + 1)^2` grid, for both collusion
/// decisions, that passes [`best_response_check`] at `epsilon`.
///
/// Rows are evaluated in parallel and collected in grid order.
pub fn grid_equilibrium_search(
    s: &Scenario,
    grid_n: usize,
    epsilon: f64,
) -> Result<EquilibriumSearchResult, OracleError> {
    if grid_n < 2 {
        return Err(OracleError::GridTooCoarse(grid_n));
    }
    let n = grid_n as f64;
    let rows: Vec<(bool, usize)> = [false, true]
        .iter()
        .flat_map(|&a| (0..=grid_n).map(move |i| (a, i)))
        .collect();
    let profiles = rows
        .par_iter()
        .map(|&(allow, i)| {
            let eta = i as f64 / n;
            (0..=grid_n)
                .filter_map(|j| {
                    let profile = StrategyProfile::new(allow, eta, j as f64 / n);
                    let report = best_response_check(s, &profile, epsilon);
                    report.passes.then(|| GridEquilibrium {
                        profile,
                        max_gain: report.max_gain(),
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(EquilibriumSearchResult {
        profiles,
        grid_n,
        epsilon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn estimate(&self) -> Estimate {
        let std_error = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            f64::INFINITY
        };
        let half = if std_error == 0.0 { 0.0 } else { Z_95 * std_error };
        Estimate {
            mean: self.mean,
            std_error,
            ci_low: self.mean - half,
            ci_high: self.mean + half,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub n_samples: u64,
    pub seed: u64,
    pub rng: String,
    pub profile: StrategyProfile,
    pub regulator_welfare: Estimate,
    pub firm_payoff: Estimate,
    pub inspector_payoff: Estimate,
}

impl MonteCarloReport {
    /// Whether every component of `exact` lies in its 95% interval.
    pub fn covers(&self, exact: &PayoffVector) -> [bool; 3] {
        [
            self.regulator_welfare.contains(exact.regulator_welfare),
            self.firm_payoff.contains(exact.firm_payoff),
            self.inspector_payoff.contains(exact.inspector_payoff),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grid_n must be at least 2 (got {0})")]
    GridTooCoarse(usize),
    #[error("at least one sample is required")]
    NoSamples,
}

/// Sample `n_samples` plays of the game and report means with 95%
/// normal-approximation intervals.
///
/// Every play draws exactly three uniforms (cost, violation, inspection)
/// so that streams line up across profiles. Deterministic for a given seed.
pub fn monte_carlo_estimate(
    s: &Scenario,
    p: &StrategyProfile,
    n_samples: u64,
    seed: u64,
) -> Result<MonteCarloReport, OracleError> {
    if n_samples == 0 {
        return Err(OracleError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut reg, mut firm, mut insp) = (Welford::default(), Welford::default(), Welford::default());
    for _ in 0..n_samples {
        let u_cost: f64 = rng.random();
        let u_violate: f64 = rng.random();
        let u_inspect: f64 = rng.random();
        let high_cost = u_cost < s.rho();
        let violate = p.allow_collusion && !high_cost && u_violate < p.eta;
        let investigate = p.allow_collusion && (high_cost || violate) && u_inspect < p.mu;
        let payoff = leaf(s, p.allow_collusion, high_cost, violate, investigate);
        reg.push(payoff.regulator_welfare);
        firm.push(payoff.firm_payoff);
        insp.push(payoff.inspector_payoff);
    }
    Ok(MonteCarloReport {
        n_samples,
        seed,
        rng: RNG_ALGORITHM.to_string(),
        profile: *p,
        regulator_welfare: reg.estimate(),
        firm_payoff: firm.estimate(),
        inspector_payoff: insp.estimate(),
    })
}

/// Full strategy profile implied by a closed-form outcome, including the
/// continuation played off the equilibrium path.
///
/// The inspector mixes at the firm-indifference rate whenever firms mix;
/// with costless investigation it always investigates.
pub fn closed_form_profile(s: &Scenario, outcome: &EquilibriumOutcome) -> StrategyProfile {
    let eta = outcome.eta.unwrap_or(outcome.diagnostics.continuation_eta);
    let mu = if outcome.regime == Regime::ViolationDeterred || (s.enforcement().d == 0.0) {
        1.0
    } else if eta >= 1.0 {
        0.0
    } else {
        inspector_mixing_probability(s.firms(), s.enforcement().f()).unwrap_or(0.0)
    };
    StrategyProfile::new(outcome.collusion_allowed, eta, mu)
}

/// How a grid search lines up with a claimed equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub claimed: StrategyProfile,
    /// Distance from the claim to the closest passing grid profile.
    pub nearest_distance: Option<f64>,
    pub nearest: Option<StrategyProfile>,
    /// Passing profiles whose collusion decision differs from the claim.
    pub contrary_decisions: usize,
    /// Passing profiles with a pure firm strategy where none should exist.
    pub pure_firm_profiles: usize,
    /// Lowest-gain passing profile.
    pub best: Option<StrategyProfile>,
    pub best_matches_regime: bool,
    pub agrees: bool,
}

/// Compare a grid search against a claimed equilibrium.
///
/// The claim is confirmed when a passing profile lies within `1/grid_n`
/// of it in every coordinate, no passing profile makes the opposite
/// collusion decision, firms never play a pure strategy when investigation
/// is credible (`0 < d` and `rho < (g-d)/g`), and the lowest-gain profile
/// has the claimed regime's shape.
pub fn agreement(s: &Scenario, outcome: &EquilibriumOutcome, search: &EquilibriumSearchResult) -> Agreement {
    let claimed = closed_form_profile(s, outcome);
    let e = s.enforcement();
    let nearest = search.nearest(&claimed);
    let nearest_distance = nearest.map(|(_, dist)| dist);
    let contrary_decisions = search
        .profiles
        .iter()
        .filter(|g| g.profile.allow_collusion != claimed.allow_collusion)
        .count();
    let credible = e.d > 0.0 && s.rho() < e.investigate_bound();
    let pure_firm_profiles = if credible {
        search
            .profiles
            .iter()
            .filter(|g| g.profile.eta == 0.0 || g.profile.eta == 1.0)
            .count()
    } else {
        0
    };
    let best = search.best().map(|g| g.profile);
    let best_matches_regime = best.is_some_and(|b| {
        b.allow_collusion == outcome.collusion_allowed
            && match outcome.regime {
                Regime::NoCollusion => true,
                Regime::PureAlwaysViolate => b.eta == 1.0 && b.mu == 0.0,
                Regime::MixedViolation => b.eta > 0.0 && b.eta < 1.0,
                Regime::ViolationDeterred => b.eta == 0.0,
            }
    });
    let within = nearest_distance.is_some_and(|dist| dist <= 1.0 / search.grid_n as f64 + 1e-12);
    let agrees = within && contrary_decisions == 0 && pure_firm_profiles == 0 && best_matches_regime;
    Agreement {
        claimed,
        nearest_distance,
        nearest: nearest.map(|(g, _)| g.profile),
        contrary_decisions,
        pure_firm_profiles,
        best,
        best_matches_regime,
        agrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    fn s1(rho: f64) -> Scenario {
        ScenarioSpec {
            welfare: WelfareProfile::new(0.0, 2.0, 3.0, 4.0, 5.0),
            enforcement: EnforcementParams::new(10.0, 2.0, 2),
            firms: FirmPayoffs::new(1.0, 2.0, 4.0, 3.0, 5.0),
            rho,
            weights: SocialWeights::new(0.5, 0.5),
        }
        .validate()
        .unwrap()
    }

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn tree_payoffs() {
        let blocked = game_tree_payoffs(&s1(0.5), &StrategyProfile::new(false, 0.3, 0.7));
        close(blocked.regulator_welfare, 2.5);
        let honest = game_tree_payoffs(&s1(0.5), &StrategyProfile::new(true, 0.0, 0.0));
        close(honest.regulator_welfare, 3.0);
        close(honest.inspector_payoff, 0.0);
        let mixed = game_tree_payoffs(&s1(0.5), &StrategyProfile::new(true, 0.25, 0.4));
        close(mixed.inspector_payoff, 0.0);
    }

    #[test]
    fn mixed_profile_is_an_equilibrium() {
        let r = best_response_check(&s1(0.5), &StrategyProfile::new(true, 0.25, 0.4), 1e-9);
        assert!(r.passes, "{r:?}");
        close(r.welfare_collusion, 2.875);
        close(r.welfare_no_collusion, 2.5);
    }

    #[test]
    fn always_violate_is_an_equilibrium_at_high_belief() {
        let r = best_response_check(&s1(0.9), &StrategyProfile::new(true, 1.0, 0.0), 1e-9);
        assert!(r.passes, "{r:?}");
    }

    #[test]
    fn always_violate_invites_inspection_at_middle_belief() {
        let r = best_response_check(&s1(0.5), &StrategyProfile::new(true, 1.0, 0.0), 1e-9);
        assert!(!r.passes);
        close(r.inspector_gain, 3.0);
    }

    #[test]
    fn grid_finds_mixed_equilibrium() {
        let s = s1(0.5);
        let res = grid_equilibrium_search(&s, 200, default_epsilon(&s, 200)).unwrap();
        let (_, dist) = res.nearest(&StrategyProfile::new(true, 0.25, 0.4)).unwrap();
        assert!(dist <= 1.0 / 200.0 + 1e-12);
        assert!(res.profiles.iter().all(|g| g.profile.allow_collusion));
    }

    #[test]
    fn grid_finds_pure_equilibrium() {
        let s = s1(0.9);
        let res = grid_equilibrium_search(&s, 200, default_epsilon(&s, 200)).unwrap();
        let best = res.best().unwrap();
        assert_eq!(best.profile, StrategyProfile::new(true, 1.0, 0.0));
        assert_eq!(best.max_gain, 0.0);
    }

    #[test]
    fn grid_blocks_collusion_at_low_belief() {
        let s = s1(0.3);
        let res = grid_equilibrium_search(&s, 200, default_epsilon(&s, 200)).unwrap();
        assert!(!res.profiles.is_empty());
        assert!(res.profiles.iter().all(|g| !g.profile.allow_collusion));
    }

    #[test]
    fn grid_rejects_coarse_grid() {
        assert_eq!(
            grid_equilibrium_search(&s1(0.5), 1, 0.1),
            Err(OracleError::GridTooCoarse(1))
        );
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let s = s1(0.5);
        let p = StrategyProfile::new(true, 0.25, 0.4);
        let a = monte_carlo_estimate(&s, &p, 10_000, 7).unwrap();
        let b = monte_carlo_estimate(&s, &p, 10_000, 7).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let c = monte_carlo_estimate(&s, &p, 10_000, 8).unwrap();
        assert_ne!(a.regulator_welfare.mean, c.regulator_welfare.mean);
    }

    #[test]
    fn certain_high_cost_has_no_spread() {
        let s = s1(1.0);
        let r = monte_carlo_estimate(&s, &StrategyProfile::new(true, 0.6, 0.3), 1000, 1).unwrap();
        assert_eq!(r.regulator_welfare.mean, 2.0);
        assert_eq!(r.regulator_welfare.std_error, 0.0);
        assert!(monte_carlo_estimate(&s, &StrategyProfile::new(true, 0.6, 0.3), 0, 1).is_err());
    }

    #[test]
    fn inspector_mean_near_zero_at_mixed_equilibrium() {
        let s = s1(0.5);
        let p = StrategyProfile::new(true, 0.25, 0.4);
        let r = monte_carlo_estimate(&s, &p, 1_000_000, 42).unwrap();
        assert!(r.inspector_payoff.contains(0.0), "{:?}", r.inspector_payoff);
    }
}
