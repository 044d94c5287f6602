//! Commitment versus discretion.
//!
//! Under commitment the inspector investigates every high price, which
//! removes any reason to violate (`eta = 0`) at a cost of `d` per
//! investigation. Under discretion the game plays out as in
//! [`crate::equilibrium`]. A social planner weighs regulator welfare
//! against the inspector's net payoff:
//!
//! `pi_S = delta1 w + delta2 h (g k - d)`
//!
//! with `h` the investigation indicator and `k` the violation indicator.
//!
//! The critical investigation cost in the regime where discretion blocks
//! collusion is
//!
//! `d < delta1 [rho (w_H - w_D) - (1 - rho)(w_G - w_L)] / (delta2 rho)`.
//!
//! This follows from comparing the two expected objectives directly.
//! The often-quoted form with `+ (1 - rho)(w_G - w_L)` in the numerator
//! does not; see [`printed_small_rho_threshold`].

use serde::{Deserialize, Serialize};

use crate::equilibrium::{classify_equilibrium, threshold_extremes, EquilibriumOutcome, Regime};
use crate::model::{Scenario, SocialWeights, WelfareProfile};

/// Tolerance below which the two policies count as equally good.
pub const INDIFFERENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Policy {
    Commitment,
    Discretion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preference {
    Commitment,
    Discretion,
    Indifferent,
}

impl Preference {
    pub fn as_str(self) -> &'static str {
        match self {
            Preference::Commitment => "Commitment",
            Preference::Discretion => "Discretion",
            Preference::Indifferent => "Indifferent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolicyRegime {
    /// Discretion ends in the always-violate equilibrium.
    HighRho,
    /// Discretion ends in the mixed-violation equilibrium.
    IntermediateRho,
    /// Discretion blocks collusion while commitment allows it.
    SmallRho,
    /// Neither policy allows collusion.
    TrivialNoCollusion,
    /// `d = 0`: both policies deter violation at no cost.
    CostlessInvestigation,
}

impl PolicyRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyRegime::HighRho => "HighRho",
            PolicyRegime::IntermediateRho => "IntermediateRho",
            PolicyRegime::SmallRho => "SmallRho",
            PolicyRegime::TrivialNoCollusion => "TrivialNoCollusion",
            PolicyRegime::CostlessInvestigation => "CostlessInvestigation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyComparison {
    pub regime: PolicyRegime,
    pub e_pi_commitment: f64,
    pub e_pi_discretion: f64,
    pub preferred: Preference,
    /// Critical investigation cost for the regime, if it has one.
    pub d_threshold: Option<f64>,
    /// `e_pi_commitment - e_pi_discretion`.
    pub margin: f64,
}

impl PolicyComparison {
    /// Verdict of the regime's closed-form cost test, ignoring the direct
    /// welfare comparison.
    pub fn threshold_verdict(&self, d: f64) -> Preference {
        let Some(bar) = self.d_threshold else {
            return Preference::Indifferent;
        };
        let commit = match self.regime {
            PolicyRegime::HighRho | PolicyRegime::SmallRho => d < bar,
            PolicyRegime::IntermediateRho => d > bar,
            PolicyRegime::TrivialNoCollusion | PolicyRegime::CostlessInvestigation => return Preference::Indifferent,
        };
        if commit {
            Preference::Commitment
        } else {
            Preference::Discretion
        }
    }
}

/// `delta1 w + delta2 h (g k - d)` for one realized outcome.
pub fn social_objective(
    w_realized: f64,
    investigated: bool,
    violated: bool,
    weights: &SocialWeights,
    g: f64,
    d: f64,
) -> f64 {
    let h = f64::from(u8::from(investigated));
    let k = f64::from(u8::from(violated));
    weights.delta1 * w_realized + weights.delta2 * h * (g * k - d)
}

/// Belief above which collusion is allowed under commitment (`rho_L`).
pub fn commitment_collusion_threshold(w: &WelfareProfile) -> f64 {
    threshold_extremes(w).0
}

fn blocked_welfare(s: &Scenario) -> f64 {
    let w = s.welfare();
    let rho = s.rho();
    s.weights().delta1 * (rho * w.w_d + (1.0 - rho) * w.w_g)
}

/// Expected social objective when firms collude and never violate; only
/// high-cost collusion produces a high price, and each one is investigated
/// at cost `investigation_cost`.
fn honest_collusion_welfare(s: &Scenario, investigation_cost: f64) -> f64 {
    let w = s.welfare();
    let rho = s.rho();
    let weights = s.weights();
    weights.delta1 * (rho * w.w_h + (1.0 - rho) * w.w_l) - weights.delta2 * rho * investigation_cost
}

fn discretion_welfare(s: &Scenario, outcome: &EquilibriumOutcome) -> f64 {
    let w = s.welfare();
    let rho = s.rho();
    let delta1 = s.weights().delta1;
    // The inspector's expected payoff is zero on every discretion path:
    // it either never investigates or is indifferent.
    match outcome.regime {
        Regime::NoCollusion => blocked_welfare(s),
        Regime::PureAlwaysViolate => delta1 * (rho * w.w_h + (1.0 - rho) * w.w_h_prime),
        Regime::MixedViolation => {
            let eta = outcome.eta.unwrap_or(0.0);
            delta1 * (rho * w.w_h + (1.0 - rho) * ((1.0 - eta) * w.w_l + eta * w.w_h_prime))
        }
        Regime::ViolationDeterred => honest_collusion_welfare(s, 0.0),
    }
}

/// Expected social objective under a policy.
pub fn expected_social_welfare(s: &Scenario, policy: Policy) -> f64 {
    match policy {
        Policy::Commitment => {
            if s.rho() > commitment_collusion_threshold(s.welfare()) {
                honest_collusion_welfare(s, s.enforcement().d)
            } else {
                blocked_welfare(s)
            }
        }
        Policy::Discretion => discretion_welfare(s, &classify_equilibrium(s)),
    }
}

/// Critical cost in the regime where discretion blocks collusion, in the
/// form derived from the direct welfare comparison.
pub fn small_rho_threshold(s: &Scenario) -> f64 {
    let w = s.welfare();
    let rho = s.rho();
    let SocialWeights { delta1, delta2 } = *s.weights();
    delta1 * (rho * w.collusion_gain() - (1.0 - rho) * (w.w_g - w.w_l)) / (delta2 * rho)
}

/// The same threshold with `+ (1 - rho)(w_G - w_L)`. Kept only to show
/// that it disagrees with the direct comparison; not used for verdicts.
pub fn printed_small_rho_threshold(s: &Scenario) -> f64 {
    let w = s.welfare();
    let rho = s.rho();
    let SocialWeights { delta1, delta2 } = *s.weights();
    delta1 * (rho * w.collusion_gain() + (1.0 - rho) * (w.w_g - w.w_l)) / (delta2 * rho)
}

/// Compare commitment and discretion by their expected social objective.
///
/// The preference comes from the direct comparison; the regime's
/// critical cost is reported alongside.
pub fn compare_policies(s: &Scenario) -> PolicyComparison {
    let w = s.welfare();
    let e = s.enforcement();
    let rho = s.rho();
    let SocialWeights { delta1, delta2 } = *s.weights();
    let outcome = classify_equilibrium(s);

    let commitment = expected_social_welfare(s, Policy::Commitment);
    let discretion = discretion_welfare(s, &outcome);

    let (regime, d_threshold) = if rho <= commitment_collusion_threshold(w) {
        (PolicyRegime::TrivialNoCollusion, None)
    } else {
        match outcome.regime {
            Regime::PureAlwaysViolate => (
                PolicyRegime::HighRho,
                Some(delta1 * (1.0 - rho) * w.violation_loss() / (delta2 * rho)),
            ),
            Regime::MixedViolation => (
                PolicyRegime::IntermediateRho,
                Some(e.g - delta1 * w.violation_loss() / delta2),
            ),
            Regime::NoCollusion => (PolicyRegime::SmallRho, Some(small_rho_threshold(s))),
            Regime::ViolationDeterred => (PolicyRegime::CostlessInvestigation, None),
        }
    };

    let margin = if regime == PolicyRegime::TrivialNoCollusion {
        0.0
    } else {
        commitment - discretion
    };
    let preferred = if margin.abs() <= INDIFFERENCE_TOL {
        Preference::Indifferent
    } else if margin > 0.0 {
        Preference::Commitment
    } else {
        Preference::Discretion
    };

    PolicyComparison {
        regime,
        e_pi_commitment: commitment,
        e_pi_discretion: discretion,
        preferred,
        d_threshold,
        margin,
    }
}
