//! Closed-form welfare, thresholds and equilibrium classification.
//!
//! The regulator moves first and allows collusion when the expected
//! welfare under collusion beats competition. If collusion is allowed and
//! the price turns out high, an inspector decides whether to investigate.
//! Firms anticipate the inspector: when investigation is not worthwhile
//! even against certain violation they always violate; otherwise they
//! violate just often enough to leave the inspector indifferent.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FirmPayoffs, Scenario, WelfareProfile};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("no interior mixed strategy: rho={rho} is not below (g-d)/g={bound}")]
    NoInteriorMixed { rho: f64, bound: f64 },
    #[error("investigation is costless (d={0}); the mixed strategy degenerates to eta=0")]
    CostlessInvestigation(f64),
    #[error("firms are not tempted or the fine cannot deter them: need f > v_H_prime - v_L > 0 (f={f}, gain={gain})")]
    NoDeterringMix { f: f64, gain: f64 },
}

/// `E[W^C] = rho w_H + (1-rho)[eta w'_H + (1-eta) w_L]`.
pub fn expected_welfare_collusion(rho: f64, eta: f64, w: &WelfareProfile) -> f64 {
    rho * w.w_h + (1.0 - rho) * (eta * w.w_h_prime + (1.0 - eta) * w.w_l)
}

/// `E[W^NC] = rho w_D + (1-rho) w_G`.
pub fn expected_welfare_no_collusion(rho: f64, w: &WelfareProfile) -> f64 {
    rho * w.w_d + (1.0 - rho) * w.w_g
}

/// Belief at which the regulator is indifferent about collusion when
/// firms violate with probability `eta`.
pub fn collusion_threshold(eta: f64, w: &WelfareProfile) -> f64 {
    let low_cost_loss = w.w_g - (eta * w.w_h_prime + (1.0 - eta) * w.w_l);
    low_cost_loss / (low_cost_loss + w.collusion_gain())
}

/// `(rho_L, rho_H)`: the collusion threshold when firms never and always
/// violate.
pub fn threshold_extremes(w: &WelfareProfile) -> (f64, f64) {
    (collusion_threshold(0.0, w), collusion_threshold(1.0, w))
}

/// Expected fine revenue from investigating, conditional on a high price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InspectionBenefit {
    pub value: f64,
    /// High price never happens (`rho = 0`, `eta = 0`); `value` is 0 by convention.
    pub degenerate: bool,
}

/// `g (1-rho) eta / ((1-rho) eta + rho)`.
pub fn inspection_benefit(rho: f64, eta: f64, g: f64) -> InspectionBenefit {
    let violating = (1.0 - rho) * eta;
    let high_price = violating + rho;
    if high_price == 0.0 {
        return InspectionBenefit {
            value: 0.0,
            degenerate: true,
        };
    }
    InspectionBenefit {
        value: g * violating / high_price,
        degenerate: false,
    }
}

/// Violation probability that leaves the inspector indifferent,
/// `eta = rho d / ((1-rho)(g-d))`.
pub fn mixed_violation_probability(rho: f64, g: f64, d: f64) -> Result<f64, EquilibriumError> {
    if d <= 0.0 {
        return Err(EquilibriumError::CostlessInvestigation(d));
    }
    let bound = (g - d) / g;
    if !(rho < bound) {
        return Err(EquilibriumError::NoInteriorMixed { rho, bound });
    }
    Ok(rho * d / ((1.0 - rho) * (g - d)))
}

/// Collusion threshold after substituting the inspector-indifference
/// violation probability:
///
/// `(g-d)(w_G-w_L) / [(g-d)(w_G-w_L) + (g-d)(w_H-w_D) - d(w_L-w'_H)]`.
///
/// Only meaningful as a probability when [`incentive_ratio`] exceeds 1.
pub fn mixed_collusion_threshold(w: &WelfareProfile, g: f64, d: f64) -> f64 {
    let net = g - d;
    let num = net * (w.w_g - w.w_l);
    num / (num + net * w.collusion_gain() - d * w.violation_loss())
}

/// `((g-d)/d) ((w_H-w_D)/(w_G-w'_H))`. Infinite when `d = 0`.
pub fn incentive_ratio(w: &WelfareProfile, g: f64, d: f64) -> f64 {
    if d == 0.0 {
        return f64::INFINITY;
    }
    ((g - d) / d) * (w.collusion_gain() / (w.w_g - w.w_h_prime))
}

/// Investigation probability that leaves firms indifferent about
/// violating, `mu = (v'_H - v_L) / f`.
pub fn inspector_mixing_probability(firms: &FirmPayoffs, f: f64) -> Result<f64, EquilibriumError> {
    let gain = firms.violation_gain();
    if !(gain > 0.0 && f > gain) {
        return Err(EquilibriumError::NoDeterringMix { f, gain });
    }
    Ok(gain / f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    NoCollusion,
    PureAlwaysViolate,
    MixedViolation,
    /// Costless investigation (`d = 0`): violation is fully deterred.
    ViolationDeterred,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::NoCollusion => "NoCollusion",
            Regime::PureAlwaysViolate => "PureAlwaysViolate",
            Regime::MixedViolation => "MixedViolation",
            Regime::ViolationDeterred => "ViolationDeterred",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InspectorBehavior {
    NeverInvestigate,
    Indifferent,
    NotApplicable,
}

/// Which strict inequality the belief sits exactly on, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    /// `rho = (g-d)/g`; classified as the always-violate branch.
    InvestigateBound,
    /// `rho` equals the binding collusion threshold; collusion refused.
    CollusionThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rho_star_mixed: f64,
    pub rho_l: f64,
    pub rho_h: f64,
    pub incentive_ratio: f64,
    pub investigate_bound: f64,
    /// Violation probability the firms would play if collusion were
    /// allowed: 1, the indifference mix, or 0 when investigation is free.
    pub continuation_eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumOutcome {
    pub regime: Regime,
    pub collusion_allowed: bool,
    /// `None` when collusion is blocked.
    pub eta: Option<f64>,
    pub inspector: InspectorBehavior,
    pub boundary: Option<Boundary>,
    pub diagnostics: Diagnostics,
}

/// Equilibrium of the exemption game under discretionary investigation.
///
/// Ties at a threshold go against collusion; a belief exactly on
/// `(g-d)/g` is treated as the always-violate branch. Both cases carry a
/// [`Boundary`] flag.
pub fn classify_equilibrium(s: &Scenario) -> EquilibriumOutcome {
    let w = s.welfare();
    let e = s.enforcement();
    let (g, d) = (e.g, e.d);
    let rho = s.rho();

    let (rho_l, rho_h) = threshold_extremes(w);
    let ratio = incentive_ratio(w, g, d);
    let bound = e.investigate_bound();
    let mut diagnostics = Diagnostics {
        rho_star_mixed: mixed_collusion_threshold(w, g, d),
        rho_l,
        rho_h,
        incentive_ratio: ratio,
        investigate_bound: bound,
        continuation_eta: 1.0,
    };

    let blocked = |boundary, diagnostics| EquilibriumOutcome {
        regime: Regime::NoCollusion,
        collusion_allowed: false,
        eta: None,
        inspector: InspectorBehavior::NotApplicable,
        boundary,
        diagnostics,
    };

    if d == 0.0 {
        // Any positive violation rate makes investigation strictly
        // worthwhile, so firms never violate.
        diagnostics.continuation_eta = 0.0;
        if rho > rho_l {
            return EquilibriumOutcome {
                regime: Regime::ViolationDeterred,
                collusion_allowed: true,
                eta: Some(0.0),
                inspector: InspectorBehavior::Indifferent,
                boundary: None,
                diagnostics,
            };
        }
        let tie = (rho == rho_l).then_some(Boundary::CollusionThreshold);
        return blocked(tie, diagnostics);
    }

    if rho >= bound {
        let mut boundary = (rho == bound).then_some(Boundary::InvestigateBound);
        let allowed = if ratio >= 1.0 {
            true
        } else {
            if rho == rho_h {
                boundary = Some(Boundary::CollusionThreshold);
            }
            rho > rho_h
        };
        if !allowed {
            return blocked(boundary, diagnostics);
        }
        return EquilibriumOutcome {
            regime: Regime::PureAlwaysViolate,
            collusion_allowed: true,
            eta: Some(1.0),
            inspector: InspectorBehavior::NeverInvestigate,
            boundary,
            diagnostics,
        };
    }

    let eta = mixed_violation_probability(rho, g, d).expect("rho below the investigate bound with d > 0");
    diagnostics.continuation_eta = eta;
    let threshold = diagnostics.rho_star_mixed;
    if ratio > 1.0 && rho > threshold {
        EquilibriumOutcome {
            regime: Regime::MixedViolation,
            collusion_allowed: true,
            eta: Some(eta),
            inspector: InspectorBehavior::Indifferent,
            boundary: None,
            diagnostics,
        }
    } else {
        let tie = (ratio > 1.0 && rho == threshold).then_some(Boundary::CollusionThreshold);
        blocked(tie, diagnostics)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    const TOL: f64 = 1e-12;

    fn s1w() -> WelfareProfile {
        WelfareProfile::new(0.0, 2.0, 3.0, 4.0, 5.0)
    }

    fn s1(rho: f64) -> Scenario {
        ScenarioSpec {
            welfare: s1w(),
            enforcement: EnforcementParams::new(10.0, 2.0, 2),
            firms: FirmPayoffs::new(1.0, 2.0, 4.0, 3.0, 5.0),
            rho,
            weights: SocialWeights::new(0.5, 0.5),
        }
        .validate()
        .unwrap()
    }

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= TOL, "{a} vs {b}");
    }

    #[test]
    fn welfare_under_collusion() {
        close(expected_welfare_collusion(1.0, 0.7, &s1w()), 2.0);
        close(expected_welfare_collusion(0.0, 0.0, &s1w()), 4.0);
        close(expected_welfare_collusion(0.5, 0.25, &s1w()), 2.875);
    }

    #[test]
    fn welfare_without_collusion() {
        close(expected_welfare_no_collusion(1.0, &s1w()), 0.0);
        close(expected_welfare_no_collusion(0.0, &s1w()), 5.0);
        close(expected_welfare_no_collusion(0.3, &s1w()), 3.5);
    }

    #[test]
    fn thresholds() {
        close(collusion_threshold(0.0, &s1w()), 1.0 / 3.0);
        close(collusion_threshold(1.0, &s1w()), 0.5);
        close(collusion_threshold(0.5, &s1w()), 3.0 / 7.0);
        let (lo, hi) = threshold_extremes(&WelfareProfile::new(0.0, 1.0, 2.0, 3.0, 4.0));
        close(lo, 0.5);
        close(hi, 2.0 / 3.0);
    }

    #[test]
    fn benefit_of_inspection() {
        close(inspection_benefit(0.5, 0.0, 10.0).value, 0.0);
        close(inspection_benefit(0.5, 1.0, 10.0).value, 5.0);
        close(inspection_benefit(0.5, 0.25, 10.0).value, 2.0);
        let degenerate = inspection_benefit(0.0, 0.0, 10.0);
        assert!(degenerate.degenerate);
        assert_eq!(degenerate.value, 0.0);
    }

    #[test]
    fn mixed_eta() {
        close(mixed_violation_probability(0.5, 10.0, 2.0).unwrap(), 0.25);
        close(mixed_violation_probability(0.3, 10.0, 2.0).unwrap(), 3.0 / 28.0);
        assert!(mixed_violation_probability(1e-9, 10.0, 2.0).unwrap() < 1e-9);
        assert!(matches!(
            mixed_violation_probability(0.8, 10.0, 2.0),
            Err(EquilibriumError::NoInteriorMixed { .. })
        ));
        assert!(mixed_violation_probability(0.5, 10.0, 0.0).is_err());
    }

    #[test]
    fn mixed_threshold() {
        close(mixed_collusion_threshold(&s1w(), 10.0, 2.0), 4.0 / 11.0);
        close(mixed_collusion_threshold(&s1w(), 10.0, 1e-12), 1.0 / 3.0);
    }

    #[test]
    fn ratio() {
        close(incentive_ratio(&s1w(), 10.0, 2.0), 4.0);
        close(incentive_ratio(&s1w(), 0.5, 0.4), 0.25);
        close(incentive_ratio(&s1w(), 4.0, 2.0), 1.0);
        assert_eq!(incentive_ratio(&s1w(), 4.0, 0.0), f64::INFINITY);
    }

    #[test]
    fn inspector_mix() {
        let firms = FirmPayoffs::new(1.0, 2.0, 4.0, 3.0, 5.0);
        close(inspector_mixing_probability(&firms, 5.0).unwrap(), 0.4);
        assert!(inspector_mixing_probability(&firms, 2.0).is_err());
        let tame = FirmPayoffs::new(1.0, 2.0, 4.0, 3.0, 3.0);
        assert!(inspector_mixing_probability(&tame, 5.0).is_err());
    }

    #[test]
    fn classify_reference_beliefs() {
        let high = classify_equilibrium(&s1(0.9));
        assert_eq!(high.regime, Regime::PureAlwaysViolate);
        assert_eq!(high.eta, Some(1.0));
        assert_eq!(high.inspector, InspectorBehavior::NeverInvestigate);

        let mid = classify_equilibrium(&s1(0.5));
        assert_eq!(mid.regime, Regime::MixedViolation);
        close(mid.eta.unwrap(), 0.25);
        assert_eq!(mid.inspector, InspectorBehavior::Indifferent);

        let low = classify_equilibrium(&s1(0.3));
        assert_eq!(low.regime, Regime::NoCollusion);
        assert_eq!(low.eta, None);
        close(low.diagnostics.continuation_eta, 3.0 / 28.0);
        close(expected_welfare_collusion(0.3, 3.0 / 28.0, &s1w()), 3.325);
    }

    #[test]
    fn ties_and_bounds() {
        let at_bound = classify_equilibrium(&s1(0.8));
        assert_eq!(at_bound.regime, Regime::PureAlwaysViolate);
        assert_eq!(at_bound.boundary, Some(Boundary::InvestigateBound));

        let threshold = mixed_collusion_threshold(&s1w(), 10.0, 2.0);
        let tie = classify_equilibrium(&s1(threshold));
        assert_eq!(tie.regime, Regime::NoCollusion);
        assert_eq!(tie.boundary, Some(Boundary::CollusionThreshold));
    }

    #[test]
    fn weak_incentive_uses_rho_h() {
        // S2 enforcement: ratio 0.25, (g-d)/g = 0.2, rho_H = 0.5
        let spec = ScenarioSpec {
            welfare: s1w(),
            enforcement: EnforcementParams::new(0.5, 0.4, 2),
            firms: FirmPayoffs::new(1.0, 2.0, 4.0, 3.0, 3.1),
            rho: 0.6,
            weights: SocialWeights::new(0.5, 0.5),
        };
        let s = spec.validate().unwrap();
        assert_eq!(classify_equilibrium(&s).regime, Regime::PureAlwaysViolate);
        let s = s.with_rho(0.45).unwrap();
        assert_eq!(classify_equilibrium(&s).regime, Regime::NoCollusion);
        let s = s.with_rho(0.5).unwrap();
        let tie = classify_equilibrium(&s);
        assert_eq!(tie.regime, Regime::NoCollusion);
        assert_eq!(tie.boundary, Some(Boundary::CollusionThreshold));
        let s = s.with_rho(0.1).unwrap();
        assert_eq!(classify_equilibrium(&s).regime, Regime::NoCollusion);
    }

    #[test]
    fn costless_investigation() {
        let mut spec = *s1(0.5).spec();
        spec.enforcement.d = 0.0;
        let s = spec.validate().unwrap();
        let out = classify_equilibrium(&s);
        assert_eq!(out.regime, Regime::ViolationDeterred);
        assert_eq!(out.eta, Some(0.0));
        assert!(out.diagnostics.incentive_ratio.is_infinite());
        let s = s.with_rho(0.3).unwrap();
        assert_eq!(classify_equilibrium(&s).regime, Regime::NoCollusion);
    }
}
