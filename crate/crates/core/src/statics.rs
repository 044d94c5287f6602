//! Comparative statics by central finite differences.
//!
//! Each threshold is treated as a black-box function of one parameter and
//! differentiated numerically; the sign is then compared with the sign
//! the model predicts. Perturbed scenarios are re-validated, so a step
//! that would break the welfare ordering is reported as an error rather
//! than silently evaluated.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::equilibrium::{
    collusion_threshold, incentive_ratio, mixed_collusion_threshold, mixed_violation_probability, threshold_extremes,
    EquilibriumError,
};
use crate::model::{validate_scenario, Scenario, ScenarioSpec, ValidationErrors, WelfareProfile};

/// Quantity being differentiated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Target {
    RhoL,
    RhoH,
    RhoStarMixed,
    EtaMixed,
    /// `rho*(eta)` at a fixed violation probability.
    RhoStarOfEta {
        eta: f64,
    },
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::RhoL => "rho_L",
            Target::RhoH => "rho_H",
            Target::RhoStarMixed => "rho_star_mixed",
            Target::EtaMixed => "eta_mixed",
            Target::RhoStarOfEta { .. } => "rho_star_of_eta",
        }
    }

    /// Value of the target at `s` (and `eta` for [`Target::RhoStarOfEta`]).
    pub fn evaluate(&self, s: &Scenario) -> Result<f64, StaticsError> {
        let w = s.welfare();
        let e = s.enforcement();
        Ok(match *self {
            Target::RhoL => threshold_extremes(w).0,
            Target::RhoH => threshold_extremes(w).1,
            Target::RhoStarMixed => mixed_collusion_threshold(w, e.g, e.d),
            Target::EtaMixed => mixed_violation_probability(s.rho(), e.g, e.d)?,
            Target::RhoStarOfEta { eta } => collusion_threshold(eta, w),
        })
    }
}

/// Parameter being perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parameter {
    WD,
    WH,
    WHPrime,
    WL,
    WG,
    /// The inspector's incentive `(g-d)/d`, moved by perturbing `d` with `g` fixed.
    GdRatio,
    Rho,
    Eta,
}

impl Parameter {
    pub const WELFARE: [Parameter; 5] = [
        Parameter::WD,
        Parameter::WH,
        Parameter::WHPrime,
        Parameter::WL,
        Parameter::WG,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Parameter::WD => "w_D",
            Parameter::WH => "w_H",
            Parameter::WHPrime => "w_H_prime",
            Parameter::WL => "w_L",
            Parameter::WG => "w_G",
            Parameter::GdRatio => "(g-d)/d",
            Parameter::Rho => "rho",
            Parameter::Eta => "eta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::NotApplicable
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticsReport {
    pub target: Target,
    pub parameter: Parameter,
    pub step: f64,
    pub estimate: f64,
    pub claimed_sign: Sign,
    /// True when there is no claim, or when the estimate has the claimed sign.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StaticsError {
    #[error("step must be positive and finite (got {0})")]
    BadStep(f64),
    #[error("{target} does not depend on {parameter}")]
    Unsupported {
        target: &'static str,
        parameter: &'static str,
    },
    #[error("perturbing {parameter} by {offset:+} breaks the scenario: {errors}")]
    Invalid {
        parameter: &'static str,
        offset: f64,
        errors: ValidationErrors,
    },
    #[error("eta {0} leaves [0, 1]")]
    EtaRange(f64),
    #[error(transparent)]
    Domain(#[from] EquilibriumError),
}

/// `max(|x| * 1e-6, 1e-9)`.
pub fn relative_step(x: f64) -> f64 {
    (x.abs() * 1e-6).max(1e-9)
}

/// Current value of the parameter that gets perturbed (for `GdRatio`, `d`).
pub fn base_value(s: &Scenario, target: &Target, parameter: Parameter) -> f64 {
    let w = s.welfare();
    match parameter {
        Parameter::WD => w.w_d,
        Parameter::WH => w.w_h,
        Parameter::WHPrime => w.w_h_prime,
        Parameter::WL => w.w_l,
        Parameter::WG => w.w_g,
        Parameter::GdRatio => s.enforcement().d,
        Parameter::Rho => s.rho(),
        Parameter::Eta => match target {
            Target::RhoStarOfEta { eta } => *eta,
            _ => f64::NAN,
        },
    }
}

/// Sign the model predicts for `d target / d parameter` at `s`.
///
/// Claims that only hold on part of the parameter space are gated: the
/// `w_L` sign of the mixed threshold needs an incentive ratio above 1, and
/// its `w_G` sign needs the threshold to be an interior probability.
pub fn claimed_sign(target: &Target, parameter: Parameter, s: &Scenario) -> Sign {
    use Parameter::*;
    use Sign::*;
    let w = s.welfare();
    let e = s.enforcement();
    match (target, parameter) {
        (Target::RhoH, WG | WD) => Positive,
        (Target::RhoH, WH | WHPrime) => Negative,
        (Target::RhoStarMixed, WD) => Positive,
        (Target::RhoStarMixed, WG) => {
            if (e.g - e.d) * w.collusion_gain() > e.d * w.violation_loss() {
                Positive
            } else {
                NotApplicable
            }
        }
        (Target::RhoStarMixed, WH | WHPrime | GdRatio) => Negative,
        (Target::RhoStarMixed, WL) => {
            if incentive_ratio(w, e.g, e.d) > 1.0 {
                Negative
            } else {
                NotApplicable
            }
        }
        (Target::EtaMixed, GdRatio) => Negative,
        (Target::EtaMixed, Rho) => Positive,
        (Target::RhoStarOfEta { .. }, Eta) => Positive,
        _ => NotApplicable,
    }
}

/// Every `(target, parameter)` pair with a sign claim, in a fixed order.
pub fn claimed_pairs(eta: f64) -> Vec<(Target, Parameter)> {
    use Parameter::*;
    let mut pairs = Vec::new();
    for p in [WG, WD, WH, WHPrime] {
        pairs.push((Target::RhoH, p));
    }
    for p in [WG, WD, WH, WHPrime, WL, GdRatio] {
        pairs.push((Target::RhoStarMixed, p));
    }
    pairs.push((Target::EtaMixed, GdRatio));
    pairs.push((Target::EtaMixed, Rho));
    pairs.push((Target::RhoStarOfEta { eta }, Eta));
    pairs
}

fn depends_on(target: &Target, parameter: Parameter) -> bool {
    use Parameter::*;
    match target {
        Target::RhoL => matches!(parameter, WD | WH | WL | WG),
        Target::RhoH => matches!(parameter, WD | WH | WHPrime | WG),
        Target::RhoStarMixed => !matches!(parameter, Rho | Eta),
        Target::EtaMixed => matches!(parameter, GdRatio | Rho),
        Target::RhoStarOfEta { .. } => parameter != GdRatio && parameter != Rho,
    }
}

fn shifted(
    s: &Scenario,
    target: &Target,
    parameter: Parameter,
    offset: f64,
) -> Result<(Scenario, Target), StaticsError> {
    let mut spec: ScenarioSpec = *s.spec();
    let mut target = *target;
    match parameter {
        Parameter::WD => spec.welfare.w_d += offset,
        Parameter::WH => spec.welfare.w_h += offset,
        Parameter::WHPrime => spec.welfare.w_h_prime += offset,
        Parameter::WL => spec.welfare.w_l += offset,
        Parameter::WG => spec.welfare.w_g += offset,
        Parameter::GdRatio => spec.enforcement.d += offset,
        Parameter::Rho => spec.rho += offset,
        Parameter::Eta => {
            if let Target::RhoStarOfEta { eta } = &mut target {
                *eta += offset;
                if !(0.0..=1.0).contains(eta) {
                    return Err(StaticsError::EtaRange(*eta));
                }
            }
        }
    }
    let scenario = validate_scenario(spec).map_err(|errors| StaticsError::Invalid {
        parameter: parameter.name(),
        offset,
        errors,
    })?;
    Ok((scenario, target))
}

/// Central difference `(F(x+h) - F(x-h)) / 2h` of `target` in `parameter`.
///
/// For [`Parameter::GdRatio`] the difference is taken in `d` and converted
/// with `d((g-d)/d)/dd = -g/d^2`; `step` is then the step in `d`.
pub fn finite_difference(
    target: &Target,
    s: &Scenario,
    parameter: Parameter,
    step: f64,
) -> Result<StaticsReport, StaticsError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(StaticsError::BadStep(step));
    }
    if !depends_on(target, parameter) {
        return Err(StaticsError::Unsupported {
            target: target.name(),
            parameter: parameter.name(),
        });
    }
    let (up, up_target) = shifted(s, target, parameter, step)?;
    let (down, down_target) = shifted(s, target, parameter, -step)?;
    let mut estimate = (up_target.evaluate(&up)? - down_target.evaluate(&down)?) / (2.0 * step);
    if parameter == Parameter::GdRatio {
        let e = s.enforcement();
        estimate /= -e.g / (e.d * e.d);
    }
    let claimed = claimed_sign(target, parameter, s);
    let agrees = claimed == Sign::NotApplicable || Sign::of(estimate) == claimed;
    Ok(StaticsReport {
        target: *target,
        parameter,
        step,
        estimate,
        claimed_sign: claimed,
        agrees,
    })
}

/// Second central difference of `rho*(eta)` in `eta`.
pub fn threshold_curvature(w: &WelfareProfile, eta: f64, step: f64) -> f64 {
    (collusion_threshold(eta + step, w) - 2.0 * collusion_threshold(eta, w) + collusion_threshold(eta - step, w))
        / (step * step)
}
