//! Parameter types for the exemption game and their validation.
//!
//! A scenario is read in its raw form ([`ScenarioSpec`], the JSON schema)
//! and turned into a [`Scenario`] by [`validate_scenario`], which checks
//! every constraint at once and reports all violations together.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `delta1 + delta2 = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Regulator welfare in each terminal outcome.
///
/// | level       | cost | collusion | price |
/// |-------------|------|-----------|-------|
/// | `w_d`       | high | blocked   | (dirty technology) |
/// | `w_g`       | low  | blocked   | (green technology) |
/// | `w_h`       | high | allowed   | high  |
/// | `w_l`       | low  | allowed   | low   |
/// | `w_h_prime` | low  | allowed   | high (violation) |
///
/// A valid profile satisfies `w_d < w_h < w_h_prime < w_l < w_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WelfareProfile {
    #[serde(rename = "w_D")]
    pub w_d: f64,
    #[serde(rename = "w_H")]
    pub w_h: f64,
    #[serde(rename = "w_H_prime")]
    pub w_h_prime: f64,
    #[serde(rename = "w_L")]
    pub w_l: f64,
    #[serde(rename = "w_G")]
    pub w_g: f64,
}

impl WelfareProfile {
    pub fn new(w_d: f64, w_h: f64, w_h_prime: f64, w_l: f64, w_g: f64) -> Self {
        Self {
            w_d,
            w_h,
            w_h_prime,
            w_l,
            w_g,
        }
    }

    /// Welfare gain of collusion when the cost is high, `w_H - w_D`.
    pub fn collusion_gain(&self) -> f64 {
        self.w_h - self.w_d
    }

    /// Welfare loss from a violation, `w_L - w'_H`.
    pub fn violation_loss(&self) -> f64 {
        self.w_l - self.w_h_prime
    }

    fn errors(&self, out: &mut Vec<ValidationError>) {
        let fields = [
            ("w_D", self.w_d),
            ("w_H", self.w_h),
            ("w_H_prime", self.w_h_prime),
            ("w_L", self.w_l),
            ("w_G", self.w_g),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                out.push(ValidationError::NonFinite { field: name, value });
            }
        }
        for pair in fields.windows(2) {
            let (lo_name, lo) = pair[0];
            let (hi_name, hi) = pair[1];
            if lo.is_finite() && hi.is_finite() && lo >= hi {
                out.push(ValidationError::WelfareOrder {
                    lower: lo_name,
                    upper: hi_name,
                    lo,
                    hi,
                });
            }
        }
    }
}

/// Fine and investigation cost.
///
/// `g` is the total fine, split equally over the `n` firms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnforcementParams {
    pub g: f64,
    pub d: f64,
    pub n: i64,
}

impl EnforcementParams {
    pub fn new(g: f64, d: f64, n: i64) -> Self {
        Self { g, d, n }
    }

    /// Per-firm fine `g / n`.
    pub fn f(&self) -> f64 {
        self.g / self.n as f64
    }

    /// `(g - d) / g`: above this belief the inspector will not investigate
    /// even if firms always violate.
    pub fn investigate_bound(&self) -> f64 {
        (self.g - self.d) / self.g
    }

    fn errors(&self, out: &mut Vec<ValidationError>) {
        for (name, value) in [("g", self.g), ("d", self.d)] {
            if !value.is_finite() {
                out.push(ValidationError::NonFinite { field: name, value });
            }
        }
        if self.n < 1 {
            out.push(ValidationError::FirmCount(self.n));
        }
        if self.d.is_finite() && self.d < 0.0 {
            out.push(ValidationError::NegativeCost(self.d));
        }
        if self.g.is_finite() && self.d.is_finite() && self.g <= self.d {
            out.push(ValidationError::FineNotAboveCost { g: self.g, d: self.d });
        }
    }
}

/// Payoffs of a representative firm (firms are symmetric).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FirmPayoffs {
    #[serde(rename = "v_D")]
    pub v_d: f64,
    #[serde(rename = "v_G")]
    pub v_g: f64,
    #[serde(rename = "v_H")]
    pub v_h: f64,
    #[serde(rename = "v_L")]
    pub v_l: f64,
    #[serde(rename = "v_H_prime")]
    pub v_h_prime: f64,
}

impl FirmPayoffs {
    pub fn new(v_d: f64, v_g: f64, v_h: f64, v_l: f64, v_h_prime: f64) -> Self {
        Self {
            v_d,
            v_g,
            v_h,
            v_l,
            v_h_prime,
        }
    }

    /// What a firm gains by violating when it is never caught, `v'_H - v_L`.
    pub fn violation_gain(&self) -> f64 {
        self.v_h_prime - self.v_l
    }

    fn errors(&self, out: &mut Vec<ValidationError>) {
        let fields = [
            ("v_D", self.v_d),
            ("v_G", self.v_g),
            ("v_H", self.v_h),
            ("v_L", self.v_l),
            ("v_H_prime", self.v_h_prime),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                out.push(ValidationError::NonFinite { field: name, value });
            }
        }
        if self.v_l.is_finite() && self.v_h_prime.is_finite() && self.v_h_prime <= self.v_l {
            out.push(ValidationError::NoViolationTemptation {
                v_l: self.v_l,
                v_h_prime: self.v_h_prime,
            });
        }
    }
}

/// Prior probability that the transition cost is high.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Belief(pub f64);

impl Belief {
    pub fn rho(self) -> f64 {
        self.0
    }
}

/// Weights of the social planner on regulator welfare and inspector payoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SocialWeights {
    pub delta1: f64,
    pub delta2: f64,
}

impl SocialWeights {
    pub fn new(delta1: f64, delta2: f64) -> Self {
        Self { delta1, delta2 }
    }

    fn errors(&self, out: &mut Vec<ValidationError>) {
        for (name, value) in [("delta1", self.delta1), ("delta2", self.delta2)] {
            if !value.is_finite() {
                out.push(ValidationError::NonFinite { field: name, value });
            } else if !(0.0..=1.0).contains(&value) {
                out.push(ValidationError::WeightRange { field: name, value });
            }
        }
        if self.delta1.is_finite()
            && self.delta2.is_finite()
            && ((self.delta1 + self.delta2) - 1.0).abs() > WEIGHT_SUM_TOL
        {
            out.push(ValidationError::WeightSum {
                sum: self.delta1 + self.delta2,
            });
        }
    }
}

/// Raw scenario as it appears on disk. Nothing here is checked; see
/// [`validate_scenario`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub welfare: WelfareProfile,
    pub enforcement: EnforcementParams,
    pub firms: FirmPayoffs,
    pub rho: f64,
    pub weights: SocialWeights,
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Validate this candidate. Same as [`validate_scenario`].
    pub fn validate(self) -> Result<Scenario, ValidationErrors> {
        validate_scenario(self)
    }
}

/// A scenario whose every constraint has been checked.
///
/// The only way to obtain one is through [`validate_scenario`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Scenario {
    spec: ScenarioSpec,
}

impl Scenario {
    pub fn welfare(&self) -> &WelfareProfile {
        &self.spec.welfare
    }

    pub fn enforcement(&self) -> &EnforcementParams {
        &self.spec.enforcement
    }

    pub fn firms(&self) -> &FirmPayoffs {
        &self.spec.firms
    }

    pub fn belief(&self) -> Belief {
        Belief(self.spec.rho)
    }

    pub fn rho(&self) -> f64 {
        self.spec.rho
    }

    pub fn weights(&self) -> &SocialWeights {
        &self.spec.weights
    }

    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    /// Copy of this scenario with a different belief.
    pub fn with_rho(&self, rho: f64) -> Result<Scenario, ValidationErrors> {
        let mut spec = self.spec;
        spec.rho = rho;
        validate_scenario(spec)
    }

    pub fn to_json(&self) -> String {
        self.spec.to_json()
    }
}

/// One violated constraint.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("{field} must be finite (got {value})")]
    NonFinite { field: &'static str, value: f64 },
    #[error("{lower} < {upper} violated ({lower}={lo}, {upper}={hi})")]
    WelfareOrder {
        lower: &'static str,
        upper: &'static str,
        lo: f64,
        hi: f64,
    },
    #[error("firm count n must be a positive integer (got {0})")]
    FirmCount(i64),
    #[error("investigation cost d must be nonnegative (got {0})")]
    NegativeCost(f64),
    #[error("fine must exceed investigation cost: g > d violated (g={g}, d={d})")]
    FineNotAboveCost { g: f64, d: f64 },
    #[error("no temptation to violate: v_H_prime > v_L violated (v_H_prime={v_h_prime}, v_L={v_l})")]
    NoViolationTemptation { v_l: f64, v_h_prime: f64 },
    #[error("fine below violation gain: f > v_H_prime - v_L violated (f={f}, v_H_prime - v_L={gain})")]
    FineBelowGain { f: f64, gain: f64 },
    #[error("belief rho must lie in [0, 1] (got {0})")]
    BeliefRange(f64),
    #[error("weight {field} must lie in [0, 1] (got {value})")]
    WeightRange { field: &'static str, value: f64 },
    #[error("weights must sum to 1 (got delta1 + delta2 = {sum})")]
    WeightSum { sum: f64 },
}

/// Every constraint a candidate scenario violates.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ValidationErrors(pub Vec<ValidationError>);

impl ValidationErrors {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ValidationError> {
        self.0.iter()
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} constraint(s) violated", self.0.len())?;
        for e in &self.0 {
            write!(f, "\n  - {e}")?;
        }
        Ok(())
    }
}

/// Check every constraint on a candidate scenario.
///
/// Returns the full list of violations, not just the first one. Adjacent
/// welfare levels that are equal are rejected.
pub fn validate_scenario(candidate: ScenarioSpec) -> Result<Scenario, ValidationErrors> {
    let mut errors = Vec::new();
    candidate.welfare.errors(&mut errors);
    candidate.enforcement.errors(&mut errors);
    candidate.firms.errors(&mut errors);

    let e = &candidate.enforcement;
    let gain = candidate.firms.violation_gain();
    if e.n >= 1 && e.g.is_finite() && gain.is_finite() && e.f() <= gain {
        errors.push(ValidationError::FineBelowGain { f: e.f(), gain });
    }

    let rho = candidate.rho;
    if !rho.is_finite() {
        errors.push(ValidationError::NonFinite {
            field: "rho",
            value: rho,
        });
    } else if !(0.0..=1.0).contains(&rho) {
        errors.push(ValidationError::BeliefRange(rho));
    }
    candidate.weights.errors(&mut errors);

    if errors.is_empty() {
        Ok(Scenario { spec: candidate })
    } else {
        Err(ValidationErrors(errors))
    }
}

/// Why a scenario file could not be loaded.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("invalid scenario {path}: {source}")]
    Invalid { path: String, source: ValidationErrors },
}

/// Read, parse and validate a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, LoadError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: display.clone(),
        source,
    })?;
    let spec = ScenarioSpec::from_json(&text).map_err(|source| LoadError::Parse {
        path: display.clone(),
        source,
    })?;
    validate_scenario(spec).map_err(|source| LoadError::Invalid { path: display, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> ScenarioSpec {
        ScenarioSpec {
            welfare: WelfareProfile::new(0.0, 2.0, 3.0, 4.0, 5.0),
            enforcement: EnforcementParams::new(10.0, 2.0, 2),
            firms: FirmPayoffs::new(1.0, 2.0, 4.0, 3.0, 5.0),
            rho: 0.5,
            weights: SocialWeights::new(0.5, 0.5),
        }
    }

    #[test]
    fn reference_scenario_is_valid() {
        let s = validate_scenario(s1()).unwrap();
        assert_eq!(s.enforcement().f(), 5.0);
        assert_eq!(s.enforcement().investigate_bound(), 0.8);
    }

    #[test]
    fn welfare_order_violation_is_named() {
        let mut c = s1();
        c.welfare.w_h_prime = 4.5;
        let errs = validate_scenario(c).unwrap_err();
        assert_eq!(errs.len(), 1);
        let msg = errs.0[0].to_string();
        assert!(msg.starts_with("w_H_prime < w_L violated"), "{msg}");
    }

    #[test]
    fn fine_below_gain() {
        let mut c = s1();
        // f = 3 / 2 = 1.5 against a gain of 2
        c.enforcement.g = 3.0;
        let errs = validate_scenario(c).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs.0[0].to_string().starts_with("fine below violation gain"));
    }

    #[test]
    fn equal_adjacent_welfare_rejected() {
        let mut c = s1();
        c.welfare.w_h = c.welfare.w_d;
        let errs = validate_scenario(c).unwrap_err();
        assert!(matches!(
            errs.0[0],
            ValidationError::WelfareOrder {
                lower: "w_D",
                upper: "w_H",
                ..
            }
        ));
    }

    #[test]
    fn zero_cost_accepted() {
        let mut c = s1();
        c.enforcement.d = 0.0;
        assert!(validate_scenario(c).is_ok());
    }

    #[test]
    fn all_violations_reported() {
        let mut c = s1();
        c.welfare.w_g = 3.5; // w_L < w_G
        c.enforcement.d = 20.0; // g > d
        c.rho = 1.5;
        c.weights.delta2 = 0.6; // sum
        c.enforcement.n = 0;
        let errs = validate_scenario(c).unwrap_err();
        assert_eq!(errs.len(), 5, "{errs}");
    }

    #[test]
    fn non_finite_values_do_not_cascade() {
        let mut c = s1();
        c.welfare.w_l = f64::NAN;
        let errs = validate_scenario(c).unwrap_err();
        assert_eq!(errs.len(), 1, "{errs}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"welfare":{"w_D":0,"w_H":2,"w_H_prime":3,"w_L":4,"w_G":5},
            "enforcement":{"g":10,"d":2,"n":2},
            "firms":{"v_D":1,"v_G":2,"v_H":4,"v_L":3,"v_H_prime":5},
            "rho":0.5,"weights":{"delta1":0.5,"delta2":0.5},"rhoo":1}"#;
        assert!(ScenarioSpec::from_json(text).is_err());
        let typo = text.replace("\"w_G\"", "\"wG\"").replace(",\"rhoo\":1", "");
        assert!(ScenarioSpec::from_json(&typo).is_err());
        let ok = text.replace(",\"rhoo\":1", "");
        assert_eq!(ScenarioSpec::from_json(&ok).unwrap(), s1());
    }

    #[test]
    fn json_round_trip() {
        let spec = s1();
        assert_eq!(ScenarioSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}
