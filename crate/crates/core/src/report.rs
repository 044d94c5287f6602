//! Reports behind the command-line tool: solve, compare, sweep, statics
//! and verify, each renderable as JSON or CSV.
//!
//! All numbers are rounded to 12 significant digits before they are
//! written, so output is byte-stable across platforms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::equilibrium::{
    classify_equilibrium, expected_welfare_collusion, expected_welfare_no_collusion, EquilibriumOutcome, Regime,
};
use crate::model::{validate_scenario, Scenario};
use crate::oracle::{
    agreement, closed_form_profile, default_epsilon, game_tree_payoffs, grid_equilibrium_search, monte_carlo_estimate,
    Agreement, EquilibriumSearchResult, MonteCarloReport, OracleError, StrategyProfile,
};
use crate::policy::{compare_policies, PolicyComparison};
use crate::statics::{base_value, claimed_pairs, finite_difference, relative_step, StaticsError, StaticsReport};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Round to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Fixed-point text for a number rounded to 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        // no "-0"
        return "0".into();
    }
    format!("{r}")
}

/// A number as it appears in reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_num(self.0))
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let r = round_sig(self.0);
            serializer.serialize_f64(if r == 0.0 { 0.0 } else { r })
        } else {
            serializer.serialize_str(&fmt_num(self.0))
        }
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), fmt_num)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 csv")
}

#[derive(Debug, Clone, Serialize)]
pub struct Thresholds {
    #[serde(rename = "rho_L")]
    pub rho_l: Num,
    #[serde(rename = "rho_H")]
    pub rho_h: Num,
    pub rho_star_mixed: Num,
    pub investigate_bound: Num,
}

/// Everything `solve` prints for one scenario.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub rho: Num,
    pub regime: &'static str,
    pub collusion_allowed: bool,
    pub eta: Option<Num>,
    pub mu: Option<Num>,
    pub inspector: String,
    pub boundary: Option<String>,
    pub thresholds: Thresholds,
    pub incentive_ratio: Num,
    pub continuation_eta: Num,
    pub e_w_collusion: Num,
    pub e_w_no_collusion: Num,
}

impl SolveReport {
    pub fn new(s: &Scenario) -> Self {
        let out = classify_equilibrium(s);
        let dg = out.diagnostics;
        let profile = closed_form_profile(s, &out);
        SolveReport {
            rho: Num(s.rho()),
            regime: out.regime.as_str(),
            collusion_allowed: out.collusion_allowed,
            eta: out.eta.map(Num),
            mu: out.collusion_allowed.then_some(Num(profile.mu)),
            inspector: format!("{:?}", out.inspector),
            boundary: out.boundary.map(|b| format!("{b:?}")),
            thresholds: Thresholds {
                rho_l: Num(dg.rho_l),
                rho_h: Num(dg.rho_h),
                rho_star_mixed: Num(dg.rho_star_mixed),
                investigate_bound: Num(dg.investigate_bound),
            },
            incentive_ratio: Num(dg.incentive_ratio),
            continuation_eta: Num(dg.continuation_eta),
            e_w_collusion: Num(expected_welfare_collusion(s.rho(), dg.continuation_eta, s.welfare())),
            e_w_no_collusion: Num(expected_welfare_no_collusion(s.rho(), s.welfare())),
        }
    }

    pub const CSV_HEADER: [&'static str; 15] = [
        "rho",
        "regime",
        "collusion_allowed",
        "eta",
        "mu",
        "inspector",
        "boundary",
        "rho_L",
        "rho_H",
        "rho_star_mixed",
        "investigate_bound",
        "incentive_ratio",
        "continuation_eta",
        "e_w_collusion",
        "e_w_no_collusion",
    ];

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let t = &self.thresholds;
                let row = vec![
                    self.rho.to_string(),
                    self.regime.to_string(),
                    self.collusion_allowed.to_string(),
                    opt_num(self.eta.map(|n| n.0)),
                    opt_num(self.mu.map(|n| n.0)),
                    self.inspector.clone(),
                    self.boundary.clone().unwrap_or_default(),
                    t.rho_l.to_string(),
                    t.rho_h.to_string(),
                    t.rho_star_mixed.to_string(),
                    t.investigate_bound.to_string(),
                    self.incentive_ratio.to_string(),
                    self.continuation_eta.to_string(),
                    self.e_w_collusion.to_string(),
                    self.e_w_no_collusion.to_string(),
                ];
                to_csv(&Self::CSV_HEADER, &[row])
            }
        }
    }
}

/// `compare` output: the policy comparison in report form.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub regime: &'static str,
    pub e_pi_commitment: Num,
    pub e_pi_discretion: Num,
    pub preferred: &'static str,
    pub d_threshold: Option<Num>,
    pub margin: Num,
}

impl CompareReport {
    pub const CSV_HEADER: [&'static str; 6] = [
        "regime",
        "e_pi_commitment",
        "e_pi_discretion",
        "preferred",
        "d_threshold",
        "margin",
    ];

    pub fn new(s: &Scenario) -> Self {
        Self::from_comparison(&compare_policies(s))
    }

    pub fn from_comparison(c: &PolicyComparison) -> Self {
        CompareReport {
            regime: c.regime.as_str(),
            e_pi_commitment: Num(c.e_pi_commitment),
            e_pi_discretion: Num(c.e_pi_discretion),
            preferred: c.preferred.as_str(),
            d_threshold: c.d_threshold.map(Num),
            margin: Num(c.margin),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => to_csv(
                &Self::CSV_HEADER,
                &[vec![
                    self.regime.to_string(),
                    self.e_pi_commitment.to_string(),
                    self.e_pi_discretion.to_string(),
                    self.preferred.to_string(),
                    opt_num(self.d_threshold.map(|n| n.0)),
                    self.margin.to_string(),
                ]],
            ),
        }
    }

    pub fn verdict(&self) -> String {
        format!(
            "preferred={} margin={} regime={}",
            self.preferred, self.margin, self.regime
        )
    }
}

/// Scenario field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Rho,
    D,
    G,
    WD,
    WH,
    WHPrime,
    WL,
    WG,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Rho => "rho",
            SweepParam::D => "d",
            SweepParam::G => "g",
            SweepParam::WD => "w_D",
            SweepParam::WH => "w_H",
            SweepParam::WHPrime => "w_H_prime",
            SweepParam::WL => "w_L",
            SweepParam::WG => "w_G",
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "rho" => SweepParam::Rho,
            "d" => SweepParam::D,
            "g" => SweepParam::G,
            "w_D" => SweepParam::WD,
            "w_H" => SweepParam::WH,
            "w_H_prime" => SweepParam::WHPrime,
            "w_L" => SweepParam::WL,
            "w_G" => SweepParam::WG,
            other => {
                return Err(format!(
                    "cannot sweep {other:?} (expected rho, d, g, w_D, w_H, w_H_prime, w_L or w_G)"
                ))
            }
        })
    }
}

/// Column groups a sweep can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOutput {
    Regime,
    Eta,
    Thresholds,
    Welfares,
    PolicyPreference,
}

impl SweepOutput {
    pub const DEFAULT: [SweepOutput; 4] = [
        SweepOutput::Regime,
        SweepOutput::Eta,
        SweepOutput::Welfares,
        SweepOutput::PolicyPreference,
    ];

    fn columns(self) -> &'static [&'static str] {
        match self {
            SweepOutput::Regime => &["regime"],
            SweepOutput::Eta => &["eta"],
            SweepOutput::Thresholds => &["rho_L", "rho_H", "rho_star_mixed", "investigate_bound"],
            SweepOutput::Welfares => &["e_w_collusion", "e_w_no_collusion"],
            SweepOutput::PolicyPreference => &["preferred_policy"],
        }
    }
}

impl FromStr for SweepOutput {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "regime" => SweepOutput::Regime,
            "eta" => SweepOutput::Eta,
            "thresholds" => SweepOutput::Thresholds,
            "welfares" => SweepOutput::Welfares,
            "policy_preference" => SweepOutput::PolicyPreference,
            other => {
                return Err(format!(
                    "unknown sweep output {other:?} (expected regime, eta, thresholds, welfares or policy_preference)"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub outputs: Vec<SweepOutput>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep range must satisfy from < to (got {from} .. {to})")]
    EmptyRange { from: f64, to: f64 },
    #[error("a sweep needs at least 2 steps (got {0})")]
    TooFewSteps(usize),
}

impl SweepSpec {
    pub fn new(parameter: SweepParam, from: f64, to: f64, steps: usize) -> Result<Self, SweepError> {
        if !(from < to) {
            return Err(SweepError::EmptyRange { from, to });
        }
        if steps < 2 {
            return Err(SweepError::TooFewSteps(steps));
        }
        Ok(SweepSpec {
            parameter,
            from,
            to,
            steps,
            outputs: SweepOutput::DEFAULT.to_vec(),
        })
    }

    pub fn with_outputs(mut self, outputs: Vec<SweepOutput>) -> Self {
        if !outputs.is_empty() {
            self.outputs = outputs;
        }
        self
    }

    /// Evenly spaced values, ending exactly on `to`.
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / last as f64
                }
            })
            .collect()
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["param_value"];
        for o in &self.outputs {
            h.extend_from_slice(o.columns());
        }
        h.push("skip_reason");
        h
    }
}

/// One row of a sweep, before formatting.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<(EquilibriumOutcome, PolicyComparison, f64, f64), String>,
}

/// Evaluate every grid point of a sweep. Points that do not form a valid
/// scenario are kept with the reason they were skipped.
pub fn sweep_points(base: &Scenario, spec: &SweepSpec) -> Vec<SweepPoint> {
    spec.values()
        .into_iter()
        .map(|value| {
            let mut raw = *base.spec();
            match spec.parameter {
                SweepParam::Rho => raw.rho = value,
                SweepParam::D => raw.enforcement.d = value,
                SweepParam::G => raw.enforcement.g = value,
                SweepParam::WD => raw.welfare.w_d = value,
                SweepParam::WH => raw.welfare.w_h = value,
                SweepParam::WHPrime => raw.welfare.w_h_prime = value,
                SweepParam::WL => raw.welfare.w_l = value,
                SweepParam::WG => raw.welfare.w_g = value,
            }
            let result = match validate_scenario(raw) {
                Ok(s) => {
                    let out = classify_equilibrium(&s);
                    let wc = expected_welfare_collusion(s.rho(), out.diagnostics.continuation_eta, s.welfare());
                    let wnc = expected_welfare_no_collusion(s.rho(), s.welfare());
                    Ok((out, compare_policies(&s), wc, wnc))
                }
                Err(errs) => Err(errs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")),
            };
            SweepPoint { value, result }
        })
        .collect()
}

/// Sweep rendered as CSV.
pub fn run_sweep(base: &Scenario, spec: &SweepSpec) -> String {
    let header = spec.header();
    let rows: Vec<Vec<String>> = sweep_points(base, spec)
        .into_iter()
        .map(|point| {
            let mut row = vec![fmt_num(point.value)];
            match &point.result {
                Ok((out, cmp, wc, wnc)) => {
                    for o in &spec.outputs {
                        match o {
                            SweepOutput::Regime => row.push(out.regime.as_str().to_string()),
                            SweepOutput::Eta => row.push(opt_num(out.eta)),
                            SweepOutput::Thresholds => {
                                let d = &out.diagnostics;
                                for x in [d.rho_l, d.rho_h, d.rho_star_mixed, d.investigate_bound] {
                                    row.push(fmt_num(x));
                                }
                            }
                            SweepOutput::Welfares => {
                                row.push(fmt_num(*wc));
                                row.push(fmt_num(*wnc));
                            }
                            SweepOutput::PolicyPreference => row.push(cmp.preferred.as_str().to_string()),
                        }
                    }
                    row.push(String::new());
                }
                Err(reason) => {
                    row.extend(std::iter::repeat_n(String::new(), header.len() - 2));
                    row.push(reason.clone());
                }
            }
            row
        })
        .collect();
    to_csv(&header, &rows)
}

/// Finite-difference check of every claimed sign at one scenario.
///
/// Returns the computed rows and, separately, the pairs that could not be
/// evaluated (for instance the mixed violation probability when the belief
/// is above `(g-d)/g`).
pub fn run_statics(s: &Scenario, eta: f64) -> (Vec<StaticsReport>, Vec<(String, StaticsError)>) {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (target, parameter) in claimed_pairs(eta) {
        let step = relative_step(base_value(s, &target, parameter));
        match finite_difference(&target, s, parameter, step) {
            Ok(r) => rows.push(r),
            Err(e) => skipped.push((format!("{}/{}", target.name(), parameter.name()), e)),
        }
    }
    (rows, skipped)
}

pub const STATICS_HEADER: [&str; 6] = ["target", "parameter", "step", "estimate", "claimed_sign", "agrees"];

pub fn render_statics(rows: &[StaticsReport], format: Format) -> String {
    match format {
        Format::Csv => to_csv(
            &STATICS_HEADER,
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.target.name().to_string(),
                        r.parameter.name().to_string(),
                        fmt_num(r.step),
                        fmt_num(r.estimate),
                        r.claimed_sign.to_string(),
                        r.agrees.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                target: &'static str,
                parameter: &'static str,
                step: Num,
                estimate: Num,
                claimed_sign: String,
                agrees: bool,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    target: r.target.name(),
                    parameter: r.parameter.name(),
                    step: Num(r.step),
                    estimate: Num(r.estimate),
                    claimed_sign: r.claimed_sign.to_string(),
                    agrees: r.agrees,
                })
                .collect();
            to_json(&rows)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub grid_n: usize,
    /// `None` uses [`default_epsilon`].
    pub epsilon: Option<f64>,
    pub n_samples: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid_n: 200,
            epsilon: None,
            n_samples: 100_000,
            seed: 42,
        }
    }
}

/// Allowed distance of a Monte-Carlo mean from the exact value, in
/// standard errors.
pub const MC_STD_ERRORS: f64 = 4.0;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub claimed_regime: &'static str,
    pub claimed_profile: StrategyProfile,
    pub grid: Agreement,
    /// Largest gap between the tree's regulator welfare and the closed-form
    /// expectations, with and without collusion.
    pub tree_gap: f64,
    pub tree_agrees: bool,
    pub monte_carlo: MonteCarloReport,
    pub monte_carlo_agrees: bool,
    pub search: EquilibriumSearchResult,
    pub passes: bool,
}

impl VerifyReport {
    pub fn render(&self) -> String {
        to_json(self)
    }

    /// Human-readable summary of what disagreed.
    pub fn diff(&self) -> String {
        let mut lines = Vec::new();
        let g = &self.grid;
        if !g.agrees {
            lines.push(format!(
                "grid: claimed (allow={}, eta={}, mu={}), nearest {:?} at distance {}, best {:?}, contrary decisions {}, pure-firm profiles {}",
                g.claimed.allow_collusion,
                fmt_num(g.claimed.eta),
                fmt_num(g.claimed.mu),
                g.nearest,
                g.nearest_distance.map_or("none".to_string(), fmt_num),
                g.best,
                g.contrary_decisions,
                g.pure_firm_profiles,
            ));
        }
        if !self.tree_agrees {
            lines.push(format!(
                "game tree vs closed-form welfare: gap {}",
                fmt_num(self.tree_gap)
            ));
        }
        if !self.monte_carlo_agrees {
            lines.push(format!(
                "monte carlo: means ({}, {}, {}) off the exact payoffs by more than {MC_STD_ERRORS} standard errors",
                fmt_num(self.monte_carlo.regulator_welfare.mean),
                fmt_num(self.monte_carlo.firm_payoff.mean),
                fmt_num(self.monte_carlo.inspector_payoff.mean),
            ));
        }
        lines.join("\n")
    }
}

/// Check a claimed equilibrium against the brute-force oracle.
pub fn verify_claim(
    s: &Scenario,
    claimed: &EquilibriumOutcome,
    opts: &VerifyOptions,
) -> Result<VerifyReport, OracleError> {
    let epsilon = opts.epsilon.unwrap_or_else(|| default_epsilon(s, opts.grid_n));
    let search = grid_equilibrium_search(s, opts.grid_n, epsilon)?;
    let grid = agreement(s, claimed, &search);
    let profile = grid.claimed;

    let rho = s.rho();
    let w = s.welfare();
    let with = game_tree_payoffs(
        s,
        &StrategyProfile {
            allow_collusion: true,
            ..profile
        },
    );
    let without = game_tree_payoffs(
        s,
        &StrategyProfile {
            allow_collusion: false,
            ..profile
        },
    );
    let tree_gap = (with.regulator_welfare - expected_welfare_collusion(rho, profile.eta, w))
        .abs()
        .max((without.regulator_welfare - expected_welfare_no_collusion(rho, w)).abs());
    let tree_agrees = tree_gap <= 1e-12;

    let exact = game_tree_payoffs(s, &profile);
    let monte_carlo = monte_carlo_estimate(s, &profile, opts.n_samples, opts.seed)?;
    let monte_carlo_agrees = [
        (monte_carlo.regulator_welfare, exact.regulator_welfare),
        (monte_carlo.firm_payoff, exact.firm_payoff),
        (monte_carlo.inspector_payoff, exact.inspector_payoff),
    ]
    .iter()
    .all(|(est, x)| (est.mean - x).abs() <= MC_STD_ERRORS * est.std_error + 1e-12);

    let passes = grid.agrees && tree_agrees && monte_carlo_agrees;
    Ok(VerifyReport {
        claimed_regime: claimed.regime.as_str(),
        claimed_profile: profile,
        grid,
        tree_gap,
        tree_agrees,
        monte_carlo,
        monte_carlo_agrees,
        search,
        passes,
    })
}

/// An equilibrium claim read from a file, checked by `verify --claim`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub regime: Regime,
    pub collusion_allowed: bool,
    pub eta: Option<f64>,
}

impl Claim {
    /// The computed outcome with the claimed regime, decision and `eta`
    /// substituted.
    pub fn apply(&self, computed: &EquilibriumOutcome) -> EquilibriumOutcome {
        let mut out = *computed;
        out.regime = self.regime;
        out.collusion_allowed = self.collusion_allowed;
        out.eta = self.eta;
        if let Some(eta) = self.eta {
            out.diagnostics.continuation_eta = eta;
        }
        out
    }
}

/// Check the closed-form equilibrium of `s` against the oracle.
pub fn run_verify(s: &Scenario, opts: &VerifyOptions) -> Result<VerifyReport, OracleError> {
    verify_claim(s, &classify_equilibrium(s), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(4.0 / 11.0), "0.363636363636");
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1234567.891234567), "1234567.89123");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(0.8000000000000002), "0.8");
    }

    #[test]
    fn sweep_grid_ends_on_to() {
        let spec = SweepSpec::new(SweepParam::Rho, 0.05, 0.95, 19).unwrap();
        let v = spec.values();
        assert_eq!(v.len(), 19);
        assert_eq!(v[0], 0.05);
        assert_eq!(v[18], 0.95);
        assert_eq!(
            SweepSpec::new(SweepParam::Rho, 0.0, 1.0, 2).unwrap().values(),
            vec![0.0, 1.0]
        );
    }

    #[test]
    fn sweep_spec_rejects_bad_ranges() {
        assert!(SweepSpec::new(SweepParam::Rho, 0.5, 0.5, 3).is_err());
        assert!(SweepSpec::new(SweepParam::Rho, 0.1, 0.5, 1).is_err());
        assert!("x".parse::<SweepParam>().is_err());
        assert_eq!("w_H_prime".parse::<SweepParam>(), Ok(SweepParam::WHPrime));
    }

    #[test]
    fn header_follows_outputs() {
        let spec = SweepSpec::new(SweepParam::D, 0.1, 1.0, 2)
            .unwrap()
            .with_outputs(vec![SweepOutput::Eta, SweepOutput::Thresholds]);
        assert_eq!(
            spec.header(),
            vec![
                "param_value",
                "eta",
                "rho_L",
                "rho_H",
                "rho_star_mixed",
                "investigate_bound",
                "skip_reason"
            ]
        );
    }

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

    fn regimes(points: &[SweepPoint]) -> Vec<(f64, Regime)> {
        points
            .iter()
            .map(|p| (p.value, p.result.as_ref().unwrap().0.regime))
            .collect()
    }

    #[test]
    fn rho_sweep_brackets_boundaries() {
        let spec = SweepSpec::new(SweepParam::Rho, 0.05, 0.95, 19).unwrap();
        let r = regimes(&sweep_points(&s1(0.5), &spec));
        let switch = |a: Regime, b: Regime| {
            r.windows(2)
                .find(|w| w[0].1 == a && w[1].1 == b)
                .map(|w| (w[0].0, w[1].0))
        };
        let (lo, hi) = switch(Regime::NoCollusion, Regime::MixedViolation).unwrap();
        assert!(lo < 4.0 / 11.0 && 4.0 / 11.0 < hi && hi - lo < 0.05 + 1e-12);
        let (lo, hi) = switch(Regime::MixedViolation, Regime::PureAlwaysViolate).unwrap();
        assert!(lo < 0.8 && 0.8 <= hi && hi - lo < 0.05 + 1e-12);
    }

    #[test]
    fn eta_rises_with_cost_in_mixed_regime() {
        let spec = SweepSpec::new(SweepParam::D, 0.1, 9.9, 50).unwrap();
        let etas: Vec<f64> = sweep_points(&s1(0.5), &spec)
            .iter()
            .filter_map(|p| p.result.as_ref().ok())
            .filter(|(o, ..)| o.regime == Regime::MixedViolation)
            .map(|(o, ..)| o.eta.unwrap())
            .collect();
        assert!(etas.len() > 10);
        assert!(etas.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn two_steps_two_rows() {
        let spec = SweepSpec::new(SweepParam::G, 5.0, 6.0, 2).unwrap();
        assert_eq!(run_sweep(&s1(0.5), &spec).lines().count(), 3);
    }

    #[test]
    fn trivial_comparison_has_zero_margin() {
        let c = CompareReport::new(&s1(0.2));
        assert_eq!(c.regime, "TrivialNoCollusion");
        assert_eq!(c.margin.0, 0.0);
        assert_eq!(c.verdict(), "preferred=Indifferent margin=0 regime=TrivialNoCollusion");
    }
}
