//! Equilibrium engine for a game in which a competition regulator may
//! exempt a price-fixing agreement that funds a clean-technology
//! transition.
//!
//! The transition cost is the firms' private information: high with
//! probability `rho`, low otherwise. If the regulator allows collusion,
//! firms facing a low cost may still set the high price (a violation). An
//! inspector who sees a high price can pay `d` to investigate and collect
//! a total fine `g` if a violation is found.
//!
//! * [`model`]: parameter types and scenario validation.
//! * [`equilibrium`]: expected welfare, collusion thresholds and the
//!   equilibrium classifier.
//! * [`statics`]: finite-difference checks of how thresholds move.
//! * [`policy`]: commitment to always investigate versus discretion.
//! * [`oracle`]: game-tree payoffs, grid search for ε-equilibria and
//!   Monte-Carlo estimation, none of which use the closed forms.
//! * [`report`]: the reports behind the `greenfix` command-line tool.
//!
//! ```
//! use greenfix::model::*;
//! use greenfix::equilibrium::{classify_equilibrium, Regime};
//!
//! let scenario = ScenarioSpec {
//!     welfare: WelfareProfile::new(0.0, 2.0, 3.0, 4.0, 5.0),
//!     enforcement: EnforcementParams::new(10.0, 2.0, 2),
//!     firms: FirmPayoffs::new(1.0, 2.0, 4.0, 3.0, 5.0),
//!     rho: 0.5,
//!     weights: SocialWeights::new(0.5, 0.5),
//! }
//! .validate()
//! .unwrap();
//!
//! let outcome = classify_equilibrium(&scenario);
//! assert_eq!(outcome.regime, Regime::MixedViolation);
//! assert!((outcome.eta.unwrap() - 0.25).abs() < 1e-12);
//! ```

pub mod equilibrium;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod report;
pub mod statics;

pub use equilibrium::{classify_equilibrium, EquilibriumOutcome, Regime};
pub use model::{validate_scenario, Scenario, ScenarioSpec};

// The guide's code listings are compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/equilibria.md")]
    mod equilibria {}
    #[doc = include_str!("../../../book/src/statics.md")]
    mod statics {}
    #[doc = include_str!("../../../book/src/policy.md")]
    mod policy {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
