#![allow(dead_code)]

use std::path::PathBuf;

use greenfix::model::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn s1_spec(rho: f64) -> ScenarioSpec {
    ScenarioSpec {
        welfare: WelfareProfile::new(0.0, 2.0, 3.0, 4.0, 5.0),
        enforcement: EnforcementParams::new(10.0, 2.0, 2),
        firms: FirmPayoffs::new(1.0, 2.0, 4.0, 3.0, 5.0),
        rho,
        weights: SocialWeights::new(0.5, 0.5),
    }
}

pub fn s1(rho: f64) -> Scenario {
    s1_spec(rho).validate().unwrap()
}

/// S1 welfare with weak enforcement (g = 0.5, d = 0.4); the firm's
/// violation gain is cut to 0.1 so that the per-firm fine 0.25 still
/// exceeds it.
pub fn s2(rho: f64) -> Scenario {
    let mut spec = s1_spec(rho);
    spec.enforcement = EnforcementParams::new(0.5, 0.4, 2);
    spec.firms.v_h_prime = 3.1;
    spec.validate().unwrap()
}

/// Seeded source of valid random scenarios.
pub struct ScenarioGen {
    rng: ChaCha8Rng,
}

impl ScenarioGen {
    pub fn new(seed: u64) -> Self {
        ScenarioGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn welfare(&mut self) -> WelfareProfile {
        let w_d = self.uniform(-5.0, 5.0);
        let w_h = w_d + self.uniform(0.1, 5.0);
        let w_h_prime = w_h + self.uniform(0.1, 5.0);
        let w_l = w_h_prime + self.uniform(0.1, 5.0);
        let w_g = w_l + self.uniform(0.1, 5.0);
        WelfareProfile::new(w_d, w_h, w_h_prime, w_l, w_g)
    }

    /// A valid scenario with a uniformly drawn belief.
    pub fn scenario(&mut self) -> Scenario {
        let welfare = self.welfare();
        let g = self.uniform(1.0, 20.0);
        let d = g * self.uniform(0.02, 0.9);
        let n = self.rng.random_range(1..=5);
        let f = g / n as f64;
        let v_l = self.uniform(-5.0, 5.0);
        let v_h_prime = v_l + f * self.uniform(0.05, 0.95);
        let firms = FirmPayoffs::new(
            self.uniform(-5.0, 5.0),
            self.uniform(-5.0, 5.0),
            self.uniform(-5.0, 5.0),
            v_l,
            v_h_prime,
        );
        let delta1 = self.uniform(0.0, 1.0);
        ScenarioSpec {
            welfare,
            enforcement: EnforcementParams::new(g, d, n),
            firms,
            rho: self.uniform(0.0, 1.0),
            weights: SocialWeights::new(delta1, 1.0 - delta1),
        }
        .validate()
        .expect("generator only builds valid scenarios")
    }
}
