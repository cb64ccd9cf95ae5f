use parafree_core::coset::EnumerationOptions;
use parafree_core::freeprod::is_prime;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub p: u64,
    pub l: u32,
    pub k: u32,
    pub max_class: usize,
    pub max_cosets: usize,
    pub max_k: usize,
    pub max_exponent: u32,
    pub output: Output,
    pub seed: u64,
}

impl RunConfig {
    /// Checks the limits and primality; returns warnings to print.
    pub fn validate(&self) -> Result<Vec<String>, String> {
        if !is_prime(self.p) {
            return Err(format!("p = {} is not prime", self.p));
        }
        if self.l == 0 || self.k == 0 {
            return Err("l and k must be positive".into());
        }
        if self.max_class < 2 {
            return Err(format!("max-class must be at least 2, got {}", self.max_class));
        }
        if self.max_cosets == 0 || self.max_k == 0 || self.max_exponent == 0 {
            return Err("limits must be positive".into());
        }
        let mut warnings = Vec::new();
        if self.p == 2 {
            warnings.push(
                "warning: p = 2 lies outside the odd-prime setting; infinite-order checks are skipped".to_string(),
            );
        }
        Ok(warnings)
    }

    pub fn options(&self) -> EnumerationOptions {
        EnumerationOptions::with_max_cosets(self.max_cosets)
    }
}
