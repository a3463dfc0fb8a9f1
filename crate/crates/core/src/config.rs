use crate::error::{Error, Result};
use crate::ff::DEFAULT_BUDGET;
use std::path::PathBuf;

/// Run-wide settings shared by the CLI and the self-check.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Largest field (in elements) any single enumeration may walk.
    pub max_enumeration: u64,
    /// Surplus coefficients computed beyond the predicted degree.
    pub guard: usize,
    pub embedding_tolerance: f64,
    pub weight_tolerance: f64,
    pub cache_path: Option<PathBuf>,
    /// Largest denominator degree tried when monodromy looks finite.
    pub den_bound: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_enumeration: DEFAULT_BUDGET,
            guard: 1,
            embedding_tolerance: 1e-9,
            weight_tolerance: 1e-6,
            cache_path: None,
            den_bound: 3,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t < 1.0;
        if self.max_enumeration == 0 || self.den_bound == 0 {
            return Err(Error::InvalidInput("budget and den_bound must be positive".into()));
        }
        if !tol_ok(self.embedding_tolerance) || !tol_ok(self.weight_tolerance) {
            return Err(Error::InvalidInput("tolerances must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// The cache directory, with `AIRY_CACHE` taking precedence.
    pub fn resolved_cache_path(&self) -> Option<PathBuf> {
        match std::env::var_os("AIRY_CACHE") {
            Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
            _ => self.cache_path.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = RunConfig::default();
        assert_eq!(c.max_enumeration, 1 << 28);
        assert_eq!((c.guard, c.den_bound), (1, 3));
        c.validate().unwrap();
        let bad = RunConfig { weight_tolerance: 1.5, ..RunConfig::default() };
        assert!(bad.validate().is_err());
    }
}
