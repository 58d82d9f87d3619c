use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::ExecMode;

pub const DEFAULT_ENUM_LIMIT: u64 = 10_000_000;
pub const ENUM_LIMIT_ENV: &str = "SINGLAT_ENUM_LIMIT";

/// Budget and execution mode for every enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    /// Maximal number of lattice points a single enumeration may visit.
    pub enum_limit: u64,
    pub mode: ExecMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            enum_limit: DEFAULT_ENUM_LIMIT,
            mode: ExecMode::Parallel,
        }
    }
}

impl SearchConfig {
    /// Default configuration with the limit taken from `SINGLAT_ENUM_LIMIT` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = SearchConfig::default();
        if let Ok(raw) = std::env::var(ENUM_LIMIT_ENV) {
            cfg.enum_limit = raw.trim().parse().map_err(|e| Error::Parse {
                line: 1,
                column: 1,
                message: format!("{ENUM_LIMIT_ENV}=`{raw}`: {e}"),
            })?;
        }
        Ok(cfg)
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.enum_limit = limit;
        self
    }

    pub fn with_mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn sequential(self) -> Self {
        self.with_mode(ExecMode::Sequential)
    }
}
