/// Node budget used when neither the caller nor `DYCKSHIFT_BUDGET` sets one.
pub const DEFAULT_BUDGET: u64 = 4_000_000_000;

pub const BUDGET_ENV: &str = "DYCKSHIFT_BUDGET";

/// Resource limits for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of search-tree nodes visited by one call.
    pub budget: u64,
    /// Worker threads; `0` uses the global rayon pool.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        SearchConfig { budget, threads: 0 }
    }
}

impl SearchConfig {
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    /// Runs `f` on a pool of the configured size.
    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        if self.threads == 0 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.threads).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}
