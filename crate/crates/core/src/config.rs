use std::env;

/// Name of the environment variable that overrides the enumeration caps.
pub const CAP_ENV: &str = "HOLOBRACE_CAP";

/// Budgets for the exhaustive parts of the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Maximum number of candidate matrices scanned per prime block when
    /// enumerating automorphisms.
    pub aut_cap: u64,
    /// Maximum holomorph size for a full order census.
    pub hol_cap: u64,
    /// Holomorphs up to this size are searched directly; larger ones go
    /// through the Sylow-restricted search.
    pub full_search_limit: u64,
    /// Stabilizers are computed by testing every automorphism up to this
    /// group order, and by orbit BFS over generators beyond it.
    pub exhaustive_stabilizer_limit: u64,
    /// Skip the search outright when the target order exceeds the
    /// holomorph exponent bound.
    pub prune_by_exponent_bound: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            aut_cap: 1 << 21,
            hol_cap: 1 << 21,
            full_search_limit: 1 << 16,
            exhaustive_stabilizer_limit: 1 << 15,
            prune_by_exponent_bound: true,
        }
    }
}

impl Config {
    /// Defaults, with `HOLOBRACE_CAP` applied to both enumeration caps when set.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Some(cap) = env::var(CAP_ENV).ok().and_then(|v| v.trim().parse::<u64>().ok()) {
            cfg.aut_cap = cap;
            cfg.hol_cap = cap;
        }
        cfg
    }
}
