//! Run configuration shared by every subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsubreg::admissible::{LevelData, Mode};
use wsubreg::reference::subregular_denominators;
use wsubreg::rootsystem::{RootSystem, Weight};
use wsubreg::{Error, Q};

/// Weyl groups larger than this are refused unless huge runs are allowed.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "WSUBREG_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Invariant(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Type name such as `E6` or `D5`.
    pub system: String,
    pub p: i64,
    pub q: i64,
    pub mode: Mode,
    /// 1-based distinguished node, type A only.
    pub star: Option<usize>,
    pub threads: Option<usize>,
    /// `None` lifts the Weyl-group size cap.
    pub cap: Option<u64>,
    pub format: Format,
    /// Seed for a random `x`; `ρ` is used when absent.
    pub x_seed: Option<u64>,
}

impl RunConfig {
    pub fn new(system: &str, p: i64, q: i64) -> RunConfig {
        RunConfig {
            system: system.to_string(),
            p,
            q,
            mode: Mode::Subreg,
            star: None,
            threads: None,
            cap: Some(DEFAULT_CAP),
            format: Format::Json,
            x_seed: None,
        }
    }

    pub fn root_system(&self) -> CliResult<RootSystem> {
        Ok(RootSystem::from_name(&self.system, self.star)?)
    }

    /// Validates the configuration, naming the legal denominators on failure.
    pub fn level(&self) -> CliResult<LevelData> {
        let rs = self.root_system()?;
        LevelData::new(rs.clone(), self.p, self.q, self.mode).map_err(|e| {
            let mut msg = e.to_string();
            if self.mode == Mode::Subreg && !msg.contains("legal values") {
                let letter = rs.family.to_string().chars().next().unwrap_or('A');
                if let Ok(qs) = subregular_denominators(letter, rs.rank) {
                    msg.push_str(&format!(
                        "; legal q for {}: {:?}, with p ≥ {} coprime to q",
                        rs.name(),
                        qs,
                        rs.h_dual
                    ));
                }
            }
            CliError::Invalid(msg)
        })
    }

    /// The auxiliary weight `x`: `ρ`, or a seeded random rational weight with `⟨α_*, x⟩ ≠ 0`.
    pub fn x(&self, rs: &RootSystem) -> Weight {
        match self.x_seed {
            None => rs.rho(),
            Some(seed) => random_x(rs, seed),
        }
    }

    /// Refuses a Weyl walk over the cap before any work is done.
    pub fn check_cap(&self, rs: &RootSystem) -> CliResult<()> {
        match self.cap {
            Some(cap) if rs.weyl_order() > cap => Err(CliError::Invalid(format!(
                "|W({})| = {} exceeds the cap {cap}; rerun with --allow-huge",
                rs.name(),
                rs.weyl_order()
            ))),
            _ => Ok(()),
        }
    }
}

pub fn random_x(rs: &RootSystem, seed: u64) -> Weight {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coords: Vec<Q> = (0..rs.rank).map(|_| Q::new(rng.gen_range(-9..10), rng.gen_range(1..5))).collect();
        if coords[rs.star] != Q::from_integer(0) {
            return Weight { coords };
        }
    }
}

/// Sizes the global rayon pool from an explicit count or `WSUBREG_THREADS`.
pub fn init_threads(threads: Option<usize>) {
    let n = threads.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.parse().ok()));
    if let Some(n) = n.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
