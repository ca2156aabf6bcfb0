//! Process-wide refinement budgets.
//!
//! Every adaptive loop in the crate (subdivision, precision escalation,
//! enclosure refinement) consults these limits. Exceeding a limit is a hard
//! [`Error::RefinementLimit`](crate::Error::RefinementLimit), never a silent
//! approximation.

use parking_lot::RwLock;

/// Environment variable holding the default refinement ceiling.
pub const MAX_REFINE_ENV: &str = "ENTIREFORGE_MAX_REFINE";

const DEFAULT_MAX_REFINE: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Ceiling on doubling rounds: subdivision depth of contour pieces and the
    /// number of precision doublings for enclosures.
    pub max_refine: u32,
    /// Ceiling on the number of live contour pieces in a single winding or
    /// circle-bound computation.
    pub max_pieces: usize,
    /// Ceiling on working precision (bits) for enclosures.
    pub max_bits: u64,
}

impl Limits {
    pub fn with_max_refine(max_refine: u32) -> Self {
        let max_refine = max_refine.max(4);
        Limits {
            max_refine,
            max_pieces: 1usize << max_refine.clamp(10, 22),
            max_bits: 1u64 << max_refine.clamp(8, 34),
        }
    }

    pub fn from_env() -> Self {
        let ceiling = std::env::var(MAX_REFINE_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .unwrap_or(DEFAULT_MAX_REFINE);
        Self::with_max_refine(ceiling)
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::with_max_refine(DEFAULT_MAX_REFINE)
    }
}

static LIMITS: RwLock<Option<Limits>> = RwLock::new(None);

/// Current process-wide limits (initialised from the environment on first use).
pub fn limits() -> Limits {
    if let Some(l) = *LIMITS.read() {
        return l;
    }
    let mut guard = LIMITS.write();
    *guard.get_or_insert_with(Limits::from_env)
}

pub fn set_limits(limits: Limits) {
    *LIMITS.write() = Some(limits);
}
