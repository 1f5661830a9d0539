//! Deterministic, splittable random streams.
//!
//! Every stream is keyed by `(master seed, context label, trial index)`. The
//! key is hashed with SHA-256 into a 256-bit ChaCha8 seed, so a trial's
//! stream never depends on how many draws other trials made or on which
//! thread ran them.
//!
//! Output conversions are fixed here rather than delegated to a
//! distribution library, because record files are compared byte for byte:
//!
//! * unit uniform: the top 53 bits of one `u64` draw, scaled by 2⁻⁵³;
//! * fair coin: the top bit of one `u64` draw;
//! * Bernoulli(p): one unit uniform `x`, returning `x < p`.
//!
//! Stream format version: [`STREAM_VERSION`]. Any change to the above bumps it.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{param, Result};

/// Version tag mixed into every derived seed.
pub const STREAM_VERSION: &str = "fsp-stream-v1";

/// Root seed of one experiment run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MasterSeed(pub u64);

impl From<u64> for MasterSeed {
    fn from(v: u64) -> Self {
        MasterSeed(v)
    }
}

/// A single-owner random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed_id: u64,
}

/// Derives the stream for `(master, context, trial)`. Pure function of its inputs.
pub fn derive_stream(master: MasterSeed, context: &str, trial: u64) -> RngStream {
    let mut h = Sha256::new();
    h.update(STREAM_VERSION.as_bytes());
    h.update([0u8]);
    h.update(master.0.to_le_bytes());
    h.update((context.len() as u64).to_le_bytes());
    h.update(context.as_bytes());
    h.update(trial.to_le_bytes());
    let digest: [u8; 32] = h.finalize().into();
    let seed_id = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"));
    RngStream {
        rng: ChaCha8Rng::from_seed(digest),
        seed_id,
    }
}

impl RngStream {
    /// The first 64 bits of the derived key; recorded in trial output so a
    /// run can be matched to its stream.
    pub fn seed_id(&self) -> u64 {
        self.seed_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53 bits of resolution.
    pub fn next_unit_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_fair_coin(&mut self) -> bool {
        self.rng.next_u64() >> 63 == 1
    }

    /// Returns `true` with probability `p`. Consumes one uniform draw.
    pub fn next_bernoulli(&mut self, p: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&p) {
            return Err(param(format!("bernoulli probability {p} outside [0, 1]")));
        }
        Ok(self.next_unit_uniform() < p)
    }
}
