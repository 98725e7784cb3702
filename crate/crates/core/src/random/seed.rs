use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

// Domain separators keep the key for f(p) distinct from the keys used to
// derive child seeds and Gaussian streams from the same token.
const DOMAIN_STEINHAUS: u64 = 0;
const DOMAIN_DERIVE: u64 = 0x6a09_e667_f3bc_c908;
const DOMAIN_STREAM: u64 = 0xbb67_ae85_84ca_a73b;

/// Reproducibility token. Every random quantity in the crate is a pure
/// function of a `Seed` and an integer counter (prime, sample index, field
/// index), drawn from a ChaCha8 stream selected by that counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

impl Seed {
    /// Child seed for sample `index`; children of one parent are independent.
    pub fn derive(self, index: u64) -> Seed {
        let mut rng = self.keyed(DOMAIN_DERIVE);
        rng.set_stream(index);
        Seed(rng.next_u64())
    }

    /// An RNG stream keyed on `(self, stream)`.
    pub fn stream(self, stream: u64) -> ChaCha8Rng {
        let mut rng = self.keyed(DOMAIN_STREAM);
        rng.set_stream(stream);
        rng
    }

    pub(crate) fn steinhaus_key(self) -> ChaCha8Rng {
        self.keyed(DOMAIN_STEINHAUS)
    }

    fn keyed(self, domain: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0 ^ domain)
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// Uniform double in `[0, 1)` from the top 53 bits of a word.
#[inline]
pub(crate) fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
