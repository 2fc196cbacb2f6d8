//! Reproducible sub-seeding.
//!
//! One master seed drives every random stream. A stream is addressed by a
//! `(replication, stream)` pair: the replication index is mixed into the
//! ChaCha key through SplitMix64 and the stream id selects one of ChaCha's
//! 2^64 independent streams. Layers of one realization therefore never
//! share a stream, and replication `r` draws the same numbers no matter
//! which worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream ids for the independent pieces of a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Users = 0,
    BaseStations = 1,
    Backhaul = 2,
    DataCenters = 3,
    Snr = 16,
    Probe = 32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSequence {
    master: u64,
}

impl SeedSequence {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn rng(&self, replication: u64, stream: Stream) -> SimRng {
        self.rng_raw(replication, stream as u64)
    }

    pub fn rng_raw(&self, replication: u64, stream: u64) -> SimRng {
        let key = splitmix64(self.master ^ splitmix64(replication.wrapping_add(0x5851_f42d_4c95_7f2d)));
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(stream);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
