//! Counter-derived random streams: stream `k` of seed `s` is the same no
//! matter which worker draws it, so parallel results never depend on the
//! thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
