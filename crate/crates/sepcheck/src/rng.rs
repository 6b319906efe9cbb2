//! Deterministic random-number generation.
//!
//! All randomness in the crate flows through a SplitMix64 stream so that a
//! given seed reproduces identical output on any platform. Derived streams
//! are obtained by mixing a counter into the seed, which keeps sampling
//! loops order-independent: sample i always sees the same stream regardless
//! of evaluation order.

/// SplitMix64: a 64-bit counter-based generator. The state advances by a
/// fixed odd constant and each output is a finalizer of the new state.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
    gauss_cache: Option<f64>,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 {
            state: seed,
            gauss_cache: None,
        }
    }

    /// Derived stream `index` of a base seed; used for per-sample seeds in
    /// sampling loops.
    pub fn stream(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix(seed ^ mix(index.wrapping_add(1).wrapping_mul(GAMMA))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1].
    pub fn next_f64_open(&mut self) -> f64 {
        1.0 - self.next_f64()
    }

    /// Standard normal via Box-Muller; the second value of each pair is
    /// cached so draws come in a fixed order.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.gauss_cache.take() {
            return z;
        }
        let u1 = self.next_f64_open();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.gauss_cache = Some(r * theta.sin());
        r * theta.cos()
    }
}
