//! Small numeric helpers for the fractional exponents the constructions use.

/// ⌈v⌉, snapping values within 1e-9 (relative) of an integer to it so that
/// powers like 16^{1/2} never round up past their exact value.
pub fn ceil_snap(v: f64) -> usize {
    if !v.is_finite() || v >= usize::MAX as f64 {
        return usize::MAX;
    }
    if v <= 0.0 {
        return 0;
    }
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.max(1.0) {
        r as usize
    } else {
        v.ceil() as usize
    }
}

/// ⌈base^exp⌉ with snapping.
pub fn ceil_pow(base: f64, exp: f64) -> usize {
    ceil_snap(base.powf(exp))
}

/// log₂ n, at least 1.
pub fn log2n(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

/// Deterministic seed derivation for sub-builds.
pub fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b.wrapping_mul(0xc2b2_ae3d_27d4_eb4f);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
