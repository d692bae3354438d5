//! Working precision.

pub use qal_algebra::roots::PRECISION_CAP;

pub const DEFAULT_PRECISION: u32 = 256;

/// `QAL_PRECISION_BITS` if set to a valid value, else 256; clamped to the cap.
pub fn precision_bits() -> u32 {
    std::env::var("QAL_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| b >= 16)
        .map(|b| b.min(PRECISION_CAP))
        .unwrap_or(DEFAULT_PRECISION)
}

/// Run `f` at increasing precision until it decides, up to the cap.
pub fn escalate<T>(start: u32, mut f: impl FnMut(u32) -> Option<T>) -> Option<T> {
    let mut w = start.clamp(16, PRECISION_CAP);
    loop {
        if let Some(v) = f(w) {
            return Some(v);
        }
        if w >= PRECISION_CAP {
            return None;
        }
        w = (w * 2).min(PRECISION_CAP);
    }
}
