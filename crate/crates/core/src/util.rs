use rand::Rng;

/// FNV-1a over a byte slice; used to build short stable operator ids.
pub fn fnv64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Standard normal sample via Box-Muller.
pub fn gauss<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Format a float with 17 significant digits (exact f64 round-trip).
pub fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_round_trips() {
        for &x in &[0.1, -3.25e-7, 1.0 / 3.0, 1e300, 0.0] {
            let s = fmt_g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
