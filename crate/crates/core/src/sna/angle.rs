use core::f64::consts::TAU;
use core::ops::{Add, Sub};

/// A point of the circle `R/Z` as a 64-bit fixed-point fraction of a turn.
///
/// Rotations are exact wrapping additions, so `θ + kω - kω == θ` bit for bit
/// and the dyadic slot of `θ` at depth `J` is simply its top `J` bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(pub u64);

const TURN: f64 = 18446744073709551616.0;

impl Angle {
    /// `frac((1 + √5) / 2)`, rounded down to 64 bits.
    pub const GOLDEN: Angle = Angle(0x9E37_79B9_7F4A_7C15);

    /// Reduces `t` modulo 1. The conversion truncates towards zero below the 64-bit grid.
    pub fn from_turns(t: f64) -> Angle {
        let f = t - libm::floor(t);
        if f >= 1.0 {
            return Angle(0);
        }
        Angle((f * TURN) as u64)
    }

    /// The angle in `[0, 1)` as a double; the low 11 bits are truncated.
    pub fn to_turns(self) -> f64 {
        (self.0 >> 11) as f64 * libm::exp2(-53.0)
    }

    /// Index `⌊2^J θ⌋` of the dyadic cell holding `θ`.
    pub fn slot(self, depth: u32) -> usize {
        debug_assert!((1..=63).contains(&depth));
        (self.0 >> (64 - depth)) as usize
    }
}

impl Add for Angle {
    type Output = Angle;

    fn add(self, rhs: Angle) -> Angle {
        Angle(self.0.wrapping_add(rhs.0))
    }
}

impl Sub for Angle {
    type Output = Angle;

    fn sub(self, rhs: Angle) -> Angle {
        Angle(self.0.wrapping_sub(rhs.0))
    }
}

/// `|cos 2πθ|`, folded onto `[0, 1/8]` by exact integer symmetries so that the
/// zeros at `θ = 1/4, 3/4` are hit exactly.
pub fn abs_cos_turns(theta: Angle) -> f64 {
    const HALF: u64 = 1 << 63;
    const QUARTER: u64 = 1 << 62;
    const EIGHTH: u64 = 1 << 61;
    let u = theta.0 & (HALF - 1);
    let r = if u > QUARTER { HALF - u } else { u };
    if r <= EIGHTH {
        libm::cos(TAU * Angle(r).to_turns())
    } else {
        libm::sin(TAU * Angle(QUARTER - r).to_turns())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_rotation_number() {
        let omega = (libm::sqrt(5.0) - 1.0) / 2.0;
        assert!((Angle::GOLDEN.to_turns() - omega).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn turns_round_trip() {
        for &t in &[0.0, 0.25, 0.5, 0.999, 0.618033988749895] {
            assert_eq!(Angle::from_turns(t).to_turns(), t);
        }
        // below 1/2 the bits under 2^-53 are dropped
        assert!((Angle::from_turns(0.1).to_turns() - 0.1).abs() <= libm::exp2(-53.0));
        assert_eq!(Angle::from_turns(1.25), Angle::from_turns(0.25));
        assert_eq!(Angle::from_turns(-0.75), Angle::from_turns(0.25));
    }

    #[test]
    fn slots() {
        assert_eq!(Angle::from_turns(0.5).slot(4), 8);
        assert_eq!(Angle::from_turns(0.999).slot(10), 1022);
        assert_eq!(Angle(u64::MAX).slot(20), (1 << 20) - 1);
    }

    #[test]
    fn rotation_is_invertible() {
        let theta = Angle(0x1234_5678_9ABC_DEF0);
        let mut t = theta;
        for _ in 0..1000 {
            t = t + Angle::GOLDEN;
        }
        for _ in 0..1000 {
            t = t - Angle::GOLDEN;
        }
        assert_eq!(t, theta);
    }

    #[test]
    fn cosine_zeros_and_extremes() {
        assert_eq!(abs_cos_turns(Angle::from_turns(0.25)), 0.0);
        assert_eq!(abs_cos_turns(Angle::from_turns(0.75)), 0.0);
        assert_eq!(abs_cos_turns(Angle::from_turns(0.0)), 1.0);
        assert_eq!(abs_cos_turns(Angle::from_turns(0.5)), 1.0);
    }

    #[test]
    fn cosine_matches_libm() {
        for i in 0..4096u64 {
            let t = (i as f64 + 0.37) / 4096.0;
            let expected = libm::cos(TAU * t).abs();
            assert!((abs_cos_turns(Angle::from_turns(t)) - expected).abs() < 1e-14, "t = {t}");
        }
    }
}
