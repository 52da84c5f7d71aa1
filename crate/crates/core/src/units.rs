//! Turn/radian helpers shared by every module.

use std::f64::consts::PI;

/// Maps an angle in turns into the canonical interval (−0.5, 0.5].
pub fn canonical_turns(t: f64) -> f64 {
    let r = t - t.floor();
    if r > 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// Maps a phase in turns into [0, 1).
pub fn unit_turns(t: f64) -> f64 {
    let r = t - t.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

pub fn turns_to_radians(t: f64) -> f64 {
    2.0 * PI * t
}

pub fn radians_to_turns(r: f64) -> f64 {
    r / (2.0 * PI)
}

/// `e^{2πi t}`.
pub fn phase(t: f64) -> num_complex::Complex64 {
    num_complex::Complex64::from_polar(1.0, turns_to_radians(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_interval() {
        assert_eq!(canonical_turns(0.5), 0.5);
        assert_eq!(canonical_turns(-0.5), 0.5);
        assert!((canonical_turns(0.7) + 0.3).abs() < 1e-15);
        assert!((canonical_turns(-0.3) + 0.3).abs() < 1e-15);
        assert_eq!(canonical_turns(1.0), 0.0);
        assert_eq!(canonical_turns(-1e-18), 0.0);
        assert_eq!(unit_turns(-1e-18), 0.0);
        assert!((unit_turns(-0.25) - 0.75).abs() < 1e-15);
    }
}
