use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{ensure, Error, Result};

/// Absolute tolerance on the arc membership identity.
pub const ARC_TOL: f64 = 1e-9;

/// An angle reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub fn new(value: f64) -> Self {
        let r = value.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2 pi for tiny negative inputs
        Self(if r >= TAU { 0.0 } else { r })
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for Angle {
    fn from(value: f64) -> Self {
        Self::new(value)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

/// `theta ⊖ phi`: the representative of `theta - phi` modulo `2 pi` in `[-pi, pi)`.
pub fn circ_diff(theta: Angle, phi: Angle) -> f64 {
    let r = (theta.0 - phi.0 + PI).rem_euclid(TAU) - PI;
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// The counter-clockwise arc from `start` to `end`, shorter than a half turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    start: Angle,
    end: Angle,
}

impl Arc {
    /// Requires `start ⊖ end < 0`.
    pub fn new(start: Angle, end: Angle) -> Result<Self> {
        let d = circ_diff(start, end);
        ensure(d < 0.0, "arc", d, "start must precede end counter-clockwise")?;
        Ok(Self { start, end })
    }

    /// Arc of half-width `half_width` centred on `centre`.
    pub fn centred(centre: Angle, half_width: f64) -> Result<Self> {
        Self::new(
            Angle::new(centre.value() - half_width),
            Angle::new(centre.value() + half_width),
        )
    }

    pub fn start(&self) -> Angle {
        self.start
    }

    pub fn end(&self) -> Angle {
        self.end
    }

    /// `end ⊖ start`, in `(0, pi)`.
    pub fn length(&self) -> f64 {
        circ_diff(self.end, self.start)
    }

    /// `|theta ⊖ start| + |theta ⊖ end| = |start ⊖ end|` up to [`ARC_TOL`].
    pub fn contains(&self, theta: Angle) -> bool {
        let sum = circ_diff(theta, self.start).abs() + circ_diff(theta, self.end).abs();
        (sum - circ_diff(self.start, self.end).abs()).abs() <= ARC_TOL
    }

    /// The arc extended by `margin` past each end.
    pub fn widen(&self, margin: f64) -> Result<Self> {
        Self::new(
            Angle::new(self.start.value() - margin),
            Angle::new(self.end.value() + margin),
        )
    }
}

/// `(theta ⊖ start) / (end ⊖ start)`, mapping the arc onto `[0, 1]`.
pub fn arc_map(arc: &Arc, theta: Angle) -> Result<f64> {
    if !arc.contains(theta) {
        return Err(Error::OffArc {
            angle: theta.value(),
            start: arc.start.value(),
            end: arc.end.value(),
        });
    }
    Ok((circ_diff(theta, arc.start) / arc.length()).clamp(0.0, 1.0))
}

/// Inverse of [`arc_map`].
pub fn arc_unmap(arc: &Arc, r: f64) -> Result<Angle> {
    ensure((0.0..=1.0).contains(&r), "r", r, "must lie in [0, 1]")?;
    Ok(Angle::new(arc.start.value() + r * arc.length()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn diff_examples() {
        assert_eq!(circ_diff(Angle::new(1.0), Angle::new(1.0)), 0.0);
        assert!((circ_diff(Angle::new(TAU - 0.01), Angle::new(0.0)) + 0.01).abs() < 1e-12);
        assert_eq!(circ_diff(Angle::new(0.0), Angle::new(PI)), -PI);
    }

    #[test]
    fn angle_reduction() {
        assert_eq!(Angle::new(TAU).value(), 0.0);
        assert_eq!(Angle::new(-1e-300).value(), 0.0);
        assert!((Angle::new(-0.5).value() - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn wrapping_arc() {
        let arc = Arc::new(Angle::new(7.0 * PI / 4.0), Angle::new(PI / 4.0)).unwrap();
        assert!((arc_map(&arc, Angle::new(0.0)).unwrap() - 0.5).abs() < 1e-12);
        assert!(
            arc_unmap(&arc, 0.5).unwrap().value() < 1e-12
                || (arc_unmap(&arc, 0.5).unwrap().value() - TAU).abs() < 1e-12
        );
        assert_eq!(arc_map(&arc, arc.start()).unwrap(), 0.0);
        assert!((arc_map(&arc, arc.end()).unwrap() - 1.0).abs() < 1e-12);
        assert!(arc_map(&arc, Angle::new(PI)).is_err());
        assert!(arc_unmap(&arc, 1.5).is_err());
    }

    #[test]
    fn orientation_enforced() {
        assert!(Arc::new(Angle::new(PI / 4.0), Angle::new(7.0 * PI / 4.0)).is_err());
        assert!(Arc::new(Angle::new(1.0), Angle::new(1.0)).is_err());
    }

    proptest! {
        #[test]
        fn diff_in_range_and_congruent(a in 0.0..TAU, b in 0.0..TAU) {
            let d = circ_diff(Angle::new(a), Angle::new(b));
            prop_assert!((-PI..PI).contains(&d));
            let k = ((a - b - d) / TAU).round();
            prop_assert!((a - b - d - k * TAU).abs() < 1e-12);
        }

        #[test]
        fn map_round_trip(centre in 0.0..TAU, half in 0.01..1.5f64, r in 0.0..=1.0f64) {
            let arc = Arc::centred(Angle::new(centre), half).unwrap();
            let theta = arc_unmap(&arc, r).unwrap();
            let back = arc_map(&arc, theta).unwrap();
            prop_assert!((back - r).abs() < 1e-12);
            let again = arc_unmap(&arc, back).unwrap();
            prop_assert!(circ_diff(again, theta).abs() < 1e-12);
        }

        #[test]
        fn map_preserves_differences(centre in 0.0..TAU, half in 0.01..1.5f64, r1 in 0.0..=1.0f64, r2 in 0.0..=1.0f64) {
            let arc = Arc::centred(Angle::new(centre), half).unwrap();
            let (t1, t2) = (arc_unmap(&arc, r1).unwrap(), arc_unmap(&arc, r2).unwrap());
            let lhs = arc_map(&arc, t1).unwrap() - arc_map(&arc, t2).unwrap();
            prop_assert!((lhs - circ_diff(t1, t2) / arc.length()).abs() < 1e-11);
        }
    }
}
