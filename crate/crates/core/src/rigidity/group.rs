use serde::Serialize;

use crate::error::{Error, Result};
use crate::minkowski::{boost_rotation, Isometry21};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }
}

/// Surface group given by generators and a single relator.
#[derive(Clone, Debug)]
pub struct FuchsianGroup {
    pub generators: Vec<Isometry21>,
    pub relator: Vec<Letter>,
    /// Translation length of every generator.
    pub boost_length: f64,
}

/// `a0 a1⁻¹ a2 a3⁻¹ a0⁻¹ a1 a2⁻¹ a3`, the side pairing of the regular octagon.
const OCTAGON_RELATOR: [Letter; 8] = [
    Letter::new(0, false),
    Letter::new(1, true),
    Letter::new(2, false),
    Letter::new(3, true),
    Letter::new(0, true),
    Letter::new(1, false),
    Letter::new(2, true),
    Letter::new(3, false),
];

const RELATOR_TOLERANCE: f64 = 1e-8;

impl FuchsianGroup {
    pub fn letter(&self, l: Letter) -> Isometry21 {
        let g = self.generators[l.generator];
        if l.inverse {
            g.inverse()
        } else {
            g
        }
    }

    /// All generators followed by their inverses.
    pub fn alphabet(&self) -> Vec<Isometry21> {
        let mut out = self.generators.clone();
        out.extend(self.generators.iter().map(Isometry21::inverse));
        out
    }

    pub fn word(&self, word: &[Letter]) -> Isometry21 {
        word.iter().fold(Isometry21::IDENTITY, |acc, &l| acc * self.letter(l))
    }

    /// Largest entry of `|relator − I|`.
    pub fn relator_defect(&self) -> f64 {
        self.word(&self.relator).distance_to_identity()
    }
}

fn octagon_generators(length: f64) -> Vec<Isometry21> {
    (0..4).map(|k| boost_rotation(k as f64 * std::f64::consts::FRAC_PI_4, length)).collect()
}

/// Off-diagonal `(1, 0)` entry of `(W − W⁻¹)/2` for the relator word `W`;
/// it changes sign at the length where the octagon closes up.
fn relator_residual(length: f64) -> f64 {
    let group = FuchsianGroup { generators: octagon_generators(length), relator: OCTAGON_RELATOR.to_vec(), boost_length: length };
    let w = group.word(&group.relator);
    let inv = w.inverse();
    0.5 * (w.m[1][0] - inv.m[1][0])
}

/// Regular-octagon genus-two group. The boost length is found by bisection on
/// `[3.0, 3.1]`, a bracket around `2 arcosh(1 + √2)`.
pub fn make_genus2_group() -> Result<FuchsianGroup> {
    let (mut lo, mut hi) = (3.0, 3.1);
    let (mut f_lo, f_hi) = (relator_residual(lo), relator_residual(hi));
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RelatorNotSatisfied { defect: f_lo.abs().min(f_hi.abs()) });
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        let f_mid = relator_residual(mid);
        if f_mid == 0.0 {
            (lo, hi) = (mid, mid);
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            (lo, f_lo) = (mid, f_mid);
        } else {
            hi = mid;
        }
    }
    let length = 0.5 * (lo + hi);
    let group = FuchsianGroup {
        generators: octagon_generators(length),
        relator: OCTAGON_RELATOR.to_vec(),
        boost_length: length,
    };
    let defect = group.relator_defect();
    if defect > RELATOR_TOLERANCE {
        return Err(Error::RelatorNotSatisfied { defect });
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::{lorentz_dot, MinkVector};

    #[test]
    fn octagon_group_closes_up() {
        let g = make_genus2_group().unwrap();
        let closed_form = 2.0 * (1.0 + 2f64.sqrt()).acosh();
        assert!((g.boost_length - closed_form).abs() < 1e-9, "{}", g.boost_length);
        assert!(g.relator_defect() <= RELATOR_TOLERANCE);
        let apex = g.word(&g.relator).apply(MinkVector::APEX);
        assert!((apex - MinkVector::APEX).euclid_norm() < 1e-8);
    }

    #[test]
    fn generators_are_hyperbolic_isometries() {
        let g = make_genus2_group().unwrap();
        let (a, b) = (MinkVector::new(0.3, -0.2, 1.4), MinkVector::new(-1.0, 0.5, 0.1));
        for h in g.alphabet() {
            assert!((lorentz_dot(h.apply(a), h.apply(b)) - lorentz_dot(a, b)).abs() < 1e-10);
            // trace 1 + 2 cosh ℓ; elliptic elements have trace below 3
            assert!(h.trace() > 3.0 + 1.0);
        }
    }

    #[test]
    fn wrong_bracket_side_is_not_a_root() {
        assert!(relator_residual(3.0).signum() != relator_residual(3.1).signum());
        let off = FuchsianGroup { generators: octagon_generators(3.0), relator: OCTAGON_RELATOR.to_vec(), boost_length: 3.0 };
        assert!(off.relator_defect() > 1e-3);
    }
}
