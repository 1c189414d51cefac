//! Lorentzian linear algebra on ℝ^{2,1}, signature (+,+,−), `z` timelike.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct MinkVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl MinkVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        MinkVector { x, y, z }
    }

    /// The apex `(0,0,1)` of the unit hyperboloid.
    pub const APEX: MinkVector = MinkVector::new(0.0, 0.0, 1.0);

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        MinkVector::new(a[0], a[1], a[2])
    }

    /// Euclidean cross product.
    pub fn cross(self, o: MinkVector) -> MinkVector {
        MinkVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// Euclidean dot product.
    pub fn euclid_dot(self, o: MinkVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Point of the level-`r` hyperboloid over a Klein-disc point.
    pub fn from_klein(kx: f64, ky: f64, r: f64) -> Self {
        let s = r / (1.0 - kx * kx - ky * ky).sqrt();
        MinkVector::new(kx * s, ky * s, s)
    }
}

impl Add for MinkVector {
    type Output = MinkVector;
    fn add(self, o: MinkVector) -> MinkVector {
        MinkVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for MinkVector {
    type Output = MinkVector;
    fn sub(self, o: MinkVector) -> MinkVector {
        MinkVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for MinkVector {
    type Output = MinkVector;
    fn neg(self) -> MinkVector {
        MinkVector::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for MinkVector {
    type Output = MinkVector;
    fn mul(self, s: f64) -> MinkVector {
        MinkVector::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<MinkVector> for f64 {
    type Output = MinkVector;
    fn mul(self, v: MinkVector) -> MinkVector {
        v * self
    }
}

pub fn lorentz_dot(a: MinkVector, b: MinkVector) -> f64 {
    a.x * b.x + a.y * b.y - a.z * b.z
}

/// Level `sqrt(z² − x² − y²)` inside the future cone, `None` outside.
pub fn cone_level(p: MinkVector) -> Option<f64> {
    let q = p.z * p.z - p.x * p.x - p.y * p.y;
    (p.z > 0.0 && q > 0.0).then(|| q.sqrt())
}

pub fn klein_project(p: MinkVector) -> Result<(f64, f64)> {
    if p.z <= 0.0 {
        return Err(Error::NonPositiveHeight { z: p.z });
    }
    Ok((p.x / p.z, p.y / p.z))
}

/// Future-pointing unit timelike normal to a spacelike plane.
pub fn timelike_unit_normal(u1: MinkVector, u2: MinkVector) -> Result<MinkVector> {
    let e = lorentz_dot(u1, u1);
    let f = lorentz_dot(u1, u2);
    let g = lorentz_dot(u2, u2);
    let gram_det = e * g - f * f;
    if !(gram_det > 1e-12 && e > 0.0) {
        return Err(Error::DegenerateTangentPlane { gram_det });
    }
    // J(u1 × u2) is Lorentz-orthogonal to both; ⟨n,n⟩ = −gram_det.
    let c = u1.cross(u2);
    let n = MinkVector::new(c.x, c.y, -c.z);
    let scale = gram_det.sqrt().copysign(n.z);
    Ok(n * (1.0 / scale))
}

/// Element of SO°(2,1), row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry21 {
    pub m: [[f64; 3]; 3],
}

impl Isometry21 {
    pub const IDENTITY: Isometry21 = Isometry21 { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };

    /// Wraps a matrix after checking `mᵀJm = J`, `det m = 1` and future orientation.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let g = Isometry21 { m };
        let defect = g.form_defect();
        if defect > 1e-12 * g.scale() || (g.det() - 1.0).abs() > 1e-12 * g.scale() || g.m[2][2] <= 0.0 {
            return Err(Error::DegenerateInput(format!(
                "matrix is not in SO°(2,1) (form defect {defect:e}, det {})",
                g.det()
            )));
        }
        Ok(g)
    }

    /// Rotation of the `xy`-plane by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Isometry21 { m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Boost along `x` with the given rapidity.
    pub fn boost_x(rapidity: f64) -> Self {
        let (sh, ch) = (rapidity.sinh(), rapidity.cosh());
        Isometry21 { m: [[ch, 0.0, sh], [0.0, 1.0, 0.0], [sh, 0.0, ch]] }
    }

    pub fn apply(&self, p: MinkVector) -> MinkVector {
        let m = &self.m;
        MinkVector::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
        )
    }

    pub fn compose(&self, o: &Isometry21) -> Isometry21 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Isometry21 { m }
    }

    /// Exact inverse `J mᵀ J`.
    pub fn inverse(&self) -> Isometry21 {
        let sign = [1.0, 1.0, -1.0];
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = sign[i] * self.m[j][i] * sign[j];
            }
        }
        Isometry21 { m }
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Largest entry of `|mᵀJm − J|`.
    pub fn form_defect(&self) -> f64 {
        let sign = [1.0, 1.0, -1.0];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| self.m[k][i] * sign[k] * self.m[k][j]).sum();
                let target = if i == j { sign[i] } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    /// Largest entry of `|m − I|`.
    pub fn distance_to_identity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.m[i][j] - id).abs());
            }
        }
        worst
    }

    fn scale(&self) -> f64 {
        self.m.iter().flatten().fold(1.0f64, |a, v| a.max(v.abs())).powi(2)
    }
}

impl Mul for Isometry21 {
    type Output = Isometry21;
    fn mul(self, o: Isometry21) -> Isometry21 {
        self.compose(&o)
    }
}

/// `R(θ)·B(η)·R(θ)⁻¹`.
pub fn boost_rotation(axis_angle: f64, rapidity: f64) -> Isometry21 {
    let r = Isometry21::rotation(axis_angle);
    r * Isometry21::boost_x(rapidity) * r.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> MinkVector {
        MinkVector::new(x, y, z)
    }

    #[test]
    fn dot_examples() {
        assert_eq!(lorentz_dot(v(1.0, 0.0, 0.0), v(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(lorentz_dot(MinkVector::APEX, MinkVector::APEX), -1.0);
        assert_eq!(lorentz_dot(v(1.0, 2.0, 2.0), v(3.0, 0.0, 3.0)), -3.0);
    }

    #[test]
    fn level_examples() {
        assert_eq!(cone_level(MinkVector::APEX), Some(1.0));
        assert_eq!(cone_level(v(0.0, 0.0, 2.5)), Some(2.5));
        assert_eq!(cone_level(v(1.0, 0.0, 1.0)), None);
        assert_eq!(cone_level(v(0.0, 0.0, -1.0)), None);
    }

    #[test]
    fn klein_examples() {
        assert_eq!(klein_project(v(0.0, 0.0, 5.0)).unwrap(), (0.0, 0.0));
        assert_eq!(klein_project(v(1.0, 0.0, 2.0)).unwrap(), (0.5, 0.0));
        assert!(matches!(klein_project(v(1.0, 0.0, 0.0)), Err(Error::NonPositiveHeight { .. })));
    }

    #[test]
    fn klein_projection_intertwines_boosts() {
        // boost of rapidity η acts on the Klein disc by the projective map
        // (kx, ky) ↦ ((kx ch + sh), ky) / (kx sh + ch)
        let eta = 0.8;
        let (sh, ch) = (f64::sinh(eta), f64::cosh(eta));
        let g = boost_rotation(0.0, eta);
        for &(kx, ky) in &[(0.1, 0.2), (-0.5, 0.3), (0.0, -0.9)] {
            let p = MinkVector::from_klein(kx, ky, 1.0);
            let (ax, ay) = klein_project(g.apply(p)).unwrap();
            let den = kx * sh + ch;
            assert!((ax - (kx * ch + sh) / den).abs() < 1e-14);
            assert!((ay - ky / den).abs() < 1e-14);
        }
    }

    #[test]
    fn normal_examples() {
        let n = timelike_unit_normal(v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(n, MinkVector::APEX);
        let n = timelike_unit_normal(v(1.0, 0.0, 0.5), v(0.0, 1.0, 0.0)).unwrap();
        let s = 1.0 / 0.75f64.sqrt();
        assert!((n.x - 0.5 * s).abs() < 1e-15 && n.y.abs() < 1e-15 && (n.z - s).abs() < 1e-15);
        assert!(matches!(
            timelike_unit_normal(v(1.0, 0.0, 1.0), v(0.0, 1.0, 0.0)),
            Err(Error::DegenerateTangentPlane { .. })
        ));
    }

    #[test]
    fn boost_examples() {
        assert!(boost_rotation(0.0, 0.0).distance_to_identity() == 0.0);
        let eta = 0.7;
        let p = boost_rotation(0.0, eta).apply(MinkVector::APEX);
        assert!((p.x - eta.sinh()).abs() < 1e-15 && p.y == 0.0 && (p.z - eta.cosh()).abs() < 1e-15);
        let theta = 1.1;
        let lhs = boost_rotation(theta, eta);
        let rhs = Isometry21::rotation(theta) * boost_rotation(0.0, eta) * Isometry21::rotation(-theta);
        assert!((lhs * rhs.inverse()).distance_to_identity() < 1e-14);
        assert!(Isometry21::new(lhs.m).is_ok());
    }

    #[test]
    fn non_isometry_is_rejected() {
        let mut m = Isometry21::IDENTITY.m;
        m[0][0] = 2.0;
        assert!(Isometry21::new(m).is_err());
        // time reversal preserves the form but not the future cone
        let mut t = Isometry21::IDENTITY.m;
        t[2][2] = -1.0;
        t[1][1] = -1.0;
        assert!(Isometry21::new(t).is_err());
    }
}
