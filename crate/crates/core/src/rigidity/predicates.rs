//! Exact sign of the 3D orientation determinant.

use num_bigint::BigInt;
use std::cmp::Ordering;

/// Sign of `det [b − a, c − a, d − a]`, i.e. positive when `d` lies on the
/// side of the plane `abc` that the right-handed normal `(b−a)×(c−a)` points to.
pub fn orient3d(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> Ordering {
    let (det, permanent) = orient3d_float(a, b, c, d);
    // Shewchuk's first-stage error bound
    let bound = (7.0 + 56.0 * f64::EPSILON) * f64::EPSILON * permanent;
    if det > bound {
        Ordering::Greater
    } else if -det > bound {
        Ordering::Less
    } else {
        orient3d_exact(a, b, c, d)
    }
}

fn orient3d_float(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> (f64, f64) {
    let (adx, ady, adz) = (a[0] - d[0], a[1] - d[1], a[2] - d[2]);
    let (bdx, bdy, bdz) = (b[0] - d[0], b[1] - d[1], b[2] - d[2]);
    let (cdx, cdy, cdz) = (c[0] - d[0], c[1] - d[1], c[2] - d[2]);
    let (bdxcdy, cdxbdy) = (bdx * cdy, cdx * bdy);
    let (cdxady, adxcdy) = (cdx * ady, adx * cdy);
    let (adxbdy, bdxady) = (adx * bdy, bdx * ady);
    let det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
    let permanent = (bdxcdy.abs() + cdxbdy.abs()) * adz.abs()
        + (cdxady.abs() + adxcdy.abs()) * bdz.abs()
        + (adxbdy.abs() + bdxady.abs()) * cdz.abs();
    // det [a−d, b−d, c−d] = −det [b−a, c−a, d−a]
    (-det, permanent)
}

/// Mantissa and binary exponent with `x = m · 2^e` exactly.
fn decompose(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exponent = ((bits >> 52) & 0x7ff) as i32;
    let fraction = (bits & 0x000f_ffff_ffff_ffff) as i64;
    if exponent == 0 {
        (sign * fraction, -1074)
    } else {
        (sign * (fraction | 1 << 52), exponent - 1075)
    }
}

/// Evaluation in big integers after scaling all coordinates by a common power of two.
fn orient3d_exact(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> Ordering {
    let parts: Vec<(i64, i32)> = [a, b, c, d].iter().flatten().map(|&x| decompose(x)).collect();
    let min_exp = parts.iter().filter(|p| p.0 != 0).map(|p| p.1).min().unwrap_or(0);
    let big: Vec<BigInt> = parts
        .iter()
        .map(|&(m, e)| if m == 0 { BigInt::from(0) } else { BigInt::from(m) << (e - min_exp) as usize })
        .collect();
    let p = |k: usize, axis: usize| &big[3 * k + axis];
    let row = |k: usize| [p(k, 0) - p(0, 0), p(k, 1) - p(0, 1), p(k, 2) - p(0, 2)];
    let (u, v, w) = (row(1), row(2), row(3));
    let det = &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
        + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0]);
    det.sign().cmp_zero()
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_tetrahedron() {
        let o = [0.0, 0.0, 0.0];
        let (x, y, z) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
        assert_eq!(orient3d(o, x, y, z), Ordering::Greater);
        assert_eq!(orient3d(o, y, x, z), Ordering::Less);
        assert_eq!(orient3d(o, x, y, [0.3, 0.4, 0.0]), Ordering::Equal);
    }

    #[test]
    fn near_degenerate_cases_fall_back_to_exact_arithmetic() {
        // dyadic coordinates, so d = a + (b − a)/2 + (c − a)/4 exactly
        let a = [0.5, 0.25, 0.75];
        let b = [1.5, 0.25, 1.75];
        let c = [0.5, 1.25, 0.75];
        let d = [1.0, 0.5, 1.25];
        assert_eq!(orient3d(a, b, c, d), Ordering::Equal);
        let nudged = [d[0], d[1], f64::from_bits(d[2].to_bits() + 1)];
        let sign = orient3d(a, b, c, nudged);
        assert_ne!(sign, Ordering::Equal);
        // moving d up along z moves it to the side of (b−a)×(c−a) = (−1, 0, 1)
        assert_eq!(sign, Ordering::Greater);
        assert_eq!(orient3d_exact(a, b, c, nudged), sign);
    }

    #[test]
    fn decomposition_is_exact() {
        for &x in &[1.0, -3.75, 0.1, 6.02e23, f64::MIN_POSITIVE] {
            let (m, e) = decompose(x);
            assert_eq!(m as f64 * 2f64.powi(e), x);
        }
    }
}
