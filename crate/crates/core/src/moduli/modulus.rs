use num_complex::Complex64;
use rayon::prelude::*;

use super::UHPoint;
use crate::error::{Error, Result};
use crate::metric_grid::{MetricField, PeriodicGrid, Sym2};

const GAUSS: [f64; 2] = [0.5 - 0.5 / 1.732_050_807_568_877_2, 0.5 + 0.5 / 1.732_050_807_568_877_2];
const CG_TOLERANCE: f64 = 1e-10;

/// Output of the modulus solver.
#[derive(Clone, Copy, Debug)]
pub struct ModulusSolution {
    pub w: UHPoint,
    /// The raw period ratio had negative imaginary part and was conjugated.
    pub flipped: bool,
    pub cg_iterations: usize,
    pub relative_residual: f64,
}

/// Conformal modulus of a metric on the unit torus.
pub fn torus_modulus(g: &MetricField) -> Result<UHPoint> {
    Ok(torus_modulus_detailed(g)?.w)
}

/// Bilinear elements on the node grid; the conductivity `sqrt(det g) g⁻¹`
/// is sampled at 2×2 Gauss points of each cell from the interpolated metric.
/// The harmonic representative `dx + da` of the class of `dx` solves a
/// periodic, zero-mean elliptic problem. With `J = A(dx + da)` its conjugate
/// periods are the cell averages of `J`, and the period ratio is
/// `i·∫J_x / (1 − i·∫J_y)`.
pub fn torus_modulus_detailed(g: &MetricField) -> Result<ModulusSolution> {
    g.require_positive_definite()?;
    let grid = g.grid();
    let n = grid.n();
    let cells = conductivities(g);
    let stencil = assemble(grid, &cells);

    // load: −∫ ∇φ · A e₁, scaled like the stiffness (the grid spacing cancels)
    let mut rhs = vec![0.0; grid.len()];
    for (cell, gauss) in cells.iter().enumerate() {
        let (i, j) = grid.coords(cell);
        let corners = corner_nodes(grid, i, j);
        for (q, a) in gauss.iter().enumerate() {
            let grads = shape_gradients(q);
            for (c, &node) in corners.iter().enumerate() {
                rhs[node] -= 0.25 * (grads[c][0] * a.e + grads[c][1] * a.f) / n as f64;
            }
        }
    }

    let (potential, iterations, residual) = conjugate_gradient(&stencil, &rhs, grid)?;

    let h = grid.spacing();
    let (mut jx, mut jy) = (0.0, 0.0);
    for (cell, gauss) in cells.iter().enumerate() {
        let (i, j) = grid.coords(cell);
        let corners = corner_nodes(grid, i, j);
        for (q, a) in gauss.iter().enumerate() {
            let grads = shape_gradients(q);
            let (mut dx, mut dy) = (1.0, 0.0);
            for c in 0..4 {
                dx += potential[corners[c]] * grads[c][0] / h;
                dy += potential[corners[c]] * grads[c][1] / h;
            }
            jx += 0.25 * h * h * (a.e * dx + a.f * dy);
            jy += 0.25 * h * h * (a.f * dx + a.g * dy);
        }
    }
    let ratio = Complex64::new(0.0, jx) / Complex64::new(1.0, -jy);
    let flipped = ratio.im < 0.0;
    let ratio = if flipped { ratio.conj() } else { ratio };
    Ok(ModulusSolution {
        w: UHPoint::from_complex(ratio)?,
        flipped,
        cg_iterations: iterations,
        relative_residual: residual,
    })
}

/// Conductivity `sqrt(det g) g⁻¹` at the four Gauss points of every cell.
fn conductivities(g: &MetricField) -> Vec<[Sym2; 4]> {
    let grid = g.grid();
    (0..grid.len())
        .into_par_iter()
        .map(|cell| {
            let (i, j) = grid.coords(cell);
            let corners = corner_nodes(grid, i, j).map(|k| g.at(k));
            let mut out = [Sym2::IDENTITY; 4];
            for (q, slot) in out.iter_mut().enumerate() {
                let (s, t) = (GAUSS[q % 2], GAUSS[q / 2]);
                let m = corners[0] * ((1.0 - s) * (1.0 - t))
                    + corners[1] * (s * (1.0 - t))
                    + corners[2] * ((1.0 - s) * t)
                    + corners[3] * (s * t);
                let root = m.det().sqrt();
                *slot = Sym2::new(m.g / root, -m.f / root, m.e / root);
            }
            out
        })
        .collect()
}

/// Corners in the order (0,0), (1,0), (0,1), (1,1).
fn corner_nodes(grid: PeriodicGrid, i: usize, j: usize) -> [usize; 4] {
    [
        grid.index(i, j),
        grid.offset(i, j, 1, 0),
        grid.offset(i, j, 0, 1),
        grid.offset(i, j, 1, 1),
    ]
}

/// Reference-cell gradients of the four bilinear shape functions at Gauss point `q`.
fn shape_gradients(q: usize) -> [[f64; 2]; 4] {
    let (s, t) = (GAUSS[q % 2], GAUSS[q / 2]);
    [[-(1.0 - t), -(1.0 - s)], [1.0 - t, -s], [-t, 1.0 - s], [t, s]]
}

/// Nine-point stencil per node, offsets `(di, dj)` at slot `3(dj+1) + (di+1)`.
fn assemble(grid: PeriodicGrid, cells: &[[Sym2; 4]]) -> Vec<[f64; 9]> {
    let mut stencil = vec![[0.0; 9]; grid.len()];
    let local = [(0isize, 0isize), (1, 0), (0, 1), (1, 1)];
    for (cell, gauss) in cells.iter().enumerate() {
        let (i, j) = grid.coords(cell);
        let corners = corner_nodes(grid, i, j);
        let mut ke = [[0.0; 4]; 4];
        for (q, a) in gauss.iter().enumerate() {
            let grads = shape_gradients(q);
            for r in 0..4 {
                for c in 0..4 {
                    ke[r][c] += 0.25
                        * (grads[r][0] * (a.e * grads[c][0] + a.f * grads[c][1])
                            + grads[r][1] * (a.f * grads[c][0] + a.g * grads[c][1]));
                }
            }
        }
        for r in 0..4 {
            for c in 0..4 {
                let di = local[c].0 - local[r].0;
                let dj = local[c].1 - local[r].1;
                stencil[corners[r]][(3 * (dj + 1) + di + 1) as usize] += ke[r][c];
            }
        }
    }
    stencil
}

fn apply(stencil: &[[f64; 9]], grid: PeriodicGrid, x: &[f64], out: &mut [f64]) {
    out.par_iter_mut().enumerate().for_each(|(k, o)| {
        let (i, j) = grid.coords(k);
        let row = &stencil[k];
        let mut acc = 0.0;
        for dj in -1..=1isize {
            for di in -1..=1isize {
                acc += row[(3 * (dj + 1) + di + 1) as usize] * x[grid.offset(i, j, di, dj)];
            }
        }
        *o = acc;
    });
}

fn remove_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.par_iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned CG on the zero-mean subspace.
fn conjugate_gradient(stencil: &[[f64; 9]], rhs: &[f64], grid: PeriodicGrid) -> Result<(Vec<f64>, usize, f64)> {
    let len = rhs.len();
    let mut b = rhs.to_vec();
    remove_mean(&mut b);
    let b_norm = dot(&b, &b).sqrt();
    let mut x = vec![0.0; len];
    // a constant conductivity makes the load vanish up to roundoff
    if b_norm <= 1e-15 {
        return Ok((x, 0, 0.0));
    }
    let diag: Vec<f64> = stencil.iter().map(|row| row[4]).collect();
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    remove_mean(&mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; len];
    let max_iter = 50 * grid.n() + 1000;
    for iter in 1..=max_iter {
        apply(stencil, grid, &p, &mut ap);
        let step = rz / dot(&p, &ap);
        x.par_iter_mut().zip(&p).for_each(|(x, p)| *x += step * p);
        r.par_iter_mut().zip(&ap).for_each(|(r, ap)| *r -= step * ap);
        let res = dot(&r, &r).sqrt() / b_norm;
        if res <= CG_TOLERANCE {
            remove_mean(&mut x);
            return Ok((x, iter, res));
        }
        if !res.is_finite() {
            break;
        }
        z.par_iter_mut().zip(&r).zip(&diag).for_each(|((z, r), d)| *z = r / d);
        remove_mean(&mut z);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        p.par_iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
    }
    Err(Error::SolverDiverged {
        solver: "conjugate gradient",
        detail: format!("no convergence in {max_iter} iterations"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_grid::ScalarField;
    use crate::moduli::{build_target_metric, hyp_distance};
    use std::f64::consts::PI;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    #[test]
    fn rectangles() {
        let w = torus_modulus(&MetricField::constant(grid(16), Sym2::IDENTITY)).unwrap();
        assert!((w.re()).abs() < 1e-14 && (w.im() - 1.0).abs() < 1e-14);
        let w = torus_modulus(&MetricField::constant(grid(16), Sym2::new(1.0, 0.0, 4.0))).unwrap();
        assert!((w.im() - 2.0).abs() < 1e-14 && w.re().abs() < 1e-14);
    }

    #[test]
    fn flat_target_metric_recovers_its_lattice() {
        let w = UHPoint::new(0.3, 1.2).unwrap();
        let one = ScalarField::constant(grid(32), 1.0);
        let got = torus_modulus(&build_target_metric(&one, w, 0.25)).unwrap();
        assert!(hyp_distance(got, w) < 1e-12);
    }

    #[test]
    fn pulled_back_flat_metric_keeps_its_modulus() {
        // φ(x, y) = (x + 0.1 sin 2πy, y + 0.05 cos 2πx) is isotopic to the identity
        let w = UHPoint::new(-0.2, 0.9).unwrap();
        let flat = crate::moduli::beltrami_form(crate::moduli::mu_of_w(w));
        let g = MetricField::from_fn(grid(64), |x, y| {
            let (a, b) = (0.2 * PI * (2.0 * PI * y).cos(), -0.1 * PI * (2.0 * PI * x).sin());
            // columns of Dφ: (1, b) and (a, 1)
            Sym2::new(
                flat.eval(1.0, b),
                flat.e * a + flat.f * (1.0 + a * b) + flat.g * b,
                flat.eval(a, 1.0),
            )
        });
        let got = torus_modulus_detailed(&g).unwrap();
        assert!(got.cg_iterations > 0 && got.relative_residual <= CG_TOLERANCE);
        assert!(!got.flipped);
        assert!(hyp_distance(got.w, w) < 2e-3, "{}", hyp_distance(got.w, w));
    }

    #[test]
    fn conformal_factor_does_not_change_the_modulus() {
        let w = UHPoint::new(-0.2, 0.9).unwrap();
        let lambda2 = ScalarField::from_fn(grid(16), |x, y| (0.4 * (2.0 * PI * x).sin() * (2.0 * PI * y).cos()).exp());
        let got = torus_modulus(&build_target_metric(&lambda2, w, 1.0)).unwrap();
        assert!(hyp_distance(got, w) < 1e-12);
    }

    #[test]
    fn sheared_metric_is_not_flipped() {
        let got = torus_modulus_detailed(&MetricField::constant(grid(8), Sym2::new(2.0, 0.7, 1.0))).unwrap();
        assert!(!got.flipped);
        // lattice ⟨1, w⟩ with |1|² = 2, ⟨1, w⟩ = 0.7, |w|² = 1 up to scale
        let expected = Complex64::new(0.7, (2.0f64 - 0.49).sqrt()) / 2.0;
        assert!((got.w.to_complex() - expected).norm() < 1e-14);
    }

    #[test]
    fn rejects_indefinite_metrics() {
        let g = MetricField::constant(grid(8), Sym2::new(1.0, 2.0, 1.0));
        assert!(matches!(torus_modulus(&g), Err(Error::NotPositiveDefinite { .. })));
    }
}
