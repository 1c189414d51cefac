//! Taylor jets of periodic grid samples by spectral differentiation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::ScalarField;
use crate::jet::{n_coeffs, Jet};

/// Per-node jets of order `order` of the trigonometric interpolant of `field`.
///
/// Odd derivatives drop the Nyquist mode of even grids so that real data
/// stays real.
pub fn taylor_jets(field: &ScalarField, order: usize) -> Vec<Jet> {
    let grid = field.grid();
    let n = grid.n();
    let values = field.values();
    let first = values[0];
    if order == 0 || values.iter().all(|&v| v == first) {
        return values.iter().map(|&v| Jet::constant(v, order)).collect();
    }

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut spectrum: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut spectrum, n, |row| forward.process(row));

    let freq = |k: usize| -> f64 {
        if 2 * k < n {
            k as f64
        } else if 2 * k > n {
            k as f64 - n as f64
        } else {
            0.0 // Nyquist, only reached for odd derivative orders
        }
    };
    let norm = 1.0 / (n * n) as f64;

    let mut partials = vec![vec![0.0; values.len()]; n_coeffs(order)];
    for deg in 0..=order {
        for j in 0..=deg {
            let i = deg - j;
            let slot = crate::jet::slot(i, j);
            if deg == 0 {
                partials[slot].copy_from_slice(values);
                continue;
            }
            let mut buf = spectrum.clone();
            for ky in 0..n {
                let fy = if j % 2 == 1 { freq(ky) } else { signed_even(ky, n) };
                let my = Complex64::new(0.0, 2.0 * PI * fy).powu(j as u32);
                for kx in 0..n {
                    let fx = if i % 2 == 1 { freq(kx) } else { signed_even(kx, n) };
                    let mx = Complex64::new(0.0, 2.0 * PI * fx).powu(i as u32);
                    buf[ky * n + kx] *= mx * my;
                }
            }
            fft2(&mut buf, n, |row| inverse.process(row));
            for (dst, src) in partials[slot].iter_mut().zip(&buf) {
                *dst = src.re * norm;
            }
        }
    }

    (0..values.len())
        .map(|node| Jet::from_partials(order, |i, j| partials[crate::jet::slot(i, j)][node]))
        .collect()
}

fn signed_even(k: usize, n: usize) -> f64 {
    if 2 * k <= n {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// In-place 2-D transform: rows, then columns.
fn fft2(data: &mut [Complex64], n: usize, mut line: impl FnMut(&mut [Complex64])) {
    for row in data.chunks_mut(n) {
        line(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = data[r * n + c];
        }
        line(&mut col);
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
}
