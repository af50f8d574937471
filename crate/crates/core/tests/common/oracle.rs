//! Hand-derived linearization of both systems about `{rho0, P0, H0, v = 0}`
//! for one Fourier mode, with derivatives replaced by `i k~`.
//!
//! Unknowns `[A or H (3), v (3), rho, P]`. Potential form:
//!
//! ```text
//! dA/dt   = dv x H0
//! dv/dt   = -i k~ dP / rho0 - (1 / 4 pi rho0) M (|k~|^2 dA - k~ (k~ . dA))
//! drho/dt = -i rho0 k~ . dv
//! dP/dt   = -i gamma P0 k~ . dv
//! ```
//!
//! Field form: `dH/dt = i [dv (k~ . H0) - H0 (k~ . dv)]`,
//! `dv/dt = -i k~ dP / rho0 + (i / 4 pi rho0) [dH (k~ . H0) - k~ (dH . H0)]`.
//!
//! The real system in the `{cos, sin}` basis has the spectrum of the complex
//! symbol together with its conjugate, obtained here by realification.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};

type C = Complex<f64>;

fn eps3(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn symbol(
    modified: bool,
    kt: [f64; 3],
    rho0: f64,
    p0: f64,
    gamma: f64,
    h0: [f64; 3],
    m: [[f64; 3]; 3],
) -> DMatrix<C> {
    let i = C::new(0.0, 1.0);
    let mut l = DMatrix::<C>::zeros(8, 8);
    let k2: f64 = kt.iter().map(|k| k * k).sum();
    let kh: f64 = (0..3).map(|d| kt[d] * h0[d]).sum();
    for a in 0..3 {
        for b in 0..3 {
            if modified {
                // (dv x H0)_a = eps_abm dv_b H0_m
                l[(a, 3 + b)] = C::from((0..3).map(|mm| eps3(a, b, mm) * h0[mm]).sum::<f64>());
                let proj = |kk: usize, j: usize| if kk == j { k2 } else { 0.0 } - kt[kk] * kt[j];
                let v: f64 = (0..3).map(|kk| m[a][kk] * proj(kk, b)).sum();
                l[(3 + a, b)] = C::from(-v / (4.0 * PI * rho0));
            } else {
                let delta = if a == b { kh } else { 0.0 };
                l[(a, 3 + b)] = i * (delta - h0[a] * kt[b]);
                l[(3 + a, b)] = i * (delta - kt[a] * h0[b]) / (4.0 * PI * rho0);
            }
        }
        l[(3 + a, 7)] = -i * kt[a] / rho0;
        l[(6, 3 + a)] = -i * rho0 * kt[a];
        l[(7, 3 + a)] = -i * gamma * p0 * kt[a];
    }
    l
}

/// Frequencies `omega = i lambda` of the realified symbol, sorted like the
/// library output.
pub fn oracle_omegas(l: &DMatrix<C>) -> Vec<C> {
    let n = l.nrows();
    let mut r = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            let z = l[(a, b)];
            r[(a, b)] = z.re;
            r[(a, n + b)] = -z.im;
            r[(n + a, b)] = z.im;
            r[(n + a, n + b)] = z.re;
        }
    }
    let mut w: Vec<C> = r.complex_eigenvalues().iter().map(|l| C::new(-l.im, l.re)).collect();
    w.sort_by(|a, b| a.re.abs().total_cmp(&b.re.abs()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
    w
}

/// Largest mismatch between two frequency multisets (greedy nearest
/// matching), relative to the largest frequency.
pub fn max_rel_mismatch(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = a.iter().chain(b).map(|w| w.norm()).fold(0.0, f64::max);
    let mut free: Vec<C> = b.to_vec();
    let mut worst = 0.0f64;
    for x in a {
        let (idx, d) = free
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("same length");
        worst = worst.max(d);
        free.swap_remove(idx);
    }
    worst / scale
}

pub fn symmetric_matrix(h0: [f64; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|k| 0.5 * (0..3).map(|j| eps3(i, j, k) * h0[j]).sum::<f64>()))
}
