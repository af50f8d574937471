//! Matrix-free conjugate gradient on the periodic `div(grad)` operator, and
//! the Helmholtz projection built on it.

use super::ops::{div, grad, laplacian};
use super::{FieldError, GridSpec, ScalarField, StencilOrder, VectorField};

/// Default relative tolerance for Poisson solves and projections.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative mean allowed in a Poisson right-hand side.
const MEAN_TOL: f64 = 1e-12;

/// Iteration budget for a grid: `50 * max(nx, ny, nz)`.
pub fn iteration_budget(grid: &GridSpec) -> usize {
    50 * grid.nx.max(grid.ny).max(grid.nz)
}

fn subtract_mean(f: &mut ScalarField) {
    let m = f.mean();
    for v in f.data_mut() {
        *v -= m;
    }
}

/// Removes the kernel of the wide central stencil: the mean plus, on axes
/// with an even cell count, the alternating `(-1)^i` patterns.
fn remove_kernel(f: &mut ScalarField) {
    let grid = *f.grid();
    let dims = grid.dims();
    let freqs: Vec<[bool; 3]> = (0..8u8)
        .map(|b| [b & 1 != 0, b & 2 != 0, b & 4 != 0])
        .filter(|alt| (0..3).all(|a| !alt[a] || dims[a].is_multiple_of(2)))
        .collect();
    let n = grid.len() as f64;
    for alt in freqs {
        let sign = |i: usize, j: usize, k: usize| {
            let parity = (alt[0] as usize * i) + (alt[1] as usize * j) + (alt[2] as usize * k);
            if parity.is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        };
        let mut coeff = 0.0;
        for k in 0..grid.nz {
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    coeff += sign(i, j, k) * f.data()[grid.index(i, j, k)];
                }
            }
        }
        coeff /= n;
        let data = f.data_mut();
        for k in 0..grid.nz {
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    data[grid.index(i, j, k)] -= coeff * sign(i, j, k);
                }
            }
        }
    }
}

/// Solves `laplacian(u) = rhs` for zero-mean `u`, where `laplacian` is
/// `div(grad)` of the given order.
///
/// The right-hand side must have zero mean (relative `1e-12`); callers
/// subtract it. Any remaining grid-scale kernel content (the `(-1)^i`
/// patterns, which `div` never produces in exact arithmetic) is dropped.
/// Converges when `||lap(u) - rhs|| <= tol * ||rhs||`.
pub fn poisson_solve(rhs: &ScalarField, tol: f64, order: StencilOrder) -> Result<ScalarField, FieldError> {
    let grid = *rhs.grid();
    let rhs_norm = rhs.dot(rhs).sqrt();
    if rhs_norm == 0.0 {
        return Ok(ScalarField::zeros(grid));
    }
    let rms = rhs_norm / (grid.len() as f64).sqrt();
    let mean = rhs.mean();
    if mean.abs() > MEAN_TOL * rms {
        return Err(FieldError::NonZeroMean { mean, rms });
    }

    // Solve A u = b with A = -lap (symmetric positive semidefinite), b = -rhs.
    // Only the part of rhs outside the stencil kernel is solvable.
    let apply = |u: &ScalarField| laplacian(u, order).scale(-1.0);
    let mut b = rhs.scale(-1.0);
    remove_kernel(&mut b);

    let mut u = ScalarField::zeros(grid);
    let mut r = b.clone();
    let mut p = r.clone();
    let mut rr = r.dot(&r);
    let target = tol * rhs_norm;
    // Below this the recursive residual is pure roundoff and CG stops making progress.
    let floor = 1e-15 * rhs_norm;
    let budget = iteration_budget(&grid);

    let mut iterations = 0;
    while iterations < budget {
        if rr.sqrt() <= target.max(floor) {
            break;
        }
        let ap = apply(&p);
        let pap = p.dot(&ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        u.axpy(alpha, &p);
        r.axpy(-alpha, &ap);
        subtract_mean(&mut u);
        let rr_new = r.dot(&r);
        let beta = rr_new / rr;
        rr = rr_new;
        let mut next = r.clone();
        next.axpy(beta, &p);
        p = next;
        iterations += 1;
    }

    remove_kernel(&mut u);
    let true_resid = laplacian(&u, order).add(&b);
    let resid = true_resid.dot(&true_resid).sqrt();
    if resid > target {
        return Err(FieldError::NotConverged { iterations, residual: resid / rhs_norm });
    }
    Ok(u)
}

/// Removes the gradient part of `v`.
///
/// Returns `(v - grad(phi), phi)` with `lap(phi) = div(v)`. The curl is
/// untouched up to roundoff. The divergence of the result is bounded by
/// `tol * ||div v||` plus a roundoff floor of order `eps * ||v|| / h`.
pub fn helmholtz_project(v: &VectorField, tol: f64, order: StencilOrder) -> Result<(VectorField, ScalarField), FieldError> {
    let grid = *v.grid();
    let mut d = div(v, order);
    if d.data().iter().all(|&x| x == 0.0) {
        return Ok((v.clone(), ScalarField::zeros(grid)));
    }
    subtract_mean(&mut d);
    let phi = poisson_solve(&d, tol, order)?;
    let projected = v.sub(&grad(&phi, order));
    Ok((projected, phi))
}
