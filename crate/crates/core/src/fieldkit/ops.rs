//! Collocated central-difference operators on the periodic grid.
//!
//! Every first-derivative operator is built from one per-axis stencil, so
//! the discrete identities `curl(grad s) = 0` and `div(curl V) = 0` hold to
//! roundoff. The Laplacian used by the Poisson solver is `div(grad s)`
//! exactly (the wide stencil); the compact second-difference Laplacian is a
//! separate operator used for cross-checks.

use super::{ScalarField, StencilOrder, VectorField};

/// Per-axis neighbour index tables with periodic wraparound.
struct Wrap {
    m2: Vec<usize>,
    m1: Vec<usize>,
    p1: Vec<usize>,
    p2: Vec<usize>,
}

impl Wrap {
    fn new(n: usize) -> Self {
        let w = |i: usize, off: isize| ((i as isize + off).rem_euclid(n as isize)) as usize;
        Self {
            m2: (0..n).map(|i| w(i, -2)).collect(),
            m1: (0..n).map(|i| w(i, -1)).collect(),
            p1: (0..n).map(|i| w(i, 1)).collect(),
            p2: (0..n).map(|i| w(i, 2)).collect(),
        }
    }
}

/// Applies a 5-point axis stencil `c[0..5]` at offsets `-2..=2`, scaled by `scale`.
fn axis_stencil(s: &ScalarField, axis: usize, coeffs: [f64; 5], scale: f64) -> ScalarField {
    let grid = *s.grid();
    let [nx, ny, nz] = grid.dims();
    let n = grid.dims()[axis];
    let wrap = Wrap::new(n);
    let stride = match axis {
        0 => 1,
        1 => nx,
        _ => nx * ny,
    };
    let src = s.data();
    let mut out = vec![0.0; grid.len()];
    let [c_m2, c_m1, c_0, c_p1, c_p2] = coeffs;
    let wide = c_m2 != 0.0 || c_p2 != 0.0;
    for k in 0..nz {
        for j in 0..ny {
            let row = nx * (j + ny * k);
            for i in 0..nx {
                let idx = row + i;
                let a = [i, j, k][axis];
                let base = idx - a * stride;
                let fm1 = src[base + wrap.m1[a] * stride];
                let fp1 = src[base + wrap.p1[a] * stride];
                let mut acc = c_p1 * fp1 + c_m1 * fm1;
                if c_0 != 0.0 {
                    acc += c_0 * src[idx];
                }
                if wide {
                    let fm2 = src[base + wrap.m2[a] * stride];
                    let fp2 = src[base + wrap.p2[a] * stride];
                    acc += c_p2 * fp2 + c_m2 * fm2;
                }
                out[idx] = acc * scale;
            }
        }
    }
    ScalarField::from_vec(grid, out).expect("stencil output length")
}

/// Central first derivative along `axis` (0 = x, 1 = y, 2 = z).
pub fn diff(s: &ScalarField, axis: usize, order: StencilOrder) -> ScalarField {
    let h = s.grid().spacing()[axis];
    match order {
        // (f[i+1] - f[i-1]) / 2h
        StencilOrder::Order2 => axis_stencil(s, axis, [0.0, -1.0, 0.0, 1.0, 0.0], 1.0 / (2.0 * h)),
        // (-f[i+2] + 8 f[i+1] - 8 f[i-1] + f[i-2]) / 12h
        StencilOrder::Order4 => axis_stencil(s, axis, [1.0, -8.0, 0.0, 8.0, -1.0], 1.0 / (12.0 * h)),
    }
}

/// Compact central second derivative along `axis`.
pub fn diff2_compact(s: &ScalarField, axis: usize, order: StencilOrder) -> ScalarField {
    let h = s.grid().spacing()[axis];
    match order {
        StencilOrder::Order2 => axis_stencil(s, axis, [0.0, 1.0, -2.0, 1.0, 0.0], 1.0 / (h * h)),
        StencilOrder::Order4 => axis_stencil(s, axis, [-1.0, 16.0, -30.0, 16.0, -1.0], 1.0 / (12.0 * h * h)),
    }
}

pub fn grad(s: &ScalarField, order: StencilOrder) -> VectorField {
    VectorField::from_components([diff(s, 0, order), diff(s, 1, order), diff(s, 2, order)])
}

pub fn div(v: &VectorField, order: StencilOrder) -> ScalarField {
    let mut out = diff(v.x(), 0, order);
    out.axpy(1.0, &diff(v.y(), 1, order));
    out.axpy(1.0, &diff(v.z(), 2, order));
    out
}

pub fn curl(v: &VectorField, order: StencilOrder) -> VectorField {
    let cx = diff(v.z(), 1, order).sub(&diff(v.y(), 2, order));
    let cy = diff(v.x(), 2, order).sub(&diff(v.z(), 0, order));
    let cz = diff(v.y(), 0, order).sub(&diff(v.x(), 1, order));
    VectorField::from_components([cx, cy, cz])
}

/// `curl(curl(v))`, composed rather than fused so it shares `curl`.
pub fn curl_curl(v: &VectorField, order: StencilOrder) -> VectorField {
    curl(&curl(v, order), order)
}

/// `(v . grad) w`: `out_i = sum_k v_k d_k w_i`.
pub fn advect(v: &VectorField, w: &VectorField, order: StencilOrder) -> VectorField {
    let grid = *v.grid();
    let mut out = VectorField::zeros(grid);
    for k in 0..3 {
        for i in 0..3 {
            let d = diff(w.comp(i), k, order);
            let dst = out.comp_mut(i).data_mut();
            for ((o, &vk), &dk) in dst.iter_mut().zip(v.comp(k).data()).zip(d.data()) {
                *o += vk * dk;
            }
        }
    }
    out
}

/// Gradient acting on `w` only, contracted with `v`: `out_i = sum_k v_k d_i w_k`.
pub fn grad_contract(v: &VectorField, w: &VectorField, order: StencilOrder) -> VectorField {
    let grid = *v.grid();
    let mut out = VectorField::zeros(grid);
    for i in 0..3 {
        for k in 0..3 {
            let d = diff(w.comp(k), i, order);
            let dst = out.comp_mut(i).data_mut();
            for ((o, &vk), &dk) in dst.iter_mut().zip(v.comp(k).data()).zip(d.data()) {
                *o += vk * dk;
            }
        }
    }
    out
}

/// `div(grad(s))`, the wide-stencil Laplacian the Poisson solver inverts.
pub fn laplacian(s: &ScalarField, order: StencilOrder) -> ScalarField {
    let mut out = diff(&diff(s, 0, order), 0, order);
    out.axpy(1.0, &diff(&diff(s, 1, order), 1, order));
    out.axpy(1.0, &diff(&diff(s, 2, order), 2, order));
    out
}

/// Compact-stencil Laplacian of each component.
pub fn vector_laplacian(v: &VectorField, order: StencilOrder) -> VectorField {
    v.map_components(|s| {
        let mut out = diff2_compact(s, 0, order);
        out.axpy(1.0, &diff2_compact(s, 1, order));
        out.axpy(1.0, &diff2_compact(s, 2, order));
        out
    })
}

/// The differential operators as an object, so that verification code can be
/// run against substitute implementations.
pub trait DiffOps {
    fn order(&self) -> StencilOrder;

    fn grad(&self, s: &ScalarField) -> VectorField {
        grad(s, self.order())
    }

    fn div(&self, v: &VectorField) -> ScalarField {
        div(v, self.order())
    }

    fn curl(&self, v: &VectorField) -> VectorField {
        curl(v, self.order())
    }

    fn curl_curl(&self, v: &VectorField) -> VectorField {
        self.curl(&self.curl(v))
    }

    fn advect(&self, v: &VectorField, w: &VectorField) -> VectorField {
        advect(v, w, self.order())
    }

    fn grad_contract(&self, v: &VectorField, w: &VectorField) -> VectorField {
        grad_contract(v, w, self.order())
    }

    fn vector_laplacian(&self, v: &VectorField) -> VectorField {
        vector_laplacian(v, self.order())
    }
}

/// The production central-difference operators.
#[derive(Debug, Clone, Copy)]
pub struct Central(pub StencilOrder);

impl DiffOps for Central {
    fn order(&self) -> StencilOrder {
        self.0
    }
}
