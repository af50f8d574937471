//! Second-order forward-mode jets in `(x, y, z, t)`, used to differentiate
//! closed-form solutions exactly.

use std::ops::{Add, Mul, Neg, Sub};

/// Value, gradient and Hessian of a scalar function of `(x, y, z, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: [f64; 4],
    pub h: [[f64; 4]; 4],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Self { v, d: [0.0; 4], h: [[0.0; 4]; 4] }
    }

    /// The coordinate `axis` (0..3 spatial, 3 = time) evaluated at `v`.
    pub fn var(axis: usize, v: f64) -> Self {
        let mut d = [0.0; 4];
        d[axis] = 1.0;
        Self { v, d, h: [[0.0; 4]; 4] }
    }

    /// The four coordinates at a point.
    pub fn coords(x: f64, y: f64, z: f64, t: f64) -> [Jet; 4] {
        [Jet::var(0, x), Jet::var(1, y), Jet::var(2, z), Jet::var(3, t)]
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.v`.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Self::constant(f0);
        for a in 0..4 {
            out.d[a] = f1 * self.d[a];
            for b in 0..4 {
                out.h[a][b] = f1 * self.h[a][b] + f2 * self.d[a] * self.d[b];
            }
        }
        out
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn scale(self, k: f64) -> Self {
        let mut out = self;
        out.v *= k;
        for a in 0..4 {
            out.d[a] *= k;
            for b in 0..4 {
                out.h[a][b] *= k;
            }
        }
        out
    }

    pub fn offset(self, k: f64) -> Self {
        Self { v: self.v + k, ..self }
    }

    /// First derivative along a spatial axis or time.
    pub fn dx(&self, axis: usize) -> f64 {
        self.d[axis]
    }

    pub fn dxx(&self, a: usize, b: usize) -> f64 {
        self.h[a][b]
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut out = self;
        out.v += o.v;
        for a in 0..4 {
            out.d[a] += o.d[a];
            for b in 0..4 {
                out.h[a][b] += o.h[a][b];
            }
        }
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut out = Jet::constant(self.v * o.v);
        for a in 0..4 {
            out.d[a] = self.d[a] * o.v + self.v * o.d[a];
            for b in 0..4 {
                out.h[a][b] =
                    self.h[a][b] * o.v + self.d[a] * o.d[b] + self.d[b] * o.d[a] + self.v * o.h[a][b];
            }
        }
        out
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        o.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_trig_matches_hand_derivatives() {
        // f = sin(x) cos(2y + t)
        let [x, y, _, t] = Jet::coords(0.3, -0.7, 0.0, 0.2);
        let f = x.sin() * (2.0 * y + t).cos();
        let (sx, cx) = 0.3f64.sin_cos();
        let arg = 2.0 * -0.7 + 0.2;
        let (sa, ca) = f64::sin_cos(arg);
        assert!((f.v - sx * ca).abs() < 1e-15);
        assert!((f.dx(0) - cx * ca).abs() < 1e-15);
        assert!((f.dx(1) + 2.0 * sx * sa).abs() < 1e-15);
        assert!((f.dx(3) + sx * sa).abs() < 1e-15);
        assert!((f.dxx(0, 0) + sx * ca).abs() < 1e-15);
        assert!((f.dxx(0, 1) + 2.0 * cx * sa).abs() < 1e-15);
        assert!((f.dxx(1, 1) + 4.0 * sx * ca).abs() < 1e-15);
        assert_eq!(f.dxx(0, 1), f.dxx(1, 0));
    }

    #[test]
    fn derivatives_agree_with_finite_differences() {
        let f = |p: [f64; 4]| {
            let [x, y, z, t] = Jet::coords(p[0], p[1], p[2], p[3]);
            (x + z.scale(0.5)).sin() * (y - t).cos().offset(2.0) + (x * y).cos()
        };
        let p0 = [0.4, 1.1, -0.3, 0.25];
        let j = f(p0);
        let h = 1e-5;
        for a in 0..4 {
            let mut pp = p0;
            let mut pm = p0;
            pp[a] += h;
            pm[a] -= h;
            let fd = (f(pp).v - f(pm).v) / (2.0 * h);
            assert!((fd - j.d[a]).abs() < 1e-8, "axis {a}");
            let fd2 = (f(pp).d[a] - f(pm).d[a]) / (2.0 * h);
            assert!((fd2 - j.h[a][a]).abs() < 1e-8, "axis {a}");
        }
    }
}
