use super::{FieldError, GridSpec};

/// Volume-weighted norms of a sampled field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// `sqrt(sum(|f|^2) * dV)`
    pub l2: f64,
    /// Largest pointwise magnitude.
    pub max: f64,
}

/// One real value per grid point, x-index fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, data: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self { grid, data: vec![value; grid.len()] }
    }

    pub fn from_vec(grid: GridSpec, data: Vec<f64>) -> Result<Self, FieldError> {
        if data.len() != grid.len() {
            return Err(FieldError::LengthMismatch { expected: grid.len(), found: data.len() });
        }
        Ok(Self { grid, data })
    }

    /// Samples `f(x, y, z)` at every grid point.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let mut data = vec![0.0; grid.len()];
        for (idx, [x, y, z]) in grid.points() {
            data[idx] = f(x, y, z);
        }
        Self { grid, data }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Self { grid: self.grid, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &Self) {
        debug_assert_eq!(self.grid, x.grid);
        for (y, &xv) in self.data.iter_mut().zip(&x.data) {
            *y += a * xv;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.data.len() as f64
    }

    /// `sum(data) * hx * hy * hz`
    pub fn integrate(&self) -> f64 {
        self.sum() * self.grid.cell_volume()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norms(&self) -> Norms {
        let sq: f64 = self.data.iter().map(|v| v * v).sum();
        let max = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Norms { l2: (sq * self.grid.cell_volume()).sqrt(), max }
    }

    pub fn l2(&self) -> f64 {
        self.norms().l2
    }

    pub fn max_abs(&self) -> f64 {
        self.norms().max
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Three scalar components on one shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    comps: [ScalarField; 3],
}

impl VectorField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self::from_components([ScalarField::zeros(grid), ScalarField::zeros(grid), ScalarField::zeros(grid)])
    }

    pub fn constant(grid: GridSpec, value: [f64; 3]) -> Self {
        Self::from_components(value.map(|v| ScalarField::constant(grid, v)))
    }

    /// Panics if the components live on different grids.
    pub fn from_components(comps: [ScalarField; 3]) -> Self {
        assert!(
            comps[0].grid == comps[1].grid && comps[1].grid == comps[2].grid,
            "vector components must share one grid"
        );
        Self { comps }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for (idx, [x, y, z]) in grid.points() {
            let v = f(x, y, z);
            for c in 0..3 {
                out.comps[c].data[idx] = v[c];
            }
        }
        out
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.comps[0].grid
    }

    #[inline]
    pub fn x(&self) -> &ScalarField {
        &self.comps[0]
    }

    #[inline]
    pub fn y(&self) -> &ScalarField {
        &self.comps[1]
    }

    #[inline]
    pub fn z(&self) -> &ScalarField {
        &self.comps[2]
    }

    #[inline]
    pub fn comp(&self, c: usize) -> &ScalarField {
        &self.comps[c]
    }

    #[inline]
    pub fn comp_mut(&mut self, c: usize) -> &mut ScalarField {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[ScalarField; 3] {
        &self.comps
    }

    pub fn into_components(self) -> [ScalarField; 3] {
        self.comps
    }

    #[inline]
    pub fn at(&self, idx: usize) -> [f64; 3] {
        [self.comps[0].data[idx], self.comps[1].data[idx], self.comps[2].data[idx]]
    }

    pub fn map_components(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Self::from_components([f(&self.comps[0]), f(&self.comps[1]), f(&self.comps[2])])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_components([0, 1, 2].map(|c| self.comps[c].add(&other.comps[c])))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_components([0, 1, 2].map(|c| self.comps[c].sub(&other.comps[c])))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_components(|f| f.scale(s))
    }

    /// Multiplies every component by the scalar field `s`.
    pub fn mul_scalar(&self, s: &ScalarField) -> Self {
        self.map_components(|f| f.mul(s))
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        for c in 0..3 {
            self.comps[c].axpy(a, &x.comps[c]);
        }
    }

    /// Adds a uniform vector to every point.
    pub fn add_uniform(&self, u: [f64; 3]) -> Self {
        Self::from_components([0, 1, 2].map(|c| self.comps[c].map(|v| v + u[c])))
    }

    /// Pointwise `self x other`.
    pub fn cross(&self, other: &Self) -> Self {
        let grid = *self.grid();
        let mut out = Self::zeros(grid);
        for idx in 0..grid.len() {
            let a = self.at(idx);
            let b = other.at(idx);
            out.comps[0].data[idx] = a[1] * b[2] - a[2] * b[1];
            out.comps[1].data[idx] = a[2] * b[0] - a[0] * b[2];
            out.comps[2].data[idx] = a[0] * b[1] - a[1] * b[0];
        }
        out
    }

    /// Pointwise `self . other`.
    pub fn dot(&self, other: &Self) -> ScalarField {
        let grid = *self.grid();
        let mut out = ScalarField::zeros(grid);
        for idx in 0..grid.len() {
            let a = self.at(idx);
            let b = other.at(idx);
            out.data[idx] = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        }
        out
    }

    /// Pointwise `M v` for a constant 3x3 matrix.
    pub fn mat_mul(&self, m: &[[f64; 3]; 3]) -> Self {
        let grid = *self.grid();
        let mut out = Self::zeros(grid);
        for idx in 0..grid.len() {
            let v = self.at(idx);
            for (i, row) in m.iter().enumerate() {
                out.comps[i].data[idx] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
            }
        }
        out
    }

    pub fn magnitude_sq(&self) -> ScalarField {
        self.dot(self)
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(ScalarField::is_finite)
    }

    pub fn integrate(&self) -> [f64; 3] {
        [0, 1, 2].map(|c| self.comps[c].integrate())
    }

    /// l2 over all three components; max of the pointwise Euclidean magnitude.
    pub fn norms(&self) -> Norms {
        let grid = self.grid();
        let mut sq = 0.0;
        let mut max = 0.0_f64;
        for idx in 0..grid.len() {
            let v = self.at(idx);
            let m2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            sq += m2;
            max = max.max(m2.sqrt());
        }
        Norms { l2: (sq * grid.cell_volume()).sqrt(), max }
    }

    pub fn l2(&self) -> f64 {
        self.norms().l2
    }

    pub fn max_abs(&self) -> f64 {
        self.norms().max
    }
}
