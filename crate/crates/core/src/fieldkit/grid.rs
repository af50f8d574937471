use super::FieldError;

/// Central-difference accuracy order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StencilOrder {
    Order2,
    Order4,
}

impl StencilOrder {
    pub fn from_int(p: u32) -> Option<Self> {
        match p {
            2 => Some(Self::Order2),
            4 => Some(Self::Order4),
            _ => None,
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Self::Order2 => 2,
            Self::Order4 => 4,
        }
    }

    /// Smallest cell count per axis the stencil supports without aliasing
    /// its own footprint.
    pub fn min_cells(self) -> usize {
        match self {
            Self::Order2 => 4,
            Self::Order4 => 8,
        }
    }
}

/// Uniform periodic sampling of the box `[0, lx) x [0, ly) x [0, lz)`.
///
/// Sample `i` along an axis sits at `i * h`. Storage is x-fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, nz: usize, lx: f64, ly: f64, lz: f64) -> Result<Self, FieldError> {
        for (axis, n) in [("nx", nx), ("ny", ny), ("nz", nz)] {
            if n < StencilOrder::Order2.min_cells() {
                return Err(FieldError::InvalidGrid(format!("{axis} = {n} is below the minimum of 4 cells")));
            }
        }
        for (axis, l) in [("lx", lx), ("ly", ly), ("lz", lz)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(FieldError::InvalidGrid(format!("{axis} = {l} must be finite and positive")));
            }
        }
        Ok(Self { nx, ny, nz, lx, ly, lz })
    }

    /// Cube of side `2π` with `n` cells per axis.
    pub fn cube(n: usize) -> Result<Self, FieldError> {
        let l = 2.0 * std::f64::consts::PI;
        Self::new(n, n, n, l, l, l)
    }

    /// Checks that every axis can hold the given stencil.
    pub fn check_order(&self, order: StencilOrder) -> Result<(), FieldError> {
        let min = order.min_cells();
        if self.nx < min || self.ny < min || self.nz < min {
            return Err(FieldError::InvalidGrid(format!(
                "order-{} stencils need at least {min} cells per axis, grid is {}x{}x{}",
                order.as_int(),
                self.nx,
                self.ny,
                self.nz
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.nx, self.ny, self.nz]
    }

    pub fn lengths(&self) -> [f64; 3] {
        [self.lx, self.ly, self.lz]
    }

    pub fn spacing(&self) -> [f64; 3] {
        [
            self.lx / self.nx as f64,
            self.ly / self.ny as f64,
            self.lz / self.nz as f64,
        ]
    }

    pub fn h_min(&self) -> f64 {
        let [hx, hy, hz] = self.spacing();
        hx.min(hy).min(hz)
    }

    pub fn cell_volume(&self) -> f64 {
        let [hx, hy, hz] = self.spacing();
        hx * hy * hz
    }

    pub fn volume(&self) -> f64 {
        self.lx * self.ly * self.lz
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    /// Physical coordinates of sample `(i, j, k)`.
    #[inline]
    pub fn coords(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        let [hx, hy, hz] = self.spacing();
        [i as f64 * hx, j as f64 * hy, k as f64 * hz]
    }

    /// Iterates `(flat_index, [x, y, z])` in storage order.
    pub fn points(&self) -> impl Iterator<Item = (usize, [f64; 3])> + '_ {
        let [hx, hy, hz] = self.spacing();
        let (nx, ny, nz) = (self.nx, self.ny, self.nz);
        (0..nz).flat_map(move |k| {
            (0..ny).flat_map(move |j| {
                (0..nx).map(move |i| (i + nx * (j + ny * k), [i as f64 * hx, j as f64 * hy, k as f64 * hz]))
            })
        })
    }

    /// Same box with every cell count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self { nx: self.nx * factor, ny: self.ny * factor, nz: self.nz * factor, ..*self }
    }
}
