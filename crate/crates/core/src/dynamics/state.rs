use crate::emcore::{h_from_a, BackgroundPotential};
use crate::fieldkit::{GridSpec, ScalarField, VectorField};
use crate::params::PhysParams;

/// Which closed system is being marched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// Potential `A` in Coulomb gauge with force `-(1/c)(j . grad)A`.
    ModifiedA,
    /// Field `H` with the Lorentz force.
    TraditionalH,
}

impl Formulation {
    pub fn name(self) -> &'static str {
        match self {
            Self::ModifiedA => "modified",
            Self::TraditionalH => "traditional",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "modified" => Some(Self::ModifiedA),
            "traditional" => Some(Self::TraditionalH),
            _ => None,
        }
    }
}

/// Magnetic part of the state.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnetic {
    /// Periodic potential plus frozen affine background.
    Potential { a: VectorField, bg: BackgroundPotential },
    /// Periodic field fluctuation plus frozen uniform mean `h0`.
    Field { h: VectorField, h0: [f64; 3] },
}

impl Magnetic {
    /// The evolved vector field (`A_periodic` or the `H` fluctuation).
    pub fn evolved(&self) -> &VectorField {
        match self {
            Self::Potential { a, .. } => a,
            Self::Field { h, .. } => h,
        }
    }

    pub fn evolved_mut(&mut self) -> &mut VectorField {
        match self {
            Self::Potential { a, .. } => a,
            Self::Field { h, .. } => h,
        }
    }

    pub fn formulation(&self) -> Formulation {
        match self {
            Self::Potential { .. } => Formulation::ModifiedA,
            Self::Field { .. } => Formulation::TraditionalH,
        }
    }

    /// Uniform mean field.
    pub fn mean_field(&self) -> [f64; 3] {
        match self {
            Self::Potential { bg, .. } => bg.field(),
            Self::Field { h0, .. } => *h0,
        }
    }
}

/// The eight unknowns `(A or H, v, rho, P)` plus time.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub magnetic: Magnetic,
    pub v: VectorField,
    pub rho: ScalarField,
    pub p: ScalarField,
    pub t: f64,
}

impl SimState {
    pub fn grid(&self) -> &GridSpec {
        self.rho.grid()
    }

    pub fn formulation(&self) -> Formulation {
        self.magnetic.formulation()
    }

    /// Total magnetic field `H = curl A + H0` or `H + H0`.
    pub fn h_total(&self, params: &PhysParams) -> VectorField {
        match &self.magnetic {
            Magnetic::Potential { a, bg } => h_from_a(a, bg, params),
            Magnetic::Field { h, h0 } => h.add_uniform(*h0),
        }
    }

    /// `self + dt * rates` with time unchanged.
    pub fn add_scaled(&self, dt: f64, rates: &Rates) -> Self {
        let mut out = self.clone();
        out.magnetic.evolved_mut().axpy(dt, &rates.magnetic);
        out.v.axpy(dt, &rates.v);
        out.rho.axpy(dt, &rates.rho);
        out.p.axpy(dt, &rates.p);
        out
    }

    /// The evolved fields in snapshot order: magnetic components, `v`, `rho`, `P`.
    pub fn evolved_components(&self) -> [&ScalarField; 8] {
        let m = self.magnetic.evolved();
        [m.x(), m.y(), m.z(), self.v.x(), self.v.y(), self.v.z(), &self.rho, &self.p]
    }

    /// Converts a modified-formulation state to the equivalent traditional
    /// one (`H = curl A`, `h0` from the background). Traditional states are
    /// returned unchanged.
    pub fn to_traditional(&self, params: &PhysParams) -> Self {
        match &self.magnetic {
            Magnetic::Potential { a, bg } => Self {
                magnetic: Magnetic::Field { h: crate::fieldkit::curl(a, params.order), h0: bg.field() },
                ..self.clone()
            },
            Magnetic::Field { .. } => self.clone(),
        }
    }
}

/// Time derivatives of the evolved fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Rates {
    pub magnetic: VectorField,
    pub v: VectorField,
    pub rho: ScalarField,
    pub p: ScalarField,
}

impl Rates {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            magnetic: VectorField::zeros(grid),
            v: VectorField::zeros(grid),
            rho: ScalarField::zeros(grid),
            p: ScalarField::zeros(grid),
        }
    }

    pub fn axpy(&mut self, a: f64, other: &Rates) {
        self.magnetic.axpy(a, &other.magnetic);
        self.v.axpy(a, &other.v);
        self.rho.axpy(a, &other.rho);
        self.p.axpy(a, &other.p);
    }

    /// The eight component fields in state order.
    pub fn components(&self) -> [&ScalarField; 8] {
        let m = self.magnetic.components();
        let v = self.v.components();
        [&m[0], &m[1], &m[2], &v[0], &v[1], &v[2], &self.rho, &self.p]
    }

    pub fn is_identically_zero(&self) -> bool {
        self.components().iter().all(|c| c.data().iter().all(|&v| v == 0.0))
    }
}
