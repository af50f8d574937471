use crate::fieldkit::{StencilOrder, DEFAULT_TOL};

/// When the Coulomb-gauge projection runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeMode {
    Off,
    EveryStep,
    /// Project after every `n`-th step (`n >= 1`).
    EveryN(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugePolicy {
    pub mode: GaugeMode,
    /// Relative Poisson tolerance used by the projection.
    pub tol: f64,
}

impl GaugePolicy {
    pub fn every_step() -> Self {
        Self { mode: GaugeMode::EveryStep, tol: DEFAULT_TOL }
    }

    pub fn off() -> Self {
        Self { mode: GaugeMode::Off, tol: DEFAULT_TOL }
    }

    /// Whether the step with zero-based index `step` ends with a projection.
    pub fn applies_after(&self, step: u64) -> bool {
        match self.mode {
            GaugeMode::Off => false,
            GaugeMode::EveryStep => true,
            GaugeMode::EveryN(n) => (step + 1).is_multiple_of(u64::from(n.max(1))),
        }
    }
}

impl Default for GaugePolicy {
    fn default() -> Self {
        Self::every_step()
    }
}

/// Physical constants and numerical knobs shared by every operation.
///
/// Gaussian units with `mu = 1`; `c` is a runtime parameter so the `1/c` and
/// `4 pi` factors stay explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub c: f64,
    pub gamma: f64,
    pub courant: f64,
    pub order: StencilOrder,
    pub gauge: GaugePolicy,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            gamma: 5.0 / 3.0,
            courant: 0.4,
            order: StencilOrder::Order2,
            gauge: GaugePolicy::default(),
        }
    }
}

impl PhysParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(format!("c = {} must be positive", self.c));
        }
        if !(self.gamma.is_finite() && self.gamma > 1.0) {
            return Err(format!("gamma = {} must exceed 1", self.gamma));
        }
        if !(self.courant > 0.0 && self.courant <= 1.0) {
            return Err(format!("courant = {} must lie in (0, 1]", self.courant));
        }
        if !(self.gauge.tol.is_finite() && self.gauge.tol > 0.0) {
            return Err(format!("gauge tolerance {} must be positive", self.gauge.tol));
        }
        if let GaugeMode::EveryN(0) = self.gauge.mode {
            return Err("gauge interval must be at least 1".into());
        }
        Ok(())
    }

    pub fn with_order(mut self, order: StencilOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_gauge(mut self, gauge: GaugePolicy) -> Self {
        self.gauge = gauge;
        self
    }
}
