use super::{cfl_dt, gauge_drift, step_rk4, DynamicsError, Forcing, SimState, StepContext};
use crate::analysis::{diagnostics, DiagnosticsRecord};
use crate::params::PhysParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunControl {
    pub t_end: f64,
    /// Emit a diagnostics record every `out_every` steps (and always at the end).
    pub out_every: u64,
    /// Stop after this many steps even if `t_end` has not been reached.
    pub max_steps: Option<u64>,
}

impl RunControl {
    pub fn until(t_end: f64) -> Self {
        Self { t_end, out_every: 1, max_steps: None }
    }

    pub fn steps(n: u64) -> Self {
        Self { t_end: f64::INFINITY, out_every: 1, max_steps: Some(n) }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: SimState,
    pub records: Vec<DiagnosticsRecord>,
    pub steps: u64,
}

/// A failed run: the error, the last good state and every record emitted
/// before the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: DynamicsError,
    pub state: SimState,
    pub records: Vec<DiagnosticsRecord>,
    pub steps: u64,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "run failed at step {} (t = {}): {}", self.steps, self.state.t, self.error)
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Marches `initial` to `control.t_end` with a CFL-limited step recomputed
/// every step; the final step is clipped to land on `t_end` exactly.
///
/// The entropy column is reported relative to its initial value.
/// `observer` sees the state after every accepted step (and the initial one
/// with step 0).
pub fn run(
    initial: &SimState,
    params: &PhysParams,
    control: &RunControl,
    forcing: Option<&dyn Forcing>,
    observer: &mut dyn FnMut(&SimState, u64),
) -> Result<RunOutcome, Box<RunFailure>> {
    let out_every = control.out_every.max(1);
    let mut state = initial.clone();
    let mut records = Vec::new();
    let fail = |error: DynamicsError, state: SimState, records: Vec<DiagnosticsRecord>, steps: u64| {
        Box::new(RunFailure { error, state, records, steps })
    };

    if let Err(e) = params.validate() {
        return Err(fail(DynamicsError::InvalidParams(e), state, records, 0));
    }
    if let Err(e) = super::validate_state(&state) {
        return Err(fail(e, state, records, 0));
    }

    let mut first = diagnostics(&state, params);
    first.gauge_drift = gauge_drift(&state, params);
    let entropy0 = first.entropy;
    first.entropy = 0.0;
    records.push(first);
    observer(&state, 0);

    let mut steps = 0u64;
    loop {
        if state.t >= control.t_end || control.max_steps.is_some_and(|m| steps >= m) {
            break;
        }
        let mut dt = match cfl_dt(&state, params) {
            Ok(dt) => dt,
            Err(e) => return Err(fail(e, state, records, steps)),
        };
        let remaining = control.t_end - state.t;
        let last_in_time = dt * (1.0 + 1e-9) >= remaining;
        if last_in_time {
            dt = remaining;
        }
        let ctx = StepContext { index: steps, forcing };
        let result = match step_rk4(&state, dt, params, ctx) {
            Ok(r) => r,
            Err(e) => return Err(fail(e, state, records, steps)),
        };
        state = result.state;
        if last_in_time {
            state.t = control.t_end;
        }
        steps += 1;
        let done = last_in_time || control.max_steps.is_some_and(|m| steps >= m);
        if steps.is_multiple_of(out_every) || done {
            let mut rec = diagnostics(&state, params);
            rec.dt = dt;
            rec.gauge_drift = result.gauge_drift;
            rec.entropy -= entropy0;
            if !rec.is_finite() {
                let err = DynamicsError::InvalidState { quantity: "diagnostics", index: 0, value: f64::NAN };
                return Err(fail(err, state, records, steps));
            }
            records.push(rec);
        }
        observer(&state, steps);
    }
    Ok(RunOutcome { state, records, steps })
}
