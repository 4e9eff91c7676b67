//! Track-seeking servo for a hard disk drive: a discrete double-integrator
//! voice-coil plant under a two-degree-of-freedom controller, simulated for a
//! step in the reference track.
//!
//! A sample `k` is taken at `t = k * dt`. The measured position `y[k]` is
//! read before the control `u[k]` is applied, so `y[0]` is always zero.

use crate::engine::Problem;
use crate::error::{Error, Result};
use crate::preference::{GoalSpec, Hardness, LeafSpec, SpecTree};
use crate::types::{DecisionVector, ObjectiveVector, ParameterSpace};

pub const SAMPLE_RATE: f64 = 4000.0;
pub const DT: f64 = 1.0 / SAMPLE_RATE;
/// Actuator limit in volts.
pub const U_LIMIT: f64 = 2.0;
pub const HORIZON: usize = 80;
/// Stand-in for objectives of loops that diverge numerically.
pub const PENALTY: f64 = 1e6;

/// `{Kf, Kb, ff1, ff2, fb1, fb2}` of a published evolved design.
pub const REFERENCE_PARAMS: [f64; 6] = [0.029695, -0.58127, 0.90279, -0.3946, -0.70592, 0.83152];

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePlant {
    pub a: [[f64; 2]; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    /// Position in tracks and velocity.
    pub state: [f64; 2],
}

impl Default for DiscretePlant {
    fn default() -> Self {
        Self {
            a: [[1.0, 1.664], [0.0, 1.0]],
            b: [1.384, 1.664],
            c: [1.0, 0.0],
            state: [0.0, 0.0],
        }
    }
}

impl DiscretePlant {
    pub fn output(&self) -> f64 {
        self.c[0] * self.state[0] + self.c[1] * self.state[1]
    }

    /// Advances one sample under input `u` and returns the new output.
    pub fn step(&mut self, u: f64) -> f64 {
        let [x0, x1] = self.state;
        self.state = [
            self.a[0][0] * x0 + self.a[0][1] * x1 + self.b[0] * u,
            self.a[1][0] * x0 + self.a[1][1] * x1 + self.b[1] * u,
        ];
        self.output()
    }

    pub fn reset(&mut self) {
        self.state = [0.0, 0.0];
    }
}

pub fn plant_step(plant: &mut DiscretePlant, u: f64) -> f64 {
    plant.step(u)
}

/// `K (z + a) / (z + b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderController {
    pub gain: f64,
    pub zero: f64,
    pub pole: f64,
    prev_in: f64,
    prev_out: f64,
}

impl FirstOrderController {
    pub fn new(gain: f64, zero: f64, pole: f64) -> Self {
        Self {
            gain,
            zero,
            pole,
            prev_in: 0.0,
            prev_out: 0.0,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.pole.abs() < 1.0
    }

    pub fn dc_gain(&self) -> f64 {
        self.gain * (1.0 + self.zero) / (1.0 + self.pole)
    }

    pub fn step(&mut self, e: f64) -> f64 {
        let u = -self.pole * self.prev_out + self.gain * e + self.gain * self.zero * self.prev_in;
        self.prev_in = e;
        self.prev_out = u;
        u
    }

    pub fn reset(&mut self) {
        self.prev_in = 0.0;
        self.prev_out = 0.0;
    }
}

pub fn filter_step(ctrl: &mut FirstOrderController, e: f64) -> f64 {
    ctrl.step(e)
}

/// A discrete controller driven by the reference and the measured position.
pub trait Controller {
    /// Control demand before saturation.
    fn step(&mut self, r: f64, y: f64) -> f64;
}

/// Feedforward on the reference plus feedback on the measured position,
/// `u = Kp r + Ks y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDof {
    pub kp: FirstOrderController,
    pub ks: FirstOrderController,
}

impl TwoDof {
    /// From `{Kf, Kb, ff1, ff2, fb1, fb2}`.
    pub fn from_params(p: &[f64; 6]) -> Self {
        Self {
            kp: FirstOrderController::new(p[0], p[2], p[3]),
            ks: FirstOrderController::new(p[1], p[4], p[5]),
        }
    }

    /// Steady-state `y / r` of the closed loop, `-Kp(1) / Ks(1)`.
    pub fn dc_ratio(&self) -> f64 {
        -self.kp.dc_gain() / self.ks.dc_gain()
    }
}

impl Controller for TwoDof {
    fn step(&mut self, r: f64, y: f64) -> f64 {
        self.kp.step(r) + self.ks.step(y)
    }
}

/// Manually tuned PID on the tracking error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pid {
    u: [f64; 2],
    e: [f64; 2],
}

impl Pid {
    pub fn step_error(&mut self, e: f64) -> f64 {
        let u = 1.25 * self.u[0] - 0.25 * self.u[1] + 0.13 * e - 0.23 * self.e[0] + 0.1 * self.e[1];
        self.u = [u, self.u[0]];
        self.e = [e, self.e[0]];
        u
    }
}

impl Controller for Pid {
    fn step(&mut self, r: f64, y: f64) -> f64 {
        self.step_error(r - y)
    }
}

/// Robust and perfect tracking controller with coefficients as published.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rpt {
    x: f64,
}

impl Controller for Rpt {
    fn step(&mut self, r: f64, y: f64) -> f64 {
        let u = -3.43e-7 * self.x + 0.04 * r - 0.18 * y;
        self.x = -0.04 * self.x + 15179.0 * r - 453681.0 * y;
        u
    }
}

pub fn pid_step(pid: &mut Pid, e: f64) -> f64 {
    pid.step_error(e)
}

pub fn rpt_step(rpt: &mut Rpt, r: f64, y: f64) -> f64 {
    rpt.step(r, y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub r: f64,
    pub dt: f64,
    pub y: Vec<f64>,
    /// Applied (saturated) control.
    pub u: Vec<f64>,
    /// Controller demand before saturation.
    pub demand: Vec<f64>,
}

impl Response {
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

/// Simulates `horizon` samples of a step of `r` tracks from rest.
pub fn simulate<C: Controller>(
    plant: &DiscretePlant,
    controller: &mut C,
    r: f64,
    horizon: usize,
) -> Result<Response> {
    if horizon == 0 {
        return Err(Error::InvalidConfig(
            "horizon must be at least one sample".into(),
        ));
    }
    let mut plant = plant.clone();
    plant.reset();
    let mut out = Response {
        r,
        dt: DT,
        y: Vec::with_capacity(horizon),
        u: Vec::with_capacity(horizon),
        demand: Vec::with_capacity(horizon),
    };
    for k in 0..horizon {
        let y = plant.output();
        let demand = controller.step(r, y);
        if !y.is_finite() || !demand.is_finite() {
            return Err(Error::NonFiniteSignal(k));
        }
        let u = demand.clamp(-U_LIMIT, U_LIMIT);
        plant.step(u);
        out.y.push(y);
        out.u.push(u);
        out.demand.push(demand);
    }
    Ok(out)
}

pub fn simulate_closed_loop(
    plant: &DiscretePlant,
    kp: FirstOrderController,
    ks: FirstOrderController,
    r: f64,
    horizon: usize,
) -> Result<Response> {
    let mut ctrl = TwoDof { kp, ks };
    ctrl.kp.reset();
    ctrl.ks.reset();
    simulate(plant, &mut ctrl, r, horizon)
}

pub fn simulate_pid(r: f64, horizon: usize) -> Result<Response> {
    simulate(&DiscretePlant::default(), &mut Pid::default(), r, horizon)
}

pub fn simulate_rpt(r: f64, horizon: usize) -> Result<Response> {
    simulate(&DiscretePlant::default(), &mut Rpt::default(), r, horizon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServoObjectives {
    /// Rise time to 90 % of the step, seconds.
    pub tr: f64,
    /// Largest overshoot, or undershoot after the first crossing, as a
    /// fraction of the step.
    pub os: f64,
    /// 5 % settling time, seconds.
    pub ts: f64,
    /// Steady-state error in tracks.
    pub sse: f64,
    pub umax: f64,
    /// Largest control change per sample.
    pub ue: f64,
}

impl ServoObjectives {
    pub const NAMES: [&'static str; 6] = ["Tr", "OS", "Ts", "SSE", "umax", "ue"];

    pub fn to_array(&self) -> [f64; 6] {
        [self.tr, self.os, self.ts, self.sse, self.umax, self.ue]
    }
}

/// Interpolated time at which `y` first reaches `level` rising from below,
/// or `None` if it never does.
pub fn first_crossing(y: &[f64], level: f64, dt: f64) -> Option<f64> {
    if y.first().is_some_and(|&v| v >= level) {
        return Some(0.0);
    }
    y.windows(2).enumerate().find_map(|(k, w)| {
        (w[1] >= level).then(|| (k as f64 + (level - w[0]) / (w[1] - w[0])) * dt)
    })
}

/// Time-domain measures of a step response. `u` is the control whose
/// magnitude is limited; thresholds never met cost the full horizon.
pub fn extract_objectives(y: &[f64], u: &[f64], r: f64, dt: f64) -> ServoObjectives {
    let horizon = y.len() as f64 * dt;
    let scale = r.abs();
    let (yn, level) = if scale > 0.0 {
        (y.iter().map(|v| v * r.signum()).collect::<Vec<_>>(), scale)
    } else {
        (y.to_vec(), 0.0)
    };

    let tr = first_crossing(&yn, 0.9 * level, dt).unwrap_or(horizon);

    let os = if scale > 0.0 {
        let peak = yn.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let over = (peak - level).max(0.0);
        let under = yn.iter().position(|&v| v >= level).map_or(0.0, |k| {
            yn[k..].iter().map(|&v| level - v).fold(0.0, f64::max)
        });
        over.max(under) / level
    } else {
        0.0
    };

    let band = 0.05 * level;
    let ts = match yn.iter().rposition(|&v| (v - level).abs() > band) {
        None => 0.0,
        Some(k) if k + 1 == yn.len() => horizon,
        Some(k) => (k + 1) as f64 * dt,
    };

    let tail = (yn.len() / 10).max(1);
    let mean = yn[yn.len() - tail..].iter().sum::<f64>() / tail as f64;
    let sse = (mean - level).abs();

    let umax = u.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let ue = u
        .iter()
        .scan(0.0, |prev, &v| {
            let d = (v - *prev).abs();
            *prev = v;
            Some(d)
        })
        .fold(0.0, f64::max);

    ServoObjectives {
        tr,
        os,
        ts,
        sse,
        umax,
        ue,
    }
}

/// Objectives of a response; `umax` is taken on the controller demand so
/// that the actuator limit stays visible to the optimizer.
pub fn response_objectives(resp: &Response) -> ServoObjectives {
    let mut obj = extract_objectives(&resp.y, &resp.u, resp.r, resp.dt);
    obj.umax = resp.demand.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    obj
}

/// Design goals for the six servo objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServoGoals {
    pub tr: f64,
    pub os: f64,
    pub ts: f64,
    pub sse: f64,
    pub umax: f64,
    pub ue: f64,
}

impl Default for ServoGoals {
    fn default() -> Self {
        Self {
            tr: 1.5e-3,
            os: 0.05,
            ts: 2e-3,
            sse: 0.02,
            umax: U_LIMIT,
            ue: 0.5,
        }
    }
}

impl ServoGoals {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.tr, self.os, self.ts, self.sse, self.umax, self.ue]
    }

    /// Soft goals on everything except the hard actuator limit.
    pub fn spec(&self) -> SpecTree {
        let mut hardness = vec![Hardness::Soft; 6];
        hardness[4] = Hardness::Hard;
        SpecTree::Leaf(LeafSpec {
            goal: Some(GoalSpec {
                goal: self.to_vec(),
                hardness,
            }),
            ..LeafSpec::pareto(6)
        })
    }
}

/// Controller parameter search for the two-degree-of-freedom loop.
#[derive(Debug, Clone)]
pub struct ServoProblem {
    pub plant: DiscretePlant,
    pub step: f64,
    pub horizon: usize,
    space: ParameterSpace,
}

impl Default for ServoProblem {
    fn default() -> Self {
        Self {
            plant: DiscretePlant::default(),
            step: 1.0,
            horizon: HORIZON,
            space: ParameterSpace::uniform(6, -1.0, 1.0).expect("static bounds are valid"),
        }
    }
}

impl ServoProblem {
    pub fn with_bounds(bounds: Vec<(f64, f64)>) -> Result<Self> {
        crate::error::check_dims(6, bounds.len())?;
        Ok(Self {
            space: ParameterSpace::new(bounds)?,
            ..Self::default()
        })
    }

    pub fn simulate(&self, p: &[f64; 6]) -> Result<Response> {
        let mut ctrl = TwoDof::from_params(p);
        simulate(&self.plant, &mut ctrl, self.step, self.horizon)
    }

    /// Objectives for parameters `p`; diverging loops get [`PENALTY`] values.
    pub fn objectives(&self, p: &[f64; 6]) -> ServoObjectives {
        let horizon = self.horizon as f64 * DT;
        match self.simulate(p) {
            Ok(resp) => {
                let o = response_objectives(&resp);
                ServoObjectives {
                    tr: o.tr,
                    os: o.os.min(PENALTY),
                    ts: o.ts,
                    sse: o.sse.min(PENALTY),
                    umax: o.umax.min(PENALTY),
                    ue: o.ue,
                }
            }
            Err(_) => ServoObjectives {
                tr: horizon,
                os: PENALTY,
                ts: horizon,
                sse: PENALTY,
                umax: PENALTY,
                ue: 2.0 * U_LIMIT,
            },
        }
    }
}

pub fn servo_design_problem() -> ServoProblem {
    ServoProblem::default()
}

impl Problem for ServoProblem {
    fn name(&self) -> &str {
        "SERVO"
    }

    fn space(&self) -> &ParameterSpace {
        &self.space
    }

    fn num_objectives(&self) -> usize {
        6
    }

    fn evaluate(&self, x: &DecisionVector) -> Result<ObjectiveVector> {
        let p: [f64; 6] = x
            .as_ref()
            .try_into()
            .map_err(|_| Error::DimensionMismatch {
                expected: 6,
                found: x.len(),
            })?;
        ObjectiveVector::new(self.objectives(&p).to_array().to_vec())
    }
}
