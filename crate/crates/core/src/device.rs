//! Behavioral FDSOI FeFET model.
//!
//! The ferroelectric layer is an ensemble of hysterons, each with its own
//! coercive voltage drawn around `Ec · t_fe`. A terminal pulse puts
//!
//! ```text
//! V_fe = kappa · (vg − v_ch),   v_ch = channel_weight · (vd + vs) / 2
//! ```
//!
//! across the film; hysterons whose coercive voltage is below `|V_fe|` relax
//! toward `sign(V_fe)` with time constant `tau_v`. Mean polarization sets the
//! threshold voltage linearly across the memory window, and the read current
//! follows a subthreshold exponential joined to a linear on-state branch.
//!
//! The model is qualitative. It reproduces which pulse patterns program,
//! erase, or leave the cell alone; it is not fitted to transfer curves.

use std::fs;
use std::path::Path;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, HvRng};

/// Seed root for per-device hysteron coercive-voltage draws.
const HYSTERON_SEED: u64 = 0xFE_FE7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FerroParams {
    /// Saturation polarization, µC/cm².
    pub ps: f64,
    /// Remnant polarization, µC/cm².
    pub pr: f64,
    /// Coercive field, MV/cm.
    pub ec: f64,
    /// Dipole relaxation time, µs.
    pub tau_v: f64,
    /// Ferroelectric thickness, nm.
    pub t_fe: f64,
    /// Fraction of the gate-to-channel voltage dropped across the film.
    pub kappa: f64,
    /// Channel-potential gain on the mean drain/source bias.
    pub channel_weight: f64,
    /// Memory window, V.
    pub mw: f64,
    /// Threshold voltage at zero net polarization, V.
    pub vt_mid: f64,
    pub n_hysterons: usize,
    /// Spread of hysteron coercive voltages, V.
    pub sigma_vc: f64,
    /// Subthreshold slope, V/decade.
    pub ss: f64,
    /// Current at `vg == Vt`, A (at the 0.1 V reference drain bias).
    pub i0: f64,
    /// On-state transconductance, A/V.
    pub gm: f64,
    /// Soft ceiling on the read current, A.
    pub i_on_max: f64,
}

impl Default for FerroParams {
    fn default() -> Self {
        Self {
            ps: 15.0,
            pr: 14.5,
            ec: 1.0,
            tau_v: 0.1,
            t_fe: 10.0,
            kappa: 0.5,
            channel_weight: 4.0,
            mw: 1.0,
            vt_mid: 0.6,
            n_hysterons: 100,
            sigma_vc: 0.05,
            ss: 0.080,
            i0: 50e-12,
            gm: 1.5e-6,
            i_on_max: 2e-6,
        }
    }
}

/// Drain bias at which `i0` and `gm` are specified.
pub const REFERENCE_VD: f64 = 0.1;

impl FerroParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ps", self.ps),
            ("pr", self.pr),
            ("ec", self.ec),
            ("tau_v", self.tau_v),
            ("t_fe", self.t_fe),
            ("kappa", self.kappa),
            ("channel_weight", self.channel_weight),
            ("mw", self.mw),
            ("ss", self.ss),
            ("i0", self.i0),
            ("gm", self.gm),
            ("i_on_max", self.i_on_max),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if self.pr > self.ps {
            return Err(Error::InvalidParams(format!(
                "pr ({}) must not exceed ps ({})",
                self.pr, self.ps
            )));
        }
        if self.kappa > 1.0 {
            return Err(Error::InvalidParams(format!("kappa must be <= 1, got {}", self.kappa)));
        }
        if self.n_hysterons == 0 {
            return Err(Error::InvalidParams("n_hysterons must be >= 1".into()));
        }
        if !(self.sigma_vc.is_finite() && self.sigma_vc >= 0.0) {
            return Err(Error::InvalidParams("sigma_vc must be >= 0".into()));
        }
        if !self.vt_mid.is_finite() {
            return Err(Error::InvalidParams("vt_mid must be finite".into()));
        }
        Ok(())
    }

    /// Mean hysteron coercive voltage, `Ec · t_fe` (MV/cm × nm → V).
    pub fn coercive_voltage(&self) -> f64 {
        self.ec * self.t_fe * 0.1
    }

    pub fn tau_seconds(&self) -> f64 {
        self.tau_v * 1e-6
    }

    /// Parse a key-value parameter file; unspecified keys keep their defaults.
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let p: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pulse {
    pub vg: f64,
    pub vd: f64,
    pub vs: f64,
    /// Seconds.
    pub duration: f64,
}

impl Pulse {
    pub fn new(vg: f64, vd: f64, vs: f64, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidParams(format!("pulse duration must be > 0, got {duration}")));
        }
        Ok(Self { vg, vd, vs, duration })
    }

    /// Gate program: high gate, drain and source grounded.
    pub fn program(v: f64, duration: f64) -> Result<Self> {
        Self::new(v, 0.0, 0.0, duration)
    }

    /// Drain erase: gate grounded, drain high, source optionally high too.
    pub fn drain_erase(v: f64, with_source: bool, duration: f64) -> Result<Self> {
        Self::new(0.0, v, if with_source { v } else { 0.0 }, duration)
    }

    /// Gate program suppressed by raising drain and source with the gate.
    pub fn program_inhibit(v_gate: f64, v_terminals: f64, duration: f64) -> Result<Self> {
        Self::new(v_gate, v_terminals, v_terminals, duration)
    }

    /// Drain erase suppressed by a positive gate bias.
    pub fn erase_inhibit(v_gate: f64, v_drain: f64, duration: f64) -> Result<Self> {
        Self::new(v_gate, v_drain, 0.0, duration)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VtClass {
    LowVt,
    HighVt,
}

#[derive(Clone, Debug)]
pub struct FeFetState {
    params: FerroParams,
    /// Per-hysteron polarization in [-1, 1].
    hysterons: Vec<f64>,
    coercive: Vec<f64>,
    vt_offset: f64,
}

impl FeFetState {
    /// Fully erased device (high-Vt end of the window).
    pub fn new(params: FerroParams, vt_offset: f64) -> Result<Self> {
        Self::with_index(params, vt_offset, 0)
    }

    /// Like [`Self::new`]; `index` selects the device's hysteron draw.
    pub fn with_index(params: FerroParams, vt_offset: f64, index: u64) -> Result<Self> {
        params.validate()?;
        if !vt_offset.is_finite() {
            return Err(Error::InvalidParams("vt_offset must be finite".into()));
        }
        let mut rng = HvRng::new(derive_seed(HYSTERON_SEED, index));
        let vc0 = params.coercive_voltage();
        let coercive = if params.sigma_vc > 0.0 {
            let dist = Normal::new(vc0, params.sigma_vc)
                .map_err(|e| Error::InvalidParams(e.to_string()))?;
            (0..params.n_hysterons)
                .map(|_| dist.sample(&mut rng).max(0.0))
                .collect()
        } else {
            vec![vc0; params.n_hysterons]
        };
        Ok(Self {
            hysterons: vec![-1.0; params.n_hysterons],
            coercive,
            vt_offset,
            params,
        })
    }

    pub fn params(&self) -> &FerroParams {
        &self.params
    }

    pub fn vt_offset(&self) -> f64 {
        self.vt_offset
    }

    pub fn hysterons(&self) -> &[f64] {
        &self.hysterons
    }

    /// Mean hysteron state, `P / Ps`, in [-1, 1].
    pub fn normalized_polarization(&self) -> f64 {
        self.hysterons.iter().sum::<f64>() / self.hysterons.len() as f64
    }

    /// µC/cm².
    pub fn polarization(&self) -> f64 {
        self.params.ps * self.normalized_polarization()
    }

    /// Zero-field remanent charge after the last pulse, µC/cm².
    pub fn remanent_polarization(&self) -> f64 {
        self.params.pr * self.normalized_polarization()
    }

    /// Voltage across the ferroelectric for `pulse`.
    pub fn film_voltage(&self, pulse: &Pulse) -> f64 {
        let v_ch = self.params.channel_weight * (pulse.vd + pulse.vs) / 2.0;
        self.params.kappa * (pulse.vg - v_ch)
    }

    pub fn apply_pulse(&mut self, pulse: &Pulse) {
        let v_fe = self.film_voltage(pulse);
        let target = v_fe.signum();
        let frac = 1.0 - (-pulse.duration / self.params.tau_seconds()).exp();
        for (s, &vc) in self.hysterons.iter_mut().zip(&self.coercive) {
            if v_fe.abs() > vc {
                *s = (*s + (target - *s) * frac).clamp(-1.0, 1.0);
            }
        }
    }

    pub fn threshold_voltage(&self) -> f64 {
        self.params.vt_mid - self.normalized_polarization() * self.params.mw / 2.0 + self.vt_offset
    }

    /// Low-Vt when the net polarization is positive.
    pub fn vt_class(&self) -> VtClass {
        if self.threshold_voltage() < self.params.vt_mid + self.vt_offset {
            VtClass::LowVt
        } else {
            VtClass::HighVt
        }
    }

    pub fn read_current(&self, vg_read: f64, vd_read: f64) -> f64 {
        read_current_at(&self.params, self.threshold_voltage(), vg_read, vd_read)
    }

    /// `(vg, id)` samples from `vg_from` to `vg_to` inclusive.
    pub fn transfer_curve(&self, vg_from: f64, vg_to: f64, step: f64, vd: f64) -> Vec<(f64, f64)> {
        assert!(step > 0.0, "sweep step must be positive");
        let n = ((vg_to - vg_from) / step).round().max(0.0) as usize;
        (0..=n)
            .map(|i| {
                let vg = vg_from + i as f64 * step;
                (vg, self.read_current(vg, vd))
            })
            .collect()
    }
}

/// Read current for a device at threshold voltage `vt`.
///
/// Below threshold `I = i0 · 10^((vg − Vt)/SS)`; above it `I = i0 + gm·(vg − Vt)`.
/// Both branches scale linearly with `vd / 0.1 V`, and the result is passed
/// through `I / (1 + I / i_on_max)`, which keeps it strictly decreasing in
/// `Vt` while bounding it by `i_on_max`.
pub fn read_current_at(params: &FerroParams, vt: f64, vg_read: f64, vd_read: f64) -> f64 {
    if vd_read <= 0.0 {
        return 0.0;
    }
    let overdrive = vg_read - vt;
    let raw = if overdrive < 0.0 {
        params.i0 * 10f64.powf(overdrive / params.ss)
    } else {
        params.i0 + params.gm * overdrive
    } * (vd_read / REFERENCE_VD);
    raw / (1.0 + raw / params.i_on_max)
}

/// `n` Gaussian threshold-voltage offsets with standard deviation `three_sigma / 3`.
pub fn sample_vt_offsets(n: usize, three_sigma: f64, rng: &mut HvRng) -> Result<Vec<f64>> {
    if !(three_sigma.is_finite() && three_sigma >= 0.0) {
        return Err(Error::InvalidParams(format!("three_sigma must be >= 0, got {three_sigma}")));
    }
    if three_sigma == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let dist = Normal::new(0.0, three_sigma / 3.0).map_err(|e| Error::InvalidParams(e.to_string()))?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}
