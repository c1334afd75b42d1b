//! Single-FeFET XOR and 3-input majority gates.
//!
//! Each gate is a fixed pulse protocol on one device followed by a read.
//! Nominal read currents come from the measured truth tables stored below;
//! threshold-voltage variation rescales them with first-order device laws.
//! [`verify_against_device`] replays the same pulse traces through the
//! behavioral model in [`crate::device`] as an independent check of the
//! Vt class each row should end in.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::device::{sample_vt_offsets, FeFetState, FerroParams, Pulse};
use crate::error::{Error, Result};
use crate::rng::HvRng;

pub use crate::device::VtClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateKind {
    Xor2,
    Majority3,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Xor2 => 2,
            GateKind::Majority3 => 3,
        }
    }

    pub fn table(self) -> &'static [TableRow] {
        match self {
            GateKind::Xor2 => &XOR_TABLE,
            GateKind::Majority3 => &MAJORITY_TABLE,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::Xor2 => "xor",
            GateKind::Majority3 => "maj3",
        })
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xor" | "xor2" => Ok(GateKind::Xor2),
            "maj" | "maj3" | "majority" | "majority3" => Ok(GateKind::Majority3),
            other => Err(Error::InvalidConfig(format!("unknown gate {other:?}"))),
        }
    }
}

/// One measured truth-table row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub inputs: &'static [bool],
    pub operation: &'static str,
    pub vt_class: VtClass,
    /// Nominal read current, A.
    pub current: f64,
    pub output: bool,
}

const F: bool = false;
const T: bool = true;

/// Inputs are (X, Y, Z).
pub const MAJORITY_TABLE: [TableRow; 8] = [
    TableRow { inputs: &[F, F, F], operation: "Drain-erase", vt_class: VtClass::HighVt, current: 0.34e-9, output: false },
    TableRow { inputs: &[F, F, T], operation: "Partial drain-erase", vt_class: VtClass::HighVt, current: 10.5e-9, output: false },
    TableRow { inputs: &[F, T, F], operation: "Partial drain-erase", vt_class: VtClass::HighVt, current: 5.62e-9, output: false },
    TableRow { inputs: &[F, T, T], operation: "No operation", vt_class: VtClass::LowVt, current: 95.7e-9, output: true },
    TableRow { inputs: &[T, F, F], operation: "Drain-erase", vt_class: VtClass::HighVt, current: 15.8e-9, output: false },
    TableRow { inputs: &[T, F, T], operation: "Erase inhibition", vt_class: VtClass::LowVt, current: 0.11e-6, output: true },
    TableRow { inputs: &[T, T, F], operation: "Erase inhibition", vt_class: VtClass::LowVt, current: 85.9e-9, output: true },
    TableRow { inputs: &[T, T, T], operation: "Program", vt_class: VtClass::LowVt, current: 0.58e-6, output: true },
];

/// Inputs are (X, Y).
pub const XOR_TABLE: [TableRow; 4] = [
    TableRow { inputs: &[F, F], operation: "No operation", vt_class: VtClass::HighVt, current: 4.6e-12, output: false },
    TableRow { inputs: &[F, T], operation: "Partial drain-erase", vt_class: VtClass::LowVt, current: 0.38e-6, output: true },
    TableRow { inputs: &[T, F], operation: "Partial drain-erase", vt_class: VtClass::LowVt, current: 0.23e-6, output: true },
    TableRow { inputs: &[T, T], operation: "Drain-erase", vt_class: VtClass::HighVt, current: 29.1e-9, output: false },
];

/// Terminal levels and timings of the two gate protocols.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateProtocol {
    /// Majority: initializing program pulse on the gate, V.
    pub maj_init_vg: f64,
    /// Majority: gate level for X = 1 (X = 0 is 0 V).
    pub maj_gate_high: f64,
    /// Majority: drain/source level for Y/Z = 0 (negative logic; 1 is 0 V).
    pub maj_terminal_zero: f64,
    /// XOR: initializing erase on the gate, V.
    pub xor_init_vg: f64,
    /// XOR: gate level for logic 1 in the two sequential input cycles.
    pub xor_gate_high: f64,
    /// XOR: source/drain level for logic 1 in the simultaneous cycle.
    pub xor_terminal_high: f64,
    /// Duration of every write cycle, s.
    pub write_duration: f64,
    pub read_vg: f64,
    pub read_vd: f64,
    pub read_duration: f64,
}

impl Default for GateProtocol {
    fn default() -> Self {
        Self {
            maj_init_vg: 3.0,
            maj_gate_high: 3.0,
            maj_terminal_zero: 1.5,
            xor_init_vg: -3.0,
            xor_gate_high: 4.0,
            // The behavioral model needs a strong drain/source coupling to
            // erase majority row 100 with the gate at 3 V; with that coupling
            // a one-sided level above ~0.8 V would fully erase XOR rows 01/10.
            xor_terminal_high: 0.75,
            write_duration: 1e-6,
            read_vg: 1.0,
            read_vd: 0.1,
            read_duration: 10e-9,
        }
    }
}

impl GateProtocol {
    fn read_pulse(&self) -> Pulse {
        Pulse {
            vg: self.read_vg,
            vd: self.read_vd,
            vs: 0.0,
            duration: self.read_duration,
        }
    }

    fn write(&self, vg: f64, vd: f64, vs: f64) -> Pulse {
        Pulse {
            vg,
            vd,
            vs,
            duration: self.write_duration,
        }
    }

    /// Init program, simultaneous inputs (X on gate, Y on drain, Z on
    /// source), read.
    pub fn majority_trace(&self, x: bool, y: bool, z: bool) -> Vec<Pulse> {
        let neg = |b: bool| if b { 0.0 } else { self.maj_terminal_zero };
        vec![
            self.write(self.maj_init_vg, 0.0, 0.0),
            self.write(if x { self.maj_gate_high } else { 0.0 }, neg(y), neg(z)),
            self.read_pulse(),
        ]
    }

    /// Init erase, X on gate, Y on gate, X on source with Y on drain, read.
    pub fn xor_trace(&self, x: bool, y: bool) -> Vec<Pulse> {
        let gate = |b: bool| if b { self.xor_gate_high } else { 0.0 };
        let term = |b: bool| if b { self.xor_terminal_high } else { 0.0 };
        vec![
            self.write(self.xor_init_vg, 0.0, 0.0),
            self.write(gate(x), 0.0, 0.0),
            self.write(gate(y), 0.0, 0.0),
            self.write(0.0, term(y), term(x)),
            self.read_pulse(),
        ]
    }

    pub fn trace(&self, kind: GateKind, inputs: &[bool]) -> Vec<Pulse> {
        match kind {
            GateKind::Xor2 => self.xor_trace(inputs[0], inputs[1]),
            GateKind::Majority3 => self.majority_trace(inputs[0], inputs[1], inputs[2]),
        }
    }
}

/// How a threshold-voltage shift rescales a nominal read current.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariationModel {
    /// Subthreshold slope for high-Vt rows, V/decade.
    pub ss: f64,
    /// Gate overdrive for low-Vt rows, V.
    pub v_ov: f64,
}

impl Default for VariationModel {
    fn default() -> Self {
        Self { ss: 0.080, v_ov: 0.5 }
    }
}

impl VariationModel {
    /// High-Vt rows: `I · 10^(−ΔVt/SS)`; low-Vt rows: `I · max(0, 1 − ΔVt/V_ov)`.
    pub fn scale(&self, nominal: f64, class: VtClass, dvt: f64) -> f64 {
        match class {
            VtClass::HighVt => nominal * 10f64.powf(-dvt / self.ss),
            VtClass::LowVt => nominal * (1.0 - dvt / self.v_ov).max(0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateResult {
    pub kind: GateKind,
    pub inputs: Vec<bool>,
    pub logic_out: bool,
    /// Read current after variation scaling, A.
    pub current: f64,
    pub nominal_current: f64,
    pub vt_class: VtClass,
    pub op_label: &'static str,
    #[serde(skip)]
    pub pulse_trace: Vec<Pulse>,
}

impl GateResult {
    /// Logic level a sense amplifier at `threshold` would report.
    pub fn sensed(&self, threshold: f64) -> bool {
        self.current > threshold
    }
}

fn evaluate_row(kind: GateKind, row: &TableRow, vt_offset: f64, variation: &VariationModel) -> GateResult {
    GateResult {
        kind,
        inputs: row.inputs.to_vec(),
        logic_out: row.output,
        current: variation.scale(row.current, row.vt_class, vt_offset),
        nominal_current: row.current,
        vt_class: row.vt_class,
        op_label: row.operation,
        pulse_trace: GateProtocol::default().trace(kind, row.inputs),
    }
}

fn row_index(inputs: &[bool]) -> usize {
    inputs.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

pub fn majority_gate(x: bool, y: bool, z: bool, vt_offset: f64) -> GateResult {
    let row = &MAJORITY_TABLE[row_index(&[x, y, z])];
    evaluate_row(GateKind::Majority3, row, vt_offset, &VariationModel::default())
}

pub fn xor_gate(x: bool, y: bool, vt_offset: f64) -> GateResult {
    let row = &XOR_TABLE[row_index(&[x, y])];
    evaluate_row(GateKind::Xor2, row, vt_offset, &VariationModel::default())
}

pub fn evaluate(kind: GateKind, inputs: &[bool], vt_offset: f64) -> Result<GateResult> {
    if inputs.len() != kind.arity() {
        return Err(Error::InvalidConfig(format!(
            "{kind} takes {} inputs, got {}",
            kind.arity(),
            inputs.len()
        )));
    }
    Ok(match kind {
        GateKind::Xor2 => xor_gate(inputs[0], inputs[1], vt_offset),
        GateKind::Majority3 => majority_gate(inputs[0], inputs[1], inputs[2], vt_offset),
    })
}

/// Every row of `kind` at the given offset, in truth-table order.
pub fn truth_table(kind: GateKind, vt_offset: f64) -> Vec<GateResult> {
    kind.table()
        .iter()
        .map(|row| evaluate_row(kind, row, vt_offset, &VariationModel::default()))
        .collect()
}

fn worst_case_nominal(kind: GateKind) -> (f64, f64) {
    let table = kind.table();
    let max0 = table
        .iter()
        .filter(|r| !r.output)
        .map(|r| r.current)
        .fold(f64::MIN, f64::max);
    let min1 = table
        .iter()
        .filter(|r| r.output)
        .map(|r| r.current)
        .fold(f64::MAX, f64::min);
    (max0, min1)
}

/// Sense threshold: geometric mean of the worst-case nominal logic-0 and
/// logic-1 currents.
pub fn decision_threshold(kind: GateKind) -> f64 {
    let (max0, min1) = worst_case_nominal(kind);
    (max0 * min1).sqrt()
}

/// Log-spaced histogram of read currents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    /// log10 of the lower edge of bin 0.
    pub log10_lo: f64,
    /// Bin width in decades.
    pub bin_decades: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    fn from_currents(currents: &[f64], bins: usize) -> Self {
        let logs: Vec<f64> = currents.iter().map(|c| c.max(f64::MIN_POSITIVE).log10()).collect();
        let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = if hi > lo { (hi - lo) / bins as f64 } else { 1e-3 };
        let mut counts = vec![0; bins];
        for l in logs {
            let b = (((l - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        Self {
            log10_lo: lo,
            bin_decades: width,
            counts,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowStats {
    pub inputs: Vec<bool>,
    pub logic_out: bool,
    pub min_current: f64,
    pub max_current: f64,
    pub mean_current: f64,
    pub histogram: Histogram,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McSample {
    pub index: usize,
    pub vt_offset: f64,
    /// One current per truth-table row.
    pub currents: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginReport {
    pub kind: GateKind,
    pub n_samples: usize,
    pub three_sigma: f64,
    pub min_logic1_current: f64,
    pub max_logic0_current: f64,
    pub margin_ratio: f64,
    /// Fixed sense threshold from [`decision_threshold`].
    pub threshold: f64,
    /// Row evaluations that the fixed threshold would misread.
    pub threshold_errors: usize,
    pub rows: Vec<RowStats>,
    pub samples: Vec<McSample>,
}

impl MarginReport {
    /// Logic-0 and logic-1 current distributions do not overlap.
    pub fn pass(&self) -> bool {
        self.margin_ratio > 1.0
    }
}

const HISTOGRAM_BINS: usize = 20;

/// Draw `n` device offsets and evaluate every input combination on each.
pub fn monte_carlo(kind: GateKind, n: usize, three_sigma: f64, rng: &mut HvRng) -> Result<MarginReport> {
    if n == 0 {
        return Err(Error::InvalidConfig("monte carlo needs at least one sample".into()));
    }
    let offsets = sample_vt_offsets(n, three_sigma, rng)?;
    let variation = VariationModel::default();
    let table = kind.table();
    let threshold = decision_threshold(kind);

    let samples: Vec<McSample> = offsets
        .iter()
        .enumerate()
        .map(|(index, &dvt)| McSample {
            index,
            vt_offset: dvt,
            currents: table
                .iter()
                .map(|r| variation.scale(r.current, r.vt_class, dvt))
                .collect(),
        })
        .collect();

    let mut min1 = f64::INFINITY;
    let mut max0 = f64::NEG_INFINITY;
    let mut threshold_errors = 0;
    for s in &samples {
        for (row, &i) in table.iter().zip(&s.currents) {
            if row.output {
                min1 = min1.min(i);
            } else {
                max0 = max0.max(i);
            }
            if (i > threshold) != row.output {
                threshold_errors += 1;
            }
        }
    }

    let rows = table
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let cur: Vec<f64> = samples.iter().map(|s| s.currents[r]).collect();
            RowStats {
                inputs: row.inputs.to_vec(),
                logic_out: row.output,
                min_current: cur.iter().copied().fold(f64::INFINITY, f64::min),
                max_current: cur.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean_current: cur.iter().sum::<f64>() / cur.len() as f64,
                histogram: Histogram::from_currents(&cur, HISTOGRAM_BINS),
            }
        })
        .collect();

    Ok(MarginReport {
        kind,
        n_samples: n,
        three_sigma,
        min_logic1_current: min1,
        max_logic0_current: max0,
        margin_ratio: min1 / max0,
        threshold,
        threshold_errors,
        rows,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowCheck {
    pub inputs: Vec<bool>,
    pub operation: &'static str,
    pub expected: VtClass,
    pub observed: VtClass,
    pub threshold_voltage: f64,
    pub normalized_polarization: f64,
}

impl RowCheck {
    pub fn matches(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviceCheckReport {
    pub kind: GateKind,
    pub rows: Vec<RowCheck>,
}

impl DeviceCheckReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(RowCheck::matches)
    }

    pub fn failing_rows(&self) -> impl Iterator<Item = &RowCheck> {
        self.rows.iter().filter(|r| !r.matches())
    }
}

impl fmt::Display for DeviceCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let bits: String = r.inputs.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(
                f,
                "{} {bits} {:<20} expected {:?} observed {:?} (Vt {:.3} V, P/Ps {:+.3}){}",
                self.kind,
                r.operation,
                r.expected,
                r.observed,
                r.threshold_voltage,
                r.normalized_polarization,
                if r.matches() { "" } else { "  MISMATCH" }
            )?;
        }
        Ok(())
    }
}

/// Replay every row's pulse trace on a fresh behavioral device and compare
/// the final Vt class with the table.
pub fn verify_against_device(
    kind: GateKind,
    params: &FerroParams,
    protocol: &GateProtocol,
) -> Result<DeviceCheckReport> {
    let rows = kind
        .table()
        .iter()
        .map(|row| {
            let mut dev = FeFetState::new(params.clone(), 0.0)?;
            for p in protocol.trace(kind, row.inputs) {
                dev.apply_pulse(&p);
            }
            Ok(RowCheck {
                inputs: row.inputs.to_vec(),
                operation: row.operation,
                expected: row.vt_class,
                observed: dev.vt_class(),
                threshold_voltage: dev.threshold_voltage(),
                normalized_polarization: dev.normalized_polarization(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeviceCheckReport { kind, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_examples() {
        let r = majority_gate(false, false, false, 0.0);
        assert!(!r.logic_out);
        assert_eq!(r.current, 0.34e-9);
        assert_eq!(r.op_label, "Drain-erase");
        assert_eq!(r.vt_class, VtClass::HighVt);

        let r = majority_gate(true, false, true, 0.0);
        assert!(r.logic_out);
        assert_eq!(r.current, 0.11e-6);
        assert_eq!(r.op_label, "Erase inhibition");
        assert_eq!(r.vt_class, VtClass::LowVt);

        let r = majority_gate(true, true, true, 0.0);
        assert!(r.logic_out);
        assert_eq!(r.current, 0.58e-6);
        assert_eq!(r.op_label, "Program");
    }

    #[test]
    fn xor_examples() {
        let r = xor_gate(false, false, 0.0);
        assert_eq!((r.logic_out, r.current, r.op_label), (false, 4.6e-12, "No operation"));
        let r = xor_gate(false, true, 0.0);
        assert_eq!((r.logic_out, r.current, r.op_label), (true, 0.38e-6, "Partial drain-erase"));
        assert_eq!(r.vt_class, VtClass::LowVt);
        let r = xor_gate(true, true, 0.0);
        assert_eq!((r.logic_out, r.current, r.op_label), (false, 29.1e-9, "Drain-erase"));
        assert_eq!(r.vt_class, VtClass::HighVt);
    }

    #[test]
    fn functional_correctness() {
        for x in [false, true] {
            for y in [false, true] {
                assert_eq!(xor_gate(x, y, 0.0).logic_out, x ^ y);
                for z in [false, true] {
                    let n = u8::from(x) + u8::from(y) + u8::from(z);
                    assert_eq!(majority_gate(x, y, z, 0.0).logic_out, n >= 2);
                }
            }
        }
    }

    #[test]
    fn thresholds() {
        assert!((decision_threshold(GateKind::Xor2) - 81.8e-9).abs() < 0.1e-9);
        assert!((decision_threshold(GateKind::Majority3) - 36.8e-9).abs() < 0.1e-9);
    }

    #[test]
    fn nominal_currents_sit_on_the_right_side_of_threshold() {
        for kind in [GateKind::Xor2, GateKind::Majority3] {
            let t = decision_threshold(kind);
            for r in truth_table(kind, 0.0) {
                assert_eq!(r.sensed(t), r.logic_out, "{kind} {:?}", r.inputs);
            }
        }
    }

    #[test]
    fn current_decreases_with_offset() {
        for kind in [GateKind::Xor2, GateKind::Majority3] {
            for row in 0..kind.table().len() {
                let mut prev = f64::INFINITY;
                for k in -20..=20 {
                    let dvt = k as f64 * 0.01;
                    let i = truth_table(kind, dvt)[row].current;
                    assert!(i < prev, "{kind} row {row} dvt {dvt}");
                    prev = i;
                }
            }
        }
    }

    #[test]
    fn traces_follow_protocols() {
        let r = majority_gate(true, false, true, 0.0);
        let p = &r.pulse_trace;
        assert_eq!(p.len(), 3);
        assert_eq!((p[0].vg, p[0].vd, p[0].vs), (3.0, 0.0, 0.0));
        assert_eq!((p[1].vg, p[1].vd, p[1].vs), (3.0, 1.5, 0.0));
        assert_eq!((p[2].vg, p[2].vd), (1.0, 0.1));

        let r = xor_gate(true, false, 0.0);
        let p = &r.pulse_trace;
        assert_eq!(p.len(), 5);
        assert_eq!(p[0].vg, -3.0);
        assert_eq!((p[1].vg, p[2].vg), (4.0, 0.0));
        assert_eq!((p[3].vg, p[3].vd, p[3].vs), (0.0, 0.0, 0.75));
    }

    #[test]
    fn evaluate_checks_arity() {
        assert!(evaluate(GateKind::Xor2, &[true], 0.0).is_err());
        assert!(evaluate(GateKind::Majority3, &[true, true, false], 0.0).unwrap().logic_out);
    }

    #[test]
    fn gate_kind_parsing() {
        assert_eq!("xor".parse::<GateKind>().unwrap(), GateKind::Xor2);
        assert_eq!("maj3".parse::<GateKind>().unwrap(), GateKind::Majority3);
        assert!("nand".parse::<GateKind>().is_err());
    }

    #[test]
    fn monte_carlo_without_variation_gives_nominal_ratio() {
        let r = monte_carlo(GateKind::Xor2, 10, 0.0, &mut HvRng::new(1)).unwrap();
        assert!((r.margin_ratio - 0.23e-6 / 29.1e-9).abs() < 1e-12);
        assert!((r.margin_ratio - 7.9).abs() < 0.01);
        assert_eq!(r.threshold_errors, 0);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo(GateKind::Majority3, 200, 0.04, &mut HvRng::new(5)).unwrap();
        let b = monte_carlo(GateKind::Majority3, 200, 0.04, &mut HvRng::new(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 8);
        assert_eq!(a.rows[0].histogram.counts.iter().sum::<usize>(), 200);
    }

    #[test]
    fn monte_carlo_needs_samples() {
        assert!(monte_carlo(GateKind::Xor2, 0, 0.04, &mut HvRng::new(1)).is_err());
    }

    #[test]
    fn device_replay_xor_rows() {
        let rep =
            verify_against_device(GateKind::Xor2, &FerroParams::default(), &GateProtocol::default()).unwrap();
        assert!(rep.all_match(), "{rep}");
        // 00 never sees a programming pulse
        assert!(rep.rows[0].normalized_polarization < -0.99);
        // 11 is programmed and then fully erased
        assert!(rep.rows[3].normalized_polarization < -0.9);
    }

    #[test]
    fn device_replay_majority_rows() {
        let rep = verify_against_device(
            GateKind::Majority3,
            &FerroParams::default(),
            &GateProtocol::default(),
        )
        .unwrap();
        assert!(rep.all_match(), "{rep}");
        assert_eq!(rep.rows[3].observed, VtClass::LowVt);
    }

    #[test]
    fn device_replay_reports_failing_rows() {
        // 4 V on the XOR terminals erases the programmed 01/10 rows outright
        let protocol = GateProtocol {
            xor_terminal_high: 4.0,
            ..Default::default()
        };
        let rep = verify_against_device(GateKind::Xor2, &FerroParams::default(), &protocol).unwrap();
        let failing: Vec<_> = rep.failing_rows().map(|r| r.inputs.clone()).collect();
        assert_eq!(failing, vec![vec![false, true], vec![true, false]]);
    }
}
