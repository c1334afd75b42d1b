use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fehd_core::cost::{self, encoder_cost};
use fehd_core::gates::{self, GateProtocol};
use fehd_core::spam::{self, Pipeline, SweepRow, TrainedModel};
use fehd_core::{
    AssociativeMemory, EncoderCostParams, Error, FeFetState, FerroParams, GateKind, HvRng, ItemMemory,
    Pulse, RunConfig, Scheme, SwitchTimeFit,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_CHECK: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "fehd", version, about = "HD encoding on FeFET logic-in-memory gates")]
struct Cli {
    /// Run seed; split, item-memory and tiebreak seeds are derived from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV output here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with status 3 when the result misses its reference target.
    #[arg(long, global = true)]
    check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split the dataset, train class hypervectors and save the model.
    Train {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        model: PathBuf,
    },
    /// Evaluate a saved model on the held-out partition (or run end to end
    /// when no model is given).
    Eval {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Accuracy versus N-gram width.
    SweepN {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 5, 6, 7])]
        values: Vec<usize>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Accuracy versus dimensionality.
    SweepD {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',',
              default_values_t = [1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000])]
        values: Vec<usize>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    #[command(subcommand)]
    Gates(GatesCmd),
    /// Encoder gate counts, energy, area, delay and endurance.
    Cost(CostCmd),
    #[command(subcommand)]
    Device(DeviceCmd),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// SMS Spam Collection TSV.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    ngram: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    ratio: Option<f64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Number of run seeds to average.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    /// Emit only (x, mean, std) rows.
    #[arg(long)]
    plot_data: bool,
}

#[derive(Subcommand, Debug)]
enum GatesCmd {
    /// Nominal truth table.
    TruthTable {
        #[arg(long)]
        gate: GateArg,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        vt_offset: f64,
    },
    /// Monte Carlo threshold-voltage variation.
    Mc {
        #[arg(long)]
        gate: GateArg,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// 3σ of the Vt offset, V.
        #[arg(long, default_value_t = 0.04)]
        three_sigma: f64,
        /// Emit per-row histograms instead of raw samples.
        #[arg(long)]
        plot_data: bool,
    },
    /// Replay the pulse protocol on the behavioral device model.
    Verify {
        #[arg(long)]
        gate: GateArg,
        /// TOML ferroelectric parameters.
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GateArg {
    Xor,
    Maj3,
}

impl From<GateArg> for GateKind {
    fn from(g: GateArg) -> Self {
        match g {
            GateArg::Xor => GateKind::Xor2,
            GateArg::Maj3 => GateKind::Majority3,
        }
    }
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct CostCmd {
    #[command(subcommand)]
    action: Option<CostAction>,
    /// Mean message length.
    #[arg(long, default_value_t = 60)]
    m: u64,
    #[arg(long, default_value_t = 4)]
    n: u64,
    /// Messages bundled per class.
    #[arg(long, default_value_t = 2000)]
    z: u64,
    #[arg(long, default_value_t = 10_000)]
    d: u64,
    /// Count N−1 XOR stages per window.
    #[arg(long)]
    xor_stages: bool,
}

#[derive(Subcommand, Debug)]
enum CostAction {
    /// Print the fitted switching-time constants.
    FitInfo,
}

#[derive(Subcommand, Debug)]
enum DeviceCmd {
    /// Id–Vg transfer curves in the erased and programmed states.
    Sweep {
        #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long, default_value_t = 0.1)]
        vd: f64,
        /// Program pulse amplitude, V.
        #[arg(long, default_value_t = 4.0)]
        program: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        vt_offset: f64,
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

/// Outcome of a command that may be checked against a target.
enum Outcome {
    Done,
    Checked(bool),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(Outcome::Checked(false)) if cli.check => {
            eprintln!("check: FAIL");
            ExitCode::from(EXIT_CHECK)
        }
        Ok(Outcome::Checked(ok)) => {
            if cli.check {
                eprintln!("check: {}", if ok { "PASS" } else { "FAIL" });
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Io { .. }
            | Error::Stream(_)
            | Error::Format(_)
            | Error::MissingClass(_)
            | Error::InvalidSplit(_)
            | Error::DimensionMismatch { .. },
        ) => EXIT_DATA,
        Some(_) => EXIT_USAGE,
        None if e.downcast_ref::<csv::Error>().is_some() => EXIT_DATA,
        None => EXIT_USAGE,
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Train { run, model } => train(cli, run, model),
        Command::Eval { run, model } => eval(cli, run, model.as_deref()),
        Command::SweepN { run, values, sweep } => sweep_cmd(cli, run, values, sweep, SweepAxis::N),
        Command::SweepD { run, values, sweep } => sweep_cmd(cli, run, values, sweep, SweepAxis::D),
        Command::Gates(g) => gates_cmd(cli, g),
        Command::Cost(c) => cost_cmd(cli, c),
        Command::Device(d) => device_cmd(cli, d),
    }
}

fn run_config(cli: &Cli, run: &RunArgs) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg = cfg.with_run_seed(s);
    }
    if let Some(d) = &run.data {
        cfg.dataset = d.clone();
    }
    if let Some(n) = run.ngram {
        cfg.ngram = n;
    }
    if let Some(d) = run.dim {
        cfg.dim = d;
    }
    if let Some(s) = run.scheme {
        cfg.scheme = s;
    }
    if let Some(r) = run.ratio {
        cfg.ratio = r;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_data(cfg: &RunConfig) -> anyhow::Result<spam::Dataset> {
    let ds = spam::load_dataset(&cfg.dataset)?;
    for s in ds.skipped.iter().take(10) {
        eprintln!("warning: {}:{}: skipped ({})", cfg.dataset.display(), s.line, s.reason);
    }
    if ds.skipped.len() > 10 {
        eprintln!("warning: {} more lines skipped", ds.skipped.len() - 10);
    }
    println!(
        "dataset {}: {} records ({} ham, {} spam), {} skipped",
        cfg.dataset.display(),
        ds.len(),
        ds.count(spam::Label::Ham),
        ds.count(spam::Label::Spam),
        ds.skipped.len()
    );
    Ok(ds)
}

fn items_path(model: &Path) -> PathBuf {
    let mut p = model.as_os_str().to_owned();
    p.push(".items");
    PathBuf::from(p)
}

fn train(cli: &Cli, run: &RunArgs, model_path: &Path) -> anyhow::Result<Outcome> {
    let cfg = run_config(cli, run)?;
    let ds = load_data(&cfg)?;
    let (train_ds, _) = spam::split(&ds, cfg.ratio, cfg.split_seed)?;
    let pipeline = Pipeline::new(&cfg)?;
    let t = Instant::now();
    let model = pipeline.train(&train_ds)?;
    model.memory.save(model_path)?;
    pipeline.encoder().item_memory().save(items_path(model_path))?;
    println!(
        "trained on {} messages ({} ham, {} spam), N={} D={} in {:.1?}; model written to {}",
        train_ds.len(),
        model.ham_count,
        model.spam_count,
        cfg.ngram,
        cfg.dim,
        t.elapsed(),
        model_path.display()
    );
    Ok(Outcome::Done)
}

fn eval(cli: &Cli, run: &RunArgs, model_path: Option<&Path>) -> anyhow::Result<Outcome> {
    let cfg = run_config(cli, run)?;
    let ds = load_data(&cfg)?;
    let (train_ds, test_ds) = spam::split(&ds, cfg.ratio, cfg.split_seed)?;
    let pipeline = Pipeline::new(&cfg)?;
    let t = Instant::now();
    let model = match model_path {
        Some(p) => {
            let items = ItemMemory::load(items_path(p))?;
            TrainedModel {
                memory: AssociativeMemory::load(p)?,
                item_fingerprint: items.fingerprint(),
                ham_count: 0,
                spam_count: 0,
            }
        }
        None => pipeline.train(&train_ds)?,
    };
    let rep = pipeline.evaluate(&test_ds, &model)?;
    let c = rep.confusion;
    println!(
        "accuracy {:.4} on {} test messages (N={} D={} {:?}) in {:.1?}",
        rep.accuracy,
        rep.n_test,
        rep.ngram,
        rep.dim,
        rep.scheme,
        t.elapsed()
    );
    println!(
        "confusion (spam positive): tp={} tn={} fp={} fn={}",
        c.true_spam, c.true_ham, c.false_spam, c.false_ham
    );
    if let Some(out) = &cli.out {
        let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
        w.write_record([
            "accuracy", "n_test", "tp", "tn", "fp", "fn", "ngram", "dim", "scheme", "split_seed", "item_seed",
            "tiebreak_seed",
        ])?;
        w.write_record([
            rep.accuracy.to_string(),
            rep.n_test.to_string(),
            c.true_spam.to_string(),
            c.true_ham.to_string(),
            c.false_spam.to_string(),
            c.false_ham.to_string(),
            rep.ngram.to_string(),
            rep.dim.to_string(),
            format!("{:?}", rep.scheme),
            rep.split_seed.to_string(),
            rep.item_seed.to_string(),
            rep.tiebreak_seed.to_string(),
        ])?;
        w.flush()?;
    }
    Ok(Outcome::Checked((0.88..=0.94).contains(&rep.accuracy)))
}

#[derive(Clone, Copy)]
enum SweepAxis {
    N,
    D,
}

fn sweep_cmd(
    cli: &Cli,
    run: &RunArgs,
    values: &[usize],
    sweep: &SweepArgs,
    axis: SweepAxis,
) -> anyhow::Result<Outcome> {
    if sweep.seeds == 0 {
        bail!(Error::InvalidConfig("--seeds must be >= 1".into()));
    }
    let cfg = run_config(cli, run)?;
    let ds = load_data(&cfg)?;
    let base = cli.seed.unwrap_or(0);
    let seeds: Vec<u64> = (0..sweep.seeds).map(|i| base.wrapping_add(i)).collect();
    let rows = match axis {
        SweepAxis::N => spam::sweep_n(&ds, &cfg, values, &seeds)?,
        SweepAxis::D => spam::sweep_d(&ds, &cfg, values, &seeds)?,
    };
    let name = match axis {
        SweepAxis::N => "ngram",
        SweepAxis::D => "dim",
    };
    println!("{name:>8} {:>8} {:>8}", "mean", "std");
    for r in &rows {
        println!("{:>8} {:>8.4} {:>8.4}", r.x, r.mean, r.std);
    }
    if let Some(out) = &cli.out {
        write_sweep_csv(out, name, &rows, &seeds, sweep.plot_data)?;
    }
    let ok = match axis {
        SweepAxis::N => n_sweep_shape_ok(&rows),
        SweepAxis::D => d_sweep_saturates(&rows),
    };
    Ok(Outcome::Checked(ok))
}

fn write_sweep_csv(out: &Path, name: &str, rows: &[SweepRow], seeds: &[u64], plot: bool) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    let mut header = vec![name.to_string(), "mean".into(), "std".into()];
    if !plot {
        header.extend(seeds.iter().map(|s| format!("seed_{s}")));
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.x.to_string(), r.mean.to_string(), r.std.to_string()];
        if !plot {
            rec.extend(r.per_seed.iter().map(|a| a.to_string()));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn n_sweep_shape_ok(rows: &[SweepRow]) -> bool {
    let Some(best) = rows.iter().max_by(|a, b| a.mean.total_cmp(&b.mean)) else {
        return false;
    };
    let Some(at4) = rows.iter().find(|r| r.x == 4) else {
        return false;
    };
    best.x == 4 && rows.iter().filter(|r| r.x >= 6).all(|r| r.mean < at4.mean)
}

fn d_sweep_saturates(rows: &[SweepRow]) -> bool {
    let monotone = rows.windows(2).all(|w| w[1].mean - w[0].mean > -0.005);
    let tail = match (rows.iter().find(|r| r.x == 9000), rows.iter().find(|r| r.x == 10_000)) {
        (Some(a), Some(b)) => (b.mean - a.mean).abs() < 0.01,
        _ => true,
    };
    monotone && tail
}

fn bits(inputs: &[bool]) -> String {
    inputs.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn fmt_current(i: f64) -> String {
    if i >= 1e-6 {
        format!("{:.3} uA", i * 1e6)
    } else if i >= 1e-9 {
        format!("{:.3} nA", i * 1e9)
    } else {
        format!("{:.3} pA", i * 1e12)
    }
}

fn gates_cmd(cli: &Cli, cmd: &GatesCmd) -> anyhow::Result<Outcome> {
    match cmd {
        GatesCmd::TruthTable { gate, vt_offset } => {
            let kind = GateKind::from(*gate);
            let rows = gates::truth_table(kind, *vt_offset);
            let threshold = gates::decision_threshold(kind);
            println!("{kind} truth table, vt_offset {vt_offset} V, threshold {}", fmt_current(threshold));
            for r in &rows {
                println!(
                    "{:>4} {:<20} {:<7} {:>12} -> {}",
                    bits(&r.inputs),
                    r.op_label,
                    format!("{:?}", r.vt_class),
                    fmt_current(r.current),
                    u8::from(r.logic_out)
                );
            }
            if let Some(out) = &cli.out {
                let mut w = csv::Writer::from_path(out)?;
                w.write_record(["gate", "inputs", "operation", "vt_class", "current_a", "logic_out"])?;
                for r in &rows {
                    w.write_record([
                        kind.to_string(),
                        bits(&r.inputs),
                        r.op_label.to_string(),
                        format!("{:?}", r.vt_class),
                        r.current.to_string(),
                        u8::from(r.logic_out).to_string(),
                    ])?;
                }
                w.flush()?;
            }
            Ok(Outcome::Checked(rows.iter().all(|r| r.sensed(threshold) == r.logic_out)))
        }
        GatesCmd::Mc { gate, n, three_sigma, plot_data } => {
            let kind = GateKind::from(*gate);
            let mut rng = HvRng::new(cli.seed.unwrap_or(0));
            let rep = gates::monte_carlo(kind, *n, *three_sigma, &mut rng)?;
            println!(
                "{kind}: {} samples, 3sigma {} V: min logic-1 {}, max logic-0 {}, ratio {:.3}, threshold errors {}",
                rep.n_samples,
                rep.three_sigma,
                fmt_current(rep.min_logic1_current),
                fmt_current(rep.max_logic0_current),
                rep.margin_ratio,
                rep.threshold_errors
            );
            for r in &rep.rows {
                println!(
                    "{:>4} -> {}  min {:>12}  mean {:>12}  max {:>12}",
                    bits(&r.inputs),
                    u8::from(r.logic_out),
                    fmt_current(r.min_current),
                    fmt_current(r.mean_current),
                    fmt_current(r.max_current)
                );
            }
            if let Some(out) = &cli.out {
                let mut w = csv::Writer::from_path(out)?;
                if *plot_data {
                    w.write_record(["inputs", "logic_out", "bin_lo_a", "bin_hi_a", "count"])?;
                    for r in &rep.rows {
                        let h = &r.histogram;
                        for (b, c) in h.counts.iter().enumerate() {
                            let lo = h.log10_lo + b as f64 * h.bin_decades;
                            w.write_record([
                                bits(&r.inputs),
                                u8::from(r.logic_out).to_string(),
                                10f64.powf(lo).to_string(),
                                10f64.powf(lo + h.bin_decades).to_string(),
                                c.to_string(),
                            ])?;
                        }
                    }
                } else {
                    let mut header = vec!["sample".to_string(), "vt_offset_v".to_string()];
                    header.extend(kind.table().iter().map(|r| format!("i_{}", bits(r.inputs))));
                    w.write_record(&header)?;
                    for s in &rep.samples {
                        let mut rec = vec![s.index.to_string(), s.vt_offset.to_string()];
                        rec.extend(s.currents.iter().map(|c| c.to_string()));
                        w.write_record(&rec)?;
                    }
                }
                w.flush()?;
            }
            Ok(Outcome::Checked(rep.pass()))
        }
        GatesCmd::Verify { gate, params } => {
            let params = match params {
                Some(p) => FerroParams::load(p)?,
                None => FerroParams::default(),
            };
            let rep = gates::verify_against_device(GateKind::from(*gate), &params, &GateProtocol::default())?;
            print!("{rep}");
            Ok(Outcome::Checked(rep.all_match()))
        }
    }
}

fn cost_cmd(cli: &Cli, cmd: &CostCmd) -> anyhow::Result<Outcome> {
    let fit = SwitchTimeFit::reference();
    if let Some(CostAction::FitInfo) = cmd.action {
        println!("t_switch = t0 * exp(a / (V - v0)^2)");
        println!("t0 = {:e} s", fit.t0);
        println!("a  = {:.6} V^2", fit.a_over_kt);
        println!("v0 = {:.6} V", fit.v0);
        for (v, t) in cost::ANCHOR_POINTS {
            println!("  {v:.1} V: anchor {t:e} s, fitted {:e} s", fit.switch_time(v)?);
        }
        println!("  4.5 V: fitted {:e} s", fit.switch_time(4.5)?);
        return Ok(Outcome::Done);
    }
    let p = EncoderCostParams {
        xor_stages_per_window: cmd.xor_stages,
        ..EncoderCostParams::new(cmd.m, cmd.n, cmd.z, cmd.d)
    };
    let r = encoder_cost(&p, &fit)?;
    println!("encoder cost for m={} N={} Z={} D={}", p.m, p.n, p.z, p.d);
    println!("  XOR gates        {}", r.xor_count);
    println!("  majority gates   {}", r.maj_count);
    println!("  energy           {:.3} nJ", r.total_energy * 1e9);
    println!("  area             {:.4} mm^2", r.total_area * 1e6);
    println!("  XOR delay        {:.2} ns", r.xor_delay * 1e9);
    println!("  majority delay   {:.2} ns", r.maj_delay * 1e9);
    println!("  XOR endurance    {:e} evaluations", r.endurance_cycles_xor);
    println!("  maj endurance    {:e} evaluations", r.endurance_cycles_maj);
    for n in &r.notes {
        println!("  note: {n}");
    }
    if let Some(out) = &cli.out {
        let mut w = csv::Writer::from_path(out)?;
        w.write_record(cost_header())?;
        w.write_record(r.csv_record())?;
        w.flush()?;
    } else {
        let mut w = csv::Writer::from_writer(std::io::stdout());
        println!();
        w.write_record(cost_header())?;
        w.write_record(r.csv_record())?;
        w.flush()?;
    }
    std::io::stdout().flush()?;
    Ok(Outcome::Done)
}

fn cost_header() -> [&'static str; 9] {
    fehd_core::CostReport::csv_header()
}

fn device_cmd(cli: &Cli, cmd: &DeviceCmd) -> anyhow::Result<Outcome> {
    let DeviceCmd::Sweep { from, to, step, vd, program, vt_offset, params } = cmd;
    if step.is_nan() || *step <= 0.0 || to < from {
        bail!(Error::InvalidConfig("sweep needs step > 0 and to >= from".into()));
    }
    let params = match params {
        Some(p) => FerroParams::load(p)?,
        None => FerroParams::default(),
    };
    let erased = FeFetState::new(params.clone(), *vt_offset)?;
    let mut programmed = erased.clone();
    programmed.apply_pulse(&Pulse::program(*program, 1e-6)?);
    println!(
        "erased Vt {:.3} V, programmed Vt {:.3} V (after {program} V, 1 us)",
        erased.threshold_voltage(),
        programmed.threshold_voltage()
    );
    let a = erased.transfer_curve(*from, *to, *step, *vd);
    let b = programmed.transfer_curve(*from, *to, *step, *vd);
    match &cli.out {
        Some(out) => {
            let mut w = csv::Writer::from_path(out)?;
            w.write_record(["vg_v", "id_erased_a", "id_programmed_a"])?;
            for ((vg, ie), (_, ip)) in a.iter().zip(&b) {
                w.write_record([vg.to_string(), ie.to_string(), ip.to_string()])?;
            }
            w.flush()?;
        }
        None => {
            for ((vg, ie), (_, ip)) in a.iter().zip(&b) {
                println!("{vg:>6.2} {:>12} {:>12}", fmt_current(*ie), fmt_current(*ip));
            }
        }
    }
    Ok(Outcome::Done)
}
