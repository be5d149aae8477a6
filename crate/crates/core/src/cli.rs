//! Command-line front end used by the `circsynth` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuit::{from_json, to_dot, to_json, RectifierCircuit};
use crate::gf2::{random_kernel, BitVector, CirculantKernel};
use crate::synth::synth;
use crate::verify::{audit_bounds, verify_exact, verify_freivalds, FreivaldsOutcome, Verification};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "circsynth", version, about = "Bounded-depth XOR circuits for circulant matrices over GF(2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Synthesize a circuit and write it as JSON.
    Synth(SynthArgs),
    /// Check a circuit against a kernel.
    Verify(VerifyArgs),
    /// Evaluate a circuit on one input vector.
    Eval(EvalArgs),
    /// Synthesize a grid of random kernels and write a CSV of sizes.
    Bench(BenchArgs),
    /// Print node, edge and depth counts as JSON.
    Stats(CircuitArg),
    /// Write a circuit in Graphviz DOT format.
    ExportDot(ExportDotArgs),
}

#[derive(Args, Debug, Clone)]
pub struct KernelArgs {
    /// Kernel source: a kernel text file, `hex:<digits>` or `random:<seed>`.
    #[arg(long)]
    pub kernel: String,
    /// Treat the bits as the first row of the circulant (default).
    #[arg(long, conflicts_with = "kernel_is_convolution")]
    pub first_row: bool,
    /// Treat the bits as the convolution kernel `a`.
    #[arg(long)]
    pub kernel_is_convolution: bool,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Matrix order; optional when the kernel file states it.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Freivalds,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, default_value_t = 40)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Bit string, index 0 first.
    #[arg(long)]
    pub input: String,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub depths: Vec<u32>,
    /// Number of seeds per (n, d); seeds run from 0 to K-1.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long)]
    pub csv: PathBuf,
}

#[derive(Args, Debug)]
pub struct CircuitArg {
    #[arg(long)]
    pub circuit: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExportDotArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `out`. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> anyhow::Result<bool> {
    match cmd {
        Command::Synth(a) => cmd_synth(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Stats(a) => cmd_stats(&a, out),
        Command::ExportDot(a) => cmd_export_dot(&a, out),
    }
}

/// Decodes big-endian hex into `n` bits: bit 0 is the top bit of the first
/// digit. Short input is zero-padded; bits past `n` must be zero.
pub fn parse_hex_bits(hex: &str, n: usize) -> anyhow::Result<BitVector> {
    let mut bits = BitVector::zeros(n);
    for (d, ch) in hex.chars().enumerate() {
        let v = ch.to_digit(16).with_context(|| format!("invalid hex digit {ch:?}"))?;
        for b in 0..4 {
            if v >> (3 - b) & 1 == 1 {
                let i = 4 * d + b;
                ensure!(i < n, "hex kernel has a set bit at index {i}, beyond n = {n}");
                bits.set(i, true);
            }
        }
    }
    Ok(bits)
}

/// Resolves a `--kernel` value. `n` is required for `hex:` and `random:`;
/// for files it is checked against the stated order.
pub fn load_kernel(args: &KernelArgs, n: Option<usize>) -> anyhow::Result<CirculantKernel> {
    let spec = args.kernel.as_str();
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed.parse().with_context(|| format!("invalid seed {seed:?}"))?;
        let n = n.context("--n is required for random kernels")?;
        return Ok(random_kernel(n, seed)?);
    }
    let (n, bits) = if let Some(hex) = spec.strip_prefix("hex:") {
        let n = n.context("--n is required for hex kernels")?;
        (n, parse_hex_bits(hex, n)?)
    } else {
        let text = fs::read_to_string(spec).with_context(|| format!("reading kernel file {spec}"))?;
        let k = CirculantKernel::parse_first_row_text(&text).with_context(|| format!("parsing kernel file {spec}"))?;
        if let Some(n) = n {
            ensure!(n == k.n(), "--n {n} does not match kernel length {}", k.n());
        }
        (k.n(), k.first_row())
    };
    debug_assert_eq!(bits.len(), n);
    Ok(if args.kernel_is_convolution {
        CirculantKernel::new(bits)?
    } else {
        CirculantKernel::from_first_row(&bits)?
    })
}

fn read_circuit(path: &Path) -> anyhow::Result<RectifierCircuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_json(&text).with_context(|| format!("loading circuit {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn stats_json(c: &RectifierCircuit) -> String {
    serde_json::to_string(&c.stats()).expect("stats serialize")
}

fn cmd_synth(a: &SynthArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let kernel = load_kernel(&a.kernel, a.n)?;
    let c = synth(&kernel, a.depth as usize)?;
    write_file(&a.out, &to_json(&c))?;
    if let Some(dot) = &a.dot {
        write_file(dot, &to_dot(&c))?;
    }
    writeln!(out, "{}", stats_json(&c))?;
    Ok(true)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let c = read_circuit(&a.circuit)?;
    let kernel = load_kernel(&a.kernel, Some(c.n_inputs()))?;
    let ok = match a.mode {
        Mode::Exact => match verify_exact(&c, &kernel)? {
            Verification::Ok => true,
            Verification::Mismatch { row, col } => {
                writeln!(out, "mismatch at output {row}, input {col}")?;
                false
            }
        },
        Mode::Freivalds => match verify_freivalds(&c, &kernel, a.trials, a.seed)? {
            FreivaldsOutcome::Pass => true,
            FreivaldsOutcome::Fail { trial } => {
                writeln!(out, "mismatch in trial {trial}")?;
                false
            }
        },
    };
    if ok {
        writeln!(out, "ok")?;
    }
    Ok(ok)
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let c = read_circuit(&a.circuit)?;
    let x: BitVector = a.input.trim().parse().context("parsing --input")?;
    ensure!(
        x.len() == c.n_inputs(),
        "input has {} bits, circuit expects {}",
        x.len(),
        c.n_inputs()
    );
    writeln!(out, "{}", c.evaluate(&x)?)?;
    Ok(true)
}

pub const BENCH_HEADER: &str = "n,d,seed,edges,depth,nodes,bound_base,ratio,synth_millis";

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    if a.seeds == 0 {
        bail!("--seeds must be >= 1");
    }
    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    for &n in &a.ns {
        for &d in &a.depths {
            for seed in 0..a.seeds {
                let kernel = random_kernel(n, seed)?;
                let start = Instant::now();
                let c = synth(&kernel, d as usize)?;
                let millis = start.elapsed().as_secs_f64() * 1e3;
                let r = audit_bounds(&c, d as usize)?;
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{:.6},{:.6},{:.3}",
                    r.n, r.d, seed, r.edges, r.depth_measured, r.nodes, r.bound_base, r.ratio, millis
                )?;
                writeln!(out, "n={n} d={d} seed={seed} edges={} depth={} ratio={:.4}", r.edges, r.depth_measured, r.ratio)?;
            }
        }
    }
    write_file(&a.csv, &csv)?;
    Ok(true)
}

fn cmd_stats(a: &CircuitArg, out: &mut dyn Write) -> anyhow::Result<bool> {
    let c = read_circuit(&a.circuit)?;
    writeln!(out, "{}", stats_json(&c))?;
    Ok(true)
}

fn cmd_export_dot(a: &ExportDotArgs, _out: &mut dyn Write) -> anyhow::Result<bool> {
    let c = read_circuit(&a.circuit)?;
    write_file(&a.out, &to_dot(&c))?;
    Ok(true)
}
