//! Command-line front end: presets, detuning sweeps, closed-form-vs-oracle
//! verification, and tabular output for plotting.
//!
//! Subcommands: `spectrum`, `delay`, `windows`, `verify`. Every output file
//! is paired with a `<name>.manifest.json` sidecar recording the resolved
//! parameters (Hz units), grid, tool version, and timestamp. Exit codes:
//! 2 config error, 3 singular-point failure, 1 verification over tolerance.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use omm::analysis::{delay_extrema, fano_asymmetry, find_windows, DelayExtremum, WindowReport};
use omm::model::{
    apply_swept, build_params, paper_preset, Config, Preset, SweepSpec, SweptName, SweptParam,
    SystemParams,
};
use omm::oracle::{verify_closed_form, verify_random_draws, RandomDrawReport, VerifyReport};
use omm::response::{group_delay_opts, spectrum_opts, ResponseOptions, Spectrum};
use omm::steady_state::{derive, DerivedState};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "omm",
    version,
    about = "Probe response of a driven opto-magnomechanical cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the probe response over a detuning grid and write CSV.
    Spectrum(RunArgs),
    /// Spectrum plus a refined group-delay extrema table.
    Delay(DelayArgs),
    /// Count transparency windows and score the lineshape asymmetry.
    Windows(WindowsArgs),
    /// Compare the closed form against the sideband linear-system oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Built-in preset id (fig2a..fig2e, fig3a, fig3b, fig4a, fig4b,
    /// fig5a_fano, fig5b_fano, fig_phase_a..d, fig6a, fig6b, fig8).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// JSON config file (Hz units).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    /// Detuning range MIN:MAX in units of omega_b1.
    #[arg(long)]
    range: Option<String>,
    /// Swept parameter, e.g. `G_c2=0,2,4,8MHz` or `lambda_over_kappa_c=0,0.5`.
    /// A unit suffix on the last value applies to the whole list.
    #[arg(long)]
    sweep: Option<String>,
    /// Rescale the transmitted field with kappa_a instead of kappa_c.
    #[arg(long)]
    strict_paper_kappa: bool,
}

#[derive(Args)]
struct DelayArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Print step-halving convergence ratios at each delay extremum.
    #[arg(long)]
    step_check: bool,
}

#[derive(Args)]
struct WindowsArgs {
    #[arg(long, conflicts_with_all = ["config", "input"])]
    preset: Option<String>,
    #[arg(long, conflicts_with = "input")]
    config: Option<PathBuf>,
    /// Score a previously written spectrum CSV instead of computing one.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    range: Option<String>,
    /// Prominence threshold for counting a dip as a window.
    #[arg(long, default_value_t = omm::DEFAULT_PROMINENCE)]
    prominence: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Relative tolerance on |c_closed - c_oracle| / |c_oracle|.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random parameter draws.
    #[arg(long, default_value_t = 1000)]
    draws: usize,
    /// Grid points per preset.
    #[arg(long, default_value_t = 4001)]
    points: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
    fn singular(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
    fn tolerance(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Delay(args) => cmd_delay(&args),
        Command::Windows(args) => cmd_windows(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn timestamp_unix() -> u64 {
    // SOURCE_DATE_EPOCH makes manifests reproducible.
    if let Ok(value) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(secs) = value.parse() {
            return secs;
        }
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[derive(Serialize)]
struct GridInfo {
    delta_min_over_omega_b: f64,
    delta_max_over_omega_b: f64,
    n_points: usize,
}

#[derive(Serialize)]
struct SweptInfo {
    name: String,
    value: f64,
}

#[derive(Serialize)]
struct DiscrepancySummary {
    max_rel_err: f64,
    pass: bool,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    tool_version: &'static str,
    timestamp_unix: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    params_hz: Option<Config>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    swept: Option<SweptInfo>,
    strict_paper_kappa: bool,
    output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    discrepancy_summary: Option<DiscrepancySummary>,
}

fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<(), Failure> {
    let manifest_path = path.with_extension(format!(
        "{}.manifest.json",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    let body = serde_json::to_string_pretty(manifest)
        .map_err(|e| Failure::config(format!("manifest serialization: {e}")))?;
    fs::write(&manifest_path, body)
        .map_err(|e| Failure::config(format!("write {}: {e}", manifest_path.display())))?;
    Ok(())
}

/// Resolved run setup: validated parameters, grid, and a filename tag.
struct Setup {
    params: SystemParams,
    sweep: SweepSpec,
    tag: String,
}

fn parse_range(range: &str) -> Result<(f64, f64), Failure> {
    let (lo, hi) = range
        .split_once(':')
        .ok_or_else(|| Failure::config(format!("--range wants MIN:MAX, got `{range}`")))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| Failure::config(format!("bad range minimum `{lo}`")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| Failure::config(format!("bad range maximum `{hi}`")))?;
    Ok((lo, hi))
}

fn unit_multiplier(token: &str) -> Option<(f64, usize)> {
    for (suffix, mult) in [("GHz", 1e9), ("MHz", 1e6), ("kHz", 1e3), ("Hz", 1.0)] {
        if let Some(stripped) = token.strip_suffix(suffix) {
            return Some((mult, token.len() - stripped.len()));
        }
    }
    None
}

fn parse_sweep(spec: &str) -> Result<SweptParam, Failure> {
    let (name, list) = spec
        .split_once('=')
        .ok_or_else(|| Failure::config(format!("--sweep wants name=v1,v2,..., got `{spec}`")))?;
    let name: SweptName = name
        .trim()
        .parse()
        .map_err(|e| Failure::config(format!("{e}")))?;
    let mut tokens: Vec<String> = list.split(',').map(|t| t.trim().to_string()).collect();
    if tokens.is_empty() || tokens.iter().any(|t| t.is_empty()) {
        return Err(Failure::config(format!("empty value in sweep `{spec}`")));
    }
    // a unit suffix on the final value sets the unit for the whole list
    let mut mult = 1.0;
    if let Some(last) = tokens.last_mut() {
        if let Some((m, suffix_len)) = unit_multiplier(last) {
            if !name.is_hz() {
                return Err(Failure::config(format!(
                    "swept parameter {name} is not frequency-like; drop the unit suffix"
                )));
            }
            mult = m;
            let keep = last.len() - suffix_len;
            last.truncate(keep);
        }
    }
    let mut values = Vec::with_capacity(tokens.len());
    for token in &tokens {
        let v: f64 = token
            .parse()
            .map_err(|_| Failure::config(format!("bad sweep value `{token}`")))?;
        values.push(v * mult);
    }
    Ok(SweptParam { name, values })
}

fn resolve_setup(args: &RunArgs) -> Result<Setup, Failure> {
    let (params, mut sweep, tag) = match (&args.preset, &args.config) {
        (Some(id), None) => {
            let preset: Preset = id.parse().map_err(|e| Failure::config(format!("{e}")))?;
            let (params, sweep) = paper_preset(preset);
            (params, sweep, preset.id().to_string())
        }
        (None, Some(path)) => {
            let body = fs::read_to_string(path)
                .map_err(|e| Failure::config(format!("read {}: {e}", path.display())))?;
            let cfg = Config::from_json_str(&body).map_err(|e| Failure::config(format!("{e}")))?;
            let params = build_params(&cfg).map_err(|e| Failure::config(format!("{e}")))?;
            let sweep = SweepSpec::new(0.0, 2.0, 4001, None).expect("default sweep is valid");
            let tag = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("config")
                .to_string();
            (params, sweep, tag)
        }
        _ => {
            return Err(Failure::config(
                "exactly one of --preset or --config is required",
            ))
        }
    };
    if let Some((lo, hi)) = args.range.as_deref().map(parse_range).transpose()? {
        sweep.delta_min = lo;
        sweep.delta_max = hi;
    }
    if let Some(points) = args.points {
        sweep.n_points = points;
    }
    if let Some(spec) = &args.sweep {
        sweep.swept = Some(parse_sweep(spec)?);
    }
    sweep
        .validate()
        .map_err(|e| Failure::config(format!("{e}")))?;
    Ok(Setup { params, sweep, tag })
}

fn fmt_value(v: f64) -> String {
    // filename-safe float formatting
    format!("{v}").replace('-', "m")
}

/// Filename label, swept-value record, and parameters of one trace.
type Trace = (String, Option<SweptInfo>, SystemParams);

/// One trace per swept value (or a single unlabelled trace).
fn traces(setup: &Setup) -> Result<Vec<Trace>, Failure> {
    match &setup.sweep.swept {
        None => Ok(vec![(String::new(), None, setup.params.clone())]),
        Some(swept) => swept
            .values
            .iter()
            .map(|&value| {
                let params = apply_swept(&setup.params, swept.name, value)
                    .map_err(|e| Failure::config(format!("{e}")))?;
                let label = format!("__{}_{}", swept.name.key(), fmt_value(value));
                let info = SweptInfo {
                    name: swept.name.key().to_string(),
                    value,
                };
                Ok((label, Some(info), params))
            })
            .collect(),
    }
}

fn derive_state(params: &SystemParams) -> Result<DerivedState, Failure> {
    derive(params).map_err(|e| Failure::config(format!("{e}")))
}

fn spectrum_csv(spectrum: &Spectrum, omega_b1: f64) -> String {
    let mut body =
        String::from("delta_over_omega_b,re_eps_out,im_eps_out,re_T,im_T,phi_rad,tau_s\n");
    for p in &spectrum.points {
        let _ = writeln!(
            body,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            p.delta / omega_b1,
            p.eps_out.re,
            p.eps_out.im,
            p.transmission.re,
            p.transmission.im,
            p.phi,
            p.tau
        );
    }
    body
}

struct TraceRun {
    setup: Setup,
    outputs: Vec<(PathBuf, DerivedState)>,
    n_failed_points: usize,
}

/// Shared by spectrum and delay: compute all traces, write CSV + manifest
/// per trace, report per-point failures. Returns the per-trace states and
/// output paths for follow-up work.
fn run_traces(args: &RunArgs, command: &str) -> Result<TraceRun, Failure> {
    let setup = resolve_setup(args)?;
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::config(format!("create {}: {e}", args.out.display())))?;
    let opts = ResponseOptions {
        strict_kappa_a: args.strict_paper_kappa,
        ..Default::default()
    };
    let mut outputs = Vec::new();
    let mut n_failed_points = 0usize;
    for (label, swept, params) in traces(&setup)? {
        let state = derive_state(&params)?;
        let spec = spectrum_opts(&state, &setup.sweep, &opts)
            .map_err(|e| Failure::config(format!("{e}")))?;
        for failure in &spec.failures {
            n_failed_points += 1;
            eprintln!(
                "singular point: delta/omega_b = {:.9} ({})",
                failure.delta / params.omega_b1,
                failure.error
            );
        }
        let filename = format!("{command}_{}{}.csv", setup.tag, label);
        let path = args.out.join(&filename);
        fs::write(&path, spectrum_csv(&spec, params.omega_b1))
            .map_err(|e| Failure::config(format!("write {}: {e}", path.display())))?;
        write_manifest(
            &path,
            &RunManifest {
                command: command.to_string(),
                tool_version: TOOL_VERSION,
                timestamp_unix: timestamp_unix(),
                params_hz: Some(params.emit_config()),
                grid: Some(GridInfo {
                    delta_min_over_omega_b: setup.sweep.delta_min,
                    delta_max_over_omega_b: setup.sweep.delta_max,
                    n_points: setup.sweep.n_points,
                }),
                swept,
                strict_paper_kappa: args.strict_paper_kappa,
                output: filename.clone(),
                discrepancy_summary: None,
            },
        )?;
        println!("wrote {}", path.display());
        outputs.push((path, state));
    }
    Ok(TraceRun {
        setup,
        outputs,
        n_failed_points,
    })
}

fn cmd_spectrum(args: &RunArgs) -> Result<(), Failure> {
    let run = run_traces(args, "spectrum")?;
    if run.n_failed_points > 0 {
        return Err(Failure::singular(format!(
            "{} grid point(s) could not be evaluated",
            run.n_failed_points
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ExtremumOut {
    kind: omm::ExtremumKind,
    delta_over_omega_b: f64,
    tau_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    step_halving_rel_diff: Option<f64>,
}

fn cmd_delay(args: &DelayArgs) -> Result<(), Failure> {
    let run = run_traces(&args.run, "delay")?;
    let opts = ResponseOptions {
        strict_kappa_a: args.run.strict_paper_kappa,
        ..Default::default()
    };
    for (csv_path, state) in &run.outputs {
        let extrema =
            delay_extrema(state, &run.setup.sweep).map_err(|e| Failure::config(format!("{e}")))?;
        let wb = state.params.omega_b1;
        let mut rows = Vec::with_capacity(extrema.len());
        println!("delay extrema for {}:", csv_path.display());
        println!(
            "  {:<10} {:>16} {:>14}",
            "kind", "delta/omega_b", "tau [us]"
        );
        for DelayExtremum { delta, tau, kind } in &extrema {
            let step_check = if args.step_check {
                let est = group_delay_opts(state, *delta, &opts)
                    .map_err(|e| Failure::config(format!("{e}")))?;
                Some(est.step_halving_rel_diff)
            } else {
                None
            };
            println!(
                "  {:<10} {:>16.9} {:>14.4}{}",
                format!("{kind:?}"),
                delta / wb,
                tau * 1e6,
                step_check
                    .map(|r| format!("   step-halving rel diff {r:.3e}"))
                    .unwrap_or_default()
            );
            rows.push(ExtremumOut {
                kind: *kind,
                delta_over_omega_b: delta / wb,
                tau_s: *tau,
                step_halving_rel_diff: step_check,
            });
        }
        let json_path = csv_path.with_extension("extrema.json");
        let body = serde_json::to_string_pretty(&rows)
            .map_err(|e| Failure::config(format!("extrema serialization: {e}")))?;
        fs::write(&json_path, body)
            .map_err(|e| Failure::config(format!("write {}: {e}", json_path.display())))?;
        println!("wrote {}", json_path.display());
    }
    if run.n_failed_points > 0 {
        return Err(Failure::singular(format!(
            "{} grid point(s) could not be evaluated",
            run.n_failed_points
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ExtremumJson {
    delta_over_omega_b: f64,
    value: f64,
    prominence: f64,
}

#[derive(Serialize)]
struct WindowsOut {
    source: String,
    prominence_threshold: f64,
    window_count: usize,
    peaks: Vec<ExtremumJson>,
    dips: Vec<ExtremumJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fano_asymmetry: Option<f64>,
    fano_center_over_omega_b: f64,
}

fn windows_out(source: String, report: &WindowReport, fano: Option<f64>, scale: f64) -> WindowsOut {
    let map = |e: &omm::analysis::Extremum| ExtremumJson {
        delta_over_omega_b: e.delta / scale,
        value: e.value,
        prominence: e.prominence,
    };
    WindowsOut {
        source,
        prominence_threshold: report.prominence_threshold,
        window_count: report.window_count,
        peaks: report.peaks.iter().map(map).collect(),
        dips: report.dips.iter().map(map).collect(),
        fano_asymmetry: fano,
        fano_center_over_omega_b: 1.0,
    }
}

fn read_spectrum_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    let body = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("read {}: {e}", path.display())))?;
    let mut lines = body.lines();
    let header = lines
        .next()
        .ok_or_else(|| Failure::config("empty CSV".to_string()))?;
    let columns: Vec<&str> = header.split(',').collect();
    let col = |name: &str| -> Result<usize, Failure> {
        columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| Failure::config(format!("CSV is missing column `{name}`")))
    };
    let delta_col = col("delta_over_omega_b")?;
    let re_col = col("re_eps_out")?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (line_no, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |idx: usize| -> Result<f64, Failure> {
            fields
                .get(idx)
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Failure::config(format!("bad CSV field at line {}", line_no + 2)))
        };
        xs.push(parse(delta_col)?);
        ys.push(parse(re_col)?);
    }
    Ok((xs, ys))
}

fn cmd_windows(args: &WindowsArgs) -> Result<(), Failure> {
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::config(format!("create {}: {e}", args.out.display())))?;
    let (out, params_hz, tag) = if let Some(input) = &args.input {
        // delta column is already dimensionless
        let (xs, ys) = read_spectrum_csv(input)?;
        let report =
            find_windows(&xs, &ys, args.prominence).map_err(|e| Failure::config(format!("{e}")))?;
        let fano = fano_asymmetry(&xs, &ys, 1.0, 0.5).ok().map(|s| s.asymmetry);
        let tag = input
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("input")
            .to_string();
        (
            windows_out(input.display().to_string(), &report, fano, 1.0),
            None,
            tag,
        )
    } else {
        let run_args = RunArgs {
            preset: args.preset.clone(),
            config: args.config.clone(),
            out: args.out.clone(),
            points: args.points,
            range: args.range.clone(),
            sweep: None,
            strict_paper_kappa: false,
        };
        let setup = resolve_setup(&run_args)?;
        let state = derive_state(&setup.params)?;
        let spec = spectrum_opts(&state, &setup.sweep, &ResponseOptions::default())
            .map_err(|e| Failure::config(format!("{e}")))?;
        let wb = state.params.omega_b1;
        let xs: Vec<f64> = spec.points.iter().map(|p| p.delta).collect();
        let ys: Vec<f64> = spec.points.iter().map(|p| p.eps_out.re).collect();
        let report =
            find_windows(&xs, &ys, args.prominence).map_err(|e| Failure::config(format!("{e}")))?;
        let fano = fano_asymmetry(&xs, &ys, wb, 0.5 * wb)
            .ok()
            .map(|s| s.asymmetry);
        (
            windows_out(setup.tag.clone(), &report, fano, wb),
            Some(setup.params.emit_config()),
            setup.tag,
        )
    };

    let body = serde_json::to_string_pretty(&out)
        .map_err(|e| Failure::config(format!("report serialization: {e}")))?;
    println!("{body}");
    let filename = format!("windows_{tag}.json");
    let path = args.out.join(&filename);
    fs::write(&path, &body)
        .map_err(|e| Failure::config(format!("write {}: {e}", path.display())))?;
    write_manifest(
        &path,
        &RunManifest {
            command: "windows".to_string(),
            tool_version: TOOL_VERSION,
            timestamp_unix: timestamp_unix(),
            params_hz,
            grid: None,
            swept: None,
            strict_paper_kappa: false,
            output: filename,
            discrepancy_summary: None,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct PresetEntry {
    id: &'static str,
    report: VerifyReport,
}

#[derive(Serialize)]
struct VerifyLedger {
    tool_version: &'static str,
    tol: f64,
    seed: u64,
    draws: usize,
    points_per_preset: usize,
    presets: Vec<PresetEntry>,
    random: RandomDrawReport,
    max_rel_err_overall: f64,
    overall_pass: bool,
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::config(format!("create {}: {e}", args.out.display())))?;
    let mut entries = Vec::new();
    let mut max_err = 0.0_f64;
    let mut presets_pass = true;
    for preset in Preset::ALL {
        let (params, mut sweep) = paper_preset(preset);
        sweep.swept = None;
        sweep.n_points = args.points;
        let state = derive_state(&params)?;
        let report = verify_closed_form(&state, &sweep, args.tol);
        println!(
            "{:<12} max_rel_err = {:>12.3e} at delta/omega_b = {:>9.5} ({} compared, {} skipped) [{}]",
            preset.id(),
            report.max_rel_err,
            report.argmax_delta_over_omega_b,
            report.n_compared,
            report.n_skipped,
            if report.pass { "PASS" } else { "FAIL" }
        );
        max_err = max_err.max(report.max_rel_err);
        presets_pass &= report.pass;
        entries.push(PresetEntry {
            id: preset.id(),
            report,
        });
    }
    let random = verify_random_draws(args.seed, args.draws, args.tol);
    println!(
        "random draws (seed {}, n {}): max_rel_err = {:.3e} ({} compared, {} skipped) [{}]",
        random.seed,
        random.n_draws,
        random.max_rel_err,
        random.n_compared,
        random.n_skipped,
        if random.pass { "PASS" } else { "FAIL" }
    );
    max_err = max_err.max(random.max_rel_err);

    let ledger = VerifyLedger {
        tool_version: TOOL_VERSION,
        tol: args.tol,
        seed: args.seed,
        draws: args.draws,
        points_per_preset: args.points,
        presets: entries,
        random,
        max_rel_err_overall: max_err,
        overall_pass: presets_pass,
    };
    let filename = "verify_report.json";
    let path = args.out.join(filename);
    let body = serde_json::to_string_pretty(&ledger)
        .map_err(|e| Failure::config(format!("report serialization: {e}")))?;
    fs::write(&path, body)
        .map_err(|e| Failure::config(format!("write {}: {e}", path.display())))?;
    write_manifest(
        &path,
        &RunManifest {
            command: "verify".to_string(),
            tool_version: TOOL_VERSION,
            timestamp_unix: timestamp_unix(),
            params_hz: None,
            grid: None,
            swept: None,
            strict_paper_kappa: false,
            output: filename.to_string(),
            discrepancy_summary: Some(DiscrepancySummary {
                max_rel_err: max_err,
                pass: presets_pass,
            }),
        },
    )?;
    println!("wrote {}", path.display());
    println!(
        "overall max_rel_err = {max_err:.3e} [{}]",
        if presets_pass { "PASS" } else { "FAIL" }
    );
    if !presets_pass {
        return Err(Failure::tolerance(format!(
            "closed form deviates from the oracle beyond tol = {:.1e}",
            args.tol
        )));
    }
    Ok(())
}
