//! Command-line front end. Every subcommand except `serve` talks to the
//! HTTP service — an in-process one bound to an ephemeral port by
//! default, or a remote one via --server.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or request error.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use qldpc::sim::format_significant;
use qldpc_api::*;
use qldpc_client::{ApiClient, ClientError};

/// Directory for files written without an explicit --out path.
const OUT_DIR_ENV: &str = "QLDPC_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "qldpc",
    version,
    about = "Quantum LDPC code construction, validation, and decoding experiments",
    after_help = "Environment:\n  QLDPC_OUT_DIR  directory for files written without an explicit --out path"
)]
struct Cli {
    /// URL of a running service; by default one is started in-process.
    #[arg(long, global = true)]
    server: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write its descriptor and matrix files
    Construct(ConstructArgs),
    /// Re-check the structural guarantees recorded in a descriptor
    Validate(ValidateArgs),
    /// Search for the minimum logical-operator weight up to a bound
    Distance(DistanceArgs),
    /// Estimate the frame error rate at one channel strength
    Simulate(SimulateArgs),
    /// Estimate frame error rates across a list of channel strengths
    Sweep(SweepArgs),
    /// Run the HTTP service in the foreground
    Serve(ServeArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Preset name: q1..q5, e1..e5, pg1..pg5
    #[arg(long, conflicts_with_all = ["family", "p", "sigma", "s"])]
    preset: Option<String>,
    /// Code family: qc, eg, or pg
    #[arg(long)]
    family: Option<String>,
    /// Circulant size (an odd prime), qc family only
    #[arg(long)]
    p: Option<u64>,
    /// Generator whose even multiplicative order splits the base matrix, qc family only
    #[arg(long)]
    sigma: Option<u64>,
    /// Field extension degree (1..=5), eg and pg families only
    #[arg(long)]
    s: Option<usize>,
    /// Descriptor output path; the two alist files land next to it
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Descriptor file produced by construct
    descriptor: PathBuf,
}

#[derive(Args)]
struct DistanceArgs {
    /// Preset name or descriptor path
    #[arg(long)]
    code: String,
    /// Largest logical-operator weight to enumerate
    #[arg(long)]
    w_max: usize,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Preset name or descriptor path
    #[arg(long)]
    code: String,
    /// Decoder: camel, bp, ga, or bp2
    #[arg(long, default_value = "camel")]
    decoder: String,
    /// Frame errors to accumulate per point before stopping
    #[arg(long, default_value_t = 300)]
    min_frame_errors: u64,
    /// Hard cap on trials per point
    #[arg(long, default_value_t = 100_000_000)]
    max_trials: u64,
    /// Master seed; each trial derives an independent stream from it
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Belief-propagation iteration cap
    #[arg(long, default_value_t = 15)]
    iters: usize,
    /// Frame-success criterion: strict or degenerate
    #[arg(long, default_value = "degenerate")]
    success_mode: String,
    /// Worker threads for trial batches (default: all cores; never changes results)
    #[arg(long)]
    threads: Option<usize>,
    /// Write the results as CSV here (stdout stays human-readable)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Depolarizing channel strength
    #[arg(long)]
    eps: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated channel strengths, e.g. 0.05,0.04,0.03
    #[arg(long)]
    eps_list: String,
}

#[derive(Args)]
struct ServeArgs {
    /// Listen address
    #[arg(long, default_value = "127.0.0.1:8351")]
    addr: SocketAddr,
}

/// A failure that ends the process with `code`.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn check_failure(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

impl From<ClientError> for Failure {
    fn from(err: ClientError) -> Failure {
        usage(err.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .expect("tokio runtime");
    match runtime.block_on(dispatch(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

async fn dispatch(cli: Cli) -> CliResult {
    if let Command::Serve(args) = &cli.command {
        return serve(args).await;
    }
    let (client, server_desc) = connect(&cli.server).await?;
    match cli.command {
        Command::Construct(args) => construct(&client, &server_desc, args).await,
        Command::Validate(args) => validate(&client, &server_desc, args).await,
        Command::Distance(args) => distance(&client, &server_desc, args).await,
        Command::Simulate(args) => {
            run_points(&client, &server_desc, args.run, vec![args.eps]).await
        }
        Command::Sweep(args) => {
            let epsilons = parse_eps_list(&args.eps_list)?;
            run_points(&client, &server_desc, args.run, epsilons).await
        }
        Command::Serve(_) => unreachable!("handled above"),
    }
}

async fn connect(server: &Option<String>) -> Result<(ApiClient, String), Failure> {
    match server {
        Some(url) => Ok((ApiClient::new(url.clone()), url.clone())),
        None => {
            let (addr, _server_task) = qldpc_service::spawn_server("127.0.0.1:0".parse().unwrap())
                .await
                .map_err(|e| usage(format!("cannot start in-process service: {e}")))?;
            Ok((ApiClient::new(format!("http://{addr}")), "in-process".to_string()))
        }
    }
}

async fn serve(args: &ServeArgs) -> CliResult {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| "info".into()),
        )
        .init();
    println!("serving on http://{}", args.addr);
    tokio::select! {
        result = qldpc_service::run(args.addr) => {
            result.map_err(|e| usage(format!("server failed: {e}")))
        }
        _ = tokio::signal::ctrl_c() => {
            eprintln!("shutting down");
            Ok(())
        }
    }
}

fn parse_eps_list(list: &str) -> Result<Vec<f64>, Failure> {
    let mut epsilons = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let eps: f64 = part
            .parse()
            .map_err(|_| usage(format!("cannot parse channel strength '{part}'")))?;
        epsilons.push(eps);
    }
    Ok(epsilons)
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

async fn construct(client: &ApiClient, server_desc: &str, args: ConstructArgs) -> CliResult {
    let (dir, basename) = match &args.out {
        Some(path) => {
            let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| usage(format!("--out {} has no usable file name", path.display())))?;
            (dir, Some(stem.to_string()))
        }
        None => (default_out_dir(), None),
    };
    let request = ConstructRequest {
        preset: args.preset,
        family: args.family,
        p: args.p,
        sigma: args.sigma,
        s: args.s,
        basename,
    };
    print_config(
        "construct",
        server_desc,
        &[
            ("preset", request.preset.clone().unwrap_or_else(|| "-".into())),
            ("family", request.family.clone().unwrap_or_else(|| "-".into())),
            ("p", opt_str(request.p)),
            ("sigma", opt_str(request.sigma)),
            ("s", opt_str(request.s)),
            ("out-dir", dir.display().to_string()),
        ],
    );
    let built = client.construct(&request).await?;
    std::fs::create_dir_all(&dir)
        .map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    let descriptor_path = dir.join(format!("{}.toml", built.basename));
    let hx_path = dir.join(format!("{}.hx.alist", built.basename));
    let hz_path = dir.join(format!("{}.hz.alist", built.basename));
    for (path, body) in [
        (&descriptor_path, &built.descriptor_toml),
        (&hx_path, &built.hx_alist),
        (&hz_path, &built.hz_alist),
    ] {
        std::fs::write(path, body)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    println!("[[{},{}]]", built.n, built.k);
    if let Some(d) = built.claimed_d {
        println!("claimed distance: {d}");
    }
    println!("wrote {}", descriptor_path.display());
    Ok(())
}

/// Read a descriptor and the two matrix files it references.
fn read_descriptor_set(descriptor_path: &Path) -> Result<(String, String, String), Failure> {
    let read = |path: &Path| {
        std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
    };
    let descriptor_toml = read(descriptor_path)?;
    let (hx_file, hz_file) = qldpc::descriptor::referenced_files(&descriptor_toml)
        .map_err(|e| usage(e.to_string()))?;
    let base = descriptor_path.parent().unwrap_or_else(|| Path::new("."));
    let hx_alist = read(&base.join(hx_file))?;
    let hz_alist = read(&base.join(hz_file))?;
    Ok((descriptor_toml, hx_alist, hz_alist))
}

async fn validate(client: &ApiClient, server_desc: &str, args: ValidateArgs) -> CliResult {
    print_config(
        "validate",
        server_desc,
        &[("descriptor", args.descriptor.display().to_string())],
    );
    let (descriptor_toml, hx_alist, hz_alist) = read_descriptor_set(&args.descriptor)?;
    let verdict = client
        .validate(&ValidateRequest {
            source: CodeSource::Descriptor { descriptor_toml, hx_alist, hz_alist },
        })
        .await?;
    if let (Some(family), Some(n), Some(k)) = (&verdict.family, verdict.n, verdict.k) {
        println!("code: family {family}, n = {n}, k = {k}");
    }
    for check in &verdict.checks {
        let state = if check.passed { "pass" } else { "FAIL" };
        if check.detail.is_empty() {
            println!("{:<24} {state}", check.name);
        } else {
            println!("{:<24} {state}  {}", check.name, check.detail);
        }
    }
    if verdict.residual_pairs.is_empty() {
        println!("residual 4-cycle pairs: none");
    } else {
        println!("residual 4-cycle pairs ({}):", verdict.residual_pairs.len());
        for pair in verdict.residual_pairs.iter().take(20) {
            let cols: Vec<String> =
                pair.columns.iter().map(|c| c.to_string()).collect();
            println!("  rows ({}, {}) share columns {}", pair.row_a, pair.row_b, cols.join(" "));
        }
        if verdict.residual_pairs.len() > 20 {
            println!("  ... and {} more", verdict.residual_pairs.len() - 20);
        }
    }
    if verdict.ok {
        println!("result: pass");
        Ok(())
    } else {
        println!("result: fail");
        Err(check_failure(String::new()))
    }
}

/// Presets are bare names; anything naming an existing file is read as a
/// descriptor.
fn resolve_code_source(code: &str) -> Result<(CodeSource, String), Failure> {
    let path = Path::new(code);
    if path.exists() {
        let (descriptor_toml, hx_alist, hz_alist) = read_descriptor_set(path)?;
        let label = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("custom")
            .to_string();
        Ok((CodeSource::Descriptor { descriptor_toml, hx_alist, hz_alist }, label))
    } else {
        Ok((CodeSource::Preset { name: code.to_string() }, code.to_string()))
    }
}

async fn distance(client: &ApiClient, server_desc: &str, args: DistanceArgs) -> CliResult {
    print_config(
        "distance",
        server_desc,
        &[("code", args.code.clone()), ("w-max", args.w_max.to_string())],
    );
    let (source, _) = resolve_code_source(&args.code)?;
    let result = client.distance(&DistanceRequest { source, w_max: args.w_max }).await?;
    match result.found {
        Some(d) => {
            let note = match result.claimed_d {
                Some(claimed) => format!(" (claimed {claimed})"),
                None => String::new(),
            };
            println!("minimum logical-operator weight: {d}{note}");
        }
        None => println!("no logical operator of weight <= {}; distance > {}", result.w_max, result.w_max),
    }
    Ok(())
}

async fn run_points(
    client: &ApiClient,
    server_desc: &str,
    args: RunArgs,
    epsilons: Vec<f64>,
) -> CliResult {
    if let Some(threads) = args.threads {
        if server_desc == "in-process" {
            qldpc::sim::configure_threads(threads).map_err(|e| usage(e.to_string()))?;
        } else {
            eprintln!("note: --threads has no effect on a remote server");
        }
    }
    let (source, label) = resolve_code_source(&args.code)?;
    let eps_display: Vec<String> = epsilons.iter().map(|e| format_significant(*e)).collect();
    print_config(
        "simulate",
        server_desc,
        &[
            ("code", label.clone()),
            ("decoder", args.decoder.clone()),
            ("success-mode", args.success_mode.clone()),
            ("eps", eps_display.join(", ")),
            ("min-frame-errors", args.min_frame_errors.to_string()),
            ("max-trials", args.max_trials.to_string()),
            ("iters", args.iters.to_string()),
            ("seed", args.seed.to_string()),
            (
                "threads",
                args.threads.map(|t| t.to_string()).unwrap_or_else(|| "all cores".into()),
            ),
        ],
    );
    let created = client
        .submit_simulation(&SimulationRequest {
            source,
            label: Some(label),
            epsilons,
            decoder: args.decoder,
            success_mode: args.success_mode,
            min_frame_errors: args.min_frame_errors,
            max_trials: args.max_trials,
            iterations: args.iters,
            master_seed: args.seed,
        })
        .await?;

    let status = watch_job(client, created.job_id).await?;
    match status.state {
        JobState::Done => {}
        JobState::Cancelled => {
            return Err(Failure { code: 130, message: "cancelled".into() });
        }
        state => {
            let detail = status.error.unwrap_or_else(|| format!("job ended as {state:?}"));
            return Err(usage(detail));
        }
    }

    println!(
        "{:<10} {:>12} {:>14} {:>12} {:>12} {:>12}",
        "eps", "trials", "frame_errors", "fer", "ci95_low", "ci95_high"
    );
    for point in &status.points {
        let note = if point.zero_frame_errors { "  (no frame errors observed)" } else { "" };
        println!(
            "{:<10} {:>12} {:>14} {:>12} {:>12} {:>12}{note}",
            format_significant(point.epsilon),
            point.trials,
            point.frame_errors,
            format_significant(point.fer),
            format_significant(point.ci95_low),
            format_significant(point.ci95_high),
        );
    }

    if let Some(out) = &args.out {
        let csv = client.job_csv(created.job_id).await?;
        if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)
                .map_err(|e| usage(format!("cannot create {}: {e}", parent.display())))?;
        }
        std::fs::write(out, csv)
            .map_err(|e| usage(format!("cannot write {}: {e}", out.display())))?;
        println!("csv written to {}", out.display());
    }
    Ok(())
}

/// Poll until the job settles, echoing progress to stderr. Ctrl-C sends a
/// cancellation and keeps polling until the job acknowledges it.
async fn watch_job(client: &ApiClient, job_id: u64) -> Result<JobStatus, Failure> {
    let mut last_line = String::new();
    let mut last_print = Instant::now() - Duration::from_secs(10);
    let mut cancel_requested = false;
    loop {
        let status = client.job_status(job_id).await?;
        if status.state.is_terminal() {
            return Ok(status);
        }
        let progress = &status.progress;
        if progress.trials > 0 && last_print.elapsed() >= Duration::from_secs(2) {
            let line = format!(
                "point {}/{}: {} trials, {} frame errors",
                progress.points_done + 1,
                progress.total_points,
                progress.trials,
                progress.frame_errors
            );
            if line != last_line {
                eprintln!("{line}");
                last_line = line;
                last_print = Instant::now();
            }
        }
        tokio::select! {
            _ = tokio::time::sleep(Duration::from_millis(150)) => {}
            _ = tokio::signal::ctrl_c(), if !cancel_requested => {
                eprintln!("cancelling job {job_id}");
                client.cancel_job(job_id).await?;
                cancel_requested = true;
            }
        }
    }
}

fn opt_str<T: std::fmt::Display>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

/// Every run announces its resolved configuration before doing work.
fn print_config(command: &str, server_desc: &str, fields: &[(&str, String)]) {
    println!("{command}:");
    for (key, value) in fields {
        println!("  {key} = {value}");
    }
    println!("  server = {server_desc}");
}
