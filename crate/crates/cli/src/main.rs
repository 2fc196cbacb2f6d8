use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cran_cost::config::{Config, PAPER_DEFAULT};
use cran_cost::cost::{total_cost, Architecture, CostBreakdown};
use cran_cost::decoder::complexity_table;
use cran_cost::dimensioning::{
    invert_for_bs_intensity, spatial_avg_rate, spectral_efficiency_from_demand, target_for_offset,
};
use cran_cost::exec::configure_threads;
use cran_cost::quadrature::QuadratureSettings;
use cran_cost::sim::{compare_to_closed_form, estimate_mean_dc_cost, simulate_realization};
use cran_cost::sweep::{round_sig6, run_sweep, Format, SweepAxis, SweepSpec, Variant};
use cran_cost::Execution;

#[derive(Parser, Debug)]
#[command(name = "cran-cost", version, about = "Deployment cost of cloud and distributed radio access networks")]
struct Cli {
    /// Scenario file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Base values for anything the scenario file leaves out.
    #[arg(long, global = true, default_value = PAPER_DEFAULT)]
    preset: String,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Master seed; overrides the scenario file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, env = "CRAN_COST_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ArchArg {
    #[value(name = "DRAN")]
    Dran,
    #[value(name = "CloudRAN")]
    CloudRan,
}

impl From<ArchArg> for Architecture {
    fn from(a: ArchArg) -> Self {
        match a {
            ArchArg::Dran => Architecture::Dran,
            ArchArg::CloudRan => Architecture::CloudRan,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form cost breakdown of one scenario.
    Evaluate {
        #[arg(long, value_enum)]
        architecture: Option<ArchArg>,
        #[arg(long)]
        gamma_offset_db: Option<f64>,
    },
    /// Closed-form cost along one parameter axis.
    Sweep {
        /// lambda3, alpha, lambda0, p or sigma2; defaults to the file's sweep section.
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated, increasing; defaults to the axis's standard grid.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        /// Comma-separated, e.g. DRAN,CloudRAN@0.4.
        #[arg(long, value_delimiter = ',')]
        architectures: Option<Vec<String>>,
    },
    /// Monte Carlo estimate of the expected cost per data center.
    Simulate {
        #[arg(long)]
        reps: Option<usize>,
        /// Also write one realization's nodes as CSV.
        #[arg(long, value_name = "PATH")]
        dump: Option<PathBuf>,
        /// Replication written by --dump.
        #[arg(long, default_value_t = 0)]
        rep: u64,
    },
    /// Per-term z-scores of the simulation against the closed form.
    Compare {
        #[arg(long)]
        reps: Option<usize>,
        /// Exit with a failure status when any |z| exceeds the limit.
        #[arg(long)]
        strict: bool,
    },
    /// Decoder workload per base station against pool size.
    Complexity {
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.4, 0.9])]
        offsets: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 5, 10, 20, 50])]
        pools: Vec<usize>,
        #[arg(long)]
        n_mc: Option<usize>,
    },
    /// Base-station intensity meeting a spectral-efficiency target.
    Dimension {
        #[arg(long)]
        lambda0: Option<f64>,
        #[arg(long)]
        gamma_offset_db: Option<f64>,
        /// Target in bit/s/Hz; overrides the offset's tabulated target.
        #[arg(long, conflicts_with = "demand_bps")]
        target: Option<f64>,
        /// Per-user demand in bit/s, converted after control overhead.
        #[arg(long)]
        demand_bps: Option<f64>,
    },
    /// Print the fully resolved scenario file.
    ShowConfig,
}

/// Exit statuses by error category.
fn exit_code(category: &str) -> u8 {
    match category {
        "parameter" => 3,
        "config" => 4,
        "numerical" => 5,
        "domain" => 6,
        "estimation" => 7,
        "assignment" => 8,
        "io" => 9,
        "mismatch" => 10,
        _ => 1,
    }
}

#[derive(Debug)]
struct Mismatch(String);

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Mismatch {}

fn category(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<cran_cost::Error>() {
        e.category()
    } else if err.downcast_ref::<Mismatch>().is_some() {
        "mismatch"
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        "io"
    } else {
        "internal"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let cat = category(&err);
            eprintln!("error[{cat}]: {err:#}");
            ExitCode::from(exit_code(cat))
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    if cli.preset != PAPER_DEFAULT {
        return Err(cran_cost::Error::Config {
            key: "preset".into(),
            message: format!("unknown preset `{}` (known: {PAPER_DEFAULT})", cli.preset),
        }
        .into());
    }
    let mut config = match &cli.config {
        Some(path) => Config::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            bail!(cran_cost::Error::Config {
                key: "threads".into(),
                message: "must be at least 1".into(),
            });
        }
        if threads == 1 {
            config.execution = Execution::Sequential;
        } else {
            configure_threads(threads);
        }
    }
    Ok(config)
}

fn write_out(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(cran_cost::Error::from)?;
    Ok(())
}

fn json_text(value: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn num(x: f64) -> String {
    round_sig6(x).to_string()
}

fn breakdown_csv(b: &CostBreakdown, lambda3: f64) -> String {
    let mut s = String::from("term,per_data_center,per_km2\n");
    for (name, v) in CostBreakdown::TERM_NAMES.iter().zip(b.terms()) {
        let _ = writeln!(s, "{name},{},{}", num(v), num(v * lambda3));
    }
    let _ = writeln!(s, "c_phi3,{},{}", num(b.c_phi3), num(b.c_phi3 * lambda3));
    let _ = writeln!(s, "c3,{},{}", num(b.c3), num(b.c3 * lambda3));
    let _ = writeln!(s, "total,{},{}", num(b.total_per_km2 / lambda3), num(b.total_per_km2));
    s
}

fn run(cli: Cli) -> Result<()> {
    let quad = QuadratureSettings::default();
    let mut config = load_config(&cli)?;
    match &cli.command {
        Command::Evaluate {
            architecture,
            gamma_offset_db,
        } => {
            if let Some(a) = architecture {
                config.inputs.architecture = (*a).into();
            }
            if let Some(o) = gamma_offset_db {
                config.inputs.gamma_offset_db = *o;
            }
            let scenario = config.scenario()?;
            let b = total_cost(&scenario, &quad)?;
            let text = match cli.format {
                OutFormat::Csv => breakdown_csv(&b, scenario.lambda3),
                OutFormat::Json => json_text(&json!({
                    "scenario": scenario,
                    "lambda1": scenario.lambda1(),
                    "breakdown": b,
                    "groups_per_km2": b.groups(scenario.lambda3),
                }))?,
            };
            write_out(&cli, &text)
        }
        Command::Sweep {
            axis,
            values,
            architectures,
        } => {
            let base = config.sweep.clone();
            let axis = match axis {
                Some(name) => SweepAxis::parse(name).ok_or_else(|| cran_cost::Error::Config {
                    key: "sweep.axis".into(),
                    message: format!("unknown axis `{name}` (expected lambda3, alpha, lambda0, p or sigma2)"),
                })?,
                None => base.as_ref().map(|s| s.axis).unwrap_or(SweepAxis::Lambda3),
            };
            let same_axis = base.as_ref().filter(|s| s.axis == axis);
            let values = values
                .clone()
                .or_else(|| same_axis.map(|s| s.values.clone()))
                .unwrap_or_else(|| axis.default_values());
            let variants = match architectures {
                Some(list) => list
                    .iter()
                    .map(|s| {
                        Variant::try_from(s.clone()).map_err(|m| cran_cost::Error::Config {
                            key: "sweep.architectures".into(),
                            message: m,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => base.map(|s| s.architectures).unwrap_or_else(Variant::all),
            };
            let spec = SweepSpec::new(axis, values, variants)?;
            let result = run_sweep(&spec, &config, &quad)?;
            let format = match cli.format {
                OutFormat::Csv => Format::Csv,
                OutFormat::Json => Format::Json,
            };
            match &cli.out {
                Some(path) => result.emit(format, path)?,
                None => result.write(format, std::io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Simulate { reps, dump, rep } => {
            if let Some(r) = reps {
                config.simulation.reps = *r;
            }
            let scenario = config.scenario()?;
            let settings = config.sim_settings()?;
            if let Some(path) = dump {
                let realization = simulate_realization(&scenario, &settings, *rep)?;
                let mut buf = Vec::new();
                realization.write_csv(&mut buf)?;
                write_file(path, &buf)?;
            }
            let est = estimate_mean_dc_cost(&scenario, &settings)?;
            let text = match cli.format {
                OutFormat::Csv => {
                    let mut s = String::from("term,mean,std_error\n");
                    for (name, t) in &est.per_term {
                        let _ = writeln!(s, "{name},{},{}", num(t.mean), num(t.std_error));
                    }
                    let _ = writeln!(s, "c_phi3,{},{}", num(est.mean), num(est.std_error));
                    s
                }
                OutFormat::Json => json_text(&json!({ "seed": settings.seed, "estimate": est }))?,
            };
            write_out(&cli, &text)
        }
        Command::Compare { reps, strict } => {
            if let Some(r) = reps {
                config.simulation.reps = *r;
            }
            let scenario = config.scenario()?;
            let settings = config.sim_settings()?;
            let report = compare_to_closed_form(&scenario, &settings, &quad)?;
            let text = match cli.format {
                OutFormat::Csv => {
                    let mut s = String::from("term,closed_form,mean,std_error,z,pass\n");
                    for t in report.terms.iter().chain(std::iter::once(&report.overall)) {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            t.name,
                            num(t.closed_form),
                            num(t.mean),
                            num(t.std_error),
                            num(t.z),
                            t.pass
                        );
                    }
                    s
                }
                OutFormat::Json => json_text(&json!({ "seed": settings.seed, "report": report }))?,
            };
            write_out(&cli, &text)?;
            eprintln!("{}", report.note);
            if *strict && !report.pass {
                bail!(Mismatch("simulation and closed form disagree beyond 3 standard errors".into()));
            }
            Ok(())
        }
        Command::Complexity { offsets, pools, n_mc } => {
            if let Some(n) = n_mc {
                config.complexity.n_mc = *n;
            }
            let rows = complexity_table(&config.complexity, offsets, pools, config.seed, config.execution)?;
            let text = match cli.format {
                OutFormat::Csv => {
                    let mut s =
                        String::from("gamma_offset_db,n_cloud,outage_per_bs,dran_per_bs,servers_per_bs,dran_servers_per_bs\n");
                    for r in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            num(r.gamma_offset_db),
                            r.n_cloud,
                            num(r.outage_per_bs),
                            num(r.dran_per_bs),
                            num(r.servers_per_bs),
                            num(r.dran_servers_per_bs)
                        );
                    }
                    s
                }
                OutFormat::Json => json_text(&json!({ "seed": config.seed, "rows": rows }))?,
            };
            write_out(&cli, &text)
        }
        Command::Dimension {
            lambda0,
            gamma_offset_db,
            target,
            demand_bps,
        } => {
            let inputs = &config.inputs;
            let lambda0 = lambda0.unwrap_or(inputs.lambda0);
            let offset = gamma_offset_db.unwrap_or(inputs.gamma_offset_db);
            let (target, source) = match (target, demand_bps) {
                (Some(t), _) => (*t, "given"),
                (None, Some(d)) => (spectral_efficiency_from_demand(*d, &inputs.radio)?, "demand"),
                (None, None) => (target_for_offset(offset)?, "offset"),
            };
            let lambda1 = invert_for_bs_intensity(target, lambda0, &inputs.radio)?;
            let lambda1c = lambda1 / (1.0 + inputs.lambda1m);
            let achieved = spatial_avg_rate(lambda0, lambda1, &inputs.radio)?;
            let fields = [
                ("lambda0", lambda0),
                ("gamma_offset_db", offset),
                ("target", target),
                ("lambda1", lambda1),
                ("lambda1c", lambda1c),
                ("lambda1m", inputs.lambda1m),
                ("achieved_rate", achieved),
            ];
            let text = match cli.format {
                OutFormat::Csv => {
                    let mut s = String::from("quantity,value\n");
                    let _ = writeln!(s, "target_source,{source}");
                    for (k, v) in fields {
                        let _ = writeln!(s, "{k},{}", num(v));
                    }
                    s
                }
                OutFormat::Json => {
                    let mut m = serde_json::Map::new();
                    m.insert("target_source".into(), json!(source));
                    for (k, v) in fields {
                        m.insert(k.into(), json!(v));
                    }
                    json_text(&serde_json::Value::Object(m))?
                }
            };
            write_out(&cli, &text)
        }
        Command::ShowConfig => write_out(&cli, &config.to_toml()?),
    }
}
