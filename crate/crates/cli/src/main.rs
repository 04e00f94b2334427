//! `bslab`: exact laws, profiles and unimodularity checks for finite graphs,
//! and Monte Carlo estimates for graphings.
//!
//! Exit codes: 0 success or pass, 1 check failed, 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bslab::convergence::{cauchy_report, compare_to_limit, profile_sequence};
use bslab::graphing::{estimate_edge_profiles, estimate_profile, validate_graphing};
use bslab::io::{self, GraphFile};
use bslab::{
    check_unimodular_exact, check_unimodular_profile, edge_profiles, law_of_graph,
    profile_of_graph, tv_distance, ultrametric_distance, CodeKind, Config, Error, ProfileFamily,
    RadiusProfile,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bslab",
    version,
    about = "Local statistics of bounded-degree graphs and graphings"
)]
struct Cli {
    /// Degree bound for all inputs.
    #[arg(long, global = true, default_value_t = Config::DEFAULT_DELTA)]
    delta: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the law of a finite graph as `atom` lines.
    Law { graph: PathBuf },
    /// Print the radius-r profile of a finite graph.
    Profile {
        graph: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Print every radius from 0 up to --radius.
        #[arg(long)]
        family: bool,
    },
    /// Distances between rooted graphs or between profiles.
    Dist {
        #[command(subcommand)]
        metric: Metric,
    },
    /// Exact involution-invariance check of a measure file, or of every
    /// radius >= 2 of a profile file.
    Check { input: PathBuf },
    /// Validate a graphing file against the degree bound.
    GraphingValidate { graphing: PathBuf },
    /// Estimate the radius-r profile of a graphing law.
    GraphingEstimate {
        graphing: PathBuf,
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compare sampled forward and backward edge profiles of a graphing.
    GraphingCheck {
        graphing: PathBuf,
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 0.01)]
        tolerance: f64,
    },
    /// Convergence diagnostics for a sequence of graphs at one radius.
    Converge {
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
        #[arg(long)]
        radius: usize,
        /// Profile file holding a candidate limit at --radius.
        #[arg(long)]
        limit_file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Metric {
    /// Ultrametric distance between two rooted graphs, given as file and
    /// vertex id pairs.
    Rho {
        graph_a: PathBuf,
        vertex_a: u64,
        graph_b: PathBuf,
        vertex_b: u64,
    },
    /// Total variation distance between two profiles.
    Tv {
        profile_a: PathBuf,
        profile_b: PathBuf,
        /// Radius to compare when a file holds several.
        #[arg(long)]
        radius: Option<usize>,
    },
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// Failure modes, mapped to exit codes 1 and 2.
enum Failure {
    Check(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: bslab::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path, config: &Config) -> Result<GraphFile, Failure> {
    let file = with_path(path, io::parse_graph(&read(path)?))?;
    if file.graph.is_empty() {
        return Err(Failure::Input(format!(
            "{}: graph has no vertices",
            path.display()
        )));
    }
    with_path(path, config.check_graph(&file.graph))?;
    Ok(file)
}

fn load_graphing(path: &Path) -> Result<bslab::graphing::GraphingSpec, Failure> {
    with_path(path, io::parse_graphing(&read(path)?))
}

fn load_profile(path: &Path, radius: Option<usize>) -> Result<RadiusProfile, Failure> {
    let mut profiles = with_path(path, io::parse_profiles(&read(path)?))?;
    match radius {
        Some(r) => profiles
            .into_iter()
            .find(|p| p.radius() == r)
            .ok_or_else(|| Failure::Input(format!("{}: no profile at radius {r}", path.display()))),
        None if profiles.len() == 1 => Ok(profiles.remove(0)),
        None => Err(Failure::Input(format!(
            "{}: expected exactly one radius, found {}; pass --radius",
            path.display(),
            profiles.len()
        ))),
    }
}

/// A check passes or fails; either way its report goes to stdout.
fn verdict(passed: bool, out: String) -> Outcome {
    if passed {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn is_profile_file(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("r "))
}

fn check(path: &Path) -> Outcome {
    let text = read(path)?;
    if !is_profile_file(&text) {
        let measure = with_path(path, io::parse_measure(&text))?;
        let report = check_unimodular_exact(&measure);
        return verdict(report.passed, io::format_exact_report(&report));
    }
    let profiles = with_path(path, io::parse_profiles(&text))?;
    let rooted: Vec<&RadiusProfile> = profiles.iter().filter(|p| p.radius() >= 2).collect();
    if rooted.is_empty() {
        return Err(Failure::Input(format!(
            "{}: profile check needs a rooted profile at radius >= 2",
            path.display()
        )));
    }
    let mut out = String::new();
    let mut passed = true;
    for p in rooted {
        let (forward, backward) = with_path(path, edge_profiles(p))?;
        let report = check_unimodular_profile(&forward, &backward, bslab::Rational::default())?;
        passed &= report.passed;
        out += &format!("radius {}\n", forward.radius());
        out += &io::format_exact_report(&report);
    }
    verdict(passed, out)
}

fn run(cli: Cli) -> Outcome {
    let config = Config::new(cli.delta)?;
    match cli.command {
        Command::Law { graph } => {
            let file = load_graph(&graph, &config)?;
            Ok(io::format_measure(&law_of_graph(&file.graph, &config)?))
        }
        Command::Profile {
            graph,
            radius,
            family,
        } => {
            let file = load_graph(&graph, &config)?;
            if family {
                let family = ProfileFamily::of_graph(&file.graph, radius, &config)?;
                Ok(family.profiles().iter().map(io::format_profile).collect())
            } else {
                Ok(io::format_profile(&profile_of_graph(
                    &file.graph,
                    radius,
                    &config,
                )?))
            }
        }
        Command::Dist { metric } => match metric {
            Metric::Rho {
                graph_a,
                vertex_a,
                graph_b,
                vertex_b,
            } => {
                let a = load_graph(&graph_a, &config)?;
                let b = load_graph(&graph_b, &config)?;
                let vertex = |file: &GraphFile, path: &Path, id: u64| {
                    file.vertex(id).ok_or_else(|| {
                        Failure::Input(format!("{}: no vertex {id}", path.display()))
                    })
                };
                let o = vertex(&a, &graph_a, vertex_a)?;
                let p = vertex(&b, &graph_b, vertex_b)?;
                let rho = ultrametric_distance((&a.graph, o), (&b.graph, p), &config)?;
                Ok(format!("rho {}\n", io::format_rational(&rho)))
            }
            Metric::Tv {
                profile_a,
                profile_b,
                radius,
            } => {
                let p = load_profile(&profile_a, radius)?;
                let q = load_profile(&profile_b, radius)?;
                Ok(format!(
                    "tv {}\n",
                    io::format_rational(&tv_distance(&p, &q)?)
                ))
            }
        },
        Command::Check { input } => check(&input),
        Command::GraphingValidate { graphing } => {
            let spec = load_graphing(&graphing)?;
            match validate_graphing(&spec, &config) {
                Ok(()) => Ok(format!(
                    "verdict pass\ninvolutions {}\ndelta {}\n",
                    spec.involutions.len(),
                    config.delta()
                )),
                Err(e) => Err(Failure::Check(format!("verdict fail\nreason {e}\n"))),
            }
        }
        Command::GraphingEstimate {
            graphing,
            radius,
            sampling,
        } => {
            let spec = load_graphing(&graphing)?;
            let estimate = estimate_profile(
                &spec,
                radius,
                sampling.samples,
                sampling.seed,
                sampling.jobs,
                &config,
            )?;
            Ok(io::format_estimate(&estimate))
        }
        Command::GraphingCheck {
            graphing,
            radius,
            sampling,
            tolerance,
        } => {
            if !(tolerance >= 0.0 && tolerance.is_finite()) {
                return Err(Failure::Input(format!("invalid tolerance {tolerance}")));
            }
            let spec = load_graphing(&graphing)?;
            let edges = estimate_edge_profiles(
                &spec,
                radius,
                sampling.samples,
                sampling.seed,
                sampling.jobs,
                &config,
            )?;
            let report = check_unimodular_profile(&edges.forward, &edges.backward, tolerance)?;
            verdict(report.passed, io::format_estimate_report(&report, &edges))
        }
        Command::Converge {
            graphs,
            radius,
            limit_file,
        } => {
            let graphs = graphs
                .iter()
                .map(|p| load_graph(p, &config).map(|f| f.graph))
                .collect::<Result<Vec<_>, _>>()?;
            let profiles = profile_sequence(&graphs, radius, &config)?;
            let report = match limit_file {
                Some(path) => {
                    let limit = load_profile(&path, Some(radius))?;
                    if limit.kind() != CodeKind::Rooted {
                        return Err(Failure::Input(format!(
                            "{}: limit must be rooted",
                            path.display()
                        )));
                    }
                    compare_to_limit(&profiles, &limit)?
                }
                None => cauchy_report(&profiles)?,
            };
            Ok(io::format_sequence_report(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
