use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flaglab::collapse::{almost_d_collapse, check_pi1_preconditions, detect_crosspolytopes, essentially_2sphere_free, replay};
use flaglab::density::{c_bounded_check, density_bound_audit, essential_density, is_strictly_balanced, parse_rational, rational_to_f64};
use flaglab::harness::{run_experiment, threshold_scan, torsion_search, write_csv, write_json, write_summary_json, ExperimentConfig, Model, Observables};
use flaglab::homology::{homology_report, morse_inequality_check, Coefficients};
use flaglab::models::{sample_gnp, sample_linial_meshulam, ProbabilitySpec, RngSpec};
use flaglab::{clique_complex, DimCap, Error, Graph, SimplicialComplex};
use serde_json::json;

#[derive(Parser)]
#[command(name = "flaglab", version, about = "Random flag complexes: collapses, homology, densities and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one complex and print it as facets (or as an edge list).
    Sample(SampleCmd),
    /// Run the almost-collapse pipeline on one complex.
    Collapse(CollapseCmd),
    /// Betti numbers, torsion and the Euler characteristic.
    Homology(HomologyCmd),
    /// Essential density, strict balance and the face-degree bound.
    Density(DensityCmd),
    /// Cross-polytope census of the 1-skeleton.
    Census(CensusCmd),
    /// Seeded Monte Carlo trials written as CSV or JSON.
    Experiment(ExperimentCmd),
    /// One experiment per value of c.
    Scan(ScanCmd),
    /// Torsion coefficients of H_k over many trials.
    Torsion(TorsionCmd),
    /// Free fundamental group preconditions and the 2-sphere search.
    CheckPi1(CheckPi1Cmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Flag,
    LinialMeshulam,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
#[group(multiple = false)]
struct ProbArgs {
    /// Edge (or face) probability.
    #[arg(long)]
    p: Option<f64>,
    /// p = c·n^(−1/d)
    #[arg(long)]
    c: Option<f64>,
    /// p = n^(−alpha)
    #[arg(long)]
    alpha: Option<f64>,
}

impl ProbArgs {
    fn spec(&self) -> Option<ProbabilitySpec> {
        self.p
            .map(ProbabilitySpec::P)
            .or(self.c.map(ProbabilitySpec::C))
            .or(self.alpha.map(ProbabilitySpec::Alpha))
    }
}

/// Where a single complex comes from: a file or a fresh sample.
#[derive(Args, Clone)]
struct Source {
    /// Complex in facet format, one facet per line.
    #[arg(long, conflicts_with = "graph")]
    input: Option<PathBuf>,
    /// Graph as `n m` followed by edge lines; its clique complex is used.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[command(flatten)]
    prob: ProbArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long, value_enum, default_value = "flag")]
    model: ModelArg,
    /// Highest face dimension built; unbounded when omitted.
    #[arg(long)]
    dim_cap: Option<usize>,
}

impl Source {
    fn cap(&self) -> DimCap {
        self.dim_cap.map_or(DimCap::Unbounded, DimCap::Bounded)
    }

    fn graph(&self) -> anyhow::Result<Graph> {
        if let Some(path) = &self.graph {
            return Ok(Graph::from_text(&read(path)?)?);
        }
        if self.input.is_some() {
            return Ok(self.complex()?.one_skeleton());
        }
        let (n, p) = self.sampling()?;
        Ok(sample_gnp(n, p, &RngSpec::new(self.seed, self.stream))?)
    }

    fn complex(&self) -> anyhow::Result<SimplicialComplex> {
        if let Some(path) = &self.input {
            return Ok(SimplicialComplex::from_text(&read(path)?)?);
        }
        if self.graph.is_some() {
            return Ok(clique_complex(&self.graph()?, self.cap()));
        }
        let (n, p) = self.sampling()?;
        let rng = RngSpec::new(self.seed, self.stream);
        Ok(match self.model {
            ModelArg::Flag => clique_complex(&sample_gnp(n, p, &rng)?, self.cap()),
            ModelArg::LinialMeshulam => {
                let x = sample_linial_meshulam(n, self.d, p, &rng)?;
                match self.dim_cap {
                    Some(k) => x.skeleton(k),
                    None => x,
                }
            }
        })
    }

    fn sampling(&self) -> anyhow::Result<(usize, f64)> {
        let n = self.n.ok_or_else(|| usage("give --input, --graph, or --n with one of --p/--c/--alpha"))?;
        let spec = self.prob.spec().ok_or_else(|| usage("one of --p, --c, --alpha is required"))?;
        Ok((n, spec.resolve(n, self.d)?))
    }
}

#[derive(Args)]
struct SampleCmd {
    #[command(flatten)]
    source: Source,
    /// Print the graph as an edge list instead of facets.
    #[arg(long)]
    edges: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CollapseCmd {
    #[command(flatten)]
    source: Source,
    /// Write the collapse steps, one `σ -> τ` per line.
    #[arg(long)]
    emit_trace: Option<PathBuf>,
    /// Seed for the randomized collapse orders.
    #[arg(long, default_value_t = 0)]
    collapse_seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HomologyCmd {
    #[command(flatten)]
    source: Source,
    /// Coefficient fields: `q` or a prime such as `2`.
    #[arg(long, value_delimiter = ',', default_value = "2,q")]
    fields: Vec<String>,
    /// Also compute integral torsion.
    #[arg(long)]
    torsion: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityCmd {
    #[command(flatten)]
    source: Source,
    /// Run the face-degree bound with this c (fraction or decimal).
    #[arg(long = "bound-c")]
    bound_c: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CensusCmd {
    #[command(flatten)]
    source: Source,
    /// List every copy, not only the induced ones.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[command(flatten)]
    prob: ProbArgs,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Highest face dimension built; defaults to d + 2.
    #[arg(long)]
    dim_cap: Option<usize>,
    #[arg(long, value_enum, default_value = "flag")]
    model: ModelArg,
    /// Betti fields: `q` or primes; empty to skip.
    #[arg(long, value_delimiter = ',', default_value = "2,q")]
    fields: Vec<String>,
    #[arg(long)]
    no_census: bool,
    #[arg(long)]
    no_collapse: bool,
    #[arg(long)]
    c_bounded: bool,
    #[arg(long)]
    pi1: bool,
    #[arg(long, value_delimiter = ',')]
    torsion_degrees: Vec<usize>,
    /// Record wall time per trial (makes output files differ between runs).
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn config(&self, default_probability: Option<ProbabilitySpec>) -> anyhow::Result<ExperimentConfig> {
        let probability = self
            .prob
            .spec()
            .or(default_probability)
            .ok_or_else(|| usage("one of --p, --c, --alpha is required"))?;
        let betti_fields = self
            .fields
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| parse_field(f))
            .collect::<anyhow::Result<_>>()?;
        Ok(ExperimentConfig {
            model: match self.model {
                ModelArg::Flag => Model::Flag,
                ModelArg::LinialMeshulam => Model::LinialMeshulam,
            },
            n: self.n,
            d: self.d,
            probability,
            trials: self.trials,
            master_seed: self.seed,
            dim_cap: self.dim_cap,
            observables: Observables {
                betti_fields,
                census: !self.no_census,
                collapse: !self.no_collapse,
                c_bounded: self.c_bounded,
                pi1: self.pi1,
                torsion_degrees: self.torsion_degrees.clone(),
                timing: self.timing,
            },
            workers: self.workers,
        })
    }
}

#[derive(Args)]
struct ExperimentCmd {
    #[command(flatten)]
    run: RunArgs,
    /// Trial file; with CSV a `.summary.json` is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct ScanCmd {
    #[command(flatten)]
    run: RunArgs,
    /// Strictly increasing c values.
    #[arg(long, value_delimiter = ',', required = true)]
    c_grid: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct TorsionCmd {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 1)]
    degree: usize,
    /// Add a disjoint projective plane to every trial complex.
    #[arg(long)]
    plant: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckPi1Cmd {
    #[command(flatten)]
    source: Source,
    /// Largest vertex set searched for dense subgraphs.
    #[arg(long, default_value_t = flaglab::collapse::DEFAULT_VERTEX_BOUND)]
    vertex_bound: usize,
    /// Largest 2-sphere searched, in vertices.
    #[arg(long, default_value_t = 7)]
    sphere_vmax: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Marks errors that should exit with the usage code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: &str) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.to_string()))
}

/// An invariant broke; exits with code 2.
fn invariant(msg: String) -> anyhow::Error {
    anyhow::Error::new(Error::Invariant(msg))
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_field(s: &str) -> anyhow::Result<Coefficients> {
    match s.trim().to_ascii_lowercase().as_str() {
        "q" | "rational" | "rationals" => Ok(Coefficients::Rational),
        t => {
            let p: u64 = t.trim_start_matches("gf").parse().map_err(|_| usage(&format!("unknown field `{s}`")))?;
            Ok(Coefficients::Gf(p))
        }
    }
}

/// Writes `text` to `out`, or to stdout.
fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, value: &impl serde::Serialize) -> anyhow::Result<()> {
    emit(out, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Sample(cmd) => {
            let text = if cmd.edges { cmd.source.graph()?.to_text() } else { cmd.source.complex()?.to_text() };
            emit(cmd.out.as_deref(), &text)
        }
        Command::Collapse(cmd) => {
            let x = cmd.source.complex()?;
            let out = almost_d_collapse(&x, cmd.source.d, cmd.collapse_seed);
            let replayed = replay(&x, &out.steps).map_err(|e| invariant(format!("collapse replay failed: {e}")))?;
            if replayed != out.residual {
                return Err(invariant("replayed residual differs from the pipeline's".into()));
            }
            if let Some(path) = &cmd.emit_trace {
                fs::write(path, out.trace()).with_context(|| format!("writing {}", path.display()))?;
            }
            let surviving: Vec<_> = out.surviving_crosspolytopes.iter().map(|h| &h.pairs).collect();
            emit_json(
                cmd.out.as_deref(),
                &json!({
                    "status": out.status,
                    "steps": out.steps.len(),
                    "surviving": surviving.len(),
                    "surviving_pairs": surviving,
                    "stuck_component": out.stuck_component,
                    "f": x.f_vector(),
                    "residual_f": out.residual.f_vector(),
                }),
            )
        }
        Command::Homology(cmd) => {
            let x = cmd.source.complex()?;
            let fields = cmd.fields.iter().map(|f| parse_field(f)).collect::<anyhow::Result<Vec<_>>>()?;
            let report = homology_report(&x, &fields, cmd.torsion)?;
            let morse = if x.dim_cap().allows(3) { Some(morse_inequality_check(&x)?) } else { None };
            if let Some(m) = morse.filter(|m| !m.holds()) {
                return Err(invariant(format!("Morse inequality fails: β₂ = {} < {}", m.beta2, m.rhs())));
            }
            emit_json(cmd.out.as_deref(), &json!({ "f": x.f_vector(), "homology": report, "morse": morse }))
        }
        Command::Density(cmd) => {
            let g = cmd.source.graph()?;
            let report = essential_density(&g)?;
            let d = cmd.source.d;
            let c_bounded = match &cmd.bound_c {
                Some(c) => {
                    let c = parse_rational(c)?;
                    let x = clique_complex(&g, DimCap::Bounded(d.max(1)));
                    Some(c_bounded_check(&x, d, &c))
                }
                None => None,
            };
            emit_json(
                cmd.out.as_deref(),
                &json!({
                    "rho": report.rho.to_string(),
                    "rho_numer": *report.rho.numer(),
                    "rho_denom": *report.rho.denom(),
                    "rho_f64": *report.rho.numer() as f64 / *report.rho.denom() as f64,
                    "witness": report.witness,
                    "witness_strictly_balanced": report.strictly_balanced,
                    "strictly_balanced": is_strictly_balanced(&g),
                    "below_threshold": density_bound_audit(&g, d),
                    "threshold": flaglab::density::density_threshold(d).to_string(),
                    "c_bounded": c_bounded,
                    "c_f64": cmd.bound_c.as_deref().map(parse_rational).transpose()?.map(|c| rational_to_f64(&c)),
                }),
            )
        }
        Command::Census(cmd) => {
            let g = cmd.source.graph()?;
            let d = cmd.source.d;
            let hits = detect_crosspolytopes(&g, d, false);
            let induced = hits.iter().filter(|h| h.induced).count();
            let listed: Vec<_> = hits.iter().filter(|h| cmd.all || h.induced).map(|h| &h.pairs).collect();
            emit_json(cmd.out.as_deref(), &json!({ "d": d, "embedded": hits.len(), "induced": induced, "copies": listed }))
        }
        Command::Experiment(cmd) => {
            let cfg = cmd.run.config(None)?;
            let result = run_experiment(&cfg)?;
            match (cmd.format, &cmd.out) {
                (Format::Csv, Some(path)) => {
                    write_csv(&result, fs::File::create(path).with_context(|| format!("creating {}", path.display()))?)?;
                    let summary = path.with_extension("summary.json");
                    write_summary_json(&result, fs::File::create(&summary)?)?;
                }
                (Format::Csv, None) => write_csv(&result, std::io::stdout().lock())?,
                (Format::Json, Some(path)) => write_json(&result, fs::File::create(path)?)?,
                (Format::Json, None) => write_json(&result, std::io::stdout().lock())?,
            }
            for f in &result.failures {
                eprintln!("trial {}: {}", f.stream, f.message);
            }
            if result.has_invariant_violation() {
                return Err(invariant("at least one trial broke an invariant".into()));
            }
            Ok(())
        }
        Command::Scan(cmd) => {
            let first = *cmd.c_grid.first().ok_or_else(|| usage("empty --c-grid"))?;
            let cfg = cmd.run.config(Some(ProbabilitySpec::C(first)))?;
            let scan = threshold_scan(&cfg, &cmd.c_grid)?;
            match cmd.format {
                Format::Json => emit_json(cmd.out.as_deref(), &scan),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["c", "p", "trials", "frac_almost_collapsible", "mean_betti_d", "mean_cp", "mean_betti_scaled", "cycle_fraction", "cycle_prediction", "annotation"])?;
                    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
                    for r in &scan.rows {
                        w.write_record([
                            r.c.to_string(),
                            r.p.to_string(),
                            r.trials.to_string(),
                            opt(r.frac_almost_collapsible),
                            opt(r.mean_betti_d),
                            opt(r.mean_cp),
                            opt(r.mean_betti_scaled),
                            opt(r.cycle_fraction),
                            opt(r.cycle_prediction),
                            r.annotation.clone().unwrap_or_default(),
                        ])?;
                    }
                    emit(cmd.out.as_deref(), &String::from_utf8(w.into_inner().map_err(|e| anyhow!(e.to_string()))?)?)
                }
            }
        }
        Command::Torsion(cmd) => {
            let cfg = cmd.run.config(None)?;
            let report = torsion_search(&cfg, cmd.degree, cmd.plant)?;
            if cmd.plant && report.trials.iter().any(|t| !t.torsion.iter().any(|v| *v == 2.into())) {
                return Err(invariant("a planted projective plane went undetected".into()));
            }
            emit_json(cmd.out.as_deref(), &report)
        }
        Command::CheckPi1(cmd) => {
            let x = cmd.source.complex()?;
            let predicates = check_pi1_preconditions(&x, cmd.vertex_bound);
            let spheres = essentially_2sphere_free(&x, cmd.sphere_vmax);
            emit_json(cmd.out.as_deref(), &json!({ "predicates": predicates, "spheres": spheres }))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_invariant)) {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
