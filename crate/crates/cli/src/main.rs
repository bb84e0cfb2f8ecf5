//! Experiment driver: every library subsystem behind a subcommand with
//! JSON reports (and CSV for tables). Reports embed the full
//! configuration and the library version, so a report file identifies
//! the run that produced it; identical configs and seeds reproduce
//! byte-identical reports.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use catwalk::cat0::{CatPoint, CatSpace, FiniteMeasure, GraphCone, MetricTree};
use catwalk::energy::{
    affine_operator_report, cayley_tree_energy, converse_tree_check, equivariant_energy,
    fixed_point_descent, inequality_report, random_euclidean_action, random_spider_action,
    random_tree_basepoint, DescentOptions, EquivariantMap, GroupAction,
};
use catwalk::error::Error;
use catwalk::families::{generalized_triangle, lps_graph, validate_lps};
use catwalk::invariants::{
    building_bounds, building_distances, delta_mu0, gram_eigenvalues, iota_embedding, optimal_ab,
    pod_embedding, wang_estimate, BuildingSpec, GramSpec, TargetCertificate,
};
use catwalk::io::{builtin_graph, load_graph, to_edge_list};
use catwalk::random_group::{
    bernoulli_bound, concentration_experiment, default_c_abs, fixed_point_pipeline, p_profile,
    pushforward_walk, relators, sample_labelling, spectral_transplant_check, weighted_sum_check,
    LambdaCertificate,
};

const EXIT_ASSERTION: u8 = 1;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "catwalk",
    version,
    about = "Graph spectra, CAT(0) geometry, n-step energies and random-group checks"
)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog of subcommands with one-line descriptions.
    List,
    /// Validate a graph and report its degree census.
    GraphValidate {
        #[arg(long)]
        graph: String,
        /// Also emit the graph in edge-list form.
        #[arg(long)]
        edges: bool,
    },
    /// Girth, diameter, spectral gap and embedded-path count.
    GraphCert {
        #[arg(long)]
        graph: String,
        /// Count embedded paths shorter than this (0 = skip).
        #[arg(long, default_value_t = 0)]
        max_len: usize,
    },
    /// Subdivide every edge into `factor` edges.
    Subdivide {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        factor: usize,
    },
    /// Count embedded paths of length < max-len.
    CountPaths {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Construct and certify an LPS graph X^{p,q}.
    Lps {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Incidence graph of PG(2, r) with its structural census.
    GeneralizedTriangle {
        #[arg(long)]
        r: u64,
    },
    /// Match the Gram spectrum of (r, a, b) against its closed forms.
    GramEigenvalues {
        #[arg(long)]
        r: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
    },
    /// Distortion-minimizing Gram parameters for the incidence cone.
    OptimalAb {
        #[arg(long)]
        r: u64,
    },
    /// δ of the uniform vertex measure on the incidence cone.
    DeltaMu0 {
        #[arg(long)]
        r: u64,
    },
    /// Build the optimal radial embedding and verify its distortion.
    IotaDistortion {
        #[arg(long)]
        r: u64,
    },
    /// Simplex embedding of the (r+1)-pod and its distortion.
    PodDistortion {
        #[arg(long)]
        r: usize,
    },
    /// CSV table of building distortion/δ bounds for n = 1..n-max.
    BuildingBounds {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        r: u64,
    },
    /// Chamber-vertex distance table for dimension n.
    BuildingDistances {
        #[arg(long)]
        n: usize,
    },
    /// Closed-form energies of the isometric Z-action on the line.
    ZEnergy {
        #[arg(long, allow_hyphen_values = true)]
        u: i8,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// n-step energies of the free group on its Cayley tree.
    CayleyEnergy {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Random-action sweep of the n-step inequality suite.
    InequalitySuite {
        /// euclidean | tree
        #[arg(long, default_value = "euclidean")]
        target: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Affine averaging-operator identities on random actions.
    AffineCheck {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Fixed-point descent from an action description.
    Descent {
        /// `z:u,tau,alpha` or a JSON file with an equivariant map.
        #[arg(long)]
        action: String,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        /// Report the descent constant for this pipeline n (needs epsilon).
        #[arg(long)]
        n: Option<usize>,
        /// Report the descent constant for this pipeline epsilon (needs n).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Write the (iteration, energy, gradient) trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Converse bound E_{mu^n} <= 2k E_mu for tree actions with fixed points.
    ConverseTree {
        #[arg(long)]
        action: String,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Wang-invariant upper bound by multistart coordinate descent.
    Wang {
        #[arg(long)]
        graph: String,
        /// euclidean:D | pod:M | tree:NAME | cone:GRAPH | a JSON space file
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        distortion: Option<f64>,
        #[arg(long)]
        delta0: Option<f64>,
    },
    /// Barycenter of a measure (optionally double-checked by the oracle).
    Barycenter {
        /// JSON space file.
        #[arg(long)]
        space: PathBuf,
        /// JSON measure file.
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        oracle_h: Option<f64>,
    },
    /// Variance inequalities of a measure against a witness point.
    VarianceCheck {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        /// JSON point file; defaults to the barycenter itself.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Sample an S-labelling of a graph.
    SampleLabelling {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Relators of the random group presentation from a labelling.
    Relators {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Push-forward of the n-step graph walk under a labelling.
    Pushforward {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
    },
    /// Distance profile P(l) of the n-step walk and its tail.
    PProfile {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        n: usize,
        /// Also write (l, P(l)) rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte Carlo check of the weighted-sum decomposition.
    WeightedSum {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Bernoulli tail b^n(sqrt n) and the observed constant C.
    BernoulliBound {
        #[arg(long)]
        n: u64,
    },
    /// Transplanted spectral-gap inequality for random vertex maps.
    SpectralTransplant {
        #[arg(long)]
        graph: String,
        /// euclidean:D | pod:M | tree:NAME | cone:GRAPH | a JSON space file
        #[arg(long)]
        target: String,
        /// real | distortion:D | delta:D0
        #[arg(long)]
        cert: String,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Fixed-point pipeline constants from lambda0 and the constant C.
    Pipeline {
        #[arg(long)]
        lambda0: f64,
        /// Defaults to 8/(1 - 0.875) = 64.
        #[arg(long)]
        c_abs: Option<f64>,
        #[arg(long)]
        graph: Option<String>,
    },
    /// Frequencies of the two labelling concentration events.
    Concentration {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct Report {
    tool: &'static str,
    version: &'static str,
    command: String,
    config: Value,
    result: Value,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli.command) {
        Ok((command, config, result, pass)) => {
            let report = Report {
                tool: "catwalk",
                version: env!("CARGO_PKG_VERSION"),
                command,
                config,
                result,
                pass,
            };
            let text = serde_json::to_string_pretty(&report).expect("serializable report");
            if let Err(e) = emit(&text, out.as_deref()) {
                eprintln!("I/O error: {e}");
                return ExitCode::from(EXIT_IO);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ASSERTION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Discrepancy(_) => ExitCode::from(EXIT_ASSERTION),
                Error::Io(_) => ExitCode::from(EXIT_IO),
                // schema violations and bad parameters are usage errors
                _ => ExitCode::from(2),
            }
        }
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")
        }
    }
}

type RunOutput = (String, Value, Value, bool);

fn run(command: Command) -> Result<RunOutput, Error> {
    match command {
        Command::List => {
            let catalog = catalog();
            let result = json!(catalog
                .iter()
                .map(|(name, what)| json!({ "subcommand": name, "computes": what }))
                .collect::<Vec<_>>());
            Ok(("list".into(), json!({}), result, true))
        }
        Command::GraphValidate { graph, edges } => {
            let g = load_graph(&graph)?;
            let degrees: Vec<usize> = (0..g.vertex_count()).map(|u| g.degree(u)).collect();
            let mut result = json!({
                "vertex_count": g.vertex_count(),
                "edge_count": g.edge_count(),
                "degrees": degrees,
                "is_tree": g.is_tree(),
                "bipartite": g.bipartition().is_some(),
            });
            if edges {
                result["edge_list"] = json!(to_edge_list(&g));
            }
            Ok((
                "graph-validate".into(),
                json!({"graph": graph}),
                result,
                true,
            ))
        }
        Command::GraphCert { graph, max_len } => {
            let g = load_graph(&graph)?;
            let (girth, diameter) = g.girth_and_diameter();
            let lambda1 = g.spectral_gap_real()?;
            let paths = if max_len > 0 {
                Some(g.count_embedded_paths(max_len)?)
            } else {
                None
            };
            let result = json!({
                "girth": girth,
                "diameter": diameter,
                "lambda1_real": lambda1,
                "embedded_paths_below_max_len": paths,
            });
            Ok((
                "graph-cert".into(),
                json!({"graph": graph, "max_len": max_len}),
                result,
                true,
            ))
        }
        Command::Subdivide { graph, factor } => {
            let g = load_graph(&graph)?;
            let s = g.subdivide(factor)?;
            let result = json!({
                "vertex_count": s.vertex_count(),
                "edge_count": s.edge_count(),
                "girth": s.girth(),
                "graph": s,
            });
            Ok((
                "subdivide".into(),
                json!({"graph": graph, "factor": factor}),
                result,
                true,
            ))
        }
        Command::CountPaths { graph, max_len } => {
            let g = load_graph(&graph)?;
            let count = g.count_embedded_paths(max_len)?;
            Ok((
                "count-paths".into(),
                json!({"graph": graph, "max_len": max_len}),
                json!({ "count": count }),
                true,
            ))
        }
        Command::Lps { p, q } => {
            let (g, params) = lps_graph(p, q)?;
            let cert = validate_lps(&g, &params)?;
            let pass = cert.girth_pass && cert.diameter_pass && cert.ramanujan_pass;
            Ok(("lps".into(), json!({"p": p, "q": q}), json!(cert), pass))
        }
        Command::GeneralizedTriangle { r } => {
            let (g, plane) = generalized_triangle(r)?;
            let (girth, diameter) = g.girth_and_diameter();
            let result = json!({
                "vertex_count": g.vertex_count(),
                "points": plane.points.len(),
                "degree": r + 1,
                "girth": girth,
                "diameter": diameter,
                "edge_length": g.length(0),
            });
            let pass = girth == Some(6) && g.vertex_count() == 2 * plane.points.len();
            Ok(("generalized-triangle".into(), json!({"r": r}), result, pass))
        }
        Command::GramEigenvalues { r, a, b } => {
            let rep = gram_eigenvalues(&GramSpec { r, a, b })?;
            let pass = rep.max_deviation <= 1e-8;
            Ok((
                "gram-eigenvalues".into(),
                json!({"r": r, "a": a, "b": b}),
                json!(rep),
                pass,
            ))
        }
        Command::OptimalAb { r } => {
            let opt = optimal_ab(r)?;
            let pass = opt.distortion < 2.0;
            Ok(("optimal-ab".into(), json!({"r": r}), json!(opt), pass))
        }
        Command::DeltaMu0 { r } => {
            let d = delta_mu0(r)?;
            let pass = (d.gram_value - d.closed_form).abs() <= 1e-10;
            Ok(("delta-mu0".into(), json!({"r": r}), json!(d), pass))
        }
        Command::IotaDistortion { r } => {
            let opt = optimal_ab(r)?;
            let (_, rep) = iota_embedding(&GramSpec {
                r,
                a: opt.a,
                b: opt.b,
            })?;
            let pass = (rep.realized_distortion - opt.distortion).abs() <= 1e-8
                && rep.lipschitz_excess <= 1e-10;
            Ok(("iota-distortion".into(), json!({"r": r}), json!(rep), pass))
        }
        Command::PodDistortion { r } => {
            let (_, rep) = pod_embedding(r)?;
            let pass = rep.mean_norm <= 1e-12 && rep.lipschitz_excess <= 1e-10;
            Ok(("pod-distortion".into(), json!({"r": r}), json!(rep), pass))
        }
        Command::BuildingBounds { n_max, r } => {
            let mut csv = String::from("n,r,d_min,d_rad_bound,delta_bound\n");
            let mut rows = Vec::new();
            let mut cert_json = json!(null);
            for n in 1..=n_max {
                let (b, cert) = building_bounds(&BuildingSpec { n, r })?;
                csv.push_str(&format!(
                    "{n},{r},{},{},{}\n",
                    b.d_min, b.d_rad_bound, b.delta_bound
                ));
                if let Some(c) = cert {
                    cert_json = json!(c);
                }
                rows.push(b);
            }
            let result = json!({"rows": rows, "csv": csv, "simplex_certificate": cert_json});
            Ok((
                "building-bounds".into(),
                json!({"n_max": n_max, "r": r}),
                result,
                true,
            ))
        }
        Command::BuildingDistances { n } => {
            let d = building_distances(&BuildingSpec { n, r: 2 })?;
            let pass = d.table_min.is_none_or(|tm| (tm - d.d_min).abs() <= 1e-12);
            Ok(("building-distances".into(), json!({"n": n}), json!(d), pass))
        }
        Command::ZEnergy {
            u,
            tau,
            alpha,
            n_max,
        } => {
            let f = EquivariantMap::new(
                GroupAction::z_example(u, tau)?,
                CatPoint::Euclidean(vec![alpha]),
            )?;
            let mut rows = Vec::new();
            let mut pass = true;
            for n in 1..=n_max {
                let e = equivariant_energy(&f, n)?;
                let expected = if u == 1 {
                    n as f64 * tau * tau / 2.0
                } else if n % 2 == 0 {
                    0.0
                } else {
                    2.0 * (alpha - tau / 2.0) * (alpha - tau / 2.0)
                };
                pass &= (e - expected).abs() <= 1e-12;
                rows.push(json!({"n": n, "energy": e, "closed_form": expected}));
            }
            Ok((
                "z-energy".into(),
                json!({"u": u, "tau": tau, "alpha": alpha, "n_max": n_max}),
                json!(rows),
                pass,
            ))
        }
        Command::CayleyEnergy { m, n_max } => {
            let mut rows = Vec::new();
            let mut pass = true;
            for n in 1..=n_max {
                let e = cayley_tree_energy(m, n)?;
                let bound = m as f64 * (n * n) as f64 / (2 * m - 1) as f64;
                pass &= e <= bound + 1e-12;
                rows.push(json!({"n": n, "energy": e, "bound": bound}));
            }
            Ok((
                "cayley-energy".into(),
                json!({"m": m, "n_max": n_max}),
                json!(rows),
                pass,
            ))
        }
        Command::InequalitySuite {
            target,
            trials,
            n_max,
            seed,
        } => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut min_slack = f64::INFINITY;
            let mut pass = true;
            for _ in 0..trials {
                let f = match target.as_str() {
                    "euclidean" => {
                        let action = random_euclidean_action(3, 2, &mut rng)?;
                        let base = CatPoint::Euclidean(
                            (0..3)
                                .map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0))
                                .collect(),
                        );
                        EquivariantMap::new(action, base)?
                    }
                    "tree" => {
                        let action = random_spider_action(4, 2, 2, &mut rng)?;
                        let base = random_tree_basepoint(&action, &mut rng);
                        EquivariantMap::new(action, base)?
                    }
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "unknown target `{other}` (euclidean | tree)"
                        )))
                    }
                };
                let rep = inequality_report(&f, n_max)?;
                min_slack = min_slack.min(rep.min_slack());
                pass &= rep.min_slack() >= -1e-8;
            }
            Ok((
                "inequality-suite".into(),
                json!({"target": target, "trials": trials, "n_max": n_max, "seed": seed}),
                json!({"min_slack": min_slack}),
                pass,
            ))
        }
        Command::AffineCheck {
            dim,
            rank,
            trials,
            n_max,
            seed,
        } => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut worst_identity: f64 = 0.0;
            let mut pass = true;
            for _ in 0..trials {
                let action = random_euclidean_action(dim, rank, &mut rng)?;
                let base = CatPoint::Euclidean(
                    (0..dim)
                        .map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0))
                        .collect(),
                );
                let f = EquivariantMap::new(action, base)?;
                let rep = affine_operator_report(&f, n_max)?;
                for d in &rep.identity_deviation {
                    worst_identity = worst_identity.max(*d);
                }
                pass &= rep.identity_deviation.iter().all(|&d| d <= 1e-10);
                pass &= rep.slack_linear.iter().all(|&s| s >= -1e-8);
            }
            Ok((
                "affine-check".into(),
                json!({"dim": dim, "rank": rank, "trials": trials, "n_max": n_max, "seed": seed}),
                json!({"worst_identity_deviation": worst_identity}),
                pass,
            ))
        }
        Command::Descent {
            action,
            step,
            tol,
            max_iter,
            n,
            epsilon,
            trace,
        } => {
            let f = parse_action(&action)?;
            let n_eps = match (n, epsilon) {
                (Some(n), Some(eps)) => Some((n, eps)),
                (None, None) => None,
                _ => {
                    return Err(Error::InvalidParameter(
                        "--n and --epsilon go together".into(),
                    ))
                }
            };
            let opts = DescentOptions {
                step,
                tol,
                max_iter,
                n_eps,
            };
            let rep = fixed_point_descent(&f, &opts)?;
            if let Some(path) = trace {
                let mut csv = String::from("iteration,energy,gradient_norm\n");
                for (i, e, g) in &rep.trace {
                    csv.push_str(&format!("{i},{e},{g}\n"));
                }
                std::fs::write(path, csv)?;
            }
            let result = json!({
                "outcome": rep.outcome,
                "iterations": rep.iterations,
                "energy": rep.energy,
                "gradient_norm": rep.gradient_norm,
                "gradient_constant": rep.gradient_constant,
                "final_point": rep.final_point,
            });
            Ok((
                "descent".into(),
                json!({"action": action, "step": step, "tol": tol, "max_iter": max_iter,
                       "n": n, "epsilon": epsilon}),
                result,
                true,
            ))
        }
        Command::ConverseTree { action, n_max } => {
            let f = parse_action(&action)?;
            let rep = converse_tree_check(&f, n_max)?;
            let pass = rep.slacks.iter().all(|&s| s >= -1e-12);
            Ok((
                "converse-tree".into(),
                json!({"action": action, "n_max": n_max}),
                json!(rep),
                pass,
            ))
        }
        Command::Wang {
            graph,
            target,
            restarts,
            seed,
            distortion,
            delta0,
        } => {
            let g = load_graph(&graph)?;
            let space = parse_space(&target)?;
            let cert = TargetCertificate { distortion, delta0 };
            let est = wang_estimate(&g, &space, restarts, &cert, seed)?;
            let pass = est.lower_checks.iter().all(|c| c.pass);
            Ok((
                "wang".into(),
                json!({"graph": graph, "target": target, "restarts": restarts, "seed": seed,
                       "distortion": distortion, "delta0": delta0}),
                json!(est),
                pass,
            ))
        }
        Command::Barycenter {
            space,
            measure,
            oracle_h,
        } => {
            let space_val: CatSpace = serde_json::from_str(&std::fs::read_to_string(&space)?)?;
            let m: FiniteMeasure = serde_json::from_str(&std::fs::read_to_string(&measure)?)?;
            let b = catwalk::cat0::barycenter(&space_val, &m)?;
            let mut result = json!({ "barycenter": b });
            let mut pass = true;
            if let Some(h) = oracle_h {
                let oracle = catwalk::cat0::barycenter_oracle(&space_val, &m, h)?;
                let gap = space_val.distance(&b, &oracle)?;
                pass = gap <= 10.0 * h;
                result["oracle"] = json!(oracle);
                result["distance_to_oracle"] = json!(gap);
            }
            Ok((
                "barycenter".into(),
                json!({"space": space, "measure": measure, "oracle_h": oracle_h}),
                result,
                pass,
            ))
        }
        Command::VarianceCheck {
            space,
            measure,
            witness,
        } => {
            let space_val: CatSpace = serde_json::from_str(&std::fs::read_to_string(&space)?)?;
            let m: FiniteMeasure = serde_json::from_str(&std::fs::read_to_string(&measure)?)?;
            let w = match &witness {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                None => catwalk::cat0::barycenter(&space_val, &m)?,
            };
            let rep = catwalk::cat0::variance_report(&space_val, &m, &w)?;
            let pass = rep.slack1 >= -1e-8 && rep.slack2 >= -1e-8;
            Ok((
                "variance-check".into(),
                json!({"space": space, "measure": measure, "witness": witness}),
                json!(rep),
                pass,
            ))
        }
        Command::SampleLabelling { graph, k, seed } => {
            let g = load_graph(&graph)?;
            let l = sample_labelling(&g, k, seed)?;
            Ok((
                "sample-labelling".into(),
                json!({"graph": graph, "k": k, "seed": seed}),
                json!({"labels": l.labels(), "edges": g.edges()}),
                true,
            ))
        }
        Command::Relators {
            graph,
            k,
            seed,
            basepoint,
        } => {
            let g = load_graph(&graph)?;
            let l = sample_labelling(&g, k, seed)?;
            let rels = relators(&g, &l, basepoint)?;
            let expected = g.edge_count() - g.vertex_count() + 1;
            let pass = rels.len() == expected;
            Ok((
                "relators".into(),
                json!({"graph": graph, "k": k, "seed": seed, "basepoint": basepoint}),
                json!({"relators": rels, "cycle_rank": expected}),
                pass,
            ))
        }
        Command::Pushforward { graph, k, seed, n } => {
            let g = load_graph(&graph)?;
            let l = sample_labelling(&g, k, seed)?;
            let push = pushforward_walk(&g, &l, n)?;
            let pass = (push.total_mass() - 1.0).abs() <= 1e-12;
            Ok((
                "pushforward".into(),
                json!({"graph": graph, "k": k, "seed": seed, "n": n}),
                json!(push),
                pass,
            ))
        }
        Command::PProfile { graph, n, csv } => {
            let g = load_graph(&graph)?;
            let p = p_profile(&g, n)?;
            if let Some(path) = csv {
                let mut text = String::from("l,weight\n");
                for (l, w) in p.weights.iter().enumerate() {
                    text.push_str(&format!("{l},{w}\n"));
                }
                std::fs::write(path, text)?;
            }
            let total: f64 = p.weights.iter().sum();
            let pass = (total - 1.0).abs() <= 1e-12;
            Ok((
                "p-profile".into(),
                json!({"graph": graph, "n": n}),
                json!(p),
                pass,
            ))
        }
        Command::WeightedSum {
            graph,
            k,
            n,
            trials,
            seed,
        } => {
            let g = load_graph(&graph)?;
            let rep = weighted_sum_check(&g, k, n, trials, seed)?;
            let pass = rep.pass;
            Ok((
                "weighted-sum".into(),
                json!({"graph": graph, "k": k, "n": n, "trials": trials, "seed": seed}),
                json!(rep),
                pass,
            ))
        }
        Command::BernoulliBound { n } => {
            let b = bernoulli_bound(n)?;
            let pass = b.c_observed < 1.0;
            Ok(("bernoulli-bound".into(), json!({"n": n}), json!(b), pass))
        }
        Command::SpectralTransplant {
            graph,
            target,
            cert,
            n_max,
            trials,
            seed,
        } => {
            use rand::SeedableRng;
            let g = load_graph(&graph)?;
            let space = parse_space(&target)?;
            let certificate = parse_certificate(&cert)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut pass = true;
            let mut checked = 0usize;
            for _ in 0..trials {
                let phi: Vec<CatPoint> = (0..g.vertex_count())
                    .map(|_| space.sample_point(&mut rng))
                    .collect();
                match spectral_transplant_check(&g, &space, &phi, n_max, certificate) {
                    Ok(rep) => {
                        pass &= rep.pass;
                        checked += 1;
                    }
                    Err(Error::InvalidParameter(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok((
                "spectral-transplant".into(),
                json!({"graph": graph, "target": target, "cert": cert,
                       "n_max": n_max, "trials": trials, "seed": seed}),
                json!({"checked": checked}),
                pass,
            ))
        }
        Command::Pipeline {
            lambda0,
            c_abs,
            graph,
        } => {
            let g = match &graph {
                Some(spec) => Some(load_graph(spec)?),
                None => None,
            };
            let c = c_abs.unwrap_or_else(default_c_abs);
            let r = fixed_point_pipeline(lambda0, c, g.as_ref())?;
            let pass = r.epsilon > 0.0 && r.girth_ok != Some(false);
            Ok((
                "pipeline".into(),
                json!({"lambda0": lambda0, "c_abs": c, "graph": graph}),
                json!(r),
                pass,
            ))
        }
        Command::Concentration {
            graph,
            k,
            n,
            trials,
            seed,
        } => {
            let g = load_graph(&graph)?;
            let rep = concentration_experiment(&g, k, n, trials, seed)?;
            Ok((
                "concentration".into(),
                json!({"graph": graph, "k": k, "n": n, "trials": trials, "seed": seed}),
                json!(rep),
                true,
            ))
        }
    }
}

fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "graph-validate",
            "connectivity, degree census, bipartiteness",
        ),
        ("graph-cert", "girth, diameter, spectral gap, path counts"),
        (
            "subdivide",
            "edge subdivision with the girth multiplication law",
        ),
        ("count-paths", "embedded paths shorter than a bound"),
        (
            "lps",
            "LPS Ramanujan graph with girth/diameter/gap certificate",
        ),
        (
            "generalized-triangle",
            "incidence graph of a projective plane",
        ),
        ("gram-eigenvalues", "Gram spectrum against its closed forms"),
        ("optimal-ab", "distortion-minimizing Gram parameters"),
        (
            "delta-mu0",
            "delta of the uniform measure on the incidence cone",
        ),
        (
            "iota-distortion",
            "distortion of the optimal radial embedding",
        ),
        (
            "pod-distortion",
            "simplex embedding of a pod and its distortion",
        ),
        (
            "building-bounds",
            "distortion/delta bounds of building tangent cones",
        ),
        ("building-distances", "chamber-vertex distance table"),
        ("z-energy", "closed-form n-step energies of the line action"),
        ("cayley-energy", "free-group Cayley-tree energies and bound"),
        (
            "inequality-suite",
            "n-step energy inequalities on random actions",
        ),
        (
            "affine-check",
            "averaging-operator identity on affine actions",
        ),
        ("descent", "discrete fixed-point descent with trace"),
        ("converse-tree", "converse energy bound for tree actions"),
        ("wang", "Wang invariant upper bound with lower-bound checks"),
        ("barycenter", "barycenter of a finite measure, with oracle"),
        ("variance-check", "variance inequalities for a measure"),
        ("sample-labelling", "uniform S-labelling of a graph"),
        ("relators", "fundamental-cycle relators of a labelling"),
        (
            "pushforward",
            "push-forward of the n-step walk to the free group",
        ),
        ("p-profile", "distance profile and tail of the n-step walk"),
        ("weighted-sum", "Monte Carlo check of the weighted-sum law"),
        (
            "bernoulli-bound",
            "Bernoulli tail values and the constant C",
        ),
        (
            "spectral-transplant",
            "n-step energy against the spectral bound",
        ),
        (
            "pipeline",
            "fixed-point pipeline constants (n, epsilon, g0)",
        ),
        ("concentration", "frequencies of the concentration events"),
    ]
}

/// `z:u,tau,alpha` or a JSON file holding an equivariant map.
fn parse_action(spec: &str) -> Result<EquivariantMap, Error> {
    if let Some(rest) = spec.strip_prefix("z:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter("expected z:u,tau,alpha".into()));
        }
        let u: i8 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidParameter("u must be ±1".into()))?;
        let tau: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidParameter("bad tau".into()))?;
        let alpha: f64 = parts[2]
            .parse()
            .map_err(|_| Error::InvalidParameter("bad alpha".into()))?;
        return EquivariantMap::new(
            GroupAction::z_example(u, tau)?,
            CatPoint::Euclidean(vec![alpha]),
        );
    }
    let text = std::fs::read_to_string(spec)?;
    Ok(serde_json::from_str(&text)?)
}

/// `euclidean:D`, `pod:M`, `tree:NAME`, `cone:GRAPH`, or a JSON file.
fn parse_space(spec: &str) -> Result<CatSpace, Error> {
    if let Some(d) = spec.strip_prefix("euclidean:") {
        let dim: usize = d
            .parse()
            .map_err(|_| Error::InvalidParameter("bad dimension".into()))?;
        return Ok(CatSpace::euclidean(dim));
    }
    if let Some(m) = spec.strip_prefix("pod:") {
        let legs: usize = m
            .parse()
            .map_err(|_| Error::InvalidParameter("bad pod size".into()))?;
        return CatSpace::pod(legs);
    }
    if let Some(name) = spec.strip_prefix("tree:") {
        let g = builtin_graph(name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown tree graph `{name}`")))?;
        return Ok(CatSpace::Tree(MetricTree::new(g)?));
    }
    if let Some(name) = spec.strip_prefix("cone:") {
        let g = load_graph(name)?;
        return Ok(CatSpace::Cone(GraphCone::over_graph(&g)?));
    }
    let text = std::fs::read_to_string(spec)?;
    Ok(serde_json::from_str(&text)?)
}

/// `real`, `distortion:D`, or `delta:D0`.
fn parse_certificate(spec: &str) -> Result<LambdaCertificate, Error> {
    if spec == "real" {
        return Ok(LambdaCertificate::Real);
    }
    if let Some(d) = spec.strip_prefix("distortion:") {
        return Ok(LambdaCertificate::Distortion(d.parse().map_err(|_| {
            Error::InvalidParameter("bad distortion value".into())
        })?));
    }
    if let Some(d) = spec.strip_prefix("delta:") {
        return Ok(LambdaCertificate::Delta(
            d.parse()
                .map_err(|_| Error::InvalidParameter("bad delta value".into()))?,
        ));
    }
    Err(Error::InvalidParameter(format!(
        "unknown certificate `{spec}` (real | distortion:D | delta:D0)"
    )))
}
