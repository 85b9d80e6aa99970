//! `p5cert`: generate graphs, build tree-partitions, prove, verify, fuzz and
//! measure local certificates from the command line.
//!
//! Exit codes: 0 accept/pass, 1 reject/fail, 2 malformed input file,
//! 3 precondition violation (disconnected graph, no induced P5 to fuzz).

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use p5cert::baselines::scheme_from_name;
use p5cert::framework::{run, CertificateAssignment, FrameworkError, ProverError, Scheme};
use p5cert::harness::{
    fuzz_soundness, generate, measure_scaling, AdversaryKind, AdversaryStrategy, Family, FuzzError, GeneratorSpec,
    MeasureError,
};
use p5cert::treepart::{build_tree_partition, validate_tree_partition, PartitionError};
use p5cert::Graph;

#[derive(Parser)]
#[command(name = "p5cert", version, about = "Local certification of P5-free graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SchemeArg {
    /// p5, universal-p5, stree-n or kk:<k>
    #[arg(long, default_value = "p5")]
    scheme: String,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random connected graph.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the canonical tree-partition and validate it.
    Partition { graph: PathBuf },
    /// Write certificates for every vertex.
    Prove {
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        scheme: SchemeArg,
    },
    /// Verify a certificate file.
    Verify {
        graph: PathBuf,
        certs: PathBuf,
        #[command(flatten)]
        scheme: SchemeArg,
    },
    /// Prove (or load --certs) and verify.
    Run {
        graph: PathBuf,
        #[arg(long)]
        certs: Option<PathBuf>,
        #[command(flatten)]
        scheme: SchemeArg,
    },
    /// Search for certificates that every vertex accepts on a graph with an induced P5.
    Fuzz {
        graph: PathBuf,
        #[arg(long)]
        strategy: AdversaryKind,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Where a counterexample certificate file is written.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Certificate sizes across graph sizes, as CSV.
    Measure {
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        family: Family,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A failed invocation: exit status and a diagnostic for stderr.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Display) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

const REJECT: u8 = 1;
const MALFORMED: u8 = 2;
const PRECONDITION: u8 = 3;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(MALFORMED, format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(REJECT, format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    read_text(path)?
        .parse::<Graph>()
        .map_err(|e| fail(MALFORMED, format!("{}: {e}", path.display())))
}

fn load_certs(path: &Path, n: usize) -> Result<CertificateAssignment, Failure> {
    CertificateAssignment::parse_file_text(&read_text(path)?, n)
        .map_err(|e| fail(MALFORMED, format!("{}: {e}", path.display())))
}

fn load_scheme(arg: &SchemeArg) -> Result<Box<dyn Scheme>, Failure> {
    scheme_from_name(&arg.scheme).map_err(|e| fail(MALFORMED, e))
}

fn framework_failure(e: FrameworkError) -> Failure {
    match e {
        FrameworkError::DisconnectedInput => fail(PRECONDITION, e),
        FrameworkError::ProverFailed(_) => fail(REJECT, e),
        FrameworkError::MissingCertificate(_) => fail(MALFORMED, e),
    }
}

fn prover_failure(e: ProverError) -> Failure {
    match e {
        ProverError::DisconnectedInput => fail(PRECONDITION, e),
        ProverError::NoDominatingStructure(_) => fail(REJECT, FrameworkError::ProverFailed(e)),
    }
}

fn report_run(g: &Graph, scheme: &dyn Scheme, certs: Option<&CertificateAssignment>) -> Result<u8, Failure> {
    let report = run(g, scheme, certs).map_err(framework_failure)?;
    print!("{}", report.render());
    println!("{}", report.stats_footer());
    Ok(if report.all_accept { 0 } else { REJECT })
}

fn execute(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Gen {
            family,
            n,
            p,
            seed,
            out,
        } => {
            let spec = GeneratorSpec { family, n, p, seed };
            let made = generate(&spec).map_err(|e| fail(REJECT, e))?;
            let text = format!(
                "{}c family={family} n={n} p={p} seed={seed} p5free={}\n",
                made.graph.to_text(),
                if made.p5free { "yes" } else { "no" }
            );
            write_text(&out, &text)?;
            Ok(0)
        }
        Command::Partition { graph } => {
            let g = load_graph(&graph)?;
            let tp = build_tree_partition(&g).map_err(|e| match e {
                PartitionError::DisconnectedInput => fail(PRECONDITION, e),
                PartitionError::NoDominatingStructure(_) => fail(REJECT, e),
            })?;
            print!("{}", tp.dump());
            match validate_tree_partition(&g, &tp) {
                Ok(()) => {
                    println!("validator: VALID");
                    Ok(0)
                }
                Err(v) => {
                    println!("validator: VIOLATION condition={} {v}", v.condition());
                    Ok(REJECT)
                }
            }
        }
        Command::Prove { graph, out, scheme } => {
            let g = load_graph(&graph)?;
            let scheme = load_scheme(&scheme)?;
            if !g.is_connected() {
                return Err(fail(PRECONDITION, FrameworkError::DisconnectedInput));
            }
            let certs = scheme.prove(&g).map_err(prover_failure)?;
            write_text(&out, &certs.to_file_text())?;
            Ok(0)
        }
        Command::Verify { graph, certs, scheme } => {
            let g = load_graph(&graph)?;
            let scheme = load_scheme(&scheme)?;
            let certs = load_certs(&certs, g.n())?;
            report_run(&g, scheme.as_ref(), Some(&certs))
        }
        Command::Run { graph, certs, scheme } => {
            let g = load_graph(&graph)?;
            let scheme = load_scheme(&scheme)?;
            let certs = certs.map(|c| load_certs(&c, g.n())).transpose()?;
            report_run(&g, scheme.as_ref(), certs.as_ref())
        }
        Command::Fuzz {
            graph,
            strategy,
            trials,
            seed,
            out_dir,
        } => {
            let g = load_graph(&graph)?;
            if trials == 0 {
                return Err(fail(MALFORMED, "--trials must be at least 1"));
            }
            let report = fuzz_soundness(
                &g,
                AdversaryStrategy {
                    kind: strategy,
                    trials,
                    seed,
                },
            )
            .map_err(|e| match e {
                FuzzError::PreconditionNotP5 => fail(PRECONDITION, e),
                FuzzError::Framework(e) => framework_failure(e),
            })?;
            let file = match &report.counterexample {
                Some(c) => {
                    let path = out_dir.join(c.file_name());
                    write_text(&path, &c.assignment.to_file_text())?;
                    Some(path.display().to_string())
                }
                None => None,
            };
            print!("{}", report.render(file.as_deref()));
            Ok(if report.passed() { 0 } else { REJECT })
        }
        Command::Measure {
            sizes,
            family,
            seed,
            out,
        } => {
            if sizes.contains(&0) {
                return Err(fail(MALFORMED, "sizes must be at least 1"));
            }
            let report = measure_scaling(&sizes, family, seed).map_err(|e| match e {
                MeasureError::NotP5Free { .. } => fail(PRECONDITION, e),
                _ => fail(REJECT, e),
            })?;
            write_text(&out, &report.to_csv())?;
            println!("C={:.6}", report.constant());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
