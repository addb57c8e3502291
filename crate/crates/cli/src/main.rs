use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use unarysat_core::cardinality::Strategy;
use unarysat_core::cep::{backbone, cep, BackboneValue, Equation};
use unarysat_core::compile::{compile_text, CompileOptions, Compiled, Outcome};
use unarysat_core::encode::{read_dimacs, write_dimacs};
use unarysat_core::instances::{Bench, Via};
use unarysat_core::sat::{load, ExternalSolver, SatBackend, SolveResult, SolverConfig};

const SAT: u8 = 10;
const UNSAT: u8 = 20;

#[derive(Parser)]
#[command(name = "unarysat", version, about = "Compile finite-domain constraint models to CNF")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Card {
    Adder,
    Merger,
    Hybrid,
}

#[derive(Args)]
struct CompileFlags {
    /// Cardinality encoding
    #[arg(long, value_enum, default_value = "hybrid")]
    card: Card,
    /// Constraint groups to run complete equi-propagation on
    #[arg(long, num_args = 1..)]
    cep: Vec<String>,
    /// Emit parity constraints as `x` lines
    #[arg(long)]
    xor: bool,
    /// Print statistics to stderr as key=value lines
    #[arg(long)]
    stats: bool,
}

impl CompileFlags {
    fn options(&self) -> CompileOptions {
        CompileOptions {
            strategy: match self.card {
                Card::Adder => Strategy::Adder,
                Card::Merger => Strategy::Merger,
                Card::Hybrid => Strategy::Hybrid,
            },
            cep_groups: self.cep.clone(),
            xor_lines: self.xor,
            trace: false,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a model to DIMACS CNF
    Compile {
        model: PathBuf,
        /// Output file (stdout when absent)
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the identifier-to-variable map here (default `<output>.map`)
        #[arg(long)]
        map: Option<PathBuf>,
        /// Comment lines naming the constraint behind each clause range
        #[arg(long)]
        annotate: bool,
        #[command(flatten)]
        flags: CompileFlags,
    },
    /// Compile, solve and print `identifier = value` lines
    Solve {
        model: PathBuf,
        /// External DIMACS solver command instead of the embedded one
        #[arg(long)]
        solver: Option<String>,
        #[command(flatten)]
        flags: CompileFlags,
    },
    /// Backbone and equivalences of a DIMACS file
    Cep {
        cnf: PathBuf,
        /// Variables to track (all when absent)
        #[arg(long, value_delimiter = ',')]
        vars: Vec<u32>,
        /// Print only the backbone
        #[arg(long)]
        backbone_only: bool,
    },
    /// Generate a benchmark instance, optionally solving and checking it
    Bench {
        #[arg(value_enum)]
        family: Family,
        /// girth5: nodes edges; fractions: n; partition: n
        #[arg(required = true)]
        params: Vec<usize>,
        #[arg(long)]
        solve: bool,
        /// How partition square sums are stated
        #[arg(long, value_enum, default_value = "pb")]
        via: ViaArg,
        /// Print one CSV row instead of key=value lines
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        flags: CompileFlags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Girth5,
    Fractions,
    Partition,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViaArg {
    Pb,
    Binary,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn compile_file(path: &PathBuf, flags: &CompileFlags) -> anyhow::Result<Compiled> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    compile_text(&text, &flags.options()).with_context(|| path.display().to_string())
}

fn print_stats(c: &Compiled, extra: &[(&str, String)]) {
    let mut err = io::stderr().lock();
    let _ = writeln!(err, "vars={}", c.stats.vars);
    let _ = writeln!(err, "clauses={}", c.stats.clauses);
    let _ = writeln!(err, "compile_ms={:.3}", c.stats.compile_time.as_secs_f64() * 1e3);
    for (k, v) in extra {
        let _ = writeln!(err, "{k}={v}");
    }
    for (tag, n) in &c.stats.by_tag {
        let _ = writeln!(err, "clauses.{tag}={n}");
    }
    for (g, s) in &c.stats.cep {
        let _ = writeln!(err, "cep.{g}.equations={}", s.equations);
        let _ = writeln!(err, "cep.{g}.sat_calls={}", s.audit.sat_calls);
    }
}

/// Solves with the embedded solver or an external command.
fn solve(c: &Compiled, external: Option<&str>) -> anyhow::Result<Outcome> {
    let Some(cmd) = external else {
        return Ok(c.solve(SolverConfig::default())?);
    };
    let mut parts = cmd.split_whitespace();
    let prog = parts.next().context("empty solver command")?;
    let args: Vec<&str> = parts.collect();
    let mut s = ExternalSolver::new(prog, &args);
    load(&mut s, &c.doc)?;
    Ok(match s.solve()? {
        SolveResult::Sat => Outcome::Sat(c.varmap.decode(&s.model().unwrap()[..c.doc.num_vars as usize])),
        SolveResult::Unsat => Outcome::Unsat,
    })
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Compile {
            model,
            output,
            map,
            annotate,
            flags,
        } => {
            let c = compile_file(&model, &flags)?;
            match &output {
                Some(p) => {
                    let mut f = io::BufWriter::new(fs::File::create(p).with_context(|| p.display().to_string())?);
                    write_dimacs(&c.doc, &mut f, annotate)?;
                    f.flush()?;
                }
                None => write_dimacs(&c.doc, &mut io::stdout().lock(), annotate)?,
            }
            let map = map.or_else(|| {
                output.as_ref().map(|o| {
                    let mut s = o.clone().into_os_string();
                    s.push(".map");
                    PathBuf::from(s)
                })
            });
            if let Some(p) = &map {
                fs::write(p, c.varmap.to_text()).with_context(|| p.display().to_string())?;
            }
            if flags.stats {
                print_stats(&c, &[]);
            }
            Ok(0)
        }
        Cmd::Solve { model, solver, flags } => {
            let c = compile_file(&model, &flags)?;
            let start = Instant::now();
            let out = solve(&c, solver.as_deref())?;
            let solve_ms = start.elapsed().as_secs_f64() * 1e3;
            let code = match &out {
                Outcome::Sat(vals) => {
                    let mut so = io::stdout().lock();
                    for (name, v) in vals {
                        writeln!(so, "{name} = {v}")?;
                    }
                    SAT
                }
                Outcome::Unsat => {
                    println!("UNSAT");
                    UNSAT
                }
            };
            if flags.stats {
                let result = if code == SAT { "SAT" } else { "UNSAT" };
                print_stats(&c, &[("solve_ms", format!("{solve_ms:.3}")), ("result", result.into())]);
            }
            Ok(code)
        }
        Cmd::Cep {
            cnf,
            vars,
            backbone_only,
        } => {
            let text = fs::read_to_string(&cnf).with_context(|| cnf.display().to_string())?;
            let doc = read_dimacs(&text)?;
            let tracked: Vec<u32> = if vars.is_empty() {
                (1..=doc.num_vars).collect()
            } else {
                if let Some(v) = vars.iter().find(|&&v| v == 0 || v > doc.num_vars) {
                    bail!("variable {v} is not in the formula");
                }
                vars
            };
            let mut so = io::stdout().lock();
            if backbone_only {
                let Some((bb, _)) = backbone(&doc, &tracked)? else {
                    writeln!(so, "UNSAT")?;
                    return Ok(UNSAT);
                };
                for (v, b) in bb {
                    match b {
                        BackboneValue::True => writeln!(so, "{v}")?,
                        BackboneValue::False => writeln!(so, "-{v}")?,
                        BackboneValue::Free => {}
                    }
                }
                return Ok(SAT);
            }
            let Some(out) = cep(&doc, &tracked)? else {
                writeln!(so, "UNSAT")?;
                return Ok(UNSAT);
            };
            for eq in &out.equations {
                match *eq {
                    Equation::Const(x, true) => writeln!(so, "{x}")?,
                    Equation::Const(x, false) => writeln!(so, "-{x}")?,
                    _ => {}
                }
            }
            for eq in &out.equations {
                match *eq {
                    Equation::Equal(x, y) => writeln!(so, "{x} = {y}")?,
                    Equation::Opposite(x, y) => writeln!(so, "{x} = -{y}")?,
                    _ => {}
                }
            }
            Ok(SAT)
        }
        Cmd::Bench {
            family,
            params,
            solve: do_solve,
            via,
            csv,
            flags,
        } => {
            let bench = match (family, params.as_slice()) {
                (Family::Girth5, &[nodes, edges]) if nodes >= 3 => Bench::Girth { nodes, edges },
                (Family::Fractions, &[n]) if n >= 1 => Bench::Fractions { n },
                (Family::Partition, &[n]) if n >= 2 => {
                    if n % 4 != 0 {
                        eprintln!("warning: partition instances with n not divisible by 4 are usually unsatisfiable");
                    }
                    let via = match via {
                        ViaArg::Pb => Via::Pb,
                        ViaArg::Binary => Via::Binary,
                    };
                    Bench::Partition { n, via }
                }
                _ => {
                    eprintln!("error: bad parameters; expected `girth5 NODES EDGES`, `fractions N` or `partition N`");
                    return Ok(2);
                }
            };
            let text = bench.model_text();
            if !do_solve {
                print!("{text}");
                return Ok(0);
            }
            let opts = flags.options();
            let c = compile_text(&text, &opts)?;
            let start = Instant::now();
            let out = c.solve(SolverConfig::default())?;
            let solve_ms = start.elapsed().as_secs_f64() * 1e3;
            let (result, verified, code) = match &out {
                Outcome::Sat(vals) => {
                    bench.verify(vals).map_err(|e| anyhow::anyhow!("solution rejected by checker: {e}"))?;
                    ("SAT", "yes", SAT)
                }
                Outcome::Unsat => ("UNSAT", "n/a", UNSAT),
            };
            let compile_ms = c.stats.compile_time.as_secs_f64() * 1e3;
            if csv {
                println!("family,params,vars,clauses,compile_ms,solve_ms,result,verified");
                let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
                println!(
                    "{},{},{},{},{compile_ms:.3},{solve_ms:.3},{result},{verified}",
                    family.to_possible_value().unwrap().get_name(),
                    ps.join(" "),
                    c.stats.vars,
                    c.stats.clauses
                );
            } else {
                println!("vars={}", c.stats.vars);
                println!("clauses={}", c.stats.clauses);
                println!("compile_ms={compile_ms:.3}");
                println!("solve_ms={solve_ms:.3}");
                println!("result={result}");
                println!("verified={verified}");
            }
            Ok(code)
        }
    }
}
