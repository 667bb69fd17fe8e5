//! Command-line front end. The binary is a thin wrapper around [`run`].

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;

use crate::automaton::{fixtures, Automaton};
use crate::congruence::{agreement_level, distance_for_level, in_rist, in_stab, Agreement};
use crate::element::Element;
use crate::expr::parse_element;
use crate::tree::Vertex;
use crate::verify::{self, AxiomConfig, Check};

#[derive(Debug, Parser)]
#[command(name = "treeaut", version, about = "Automorphisms of regular rooted trees")]
pub struct Cli {
    /// Fixture name or path to an automaton file.
    #[arg(long, short, global = true)]
    pub automaton: Option<String>,

    /// Output format of verification reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Tsv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Image of a vertex.
    Apply { element: String, vertex: String },
    /// Portrait of the product `g*h`.
    Compose {
        g: String,
        h: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Local permutations down to a depth.
    Portrait {
        element: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Congruence distance `2^-k`, `k` the deepest level of agreement.
    Dist {
        g: String,
        h: String,
        #[arg(long, default_value_t = 16)]
        cap: usize,
    },
    /// Membership in the level stabilizer.
    Stab {
        element: String,
        #[arg(long)]
        level: usize,
    },
    /// Membership in the rigid stabilizer of a vertex.
    Rist {
        element: String,
        #[arg(long)]
        vertex: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Sections at a level and the induced permutation of that level.
    Phi {
        element: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Number of sample points or path points.
        #[arg(long)]
        len: Option<usize>,
        /// Random subsets per model above the exhaustive limit.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Extra `lhs=rhs` relation to check (axioms only, repeatable).
        #[arg(long = "relation")]
        relations: Vec<String>,
    },
    /// Shipped fixture automata.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    SmoothCurves,
    DTopology,
    Discreteness,
}

#[derive(Debug, Subcommand)]
pub enum FixtureAction {
    List,
    /// Print a fixture's source.
    Show {
        name: String,
    },
}

/// A failure that maps to a nonzero exit status.
#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

/// Loads a fixture by name or an automaton file by path.
pub fn load_automaton(name_or_path: &str) -> Result<Arc<Automaton>, CliError> {
    if let Some(aut) = fixtures::load(name_or_path) {
        return Ok(aut);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(CliError(format!(
            "no fixture or file named {name_or_path:?} (fixtures: {})",
            fixtures::NAMES.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError(format!("{name_or_path}: {e}")))?;
    Automaton::parse(&text).map(Automaton::into_shared).map_err(|e| CliError(format!("{name_or_path}: {e}")))
}

fn required_automaton(cli: &Cli) -> Result<Arc<Automaton>, CliError> {
    let name_or_path = cli.automaton.as_deref().ok_or_else(|| CliError("--automaton is required".into()))?;
    load_automaton(name_or_path)
}

fn element(aut: &Arc<Automaton>, text: &str) -> Result<Element, CliError> {
    Ok(parse_element(aut, text)?)
}

fn write_portrait(out: &mut dyn Write, g: &Element, depth: usize) -> std::io::Result<()> {
    let portrait = g.portrait(depth);
    for (v, perm) in g.alphabet().ball(depth).iter().zip(portrait.perms()) {
        writeln!(out, "{v}\t{perm}")?;
    }
    Ok(())
}

/// Executes a parsed command and returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Apply { element: e, vertex } => {
            let aut = required_automaton(cli)?;
            let g = element(&aut, e)?;
            let v: Vertex = vertex.parse()?;
            aut.alphabet().check(&v)?;
            writeln!(out, "{}", g.apply(&v))?;
        }
        Command::Compose { g, h, depth } => {
            let aut = required_automaton(cli)?;
            let gh = element(&aut, g)?.compose(&element(&aut, h)?)?;
            writeln!(out, "# {gh}")?;
            write_portrait(out, &gh, *depth)?;
        }
        Command::Portrait { element: e, depth } => {
            let aut = required_automaton(cli)?;
            write_portrait(out, &element(&aut, e)?, *depth)?;
        }
        Command::Dist { g, h, cap } => {
            let aut = required_automaton(cli)?;
            match agreement_level(&element(&aut, g)?, &element(&aut, h)?, *cap)? {
                Agreement::Equal => writeln!(out, "0\tequal")?,
                Agreement::Level(k) if k >= *cap => {
                    return Err(CliError(format!("elements agree through level {cap} but differ; raise --cap")))
                }
                Agreement::Level(k) => writeln!(out, "{}\tagree through level {k}", distance_for_level(k))?,
            }
        }
        Command::Stab { element: e, level } => {
            let aut = required_automaton(cli)?;
            writeln!(out, "{}", in_stab(&element(&aut, e)?, *level))?;
        }
        Command::Rist { element: e, vertex, depth } => {
            let aut = required_automaton(cli)?;
            let v: Vertex = vertex.parse()?;
            aut.alphabet().check(&v)?;
            let verdict = in_rist(&element(&aut, e)?, &v, *depth)?;
            match verdict.witness {
                Some(w) => writeln!(out, "{}\tmoves {w}", verdict.holds)?,
                None => writeln!(out, "{}", verdict.holds)?,
            }
        }
        Command::Phi { element: e, level } => {
            let aut = required_automaton(cli)?;
            let g = element(&aut, e)?;
            let vertices = aut.alphabet().level_vertices(*level);
            for v in &vertices {
                writeln!(out, "{v}\t->\t{}\t{}", g.apply(v), g.section(v).normalized())?;
            }
        }
        Command::Verify { suite, p, d, len, samples, seed, relations } => {
            let checks = run_suite(cli, *suite, (*p, *d, *len), *samples, *seed, relations)?;
            for c in &checks {
                match cli.format {
                    Format::Human => writeln!(out, "{c}")?,
                    Format::Tsv => writeln!(out, "{}", c.tsv())?,
                }
            }
            return Ok(if verify::all_passed(&checks) { 0 } else { 1 });
        }
        Command::Fixtures { action: FixtureAction::List } => {
            for name in fixtures::NAMES {
                let aut = fixtures::load(name).expect("shipped fixture");
                writeln!(out, "{name}\tp={}\t{}", aut.alphabet().size(), aut.names().iter().join(" "))?;
            }
        }
        Command::Fixtures { action: FixtureAction::Show { name } } => {
            let src = fixtures::source(name).ok_or_else(|| CliError(format!("unknown fixture {name:?}")))?;
            write!(out, "{src}")?;
        }
    }
    Ok(0)
}

fn run_suite(
    cli: &Cli,
    suite: Suite,
    (p, d, len): (Option<usize>, Option<usize>, Option<usize>),
    samples: usize,
    seed: u64,
    extra_relations: &[String],
) -> Result<Vec<Check>, CliError> {
    Ok(match suite {
        Suite::Axioms => {
            let targets: Vec<Arc<Automaton>> = match &cli.automaton {
                Some(spec) => vec![load_automaton(spec)?],
                None => fixtures::NAMES.iter().map(|n| fixtures::load(n).expect("shipped fixture")).collect(),
            };
            let cfg = AxiomConfig { seed, ..AxiomConfig::default() };
            let mut checks = Vec::new();
            for aut in &targets {
                let mut expectations =
                    verify::identify_fixture(aut).map(verify::fixture_expectations).unwrap_or_default();
                expectations.relations.extend(extra_relations.iter().cloned());
                checks.extend(verify::axioms_suite(aut, &expectations, &cfg));
            }
            checks
        }
        Suite::SmoothCurves => verify::smooth_curves_suite(p.unwrap_or(2), d.unwrap_or(2), len.unwrap_or(3)),
        Suite::DTopology => match (p, d) {
            (None, None) => verify::d_topology_suite(&verify::DEFAULT_D_TOPOLOGY, samples, seed),
            _ => verify::d_topology_suite(&[(p.unwrap_or(2), d.unwrap_or(2))], samples, seed),
        },
        Suite::Discreteness => match (p, d, len) {
            (None, None, None) => {
                verify::discreteness_suite(&verify::DEFAULT_FUNCTIONAL_PLOTS, &verify::DEFAULT_VERTEX_MAPS)
            }
            _ => {
                let instance = (len.unwrap_or(3), p.unwrap_or(2), d.unwrap_or(1));
                verify::discreteness_suite(&[instance], &[instance])
            }
        },
    })
}

/// Parses arguments, runs, prints errors to stderr and returns the exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = main_with_args(std::iter::once("treeaut").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn apply_odometer() {
        assert_eq!(run_args(&["apply", "t", "110", "--automaton", "odometer"]), (0, "001\n".into()));
        assert_eq!(run_args(&["--automaton", "grigorchuk", "apply", "b", "0"]).1, "0\n");
    }

    #[test]
    fn portrait_and_compose() {
        let (code, text) = run_args(&["portrait", "a", "--depth", "2", "-a", "rootswap"]);
        assert_eq!(code, 0);
        assert_eq!(text, "ε\t(0 1)\n0\tid\n1\tid\n");
        let (_, text) = run_args(&["compose", "a", "a", "--depth", "1", "-a", "rootswap"]);
        assert!(text.ends_with("ε\tid\n"));
    }

    #[test]
    fn queries() {
        assert_eq!(run_args(&["dist", "t^2", "1", "-a", "odometer"]).1, "0.5\tagree through level 1\n");
        assert_eq!(run_args(&["dist", "a*a", "1", "-a", "grigorchuk"]).1, "0\tequal\n");
        assert_eq!(run_args(&["dist", "t^256", "1", "--cap", "4", "-a", "odometer"]).0, 2);
        assert_eq!(run_args(&["stab", "b", "--level", "1", "-a", "grigorchuk"]).1, "true\n");
        assert_eq!(
            run_args(&["rist", "d", "--vertex", "0", "--depth", "3", "-a", "grigorchuk"]).1,
            "false\tmoves 100\n"
        );
        let (_, phi) = run_args(&["phi", "b", "-a", "grigorchuk"]);
        assert_eq!(phi, "0\t->\t0\ta\n1\t->\t1\tc\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["apply", "t", "110"]).0, 2);
        assert_eq!(run_args(&["apply", "z", "0", "-a", "odometer"]).0, 2);
        assert_eq!(run_args(&["apply", "t", "120", "-a", "odometer"]).0, 2);
        assert_eq!(run_args(&["apply", "t", "0", "-a", "/nonexistent.aut"]).0, 2);
        assert_eq!(run_args(&["bogus"]).0, 2);
    }

    #[test]
    fn verify_suites() {
        let (code, text) = run_args(&["verify", "d-topology", "--p", "2", "--d", "2"]);
        assert_eq!(code, 0);
        assert!(text.starts_with("PASS d-topology open-iff-d-open[p=2 d=2]: 13 points, 8192 subsets checked"));
        let (code, text) =
            run_args(&["verify", "discreteness", "--p", "2", "--d", "2", "--len", "3", "--format", "tsv"]);
        assert_eq!(code, 0);
        assert!(text.starts_with(
            "discreteness\tfunctional-plots[len=3 p=2 d=2]\tPASS\t512 candidates, 8 continuous, 8 constant"
        ));
        let (code, _) = run_args(&["verify", "axioms", "-a", "grigorchuk", "--relation", "a*b=b*a"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn fixtures_listing() {
        let (_, text) = run_args(&["fixtures", "list"]);
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("odometer\tp=2\te t"));
        assert_eq!(run_args(&["fixtures", "show", "odometer"]).1, fixtures::ODOMETER);
    }
}
