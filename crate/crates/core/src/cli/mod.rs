//! The `invexp` command line: argument parsing, configuration and exit codes.

mod commands;
pub mod config;
pub mod files;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
pub use config::{OutputFormat, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Environment variable naming a directory that receives a copy of each report.
pub const OUTPUT_DIR_VAR: &str = "INVEXP_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "invexp",
    version,
    about = "Free groups, inverse monoids and group expansions"
)]
pub struct Cli {
    /// TOML file with budgets and output format.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub max_elements: Option<usize>,
    #[arg(long, global = true)]
    pub max_nodes: Option<usize>,
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fold a labelled graph (word labels are subdivided first).
    Fold {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Stallings graph of a subgroup.
    Stallings {
        #[arg(long, alias = "subgroup")]
        subgroups: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Stallings graph of a coset `Hg`.
    Coset {
        #[arg(long, alias = "subgroup")]
        subgroups: PathBuf,
        #[arg(long)]
        name: Option<String>,
        /// Overrides the representative given in the file.
        #[arg(long)]
        rep: Option<String>,
    },
    /// Membership of a word in a subgroup or coset.
    Member {
        #[arg(long, alias = "subgroups")]
        subgroup: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        word: String,
    },
    /// Free basis of a subgroup from a spanning tree.
    Basis {
        #[arg(long, alias = "subgroup")]
        subgroups: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Transition inverse monoid of an `A`-graph.
    Monoid {
        #[arg(long)]
        graph: PathBuf,
        /// List every element with its least word.
        #[arg(long)]
        list: bool,
    },
    /// Schützenberger graph of `[w]` in a transition monoid.
    Schutz {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// The coset `φ([w])` of the canonical relational morphism.
    Phi {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Permutation completion of an `A`-graph and its transition group.
    Complete {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Whether a word lies in a product of cosets.
    Product {
        #[arg(long, alias = "subgroup")]
        subgroups: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        names: Vec<String>,
        #[arg(long)]
        word: String,
    },
    /// Finite quotient separating a word from a product of cosets.
    RzSeparate {
        #[arg(long, alias = "subgroup")]
        subgroups: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        names: Vec<String>,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 5)]
        verify_len: usize,
        /// Largest order for exact verification; defaults to `max_elements`.
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Cayley graph of a group recipe.
    Cayley {
        #[arg(long)]
        group: PathBuf,
    },
    /// One `Ab_p` expansion on top of a group recipe.
    Abexp {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        materialize: bool,
    },
    /// Enumerate a group recipe into a permutation table.
    Materialize {
        #[arg(long)]
        group: PathBuf,
    },
    /// Margolis–Meakin expansion of an enumerable group.
    Mm {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        enumerate: bool,
    },
    /// Iterated expansion large enough for suitability.
    Suitable {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Per-iteration exponents, overriding `p`, `n` and `k`.
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<u32>>,
        #[arg(long)]
        materialize: bool,
    },
    /// Avoidance group for an `n`-cyclic configuration.
    Avoid {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        configuration: PathBuf,
    },
    /// Amalgamation chain of letter-subset coset graphs.
    Chain {
        #[arg(long)]
        group: PathBuf,
        /// Letter subsets, e.g. `ab,b`.
        #[arg(long, value_delimiter = ',', required = true)]
        subsets: Vec<String>,
        /// Glue points as words, one per subset.
        #[arg(long, value_delimiter = ',', required = true)]
        glue: Vec<String>,
    },
    /// Coset cycles of length up to `n` in a Cayley graph.
    CosetCycles {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        max_report: usize,
    },
    /// Whether a word labelling commutes over a group.
    LabelCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        group: PathBuf,
    },
    /// Whether a coset labelling commutes over a group.
    CosetCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, alias = "subgroup")]
        subgroups: PathBuf,
        #[arg(long)]
        group: PathBuf,
    },
    /// Tree witness for a Dyck factorization.
    Arborise {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<String>,
    },
    /// Least F-commuting relabelling with the same monoid values.
    Relabel {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        monoid: PathBuf,
        /// Also require equal values in this group.
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Bounded suitability verification; without `--monoid`, the Klein instance.
    AshVerify {
        #[arg(long)]
        monoid: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        label_len: usize,
        #[arg(long, default_value_t = 6)]
        relabel_len: usize,
        /// Also require equal values in this group (the Klein tower by default).
        #[arg(long, num_args = 0..=1)]
        strengthened: Option<Option<PathBuf>>,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        m: Vec<u32>,
    },
    /// The commutator word `w(x, y, z)`.
    WWord {
        #[arg(long)]
        t: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u32>,
    },
    /// The identity `w(x,y,z) = w(1,y,z) ≠ 1` in an expansion tower.
    Lemma54 {
        #[arg(long)]
        t: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u32>,
    },
    /// The Klein four-group counterexample checks.
    Klein {
        #[arg(long)]
        t: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u32>,
        /// Length bound for the exhaustive upper-bound scan.
        #[arg(long, default_value_t = 6)]
        bound_len: usize,
    },
    /// Statistics of a relational structure, or the consolidated structures of a graph.
    Structure {
        #[arg(long, required_unless_present = "consolidated")]
        file: Option<PathBuf>,
        #[arg(long)]
        consolidated: Option<PathBuf>,
    },
    /// The extension `X_P G` of a structure by a group.
    Extend {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        partials: PathBuf,
        #[arg(long)]
        group: PathBuf,
    },
    /// Induced and Σ-free extension check.
    Eppa {
        #[arg(long, conflicts_with = "subgroups")]
        structure: Option<PathBuf>,
        #[arg(long)]
        partials: Option<PathBuf>,
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<PathBuf>,
        /// Build the two-coset instance from this file instead.
        #[arg(long)]
        subgroups: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', requires = "subgroups")]
        names: Vec<String>,
        /// Use the trivial group as a control.
        #[arg(long)]
        trivial: bool,
    },
    /// DOT rendering of a graph file.
    ExportDot {
        #[arg(long)]
        graph: PathBuf,
    },
}

impl Command {
    fn name(&self) -> String {
        let dbg = format!("{self:?}");
        let head = dbg.split([' ', '{']).next().unwrap_or("report");
        let mut out = String::new();
        for (i, c) in head.chars().enumerate() {
            if c.is_uppercase() && i > 0 {
                out.push('-');
            }
            out.extend(c.to_lowercase());
        }
        out
    }
}

/// The text a command produced and whether a verifier found a failure.
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Format { .. } => EXIT_FORMAT,
        _ => EXIT_USAGE,
    }
}

fn configure(cli: &Cli) -> crate::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(v) = cli.max_elements {
        cfg.max_elements = v;
    }
    if let Some(v) = cli.max_nodes {
        cfg.max_nodes = v;
    }
    if let Some(v) = cli.max_len {
        cfg.max_len = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses `args`, runs the command and writes the report; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = configure(&cli).and_then(|cfg| commands::execute(&cli.command, &cfg));
    match result {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            if let Some(dir) = std::env::var_os(OUTPUT_DIR_VAR) {
                let path = PathBuf::from(dir).join(format!("{}.txt", cli.command.name()));
                if let Err(e) = std::fs::write(&path, &o.text) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            if o.failed {
                EXIT_PROPERTY
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> i32 {
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with(std::env::args_os(), &mut out, &mut err)
}
