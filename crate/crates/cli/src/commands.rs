use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use synclat::networks::{
    almost_equitable_partitions_with, balanced_partitions_with, cayley_network, equitable_partitions_with,
    exo_balanced_partitions_with, incidence_family, laplacian, laplacian_family, monochrome_adjacency,
    subgroup_coset_partitions, ColoredNetwork,
};
use synclat::oracle::{brute_invariant_set, brute_tactical_set};
use synclat::{
    cir, cir_trace, invariant_lattice_with, tactical_lattice_with, EnumConfig, InvariantLattice, MatrixFamily,
    Partition, PartitionPair,
};

use crate::error::CliError;
use crate::formats::Source;
use crate::render::{self, Format, WireElement};

/// Lattices of invariant partitions, balanced colorings and tactical
/// decompositions over exact rationals.
#[derive(Debug, Parser)]
#[command(name = "synclat", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All partitions invariant under a matrix family.
    Lattice {
        /// Matrix, array of matrices, or {"matrices": [...]}.
        #[arg(long, value_name = "FILE")]
        matrices: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Coarsest invariant partition finer than --start.
    Cir {
        /// Matrix, array of matrices, or {"matrices": [...]}.
        #[arg(long, value_name = "FILE")]
        matrices: PathBuf,
        /// Bar notation, e.g. "14|235"; defaults to the singleton partition.
        #[arg(long)]
        start: Option<String>,
        /// Print every refinement step.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        opts: Options,
    },
    /// Tactical decompositions of an incidence structure or a rectangular family.
    Tactical {
        /// Points, lines and 0/1 incidence matrices.
        #[arg(long, value_name = "FILE", required_unless_present = "matrices", conflicts_with = "matrices")]
        incidence: Option<PathBuf>,
        /// Rectangular matrix family.
        #[arg(long, value_name = "FILE")]
        matrices: Option<PathBuf>,
        #[command(flatten)]
        opts: Options,
    },
    /// Balanced partitions of a coupled cell network.
    Balanced {
        /// Cells, optional cell types and colored arrows.
        #[arg(long, value_name = "FILE")]
        network: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Exo-balanced partitions (Laplacian of each arrow type).
    ExoBalanced {
        /// Cells, optional cell types and colored arrows.
        #[arg(long, value_name = "FILE")]
        network: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Equitable partitions of a simple graph.
    Equitable {
        /// Adjacency matrix or {"n", "edges"}.
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Almost equitable partitions of a simple graph.
    AlmostEquitable {
        /// Adjacency matrix or {"n", "edges"}.
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Balanced partitions of a Cayley color digraph.
    Cayley {
        /// Multiplication table with optional generators.
        #[arg(long, value_name = "FILE")]
        group: PathBuf,
        /// Comma-separated 1-based elements; overrides the file's generators.
        #[arg(long, value_delimiter = ',')]
        generators: Option<Vec<usize>>,
        #[command(flatten)]
        opts: Options,
    },
    /// Compare split-and-cir with the brute-force scan.
    Verify {
        /// Square family for invariant partitions, rectangular for tactical pairs.
        #[arg(long, value_name = "FILE", required_unless_present = "incidence", conflicts_with = "incidence")]
        matrices: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        incidence: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

#[derive(Debug, Args)]
pub struct Options {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also run the brute-force oracle and exit with status 4 on a mismatch.
    #[arg(long)]
    pub verify: bool,
    /// Abort once the lattice has more elements than this.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: usize,
    /// Worker threads; 0 uses all cores, 1 the sequential path.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

impl Options {
    fn config(&self) -> EnumConfig {
        EnumConfig { cap: self.cap, workers: self.workers, ..EnumConfig::default() }
    }
}

/// The artifact plus what `--verify` found.
#[derive(Debug)]
pub struct Outcome {
    pub artifact: String,
    /// Lines for stderr.
    pub notes: Vec<String>,
    /// Set when the oracle disagreed.
    pub mismatch: bool,
}

impl Outcome {
    fn new(artifact: String) -> Self {
        Outcome { artifact, notes: Vec::new(), mismatch: false }
    }

    fn check(&mut self, what: &str, agrees: bool) {
        if agrees {
            self.notes.push(format!("verify: {what} agrees"));
        } else {
            self.mismatch = true;
            self.notes.push(format!("verify: {what} MISMATCH"));
        }
    }

    /// Oracle result, or a note when the input is too large for it.
    fn check_with<T>(&mut self, what: &str, oracle: synclat::Result<T>, agrees: impl FnOnce(T) -> bool) -> Result<(), CliError> {
        match oracle {
            Ok(v) => self.check(what, agrees(v)),
            Err(synclat::Error::TooLarge(why)) => self.notes.push(format!("verify: skipped, {why}")),
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }
}

fn emit<E: WireElement>(lattice: &InvariantLattice<E>, format: Format) -> String {
    match format {
        Format::Text => render::lattice_text(lattice),
        Format::Json => render::lattice_json(lattice),
        Format::Dot => render::lattice_dot(lattice),
    }
}

fn below(brute: Vec<Partition>, types: &Partition) -> Vec<Partition> {
    brute.into_iter().filter(|p| p.is_finer(types).unwrap_or(false)).collect()
}

fn network_warnings(net: &ColoredNetwork, out: &mut Outcome) {
    out.notes.extend(net.warnings().iter().map(|w| format!("warning: {w}")));
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Lattice { matrices, opts } => {
            let family = Source::load(matrices)?.family()?;
            let lattice = invariant_lattice_with(&family, &opts.config())?;
            let mut out = Outcome::new(emit(&lattice, opts.format));
            if opts.verify {
                out.check_with("brute-force scan", brute_invariant_set(&family), |b| b == lattice.elements())?;
            }
            Ok(out)
        }
        Command::Cir { matrices, start, trace, opts } => {
            let family = Source::load(matrices)?.family()?;
            let n = family.cols();
            let a = match start {
                Some(text) => Partition::parse_bar(text, n).map_err(|e| CliError::Usage(format!("--start: {e}")))?,
                None => Partition::singleton(n),
            };
            let steps = if *trace { Some(cir_trace(&family, &a)?) } else { None };
            let c = match &steps {
                Some(s) => s.last().expect("trace starts with the input").clone(),
                None => cir(&family, &a)?,
            };
            let artifact = match opts.format {
                Format::Text => render::partition_text(&c, steps.as_deref()),
                Format::Json => render::partition_json(&c, steps.as_deref()),
                Format::Dot => return Err(CliError::Usage("--format dot needs a lattice command".into())),
            };
            let mut out = Outcome::new(artifact);
            if opts.verify {
                // the coarsest invariant partition below `a` is the join of all of them
                out.check_with("brute-force scan", brute_invariant_set(&family), |b| {
                    below(b, &a).iter().fold(Partition::discrete(n), |acc, p| acc.join(p).expect("same size")) == c
                })?;
            }
            Ok(out)
        }
        Command::Tactical { incidence, matrices, opts } => {
            let family = match (incidence, matrices) {
                (Some(path), _) => incidence_family(&Source::load(path)?.incidence()?),
                (None, Some(path)) => Source::load(path)?.family()?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let lattice = tactical_lattice_with(&family, &opts.config())?;
            let mut out = Outcome::new(emit(&lattice, opts.format));
            if opts.verify {
                out.check_with("brute-force scan", brute_tactical_set(&family), |mut b: Vec<PartitionPair>| {
                    b.sort();
                    b == lattice.elements()
                })?;
            }
            Ok(out)
        }
        Command::Balanced { network, opts } | Command::ExoBalanced { network, opts } => {
            let net = Source::load(network)?.network()?;
            let exo = matches!(cli.command, Command::ExoBalanced { .. });
            let lattice = if exo {
                exo_balanced_partitions_with(&net, &opts.config())?
            } else {
                balanced_partitions_with(&net, &opts.config())?
            };
            let mut out = Outcome::new(emit(&lattice, opts.format));
            network_warnings(&net, &mut out);
            if opts.verify {
                let mut family = monochrome_adjacency(&net);
                if exo {
                    family = laplacian_family(&family)?;
                }
                out.check_with("brute-force scan", brute_invariant_set(&family), |b| {
                    below(b, net.cell_types()) == lattice.elements()
                })?;
            }
            Ok(out)
        }
        Command::Equitable { graph, opts } | Command::AlmostEquitable { graph, opts } => {
            let a = Source::load(graph)?.graph()?;
            let almost = matches!(cli.command, Command::AlmostEquitable { .. });
            let lattice = if almost {
                almost_equitable_partitions_with(&a, &opts.config())?
            } else {
                equitable_partitions_with(&a, &opts.config())?
            };
            let mut out = Outcome::new(emit(&lattice, opts.format));
            if opts.verify {
                let m = if almost { laplacian(&a)? } else { a };
                out.check_with("brute-force scan", brute_invariant_set(&MatrixFamily::single(m)), |b| {
                    b == lattice.elements()
                })?;
            }
            Ok(out)
        }
        Command::Cayley { group, generators, opts } => {
            let (table, from_file) = Source::load(group)?.group()?;
            let gens: Vec<usize> = match generators {
                Some(g) => g
                    .iter()
                    .map(|&x| {
                        if (1..=table.order()).contains(&x) {
                            Ok(x - 1)
                        } else {
                            Err(CliError::Usage(format!("--generators: {x} is not in 1..={}", table.order())))
                        }
                    })
                    .collect::<Result<_, _>>()?,
                None => from_file.ok_or_else(|| {
                    CliError::Usage("no generators: add \"generators\" to the file or pass --generators".into())
                })?,
            };
            let net = cayley_network(&table, &gens)?;
            let lattice = balanced_partitions_with(&net, &opts.config())?;
            let mut out = Outcome::new(emit(&lattice, opts.format));
            network_warnings(&net, &mut out);
            if opts.verify {
                let cosets = subgroup_coset_partitions(&table)?;
                if net.warnings().is_empty() {
                    out.check("subgroup coset partitions", cosets == lattice.elements());
                }
                out.check_with("brute-force scan", brute_invariant_set(&monochrome_adjacency(&net)), |b| {
                    b == lattice.elements()
                })?;
            }
            Ok(out)
        }
        Command::Verify { matrices, incidence, format, cap, workers } => {
            let config = EnumConfig { cap: *cap, workers: *workers, ..EnumConfig::default() };
            let (found, expected) = match (matrices, incidence) {
                (Some(path), _) => {
                    let family = Source::load(path)?.family()?;
                    if family.is_square() {
                        let slow = brute_invariant_set(&family)?;
                        let fast = invariant_lattice_with(&family, &config)?;
                        (bars(fast.elements()), bars(&slow))
                    } else {
                        tactical_pair(&family, &config)?
                    }
                }
                (None, Some(path)) => tactical_pair(&incidence_family(&Source::load(path)?.incidence()?), &config)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let agrees = found == expected;
            let artifact = match format {
                Format::Text => {
                    let verdict = if agrees { "agree" } else { "differ" };
                    let mut s = format!("split-and-cir: {}\nbrute force: {}\nresults {verdict}\n", found.len(), expected.len());
                    for missing in expected.iter().filter(|e| !found.contains(e)) {
                        s.push_str(&format!("missing: {missing}\n"));
                    }
                    for extra in found.iter().filter(|e| !expected.contains(e)) {
                        s.push_str(&format!("extra: {extra}\n"));
                    }
                    s
                }
                Format::Json => {
                    let doc = serde_json::json!({
                        "agree": agrees,
                        "split_and_cir": found,
                        "brute_force": expected,
                    });
                    serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
                }
                Format::Dot => return Err(CliError::Usage("--format dot needs a lattice command".into())),
            };
            let mut out = Outcome::new(artifact);
            out.mismatch = !agrees;
            Ok(out)
        }
    }
}

fn bars<E: ToString>(els: &[E]) -> Vec<String> {
    els.iter().map(ToString::to_string).collect()
}

fn tactical_pair(family: &MatrixFamily, config: &EnumConfig) -> Result<(Vec<String>, Vec<String>), CliError> {
    let mut slow = brute_tactical_set(family)?;
    let fast = tactical_lattice_with(family, config)?;
    slow.sort();
    Ok((bars(fast.elements()), bars(&slow)))
}
