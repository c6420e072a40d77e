use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::Failure;

#[derive(Parser, Debug)]
#[command(name = "gogauto", version, about = "Automatic structures on graphs of groups with finite edge groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
    Fsa,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Graph-of-groups spec file
    pub spec: PathBuf,
    /// Longest word enumerated
    #[arg(long, default_value_t = 6)]
    pub maxlen: usize,
    /// Fellow-traveller constant
    #[arg(long = "K", default_value_t = 2)]
    pub k: usize,
    /// Tree depth or ball radius
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long = "node-cap", default_value_t = gogauto::gog::DEFAULT_NODE_CAP, value_parser = positive)]
    pub node_cap: usize,
    /// Seed for sampled checks
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file, or a directory for commands that write Y-graphs
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// `default`, `biautomatic`, or a Y-graph file.
#[derive(Args, Debug, Clone)]
pub struct YArg {
    #[arg(long, default_value = "default")]
    pub ygraph: String,
}

#[derive(Args, Debug)]
pub struct WordArgs {
    #[command(flatten)]
    pub c: Common,
    #[arg(long)]
    pub word: String,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[command(flatten)]
    pub c: Common,
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub word2: String,
}

#[derive(Args, Debug)]
pub struct YArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
}

#[derive(Args, Debug)]
pub struct LanguageArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
    /// Compilation route: prohibit or bx
    #[arg(long, default_value = "prohibit")]
    pub route: String,
}

#[derive(Args, Debug)]
pub struct CollapseArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
    #[arg(long)]
    pub v1: String,
    #[arg(long)]
    pub v2: String,
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
    #[arg(long)]
    pub word: String,
    /// Class label of the new vertices
    #[arg(long, default_value = "split")]
    pub class: String,
    /// Automaton file for the new structure; the vertex language if absent
    #[arg(long)]
    pub target: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FtArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
    /// Synchronous instead of asynchronous
    #[arg(long)]
    pub sync: bool,
    /// Largest constant searched for
    #[arg(long, default_value_t = 4)]
    pub bound: usize,
}

#[derive(Args, Debug)]
pub struct EquivArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
    #[arg(long)]
    pub ygraph2: String,
}

#[derive(Args, Debug)]
pub struct TrackerArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
    #[arg(long)]
    pub word: String,
}

#[derive(Args, Debug)]
pub struct RayArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
    /// Transient part u of the ray u·v^ω
    #[arg(long = "ray-u", default_value = "")]
    pub u: String,
    /// Period v of the ray u·v^ω
    #[arg(long = "ray-v")]
    pub v: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotWhat {
    Ygraph,
    Tree,
}

#[derive(Args, Debug)]
pub struct DotArgs {
    #[command(flatten)]
    pub c: Common,
    #[command(flatten)]
    pub y: YArg,
    #[arg(long, value_enum, default_value_t = DotWhat::Ygraph)]
    pub what: DotWhat,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and check a spec file
    Validate(Common),
    /// Collapse edges with surjective terminal embeddings
    Reduce(Common),
    /// List the convenient alphabet
    Alphabet(Common),
    /// Normal form of a word
    Nf(WordArgs),
    /// Decide whether two words are equal
    Eq(PairArgs),
    /// Word distance within the radius given by --depth
    Dist(PairArgs),
    /// Cayley ball sizes up to --depth
    Ball(Common),
    /// Check the Y-graph axioms
    YgraphValidate(YArgs),
    /// Build the default Y-graph
    YgraphDefault(Common),
    /// Compile a Y-graph to its language
    Language(LanguageArgs),
    /// Synchronized sublanguage
    Synchronize(YArgs),
    /// Identify two Y-graph vertices
    Collapse(CollapseArgs),
    /// Give one vertex-group conjugate a new structure
    Split(SplitArgs),
    /// Induced languages over the tree ball
    Deploy(YArgs),
    /// Fellow-traveller constant and its stability up to --maxlen
    CheckFt(FtArgs),
    /// Fellow-traveller constant at --maxlen
    FtConstant(FtArgs),
    /// Bounded equivalence of two structures
    Equiv(EquivArgs),
    /// Run the tracker on a word
    Tracker(TrackerArgs),
    /// Bass-Serre tree ball
    Tree(Common),
    /// End cylinders at --depth
    Ends(Common),
    /// Classify the lasso ray u·v^ω
    ClassifyRay(RayArgs),
    /// Boundary decomposition over the tree ball
    Boundary(YArgs),
    /// DOT for a Y-graph or a tree ball
    ExportDot(DotArgs),
    /// Automaton text for a language
    ExportFsa(LanguageArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Validate(c) => commands::validate(&c),
        Cmd::Reduce(c) => commands::reduce(&c),
        Cmd::Alphabet(c) => commands::alphabet(&c),
        Cmd::Nf(a) => commands::nf(&a),
        Cmd::Eq(a) => commands::eq(&a),
        Cmd::Dist(a) => commands::dist(&a),
        Cmd::Ball(c) => commands::ball(&c),
        Cmd::YgraphValidate(a) => commands::ygraph_validate(&a),
        Cmd::YgraphDefault(c) => commands::ygraph_default(&c),
        Cmd::Language(a) => commands::language(&a),
        Cmd::Synchronize(a) => commands::synchronize(&a),
        Cmd::Collapse(a) => commands::collapse(&a),
        Cmd::Split(a) => commands::split(&a),
        Cmd::Deploy(a) => commands::deploy(&a),
        Cmd::CheckFt(a) => commands::check_ft(&a),
        Cmd::FtConstant(a) => commands::ft_constant(&a),
        Cmd::Equiv(a) => commands::equiv(&a),
        Cmd::Tracker(a) => commands::tracker(&a),
        Cmd::Tree(c) => commands::tree(&c),
        Cmd::Ends(c) => commands::ends(&c),
        Cmd::ClassifyRay(a) => commands::classify_ray(&a),
        Cmd::Boundary(a) => commands::boundary(&a),
        Cmd::ExportDot(a) => commands::export_dot(&a),
        Cmd::ExportFsa(a) => commands::export_fsa(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error={msg}");
            ExitCode::from(2)
        }
    }
}
