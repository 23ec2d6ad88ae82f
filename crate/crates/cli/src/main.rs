use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fibtype::coset::Strategy;
use fibtype_cli as cmd;

#[derive(Parser)]
#[command(name = "fibtype", version, about = "Groups of Fibonacci type G_n(m,k)")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify G_n(m,k).
    Classify { n: u32, m: u32, k: u32 },
    /// Isomorphism classes (n <= 12) or congruence families (n >= 13).
    Table {
        /// Inclusive range such as 3..12, or a single n.
        #[arg(long, value_parser = cmd::parse_range)]
        n: std::ops::RangeInclusive<u32>,
    },
    /// Condition T(5) via the star graph.
    T5 { n: u32, m: u32, k: u32 },
    /// Condition T(6): congruence profile and star graph girth.
    T6 { n: u32, m: u32, k: u32 },
    /// Star graph queries.
    Star {
        #[command(subcommand)]
        what: StarCommand,
    },
    /// Abelianisation via Smith normal form.
    Ab { n: u32, m: u32, k: u32 },
    /// Group order by coset enumeration.
    Order {
        n: u32,
        m: u32,
        k: u32,
        #[arg(long, default_value_t = 1_000_000)]
        max_cosets: usize,
        /// Use one strategy only (default: HLT, then Felsch on overflow).
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// Representatives of the outstanding cases with k of additive order p.
    Cases { p: u32 },
    /// Van Kampen diagrams (.vkd) and colored disks (.cdk).
    Diagram {
        #[command(subcommand)]
        what: DiagramCommand,
    },
}

#[derive(Subcommand)]
enum StarCommand {
    Girth { n: u32, m: u32, k: u32 },
    /// Closed reduced walks up to a length.
    Cycles {
        n: u32,
        m: u32,
        k: u32,
        #[arg(long, default_value_t = 7)]
        maxlen: usize,
    },
    /// Interior vertex census for k of additive order p.
    Census { n: u32, m: u32, k: u32, p: u32 },
}

#[derive(Subcommand)]
enum DiagramCommand {
    Check { file: PathBuf },
    Audit { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Hlt,
    Felsch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let out = match cli.command {
        Command::Classify { n, m, k } => cmd::cmd_classify(n, m, k, json),
        Command::Table { n } => cmd::cmd_table(n, json),
        Command::T5 { n, m, k } => cmd::cmd_t5(n, m, k, json),
        Command::T6 { n, m, k } => cmd::cmd_t6(n, m, k, json),
        Command::Star { what } => match what {
            StarCommand::Girth { n, m, k } => cmd::cmd_star_girth(n, m, k, json),
            StarCommand::Cycles { n, m, k, maxlen } => cmd::cmd_star_cycles(n, m, k, maxlen, json),
            StarCommand::Census { n, m, k, p } => cmd::cmd_star_census(n, m, k, p, json),
        },
        Command::Ab { n, m, k } => cmd::cmd_ab(n, m, k, json),
        Command::Order { n, m, k, max_cosets, strategy } => {
            let s = strategy.map(|s| match s {
                StrategyArg::Hlt => Strategy::Hlt,
                StrategyArg::Felsch => Strategy::Felsch,
            });
            cmd::cmd_order(n, m, k, max_cosets, s, json)
        }
        Command::Cases { p } => cmd::cmd_cases(p, json),
        Command::Diagram { what } => match what {
            DiagramCommand::Check { file } => cmd::cmd_diagram_check(&file, json),
            DiagramCommand::Audit { file } => cmd::cmd_diagram_audit(&file, json),
        },
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
