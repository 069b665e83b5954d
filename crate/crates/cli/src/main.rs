use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kacv::{cmd_hn, cmd_kac, cmd_mult, cmd_verify, CliError, Method, Options, QuiverFile, Which};

#[derive(Parser)]
#[command(name = "kacv", version, about = "Kac polynomials, root multiplicities and HN checks for quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kac polynomial values by direct count and/or moment-map count.
    Kac {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Run verification pipelines.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        which: WhichArg,
    },
    /// Root multiplicities and PBW dimensions over a box.
    Mult {
        #[command(flatten)]
        common: Common,
    },
    /// m-values and HN types of all representations over one field.
    Hn {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Quiver file.
    file: PathBuf,
    /// Dimension vector label from the file, or a literal like 1,2.
    #[arg(long)]
    dim: String,
    /// Comma-separated field orders.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<u32>>,
    /// Weight label from the file, or a literal like 1,-1.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    #[arg(long, default_value_t = kacv_core::rep::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 97)]
    max_prime: u32,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Append elapsed milliseconds to each check.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Moment,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    #[value(name = "conjA")]
    ConjA,
    #[value(name = "conjB")]
    ConjB,
    Appendix,
    Hn,
    All,
}

impl Common {
    fn options(&self) -> Options {
        Options {
            budget: self.budget,
            max_prime: self.max_prime,
            workers: self.workers.max(1),
            timings: self.timings,
            fields: self.q.clone(),
            weight: self.weight.clone(),
        }
    }
}

fn run(cli: Cli) -> Result<kacv::Report, CliError> {
    match cli.command {
        Command::Kac { common, method } => {
            let file = QuiverFile::load(&common.file)?;
            let method = match method {
                MethodArg::Direct => Method::Direct,
                MethodArg::Moment => Method::Moment,
                MethodArg::Both => Method::Both,
            };
            cmd_kac(&file, &common.dim, method, &common.options())
        }
        Command::Verify { common, which } => {
            let file = QuiverFile::load(&common.file)?;
            let which = match which {
                WhichArg::ConjA => Which::ConjA,
                WhichArg::ConjB => Which::ConjB,
                WhichArg::Appendix => Which::Appendix,
                WhichArg::Hn => Which::Hn,
                WhichArg::All => Which::All,
            };
            cmd_verify(&file, &common.dim, which, &common.options())
        }
        Command::Mult { common } => cmd_mult(&QuiverFile::load(&common.file)?, &common.dim, &common.options()),
        Command::Hn { common } => cmd_hn(&QuiverFile::load(&common.file)?, &common.dim, &common.options()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(report) => {
            let _ = write!(std::io::stdout().lock(), "{report}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
