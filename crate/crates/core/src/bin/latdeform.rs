use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use latdeform::cli::{parse_order, parse_pair, run, Command, PipelineConfig, FINGERPRINT};
use latdeform::json::{self, parse_rational, read_vector};
use latdeform::scarf::Field;
use latdeform::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "latdeform", about = "Deform lattice ideals via directed chip-firing", disable_version_flag = true)]
struct Args {
    /// Read the input document from a file instead of stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the output document to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for the exactness check. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Coefficient field: Q or a prime such as F3.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Print the version and the algorithm-parameter fingerprint.
    #[arg(long, short = 'V')]
    version: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Laplacian presentation of a lattice.
    Laplacianize,
    /// Superstabilize a chip configuration.
    Superstabilize {
        /// Chip vector as a JSON array.
        #[arg(long)]
        config: String,
    },
    /// Chip-firing Groebner basis.
    Grobner {
        #[arg(long)]
        check_spairs: bool,
        /// `standard`, `tree`, or a ranking such as `1,2,0`.
        #[arg(long, default_value = "standard")]
        order: String,
    },
    /// Deform the Laplacian until the lattice ideal is generic.
    Deform {
        #[arg(long, default_value = "1")]
        delta: String,
        #[arg(long)]
        levels: Option<usize>,
        /// Explicit step `i,j`; repeat for several steps.
        #[arg(long)]
        template: Vec<String>,
        /// ε for the matching --template step, as p/q.
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Vec<String>,
    },
    /// Full pipeline down to Betti numbers.
    Resolve {
        #[arg(long, default_value = "1")]
        delta: String,
        #[arg(long)]
        template: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Vec<String>,
    },
    /// A deformation of generators that is not a lattice ideal.
    DemoPitfall {
        #[arg(long)]
        k: i64,
    },
}

fn config(args: &Args, cmd: &Cmd) -> Result<PipelineConfig> {
    let steps = |t: &[String], e: &[String]| -> Result<(Vec<(usize, usize)>, Vec<_>)> {
        Ok((
            t.iter().map(|s| parse_pair(s)).collect::<Result<_>>()?,
            e.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
        ))
    };
    let (command, delta, (template, epsilons)) = match cmd {
        Cmd::Laplacianize => (Command::Laplacianize, None, Default::default()),
        Cmd::Superstabilize { config } => {
            let v: Value = serde_json::from_str(config).map_err(|e| Error::InvalidInput(format!("--config: {e}")))?;
            (Command::Superstabilize { config: read_vector(&v)? }, None, Default::default())
        }
        Cmd::Grobner { check_spairs, order } => (
            Command::Grobner {
                order: parse_order(order)?,
                check_spairs: *check_spairs,
            },
            None,
            Default::default(),
        ),
        Cmd::Deform {
            delta,
            levels,
            template,
            epsilon,
        } => (Command::Deform { levels: *levels }, Some(delta), steps(template, epsilon)?),
        Cmd::Resolve {
            delta,
            template,
            epsilon,
        } => (Command::Resolve, Some(delta), steps(template, epsilon)?),
        Cmd::DemoPitfall { k } => (Command::DemoPitfall { k: *k }, None, Default::default()),
    };
    let mut cfg = PipelineConfig::new(command);
    if let Some(d) = delta {
        cfg.delta = parse_rational(d)?;
        if cfg.delta <= latdeform::exact::rat(0, 1) {
            return Err(Error::InvalidInput("--delta must be positive".into()));
        }
    }
    cfg.seed = args.seed;
    cfg.field = Field::parse(&args.field)?;
    cfg.template = template;
    cfg.epsilons = epsilons;
    Ok(cfg)
}

fn read_document(args: &Args) -> Result<Value> {
    let mut text = String::new();
    match &args.input {
        Some(p) => text = fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?,
        None => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
        }
    }
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

fn emit(args: &Args, doc: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("values serialize");
    text.push('\n');
    match &args.output {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.version {
        println!("latdeform {}\n{FINGERPRINT}", env!("CARGO_PKG_VERSION"));
        return ExitCode::SUCCESS;
    }
    let Some(cmd) = &args.command else {
        eprintln!("no command given; see --help");
        return ExitCode::from(2);
    };
    if let Some(t) = args.threads {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let prepared = config(&args, cmd).and_then(|cfg| {
        let input = if cfg.command.needs_input() { read_document(&args)? } else { Value::Null };
        Ok((cfg, input))
    });
    let (doc, code) = match prepared {
        Ok((cfg, input)) => run(&cfg, &input),
        Err(e) => (json::error(&e), e.exit_code()),
    };
    if let Err(e) = emit(&args, &doc) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
