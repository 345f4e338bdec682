use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use padic_tiling::fixtures::worked_example_tau;
use padic_tiling::render::{render, Coloring, Format, RenderSpec};
use padic_tiling::tile::{diagnose, parse_leaf_file};
use padic_tiling::{
    explicit_tile, parse_rational, rational_to_stream, solve_diophantine, DigitStream, Error,
    Homeo, LeafBijection, Tile, Word, DEFAULT_CAP,
};

const OK: u8 = 0;
const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const DOMAIN: u8 = 3;
const CAP: u8 = 4;

#[derive(Parser)]
#[command(
    name = "padic-tiling",
    version,
    about = "Digit-block homeomorphisms between Z_p and Z_q"
)]
struct Cli {
    /// Upper bound on the number of words any construction may generate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve 1 + (p−1)s = 1 + (q−1)s′ for the m-th solution.
    Solve {
        #[arg(short, value_parser = base_parser())]
        p: u32,
        #[arg(short, value_parser = base_parser())]
        q: u32,
        #[arg(short, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
    },
    /// Print the explicit tile with s splittings in base p.
    Tile {
        #[arg(short, value_parser = base_parser())]
        p: u32,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        s: u64,
        /// Write to this file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply the homeomorphism to digits, a rational, or a periodic stream.
    Map {
        #[command(flatten)]
        homeo: HomeoArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Output digits to print for rational and stream inputs.
        #[arg(long, default_value_t = 16)]
        precision: usize,
        /// Print the leaf blocks consumed from the input.
        #[arg(long)]
        trace: bool,
    },
    /// Check that a tile file describes a complete prefix code.
    Verify { file: PathBuf },
    /// Draw the nested partitions of source and target.
    Render {
        #[command(flatten)]
        homeo: HomeoArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
        format: FormatArg,
        #[arg(long, value_enum, default_value_t = ColoringArg::LeafOrbit)]
        coloring: ColoringArg,
    },
}

#[derive(Args)]
struct HomeoArgs {
    #[arg(short, value_parser = base_parser())]
    p: Option<u32>,
    #[arg(short, value_parser = base_parser())]
    q: Option<u32>,
    #[arg(short, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    /// Source tile file; overrides the explicit source tile.
    #[arg(long)]
    source: Option<PathBuf>,
    /// Target tile file; overrides the explicit target tile.
    #[arg(long)]
    target: Option<PathBuf>,
    /// `paper` for the worked-example bijection, or a tau file.
    #[arg(long)]
    tau: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Little-endian digits, e.g. `2,1,0`.
    #[arg(long)]
    digits: Option<String>,
    /// A fraction `num/den` with den prime to p.
    #[arg(long, allow_hyphen_values = true)]
    rational: Option<String>,
    /// An eventually periodic stream `pre;per`.
    #[arg(long)]
    stream: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Ascii,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColoringArg {
    None,
    LeafOrbit,
}

fn base_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(2..)
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => CAP,
            Error::Parse(_) | Error::InvalidDigit { .. } | Error::InvalidBase(_) => USAGE,
            _ => DOMAIN,
        };
        Failure::new(code, e)
    }
}

/// Errors while reading user-supplied files are parse errors.
fn from_file(path: &Path, e: Error) -> Failure {
    match e {
        Error::CapExceeded { .. } => e.into(),
        e => Failure::new(USAGE, format!("{}: {e}", path.display())),
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(USAGE, format!("{}: {e}", path.display())))
}

fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn warn_composite(base: u32) {
    if !is_prime(base) {
        eprintln!("warning: base {base} is composite; proceeding anyway");
    }
}

fn digit_line(digits: &[u32]) -> String {
    digits
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn load_tile(path: &Path) -> Result<Tile, Failure> {
    let text = read(path)?;
    Tile::parse_file(&text).map_err(|e| from_file(path, e))
}

fn build_homeo(args: &HomeoArgs) -> Result<Homeo, Failure> {
    let need = |base: Option<u32>, flag: &str| {
        base.ok_or_else(|| Failure::new(USAGE, format!("missing -{flag} (or a tile file)")))
    };
    let explicit = |base: u32, s: u64| explicit_tile(base, s).map(|e| e.tile);
    let (source, target) = match (&args.source, &args.target) {
        (Some(s), Some(t)) => (load_tile(s)?, load_tile(t)?),
        (s, t) => {
            let sol = solve_diophantine(need(args.p, "p")?, need(args.q, "q")?, args.m)?;
            let source = match s {
                Some(path) => load_tile(path)?,
                None => explicit(sol.p, sol.s)?,
            };
            let target = match t {
                Some(path) => load_tile(path)?,
                None => explicit(sol.q, sol.s_prime)?,
            };
            (source, target)
        }
    };
    for (flag, given, tile) in [("p", args.p, &source), ("q", args.q, &target)] {
        if let Some(b) = given.filter(|&b| b != tile.base()) {
            return Err(Failure::new(
                USAGE,
                format!("-{flag} {b} disagrees with tile base {}", tile.base()),
            ));
        }
    }
    warn_composite(source.base());
    if target.base() != source.base() {
        warn_composite(target.base());
    }
    let tau = match args.tau.as_deref() {
        None => LeafBijection::canonical(source, target)?,
        Some("paper") => {
            let fixture = worked_example_tau();
            if (fixture.source(), fixture.target()) != (&source, &target) {
                return Err(Failure::new(
                    USAGE,
                    "--tau paper needs p=3, q=5 with s=2, s'=1",
                ));
            }
            fixture
        }
        Some(file) => {
            let path = Path::new(file);
            LeafBijection::parse_file(source, target, &read(path)?)
                .map_err(|e| from_file(path, e))?
        }
    };
    Ok(Homeo::new(tau))
}

fn cmd_solve(p: u32, q: u32, m: u64) -> CmdResult {
    let sol = solve_diophantine(p, q, m)?;
    println!(
        "d={} s={} s'={} leaves={}",
        sol.d,
        sol.s,
        sol.s_prime,
        sol.leaf_count()
    );
    Ok(OK)
}

fn cmd_tile(p: u32, s: u64, output: Option<&Path>, cap: usize) -> CmdResult {
    let leaves = padic_tiling::leaf_count(p, s);
    if leaves > cap as u128 {
        return Err(Error::CapExceeded {
            what: "explicit tile",
            needed: leaves,
            cap,
        }
        .into());
    }
    warn_composite(p);
    let text = explicit_tile(p, s)?.tile.to_file_string();
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(DOMAIN, format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(OK)
}

fn print_trace(h: &Homeo, input: &Word) -> Result<(), Failure> {
    let (trace, _) = h.apply_traced(input)?;
    let blocks: Vec<String> = trace.blocks.iter().map(Word::to_string).collect();
    println!("blocks {}", blocks.join(" | "));
    println!("pending {}", trace.remainder);
    Ok(())
}

fn cmd_map(h: &Homeo, input: &InputArgs, precision: usize, trace: bool) -> CmdResult {
    let stream = if let Some(text) = &input.digits {
        let word = Word::parse(h.p(), text)?;
        let applied = h.apply(&word)?;
        println!("{}", applied.out);
        if trace {
            print_trace(h, &word)?;
        }
        return Ok(OK);
    } else if let Some(text) = &input.rational {
        let (num, den) = parse_rational(text)?;
        rational_to_stream(&num, &den, h.p())?
    } else {
        let text = input.stream.as_deref().unwrap_or_default();
        DigitStream::parse(h.p(), text)?
    };
    let image = h.apply_stream(&stream)?;
    let shown: Vec<u32> = image.digits().take(precision).collect();
    println!("{}", digit_line(&shown));
    println!("stream {image}");
    if trace {
        let needed = h.required_input_precision(precision);
        print_trace(h, stream.truncate(needed).word())?;
    }
    Ok(OK)
}

fn cmd_verify(path: &Path) -> CmdResult {
    let text = read(path)?;
    let (base, leaves) = parse_leaf_file(&text).map_err(|e| from_file(path, e))?;
    match diagnose(base, &leaves) {
        Ok(()) => {
            let n = leaves.len();
            println!("OK leaves={n} s={}", (n - 1) / (base as usize - 1));
            Ok(OK)
        }
        Err(violation) => {
            println!("FAIL {violation}");
            Ok(VERIFY_FAILED)
        }
    }
}

fn cmd_render(h: &Homeo, spec: &RenderSpec, cap: usize) -> CmdResult {
    print!("{}", render(h, spec, cap)?);
    Ok(OK)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Solve { p, q, m } => cmd_solve(p, q, m),
        Command::Tile { p, s, output } => cmd_tile(p, s, output.as_deref(), cli.cap),
        Command::Map {
            homeo,
            input,
            precision,
            trace,
        } => cmd_map(&build_homeo(&homeo)?, &input, precision, trace),
        Command::Verify { file } => cmd_verify(&file),
        Command::Render {
            homeo,
            depth,
            format,
            coloring,
        } => {
            let spec = RenderSpec {
                depth,
                format: match format {
                    FormatArg::Ascii => Format::Ascii,
                    FormatArg::Dot => Format::Dot,
                },
                coloring: match coloring {
                    ColoringArg::None => Coloring::None,
                    ColoringArg::LeafOrbit => Coloring::LeafOrbit,
                },
            };
            cmd_render(&build_homeo(&homeo)?, &spec, cli.cap)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
