//! Command-line front end. `run` is the whole program minus process setup,
//! so it can be driven from tests with in-memory streams.

use std::fs;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::baranyai::{realize, RealizeOptions, DEFAULT_CAP_N};
use crate::combinatorics::{inequalities, lak, lambda_bound, VariantTag};
use crate::error::Error;
use crate::format::{self, Format};
use crate::locating::{generate_la, verify_ca2, verify_da11, verify_la};
use crate::oracle::{max_k_exhaustive, verify_by_table1, DEFAULT_SEARCH_CAP};
use crate::spread_types::{build_variant_type, is_admissible};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "locarray",
    version,
    about = "Optimal strength-1 locating arrays from spread systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print LAK(N, v) for a variant.
    Bound(Params),
    /// Grid of LAK for N = from..=N and v = 2..=v-max.
    Table(TableArgs),
    /// Print the optimal spread type for (N, v) and a variant.
    Type(TypeArgs),
    /// Realize a spread type read from FILE (or stdin).
    Realize(RealizeArgs),
    /// Build an N x LAK locating array.
    Generate(GenerateArgs),
    /// Check an array read from FILE (or stdin).
    Verify(VerifyArgs),
    /// Exhaustive maximum k for tiny N.
    Oracle(OracleArgs),
    /// Run the built-in consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantFlag {
    #[value(name = "11")]
    OneOne,
    #[value(name = "bar1-1")]
    BarOne,
    #[value(name = "1-bar1")]
    OneBar,
    #[value(name = "bar1-bar1")]
    BarBar,
}

impl From<VariantFlag> for VariantTag {
    fn from(f: VariantFlag) -> Self {
        match f {
            VariantFlag::OneOne => VariantTag::ONE_ONE,
            VariantFlag::BarOne => VariantTag::BAR_ONE,
            VariantFlag::OneBar => VariantTag::ONE_BAR,
            VariantFlag::BarBar => VariantTag::BAR_BAR,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum FormatFlag {
    #[default]
    Text,
    Json,
}

impl From<FormatFlag> for Format {
    fn from(f: FormatFlag) -> Self {
        match f {
            FormatFlag::Text => Format::Text,
            FormatFlag::Json => Format::Json,
        }
    }
}

#[derive(Args, Debug)]
struct Params {
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    v: usize,
    #[arg(long, value_enum, default_value = "11")]
    variant: VariantFlag,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: FormatFlag,
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Largest N in the grid.
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value_t = 1)]
    from: usize,
    /// Largest v (default N + 1).
    #[arg(long)]
    v_max: Option<usize>,
    #[arg(long, value_enum, default_value = "11")]
    variant: VariantFlag,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TypeArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RealizeArgs {
    /// Type document; `-` or absent reads stdin.
    file: Option<String>,
    #[arg(long, default_value_t = DEFAULT_CAP_N)]
    cap_n: usize,
    #[arg(long)]
    include_fill: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    params: Params,
    #[arg(long, default_value_t = DEFAULT_CAP_N)]
    cap_n: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    /// Locating, via class distinctness.
    La,
    /// Locating, by evaluating the definition literally.
    Table1,
    /// Strength-2 covering.
    Ca2,
    /// (1,1)-detecting.
    Da11,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Array document; `-` or absent reads stdin.
    file: Option<String>,
    /// Expected number of symbols; must match the document.
    #[arg(long)]
    v: Option<usize>,
    #[arg(long, value_enum, default_value = "11")]
    variant: VariantFlag,
    #[arg(long, value_enum, default_value = "la")]
    property: Property,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    params: Params,
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    cap_n: usize,
    /// Also print the witness array.
    #[arg(long)]
    witness: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Largest N for the generation round trips.
    #[arg(long = "N", default_value_t = 8)]
    n: usize,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::NotAdmissible { .. } | Error::NotFull { .. } | Error::Infeasible { .. } => {
            EXIT_VIOLATED
        }
        _ => EXIT_USAGE,
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_input(&mut self, file: &Option<String>) -> Result<String, Error> {
        match file.as_deref() {
            None | Some("-") => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
                Ok(s)
            }
            Some(path) => {
                fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {path}: {e}")))
            }
        }
    }

    fn emit(&mut self, out: &Output, doc: &str) -> Result<(), Error> {
        match &out.out {
            Some(path) => {
                fs::write(path, doc).map_err(|e| Error::Parse(format!("writing {path}: {e}")))
            }
            None => self
                .stdout
                .write_all(doc.as_bytes())
                .map_err(|e| Error::Parse(format!("writing stdout: {e}"))),
        }
    }

    fn say(&mut self, line: &str) {
        let _ = writeln!(self.stdout, "{line}");
    }
}

fn check_params(n: usize, v: usize) -> Result<(), Error> {
    if n < 1 || v < 2 {
        return Err(Error::InvalidParameters(format!(
            "need N >= 1 and v >= 2 (got N={n}, v={v})"
        )));
    }
    Ok(())
}

fn json_number(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(s) => json!(s),
        None => json!(x.to_string()),
    }
}

/// Parse `args` (including the program name) and execute. Returns the exit code.
pub fn run<I, S>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, Error> {
    match command {
        Command::Bound(p) => {
            check_params(p.n, p.v)?;
            io.say(&lak(p.n, p.v, p.variant.into()).to_string());
            Ok(EXIT_OK)
        }
        Command::Table(t) => table(t, io),
        Command::Type(t) => {
            check_params(t.params.n, t.params.v)?;
            let ty = build_variant_type(t.params.n, t.params.v, t.params.variant.into())?;
            io.emit(&t.output, &format::write_type(&ty, t.output.format.into()))?;
            Ok(EXIT_OK)
        }
        Command::Realize(r) => {
            let ty = format::parse_type(&io.read_input(&r.file)?)?;
            let sys = realize(
                &ty,
                RealizeOptions {
                    cap_n: r.cap_n,
                    include_fill: r.include_fill,
                },
            )?;
            io.emit(
                &r.output,
                &format::write_system(&sys, r.output.format.into()),
            )?;
            Ok(EXIT_OK)
        }
        Command::Generate(g) => {
            check_params(g.params.n, g.params.v)?;
            let a = generate_la(g.params.n, g.params.v, g.params.variant.into(), g.cap_n)?;
            io.emit(&g.output, &format::write_array(&a, g.output.format.into()))?;
            Ok(EXIT_OK)
        }
        Command::Verify(v) => verify(v, io),
        Command::Oracle(o) => oracle(o, io),
        Command::Selftest(s) => Ok(selftest(s.n, io)),
    }
}

fn table(t: TableArgs, io: &mut Io<'_>) -> Result<i32, Error> {
    if t.from < 1 || t.from > t.n {
        return Err(Error::InvalidParameters(format!(
            "empty range {}..={}",
            t.from, t.n
        )));
    }
    let v_max = t.v_max.unwrap_or(t.n + 1);
    if v_max < 2 {
        return Err(Error::InvalidParameters(
            "--v-max must be at least 2".into(),
        ));
    }
    let variant: VariantTag = t.variant.into();
    let grid: Vec<(usize, Vec<BigUint>)> = (t.from..=t.n)
        .map(|n| (n, (2..=v_max).map(|v| lak(n, v, variant)).collect()))
        .collect();
    let doc = match t.output.format {
        FormatFlag::Text => {
            let mut out = String::from("N\\v");
            for v in 2..=v_max {
                out.push_str(&format!("\t{v}"));
            }
            out.push('\n');
            for (n, row) in &grid {
                out.push_str(&n.to_string());
                for x in row {
                    out.push_str(&format!("\t{x}"));
                }
                out.push('\n');
            }
            out
        }
        FormatFlag::Json => {
            let rows: Vec<Value> = grid
                .iter()
                .map(|(n, row)| json!({"N": n, "lak": row.iter().map(json_number).collect::<Vec<_>>()}))
                .collect();
            let v: Vec<usize> = (2..=v_max).collect();
            json!({"variant": variant.as_flag(), "v": v, "rows": rows}).to_string() + "\n"
        }
    };
    io.emit(&t.output, &doc)?;
    Ok(EXIT_OK)
}

fn verify(args: VerifyArgs, io: &mut Io<'_>) -> Result<i32, Error> {
    let a = format::parse_array(&io.read_input(&args.file)?)?;
    if let Some(v) = args.v {
        if v != a.symbols() {
            return Err(Error::InvalidParameters(format!(
                "--v {v} does not match the array's v = {}",
                a.symbols()
            )));
        }
    }
    let variant: VariantTag = args.variant.into();
    let (ok, text) = match args.property {
        Property::La => {
            let verdict = verify_la(&a, variant);
            (verdict.is_ok(), verdict.to_string())
        }
        Property::Table1 => {
            let verdict = verify_by_table1(&a, variant);
            (verdict.is_ok(), verdict.to_string())
        }
        Property::Ca2 => {
            let verdict = verify_ca2(&a);
            (verdict.is_ok(), verdict.to_string())
        }
        Property::Da11 => {
            let verdict = verify_da11(&a);
            (verdict.is_ok(), verdict.to_string())
        }
    };
    io.say(&text);
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATED })
}

fn oracle(o: OracleArgs, io: &mut Io<'_>) -> Result<i32, Error> {
    check_params(o.params.n, o.params.v)?;
    let variant: VariantTag = o.params.variant.into();
    let res = max_k_exhaustive(o.params.n, o.params.v, variant, o.cap_n)?;
    let witness = res.to_array(o.params.n, o.params.v);
    let doc = match o.output.format {
        FormatFlag::Text => {
            let mut s = format!("{}\n", res.max_k);
            if o.witness {
                s.push_str(&format::write_array_text(&witness));
            }
            s
        }
        FormatFlag::Json => {
            let mut doc = json!({"N": o.params.n, "v": o.params.v, "variant": variant.as_flag(), "max_k": res.max_k});
            if o.witness {
                doc["witness"] =
                    serde_json::from_str(&format::write_array_json(&witness)).expect("valid json");
            }
            doc.to_string() + "\n"
        }
    };
    io.emit(&o.output, &doc)?;
    Ok(EXIT_OK)
}

fn selftest(n_max: usize, io: &mut Io<'_>) -> i32 {
    let mut failures = 0;
    let mut report = |io: &mut Io<'_>, name: &str, outcome: Result<(), String>| {
        match &outcome {
            Ok(()) => io.say(&format!("PASS {name}")),
            Err(why) => io.say(&format!("FAIL {name}: {why}")),
        }
        if outcome.is_err() {
            failures += 1;
        }
    };

    let oracle_check = || -> Result<(), String> {
        for n in 1..=4 {
            for variant in VariantTag::ALL {
                for v in 2..=variant.max_symbols(n) {
                    let got = max_k_exhaustive(n, v, variant, 5)
                        .map_err(|e| e.to_string())?
                        .max_k;
                    if BigUint::from(got) != lak(n, v, variant) {
                        return Err(format!(
                            "N={n} v={v} {variant}: oracle {got}, formula {}",
                            lak(n, v, variant)
                        ));
                    }
                }
            }
        }
        Ok(())
    };
    report(
        io,
        "formula agrees with exhaustive search for N <= 4",
        oracle_check(),
    );

    let types_check = || -> Result<(), String> {
        for n in 1..=16 {
            for v in 2..=n + 1 {
                for variant in VariantTag::ALL {
                    if v > variant.max_symbols(n) {
                        continue;
                    }
                    let ty = build_variant_type(n, v, variant).map_err(|e| e.to_string())?;
                    if ty.len() != lak(n, v, variant) || !is_admissible(&ty).is_admissible() {
                        return Err(format!("N={n} v={v} {variant}"));
                    }
                }
            }
        }
        Ok(())
    };
    report(
        io,
        "optimal types are admissible with LAK shapes for N <= 16",
        types_check(),
    );

    let generate_check = || -> Result<(), String> {
        for n in 1..=n_max {
            for variant in VariantTag::ALL {
                for v in 2..=variant.max_symbols(n) {
                    if lak(n, v, variant) == BigUint::from(0u32) {
                        continue;
                    }
                    let a = generate_la(n, v, variant, n_max.max(DEFAULT_CAP_N))
                        .map_err(|e| e.to_string())?;
                    if BigUint::from(a.columns()) != lak(n, v, variant)
                        || !verify_la(&a, variant).is_ok()
                    {
                        return Err(format!("N={n} v={v} {variant}"));
                    }
                }
            }
        }
        Ok(())
    };
    report(
        io,
        &format!("generated arrays verify for N <= {n_max}"),
        generate_check(),
    );

    let ineq_check = || -> Result<(), String> {
        use inequalities::*;
        ratio_identity(200).map_err(|w| format!("ratio identity {w:?}"))?;
        ratio_power_bound(60).map_err(|w| format!("ratio power {w:?}"))?;
        next_term_bound(200).map_err(|w| format!("next term {w:?}"))?;
        prefix_sum_bound(200).map_err(|w| format!("prefix sum {w:?}"))?;
        two_steps_up(200).map_err(|w| format!("two steps {w:?}"))?;
        one_step_up(200).map_err(|w| format!("one step {w:?}"))?;
        three_parts(200).map_err(|w| format!("three parts {w:?}"))?;
        Ok(())
    };
    report(io, "binomial inequalities for N <= 200", ineq_check());

    let lambda_small = [(3, 2, 4u32), (5, 3, 5), (6, 3, 10), (10, 3, 116)];
    let lambda_check = || -> Result<(), String> {
        for (n, v, want) in lambda_small {
            if lambda_bound(n, v) != BigUint::from(want) {
                return Err(format!(
                    "Lambda({n},{v}) = {}, expected {want}",
                    lambda_bound(n, v)
                ));
            }
        }
        Ok(())
    };
    report(io, "reference values of the bound", lambda_check());

    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    }
}
