//! Text and JSON documents for arrays, types and spread systems.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::baranyai::{Spread, SpreadSystem};
use crate::error::{Error, Result};
use crate::locating::TestArray;
use crate::spread_types::{Role, Shape, VType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!(
                "unknown format {other:?} (expected text or json)"
            ))),
        }
    }
}

/// Detect JSON input by its first non-blank character.
pub fn sniff(input: &str) -> Format {
    if input.trim_start().starts_with('{') {
        Format::Json
    } else {
        Format::Text
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn content_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
}

fn parse_num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| {
        Error::Parse(format!(
            "line {line}: {what} {tok:?} is not a nonnegative integer"
        ))
    })
}

// ---------------------------------------------------------------- arrays

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrayDoc {
    #[serde(rename = "N")]
    n: usize,
    k: usize,
    v: usize,
    rows: Vec<Vec<u32>>,
}

/// `N k v` on the first line, then `N` lines of `k` symbols.
pub fn write_array_text(a: &TestArray) -> String {
    let mut out = format!("{} {} {}\n", a.rows(), a.columns(), a.symbols());
    for r in 0..a.rows() {
        let row: Vec<String> = a.row(r).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_array_text(input: &str) -> Result<TestArray> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::Parse("empty array document".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(Error::Parse(format!(
            "line {hline}: header must be \"N k v\""
        )));
    }
    let n: usize = parse_num(head[0], hline, "N")?;
    let k: usize = parse_num(head[1], hline, "k")?;
    let v: usize = parse_num(head[2], hline, "v")?;
    let mut body: Vec<(usize, &str)> = lines.collect();
    while body.last().is_some_and(|(_, l)| l.is_empty()) {
        body.pop();
    }
    if k == 0 {
        if body.iter().any(|(_, l)| !l.is_empty()) {
            return Err(Error::Parse("k = 0 but rows contain symbols".into()));
        }
        return TestArray::new(n, 0, v, Vec::new());
    }
    if body.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} rows, found {}",
            body.len()
        )));
    }
    let mut cells = Vec::with_capacity(n * k);
    for (line, text) in body {
        let row: Vec<u32> = text
            .split_whitespace()
            .map(|t| parse_num(t, line, "symbol"))
            .collect::<Result<_>>()?;
        if row.len() != k {
            return Err(Error::Parse(format!(
                "line {line}: expected {k} symbols, found {}",
                row.len()
            )));
        }
        cells.extend(row);
    }
    TestArray::new(n, k, v, cells)
}

pub fn write_array_json(a: &TestArray) -> String {
    let doc = ArrayDoc {
        n: a.rows(),
        k: a.columns(),
        v: a.symbols(),
        rows: (0..a.rows()).map(|r| a.row(r).to_vec()).collect(),
    };
    serde_json::to_string(&doc).expect("array document serializes") + "\n"
}

pub fn parse_array_json(input: &str) -> Result<TestArray> {
    let doc: ArrayDoc = serde_json::from_str(input).map_err(json_err)?;
    if doc.rows.len() != doc.n {
        return Err(Error::Parse(format!(
            "N = {} but {} rows given",
            doc.n,
            doc.rows.len()
        )));
    }
    if let Some(r) = doc.rows.iter().position(|r| r.len() != doc.k) {
        return Err(Error::Parse(format!(
            "row {} does not have k = {} symbols",
            r + 1,
            doc.k
        )));
    }
    TestArray::new(doc.n, doc.k, doc.v, doc.rows.concat())
}

pub fn write_array(a: &TestArray, format: Format) -> String {
    match format {
        Format::Text => write_array_text(a),
        Format::Json => write_array_json(a),
    }
}

pub fn parse_array(input: &str) -> Result<TestArray> {
    match sniff(input) {
        Format::Text => parse_array_text(input),
        Format::Json => parse_array_json(input),
    }
}

// ---------------------------------------------------------------- types

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Count {
    Small(u64),
    Big(String),
}

impl Count {
    fn from_big(x: &BigUint) -> Self {
        match x.to_u64() {
            Some(s) => Count::Small(s),
            None => Count::Big(x.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigUint> {
        match self {
            Count::Small(s) => Ok(BigUint::from(*s)),
            Count::Big(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeEntry {
    shape: Vec<u32>,
    multiplicity: Count,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypeDoc {
    #[serde(rename = "N")]
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v: Option<usize>,
    shapes: Vec<ShapeEntry>,
}

/// Header `N v` (`v` is `-` for a general type), then one line per shape:
/// multiplicity, a colon, the entries.
pub fn write_type_text(ty: &VType) -> String {
    let mut out = match ty.v() {
        Some(v) => format!("{} {v}\n", ty.n()),
        None => format!("{} -\n", ty.n()),
    };
    for (shape, mult) in ty.shapes() {
        let entries: Vec<String> = shape.entries().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{mult}: {}", entries.join(" "));
    }
    out
}

pub fn parse_type_text(input: &str) -> Result<VType> {
    let mut lines = content_lines(input).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty type document".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(Error::Parse(format!(
            "line {hline}: header must be \"N v\" or \"N -\""
        )));
    }
    let n: usize = parse_num(head[0], hline, "N")?;
    let mut ty = if head[1] == "-" {
        VType::general(n)
    } else {
        VType::new(n, parse_num(head[1], hline, "v")?)
    };
    for (line, text) in lines {
        let (mult, entries) = text.split_once(':').ok_or_else(|| {
            Error::Parse(format!("line {line}: expected \"multiplicity: entries\""))
        })?;
        let mult: BigUint = mult.trim().parse().map_err(|_| {
            Error::Parse(format!("line {line}: bad multiplicity {:?}", mult.trim()))
        })?;
        let entries: Vec<u32> = entries
            .split_whitespace()
            .map(|t| parse_num(t, line, "entry"))
            .collect::<Result<_>>()?;
        ty.add(Shape::new(entries), mult)?;
    }
    Ok(ty)
}

pub fn write_type_json(ty: &VType) -> String {
    let doc = TypeDoc {
        n: ty.n(),
        v: ty.v(),
        shapes: ty
            .shapes()
            .map(|(s, m)| ShapeEntry {
                shape: s.entries().to_vec(),
                multiplicity: Count::from_big(m),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("type document serializes") + "\n"
}

pub fn parse_type_json(input: &str) -> Result<VType> {
    let doc: TypeDoc = serde_json::from_str(input).map_err(json_err)?;
    let mut ty = match doc.v {
        Some(v) => VType::new(doc.n, v),
        None => VType::general(doc.n),
    };
    for entry in doc.shapes {
        ty.add(Shape::new(entry.shape), entry.multiplicity.to_big()?)?;
    }
    Ok(ty)
}

pub fn write_type(ty: &VType, format: Format) -> String {
    match format {
        Format::Text => write_type_text(ty),
        Format::Json => write_type_json(ty),
    }
}

pub fn parse_type(input: &str) -> Result<VType> {
    match sniff(input) {
        Format::Text => parse_type_text(input),
        Format::Json => parse_type_json(input),
    }
}

// ---------------------------------------------------------------- spread systems

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    #[serde(rename = "N")]
    n: usize,
    spreads: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    fill: Vec<Vec<Vec<usize>>>,
}

fn show_block(b: &[usize]) -> String {
    let parts: Vec<String> = b.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Header `N k`, then one spread per line as blocks like `{} {1,2} {3}`.
/// Fill spreads follow on lines starting with `fill`.
pub fn write_system_text(sys: &SpreadSystem) -> String {
    let requested = sys.requested().count();
    let mut out = format!("{} {requested}\n", sys.n);
    let mut fill = String::new();
    for spread in &sys.spreads {
        let blocks: Vec<String> = spread.blocks.iter().map(|b| show_block(b)).collect();
        match spread.role {
            Role::Requested => {
                let _ = writeln!(out, "{}", blocks.join(" "));
            }
            Role::Fill => {
                let _ = writeln!(fill, "fill {}", blocks.join(" "));
            }
        }
    }
    out + &fill
}

fn parse_blocks(text: &str, line: usize) -> Result<Vec<Vec<usize>>> {
    let mut blocks = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('{')
            .and_then(|r| r.split_once('}'))
            .ok_or_else(|| Error::Parse(format!("line {line}: expected a block like {{1,2}}")))?;
        let block: Vec<usize> = body
            .0
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| parse_num(t, line, "element"))
            .collect::<Result<_>>()?;
        blocks.push(block);
        rest = body.1.trim_start();
    }
    Ok(blocks)
}

pub fn parse_system_text(input: &str) -> Result<SpreadSystem> {
    let mut lines = content_lines(input).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty spread document".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(Error::Parse(format!(
            "line {hline}: header must be \"N k\""
        )));
    }
    let n: usize = parse_num(head[0], hline, "N")?;
    let k: usize = parse_num(head[1], hline, "k")?;
    let mut spreads = Vec::new();
    for (line, text) in lines {
        let (role, text) = match text.strip_prefix("fill") {
            Some(rest) => (Role::Fill, rest),
            None => (Role::Requested, text),
        };
        spreads.push(Spread::new(parse_blocks(text, line)?, role));
    }
    let sys = SpreadSystem { n, spreads };
    if sys.requested().count() != k {
        return Err(Error::Parse(format!(
            "header promises {k} spreads, found {}",
            sys.requested().count()
        )));
    }
    sys.check_structure().map_err(Error::MalformedSpread)?;
    Ok(sys)
}

pub fn write_system_json(sys: &SpreadSystem) -> String {
    let pick = |role: Role| -> Vec<Vec<Vec<usize>>> {
        sys.spreads
            .iter()
            .filter(|s| s.role == role)
            .map(|s| s.blocks.clone())
            .collect()
    };
    let doc = SystemDoc {
        n: sys.n,
        spreads: pick(Role::Requested),
        fill: pick(Role::Fill),
    };
    serde_json::to_string(&doc).expect("spread document serializes") + "\n"
}

pub fn parse_system_json(input: &str) -> Result<SpreadSystem> {
    let doc: SystemDoc = serde_json::from_str(input).map_err(json_err)?;
    let spreads = doc
        .spreads
        .into_iter()
        .map(|b| Spread::new(b, Role::Requested))
        .chain(doc.fill.into_iter().map(|b| Spread::new(b, Role::Fill)))
        .collect();
    let sys = SpreadSystem { n: doc.n, spreads };
    sys.check_structure().map_err(Error::MalformedSpread)?;
    Ok(sys)
}

pub fn write_system(sys: &SpreadSystem, format: Format) -> String {
    match format {
        Format::Text => write_system_text(sys),
        Format::Json => write_system_json(sys),
    }
}

pub fn parse_system(input: &str) -> Result<SpreadSystem> {
    match sniff(input) {
        Format::Text => parse_system_text(input),
        Format::Json => parse_system_json(input),
    }
}
