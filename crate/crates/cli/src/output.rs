//! Number formatting, JSON emission and CLI error plumbing.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use gausskey::format::{format_sig, round_sig, DEFAULT_SIG_DIGITS};
use serde::Serialize;
use serde_json::{Number, Value};

pub const PRECISION_VAR: &str = "GAUSSKEY_PRECISION";

/// Exit code 2: bad flags. Exit code 1: values outside a computation's domain.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => f.write_str(m),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Attributes a core error to a flag. Domain errors name their own parameter,
/// which becomes the flag; anything else is blamed on `fallback`.
pub fn core_err(fallback: &str, e: gausskey::Error) -> Failure {
    let flag = match &e {
        gausskey::Error::Domain { name, .. } => format!("--{}", name.replace('_', "-")),
        gausskey::Error::UnsupportedClass => "--tau".to_string(),
        gausskey::Error::EmptyStatistics => "--rounds".to_string(),
        _ => fallback.to_string(),
    };
    Failure::Domain(format!("{flag}: {e}"))
}

pub fn io_err(flag: &str, path: &Path, e: io::Error) -> Failure {
    Failure::Domain(format!("{flag}: cannot write '{}': {e}", path.display()))
}

/// Significant digits for printed numbers, from the environment or the default.
pub fn digits_from_env() -> CliResult<usize> {
    match std::env::var(PRECISION_VAR) {
        Err(_) => Ok(DEFAULT_SIG_DIGITS),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(d) if (1..=17).contains(&d) => Ok(d),
            _ => Err(Failure::Usage(format!(
                "{PRECISION_VAR}: expected an integer in 1..=17, got '{s}'"
            ))),
        },
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Fmt {
    pub digits: usize,
}

impl Fmt {
    pub fn num(&self, x: f64) -> String {
        format_sig(x, self.digits)
    }

    /// Serializes `value` with every float rounded to the configured digits.
    pub fn json<S: Serialize>(&self, value: &S) -> String {
        let mut v = serde_json::to_value(value).expect("output types serialize");
        round_floats(&mut v, self.digits);
        serde_json::to_string(&v).expect("json values serialize")
    }
}

fn round_floats(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if let Some(r) = Number::from_f64(round_sig(x, digits)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_floats(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_floats(x, digits)),
        _ => {}
    }
}

/// Aligned `key value` lines.
pub fn table(rows: &[(&str, String)]) -> String {
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let pad = width - k.chars().count();
        out.push_str(k);
        out.push_str(&" ".repeat(pad + 2));
        out.push_str(v);
        out.push('\n');
    }
    out
}

/// Opens `path` for writing; `-` means standard output.
pub fn open_output(flag: &str, path: &Path) -> CliResult<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let file = File::create(path).map_err(|e| io_err(flag, path, e))?;
    Ok(Box::new(BufWriter::new(file)))
}
