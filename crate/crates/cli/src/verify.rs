//! Generator-to-fixture mappings for `verify`.

use std::fmt;
use std::path::Path;

use irrarray_core::oeis::{self, ANumber, MatchReport, SequenceFixture};
use irrarray_core::Error;
use rayon::prelude::*;

use crate::generate::{Generator, Method};
use crate::syntax::{format_spec, parse_quantity, parse_spec};
use crate::CliError;

/// The mappings checked by `verify` when no file is given.
pub const BUILTIN: &str = include_str!("builtin_mappings.txt");

/// One line of a mapping file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    pub a_number: ANumber,
    pub spec: String,
    pub quantity: String,
    /// First fixture index compared; defaults to the fixture offset.
    pub from: Option<i64>,
    pub shift: i64,
    pub add: i64,
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a_number, self.spec, self.quantity)?;
        if let Some(from) = self.from {
            write!(f, " from={from}")?;
        }
        if self.shift != 0 {
            write!(f, " shift={}", self.shift)?;
        }
        if self.add != 0 {
            write!(f, " add={}", self.add)?;
        }
        Ok(())
    }
}

pub fn parse_mappings(text: &str) -> Result<Vec<Mapping>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Usage(format!("mapping line {line_no}: {msg}"));
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(err("expected <A-number> <partition> <quantity> [options]".into()));
        }
        let a_number = fields[0].parse::<ANumber>().map_err(|e| err(e.to_string()))?;
        let spec = format_spec(&parse_spec(fields[1]).map_err(|e| err(e.to_string()))?);
        parse_quantity(fields[2]).map_err(|e| err(e.to_string()))?;
        let mut mapping = Mapping {
            a_number,
            spec,
            quantity: fields[2].to_string(),
            from: None,
            shift: 0,
            add: 0,
        };
        for option in &fields[3..] {
            let (key, value) = option
                .split_once('=')
                .ok_or_else(|| err(format!("bad option `{option}`")))?;
            let value: i64 = value
                .parse()
                .map_err(|_| err(format!("`{value}` is not an integer")))?;
            match key {
                "from" => mapping.from = Some(value),
                "shift" => mapping.shift = value,
                "add" => mapping.add = value,
                _ => return Err(err(format!("unknown option `{key}`"))),
            }
        }
        out.push(mapping);
    }
    Ok(out)
}

#[derive(Debug)]
pub enum Outcome {
    Checked(MatchReport),
    MissingFixture(String),
    Failed(String),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Checked(r) if r.is_match() => crate::exit::OK,
            Outcome::Checked(_) | Outcome::Failed(_) => crate::exit::FAILURE,
            Outcome::MissingFixture(_) => crate::exit::ENVIRONMENT,
        }
    }
}

fn trimmed(fixture: SequenceFixture, from: Option<i64>) -> SequenceFixture {
    let skip = from.map_or(0, |f| (f - fixture.offset).clamp(0, fixture.terms.len() as i64)) as usize;
    SequenceFixture {
        a_number: fixture.a_number,
        offset: fixture.offset + skip as i64,
        terms: fixture.terms[skip..].to_vec(),
    }
}

/// Compares one mapping with its fixture over `count` terms.
pub fn check(mapping: &Mapping, fixtures: &Path, count: usize, cap: u64) -> Outcome {
    let fixture = match oeis::load_fixture(fixtures, mapping.a_number) {
        Ok(f) => trimmed(f, mapping.from),
        Err(Error::Io { path, message }) => {
            return Outcome::MissingFixture(format!("{path}: {message}"))
        }
        Err(e) => return Outcome::Failed(format!("{}: {e}", mapping.a_number)),
    };
    let generator = parse_spec(&mapping.spec).and_then(|spec| {
        Generator::new(spec, parse_quantity(&mapping.quantity)?, Method::Auto, cap)
    });
    let generator = match generator {
        Ok(g) => g,
        Err(e) => return Outcome::Failed(format!("{}: {e}", mapping.a_number)),
    };
    let report = oeis::compare(
        |i| {
            let x = u64::try_from(i + mapping.shift).map_err(|_| Error::Overflow("index"))?;
            generator.value(x)?.checked_add(mapping.add).ok_or(Error::Overflow("term"))
        },
        &fixture,
        count,
    );
    Outcome::Checked(report)
}

/// Checks every mapping in parallel; results come back in input order.
pub fn check_all(mappings: &[Mapping], fixtures: &Path, count: usize, cap: u64) -> Vec<Outcome> {
    mappings
        .par_iter()
        .map(|m| check(m, fixtures, count, cap))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_list_parses() {
        let m = parse_mappings(BUILTIN).unwrap();
        assert_eq!(m.len(), 20);
        assert_eq!(m[1].to_string(), "A000194 linear:2,0 L from=1");
    }

    #[test]
    fn bad_lines() {
        assert!(parse_mappings("A002024 linear:1,0").is_err());
        assert!(parse_mappings("A002024 linear:1,0 L skip=1").is_err());
        assert!(parse_mappings("X002024 linear:1,0 L").is_err());
        assert!(parse_mappings("A002024 linear:1,0 Q").is_err());
    }
}
