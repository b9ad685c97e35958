//! OEIS b-files: parsing, vendored fixtures, term-by-term comparison and an
//! optional HTTP fetcher.
//!
//! A b-file lists one `index value` pair per line; lines starting with `#`
//! and blank lines are ignored, and indices must be consecutive.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Public OEIS server.
pub const DEFAULT_ENDPOINT: &str = "https://oeis.org";

/// Environment variable overriding the fetch endpoint.
pub const ENDPOINT_ENV: &str = "OEIS_ENDPOINT";

/// An OEIS identifier such as `A002024`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ANumber(u32);

impl ANumber {
    pub fn new(number: u32) -> Result<Self> {
        if number > 999_999 {
            return Err(Error::domain(format!("A-number {number} has more than six digits")));
        }
        Ok(ANumber(number))
    }

    pub fn number(self) -> u32 {
        self.0
    }

    /// `b002024.txt`.
    pub fn bfile_name(self) -> String {
        format!("b{:06}.txt", self.0)
    }

    /// `A002024.txt`, the vendored fixture name.
    pub fn fixture_name(self) -> String {
        format!("{self}.txt")
    }
}

impl fmt::Display for ANumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{:06}", self.0)
    }
}

impl FromStr for ANumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .strip_prefix('A')
            .or_else(|| s.strip_prefix('a'))
            .filter(|d| d.len() == 6 && d.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| Error::domain(format!("`{s}` is not an A-number (A + six digits)")))?;
        Ok(ANumber(digits.parse().expect("six digits")))
    }
}

/// A contiguous run of terms starting at `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFixture {
    pub a_number: Option<ANumber>,
    pub offset: i64,
    pub terms: Vec<i64>,
}

impl SequenceFixture {
    /// Term at sequence index `index`, if present.
    pub fn get(&self, index: i64) -> Option<i64> {
        let i = index.checked_sub(self.offset)?;
        usize::try_from(i).ok().and_then(|i| self.terms.get(i)).copied()
    }

    /// Last index present.
    pub fn last_index(&self) -> i64 {
        self.offset + self.terms.len() as i64 - 1
    }
}

/// Parses b-file text. The fixture carries no A-number; see
/// [`load_fixture`].
pub fn parse_bfile(text: &str) -> Result<SequenceFixture> {
    let mut offset = None;
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut fields = body.split_whitespace();
        let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Format {
                line,
                message: format!("expected `index value`, got `{body}`"),
            });
        };
        let parse = |field: &str, what: &str| {
            field.parse::<i64>().map_err(|e| Error::Format {
                line,
                message: format!("bad {what} `{field}`: {e}"),
            })
        };
        let index = parse(index, "index")?;
        let value = parse(value, "value")?;
        match offset {
            None => offset = Some(index),
            Some(first) => {
                let expected = first + terms.len() as i64;
                if index != expected {
                    return Err(Error::Gap {
                        line,
                        expected,
                        found: index,
                    });
                }
            }
        }
        terms.push(value);
    }
    let offset = offset.ok_or(Error::Format {
        line: text.lines().count().max(1),
        message: "no terms".into(),
    })?;
    Ok(SequenceFixture {
        a_number: None,
        offset,
        terms,
    })
}

/// Path of the vendored fixture for `a` under `dir`.
pub fn fixture_path(dir: &Path, a: ANumber) -> PathBuf {
    dir.join(a.fixture_name())
}

/// Reads and parses `dir/Axxxxxx.txt`.
pub fn load_fixture(dir: &Path, a: ANumber) -> Result<SequenceFixture> {
    let path = fixture_path(dir, a);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut fixture = parse_bfile(&text)?;
    fixture.a_number = Some(a);
    Ok(fixture)
}

/// First disagreement between a generator and a fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub index: i64,
    pub expected: i64,
    /// `None` when the generator failed at this index.
    pub found: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchReport {
    pub a_number: Option<ANumber>,
    pub compared: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl MatchReport {
    pub fn is_match(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl fmt::Display for MatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.a_number.map_or("sequence".to_string(), |a| a.to_string());
        match &self.first_mismatch {
            None => write!(f, "{name}: match ({} terms)", self.compared),
            Some(m) => {
                let found = m.found.map_or("error".to_string(), |v| v.to_string());
                write!(
                    f,
                    "{name}: mismatch at index {} (expected {}, got {found})",
                    m.index, m.expected
                )
            }
        }
    }
}

/// Compares `generator(index)` with the fixture for the first `count` terms
/// from the fixture's offset (fewer if the fixture is shorter).
pub fn compare(
    generator: impl Fn(i64) -> Result<i64>,
    fixture: &SequenceFixture,
    count: usize,
) -> MatchReport {
    let count = count.min(fixture.terms.len());
    let first_mismatch = fixture.terms[..count]
        .iter()
        .enumerate()
        .find_map(|(i, &expected)| {
            let index = fixture.offset + i as i64;
            let found = generator(index).ok();
            (found != Some(expected)).then_some(Mismatch {
                index,
                expected,
                found,
            })
        });
    MatchReport {
        a_number: fixture.a_number,
        compared: count,
        first_mismatch,
    }
}

/// `<endpoint>/Axxxxxx/bxxxxxx.txt`.
pub fn bfile_url(endpoint: &str, a: ANumber) -> String {
    format!("{}/{a}/{}", endpoint.trim_end_matches('/'), a.bfile_name())
}

/// The endpoint from `OEIS_ENDPOINT`, else the public server.
pub fn default_endpoint() -> String {
    std::env::var(ENDPOINT_ENV).unwrap_or_else(|_| DEFAULT_ENDPOINT.to_string())
}

/// Downloads the published b-file for `a`.
#[cfg(feature = "fetch")]
pub fn fetch_bfile(a: ANumber, endpoint: &str, timeout: std::time::Duration) -> Result<String> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(timeout))
        .http_status_as_error(false)
        .build()
        .into();
    let mut response = agent
        .get(&bfile_url(endpoint, a))
        .call()
        .map_err(|e| Error::Network(e.to_string()))?;
    let status = response.status().as_u16();
    if !(200..300).contains(&status) {
        return Err(Error::HttpStatus(status));
    }
    response
        .body_mut()
        .read_to_string()
        .map_err(|e| Error::Network(e.to_string()))
}
