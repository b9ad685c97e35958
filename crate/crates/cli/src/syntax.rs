//! Textual forms of partitions, generated quantities and permutation rules.
//!
//! ```text
//! const:3  linear:4,-1  quad:1,0,1  cubic:1,0,0,1  geom:2  gpow:2
//! poly:5  cpoly:5  pyr:5  diag:3,first  diag:3,second  explicit:1,2*10
//! ```

use irrarray_core::{Family, PartitionSpec};

use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn ints(args: &str, expected: usize, kind: &str) -> Result<Vec<i64>, CliError> {
    let values = args
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("{kind}: `{a}` is not an integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != expected {
        return Err(usage(format!(
            "{kind} takes {expected} parameter(s), got {}",
            values.len()
        )));
    }
    Ok(values)
}

/// Parses `v` and `v*k` items into a flat list.
fn explicit_list(args: &str) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for item in args.split(',') {
        let item = item.trim();
        let (value, times) = match item.split_once('*') {
            Some((v, k)) => (v, k.parse::<usize>().map_err(|_| usage(format!("bad repeat count in `{item}`")))?),
            None => (item, 1),
        };
        let value = value
            .parse::<i64>()
            .map_err(|_| usage(format!("explicit: `{item}` is not an integer")))?;
        if out.len() + times > 10_000_000 {
            return Err(usage("explicit list too long"));
        }
        out.extend(std::iter::repeat_n(value, times));
    }
    Ok(out)
}

pub fn parse_spec(text: &str) -> Result<PartitionSpec, CliError> {
    let (kind, args) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("`{text}`: expected <family>:<parameters>")))?;
    let family = match kind {
        "const" => Family::Constant { p0: ints(args, 1, kind)?[0] },
        "linear" => {
            let v = ints(args, 2, kind)?;
            Family::Linear { p1: v[0], p0: v[1] }
        }
        "quad" => {
            let v = ints(args, 3, kind)?;
            Family::Quadratic { p2: v[0], p1: v[1], p0: v[2] }
        }
        "cubic" => {
            let v = ints(args, 4, kind)?;
            Family::Cubic { p3: v[0], p2: v[1], p1: v[2], p0: v[3] }
        }
        "geom" => Family::Geometric { m: ints(args, 1, kind)?[0] },
        "gpow" => Family::GeometricPowers { m: ints(args, 1, kind)?[0] },
        "poly" => Family::Polygonal { m: ints(args, 1, kind)?[0] },
        "cpoly" => Family::CenteredPolygonal { m: ints(args, 1, kind)?[0] },
        "pyr" => Family::Pyramidal { m: ints(args, 1, kind)?[0] },
        "diag" => {
            let (d, start) = args
                .split_once(',')
                .ok_or_else(|| usage("diag takes d,first or d,second"))?;
            let d = ints(d, 1, kind)?[0];
            let start_first = match start.trim() {
                "first" => true,
                "second" => false,
                other => return Err(usage(format!("diag: expected first or second, got `{other}`"))),
            };
            Family::MergedDiagonals { d, start_first }
        }
        "explicit" => Family::Explicit(explicit_list(args)?),
        other => return Err(usage(format!("unknown partition family `{other}`"))),
    };
    PartitionSpec::new(family).map_err(|e| usage(format!("`{text}`: {e}")))
}

/// Canonical text of a partition; `parse_spec` reads it back.
pub fn format_spec(spec: &PartitionSpec) -> String {
    match spec.family() {
        Family::Constant { p0 } => format!("const:{p0}"),
        Family::Linear { p1, p0 } => format!("linear:{p1},{p0}"),
        Family::Quadratic { p2, p1, p0 } => format!("quad:{p2},{p1},{p0}"),
        Family::Cubic { p3, p2, p1, p0 } => format!("cubic:{p3},{p2},{p1},{p0}"),
        Family::Geometric { m } => format!("geom:{m}"),
        Family::GeometricPowers { m } => format!("gpow:{m}"),
        Family::Polygonal { m } => format!("poly:{m}"),
        Family::CenteredPolygonal { m } => format!("cpoly:{m}"),
        Family::Pyramidal { m } => format!("pyr:{m}"),
        Family::MergedDiagonals { d, start_first } => {
            format!("diag:{d},{}", if *start_first { "first" } else { "second" })
        }
        Family::Explicit(list) => {
            let mut items = Vec::new();
            let mut i = 0;
            while i < list.len() {
                let run = list[i..].iter().take_while(|&&v| v == list[i]).count();
                items.push(if run > 1 {
                    format!("{}*{run}", list[i])
                } else {
                    list[i].to_string()
                });
                i += run;
            }
            format!("explicit:{}", items.join(","))
        }
    }
}

/// A permutation rule as written on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleSyntax {
    Identity,
    Reversal,
    HalfShuffle,
    Rotation,
    /// One-line images per block, blocks separated by `/`.
    Images(Vec<Vec<u64>>),
    /// Cycles per block, e.g. `(1,3,2)/(1,3,2)(5,7)`; `()` fixes a block.
    Cycles(Vec<Vec<Vec<u64>>>),
}

fn u64_list(text: &str) -> Result<Vec<u64>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|v| v.trim().parse::<u64>().map_err(|_| usage(format!("`{v}` is not a positive integer"))))
        .collect()
}

fn parse_cycles(block: &str) -> Result<Vec<Vec<u64>>, CliError> {
    let mut cycles = Vec::new();
    let mut rest = block.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| usage(format!("bad cycle notation `{block}`")))?;
        let cycle = u64_list(inner.0)?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = inner.1.trim();
    }
    Ok(cycles)
}

pub fn parse_rule(text: &str) -> Result<RuleSyntax, CliError> {
    Ok(match text {
        "identity" => RuleSyntax::Identity,
        "reversal" => RuleSyntax::Reversal,
        "half-shuffle" => RuleSyntax::HalfShuffle,
        "rotation" => RuleSyntax::Rotation,
        _ => {
            if let Some(blocks) = text.strip_prefix("images:") {
                RuleSyntax::Images(blocks.split('/').map(u64_list).collect::<Result<_, _>>()?)
            } else if let Some(blocks) = text.strip_prefix("cycles:") {
                RuleSyntax::Cycles(blocks.split('/').map(parse_cycles).collect::<Result<_, _>>()?)
            } else {
                return Err(usage(format!(
                    "unknown rule `{text}` (identity, reversal, half-shuffle, rotation, images:..., cycles:...)"
                )));
            }
        }
    })
}

/// What `gen` emits for each index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantity {
    /// Block number `L(n)`.
    Block,
    /// `R(n)`.
    Left,
    /// `R'(n)`.
    Right,
    /// `B(s)`, indexed by block.
    PartialSum,
    /// `b_s`, indexed by block.
    Length,
    Perm(RuleSyntax),
    Reluctant { q: u64, reversed: bool },
}

impl Quantity {
    /// Whether the index is a block number rather than an array index.
    pub fn indexed_by_block(&self) -> bool {
        matches!(self, Quantity::PartialSum | Quantity::Length)
    }
}

pub fn parse_quantity(text: &str) -> Result<Quantity, CliError> {
    Ok(match text {
        "L" => Quantity::Block,
        "R" => Quantity::Left,
        "R'" | "Rp" => Quantity::Right,
        "B" => Quantity::PartialSum,
        "b" => Quantity::Length,
        _ => {
            if let Some(rule) = text.strip_prefix("perm:") {
                Quantity::Perm(parse_rule(rule)?)
            } else if let Some(args) = text.strip_prefix("reluctant:") {
                let (q, reversed) = match args.split_once(',') {
                    Some((q, "rev")) => (q, true),
                    Some((_, other)) => return Err(usage(format!("reluctant: expected `rev`, got `{other}`"))),
                    None => (args, false),
                };
                let q = q
                    .parse::<u64>()
                    .ok()
                    .filter(|&q| q >= 1)
                    .ok_or_else(|| usage(format!("reluctant: `{q}` is not a count >= 1")))?;
                Quantity::Reluctant { q, reversed }
            } else {
                return Err(usage(format!(
                    "unknown quantity `{text}` (L, R, R', B, b, perm:<rule>, reluctant:<q>[,rev])"
                )));
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_roundtrip() {
        for text in [
            "const:3",
            "linear:4,-1",
            "quad:1,0,1",
            "cubic:1,0,0,1",
            "geom:2",
            "gpow:3",
            "poly:5",
            "cpoly:5",
            "pyr:5",
            "diag:3,first",
            "diag:3,second",
            "explicit:3,7,11",
            "explicit:1,2*10,5",
        ] {
            let spec = parse_spec(text).unwrap();
            assert_eq!(format_spec(&spec), text);
            assert_eq!(parse_spec(&format_spec(&spec)).unwrap(), spec);
        }
        let spec = parse_spec("explicit:2,2,2, 1").unwrap();
        assert_eq!(format_spec(&spec), "explicit:2*3,1");
    }

    #[test]
    fn bad_specs() {
        for text in ["const", "const:0", "linear:1", "linear:1,-5", "diag:2,third", "wat:1", "explicit:3,0"] {
            assert!(matches!(parse_spec(text), Err(CliError::Usage(_))), "{text}");
        }
    }

    #[test]
    fn quantities() {
        assert_eq!(parse_quantity("R'").unwrap(), Quantity::Right);
        assert_eq!(
            parse_quantity("reluctant:3,rev").unwrap(),
            Quantity::Reluctant { q: 3, reversed: true }
        );
        assert_eq!(
            parse_quantity("perm:cycles:(1,3,2)/()(5,7)").unwrap(),
            Quantity::Perm(RuleSyntax::Cycles(vec![vec![vec![1, 3, 2]], vec![vec![5, 7]]]))
        );
        assert_eq!(
            parse_quantity("perm:images:2,3,1").unwrap(),
            Quantity::Perm(RuleSyntax::Images(vec![vec![2, 3, 1]]))
        );
        assert!(parse_quantity("reluctant:0").is_err());
        assert!(parse_quantity("perm:shuffle").is_err());
    }
}
