//! Evaluation of a quantity over a range of indices.

use std::sync::Arc;

use irrarray_core::closed_forms::ClosedForm;
use irrarray_core::perm::cycles_to_images;
use irrarray_core::reluctant::Naturals;
use irrarray_core::{
    Error, IntraBlockPermutation, PartialSumTable, PartitionSpec, Position, ReluctantSpec, Rule,
};
use rayon::prelude::*;

use crate::syntax::{Quantity, RuleSyntax};
use crate::CliError;

/// Terms evaluated per parallel shard.
const SHARD: usize = 4096;

/// How block positions are found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Method {
    /// Closed form where one exists, search otherwise.
    #[default]
    Auto,
    Oracle,
    Closed,
}

/// One emitted term and the row it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub index: u64,
    pub value: i64,
    /// Row for grouping output, `None` for block-indexed quantities.
    pub row: Option<u64>,
}

pub struct Generator {
    table: Arc<PartialSumTable>,
    closed: Option<ClosedForm>,
    quantity: Quantity,
    perm: Option<IntraBlockPermutation>,
    reluctant: Option<ReluctantSpec>,
}

fn build_rule(rule: &RuleSyntax, table: &PartialSumTable) -> Result<Rule, CliError> {
    Ok(match rule {
        RuleSyntax::Identity => Rule::Identity,
        RuleSyntax::Reversal => Rule::Reversal,
        RuleSyntax::HalfShuffle => Rule::HalfShuffle,
        RuleSyntax::Rotation => Rule::Rotation,
        RuleSyntax::Images(blocks) => Rule::ExplicitBlocks(blocks.clone()),
        RuleSyntax::Cycles(blocks) => Rule::ExplicitBlocks(
            blocks
                .iter()
                .enumerate()
                .map(|(k, cycles)| cycles_to_images(table.block_length(k as u64 + 1)?, cycles))
                .collect::<Result<_, Error>>()?,
        ),
    })
}

/// Permutation over `spec` described by `rule`.
pub fn permutation(
    spec: PartitionSpec,
    rule: &RuleSyntax,
    cap: u64,
) -> Result<IntraBlockPermutation, CliError> {
    let table = Arc::new(PartialSumTable::new(spec));
    let rule = build_rule(rule, &table)?;
    Ok(IntraBlockPermutation::with_table(table, rule)?.with_block_cap(cap))
}

impl Generator {
    pub fn new(
        spec: PartitionSpec,
        quantity: Quantity,
        method: Method,
        cap: u64,
    ) -> Result<Self, CliError> {
        let closed = match method {
            Method::Oracle => None,
            Method::Auto => ClosedForm::for_spec(&spec),
            Method::Closed => Some(ClosedForm::for_spec(&spec).ok_or_else(|| {
                CliError::Usage("explicit partitions have no closed form".into())
            })?),
        };
        let table = Arc::new(PartialSumTable::new(spec));
        let perm = match &quantity {
            Quantity::Perm(rule) => Some(
                IntraBlockPermutation::with_table(table.clone(), build_rule(rule, &table)?)?
                    .with_block_cap(cap),
            ),
            _ => None,
        };
        let reluctant = match quantity {
            Quantity::Reluctant { q, reversed } => Some(
                ReluctantSpec::with_table(Arc::new(Naturals), table.clone(), q, reversed)?
                    .with_row_cap(cap),
            ),
            _ => None,
        };
        Ok(Generator {
            table,
            closed,
            quantity,
            perm,
            reluctant,
        })
    }

    pub fn table(&self) -> &PartialSumTable {
        &self.table
    }

    fn position(&self, n: u64) -> Result<Position, Error> {
        match &self.closed {
            Some(cf) => cf.locate(n).map(|(_, p)| p),
            None => self.table.locate(n),
        }
    }

    /// Value and row of index `x`.
    pub fn term(&self, x: u64) -> Result<Term, Error> {
        let signed = |v: u64| i64::try_from(v).map_err(|_| Error::Overflow("term"));
        let (value, row) = match &self.quantity {
            Quantity::Block | Quantity::Left | Quantity::Right => {
                let p = self.position(x)?;
                let v = match self.quantity {
                    Quantity::Block => p.block,
                    Quantity::Left => p.left,
                    _ => p.right,
                };
                (signed(v)?, Some(p.block))
            }
            Quantity::PartialSum => (signed(self.table.partial_sum(x)?)?, None),
            Quantity::Length => (signed(self.table.block_length(x)?)?, None),
            Quantity::Perm(_) => {
                let p = self.perm.as_ref().expect("permutation built");
                (signed(p.term(x)?)?, Some(self.position(x)?.block))
            }
            Quantity::Reluctant { .. } => {
                let r = self.reluctant.as_ref().expect("reluctant built");
                let (pos, _) = r.source_index(x)?;
                (r.omega(x)?, Some(pos.block))
            }
        };
        Ok(Term {
            index: x,
            value,
            row,
        })
    }

    pub fn value(&self, x: u64) -> Result<i64, Error> {
        self.term(x).map(|t| t.value)
    }

    /// Terms for `start .. start + count`, computed in parallel shards and
    /// returned in order.
    pub fn terms(&self, start: u64, count: u64) -> Result<Vec<Term>, Error> {
        let end = start.checked_add(count).ok_or(Error::Overflow("index range"))?;
        let indices: Vec<u64> = (start..end).collect();
        let shards: Vec<Result<Vec<Term>, Error>> = indices
            .par_chunks(SHARD)
            .map(|chunk| chunk.iter().map(|&x| self.term(x)).collect())
            .collect();
        let mut out = Vec::with_capacity(count as usize);
        for shard in shards {
            out.extend(shard?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_quantity, parse_spec};

    fn values(spec: &str, what: &str, count: u64) -> Vec<i64> {
        let g = Generator::new(
            parse_spec(spec).unwrap(),
            parse_quantity(what).unwrap(),
            Method::Auto,
            1_000_000,
        )
        .unwrap();
        g.terms(1, count).unwrap().iter().map(|t| t.value).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(values("diag:2,first", "L", 10), [1, 1, 1, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(values("diag:2,first", "perm:reversal", 10), [3, 2, 1, 10, 9, 8, 7, 6, 5, 4]);
        assert_eq!(values("const:2", "reluctant:3", 6), [1, 2, 1, 2, 1, 2]);
        assert_eq!(values("linear:4,-1", "B", 3), [3, 10, 21]);
        assert_eq!(values("geom:2", "b", 4), [1, 2, 4, 8]);
        assert_eq!(values("linear:4,-1", "perm:cycles:(1,3,2)", 4), [3, 1, 2, 4]);
    }

    #[test]
    fn oracle_and_closed_agree() {
        let gen = |m| {
            Generator::new(parse_spec("quad:1,0,1").unwrap(), Quantity::Right, m, 100).unwrap()
        };
        let a = gen(Method::Oracle).terms(1, 20_000).unwrap();
        let b = gen(Method::Closed).terms(1, 20_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn closed_needs_parametric_partition() {
        let r = Generator::new(parse_spec("explicit:1,2").unwrap(), Quantity::Block, Method::Closed, 10);
        assert!(matches!(r, Err(CliError::Usage(_))));
    }
}
