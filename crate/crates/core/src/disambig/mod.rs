//! Rule filtering and language-model ranking of candidate readings.

mod lm;
mod rank;
mod rules;

pub use lm::{FreqTable, LmModel, Sym, DEFAULT_LAMBDA};
pub use rank::{is_rank_ordered, rank, rank_unfiltered, RankedSet, Scored};
pub use rules::{
    apply_rules, parse_rules, ContextTest, Dropped, FilterRule, FilteredSet, Side, TargetTest,
};
