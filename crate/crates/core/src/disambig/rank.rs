use std::cmp::Ordering;

use crate::analyzer::{Analysis, AnalysisSet, Token};

use super::lm::{LmModel, Sym};
use super::rules::{Dropped, FilteredSet};

#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub analysis: Analysis,
    pub score: f64,
}

/// Readings of one token in rank order, plus those the rules removed.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSet {
    pub token: Token,
    pub buck: String,
    pub ranked: Vec<Scored>,
    pub filtered_out: Vec<Dropped>,
    pub unknown: bool,
}

impl RankedSet {
    pub fn top(&self) -> Option<&Analysis> {
        self.ranked.first().map(|s| &s.analysis)
    }

    /// Ranked readings followed by filtered ones.
    pub fn all_analyses(&self) -> impl Iterator<Item = &Analysis> {
        self.ranked
            .iter()
            .map(|s| &s.analysis)
            .chain(self.filtered_out.iter().map(|d| &d.analysis))
    }
}

/// Ranks one sentence left to right. The history for each token is the top
/// reading chosen for the two tokens before it; a token without readings
/// enters the history as unknown.
pub fn rank(sets: &[FilteredSet], model: &LmModel) -> Vec<RankedSet> {
    let mut history = [Sym::Bos, Sym::Bos];
    let mut out = Vec::with_capacity(sets.len());
    for fs in sets {
        let mut scored: Vec<(usize, Scored, u64)> = fs
            .set
            .analyses
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let t = a.lemma_pos();
                let score = model.score(&history, &t);
                let freq = model.freq().count(&t);
                (
                    i,
                    Scored {
                        analysis: a.clone(),
                        score,
                    },
                    freq,
                )
            })
            .collect();
        scored.sort_by(|(ia, a, fa), (ib, b, fb)| {
            b.score
                .total_cmp(&a.score)
                .then(fb.cmp(fa))
                .then(ia.cmp(ib))
        });
        let ranked: Vec<Scored> = scored.into_iter().map(|(_, s, _)| s).collect();
        let next = match ranked.first() {
            Some(s) => Sym::Tuple(s.analysis.lemma_pos()),
            None => Sym::Unknown,
        };
        history = [std::mem::replace(&mut history[1], next.clone()), next];
        out.push(RankedSet {
            token: fs.set.token.clone(),
            buck: fs.set.buck.clone(),
            ranked,
            filtered_out: fs.dropped.clone(),
            unknown: fs.set.unknown,
        });
    }
    out
}

/// Ranks sets that did not go through the rule filter.
pub fn rank_unfiltered(sets: &[AnalysisSet], model: &LmModel) -> Vec<RankedSet> {
    let filtered: Vec<FilteredSet> = sets.iter().cloned().map(FilteredSet::unfiltered).collect();
    rank(&filtered, model)
}

/// Total order on ranked lists used by tests and callers that re-sort.
pub fn is_rank_ordered(set: &RankedSet) -> bool {
    set.ranked
        .windows(2)
        .all(|w| w[0].score.total_cmp(&w[1].score) != Ordering::Less)
}
