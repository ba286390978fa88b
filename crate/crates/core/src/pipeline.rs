//! Text in, ranked readings out: tokenize, analyze, filter, rank.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::ops::Range;

use crate::analyzer::{sentences, tokenize, Analyzer, CacheStats, TypeCache};
use crate::disambig::{apply_rules, rank, FilterRule, LmModel, RankedSet};
use crate::lexicon::{FlagSet, Lexicon};
use crate::teixml::{TeiDoc, TeiMeta, UNKNOWN_ANA};
use crate::translit::Translit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub tokens: usize,
    pub types: usize,
    pub unknown: usize,
    pub cache: CacheStats,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} tokens, {} types, {} unknown, cache hit rate {:.1}%",
            self.tokens,
            self.types,
            self.unknown,
            100.0 * self.cache.hit_rate()
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub ranked: Vec<RankedSet>,
    /// Token ranges of each sentence.
    pub sentences: Vec<Range<usize>>,
    pub summary: Summary,
}

impl Output {
    pub fn to_tei(&self, meta: TeiMeta) -> TeiDoc {
        TeiDoc::from_ranked(&self.ranked, meta)
    }

    /// One line per reading: surface, rank (`-` for dropped readings),
    /// `voc/lemma/pos`, score, and the rule line that dropped it. Sentences
    /// are separated by a blank line.
    pub fn to_tsv(&self, rules: &[FilterRule]) -> String {
        let mut out = String::from("# surface\trank\tanalysis\tscore\tdropped_by\n");
        for (k, range) in self.sentences.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            for r in &self.ranked[range.clone()] {
                let surface = &r.token.surface;
                if r.unknown {
                    let _ = writeln!(out, "{surface}\t-\t{UNKNOWN_ANA}\t-\t-");
                }
                for (i, s) in r.ranked.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{surface}\t{}\t{}\t{:.6e}\t-",
                        i + 1,
                        s.analysis.ana(),
                        s.score
                    );
                }
                for d in &r.filtered_out {
                    let line = rules.get(d.rule).map_or(0, |x| x.line);
                    let _ = writeln!(out, "{surface}\t-\t{}\t-\trule@{line}", d.analysis.ana());
                }
            }
        }
        out
    }
}

/// Analyzer, rules and model for one configuration.
#[derive(Debug, Clone)]
pub struct Pipeline<'a> {
    analyzer: Analyzer<'a>,
    rules: Vec<FilterRule>,
    model: LmModel,
}

impl<'a> Pipeline<'a> {
    pub fn new(lex: &'a Lexicon, active: FlagSet, rules: Vec<FilterRule>, model: LmModel) -> Self {
        Pipeline {
            analyzer: Analyzer::new(lex, active),
            rules,
            model,
        }
    }

    pub fn fold_alif(mut self, fold: bool) -> Self {
        self.analyzer = self.analyzer.fold_alif(fold);
        self
    }

    pub fn with_translit(mut self, translit: &'a Translit) -> Self {
        self.analyzer = self.analyzer.with_translit(translit);
        self
    }

    pub fn rules(&self) -> &[FilterRule] {
        &self.rules
    }

    pub fn model(&self) -> &LmModel {
        &self.model
    }

    pub fn active(&self) -> FlagSet {
        self.analyzer.active()
    }

    pub fn run(&self, text: &str) -> Output {
        let tokens = tokenize(text);
        let bounds = sentences(text, &tokens);
        let cache = TypeCache::new();
        let sets = self.analyzer.analyze_text(&tokens, &cache);
        let mut ranked = Vec::with_capacity(sets.len());
        for range in &bounds {
            let filtered = apply_rules(&sets[range.clone()], &self.rules);
            ranked.extend(rank(&filtered, &self.model));
        }
        let types: HashSet<&str> = sets.iter().map(|s| s.key.as_str()).collect();
        let summary = Summary {
            tokens: tokens.len(),
            types: types.len(),
            unknown: sets.iter().filter(|s| s.unknown).count(),
            cache: cache.stats(),
        };
        Output {
            ranked,
            sentences: bounds,
            summary,
        }
    }
}
