//! Tokenization and lexicon-driven analysis of word types.
//!
//! A word is analyzed by trying every prefix/stem/suffix split of its
//! unvocalized Buckwalter form, looking each part up in the matching lexicon
//! under the active flags, and keeping the combinations the compatibility
//! tables license.

mod cache;
mod segment;
mod tokenize;

use std::borrow::Cow;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::lexicon::{EntryKind, FlagSet, LexEntry, Lexicon};
use crate::pos::{LemmaPos, PosTag};
use crate::translit::{lookup_key, Translit};

pub use cache::{CacheStats, TypeCache};
pub use segment::{segmentations, segmentations_capped, Split, MAX_PREFIX_CHARS, MAX_SUFFIX_CHARS};
pub use tokenize::{is_word_char, sentences, tokenize, Token};

/// One reading of a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Analysis {
    /// Vocalized form with `+` between non-empty segments, e.g. `Al+kitAb`.
    pub voc: String,
    pub lemma: String,
    pub pos: PosTag,
    /// Full POS annotation of the segments, e.g. `Al/DET+kitAb/Ndu`.
    pub pos_detail: String,
    pub gloss: String,
    /// Prefix, stem and suffix entries.
    pub parts: [Arc<LexEntry>; 3],
}

impl Analysis {
    pub fn from_parts(
        prefix: &Arc<LexEntry>,
        stem: &Arc<LexEntry>,
        suffix: &Arc<LexEntry>,
    ) -> Option<Analysis> {
        let pos = stem.primary_tag()?;
        let parts = [Arc::clone(prefix), Arc::clone(stem), Arc::clone(suffix)];
        let join = |f: fn(&LexEntry) -> &str| {
            parts
                .iter()
                .map(|p| f(p))
                .filter(|s| !s.is_empty())
                .collect::<Vec<_>>()
                .join("+")
        };
        Some(Analysis {
            voc: join(|e| &e.voc),
            lemma: stem.lemma.clone(),
            pos,
            pos_detail: join(|e| &e.pos),
            gloss: join(|e| &e.gloss),
            parts,
        })
    }

    /// `voc/lemma/pos`, the form used in TEI `ana` attributes.
    pub fn ana(&self) -> String {
        format!("{}/{}/{}", self.voc, self.lemma, self.pos)
    }

    pub fn lemma_pos(&self) -> LemmaPos {
        LemmaPos::new(self.lemma.clone(), self.pos)
    }

    fn dedup_key(&self) -> (String, String, PosTag) {
        (self.voc.clone(), self.lemma.clone(), self.pos)
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ana())
    }
}

/// All readings found for one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisSet {
    pub token: Token,
    /// Buckwalter transliteration of the token as written.
    pub buck: String,
    /// Normalized key the lexicon was searched with.
    pub key: String,
    pub analyses: Vec<Analysis>,
    pub unknown: bool,
}

impl AnalysisSet {
    pub fn new(token: Token, buck: String, key: String, analyses: Vec<Analysis>) -> Self {
        let unknown = analyses.is_empty();
        AnalysisSet {
            token,
            buck,
            key,
            analyses,
            unknown,
        }
    }
}

/// Analyzes one unvocalized type. An empty result means the word is unknown.
pub fn analyze_type(surface: &str, lex: &Lexicon, active: FlagSet) -> Vec<Analysis> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    if surface.is_empty() {
        return out;
    }
    for split in segmentations(surface) {
        let prefixes = lex.lookup(split.prefix, EntryKind::Prefix, active);
        if prefixes.is_empty() {
            continue;
        }
        let stems = lex.lookup(split.stem, EntryKind::Stem, active);
        if stems.is_empty() {
            continue;
        }
        let suffixes = lex.lookup(split.suffix, EntryKind::Suffix, active);
        for p in &prefixes {
            for s in &stems {
                for x in &suffixes {
                    if !lex.compat().compatible(&p.cat, &s.cat, &x.cat) {
                        continue;
                    }
                    if let Some(a) = Analysis::from_parts(p, s, x) {
                        if seen.insert(a.dedup_key()) {
                            out.push(a);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Analysis configuration: lexicon, active flags, transliteration table and
/// input normalization.
#[derive(Debug, Clone)]
pub struct Analyzer<'a> {
    base: &'a Lexicon,
    lex: Cow<'a, Lexicon>,
    translit: &'a Translit,
    active: FlagSet,
    fold_alif: bool,
}

impl<'a> Analyzer<'a> {
    pub fn new(lex: &'a Lexicon, active: FlagSet) -> Self {
        Analyzer {
            base: lex,
            lex: Cow::Borrowed(lex),
            translit: Translit::standard(),
            active,
            fold_alif: false,
        }
    }

    pub fn with_translit(mut self, translit: &'a Translit) -> Self {
        self.translit = translit;
        self
    }

    /// Folds alif variants to bare `A` on both the input and the lexicon
    /// keys, so hamza-less spellings find hamzated entries.
    pub fn fold_alif(mut self, fold: bool) -> Self {
        if fold != self.fold_alif {
            self.lex = if fold {
                Cow::Owned(self.base.with_folded_keys())
            } else {
                Cow::Borrowed(self.base)
            };
        }
        self.fold_alif = fold;
        self
    }

    pub fn active(&self) -> FlagSet {
        self.active
    }

    pub fn translit(&self) -> &Translit {
        self.translit
    }

    /// Transliteration and lookup key for an Arabic-script word.
    pub fn key_of(&self, surface: &str) -> (String, String) {
        let buck = self.translit.to_buckwalter(surface).text;
        let key = lookup_key(&buck, self.fold_alif);
        (buck, key)
    }

    pub fn analyze_token(&self, token: &Token, cache: &TypeCache) -> AnalysisSet {
        let (buck, key) = self.key_of(&token.surface);
        let analyses = cache.get_or_compute(&key, self.active, || {
            analyze_type(&key, &self.lex, self.active)
        });
        AnalysisSet::new(token.clone(), buck, key, analyses.as_ref().clone())
    }

    pub fn analyze_text(&self, tokens: &[Token], cache: &TypeCache) -> Vec<AnalysisSet> {
        tokens
            .iter()
            .map(|t| self.analyze_token(t, cache))
            .collect()
    }
}

/// Analyzes tokens with the standard transliteration table, serving
/// repeated types from `cache`.
pub fn analyze_text(
    tokens: &[Token],
    lex: &Lexicon,
    active: FlagSet,
    cache: &TypeCache,
) -> Vec<AnalysisSet> {
    Analyzer::new(lex, active).analyze_text(tokens, cache)
}
