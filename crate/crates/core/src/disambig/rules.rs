//! Context rules that drop readings next to a given neighbour.
//!
//! One rule per line:
//!
//! ```text
//! DROP pos=V WHEN prev.lemma=maEa_1
//! DROP lemma=kAtab_* pos=V WHEN next.surface=كتاب
//! ```
//!
//! Target predicates (`pos=`, `lemma=`) must all hold for a reading to be
//! dropped; a lemma ending in `*` matches by prefix. The context names the
//! neighbour at offset -1 (`prev`) or +1 (`next`).

use std::fmt;

use log::info;

use crate::analyzer::{Analysis, AnalysisSet};
use crate::error::{Error, Result};
use crate::pos::PosTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Prev,
    Next,
}

impl Side {
    pub fn offset(self) -> isize {
        match self {
            Side::Prev => -1,
            Side::Next => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ContextTest {
    /// Arabic script, raw transliteration or lookup key of the neighbour.
    Surface(String),
    Lemma(String),
    Pos(PosTag),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TargetTest {
    Pos(PosTag),
    Lemma(String),
}

impl TargetTest {
    fn matches(&self, a: &Analysis) -> bool {
        match self {
            TargetTest::Pos(tag) => a.pos == *tag,
            TargetTest::Lemma(pat) => match pat.strip_suffix('*') {
                Some(prefix) => a.lemma.starts_with(prefix),
                None => a.lemma == *pat,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FilterRule {
    pub target: Vec<TargetTest>,
    pub side: Side,
    pub context: ContextTest,
    /// Line in the rule file, 1-based.
    pub line: usize,
}

impl FilterRule {
    pub fn offset(&self) -> isize {
        self.side.offset()
    }

    pub fn targets(&self, a: &Analysis) -> bool {
        self.target.iter().all(|t| t.matches(a))
    }

    /// Whether the neighbour satisfies the context. Lemma and POS tests
    /// require every reading of the neighbour to agree, so an ambiguous or
    /// unknown neighbour never triggers the rule.
    pub fn context_holds(&self, neighbour: &AnalysisSet) -> bool {
        match &self.context {
            ContextTest::Surface(s) => {
                neighbour.token.surface == *s || neighbour.buck == *s || neighbour.key == *s
            }
            ContextTest::Lemma(l) => {
                !neighbour.analyses.is_empty() && neighbour.analyses.iter().all(|a| a.lemma == *l)
            }
            ContextTest::Pos(p) => {
                !neighbour.analyses.is_empty() && neighbour.analyses.iter().all(|a| a.pos == *p)
            }
        }
    }
}

impl fmt::Display for FilterRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DROP")?;
        for t in &self.target {
            match t {
                TargetTest::Pos(p) => write!(f, " pos={p}")?,
                TargetTest::Lemma(l) => write!(f, " lemma={l}")?,
            }
        }
        let side = match self.side {
            Side::Prev => "prev",
            Side::Next => "next",
        };
        match &self.context {
            ContextTest::Surface(s) => write!(f, " WHEN {side}.surface={s}"),
            ContextTest::Lemma(l) => write!(f, " WHEN {side}.lemma={l}"),
            ContextTest::Pos(p) => write!(f, " WHEN {side}.pos={p}"),
        }
    }
}

fn parse_tag(value: &str, line: usize, source: &str) -> Result<PosTag> {
    PosTag::fold(value).ok_or_else(|| {
        let valid: Vec<_> = PosTag::ALL.iter().map(|t| t.as_str()).collect();
        Error::parse(
            source,
            line,
            format!("expected a POS tag ({}), found {value:?}", valid.join(", ")),
        )
    })
}

fn parse_line(text: &str, line: usize, source: &str) -> Result<FilterRule> {
    let err = |msg: String| Error::parse(source, line, msg);
    let mut words = text.split_whitespace();
    match words.next() {
        Some("DROP") => {}
        Some(w) => return Err(err(format!("expected `DROP`, found {w:?}"))),
        None => return Err(err("expected `DROP`".into())),
    }
    let mut target = Vec::new();
    let mut saw_when = false;
    for w in words.by_ref() {
        if w == "WHEN" {
            saw_when = true;
            break;
        }
        let (key, value) = w.split_once('=').ok_or_else(|| {
            err(format!(
                "expected `pos=TAG`, `lemma=ID` or `WHEN`, found {w:?}"
            ))
        })?;
        if value.is_empty() {
            return Err(err(format!("expected a value after `{key}=`")));
        }
        if key.contains('.') {
            return Err(err(format!("expected `WHEN` before the context {w:?}")));
        }
        target.push(match key {
            "pos" => TargetTest::Pos(parse_tag(value, line, source)?),
            "lemma" => TargetTest::Lemma(value.to_string()),
            _ => {
                return Err(err(format!(
                    "expected `pos` or `lemma` before `=`, found {key:?}"
                )))
            }
        });
    }
    if target.is_empty() {
        return Err(err(
            "expected at least one `pos=` or `lemma=` target after `DROP`".into(),
        ));
    }
    if !saw_when {
        return Err(err("expected `WHEN` after the target".into()));
    }
    let ctx = words.next().ok_or_else(|| {
        err("expected `prev.FIELD=VALUE` or `next.FIELD=VALUE` after `WHEN`".into())
    })?;
    if let Some(extra) = words.next() {
        return Err(err(format!("expected end of line, found {extra:?}")));
    }
    let (lhs, value) = ctx
        .split_once('=')
        .ok_or_else(|| err(format!("expected `=` in context {ctx:?}")))?;
    if value.is_empty() {
        return Err(err(format!("expected a value after `{lhs}=`")));
    }
    let (side, field) = lhs
        .split_once('.')
        .ok_or_else(|| err(format!("expected `prev.` or `next.` in context {lhs:?}")))?;
    let side = match side {
        "prev" => Side::Prev,
        "next" => Side::Next,
        _ => return Err(err(format!("expected `prev` or `next`, found {side:?}"))),
    };
    let context = match field {
        "surface" => ContextTest::Surface(value.to_string()),
        "lemma" => ContextTest::Lemma(value.to_string()),
        "pos" => ContextTest::Pos(parse_tag(value, line, source)?),
        _ => {
            return Err(err(format!(
                "expected `surface`, `lemma` or `pos`, found {field:?}"
            )))
        }
    };
    Ok(FilterRule {
        target,
        side,
        context,
        line,
    })
}

/// Parses a rule file. Blank lines and lines starting with `#` are skipped.
pub fn parse_rules(text: &str, source: &str) -> Result<Vec<FilterRule>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(n, l)| parse_line(l, n, source))
        .collect()
}

/// A reading removed by a rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Dropped {
    pub analysis: Analysis,
    /// Index of the removing rule in the rule list.
    pub rule: usize,
}

/// An analysis set after filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSet {
    /// The token's set with dropped readings removed. `unknown` is never
    /// changed by filtering.
    pub set: AnalysisSet,
    pub dropped: Vec<Dropped>,
    /// Rules that fired but were not applied because they would have left
    /// the token without readings.
    pub suppressed: Vec<usize>,
}

impl FilteredSet {
    pub fn unfiltered(set: AnalysisSet) -> Self {
        FilteredSet {
            set,
            dropped: Vec::new(),
            suppressed: Vec::new(),
        }
    }
}

fn neighbour(sets: &[AnalysisSet], i: usize, offset: isize) -> Option<&AnalysisSet> {
    i.checked_add_signed(offset).and_then(|j| sets.get(j))
}

/// Applies rules to one sentence. Every rule sees the unfiltered neighbours,
/// so the result does not depend on rule order. A rule that would empty a
/// token's set is skipped; if the surviving rules together would still empty
/// it, nothing is dropped from that token.
pub fn apply_rules(sets: &[AnalysisSet], rules: &[FilterRule]) -> Vec<FilteredSet> {
    sets.iter()
        .enumerate()
        .map(|(i, set)| {
            let n = set.analyses.len();
            let mut remove_by: Vec<Option<usize>> = vec![None; n];
            let mut suppressed = Vec::new();
            for (r, rule) in rules.iter().enumerate() {
                let Some(nb) = neighbour(sets, i, rule.offset()) else {
                    continue;
                };
                if !rule.context_holds(nb) {
                    continue;
                }
                let hits: Vec<usize> = (0..n).filter(|&k| rule.targets(&set.analyses[k])).collect();
                if hits.is_empty() {
                    continue;
                }
                if hits.len() == n {
                    info!(
                        "token {} {:?}: rule on line {} would drop every reading; skipped",
                        set.token.index, set.token.surface, rule.line
                    );
                    suppressed.push(r);
                    continue;
                }
                for k in hits {
                    remove_by[k].get_or_insert(r);
                }
            }
            if n > 0 && remove_by.iter().all(Option::is_some) {
                info!(
                    "token {} {:?}: rules together would drop every reading; skipped",
                    set.token.index, set.token.surface
                );
                suppressed.extend(remove_by.iter().flatten().copied());
                suppressed.sort_unstable();
                suppressed.dedup();
                remove_by = vec![None; n];
            }
            let mut kept = Vec::with_capacity(n);
            let mut dropped = Vec::new();
            for (a, by) in set.analyses.iter().zip(&remove_by) {
                match by {
                    Some(rule) => dropped.push(Dropped {
                        analysis: a.clone(),
                        rule: *rule,
                    }),
                    None => kept.push(a.clone()),
                }
            }
            FilteredSet {
                set: AnalysisSet {
                    analyses: kept,
                    ..set.clone()
                },
                dropped,
                suppressed,
            }
        })
        .collect()
}
