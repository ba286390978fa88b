//! Unknown-word rates and precision/recall against a gold corpus.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::disambig::RankedSet;
use crate::error::{Error, Result};
use crate::lexicon::FlagSet;
use crate::pos::{LemmaPos, PosTag};
use crate::teixml::{split_ana, TeiDoc};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldToken {
    pub surface: String,
    /// `voc/lemma/pos`.
    pub gold: String,
    /// Canonical flag name of the text's genre.
    pub genre: String,
}

impl GoldToken {
    pub fn lemma_pos(&self) -> LemmaPos {
        let (_, lemma, pos) = split_ana(&self.gold).expect("validated when the corpus was read");
        LemmaPos::new(lemma, pos)
    }
}

/// Reads `surface<TAB>voc/lemma/pos<TAB>genre` rows; a blank line ends a
/// sentence. Lines starting with `#` are skipped.
pub fn read_gold(text: &str, source: &str) -> Result<Vec<Vec<GoldToken>>> {
    let mut sentences = vec![Vec::new()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let err = |msg: String| Error::parse(source, i + 1, msg);
        if line.trim().is_empty() {
            if !sentences.last().is_some_and(Vec::is_empty) {
                sentences.push(Vec::new());
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [surface, gold, genre] = fields[..] else {
            return Err(err(format!(
                "expected surface<TAB>voc/lemma/pos<TAB>genre, found {} fields",
                fields.len()
            )));
        };
        if surface.trim().is_empty() {
            return Err(err("empty surface".into()));
        }
        if split_ana(gold.trim()).is_none() {
            return Err(err(format!("gold analysis {gold:?} is not voc/lemma/pos")));
        }
        let flag = FlagSet::parse_list(genre).map_err(|e| err(e.to_string()))?;
        if flag.bits().count_ones() != 1 {
            return Err(err(format!(
                "genre must name exactly one flag, found {genre:?}"
            )));
        }
        sentences.last_mut().expect("never empty").push(GoldToken {
            surface: surface.trim().to_string(),
            gold: gold.trim().to_string(),
            genre: flag.to_string(),
        });
    }
    if sentences.last().is_some_and(Vec::is_empty) {
        sentences.pop();
    }
    Ok(sentences)
}

/// One token of system output: readings in rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemToken {
    pub surface: String,
    pub readings: Vec<LemmaPos>,
}

impl SystemToken {
    pub fn unknown(&self) -> bool {
        self.readings.is_empty()
    }
}

pub fn system_from_ranked(ranked: &[RankedSet]) -> Vec<SystemToken> {
    ranked
        .iter()
        .map(|r| SystemToken {
            surface: r.token.surface.clone(),
            readings: r.ranked.iter().map(|s| s.analysis.lemma_pos()).collect(),
        })
        .collect()
}

/// The word's reading first, then its notes.
pub fn system_from_tei(doc: &TeiDoc) -> Vec<SystemToken> {
    doc.words
        .iter()
        .map(|w| SystemToken {
            surface: w.surface.clone(),
            readings: w
                .readings()
                .filter_map(split_ana)
                .map(|(_, lemma, pos)| LemmaPos::new(lemma, pos))
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Only the first reading counts.
    TopRanked,
    /// Any reading counts.
    Any,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::TopRanked => "top-ranked",
            Mode::Any => "any",
        }
    }
}

/// Harmonic mean; 0 when both inputs are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

fn pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub error_rate: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub total: usize,
    pub analyzed: usize,
    pub matches: usize,
    /// Tokens whose gold reading the lexicon can produce.
    pub covered: usize,
    pub covered_matches: usize,
}

fn check_aligned(system: &[SystemToken], gold: &[GoldToken]) -> Result<()> {
    if system.len() != gold.len() {
        return Err(Error::Eval(format!(
            "system output has {} tokens, gold has {}",
            system.len(),
            gold.len()
        )));
    }
    if let Some((i, (s, g))) = system
        .iter()
        .zip(gold)
        .enumerate()
        .find(|(_, (s, g))| s.surface != g.surface)
    {
        return Err(Error::Eval(format!(
            "token {i}: system has {:?}, gold has {:?}",
            s.surface, g.surface
        )));
    }
    Ok(())
}

/// Matching is on (lemma, tag); vocalization is ignored. Precision is over
/// analyzed tokens, recall over tokens whose gold reading is in
/// `inventory`, and the error rate over all tokens.
pub fn prf(
    system: &[SystemToken],
    gold: &[GoldToken],
    inventory: &HashSet<(String, PosTag)>,
    mode: Mode,
) -> Result<Scores> {
    check_aligned(system, gold)?;
    let mut s = Scores {
        error_rate: 0.0,
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
        total: gold.len(),
        analyzed: 0,
        matches: 0,
        covered: 0,
        covered_matches: 0,
    };
    for (sys, g) in system.iter().zip(gold) {
        let want = g.lemma_pos();
        let hit = match mode {
            Mode::TopRanked => sys.readings.first() == Some(&want),
            Mode::Any => sys.readings.contains(&want),
        };
        let covered = inventory.contains(&(want.lemma.clone(), want.pos));
        s.analyzed += usize::from(!sys.unknown());
        s.matches += usize::from(hit);
        s.covered += usize::from(covered);
        s.covered_matches += usize::from(hit && covered);
    }
    s.precision = pct(s.matches, s.analyzed);
    s.recall = pct(s.covered_matches, s.covered);
    s.error_rate = if s.total == 0 {
        0.0
    } else {
        100.0 - pct(s.matches, s.total)
    };
    s.f1 = f1(s.precision, s.recall);
    Ok(s)
}

/// Percentage of tokens without readings, per genre, in flag order. Genres
/// with no tokens are left out.
pub fn unknown_rates(system: &[SystemToken], gold: &[GoldToken]) -> Result<Vec<(String, f64)>> {
    check_aligned(system, gold)?;
    let mut out = Vec::new();
    for flag in FlagSet::all().iter() {
        let name = flag.to_string();
        let (mut n, mut unk) = (0, 0);
        for (s, g) in system.iter().zip(gold) {
            if g.genre == name {
                n += 1;
                unk += usize::from(s.unknown());
            }
        }
        if n > 0 {
            out.push((name, pct(unk, n)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub unknown: Vec<(String, f64)>,
    pub top: Scores,
    pub any: Scores,
}

impl EvalReport {
    pub fn compute(
        system: &[SystemToken],
        gold: &[GoldToken],
        inventory: &HashSet<(String, PosTag)>,
    ) -> Result<Self> {
        Ok(EvalReport {
            unknown: unknown_rates(system, gold)?,
            top: prf(system, gold, inventory, Mode::TopRanked)?,
            any: prf(system, gold, inventory, Mode::Any)?,
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("measure\tscope\tvalue\n");
        for (genre, rate) in &self.unknown {
            let _ = writeln!(out, "unknown_rate\t{genre}\t{rate:.2}");
        }
        for (mode, s) in [(Mode::TopRanked, &self.top), (Mode::Any, &self.any)] {
            let m = mode.label();
            let _ = writeln!(out, "error_rate\t{m}\t{:.2}", s.error_rate);
            let _ = writeln!(out, "precision\t{m}\t{:.2}", s.precision);
            let _ = writeln!(out, "recall\t{m}\t{:.2}", s.recall);
            let _ = writeln!(out, "f1\t{m}\t{:.2}", s.f1);
        }
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Unknown words by genre")?;
        for (genre, rate) in &self.unknown {
            writeln!(f, "  {genre:<10} {rate:>6.2} %")?;
        }
        writeln!(f)?;
        writeln!(f, "{:<12} {:>10} {:>10}", "", "Top-ranked", "Any")?;
        type Row = (&'static str, fn(&Scores) -> f64);
        let rows: [Row; 4] = [
            ("Error rate", |s| s.error_rate),
            ("Precision", |s| s.precision),
            ("Recall", |s| s.recall),
            ("F1", |s| s.f1),
        ];
        for (name, get) in rows {
            writeln!(
                f,
                "{name:<12} {:>10.2} {:>10.2}",
                get(&self.top),
                get(&self.any)
            )?;
        }
        write!(
            f,
            "{} tokens, {} analyzed, {} with gold reading in lexicon",
            self.top.total, self.top.analyzed, self.top.covered
        )
    }
}
