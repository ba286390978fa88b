//! Semi-automatic lexicon growth: candidates are imported from a TEI
//! dictionary or a hand-made wordlist, reviewed by a person in a TSV file,
//! and only accepted candidates are merged.

use std::fmt;

use quick_xml::events::Event;
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::translit::{lookup_key, strip_diacritics, Translit};

use super::tsv::{format_entry, parse_entry};
use super::{EntryKind, FlagSet, LexEntry, Lexicon, Warning};

/// Category given to dictionary imports until a reviewer assigns a real one.
pub const PLACEHOLDER_CAT: &str = "N";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReviewStatus {
    Pending,
    Accepted,
    Rejected,
}

impl ReviewStatus {
    fn code(self) -> char {
        match self {
            ReviewStatus::Pending => 'P',
            ReviewStatus::Accepted => 'A',
            ReviewStatus::Rejected => 'R',
        }
    }

    fn from_code(s: &str) -> Option<Self> {
        match s.trim() {
            "P" | "p" => Some(ReviewStatus::Pending),
            "A" | "a" => Some(ReviewStatus::Accepted),
            "R" | "r" => Some(ReviewStatus::Rejected),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub entry: LexEntry,
    pub status: ReviewStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewBatch {
    pub source: String,
    pub kind: EntryKind,
    pub candidates: Vec<Candidate>,
    /// Non-fatal problems met while importing, e.g. entries without a headword.
    pub warnings: Vec<Warning>,
}

impl ReviewBatch {
    pub fn new(source: impl Into<String>, kind: EntryKind) -> Self {
        ReviewBatch {
            source: source.into(),
            kind,
            candidates: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn count(&self, status: ReviewStatus) -> usize {
        self.candidates
            .iter()
            .filter(|c| c.status == status)
            .count()
    }

    pub fn set_all(&mut self, from: ReviewStatus, to: ReviewStatus) {
        for c in self.candidates.iter_mut().filter(|c| c.status == from) {
            c.status = to;
        }
    }

    /// Review file: two header comments, then one candidate per line with a
    /// leading status column (`P`, `A` or `R`).
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# source\t{}\n# kind\t{}\n", self.source, self.kind);
        for c in &self.candidates {
            out.push(c.status.code());
            out.push('\t');
            out.push_str(&format_entry(&c.entry));
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str, source_name: &str) -> Result<ReviewBatch> {
        let mut batch = ReviewBatch::new(source_name, EntryKind::Stem);
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.trim_start().split_once('\t') {
                    match key.trim() {
                        "source" => batch.source = value.trim().to_string(),
                        "kind" => {
                            batch.kind = EntryKind::parse(value).ok_or_else(|| {
                                Error::parse(
                                    source_name,
                                    line_no,
                                    format!("unknown kind {value:?}"),
                                )
                            })?
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let status = ReviewStatus::from_code(fields[0]).ok_or_else(|| {
                Error::parse(source_name, line_no, "status column must be P, A or R")
            })?;
            let entry = parse_entry(&fields[1..], batch.kind)
                .map_err(|msg| Error::parse(source_name, line_no, msg))?;
            batch.candidates.push(Candidate { entry, status });
        }
        Ok(batch)
    }
}

impl fmt::Display for ReviewBatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} candidates ({} pending, {} accepted, {} rejected)",
            self.source,
            self.len(),
            self.count(ReviewStatus::Pending),
            self.count(ReviewStatus::Accepted),
            self.count(ReviewStatus::Rejected)
        )
    }
}

#[derive(Default)]
struct DictEntry {
    headword: Option<String>,
    gloss: Option<String>,
    in_orth: bool,
    in_gloss: bool,
    sense_depth: usize,
    senses_seen: usize,
    sense_text: String,
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Reads `<entry>`/`<entryFree>` elements of a TEI dictionary. The headword
/// is the first `<orth>`; the gloss is the first `<def>`, `<gloss>` or
/// `<trans>` of the first `<sense>`, falling back to the sense text.
///
/// Each headword becomes a pending stem candidate with placeholder category
/// [`PLACEHOLDER_CAT`] and lemma `voc_1`. Candidates whose surface and lemma
/// already exist in `live` (or earlier in the batch) are rejected outright.
pub fn import_tei_dictionary(
    xml: &str,
    source: &str,
    assign: FlagSet,
    live: &Lexicon,
) -> Result<ReviewBatch> {
    let mut batch = ReviewBatch::new(source, EntryKind::Stem);
    let table = Translit::standard();
    let mut reader = Reader::from_str(xml);
    let mut depth = 0usize;
    let mut current: Option<DictEntry> = None;

    let xml_err = |reader: &Reader<&[u8]>, e: &dyn fmt::Display| Error::Xml {
        pos: reader.error_position(),
        msg: e.to_string(),
    };

    loop {
        let event = reader.read_event().map_err(|e| xml_err(&reader, &e))?;
        match event {
            Event::Start(e) => {
                depth += 1;
                let name = e.local_name();
                match (name.as_ref(), current.as_mut()) {
                    (b"entry" | b"entryFree", None) => current = Some(DictEntry::default()),
                    (b"orth", Some(ent)) if ent.headword.is_none() => ent.in_orth = true,
                    (b"sense", Some(ent)) => {
                        ent.sense_depth += 1;
                        ent.senses_seen += 1;
                    }
                    (b"def" | b"gloss" | b"trans", Some(ent))
                        if ent.gloss.is_none() && ent.sense_depth > 0 && ent.senses_seen == 1 =>
                    {
                        ent.in_gloss = true;
                        ent.gloss = Some(String::new());
                    }
                    _ => {}
                }
            }
            Event::End(e) => {
                depth = depth.saturating_sub(1);
                let name = e.local_name();
                match (name.as_ref(), current.as_mut()) {
                    (b"entry" | b"entryFree", Some(_)) => {
                        let ent = current.take().expect("checked above");
                        add_dictionary_candidate(&mut batch, ent, table, assign, live);
                    }
                    (b"orth", Some(ent)) => ent.in_orth = false,
                    (b"sense", Some(ent)) => ent.sense_depth = ent.sense_depth.saturating_sub(1),
                    (b"def" | b"gloss" | b"trans", Some(ent)) => ent.in_gloss = false,
                    _ => {}
                }
            }
            Event::Text(t) => {
                if let Some(ent) = current.as_mut() {
                    let text = t.unescape().map_err(|e| xml_err(&reader, &e))?;
                    if ent.in_orth {
                        ent.headword.get_or_insert_with(String::new).push_str(&text);
                    }
                    if ent.in_gloss {
                        if let Some(g) = ent.gloss.as_mut() {
                            g.push_str(&text);
                        }
                    }
                    if ent.sense_depth > 0 && ent.senses_seen == 1 {
                        ent.sense_text.push_str(&text);
                        ent.sense_text.push(' ');
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Xml {
            pos: reader.buffer_position(),
            msg: "unexpected end of document: unclosed elements".into(),
        });
    }
    Ok(batch)
}

fn add_dictionary_candidate(
    batch: &mut ReviewBatch,
    ent: DictEntry,
    table: &Translit,
    assign: FlagSet,
    live: &Lexicon,
) {
    let headword = ent.headword.map(|h| collapse_ws(&h)).unwrap_or_default();
    if headword.is_empty() {
        batch.warnings.push(Warning::SkippedEntry {
            reason: "entry has no headword".into(),
        });
        return;
    }
    let t = table.to_buckwalter(&headword);
    if !t.unmapped.is_empty() {
        batch.warnings.push(Warning::SkippedEntry {
            reason: format!(
                "headword {headword:?} contains characters outside the transliteration table"
            ),
        });
        return;
    }
    let voc: String = t
        .text
        .chars()
        .filter(|&c| c != crate::translit::TATWEEL)
        .collect();
    let surface = strip_diacritics(&voc);
    let gloss = ent
        .gloss
        .map(|g| collapse_ws(&g))
        .filter(|g| !g.is_empty())
        .unwrap_or_else(|| collapse_ws(&ent.sense_text));
    let lemma = format!("{voc}_1");
    let duplicate = live.contains(EntryKind::Stem, &surface, &lemma)
        || batch
            .candidates
            .iter()
            .any(|c| c.entry.surface == surface && c.entry.lemma == lemma);
    let entry = LexEntry {
        kind: EntryKind::Stem,
        pos: format!("{voc}/{PLACEHOLDER_CAT}"),
        surface,
        voc,
        cat: PLACEHOLDER_CAT.to_string(),
        gloss,
        lemma,
        flags: assign,
    };
    let status = if duplicate {
        ReviewStatus::Rejected
    } else {
        ReviewStatus::Pending
    };
    batch.candidates.push(Candidate { entry, status });
}

/// Reads a `surface<TAB>gloss<TAB>pos` wordlist. Surfaces may be written in
/// Arabic script or Buckwalter. The POS column doubles as the provisional
/// category; stems get lemma `voc_1`.
pub fn import_wordlist(
    text: &str,
    source: &str,
    kind: EntryKind,
    assign: FlagSet,
) -> Result<ReviewBatch> {
    let mut batch = ReviewBatch::new(source, kind);
    let table = Translit::standard();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::parse(source, line_no, msg);
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [word, gloss, pos] = fields.as_slice() else {
            return Err(bad(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        };
        if word.is_empty() || pos.is_empty() {
            return Err(bad("surface and pos must not be empty".into()));
        }
        let voc = if word.chars().any(|c| table.is_arabic(c)) {
            let t = table.to_buckwalter(word);
            if let Some((_, c)) = t.unmapped.first() {
                return Err(bad(format!(
                    "character {c:?} is not in the transliteration table"
                )));
            }
            t.text
        } else {
            table.validate(word).map_err(|e| {
                bad(format!(
                    "{word:?} is neither Arabic script nor Buckwalter: {e}"
                ))
            })?;
            word.to_string()
        };
        let voc: String = voc
            .chars()
            .filter(|&c| c != crate::translit::TATWEEL)
            .collect();
        let surface = lookup_key(&voc, false);
        let lemma = if kind == EntryKind::Stem {
            format!("{voc}_1")
        } else {
            String::new()
        };
        let entry = LexEntry {
            kind,
            pos: format!("{voc}/{pos}"),
            surface,
            voc,
            cat: pos.to_string(),
            gloss: gloss.to_string(),
            lemma,
            flags: assign,
        };
        if kind == EntryKind::Stem && entry.primary_tag().is_none() {
            return Err(bad(format!("POS {pos:?} does not map to a known tag")));
        }
        batch.candidates.push(Candidate {
            entry,
            status: ReviewStatus::Pending,
        });
    }
    Ok(batch)
}

/// Inserts accepted candidates into a copy of `lex`. Rejected ones are
/// ignored. Merging the same batch twice adds nothing the second time.
pub fn merge_reviewed(lex: &Lexicon, batch: &ReviewBatch) -> Result<(Lexicon, Vec<Warning>)> {
    let pending: Vec<String> = batch
        .candidates
        .iter()
        .filter(|c| c.status == ReviewStatus::Pending)
        .map(|c| format!("{} ({})", c.entry.voc, c.entry.lemma))
        .collect();
    if !pending.is_empty() {
        return Err(Error::PendingCandidates(pending.join(", ")));
    }
    let mut merged = lex.clone();
    let mut warnings = Vec::new();
    for c in batch
        .candidates
        .iter()
        .filter(|c| c.status == ReviewStatus::Accepted)
    {
        let entry = LexEntry {
            kind: batch.kind,
            ..c.entry.clone()
        };
        if !merged.compat().licenses(entry.kind, &entry.cat) {
            warnings.push(Warning::Unreachable {
                kind: entry.kind,
                surface: entry.surface.clone(),
                cat: entry.cat.clone(),
            });
        }
        merged.insert(entry);
    }
    Ok((merged, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{CompatSources, LexiconSources};

    fn live() -> Lexicon {
        Lexicon::load(&LexiconSources {
            prefixes: "0\t0\tPref-0\t\t\n",
            stems: "ktAb\tkitAb\tN\tbook\tkitAb_1\tCA|MSA\n",
            suffixes: "0\t0\tSuff-0\t\t\n",
            compat: CompatSources {
                ab: "Pref-0\tN\n",
                bc: "N\tSuff-0\n",
                ac: "Pref-0\tSuff-0\n",
            },
        })
        .unwrap()
    }

    const DICT: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<TEI xmlns="http://www.tei-c.org/ns/1.0"><text><body>
  <entry><form><orth>قَلَم</orth></form><sense n="1"><def>pen</def></sense><sense n="2"><def>reed</def></sense></entry>
  <entry><form><orth>كِتاب</orth></form><sense><gloss>book</gloss></sense></entry>
  <entry><form><orth></orth></form><sense><def>nothing</def></sense></entry>
  <entryFree><orth>طِعان</orth><sense>thrust of the <hi>spear</hi></sense></entryFree>
</body></text></TEI>"#;

    #[test]
    fn tei_entries_become_candidates() {
        let batch =
            import_tei_dictionary(DICT, "fixture.xml", FlagSet::CA, &Lexicon::default()).unwrap();
        assert_eq!(batch.len(), 3);
        let pen = &batch.candidates[0];
        assert_eq!(pen.entry.surface, "qlm");
        assert_eq!(pen.entry.voc, "qalam");
        assert_eq!(pen.entry.gloss, "pen");
        assert_eq!(pen.entry.cat, "N");
        assert_eq!(pen.entry.lemma, "qalam_1");
        assert_eq!(pen.status, ReviewStatus::Pending);
        let book = &batch.candidates[1];
        assert_eq!(
            (book.entry.surface.as_str(), book.entry.voc.as_str()),
            ("ktAb", "kitAb")
        );
        assert_eq!(book.entry.flags, FlagSet::CA);
        assert_eq!(batch.candidates[2].entry.gloss, "thrust of the spear");
        assert_eq!(batch.warnings.len(), 1);
    }

    #[test]
    fn tei_duplicates_of_live_entries_are_rejected() {
        let batch = import_tei_dictionary(DICT, "fixture.xml", FlagSet::CA, &live()).unwrap();
        assert_eq!(batch.candidates[1].entry.lemma, "kitAb_1");
        assert_eq!(batch.candidates[1].status, ReviewStatus::Rejected);
        assert_eq!(batch.candidates[0].status, ReviewStatus::Pending);
    }

    #[test]
    fn empty_dictionary_gives_empty_batch() {
        let batch =
            import_tei_dictionary("<TEI><text><body/></text></TEI>", "e", FlagSet::CA, &live())
                .unwrap();
        assert!(batch.is_empty());
    }

    #[test]
    fn malformed_xml_reports_position() {
        let err = import_tei_dictionary(
            "<TEI><entry><orth>x</entry></TEI>",
            "bad",
            FlagSet::CA,
            &live(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Xml { .. }), "{err:?}");
        let err = import_tei_dictionary("<TEI><entry>", "bad", FlagSet::CA, &live()).unwrap_err();
        assert!(matches!(err, Error::Xml { .. }), "{err:?}");
    }

    #[test]
    fn wordlist_lines_become_pending_candidates() {
        let text = "اللي\trelative pron\tPRON\nاريزونا\tArizona\tNE\n";
        let batch = import_wordlist(text, "dialect.tsv", EntryKind::Stem, FlagSet::ICA).unwrap();
        assert_eq!(batch.len(), 2);
        let illi = &batch.candidates[0];
        assert_eq!(illi.entry.surface, "Ally");
        assert_eq!(illi.entry.primary_tag(), Some(crate::pos::PosTag::Pron));
        assert_eq!(illi.status, ReviewStatus::Pending);
        assert_eq!(illi.entry.flags, FlagSet::ICA);
        assert_eq!(batch.candidates[1].entry.surface, "AryzwnA");

        assert!(import_wordlist("", "e", EntryKind::Stem, FlagSet::FNE)
            .unwrap()
            .is_empty());
        let err = import_wordlist(
            "ok\tgloss\tN\nbroken line\n",
            "w",
            EntryKind::Stem,
            FlagSet::FNE,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn merge_requires_final_statuses() {
        let batch =
            import_wordlist("Ally\twho\tPRON\n", "w", EntryKind::Stem, FlagSet::ICA).unwrap();
        assert!(matches!(
            merge_reviewed(&live(), &batch),
            Err(Error::PendingCandidates(_))
        ));
    }

    #[test]
    fn merge_adds_accepted_only_and_is_idempotent() {
        let mut batch = import_wordlist(
            "Ally\twho\tPRON\ndA\tthis\tPRON\n",
            "w",
            EntryKind::Stem,
            FlagSet::ICA,
        )
        .unwrap();
        batch.candidates[0].status = ReviewStatus::Accepted;
        batch.candidates[1].status = ReviewStatus::Rejected;
        let base = live();
        let (once, warnings) = merge_reviewed(&base, &batch).unwrap();
        assert_eq!(once.len(), base.len() + 1);
        // PRON is not in the toy compat tables
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].to_string().contains("never surface"));
        let (twice, _) = merge_reviewed(&once, &batch).unwrap();
        assert_eq!(twice, once);
    }

    #[test]
    fn review_file_round_trip() {
        let mut batch = import_tei_dictionary(DICT, "fixture.xml", FlagSet::CA, &live()).unwrap();
        batch.candidates[0].status = ReviewStatus::Accepted;
        let text = batch.to_tsv();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
        let mut back = ReviewBatch::from_tsv(&text, "review.tsv").unwrap();
        back.warnings = batch.warnings.clone();
        assert_eq!(back, batch);
        assert!(ReviewBatch::from_tsv("X\tktAb\tkitAb\tN\tbook\tkitAb_1\tCA\n", "r").is_err());
    }
}
