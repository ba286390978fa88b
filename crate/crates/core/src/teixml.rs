//! TEI-style XML for ranked analyses and the reviewer correction step.
//!
//! Each token becomes a `<w>` whose `ana` attribute holds the preferred
//! reading as `voc/lemma/pos`; the other readings follow as `<note ana=".."/>`
//! children. A reviewer marks a note with `ed="correct"` and
//! [`TeiDoc::apply_corrections`] swaps it with the word's reading.

use std::fmt::Write as _;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::disambig::RankedSet;
use crate::error::{Error, Result};
use crate::pos::PosTag;

/// `ana` value of a word the analyzer has no reading for.
pub const UNKNOWN_ANA: &str = "UNK//UNK";
const INDENT: &str = "  ";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TeiNote {
    pub ana: String,
    pub corrected: bool,
}

impl TeiNote {
    pub fn new(ana: impl Into<String>) -> Self {
        TeiNote {
            ana: ana.into(),
            corrected: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TeiWord {
    pub surface: String,
    pub ana: String,
    pub notes: Vec<TeiNote>,
}

impl TeiWord {
    pub fn is_unknown(&self) -> bool {
        self.ana == UNKNOWN_ANA
    }

    /// The word's reading followed by its notes.
    pub fn readings(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.ana.as_str()).chain(self.notes.iter().map(|n| n.ana.as_str()))
    }

    fn validate(&self, index: usize) -> Result<()> {
        let name = || format!("word {index} {:?}", self.surface);
        if self.surface.is_empty() {
            return Err(Error::Tei(format!("{} has no surface text", name())));
        }
        if self.is_unknown() {
            if !self.notes.is_empty() {
                return Err(Error::Tei(format!(
                    "{} is unknown but carries notes",
                    name()
                )));
            }
        } else if split_ana(&self.ana).is_none() {
            return Err(Error::Tei(format!(
                "{}: ana {:?} is not voc/lemma/pos",
                name(),
                self.ana
            )));
        }
        for n in &self.notes {
            if split_ana(&n.ana).is_none() {
                return Err(Error::Tei(format!(
                    "{}: note ana {:?} is not voc/lemma/pos",
                    name(),
                    n.ana
                )));
            }
        }
        if self.notes.iter().filter(|n| n.corrected).count() > 1 {
            return Err(Error::Tei(format!(
                "{} has more than one note marked correct",
                name()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TeiMeta {
    pub source: String,
    /// Active flag names, `|`-separated.
    pub flags: String,
    pub version: String,
}

impl TeiMeta {
    pub fn new(source: impl Into<String>, flags: impl Into<String>) -> Self {
        TeiMeta {
            source: source.into(),
            flags: flags.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TeiDoc {
    pub meta: TeiMeta,
    pub words: Vec<TeiWord>,
}

/// Splits `voc/lemma/pos`. All three parts must be present and the tag must
/// be one of the primary tags.
pub fn split_ana(ana: &str) -> Option<(&str, &str, PosTag)> {
    let mut parts = ana.split('/');
    let (voc, lemma, pos) = (parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some() || voc.is_empty() || lemma.is_empty() {
        return None;
    }
    Some((voc, lemma, pos.parse().ok()?))
}

impl TeiDoc {
    pub fn from_ranked(ranked: &[RankedSet], meta: TeiMeta) -> TeiDoc {
        let words = ranked
            .iter()
            .map(|r| TeiWord {
                surface: r.token.surface.clone(),
                ana: r.top().map_or_else(|| UNKNOWN_ANA.to_string(), |a| a.ana()),
                notes: r
                    .ranked
                    .iter()
                    .skip(1)
                    .map(|s| TeiNote::new(s.analysis.ana()))
                    .collect(),
            })
            .collect();
        TeiDoc { meta, words }
    }

    pub fn validate(&self) -> Result<()> {
        self.words
            .iter()
            .enumerate()
            .try_for_each(|(i, w)| w.validate(i))
    }

    /// Canonical serialization: fixed attribute order, two-space indent,
    /// LF line endings, surface text on its own line.
    pub fn to_xml(&self) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<text source=\"{}\" flags=\"{}\" version=\"{}\">",
            escape(&self.meta.source),
            escape(&self.meta.flags),
            escape(&self.meta.version)
        );
        let _ = writeln!(out, "{INDENT}<body>");
        let (w_ind, inner) = (INDENT.repeat(2), INDENT.repeat(3));
        for w in &self.words {
            let _ = writeln!(out, "{w_ind}<w ana=\"{}\">", escape(&w.ana));
            for n in &w.notes {
                let ed = if n.corrected { " ed=\"correct\"" } else { "" };
                let _ = writeln!(out, "{inner}<note ana=\"{}\"{ed}/>", escape(&n.ana));
            }
            let _ = writeln!(out, "{inner}{}", escape(&w.surface));
            let _ = writeln!(out, "{w_ind}</w>");
        }
        let _ = writeln!(out, "{INDENT}</body>");
        out.push_str("</text>\n");
        out
    }

    /// Parses a document in the profile written by [`TeiDoc::to_xml`].
    /// Elements outside `<w>` other than `text` and `body` are ignored.
    pub fn parse(xml: &str) -> Result<TeiDoc> {
        let mut reader = Reader::from_str(xml);
        let mut meta = TeiMeta {
            source: String::new(),
            flags: String::new(),
            version: String::new(),
        };
        let mut words = Vec::new();
        let mut word: Option<TeiWord> = None;
        let mut depth = 0usize;
        let xml_err = |reader: &Reader<&[u8]>, msg: String| Error::Xml {
            pos: reader.error_position(),
            msg,
        };

        loop {
            let event = reader
                .read_event()
                .map_err(|e| xml_err(&reader, e.to_string()))?;
            match event {
                Event::Start(e) => {
                    depth += 1;
                    match (e.local_name().as_ref(), word.as_mut()) {
                        (b"w", None) => {
                            let ana = attr(&e, "ana", &reader)?.ok_or_else(|| {
                                Error::Tei(format!("word {} has no ana attribute", words.len()))
                            })?;
                            word = Some(TeiWord {
                                surface: String::new(),
                                ana,
                                notes: Vec::new(),
                            });
                        }
                        (b"w", Some(_)) => {
                            return Err(Error::Tei(format!(
                                "word {} contains a nested <w>",
                                words.len()
                            )))
                        }
                        (b"note", Some(w)) => w.notes.push(parse_note(&e, &reader, words.len())?),
                        (b"text", None) => {
                            meta.source = attr(&e, "source", &reader)?.unwrap_or_default();
                            meta.flags = attr(&e, "flags", &reader)?.unwrap_or_default();
                            meta.version = attr(&e, "version", &reader)?.unwrap_or_default();
                        }
                        (other, Some(_)) => {
                            return Err(Error::Tei(format!(
                                "word {} contains unexpected <{}>",
                                words.len(),
                                String::from_utf8_lossy(other)
                            )))
                        }
                        _ => {}
                    }
                }
                Event::Empty(e) => match (e.local_name().as_ref(), word.as_mut()) {
                    (b"note", Some(w)) => w.notes.push(parse_note(&e, &reader, words.len())?),
                    (b"note", None) => {
                        return Err(Error::Tei(format!(
                            "<note> outside a word after word {}",
                            words.len()
                        )))
                    }
                    (b"w", _) => {
                        return Err(Error::Tei(format!(
                            "word {} has no surface text",
                            words.len()
                        )))
                    }
                    _ => {}
                },
                Event::End(e) => {
                    depth = depth.saturating_sub(1);
                    if e.local_name().as_ref() == b"w" {
                        let mut w = word
                            .take()
                            .expect("end tag names are checked by the reader");
                        w.surface = w.surface.trim().to_string();
                        w.validate(words.len())?;
                        words.push(w);
                    }
                }
                Event::Text(t) => {
                    if let Some(w) = word.as_mut() {
                        let text = t.unescape().map_err(|e| xml_err(&reader, e.to_string()))?;
                        w.surface.push_str(&text);
                    }
                }
                Event::CData(t) => {
                    if let Some(w) = word.as_mut() {
                        w.surface.push_str(&String::from_utf8_lossy(&t));
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
        Ok(TeiDoc { meta, words })
    }

    /// Promotes each note marked correct to the word's reading and demotes
    /// the old reading to the first note. Unmarked words are unchanged.
    pub fn apply_corrections(&self) -> TeiDoc {
        let words = self
            .words
            .iter()
            .map(|w| match w.notes.iter().position(|n| n.corrected) {
                None => w.clone(),
                Some(k) => {
                    let mut notes = Vec::with_capacity(w.notes.len());
                    notes.push(TeiNote::new(w.ana.clone()));
                    notes.extend(
                        w.notes
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != k)
                            .map(|(_, n)| TeiNote::new(n.ana.clone())),
                    );
                    TeiWord {
                        surface: w.surface.clone(),
                        ana: w.notes[k].ana.clone(),
                        notes,
                    }
                }
            })
            .collect();
        TeiDoc {
            meta: self.meta.clone(),
            words,
        }
    }
}

/// Canonical XML for ranked sets.
pub fn emit_tei(ranked: &[RankedSet], meta: TeiMeta) -> String {
    TeiDoc::from_ranked(ranked, meta).to_xml()
}

pub fn parse_tei(xml: &str) -> Result<TeiDoc> {
    TeiDoc::parse(xml)
}

pub fn apply_corrections(doc: &TeiDoc) -> TeiDoc {
    doc.apply_corrections()
}

fn attr(e: &BytesStart<'_>, name: &str, reader: &Reader<&[u8]>) -> Result<Option<String>> {
    for a in e.attributes() {
        let a = a.map_err(|err| Error::Xml {
            pos: reader.error_position(),
            msg: err.to_string(),
        })?;
        if a.key.local_name().as_ref() == name.as_bytes() {
            let v = a.unescape_value().map_err(|err| Error::Xml {
                pos: reader.error_position(),
                msg: err.to_string(),
            })?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn parse_note(e: &BytesStart<'_>, reader: &Reader<&[u8]>, word: usize) -> Result<TeiNote> {
    let ana = attr(e, "ana", reader)?
        .ok_or_else(|| Error::Tei(format!("a note of word {word} has no ana attribute")))?;
    let corrected = match attr(e, "ed", reader)?.as_deref() {
        None => false,
        Some("correct") => true,
        Some(other) => {
            return Err(Error::Tei(format!(
                "word {word}: unsupported ed value {other:?}"
            )))
        }
    };
    Ok(TeiNote { ana, corrected })
}
