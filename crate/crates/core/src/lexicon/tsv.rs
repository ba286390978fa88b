//! Tab-separated lexicon and compatibility-table files.
//!
//! Entry rows are `surface voc cat gloss lemma flags`. The gloss column may
//! carry a POS annotation as `gloss <pos>voc/TAG</pos>`; the flags column is
//! a `|`-separated list and may be omitted. Empty surfaces are written `0`.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::translit::{strip_diacritics, Translit};

use super::{is_valid_lemma, CompatTables, EntryKind, FlagSet, LexEntry, Lexicon};

pub const FILE_NAMES: [&str; 6] = [
    "prefixes.tsv",
    "stems.tsv",
    "suffixes.tsv",
    "compat_ab.tsv",
    "compat_bc.tsv",
    "compat_ac.tsv",
];

const NULL_FIELD: &str = "0";

#[derive(Debug, Clone, Copy)]
pub struct CompatSources<'a> {
    pub ab: &'a str,
    pub bc: &'a str,
    pub ac: &'a str,
}

#[derive(Debug, Clone, Copy)]
pub struct LexiconSources<'a> {
    pub prefixes: &'a str,
    pub stems: &'a str,
    pub suffixes: &'a str,
    pub compat: CompatSources<'a>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn split_gloss_pos(field: &str) -> (String, Option<String>) {
    if let (Some(start), Some(end)) = (field.find("<pos>"), field.find("</pos>")) {
        if start < end {
            let pos = field[start + 5..end].trim().to_string();
            let gloss = format!("{}{}", &field[..start], &field[end + 6..]);
            return (gloss.trim().to_string(), Some(pos));
        }
    }
    (field.trim().to_string(), None)
}

fn join_gloss_pos(gloss: &str, pos: &str) -> String {
    match (gloss.is_empty(), pos.is_empty()) {
        (_, true) => gloss.to_string(),
        (true, false) => format!("<pos>{pos}</pos>"),
        (false, false) => format!("{gloss} <pos>{pos}</pos>"),
    }
}

fn null_to_empty(field: &str) -> &str {
    if field == NULL_FIELD {
        ""
    } else {
        field
    }
}

fn empty_to_null(field: &str) -> &str {
    if field.is_empty() {
        NULL_FIELD
    } else {
        field
    }
}

/// Parses one entry row and checks the entry invariants.
pub(crate) fn parse_entry(
    fields: &[&str],
    kind: EntryKind,
) -> std::result::Result<LexEntry, String> {
    if !(5..=6).contains(&fields.len()) {
        return Err(format!(
            "expected 5 or 6 tab-separated fields, found {}",
            fields.len()
        ));
    }
    let surface = null_to_empty(fields[0].trim()).to_string();
    let voc = null_to_empty(fields[1].trim()).to_string();
    let cat = fields[2].trim().to_string();
    let (gloss, pos) = split_gloss_pos(fields[3]);
    let lemma = fields[4].trim().to_string();
    let flags = match fields.get(5).map(|f| f.trim()) {
        None | Some("") => FlagSet::all(),
        Some(list) => FlagSet::parse_list(list).map_err(|e| e.to_string())?,
    };

    let table = Translit::standard();
    table
        .validate(&surface)
        .map_err(|e| format!("surface {surface:?}: {e}"))?;
    table
        .validate(&voc)
        .map_err(|e| format!("voc {voc:?}: {e}"))?;
    if kind == EntryKind::Stem && surface.is_empty() {
        return Err("stem surface must not be empty".into());
    }
    if cat.is_empty() {
        return Err("empty category".into());
    }
    if strip_diacritics(&voc) != surface {
        return Err(format!("voc {voc:?} does not strip to surface {surface:?}"));
    }
    if !lemma.is_empty() && !is_valid_lemma(&lemma) {
        return Err(format!("lemma {lemma:?} is not of the form base_N"));
    }
    if flags.is_empty() {
        return Err("empty flag set".into());
    }

    let pos = match pos {
        Some(p) => p,
        None if kind == EntryKind::Stem => format!("{voc}/{cat}"),
        None => String::new(),
    };
    let entry = LexEntry {
        kind,
        surface,
        voc,
        cat,
        gloss,
        pos,
        lemma,
        flags,
    };
    if kind == EntryKind::Stem {
        if entry.lemma.is_empty() {
            return Err("stem without lemma".into());
        }
        if entry.primary_tag().is_none() {
            return Err(format!(
                "POS annotation {:?} has no recognised head tag",
                entry.pos
            ));
        }
    }
    Ok(entry)
}

pub(crate) fn format_entry(e: &LexEntry) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        empty_to_null(&e.surface),
        empty_to_null(&e.voc),
        e.cat,
        join_gloss_pos(&e.gloss, &e.pos),
        e.lemma,
        e.flags
    )
}

fn load_entries(lex: &mut Lexicon, text: &str, kind: EntryKind, source: &str) -> Result<usize> {
    let mut rows = 0;
    for (line_no, line) in content_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        let entry = parse_entry(&fields, kind).map_err(|msg| Error::parse(source, line_no, msg))?;
        lex.insert(entry);
        rows += 1;
    }
    Ok(rows)
}

fn load_pairs(text: &str, source: &str) -> Result<HashSet<(String, String)>> {
    content_lines(text)
        .map(|(line_no, line)| {
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            match fields.as_slice() {
                [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
                _ => Err(Error::parse(
                    source,
                    line_no,
                    "expected two category columns",
                )),
            }
        })
        .collect()
}

fn format_pairs(pairs: &HashSet<(String, String)>) -> String {
    let mut sorted: Vec<_> = pairs.iter().collect();
    sorted.sort();
    sorted.iter().map(|(a, b)| format!("{a}\t{b}\n")).collect()
}

impl Lexicon {
    pub fn load(src: &LexiconSources<'_>) -> Result<Lexicon> {
        let compat = CompatTables {
            ab: load_pairs(src.compat.ab, FILE_NAMES[3])?,
            bc: load_pairs(src.compat.bc, FILE_NAMES[4])?,
            ac: load_pairs(src.compat.ac, FILE_NAMES[5])?,
        };
        let mut lex = Lexicon::new(compat);
        load_entries(&mut lex, src.prefixes, EntryKind::Prefix, FILE_NAMES[0])?;
        if load_entries(&mut lex, src.stems, EntryKind::Stem, FILE_NAMES[1])? == 0 {
            return Err(Error::Lexicon(format!("{} has no entries", FILE_NAMES[1])));
        }
        load_entries(&mut lex, src.suffixes, EntryKind::Suffix, FILE_NAMES[2])?;
        for w in lex.validate() {
            log::warn!("{w}");
        }
        Ok(lex)
    }

    /// Loads the six files named in [`FILE_NAMES`] from `dir`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Lexicon> {
        let dir = dir.as_ref();
        let read = |name: &str| {
            let path = dir.join(name);
            fs::read_to_string(&path)
                .map_err(|e| Error::Lexicon(format!("cannot read {}: {e}", path.display())))
        };
        let texts: Vec<String> = FILE_NAMES.iter().map(|n| read(n)).collect::<Result<_>>()?;
        Lexicon::load(&LexiconSources {
            prefixes: &texts[0],
            stems: &texts[1],
            suffixes: &texts[2],
            compat: CompatSources {
                ab: &texts[3],
                bc: &texts[4],
                ac: &texts[5],
            },
        })
    }

    pub fn to_tsv(&self, kind: EntryKind) -> String {
        let mut out = format!("# {kind} lexicon: surface\tvoc\tcat\tgloss <pos>\tlemma\tflags\n");
        for e in self.entries(kind) {
            let row = format_entry(e);
            // a missing flags column already means every flag
            let row = if e.flags == FlagSet::all() {
                row.rsplit_once('\t').map_or(row.as_str(), |(r, _)| r)
            } else {
                &row
            };
            out.push_str(row);
            out.push('\n');
        }
        out
    }

    /// File name and contents for each of the six lexicon files.
    pub fn render_files(&self) -> Vec<(&'static str, String)> {
        vec![
            (FILE_NAMES[0], self.to_tsv(EntryKind::Prefix)),
            (FILE_NAMES[1], self.to_tsv(EntryKind::Stem)),
            (FILE_NAMES[2], self.to_tsv(EntryKind::Suffix)),
            (FILE_NAMES[3], format_pairs(&self.compat.ab)),
            (FILE_NAMES[4], format_pairs(&self.compat.bc)),
            (FILE_NAMES[5], format_pairs(&self.compat.ac)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PREFIXES: &str = "0\t0\tPref-0\t\t\n";
    const SUFFIXES: &str = "0\t0\tSuff-0\t\t\n";
    const AB: &str = "Pref-0\tN\n";
    const BC: &str = "N\tSuff-0\n";
    const AC: &str = "Pref-0\tSuff-0\n";

    fn load(stems: &str) -> Result<Lexicon> {
        Lexicon::load(&LexiconSources {
            prefixes: PREFIXES,
            stems,
            suffixes: SUFFIXES,
            compat: CompatSources {
                ab: AB,
                bc: BC,
                ac: AC,
            },
        })
    }

    #[test]
    fn parses_a_flagged_stem_row() {
        let lex = load("ktAb\tkitAb\tN\tbook\tkitAb_1\tCA|MSA\n").unwrap();
        let found = lex.lookup("ktAb", EntryKind::Stem, FlagSet::all());
        assert_eq!(found.len(), 1);
        let e = found[0];
        assert_eq!(e.flags, FlagSet::CA | FlagSet::MSA);
        assert_eq!(e.voc, "kitAb");
        assert_eq!(e.gloss, "book");
        assert_eq!(e.pos, "kitAb/N");
        assert_eq!(e.lemma, "kitAb_1");
    }

    #[test]
    fn rows_differing_in_flags_collapse() {
        let lex = load("ktAb\tkitAb\tN\tbook\tkitAb_1\tCA\nktAb\tkitAb\tN\tbook\tkitAb_1\tMSA\n")
            .unwrap();
        let found = lex.lookup("ktAb", EntryKind::Stem, FlagSet::all());
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].flags, FlagSet::CA | FlagSet::MSA);
    }

    #[test]
    fn missing_flags_field_means_all_flags() {
        let lex = load("ktAb\tkitAb\tN\tbook\tkitAb_1\n").unwrap();
        let e = &lex.lookup("ktAb", EntryKind::Stem, FlagSet::all())[0];
        assert_eq!(e.flags, FlagSet::all());
    }

    #[test]
    fn pos_annotation_is_split_from_gloss() {
        let lex = load("ktAb\tkitAb\tN\tbook <pos>kitAb/Ndu</pos>\tkitAb_1\n").unwrap();
        let e = &lex.lookup("ktAb", EntryKind::Stem, FlagSet::all())[0];
        assert_eq!(e.gloss, "book");
        assert_eq!(e.pos, "kitAb/Ndu");
        assert_eq!(format_entry(e), "ktAb\tkitAb\tN\tbook <pos>kitAb/Ndu</pos>\tkitAb_1\tCA|MSA|ICA|SPEC_MED|SPEC_ALCH|SPEC_GRAM|NE|FNE|CAP");
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let err = load("# header\nktAb\tkitAb\tN\tbook\tkitAb_1\nbad row\n").unwrap_err();
        assert_eq!(line_of(err), 3);
        let err = load("ktAb\tkitAb\tN\tbook\tkitAb_1\tPOETRY\n").unwrap_err();
        assert_eq!(line_of(err), 1);
        let err =
            load("ktAb\tkitAb\tN\tbook\tkitAb_1\nktb\tkitAb\tN\tbook\tkitAb_1\n").unwrap_err();
        assert_eq!(line_of(err), 2);
        let err = load("ktAb\tkitAb\tN\tbook\tkitAb\n").unwrap_err();
        assert_eq!(line_of(err), 1);
        let err = load("0\t0\tN\tnothing\tx_1\n").unwrap_err();
        assert_eq!(line_of(err), 1);
        let err = load("ktAb\tkitAb\tFW\tbook\tkitAb_1\n").unwrap_err();
        assert!(err.to_string().contains("head tag"));
    }

    #[test]
    fn empty_stem_file_is_an_error() {
        assert!(matches!(load("# nothing\n"), Err(Error::Lexicon(_))));
    }

    #[test]
    fn affix_rows_admit_null_surface() {
        let lex = Lexicon::load(&LexiconSources {
            prefixes: "0\t0\tPref-0\t\t\nAl\tAl\tPref-Al\tthe <pos>Al/DET</pos>\t\tMSA\n",
            stems: "ktAb\tkitAb\tN\tbook\tkitAb_1\n",
            suffixes: "0\ta\tPVSuff-a\t<pos>a/PVSUFF</pos>\t\n",
            compat: CompatSources {
                ab: AB,
                bc: BC,
                ac: AC,
            },
        })
        .unwrap();
        let null = lex.lookup("", EntryKind::Suffix, FlagSet::all());
        assert_eq!(null[0].voc, "a");
        assert_eq!(lex.lookup("", EntryKind::Prefix, FlagSet::all())[0].voc, "");
        assert_eq!(lex.lookup("Al", EntryKind::Prefix, FlagSet::MSA).len(), 1);
    }
}
