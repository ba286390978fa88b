//! Prefix, stem and suffix lexicons with their compatibility tables.

mod flags;
mod review;
mod tsv;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::pos::PosTag;
use crate::translit::lookup_key;

pub use flags::FlagSet;
pub use review::{
    import_tei_dictionary, import_wordlist, merge_reviewed, Candidate, ReviewBatch, ReviewStatus,
};
pub use tsv::{CompatSources, LexiconSources, FILE_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntryKind {
    Prefix,
    Stem,
    Suffix,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Prefix => "prefix",
            EntryKind::Stem => "stem",
            EntryKind::Suffix => "suffix",
        }
    }

    pub fn parse(s: &str) -> Option<EntryKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "prefix" => Some(EntryKind::Prefix),
            "stem" => Some(EntryKind::Stem),
            "suffix" => Some(EntryKind::Suffix),
            _ => None,
        }
    }
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One lexicon row. Null affixes have an empty `surface`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexEntry {
    pub kind: EntryKind,
    pub surface: String,
    pub voc: String,
    pub cat: String,
    pub gloss: String,
    pub pos: String,
    pub lemma: String,
    pub flags: FlagSet,
}

impl LexEntry {
    /// Primary tag of a stem, from the head of its POS annotation.
    pub fn primary_tag(&self) -> Option<PosTag> {
        PosTag::head_of(&self.pos).and_then(PosTag::fold)
    }

    fn same_reading(&self, other: &LexEntry) -> bool {
        self.surface == other.surface
            && self.voc == other.voc
            && self.cat == other.cat
            && self.lemma == other.lemma
    }
}

/// `base_N` with non-empty base and positive integer N.
pub fn is_valid_lemma(lemma: &str) -> bool {
    match lemma.rsplit_once('_') {
        Some((base, idx)) => {
            !base.is_empty()
                && !idx.is_empty()
                && idx.bytes().all(|b| b.is_ascii_digit())
                && idx.parse::<u32>().is_ok_and(|n| n > 0)
        }
        None => false,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompatTables {
    pub ab: HashSet<(String, String)>,
    pub bc: HashSet<(String, String)>,
    pub ac: HashSet<(String, String)>,
}

impl CompatTables {
    pub fn compatible(&self, prefix_cat: &str, stem_cat: &str, suffix_cat: &str) -> bool {
        let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
        self.ab.contains(&pair(prefix_cat, stem_cat))
            && self.bc.contains(&pair(stem_cat, suffix_cat))
            && self.ac.contains(&pair(prefix_cat, suffix_cat))
    }

    /// Whether a category in the given role takes part in at least one pair
    /// of every table that constrains that role.
    pub fn licenses(&self, kind: EntryKind, cat: &str) -> bool {
        let left = |t: &HashSet<(String, String)>| t.iter().any(|(a, _)| a == cat);
        let right = |t: &HashSet<(String, String)>| t.iter().any(|(_, b)| b == cat);
        match kind {
            EntryKind::Prefix => left(&self.ab) && left(&self.ac),
            EntryKind::Stem => right(&self.ab) && left(&self.bc),
            EntryKind::Suffix => right(&self.bc) && right(&self.ac),
        }
    }
}

/// Something worth telling the user about that does not stop processing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// A compatibility pair names a category no entry carries.
    UnusedCategory { table: &'static str, cat: String },
    /// An entry whose category the compatibility tables never license.
    Unreachable {
        kind: EntryKind,
        surface: String,
        cat: String,
    },
    /// An imported dictionary entry that had no usable headword.
    SkippedEntry { reason: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::UnusedCategory { table, cat } => {
                write!(f, "compat table {table} names category {cat:?} that no entry carries")
            }
            Warning::Unreachable { kind, surface, cat } => write!(
                f,
                "{kind} {surface:?} has category {cat:?} absent from the compatibility tables; it can never surface in an analysis"
            ),
            Warning::SkippedEntry { reason } => write!(f, "skipped dictionary entry: {reason}"),
        }
    }
}

type Table = IndexMap<String, Vec<Arc<LexEntry>>>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    prefixes: Table,
    stems: Table,
    suffixes: Table,
    compat: CompatTables,
}

impl Lexicon {
    pub fn new(compat: CompatTables) -> Self {
        Lexicon {
            compat,
            ..Default::default()
        }
    }

    fn table(&self, kind: EntryKind) -> &Table {
        match kind {
            EntryKind::Prefix => &self.prefixes,
            EntryKind::Stem => &self.stems,
            EntryKind::Suffix => &self.suffixes,
        }
    }

    fn table_mut(&mut self, kind: EntryKind) -> &mut Table {
        match kind {
            EntryKind::Prefix => &mut self.prefixes,
            EntryKind::Stem => &mut self.stems,
            EntryKind::Suffix => &mut self.suffixes,
        }
    }

    pub fn compat(&self) -> &CompatTables {
        &self.compat
    }

    /// Adds an entry, merging flag masks with an existing row that has the
    /// same surface, vocalization, category and lemma. Returns `true` when
    /// the entry count grew.
    pub fn insert(&mut self, entry: LexEntry) -> bool {
        let bucket = self
            .table_mut(entry.kind)
            .entry(entry.surface.clone())
            .or_default();
        if let Some(existing) = bucket.iter_mut().find(|e| e.same_reading(&entry)) {
            Arc::make_mut(existing).flags |= entry.flags;
            false
        } else {
            bucket.push(Arc::new(entry));
            true
        }
    }

    /// Entries with exactly this surface whose flags intersect `active`, in
    /// load order.
    pub fn lookup(&self, surface: &str, kind: EntryKind, active: FlagSet) -> Vec<&Arc<LexEntry>> {
        self.table(kind)
            .get(surface)
            .map(|bucket| {
                bucket
                    .iter()
                    .filter(|e| e.flags.intersects(active))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn entries(&self, kind: EntryKind) -> impl Iterator<Item = &Arc<LexEntry>> + '_ {
        self.table(kind).values().flatten()
    }

    pub fn all_entries(&self) -> impl Iterator<Item = &Arc<LexEntry>> + '_ {
        [EntryKind::Prefix, EntryKind::Stem, EntryKind::Suffix]
            .into_iter()
            .flat_map(|k| self.entries(k))
    }

    pub fn len(&self) -> usize {
        self.all_entries().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, kind: EntryKind, surface: &str, lemma: &str) -> bool {
        self.table(kind)
            .get(surface)
            .is_some_and(|b| b.iter().any(|e| e.lemma == lemma))
    }

    /// Every (lemma, primary tag) reading the stem lexicon can produce.
    pub fn lemma_pos_inventory(&self) -> HashSet<(String, PosTag)> {
        self.entries(EntryKind::Stem)
            .filter_map(|e| e.primary_tag().map(|t| (e.lemma.clone(), t)))
            .collect()
    }

    /// A lookup view whose table keys have hamzated and madda alif folded to
    /// bare `A`. Entries themselves are unchanged, so their `surface` may
    /// differ from the key they are filed under.
    pub fn with_folded_keys(&self) -> Lexicon {
        let fold = |table: &Table| {
            let mut out = Table::new();
            for (surface, bucket) in table {
                out.entry(lookup_key(surface, true))
                    .or_default()
                    .extend(bucket.iter().cloned());
            }
            out
        };
        Lexicon {
            prefixes: fold(&self.prefixes),
            stems: fold(&self.stems),
            suffixes: fold(&self.suffixes),
            compat: self.compat.clone(),
        }
    }

    /// Flags compatibility-table categories that no loaded entry carries.
    pub fn validate(&self) -> Vec<Warning> {
        let cats = |kind| -> HashSet<&str> { self.entries(kind).map(|e| e.cat.as_str()).collect() };
        let (pcats, scats, sucats) = (
            cats(EntryKind::Prefix),
            cats(EntryKind::Stem),
            cats(EntryKind::Suffix),
        );
        let mut missing = BTreeSet::new();
        let tables = [
            ("AB", &self.compat.ab, &pcats, &scats),
            ("BC", &self.compat.bc, &scats, &sucats),
            ("AC", &self.compat.ac, &pcats, &sucats),
        ];
        for (name, table, left, right) in tables {
            for (a, b) in table {
                if !left.contains(a.as_str()) {
                    missing.insert((name, a.clone()));
                }
                if !right.contains(b.as_str()) {
                    missing.insert((name, b.clone()));
                }
            }
        }
        missing
            .into_iter()
            .map(|(table, cat)| Warning::UnusedCategory { table, cat })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(
        kind: EntryKind,
        surface: &str,
        voc: &str,
        cat: &str,
        lemma: &str,
        flags: FlagSet,
    ) -> LexEntry {
        LexEntry {
            kind,
            surface: surface.into(),
            voc: voc.into(),
            cat: cat.into(),
            gloss: String::new(),
            pos: format!("{voc}/N"),
            lemma: lemma.into(),
            flags,
        }
    }

    fn toy_compat() -> CompatTables {
        let pairs = |v: &[(&str, &str)]| {
            v.iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        };
        CompatTables {
            ab: pairs(&[("Pref-0", "N"), ("Pref-Al", "N"), ("Pref-0", "PV")]),
            bc: pairs(&[("N", "Suff-0"), ("PV", "Suff-0")]),
            ac: pairs(&[("Pref-0", "Suff-0"), ("Pref-Al", "Suff-0")]),
        }
    }

    #[test]
    fn compatibility_is_a_conjunction() {
        let t = toy_compat();
        assert!(t.compatible("Pref-Al", "N", "Suff-0"));
        assert!(t.compatible("Pref-0", "PV", "Suff-0"));
        // no (Pref-Al, PV) pair: the article never attaches to a perfect verb
        assert!(!t.compatible("Pref-Al", "PV", "Suff-0"));
        assert!(!t.compatible("Pref-Al", "N", "Suff-X"));
    }

    #[test]
    fn lookup_filters_by_flag_intersection() {
        let mut lex = Lexicon::new(toy_compat());
        lex.insert(entry(
            EntryKind::Stem,
            "ktAb",
            "kitAb",
            "N",
            "kitAb_1",
            FlagSet::CA | FlagSet::MSA,
        ));
        lex.insert(entry(
            EntryKind::Stem,
            "ktAb",
            "kut~Ab",
            "N",
            "kut~Ab_1",
            FlagSet::CA,
        ));
        lex.insert(entry(
            EntryKind::Stem,
            "Ally",
            "Al~iy",
            "N",
            "Al~iy_1",
            FlagSet::ICA,
        ));

        let msa = lex.lookup("ktAb", EntryKind::Stem, FlagSet::MSA);
        assert_eq!(msa.len(), 1);
        assert_eq!(msa[0].lemma, "kitAb_1");
        assert_eq!(lex.lookup("ktAb", EntryKind::Stem, FlagSet::all()).len(), 2);
        assert!(lex
            .lookup("ktAb", EntryKind::Stem, FlagSet::empty())
            .is_empty());
        assert!(lex
            .lookup("Ally", EntryKind::Stem, FlagSet::classical_preset())
            .is_empty());
        assert!(lex
            .lookup("nothing", EntryKind::Stem, FlagSet::all())
            .is_empty());
        assert!(lex
            .lookup("ktAb", EntryKind::Prefix, FlagSet::all())
            .is_empty());
    }

    #[test]
    fn insert_collapses_duplicates_by_union() {
        let mut lex = Lexicon::new(toy_compat());
        assert!(lex.insert(entry(
            EntryKind::Stem,
            "ktAb",
            "kitAb",
            "N",
            "kitAb_1",
            FlagSet::CA
        )));
        assert!(!lex.insert(entry(
            EntryKind::Stem,
            "ktAb",
            "kitAb",
            "N",
            "kitAb_1",
            FlagSet::MSA
        )));
        assert_eq!(lex.len(), 1);
        let e = &lex.lookup("ktAb", EntryKind::Stem, FlagSet::all())[0];
        assert_eq!(e.flags, FlagSet::CA | FlagSet::MSA);
    }

    #[test]
    fn lemma_pattern() {
        assert!(is_valid_lemma("kitAb_1"));
        assert!(is_valid_lemma("kut~Ab_12"));
        assert!(!is_valid_lemma("kitAb"));
        assert!(!is_valid_lemma("kitAb_0"));
        assert!(!is_valid_lemma("_1"));
        assert!(!is_valid_lemma("kitAb_x"));
        assert!(!is_valid_lemma("kitAb_+1"));
    }

    #[test]
    fn validate_reports_unused_categories() {
        let mut lex = Lexicon::new(toy_compat());
        lex.insert(entry(
            EntryKind::Prefix,
            "",
            "",
            "Pref-0",
            "",
            FlagSet::all(),
        ));
        lex.insert(entry(
            EntryKind::Stem,
            "ktAb",
            "kitAb",
            "N",
            "kitAb_1",
            FlagSet::all(),
        ));
        lex.insert(entry(
            EntryKind::Suffix,
            "",
            "",
            "Suff-0",
            "",
            FlagSet::all(),
        ));
        let warnings = lex.validate();
        let cats: Vec<_> = warnings
            .iter()
            .map(|w| match w {
                Warning::UnusedCategory { cat, .. } => cat.as_str(),
                _ => "",
            })
            .collect();
        assert!(cats.contains(&"Pref-Al"));
        assert!(cats.contains(&"PV"));
        assert!(!cats.contains(&"N"));
    }

    #[test]
    fn licenses_by_role() {
        let t = toy_compat();
        assert!(t.licenses(EntryKind::Stem, "N"));
        assert!(!t.licenses(EntryKind::Stem, "IV"));
        assert!(t.licenses(EntryKind::Prefix, "Pref-Al"));
        assert!(t.licenses(EntryKind::Suffix, "Suff-0"));
        assert!(!t.licenses(EntryKind::Suffix, "N"));
    }
}
