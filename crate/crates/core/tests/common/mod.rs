#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use arabmorph::analyzer::Analysis;
use arabmorph::lexicon::{EntryKind, FlagSet, Lexicon};
use arabmorph::pos::LemmaPos;

pub fn toy_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/toy")
}

pub fn toy_file(name: &str) -> String {
    std::fs::read_to_string(toy_dir().join(name)).unwrap()
}

pub fn toy_lexicon() -> Lexicon {
    Lexicon::load_dir(toy_dir()).unwrap()
}

/// Gold rows as (surface, lemma/pos) per sentence, read without the library
/// parser.
pub fn gold_sentences() -> Vec<Vec<(String, LemmaPos)>> {
    let mut out = vec![Vec::new()];
    for line in toy_file("gold.tsv").lines() {
        if line.trim().is_empty() {
            if !out.last().unwrap().is_empty() {
                out.push(Vec::new());
            }
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let ana: Vec<&str> = f[1].split('/').collect();
        let tuple = LemmaPos {
            lemma: ana[1].to_string(),
            pos: ana[2].parse().unwrap(),
        };
        out.last_mut().unwrap().push((f[0].to_string(), tuple));
    }
    if out.last().unwrap().is_empty() {
        out.pop();
    }
    out
}

pub type Reading = (String, String, String);

pub fn reading(a: &Analysis) -> Reading {
    (a.voc.clone(), a.lemma.clone(), a.pos.as_str().to_string())
}

pub fn readings(analyses: &[Analysis]) -> BTreeSet<Reading> {
    analyses.iter().map(reading).collect()
}

/// Every (prefix, stem, suffix) entry triple whose surfaces concatenate to
/// `key`, whose flags meet `active` and whose categories are pairwise
/// compatible. No segmentation caps.
pub fn oracle(key: &str, lex: &Lexicon, active: FlagSet) -> BTreeSet<Reading> {
    let live = |k| {
        lex.entries(k)
            .filter(|e| e.flags.intersects(active))
            .collect::<Vec<_>>()
    };
    let (pre, stems, suf) = (
        live(EntryKind::Prefix),
        live(EntryKind::Stem),
        live(EntryKind::Suffix),
    );
    let mut out = BTreeSet::new();
    for p in &pre {
        for s in &stems {
            if s.surface.is_empty() {
                continue;
            }
            for x in &suf {
                if format!("{}{}{}", p.surface, s.surface, x.surface) != key {
                    continue;
                }
                let c = lex.compat();
                if !(c.ab.contains(&(p.cat.clone(), s.cat.clone()))
                    && c.bc.contains(&(s.cat.clone(), x.cat.clone()))
                    && c.ac.contains(&(p.cat.clone(), x.cat.clone())))
                {
                    continue;
                }
                if let Some(a) = Analysis::from_parts(p, s, x) {
                    let voc: Vec<&str> = [&p.voc, &s.voc, &x.voc]
                        .into_iter()
                        .map(String::as_str)
                        .filter(|v| !v.is_empty())
                        .collect();
                    assert_eq!(a.voc, voc.join("+"));
                    assert_eq!(a.lemma, s.lemma);
                    out.insert(reading(&a));
                }
            }
        }
    }
    out
}
