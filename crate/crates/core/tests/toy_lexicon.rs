mod common;

use std::collections::BTreeSet;

use arabmorph::analyzer::{analyze_type, Analyzer};
use arabmorph::lexicon::{
    import_tei_dictionary, import_wordlist, merge_reviewed, EntryKind, FlagSet, Lexicon,
    ReviewBatch, ReviewStatus,
};
use arabmorph::translit::arabic_to_buck;

use common::{gold_sentences, toy_dir, toy_file, toy_lexicon};

fn anas(key: &str, active: FlagSet) -> Vec<String> {
    let lex = toy_lexicon();
    let mut v: Vec<String> = analyze_type(key, &lex, active)
        .iter()
        .map(|a| a.ana())
        .collect();
    v.sort();
    v
}

#[test]
fn loads_without_warnings() {
    let lex = toy_lexicon();
    assert_eq!(lex.len(), 210);
    let warnings: Vec<String> = lex.validate().iter().map(|w| w.to_string()).collect();
    assert!(warnings.is_empty(), "{warnings:?}");
}

#[test]
fn known_readings() {
    assert_eq!(anas("mE", FlagSet::all()), ["maEa/maEa_1/PREP"]);
    assert_eq!(
        anas("kAtb", FlagSet::all()),
        ["kAtab+a/kAtab_1/V", "kAtib/kAtib_1/N", "kAtib/kAtib_2/A"]
    );
    assert_eq!(
        anas("AlktAb", FlagSet::all()),
        [
            "Al+kitAb/kitAb_1/N",
            "Al+kut~Ab/kAtib_1/N",
            "Al+kut~Ab/kut~Ab_1/N"
        ]
    );
    assert!(anas("xyz", FlagSet::all()).is_empty());
}

#[test]
fn colloquial_entries_need_colloquial_flags() {
    assert!(!anas("Ally", FlagSet::ICA).is_empty());
    assert!(anas("Ally", FlagSet::MSA).is_empty());
    assert!(anas("Ally", FlagSet::classical_preset()).is_empty());
    assert!(!anas("dlwqty", FlagSet::ICA).is_empty());
    assert!(anas("dlwqty", FlagSet::CA | FlagSet::MSA).is_empty());
}

#[test]
fn gold_coverage_matches_the_fixture_design() {
    let lex = toy_lexicon();
    let analyzer = Analyzer::new(&lex, FlagSet::all());
    let (mut covered, mut unknown, mut total) = (0, 0, 0);
    for (surface, tuple) in gold_sentences().into_iter().flatten() {
        let (_, key) = analyzer.key_of(&surface);
        let found = analyze_type(&key, &lex, FlagSet::all());
        total += 1;
        if found.is_empty() {
            unknown += 1;
        } else {
            assert!(
                found.iter().any(|a| a.lemma_pos() == tuple),
                "{surface}: gold {tuple} not among {:?}",
                found.iter().map(|a| a.ana()).collect::<Vec<_>>()
            );
            covered += 1;
        }
    }
    assert_eq!(total, 203);
    assert_eq!(unknown, 14);
    assert_eq!(covered, 189);
}

#[test]
fn dictionary_fixture_gives_three_candidates() {
    let lex = toy_lexicon();
    let batch = import_tei_dictionary(
        &toy_file("dictionary.xml"),
        "dictionary.xml",
        FlagSet::MSA,
        &lex,
    )
    .unwrap();
    let rows: Vec<(String, ReviewStatus)> = batch
        .candidates
        .iter()
        .map(|c| (c.entry.voc.clone(), c.status))
        .collect();
    assert_eq!(
        rows,
        [
            ("kitAb".to_string(), ReviewStatus::Rejected),
            ("qaSor".to_string(), ReviewStatus::Pending),
            ("nahor".to_string(), ReviewStatus::Pending),
        ]
    );
    let tsv = batch.to_tsv();
    let body: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), 3);
    assert_eq!(ReviewBatch::from_tsv(&tsv, "review").unwrap(), batch);
}

#[test]
fn wordlist_fixture() {
    let batch = import_wordlist(
        &toy_file("wordlist.tsv"),
        "wordlist.tsv",
        EntryKind::Stem,
        FlagSet::ICA,
    )
    .unwrap();
    let surfaces: Vec<&str> = batch
        .candidates
        .iter()
        .map(|c| c.entry.surface.as_str())
        .collect();
    assert_eq!(
        surfaces,
        [arabic_to_buck("اللي").text, arabic_to_buck("اريزونا").text]
    );
    assert!(batch
        .candidates
        .iter()
        .all(|c| c.entry.flags == FlagSet::ICA));
}

#[test]
fn accepted_dictionary_entries_become_analyzable() {
    let lex = toy_lexicon();
    let mut batch = import_tei_dictionary(
        &toy_file("dictionary.xml"),
        "dictionary.xml",
        FlagSet::MSA,
        &lex,
    )
    .unwrap();
    assert!(merge_reviewed(&lex, &batch).is_err());
    batch.set_all(ReviewStatus::Pending, ReviewStatus::Accepted);
    let (merged, warnings) = merge_reviewed(&lex, &batch).unwrap();
    assert!(warnings.is_empty());
    assert_eq!(merged.len(), lex.len() + 2);
    assert!(analyze_type("qSr", &lex, FlagSet::MSA).is_empty());
    let found: BTreeSet<String> = analyze_type("AlqSr", &merged, FlagSet::MSA)
        .iter()
        .map(|a| a.ana())
        .collect();
    assert_eq!(found, BTreeSet::from(["Al+qaSor/qaSor_1/N".to_string()]));
    // MSA-only imports stay out of classical analysis
    assert!(analyze_type("qSr", &merged, FlagSet::CA).is_empty());

    let (again, _) = merge_reviewed(&merged, &batch).unwrap();
    assert_eq!(again.len(), merged.len());
}

#[test]
fn rendered_files_reload_to_the_same_lexicon() {
    let lex = toy_lexicon();
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in lex.render_files() {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    let back = Lexicon::load_dir(dir.path()).unwrap();
    for kind in [EntryKind::Prefix, EntryKind::Stem, EntryKind::Suffix] {
        let a: Vec<_> = lex.entries(kind).collect();
        let b: Vec<_> = back.entries(kind).collect();
        assert_eq!(a, b, "{kind}");
    }
    assert_eq!(lex.compat(), back.compat());
    assert!(toy_dir().join("stems.tsv").exists());
}
