mod common;

use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use arabmorph::analyzer::{analyze_type, Analyzer, Token, TypeCache};
use arabmorph::disambig::{is_rank_ordered, parse_rules, FreqTable, LmModel, Sym};
use arabmorph::lexicon::{EntryKind, FlagSet, Lexicon};
use arabmorph::pipeline::Pipeline;
use arabmorph::pos::LemmaPos;
use arabmorph::teixml::{parse_tei, TeiDoc, TeiMeta, TeiNote, TeiWord};
use arabmorph::translit::buck_to_arabic;

use common::{gold_sentences, oracle, readings, toy_file, toy_lexicon};

fn lex() -> &'static Lexicon {
    static LEX: OnceLock<Lexicon> = OnceLock::new();
    LEX.get_or_init(toy_lexicon)
}

fn model() -> &'static LmModel {
    static LM: OnceLock<LmModel> = OnceLock::new();
    LM.get_or_init(|| {
        let gold: Vec<Vec<LemmaPos>> = gold_sentences()
            .into_iter()
            .map(|s| s.into_iter().map(|(_, t)| t).collect())
            .collect();
        let freq = FreqTable::parse(&toy_file("freq.tsv"), "freq.tsv").unwrap();
        LmModel::train(&gold, freq, 0.7).unwrap()
    })
}

fn surfaces(kind: EntryKind) -> Vec<String> {
    let mut v: Vec<String> = lex().entries(kind).map(|e| e.surface.clone()).collect();
    v.sort();
    v.dedup();
    v
}

/// Lookup keys built from lexicon pieces, so most of them are analyzable,
/// with an occasional stray letter.
fn key() -> impl Strategy<Value = String> {
    (
        prop::sample::select(surfaces(EntryKind::Prefix)),
        prop::sample::select(surfaces(EntryKind::Stem)),
        prop::sample::select(surfaces(EntryKind::Suffix)),
        prop::option::weighted(0.2, prop::sample::select(vec!["b", "A", "w", "p", "y"])),
    )
        .prop_map(|(p, s, x, noise)| format!("{p}{s}{}{x}", noise.unwrap_or("")))
}

fn flags() -> impl Strategy<Value = FlagSet> {
    any::<u16>().prop_map(FlagSet::from_bits_truncate)
}

fn corpus_words() -> Vec<String> {
    let mut v: Vec<String> = toy_file("corpus.txt")
        .split(|c: char| c.is_whitespace() || c == '.')
        .filter(|w| !w.is_empty())
        .map(String::from)
        .collect();
    v.sort();
    v.dedup();
    v
}

fn tuples() -> Vec<LemmaPos> {
    let mut v: Vec<LemmaPos> = gold_sentences()
        .into_iter()
        .flatten()
        .map(|(_, t)| t)
        .collect();
    v.push(LemmaPos::new("unseen_1", "N".parse().unwrap()));
    v.sort();
    v.dedup();
    v
}

fn sym() -> impl Strategy<Value = Sym> {
    prop_oneof![
        8 => prop::sample::select(tuples()).prop_map(Sym::Tuple),
        1 => Just(Sym::Bos),
        1 => Just(Sym::Unknown),
    ]
}

fn ana() -> impl Strategy<Value = String> {
    prop::sample::select(tuples()).prop_map(|t| format!("v/{}/{}", t.lemma, t.pos))
}

fn tei_word() -> impl Strategy<Value = TeiWord> {
    (
        "[bktAlmn]{1,6}",
        prop_oneof![9 => ana(), 1 => Just("UNK//UNK".to_string())],
        prop::collection::vec(ana(), 0..4),
        any::<prop::sample::Index>(),
        any::<bool>(),
    )
        .prop_map(|(buck, ana, notes, pick, mark)| {
            let unknown = ana == "UNK//UNK";
            let mut notes: Vec<TeiNote> = if unknown {
                vec![]
            } else {
                notes.into_iter().map(TeiNote::new).collect()
            };
            if mark && !notes.is_empty() {
                let k = pick.index(notes.len());
                notes[k].corrected = true;
            }
            TeiWord {
                surface: buck_to_arabic(&buck).unwrap(),
                ana,
                notes,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn more_flags_never_lose_readings(k in key(), wide in flags(), mask in flags()) {
        let narrow = wide & mask;
        let small = readings(&analyze_type(&k, lex(), narrow));
        let big = readings(&analyze_type(&k, lex(), wide));
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn analysis_matches_the_oracle(k in key(), active in flags()) {
        let got = analyze_type(&k, lex(), active);
        prop_assert_eq!(readings(&got).len(), got.len());
        prop_assert_eq!(readings(&got), oracle(&k, lex(), active));
    }

    #[test]
    fn cache_is_transparent(words in prop::collection::vec(prop::sample::select(corpus_words()), 1..40), active in flags()) {
        let analyzer = Analyzer::new(lex(), active);
        let cache = TypeCache::new();
        let mut keys = HashSet::new();
        for (i, w) in words.iter().enumerate() {
            let set = analyzer.analyze_token(&Token::new(w.as_str(), 0, i), &cache);
            let (_, key) = analyzer.key_of(w);
            prop_assert_eq!(&set.analyses, &analyze_type(&key, lex(), active));
            keys.insert(key);
        }
        let stats = cache.stats();
        prop_assert_eq!(stats.misses, keys.len());
        prop_assert_eq!(stats.hits + stats.misses, words.len());
    }

    #[test]
    fn scores_are_probabilities_above_the_floor(a in sym(), b in sym(), c in prop::sample::select(tuples()), lambda in 0.0f64..=1.0) {
        let m = model().clone().with_lambda(lambda).unwrap();
        let s = m.score(&[a, b], &c);
        prop_assert!(s > 0.0 && s <= 1.0, "{}", s);
        prop_assert!(s >= m.floor() * (1.0 - 1e-12));
    }

    #[test]
    fn ranked_output_is_ordered_and_filter_safe(words in prop::collection::vec(prop::sample::select(corpus_words()), 0..25)) {
        let rules = parse_rules(&toy_file("rules.txt"), "rules.txt").unwrap();
        let p = Pipeline::new(lex(), FlagSet::all(), rules, model().clone());
        let text = words.join(" ");
        let out = p.run(&text);
        prop_assert_eq!(out.ranked.len(), words.len());
        for r in &out.ranked {
            prop_assert!(is_rank_ordered(r));
            prop_assert_eq!(r.unknown, r.ranked.is_empty() && r.filtered_out.is_empty());
        }
        prop_assert_eq!(p.run(&text), out);
    }

    #[test]
    fn tei_survives_a_round_trip(words in prop::collection::vec(tei_word(), 0..12)) {
        let doc = TeiDoc { meta: TeiMeta::new("prop", "MSA"), words };
        let xml = doc.to_xml();
        let back = parse_tei(&xml).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_xml(), xml);
        let fixed = doc.apply_corrections();
        prop_assert_eq!(fixed.apply_corrections(), fixed.clone());
        for (a, b) in doc.words.iter().zip(&fixed.words) {
            let mut x: Vec<&str> = a.readings().collect();
            let mut y: Vec<&str> = b.readings().collect();
            x.sort();
            y.sort();
            prop_assert_eq!(x, y);
        }
    }
}
