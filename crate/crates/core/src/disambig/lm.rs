//! Order-3 model over (lemma, tag) tuples, interpolated with an external
//! unigram frequency list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pos::{LemmaPos, PosTag};

pub const DEFAULT_LAMBDA: f64 = 0.7;
const FORMAT_TAG: &str = "arabmorph-lm";
const FORMAT_VERSION: u32 = 1;
const BOS_LEMMA: &str = "<s>";
const BOS_TAG: &str = "BOS";

/// A history slot. `Unknown` stands for a token the analyzer found no
/// reading for; it never occurs in the counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Bos,
    Tuple(LemmaPos),
    Unknown,
}

/// Counts from an external frequency list, `lemma<TAB>pos<TAB>count`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreqTable {
    counts: BTreeMap<LemmaPos, u64>,
    total: u64,
}

impl FreqTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Repeated rows for one tuple are summed.
    pub fn parse(text: &str, source: &str) -> Result<FreqTable> {
        let mut table = FreqTable::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::parse(source, i + 1, msg);
            let fields: Vec<&str> = line.split('\t').collect();
            let [lemma, pos, count] = fields[..] else {
                return Err(err(format!(
                    "expected lemma<TAB>pos<TAB>count, found {} fields",
                    fields.len()
                )));
            };
            let pos =
                PosTag::fold(pos.trim()).ok_or_else(|| err(format!("unknown POS tag {pos:?}")))?;
            let count: u64 = count
                .trim()
                .parse()
                .map_err(|_| err(format!("count {count:?} is not a non-negative integer")))?;
            if lemma.trim().is_empty() {
                return Err(err("empty lemma".into()));
            }
            table.add(LemmaPos::new(lemma.trim(), pos), count);
        }
        Ok(table)
    }

    pub fn add(&mut self, tuple: LemmaPos, count: u64) {
        *self.counts.entry(tuple).or_insert(0) += count;
        self.total += count;
    }

    pub fn count(&self, tuple: &LemmaPos) -> u64 {
        self.counts.get(tuple).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LemmaPos, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }
}

type Trigram = (Sym, Sym, LemmaPos);
type Bigram = (Sym, LemmaPos);

#[derive(Debug, Clone, PartialEq)]
pub struct LmModel {
    lambda: f64,
    trigram: BTreeMap<Trigram, u64>,
    bigram: BTreeMap<Bigram, u64>,
    unigram: BTreeMap<LemmaPos, u64>,
    freq: FreqTable,
    vocab: BTreeSet<LemmaPos>,
    // derived from the trigram counts
    ctx3: BTreeMap<(Sym, Sym), u64>,
    ctx2: BTreeMap<Sym, u64>,
    tokens: u64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::Model(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )))
    }
}

impl LmModel {
    fn from_trigrams(
        trigram: BTreeMap<Trigram, u64>,
        freq: FreqTable,
        lambda: f64,
        extra_vocab: impl IntoIterator<Item = LemmaPos>,
    ) -> Result<Self> {
        check_lambda(lambda)?;
        let mut bigram = BTreeMap::new();
        let mut unigram = BTreeMap::new();
        let mut ctx3 = BTreeMap::new();
        let mut ctx2 = BTreeMap::new();
        let mut tokens = 0;
        for ((a, b, c), &n) in &trigram {
            *bigram.entry((b.clone(), c.clone())).or_insert(0) += n;
            *unigram.entry(c.clone()).or_insert(0) += n;
            *ctx3.entry((a.clone(), b.clone())).or_insert(0) += n;
            *ctx2.entry(b.clone()).or_insert(0) += n;
            tokens += n;
        }
        let mut vocab: BTreeSet<LemmaPos> = unigram.keys().cloned().collect();
        vocab.extend(freq.counts.keys().cloned());
        vocab.extend(extra_vocab);
        Ok(LmModel {
            lambda,
            trigram,
            bigram,
            unigram,
            freq,
            vocab,
            ctx3,
            ctx2,
            tokens,
        })
    }

    /// Counts trigrams over gold sentences, each padded with two boundary
    /// symbols.
    pub fn train(gold: &[Vec<LemmaPos>], freq: FreqTable, lambda: f64) -> Result<Self> {
        if gold.iter().all(Vec::is_empty) {
            return Err(Error::Model("cannot train on an empty corpus".into()));
        }
        let mut trigram = BTreeMap::new();
        for sentence in gold {
            let (mut a, mut b) = (Sym::Bos, Sym::Bos);
            for t in sentence {
                *trigram
                    .entry((a.clone(), b.clone(), t.clone()))
                    .or_insert(0) += 1;
                a = std::mem::replace(&mut b, Sym::Tuple(t.clone()));
            }
        }
        Self::from_trigrams(trigram, freq, lambda, [])
    }

    /// A model with no sample counts that ranks by the frequency list alone.
    pub fn frequency_only(freq: FreqTable) -> Self {
        Self::from_trigrams(BTreeMap::new(), freq, 0.0, []).expect("0 is a valid lambda")
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        self.lambda = lambda;
        Ok(self)
    }

    /// Same sample counts, different frequency list. The vocabulary is
    /// recomputed from the sample and the new list.
    pub fn with_freq(self, freq: FreqTable) -> Self {
        Self::from_trigrams(self.trigram, freq, self.lambda, []).expect("lambda already checked")
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn freq(&self) -> &FreqTable {
        &self.freq
    }

    /// Number of tuples in the training sample.
    pub fn sample_size(&self) -> u64 {
        self.tokens
    }

    pub fn trigram_count(&self, a: &Sym, b: &Sym, c: &LemmaPos) -> u64 {
        self.trigram
            .get(&(a.clone(), b.clone(), c.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn bigram_count(&self, b: &Sym, c: &LemmaPos) -> u64 {
        self.bigram
            .get(&(b.clone(), c.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn unigram_count(&self, c: &LemmaPos) -> u64 {
        self.unigram.get(c).copied().unwrap_or(0)
    }

    fn outcomes(&self) -> f64 {
        self.vocab.len() as f64 + 1.0
    }

    /// Add-one estimate from the highest order that has seen the candidate
    /// after this history. A history holding an unknown token is scored at
    /// the unigram level.
    pub fn backoff_prob(&self, ctx: &[Sym; 2], cand: &LemmaPos) -> f64 {
        let [a, b] = ctx;
        let v = self.outcomes();
        let unigram = || (self.unigram_count(cand) as f64 + 1.0) / (self.tokens as f64 + v);
        if *a == Sym::Unknown || *b == Sym::Unknown {
            return unigram();
        }
        let n3 = self.trigram_count(a, b, cand);
        if n3 > 0 {
            let ctx = self.ctx3.get(&(a.clone(), b.clone())).copied().unwrap_or(0);
            return (n3 as f64 + 1.0) / (ctx as f64 + v);
        }
        let n2 = self.bigram_count(b, cand);
        if n2 > 0 {
            let ctx = self.ctx2.get(b).copied().unwrap_or(0);
            return (n2 as f64 + 1.0) / (ctx as f64 + v);
        }
        unigram()
    }

    pub fn freq_prob(&self, cand: &LemmaPos) -> f64 {
        (self.freq.count(cand) as f64 + 1.0) / (self.freq.total as f64 + self.outcomes())
    }

    pub fn score(&self, ctx: &[Sym; 2], cand: &LemmaPos) -> f64 {
        let l = self.lambda;
        l * self.backoff_prob(ctx, cand) + (1.0 - l) * self.freq_prob(cand)
    }

    /// Score of a tuple seen neither in the sample nor in the frequency list.
    pub fn floor(&self) -> f64 {
        let v = self.outcomes();
        self.lambda / (self.tokens as f64 + v) + (1.0 - self.lambda) / (self.freq.total as f64 + v)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let sym = |s: &Sym| match s {
            Sym::Tuple(t) => format!("{}\t{}", t.lemma, t.pos),
            _ => format!("{BOS_LEMMA}\t{BOS_TAG}"),
        };
        let tup = |t: &LemmaPos| format!("{}\t{}", t.lemma, t.pos);
        let _ = writeln!(out, "{FORMAT_TAG}\t{FORMAT_VERSION}");
        let _ = writeln!(out, "lambda\t{}", self.lambda);
        let _ = writeln!(out, "vocab\t{}", self.vocab.len());
        let _ = writeln!(out, "UNIGRAM\t{}", self.unigram.len());
        for (c, n) in &self.unigram {
            let _ = writeln!(out, "TUPLE\t{}\t{n}", tup(c));
        }
        let _ = writeln!(out, "BIGRAM\t{}", self.bigram.len());
        for ((b, c), n) in &self.bigram {
            let _ = writeln!(out, "TUPLE\t{}\t{}\t{n}", sym(b), tup(c));
        }
        let _ = writeln!(out, "TRIGRAM\t{}", self.trigram.len());
        for ((a, b, c), n) in &self.trigram {
            let _ = writeln!(out, "TUPLE\t{}\t{}\t{}\t{n}", sym(a), sym(b), tup(c));
        }
        let _ = writeln!(out, "FREQ\t{}", self.freq.counts.len());
        for (c, n) in &self.freq.counts {
            let _ = writeln!(out, "TUPLE\t{}\t{n}", tup(c));
        }
        let _ = writeln!(out, "VOCAB\t{}", self.vocab.len());
        for c in &self.vocab {
            let _ = writeln!(out, "TUPLE\t{}", tup(c));
        }
        out
    }

    pub fn load(text: &str, source: &str) -> Result<LmModel> {
        let mut rd = Lines {
            lines: text.lines().map(|l| l.trim_end_matches('\r')).collect(),
            at: 0,
            source,
        };
        let err = |n: usize, msg: String| Error::parse(source, n, msg);

        let (n, head) = rd.next("header")?;
        if head.len() != 2 || head[0] != FORMAT_TAG {
            return Err(err(
                n,
                format!("expected `{FORMAT_TAG}<TAB>version` header"),
            ));
        }
        if head[1] != FORMAT_VERSION.to_string() {
            return Err(err(n, format!("unsupported model version {:?}", head[1])));
        }
        let (ln, lambda) = rd.field("lambda")?;
        let lambda: f64 = lambda
            .parse()
            .map_err(|_| err(ln, format!("bad lambda {lambda:?}")))?;
        let (vn, vocab_size) = rd.field("vocab")?;
        let vocab_size: usize = vocab_size
            .parse()
            .map_err(|_| err(vn, format!("bad vocab size {vocab_size:?}")))?;

        let parse_sym = |n: usize, lemma: &str, tag: &str, allow_bos: bool| -> Result<Sym> {
            if lemma == BOS_LEMMA && tag == BOS_TAG {
                return if allow_bos {
                    Ok(Sym::Bos)
                } else {
                    Err(err(n, "boundary symbol not allowed here".into()))
                };
            }
            let pos: PosTag = tag
                .parse()
                .map_err(|_| err(n, format!("unknown POS tag {tag:?}")))?;
            Ok(Sym::Tuple(LemmaPos::new(lemma, pos)))
        };
        let parse_tuple = |n: usize, lemma: &str, tag: &str| -> Result<LemmaPos> {
            match parse_sym(n, lemma, tag, false)? {
                Sym::Tuple(t) => Ok(t),
                _ => unreachable!(),
            }
        };
        let parse_count = |n: usize, s: &str| -> Result<u64> {
            s.parse().map_err(|_| err(n, format!("bad count {s:?}")))
        };

        let uni_rows = rd.section("UNIGRAM", 3)?;
        let bi_rows = rd.section("BIGRAM", 5)?;
        let tri_rows = rd.section("TRIGRAM", 7)?;
        let freq_rows = rd.section("FREQ", 3)?;
        let vocab_rows = rd.section("VOCAB", 2)?;
        if let Some((n, _)) = rd.peek() {
            return Err(err(n, "unexpected content after the VOCAB section".into()));
        }

        let mut trigram = BTreeMap::new();
        for (n, r) in &tri_rows {
            let key = (
                parse_sym(*n, r[0], r[1], true)?,
                parse_sym(*n, r[2], r[3], true)?,
                parse_tuple(*n, r[4], r[5])?,
            );
            trigram.insert(key, parse_count(*n, r[6])?);
        }
        let mut freq = FreqTable::new();
        for (n, r) in &freq_rows {
            freq.add(parse_tuple(*n, r[0], r[1])?, parse_count(*n, r[2])?);
        }
        let mut vocab = Vec::new();
        for (n, r) in &vocab_rows {
            vocab.push(parse_tuple(*n, r[0], r[1])?);
        }
        let model = LmModel::from_trigrams(trigram, freq, lambda, vocab)
            .map_err(|e| err(ln, e.to_string()))?;

        let mut unigram = BTreeMap::new();
        for (n, r) in &uni_rows {
            unigram.insert(parse_tuple(*n, r[0], r[1])?, parse_count(*n, r[2])?);
        }
        let mut bigram = BTreeMap::new();
        for (n, r) in &bi_rows {
            let key = (
                parse_sym(*n, r[0], r[1], true)?,
                parse_tuple(*n, r[2], r[3])?,
            );
            bigram.insert(key, parse_count(*n, r[4])?);
        }
        if unigram != model.unigram || bigram != model.bigram {
            return Err(Error::Model(format!(
                "{source}: unigram or bigram counts disagree with the trigram sums"
            )));
        }
        if model.vocab.len() != vocab_size {
            return Err(Error::Model(format!(
                "{source}: header says {vocab_size} vocabulary tuples, found {}",
                model.vocab.len()
            )));
        }
        Ok(model)
    }
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    at: usize,
    source: &'a str,
}

impl<'a> Lines<'a> {
    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines[self.at..]
            .iter()
            .position(|l| !l.is_empty())
            .map(|k| (self.at + k + 1, self.lines[self.at + k]))
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.lines.get(self.at) {
            Some(l) => {
                self.at += 1;
                Ok((self.at, l.split('\t').collect()))
            }
            None => Err(Error::parse(
                self.source,
                self.at + 1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    fn field(&mut self, name: &str) -> Result<(usize, String)> {
        let (n, f) = self.next(name)?;
        match f[..] {
            [k, v] if k == name => Ok((n, v.to_string())),
            _ => Err(Error::parse(
                self.source,
                n,
                format!("expected `{name}<TAB>value`"),
            )),
        }
    }

    fn section(&mut self, name: &str, width: usize) -> Result<Vec<(usize, Vec<&'a str>)>> {
        let (n, f) = self.next(name)?;
        let count: usize = match f[..] {
            [k, c] if k == name => c
                .parse()
                .map_err(|_| Error::parse(self.source, n, format!("bad {name} length {c:?}")))?,
            _ => {
                return Err(Error::parse(
                    self.source,
                    n,
                    format!("expected `{name}<TAB>count` section header"),
                ))
            }
        };
        let mut rows = Vec::with_capacity(count);
        for _ in 0..count {
            let (n, f) = self.next("TUPLE row")?;
            if f.len() != width + 1 || f[0] != "TUPLE" {
                return Err(Error::parse(
                    self.source,
                    n,
                    format!("expected TUPLE row with {width} fields in {name}"),
                ));
            }
            rows.push((n, f[1..].to_vec()));
        }
        Ok(rows)
    }
}
