//! Buckwalter transliteration.
//!
//! The mapping is one-to-one, so conversion in either direction is a plain
//! character table lookup. The standard table ships as `data/buckwalter.tsv`
//! and can be replaced with [`Translit::from_table`].

use std::collections::HashMap;
use std::fmt;
use std::sync::LazyLock;

use crate::error::{Error, Result};

const STANDARD_TABLE: &str = include_str!("../data/buckwalter.tsv");

static STANDARD: LazyLock<Translit> =
    LazyLock::new(|| Translit::from_table(STANDARD_TABLE).expect("bundled table is valid"));

/// Short vowels, sukun, shadda and tanwin.
pub const DIACRITICS: &[char] = &['a', 'u', 'i', 'o', '~', 'F', 'N', 'K'];

pub const TATWEEL: char = '_';

#[derive(Debug, Clone)]
pub struct Translit {
    to_buck: HashMap<char, char>,
    to_arabic: HashMap<char, char>,
}

/// Result of converting Arabic script to Buckwalter. Characters the table
/// does not cover are copied verbatim and listed in `unmapped` with their
/// character index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transliteration {
    pub text: String,
    pub unmapped: Vec<(usize, char)>,
}

impl Translit {
    pub fn standard() -> &'static Translit {
        &STANDARD
    }

    /// Parses a `codepoint<TAB>buckwalter-char` table. Code points are written
    /// as `U+XXXX` or bare hex.
    pub fn from_table(text: &str) -> Result<Self> {
        let mut to_buck = HashMap::new();
        let mut to_arabic = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::TranslitTable {
                line: line_no,
                msg: msg.to_string(),
            };
            let (cp, bw) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected two columns"))?;
            let hex = cp.trim().trim_start_matches("U+").trim_start_matches("u+");
            let arabic = u32::from_str_radix(hex, 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| bad("invalid code point"))?;
            let mut chars = bw.chars();
            let buck = match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_graphic() => c,
                _ => return Err(bad("Buckwalter side must be one printable ASCII character")),
            };
            if to_buck.insert(arabic, buck).is_some() {
                return Err(bad("duplicate code point"));
            }
            if to_arabic.insert(buck, arabic).is_some() {
                return Err(bad("duplicate Buckwalter character"));
            }
        }
        if to_buck.is_empty() {
            return Err(Error::TranslitTable {
                line: 0,
                msg: "empty table".into(),
            });
        }
        Ok(Translit { to_buck, to_arabic })
    }

    pub fn to_buckwalter(&self, s: &str) -> Transliteration {
        let mut text = String::with_capacity(s.len());
        let mut unmapped = Vec::new();
        for (i, c) in s.chars().enumerate() {
            match self.to_buck.get(&c) {
                Some(&b) => text.push(b),
                None => {
                    text.push(c);
                    unmapped.push((i, c));
                }
            }
        }
        Transliteration { text, unmapped }
    }

    pub fn to_arabic(&self, s: &str) -> Result<String> {
        s.chars()
            .enumerate()
            .map(|(pos, ch)| {
                self.to_arabic
                    .get(&ch)
                    .copied()
                    .ok_or(Error::Translit { pos, ch })
            })
            .collect()
    }

    pub fn is_arabic(&self, c: char) -> bool {
        self.to_buck.contains_key(&c)
    }

    pub fn is_buckwalter(&self, c: char) -> bool {
        self.to_arabic.contains_key(&c)
    }

    /// Checks that every character belongs to the Buckwalter side of the table.
    pub fn validate(&self, s: &str) -> Result<()> {
        match s.chars().enumerate().find(|(_, c)| !self.is_buckwalter(*c)) {
            Some((pos, ch)) => Err(Error::Translit { pos, ch }),
            None => Ok(()),
        }
    }

    pub fn arabic_chars(&self) -> impl Iterator<Item = char> + '_ {
        self.to_buck.keys().copied()
    }

    pub fn buckwalter_chars(&self) -> impl Iterator<Item = char> + '_ {
        self.to_arabic.keys().copied()
    }
}

/// A string over the Buckwalter alphabet of the standard table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BuckString(String);

impl BuckString {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        Translit::standard().validate(&s)?;
        Ok(BuckString(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for BuckString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for BuckString {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub fn arabic_to_buck(s: &str) -> Transliteration {
    Translit::standard().to_buckwalter(s)
}

pub fn buck_to_arabic(s: &str) -> Result<String> {
    Translit::standard().to_arabic(s)
}

pub fn strip_diacritics(s: &str) -> String {
    s.chars().filter(|c| !DIACRITICS.contains(c)).collect()
}

/// Builds the key used for lexicon lookup from a Buckwalter token:
/// tatweel and diacritics are removed; with `fold_alif` the hamzated and
/// madda alif variants collapse to bare `A`.
pub fn lookup_key(s: &str, fold_alif: bool) -> String {
    s.chars()
        .filter(|&c| c != TATWEEL && !DIACRITICS.contains(&c))
        .map(|c| match c {
            '>' | '<' | '|' | '{' if fold_alif => 'A',
            _ => c,
        })
        .collect()
}
