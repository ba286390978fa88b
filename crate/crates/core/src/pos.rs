use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Closed set of primary part-of-speech tags used by the rule filter, the
/// language model and the TEI output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosTag {
    N,
    V,
    A,
    Prep,
    Pron,
    Det,
    Conj,
    Part,
    Num,
    Adv,
    Ne,
}

impl PosTag {
    pub const ALL: [PosTag; 11] = [
        PosTag::N,
        PosTag::V,
        PosTag::A,
        PosTag::Prep,
        PosTag::Pron,
        PosTag::Det,
        PosTag::Conj,
        PosTag::Part,
        PosTag::Num,
        PosTag::Adv,
        PosTag::Ne,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::N => "N",
            PosTag::V => "V",
            PosTag::A => "A",
            PosTag::Prep => "PREP",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Conj => "CONJ",
            PosTag::Part => "PART",
            PosTag::Num => "NUM",
            PosTag::Adv => "ADV",
            PosTag::Ne => "NE",
        }
    }

    /// Maps a lexicon head tag onto the closed set. Subtypes fold into their
    /// head class: `Ndu` and `NOUN` become `N`, `PV`/`IV`/`CV` become `V`,
    /// `NOUN_PROP` becomes `NE`, and so on.
    pub fn fold(head: &str) -> Option<PosTag> {
        if let Ok(tag) = head.parse() {
            return Some(tag);
        }
        let upper = head.to_ascii_uppercase();
        let tag = if upper.starts_with("NOUN_PROP") || upper.starts_with("NPROP") {
            PosTag::Ne
        } else if upper.starts_with("NUM") {
            PosTag::Num
        } else if upper.starts_with("ADJ") {
            PosTag::A
        } else if upper.starts_with("ADV") {
            PosTag::Adv
        } else if upper.starts_with("PRON") || upper.starts_with("DEM") || upper.starts_with("REL")
        {
            PosTag::Pron
        } else if upper.starts_with("PREP") {
            PosTag::Prep
        } else if upper.starts_with("CONJ") {
            PosTag::Conj
        } else if upper.starts_with("DET") {
            PosTag::Det
        } else if upper.starts_with("PART") || upper.ends_with("_PART") || upper == "NEG" {
            PosTag::Part
        } else if upper.starts_with("VERB")
            || upper.starts_with("PV")
            || upper.starts_with("IV")
            || upper.starts_with("CV")
        {
            PosTag::V
        } else if upper.starts_with("NOUN") || (upper.starts_with('N') && head.len() <= 4) {
            PosTag::N
        } else {
            return None;
        };
        Some(tag)
    }

    /// Head tag of a stem POS annotation such as `kitAb/Ndu` or
    /// `kAtab/PV+a/PVSUFF`: the text after the first `/`, up to the next `+`.
    pub fn head_of(annotation: &str) -> Option<&str> {
        let (_, rest) = annotation.split_once('/')?;
        let head = rest.split('+').next().unwrap_or(rest);
        (!head.is_empty()).then_some(head)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Lexicon(format!("unknown POS tag {s:?}")))
    }
}

/// A (lemma, primary tag) pair: the unit the language model counts and the
/// granularity at which evaluation compares readings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LemmaPos {
    pub lemma: String,
    pub pos: PosTag,
}

impl LemmaPos {
    pub fn new(lemma: impl Into<String>, pos: PosTag) -> Self {
        LemmaPos {
            lemma: lemma.into(),
            pos,
        }
    }
}

impl fmt::Display for LemmaPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.lemma, self.pos)
    }
}
