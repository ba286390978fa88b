use std::fmt;

use bitflags::bitflags;

use crate::error::{Error, Result};

bitflags! {
    /// Usage markers selecting language varieties and sublanguages.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
    pub struct FlagSet: u16 {
        /// Classical Arabic
        const CA = 1 << 0;
        /// Modern Standard Arabic
        const MSA = 1 << 1;
        /// Informal Colloquial Arabic
        const ICA = 1 << 2;
        /// Medical sublanguage
        const SPEC_MED = 1 << 3;
        /// Alchemic sublanguage
        const SPEC_ALCH = 1 << 4;
        /// Grammatical sublanguage
        const SPEC_GRAM = 1 << 5;
        /// Named entities
        const NE = 1 << 6;
        /// Foreign named entities
        const FNE = 1 << 7;
        /// Colloquial aspectual preverbs
        const CAP = 1 << 8;
    }
}

const NAME_PREFIX: &str = "XRAM_";

impl FlagSet {
    /// Parses flag names, case-insensitively and with or without the
    /// `XRAM_` prefix. Repeated names are merged.
    pub fn parse_names<S: AsRef<str>>(names: &[S]) -> Result<FlagSet> {
        names.iter().try_fold(FlagSet::empty(), |acc, name| {
            Ok(acc | FlagSet::parse_one(name.as_ref())?)
        })
    }

    /// Parses a list separated by `,`, `|` or whitespace, e.g. `CA|MSA`.
    pub fn parse_list(list: &str) -> Result<FlagSet> {
        let names: Vec<&str> = list
            .split(|c: char| c == ',' || c == '|' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        FlagSet::parse_names(&names)
    }

    fn parse_one(name: &str) -> Result<FlagSet> {
        let upper = name.trim().to_ascii_uppercase();
        let bare = upper.strip_prefix(NAME_PREFIX).unwrap_or(&upper);
        FlagSet::from_name(bare).ok_or_else(|| Error::UnknownFlag {
            name: name.to_string(),
            valid: FlagSet::valid_names(),
        })
    }

    pub fn valid_names() -> String {
        FlagSet::all()
            .iter_names()
            .map(|(n, _)| n)
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Selection for classical texts: everything except MSA, ICA, SPEC_MED,
    /// FNE and CAP.
    pub fn classical_preset() -> FlagSet {
        FlagSet::all()
            - (FlagSet::MSA | FlagSet::ICA | FlagSet::SPEC_MED | FlagSet::FNE | FlagSet::CAP)
    }

    pub fn names(self) -> Vec<&'static str> {
        self.iter_names().map(|(n, _)| n).collect()
    }
}

impl fmt::Display for FlagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join("|"))
    }
}
