use std::ops::Range;

/// A maximal run of Arabic letters (with any diacritics) in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    /// Character index of the first letter in the source.
    pub offset: usize,
    /// Position in the token stream.
    pub index: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, offset: usize, index: usize) -> Self {
        Token {
            surface: surface.into(),
            offset,
            index,
        }
    }

    pub fn char_len(&self) -> usize {
        self.surface.chars().count()
    }
}

const SENTENCE_END: &[char] = &['.', '!', '?', '\u{061F}', '\u{06D4}', '\n'];

/// Letters and combining marks of the Arabic blocks. Arabic-Indic digits,
/// punctuation and symbols are excluded.
pub fn is_word_char(c: char) -> bool {
    let arabic_block = matches!(c,
        '\u{0600}'..='\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{08A0}'..='\u{08FF}'
        | '\u{FB50}'..='\u{FDFF}'
        | '\u{FE70}'..='\u{FEFF}');
    let mark = matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}' | '\u{0640}');
    arabic_block && (c.is_alphabetic() || mark)
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    for (i, c) in text.chars().enumerate() {
        if is_word_char(c) {
            if current.is_empty() {
                start = i;
            }
            current.push(c);
        } else if !current.is_empty() {
            let index = tokens.len();
            tokens.push(Token::new(std::mem::take(&mut current), start, index));
        }
    }
    if !current.is_empty() {
        let index = tokens.len();
        tokens.push(Token::new(current, start, index));
    }
    tokens
}

/// Groups tokens into sentences. A boundary falls between two tokens when
/// the source text between them holds `.`, `!`, `?`, an Arabic question
/// mark or full stop, or a line break.
pub fn sentences(text: &str, tokens: &[Token]) -> Vec<Range<usize>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..tokens.len() {
        let gap_start = (tokens[i - 1].offset + tokens[i - 1].char_len()).min(chars.len());
        let gap_end = tokens[i].offset.min(chars.len());
        if chars[gap_start..gap_end]
            .iter()
            .any(|c| SENTENCE_END.contains(c))
        {
            out.push(start..i);
            start = i;
        }
    }
    if start < tokens.len() {
        out.push(start..tokens.len());
    }
    out
}
