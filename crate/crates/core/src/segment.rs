//! Phonetic segments and their coarse sound class.

use alloc::string::{String, ToString};
use core::fmt;

use unicode_normalization::char::decompose_canonical;

use crate::{Error, Result};

/// Gap symbol used in alignments.
pub const GAP: &str = "-";
/// Missing-data symbol; never a valid segment.
pub const MISSING: &str = "Ø";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Klass {
    Consonant,
    Vowel,
    Tone,
    Marker,
}

impl Klass {
    pub fn as_str(self) -> &'static str {
        match self {
            Klass::Consonant => "consonant",
            Klass::Vowel => "vowel",
            Klass::Tone => "tone",
            Klass::Marker => "marker",
        }
    }
}

/// One phonetic segment. The class is derived from the token, so two segments
/// with the same token always compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    token: String,
    klass: Klass,
}

impl Segment {
    pub fn new(token: &str) -> Result<Self> {
        let klass = classify(token)?;
        Ok(Segment { token: token.to_string(), klass })
    }

    pub fn token(&self) -> &str {
        &self.token
    }

    pub fn klass(&self) -> Klass {
        self.klass
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token)
    }
}

const VOWEL_LETTERS: &[char] = &[
    'a', 'e', 'i', 'o', 'u', 'y', 'A', 'E', 'I', 'O', 'U', 'Y', 'æ', 'ɑ', 'ɒ', 'ɐ', 'ə', 'ɘ', 'ɚ',
    'ɛ', 'ɜ', 'ɝ', 'ɞ', 'ɤ', 'ɨ', 'ɪ', 'ɯ', 'ɵ', 'ø', 'œ', 'ɶ', 'ʉ', 'ʊ', 'ʌ', 'ʏ', 'ɔ', 'ɷ', 'ᴀ',
    'ᴇ', 'ɩ', 'ʋ',
];

const MARKERS: &[&str] = &["+", "_", "#"];

fn is_tone_char(c: char) -> bool {
    c.is_ascii_digit()
        || matches!(c, '⁰' | '¹' | '²' | '³' | '⁴' | '⁵' | '⁶' | '⁷' | '⁸' | '⁹')
        || matches!(c, '₀'..='₉')
        || ('\u{02E5}'..='\u{02E9}').contains(&c)
        || ('\u{A700}'..='\u{A71F}').contains(&c)
}

/// Spacing modifier letters and combining marks never serve as the base of a token.
fn is_modifier(c: char) -> bool {
    ('\u{02B0}'..='\u{02FF}').contains(&c)
        || ('\u{0300}'..='\u{036F}').contains(&c)
        || ('\u{1DC0}'..='\u{1DFF}').contains(&c)
        || ('\u{1D2C}'..='\u{1D6A}').contains(&c)
        || matches!(c, '\u{0361}' | '\u{035C}' | 'ː' | 'ˑ')
}

fn base_char(token: &str) -> Option<char> {
    for c in token.chars() {
        let mut base = None;
        decompose_canonical(c, |d| {
            if base.is_none() {
                base = Some(d);
            }
        });
        match base {
            Some(b) if !is_modifier(b) => return Some(b),
            _ => continue,
        }
    }
    None
}

/// Assigns a token to its coarse sound class.
///
/// Tokens made only of digits or tone letters are tones, `+ _ #` are
/// morpheme markers, and everything else is decided by the first
/// non-modifier character after canonical decomposition.
pub fn classify(token: &str) -> Result<Klass> {
    if token.is_empty()
        || token == GAP
        || token == MISSING
        || token.chars().any(char::is_whitespace)
    {
        return Err(Error::InvalidSegment(token.to_string()));
    }
    if MARKERS.contains(&token) {
        return Ok(Klass::Marker);
    }
    if token.chars().all(is_tone_char) {
        return Ok(Klass::Tone);
    }
    match base_char(token) {
        Some(c) if VOWEL_LETTERS.contains(&c) => Ok(Klass::Vowel),
        _ => Ok(Klass::Consonant),
    }
}
