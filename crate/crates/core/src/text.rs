//! Texts over small dense alphabets.
//!
//! A [`Text`] stores letters as dense ids into an [`Alphabet`] that maps
//! them back to external symbols (single glyphs or integer tokens). All
//! positions in the public API are 1-based; `T[i..j]` is the factor from
//! position `i` through `j` inclusive.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TextError {
    /// A symbol occurs twice in an alphabet definition.
    DuplicateSymbol(String),
    /// An alphabet must contain at least one symbol.
    EmptyAlphabet,
    /// A symbol that is not part of the alphabet.
    UnknownSymbol(String),
    /// A letter id outside `[0, sigma)`.
    LetterOutOfRange { id: u32, sigma: usize },
    /// A factor query `T[i..j]` outside `1 <= i <= j+1, j <= n`.
    BadFactor { i: usize, j: usize, n: usize },
    /// Parikh vectors over different alphabet sizes were mixed.
    AlphabetMismatch { left: usize, right: usize },
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TextError::DuplicateSymbol(s) => write!(f, "duplicate symbol {s:?} in alphabet"),
            TextError::EmptyAlphabet => write!(f, "alphabet must have at least one symbol"),
            TextError::UnknownSymbol(s) => write!(f, "symbol {s:?} not in alphabet"),
            TextError::LetterOutOfRange { id, sigma } => {
                write!(f, "letter id {id} out of range for alphabet size {sigma}")
            }
            TextError::BadFactor { i, j, n } => {
                write!(f, "factor T[{i}..{j}] invalid for text of length {n}")
            }
            TextError::AlphabetMismatch { left, right } => {
                write!(f, "alphabet size mismatch: {left} vs {right}")
            }
        }
    }
}

impl std::error::Error for TextError {}

/// An ordered set of distinct external symbols with dense ids `0..sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    id_of: HashMap<String, u32>,
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(symbols: I) -> Result<Self, TextError> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(TextError::EmptyAlphabet);
        }
        let mut id_of = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if id_of.insert(s.clone(), i as u32).is_some() {
                return Err(TextError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols, id_of })
    }

    /// Alphabet whose symbols are the single characters of `chars`.
    pub fn of_chars(chars: &str) -> Result<Self, TextError> {
        Alphabet::new(chars.chars().map(|c| c.to_string()))
    }

    /// Alphabet of decimal digit symbols `0..sigma` (useful for tests).
    pub fn of_digits(sigma: usize) -> Self {
        Alphabet::new((0..sigma).map(|d| d.to_string())).expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: sigma >= 1
    }

    pub fn id_of(&self, symbol: &str) -> Result<u32, TextError> {
        self.id_of
            .get(symbol)
            .copied()
            .ok_or_else(|| TextError::UnknownSymbol(symbol.to_string()))
    }

    pub fn symbol(&self, id: u32) -> &str {
        &self.symbols[id as usize]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }
}

/// A string over a dense integer alphabet. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    letters: Vec<u32>,
    alphabet: Arc<Alphabet>,
}

impl Text {
    pub fn new(letters: Vec<u32>, alphabet: Arc<Alphabet>) -> Result<Self, TextError> {
        let sigma = alphabet.len();
        for &id in &letters {
            if id as usize >= sigma {
                return Err(TextError::LetterOutOfRange { id, sigma });
            }
        }
        Ok(Text { letters, alphabet })
    }

    /// Text from one symbol per character, over the alphabet of characters
    /// seen (in first-occurrence order) unless `alphabet` is given.
    pub fn from_chars(s: &str, alphabet: Option<Arc<Alphabet>>) -> Result<Self, TextError> {
        let alphabet = match alphabet {
            Some(a) => a,
            None => {
                let mut seen = Vec::new();
                for c in s.chars() {
                    let cs = c.to_string();
                    if !seen.contains(&cs) {
                        seen.push(cs);
                    }
                }
                if seen.is_empty() {
                    // an empty text still needs a (dummy) alphabet
                    seen.push("0".to_string());
                }
                Arc::new(Alphabet::new(seen)?)
            }
        };
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            letters.push(alphabet.id_of(&c.to_string())?);
        }
        Ok(Text { letters, alphabet })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    /// Letter at 1-based position `i`.
    pub fn letter(&self, i: usize) -> u32 {
        self.letters[i - 1]
    }

    /// The factor `T[i..j]` as a new text (`i = j+1` gives the empty factor).
    pub fn factor(&self, i: usize, j: usize) -> Result<Text, TextError> {
        self.check_factor(i, j)?;
        Ok(Text {
            letters: self.letters[i - 1..j].to_vec(),
            alphabet: Arc::clone(&self.alphabet),
        })
    }

    pub(crate) fn check_factor(&self, i: usize, j: usize) -> Result<(), TextError> {
        let n = self.len();
        if i >= 1 && j <= n && i <= j + 1 {
            Ok(())
        } else {
            Err(TextError::BadFactor { i, j, n })
        }
    }

    /// Reverse of the text.
    pub fn reversed(&self) -> Text {
        let mut letters = self.letters.clone();
        letters.reverse();
        Text {
            letters,
            alphabet: Arc::clone(&self.alphabet),
        }
    }

    /// Concatenation; both texts must share the same alphabet.
    pub fn concat(parts: &[&Text]) -> Result<Text, TextError> {
        assert!(!parts.is_empty());
        let alphabet = Arc::clone(parts[0].alphabet());
        let mut letters = Vec::new();
        for p in parts {
            if p.alphabet.len() != alphabet.len() {
                return Err(TextError::AlphabetMismatch {
                    left: alphabet.len(),
                    right: p.alphabet.len(),
                });
            }
            letters.extend_from_slice(&p.letters);
        }
        Ok(Text { letters, alphabet })
    }

    /// The set of distinct letter ids that occur in the text.
    pub fn used_letters(&self) -> Vec<u32> {
        let mut seen = vec![false; self.alphabet.len()];
        for &l in &self.letters {
            seen[l as usize] = true;
        }
        (0..self.alphabet.len() as u32)
            .filter(|&i| seen[i as usize])
            .collect()
    }

    /// Render the text as a string of symbols (no separators).
    pub fn render(&self) -> String {
        self.letters
            .iter()
            .map(|&l| self.alphabet.symbol(l))
            .collect()
    }
}

/// A factor occurrence reported by a detector or enumerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    /// 1-based start position.
    pub start: usize,
    /// Total length (always even and positive).
    pub length: usize,
    pub kind: SquareKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SquareKind {
    AbSquare,
    AdditiveSquare,
}

impl Occurrence {
    pub fn absquare(start: usize, length: usize) -> Self {
        debug_assert!(start >= 1 && length >= 2 && length % 2 == 0);
        Occurrence {
            start,
            length,
            kind: SquareKind::AbSquare,
        }
    }

    pub fn additive(start: usize, length: usize) -> Self {
        debug_assert!(start >= 1 && length >= 2 && length % 2 == 0);
        Occurrence {
            start,
            length,
            kind: SquareKind::AdditiveSquare,
        }
    }

    /// Half-length of the occurrence.
    pub fn half(&self) -> usize {
        self.length / 2
    }

    /// The gap position the occurrence is centred at.
    pub fn center(&self) -> usize {
        self.start + self.half() - 1
    }
}

/// A center position: the gap between positions `r` and `r+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Center {
    pub position: usize,
    /// A half-length attested for this center, when one was recorded.
    pub attested_half: Option<usize>,
}

impl Center {
    pub fn new(position: usize) -> Self {
        Center {
            position,
            attested_half: None,
        }
    }

    pub fn attested(position: usize, half: usize) -> Self {
        Center {
            position,
            attested_half: Some(half),
        }
    }
}
