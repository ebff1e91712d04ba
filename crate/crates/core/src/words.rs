//! Involutive alphabets, words over them, and free reduction.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A letter of `Ã = A ∪ A⁻¹`.
///
/// Encoded as `2i` for the `i`-th letter and `2i + 1` for its inverse, so the
/// derived order is the canonical order `a < a' < b < b' < …`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(u16);

impl Letter {
    pub const fn pos(i: usize) -> Letter {
        Letter((2 * i) as u16)
    }

    pub const fn neg(i: usize) -> Letter {
        Letter((2 * i + 1) as u16)
    }

    pub fn from_code(code: usize) -> Letter {
        Letter(code as u16)
    }

    /// Position in `0..2|A|`.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// Index of the underlying letter of `A`.
    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// The positive letter with the same index.
    pub fn positive(self) -> Letter {
        Letter(self.0 & !1)
    }
}

/// Letters of `Ã` in canonical order for an alphabet of the given rank.
pub fn all_letters(rank: usize) -> impl Iterator<Item = Letter> + Clone {
    (0..2 * rank).map(Letter::from_code)
}

/// An ordered finite set of letter names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    single_char: bool,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::invalid("alphabet must be nonempty"));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty()
                || n == "1"
                || n.contains(|c: char| c == '.' || c == '\'' || c.is_whitespace())
            {
                return Err(Error::invalid(format!("bad letter name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::invalid(format!("duplicate letter {n:?}")));
            }
        }
        let single_char = names.iter().all(|n| n.chars().count() == 1);
        Ok(Alphabet { names, single_char })
    }

    /// Alphabet `{a, b, c, …}` of the given rank (at most 26).
    pub fn standard(rank: usize) -> Alphabet {
        assert!((1..=26).contains(&rank));
        Alphabet::new((0..rank).map(|i| ((b'a' + i as u8) as char).to_string())).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        all_letters(self.rank())
    }

    fn parse_token(&self, tok: &str) -> Result<Letter> {
        let (name, inv) = match tok.strip_suffix('\'') {
            Some(n) => (n, true),
            None => (tok, false),
        };
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::invalid(format!("unknown letter {name:?}")))?;
        Ok(if inv { Letter::neg(i) } else { Letter::pos(i) })
    }

    /// Parses the literal syntax: `1` is empty, `.` separates letters (optional
    /// for single-character alphabets), a trailing `'` inverts.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        if s.contains('.') || !self.single_char {
            for tok in s.split('.') {
                if tok.is_empty() {
                    return Err(Error::invalid(format!("empty letter in {s:?}")));
                }
                if self.single_char && !tok.starts_with('\'') && tok.chars().count() > 1 {
                    // single-character alphabets may mix dotted and bare runs
                    out.extend(self.parse_word(tok)?.0);
                } else {
                    out.push(self.parse_token(tok)?);
                }
            }
        } else {
            let chars: Vec<char> = s.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let mut tok = chars[i].to_string();
                if i + 1 < chars.len() && chars[i + 1] == '\'' {
                    tok.push('\'');
                    i += 1;
                }
                out.push(self.parse_token(&tok)?);
                i += 1;
            }
        }
        Ok(Word(out))
    }

    pub fn format_letter(&self, x: Letter) -> String {
        let mut s = self.names[x.index()].clone();
        if x.is_inverse() {
            s.push('\'');
        }
        s
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = w.0.iter().map(|&x| self.format_letter(x)).collect();
        if self.single_char {
            parts.concat()
        } else {
            parts.join(".")
        }
    }
}

/// A finite word over `Ã`; the empty word denotes `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(x: Letter) -> Word {
        Word(vec![x])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut v = Vec::new();
        for p in parts {
            v.extend_from_slice(&p.0);
        }
        Word(v)
    }

    /// `w^k`, with negative `k` meaning powers of the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// Free reduction by one left-to-right stack pass.
    pub fn reduce(&self) -> Word {
        let mut st: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &x in &self.0 {
            push_reduced(&mut st, x);
        }
        Word(st)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn is_dyck(&self) -> bool {
        self.reduce().is_empty()
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    /// Largest letter index plus one, or 0 for the empty word.
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|x| x.index() + 1).max().unwrap_or(0)
    }
}

/// Appends `x` to a reduced stack, cancelling if possible.
pub fn push_reduced(stack: &mut Vec<Letter>, x: Letter) {
    if stack.last() == Some(&x.inverse()) {
        stack.pop();
    } else {
        stack.push(x);
    }
}

pub fn reduce(w: &Word) -> Word {
    w.reduce()
}

pub fn is_dyck(w: &Word) -> bool {
    w.is_dyck()
}

pub fn invert(w: &Word) -> Word {
    w.invert()
}

/// The image of `w` under the substitution sending the `i`-th letter to
/// `images[i]`; inverse letters go to inverted images.
pub fn substitute(w: &Word, images: &[Word]) -> Word {
    let mut v = Vec::new();
    for &x in w.letters() {
        let img = &images[x.index()];
        if x.is_inverse() {
            v.extend(img.0.iter().rev().map(|y| y.inverse()));
        } else {
            v.extend_from_slice(&img.0);
        }
    }
    Word(v)
}

/// Shortlex comparison: shorter first, then lexicographic in letter order.
pub fn shortlex_cmp(u: &Word, v: &Word) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.0.cmp(&v.0))
}

impl fmt::Display for Word {
    /// Uses the standard alphabet `a, b, c, …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for x in &self.0 {
            write!(f, "{}", (b'a' + x.index() as u8) as char)?;
            if x.is_inverse() {
                write!(f, "'")?;
            }
        }
        Ok(())
    }
}

/// All words of length at most `max_len` over `Ã`, in shortlex order.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 2 * rank);
        for w in &layer {
            for x in all_letters(rank) {
                let mut v = w.0.clone();
                v.push(x);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All reduced words of length at most `max_len`, in shortlex order.
pub fn reduced_words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for x in all_letters(rank) {
                if w.0.last() == Some(&x.inverse()) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(x);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
