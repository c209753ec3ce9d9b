//! Letters, freely reduced words and the alphabets that name them.
//!
//! A [`Word`] is always stored freely reduced; the only place an unreduced
//! letter sequence exists is the input to [`Word::from_letters`]. Words do not
//! carry their alphabet. Range checks against a concrete rank happen at the
//! alphabet-aware boundaries ([`Alphabet::free_reduce`], parsing, automorphism
//! application, matrix evaluation).

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Upper bound on the number of letters produced by parsing one word.
pub const MAX_PARSED_LETTERS: usize = 1 << 20;

/// A generator `x_i` or its inverse. Generators are 0-based internally.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        let g = i32::try_from(generator + 1).expect("generator index fits in i32");
        Letter(if inverse { -g } else { g })
    }

    pub fn gen(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn inv(generator: usize) -> Letter {
        Letter::new(generator, true)
    }

    /// 0-based generator index.
    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the letter order x1 < x1^-1 < x2 < x2^-1 < ...
    pub fn order_key(self) -> usize {
        2 * self.generator() + usize::from(self.is_inverse())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

/// A freely reduced word. The empty word is the identity.
///
/// Ordering is shortlex: shorter words first, then letter by letter.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![Letter::gen(g)])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Builds a word from signed 1-based generator numbers (`-2` is `x2^-1`).
    ///
    /// Panics on a zero entry.
    pub fn from_signed(raw: &[i32]) -> Word {
        Word::from_letters(raw.iter().map(|&s| {
            assert!(s != 0, "signed letter must be non-zero");
            Letter::new(s.unsigned_abs() as usize - 1, s < 0)
        }))
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

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Group product with free reduction at the junction.
    pub fn concat(&self, other: &Word) -> Word {
        let a = &self.0;
        let b = &other.0;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k].inverse() {
            k += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * k);
        out.extend_from_slice(&a[..a.len() - k]);
        out.extend_from_slice(&b[k..]);
        Word(out)
    }

    /// Number of letters cancelled when forming `self * other`.
    pub fn cancellation(&self, other: &Word) -> usize {
        let a = &self.0;
        let b = &other.0;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k].inverse() {
            k += 1;
        }
        k
    }

    /// Replaces each letter `x_i^e` by `images[i]^e` and reduces.
    ///
    /// Panics if a letter has no image.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        let mut push = |l: Letter| {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        };
        for l in &self.0 {
            let img = images[l.generator()].letters();
            if l.is_inverse() {
                img.iter().rev().for_each(|x| push(x.inverse()));
            } else {
                img.iter().for_each(|&x| push(x));
            }
        }
        Word(out)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.concat(&base);
        }
        acc
    }

    pub fn prefix(&self, n: usize) -> &[Letter] {
        &self.0[..n.min(self.0.len())]
    }

    pub fn suffix(&self, n: usize) -> &[Letter] {
        &self.0[self.0.len() - n.min(self.0.len())..]
    }

    pub fn starts_with(&self, segment: &[Letter]) -> bool {
        self.0.starts_with(segment)
    }

    pub fn ends_with(&self, segment: &[Letter]) -> bool {
        self.0.ends_with(segment)
    }

    /// Largest generator index used plus one (0 for the identity).
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        match self.0.iter().find(|l| l.generator() >= rank) {
            Some(l) => Err(Error::InvalidLetter { index: l.generator() + 1, rank }),
            None => Ok(()),
        }
    }

    /// `min(w, w^-1)` under the shortlex order.
    pub fn normalized(&self) -> Word {
        let inv = self.inverse();
        if inv < *self {
            inv
        } else {
            self.clone()
        }
    }
}

/// Shortlex comparison: free length first, then letter by letter.
pub fn compare_words(u: &Word, v: &Word) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.0.cmp(&v.0))
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_words(self, other)
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{}", l.generator() + 1)?;
            if l.is_inverse() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Generator names for a free group of finite rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Alphabet> {
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("rank must be at least 1".into()));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if n.is_empty() {
                return Err(Error::InvalidAlphabet("empty generator name".into()));
            }
            if n.chars().any(|c| c.is_whitespace() || "^|#=[],/;".contains(c)) {
                return Err(Error::InvalidAlphabet(format!("generator name {n:?} contains a reserved character")));
            }
            if n.chars().all(|c| c.is_ascii_digit() || c == '-' || c == '+') {
                return Err(Error::InvalidAlphabet(format!("generator name {n:?} looks like a number")));
            }
            if out.iter().any(|m| m == n) {
                return Err(Error::InvalidAlphabet(format!("duplicate generator name {n:?}")));
            }
            out.push(n.to_string());
        }
        Ok(Alphabet { names: out })
    }

    /// Parses a whitespace-separated list of names.
    pub fn from_names_line(line: &str) -> Result<Alphabet> {
        let names: Vec<&str> = line.split_whitespace().collect();
        Alphabet::new(&names)
    }

    /// `prefix1, prefix2, ..., prefixq`.
    pub fn indexed(prefix: &str, rank: usize) -> Alphabet {
        let names: Vec<String> = (1..=rank).map(|i| format!("{prefix}{i}")).collect();
        Alphabet::new(&names).expect("indexed names are valid")
    }

    /// `a, b, c, ...` for rank up to 26.
    pub fn latin(rank: usize) -> Alphabet {
        assert!((1..=26).contains(&rank), "latin alphabets have rank 1..=26");
        let names: Vec<String> = (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        Alphabet::new(&names).expect("latin names are valid")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, generator: usize) -> &str {
        &self.names[generator]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Freely reduces `raw` after checking every letter against the rank.
    pub fn free_reduce(&self, raw: &[Letter]) -> Result<Word> {
        for l in raw {
            if l.generator() >= self.rank() {
                return Err(Error::InvalidLetter { index: l.generator() + 1, rank: self.rank() });
            }
        }
        Ok(Word::from_letters(raw.iter().copied()))
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        w.check_rank(self.rank())
    }

    /// Parses `word := "1" | unit (" " unit)*`, `unit := name ("^" nonzero-integer)?`.
    ///
    /// Runs of whitespace are accepted between units; the result is freely reduced.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::Syntax { pos: 0, msg: "empty word (use \"1\" for the identity)".into() });
        }
        if trimmed == "1" {
            return Ok(Word::identity());
        }
        let mut raw: Vec<Letter> = Vec::new();
        for (pos, unit) in tokens(text) {
            let (name, exp) = match unit.find('^') {
                Some(k) => {
                    let exp_text = &unit[k + 1..];
                    let exp: i64 = parse_exponent(exp_text).ok_or_else(|| Error::Syntax {
                        pos: pos + k + 1,
                        msg: format!("bad exponent {exp_text:?}"),
                    })?;
                    (&unit[..k], exp)
                }
                None => (unit, 1),
            };
            if name.is_empty() {
                return Err(Error::Syntax { pos, msg: "missing generator name".into() });
            }
            if name == "1" {
                return Err(Error::Syntax { pos, msg: "\"1\" must stand alone".into() });
            }
            let g = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator { name: name.to_string(), pos })?;
            let count = exp.unsigned_abs() as usize;
            if raw.len().saturating_add(count) > MAX_PARSED_LETTERS {
                return Err(Error::Syntax { pos, msg: format!("word longer than {MAX_PARSED_LETTERS} letters") });
            }
            raw.extend(std::iter::repeat(Letter::new(g, exp < 0)).take(count));
        }
        Ok(Word::from_letters(raw))
    }

    /// Canonical run-length form: runs merged into `name^k`, single spaces.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut out = String::new();
        let letters = w.letters();
        let mut k = 0;
        while k < letters.len() {
            let l = letters[k];
            let mut run = 1;
            while k + run < letters.len() && letters[k + run] == l {
                run += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(self.name(l.generator()));
            let exp = if l.is_inverse() { -(run as i64) } else { run as i64 };
            if exp != 1 {
                out.push('^');
                out.push_str(&exp.to_string());
            }
            k += run;
        }
        out
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> DisplayWord<'a> {
        DisplayWord { alphabet: self, word: w }
    }
}

/// `Display` adapter pairing a word with its alphabet.
pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format_word(self.word))
    }
}

fn parse_exponent(s: &str) -> Option<i64> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let v: i64 = s.parse().ok()?;
    (v != 0).then_some(v)
}

/// Whitespace-separated tokens with their byte offsets.
pub(crate) fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = text;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let skip = rest.len() - rest.trim_start().len();
        rest = &rest[skip..];
        offset += skip;
        if rest.is_empty() {
            return None;
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let tok = &rest[..end];
        let at = offset;
        rest = &rest[end..];
        offset += end;
        Some((at, tok))
    })
}
