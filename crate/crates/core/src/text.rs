//! Line-oriented helpers shared by the plain-text file formats.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub fn at(line: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line, msg: msg.into() }
    }

    pub fn eof(expected: &str) -> ParseError {
        ParseError { line: 0, msg: format!("unexpected end of input, expected {expected}") }
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Error {
        Error::Parse { line: e.line, msg: e.msg }
    }
}

/// Iterator over trimmed content lines, 1-based line numbers.
pub(crate) struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Lines<'a> {
        Lines { inner: text.lines().enumerate().peekable() }
    }

    fn skip_blank(&mut self) {
        while let Some((_, l)) = self.inner.peek() {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                self.inner.next();
            } else {
                break;
            }
        }
    }

    pub fn next_content(&mut self) -> Option<(usize, &'a str)> {
        self.skip_blank();
        self.inner.next().map(|(n, l)| (n + 1, l.trim()))
    }

    pub fn peek_content(&mut self) -> Option<(usize, &'a str)> {
        self.skip_blank();
        self.inner.peek().map(|&(n, l)| (n + 1, l.trim()))
    }

    pub fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.next_content() {
            None => Ok(()),
            Some((n, l)) => Err(ParseError::at(n, format!("unexpected trailing content {l:?}"))),
        }
    }
}

/// `key = value` with the given key, returning the trimmed value.
pub(crate) fn key_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let (k, v) = line.split_once('=')?;
    (k.trim() == key).then_some(v.trim())
}

/// Splits any `key = value` line.
pub(crate) fn split_kv(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim(), v.trim()))
}
