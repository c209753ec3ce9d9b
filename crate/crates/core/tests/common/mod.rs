//! Readers for the TeX-style notation used in published test vectors:
//! words like `(ba^{-1}d^{-1})^2 x_3^{-2}` and move lists like
//! `(N1)_3 (N2)_{1.4} [(N2)_{4.3}]^2`.

#![allow(dead_code)]

use fgcrypt::nielsen::ElementaryMove;
use fgcrypt::{Alphabet, Letter, Word};

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && (self.s[self.i].is_ascii_whitespace() || self.s[self.i] == b'\\') {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn bump(&mut self) -> u8 {
        let c = self.peek().expect("unexpected end of input");
        self.i += 1;
        c
    }

    fn eat(&mut self, c: u8) {
        let got = self.bump();
        assert_eq!(got as char, c as char, "at byte {}", self.i - 1);
    }

    fn int(&mut self) -> i64 {
        self.skip_ws();
        let start = self.i;
        if self.s.get(self.i) == Some(&b'-') {
            self.i += 1;
        }
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().expect("integer")
    }

    /// `^2`, `^{-1}` or nothing.
    fn exponent(&mut self) -> i64 {
        if self.peek() != Some(b'^') {
            return 1;
        }
        self.bump();
        if self.peek() == Some(b'{') {
            self.bump();
            let e = self.int();
            self.eat(b'}');
            e
        } else {
            // a bare digit
            let c = self.bump();
            (c - b'0') as i64
        }
    }

    /// `_3` or `_{12}`, digits only.
    fn subscript(&mut self) -> String {
        self.eat(b'_');
        if self.peek() == Some(b'{') {
            self.bump();
            let start = self.i;
            while self.s[self.i] != b'}' {
                self.i += 1;
            }
            let out = std::str::from_utf8(&self.s[start..self.i]).unwrap().to_string();
            self.i += 1;
            out
        } else {
            (self.bump() as char).to_string()
        }
    }
}

fn letters(alphabet: &Alphabet, cur: &mut Cursor<'_>, out: &mut Vec<Letter>) {
    while let Some(c) = cur.peek() {
        let atom: Vec<Letter> = match c {
            b'(' => {
                cur.bump();
                let mut inner = Vec::new();
                letters(alphabet, cur, &mut inner);
                cur.eat(b')');
                inner
            }
            b')' => return,
            c if c.is_ascii_alphabetic() => {
                cur.bump();
                let mut name = (c as char).to_string();
                if cur.peek() == Some(b'_') {
                    name.push_str(&cur.subscript());
                }
                let g = alphabet.index_of(&name).unwrap_or_else(|| panic!("unknown generator {name}"));
                vec![Letter::gen(g)]
            }
            other => panic!("unexpected {:?} at byte {}", other as char, cur.i),
        };
        let e = cur.exponent();
        let piece = Word::from_letters(atom.iter().copied()).pow(e);
        out.extend_from_slice(piece.letters());
    }
}

/// Parses a TeX word; `1` is the identity.
pub fn tex_word(alphabet: &Alphabet, text: &str) -> Word {
    if text.trim() == "1" {
        return Word::identity();
    }
    let mut cur = Cursor { s: text.as_bytes(), i: 0 };
    let mut raw = Vec::new();
    letters(alphabet, &mut cur, &mut raw);
    assert!(cur.peek().is_none(), "trailing input in {text:?}");
    Word::from_letters(raw)
}

fn moves_into(cur: &mut Cursor<'_>, out: &mut Vec<ElementaryMove>) {
    while let Some(c) = cur.peek() {
        match c {
            b'[' => {
                cur.bump();
                let mut inner = Vec::new();
                moves_into(cur, &mut inner);
                cur.eat(b']');
                let k = cur.exponent();
                for _ in 0..k {
                    out.extend_from_slice(&inner);
                }
            }
            b']' => return,
            b'(' => {
                cur.bump();
                cur.eat(b'N');
                let kind = cur.bump();
                cur.eat(b')');
                let sub = cur.subscript();
                match kind {
                    b'1' => out.push(ElementaryMove::Invert(sub.parse::<usize>().unwrap() - 1)),
                    b'2' => {
                        let (i, j) = sub.split_once('.').expect("i.j");
                        out.push(ElementaryMove::Multiply(i.parse::<usize>().unwrap() - 1, j.parse::<usize>().unwrap() - 1));
                    }
                    other => panic!("unknown move N{}", other as char),
                }
            }
            other => panic!("unexpected {:?} in move list", other as char),
        }
    }
}

pub fn tex_moves(text: &str) -> Vec<ElementaryMove> {
    let mut cur = Cursor { s: text.as_bytes(), i: 0 };
    let mut out = Vec::new();
    moves_into(&mut cur, &mut out);
    assert!(cur.peek().is_none());
    out
}
