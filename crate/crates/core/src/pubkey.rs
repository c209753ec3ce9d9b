//! Public-key exchange over powers of one automorphism.
//!
//! Alice publishes `c = f^n(a)`. Bob sends `c1 = m f^t(c)` and `c2 = f^t(a)`.
//! Since `f^t f^n = f^n f^t`, Alice recovers `m = c1 f^n(c2)^-1`. In the matrix
//! variant `c1` is `g(m) g(f^t(c))` for a faithful `g: F -> SL(2, Q)`.

use crate::automorphism::{format_automorphism, parse_automorphism, FactoredAutomorphism};
use crate::error::{Error, Result};
use crate::matrix::{format_matrix, format_rep_spec, matrix_to_word, parse_matrix, parse_rep_spec, word_to_matrix, Mat2Q, RepSpec};
use crate::text::{key_value, Lines, ParseError};
use crate::word::{Alphabet, Word};

pub const DEFAULT_EXPONENT_LIMIT: u64 = 32;

/// Powers checked by [`PubkeyParams::finite_order_witness`].
pub const ORDER_SCREEN_LIMIT: u64 = 12;

/// Image size beyond which the order screen gives up.
const ORDER_SCREEN_MAX_LETTERS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PubkeyParams {
    pub alphabet: Alphabet,
    pub a: Word,
    pub f: FactoredAutomorphism,
    pub spec: Option<RepSpec>,
    pub exponent_limit: u64,
}

impl PubkeyParams {
    pub fn new(alphabet: Alphabet, a: Word, f: FactoredAutomorphism, spec: Option<RepSpec>) -> Result<PubkeyParams> {
        if a.is_identity() {
            return Err(Error::InvalidParams("the base word must not be the identity".into()));
        }
        alphabet.check(&a)?;
        if f.rank() != alphabet.rank() {
            return Err(Error::AlphabetMismatch { expected: alphabet.rank(), found: f.rank() });
        }
        if f.is_identity() {
            return Err(Error::InvalidParams("the automorphism must not be the identity".into()));
        }
        if let Some(s) = &spec {
            if s.alphabet().rank() != alphabet.rank() {
                return Err(Error::AlphabetMismatch { expected: alphabet.rank(), found: s.alphabet().rank() });
            }
        }
        Ok(PubkeyParams { alphabet, a, f, spec, exponent_limit: DEFAULT_EXPONENT_LIMIT })
    }

    pub fn with_exponent_limit(mut self, limit: u64) -> PubkeyParams {
        self.exponent_limit = limit;
        self
    }

    fn check_exponent(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParams("exponents must be positive".into()));
        }
        if n > self.exponent_limit {
            return Err(Error::ExponentLimit { n, limit: self.exponent_limit });
        }
        Ok(())
    }

    /// `f^n(w)`, applying `f` one step at a time.
    pub fn orbit(&self, w: &Word, n: u64) -> Result<Word> {
        self.check_exponent(n)?;
        let mut cur = w.clone();
        for _ in 0..n {
            cur = self.f.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Smallest `k <= 12` with `f^k = id`, if the images stay small enough to tell.
    pub fn finite_order_witness(&self) -> Option<u64> {
        let mut images: Vec<Word> = self.f.images().to_vec();
        for k in 1..=ORDER_SCREEN_LIMIT {
            if images.iter().enumerate().all(|(i, w)| *w == Word::generator(i)) {
                return Some(k);
            }
            if images.iter().map(Word::len).sum::<usize>() > ORDER_SCREEN_MAX_LETTERS {
                return None;
            }
            images = images.iter().map(|w| w.substitute(self.f.images())).collect();
        }
        None
    }

    fn spec(&self) -> Result<&RepSpec> {
        self.spec.as_ref().ok_or_else(|| Error::Precondition("matrix variant needs a representation".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherPair {
    pub c1: Word,
    pub c2: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCipherPair {
    pub c1: Mat2Q,
    pub c2: Word,
}

/// `c = f^n(a)`.
pub fn alice_keygen(params: &PubkeyParams, n: u64) -> Result<Word> {
    params.orbit(&params.a, n)
}

pub fn bob_encrypt(params: &PubkeyParams, c: &Word, m: &Word, t: u64) -> Result<CipherPair> {
    params.alphabet.check(c)?;
    params.alphabet.check(m)?;
    let c1 = m.concat(&params.orbit(c, t)?);
    let c2 = params.orbit(&params.a, t)?;
    Ok(CipherPair { c1, c2 })
}

/// `c1 f^n(c2)^-1`. A wrong `n` gives a wrong word, not an error.
pub fn alice_decrypt(params: &PubkeyParams, n: u64, pair: &CipherPair) -> Result<Word> {
    params.alphabet.check(&pair.c1)?;
    params.alphabet.check(&pair.c2)?;
    Ok(pair.c1.concat(&params.orbit(&pair.c2, n)?.inverse()))
}

pub fn bob_encrypt_matrix(params: &PubkeyParams, c: &Word, m: &Word, t: u64) -> Result<MatrixCipherPair> {
    let spec = params.spec()?;
    params.alphabet.check(c)?;
    let c1 = word_to_matrix(spec, m)?.mul(&word_to_matrix(spec, &params.orbit(c, t)?)?);
    let c2 = params.orbit(&params.a, t)?;
    Ok(MatrixCipherPair { c1, c2 })
}

/// `G = c1 g(f^n(c2))^-1`, equal to `g(m)` for the right `n`.
pub fn alice_recover_matrix(params: &PubkeyParams, n: u64, pair: &MatrixCipherPair) -> Result<Mat2Q> {
    let spec = params.spec()?;
    params.alphabet.check(&pair.c2)?;
    let h = word_to_matrix(spec, &params.orbit(&pair.c2, n)?)?;
    Ok(pair.c1.mul(&h.inverse()?))
}

/// Decodes `G` back to `m`, which must have length at most `max_len`.
pub fn alice_decrypt_matrix(params: &PubkeyParams, n: u64, pair: &MatrixCipherPair, max_len: usize) -> Result<Word> {
    let g = alice_recover_matrix(params, n, pair)?;
    matrix_to_word(params.spec()?, &g, max_len)?.ok_or(Error::DecryptionFailure { unit: 1 })
}

/// `alphabet = ..`, `a = ..`, an `automorphism` block in the factor language,
/// and optionally a `representation` block in the rep-spec format.
pub fn format_pubkey_params(params: &PubkeyParams) -> String {
    let mut out = format!(
        "alphabet = {}\na = {}\nbegin automorphism\n{}end automorphism\n",
        params.alphabet.names().join(" "),
        params.alphabet.format_word(&params.a),
        format_automorphism(&params.alphabet, &params.f)
    );
    if let Some(spec) = &params.spec {
        out.push_str("begin representation\n");
        out.push_str(&format_rep_spec(spec));
        out.push_str("end representation\n");
    }
    out
}

/// Parses a params file. Instead of an inline block, `automorphism = <name>`
/// names a factor file that `load` resolves to text.
pub fn parse_pubkey_params(text: &str, load: &dyn Fn(&str) -> std::io::Result<String>) -> Result<PubkeyParams> {
    let mut lines = Lines::new(text);
    let (n, line) = lines.next_content().ok_or_else(|| ParseError::eof("alphabet"))?;
    let names = key_value(line, "alphabet").ok_or_else(|| ParseError::at(n, "expected `alphabet = ...`"))?;
    let alphabet = Alphabet::from_names_line(names).map_err(|e| ParseError::at(n, e.to_string()))?;
    let (n, line) = lines.next_content().ok_or_else(|| ParseError::eof("a"))?;
    let a = key_value(line, "a").ok_or_else(|| ParseError::at(n, "expected `a = ...`"))?;
    let a = alphabet.parse_word(a).map_err(|e| ParseError::at(n, e.to_string()))?;
    let (n, line) = lines.next_content().ok_or_else(|| ParseError::eof("automorphism"))?;
    let f = if line == "begin automorphism" {
        let body = block(&mut lines, "end automorphism")?;
        parse_automorphism(&body, &alphabet)?
    } else if let Some(name) = key_value(line, "automorphism") {
        let body = load(name).map_err(|e| ParseError::at(n, format!("cannot read {name:?}: {e}")))?;
        parse_automorphism(&body, &alphabet)?
    } else {
        return Err(ParseError::at(n, "expected an automorphism").into());
    };
    let spec = match lines.next_content() {
        None => None,
        Some((_, "begin representation")) => Some(parse_rep_spec(&block(&mut lines, "end representation")?)?),
        Some((n, other)) => return Err(ParseError::at(n, format!("unexpected {other:?}")).into()),
    };
    lines.expect_end()?;
    if let Some(s) = &spec {
        if s.alphabet() != &alphabet {
            return Err(Error::InvalidRepresentation("representation alphabet differs".into()));
        }
    }
    PubkeyParams::new(alphabet, a, f, spec)
}

fn block(lines: &mut Lines<'_>, end: &str) -> std::result::Result<String, ParseError> {
    let mut body = String::new();
    loop {
        let (_, line) = lines.next_content().ok_or_else(|| ParseError::eof(end))?;
        if line == end {
            return Ok(body);
        }
        body.push_str(line);
        body.push('\n');
    }
}

pub fn format_pair(alphabet: &Alphabet, pair: &CipherPair) -> String {
    format!("c1 = {}\nc2 = {}\n", alphabet.format_word(&pair.c1), alphabet.format_word(&pair.c2))
}

pub fn format_matrix_pair(alphabet: &Alphabet, pair: &MatrixCipherPair) -> String {
    format!("c1 = {}\nc2 = {}\n", format_matrix(&pair.c1), alphabet.format_word(&pair.c2))
}

fn pair_lines(text: &str) -> Result<((usize, String), (usize, String))> {
    let mut lines = Lines::new(text);
    let mut get = |key: &str| -> std::result::Result<(usize, String), ParseError> {
        let (n, line) = lines.next_content().ok_or_else(|| ParseError::eof(key))?;
        key_value(line, key).map(|v| (n, v.to_string())).ok_or_else(|| ParseError::at(n, format!("expected `{key} = ...`")))
    };
    let c1 = get("c1")?;
    let c2 = get("c2")?;
    lines.expect_end()?;
    Ok((c1, c2))
}

pub fn parse_pair(text: &str, alphabet: &Alphabet) -> Result<CipherPair> {
    let ((n1, c1), (n2, c2)) = pair_lines(text)?;
    let c1 = alphabet.parse_word(&c1).map_err(|e| ParseError::at(n1, e.to_string()))?;
    let c2 = alphabet.parse_word(&c2).map_err(|e| ParseError::at(n2, e.to_string()))?;
    Ok(CipherPair { c1, c2 })
}

pub fn parse_matrix_pair(text: &str, alphabet: &Alphabet) -> Result<MatrixCipherPair> {
    let ((n1, c1), (n2, c2)) = pair_lines(text)?;
    let c1 = parse_matrix(&c1).map_err(|e| ParseError::at(n1, e.to_string()))?;
    let c2 = alphabet.parse_word(&c2).map_err(|e| ParseError::at(n2, e.to_string()))?;
    Ok(MatrixCipherPair { c1, c2 })
}
