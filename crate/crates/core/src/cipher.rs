//! One-time pad over a free group.
//!
//! Plaintext symbol `a_k` corresponds to the `k`-th word of a Nielsen-reduced
//! tuple `U`. Position `i` of the message is enciphered by the automorphism
//! with index `x_i`, where the indices run through an LCG orbit starting at
//! `alpha`. Units are kept apart: no cancellation between neighbours.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::automorphism::FactoredAutomorphism;
use crate::error::{Error, Result};
use crate::keystream::{has_max_period, keystream, params_from_pairs, random_reduced_word, AutFamily, LcgParams, RandomSource};
use crate::nielsen::{canonical_minimal_basis, format_tuple, is_nielsen_reduced, nielsen_reduce, parse_tuple_block, GeneratingTuple};
use crate::text::{key_value, split_kv, Lines, ParseError};
use crate::word::{Alphabet, Word};

/// Word lengths drawn by [`keygen`].
pub const KEYGEN_WORD_LENGTHS: std::ops::RangeInclusive<usize> = 2..=8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherPublicParams {
    pub alphabet: Alphabet,
    pub plaintext_alphabet: Vec<char>,
    pub fam: AutFamily,
    pub lcg: LcgParams,
}

impl CipherPublicParams {
    pub fn new(alphabet: Alphabet, plaintext_alphabet: Vec<char>, lcg: LcgParams, master_seed: u64) -> Result<CipherPublicParams> {
        if alphabet.rank() < 2 {
            return Err(Error::InvalidParams("free group rank must be at least 2".into()));
        }
        if plaintext_alphabet.len() < 2 {
            return Err(Error::InvalidParams("plaintext alphabet needs at least 2 symbols".into()));
        }
        for (k, c) in plaintext_alphabet.iter().enumerate() {
            if c.is_whitespace() || c.is_control() {
                return Err(Error::InvalidParams(format!("plaintext symbol {c:?} is not printable")));
            }
            if plaintext_alphabet[..k].contains(c) {
                return Err(Error::InvalidParams(format!("plaintext symbol {c:?} repeated")));
            }
        }
        if !has_max_period(&lcg) {
            return Err(Error::InvalidParams("LCG does not have maximal period".into()));
        }
        let fam = AutFamily::new(master_seed, alphabet.rank(), lcg.modulus_exponent())?;
        Ok(CipherPublicParams { alphabet, plaintext_alphabet, fam, lcg })
    }

    pub fn symbol_count(&self) -> usize {
        self.plaintext_alphabet.len()
    }

    /// Positions in the plaintext alphabet. Whitespace is dropped; any other
    /// foreign character is an error.
    pub fn encode(&self, plaintext: &str) -> Result<Vec<usize>> {
        plaintext
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(pos, c)| {
                self.plaintext_alphabet
                    .iter()
                    .position(|&s| s == c)
                    .ok_or(Error::Encoding { symbol: c, pos })
            })
            .collect()
    }

    pub fn decode(&self, symbols: &[usize]) -> String {
        symbols.iter().map(|&k| self.plaintext_alphabet[k]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherPrivateKey {
    /// Position `k` carries plaintext symbol `k`.
    pub u: GeneratingTuple,
    pub alpha: u128,
}

impl CipherPrivateKey {
    pub fn new(params: &CipherPublicParams, u: GeneratingTuple, alpha: u128) -> Result<CipherPrivateKey> {
        let key = CipherPrivateKey { u, alpha: params.lcg.reduce(alpha) };
        key.validate(params)?;
        Ok(key)
    }

    pub fn validate(&self, params: &CipherPublicParams) -> Result<()> {
        if self.u.len() != params.symbol_count() {
            return Err(Error::InvalidParams(format!(
                "key has {} words for {} plaintext symbols",
                self.u.len(),
                params.symbol_count()
            )));
        }
        self.u.check_rank(params.alphabet.rank())?;
        if self.u.words().iter().any(Word::is_identity) {
            return Err(Error::InvalidParams("key contains the identity".into()));
        }
        if !is_nielsen_reduced(&self.u) {
            return Err(Error::NotNielsenReduced);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ciphertext {
    pub units: Vec<Word>,
}

impl Ciphertext {
    /// Sum of unit lengths, the quantity visible to an eavesdropper.
    pub fn visible_length(&self) -> usize {
        self.units.iter().map(Word::len).sum()
    }
}

/// Samples random words until their Nielsen reduction keeps all `N` entries.
pub fn keygen<R: RandomSource>(params: &CipherPublicParams, src: &mut R) -> CipherPrivateKey {
    let n = params.symbol_count();
    let q = params.alphabet.rank();
    let span = (KEYGEN_WORD_LENGTHS.end() - KEYGEN_WORD_LENGTHS.start() + 1) as u64;
    loop {
        let words: Vec<Word> = (0..n)
            .map(|_| {
                let len = KEYGEN_WORD_LENGTHS.start() + src.below(span) as usize;
                random_reduced_word(src, q, len)
            })
            .collect();
        let (reduced, _) = nielsen_reduce(&GeneratingTuple(words));
        if reduced.len() != n || !is_nielsen_reduced(&reduced) {
            continue;
        }
        let u = canonical_minimal_basis(&reduced);
        let alpha = params.lcg.reduce(u128::from(src.next_u64()) | (u128::from(src.next_u64()) << 64));
        return CipherPrivateKey { u, alpha };
    }
}

/// LCG indices for `z` positions.
pub fn schedule_indices(params: &CipherPublicParams, key: &CipherPrivateKey, z: usize) -> Vec<u128> {
    keystream(&params.lcg, key.alpha, z)
}

/// The automorphisms `f_{x_1}, ..., f_{x_z}` derived from the family.
pub fn automorphism_schedule(params: &CipherPublicParams, key: &CipherPrivateKey, z: usize) -> Vec<FactoredAutomorphism> {
    schedule_indices(params, key, z).into_par_iter().map(|x| params.fam.derive(x)).collect()
}

pub fn encrypt(params: &CipherPublicParams, key: &CipherPrivateKey, plaintext: &str) -> Result<Ciphertext> {
    let symbols = params.encode(plaintext)?;
    let schedule = automorphism_schedule(params, key, symbols.len());
    encrypt_symbols(params, key, &symbols, &schedule)
}

/// Encrypts with an explicit automorphism per position instead of the family.
pub fn encrypt_with_schedule(
    params: &CipherPublicParams,
    key: &CipherPrivateKey,
    plaintext: &str,
    schedule: &[FactoredAutomorphism],
) -> Result<Ciphertext> {
    let symbols = params.encode(plaintext)?;
    encrypt_symbols(params, key, &symbols, schedule)
}

fn check_schedule(params: &CipherPublicParams, z: usize, schedule: &[FactoredAutomorphism]) -> Result<()> {
    if schedule.len() != z {
        return Err(Error::Precondition(format!("{} automorphisms for {z} units", schedule.len())));
    }
    if let Some(f) = schedule.iter().find(|f| f.rank() != params.alphabet.rank()) {
        return Err(Error::AlphabetMismatch { expected: params.alphabet.rank(), found: f.rank() });
    }
    Ok(())
}

fn encrypt_symbols(
    params: &CipherPublicParams,
    key: &CipherPrivateKey,
    symbols: &[usize],
    schedule: &[FactoredAutomorphism],
) -> Result<Ciphertext> {
    key.validate(params)?;
    check_schedule(params, symbols.len(), schedule)?;
    let units = symbols
        .par_iter()
        .zip(schedule)
        .map(|(&k, f)| f.apply(&key.u.words()[k]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ciphertext { units })
}

pub fn decrypt(params: &CipherPublicParams, key: &CipherPrivateKey, c: &Ciphertext) -> Result<String> {
    let schedule = automorphism_schedule(params, key, c.units.len());
    decrypt_with_schedule(params, key, c, &schedule)
}

/// Inverts each unit with the inverse automorphism and looks the result up in `U`.
pub fn decrypt_with_schedule(
    params: &CipherPublicParams,
    key: &CipherPrivateKey,
    c: &Ciphertext,
    schedule: &[FactoredAutomorphism],
) -> Result<String> {
    key.validate(params)?;
    check_schedule(params, c.units.len(), schedule)?;
    let lookup: HashMap<&Word, usize> = key.u.words().iter().enumerate().map(|(k, w)| (w, k)).collect();
    let symbols = c
        .units
        .par_iter()
        .zip(schedule)
        .enumerate()
        .map(|(i, (unit, f))| {
            let w = f.inverse().apply(unit).map_err(|_| Error::DecryptionFailure { unit: i + 1 })?;
            lookup.get(&w).copied().ok_or(Error::DecryptionFailure { unit: i + 1 })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(params.decode(&symbols))
}

/// `table[k][i] = f_i(U[k])`: one column per position, one row per symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherTable {
    pub columns: Vec<Vec<Word>>,
}

impl CipherTable {
    pub fn entry(&self, symbol: usize, position: usize) -> &Word {
        &self.columns[position][symbol]
    }
}

pub fn build_cipher_table(params: &CipherPublicParams, key: &CipherPrivateKey, indices: &[u128]) -> Result<CipherTable> {
    let schedule: Vec<FactoredAutomorphism> = indices.par_iter().map(|&x| params.fam.derive(x)).collect();
    cipher_table_for(params, key, &schedule)
}

pub fn cipher_table_for(params: &CipherPublicParams, key: &CipherPrivateKey, schedule: &[FactoredAutomorphism]) -> Result<CipherTable> {
    key.validate(params)?;
    check_schedule(params, schedule.len(), schedule)?;
    let columns = schedule
        .par_iter()
        .map(|f| key.u.words().iter().map(|u| f.apply(u)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(CipherTable { columns })
}

/// One line per plaintext symbol: `A = w1 | w2 | ..`, one entry per position.
pub fn format_cipher_table(params: &CipherPublicParams, table: &CipherTable) -> String {
    let mut out = String::new();
    for (k, sym) in params.plaintext_alphabet.iter().enumerate() {
        let row: Vec<String> = table.columns.iter().map(|col| params.alphabet.format_word(&col[k])).collect();
        out.push_str(&format!("{sym} = {}\n", row.join(" | ")));
    }
    out
}

/// Decrypts by looking unit `i` up in column `i`.
pub fn decrypt_with_table(params: &CipherPublicParams, table: &CipherTable, c: &Ciphertext) -> Result<String> {
    if table.columns.len() < c.units.len() {
        return Err(Error::Precondition(format!("table has {} columns for {} units", table.columns.len(), c.units.len())));
    }
    let symbols = c
        .units
        .iter()
        .zip(&table.columns)
        .enumerate()
        .map(|(i, (unit, column))| column.iter().position(|w| w == unit).ok_or(Error::DecryptionFailure { unit: i + 1 }))
        .collect::<Result<Vec<_>>>()?;
    Ok(params.decode(&symbols))
}

pub fn format_key_file(params: &CipherPublicParams, key: &CipherPrivateKey) -> String {
    let plain: Vec<String> = params.plaintext_alphabet.iter().map(char::to_string).collect();
    let mut out = format!(
        "alphabet = {}\nN = {}\nplaintext_alphabet = {}\nalpha = {}\n",
        params.alphabet.names().join(" "),
        params.symbol_count(),
        plain.join(" "),
        key.alpha
    );
    out.push_str(&crate::keystream::format_params(&params.lcg, params.fam.master_seed));
    out.push_str(&format_tuple(&params.alphabet, &key.u));
    out
}

pub fn parse_key_file(text: &str) -> Result<(CipherPublicParams, CipherPrivateKey)> {
    let mut lines = Lines::new(text);
    let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
    while let Some((n, line)) = lines.peek_content() {
        if line == "begin tuple" {
            break;
        }
        lines.next_content();
        let (k, v) = split_kv(line).ok_or_else(|| ParseError::at(n, format!("expected `key = value`, found {line:?}")))?;
        if !["alphabet", "N", "plaintext_alphabet", "alpha", "m", "beta", "gamma", "seed"].contains(&k) {
            return Err(ParseError::at(n, format!("unknown key {k:?}")).into());
        }
        if pairs.iter().any(|(_, kk, _)| *kk == k) {
            return Err(ParseError::at(n, format!("duplicate key {k:?}")).into());
        }
        pairs.push((n, k, v));
    }
    let get = |key: &str| {
        pairs
            .iter()
            .find(|(_, k, _)| *k == key)
            .map(|&(n, _, v)| (n, v))
            .ok_or_else(|| ParseError::at(0, format!("missing `{key}`")))
    };
    let (na, names) = get("alphabet")?;
    let alphabet = Alphabet::from_names_line(names).map_err(|e| ParseError::at(na, e.to_string()))?;
    let (nn, count) = get("N")?;
    let count: usize = count.parse().map_err(|_| ParseError::at(nn, format!("bad symbol count {count:?}")))?;
    let (np, plain) = get("plaintext_alphabet")?;
    let plain: Vec<char> = plain
        .split_whitespace()
        .map(|s| {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(ParseError::at(np, format!("plaintext symbol {s:?} is not a single character"))),
            }
        })
        .collect::<std::result::Result<_, _>>()?;
    if plain.len() != count {
        return Err(ParseError::at(np, format!("N = {count} but {} symbols listed", plain.len())).into());
    }
    let (nal, alpha) = get("alpha")?;
    let alpha: u128 = alpha.parse().map_err(|_| ParseError::at(nal, format!("bad alpha {alpha:?}")))?;
    let (lcg, seed) = params_from_pairs(&pairs)?;
    let params = CipherPublicParams::new(alphabet, plain, lcg, seed).map_err(|e| ParseError::at(np, e.to_string()))?;
    let u = parse_tuple_block(&params.alphabet, &mut lines)?;
    lines.expect_end()?;
    let key = CipherPrivateKey::new(&params, u, alpha)?;
    Ok((params, key))
}

/// One line, units separated by ` | `. The empty message is an empty line.
pub fn format_ciphertext(alphabet: &Alphabet, c: &Ciphertext) -> String {
    let units: Vec<String> = c.units.iter().map(|w| alphabet.format_word(w)).collect();
    format!("{}\n", units.join(" | "))
}

pub fn parse_ciphertext(text: &str, alphabet: &Alphabet) -> Result<Ciphertext> {
    let body = text.trim();
    if body.is_empty() {
        return Ok(Ciphertext::default());
    }
    if body.lines().count() > 1 {
        return Err(ParseError::at(2, "ciphertext must be a single line").into());
    }
    let units = body
        .split('|')
        .enumerate()
        .map(|(i, unit)| alphabet.parse_word(unit).map_err(|e| ParseError::at(1, format!("unit {}: {e}", i + 1)).into()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ciphertext { units })
}

/// Reads the `alphabet = ...` line of a key file without validating the rest.
pub fn key_file_alphabet(text: &str) -> Result<Alphabet> {
    let mut lines = Lines::new(text);
    while let Some((n, line)) = lines.next_content() {
        if let Some(v) = key_value(line, "alphabet") {
            return Alphabet::from_names_line(v).map_err(|e| ParseError::at(n, e.to_string()).into());
        }
    }
    Err(ParseError::eof("alphabet").into())
}
