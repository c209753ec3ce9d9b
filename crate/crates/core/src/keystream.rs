//! Linear congruence generators modulo `2^m`, the splitmix64 bit source, and
//! the seed-derived automorphism family.
//!
//! The family is never materialized: member `i` is a pure function of the
//! master seed and `i`. Keeping the master seed private gives the private-seed
//! variant of the scheme.

use crate::automorphism::{random_whitehead_automorphism, FactoredAutomorphism};
use crate::error::{Error, Result};
use crate::text::{split_kv, Lines, ParseError};
use crate::word::{Letter, Word};

pub const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// `x -> beta * x + gamma (mod 2^m)`, `1 <= m <= 128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LcgParams {
    m: u32,
    beta: u128,
    gamma: u128,
}

impl LcgParams {
    /// `beta` and `gamma` are reduced modulo `2^m`.
    pub fn new(m: u32, beta: u128, gamma: u128) -> Result<LcgParams> {
        if !(1..=128).contains(&m) {
            return Err(Error::InvalidParams(format!("modulus exponent {m} outside 1..=128")));
        }
        let mask = mask(m);
        Ok(LcgParams { m, beta: beta & mask, gamma: gamma & mask })
    }

    pub fn modulus_exponent(&self) -> u32 {
        self.m
    }

    pub fn beta(&self) -> u128 {
        self.beta
    }

    pub fn gamma(&self) -> u128 {
        self.gamma
    }

    pub fn mask(&self) -> u128 {
        mask(self.m)
    }

    pub fn reduce(&self, x: u128) -> u128 {
        x & self.mask()
    }
}

fn mask(m: u32) -> u128 {
    if m >= 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    }
}

pub fn lcg_next(p: &LcgParams, x: u128) -> u128 {
    p.beta.wrapping_mul(x).wrapping_add(p.gamma) & p.mask()
}

/// Period `2^m` iff `beta` odd, `beta = 1 (mod 4)` when `m >= 2`, and `gamma` odd.
pub fn has_max_period(p: &LcgParams) -> bool {
    p.beta % 2 == 1 && (p.m < 2 || p.beta % 4 == 1) && p.gamma % 2 == 1
}

/// `(x_1, ..., x_z)` with `x_1 = alpha` and `x_{k+1} = h(x_k)`.
pub fn keystream(p: &LcgParams, alpha: u128, z: usize) -> Vec<u128> {
    let mut out = Vec::with_capacity(z);
    let mut x = p.reduce(alpha);
    for k in 0..z {
        if k > 0 {
            x = lcg_next(p, x);
        }
        out.push(x);
    }
    out
}

/// Source of uniform draws for the samplers.
pub trait RandomSource {
    fn next_u64(&mut self) -> u64;

    /// A draw in `0..n`, `n > 0`, by reduction modulo `n`.
    fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        self.next_u64() % n
    }
}

/// splitmix64: bit-exact and portable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prg {
    state: u64,
}

impl Prg {
    pub fn new(seed: u64) -> Prg {
        Prg { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }
}

impl RandomSource for Prg {
    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(SPLITMIX_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Uniform freely reduced word of the given length over `rank` generators.
pub fn random_reduced_word<R: RandomSource>(src: &mut R, rank: usize, len: usize) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let choices = if out.is_empty() { 2 * rank } else { 2 * rank - 1 };
        let mut k = src.below(choices as u64) as usize;
        if let Some(&last) = out.last() {
            // skip the one letter that would cancel
            if k >= last.inverse().order_key() {
                k += 1;
            }
        }
        out.push(Letter::new(k / 2, k % 2 == 1));
    }
    Word::from_letters(out)
}

/// One splitmix64 output from state `x`.
pub fn splitmix64(x: u64) -> u64 {
    Prg::new(x).next_u64()
}

/// The indexed automorphism family, derived lazily from a master seed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutFamily {
    pub master_seed: u64,
    pub rank: usize,
    pub m: u32,
}

impl AutFamily {
    pub fn new(master_seed: u64, rank: usize, m: u32) -> Result<AutFamily> {
        if rank < 2 {
            return Err(Error::InvalidParams("automorphism family needs rank >= 2".into()));
        }
        if !(1..=128).contains(&m) {
            return Err(Error::InvalidParams(format!("modulus exponent {m} outside 1..=128")));
        }
        Ok(AutFamily { master_seed, rank, m })
    }

    /// Seed of the bit source for member `index`.
    pub fn member_seed(&self, index: u128) -> u64 {
        let index = index & mask(self.m);
        let low = index as u64;
        let high = (index >> 64) as u64;
        splitmix64(self.master_seed ^ low ^ high.rotate_left(32))
    }

    pub fn derive(&self, index: u128) -> FactoredAutomorphism {
        let mut prg = Prg::new(self.member_seed(index));
        random_whitehead_automorphism(&mut prg, self.rank).expect("family rank is at least 2")
    }
}

pub fn derive_automorphism(fam: &AutFamily, index: u128) -> FactoredAutomorphism {
    fam.derive(index)
}

/// `m = ..`, `beta = ..`, `gamma = ..`, `seed = 0x..` lines.
pub fn format_params(lcg: &LcgParams, seed: u64) -> String {
    format!(
        "m = {}\nbeta = {}\ngamma = {}\nseed = 0x{:016x}\n",
        lcg.m, lcg.beta, lcg.gamma, seed
    )
}

pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    let hex = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    if hex.is_empty() || hex.len() > 16 {
        return None;
    }
    u64::from_str_radix(hex, 16).ok()
}

/// Collects the four parameter lines (any order) from a list of key/value pairs.
pub(crate) fn params_from_pairs(pairs: &[(usize, &str, &str)]) -> std::result::Result<(LcgParams, u64), ParseError> {
    let find = |key: &str| pairs.iter().find(|(_, k, _)| *k == key).copied();
    let need = |key: &str| find(key).ok_or_else(|| ParseError::at(0, format!("missing `{key}`")));
    let (nm, _, m) = need("m")?;
    let m: u32 = m.parse().map_err(|_| ParseError::at(nm, format!("bad modulus exponent {m:?}")))?;
    let (nb, _, beta) = need("beta")?;
    let beta: u128 = beta.parse().map_err(|_| ParseError::at(nb, format!("bad beta {beta:?}")))?;
    let (ng, _, gamma) = need("gamma")?;
    let gamma: u128 = gamma.parse().map_err(|_| ParseError::at(ng, format!("bad gamma {gamma:?}")))?;
    let (ns, _, seed) = need("seed")?;
    let seed = parse_seed(seed).ok_or_else(|| ParseError::at(ns, format!("bad seed {seed:?}")))?;
    let lcg = LcgParams::new(m, beta, gamma).map_err(|e| ParseError::at(nm, e.to_string()))?;
    Ok((lcg, seed))
}

pub fn parse_params(text: &str) -> Result<(LcgParams, u64)> {
    let mut lines = Lines::new(text);
    let mut pairs = Vec::new();
    while let Some((n, line)) = lines.next_content() {
        let (k, v) = split_kv(line).ok_or_else(|| ParseError::at(n, format!("expected `key = value`, found {line:?}")))?;
        if !["m", "beta", "gamma", "seed"].contains(&k) {
            return Err(ParseError::at(n, format!("unknown key {k:?}")).into());
        }
        if pairs.iter().any(|(_, kk, _)| *kk == k) {
            return Err(ParseError::at(n, format!("duplicate key {k:?}")).into());
        }
        pairs.push((n, k, v));
    }
    Ok(params_from_pairs(&pairs)?)
}
