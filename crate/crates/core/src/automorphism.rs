//! Automorphisms of a free group kept as sequences of elementary factors.
//!
//! A factor list `[p1, ..., pk]` denotes the map `p1 o p2 o ... o pk`. On the
//! basis tuple this is the same as applying the factors left to right: a
//! Nielsen factor acts as a tuple move, a Whitehead factor substitutes the
//! current images into its defining words. Inversion is factor-wise and never
//! solved from images.

use std::fmt;

use crate::error::{Error, Result};
use crate::keystream::RandomSource;
use crate::nielsen::{parse_move_line, ElementaryMove, GeneratingTuple};
use crate::text::{Lines, ParseError};
use crate::word::{Alphabet, Letter, Word};

/// Upper bound on redraws of one sampler position before the factor type flips.
const REDRAWS_BEFORE_FLIP: usize = 64;

/// A Whitehead automorphism. Generator indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WhiteheadMove {
    /// `a -> a^-1`, other generators fixed.
    Inv(usize),
    /// `b -> ab` on `L`, `b -> ba^-1` on `R`, `b -> aba^-1` on `M`.
    ///
    /// Sets are sorted and duplicate-free; `M` always contains `a`.
    Multi { a: usize, l: Vec<usize>, r: Vec<usize>, m: Vec<usize> },
}

impl WhiteheadMove {
    /// Builds a multiplier move, adding `a` to `M` and sorting the sets.
    pub fn multi(a: usize, l: &[usize], r: &[usize], m: &[usize]) -> WhiteheadMove {
        let sorted = |s: &[usize]| {
            let mut v = s.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut m = sorted(m);
        if !m.contains(&a) {
            m.push(a);
            m.sort_unstable();
        }
        WhiteheadMove::Multi { a, l: sorted(l), r: sorted(r), m }
    }

    pub fn validate(&self, rank: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidWhitehead(msg));
        match self {
            WhiteheadMove::Inv(a) => {
                if *a >= rank {
                    return bad(format!("generator {} outside rank {rank}", a + 1));
                }
            }
            WhiteheadMove::Multi { a, l, r, m } => {
                if *a >= rank {
                    return bad(format!("generator {} outside rank {rank}", a + 1));
                }
                if !m.contains(a) {
                    return bad("the multiplier must lie in M".into());
                }
                let mut seen = vec![false; rank];
                for &b in l.iter().chain(r).chain(m) {
                    if b >= rank {
                        return bad(format!("generator {} outside rank {rank}", b + 1));
                    }
                    if seen[b] {
                        return bad(format!("generator {} in more than one set", b + 1));
                    }
                    seen[b] = true;
                }
                if l.is_empty() && r.is_empty() && m.len() == 1 {
                    return bad("move is the identity".into());
                }
            }
        }
        Ok(())
    }

    /// Image of generator `b`.
    pub fn image(&self, b: usize) -> Word {
        match self {
            WhiteheadMove::Inv(a) => {
                if b == *a {
                    Word::letter(Letter::inv(b))
                } else {
                    Word::generator(b)
                }
            }
            WhiteheadMove::Multi { a, l, r, m } => {
                let (a, x) = (Letter::gen(*a), Letter::gen(b));
                if l.contains(&b) {
                    Word::from_letters([a, x])
                } else if r.contains(&b) {
                    Word::from_letters([x, a.inverse()])
                } else if m.contains(&b) {
                    Word::from_letters([a, x, a.inverse()])
                } else {
                    Word::letter(x)
                }
            }
        }
    }

    /// Factor-wise inverse: `Inv(a)` is an involution, `W^-1 = Inv(a) W Inv(a)`.
    pub fn inverse_factors(&self) -> Vec<WhiteheadMove> {
        match self {
            WhiteheadMove::Inv(_) => vec![self.clone()],
            WhiteheadMove::Multi { a, .. } => vec![WhiteheadMove::Inv(*a), self.clone(), WhiteheadMove::Inv(*a)],
        }
    }
}

/// One elementary factor of an automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Nielsen(ElementaryMove),
    Whitehead(WhiteheadMove),
}

impl Factor {
    fn inverse_factors(&self) -> Vec<Factor> {
        match self {
            Factor::Nielsen(m) => m
                .inverse_sequence()
                .expect("factors are regular")
                .into_iter()
                .map(Factor::Nielsen)
                .collect(),
            Factor::Whitehead(w) => w.inverse_factors().into_iter().map(Factor::Whitehead).collect(),
        }
    }

    fn validate(&self, rank: usize, position: usize) -> Result<()> {
        match self {
            Factor::Nielsen(ElementaryMove::Delete(_)) => Err(Error::NotRegular(position + 1)),
            Factor::Nielsen(ElementaryMove::Invert(i)) if *i >= rank => Err(Error::BadIndex { index: i + 1, len: rank }),
            Factor::Nielsen(ElementaryMove::Multiply(i, j)) => {
                if *i >= rank || *j >= rank {
                    Err(Error::BadIndex { index: (*i).max(*j) + 1, len: rank })
                } else if i == j {
                    Err(Error::IllegalMove(format!("T2 {} {} needs distinct indices", i + 1, j + 1)))
                } else {
                    Ok(())
                }
            }
            Factor::Nielsen(_) => Ok(()),
            Factor::Whitehead(w) => w.validate(rank),
        }
    }
}

/// Generator images after applying `factor` on top of `images`.
fn step_images(images: &[Word], factor: &Factor) -> Vec<Word> {
    match factor {
        Factor::Nielsen(ElementaryMove::Invert(i)) => {
            let mut out = images.to_vec();
            out[*i] = out[*i].inverse();
            out
        }
        Factor::Nielsen(ElementaryMove::Multiply(i, j)) => {
            let mut out = images.to_vec();
            out[*i] = out[*i].concat(&images[*j]);
            out
        }
        Factor::Nielsen(ElementaryMove::Delete(_)) => unreachable!("validated as regular"),
        Factor::Whitehead(w) => (0..images.len()).map(|b| w.image(b).substitute(images)).collect(),
    }
}

/// An automorphism with its factorization and cached generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredAutomorphism {
    rank: usize,
    factors: Vec<Factor>,
    images: Vec<Word>,
}

impl FactoredAutomorphism {
    pub fn identity(rank: usize) -> FactoredAutomorphism {
        FactoredAutomorphism { rank, factors: Vec::new(), images: GeneratingTuple::basis(rank).0 }
    }

    pub fn from_factors(factors: Vec<Factor>, rank: usize) -> Result<FactoredAutomorphism> {
        let mut images = GeneratingTuple::basis(rank).0;
        for (k, f) in factors.iter().enumerate() {
            f.validate(rank, k)?;
            images = step_images(&images, f);
        }
        Ok(FactoredAutomorphism { rank, factors, images })
    }

    /// Regular Nielsen moves applied left to right to `(x1, ..., xq)`.
    pub fn from_nielsen_sequence(moves: &[ElementaryMove], rank: usize) -> Result<FactoredAutomorphism> {
        FactoredAutomorphism::from_factors(moves.iter().copied().map(Factor::Nielsen).collect(), rank)
    }

    pub fn from_whitehead_sequence(moves: &[WhiteheadMove], rank: usize) -> Result<FactoredAutomorphism> {
        FactoredAutomorphism::from_factors(moves.iter().cloned().map(Factor::Whitehead).collect(), rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Image of each generator.
    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| *w == Word::generator(i))
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.check_rank(self.rank)?;
        Ok(w.substitute(&self.images))
    }

    /// `self o other`, i.e. `w -> self(other(w))`.
    pub fn compose(&self, other: &FactoredAutomorphism) -> Result<FactoredAutomorphism> {
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch { expected: self.rank, found: other.rank });
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let images = other.images.iter().map(|w| w.substitute(&self.images)).collect();
        Ok(FactoredAutomorphism { rank: self.rank, factors, images })
    }

    pub fn power(&self, n: u64) -> FactoredAutomorphism {
        let mut acc = FactoredAutomorphism::identity(self.rank);
        for _ in 0..n {
            acc = self.compose(&acc).expect("same rank");
        }
        acc
    }

    pub fn inverse(&self) -> FactoredAutomorphism {
        let factors: Vec<Factor> = self.factors.iter().rev().flat_map(Factor::inverse_factors).collect();
        FactoredAutomorphism::from_factors(factors, self.rank).expect("inverse factors are valid")
    }
}

pub fn apply(f: &FactoredAutomorphism, w: &Word) -> Result<Word> {
    f.apply(w)
}

pub fn compose(f: &FactoredAutomorphism, g: &FactoredAutomorphism) -> Result<FactoredAutomorphism> {
    f.compose(g)
}

pub fn power(f: &FactoredAutomorphism, n: u64) -> FactoredAutomorphism {
    f.power(n)
}

pub fn inverse(f: &FactoredAutomorphism) -> FactoredAutomorphism {
    f.inverse()
}

/// Random automorphism as a product of Whitehead automorphisms.
///
/// Draws a 0-1 sequence of length `4 + (next mod 13)` and translates it with
/// [`whitehead_from_bits`].
pub fn random_whitehead_automorphism<R: RandomSource>(src: &mut R, rank: usize) -> Result<FactoredAutomorphism> {
    if rank < 2 {
        return Err(Error::InvalidParams("random automorphisms need rank >= 2".into()));
    }
    let len = 4 + src.below(13) as usize;
    let bits: Vec<bool> = (0..len).map(|_| src.next_u64() & 1 == 1).collect();
    whitehead_from_bits(src, rank, &bits)
}

/// Translates a 0-1 sequence: 0 draws an inversion, 1 draws a multiplier move.
///
/// A drawn factor is rejected and redrawn when it would make some trailing
/// block of factors compose to the identity (this covers `i_a i_a` and
/// `W W^-1`, and keeps the composite away from the identity).
pub fn whitehead_from_bits<R: RandomSource>(src: &mut R, rank: usize, bits: &[bool]) -> Result<FactoredAutomorphism> {
    if rank < 2 {
        return Err(Error::InvalidParams("random automorphisms need rank >= 2".into()));
    }
    let mut factors = Vec::with_capacity(bits.len());
    let mut prefixes: Vec<Vec<Word>> = vec![GeneratingTuple::basis(rank).0];
    for &bit in bits {
        let mut multi = bit;
        let mut attempts = 0;
        loop {
            let mv = if multi { draw_multi(src, rank) } else { WhiteheadMove::Inv(src.below(rank as u64) as usize) };
            let factor = Factor::Whitehead(mv);
            let next = step_images(prefixes.last().expect("non-empty"), &factor);
            if !prefixes.contains(&next) {
                prefixes.push(next);
                factors.push(factor);
                break;
            }
            attempts += 1;
            if attempts % REDRAWS_BEFORE_FLIP == 0 {
                multi = !multi;
            }
        }
    }
    let images = prefixes.pop().expect("non-empty");
    Ok(FactoredAutomorphism { rank, factors, images })
}

fn draw_multi<R: RandomSource>(src: &mut R, q: usize) -> WhiteheadMove {
    let q64 = q as u64;
    let z = src.below(q64) as usize;
    let z1 = src.below(q64) as usize;
    let z2 = src.below(q64 - z1 as u64) as usize;
    let z3 = src.below(q64 - (z1 + z2) as u64) as usize;
    let mut pool: Vec<usize> = (0..q).filter(|&i| i != z).collect();
    if z1 == 0 && z2 == 0 && z3 == 0 {
        let extra = pool[src.below(pool.len() as u64) as usize];
        return match src.below(3) {
            0 => WhiteheadMove::multi(z, &[extra], &[], &[]),
            1 => WhiteheadMove::multi(z, &[], &[extra], &[]),
            _ => WhiteheadMove::multi(z, &[], &[], &[extra]),
        };
    }
    let mut take = |count: usize| -> Vec<usize> {
        (0..count)
            .map(|_| pool.remove(src.below(pool.len() as u64) as usize))
            .collect()
    };
    let l = take(z1);
    let r = take(z2);
    let m = take(z3);
    WhiteheadMove::multi(z, &l, &r, &m)
}

struct FactorLine<'a>(&'a Alphabet, &'a Factor);

impl fmt::Display for FactorLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |s: &[usize]| s.iter().map(|&i| self.0.name(i)).collect::<Vec<_>>().join(" ");
        match self.1 {
            Factor::Nielsen(m) => write!(f, "{m}"),
            Factor::Whitehead(WhiteheadMove::Inv(a)) => write!(f, "INV {}", self.0.name(*a)),
            Factor::Whitehead(WhiteheadMove::Multi { a, l, r, m }) => {
                let rest: Vec<usize> = m.iter().copied().filter(|b| b != a).collect();
                let part = |key: &str, s: &[usize]| {
                    if s.is_empty() {
                        format!("{key} =")
                    } else {
                        format!("{key} = {}", names(s))
                    }
                };
                write!(f, "W {} ; {} ; {} ; {}", self.0.name(*a), part("L", l), part("R", r), part("M", &rest))
            }
        }
    }
}

/// One factor per line, in application order.
pub fn format_automorphism(alphabet: &Alphabet, f: &FactoredAutomorphism) -> String {
    f.factors.iter().map(|x| format!("{}\n", FactorLine(alphabet, x))).collect()
}

pub fn parse_automorphism(text: &str, alphabet: &Alphabet) -> Result<FactoredAutomorphism> {
    let mut lines = Lines::new(text);
    let mut factors = Vec::new();
    while let Some((n, line)) = lines.next_content() {
        let factor = parse_factor_line(line, alphabet).map_err(|msg| ParseError::at(n, msg))?;
        if let Factor::Nielsen(ElementaryMove::Delete(_)) = factor {
            return Err(Error::NotRegular(factors.len() + 1));
        }
        factor
            .validate(alphabet.rank(), factors.len())
            .map_err(|e| ParseError::at(n, e.to_string()))?;
        factors.push(factor);
    }
    FactoredAutomorphism::from_factors(factors, alphabet.rank())
}

fn parse_factor_line(line: &str, alphabet: &Alphabet) -> std::result::Result<Factor, String> {
    let gen = |name: &str| alphabet.index_of(name).ok_or_else(|| format!("unknown generator {name:?}"));
    if line.starts_with('T') {
        return parse_move_line(line).map(Factor::Nielsen);
    }
    if let Some(rest) = line.strip_prefix("INV") {
        let parts: Vec<&str> = rest.split_whitespace().collect();
        return match (rest.starts_with(char::is_whitespace), parts.as_slice()) {
            (true, [a]) => Ok(Factor::Whitehead(WhiteheadMove::Inv(gen(a)?))),
            _ => Err(format!("malformed inversion {line:?}")),
        };
    }
    if let Some(rest) = line.strip_prefix("W") {
        let mut sections = rest.split(';');
        let head: Vec<&str> = sections.next().unwrap_or("").split_whitespace().collect();
        let a = match (rest.starts_with(char::is_whitespace), head.as_slice()) {
            (true, [a]) => gen(a)?,
            _ => return Err(format!("malformed Whitehead move {line:?}")),
        };
        let mut sets: [Option<Vec<usize>>; 3] = [None, None, None];
        for s in sections {
            let (k, v) = s.split_once('=').ok_or_else(|| format!("malformed set {s:?}"))?;
            let slot = match k.trim() {
                "L" => 0,
                "R" => 1,
                "M" => 2,
                other => return Err(format!("unknown set {other:?}")),
            };
            if sets[slot].is_some() {
                return Err(format!("set {} given twice", k.trim()));
            }
            let members = v.split_whitespace().map(gen).collect::<std::result::Result<Vec<_>, _>>()?;
            let mut dedup = members.clone();
            dedup.sort_unstable();
            dedup.dedup();
            if dedup.len() != members.len() {
                return Err(format!("repeated generator in set {}", k.trim()));
            }
            sets[slot] = Some(members);
        }
        let [l, r, m] = sets.map(Option::unwrap_or_default);
        if l.contains(&a) || r.contains(&a) {
            return Err("the multiplier cannot lie in L or R".into());
        }
        let mv = WhiteheadMove::multi(a, &l, &r, &m);
        mv.validate(alphabet.rank()).map_err(|e| e.to_string())?;
        return Ok(Factor::Whitehead(mv));
    }
    Err(format!("unrecognized factor {line:?}"))
}
