//! Exact 2x2 rational matrices and a faithful representation of a free group
//! in `SL(2, Q)`.
//!
//! The building blocks are `M(r) = [[-r, r^2 - 1], [1, -r]]`. For `r_1 >= 2`
//! and gaps `r_{j+1} - r_j >= 3` they generate a free group. As a Moebius map
//! `M(r)` sends everything outside `[r - 1, r + 1]` into `[-r - 1, -r + 1]`
//! and its inverse does the reverse, so the image of `0` under a reduced
//! product lands in the interval of the first letter. That gives an exact
//! decoder: read the first letter off `g(0)`, peel it, repeat.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::nielsen::{apply_moves, nielsen_reduce, subgroup_membership, GeneratingTuple};
use crate::text::{key_value, Lines, ParseError};
use crate::word::{Alphabet, Letter, Word};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Row-major `[a11, a12, a21, a22]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2Q(pub [Rational; 4]);

impl Mat2Q {
    pub fn new(a11: Rational, a12: Rational, a21: Rational, a22: Rational) -> Mat2Q {
        Mat2Q([a11, a12, a21, a22])
    }

    pub fn from_ints(a: [i64; 4]) -> Mat2Q {
        Mat2Q(a.map(|x| Rational::from_integer(BigInt::from(x))))
    }

    pub fn identity() -> Mat2Q {
        Mat2Q::from_ints([1, 0, 0, 1])
    }

    pub fn is_identity(&self) -> bool {
        self.0[0].is_one() && self.0[1].is_zero() && self.0[2].is_zero() && self.0[3].is_one()
    }

    pub fn det(&self) -> Rational {
        &self.0[0] * &self.0[3] - &self.0[1] * &self.0[2]
    }

    pub fn mul(&self, o: &Mat2Q) -> Mat2Q {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2Q([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn inverse(&self) -> Result<Mat2Q> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let [a, b, c, d] = &self.0;
        if det.is_one() {
            return Ok(Mat2Q([d.clone(), -b, -c, a.clone()]));
        }
        Ok(Mat2Q([d / &det, -b / &det, -c / &det, a / &det]))
    }

    /// Total bit length of numerators and denominators.
    pub fn size_measure(&self) -> u64 {
        self.0.iter().map(|x| x.numer().bits() + x.denom().bits()).sum()
    }

    fn require_det_one(&self) -> Result<()> {
        let det = self.det();
        if det.is_one() {
            Ok(())
        } else {
            Err(Error::DeterminantNotOne(det.to_string()))
        }
    }
}

impl fmt::Display for Mat2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |x: &Rational| format!("{}/{}", x.numer(), x.denom());
        let [a, b, c, d] = &self.0;
        write!(f, "[[{}, {}],[{}, {}]]", e(a), e(b), e(c), e(d))
    }
}

pub fn mat_mul(a: &Mat2Q, b: &Mat2Q) -> Mat2Q {
    a.mul(b)
}

pub fn mat_inv(a: &Mat2Q) -> Result<Mat2Q> {
    a.inverse()
}

pub fn mat_det(a: &Mat2Q) -> Rational {
    a.det()
}

pub fn tl_generator(r: &Rational) -> Mat2Q {
    let one = Rational::one();
    Mat2Q([-r.clone(), r * r - &one, one, -r.clone()])
}

/// `r_j = 2 + 3(j - 1)`.
pub fn default_r_schedule(k: usize) -> Vec<Rational> {
    (0..k).map(|j| Rational::from_integer(BigInt::from(2 + 3 * j as i64))).collect()
}

/// `r = 7/2, 15/2, 23/2`.
pub fn half_integer_r_schedule() -> Vec<Rational> {
    vec![rational(7, 2), rational(15, 2), rational(23, 2)]
}

fn check_r_schedule(r: &[Rational]) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidRepresentation(m));
    if r.is_empty() {
        return bad("no r parameters".into());
    }
    if r[0] < Rational::from_integer(BigInt::from(2)) {
        return bad(format!("r_1 = {} is below 2", r[0]));
    }
    let three = Rational::from_integer(BigInt::from(3));
    for (j, w) in r.windows(2).enumerate() {
        if &w[1] - &w[0] < three {
            return bad(format!("r_{} - r_{} is below 3", j + 2, j + 1));
        }
    }
    Ok(())
}

/// `n / d` with integer `n`: products without per-entry gcds.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Scaled {
    n: [BigInt; 4],
    d: BigInt,
}

impl Scaled {
    fn identity() -> Scaled {
        Scaled { n: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()], d: BigInt::one() }
    }

    fn from_mat(m: &Mat2Q) -> Scaled {
        let d = m.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let n = m.0.clone().map(|x| x.numer() * (&d / x.denom()));
        Scaled { n, d }
    }

    fn mul(&self, o: &Scaled) -> Scaled {
        let [a, b, c, d] = &self.n;
        let [e, f, g, h] = &o.n;
        Scaled { n: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], d: &self.d * &o.d }
    }

    fn is_identity(&self) -> bool {
        self.n[1].is_zero() && self.n[2].is_zero() && self.n[0] == self.d && self.n[3] == self.d
    }

    /// Divides out the common factor of all entries and the scale.
    fn normalize(&mut self) {
        let g = self.n.iter().fold(self.d.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            for x in &mut self.n {
                *x /= &g;
            }
            self.d /= &g;
        }
    }

    fn to_mat(&self) -> Mat2Q {
        Mat2Q(self.n.clone().map(|x| Rational::new(x, self.d.clone())))
    }
}

/// Images of the free generators, each a word in auxiliary generators
/// `X1..Xk` that are sent to `M(r_1)..M(r_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSpec {
    alphabet: Alphabet,
    aux: Alphabet,
    r: Vec<Rational>,
    gen_words: Vec<Word>,
    generator_matrices: Vec<Mat2Q>,
    tl: Vec<Mat2Q>,
    tl_inv: Vec<Mat2Q>,
    /// Scaled forms of the generator matrices, their inverses, and the peeling matrices.
    gen_scaled: Vec<Scaled>,
    gen_inv_scaled: Vec<Scaled>,
    tl_scaled: Vec<Scaled>,
    tl_inv_scaled: Vec<Scaled>,
    /// `r_j` as integer pairs `(numerator, denominator)`.
    r_parts: Vec<(BigInt, BigInt)>,
    /// Nielsen reduction of `gen_words` and each reduced entry as a word in the generators.
    reduced: GeneratingTuple,
    reduced_in_gens: Vec<Word>,
}

pub fn make_representation(alphabet: &Alphabet, r: Vec<Rational>, gen_words: Option<Vec<Word>>) -> Result<RepSpec> {
    check_r_schedule(&r)?;
    let q = alphabet.rank();
    let k = r.len();
    let gen_words = match gen_words {
        Some(g) => g,
        None if k == q => (0..q).map(Word::generator).collect(),
        None => {
            return Err(Error::InvalidRepresentation(format!("{k} r parameters for rank {q} without generator words")))
        }
    };
    if gen_words.len() != q {
        return Err(Error::InvalidRepresentation(format!("{} generator words for rank {q}", gen_words.len())));
    }
    for w in &gen_words {
        w.check_rank(k).map_err(|_| Error::InvalidRepresentation(format!("generator word uses more than {k} auxiliary generators")))?;
    }
    let (reduced, moves) = nielsen_reduce(&GeneratingTuple(gen_words.clone()));
    if reduced.len() != q {
        return Err(Error::InvalidRepresentation("generator words are not a free basis of their subgroup".into()));
    }
    let reduced_in_gens = apply_moves(&GeneratingTuple::basis(q), &moves).expect("reduction moves are regular").0;
    let tl: Vec<Mat2Q> = r.iter().map(tl_generator).collect();
    let tl_inv: Vec<Mat2Q> = tl.iter().map(|m| m.inverse().expect("det 1")).collect();
    let tl_scaled: Vec<Scaled> = tl.iter().map(Scaled::from_mat).collect();
    let tl_inv_scaled: Vec<Scaled> = tl_inv.iter().map(Scaled::from_mat).collect();
    let generator_matrices: Vec<Mat2Q> = gen_words.iter().map(|w| eval(&tl_scaled, &tl_inv_scaled, w)).collect();
    let gen_scaled = generator_matrices.iter().map(Scaled::from_mat).collect();
    let gen_inv_scaled = generator_matrices.iter().map(|m| Scaled::from_mat(&m.inverse().expect("det 1"))).collect();
    let r_parts = r.iter().map(|x| (x.numer().clone(), x.denom().clone())).collect();
    Ok(RepSpec {
        alphabet: alphabet.clone(),
        aux: Alphabet::indexed("X", k),
        r,
        gen_words,
        generator_matrices,
        tl,
        tl_inv,
        gen_scaled,
        gen_inv_scaled,
        tl_scaled,
        tl_inv_scaled,
        r_parts,
        reduced,
        reduced_in_gens,
    })
}

fn eval(mats: &[Scaled], invs: &[Scaled], w: &Word) -> Mat2Q {
    let mut acc = Scaled::identity();
    for (k, l) in w.letters().iter().enumerate() {
        let m = if l.is_inverse() { &invs[l.generator()] } else { &mats[l.generator()] };
        acc = acc.mul(m);
        if k % 16 == 15 {
            acc.normalize();
        }
    }
    acc.to_mat()
}

impl RepSpec {
    /// `x_j -> M(2 + 3(j - 1))`.
    pub fn default_for(alphabet: &Alphabet) -> RepSpec {
        make_representation(alphabet, default_r_schedule(alphabet.rank()), None).expect("default schedule is admissible")
    }

    /// Rank 4 over `r = 7/2, 15/2, 23/2` with generators
    /// `X1 X2, X3 X1^2, X2 X3 X2, X1^-1 X2`.
    pub fn composite_preset(alphabet: &Alphabet) -> Result<RepSpec> {
        let gens = [vec![1, 2], vec![3, 1, 1], vec![2, 3, 2], vec![-1, 2]];
        make_representation(alphabet, half_integer_r_schedule(), Some(gens.iter().map(|g| Word::from_signed(g)).collect()))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn aux_alphabet(&self) -> &Alphabet {
        &self.aux
    }

    pub fn r(&self) -> &[Rational] {
        &self.r
    }

    pub fn gen_words(&self) -> &[Word] {
        &self.gen_words
    }

    pub fn generator_matrices(&self) -> &[Mat2Q] {
        &self.generator_matrices
    }

    fn is_plain(&self) -> bool {
        self.gen_words.iter().enumerate().all(|(i, w)| *w == Word::generator(i)) && self.r.len() == self.gen_words.len()
    }
}

pub fn word_to_matrix(spec: &RepSpec, w: &Word) -> Result<Mat2Q> {
    w.check_rank(spec.alphabet.rank())?;
    Ok(eval(&spec.gen_scaled, &spec.gen_inv_scaled, w))
}

/// Reads a reduced word in the auxiliary generators off `m`, at most `limit` letters.
fn ping_pong_decode(spec: &RepSpec, m: &Mat2Q, limit: usize) -> Option<Word> {
    let mut cur = Scaled::from_mat(m);
    let mut out = Vec::new();
    loop {
        if cur.is_identity() {
            return Some(Word::from_letters(out));
        }
        let [_, b, _, d] = &cur.n;
        if out.len() >= limit || d.is_zero() {
            return None;
        }
        // g(0) = b / d; test |b/d + r| <= 1 and |b/d - r| <= 1 over the integers
        let letter = spec.r_parts.iter().enumerate().find_map(|(j, (rn, rd))| {
            let bound = (d * rd).abs();
            let base = b * rd;
            let shift = rn * d;
            if (&base + &shift).abs() <= bound {
                Some(Letter::gen(j))
            } else if (&base - &shift).abs() <= bound {
                Some(Letter::inv(j))
            } else {
                None
            }
        })?;
        let peel = if letter.is_inverse() { &spec.tl_scaled[letter.generator()] } else { &spec.tl_inv_scaled[letter.generator()] };
        cur = peel.mul(&cur);
        if out.len() % 8 == 7 {
            cur.normalize();
        }
        out.push(letter);
    }
}

/// The word `w` with `|w| <= max_len` and `word_to_matrix(w) = m`, if any.
///
/// The representation is faithful, so such a word is unique.
pub fn matrix_to_word(spec: &RepSpec, m: &Mat2Q, max_len: usize) -> Result<Option<Word>> {
    m.require_det_one()?;
    let longest = spec.gen_words.iter().map(Word::len).max().unwrap_or(0);
    let Some(v) = ping_pong_decode(spec, m, max_len.saturating_mul(longest)) else {
        return Ok(None);
    };
    let w = if spec.is_plain() {
        v
    } else {
        match subgroup_membership(&spec.reduced, &v).expect("reduced basis") {
            Some(expr) => expr.substitute(&spec.reduced_in_gens),
            None => return Ok(None),
        }
    };
    Ok((w.len() <= max_len).then_some(w))
}

/// Generic decoder by search: peel generators greedily by size measure,
/// backtracking depth-first with iterative deepening up to `max_len`.
///
/// Exponential in `max_len`; [`matrix_to_word`] is the practical decoder.
pub fn matrix_to_word_search(spec: &RepSpec, m: &Mat2Q, max_len: usize) -> Result<Option<Word>> {
    m.require_det_one()?;
    let q = spec.alphabet.rank();
    let letters: Vec<Letter> = (0..q).flat_map(|g| [Letter::gen(g), Letter::inv(g)]).collect();
    let peel: Vec<Mat2Q> = letters
        .iter()
        .map(|l| {
            let g = &spec.generator_matrices[l.generator()];
            // peeling x^e off the left multiplies by x^-e
            if l.is_inverse() {
                g.clone()
            } else {
                g.inverse().expect("det 1")
            }
        })
        .collect();
    fn dfs(cur: &Mat2Q, depth: usize, path: &mut Vec<Letter>, letters: &[Letter], peel: &[Mat2Q]) -> bool {
        if cur.is_identity() {
            return true;
        }
        if depth == 0 {
            return false;
        }
        let mut children: Vec<(u64, usize, Mat2Q)> = letters
            .iter()
            .enumerate()
            .filter(|(_, l)| path.last() != Some(&l.inverse()))
            .map(|(k, _)| {
                let next = peel[k].mul(cur);
                (next.size_measure(), k, next)
            })
            .collect();
        children.sort_by_key(|c| (c.0, c.1));
        for (_, k, next) in children {
            path.push(letters[k]);
            if dfs(&next, depth - 1, path, letters, peel) {
                return true;
            }
            path.pop();
        }
        false
    }
    for depth in 0..=max_len {
        let mut path = Vec::new();
        if dfs(m, depth, &mut path, &letters, &peel) {
            return Ok(Some(Word::from_letters(path)));
        }
    }
    Ok(None)
}

pub fn format_matrix(m: &Mat2Q) -> String {
    m.to_string()
}

/// Accepts `n` or `n/d` entries; whitespace is ignored.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let digits = |t: &str, signed: bool| {
        let body = if signed { t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t) } else { t };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(n, true) || !digits(d, false) {
        return Err(format!("bad rational {s:?}"));
    }
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator {n:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator {d:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

pub fn parse_matrix(text: &str) -> Result<Mat2Q> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |m: String| Error::Parse { line: 1, msg: m };
    let inner = compact
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or_else(|| err(format!("expected [[a, b],[c, d]], found {text:?}")))?;
    let rows: Vec<&str> = inner.split("],[").collect();
    if rows.len() != 2 {
        return Err(err("expected two rows".into()));
    }
    let mut entries = Vec::with_capacity(4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 2 {
            return Err(err("expected two entries per row".into()));
        }
        for c in cols {
            entries.push(parse_rational(c).map_err(err)?);
        }
    }
    let [a, b, c, d]: [Rational; 4] = entries.try_into().expect("four entries");
    Ok(Mat2Q([a, b, c, d]))
}

/// One line, matrices separated by ` | `.
pub fn format_matrices(ms: &[Mat2Q]) -> String {
    let parts: Vec<String> = ms.iter().map(Mat2Q::to_string).collect();
    format!("{}\n", parts.join(" | "))
}

pub fn parse_matrices(text: &str) -> Result<Vec<Mat2Q>> {
    let body = text.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split('|').map(parse_matrix).collect()
}

/// `alphabet = ..`, `r = r1 r2 ..`, then one `gen = ..` line per generator
/// (words over `X1..Xk`).
pub fn format_rep_spec(spec: &RepSpec) -> String {
    let rs: Vec<String> = spec.r.iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect();
    let mut out = format!("alphabet = {}\nr = {}\n", spec.alphabet.names().join(" "), rs.join(" "));
    for w in &spec.gen_words {
        out.push_str(&format!("gen = {}\n", spec.aux.format_word(w)));
    }
    out
}

pub fn parse_rep_spec(text: &str) -> Result<RepSpec> {
    let mut lines = Lines::new(text);
    let (n, line) = lines.next_content().ok_or_else(|| ParseError::eof("alphabet"))?;
    let names = key_value(line, "alphabet").ok_or_else(|| ParseError::at(n, "expected `alphabet = ...`"))?;
    let alphabet = Alphabet::from_names_line(names).map_err(|e| ParseError::at(n, e.to_string()))?;
    let (n, line) = lines.next_content().ok_or_else(|| ParseError::eof("r"))?;
    let rs = key_value(line, "r").ok_or_else(|| ParseError::at(n, "expected `r = ...`"))?;
    let r = rs
        .split_whitespace()
        .map(parse_rational)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|m| ParseError::at(n, m))?;
    let aux = Alphabet::indexed("X", r.len().max(1));
    let mut gens = Vec::new();
    while let Some((n, line)) = lines.next_content() {
        let w = key_value(line, "gen").ok_or_else(|| ParseError::at(n, "expected `gen = ...`"))?;
        gens.push(aux.parse_word(w).map_err(|e| ParseError::at(n, e.to_string()))?);
    }
    make_representation(&alphabet, r, (!gens.is_empty()).then_some(gens))
}

/// Every entry in lowest terms with a positive denominator.
pub fn in_lowest_terms(m: &Mat2Q) -> bool {
    m.0.iter().all(|x| x.denom().is_positive() && x.numer().gcd(x.denom()).is_one())
}
