//! Elementary Nielsen transformations on generating tuples.
//!
//! Tuples are ordered and index-addressed. A tuple `U` of length `t` has `2t`
//! symbols: symbol `2i` is `u_i` and symbol `2i + 1` is `u_i^-1`. Conditions
//! of the form "v1 v2 != 1" are read at the symbol level, i.e. `v2` is not the
//! formal inverse symbol of `v1`, so duplicated entries are never reduced.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::text::{Lines, ParseError};
use crate::word::{Alphabet, Letter, Word};

/// Upper bound on states explored when searching for the minimal basis.
pub const CANONICAL_SEARCH_CAP: usize = 200_000;

/// An ordered tuple of words over one alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GeneratingTuple(pub Vec<Word>);

impl GeneratingTuple {
    pub fn new(words: Vec<Word>) -> GeneratingTuple {
        GeneratingTuple(words)
    }

    /// The free basis `(x1, ..., xq)`.
    pub fn basis(rank: usize) -> GeneratingTuple {
        GeneratingTuple((0..rank).map(Word::generator).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn total_length(&self) -> usize {
        self.0.iter().map(Word::len).sum()
    }

    /// Symbol `s` of `U^{+-1}`.
    fn symbols(&self) -> Vec<Word> {
        self.0.iter().flat_map(|u| [u.clone(), u.inverse()]).collect()
    }

    /// Substitutes `expr` (a word over this tuple's symbols) into the tuple.
    pub fn expand(&self, expr: &Word) -> Word {
        let mut out = Word::identity();
        for l in expr.letters() {
            let u = &self.0[l.generator()];
            out = if l.is_inverse() { out.concat(&u.inverse()) } else { out.concat(u) };
        }
        out
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        self.0.iter().try_for_each(|w| w.check_rank(rank))
    }
}

/// One elementary Nielsen move. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryMove {
    /// (T1) `u_i -> u_i^-1`.
    Invert(usize),
    /// (T2) `u_i -> u_i u_j`, `i != j`.
    Multiply(usize, usize),
    /// (T3) delete `u_i`, which must be the identity.
    Delete(usize),
}

impl ElementaryMove {
    pub fn is_regular(self) -> bool {
        !matches!(self, ElementaryMove::Delete(_))
    }

    /// Regular inverse as a move sequence.
    pub fn inverse_sequence(self) -> Option<Vec<ElementaryMove>> {
        use ElementaryMove::*;
        match self {
            Invert(i) => Some(vec![Invert(i)]),
            Multiply(i, j) => Some(vec![Invert(j), Multiply(i, j), Invert(j)]),
            Delete(_) => None,
        }
    }
}

impl fmt::Display for ElementaryMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ElementaryMove::Invert(i) => write!(f, "T1 {}", i + 1),
            ElementaryMove::Multiply(i, j) => write!(f, "T2 {} {}", i + 1, j + 1),
            ElementaryMove::Delete(i) => write!(f, "T3 {}", i + 1),
        }
    }
}

pub fn apply_move(tuple: &GeneratingTuple, m: ElementaryMove) -> Result<GeneratingTuple> {
    let mut out = tuple.clone();
    apply_move_in_place(&mut out.0, m)?;
    Ok(out)
}

pub fn apply_moves(tuple: &GeneratingTuple, moves: &[ElementaryMove]) -> Result<GeneratingTuple> {
    let mut out = tuple.clone();
    for &m in moves {
        apply_move_in_place(&mut out.0, m)?;
    }
    Ok(out)
}

fn apply_move_in_place(u: &mut Vec<Word>, m: ElementaryMove) -> Result<()> {
    let len = u.len();
    let check = |i: usize| if i < len { Ok(()) } else { Err(Error::BadIndex { index: i + 1, len }) };
    match m {
        ElementaryMove::Invert(i) => {
            check(i)?;
            u[i] = u[i].inverse();
        }
        ElementaryMove::Multiply(i, j) => {
            check(i)?;
            check(j)?;
            if i == j {
                return Err(Error::IllegalMove(format!("T2 {} {} needs distinct indices", i + 1, j + 1)));
            }
            u[i] = u[i].concat(&u[j]);
        }
        ElementaryMove::Delete(i) => {
            check(i)?;
            if !u[i].is_identity() {
                return Err(Error::IllegalMove(format!("T3 {} on a non-identity entry", i + 1)));
            }
            u.remove(i);
        }
    }
    Ok(())
}

/// Brute-force check of N0, N1 and N2 over all symbol triples.
pub fn is_nielsen_reduced(tuple: &GeneratingTuple) -> bool {
    if tuple.0.iter().any(Word::is_identity) {
        return false;
    }
    let syms = tuple.symbols();
    let n = syms.len();
    let mut pairs: Vec<Option<Word>> = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            if b == a ^ 1 {
                continue;
            }
            let p = syms[a].concat(&syms[b]);
            if p.len() < syms[a].len() || p.len() < syms[b].len() {
                return false;
            }
            pairs[a * n + b] = Some(p);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = &pairs[a * n + b] else { continue };
            for c in 0..n {
                if c == b ^ 1 {
                    continue;
                }
                let abc = ab.len() + syms[c].len() - 2 * ab.cancellation(&syms[c]);
                let bound = syms[a].len() as isize - syms[b].len() as isize + syms[c].len() as isize;
                if abc as isize <= bound {
                    return false;
                }
            }
        }
    }
    true
}

/// Major-segment isolation test. Requires every entry to be non-identity.
pub fn is_nielsen_reduced_segments(tuple: &GeneratingTuple) -> Result<bool> {
    if tuple.0.iter().any(Word::is_identity) {
        return Err(Error::Precondition("segment test needs non-identity entries".into()));
    }
    let syms = tuple.symbols();
    let isolated_initial = |seg: &[Letter], owner: usize| {
        syms.iter().enumerate().all(|(s, w)| s == owner || !w.starts_with(seg))
    };
    let isolated_terminal = |seg: &[Letter], owner: usize| {
        syms.iter().enumerate().all(|(s, w)| s == owner || !w.ends_with(seg))
    };
    for (i, w) in tuple.0.iter().enumerate() {
        let owner = 2 * i;
        let n = w.len();
        let major = (n / 2 + 1).min(n);
        if !isolated_initial(w.prefix(major), owner) || !isolated_terminal(w.suffix(major), owner) {
            return Ok(false);
        }
        if n % 2 == 0 && !isolated_initial(w.prefix(n / 2), owner) && !isolated_terminal(w.suffix(n / 2), owner) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug)]
enum Side {
    Right,
    Left,
}

/// `u_target -> u_target u_other^{+-1}` or `u_other^{+-1} u_target`.
#[derive(Clone, Copy, Debug)]
struct Replacement {
    target: usize,
    other: usize,
    inverse: bool,
    side: Side,
}

impl Replacement {
    fn word(&self, u: &[Word]) -> Word {
        let o = if self.inverse { u[self.other].inverse() } else { u[self.other].clone() };
        match self.side {
            Side::Right => u[self.target].concat(&o),
            Side::Left => o.concat(&u[self.target]),
        }
    }

    fn moves(&self) -> Vec<ElementaryMove> {
        use ElementaryMove::*;
        let (i, j) = (self.target, self.other);
        let right = |inv: bool| {
            if inv {
                vec![Invert(j), Multiply(i, j), Invert(j)]
            } else {
                vec![Multiply(i, j)]
            }
        };
        match self.side {
            Side::Right => right(self.inverse),
            Side::Left => {
                let mut m = vec![Invert(i)];
                m.extend(right(!self.inverse));
                m.push(Invert(i));
                m
            }
        }
    }
}

fn replacements(t: usize) -> impl Iterator<Item = Replacement> {
    (0..t).flat_map(move |target| {
        (0..t).filter(move |&other| other != target).flat_map(move |other| {
            [(Side::Right, false), (Side::Right, true), (Side::Left, false), (Side::Left, true)]
                .into_iter()
                .map(move |(side, inverse)| Replacement { target, other, inverse, side })
        })
    })
}

fn find_shortening(u: &[Word]) -> Option<Replacement> {
    replacements(u.len()).find(|r| r.word(u).len() < u[r.target].len())
}

/// First N2 violation, resolved by the length-preserving replacement that
/// lowers the half-segment key of the replaced entry.
fn find_n2_fix(u: &[Word]) -> Option<Replacement> {
    let syms: Vec<Word> = u.iter().flat_map(|w| [w.clone(), w.inverse()]).collect();
    let n = syms.len();
    for a in 0..n {
        for b in 0..n {
            if b == a ^ 1 {
                continue;
            }
            let ab = syms[a].concat(&syms[b]);
            for c in 0..n {
                if c == b ^ 1 {
                    continue;
                }
                let abc = ab.len() + syms[c].len() - 2 * ab.cancellation(&syms[c]);
                let bound = syms[a].len() as isize - syms[b].len() as isize + syms[c].len() as isize;
                if abc as isize > bound {
                    continue;
                }
                let v2 = &syms[b];
                let k = v2.len() / 2;
                let p = Word::from_letters(v2.prefix(k).iter().copied());
                let q_inv = Word::from_letters(v2.suffix(k).iter().copied()).inverse();
                let j = b / 2;
                let b_inv = b % 2 == 1;
                let r = if q_inv < p {
                    // v1 -> v1 v2
                    let target = a / 2;
                    if a % 2 == 0 {
                        Replacement { target, other: j, inverse: b_inv, side: Side::Right }
                    } else {
                        Replacement { target, other: j, inverse: !b_inv, side: Side::Left }
                    }
                } else {
                    // v3 -> v2 v3
                    let target = c / 2;
                    if c % 2 == 0 {
                        Replacement { target, other: j, inverse: b_inv, side: Side::Left }
                    } else {
                        Replacement { target, other: j, inverse: !b_inv, side: Side::Right }
                    }
                };
                if r.target != r.other {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// Carries `tuple` to a Nielsen-reduced tuple and returns the moves used.
///
/// Strategy: delete identities; apply the first length-decreasing replacement
/// in `(target, other, side, sign)` order; otherwise repair the first N2
/// violation with a length-preserving replacement. Repeat to a fixpoint.
pub fn nielsen_reduce(tuple: &GeneratingTuple) -> (GeneratingTuple, Vec<ElementaryMove>) {
    let mut u = tuple.0.clone();
    let mut moves = Vec::new();
    loop {
        while let Some(i) = u.iter().position(Word::is_identity) {
            moves.push(ElementaryMove::Delete(i));
            u.remove(i);
        }
        let step = find_shortening(&u).or_else(|| find_n2_fix(&u));
        let Some(r) = step else { break };
        for m in r.moves() {
            apply_move_in_place(&mut u, m).expect("generated moves are valid");
            moves.push(m);
        }
    }
    (GeneratingTuple(u), moves)
}

fn normalize_set(words: &[Word]) -> Vec<Word> {
    let mut v: Vec<Word> = words.iter().map(Word::normalized).collect();
    v.sort();
    v
}

/// Nielsen-reduces, then returns the smallest normalized reduced tuple among
/// those reachable by length-preserving replacements, passing through at most
/// one unreduced tuple between reduced ones.
///
/// Entries are replaced by `min(u, u^-1)` and sorted ascending.
pub fn canonical_minimal_basis(tuple: &GeneratingTuple) -> GeneratingTuple {
    let (reduced, _) = nielsen_reduce(tuple);
    let start = normalize_set(&reduced.0);
    let mut best = start.clone();
    let mut seen: HashSet<Vec<Word>> = HashSet::new();
    // (state, state is reduced); an unreduced state is only a stepping stone
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, true));
    while let Some((state, state_reduced)) = queue.pop_front() {
        for r in replacements(state.len()) {
            let w = r.word(&state);
            if w.len() != state[r.target].len() {
                continue;
            }
            let mut next = state.clone();
            next[r.target] = w;
            let next = GeneratingTuple(normalize_set(&next));
            if seen.contains(&next.0) {
                continue;
            }
            // entries keep their lengths, so none is the identity
            let next_reduced = is_nielsen_reduced_segments(&next).unwrap_or(false);
            if !next_reduced && !state_reduced {
                continue;
            }
            if seen.len() >= CANONICAL_SEARCH_CAP {
                return GeneratingTuple(best);
            }
            seen.insert(next.0.clone());
            if next_reduced && next.0 < best {
                best = next.0.clone();
            }
            queue.push_back((next.0, next_reduced));
        }
    }
    GeneratingTuple(best)
}

/// Writes `w` in the symbols of a Nielsen-reduced `basis`, if it lies in the subgroup.
///
/// The result is a word over the basis (generator `i` stands for `basis[i]`).
pub fn subgroup_membership(basis: &GeneratingTuple, w: &Word) -> Result<Option<Word>> {
    if !is_nielsen_reduced(basis) {
        return Err(Error::NotNielsenReduced);
    }
    Ok(membership_search(basis, w))
}

/// Depth-first peel: strip a basis symbol whose left half prefixes the word
/// without lengthening it. Every element of the subgroup admits such a peel.
fn membership_search(basis: &GeneratingTuple, w: &Word) -> Option<Word> {
    let syms = basis.symbols();
    let heads: Vec<usize> = syms.iter().map(|v| v.len().div_ceil(2)).collect();
    let inverses: Vec<Word> = syms.iter().map(Word::inverse).collect();
    let mut visited: HashSet<Word> = HashSet::new();
    visited.insert(w.clone());
    // (word, next symbol to try, symbol that produced this frame)
    let mut stack: Vec<(Word, usize, Option<usize>)> = vec![(w.clone(), 0, None)];
    loop {
        let (cur, next, _) = stack.last()?;
        if cur.is_identity() {
            let symbols: Vec<usize> = stack.iter().filter_map(|f| f.2).collect();
            let expr = Word::from_letters(symbols.into_iter().map(|s| Letter::new(s / 2, s % 2 == 1)));
            debug_assert_eq!(basis.expand(&expr), *w);
            return Some(expr);
        }
        let mut found = None;
        let mut s = *next;
        while s < syms.len() {
            if cur.starts_with(syms[s].prefix(heads[s])) {
                let rest = inverses[s].concat(cur);
                if rest.len() <= cur.len() && !visited.contains(&rest) {
                    found = Some((s, rest));
                    break;
                }
            }
            s += 1;
        }
        match found {
            Some((s, rest)) => {
                stack.last_mut().expect("non-empty").1 = s + 1;
                visited.insert(rest.clone());
                stack.push((rest, 0, Some(s)));
            }
            None => {
                stack.pop();
            }
        }
    }
}

/// Equality of generated subgroups via canonical minimal bases.
pub fn same_subgroup(s1: &GeneratingTuple, s2: &GeneratingTuple) -> bool {
    canonical_minimal_basis(s1) == canonical_minimal_basis(s2)
}

/// Equality of generated subgroups via mutual membership.
pub fn same_subgroup_by_membership(s1: &GeneratingTuple, s2: &GeneratingTuple) -> bool {
    let (r1, _) = nielsen_reduce(s1);
    let (r2, _) = nielsen_reduce(s2);
    s1.0.iter().all(|w| membership_search(&r2, w).is_some())
        && s2.0.iter().all(|w| membership_search(&r1, w).is_some())
}

/// Distinct normalized entries, useful for set-style comparisons.
pub fn as_normalized_set(tuple: &GeneratingTuple) -> BTreeSet<Word> {
    tuple.0.iter().map(Word::normalized).collect()
}

pub fn format_tuple(alphabet: &Alphabet, tuple: &GeneratingTuple) -> String {
    let mut out = String::from("begin tuple\n");
    for w in &tuple.0 {
        out.push_str(&alphabet.format_word(w));
        out.push('\n');
    }
    out.push_str("end tuple\n");
    out
}

/// Parses one `begin tuple` / `end tuple` block from the front of `lines`.
pub(crate) fn parse_tuple_block(alphabet: &Alphabet, lines: &mut Lines<'_>) -> std::result::Result<GeneratingTuple, ParseError> {
    let (n, head) = lines.next_content().ok_or_else(|| ParseError::eof("begin tuple"))?;
    if head != "begin tuple" {
        return Err(ParseError::at(n, format!("expected `begin tuple`, found {head:?}")));
    }
    let mut words = Vec::new();
    loop {
        let (n, line) = lines.next_content().ok_or_else(|| ParseError::eof("end tuple"))?;
        if line == "end tuple" {
            return Ok(GeneratingTuple(words));
        }
        words.push(alphabet.parse_word(line).map_err(|e| ParseError::at(n, e.to_string()))?);
    }
}

/// Parses a tuple file, optionally preceded by an `alphabet = ...` line.
///
/// The explicit `alphabet` argument wins over the file's own line.
pub fn parse_tuple(text: &str, alphabet: Option<&Alphabet>) -> Result<(Alphabet, GeneratingTuple)> {
    let mut lines = Lines::new(text);
    let mut file_alpha = None;
    if let Some((n, line)) = lines.peek_content() {
        if let Some(rest) = crate::text::key_value(line, "alphabet") {
            file_alpha = Some(Alphabet::from_names_line(rest).map_err(|e| ParseError::at(n, e.to_string()))?);
            lines.next_content();
        }
    }
    let alphabet = match (alphabet, file_alpha) {
        (Some(a), _) => a.clone(),
        (None, Some(a)) => a,
        (None, None) => return Err(ParseError::at(1, "no alphabet given").into()),
    };
    let tuple = parse_tuple_block(&alphabet, &mut lines)?;
    lines.expect_end()?;
    Ok((alphabet, tuple))
}

pub fn format_moves(moves: &[ElementaryMove]) -> String {
    moves.iter().map(|m| format!("{m}\n")).collect()
}

/// Parses `T1 i`, `T2 i j`, `T3 i` lines (1-based indices).
pub fn parse_moves(text: &str) -> Result<Vec<ElementaryMove>> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while let Some((n, line)) = lines.next_content() {
        out.push(parse_move_line(line).map_err(|msg| ParseError::at(n, msg))?);
    }
    Ok(out)
}

pub(crate) fn parse_move_line(line: &str) -> std::result::Result<ElementaryMove, String> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let idx = |s: &str| -> std::result::Result<usize, String> {
        match s.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(format!("bad index {s:?}")),
        }
    };
    match parts.as_slice() {
        ["T1", i] => Ok(ElementaryMove::Invert(idx(i)?)),
        ["T2", i, j] => {
            let (i, j) = (idx(i)?, idx(j)?);
            if i == j {
                return Err("T2 needs distinct indices".into());
            }
            Ok(ElementaryMove::Multiply(i, j))
        }
        ["T3", i] => Ok(ElementaryMove::Delete(idx(i)?)),
        _ => Err(format!("unrecognized move {line:?}")),
    }
}
