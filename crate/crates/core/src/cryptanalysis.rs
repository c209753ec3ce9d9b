//! Brute-force key search against the one-time pad, and cost estimates.
//!
//! Eve enumerates the ball `B(F, L)`, Nielsen-reduces every `K`-subset and
//! keeps the reductions with exactly `N` elements as candidates for `U`.
//! The work grows like `binomial(|B(F, L)|, K)`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nielsen::{canonical_minimal_basis, format_tuple, nielsen_reduce, GeneratingTuple};
use crate::word::{Alphabet, Letter, Word};

pub const BALL_CAP: u64 = 100_000;
pub const SUBSET_CAP: u64 = 10_000_000;

/// Subsets handled per parallel work item.
const BLOCK: u64 = 2048;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackConfig {
    /// Ball radius `L`.
    pub length_bound: usize,
    /// Rank `N` of the target subgroup.
    pub target_rank: usize,
    /// Subset size `K`.
    pub subset_size: usize,
    pub max_subsets: u64,
}

impl AttackConfig {
    pub fn new(length_bound: usize, target_rank: usize, subset_size: usize) -> AttackConfig {
        AttackConfig { length_bound, target_rank, subset_size, max_subsets: SUBSET_CAP }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_rank < 2 || self.subset_size < self.target_rank {
            return Err(Error::InvalidParams("need K >= N >= 2".into()));
        }
        if self.length_bound < 1 {
            return Err(Error::InvalidParams("need L >= 1".into()));
        }
        if self.max_subsets > SUBSET_CAP {
            return Err(Error::CapExceeded { required: self.max_subsets.to_string(), cap: SUBSET_CAP.to_string() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackReport {
    /// Canonical forms, in order of first appearance.
    pub candidates: Vec<GeneratingTuple>,
    pub subsets_examined: u64,
    /// 1-based position of the first subset whose reduction matched the planted key.
    pub hit_index: Option<u64>,
    /// False when `max_subsets` stopped the search early.
    pub complete: bool,
    pub elapsed: Duration,
}

/// `sum_{k=1..L} 2q (2q - 1)^(k - 1)`.
pub fn ball_size(q: usize, l: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut layer = BigUint::from(2 * q);
    for _ in 0..l {
        total += &layer;
        layer *= BigUint::from(2 * q - 1);
    }
    total
}

/// All non-identity reduced words of length at most `L`, in shortlex order.
pub fn enumerate_ball(alphabet: &Alphabet, l: usize) -> Result<Vec<Word>> {
    let q = alphabet.rank();
    let size = ball_size(q, l);
    if size > BigUint::from(BALL_CAP) {
        return Err(Error::CapExceeded { required: size.to_string(), cap: BALL_CAP.to_string() });
    }
    let letters: Vec<Letter> = (0..q).flat_map(|g| [Letter::gen(g), Letter::inv(g)]).collect();
    let mut out: Vec<Word> = Vec::new();
    let mut layer: Vec<Word> = vec![Word::identity()];
    for _ in 0..l {
        let mut next = Vec::new();
        for w in &layer {
            for &x in &letters {
                if w.letters().last() == Some(&x.inverse()) {
                    continue;
                }
                next.push(Word::from_letters(w.letters().iter().copied().chain([x])));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

pub fn binomial(n: &BigUint, k: usize) -> BigUint {
    let kb = BigUint::from(k);
    if &kb > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

fn binomial_u128(n: u64, k: usize) -> u128 {
    if k as u64 > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u64 {
        acc = match acc.checked_mul(u128::from(n - i)) {
            Some(v) => v / u128::from(i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The colex-order combination of rank `r`.
fn colex_unrank(mut r: u128, k: usize) -> Vec<usize> {
    let mut c = vec![0usize; k];
    for i in (1..=k).rev() {
        let mut x = i as u64 - 1;
        while binomial_u128(x + 1, i) <= r {
            x += 1;
        }
        r -= binomial_u128(x, i);
        c[i - 1] = x as usize;
    }
    c
}

fn colex_next(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { n };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, slot) in c[..i].iter_mut().enumerate() {
                *slot = j;
            }
            return true;
        }
    }
    false
}

/// Runs the subset search. With `planted`, records when its canonical basis first appears.
pub fn subset_attack(alphabet: &Alphabet, cfg: &AttackConfig, planted: Option<&GeneratingTuple>) -> Result<AttackReport> {
    cfg.validate()?;
    let start = Instant::now();
    let ball = enumerate_ball(alphabet, cfg.length_bound)?;
    let total = binomial(&BigUint::from(ball.len()), cfg.subset_size);
    let budget = BigUint::from(cfg.max_subsets);
    let complete = total <= budget;
    let count: u64 = if complete { total.try_into().expect("at most the cap") } else { cfg.max_subsets };
    let target = planted.map(canonical_minimal_basis);

    let blocks = count.div_ceil(BLOCK);
    let found: Vec<Vec<(u64, GeneratingTuple)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let first = b * BLOCK;
            let last = (first + BLOCK).min(count);
            let mut comb = colex_unrank(u128::from(first), cfg.subset_size);
            let mut hits = Vec::new();
            for idx in first..last {
                let subset = GeneratingTuple(comb.iter().map(|&i| ball[i].clone()).collect());
                let (reduced, _) = nielsen_reduce(&subset);
                if reduced.len() == cfg.target_rank {
                    hits.push((idx, canonical_minimal_basis(&reduced)));
                }
                colex_next(&mut comb, ball.len());
            }
            hits
        })
        .collect();

    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    let mut hit_index = None;
    for (idx, cand) in found.into_iter().flatten() {
        if hit_index.is_none() && target.as_ref() == Some(&cand) {
            hit_index = Some(idx + 1);
        }
        if seen.insert(cand.clone()) {
            candidates.push(cand);
        }
    }
    Ok(AttackReport { candidates, subsets_examined: count, hit_index, complete, elapsed: start.elapsed() })
}

/// Lower bound on primitive elements of length `k` in rank 2:
/// `8 * 3^((k-3)/2)` for odd `k`, `4 * 3^((k-2)/2)` for even `k`.
pub fn primitive_lower_bound_rank2(k: u32) -> Result<BigRational> {
    if k < 1 {
        return Err(Error::InvalidParams("length must be at least 1".into()));
    }
    let three = |e: u32| BigRational::from_integer(num_bigint::BigInt::from(3u32).pow(e));
    let int = |v: u32| BigRational::from_integer(num_bigint::BigInt::from(v));
    Ok(if k.is_odd() {
        if k == 1 {
            int(8) / int(3)
        } else {
            int(8) * three((k - 3) / 2)
        }
    } else {
        int(4) * three((k - 2) / 2)
    })
}

/// Exponential growth bases `(2q - 3, 2q - 2)` bracketing primitive counts for `q >= 3`.
pub fn primitive_growth_rates(q: usize) -> Option<(usize, usize)> {
    (q >= 3).then(|| (2 * q - 3, 2 * q - 2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostEstimate {
    pub ball: BigUint,
    pub subsets: BigUint,
    /// `lambda^2` with `lambda = L`, a proxy for one reduction.
    pub per_subset: u64,
}

pub fn attack_cost_estimate(cfg: &AttackConfig, q: usize) -> CostEstimate {
    let ball = ball_size(q, cfg.length_bound);
    let subsets = binomial(&ball, cfg.subset_size);
    let l = cfg.length_bound as u64;
    CostEstimate { ball, subsets, per_subset: l * l }
}

/// Key/value summary followed by the candidate tuples.
pub fn format_report(alphabet: &Alphabet, report: &AttackReport) -> String {
    let mut out = String::new();
    writeln!(out, "subsets_examined = {}", report.subsets_examined).unwrap();
    writeln!(out, "candidates = {}", report.candidates.len()).unwrap();
    match report.hit_index {
        Some(i) => writeln!(out, "hit_index = {i}").unwrap(),
        None => writeln!(out, "hit_index = none").unwrap(),
    }
    writeln!(out, "complete = {}", report.complete).unwrap();
    for c in &report.candidates {
        out.push_str(&format_tuple(alphabet, c));
    }
    out
}

pub fn format_cost(est: &CostEstimate) -> String {
    format!("ball = {}\nsubsets = {}\nper_subset = {}\n", est.ball, est.subsets, est.per_subset)
}
