//! Bounds on quotient rank: the subset-sum obstruction, an exhaustive
//! bounded search for quotient presentations, and Monte-Carlo experiments.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::semigroup::{minimalize, representation, NumericalSemigroup, QuotientPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// No subset sum lies in the semigroup of the complementary generators.
    FullRankCertified,
    /// Some subset sum does; full rank is not certified.
    ConditionSatisfied,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub generators: Vec<u64>,
    pub verdict: Verdict,
    /// Positions in `generators`, counted from 1.
    pub witness_subset: Option<Vec<usize>>,
    /// Coefficients of the subset sum over the complementary generators,
    /// listed in increasing position order.
    pub witness_membership: Option<Vec<u64>>,
}

impl RankCertificate {
    /// Re-checks the witness by direct arithmetic.
    pub fn verify(&self) -> bool {
        match (&self.verdict, &self.witness_subset, &self.witness_membership) {
            (Verdict::ConditionSatisfied, Some(subset), Some(coeffs)) => {
                let sum: u64 = subset.iter().map(|&i| self.generators[i - 1]).sum();
                let rest: Vec<u64> =
                    (1..=self.generators.len()).filter(|i| !subset.contains(i)).map(|i| self.generators[i - 1]).collect();
                rest.len() == coeffs.len() && rest.iter().zip(coeffs).map(|(a, c)| a * c).sum::<u64>() == sum
            }
            (Verdict::FullRankCertified, None, None) => true,
            _ => false,
        }
    }
}

/// Looks for a nonempty `I` with `sum_{i in I} a_i` in `<a_j : j not in I>`,
/// trying subsets by size and then lexicographically.
pub fn necessary_condition_scan(gens: &[u64]) -> RankCertificate {
    let generators = minimalize(gens);
    let n = generators.len();
    for size in 1..=n {
        for subset in (0..n).combinations(size) {
            let sum: u64 = subset.iter().map(|&i| generators[i]).sum();
            let rest: Vec<u64> = (0..n).filter(|i| !subset.contains(i)).map(|i| generators[i]).collect();
            if rest.is_empty() {
                continue;
            }
            if let Some(coeffs) = representation(sum, &rest) {
                return RankCertificate {
                    generators,
                    verdict: Verdict::ConditionSatisfied,
                    witness_subset: Some(subset.iter().map(|i| i + 1).collect()),
                    witness_membership: Some(coeffs),
                };
            }
        }
    }
    RankCertificate { generators, verdict: Verdict::FullRankCertified, witness_subset: None, witness_membership: None }
}

/// `<2a + 2^i : 0 <= i <= k>`, which has full quotient rank `k + 1`.
pub fn family_noquotient(a: u64, k: u32) -> Result<NumericalSemigroup> {
    let two_k = 1u64.checked_shl(k).filter(|_| k < 63).ok_or_else(|| Error::Precondition(format!("k = {k} too large")))?;
    if a < two_k {
        return Err(Error::Precondition(format!("a = {a} must be at least 2^{k} = {two_k}")));
    }
    let gens: Vec<u64> = (0..=k).map(|i| 2 * a + (1u64 << i)).collect();
    NumericalSemigroup::from_u64s(&gens)
}

/// Incremental reachability table for `<prefix>` on `[0, len)`.
fn extend(reach: &[bool], a: u64) -> Vec<bool> {
    let mut next = reach.to_vec();
    let a = a as usize;
    for x in a..next.len() {
        if next[x - a] {
            next[x] = true;
        }
    }
    next
}

struct Search<'a> {
    d: u64,
    k: usize,
    candidates: &'a [u64],
    gaps: &'a [u64],
    gens: &'a [u64],
}

impl Search<'_> {
    /// Depth-first over increasing numerator tuples; `reach` is `<chosen>`.
    fn dfs(&self, chosen: &mut Vec<u64>, reach: &[bool], from: usize) -> Option<Vec<u64>> {
        let uncovered: Vec<u64> = self.gens.iter().map(|g| g * self.d).filter(|&x| !reach[x as usize]).collect();
        if chosen.len() == self.k {
            return uncovered.is_empty().then(|| chosen.clone());
        }
        for idx in from..self.candidates.len() {
            let a = self.candidates[idx];
            // every uncovered target needs a numerator no smaller than a
            if uncovered.iter().any(|&x| x < a) {
                break;
            }
            let next = extend(reach, a);
            if self.gaps.iter().any(|&z| next[(z * self.d) as usize]) {
                continue;
            }
            chosen.push(a);
            if let Some(found) = self.dfs(chosen, &next, idx + 1) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
}

/// Exhaustive search for `<a_1, ..., a_k>/d = S` with `1 <= d <= d_max` and
/// `a_1 < ... < a_k <= a_max`, in order of `d` and then lexicographically in
/// `a`. Numerators must lie in `S` (since `<a> ⊆ <a>/d`); a partial tuple
/// is abandoned as soon as `d z` lands in `<a>` for a gap `z`.
pub fn brute_force_quotient_search(
    s: &NumericalSemigroup,
    k: usize,
    d_max: u64,
    a_max: u64,
) -> Result<Option<QuotientPresentation>> {
    let gaps = s.gaps()?;
    if k == 0 || d_max == 0 || a_max == 0 {
        return Err(Error::Precondition("bounds must be positive".into()));
    }
    let gens: Vec<u64> = s.minimal_generators().iter().map(|g| g.to_u64().expect("table-sized")).collect();
    let candidates: Vec<u64> = (1..=a_max).filter(|&a| s.contains_u64(a)).collect();
    let top = gaps.iter().chain(&gens).copied().max().unwrap_or(0);
    for d in 1..=d_max {
        let len = (top * d + 1) as usize;
        let mut base = vec![false; len];
        base[0] = true;
        let search = Search { d, k, candidates: &candidates, gaps: &gaps, gens: &gens };
        let found = (0..candidates.len()).into_par_iter().find_map_first(|idx| {
            let a = candidates[idx];
            let reach = extend(&base, a);
            if gaps.iter().any(|&z| reach[(z * d) as usize]) {
                return None;
            }
            let mut chosen = vec![a];
            search.dfs(&mut chosen, &reach, idx + 1)
        });
        if let Some(a) = found {
            let p = QuotientPresentation::from_u64s(&a, d)?;
            if p.realize()? != *s {
                return Err(Error::VerificationFailed(format!("{p} does not realize {s}")));
            }
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// `hits / trials`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Frequency {
    pub hits: u64,
    pub trials: u64,
}

impl Frequency {
    pub fn value(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }
}

/// Independent stream for trial `i`, so results do not depend on scheduling.
/// `seed_from_u64` expands its argument through SplitMix64.
fn trial_rng(seed: u64, i: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Fraction of uniform tuples in `[1, q]^n` whose generators pass the
/// subset-sum scan.
pub fn random_full_rank_fraction(n: usize, q: u64, trials: u64, seed: u64) -> Result<Frequency> {
    if n < 2 || q < 2 || trials == 0 {
        return Err(Error::Precondition("need n >= 2, q >= 2, trials >= 1".into()));
    }
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = trial_rng(seed, i);
            let gens: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=q)).collect();
            necessary_condition_scan(&gens).verdict == Verdict::FullRankCertified
        })
        .count() as u64;
    Ok(Frequency { hits, trials })
}

/// Fraction of random `k x (k-1)` matrices with entries in `[-q, q]` whose
/// columns form a primitive set.
pub fn primitive_fraction(k: usize, q: u64, trials: u64, seed: u64) -> Result<Frequency> {
    if k < 2 || q == 0 || trials == 0 {
        return Err(Error::Precondition("need k >= 2, q >= 1, trials >= 1".into()));
    }
    let q = q as i64;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = trial_rng(seed, i);
            let data = (0..k * (k - 1)).map(|_| BigInt::from(rng.gen_range(-q..=q))).collect();
            IntMatrix::new(k, k - 1, data).expect("shape").is_primitive_columns()
        })
        .count() as u64;
    Ok(Frequency { hits, trials })
}

/// `1 / (zeta(2) zeta(3) ... zeta(k))`, the limiting primitive fraction.
pub fn primitive_limit(k: usize) -> f64 {
    (2..=k).map(|s| 1.0 / zeta(s as f64)).product()
}

fn zeta(s: f64) -> f64 {
    // direct sum plus an Euler-Maclaurin tail
    let n = 10_000u32;
    let head: f64 = (1..n).map(|i| (i as f64).powf(-s)).sum();
    let nf = n as f64;
    head + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0)
}

/// Does some nonempty subset of `members` have an even sum whose half lies in `s`?
pub fn half_sum_subset(s: &NumericalSemigroup, members: &[u64]) -> Option<Vec<usize>> {
    (1..=members.len()).flat_map(|size| (0..members.len()).combinations(size)).find(|subset| {
        let sum: u64 = subset.iter().map(|&i| members[i]).sum();
        sum % 2 == 0 && s.contains_u64(sum / 2)
    })
}
