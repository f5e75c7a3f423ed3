//! Conversions between quotient presentations `<a>/d` and cone presentations.
//!
//! The constructive direction takes a full-dimensional cone matrix `M`,
//! shrinks it to `M_r` (columns `r v_i - t`, `t` the column sum) until
//! `s(M_r) = s(M)`, and samples integer matrices `B` near a multiple of
//! `adj(M_{r+1})`. A sample is accepted once `A = ±adj(B)` is sandwiched as
//! `cone(M) ⊆ cone(A) ⊆ cone(M_r)` and the first row of `A` is coprime; then
//! `s(A) = s(M)` and `A` has Smith form `(1, d, ..., d)`, so the answer is
//! `<first row of A>/d`.
//!
//! Sampling is deterministic: candidates are drawn in batches from a
//! `Xoshiro256PlusPlus` stream seeded with the caller's seed, evaluated in
//! parallel, and the lowest accepted index wins.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{canonicalize, project_semigroup, CanonicalMode, RationalCone, Slicer};
use crate::error::{Error, Result};
use crate::intmat::{snf, unimodular_with_first_row, IntMatrix};
use crate::io::{dec, dec_u64, dec_vec, matrix};
use crate::semigroup::{NumericalSemigroup, QuotientPresentation};

#[derive(Clone, Debug)]
pub struct ConstructConfig {
    pub seed: u64,
    /// Total samples over all scales; each scale gets an equal share.
    pub budget: u64,
    /// Side of the first sampling cube.
    pub q0: u64,
    /// Number of scales tried; each doubles the cube side.
    pub escalations: u32,
    pub max_r: u64,
    pub batch: usize,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig { seed: 0, budget: 20_000, q0: 16, escalations: 12, max_r: 1 << 24, batch: 64 }
    }
}

impl ConstructConfig {
    pub fn with_seed(seed: u64) -> Self {
        ConstructConfig { seed, ..Self::default() }
    }
}

/// A scale is abandoned once this many samples have been drawn and at least
/// 95% of them failed for geometric reasons (sign pattern or sandwich).
const EARLY_ESCALATION: u64 = 256;

fn require_coprime(a: &[BigInt]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let g = a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_one() {
        return Err(Error::NotCoprime(format!("{a:?} (gcd {g})")));
    }
    Ok(())
}

/// `diag(1, d, ..., d) * W` for a unimodular `W` with first row `a`; its
/// cone projects to `<a>/d`.
pub fn matrix_from_quotient(a: &[BigInt], d: &BigInt) -> Result<IntMatrix> {
    require_coprime(a)?;
    if !d.is_positive() {
        return Err(Error::ZeroDenominator);
    }
    let w = unimodular_with_first_row(a)?;
    let mut diag = vec![d.clone(); a.len()];
    diag[0] = BigInt::one();
    Ok(&IntMatrix::diagonal(&diag) * &w)
}

fn require_cone_matrix(m: &IntMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let rank = m.rank();
    if rank != m.rows() {
        return Err(Error::RankDeficient { rank, needed: m.rows() });
    }
    if let Some(j) = m.row(0).iter().position(|a| !a.is_positive()) {
        return Err(Error::NonPositiveFirstRow(j));
    }
    Ok(())
}

/// `d` when the diagonal is `(1, d, ..., d)`.
fn adjugate_shape(diagonal: &[BigInt]) -> Option<BigInt> {
    if !diagonal[0].is_one() {
        return None;
    }
    match diagonal.get(1) {
        None => Some(BigInt::one()),
        Some(d) => diagonal[1..].iter().all(|x| x == d).then(|| d.clone()),
    }
}

/// `d` when the diagonal is `(1, ..., 1, d)`.
fn primitive_shape(diagonal: &[BigInt]) -> Option<BigInt> {
    let (last, init) = diagonal.split_last()?;
    init.iter().all(One::is_one).then(|| last.clone())
}

/// Reads `<first row>/d` off a square matrix whose first row is coprime and
/// whose Smith form is `(1, d, ..., d)`; `None` when that shape fails.
pub fn read_quotient_via_snf(m: &IntMatrix) -> Result<Option<QuotientPresentation>> {
    require_cone_matrix(m)?;
    let a = m.row(0).to_vec();
    if require_coprime(&a).is_err() {
        return Ok(None);
    }
    let Some(d) = adjugate_shape(&snf(m).diagonal) else {
        return Ok(None);
    };
    Ok(Some(QuotientPresentation::new(a, d)?))
}

/// Columns `r v_i - t` with `t` the sum of the columns.
pub fn shrunk_matrix(m: &IntMatrix, r: u64) -> IntMatrix {
    let cols = m.columns();
    let t: Vec<BigInt> = (0..m.rows()).map(|i| cols.iter().map(|c| &c[i]).sum()).collect();
    let r = BigInt::from(r);
    let shrunk: Vec<Vec<BigInt>> = cols.iter().map(|c| c.iter().zip(&t).map(|(x, s)| &r * x - s).collect()).collect();
    IntMatrix::from_columns(&shrunk).expect("nonempty")
}

/// True iff `s(M_r)` adds none of the gaps of `s`. Since `cone(M) ⊆
/// cone(M_r)`, this is equivalent to `s(M_r) = s`.
fn shrunk_agrees(m: &IntMatrix, r: u64, gaps: &[u64]) -> Result<bool> {
    let m_r = shrunk_matrix(m, r);
    if m_r.row(0).iter().any(|a| !a.is_positive()) {
        return Ok(false);
    }
    let cone = RationalCone::new(m_r)?;
    let slicer = Slicer::new(&cone)?;
    Ok(!gaps.par_iter().any(|&g| slicer.is_nonempty(&BigInt::from(g))))
}

#[derive(Clone, Debug)]
pub struct StableR {
    pub r: u64,
    pub semigroup: NumericalSemigroup,
    /// Generators of `cone(M)` and of `cone(M_{r+1})` lie in the interior of `cone(M_r)`.
    pub chain_interior: bool,
}

/// Smallest `r > k` with `s(M_r) = s(M_{r+1}) = s(M)`. Candidates run
/// `k+1, 2(k+1), 4(k+1), ...` and the bracket found is bisected; the cones
/// shrink as `r` grows, so agreement is monotone in `r`.
pub fn find_stable_r(m: &IntMatrix, max_r: u64) -> Result<StableR> {
    require_cone_matrix(m)?;
    let semigroup = project_semigroup(m)?;
    let gaps = semigroup.gaps()?;
    let k = m.rows() as u64;
    let mut lo = k;
    let mut hi = k + 1;
    while !shrunk_agrees(m, hi, &gaps)? {
        lo = hi;
        hi = hi.checked_mul(2).filter(|&h| h <= max_r).ok_or(Error::StableRNotFound { max_r })?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if shrunk_agrees(m, mid, &gaps)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut r = hi;
    while !shrunk_agrees(m, r + 1, &gaps)? {
        r += 1;
        if r > max_r {
            return Err(Error::StableRNotFound { max_r });
        }
    }
    let outer = RationalCone::new(shrunk_matrix(m, r))?;
    let inner = RationalCone::new(m.clone())?;
    let next = RationalCone::new(shrunk_matrix(m, r + 1))?;
    let chain_interior = outer.interior_contains_cone(&inner)? && outer.interior_contains_cone(&next)?;
    if !chain_interior {
        return Err(Error::VerificationFailed(format!("cone chain is not strict at r = {r}")));
    }
    Ok(StableR { r, semigroup, chain_interior })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejections {
    #[serde(with = "dec_u64")]
    pub singular: u64,
    #[serde(with = "dec_u64")]
    pub mixed_sign: u64,
    #[serde(with = "dec_u64")]
    pub not_primitive: u64,
    #[serde(with = "dec_u64")]
    pub sandwich: u64,
    #[serde(with = "dec_u64")]
    pub snf_shape: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub input_in_a: bool,
    pub a_in_stable_r: bool,
    pub chain_interior: bool,
    pub stable_r_agrees: bool,
    #[serde(with = "dec_vec")]
    pub semigroup: Vec<BigInt>,
    #[serde(with = "dec_vec")]
    pub realized: Vec<BigInt>,
}

/// Certificate of one construction, replayable by [`verify_trace`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    #[serde(with = "matrix")]
    pub input_matrix: IntMatrix,
    #[serde(with = "dec_u64")]
    pub stable_r: u64,
    #[serde(with = "dec_u64")]
    pub scale_q: u64,
    #[serde(with = "dec")]
    pub center_scale: BigInt,
    #[serde(with = "dec_u64")]
    pub seed: u64,
    #[serde(with = "dec_u64")]
    pub attempts: u64,
    #[serde(with = "matrix")]
    pub b: IntMatrix,
    #[serde(with = "matrix")]
    pub a: IntMatrix,
    #[serde(with = "dec_vec")]
    pub snf_diag_b: Vec<BigInt>,
    #[serde(with = "dec_vec")]
    pub snf_diag_a: Vec<BigInt>,
    pub result: QuotientPresentation,
    pub rejections: Rejections,
    pub verification: Verification,
}

struct Accepted {
    b: IntMatrix,
    a: IntMatrix,
    snf_b: Vec<BigInt>,
    snf_a: Vec<BigInt>,
    result: QuotientPresentation,
}

enum Outcome {
    Accepted(Box<Accepted>),
    Singular,
    MixedSign,
    NotPrimitive,
    Sandwich,
    SnfShape,
}

impl Outcome {
    fn is_geometric(&self) -> bool {
        matches!(self, Outcome::Singular | Outcome::MixedSign | Outcome::Sandwich)
    }
}

/// `adj(B)` has degree `k - 1` in `B`, and near `N = adj(M')` its entries are
/// `det(M')^(k-2) M'`, far smaller than `|N|^(k-1)` when `M'` is badly
/// conditioned. Scaling the center by this ratio keeps the relative error of
/// `adj(B)` at about `1/q` for every input.
fn conditioning(n: &IntMatrix, m: &IntMatrix) -> Result<BigInt> {
    let k = n.rows();
    if k <= 2 {
        return Ok(BigInt::one());
    }
    let det = m.determinant()?.abs();
    let num = num_traits::pow(n.max_abs(), k - 1);
    let den = num_traits::pow(det, k - 2) * m.max_abs();
    Ok(Integer::div_ceil(&num, &den).max(BigInt::one()))
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let num: BigInt = a * 2 + b;
    num.div_floor(&(b * 2))
}

/// Facets of `cone(σ adj(B))` are the rows of `σ sign(det B) B`, since
/// `adj(adj B) = det(B)^(k-2) B`.
fn facets_of_adjugate_cone(b: &IntMatrix, sigma: i32, det_b: &BigInt) -> Vec<Vec<BigInt>> {
    let flip = (sigma < 0) != det_b.is_negative();
    b.to_rows()
        .into_iter()
        .map(|r| if flip { r.into_iter().map(|x| -x).collect() } else { r })
        .collect()
}

fn evaluate(b: &IntMatrix, input: &IntMatrix, outer: &RationalCone) -> Result<Outcome> {
    let det_b = b.determinant()?;
    if det_b.is_zero() {
        return Ok(Outcome::Singular);
    }
    let adj = b.adjugate()?;
    // First row of adj(B) = signed maximal minors of columns 2..k of B.
    let sigma = if adj.row(0).iter().all(Signed::is_positive) {
        1
    } else if adj.row(0).iter().all(Signed::is_negative) {
        -1
    } else {
        return Ok(Outcome::MixedSign);
    };
    let first = adj.row(0).iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !first.is_one() {
        return Ok(Outcome::NotPrimitive);
    }
    let a = if sigma < 0 { adj.neg() } else { adj };
    let facets = facets_of_adjugate_cone(b, sigma, &det_b);
    let input_in_a = input.columns().iter().all(|v| facets.iter().all(|f| !dot(f, v).is_negative()));
    if !input_in_a || !outer.contains_cone(&RationalCone::new(a.clone())?)? {
        return Ok(Outcome::Sandwich);
    }
    let snf_b = snf(b).diagonal;
    let snf_a = snf(&a).diagonal;
    let (Some(db), Some(da)) = (primitive_shape(&snf_b), adjugate_shape(&snf_a)) else {
        return Ok(Outcome::SnfShape);
    };
    if db != da {
        return Ok(Outcome::SnfShape);
    }
    let result = QuotientPresentation::new(a.row(0).to_vec(), da)?;
    Ok(Outcome::Accepted(Box::new(Accepted { b: b.clone(), a, snf_b, snf_a, result })))
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Finds `<a>/d` with `<a>/d = s(M)` for a square full-rank `M` with
/// positive first row, together with a replayable certificate.
pub fn construct_quotient(m: &IntMatrix, cfg: &ConstructConfig) -> Result<(QuotientPresentation, ConstructionTrace)> {
    let stable = find_stable_r(m, cfg.max_r)?;
    let r = stable.r;
    let k = m.rows();
    let outer = RationalCone::new(shrunk_matrix(m, r))?;
    let n = shrunk_matrix(m, r + 1).adjugate()?;
    let n_max = n.max_abs();
    let kappa = conditioning(&n, &shrunk_matrix(m, r + 1))?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(cfg.seed);
    let mut rejections = Rejections::default();
    let mut attempts = 0u64;
    let per_scale = cfg.budget.div_ceil(cfg.escalations.max(1) as u64);

    for level in 0..cfg.escalations {
        let q = cfg.q0 << level;
        let half = (q / 2) as i64;
        let center_scale = BigInt::from(q * q) * &kappa;
        let center: Vec<BigInt> = n.entries().iter().map(|x| round_div(&(x * &center_scale), &n_max)).collect();
        let mut level_attempts = 0u64;
        let mut geometric = 0u64;
        let level_budget = per_scale.min(cfg.budget - attempts);
        while level_attempts < level_budget {
            let size = (level_budget - level_attempts).min(cfg.batch as u64) as usize;
            let batch: Vec<IntMatrix> = (0..size)
                .map(|_| {
                    let data = center.iter().map(|c| c + rng.gen_range(-half..=half)).collect();
                    IntMatrix::new(k, k, data).expect("square")
                })
                .collect();
            let outcomes: Vec<Result<Outcome>> = batch.par_iter().map(|b| evaluate(b, m, &outer)).collect();
            for outcome in outcomes {
                attempts += 1;
                level_attempts += 1;
                let outcome = outcome?;
                if outcome.is_geometric() {
                    geometric += 1;
                }
                match outcome {
                    Outcome::Accepted(acc) => {
                        return finish(m, &stable, cfg, q, center_scale, attempts, rejections, *acc);
                    }
                    Outcome::Singular => rejections.singular += 1,
                    Outcome::MixedSign => rejections.mixed_sign += 1,
                    Outcome::NotPrimitive => rejections.not_primitive += 1,
                    Outcome::Sandwich => rejections.sandwich += 1,
                    Outcome::SnfShape => rejections.snf_shape += 1,
                }
            }
            if level_attempts >= EARLY_ESCALATION && geometric * 20 >= level_attempts * 19 {
                break;
            }
        }
    }
    Err(Error::BudgetExhausted { attempts })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    m: &IntMatrix,
    stable: &StableR,
    cfg: &ConstructConfig,
    q: u64,
    center_scale: BigInt,
    attempts: u64,
    rejections: Rejections,
    acc: Accepted,
) -> Result<(QuotientPresentation, ConstructionTrace)> {
    let realized = acc.result.realize()?;
    if realized != stable.semigroup {
        return Err(Error::VerificationFailed(format!(
            "{} realizes {realized}, expected {}",
            acc.result, stable.semigroup
        )));
    }
    let trace = ConstructionTrace {
        input_matrix: m.clone(),
        stable_r: stable.r,
        scale_q: q,
        center_scale,
        seed: cfg.seed,
        attempts,
        b: acc.b,
        a: acc.a,
        snf_diag_b: acc.snf_b,
        snf_diag_a: acc.snf_a,
        result: acc.result.clone(),
        rejections,
        verification: Verification {
            input_in_a: true,
            a_in_stable_r: true,
            chain_interior: stable.chain_interior,
            stable_r_agrees: true,
            semigroup: stable.semigroup.minimal_generators(),
            realized: realized.minimal_generators(),
        },
    };
    Ok((acc.result, trace))
}

fn reject(code: &'static str, detail: impl Into<String>) -> Error {
    Error::TraceRejected { code, detail: detail.into() }
}

/// Replays every check recorded in a trace and returns the certified
/// semigroup. Checks run in a fixed order: structure, sandwich, adjugate,
/// Smith forms, result, semigroups.
pub fn verify_trace(trace: &ConstructionTrace) -> Result<NumericalSemigroup> {
    let m = &trace.input_matrix;
    let k = m.rows();
    require_cone_matrix(m).map_err(|e| reject("malformed-trace", format!("input matrix: {e}")))?;
    for (name, x) in [("b", &trace.b), ("a", &trace.a)] {
        if x.rows() != k || x.cols() != k {
            return Err(reject("malformed-trace", format!("{name} is {}x{}, expected {k}x{k}", x.rows(), x.cols())));
        }
    }
    if trace.snf_diag_b.len() != k || trace.snf_diag_a.len() != k || trace.result.k() != k {
        return Err(reject("malformed-trace", "Smith diagonals and result must have one entry per dimension"));
    }
    if trace.stable_r <= k as u64 {
        return Err(reject("malformed-trace", format!("stable r = {} must exceed {k}", trace.stable_r)));
    }

    let m_r = shrunk_matrix(m, trace.stable_r);
    let sandwich = (|| -> Result<bool> {
        if trace.a.rank() != k {
            return Ok(false);
        }
        let cone_a = RationalCone::new(trace.a.clone())?;
        let cone_m = RationalCone::new(m.clone())?;
        let cone_r = RationalCone::new(m_r.clone())?;
        Ok(cone_a.contains_cone(&cone_m)? && cone_r.contains_cone(&cone_a)?)
    })();
    if !matches!(sandwich, Ok(true)) {
        return Err(reject("sandwich-violation", "cone(M) ⊆ cone(A) ⊆ cone(M_r) fails"));
    }

    let adj = trace.b.adjugate()?;
    if trace.a != adj && trace.a != adj.neg() {
        return Err(reject("adjugate-mismatch", "A is not ±adj(B)"));
    }

    let snf_b = snf(&trace.b).diagonal;
    let snf_a = snf(&trace.a).diagonal;
    if snf_b != trace.snf_diag_b || snf_a != trace.snf_diag_a {
        return Err(reject("snf-mismatch", "recorded Smith diagonals differ from recomputed ones"));
    }
    let d = match (primitive_shape(&snf_b), adjugate_shape(&snf_a)) {
        (Some(db), Some(da)) if db == da => da,
        _ => return Err(reject("snf-mismatch", "Smith diagonals are not (1,...,1,d) and (1,d,...,d)")),
    };

    if trace.result.numerators() != trace.a.row(0) || trace.result.denominator() != &d {
        return Err(reject("result-mismatch", "result is not <first row of A>/d"));
    }

    let s = project_semigroup(m)?;
    let gaps = s.gaps()?;
    if !shrunk_agrees(m, trace.stable_r, &gaps)? || !shrunk_agrees(m, trace.stable_r + 1, &gaps)? {
        return Err(reject("semigroup-mismatch", format!("s(M_r) differs from s(M) at r = {}", trace.stable_r)));
    }
    let realized = trace.result.realize()?;
    if realized != s {
        return Err(reject("semigroup-mismatch", format!("result realizes {realized}, s(M) = {s}")));
    }
    Ok(s)
}

/// `P1 + P2` as a single quotient. Coprime denominators combine directly as
/// `<d2 a1, d1 a2>/(d1 d2)`; otherwise the product cone of the two summands,
/// projected onto the sum of their first coordinates, is canonicalized and
/// fed to [`construct_quotient`].
pub fn sum_quotients(
    p1: &QuotientPresentation,
    p2: &QuotientPresentation,
    cfg: &ConstructConfig,
) -> Result<(QuotientPresentation, Option<ConstructionTrace>)> {
    let (d1, d2) = (p1.denominator(), p2.denominator());
    let expected = p1.realize()?.sum(&p2.realize()?)?;
    let (result, trace) = if d1.gcd(d2).is_one() {
        let nums = p1.numerators().iter().map(|a| a * d2).chain(p2.numerators().iter().map(|a| a * d1)).collect();
        (QuotientPresentation::new(nums, d1 * d2)?, None)
    } else {
        let m1 = matrix_from_quotient(p1.numerators(), d1)?;
        let m2 = matrix_from_quotient(p2.numerators(), d2)?;
        let (k1, k2) = (m1.rows(), m2.rows());
        let mut block = IntMatrix::zeros(k1 + k2, k1 + k2);
        for i in 0..k1 {
            for j in 0..k1 {
                block[(i, j)] = m1[(i, j)].clone();
            }
        }
        for i in 0..k2 {
            for j in 0..k2 {
                block[(k1 + i, k1 + j)] = m2[(i, j)].clone();
            }
        }
        let mut pi = vec![BigInt::zero(); k1 + k2];
        pi[0] = BigInt::one();
        pi[k1] = BigInt::one();
        let c = canonicalize(&block, &pi, CanonicalMode::Dimension)?;
        if !c.d.is_one() {
            return Err(Error::Precondition(format!("summands have image gcd {}", c.d)));
        }
        let (p, t) = construct_quotient(&c.matrix, cfg)?;
        (p, Some(t))
    };
    let realized = result.realize()?;
    if realized != expected {
        return Err(Error::VerificationFailed(format!("{result} realizes {realized}, expected {expected}")));
    }
    Ok((result, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sg(gens: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_u64s(gens).unwrap()
    }

    fn pres(a: &[u64], d: u64) -> QuotientPresentation {
        QuotientPresentation::from_u64s(a, d).unwrap()
    }

    #[test]
    fn easy_direction() {
        let m = matrix_from_quotient(&big(&[11, 13]), &BigInt::from(2)).unwrap();
        assert_eq!(m.row(0), big(&[11, 13]).as_slice());
        assert_eq!(project_semigroup(&m).unwrap(), sg(&[11, 13]).quotient_u64(2).unwrap());
        let m = matrix_from_quotient(&big(&[3, 5]), &BigInt::one()).unwrap();
        assert!(m.is_unimodular());
        assert_eq!(project_semigroup(&m).unwrap(), sg(&[3, 5]));
        let m = matrix_from_quotient(&big(&[3, 5]), &BigInt::from(2)).unwrap();
        assert_eq!(project_semigroup(&m).unwrap(), sg(&[3, 4, 5]));
        assert!(matches!(matrix_from_quotient(&big(&[4, 6]), &BigInt::one()), Err(Error::NotCoprime(_))));
    }

    #[test]
    fn snf_reading() {
        assert_eq!(read_quotient_via_snf(&mat(&[&[11, 13], &[10, 12]])).unwrap(), Some(pres(&[11, 13], 2)));
        assert_eq!(read_quotient_via_snf(&mat(&[&[6, 25], &[1, 3]])).unwrap(), Some(pres(&[6, 25], 7)));
        assert_eq!(read_quotient_via_snf(&mat(&[&[6, 8], &[1, 1]])).unwrap(), None);
    }

    #[test]
    fn stable_r_examples() {
        for m in [mat(&[&[6, 8], &[1, 1]]), mat(&[&[11, 13], &[10, 12]]), mat(&[&[2, 3], &[1, 2]])] {
            let st = find_stable_r(&m, 1 << 20).unwrap();
            let s = project_semigroup(&m).unwrap();
            assert_eq!(st.semigroup, s);
            assert_eq!(project_semigroup(&shrunk_matrix(&m, st.r)).unwrap(), s);
            assert_eq!(project_semigroup(&shrunk_matrix(&m, st.r + 1)).unwrap(), s);
            assert!(st.chain_interior);
        }
    }

    #[test]
    fn construct_small() {
        let m = mat(&[&[6, 8], &[1, 1]]);
        let (p, trace) = construct_quotient(&m, &ConstructConfig::with_seed(7)).unwrap();
        assert_eq!(p.realize().unwrap(), sg(&[6, 7, 8]));
        assert_eq!(verify_trace(&trace).unwrap(), sg(&[6, 7, 8]));
        let again = construct_quotient(&m, &ConstructConfig::with_seed(7)).unwrap().1;
        assert_eq!(trace, again);
    }

    #[test]
    fn trace_tampering() {
        let m = matrix_from_quotient(&big(&[11, 13]), &BigInt::from(2)).unwrap();
        let (_, trace) = construct_quotient(&m, &ConstructConfig::with_seed(1)).unwrap();
        let code = |t: &ConstructionTrace| match verify_trace(t) {
            Err(Error::TraceRejected { code, .. }) => code,
            other => panic!("expected rejection, got {other:?}"),
        };
        let mut t = trace.clone();
        t.a[(0, 0)] = -t.a[(0, 0)].clone();
        assert_eq!(code(&t), "sandwich-violation");
        let mut t = trace.clone();
        t.b[(1, 1)] += 1;
        assert_eq!(code(&t), "adjugate-mismatch");
        let mut t = trace.clone();
        t.result = QuotientPresentation::new(t.result.numerators().to_vec(), t.result.denominator() + 1).unwrap();
        assert_eq!(code(&t), "result-mismatch");
        let json = serde_json::to_string(&trace).unwrap();
        let back: ConstructionTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn coprime_sum() {
        let (p, t) = sum_quotients(&pres(&[23, 25], 2), &pres(&[29, 32], 3), &ConstructConfig::default()).unwrap();
        assert_eq!(p, pres(&[69, 75, 58, 64], 6));
        assert!(t.is_none());
        let (p, _) = sum_quotients(&pres(&[3, 5], 1), &pres(&[4, 7], 1), &ConstructConfig::default()).unwrap();
        assert_eq!(p, pres(&[3, 5, 4, 7], 1));
    }
}
