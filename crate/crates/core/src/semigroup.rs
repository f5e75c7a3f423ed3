//! Numerical semigroups backed by an exact membership table.
//!
//! A semigroup is stored as `g * S0` where `g` is the gcd of its elements and
//! `S0` is cofinite. The table for `S0` covers `[0, conductor + max generator]`;
//! everything at or above the conductor is a member.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::KnapsackOracle;

/// Upper bound on membership-table length.
pub const TABLE_LIMIT: u64 = 1 << 26;

#[derive(Debug)]
struct Core {
    generators: Vec<u64>,
    conductor: u64,
    table: Vec<bool>,
}

impl Core {
    /// Table of `<gens>` grown until a run of `min(gens)` members certifies
    /// the conductor. `gens` must be minimal, sorted and coprime.
    fn from_minimal(gens: Vec<u64>, limit: u64) -> Result<Core> {
        let m = gens[0];
        let mut table = vec![true];
        let mut run = 0u64;
        let mut conductor = 0u64;
        if m != 1 {
            let mut t = 0u64;
            loop {
                t += 1;
                if t > limit {
                    return Err(Error::TableTooLarge { limit });
                }
                let member = gens.iter().take_while(|&&g| g <= t).any(|&g| table[(t - g) as usize]);
                table.push(member);
                run = if member { run + 1 } else { 0 };
                if run == m {
                    conductor = t + 1 - m;
                    break;
                }
            }
        }
        table.truncate(conductor as usize);
        let max = *gens.last().expect("nonempty");
        table.resize((conductor + max + 1) as usize, true);
        Ok(Core { generators: gens, conductor, table })
    }

    /// `prefix[t]` for `t < conductor`; minimal generators are found by
    /// sweeping upward and discarding anything the earlier ones generate.
    fn from_prefix(mut prefix: Vec<bool>, conductor: u64) -> Core {
        prefix.truncate(conductor as usize);
        let m = (1..conductor).find(|&t| prefix[t as usize]).unwrap_or(conductor.max(1));
        let top = (conductor + m) as usize;
        prefix.resize(top, true);
        let mut generated = vec![false; top];
        generated[0] = true;
        let mut gens = Vec::new();
        for t in 1..top {
            if prefix[t] && !generated[t] {
                gens.push(t as u64);
                for x in t..top {
                    if generated[x - t] {
                        generated[x] = true;
                    }
                }
            }
        }
        let max = *gens.last().expect("cofinite semigroup has generators");
        prefix.resize((conductor + max + 1) as usize, true);
        Core { generators: gens, conductor, table: prefix }
    }

    fn contains(&self, t: &BigInt) -> bool {
        if t.is_negative() {
            return false;
        }
        match t.to_u64() {
            Some(u) if u < self.conductor => self.table[u as usize],
            _ => true,
        }
    }

    fn contains_u64(&self, t: u64) -> bool {
        t >= self.conductor || self.table[t as usize]
    }
}

/// A submonoid of (N, +), closed under addition and containing 0.
#[derive(Clone)]
pub struct NumericalSemigroup {
    raw_generators: Vec<BigInt>,
    scale: BigInt,
    core: Arc<Core>,
}

fn validate(gens: &[BigInt]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if let Some(g) = gens.iter().find(|g| !g.is_positive()) {
        return Err(Error::NonPositiveGenerator(g.to_string()));
    }
    Ok(())
}

/// Discards every generator lying in the semigroup of the smaller ones.
pub fn minimalize(gens: &[u64]) -> Vec<u64> {
    let mut sorted: Vec<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let Some(&max) = sorted.last() else {
        return Vec::new();
    };
    let mut reach = vec![false; max as usize + 1];
    reach[0] = true;
    let mut kept = Vec::new();
    for g in sorted {
        if reach[g as usize] {
            continue;
        }
        kept.push(g);
        for x in g as usize..=max as usize {
            if reach[x - g as usize] {
                reach[x] = true;
            }
        }
    }
    kept
}

/// Bounded dynamic program: is `target` a nonnegative combination of `gens`?
pub fn is_representable(target: u64, gens: &[u64]) -> bool {
    representation(target, gens).is_some()
}

/// Coefficients `c` with `sum c_i gens_i = target`, if any.
pub fn representation(target: u64, gens: &[u64]) -> Option<Vec<u64>> {
    let n = target as usize;
    // last[x] = index of the generator used to reach x
    let mut last: Vec<Option<usize>> = vec![None; n + 1];
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for x in 1..=n {
        for (i, &g) in gens.iter().enumerate() {
            if g > 0 && g as usize <= x && reach[x - g as usize] {
                reach[x] = true;
                last[x] = Some(i);
                break;
            }
        }
    }
    if !reach[n] {
        return None;
    }
    let mut coeffs = vec![0u64; gens.len()];
    let mut x = n;
    while x > 0 {
        let i = last[x].expect("reachable");
        coeffs[i] += 1;
        x -= gens[i] as usize;
    }
    Some(coeffs)
}

impl NumericalSemigroup {
    pub fn from_generators(gens: &[BigInt]) -> Result<Self> {
        Self::from_generators_with_limit(gens, TABLE_LIMIT)
    }

    pub fn from_generators_with_limit(gens: &[BigInt], limit: u64) -> Result<Self> {
        validate(gens)?;
        let g = gens.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let reduced: Vec<u64> = gens
            .iter()
            .map(|x| (x / &g).to_u64().filter(|&v| v <= limit))
            .collect::<Option<_>>()
            .ok_or(Error::TableTooLarge { limit })?;
        let minimal = minimalize(&reduced);
        let core = Core::from_minimal(minimal, limit)?;
        Ok(NumericalSemigroup { raw_generators: gens.to_vec(), scale: g, core: Arc::new(core) })
    }

    pub fn from_u64s(gens: &[u64]) -> Result<Self> {
        Self::from_generators(&gens.iter().map(|&g| BigInt::from(g)).collect::<Vec<_>>())
    }

    /// The natural numbers, `<1>`.
    pub fn naturals() -> Self {
        Self::from_u64s(&[1]).expect("valid")
    }

    /// Builds a cofinite semigroup from a membership predicate, scanning
    /// upward until a run of `multiplicity` consecutive members certifies the
    /// conductor. The predicate must describe a cofinite numerical
    /// semigroup. Unknown values are evaluated in parallel blocks; values
    /// reachable from a known member by adding a known generator skip the
    /// predicate.
    pub fn from_membership<F>(oracle: F, limit: u64) -> Result<Self>
    where
        F: Fn(u64) -> Result<bool> + Sync,
    {
        let mut table = vec![true];
        let mut gens: Vec<u64> = Vec::new();
        let mut multiplicity: Option<u64> = None;
        let mut run = 0u64;
        let mut block = 8u64;
        loop {
            let start = table.len() as u64;
            let end = start + block;
            if end > limit {
                return Err(Error::TableTooLarge { limit });
            }
            let shortcut: Vec<bool> = (start..end)
                .map(|t| gens.iter().any(|&g| t - g < start && table[(t - g) as usize]))
                .collect();
            let results: Vec<Result<bool>> = (start..end)
                .into_par_iter()
                .map(|t| if shortcut[(t - start) as usize] { Ok(true) } else { oracle(t) })
                .collect();
            for (t, r) in (start..end).zip(results) {
                let member = r?;
                table.push(member);
                if member {
                    if !gens.iter().any(|&g| table[(t - g) as usize]) {
                        gens.push(t);
                    }
                    let m = *multiplicity.get_or_insert(t);
                    run += 1;
                    if run == m {
                        let conductor = t + 1 - m;
                        let core = Core::from_prefix(table, conductor);
                        let raw = core.generators.iter().map(|&g| BigInt::from(g)).collect();
                        return Ok(NumericalSemigroup { raw_generators: raw, scale: BigInt::one(), core: Arc::new(core) });
                    }
                } else {
                    run = 0;
                }
            }
            block = (block * 2).min(256);
        }
    }

    fn from_parts(scale: BigInt, core: Arc<Core>) -> Self {
        let raw = core.generators.iter().map(|&g| &scale * g).collect();
        NumericalSemigroup { raw_generators: raw, scale, core }
    }

    pub fn raw_generators(&self) -> &[BigInt] {
        &self.raw_generators
    }

    /// Unique minimal generating set, ascending.
    pub fn minimal_generators(&self) -> Vec<BigInt> {
        self.core.generators.iter().map(|&g| &self.scale * g).collect()
    }

    pub fn embedding_dimension(&self) -> usize {
        self.core.generators.len()
    }

    pub fn gcd(&self) -> &BigInt {
        &self.scale
    }

    pub fn is_cofinite(&self) -> bool {
        self.scale.is_one()
    }

    /// Least positive element.
    pub fn multiplicity(&self) -> BigInt {
        &self.scale * self.core.generators[0]
    }

    /// Smallest `c` with `c + gcd * N` inside the semigroup.
    pub fn conductor(&self) -> BigInt {
        &self.scale * self.core.conductor
    }

    /// Largest non-member, or `None` for the natural numbers.
    pub fn frobenius(&self) -> Result<Option<BigInt>> {
        self.require_cofinite()?;
        Ok(self.core.conductor.checked_sub(1).map(BigInt::from))
    }

    pub fn gaps(&self) -> Result<Vec<u64>> {
        self.require_cofinite()?;
        Ok((0..self.core.conductor).filter(|&t| !self.core.table[t as usize]).collect())
    }

    fn require_cofinite(&self) -> Result<()> {
        if self.is_cofinite() {
            Ok(())
        } else {
            Err(Error::NonCofinite(self.scale.to_string()))
        }
    }

    pub fn contains(&self, t: &BigInt) -> bool {
        if t.is_negative() {
            return false;
        }
        let (q, r) = t.div_rem(&self.scale);
        r.is_zero() && self.core.contains(&q)
    }

    pub fn contains_u64(&self, t: u64) -> bool {
        if self.scale.is_one() {
            return self.core.contains_u64(t);
        }
        self.contains(&BigInt::from(t))
    }

    /// Members in `[0, bound)`.
    pub fn members_below(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&t| self.contains_u64(t)).collect()
    }

    /// `{t : d t in S}`.
    pub fn quotient(&self, d: &BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::ZeroDenominator);
        }
        let h = self.scale.gcd(d);
        let scale = &self.scale / &h;
        let d = d / &h;
        if d.is_one() {
            return Ok(Self::from_parts(scale, self.core.clone()));
        }
        let core = self.core.clone();
        let reduced = Self::from_membership(|t| Ok(core.contains(&(&d * t))), TABLE_LIMIT)?;
        Ok(Self::from_parts(scale, reduced.core))
    }

    pub fn quotient_u64(&self, d: u64) -> Result<Self> {
        self.quotient(&BigInt::from(d))
    }

    /// `{s + t : s in self, t in other}`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let gens: Vec<BigInt> = self.minimal_generators().into_iter().chain(other.minimal_generators()).collect();
        Self::from_generators(&gens)
    }

    /// `c * S`.
    pub fn scaled(&self, c: &BigInt) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::Precondition("scale factor must be positive".into()));
        }
        Ok(Self::from_parts(&self.scale * c, self.core.clone()))
    }

    pub fn equals(&self, other: &Self) -> bool {
        self == other
    }
}

impl PartialEq for NumericalSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.scale == other.scale && self.core.generators == other.core.generators
    }
}

impl Eq for NumericalSemigroup {}

impl fmt::Debug for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.minimal_generators().iter().join(","))
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `<numerators> / denominator`, a presentation of `{t : d t in <a>}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPresentation {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

/// `realize` builds a membership table of `<a>` when `min(a) * max(a)`, a
/// bound on its conductor, stays below this; otherwise it queries the
/// knapsack oracle once per candidate element of the quotient.
const TABLE_CONDUCTOR_BOUND: u64 = 1 << 24;

impl QuotientPresentation {
    pub fn new(numerators: Vec<BigInt>, denominator: BigInt) -> Result<Self> {
        validate(&numerators)?;
        if !denominator.is_positive() {
            return Err(Error::ZeroDenominator);
        }
        Ok(QuotientPresentation { numerators, denominator })
    }

    pub fn from_u64s(numerators: &[u64], denominator: u64) -> Result<Self> {
        Self::new(numerators.iter().map(|&a| BigInt::from(a)).collect(), BigInt::from(denominator))
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Number of numerators.
    pub fn k(&self) -> usize {
        self.numerators.len()
    }

    /// The semigroup `{t : d t in <a>}`.
    pub fn realize(&self) -> Result<NumericalSemigroup> {
        let g = self.numerators.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let h = g.gcd(&self.denominator);
        let d = &self.denominator / &h;
        let reduced: Vec<BigInt> = self.numerators.iter().map(|x| x / &g).collect();
        let lo = reduced.iter().min().expect("nonempty");
        let hi = reduced.iter().max().expect("nonempty");
        let small = (lo * hi).to_u64().is_some_and(|v| v <= TABLE_CONDUCTOR_BOUND);
        if small {
            return NumericalSemigroup::from_generators(&self.numerators)?.quotient(&self.denominator);
        }
        let oracle = KnapsackOracle::new(&reduced)?;
        let core = NumericalSemigroup::from_membership(|t| Ok(oracle.contains(&(&d * t))), TABLE_LIMIT)?;
        core.scaled(&(&g / &h))
    }
}

impl fmt::Display for QuotientPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>/{}", self.numerators.iter().join(","), self.denominator)
    }
}
