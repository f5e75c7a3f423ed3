//! Integer-point machinery shared by the cone slicer and the membership
//! oracle for semigroups with huge generators.
//!
//! [`ParametricPolytope`] stores a system `p * c0 + sum_j c_j y_j >= 0` in
//! variables `y` and one scalar parameter `p`, together with its
//! Fourier-Motzkin projections onto every prefix of the variables. With `p`
//! fixed, the projections give exact real bounds for `y_j` given
//! `y_0..y_{j-1}`, so depth-first enumeration only visits prefixes that
//! extend to a real point of the polytope.

use std::collections::HashSet;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// One inequality `param * p + coeffs . y >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row {
    param: BigInt,
    coeffs: Vec<BigInt>,
}

impl Row {
    fn normalized(mut self) -> Row {
        let g = self.coeffs.iter().fold(self.param.abs(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            self.param /= &g;
            for c in self.coeffs.iter_mut() {
                *c /= &g;
            }
        }
        self
    }
}

/// Levels hold the rows whose last nonzero variable is `y_j`, in the
/// representation they have after eliminating `y_{j+1}..`.
#[derive(Clone, Debug)]
struct Levels<T> {
    param_only: Vec<T>,
    // per level: (param, coeffs[0..=j])
    levels: Vec<Vec<(T, Vec<T>)>>,
}

#[derive(Clone, Debug)]
pub struct ParametricPolytope {
    dim: usize,
    big: Levels<BigInt>,
    small: Option<Levels<i128>>,
}

impl ParametricPolytope {
    /// `rows[i] = (param coefficient, variable coefficients)`.
    pub fn new(dim: usize, rows: Vec<(BigInt, Vec<BigInt>)>) -> Result<Self> {
        let mut system: Vec<Row> = Vec::new();
        let mut seen = HashSet::new();
        for (param, coeffs) in rows {
            if coeffs.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{dim} coefficients"),
                    found: format!("{} coefficients", coeffs.len()),
                });
            }
            let r = Row { param, coeffs }.normalized();
            if seen.insert(r.clone()) {
                system.push(r);
            }
        }
        let mut levels: Vec<Vec<(BigInt, Vec<BigInt>)>> = vec![Vec::new(); dim];
        for j in (0..dim).rev() {
            let (with, without): (Vec<Row>, Vec<Row>) = system.into_iter().partition(|r| !r.coeffs[j].is_zero());
            let pos: Vec<&Row> = with.iter().filter(|r| r.coeffs[j].is_positive()).collect();
            let neg: Vec<&Row> = with.iter().filter(|r| r.coeffs[j].is_negative()).collect();
            if pos.is_empty() || neg.is_empty() {
                return Err(Error::Precondition(format!("polytope unbounded in variable {j}")));
            }
            let mut next = without;
            let mut seen: HashSet<Row> = next.iter().cloned().collect();
            for p in &pos {
                for n in &neg {
                    let (a, b) = (p.coeffs[j].clone(), -&n.coeffs[j]);
                    let param = &p.param * &b + &n.param * &a;
                    let coeffs: Vec<BigInt> =
                        p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &b + y * &a).collect();
                    let r = Row { param, coeffs }.normalized();
                    if seen.insert(r.clone()) {
                        next.push(r);
                    }
                }
            }
            levels[j] = with.into_iter().map(|r| (r.param, r.coeffs[..=j].to_vec())).collect();
            system = next;
        }
        let param_only: Vec<BigInt> = system.into_iter().map(|r| r.param).collect();
        let big = Levels { param_only, levels };
        let small = to_small(&big);
        Ok(ParametricPolytope { dim, big, small })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Visits integer points for parameter `p` in lexicographic order until
    /// the visitor breaks.
    pub fn for_each_point<F>(&self, p: &BigInt, mut visit: F)
    where
        F: FnMut(&[BigInt]) -> ControlFlow<()>,
    {
        if let (Some(small), Some(ps)) = (&self.small, p.to_i128()) {
            let mut buf = Vec::with_capacity(self.dim);
            let mut visited = 0usize;
            // Replays are avoided by counting visits and skipping them in the
            // BigInt rerun if the i128 pass overflows midway.
            let mut outer = |pt: &[i128]| -> ControlFlow<()> {
                visited += 1;
                let big: Vec<BigInt> = pt.iter().map(|&x| BigInt::from(x)).collect();
                visit(&big)
            };
            match enumerate_small(small, ps, &mut buf, &mut outer) {
                Ok(_) => return,
                Err(Overflow) => {
                    let mut skip = visited;
                    let mut buf = Vec::with_capacity(self.dim);
                    let _ = enumerate_big(&self.big, p, &mut buf, &mut |pt: &[BigInt]| {
                        if skip > 0 {
                            skip -= 1;
                            ControlFlow::Continue(())
                        } else {
                            visit(pt)
                        }
                    });
                    return;
                }
            }
        }
        let mut buf = Vec::with_capacity(self.dim);
        let _ = enumerate_big(&self.big, p, &mut buf, &mut visit);
    }

    pub fn first_point(&self, p: &BigInt) -> Option<Vec<BigInt>> {
        let mut found = None;
        self.for_each_point(p, |pt| {
            found = Some(pt.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    pub fn points(&self, p: &BigInt) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        self.for_each_point(p, |pt| {
            out.push(pt.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    pub fn is_nonempty(&self, p: &BigInt) -> bool {
        self.first_point(p).is_some()
    }
}

#[derive(Debug)]
struct Overflow;

fn to_small(big: &Levels<BigInt>) -> Option<Levels<i128>> {
    // Coefficients are kept well below i128 so that products with moderate
    // coordinates usually fit; overflow at runtime falls back to BigInt.
    let limit = BigInt::one() << 60;
    let conv = |x: &BigInt| if x.abs() < limit { x.to_i128() } else { None };
    let param_only = big.param_only.iter().map(conv).collect::<Option<Vec<_>>>()?;
    let levels = big
        .levels
        .iter()
        .map(|lvl| {
            lvl.iter()
                .map(|(p, cs)| Some((conv(p)?, cs.iter().map(conv).collect::<Option<Vec<_>>>()?)))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Levels { param_only, levels })
}

fn floor_div_i(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn ceil_div_i(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

fn enumerate_small<F>(lv: &Levels<i128>, p: i128, buf: &mut Vec<i128>, visit: &mut F) -> Result<ControlFlow<()>, Overflow>
where
    F: FnMut(&[i128]) -> ControlFlow<()>,
{
    for c in &lv.param_only {
        if c.checked_mul(p).ok_or(Overflow)? < 0 {
            return Ok(ControlFlow::Continue(()));
        }
    }
    recurse_small(lv, p, buf, visit)
}

fn recurse_small<F>(lv: &Levels<i128>, p: i128, buf: &mut Vec<i128>, visit: &mut F) -> Result<ControlFlow<()>, Overflow>
where
    F: FnMut(&[i128]) -> ControlFlow<()>,
{
    let j = buf.len();
    if j == lv.levels.len() {
        return Ok(visit(buf));
    }
    let mut lo: Option<i128> = None;
    let mut hi: Option<i128> = None;
    for (pc, cs) in &lv.levels[j] {
        // cs[j] * y_j >= -(pc * p + sum_{i<j} cs[i] y_i)
        let mut rhs = pc.checked_mul(p).ok_or(Overflow)?;
        for (c, y) in cs[..j].iter().zip(buf.iter()) {
            rhs = rhs.checked_add(c.checked_mul(*y).ok_or(Overflow)?).ok_or(Overflow)?;
        }
        let rhs = rhs.checked_neg().ok_or(Overflow)?;
        let c = cs[j];
        if c > 0 {
            let b = ceil_div_i(rhs, c);
            lo = Some(lo.map_or(b, |l| l.max(b)));
        } else {
            let b = floor_div_i(rhs, c);
            hi = Some(hi.map_or(b, |h| h.min(b)));
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        unreachable!("boundedness checked at construction");
    };
    let mut y = lo;
    while y <= hi {
        buf.push(y);
        let r = recurse_small(lv, p, buf, visit);
        buf.pop();
        if let ControlFlow::Break(()) = r? {
            return Ok(ControlFlow::Break(()));
        }
        y += 1;
    }
    Ok(ControlFlow::Continue(()))
}

fn enumerate_big<F>(lv: &Levels<BigInt>, p: &BigInt, buf: &mut Vec<BigInt>, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[BigInt]) -> ControlFlow<()>,
{
    if lv.param_only.iter().any(|c| (c * p).is_negative()) {
        return ControlFlow::Continue(());
    }
    recurse_big(lv, p, buf, visit)
}

fn recurse_big<F>(lv: &Levels<BigInt>, p: &BigInt, buf: &mut Vec<BigInt>, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[BigInt]) -> ControlFlow<()>,
{
    let j = buf.len();
    if j == lv.levels.len() {
        return visit(buf);
    }
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for (pc, cs) in &lv.levels[j] {
        let mut rhs = pc * p;
        for (c, y) in cs[..j].iter().zip(buf.iter()) {
            rhs += c * y;
        }
        let rhs = -rhs;
        let c = &cs[j];
        if c.is_positive() {
            let b = -((-&rhs).div_floor(c));
            lo = Some(match lo {
                Some(l) if l >= b => l,
                _ => b,
            });
        } else {
            let b = rhs.div_floor(c);
            hi = Some(match hi {
                Some(h) if h <= b => h,
                _ => b,
            });
        }
    }
    let (Some(mut y), Some(hi)) = (lo, hi) else {
        unreachable!("boundedness checked at construction");
    };
    while y <= hi {
        buf.push(y.clone());
        let r = recurse_big(lv, p, buf, visit);
        buf.pop();
        if r.is_break() {
            return r;
        }
        y += 1;
    }
    ControlFlow::Continue(())
}

/// LLL reduction (delta = 3/4) of the rows of `basis`, which must be
/// linearly independent. Exact integral version (Cohen, Alg. 2.6.7).
pub fn lll_reduce(basis: &IntMatrix) -> Result<IntMatrix> {
    let n = basis.rows();
    // 1-based working arrays
    let mut b: Vec<Vec<BigInt>> = std::iter::once(Vec::new()).chain(basis.to_rows()).collect();
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    let dot = |x: &[BigInt], y: &[BigInt]| -> BigInt { x.iter().zip(y).map(|(a, c)| a * c).sum() };
    d[0] = BigInt::one();
    d[1] = dot(&b[1], &b[1]);
    if d[1].is_zero() {
        return Err(Error::RankDeficient { rank: 0, needed: n });
    }
    if n == 1 {
        return Ok(basis.clone());
    }
    let mut k = 2usize;
    let mut kmax = 1usize;

    fn red(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
        let two_lam: BigInt = &lam[k][l] * 2;
        if two_lam.abs() > d[l] {
            // nearest integer to lam/d
            let q = (two_lam + &d[l]).div_floor(&(&d[l] * 2));
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l];
            for i in 1..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::RankDeficient { rank: k - 1, needed: n });
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            red(&mut b, &mut lam, &d, k, k - 1);
            let lhs: BigInt = &d[k] * &d[k - 2] * 4;
            let rhs: BigInt = &d[k - 1] * &d[k - 1] * 3 - &lam[k][k - 1] * &lam[k][k - 1] * 4;
            if lhs < rhs {
                // swap b_k and b_{k-1}
                b.swap(k, k - 1);
                for j in 1..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1].clone();
                let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                    lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
                }
                d[k - 1] = bb;
                if k > 2 {
                    k -= 1;
                }
            } else {
                for l in (1..k - 1).rev() {
                    red(&mut b, &mut lam, &d, k, l);
                }
                k += 1;
                break;
            }
        }
    }
    IntMatrix::from_rows(&b[1..])
}

/// Decides `n in <a_1, ..., a_k>` for positive, possibly huge, generators
/// by enumerating nonnegative solutions of `a . x = n` over an LLL-reduced
/// basis of the kernel lattice of `a`.
#[derive(Clone, Debug)]
pub struct KnapsackOracle {
    gens: Vec<BigInt>,
    gcd: BigInt,
    // x = n * particular + kernel^T y
    polytope: Option<ParametricPolytope>,
}

impl KnapsackOracle {
    pub fn new(gens: &[BigInt]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if let Some(g) = gens.iter().find(|g| !g.is_positive()) {
            return Err(Error::NonPositiveGenerator(g.to_string()));
        }
        let gcd = gens.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let reduced: Vec<BigInt> = gens.iter().map(|x| x / &gcd).collect();
        let k = reduced.len();
        if k == 1 {
            return Ok(KnapsackOracle { gens: gens.to_vec(), gcd, polytope: None });
        }
        let row = IntMatrix::new(1, k, reduced)?;
        let s = crate::intmat::snf(&row);
        let w = s.v.scaled(&s.u[(0, 0)]);
        // row * w = e1: column 0 is a particular solution for n = 1, the
        // remaining columns span the kernel
        let particular = w.column(0);
        let kernel = IntMatrix::from_rows(&(1..k).map(|j| w.column(j)).collect::<Vec<_>>())?;
        let kernel = lll_reduce(&kernel)?;
        let rows = (0..k)
            .map(|i| (particular[i].clone(), (0..k - 1).map(|j| kernel[(j, i)].clone()).collect()))
            .collect();
        let polytope = ParametricPolytope::new(k - 1, rows)?;
        Ok(KnapsackOracle { gens: gens.to_vec(), gcd, polytope: Some(polytope) })
    }

    pub fn generators(&self) -> &[BigInt] {
        &self.gens
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        if n.is_negative() {
            return false;
        }
        if n.is_zero() {
            return true;
        }
        if !(n % &self.gcd).is_zero() {
            return false;
        }
        let m = n / &self.gcd;
        match &self.polytope {
            None => true,
            Some(p) => p.is_nonempty(&m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bigs(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn triangle_points() {
        // x >= 0, y >= 0, x + y <= p
        let rows = vec![
            (BigInt::zero(), bigs(&[1, 0])),
            (BigInt::zero(), bigs(&[0, 1])),
            (BigInt::one(), bigs(&[-1, -1])),
        ];
        let poly = ParametricPolytope::new(2, rows).unwrap();
        assert_eq!(poly.points(&BigInt::from(2)).len(), 6);
        assert_eq!(poly.points(&BigInt::from(0)), vec![bigs(&[0, 0])]);
        assert!(!poly.is_nonempty(&BigInt::from(-1)));
    }

    #[test]
    fn thin_polytope_without_integer_points() {
        // 2y >= x, 2y <= x with x fixed by the parameter: y = p/2
        let rows = vec![(BigInt::from(-1), bigs(&[2])), (BigInt::one(), bigs(&[-2]))];
        let poly = ParametricPolytope::new(1, rows).unwrap();
        assert!(poly.is_nonempty(&BigInt::from(4)));
        assert!(!poly.is_nonempty(&BigInt::from(5)));
    }

    #[test]
    fn unbounded_is_rejected() {
        let rows = vec![(BigInt::zero(), bigs(&[1]))];
        assert!(ParametricPolytope::new(1, rows).is_err());
    }

    #[test]
    fn lll_small_basis() {
        let b = IntMatrix::from_rows(&[vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]).unwrap();
        let r = lll_reduce(&b).unwrap();
        assert_eq!(r.determinant().unwrap().abs(), b.determinant().unwrap().abs());
        let norms: Vec<BigInt> = r.to_rows().iter().map(|v| v.iter().map(|x| x * x).sum()).collect();
        assert!(norms.iter().all(|n| *n <= BigInt::from(9)), "{r:?}");
    }

    #[test]
    fn knapsack_matches_dp() {
        let gens = [6u64, 9, 20];
        let mut dp = vec![false; 200];
        dp[0] = true;
        for t in 1..200 {
            dp[t] = gens.iter().any(|&g| t as u64 >= g && dp[t - g as usize]);
        }
        let oracle = KnapsackOracle::new(&bigs(&[6, 9, 20])).unwrap();
        for (t, &m) in dp.iter().enumerate() {
            assert_eq!(oracle.contains(&BigInt::from(t)), m, "t = {t}");
        }
    }

    #[test]
    fn knapsack_huge_generators() {
        let gens = bigs(&[13775465, 14996610, 18887728, 20196837]);
        let oracle = KnapsackOracle::new(&gens).unwrap();
        let target: BigInt = &gens[0] * 3 + &gens[2] * 5 + &gens[3];
        assert!(oracle.contains(&target));
        assert!(!oracle.contains(&(&gens[0] + 1)));
        assert!(!oracle.contains(&(&gens[3] * 2 - &gens[0] + 1)));
    }
}
