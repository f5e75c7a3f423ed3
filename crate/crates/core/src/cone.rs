//! Rational polyhedral cones given by generator columns, and the semigroup
//! obtained by projecting their integer points onto a linear form.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{snf, unimodular_with_first_row, IntMatrix};
use crate::lattice::ParametricPolytope;
use crate::semigroup::{NumericalSemigroup, TABLE_LIMIT};

/// `cone(v_1, ..., v_l)` for the columns `v_i` of a generator matrix.
#[derive(Clone, Debug)]
pub struct RationalCone {
    generators: IntMatrix,
    rank: usize,
    // inequalities f . x >= 0, present only when the cone is full dimensional
    facets: Option<Vec<Vec<BigInt>>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Normal to the hyperplane spanned by `n - 1` vectors in `R^n`, via signed
/// maximal minors of the `n x (n-1)` matrix they form.
fn cofactor_normal(cols: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    let a = IntMatrix::from_columns(cols).expect("nonempty");
    let keep: Vec<usize> = (0..cols.len()).collect();
    (0..n)
        .map(|i| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let m = a.select(&rows, &keep).determinant().expect("square");
            if i % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

/// Exact solution of `a y = x` for a matrix of full column rank, if any.
fn solve_exact(a: &IntMatrix, x: &[BigRational]) -> Option<Vec<BigRational>> {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut r: Vec<BigRational> = a.row(i).iter().map(|e| BigRational::from_integer(e.clone())).collect();
            r.push(x[i].clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let p = (pivot_row..m).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for e in rows[pivot_row].iter_mut() {
            *e *= &inv;
        }
        for r in 0..m {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=n {
                    let delta = &f * &rows[pivot_row][c];
                    rows[r][c] -= delta;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[n..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some(rows[..n].iter().map(|r| r[n].clone()).collect())
}

impl RationalCone {
    pub fn new(generators: IntMatrix) -> Result<Self> {
        if generators.rows() == 0 || generators.cols() == 0 {
            return Err(Error::EmptyMatrix);
        }
        for j in 0..generators.cols() {
            if generators.column(j).iter().all(Zero::is_zero) {
                return Err(Error::ZeroGenerator(j));
            }
        }
        let rank = generators.rank();
        let facets = (rank == generators.rows()).then(|| compute_facets(&generators));
        Ok(RationalCone { generators, rank, facets })
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.facets.is_some()
    }

    /// Linearly independent generators.
    pub fn is_simplicial(&self) -> bool {
        self.rank == self.generators.cols()
    }

    /// Inward facet normals; `None` unless full dimensional.
    pub fn facets(&self) -> Option<&[Vec<BigInt>]> {
        self.facets.as_deref()
    }

    /// True iff no nonzero nonnegative combination of generators vanishes.
    /// Such a combination exists iff one exists on a circuit, so it is
    /// enough to inspect the one-dimensional kernels of minimal dependent
    /// subsets.
    pub fn is_pointed(&self) -> bool {
        if self.is_simplicial() {
            return true;
        }
        let l = self.generators.cols();
        let all_rows: Vec<usize> = (0..self.ambient_dim()).collect();
        for size in 2..=(self.rank + 1).min(l) {
            for subset in (0..l).combinations(size) {
                let sub = self.generators.select(&all_rows, &subset);
                if sub.rank() != size - 1 {
                    continue;
                }
                let Some(k) = kernel_vector(&sub) else { continue };
                if k.iter().all(|x| x.is_positive()) || k.iter().all(|x| x.is_negative()) {
                    return false;
                }
            }
        }
        true
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.ambient_dim()),
                found: format!("length {n}"),
            });
        }
        Ok(())
    }

    pub fn contains_point(&self, x: &[BigRational]) -> Result<bool> {
        self.check_dim(x.len())?;
        if let Some(facets) = &self.facets {
            return Ok(facets.iter().all(|f| {
                let v: BigRational = f.iter().zip(x).map(|(a, b)| b * a).sum();
                !v.is_negative()
            }));
        }
        // Caratheodory: x lies in the cone of some independent subset.
        let all_rows: Vec<usize> = (0..self.ambient_dim()).collect();
        for subset in (0..self.generators.cols()).combinations(self.rank) {
            let basis = self.generators.select(&all_rows, &subset);
            if basis.rank() != self.rank {
                continue;
            }
            match solve_exact(&basis, x) {
                None => return Ok(false),
                Some(lambda) if lambda.iter().all(|l| !l.is_negative()) => return Ok(true),
                Some(_) => {}
            }
        }
        Ok(false)
    }

    pub fn contains_integer_point(&self, x: &[BigInt]) -> Result<bool> {
        self.check_dim(x.len())?;
        if let Some(facets) = &self.facets {
            return Ok(facets.iter().all(|f| !dot(f, x).is_negative()));
        }
        let q: Vec<BigRational> = x.iter().map(|e| BigRational::from_integer(e.clone())).collect();
        self.contains_point(&q)
    }

    /// Strict interior membership; false for cones that are not full dimensional.
    pub fn interior_contains(&self, x: &[BigInt]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(match &self.facets {
            Some(facets) => facets.iter().all(|f| dot(f, x).is_positive()),
            None => false,
        })
    }

    pub fn contains_cone(&self, inner: &RationalCone) -> Result<bool> {
        self.check_dim(inner.ambient_dim())?;
        for v in inner.generators.columns() {
            if !self.contains_integer_point(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every generator of `inner` lies in the interior of `self`.
    pub fn interior_contains_cone(&self, inner: &RationalCone) -> Result<bool> {
        self.check_dim(inner.ambient_dim())?;
        for v in inner.generators.columns() {
            if !self.interior_contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn require_positive_first_coordinate(&self) -> Result<()> {
        for (j, a) in self.generators.row(0).iter().enumerate() {
            if a.is_zero() {
                return Err(Error::UnboundedSlice(j));
            }
            if a.is_negative() {
                return Err(Error::NonPositiveFirstRow(j));
            }
        }
        Ok(())
    }

    /// Integer points of the cone whose first coordinate is `t`.
    pub fn slice_lattice_points(&self, t: &BigInt) -> Result<Vec<Vec<BigInt>>> {
        self.require_positive_first_coordinate()?;
        if t.is_negative() {
            return Ok(Vec::new());
        }
        if self.is_full_dimensional() {
            let slicer = Slicer::new(self)?;
            return Ok(slicer.points(t));
        }
        // Bounding box of the slice polytope, whose vertices are t v_i / v_i1.
        let m = self.ambient_dim();
        let cols = self.generators.columns();
        let mut ranges = Vec::with_capacity(m - 1);
        for i in 1..m {
            let lo = cols.iter().map(|v| (t * &v[i]).div_floor(&v[0])).min().expect("nonempty");
            let hi = cols.iter().map(|v| (t * &v[i]).div_ceil(&v[0])).max().expect("nonempty");
            let mut range = Vec::new();
            let mut x = lo;
            while x <= hi {
                range.push(x.clone());
                x += 1;
            }
            ranges.push(range);
        }
        let mut out = Vec::new();
        for rest in ranges.into_iter().multi_cartesian_product() {
            let mut x = vec![t.clone()];
            x.extend(rest);
            if self.contains_integer_point(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// The projection of the cone's integer points onto the first coordinate.
    pub fn projected_semigroup(&self) -> Result<NumericalSemigroup> {
        if !self.is_full_dimensional() {
            return Err(Error::RankDeficient { rank: self.rank, needed: self.ambient_dim() });
        }
        let slicer = Slicer::new(self)?;
        if self.ambient_dim() == 1 {
            return Ok(NumericalSemigroup::naturals());
        }
        NumericalSemigroup::from_membership(|t| Ok(slicer.is_nonempty(&BigInt::from(t))), TABLE_LIMIT)
    }
}

fn compute_facets(gens: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = gens.rows();
    if n == 1 {
        let sign = if gens.row(0)[0].is_negative() { -1 } else { 1 };
        return vec![vec![BigInt::from(sign)]];
    }
    if gens.is_square() {
        let det = gens.determinant().expect("square");
        let adj = gens.adjugate().expect("square");
        let adj = if det.is_negative() { adj.neg() } else { adj };
        return adj.to_rows().into_iter().map(primitive).collect();
    }
    let cols = gens.columns();
    let mut facets: Vec<Vec<BigInt>> = Vec::new();
    for subset in (0..cols.len()).combinations(n - 1) {
        let chosen: Vec<Vec<BigInt>> = subset.iter().map(|&j| cols[j].clone()).collect();
        let normal = cofactor_normal(&chosen, n);
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        let values: Vec<BigInt> = cols.iter().map(|v| dot(&normal, v)).collect();
        let normal = if values.iter().all(|v| !v.is_negative()) {
            normal
        } else if values.iter().all(|v| !v.is_positive()) {
            normal.into_iter().map(|x| -x).collect()
        } else {
            continue;
        };
        let normal = primitive(normal);
        if !facets.contains(&normal) {
            facets.push(normal);
        }
    }
    facets
}

/// Spanning vector of the kernel of a matrix with nullity one.
fn kernel_vector(a: &IntMatrix) -> Option<Vec<BigInt>> {
    let s = a.cols();
    let all_cols: Vec<usize> = (0..s).collect();
    let rows = (0..a.rows()).combinations(s - 1).find(|rs| a.select(rs, &all_cols).rank() == s - 1)?;
    let sub = a.select(&rows, &all_cols);
    let k: Vec<BigInt> = (0..s)
        .map(|j| {
            let keep: Vec<usize> = (0..s).filter(|&c| c != j).collect();
            let m = if s == 1 {
                BigInt::one()
            } else {
                sub.select(&(0..s - 1).collect::<Vec<_>>(), &keep).determinant().expect("square")
            };
            if j % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect();
    Some(k)
}

/// Exact slice enumerator for a full-dimensional cone whose generators all
/// have positive first coordinate.
#[derive(Clone, Debug)]
pub struct Slicer {
    dim: usize,
    polytope: Option<ParametricPolytope>,
}

impl Slicer {
    pub fn new(cone: &RationalCone) -> Result<Self> {
        cone.require_positive_first_coordinate()?;
        let facets = cone.facets().ok_or(Error::NotFullDimensional)?;
        Self::from_facets(cone.ambient_dim(), facets)
    }

    /// Builds the slicer straight from inward facet normals.
    pub fn from_facets(dim: usize, facets: &[Vec<BigInt>]) -> Result<Self> {
        if dim == 1 {
            return Ok(Slicer { dim, polytope: None });
        }
        let rows = facets.iter().map(|f| (f[0].clone(), f[1..].to_vec())).collect();
        Ok(Slicer { dim, polytope: Some(ParametricPolytope::new(dim - 1, rows)?) })
    }

    pub fn is_nonempty(&self, t: &BigInt) -> bool {
        self.first_point(t).is_some()
    }

    pub fn first_point(&self, t: &BigInt) -> Option<Vec<BigInt>> {
        if t.is_negative() {
            return None;
        }
        match &self.polytope {
            None => Some(vec![t.clone()]),
            Some(p) => p.first_point(t).map(|rest| std::iter::once(t.clone()).chain(rest).collect()),
        }
    }

    pub fn points(&self, t: &BigInt) -> Vec<Vec<BigInt>> {
        if t.is_negative() {
            return Vec::new();
        }
        match &self.polytope {
            None => vec![vec![t.clone()]],
            Some(p) => p.points(t).into_iter().map(|rest| std::iter::once(t.clone()).chain(rest).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// `s(M)`: first coordinates of the integer points of `cone(M)` for a
/// full-row-rank `M` with strictly positive first row.
pub fn project_semigroup(m: &IntMatrix) -> Result<NumericalSemigroup> {
    let cone = RationalCone::new(m.clone())?;
    if !cone.is_full_dimensional() {
        return Err(Error::RankDeficient { rank: cone.rank(), needed: m.rows() });
    }
    for (j, a) in m.row(0).iter().enumerate() {
        if !a.is_positive() {
            return Err(Error::NonPositiveFirstRow(j));
        }
    }
    cone.projected_semigroup()
}

/// `pi(cone(M) ∩ Z^m)`, with the true gcd of the image retained.
pub fn project_semigroup_general(m: &IntMatrix, pi: &[BigInt]) -> Result<NumericalSemigroup> {
    let c = canonicalize(m, pi, CanonicalMode::Dimension)?;
    let s = project_semigroup(&c.matrix)?;
    s.scaled(&c.d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalMode {
    /// `k x l` matrix, `k` the rank.
    Dimension,
    /// `l x l` matrix, one dimension per generator.
    Ray,
}

impl FromStr for CanonicalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dimension" => Ok(CanonicalMode::Dimension),
            "ray" => Ok(CanonicalMode::Ray),
            other => Err(Error::Parse(format!("unknown mode {other:?}, expected dimension or ray"))),
        }
    }
}

impl fmt::Display for CanonicalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CanonicalMode::Dimension => "dimension",
            CanonicalMode::Ray => "ray",
        })
    }
}

/// A presentation `pi(cone(M) ∩ Z^m) = d * s(matrix)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub matrix: IntMatrix,
    pub d: BigInt,
    pub mode: CanonicalMode,
}

/// Rewrites `(M, pi)` so that the projection is `d` times the first
/// coordinate of a full-dimensional cone.
pub fn canonicalize(m: &IntMatrix, pi: &[BigInt], mode: CanonicalMode) -> Result<CanonicalForm> {
    if pi.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("projection of length {}", m.rows()),
            found: format!("length {}", pi.len()),
        });
    }
    let cone = RationalCone::new(m.clone())?;
    let image: Vec<BigInt> = m.columns().iter().map(|v| dot(pi, v)).collect();
    if let Some(j) = image.iter().position(|x| x.is_negative()) {
        return Err(Error::NegativeProjection(j));
    }
    if image.iter().all(Zero::is_zero) {
        return Err(Error::TrivialImage);
    }
    let k = cone.rank();
    let l = m.cols();
    let first_axis = pi[1..].iter().all(Zero::is_zero) && pi[0].is_positive();
    if first_axis && k == m.rows() && (mode == CanonicalMode::Dimension || l == k) {
        return Ok(CanonicalForm { matrix: m.clone(), d: pi[0].clone(), mode });
    }

    // M = U^-1 D V^-1; the lower rows of D vanish, so only the top k
    // coordinates of U x carry information.
    let s = snf(m);
    let u_inv = s.u.unimodular_inverse()?;
    let v_inv = s.v.unimodular_inverse()?;
    let pi1: Vec<BigInt> = (0..m.rows()).map(|j| (0..m.rows()).map(|i| &pi[i] * &u_inv[(i, j)]).sum()).collect();
    let top: Vec<usize> = (0..k).collect();
    let all_cols: Vec<usize> = (0..l).collect();
    let d2 = s.d.select(&top, &all_cols);
    let m2 = &d2 * &v_inv;
    let mut pi2: Vec<BigInt> = pi1[..k].to_vec();

    let m2 = match mode {
        CanonicalMode::Dimension => m2,
        CanonicalMode::Ray => {
            let t = m2.maximal_minors().iter().filter(|x| !x.is_zero()).fold(BigInt::one(), |t, x| t.lcm(x));
            let mut diag: Vec<BigInt> = s.diagonal[..k].to_vec();
            diag.resize(l, t);
            pi2.resize(l, BigInt::zero());
            &IntMatrix::diagonal(&diag) * &v_inv
        }
    };
    let g = pi2.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let reduced: Vec<BigInt> = pi2.iter().map(|x| x / &g).collect();
    let w_inv = unimodular_with_first_row(&reduced)?;
    Ok(CanonicalForm { matrix: &w_inv * &m2, d: g, mode })
}
