//! Exact integer matrices: determinants, adjugates, Smith normal form with
//! transforms, primitive-set tests and unimodular completion of a row.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::RaggedRows);
        }
        let data = rows.iter().flatten().cloned().map(Into::into).collect();
        IntMatrix::new(rows.len(), cols, data)
    }

    /// Builds a matrix from column vectors.
    pub fn from_columns<T: Into<BigInt> + Clone>(cols: &[Vec<T>]) -> Result<Self> {
        Ok(IntMatrix::from_rows(cols)?.transpose())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scaled(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    /// Largest absolute value of any entry.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", rhs.rows),
            });
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * &rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Submatrix on the given row and column indices (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let data = rows.iter().flat_map(|&i| cols.iter().map(move |&j| self[(i, j)].clone())).collect();
        IntMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn determinant(&self) -> Result<BigInt> {
        self.require_square()?;
        Ok(det_rows(self.to_rows()))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    pub fn rank(&self) -> usize {
        rank_rows(self.to_rows())
    }

    /// Minor obtained by deleting row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Result<BigInt> {
        self.require_square()?;
        if self.rows == 1 {
            return Ok(BigInt::one());
        }
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        Ok(det_rows(self.select(&rows, &cols).to_rows()))
    }

    /// Classical adjoint: entry (i, j) is (-1)^(i+j) times the (j, i) minor.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        self.require_square()?;
        let n = self.rows;
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(j, i)?;
                adj[(i, j)] = if (i + j) % 2 == 0 { m } else { -m };
            }
        }
        Ok(adj)
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let det = self.determinant()?;
        if !det.abs().is_one() {
            return Err(Error::Precondition(format!("determinant {det} is not a unit")));
        }
        Ok(self.adjugate()?.scaled(&det))
    }

    /// All maximal minors, indexed by the lexicographic order of the kept
    /// row (if tall) or column (if wide) subsets.
    pub fn maximal_minors(&self) -> Vec<BigInt> {
        let k = self.rows.min(self.cols);
        if self.rows >= self.cols {
            let cols: Vec<usize> = (0..self.cols).collect();
            (0..self.rows)
                .combinations(k)
                .map(|rs| det_rows(self.select(&rs, &cols).to_rows()))
                .collect()
        } else {
            let rows: Vec<usize> = (0..self.rows).collect();
            (0..self.cols)
                .combinations(k)
                .map(|cs| det_rows(self.select(&rows, &cs).to_rows()))
                .collect()
        }
    }

    /// True iff the columns have full rank and their maximal minors are
    /// coprime, i.e. they form a basis of the integer points in their span.
    pub fn is_primitive_columns(&self) -> bool {
        if self.cols > self.rows {
            return false;
        }
        let g = self.maximal_minors().iter().fold(BigInt::zero(), |g, m| g.gcd(m));
        g.is_one()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}]", self.row(i).iter().join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn det_rows(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

pub(crate) fn rank_rows(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let (f, g) = (a[rank][c].clone(), a[i][c].clone());
            for j in c..cols {
                let v = &a[i][j] * &f - &a[rank][j] * &g;
                a[i][j] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal with a
/// nonnegative divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub diagonal: Vec<BigInt>,
}

impl SmithDecomposition {
    /// Re-multiplies the factors and checks every structural invariant.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let n = self.diagonal.len();
        let diag_ok = (0..self.d.rows()).all(|i| {
            (0..self.d.cols()).all(|j| {
                let e = &self.d[(i, j)];
                if i == j {
                    e == &self.diagonal[i] && !e.is_negative()
                } else {
                    e.is_zero()
                }
            })
        });
        let chain_ok = (0..n.saturating_sub(1)).all(|i| divides(&self.diagonal[i], &self.diagonal[i + 1]));
        diag_ok
            && chain_ok
            && self.u.is_unimodular()
            && self.v.is_unimodular()
            && &(&self.u * m) * &self.v == self.d
    }
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

struct SnfState {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl SnfState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// row_dst += q * row_src
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src_row = m[src].clone();
            for (x, y) in m[dst].iter_mut().zip(&src_row) {
                *x += q * y;
            }
        }
    }

    /// col_dst += q * col_src
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let y = r[src].clone();
                r[dst] += q * y;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

/// Smith normal form with transforms. The pivot is the entry of least
/// absolute value in the active block, ties broken by lowest (row, col).
pub fn snf(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut st = SnfState {
        a: m.to_rows(),
        u: IntMatrix::identity(rows).to_rows(),
        v: IntMatrix::identity(cols).to_rows(),
    };
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            let Some((pi, pj)) = st.pivot(t) else {
                break;
            };
            if pi != t {
                st.swap_rows(pi, t);
            }
            if pj != t {
                st.swap_cols(pj, t);
            }
            let p = st.a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if st.a[i][t].is_zero() {
                    continue;
                }
                let q = &st.a[i][t] / &p;
                st.add_row(i, t, &-q);
                dirty |= !st.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if st.a[t][j].is_zero() {
                    continue;
                }
                let q = &st.a[t][j] / &p;
                st.add_col(j, t, &-q);
                dirty |= !st.a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&st.a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.a[t][t].is_negative() {
            st.negate_row(t);
        }
    }
    let diagonal = (0..n).map(|i| st.a[i][i].clone()).collect();
    SmithDecomposition {
        u: IntMatrix::from_rows(&st.u).expect("nonempty"),
        d: IntMatrix::from_rows(&st.a).expect("nonempty"),
        v: IntMatrix::from_rows(&st.v).expect("nonempty"),
        diagonal,
    }
}

fn gcd_all(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Unimodular `W` with `row * W = [1, 0, ..., 0]`; requires a coprime row.
fn row_reducer(row: &[BigInt]) -> Result<IntMatrix> {
    if !gcd_all(row).is_one() {
        return Err(Error::NotCoprime(row.iter().join(",")));
    }
    let r = IntMatrix::new(1, row.len(), row.to_vec())?;
    let s = snf(&r);
    // u is the 1x1 unit, so row * (u * v) = e1
    Ok(s.v.scaled(&s.u[(0, 0)]))
}

/// Smith form of a square full-rank matrix with coprime first row, arranged
/// so that the first row of `U` is `e1` (hence the first row of `V^-1` is the
/// first row of `M`).
pub fn snf_first_row_preserving(m: &IntMatrix) -> Result<SmithDecomposition> {
    m.require_square()?;
    let k = m.rows();
    let rank = m.rank();
    if rank < k {
        return Err(Error::RankDeficient { rank, needed: k });
    }
    let v1 = row_reducer(m.row(0))?;
    let mut mv = (m * &v1).to_rows();
    let mut u1 = IntMatrix::identity(k).to_rows();
    for i in 1..k {
        let c = mv[i][0].clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..k {
            let (a, b) = (mv[0][j].clone(), u1[0][j].clone());
            mv[i][j] -= &c * a;
            u1[i][j] -= &c * b;
        }
    }
    let u1 = IntMatrix::from_rows(&u1)?;
    if k == 1 {
        let d = IntMatrix::identity(1);
        return Ok(SmithDecomposition { u: u1, d, v: v1, diagonal: vec![BigInt::one()] });
    }
    let lower: Vec<Vec<BigInt>> = mv[1..].iter().map(|r| r[1..].to_vec()).collect();
    let inner = snf(&IntMatrix::from_rows(&lower)?);
    let u = &block_one(&inner.u) * &u1;
    let v = &v1 * &block_one(&inner.v);
    let d = block_one(&inner.d);
    let mut diagonal = vec![BigInt::one()];
    diagonal.extend(inner.diagonal);
    Ok(SmithDecomposition { u, d, v, diagonal })
}

/// diag(1, X)
fn block_one(x: &IntMatrix) -> IntMatrix {
    let n = x.rows() + 1;
    let mut out = IntMatrix::zeros(n, x.cols() + 1);
    out[(0, 0)] = BigInt::one();
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            out[(i + 1, j + 1)] = x[(i, j)].clone();
        }
    }
    out
}

/// Unimodular square matrix whose first row is `a`.
pub fn unimodular_with_first_row(a: &[BigInt]) -> Result<IntMatrix> {
    if a.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    row_reducer(a)?.unimodular_inverse()
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

    #[test]
    fn snf_of_fixture_matrices() {
        let m = mat(&[&[11, 13], &[10, 12]]);
        let s = snf(&m);
        assert_eq!(s.diagonal, big(&[1, 2]));
        assert!(s.verify(&m));

        let m = mat(&[&[6, 25], &[1, 3]]);
        assert_eq!(snf(&m).diagonal, big(&[1, 7]));
    }

    #[test]
    fn snf_reorders_diagonal() {
        assert_eq!(snf(&mat(&[&[2, 0], &[0, 4]])).diagonal, big(&[2, 4]));
        assert_eq!(snf(&mat(&[&[4, 0], &[0, 2]])).diagonal, big(&[2, 4]));
        assert_eq!(snf(&mat(&[&[2, 0], &[0, 3]])).diagonal, big(&[1, 6]));
    }

    #[test]
    fn snf_of_identity_and_zero() {
        let i = IntMatrix::identity(3);
        let s = snf(&i);
        assert_eq!(s.diagonal, big(&[1, 1, 1]));
        assert_eq!(s.u, i);
        assert_eq!(s.v, i);

        let z = IntMatrix::zeros(2, 3);
        let s = snf(&z);
        assert_eq!(s.diagonal, big(&[0, 0]));
        assert!(s.verify(&z));
    }

    #[test]
    fn snf_rectangular() {
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = snf(&m);
        assert_eq!(s.diagonal, big(&[2, 6, 12]));
        assert!(s.verify(&m));
        let m = mat(&[&[6, 10, 15]]);
        let s = snf(&m);
        assert_eq!(s.diagonal, big(&[1]));
        assert!(s.verify(&m));
    }

    #[test]
    fn first_row_preserving() {
        let m = mat(&[&[11, 13], &[10, 12]]);
        let s = snf_first_row_preserving(&m).unwrap();
        assert_eq!(s.u.row(0), big(&[1, 0]).as_slice());
        assert_eq!(s.diagonal, big(&[1, 2]));
        assert!(s.verify(&m));
        let vinv = s.v.unimodular_inverse().unwrap();
        assert_eq!(vinv.row(0), m.row(0));

        let s = snf_first_row_preserving(&mat(&[&[6, 25], &[1, 3]])).unwrap();
        assert_eq!(s.diagonal, big(&[1, 7]));

        assert!(matches!(
            snf_first_row_preserving(&mat(&[&[6, 8], &[1, 1]])),
            Err(Error::NotCoprime(_))
        ));
        assert!(matches!(
            snf_first_row_preserving(&mat(&[&[2, 3], &[4, 6]])),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn first_row_preserving_on_unimodular() {
        let m = mat(&[&[3, 5, 7], &[1, 2, 3], &[0, 1, 3]]);
        assert!(m.is_unimodular());
        let s = snf_first_row_preserving(&m).unwrap();
        assert_eq!(s.diagonal, big(&[1, 1, 1]));
        assert!(s.verify(&m));
    }

    #[test]
    fn adjugate_cases() {
        assert_eq!(mat(&[&[2, 3], &[5, 7]]).adjugate().unwrap(), mat(&[&[7, -3], &[-5, 2]]));
        assert_eq!(IntMatrix::identity(4).adjugate().unwrap(), IntMatrix::identity(4));
        assert_eq!(mat(&[&[9]]).adjugate().unwrap(), mat(&[&[1]]));
        let sing = mat(&[&[1, 2], &[2, 4]]);
        let adj = sing.adjugate().unwrap();
        assert_eq!(&adj * &sing, IntMatrix::zeros(2, 2));
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::identity(5).determinant().unwrap(), BigInt::one());
        assert_eq!(mat(&[&[11, 13], &[5, 6]]).determinant().unwrap(), BigInt::from(1));
        assert_eq!(mat(&[&[6, 25], &[1, 3]]).determinant().unwrap(), BigInt::from(-7));
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert!(matches!(mat(&[&[1, 2]]).determinant(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn primitive_columns() {
        assert!(mat(&[&[11, 13], &[5, 6]]).is_primitive_columns());
        assert!(!mat(&[&[2], &[4], &[6]]).is_primitive_columns());
        assert!(mat(&[&[1, 0], &[0, 2], &[0, 1]]).is_primitive_columns());
        assert!(!mat(&[&[1, 2], &[1, 2], &[1, 2]]).is_primitive_columns());
        assert!(!mat(&[&[1, 0, 0], &[0, 1, 0]]).is_primitive_columns());
    }

    #[test]
    fn unimodular_completion() {
        for a in [vec![11, 13], vec![6, 7, 8], vec![1, 0, 0], vec![6, 10, 15], vec![1]] {
            let w = unimodular_with_first_row(&big(&a)).unwrap();
            assert!(w.is_unimodular(), "{a:?}");
            assert_eq!(w.row(0), big(&a).as_slice());
        }
        assert!(matches!(unimodular_with_first_row(&big(&[4, 6])), Err(Error::NotCoprime(_))));
    }
}
