//! Naive oracles shared by the integration tests. They deliberately avoid
//! the library's facet and Fourier-Motzkin machinery.

#![allow(dead_code)]

use itertools::Itertools;

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let sub: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&sub)
        })
        .sum()
}

/// Is `x` a nonnegative combination of the given `n` linearly independent
/// columns in `R^n`? Cramer's rule: `lambda_j det = det(cols with x at j)`.
fn in_simplicial(cols: &[Vec<i128>], x: &[i128]) -> bool {
    let n = x.len();
    let as_rows = |cs: &[Vec<i128>]| -> Vec<Vec<i128>> { (0..n).map(|i| cs.iter().map(|c| c[i]).collect()).collect() };
    let d = det(&as_rows(cols));
    if d == 0 {
        return false;
    }
    (0..cols.len()).all(|j| {
        let mut replaced = cols.to_vec();
        replaced[j] = x.to_vec();
        let num = det(&as_rows(&replaced));
        num == 0 || (num > 0) == (d > 0)
    })
}

/// Membership in the cone of arbitrary columns spanning `R^n`, by
/// Caratheodory over all bases.
pub fn in_cone(cols: &[Vec<i128>], x: &[i128]) -> bool {
    let n = x.len();
    if x.iter().all(|&v| v == 0) {
        return true;
    }
    cols.iter().cloned().combinations(n).any(|basis| in_simplicial(&basis, x))
}

fn floor_div(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -(-a).div_euclid(b)
}

/// Integer points of `cone(cols)` with first coordinate `t`, from the
/// bounding box of the slice (vertices `t v / v_1`).
pub fn slice_points(cols: &[Vec<i128>], t: i128) -> Vec<Vec<i128>> {
    let n = cols[0].len();
    let ranges: Vec<Vec<i128>> = (1..n)
        .map(|i| {
            let lo = cols.iter().map(|v| floor_div(t * v[i], v[0])).min().unwrap();
            let hi = cols.iter().map(|v| ceil_div(t * v[i], v[0])).max().unwrap();
            (lo..=hi).collect()
        })
        .collect();
    if n == 1 {
        return vec![vec![t]];
    }
    ranges
        .into_iter()
        .multi_cartesian_product()
        .map(|rest| std::iter::once(t).chain(rest).collect::<Vec<i128>>())
        .filter(|x| in_cone(cols, x))
        .collect()
}

/// Members of `s(M)` in `[0, bound]` by box enumeration; `rows` is `M`.
pub fn naive_projection(rows: &[Vec<i64>], bound: u64) -> Vec<bool> {
    let m = rows.len();
    let cols: Vec<Vec<i128>> = (0..rows[0].len()).map(|j| (0..m).map(|i| rows[i][j] as i128).collect()).collect();
    (0..=bound).map(|t| !slice_points(&cols, t as i128).is_empty()).collect()
}

/// Members of `pi(cone(M) ∩ Z^2)` in `[0, bound]` for a 2-row `M` with `pi`
/// positive on every column.
pub fn naive_projection_2d(rows: &[Vec<i64>], pi: [i64; 2], bound: u64) -> Vec<bool> {
    let cols: Vec<Vec<i128>> = (0..rows[0].len()).map(|j| vec![rows[0][j] as i128, rows[1][j] as i128]).collect();
    let min_pi = cols.iter().map(|c| pi[0] as i128 * c[0] + pi[1] as i128 * c[1]).min().unwrap();
    assert!(min_pi > 0);
    let reach = cols.iter().map(|c| c[0].abs().max(c[1].abs())).max().unwrap() * (bound as i128 / min_pi + 1);
    let mut hit = vec![false; bound as usize + 1];
    for x in -reach..=reach {
        for y in -reach..=reach {
            let p = pi[0] as i128 * x + pi[1] as i128 * y;
            if (0..=bound as i128).contains(&p) && !hit[p as usize] && in_cone(&cols, &[x, y]) {
                hit[p as usize] = true;
            }
        }
    }
    hit
}
