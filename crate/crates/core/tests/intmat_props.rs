use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use projquot::intmat::{snf, snf_first_row_preserving, unimodular_with_first_row, IntMatrix};

/// Determinant by cofactor expansion along the first row.
fn laplace(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    (0..n)
        .map(|j| {
            let sub: Vec<Vec<BigInt>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
            let term = &m[0][j] * laplace(&sub);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// gcd of all i x i minors.
fn determinantal_divisor(m: &IntMatrix, i: usize) -> BigInt {
    let rows = m.to_rows();
    let mut g = BigInt::zero();
    for rs in (0..m.rows()).combinations(i) {
        for cs in (0..m.cols()).combinations(i) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect()).collect();
            g = g.gcd(&laplace(&sub));
        }
    }
    g
}

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c)
            .prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

fn square(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * n)
            .prop_map(move |v| IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_form_is_valid(m in matrix(6, 9)) {
        let s = snf(&m);
        prop_assert!(s.verify(&m));
        let mut product = BigInt::one();
        for i in 0..m.rows().min(m.cols()) {
            product *= &s.diagonal[i];
            prop_assert_eq!(&product, &determinantal_divisor(&m, i + 1), "i = {}", i + 1);
        }
    }

    #[test]
    fn bareiss_matches_laplace(m in square(5, 20)) {
        prop_assert_eq!(m.determinant().unwrap(), laplace(&m.to_rows()));
    }

    #[test]
    fn adjugate_identity(m in square(5, 9)) {
        let det = m.determinant().unwrap();
        let adj = m.adjugate().unwrap();
        prop_assert_eq!(&adj * &m, IntMatrix::identity(m.rows()).scaled(&det));
        prop_assert_eq!(&m * &adj, IntMatrix::identity(m.rows()).scaled(&det));
    }

    #[test]
    fn completion_has_requested_first_row(row in prop::collection::vec(-50i64..=50, 1..6)) {
        let row: Vec<BigInt> = row.into_iter().map(BigInt::from).collect();
        let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        prop_assume!(g.is_one());
        let w = unimodular_with_first_row(&row).unwrap();
        prop_assert!(w.is_unimodular());
        prop_assert_eq!(w.row(0), row.as_slice());
    }

    #[test]
    fn first_row_preserving_smith(m in square(4, 9)) {
        prop_assume!(m.rank() == m.rows());
        let g = m.row(0).iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        prop_assume!(g.is_one());
        let s = snf_first_row_preserving(&m).unwrap();
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        let id = IntMatrix::identity(m.rows());
        prop_assert_eq!(s.u.row(0), id.row(0));
        prop_assert_eq!(s.diagonal, snf(&m).diagonal);
    }

    #[test]
    fn primitive_columns_match_minor_gcd(m in matrix(4, 9)) {
        prop_assume!(m.cols() <= m.rows());
        let expected = determinantal_divisor(&m, m.cols()).is_one();
        prop_assert_eq!(m.is_primitive_columns(), expected);
    }
}

/// B with primitive trailing columns has Smith form (1, ..., 1, d) and its
/// adjugate has (1, d, ..., d).
#[test]
fn adjugate_diagonal_transfer() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64(11);
    let mut checked = 0;
    while checked < 500 {
        let k = rng.gen_range(2..=5);
        let data: Vec<BigInt> = (0..k * k).map(|_| BigInt::from(rng.gen_range(-30i64..=30))).collect();
        let b = IntMatrix::new(k, k, data).unwrap();
        let trailing = b.select(&(0..k).collect::<Vec<_>>(), &(1..k).collect::<Vec<_>>());
        let det = b.determinant().unwrap();
        if !trailing.is_primitive_columns() || det.is_zero() {
            continue;
        }
        let d = det.abs();
        let mut expect_b = vec![BigInt::one(); k];
        expect_b[k - 1] = d.clone();
        let mut expect_a = vec![d; k];
        expect_a[0] = BigInt::one();
        assert_eq!(snf(&b).diagonal, expect_b, "B = {b}");
        assert_eq!(snf(&b.adjugate().unwrap()).diagonal, expect_a, "B = {b}");
        checked += 1;
    }
}
