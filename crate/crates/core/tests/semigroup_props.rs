use num_bigint::BigInt;
use proptest::prelude::*;
use projquot::semigroup::{minimalize, NumericalSemigroup};

/// Membership over [0, bound) by the recurrence t in S iff t - g in S for some g.
fn closure(gens: &[u64], bound: usize) -> Vec<bool> {
    let mut t = vec![false; bound];
    t[0] = true;
    for x in 1..bound {
        t[x] = gens.iter().any(|&g| g as usize <= x && t[x - g as usize]);
    }
    t
}

fn gens_strategy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(2u64..40, 1..5)
}

fn coprime_gens() -> impl Strategy<Value = Vec<u64>> {
    gens_strategy().prop_map(|mut g| {
        // force coprimality without biasing small cases away
        g.push(g[0] + 1);
        g
    })
}

proptest! {
    #[test]
    fn table_matches_closure(gens in gens_strategy()) {
        let s = NumericalSemigroup::from_u64s(&gens).unwrap();
        let oracle = closure(&gens, 400);
        for (t, &member) in oracle.iter().enumerate() {
            prop_assert_eq!(s.contains_u64(t as u64), member, "t = {}", t);
        }
    }

    #[test]
    fn closed_under_addition(gens in coprime_gens()) {
        let s = NumericalSemigroup::from_u64s(&gens).unwrap();
        let members = s.members_below(150);
        for &x in &members {
            for &y in &members {
                prop_assert!(s.contains_u64(x + y));
            }
        }
    }

    #[test]
    fn conductor_is_exact(gens in coprime_gens()) {
        let s = NumericalSemigroup::from_u64s(&gens).unwrap();
        let c: u64 = s.conductor().try_into().unwrap();
        let oracle = closure(&gens, (c + 200) as usize);
        prop_assert!(oracle[c as usize..].iter().all(|&m| m));
        if c > 0 {
            prop_assert!(!oracle[c as usize - 1]);
        }
        prop_assert_eq!(s.frobenius().unwrap().map(|f| f + 1), (c > 0).then(|| BigInt::from(c)));
    }

    #[test]
    fn minimal_generators_are_independent(gens in gens_strategy()) {
        let s = NumericalSemigroup::from_u64s(&gens).unwrap();
        let mins: Vec<u64> = s.minimal_generators().iter().map(|g| g.try_into().unwrap()).collect();
        prop_assert_eq!(&mins, &minimalize(&gens));
        for (i, &g) in mins.iter().enumerate() {
            let others: Vec<u64> = mins.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            prop_assert!(!closure(&others, g as usize + 1)[g as usize]);
        }
    }

    #[test]
    fn idempotent(gens in gens_strategy()) {
        let s = NumericalSemigroup::from_u64s(&gens).unwrap();
        prop_assert_eq!(NumericalSemigroup::from_generators(&s.minimal_generators()).unwrap(), s);
    }

    #[test]
    fn quotient_is_monotone(gens in coprime_gens(), d in 1u64..8) {
        let s = NumericalSemigroup::from_u64s(&gens).unwrap();
        let q = s.quotient_u64(d).unwrap();
        for t in 0..300u64 {
            if s.contains_u64(t) {
                prop_assert!(q.contains_u64(t));
            }
            prop_assert_eq!(q.contains_u64(t), s.contains_u64(d * t));
        }
    }

    #[test]
    fn nested_quotients(gens in gens_strategy(), c in 1u64..6, d in 1u64..6) {
        let s = NumericalSemigroup::from_u64s(&gens).unwrap();
        let lhs = s.quotient_u64(c).unwrap().quotient_u64(d).unwrap();
        prop_assert_eq!(lhs, s.quotient_u64(c * d).unwrap());
    }

    #[test]
    fn coprime_sum_formula(a in coprime_gens(), b in coprime_gens(), c in 1u64..6, d in 1u64..6) {
        prop_assume!(num_integer::gcd(c, d) == 1);
        let s = NumericalSemigroup::from_u64s(&a).unwrap();
        let t = NumericalSemigroup::from_u64s(&b).unwrap();
        let lhs = s.quotient_u64(c).unwrap().sum(&t.quotient_u64(d).unwrap()).unwrap();
        let combined: Vec<u64> = a.iter().map(|x| x * d).chain(b.iter().map(|x| x * c)).collect();
        let rhs = NumericalSemigroup::from_u64s(&combined).unwrap().quotient_u64(c * d).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn run_rule(gens in coprime_gens()) {
        let s = NumericalSemigroup::from_u64s(&gens).unwrap();
        let m: u64 = s.multiplicity().try_into().unwrap();
        let oracle = closure(&gens, 2000);
        // the first run of m members starts at the conductor and never breaks
        let start = (0..2000 - m as usize).find(|&c| oracle[c..c + m as usize].iter().all(|&x| x)).unwrap();
        prop_assert_eq!(BigInt::from(start), s.conductor());
        prop_assert!(oracle[start..].iter().all(|&x| x));
    }
}

#[test]
fn spec_membership_fixtures() {
    let s = NumericalSemigroup::from_u64s(&[101, 102, 110, 111]).unwrap();
    for t in [194, 210, 214, 230] {
        assert!(!s.contains_u64(t));
    }
    assert!(s.contains_u64(212));
    let n = NumericalSemigroup::naturals();
    assert_eq!(NumericalSemigroup::from_u64s(&[3, 5]).unwrap().sum(&n).unwrap(), n);
}
