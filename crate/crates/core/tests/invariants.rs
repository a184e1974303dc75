use std::sync::OnceLock;

use proptest::prelude::*;

use diocheck::analytic_eval::{theta, SmoothingKernel};
use diocheck::pair_calculus::{a_process, b_process, eval_word, ExponentPair, Word};
use diocheck::param_audit::{almost_prime_order, audit_all, c_max, Theorem};
use diocheck::prime_tables::{build_tables, PrimeTable};
use diocheck::rosser_sieve::{build_weights, sandwich_check, RosserWeights};
use diocheck::solver::{Constraint, SearchConfig, Searcher};
use diocheck::Rational;

fn table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| build_tables(20_000).unwrap())
}

fn weights() -> &'static [RosserWeights] {
    static W: OnceLock<Vec<RosserWeights>> = OnceLock::new();
    W.get_or_init(|| vec![build_weights(100, 10).unwrap(), build_weights(10_000, 50).unwrap()])
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Rational strictly inside `(1, 1787/1502)`.
fn c_strategy() -> impl Strategy<Value = Rational> {
    (1i64..1_000_000).prop_map(|k| rat(1, 1) + (c_max() - rat(1, 1)) * rat(k, 1_000_000))
}

fn pair_strategy() -> impl Strategy<Value = ExponentPair<Rational>> {
    (0i64..=500, 500i64..=1000).prop_map(|(k, l)| ExponentPair::new(rat(k, 1000), rat(l, 1000)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn processes_keep_pairs_admissible(p in pair_strategy()) {
        prop_assert!(a_process(&p).is_admissible());
        let b = b_process(&p).unwrap();
        prop_assert!(b.is_admissible());
        prop_assert_eq!(b_process(&b).unwrap(), p);
    }

    #[test]
    fn words_round_trip(letters in prop::collection::vec(any::<bool>(), 0..12)) {
        let text: String = letters.iter().map(|&a| if a { 'A' } else { 'B' }).collect();
        let w: Word = text.parse().unwrap();
        let again: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(&again, &w);
        let seed = ExponentPair::<Rational>::trivial();
        prop_assert_eq!(eval_word(&w, &seed).unwrap(), eval_word(&again, &seed).unwrap());
    }

    #[test]
    fn order_is_monotone_in_c(a in c_strategy(), b in c_strategy()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for t in [Theorem::Binary, Theorem::Quaternary] {
            prop_assert!(almost_prime_order(&lo, t).unwrap() <= almost_prime_order(&hi, t).unwrap());
        }
        prop_assert!(audit_all(&lo).unwrap().passed());
    }

    #[test]
    fn sandwich_holds(n in 1u64..5_000_000, which in 0usize..2) {
        let (lo, mid, hi) = sandwich_check(n, &weights()[which]);
        prop_assert!(lo <= i64::from(mid) && i64::from(mid) <= hi, "n = {n}: {lo} {mid} {hi}");
    }

    #[test]
    fn kernel_transform_obeys_bound(a in 0.2f64..2.0, frac in 0.05f64..0.9, r in 1u32..6, x in -50.0f64..50.0) {
        let k = SmoothingKernel::new(a, a * frac, r).unwrap();
        prop_assert!(theta(&k, x).abs() <= k.bound(x) * (1.0 + 1e-12));
    }

    #[test]
    fn counts_grow_with_window(r_frac in 0.0f64..1.0, d1 in 0.01f64..2.0, d2 in 0.01f64..2.0, z in 3.0f64..40.0) {
        let x = 20_000.0;
        let (lo, hi) = (2.0 * (0.5f64 * x).powf(1.1), 2.0 * x.powf(1.1));
        let r = lo + (hi - lo) * r_frac;
        let (small, big) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let count = |delta: f64, constraint: Constraint| {
            let cfg = SearchConfig::new(1.1, delta, 0.5, x).with_constraint(constraint);
            Searcher::new(&cfg, table()).unwrap().count_binary(r).0
        };
        prop_assert!(count(small, Constraint::None) <= count(big, Constraint::None));
        prop_assert!(count(big, Constraint::ZRough(z)) <= count(big, Constraint::None));
        prop_assert!(count(big, Constraint::OmegaLe(2)) <= count(big, Constraint::OmegaLe(3)));
    }
}
