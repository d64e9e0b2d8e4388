mod common;

use std::collections::HashMap;
use std::sync::OnceLock;

use laminar::circle::{ccw, chords_linked, circular_order, Angle, Chord, DigitStream, Precision, RatAngle};
use laminar::dendrite::{build_dendrite, DendriteApprox};
use laminar::lamination::Class;
use laminar::markov::{
    exact_periods, random_interval_map, sh_set_contains, sharkovskiy_less, Rat, SharkType,
};
use laminar::Exec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn angle_below(max_den: u64) -> impl Strategy<Value = RatAngle> {
    (1u64..max_den).prop_flat_map(|den| (0..den).prop_map(move |num| RatAngle::new(num, den).unwrap()))
}

fn angle() -> impl Strategy<Value = RatAngle> {
    angle_below(500)
}

fn dendrite() -> &'static DendriteApprox {
    static D: OnceLock<DendriteApprox> = OnceLock::new();
    D.get_or_init(|| build_dendrite(&common::misiurewicz(6)).unwrap())
}

proptest! {
    #[test]
    fn sigma_on_digit_streams_matches_rationals(a in angle(), d in 2u32..5) {
        let digits = DigitStream::from_rational(a, d).unwrap();
        // streams whose period does not fit a u64 numerator cannot be read back
        prop_assume!(digits.to_rational().is_ok());
        let stream = Angle::Periodic(digits);
        let image = stream.sigma(d).unwrap();
        prop_assert_eq!(image.to_rational().unwrap(), a.sigma(d));
        prop_assert_eq!(stream.sigma_n(d, 7).unwrap().to_rational().unwrap(), a.sigma_n(d, 7));
    }

    #[test]
    fn linkage_is_symmetric(a in angle(), b in angle(), c in angle(), e in angle()) {
        let p = Chord::new(a, b);
        let q = Chord::new(c, e);
        let pq = chords_linked(&p, &q, Precision::default()).unwrap();
        prop_assert_eq!(pq, chords_linked(&q, &p, Precision::default()).unwrap());
        let flipped = Chord::new(b, a);
        prop_assert_eq!(pq, chords_linked(&flipped, &q, Precision::default()).unwrap());
    }

    #[test]
    fn circular_order_is_rotation_invariant(a in angle(), b in angle(), c in angle(), r in angle()) {
        let rot = |x: RatAngle| {
            let den = x.denom() * r.denom();
            RatAngle::new((x.numer() * r.denom() + r.numer() * x.denom()) % den, den).unwrap()
        };
        let here = ccw(a, b, c);
        prop_assert_eq!(here, ccw(b, c, a));
        prop_assert_eq!(here, ccw(rot(a), rot(b), rot(c)));
        prop_assert_eq!(here, circular_order(&a, &b, &c, Precision::default()).unwrap());
        if a != b && b != c && c != a {
            prop_assert_ne!(here, ccw(a, c, b));
        }
    }

    #[test]
    // small denominators keep the class period, an lcm of angle periods, below the orbit bound
    fn orbit_portrait_matches_iteration(angles in prop::collection::vec(angle_below(64), 1..4), d in 2u32..4) {
        let c = Class::new(angles);
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        let portrait = c.orbit_portrait(d).unwrap();
        let mut seen: HashMap<Class, usize> = HashMap::new();
        let mut cur = c.clone();
        let mut i = 0;
        let (pre, per) = loop {
            if let Some(&j) = seen.get(&cur) {
                break (j, i - j);
            }
            seen.insert(cur.clone(), i);
            cur = cur.image(d);
            i += 1;
        };
        prop_assert_eq!((portrait.preperiod, portrait.period), (pre, per));
    }

    #[test]
    fn tree_and_hole_separation_agree(x in 0usize..1000, y in 0usize..1000, z in 0usize..1000) {
        let d = dendrite();
        let n = d.len();
        let (x, y, z) = (x % n, y % n, z % n);
        prop_assume!(x != y && x != z && y != z);
        prop_assert_eq!(d.separates(x, y, z), d.separates_by_holes(x, y, z));
    }

    #[test]
    fn composition_is_iteration(seed in any::<u64>(), n in 3usize..6, k in 0i64..=64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_interval_map(&mut rng, n, 2);
        let f2 = f.compose(&f, Exec::Sequential).unwrap();
        let x = Rat::new(k.into(), 64.into()) * Rat::from_integer((n as i64 - 1).into());
        let twice = f.eval_coordinate(&f.eval_coordinate(&x).unwrap()).unwrap();
        prop_assert_eq!(f2.eval_coordinate(&x).unwrap(), twice);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_period_sets_are_down_sets(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_interval_map(&mut rng, n, 3);
        let ps = exact_periods(&f, 8).unwrap();
        prop_assert!(ps.is_down_set(), "{:?}", ps);
    }
}

#[test]
fn sharkovskiy_is_a_strict_total_order() {
    let mut all: Vec<SharkType> = (1..=1000).map(SharkType::Finite).collect();
    all.push(SharkType::TwoInfinity);
    let raw = |t: SharkType| match t {
        SharkType::Finite(n) => Some(n),
        SharkType::TwoInfinity => None,
    };
    // a tournament is transitive exactly when its out-degrees are 0, 1, ..., n - 1
    let mut wins = Vec::with_capacity(all.len());
    for &m in &all {
        let mut count = 0;
        for &n in &all {
            let less = sharkovskiy_less(m, n);
            assert_eq!(less, common::precedes(raw(m), raw(n)), "{m} vs {n}");
            if m == n {
                assert!(!less, "{m} precedes itself");
            } else {
                assert_ne!(less, sharkovskiy_less(n, m), "{m} and {n} are not comparable once");
            }
            count += less as usize;
        }
        wins.push(count);
    }
    wins.sort_unstable();
    assert_eq!(wins, (0..all.len()).collect::<Vec<_>>());
    for &k in &all {
        for n in 1..=64u64 {
            let expected = SharkType::Finite(n) == k || common::precedes(raw(k), Some(n));
            assert_eq!(sh_set_contains(k, n), expected, "{n} in Sh({k})");
        }
    }
}
