use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use wordwidth::decomposition::{elementary_product, steinberg_conjugate, FactorCertificate};
use wordwidth::finite::{closure, enumerate_group, power_product, value_set, width, FiniteGroupTable, SymSet};
use wordwidth::matrix::{elementary, random_elementary_product, CongruenceLevel};
use wordwidth::padic::{newton_lift, phi_map, PolyMapDescriptor, TruncatedPadicMatrix};
use wordwidth::words::{Letter, Word};

fn tables() -> &'static [Arc<FiniteGroupTable>] {
    static T: OnceLock<Vec<Arc<FiniteGroupTable>>> = OnceLock::new();
    T.get_or_init(|| [2u64, 3, 4, 5].iter().map(|&m| Arc::new(enumerate_group(2, m).unwrap())).collect())
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((1usize..=2, any::<bool>()), 1..6)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, i)| Letter::new(g, i))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn value_sets_are_normal_and_symmetric(w in word(), t in 0usize..4) {
        let v = value_set(&w, &tables()[t]).unwrap();
        prop_assert!(v.is_symmetric());
        prop_assert!(v.is_conjugation_invariant());
    }

    #[test]
    fn powers_grow_until_the_width(w in word(), t in 0usize..4) {
        let table = &tables()[t];
        let v = value_set(&w, table).unwrap();
        let c = width(&w, table).unwrap().exact().unwrap();
        for k in 0..=c {
            prop_assert!(power_product(&v, k).is_subset(&power_product(&v, k + 1)));
        }
        prop_assert_eq!(power_product(&v, c), closure(&v));
        if c > 0 {
            prop_assert!(power_product(&v, c - 1) != closure(&v));
        }
    }

    #[test]
    fn closure_is_a_subgroup(xs in prop::collection::vec(0u32..120, 1..4)) {
        let table = &tables()[3];
        let c = closure(&SymSet::from_ordinals(table, xs));
        for a in c.iter().take(20) {
            for b in c.iter().take(20) {
                prop_assert!(c.contains(table.product(a, b)));
            }
        }
    }

    #[test]
    fn steinberg_rewrites_are_exact(
        n in 3usize..=5,
        pairs in (1usize..=5, 1usize..=5, 1usize..=5, 1usize..=5),
        a in -1_000_000i64..=1_000_000,
        b in -1_000_000i64..=1_000_000,
    ) {
        let (r, s, i, j) = pairs;
        prop_assume!(r <= n && s <= n && i <= n && j <= n && r != s && i != j && !(j == r && i == s));
        let out = steinberg_conjugate(n, r, s, b, i, j, a).unwrap();
        let lhs = elementary_product(n, &out).unwrap();
        let rhs = &(&elementary(n, r, s, b).unwrap() * &elementary(n, i, j, a).unwrap()) * &elementary(n, r, s, -b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn square_roots_lift(p in prop::sample::select(vec![3u64, 5, 7, 11]), x in 1u64..50, precision in 2u32..7) {
        prop_assume!(x % p != 0);
        let f = PolyMapDescriptor::parse("x1^2", Some(1)).unwrap();
        let m = p.pow(precision);
        let b = x * x % m;
        let lift = newton_lift(&f, &[x % p], &[b], p, 0, precision).unwrap();
        prop_assert_eq!(f.eval_mod(&lift.point, m), vec![b]);
        prop_assert_eq!(lift.point[0] % p, x % p);
        for (v, bound) in lift.valuations.iter().zip(&lift.bounds) {
            prop_assert!(v >= bound);
        }
    }

    #[test]
    fn phi_matches_conjugation(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let table = Arc::new(enumerate_group(2, 9).unwrap());
        let mut pick = || TruncatedPadicMatrix::new(table.element(rng.gen_range(0..table.len() as u32)), 3, 2).unwrap();
        let (g, h, x, y) = (pick(), pick(), pick(), pick());
        let f = phi_map(&g, &h).unwrap();
        let pt: Vec<u64> = x.matrix().residues().iter().chain(y.matrix().residues()).copied().collect();
        let direct = g.conjugate_by(&x).unwrap().mul(&h.conjugate_by(&y).unwrap()).unwrap();
        prop_assert_eq!(f.eval_mod(&pt, 9), direct.matrix().residues().to_vec());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certificates_survive_text(seed in 0u64..10_000, qv in 1i64..=3, len in 1usize..10) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let q = CongruenceLevel::new(qv).unwrap();
        let g = random_elementary_product(6, &q, len, &mut rng);
        if let wordwidth::decomposition::Lu3uOutcome::Certified(cert) = wordwidth::decomposition::factor_lu3u(&g, &q).unwrap() {
            let parsed = FactorCertificate::from_text(&cert.to_text()).unwrap();
            prop_assert!(parsed.verify().passed());
        }
    }
}
