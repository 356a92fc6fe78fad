use std::sync::OnceLock;

use balgame::balance::{express_in_pairs, greedy_pairs, orbit_decompose, partial_color, v0_pm, PairSystem};
use balgame::game::{is_vclosed, maximal_vclosed_in};
use balgame::witness::random_vclosed;
use balgame::{
    canonical_family, enumerate_psum, exposed_normal, extreme_points, translate_witness, zonotope_vertex,
    LatticeVector, PointSet, Sign, SignAssignment,
};
use proptest::prelude::*;

fn pairs16() -> &'static PairSystem {
    static PS: OnceLock<PairSystem> = OnceLock::new();
    PS.get_or_init(|| greedy_pairs(16, 10).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_color_bound(n in 3usize..=9, mask in any::<u64>(), extra in any::<u64>()) {
        let f = canonical_family(n).unwrap();
        let vs: Vec<LatticeVector> = f
            .members()
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask ^ extra.rotate_left(*i as u32)) >> (i % 64) & 1 == 1)
            .map(|(_, v)| v.clone())
            .collect();
        prop_assume!(!vs.is_empty());
        let pc = partial_color(&vs).unwrap();
        let mut sum = LatticeVector::zeros(n);
        for (v, s) in vs.iter().zip(&pc.signs) {
            sum.add_assign_scaled(v, s.value());
        }
        prop_assert_eq!(&sum, &pc.sum);
        prop_assert!(sum.norm_inf() <= n as i64);
    }

    #[test]
    fn pair_selection_round_trip(picks in proptest::collection::vec(any::<bool>(), 150), take_w in any::<bool>()) {
        let ps = pairs16();
        let vs = ps.vectors();
        let mut target = LatticeVector::zeros(16);
        for (k, _) in ps.pairs.iter().enumerate() {
            let idx = if picks[k] { 2 * k } else { 2 * k + 1 };
            target.add_assign_scaled(&vs[idx], 1);
        }
        if take_w {
            target.add_assign_scaled(&ps.w, 1);
        }
        let chosen = express_in_pairs(&target, ps).unwrap();
        let mut got = LatticeVector::zeros(16);
        for &k in &chosen {
            got.add_assign_scaled(&vs[k], 1);
        }
        prop_assert_eq!(got, target);
        let mut sorted = chosen.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), chosen.len());
    }

    #[test]
    fn subset_identity(n in 2usize..=8, bits in any::<u128>()) {
        let f = canonical_family(n).unwrap();
        let signs: Vec<Sign> = (0..f.len())
            .map(|i| if bits >> (i % 128) & 1 == 1 { Sign::Plus } else { Sign::Minus })
            .collect();
        let sa = SignAssignment::new(&f, signs).unwrap();
        prop_assert!(sa.subset_identity_holds(&f));
    }

    #[test]
    fn maximal_subset_is_closed(pts in proptest::collection::btree_set((-3i64..=3, -3i64..=3), 0..40)) {
        let f = canonical_family(2).unwrap();
        let cand = PointSet::from_points(2, pts.into_iter().map(|(a, b)| LatticeVector::new(vec![a, b]))).unwrap();
        let safe = maximal_vclosed_in(&cand, &f);
        prop_assert!(safe.iter().all(|p| cand.contains(p)));
        prop_assert!(is_vclosed(&safe, &f).is_ok());
    }

    #[test]
    fn zonotope_vertex_in_psum(n in 2usize..=5, a in proptest::collection::vec(-7i64..=7, 5)) {
        let f = canonical_family(n).unwrap();
        let dir = LatticeVector::new(a[..n].to_vec());
        prop_assume!(f.members().iter().all(|v| v.dot(&dir) != 0));
        let p = zonotope_vertex(&f, &dir).unwrap();
        let psum = enumerate_psum(&f, 1 << 17).unwrap();
        prop_assert!(psum.contains(&p));
        prop_assert!(psum.iter().all(|u| u.dot(&dir) <= p.dot(&dir)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn witnesses_on_random_sets(seed in any::<u64>(), n in 2usize..=3) {
        let f = canonical_family(n).unwrap();
        let t = random_vclosed(&f, seed, 4096).unwrap();
        prop_assert!(is_vclosed(&t, &f).is_ok());
        for x in extreme_points(&t).unwrap() {
            if exposed_normal(&t, &x).unwrap().is_some() {
                let cert = translate_witness(&t, &f, &x).unwrap();
                prop_assert!(cert.verified);
                prop_assert!(cert.replay().unwrap().is_empty());
            }
        }
    }
}

#[test]
fn orbit_sums_vanish() {
    for n in (4..=12).step_by(2) {
        let orbits = orbit_decompose(n).unwrap();
        let total: usize = orbits.iter().map(|o| o.members.len()).sum();
        assert_eq!(total, v0_pm(n).unwrap().len());
        for o in &orbits {
            assert!(o.sum().is_zero(), "n = {n}: orbit of {} sums to {}", o.representative, o.sum());
            for m in &o.members {
                assert!(o.members.contains(&m.rotate()));
            }
            assert_eq!(o.self_negating, o.members.contains(&-&o.representative));
        }
    }
}
