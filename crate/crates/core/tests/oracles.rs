use cbnorm::channels::{choi_from_stinespring, ChoiMatrix};
use cbnorm::linalg::{fidelity_direct, HermitianMatrix};
use cbnorm::oracles::{
    commuting_fidelity_oracle, cp_diamond_oracle, is_completely_positive, rank_one_ascent, witness_value, AscentConfig,
};
use cbnorm::programs::diamond_norm;
use cbnorm::random;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn ascent_closes_on_the_transpose_map() {
    for n in [2, 3] {
        let j = ChoiMatrix::transpose_map(n);
        let lower = rank_one_ascent(&j, &AscentConfig::default()).lower_bound;
        let sdp = diamond_norm(&j.into(), 1e-8).unwrap().value;
        assert!(lower <= sdp + 1e-6 && sdp - lower < 1e-5, "{n}: {lower} vs {sdp}");
    }
}

#[test]
fn cp_oracle_matches_sdp_on_cp_maps() {
    let mut g = rng(21);
    for _ in 0..4 {
        let j = random::cp_choi_matrix(&mut g, 2, 3);
        assert!(is_completely_positive(&j));
        let exact = cp_diamond_oracle(&j).unwrap();
        let sdp = diamond_norm(&j.into(), 1e-8).unwrap().value;
        assert!((exact - sdp).abs() < 1e-6 * (1.0 + exact));
    }
}

#[test]
fn commuting_oracle_agrees_with_direct_fidelity() {
    let mut g = rng(22);
    for n in 1..6 {
        let d = random::density(&mut g, n);
        let p: Vec<f64> = (0..n).map(|i| d.as_matrix()[(i, i)].re).collect();
        let e = random::density(&mut g, n);
        let q: Vec<f64> = (0..n).map(|i| e.as_matrix()[(i, i)].re).collect();
        let direct =
            fidelity_direct(&HermitianMatrix::from_real_diagonal(&p), &HermitianMatrix::from_real_diagonal(&q)).unwrap();
        assert!((commuting_fidelity_oracle(&p, &q).unwrap() - direct).abs() < 1e-10);
    }
}

#[test]
fn seeds_change_restarts_but_not_reproducibility() {
    let j = random::choi_matrix(&mut rng(23), 2, 2);
    let a = rank_one_ascent(&j, &AscentConfig { restarts: 3, ..AscentConfig::with_seed(1) });
    let b = rank_one_ascent(&j, &AscentConfig { restarts: 3, ..AscentConfig::with_seed(1) });
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn ascent_is_a_lower_bound(seed in any::<u64>(), n in 1usize..3, m in 1usize..3) {
        let j = random::choi_matrix(&mut rng(seed), n, m);
        let cfg = AscentConfig { restarts: 4, ..AscentConfig::with_seed(seed) };
        let res = rank_one_ascent(&j, &cfg);
        let sdp = diamond_norm(&j.clone().into(), 1e-8).unwrap();
        prop_assert!(res.lower_bound <= sdp.certificate.value_interval.1 + 1e-6 * (1.0 + res.lower_bound));
        prop_assert!((witness_value(&j, &res.u, &res.v).unwrap() - res.lower_bound).abs() < 1e-10);
    }

    #[test]
    fn channels_have_cp_value_one(seed in any::<u64>(), k in 1usize..4) {
        let ch = random::channel(&mut rng(seed), 2, 2, k.max(1));
        let j = choi_from_stinespring(&ch);
        prop_assert!((cp_diamond_oracle(&j).unwrap() - 1.0).abs() < 1e-10);
    }
}
