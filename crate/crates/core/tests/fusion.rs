use proptest::prelude::*;
use wsubreg::admissible::*;
use wsubreg::cyclotomic::Cyc;
use wsubreg::fusion::*;
use wsubreg::numerology::vir_minimal_model;
use wsubreg::rootsystem::RootSystem;
use wsubreg::smatrix::*;

fn rs(name: &str) -> RootSystem {
    RootSystem::from_name(name, None).unwrap()
}

fn ld(name: &str, p: i64, q: i64) -> LevelData {
    LevelData::new(rs(name), p, q, Mode::Subreg).unwrap()
}

fn subregular_ring(l: &LevelData) -> (ScaledMatrix, usize, FusionRing) {
    let labels = orbit_representatives(l).unwrap();
    let s = s_subreg(l, &labels, &l.rs.rho(), None).unwrap();
    let vac = vacuum_index(l, &labels).unwrap();
    let f = verlinde(&s, vac).unwrap();
    (s, vac, f)
}

fn k_ring(name: &str, p: i64) -> FusionRing {
    let r = rs(name);
    let k = k_matrix(&r, p, None).unwrap();
    let vac = k.keys.iter().position(|x| x.iter().all(|&c| c == 0)).unwrap();
    verlinde(&k, vac).unwrap()
}

#[test]
fn a1_level_one_is_z2() {
    let f = k_ring("A1", 3);
    assert_eq!(f.n[1][1], vec![1, 0]);
    assert!(ring_isomorphic(&f, &FusionRing::cyclic(2)).is_some());
}

#[test]
fn su2_rings_match_verlinde_for_a1() {
    for k in 1..7 {
        let f = k_ring("A1", k as i64 + 2);
        let g = su2_fusion_ring(k);
        g.check().unwrap();
        assert_eq!(f.n, g.n, "level {k}");
    }
}

#[test]
fn basic_rings_satisfy_axioms() {
    FusionRing::trivial().check().unwrap();
    for m in 1..7 {
        FusionRing::cyclic(m).check().unwrap();
    }
    let f = FusionRing::cyclic(4);
    assert_eq!(ring_isomorphic(&f, &f), Some(vec![0, 1, 2, 3]));
    let perm = vec![0, 3, 1, 2];
    assert!(ring_isomorphic(&f.relabel(&perm), &f).is_some());
}

#[test]
fn tensor_with_trivial_is_unchanged() {
    let f = k_ring("A2", 5);
    let t = tensor_ring(&f, &FusionRing::trivial());
    t.check().unwrap();
    assert!(ring_isomorphic(&t, &f).is_some());
    let z2z2 = tensor_ring(&FusionRing::cyclic(2), &FusionRing::cyclic(2));
    assert!(ring_isomorphic(&z2z2, &FusionRing::cyclic(4)).is_none());
}

#[test]
fn yang_lee_is_not_z2() {
    let v = vir_minimal_model(2, 5).unwrap();
    assert!(ring_isomorphic(&v.fusion, &FusionRing::cyclic(2)).is_none());
}

#[test]
fn type_a_rings_are_cyclic() {
    for (name, p, q, m) in [("A3", 5, 3, 4), ("A5", 7, 5, 6)] {
        let (_, _, f) = subregular_ring(&ld(name, p, q));
        assert!(ring_isomorphic(&f, &FusionRing::cyclic(m)).is_some(), "{name}");
        assert!(ring_isomorphic(&f, &k_ring(name, p)).is_some(), "{name}");
    }
}

#[test]
fn d4_7_5_is_yang_lee_times_level_one() {
    let (_, _, f) = subregular_ring(&ld("D4", 7, 5));
    let yl = vir_minimal_model(2, 5).unwrap().fusion;
    let prod = tensor_ring(&yl, &k_ring("D4", 7));
    assert!(ring_isomorphic(&f, &prod).is_some());
}

#[test]
fn charge_conjugation_and_qdims() {
    for l in [ld("D4", 7, 5), ld("D5", 8, 7), ld("E6", 12, 11), ld("E6", 13, 10), ld("D5", 11, 6)] {
        let (s, vac, f) = subregular_ring(&l);
        let (perm, sign) = charge_conjugation(&s).unwrap();
        assert_eq!(sign, if s.i_power % 2 == 0 { 1 } else { -1 });
        assert_eq!(perm, f.dual);
        let qd = quantum_dimensions(&s, vac).unwrap();
        assert_eq!(qd[vac], Cyc::one(qd[vac].order()));
        check_qdim_homomorphism(&f, &qd).unwrap();
    }
}

#[test]
fn non_unitary_input_is_rejected() {
    let l = ld("D4", 6, 5);
    let labels = orbit_representatives(&l).unwrap();
    let s = s_subreg(&l, &labels, &l.rs.rho(), None).unwrap();
    let doubled = s.scale_core(&Cyc::from_int(1, 2));
    assert!(verlinde(&doubled, 0).is_err());
}

#[test]
fn dtype_rings() {
    let one = dtype_conjecture_ring(1);
    one.check().unwrap();
    assert!(ring_isomorphic(&one, &FusionRing::cyclic(2)).is_some());
    let two = dtype_conjecture_ring(2);
    assert_eq!(two.len(), 5);
    // The displayed bound r − i − j leaves [r−1] ⊠ [r−1] empty on labels 0..r−1.
    assert!(two.check().is_err());
    assert!(ring_isomorphic(&su2_fusion_ring(4), &su2_fusion_ring(4)).is_some());
}

#[test]
fn d_type_c_factors() {
    for (name, q, level) in [("D5", 6, 1), ("D8", 12, 4)] {
        let r = rs(name);
        let c = c_matrix(&r, q, &r.rho(), false, None).unwrap();
        assert_eq!(c.dim(), r.rank - 3);
        let s = normalize_unitary(c.core.clone(), c.keys.clone()).unwrap();
        let x0 = r.x0().to_ints().unwrap();
        let vac = (0..s.dim()).find(|&i| s.keys[i] == x0).unwrap();
        let f = verlinde(&s, vac).unwrap();
        assert!(ring_isomorphic(&f, &su2_fusion_ring(level)).is_some(), "{name}");
    }
}

#[test]
fn json_export() {
    let f = FusionRing::cyclic(3);
    let v = f.to_json();
    assert_eq!(v["N"].as_array().unwrap().len(), 3);
    assert_eq!(v["dual"], serde_json::json!([0, 2, 1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabelled_rings_are_isomorphic(m in 2usize..8, seed in 0u64..1000) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let f = su2_fusion_ring(m);
        let mut rest: Vec<usize> = (1..=m).collect();
        rest.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let perm: Vec<usize> = std::iter::once(0).chain(rest).collect();
        let g = f.relabel(&perm);
        g.check().unwrap();
        let sigma = ring_isomorphic(&g, &f).unwrap();
        for i in 0..=m {
            for j in 0..=m {
                for k in 0..=m {
                    prop_assert_eq!(g.n[i][j][k], f.n[sigma[i]][sigma[j]][sigma[k]]);
                }
            }
        }
    }

    #[test]
    fn tensor_products_are_fusion_rings(a in 1usize..4, b in 1usize..4) {
        let t = tensor_ring(&su2_fusion_ring(a), &FusionRing::cyclic(b + 1));
        prop_assert!(t.check().is_ok());
    }
}

#[test]
fn non_self_dual_vacuum_is_moved_by_charge_conjugation() {
    let l = ld("A4", 7, 4);
    let labels = orbit_representatives(&l).unwrap();
    let s = s_subreg(&l, &labels, &l.rs.rho(), None).unwrap();
    let vac = vacuum_index(&l, &labels).unwrap();
    let (perm, _) = charge_conjugation(&s).unwrap();
    assert_ne!(perm[vac], vac);
    assert_eq!(labels[perm[vac]].h, labels[vac].h);
    assert!(verlinde(&s, vac).is_err());
}
