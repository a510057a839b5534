use num_integer::Integer;
use wsubreg::admissible::*;
use wsubreg::fusion::{ring_isomorphic, verlinde, FusionRing};
use wsubreg::numerology::*;
use wsubreg::reference::subregular_denominators;
use wsubreg::rootsystem::{Family, RootSystem};
use wsubreg::smatrix::s_subreg;
use wsubreg::Q;

fn rs(name: &str) -> RootSystem {
    RootSystem::from_name(name, None).unwrap()
}

fn ld(name: &str, p: i64, q: i64) -> LevelData {
    LevelData::new(rs(name), p, q, Mode::Subreg).unwrap()
}

fn q(a: i64, b: i64) -> Q {
    Q::new(a, b)
}

#[test]
fn central_charge_examples() {
    assert_eq!(central_charge(&ld("E6", 12, 11)), q(-350, 11));
    assert_eq!(central_charge(&ld("D4", 6, 5)), q(-22, 5));
    for n in 2..7 {
        let name = format!("A{n}");
        assert_eq!(central_charge(&ld(&name, n as i64 + 1, n as i64)), q(0, 1), "{name}");
    }
}

#[test]
fn central_charge_matches_closed_forms() {
    let mut systems: Vec<RootSystem> = (1..8).map(|n| RootSystem::new(Family::A, n, None).unwrap()).collect();
    systems.extend((4..9).map(|n| RootSystem::new(Family::D, n, None).unwrap()));
    systems.extend((6..9).map(|n| RootSystem::new(Family::E, n, None).unwrap()));
    let mut checked = 0;
    for r in systems {
        let letter = r.family.to_string().chars().next().unwrap();
        for qq in subregular_denominators(letter, r.rank).unwrap() {
            for p in r.h_dual..r.h_dual + 6 {
                if p.gcd(&qq) != 1 {
                    continue;
                }
                let l = LevelData::new(r.clone(), p, qq, Mode::Subreg).unwrap();
                assert_eq!(central_charge(&l), central_charge_closed_form(&l).unwrap(), "{} {p}/{qq}", r.name());
                checked += 1;
            }
        }
    }
    assert!(checked > 80);
}

#[test]
fn closed_form_for_type_a_with_other_stars() {
    for (n, star) in [(4usize, 1usize), (5, 2), (6, 3), (6, 1), (7, 2)] {
        let r = RootSystem::new(Family::A, n, Some(star)).unwrap();
        let p = (n as i64 + 1..).find(|p| p.gcd(&(n as i64)) == 1).unwrap() + n as i64;
        let l = LevelData::new(r, p, n as i64, Mode::Subreg).unwrap();
        assert_eq!(central_charge(&l), central_charge_closed_form(&l).unwrap());
    }
}

#[test]
fn effective_central_charge_and_growth() {
    for (name, p, qq, ceff) in [("E6", 12, 11, q(10, 11)), ("E7", 19, 16, q(9, 8)), ("A3", 4, 3, q(0, 1)), ("D5", 8, 7, q(4, 7))] {
        let l = ld(name, p, qq);
        let labels = orbit_representatives(&l).unwrap();
        assert_eq!(effective_central_charge(&l, &labels), ceff, "{name}");
        assert_eq!(asymptotic_growth(&l), ceff, "{name}");
    }
}

#[test]
fn growth_is_bounded_by_effective_central_charge() {
    for l in [ld("D4", 7, 5), ld("D5", 11, 6), ld("E6", 13, 10), ld("E6", 13, 9), ld("A4", 7, 4)] {
        let labels = orbit_representatives(&l).unwrap();
        let s = s_subreg(&l, &labels, &l.rs.rho(), None).unwrap();
        let zeros = s.core.iter().flatten().any(|x| x.is_zero());
        let g = asymptotic_growth(&l);
        let ceff = effective_central_charge(&l, &labels);
        if zeros {
            assert!(g <= ceff);
        } else {
            assert_eq!(g, ceff, "{} {}/{}", l.rs.name(), l.p, l.q);
        }
    }
}

#[test]
fn conformal_dimensions_of_e6() {
    let l = ld("E6", 12, 11);
    let mut got: Vec<Q> = orbit_representatives(&l).unwrap().iter().map(|x| x.h).collect();
    let mut want: Vec<Q> = [0i64, 1, 2, 3, 4, 5, 5].iter().map(|&i| q(i * (3 * i - 19), 22)).collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn virasoro_data() {
    let v = vir_minimal_model(2, 5).unwrap();
    assert_eq!(v.c, q(-22, 5));
    let mut h = v.h.clone();
    h.sort();
    assert_eq!(h, vec![q(-1, 5), q(0, 1)]);
    let v = vir_minimal_model(3, 22).unwrap();
    let integral: Vec<_> = (0..v.irreps.len()).filter(|&i| v.h[i].is_integer() && v.h[i] >= q(1, 1)).collect();
    assert_eq!(integral.len(), 1);
    assert_eq!(v.irreps[integral[0]], (21, 1));
    assert_eq!(v.h[integral[0]], q(5, 1));
    for (a, b) in [(2, 3), (2, 5), (3, 4), (3, 5), (2, 9), (4, 5), (5, 6), (2, 13)] {
        let v = vir_minimal_model(a, b).unwrap();
        assert_eq!(v.irreps.len() as i64, (a - 1) * (b - 1) / 2);
        assert_eq!(v.h[v.vacuum()], q(0, 1));
        v.s.check_unitary().unwrap();
        v.fusion.check().unwrap();
    }
    assert!(vir_minimal_model(4, 6).is_err());
    assert!(ring_isomorphic(&vir_minimal_model(2, 3).unwrap().fusion, &FusionRing::trivial()).is_some());
    // Ising: σ ⊠ σ = 1 ⊕ ε.
    let ising = vir_minimal_model(3, 4).unwrap();
    let s = ising.s.clone();
    assert!(verlinde(&s, ising.vacuum()).is_ok());
}

#[test]
fn virasoro_asymptotic_dimension_matches_w_side() {
    for (name, p, qq, a, b) in [("D5", 8, 7, 2, 7), ("D4", 6, 5, 2, 5), ("D6", 10, 9, 2, 9), ("D6", 11, 8, 3, 4)] {
        let l = ld(name, p, qq);
        let v = vir_minimal_model(a, b).unwrap();
        let diff = (asymptotic_dimension(&l) - vir_asymptotic_dimension(&v, 1, 1)).abs();
        assert!(diff < 1e-9, "{name}: {diff}");
    }
}

#[test]
fn singular_vector_weights() {
    assert_eq!(singular_vector_conformal_weight(&ld("E6", 12, 11)), q(3, 1));
    assert_eq!(singular_vector_conformal_weight(&ld("A3", 5, 3)), q(2, 1));
    assert_eq!(singular_vector_conformal_weight(&ld("D4", 6, 5)), q(2, 1));
}

#[test]
fn type_a_self_duality() {
    for (p, qq) in [(5, 3), (7, 4), (9, 5)] {
        assert!(typea_selfdual(4, p, qq, 2));
    }
    assert!(typea_selfdual(3, 3, 2, 1));
    assert!(!typea_selfdual(3, 5, 3, 1));
}

#[test]
fn subregular_self_duality() {
    for (name, p, qq) in [("A3", 5, 3), ("A5", 7, 5), ("A4", 5, 4), ("D4", 6, 5), ("E6", 12, 11)] {
        assert_eq!(subreg_self_dual(&ld(name, p, qq)), Some(true), "{name} {p}/{qq}");
    }
    assert_eq!(subreg_self_dual(&ld("A4", 7, 4)), Some(false));
    assert_eq!(subreg_self_dual(&ld("A2", 5, 2)), Some(false));
}

#[test]
fn sporadic_reports() {
    let l = ld("D4", 6, 5);
    let labels = orbit_representatives(&l).unwrap();
    let rec = sporadic_report(&l, &labels, None).unwrap();
    assert_eq!(rec.identification, Identification::Minimal { p: 2, q: 5 });
    let l = ld("E6", 12, 11);
    let labels = orbit_representatives(&l).unwrap();
    let rec = sporadic_report(&l, &labels, None).unwrap();
    assert_eq!(rec.identification, Identification::Extension { p: 3, q: 22, r: 21, s: 1, multiplicity: 1 });
    assert_eq!(rec.label(), "Vir_{3,22}+L(21,1)");
    let l = ld("E7", 19, 16);
    let labels = orbit_representatives(&l).unwrap();
    let rec = sporadic_report(&l, &labels, None).unwrap();
    assert_eq!(rec.identification, Identification::Unidentified);
    let l = ld("A3", 4, 3);
    let labels = orbit_representatives(&l).unwrap();
    assert_eq!(sporadic_report(&l, &labels, None).unwrap().identification, Identification::Minimal { p: 2, q: 3 });
}
