use proptest::prelude::*;
use vvmf::arith::{gcd, Q};
use vvmf::checks::{milgram, weil_relations};
use vvmf::cyclo::Cyc;
use vvmf::discform::{complement_and_quotient, isotropic_subgroups, orthogonal_group};
use vvmf::discriminant::DiscriminantForm;
use vvmf::heegner::{coefficient_pairing, rank_formula, HeegnerCombo};
use vvmf::lattice::{angle, from_blocks, EvenLattice};
use vvmf::mp::{word_product, Gen, MetaplecticElement};
use vvmf::mp4::{kron, WeilRep2};
use vvmf::qexp::FourierExpansion;
use vvmf::theta::theta_coeffs;
use vvmf::weil::WeilRep;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// Nondegenerate even binary forms with |det| <= 60.
fn binary() -> impl Strategy<Value = EvenLattice> {
    (-4i64..=4, -5i64..=5, -4i64..=4)
        .prop_filter("nondegenerate, small", |&(a, b, c)| {
            let d = 4 * a * c - b * b;
            d != 0 && d.abs() <= 60
        })
        .prop_map(|(a, b, c)| EvenLattice::new(vec![vec![2 * a, b], vec![b, 2 * c]]).unwrap())
}

/// Binary forms with |det| <= 12, small enough for dense degree-two matrices.
fn small_binary() -> impl Strategy<Value = EvenLattice> {
    binary().prop_filter("small group", |l| l.det().abs() <= 12)
}

fn positive_binary() -> impl Strategy<Value = EvenLattice> {
    (1i64..=4, -3i64..=3, 1i64..=4)
        .prop_filter("positive definite", |&(a, b, c)| 4 * a * c - b * b > 0)
        .prop_map(|(a, b, c)| EvenLattice::new(vec![vec![2 * a, b], vec![b, 2 * c]]).unwrap())
}

fn word() -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(prop_oneof![Just(Gen::S), Just(Gen::T), Just(Gen::Tinv)], 0..6)
}

fn sorted_q(g: &DiscriminantForm) -> Vec<Q> {
    let mut v: Vec<Q> = g.elements().map(|e| g.q(e)).collect();
    v.sort();
    v
}

fn neg_mod1(x: Q) -> Q {
    vvmf::arith::frac(-x)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn group_order_is_det(l in binary()) {
        prop_assert_eq!(l.discriminant().order() as i128, l.det().abs());
    }

    #[test]
    fn gauss_sum_matches_signature(l in binary()) {
        prop_assert!(milgram(&l));
    }

    #[test]
    fn rescaling_by_minus_one_negates_q(l in binary()) {
        let g = l.discriminant();
        let h = l.rescale(-1).unwrap().discriminant();
        let mut want: Vec<Q> = g.elements().map(|e| neg_mod1(g.q(e))).collect();
        want.sort();
        prop_assert_eq!(sorted_q(&h), want);
    }

    #[test]
    fn direct_sum_multiplies_gauss_sums(a in binary(), b in binary()) {
        let s = EvenLattice::direct_sum(&[a.clone(), b.clone()]).discriminant();
        let (ga, gb) = (a.discriminant(), b.discriminant());
        prop_assert_eq!(s.order(), ga.order() * gb.order());
        prop_assert_eq!(s.gauss_sum(), &ga.gauss_sum() * &gb.gauss_sum());
        // the q-value multiset of the sum is the sumset of the parts
        let mut want: Vec<Q> = ga.elements().flat_map(|x| gb.elements().map(move |y| (x, y))).map(|(x, y)| vvmf::arith::frac(ga.q(x) + gb.q(y))).collect();
        want.sort();
        prop_assert_eq!(sorted_q(&s), want);
    }

    #[test]
    fn weil_relations_on_random_forms(l in binary()) {
        prop_assert!(weil_relations(&l.discriminant()).is_empty());
    }

    #[test]
    fn isotropic_complements(l in binary()) {
        let g = l.discriminant();
        for h in isotropic_subgroups(&g) {
            let qt = complement_and_quotient(&g, &h);
            prop_assert_eq!(qt.perp.len() * h.order(), g.order());
            prop_assert_eq!(qt.quotient.order() * h.order() * h.order(), g.order());
        }
    }

    #[test]
    fn orthogonal_group_preserves_q(l in binary()) {
        let g = l.discriminant();
        for s in orthogonal_group(&g, 10_000).unwrap() {
            let mut seen = s.clone();
            seen.sort();
            seen.dedup();
            prop_assert_eq!(seen.len(), g.order());
            for e in g.elements() {
                prop_assert_eq!(g.q(s[e]), g.q(e));
            }
        }
    }

    #[test]
    fn theta_coefficients_count_vectors(l in positive_binary()) {
        let th = theta_coeffs(&l, None, Q::from_integer(4)).unwrap();
        prop_assert!(th.get(0, Q::from_integer(0)).is_one());
        for c in th.coeffs.values() {
            let x = c.as_rational().unwrap();
            prop_assert!(x.is_integer() && x >= Q::from_integer(0));
        }
        th.check_invariants().unwrap();
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn rho_is_a_homomorphism(l in binary(), a in word(), b in word()) {
        let w = WeilRep::new(&l.discriminant());
        let ab: Vec<Gen> = a.iter().chain(&b).cloned().collect();
        prop_assert_eq!(w.rho_word(&ab), vvmf::weil::cmat_mul(&w.rho_word(&a), &w.rho_word(&b)));
        prop_assert_eq!(w.rho(&word_product(&ab)).unwrap(), w.rho_word(&ab));
    }

    #[test]
    fn extended_action_ignores_the_factorization(l in binary(), a in word(), b in word(), alpha in 1i64..=5, g in 0usize..64) {
        let w = WeilRep::new(&l.discriminant());
        prop_assume!(gcd(alpha, w.g.level) == 1);
        let (u, v) = (word_product(&a), word_product(&b));
        let el = u.mul(&MetaplecticElement::g_alpha(alpha)).mul(&v);
        let e = w.basis_vector(g % w.dim());
        prop_assert_eq!(w.act_extended(&el, &e).unwrap(), w.act_factored(&u, alpha, &v, &e).unwrap());
        if alpha == 1 {
            prop_assert_eq!(w.act_extended(&el, &e).unwrap(), w.slash(&el, &e).unwrap());
        }
    }

    #[test]
    fn degree_two_diagonal_translations_split(l in small_binary(), b1 in -3i64..=3, b2 in -3i64..=3) {
        let r2 = WeilRep2::new(&l.discriminant());
        let w = &r2.w;
        let tp = |k: i64| w.rho(&MetaplecticElement::t_pow(k)).unwrap();
        prop_assert_eq!(r2.n([[b1, 0], [0, b2]]).unwrap(), kron(&tp(b1), &tp(b2)));
    }

    #[test]
    fn iota_is_compatible(a in word(), b in word()) {
        let g = DiscriminantForm::cyclic(3, Q::new(1, 3)).unwrap();
        let r2 = WeilRep2::new(&g);
        let (x, y) = (word_product(&a), word_product(&b));
        prop_assert_eq!(r2.iota(&x, &y).unwrap(), kron(&r2.w.rho(&x).unwrap(), &r2.w.rho(&y).unwrap()));
        let m = vvmf::mp4::Mp4Element::iota(&x, &y).unwrap();
        let z = vvmf::mp4::diag_point(num_complex::Complex64::new(0.1, 1.3), num_complex::Complex64::new(-0.2, 0.9));
        let want = x.phi(z[0][0]) * y.phi(z[1][1]);
        prop_assert!((m.phi(&z) - want).norm() < 1e-9);
    }

    #[test]
    fn rank_formula_is_a_positive_integer(g in 2i64..=200) {
        prop_assert!(rank_formula(g).unwrap() >= 1);
    }

    #[test]
    fn pairing_is_bilinear(a in -5i64..=5, b in -5i64..=5, c1 in -3i64..=3, c2 in -3i64..=3) {
        let m = from_blocks("U(1) + U(1) + <-2>").unwrap();
        let g = m.discriminant();
        let k = Q::new(5, 2);
        let mk = |s: i64| {
            let mut f = FourierExpansion::new(&g, true, k, Q::from_integer(3)).unwrap();
            for n in 1..=3 {
                f.set(0, Q::from_integer(n), Cyc::from_int(1, (s * n + 1) as _)).unwrap();
                f.set(1, Q::new(4 * n - 3, 4), Cyc::from_int(1, (s - n) as _)).unwrap();
            }
            f
        };
        let (f1, f2) = (mk(c1), mk(c2));
        let mut h1 = HeegnerCombo::new(&m).unwrap();
        h1.add_term(Q::from_integer(-1), 0, Q::from_integer(a)).unwrap();
        h1.add_term(Q::new(-1, 4), 1, Q::from_integer(b)).unwrap();
        let lin = f1.add(&f2.scale(&Cyc::from_int(1, 2))).unwrap();
        let p = |h: &HeegnerCombo, f: &FourierExpansion| coefficient_pairing(h, f).unwrap();
        prop_assert_eq!(p(&h1, &lin), &p(&h1, &f1) + &p(&h1, &f2).scale_int(2));
        let mut h2 = HeegnerCombo::new(&m).unwrap();
        h2.add_term(Q::from_integer(-2), 0, Q::from_integer(b)).unwrap();
        let mut hs = h1.clone();
        hs.add_term(Q::from_integer(-2), 0, Q::from_integer(b)).unwrap();
        prop_assert_eq!(p(&hs, &f1), &p(&h1, &f1) + &p(&h2, &f1));
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn hecke_operators_commute_and_keep_cusp_forms(m in 1i64..=4) {
        use vvmf::hecke::hecke_t;
        let f = theta_coeffs(&angle(2 * m).unwrap(), None, Q::from_integer(36)).unwrap();
        let p = Q::from_integer(1);
        let a = hecke_t(2, &hecke_t(3, &f, Q::from_integer(4)).unwrap(), p).unwrap();
        let b = hecke_t(3, &hecke_t(2, &f, Q::from_integer(9)).unwrap(), p).unwrap();
        prop_assert_eq!(a.to_text(), b.to_text());
        a.check_invariants().unwrap();
        let mut cusp = f.clone();
        cusp.coeffs.retain(|&(_, n), _| n > Q::from_integer(0));
        let t = hecke_t(2, &cusp, Q::from_integer(9)).unwrap();
        prop_assert!(t.is_cusp());
    }
}
