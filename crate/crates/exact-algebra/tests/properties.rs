use exact_algebra::*;
use proptest::prelude::*;

fn preset_rings() -> Vec<ArtinLocalRing> {
    let e = ["e"];
    let zh = ["z", "h"];
    let t = ["t"];
    vec![
        artin_ring_build(&["x"], &[MPoly::parse("x", &["x"], MonomialOrder::DegRevLex).unwrap()])
            .unwrap(),
        artin_ring_build(&e, &[MPoly::parse("e^2", &e, MonomialOrder::DegRevLex).unwrap()])
            .unwrap(),
        artin_ring_build(
            &zh,
            &[
                MPoly::parse("z^2", &zh, MonomialOrder::DegRevLex).unwrap(),
                MPoly::parse("z*h", &zh, MonomialOrder::DegRevLex).unwrap(),
                MPoly::parse("h^2", &zh, MonomialOrder::DegRevLex).unwrap(),
            ],
        )
        .unwrap(),
        artin_ring_build(&t, &[MPoly::parse("t^4", &t, MonomialOrder::DegRevLex).unwrap()])
            .unwrap(),
    ]
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}


proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // v = sqrt(u) satisfies v^2 = u exactly, and squaring then rooting any
    // unipotent w returns w (uniqueness of the root congruent to 1).
    #[test]
    fn sqrt_squares_back(seed in 0usize..4, coords in proptest::collection::vec(small_rational(), 4)) {
        let ring = preset_rings()[seed].clone();
        let mut c = coords;
        c.truncate(ring.dim());
        c.resize(ring.dim(), rint(0));
        c[0] = rint(1);
        let w = ring.elem(c);
        let u = w.mul(&w);
        let v = sqrt_one_plus_nilpotent(&u).unwrap();
        prop_assert_eq!(v.mul(&v), u);
        prop_assert_eq!(v, w);
    }

    // Hensel: exact factorization, congruent to the residue input, within
    // the quadratic iteration bound.
    #[test]
    fn hensel_recovers_perturbed_factors(
        seed in 0usize..4,
        q_shift in proptest::collection::vec(small_rational(), 4),
        s_shift in proptest::collection::vec(small_rational(), 4),
        r1 in -4i64..=4,
        r2 in -4i64..=4,
    ) {
        prop_assume!(r1 != r2);
        let ring = preset_rings()[seed].clone();
        let dim = ring.dim();
        // Monic linear factors T - r1 - n1, T - r2 - n2 with nilpotent tails.
        let nil = |shift: &[Rational]| {
            let mut coords = vec![rint(0); dim];
            for (i, v) in shift.iter().take(dim.saturating_sub(1)).enumerate() {
                coords[i + 1] = v.clone();
            }
            ring.elem(coords)
        };
        let a = ring.from_rational(&rint(r1)).add(&nil(&q_shift));
        let b = ring.from_rational(&rint(r2)).add(&nil(&s_shift));
        let q_true = UnivarPoly::from_coeffs(&ring, vec![a.neg(), ring.one()]);
        let s_true = UnivarPoly::from_coeffs(&ring, vec![b.neg(), ring.one()]);
        let p = q_true.mul(&s_true);
        let q0 = UnivarPoly::from_residue(&ring, &[rint(-r1), rint(1)]);
        let s0 = UnivarPoly::from_residue(&ring, &[rint(-r2), rint(1)]);
        let h = hensel_factor_detailed(&p, &q0, &s0).unwrap();
        prop_assert_eq!(h.q.mul(&h.s), p.clone());
        // Uniqueness of the lift pins the factors themselves.
        prop_assert_eq!(h.q, q_true);
        prop_assert_eq!(h.s, s_true);
        let bound = ring.nilpotency_index().next_power_of_two().trailing_zeros() as usize + 1;
        prop_assert!(h.iterations <= bound, "iterations {} > bound {}", h.iterations, bound);
    }

    // nilpotency_order against brute-force powering up to the dimension
    // bound exponent.
    #[test]
    fn nilpotency_matches_brute_force(
        seed in 0usize..4,
        entries in proptest::collection::vec(small_rational(), 16),
    ) {
        let ring = preset_rings()[seed].clone();
        let dim = ring.dim();
        // Strictly upper-triangular rational part plus nilpotent diagonal:
        // guaranteed nilpotent, order varies.
        let n = 2usize;
        let mut m = AMat::zero(&ring, n, n);
        let mut it = entries.into_iter();
        for i in 0..n {
            for j in 0..n {
                if j > i {
                    m.set(i, j, ring.from_rational(&it.next().unwrap()));
                } else {
                    let mut coords = vec![rint(0); dim];
                    for k in 1..dim {
                        coords[k] = it.next().unwrap();
                    }
                    m.set(i, j, ring.elem(coords));
                }
            }
        }
        let order = nilpotency_order(&m);
        let cap = n * ring.nilpotency_index() + 1;
        let mut acc = AMat::identity(&ring, n);
        let mut brute = None;
        for k in 1..=cap {
            acc = acc.mul(&m);
            if acc.is_zero() {
                brute = Some(k);
                break;
            }
        }
        prop_assert_eq!(order, brute);
    }

    // Normal form vanishes exactly on explicit ideal combinations.
    #[test]
    fn normal_form_kills_combinations(
        c1 in proptest::collection::vec((0u32..3, 0u32..3, small_rational()), 1..4),
        c2 in proptest::collection::vec((0u32..3, 0u32..3, small_rational()), 1..4),
    ) {
        let vars = ["x", "y"];
        let gens = [
            MPoly::parse("x^2 - y", &vars, MonomialOrder::DegRevLex).unwrap(),
            MPoly::parse("x*y - 1", &vars, MonomialOrder::DegRevLex).unwrap(),
        ];
        let gb = buchberger(&gens);
        let mk = |spec: &[(u32, u32, Rational)]| {
            let mut p = MPoly::zero(&vars, MonomialOrder::DegRevLex);
            for (ex, ey, c) in spec {
                p.add_term(vec![*ex, *ey], c.clone());
            }
            p
        };
        let member = gens[0].mul(&mk(&c1)).add(&gens[1].mul(&mk(&c2)));
        prop_assert!(normal_form(&member, &gb).is_zero());
    }

    // Syzygy generators are killed by M, and random combinations of
    // certified kernel elements stay inside the generated submodule.
    #[test]
    fn syzygy_combinations_stay_in_kernel(
        a in proptest::collection::vec((0u32..2, 0u32..2, small_rational()), 1..3),
        b in proptest::collection::vec((0u32..2, 0u32..2, small_rational()), 1..3),
    ) {
        let vars = ["x", "y"];
        let parse = |s: &str| MPoly::parse(s, &vars, MonomialOrder::DegRevLex).unwrap();
        let m = PolyMat::from_rows(vec![
            vec![parse("x"), parse("y"), parse("0")],
            vec![parse("0"), parse("x"), parse("y")],
        ]);
        let ker = kernel_syzygies(&m, &[]);
        prop_assert!(!ker.is_empty());
        for g in &ker {
            let col = PolyMat::from_rows(g.0.iter().map(|q| vec![q.clone()]).collect());
            prop_assert!(m.mul(&col).is_zero());
        }
        let mk = |spec: &[(u32, u32, Rational)]| {
            let mut p = MPoly::zero(&vars, MonomialOrder::DegRevLex);
            for (ex, ey, c) in spec {
                p.add_term(vec![*ex, *ey], c.clone());
            }
            p
        };
        // Random module combination of the first two generators (or twice
        // the first if only one exists).
        let g0 = &ker[0];
        let g1 = ker.get(1).unwrap_or(g0);
        let combo = ModVec(
            g0.0
                .iter()
                .zip(&g1.0)
                .map(|(p0, p1)| p0.mul(&mk(&a)).add(&p1.mul(&mk(&b))))
                .collect(),
        );
        prop_assert!(module_member(&combo, &ker, &[]));
    }
}

#[test]
fn preset_rings_build() {
    for ring in preset_rings() {
        assert!(ring.dim() >= 1);
        // Multiplication via the table agrees with polynomial reduction on
        // random-ish products of generators.
        let gens: Vec<RingElem> = ring.generators().iter().map(|g| ring.gen(g)).collect();
        for g in &gens {
            let sq = g.mul(g);
            let direct = {
                let names: Vec<&str> = ring.generators().iter().map(|s| s.as_str()).collect();
                let mut p = MPoly::zero(&names, MonomialOrder::DegRevLex);
                // g^2 as a polynomial
                let mut exp = vec![0u32; names.len()];
                let idx = ring.generators().iter().position(|n| {
                    ring.gen(n) == *g
                }).unwrap();
                exp[idx] = 2;
                p.add_term(exp, rint(1));
                ring.from_mpoly(&p)
            };
            assert_eq!(sq, direct);
        }
    }
}
