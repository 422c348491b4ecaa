use exact_algebra::{rat, ArtinLocalRing};
use gl2_rep::{
    ad_pi_twist, build_vk, decompose_with, det_power, generalized_eigenspace, Character, Gen,
    UEnvElement,
};
use proptest::prelude::*;

fn q() -> ArtinLocalRing {
    ArtinLocalRing::rationals()
}

fn small_uenv() -> impl Strategy<Value = UEnvElement> {
    proptest::collection::vec(
        (
            proptest::array::uniform4(0u32..=2u32),
            -3i64..=3i64,
        ),
        1..4,
    )
    .prop_map(|terms| {
        let mut e = UEnvElement::zero();
        for (exp, c) in terms {
            e = e.add(&UEnvElement::monomial(exp, rat(c, 1)));
        }
        e
    })
}

fn word() -> impl Strategy<Value = Vec<Gen>> {
    proptest::collection::vec(
        prop_oneof![
            Just(Gen::UMinus),
            Just(Gen::H),
            Just(Gen::Z),
            Just(Gen::UPlus)
        ],
        0..5,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn straightening_agrees_with_matrix_action(w in word()) {
        // The operators on a fixed module multiply as honest matrices and
        // know nothing about PBW rewriting, so they are an independent
        // check on the straightening rules.
        let base = q();
        let m = build_vk(2, &base);
        let elem = gl2_rep::pbw_normal_form(&[(rat(1, 1), w.clone())]);
        let via_normal_form = elem.act(&m);
        let mut direct = exact_algebra::AMat::identity(&base, m.rank());
        for g in &w {
            let op = match g {
                Gen::UMinus => m.op_uminus().clone(),
                Gen::H => m.op_h(),
                Gen::Z => m.op_z(),
                Gen::UPlus => m.op_uplus().clone(),
            };
            direct = direct.mul(&op);
        }
        prop_assert_eq!(via_normal_form, direct);
    }

    #[test]
    fn products_act_as_composites(x in small_uenv(), y in small_uenv()) {
        let base = q();
        let m = build_vk(3, &base);
        let lhs = x.mul(&y).act(&m);
        let rhs = x.act(&m).mul(&y.act(&m));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twist_is_multiplicative(x in small_uenv(), y in small_uenv()) {
        let p = rat(5, 1);
        let lhs = ad_pi_twist(&x.mul(&y), &p);
        let rhs = ad_pi_twist(&x, &p).mul(&ad_pi_twist(&y, &p));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_modules_satisfy_brackets(l1 in 0usize..=3, l2 in 0usize..=3, s in -2i64..=2) {
        let base = q();
        let m = build_vk(l1, &base).tensor(&build_vk(l2, &base)).tensor(&det_power(s, &base));
        prop_assert!(m.check_brackets().is_ok());
        prop_assert!(m.casimir_is_central());
        let tw = m.pi_twist(&rat(5, 1));
        prop_assert!(tw.check_brackets().is_ok());
        prop_assert_eq!(tw.op_casimir(), m.op_casimir());
    }

    #[test]
    fn tensor_decomposition_is_exhaustive(l1 in 0usize..=3, l2 in 0usize..=3) {
        let base = q();
        let m = build_vk(l1, &base).tensor(&build_vk(l2, &base));
        let z = (l1 + l2) as i64;
        let lo = l1.abs_diff(l2);
        let candidates: Vec<Character> = (lo..=l1 + l2)
            .step_by(2)
            .map(|l| {
                Character::new(
                    base.from_i64(z),
                    base.from_i64((l * l + 2 * l) as i64),
                )
            })
            .collect();
        let parts = decompose_with(&m, &candidates).unwrap();
        let total: usize = parts.iter().map(|(_, c, _, _)| c.rank()).sum();
        prop_assert_eq!(total, m.rank());
        // Each component rank is a multiple of the irreducible dimension.
        for ((_, comp, _, _), l) in parts.iter().zip((lo..=l1 + l2).step_by(2)) {
            prop_assert_eq!(comp.rank() % (l + 1), 0);
            prop_assert_eq!(comp.rank() / (l + 1), 1, "tensor of two strings is multiplicity free");
        }
    }

    #[test]
    fn eigenspace_inclusion_is_split(l in 0usize..=3) {
        let base = q();
        let m = build_vk(l, &base).tensor(&build_vk(1, &base));
        let chi = Character::new(
            base.from_i64(l as i64 + 1),
            base.from_i64(((l + 1) * (l + 3)) as i64),
        );
        let (comp, incl) = generalized_eigenspace(&m, &chi).unwrap();
        prop_assert_eq!(comp.rank(), l + 2, "top constituent of the tensor");
        prop_assert_eq!(incl.residue_qmat().rank(), l + 2);
        // The eigenspace carries the restricted action: inclusion
        // intertwines the operators exactly.
        prop_assert_eq!(m.op_uplus().mul(&incl), incl.mul(comp.op_uplus()));
        prop_assert_eq!(m.op_casimir().mul(&incl), incl.mul(&comp.op_casimir()));
    }
}

#[test]
fn casimir_constant_matches_weight_formula_through_rank_nine() {
    let base = q();
    for l in 0..=8usize {
        let v = build_vk(l, &base);
        let c = v.op_casimir();
        let expected = exact_algebra::AMat::identity(&base, l + 1)
            .scale_rational(&rat((l * l + 2 * l) as i64, 1));
        assert_eq!(c, expected, "casimir on the rank-{} string", l + 1);
    }
}

#[test]
fn quadratic_casimir_value_is_invariant_under_twist_family() {
    let base = q();
    let v = build_vk(2, &base);
    for p in [rat(2, 1), rat(5, 1), rat(7, 3), -rat(1, 2)] {
        let tw = v.pi_twist(&p);
        assert_eq!(tw.op_casimir(), v.op_casimir());
        assert_eq!(tw.op_z(), v.op_z());
    }
}

#[test]
fn uenv_twist_matches_module_twist_action() {
    // Acting by a twisted element on the original module agrees with
    // acting by the element on the twisted module.
    let base = q();
    let p = rat(5, 1);
    let m = build_vk(2, &base);
    let tw = m.pi_twist(&p);
    for x in [
        UEnvElement::uplus(),
        UEnvElement::uminus(),
        UEnvElement::aplus(),
        UEnvElement::casimir(),
        UEnvElement::uplus().mul(&UEnvElement::uminus()),
    ] {
        assert_eq!(ad_pi_twist(&x, &p).act(&m), x.act(&tw));
    }
}
