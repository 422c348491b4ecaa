//! The universal enveloping algebra of gl2 in PBW normal form.
//!
//! Basis monomials are ordered words (u-)^a (h)^b (z)^c (u+)^d, where
//! h = a+ - a- and z = a+ + a- span the diagonal torus. Products are
//! straightened with the defining brackets [h, u+] = 2u+, [h, u-] = -2u-,
//! [u+, u-] = h, and z central.

use std::collections::BTreeMap;
use std::fmt;

use exact_algebra::{AMat, Rational};
use num_traits::{One, Zero};

use crate::module::Gl2Module;

/// Generators in PBW order; the discriminant of each variant is its height.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gen {
    UMinus = 0,
    H = 1,
    Z = 2,
    UPlus = 3,
}

/// Bracket [x, y] of two generators as a scalar multiple of one generator
/// (gl2 is small enough that every such bracket is a monomial).
fn gen_bracket(x: Gen, y: Gen) -> Option<(Rational, Gen)> {
    use Gen::*;
    match (x, y) {
        (UPlus, UMinus) => Some((Rational::one(), H)),
        (UMinus, UPlus) => Some((-Rational::one(), H)),
        (H, UPlus) => Some((Rational::from_integer(2.into()), UPlus)),
        (UPlus, H) => Some((Rational::from_integer((-2).into()), UPlus)),
        (H, UMinus) => Some((Rational::from_integer((-2).into()), UMinus)),
        (UMinus, H) => Some((Rational::from_integer(2.into()), UMinus)),
        _ => None,
    }
}

/// Element of U(gl2) as a rational combination of PBW monomials, keyed by
/// the exponent quadruple (u- power, h power, z power, u+ power).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UEnvElement {
    terms: BTreeMap<[u32; 4], Rational>,
}

impl UEnvElement {
    pub fn zero() -> Self {
        UEnvElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        UEnvElement::monomial([0, 0, 0, 0], Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UEnvElement::monomial([0, 0, 0, 0], c)
    }

    pub fn monomial(exp: [u32; 4], coeff: Rational) -> Self {
        let mut e = UEnvElement::zero();
        e.add_term(exp, coeff);
        e
    }

    pub fn gen(g: Gen) -> Self {
        let mut exp = [0u32; 4];
        exp[g as usize] = 1;
        UEnvElement::monomial(exp, Rational::one())
    }

    pub fn uplus() -> Self {
        UEnvElement::gen(Gen::UPlus)
    }

    pub fn uminus() -> Self {
        UEnvElement::gen(Gen::UMinus)
    }

    pub fn h() -> Self {
        UEnvElement::gen(Gen::H)
    }

    pub fn z() -> Self {
        UEnvElement::gen(Gen::Z)
    }

    /// a+ = (z + h)/2, the upper-left matrix unit of the torus.
    pub fn aplus() -> Self {
        let half = Rational::new(1.into(), 2.into());
        UEnvElement::z().add(&UEnvElement::h()).scale(&half)
    }

    /// a- = (z - h)/2, the lower-right matrix unit of the torus.
    pub fn aminus() -> Self {
        let half = Rational::new(1.into(), 2.into());
        UEnvElement::z().sub(&UEnvElement::h()).scale(&half)
    }

    /// The Casimir element h^2 - 2h + 4 u+ u-, in normal form.
    pub fn casimir() -> Self {
        let h = UEnvElement::h();
        let two = Rational::from_integer(2.into());
        let four = Rational::from_integer(4.into());
        h.mul(&h)
            .sub(&h.scale(&two))
            .add(&UEnvElement::uplus().mul(&UEnvElement::uminus()).scale(&four))
    }

    fn add_term(&mut self, exp: [u32; 4], coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&[u32; 4], &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: [u32; 4]) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = UEnvElement::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = UEnvElement::zero();
        for (e, t) in &self.terms {
            out.add_term(*e, t * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = UEnvElement::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut word = expand_exponents(ea);
                word.extend(expand_exponents(eb));
                let straightened = straighten(word, ca * cb);
                out = out.add(&straightened);
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = UEnvElement::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// The matrix by which this element acts on a module, multiplying
    /// operator matrices in PBW order.
    pub fn act(&self, m: &Gl2Module) -> AMat {
        let ring = m.base();
        let n = m.rank();
        let ops =
            [m.op_uminus().clone(), m.op_h(), m.op_z(), m.op_uplus().clone()];
        let mut out = AMat::zero(ring, n, n);
        for (e, c) in &self.terms {
            let mut acc = AMat::identity(ring, n);
            for (k, op) in ops.iter().enumerate() {
                for _ in 0..e[k] {
                    acc = acc.mul(op);
                }
            }
            out = out.add(&acc.scale_rational(c));
        }
        out
    }
}

impl fmt::Display for UEnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["u-", "h", "z", "u+"];
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (k, &p) in e.iter().enumerate() {
                if p == 1 {
                    write!(f, "*{}", names[k])?;
                } else if p > 1 {
                    write!(f, "*{}^{}", names[k], p)?;
                }
            }
        }
        Ok(())
    }
}

fn expand_exponents(e: &[u32; 4]) -> Vec<Gen> {
    let gens = [Gen::UMinus, Gen::H, Gen::Z, Gen::UPlus];
    let mut word = Vec::new();
    for (k, &p) in e.iter().enumerate() {
        for _ in 0..p {
            word.push(gens[k]);
        }
    }
    word
}

/// Straighten one word into PBW normal form by adjacent transpositions,
/// x y = y x + [x, y]; each rewrite either removes an inversion at fixed
/// length or shortens the word, so the worklist terminates.
fn straighten(word: Vec<Gen>, coeff: Rational) -> UEnvElement {
    let mut out = UEnvElement::zero();
    let mut work = vec![(word, coeff)];
    while let Some((w, c)) = work.pop() {
        if c.is_zero() {
            continue;
        }
        match w.windows(2).position(|p| p[0] > p[1]) {
            None => {
                let mut exp = [0u32; 4];
                for g in &w {
                    exp[*g as usize] += 1;
                }
                out.add_term(exp, c);
            }
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                if let Some((bc, bg)) = gen_bracket(w[i], w[i + 1]) {
                    let mut shorter = w.clone();
                    shorter.remove(i + 1);
                    shorter[i] = bg;
                    work.push((shorter, &c * &bc));
                }
                work.push((swapped, c));
            }
        }
    }
    out
}

/// Normal form of a sum of words in the generators.
pub fn pbw_normal_form(words: &[(Rational, Vec<Gen>)]) -> UEnvElement {
    let mut out = UEnvElement::zero();
    for (c, w) in words {
        out = out.add(&straighten(w.clone(), c.clone()));
    }
    out
}

/// The algebra automorphism induced by conjugating by [[0,1],[p,0]]:
/// u+ and u- trade places up to the factor p, a+ and a- swap, so h
/// changes sign and z is fixed. Fixes the center pointwise.
pub fn ad_pi_twist(x: &UEnvElement, p: &Rational) -> UEnvElement {
    assert!(!p.is_zero(), "twist parameter must be invertible");
    let mut out = UEnvElement::zero();
    for (e, c) in x.iter_terms() {
        // (u-)^a h^b z^c (u+)^d maps to (p^-1 u+)^a (-h)^b z^c (p u-)^d.
        let mut word = Vec::new();
        for _ in 0..e[0] {
            word.push(Gen::UPlus);
        }
        for _ in 0..e[1] {
            word.push(Gen::H);
        }
        for _ in 0..e[2] {
            word.push(Gen::Z);
        }
        for _ in 0..e[3] {
            word.push(Gen::UMinus);
        }
        let sign = if e[1] % 2 == 0 { Rational::one() } else { -Rational::one() };
        let mut factor = c * &sign;
        for _ in 0..e[3] {
            factor *= p;
        }
        for _ in 0..e[0] {
            factor /= p;
        }
        out = out.add(&straighten(word, factor));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_algebra::rat;

    #[test]
    fn uplus_uminus_straightens_to_uminus_uplus_plus_h() {
        let lhs = UEnvElement::uplus().mul(&UEnvElement::uminus());
        let mut expected = UEnvElement::monomial([1, 0, 0, 1], Rational::one());
        expected = expected.add(&UEnvElement::h());
        assert_eq!(lhs, expected, "u+ u- = u- u+ + h");
    }

    #[test]
    fn casimir_has_two_presentations() {
        // Substituting 4 u+ u- = 4 u- u+ + 4h in h^2 - 2h + 4 u+ u- gives
        // h^2 + 2h + 4 u- u+; both sides are built independently.
        let four = rat(4, 1);
        let two = rat(2, 1);
        let h = UEnvElement::h();
        let other = h
            .mul(&h)
            .add(&h.scale(&two))
            .add(&UEnvElement::uminus().mul(&UEnvElement::uplus()).scale(&four));
        assert_eq!(UEnvElement::casimir(), other);
    }

    #[test]
    fn casimir_is_central() {
        let c = UEnvElement::casimir();
        for g in [UEnvElement::uplus(), UEnvElement::uminus(), UEnvElement::h(), UEnvElement::z()]
        {
            assert!(c.commutator(&g).is_zero(), "casimir commutes with {g}");
        }
    }

    #[test]
    fn torus_units_recover_h_and_z() {
        assert_eq!(UEnvElement::aplus().add(&UEnvElement::aminus()), UEnvElement::z());
        assert_eq!(UEnvElement::aplus().sub(&UEnvElement::aminus()), UEnvElement::h());
        assert!(UEnvElement::aplus().commutator(&UEnvElement::aminus()).is_zero());
    }

    #[test]
    fn bracket_relations_of_matrix_units() {
        let ap = UEnvElement::aplus();
        let am = UEnvElement::aminus();
        let up = UEnvElement::uplus();
        let um = UEnvElement::uminus();
        assert_eq!(ap.commutator(&up), up);
        assert_eq!(am.commutator(&up), up.neg());
        assert_eq!(ap.commutator(&um), um.neg());
        assert_eq!(am.commutator(&um), um);
        assert_eq!(up.commutator(&um), UEnvElement::h());
    }

    #[test]
    fn straightening_matches_a_hand_reduction() {
        use Gen::*;
        // By hand: u+ h u- = u- h u+ + h^2 - 2h - 4 u- u+.
        let a = pbw_normal_form(&[(rat(1, 1), vec![UPlus, H, UMinus])]);
        let b = pbw_normal_form(&[(rat(1, 1), vec![UMinus, H, UPlus])]);
        let h = UEnvElement::h();
        let correction = h
            .mul(&h)
            .sub(&h.scale(&rat(2, 1)))
            .sub(&UEnvElement::uminus().mul(&UEnvElement::uplus()).scale(&rat(4, 1)));
        assert_eq!(a, b.add(&correction));
    }

    #[test]
    fn twist_fixes_the_center_and_scales_nilpotents() {
        let p = rat(5, 1);
        assert_eq!(ad_pi_twist(&UEnvElement::z(), &p), UEnvElement::z());
        assert_eq!(ad_pi_twist(&UEnvElement::casimir(), &p), UEnvElement::casimir());
        assert_eq!(ad_pi_twist(&UEnvElement::uplus(), &p), UEnvElement::uminus().scale(&p));
        assert_eq!(
            ad_pi_twist(&UEnvElement::uminus(), &p),
            UEnvElement::uplus().scale(&rat(1, 5))
        );
        assert_eq!(ad_pi_twist(&UEnvElement::aplus(), &p), UEnvElement::aminus());
    }

    #[test]
    fn twist_is_an_algebra_map() {
        let p = rat(7, 1);
        let samples = [
            UEnvElement::uplus(),
            UEnvElement::uminus().mul(&UEnvElement::h()),
            UEnvElement::casimir(),
            UEnvElement::aplus().mul(&UEnvElement::uminus()),
        ];
        for x in &samples {
            for y in &samples {
                let lhs = ad_pi_twist(&x.mul(y), &p);
                let rhs = ad_pi_twist(x, &p).mul(&ad_pi_twist(y, &p));
                assert_eq!(lhs, rhs, "twist of product equals product of twists");
            }
        }
    }

    #[test]
    fn twist_is_an_involution_up_to_p_squared() {
        // Applying the twist twice multiplies u+ by p/p = 1.
        let p = rat(3, 1);
        let x = UEnvElement::uplus().mul(&UEnvElement::uminus()).add(&UEnvElement::h());
        assert_eq!(ad_pi_twist(&ad_pi_twist(&x, &p), &p), x);
    }
}
