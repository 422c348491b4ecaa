use crate::artin::{ArtinLocalRing, RingElem};
use crate::error::AlgebraError;
use crate::linalg::QMat;
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::fmt;

/// Univariate polynomial with coefficients in an Artinian local ring.
/// Coefficient i is the coefficient of T^i; the vector never ends in zero.
#[derive(Clone, PartialEq, Eq)]
pub struct UnivarPoly {
    pub ring: ArtinLocalRing,
    coeffs: Vec<RingElem>,
}

impl UnivarPoly {
    pub fn zero(ring: &ArtinLocalRing) -> Self {
        UnivarPoly { ring: ring.clone(), coeffs: Vec::new() }
    }

    pub fn from_coeffs(ring: &ArtinLocalRing, mut coeffs: Vec<RingElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivarPoly { ring: ring.clone(), coeffs }
    }

    pub fn constant(c: &RingElem) -> Self {
        UnivarPoly::from_coeffs(&c.ring.clone(), vec![c.clone()])
    }

    /// c * T^deg.
    pub fn monomial(ring: &ArtinLocalRing, deg: usize, c: &RingElem) -> Self {
        let mut coeffs = vec![ring.zero(); deg + 1];
        coeffs[deg] = c.clone();
        UnivarPoly::from_coeffs(ring, coeffs)
    }

    pub fn var(ring: &ArtinLocalRing) -> Self {
        UnivarPoly::monomial(ring, 1, &ring.one())
    }

    pub fn from_residue(ring: &ArtinLocalRing, coeffs: &[Rational]) -> Self {
        UnivarPoly::from_coeffs(ring, coeffs.iter().map(|c| ring.from_rational(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> RingElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&RingElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| *c == self.ring.one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        UnivarPoly::from_coeffs(&self.ring, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        UnivarPoly::from_coeffs(&self.ring, coeffs)
    }

    pub fn neg(&self) -> Self {
        UnivarPoly::from_coeffs(&self.ring, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UnivarPoly::zero(&self.ring);
        }
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UnivarPoly::from_coeffs(&self.ring, coeffs)
    }

    pub fn scale(&self, c: &RingElem) -> Self {
        UnivarPoly::from_coeffs(&self.ring, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Quotient and remainder by a monic divisor; exact over any
    /// commutative ring.
    pub fn divmod(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "division requires a monic divisor");
        let d = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quo: Vec<RingElem> = Vec::new();
        while rem.len() > d {
            let lead = rem.last().unwrap().clone();
            let shift = rem.len() - 1 - d;
            quo.push(lead.clone());
            for i in 0..=d {
                let sub = divisor.coeffs[i].mul(&lead);
                rem[shift + i] = rem[shift + i].sub(&sub);
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        quo.reverse();
        (UnivarPoly::from_coeffs(&self.ring, quo), UnivarPoly::from_coeffs(&self.ring, rem))
    }

    pub fn eval(&self, x: &RingElem) -> RingElem {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// P(T + c).
    pub fn shift(&self, c: &RingElem) -> Self {
        let t_plus_c = UnivarPoly::from_coeffs(&self.ring, vec![c.clone(), self.ring.one()]);
        let mut acc = UnivarPoly::zero(&self.ring);
        for coeff in self.coeffs.iter().rev() {
            acc = acc.mul(&t_plus_c).add(&UnivarPoly::constant(coeff));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UnivarPoly::zero(&self.ring);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
            .collect();
        UnivarPoly::from_coeffs(&self.ring, coeffs)
    }

    /// Coefficients of the image in Q[T] under the residue map.
    pub fn residue_coeffs(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.coeffs.iter().map(|c| c.residue()).collect();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    /// For a monic quadratic T^2 - g1*T + g0: the linear symbol g1.
    pub fn gamma1(&self) -> RingElem {
        assert!(self.is_monic() && self.degree() == Some(2), "gamma symbols need a monic quadratic");
        self.coeff(1).neg()
    }

    /// For a monic quadratic T^2 - g1*T + g0: the constant symbol g0.
    pub fn gamma0(&self) -> RingElem {
        assert!(self.is_monic() && self.degree() == Some(2), "gamma symbols need a monic quadratic");
        self.coeff(0)
    }
}

impl fmt::Display for UnivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*T"),
                _ => format!("({c})*T^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UnivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Helpers over Q[T], coefficient vectors with no trailing zeros.

fn qp_trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn qp_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qp_trim(out)
}

fn qp_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let get = |v: &[Rational], i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
    qp_trim((0..n).map(|i| get(a, i) - get(b, i)).collect())
}

fn qp_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = qp_trim(a.to_vec());
    let d = b.len() - 1;
    let lead = b.last().unwrap();
    if rem.len() <= d {
        return (Vec::new(), rem);
    }
    let mut quo = vec![Rational::zero(); rem.len() - d];
    while rem.len() > d {
        let c = rem.last().unwrap() / lead;
        let shift = rem.len() - 1 - d;
        quo[shift] = c.clone();
        for i in 0..=d {
            let v = &rem[shift + i] - &(&b[i] * &c);
            rem[shift + i] = v;
        }
        rem = qp_trim(rem);
    }
    (qp_trim(quo), rem)
}

/// Resultant of two rational polynomials via the Sylvester determinant.
/// Degenerate degrees follow the usual conventions: Res(c, g) = c^{deg g}.
pub fn resultant_q(f: &[Rational], g: &[Rational]) -> Rational {
    let f = qp_trim(f.to_vec());
    let g = qp_trim(g.to_vec());
    assert!(!f.is_empty() && !g.is_empty(), "resultant with the zero polynomial");
    let m = f.len() - 1;
    let n = g.len() - 1;
    if m == 0 && n == 0 {
        return Rational::one();
    }
    if m == 0 {
        let mut acc = Rational::one();
        for _ in 0..n {
            acc *= &f[0];
        }
        return acc;
    }
    if n == 0 {
        let mut acc = Rational::one();
        for _ in 0..m {
            acc *= &g[0];
        }
        return acc;
    }
    let size = m + n;
    let mat = QMat::from_fn(size, size, |i, j| {
        if i < n {
            // row of f coefficients, descending, shifted right by i
            let k = m as isize - (j as isize - i as isize);
            if (0..=m as isize).contains(&k) { f[k as usize].clone() } else { Rational::zero() }
        } else {
            let r = i - n;
            let k = n as isize - (j as isize - r as isize);
            if (0..=n as isize).contains(&k) { g[k as usize].clone() } else { Rational::zero() }
        }
    });
    mat.det()
}

/// Extended Euclid over Q[T]: returns (s, t) with s*f + t*g = 1 for coprime
/// f, g, with deg s < deg g and deg t < deg f.
fn bezout_q(f: &[Rational], g: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (f.to_vec(), g.to_vec());
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = qp_divmod(&r0, &r1);
        let next_s = qp_sub(&s0, &qp_mul(&q, &s1));
        let next_t = qp_sub(&t0, &qp_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, next_s);
        t0 = std::mem::replace(&mut t1, next_t);
    }
    assert_eq!(r0.len(), 1, "inputs are not coprime");
    let c = r0[0].clone();
    let s: Vec<Rational> = s0.iter().map(|x| x / &c).collect();
    let t: Vec<Rational> = t0.iter().map(|x| x / &c).collect();
    // Normalize degrees: s := s mod g, absorbing the quotient into t, so
    // that deg s < deg g and then automatically deg t < deg f.
    let (quo, s_norm) = qp_divmod(&s, g);
    let t_norm = qp_add(&t, &qp_mul(&quo, f));
    (s_norm, t_norm)
}

fn qp_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let get = |v: &[Rational], i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
    qp_trim((0..n).map(|i| get(a, i) + get(b, i)).collect())
}

/// Result of a Hensel factorization, with the quadratic-iteration count for
/// bound checks.
#[derive(Clone, Debug)]
pub struct HenselFactorization {
    pub q: UnivarPoly,
    pub s: UnivarPoly,
    pub iterations: usize,
}

/// Lift the coprime monic residue factorization P = Q0 * S0 (mod nilradical)
/// to an exact factorization P = Q * S with Q = Q0 and S = S0 mod the
/// nilradical; the lift with these reductions is unique. Quadratic Newton
/// iteration on the Bezout data; the iteration count never exceeds
/// ceil(log2(nilpotency index)) + 1.
pub fn hensel_factor(
    p: &UnivarPoly,
    q0: &UnivarPoly,
    s0: &UnivarPoly,
) -> Result<(UnivarPoly, UnivarPoly), AlgebraError> {
    hensel_factor_detailed(p, q0, s0).map(|h| (h.q, h.s))
}

pub fn hensel_factor_detailed(
    p: &UnivarPoly,
    q0: &UnivarPoly,
    s0: &UnivarPoly,
) -> Result<HenselFactorization, AlgebraError> {
    assert!(p.is_monic() && q0.is_monic() && s0.is_monic(), "hensel lifting needs monic inputs");
    let ring = &p.ring;
    let pr = p.residue_coeffs();
    let qr = q0.residue_coeffs();
    let sr = s0.residue_coeffs();
    if qp_sub(&pr, &qp_mul(&qr, &sr)) != Vec::<Rational>::new() {
        return Err(AlgebraError::NotCongruent);
    }
    if resultant_q(&qr, &sr).is_zero() {
        return Err(AlgebraError::NotCoprime);
    }
    let (sv, tv) = bezout_q(&qr, &sr);
    let mut s_lift = UnivarPoly::from_residue(ring, &sv);
    let mut t_lift = UnivarPoly::from_residue(ring, &tv);
    let mut g = q0.clone();
    let mut h = s0.clone();
    let bound = ring.nilpotency_index().next_power_of_two().trailing_zeros() as usize + 1;
    let mut iterations = 0usize;
    loop {
        let e = p.sub(&g.mul(&h));
        if e.is_zero() {
            break;
        }
        iterations += 1;
        assert!(iterations <= bound, "hensel iteration exceeded its quadratic bound");
        // g*h correction: s*g + t*h = 1 mod current error level.
        let se = s_lift.mul(&e);
        let (qq, rr) = se.divmod(&h);
        g = g.add(&t_lift.mul(&e)).add(&qq.mul(&g));
        h = h.add(&rr);
        // Bezout correction to keep the iteration quadratic.
        let b = s_lift.mul(&g).add(&t_lift.mul(&h)).sub(&UnivarPoly::constant(&ring.one()));
        let sb = s_lift.mul(&b);
        let (cc, dd) = sb.divmod(&h);
        s_lift = s_lift.sub(&dd);
        t_lift = t_lift.sub(&t_lift.mul(&b)).sub(&cc.mul(&g));
    }
    // h stayed monic throughout; recover the cofactor by exact division.
    let (q_final, rem) = p.divmod(&h);
    assert!(rem.is_zero() && q_final.is_monic(), "lift lost exactness");
    assert_eq!(q_final.residue_coeffs(), qr, "cofactor residue drifted");
    assert_eq!(h.residue_coeffs(), sr, "factor residue drifted");
    Ok(HenselFactorization { q: q_final, s: h, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::artin_ring_build;
    use crate::mpoly::{MPoly, MonomialOrder};
    use crate::rational::{rat, rint};

    fn ring_eps() -> ArtinLocalRing {
        let vars = ["e"];
        artin_ring_build(&vars, &[MPoly::parse("e^2", &vars, MonomialOrder::DegRevLex).unwrap()])
            .unwrap()
    }

    fn field_q() -> ArtinLocalRing {
        let vars = ["x"];
        artin_ring_build(&vars, &[MPoly::parse("x", &vars, MonomialOrder::DegRevLex).unwrap()])
            .unwrap()
    }

    #[test]
    fn divmod_and_eval() {
        let q = field_q();
        // (T^2 + 3T + 2) / (T + 1) = (T + 2, 0)
        let p = UnivarPoly::from_residue(&q, &[rint(2), rint(3), rint(1)]);
        let d = UnivarPoly::from_residue(&q, &[rint(1), rint(1)]);
        let (quo, rem) = p.divmod(&d);
        assert_eq!(quo, UnivarPoly::from_residue(&q, &[rint(2), rint(1)]));
        assert!(rem.is_zero());
        assert_eq!(p.eval(&q.from_i64(-1)), q.zero());
        assert_eq!(p.eval(&q.from_i64(1)), q.from_i64(6));
    }

    #[test]
    fn shift_variable() {
        let q = field_q();
        // (T-1)(T-2) shifted by +1 is T(T-1).
        let p = UnivarPoly::from_residue(&q, &[rint(2), rint(-3), rint(1)]);
        let shifted = p.shift(&q.one());
        assert_eq!(shifted, UnivarPoly::from_residue(&q, &[rint(0), rint(-1), rint(1)]));
    }

    #[test]
    fn resultants() {
        // Res(T, T-1) = (T-1)|_{T=0} = -1; Res(T, T) = 0; Res(T^2+1, T-2) = 5.
        assert_eq!(resultant_q(&[rint(0), rint(1)], &[rint(-1), rint(1)]), rint(-1));
        assert_eq!(resultant_q(&[rint(0), rint(1)], &[rint(0), rint(1)]), rint(0));
        assert_eq!(
            resultant_q(&[rint(1), rint(0), rint(1)], &[rint(-2), rint(1)]),
            rint(5)
        );
    }

    #[test]
    fn hensel_over_field_returns_inputs() {
        let q = field_q();
        let q0 = UnivarPoly::from_residue(&q, &[rint(0), rint(1)]);
        let s0 = UnivarPoly::from_residue(&q, &[rint(-1), rint(1)]);
        let p = q0.mul(&s0);
        let h = hensel_factor_detailed(&p, &q0, &s0).unwrap();
        assert_eq!(h.q, q0);
        assert_eq!(h.s, s0);
        assert_eq!(h.iterations, 0);
    }

    #[test]
    fn hensel_splits_eigenvalues_mod_epsilon() {
        // T^2 - (1+e)T + e = (T - e)(T - 1) over Q[e]/e^2.
        let ring = ring_eps();
        let e = ring.gen("e");
        let p = UnivarPoly::from_coeffs(
            &ring,
            vec![e.clone(), ring.one().add(&e).neg(), ring.one()],
        );
        let q0 = UnivarPoly::from_residue(&ring, &[rint(0), rint(1)]);
        let s0 = UnivarPoly::from_residue(&ring, &[rint(-1), rint(1)]);
        let h = hensel_factor_detailed(&p, &q0, &s0).unwrap();
        let expected_q = UnivarPoly::from_coeffs(&ring, vec![e.neg(), ring.one()]);
        let expected_s = UnivarPoly::from_coeffs(&ring, vec![ring.one().neg(), ring.one()]);
        // Independent check: multiply the expected factors back out.
        assert_eq!(expected_q.mul(&expected_s), p);
        assert_eq!(h.q, expected_q);
        assert_eq!(h.s, expected_s);
        assert_eq!(h.q.mul(&h.s), p);
        assert!(h.iterations <= 2);
    }

    #[test]
    fn hensel_rejects_bad_inputs() {
        let ring = ring_eps();
        let t = UnivarPoly::var(&ring);
        // T^2 with Q0 = S0 = T: residues share a root.
        let p = t.mul(&t);
        assert_eq!(hensel_factor(&p, &t, &t).unwrap_err(), AlgebraError::NotCoprime);
        // Residues whose product is not P.
        let s0 = UnivarPoly::from_residue(&ring, &[rint(-1), rint(1)]);
        assert_eq!(hensel_factor(&p, &t, &s0).unwrap_err(), AlgebraError::NotCongruent);
    }

    #[test]
    fn gamma_accessors() {
        let ring = ring_eps();
        let e = ring.gen("e");
        // T^2 - (2+e)T + 7
        let p = UnivarPoly::from_coeffs(
            &ring,
            vec![ring.from_i64(7), ring.from_i64(-2).sub(&e), ring.one()],
        );
        assert_eq!(p.gamma1(), ring.from_i64(2).add(&e));
        assert_eq!(p.gamma0(), ring.from_i64(7));
        let _ = rat(1, 2);
    }
}
