//! Coordinate rings of the Grothendieck-Springer setup for gl2.
//!
//! The base ring `U = Q[a,b,c,z]` holds the entries of the universal trace-
//! split matrix `nu = [[a+z, b],[c, -a+z]]`, and the quadratic extension
//! `Utilde = U[h]/(h^2 - (a^2 + b*c))` adjoins an eigenvalue shift `h` whose
//! square is the discriminant of `nu - z`. Every element of `Utilde` has a
//! unique normal form `alpha + beta*h` with `alpha, beta` in `U`, so `Utilde`
//! is free of rank two over `U` with basis `{1, h}`.
//!
//! All polynomials live in the single variable list `[h, a, b, c, z]` under
//! degrevlex; `U`-elements are simply those of `h`-degree zero. Working in
//! one list keeps matrices over the two rings composable and lets an
//! `h`-free computation certify facts over `U` alone: Buchberger steps never
//! introduce a variable absent from the inputs.

use exact_algebra::groebner::{ModVec, QuotientRing};
use exact_algebra::linalg::QMat;
use exact_algebra::mpoly::{MonomialOrder, MPoly, PolyMat};
use exact_algebra::rational::Rational;
use num_traits::Zero;

/// Variable list shared by `U` and `Utilde`.
pub const SPRINGER_VARS: [&str; 5] = ["h", "a", "b", "c", "z"];

/// The pair of coordinate rings together with the universal matrix data.
#[derive(Clone, Debug)]
pub struct SpringerRings {
    /// Quotient by the defining relation `h^2 = a^2 + b*c`.
    pub utilde: QuotientRing,
}

impl SpringerRings {
    pub fn new() -> Self {
        let rel = parse("h^2 - a^2 - b*c");
        SpringerRings { utilde: QuotientRing::new(&SPRINGER_VARS, MonomialOrder::DegRevLex, &[rel]) }
    }

    /// The defining ideal generators, for module computations over `Utilde`.
    pub fn ideal(&self) -> &[MPoly] {
        &self.utilde.ideal_gb
    }

    /// The universal matrix `nu = [[a+z, b],[c, -a+z]]`.
    pub fn nu(&self) -> PolyMat {
        mat2(&["a + z", "b", "c", "-a + z"])
    }

    /// `nu - (z+h)`, the operator whose kernel models the line-bundle
    /// pushforward of degree -1.
    pub fn m_plus(&self) -> PolyMat {
        mat2(&["a - h", "b", "c", "-a - h"])
    }

    /// `nu - (z-h)`, the complementary operator of the two-periodic sequence.
    pub fn m_minus(&self) -> PolyMat {
        mat2(&["a + h", "b", "c", "-a + h"])
    }

    /// First generator of `ker(nu - (z+h))`: the first column of `nu - (z-h)`.
    pub fn g1(&self) -> ModVec {
        ModVec(vec![parse("a + h"), parse("c")])
    }

    /// Second generator of `ker(nu - (z+h))`: the second column of `nu - (z-h)`.
    pub fn g2(&self) -> ModVec {
        ModVec(vec![parse("b"), parse("-a + h")])
    }

    /// Normal form of `p` in `Utilde`; the result has `h`-degree at most one.
    pub fn nf(&self, p: &MPoly) -> MPoly {
        self.utilde.nf(p)
    }

    /// Split a `Utilde` normal form as `alpha + beta*h` with `h`-free parts.
    pub fn h_split(&self, p: &MPoly) -> (MPoly, MPoly) {
        let r = self.nf(p);
        let mut alpha = r.zero_like();
        let mut beta = r.zero_like();
        for (exp, coeff) in r.iter_terms() {
            match exp[0] {
                0 => alpha.add_term(exp.clone(), coeff.clone()),
                1 => {
                    let mut e = exp.clone();
                    e[0] = 0;
                    beta.add_term(e, coeff.clone());
                }
                d => panic!("normal form with h-degree {d}"),
            }
        }
        (alpha, beta)
    }

    /// Flatten a length-2 vector over `Utilde` to a length-4 vector over `U`
    /// in the ordered basis `(e1, h*e1, e2, h*e2)`.
    pub fn flatten_vec2(&self, v: &ModVec) -> ModVec {
        assert_eq!(v.0.len(), 2, "flatten expects a rank-2 vector");
        let mut out = Vec::with_capacity(4);
        for p in &v.0 {
            let (alpha, beta) = self.h_split(p);
            out.push(alpha);
            out.push(beta);
        }
        ModVec(out)
    }

    /// Multiply a vector over `Utilde` by a scalar, reducing to normal form.
    pub fn scale_vec(&self, v: &ModVec, s: &MPoly) -> ModVec {
        ModVec(v.0.iter().map(|p| self.utilde.mul(p, s)).collect())
    }

    /// The parametrization of `ker(nu - (z+h))` by `U^2`, flattened to a
    /// 4x2 matrix over `U`: columns are the flattenings of `g1, g2`.
    pub fn phi_flat(&self) -> PolyMat {
        let c1 = self.flatten_vec2(&self.g1());
        let c2 = self.flatten_vec2(&self.g2());
        PolyMat::from_rows(
            (0..4).map(|i| vec![c1.0[i].clone(), c2.0[i].clone()]).collect(),
        )
    }

    /// Evaluate an `h`-free polynomial at a rational point `(a, b, c, z)`.
    pub fn eval_u(&self, p: &MPoly, pt: &[Rational; 4]) -> Rational {
        assert_eq!(p.degree_in(0), 0, "evaluation of a polynomial involving h over U");
        let full = [Rational::zero(), pt[0].clone(), pt[1].clone(), pt[2].clone(), pt[3].clone()];
        p.eval_rational(&full)
    }

    /// Specialize a 2x2 matrix over `Utilde` at a rational point of the base,
    /// representing `h` by its regular action on `Q[h]/(h^2-q)` with
    /// `q = a^2 + b*c`. Each entry `alpha + beta*h` becomes the 2x2 block
    /// `[[alpha, beta*q],[beta, alpha]]`, giving a 4x4 rational matrix.
    pub fn specialize_mat2(&self, m: &PolyMat, pt: &[Rational; 4]) -> QMat {
        assert_eq!((m.rows, m.cols), (2, 2));
        let q = &pt[0] * &pt[0] + &pt[1] * &pt[2];
        let mut out = QMat::zero(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                let (alpha, beta) = self.h_split(m.get(i, j));
                let av = self.eval_u(&alpha, pt);
                let bv = self.eval_u(&beta, pt);
                out.set(2 * i, 2 * j, av.clone());
                out.set(2 * i + 1, 2 * j + 1, av);
                out.set(2 * i, 2 * j + 1, &bv * &q);
                out.set(2 * i + 1, 2 * j, bv);
            }
        }
        out
    }

    /// Specialize a length-2 vector over `Utilde` at a rational point to a
    /// length-4 rational vector in the basis `(e1, h*e1, e2, h*e2)`.
    pub fn specialize_vec2(&self, v: &ModVec, pt: &[Rational; 4]) -> Vec<Rational> {
        let flat = self.flatten_vec2(v);
        flat.0.iter().map(|p| self.eval_u(p, pt)).collect()
    }
}

impl Default for SpringerRings {
    fn default() -> Self {
        Self::new()
    }
}

/// Parse a polynomial in the springer variable list.
pub fn parse(src: &str) -> MPoly {
    MPoly::parse(src, &SPRINGER_VARS, MonomialOrder::DegRevLex).expect("parse springer polynomial")
}

/// Build a 2x2 matrix from four polynomial sources, row-major.
pub fn mat2(entries: &[&str; 4]) -> PolyMat {
    PolyMat::from_rows(vec![
        vec![parse(entries[0]), parse(entries[1])],
        vec![parse(entries[2]), parse(entries[3])],
    ])
}
