//! Finite-rank gl2-modules over an Artinian local base ring, given by the
//! four matrix-unit operators. Construction checks the bracket relations
//! exactly, so every value of this type is an honest module.

use exact_algebra::{rat, AMat, ArtinLocalRing, Rational, RingElem};
use num_traits::Zero;

use crate::error::Gl2Error;

/// A gl2-module: free of finite rank over the base, with the action of the
/// matrix units a+, a-, u+, u- recorded as matrices (columns are images of
/// basis vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl2Module {
    base: ArtinLocalRing,
    rank: usize,
    op_uplus: AMat,
    op_uminus: AMat,
    op_aplus: AMat,
    op_aminus: AMat,
}

impl Gl2Module {
    /// Assemble a module from its four operators, verifying the six bracket
    /// relations. The relations are exact matrix identities, so failure
    /// carries the offending relation name.
    pub fn from_ops(
        base: &ArtinLocalRing,
        op_uplus: AMat,
        op_uminus: AMat,
        op_aplus: AMat,
        op_aminus: AMat,
    ) -> Result<Self, Gl2Error> {
        let rank = op_uplus.rows;
        for (name, op) in [
            ("u+", &op_uplus),
            ("u-", &op_uminus),
            ("a+", &op_aplus),
            ("a-", &op_aminus),
        ] {
            if op.rows != rank || op.cols != rank {
                return Err(Gl2Error::BracketFailure {
                    relation: format!("operator {name} is not square of rank {rank}"),
                });
            }
        }
        let m = Gl2Module { base: base.clone(), rank, op_uplus, op_uminus, op_aplus, op_aminus };
        m.check_brackets()?;
        Ok(m)
    }

    pub fn base(&self) -> &ArtinLocalRing {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn op_uplus(&self) -> &AMat {
        &self.op_uplus
    }

    pub fn op_uminus(&self) -> &AMat {
        &self.op_uminus
    }

    pub fn op_aplus(&self) -> &AMat {
        &self.op_aplus
    }

    pub fn op_aminus(&self) -> &AMat {
        &self.op_aminus
    }

    /// h = a+ - a-.
    pub fn op_h(&self) -> AMat {
        self.op_aplus.sub(&self.op_aminus)
    }

    /// z = a+ + a-, central.
    pub fn op_z(&self) -> AMat {
        self.op_aplus.add(&self.op_aminus)
    }

    /// The Casimir operator h^2 - 2h + 4 u+ u-.
    pub fn op_casimir(&self) -> AMat {
        let h = self.op_h();
        h.mul(&h)
            .sub(&h.scale_rational(&rat(2, 1)))
            .add(&self.op_uplus.mul(&self.op_uminus).scale_rational(&rat(4, 1)))
    }

    /// Verify the six defining bracket identities exactly.
    pub fn check_brackets(&self) -> Result<(), Gl2Error> {
        let checks: [(&str, AMat, AMat); 6] = [
            ("[a+,u+]=u+", self.op_aplus.commutator(&self.op_uplus), self.op_uplus.clone()),
            ("[a-,u+]=-u+", self.op_aminus.commutator(&self.op_uplus), self.op_uplus.neg()),
            ("[a+,u-]=-u-", self.op_aplus.commutator(&self.op_uminus), self.op_uminus.neg()),
            ("[a-,u-]=u-", self.op_aminus.commutator(&self.op_uminus), self.op_uminus.clone()),
            ("[u+,u-]=h", self.op_uplus.commutator(&self.op_uminus), self.op_h()),
            ("[a+,a-]=0", self.op_aplus.commutator(&self.op_aminus), {
                AMat::zero(&self.base, self.rank, self.rank)
            }),
        ];
        for (relation, got, want) in checks {
            if got != want {
                return Err(Gl2Error::BracketFailure { relation: relation.to_string() });
            }
        }
        Ok(())
    }

    /// Exact centrality of the Casimir matrix against all four operators.
    pub fn casimir_is_central(&self) -> bool {
        let c = self.op_casimir();
        [&self.op_uplus, &self.op_uminus, &self.op_aplus, &self.op_aminus]
            .iter()
            .all(|op| c.commutator(op).is_zero())
    }

    /// Whether an operator matrix is the given rational scalar times the
    /// identity.
    pub fn is_scalar(op: &AMat, c: &Rational) -> bool {
        let ring = &op.ring;
        op == &AMat::identity(ring, op.rows).scale_rational(c)
    }

    /// Tensor product with the diagonal action; basis ordered with the left
    /// factor index major.
    pub fn tensor(&self, other: &Gl2Module) -> Gl2Module {
        assert_eq!(self.base, other.base, "tensor over a common base ring");
        let il = AMat::identity(&self.base, self.rank);
        let ir = AMat::identity(&self.base, other.rank);
        let sum =
            |a: &AMat, b: &AMat| -> AMat { a.kron(&ir).add(&il.kron(b)) };
        Gl2Module {
            base: self.base.clone(),
            rank: self.rank * other.rank,
            op_uplus: sum(&self.op_uplus, &other.op_uplus),
            op_uminus: sum(&self.op_uminus, &other.op_uminus),
            op_aplus: sum(&self.op_aplus, &other.op_aplus),
            op_aminus: sum(&self.op_aminus, &other.op_aminus),
        }
    }

    /// Direct sum, left summand first.
    pub fn direct_sum(&self, other: &Gl2Module) -> Gl2Module {
        assert_eq!(self.base, other.base, "direct sum over a common base ring");
        let block = |a: &AMat, b: &AMat| -> AMat {
            let top = a.hstack(&AMat::zero(&self.base, self.rank, other.rank));
            let bottom = AMat::zero(&self.base, other.rank, self.rank).hstack(b);
            top.vstack(&bottom)
        };
        Gl2Module {
            base: self.base.clone(),
            rank: self.rank + other.rank,
            op_uplus: block(&self.op_uplus, &other.op_uplus),
            op_uminus: block(&self.op_uminus, &other.op_uminus),
            op_aplus: block(&self.op_aplus, &other.op_aplus),
            op_aminus: block(&self.op_aminus, &other.op_aminus),
        }
    }

    /// Push the module along a base-ring map given by generator images.
    pub fn base_change(&self, target: &ArtinLocalRing, images: &[RingElem]) -> Gl2Module {
        Gl2Module {
            base: target.clone(),
            rank: self.rank,
            op_uplus: self.op_uplus.map_generators(target, images),
            op_uminus: self.op_uminus.map_generators(target, images),
            op_aplus: self.op_aplus.map_generators(target, images),
            op_aminus: self.op_aminus.map_generators(target, images),
        }
    }

    /// Twist the action by the automorphism conjugating by [[0,1],[p,0]]:
    /// the new u+ acts by p times the old u-, and the torus units swap.
    pub fn pi_twist(&self, p: &Rational) -> Gl2Module {
        assert!(!p.is_zero(), "twist parameter must be invertible");
        Gl2Module {
            base: self.base.clone(),
            rank: self.rank,
            op_uplus: self.op_uminus.scale_rational(p),
            op_uminus: self.op_uplus.scale_rational(&(Rational::from_integer(1.into()) / p)),
            op_aplus: self.op_aminus.clone(),
            op_aminus: self.op_aplus.clone(),
        }
    }

    /// Conjugate every operator by an invertible change of basis g, acting
    /// as op -> g^-1 op g (columns stay images of the new basis vectors).
    pub fn conjugate(&self, g: &AMat) -> Gl2Module {
        let gi = g.inverse().expect("change of basis must be invertible");
        let conj = |op: &AMat| gi.mul(op).mul(g);
        Gl2Module {
            base: self.base.clone(),
            rank: self.rank,
            op_uplus: conj(&self.op_uplus),
            op_uminus: conj(&self.op_uminus),
            op_aplus: conj(&self.op_aplus),
            op_aminus: conj(&self.op_aminus),
        }
    }
}

/// The irreducible of highest weight (l, 0): basis e, te, ..., t^l e with
/// u+ raising by one step, u- lowering with coefficient i(l - i + 1), the
/// torus acting by a+ = i and a- = l - i on the i-th vector.
pub fn build_vk(l: usize, base: &ArtinLocalRing) -> Gl2Module {
    let n = l + 1;
    let mut up = AMat::zero(base, n, n);
    let mut um = AMat::zero(base, n, n);
    let mut ap = AMat::zero(base, n, n);
    let mut am = AMat::zero(base, n, n);
    for i in 0..n {
        if i + 1 < n {
            up.set(i + 1, i, base.one());
        }
        if i > 0 {
            um.set(i - 1, i, base.from_i64((i as i64) * ((l - i + 1) as i64)));
        }
        ap.set(i, i, base.from_i64(i as i64));
        am.set(i, i, base.from_i64((l - i) as i64));
    }
    Gl2Module::from_ops(base, up, um, ap, am).expect("standard irreducible satisfies brackets")
}

/// Rank-one module where both torus units act by the integer s and the
/// nilpotents act by zero: the s-th power of the determinant character.
pub fn det_power(s: i64, base: &ArtinLocalRing) -> Gl2Module {
    let scalar = AMat::identity(base, 1).scale_rational(&rat(s, 1));
    Gl2Module::from_ops(base, AMat::zero(base, 1, 1), AMat::zero(base, 1, 1), scalar.clone(), scalar)
        .expect("rank-one character satisfies brackets")
}

/// The finite-dimensional module with extreme weights nu = (n1, n2),
/// n1 >= n2: the irreducible of highest weight nu, realized as the (n1-n2)
/// step string tensored by the n2-th determinant power.
pub fn weight_module(nu: (i64, i64), base: &ArtinLocalRing) -> Gl2Module {
    assert!(nu.0 >= nu.1, "weight must be dominant");
    let l = (nu.0 - nu.1) as usize;
    build_vk(l, base).tensor(&det_power(nu.1, base))
}
