//! Pointwise classification of the resolution fibers over a 2x2 operator.
//!
//! Over a point the resolution parametrizes Borel subalgebras containing the
//! operator, and the fiber ring of the eigenvalue cover is `R[h]/(h^2 - q)`
//! with `q = a^2 + bc` the discriminant of the trace-split part. Three
//! regimes occur: `q` a unit (two-sheeted etale cover), `q` nilpotent with
//! the operator still noncentral (a ramified double point), and a central
//! operator (every Borel works, the full flag variety).

use exact_algebra::artin::{AMat, ArtinLocalRing, RingElem};
use exact_algebra::rational::{rat, Rational};

/// Classification of the eigenvalue-cover fiber over one operator.
#[derive(Clone, Debug, PartialEq)]
pub enum FiberType {
    /// `q` is a unit: the fiber ring `R[h]/(h^2-q)` is etale of rank two.
    EtaleRank2 { q: RingElem },
    /// `q` is nilpotent but the operator is not central: the fiber ring is
    /// still `R[h]/(h^2-q)` but the cover is ramified of degree two.
    RamifiedDouble { q: RingElem },
    /// The operator is central (a = b = c = 0): the fiber is the full flag
    /// variety rather than a finite cover.
    FullFlag,
}

impl std::fmt::Display for FiberType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FiberType::EtaleRank2 { q } => write!(f, "etale rank 2, ring R[h]/(h^2 - ({q}))"),
            FiberType::RamifiedDouble { q } => {
                write!(f, "ramified double, ring R[h]/(h^2 - ({q}))")
            }
            FiberType::FullFlag => write!(f, "full flag fiber"),
        }
    }
}

/// Trace-split coordinates of a 2x2 operator: `m = [[a+z, b],[c, -a+z]]`
/// with `2z` the trace, together with the discriminant `q = a^2 + bc`.
#[derive(Clone, Debug)]
pub struct SpringerFiberData {
    pub base: ArtinLocalRing,
    pub a: RingElem,
    pub b: RingElem,
    pub c: RingElem,
    pub z: RingElem,
    pub q: RingElem,
}

impl SpringerFiberData {
    /// Split a 2x2 matrix into its trace and trace-free coordinates.
    pub fn from_matrix(m: &AMat) -> SpringerFiberData {
        assert_eq!((m.rows, m.cols), (2, 2), "fiber data expects a 2x2 operator");
        let base = m.ring.clone();
        let half = rat(1, 2);
        let z = m.get(0, 0).add(m.get(1, 1)).scale(&half);
        let a = m.get(0, 0).sub(m.get(1, 1)).scale(&half);
        let b = m.get(0, 1).clone();
        let c = m.get(1, 0).clone();
        let q = a.mul(&a).add(&b.mul(&c));
        let data = SpringerFiberData { base, a, b, c, z, q };
        debug_assert!(data.matrix().sub(m).is_zero(), "coordinates must reconstruct the matrix");
        data
    }

    /// Reconstruct the operator `[[a+z, b],[c, -a+z]]`.
    pub fn matrix(&self) -> AMat {
        let mut m = AMat::zero(&self.base, 2, 2);
        m.set(0, 0, self.a.add(&self.z));
        m.set(0, 1, self.b.clone());
        m.set(1, 0, self.c.clone());
        m.set(1, 1, self.z.sub(&self.a));
        m
    }

    /// Classify the eigenvalue-cover fiber over this operator.
    pub fn fiber_type(&self) -> FiberType {
        if self.q.is_unit() {
            return FiberType::EtaleRank2 { q: self.q.clone() };
        }
        if self.a.is_zero() && self.b.is_zero() && self.c.is_zero() {
            return FiberType::FullFlag;
        }
        FiberType::RamifiedDouble { q: self.q.clone() }
    }
}

/// Classify the fiber over a 2x2 operator with entries in an Artin local
/// Q-algebra; rational matrices embed through the trivial such algebra.
pub fn fiber_type(nu0: &AMat) -> FiberType {
    SpringerFiberData::from_matrix(nu0).fiber_type()
}

/// Classify the fiber over a rational 2x2 matrix.
pub fn fiber_type_rational(entries: &[[Rational; 2]; 2]) -> FiberType {
    let ring = ArtinLocalRing::rationals();
    let m = AMat::from_rational_rows(
        &ring,
        entries.iter().map(|row| row.to_vec()).collect(),
    );
    fiber_type(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_algebra::rational::rint;

    fn qmatrix(rows: [[i64; 2]; 2]) -> [[Rational; 2]; 2] {
        [
            [rint(rows[0][0]), rint(rows[0][1])],
            [rint(rows[1][0]), rint(rows[1][1])],
        ]
    }

    #[test]
    fn nilpotent_jordan_block_is_ramified() {
        let t = fiber_type_rational(&qmatrix([[0, 1], [0, 0]]));
        match t {
            FiberType::RamifiedDouble { q } => {
                assert!(q.is_zero(), "discriminant of the Jordan block must vanish")
            }
            other => panic!("expected a ramified double point, got {other}"),
        }
    }

    #[test]
    fn split_semisimple_is_etale() {
        let t = fiber_type_rational(&qmatrix([[1, 0], [0, -1]]));
        match t {
            FiberType::EtaleRank2 { q } => {
                assert_eq!(q.residue(), rint(1), "discriminant of diag(1,-1) must be 1")
            }
            other => panic!("expected an etale rank-2 fiber, got {other}"),
        }
    }

    #[test]
    fn central_operator_gives_full_flag() {
        assert_eq!(fiber_type_rational(&qmatrix([[0, 0], [0, 0]])), FiberType::FullFlag);
        assert_eq!(fiber_type_rational(&qmatrix([[3, 0], [0, 3]])), FiberType::FullFlag);
    }

    fn dual_numbers() -> ArtinLocalRing {
        let sq = exact_algebra::mpoly::MPoly::parse(
            "eps^2",
            &["eps"],
            exact_algebra::mpoly::MonomialOrder::DegRevLex,
        )
        .unwrap();
        exact_algebra::artin::artin_ring_build(&["eps"], &[sq]).unwrap()
    }

    #[test]
    fn nilpotent_discriminant_over_dual_numbers_is_ramified() {
        // Over Q[eps]/eps^2 take a = eps, b = c = 0: q = eps^2 = 0 but the
        // operator is not central.
        let ring = dual_numbers();
        let eps = ring.gen("eps");
        let mut m = AMat::zero(&ring, 2, 2);
        m.set(0, 0, eps.clone());
        m.set(1, 1, eps.scale(&rint(-1)));
        match fiber_type(&m) {
            FiberType::RamifiedDouble { q } => assert!(q.is_zero()),
            other => panic!("expected ramified, got {other}"),
        }
    }

    #[test]
    fn unit_discriminant_over_dual_numbers_is_etale() {
        let ring = dual_numbers();
        let eps = ring.gen("eps");
        let mut m = AMat::zero(&ring, 2, 2);
        m.set(0, 0, ring.one().add(&eps));
        m.set(1, 1, ring.one().scale(&rint(-1)));
        // a = 1 + eps/2, z = eps/2, q = (1 + eps/2)^2 = 1 + eps: a unit.
        match fiber_type(&m) {
            FiberType::EtaleRank2 { q } => assert_eq!(q.residue(), rint(1)),
            other => panic!("expected etale, got {other}"),
        }
    }

    #[test]
    fn coordinates_reconstruct_the_operator() {
        let ring = ArtinLocalRing::rationals();
        let m = AMat::from_rational_rows(
            &ring,
            vec![vec![rint(5), rint(2)], vec![rint(7), rint(-3)]],
        );
        let data = SpringerFiberData::from_matrix(&m);
        assert_eq!(data.z.residue(), rint(1), "z must be half the trace");
        assert_eq!(data.a.residue(), rint(4));
        assert_eq!(data.q.residue(), rint(30), "q = a^2 + bc = 16 + 14");
        assert!(data.matrix().sub(&m).is_zero());
    }
}
