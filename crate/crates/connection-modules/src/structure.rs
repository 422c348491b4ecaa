//! The standard gl2-action carried by a rank-2 connection window.
//!
//! A connection module of rank 2 with regular singular matrix A carries a
//! canonical action of the four gl2 generators on its truncated window:
//! u+ acts by multiplication by t, a+ by the connection operator nabla,
//! the center zeta by the scalar gamma1 - 1, and u- by -P(nabla)/t where
//! P is the Sen polynomial T^2 - gamma1*T + gamma0.  The division by t is
//! always legal because P(A(0)) = 0 at order zero (Cayley-Hamilton), and
//! it costs one band of the window: operator identities involving u- are
//! certified modulo t^(N-1) rather than t^N.

use exact_algebra::{AMat, ArtinLocalRing, RingElem};

use crate::error::ConnError;
use crate::module::{flat_rows_agree, ConnectionModule};

/// A connection window together with matrices for the four gl2 generators
/// acting on its flattened basis.  `tensor_level` is 0 for a bare module
/// and l when the carrier is module (x) V_l; a degree band of the carrier
/// then has `band_size` = rank * (l + 1) rows.
#[derive(Clone, Debug)]
pub struct Gl2ConnectionModule {
    pub module: ConnectionModule,
    pub tensor_level: usize,
    pub t_op: AMat,
    pub u_plus: AMat,
    pub u_minus: AMat,
    pub a_plus: AMat,
    pub a_minus: AMat,
    /// Operator identities are reliable on output bands below this count.
    pub effective_order: usize,
}

impl Gl2ConnectionModule {
    pub fn ring(&self) -> &ArtinLocalRing {
        &self.module.base
    }

    /// Rows per t-degree band of the carrier.
    pub fn band_size(&self) -> usize {
        self.module.rank * (self.tensor_level + 1)
    }

    /// Total dimension of the flattened carrier over the base ring.
    pub fn dim(&self) -> usize {
        self.band_size() * self.module.truncation
    }

    /// Cartan element h = a+ - a-.
    pub fn h_op(&self) -> AMat {
        self.a_plus.sub(&self.a_minus)
    }

    /// Central element zeta = a+ + a-.
    pub fn zeta_op(&self) -> AMat {
        self.a_plus.add(&self.a_minus)
    }

    /// Casimir c = h^2 - 2h + 4 u+ u-.
    pub fn casimir_op(&self) -> AMat {
        let h = self.h_op();
        let two = self.ring().from_i64(2);
        let four = self.ring().from_i64(4);
        h.mul(&h)
            .sub(&h.scale(&two))
            .add(&self.u_plus.mul(&self.u_minus).scale(&four))
    }

    /// Scalar operator c * id on the carrier.
    pub fn scalar_op(&self, c: &RingElem) -> AMat {
        AMat::identity(self.ring(), self.dim()).scale(c)
    }

    /// Compare two operators on the reliable output bands.
    pub fn ops_agree(&self, x: &AMat, y: &AMat) -> bool {
        flat_rows_agree(x, y, self.band_size(), self.effective_order)
    }

    /// Compare two operators on a caller-chosen number of output bands.
    pub fn ops_agree_mod(&self, x: &AMat, y: &AMat, bands: usize) -> bool {
        flat_rows_agree(x, y, self.band_size(), bands)
    }

    /// Whether an operator acts as the scalar c on the reliable bands.
    pub fn acts_as_scalar(&self, op: &AMat, c: &RingElem) -> bool {
        self.ops_agree(op, &self.scalar_op(c))
    }

    /// The six defining bracket identities, each checked on the reliable
    /// bands.  Returns (name, holds) pairs so callers can report failures
    /// individually.
    pub fn bracket_checks(&self) -> Vec<(&'static str, bool)> {
        let h = self.h_op();
        let zero = AMat::zero(self.ring(), self.dim(), self.dim());
        vec![
            (
                "[a+, a-] = 0",
                self.ops_agree(&self.a_plus.commutator(&self.a_minus), &zero),
            ),
            (
                "[a+, u+] = u+",
                self.ops_agree(&self.a_plus.commutator(&self.u_plus), &self.u_plus),
            ),
            (
                "[a-, u+] = -u+",
                self.ops_agree(&self.a_minus.commutator(&self.u_plus), &self.u_plus.neg()),
            ),
            (
                "[a+, u-] = -u-",
                self.ops_agree(&self.a_plus.commutator(&self.u_minus), &self.u_minus.neg()),
            ),
            (
                "[a-, u-] = u-",
                self.ops_agree(&self.a_minus.commutator(&self.u_minus), &self.u_minus),
            ),
            (
                "[u+, u-] = h",
                self.ops_agree(&self.u_plus.commutator(&self.u_minus), &h),
            ),
        ]
    }

    /// Whether every defining bracket holds on the reliable bands.
    pub fn all_brackets_hold(&self) -> bool {
        self.bracket_checks().iter().all(|(_, ok)| *ok)
    }
}

/// Scalar by which the Casimir acts on the standard structure:
/// gamma1^2 - 4*gamma0 - 1 for Sen polynomial T^2 - gamma1*T + gamma0.
pub fn casimir_scalar_of(m: &ConnectionModule) -> RingElem {
    let sen = m.sen_polynomial();
    let g1 = sen.gamma1();
    let g0 = sen.gamma0();
    g1.mul(&g1)
        .sub(&g0.scale(&exact_algebra::rat(4, 1)))
        .sub(&m.base.one())
}

/// Scalar by which the center zeta acts on the standard structure:
/// gamma1 - 1.
pub fn zeta_scalar_of(m: &ConnectionModule) -> RingElem {
    m.sen_polynomial().gamma1().sub(&m.base.one())
}

/// Build the standard gl2-structure on a rank-2 connection window:
/// u+ = t, a+ = nabla, zeta = (gamma1 - 1) id, u- = -P(nabla)/t.
///
/// The division by t is certified: P(nabla) vanishes on the degree-zero
/// output band because the Sen polynomial annihilates A(0).  A failure of
/// that certificate is impossible for a well-formed module and surfaces
/// as `DivisionObstruction`.
pub fn standard_g_structure(m: &ConnectionModule) -> Result<Gl2ConnectionModule, ConnError> {
    assert_eq!(m.rank, 2, "the standard structure lives on rank-2 modules");
    let nab = m.nabla_matrix();
    let t_op = m.t_matrix();
    let sen = m.sen_polynomial();
    let p_of_nabla = m.poly_of_nabla(&sen);
    let u_minus = m.divide_op_by_t(&p_of_nabla)?.neg();
    let zeta = m.scalar_matrix(&zeta_scalar_of(m));
    // a+ = nabla and a- = zeta - nabla, so a+ + a- = zeta and h = 2 nabla - zeta.
    let a_plus = nab.clone();
    let a_minus = zeta.sub(&nab);
    Ok(Gl2ConnectionModule {
        module: m.clone(),
        tensor_level: 0,
        t_op: t_op.clone(),
        u_plus: t_op,
        u_minus,
        a_plus,
        a_minus,
        effective_order: m.truncation.saturating_sub(1),
    })
}

/// Twist a gl2-structure by the i-th power of the determinant character:
/// a+ and a- both shift by i, u+ and u- are unchanged, and the underlying
/// window records the weight shift.
pub fn twist_det(g: &Gl2ConnectionModule, i: i64) -> Gl2ConnectionModule {
    let shift = AMat::identity(g.ring(), g.dim()).scale_rational(&exact_algebra::rat(i, 1));
    Gl2ConnectionModule {
        module: g.module.twist_weight(i),
        tensor_level: g.tensor_level,
        t_op: g.t_op.clone(),
        u_plus: g.u_plus.clone(),
        u_minus: g.u_minus.clone(),
        a_plus: g.a_plus.add(&shift),
        a_minus: g.a_minus.add(&shift),
        effective_order: g.effective_order,
    }
}
