//! Tensoring a connection window with the finite-dimensional irreducibles.
//!
//! The carrier of GM (x) V_l is the flattened window of GM tensored with
//! the l+1 dimensional irreducible: flat index (k*n + j)*(l+1) + v for
//! t-degree k, module component j, and V-basis index v.  Every gl2
//! generator acts through the coproduct X (x) 1 + 1 (x) X, and the module
//! variable acts by T = t (x) 1 + 1 (x) t_V where t_V is the nilpotent
//! raising operator of V_l.  The t_V-adic filtration of the result has
//! graded pieces isomorphic to weight twists of the original window, and
//! the degree-zero band is a T-basis, both of which are certified here.

use exact_algebra::{AMat, QMat, RingElem};
use gl2_rep::build_vk;

use crate::error::ConnError;
use crate::module::ConnectionModule;
use crate::structure::Gl2ConnectionModule;

/// Place a window operator into the (v_out, v_in) block of the tensor
/// carrier: the result sends x (x) f_{v_in} to (op x) (x) f_{v_out}.
fn v_block(op: &AMat, v_out: usize, v_in: usize, levels: usize) -> AMat {
    let mut unit = AMat::zero(&op.ring, levels, levels);
    unit.set(v_out, v_in, op.ring.one());
    op.kron(&unit)
}

/// Extract the (v_out, v_in) block of a tensor operator.
fn v_subblock(op: &AMat, v_out: usize, v_in: usize, levels: usize) -> AMat {
    let rows = op.rows / levels;
    AMat::from_fn(&op.ring, rows, rows, |i, j| {
        op.get(i * levels + v_out, j * levels + v_in).clone()
    })
}

/// Tensor a gl2 window with the irreducible V_l of highest weight (l, 0).
///
/// All generators act through the coproduct.  Two certificates run before
/// the result is returned: the t_V-graded pieces must be the expected
/// weight twists of the input carrier, and the degree-zero band must be a
/// T-basis of the correct rank n(l+1) (checked at the residue field by a
/// Nakayama span computation).  A window too short to see the T-basis is
/// reported as `WindowTooSmall`.
pub fn tensor_with_vk(g: &Gl2ConnectionModule, l: usize) -> Result<Gl2ConnectionModule, ConnError> {
    let ring = g.ring().clone();
    let levels = l + 1;
    let vk = build_vk(l, &ring);
    let dim = g.dim();
    let lift_d = |x: &AMat| x.kron(&AMat::identity(&ring, levels));
    let lift_v = |y: &AMat| AMat::identity(&ring, dim).kron(y);

    let t_op = lift_d(&g.t_op).add(&lift_v(vk.op_uplus()));
    let u_plus = lift_d(&g.u_plus).add(&lift_v(vk.op_uplus()));
    let u_minus = lift_d(&g.u_minus).add(&lift_v(vk.op_uminus()));
    let a_plus = lift_d(&g.a_plus).add(&lift_v(vk.op_aplus()));
    let a_minus = lift_d(&g.a_minus).add(&lift_v(vk.op_aminus()));

    // Graded pieces of the t_V-adic filtration: at V-index v the module
    // variable acts by the original t and the connection by a+ + v.
    for v in 0..levels {
        let expect_a = g
            .a_plus
            .add(&AMat::identity(&ring, dim).scale_rational(&exact_algebra::rat(v as i64, 1)));
        assert!(
            v_subblock(&a_plus, v, v, levels).sub(&expect_a).is_zero(),
            "graded piece {v} must carry the v-fold weight twist of the input"
        );
        assert!(
            v_subblock(&t_op, v, v, levels).sub(&g.t_op).is_zero(),
            "graded piece {v} must keep the original module variable"
        );
    }

    // T-basis certificate: the degree-zero band generates over R[T] and
    // has the minimal size, both checked at the residue field.
    let full = dim * levels;
    let band = g.band_size() * levels;
    let t_res = t_op.residue_qmat();
    let mut cols: Vec<Vec<exact_algebra::Rational>> = Vec::new();
    for j in 0..full {
        cols.push((0..full).map(|i| t_res.get(i, j).clone()).collect());
    }
    let rank_t = QMat::from_rows(cols.clone()).rank();
    for c in 0..band {
        let mut unit = vec![exact_algebra::rat(0, 1); full];
        unit[c] = exact_algebra::rat(1, 1);
        cols.push(unit);
    }
    let rank_both = QMat::from_rows(cols).rank();
    if rank_both != full || rank_t + band != full {
        return Err(ConnError::WindowTooSmall);
    }

    Ok(Gl2ConnectionModule {
        module: g.module.clone(),
        tensor_level: (g.tensor_level + 1) * levels - 1,
        t_op,
        u_plus,
        u_minus,
        a_plus,
        a_minus,
        effective_order: g.effective_order,
    })
}

/// Result of the two-route Casimir computation on GM (x) V_l.
#[derive(Clone, Debug)]
pub struct CasimirTensorData {
    pub tensor: Gl2ConnectionModule,
    /// Casimir composed from the coproduct generators h^2 - 2h + 4 u+ u-.
    pub composed: AMat,
    /// Casimir assembled from the closed per-level formula.
    pub closed_form: AMat,
    pub gamma1: RingElem,
    pub gamma0: RingElem,
}

/// Compute the Casimir on GM (x) V_l along two independent routes and
/// certify that they agree on the reliable bands.
///
/// The input must have weights (0, k) with k a non-negative integer and
/// nilpotent Sen parameters, so its Sen polynomial is T^2 - g1 T + g0
/// with g1 - k and g0 nilpotent; any other shape is reported as
/// `WeightShapeMismatch`.  The closed route sends v (x) f_i to
///
///   (4(2i - l) nabla + (g1 - 2i + l)^2 - 1 - 4 g0 + 4i(l - i + 1)) v (x) f_i
///   + 4 i(l - i + 1) t v (x) f_{i-1}  -  4 P(nabla)/t v (x) f_{i+1}
///
/// while the composed route multiplies out the coproduct generators.
pub fn casimir_tensor(m: &ConnectionModule, l: usize) -> Result<CasimirTensorData, ConnError> {
    let sen = m.sen_polynomial();
    let g1 = sen.gamma1();
    let g0 = sen.gamma0();
    let k = g1.residue();
    if !g0.in_nilradical() || !k.is_integer() || k < exact_algebra::rat(0, 1) {
        return Err(ConnError::WeightShapeMismatch);
    }

    let g = crate::structure::standard_g_structure(m)?;
    let tensor = tensor_with_vk(&g, l)?;
    let composed = tensor.casimir_op();

    let ring = &m.base;
    let levels = l + 1;
    let nab = m.nabla_matrix();
    let ident = AMat::identity(ring, m.flat_dim());
    let mut closed = AMat::zero(ring, tensor.dim(), tensor.dim());
    for i in 0..levels {
        let ii = i as i64;
        let ll = l as i64;
        let string = ring.from_i64(ii * (ll - ii + 1));
        // Diagonal level: 4(2i-l) nabla + ((g1 - 2i + l)^2 - 1 - 4 g0 + 4i(l-i+1)) id.
        let shift = g1.add(&ring.from_i64(ll - 2 * ii));
        let scalar = shift
            .mul(&shift)
            .sub(&ring.one())
            .sub(&g0.scale(&exact_algebra::rat(4, 1)))
            .add(&string.scale(&exact_algebra::rat(4, 1)));
        let diag = nab
            .scale_rational(&exact_algebra::rat(4 * (2 * ii - ll), 1))
            .add(&ident.scale(&scalar));
        closed = closed.add(&v_block(&diag, i, i, levels));
        if i > 0 {
            let lower = g
                .t_op
                .scale(&string.scale(&exact_algebra::rat(4, 1)));
            closed = closed.add(&v_block(&lower, i - 1, i, levels));
        }
        if i < l {
            let raise = g.u_minus.scale_rational(&exact_algebra::rat(4, 1));
            closed = closed.add(&v_block(&raise, i + 1, i, levels));
        }
    }

    assert!(
        tensor.ops_agree(&composed, &closed),
        "composed and closed-form Casimir must agree on the reliable bands"
    );
    Ok(CasimirTensorData {
        tensor,
        composed,
        closed_form: closed,
        gamma1: g1,
        gamma0: g0,
    })
}
