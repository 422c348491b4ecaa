//! Infinitesimal characters, generalized eigenspace projections, and
//! translation functors on finite-rank modules over Artinian bases.

use exact_algebra::{kernel_over_artin, AMat, ArtinLocalRing, QMat, Rational, RingElem};
use num_traits::Zero;

use crate::error::Gl2Error;
use crate::module::{weight_module, Gl2Module};

/// Action of the center on a module: the values of z and of the Casimir.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub z_value: RingElem,
    pub c_value: RingElem,
}

impl Character {
    pub fn new(z_value: RingElem, c_value: RingElem) -> Self {
        Character { z_value, c_value }
    }

    /// The central character attached to a pair of integer weights (h1, h2):
    /// z acts by h1 + h2 - 1 and the Casimir by (h1 - h2)^2 - 1.
    pub fn from_weights(base: &ArtinLocalRing, h1: i64, h2: i64) -> Self {
        Character {
            z_value: base.from_i64(h1 + h2 - 1),
            c_value: base.from_i64((h1 - h2) * (h1 - h2) - 1),
        }
    }

    /// The central character of the finite-dimensional module with extreme
    /// weights nu = (n1, n2): z acts by n1 + n2, the Casimir by
    /// (n1 - n2 + 1)^2 - 1. Agrees with `from_weights(n2, n1 + 1)`.
    pub fn from_extreme_weight(base: &ArtinLocalRing, nu: (i64, i64)) -> Self {
        Character {
            z_value: base.from_i64(nu.0 + nu.1),
            c_value: base.from_i64((nu.0 - nu.1 + 1) * (nu.0 - nu.1 + 1) - 1),
        }
    }
}

/// The infinitesimal character for the weight pair (h1, h2).
pub fn infinitesimal_character(base: &ArtinLocalRing, h1: i64, h2: i64) -> Character {
    Character::from_weights(base, h1, h2)
}

/// Flatten a vector over the base ring to rational coordinates, entry-major.
fn flatten_vec(ring: &ArtinLocalRing, v: &[RingElem]) -> Vec<Rational> {
    let d = ring.dim();
    let mut out = Vec::with_capacity(v.len() * d);
    for e in v {
        for t in 0..d {
            out.push(e.coords[t].clone());
        }
    }
    out
}

/// The joint generalized eigenspace of the Casimir and z for a character,
/// with the power bound equal to the rank of the module. Returns the
/// eigenspace as a module together with the inclusion matrix whose columns
/// are its free basis; the inclusion is split because the basis extends to
/// one of the ambient module.
pub fn generalized_eigenspace(
    m: &Gl2Module,
    chi: &Character,
) -> Result<(Gl2Module, AMat), Gl2Error> {
    let base = m.base();
    let n = m.rank();
    if n == 0 {
        return Ok((m.clone(), AMat::zero(base, 0, 0)));
    }
    let id = AMat::identity(base, n);
    let a = m.op_casimir().sub(&id.scale(&chi.c_value)).pow(n);
    let b = m.op_z().sub(&id.scale(&chi.z_value)).pow(n);
    let s = a.vstack(&b);
    let eig_rank = s.residue_qmat().kernel_basis().len();
    if eig_rank == 0 {
        let empty = Gl2Module::from_ops(
            base,
            AMat::zero(base, 0, 0),
            AMat::zero(base, 0, 0),
            AMat::zero(base, 0, 0),
            AMat::zero(base, 0, 0),
        )?;
        return Ok((empty, AMat::zero(base, n, 0)));
    }
    let lifts = kernel_over_artin(&s, eig_rank)
        .map_err(|e| Gl2Error::NotFree { detail: e.to_string() })?;
    certify_free_kernel(base, &s, &lifts)?;
    let incl = AMat::from_fn(base, n, eig_rank, |i, j| lifts[j][i].clone());
    let p = extend_to_basis(base, &incl);
    let p_inv = p.inverse().expect("extended basis is invertible over the local ring");
    let restrict = |op: &AMat| -> AMat {
        let t = p_inv.mul(op).mul(&p);
        for i in eig_rank..n {
            for j in 0..eig_rank {
                assert!(
                    t.get(i, j).is_zero(),
                    "central operators leave the eigenspace stable"
                );
            }
        }
        AMat::from_fn(base, eig_rank, eig_rank, |i, j| t.get(i, j).clone())
    };
    let comp = Gl2Module::from_ops(
        base,
        restrict(m.op_uplus()),
        restrict(m.op_uminus()),
        restrict(m.op_aplus()),
        restrict(m.op_aminus()),
    )?;
    Ok((comp, incl))
}

/// Certify that the exact kernel of s is free on the given lifts: the
/// rational span of all base-monomial multiples of the lifts must have
/// dimension (number of lifts) * dim(base) and exhaust the flattened kernel.
fn certify_free_kernel(
    base: &ArtinLocalRing,
    s: &AMat,
    lifts: &[Vec<RingElem>],
) -> Result<(), Gl2Error> {
    let d = base.dim();
    let kernel_dim = s.flatten_qmat().kernel_basis().len();
    let mut rows = Vec::new();
    for v in lifts {
        for t in 0..d {
            let mut unit = vec![Rational::zero(); d];
            unit[t] = Rational::from_integer(1.into());
            let scaled: Vec<RingElem> = v
                .iter()
                .map(|e| base.elem(base.mul_coords(&unit, &e.coords)))
                .collect();
            rows.push(flatten_vec(base, &scaled));
        }
    }
    let span = QMat::from_rows(rows).rank();
    if span != lifts.len() * d || span != kernel_dim {
        return Err(Gl2Error::NotFree {
            detail: format!(
                "kernel has rational dimension {kernel_dim}, free closure of {} lifts spans {span}",
                lifts.len()
            ),
        });
    }
    Ok(())
}

/// Extend the columns of incl (independent residues) to an invertible
/// square matrix by appending standard basis vectors.
fn extend_to_basis(base: &ArtinLocalRing, incl: &AMat) -> AMat {
    let n = incl.rows;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let res = incl.residue_qmat();
    for j in 0..incl.cols {
        rows.push((0..n).map(|i| res.get(i, j).clone()).collect());
    }
    let mut p = incl.clone();
    let mut rank = QMat::from_rows(rows.clone()).rank();
    assert_eq!(rank, incl.cols, "inclusion columns have independent residues");
    for i in 0..n {
        if p.cols == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::from_integer(1.into());
        let mut trial = rows.clone();
        trial.push(e.clone());
        let r = QMat::from_rows(trial.clone()).rank();
        if r > rank {
            rank = r;
            rows.push(e);
            let mut col = AMat::zero(base, n, 1);
            col.set(i, 0, base.one());
            p = p.hstack(&col);
        }
    }
    assert_eq!(p.cols, n, "residue columns extend to a full basis");
    p
}

/// Split a module into its generalized eigencomponents for the listed
/// characters. Fails unless the components are free and exhaust the module;
/// returns for each character with nonzero component the module, the
/// inclusion, and the projection (block row of the inverse of the assembled
/// basis), which are mutually orthogonal idempotent data.
pub fn decompose_with(
    m: &Gl2Module,
    candidates: &[Character],
) -> Result<Vec<(Character, Gl2Module, AMat, AMat)>, Gl2Error> {
    let base = m.base();
    let n = m.rank();
    let mut parts = Vec::new();
    let mut total = 0usize;
    for chi in candidates {
        let (comp, incl) = generalized_eigenspace(m, chi)?;
        if comp.rank() > 0 {
            total += comp.rank();
            parts.push((chi.clone(), comp, incl));
        }
    }
    if total != n {
        return Err(Gl2Error::NotFree {
            detail: format!("components of rank {total} do not exhaust rank {n}"),
        });
    }
    let mut p = AMat::zero(base, n, 0);
    for (_, _, incl) in &parts {
        p = p.hstack(incl);
    }
    let p_inv = p.inverse().ok_or_else(|| Gl2Error::NotFree {
        detail: "assembled component basis is not invertible".into(),
    })?;
    let mut out = Vec::new();
    let mut offset = 0usize;
    for (chi, comp, incl) in parts {
        let r = comp.rank();
        let proj = AMat::from_fn(base, r, n, |i, j| p_inv.get(offset + i, j).clone());
        offset += r;
        out.push((chi, comp, incl, proj));
    }
    Ok(out)
}

/// Dominant representative of a weight difference under coordinate swap.
pub fn dominant_rep(d: (i64, i64)) -> (i64, i64) {
    if d.0 >= d.1 {
        d
    } else {
        (d.1, d.0)
    }
}

/// Translation functor between infinitesimal characters given by weight
/// pairs: project M to the lambda character, tensor with the
/// finite-dimensional module of extreme weight the dominant representative
/// of mu - lambda, and project to the mu character. The module must already
/// be concentrated at lambda.
pub fn translate_abstract(
    m: &Gl2Module,
    lambda: (i64, i64),
    mu: (i64, i64),
) -> Result<Gl2Module, Gl2Error> {
    let base = m.base();
    let chi_l = Character::from_extreme_weight(base, lambda);
    let (pr_l, _) = generalized_eigenspace(m, &chi_l)?;
    assert_eq!(
        pr_l.rank(),
        m.rank(),
        "module must be concentrated at the source character"
    );
    let nu = dominant_rep((mu.0 - lambda.0, mu.1 - lambda.1));
    let l_nu = weight_module(nu, base);
    let tensor = m.tensor(&l_nu);
    let chi_m = Character::from_extreme_weight(base, mu);
    let (out, _) = generalized_eigenspace(&tensor, &chi_m)?;
    Ok(out)
}

/// Search for a module isomorphism: a map commuting with all four operators
/// whose residue matrix is invertible. The solution space is computed
/// exactly; invertible points are sought deterministically along the moment
/// curve through the solution basis. Returns None when no candidate in the
/// sweep is invertible, which the callers report as non-isomorphic.
pub fn find_intertwiner(m: &Gl2Module, n: &Gl2Module) -> Option<AMat> {
    if m.rank() != n.rank() {
        return None;
    }
    let base = m.base();
    let d = base.dim();
    let rm = m.rank();
    if rm == 0 {
        return Some(AMat::zero(base, 0, 0));
    }
    let unknowns = rm * rm * d;
    let ops = [
        (m.op_uplus().clone(), n.op_uplus().clone()),
        (m.op_uminus().clone(), n.op_uminus().clone()),
        (m.op_aplus().clone(), n.op_aplus().clone()),
        (m.op_aminus().clone(), n.op_aminus().clone()),
    ];
    // Columns of the constraint matrix: image of each coordinate unit of
    // the unknown map under phi -> X_n phi - phi X_m, all four operators
    // stacked.
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(unknowns);
    for i in 0..rm {
        for j in 0..rm {
            for t in 0..d {
                let mut unit = AMat::zero(base, rm, rm);
                let mut coords = vec![Rational::zero(); d];
                coords[t] = Rational::from_integer(1.into());
                unit.set(i, j, base.elem(coords));
                let mut col = Vec::new();
                for (xm, xn) in &ops {
                    let img = xn.mul(&unit).sub(&unit.mul(xm));
                    for a in 0..rm {
                        for b in 0..rm {
                            col.extend(flatten_vec(base, &[img.get(a, b).clone()]));
                        }
                    }
                }
                cols.push(col);
            }
        }
    }
    let rows = cols[0].len();
    let constraint = QMat::from_fn(rows, unknowns, |r, c| cols[c][r].clone());
    let kernel = constraint.kernel_basis();
    if kernel.is_empty() {
        return None;
    }
    let unflatten = |v: &[Rational]| -> AMat {
        AMat::from_fn(base, rm, rm, |i, j| {
            let start = (i * rm + j) * d;
            base.elem(v[start..start + d].to_vec())
        })
    };
    let basis: Vec<AMat> = kernel.iter().map(|v| unflatten(v)).collect();
    // Single basis elements first, then points on the moment curve; the
    // determinant of the residue is a nonzero polynomial on the solution
    // space whenever an isomorphism exists, so low-height points find it.
    let mut candidates: Vec<AMat> = basis.clone();
    let sweep = 4 * rm * kernel.len() + 4;
    for t in 1..=(sweep as i64) {
        let mut acc = AMat::zero(base, rm, rm);
        let mut w = Rational::from_integer(1.into());
        for b in &basis {
            acc = acc.add(&b.scale_rational(&w));
            w *= Rational::from_integer(t.into());
        }
        candidates.push(acc);
    }
    for phi in candidates {
        if phi.residue_qmat().rank() == rm {
            debug_assert!(ops
                .iter()
                .all(|(xm, xn)| xn.mul(&phi) == phi.mul(xm)));
            return Some(phi);
        }
    }
    None
}

/// Multiplicity of the (l+1)-dimensional irreducible inside the m-fold
/// tensor power of the standard 2-dimensional module, by counting weights:
/// the h-weight w occurs with multiplicity binom(m, (m+w)/2), and the
/// irreducible multiplicity is the count at w = l minus the count at
/// w = l + 2. Pure combinatorics, independent of any matrix computation.
pub fn multiplicity_by_weight_count(m: usize, l: usize) -> usize {
    let count = |w: i64| -> usize {
        let m = m as i64;
        if (m + w) % 2 != 0 || w.abs() > m {
            return 0;
        }
        let k = ((m + w) / 2) as u64;
        binomial(m as u64, k)
    };
    (count(l as i64) - count(l as i64 + 2)) as usize
}

fn binomial(n: u64, k: u64) -> usize {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k.min(n - k) {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}
