//! Translation functors on connection windows.
//!
//! Translating a rank-2 window from infinitesimal character lambda to mu
//! tensors with the irreducible of extremal weight mu - lambda and cuts
//! out the mu-isotypic part as an iterated exact kernel of the Casimir
//! (the center acts by a scalar throughout, so its condition is checked
//! rather than imposed).  The kernel is computed over the rationals on a
//! zero-padded working window so that every imposed condition row is a
//! reliable one and so that spurious solutions, which can only live in
//! high t-degrees, stay separated from the honest generators.  Generators
//! are read off by Nakayama from the kernel modulo (T, max ideal), the
//! connection matrix of the output is solved exactly from the degree
//! bands the window certifies, and the result is certified by comparing
//! every available operator through the solved embedding.

use exact_algebra::{hensel_factor, rat, AMat, QMat, Rational, UnivarPoly};
use num_traits::Zero;

use crate::error::ConnError;
use crate::module::{char_poly, ConnectionModule};
use crate::structure::{casimir_scalar_of, standard_g_structure, twist_det, Gl2ConnectionModule};
use crate::tensor::tensor_with_vk;

/// Value of the infinitesimal character of mu on the Casimir.
pub fn character_casimir(mu: (i64, i64)) -> Rational {
    let s = mu.0 - mu.1 + 1;
    rat(s * s - 1, 1)
}

/// Value of the infinitesimal character of mu on the center.
pub fn character_zeta(mu: (i64, i64)) -> Rational {
    rat(mu.0 + mu.1, 1)
}

/// The other integral weight with the same infinitesimal character.
pub fn linked_weight(mu: (i64, i64)) -> (i64, i64) {
    (mu.1 - 1, mu.0 + 1)
}

/// Sorted Hodge-Tate weight pair of the lattice with character mu.
pub fn weights_of_character(mu: (i64, i64)) -> (i64, i64) {
    let a = mu.1;
    let b = mu.0 + 1;
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Matrix product that skips zero entries of the left factor; the
/// operators here are band matrices, so this is much faster than the
/// dense product.
fn mul_sparse(a: &QMat, b: &QMat) -> QMat {
    assert_eq!(a.cols, b.rows, "dimension mismatch");
    let mut out = QMat::zero(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if bkj.is_zero() {
                    continue;
                }
                let cur = out.get(i, j).clone();
                out.set(i, j, cur + aik.clone() * bkj.clone());
            }
        }
    }
    out
}

fn mul_sparse_vec(a: &QMat, v: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.cols, v.len(), "dimension mismatch");
    let mut out = vec![Rational::zero(); a.rows];
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() || v[k].is_zero() {
                continue;
            }
            out[i] += aik.clone() * v[k].clone();
        }
    }
    out
}

/// Multiplication by the u-th basis monomial of the ring, as a rational
/// matrix on a flattened space with `entries` ring entries.
fn monomial_mult_qmat(ring: &exact_algebra::ArtinLocalRing, u: usize, entries: usize) -> QMat {
    let d = ring.dim();
    let mut unit = vec![Rational::zero(); d];
    unit[u] = rat(1, 1);
    let mut cols = Vec::with_capacity(d);
    for v in 0..d {
        let mut ev = vec![Rational::zero(); d];
        ev[v] = rat(1, 1);
        cols.push(ring.mul_coords(&unit, &ev));
    }
    QMat::from_fn(entries * d, entries * d, |i, j| {
        if i / d == j / d {
            cols[j % d][i % d].clone()
        } else {
            Rational::zero()
        }
    })
}

/// Total t-degree of a flattened tensor coordinate: module degree plus
/// V-index.
fn coord_total_degree(idx: usize, d: usize, rank: usize, levels: usize) -> usize {
    let entry = idx / d;
    entry / (rank * levels) + entry % levels
}

fn min_total_degree(v: &[Rational], d: usize, rank: usize, levels: usize) -> Option<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| coord_total_degree(i, d, rank, levels))
        .min()
}

/// Incremental Gaussian row reducer for exact span membership.
struct RowReducer {
    cols: usize,
    /// Reduced rows keyed by their pivot column.
    rows: Vec<Vec<Rational>>,
    pivot_of_row: Vec<usize>,
}

impl RowReducer {
    fn new(cols: usize) -> Self {
        RowReducer { cols, rows: Vec::new(), pivot_of_row: Vec::new() }
    }

    fn reduce(&self, v: &mut Vec<Rational>) {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        for (row, &piv) in self.rows.iter().zip(&self.pivot_of_row) {
            if v[piv].is_zero() {
                continue;
            }
            let c = v[piv].clone();
            for j in piv..self.cols {
                if !row[j].is_zero() {
                    v[j] -= c.clone() * row[j].clone();
                }
            }
        }
    }

    /// Add a vector to the span; returns whether it was new.
    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        self.reduce(&mut v);
        let piv = match v.iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let lead = v[piv].clone();
        for x in v.iter_mut() {
            *x /= lead.clone();
        }
        self.rows.push(v);
        self.pivot_of_row.push(piv);
        true
    }
}

/// Row submatrix keeping the rows selected by the predicate.
fn masked_rows(mat: &QMat, keep: impl Fn(usize) -> bool) -> QMat {
    let rows: Vec<Vec<Rational>> = (0..mat.rows)
        .filter(|i| keep(*i))
        .map(|i| mat.row(i).to_vec())
        .collect();
    if rows.is_empty() {
        QMat::zero(0, mat.cols)
    } else {
        QMat::from_rows(rows)
    }
}

fn masked_vec(v: &[Rational], keep: impl Fn(usize) -> bool) -> Vec<Rational> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| keep(*i))
        .map(|(_, x)| x.clone())
        .collect()
}

/// Zero-pad the coefficient window of a module: the window is the
/// polynomial representative of the connection, so padding is the
/// canonical extension.
fn padded(m: &ConnectionModule, extra: usize) -> ConnectionModule {
    let mut coeffs = m.matrix.coeffs.clone();
    let zero = AMat::zero(&m.base, m.rank, m.rank);
    coeffs.resize(m.truncation + extra, zero);
    let mut out = ConnectionModule::new(&m.base, m.rank, m.truncation + extra, coeffs);
    out.window_shift = m.window_shift;
    out
}

/// A translated window together with its certified embedding into the
/// tensor carrier it was cut from.
#[derive(Clone, Debug)]
pub struct TranslationData {
    pub source: ConnectionModule,
    pub lam: (i64, i64),
    pub mu: (i64, i64),
    /// Level of the tensored irreducible.
    pub level: usize,
    /// Power of the determinant character twisted in.
    pub det_twist: i64,
    pub predicted_rank: usize,
    /// Whether the isotypic part is the whole tensor carrier.
    pub whole_tensor: bool,
    /// The tensor carrier on the padded working window.
    pub tensor: Gl2ConnectionModule,
    /// The solved translated module.
    pub output: ConnectionModule,
    /// Flattened kernel generators inside the tensor carrier.
    pub generators: Vec<Vec<Rational>>,
    /// Rational matrix of e_b t^s -> T^s g_b from the flattened output to
    /// the flattened tensor carrier.
    pub embedding: QMat,
}

struct TensorSetup {
    tensor: Gl2ConnectionModule,
    level: usize,
    det_twist: i64,
    selected: Vec<usize>,
    jmax: usize,
    mask_bound: usize,
}

/// Common setup for the kernel route and the eigenspace oracle: pad the
/// window, build the twisted tensor carrier, and fix the Casimir power
/// and reliability mask.
fn tensor_setup(
    m: &ConnectionModule,
    lam: (i64, i64),
    mu: (i64, i64),
) -> Result<TensorSetup, ConnError> {
    assert_eq!(m.rank, 2, "translation is defined for rank-2 windows");
    let weights = m.weights()?;
    let spread = (weights[weights.len() - 1] - weights[0]) as usize;

    // The source must actually carry the character lambda.
    let sen = m.sen_polynomial();
    assert_eq!(
        sen.gamma1().residue() - rat(1, 1),
        character_zeta(lam),
        "the source center character must match lambda"
    );
    assert_eq!(
        casimir_scalar_of(m).residue(),
        character_casimir(lam),
        "the source Casimir character must match lambda"
    );

    let diff = (mu.0 - lam.0, mu.1 - lam.1);
    let (a, b) = if diff.0 >= diff.1 { diff } else { (diff.1, diff.0) };
    let level = (a - b) as usize;
    if m.truncation < spread + level + 2 {
        return Err(ConnError::WindowTooSmall);
    }

    let reflected = linked_weight(mu);
    let selected: Vec<usize> = (0..=level)
        .filter(|&i| {
            let w = (lam.0 + i as i64 + b, lam.1 + (level - i) as i64 + b);
            w == mu || w == reflected
        })
        .collect();
    assert!(
        !selected.is_empty(),
        "the target character must appear in the tensor decomposition"
    );

    let jmax = m.base.nilpotency_index() + 1;
    // Large enough that the junk separation threshold clears both the
    // honest generator degrees and the full output window.
    let n_work = std::cmp::max(spread + level + 2 * jmax + 2, m.truncation + 2 * jmax - 1);
    let m_work = padded(m, n_work - m.truncation);
    let g_work = standard_g_structure(&m_work)?;
    let tensor = twist_det(&tensor_with_vk(&g_work, level)?, b);
    Ok(TensorSetup {
        tensor,
        level,
        det_twist: b,
        selected,
        jmax,
        mask_bound: n_work - jmax,
    })
}

/// Power of the shifted Casimir used for the isotypic kernel.
fn casimir_kernel_power(setup: &TensorSetup, mu: (i64, i64)) -> QMat {
    let tensor = &setup.tensor;
    let ring = tensor.ring();
    let c0 = ring.from_rational(&character_casimir(mu));
    let x = tensor
        .casimir_op()
        .sub(&tensor.scalar_op(&c0))
        .flatten_qmat();
    // The center acts by a scalar on the whole carrier; translation is
    // only meaningful when it already matches mu.
    let zeta_gap = tensor
        .zeta_op()
        .sub(&tensor.scalar_op(&ring.from_rational(&character_zeta(mu))));
    assert!(
        zeta_gap.residue_qmat().is_zero(),
        "the center character must match mu modulo nilpotents"
    );
    let mut power = x.clone();
    for _ in 1..setup.jmax {
        power = mul_sparse(&x, &power);
    }
    power
}

/// Translate a rank-2 connection window from character lambda to mu.
///
/// The output is a free window of the predicted rank carrying the
/// predicted Sen polynomial, solved and certified from the tensor
/// carrier: the returned embedding intertwines the module variable, the
/// connection, and (for rank-2 outputs) all four gl2 generators on the
/// bands the window makes reliable.  Failure of the generator count is
/// `NotFree`; a window too short for the requested translation is
/// `WindowTooSmall`.
pub fn translate_conn(
    m: &ConnectionModule,
    lam: (i64, i64),
    mu: (i64, i64),
) -> Result<TranslationData, ConnError> {
    let setup = tensor_setup(m, lam, mu)?;
    let tensor = &setup.tensor;
    let ring = tensor.ring().clone();
    let d = ring.dim();
    let levels = setup.level + 1;
    let rank = m.rank;
    let n_work = tensor.module.truncation;
    let dim_q = tensor.dim() * d;
    let r = 2 * setup.selected.len();
    let whole = setup.selected.len() == levels;

    // Isotypic kernel from the reliable condition rows only.
    let power = casimir_kernel_power(&setup, mu);
    let band_of = |idx: usize| (idx / d) / (rank * levels);
    let conditions = masked_rows(&power, |row| band_of(row) < setup.mask_bound);
    let kernel = conditions.kernel_basis();

    // Nakayama: generators of the kernel modulo (T, max ideal).  Spurious
    // kernel content can only live in total degrees at or above the
    // separation threshold, so those coordinates are quotiented away
    // outright; what remains of the kernel modulo the reducer span is
    // exactly the set of honest generator classes.
    let t_q = tensor.t_op.flatten_qmat();
    let mults: Vec<QMat> = (1..d)
        .map(|u| monomial_mult_qmat(&ring, u, tensor.dim()))
        .collect();
    let threshold = n_work - 2 * setup.jmax;
    let mut reducer = RowReducer::new(dim_q);
    for idx in 0..dim_q {
        if coord_total_degree(idx, d, rank, levels) >= threshold {
            let mut unit = vec![Rational::zero(); dim_q];
            unit[idx] = rat(1, 1);
            reducer.insert(unit);
        }
    }
    for v in &kernel {
        reducer.insert(mul_sparse_vec(&t_q, v));
        for mu_mat in &mults {
            reducer.insert(mul_sparse_vec(mu_mat, v));
        }
    }
    let mut sorted_kernel: Vec<&Vec<Rational>> = kernel.iter().collect();
    sorted_kernel.sort_by_key(|v| min_total_degree(v, d, rank, levels).unwrap_or(usize::MAX));
    let mut picked: Vec<Vec<Rational>> = Vec::new();
    for v in sorted_kernel {
        if reducer.insert(v.clone()) {
            // Zero the junk tail of the representative: everything below
            // the threshold is exact, everything above is quotiented out.
            let mut rep = v.clone();
            for (idx, x) in rep.iter_mut().enumerate() {
                if coord_total_degree(idx, d, rank, levels) >= threshold {
                    *x = Rational::zero();
                }
            }
            picked.push(rep);
        }
    }
    if picked.len() != r {
        if std::env::var("TRANSLATE_DEBUG").is_ok() {
            eprintln!(
                "kernel dim {}, picked {}, want {}, n_work {}, threshold {}, degs {:?}",
                kernel.len(),
                picked.len(),
                r,
                n_work,
                threshold,
                kernel
                    .iter()
                    .map(|v| min_total_degree(v, d, rank, levels))
                    .collect::<Vec<_>>()
            );
            for (idx, v) in picked.iter().enumerate() {
                let support: Vec<(usize, usize, usize, usize, String)> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| {
                        let entry = i / d;
                        let band = entry / (rank * levels);
                        let within = entry % (rank * levels);
                        (band, within / levels, within % levels, i % d, format!("{x}"))
                    })
                    .collect();
                eprintln!("picked[{idx}]: {support:?}");
            }
        }
        return Err(ConnError::NotFree);
    }

    let dmax = picked
        .iter()
        .map(|v| min_total_degree(v, d, rank, levels).expect("generator is nonzero"))
        .max()
        .expect("at least one generator");
    if m.truncation < dmax + 3 {
        return Err(ConnError::WindowTooSmall);
    }
    let n_out = std::cmp::min(m.truncation - 1 - dmax, threshold);

    // Embedding columns eta_u T^s g_b, ordered like the flattened output.
    let mut t_powers_of_gens: Vec<Vec<Vec<Rational>>> = vec![picked.clone()];
    for _ in 1..n_out {
        let prev = t_powers_of_gens.last().expect("nonempty");
        let next: Vec<Vec<Rational>> = prev.iter().map(|v| mul_sparse_vec(&t_q, v)).collect();
        t_powers_of_gens.push(next);
    }
    let mut embed_cols: Vec<Vec<Rational>> = Vec::with_capacity(r * n_out * d);
    for s in 0..n_out {
        for g in &t_powers_of_gens[s] {
            embed_cols.push(g.clone());
            for mu_mat in &mults {
                embed_cols.push(mul_sparse_vec(mu_mat, g));
            }
        }
    }
    let embedding = QMat::from_fn(dim_q, r * n_out * d, |i, j| embed_cols[j][i].clone());

    // Solve the connection matrix of the output on the certified rows.
    let keep_solve =
        |idx: usize| coord_total_degree(idx, d, rank, levels) < n_out && band_of(idx) < setup.mask_bound;
    let lhs = masked_rows(&embedding, keep_solve);
    let a_plus_q = tensor.a_plus.flatten_qmat();
    let mut coeffs = vec![AMat::zero(&ring, r, r); n_out];
    for (a, g) in picked.iter().enumerate() {
        let rhs_full = mul_sparse_vec(&a_plus_q, g);
        let rhs = masked_vec(&rhs_full, keep_solve);
        let x = match lhs.solve(&rhs) {
            Some(x) => x,
            None => {
                if std::env::var("TRANSLATE_DEBUG").is_ok() {
                    eprintln!(
                        "solve failed for generator {a}: lhs {}x{}, n_out {n_out}, dmax {dmax}",
                        lhs.rows, lhs.cols
                    );
                }
                return Err(ConnError::NotFree);
            }
        };
        for mcoef in 0..n_out {
            for bgen in 0..r {
                let coords: Vec<Rational> =
                    (0..d).map(|u| x[(mcoef * r + bgen) * d + u].clone()).collect();
                coeffs[mcoef].set(bgen, a, ring.elem(coords));
            }
        }
    }
    let mut output = ConnectionModule::new(&ring, r, n_out, coeffs);
    output.window_shift = m.window_shift + setup.det_twist;

    // Predicted Sen polynomial.
    let predicted = predicted_sen(m, mu, &setup)?;
    let actual = char_poly(&output.residue_matrix());
    assert_eq!(
        actual.coeffs(),
        predicted.coeffs(),
        "the translated window must carry the predicted Sen polynomial"
    );

    // Certify the embedding against every operator the output carries.
    let to_check: Vec<(&str, AMat, AMat, usize)> = if r == 2 {
        let g_out = standard_g_structure(&output)?;
        vec![
            ("t", g_out.t_op.clone(), tensor.t_op.clone(), n_out),
            ("a+", g_out.a_plus.clone(), tensor.a_plus.clone(), n_out),
            ("a-", g_out.a_minus.clone(), tensor.a_minus.clone(), n_out),
            ("u-", g_out.u_minus.clone(), tensor.u_minus.clone(), n_out - 1),
        ]
    } else {
        vec![
            ("t", output.t_matrix(), tensor.t_op.clone(), n_out),
            ("a+", output.nabla_matrix(), tensor.a_plus.clone(), n_out),
        ]
    };
    for (name, op_out, op_tensor, bound) in to_check {
        let lhs = mul_sparse(&embedding, &op_out.flatten_qmat());
        let rhs = mul_sparse(&op_tensor.flatten_qmat(), &embedding);
        let keep = |idx: usize| coord_total_degree(idx, d, rank, levels) < bound;
        assert_eq!(
            masked_rows(&lhs, keep),
            masked_rows(&rhs, keep),
            "the embedding must intertwine {name} on the certified bands"
        );
    }

    Ok(TranslationData {
        source: m.clone(),
        lam,
        mu,
        level: setup.level,
        det_twist: setup.det_twist,
        predicted_rank: r,
        whole_tensor: whole,
        tensor: setup.tensor,
        output,
        generators: picked,
        embedding,
    })
}

/// Exact factorization of a rank-2 Sen polynomial with distinct integer
/// weights into its two roots, low weight first.
pub fn split_sen_roots(
    m: &ConnectionModule,
) -> Result<(exact_algebra::RingElem, exact_algebra::RingElem), ConnError> {
    let weights = m.weights()?;
    let (w0, w1) = (weights[0], weights[1]);
    assert!(w1 > w0, "root splitting needs distinct weights");
    let ring = &m.base;
    let sen = m.sen_polynomial();
    let q0 = UnivarPoly::from_residue(ring, &[rat(-w1, 1), rat(1, 1)]);
    let s0 = UnivarPoly::from_residue(ring, &[rat(-w0, 1), rat(1, 1)]);
    let (q, s) = hensel_factor(&sen, &q0, &s0).expect("distinct weights split");
    let high = q.coeff(0).neg();
    let low = s.coeff(0).neg();
    Ok((low, high))
}

/// Sen polynomial the translated window must carry.
fn predicted_sen(
    m: &ConnectionModule,
    mu: (i64, i64),
    setup: &TensorSetup,
) -> Result<UnivarPoly, ConnError> {
    let ring = &m.base;
    let sen = m.sen_polynomial();
    if setup.selected.len() == 1 {
        let (h1, h2) = weights_of_character(mu);
        let weights = m.weights()?;
        let (w0, w1) = (weights[0], weights[1]);
        if w1 == w0 {
            assert_eq!(
                h1, h2,
                "translating out of equal weights must land on equal weights"
            );
            return Ok(sen.shift(&ring.from_i64(-(h1 - w0))));
        }
        // The nilpotent parts of the two roots ride along and the integer
        // parts move to the target weights, low with low, high with high.
        let (low, high) = split_sen_roots(m)?;
        let root1 = low.add(&ring.from_i64(h1 - w0));
        let root2 = high.add(&ring.from_i64(h2 - w1));
        let lin1 = UnivarPoly::from_coeffs(ring, vec![root1.neg(), ring.one()]);
        let lin2 = UnivarPoly::from_coeffs(ring, vec![root2.neg(), ring.one()]);
        Ok(lin1.mul(&lin2))
    } else {
        let mut acc = UnivarPoly::constant(&ring.one());
        for &i in &setup.selected {
            let shift = ring.from_i64(-((i as i64) + setup.det_twist));
            acc = acc.mul(&sen.shift(&shift));
        }
        Ok(acc)
    }
}

/// V-index-zero projection of the translated lattice: rational spanning
/// rows of the image lattice inside the flattened source window at the
/// working truncation, saturated under multiplication by t and the ring.
pub fn projected_span(data: &TranslationData) -> Vec<Vec<Rational>> {
    let d = data.tensor.ring().dim();
    let levels = data.level + 1;
    let rank = data.source.rank;
    let n_work = data.tensor.module.truncation;
    let mut rows = Vec::with_capacity(data.embedding.cols);
    for j in 0..data.embedding.cols {
        let mut row = vec![Rational::zero(); rank * n_work * d];
        for entry in 0..rank * n_work {
            for u in 0..d {
                row[entry * d + u] = data.embedding.get((entry * levels) * d + u, j).clone();
            }
        }
        rows.push(row);
    }
    rows
}

/// Independent eigenspace oracle for the translated lattice: the raw
/// stabilized kernel of the shifted Casimir power with no reliability
/// masking, no Nakayama step, and no connection solve, projected to
/// V-index zero and saturated into a lattice span.
pub fn oracle_translated_span(
    m: &ConnectionModule,
    lam: (i64, i64),
    mu: (i64, i64),
) -> Result<Vec<Vec<Rational>>, ConnError> {
    let setup = tensor_setup(m, lam, mu)?;
    let tensor = &setup.tensor;
    let ring = tensor.ring();
    let d = ring.dim();
    let levels = setup.level + 1;
    let rank = m.rank;
    let n_work = tensor.module.truncation;
    let power = casimir_kernel_power(&setup, mu);
    let kernel = power.kernel_basis();

    let t_work = tensor.module.t_matrix().flatten_qmat();
    let mults: Vec<QMat> = (1..d)
        .map(|u| monomial_mult_qmat(ring, u, rank * n_work))
        .collect();
    let mut rows = Vec::new();
    for v in &kernel {
        let mut proj = vec![Rational::zero(); rank * n_work * d];
        for entry in 0..rank * n_work {
            for u in 0..d {
                proj[entry * d + u] = v[(entry * levels) * d + u].clone();
            }
        }
        let mut shifted = proj;
        for _ in 0..n_work {
            rows.push(shifted.clone());
            for mu_mat in &mults {
                rows.push(mul_sparse_vec(mu_mat, &shifted));
            }
            shifted = mul_sparse_vec(&t_work, &shifted);
            if shifted.iter().all(|x| x.is_zero()) {
                break;
            }
        }
    }
    Ok(rows)
}

/// Lattice characterized by the top Sen root: window elements v with
/// prod_{i=0}^{k-1} (nabla - high - i) v = 0 mod t^k, for a weights-(0,k)
/// window.  Returns the full rational solution space of the window.
pub fn preimage_lattice_top(m: &ConnectionModule) -> Result<Vec<Vec<Rational>>, ConnError> {
    let weights = m.weights()?;
    assert_eq!(weights[0], 0, "the preimage characterization expects weights (0, k)");
    let k = weights[1] as usize;
    assert!(k >= 1, "the preimage characterization needs k >= 1");
    let (_, high) = split_sen_roots(m)?;
    let ring = &m.base;
    let d = ring.dim();
    let nab = m.nabla_matrix();
    let ident = AMat::identity(ring, m.flat_dim());
    let mut op = ident.clone();
    for i in 0..k {
        let shift = high.add(&ring.from_i64(i as i64));
        op = nab.sub(&ident.scale(&shift)).mul(&op);
    }
    let flat = op.flatten_qmat();
    let conditions = masked_rows(&flat, |idx| (idx / d) / m.rank < k);
    Ok(conditions.kernel_basis())
}

/// Lattice characterized by the low Sen root chain: window elements v
/// with prod_{i=0}^{j} (nabla - low - i) v = 0 mod t^{j+1} for all
/// j < steps, for a weights-(0,k) window.
pub fn membership_lattice_low(
    m: &ConnectionModule,
    steps: usize,
) -> Result<Vec<Vec<Rational>>, ConnError> {
    assert!(steps >= 1, "the membership characterization needs at least one step");
    let weights = m.weights()?;
    assert_eq!(weights[0], 0, "the membership characterization expects weights (0, k)");
    let (low, _) = split_sen_roots(m)?;
    let ring = &m.base;
    let d = ring.dim();
    let nab = m.nabla_matrix();
    let ident = AMat::identity(ring, m.flat_dim());
    let mut op = ident.clone();
    let mut stacked: Vec<Vec<Rational>> = Vec::new();
    for j in 0..steps {
        let shift = low.add(&ring.from_i64(j as i64));
        op = nab.sub(&ident.scale(&shift)).mul(&op);
        let flat = op.flatten_qmat();
        let cond = masked_rows(&flat, |idx| (idx / d) / m.rank < j + 1);
        for i in 0..cond.rows {
            stacked.push(cond.row(i).to_vec());
        }
    }
    Ok(QMat::from_rows(stacked).kernel_basis())
}

/// Whether two window lattice spans agree modulo t^cut.  Rows may come
/// from windows of different lengths; only the coordinates below the cut
/// enter the comparison.
pub fn window_spans_equal_mod(
    a: &[Vec<Rational>],
    b: &[Vec<Rational>],
    rank: usize,
    d: usize,
    cut: usize,
) -> bool {
    let ncols = cut * rank * d;
    let clip = |rows: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| {
                let mut c = r.clone();
                assert!(c.len() >= ncols, "window too short for the requested cut");
                c.truncate(ncols);
                c
            })
            .collect()
    };
    let ra = clip(a);
    let rb = clip(b);
    let rank_a = QMat::from_rows(ra.clone()).rank();
    let rank_b = QMat::from_rows(rb.clone()).rank();
    let mut all = ra;
    all.extend(rb);
    let rank_all = QMat::from_rows(all).rank();
    rank_a == rank_b && rank_a == rank_all
}

/// Whether a window lattice span contains every t^band basis vector,
/// working modulo the coordinates at `modulo_band` and above.  Pass the
/// window length as `modulo_band` for an exact containment test.
pub fn span_contains_band_units(
    span: &[Vec<Rational>],
    rank: usize,
    d: usize,
    band: usize,
    modulo_band: usize,
) -> bool {
    let cols = span.first().map_or(0, |r| r.len());
    let mut rows = span.to_vec();
    for idx in modulo_band * rank * d..cols {
        let mut unit = vec![Rational::zero(); cols];
        unit[idx] = rat(1, 1);
        rows.push(unit);
    }
    let mat = QMat::from_rows(rows);
    for j in 0..rank {
        for u in 0..d {
            let mut unit = vec![Rational::zero(); mat.cols];
            unit[(band * rank + j) * d + u] = rat(1, 1);
            if !mat.row_space_contains(&unit) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_algebra::{artin_ring_build, ArtinLocalRing, MonomialOrder, MPoly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qq() -> ArtinLocalRing {
        artin_ring_build(&[], &[]).expect("rational base ring")
    }

    fn dual() -> ArtinLocalRing {
        let vars = ["e"];
        let sq = MPoly::parse("e^2", &vars, MonomialOrder::DegRevLex).expect("parse e^2");
        artin_ring_build(&vars, &[sq]).expect("dual numbers")
    }

    fn de_rham_01(ring: &ArtinLocalRing, truncation: usize) -> ConnectionModule {
        let a0 = AMat::from_rational_rows(ring, vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ]);
        ConnectionModule::constant(ring, &a0, truncation)
    }

    fn seeded_01(ring: &ArtinLocalRing, truncation: usize, seed: u64) -> ConnectionModule {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = vec![AMat::from_rational_rows(ring, vec![
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ])];
        for _ in 1..truncation {
            coeffs.push(AMat::from_fn(ring, 2, 2, |_, _| {
                ring.from_i64(rng.gen_range(-2..=2))
            }));
        }
        ConnectionModule::new(ring, 2, truncation, coeffs)
    }

    #[test]
    fn de_rham_translation_to_equal_weights() {
        // Weights (0,1), lambda = (0,0) to mu = (0,1): the translated
        // lattice is spanned by t e1 and e2, with both weights equal 1.
        let ring = qq();
        let m = de_rham_01(&ring, 6);
        let data = translate_conn(&m, (0, 0), (0, 1)).expect("translation");
        assert_eq!(data.output.rank, 2, "predicted rank two");
        assert_eq!(
            data.output.weights().expect("integral weights"),
            vec![1, 1],
            "both weights must be one"
        );

        let span = projected_span(&data);
        let d = 1;
        let n = 6;
        let mut te1 = vec![Rational::zero(); 2 * data.tensor.module.truncation * d];
        te1[(1 * 2 + 0) * d] = rat(1, 1);
        let mut e2 = vec![Rational::zero(); 2 * data.tensor.module.truncation * d];
        e2[1 * d] = rat(1, 1);
        let t_q = data.tensor.module.t_matrix().flatten_qmat();
        let mut explicit = Vec::new();
        for mut v in [te1, e2] {
            for _ in 0..n {
                explicit.push(v.clone());
                v = super::mul_sparse_vec(&t_q, &v);
            }
        }
        assert!(
            window_spans_equal_mod(&span, &explicit, 2, d, 3),
            "the projected lattice must be spanned by t e1 and e2"
        );
        assert!(
            span_contains_band_units(&span, 2, d, 1, 4),
            "t D must lie inside modulo high bands"
        );

        let characterized = preimage_lattice_top(&m).expect("closed form");
        assert!(
            window_spans_equal_mod(&span, &characterized, 2, d, 3),
            "the kernel route must match the preimage characterization"
        );
    }

    #[test]
    fn whole_tensor_translation_from_equal_weights() {
        // Trivial weight-(0,0) window, lambda = (-1,0) to mu = (0,0): the
        // isotypic part is the whole tensor with Sen polynomial T^2 (T-1)^2.
        let ring = qq();
        let m = ConnectionModule::trivial(&ring, 2, 6);
        let data = translate_conn(&m, (-1, 0), (0, 0)).expect("translation");
        assert!(data.whole_tensor, "both tensor levels carry the target character");
        assert_eq!(data.output.rank, 4, "rank must be n(l+1) = 4");
        assert_eq!(
            data.output.weights().expect("integral weights"),
            vec![0, 0, 1, 1],
            "Sen polynomial must be T^2 (T-1)^2"
        );
    }

    #[test]
    fn membership_characterization_matches_translation() {
        // Weights (0,1) to weights (0,2): lambda = (0,0) to mu = (1,0).
        let ring = qq();
        let m = de_rham_01(&ring, 7);
        let data = translate_conn(&m, (0, 0), (1, 0)).expect("translation");
        assert_eq!(
            data.output.weights().expect("integral weights"),
            vec![0, 2],
            "target weights (0, 2)"
        );
        let span = projected_span(&data);
        let characterized = membership_lattice_low(&m, 1).expect("closed form");
        assert!(
            window_spans_equal_mod(&span, &characterized, 2, 1, 3),
            "the kernel route must match the membership characterization"
        );
    }

    #[test]
    fn oracle_agrees_with_kernel_route() {
        let ring = dual();
        let m = seeded_01(&ring, 6, 9);
        let data = translate_conn(&m, (0, 0), (0, 1)).expect("translation");
        let span = projected_span(&data);
        let oracle = oracle_translated_span(&m, (0, 0), (0, 1)).expect("oracle");
        assert!(
            window_spans_equal_mod(&span, &oracle, 2, ring.dim(), 3),
            "kernel route and eigenspace oracle must agree"
        );
    }

    #[test]
    fn too_small_window_is_rejected() {
        let ring = qq();
        let m = de_rham_01(&ring, 3);
        assert_eq!(
            translate_conn(&m, (0, 0), (0, 1)).err(),
            Some(ConnError::WindowTooSmall),
            "a three-band window cannot certify this translation"
        );
    }
}
