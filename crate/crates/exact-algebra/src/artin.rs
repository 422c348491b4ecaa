use crate::error::AlgebraError;
use crate::groebner::{buchberger, normal_form};
use crate::linalg::QMat;
use crate::mpoly::{cmp_mono, mono_divides, MPoly, MonomialOrder};
use crate::rational::{binom_rational, rat, Rational};
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Finite-dimensional local quotient of a rational polynomial ring, with an
/// explicit monomial basis and multiplication table so that all later
/// arithmetic is plain rational linear algebra.
///
/// Invariants established by [`artin_ring_build`]:
/// - basis[0] is the monomial 1 and the basis is sorted ascending in
///   degrevlex;
/// - every generator is nilpotent; the span of the nonconstant basis
///   monomials is the nilradical, and the residue ring modulo it is Q;
/// - the multiplication table is commutative and associative (checked on all
///   basis triples at build time).
#[derive(Clone)]
pub struct ArtinLocalRing {
    inner: Arc<RingData>,
}

struct RingData {
    generators: Vec<String>,
    ideal: Vec<MPoly>,
    ideal_gb: Vec<MPoly>,
    basis: Vec<Vec<u32>>,
    // table[i][j] = coordinates of basis[i] * basis[j].
    table: Vec<Vec<Vec<Rational>>>,
    nilradical: Vec<usize>,
    nilpotency_index: usize,
}

impl PartialEq for ArtinLocalRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.generators == other.inner.generators
                && self.inner.ideal_gb == other.inner.ideal_gb)
    }
}
impl Eq for ArtinLocalRing {}

impl fmt::Debug for ArtinLocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Q[{}]/({})",
            self.inner.generators.join(","),
            self.inner.ideal.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
        )
    }
}

/// Build the quotient Q[generators]/(ideal_generators) as an explicit
/// Artinian local ring. Errors when the quotient is infinite-dimensional
/// (some generator has no power in the ideal) or fails to be local with
/// rational residue field.
pub fn artin_ring_build(
    generators: &[&str],
    ideal_generators: &[MPoly],
) -> Result<ArtinLocalRing, AlgebraError> {
    let order = MonomialOrder::DegRevLex;
    for p in ideal_generators {
        assert_eq!(
            p.vars,
            generators.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "ideal generator over a different variable list"
        );
    }
    let gens: Vec<MPoly> = ideal_generators.iter().map(|p| p.with_order(order)).collect();
    let gb = buchberger(&gens);
    if gb.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Err(AlgebraError::NotLocal { reason: "ideal is the unit ideal".into() });
    }
    let n = generators.len();
    // The staircase is finite iff each variable has a pure power among the
    // leading monomials.
    let mut bound = vec![0u32; n];
    for (i, name) in generators.iter().enumerate() {
        let mut d: Option<u32> = None;
        for g in &gb {
            let e = g.leading().unwrap().0;
            if e[i] > 0 && e.iter().enumerate().all(|(j, &x)| j == i || x == 0) {
                d = Some(d.map_or(e[i], |cur: u32| cur.min(e[i])));
            }
        }
        match d {
            Some(x) => bound[i] = x,
            None => return Err(AlgebraError::NotArtinian { generator: name.to_string() }),
        }
    }
    let leads: Vec<Vec<u32>> = gb.iter().map(|g| g.leading().unwrap().0.clone()).collect();
    let mut basis: Vec<Vec<u32>> = Vec::new();
    let mut stack = vec![vec![0u32; 0]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == n {
            if !leads.iter().any(|l| mono_divides(l, &prefix)) {
                basis.push(prefix);
            }
            continue;
        }
        let i = prefix.len();
        for e in (0..bound[i]).rev() {
            let mut next = prefix.clone();
            next.push(e);
            stack.push(next);
        }
    }
    basis.sort_by(|a, b| cmp_mono(order, a, b));
    assert!(basis[0].iter().all(|&e| e == 0), "1 must be a basis monomial");
    let dim = basis.len();

    // Nilpotency of each generator: x is nilpotent iff x^dim reduces to 0.
    for (i, name) in generators.iter().enumerate() {
        let mut exp = vec![0u32; n];
        exp[i] = dim as u32;
        let mut p = MPoly::zero(generators, order);
        p.add_term(exp, Rational::one());
        if !normal_form(&p, &gb).is_zero() {
            return Err(AlgebraError::NotLocal {
                reason: format!("generator `{name}` is not nilpotent in the quotient"),
            });
        }
    }

    let index_of = |exp: &[u32]| -> usize {
        basis.iter().position(|b| b == exp).expect("normal form outside staircase")
    };
    let to_coords = |p: &MPoly| -> Vec<Rational> {
        let mut coords = vec![Rational::zero(); dim];
        for (e, c) in p.iter_terms() {
            coords[index_of(e)] = c.clone();
        }
        coords
    };
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut prod = MPoly::zero(generators, order);
            prod.add_term(
                basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect(),
                Rational::one(),
            );
            let coords = to_coords(&normal_form(&prod, &gb));
            table[i][j] = coords.clone();
            table[j][i] = coords;
        }
    }

    let nilradical: Vec<usize> = (1..dim).collect();
    let ring = ArtinLocalRing {
        inner: Arc::new(RingData {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            ideal: ideal_generators.to_vec(),
            ideal_gb: gb,
            basis,
            table,
            nilradical,
            nilpotency_index: 0,
        }),
    };
    // Associativity and commutativity of the table on all basis triples.
    for i in 0..dim {
        for j in 0..dim {
            assert_eq!(ring.mul_coords(&ring.basis_coords(i), &ring.basis_coords(j)),
                        ring.mul_coords(&ring.basis_coords(j), &ring.basis_coords(i)));
            for k in 0..dim {
                let left = ring.mul_coords(
                    &ring.mul_coords(&ring.basis_coords(i), &ring.basis_coords(j)),
                    &ring.basis_coords(k),
                );
                let right = ring.mul_coords(
                    &ring.basis_coords(i),
                    &ring.mul_coords(&ring.basis_coords(j), &ring.basis_coords(k)),
                );
                assert_eq!(left, right, "multiplication table is not associative");
            }
        }
    }
    // Nilpotency index of the nilradical: least e with N^e = 0.
    let idx = {
        let mut e = 1usize;
        let mut span: Vec<Vec<Rational>> =
            ring.inner.nilradical.iter().map(|&i| ring.basis_coords(i)).collect();
        loop {
            if span.is_empty() {
                break e;
            }
            let mut next: Vec<Vec<Rational>> = Vec::new();
            for &i in &ring.inner.nilradical {
                for v in &span {
                    next.push(ring.mul_coords(&ring.basis_coords(i), v));
                }
            }
            let mat = QMat::from_rows(next.clone());
            let rr = mat.rref();
            span = (0..rr.rank).map(|r| rr.mat.row(r).to_vec()).collect();
            e += 1;
            assert!(e <= dim + 1, "nilradical power chain failed to terminate");
        }
    };
    let mut data = Arc::try_unwrap(ring.inner).ok().expect("sole owner during build");
    data.nilpotency_index = idx;
    Ok(ArtinLocalRing { inner: Arc::new(data) })
}

impl ArtinLocalRing {
    pub fn dim(&self) -> usize {
        self.inner.basis.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.inner.generators
    }

    pub fn ideal(&self) -> &[MPoly] {
        &self.inner.ideal
    }

    pub fn basis_monomials(&self) -> &[Vec<u32>] {
        &self.inner.basis
    }

    /// Indices of the basis monomials spanning the nilradical (all but 1).
    pub fn nilradical_indices(&self) -> &[usize] {
        &self.inner.nilradical
    }

    /// Least e with (nilradical)^e = 0; equals 1 exactly over the field Q.
    pub fn nilpotency_index(&self) -> usize {
        self.inner.nilpotency_index
    }

    pub fn is_field(&self) -> bool {
        self.dim() == 1
    }

    /// The rationals presented as the one-dimensional quotient Q[x]/(x).
    pub fn rationals() -> ArtinLocalRing {
        let x = MPoly::var(&["x"], MonomialOrder::DegRevLex, "x");
        artin_ring_build(&["x"], &[x]).expect("rational base ring builds")
    }

    fn basis_coords(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    pub fn mul_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let dim = self.dim();
        let mut out = vec![Rational::zero(); dim];
        for i in 0..dim {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if b[j].is_zero() {
                    continue;
                }
                let f = &a[i] * &b[j];
                for (k, t) in self.inner.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += t * &f;
                    }
                }
            }
        }
        out
    }

    pub fn zero(&self) -> RingElem {
        RingElem { ring: self.clone(), coords: vec![Rational::zero(); self.dim()] }
    }

    pub fn one(&self) -> RingElem {
        self.from_rational(&Rational::one())
    }

    pub fn from_rational(&self, c: &Rational) -> RingElem {
        let mut coords = vec![Rational::zero(); self.dim()];
        coords[0] = c.clone();
        RingElem { ring: self.clone(), coords }
    }

    pub fn from_i64(&self, c: i64) -> RingElem {
        self.from_rational(&rat(c, 1))
    }

    /// The image of a named generator.
    pub fn gen(&self, name: &str) -> RingElem {
        let idx = self
            .inner
            .generators
            .iter()
            .position(|g| g == name)
            .unwrap_or_else(|| panic!("unknown generator `{name}`"));
        let mut exp = vec![0u32; self.inner.generators.len()];
        exp[idx] = 1;
        let mut p = MPoly::zero(
            &self.inner.generators.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            MonomialOrder::DegRevLex,
        );
        p.add_term(exp, Rational::one());
        self.from_mpoly(&p)
    }

    pub fn elem(&self, coords: Vec<Rational>) -> RingElem {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        RingElem { ring: self.clone(), coords }
    }

    /// Reduce a polynomial in the generators and read off basis coordinates.
    pub fn from_mpoly(&self, p: &MPoly) -> RingElem {
        let nf = normal_form(&p.with_order(MonomialOrder::DegRevLex), &self.inner.ideal_gb);
        let mut coords = vec![Rational::zero(); self.dim()];
        for (e, c) in nf.iter_terms() {
            let idx = self
                .inner
                .basis
                .iter()
                .position(|b| b == e)
                .expect("normal form outside staircase basis");
            coords[idx] = c.clone();
        }
        RingElem { ring: self.clone(), coords }
    }

    pub fn parse(&self, src: &str) -> RingElem {
        let vars: Vec<&str> = self.inner.generators.iter().map(|s| s.as_str()).collect();
        let p = MPoly::parse(src, &vars, MonomialOrder::DegRevLex)
            .unwrap_or_else(|e| panic!("bad ring element `{src}`: {e}"));
        self.from_mpoly(&p)
    }

    fn mono_name(&self, i: usize) -> String {
        let e = &self.inner.basis[i];
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0)
            .map(|(k, &p)| {
                if p == 1 {
                    self.inner.generators[k].clone()
                } else {
                    format!("{}^{}", self.inner.generators[k], p)
                }
            })
            .collect();
        if parts.is_empty() { "1".into() } else { parts.join("*") }
    }
}

/// Element of an [`ArtinLocalRing`], stored as rational coordinates in the
/// monomial basis.
#[derive(Clone)]
pub struct RingElem {
    pub ring: ArtinLocalRing,
    pub coords: Vec<Rational>,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coords == other.coords
    }
}
impl Eq for RingElem {}

impl RingElem {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Image in the residue field Q (the coefficient of the basis monomial 1).
    pub fn residue(&self) -> Rational {
        self.coords[0].clone()
    }

    pub fn in_nilradical(&self) -> bool {
        self.coords[0].is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.coords[0].is_zero()
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        debug_assert_eq!(self.ring, other.ring);
        RingElem {
            ring: self.ring.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        debug_assert_eq!(self.ring, other.ring);
        RingElem {
            ring: self.ring.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> RingElem {
        RingElem { ring: self.ring.clone(), coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        debug_assert_eq!(self.ring, other.ring);
        RingElem { ring: self.ring.clone(), coords: self.ring.mul_coords(&self.coords, &other.coords) }
    }

    pub fn scale(&self, c: &Rational) -> RingElem {
        RingElem { ring: self.ring.clone(), coords: self.coords.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, n: usize) -> RingElem {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact inverse of a unit: solve (mult by self) x = 1 over Q.
    /// Image under the ring map determined by sending each generator of the
    /// source ring to the given element of the target ring. The caller is
    /// responsible for the images satisfying the source relations; the result
    /// is the evaluation of any polynomial lift, which is then well defined.
    pub fn map_generators(&self, target: &ArtinLocalRing, images: &[RingElem]) -> RingElem {
        assert_eq!(
            images.len(),
            self.ring.generators().len(),
            "one image per source generator"
        );
        let mut out = target.zero();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = target.one();
            for (v, &e) in self.ring.inner.basis[i].iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[v].pow(e as usize));
                }
            }
            out = out.add(&term.scale(c));
        }
        out
    }

    pub fn inverse(&self) -> Option<RingElem> {
        if !self.is_unit() {
            return None;
        }
        let dim = self.ring.dim();
        let m = QMat::from_fn(dim, dim, |i, j| {
            // column j = coords of self * basis_j
            let mut b = vec![Rational::zero(); dim];
            b[j] = Rational::one();
            self.ring.mul_coords(&self.coords, &b)[i].clone()
        });
        let mut rhs = vec![Rational::zero(); dim];
        rhs[0] = Rational::one();
        let x = m.solve(&rhs)?;
        Some(RingElem { ring: self.ring.clone(), coords: x })
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let name = self.ring.mono_name(i);
            if name == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Square root of a unipotent element by the finite binomial series
/// v = sum binom(1/2, i) (u-1)^i; the unique square root congruent to 1.
pub fn sqrt_one_plus_nilpotent(u: &RingElem) -> Result<RingElem, AlgebraError> {
    let n = u.sub(&u.ring.one());
    if !n.in_nilradical() {
        return Err(AlgebraError::NotUnipotent);
    }
    let half = rat(1, 2);
    let mut v = u.ring.zero();
    let mut npow = u.ring.one();
    let mut i = 0usize;
    while !npow.is_zero() {
        v = v.add(&npow.scale(&binom_rational(&half, i)));
        npow = npow.mul(&n);
        i += 1;
        assert!(i <= u.ring.nilpotency_index() + 1, "series failed to terminate");
    }
    debug_assert_eq!(v.mul(&v), *u);
    Ok(v)
}

/// Matrix over an Artinian local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMat {
    pub ring: ArtinLocalRing,
    pub rows: usize,
    pub cols: usize,
    data: Vec<RingElem>,
}

impl AMat {
    pub fn zero(ring: &ArtinLocalRing, rows: usize, cols: usize) -> Self {
        AMat { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &ArtinLocalRing, n: usize) -> Self {
        let mut m = AMat::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &ArtinLocalRing, rows: Vec<Vec<RingElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        AMat { ring: ring.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(
        ring: &ArtinLocalRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElem,
    ) -> Self {
        let mut m = AMat::zero(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &AMat) -> AMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        AMat::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &AMat) -> AMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        AMat::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn neg(&self) -> AMat {
        AMat::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    pub fn mul(&self, other: &AMat) -> AMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        AMat::from_fn(&self.ring, self.rows, other.cols, |i, j| {
            let mut acc = self.ring.zero();
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[RingElem]) -> Vec<RingElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &RingElem) -> AMat {
        AMat::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j).mul(c))
    }

    pub fn scale_rational(&self, c: &Rational) -> AMat {
        AMat::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j).scale(c))
    }

    pub fn pow(&self, n: usize) -> AMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = AMat::identity(&self.ring, self.rows);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Entrywise image in the residue field.
    pub fn residue_qmat(&self) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).residue())
    }

    /// The matrix as a Q-linear map on flattened coordinates: entry-major
    /// blocks of size dim, so a vector v in A^cols flattens to
    /// (coords of v_0, coords of v_1, ...).
    pub fn flatten_qmat(&self) -> QMat {
        let d = self.ring.dim();
        let mut out = QMat::zero(self.rows * d, self.cols * d);
        for j in 0..self.cols {
            for t in 0..d {
                // image of basis vector e_j * m_t
                for i in 0..self.rows {
                    let mut unit = vec![Rational::zero(); d];
                    unit[t] = Rational::one();
                    let img = self.ring.mul_coords(&self.get(i, j).coords, &unit);
                    for (u, val) in img.into_iter().enumerate() {
                        out.set(i * d + u, j * d + t, val);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> AMat {
        AMat::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn from_rational_rows(ring: &ArtinLocalRing, rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        AMat::from_fn(ring, r, c, |i, j| ring.from_rational(&rows[i][j]))
    }

    pub fn trace(&self) -> RingElem {
        assert_eq!(self.rows, self.cols, "trace of non-square matrix");
        let mut t = self.ring.zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        t
    }

    pub fn commutator(&self, other: &AMat) -> AMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn vstack(&self, other: &AMat) -> AMat {
        assert_eq!(self.cols, other.cols, "column count mismatch in vstack");
        AMat::from_fn(&self.ring, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.get(i, j).clone() } else { other.get(i - self.rows, j).clone() }
        })
    }

    pub fn hstack(&self, other: &AMat) -> AMat {
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        AMat::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { other.get(i, j - self.cols).clone() }
        })
    }

    /// Kronecker product: block (i,j) of the result is self[i][j] * other.
    pub fn kron(&self, other: &AMat) -> AMat {
        let (p, q) = (other.rows, other.cols);
        AMat::from_fn(&self.ring, self.rows * p, self.cols * q, |i, j| {
            self.get(i / p, j / q).mul(other.get(i % p, j % q))
        })
    }

    /// Apply a ring map (given by generator images) to every entry.
    pub fn map_generators(&self, target: &ArtinLocalRing, images: &[RingElem]) -> AMat {
        AMat::from_fn(target, self.rows, self.cols, |i, j| {
            self.get(i, j).map_generators(target, images)
        })
    }

    /// Inverse over the local ring by Gauss-Jordan elimination with unit
    /// pivots; None exactly when the residue matrix is singular.
    pub fn inverse(&self) -> Option<AMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = AMat::identity(&self.ring, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col).is_unit())?;
            if pivot != col {
                for j in 0..n {
                    let x = a.get(pivot, j).clone();
                    let y = a.get(col, j).clone();
                    a.set(pivot, j, y);
                    a.set(col, j, x);
                    let x = inv.get(pivot, j).clone();
                    let y = inv.get(col, j).clone();
                    inv.set(pivot, j, y);
                    inv.set(col, j, x);
                }
            }
            let scale = a.get(col, col).inverse().expect("unit pivot inverts");
            for j in 0..n {
                a.set(col, j, a.get(col, j).mul(&scale));
                inv.set(col, j, inv.get(col, j).mul(&scale));
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let av = a.get(r, j).sub(&f.mul(a.get(col, j)));
                    a.set(r, j, av);
                    let iv = inv.get(r, j).sub(&f.mul(inv.get(col, j)));
                    inv.set(r, j, iv);
                }
            }
        }
        debug_assert!(self.mul(&inv).eq(&AMat::identity(&self.ring, n)));
        Some(inv)
    }
}

/// Least N with M^N = 0, or None if M is not nilpotent. Nilpotence is
/// decided on the residue matrix first (nilpotent iff the n-th power of the
/// residue vanishes, n = size), then the exact order is found by powering.
pub fn nilpotency_order(m: &AMat) -> Option<usize> {
    assert_eq!(m.rows, m.cols, "nilpotency of non-square matrix");
    let n = m.rows;
    let mut rbar = QMat::identity(n);
    for _ in 0..n {
        rbar = rbar.mul(&m.residue_qmat());
    }
    if !rbar.is_zero() {
        return None;
    }
    let cap = n * m.ring.nilpotency_index() + 1;
    let mut acc = m.clone();
    let mut k = 1usize;
    while !acc.is_zero() {
        acc = acc.mul(m);
        k += 1;
        assert!(k <= cap, "nilpotent matrix power chain failed to terminate");
    }
    Some(k)
}

/// Kernel vectors of M over the Artinian ring: expected_rank exact kernel
/// elements whose residues are linearly independent. The exact kernel is the
/// rational kernel of the flattened map; the call fails when the residue
/// kernel is smaller than expected (RankMismatch) or when fewer than
/// expected_rank residue directions admit exact lifts (LiftObstruction, the
/// Nakayama-style flatness certificate the callers rely on).
pub fn kernel_over_artin(
    m: &AMat,
    expected_rank: usize,
) -> Result<Vec<Vec<RingElem>>, AlgebraError> {
    let d = m.ring.dim();
    let s = m.cols;
    let residue_kernel = m.residue_qmat().kernel_basis();
    if residue_kernel.len() < expected_rank {
        return Err(AlgebraError::RankMismatch {
            expected: expected_rank,
            found: residue_kernel.len(),
        });
    }
    let flat = m.flatten_qmat();
    let exact_kernel = flat.kernel_basis();
    // Residue projection: coefficient of the basis monomial 1 per entry.
    let proj = |v: &[Rational]| -> Vec<Rational> {
        (0..s).map(|j| v[j * d].clone()).collect()
    };
    let proj_rows: Vec<Vec<Rational>> = exact_kernel.iter().map(|v| proj(v)).collect();
    let proj_mat = if proj_rows.is_empty() {
        QMat::zero(1, s)
    } else {
        QMat::from_rows(proj_rows)
    };
    let lift_space = proj_mat.rref();
    if lift_space.rank < expected_rank {
        return Err(AlgebraError::LiftObstruction {
            expected: expected_rank,
            liftable: lift_space.rank,
        });
    }
    // Lift the first expected_rank vectors of the canonical basis of the
    // liftable residue directions.
    let mut out = Vec::with_capacity(expected_rank);
    for r in 0..expected_rank {
        let target = lift_space.mat.row(r).to_vec();
        let alphas = proj_mat
            .transpose()
            .solve(&target)
            .expect("row space membership by construction");
        let mut flatv = vec![Rational::zero(); s * d];
        for (a, kv) in alphas.iter().zip(&exact_kernel) {
            if a.is_zero() {
                continue;
            }
            for (slot, x) in flatv.iter_mut().zip(kv) {
                *slot += a * x;
            }
        }
        let vec_elems: Vec<RingElem> = (0..s)
            .map(|j| m.ring.elem(flatv[j * d..(j + 1) * d].to_vec()))
            .collect();
        debug_assert!(m.mul_vec(&vec_elems).iter().all(|x| x.is_zero()));
        out.push(vec_elems);
    }
    Ok(out)
}
