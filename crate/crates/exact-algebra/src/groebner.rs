use crate::mpoly::{cmp_mono, mono_div, mono_divides, mono_lcm, mono_mul, MPoly, MonomialOrder, PolyMat};
use crate::rational::Rational;
use num_traits::One;

/// Fully reduce `p` modulo `basis`: no term of the result is divisible by
/// any leading monomial of the basis. Reduction always rewrites the largest
/// reducible term by the first matching basis element, so it is
/// deterministic; against a Groebner basis the result is the canonical
/// normal form.
pub fn normal_form(p: &MPoly, basis: &[MPoly]) -> MPoly {
    let leads: Vec<(usize, Vec<u32>, Rational)> = basis
        .iter()
        .enumerate()
        .filter_map(|(k, g)| g.leading().map(|(e, c)| (k, e.clone(), c.clone())))
        .collect();
    let mut work = p.clone();
    let mut rem = p.zero_like();
    'outer: while !work.is_zero() {
        let (lexp, lcoef) = {
            let (e, c) = work.leading().unwrap();
            (e.clone(), c.clone())
        };
        for (k, ge, gc) in leads.iter() {
            if mono_divides(ge, &lexp) {
                let q = mono_div(&lexp, ge);
                let factor = &lcoef / gc;
                work = work.sub(&basis[*k].mul_term(&q, &factor));
                continue 'outer;
            }
        }
        rem.add_term(lexp.clone(), lcoef.clone());
        work.add_term(lexp, -lcoef);
    }
    rem
}

fn spoly(f: &MPoly, g: &MPoly) -> MPoly {
    let (fe, fc) = f.leading().unwrap();
    let (ge, gc) = g.leading().unwrap();
    let l = mono_lcm(fe, ge);
    let a = f.mul_term(&mono_div(&l, fe), &(Rational::one() / fc));
    let b = g.mul_term(&mono_div(&l, ge), &(Rational::one() / gc));
    a.sub(&b)
}

/// Buchberger's algorithm returning the reduced Groebner basis: monic,
/// inter-reduced, sorted ascending by leading monomial. The reduced basis is
/// unique for the ideal and monomial order, so the output is independent of
/// generator order.
pub fn buchberger(gens: &[MPoly]) -> Vec<MPoly> {
    let mut basis: Vec<MPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if basis.is_empty() {
        return Vec::new();
    }
    let order = basis[0].order;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while !pairs.is_empty() {
        // Normal selection: smallest lcm of leading monomials first.
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, (i1, j1)), (_, (i2, j2))| {
                let l1 = mono_lcm(basis[*i1].leading().unwrap().0, basis[*j1].leading().unwrap().0);
                let l2 = mono_lcm(basis[*i2].leading().unwrap().0, basis[*j2].leading().unwrap().0);
                cmp_mono(order, &l1, &l2).then((i1, j1).cmp(&(i2, j2)))
            })
            .map(|(k, _)| k)
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        let (fe, _) = basis[i].leading().unwrap();
        let (ge, _) = basis[j].leading().unwrap();
        // Product criterion: coprime leading monomials reduce to zero.
        if mono_lcm(fe, ge) == mono_mul(fe, ge) {
            continue;
        }
        let r = normal_form(&spoly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            for k in 0..basis.len() {
                pairs.push((k, basis.len()));
            }
            basis.push(r);
        }
    }
    reduce_basis(basis)
}

fn reduce_basis(mut basis: Vec<MPoly>) -> Vec<MPoly> {
    // Remove members whose leading monomial is divisible by another's.
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let ei = basis[i].leading().unwrap().0.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let ej = basis[j].leading().unwrap().0.clone();
            if mono_divides(&ej, &ei) && (ej != ei || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    basis = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    // Inter-reduce tails and normalize to monic.
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            let others: Vec<MPoly> = basis
                .iter()
                .enumerate()
                .filter_map(|(j, g)| if j != i { Some(g.clone()) } else { None })
                .collect();
            let r = normal_form(&basis[i], &others);
            if r != basis[i] {
                assert!(!r.is_zero(), "redundant element survived lead pruning");
                basis[i] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for g in basis.iter_mut() {
        let c = g.leading().unwrap().1.clone();
        *g = g.scale(&(Rational::one() / c));
    }
    let order = basis[0].order;
    basis.sort_by(|a, b| cmp_mono(order, a.leading().unwrap().0, b.leading().unwrap().0));
    basis
}

/// Ideal membership against a Groebner basis.
pub fn ideal_member(p: &MPoly, gb: &[MPoly]) -> bool {
    normal_form(p, gb).is_zero()
}

/// Element of a free module over the polynomial ring, as a coordinate vector
/// of polynomials. Module monomials are ordered position-over-term with
/// earlier components larger, which makes leading components an elimination
/// device.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModVec(pub Vec<MPoly>);

impl ModVec {
    pub fn zero_like(template: &ModVec) -> ModVec {
        ModVec(template.0.iter().map(|p| p.zero_like()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| p.is_zero())
    }

    /// Leading (component, exponent, coefficient) under position-over-term.
    pub fn leading(&self) -> Option<(usize, Vec<u32>, Rational)> {
        for (i, p) in self.0.iter().enumerate() {
            if let Some((e, c)) = p.leading() {
                return Some((i, e.clone(), c.clone()));
            }
        }
        None
    }

    pub fn sub_scaled(&self, other: &ModVec, exp: &[u32], c: &Rational) -> ModVec {
        ModVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.sub(&b.mul_term(exp, c)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> ModVec {
        ModVec(self.0.iter().map(|p| p.scale(c)).collect())
    }

    pub fn add(&self, other: &ModVec) -> ModVec {
        ModVec(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b)).collect())
    }
}

/// Full normal form in the free module: no surviving term is reducible by
/// any basis leading term in the same component.
pub fn module_normal_form(v: &ModVec, basis: &[ModVec]) -> ModVec {
    let leads: Vec<(usize, usize, Vec<u32>, Rational)> = basis
        .iter()
        .enumerate()
        .filter_map(|(k, g)| g.leading().map(|(i, e, c)| (k, i, e, c)))
        .collect();
    let mut work = v.clone();
    let mut rem = ModVec::zero_like(v);
    'outer: while let Some((ci, lexp, lcoef)) = work.leading() {
        for (k, gi, ge, gc) in leads.iter() {
            if *gi == ci && mono_divides(ge, &lexp) {
                let q = mono_div(&lexp, ge);
                let factor = &lcoef / gc;
                work = work.sub_scaled(&basis[*k], &q, &factor);
                continue 'outer;
            }
        }
        rem.0[ci].add_term(lexp.clone(), lcoef.clone());
        work.0[ci].add_term(lexp, -lcoef);
    }
    rem
}

fn module_spoly(f: &ModVec, g: &ModVec) -> ModVec {
    let (fi, fe, fc) = f.leading().unwrap();
    let (gi, ge, gc) = g.leading().unwrap();
    debug_assert_eq!(fi, gi, "S-vector of distinct lead components");
    let l = mono_lcm(&fe, &ge);
    let zero = ModVec::zero_like(f);
    let a = zero.sub_scaled(f, &mono_div(&l, &fe), &(-Rational::one() / fc));
    a.sub_scaled(g, &mono_div(&l, &ge), &(Rational::one() / gc))
}

/// Buchberger at module level (position-over-term order), returning the
/// reduced module Groebner basis sorted by leading component then leading
/// monomial.
pub fn module_buchberger(gens: &[ModVec]) -> Vec<ModVec> {
    let mut basis: Vec<ModVec> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if basis.is_empty() {
        return Vec::new();
    }
    let order = basis[0].0[0].order;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            if basis[i].leading().unwrap().0 == basis[j].leading().unwrap().0 {
                pairs.push((j, i));
            }
        }
    }
    while !pairs.is_empty() {
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, (i1, j1)), (_, (i2, j2))| {
                let k1 = key(&basis[*i1], &basis[*j1]);
                let k2 = key(&basis[*i2], &basis[*j2]);
                k1.0.cmp(&k2.0)
                    .then(cmp_mono(order, &k1.1, &k2.1))
                    .then((i1, j1).cmp(&(i2, j2)))
            })
            .map(|(k, _)| k)
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        let r = module_normal_form(&module_spoly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let rc = r.leading().unwrap().0;
            for k in 0..basis.len() {
                if basis[k].leading().unwrap().0 == rc {
                    pairs.push((k, basis.len()));
                }
            }
            basis.push(r);
        }
    }
    reduce_module_basis(basis)
}

fn key(f: &ModVec, g: &ModVec) -> (usize, Vec<u32>) {
    let (i, fe, _) = f.leading().unwrap();
    let (_, ge, _) = g.leading().unwrap();
    (i, mono_lcm(&fe, &ge))
}

fn reduce_module_basis(mut basis: Vec<ModVec>) -> Vec<ModVec> {
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (ci, ei, _) = basis[i].leading().unwrap();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (cj, ej, _) = basis[j].leading().unwrap();
            if ci == cj && mono_divides(&ej, &ei) && (ej != ei || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    basis = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            let others: Vec<ModVec> = basis
                .iter()
                .enumerate()
                .filter_map(|(j, g)| if j != i { Some(g.clone()) } else { None })
                .collect();
            let r = module_normal_form(&basis[i], &others);
            if r != basis[i] {
                assert!(!r.is_zero(), "redundant module element survived lead pruning");
                basis[i] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for g in basis.iter_mut() {
        let c = g.leading().unwrap().2;
        *g = g.scale(&(Rational::one() / c));
    }
    let order = basis[0].0[0].order;
    basis.sort_by(|a, b| {
        let (ca, ea, _) = a.leading().unwrap();
        let (cb, eb, _) = b.leading().unwrap();
        ca.cmp(&cb).then(cmp_mono(order, &ea, &eb))
    });
    basis
}

/// Generators of the kernel of x -> Mx as a submodule of (R/I)^cols, where I
/// is the ideal generated by `quotient_ideal` (empty for the plain
/// polynomial ring). Computed by eliminating the target components from the
/// graph module {(Mx, x)} augmented with I times the target.
pub fn kernel_syzygies(m: &PolyMat, quotient_ideal: &[MPoly]) -> Vec<ModVec> {
    let (r, s) = (m.rows, m.cols);
    assert!(r > 0 && s > 0, "kernel of empty matrix");
    let template = m.get(0, 0);
    let mut gens: Vec<ModVec> = Vec::new();
    for j in 0..s {
        let mut v: Vec<MPoly> = m.col(j);
        for k in 0..s {
            v.push(if k == j { template.one_like() } else { template.zero_like() });
        }
        gens.push(ModVec(v));
    }
    for q in quotient_ideal {
        for k in 0..r {
            let mut v: Vec<MPoly> = vec![template.zero_like(); r + s];
            v[k] = q.clone();
            gens.push(ModVec(v));
        }
    }
    let gb = module_buchberger(&gens);
    let ideal_gb = buchberger(quotient_ideal);
    let mut out = Vec::new();
    for g in gb {
        if g.0[..r].iter().all(|p| p.is_zero()) {
            let reduced: Vec<MPoly> =
                g.0[r..].iter().map(|p| normal_form(p, &ideal_gb)).collect();
            let v = ModVec(reduced);
            if !v.is_zero() {
                out.push(v);
            }
        }
    }
    out
}

/// Membership of `v` in the submodule of (R/I)^n generated by `gens`.
pub fn module_member(v: &ModVec, gens: &[ModVec], quotient_ideal: &[MPoly]) -> bool {
    let n = v.0.len();
    let mut all = gens.to_vec();
    if let Some(template) = v.0.first() {
        for q in quotient_ideal {
            for k in 0..n {
                let mut w = vec![template.zero_like(); n];
                w[k] = q.clone();
                all.push(ModVec(w));
            }
        }
    }
    let gb = module_buchberger(&all);
    module_normal_form(v, &gb).is_zero()
}

/// Quotient of a polynomial ring by an ideal, with canonical normal forms
/// computed against the reduced Groebner basis of the ideal.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub ideal_gb: Vec<MPoly>,
}

impl QuotientRing {
    pub fn new(vars: &[&str], order: MonomialOrder, ideal_gens: &[MPoly]) -> Self {
        let gens: Vec<MPoly> = ideal_gens.iter().map(|p| p.with_order(order)).collect();
        QuotientRing {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
            ideal_gb: buchberger(&gens),
        }
    }

    pub fn nf(&self, p: &MPoly) -> MPoly {
        normal_form(&p.with_order(self.order), &self.ideal_gb)
    }

    pub fn eq(&self, a: &MPoly, b: &MPoly) -> bool {
        self.nf(&a.sub(b)).is_zero()
    }

    pub fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        self.nf(&a.mul(b))
    }

    pub fn mat_nf(&self, m: &PolyMat) -> PolyMat {
        m.map(|p| self.nf(p))
    }

    pub fn mat_mul(&self, a: &PolyMat, b: &PolyMat) -> PolyMat {
        self.mat_nf(&a.mul(b))
    }

    pub fn is_zero_mat(&self, m: &PolyMat) -> bool {
        self.mat_nf(m).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::MonomialOrder::{DegRevLex, Lex};
    use crate::rational::rint;

    fn p(src: &str, vars: &[&str], order: MonomialOrder) -> MPoly {
        MPoly::parse(src, vars, order).unwrap()
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let vars = ["x"];
        let gb = buchberger(&[p("x", &vars, DegRevLex)]);
        assert_eq!(gb, vec![p("x", &vars, DegRevLex)]);

        // With h first, h^2 is the leading monomial and the generator is
        // already monic and reduced.
        let uvars = ["h", "a", "b", "c"];
        let g = p("h^2 - a^2 - b*c", &uvars, DegRevLex);
        let gb = buchberger(&[g.clone()]);
        assert_eq!(gb, vec![g]);
    }

    #[test]
    fn lex_elimination() {
        let vars = ["x", "y"];
        let gb = buchberger(&[p("x^2 - y", &vars, Lex), p("x*y - 1", &vars, Lex)]);
        let expected = vec![p("y^3 - 1", &vars, Lex), p("x - y^2", &vars, Lex)];
        assert_eq!(gb, expected);
    }

    #[test]
    fn normal_form_kills_ideal_members() {
        let vars = ["x", "y"];
        let gens = [p("x^2 - y", &vars, DegRevLex), p("x*y - 1", &vars, DegRevLex)];
        let gb = buchberger(&gens);
        // An explicit ideal member: a random-looking combination.
        let member = gens[0]
            .mul(&p("x + 3*y^2", &vars, DegRevLex))
            .add(&gens[1].mul(&p("x*y - 7", &vars, DegRevLex)));
        assert!(ideal_member(&member, &gb));
        assert!(!ideal_member(&p("x", &vars, DegRevLex), &gb));
    }

    #[test]
    fn koszul_syzygy() {
        let vars = ["x", "y"];
        let m = PolyMat::from_rows(vec![vec![p("x", &vars, DegRevLex), p("y", &vars, DegRevLex)]]);
        let ker = kernel_syzygies(&m, &[]);
        assert_eq!(ker.len(), 1);
        let expected = ModVec(vec![p("y", &vars, DegRevLex), p("-x", &vars, DegRevLex)]);
        // Killed by M and generating the same submodule as the expected vector.
        for g in &ker {
            let image = m.mul(&PolyMat::from_rows(g.0.iter().map(|q| vec![q.clone()]).collect()));
            assert!(image.is_zero());
        }
        assert!(module_member(&expected, &ker, &[]));
        assert!(module_member(&ker[0], &[expected], &[]));
    }

    #[test]
    fn identity_matrix_has_zero_kernel() {
        let vars = ["x", "y"];
        let m = PolyMat::identity(&vars, DegRevLex, 2);
        assert!(kernel_syzygies(&m, &[]).is_empty());
    }

    #[test]
    fn members_of_quotient_kernel_reduce_to_generators() {
        // Over Q[x]/x^2: kernel of multiplication by x is generated by x.
        let vars = ["x"];
        let x = p("x", &vars, DegRevLex);
        let m = PolyMat::from_rows(vec![vec![x.clone()]]);
        let ker = kernel_syzygies(&m, &[p("x^2", &vars, DegRevLex)]);
        assert!(module_member(&ModVec(vec![x]), &ker, &[p("x^2", &vars, DegRevLex)]));
    }

    #[test]
    fn quotient_ring_normal_forms() {
        // h listed first so that h^2 rewrites to a^2 + b*c.
        let vars = ["h", "a", "b", "c"];
        let q = QuotientRing::new(&vars, DegRevLex, &[p("h^2 - a^2 - b*c", &vars, DegRevLex)]);
        let lhs = q.nf(&p("h^2", &vars, DegRevLex));
        assert_eq!(lhs, p("a^2 + b*c", &vars, DegRevLex));
        assert!(q.eq(&p("h^4", &vars, DegRevLex), &p("(a^2 + b*c)^2", &vars, DegRevLex)));
        assert_eq!(q.nf(&p("3", &vars, DegRevLex)), p("3", &vars, DegRevLex));
        let _ = rint(0);
    }
}
