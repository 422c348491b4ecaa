use crate::rational::{rat_from_str, Rational};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Monomial order tag. Lex is used for elimination, degrevlex for general
/// ideal computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
}

/// Compare exponent vectors under the given order. Earlier variables are
/// more significant for lex; degrevlex compares total degree first and
/// breaks ties by the last differing exponent, smaller winning.
pub fn cmp_mono(order: MonomialOrder, a: &[u32], b: &[u32]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    match order {
        MonomialOrder::Lex => a.cmp(b),
        MonomialOrder::DegRevLex => {
            let da: u64 = a.iter().map(|&e| e as u64).sum();
            let db: u64 = b.iter().map(|&e| e as u64).sum();
            if da != db {
                return da.cmp(&db);
            }
            for k in (0..a.len()).rev() {
                if a[k] != b[k] {
                    return b[k].cmp(&a[k]);
                }
            }
            Ordering::Equal
        }
    }
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_div(b: &[u32], a: &[u32]) -> Vec<u32> {
    debug_assert!(mono_divides(a, b));
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Multivariate polynomial with exact rational coefficients. Terms are kept
/// in a BTreeMap for deterministic iteration; zero coefficients are never
/// stored. Two polynomials are equal iff they have the same variables and
/// the same terms; the order tag only directs leading-term selection.
#[derive(Clone, Debug)]
pub struct MPoly {
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}
impl Eq for MPoly {}

impl MPoly {
    pub fn zero(vars: &[&str], order: MonomialOrder) -> Self {
        MPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_like(&self) -> Self {
        MPoly { vars: self.vars.clone(), order: self.order, terms: BTreeMap::new() }
    }

    pub fn one_like(&self) -> Self {
        let mut p = self.zero_like();
        p.add_term(vec![0; self.vars.len()], Rational::one());
        p
    }

    pub fn constant_like(&self, c: Rational) -> Self {
        let mut p = self.zero_like();
        p.add_term(vec![0; self.vars.len()], c);
        p
    }

    pub fn constant(vars: &[&str], order: MonomialOrder, c: Rational) -> Self {
        let mut p = MPoly::zero(vars, order);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &[&str], order: MonomialOrder) -> Self {
        MPoly::constant(vars, order, Rational::one())
    }

    pub fn var(vars: &[&str], order: MonomialOrder, name: &str) -> Self {
        let idx = vars
            .iter()
            .position(|v| *v == name)
            .unwrap_or_else(|| panic!("unknown variable `{name}`"));
        let mut exp = vec![0; vars.len()];
        exp[idx] = 1;
        let mut p = MPoly::zero(vars, order);
        p.add_term(exp, Rational::one());
        p
    }

    pub fn from_terms(
        vars: &[&str],
        order: MonomialOrder,
        terms: Vec<(Vec<u32>, Rational)>,
    ) -> Self {
        let mut p = MPoly::zero(vars, order);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Add a coefficient onto a monomial, dropping the entry if it cancels.
    pub fn add_term(&mut self, exp: Vec<u32>, coeff: Rational) {
        assert_eq!(exp.len(), self.vars.len(), "exponent arity mismatch");
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading (exponent, coefficient) under this polynomial's order.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| cmp_mono(self.order, a, b))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
    }

    pub fn degree_in(&self, var_idx: usize) -> u32 {
        self.terms.keys().map(|e| e[var_idx]).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "mixed variable lists");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.zero_like();
        for (e, c) in self.terms.iter() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.zero_like();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                out.add_term(mono_mul(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.zero_like();
        if c.is_zero() {
            return out;
        }
        for (e, k) in self.terms.iter() {
            out.add_term(e.clone(), k * c);
        }
        out
    }

    /// Multiply by a single term c * x^exp.
    pub fn mul_term(&self, exp: &[u32], c: &Rational) -> Self {
        let mut out = self.zero_like();
        if c.is_zero() {
            return out;
        }
        for (e, k) in self.terms.iter() {
            out.add_term(mono_mul(e, exp), k * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MPoly::constant(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            self.order,
            Rational::one(),
        );
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "evaluation point arity mismatch");
        let mut acc = Rational::zero();
        for (e, c) in self.terms.iter() {
            let mut term = c.clone();
            for (idx, &pow) in e.iter().enumerate() {
                for _ in 0..pow {
                    term *= &point[idx];
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitute one variable by a rational constant; the variable list is
    /// unchanged and the substituted variable no longer occurs.
    pub fn substitute_var(&self, var_idx: usize, value: &Rational) -> Self {
        let mut out = self.zero_like();
        for (e, c) in self.terms.iter() {
            let mut coeff = c.clone();
            for _ in 0..e[var_idx] {
                coeff *= value;
            }
            let mut exp = e.clone();
            exp[var_idx] = 0;
            out.add_term(exp, coeff);
        }
        out
    }

    /// Reinterpret under another monomial order (same terms).
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        let mut out = self.clone();
        out.order = order;
        out
    }

    /// Terms sorted descending under the polynomial's monomial order;
    /// this is the canonical display and serialization order.
    pub fn sorted_terms(&self) -> Vec<(Vec<u32>, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| cmp_mono(self.order, b, a));
        v
    }

    /// Parse from a string over the given variables. Supports + - * ^,
    /// parentheses, integer and `p/q` rational literals, and unary minus.
    pub fn parse(src: &str, vars: &[&str], order: MonomialOrder) -> Result<Self, String> {
        Parser { chars: src.chars().collect(), pos: 0, vars, order }.parse_all()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            let neg = c < Rational::zero();
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
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], p)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a [&'a str],
    order: MonomialOrder,
}

impl<'a> Parser<'a> {
    fn parse_all(mut self) -> Result<MPoly, String> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(format!("trailing input at position {}", self.pos));
        }
        Ok(p)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MPoly, String> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.product()?.neg()
        } else {
            self.product()?
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<MPoly, String> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MPoly, String> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err("expected exponent".into());
            }
            let n: u32 = self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|e| format!("bad exponent: {e}"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err("missing closing parenthesis".into());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.atom()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '/')
                {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let r = rat_from_str(&lit)?;
                Ok(MPoly::constant(self.vars, self.order, r))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if !self.vars.contains(&name.as_str()) {
                    return Err(format!("unknown variable `{name}`"));
                }
                Ok(MPoly::var(self.vars, self.order, &name))
            }
            other => Err(format!("unexpected input {other:?}")),
        }
    }
}

/// Dense matrix of polynomials over a fixed variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<MPoly>,
}

impl PolyMat {
    pub fn zero(vars: &[&str], order: MonomialOrder, rows: usize, cols: usize) -> Self {
        PolyMat { rows, cols, data: vec![MPoly::zero(vars, order); rows * cols] }
    }

    pub fn identity(vars: &[&str], order: MonomialOrder, n: usize) -> Self {
        let mut m = PolyMat::zero(vars, order, n, n);
        for i in 0..n {
            m.set(i, i, MPoly::one(vars, order));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<MPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MPoly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn mul(&self, other: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, other.rows);
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.get(i, 0).mul(other.get(0, j));
                for k in 1..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.push(acc);
            }
        }
        PolyMat { rows: self.rows, cols: other.cols, data: out }
    }

    pub fn add(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, p: &MPoly) -> PolyMat {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(p)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&MPoly) -> MPoly) -> PolyMat {
        PolyMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn col(&self, j: usize) -> Vec<MPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    const VARS: [&str; 2] = ["x", "y"];

    fn p(src: &str) -> MPoly {
        MPoly::parse(src, &VARS, MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn parse_and_arithmetic() {
        let f = p("x^2 - y");
        let g = p("x*y - 1");
        assert_eq!(f.mul(&g), p("x^3*y - x^2 - x*y^2 + y"));
        assert_eq!(f.sub(&f), MPoly::zero(&VARS, MonomialOrder::DegRevLex));
        assert_eq!(p("(x + y)^2"), p("x^2 + 2*x*y + y^2"));
        assert_eq!(p("1/2*x - 1/2*x"), MPoly::zero(&VARS, MonomialOrder::DegRevLex));
        assert!(MPoly::parse("q + 1", &VARS, MonomialOrder::Lex).is_err());
    }

    #[test]
    fn leading_terms_respect_order() {
        // x^2 vs y^3: degrevlex picks by total degree, lex by first variable.
        let f = p("x^2 + y^3");
        assert_eq!(f.leading().unwrap().0, &vec![0, 3]);
        let g = f.with_order(MonomialOrder::Lex);
        assert_eq!(g.leading().unwrap().0, &vec![2, 0]);
        // degrevlex tie-break: x*y beats x^2? No: same degree, last differing
        // exponent smaller wins, so x^2 (exponents [2,0]) beats x*y ([1,1]).
        let h = p("x^2 + x*y");
        assert_eq!(h.leading().unwrap().0, &vec![2, 0]);
    }

    #[test]
    fn evaluation_and_substitution() {
        let f = p("x^2*y - 3*y + 1/2");
        assert_eq!(f.eval_rational(&[rint(2), rint(3)]), rint(12) - rint(9) + rat(1, 2));
        let g = f.substitute_var(1, &rint(3));
        assert_eq!(g, p("3*x^2 - 17/2"));
    }

    #[test]
    fn display_roundtrip() {
        let f = p("x^2 - 1/2*y + 3");
        assert_eq!(MPoly::parse(&f.to_string(), &VARS, MonomialOrder::DegRevLex).unwrap(), f);
    }
}
