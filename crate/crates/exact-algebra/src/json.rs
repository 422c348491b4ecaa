//! Canonical JSON encoding shared by the whole workspace: rationals as
//! "num/den" strings, polynomials as term lists sorted descending in the
//! polynomial's monomial order. Encoding then decoding is the identity, and
//! the encoder output is deterministic byte-for-byte (serde_json orders
//! object keys).

use crate::artin::{artin_ring_build, ArtinLocalRing, RingElem};
use crate::linalg::QMat;
use crate::mpoly::{MPoly, MonomialOrder, PolyMat};
use crate::rational::{rat_from_str, rat_to_string, Rational};
use crate::univar::UnivarPoly;
use serde_json::{json, Value};

pub fn rational_json(r: &Rational) -> Value {
    Value::String(rat_to_string(r))
}

pub fn rational_from_json(v: &Value) -> Result<Rational, String> {
    let s = v.as_str().ok_or_else(|| format!("expected rational string, got {v}"))?;
    rat_from_str(s)
}

fn order_tag(order: MonomialOrder) -> &'static str {
    match order {
        MonomialOrder::Lex => "lex",
        MonomialOrder::DegRevLex => "degrevlex",
    }
}

fn order_from_tag(tag: &str) -> Result<MonomialOrder, String> {
    match tag {
        "lex" => Ok(MonomialOrder::Lex),
        "degrevlex" => Ok(MonomialOrder::DegRevLex),
        other => Err(format!("unknown monomial order `{other}`")),
    }
}

pub fn mpoly_json(p: &MPoly) -> Value {
    let terms: Vec<Value> = p
        .sorted_terms()
        .into_iter()
        .map(|(e, c)| json!([e, rat_to_string(&c)]))
        .collect();
    json!({
        "vars": p.vars,
        "order": order_tag(p.order),
        "terms": terms,
    })
}

pub fn mpoly_from_json(v: &Value) -> Result<MPoly, String> {
    let vars: Vec<String> = v["vars"]
        .as_array()
        .ok_or("missing vars")?
        .iter()
        .map(|x| x.as_str().map(|s| s.to_string()).ok_or("bad var name".to_string()))
        .collect::<Result<_, _>>()?;
    let order = order_from_tag(v["order"].as_str().ok_or("missing order")?)?;
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut p = MPoly::zero(&var_refs, order);
    for t in v["terms"].as_array().ok_or("missing terms")? {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or("bad term")?;
        let exps: Vec<u32> = pair[0]
            .as_array()
            .ok_or("bad exponent vector")?
            .iter()
            .map(|x| x.as_u64().map(|u| u as u32).ok_or("bad exponent".to_string()))
            .collect::<Result<_, _>>()?;
        let coeff = rational_from_json(&pair[1])?;
        p.add_term(exps, coeff);
    }
    Ok(p)
}

pub fn qmat_json(m: &QMat) -> Value {
    let rows: Vec<Value> = (0..m.rows)
        .map(|i| Value::Array((0..m.cols).map(|j| rational_json(m.get(i, j))).collect()))
        .collect();
    json!({ "rows": m.rows, "cols": m.cols, "entries": rows })
}

pub fn qmat_from_json(v: &Value) -> Result<QMat, String> {
    let entries = v["entries"].as_array().ok_or("missing entries")?;
    let mut rows = Vec::new();
    for row in entries {
        let row = row.as_array().ok_or("bad row")?;
        rows.push(row.iter().map(rational_from_json).collect::<Result<Vec<_>, _>>()?);
    }
    let m = QMat::from_rows(rows);
    if v["rows"].as_u64() != Some(m.rows as u64) || v["cols"].as_u64() != Some(m.cols as u64) {
        return Err("matrix shape mismatch".into());
    }
    Ok(m)
}

pub fn polymat_json(m: &PolyMat) -> Value {
    let rows: Vec<Value> = (0..m.rows)
        .map(|i| Value::Array((0..m.cols).map(|j| mpoly_json(m.get(i, j))).collect()))
        .collect();
    json!({ "rows": m.rows, "cols": m.cols, "entries": rows })
}

pub fn polymat_from_json(v: &Value) -> Result<PolyMat, String> {
    let entries = v["entries"].as_array().ok_or("missing entries")?;
    let mut rows = Vec::new();
    for row in entries {
        let row = row.as_array().ok_or("bad row")?;
        rows.push(row.iter().map(mpoly_from_json).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(PolyMat::from_rows(rows))
}

/// Rings serialize by presentation; rebuilding runs the same deterministic
/// construction, so decode(encode(ring)) compares equal to the original.
pub fn artin_ring_json(ring: &ArtinLocalRing) -> Value {
    json!({
        "generators": ring.generators(),
        "ideal": ring.ideal().iter().map(mpoly_json).collect::<Vec<_>>(),
    })
}

pub fn artin_ring_from_json(v: &Value) -> Result<ArtinLocalRing, String> {
    let generators: Vec<String> = v["generators"]
        .as_array()
        .ok_or("missing generators")?
        .iter()
        .map(|x| x.as_str().map(|s| s.to_string()).ok_or("bad generator".to_string()))
        .collect::<Result<_, _>>()?;
    let ideal: Vec<MPoly> = v["ideal"]
        .as_array()
        .ok_or("missing ideal")?
        .iter()
        .map(mpoly_from_json)
        .collect::<Result<_, _>>()?;
    let gen_refs: Vec<&str> = generators.iter().map(|s| s.as_str()).collect();
    artin_ring_build(&gen_refs, &ideal).map_err(|e| e.to_string())
}

pub fn ring_elem_json(x: &RingElem) -> Value {
    Value::Array(x.coords.iter().map(rational_json).collect())
}

pub fn ring_elem_from_json(ring: &ArtinLocalRing, v: &Value) -> Result<RingElem, String> {
    let coords = v
        .as_array()
        .ok_or("expected coordinate array")?
        .iter()
        .map(rational_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != ring.dim() {
        return Err(format!("expected {} coordinates, got {}", ring.dim(), coords.len()));
    }
    Ok(ring.elem(coords))
}

pub fn univar_json(p: &UnivarPoly) -> Value {
    Value::Array(p.coeffs().iter().map(ring_elem_json).collect())
}

pub fn univar_from_json(ring: &ArtinLocalRing, v: &Value) -> Result<UnivarPoly, String> {
    let coeffs = v
        .as_array()
        .ok_or("expected coefficient array")?
        .iter()
        .map(|c| ring_elem_from_json(ring, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UnivarPoly::from_coeffs(ring, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    #[test]
    fn mpoly_roundtrip_and_sorted_terms() {
        let vars = ["x", "y"];
        let p = MPoly::parse("x^2 - 1/2*y + 3", &vars, MonomialOrder::DegRevLex).unwrap();
        let v = mpoly_json(&p);
        assert_eq!(mpoly_from_json(&v).unwrap(), p);
        // Leading term first in the encoding.
        let terms = v["terms"].as_array().unwrap();
        assert_eq!(terms[0][0].as_array().unwrap().len(), 2);
        assert_eq!(terms[0][1].as_str().unwrap(), "1/1");
        assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&mpoly_json(&p)).unwrap());
    }

    #[test]
    fn ring_and_elem_roundtrip() {
        let vars = ["e"];
        let ring = artin_ring_build(
            &vars,
            &[MPoly::parse("e^2", &vars, MonomialOrder::DegRevLex).unwrap()],
        )
        .unwrap();
        let ring2 = artin_ring_from_json(&artin_ring_json(&ring)).unwrap();
        assert_eq!(ring, ring2);
        let x = ring.parse("1/3 + 2*e");
        let back = ring_elem_from_json(&ring, &ring_elem_json(&x)).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn qmat_roundtrip() {
        let m = QMat::from_rows(vec![vec![rint(1), rat(1, 2)], vec![rint(0), rint(-3)]]);
        assert_eq!(qmat_from_json(&qmat_json(&m)).unwrap(), m);
    }
}
