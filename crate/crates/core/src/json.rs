//! JSON encodings of fields, elements, polynomials, matrices, certificates
//! and Jordan data.

use serde_json::{json, Map, Value};

use crate::canon::EigStructure;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Mat;
use crate::pipelines::{DecompCert, Sign};
use crate::poly::Poly;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing key {key:?}")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

pub fn field_to_json(f: &Field) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), json!(f.p()));
    m.insert("k".into(), json!(f.k()));
    if let Some(modulus) = f.modulus() {
        m.insert("modulus".into(), json!(modulus));
    }
    Value::Object(m)
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let p = as_u64(get(v, "p")?, "p")?;
    let k = match v.get("k") {
        Some(k) => as_u64(k, "k")? as usize,
        None => 1,
    };
    if k == 0 {
        return Err(parse_err("k must be at least 1"));
    }
    let modulus = match v.get("modulus") {
        Some(Value::Null) | None => None,
        Some(m) => Some(
            as_array(m, "modulus")?
                .iter()
                .map(|c| as_u64(c, "modulus coefficient"))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    Field::new(p, k, modulus.as_deref())
}

pub fn elem_to_json(f: &Field, x: Elem) -> Value {
    if f.k() == 1 {
        json!(x.code())
    } else {
        json!(f.coords(x))
    }
}

/// Accepts an integer (a packed code, or a residue for prime fields) or a
/// little-endian coordinate list.
pub fn elem_from_json(f: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(_) => {
            if let Some(n) = v.as_u64() {
                f.elem(n)
            } else if let Some(n) = v.as_i64() {
                if f.k() == 1 {
                    Ok(f.from_int(n))
                } else {
                    Err(parse_err("negative element code"))
                }
            } else {
                Err(parse_err("element must be an integer"))
            }
        }
        Value::Array(cs) => {
            let coords = cs.iter().map(|c| as_u64(c, "coordinate")).collect::<Result<Vec<_>>>()?;
            if coords.len() != f.k() {
                return Err(parse_err(format!("expected {} coordinates", f.k())));
            }
            f.from_coords(&coords)
        }
        _ => Err(parse_err("element must be an integer or a coordinate list")),
    }
}

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| elem_to_json(p.field(), c)).collect())
}

pub fn poly_from_json(f: &Field, v: &Value) -> Result<Poly> {
    let coeffs = as_array(v, "polynomial")?
        .iter()
        .map(|c| elem_from_json(f, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(f, coeffs))
}

pub fn mat_to_json(a: &Mat) -> Value {
    let f = a.field();
    let entries: Vec<Value> = (0..a.rows())
        .map(|i| Value::Array(a.row(i).iter().map(|&x| elem_to_json(f, x)).collect()))
        .collect();
    json!({
        "field": field_to_json(f),
        "rows": a.rows(),
        "cols": a.cols(),
        "entries": entries,
    })
}

/// Parses a matrix; `field` overrides a missing or present `"field"` key.
pub fn mat_from_json(v: &Value, field: Option<&Field>) -> Result<Mat> {
    let f = match (field, v.get("field")) {
        (Some(f), _) => f.clone(),
        (None, Some(fv)) => field_from_json(fv)?,
        (None, None) => return Err(parse_err("matrix without a field")),
    };
    let rows_v = as_array(get(v, "entries")?, "entries")?;
    let rows = match v.get("rows") {
        Some(r) => as_u64(r, "rows")? as usize,
        None => rows_v.len(),
    };
    if rows != rows_v.len() {
        return Err(parse_err(format!("declared {} rows, found {}", rows, rows_v.len())));
    }
    let cols = match v.get("cols") {
        Some(c) => as_u64(c, "cols")? as usize,
        None => rows_v.first().and_then(Value::as_array).map_or(0, Vec::len),
    };
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in rows_v.iter().enumerate() {
        let row = as_array(row, "matrix row")?;
        if row.len() != cols {
            return Err(parse_err(format!("row {} has {} entries, expected {}", i + 1, row.len(), cols)));
        }
        for (j, x) in row.iter().enumerate() {
            data.push(
                elem_from_json(&f, x)
                    .map_err(|e| parse_err(format!("entry ({},{}): {}", i + 1, j + 1, e)))?,
            );
        }
    }
    Mat::new(&f, rows, cols, data)
}

pub fn cert_to_json(c: &DecompCert) -> Value {
    json!({
        "seed": c.seed,
        "signs": c.signs.iter().map(|s| s.value()).collect::<Vec<_>>(),
        "parts": c.parts.iter().map(mat_to_json).collect::<Vec<_>>(),
        "pipeline": c.pipeline,
        "count": c.count(),
        "size": c.size,
        "field": field_to_json(&c.field),
        "target_hash": c.target_hash,
    })
}

pub fn cert_from_json(v: &Value) -> Result<DecompCert> {
    let field = match v.get("field") {
        Some(f) => field_from_json(f)?,
        None => {
            let first = as_array(get(v, "parts")?, "parts")?
                .first()
                .ok_or_else(|| parse_err("certificate without field or parts"))?;
            field_from_json(get(first, "field")?)?
        }
    };
    let signs = as_array(get(v, "signs")?, "signs")?
        .iter()
        .map(|s| match s.as_i64() {
            Some(1) => Ok(Sign::Plus),
            Some(-1) => Ok(Sign::Minus),
            _ => Err(parse_err("signs must be 1 or -1")),
        })
        .collect::<Result<Vec<_>>>()?;
    let parts = as_array(get(v, "parts")?, "parts")?
        .iter()
        .map(|m| mat_from_json(m, Some(&field)))
        .collect::<Result<Vec<_>>>()?;
    if signs.len() != parts.len() {
        return Err(parse_err("signs and parts differ in length"));
    }
    if let Some(count) = v.get("count") {
        if as_u64(count, "count")? as usize != parts.len() {
            return Err(parse_err("count does not match the number of parts"));
        }
    }
    let size = match v.get("size") {
        Some(s) => as_u64(s, "size")? as usize,
        None => parts.first().map(Mat::rows).ok_or_else(|| parse_err("size unknown"))?,
    };
    Ok(DecompCert {
        seed: v.get("seed").map(|s| as_u64(s, "seed")).transpose()?.unwrap_or(0),
        signs,
        parts,
        pipeline: v.get("pipeline").and_then(Value::as_str).unwrap_or("").to_string(),
        target_hash: v.get("target_hash").and_then(Value::as_str).unwrap_or("").to_string(),
        size,
        field,
    })
}

pub fn eig_to_json(e: &EigStructure) -> Value {
    Value::Array(
        e.0.iter()
            .map(|(f, nk)| json!({"factor": poly_to_json(f), "nk": nk}))
            .collect(),
    )
}

pub fn eig_from_json(f: &Field, v: &Value) -> Result<EigStructure> {
    let mut out = std::collections::BTreeMap::new();
    for entry in as_array(v, "eig structure")? {
        let factor = poly_from_json(f, get(entry, "factor")?)?;
        let nk = as_array(get(entry, "nk")?, "nk")?
            .iter()
            .map(|x| as_u64(x, "nk").map(|x| x as usize))
            .collect::<Result<Vec<_>>>()?;
        out.insert(factor, nk);
    }
    Ok(EigStructure(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trip() {
        let f4 = Field::new(2, 2, None).unwrap();
        let v = field_to_json(&f4);
        assert_eq!(v, json!({"p": 2, "k": 2, "modulus": [1, 1, 1]}));
        assert_eq!(field_from_json(&v).unwrap(), f4);
        let f3 = field_from_json(&json!({"p": 3, "k": 1})).unwrap();
        assert_eq!(field_to_json(&f3), json!({"p": 3, "k": 1}));
    }

    #[test]
    fn matrix_round_trip() {
        let f9 = Field::new(3, 2, None).unwrap();
        let a = Mat::from_fn(&f9, 2, 3, |i, j| f9.elem(((i + 2 * j) % 9) as u64).unwrap());
        let v = mat_to_json(&a);
        assert_eq!(mat_from_json(&v, None).unwrap(), a);
        let bad = json!({"field": {"p": 3}, "entries": [[1, 2], [1]]});
        assert!(matches!(mat_from_json(&bad, None), Err(Error::Parse(_))));
    }

    #[test]
    fn eig_round_trip() {
        let f5 = Field::prime(5).unwrap();
        let a = Mat::from_ints(&f5, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]]);
        let e = crate::canon::eig_structure(&a, 0).unwrap();
        assert_eq!(eig_from_json(&f5, &eig_to_json(&e)).unwrap(), e);
    }
}
