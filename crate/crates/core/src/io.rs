//! JSON file formats for bimaps, graded algebras, and matrix algebras.
//! Scalars are plain integers over prime fields and coefficient arrays
//! over extension fields. Loading validates all structural invariants.

use crate::bimap::Bimap;
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Scalar};
use crate::graded::{Degree, GradedAlgebra, MonoidDescriptor, Tensor3};
use crate::linalg::Matrix;
use crate::units::MatrixAlgebra;
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};

fn field_to_json(f: &Field) -> Value {
    let d = f.descriptor();
    if d.deg <= 1 {
        json!({"char": d.characteristic, "deg": 1})
    } else {
        json!({"char": d.characteristic, "deg": d.deg, "min_poly": d.min_poly})
    }
}

fn field_from_json(v: &Value) -> Result<Field> {
    let d: FieldDescriptor = serde_json::from_value(v.clone())
        .map_err(|e| Error::Parse(format!("field descriptor: {e}")))?;
    Field::from_descriptor(&d)
}

fn scalar_to_json(f: &Field, x: Scalar) -> Value {
    if f.is_prime_field() {
        json!(x)
    } else {
        json!(f.coeffs(x))
    }
}

fn scalar_from_json(f: &Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let raw = n
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("bad scalar {n}")))?;
            if f.is_prime_field() {
                Ok(f.from_int(raw))
            } else if raw >= 0 && (raw as u64) < f.p() {
                Ok(raw as u64)
            } else {
                Err(Error::Parse(format!(
                    "integer scalar {raw} in extension field; use coefficient arrays"
                )))
            }
        }
        Value::Array(arr) => {
            let coeffs: Vec<u64> = arr
                .iter()
                .map(|c| {
                    c.as_u64()
                        .ok_or_else(|| Error::Parse("bad scalar coefficient".into()))
                })
                .collect::<Result<_>>()?;
            f.from_coeffs(&coeffs)
        }
        _ => Err(Error::Parse("scalar must be a number or array".into())),
    }
}

fn matrix_to_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows)
        .map(|i| {
            Value::Array(
                (0..m.cols)
                    .map(|j| scalar_to_json(&m.field, m.get(i, j)))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

fn matrix_from_json(f: &Field, v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    if arr.len() != rows {
        return Err(Error::Parse(format!(
            "matrix has {} rows, expected {rows}",
            arr.len()
        )));
    }
    let mut m = Matrix::zero(f.clone(), rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            m.set(i, j, scalar_from_json(f, e)?);
        }
    }
    Ok(m)
}

pub fn bimap_to_json(u: &Bimap) -> Value {
    json!({
        "field": field_to_json(&u.field),
        "dims": [u.dims.0, u.dims.1, u.dims.2],
        "slices": u.slices.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn bimap_from_json(v: &Value) -> Result<Bimap> {
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::Parse("missing field".into()))?,
    )?;
    let dims = v
        .get("dims")
        .and_then(|d| d.as_array())
        .ok_or_else(|| Error::Parse("missing dims".into()))?;
    if dims.len() != 3 {
        return Err(Error::Parse("dims must have three entries".into()));
    }
    let a = dims[0].as_u64().unwrap_or(0) as usize;
    let b = dims[1].as_u64().unwrap_or(0) as usize;
    let c = dims[2].as_u64().unwrap_or(0) as usize;
    let slices_json = v
        .get("slices")
        .and_then(|s| s.as_array())
        .ok_or_else(|| Error::Parse("missing slices".into()))?;
    let slices: Vec<Matrix> = slices_json
        .iter()
        .map(|s| matrix_from_json(&field, s, a, b))
        .collect::<Result<_>>()?;
    Bimap::new(field, (a, b, c), slices)
}

fn degree_key(d: &Degree) -> String {
    let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn degree_from_key(s: &str) -> Result<Degree> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad degree key {s}")))?;
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad degree component {p}")))
        })
        .collect()
}

pub fn graded_to_json(a: &GradedAlgebra) -> Value {
    let mut components = Map::new();
    for (deg, dim) in &a.components {
        components.insert(degree_key(deg), json!(dim));
    }
    let mut products = Map::new();
    for ((s, t), tensor) in &a.products {
        let key = format!("{}|{}", degree_key(s), degree_key(t));
        let mut outer = Vec::with_capacity(tensor.d2);
        for i in 0..tensor.d2 {
            let mut mid = Vec::with_capacity(tensor.d1);
            for j in 0..tensor.d1 {
                mid.push(Value::Array(
                    tensor
                        .row(i, j)
                        .iter()
                        .map(|&x| scalar_to_json(&a.field, x))
                        .collect(),
                ));
            }
            outer.push(Value::Array(mid));
        }
        products.insert(key, Value::Array(outer));
    }
    json!({
        "field": field_to_json(&a.field),
        "monoid": {"rank": a.monoid.rank(), "trunc": a.monoid.truncations},
        "components": Value::Object(components),
        "gen_degrees": a.gen_degrees.iter().cloned().collect::<Vec<_>>(),
        "products": Value::Object(products),
    })
}

pub fn graded_from_json(v: &Value) -> Result<GradedAlgebra> {
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::Parse("missing field".into()))?,
    )?;
    let monoid_v = v
        .get("monoid")
        .ok_or_else(|| Error::Parse("missing monoid".into()))?;
    let trunc: Vec<u32> = serde_json::from_value(
        monoid_v
            .get("trunc")
            .cloned()
            .ok_or_else(|| Error::Parse("missing monoid.trunc".into()))?,
    )
    .map_err(|e| Error::Parse(format!("monoid.trunc: {e}")))?;
    let monoid = MonoidDescriptor { truncations: trunc };
    let comp_obj = v
        .get("components")
        .and_then(|c| c.as_object())
        .ok_or_else(|| Error::Parse("missing components".into()))?;
    let mut components = BTreeMap::new();
    for (k, dim) in comp_obj {
        components.insert(
            degree_from_key(k)?,
            dim.as_u64()
                .ok_or_else(|| Error::Parse("bad component dim".into()))? as usize,
        );
    }
    let gen: Vec<Degree> = serde_json::from_value(
        v.get("gen_degrees")
            .cloned()
            .ok_or_else(|| Error::Parse("missing gen_degrees".into()))?,
    )
    .map_err(|e| Error::Parse(format!("gen_degrees: {e}")))?;
    let gen_degrees: BTreeSet<Degree> = gen.into_iter().collect();
    let mut products = BTreeMap::new();
    if let Some(prod_obj) = v.get("products").and_then(|p| p.as_object()) {
        for (k, tensor_v) in prod_obj {
            let (ks, kt) = k
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("bad product key {k}")))?;
            let s = degree_from_key(ks)?;
            let t = degree_from_key(kt)?;
            let d2 = components.get(&s).copied().unwrap_or(0);
            let d1 = components.get(&t).copied().unwrap_or(0);
            let target = monoid.add(&s, &t);
            let d0 = components.get(&target).copied().unwrap_or(0);
            let outer = tensor_v
                .as_array()
                .ok_or_else(|| Error::Parse("tensor must be nested arrays".into()))?;
            if outer.len() != d2 {
                return Err(Error::InconsistentDims(format!(
                    "tensor {k}: {} planes, expected {d2}",
                    outer.len()
                )));
            }
            let mut tensor = Tensor3::zero(d2, d1, d0);
            for (i, mid_v) in outer.iter().enumerate() {
                let mid = mid_v
                    .as_array()
                    .ok_or_else(|| Error::Parse("tensor row must be an array".into()))?;
                if mid.len() != d1 {
                    return Err(Error::InconsistentDims(format!(
                        "tensor {k}: row {i} has {} entries, expected {d1}",
                        mid.len()
                    )));
                }
                for (j, inner_v) in mid.iter().enumerate() {
                    let inner = inner_v
                        .as_array()
                        .ok_or_else(|| Error::Parse("tensor cell must be an array".into()))?;
                    if inner.len() != d0 {
                        return Err(Error::InconsistentDims(format!(
                            "tensor {k}: cell ({i},{j}) has {} entries, expected {d0}",
                            inner.len()
                        )));
                    }
                    for (kk, e) in inner.iter().enumerate() {
                        tensor.set(i, j, kk, scalar_from_json(&field, e)?);
                    }
                }
            }
            products.insert((s, t), tensor);
        }
    }
    GradedAlgebra::new(field, monoid, components, products, gen_degrees)
}

pub fn algebra_to_json(a: &MatrixAlgebra) -> Value {
    json!({
        "field": field_to_json(&a.field),
        "dim": a.ambient_dim,
        "basis": a.basis.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// Load a matrix algebra file; the span is closed and re-echelonized.
pub fn algebra_from_json(v: &Value) -> Result<MatrixAlgebra> {
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::Parse("missing field".into()))?,
    )?;
    let n = v
        .get("dim")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| Error::Parse("missing dim".into()))? as usize;
    let basis_json = v
        .get("basis")
        .and_then(|b| b.as_array())
        .ok_or_else(|| Error::Parse("missing basis".into()))?;
    let mats: Vec<Matrix> = basis_json
        .iter()
        .map(|m| matrix_from_json(&field, m, n, n))
        .collect::<Result<_>>()?;
    crate::units::algebra_closure(&mats)
}

pub fn matrix_json(m: &Matrix) -> Value {
    matrix_to_json(m)
}
