use serde_json::{json, Value};

use super::lattice::{boolean_lattice, chain, diamond, down_set_lattice, lattice_from_leq, leq_matrix};
use super::ring::{make_zmod, quotient_by_ideal, ring_from_tables};
use super::{Hom, Model, Sort};
use crate::Error;

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn as_usize(v: &Value, what: &str) -> Result<usize, Error> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

fn matrix<T>(v: &Value, what: &str, cell: impl Fn(&Value) -> Option<T>) -> Result<Vec<Vec<T>>, Error> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array of rows")))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad(format!("{what} rows must be arrays")))?
                .iter()
                .map(|c| cell(c).ok_or_else(|| bad(format!("bad entry in {what}"))))
                .collect()
        })
        .collect()
}

/// Parses a model description.
///
/// Rings: `{"kind":"ring","zmod":n}`, `{"kind":"ring","product":[m1,…]}`
/// (entries are moduli or nested ring descriptions),
/// `{"kind":"ring","tables":{"add":…,"mul":…,"zero":i,"one":j}}` and
/// `{"kind":"ring","quotient":{"of":…,"by":[…]}}`. Lattices:
/// `{"kind":"lattice","leq":[[…]]}`, plus the shorthands `"chain":k`,
/// `"boolean":k`, `"diamond":true` and `"downsets":[[…]]` (a poset order
/// matrix). `kind` defaults to `ring`.
pub fn model_from_json(v: &Value) -> Result<Model, Error> {
    let obj = v.as_object().ok_or_else(|| bad("a model must be a JSON object"))?;
    let kind = match obj.get("kind") {
        None => "ring",
        Some(k) => k.as_str().ok_or_else(|| bad("kind must be a string"))?,
    };
    match kind {
        "ring" => {
            if let Some(n) = obj.get("zmod") {
                return make_zmod(as_usize(n, "zmod")?).map_err(|e| bad(e.to_string()));
            }
            if let Some(p) = obj.get("product") {
                let factors = p
                    .as_array()
                    .ok_or_else(|| bad("product must be an array"))?
                    .iter()
                    .map(|f| match f {
                        Value::Number(_) => {
                            make_zmod(as_usize(f, "modulus")?).map_err(|e| bad(e.to_string()))
                        }
                        _ => model_from_json(f),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if factors.iter().any(|f| f.sort() != Sort::Ring) {
                    return Err(Error::SortMismatch);
                }
                return Ok(Model::product(Sort::Ring, &factors));
            }
            if let Some(t) = obj.get("tables") {
                let add = matrix(&t["add"], "add", |c| c.as_u64().map(|x| x as usize))?;
                let mul = matrix(&t["mul"], "mul", |c| c.as_u64().map(|x| x as usize))?;
                let zero = as_usize(&t["zero"], "zero")?;
                let one = as_usize(&t["one"], "one")?;
                return ring_from_tables(add, mul, zero, one).map_err(|e| bad(e.to_string()));
            }
            if let Some(q) = obj.get("quotient") {
                let base = model_from_json(&q["of"])?;
                let gens = q["by"]
                    .as_array()
                    .ok_or_else(|| bad("quotient.by must be an array"))?
                    .iter()
                    .map(|g| as_usize(g, "generator"))
                    .collect::<Result<Vec<_>, _>>()?;
                if gens.iter().any(|&g| g >= base.size()) {
                    return Err(bad("quotient generator outside the carrier"));
                }
                return Ok(quotient_by_ideal(&base, &gens).0);
            }
            Err(bad("ring needs one of zmod, product, tables, quotient"))
        }
        "lattice" => {
            if let Some(l) = obj.get("leq") {
                let leq = matrix(l, "leq", |c| c.as_bool())?;
                return lattice_from_leq(&leq).map_err(|e| bad(e.to_string()));
            }
            if let Some(k) = obj.get("chain") {
                let k = as_usize(k, "chain")?;
                if k == 0 {
                    return Err(bad("chain length must be positive"));
                }
                return Ok(chain(k));
            }
            if let Some(k) = obj.get("boolean") {
                let k = as_usize(k, "boolean")?;
                if k > 6 {
                    return Err(bad("boolean lattice too large"));
                }
                return Ok(boolean_lattice(k));
            }
            if obj.get("diamond").is_some() {
                return Ok(diamond());
            }
            if let Some(p) = obj.get("downsets") {
                let leq = matrix(p, "downsets", |c| c.as_bool())?;
                if leq.len() > 12 {
                    return Err(bad("poset too large"));
                }
                return Ok(down_set_lattice(&leq));
            }
            Err(bad("lattice needs one of leq, chain, boolean, diamond, downsets"))
        }
        other => Err(bad(format!("unknown model kind {other:?}"))),
    }
}

/// Serializes a model in the table (ring) or order-matrix (lattice) form.
pub fn model_to_json(m: &Model) -> Value {
    let n = m.size();
    let rows = |k: usize| -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| m.op(k, a, b)).collect()).collect()
    };
    match m.sort() {
        Sort::Ring => json!({
            "kind": "ring",
            "tables": {"add": rows(0), "mul": rows(1), "zero": m.zero(), "one": m.one()}
        }),
        Sort::Lattice => json!({"kind": "lattice", "leq": leq_matrix(m)}),
    }
}

/// Parses `{"map":[…]}` as a homomorphism between the given models.
pub fn hom_from_json(v: &Value, source: &Model, target: &Model) -> Result<Hom, Error> {
    let map = v["map"]
        .as_array()
        .ok_or_else(|| bad("hom needs a map array"))?
        .iter()
        .map(|x| as_usize(x, "map entry"))
        .collect::<Result<Vec<_>, _>>()?;
    Hom::new(source.clone(), target.clone(), map).map_err(|e| bad(e.to_string()))
}

pub fn hom_to_json(h: &Hom) -> Value {
    json!({"map": h.map})
}
