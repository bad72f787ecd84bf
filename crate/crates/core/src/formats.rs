//! JSON file formats. Scalars are strings "p" or "p/q"; plain JSON integers are accepted
//! on input.
//!
//! tensor: `{"dims":[dA,dB,dC],"entries":[{"i":0,"j":1,"k":2,"value":"3/4"}]}`, omitted
//! entries are zero.
//! terms:  `{"terms":[{"coeff":"1","a":["1","0"],"b":[..],"c":[..]}]}`
//! jet:    `{"order":k,"coefficients":[tensor, ...]}` with k+1 tensors.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rational::{format_q, parse_q, Q};
use crate::segre::CurveJet;
use crate::tensor::{Rank1Term, Tensor3, Vector};
use crate::Error;

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    i: usize,
    j: usize,
    k: usize,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct TensorRecord {
    dims: [usize; 3],
    entries: Vec<EntryRecord>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    coeff: String,
    a: Vec<String>,
    b: Vec<String>,
    c: Vec<String>,
}

fn field<'a>(v: &'a Value, name: &str, path: &str) -> Result<&'a Value, Error> {
    v.get(name).ok_or_else(|| Error::Parse(format!("{path}: missing field `{name}`")))
}

fn scalar(v: &Value, path: &str) -> Result<Q, Error> {
    match v {
        Value::String(s) => parse_q(s).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        Value::Number(n) if n.is_i64() => parse_q(&n.to_string()),
        _ => Err(Error::Parse(format!("{path}: expected a rational string, found {v}"))),
    }
}

fn index(v: &Value, path: &str) -> Result<usize, Error> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{path}: expected a non-negative integer, found {v}")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, Error> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{path}: expected an array")))
}

fn vector(v: &Value, path: &str) -> Result<Vector, Error> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(n, x)| scalar(x, &format!("{path}[{n}]")))
        .collect()
}

fn parse_json(text: &str) -> Result<Value, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

fn tensor_value(v: &Value, path: &str) -> Result<Tensor3, Error> {
    let dims_path = format!("{path}.dims");
    let d = array(field(v, "dims", path)?, &dims_path)?;
    if d.len() != 3 {
        return Err(Error::Parse(format!("{dims_path}: expected three dimensions")));
    }
    let dims = (index(&d[0], &dims_path)?, index(&d[1], &dims_path)?, index(&d[2], &dims_path)?);
    if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
        return Err(Error::Parse(format!("{dims_path}: dimensions must be positive")));
    }
    let mut t = Tensor3::zeros(dims);
    let entries_path = format!("{path}.entries");
    for (n, e) in array(field(v, "entries", path)?, &entries_path)?.iter().enumerate() {
        let p = format!("{entries_path}[{n}]");
        let (i, j, k) = (
            index(field(e, "i", &p)?, &format!("{p}.i"))?,
            index(field(e, "j", &p)?, &format!("{p}.j"))?,
            index(field(e, "k", &p)?, &format!("{p}.k"))?,
        );
        if i >= dims.0 || j >= dims.1 || k >= dims.2 {
            return Err(Error::Parse(format!("{p}: index ({i},{j},{k}) outside dims {dims:?}")));
        }
        let value = scalar(field(e, "value", &p)?, &format!("{p}.value"))?;
        t.set(i, j, k, value);
    }
    Ok(t)
}

fn tensor_record(t: &Tensor3) -> TensorRecord {
    let (da, db, dc) = t.dims();
    let mut entries = Vec::new();
    for i in 0..da {
        for j in 0..db {
            for k in 0..dc {
                let v = t.get(i, j, k);
                if *v != Q::from_integer(0.into()) {
                    entries.push(EntryRecord { i, j, k, value: format_q(v) });
                }
            }
        }
    }
    TensorRecord { dims: [da, db, dc], entries }
}

pub fn parse_tensor(text: &str) -> Result<Tensor3, Error> {
    tensor_value(&parse_json(text)?, "tensor")
}

pub fn write_tensor(t: &Tensor3) -> String {
    serde_json::to_string_pretty(&tensor_record(t)).expect("serializable")
}

pub fn parse_terms(text: &str) -> Result<Vec<Rank1Term>, Error> {
    let v = parse_json(text)?;
    let terms = array(field(&v, "terms", "document")?, "terms")?;
    terms
        .iter()
        .enumerate()
        .map(|(n, t)| {
            let p = format!("terms[{n}]");
            let coeff = match t.get("coeff") {
                Some(c) => scalar(c, &format!("{p}.coeff"))?,
                None => Q::from_integer(1.into()),
            };
            let a = vector(field(t, "a", &p)?, &format!("{p}.a"))?;
            let b = vector(field(t, "b", &p)?, &format!("{p}.b"))?;
            let c = vector(field(t, "c", &p)?, &format!("{p}.c"))?;
            Ok(Rank1Term::new(coeff, a, b, c))
        })
        .collect()
}

pub fn write_terms(terms: &[Rank1Term]) -> String {
    let s = |v: &Vector| v.iter().map(format_q).collect::<Vec<_>>();
    let records: Vec<TermRecord> = terms
        .iter()
        .map(|t| TermRecord { coeff: format_q(&t.coeff), a: s(&t.a), b: s(&t.b), c: s(&t.c) })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({ "terms": records })).expect("serializable")
}

pub fn parse_jet(text: &str) -> Result<CurveJet, Error> {
    let v = parse_json(text)?;
    let order = index(field(&v, "order", "jet")?, "jet.order")?;
    let coefs = array(field(&v, "coefficients", "jet")?, "jet.coefficients")?;
    if coefs.len() != order + 1 {
        return Err(Error::Parse(format!("jet.coefficients: {} tensors for order {order}", coefs.len())));
    }
    let tensors = coefs
        .iter()
        .enumerate()
        .map(|(n, c)| tensor_value(c, &format!("jet.coefficients[{n}]")))
        .collect::<Result<Vec<_>, _>>()?;
    CurveJet::new(tensors).map_err(|e| Error::Parse(format!("jet.coefficients: {e}")))
}

pub fn write_jet(jet: &CurveJet) -> String {
    let coefficients: Vec<TensorRecord> = jet.coefficients.iter().map(tensor_record).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "order": jet.order, "coefficients": coefficients }))
        .expect("serializable")
}

/// A list of jets, as read by the `limit` subcommand: `{"curves":[jet, ...]}`.
pub fn parse_jets(text: &str) -> Result<Vec<CurveJet>, Error> {
    let v = parse_json(text)?;
    let curves = array(field(&v, "curves", "document")?, "curves")?;
    curves
        .iter()
        .enumerate()
        .map(|(n, c)| parse_jet(&c.to_string()).map_err(|e| Error::Parse(format!("curves[{n}]: {e}"))))
        .collect()
}

pub fn write_jets(jets: &[CurveJet]) -> String {
    let curves: Vec<Value> = jets.iter().map(|j| parse_json(&write_jet(j)).expect("own output")).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "curves": curves })).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::tensor::{mmult_tensor, vec_i64, w_tensor};

    #[test]
    fn tensor_roundtrip() {
        let mut t = mmult_tensor(2);
        t.set(1, 2, 3, frac(-7, 3));
        assert_eq!(parse_tensor(&write_tensor(&t)).unwrap(), t);
    }

    #[test]
    fn integers_accepted() {
        let t = parse_tensor(r#"{"dims":[1,1,2],"entries":[{"i":0,"j":0,"k":1,"value":5}]}"#).unwrap();
        assert_eq!(t.nonzero_count(), 1);
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_tensor(r#"{"dims":[2,2,2],"entries":[{"i":0,"j":0,"value":"1"}]}"#).unwrap_err();
        assert!(e.to_string().contains("entries[0]") && e.to_string().contains("`k`"), "{e}");
        let e = parse_tensor(r#"{"dims":[2,2,2],"entries":[{"i":0,"j":0,"k":0,"value":"1/0"}]}"#).unwrap_err();
        assert!(e.to_string().contains("entries[0].value"), "{e}");
        let e = parse_tensor("{\n\"dims\": [2,2,\n").unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
    }

    #[test]
    fn terms_roundtrip() {
        let terms = vec![Rank1Term::new(frac(1, 2), vec_i64(&[1, 0]), vec_i64(&[0, 1]), vec_i64(&[1, -1]))];
        assert_eq!(parse_terms(&write_terms(&terms)).unwrap(), terms);
    }

    #[test]
    fn jet_roundtrip() {
        let jet = CurveJet::new(vec![w_tensor(), w_tensor().scaled(&frac(1, 2))]).unwrap();
        assert_eq!(parse_jet(&write_jet(&jet)).unwrap(), jet);
        let jets = vec![jet.clone(), jet];
        assert_eq!(parse_jets(&write_jets(&jets)).unwrap(), jets);
    }
}
