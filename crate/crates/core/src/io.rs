//! File formats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matroid::{Graph, Matroid, TUMatrix};
use crate::poly::IntPolynomial;

pub const FORMAT_HEADER: &str = "sepkit/1";

/// Integers that fit in `i64` serialize as JSON numbers, larger ones as
/// decimal strings.
pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => x.serialize(s),
        None => v.to_string().serialize(s),
    }
}

struct Big<'a>(&'a BigInt);

impl Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_bigint(self.0, s)
    }
}

pub fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Big))
}

pub fn ser_poly<S: Serializer>(p: &IntPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_bigints(p.coeffs(), s)
}

#[derive(Serialize, Deserialize)]
struct MatroidDoc {
    kind: String,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i64>>,
    labels: Vec<String>,
    #[serde(default)]
    verified_tu: bool,
}

/// `sepkit/1` header line followed by the matrix document.
pub fn matroid_to_json(m: &Matroid) -> String {
    let r = m.representation();
    let doc = MatroidDoc {
        kind: "tu_matrix".into(),
        rows: r.rows(),
        cols: r.cols(),
        entries: r.row_vecs(),
        labels: r.labels().to_vec(),
        verified_tu: r.verified_tu(),
    };
    format!(
        "{FORMAT_HEADER}\n{}\n",
        serde_json::to_string(&doc).expect("plain data serializes")
    )
}

/// Inverse of [`matroid_to_json`]. A `verified_tu` claim is never taken on
/// trust: small matrices are rechecked, large ones stay unverified.
pub fn parse_matroid_json(text: &str) -> Result<Matroid> {
    let body = strip_header(text)?;
    let doc: MatroidDoc =
        serde_json::from_str(body).map_err(|e| Error::Input(format!("bad matroid JSON: {e}")))?;
    if doc.kind != "tu_matrix" {
        return Err(Error::Input(format!("unsupported matroid kind {:?}", doc.kind)));
    }
    Matroid::new(TUMatrix::new(doc.rows, doc.cols, &doc.entries, doc.labels)?)
}

fn strip_header(text: &str) -> Result<&str> {
    let t = text.trim_start();
    match t.strip_prefix(FORMAT_HEADER) {
        Some(rest) if rest.starts_with(['\n', '\r']) => Ok(rest),
        _ => Err(Error::Input(format!("expected header {FORMAT_HEADER:?}"))),
    }
}

/// A parsed input file.
#[derive(Clone, Debug)]
pub enum Loaded {
    Graph(Graph),
    Matroid(Matroid),
}

/// Graph text or matroid JSON, told apart by the first character after the
/// header.
pub fn parse_input(text: &str) -> Result<Loaded> {
    if strip_header(text)?.trim_start().starts_with('{') {
        parse_matroid_json(text).map(Loaded::Matroid)
    } else {
        Graph::parse(text).map(Loaded::Graph)
    }
}

/// Exact rationals as JSON numbers when integral, `"p/q"` strings otherwise.
pub fn ser_rationals<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| match r.is_integer() {
        true => bigint_value(&r.to_integer()),
        false => serde_json::Value::String(r.to_string()),
    }))
}

fn bigint_value(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => x.into(),
        None => v.to_string().into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matroid_round_trip() {
        let m = Matroid::from_rows(&[vec![1, 0, 1], vec![0, 1, -1]]).unwrap();
        let text = matroid_to_json(&m);
        assert!(text.starts_with("sepkit/1\n"));
        let back = parse_matroid_json(&text).unwrap();
        assert_eq!(back.representation(), m.representation());
        assert!(back.representation().verified_tu());
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_matroid_json("{\"kind\":\"tu_matrix\"}").is_err());
        let doc = "sepkit/1\n{\"kind\":\"tu_matrix\",\"rows\":1,\"cols\":1,\"entries\":[[2]],\"labels\":[\"x\"]}";
        assert!(matches!(parse_matroid_json(doc), Err(Error::EntryOutOfRange { .. })));
        let doc = "sepkit/1\n{\"kind\":\"chirotope\",\"rows\":0,\"cols\":0,\"entries\":[],\"labels\":[]}";
        assert!(parse_matroid_json(doc).is_err());
        let doc = "sepkit/1\n{\"kind\":\"tu_matrix\",\"rows\":2,\"cols\":2,\"entries\":[[1,1],[1,-1]],\"labels\":[\"x\",\"y\"]}";
        assert!(parse_matroid_json(doc).is_err(), "determinant -2 minor");
    }

    #[test]
    fn sniffs_input_kind() {
        let g = "sepkit/1\n3 3\n0 1\n1 2\n2 0 *\n";
        assert!(matches!(parse_input(g).unwrap(), Loaded::Graph(_)));
        let m = "sepkit/1\n{\"kind\":\"tu_matrix\",\"rows\":1,\"cols\":1,\"entries\":[[1]],\"labels\":[\"x\"]}\n";
        assert!(matches!(parse_input(m).unwrap(), Loaded::Matroid(_)));
        assert!(parse_input("3 3\n").is_err());
    }

    #[test]
    fn rationals_serialize_exactly() {
        #[derive(Serialize)]
        struct W(#[serde(serialize_with = "ser_rationals")] Vec<BigRational>);
        let v = W(vec![BigRational::from_integer(3.into()), BigRational::new(1.into(), 2.into())]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[3,\"1/2\"]");
    }
}
