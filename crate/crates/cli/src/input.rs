//! Tuple input: inline JSON or a file.

use serde_json::Value;
use sixj::b6j::Geometry;
use sixj::geometry::{classify_lengths, AngleFamily, SixTuple, TetraClass, TupleKind};
use sixj::{ComplexValue as C, Error, Result};

/// A parsed input document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Input {
    Tuple(SixTuple),
    /// A raw `a`-tuple for the b-6j symbol.
    Raw([C; 6]),
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn real(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(format!("{what}: expected a number, got {v}")))
}

/// A number, or a `[re, im]` pair.
fn complex(v: &Value, what: &str) -> Result<C> {
    match v {
        Value::Array(xs) if xs.len() == 2 => Ok(C::new(real(&xs[0], what)?, real(&xs[1], what)?)),
        _ => Ok(C::new(real(v, what)?, 0.0)),
    }
}

fn six<T>(v: &Value, key: &str, f: impl Fn(&Value, &str) -> Result<T>) -> Result<[T; 6]>
where
    T: Copy + Default,
{
    let xs = v.as_array().ok_or_else(|| parse_err(format!("\"{key}\" must be an array")))?;
    if xs.len() != 6 {
        return Err(parse_err(format!("\"{key}\" must have 6 entries, got {}", xs.len())));
    }
    let mut out = [T::default(); 6];
    for (k, x) in xs.iter().enumerate() {
        out[k] = f(x, &format!("{key}[{k}]"))?;
    }
    Ok(out)
}

/// Accepted shapes:
/// `{"lengths": [l…]}`, `{"angles": [θ…]}` with entries real or `[re, im]`,
/// `{"pi_pair": k, "im": [φ…]}` (`k` in 1..=3, pairing slots `k` and `k+3`),
/// and `{"a": [a…]}`.
pub fn parse(text: &str) -> Result<Input> {
    let doc: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    let obj = doc.as_object().ok_or_else(|| parse_err("input must be a JSON object"))?;
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    let only = |want: &[&str]| keys.len() == want.len() && want.iter().all(|k| obj.contains_key(*k));
    if only(&["lengths"]) {
        let l = six(&obj["lengths"], "lengths", real)?;
        return Ok(Input::Tuple(SixTuple::lengths(l)?));
    }
    if only(&["angles"]) {
        let th = six(&obj["angles"], "angles", complex)?;
        return Ok(Input::Tuple(SixTuple::angles(th)?));
    }
    if only(&["pi_pair", "im"]) {
        let k = obj["pi_pair"].as_u64().filter(|k| (1..=3).contains(k));
        let k = k.ok_or_else(|| parse_err("\"pi_pair\" must be 1, 2 or 3"))?;
        let phi = six(&obj["im"], "im", real)?;
        return Ok(Input::Tuple(SixTuple::ads_angles(k as usize - 1, phi)?));
    }
    if only(&["a"]) {
        return Ok(Input::Raw(six(&obj["a"], "a", complex)?));
    }
    Err(parse_err(format!(
        "unrecognised input keys {keys:?}; expected lengths, angles, pi_pair+im, or a"
    )))
}

/// The asymptotic regime a geometric tuple falls into.
pub fn geometry_of(t: &SixTuple) -> Result<Geometry> {
    match t.kind {
        TupleKind::Lengths => Ok(match classify_lengths(t)? {
            TetraClass::Hyperbolic => Geometry::HypLengths(*t),
            TetraClass::AntiDeSitter => Geometry::AdSLengths(*t),
            TetraClass::Flat => Geometry::FlatLengths(*t),
        }),
        TupleKind::Angles => Ok(match t.angle_family()? {
            AngleFamily::Hyperbolic => Geometry::Hyp(*t),
            AngleFamily::AntiDeSitter { .. } => Geometry::AdSAngles(*t),
        }),
        TupleKind::Raw => Err(Error::Domain("a raw a-tuple has no geometry".into())),
    }
}
