//! Decorated ideal triangulations and the Borel invariant
//! `B(ρ) = Σ_i ±B_n(φ(P_i^0), ..., φ(P_i^3))`.
//!
//! The input is any signed list of decorated tetrahedra; nothing checks that
//! it is a fundamental cycle of a manifold.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::borel::{borel_bn, bound_factor};
use crate::error::{BorelError, Result};
use crate::flag::{Flag, FlagQuad};
use crate::hypvol::{ideal_volume, omega, v3, ProjPoint};
use crate::mathcore::{Complex64, Matrix};
use crate::veronese::veronese_flag;

/// Decoration of one ideal vertex.
#[derive(Clone, Debug)]
pub enum Decoration {
    Flag(Flag<Complex64>),
    Point(ProjPoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tetrahedron {
    pub vertices: [String; 4],
    /// `+1` or `-1`.
    pub orientation: i8,
}

#[derive(Clone, Debug)]
pub struct DecoratedComplex {
    pub n: usize,
    /// Hyperbolic volume of the underlying manifold, if known.
    pub volume: Option<f64>,
    pub decoration: BTreeMap<String, Decoration>,
    pub tetrahedra: Vec<Tetrahedron>,
}

fn vertex_id(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(k) if k.is_u64() || k.is_i64() => Ok(k.to_string()),
        other => Err(BorelError::schema(path, format!("expected a vertex id, found {other}"))),
    }
}

fn parse_decoration(vid: &str, v: &Value, n: usize) -> Result<Decoration> {
    let path = format!(".decoration.{vid}");
    let is_flag = v.as_object().is_some_and(|o| o.contains_key("adapted"));
    if !is_flag {
        let p = ProjPoint::from_json(v).map_err(|e| e.within(&path))?;
        return Ok(Decoration::Point(p));
    }
    let obj = v.as_object().expect("checked above");
    let fn_ = obj.get("n").and_then(Value::as_u64).unwrap_or(n as u64) as usize;
    if fn_ != n {
        return Err(BorelError::schema(format!("{path}.n"), format!("flag in C^{fn_} in a complex with n = {n}")));
    }
    let adapted = Matrix::<Complex64>::from_json(&obj["adapted"], Some(n)).map_err(|e| e.within(&format!("{path}.adapted")))?;
    if adapted.cols() != n {
        return Err(BorelError::schema(format!("{path}.adapted"), format!("expected {n} columns, found {}", adapted.cols())));
    }
    Flag::new(adapted).map(Decoration::Flag).map_err(|_| BorelError::RankDeficientFlag(vid.to_string()))
}

impl DecoratedComplex {
    /// Validates a parsed document against the triangulation schema.
    pub fn from_json(doc: &Value) -> Result<Self> {
        let obj = doc.as_object().ok_or_else(|| BorelError::schema("", "expected an object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .filter(|&n| n >= 2)
            .ok_or_else(|| BorelError::schema(".n", "expected an integer n >= 2"))? as usize;
        let volume = match obj.get("volume") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_f64().ok_or_else(|| BorelError::schema(".volume", "expected a number"))?),
        };
        let deco = obj
            .get("decoration")
            .and_then(Value::as_object)
            .ok_or_else(|| BorelError::schema(".decoration", "expected an object of vertex decorations"))?;
        let mut decoration = BTreeMap::new();
        for (vid, v) in deco {
            decoration.insert(vid.clone(), parse_decoration(vid, v, n)?);
        }
        let tets = obj
            .get("tetrahedra")
            .and_then(Value::as_array)
            .ok_or_else(|| BorelError::schema(".tetrahedra", "expected an array"))?;
        let mut tetrahedra = Vec::with_capacity(tets.len());
        for (i, t) in tets.iter().enumerate() {
            let path = format!(".tetrahedra[{i}]");
            let vs = t
                .get("v")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 4)
                .ok_or_else(|| BorelError::schema(format!("{path}.v"), "expected four vertex ids"))?;
            let mut ids = Vec::with_capacity(4);
            for (k, v) in vs.iter().enumerate() {
                ids.push(vertex_id(v, &format!("{path}.v[{k}]"))?);
            }
            let or = t
                .get("or")
                .and_then(Value::as_i64)
                .ok_or_else(|| BorelError::schema(format!("{path}.or"), "expected an integer orientation"))?;
            if or != 1 && or != -1 {
                return Err(BorelError::Orientation(or));
            }
            if let Some(missing) = ids.iter().find(|id| !decoration.contains_key(*id)) {
                return Err(BorelError::MissingDecoration(missing.clone()));
            }
            tetrahedra.push(Tetrahedron { vertices: ids.try_into().expect("four ids"), orientation: or as i8 });
        }
        Ok(DecoratedComplex { n, volume, decoration, tetrahedra })
    }

    pub fn to_json(&self) -> Value {
        let mut deco = Map::new();
        for (vid, d) in &self.decoration {
            let v = match d {
                Decoration::Flag(f) => f.to_json(),
                Decoration::Point(p) => p.to_json(),
            };
            deco.insert(vid.clone(), v);
        }
        let tets: Vec<Value> = self
            .tetrahedra
            .iter()
            .map(|t| serde_json::json!({ "v": t.vertices, "or": t.orientation }))
            .collect();
        let mut out = Map::new();
        out.insert("n".into(), self.n.into());
        if let Some(v) = self.volume {
            out.insert("volume".into(), v.into());
        }
        out.insert("decoration".into(), Value::Object(deco));
        out.insert("tetrahedra".into(), Value::Array(tets));
        Value::Object(out)
    }

    /// Pretty-printed JSON with a trailing newline, the format of the bundled fixture files.
    pub fn to_pretty_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize") + "\n"
    }

    fn flag_of(&self, vid: &str) -> Result<Flag<Complex64>> {
        match self.decoration.get(vid) {
            Some(Decoration::Flag(f)) => Ok(f.clone()),
            Some(Decoration::Point(p)) if self.n == 2 => Ok(veronese_flag(p, 2)),
            Some(Decoration::Point(_)) => Err(BorelError::InvalidInput(format!(
                "vertex {vid} is decorated by a point of P^1; lift it to flags in C^{} first",
                self.n
            ))),
            None => Err(BorelError::MissingDecoration(vid.to_string())),
        }
    }
}

impl FromStr for DecoratedComplex {
    type Err = BorelError;

    fn from_str(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| BorelError::schema(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_json(&doc)
    }
}

/// Reads and validates a triangulation file.
pub fn load(path: impl AsRef<Path>) -> Result<DecoratedComplex> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| BorelError::Io(format!("{}: {e}", path.display())))?;
    text.parse()
}

/// `Σ_i or_i · B_n(flags of tetrahedron i)`, added in file order.
pub fn borel_invariant(dc: &DecoratedComplex) -> Result<f64> {
    let mut sum = 0.0;
    for t in &dc.tetrahedra {
        let mut flags = Vec::with_capacity(4);
        for vid in &t.vertices {
            flags.push(dc.flag_of(vid)?);
        }
        let q = FlagQuad::new(flags.try_into().expect("four flags"))?;
        sum += f64::from(t.orientation) * borel_bn(&q);
    }
    Ok(sum)
}

/// Replaces every point decoration by its Veronese flag in `C^n`.
pub fn lift_veronese(dc: &DecoratedComplex, n: usize) -> Result<DecoratedComplex> {
    if n < 2 {
        return Err(BorelError::InvalidInput(format!("cannot lift to n = {n}")));
    }
    let mut decoration = BTreeMap::new();
    for (vid, d) in &dc.decoration {
        match d {
            Decoration::Point(p) => decoration.insert(vid.clone(), Decoration::Flag(veronese_flag(p, n))),
            Decoration::Flag(_) => {
                return Err(BorelError::InvalidInput(format!("vertex {vid} is already decorated by a flag")));
            }
        };
    }
    Ok(DecoratedComplex { n, volume: dc.volume, decoration, tetrahedra: dc.tetrahedra.clone() })
}

/// `Σ |vol|` of the tetrahedra when every vertex carries a point of `P^1`.
pub fn geometric_volume(dc: &DecoratedComplex) -> Option<f64> {
    let mut sum = 0.0;
    for t in &dc.tetrahedra {
        let mut p = Vec::with_capacity(4);
        for vid in &t.vertices {
            match dc.decoration.get(vid)? {
                Decoration::Point(x) => p.push(*x),
                Decoration::Flag(_) => return None,
            }
        }
        sum += ideal_volume(&p[0], &p[1], &p[2], &p[3]).abs();
    }
    Some(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Maximal,
    NotMaximal,
    /// `|B| > n(n^2 - 1)/6 · Vol` beyond tolerance, impossible for a genuine cycle.
    Inconsistent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Maximal => "maximal",
            Verdict::NotMaximal => "not maximal",
            Verdict::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Maximality {
    /// `B / Vol`.
    pub lambda: f64,
    /// `λ / (n(n^2 - 1)/6)`, in `[-1, 1]` for consistent input.
    pub normalized: f64,
    pub verdict: Verdict,
}

pub fn maximality_ratio(b: f64, vol_m: f64, n: usize) -> Result<Maximality> {
    if vol_m.is_nan() || vol_m <= 0.0 {
        return Err(BorelError::InvalidInput(format!("volume must be positive, found {vol_m}")));
    }
    let lambda = b / vol_m;
    let normalized = lambda / bound_factor(n);
    let verdict = if normalized.abs() > 1.0 + 1e-6 {
        Verdict::Inconsistent
    } else if normalized.abs() > 1.0 - 1e-6 {
        Verdict::Maximal
    } else {
        Verdict::NotMaximal
    };
    Ok(Maximality { lambda, normalized, verdict })
}

fn point_complex(volume: f64, points: &[(&str, ProjPoint)], tets: &[([&str; 4], i8)]) -> DecoratedComplex {
    DecoratedComplex {
        n: 2,
        volume: Some(volume),
        decoration: points.iter().map(|(k, p)| (k.to_string(), Decoration::Point(*p))).collect(),
        tetrahedra: tets
            .iter()
            .map(|(v, o)| Tetrahedron { vertices: v.map(String::from), orientation: *o })
            .collect(),
    }
}

fn simplex_points() -> [(&'static str, ProjPoint); 4] {
    [
        ("inf", ProjPoint::infinity()),
        ("0", ProjPoint::finite(Complex64::new(0.0, 0.0))),
        ("1", ProjPoint::finite(Complex64::new(1.0, 0.0))),
        ("w", ProjPoint::finite(omega())),
    ]
}

/// One positively oriented regular ideal tetrahedron `(∞, 0, 1, ω)`.
pub fn regular_simplex() -> DecoratedComplex {
    point_complex(v3(), &simplex_points(), &[(["inf", "0", "1", "w"], 1)])
}

/// Two regular ideal tetrahedra with the shapes of the figure-eight knot
/// complement, `(∞, 0, 1, ω)` and `(0, ∞, ω, 1)`.
pub fn figure_eight() -> DecoratedComplex {
    point_complex(
        2.0 * v3(),
        &simplex_points(),
        &[(["inf", "0", "1", "w"], 1), (["0", "inf", "w", "1"], 1)],
    )
}

/// The bundled fixtures keyed by file stem.
pub fn fixtures() -> [(&'static str, DecoratedComplex); 2] {
    [("regular-simplex", regular_simplex()), ("figure-eight", figure_eight())]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_evaluate() {
        assert!((borel_invariant(&regular_simplex()).unwrap() - v3()).abs() < 1e-14);
        let f8 = figure_eight();
        assert_eq!(f8.tetrahedra.len(), 2);
        assert!((borel_invariant(&f8).unwrap() - 2.029883212819307).abs() < 1e-12);
        let mut flipped = f8.clone();
        flipped.tetrahedra[1].orientation = -1;
        assert!(borel_invariant(&flipped).unwrap().abs() < 1e-14);
        assert!((geometric_volume(&f8).unwrap() - 2.0 * v3()).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let f8 = figure_eight();
        let text = serde_json::to_string(&f8.to_json()).unwrap();
        let back = DecoratedComplex::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }

    #[test]
    fn load_errors() {
        let bad_or = r#"{"n": 2, "decoration": {"a": "0", "b": "1", "c": "inf", "d": "2"}, "tetrahedra": [{"v": ["a","b","c","d"], "or": 2}]}"#;
        assert_eq!(DecoratedComplex::from_str(bad_or).unwrap_err(), BorelError::Orientation(2));
        let missing = r#"{"n": 2, "decoration": {"a": "0"}, "tetrahedra": [{"v": ["a","a","a","z"], "or": 1}]}"#;
        assert_eq!(DecoratedComplex::from_str(missing).unwrap_err(), BorelError::MissingDecoration("z".into()));
        let repeated = r#"{"n": 2, "decoration": {"7": {"n": 2, "adapted": [[[1,0],[2,0]], [[1,0],[2,0]]]}}, "tetrahedra": []}"#;
        let err = DecoratedComplex::from_str(repeated).unwrap_err();
        assert_eq!(err.to_string(), "rank-deficient flag at vertex 7");
        let schema = r#"{"n": 2, "decoration": {"a": [[1,0]]}, "tetrahedra": []}"#;
        assert!(DecoratedComplex::from_str(schema).unwrap_err().is_schema());
        assert!(DecoratedComplex::from_str("{").unwrap_err().is_schema());
    }

    #[test]
    fn maximality_verdicts() {
        let m = maximality_ratio(0.0, 1.0, 3).unwrap();
        assert_eq!((m.lambda, m.verdict), (0.0, Verdict::NotMaximal));
        assert_eq!(maximality_ratio(4.0, 1.0, 3).unwrap().verdict, Verdict::Maximal);
        assert_eq!(maximality_ratio(4.1, 1.0, 3).unwrap().verdict, Verdict::Inconsistent);
        assert!(maximality_ratio(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn lifting_requires_points() {
        let lifted = lift_veronese(&figure_eight(), 3).unwrap();
        assert!(lift_veronese(&lifted, 4).is_err());
        assert!(borel_invariant(&DecoratedComplex { n: 3, ..figure_eight() }).is_err());
    }
}
