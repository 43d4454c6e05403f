//! JSON files for forms, frames, vector fields, symmetry generators and
//! cosymplectic pairs. Coordinates are 0-based; rationals are strings
//! `"p/q"` (or `"p"`); a polynomial is a list of `[coefficient, exponents]`.
//!
//! Emission is canonical: blades in colex order, monomials graded-lex (total
//! degree ascending, then larger exponents of earlier variables first), one
//! term per line. `emit(parse(text))` reproduces any canonical text byte for
//! byte.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::de::{self, DeserializeSeed, IgnoredAny, MapAccess, SeqAccess, Visitor};
use thiserror::Error;

use crate::cosymplectic::{CosymplecticError, CosymplecticPair};
use crate::exterior::{MultiIndex, Rational, MAX_DIM};
use crate::poly::{Monomial, Poly, DEGREE_CAP};
use crate::polyform::{CoordinateSplit, FrameSpec, PolyForm, PolyVectorField};
use crate::symmetry::{SymmetryError, SymmetryGenerator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn from_json(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message.
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        ParseError { line: e.line(), column: e.column(), message }
    }
}

/// Everything a file may declare; each loader picks the keys it requires.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub dim: usize,
    pub names: Vec<String>,
    pub split: Option<CoordinateSplit>,
    pub form: Option<PolyForm>,
    pub generators: Option<Vec<PolyForm>>,
    pub components: Option<Vec<Poly>>,
    pub h: Option<Poly>,
    pub field: Option<Vec<Poly>>,
    pub alpha: Option<PolyForm>,
    pub beta: Option<PolyForm>,
}

/// Names `x1…x2m, y1…yk` under a split, `x1…xn` otherwise.
pub fn coordinate_names(dim: usize, split: Option<&CoordinateSplit>) -> Vec<String> {
    match split {
        None => (1..=dim).map(|i| format!("x{i}")).collect(),
        Some(s) => {
            let mut names = vec![String::new(); dim];
            for (r, &i) in s.x().iter().enumerate() {
                names[i] = format!("x{}", r + 1);
            }
            for (r, &i) in s.y().iter().enumerate() {
                names[i] = if s.y().len() == 1 { "y".to_string() } else { format!("y{}", r + 1) };
            }
            names
        }
    }
}

#[derive(Clone, Copy)]
struct Header {
    dim: usize,
    degree: Option<usize>,
}

struct DocSeed {
    header: Option<Header>,
}

const KEYS: &[&str] = &["dim", "names", "split", "degree", "terms", "generators", "components", "h", "field", "alpha", "beta"];

#[derive(Default)]
struct Raw {
    dim: Option<usize>,
    names: Option<Vec<String>>,
    split: Option<CoordinateSplit>,
    degree: Option<usize>,
    doc: Document,
    saw_terms: bool,
}

impl<'de> DeserializeSeed<'de> for DocSeed {
    type Value = Raw;

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<Raw, D::Error> {
        d.deserialize_map(self)
    }
}

impl<'de> Visitor<'de> for DocSeed {
    type Value = Raw;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a JSON object")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Raw, A::Error> {
        let mut raw = Raw::default();
        let mut seen = BTreeSet::new();
        while let Some(key) = map.next_key::<String>()? {
            if !KEYS.contains(&key.as_str()) {
                return Err(de::Error::unknown_field(&key, KEYS));
            }
            if !seen.insert(key.clone()) {
                return Err(de::Error::custom(format!("duplicate key \"{key}\"")));
            }
            let Some(h) = self.header else {
                match key.as_str() {
                    "dim" => {
                        let dim: usize = map.next_value()?;
                        if dim == 0 || dim > MAX_DIM {
                            return Err(de::Error::custom(format!("dim must be between 1 and {MAX_DIM}, got {dim}")));
                        }
                        raw.dim = Some(dim);
                    }
                    "degree" => raw.degree = Some(map.next_value()?),
                    "names" => raw.names = Some(map.next_value()?),
                    "split" => {
                        let s: SplitRaw = map.next_value()?;
                        raw.split = Some(CoordinateSplit::new(s.x, s.y).map_err(de::Error::custom)?);
                    }
                    _ => {
                        raw.saw_terms |= key == "terms";
                        map.next_value::<IgnoredAny>()?;
                    }
                }
                continue;
            };
            let dim = h.dim;
            match key.as_str() {
                "terms" => {
                    let degree = h.degree.ok_or_else(|| de::Error::custom("a form needs \"degree\""))?;
                    raw.doc.form = Some(map.next_value_seed(TermsSeed { dim, degree })?);
                }
                "alpha" => raw.doc.alpha = Some(map.next_value_seed(TermsSeed { dim, degree: 1 })?),
                "beta" => raw.doc.beta = Some(map.next_value_seed(TermsSeed { dim, degree: 2 })?),
                "generators" => raw.doc.generators = Some(map.next_value_seed(ListSeed(TermsSeed { dim, degree: 1 }))?),
                "components" => raw.doc.components = Some(map.next_value_seed(FieldSeed { dim })?),
                "field" => raw.doc.field = Some(map.next_value_seed(FieldSeed { dim })?),
                "h" => raw.doc.h = Some(map.next_value_seed(PolySeed { dim })?),
                _ => {
                    map.next_value::<IgnoredAny>()?;
                }
            }
        }
        if self.header.is_none() {
            let dim = raw.dim.ok_or_else(|| de::Error::missing_field("dim"))?;
            if let Some(names) = &raw.names {
                if names.len() != dim {
                    return Err(de::Error::custom(format!("{} names for {dim} coordinates", names.len())));
                }
                if names.iter().collect::<BTreeSet<_>>().len() != dim {
                    return Err(de::Error::custom("coordinate names must be distinct"));
                }
            }
            if let Some(s) = &raw.split {
                if s.dim() != dim {
                    return Err(de::Error::custom(format!("split covers {} coordinates, dim is {dim}", s.dim())));
                }
            }
            if let Some(p) = raw.degree {
                if p > dim {
                    return Err(de::Error::custom(format!("degree {p} exceeds dim {dim}")));
                }
            }
            if raw.saw_terms && raw.degree.is_none() {
                return Err(de::Error::missing_field("degree"));
            }
        }
        Ok(raw)
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitRaw {
    x: Vec<usize>,
    y: Vec<usize>,
}

struct ListSeed<S>(S);

impl<'de, S: DeserializeSeed<'de> + Copy> DeserializeSeed<'de> for ListSeed<S> {
    type Value = Vec<S::Value>;

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de, S: DeserializeSeed<'de> + Copy> Visitor<'de> for ListSeed<S> {
    type Value = Vec<S::Value>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
        let mut out = Vec::new();
        while let Some(v) = seq.next_element_seed(self.0)? {
            out.push(v);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy)]
struct FieldSeed {
    dim: usize,
}

impl<'de> DeserializeSeed<'de> for FieldSeed {
    type Value = Vec<Poly>;

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        let comps = ListSeed(PolySeed { dim: self.dim }).deserialize(d)?;
        if comps.len() != self.dim {
            return Err(de::Error::custom(format!("{} components for {} coordinates", comps.len(), self.dim)));
        }
        Ok(comps)
    }
}

#[derive(Clone, Copy)]
struct TermsSeed {
    dim: usize,
    degree: usize,
}

impl<'de> DeserializeSeed<'de> for TermsSeed {
    type Value = PolyForm;

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<PolyForm, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for TermsSeed {
    type Value = PolyForm;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list of {\"indices\", \"poly\"} terms")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<PolyForm, A::Error> {
        let mut terms = Vec::new();
        let mut seen = BTreeSet::new();
        while let Some(term) = seq.next_element_seed(TermSeed { dim: self.dim, degree: self.degree, seen: &mut seen })? {
            terms.push(term);
        }
        PolyForm::from_terms(self.dim, self.degree, terms).map_err(de::Error::custom)
    }
}

struct TermSeed<'a> {
    dim: usize,
    degree: usize,
    seen: &'a mut BTreeSet<MultiIndex>,
}

impl<'de> DeserializeSeed<'de> for TermSeed<'_> {
    type Value = (MultiIndex, Poly);

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
        d.deserialize_map(self)
    }
}

impl<'de> Visitor<'de> for TermSeed<'_> {
    type Value = (MultiIndex, Poly);

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an object with \"indices\" and \"poly\"")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
        let mut indices = None;
        let mut poly = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "indices" if indices.is_none() => {
                    let v: Vec<usize> = map.next_value()?;
                    if let Some(&i) = v.iter().find(|&&i| i >= self.dim) {
                        return Err(de::Error::custom(format!("index {i} out of range for dim {}", self.dim)));
                    }
                    if v.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(de::Error::custom(format!("indices {v:?} are not strictly increasing")));
                    }
                    if v.len() != self.degree {
                        return Err(de::Error::custom(format!("{} indices in a degree-{} form", v.len(), self.degree)));
                    }
                    indices = Some(MultiIndex::new(&v).map_err(de::Error::custom)?);
                }
                "poly" if poly.is_none() => poly = Some(map.next_value_seed(PolySeed { dim: self.dim })?),
                "indices" | "poly" => return Err(de::Error::custom(format!("duplicate key \"{key}\""))),
                other => return Err(de::Error::unknown_field(other, &["indices", "poly"])),
            }
        }
        let indices = indices.ok_or_else(|| de::Error::missing_field("indices"))?;
        let poly = poly.ok_or_else(|| de::Error::missing_field("poly"))?;
        if !self.seen.insert(indices) {
            return Err(de::Error::custom(format!("duplicate term for indices {:?}", indices.to_vec())));
        }
        Ok((indices, poly))
    }
}

#[derive(Clone, Copy)]
struct PolySeed {
    dim: usize,
}

impl<'de> DeserializeSeed<'de> for PolySeed {
    type Value = Poly;

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<Poly, D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for PolySeed {
    type Value = Poly;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list of [\"p/q\", [exponents]] pairs")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Poly, A::Error> {
        let mut terms = Vec::new();
        let mut seen = BTreeSet::new();
        while let Some((c, e)) = seq.next_element::<(String, Vec<u32>)>()? {
            let c = parse_rational(&c).map_err(de::Error::custom)?;
            if e.len() != self.dim {
                return Err(de::Error::custom(format!("exponent vector of length {} for dim {}", e.len(), self.dim)));
            }
            let degree: u32 = e.iter().sum();
            if degree > DEGREE_CAP {
                return Err(de::Error::custom(format!("monomial degree {degree} exceeds the cap of {DEGREE_CAP}")));
            }
            if !seen.insert(e.clone()) {
                return Err(de::Error::custom(format!("duplicate monomial {e:?}")));
            }
            terms.push((e, c));
        }
        Poly::from_terms(self.dim, terms).map_err(de::Error::custom)
    }
}

/// `"p/q"` or `"p"` with optional leading minus; zero denominators rejected.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let ok = |part: &str, signed: bool| {
        let digits = if signed { part.strip_prefix('-').unwrap_or(part) } else { part };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let valid = match s.split_once('/') {
        Some((p, q)) => ok(p, true) && ok(q, false),
        None => ok(s, true),
    };
    if !valid {
        return Err(format!("malformed rational \"{s}\""));
    }
    s.parse::<Rational>().map_err(|_| format!("malformed rational \"{s}\" (zero denominator?)"))
}

fn run(text: &str, header: Option<Header>) -> Result<Raw, ParseError> {
    let mut d = serde_json::Deserializer::from_str(text);
    let raw = DocSeed { header }.deserialize(&mut d).map_err(ParseError::from_json)?;
    d.end().map_err(ParseError::from_json)?;
    Ok(raw)
}

/// Parses any file kind; callers check for the keys they need.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let head = run(text, None)?;
    let dim = head.dim.expect("checked in the header pass");
    let mut raw = run(text, Some(Header { dim, degree: head.degree }))?;
    raw.doc.dim = dim;
    raw.doc.names = head.names.unwrap_or_else(|| coordinate_names(dim, head.split.as_ref()));
    raw.doc.split = head.split;
    Ok(raw.doc)
}

/// Input error of a specific file kind.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("file has no \"{0}\" entry")]
    Missing(&'static str),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Cosymplectic(#[from] CosymplecticError),
    #[error("{0}")]
    Invalid(String),
}

fn need<T>(v: Option<T>, key: &'static str) -> Result<T, FileError> {
    v.ok_or(FileError::Missing(key))
}

pub fn parse_form(text: &str) -> Result<PolyForm, FileError> {
    need(parse_document(text)?.form, "terms")
}

pub fn parse_frame(text: &str) -> Result<FrameSpec, FileError> {
    Ok(FrameSpec::new(need(parse_document(text)?.generators, "generators")?))
}

pub fn parse_field(text: &str) -> Result<PolyVectorField, FileError> {
    let comps = need(parse_document(text)?.components, "components")?;
    PolyVectorField::new(comps).map_err(|e| FileError::Invalid(e.to_string()))
}

/// `h` and `field` (the y-block field `Y`); needs a split.
pub fn parse_generator(text: &str) -> Result<(SymmetryGenerator, CoordinateSplit), FileError> {
    let doc = parse_document(text)?;
    let split = need(doc.split, "split")?;
    let h = doc.h.unwrap_or_else(|| Poly::zero(doc.dim));
    let y = PolyVectorField::new(doc.field.unwrap_or_else(|| vec![Poly::zero(doc.dim); doc.dim]))
        .map_err(|e| FileError::Invalid(e.to_string()))?;
    Ok((SymmetryGenerator::new(h, y, &split)?, split))
}

pub fn parse_pair(text: &str) -> Result<CosymplecticPair, FileError> {
    let doc = parse_document(text)?;
    Ok(CosymplecticPair::new(need(doc.alpha, "alpha")?, need(doc.beta, "beta")?)?)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn list<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn graded_lex(n: usize, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| b.exponents(n).cmp(&a.exponents(n)))
}

/// `[["c", [e…]], …]` in graded-lex order.
pub fn emit_poly(p: &Poly) -> String {
    let n = p.nvars();
    let mut terms: Vec<(&Monomial, &Rational)> = p.terms().collect();
    terms.sort_by(|a, b| graded_lex(n, a.0, b.0));
    list(terms.into_iter().map(|(m, c)| format!("[{}, {}]", json_str(&c.to_string()), list(m.exponents(n)))))
}

fn emit_terms(form: &PolyForm, indent: &str) -> String {
    if form.is_zero() {
        return "[]".to_string();
    }
    let lines: Vec<String> = form
        .terms()
        .map(|(mi, p)| format!("{indent}  {{\"indices\": {}, \"poly\": {}}}", list(mi.to_vec()), emit_poly(p)))
        .collect();
    format!("[\n{}\n{indent}]", lines.join(",\n"))
}

fn emit_polys(polys: &[Poly]) -> String {
    let lines: Vec<String> = polys.iter().map(|p| format!("    {}", emit_poly(p))).collect();
    format!("[\n{}\n  ]", lines.join(",\n"))
}

/// Header lines shared by every file kind.
fn emit_header(out: &mut String, dim: usize, names: &[String], split: Option<&CoordinateSplit>) {
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"dim\": {dim},");
    let _ = writeln!(out, "  \"names\": {},", list(names.iter().map(|s| json_str(s))));
    if let Some(s) = split {
        let _ = writeln!(out, "  \"split\": {{\"x\": {}, \"y\": {}}},", list(s.x()), list(s.y()));
    }
}

fn finish(mut body: String) -> String {
    body.push_str("}\n");
    body
}

pub fn emit_form(form: &PolyForm, names: &[String], split: Option<&CoordinateSplit>) -> String {
    let mut out = String::new();
    emit_header(&mut out, form.dim(), names, split);
    let _ = writeln!(out, "  \"degree\": {},", form.degree());
    let _ = writeln!(out, "  \"terms\": {}", emit_terms(form, "  "));
    finish(out)
}

pub fn emit_frame(frame: &FrameSpec, dim: usize, names: &[String], split: Option<&CoordinateSplit>) -> String {
    let mut out = String::new();
    emit_header(&mut out, dim, names, split);
    let gens: Vec<String> = frame.generators.iter().map(|g| format!("    {}", emit_terms(g, "    "))).collect();
    let _ = writeln!(out, "  \"generators\": [\n{}\n  ]", gens.join(",\n"));
    finish(out)
}

pub fn emit_field(v: &PolyVectorField, names: &[String], split: Option<&CoordinateSplit>) -> String {
    let mut out = String::new();
    emit_header(&mut out, v.dim(), names, split);
    let _ = writeln!(out, "  \"components\": {}", emit_polys(&v.components));
    finish(out)
}

pub fn emit_generator(g: &SymmetryGenerator, names: &[String], split: &CoordinateSplit) -> String {
    let mut out = String::new();
    emit_header(&mut out, split.dim(), names, Some(split));
    let _ = writeln!(out, "  \"h\": {},", emit_poly(&g.h));
    let _ = writeln!(out, "  \"field\": {}", emit_polys(&g.y.components));
    finish(out)
}

pub fn emit_pair(pair: &CosymplecticPair, names: &[String]) -> String {
    let mut out = String::new();
    emit_header(&mut out, pair.dim(), names, None);
    let _ = writeln!(out, "  \"alpha\": {},", emit_terms(&pair.alpha, "  "));
    let _ = writeln!(out, "  \"beta\": {}", emit_terms(&pair.beta, "  "));
    finish(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{ratio, standard_dvs};

    const STANDARD_11: &str = r#"{
  "dim": 3,
  "names": ["x1", "x2", "y"],
  "split": {"x": [0, 1], "y": [2]},
  "degree": 3,
  "terms": [
    {"indices": [0, 1, 2], "poly": [["1", [0, 0, 0]]]}
  ]
}
"#;

    #[test]
    fn standard_form_file() {
        let doc = parse_document(STANDARD_11).unwrap();
        assert_eq!(doc.form.clone().unwrap(), PolyForm::from_alt(&standard_dvs(1, 1)));
        let emitted = emit_form(doc.form.as_ref().unwrap(), &doc.names, doc.split.as_ref());
        assert_eq!(emitted, STANDARD_11);
    }

    #[test]
    fn nonflat_form_round_trips() {
        let n = 5;
        let bar = PolyForm::term(n, &[0, 1], Poly::one(n)).add(&PolyForm::term(n, &[2, 3], Poly::one(n)));
        let alpha = PolyForm::dx(n, 4).add(&PolyForm::term(n, &[2], Poly::var(n, 0)));
        let omega = bar.wedge(&alpha);
        let split = CoordinateSplit::standard(2, 1);
        let names = coordinate_names(n, Some(&split));
        let text = emit_form(&omega, &names, Some(&split));
        assert_eq!(parse_form(&text).unwrap(), omega);
        assert_eq!(emit_form(&parse_form(&text).unwrap(), &names, Some(&split)), text);
    }

    #[test]
    fn polynomial_order_is_graded_lex() {
        let n = 2;
        let p = Poly::from_terms(n, vec![(vec![0, 2], ratio(1, 1)), (vec![1, 0], ratio(-2, 3)), (vec![0, 0], ratio(5, 1)), (vec![2, 0], ratio(1, 2))]).unwrap();
        assert_eq!(emit_poly(&p), r#"[["5", [0, 0]], ["-2/3", [1, 0]], ["1/2", [2, 0]], ["1", [0, 2]]]"#);
    }

    fn err(text: &str) -> ParseError {
        match parse_form(text) {
            Err(FileError::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let dup = STANDARD_11.replace(
            r#"    {"indices": [0, 1, 2], "poly": [["1", [0, 0, 0]]]}"#,
            "    {\"indices\": [0, 1, 2], \"poly\": [[\"1\", [0, 0, 0]]]},\n    {\"indices\": [0, 1, 2], \"poly\": [[\"2\", [0, 0, 0]]]}",
        );
        let e = err(&dup);
        assert_eq!(e.line, 8, "{e}");
        assert!(e.message.contains("duplicate term"), "{e}");

        let e = err(&STANDARD_11.replace("[0, 1, 2], \"poly\"", "[1, 0, 2], \"poly\""));
        assert!(e.message.contains("strictly increasing") && e.line == 7, "{e}");

        let e = err(&STANDARD_11.replace("[[\"1\",", "[[\"1/0\","));
        assert!(e.message.contains("malformed rational") && e.line == 7, "{e}");
        let e = err(&STANDARD_11.replace("[[\"1\",", "[[\"1.5\","));
        assert!(e.message.contains("malformed rational"), "{e}");

        let e = err(&STANDARD_11.replace("[0, 0, 0]", "[9, 0, 0]"));
        assert!(e.message.contains("exceeds the cap"), "{e}");

        let e = err(&STANDARD_11.replace("\"dim\": 3", "\"dim\": 13"));
        assert!(e.message.contains("dim must be") && e.line == 2, "{e}");

        let e = err(&STANDARD_11.replace("\"degree\": 3", "\"degree\": 2"));
        assert!(e.message.contains("3 indices in a degree-2 form"), "{e}");

        let e = err("{\n  \"dim\": 2,\n  \"degree\": 1\n  \"terms\": []\n}");
        assert_eq!((e.line, e.column), (4, 3), "{e}");
    }

    #[test]
    fn other_file_kinds_round_trip() {
        let n = 3;
        let split = CoordinateSplit::standard(1, 1);
        let names = coordinate_names(n, Some(&split));

        let frame = FrameSpec::new(vec![PolyForm::dx(n, 2).add(&PolyForm::term(n, &[0], Poly::var(n, 1)))]);
        let text = emit_frame(&frame, n, &names, Some(&split));
        assert_eq!(parse_frame(&text).unwrap(), frame);

        let mut v = PolyVectorField::zero(n);
        v.components[0] = Poly::var(n, 0).scale(&ratio(-1, 2));
        let text = emit_field(&v, &names, None);
        assert_eq!(parse_field(&text).unwrap(), v);
        assert_eq!(emit_field(&parse_field(&text).unwrap(), &names, None), text);

        let mut y = PolyVectorField::zero(n);
        y.components[2] = Poly::var(n, 2);
        let g = SymmetryGenerator::new(Poly::var(n, 0), y, &split).unwrap();
        let text = emit_generator(&g, &names, &split);
        assert_eq!(parse_generator(&text).unwrap(), (g, split.clone()));

        let pair = CosymplecticPair::standard(1);
        let text = emit_pair(&pair, &names);
        assert_eq!(parse_pair(&text).unwrap(), pair);
        assert!(matches!(parse_pair(STANDARD_11), Err(FileError::Missing("alpha"))));
    }
}
