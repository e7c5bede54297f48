//! JSON documents: categories, modules, presheaves, sequences, functors and
//! value lists, over any of the four quantales.
//!
//! A nested `source`, `target` or `base` is either an inline category object
//! or a path to a category file, resolved through a [`Resolver`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value as Json};

use crate::cauchy::{EPSequence, Presheaf};
use crate::delta::Delta;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quantale::{Bool2, Lawvere, Quantale, UnitInterval};
use crate::value::{QValue, QuantaleId};
use crate::vcat::{VCategory, VFunctor};
use crate::vmod::VModule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocKind {
    Category,
    Module,
    Presheaf,
    Sequence,
    ValueList,
    Functor,
}

impl DocKind {
    pub fn tag(self) -> &'static str {
        match self {
            DocKind::Category => "category",
            DocKind::Module => "module",
            DocKind::Presheaf => "presheaf",
            DocKind::Sequence => "sequence",
            DocKind::ValueList => "value-list",
            DocKind::Functor => "functor",
        }
    }

    fn from_tag(tag: &str) -> Result<DocKind> {
        Ok(match tag {
            "category" => DocKind::Category,
            "module" => DocKind::Module,
            "presheaf" => DocKind::Presheaf,
            "sequence" => DocKind::Sequence,
            "value-list" => DocKind::ValueList,
            "functor" => DocKind::Functor,
            other => return Err(Error::Parse(format!("unknown document kind `{other}`"))),
        })
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            DocKind::Category => &["objects", "hom"],
            DocKind::Module => &["source", "target", "phi"],
            DocKind::Presheaf => &["base", "psi"],
            DocKind::Sequence => &["base", "preamble", "cycle"],
            DocKind::ValueList => &["values"],
            DocKind::Functor => &["source", "target", "map"],
        }
    }

    /// Infers the kind from the distinguishing key when `kind` is absent.
    fn infer(obj: &Map<String, Json>) -> Result<DocKind> {
        if let Some(k) = obj.get("kind") {
            let tag = k
                .as_str()
                .ok_or_else(|| Error::Parse("`kind` must be a string".into()))?;
            return DocKind::from_tag(tag);
        }
        let probes = [
            ("phi", DocKind::Module),
            ("psi", DocKind::Presheaf),
            ("cycle", DocKind::Sequence),
            ("values", DocKind::ValueList),
            ("map", DocKind::Functor),
            ("hom", DocKind::Category),
        ];
        probes
            .iter()
            .find(|(key, _)| obj.contains_key(*key))
            .map(|(_, kind)| *kind)
            .ok_or_else(|| Error::Parse("cannot infer document kind".into()))
    }
}

/// Loads documents referenced by path.
pub trait Resolver {
    fn load(&self, path: &str) -> Result<Json>;
}

/// Resolves paths relative to a directory.
#[derive(Debug, Clone)]
pub struct FsResolver {
    pub base_dir: PathBuf,
}

impl Resolver for FsResolver {
    fn load(&self, path: &str) -> Result<Json> {
        let full = self.base_dir.join(path);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| Error::Parse(format!("{}: {e}", full.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Rejects every path; for in-memory use.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoResolver;

impl Resolver for NoResolver {
    fn load(&self, path: &str) -> Result<Json> {
        Err(Error::Unsupported(format!(
            "path reference `{path}` in an in-memory document"
        )))
    }
}

pub struct ParseContext<'a> {
    pub allow_float: bool,
    pub resolver: &'a dyn Resolver,
}

impl<'a> ParseContext<'a> {
    pub fn new(allow_float: bool, resolver: &'a dyn Resolver) -> Self {
        ParseContext {
            allow_float,
            resolver,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Doc<Q: Quantale> {
    Category(Arc<VCategory<Q>>),
    Module(VModule<Q>),
    Presheaf(Presheaf<Q>),
    Sequence(EPSequence<Q>),
    ValueList(Vec<Q::Value>),
    Functor(VFunctor<Q>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyDoc {
    Bool2(Doc<Bool2>),
    Cost(Doc<Lawvere>),
    Unit(Doc<UnitInterval>),
    Delta(Doc<Delta>),
}

/// Quantales that can be wrapped into and out of [`AnyDoc`].
pub trait DocQuantale: Quantale {
    fn wrap(doc: Doc<Self>) -> AnyDoc;
    fn unwrap(doc: AnyDoc) -> Result<Doc<Self>>;
}

macro_rules! doc_quantale {
    ($q:ty, $variant:ident) => {
        impl DocQuantale for $q {
            fn wrap(doc: Doc<Self>) -> AnyDoc {
                AnyDoc::$variant(doc)
            }

            fn unwrap(doc: AnyDoc) -> Result<Doc<Self>> {
                match doc {
                    AnyDoc::$variant(d) => Ok(d),
                    other => Err(Error::QuantaleMismatch {
                        expected: <$q as Quantale>::ID,
                        found: other.quantale(),
                    }),
                }
            }
        }
    };
}

doc_quantale!(Bool2, Bool2);
doc_quantale!(Lawvere, Cost);
doc_quantale!(UnitInterval, Unit);
doc_quantale!(Delta, Delta);

/// Runs `$body` with `$d` bound to the inner `Doc<Q>` and `$q` to its quantale.
#[macro_export]
macro_rules! with_doc {
    ($any:expr, $d:ident, $q:ident => $body:expr) => {
        match $any {
            $crate::json::AnyDoc::Bool2($d) => {
                type $q = $crate::quantale::Bool2;
                $body
            }
            $crate::json::AnyDoc::Cost($d) => {
                type $q = $crate::quantale::Lawvere;
                $body
            }
            $crate::json::AnyDoc::Unit($d) => {
                type $q = $crate::quantale::UnitInterval;
                $body
            }
            $crate::json::AnyDoc::Delta($d) => {
                type $q = $crate::delta::Delta;
                $body
            }
        }
    };
}

impl AnyDoc {
    pub fn quantale(&self) -> QuantaleId {
        match self {
            AnyDoc::Bool2(_) => QuantaleId::Bool2,
            AnyDoc::Cost(_) => QuantaleId::Cost,
            AnyDoc::Unit(_) => QuantaleId::Unit,
            AnyDoc::Delta(_) => QuantaleId::Delta,
        }
    }

    pub fn kind(&self) -> DocKind {
        with_doc!(self, d, _Q => d.kind())
    }

    pub fn to_json(&self) -> Json {
        with_doc!(self, d, _Q => d.to_json())
    }

    pub fn to_text(&self) -> String {
        with_doc!(self, d, _Q => d.to_text())
    }
}

impl<Q: Quantale> Doc<Q> {
    pub fn kind(&self) -> DocKind {
        match self {
            Doc::Category(_) => DocKind::Category,
            Doc::Module(_) => DocKind::Module,
            Doc::Presheaf(_) => DocKind::Presheaf,
            Doc::Sequence(_) => DocKind::Sequence,
            Doc::ValueList(_) => DocKind::ValueList,
            Doc::Functor(_) => DocKind::Functor,
        }
    }

    pub fn to_json(&self) -> Json {
        let mut obj = match self {
            Doc::Category(c) => return category_to_json(c),
            Doc::Module(m) => json!({
                "source": category_to_json(m.source()),
                "target": category_to_json(m.target()),
                "phi": matrix_to_json::<Q>(m.matrix()),
            }),
            Doc::Presheaf(p) => json!({
                "base": category_to_json(p.base()),
                "psi": values_to_json::<Q>(p.values()),
            }),
            Doc::Sequence(s) => json!({
                "base": category_to_json(s.base()),
                "preamble": names(s.base(), s.preamble()),
                "cycle": names(s.base(), s.cycle()),
            }),
            Doc::ValueList(v) => json!({ "values": values_to_json::<Q>(v) }),
            Doc::Functor(f) => json!({
                "source": category_to_json(f.source()),
                "target": category_to_json(f.target()),
                "map": names(f.target(), f.map()),
            }),
        };
        obj["kind"] = json!(self.kind().tag());
        obj["quantale"] = json!(Q::ID.tag());
        obj
    }

    pub fn to_text(&self) -> String {
        match self {
            Doc::Category(c) => category_to_text(c),
            Doc::Module(m) => {
                let mut out = format!(
                    "module over {}: {} objects -> {} objects\n",
                    Q::ID,
                    m.source().len(),
                    m.target().len()
                );
                out.push_str(&matrix_to_text::<Q>(
                    m.source().objects(),
                    m.target().objects(),
                    m.matrix(),
                ));
                out
            }
            Doc::Presheaf(p) => {
                let mut out = format!("presheaf over {}\n", Q::ID);
                for (name, v) in p.base().objects().iter().zip(p.values()) {
                    let _ = writeln!(out, "  psi({name}) = {}", Q::to_qvalue(v));
                }
                out
            }
            Doc::Sequence(s) => format!(
                "sequence over {}: preamble [{}], cycle [{}]\n",
                Q::ID,
                names(s.base(), s.preamble()).join(", "),
                names(s.base(), s.cycle()).join(", ")
            ),
            Doc::ValueList(vs) => {
                let mut out = format!("values over {}\n", Q::ID);
                for v in vs {
                    let _ = writeln!(out, "  {}", Q::to_qvalue(v));
                }
                out
            }
            Doc::Functor(f) => {
                let mut out = format!("functor over {}\n", Q::ID);
                for (x, &fx) in f.map().iter().enumerate() {
                    let _ = writeln!(out, "  {} |-> {}", f.source().name(x), f.target().name(fx));
                }
                out
            }
        }
    }
}

fn names<Q: Quantale>(base: &VCategory<Q>, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| base.name(i).to_string()).collect()
}

pub fn values_to_json<Q: Quantale>(vs: &[Q::Value]) -> Json {
    Json::Array(vs.iter().map(|v| Q::to_qvalue(v).to_json()).collect())
}

pub fn matrix_to_json<Q: Quantale>(m: &Matrix<Q::Value>) -> Json {
    Json::Array(m.to_rows().iter().map(|r| values_to_json::<Q>(r)).collect())
}

pub fn category_to_json<Q: Quantale>(c: &VCategory<Q>) -> Json {
    json!({
        "kind": "category",
        "quantale": Q::ID.tag(),
        "objects": c.objects(),
        "hom": matrix_to_json::<Q>(c.hom()),
    })
}

pub fn category_to_text<Q: Quantale>(c: &VCategory<Q>) -> String {
    let mut out = format!("category over {} with {} objects\n", Q::ID, c.len());
    out.push_str(&matrix_to_text::<Q>(c.objects(), c.objects(), c.hom()));
    out
}

/// A grid for scalar quantales; one line per entry for step functions.
pub fn matrix_to_text<Q: Quantale>(rows: &[String], cols: &[String], m: &Matrix<Q::Value>) -> String {
    let mut out = String::new();
    if Q::ID == QuantaleId::Delta {
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                let _ = writeln!(out, "  ({r}, {c}): {}", Q::to_qvalue(m.get(i, j)));
            }
        }
        return out;
    }
    let cells: Vec<Vec<String>> = (0..rows.len())
        .map(|i| (0..cols.len()).map(|j| Q::to_qvalue(m.get(i, j)).to_string()).collect())
        .collect();
    let label_w = rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| {
            cells
                .iter()
                .map(|r| r[j].chars().count())
                .chain(std::iter::once(c.chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let _ = write!(out, "  {:label_w$}", "");
    for (c, w) in cols.iter().zip(&widths) {
        let _ = write!(out, "  {c:>w$}");
    }
    out.push('\n');
    for (r, row) in rows.iter().zip(&cells) {
        let _ = write!(out, "  {r:label_w$}");
        for (cell, w) in row.iter().zip(&widths) {
            let _ = write!(out, "  {cell:>w$}");
        }
        out.push('\n');
    }
    out
}

fn as_object<'j>(json: &'j Json, what: &str) -> Result<&'j Map<String, Json>> {
    json.as_object()
        .ok_or_else(|| Error::Parse(format!("{what} must be a JSON object")))
}

fn field<'j>(obj: &'j Map<String, Json>, key: &str) -> Result<&'j Json> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn array<'j>(json: &'j Json, what: &str) -> Result<&'j Vec<Json>> {
    json.as_array()
        .ok_or_else(|| Error::Parse(format!("`{what}` must be an array")))
}

fn check_keys(obj: &Map<String, Json>, kind: DocKind) -> Result<()> {
    for key in obj.keys() {
        if key != "kind" && key != "quantale" && !kind.keys().contains(&key.as_str()) {
            return Err(Error::Parse(format!(
                "unexpected field `{key}` in {} document",
                kind.tag()
            )));
        }
    }
    Ok(())
}

fn declared_quantale(obj: &Map<String, Json>) -> Result<Option<QuantaleId>> {
    match obj.get("quantale") {
        None => Ok(None),
        Some(Json::String(s)) => Ok(Some(s.parse()?)),
        Some(_) => Err(Error::Parse("`quantale` must be a string".into())),
    }
}

fn deref<'j>(json: &'j Json, ctx: &ParseContext<'_>) -> Result<std::borrow::Cow<'j, Json>> {
    match json {
        Json::String(path) => Ok(std::borrow::Cow::Owned(ctx.resolver.load(path)?)),
        other => Ok(std::borrow::Cow::Borrowed(other)),
    }
}

/// The quantale of a document: its `quantale` field, else that of its nested
/// category.
pub fn document_quantale(json: &Json, ctx: &ParseContext<'_>) -> Result<QuantaleId> {
    let obj = as_object(json, "document")?;
    if let Some(q) = declared_quantale(obj)? {
        return Ok(q);
    }
    for key in ["base", "source"] {
        if let Some(nested) = obj.get(key) {
            return document_quantale(&*deref(nested, ctx)?, ctx);
        }
    }
    Err(Error::Parse("missing field `quantale`".into()))
}

fn parse_value<Q: Quantale>(json: &Json, ctx: &ParseContext<'_>) -> Result<Q::Value> {
    Q::from_qvalue(&QValue::from_json(Q::ID, json, ctx.allow_float)?)
}

fn parse_values<Q: Quantale>(json: &Json, what: &str, ctx: &ParseContext<'_>) -> Result<Vec<Q::Value>> {
    array(json, what)?
        .iter()
        .map(|v| parse_value::<Q>(v, ctx))
        .collect()
}

fn parse_rows<Q: Quantale>(json: &Json, what: &str, ctx: &ParseContext<'_>) -> Result<Vec<Vec<Q::Value>>> {
    array(json, what)?
        .iter()
        .map(|row| parse_values::<Q>(row, what, ctx))
        .collect()
}

fn parse_names(json: &Json, what: &str) -> Result<Vec<String>> {
    array(json, what)?
        .iter()
        .map(|n| {
            n.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("`{what}` entries must be strings")))
        })
        .collect()
}

fn lookup<Q: Quantale>(base: &VCategory<Q>, json: &Json, what: &str) -> Result<Vec<usize>> {
    parse_names(json, what)?
        .iter()
        .map(|n| base.index_of(n))
        .collect()
}

fn as_input<T>(r: Result<T>, kind: &'static str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Violation(v) => Error::Invalid { kind, violation: v },
        other => other,
    })
}

fn expect_quantale<Q: Quantale>(obj: &Map<String, Json>) -> Result<()> {
    match declared_quantale(obj)? {
        Some(found) if found != Q::ID => Err(Error::QuantaleMismatch {
            expected: Q::ID,
            found,
        }),
        _ => Ok(()),
    }
}

/// Objects and hom matrix of a category document, without checking the
/// category laws.
pub fn parse_category_raw<Q: Quantale>(
    json: &Json,
    ctx: &ParseContext<'_>,
) -> Result<(Vec<String>, Matrix<Q::Value>)> {
    let json = deref(json, ctx)?;
    let obj = as_object(&json, "category")?;
    if DocKind::infer(obj)? != DocKind::Category {
        return Err(Error::Parse("expected a category document".into()));
    }
    check_keys(obj, DocKind::Category)?;
    expect_quantale::<Q>(obj)?;
    let objects = parse_names(field(obj, "objects")?, "objects")?;
    let rows = parse_rows::<Q>(field(obj, "hom")?, "hom", ctx)?;
    if rows.len() != objects.len() {
        return Err(Error::Shape(format!(
            "hom has {} rows for {} objects",
            rows.len(),
            objects.len()
        )));
    }
    let n = objects.len();
    Ok((objects, Matrix::from_rows(rows, n)?))
}

pub fn parse_category<Q: Quantale>(json: &Json, ctx: &ParseContext<'_>) -> Result<Arc<VCategory<Q>>> {
    let (objects, hom) = parse_category_raw::<Q>(json, ctx)?;
    Ok(Arc::new(as_input(VCategory::new(objects, hom), "category")?))
}

pub fn parse_doc<Q: Quantale>(json: &Json, ctx: &ParseContext<'_>) -> Result<Doc<Q>> {
    let obj = as_object(json, "document")?;
    let kind = DocKind::infer(obj)?;
    check_keys(obj, kind)?;
    expect_quantale::<Q>(obj)?;
    Ok(match kind {
        DocKind::Category => Doc::Category(parse_category(json, ctx)?),
        DocKind::Module => {
            let source = parse_category::<Q>(field(obj, "source")?, ctx)?;
            let target = parse_category::<Q>(field(obj, "target")?, ctx)?;
            let rows = parse_rows::<Q>(field(obj, "phi")?, "phi", ctx)?;
            Doc::Module(as_input(VModule::from_rows(source, target, rows), "module")?)
        }
        DocKind::Presheaf => {
            let base = parse_category::<Q>(field(obj, "base")?, ctx)?;
            let psi = parse_values::<Q>(field(obj, "psi")?, "psi", ctx)?;
            Doc::Presheaf(as_input(Presheaf::new(base, psi), "presheaf")?)
        }
        DocKind::Sequence => {
            let base = parse_category::<Q>(field(obj, "base")?, ctx)?;
            let preamble = lookup(&base, field(obj, "preamble")?, "preamble")?;
            let cycle = lookup(&base, field(obj, "cycle")?, "cycle")?;
            Doc::Sequence(EPSequence::new(base, preamble, cycle)?)
        }
        DocKind::ValueList => Doc::ValueList(parse_values::<Q>(field(obj, "values")?, "values", ctx)?),
        DocKind::Functor => {
            let source = parse_category::<Q>(field(obj, "source")?, ctx)?;
            let target = parse_category::<Q>(field(obj, "target")?, ctx)?;
            let map = lookup(&target, field(obj, "map")?, "map")?;
            Doc::Functor(as_input(VFunctor::new(source, target, map), "functor")?)
        }
    })
}

pub fn parse_any(json: &Json, ctx: &ParseContext<'_>) -> Result<AnyDoc> {
    Ok(match document_quantale(json, ctx)? {
        QuantaleId::Bool2 => AnyDoc::Bool2(parse_doc(json, ctx)?),
        QuantaleId::Cost => AnyDoc::Cost(parse_doc(json, ctx)?),
        QuantaleId::Unit => AnyDoc::Unit(parse_doc(json, ctx)?),
        QuantaleId::Delta => AnyDoc::Delta(parse_doc(json, ctx)?),
    })
}

pub fn parse_str(text: &str, ctx: &ParseContext<'_>) -> Result<AnyDoc> {
    let json: Json = serde_json::from_str(text)?;
    parse_any(&json, ctx)
}

/// Reads a document file; nested paths resolve relative to its directory.
pub fn load_file(path: &Path, allow_float: bool) -> Result<AnyDoc> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let resolver = FsResolver {
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    parse_str(&text, &ParseContext::new(allow_float, &resolver))
}

/// Pretty JSON with a trailing newline; key order is sorted, so output is
/// deterministic.
pub fn to_pretty(json: &Json) -> String {
    let mut s = serde_json::to_string_pretty(json).expect("serialising a JSON value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ParseContext<'static> {
        ParseContext::new(false, &NoResolver)
    }

    #[test]
    fn category_round_trip() {
        let text = r#"{"quantale":"cost","objects":["a","b"],"hom":[[0,"1/2"],["inf",0]]}"#;
        let doc = parse_str(text, &ctx()).unwrap();
        assert_eq!(doc.kind(), DocKind::Category);
        let printed = doc.to_json();
        let again = parse_any(&printed, &ctx()).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_json(), printed);
    }

    #[test]
    fn presheaf_inherits_quantale() {
        let text = r#"{"base":{"quantale":"bool2","objects":["a","b"],"hom":[[true,true],[false,true]]},"psi":[true,false]}"#;
        let doc = parse_str(text, &ctx()).unwrap();
        assert_eq!(doc.quantale(), QuantaleId::Bool2);
        assert_eq!(doc.kind(), DocKind::Presheaf);
    }

    #[test]
    fn invalid_category_is_input_error() {
        let text = r#"{"quantale":"cost","objects":["a","b","c"],"hom":[[0,1,5],[1,0,1],[5,1,0]]}"#;
        match parse_str(text, &ctx()) {
            Err(Error::Invalid { kind, violation }) => {
                assert_eq!(kind, "category");
                assert_eq!(violation.law, "transitivity");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn floats_need_opt_in() {
        let text = r#"{"quantale":"unit","values":[0.25]}"#;
        assert!(parse_str(text, &ctx()).is_err());
        let doc = parse_str(text, &ParseContext::new(true, &NoResolver)).unwrap();
        assert_eq!(doc.to_json()["values"][0], json!("1/4"));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"quantale":"bool2","objects":["a"],"hom":[[true]],"extra":1}"#;
        assert!(matches!(parse_str(text, &ctx()), Err(Error::Parse(_))));
    }

    #[test]
    fn nested_quantale_mismatch() {
        let text = r#"{"quantale":"cost","base":{"quantale":"bool2","objects":["a"],"hom":[[true]]},"psi":[0]}"#;
        assert!(matches!(
            parse_str(text, &ctx()),
            Err(Error::QuantaleMismatch { .. })
        ));
    }

    #[test]
    fn delta_text_uses_breakpoint_tables() {
        let text = r#"{"quantale":"delta","objects":["a"],"hom":[[[[0,1]]]]}"#;
        let doc = parse_str(text, &ctx()).unwrap();
        assert!(doc.to_text().contains("f(t)=1 for t>0"));
    }
}
