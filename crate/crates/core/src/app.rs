//! Command dispatch over JSON documents, shared by the binary and the C
//! interface. Every command returns a [`Report`]; `Err` means bad input.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value as Json};

use crate::basechange::{
    self, adjunction_law, morphism_law_suite, Certain, Embed, ExpNeg, IInf, MorphismKind, NegLog,
    OInf, PInf, QMorphism, Support,
};
use crate::cauchy::{self, EPSequence, Presheaf};
use crate::delta::{Delta, StepFn};
use crate::error::{Error, Result};
use crate::expinj::{self, ExpQuantale, ExpStatus, ExpVerdict};
use crate::json::{self, AnyDoc, Doc, DocKind, DocQuantale, FsResolver, NoResolver, ParseContext};
use crate::laws::quantale_law_suite;
use crate::quantale::{Bool2, Cost, Lawvere, Prob, Quantale, UnitInterval};
use crate::rational::{int, rat};
use crate::report::{Check, Report};
use crate::value::{QValue, QuantaleId};
use crate::vcat::{VCategory, VFunctor};
use crate::vmod::{self, VModule};

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub allow_float: bool,
    pub inexact: bool,
}

/// One input document, with the directory its path references resolve against.
#[derive(Debug, Clone)]
pub struct Input {
    pub label: String,
    pub json: Json,
    pub base_dir: Option<PathBuf>,
}

impl Input {
    pub fn from_file(path: &Path) -> Result<Input> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Ok(Input {
            label: path.display().to_string(),
            json: serde_json::from_str(&text)?,
            base_dir: Some(path.parent().map(Path::to_path_buf).unwrap_or_default()),
        })
    }

    pub fn inline(label: impl Into<String>, json: Json) -> Input {
        Input {
            label: label.into(),
            json,
            base_dir: None,
        }
    }

    fn with_context<T>(&self, opts: &Options, f: impl FnOnce(&ParseContext<'_>) -> Result<T>) -> Result<T> {
        match &self.base_dir {
            Some(dir) => {
                let resolver = FsResolver {
                    base_dir: dir.clone(),
                };
                f(&ParseContext::new(opts.allow_float, &resolver))
            }
            None => f(&ParseContext::new(opts.allow_float, &NoResolver)),
        }
    }

    pub fn parse(&self, opts: &Options) -> Result<AnyDoc> {
        self.with_context(opts, |ctx| json::parse_any(&self.json, ctx))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate,
    Close,
    Dual,
    Order,
    Product,
    Tensor,
    Compose,
    Ext,
    Lift,
    Graph,
    AdjointCheck,
    Yoneda { object: String },
    PresheafDist,
    RightAdjoint,
    Representable,
    CompleteCheck,
    CauchyMeasure,
    SeqConverges { object: Option<String> },
    BaseChange { morphism: String, to: Option<QuantaleId> },
    ExpCheck { depth: usize, family: bool },
    ExpCheckMetric,
    Interpolate,
    QuantaleTest { quantale: Option<QuantaleId> },
}

pub const COMMANDS: &[&str] = &[
    "validate",
    "close",
    "dual",
    "order",
    "product",
    "tensor",
    "compose",
    "ext",
    "lift",
    "graph",
    "adjoint-check",
    "yoneda",
    "presheaf-dist",
    "right-adjoint",
    "representable",
    "complete-check",
    "cauchy-measure",
    "seq-converges",
    "base-change",
    "exp-check",
    "exp-check-metric",
    "interpolate",
    "quantale-test",
];

pub const MORPHISMS: &[&str] = &["I", "O", "P", "E", "L", "I_inf", "O_inf", "P_inf"];

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Close => "close",
            Command::Dual => "dual",
            Command::Order => "order",
            Command::Product => "product",
            Command::Tensor => "tensor",
            Command::Compose => "compose",
            Command::Ext => "ext",
            Command::Lift => "lift",
            Command::Graph => "graph",
            Command::AdjointCheck => "adjoint-check",
            Command::Yoneda { .. } => "yoneda",
            Command::PresheafDist => "presheaf-dist",
            Command::RightAdjoint => "right-adjoint",
            Command::Representable => "representable",
            Command::CompleteCheck => "complete-check",
            Command::CauchyMeasure => "cauchy-measure",
            Command::SeqConverges { .. } => "seq-converges",
            Command::BaseChange { .. } => "base-change",
            Command::ExpCheck { .. } => "exp-check",
            Command::ExpCheckMetric => "exp-check-metric",
            Command::Interpolate => "interpolate",
            Command::QuantaleTest { .. } => "quantale-test",
        }
    }

    /// Accepted number of input documents.
    fn arity(&self) -> (usize, usize) {
        match self {
            Command::Validate => (1, usize::MAX),
            Command::CompleteCheck => (1, usize::MAX),
            Command::Product
            | Command::Tensor
            | Command::Compose
            | Command::Ext
            | Command::Lift
            | Command::AdjointCheck
            | Command::PresheafDist => (2, 2),
            Command::QuantaleTest { quantale: Some(_) } => (0, 0),
            _ => (1, 1),
        }
    }

    /// Builds a command from its name and a parameter object, as used by the
    /// C interface: `object`, `morphism`, `to`, `depth`, `family`, `quantale`.
    pub fn from_name(name: &str, params: &Json) -> Result<Command> {
        let text = |key: &str| -> Result<Option<String>> {
            match params.get(key) {
                None | Some(Json::Null) => Ok(None),
                Some(Json::String(s)) => Ok(Some(s.clone())),
                Some(_) => Err(Error::Parse(format!("parameter `{key}` must be a string"))),
            }
        };
        let quantale = |key: &str| -> Result<Option<QuantaleId>> { text(key)?.map(|s| s.parse()).transpose() };
        Ok(match name {
            "validate" => Command::Validate,
            "close" => Command::Close,
            "dual" => Command::Dual,
            "order" => Command::Order,
            "product" => Command::Product,
            "tensor" => Command::Tensor,
            "compose" => Command::Compose,
            "ext" => Command::Ext,
            "lift" => Command::Lift,
            "graph" => Command::Graph,
            "adjoint-check" => Command::AdjointCheck,
            "yoneda" => Command::Yoneda {
                object: text("object")?.ok_or_else(|| Error::Parse("yoneda needs `object`".into()))?,
            },
            "presheaf-dist" => Command::PresheafDist,
            "right-adjoint" => Command::RightAdjoint,
            "representable" => Command::Representable,
            "complete-check" => Command::CompleteCheck,
            "cauchy-measure" => Command::CauchyMeasure,
            "seq-converges" => Command::SeqConverges {
                object: text("object")?,
            },
            "base-change" => Command::BaseChange {
                morphism: text("morphism")?
                    .ok_or_else(|| Error::Parse("base-change needs `morphism`".into()))?,
                to: quantale("to")?,
            },
            "exp-check" => Command::ExpCheck {
                depth: match params.get("depth") {
                    None | Some(Json::Null) => expinj::DEFAULT_DEPTH,
                    Some(d) => d
                        .as_u64()
                        .and_then(|d| usize::try_from(d).ok())
                        .ok_or_else(|| Error::Parse("`depth` must be a non-negative integer".into()))?,
                },
                family: params.get("family").and_then(Json::as_bool).unwrap_or(false),
            },
            "exp-check-metric" => Command::ExpCheckMetric,
            "interpolate" => Command::Interpolate,
            "quantale-test" => Command::QuantaleTest {
                quantale: quantale("quantale")?,
            },
            other => return Err(Error::Parse(format!("unknown command `{other}`"))),
        })
    }
}

/// The JSON body printed for an input error.
pub fn error_json(command: &str, err: &Error) -> Json {
    let mut out = json!({
        "command": command,
        "status": "error",
        "error": err.to_string(),
    });
    if let Some(v) = err.violation() {
        out["witness"] = v.to_json();
    }
    out
}

pub fn execute(cmd: &Command, inputs: &[Input], opts: &Options) -> Result<Report> {
    let (lo, hi) = cmd.arity();
    if inputs.len() < lo || inputs.len() > hi {
        let expected = if lo == hi {
            lo.to_string()
        } else if hi == usize::MAX {
            format!("at least {lo}")
        } else {
            format!("{lo} to {hi}")
        };
        return Err(Error::Parse(format!(
            "{} takes {expected} document(s), got {}",
            cmd.name(),
            inputs.len()
        )));
    }
    match cmd {
        Command::Validate => return validate(inputs, opts),
        Command::Close => return close(&inputs[0], opts),
        Command::QuantaleTest { quantale: Some(q) } => return quantale_test_default(*q),
        _ => {}
    }
    let docs = inputs.iter().map(|i| i.parse(opts)).collect::<Result<Vec<_>>>()?;
    match cmd {
        Command::BaseChange { morphism, to } => {
            return base_change(morphism, *to, docs.into_iter().next().expect("arity 1"), opts)
        }
        Command::ExpCheckMetric => {
            let doc = Lawvere::unwrap(docs.into_iter().next().expect("arity 1"))?;
            return exp_check_metric(&*category(&doc)?);
        }
        _ => {}
    }
    let q = docs[0].quantale();
    for d in &docs[1..] {
        if d.quantale() != q {
            return Err(Error::QuantaleMismatch {
                expected: q,
                found: d.quantale(),
            });
        }
    }
    match q {
        QuantaleId::Bool2 => run_typed::<Bool2>(cmd, unwrap_all(docs)?),
        QuantaleId::Cost => run_typed::<Lawvere>(cmd, unwrap_all(docs)?),
        QuantaleId::Unit => run_typed::<UnitInterval>(cmd, unwrap_all(docs)?),
        QuantaleId::Delta => run_typed::<Delta>(cmd, unwrap_all(docs)?),
    }
}

fn unwrap_all<Q: DocQuantale>(docs: Vec<AnyDoc>) -> Result<Vec<Doc<Q>>> {
    docs.into_iter().map(Q::unwrap).collect()
}

fn wrong_kind(expected: DocKind, found: DocKind) -> Error {
    Error::Parse(format!(
        "expected a {} document, got a {}",
        expected.tag(),
        found.tag()
    ))
}

fn category<Q: Quantale>(d: &Doc<Q>) -> Result<Arc<VCategory<Q>>> {
    match d {
        Doc::Category(c) => Ok(c.clone()),
        other => Err(wrong_kind(DocKind::Category, other.kind())),
    }
}

fn module<Q: Quantale>(d: &Doc<Q>) -> Result<&VModule<Q>> {
    match d {
        Doc::Module(m) => Ok(m),
        other => Err(wrong_kind(DocKind::Module, other.kind())),
    }
}

fn presheaf<Q: Quantale>(d: &Doc<Q>) -> Result<&Presheaf<Q>> {
    match d {
        Doc::Presheaf(p) => Ok(p),
        other => Err(wrong_kind(DocKind::Presheaf, other.kind())),
    }
}

fn sequence<Q: Quantale>(d: &Doc<Q>) -> Result<&EPSequence<Q>> {
    match d {
        Doc::Sequence(s) => Ok(s),
        other => Err(wrong_kind(DocKind::Sequence, other.kind())),
    }
}

fn functor<Q: Quantale>(d: &Doc<Q>) -> Result<&VFunctor<Q>> {
    match d {
        Doc::Functor(f) => Ok(f),
        other => Err(wrong_kind(DocKind::Functor, other.kind())),
    }
}

fn values<Q: Quantale>(d: &Doc<Q>) -> Result<&[Q::Value]> {
    match d {
        Doc::ValueList(v) => Ok(v),
        other => Err(wrong_kind(DocKind::ValueList, other.kind())),
    }
}

fn qv<Q: Quantale>(v: &Q::Value) -> QValue {
    Q::to_qvalue(v)
}

fn doc_report<Q: Quantale>(cmd: &Command, doc: Doc<Q>, summary: String) -> Report {
    Report::new(cmd.name())
        .summary(summary)
        .output(doc.to_json(), doc.to_text())
}

fn run_typed<Q: ExpQuantale + DocQuantale>(cmd: &Command, docs: Vec<Doc<Q>>) -> Result<Report> {
    let name = cmd.name();
    match cmd {
        Command::Dual => {
            let c = category(&docs[0])?;
            Ok(doc_report(cmd, Doc::Category(Arc::new(c.dual())), "dual category".into()))
        }
        Command::Order => {
            let c = category(&docs[0])?;
            Ok(doc_report(
                cmd,
                Doc::Category(Arc::new(c.underlying_order())),
                "underlying order: x <= y iff k <= a(x,y)".into(),
            ))
        }
        Command::Product | Command::Tensor => {
            let (a, b) = (category(&docs[0])?, category(&docs[1])?);
            let (out, what) = if *cmd == Command::Product {
                (a.product(&b), "product (meet of components)")
            } else {
                (a.tensor(&b), "tensor (tensor of components)")
            };
            Ok(doc_report(cmd, Doc::Category(Arc::new(out)), what.into()))
        }
        Command::Compose => {
            let (phi, psi) = (module(&docs[0])?, module(&docs[1])?);
            let out = vmod::compose(psi, phi)?;
            Ok(doc_report(cmd, Doc::Module(out), "psi . phi".into()))
        }
        Command::Ext => {
            let (psi, phi) = (module(&docs[0])?, module(&docs[1])?);
            let out = vmod::extension(psi, phi)?;
            Ok(doc_report(cmd, Doc::Module(out), "extension of psi along phi".into()))
        }
        Command::Lift => {
            let (phi, psi) = (module(&docs[0])?, module(&docs[1])?);
            let out = vmod::lifting(phi, psi)?;
            Ok(doc_report(cmd, Doc::Module(out), "lifting of phi through psi".into()))
        }
        Command::Graph => {
            let f = functor(&docs[0])?;
            let (lower, upper) = vmod::functor_graph(f);
            let (l, u) = (Doc::Module(lower), Doc::Module(upper));
            let out = json!({ "f_*": l.to_json(), "f^*": u.to_json() });
            let text = format!("f_*:\n{}f^*:\n{}", l.to_text(), u.to_text());
            Ok(Report::new(name)
                .summary(format!(
                    "graph modules; fully faithful: {}, fully dense: {}",
                    vmod::is_fully_faithful_mod(f),
                    vmod::is_fully_dense_mod(f)
                ))
                .output(out, text))
        }
        Command::AdjointCheck => {
            let (phi, psi) = (module(&docs[0])?, module(&docs[1])?);
            let mut report = Report::new(name);
            match vmod::check_adjoint(phi, psi)? {
                Ok(pair) => {
                    report.push_check(Check::pass("adjunction unit", "a <= psi . phi"));
                    report.push_check(Check::pass("adjunction counit", "phi . psi <= b"));
                    let (unit, counit) = (Doc::Module(pair.unit), Doc::Module(pair.counit));
                    let text = format!("unit psi . phi:\n{}counit phi . psi:\n{}", unit.to_text(), counit.to_text());
                    report = report
                        .summary("phi is left adjoint to psi")
                        .output(json!({"unit": unit.to_json(), "counit": counit.to_json()}), text);
                }
                Err(v) => {
                    report.push_check(Check::fail(v.law.clone(), v.to_string(), Some(v.to_json())));
                    report = report.summary("phi is not left adjoint to psi");
                }
            }
            Ok(report.settle_from_checks())
        }
        Command::Yoneda { object } => {
            let c = category(&docs[0])?;
            let x = c.index_of(object)?;
            Ok(doc_report(
                cmd,
                Doc::Presheaf(cauchy::yoneda(&c, x)),
                format!("yoneda image a(-,{object})"),
            ))
        }
        Command::PresheafDist => {
            let (p, p2) = (presheaf(&docs[0])?, presheaf(&docs[1])?);
            let d = cauchy::presheaf_dist(p, p2)?;
            let v = qv::<Q>(&d);
            Ok(Report::new(name)
                .summary("[psi, psi'] = meet over x of hom(psi(x), psi'(x))")
                .output(json!({ "distance": v.to_json() }), format!("distance: {v}")))
        }
        Command::RightAdjoint => {
            let p = presheaf(&docs[0])?;
            let phi = cauchy::candidate_left_adjoint(p);
            let vals = json::values_to_json::<Q>(phi.values());
            let text: Vec<String> = p
                .base()
                .objects()
                .iter()
                .zip(phi.values())
                .map(|(n, v)| format!("  phi({n}) = {}", qv::<Q>(v)))
                .collect();
            let mut report = Report::new(name).output(
                json!({ "left_adjoint": vals, "representable_by": cauchy::is_representable(p).map(|x| p.base().name(x).to_string()) }),
                format!("candidate left adjoint:\n{}", text.join("\n")),
            );
            match cauchy::is_right_adjoint(p) {
                Ok(_) => {
                    report.push_check(Check::pass("candidate is left adjoint", "phi(x) = [psi, a(-,x)]"));
                    report = report.summary("psi is a right adjoint");
                }
                Err(v) => {
                    report.push_check(Check::fail("candidate is left adjoint", v.to_string(), Some(v.to_json())));
                    report = report
                        .summary("psi has no left adjoint")
                        .note("any left adjoint would equal the candidate, so none exists");
                }
            }
            Ok(report.settle_from_checks())
        }
        Command::Representable => {
            let p = presheaf(&docs[0])?;
            let report = Report::new(name);
            Ok(match cauchy::is_representable(p) {
                Some(x) => {
                    let n = p.base().name(x).to_string();
                    report
                        .summary(format!("psi = a(-,{n})"))
                        .output(json!({ "object": n }), format!("represented by {n}"))
                }
                None => report
                    .summary("psi is not representable")
                    .output(json!({ "object": null }), "not representable")
                    .negative(None),
            })
        }
        Command::CompleteCheck => complete_check::<Q>(&docs),
        Command::CauchyMeasure => {
            let s = sequence(&docs[0])?;
            let m = cauchy::cauchy_measure(s);
            let cauchy = cauchy::is_cauchy(s);
            let v = qv::<Q>(&m);
            Ok(Report::new(name)
                .summary(format!("meet of a(c,c') over the cycle; Cauchy: {cauchy}"))
                .output(
                    json!({ "measure": v.to_json(), "cauchy": cauchy }),
                    format!("measure: {v}\ncauchy: {cauchy}"),
                ))
        }
        Command::SeqConverges { object } => seq_converges::<Q>(sequence(&docs[0])?, object.as_deref()),
        Command::ExpCheck { depth, family } => {
            let c = category(&docs[0])?;
            let fam = expinj::exp_family(&c, *depth);
            let verdict = expinj::check_exponentiable_on(&c, &fam, Q::EXHAUSTIVE);
            let mut report = exp_report(name, &verdict).note(format!("family depth {depth}"));
            if Q::ID == QuantaleId::Cost {
                let cost: VCategory<Lawvere> = VCategory::new(
                    c.objects().to_vec(),
                    c.hom().map(|v| match qv::<Q>(v) {
                        QValue::Cost(c) => c,
                        _ => unreachable!("cost category"),
                    }),
                )?;
                let exact = expinj::check_exponentiable_metric(&cost);
                report.push_check(Check::from_bool(
                    "agrees with the exact metric decision",
                    exact.is_counterexample() == verdict.is_counterexample(),
                    format!("metric decision: {}", exact.status.tag()),
                ));
            }
            if *family {
                let mut out = report.output.take().unwrap_or_else(|| json!({}));
                out["family"] = json::values_to_json::<Q>(&fam);
                report.output = Some(out);
            }
            Ok(report.settle_from_checks())
        }
        Command::Interpolate => {
            let vs = values(&docs[0])?;
            let [u, v, w] = vs else {
                return Err(Error::Shape(format!(
                    "interpolate takes exactly three values [u, v, w], got {}",
                    vs.len()
                )));
            };
            let wit = expinj::quantale_interpolation::<Q>(u, v, w);
            let mut report = Report::new(name).summary("w ∧ (u ⊗ v) as a join of u' ⊗ v' with u' <= u, v' <= v");
            report.push_check(match wit.verify() {
                Ok(()) => Check::pass("witness identity", format!("{} pair(s)", wit.pairs.len())),
                Err(e) => Check::fail("witness identity", e, None),
            });
            let text: Vec<String> = wit
                .pairs
                .iter()
                .map(|p| format!("  u' = {}, v' = {}", qv::<Q>(&p.u), qv::<Q>(&p.v)))
                .collect();
            Ok(report
                .output(
                    wit.to_json(),
                    format!("meet: {}\n{}", qv::<Q>(&wit.target()), text.join("\n")),
                )
                .settle_from_checks())
        }
        Command::QuantaleTest { .. } => {
            let samples = values(&docs[0])?;
            Ok(law_report::<Q>(samples))
        }
        Command::Validate
        | Command::Close
        | Command::BaseChange { .. }
        | Command::ExpCheckMetric => unreachable!("dispatched before typing"),
    }
}

fn validate(inputs: &[Input], opts: &Options) -> Result<Report> {
    let mut report = Report::new("validate");
    let mut outputs = Vec::new();
    let mut texts = Vec::new();
    for input in inputs {
        match input.parse(opts) {
            Ok(doc) => {
                let detail = describe(&doc);
                report.push_check(Check::pass(&input.label, detail));
                outputs.push(doc.to_json());
                texts.push(doc.to_text());
            }
            Err(e @ Error::Invalid { .. }) => {
                let witness = e.violation().map(|v| v.to_json());
                report.push_check(Check::fail(&input.label, e.to_string(), witness));
            }
            Err(e) => return Err(e),
        }
    }
    let valid = outputs.len();
    let output = if inputs.len() == 1 {
        outputs.pop().unwrap_or(Json::Null)
    } else {
        Json::Array(outputs)
    };
    Ok(report
        .summary(format!("{valid} of {} document(s) valid", inputs.len()))
        .output(output, texts.join("\n"))
        .settle_from_checks())
}

fn describe(doc: &AnyDoc) -> String {
    let base = format!("valid {} over {}", doc.kind().tag(), doc.quantale());
    let props = crate::with_doc!(doc, d, Q => match d {
        Doc::Category(c) => {
            let mut props = Vec::new();
            if c.is_symmetric() {
                props.push("symmetric");
            }
            if c.is_separated() {
                props.push("separated");
            }
            if Q::ID == QuantaleId::Delta {
                let finitary = c
                    .hom()
                    .iter()
                    .all(|v| Q::to_qvalue(v).as_step().is_some_and(StepFn::is_finite_distribution));
                if finitary {
                    props.push("finitary");
                }
            }
            props
        }
        _ => Vec::new(),
    });
    if props.is_empty() {
        base
    } else {
        format!("{base} ({})", props.join(", "))
    }
}

fn close(input: &Input, opts: &Options) -> Result<Report> {
    let q = input.with_context(opts, |ctx| json::document_quantale(&input.json, ctx))?;
    fn go<Q: Quantale>(input: &Input, opts: &Options) -> Result<Report> {
        let (objects, raw) = input.with_context(opts, |ctx| json::parse_category_raw::<Q>(&input.json, ctx))?;
        let closed = VCategory::<Q>::path_closure(objects, raw)?;
        Ok(doc_report(
            &Command::Close,
            Doc::Category(Arc::new(closed)),
            "least category above the given matrix (k on the diagonal, closed under composition)".into(),
        ))
    }
    match q {
        QuantaleId::Bool2 => go::<Bool2>(input, opts),
        QuantaleId::Cost => go::<Lawvere>(input, opts),
        QuantaleId::Unit => go::<UnitInterval>(input, opts),
        QuantaleId::Delta => go::<Delta>(input, opts),
    }
}

fn complete_check<Q: DocQuantale>(docs: &[Doc<Q>]) -> Result<Report> {
    let base = category(&docs[0])?;
    let candidates = docs[1..]
        .iter()
        .map(|d| presheaf(d).cloned())
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("complete-check");
    if Q::ID == QuantaleId::Bool2 && candidates.is_empty() {
        let b: VCategory<Bool2> = VCategory::new(
            base.objects().to_vec(),
            base.hom().map(|v| Q::to_qvalue(v).as_bool().expect("bool2")),
        )?;
        let verdict = cauchy::is_cauchy_complete_bool2(&Arc::new(b))?;
        let witnesses: Vec<Json> = verdict
            .unrepresentable
            .iter()
            .map(|p| json::values_to_json::<Bool2>(p.values()))
            .collect();
        report.push_check(Check::from_bool(
            "every right adjoint presheaf is representable",
            verdict.complete,
            format!(
                "{} presheaves, {} right adjoint, {} unrepresentable",
                verdict.presheaves,
                verdict.adjoint,
                witnesses.len()
            ),
        ));
        let out = json!({
            "complete": verdict.complete,
            "presheaves": verdict.presheaves,
            "adjoint": verdict.adjoint,
            "unrepresentable": witnesses,
        });
        let text = format!("complete: {}", verdict.complete);
        let mut report = report
            .summary("exhaustive over all presheaves")
            .output(out, text);
        if !verdict.complete {
            report = report.negative(Some(json!({ "unrepresentable": witnesses })));
        }
        return Ok(report);
    }
    let cert = cauchy::completion_certificate(&base, &candidates)?;
    let mut verdicts = Vec::new();
    let mut missing = Vec::new();
    for (i, v) in cert.verdicts.iter().enumerate() {
        let rep = v.representable_by.map(|x| base.name(x).to_string());
        if v.adjoint && rep.is_none() {
            missing.push(i);
        }
        verdicts.push(json!({
            "candidate": i,
            "adjoint": v.adjoint,
            "representable_by": rep,
            "left_adjoint": json::values_to_json::<Q>(v.left_adjoint.values()),
            "failure": v.failure.as_ref().map(|f| f.to_json()),
        }));
    }
    report.push_check(Check::from_bool(
        "adjoint candidates are representable",
        missing.is_empty(),
        format!("{} candidate(s), {} adjoint", cert.verdicts.len(), cert.verdicts.iter().filter(|v| v.adjoint).count()),
    ));
    report.push_check(Check::from_bool(
        "yoneda image is dense among the members",
        cert.yoneda_dense,
        "",
    ));
    let mut out = json!({
        "candidates": verdicts,
        "members": json::category_to_json(&cert.members),
        "yoneda_dense": cert.yoneda_dense,
        "symmetric": cert.symmetric,
    });
    if let Some(f) = cert.finitary {
        out["finitary"] = json!(f);
    }
    let text = json::category_to_text(&cert.members);
    let mut report = report
        .summary("certificate over the given candidates")
        .output(out, text)
        .note("only the given candidates are examined");
    if !missing.is_empty() {
        report = report.negative(Some(json!({ "unrepresentable_candidates": missing })));
    }
    Ok(report.settle_from_checks())
}

fn seq_converges<Q: Quantale>(s: &EPSequence<Q>, object: Option<&str>) -> Result<Report> {
    let base = s.base();
    let cauchy = cauchy::is_cauchy(s);
    let (phi, psi) = cauchy::sequence_modules(s);
    let mut report = Report::new("seq-converges");
    let adjoint = cauchy::check_point_adjoint(&phi, &psi)?.is_ok();
    report.push_check(Check::from_bool(
        "Cauchy iff phi_s is left adjoint to psi_s",
        adjoint == cauchy,
        format!("Cauchy: {cauchy}, adjoint: {adjoint}"),
    ));
    let targets: Vec<usize> = match object {
        Some(name) => vec![base.index_of(name)?],
        None => (0..base.len()).collect(),
    };
    let mut module_limits = Vec::new();
    let mut topo_limits = Vec::new();
    for &x in &targets {
        if cauchy::converges_module(s, x)?.converges {
            module_limits.push(base.name(x).to_string());
        }
        if base.sequence_converges_topologically(s, x)? {
            topo_limits.push(base.name(x).to_string());
        }
    }
    if cauchy {
        report.push_check(Check::from_bool(
            "module and topological limits agree",
            module_limits == topo_limits,
            format!("module: {module_limits:?}, topological: {topo_limits:?}"),
        ));
    } else {
        report = report.note("the sequence is not Cauchy; module and topological limits need not agree");
    }
    let text = format!(
        "cauchy: {cauchy}\nmodule limits: [{}]\ntopological limits: [{}]",
        module_limits.join(", "),
        topo_limits.join(", ")
    );
    let found = !module_limits.is_empty();
    let out = json!({
        "cauchy": cauchy,
        "module_limits": module_limits,
        "topological_limits": topo_limits,
        "phi_s": json::values_to_json::<Q>(phi.values()),
        "psi_s": json::values_to_json::<Q>(psi.values()),
    });
    let mut report = report
        .summary(match object {
            Some(o) => format!("convergence to {o}"),
            None => "limits among all objects".into(),
        })
        .output(out, text);
    if !found {
        report = report.negative(None);
    }
    Ok(report.settle_from_checks())
}

fn exp_report(name: &str, verdict: &ExpVerdict) -> Report {
    let mut out = json!({
        "status": verdict.status.tag(),
        "family": verdict.family,
        "family_size": verdict.family_size,
    });
    let mut report = Report::new(name).summary(format!(
        "join over x of (a(x0,x) ∧ v0) ⊗ (a(x,x2) ∧ v1) >= a(x0,x2) ∧ (v0 ⊗ v1): {}",
        verdict.status.tag()
    ));
    let text = match &verdict.witness {
        Some(w) => {
            out["witness"] = w.to_json();
            format!(
                "counterexample at x0 = {}, x2 = {}, v0 = {}, v1 = {}\n  lhs = {}\n  rhs = {}",
                w.x0, w.x2, w.v0, w.v1, w.lhs, w.rhs
            )
        }
        None => format!("no counterexample ({})", verdict.status.tag()),
    };
    report = report.output(out, text);
    if verdict.status == ExpStatus::Counterexample {
        report = report.negative(verdict.witness.as_ref().map(|w| w.to_json()));
    }
    report
}

fn exp_check_metric(c: &VCategory<Lawvere>) -> Result<Report> {
    let exact = expinj::check_exponentiable_metric(c);
    let mut report = exp_report("exp-check-metric", &exact);
    if let Some(w) = &exact.witness {
        report.push_check(Check::from_bool(
            "witness violates the inequality",
            !w.rhs.leq(&w.lhs)?,
            format!("lhs = {}, rhs = {}", w.lhs, w.rhs),
        ));
    }
    Ok(report)
}

fn law_report<Q: Quantale>(samples: &[Q::Value]) -> Report {
    let laws = quantale_law_suite::<Q>(samples);
    let mut report = Report::new("quantale-test").summary(format!(
        "{} samples over {}, {} triples{}",
        laws.samples,
        Q::ID,
        laws.triples,
        if laws.exhaustive { " (all)" } else { "" }
    ));
    for c in laws.checks {
        report.push_check(c);
    }
    report.settle_from_checks()
}

/// A fixed sample set per quantale, for `quantale-test` without a file.
pub fn default_samples(q: QuantaleId) -> Vec<QValue> {
    let g = |d: crate::rational::Rat, u: crate::rational::Rat| StepFn::generator(d, u).expect("valid generator");
    match q {
        QuantaleId::Bool2 => vec![QValue::Bool2(false), QValue::Bool2(true)],
        QuantaleId::Cost => [
            Cost::zero(),
            Cost::Finite(rat(1, 3)),
            Cost::Finite(rat(1, 2)),
            Cost::Finite(int(1)),
            Cost::Finite(int(2)),
            Cost::Finite(rat(7, 2)),
            Cost::Infinite,
        ]
        .into_iter()
        .map(QValue::Cost)
        .collect(),
        QuantaleId::Unit => [
            Prob::zero(),
            Prob::new(rat(1, 4)).expect("in range"),
            Prob::new(rat(1, 3)).expect("in range"),
            Prob::new(rat(1, 2)).expect("in range"),
            Prob::new(rat(3, 4)).expect("in range"),
            Prob::one(),
        ]
        .into_iter()
        .map(QValue::Unit)
        .collect(),
        QuantaleId::Delta => [
            StepFn::bottom(),
            StepFn::epsilon(),
            g(int(0), rat(1, 2)),
            g(int(1), int(1)),
            g(int(1), rat(1, 2)),
            g(rat(1, 2), rat(1, 4)).join(&g(int(2), int(1))),
            g(int(2), rat(1, 3)).join(&g(int(3), rat(2, 3))),
        ]
        .into_iter()
        .map(QValue::Delta)
        .collect(),
    }
}

fn quantale_test_default(q: QuantaleId) -> Result<Report> {
    fn go<Q: Quantale>() -> Result<Report> {
        let samples = default_samples(Q::ID)
            .iter()
            .map(Q::from_qvalue)
            .collect::<Result<Vec<_>>>()?;
        Ok(law_report::<Q>(&samples))
    }
    match q {
        QuantaleId::Bool2 => go::<Bool2>(),
        QuantaleId::Cost => go::<Lawvere>(),
        QuantaleId::Unit => go::<UnitInterval>(),
        QuantaleId::Delta => go::<Delta>(),
    }
}

/// Distinct values occurring in a document, with `⊥` and `k`.
pub fn doc_samples<Q: Quantale>(doc: &Doc<Q>) -> Vec<Q::Value> {
    let mut out = vec![Q::bottom(), Q::unit()];
    let mut add = |v: &Q::Value| {
        if !out.contains(v) {
            out.push(v.clone());
        }
    };
    match doc {
        Doc::Category(c) => c.hom().iter().for_each(&mut add),
        Doc::Module(m) => {
            m.source().hom().iter().for_each(&mut add);
            m.target().hom().iter().for_each(&mut add);
            m.matrix().iter().for_each(&mut add);
        }
        Doc::Presheaf(p) => {
            p.base().hom().iter().for_each(&mut add);
            p.values().iter().for_each(&mut add);
        }
        Doc::Sequence(s) => s.base().hom().iter().for_each(&mut add),
        Doc::ValueList(v) => v.iter().for_each(&mut add),
        Doc::Functor(f) => {
            f.source().hom().iter().for_each(&mut add);
            f.target().hom().iter().for_each(&mut add);
        }
    }
    out
}

fn exact_image<T>(r: Result<T>, kind: MorphismKind, what: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Violation(v) if kind != MorphismKind::Inexact => {
            Error::Bug(format!("image is not a {what}: {v}"))
        }
        other => other,
    })
}

/// Applies `M` entrywise to a document.
pub fn change_doc<M: QMorphism>(doc: &Doc<M::Source>) -> Result<Doc<M::Target>> {
    use basechange::{apply_category, apply_functor, apply_module};
    Ok(match doc {
        Doc::Category(c) => Doc::Category(Arc::new(apply_category::<M>(c)?)),
        Doc::Module(m) => {
            let s = Arc::new(apply_category::<M>(m.source())?);
            let t = Arc::new(apply_category::<M>(m.target())?);
            Doc::Module(apply_module::<M>(m, s, t)?)
        }
        Doc::Presheaf(p) => {
            let base = Arc::new(apply_category::<M>(p.base())?);
            let vals = p.values().iter().map(M::apply).collect();
            Doc::Presheaf(exact_image(Presheaf::new(base, vals), M::KIND, "presheaf")?)
        }
        Doc::Sequence(s) => {
            let base = Arc::new(apply_category::<M>(s.base())?);
            Doc::Sequence(EPSequence::new(base, s.preamble().to_vec(), s.cycle().to_vec())?)
        }
        Doc::ValueList(v) => Doc::ValueList(v.iter().map(M::apply).collect()),
        Doc::Functor(f) => {
            let s = Arc::new(apply_category::<M>(f.source())?);
            let t = Arc::new(apply_category::<M>(f.target())?);
            Doc::Functor(exact_image(apply_functor::<M>(f, s, t), M::KIND, "functor")?)
        }
    })
}

fn change_report<M>(doc: &Doc<M::Source>, extra: Vec<Check>) -> Result<Report>
where
    M: QMorphism,
{
    let out = change_doc::<M>(doc)?;
    let samples = doc_samples(doc);
    let mut report = Report::new("base-change").summary(format!(
        "{}: {} -> {} ({})",
        M::NAME,
        <M::Source as Quantale>::ID,
        <M::Target as Quantale>::ID,
        M::KIND.tag()
    ));
    for c in morphism_law_suite::<M>(&samples).into_iter().chain(extra) {
        report.push_check(c);
    }
    report = report.output(out.to_json(), out.to_text());
    if M::KIND == MorphismKind::Inexact {
        return Ok(report.note("evaluated in floating point; law checks are informational"));
    }
    if M::KIND == MorphismKind::Lax {
        report = report.note("lax morphism: tensor and unit are preserved up to inequality");
    }
    Ok(report.settle_from_checks())
}

fn images<M: QMorphism>(samples: &[<M::Source as Quantale>::Value]) -> Vec<<M::Target as Quantale>::Value> {
    let mut out = vec![<M::Target as Quantale>::bottom(), <M::Target as Quantale>::unit()];
    for v in samples.iter().map(M::apply) {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn base_change(morphism: &str, to: Option<QuantaleId>, doc: AnyDoc, opts: &Options) -> Result<Report> {
    let expected = |q: QuantaleId, found: &AnyDoc| Error::QuantaleMismatch {
        expected: q,
        found: found.quantale(),
    };
    match morphism {
        "I" => {
            let d = Bool2::unwrap(doc)?;
            let to = to.ok_or_else(|| Error::Parse("morphism I needs a target quantale (--to)".into()))?;
            fn go<Q: Quantale>(d: &Doc<Bool2>) -> Result<Report> {
                let targets = images::<Embed<Q>>(&[false, true]);
                let adj = adjunction_law::<Embed<Q>, Certain<Q>>(&[false, true], &targets);
                change_report::<Embed<Q>>(d, vec![adj])
            }
            match to {
                QuantaleId::Bool2 => go::<Bool2>(&d),
                QuantaleId::Cost => go::<Lawvere>(&d),
                QuantaleId::Unit => go::<UnitInterval>(&d),
                QuantaleId::Delta => go::<Delta>(&d),
            }
        }
        "O" | "P" => {
            if let Some(t) = to.filter(|t| *t != QuantaleId::Bool2) {
                return Err(Error::Parse(format!("morphism {morphism} lands in bool2, not {t}")));
            }
            let support = morphism == "O";
            crate::with_doc!(doc, d, Q => {
                let samples = doc_samples(&d);
                if support {
                    let adj = adjunction_law::<Support<Q>, Embed<Q>>(&samples, &[false, true]);
                    change_report::<Support<Q>>(&d, vec![adj])
                } else {
                    let adj = adjunction_law::<Embed<Q>, Certain<Q>>(&[false, true], &samples);
                    change_report::<Certain<Q>>(&d, vec![adj])
                }
            })
        }
        "I_inf" => match doc {
            AnyDoc::Cost(d) => {
                let samples = doc_samples(&d);
                let targets = images::<IInf>(&samples);
                let extra = vec![
                    adjunction_law::<OInf, IInf>(&targets, &samples),
                    adjunction_law::<IInf, PInf>(&samples, &targets),
                    Check::from_bool(
                        "P_inf . I_inf = id",
                        samples.iter().all(|x| PInf::apply(&IInf::apply(x)) == *x),
                        "",
                    ),
                    Check::from_bool(
                        "O_inf . I_inf = id",
                        samples.iter().all(|x| OInf::apply(&IInf::apply(x)) == *x),
                        "",
                    ),
                ];
                change_report::<IInf>(&d, extra)
            }
            other => Err(expected(QuantaleId::Cost, &other)),
        },
        "O_inf" | "P_inf" => match doc {
            AnyDoc::Delta(d) => {
                let samples = doc_samples(&d);
                if morphism == "O_inf" {
                    let targets = images::<OInf>(&samples);
                    let adj = adjunction_law::<OInf, IInf>(&samples, &targets);
                    change_report::<OInf>(&d, vec![adj])
                } else {
                    let targets = images::<PInf>(&samples);
                    let extra = vec![
                        adjunction_law::<IInf, PInf>(&targets, &samples),
                        basechange::p_inf_join_failure_check(50),
                    ];
                    change_report::<PInf>(&d, extra)
                }
            }
            other => Err(expected(QuantaleId::Delta, &other)),
        },
        "E" | "L" => {
            if !opts.inexact {
                return Err(Error::Unsupported(format!(
                    "morphism {morphism} is irrational on rationals; pass --inexact to approximate it"
                )));
            }
            match (morphism, doc) {
                ("E", AnyDoc::Cost(d)) => change_report::<ExpNeg>(&d, Vec::new()),
                ("L", AnyDoc::Unit(d)) => change_report::<NegLog>(&d, Vec::new()),
                ("E", other) => Err(expected(QuantaleId::Cost, &other)),
                (_, other) => Err(expected(QuantaleId::Unit, &other)),
            }
        }
        other => Err(Error::Parse(format!(
            "unknown morphism `{other}` (expected one of {})",
            MORPHISMS.join(", ")
        ))),
    }
}
