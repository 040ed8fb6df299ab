//! JSON and CSV forms of elements and tensors. Every JSON document carries
//! both the printed element and its terms, and both parse back to the same
//! element.

use serde::{Deserialize, Serialize};

use crate::algebra::GradedPoly;
use crate::error::{Error, Result};
use crate::expr::{eval_gamma, eval_mgl, eval_op, parse};
use crate::mgl::{CoactionTensor, MglComodule, MglElement};
use crate::ops::{OperationAlgebra, OperationElement, OperationTensor};
use crate::steenrod::{GammaElement, MilnorMonomial, Mode, SteenrodContext, TensorGamma};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Gamma,
    Operation,
    Mgl,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub kind: ElementKind,
    pub ell: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<Mode>,
    pub text: String,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTermJson {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    pub kind: ElementKind,
    pub ell: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<Mode>,
    pub text: String,
    pub terms: Vec<TensorTermJson>,
}

pub fn gamma_json(ctx: &SteenrodContext, g: &GammaElement) -> ElementJson {
    ElementJson {
        kind: ElementKind::Gamma,
        ell: ctx.ell(),
        mode: Some(ctx.mode()),
        text: g.to_string(),
        terms: g.terms().map(|(m, a)| TermJson { monomial: m.gamma_string(), coeff: a.to_string() }).collect(),
    }
}

pub fn op_json(alg: &OperationAlgebra, x: &OperationElement) -> ElementJson {
    let ctx = alg.context();
    ElementJson {
        kind: ElementKind::Operation,
        ell: ctx.ell(),
        mode: Some(ctx.mode()),
        text: x.to_string(),
        terms: x.terms().map(|(m, a)| TermJson { monomial: m.op_string(), coeff: a.to_string() }).collect(),
    }
}

pub fn mgl_json(ell: u32, x: &MglElement) -> ElementJson {
    ElementJson {
        kind: ElementKind::Mgl,
        ell,
        mode: None,
        text: x.to_string(),
        terms: x.terms().map(|(m, c)| TermJson { monomial: mgl_monomial(x, m), coeff: c.to_string() }).collect(),
    }
}

fn mgl_monomial(x: &MglElement, m: &crate::algebra::Monomial) -> String {
    if m.is_one() {
        "1".into()
    } else {
        x.format_monomial(m)
    }
}

pub fn tensor_json(ctx: &SteenrodContext, t: &TensorGamma) -> TensorJson {
    TensorJson {
        kind: ElementKind::Gamma,
        ell: ctx.ell(),
        mode: Some(ctx.mode()),
        text: t.to_string(),
        terms: t
            .terms()
            .map(|((l, r), a)| TensorTermJson { left: l.gamma_string(), right: r.gamma_string(), coeff: a.to_string() })
            .collect(),
    }
}

pub fn op_tensor_json(alg: &OperationAlgebra, t: &OperationTensor) -> TensorJson {
    let ctx = alg.context();
    TensorJson {
        kind: ElementKind::Operation,
        ell: ctx.ell(),
        mode: Some(ctx.mode()),
        text: t.to_string(),
        terms: t
            .terms()
            .map(|((l, r), a)| TensorTermJson { left: l.op_string(), right: r.op_string(), coeff: a.to_string() })
            .collect(),
    }
}

pub fn coaction_json(ell: u32, t: &CoactionTensor) -> TensorJson {
    let mut terms = Vec::new();
    for (r, u) in t.terms() {
        for (m, c) in u.terms() {
            terms.push(TensorTermJson { left: r.gamma_string(), right: mgl_monomial(u, m), coeff: c.to_string() });
        }
    }
    TensorJson { kind: ElementKind::Mgl, ell, mode: None, text: t.to_string(), terms }
}

fn single_term<'a, I: Iterator<Item = (&'a MilnorMonomial, &'a GradedPoly)>>(
    mut terms: I,
    src: &str,
) -> Result<MilnorMonomial> {
    match (terms.next(), terms.next()) {
        (Some((m, a)), None) if a.as_constant().is_some_and(|c| c == 1.into()) => Ok(m.clone()),
        _ => Err(Error::Parse { pos: 0, msg: format!("`{src}` is not a basis monomial") }),
    }
}

fn coefficient(ctx: &SteenrodContext, src: &str) -> Result<GradedPoly> {
    let g = eval_gamma(&parse(src)?, ctx)?;
    let out = match g.terms().next() {
        None => Ok(ctx.a_zero()),
        Some((m, a)) if m.is_one() && g.len() == 1 => Ok(a.clone()),
        _ => Err(Error::Parse { pos: 0, msg: format!("`{src}` is not an element of A") }),
    };
    out
}

fn check_kind(found: ElementKind, expected: ElementKind) -> Result<()> {
    if found != expected {
        return Err(Error::Serde(format!("expected a {expected:?} document, found {found:?}")));
    }
    Ok(())
}

/// Rebuilds a `Γ` element from its terms and checks it against the text.
pub fn gamma_from_json(doc: &ElementJson, ctx: &SteenrodContext) -> Result<GammaElement> {
    check_kind(doc.kind, ElementKind::Gamma)?;
    let mut out = GammaElement::zero();
    for t in &doc.terms {
        let m = eval_gamma(&parse(&t.monomial)?, ctx)?;
        out.add_term(single_term(m.terms(), &t.monomial)?, coefficient(ctx, &t.coeff)?);
    }
    if eval_gamma(&parse(&doc.text)?, ctx)? != out {
        return Err(Error::Serde("text and terms disagree".into()));
    }
    Ok(out)
}

pub fn op_from_json(doc: &ElementJson, alg: &OperationAlgebra) -> Result<OperationElement> {
    check_kind(doc.kind, ElementKind::Operation)?;
    let ctx = alg.context();
    let mut out = OperationElement::zero();
    for t in &doc.terms {
        let m = eval_op(&parse(&t.monomial)?, alg)?;
        out.add_term(single_term(m.terms(), &t.monomial)?, coefficient(ctx, &t.coeff)?);
    }
    if eval_op(&parse(&doc.text)?, alg)? != out {
        return Err(Error::Serde("text and terms disagree".into()));
    }
    Ok(out)
}

pub fn mgl_from_json(doc: &ElementJson, comodule: &MglComodule) -> Result<MglElement> {
    check_kind(doc.kind, ElementKind::Mgl)?;
    let mut out = comodule.b(0).scale(0);
    for t in &doc.terms {
        let m = eval_mgl(&parse(&format!("({})*({})", t.coeff, t.monomial))?, comodule)?;
        out = &out + &m;
    }
    if eval_mgl(&parse(&doc.text)?, comodule)? != out {
        return Err(Error::Serde("text and terms disagree".into()));
    }
    Ok(out)
}

pub fn tensor_from_json(doc: &TensorJson, ctx: &SteenrodContext) -> Result<TensorGamma> {
    check_kind(doc.kind, ElementKind::Gamma)?;
    let mut out = TensorGamma::zero();
    for t in &doc.terms {
        let l = eval_gamma(&parse(&t.left)?, ctx)?;
        let r = eval_gamma(&parse(&t.right)?, ctx)?;
        out.add_term(single_term(l.terms(), &t.left)?, single_term(r.terms(), &t.right)?, coefficient(ctx, &t.coeff)?);
    }
    Ok(out)
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn element_csv(doc: &ElementJson) -> String {
    csv_rows(&["monomial", "coeff"], doc.terms.iter().map(|t| vec![t.monomial.clone(), t.coeff.clone()]))
}

pub fn tensor_csv(doc: &TensorJson) -> String {
    csv_rows(
        &["left", "right", "coeff"],
        doc.terms.iter().map(|t| vec![t.left.clone(), t.right.clone(), t.coeff.clone()]),
    )
}

/// A matrix with labelled rows and columns.
pub fn matrix_csv(corner: &str, columns: &[String], rows: &[(String, Vec<String>)]) -> String {
    let mut header = vec![corner];
    header.extend(columns.iter().map(String::as_str));
    csv_rows(&header, rows.iter().map(|(l, r)| std::iter::once(l.clone()).chain(r.iter().cloned()).collect()))
}
