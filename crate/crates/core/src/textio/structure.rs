use std::collections::BTreeMap;
use std::fmt::Write;

use super::{is_identifier, parse_number, words_by_line, ParseError, SourceSpan, FORMAT_VERSION};
use crate::model::{Element, ModelError, Signature, Structure};

/// Parses the structure format:
///
/// ```text
/// domain 3
/// rel E 2
/// 0 1
/// end
/// const c 0
/// symmetric
/// ```
///
/// `symmetric` closes every binary relation under reversal.
pub fn parse_structure(text: &str) -> Result<Structure, ParseError> {
    let lines = words_by_line(text)?;
    let mut domain: Option<usize> = None;
    let mut rels: Vec<(String, usize)> = Vec::new();
    let mut tuples: Vec<Vec<Vec<Element>>> = Vec::new();
    let mut constants = BTreeMap::new();
    let mut symmetric = false;
    let mut iter = lines.iter();
    let mut last_span = SourceSpan::new(1, 1, 0);
    while let Some(words) = iter.next() {
        let head = &words[0];
        last_span = head.span;
        let expect_args = |k: usize| -> Result<(), ParseError> {
            if words.len() != k + 1 {
                let span = words.get(k + 1).map_or(head.span, |w| w.span);
                return Err(ParseError::syntax(
                    span,
                    format!("`{}` takes {k} argument(s)", head.text),
                ));
            }
            Ok(())
        };
        match head.text {
            "domain" => {
                expect_args(1)?;
                if domain.is_some() {
                    return Err(ParseError::syntax(head.span, "`domain` given twice"));
                }
                let n = parse_number(&words[1], "a domain size")?;
                if n == 0 {
                    return Err(ParseError::invalid(words[1].span, ModelError::EmptyDomain));
                }
                domain = Some(n);
            }
            "rel" => {
                expect_args(2)?;
                let n = domain.ok_or_else(|| {
                    ParseError::syntax(head.span, "`domain` must precede relations")
                })?;
                let name = &words[1];
                if !is_identifier(name.text) {
                    return Err(ParseError::syntax(name.span, format!("invalid relation name `{}`", name.text)));
                }
                if rels.iter().any(|(r, _)| r == name.text) {
                    return Err(ParseError::invalid(
                        name.span,
                        ModelError::DuplicateRelation(name.text.to_string()),
                    ));
                }
                let arity = parse_number(&words[2], "an arity")?;
                if arity == 0 {
                    return Err(ParseError::invalid(
                        words[2].span,
                        ModelError::ZeroArity(name.text.to_string()),
                    ));
                }
                let mut rel_tuples = Vec::new();
                let mut closed = false;
                for row in iter.by_ref() {
                    last_span = row[0].span;
                    if row[0].text == "end" {
                        if row.len() > 1 {
                            return Err(ParseError::syntax(row[1].span, "unexpected text after `end`"));
                        }
                        closed = true;
                        break;
                    }
                    if row.len() != arity {
                        let span = SourceSpan::new(
                            row[0].span.line,
                            row[0].span.column,
                            row.last().unwrap().span.column + row.last().unwrap().span.length
                                - row[0].span.column,
                        );
                        return Err(ParseError::invalid(
                            span,
                            ModelError::ArityMismatch {
                                name: name.text.to_string(),
                                expected: arity,
                                found: row.len(),
                            },
                        ));
                    }
                    let mut t = Vec::with_capacity(arity);
                    for w in row {
                        let e = parse_number(w, "an element")?;
                        if e >= n {
                            return Err(ParseError::invalid(
                                w.span,
                                ModelError::ElementOutOfRange { element: e, domain: n },
                            ));
                        }
                        t.push(e);
                    }
                    rel_tuples.push(t);
                }
                if !closed {
                    return Err(ParseError::syntax(
                        name.span,
                        format!("relation `{}` is missing `end`", name.text),
                    ));
                }
                rels.push((name.text.to_string(), arity));
                tuples.push(rel_tuples);
            }
            "const" => {
                expect_args(2)?;
                let n = domain.ok_or_else(|| {
                    ParseError::syntax(head.span, "`domain` must precede constants")
                })?;
                let name = &words[1];
                if !is_identifier(name.text) {
                    return Err(ParseError::syntax(name.span, format!("invalid constant name `{}`", name.text)));
                }
                let e = parse_number(&words[2], "an element")?;
                if e >= n {
                    return Err(ParseError::invalid(
                        words[2].span,
                        ModelError::ElementOutOfRange { element: e, domain: n },
                    ));
                }
                if constants.insert(name.text.to_string(), e).is_some() {
                    return Err(ParseError::syntax(name.span, format!("constant `{}` named twice", name.text)));
                }
            }
            "symmetric" => {
                expect_args(0)?;
                symmetric = true;
            }
            "end" => return Err(ParseError::syntax(head.span, "`end` outside a relation block")),
            other => {
                return Err(ParseError::syntax(head.span, format!("unknown directive `{other}`")))
            }
        }
    }
    let n = domain.ok_or_else(|| ParseError::syntax(last_span, "missing `domain` line"))?;
    let sig = Signature::new(rels).map_err(|e| ParseError::invalid(last_span, e))?;
    let b = Structure::new(sig, n, tuples, constants).map_err(|e| ParseError::invalid(last_span, e))?;
    Ok(if symmetric { b.symmetrized() } else { b })
}

/// Renders a structure; tuples are listed in sorted order.
pub fn render_structure(b: &Structure) -> String {
    let mut out = String::new();
    writeln!(out, "format {FORMAT_VERSION}").unwrap();
    writeln!(out, "domain {}", b.domain_size()).unwrap();
    for (idx, sym) in b.signature().relations().iter().enumerate() {
        writeln!(out, "rel {} {}", sym.name, sym.arity).unwrap();
        for t in b.tuples(idx) {
            let row: Vec<String> = t.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        writeln!(out, "end").unwrap();
    }
    for (name, e) in b.constants() {
        writeln!(out, "const {name} {e}").unwrap();
    }
    out
}
