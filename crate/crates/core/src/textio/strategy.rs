use std::fmt::Write;

use super::{check_format_line, split_words, ParseError, SourceSpan};
use crate::model::Element;
use crate::oracle::WitnessStrategy;

/// Renders a strategy as an indented tree. Each offer is one line
/// `offer {b1,...,bj}` and is followed by its children's blocks, indented by
/// two more spaces, in the order of the offered elements. Leaves are not
/// printed, so the strategy for an empty prefix renders as the empty string.
///
/// Trees must have uniform depth (as every strategy for a prefix does).
pub fn render_strategy(w: &WitnessStrategy) -> String {
    let mut out = String::new();
    render_at(w, 0, &mut out);
    out
}

fn render_at(w: &WitnessStrategy, depth: usize, out: &mut String) {
    if let WitnessStrategy::Offer { elements, children } = w {
        let list: Vec<String> = elements.iter().map(ToString::to_string).collect();
        writeln!(out, "{:indent$}offer {{{}}}", "", list.join(","), indent = 2 * depth).unwrap();
        for c in children {
            render_at(c, depth + 1, out);
        }
    }
}

struct Line {
    depth: usize,
    elements: Vec<Element>,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Line>, ParseError> {
    let mut lines = Vec::new();
    let mut first = true;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start_matches(' ').len();
        let content = body.trim();
        let span = SourceSpan::new(line_no, indent + 1, content.chars().count());
        if std::mem::take(&mut first) && content.starts_with("format") {
            check_format_line(&split_words(body, line_no))?;
            continue;
        }
        if body[indent..].starts_with('\t') {
            return Err(ParseError::syntax(span, "indent with spaces, not tabs"));
        }
        if indent % 2 != 0 {
            return Err(ParseError::syntax(span, "indentation must be a multiple of two spaces"));
        }
        let set = content
            .strip_prefix("offer")
            .map(str::trim)
            .and_then(|r| r.strip_prefix('{'))
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| ParseError::syntax(span, "expected `offer {...}`"))?;
        let mut elements = Vec::new();
        if !set.trim().is_empty() {
            for part in set.split(',') {
                let e = part
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::syntax(span, format!("bad element `{}`", part.trim())))?;
                elements.push(e);
            }
        }
        lines.push(Line {
            depth: indent / 2,
            elements,
            span,
        });
    }
    Ok(lines)
}

/// Parses a strategy tree without checking it against a prefix.
pub fn parse_strategy(text: &str) -> Result<WitnessStrategy, ParseError> {
    parse_with(text, None)
}

/// Parses a strategy tree and checks that the offer at depth `d` has exactly
/// `thresholds[d]` distinct elements below `domain_size`, with every play
/// running through the whole prefix.
pub fn parse_strategy_for(
    text: &str,
    thresholds: &[usize],
    domain_size: usize,
) -> Result<WitnessStrategy, ParseError> {
    parse_with(text, Some((thresholds, domain_size)))
}

fn parse_with(text: &str, shape: Option<(&[usize], usize)>) -> Result<WitnessStrategy, ParseError> {
    let lines = lex(text)?;
    if lines.is_empty() {
        if let Some((th, _)) = shape {
            if !th.is_empty() {
                return Err(ParseError::syntax(
                    SourceSpan::new(1, 1, 0),
                    format!("empty strategy for a prefix of length {}", th.len()),
                ));
            }
        }
        return Ok(WitnessStrategy::Leaf);
    }
    let mut pos = 0;
    let tree = parse_node(&lines, &mut pos, 0, shape)?;
    if let Some(extra) = lines.get(pos) {
        return Err(ParseError::syntax(extra.span, "more than one root offer"));
    }
    Ok(tree)
}

fn parse_node(
    lines: &[Line],
    pos: &mut usize,
    depth: usize,
    shape: Option<(&[usize], usize)>,
) -> Result<WitnessStrategy, ParseError> {
    let line = &lines[*pos];
    if line.depth != depth {
        return Err(ParseError::syntax(line.span, format!("expected indentation level {depth}")));
    }
    *pos += 1;
    let k = line.elements.len();
    if k == 0 {
        return Err(ParseError::syntax(line.span, "empty offer"));
    }
    let mut sorted = line.elements.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ParseError::syntax(line.span, "repeated element in offer"));
    }
    if let Some((th, n)) = shape {
        match th.get(depth) {
            None => return Err(ParseError::syntax(line.span, "offer deeper than the prefix")),
            Some(&j) if j != k => {
                return Err(ParseError::syntax(
                    line.span,
                    format!("offer has {k} elements, threshold is {j}"),
                ))
            }
            _ => {}
        }
        if let Some(e) = line.elements.iter().find(|&&e| e >= n) {
            return Err(ParseError::syntax(line.span, format!("element {e} out of range")));
        }
    }
    let mut children = Vec::new();
    while let Some(next) = lines.get(*pos) {
        if next.depth <= depth {
            break;
        }
        if next.depth > depth + 1 {
            return Err(ParseError::syntax(next.span, "indentation skips a level"));
        }
        children.push(parse_node(lines, pos, depth + 1, shape)?);
    }
    if children.is_empty() {
        if let Some((th, _)) = shape {
            if depth + 1 != th.len() {
                return Err(ParseError::syntax(line.span, "offer is missing its children"));
            }
        }
        children = vec![WitnessStrategy::Leaf; k];
    } else if children.len() != k {
        return Err(ParseError::syntax(
            line.span,
            format!("offer of {k} elements has {} child blocks", children.len()),
        ));
    }
    Ok(WitnessStrategy::Offer {
        elements: line.elements.clone(),
        children,
    })
}
