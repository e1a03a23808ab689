use std::collections::HashMap;

use super::{check_format_line, is_identifier, ParseError, SourceSpan, Word};
use crate::model::{Atom, ModelError, Quantifier, Sentence, Threshold};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Word(&'a str),
    Bar,
    Amp,
    Open,
    Close,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(Tok<'_>, SourceSpan)>, ParseError> {
    let mut toks = Vec::new();
    let mut first_line_words: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let line_start = toks.len();
        let mut chars = line.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            let col = line[..i].chars().count() + 1;
            let single = |t| (t, SourceSpan::new(line_no, col, 1));
            match c {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '|' => {
                    toks.push(single(Tok::Bar));
                    chars.next();
                }
                '&' => {
                    toks.push(single(Tok::Amp));
                    chars.next();
                }
                '(' => {
                    toks.push(single(Tok::Open));
                    chars.next();
                }
                ')' => {
                    toks.push(single(Tok::Close));
                    chars.next();
                }
                ',' => {
                    toks.push(single(Tok::Comma));
                    chars.next();
                }
                c if c.is_ascii_alphanumeric() || matches!(c, '_' | '~' | '\'') => {
                    let mut end = i;
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_ascii_alphanumeric() || matches!(d, '_' | '~' | '\'') {
                            end = j + d.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    let w = &line[i..end];
                    toks.push((Tok::Word(w), SourceSpan::new(line_no, col, w.chars().count())));
                }
                other => {
                    return Err(ParseError::syntax(
                        SourceSpan::new(line_no, col, 1),
                        format!("unexpected character `{other}`"),
                    ))
                }
            }
        }
        if toks.len() > line_start && first_line_words.is_none() {
            first_line_words = Some(line_start);
            if toks[line_start].0 == Tok::Word("format") {
                let words: Vec<Word<'_>> = toks[line_start..]
                    .iter()
                    .map(|(t, span)| match t {
                        Tok::Word(w) => Ok(Word { text: w, span: *span }),
                        _ => Err(ParseError::syntax(*span, "malformed format line")),
                    })
                    .collect::<Result<_, _>>()?;
                check_format_line(&words)?;
                toks.truncate(line_start);
            }
        }
    }
    Ok(toks)
}

fn parse_threshold(w: &str, span: SourceSpan) -> Result<Threshold, ParseError> {
    if w == "A" {
        return Ok(Threshold::All);
    }
    if w == "E" {
        return Ok(Threshold::AtLeast(1));
    }
    let digits = w
        .strip_prefix('E')
        .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
        .ok_or_else(|| ParseError::syntax(span, format!("expected a quantifier `E<j>` or `A`, found `{w}`")))?;
    let j: usize = digits
        .parse()
        .map_err(|_| ParseError::syntax(span, format!("threshold `{digits}` too large")))?;
    Ok(Threshold::AtLeast(j))
}

/// Parses `E2 x E1 y A z | E(x,y) & R(y,z,z)`. `E` abbreviates `E1`;
/// `A` is the universal quantifier. The matrix after `|` may be empty, and
/// the `|` may be omitted when it is.
pub fn parse_sentence(text: &str) -> Result<Sentence, ParseError> {
    let toks = tokenize(text)?;
    let eof_span = toks
        .last()
        .map_or(SourceSpan::new(1, 1, 0), |(_, s)| SourceSpan::new(s.line, s.column + s.length, 0));
    let mut pos = 0;
    let mut prefix = Vec::new();
    let mut var_spans: HashMap<&str, SourceSpan> = HashMap::new();
    while pos < toks.len() && toks[pos].0 != Tok::Bar {
        let (tok, span) = &toks[pos];
        let Tok::Word(q) = tok else {
            return Err(ParseError::syntax(*span, "expected a quantifier"));
        };
        let threshold = parse_threshold(q, *span)?;
        let (vtok, vspan) = toks
            .get(pos + 1)
            .ok_or_else(|| ParseError::syntax(eof_span, format!("quantifier `{q}` needs a variable")))?;
        let Tok::Word(var) = vtok else {
            return Err(ParseError::syntax(*vspan, "expected a variable name"));
        };
        if !is_identifier(var) {
            return Err(ParseError::syntax(*vspan, format!("invalid variable name `{var}`")));
        }
        if threshold == Threshold::AtLeast(0) {
            return Err(ParseError::invalid(*span, ModelError::ZeroThreshold(var.to_string())));
        }
        if var_spans.insert(var, *vspan).is_some() {
            return Err(ParseError::invalid(*vspan, ModelError::DuplicateVariable(var.to_string())));
        }
        prefix.push(Quantifier::new(threshold, *var));
        pos += 2;
    }
    let mut atoms = Vec::new();
    let mut arities: HashMap<&str, usize> = HashMap::new();
    if pos < toks.len() {
        pos += 1;
        while pos < toks.len() {
            if !atoms.is_empty() {
                match &toks[pos] {
                    (Tok::Amp, _) => pos += 1,
                    (_, span) => return Err(ParseError::syntax(*span, "expected `&` between atoms")),
                }
            }
            let (tok, rspan) = toks
                .get(pos)
                .ok_or_else(|| ParseError::syntax(eof_span, "expected an atom after `&`"))?;
            let Tok::Word(rel) = tok else {
                return Err(ParseError::syntax(*rspan, "expected a relation name"));
            };
            if !is_identifier(rel) {
                return Err(ParseError::syntax(*rspan, format!("invalid relation name `{rel}`")));
            }
            pos += 1;
            match toks.get(pos) {
                Some((Tok::Open, _)) => pos += 1,
                Some((_, span)) => return Err(ParseError::syntax(*span, "expected `(`")),
                None => return Err(ParseError::syntax(eof_span, "expected `(`")),
            }
            let mut args = Vec::new();
            loop {
                let (tok, span) = toks
                    .get(pos)
                    .ok_or_else(|| ParseError::syntax(eof_span, "unterminated atom"))?;
                let Tok::Word(v) = tok else {
                    return Err(ParseError::syntax(*span, "expected a variable"));
                };
                if !var_spans.contains_key(v) {
                    return Err(ParseError::invalid(*span, ModelError::UnboundVariable(v.to_string())));
                }
                args.push(v.to_string());
                pos += 1;
                match toks.get(pos) {
                    Some((Tok::Comma, _)) => pos += 1,
                    Some((Tok::Close, _)) => {
                        pos += 1;
                        break;
                    }
                    Some((_, span)) => return Err(ParseError::syntax(*span, "expected `,` or `)`")),
                    None => return Err(ParseError::syntax(eof_span, "unterminated atom")),
                }
            }
            if *arities.entry(rel).or_insert(args.len()) != args.len() {
                return Err(ParseError::invalid(*rspan, ModelError::InconsistentArity(rel.to_string())));
            }
            atoms.push(Atom::new(rel, args));
        }
    }
    Sentence::new(prefix, atoms).map_err(|e| ParseError::invalid(eof_span, e))
}

/// Prefix and matrix lines longer than this are split one item per line.
const SINGLE_LINE_LIMIT: usize = 100;

/// Renders a sentence in the form accepted by [`parse_sentence`]; long
/// sentences get one quantifier and one atom per line.
pub fn render_sentence(s: &Sentence) -> String {
    let quants: Vec<String> = s
        .prefix()
        .iter()
        .map(|q| format!("{} {}", q.threshold, q.variable))
        .collect();
    let atoms: Vec<String> = s
        .atoms()
        .iter()
        .map(|a| format!("{}({})", a.relation, a.args.join(",")))
        .collect();
    let single = match (quants.is_empty(), atoms.is_empty()) {
        (true, true) => "|".to_string(),
        (false, true) => format!("{} |", quants.join(" ")),
        (true, false) => format!("| {}", atoms.join(" & ")),
        (false, false) => format!("{} | {}", quants.join(" "), atoms.join(" & ")),
    };
    if single.len() <= SINGLE_LINE_LIMIT {
        return single + "\n";
    }
    let mut out = String::new();
    for q in &quants {
        out.push_str(q);
        out.push('\n');
    }
    out.push_str("|\n");
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            out.push_str("& ");
        }
        out.push_str(a);
        out.push('\n');
    }
    out
}
