//! Line-oriented text formats for structures, sentences, strategies and the
//! template/fragment specifications used on the command line.
//!
//! Every format may start with an optional `format 1` line; `#` starts a
//! comment that runs to the end of the line.

mod sentence;
mod specs;
mod strategy;
mod structure;

pub use sentence::{parse_sentence, render_sentence};
pub use specs::{parse_family_spec, parse_fragment_spec, render_family_spec, render_fragment_spec};
pub use strategy::{parse_strategy, parse_strategy_for, render_strategy};
pub use structure::{parse_structure, render_structure};

use std::fmt;

use thiserror::Error;

use crate::model::ModelError;

/// Current version of the text formats.
pub const FORMAT_VERSION: u32 = 1;

/// A region of the input: 1-based line and column, length in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        SourceSpan {
            line,
            column,
            length,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn syntax(span: SourceSpan, msg: impl Into<String>) -> Self {
        ParseError {
            span,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    pub(crate) fn invalid(span: SourceSpan, err: ModelError) -> Self {
        ParseError {
            span,
            kind: ParseErrorKind::Invalid(err),
        }
    }
}

/// A whitespace-separated word with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Word<'a> {
    pub(crate) text: &'a str,
    pub(crate) span: SourceSpan,
}

/// Splits the input into lines of words, dropping comments, blank lines
/// and a leading `format 1` line.
pub(crate) fn words_by_line(text: &str) -> Result<Vec<Vec<Word<'_>>>, ParseError> {
    let mut out = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let words = split_words(line, idx + 1);
        if words.is_empty() {
            continue;
        }
        if !seen_content && words[0].text == "format" {
            check_format_line(&words)?;
            seen_content = true;
            continue;
        }
        seen_content = true;
        out.push(words);
    }
    Ok(out)
}

fn split_words(line: &str, line_no: usize) -> Vec<Word<'_>> {
    let mut words = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                words.push(Word {
                    text: &line[s..i],
                    span: SourceSpan::new(line_no, line[..s].chars().count() + 1, line[s..i].chars().count()),
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    words
}

pub(crate) fn check_format_line(words: &[Word<'_>]) -> Result<(), ParseError> {
    let version = FORMAT_VERSION.to_string();
    match words {
        [kw] => Err(ParseError::syntax(kw.span, "`format` needs a version number")),
        [_, v, rest @ ..] => {
            if v.text != version {
                Err(ParseError::syntax(
                    v.span,
                    format!("unsupported format version `{}`", v.text),
                ))
            } else if let Some(extra) = rest.first() {
                Err(ParseError::syntax(extra.span, "unexpected text after format version"))
            } else {
                Ok(())
            }
        }
        [] => unreachable!("format line has at least one word"),
    }
}

pub(crate) fn parse_number(w: &Word<'_>, what: &str) -> Result<usize, ParseError> {
    w.text
        .parse()
        .map_err(|_| ParseError::syntax(w.span, format!("expected {what}, found `{}`", w.text)))
}

/// Whether `s` is a valid variable or relation name.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '~' | '\''))
}
