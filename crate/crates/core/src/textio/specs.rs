use super::{ParseError, SourceSpan};
use crate::model::{Element, FragmentSpec, TemplateFamily};

fn span_of(whole: &str, part: &str) -> SourceSpan {
    let offset = part.as_ptr() as usize - whole.as_ptr() as usize;
    SourceSpan::new(1, whole[..offset].chars().count() + 1, part.chars().count().max(1))
}

fn number(whole: &str, part: &str) -> Result<usize, ParseError> {
    part.trim()
        .parse()
        .map_err(|_| ParseError::syntax(span_of(whole, part), format!("expected a number, found `{part}`")))
}

fn numbers(whole: &str, part: &str, count: usize) -> Result<Vec<usize>, ParseError> {
    let parts: Vec<&str> = part.split(',').collect();
    if parts.len() != count {
        return Err(ParseError::syntax(
            span_of(whole, part),
            format!("expected {count} comma-separated numbers"),
        ));
    }
    parts.into_iter().map(|p| number(whole, p)).collect()
}

fn edge_list(whole: &str, part: &str) -> Result<Vec<(Element, Element)>, ParseError> {
    if part.trim().is_empty() {
        return Ok(Vec::new());
    }
    part.split(',')
        .map(|e| {
            let (u, v) = e.split_once('-').ok_or_else(|| {
                ParseError::syntax(span_of(whole, e), format!("expected an edge `u-v`, found `{e}`"))
            })?;
            Ok((number(whole, u)?, number(whole, v)?))
        })
        .collect()
}

/// Parses a template family such as `clique:5`, `cycle:6`,
/// `reflexive-cycle:4`, `path:5`, `star:3`, `kbip:2,3`, `nae`, `bn:4,2`
/// (`n,j`), `hairy:6`, `hj:4`, `forest:4:0-1,1-2` or `graph:3:0-1,1-2,2-0`.
pub fn parse_family_spec(text: &str) -> Result<TemplateFamily, ParseError> {
    let text = text.trim();
    let (name, rest) = text.split_once(':').unwrap_or((text, ""));
    let one = || number(text, rest);
    let family = match name {
        "clique" => TemplateFamily::Clique(one()?),
        "cycle" => TemplateFamily::Cycle(one()?),
        "reflexive-cycle" => TemplateFamily::ReflexiveCycle(one()?),
        "path" => TemplateFamily::Path(one()?),
        "star" => TemplateFamily::Star(one()?),
        "hairy" => TemplateFamily::HairyCycle(one()?),
        "hj" => TemplateFamily::HjTemplate(one()?),
        "kbip" => {
            let v = numbers(text, rest, 2)?;
            TemplateFamily::CompleteBipartite(v[0], v[1])
        }
        "bn" => {
            let v = numbers(text, rest, 2)?;
            TemplateFamily::SingleQuantifierTemplate(v[0], v[1])
        }
        "nae" if rest.is_empty() => TemplateFamily::NAEBoolean,
        "forest" | "graph" => {
            let (n, edges) = rest.split_once(':').unwrap_or((rest, ""));
            let n = number(text, n)?;
            let edges = edge_list(text, edges)?;
            if name == "forest" {
                TemplateFamily::ForestFromEdges(n, edges)
            } else {
                TemplateFamily::GeneralGraph(n, edges)
            }
        }
        _ => {
            return Err(ParseError::syntax(
                span_of(text, if name.is_empty() { text } else { name }),
                format!("unknown template family `{text}`"),
            ))
        }
    };
    Ok(family)
}

/// The inverse of [`parse_family_spec`].
pub fn render_family_spec(f: &TemplateFamily) -> String {
    let edges = |es: &[(Element, Element)]| {
        es.iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(",")
    };
    match f {
        TemplateFamily::Clique(n) => format!("clique:{n}"),
        TemplateFamily::Cycle(n) => format!("cycle:{n}"),
        TemplateFamily::ReflexiveCycle(n) => format!("reflexive-cycle:{n}"),
        TemplateFamily::Path(n) => format!("path:{n}"),
        TemplateFamily::Star(n) => format!("star:{n}"),
        TemplateFamily::CompleteBipartite(k, l) => format!("kbip:{k},{l}"),
        TemplateFamily::ForestFromEdges(n, es) => format!("forest:{n}:{}", edges(es)),
        TemplateFamily::GeneralGraph(n, es) => format!("graph:{n}:{}", edges(es)),
        TemplateFamily::NAEBoolean => "nae".to_string(),
        TemplateFamily::SingleQuantifierTemplate(n, j) => format!("bn:{n},{j}"),
        TemplateFamily::HairyCycle(n) => format!("hairy:{n}"),
        TemplateFamily::HjTemplate(j) => format!("hj:{j}"),
    }
}

/// Parses `X=1,2` (a threshold set) or `prefix=2^3 1*` (the bounded-prefix
/// fragment with at most three leading `E2`).
pub fn parse_fragment_spec(text: &str) -> Result<FragmentSpec, ParseError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("X=") {
        let inner = rest.trim();
        let inner = inner
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .unwrap_or(inner);
        let xs = inner
            .split(',')
            .map(|p| number(text, p))
            .collect::<Result<Vec<_>, _>>()?;
        return FragmentSpec::threshold_set(xs).map_err(|e| ParseError::invalid(span_of(text, rest), e));
    }
    if let Some(rest) = text.strip_prefix("prefix=") {
        let body = rest.trim();
        let mut m = 0;
        let mut tail = body;
        if let Some(r) = body.strip_prefix("2^") {
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            m = number(text, &r[..end])?;
            tail = r[end..].trim();
        }
        if !(tail.is_empty() || tail == "1*") {
            return Err(ParseError::syntax(
                span_of(text, tail),
                "expected a prefix shape `2^m 1*`",
            ));
        }
        return Ok(FragmentSpec::BoundedPrefix(m));
    }
    Err(ParseError::syntax(
        span_of(text, text),
        format!("expected `X=...` or `prefix=2^m 1*`, found `{text}`"),
    ))
}

pub fn render_fragment_spec(f: &FragmentSpec) -> String {
    match f {
        FragmentSpec::ThresholdSet(xs) => format!(
            "X={}",
            xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        ),
        FragmentSpec::BoundedPrefix(m) => format!("prefix=2^{m} 1*"),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    #[test]
    fn family_round_trip() {
        for text in [
            "clique:5",
            "cycle:6",
            "reflexive-cycle:4",
            "path:5",
            "star:3",
            "kbip:2,3",
            "nae",
            "bn:4,2",
            "hairy:6",
            "hj:4",
            "forest:4:0-1,1-2",
            "graph:3:0-1,1-2,2-0",
            "graph:2:",
        ] {
            let f = parse_family_spec(text).unwrap();
            assert_eq!(parse_family_spec(&render_family_spec(&f)).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn fragment_specs() {
        assert_eq!(
            parse_fragment_spec("X=1,2").unwrap(),
            FragmentSpec::ThresholdSet(BTreeSet::from([1, 2]))
        );
        assert_eq!(parse_fragment_spec("prefix=2^3 1*").unwrap(), FragmentSpec::BoundedPrefix(3));
        assert_eq!(parse_fragment_spec("prefix=1*").unwrap(), FragmentSpec::BoundedPrefix(0));
        let f = parse_fragment_spec("X={4,1}").unwrap();
        assert_eq!(parse_fragment_spec(&render_fragment_spec(&f)).unwrap(), f);
    }

    #[test]
    fn bad_specs_point_at_problem() {
        let err = parse_family_spec("clique:x").unwrap_err();
        assert_eq!(err.span.column, 8);
        assert!(parse_family_spec("dodecahedron").is_err());
        assert!(parse_family_spec("kbip:2").is_err());
        assert!(parse_fragment_spec("X=").is_err());
        assert!(parse_fragment_spec("X=0").is_err());
        assert!(parse_fragment_spec("prefix=3^2").is_err());
        assert!(parse_fragment_spec("Y=1").is_err());
    }
}
