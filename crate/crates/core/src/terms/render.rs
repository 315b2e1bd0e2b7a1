//! Text renderings of terms and the parser for the operator-text form.
//!
//! Operator-text grammar (one term per line):
//!
//! ```text
//! term   := coeff " * " slots " " corrs | coeff " * 1"
//! coeff  := ("+" | "-") digits
//! slots  := A (" " A)*            A    := "A" sign "_" time
//! corrs  := D (" " D)*            D    := ("D" | "D~") sign+ "_" times
//! times  := time | "{" time ("," time)* "}"
//! time   := "t" | "tau" digits
//! sign   := "+" | "-"
//! ```
//!
//! `A` tokens list the system superoperators left to right; each `D` token
//! is one cluster, carrying the bath signs and the times of consecutive
//! slots. `D~` marks the adjoint correlator. The fixed time is `t`; the
//! remaining slots are labelled `tau1, tau2, ...` left to right.

use super::term::{ClusteredTerm, Clustering, Kind, Sign, SignPattern, TermPolynomial};
use crate::error::{Result, TclError};

/// Output formats of [`render_term`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    /// `*` black circle (`A^-`), `o` white circle (`A^+`), `-` link inside a
    /// cluster, space between clusters, `.` before the circle at time `t`.
    DiagramAscii,
    OperatorText,
    Latex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TimeLabel {
    Fixed,
    Var(usize),
}

impl TimeLabel {
    fn text(&self) -> String {
        match self {
            TimeLabel::Fixed => "t".into(),
            TimeLabel::Var(k) => format!("tau{k}"),
        }
    }

    fn latex(&self) -> String {
        match self {
            TimeLabel::Fixed => "t".into(),
            TimeLabel::Var(k) => format!("\\tau_{{{k}}}"),
        }
    }

    fn parse(s: &str) -> Result<TimeLabel> {
        if s == "t" {
            return Ok(TimeLabel::Fixed);
        }
        s.strip_prefix("tau")
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .map(TimeLabel::Var)
            .ok_or_else(|| TclError::Parse(format!("bad time label '{s}'")))
    }
}

fn slot_labels(term: &ClusteredTerm) -> Vec<TimeLabel> {
    let pinned = term.pinned_slot();
    let mut next = 1;
    (0..term.order())
        .map(|slot| {
            if Some(slot) == pinned {
                TimeLabel::Fixed
            } else {
                next += 1;
                TimeLabel::Var(next - 1)
            }
        })
        .collect()
}

fn coefficient_prefix(c: i64) -> String {
    match c {
        1 => "+".into(),
        -1 => "-".into(),
        c => format!("{c:+}"),
    }
}

fn signs_text(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.symbol()).collect()
}

/// Renders one term. Terms that vanish by the null rule are rejected.
pub fn render_term(term: &ClusteredTerm, format: RenderFormat) -> Result<String> {
    if term.order() == 0 {
        return Ok(match format {
            RenderFormat::DiagramAscii => "1".into(),
            RenderFormat::OperatorText => format!("{:+} * 1", term.coefficient()),
            RenderFormat::Latex => format!("{:+}", term.coefficient()),
        });
    }
    if term.is_null() {
        return Err(TclError::InvalidTerm(format!(
            "{} {} vanishes by the null rule",
            term.pattern(),
            term.clustering()
        )));
    }
    let signs = term.pattern().signs();
    let labels = slot_labels(term);
    let bath = term.pattern().bath_signs();
    let ranges = term.clustering().ranges();
    let pinned = term.pinned_slot();
    let out = match format {
        RenderFormat::DiagramAscii => ranges
            .iter()
            .map(|r| {
                r.clone()
                    .map(|slot| {
                        let circle = if signs[slot] == Sign::Minus { '*' } else { 'o' };
                        if Some(slot) == pinned {
                            format!(".{circle}")
                        } else {
                            circle.to_string()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("-")
            })
            .collect::<Vec<_>>()
            .join(" "),
        RenderFormat::OperatorText => {
            let mut parts = vec![format!("{:+}", term.coefficient()), "*".into()];
            for (s, l) in signs.iter().zip(&labels) {
                parts.push(format!("A{}_{}", s.symbol(), l.text()));
            }
            let d = if term.kind() == Kind::Adjoint {
                "D~"
            } else {
                "D"
            };
            for r in &ranges {
                let times: Vec<String> = labels[r.clone()].iter().map(TimeLabel::text).collect();
                let times = if times.len() == 1 {
                    times[0].clone()
                } else {
                    format!("{{{}}}", times.join(","))
                };
                parts.push(format!("{d}{}_{times}", signs_text(&bath[r.clone()])));
            }
            parts.join(" ")
        }
        RenderFormat::Latex => {
            let mut s = coefficient_prefix(term.coefficient());
            for (sign, l) in signs.iter().zip(&labels) {
                s.push_str(&format!("A^{{{}}}_{{{}}}", sign.symbol(), l.latex()));
            }
            let d = if term.kind() == Kind::Adjoint {
                "\\tilde{D}"
            } else {
                "D"
            };
            for r in &ranges {
                let times: Vec<String> = labels[r.clone()].iter().map(TimeLabel::latex).collect();
                s.push_str(&format!(
                    "{d}^{{{}}}_{{{}}}",
                    signs_text(&bath[r.clone()]),
                    times.join("\\,")
                ));
            }
            s
        }
    };
    Ok(out)
}

/// Renders every term of a polynomial, one per line, in canonical order.
/// Diagram lines are prefixed with the coefficient sign.
pub fn render_polynomial(poly: &TermPolynomial, format: RenderFormat) -> Result<String> {
    let mut lines = Vec::with_capacity(poly.len());
    for t in poly.iter() {
        let body = render_term(&t, format)?;
        lines.push(match format {
            RenderFormat::DiagramAscii => format!("{} {body}", coefficient_prefix(t.coefficient())),
            _ => body,
        });
    }
    Ok(lines.join("\n"))
}

fn parse_sign_run(s: &str) -> Result<Vec<Sign>> {
    s.chars()
        .map(|c| {
            Sign::from_symbol(c).ok_or_else(|| TclError::Parse(format!("bad sign '{c}' in '{s}'")))
        })
        .collect()
}

/// Parses one line of operator text back into a term.
pub fn parse_term(line: &str) -> Result<ClusteredTerm> {
    let mut tokens = line.split_whitespace();
    let coefficient: i64 = tokens
        .next()
        .ok_or_else(|| TclError::Parse("empty term".into()))?
        .parse()
        .map_err(|_| TclError::Parse(format!("bad coefficient in '{line}'")))?;
    if tokens.next() != Some("*") {
        return Err(TclError::Parse(format!(
            "expected '*' after coefficient in '{line}'"
        )));
    }
    let rest: Vec<&str> = tokens.collect();
    if rest == ["1"] {
        return Ok(ClusteredTerm::identity(Kind::Schrodinger).with_coefficient(coefficient));
    }

    let mut signs = Vec::new();
    let mut labels = Vec::new();
    let mut idx = 0;
    while idx < rest.len() && rest[idx].starts_with('A') {
        let tok = rest[idx];
        let (sign, label) = tok[1..]
            .split_once('_')
            .ok_or_else(|| TclError::Parse(format!("bad slot token '{tok}'")))?;
        let sign = parse_sign_run(sign)?;
        if sign.len() != 1 {
            return Err(TclError::Parse(format!(
                "slot token '{tok}' needs exactly one sign"
            )));
        }
        signs.push(sign[0]);
        labels.push(TimeLabel::parse(label)?);
        idx += 1;
    }
    if signs.is_empty() {
        return Err(TclError::Parse(format!("no slot tokens in '{line}'")));
    }

    let mut kind = None;
    let mut parts = Vec::new();
    let mut slot = 0;
    for tok in &rest[idx..] {
        let (this_kind, body) = if let Some(b) = tok.strip_prefix("D~") {
            (Kind::Adjoint, b)
        } else if let Some(b) = tok.strip_prefix('D') {
            (Kind::Schrodinger, b)
        } else {
            return Err(TclError::Parse(format!("unexpected token '{tok}'")));
        };
        if kind.is_some_and(|k| k != this_kind) {
            return Err(TclError::Parse("mixed correlator kinds".into()));
        }
        kind = Some(this_kind);
        let (bath, times) = body
            .split_once('_')
            .ok_or_else(|| TclError::Parse(format!("bad correlator token '{tok}'")))?;
        let bath = parse_sign_run(bath)?;
        let times: Vec<TimeLabel> = match times.strip_prefix('{') {
            Some(inner) => inner
                .strip_suffix('}')
                .ok_or_else(|| TclError::Parse(format!("unclosed brace in '{tok}'")))?
                .split(',')
                .map(TimeLabel::parse)
                .collect::<Result<_>>()?,
            None => vec![TimeLabel::parse(times)?],
        };
        if bath.len() != times.len() || bath.is_empty() {
            return Err(TclError::Parse(format!(
                "sign/time count mismatch in '{tok}'"
            )));
        }
        let end = slot + times.len();
        if end > signs.len() || labels[slot..end] != times[..] {
            return Err(TclError::Parse(format!(
                "correlator '{tok}' does not follow the slot order"
            )));
        }
        if bath
            .iter()
            .zip(&signs[slot..end])
            .any(|(b, s)| *b != s.flip())
        {
            return Err(TclError::Parse(format!(
                "correlator '{tok}' breaks the sign conservation rule"
            )));
        }
        parts.push(times.len());
        slot = end;
    }
    if slot != signs.len() {
        return Err(TclError::Parse(format!(
            "slots without a correlator in '{line}'"
        )));
    }

    let pinned = labels.contains(&TimeLabel::Fixed);
    let term = ClusteredTerm::new(
        SignPattern::new(signs)?,
        Clustering::new(parts)?,
        coefficient,
        pinned,
        kind.expect("at least one correlator"),
    )?;
    if slot_labels(&term) != labels {
        return Err(TclError::Parse(format!(
            "non-canonical time labels in '{line}'"
        )));
    }
    if term.is_null() {
        return Err(TclError::Parse(format!(
            "'{line}' vanishes by the null rule"
        )));
    }
    Ok(term)
}

/// Parses a listing produced by [`render_polynomial`] in operator-text form.
pub fn parse_polynomial(text: &str) -> Result<TermPolynomial> {
    let terms: Vec<ClusteredTerm> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(parse_term)
        .collect::<Result<_>>()?;
    let first = terms
        .first()
        .ok_or_else(|| TclError::Parse("empty listing".into()))?;
    let mut poly = TermPolynomial::new(first.order(), first.kind());
    for t in terms {
        poly.insert(t)?;
    }
    Ok(poly)
}
