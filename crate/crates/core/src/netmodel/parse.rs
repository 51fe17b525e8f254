//! Line-oriented `.crn` reader.
//!
//! ```text
//! # comment
//! species: A1, A2, A3
//! A1 -> 2 A1 + A2 ; k = 1
//! A <-> B ; k = 1, 1/2
//! 0 -> A ; k = 0.25
//! ```

use std::collections::HashMap;
use std::fmt;

use num_traits::Signed;

use super::{Complex, Network, NetworkError, RateConstant, Reaction};
use crate::exactla::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    NegativeCoefficient,
    NonIntegerCoefficient,
    ZeroCoefficient,
    MissingRate,
    NonPositiveRate(String),
    RateCount { expected: usize, got: usize },
    DuplicateSpecies(String),
    UndeclaredSpecies(String),
    NoOpReaction,
    Network(NetworkError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax(msg) => write!(f, "syntax error: {msg}"),
            Self::NegativeCoefficient => write!(f, "negative stoichiometric coefficient"),
            Self::NonIntegerCoefficient => write!(f, "non-integer stoichiometric coefficient"),
            Self::ZeroCoefficient => write!(f, "zero stoichiometric coefficient"),
            Self::MissingRate => write!(f, "missing rate constant (expected `; k = <q>`)"),
            Self::NonPositiveRate(q) => write!(f, "rate constant must be positive, got {q}"),
            Self::RateCount { expected, got } => {
                write!(f, "expected {expected} rate constant(s), got {got}")
            }
            Self::DuplicateSpecies(s) => write!(f, "duplicate species `{s}` in header"),
            Self::UndeclaredSpecies(s) => write!(f, "species `{s}` not declared in header"),
            Self::NoOpReaction => write!(f, "reactant equals product"),
            Self::Network(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Species {
    names: Vec<String>,
    index: HashMap<String, usize>,
    fixed: bool,
}

impl Species {
    fn lookup(&mut self, name: &str) -> Option<usize> {
        if let Some(&i) = self.index.get(name) {
            return Some(i);
        }
        if self.fixed {
            return None;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        Some(i)
    }
}

pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut species = Species {
        names: Vec::new(),
        index: HashMap::new(),
        fixed: false,
    };
    let mut reactions = Vec::new();
    let mut last_line = 1;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let err = |col: usize, kind| ParseError {
            line: line_no,
            column: col + 1,
            kind,
        };

        let lead = content.len() - content.trim_start().len();
        if let Some(rest) = header_body(content.trim_start()) {
            if species.fixed || !reactions.is_empty() {
                return Err(err(
                    lead,
                    ParseErrorKind::Syntax("species header must come first and only once".into()),
                ));
            }
            let body_start = content.len() - rest.len();
            let mut offset = body_start;
            for part in rest.split(',') {
                let name = part.trim();
                let col = offset + (part.len() - part.trim_start().len());
                offset += part.len() + 1;
                if !is_identifier(name) {
                    return Err(err(
                        col,
                        ParseErrorKind::Syntax(format!("invalid species name `{name}`")),
                    ));
                }
                if species.index.contains_key(name) {
                    return Err(err(col, ParseErrorKind::DuplicateSpecies(name.to_string())));
                }
                species.lookup(name);
            }
            species.fixed = true;
            continue;
        }

        let Some(semi) = content.find(';') else {
            return Err(err(content.trim_end().len(), ParseErrorKind::MissingRate));
        };
        let equation = &content[..semi];
        let (arrow_at, arrow_len, reversible) = match equation.find("<->") {
            Some(p) => (p, 3, true),
            None => match equation.find("->") {
                Some(p) => (p, 2, false),
                None => {
                    return Err(err(
                        lead,
                        ParseErrorKind::Syntax("expected `->` or `<->`".into()),
                    ))
                }
            },
        };
        let rhs_start = arrow_at + arrow_len;
        if equation[rhs_start..].contains("->") || equation[rhs_start..].contains("<-") {
            return Err(err(rhs_start, ParseErrorKind::Syntax("more than one arrow".into())));
        }
        let lhs = parse_complex(&equation[..arrow_at], 0, &mut species).map_err(|(c, k)| err(c, k))?;
        let rhs = parse_complex(&equation[rhs_start..], rhs_start, &mut species)
            .map_err(|(c, k)| err(c, k))?;
        if lhs == rhs {
            return Err(err(lead, ParseErrorKind::NoOpReaction));
        }
        let rates = parse_rates(&content[semi + 1..], semi + 1).map_err(|(c, k)| err(c, k))?;
        let expected = if reversible { 2 } else { 1 };
        if rates.len() != expected {
            return Err(err(
                semi + 1,
                ParseErrorKind::RateCount {
                    expected,
                    got: rates.len(),
                },
            ));
        }
        let mut rates = rates.into_iter();
        reactions.push(Reaction {
            reactant: lhs.clone(),
            product: rhs.clone(),
            rate: rates.next().unwrap(),
        });
        if reversible {
            reactions.push(Reaction {
                reactant: rhs,
                product: lhs,
                rate: rates.next().unwrap(),
            });
        }
    }

    Network::new(species.names, reactions).map_err(|e| ParseError {
        line: last_line,
        column: 1,
        kind: ParseErrorKind::Network(e),
    })
}

fn header_body(line: &str) -> Option<&str> {
    let rest = line.strip_prefix("species")?;
    rest.trim_start().strip_prefix(':')
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

type Located<T> = Result<T, (usize, ParseErrorKind)>;

/// Parses `c1 S1 + c2 S2 + ...` or `0`. `base` is the byte offset of `text`
/// within the line, for error columns.
fn parse_complex(text: &str, base: usize, species: &mut Species) -> Located<Complex> {
    let lead = text.len() - text.trim_start().len();
    if text.trim().is_empty() {
        return Err((base + lead, ParseErrorKind::Syntax("empty complex".into())));
    }
    if text.trim() == "0" {
        return Ok(Complex::zero());
    }
    let mut terms = Vec::new();
    let mut offset = base;
    for part in text.split('+') {
        let col = offset + (part.len() - part.trim_start().len());
        offset += part.len() + 1;
        let term = part.trim();
        if term.is_empty() {
            return Err((col, ParseErrorKind::Syntax("empty term".into())));
        }
        if term.starts_with('-') {
            return Err((col, ParseErrorKind::NegativeCoefficient));
        }
        let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
        let after = &term[digits..];
        if after.starts_with('.') || after.starts_with('/') {
            return Err((col, ParseErrorKind::NonIntegerCoefficient));
        }
        let coeff: u32 = if digits == 0 {
            1
        } else {
            term[..digits]
                .parse()
                .map_err(|_| (col, ParseErrorKind::Syntax("coefficient too large".into())))?
        };
        if coeff == 0 {
            return Err((col, ParseErrorKind::ZeroCoefficient));
        }
        let name = after.trim_start();
        if !is_identifier(name) {
            return Err((
                col + (term.len() - name.len()),
                ParseErrorKind::Syntax(format!("invalid species name `{name}`")),
            ));
        }
        let id = species
            .lookup(name)
            .ok_or_else(|| (col, ParseErrorKind::UndeclaredSpecies(name.to_string())))?;
        terms.push((id, coeff));
    }
    Ok(Complex::from_terms(terms))
}

/// Parses ` k = q1[, q2]`.
fn parse_rates(text: &str, base: usize) -> Located<Vec<RateConstant>> {
    let trimmed = text.trim_start();
    let col = base + (text.len() - trimmed.len());
    let Some(rest) = trimmed.strip_prefix('k') else {
        return Err((col, ParseErrorKind::MissingRate));
    };
    let Some(values) = rest.trim_start().strip_prefix('=') else {
        return Err((col, ParseErrorKind::MissingRate));
    };
    let mut offset = base + text.len() - values.len();
    let mut out = Vec::new();
    for part in values.split(',') {
        let col = offset + (part.len() - part.trim_start().len());
        offset += part.len() + 1;
        let literal = part.trim();
        if literal.is_empty() {
            return Err((col, ParseErrorKind::MissingRate));
        }
        let q: Rational = parse_rational(literal)
            .map_err(|_| (col, ParseErrorKind::Syntax(format!("invalid rate constant `{literal}`"))))?;
        if !q.is_positive() {
            return Err((col, ParseErrorKind::NonPositiveRate(literal.to_string())));
        }
        out.push(RateConstant::new(q).expect("positive"));
    }
    Ok(out)
}
