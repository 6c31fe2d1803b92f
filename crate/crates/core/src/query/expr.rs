use chrono::{DateTime, Datelike, Utc};
use thiserror::Error;

use crate::rdf::vocab::xsd;
use crate::rdf::{Literal, Term};

/// A per-row expression failure. Rows whose filter errors are dropped.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("unbound variable")]
    Unbound,
    #[error("{0} is not an xsd:dateTime")]
    NotDateTime(Term),
    #[error("cannot compare {0} and {1}")]
    Incomparable(Term, Term),
    #[error("{0} has no effective boolean value")]
    NoBooleanValue(Term),
}

/// How a term takes part in `=`.
enum Value<'a> {
    Numeric(f64),
    DateTime(DateTime<Utc>),
    Boolean(bool),
    Other(&'a Term),
}

fn value_of(t: &Term) -> Value<'_> {
    if let Term::Literal(l) = t {
        if l.is_numeric() {
            if let Some(v) = l.as_f64() {
                return Value::Numeric(v);
            }
        }
        if let Some(dt) = l.as_date_time() {
            return Value::DateTime(dt);
        }
        if let Some(b) = boolean_value(l) {
            return Value::Boolean(b);
        }
    }
    Value::Other(t)
}

fn boolean_value(l: &Literal) -> Option<bool> {
    if l.datatype().as_str() != xsd::BOOLEAN {
        return None;
    }
    match l.lexical() {
        "true" | "1" => Some(true),
        "false" | "0" => Some(false),
        _ => None,
    }
}

/// `a = b`: numbers by value across numeric datatypes, dateTimes by instant,
/// booleans by value, anything else by term identity. Two distinct literals
/// that are not both plain strings cannot be compared.
pub fn eval_equals(a: &Term, b: &Term) -> Result<bool, ExprError> {
    match (value_of(a), value_of(b)) {
        (Value::Numeric(x), Value::Numeric(y)) => Ok(x == y),
        (Value::DateTime(x), Value::DateTime(y)) => Ok(x == y),
        (Value::Boolean(x), Value::Boolean(y)) => Ok(x == y),
        _ if a == b => Ok(true),
        _ => match (a, b) {
            (Term::Literal(x), Term::Literal(y))
                if !(x.datatype().as_str() == xsd::STRING
                    && y.datatype().as_str() == xsd::STRING) =>
            {
                Err(ExprError::Incomparable(a.clone(), b.clone()))
            }
            _ => Ok(false),
        },
    }
}

pub fn effective_boolean_value(t: &Term) -> Result<bool, ExprError> {
    if let Term::Literal(l) = t {
        if let Some(b) = boolean_value(l) {
            return Ok(b);
        }
        if l.is_numeric() {
            if let Some(v) = l.as_f64() {
                return Ok(v != 0.0 && !v.is_nan());
            }
        }
        if l.datatype().as_str() == xsd::STRING {
            return Ok(!l.lexical().is_empty());
        }
    }
    Err(ExprError::NoBooleanValue(t.clone()))
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum DatePart {
    Year,
    Month,
    Day,
}

pub(crate) fn date_part(t: &Term, part: DatePart) -> Result<Term, ExprError> {
    let dt = t
        .as_literal()
        .and_then(Literal::as_date_time)
        .ok_or_else(|| ExprError::NotDateTime(t.clone()))?;
    let v = match part {
        DatePart::Year => i64::from(dt.year()),
        DatePart::Month => i64::from(dt.month()),
        DatePart::Day => i64::from(dt.day()),
    };
    Ok(Term::Literal(Literal::integer(v)))
}

/// Hashable stand-in for `=`: if `eval_equals(a, b)` is `Ok(true)` then
/// `eq_key(a) == eq_key(b)`, and both are `Some`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum EqKey {
    Numeric(u64),
    DateTime(DateTime<Utc>),
    Boolean(bool),
    Term(Term),
}

pub(crate) fn eq_key(t: &Term) -> Option<EqKey> {
    Some(match value_of(t) {
        Value::Numeric(v) if v.is_nan() => return None,
        // 0.0 and -0.0 compare equal
        Value::Numeric(v) => EqKey::Numeric(if v == 0.0 { 0 } else { v.to_bits() }),
        Value::DateTime(dt) => EqKey::DateTime(dt),
        Value::Boolean(b) => EqKey::Boolean(b),
        Value::Other(t) => EqKey::Term(t.clone()),
    })
}
