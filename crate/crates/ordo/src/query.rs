//! Conjunctive filters over model cards.
//!
//! ```text
//! query     := predicate ("&&" predicate)*
//! predicate := field op value
//! op        := "==" | "!=" | "<" | "<=" | ">" | ">=" | "contains"
//! value     := bare text up to the next "&&", or a double-quoted string
//! ```
//!
//! Numeric fields compare exactly as rationals. String fields support
//! `==`, `!=` and `contains`; boolean fields `==` and `!=`. A card whose
//! value is absent (such as `k` on a weighted matrix) matches nothing.

use std::fmt;

use ordo_core::rational::{parse_rational, Rational};

use crate::card::ModelCard;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {msg}")]
pub struct QueryError {
    /// 1-based character column in the query text.
    pub column: usize,
    pub msg: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Contains,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Eq => "==",
            Op::Ne => "!=",
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
            Op::Contains => "contains",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    DatasetId,
    Source,
    N,
    Method,
    Sense,
    OptimalObjective,
    NumOptimal,
    CountExact,
    Complete,
    Diameter,
    K,
    P,
    Tau,
    Beta,
}

const FIELD_NAMES: [(&str, Field); 18] = [
    ("dataset_id", Field::DatasetId),
    ("source", Field::Source),
    ("n", Field::N),
    ("method", Field::Method),
    ("sense", Field::Sense),
    ("optimal_objective", Field::OptimalObjective),
    ("num_optimal_rankings", Field::NumOptimal),
    ("count_exact", Field::CountExact),
    ("complete", Field::Complete),
    ("diameter", Field::Diameter),
    ("k", Field::K),
    ("p", Field::P),
    ("tau", Field::Tau),
    ("beta", Field::Beta),
    ("measures.k", Field::K),
    ("measures.p", Field::P),
    ("measures.tau", Field::Tau),
    ("measures.beta", Field::Beta),
];

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Num(Rational),
    Str(String),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq)]
struct Predicate {
    field: Field,
    op: Op,
    value: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    predicates: Vec<Predicate>,
}

fn num(x: usize) -> Option<Value> {
    Some(Value::Num(Rational::from_integer(x as i64)))
}

impl Field {
    fn extract(self, c: &ModelCard) -> Option<Value> {
        match self {
            Field::DatasetId => i64::try_from(c.dataset_id).ok().map(|x| Value::Num(Rational::from_integer(x))),
            Field::Source => Some(Value::Str(c.source.clone())),
            Field::N => num(c.n()),
            Field::Method => Some(Value::Str(c.method.as_str().into())),
            Field::Sense => Some(Value::Str(c.sense.as_str().into())),
            Field::OptimalObjective => Some(Value::Num(c.optimal_objective)),
            Field::NumOptimal => num(c.num_optimal_rankings),
            Field::CountExact => Some(Value::Bool(c.count_exact)),
            Field::Complete => Some(Value::Bool(c.complete)),
            Field::Diameter => num(c.diameter),
            Field::K => c.measures.k.map(Value::Num),
            Field::P => num(c.measures.p),
            Field::Tau => num(c.measures.tau),
            Field::Beta => Some(Value::Num(c.measures.beta)),
        }
    }

    fn kind(self) -> &'static str {
        match self {
            Field::Source | Field::Method | Field::Sense => "string",
            Field::CountExact | Field::Complete => "boolean",
            _ => "numeric",
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn column(&self, byte: usize) -> usize {
        self.text[..byte].chars().count() + 1
    }

    fn fail<T>(&self, byte: usize, msg: impl Into<String>) -> Result<T, QueryError> {
        Err(QueryError { column: self.column(byte), msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_space(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn field(&mut self) -> Result<Field, QueryError> {
        self.skip_space();
        let start = self.pos;
        let len = self.rest().find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '.')).unwrap_or(self.rest().len());
        if len == 0 {
            return self.fail(start, "expected a field name");
        }
        let name = &self.rest()[..len];
        let Some(&(_, field)) = FIELD_NAMES.iter().find(|(n, _)| *n == name) else {
            return self.fail(start, format!("unknown field `{name}`"));
        };
        self.pos += len;
        Ok(field)
    }

    fn op(&mut self) -> Result<Op, QueryError> {
        self.skip_space();
        let start = self.pos;
        for (token, op) in [
            ("==", Op::Eq),
            ("!=", Op::Ne),
            ("<=", Op::Le),
            (">=", Op::Ge),
            ("<", Op::Lt),
            (">", Op::Gt),
            ("contains", Op::Contains),
        ] {
            if self.eat(token) {
                return Ok(op);
            }
        }
        self.fail(start, "expected one of == != < <= > >= contains")
    }

    /// Returns the raw value text and its starting byte.
    fn value(&mut self) -> Result<(String, usize), QueryError> {
        self.skip_space();
        let start = self.pos;
        if self.eat("\"") {
            let mut out = String::new();
            let mut chars = self.rest().char_indices();
            while let Some((k, c)) = chars.next() {
                match c {
                    '"' => {
                        self.pos += k + 1;
                        return Ok((out, start));
                    }
                    '\\' => match chars.next() {
                        Some((_, e)) => out.push(e),
                        None => break,
                    },
                    c => out.push(c),
                }
            }
            return self.fail(start, "unterminated string");
        }
        let len = self.rest().find("&&").unwrap_or(self.rest().len());
        let raw = self.rest()[..len].trim_end();
        if raw.is_empty() {
            return self.fail(start, "expected a value");
        }
        self.pos += raw.len();
        Ok((raw.to_string(), start))
    }
}

impl Query {
    pub fn parse(text: &str) -> Result<Self, QueryError> {
        let mut cur = Cursor { text, pos: 0 };
        let mut predicates = Vec::new();
        loop {
            let field = cur.field()?;
            let op_start = {
                cur.skip_space();
                cur.pos
            };
            let op = cur.op()?;
            let (raw, value_start) = cur.value()?;
            let value = match field.kind() {
                "numeric" => {
                    if op == Op::Contains {
                        return cur.fail(op_start, "contains needs a string field");
                    }
                    match parse_rational(&raw) {
                        Some(r) => Value::Num(r),
                        None => return cur.fail(value_start, format!("`{raw}` is not a number")),
                    }
                }
                "boolean" => {
                    if !matches!(op, Op::Eq | Op::Ne) {
                        return cur.fail(op_start, format!("{op} is not defined for boolean fields"));
                    }
                    match raw.as_str() {
                        "true" => Value::Bool(true),
                        "false" => Value::Bool(false),
                        _ => return cur.fail(value_start, "expected true or false"),
                    }
                }
                _ => {
                    if !matches!(op, Op::Eq | Op::Ne | Op::Contains) {
                        return cur.fail(op_start, format!("{op} is not defined for string fields"));
                    }
                    Value::Str(raw)
                }
            };
            predicates.push(Predicate { field, op, value });
            cur.skip_space();
            if cur.rest().is_empty() {
                break;
            }
            let here = cur.pos;
            if !cur.eat("&&") {
                return cur.fail(here, "expected &&");
            }
        }
        Ok(Self { predicates })
    }

    pub fn matches(&self, card: &ModelCard) -> bool {
        self.predicates.iter().all(|p| {
            let Some(actual) = p.field.extract(card) else {
                return false;
            };
            match (&actual, &p.value) {
                (Value::Num(a), Value::Num(b)) => match p.op {
                    Op::Eq => a == b,
                    Op::Ne => a != b,
                    Op::Lt => a < b,
                    Op::Le => a <= b,
                    Op::Gt => a > b,
                    Op::Ge => a >= b,
                    Op::Contains => false,
                },
                (Value::Str(a), Value::Str(b)) => match p.op {
                    Op::Eq => a == b,
                    Op::Ne => a != b,
                    Op::Contains => a.contains(b.as_str()),
                    _ => false,
                },
                (Value::Bool(a), Value::Bool(b)) => (a == b) == (p.op == Op::Eq),
                _ => false,
            }
        })
    }
}

/// Ids of the cards matching `query`, ascending.
pub fn filter(cards: &[ModelCard], query: &Query) -> Vec<u64> {
    let mut ids: Vec<u64> = cards.iter().filter(|c| query.matches(c)).map(|c| c.dataset_id).collect();
    ids.sort_unstable();
    ids
}
