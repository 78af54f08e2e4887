//! Canonical JSON model cards.
//!
//! Layout rules, which make [`emit`] a pure function of the card:
//!
//! * keys appear in the order of [`FIELDS`] (and the nested key lists),
//!   optional values are written as `null`, never omitted;
//! * two-space indentation; arrays of scalars stay on one line, arrays of
//!   arrays put one element per line;
//! * rationals are written as integers or terminating decimals with no
//!   trailing zeros, otherwise as the string `"p/q"`;
//! * rankings are 1-based rank vectors (`v[item]` = position of `item`);
//! * UTF-8, `\n` line endings, one trailing newline.
//!
//! [`parse`] rejects unknown keys and reports every error with the JSON path
//! of the offending value.

use std::fmt;

use ordo_core::generators::{GenSpec, Kind};
use ordo_core::lop::Method;
use ordo_core::rankability::{self, Analysis, XStar};
use ordo_core::rational::{format_rational, parse_rational, Rational};
use ordo_core::{kendall_tau, rank_vector, DominanceMatrix, Measures, Ranking, Sense};
use serde_json::Value;

pub const SCHEMA_VERSION: u64 = 1;
/// Most rankings written into one card.
pub const DEFAULT_MAX_STORED: usize = 1000;

pub const FIELDS: [&str; 21] = [
    "schema_version",
    "dataset_id",
    "source",
    "n",
    "item_names",
    "D",
    "method",
    "sense",
    "optimal_objective",
    "num_optimal_rankings",
    "count_exact",
    "complete",
    "optimal_rankings",
    "diameter",
    "farthest_pair",
    "closest_pair",
    "centroid_solution",
    "centroid_farthest",
    "measures",
    "xstar",
    "genspec",
];
const MEASURE_FIELDS: [&str; 4] = ["k", "p", "tau", "beta"];
const XSTAR_FIELDS: [&str; 3] = ["reference", "estimated", "values"];
const GENSPEC_FIELDS: [&str; 10] = [
    "kind",
    "n",
    "percent",
    "lo",
    "hi",
    "block_begin",
    "block_end",
    "p_upset",
    "games_per_pair",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCard {
    pub dataset_id: u64,
    pub source: String,
    /// Carries the item names, if any.
    pub d: DominanceMatrix,
    pub method: Method,
    pub sense: Sense,
    pub optimal_objective: Rational,
    /// True number of optima when `count_exact`, else a lower bound.
    pub num_optimal_rankings: usize,
    /// False when enumeration stopped at the cap.
    pub count_exact: bool,
    /// True iff `optimal_rankings` lists every optimum.
    pub complete: bool,
    /// Centroid-nearest first.
    pub optimal_rankings: Vec<Ranking>,
    pub diameter: usize,
    pub farthest_pair: (Ranking, Ranking),
    pub closest_pair: Option<(Ranking, Ranking)>,
    pub centroid_solution: Ranking,
    pub centroid_farthest: Ranking,
    pub measures: Measures,
    pub xstar: Option<XStar>,
    pub genspec: Option<GenSpec>,
}

#[derive(Debug, Clone)]
pub struct CardOptions {
    pub dataset_id: u64,
    pub source: String,
    pub max_stored: usize,
    pub genspec: Option<GenSpec>,
}

impl Default for CardOptions {
    fn default() -> Self {
        Self {
            dataset_id: 0,
            source: "artificial".into(),
            max_stored: DEFAULT_MAX_STORED,
            genspec: None,
        }
    }
}

impl ModelCard {
    pub fn n(&self) -> usize {
        self.d.n()
    }

    pub fn from_analysis(d: &DominanceMatrix, a: &Analysis, opts: &CardOptions) -> Self {
        let centroid = &a.geometry.centroid;
        let spread = |r: &Ranking| -> Rational {
            rank_vector(r)
                .into_iter()
                .zip(centroid)
                .map(|(x, c)| {
                    let diff = Rational::from_integer(x as i64) - c;
                    diff * diff
                })
                .sum()
        };
        let mut stored: Vec<(Rational, &Ranking)> = a.set.rankings.iter().map(|r| (spread(r), r)).collect();
        stored.sort();
        stored.truncate(opts.max_stored.max(1));
        let count = a.set.len();
        Self {
            dataset_id: opts.dataset_id,
            source: opts.source.clone(),
            d: d.clone(),
            method: a.method,
            sense: a.set.sense,
            optimal_objective: a.set.objective,
            num_optimal_rankings: count,
            count_exact: a.set.complete,
            complete: a.set.complete && stored.len() == count,
            optimal_rankings: stored.into_iter().map(|(_, r)| r.clone()).collect(),
            diameter: a.geometry.diameter,
            farthest_pair: a.geometry.farthest_pair.clone(),
            closest_pair: a.geometry.closest_pair.clone(),
            centroid_solution: a.geometry.centroid_closest.clone(),
            centroid_farthest: a.geometry.centroid_farthest.clone(),
            measures: a.measures.clone(),
            xstar: Some(a.xstar.clone()),
            genspec: opts.genspec.clone(),
        }
    }
}

/// Full pipeline: solve with `workers` threads, derive geometry and
/// measures, assemble the card.
pub fn build_card(
    d: &DominanceMatrix,
    method: Method,
    cap: usize,
    workers: usize,
    opts: &CardOptions,
) -> std::result::Result<ModelCard, ordo_core::Error> {
    let analysis = rankability::analyze_with(d, method, cap, |p, cap| crate::parallel::solve_parallel(p, cap, workers))?;
    Ok(ModelCard::from_analysis(d, &analysis, opts))
}

enum Json {
    Null,
    Bool(bool),
    Num(String),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    fn is_scalar(&self) -> bool {
        !matches!(self, Json::Arr(_) | Json::Obj(_))
    }

    fn write(&self, indent: usize, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Num(s) => out.push_str(s),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Arr(items) if items.iter().all(Json::is_scalar) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    item.write(indent, out);
                }
                out.push(']');
            }
            Json::Arr(items) => {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    pad(indent + 2, out);
                    item.write(indent + 2, out);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(indent, out);
                out.push(']');
            }
            Json::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Json::Obj(fields) => {
                out.push_str("{\n");
                for (k, (key, value)) in fields.iter().enumerate() {
                    pad(indent + 2, out);
                    out.push_str(&serde_json::to_string(key).expect("keys serialize"));
                    out.push_str(": ");
                    value.write(indent + 2, out);
                    out.push_str(if k + 1 < fields.len() { ",\n" } else { "\n" });
                }
                pad(indent, out);
                out.push('}');
            }
        }
    }
}

fn pad(width: usize, out: &mut String) {
    out.extend(std::iter::repeat_n(' ', width));
}

fn num(v: impl fmt::Display) -> Json {
    Json::Num(v.to_string())
}

fn rat(r: &Rational) -> Json {
    let s = format_rational(r);
    if s.contains('/') {
        Json::Str(s)
    } else {
        Json::Num(s)
    }
}

fn ranks(r: &Ranking) -> Json {
    Json::Arr(rank_vector(r).into_iter().map(num).collect())
}

fn pair(p: &(Ranking, Ranking)) -> Json {
    Json::Arr(vec![ranks(&p.0), ranks(&p.1)])
}

fn matrix(values: &[Rational], n: usize) -> Json {
    Json::Arr(values.chunks(n).map(|row| Json::Arr(row.iter().map(rat).collect())).collect())
}

fn opt<T: ?Sized>(v: Option<&T>, f: impl Fn(&T) -> Json) -> Json {
    v.map_or(Json::Null, f)
}

fn genspec_json(g: &GenSpec) -> Json {
    Json::Obj(vec![
        ("kind", Json::Str(g.kind.as_str().into())),
        ("n", num(g.n)),
        ("percent", rat(&g.percent)),
        ("lo", num(g.lo)),
        ("hi", num(g.hi)),
        ("block_begin", num(g.block_begin)),
        ("block_end", num(g.block_end)),
        ("p_upset", rat(&g.p_upset)),
        ("games_per_pair", num(g.games_per_pair)),
        ("seed", num(g.seed)),
    ])
}

pub fn emit(card: &ModelCard) -> String {
    let n = card.n();
    let m = &card.measures;
    let root = Json::Obj(vec![
        ("schema_version", num(SCHEMA_VERSION)),
        ("dataset_id", num(card.dataset_id)),
        ("source", Json::Str(card.source.clone())),
        ("n", num(n)),
        (
            "item_names",
            opt(card.d.item_names(), |names| Json::Arr(names.iter().cloned().map(Json::Str).collect())),
        ),
        ("D", matrix(card.d.entries(), n)),
        ("method", Json::Str(card.method.as_str().into())),
        ("sense", Json::Str(card.sense.as_str().into())),
        ("optimal_objective", rat(&card.optimal_objective)),
        ("num_optimal_rankings", num(card.num_optimal_rankings)),
        ("count_exact", Json::Bool(card.count_exact)),
        ("complete", Json::Bool(card.complete)),
        ("optimal_rankings", Json::Arr(card.optimal_rankings.iter().map(ranks).collect())),
        ("diameter", num(card.diameter)),
        ("farthest_pair", pair(&card.farthest_pair)),
        ("closest_pair", opt(card.closest_pair.as_ref(), pair)),
        ("centroid_solution", ranks(&card.centroid_solution)),
        ("centroid_farthest", ranks(&card.centroid_farthest)),
        (
            "measures",
            Json::Obj(vec![
                ("k", opt(m.k.as_ref(), rat)),
                ("p", num(m.p)),
                ("tau", num(m.tau)),
                ("beta", rat(&m.beta)),
            ]),
        ),
        (
            "xstar",
            opt(card.xstar.as_ref(), |x| {
                Json::Obj(vec![
                    ("reference", ranks(x.reference())),
                    ("estimated", Json::Bool(x.estimated)),
                    ("values", matrix(x.values(), x.n())),
                ])
            }),
        ),
        ("genspec", opt(card.genspec.as_ref(), genspec_json)),
    ]);
    let mut out = String::new();
    root.write(0, &mut out);
    out.push('\n');
    out
}

/// A schema or invariant violation at a JSON path such as `$.measures.k`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {msg}")]
pub struct CardError {
    pub path: String,
    pub msg: String,
}

type Result<T> = std::result::Result<T, CardError>;

fn err<T>(path: &str, msg: impl Into<String>) -> Result<T> {
    Err(CardError { path: path.into(), msg: msg.into() })
}

struct Fields<'a> {
    map: &'a serde_json::Map<String, Value>,
    path: String,
}

impl<'a> Fields<'a> {
    fn new(v: &'a Value, path: &str, allowed: &[&str]) -> Result<Self> {
        let Value::Object(map) = v else {
            return err(path, "expected an object");
        };
        if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return err(&format!("{path}.{key}"), "unknown field");
        }
        Ok(Self { map, path: path.into() })
    }

    fn at(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn req(&self, key: &str) -> Result<(&'a Value, String)> {
        match self.map.get(key) {
            Some(v) => Ok((v, self.at(key))),
            None => err(&self.at(key), "missing field"),
        }
    }

    fn opt(&self, key: &str) -> Option<(&'a Value, String)> {
        self.map.get(key).filter(|v| !v.is_null()).map(|v| (v, self.at(key)))
    }
}

fn as_u64((v, path): (&Value, String)) -> Result<u64> {
    match v {
        Value::Number(n) => n.as_u64().map_or_else(|| err(&path, "expected a nonnegative integer"), Ok),
        _ => err(&path, "expected a nonnegative integer"),
    }
}

fn as_usize(v: (&Value, String)) -> Result<usize> {
    let path = v.1.clone();
    usize::try_from(as_u64(v)?).or_else(|_| err(&path, "integer too large"))
}

fn as_i64((v, path): (&Value, String)) -> Result<i64> {
    match v {
        Value::Number(n) => n.as_i64().map_or_else(|| err(&path, "expected an integer"), Ok),
        _ => err(&path, "expected an integer"),
    }
}

fn as_bool((v, path): (&Value, String)) -> Result<bool> {
    v.as_bool().map_or_else(|| err(&path, "expected a boolean"), Ok)
}

fn as_str((v, path): (&Value, String)) -> Result<&str> {
    v.as_str().map_or_else(|| err(&path, "expected a string"), Ok)
}

fn as_rational((v, path): (&Value, String)) -> Result<Rational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) if s.contains('/') => s.clone(),
        _ => return err(&path, "expected a rational number"),
    };
    parse_rational(&text).map_or_else(|| err(&path, format!("not an exact rational: {text}")), Ok)
}

fn as_array((v, path): (&Value, String)) -> Result<Vec<(&Value, String)>> {
    match v {
        Value::Array(items) => Ok(items.iter().enumerate().map(|(k, x)| (x, format!("{path}[{k}]"))).collect()),
        _ => err(&path, "expected an array"),
    }
}

fn as_ranking(v: (&Value, String), n: usize) -> Result<Ranking> {
    let path = v.1.clone();
    let positions = as_array(v)?.into_iter().map(as_usize).collect::<Result<Vec<_>>>()?;
    if positions.len() != n {
        return err(&path, format!("rank vector has length {}, expected {n}", positions.len()));
    }
    Ranking::from_rank_vector(&positions).or_else(|_| err(&path, format!("not a permutation of 1..{n}")))
}

fn as_pair(v: (&Value, String), n: usize) -> Result<(Ranking, Ranking)> {
    let path = v.1.clone();
    let mut items = as_array(v)?;
    if items.len() != 2 {
        return err(&path, "expected a pair of rank vectors");
    }
    let b = as_ranking(items.pop().expect("two items"), n)?;
    let a = as_ranking(items.pop().expect("two items"), n)?;
    Ok((a, b))
}

fn as_matrix(v: (&Value, String), n: usize) -> Result<Vec<Rational>> {
    let path = v.1.clone();
    let rows = as_array(v)?;
    if rows.len() != n {
        return err(&path, format!("expected {n} rows, found {}", rows.len()));
    }
    let mut out = Vec::with_capacity(n * n);
    for row in rows {
        let row_path = row.1.clone();
        let cells = as_array(row)?;
        if cells.len() != n {
            return err(&row_path, format!("expected {n} values, found {}", cells.len()));
        }
        for cell in cells {
            out.push(as_rational(cell)?);
        }
    }
    Ok(out)
}

fn parse_genspec(v: (&Value, String)) -> Result<GenSpec> {
    let f = Fields::new(v.0, &v.1, &GENSPEC_FIELDS)?;
    let (kind_v, kind_path) = f.req("kind")?;
    let kind = Kind::parse(as_str((kind_v, kind_path.clone()))?).map_or_else(|| err(&kind_path, "unknown generator kind"), Ok)?;
    let n = as_usize(f.req("n")?)?;
    let mut g = GenSpec::new(kind, n)
        .noise(as_rational(f.req("percent")?)?, as_i64(f.req("lo")?)?, as_i64(f.req("hi")?)?)
        .block(as_usize(f.req("block_begin")?)?, as_usize(f.req("block_end")?)?)
        .games(
            as_rational(f.req("p_upset")?)?,
            u32::try_from(as_u64(f.req("games_per_pair")?)?).or_else(|_| err(&f.at("games_per_pair"), "integer too large"))?,
        );
    g.seed = as_u64(f.req("seed")?)?;
    Ok(g)
}

pub fn parse(text: &str) -> Result<ModelCard> {
    let root: Value = serde_json::from_str(text).or_else(|e| err("$", format!("invalid JSON: {e}")))?;
    let f = Fields::new(&root, "$", &FIELDS)?;

    let version = as_u64(f.req("schema_version")?)?;
    if version != SCHEMA_VERSION {
        return err("$.schema_version", format!("unsupported schema version {version}"));
    }
    let n = as_usize(f.req("n")?)?;
    if n == 0 {
        return err("$.n", "must be at least 1");
    }
    let entries = as_matrix(f.req("D")?, n)?;
    let mut d = DominanceMatrix::from_flat(n, entries).or_else(|e| err("$.D", e.to_string()))?;
    if let Some(names) = f.opt("item_names") {
        let names = as_array(names)?
            .into_iter()
            .map(|v| as_str(v).map(str::to_string))
            .collect::<Result<Vec<_>>>()?;
        d = d.with_item_names(names).or_else(|e| err("$.item_names", e.to_string()))?;
    }

    let method_path = f.at("method");
    let method = Method::parse(as_str(f.req("method")?)?).map_or_else(|| err(&method_path, "expected lop, hillside or k"), Ok)?;
    let sense = match as_str(f.req("sense")?)? {
        "maximize" => Sense::Maximize,
        "minimize" => Sense::Minimize,
        _ => return err("$.sense", "expected maximize or minimize"),
    };
    let expected_sense = if method == Method::Lop { Sense::Maximize } else { Sense::Minimize };
    if sense != expected_sense {
        return err("$.sense", format!("method {} implies {}", method.as_str(), expected_sense.as_str()));
    }

    let num_optimal_rankings = as_usize(f.req("num_optimal_rankings")?)?;
    let count_exact = as_bool(f.req("count_exact")?)?;
    let complete = as_bool(f.req("complete")?)?;
    let optimal_rankings = as_array(f.req("optimal_rankings")?)?
        .into_iter()
        .map(|v| as_ranking(v, n))
        .collect::<Result<Vec<_>>>()?;
    if optimal_rankings.is_empty() {
        return err("$.optimal_rankings", "at least one ranking is required");
    }
    if num_optimal_rankings < optimal_rankings.len() {
        return err("$.num_optimal_rankings", "smaller than the number of stored rankings");
    }
    if complete != (num_optimal_rankings == optimal_rankings.len()) {
        return err("$.complete", "must be true exactly when every optimal ranking is stored");
    }
    if complete && !count_exact {
        return err("$.complete", "a complete list needs an exact count");
    }
    let mut seen = optimal_rankings.clone();
    seen.sort();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return err("$.optimal_rankings", "duplicate ranking");
    }

    let diameter = as_usize(f.req("diameter")?)?;
    let farthest_pair = as_pair(f.req("farthest_pair")?, n)?;
    if kendall_tau(&farthest_pair.0, &farthest_pair.1) != Ok(diameter) {
        return err("$.farthest_pair", "distance differs from diameter");
    }
    let closest_pair = f.opt("closest_pair").map(|v| as_pair(v, n)).transpose()?;
    if closest_pair.as_ref().is_some_and(|(a, b)| a == b) {
        return err("$.closest_pair", "rankings must be distinct");
    }

    let mf = Fields::new(f.req("measures")?.0, "$.measures", &MEASURE_FIELDS)?;
    let measures = Measures {
        k: mf.opt("k").map(as_rational).transpose()?,
        p: as_usize(mf.req("p")?)?,
        tau: as_usize(mf.req("tau")?)?,
        beta: as_rational(mf.req("beta")?)?,
    };
    if measures.p != num_optimal_rankings {
        return err("$.measures.p", "must equal num_optimal_rankings");
    }

    let xstar = match f.opt("xstar") {
        None => None,
        Some(v) => {
            let xf = Fields::new(v.0, &v.1, &XSTAR_FIELDS)?;
            let reference = as_ranking(xf.req("reference")?, n)?;
            let estimated = as_bool(xf.req("estimated")?)?;
            let values = as_matrix(xf.req("values")?, n)?;
            Some(XStar::new(reference, values, estimated).or_else(|e| err("$.xstar.values", e.to_string()))?)
        }
    };

    let source = as_str(f.req("source")?)?.to_string();
    Ok(ModelCard {
        dataset_id: as_u64(f.req("dataset_id")?)?,
        source,
        d,
        method,
        sense,
        optimal_objective: as_rational(f.req("optimal_objective")?)?,
        num_optimal_rankings,
        count_exact,
        complete,
        optimal_rankings,
        diameter,
        farthest_pair,
        closest_pair,
        centroid_solution: as_ranking(f.req("centroid_solution")?, n)?,
        centroid_farthest: as_ranking(f.req("centroid_farthest")?, n)?,
        measures,
        xstar,
        genspec: f.opt("genspec").map(parse_genspec).transpose()?,
    })
}
