//! Unprocessed data to dominance matrices.
//!
//! * Game CSV: `team_a,score_a,team_b,score_b`, optionally preceded by a
//!   date column. A first row whose score fields are not integers is taken
//!   as a header. `D(i,j)` counts games `i` won against `j`; draws count
//!   for neither side.
//! * Feature CSV: a header row (`name,feature...`) then one row per item.
//!   `D(i,j)` counts features on which `i` strictly outperforms `j`.
//! * Matrix text: `#` comment lines, the item count `n`, then `n` rows of
//!   `n` whitespace-separated rationals. Comment lines of the form
//!   `# item: <name>` name the items in index order.
//!
//! Items from both CSV pipelines are sorted alphabetically.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ordo_core::linalg::GameRecord;
use ordo_core::rational::{self, format_rational, parse_rational, Rational};
use ordo_core::DominanceMatrix;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("line {line}: {msg}")]
    Row { line: usize, msg: String },
    #[error("no data rows")]
    Empty,
    #[error("line {line}, value {column}: {msg}")]
    Value { line: usize, column: usize, msg: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] ordo_core::Error),
}

pub type Result<T, E = IngestError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRow {
    pub date: Option<String>,
    pub team_a: String,
    pub score_a: u64,
    pub team_b: String,
    pub score_b: u64,
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn line_of(record: &csv::StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

pub fn parse_games_csv(text: &str) -> Result<Vec<GameRow>> {
    let mut rows = Vec::new();
    for (index, record) in reader(text).records().enumerate() {
        let record = record?;
        let line = line_of(&record);
        let offset = match record.len() {
            4 => 0,
            5 => 1,
            k => {
                return Err(IngestError::Row {
                    line,
                    msg: format!("expected 4 or 5 fields, found {k}"),
                })
            }
        };
        let field = |k: usize| &record[offset + k];
        let scores = (field(1).parse::<u64>(), field(3).parse::<u64>());
        let (score_a, score_b) = match scores {
            (Ok(a), Ok(b)) => (a, b),
            _ if index == 0 => continue,
            _ => {
                return Err(IngestError::Row {
                    line,
                    msg: "scores must be nonnegative integers".into(),
                })
            }
        };
        let (team_a, team_b) = (field(0).to_string(), field(2).to_string());
        if team_a.is_empty() || team_b.is_empty() {
            return Err(IngestError::Row { line, msg: "empty team name".into() });
        }
        if team_a == team_b {
            return Err(IngestError::Row { line, msg: format!("{team_a} plays itself") });
        }
        rows.push(GameRow {
            date: (offset == 1).then(|| record[0].to_string()),
            team_a,
            score_a,
            team_b,
            score_b,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestedGames {
    pub matrix: DominanceMatrix,
    pub names: Vec<String>,
    /// Games with teams as indices into `names`.
    pub games: Vec<GameRecord>,
}

pub fn ingest_games(rows: &[GameRow]) -> Result<IngestedGames> {
    if rows.is_empty() {
        return Err(IngestError::Empty);
    }
    let index = name_index(rows.iter().flat_map(|r| [&r.team_a, &r.team_b]));
    let n = index.len();
    let mut wins = vec![0i64; n * n];
    let mut games = Vec::with_capacity(rows.len());
    for r in rows {
        let (a, b) = (index[&r.team_a], index[&r.team_b]);
        if r.score_a > r.score_b {
            wins[a * n + b] += 1;
        } else if r.score_b > r.score_a {
            wins[b * n + a] += 1;
        }
        games.push(GameRecord::new(a, r.score_a, b, r.score_b));
    }
    let names: Vec<String> = index.into_keys().collect();
    let matrix = DominanceMatrix::from_flat(n, wins.into_iter().map(rational::int).collect())?
        .with_item_names(names.clone())?;
    Ok(IngestedGames { matrix, names, games })
}

fn name_index<'a>(names: impl Iterator<Item = &'a String>) -> BTreeMap<String, usize> {
    let mut index: BTreeMap<String, usize> = names.map(|s| (s.clone(), 0)).collect();
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    index
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub items: Vec<String>,
    pub features: Vec<String>,
    /// One row per item, one column per feature.
    pub values: Vec<Vec<f64>>,
}

pub fn parse_features_csv(text: &str) -> Result<FeatureTable> {
    let mut records = reader(text).into_records();
    let header = records.next().ok_or(IngestError::Empty)??;
    if header.len() < 2 {
        return Err(IngestError::Row {
            line: line_of(&header),
            msg: "header needs a name column and at least one feature".into(),
        });
    }
    let features: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let (mut items, mut values) = (Vec::new(), Vec::new());
    for record in records {
        let record = record?;
        let line = line_of(&record);
        if record.len() != header.len() {
            return Err(IngestError::Row {
                line,
                msg: format!("ragged row: expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let row = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(c, v)| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| IngestError::Value { line, column: c + 2, msg: format!("not a number: {v:?}") })
            })
            .collect::<Result<Vec<f64>>>()?;
        items.push(record[0].to_string());
        values.push(row);
    }
    if items.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(FeatureTable { items, features, values })
}

/// `higher_is_better[f]` gives the direction of feature `f`.
pub fn ingest_features(table: &FeatureTable, higher_is_better: &[bool]) -> Result<DominanceMatrix> {
    let width = table.features.len();
    if width == 0 {
        return Err(IngestError::Row { line: 1, msg: "no features".into() });
    }
    if higher_is_better.len() != width {
        return Err(IngestError::Row {
            line: 1,
            msg: format!("{} directions for {} features", higher_is_better.len(), width),
        });
    }
    if let Some(r) = table.values.iter().position(|row| row.len() != width) {
        return Err(IngestError::Row { line: r + 2, msg: "ragged row".into() });
    }
    if table.items.is_empty() {
        return Err(IngestError::Empty);
    }
    let mut order: Vec<usize> = (0..table.items.len()).collect();
    order.sort_by(|&a, &b| table.items[a].cmp(&table.items[b]));
    if let Some(w) = order.windows(2).find(|w| table.items[w[0]] == table.items[w[1]]) {
        return Err(IngestError::Row {
            line: w[1] + 2,
            msg: format!("duplicate item {:?}", table.items[w[1]]),
        });
    }
    let n = order.len();
    let mut counts = vec![0i64; n * n];
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            if i == j {
                continue;
            }
            counts[i * n + j] = (0..width)
                .filter(|&f| {
                    let (x, y) = (table.values[a][f], table.values[b][f]);
                    if higher_is_better[f] { x > y } else { x < y }
                })
                .count() as i64;
        }
    }
    let names = order.iter().map(|&a| table.items[a].clone()).collect();
    Ok(DominanceMatrix::from_flat(n, counts.into_iter().map(rational::int).collect())?.with_item_names(names)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMatrix {
    pub matrix: DominanceMatrix,
    pub warnings: Vec<String>,
}

pub fn parse_matrix(text: &str) -> Result<ParsedMatrix> {
    let mut warnings = Vec::new();
    let mut names = Vec::new();
    let mut n: Option<usize> = None;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(name) = comment.trim_start().strip_prefix("item:") {
                names.push(name.trim().to_string());
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let Some(size) = n else {
            let size = trimmed
                .parse::<usize>()
                .ok()
                .filter(|&s| s > 0)
                .ok_or_else(|| IngestError::Row { line, msg: format!("expected item count, found {trimmed:?}") })?;
            n = Some(size);
            continue;
        };
        if rows.len() == size {
            return Err(IngestError::Row { line, msg: format!("more than {size} rows") });
        }
        let row = trimmed
            .split_whitespace()
            .enumerate()
            .map(|(c, tok)| {
                parse_rational(tok)
                    .ok_or_else(|| IngestError::Value { line, column: c + 1, msg: format!("not a rational: {tok:?}") })
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != size {
            return Err(IngestError::Row {
                line,
                msg: format!("expected {size} values, found {}", row.len()),
            });
        }
        if let Some(c) = row.iter().position(|v| *v < Rational::from_integer(0)) {
            return Err(IngestError::Value { line, column: c + 1, msg: "negative entry".into() });
        }
        rows.push(row);
    }
    let size = n.ok_or(IngestError::Empty)?;
    if rows.len() != size {
        return Err(IngestError::Row {
            line: text.lines().count(),
            msg: format!("expected {size} rows, found {}", rows.len()),
        });
    }
    for (i, row) in rows.iter_mut().enumerate() {
        if row[i] != Rational::from_integer(0) {
            warnings.push(format!("diagonal entry ({i},{i}) was {} and is set to 0", format_rational(&row[i])));
            row[i] = Rational::from_integer(0);
        }
    }
    let mut matrix = DominanceMatrix::new(rows)?;
    if !names.is_empty() {
        if names.len() == size {
            matrix = matrix.with_item_names(names)?;
        } else {
            warnings.push(format!("ignoring {} item names for {size} items", names.len()));
        }
    }
    Ok(ParsedMatrix { matrix, warnings })
}

/// Canonical matrix text; [`parse_matrix`] reads it back unchanged.
pub fn write_matrix(d: &DominanceMatrix) -> String {
    let mut out = String::new();
    if let Some(names) = d.item_names() {
        for name in names {
            writeln!(out, "# item: {name}").unwrap();
        }
    }
    writeln!(out, "{}", d.n()).unwrap();
    for row in d.rows() {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}
