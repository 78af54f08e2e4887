//! SVG renderings of a card: the `X*` pixel plot and spaghetti plots.
//!
//! Output is plain SVG 1.1 with integer coordinates, so equal inputs give
//! equal bytes. Elements carry `class` attributes (`one`, `fraction`,
//! `link`, `label`) for styling and for tests.

use std::fmt::Write;

use ordo_core::rankability::XStar;
use ordo_core::rational::to_f64;
use ordo_core::Ranking;

use crate::card::ModelCard;

const CELL: usize = 16;
const LABEL_WIDTH: usize = 120;
const ROW: usize = 20;
const GAP: usize = 200;
const FRACTION_COLOR: &str = "#d62728";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlotError {
    #[error("card has no X* matrix")]
    NoXStar,
    #[error("card has fewer than two optimal rankings")]
    TooFewRankings,
    #[error("ranking index {index} out of range; the card stores {stored}")]
    IndexOutOfRange { index: usize, stored: usize },
    #[error("invalid pair selector `{0}`; use farthest, closest or i,j")]
    BadSelector(String),
}

/// Which two rankings a spaghetti plot compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairSelector {
    #[default]
    Farthest,
    Closest,
    /// 0-based indices into the card's stored `optimal_rankings`.
    Stored(usize, usize),
}

impl PairSelector {
    pub fn parse(text: &str) -> Result<Self, PlotError> {
        match text.trim() {
            "farthest" => Ok(Self::Farthest),
            "closest" => Ok(Self::Closest),
            other => {
                let bad = || PlotError::BadSelector(text.to_string());
                let (a, b) = other.split_once(',').ok_or_else(bad)?;
                Ok(Self::Stored(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
            }
        }
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn labels(n: usize, names: Option<&[String]>) -> Vec<String> {
    match names {
        Some(names) => names.iter().map(|s| escape(s)).collect(),
        None => (0..n).map(|i| i.to_string()).collect(),
    }
}

fn open(out: &mut String, width: usize, height: usize) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
}

/// `X*` drawn in the order of its reference ranking. Entries equal to 1 are
/// black, fractional entries red with opacity equal to the value, zeros
/// blank.
pub fn pixel_svg(x: &XStar, names: Option<&[String]>) -> String {
    let n = x.n();
    let labels = labels(n, names);
    let order = x.reference().order();
    let side = LABEL_WIDTH + n * CELL + 1;
    let mut out = String::new();
    open(&mut out, side, side);
    for (pos, &item) in order.iter().enumerate() {
        let c = LABEL_WIDTH + pos * CELL + CELL / 2;
        let label = &labels[item];
        let _ = writeln!(out, "<text class=\"label\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{label}</text>", LABEL_WIDTH - 4, c + 4);
        let _ = writeln!(
            out,
            "<text class=\"label\" x=\"{c}\" y=\"{}\" text-anchor=\"start\" transform=\"rotate(-90 {c} {})\">{label}</text>",
            LABEL_WIDTH - 4,
            LABEL_WIDTH - 4
        );
    }
    let _ = writeln!(
        out,
        "<rect class=\"frame\" x=\"{LABEL_WIDTH}\" y=\"{LABEL_WIDTH}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999999\"/>",
        n * CELL,
        n * CELL
    );
    for a in 0..n {
        for b in 0..n {
            let v = x.get(a, b);
            if v == 0.into() {
                continue;
            }
            let (px, py) = (LABEL_WIDTH + b * CELL, LABEL_WIDTH + a * CELL);
            if v == 1.into() {
                let _ = writeln!(out, "<rect class=\"one\" x=\"{px}\" y=\"{py}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"black\"/>");
            } else {
                let _ = writeln!(
                    out,
                    "<rect class=\"fraction\" x=\"{px}\" y=\"{py}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{FRACTION_COLOR}\" fill-opacity=\"{:.4}\"/>",
                    to_f64(&v)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Two columns of items, ordered by `left` and by `right`, with a line per
/// item between its two positions.
pub fn spaghetti_svg(left: &Ranking, right: &Ranking, names: Option<&[String]>) -> String {
    let n = left.len();
    let labels = labels(n, names);
    let (xl, xr) = (LABEL_WIDTH, LABEL_WIDTH + GAP);
    let y = |pos: usize| ROW + pos * ROW;
    let mut right_pos = vec![0; n];
    for (pos, &item) in right.order().iter().enumerate() {
        right_pos[item] = pos;
    }
    let mut out = String::new();
    open(&mut out, xr + LABEL_WIDTH, y(n));
    for (pos, &item) in left.order().iter().enumerate() {
        let _ = writeln!(
            out,
            "<line class=\"link\" data-item=\"{item}\" x1=\"{xl}\" y1=\"{}\" x2=\"{xr}\" y2=\"{}\" stroke=\"#1f77b4\" stroke-width=\"2\"/>",
            y(pos),
            y(right_pos[item])
        );
    }
    for (side, ranking) in [(0, left), (1, right)] {
        for (pos, &item) in ranking.order().iter().enumerate() {
            let (x, anchor) = if side == 0 { (xl - 6, "end") } else { (xr + 6, "start") };
            let _ = writeln!(
                out,
                "<text class=\"label\" x=\"{x}\" y=\"{}\" text-anchor=\"{anchor}\">{}. {}</text>",
                y(pos) + 4,
                pos + 1,
                labels[item]
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn card_pixel(card: &ModelCard) -> Result<String, PlotError> {
    let x = card.xstar.as_ref().ok_or(PlotError::NoXStar)?;
    Ok(pixel_svg(x, card.d.item_names()))
}

pub fn card_spaghetti(card: &ModelCard, pair: PairSelector) -> Result<String, PlotError> {
    let (a, b) = match pair {
        PairSelector::Farthest | PairSelector::Closest if card.num_optimal_rankings < 2 => {
            return Err(PlotError::TooFewRankings)
        }
        PairSelector::Farthest => (&card.farthest_pair.0, &card.farthest_pair.1),
        PairSelector::Closest => {
            let (a, b) = card.closest_pair.as_ref().ok_or(PlotError::TooFewRankings)?;
            (a, b)
        }
        PairSelector::Stored(i, j) => {
            let stored = card.optimal_rankings.len();
            let get = |index: usize| card.optimal_rankings.get(index).ok_or(PlotError::IndexOutOfRange { index, stored });
            (get(i)?, get(j)?)
        }
    };
    Ok(spaghetti_svg(a, b, card.d.item_names()))
}
