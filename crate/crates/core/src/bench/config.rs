//! Plain-text configuration files.
//!
//! ```text
//! p=7 dim=3
//! [points]
//! 1 2 3
//! 0 0 1 w=4
//! [planes]        # normal coordinates, then offset
//! 1 0 0 2
//! [lines]         # base point, then direction
//! 0 0 0 1 2 3
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::counting::WeightedSet;
use crate::field::Prime;
use crate::geom::{AffineLine, Hyperplane, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub p: Prime,
    pub dim: usize,
    pub points: WeightedSet<Vector>,
    /// Hyperplanes; lines `ax + by = c` when `dim = 2`.
    pub planes: WeightedSet<Hyperplane>,
    pub lines: Vec<AffineLine>,
}

impl Config {
    pub fn new(p: Prime, dim: usize) -> Self {
        Config {
            p,
            dim,
            points: WeightedSet::new(),
            planes: WeightedSet::new(),
            lines: Vec::new(),
        }
    }

    pub fn with_points(p: Prime, dim: usize, points: impl IntoIterator<Item = Vector>) -> Self {
        let mut c = Self::new(p, dim);
        c.points = WeightedSet::from_items(points);
        c
    }

    pub fn point_list(&self) -> Vec<Vector> {
        self.points.distinct()
    }

    pub fn plane_list(&self) -> Vec<Hyperplane> {
        self.planes.distinct()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Points,
    Planes,
    Lines,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn parse_header(text: &str, line: usize) -> Result<(Prime, usize), ParseError> {
    let mut p = None;
    let mut dim = None;
    for tok in text.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected key=value, found `{tok}`")))?;
        let n: u64 = v
            .parse()
            .map_err(|_| err(line, format!("`{v}` is not a nonnegative integer")))?;
        match k {
            "p" => p = Some(Prime::new(n).map_err(|e| err(line, e.to_string()))?),
            "dim" => dim = Some(n as usize),
            _ => return Err(err(line, format!("unknown header key `{k}`"))),
        }
    }
    let p = p.ok_or_else(|| err(line, "header is missing p="))?;
    let dim = dim.ok_or_else(|| err(line, "header is missing dim="))?;
    if !(1..=4).contains(&dim) {
        return Err(err(line, format!("unsupported dimension {dim}")));
    }
    Ok((p, dim))
}

pub fn parse(text: &str) -> Result<Config, ParseError> {
    let mut config: Option<Config> = None;
    let mut section = Section::None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some(cfg) = config.as_mut() else {
            let (p, dim) = parse_header(body, line)?;
            config = Some(Config::new(p, dim));
            continue;
        };
        match body {
            "[points]" => {
                section = Section::Points;
                continue;
            }
            "[planes]" => {
                section = Section::Planes;
                continue;
            }
            "[lines]" => {
                section = Section::Lines;
                continue;
            }
            _ if body.starts_with('[') => return Err(err(line, format!("unknown section `{body}`"))),
            _ => {}
        }
        let mut nums = Vec::new();
        let mut weight = None;
        for tok in body.split_whitespace() {
            if let Some(w) = tok.strip_prefix("w=") {
                let w: u64 = w.parse().map_err(|_| err(line, format!("bad weight `{w}`")))?;
                if w == 0 {
                    return Err(err(line, "weight must be positive"));
                }
                weight = Some(w);
            } else if weight.is_some() {
                return Err(err(line, "weight must come last"));
            } else {
                nums.push(
                    tok.parse::<i64>()
                        .map_err(|_| err(line, format!("`{tok}` is not an integer")))?,
                );
            }
        }
        let (p, dim) = (cfg.p, cfg.dim);
        let expect = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(err(line, format!("expected {n} integers, found {}", nums.len())))
            }
        };
        let geom = |e: crate::geom::GeomError| err(line, e.to_string());
        match section {
            Section::None => return Err(err(line, "data before any section")),
            Section::Points => {
                expect(dim)?;
                let v = Vector::new(p, &nums).map_err(geom)?;
                cfg.points
                    .insert(v, weight.unwrap_or(1))
                    .map_err(|e| err(line, e.to_string()))?;
            }
            Section::Planes => {
                expect(dim + 1)?;
                let normal = Vector::new(p, &nums[..dim]).map_err(geom)?;
                let h = Hyperplane::new(p, normal, p.reduce(nums[dim])).map_err(geom)?;
                cfg.planes
                    .insert(h, weight.unwrap_or(1))
                    .map_err(|e| err(line, e.to_string()))?;
            }
            Section::Lines => {
                if weight.is_some() {
                    return Err(err(line, "lines carry no weight"));
                }
                expect(2 * dim)?;
                let base = Vector::new(p, &nums[..dim]).map_err(geom)?;
                let dir = Vector::new(p, &nums[dim..]).map_err(geom)?;
                cfg.lines.push(AffineLine::new(p, base, dir).map_err(geom)?);
            }
        }
    }
    let mut cfg = config.ok_or_else(|| err(0, "empty configuration"))?;
    cfg.lines.sort_unstable();
    cfg.lines.dedup();
    Ok(cfg)
}

fn push_row(out: &mut String, coords: &[u32], weight: u64) {
    let row: Vec<String> = coords.iter().map(u32::to_string).collect();
    out.push_str(&row.join(" "));
    if weight != 1 {
        let _ = write!(out, " w={weight}");
    }
    out.push('\n');
}

/// Canonical text: objects sorted, empty sections omitted.
pub fn emit(cfg: &Config) -> String {
    let mut out = format!("p={} dim={}\n", cfg.p.get(), cfg.dim);
    if !cfg.points.is_empty() {
        out.push_str("[points]\n");
        for (q, w) in cfg.points.iter() {
            push_row(&mut out, q.coords(), *w);
        }
    }
    if !cfg.planes.is_empty() {
        out.push_str("[planes]\n");
        for (h, w) in cfg.planes.iter() {
            let mut c = h.normal().coords().to_vec();
            c.push(h.offset());
            push_row(&mut out, &c, *w);
        }
    }
    if !cfg.lines.is_empty() {
        out.push_str("[lines]\n");
        for l in &cfg.lines {
            let mut c = l.base().coords().to_vec();
            c.extend_from_slice(l.direction().coords());
            push_row(&mut out, &c, 1);
        }
    }
    out
}
