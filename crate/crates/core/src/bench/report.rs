//! Bound reports and their CSV/JSON rendering.

use serde::Serialize;

use super::rhs::{rhs, Params, RhsError, Theorem};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: String,
    pub p: u64,
    /// Inputs in report order, then any extra integer statistics.
    pub params: Vec<(String, u64)>,
    pub count: u64,
    pub rhs: f64,
    /// `count / rhs`, absent when `rhs = 0`.
    pub ratio: Option<f64>,
    pub flags: Vec<(String, bool)>,
    pub extra: Vec<(String, f64)>,
}

impl BoundReport {
    /// Evaluates `theorem` at `params` (which must include `p`) against an
    /// empirical count.
    pub fn new(theorem: Theorem, params: &Params, count: u64) -> Result<Self, RhsError> {
        let value = rhs(theorem, params)?;
        let p = params["p"];
        let ordered = theorem
            .parameters()
            .iter()
            .map(|k| (k.to_string(), params[*k]))
            .chain(
                params
                    .iter()
                    .filter(|(k, _)| k.as_str() != "p" && !theorem.parameters().contains(&k.as_str()))
                    .map(|(k, v)| (k.clone(), *v)),
            )
            .collect();
        Ok(BoundReport {
            theorem: theorem.id().to_string(),
            p,
            params: ordered,
            count,
            rhs: value.value,
            ratio: ratio(count, value.value),
            flags: value.flags,
            extra: value.extra,
        })
    }

    pub fn with_flag(mut self, name: &str, value: bool) -> Self {
        self.flags.push((name.to_string(), value));
        self
    }

    pub fn all_flags_hold(&self) -> bool {
        self.flags.iter().all(|f| f.1)
    }
}

pub fn ratio(count: u64, rhs: f64) -> Option<f64> {
    (rhs > 0.0).then(|| count as f64 / rhs)
}

/// 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub const CSV_HEADER: &str = "theorem,p,params,count,rhs,ratio,flags";

pub fn csv_row(r: &BoundReport) -> String {
    let mut params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    params.extend(r.extra.iter().map(|(k, v)| format!("{k}={}", fmt_float(*v))));
    let flags: Vec<String> = r
        .flags
        .iter()
        .map(|(k, v)| format!("{k}={}", u8::from(*v)))
        .collect();
    format!(
        "{},{},{},{},{},{},{}",
        r.theorem,
        r.p,
        params.join(";"),
        r.count,
        fmt_float(r.rhs),
        r.ratio.map(fmt_float).unwrap_or_default(),
        flags.join(";")
    )
}

pub fn to_csv(rows: &[BoundReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

pub fn to_json(rows: &[BoundReport]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("reports serialize");
    s.push('\n');
    s
}
