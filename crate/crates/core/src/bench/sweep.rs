//! Parameter sweeps described in TOML.
//!
//! ```toml
//! construction = "sphere"
//! p = [7, 11, 19, 23]
//! ```
//!
//! Every key other than `construction`, `pipeline` and `form` takes an
//! integer or a list of integers; cells run over the Cartesian product in
//! key order, then list order.

use rayon::prelude::*;
use toml::Value;

use super::pipeline::{self, Form, Quadric};
use super::report::BoundReport;
use super::BenchError;
use crate::constructions::ConstructionSpec;
use crate::counting::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    Count,
    Distances,
    Energy,
    Forms,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub construction: ConstructionSpec,
    pub pipeline: Pipeline,
    pub form: Form,
    pub t: i64,
}

const KEYS: [&str; 9] = ["p", "n", "k", "l", "t", "k0", "m", "dim", "seed"];

fn spec_err(msg: impl Into<String>) -> BenchError {
    BenchError::Spec(msg.into())
}

fn int_list(key: &str, v: &Value) -> Result<Vec<i64>, BenchError> {
    match v {
        Value::Integer(x) => Ok(vec![*x]),
        Value::Array(xs) if !xs.is_empty() => xs
            .iter()
            .map(|x| x.as_integer().ok_or_else(|| spec_err(format!("`{key}` must hold integers"))))
            .collect(),
        _ => Err(spec_err(format!("`{key}` must be an integer or a nonempty list of integers"))),
    }
}

fn nonneg(key: &str, x: i64) -> Result<u64, BenchError> {
    u64::try_from(x).map_err(|_| spec_err(format!("`{key}` must be nonnegative, got {x}")))
}

/// Expands a spec into its cells. `seed` is the default for constructions
/// that draw random numbers.
pub fn parse_spec(text: &str, seed: u64) -> Result<Vec<Cell>, BenchError> {
    if text.trim().is_empty() {
        return Err(BenchError::Usage("empty sweep spec".into()));
    }
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| spec_err(e.to_string()))?;
    let name = table
        .get("construction")
        .and_then(Value::as_str)
        .ok_or_else(|| spec_err("missing string key `construction`"))?
        .to_string();
    let pipeline = match table.get("pipeline").map(|v| v.as_str()) {
        None => None,
        Some(Some("count")) => Some(Pipeline::Count),
        Some(Some("distances")) => Some(Pipeline::Distances),
        Some(Some("energy")) => Some(Pipeline::Energy),
        Some(Some("forms")) => Some(Pipeline::Forms),
        Some(_) => return Err(spec_err("`pipeline` must be one of count, distances, energy, forms")),
    };
    let form = match table.get("form").map(|v| v.as_str()) {
        None | Some(Some("dot")) => Form::Dot,
        Some(Some("wedge")) => Form::Wedge,
        Some(_) => return Err(spec_err("`form` must be dot or wedge")),
    };
    for key in table.keys() {
        if !KEYS.contains(&key.as_str()) && !["construction", "pipeline", "form"].contains(&key.as_str()) {
            return Err(spec_err(format!("unknown key `{key}`")));
        }
    }
    let mut axes: Vec<(&str, Vec<i64>)> = Vec::new();
    for key in KEYS {
        if let Some(v) = table.get(key) {
            axes.push((key, int_list(key, v)?));
        }
    }
    if !axes.iter().any(|(k, _)| *k == "p") {
        return Err(spec_err("missing key `p`"));
    }

    let mut combos: Vec<Vec<(&str, i64)>> = vec![Vec::new()];
    for (key, values) in &axes {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push((key, *v));
                    c
                })
            })
            .collect();
    }

    combos
        .into_iter()
        .map(|combo| {
            let get = |key: &str| combo.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
            let need = |key: &str| {
                get(key).ok_or_else(|| spec_err(format!("construction `{name}` needs `{key}`")))
            };
            let p = nonneg("p", need("p")?)?;
            let t = get("t").unwrap_or(1);
            let (construction, default) = match name.as_str() {
                "sphere" => (ConstructionSpec::Sphere { p }, Pipeline::Count),
                "coprime" => (
                    ConstructionSpec::CoprimeLattice {
                        n: nonneg("n", need("n")?)?,
                        p,
                    },
                    Pipeline::Forms,
                ),
                "elekes" => (
                    ConstructionSpec::Elekes {
                        n: nonneg("n", need("n")?)?,
                        p,
                    },
                    Pipeline::Count,
                ),
                "semi-isotropic" => (
                    ConstructionSpec::SemiIsotropic {
                        k: nonneg("k", need("k")?)?,
                        l: nonneg("l", need("l")?)?,
                        p,
                        seed: get("seed").map(|s| nonneg("seed", s)).transpose()?,
                    },
                    Pipeline::Distances,
                ),
                "cylinder" => (
                    ConstructionSpec::Cylinder {
                        p,
                        t,
                        k0: nonneg("k0", need("k0")?)?,
                        m: nonneg("m", need("m")?)? as usize,
                    },
                    Pipeline::Energy,
                ),
                "random" => (
                    ConstructionSpec::Random {
                        p,
                        dim: nonneg("dim", need("dim")?)? as usize,
                        n: nonneg("n", need("n")?)? as usize,
                        seed: match get("seed") {
                            Some(s) => nonneg("seed", s)?,
                            None => seed,
                        },
                    },
                    Pipeline::Distances,
                ),
                other => return Err(spec_err(format!("unknown construction `{other}`"))),
            };
            Ok(Cell {
                construction,
                pipeline: pipeline.unwrap_or(default),
                form,
                t,
            })
        })
        .collect()
}

pub fn run_cell(cell: &Cell) -> Result<Vec<BoundReport>, BenchError> {
    let cfg = cell.construction.build()?;
    match cell.pipeline {
        Pipeline::Count => pipeline::incidences(&cfg, Strategy::Bucketed, None),
        Pipeline::Distances => pipeline::distances(&cfg, true),
        Pipeline::Energy => {
            let quadric = match cell.construction {
                ConstructionSpec::Cylinder { .. } => Quadric::Sphere(cell.t),
                _ => Quadric::Paraboloid,
            };
            Ok(pipeline::energy(&cfg, quadric)?.1)
        }
        Pipeline::Forms => pipeline::forms(&cfg, cell.form),
    }
}

/// Runs all cells, concurrently, and returns rows in cell order.
pub fn run(cells: &[Cell]) -> Result<Vec<BoundReport>, BenchError> {
    let results: Vec<Result<Vec<BoundReport>, BenchError>> = cells.par_iter().map(run_cell).collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_product_in_key_order() {
        let cells = parse_spec("construction = \"elekes\"\np = [23, 29]\nn = [2, 3]\n", 0).unwrap();
        let got: Vec<_> = cells.iter().map(|c| c.construction.clone()).collect();
        assert_eq!(
            got,
            vec![
                ConstructionSpec::Elekes { n: 2, p: 23 },
                ConstructionSpec::Elekes { n: 3, p: 23 },
                ConstructionSpec::Elekes { n: 2, p: 29 },
                ConstructionSpec::Elekes { n: 3, p: 29 },
            ]
        );
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(parse_spec("  \n", 0), Err(BenchError::Usage(_))));
        assert!(matches!(parse_spec("construction = \"sphere\"\n", 0), Err(BenchError::Spec(_))));
        assert!(matches!(parse_spec("construction = \"blob\"\np = 7\n", 0), Err(BenchError::Spec(_))));
        assert!(matches!(parse_spec("construction = \"sphere\"\np = 7\nq = 1\n", 0), Err(BenchError::Spec(_))));
        assert!(matches!(parse_spec("p = [", 0), Err(BenchError::Spec(_))));
    }

    #[test]
    fn elekes_sweep_counts() {
        let cells = parse_spec("construction = \"elekes\"\np = 37\nn = [2, 3, 4]\n", 0).unwrap();
        let rows = run(&cells).unwrap();
        let t3: Vec<u64> = rows.iter().filter(|r| r.theorem == "T3").map(|r| r.count).collect();
        assert_eq!(t3, vec![16, 81, 256]);
    }
}
