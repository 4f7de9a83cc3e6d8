//! Count → bound pipelines over a configuration.

use std::collections::BTreeSet;

use serde::Serialize;

use super::config::Config;
use super::report::BoundReport;
use super::rhs::{Params, Theorem};
use super::BenchError;
use crate::counting::{count_point_line_2d, count_point_plane_with, count_restricted, rich_lines, weighted_incidences, Strategy};
use crate::energy::{additive_energy, rectangle_energy_paraboloid, rectangle_energy_sphere, EnergyReport};
use crate::erdos::{
    distance_set, energy_delta, form_solution_count, form_values, right_triangle_count, semi_isotropic_support,
    wedge_to_incidence, FormSpec,
};
use crate::geom::{spanned_lines, Vector};

fn params(p: u64, kv: &[(&str, u64)]) -> Params {
    let mut m: Params = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    m.insert("p".into(), p);
    m
}

fn require_dim(cfg: &Config, dims: &[usize]) -> Result<(), BenchError> {
    if dims.contains(&cfg.dim) {
        Ok(())
    } else {
        Err(BenchError::Usage(format!(
            "this pipeline needs dim in {dims:?}, the configuration has dim={}",
            cfg.dim
        )))
    }
}

/// Incidence counts with the matching bounds: in dimension 3 against
/// planes (and, if lines are given, with incidences along them discounted);
/// in dimension 2 against lines, optionally with the `k`-rich line count.
pub fn incidences(cfg: &Config, strategy: Strategy, rich: Option<usize>) -> Result<Vec<BoundReport>, BenchError> {
    require_dim(cfg, &[2, 3])?;
    let p = cfg.p.as_u64();
    let mut rows = Vec::new();
    if cfg.dim == 3 {
        let r = count_point_plane_with(&cfg.points, &cfg.planes, cfg.p, strategy)?;
        let (q, pi, k) = (r.distinct_points as u64, r.distinct_planes as u64, r.k as u64);
        if cfg.points.is_unweighted() && cfg.planes.is_unweighted() {
            rows.push(BoundReport::new(Theorem::T1, &params(p, &[("Q", q), ("Pi", pi), ("k", k)]), r.total)?);
        } else {
            let w = r.point_weight.max(r.plane_weight);
            rows.push(BoundReport::new(
                Theorem::T1C,
                &params(p, &[("W", w), ("w0", r.max_weight), ("k", k)]),
                r.total,
            )?);
        }
        let restricted = count_restricted(&cfg.points, &cfg.planes, &cfg.lines, cfg.p)?;
        let kstar = restricted.k_star.unwrap_or(0) as u64;
        rows.push(BoundReport::new(
            Theorem::T1B,
            &params(p, &[("Q", q), ("Pi", pi), ("kstar", kstar), ("forbidden", cfg.lines.len() as u64)]),
            restricted.total,
        )?);
    } else {
        let points = cfg.point_list();
        let lines = cfg.plane_list();
        let i = count_point_line_2d(&points, &lines, cfg.p)?;
        let (q, l) = (points.len() as u64, lines.len() as u64);
        rows.push(BoundReport::new(Theorem::T3, &params(p, &[("Q", q), ("L", l)]), i)?);
        rows.push(BoundReport::new(Theorem::Vinh, &params(p, &[("Q", q), ("L", l)]), i)?);
        if let Some((a, b)) = product_sides(&points) {
            rows.push(BoundReport::new(Theorem::T2, &params(p, &[("A", a), ("B", b), ("L", l)]), i)?);
        }
        if let Some(k) = rich {
            let m = rich_lines(&points, k, cfg.p)?.len() as u64;
            rows.push(BoundReport::new(Theorem::KRich, &params(p, &[("n", q), ("k", k as u64)]), m)?);
        }
    }
    Ok(rows)
}

/// `(|A|, |B|)` with `|A| ≤ |B|` when the planar set is a product `A × B`.
fn product_sides(points: &[Vector]) -> Option<(u64, u64)> {
    if points.is_empty() {
        return None;
    }
    let xs: BTreeSet<u32> = points.iter().map(|q| q.coord(0)).collect();
    let ys: BTreeSet<u32> = points.iter().map(|q| q.coord(1)).collect();
    let (a, b) = (xs.len() as u64, ys.len() as u64);
    (a * b == points.len() as u64).then(|| (a.min(b), a.max(b)))
}

fn on_one_isotropic_line(points: &[Vector], p: crate::field::Prime) -> bool {
    spanned_lines(points, p)
        .into_iter()
        .any(|(l, c)| c == points.len() && l.is_isotropic(p))
}

/// Pinned distances with the matching lower bound (dimension 2 or 3).
pub fn distances(cfg: &Config, include_zero: bool) -> Result<Vec<BoundReport>, BenchError> {
    require_dim(cfg, &[2, 3])?;
    let p = cfg.p.as_u64();
    let points = cfg.point_list();
    let r = distance_set(&points, include_zero, cfg.p)?;
    let s = points.len() as u64;
    let delta = r.values.len() as u64;
    let row = if cfg.dim == 2 {
        BoundReport::new(
            Theorem::T43,
            &params(p, &[("S", s), ("delta", delta), ("min_pinned", r.min_pinned as u64)]),
            r.max_pinned as u64,
        )?
        .with_flag("not_on_isotropic_line", !on_one_isotropic_line(&points, cfg.p))
    } else {
        let e = energy_delta(&points, false, cfg.p)?;
        let e_star = energy_delta(&points, true, cfg.p)?;
        BoundReport::new(
            Theorem::T42,
            &params(
                p,
                &[
                    ("S", s),
                    ("delta", delta),
                    ("min_pinned", r.min_pinned as u64),
                    ("E_delta", e),
                    ("E_delta_star", e_star),
                ],
            ),
            r.max_pinned as u64,
        )?
        .with_flag("not_semi_isotropic", semi_isotropic_support(&points, cfg.p)?.is_none())
    };
    Ok(vec![row])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadric {
    Paraboloid,
    Sphere(i64),
}

/// Additive energy of a set on a quadric, with the matching upper bound.
pub fn energy(cfg: &Config, quadric: Quadric) -> Result<(EnergyReport, Vec<BoundReport>), BenchError> {
    require_dim(cfg, &[3, 4])?;
    let points = cfg.point_list();
    let r = match quadric {
        Quadric::Paraboloid => rectangle_energy_paraboloid(&points, cfg.p)?,
        Quadric::Sphere(t) => rectangle_energy_sphere(&points, t, cfg.p)?,
    };
    let theorem = match (quadric, cfg.dim) {
        (Quadric::Paraboloid, 3) => Theorem::T54,
        (Quadric::Paraboloid, _) => Theorem::T53,
        (Quadric::Sphere(_), 3) => Theorem::T55,
        (Quadric::Sphere(_), _) => Theorem::T56,
    };
    let row = BoundReport::new(
        theorem,
        &params(
            cfg.p.as_u64(),
            &[
                ("A", points.len() as u64),
                ("k0", r.k0 as u64),
                ("rectangles", r.rectangles),
                ("ordinary", r.ordinary),
                ("semi_degenerate", r.semi_degenerate),
                ("degenerate", r.degenerate),
            ],
        ),
        r.energy,
    )?;
    Ok((r, vec![row]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Dot,
    Wedge,
}

/// Distinct values of a bilinear form on a planar set, with solution
/// counts of `ω(s,t) = ω(s',t')`.
pub fn forms(cfg: &Config, form: Form) -> Result<Vec<BoundReport>, BenchError> {
    require_dim(cfg, &[2])?;
    let points = cfg.point_list();
    let spec = match form {
        Form::Dot => FormSpec::dot(cfg.p),
        Form::Wedge => FormSpec::wedge(cfg.p),
    };
    let values = form_values(&points, &spec, cfg.p)?;
    let all = form_solution_count(&points, &points, &spec, false, cfg.p)?;
    let nonzero = form_solution_count(&points, &points, &spec, true, cfg.p)?;
    let row = BoundReport::new(
        Theorem::T41,
        &params(
            cfg.p.as_u64(),
            &[("S", points.len() as u64), ("solutions", all), ("solutions_nonzero", nonzero)],
        ),
        values.len() as u64,
    )?
    .with_flag("omega_nonzero", values.iter().any(|&v| v != 0));
    Ok(vec![row])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: u64,
    pub actual: u64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn check(name: &str, expected: u64, actual: u64) -> Check {
    Check {
        name: name.to_string(),
        expected,
        actual,
    }
}

/// Largest set for which `verify` runs the quadruple-loop oracles.
pub const QUARTIC_ORACLE_LIMIT: usize = 150;

/// Recomputes every applicable count by a nested-loop oracle. The
/// quadruple-loop checks run only up to [`QUARTIC_ORACLE_LIMIT`] points.
pub fn verify(cfg: &Config) -> Result<Vec<Check>, BenchError> {
    let p = cfg.p;
    let points = cfg.point_list();
    let mut out = Vec::new();
    if !cfg.planes.is_empty() && cfg.dim >= 2 {
        let fast = weighted_incidences(cfg.points.as_slice(), cfg.planes.as_slice(), p, Strategy::Bucketed)?;
        let mut slow = 0u64;
        for (h, wh) in cfg.planes.iter() {
            for (q, wq) in cfg.points.iter() {
                if h.normal().dot(q, p) == h.offset() {
                    slow += wq * wh;
                }
            }
        }
        out.push(check("incidences", slow, fast));
    }
    if cfg.dim == 3 && !cfg.lines.is_empty() {
        let fast = count_restricted(&cfg.points, &cfg.planes, &cfg.lines, p)?.total;
        let mut slow = 0u64;
        for (h, wh) in cfg.planes.iter() {
            for (q, wq) in cfg.points.iter() {
                let along = cfg.lines.iter().any(|l| l.contains(q, p) && l.lies_in(h, p));
                if h.contains(q, p) && !along {
                    slow += wq * wh;
                }
            }
        }
        out.push(check("restricted_incidences", slow, fast));
    }
    if cfg.dim == 2 && points.len() >= 3 {
        let r = right_triangle_count(&points, p);
        let slow = naive_right_triangles(&points, p);
        let fast = match r {
            Ok(r) => r.via_lines,
            Err(crate::erdos::ErdosError::IdentityMismatch { via_lines, .. }) => via_lines,
            Err(e) => return Err(e.into()),
        };
        out.push(check("right_triangles", slow, fast));
    }
    let small = points.len() <= QUARTIC_ORACLE_LIMIT;
    if small && cfg.dim == 2 && !points.iter().any(Vector::is_zero) && !points.is_empty() {
        let fast = wedge_to_incidence(&points, &points, p)?.weighted_count(p)?;
        let mut slow = 0u64;
        for s in &points {
            for t in &points {
                for s2 in &points {
                    for t2 in &points {
                        let lhs = p.sub(p.mul(s.coord(0), t.coord(1)), p.mul(s.coord(1), t.coord(0)));
                        let rhs = p.sub(p.mul(s2.coord(0), t2.coord(1)), p.mul(s2.coord(1), t2.coord(0)));
                        if lhs == rhs {
                            slow += 1;
                        }
                    }
                }
            }
        }
        out.push(check("wedge_incidences", slow, fast));
    }
    if small && !points.is_empty() {
        let fast = additive_energy(&points, &points, p)?;
        let mut slow = 0u64;
        for x in &points {
            for y in &points {
                for z in &points {
                    for u in &points {
                        if x.add(y, p) == z.add(u, p) {
                            slow += 1;
                        }
                    }
                }
            }
        }
        out.push(check("additive_energy", slow, fast));
    }
    Ok(out)
}

fn naive_right_triangles(a: &[Vector], p: crate::field::Prime) -> u64 {
    let mut n = 0;
    for z in a {
        for x in a {
            for y in a {
                if x != z && y != z && x.sub(z, p).dot(&z.sub(y, p), p) == 0 {
                    n += 1;
                }
            }
        }
    }
    n
}
