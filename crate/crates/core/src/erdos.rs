//! Distance sets, distance energies, bisector planes, values of bilinear
//! forms and the wedge-equation incidence reduction, right-triangle counts.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::counting::{CountError, WeightedSet};
use crate::field::Prime;
use crate::geom::{dir_perp, isotropic_directions, AffineLine, GeomError, Hyperplane, ProjPlane3, ProjPoint3, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErdosError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("points form a null pair; the bisector degenerates")]
    NullPair,
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("input contains the origin")]
    OriginInInput,
    #[error("right-triangle identity failed: direct {direct}, via lines {via_lines}")]
    IdentityMismatch { direct: u64, via_lines: u64 },
}

fn distinct(points: &[Vector]) -> Vec<Vector> {
    let mut v = points.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn same_dim(points: &[Vector]) -> Result<(), GeomError> {
    if let Some(first) = points.first() {
        for q in points {
            q.check_dim(first.dim())?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    /// `Δ(S) = {‖s - t‖² : s, t ∈ S}`, including 0.
    pub values: BTreeSet<u32>,
    /// Distinct points of `S` in canonical order.
    pub points: Vec<Vector>,
    /// Number of distinct values `‖s - t‖²` for each point `s`.
    pub pinned: Vec<usize>,
    pub max_pinned: usize,
    pub min_pinned: usize,
    /// Ordered pairs `s ≠ t` at squared distance 0.
    pub zero_distance_pairs: u64,
    pub pinned_includes_zero: bool,
}

/// Distance set and pinned distance counts. Pinned counts include the value
/// 0 (from `t = s` or null pairs) unless `include_zero` is false.
pub fn distance_set(points: &[Vector], include_zero: bool, p: Prime) -> Result<DistanceReport, ErdosError> {
    let s = distinct(points);
    same_dim(&s)?;
    if s.len() < 2 {
        return Err(GeomError::TooFewPoints { needed: 2, found: s.len() }.into());
    }
    let rows: Vec<(BTreeSet<u32>, u64)> = s
        .par_iter()
        .map(|a| {
            let mut vals = BTreeSet::new();
            let mut zeros = 0;
            for b in &s {
                let d = a.sub(b, p).norm2(p);
                if d == 0 && a != b {
                    zeros += 1;
                }
                vals.insert(d);
            }
            (vals, zeros)
        })
        .collect();
    let mut values = BTreeSet::new();
    let mut pinned = Vec::with_capacity(s.len());
    let mut zero_distance_pairs = 0;
    for (vals, zeros) in rows {
        values.extend(vals.iter().copied());
        zero_distance_pairs += zeros;
        let mut c = vals.len();
        if !include_zero && vals.contains(&0) {
            c -= 1;
        }
        pinned.push(c);
    }
    Ok(DistanceReport {
        values,
        max_pinned: *pinned.iter().max().expect("nonempty"),
        min_pinned: *pinned.iter().min().expect("nonempty"),
        points: s,
        pinned,
        zero_distance_pairs,
        pinned_includes_zero: include_zero,
    })
}

/// `E_Δ`: triples `(s, t, t')` with `‖s-t‖² = ‖s-t'‖² ≠ 0`. With
/// `restricted`, also `‖t-t'‖² ≠ 0` (the count `E_Δ*`).
pub fn energy_delta(points: &[Vector], restricted: bool, p: Prime) -> Result<u64, ErdosError> {
    let s = distinct(points);
    same_dim(&s)?;
    let full: u64 = s
        .par_iter()
        .map(|a| {
            let mut hist: HashMap<u32, u64> = HashMap::new();
            for b in &s {
                let d = a.sub(b, p).norm2(p);
                if d != 0 {
                    *hist.entry(d).or_insert(0) += 1;
                }
            }
            hist.values().map(|c| c * c).sum::<u64>()
        })
        .sum();
    if !restricted {
        return Ok(full);
    }
    // Remove triples whose pair (t, t') is null, including t = t'.
    let removed: u64 = s
        .par_iter()
        .map(|t| {
            let mut r = 0u64;
            for t2 in &s {
                if t.sub(t2, p).norm2(p) != 0 {
                    continue;
                }
                for a in &s {
                    let d = a.sub(t, p).norm2(p);
                    if d != 0 && d == a.sub(t2, p).norm2(p) {
                        r += 1;
                    }
                }
            }
            r
        })
        .sum();
    Ok(full - removed)
}

/// The plane of points equidistant from `t` and `t2`:
/// `2 s·(t - t2) = ‖t‖² - ‖t2‖²`.
pub fn bisector_plane(t: &Vector, t2: &Vector, p: Prime) -> Result<Hyperplane, ErdosError> {
    t.check_dim(t2.dim())?;
    if t == t2 {
        return Err(GeomError::CoincidentPoints.into());
    }
    let diff = t.sub(t2, p);
    if diff.norm2(p) == 0 {
        return Err(ErdosError::NullPair);
    }
    Ok(Hyperplane::new(
        p,
        diff.scale(2, p),
        p.sub(t.norm2(p), t2.norm2(p)),
    )?)
}

/// A bilinear form `ω(s, t) = sᵀ M t` on F_p^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormSpec {
    m: [[u32; 2]; 2],
}

impl FormSpec {
    pub fn new(p: Prime, m: [[i64; 2]; 2]) -> Result<Self, ErdosError> {
        let m = m.map(|row| row.map(|x| p.reduce(x)));
        let det = p.sub(p.mul(m[0][0], m[1][1]), p.mul(m[0][1], m[1][0]));
        if det == 0 {
            return Err(ErdosError::DegenerateForm);
        }
        Ok(FormSpec { m })
    }

    pub fn dot(p: Prime) -> Self {
        Self::new(p, [[1, 0], [0, 1]]).expect("identity")
    }

    /// `s ∧ t = s1 t2 - s2 t1`.
    pub fn wedge(p: Prime) -> Self {
        Self::new(p, [[0, 1], [-1, 0]]).expect("symplectic")
    }

    pub fn matrix(&self) -> [[u32; 2]; 2] {
        self.m
    }

    #[inline]
    pub fn eval(&self, s: &Vector, t: &Vector, p: Prime) -> u32 {
        let (s1, s2, t1, t2) = (s.coord(0), s.coord(1), t.coord(0), t.coord(1));
        let m = self.m;
        let a = p.add(p.mul(s1, p.mul(m[0][0], t1)), p.mul(s1, p.mul(m[0][1], t2)));
        let b = p.add(p.mul(s2, p.mul(m[1][0], t1)), p.mul(s2, p.mul(m[1][1], t2)));
        p.add(a, b)
    }
}

fn check_planar(points: &[Vector]) -> Result<(), GeomError> {
    for q in points {
        q.check_dim(2)?;
    }
    Ok(())
}

/// `ω(S) = {ω(s, t) : s, t ∈ S}`.
pub fn form_values(points: &[Vector], form: &FormSpec, p: Prime) -> Result<BTreeSet<u32>, ErdosError> {
    let s = distinct(points);
    check_planar(&s)?;
    Ok(s.iter()
        .flat_map(|a| s.iter().map(move |b| form.eval(a, b, p)))
        .collect())
}

/// Multiplicities of `ω(s, t)` over `S × T`.
pub fn form_histogram(s: &[Vector], t: &[Vector], form: &FormSpec, p: Prime) -> Result<HashMap<u32, u64>, ErdosError> {
    let (s, t) = (distinct(s), distinct(t));
    check_planar(&s)?;
    check_planar(&t)?;
    let mut hist = HashMap::new();
    for a in &s {
        for b in &t {
            *hist.entry(form.eval(a, b, p)).or_insert(0u64) += 1;
        }
    }
    Ok(hist)
}

/// Solutions of `ω(s, t) = ω(s', t')` over `S × S × T × T`, optionally only
/// those with a nonzero common value.
pub fn form_solution_count(
    s: &[Vector],
    t: &[Vector],
    form: &FormSpec,
    nonzero_only: bool,
    p: Prime,
) -> Result<u64, ErdosError> {
    let hist = form_histogram(s, t, form, p)?;
    let mut total = 0u64;
    for (v, c) in hist {
        if nonzero_only && v == 0 {
            continue;
        }
        total = c
            .checked_mul(c)
            .and_then(|x| total.checked_add(x))
            .ok_or(CountError::Overflow)?;
    }
    Ok(total)
}

/// Solutions of `s ∧ t = s' ∧ t' ≠ 0`.
pub fn wedge_solution_count(s: &[Vector], t: &[Vector], p: Prime) -> Result<u64, ErdosError> {
    form_solution_count(s, t, &FormSpec::wedge(p), true, p)
}

/// Solutions of `s·t = s'·t'` with all four variables in `S`.
pub fn dot_solution_count(s: &[Vector], p: Prime) -> Result<u64, ErdosError> {
    form_solution_count(s, s, &FormSpec::dot(p), false, p)
}

/// Weighted points `(s : t')` and planes `(t^⊥ : s'^⊥)` of P^3 whose
/// weighted incidences count the solutions of `s∧t + t'∧s' = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeIncidence {
    pub points: WeightedSet<ProjPoint3>,
    pub planes: WeightedSet<ProjPlane3>,
}

impl WedgeIncidence {
    pub fn weighted_count(&self, p: Prime) -> Result<u64, ErdosError> {
        Ok(projective_weighted_incidences(&self.points, &self.planes, p)?)
    }
}

pub fn wedge_to_incidence(s: &[Vector], t: &[Vector], p: Prime) -> Result<WedgeIncidence, ErdosError> {
    let (s, t) = (distinct(s), distinct(t));
    check_planar(&s)?;
    check_planar(&t)?;
    if s.iter().chain(&t).any(|x| x.is_zero()) {
        return Err(ErdosError::OriginInInput);
    }
    let mut points = Vec::with_capacity(s.len() * t.len());
    let mut planes = Vec::with_capacity(s.len() * t.len());
    for a in &s {
        for b in &t {
            // point (s : t') with s = a, t' = b
            points.push(ProjPoint3::from_residues(p, [a.coord(0), a.coord(1), b.coord(0), b.coord(1)])?);
            // plane (t^⊥ : s'^⊥) with t = b, s' = a
            planes.push(ProjPlane3::from_residues(
                p,
                [b.coord(1), p.neg(b.coord(0)), a.coord(1), p.neg(a.coord(0))],
            )?);
        }
    }
    Ok(WedgeIncidence {
        points: WeightedSet::from_items(points),
        planes: WeightedSet::from_items(planes),
    })
}

/// `Σ w(q) w(π)` over incident pairs of projective points and planes.
pub fn projective_weighted_incidences(
    points: &WeightedSet<ProjPoint3>,
    planes: &WeightedSet<ProjPlane3>,
    p: Prime,
) -> Result<u64, CountError> {
    planes
        .as_slice()
        .par_iter()
        .map(|(h, wh)| {
            let mut sum = 0u64;
            for (q, wq) in points.iter() {
                if h.contains(q, p) {
                    let c = wq.checked_mul(*wh).ok_or(CountError::Overflow)?;
                    sum = sum.checked_add(c).ok_or(CountError::Overflow)?;
                }
            }
            Ok(sum)
        })
        .try_reduce(|| 0, |a, b| a.checked_add(b).ok_or(CountError::Overflow))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineTerm {
    pub vertex: Vector,
    pub line: AffineLine,
    /// Points of the set on the line, minus one (the vertex).
    pub n: u64,
    /// The same for the perpendicular line through the vertex.
    pub n_perp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightTriangleReport {
    /// Triples `(x, y, z)` with `x ≠ z`, `y ≠ z`, `(x - z)·(z - y) = 0`.
    pub n: u64,
    /// `Σ_z Σ_{l ∋ z} n(l) n(l^⊥)`.
    pub via_lines: u64,
    pub per_line: Vec<LineTerm>,
}

pub fn right_triangle_count(points: &[Vector], p: Prime) -> Result<RightTriangleReport, ErdosError> {
    let a = distinct(points);
    check_planar(&a)?;
    if a.len() < 3 {
        return Err(GeomError::TooFewPoints { needed: 3, found: a.len() }.into());
    }
    let direct: u64 = a
        .par_iter()
        .map(|z| {
            let mut c = 0u64;
            for x in &a {
                if x == z {
                    continue;
                }
                let xz = x.sub(z, p);
                for y in &a {
                    if y != z && xz.dot(&z.sub(y, p), p) == 0 {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();

    let mut per_line = Vec::new();
    let mut via_lines = 0u64;
    for z in &a {
        let mut counts: HashMap<Vector, u64> = HashMap::new();
        for x in &a {
            if x != z {
                *counts.entry(x.sub(z, p).canonical_direction(p)?).or_insert(0) += 1;
            }
        }
        let mut dirs: Vec<(Vector, u64)> = counts.iter().map(|(d, c)| (*d, *c)).collect();
        dirs.sort_unstable();
        for (d, n) in dirs {
            let n_perp = counts.get(&dir_perp(&d, p)?).copied().unwrap_or(0);
            via_lines += n * n_perp;
            per_line.push(LineTerm {
                vertex: *z,
                line: AffineLine::new(p, *z, d)?,
                n,
                n_perp,
            });
        }
    }
    if direct != via_lines {
        return Err(ErdosError::IdentityMismatch { direct, via_lines });
    }
    Ok(RightTriangleReport {
        n: direct,
        via_lines,
        per_line,
    })
}

/// An isotropic `y` and constant `c` with every point of `S ⊂ F_p^3` on the
/// plane `{x : x·y = c}`, if one exists.
pub fn semi_isotropic_support(points: &[Vector], p: Prime) -> Result<Option<(Vector, u32)>, ErdosError> {
    let s = distinct(points);
    for q in &s {
        q.check_dim(3)?;
    }
    let Some(first) = s.first() else {
        return Ok(None);
    };
    for y in isotropic_directions(p, 3)? {
        let c = first.dot(&y, p);
        if s.iter().all(|q| q.dot(&y, p) == c) {
            return Ok(Some((y, c)));
        }
    }
    Ok(None)
}
