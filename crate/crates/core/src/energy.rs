//! Additive energy, rectangles on the paraboloid and on spheres, slice
//! energies and the Fourier restriction ratio.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::field::Prime;
use crate::geom::{spanned_lines, GeomError, Vector};
use crate::quadrics::{lift, slice, Paraboloid, Sphere};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("point {0:?} is not on the paraboloid")]
    OffParaboloid(Vector),
    #[error("point {0:?} is not on the sphere")]
    OffSphere(Vector),
    #[error("sphere radius must be nonzero")]
    ZeroRadius,
    #[error("quadruple is not a rectangle")]
    NotARectangle,
    #[error("energy {energy} disagrees with the orthogonality count {criterion}")]
    CriterionMismatch { energy: u64, criterion: u64 },
    #[error("rectangle hit {0} times, outside [4, 16]")]
    HitCount(u64),
    #[error("|g| exceeds 1 at {0:?}")]
    SupNorm(Vector),
    #[error("point {0:?} appears twice in the function")]
    DuplicatePoint(Vector),
    #[error("character sum over p^{dim} points is too large at p = {p}")]
    TooLarge { p: u32, dim: usize },
}

fn distinct(points: &[Vector]) -> Vec<Vector> {
    let mut v = points.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn common_dim(a: &[Vector], b: &[Vector]) -> Result<Option<usize>, GeomError> {
    let Some(d) = a.iter().chain(b).next().map(Vector::dim) else {
        return Ok(None);
    };
    for x in a.iter().chain(b) {
        x.check_dim(d)?;
    }
    Ok(Some(d))
}

/// `E(A, B)`: quadruples in `A × B × A × B` with `x + y = z + u`.
pub fn additive_energy(a: &[Vector], b: &[Vector], p: Prime) -> Result<u64, EnergyError> {
    let (a, b) = (distinct(a), distinct(b));
    common_dim(&a, &b)?;
    let mut sums: HashMap<Vector, u64> = HashMap::with_capacity(a.len() * b.len());
    for x in &a {
        for y in &b {
            *sums.entry(x.add(y, p)).or_insert(0) += 1;
        }
    }
    Ok(sums.values().map(|c| c * c).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RectangleClass {
    Ordinary,
    SemiDegenerate,
    Degenerate,
}

/// Classifies the rectangle with diagonals `xy` and `zu`, i.e. the vertex
/// cycle `x, z, y, u`. The four vertices must be distinct, satisfy
/// `x + y = z + u`, and have orthogonal sides at every vertex.
pub fn classify_rectangle(x: &Vector, y: &Vector, z: &Vector, u: &Vector, p: Prime) -> Result<RectangleClass, EnergyError> {
    let d = x.dim();
    for q in [y, z, u] {
        q.check_dim(d)?;
    }
    let vs = [x, y, z, u];
    for i in 0..4 {
        for j in i + 1..4 {
            if vs[i] == vs[j] {
                return Err(EnergyError::NotARectangle);
            }
        }
    }
    if x.add(y, p) != z.add(u, p) {
        return Err(EnergyError::NotARectangle);
    }
    let cycle = [x, z, y, u];
    for i in 0..4 {
        let (prev, cur, next) = (cycle[(i + 3) % 4], cycle[i], cycle[(i + 1) % 4]);
        if prev.sub(cur, p).dot(&next.sub(cur, p), p) != 0 {
            return Err(EnergyError::NotARectangle);
        }
    }
    // Opposite sides are parallel, so two directions describe all four.
    let a = z.sub(x, p);
    let b = y.sub(z, p);
    let iso_a = a.norm2(p) == 0;
    let iso_b = b.norm2(p) == 0;
    match (iso_a, iso_b) {
        (false, false) => Ok(RectangleClass::Ordinary),
        (true, false) | (false, true) => Ok(RectangleClass::SemiDegenerate),
        (true, true) if a.is_parallel_to(&b, p) => Ok(RectangleClass::Degenerate),
        // Two orthogonal isotropic sides spanning a plane.
        (true, true) => Err(EnergyError::NotARectangle),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnergyReport {
    /// Ordered quadruples with `x + y = z + u`.
    pub energy: u64,
    /// Triples `(x, y, z)` passing the orthogonality criterion; equals `energy`.
    pub criterion_count: u64,
    /// Quadruples with `{x, y} = {z, u}`.
    pub trivial: u64,
    /// Other quadruples with a repeated vertex (`x = y` or `z = u`).
    pub repeated_vertex: u64,
    /// Rectangles with four distinct vertices, counted once each.
    pub rectangles: u64,
    pub ordinary: u64,
    pub semi_degenerate: u64,
    pub degenerate: u64,
    /// Maximum number of points on one isotropic line.
    pub k0: usize,
    pub min_hits: u64,
    pub max_hits: u64,
}

fn k0(a: &[Vector], p: Prime) -> usize {
    let Some(first) = a.first() else {
        return 0;
    };
    let best = spanned_lines(a, p)
        .into_iter()
        .filter(|(l, _)| l.is_isotropic(p))
        .map(|(_, c)| c)
        .max();
    match best {
        Some(c) => c,
        None => {
            let d = first.dim();
            if d >= 3 || (d == 2 && p.residue_mod4() == 1) {
                1
            } else {
                0
            }
        }
    }
}

/// Shared rectangle census over triples passing `orth`, with fourth vertex
/// `x + y - z`. `classify_on` maps a vertex to the space where side isotropy
/// is read.
fn census(
    a: &[Vector],
    p: Prime,
    orth: impl Fn(&Vector, &Vector, &Vector) -> bool + Sync,
    classify_on: impl Fn(&Vector) -> Vector + Sync,
) -> Result<EnergyReport, EnergyError> {
    let members: std::collections::HashSet<Vector> = a.iter().copied().collect();
    let energy = additive_energy(a, a, p)?;

    type Key = ((Vector, Vector), (Vector, Vector));
    let rows: Vec<(u64, u64, u64, HashMap<Key, u64>)> = a
        .par_iter()
        .map(|x| {
            let mut crit = 0u64;
            let mut trivial = 0u64;
            let mut repeated = 0u64;
            let mut keys: HashMap<Key, u64> = HashMap::new();
            for y in a {
                for z in a {
                    if !orth(x, y, z) {
                        continue;
                    }
                    let u = x.add(y, p).sub(z, p);
                    if !members.contains(&u) {
                        continue;
                    }
                    crit += 1;
                    if (z == x && u == *y) || (z == y && u == *x) {
                        trivial += 1;
                    } else if x == y || *z == u {
                        repeated += 1;
                    } else {
                        let d1 = if x < y { (*x, *y) } else { (*y, *x) };
                        let d2 = if *z < u { (*z, u) } else { (u, *z) };
                        let key = if d1 < d2 { (d1, d2) } else { (d2, d1) };
                        *keys.entry(key).or_insert(0) += 1;
                    }
                }
            }
            (crit, trivial, repeated, keys)
        })
        .collect();

    let mut report = EnergyReport {
        energy,
        ..EnergyReport::default()
    };
    let mut all: HashMap<Key, u64> = HashMap::new();
    for (crit, trivial, repeated, keys) in rows {
        report.criterion_count += crit;
        report.trivial += trivial;
        report.repeated_vertex += repeated;
        for (k, c) in keys {
            *all.entry(k).or_insert(0) += c;
        }
    }
    if report.criterion_count != energy {
        return Err(EnergyError::CriterionMismatch {
            energy,
            criterion: report.criterion_count,
        });
    }
    let mut keys: Vec<(Key, u64)> = all.into_iter().collect();
    keys.sort_unstable();
    report.min_hits = keys.iter().map(|(_, c)| *c).min().unwrap_or(0);
    report.max_hits = keys.iter().map(|(_, c)| *c).max().unwrap_or(0);
    for ((d1, d2), hits) in &keys {
        if !(4..=16).contains(hits) {
            return Err(EnergyError::HitCount(*hits));
        }
        let [x, y, z, u] = [d1.0, d1.1, d2.0, d2.1].map(|v| classify_on(&v));
        match classify_rectangle(&x, &y, &z, &u, p)? {
            RectangleClass::Ordinary => report.ordinary += 1,
            RectangleClass::SemiDegenerate => report.semi_degenerate += 1,
            RectangleClass::Degenerate => report.degenerate += 1,
        }
    }
    report.rectangles = keys.len() as u64;
    report.k0 = k0(a, p);
    Ok(report)
}

/// Energy of a set on the paraboloid `{(x, x·x)}`, checked against the
/// criterion `(z - x)·(z - y) = 0` on horizontal parts with
/// `lift(x + y - z) ∈ A`. Rectangles are classified on horizontal parts.
pub fn rectangle_energy_paraboloid(a: &[Vector], p: Prime) -> Result<EnergyReport, EnergyError> {
    let a = distinct(a);
    let Some(d) = common_dim(&a, &[])? else {
        return Ok(EnergyReport::default());
    };
    let par = Paraboloid::new(p, d).map_err(|_| GeomError::UnsupportedDimension(d))?;
    if let Some(x) = a.iter().find(|x| !par.contains(x)) {
        return Err(EnergyError::OffParaboloid(*x));
    }
    let horiz = |v: &Vector| v.horizontal().expect("dimension at least 2");
    census(
        &a,
        p,
        |x, y, z| {
            let (x, y, z) = (horiz(x), horiz(y), horiz(z));
            z.sub(&x, p).dot(&z.sub(&y, p), p) == 0
        },
        horiz,
    )
}

/// Energy of a set on `S^{d-1}_t`, `t ≠ 0`, checked against the criterion
/// `(z - x)·(z - y) = 0` with `x + y - z ∈ A`.
pub fn rectangle_energy_sphere(a: &[Vector], t: i64, p: Prime) -> Result<EnergyReport, EnergyError> {
    if p.reduce(t) == 0 {
        return Err(EnergyError::ZeroRadius);
    }
    let a = distinct(a);
    let Some(d) = common_dim(&a, &[])? else {
        return Ok(EnergyReport::default());
    };
    let sphere = Sphere::new(p, d, t).map_err(|_| GeomError::UnsupportedDimension(d))?;
    if let Some(x) = a.iter().find(|x| !sphere.contains(x)) {
        return Err(EnergyError::OffSphere(*x));
    }
    census(
        &a,
        p,
        |x, y, z| {
            let orth = z.sub(x, p).dot(&z.sub(y, p), p) == 0;
            debug_assert_eq!(orth, sphere.contains(&x.add(y, p).sub(z, p)));
            orth
        },
        |v| *v,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceEnergies {
    /// `(h, E(S_h))` for every nonempty slice, in increasing `h`.
    pub per_height: Vec<(u32, u64)>,
    /// `Σ_h E(S_h)^{1/4}`.
    pub quarter_sum: f64,
}

/// Energies of the horizontal slices of `S ⊂ F_p^d`, each lifted to the
/// paraboloid.
pub fn slice_energy_sum(s: &[Vector], p: Prime) -> Result<SliceEnergies, EnergyError> {
    let s = distinct(s);
    common_dim(&s, &[])?;
    let mut heights: Vec<u32> = s.iter().map(Vector::last).collect();
    heights.sort_unstable();
    heights.dedup();
    let mut per_height = Vec::with_capacity(heights.len());
    let mut quarter_sum = 0.0;
    for h in heights {
        let e = rectangle_energy_paraboloid(&slice(&s, h, p)?, p)?.energy;
        quarter_sum += (e as f64).powf(0.25);
        per_height.push((h, e));
    }
    Ok(SliceEnergies {
        per_height,
        quarter_sum,
    })
}

/// Largest `p^d` for which the character sums are evaluated.
pub const MAX_FOURIER_POINTS: u64 = 28_561;

/// A complex function on F_p^d given by its values on finitely many points.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseFunction {
    p: Prime,
    dim: usize,
    entries: Vec<(Vector, Complex64)>,
}

impl SparseFunction {
    pub fn new(p: Prime, dim: usize, entries: Vec<(Vector, Complex64)>) -> Result<Self, EnergyError> {
        if !(3..=4).contains(&dim) {
            return Err(GeomError::UnsupportedDimension(dim).into());
        }
        if (p.as_u64()).pow(dim as u32) > MAX_FOURIER_POINTS {
            return Err(EnergyError::TooLarge { p: p.get(), dim });
        }
        let mut entries = entries;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(EnergyError::DuplicatePoint(w[0].0));
            }
        }
        for (x, g) in &entries {
            x.check_dim(dim)?;
            if g.norm() > 1.0 + 1e-12 {
                return Err(EnergyError::SupNorm(*x));
            }
        }
        entries.retain(|(_, g)| *g != Complex64::new(0.0, 0.0));
        Ok(SparseFunction { p, dim, entries })
    }

    /// The indicator function of a set.
    pub fn indicator(p: Prime, dim: usize, points: &[Vector]) -> Result<Self, EnergyError> {
        Self::new(
            p,
            dim,
            distinct(points).into_iter().map(|x| (x, Complex64::new(1.0, 0.0))).collect(),
        )
    }

    pub fn support(&self) -> Vec<Vector> {
        self.entries.iter().map(|(x, _)| *x).collect()
    }

    pub fn entries(&self) -> &[(Vector, Complex64)] {
        &self.entries
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ĝ(ξ) = Σ_x g(x) e_p(x·ξ)` with `e_p(k) = exp(2πik/p)`.
    pub fn transform_at(&self, xi: &Vector, table: &[Complex64]) -> Complex64 {
        self.entries
            .iter()
            .map(|(x, g)| g * table[x.dot(xi, self.p) as usize])
            .sum()
    }

    /// `Σ_x |g(x)|²`.
    pub fn l2_squared(&self) -> f64 {
        self.entries.iter().map(|(_, g)| g.norm_sqr()).sum()
    }
}

/// `e_p(k)` for `k ∈ [0, p)`.
pub fn character_table(p: Prime) -> Vec<Complex64> {
    let n = p.get();
    (0..n)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect()
}

pub const NORMALIZATION: &str =
    "counting measure on the paraboloid divided by p^(d-1); ghat(xi) = sum_x g(x) e_p(x.xi), e_p(k) = exp(2 pi i k / p)";

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictionReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, or `None` when `rhs = 0`.
    pub ratio: Option<f64>,
    pub support_size: usize,
    pub slice_quarter_sum: f64,
    pub normalization: &'static str,
}

/// Compares the `L²(dσ)` norm of `ĝ` on the paraboloid with
/// `|S|^{1/2} + |S|^{3/8} p^{-(d-2)/8} (Σ_h E(S_h)^{1/4})^{1/2}`.
pub fn restriction_ratio(g: &SparseFunction) -> Result<RestrictionReport, EnergyError> {
    let p = g.p;
    let d = g.dim;
    let table = character_table(p);
    let horizontals: Vec<Vector> = crate::geom::all_points(p, d - 1)?;
    // Fixed summation order: per-ξ terms collected, then summed sequentially.
    let terms: Vec<f64> = horizontals
        .par_iter()
        .map(|u| g.transform_at(&lift(u, p).expect("dimension"), &table).norm_sqr())
        .collect();
    let sum: f64 = terms.iter().sum();
    let lhs = (sum / (p.as_u64() as f64).powi(d as i32 - 1)).sqrt();

    let support = g.support();
    let n = support.len() as f64;
    let slices = slice_energy_sum(&support, p)?;
    let rhs = n.sqrt()
        + n.powf(0.375) * (p.as_u64() as f64).powf(-((d - 2) as f64) / 8.0) * slices.quarter_sum.sqrt();
    Ok(RestrictionReport {
        lhs,
        rhs,
        ratio: (rhs > 0.0).then(|| lhs / rhs),
        support_size: support.len(),
        slice_quarter_sum: slices.quarter_sum,
        normalization: NORMALIZATION,
    })
}

/// `(p^{-d} Σ_{ξ ∈ F_p^d} |ĝ(ξ)|², Σ_x |g(x)|²)`.
pub fn parseval_sides(g: &SparseFunction) -> Result<(f64, f64), EnergyError> {
    let p = g.p;
    let table = character_table(p);
    let all = crate::geom::all_points(p, g.dim)?;
    let terms: Vec<f64> = all
        .par_iter()
        .map(|xi| g.transform_at(xi, &table).norm_sqr())
        .collect();
    let lhs = terms.iter().sum::<f64>() / (p.as_u64() as f64).powi(g.dim as i32);
    Ok((lhs, g.l2_squared()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrics::paraboloid_lift;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn v(p: Prime, c: &[i64]) -> Vector {
        Vector::new(p, c).unwrap()
    }

    #[test]
    fn additive_energy_examples() {
        let p = pr(7);
        let one = [v(p, &[3])];
        assert_eq!(additive_energy(&one, &one, p).unwrap(), 1);
        let two = [v(p, &[0]), v(p, &[1])];
        assert_eq!(additive_energy(&two, &two, p).unwrap(), 6);
        let all: Vec<Vector> = (0..7).map(|x| v(p, &[x])).collect();
        assert_eq!(additive_energy(&all, &all, p).unwrap(), 343);
    }

    #[test]
    fn paraboloid_grid_energy() {
        let p = pr(7);
        let base = [v(p, &[0, 0]), v(p, &[1, 0]), v(p, &[0, 1]), v(p, &[1, 1])];
        let a = paraboloid_lift(&base, p).unwrap();
        let r = rectangle_energy_paraboloid(&a, p).unwrap();
        assert_eq!(r.energy, 36);
        assert_eq!(r.trivial, 28);
        assert_eq!(r.rectangles, 1);
        assert_eq!(r.ordinary, 1);
        assert!(matches!(
            rectangle_energy_paraboloid(&[v(p, &[1, 0, 0])], p),
            Err(EnergyError::OffParaboloid(_))
        ));
    }

    #[test]
    fn frame_on_unit_three_sphere() {
        let p = pr(7);
        let mut a = Vec::new();
        for i in 0..4 {
            let e = Vector::unit(4, i).unwrap();
            a.push(e);
            a.push(e.neg(p));
        }
        let r = rectangle_energy_sphere(&a, 1, p).unwrap();
        assert_eq!(r.energy, 168);
        assert_eq!(r.trivial, 120);
        assert_eq!(
            r.energy,
            r.trivial + r.repeated_vertex + 8 * r.rectangles
        );
    }

    #[test]
    fn isotropic_line_is_all_degenerate() {
        let p = pr(5);
        // The whole isotropic line through 0 with direction (1,2).
        let base: Vec<Vector> = (0..5).map(|k| v(p, &[k, 2 * k])).collect();
        let a = paraboloid_lift(&base, p).unwrap();
        let r = rectangle_energy_paraboloid(&a, p).unwrap();
        assert_eq!(r.energy, 125);
        assert_eq!(r.k0, 5);
        assert_eq!(r.ordinary + r.semi_degenerate, 0);
        assert_eq!(r.degenerate, r.rectangles);
    }

    #[test]
    fn classify_examples() {
        let p = pr(7);
        let (x, y, z, u) = (v(p, &[0, 0]), v(p, &[1, 1]), v(p, &[1, 0]), v(p, &[0, 1]));
        assert_eq!(classify_rectangle(&x, &y, &z, &u, p), Ok(RectangleClass::Ordinary));
        assert_eq!(
            classify_rectangle(&x, &z, &y, &u, p),
            Err(EnergyError::NotARectangle)
        );
        let p5 = pr(5);
        let l: Vec<Vector> = (0..4).map(|k| v(p5, &[k, 2 * k])).collect();
        assert_eq!(
            classify_rectangle(&l[0], &l[3], &l[1], &l[2], p5),
            Ok(RectangleClass::Degenerate)
        );
        // Two parallel isotropic lines a non-isotropic step apart.
        let step = v(p5, &[0, 0, 1]);
        let (x, z) = (v(p5, &[0, 0, 0]), v(p5, &[1, 2, 0]));
        let (u, y) = (x.add(&step, p5), z.add(&step, p5));
        assert_eq!(
            classify_rectangle(&x, &y, &z, &u, p5),
            Ok(RectangleClass::SemiDegenerate)
        );
    }

    #[test]
    fn slice_sum_examples() {
        let p = pr(7);
        assert_eq!(slice_energy_sum(&[], p).unwrap().quarter_sum, 0.0);
        let s = [v(p, &[0, 0, 3]), v(p, &[1, 0, 3])];
        let r = slice_energy_sum(&s, p).unwrap();
        assert_eq!(r.per_height, vec![(3, 6)]);
        assert!((r.quarter_sum - 6f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn single_point_has_unit_norm() {
        let p = pr(5);
        let g = SparseFunction::indicator(p, 3, &[v(p, &[1, 2, 3])]).unwrap();
        let r = restriction_ratio(&g).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!(r.ratio.unwrap() > 0.0);
        let zero = SparseFunction::new(p, 3, vec![]).unwrap();
        let r = restriction_ratio(&zero).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ratio), (0.0, 0.0, None));
    }

    #[test]
    fn fourier_guards() {
        let p = pr(5);
        let x = v(p, &[0, 0, 0]);
        assert!(matches!(
            SparseFunction::new(p, 3, vec![(x, Complex64::new(2.0, 0.0))]),
            Err(EnergyError::SupNorm(_))
        ));
        assert!(matches!(
            SparseFunction::new(p, 3, vec![(x, Complex64::new(1.0, 0.0)), (x, Complex64::new(0.5, 0.0))]),
            Err(EnergyError::DuplicatePoint(_))
        ));
        assert!(matches!(
            SparseFunction::new(pr(17), 4, vec![]),
            Err(EnergyError::TooLarge { .. })
        ));
    }
}
