//! Exact incidence counters: point–plane (plain, restricted, weighted),
//! planar point–line, collinearity statistics and rich lines.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::field::Prime;
use crate::geom::{spanned_lines, AffineLine, GeomError, Hyperplane, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("weight must be a positive integer")]
    ZeroWeight,
    #[error("integer overflow while counting")]
    Overflow,
    #[error("k must be at least 2, got {0}")]
    BadRichness(usize),
}

/// A finite multiset stored as distinct items with positive integer
/// weights, kept sorted so iteration order is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedSet<T> {
    items: Vec<(T, u64)>,
}

pub type WeightedPointSet = WeightedSet<Vector>;
pub type WeightedPlaneSet = WeightedSet<Hyperplane>;

impl<T> Default for WeightedSet<T> {
    fn default() -> Self {
        WeightedSet { items: Vec::new() }
    }
}

impl<T: Ord + Copy> WeightedSet<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every item with weight 1; repeated items accumulate weight.
    pub fn from_items(items: impl IntoIterator<Item = T>) -> Self {
        Self::from_weighted(items.into_iter().map(|t| (t, 1))).expect("unit weights")
    }

    pub fn from_weighted(items: impl IntoIterator<Item = (T, u64)>) -> Result<Self, CountError> {
        let mut v: Vec<(T, u64)> = items.into_iter().collect();
        if v.iter().any(|&(_, w)| w == 0) {
            return Err(CountError::ZeroWeight);
        }
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(T, u64)> = Vec::with_capacity(v.len());
        for (t, w) in v {
            match merged.last_mut() {
                Some(last) if last.0 == t => {
                    last.1 = last.1.checked_add(w).ok_or(CountError::Overflow)?;
                }
                _ => merged.push((t, w)),
            }
        }
        Ok(WeightedSet { items: merged })
    }

    pub fn insert(&mut self, item: T, weight: u64) -> Result<(), CountError> {
        if weight == 0 {
            return Err(CountError::ZeroWeight);
        }
        match self.items.binary_search_by(|probe| probe.0.cmp(&item)) {
            Ok(i) => {
                self.items[i].1 = self.items[i].1.checked_add(weight).ok_or(CountError::Overflow)?
            }
            Err(i) => self.items.insert(i, (item, weight)),
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = &(T, u64)> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[(T, u64)] {
        &self.items
    }

    pub fn weight_of(&self, item: &T) -> u64 {
        self.items
            .binary_search_by(|probe| probe.0.cmp(item))
            .map_or(0, |i| self.items[i].1)
    }

    /// Number of distinct items.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.items.iter().map(|x| x.1).sum()
    }

    pub fn max_weight(&self) -> u64 {
        self.items.iter().map(|x| x.1).max().unwrap_or(0)
    }

    pub fn is_unweighted(&self) -> bool {
        self.items.iter().all(|x| x.1 == 1)
    }

    pub fn distinct(&self) -> Vec<T> {
        self.items.iter().map(|x| x.0).collect()
    }
}

/// Which counting path to use. Both are exact; `Bucketed` groups planes by
/// normal and joins on sorted dot products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Bucketed,
    Naive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceReport {
    pub total: u64,
    pub restricted: bool,
    pub distinct_points: usize,
    pub distinct_planes: usize,
    pub point_weight: u64,
    pub plane_weight: u64,
    /// Largest weight over points and planes (1 when unweighted).
    pub max_weight: u64,
    /// Maximum number of collinear points, ignoring weights.
    pub k: usize,
    pub k_witness: Option<AffineLine>,
    /// Maximum number of points on a line outside the forbidden set.
    pub k_star: Option<usize>,
    pub k_star_witness: Option<AffineLine>,
    pub forbidden_lines: usize,
    /// `|Q| < p^2` for the distinct point count.
    pub points_below_p2: bool,
    /// `W / w0 < p^2` with `W` the larger total weight.
    pub weight_ratio_below_p2: bool,
}

fn check_dims<'a>(
    points: impl IntoIterator<Item = &'a Vector>,
    planes: impl IntoIterator<Item = &'a Hyperplane>,
    dim: usize,
) -> Result<(), GeomError> {
    for q in points {
        q.check_dim(dim)?;
    }
    for h in planes {
        h.normal().check_dim(dim)?;
    }
    Ok(())
}

fn naive_incidences(
    points: &[(Vector, u64)],
    planes: &[(Hyperplane, u64)],
    p: Prime,
) -> Result<u64, CountError> {
    let mut total = 0u64;
    for (h, wh) in planes {
        for (q, wq) in points {
            if h.contains(q, p) {
                let c = wq.checked_mul(*wh).ok_or(CountError::Overflow)?;
                total = total.checked_add(c).ok_or(CountError::Overflow)?;
            }
        }
    }
    Ok(total)
}

fn bucketed_incidences(
    points: &[(Vector, u64)],
    planes: &[(Hyperplane, u64)],
    p: Prime,
) -> Result<u64, CountError> {
    let mut by_normal: BTreeMap<Vector, Vec<(u32, u64)>> = BTreeMap::new();
    for (h, w) in planes {
        by_normal.entry(*h.normal()).or_default().push((h.offset(), *w));
    }
    let buckets: Vec<(Vector, Vec<(u32, u64)>)> = by_normal.into_iter().collect();
    buckets
        .par_iter()
        .map(|(normal, offsets)| {
            let mut levels: Vec<(u32, u64)> =
                points.iter().map(|(q, w)| (normal.dot(q, p), *w)).collect();
            levels.sort_unstable_by_key(|x| x.0);
            let mut merged: Vec<(u32, u64)> = Vec::with_capacity(levels.len());
            for (v, w) in levels {
                match merged.last_mut() {
                    Some(last) if last.0 == v => {
                        last.1 = last.1.checked_add(w).ok_or(CountError::Overflow)?
                    }
                    _ => merged.push((v, w)),
                }
            }
            let mut sum = 0u64;
            for (c, wh) in offsets {
                if let Ok(i) = merged.binary_search_by_key(c, |x| x.0) {
                    let t = merged[i].1.checked_mul(*wh).ok_or(CountError::Overflow)?;
                    sum = sum.checked_add(t).ok_or(CountError::Overflow)?;
                }
            }
            Ok(sum)
        })
        .try_reduce(|| 0, |a, b| a.checked_add(b).ok_or(CountError::Overflow))
}

/// Weighted point–hyperplane incidences in any dimension.
pub fn weighted_incidences(
    points: &[(Vector, u64)],
    planes: &[(Hyperplane, u64)],
    p: Prime,
    strategy: Strategy,
) -> Result<u64, CountError> {
    match strategy {
        Strategy::Bucketed => bucketed_incidences(points, planes, p),
        Strategy::Naive => naive_incidences(points, planes, p),
    }
}

/// Maximum number of collinear points among distinct points, with a line
/// achieving it. Ties resolve to the smallest canonical line.
pub fn max_collinear(points: &[Vector], p: Prime) -> Result<(usize, AffineLine), CountError> {
    let lines = spanned_lines(points, p);
    lines
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(l, k)| (k, l))
        .ok_or_else(|| {
            let mut u = points.to_vec();
            u.sort_unstable();
            u.dedup();
            CountError::Geom(GeomError::TooFewPoints {
                needed: 2,
                found: u.len(),
            })
        })
}

/// Lower estimate of the collinearity number from lines through a random
/// sample of anchor points. Exact when every point is an anchor.
pub fn max_collinear_sampled(points: &[Vector], anchors: usize, seed: u64, p: Prime) -> usize {
    let mut uniq = points.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() < 2 {
        return uniq.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<&Vector> = uniq.choose_multiple(&mut rng, anchors.min(uniq.len())).collect();
    chosen
        .par_iter()
        .map(|a| {
            let mut dirs: std::collections::HashMap<Vector, usize> = Default::default();
            for b in &uniq {
                if b != *a {
                    let d = b.sub(a, p).canonical_direction(p).expect("distinct");
                    *dirs.entry(d).or_insert(0) += 1;
                }
            }
            dirs.values().max().map_or(1, |m| m + 1)
        })
        .max()
        .unwrap_or(1)
}

fn base_report(
    q: &WeightedPointSet,
    planes: &WeightedPlaneSet,
    total: u64,
    p: Prime,
) -> Result<IncidenceReport, CountError> {
    let distinct = q.distinct();
    let (k, k_witness) = if distinct.len() >= 2 {
        let (k, l) = max_collinear(&distinct, p)?;
        (k, Some(l))
    } else {
        (distinct.len(), None)
    };
    let p2 = p.as_u64() * p.as_u64();
    let w = q.total_weight().max(planes.total_weight());
    let w0 = q.max_weight().max(planes.max_weight()).max(1);
    Ok(IncidenceReport {
        total,
        restricted: false,
        distinct_points: distinct.len(),
        distinct_planes: planes.len(),
        point_weight: q.total_weight(),
        plane_weight: planes.total_weight(),
        max_weight: w0,
        k,
        k_witness,
        k_star: None,
        k_star_witness: None,
        forbidden_lines: 0,
        points_below_p2: (distinct.len() as u64) < p2,
        weight_ratio_below_p2: (w as u128) < w0 as u128 * p2 as u128,
    })
}

/// Weighted point–plane incidences in F_p^3: the sum of `w(q)·w(π)` over
/// incident pairs.
pub fn count_point_plane(
    q: &WeightedPointSet,
    planes: &WeightedPlaneSet,
    p: Prime,
) -> Result<IncidenceReport, CountError> {
    count_point_plane_with(q, planes, p, Strategy::Bucketed)
}

pub fn count_point_plane_with(
    q: &WeightedPointSet,
    planes: &WeightedPlaneSet,
    p: Prime,
    strategy: Strategy,
) -> Result<IncidenceReport, CountError> {
    check_dims(
        q.iter().map(|x| &x.0),
        planes.iter().map(|x| &x.0),
        3,
    )?;
    let total = weighted_incidences(q.as_slice(), planes.as_slice(), p, strategy)?;
    base_report(q, planes, total, p)
}

/// Incidences `(q, π)` with `q ∈ π`, discounting every pair for which some
/// forbidden line `l` has `q ∈ l ⊂ π`.
pub fn count_restricted(
    q: &WeightedPointSet,
    planes: &WeightedPlaneSet,
    forbidden: &[AffineLine],
    p: Prime,
) -> Result<IncidenceReport, CountError> {
    check_dims(
        q.iter().map(|x| &x.0),
        planes.iter().map(|x| &x.0),
        3,
    )?;
    for l in forbidden {
        l.base().check_dim(3)?;
    }
    let mut forbidden_set: Vec<AffineLine> = forbidden.to_vec();
    forbidden_set.sort_unstable();
    forbidden_set.dedup();

    let total = weighted_incidences(q.as_slice(), planes.as_slice(), p, Strategy::Bucketed)?;
    let mut excluded: HashSet<(usize, usize)> = HashSet::new();
    for l in &forbidden_set {
        let on_line: Vec<usize> = q
            .iter()
            .enumerate()
            .filter(|(_, (pt, _))| l.contains(pt, p))
            .map(|(i, _)| i)
            .collect();
        if on_line.is_empty() {
            continue;
        }
        for (j, (h, _)) in planes.iter().enumerate() {
            if l.lies_in(h, p) {
                excluded.extend(on_line.iter().map(|&i| (i, j)));
            }
        }
    }
    let mut removed = 0u64;
    for (i, j) in excluded {
        let c = q.as_slice()[i]
            .1
            .checked_mul(planes.as_slice()[j].1)
            .ok_or(CountError::Overflow)?;
        removed = removed.checked_add(c).ok_or(CountError::Overflow)?;
    }

    let mut report = base_report(q, planes, total - removed, p)?;
    report.restricted = true;
    report.forbidden_lines = forbidden_set.len();
    let best = spanned_lines(&q.distinct(), p)
        .into_iter()
        .filter(|(l, _)| forbidden_set.binary_search(l).is_err())
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
    match best {
        Some((l, k)) => {
            report.k_star = Some(k);
            report.k_star_witness = Some(l);
        }
        None => report.k_star = Some(q.len().min(1)),
    }
    Ok(report)
}

/// Planar point–line incidences `|{(q, l) : q ∈ l}|`; both inputs are lists.
pub fn count_point_line_2d(points: &[Vector], lines: &[Hyperplane], p: Prime) -> Result<u64, CountError> {
    check_dims(points, lines, 2)?;
    let pts: Vec<(Vector, u64)> = points.iter().map(|&x| (x, 1)).collect();
    let ls: Vec<(Hyperplane, u64)> = lines.iter().map(|&x| (x, 1)).collect();
    weighted_incidences(&pts, &ls, p, Strategy::Bucketed)
}

/// Every line carrying at least `k` points of the set, with its exact
/// count, sorted by line.
pub fn rich_lines(points: &[Vector], k: usize, p: Prime) -> Result<Vec<(AffineLine, usize)>, CountError> {
    if k < 2 {
        return Err(CountError::BadRichness(k));
    }
    let mut out: Vec<(AffineLine, usize)> = spanned_lines(points, p)
        .into_iter()
        .filter(|&(_, c)| c >= k)
        .collect();
    out.sort_unstable();
    Ok(out)
}
