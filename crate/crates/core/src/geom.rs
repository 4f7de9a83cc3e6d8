//! Affine and projective geometry over F_p.
//!
//! Affine objects live in F_p^d for `1 <= d <= 4` and are stored with
//! canonical residues so that equality is bitwise. Homogeneous objects
//! (directions, projective points and planes of P^3, Plücker lines) are
//! scaled so their first nonzero coordinate is 1.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::field::{FieldError, Prime};

pub const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("spanning vectors are linearly dependent")]
    DependentVectors,
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A vector (equivalently an affine point) of F_p^d.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    dim: u8,
    c: [u32; MAX_DIM],
}

pub type AffinePoint = Vector;

impl Vector {
    pub fn new(p: Prime, coords: &[i64]) -> Result<Self, GeomError> {
        let mut v = Self::zero(coords.len())?;
        for (slot, &x) in v.c.iter_mut().zip(coords) {
            *slot = p.reduce(x);
        }
        Ok(v)
    }

    /// Builds a vector from residues, reducing each modulo `p`.
    pub fn from_residues(p: Prime, coords: &[u32]) -> Result<Self, GeomError> {
        let mut v = Self::zero(coords.len())?;
        for (slot, &x) in v.c.iter_mut().zip(coords) {
            *slot = x % p.get();
        }
        Ok(v)
    }

    pub fn zero(dim: usize) -> Result<Self, GeomError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(GeomError::UnsupportedDimension(dim));
        }
        Ok(Vector {
            dim: dim as u8,
            c: [0; MAX_DIM],
        })
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Result<Self, GeomError> {
        let mut v = Self::zero(dim)?;
        v.c[i] = 1;
        Ok(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.c[..self.dim as usize]
    }

    #[inline]
    pub fn coord(&self, i: usize) -> u32 {
        self.coords()[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&x| x == 0)
    }

    pub fn check_dim(&self, expected: usize) -> Result<(), GeomError> {
        if self.dim() != expected {
            return Err(GeomError::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }

    #[inline]
    fn zip_with(&self, other: &Vector, f: impl Fn(u32, u32) -> u32) -> Vector {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..self.dim as usize {
            out.c[i] = f(self.c[i], other.c[i]);
        }
        out
    }

    #[inline]
    pub fn add(&self, other: &Vector, p: Prime) -> Vector {
        self.zip_with(other, |a, b| p.add(a, b))
    }

    #[inline]
    pub fn sub(&self, other: &Vector, p: Prime) -> Vector {
        self.zip_with(other, |a, b| p.sub(a, b))
    }

    #[inline]
    pub fn scale(&self, k: u32, p: Prime) -> Vector {
        let mut out = *self;
        for x in out.c[..self.dim as usize].iter_mut() {
            *x = p.mul(*x, k);
        }
        out
    }

    #[inline]
    pub fn neg(&self, p: Prime) -> Vector {
        self.scale(p.get() - 1, p)
    }

    #[inline]
    pub fn dot(&self, other: &Vector, p: Prime) -> u32 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = 0u64;
        for i in 0..self.dim as usize {
            acc += self.c[i] as u64 * other.c[i] as u64;
        }
        (acc % p.as_u64()) as u32
    }

    /// The quadratic form `v·v`.
    #[inline]
    pub fn norm2(&self, p: Prime) -> u32 {
        self.dot(self, p)
    }

    /// Index of the first nonzero coordinate.
    pub fn pivot(&self) -> Option<usize> {
        self.coords().iter().position(|&x| x != 0)
    }

    /// Scales so that the first nonzero coordinate equals 1.
    pub fn canonical_direction(&self, p: Prime) -> Result<Vector, GeomError> {
        let i = self.pivot().ok_or(GeomError::ZeroVector)?;
        Ok(self.scale(p.inv(self.c[i])?, p))
    }

    /// Appends a coordinate, raising the dimension by one.
    pub fn extend(&self, value: u32) -> Result<Vector, GeomError> {
        let d = self.dim();
        if d == MAX_DIM {
            return Err(GeomError::UnsupportedDimension(d + 1));
        }
        let mut out = *self;
        out.c[d] = value;
        out.dim += 1;
        Ok(out)
    }

    /// Drops the last coordinate.
    pub fn horizontal(&self) -> Result<Vector, GeomError> {
        if self.dim == 1 {
            return Err(GeomError::UnsupportedDimension(0));
        }
        let mut out = *self;
        out.dim -= 1;
        out.c[out.dim as usize] = 0;
        Ok(out)
    }

    pub fn last(&self) -> u32 {
        self.c[self.dim as usize - 1]
    }

    pub fn is_parallel_to(&self, other: &Vector, p: Prime) -> bool {
        match (self.canonical_direction(p), other.canonical_direction(p)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Every point of F_p^d in lexicographic order.
pub fn all_points(p: Prime, dim: usize) -> Result<Vec<Vector>, GeomError> {
    let zero = Vector::zero(dim)?;
    let q = p.get();
    let total = (q as usize).pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = zero;
    for _ in 0..total {
        out.push(cur);
        for i in (0..dim).rev() {
            cur.c[i] += 1;
            if cur.c[i] < q {
                break;
            }
            cur.c[i] = 0;
        }
    }
    Ok(out)
}

/// Canonical representatives of all directions (points of P^{d-1}).
pub fn all_directions(p: Prime, dim: usize) -> Result<Vec<Vector>, GeomError> {
    Ok(all_points(p, dim)?
        .into_iter()
        .filter(|v| v.pivot().is_some_and(|i| v.c[i] == 1))
        .collect())
}

/// Canonical isotropic directions of F_p^d.
pub fn isotropic_directions(p: Prime, dim: usize) -> Result<Vec<Vector>, GeomError> {
    Ok(all_directions(p, dim)?
        .into_iter()
        .filter(|v| v.norm2(p) == 0)
        .collect())
}

/// Affine hyperplane `{x : normal·x = offset}`: a line in F_p^2, a plane
/// in F_p^3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vector,
    offset: u32,
}

pub type AffinePlane = Hyperplane;
pub type Line2 = Hyperplane;

impl Hyperplane {
    pub fn new(p: Prime, normal: Vector, offset: u32) -> Result<Self, GeomError> {
        let i = normal.pivot().ok_or(GeomError::ZeroVector)?;
        let s = p.inv(normal.c[i])?;
        Ok(Hyperplane {
            normal: normal.scale(s, p),
            offset: p.mul(offset % p.get(), s),
        })
    }

    /// Hyperplane through `point` with the given normal.
    pub fn through(p: Prime, point: &Vector, normal: Vector) -> Result<Self, GeomError> {
        point.check_dim(normal.dim())?;
        Self::new(p, normal, normal.dot(point, p))
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    #[inline]
    pub fn contains(&self, q: &Vector, p: Prime) -> bool {
        self.normal.dot(q, p) == self.offset
    }
}

impl fmt::Debug for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}·x = {}", self.normal, self.offset)
    }
}

/// All affine hyperplanes of F_p^d: `p · (p^d - 1)/(p - 1)` of them.
pub fn all_hyperplanes(p: Prime, dim: usize) -> Result<Vec<Hyperplane>, GeomError> {
    let mut out = Vec::new();
    for n in all_directions(p, dim)? {
        for c in p.residues() {
            out.push(Hyperplane { normal: n, offset: c });
        }
    }
    Ok(out)
}

/// `q ∈ π` for a point and an affine hyperplane of the same dimension.
pub fn incident(q: &Vector, plane: &Hyperplane, p: Prime) -> Result<bool, GeomError> {
    q.check_dim(plane.dim())?;
    Ok(plane.contains(q, p))
}

/// Affine line `base + λ·direction`. The direction is scaled to have a
/// leading 1 and the base is the unique point of the line whose coordinate
/// at that pivot is 0, so equal point sets give equal values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineLine {
    direction: Vector,
    base: Vector,
}

impl AffineLine {
    pub fn new(p: Prime, base: Vector, direction: Vector) -> Result<Self, GeomError> {
        base.check_dim(direction.dim())?;
        let direction = direction.canonical_direction(p)?;
        let i = direction.pivot().expect("nonzero");
        let base = base.sub(&direction.scale(base.c[i], p), p);
        Ok(AffineLine { direction, base })
    }

    pub fn through(p: Prime, a: &Vector, b: &Vector) -> Result<Self, GeomError> {
        a.check_dim(b.dim())?;
        if a == b {
            return Err(GeomError::CoincidentPoints);
        }
        Self::new(p, *a, b.sub(a, p))
    }

    pub fn base(&self) -> &Vector {
        &self.base
    }

    pub fn direction(&self) -> &Vector {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn point_at(&self, lambda: u32, p: Prime) -> Vector {
        self.base.add(&self.direction.scale(lambda, p), p)
    }

    /// All `p` points, ordered by parameter.
    pub fn points(&self, p: Prime) -> impl Iterator<Item = Vector> + '_ {
        p.residues().map(move |l| self.point_at(l, p))
    }

    pub fn contains(&self, q: &Vector, p: Prime) -> bool {
        if q.dim() != self.dim() {
            return false;
        }
        let i = self.direction.pivot().expect("nonzero");
        let d = q.sub(&self.base, p);
        d == self.direction.scale(d.c[i], p)
    }

    /// `l ⊂ π`: the base lies on the plane and the direction is parallel to it.
    pub fn lies_in(&self, plane: &Hyperplane, p: Prime) -> bool {
        self.dim() == plane.dim()
            && plane.contains(&self.base, p)
            && plane.normal.dot(&self.direction, p) == 0
    }

    pub fn is_isotropic(&self, p: Prime) -> bool {
        self.direction.norm2(p) == 0
    }

    pub fn is_parallel_to(&self, other: &AffineLine) -> bool {
        self.direction == other.direction
    }
}

impl fmt::Debug for AffineLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + λ{:?}", self.base, self.direction)
    }
}

pub fn line_through(a: &Vector, b: &Vector, p: Prime) -> Result<AffineLine, GeomError> {
    AffineLine::through(p, a, b)
}

/// Every affine line of F_p^d with direction in `directions`.
pub fn lines_with_directions(
    p: Prime,
    directions: &[Vector],
) -> Result<Vec<AffineLine>, GeomError> {
    let mut out = Vec::new();
    for dir in directions {
        let i = dir.pivot().ok_or(GeomError::ZeroVector)?;
        for base in all_points(p, dir.dim())? {
            if base.c[i] == 0 {
                out.push(AffineLine::new(p, base, *dir)?);
            }
        }
    }
    Ok(out)
}

/// Lines spanned by pairs of distinct points, each with the number of
/// points of the set it carries. Duplicated input points count once.
pub fn spanned_lines(points: &[Vector], p: Prime) -> HashMap<AffineLine, usize> {
    let mut uniq: Vec<Vector> = points.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    let mut lines = HashMap::new();
    let mut dirs: HashMap<Vector, usize> = HashMap::new();
    for (i, a) in uniq.iter().enumerate() {
        dirs.clear();
        for (j, b) in uniq.iter().enumerate() {
            if i != j {
                let d = b.sub(a, p).canonical_direction(p).expect("distinct");
                *dirs.entry(d).or_insert(0) += 1;
            }
        }
        for (d, &c) in dirs.iter() {
            let line = AffineLine::new(p, *a, *d).expect("nonzero");
            lines.entry(line).or_insert(c + 1);
        }
    }
    lines
}

pub fn is_isotropic(v: &Vector, p: Prime) -> Result<bool, GeomError> {
    if v.is_zero() {
        return Err(GeomError::ZeroVector);
    }
    Ok(v.norm2(p) == 0)
}

/// Perpendicular direction in F_p^2: `(d1, d2) ↦ (-d2, d1)`, canonically scaled.
pub fn dir_perp(d: &Vector, p: Prime) -> Result<Vector, GeomError> {
    d.check_dim(2)?;
    if d.is_zero() {
        return Err(GeomError::ZeroVector);
    }
    let v = Vector::from_residues(p, &[p.neg(d.coord(1)), d.coord(0)])?;
    v.canonical_direction(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneClass {
    Ordinary,
    SemiIsotropic,
    FullyIsotropic,
}

/// Isotropy type of the linear 2-plane `span{u, v}` from its Gram matrix.
pub fn classify_plane(u: &Vector, v: &Vector, p: Prime) -> Result<PlaneClass, GeomError> {
    u.check_dim(v.dim())?;
    if !independent(u, v, p) {
        return Err(GeomError::DependentVectors);
    }
    let (a, b, c) = (u.norm2(p), u.dot(v, p), v.norm2(p));
    if a == 0 && b == 0 && c == 0 {
        return Ok(PlaneClass::FullyIsotropic);
    }
    let det = p.sub(p.mul(a, c), p.mul(b, b));
    Ok(if det == 0 {
        PlaneClass::SemiIsotropic
    } else {
        PlaneClass::Ordinary
    })
}

/// `classify_plane` restricted to F_p^4.
pub fn classify_plane4(u: &Vector, v: &Vector, p: Prime) -> Result<PlaneClass, GeomError> {
    u.check_dim(4)?;
    classify_plane(u, v, p)
}

pub fn independent(u: &Vector, v: &Vector, p: Prime) -> bool {
    let d = u.dim();
    for i in 0..d {
        for j in i + 1..d {
            let m = p.sub(p.mul(u.c[i], v.c[j]), p.mul(u.c[j], v.c[i]));
            if m != 0 {
                return true;
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullPairStats {
    pub null_ordered_pairs: u64,
    pub ordered_pairs: u64,
    pub fraction: f64,
    /// Largest number of points of the set on one isotropic line spanned by
    /// a pair of its points; 0 when no pair is null.
    pub max_on_isotropic_line: usize,
    pub witness: Option<AffineLine>,
}

pub fn null_pair_stats(points: &[Vector], p: Prime) -> Result<NullPairStats, GeomError> {
    let mut uniq = points.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() < 2 {
        return Err(GeomError::TooFewPoints {
            needed: 2,
            found: uniq.len(),
        });
    }
    let n = uniq.len() as u64;
    let mut null = 0u64;
    for (i, a) in uniq.iter().enumerate() {
        for b in &uniq[i + 1..] {
            if a.sub(b, p).norm2(p) == 0 {
                null += 2;
            }
        }
    }
    let best = spanned_lines(&uniq, p)
        .into_iter()
        .filter(|(l, _)| l.is_isotropic(p))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
    let ordered = n * (n - 1);
    Ok(NullPairStats {
        null_ordered_pairs: null,
        ordered_pairs: ordered,
        fraction: null as f64 / ordered as f64,
        max_on_isotropic_line: best.map_or(0, |b| b.1),
        witness: best.map(|b| b.0),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullTriangle {
    pub is_null: bool,
    /// The isotropic line carrying all three vertices when `is_null`.
    pub collinear_witness: Option<AffineLine>,
}

pub fn null_triangle_check(
    r: &Vector,
    s: &Vector,
    t: &Vector,
    p: Prime,
) -> Result<NullTriangle, GeomError> {
    r.check_dim(s.dim())?;
    r.check_dim(t.dim())?;
    if r == s || s == t || r == t {
        return Err(GeomError::CoincidentPoints);
    }
    let null = |a: &Vector, b: &Vector| a.sub(b, p).norm2(p) == 0;
    let is_null = null(r, s) && null(s, t) && null(t, r);
    let collinear_witness = if is_null {
        let line = AffineLine::through(p, r, s)?;
        (line.contains(t, p) && line.is_isotropic(p)).then_some(line)
    } else {
        None
    };
    Ok(NullTriangle {
        is_null,
        collinear_witness,
    })
}

fn canonical_scale<const N: usize>(mut v: [u32; N], p: Prime) -> Result<[u32; N], GeomError> {
    let i = v.iter().position(|&x| x != 0).ok_or(GeomError::ZeroVector)?;
    let s = p.inv(v[i])?;
    for x in v.iter_mut() {
        *x = p.mul(*x, s);
    }
    Ok(v)
}

fn reduce_all<const N: usize>(v: [i64; N], p: Prime) -> [u32; N] {
    v.map(|x| p.reduce(x))
}

/// A point of P^3 in homogeneous coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint3([u32; 4]);

/// A plane of P^3, given by its covector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPlane3([u32; 4]);

impl ProjPoint3 {
    pub fn new(p: Prime, coords: [i64; 4]) -> Result<Self, GeomError> {
        Ok(ProjPoint3(canonical_scale(reduce_all(coords, p), p)?))
    }

    pub fn from_residues(p: Prime, coords: [u32; 4]) -> Result<Self, GeomError> {
        Ok(ProjPoint3(canonical_scale(coords.map(|x| x % p.get()), p)?))
    }

    pub fn coords(&self) -> [u32; 4] {
        self.0
    }

    pub fn lies_on(&self, plane: &ProjPlane3, p: Prime) -> bool {
        dot4(&self.0, &plane.0, p) == 0
    }
}

impl ProjPlane3 {
    pub fn new(p: Prime, coords: [i64; 4]) -> Result<Self, GeomError> {
        Ok(ProjPlane3(canonical_scale(reduce_all(coords, p), p)?))
    }

    pub fn from_residues(p: Prime, coords: [u32; 4]) -> Result<Self, GeomError> {
        Ok(ProjPlane3(canonical_scale(coords.map(|x| x % p.get()), p)?))
    }

    pub fn coords(&self) -> [u32; 4] {
        self.0
    }

    pub fn contains(&self, q: &ProjPoint3, p: Prime) -> bool {
        q.lies_on(self, p)
    }
}

fn dot4(a: &[u32; 4], b: &[u32; 4], p: Prime) -> u32 {
    let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (s % p.as_u64()) as u32
}

/// All `p^3 + p^2 + p + 1` points of P^3.
pub fn all_proj_points3(p: Prime) -> Vec<ProjPoint3> {
    all_directions(p, 4)
        .expect("dimension 4")
        .into_iter()
        .map(|v| ProjPoint3([v.c[0], v.c[1], v.c[2], v.c[3]]))
        .collect()
}

/// All planes of P^3 (same count as points, by duality).
pub fn all_proj_planes3(p: Prime) -> Vec<ProjPlane3> {
    all_proj_points3(p)
        .into_iter()
        .map(|q| ProjPlane3(q.0))
        .collect()
}

/// Plücker coordinates `(p01, p02, p03, p12, p13, p23)` of a line of P^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PluckerLine([u32; 6]);

const PLUCKER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl PluckerLine {
    pub fn coords(&self) -> [u32; 6] {
        self.0
    }

    /// Membership in the Klein quadric: `p01 p23 - p02 p13 + p03 p12 = 0`.
    pub fn satisfies_relation(&self, p: Prime) -> bool {
        let c = self.0;
        let v = p.add(
            p.sub(p.mul(c[0], c[5]), p.mul(c[1], c[4])),
            p.mul(c[2], c[3]),
        );
        v == 0
    }

    /// Whether the line passes through `q`: the 3×3 minors of the matrix
    /// stacking `q` on any two spanning points vanish, i.e.
    /// `q_i p_jk - q_j p_ik + q_k p_ij = 0` for every triple `i<j<k`.
    pub fn passes_through(&self, q: &ProjPoint3, p: Prime) -> bool {
        let pij = |i: usize, j: usize| -> u32 {
            let idx = PLUCKER_PAIRS
                .iter()
                .position(|&(a, b)| a == i && b == j)
                .expect("pair");
            self.0[idx]
        };
        let q = q.0;
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            let v = p.add(
                p.sub(p.mul(q[i], pij(j, k)), p.mul(q[j], pij(i, k))),
                p.mul(q[k], pij(i, j)),
            );
            if v != 0 {
                return false;
            }
        }
        true
    }
}

/// The Klein map: the line spanned by two points of P^3, as a point of the
/// Klein quadric.
pub fn klein_map(a: &ProjPoint3, b: &ProjPoint3, p: Prime) -> Result<PluckerLine, GeomError> {
    let mut c = [0u32; 6];
    for (slot, &(i, j)) in c.iter_mut().zip(PLUCKER_PAIRS.iter()) {
        *slot = p.sub(p.mul(a.0[i], b.0[j]), p.mul(a.0[j], b.0[i]));
    }
    canonical_scale(c, p)
        .map(PluckerLine)
        .map_err(|_| GeomError::CoincidentPoints)
}

/// All lines of P^3 as Plücker points, sorted: `(p^2+1)(p^2+p+1)` of them.
pub fn all_lines_p3(p: Prime) -> Vec<PluckerLine> {
    let pts = all_proj_points3(p);
    let mut out: Vec<PluckerLine> = Vec::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            out.push(klein_map(a, b, p).expect("distinct"));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The pencil of lines through `point` inside `plane`: the line of the
/// Klein quadric along which the α-plane of the point meets the β-plane of
/// the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pencil {
    pub point: ProjPoint3,
    pub plane: ProjPlane3,
    /// Two distinct members; together they span the Klein image of the pencil.
    pub spanning: [PluckerLine; 2],
    helpers: [ProjPoint3; 2],
}

impl Pencil {
    /// All `p + 1` lines of the pencil.
    pub fn lines(&self, p: Prime) -> Vec<PluckerLine> {
        let [b1, b2] = self.helpers.map(|h| h.0);
        let mut out = vec![self.spanning[1]];
        for lambda in p.residues() {
            let mut r = [0u32; 4];
            for i in 0..4 {
                r[i] = p.add(b1[i], p.mul(lambda, b2[i]));
            }
            let r = ProjPoint3(canonical_scale(r, p).expect("independent helpers"));
            out.push(klein_map(&self.point, &r, p).expect("helper off the point"));
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Intersection of the α-plane of `q` with the β-plane of `plane`: the
/// pencil of lines through `q` in `plane` when `q ∈ plane`, nothing otherwise.
pub fn alpha_beta_meet(q: &ProjPoint3, plane: &ProjPlane3, p: Prime) -> Option<Pencil> {
    if !q.lies_on(plane, p) {
        return None;
    }
    // Basis of the 3-dimensional kernel of the covector.
    let c = plane.0;
    let i = c.iter().position(|&x| x != 0).expect("nonzero covector");
    let basis: Vec<ProjPoint3> = (0..4)
        .filter(|&j| j != i)
        .map(|j| {
            let mut v = [0u32; 4];
            v[j] = 1;
            v[i] = p.neg(c[j]);
            ProjPoint3(canonical_scale(v, p).expect("nonzero"))
        })
        .collect();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            let (Ok(l1), Ok(l2)) = (klein_map(q, &basis[a], p), klein_map(q, &basis[b], p)) else {
                continue;
            };
            if l1 != l2 {
                return Some(Pencil {
                    point: *q,
                    plane: *plane,
                    spanning: [l1, l2],
                    helpers: [basis[a], basis[b]],
                });
            }
        }
    }
    unreachable!("a plane through q contains two independent directions away from q")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn v(p: Prime, c: &[i64]) -> Vector {
        Vector::new(p, c).unwrap()
    }

    #[test]
    fn incidence_examples() {
        let p = pr(7);
        let z0 = Hyperplane::new(p, v(p, &[0, 0, 1]), 0).unwrap();
        assert!(incident(&v(p, &[0, 0, 0]), &z0, p).unwrap());
        assert!(!incident(&v(p, &[0, 0, 1]), &z0, p).unwrap());
        assert!(matches!(
            incident(&v(p, &[0, 0]), &z0, p),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn plane_canonical_scaling() {
        let p = pr(7);
        let a = Hyperplane::new(p, v(p, &[2, 4, 6]), 2).unwrap();
        let b = Hyperplane::new(p, v(p, &[1, 2, 3]), 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(Hyperplane::new(p, v(p, &[0, 0, 0]), 1), Err(GeomError::ZeroVector));
    }

    #[test]
    fn line_through_examples() {
        let p = pr(5);
        let l = line_through(&v(p, &[0, 0, 0]), &v(p, &[1, 0, 0]), p).unwrap();
        assert_eq!(*l.base(), v(p, &[0, 0, 0]));
        assert_eq!(*l.direction(), v(p, &[1, 0, 0]));
        let l = line_through(&v(p, &[0, 0, 0]), &v(p, &[2, 2, 2]), p).unwrap();
        assert_eq!(*l.direction(), v(p, &[1, 1, 1]));
        assert_eq!(
            line_through(&v(p, &[1, 1, 1]), &v(p, &[1, 1, 1]), p),
            Err(GeomError::CoincidentPoints)
        );
    }

    #[test]
    fn line_equality_is_set_equality() {
        let p = pr(7);
        let pts: Vec<Vector> = AffineLine::through(p, &v(p, &[1, 2, 3]), &v(p, &[4, 0, 1]))
            .unwrap()
            .points(p)
            .collect();
        let reference = AffineLine::through(p, &pts[0], &pts[1]).unwrap();
        for a in &pts {
            for b in &pts {
                if a != b {
                    assert_eq!(AffineLine::through(p, a, b).unwrap(), reference);
                }
            }
        }
    }

    #[test]
    fn is_isotropic_examples() {
        assert!(!is_isotropic(&v(pr(7), &[1, 0, 0]), pr(7)).unwrap());
        assert!(is_isotropic(&v(pr(5), &[1, 2]), pr(5)).unwrap());
        assert!(is_isotropic(&v(pr(3), &[1, 1, 1]), pr(3)).unwrap());
        assert_eq!(is_isotropic(&v(pr(3), &[0, 0, 0]), pr(3)), Err(GeomError::ZeroVector));
    }

    #[test]
    fn dir_perp_examples() {
        let p = pr(5);
        assert_eq!(dir_perp(&v(p, &[1, 0]), p).unwrap(), v(p, &[0, 1]));
        let d = v(p, &[1, 2]);
        let q = dir_perp(&d, p).unwrap();
        assert_eq!(q.dot(&d, p), 0);
        assert_eq!(q.coord(0), 1);
        // (1,2) is isotropic mod 5, so it is its own perpendicular.
        assert_eq!(q, d);
        assert_eq!(dir_perp(&v(p, &[0, 0]), p), Err(GeomError::ZeroVector));
        for p in [pr(7), pr(13)] {
            for d in all_directions(p, 2).unwrap() {
                assert_eq!(dir_perp(&dir_perp(&d, p).unwrap(), p).unwrap(), d);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let p = pr(13);
        let iota = p.sqrt_minus_one().unwrap() as i64;
        let e = |i| Vector::unit(4, i).unwrap();
        assert_eq!(classify_plane4(&e(0), &e(1), p).unwrap(), PlaneClass::Ordinary);
        let a = v(p, &[1, iota, 0, 0]);
        let b = v(p, &[0, 0, 1, iota]);
        assert_eq!(classify_plane4(&a, &b, p).unwrap(), PlaneClass::FullyIsotropic);
        assert_eq!(classify_plane4(&a, &e(2), p).unwrap(), PlaneClass::SemiIsotropic);
        assert_eq!(
            classify_plane4(&a, &a.scale(3, p), p),
            Err(GeomError::DependentVectors)
        );
    }

    /// Radical dimension by scanning all p^2 elements of the plane.
    fn radical_size(u: &Vector, w: &Vector, p: Prime) -> usize {
        let mut n = 0;
        for a in p.residues() {
            for b in p.residues() {
                let x = u.scale(a, p).add(&w.scale(b, p), p);
                if x.dot(u, p) == 0 && x.dot(w, p) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn classify_matches_radical_scan() {
        use rand::{Rng, SeedableRng};
        let p = pr(5);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..3000 {
            let r = |rng: &mut rand_chacha::ChaCha8Rng| {
                let c: Vec<i64> = (0..4).map(|_| rng.gen_range(0..5)).collect();
                v(p, &c)
            };
            let (u, w) = (r(&mut rng), r(&mut rng));
            let Ok(class) = classify_plane4(&u, &w, p) else {
                assert!(!independent(&u, &w, p));
                continue;
            };
            let expect = match radical_size(&u, &w, p) {
                1 => PlaneClass::Ordinary,
                5 => PlaneClass::SemiIsotropic,
                25 => PlaneClass::FullyIsotropic,
                n => panic!("radical of size {n}"),
            };
            assert_eq!(class, expect);
            seen.insert(class);
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn no_orthogonal_isotropic_pair_in_three_dimensions() {
        for q in [3u64, 5, 7, 11, 13] {
            let p = pr(q);
            let dirs = isotropic_directions(p, 3).unwrap();
            assert_eq!(dirs.len() as u64, q + 1);
            for (i, a) in dirs.iter().enumerate() {
                for b in &dirs[i + 1..] {
                    assert_ne!(a.dot(b, p), 0);
                }
            }
        }
    }

    #[test]
    fn klein_examples() {
        let p = pr(5);
        let a = ProjPoint3::new(p, [1, 0, 0, 0]).unwrap();
        let b = ProjPoint3::new(p, [0, 1, 0, 0]).unwrap();
        let l = klein_map(&a, &b, p).unwrap();
        assert_eq!(l.coords(), [1, 0, 0, 0, 0, 0]);
        assert!(l.satisfies_relation(p));
        let c = ProjPoint3::new(p, [1, 1, 1, 1]).unwrap();
        assert!(klein_map(&a, &c, p).unwrap().satisfies_relation(p));
        assert_eq!(klein_map(&a, &a, p), Err(GeomError::CoincidentPoints));
    }

    #[test]
    fn klein_map_is_independent_of_spanning_pair() {
        let p = pr(3);
        let pts = all_proj_points3(p);
        assert_eq!(pts.len(), 40);
        let lines = all_lines_p3(p);
        assert_eq!(lines.len(), 130);
        for l in &lines {
            assert!(l.satisfies_relation(p));
            let on: Vec<&ProjPoint3> = pts.iter().filter(|q| l.passes_through(q, p)).collect();
            assert_eq!(on.len(), 4);
            for a in &on {
                for b in &on {
                    if a != b {
                        assert_eq!(klein_map(a, b, p).unwrap(), *l);
                    }
                }
            }
        }
    }

    #[test]
    fn pencil_examples() {
        let p = pr(5);
        let q = ProjPoint3::new(p, [0, 0, 0, 1]).unwrap();
        let plane = ProjPlane3::new(p, [0, 0, 1, 0]).unwrap();
        let pencil = alpha_beta_meet(&q, &plane, p).unwrap();
        let lines = pencil.lines(p);
        assert_eq!(lines.len(), 6);
        let away = ProjPlane3::new(p, [0, 0, 0, 1]).unwrap();
        assert!(alpha_beta_meet(&q, &away, p).is_none());
    }

    #[test]
    fn null_triangles() {
        let p = pr(5);
        let y = v(p, &[1, 2, 0]);
        let r = v(p, &[1, 1, 1]);
        let s = r.add(&y, p);
        let t = r.add(&y.scale(3, p), p);
        let nt = null_triangle_check(&r, &s, &t, p).unwrap();
        assert!(nt.is_null);
        assert!(nt.collinear_witness.unwrap().contains(&t, p));
        let nt = null_triangle_check(&r, &s, &v(p, &[0, 0, 0]), p).unwrap();
        assert!(!nt.is_null);
        assert!(nt.collinear_witness.is_none());
    }

    #[test]
    fn null_pairs_on_isotropic_line() {
        let p = pr(5);
        let y = v(p, &[1, 2, 0]);
        let pts: Vec<Vector> = (0..3).map(|k| y.scale(k, p)).collect();
        let st = null_pair_stats(&pts, p).unwrap();
        assert_eq!(st.fraction, 1.0);
        assert_eq!(st.max_on_isotropic_line, 3);
        let pts = vec![v(p, &[0, 0, 0]), v(p, &[1, 0, 0]), v(p, &[0, 1, 0])];
        let st = null_pair_stats(&pts, p).unwrap();
        assert_eq!(st.fraction, 0.0);
        assert_eq!(st.max_on_isotropic_line, 0);
    }
}
