//! Spheres, the paraboloid, the isotropic cone and lines on them, all
//! generated by exhaustive enumeration.

use thiserror::Error;

use crate::field::Prime;
use crate::geom::{all_directions, all_points, isotropic_directions, lines_with_directions, AffineLine, GeomError, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadricError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("radius must be nonzero")]
    ZeroRadius,
    #[error("point {0:?} is not on the quadric")]
    NotOnQuadric(Vector),
    #[error("line is not isotropic")]
    NotIsotropic,
    #[error("line is not contained in the sphere")]
    LineNotOnSphere,
    #[error("point is not on the line")]
    PointNotOnLine,
}

/// `S^{d-1}_t = {x : x·x = t}` in F_p^d; `t = 0` is the isotropic cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sphere {
    pub p: Prime,
    pub dim: usize,
    pub t: u32,
}

impl Sphere {
    pub fn new(p: Prime, dim: usize, t: i64) -> Result<Self, QuadricError> {
        if !(2..=4).contains(&dim) {
            return Err(GeomError::UnsupportedDimension(dim).into());
        }
        Ok(Sphere { p, dim, t: p.reduce(t) })
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.dim() == self.dim && x.norm2(self.p) == self.t
    }

    pub fn points(&self) -> Vec<Vector> {
        all_points(self.p, self.dim)
            .expect("supported dimension")
            .into_iter()
            .filter(|x| self.contains(x))
            .collect()
    }

    pub fn contains_line(&self, l: &AffineLine) -> bool {
        l.points(self.p).all(|x| self.contains(&x))
    }
}

/// `P^{d-1} = {(x, x·x)}` in F_p^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Paraboloid {
    pub p: Prime,
    pub dim: usize,
}

impl Paraboloid {
    pub fn new(p: Prime, dim: usize) -> Result<Self, QuadricError> {
        if !(2..=4).contains(&dim) {
            return Err(GeomError::UnsupportedDimension(dim).into());
        }
        Ok(Paraboloid { p, dim })
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.dim() == self.dim
            && x.horizontal().is_ok_and(|h| h.norm2(self.p) == x.last())
    }

    pub fn points(&self) -> Vec<Vector> {
        all_points(self.p, self.dim - 1)
            .expect("supported dimension")
            .iter()
            .map(|u| lift(u, self.p).expect("dimension below 4"))
            .collect()
    }
}

pub fn sphere_points(p: Prime, dim: usize, t: i64) -> Result<Vec<Vector>, QuadricError> {
    Ok(Sphere::new(p, dim, t)?.points())
}

/// `u ↦ (u, u·u)`.
pub fn lift(u: &Vector, p: Prime) -> Result<Vector, GeomError> {
    u.extend(u.norm2(p))
}

pub fn paraboloid_lift(points: &[Vector], p: Prime) -> Result<Vec<Vector>, GeomError> {
    points.iter().map(|u| lift(u, p)).collect()
}

/// Points of `s` at height `h` (last coordinate), with the height replaced
/// by the horizontal dot-square so the slice lies on the paraboloid.
pub fn slice(s: &[Vector], h: u32, p: Prime) -> Result<Vec<Vector>, GeomError> {
    let mut out = Vec::new();
    for x in s {
        if x.last() == h % p.get() {
            out.push(lift(&x.horizontal()?, p)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineScan {
    /// Only isotropic directions; a non-isotropic line meets a sphere in at
    /// most two points.
    IsotropicOnly,
    /// Every direction. Slow; kept as an oracle.
    Exhaustive,
}

/// All affine lines fully contained in `S^{d-1}_t`, sorted.
pub fn lines_on_sphere(sphere: &Sphere, scan: LineScan) -> Result<Vec<AffineLine>, QuadricError> {
    let dirs = match scan {
        LineScan::IsotropicOnly => isotropic_directions(sphere.p, sphere.dim)?,
        LineScan::Exhaustive => all_directions(sphere.p, sphere.dim)?,
    };
    let mut out: Vec<AffineLine> = lines_with_directions(sphere.p, &dirs)?
        .into_iter()
        .filter(|l| sphere.contains_line(l))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Lines on the two-sphere `S^2_t`, `t ≠ 0`, by an exhaustive scan of all
/// lines of F_p^3.
pub fn lines_on_sphere2(p: Prime, t: i64) -> Result<Vec<AffineLine>, QuadricError> {
    let sphere = Sphere::new(p, 3, t)?;
    if sphere.t == 0 {
        return Err(QuadricError::ZeroRadius);
    }
    lines_on_sphere(&sphere, LineScan::Exhaustive)
}

/// The isotropic lines through the origin: `p + 1` of them in F_p^3.
pub fn cone_lines(p: Prime, dim: usize) -> Result<Vec<AffineLine>, QuadricError> {
    let origin = Vector::zero(dim)?;
    Ok(isotropic_directions(p, dim)?
        .into_iter()
        .map(|d| AffineLine::new(p, origin, d).expect("nonzero"))
        .collect())
}

/// First isotropic line on `S^3_t` in canonical order, if any.
pub fn find_isotropic_line_on_sphere3(p: Prime, t: i64) -> Result<Option<AffineLine>, QuadricError> {
    let sphere = Sphere::new(p, 4, t)?;
    for d in isotropic_directions(p, 4)? {
        for l in lines_with_directions(p, &[d])? {
            if sphere.contains_line(&l) {
                return Ok(Some(l));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderShift {
    /// Canonical direction `v ⊥ u` with `v·v ≠ 0`.
    pub direction: Vector,
    /// `β(v) = -2 (x·v)/(v·v)`.
    pub beta: u32,
    /// `x + β(v)·v`, a point of the sphere.
    pub point: Vector,
}

/// `l^⊥ ∩ S^3_t` for an isotropic line `l ⊂ S^3_t` through `x`: a cylinder
/// of isotropic lines parallel to `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    pub line: AffineLine,
    pub anchor: Vector,
    pub shifts: Vec<CylinderShift>,
    /// Distinct generator lines, sorted, each parallel to `line`.
    pub generators: Vec<AffineLine>,
}

pub fn isotropic_cylinder(l: &AffineLine, x: &Vector, t: i64, p: Prime) -> Result<Cylinder, QuadricError> {
    l.base().check_dim(4)?;
    x.check_dim(4)?;
    let sphere = Sphere::new(p, 4, t)?;
    if !l.is_isotropic(p) {
        return Err(QuadricError::NotIsotropic);
    }
    if !sphere.contains_line(l) {
        return Err(QuadricError::LineNotOnSphere);
    }
    if !l.contains(x, p) {
        return Err(QuadricError::PointNotOnLine);
    }
    let u = *l.direction();
    let mut shifts = Vec::new();
    let mut generators = Vec::new();
    for v in all_directions(p, 4)? {
        let vv = v.norm2(p);
        if v.dot(&u, p) != 0 || vv == 0 {
            continue;
        }
        let beta = p.mul(p.neg(p.mul(2, x.dot(&v, p))), p.inv(vv).expect("nonzero"));
        let point = x.add(&v.scale(beta, p), p);
        if !sphere.contains(&point) {
            return Err(QuadricError::NotOnQuadric(point));
        }
        let g = AffineLine::new(p, point, u)?;
        if !(g.is_isotropic(p) && g.is_parallel_to(l) && sphere.contains_line(&g)) {
            return Err(QuadricError::LineNotOnSphere);
        }
        shifts.push(CylinderShift {
            direction: v,
            beta,
            point,
        });
        generators.push(g);
    }
    generators.sort_unstable();
    generators.dedup();
    Ok(Cylinder {
        line: *l,
        anchor: *x,
        shifts,
        generators,
    })
}

/// Points `x + αu + βv` of the affine plane through `x` spanned by `u, v`
/// that lie on `S^3_t`.
pub fn plane_sphere_section(x: &Vector, u: &Vector, v: &Vector, t: i64, p: Prime) -> Result<Vec<Vector>, QuadricError> {
    let sphere = Sphere::new(p, x.dim(), t)?;
    let mut out = Vec::new();
    for a in p.residues() {
        for b in p.residues() {
            let y = x.add(&u.scale(a, p), p).add(&v.scale(b, p), p);
            if sphere.contains(&y) {
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
