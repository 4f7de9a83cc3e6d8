//! Extremal configurations: the unit sphere with all planes, the coprime
//! lattice, the Elekes grid, semi-isotropic sets and isotropic cylinders.

use num_integer::Integer;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bench::config::Config;
use crate::counting::WeightedSet;
use crate::field::Prime;
use crate::geom::{all_directions, all_hyperplanes, isotropic_directions, GeomError, Hyperplane, Vector};
use crate::quadrics::{find_isotropic_line_on_sphere3, isotropic_cylinder, QuadricError, Sphere};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Quadric(#[from] QuadricError),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("no isotropic direction available")]
    NoIsotropicDirection,
}

fn constraint(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::Constraint(msg.into())
}

/// The unit sphere `S^2_1` and every affine plane of F_p^3.
pub fn sphere_config(p: Prime) -> Result<(Vec<Vector>, Vec<Hyperplane>), ConstructionError> {
    let q = Sphere::new(p, 3, 1)?.points();
    Ok((q, all_hyperplanes(p, 3)?))
}

/// `{(a, b) ∈ [1..N]^2 : gcd(a, b) = 1}`; requires `4N² < p` so all dot
/// products stay below `p/2`.
pub fn coprime_lattice(n: u64, p: Prime) -> Result<Vec<Vector>, ConstructionError> {
    if n == 0 || 4 * (n as u128) * (n as u128) >= p.as_u64() as u128 {
        return Err(constraint(format!("need 1 <= N and 4N^2 < p (N = {n}, p = {})", p.get())));
    }
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            if a.gcd(&b) == 1 {
                out.push(Vector::new(p, &[a as i64, b as i64])?);
            }
        }
    }
    Ok(out)
}

/// Points `[1..n] × [1..2n²]` and lines `y = ax + b`, `a ∈ [1..n]`,
/// `b ∈ [1..n²]`, as hyperplanes of F_p^2. Requires `p > 2n²`.
pub fn elekes_grid(n: u64, p: Prime) -> Result<(Vec<Vector>, Vec<Hyperplane>), ConstructionError> {
    if n == 0 || 2 * (n as u128) * (n as u128) >= p.as_u64() as u128 {
        return Err(constraint(format!("need 1 <= n and p > 2n^2 (n = {n}, p = {})", p.get())));
    }
    let n = n as i64;
    let mut points = Vec::new();
    for x in 1..=n {
        for y in 1..=2 * n * n {
            points.push(Vector::new(p, &[x, y])?);
        }
    }
    let mut lines = Vec::new();
    for a in 1..=n {
        for b in 1..=n * n {
            lines.push(Hyperplane::new(p, Vector::new(p, &[-a, 1])?, p.reduce(b))?);
        }
    }
    Ok((points, lines))
}

/// Directions `y` (isotropic) and `x ⊥ y` (not parallel to `y`) used by
/// [`semi_isotropic_set`].
pub fn semi_isotropic_frame(p: Prime) -> Result<(Vector, Vector), ConstructionError> {
    let y = *isotropic_directions(p, 3)?
        .first()
        .ok_or(ConstructionError::NoIsotropicDirection)?;
    let x = all_directions(p, 3)?
        .into_iter()
        .find(|d| d.dot(&y, p) == 0 && !d.is_parallel_to(&y, p))
        .expect("y^⊥ is two-dimensional");
    Ok((x, y))
}

/// `{a·x + b·y : a ∈ [1..k], b ∈ B_a}` with `|B_a| = l`. `B_a = [1..l]`
/// unless a seed is given, in which case each `B_a` is a random `l`-subset.
pub fn semi_isotropic_set(k: u64, l: u64, p: Prime, seed: Option<u64>) -> Result<Vec<Vector>, ConstructionError> {
    if k == 0 || k > l {
        return Err(constraint(format!("need 1 <= k <= l (k = {k}, l = {l})")));
    }
    if l > p.as_u64() {
        return Err(constraint(format!("need l <= p (l = {l}, p = {})", p.get())));
    }
    let (x, y) = semi_isotropic_frame(p)?;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut out = Vec::with_capacity((k * l) as usize);
    for a in 1..=k as u32 {
        let bs: Vec<u32> = match rng.as_mut() {
            Some(r) => {
                let mut v: Vec<u32> = sample(r, p.get() as usize, l as usize)
                    .into_iter()
                    .map(|b| b as u32)
                    .collect();
                v.sort_unstable();
                v
            }
            None => (1..=l as u32).collect(),
        };
        for b in bs {
            out.push(x.scale(a, p).add(&y.scale(b % p.get(), p), p));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `k0` consecutive points on each of `m` generators of an isotropic
/// cylinder on `S^3_t`, starting with the generator found first.
pub fn cylinder_set(p: Prime, t: i64, k0: u64, m: usize) -> Result<Vec<Vector>, ConstructionError> {
    if k0 == 0 || m == 0 || k0 > p.as_u64() {
        return Err(constraint(format!("need 1 <= k0 <= p and m >= 1 (k0 = {k0}, m = {m})")));
    }
    let l = find_isotropic_line_on_sphere3(p, t)?
        .ok_or_else(|| constraint(format!("S^3_{t} contains no isotropic line at p = {}", p.get())))?;
    let cyl = isotropic_cylinder(&l, l.base(), t, p)?;
    let mut gens = vec![l];
    gens.extend(cyl.generators.into_iter().filter(|g| *g != l));
    if m > gens.len() {
        return Err(constraint(format!("only {} generators available, m = {m}", gens.len())));
    }
    let mut out = Vec::new();
    for g in &gens[..m] {
        for j in 0..k0 as u32 {
            out.push(g.point_at(j, p));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `n` distinct uniformly random points of F_p^dim.
pub fn random_points(p: Prime, dim: usize, n: usize, seed: u64) -> Result<Vec<Vector>, ConstructionError> {
    let total = (p.as_u64() as u128).pow(dim as u32);
    if total > usize::MAX as u128 || n as u128 > total {
        return Err(constraint(format!("cannot draw {n} distinct points from F_{}^{dim}", p.get())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vector> = sample(&mut rng, total as usize, n)
        .into_iter()
        .map(|mut idx| {
            let mut c = [0u32; 4];
            for slot in c[..dim].iter_mut().rev() {
                *slot = (idx % p.get() as usize) as u32;
                idx /= p.get() as usize;
            }
            Vector::from_residues(p, &c[..dim])
        })
        .collect::<Result<_, _>>()?;
    out.sort_unstable();
    Ok(out)
}

/// A named construction with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructionSpec {
    Sphere { p: u64 },
    CoprimeLattice { n: u64, p: u64 },
    Elekes { n: u64, p: u64 },
    SemiIsotropic { k: u64, l: u64, p: u64, seed: Option<u64> },
    Cylinder { p: u64, t: i64, k0: u64, m: usize },
    Random { p: u64, dim: usize, n: usize, seed: u64 },
}

impl ConstructionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionSpec::Sphere { .. } => "sphere",
            ConstructionSpec::CoprimeLattice { .. } => "coprime",
            ConstructionSpec::Elekes { .. } => "elekes",
            ConstructionSpec::SemiIsotropic { .. } => "semi-isotropic",
            ConstructionSpec::Cylinder { .. } => "cylinder",
            ConstructionSpec::Random { .. } => "random",
        }
    }

    pub fn prime(&self) -> Result<Prime, ConstructionError> {
        let p = match self {
            ConstructionSpec::Sphere { p }
            | ConstructionSpec::CoprimeLattice { p, .. }
            | ConstructionSpec::Elekes { p, .. }
            | ConstructionSpec::SemiIsotropic { p, .. }
            | ConstructionSpec::Cylinder { p, .. }
            | ConstructionSpec::Random { p, .. } => *p,
        };
        Prime::new(p).map_err(|e| constraint(e.to_string()))
    }

    pub fn build(&self) -> Result<Config, ConstructionError> {
        let p = self.prime()?;
        Ok(match *self {
            ConstructionSpec::Sphere { .. } => {
                let (q, planes) = sphere_config(p)?;
                let mut c = Config::with_points(p, 3, q);
                c.planes = WeightedSet::from_items(planes);
                c
            }
            ConstructionSpec::CoprimeLattice { n, .. } => Config::with_points(p, 2, coprime_lattice(n, p)?),
            ConstructionSpec::Elekes { n, .. } => {
                let (q, lines) = elekes_grid(n, p)?;
                let mut c = Config::with_points(p, 2, q);
                c.planes = WeightedSet::from_items(lines);
                c
            }
            ConstructionSpec::SemiIsotropic { k, l, seed, .. } => {
                Config::with_points(p, 3, semi_isotropic_set(k, l, p, seed)?)
            }
            ConstructionSpec::Cylinder { t, k0, m, .. } => Config::with_points(p, 4, cylinder_set(p, t, k0, m)?),
            ConstructionSpec::Random { dim, n, seed, .. } => {
                if !(1..=4).contains(&dim) {
                    return Err(GeomError::UnsupportedDimension(dim).into());
                }
                Config::with_points(p, dim, random_points(p, dim, n, seed)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_point_line_2d, max_collinear};
    use crate::erdos::distance_set;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn sphere_config_sizes() {
        let (q, planes) = sphere_config(pr(3)).unwrap();
        assert_eq!((q.len(), planes.len()), (6, 39));
        let (q, _) = sphere_config(pr(7)).unwrap();
        assert_eq!(max_collinear(&q, pr(7)).unwrap().0, 2);
    }

    #[test]
    fn coprime_lattice_sizes() {
        assert_eq!(coprime_lattice(4, pr(67)).unwrap().len(), 11);
        assert_eq!(coprime_lattice(1, pr(5)).unwrap().len(), 1);
        assert!(coprime_lattice(6, pr(211)).is_ok());
        assert!(coprime_lattice(4, pr(61)).is_err());
    }

    #[test]
    fn elekes_incidences() {
        for (n, p) in [(2, 11), (3, 23)] {
            let (q, lines) = elekes_grid(n, pr(p)).unwrap();
            assert_eq!(q.len() as u64, 2 * n * n * n);
            assert_eq!(lines.len() as u64, n * n * n);
            assert_eq!(count_point_line_2d(&q, &lines, pr(p)).unwrap(), n.pow(4));
        }
        assert!(elekes_grid(3, pr(17)).is_err());
    }

    #[test]
    fn semi_isotropic_distances() {
        let p = pr(5);
        let s = semi_isotropic_set(2, 3, p, None).unwrap();
        assert_eq!(s.len(), 6);
        let (x, _) = semi_isotropic_frame(p).unwrap();
        let r = distance_set(&s, true, p).unwrap();
        assert_eq!(r.values.into_iter().collect::<Vec<_>>(), {
            let mut v = vec![0, x.norm2(p)];
            v.sort_unstable();
            v
        });
        let line = semi_isotropic_set(1, 4, p, Some(3)).unwrap();
        assert_eq!(distance_set(&line, true, p).unwrap().values.len(), 1);
    }

    #[test]
    fn random_points_are_distinct_and_seeded() {
        let p = pr(7);
        let a = random_points(p, 3, 50, 9).unwrap();
        let mut b = a.clone();
        b.dedup();
        assert_eq!(b.len(), 50);
        assert_eq!(a, random_points(p, 3, 50, 9).unwrap());
        assert!(random_points(p, 2, 50, 9).is_err());
    }

    #[test]
    fn cylinder_points_on_sphere() {
        let p = pr(5);
        let a = cylinder_set(p, 1, 3, 2).unwrap();
        assert_eq!(a.len(), 6);
        let s = Sphere::new(p, 4, 1).unwrap();
        assert!(a.iter().all(|x| s.contains(x)));
    }
}
