//! Independent nested-loop oracles over plain integer coordinates, plus
//! seeded generators shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use incidence_lab::field::Prime;
use incidence_lab::geom::{Hyperplane, Vector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Pt = Vec<i64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

pub fn md(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

pub fn dot(a: &[i64], b: &[i64], p: i64) -> i64 {
    md(a.iter().zip(b).map(|(x, y)| x * y).sum(), p)
}

pub fn sub(a: &[i64], b: &[i64], p: i64) -> Pt {
    a.iter().zip(b).map(|(x, y)| md(x - y, p)).collect()
}

pub fn add(a: &[i64], b: &[i64], p: i64) -> Pt {
    a.iter().zip(b).map(|(x, y)| md(x + y, p)).collect()
}

pub fn norm(a: &[i64], p: i64) -> i64 {
    dot(a, a, p)
}

pub fn wedge(s: &[i64], t: &[i64], p: i64) -> i64 {
    md(s[0] * t[1] - s[1] * t[0], p)
}

/// `a ∥ b` (both nonzero) via vanishing 2×2 minors.
pub fn parallel(a: &[i64], b: &[i64], p: i64) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if md(a[i] * b[j] - a[j] * b[i], p) != 0 {
                return false;
            }
        }
    }
    true
}

pub fn random_point(r: &mut ChaCha8Rng, p: i64, d: usize) -> Pt {
    (0..d).map(|_| r.gen_range(0..p)).collect()
}

pub fn random_set(r: &mut ChaCha8Rng, p: i64, d: usize, n: usize) -> Vec<Pt> {
    let mut out: Vec<Pt> = Vec::new();
    let cap = (p as u64).pow(d as u32) as usize;
    while out.len() < n.min(cap) {
        let x = random_point(r, p, d);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn random_nonzero(r: &mut ChaCha8Rng, p: i64, d: usize) -> Pt {
    loop {
        let x = random_point(r, p, d);
        if x.iter().any(|&c| c != 0) {
            return x;
        }
    }
}

pub fn to_vec(p: Prime, x: &[i64]) -> Vector {
    Vector::new(p, x).unwrap()
}

pub fn to_vecs(p: Prime, xs: &[Pt]) -> Vec<Vector> {
    xs.iter().map(|x| to_vec(p, x)).collect()
}

pub fn to_plane(p: Prime, h: &(Pt, i64)) -> Hyperplane {
    Hyperplane::new(p, to_vec(p, &h.0), p.reduce(h.1)).unwrap()
}

pub fn from_vec(v: &Vector) -> Pt {
    v.coords().iter().map(|&c| c as i64).collect()
}

/// Weighted incidences between points and hyperplanes `n·x = c`, where
/// hyperplanes are compared as sets (scaled copies are the same plane).
pub fn incidences(points: &[(Pt, u64)], planes: &[(Pt, i64, u64)], p: i64) -> u64 {
    let mut total = 0;
    for (n, c, wh) in planes {
        for (q, wq) in points {
            if dot(n, q, p) == md(*c, p) {
                total += wq * wh;
            }
        }
    }
    total
}

/// Incidences with pairs discounted when some line `(base, dir)` passes
/// through the point and lies in the plane.
pub fn restricted(points: &[Pt], planes: &[(Pt, i64)], lines: &[(Pt, Pt)], p: i64) -> u64 {
    let mut total = 0;
    for (n, c) in planes {
        for q in points {
            if dot(n, q, p) != md(*c, p) {
                continue;
            }
            let along = lines.iter().any(|(b, d)| {
                let diff = sub(q, b, p);
                let on = diff.iter().all(|&x| x == 0) || parallel(&diff, d, p);
                on && dot(n, d, p) == 0 && dot(n, b, p) == md(*c, p)
            });
            if !along {
                total += 1;
            }
        }
    }
    total
}

pub fn energy_delta(s: &[Pt], restricted: bool, p: i64) -> u64 {
    let mut n = 0;
    for a in s {
        for t in s {
            for t2 in s {
                let d = norm(&sub(a, t, p), p);
                if d != 0 && d == norm(&sub(a, t2, p), p) && (!restricted || norm(&sub(t, t2, p), p) != 0) {
                    n += 1;
                }
            }
        }
    }
    n
}

/// `|{(x,y,z,u) ∈ A×B×A×B : x + y = z + u}|` by sorting all sums.
pub fn additive_energy_sorted(a: &[Pt], b: &[Pt], p: i64) -> u64 {
    let mut sums: Vec<Pt> = Vec::new();
    for x in a {
        for y in b {
            sums.push(add(x, y, p));
        }
    }
    sums.sort();
    let mut total = 0u64;
    let mut i = 0;
    while i < sums.len() {
        let mut j = i;
        while j < sums.len() && sums[j] == sums[i] {
            j += 1;
        }
        total += ((j - i) * (j - i)) as u64;
        i = j;
    }
    total
}

pub fn additive_energy_quartic(a: &[Pt], p: i64) -> u64 {
    let mut n = 0;
    for x in a {
        for y in a {
            for z in a {
                for u in a {
                    if add(x, y, p) == add(z, u, p) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// Triples with `(z - x)·(z - y) = 0` (read on the first `d` coordinates)
/// and `x + y - z ∈ A`.
pub fn rectangle_criterion(a: &[Pt], d: usize, p: i64) -> u64 {
    let mut n = 0;
    for x in a {
        for y in a {
            for z in a {
                let zx = sub(&z[..d], &x[..d], p);
                let zy = sub(&z[..d], &y[..d], p);
                if dot(&zx, &zy, p) != 0 {
                    continue;
                }
                let u = sub(&add(x, y, p), z, p);
                if a.contains(&u) {
                    n += 1;
                }
            }
        }
    }
    n
}

pub fn right_triangles(a: &[Pt], p: i64) -> u64 {
    let mut n = 0;
    for z in a {
        for x in a {
            for y in a {
                if x != z && y != z && dot(&sub(x, z, p), &sub(z, y, p), p) == 0 {
                    n += 1;
                }
            }
        }
    }
    n
}

/// Solutions of `f(s,t) = f(s',t')` over `S×S×T×T`.
pub fn form_solutions(s: &[Pt], t: &[Pt], f: impl Fn(&[i64], &[i64]) -> i64, nonzero: bool) -> u64 {
    let mut n = 0;
    for a in s {
        for b in t {
            let v = f(a, b);
            if nonzero && v == 0 {
                continue;
            }
            for a2 in s {
                for b2 in t {
                    if f(a2, b2) == v {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// Solutions of `s∧t + t'∧s' = 0` with `s, s' ∈ S`, `t, t' ∈ T`.
pub fn wedge_equation(s: &[Pt], t: &[Pt], p: i64) -> u64 {
    let mut n = 0;
    for a in s {
        for b in t {
            for b2 in t {
                for a2 in s {
                    if md(wedge(a, b, p) + wedge(b2, a2, p), p) == 0 {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

pub fn distance_values(s: &[Pt], p: i64) -> (Vec<i64>, Vec<usize>) {
    let mut all: Vec<i64> = Vec::new();
    let mut pinned = Vec::new();
    for a in s {
        let mut vals: Vec<i64> = s.iter().map(|b| norm(&sub(a, b, p), p)).collect();
        vals.sort();
        vals.dedup();
        pinned.push(vals.len());
        all.extend(vals);
    }
    all.sort();
    all.dedup();
    (all, pinned)
}

/// Points of `{x : x·x = t}` in dimension `d`.
pub fn sphere(p: i64, d: usize, t: i64) -> Vec<Pt> {
    all_points(p, d).into_iter().filter(|x| norm(x, p) == md(t, p)).collect()
}

pub fn all_points(p: i64, d: usize) -> Vec<Pt> {
    let mut out: Vec<Pt> = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|x| {
                (0..p).map(move |c| {
                    let mut y = x.clone();
                    y.push(c);
                    y
                })
            })
            .collect();
    }
    out
}

/// `(u, u·u)`.
pub fn lift(u: &[i64], p: i64) -> Pt {
    let mut v = u.to_vec();
    v.push(norm(u, p));
    v
}

pub fn sample<T: Clone>(r: &mut ChaCha8Rng, items: &[T], n: usize) -> Vec<T> {
    rand::seq::index::sample(r, items.len(), n.min(items.len()))
        .into_iter()
        .map(|i| items[i].clone())
        .collect()
}

/// Multiplicity table of a value over pairs, used by several oracles.
pub fn histogram<K: std::hash::Hash + Eq>(items: impl IntoIterator<Item = K>) -> HashMap<K, u64> {
    let mut h = HashMap::new();
    for k in items {
        *h.entry(k).or_insert(0) += 1;
    }
    h
}
