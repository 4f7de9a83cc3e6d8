mod common;

use common::*;
use incidence_lab::bench::config::{emit, parse, Config};
use incidence_lab::bench::report::{csv_row, BoundReport};
use incidence_lab::bench::rhs::{rhs, Params, Theorem};
use incidence_lab::counting::{count_point_plane, count_point_plane_with, Strategy as Count, WeightedSet};
use incidence_lab::energy::{additive_energy, rectangle_energy_paraboloid, rectangle_energy_sphere};
use incidence_lab::erdos::{bisector_plane, distance_set, energy_delta, form_values, FormSpec};
use incidence_lab::field::Prime;
use incidence_lab::geom::{AffineLine, Hyperplane, Vector};
use proptest::prelude::*;

const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

fn prime_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

fn coords(d: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, d)
}

fn point_set(d: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(coords(d), 1..max)
}

fn reduce(xs: &[Vec<i64>], p: i64) -> Vec<Pt> {
    let mut out: Vec<Pt> = xs.iter().map(|x| x.iter().map(|&c| md(c, p)).collect()).collect();
    out.sort();
    out.dedup();
    out
}

#[test]
fn bisector_membership_is_equidistance() {
    let (p, pi) = (prime(7), 7);
    let pts = all_points(pi, 3);
    let mut r = rng(17);
    for _ in 0..60 {
        let t = random_point(&mut r, pi, 3);
        let t2 = random_point(&mut r, pi, 3);
        let (tv, t2v) = (to_vec(p, &t), to_vec(p, &t2));
        match bisector_plane(&tv, &t2v, p) {
            Ok(h) => {
                for x in &pts {
                    let equi = norm(&sub(x, &t, pi), pi) == norm(&sub(x, &t2, pi), pi);
                    assert_eq!(h.contains(&to_vec(p, x), p), equi, "{t:?} {t2:?} {x:?}");
                }
            }
            Err(_) => assert_eq!(norm(&sub(&t, &t2, pi), pi), 0, "{t:?} {t2:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bucketed_matches_naive(pv in prime_strategy(), q in point_set(3, 60), h in prop::collection::vec((coords(3), -50i64..50), 1..60)) {
        let (p, pi) = (prime(pv), pv as i64);
        let q = WeightedSet::from_items(to_vecs(p, &reduce(&q, pi)));
        let planes: Vec<Hyperplane> = h
            .iter()
            .filter(|(n, _)| n.iter().any(|&c| md(c, pi) != 0))
            .map(|(n, c)| to_plane(p, &(n.clone(), *c)))
            .collect();
        let h = WeightedSet::from_items(planes);
        let a = count_point_plane_with(&q, &h, p, Count::Bucketed).unwrap().total;
        let b = count_point_plane_with(&q, &h, p, Count::Naive).unwrap().total;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn incidences_are_translation_invariant(pv in prime_strategy(), q in point_set(3, 40), shift in coords(3)) {
        let (p, pi) = (prime(pv), pv as i64);
        let q = reduce(&q, pi);
        let mut r = rng(q.len() as u64);
        let planes: Vec<(Pt, i64)> = (0..30).map(|_| (random_nonzero(&mut r, pi, 3), r.gen_range_i64(pi))).collect();
        let moved_q: Vec<Pt> = q.iter().map(|x| add(x, &shift, pi)).collect();
        let moved_h: Vec<(Pt, i64)> = planes.iter().map(|(n, c)| (n.clone(), c + dot(n, &shift, pi))).collect();
        let count = |q: &[Pt], h: &[(Pt, i64)]| {
            count_point_plane(
                &WeightedSet::from_items(to_vecs(p, q)),
                &WeightedSet::from_items(h.iter().map(|x| to_plane(p, x))),
                p,
            )
            .unwrap()
            .total
        };
        prop_assert_eq!(count(&q, &planes), count(&moved_q, &moved_h));
    }

    #[test]
    fn energy_is_translation_invariant(pv in prime_strategy(), a in point_set(3, 30), b in point_set(3, 30), shift in coords(3)) {
        let (p, pi) = (prime(pv), pv as i64);
        let (a, b) = (reduce(&a, pi), reduce(&b, pi));
        let moved: Vec<Pt> = a.iter().map(|x| add(x, &shift, pi)).collect();
        let e = additive_energy(&to_vecs(p, &a), &to_vecs(p, &b), p).unwrap();
        prop_assert_eq!(e, additive_energy(&to_vecs(p, &moved), &to_vecs(p, &b), p).unwrap());
        let (na, nb) = (a.len() as u64, b.len() as u64);
        prop_assert!(e >= na * nb && e <= na * nb * na.min(nb));
    }

    #[test]
    fn restricted_energy_is_at_most_full(pv in prime_strategy(), s in point_set(3, 25)) {
        let (p, pi) = (prime(pv), pv as i64);
        let s = to_vecs(p, &reduce(&s, pi));
        prop_assert!(energy_delta(&s, true, p).unwrap() <= energy_delta(&s, false, p).unwrap());
    }

    #[test]
    fn distance_set_is_translation_invariant(pv in prime_strategy(), s in point_set(2, 25), shift in coords(2)) {
        let (p, pi) = (prime(pv), pv as i64);
        let s = reduce(&s, pi);
        prop_assume!(s.len() >= 2);
        let moved: Vec<Pt> = s.iter().map(|x| add(x, &shift, pi)).collect();
        let a = distance_set(&to_vecs(p, &s), true, p).unwrap();
        let b = distance_set(&to_vecs(p, &moved), true, p).unwrap();
        prop_assert_eq!(a.values, b.values);
        prop_assert!(a.max_pinned >= a.min_pinned);
    }

    #[test]
    fn form_value_count_is_scale_invariant(pv in prime_strategy(), s in point_set(2, 20), lambda in 1i64..13) {
        let (p, pi) = (prime(pv), pv as i64);
        prop_assume!(lambda % pi != 0);
        let s = reduce(&s, pi);
        let scaled: Vec<Pt> = s.iter().map(|x| x.iter().map(|&c| md(c * lambda, pi)).collect()).collect();
        for form in [FormSpec::dot(p), FormSpec::wedge(p)] {
            let a = form_values(&to_vecs(p, &s), &form, p).unwrap().len();
            let b = form_values(&to_vecs(p, &scaled), &form, p).unwrap().len();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn paraboloid_energy_decomposes(pv in prime_strategy(), h in point_set(2, 30)) {
        let (p, pi) = (prime(pv), pv as i64);
        let a: Vec<Pt> = reduce(&h, pi).iter().map(|u| lift(u, pi)).collect();
        let rep = rectangle_energy_paraboloid(&to_vecs(p, &a), p).unwrap();
        prop_assert_eq!(rep.energy, rep.trivial + rep.repeated_vertex + 8 * rep.rectangles);
        prop_assert_eq!(rep.rectangles, rep.ordinary + rep.semi_degenerate + rep.degenerate);
        prop_assert_eq!(rep.energy, rep.criterion_count);
    }

    #[test]
    fn sphere_energy_decomposes(pv in prime_strategy(), t in 1i64..13, seed in any::<u64>()) {
        let (p, pi) = (prime(pv), pv as i64);
        prop_assume!(t % pi != 0);
        let mut r = rng(seed);
        let sph = sphere(pi, 4, t);
        let a = sample(&mut r, &sph, 25);
        let rep = rectangle_energy_sphere(&to_vecs(p, &a), t, p).unwrap();
        prop_assert_eq!(rep.energy, rep.trivial + rep.repeated_vertex + 8 * rep.rectangles);
        prop_assert_eq!(rep.energy, additive_energy_sorted(&a, &a, pi));
    }

    #[test]
    fn config_round_trips(pv in prime_strategy(), dim in 2usize..=4, q in prop::collection::vec((coords(4), 1u64..4), 0..20), h in prop::collection::vec((coords(4), -9i64..9, 1u64..4), 0..10)) {
        let (p, pi) = (prime(pv), pv as i64);
        let mut cfg = Config::new(p, dim);
        for (x, w) in &q {
            cfg.points.insert(to_vec(p, &x[..dim]), *w).unwrap();
        }
        for (n, c, w) in &h {
            if n[..dim].iter().any(|&v| md(v, pi) != 0) {
                cfg.planes.insert(Hyperplane::new(p, to_vec(p, &n[..dim]), p.reduce(*c)).unwrap(), *w).unwrap();
            }
        }
        if dim == 3 && q.len() >= 2 {
            let (a, b) = (to_vec(p, &q[0].0[..3]), to_vec(p, &q[1].0[..3]));
            if a != b {
                cfg.lines.push(AffineLine::through(p, &a, &b).unwrap());
            }
        }
        let text = emit(&cfg);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(emit(&back), text);
    }

    #[test]
    fn lower_bounds_grow_with_s(pv in prime_strategy(), s in 1u64..10_000) {
        for theorem in [Theorem::T41, Theorem::T42, Theorem::T43] {
            let at = |s: u64| rhs(theorem, &params(&[("p", pv), ("S", s)])).unwrap().value;
            prop_assert!(at(s) <= at(s + 1));
        }
    }

    #[test]
    fn upper_bounds_grow_with_each_parameter(pv in prime_strategy(), base in 1u64..1000) {
        for theorem in Theorem::ALL {
            let mut ps: Params = theorem.parameters().iter().map(|n| (n.to_string(), base)).collect();
            ps.insert("p".into(), pv);
            let r0 = rhs(theorem, &ps).unwrap();
            let v0 = r0.value;
            prop_assert!(v0.is_finite() && v0 > 0.0);
            if theorem.is_lower_bound() {
                continue;
            }
            for name in theorem.parameters() {
                // w0 and k divide into some terms; only quantities of objects are monotone.
                if ["w0", "k"].contains(name) && matches!(theorem, Theorem::T1C | Theorem::KRich) {
                    continue;
                }
                let mut bigger = ps.clone();
                *bigger.get_mut(*name).unwrap() += 1;
                let r1 = rhs(theorem, &bigger).unwrap();
                // T54 and T55 switch formulas when the size hypothesis flips.
                if r1.flags != r0.flags {
                    continue;
                }
                prop_assert!(r1.value >= v0, "{theorem} {name}: {v0} -> {}", r1.value);
            }
        }
    }

    #[test]
    fn report_ratio_is_count_over_rhs(count in 0u64..1_000_000, q in 1u64..500, pi in 1u64..500, k in 1u64..20) {
        let ps = params(&[("p", 101), ("Q", q), ("Pi", pi), ("k", k)]);
        let row = BoundReport::new(Theorem::T1, &ps, count).unwrap();
        let expect = count as f64 / (pi as f64 * ((q as f64).sqrt() + k as f64));
        prop_assert!((row.ratio.unwrap() - expect).abs() <= 1e-12 * expect.max(1.0));
        let line = csv_row(&row);
        let fields: Vec<&str> = line.split(',').collect();
        prop_assert_eq!(fields.len(), 7);
        let reparsed: f64 = fields[5].parse().unwrap();
        prop_assert!((reparsed - expect).abs() <= 1e-10 * expect.max(1e-300));
    }
}

fn params(kv: &[(&str, u64)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

trait GenI64 {
    fn gen_range_i64(&mut self, p: i64) -> i64;
}

impl GenI64 for rand_chacha::ChaCha8Rng {
    fn gen_range_i64(&mut self, p: i64) -> i64 {
        rand::Rng::gen_range(self, 0..p)
    }
}

#[test]
fn vectors_reject_wrong_dimensions() {
    let p = Prime::new(5).unwrap();
    assert!(Vector::new(p, &[]).is_err());
    assert!(Vector::new(p, &[1, 2, 3, 4, 5]).is_err());
    assert_eq!(Vector::new(p, &[-1, 7]).unwrap().coords(), &[4, 2]);
}
