//! Right-hand sides of the incidence, distance and energy bounds, with every
//! implied constant set to 1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RhsError {
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("{theorem} needs parameter `{name}`")]
    MissingParameter { theorem: Theorem, name: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    T1,
    T1B,
    T1C,
    T2,
    T3,
    Vinh,
    Cor21,
    KRich,
    T41,
    T42,
    T43,
    T53,
    T54,
    T55,
    T56,
}

impl Theorem {
    pub const ALL: [Theorem; 15] = [
        Theorem::T1,
        Theorem::T1B,
        Theorem::T1C,
        Theorem::T2,
        Theorem::T3,
        Theorem::Vinh,
        Theorem::Cor21,
        Theorem::KRich,
        Theorem::T41,
        Theorem::T42,
        Theorem::T43,
        Theorem::T53,
        Theorem::T54,
        Theorem::T55,
        Theorem::T56,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::T1 => "T1",
            Theorem::T1B => "T1B",
            Theorem::T1C => "T1C",
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::Vinh => "VINH",
            Theorem::Cor21 => "COR21",
            Theorem::KRich => "KRICH",
            Theorem::T41 => "T41",
            Theorem::T42 => "T42",
            Theorem::T43 => "T43",
            Theorem::T53 => "T53",
            Theorem::T54 => "T54",
            Theorem::T55 => "T55",
            Theorem::T56 => "T56",
        }
    }

    /// Parameter names the evaluator reads, in report order.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Theorem::T1 => &["Q", "Pi", "k"],
            Theorem::T1B => &["Q", "Pi", "kstar"],
            Theorem::T1C => &["W", "w0", "k"],
            Theorem::T2 => &["A", "B", "L"],
            Theorem::T3 | Theorem::Vinh => &["Q", "L"],
            Theorem::Cor21 => &["P", "L", "k"],
            Theorem::KRich => &["n", "k"],
            Theorem::T41 | Theorem::T42 | Theorem::T43 => &["S"],
            Theorem::T53 | Theorem::T54 | Theorem::T55 | Theorem::T56 => &["A", "k0"],
        }
    }

    /// Whether the bound is a lower bound on the count.
    pub fn is_lower_bound(self) -> bool {
        matches!(self, Theorem::T41 | Theorem::T42 | Theorem::T43)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = RhsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| RhsError::UnknownTheorem(s.to_string()))
    }
}

/// Integer parameters of a bound; `p` is always required.
pub type Params = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq)]
pub struct RhsValue {
    pub value: f64,
    /// Hypotheses of the statement, each evaluated exactly.
    pub flags: Vec<(String, bool)>,
    /// Companion bounds reported alongside the main one.
    pub extra: Vec<(String, f64)>,
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `a^i · b^j < c^k · d^l` in exact arithmetic.
fn pow_lt(a: u64, i: u32, b: u64, j: u32, c: u64, k: u32, d: u64, l: u32) -> bool {
    big(a).pow(i) * big(b).pow(j) < big(c).pow(k) * big(d).pow(l)
}

pub fn rhs(theorem: Theorem, params: &Params) -> Result<RhsValue, RhsError> {
    let get = |name: &'static str| {
        params
            .get(name)
            .copied()
            .ok_or(RhsError::MissingParameter { theorem, name })
    };
    let p = get("p")?;
    for name in theorem.parameters() {
        get(name)?;
    }
    let f = |name: &'static str| get(name).map(|v| v as f64);
    let pf = p as f64;
    let mut flags = Vec::new();
    let mut extra = Vec::new();
    let value = match theorem {
        Theorem::T1 => {
            let (q, pi, k) = (get("Q")?, get("Pi")?, f("k")?);
            flags.push(("Q_le_Pi".into(), q <= pi));
            flags.push(("Q_lt_p2".into(), (q as u128) < (p as u128) * (p as u128)));
            pi as f64 * ((q as f64).sqrt() + k)
        }
        Theorem::T1B => {
            let (q, pi, ks) = (get("Q")?, get("Pi")?, f("kstar")?);
            flags.push(("Q_le_Pi".into(), q <= pi));
            q as f64 * pi as f64 / pf + pi as f64 * ((q as f64).sqrt() + ks)
        }
        Theorem::T1C => {
            let (w, w0, k) = (get("W")?, get("w0")?, f("k")?);
            flags.push(("w0_ge_1".into(), w0 >= 1));
            flags.push(("W_over_w0_lt_p2".into(), pow_lt(w, 1, 1, 0, w0, 1, p, 2)));
            let (w, w0) = (w as f64, w0 as f64);
            w * ((w0 * w).sqrt() + k * w0)
        }
        Theorem::T2 => {
            let (a, b, l) = (get("A")?, get("B")?, get("L")?);
            flags.push(("A_le_B".into(), a <= b));
            flags.push(("AL_lt_p2".into(), pow_lt(a, 1, l, 1, p, 2, 1, 0)));
            let (a, b, l) = (a as f64, b as f64, l as f64);
            a.powf(0.75) * b.sqrt() * l.powf(0.75) + a * b + l
        }
        Theorem::T3 => {
            let (q, l) = (get("Q")?, get("L")?);
            flags.push(("Q13_lt_p15_L2".into(), pow_lt(q, 13, 1, 0, p, 15, l, 2)));
            let (q, l) = (q as f64, l as f64);
            (q * l).powf(11.0 / 15.0) + q + l
        }
        Theorem::Vinh => {
            let (q, l) = (f("Q")?, f("L")?);
            q * l / pf + (pf * q * l).sqrt()
        }
        Theorem::Cor21 => {
            let (pts, l, k) = (get("P")?, get("L")?, f("k")?);
            flags.push(("L_lt_p2".into(), pow_lt(l, 1, 1, 0, p, 2, 1, 0)));
            let (pts, l) = (pts as f64, l as f64);
            pts.sqrt() * l.sqrt() * (l.powf(0.25) + k.sqrt()) + pts
        }
        Theorem::KRich => {
            let (n, k) = (get("n")?, get("k")?);
            flags.push(("n21_lt_p26".into(), pow_lt(n, 21, 1, 0, p, 26, 1, 0)));
            flags.push(("k_le_p".into(), k <= p));
            let (n, k) = (n as f64, k as f64);
            n.powf(2.75) / k.powf(3.75) + n.powf(1.25) / k
        }
        Theorem::T41 => {
            let s = f("S")?;
            s.powf(2.0 / 3.0).min(pf)
        }
        Theorem::T42 => {
            let s = f("S")?;
            s.sqrt().min(pf)
        }
        Theorem::T43 => {
            let s = get("S")?;
            flags.push(("S11_le_p15".into(), !pow_lt(p, 15, 1, 0, s, 11, 1, 0)));
            let s = s as f64;
            extra.push(("large".into(), pf / (1.0 + pf * pf * s.powf(-1.5))));
            extra.push(("pinned_large".into(), pf / (1.0 + pf.powf(1.5) / s)));
            s.powf(8.0 / 15.0)
        }
        Theorem::T53 => {
            let (a, k0) = (f("A")?, f("k0")?);
            a.powi(3) / pf + a.powf(2.5) + a * k0 * k0
        }
        Theorem::T54 => {
            let (a, k0) = (get("A")?, f("k0")?);
            let small = pow_lt(a, 21, 1, 0, p, 26, 1, 0);
            flags.push(("A21_lt_p26".into(), small));
            let a = a as f64;
            let tail = if small {
                a.powf(17.0 / 7.0)
            } else {
                a.powi(3) / pf + a * a * pf.sqrt()
            };
            a * k0 * k0 + tail
        }
        Theorem::T55 => {
            let (a, k0) = (get("A")?, f("k0")?);
            let small = pow_lt(a, 11, 1, 0, p, 15, 1, 0);
            flags.push(("A11_lt_p15".into(), small));
            let a = a as f64;
            let tail = if small {
                a.powf(37.0 / 15.0)
            } else {
                a.powi(3) / pf + a * a * pf.sqrt()
            };
            a * k0 * k0 + tail
        }
        Theorem::T56 => {
            let (a, k0) = (f("A")?, f("k0")?);
            a.powi(3) / pf + a.powf(2.5) + a * k0 * k0 + a * a * k0
        }
    };
    Ok(RhsValue { value, flags, extra })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, u64)]) -> Params {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn t1_example() {
        let r = rhs(Theorem::T1, &params(&[("p", 101), ("Q", 100), ("Pi", 200), ("k", 5)])).unwrap();
        assert_eq!(r.value, 3000.0);
        assert!(r.flags.iter().all(|f| f.1));
    }

    #[test]
    fn t3_constraint_at_q_equal_l_equal_p() {
        for p in [5u64, 101, 65_521] {
            let r = rhs(Theorem::T3, &params(&[("p", p), ("Q", p), ("L", p)])).unwrap();
            assert_eq!(r.flags, vec![("Q13_lt_p15_L2".to_string(), true)]);
        }
    }

    #[test]
    fn t53_at_p_squared() {
        let p = 13u64;
        let r = rhs(Theorem::T53, &params(&[("p", p), ("A", p * p), ("k0", 2)])).unwrap();
        let expect = 2.0 * (p as f64).powi(5) + 4.0 * (p * p) as f64;
        assert!((r.value - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!("T9".parse::<Theorem>(), Err(RhsError::UnknownTheorem("T9".into())));
        assert_eq!("vinh".parse::<Theorem>(), Ok(Theorem::Vinh));
        assert_eq!(
            rhs(Theorem::T1, &params(&[("p", 7), ("Q", 1)])),
            Err(RhsError::MissingParameter {
                theorem: Theorem::T1,
                name: "Pi"
            })
        );
    }

    #[test]
    fn t43_companions() {
        let r = rhs(Theorem::T43, &params(&[("p", 7), ("S", 49)])).unwrap();
        let large = r.extra.iter().find(|e| e.0 == "large").unwrap().1;
        assert!((large - 7.0 / (1.0 + 49.0 / 343.0)).abs() < 1e-12);
        // 49^11 = 7^22 exceeds 7^15.
        assert_eq!(r.flags, vec![("S11_le_p15".to_string(), false)]);
        let r = rhs(Theorem::T43, &params(&[("p", 7), ("S", 7)])).unwrap();
        assert_eq!(r.flags, vec![("S11_le_p15".to_string(), true)]);
    }
}
