//! Parameter arithmetic for `G_n(m,k)`: the residues `A = k`, `B = k - m`,
//! the two isomorphism moves (swap and unit rescaling) and orbit keys.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("n must be at least 2, got {0}")]
    RankTooSmall(u32),
    #[error("{name}={value} out of range, need 0 <= {name} < n={n}")]
    OutOfRange { name: &'static str, value: u32, n: u32 },
    #[error("gcd(n,m,k) = {0} > 1: the group decomposes as a free product; reduce parameters")]
    FreeProduct(u32),
    #[error("{c} is not a unit mod {n}")]
    NotUnit { c: u32, n: u32 },
    #[error("p must be one of 3, 4, 5, got {0}")]
    BadOrder(u32),
}

/// The triple `(n, m, k)` with its derived residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibParams {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    /// `k mod n`
    pub a: u32,
    /// `k - m mod n`
    pub b: u32,
    pub gcd: u32,
}

impl FibParams {
    pub fn a_zero(&self) -> bool {
        self.a == 0
    }

    pub fn b_zero(&self) -> bool {
        self.b == 0
    }

    pub fn reducible(&self) -> bool {
        self.gcd > 1
    }

    /// Errors with the free-product message when `gcd(n,m,k) > 1`.
    pub fn require_coprime(&self) -> Result<(), ParamError> {
        if self.gcd > 1 {
            Err(ParamError::FreeProduct(self.gcd))
        } else {
            Ok(())
        }
    }
}

pub fn derive(n: u32, m: u32, k: u32) -> Result<FibParams, ParamError> {
    if n < 2 {
        return Err(ParamError::RankTooSmall(n));
    }
    if m >= n {
        return Err(ParamError::OutOfRange { name: "m", value: m, n });
    }
    if k >= n {
        return Err(ParamError::OutOfRange { name: "k", value: k, n });
    }
    Ok(from_residues(n, m, k))
}

fn from_residues(n: u32, m: u32, k: u32) -> FibParams {
    let a = k % n;
    let b = (k + n - m) % n;
    FibParams { n, m, k, a, b, gcd: n.gcd(&m).gcd(&k) }
}

/// `G_n(m,k) ~ G_n(n-m, n-m+k)`; exchanges `A` and `B`.
pub fn swap_iso(p: &FibParams) -> FibParams {
    let n = p.n;
    let m = (n - p.m) % n;
    let k = (n - p.m + p.k) % n;
    from_residues(n, m, k)
}

/// Multiplies every subscript by the unit `c`.
pub fn rescale_iso(p: &FibParams, c: u32) -> Result<FibParams, ParamError> {
    let n = p.n;
    let c = c % n;
    if c.gcd(&n) != 1 {
        return Err(ParamError::NotUnit { c, n });
    }
    let mul = |x: u32| ((x as u64 * c as u64) % n as u64) as u32;
    Ok(from_residues(n, mul(p.m), mul(p.k)))
}

/// Canonical representative `(A, B)` of the orbit under unit rescaling and swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitKey {
    pub n: u32,
    pub a: u32,
    pub b: u32,
}

pub fn units(n: u32) -> impl Iterator<Item = u32> {
    (1..n.max(2)).filter(move |c| c.gcd(&n) == 1)
}

pub fn canonicalize(p: &FibParams) -> Result<OrbitKey, ParamError> {
    p.require_coprime()?;
    let n = p.n as u64;
    let (a, b) = (p.a as u64, p.b as u64);
    let best = units(p.n)
        .flat_map(|c| {
            let c = c as u64;
            let ca = (c * a % n) as u32;
            let cb = (c * b % n) as u32;
            [(ca, cb), (cb, ca)]
        })
        .min()
        .unwrap_or((p.a, p.b));
    Ok(OrbitKey { n: p.n, a: best.0, b: best.1 })
}

/// Additive order of `x` in `Z_n`.
pub fn additive_order(x: u32, n: u32) -> u32 {
    n / (x % n).gcd(&n)
}

/// True when `x = s n / p` for some `s` coprime to `p`, i.e. `x` has additive order `p`.
pub fn has_order(x: u32, n: u32, p: u32) -> bool {
    additive_order(x, n) == p
}

/// `x == n/2 mod n` (false for odd `n`).
pub fn is_half(x: u32, n: u32) -> bool {
    n.is_multiple_of(2) && x % n == n / 2
}

/// Representatives `G_{pN}(m, tN)` for `13 <= n <= 7p` with `k` of additive order `p`.
pub fn case_representatives(p: u32) -> Result<Vec<FibParams>, ParamError> {
    // (m, allowed t, allowed N) per family
    let families: Vec<(u32, Vec<u32>, Vec<u32>)> = match p {
        5 => vec![
            (1, vec![1, 2, 3, 4], vec![3, 4, 5, 6, 7]),
            (5, vec![1, 2, 3, 4], vec![3, 4, 6, 7]),
        ],
        4 => vec![
            (1, vec![1, 3], vec![4, 5, 6, 7]),
            (2, vec![1, 3], vec![5, 7]),
            (4, vec![1, 3], vec![5, 7]),
        ],
        3 => vec![(1, vec![1, 2], vec![5, 6, 7]), (3, vec![1, 2], vec![5, 7])],
        _ => return Err(ParamError::BadOrder(p)),
    };
    let mut out = Vec::new();
    for (m, ts, ns) in families {
        for &big_n in &ns {
            for &t in &ts {
                let n = p * big_n;
                out.push(derive(n, m % n, (t * big_n) % n)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn derive_examples() {
        let p = derive(10, 7, 1).unwrap();
        assert_eq!((p.a, p.b), (1, 4));
        let p = derive(8, 5, 1).unwrap();
        assert_eq!((p.a, p.b), (1, 4));
        for k in 0..9 {
            let p = derive(9, 0, k).unwrap();
            assert_eq!(p.a, p.b);
        }
        assert!(derive(1, 0, 0).is_err());
        assert!(derive(5, 5, 0).is_err());
        assert_eq!(derive(6, 2, 4).unwrap().gcd, 2);
    }

    #[test]
    fn swap_examples() {
        let p = derive(10, 7, 1).unwrap();
        let s = swap_iso(&p);
        assert_eq!((s.a, s.b), (4, 1));
        assert_eq!((s.m, s.k), (3, 4));
        let q = derive(13, 2, 1).unwrap();
        assert_eq!((q.a, q.b), (1, 12));
        let s = swap_iso(&q);
        assert_eq!((s.a, s.b), (12, 1));
        let ss = swap_iso(&s);
        assert_eq!((ss.a, ss.b), (q.a, q.b));
    }

    #[test]
    fn rescale_examples() {
        let p = derive(15, 2, 5).unwrap();
        let r = rescale_iso(&p, 8).unwrap();
        assert_eq!((r.m, r.k), (1, 10));
        assert_eq!(rescale_iso(&p, 1).unwrap(), p);
        assert!(rescale_iso(&p, 3).is_err());
        // 8 * 2 = 16 = 1 mod 15
        assert_eq!(rescale_iso(&r, 2).unwrap(), p);
    }

    #[test]
    fn canonicalize_examples() {
        // units mod 8 are {1,3,5,7}; enumerated by hand:
        // (1,5)->(3,7),(5,1),(7,3) plus swaps, least is (1,5)
        let h84 = canonicalize(&derive(8, 4, 1).unwrap()).unwrap();
        assert_eq!((h84.a, h84.b), (1, 5));
        let h86 = canonicalize(&derive(8, 6, 1).unwrap()).unwrap();
        assert_eq!((h86.a, h86.b), (1, 3));
        assert_ne!(h84, h86);
        for n in 3..20 {
            let f = derive(n, 1, 2 % n).unwrap();
            if f.gcd > 1 {
                continue;
            }
            let g = derive(n, n - 1, 1).unwrap();
            assert_eq!(canonicalize(&f).unwrap(), canonicalize(&g).unwrap());
        }
        assert!(canonicalize(&derive(6, 2, 4).unwrap()).is_err());
    }

    #[test]
    fn case_representative_counts() {
        assert_eq!(case_representatives(5).unwrap().len(), 36);
        assert_eq!(case_representatives(4).unwrap().len(), 16);
        assert_eq!(case_representatives(3).unwrap().len(), 10);
        assert!(case_representatives(6).is_err());
        for p in 3..=5 {
            for r in case_representatives(p).unwrap() {
                assert!(has_order(r.k, r.n, p), "{r:?}");
                assert!(r.n >= 13 && r.n <= 7 * p, "{r:?}");
                assert_eq!(r.gcd, 1, "{r:?}");
            }
        }
    }

    #[test]
    fn order_and_half() {
        assert_eq!(additive_order(8, 24), 3);
        assert_eq!(additive_order(0, 24), 1);
        assert!(has_order(16, 24, 3));
        assert!(!has_order(16, 25, 3));
        assert!(is_half(5, 10));
        assert!(!is_half(5, 11));
    }

    fn arb_params() -> impl Strategy<Value = FibParams> {
        (2u32..60).prop_flat_map(|n| (Just(n), 0..n, 0..n)).prop_map(|(n, m, k)| derive(n, m, k).unwrap())
    }

    proptest! {
        #[test]
        fn gcd_of_residues(p in arb_params()) {
            prop_assert_eq!(p.gcd, p.n.gcd(&p.a).gcd(&p.b));
            let s = swap_iso(&p);
            prop_assert_eq!((s.a, s.b), (p.b, p.a));
        }

        #[test]
        fn canonicalize_is_orbit_invariant(p in arb_params(), c in 1u32..60) {
            prop_assume!(p.gcd == 1);
            let key = canonicalize(&p).unwrap();
            prop_assert_eq!(canonicalize(&swap_iso(&p)).unwrap(), key);
            if c % p.n != 0 && (c % p.n).gcd(&p.n) == 1 {
                prop_assert_eq!(canonicalize(&rescale_iso(&p, c).unwrap()).unwrap(), key);
            }
            let again = derive(key.n, (key.a + key.n - key.b) % key.n, key.a).unwrap();
            prop_assert_eq!(canonicalize(&again).unwrap(), key);
        }
    }
}
