//! Admissible parameter tuples of the two-zero family and their derived scalars.
//!
//! A tuple is `(p, t, k, d, e, λ)` with `q = p^t`, `de | q − 1`, `e > 1`,
//! `λ | d`, and code length `n = λ(q^k − 1)/d ≥ 3` such that `F_{q^k}` is the
//! splitting field of `x^n − 1`, i.e. `ord_n(q) = k`.

use crate::arith::{self, gcd};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoZeroParams {
    pub p: u64,
    pub t: u32,
    pub k: u32,
    pub q: u64,
    pub d: u64,
    pub e: u64,
    #[serde(rename = "D")]
    pub big_d: u64,
    pub lambda: u64,
    pub n: u64,
    pub f: u64,
    pub g: u64,
    pub f_prime: u64,
    pub n1: u64,
    pub n2: u64,
    pub mu: u64,
    pub msg_space: u64,
}

fn violated(name: &str) -> Error {
    Error::ConstraintViolated(name.to_string())
}

impl TwoZeroParams {
    /// Validates a tuple and computes every derived quantity.
    pub fn derive(p: u64, t: u32, k: u32, d: u64, e: u64, lambda: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if t == 0 {
            return Err(violated("t≥1"));
        }
        if k == 0 {
            return Err(violated("k≥1"));
        }
        if d == 0 {
            return Err(violated("d≥1"));
        }
        if lambda == 0 {
            return Err(violated("λ≥1"));
        }
        if e < 2 {
            return Err(violated("e>1"));
        }
        let q = arith::checked_pow(p, t).ok_or_else(|| violated("q overflows"))?;
        let qk = arith::checked_pow(q, k).ok_or_else(|| violated("q^k overflows"))?;
        let msg_space = arith::checked_pow(q, 2 * k).ok_or_else(|| violated("q^2k overflows"))?;
        let big_order = qk - 1;
        if (q - 1) % (d * e) != 0 {
            return Err(violated("de∤(q−1)"));
        }
        if !d.is_multiple_of(lambda) {
            return Err(violated("λ∤d"));
        }
        let big_d = big_order / e;
        let n1 = big_order / d;
        let n = lambda * n1;
        if n < 3 {
            return Err(violated("n<3"));
        }
        if gcd(n, q) != 1 {
            return Err(violated("gcd(n,q)≠1"));
        }
        if arith::mult_order_mod(q, n) != Some(k as u64) {
            return Err(violated("ord_n(q)≠k"));
        }
        let sub = big_order / (q - 1);
        let f = gcd(sub, d * e);
        let g = gcd(sub, d);
        let f_prime = f / g;
        let n2 = n1 * (q - 1) / gcd(q - 1, n1);
        let mu = lambda * (q - 1) / d;
        if (q - 1) % mu != 0 {
            return Err(violated("μ∤(q−1)"));
        }
        Ok(TwoZeroParams {
            p,
            t,
            k,
            q,
            d,
            e,
            big_d,
            lambda,
            n,
            f,
            g,
            f_prime,
            n1,
            n2,
            mu,
            msg_space,
        })
    }

    /// q^k − 1.
    pub fn big_order(&self) -> u64 {
        self.q.pow(self.k) - 1
    }

    /// (q^k − 1)/(q − 1).
    pub fn subfield_step(&self) -> u64 {
        self.big_order() / (self.q - 1)
    }

    /// The second exponent of the pair, d + D.
    pub fn d_plus_big_d(&self) -> u64 {
        self.d + self.big_d
    }

    /// (q^k − 1)/g, the second closed form of n2. Disagreement with `n2` is
    /// reported by the verifier, not rejected here.
    pub fn n2_via_g(&self) -> u64 {
        self.big_order() / self.g
    }

    /// The proof's f′ = gcd((q^k − 1)/((q − 1)g), e), which should equal f/g.
    pub fn f_prime_direct(&self) -> u64 {
        gcd(self.subfield_step() / self.g, self.e)
    }
}

/// Budgets bounding a parameter enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub max_q: u64,
    pub max_msgs: u64,
    pub max_n: u64,
}

/// Every admissible tuple within the budgets, in lexicographic order of
/// `(q, k, d, e, λ)`.
pub fn enumerate(budgets: Budgets) -> impl Iterator<Item = TwoZeroParams> {
    let Budgets { max_q, max_msgs, max_n } = budgets;
    (2..=max_q)
        .filter_map(|q| arith::prime_power(q).map(|(p, t)| (q, p, t)))
        .flat_map(move |(q, p, t)| {
            let mut out = Vec::new();
            let mut k = 1u32;
            while (q as u128).pow(2 * k) <= max_msgs as u128 {
                for d in arith::divisors(q - 1) {
                    for e in arith::divisors((q - 1) / d).into_iter().filter(|&e| e > 1) {
                        for lambda in arith::divisors(d) {
                            if let Ok(params) = TwoZeroParams::derive(p, t, k, d, e, lambda) {
                                if params.n <= max_n {
                                    out.push(params);
                                }
                            }
                        }
                    }
                }
                k += 1;
            }
            out
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_t1() {
        let p = TwoZeroParams::derive(3, 1, 2, 1, 2, 1).unwrap();
        assert_eq!((p.q, p.big_d, p.n, p.f, p.g, p.n1, p.n2, p.mu), (3, 4, 8, 2, 1, 8, 8, 2));
        assert_eq!(p.f_prime, 2);
        assert_eq!(p.msg_space, 81);
    }

    #[test]
    fn derive_t2() {
        let p = TwoZeroParams::derive(2, 2, 1, 1, 3, 1).unwrap();
        assert_eq!((p.q, p.big_d, p.n, p.f, p.g, p.mu), (4, 1, 3, 1, 1, 3));
    }

    #[test]
    fn derive_rejections() {
        let err = |r: Result<TwoZeroParams>| match r {
            Err(Error::ConstraintViolated(s)) => s,
            other => panic!("expected violation, got {other:?}"),
        };
        assert_eq!(err(TwoZeroParams::derive(3, 1, 2, 1, 1, 1)), "e>1");
        assert_eq!(err(TwoZeroParams::derive(7, 1, 2, 2, 2, 1)), "de∤(q−1)");
        assert_eq!(err(TwoZeroParams::derive(3, 1, 1, 1, 2, 1)), "n<3");
        assert_eq!(err(TwoZeroParams::derive(5, 1, 1, 2, 2, 3)), "λ∤d");
        assert_eq!(TwoZeroParams::derive(4, 1, 1, 1, 3, 1), Err(Error::NotPrime(4)));
    }

    #[test]
    fn enumerate_small_spaces() {
        let b = |max_q| Budgets { max_q, max_msgs: 1_000_000, max_n: 1000 };
        assert_eq!(enumerate(b(2)).count(), 0);
        let at4: Vec<_> = enumerate(b(4)).collect();
        assert!(at4.iter().any(|p| (p.p, p.t, p.k, p.d, p.e, p.lambda) == (2, 2, 1, 1, 3, 1)));
        let t1 = enumerate(b(3)).find(|p| p.k == 2).unwrap();
        assert_eq!((t1.d, t1.e, t1.lambda, t1.n), (1, 2, 1, 8));
        // q = 3 admits only d = 1, e = 2, λ = 1, and k = 1 gives n = 2
        let ks: Vec<u32> = enumerate(b(3)).map(|p| p.k).collect();
        assert_eq!(ks, vec![2, 3, 4, 5, 6]);
    }
}
