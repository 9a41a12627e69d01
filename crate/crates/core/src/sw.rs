//! Schmidt–White conditions for two-weight irreducible cyclic codes.
//!
//! For `g > 1` coprime to `p`, with `h = ord_g(p)`:
//!
//! ```text
//! θ(g, p) = min_{1 ≤ j < g} S_p(j(p^h − 1)/g) / (p − 1)
//! ```
//!
//! where `S_p` is the base-p digit sum. A pair `(m, ε)` qualifies when
//! `m | g − 1`, `m·p^{sθ} ≡ ε (mod g)` and `m(g − m) = (g − 1)p^{s(h − 2θ)}`.
//! Each qualifying pair yields two candidate weights
//!
//! ```text
//! w1 = λ(q−1)p^{sθ}(p^{s(h−θ)} − εm)/(dq),  w2 = λ(q−1)p^{sθ}(p^{s(h−θ)} − εm + εg)/(dq).
//! ```
//!
//! The conditions are integer equations, so when `sθ` or `s(h − 2θ)` is not
//! a nonnegative integer there are no solutions.

use crate::arith::{self, gcd};
use crate::codes::{CodeSpec, Role};
use crate::error::{Error, Result};
use crate::params::TwoZeroParams;
use crate::weights::{self, EnumOptions};
use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

/// Sum of the base-p digits of `x`.
pub fn digit_sum(x: &BigUint, p: u64) -> u64 {
    let p = BigUint::from(p);
    let mut rest = x.clone();
    let mut sum = 0u64;
    while !rest.is_zero() {
        sum += (&rest % &p).to_u64().unwrap();
        rest /= &p;
    }
    sum
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theta {
    /// ord_g(p).
    pub h: u64,
    pub min_digit_sum: u64,
    pub value: Ratio<u64>,
}

fn check_inputs(g: u64, p: u64) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if g < 2 {
        return Err(Error::ConstraintViolated("g>1".into()));
    }
    if gcd(g, p) != 1 {
        return Err(Error::NotCoprime { g, p });
    }
    Ok(())
}

pub fn theta(g: u64, p: u64) -> Result<Theta> {
    check_inputs(g, p)?;
    let h = arith::mult_order_mod(p, g).expect("coprime");
    let period = num_traits::pow(BigUint::from(p), h as usize) - 1u32;
    let step = &period / g;
    let min_digit_sum = (1..g)
        .map(|j| digit_sum(&(&step * j), p))
        .min()
        .expect("g > 1");
    Ok(Theta { h, min_digit_sum, value: Ratio::new(min_digit_sum, p - 1) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SwSolution {
    pub m: u64,
    pub epsilon: i8,
}

/// θ, h and every (m, ε) satisfying the three conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwAnalysis {
    pub g: u64,
    pub p: u64,
    pub s: u64,
    pub theta: Theta,
    pub solutions: Vec<SwSolution>,
}

impl SwAnalysis {
    /// sθ when it is an integer.
    pub fn s_theta(&self) -> Option<u64> {
        integral(self.theta.value * self.s)
    }
}

fn integral(x: Ratio<u64>) -> Option<u64> {
    x.is_integer().then(|| x.to_integer())
}

pub fn sw_search(g: u64, p: u64, s: u64) -> Result<Vec<SwSolution>> {
    Ok(analyze(g, p, s)?.solutions)
}

pub fn analyze(g: u64, p: u64, s: u64) -> Result<SwAnalysis> {
    if s == 0 {
        return Err(Error::ConstraintViolated("s≥1".into()));
    }
    let theta = theta(g, p)?;
    let mut out = SwAnalysis { g, p, s, theta, solutions: Vec::new() };
    let Some(s_theta) = out.s_theta() else {
        return Ok(out);
    };
    // s(h − 2θ) must be a nonnegative integer
    let sh = s * out.theta.h;
    let Some(exp3) = sh.checked_sub(2 * s_theta) else {
        return Ok(out);
    };
    let rhs3 = BigUint::from(g - 1) * num_traits::pow(BigUint::from(p), exp3 as usize);
    let lift = arith::pow_mod(p, s_theta, g);
    for m in arith::divisors(g - 1) {
        if BigUint::from(m) * BigUint::from(g - m) != rhs3 {
            continue;
        }
        let residue = (m as u128 * lift as u128 % g as u128) as u64;
        for epsilon in [1i8, -1] {
            let target = if epsilon == 1 { 1 % g } else { g - 1 };
            if residue == target {
                out.solutions.push(SwSolution { m, epsilon });
            }
        }
    }
    Ok(out)
}

/// Scaling inputs for the candidate weights of one irreducible code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwContext {
    pub lambda: u64,
    pub d: u64,
    pub q: u64,
    pub p: u64,
    pub s: u64,
    pub h: u64,
    pub theta: Ratio<u64>,
    pub g: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePair {
    pub w1: BigRational,
    pub w2: BigRational,
    /// One of the weights is zero: the code would be one-weight.
    pub degenerate: bool,
}

pub fn candidate_weights(ctx: &SwContext, sol: SwSolution) -> Result<CandidatePair> {
    let s_theta = integral(ctx.theta * ctx.s).ok_or(Error::NonIntegralTheta)?;
    let upper = (ctx.s * ctx.h).checked_sub(s_theta).ok_or(Error::NonIntegralTheta)?;
    let p = BigInt::from(ctx.p);
    let lead = num_traits::pow(p.clone(), upper as usize);
    let eps = BigInt::from(sol.epsilon);
    let base = BigInt::from(ctx.lambda * (ctx.q - 1)) * num_traits::pow(p, s_theta as usize);
    let den = BigInt::from(ctx.d * ctx.q);
    let inner1 = &lead - &eps * BigInt::from(sol.m);
    let inner2 = &inner1 + &eps * BigInt::from(ctx.g);
    let w1 = BigRational::new(&base * inner1, den.clone());
    let w2 = BigRational::new(&base * inner2, den);
    let degenerate = w1.is_zero() || w2.is_zero();
    Ok(CandidatePair { w1, w2, degenerate })
}

/// Weight structure of an irreducible code found by enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    OneWeight(u64),
    TwoWeight { w1: u64, w2: u64, sw_match: bool },
    Many(usize),
}

/// Every candidate pair for a tuple's `Cd`; empty when g = 1.
pub fn tuple_candidates(params: &TwoZeroParams) -> Result<Vec<CandidatePair>> {
    let (g, p) = (params.g, params.p);
    if g < 2 {
        return Ok(Vec::new());
    }
    let h = arith::mult_order_mod(p, g).expect("g divides p^{tk} − 1");
    let kt = params.k as u64 * params.t as u64;
    if !kt.is_multiple_of(h) {
        return Err(Error::Internal(format!("ord_{g}({p}) = {h} does not divide kt = {kt}")));
    }
    let s = kt / h;
    let analysis = analyze(g, p, s)?;
    let ctx = SwContext {
        lambda: params.lambda,
        d: params.d,
        q: params.q,
        p,
        s,
        h,
        theta: analysis.theta.value,
        g,
    };
    analysis.solutions.iter().map(|&sol| candidate_weights(&ctx, sol)).collect()
}

/// Classifies an observed weight set of `Cd` and, when it has two weights,
/// compares it with every candidate pair.
pub fn classify_weights(params: &TwoZeroParams, weights: &[usize]) -> Result<Classification> {
    Ok(match *weights {
        [w] => Classification::OneWeight(w as u64),
        [w1, w2] => {
            let observed: BTreeSet<BigRational> =
                [w1, w2].iter().map(|&w| BigRational::from_integer(BigInt::from(w))).collect();
            let sw_match = tuple_candidates(params)?.into_iter().any(|c| {
                let set: BTreeSet<BigRational> = [c.w1, c.w2].into_iter().collect();
                set == observed
            });
            Classification::TwoWeight { w1: w1 as u64, w2: w2 as u64, sw_match }
        }
        _ => Classification::Many(weights.len()),
    })
}

/// Brute-forces the weights of a `Cd` code and classifies them.
pub fn classify_irreducible(spec: &CodeSpec, opts: EnumOptions) -> Result<Classification> {
    if spec.role != Role::Cd {
        return Err(Error::UnsupportedRole(spec.role.to_string()));
    }
    let e = weights::weight_distribution(&spec.code, opts)?;
    classify_weights(&spec.params, &e.dist.nonzero_weights())
}

/// Rationals print as `a/b`, always with a denominator.
pub fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn fmt_small_ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl Classification {
    pub fn is_one_weight(&self) -> bool {
        matches!(self, Classification::OneWeight(_))
    }
}
