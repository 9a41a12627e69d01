//! Weight distributions by exhaustive enumeration, MacWilliams power moments
//! and transform, dual low-weight counts, and the weight-scaling chain
//! between `Cd`, `C′d`, `C″d` and `C̄d`.
//!
//! Enumeration runs over the message space. Two strategies are available:
//!
//! * `Exhaustive` evaluates every message.
//! * `Symmetric` uses that a cyclic shift of the coordinates and a scalar of
//!   the trace field both preserve weight. Together they act on the exponent
//!   of the first message `u = γ^a` by the subgroup generated by the first
//!   stride and the scalar step, so `a` only needs to range over
//!   `[0, gcd(s_1, step, q^k − 1))`, each class weighted by its size. The
//!   remaining messages are still enumerated in full, so counts are exact.
//!
//! Both strategies give identical distributions; the test suites check this
//! on every small tuple.

use crate::arith::gcd;
use crate::codes::{CodeSpec, Role, TraceCode};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldTower, TraceLevel};
use crate::params::TwoZeroParams;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Default cap on coordinate evaluations per distribution.
pub const DEFAULT_BUDGET: u128 = 1 << 31;

/// Messages of the second slot handled by one parallel task.
const CHUNK: u32 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    #[serde(rename = "n")]
    pub length: usize,
    #[serde(rename = "q")]
    pub alphabet: u64,
    pub dim: u32,
    /// weight → number of words.
    pub counts: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    /// Validates `Σ counts = alphabet^dim`, `counts[0] = 1` and the weight range.
    pub fn new(length: usize, alphabet: u64, dim: u32, counts: BTreeMap<usize, u64>) -> Result<Self> {
        let total: u128 = counts.values().map(|&c| c as u128).sum();
        let expected = (alphabet as u128).checked_pow(dim);
        if Some(total) != expected {
            return Err(Error::Internal(format!("counts sum to {total}, not {alphabet}^{dim}")));
        }
        if counts.get(&0) != Some(&1) {
            return Err(Error::Internal("zero word must appear exactly once".into()));
        }
        if counts.keys().any(|&w| w > length) {
            return Err(Error::Internal("weight exceeds length".into()));
        }
        let counts = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        Ok(WeightDistribution { length, alphabet, dim, counts })
    }

    /// The zero code of length `n`.
    pub fn zero_code(length: usize, alphabet: u64) -> Self {
        WeightDistribution { length, alphabet, dim: 0, counts: BTreeMap::from([(0, 1)]) }
    }

    /// Sorted distinct nonzero weights.
    pub fn nonzero_weights(&self) -> Vec<usize> {
        self.counts.keys().copied().filter(|&w| w > 0).collect()
    }

    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(&w).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Symmetric,
    Exhaustive,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub budget: u128,
    /// Enumerate even when the cost exceeds the budget.
    pub force: bool,
    pub strategy: Strategy,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { budget: DEFAULT_BUDGET, force: false, strategy: Strategy::Symmetric }
    }
}

/// A distribution and the coordinate evaluations it took.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub dist: WeightDistribution,
    pub cost: u128,
}

/// Number of classes of first-message exponents under the weight-preserving
/// group. Without cyclicity only the scalars of the trace field remain.
fn symmetry_modulus(code: &TraceCode) -> u64 {
    let tw = code.tower;
    let n = tw.big_order() as u64;
    let step = tw.level_step(code.level) as u64;
    let cyclic = code.strides.iter().all(|&s| (s * code.length as u64).is_multiple_of(n));
    if cyclic {
        gcd(gcd(code.strides[0], step), n)
    } else {
        step
    }
}

/// Planned coordinate evaluations for a strategy.
pub fn planned_cost(code: &TraceCode, strategy: Strategy) -> u128 {
    let size = code.tower.size() as u128;
    let len = code.length as u128;
    let inner = size.pow(code.msg_rank() as u32 - 1);
    let outer = match strategy {
        Strategy::Exhaustive => size,
        Strategy::Symmetric => 1 + symmetry_modulus(code) as u128,
    };
    len * outer * inner
}

/// Level-index of Tr(γ^i) for i in [0, 2(q^k − 1)), so sums of two
/// exponents never need a reduction.
fn doubled_trace_table(tw: &FieldTower, level: TraceLevel) -> Vec<u32> {
    let n = tw.big_order() as usize;
    let table: Vec<u32> = (0..n)
        .map(|i| {
            let x = tw.trace(tw.gamma_pow(i as u64), level);
            tw.level_index(x, level).expect("trace lands in its subfield")
        })
        .collect();
    table.iter().chain(table.iter()).copied().collect()
}

fn negation_table(tw: &FieldTower, level: TraceLevel) -> Vec<u32> {
    (0..tw.level_size(level))
        .map(|i| {
            let x = tw.neg(tw.from_level_index(i, level));
            tw.level_index(x, level).unwrap()
        })
        .collect()
}

pub fn weight_distribution(code: &TraceCode, opts: EnumOptions) -> Result<Enumeration> {
    if !(1..=2).contains(&code.msg_rank()) {
        return Err(Error::Internal("only one or two message slots are supported".into()));
    }
    let cost = planned_cost(code, opts.strategy);
    if cost > opts.budget && !opts.force {
        return Err(Error::BudgetExceeded { cost, budget: opts.budget });
    }
    let tw = code.tower;
    let big_order = tw.big_order();
    let tr = doubled_trace_table(tw, code.level);
    let neg = negation_table(tw, code.level);
    let off1 = code.offsets(code.strides[0]);

    // (first message, multiplicity)
    let firsts: Vec<(Elem, u64)> = match opts.strategy {
        Strategy::Exhaustive => tw.elements().map(|u| (u, 1)).collect(),
        Strategy::Symmetric => {
            let g = symmetry_modulus(code);
            std::iter::once((Elem::ZERO, 1))
                .chain((0..g).map(|a| (tw.gamma_pow(a), big_order as u64 / g)))
                .collect()
        }
    };

    let len = code.length;
    let hist = if code.msg_rank() == 1 {
        firsts
            .par_iter()
            .fold(
                || vec![0u64; len + 1],
                |mut h, &(u, mult)| {
                    let w = match u.log() {
                        None => 0,
                        Some(a) => off1.iter().filter(|&&o| tr[(a + o) as usize] != 0).count(),
                    };
                    h[w] += mult;
                    h
                },
            )
            .reduce(|| vec![0u64; len + 1], merge)
    } else {
        let off2 = code.offsets(code.strides[1]);
        // second-slot exponents are split into chunks; ZERO rides with chunk 0
        let chunks: Vec<(usize, u32)> = (0..firsts.len())
            .flat_map(|i| (0..big_order.div_ceil(CHUNK)).map(move |c| (i, c * CHUNK)))
            .collect();
        chunks
            .par_iter()
            .fold(
                || vec![0u64; len + 1],
                |mut h, &(i, start)| {
                    let (u, mult) = firsts[i];
                    // the coordinate vanishes iff Tr(vβ^{s2 j}) = −Tr(uβ^{s1 j})
                    let target: Vec<u32> = match u.log() {
                        None => vec![0; len],
                        Some(a) => off1.iter().map(|&o| neg[tr[(a + o) as usize] as usize]).collect(),
                    };
                    if start == 0 {
                        let zeros = target.iter().filter(|&&x| x == 0).count();
                        h[len - zeros] += mult;
                    }
                    let end = (start + CHUNK).min(big_order);
                    for b in start..end {
                        let zeros = off2
                            .iter()
                            .zip(&target)
                            .filter(|&(&o, &t)| tr[(b + o) as usize] == t)
                            .count();
                        h[len - zeros] += mult;
                    }
                    h
                },
            )
            .reduce(|| vec![0u64; len + 1], merge)
    };

    let dist = distribution_from_messages(code, &hist)?;
    Ok(Enumeration { dist, cost })
}

fn merge(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Message counts → word counts. Every word has the same number of
/// preimages, namely the kernel size `hist[0]`.
fn distribution_from_messages(code: &TraceCode, hist: &[u64]) -> Result<WeightDistribution> {
    let kernel = hist[0];
    let messages = (code.tower.size() as u128).pow(code.msg_rank() as u32);
    let words = messages / kernel as u128;
    let alphabet = code.alphabet() as u64;
    let mut dim = 0u32;
    let mut acc = 1u128;
    while acc < words {
        acc *= alphabet as u128;
        dim += 1;
    }
    if acc != words || !messages.is_multiple_of(kernel as u128) {
        return Err(Error::Internal(format!("{words} words is not a power of {alphabet}")));
    }
    let mut counts = BTreeMap::new();
    for (w, &c) in hist.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c % kernel != 0 {
            return Err(Error::Internal("uneven fibres over codewords".into()));
        }
        counts.insert(w, c / kernel);
    }
    WeightDistribution::new(code.length, alphabet, dim, counts)
}

fn big(x: impl Into<BigInt>) -> BigInt {
    x.into()
}

/// Result of checking identities (1)–(3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub v0_ok: bool,
    pub v1_ok: bool,
    pub v2_ok: bool,
    /// LHS − RHS of each identity, exactly.
    pub residuals: [BigRational; 3],
    /// Left-hand sides Σ A_i, Σ w_i A_i, Σ w_i² A_i.
    pub moments: [BigInt; 3],
}

impl MomentReport {
    pub fn all_ok(&self) -> bool {
        self.v0_ok && self.v1_ok && self.v2_ok
    }
}

/// The first three power moments against their MacWilliams values:
/// ΣA_i = q^m − 1, Σw_iA_i = (n(q−1) − B1)q^{m−1},
/// Σw_i²A_i = [n²(q−1)² + n(q−1) − B1(q + 2(n−1)(q−1)) + 2B2]q^{m−2}.
pub fn power_moment_check(dist: &WeightDistribution, b1: u64, b2: u64) -> MomentReport {
    let n = big(dist.length as u64);
    let q = big(dist.alphabet);
    let (b1, b2) = (big(b1), big(b2));
    let one = BigInt::one();
    let qm = BigRational::from_integer(num_traits::pow(q.clone(), dist.dim as usize));
    let qr = BigRational::from_integer(q.clone());

    let mut moments = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (&w, &c) in dist.counts.iter().filter(|(&w, _)| w > 0) {
        let (w, c) = (big(w as u64), big(c));
        moments[0] += &c;
        moments[1] += &w * &c;
        moments[2] += &w * &w * &c;
    }
    let qm1 = &q - &one;
    let rhs0 = &qm - BigRational::one();
    let rhs1 = BigRational::from_integer(&n * &qm1 - &b1) * &qm / &qr;
    let bracket = &n * &n * &qm1 * &qm1 + &n * &qm1
        - &b1 * (&q + big(2) * (&n - &one) * &qm1)
        + big(2) * &b2;
    let rhs2 = BigRational::from_integer(bracket) * &qm / (&qr * &qr);
    let residuals = [
        BigRational::from_integer(moments[0].clone()) - rhs0,
        BigRational::from_integer(moments[1].clone()) - rhs1,
        BigRational::from_integer(moments[2].clone()) - rhs2,
    ];
    MomentReport {
        v0_ok: residuals[0].is_zero(),
        v1_ok: residuals[1].is_zero(),
        v2_ok: residuals[2].is_zero(),
        residuals,
        moments,
    }
}

/// Indices v in [0, n) where Σ C_i·C(n−i, v) = q^{m−v}·Σ B_i·C(n−i, n−v) fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullMomentReport {
    pub checked: usize,
    pub failures: Vec<usize>,
}

impl FullMomentReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn full_moment_check(dist: &WeightDistribution, dual: &WeightDistribution) -> FullMomentReport {
    let n = dist.length;
    let q = BigUint::from(dist.alphabet);
    let m = dist.dim as usize;
    let binom = |a: usize, b: usize| -> BigUint {
        if b > a {
            BigUint::zero()
        } else {
            num_integer::binomial(BigUint::from(a), BigUint::from(b))
        }
    };
    let failures = (0..n)
        .filter(|&v| {
            let lhs: BigUint = dist.counts.iter().map(|(&i, &c)| BigUint::from(c) * binom(n - i, v)).sum();
            let rhs: BigUint = dual.counts.iter().map(|(&i, &c)| BigUint::from(c) * binom(n - i, n - v)).sum();
            // multiply through by q^v to stay integral
            lhs * num_traits::pow(q.clone(), v) != rhs * num_traits::pow(q.clone(), m)
        })
        .collect();
    FullMomentReport { checked: n, failures }
}

/// Dual counts B_0..=B_upto via Krawtchouk polynomials:
/// B_j = q^{−m} Σ_i A_i K_j(i).
pub fn macwilliams_prefix(dist: &WeightDistribution, upto: usize) -> Result<Vec<BigInt>> {
    let n = dist.length;
    let upto = upto.min(n);
    let q = big(dist.alphabet);
    let qm1 = &q - BigInt::one();
    let mut sums = vec![BigInt::zero(); upto + 1];
    for (&i, &a) in &dist.counts {
        let a = big(a);
        let ib = big(i as u64);
        let mut prev = BigInt::zero();
        let mut cur = BigInt::one();
        for (j, sum) in sums.iter_mut().enumerate() {
            *sum += &a * &cur;
            if j == upto {
                break;
            }
            // (j+1)K_{j+1} = [(q−1)(n−j) + j − q i]K_j − (q−1)(n−j+1)K_{j−1}
            let jb = big(j as u64);
            let nj = big((n - j) as u64);
            let next = ((&qm1 * &nj + &jb - &q * &ib) * &cur - &qm1 * (nj + 1) * &prev) / (jb + 1);
            prev = std::mem::replace(&mut cur, next);
        }
    }
    let qm = num_traits::pow(q, dist.dim as usize);
    sums.into_iter()
        .enumerate()
        .map(|(j, s)| {
            let (b, r) = s.div_rem(&qm);
            if !r.is_zero() || b.is_negative() {
                Err(Error::NonIntegerCount { index: j })
            } else {
                Ok(b)
            }
        })
        .collect()
}

/// The dual distribution, W⊥(x, y) = q^{−m}·W(x + (q−1)y, x − y).
pub fn macwilliams_transform(dist: &WeightDistribution) -> Result<WeightDistribution> {
    let b = macwilliams_prefix(dist, dist.length)?;
    let mut counts = BTreeMap::new();
    for (j, c) in b.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = c.to_u64().ok_or_else(|| Error::Internal("dual count exceeds u64".into()))?;
        counts.insert(j, c);
    }
    let dim = (dist.length as u32)
        .checked_sub(dist.dim)
        .ok_or_else(|| Error::Internal("dimension exceeds length".into()))?;
    WeightDistribution::new(dist.length, dist.alphabet, dim, counts)
}

/// Weight-1 and weight-2 dual words, counted three ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualLowWeight {
    pub b1: u64,
    pub b2_brute: u64,
    /// Uncorrected closed form under test; `None` where its preconditions fail.
    pub b2_paper: Option<u64>,
    pub b2_corrected: u64,
}

impl DualLowWeight {
    pub fn paper_applicable(&self) -> bool {
        self.b2_paper.is_some()
    }
}

/// Counts dual words of weight 1 and 2 by running over all supports.
///
/// A word `y` lies in the dual iff `Σ_j y_j β^{s j} = 0` for every stride,
/// since the trace form is nondegenerate and `y_j ∈ F_q`.
pub fn dual_low_weight(spec: &CodeSpec) -> Result<DualLowWeight> {
    if !matches!(spec.role, Role::C | Role::Cd) {
        return Err(Error::UnsupportedRole(spec.role.to_string()));
    }
    let (b1, b2_brute) = brute_low_weight(&spec.code);
    let p = &spec.params;
    let q = p.q;
    let (b2_paper, b2_corrected) = match spec.role {
        Role::C => {
            let shifts = p.lambda * p.f * (q - 1) / (p.d * p.e) - 1;
            (Some(shifts * (q - 1)), (q - 1) * p.n * shifts / 2)
        }
        _ => {
            let shifts = p.lambda * (q - 1) * p.g / p.d - 1;
            let applicable = p.d * p.e == q - 1 && p.lambda == 1 && p.f == 1;
            let closed = applicable.then(|| ((q - 1) / p.d - 1) * (q - 1));
            (closed, (q - 1) * p.n * shifts / 2)
        }
    };
    Ok(DualLowWeight {
        b1,
        b2_brute,
        b2_paper,
        b2_corrected,
    })
}

/// (B1, B2) of the dual of a trace code over its trace field, by support
/// enumeration.
pub fn brute_low_weight(code: &TraceCode) -> (u64, u64) {
    let tw = code.tower;
    let big_order = tw.big_order() as u64;
    let step = tw.level_step(code.level) as u64;
    let len = code.length as u64;
    let scalars: Vec<u64> = (0..tw.level_size(code.level) as u64 - 1).map(|i| i * step).collect();
    let neg_shift = if tw.p() == 2 { 0 } else { big_order / 2 };

    // a·β^{s i} with a ≠ 0 is never zero; counted anyway as a cross-check
    let b1 = (0..len)
        .flat_map(|i| scalars.iter().map(move |&a| (i, a)))
        .filter(|&(i, a)| {
            code.strides.iter().all(|&s| {
                let term = tw.mul(tw.gamma_pow(a), tw.inv(tw.gamma_pow(s * i)).unwrap());
                term.is_zero()
            })
        })
        .count() as u64;

    // a β^{s i} + b β^{s j} = 0  ⇔  b = −a γ^{s(j − i)}
    let b2 = (0..len)
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            for j in i + 1..len {
                for &a in &scalars {
                    let mut b = None;
                    let ok = code.strides.iter().all(|&s| {
                        let cand = (a + s * (j - i) % big_order + neg_shift) % big_order;
                        cand.is_multiple_of(step) && *b.get_or_insert(cand) == cand
                    });
                    if ok {
                        count += 1;
                    }
                }
            }
            count
        })
        .sum();
    (b1, b2)
}

/// One rational scaling relation between two weight sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingCheck {
    pub name: &'static str,
    pub factor: BigRational,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
    pub ok: bool,
}

impl ScalingCheck {
    fn new(name: &'static str, factor: BigRational, lhs: &[usize], rhs: &[usize]) -> Self {
        let left: BTreeSet<BigRational> = lhs.iter().map(|&w| BigRational::from_integer(big(w as u64))).collect();
        let right: BTreeSet<BigRational> = rhs
            .iter()
            .map(|&w| &factor * BigRational::from_integer(big(w as u64)))
            .collect();
        ScalingCheck { name, factor, lhs: lhs.to_vec(), rhs: rhs.to_vec(), ok: left == right }
    }

    /// The scaled right-hand side, e.g. to spot non-integral weights.
    pub fn scaled_rhs(&self) -> Vec<BigRational> {
        self.rhs.iter().map(|&w| &self.factor * BigRational::from_integer(big(w as u64))).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub wt_cd: Vec<usize>,
    pub wt_cd_prime: Vec<usize>,
    pub wt_cd_double_prime: Vec<usize>,
    pub wt_bar_cd: Vec<usize>,
    pub checks: Vec<ScalingCheck>,
    pub cost: u128,
}

impl ScalingReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(big(num), big(den))
}

/// Brute-forces the weight sets of Cd, C′d, C″d and C̄d and checks
/// wt(Cd) = λ·wt(C′d), wt(C″d) = (d/g)·wt(C′d),
/// wt(C̄d) = q(p−1)/(p(q−1))·wt(C″d), wt(Cd) = λgp(q−1)/(dq(p−1))·wt(C̄d).
pub fn scaling_chain_check(params: &TwoZeroParams, tw: &FieldTower, opts: EnumOptions) -> Result<ScalingReport> {
    let mut cost = 0;
    let mut weights = |role| -> Result<Vec<usize>> {
        let spec = CodeSpec::new(role, params, tw)?;
        let e = weight_distribution(&spec.code, opts)?;
        cost += e.cost;
        Ok(e.dist.nonzero_weights())
    };
    let wt_cd = weights(Role::Cd)?;
    let wt_cd_prime = weights(Role::CdPrime)?;
    let wt_cd_double_prime = weights(Role::CdDoublePrime)?;
    let wt_bar_cd = weights(Role::BarCd)?;
    let TwoZeroParams { p, q, d, g, lambda, .. } = *params;
    let checks = vec![
        ScalingCheck::new("wt(Cd)=λ·wt(C'd)", ratio(lambda, 1), &wt_cd, &wt_cd_prime),
        ScalingCheck::new("wt(C''d)=(d/g)·wt(C'd)", ratio(d, g), &wt_cd_double_prime, &wt_cd_prime),
        ScalingCheck::new(
            "wt(C̄d)=q(p−1)/(p(q−1))·wt(C''d)",
            ratio(q * (p - 1), p * (q - 1)),
            &wt_bar_cd,
            &wt_cd_double_prime,
        ),
        ScalingCheck::new(
            "wt(Cd)=λgp(q−1)/(dq(p−1))·wt(C̄d)",
            ratio(lambda * g * p * (q - 1), d * q * (p - 1)),
            &wt_cd,
            &wt_bar_cd,
        ),
    ];
    Ok(ScalingReport { wt_cd, wt_cd_prime, wt_cd_double_prime, wt_bar_cd, checks, cost })
}
