//! Exact arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^k}.
//!
//! Every nonzero element is stored as its discrete logarithm to the base of a
//! fixed primitive element γ (the class of `x` modulo a primitive polynomial
//! of degree `tk` over F_p). Addition goes through a Zech table, and the
//! traces into both subfields are precomputed per exponent.
//!
//! The modulus is the lexicographically smallest primitive polynomial, with
//! coefficient vectors compared from the constant term upwards. This makes
//! every table reproducible bit for bit.

use crate::arith;
use crate::error::{Error, Result};
use serde::Serialize;

/// Default cap on `q^k`, the number of elements in the top field.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 22;

const NONE: u32 = u32::MAX;

/// A field element: zero, or `γ^i` with `i` in `[0, q^k - 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(NONE);
    pub const ONE: Elem = Elem(0);

    /// The exponent of a nonzero element.
    #[inline]
    pub fn log(self) -> Option<u32> {
        (self.0 != NONE).then_some(self.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == NONE
    }
}

impl std::fmt::Debug for Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(i) => write!(f, "γ^{i}"),
        }
    }
}

/// Which subfield a trace lands in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TraceLevel {
    /// Tr from F_{q^k} to F_q.
    Q,
    /// Tr from F_{q^k} to F_p.
    P,
}

#[derive(Clone)]
pub struct FieldTower {
    p: u32,
    t: u32,
    k: u32,
    q: u32,
    big_order: u32,
    subfield_step: u32,
    prime_step: u32,
    modulus: Vec<u32>,
    /// exp[i] = γ^i written in the polynomial basis, as a base-p integer.
    exp: Vec<u32>,
    /// Inverse of `exp`; log[0] = NONE.
    log: Vec<u32>,
    zech: Vec<u32>,
    trace_q: Vec<Elem>,
    trace_p: Vec<Elem>,
}

impl FieldTower {
    /// Builds the tower for F_{p^{tk}} with the canonical modulus.
    pub fn build(p: u32, t: u32, k: u32, cap: u64) -> Result<Self> {
        let degree = check_sizes(p, t, k, cap)?;
        let modulus = smallest_primitive(p, degree)
            .ok_or(Error::NoPrimitivePolynomial { p, degree })?;
        Ok(Self::from_modulus(p, t, k, modulus))
    }

    /// Builds the tower with a caller-chosen modulus (monic, low degree first).
    pub fn build_with_modulus(p: u32, t: u32, k: u32, cap: u64, modulus: Vec<u32>) -> Result<Self> {
        let degree = check_sizes(p, t, k, cap)?;
        if modulus.len() != degree as usize + 1
            || modulus[degree as usize] != 1
            || modulus.iter().any(|&c| c >= p)
            || !is_primitive(&modulus, p)
        {
            return Err(Error::NotPrimitive { p, degree });
        }
        Ok(Self::from_modulus(p, t, k, modulus))
    }

    fn from_modulus(p: u32, t: u32, k: u32, modulus: Vec<u32>) -> Self {
        let degree = (t * k) as usize;
        let size = (p as u64).pow(degree as u32) as usize;
        let big_order = (size - 1) as u32;
        let q = p.pow(t);

        // Powers of x, stepping digit vectors by multiplication with x.
        let mut exp = vec![0u32; big_order as usize];
        let mut log = vec![NONE; size];
        let mut digits = vec![0u32; degree];
        digits[0] = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            let code = encode_digits(&digits, p);
            *slot = code;
            log[code as usize] = i as u32;
            // multiply by x: shift up, reduce the overflow with the modulus
            let top = digits[degree - 1];
            for j in (1..degree).rev() {
                digits[j] = digits[j - 1];
            }
            digits[0] = 0;
            if top != 0 {
                for (j, d) in digits.iter_mut().enumerate() {
                    *d = (*d + (p - top) * modulus[j]) % p;
                }
            }
        }

        // 1 + γ^i: bump the constant digit.
        let zech = (0..big_order as usize)
            .map(|i| {
                let code = exp[i];
                let c0 = code % p;
                let bumped = code - c0 + (c0 + 1) % p;
                log[bumped as usize]
            })
            .collect();

        let mut tower = FieldTower {
            p,
            t,
            k,
            q,
            big_order,
            subfield_step: big_order / (q - 1),
            prime_step: big_order / (p - 1),
            modulus,
            exp,
            log,
            zech,
            trace_q: Vec::new(),
            trace_p: Vec::new(),
        };
        tower.trace_q = tower.trace_table(q as u64, k);
        tower.trace_p = tower.trace_table(p as u64, t * k);
        tower
    }

    /// Tr(γ^i) = Σ_{j<terms} γ^{i·r^j} for every exponent i.
    fn trace_table(&self, r: u64, terms: u32) -> Vec<Elem> {
        let n = self.big_order as u64;
        (0..n)
            .map(|i| {
                let mut acc = Elem::ZERO;
                let mut e = i;
                for _ in 0..terms {
                    acc = self.add(acc, Elem(e as u32));
                    e = e * r % n;
                }
                acc
            })
            .collect()
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn t(&self) -> u32 {
        self.t
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// q^k − 1, the order of the multiplicative group.
    pub fn big_order(&self) -> u32 {
        self.big_order
    }
    /// (q^k − 1)/(q − 1): F_q^* = {γ^{i·step}}.
    pub fn subfield_step(&self) -> u32 {
        self.subfield_step
    }
    /// (q^k − 1)/(p − 1): F_p^* = {γ^{i·step}}.
    pub fn prime_step(&self) -> u32 {
        self.prime_step
    }
    /// Number of elements, q^k.
    pub fn size(&self) -> u64 {
        self.big_order as u64 + 1
    }
    /// Primitive polynomial over F_p, low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn zech_table(&self) -> &[u32] {
        &self.zech
    }
    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }
    pub fn trace_q_table(&self) -> &[Elem] {
        &self.trace_q
    }
    pub fn trace_p_table(&self) -> &[Elem] {
        &self.trace_p
    }

    /// γ^i, with the exponent reduced modulo q^k − 1.
    #[inline]
    pub fn gamma_pow(&self, i: u64) -> Elem {
        Elem((i % self.big_order as u64) as u32)
    }

    /// Element with the given polynomial-basis code (base-p digits, constant first).
    pub fn from_poly_code(&self, code: u32) -> Elem {
        Elem(self.log[code as usize])
    }

    pub fn to_poly_code(&self, x: Elem) -> u32 {
        match x.log() {
            None => 0,
            Some(i) => self.exp[i as usize],
        }
    }

    /// All q^k elements: ZERO first, then γ^0, γ^1, ….
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        std::iter::once(Elem::ZERO).chain((0..self.big_order).map(Elem))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let (Some(i), Some(j)) = (a.log(), b.log()) else {
            return if a.is_zero() { b } else { a };
        };
        let n = self.big_order;
        let diff = if j >= i { j - i } else { j + n - i };
        match self.zech[diff as usize] {
            NONE => Elem::ZERO,
            z => Elem(((i as u64 + z as u64) % n as u64) as u32),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match a.log() {
            None => a,
            Some(_) if self.p == 2 => a,
            Some(i) => self.gamma_pow(i as u64 + self.big_order as u64 / 2),
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match (a.log(), b.log()) {
            (Some(i), Some(j)) => self.gamma_pow(i as u64 + j as u64),
            _ => Elem::ZERO,
        }
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        match a.log() {
            None if e == 0 => Elem::ONE,
            None => Elem::ZERO,
            Some(i) => {
                let n = self.big_order as u128;
                Elem(((i as u128 * (e as u128 % n)) % n) as u32)
            }
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        let i = a.log().ok_or(Error::DivisionByZero)?;
        Ok(self.gamma_pow((self.big_order - i) as u64))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Exact multiplicative order.
    pub fn mult_order(&self, a: Elem) -> Result<u64> {
        let i = a.log().ok_or(Error::DivisionByZero)? as u64;
        let n = self.big_order as u64;
        Ok(n / arith::gcd(n, i))
    }

    #[inline]
    pub fn trace_to_q(&self, x: Elem) -> Elem {
        match x.log() {
            None => Elem::ZERO,
            Some(i) => self.trace_q[i as usize],
        }
    }

    #[inline]
    pub fn trace_to_p(&self, x: Elem) -> Elem {
        match x.log() {
            None => Elem::ZERO,
            Some(i) => self.trace_p[i as usize],
        }
    }

    pub fn trace(&self, x: Elem, level: TraceLevel) -> Elem {
        match level {
            TraceLevel::Q => self.trace_to_q(x),
            TraceLevel::P => self.trace_to_p(x),
        }
    }

    pub fn in_subfield_q(&self, x: Elem) -> bool {
        x.log().is_none_or(|i| i % self.subfield_step == 0)
    }

    pub fn in_prime_field(&self, x: Elem) -> bool {
        x.log().is_none_or(|i| i % self.prime_step == 0)
    }

    /// Fixed enumeration of F_q: 0 ↦ 0, γ^{i·step} ↦ i + 1.
    pub fn subfield_index(&self, x: Elem) -> Option<u32> {
        self.level_index(x, TraceLevel::Q)
    }

    /// Same enumeration for a subfield level (F_q or F_p).
    pub fn level_index(&self, x: Elem, level: TraceLevel) -> Option<u32> {
        let step = self.level_step(level);
        match x.log() {
            None => Some(0),
            Some(i) if i % step == 0 => Some(i / step + 1),
            Some(_) => None,
        }
    }

    pub fn from_level_index(&self, idx: u32, level: TraceLevel) -> Elem {
        if idx == 0 {
            Elem::ZERO
        } else {
            Elem((idx - 1) * self.level_step(level))
        }
    }

    pub fn level_step(&self, level: TraceLevel) -> u32 {
        match level {
            TraceLevel::Q => self.subfield_step,
            TraceLevel::P => self.prime_step,
        }
    }

    pub fn level_size(&self, level: TraceLevel) -> u32 {
        match level {
            TraceLevel::Q => self.q,
            TraceLevel::P => self.p,
        }
    }
}

fn check_sizes(p: u32, t: u32, k: u32, cap: u64) -> Result<u32> {
    if !arith::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if t == 0 || k == 0 {
        return Err(Error::ConstraintViolated("t,k ≥ 1".into()));
    }
    let degree = t
        .checked_mul(k)
        .ok_or(Error::SizeExceeded { size: u128::MAX, cap })?;
    let size = (p as u128).checked_pow(degree).unwrap_or(u128::MAX);
    if size > cap as u128 || size > u32::MAX as u128 {
        return Err(Error::SizeExceeded { size, cap });
    }
    Ok(degree)
}

fn encode_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Candidates in lexicographic order of (c_0, c_1, …, c_{n−1}); the first
/// primitive one wins.
fn smallest_primitive(p: u32, degree: u32) -> Option<Vec<u32>> {
    let n = degree as usize;
    let mut coeffs = vec![0u32; n];
    loop {
        if coeffs[0] != 0 {
            let mut f = coeffs.clone();
            f.push(1);
            if is_primitive(&f, p) {
                return Some(f);
            }
        }
        // odometer with c_{n-1} as the fastest digit
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
        }
    }
}

/// `x` has order exactly p^n − 1 modulo `f`. This also forces `f` to be
/// irreducible: the quotient ring then has p^n − 1 units.
fn is_primitive(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if f[0] == 0 {
        return false;
    }
    let order = (p as u64).pow(n as u32) - 1;
    if n == 1 {
        // root is −c_0 ∈ F_p
        let root = (p - f[0]) % p;
        return root != 0 && arith::mult_order_mod(root as u64, p as u64) == Some(order);
    }
    let one = {
        let mut v = vec![0u32; n];
        v[0] = 1;
        v
    };
    let x = {
        let mut v = vec![0u32; n];
        v[1] = 1;
        v
    };
    if poly_pow_mod(&x, order, f, p) != one {
        return false;
    }
    arith::prime_factors(order)
        .into_iter()
        .all(|r| poly_pow_mod(&x, order / r, f, p) != one)
}

fn poly_mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let n = f.len() - 1;
    let mut prod = vec![0u64; 2 * n - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    for deg in (n..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        // subtract c·x^{deg−n}·f
        for (j, &fj) in f.iter().enumerate() {
            let idx = deg - n + j;
            prod[idx] = (prod[idx] + (p as u64 - c) * fj as u64) % p as u64;
        }
    }
    prod.truncate(n);
    prod.into_iter().map(|c| c as u32).collect()
}

fn poly_pow_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let n = f.len() - 1;
    let mut acc = vec![0u32; n];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, f, p);
        }
        b = poly_mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

/// Primitive polynomials of degree `degree` over F_p in canonical order.
/// Used to cross-check modulus independence.
pub fn primitive_polynomials(p: u32, degree: u32) -> impl Iterator<Item = Vec<u32>> {
    let n = degree as usize;
    let total = (p as u64).pow(degree);
    (0..total).filter_map(move |idx| {
        // idx written with c_0 as the most significant digit
        let mut coeffs = vec![0u32; n + 1];
        let mut rest = idx;
        for pos in (0..n).rev() {
            coeffs[pos] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[n] = 1;
        is_primitive(&coeffs, p).then_some(coeffs)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldTower {
        FieldTower::build(3, 1, 2, DEFAULT_FIELD_CAP).unwrap()
    }

    #[test]
    fn sizes_of_small_towers() {
        let t = f9();
        assert_eq!(t.big_order(), 8);
        assert_eq!(t.subfield_step(), 4);
        let t = FieldTower::build(2, 2, 1, DEFAULT_FIELD_CAP).unwrap();
        assert_eq!(t.big_order(), 3);
        assert_eq!(t.subfield_step(), 1);
        assert_eq!(t.q(), 4);
    }

    #[test]
    fn canonical_moduli() {
        // x^2 + x + 2 over F_3, x^2 + x + 1 over F_2, x + 2 over F_5 (root 3)
        assert_eq!(f9().modulus(), &[2, 1, 1]);
        assert_eq!(FieldTower::build(2, 2, 1, 1 << 10).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldTower::build(5, 1, 1, 1 << 10).unwrap().modulus(), &[2, 1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(FieldTower::build(4, 1, 1, 1 << 10).err(), Some(Error::NotPrime(4)));
        assert!(matches!(
            FieldTower::build(2, 1, 23, DEFAULT_FIELD_CAP),
            Err(Error::SizeExceeded { .. })
        ));
        assert!(matches!(
            FieldTower::build_with_modulus(3, 1, 2, 1 << 10, vec![1, 0, 1]),
            Err(Error::NotPrimitive { .. })
        ));
    }

    #[test]
    fn additive_identity_and_negation() {
        let t = f9();
        for x in t.elements() {
            assert_eq!(t.add(Elem::ZERO, x), x);
            assert_eq!(t.add(x, t.neg(x)), Elem::ZERO);
        }
        for i in 0..8 {
            assert_eq!(t.add(t.gamma_pow(i), t.gamma_pow(i + 4)), Elem::ZERO);
        }
        let f4 = FieldTower::build(2, 2, 1, 1 << 10).unwrap();
        for x in f4.elements() {
            assert_eq!(f4.add(x, x), Elem::ZERO);
        }
    }

    #[test]
    fn zech_has_single_minus_one() {
        let t = f9();
        let nones: Vec<_> = t.zech_table().iter().enumerate().filter(|(_, &z)| z == NONE).collect();
        assert_eq!(nones.len(), 1);
        assert_eq!(nones[0].0, 4);
        // in characteristic 2, −1 = 1 = γ^0
        let t = FieldTower::build(2, 3, 1, 1 << 10).unwrap();
        let nones: Vec<_> = t.zech_table().iter().enumerate().filter(|(_, &z)| z == NONE).collect();
        assert_eq!(nones.len(), 1);
        assert_eq!(nones[0].0, 0);
    }

    #[test]
    fn multiplicative_examples() {
        let t = f9();
        let g = t.gamma_pow(1);
        assert_eq!(t.mul(Elem::ZERO, g), Elem::ZERO);
        assert_eq!(t.pow(g, 8), Elem::ONE);
        assert_eq!(t.inv(t.gamma_pow(3)).unwrap(), t.gamma_pow(5));
        assert_eq!(t.inv(Elem::ZERO), Err(Error::DivisionByZero));
        assert_eq!(t.mult_order(Elem::ONE).unwrap(), 1);
        assert_eq!(t.mult_order(g).unwrap(), 8);
        assert_eq!(t.mult_order(t.gamma_pow(2)).unwrap(), 4);
        assert_eq!(t.mult_order(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn traces_in_f9() {
        let t = f9();
        assert_eq!(t.trace_to_q(Elem::ZERO), Elem::ZERO);
        // Tr(1) = 1 + 1 = 2 = −1 = γ^4, subfield index 2
        assert_eq!(t.trace_to_q(Elem::ONE), t.gamma_pow(4));
        assert_eq!(t.subfield_index(t.trace_to_q(Elem::ONE)), Some(2));
        let kernel: Vec<u32> = (0..8)
            .filter(|&i| t.trace_to_q(t.gamma_pow(i)).is_zero())
            .map(|i| i as u32)
            .collect();
        assert_eq!(kernel.len(), 2);
        assert_eq!(kernel[1], kernel[0] + 4);
    }

    #[test]
    fn trace_kernel_sizes() {
        for (p, t, k) in [(2, 1, 4), (2, 2, 2), (3, 1, 3), (3, 2, 2), (5, 1, 2), (2, 3, 2)] {
            let tw = FieldTower::build(p, t, k, 1 << 16).unwrap();
            let q = tw.q() as u64;
            let zq = tw.elements().filter(|&x| tw.trace_to_q(x).is_zero()).count() as u64;
            let zp = tw.elements().filter(|&x| tw.trace_to_p(x).is_zero()).count() as u64;
            assert_eq!(zq, q.pow(k - 1));
            assert_eq!(zp, (p as u64).pow(t * k - 1));
            assert!(tw.elements().all(|x| tw.in_subfield_q(tw.trace_to_q(x))));
            assert!(tw.elements().all(|x| tw.in_prime_field(tw.trace_to_p(x))));
        }
    }

    #[test]
    fn subfield_encoding_roundtrip() {
        let t = FieldTower::build(2, 2, 3, 1 << 10).unwrap();
        for level in [TraceLevel::Q, TraceLevel::P] {
            for idx in 0..t.level_size(level) {
                let x = t.from_level_index(idx, level);
                assert_eq!(t.level_index(x, level), Some(idx));
            }
        }
        assert_eq!(t.subfield_index(t.gamma_pow(1)), None);
    }

    #[test]
    fn primitive_polynomials_start_with_canonical() {
        let first = primitive_polynomials(3, 2).next().unwrap();
        assert_eq!(first, f9().modulus());
        assert_eq!(primitive_polynomials(3, 2).count(), 2);
        assert_eq!(primitive_polynomials(2, 4).count(), 2);
    }
}
