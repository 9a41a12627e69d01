//! Cyclotomic cosets, minimal and check polynomials, and the trace
//! representation of the six codes attached to a tuple.
//!
//! With β = γ^{−1}, a code with strides `(s_1, …, s_r)` and trace level `L`
//! has coordinate `j` equal to `Tr_L(u_1 β^{s_1 j} + … + u_r β^{s_r j})` for
//! messages `(u_1, …, u_r)` in F_{q^k}.

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldTower, TraceLevel};
use crate::params::TwoZeroParams;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    /// The two-zero code, messages (u, v).
    C,
    /// Irreducible subcode with nonzero γ^d.
    Cd,
    /// Irreducible subcode with nonzero γ^{d+D}.
    CD,
    /// One period of `Cd`, length n1.
    CdPrime,
    /// Stride g, length n2, over F_q.
    CdDoublePrime,
    /// Stride g, length n2, traced down to F_p.
    BarCd,
}

impl Role {
    pub const ALL: [Role; 6] = [Role::C, Role::Cd, Role::CD, Role::CdPrime, Role::CdDoublePrime, Role::BarCd];

    pub fn name(self) -> &'static str {
        match self {
            Role::C => "C",
            Role::Cd => "Cd",
            Role::CD => "CD",
            Role::CdPrime => "CdPrime",
            Role::CdDoublePrime => "CdDoublePrime",
            Role::BarCd => "BarCd",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}

/// A trace code: coordinates `Tr_level(Σ_i u_i β^{s_i j})` for `j < length`.
#[derive(Clone)]
pub struct TraceCode<'a> {
    pub tower: &'a FieldTower,
    pub length: usize,
    pub strides: Vec<u64>,
    pub level: TraceLevel,
}

impl<'a> TraceCode<'a> {
    pub fn new(tower: &'a FieldTower, length: usize, strides: Vec<u64>, level: TraceLevel) -> Self {
        let n = tower.big_order() as u64;
        let strides = strides.into_iter().map(|s| s % n).collect();
        TraceCode { tower, length, strides, level }
    }

    pub fn alphabet(&self) -> u32 {
        self.tower.level_size(self.level)
    }

    pub fn msg_rank(&self) -> usize {
        self.strides.len()
    }

    /// Exponents of β^{s j} as powers of γ, i.e. `(−s·j) mod (q^k − 1)`.
    pub fn offsets(&self, stride: u64) -> Vec<u32> {
        let n = self.tower.big_order() as u64;
        (0..self.length as u64)
            .map(|j| ((n - (stride * j) % n) % n) as u32)
            .collect()
    }

    /// Coordinate vector in the level's integer encoding.
    pub fn codeword(&self, msgs: &[Elem]) -> Vec<u32> {
        assert_eq!(msgs.len(), self.msg_rank(), "message rank mismatch");
        let tw = self.tower;
        (0..self.length as u64)
            .map(|j| {
                let arg = self.strides.iter().zip(msgs).fold(Elem::ZERO, |acc, (&s, &u)| {
                    let beta_pow = tw.inv(tw.gamma_pow(s * j)).expect("nonzero");
                    tw.add(acc, tw.mul(u, beta_pow))
                });
                tw.level_index(tw.trace(arg, self.level), self.level)
                    .expect("trace lands in its subfield")
            })
            .collect()
    }

    /// Images of an F_level-basis of the message space.
    pub fn generator_matrix(&self) -> Vec<Vec<Elem>> {
        let tw = self.tower;
        let dim = match self.level {
            TraceLevel::Q => tw.k(),
            TraceLevel::P => tw.t() * tw.k(),
        };
        let mut rows = Vec::new();
        for slot in 0..self.msg_rank() {
            for i in 0..dim {
                let mut msgs = vec![Elem::ZERO; self.msg_rank()];
                msgs[slot] = tw.gamma_pow(i as u64);
                rows.push(
                    self.codeword(&msgs)
                        .into_iter()
                        .map(|c| tw.from_level_index(c, self.level))
                        .collect(),
                );
            }
        }
        rows
    }

    /// Dimension over the alphabet field, via the generator matrix.
    pub fn dimension(&self) -> usize {
        rank(self.tower, self.generator_matrix())
    }
}

/// A member of the derived code family of one tuple.
#[derive(Clone)]
pub struct CodeSpec<'a> {
    pub role: Role,
    pub params: TwoZeroParams,
    pub code: TraceCode<'a>,
}

impl<'a> CodeSpec<'a> {
    pub fn new(role: Role, params: &TwoZeroParams, tower: &'a FieldTower) -> Result<Self> {
        if (tower.p() as u64, tower.t(), tower.k()) != (params.p, params.t, params.k) {
            return Err(Error::Internal("tower does not match parameters".into()));
        }
        let d = params.d;
        let dd = params.d_plus_big_d();
        let (length, strides, level) = match role {
            Role::C => (params.n, vec![d, dd], TraceLevel::Q),
            Role::Cd => (params.n, vec![d], TraceLevel::Q),
            Role::CD => (params.n, vec![dd], TraceLevel::Q),
            Role::CdPrime => (params.n1, vec![d], TraceLevel::Q),
            Role::CdDoublePrime => (params.n2, vec![params.g], TraceLevel::Q),
            Role::BarCd => (params.n2, vec![params.g], TraceLevel::P),
        };
        Ok(CodeSpec {
            role,
            params: params.clone(),
            code: TraceCode::new(tower, length as usize, strides, level),
        })
    }

    pub fn length(&self) -> usize {
        self.code.length
    }

    pub fn alphabet(&self) -> u32 {
        self.code.alphabet()
    }

    pub fn msg_rank(&self) -> usize {
        self.code.msg_rank()
    }

    /// `v` must be present exactly when the role takes two messages.
    pub fn codeword(&self, u: Elem, v: Option<Elem>) -> Vec<u32> {
        match (self.msg_rank(), v) {
            (2, Some(v)) => self.code.codeword(&[u, v]),
            (1, None) => self.code.codeword(&[u]),
            _ => panic!("role {} takes {} message(s)", self.role, self.msg_rank()),
        }
    }

    pub fn generator_matrix(&self) -> Vec<Vec<Elem>> {
        self.code.generator_matrix()
    }

    pub fn dimension(&self) -> usize {
        self.code.dimension()
    }
}

/// Rank of a matrix with entries in a subfield of the tower.
pub fn rank(tw: &FieldTower, mut rows: Vec<Vec<Elem>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = tw.inv(rows[r][c]).expect("pivot is nonzero");
        let pivot_row: Vec<Elem> = rows[r].iter().map(|&x| tw.mul(x, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = tw.sub(*x, tw.mul(factor, pv));
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}

/// Orbit of `a` under multiplication by `multiplier` modulo `modulus`,
/// sorted so the minimal representative comes first.
pub fn cyclotomic_coset(a: u64, modulus: u64, multiplier: u64) -> Vec<u64> {
    let a = a % modulus;
    let mut out = vec![a];
    let mut x = (a as u128 * multiplier as u128 % modulus as u128) as u64;
    while x != a {
        out.push(x);
        x = (x as u128 * multiplier as u128 % modulus as u128) as u64;
    }
    out.sort_unstable();
    out
}

/// Dense polynomial over the tower, low degree first.
pub type Poly = Vec<Elem>;

pub fn poly_mul(tw: &FieldTower, a: &[Elem], b: &[Elem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = tw.add(out[i + j], tw.mul(x, y));
        }
    }
    out
}

/// Remainder of `a` modulo a monic `m`.
pub fn poly_rem(tw: &FieldTower, a: &[Elem], m: &[Elem]) -> Poly {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if !lead.is_zero() {
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = tw.sub(r[shift + j], tw.mul(lead, mj));
            }
        }
        r.pop();
    }
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    r
}

pub fn poly_eval(tw: &FieldTower, a: &[Elem], x: Elem) -> Elem {
    a.iter().rev().fold(Elem::ZERO, |acc, &c| tw.add(tw.mul(acc, x), c))
}

/// Coefficients in the F_q integer encoding; `None` if some coefficient is
/// outside F_q.
pub fn encode_over_q(tw: &FieldTower, a: &[Elem]) -> Option<Vec<u32>> {
    a.iter().map(|&c| tw.subfield_index(c)).collect()
}

/// Minimal polynomial over F_q of γ^a: Π over the coset of (x − γ^{a q^i}).
pub fn min_poly(a: u64, tw: &FieldTower) -> Result<Poly> {
    let coset = cyclotomic_coset(a, tw.big_order() as u64, tw.q() as u64);
    let mut poly = vec![Elem::ONE];
    for c in coset {
        let root = tw.gamma_pow(c);
        poly = poly_mul(tw, &poly, &[tw.neg(root), Elem::ONE]);
    }
    if poly.iter().any(|&c| !tw.in_subfield_q(c)) {
        return Err(Error::Internal(format!("minimal polynomial of γ^{a} leaves F_q")));
    }
    Ok(poly)
}

/// `h(x) = h_d(x)·h_D(x)` together with the coset data it came from.
#[derive(Clone, Debug)]
pub struct CheckPolynomial {
    pub coset_d: Vec<u64>,
    pub coset_dd: Vec<u64>,
    pub h_d: Poly,
    pub h_dd: Poly,
    pub h: Poly,
    pub expected_degree: usize,
    pub divides_xn_minus_1: bool,
}

impl CheckPolynomial {
    /// Builds the check polynomial even when its degree is off.
    pub fn build(params: &TwoZeroParams, tw: &FieldTower) -> Result<Self> {
        let n = tw.big_order() as u64;
        let (d, dd) = (params.d, params.d_plus_big_d());
        let h_d = min_poly(d, tw)?;
        let h_dd = min_poly(dd, tw)?;
        let h = poly_mul(tw, &h_d, &h_dd);
        let mut xn1 = vec![Elem::ZERO; params.n as usize + 1];
        xn1[0] = tw.neg(Elem::ONE);
        xn1[params.n as usize] = Elem::ONE;
        let divides = poly_rem(tw, &xn1, &h).is_empty();
        Ok(CheckPolynomial {
            coset_d: cyclotomic_coset(d, n, tw.q() as u64),
            coset_dd: cyclotomic_coset(dd, n, tw.q() as u64),
            h_d,
            h_dd,
            h,
            expected_degree: 2 * params.k as usize,
            divides_xn_minus_1: divides,
        })
    }

    pub fn degree(&self) -> usize {
        self.h.len() - 1
    }

    pub fn degree_ok(&self) -> bool {
        self.degree() == self.expected_degree
    }

    /// Both cosets have size k.
    pub fn cosets_ok(&self) -> bool {
        let k = self.expected_degree / 2;
        self.coset_d.len() == k && self.coset_dd.len() == k
    }

    /// h_d and h_D share no root.
    pub fn coprime(&self) -> bool {
        self.coset_d.iter().all(|c| !self.coset_dd.contains(c))
    }
}

/// Strict form: a degree other than 2k is an error.
pub fn check_poly(params: &TwoZeroParams, tw: &FieldTower) -> Result<CheckPolynomial> {
    let h = CheckPolynomial::build(params, tw)?;
    if !h.degree_ok() {
        return Err(Error::DegreeMismatch { expected: h.expected_degree, actual: h.degree() });
    }
    Ok(h)
}
