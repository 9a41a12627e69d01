//! Reference arithmetic for the integration tests: polynomial-basis field
//! elements, naive traces and naive codeword construction. Nothing here uses
//! the log tables of the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// F_p[x]/(f) with elements packed as base-p integers, constant digit first.
#[derive(Clone, Debug)]
pub struct PolyField {
    pub p: u64,
    pub deg: usize,
    /// Monic, low degree first, length deg + 1.
    pub modulus: Vec<u64>,
}

impl PolyField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        assert_eq!(*modulus.last().unwrap(), 1);
        PolyField { p, deg: modulus.len() - 1, modulus }
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.deg as u32)
    }

    pub fn unpack(&self, mut x: u64) -> Vec<u64> {
        (0..self.deg)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    pub fn pack(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (a, b) = (self.unpack(a), self.unpack(b));
        self.pack(&a.iter().zip(&b).map(|(x, y)| (x + y) % self.p).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.pack(&self.unpack(a).iter().map(|&x| (self.p - x) % self.p).collect::<Vec<_>>())
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let (a, b) = (self.unpack(a), self.unpack(b));
        let mut prod = vec![0u64; 2 * self.deg];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce from the top using x^deg = −(lower terms)
        for top in (self.deg..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..self.deg].iter().enumerate() {
                let idx = top - self.deg + i;
                prod[idx] = (prod[idx] + c * (self.p - m)) % self.p;
            }
        }
        self.pack(&prod[..self.deg])
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The class of x.
    pub fn x(&self) -> u64 {
        if self.deg == 1 {
            // x ≡ −c_0
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    /// Multiplicative order by repeated multiplication.
    pub fn order(&self, a: u64) -> u64 {
        assert_ne!(a, 0);
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// a + a^r + a^{r²} + … with `terms` terms.
    pub fn trace(&self, a: u64, r: u64, terms: u32) -> u64 {
        let mut acc = 0;
        let mut y = a;
        for _ in 0..terms {
            acc = self.add(acc, y);
            y = self.pow(y, r);
        }
        acc
    }
}

/// Lexicographically smallest monic polynomial of the degree over F_p
/// (constant coefficient most significant) whose root x has full order,
/// found by trying every polynomial.
pub fn smallest_primitive(p: u64, deg: usize) -> Vec<u64> {
    let total = p.pow(deg as u32);
    for idx in 0..total {
        // idx enumerates (c_0, …, c_{deg−1}) with c_0 most significant
        let mut coeffs = vec![0u64; deg];
        let mut rest = idx;
        for slot in (0..deg).rev() {
            coeffs[slot] = rest % p;
            rest /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        let f = PolyField::new(p, coeffs.clone());
        if f.order(f.x()) == total - 1 {
            return coeffs;
        }
    }
    panic!("no primitive polynomial")
}

/// A naive trace code over F_{q^k} built in the polynomial basis.
pub struct NaiveCode {
    pub field: PolyField,
    pub q: u64,
    pub k: u32,
    /// Trace terms: k for F_q, tk for F_p.
    pub level_terms: u32,
    pub level_r: u64,
    pub length: usize,
    pub strides: Vec<u64>,
}

impl NaiveCode {
    pub fn new(p: u64, t: u32, k: u32, length: usize, strides: Vec<u64>, over_prime: bool) -> Self {
        let deg = (t * k) as usize;
        let field = PolyField::new(p, smallest_primitive(p, deg));
        let q = p.pow(t);
        let (level_terms, level_r) = if over_prime { (t * k, p) } else { (k, q) };
        NaiveCode { field, q, k, level_terms, level_r, length, strides }
    }

    /// β^{s j} for each stride, with β = x^{−1}.
    fn points(&self) -> Vec<Vec<u64>> {
        let order = self.field.size() - 1;
        let beta = self.field.pow(self.field.x(), order - 1);
        self.strides
            .iter()
            .map(|&s| (0..self.length as u64).map(|j| self.field.pow(beta, s * j % order)).collect())
            .collect()
    }

    pub fn codeword_with(&self, points: &[Vec<u64>], msgs: &[u64]) -> Vec<u64> {
        (0..self.length)
            .map(|j| {
                let inner = msgs
                    .iter()
                    .zip(points)
                    .fold(0, |acc, (&m, pts)| self.field.add(acc, self.field.mul(m, pts[j])));
                self.field.trace(inner, self.level_r, self.level_terms)
            })
            .collect()
    }

    /// Every message tuple's codeword; words repeat when the map is not injective.
    pub fn all_codewords(&self) -> Vec<Vec<u64>> {
        let points = self.points();
        let size = self.field.size();
        let slots = self.strides.len() as u32;
        (0..size.pow(slots))
            .map(|mut idx| {
                let msgs: Vec<u64> = (0..slots)
                    .map(|_| {
                        let m = idx % size;
                        idx /= size;
                        m
                    })
                    .collect();
                self.codeword_with(&points, &msgs)
            })
            .collect()
    }

    /// Distinct words with their weight counts.
    pub fn distribution(&self) -> BTreeMap<usize, u64> {
        let mut words = self.all_codewords();
        words.sort();
        words.dedup();
        let mut out = BTreeMap::new();
        for w in &words {
            *out.entry(w.iter().filter(|&&c| c != 0).count()).or_insert(0) += 1;
        }
        out
    }

    /// Elements of the trace field, as packed field elements.
    pub fn level_elements(&self) -> Vec<u64> {
        (0..self.field.size())
            .filter(|&a| self.field.pow(a, self.level_field_size()) == a)
            .collect()
    }

    pub fn level_field_size(&self) -> u64 {
        self.field.size() / self.level_r.pow(self.level_terms) * self.level_r
    }

    fn orthogonal(&self, y: &[u64], words: &[Vec<u64>]) -> bool {
        words.iter().all(|c| {
            c.iter().zip(y).fold(0, |acc, (&a, &b)| self.field.add(acc, self.field.mul(a, b))) == 0
        })
    }

    /// Distinct codewords spanning the code: the images of basis messages.
    fn spanning_words(&self) -> Vec<Vec<u64>> {
        let points = self.points();
        let deg = self.field.deg as u32;
        let mut out = Vec::new();
        for slot in 0..self.strides.len() {
            for i in 0..deg {
                let mut msgs = vec![0u64; self.strides.len()];
                msgs[slot] = self.field.p.pow(i);
                out.push(self.codeword_with(&points, &msgs));
            }
        }
        out
    }

    /// Dual words of weight 1 and 2 by trying every such vector.
    pub fn dual_low_weight(&self) -> (u64, u64) {
        let span = self.spanning_words();
        let scalars: Vec<u64> = self.level_elements().into_iter().filter(|&a| a != 0).collect();
        let n = self.length;
        let mut b1 = 0;
        let mut b2 = 0;
        for i in 0..n {
            for &a in &scalars {
                let mut y = vec![0u64; n];
                y[i] = a;
                b1 += self.orthogonal(&y, &span) as u64;
                for j in i + 1..n {
                    for &b in &scalars {
                        y[j] = b;
                        b2 += self.orthogonal(&y, &span) as u64;
                    }
                    y[j] = 0;
                }
            }
        }
        (b1, b2)
    }

    /// The whole dual distribution, by trying every vector.
    pub fn dual_distribution(&self) -> BTreeMap<usize, u64> {
        let span = self.spanning_words();
        let elems = self.level_elements();
        let base = elems.len() as u64;
        let mut out = BTreeMap::new();
        for mut idx in 0..base.pow(self.length as u32) {
            let y: Vec<u64> = (0..self.length)
                .map(|_| {
                    let e = elems[(idx % base) as usize];
                    idx /= base;
                    e
                })
                .collect();
            if self.orthogonal(&y, &span) {
                *out.entry(y.iter().filter(|&&c| c != 0).count()).or_insert(0) += 1;
            }
        }
        out
    }
}

/// Strides and length of a family member, computed from the tuple directly.
pub fn family_code(p: u64, t: u32, k: u32, d: u64, e: u64, lambda: u64, role: &str) -> NaiveCode {
    let q = p.pow(t);
    let order = q.pow(k) - 1;
    let big_d = order / e;
    let n = (lambda * order / d) as usize;
    let n1 = (order / d) as usize;
    let sub = order / (q - 1);
    let g = gcd(sub, d);
    let n2 = (n1 as u64 * (q - 1) / gcd(q - 1, n1 as u64)) as usize;
    match role {
        "C" => NaiveCode::new(p, t, k, n, vec![d, d + big_d], false),
        "Cd" => NaiveCode::new(p, t, k, n, vec![d], false),
        "CD" => NaiveCode::new(p, t, k, n, vec![d + big_d], false),
        "CdPrime" => NaiveCode::new(p, t, k, n1, vec![d], false),
        "CdDoublePrime" => NaiveCode::new(p, t, k, n2, vec![g], false),
        "BarCd" => NaiveCode::new(p, t, k, n2, vec![g], true),
        _ => panic!("unknown role {role}"),
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
