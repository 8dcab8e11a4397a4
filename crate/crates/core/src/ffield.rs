//! Exact arithmetic in finite fields `F_q`, `q = p^e`.
//!
//! Elements are stored as the integer `sum c_i p^i` of their coefficient
//! vector `(c_0, .., c_{e-1})` in the basis `1, a, .., a^{e-1}` where `a` is
//! a root of the field modulus. Prime fields use direct modular arithmetic;
//! extension fields with `q <= 2^16` are backed by log/Zech tables, larger
//! ones by dense polynomial arithmetic. All representations agree on the
//! encoded value.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 16;
const NO_LOG: u32 = u32::MAX;

/// An element of `F_q`, see the module docs for the encoding.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The integer encoding `sum c_i p^i`.
    pub fn index(self) -> u32 {
        self.0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Descriptor of `F_{p^e}` together with its defining modulus.
#[derive(Clone)]
pub struct FieldDesc(Arc<Inner>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.e, self.0.modulus)
        }
    }
}

/// Serialized form `{"p": .., "e": .., "modulus": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if (n as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Univariate polynomials over Z/p, little-endian coefficient vectors.
mod zp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        pow(a, p as u64 - 2, p)
    }

    pub fn pow(a: u32, mut k: u64, p: u32) -> u32 {
        let mut base = a as u64 % p as u64;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            k >>= 1;
        }
        acc as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] as u64 * lead_inv % p as u64;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * mi as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^(p^i) mod m` for i = 1..=count.
    pub fn frobenius_powers_of_x(m: &[u32], p: u32, count: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0, 1];
        for _ in 0..count {
            // cur <- cur^p mod m
            let mut acc = vec![1u32];
            let mut base = cur.clone();
            let mut k = p;
            while k > 0 {
                if k & 1 == 1 {
                    acc = rem(&mul(&acc, &base, p), m, p);
                }
                base = rem(&mul(&base, &base, p), m, p);
                k >>= 1;
            }
            cur = acc;
            out.push(cur.clone());
        }
        out
    }
}

/// Irreducibility over Z/p by `gcd(m, x^{p^i} - x) = 1` for `1 <= i < deg m`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let mut m = modulus.to_vec();
    zp::trim(&mut m);
    if m.len() < 2 {
        return false;
    }
    let deg = (m.len() - 1) as u32;
    if deg == 1 {
        return true;
    }
    let x = vec![0, 1];
    for xp in zp::frobenius_powers_of_x(&m, p, deg - 1) {
        let g = zp::gcd(&m, &zp::sub(&xp, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree `e`,
/// comparing coefficient vectors from `c_{e-1}` down to `c_0`.
pub fn least_irreducible(p: u32, e: u32) -> Result<Vec<u32>> {
    let count = (p as u64).checked_pow(e).ok_or_else(|| Error::InvalidField("too large".into()))?;
    for k in 0..count {
        let mut m = Vec::with_capacity(e as usize + 1);
        let mut t = k;
        for _ in 0..e {
            m.push((t % p as u64) as u32);
            t /= p as u64;
        }
        m.push(1);
        if is_irreducible(&m, p) {
            return Ok(m);
        }
    }
    Err(Error::Internal(format!("no irreducible polynomial of degree {e} over F_{p}")))
}

impl FieldDesc {
    /// `F_{p^e}` with the least irreducible modulus.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let modulus = least_irreducible(p, e)?;
        Self::with_modulus(p, modulus)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        match &spec.modulus {
            Some(m) => {
                if m.len() as u32 != spec.e + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus has degree {} but e = {}",
                        m.len() as i64 - 1,
                        spec.e
                    )));
                }
                Self::with_modulus(spec.p, m.clone())
            }
            None => Self::new(spec.p, spec.e),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, e: self.0.e, modulus: Some(self.0.modulus.clone()) }
    }

    /// Field with an explicit monic modulus (little-endian coefficients).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus must be monic with coefficients in [0, p)".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let e = (modulus.len() - 1) as u32;
        let q = (p as u64).checked_pow(e).filter(|&q| q < (1u64 << 31));
        let q = q.ok_or_else(|| Error::InvalidField(format!("F_{p}^{e} is too large")))? as u32;
        let mut inner = Inner { p, e, q, modulus, tables: None };
        if e > 1 && (q as u64) <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldDesc(Arc::new(inner)))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Element with the given integer encoding.
    pub fn elem(&self, index: u32) -> FqElem {
        debug_assert!(index < self.0.q);
        FqElem(index)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The class of `a`, a root of the modulus (zero when `e = 1`).
    pub fn generator(&self) -> FqElem {
        if self.0.e == 1 {
            FqElem((self.0.p - self.0.modulus[0]) % self.0.p)
        } else {
            FqElem(self.0.p)
        }
    }

    /// Little-endian coefficient vector of length `e`.
    pub fn to_coeffs(&self, a: FqElem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.e as usize);
        let mut t = a.0;
        for _ in 0..self.0.e {
            out.push(t % self.0.p);
            t /= self.0.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem> {
        if coeffs.len() > self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidInput(format!("{coeffs:?} is not an element of {self:?}")));
        }
        let mut acc = 0u32;
        for &c in coeffs.iter().rev() {
            acc = acc * self.0.p + c;
        }
        Ok(FqElem(acc))
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.0;
        if inner.e == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FqElem((s % inner.p as u64) as u32);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        match &inner.tables {
            Some(t) => {
                let n = inner.q - 1;
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let d = (lb + n - la) % n;
                let z = t.zech[d as usize];
                if z == NO_LOG {
                    FqElem::ZERO
                } else {
                    FqElem(t.exp[((la + z) % n) as usize])
                }
            }
            None => digitwise(inner, a, b, |x, y, p| (x + y) % p),
        }
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let inner = &*self.0;
        if a.0 == 0 {
            return a;
        }
        if inner.e == 1 {
            return FqElem(inner.p - a.0);
        }
        digitwise(inner, FqElem::ZERO, a, |x, y, p| (x + p - y) % p)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let inner = &*self.0;
        if inner.e == 1 {
            return FqElem((a.0 as u64 * b.0 as u64 % inner.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        match &inner.tables {
            Some(t) => {
                let n = inner.q - 1;
                let s = (t.log[a.0 as usize] + t.log[b.0 as usize]) % n;
                FqElem(t.exp[s as usize])
            }
            None => generic_mul(inner, a, b),
        }
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        if inner.e == 1 {
            return Ok(FqElem(zp::inv(a.0, inner.p)));
        }
        match &inner.tables {
            Some(t) => {
                let n = inner.q - 1;
                Ok(FqElem(t.exp[((n - t.log[a.0 as usize]) % n) as usize]))
            }
            None => Ok(self.pow(a, inner.q as u64 - 2)),
        }
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, mut k: u64) -> FqElem {
        let inner = &*self.0;
        if let Some(t) = &inner.tables {
            if a.0 == 0 {
                return if k == 0 { FqElem::ONE } else { FqElem::ZERO };
            }
            let n = (inner.q - 1) as u64;
            let l = t.log[a.0 as usize] as u64 * (k % n) % n;
            return FqElem(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = FqElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Frobenius `a -> a^p` (`direction = 1`) or its inverse, the unique
    /// p-th root `a -> a^{p^{e-1}}` (`direction = -1`). Other directions
    /// iterate.
    pub fn frob(&self, a: FqElem, direction: i32) -> FqElem {
        let e = self.0.e as i64;
        if e == 1 {
            return a;
        }
        let steps = (direction as i64).rem_euclid(e) as u32;
        self.pow(a, (self.0.p as u64).pow(steps))
    }

    /// Minimal polynomial of `a` over the prime field, monic little-endian.
    pub fn minimal_polynomial(&self, a: FqElem) -> Vec<u32> {
        let mut orbit = vec![a];
        loop {
            let next = self.frob(*orbit.last().unwrap(), 1);
            if next == a {
                break;
            }
            orbit.push(next);
        }
        let mut poly = vec![FqElem::ONE];
        for root in orbit {
            // poly * (x - root)
            let mut next = vec![FqElem::ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(c, root));
            }
            poly = next;
        }
        poly.into_iter().map(|c| c.0).collect()
    }

    /// `F_{q^r}` with the least modulus, and the embedding `F_q -> F_{q^r}`.
    pub fn extend(&self, r: u32) -> Result<FieldEmbedding> {
        if r == 0 {
            return Err(Error::OutOfRange("extension degree 0".into()));
        }
        let target = FieldDesc::new(self.0.p, self.0.e * r)?;
        FieldEmbedding::new(self.clone(), target)
    }
}

fn digitwise(inner: &Inner, a: FqElem, b: FqElem, op: impl Fn(u32, u32, u32) -> u32) -> FqElem {
    let p = inner.p;
    let (mut x, mut y) = (a.0, b.0);
    let mut acc = 0u32;
    let mut place = 1u32;
    for _ in 0..inner.e {
        acc += op(x % p, y % p, p) * place;
        x /= p;
        y /= p;
        place = place.wrapping_mul(p);
    }
    FqElem(acc)
}

fn generic_mul(inner: &Inner, a: FqElem, b: FqElem) -> FqElem {
    let p = inner.p;
    let da = decode(inner, a);
    let db = decode(inner, b);
    let prod = zp::rem(&zp::mul(&da, &db, p), &inner.modulus, p);
    let mut acc = 0u32;
    for &c in prod.iter().rev() {
        acc = acc * p + c;
    }
    FqElem(acc)
}

fn decode(inner: &Inner, a: FqElem) -> Vec<u32> {
    let mut out = Vec::with_capacity(inner.e as usize);
    let mut t = a.0;
    for _ in 0..inner.e {
        out.push(t % inner.p);
        t /= inner.p;
    }
    zp::trim(&mut out);
    out
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q as u64;
    let n = q - 1;
    let factors = prime_factors(n);
    let gpow = |g: FqElem, mut k: u64| {
        let mut base = g;
        let mut acc = FqElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = generic_mul(inner, acc, base);
            }
            base = generic_mul(inner, base, base);
            k >>= 1;
        }
        acc
    };
    let prim = (2..inner.q)
        .map(FqElem)
        .find(|&g| factors.iter().all(|&l| gpow(g, n / l) != FqElem::ONE))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![NO_LOG; q as usize];
    let mut cur = FqElem::ONE;
    for (k, slot) in exp.iter_mut().enumerate() {
        *slot = cur.0;
        log[cur.0 as usize] = k as u32;
        cur = generic_mul(inner, cur, prim);
    }
    let zech = (0..n as usize)
        .map(|k| {
            let s = digitwise(inner, FqElem::ONE, FqElem(exp[k]), |x, y, p| (x + y) % p);
            log[s.0 as usize]
        })
        .collect();
    Tables { exp, log, zech }
}

/// An embedding of finite fields `F_q -> F_{q^r}` given by the image of the
/// source generator.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    pub source: FieldDesc,
    pub target: FieldDesc,
    powers: Vec<FqElem>,
}

impl FieldEmbedding {
    /// Embeds `source` into `target`, sending the source generator to the
    /// least-encoded root of the source modulus in `target`.
    pub fn new(source: FieldDesc, target: FieldDesc) -> Result<Self> {
        if source.characteristic() != target.characteristic() || !target.degree().is_multiple_of(source.degree()) {
            return Err(Error::InvalidField(format!("{source:?} does not embed in {target:?}")));
        }
        let modulus: Vec<FqElem> = source.modulus().iter().map(|&c| target.from_int(c as i64)).collect();
        let eval = |x: FqElem| {
            modulus.iter().rev().fold(FqElem::ZERO, |acc, &c| target.add(target.mul(acc, x), c))
        };
        let root = target
            .elements()
            .find(|&x| eval(x).is_zero())
            .ok_or_else(|| Error::Internal("no root of the source modulus in target".into()))?;
        let mut powers = Vec::with_capacity(source.degree() as usize);
        let mut cur = FqElem::ONE;
        for _ in 0..source.degree() {
            powers.push(cur);
            cur = target.mul(cur, root);
        }
        Ok(FieldEmbedding { source, target, powers })
    }

    pub fn map(&self, a: FqElem) -> FqElem {
        let t = &self.target;
        self.source
            .to_coeffs(a)
            .iter()
            .zip(&self.powers)
            .fold(FqElem::ZERO, |acc, (&c, &w)| t.add(acc, t.mul(t.from_int(c as i64), w)))
    }

    /// Image of the source generator.
    pub fn generator_image(&self) -> FqElem {
        self.map(self.source.generator())
    }

    pub fn compose(&self, outer: &FieldEmbedding) -> Result<FieldEmbedding> {
        if outer.source != self.target {
            return Err(Error::InvalidField("embeddings do not compose".into()));
        }
        let powers = self.powers.iter().map(|&w| outer.map(w)).collect();
        Ok(FieldEmbedding { source: self.source.clone(), target: outer.target.clone(), powers })
    }
}
