//! Homogeneous polynomials over `F_q` in the standard grading.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldDesc, FieldEmbedding, FqElem};
use crate::groebner::{self, Budget, GroebnerBasis};

pub const MAX_VARS: usize = 8;

/// Exponent vector of a monomial in at most [`MAX_VARS`] variables.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial([u16; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::one();
        for (slot, &e) in m.0.iter_mut().zip(exps) {
            *slot = u16::try_from(e).expect("exponent overflow");
        }
        m
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.0[..nvars].iter().map(|&e| e as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a = a.checked_add(b).expect("exponent overflow");
        }
        out
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Monomial::one();
        for i in 0..MAX_VARS {
            out.0[i] = other.0[i].checked_sub(self.0[i])?;
        }
        Some(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a = (*a).max(b);
        }
        out
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn scale_exponents(&self, k: u32) -> Monomial {
        let mut out = *self;
        for a in out.0.iter_mut() {
            *a = u16::try_from(*a as u32 * k).expect("exponent overflow");
        }
        out
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Grlex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for i in (0..MAX_VARS).rev() {
                    if a.0[i] != b.0[i] {
                        return b.0[i].cmp(&a.0[i]);
                    }
                }
                Ordering::Equal
            }),
            MonomialOrder::Grlex => a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)),
            MonomialOrder::Lex => a.0.cmp(&b.0),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub mono: Monomial,
    pub coeff: FqElem,
}

/// A homogeneous polynomial; terms sorted descending in the ring's order,
/// no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    terms: Vec<Term>,
}

impl Poly {
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.mono.degree())
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FqElem {
        self.terms.iter().find(|t| t.mono == *m).map_or(FqElem::ZERO, |t| t.coeff)
    }

    pub(crate) fn from_sorted_terms(terms: Vec<Term>) -> Self {
        Poly { terms }
    }
}

/// `F_q[x_0, .., x_n]` with a monomial order and variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: FieldDesc,
    names: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: FieldDesc, names: &[&str], order: MonomialOrder) -> Result<Self> {
        Self::with_names(field, names.iter().map(|s| s.to_string()).collect(), order)
    }

    pub fn with_names(field: FieldDesc, names: Vec<String>, order: MonomialOrder) -> Result<Self> {
        if names.is_empty() || names.len() > MAX_VARS {
            return Err(Error::InvalidInput(format!("between 1 and {MAX_VARS} variables supported")));
        }
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || names[..i].contains(n) {
                return Err(Error::InvalidInput(format!("bad variable name {n:?}")));
            }
        }
        Ok(PolyRing { field, names, order })
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> PolyRing {
        PolyRing { order, ..self.clone() }
    }

    pub fn with_field(&self, field: FieldDesc) -> PolyRing {
        PolyRing { field, ..self.clone() }
    }

    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn zero(&self) -> Poly {
        Poly::default()
    }

    pub fn one(&self) -> Poly {
        self.term(Monomial::one(), FqElem::ONE)
    }

    pub fn var(&self, i: usize) -> Poly {
        assert!(i < self.nvars());
        self.term(Monomial::var(i), FqElem::ONE)
    }

    pub fn term(&self, mono: Monomial, coeff: FqElem) -> Poly {
        if coeff.is_zero() {
            Poly::default()
        } else {
            Poly { terms: vec![Term { mono, coeff }] }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    /// Fails if the nonzero result is not homogeneous.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, FqElem)>) -> Result<Poly> {
        let p = self.collect_terms(terms);
        if !self.is_homogeneous(&p) {
            return Err(Error::InhomogeneousSum);
        }
        Ok(p)
    }

    fn collect_terms(&self, terms: impl IntoIterator<Item = (Monomial, FqElem)>) -> Poly {
        let mut acc: HashMap<Monomial, FqElem> = HashMap::new();
        for (m, c) in terms {
            let slot = acc.entry(m).or_insert(FqElem::ZERO);
            *slot = self.field.add(*slot, c);
        }
        let mut terms: Vec<Term> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(mono, coeff)| Term { mono, coeff }).collect();
        terms.sort_by(|a, b| self.cmp_mono(&b.mono, &a.mono));
        Poly { terms }
    }

    pub fn is_homogeneous(&self, f: &Poly) -> bool {
        match f.degree() {
            None => true,
            Some(d) => f.terms.iter().all(|t| t.mono.degree() == d),
        }
    }

    /// Re-sorts terms for this ring's order (after an order change).
    pub fn normalize(&self, f: &Poly) -> Poly {
        let mut terms = f.terms.clone();
        terms.sort_by(|a, b| self.cmp_mono(&b.mono, &a.mono));
        Poly { terms }
    }

    pub fn add(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        if let (Some(a), Some(b)) = (f.degree(), g.degree()) {
            if a != b {
                return Err(Error::InhomogeneousSum);
            }
        }
        Ok(self.merge(f, g, FqElem::ONE))
    }

    pub fn sub(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        self.add(f, &self.neg(g))
    }

    /// `f + c*g` by merging sorted term lists; both must share a degree.
    pub(crate) fn merge(&self, f: &Poly, g: &Poly, c: FqElem) -> Poly {
        let field = &self.field;
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            let (a, b) = (&f.terms[i], &g.terms[j]);
            match self.cmp_mono(&a.mono, &b.mono) {
                Ordering::Greater => {
                    out.push(*a);
                    i += 1;
                }
                Ordering::Less => {
                    let coeff = field.mul(c, b.coeff);
                    if !coeff.is_zero() {
                        out.push(Term { mono: b.mono, coeff });
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = field.add(a.coeff, field.mul(c, b.coeff));
                    if !coeff.is_zero() {
                        out.push(Term { mono: a.mono, coeff });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f.terms[i..]);
        for b in &g.terms[j..] {
            let coeff = field.mul(c, b.coeff);
            if !coeff.is_zero() {
                out.push(Term { mono: b.mono, coeff });
            }
        }
        Poly { terms: out }
    }

    pub fn neg(&self, f: &Poly) -> Poly {
        self.scale(f, self.field.neg(FqElem::ONE))
    }

    pub fn scale(&self, f: &Poly, c: FqElem) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly {
            terms: f.terms.iter().map(|t| Term { mono: t.mono, coeff: self.field.mul(c, t.coeff) }).collect(),
        }
    }

    /// `c * m * f`; multiplication by a monomial preserves term order.
    pub fn mul_term(&self, f: &Poly, m: &Monomial, c: FqElem) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly {
            terms: f
                .terms
                .iter()
                .map(|t| Term { mono: t.mono.mul(m), coeff: self.field.mul(c, t.coeff) })
                .collect(),
        }
    }

    pub fn mul(&self, f: &Poly, g: &Poly) -> Poly {
        if f.is_zero() || g.is_zero() {
            return Poly::default();
        }
        let field = &self.field;
        let mut acc: HashMap<Monomial, FqElem> = HashMap::with_capacity(f.len() * g.len());
        for a in &f.terms {
            for b in &g.terms {
                let slot = acc.entry(a.mono.mul(&b.mono)).or_insert(FqElem::ZERO);
                *slot = field.add(*slot, field.mul(a.coeff, b.coeff));
            }
        }
        self.collect_terms(acc)
    }

    pub fn pow(&self, f: &Poly, k: u32) -> Poly {
        let mut acc = self.one();
        let mut base = f.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The Frobenius image `f^p`, computed termwise.
    pub fn frobenius(&self, f: &Poly) -> Poly {
        self.frobenius_power(f, 1)
    }

    /// `f^{p^k}`.
    pub fn frobenius_power(&self, f: &Poly, k: u32) -> Poly {
        let p = self.field.characteristic();
        let scale = p.pow(k);
        Poly {
            terms: f
                .terms
                .iter()
                .map(|t| Term { mono: t.mono.scale_exponents(scale), coeff: self.field.frob(t.coeff, k as i32) })
                .collect(),
        }
    }

    /// Splits `f = sum_a x^a (g_a)^p` over exponent vectors `a` in
    /// `[0, p-1]^{n+1}`.
    pub fn pth_decompose(&self, f: &Poly) -> BTreeMap<Monomial, Poly> {
        let p = self.field.characteristic() as u16;
        let mut parts: BTreeMap<Monomial, Vec<Term>> = BTreeMap::new();
        for t in &f.terms {
            let mut rem = Monomial::one();
            let mut quo = Monomial::one();
            for i in 0..MAX_VARS {
                rem.0[i] = t.mono.0[i] % p;
                quo.0[i] = t.mono.0[i] / p;
            }
            parts
                .entry(rem)
                .or_default()
                .push(Term { mono: quo, coeff: self.field.frob(t.coeff, -1) });
        }
        parts.into_iter().map(|(a, terms)| (a, self.collect_terms(terms.into_iter().map(|t| (t.mono, t.coeff))))).collect()
    }

    /// Inverse of [`pth_decompose`](Self::pth_decompose).
    pub fn reassemble(&self, parts: &BTreeMap<Monomial, Poly>) -> Result<Poly> {
        let mut acc = self.zero();
        for (a, g) in parts {
            let piece = self.mul_term(&self.frobenius(g), a, FqElem::ONE);
            acc = self.add(&acc, &piece)?;
        }
        Ok(acc)
    }

    /// The coefficient-extraction `F_* R -> R` keeping the component of
    /// `f` along `(x_0 .. x_n)^{p-1}`: the `p^{-1}`-linear trace.
    pub fn cartier_trace(&self, f: &Poly) -> Poly {
        let p = self.field.characteristic() as u16;
        let n = self.nvars();
        let terms = f.terms.iter().filter_map(|t| {
            let mut quo = Monomial::one();
            for i in 0..MAX_VARS {
                let e = t.mono.0[i];
                let want = if i < n { p - 1 } else { 0 };
                if e % p != want {
                    return None;
                }
                quo.0[i] = e / p;
            }
            Some(Term { mono: quo, coeff: self.field.frob(t.coeff, -1) })
        });
        // Dividing exponents of a sorted list preserves grevlex/grlex/lex order
        // up to ties, which cannot occur since the map is injective.
        let mut terms: Vec<Term> = terms.collect();
        terms.sort_by(|a, b| self.cmp_mono(&b.mono, &a.mono));
        Poly { terms }
    }

    /// All degree-`d` monomials, sorted descending; empty for `d < 0`.
    pub fn monomials_of_degree(&self, d: i64) -> Vec<Monomial> {
        if d < 0 {
            return Vec::new();
        }
        let n = self.nvars();
        let mut out = Vec::new();
        let mut cur = [0u32; MAX_VARS];
        fn rec(i: usize, n: usize, left: u32, cur: &mut [u32; MAX_VARS], out: &mut Vec<Monomial>) {
            if i == n - 1 {
                cur[i] = left;
                out.push(Monomial::from_exponents(&cur[..n]));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, n, left - e, cur, out);
            }
        }
        rec(0, n, d as u32, &mut cur, &mut out);
        out.sort_by(|a, b| self.cmp_mono(b, a));
        out
    }

    /// Maps coefficients along a field embedding into `target`.
    pub fn base_change(&self, f: &Poly, emb: &FieldEmbedding, target: &PolyRing) -> Poly {
        Poly {
            terms: f
                .terms
                .iter()
                .map(|t| Term { mono: t.mono, coeff: emb.map(t.coeff) })
                .filter(|t| !t.coeff.is_zero())
                .collect(),
        }
        .resorted(target)
    }

    pub fn format(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, t) in f.terms.iter().enumerate() {
            let c = self.format_coeff(t.coeff);
            if k > 0 {
                out.push_str(" + ");
            }
            let vars = self.format_monomial(&t.mono);
            match (c.as_str(), vars.is_empty()) {
                (c, true) => out.push_str(c),
                ("1", false) => out.push_str(&vars),
                (c, false) => {
                    let _ = write!(out, "{c}*{vars}");
                }
            }
        }
        out
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = (0..self.nvars())
            .filter(|&i| m.0[i] > 0)
            .map(|i| if m.0[i] == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], m.0[i]) })
            .collect();
        parts.join("*")
    }

    fn format_coeff(&self, c: FqElem) -> String {
        if self.field.is_prime_field() {
            return c.index().to_string();
        }
        let coeffs = self.field.to_coeffs(c);
        let parts: Vec<String> = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &k)| k != 0)
            .map(|(i, &k)| match (i, k) {
                (0, k) => k.to_string(),
                (1, 1) => "a".to_string(),
                (1, k) => format!("{k}*a"),
                (i, 1) => format!("a^{i}"),
                (i, k) => format!("{k}*a^{i}"),
            })
            .collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.join(" + "))
        }
    }

    /// Parses polynomial text such as `3*x^2*y - z^3` or `(x+y)^5`.
    /// `gen` names the field generator when the field is not prime.
    pub fn parse(&self, text: &str, gen: Option<&str>, generator: usize) -> Result<Poly> {
        let mut parser = Parser { ring: self, src: text.as_bytes(), pos: 0, gen, generator };
        let summands = parser.top_level()?;
        let mut degree: Option<u32> = None;
        let mut all = Vec::new();
        for (pos, dict) in summands {
            for (m, c) in &dict {
                if c.is_zero() {
                    continue;
                }
                match degree {
                    None => degree = Some(m.degree()),
                    Some(d) if d != m.degree() => {
                        return Err(parser.error_at(pos, format!("inhomogeneous generator: term of degree {} after degree {d}", m.degree())));
                    }
                    _ => {}
                }
            }
            all.extend(dict);
        }
        self.from_terms(all).map_err(|_| parser.error_at(0, "inhomogeneous generator".into()))
    }
}

impl Poly {
    fn resorted(mut self, ring: &PolyRing) -> Poly {
        self.terms.sort_by(|a, b| ring.cmp_mono(&b.mono, &a.mono));
        self
    }
}

type Dict = HashMap<Monomial, FqElem>;

struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
    gen: Option<&'a str>,
    generator: usize,
}

impl Parser<'_> {
    fn error_at(&self, pos: usize, message: String) -> Error {
        Error::Parse { generator: self.generator, line: 1, column: pos + 1, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn top_level(&mut self) -> Result<Vec<(usize, Dict)>> {
        let mut out = Vec::new();
        let mut sign = FqElem::ONE;
        let field = self.ring.field().clone();
        if self.peek().is_none() {
            return Err(self.error_at(self.pos, "empty polynomial".into()));
        }
        loop {
            match self.peek() {
                Some(b'+') => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    sign = field.neg(sign);
                }
                _ => {}
            }
            self.skip_ws();
            let start = self.pos;
            let term = self.product()?;
            out.push((start, scale_dict(&field, term, sign)));
            sign = FqElem::ONE;
            match self.peek() {
                None => return Ok(out),
                Some(b'+') | Some(b'-') => {}
                Some(c) => return Err(self.error_at(self.pos, format!("unexpected {:?}", c as char))),
            }
        }
    }

    fn sum(&mut self) -> Result<Dict> {
        let field = self.ring.field().clone();
        let mut acc = Dict::new();
        let mut first = true;
        loop {
            let mut sign = FqElem::ONE;
            match self.peek() {
                Some(b'+') => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    sign = field.neg(sign);
                }
                _ if !first => return Ok(acc),
                _ => {}
            }
            first = false;
            let term = self.product()?;
            for (m, c) in term {
                let slot = acc.entry(m).or_insert(FqElem::ZERO);
                *slot = field.add(*slot, field.mul(sign, c));
            }
            if !matches!(self.peek(), Some(b'+') | Some(b'-')) {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Dict> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = mul_dict(self.ring.field(), &acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Dict> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let k = self.number()?;
            let k = u32::try_from(k).map_err(|_| self.error_at(start, "exponent too large".into()))?;
            let mut acc: Dict = [(Monomial::one(), FqElem::ONE)].into_iter().collect();
            for _ in 0..k {
                acc = mul_dict(self.ring.field(), &acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error_at(start, "expected a number".into()));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error_at(start, "number too large".into()))
    }

    fn atom(&mut self) -> Result<Dict> {
        let field = self.ring.field().clone();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error_at(self.pos, "expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.number()?;
                let p = field.characteristic() as u64;
                let c = field.from_int((n % p) as i64);
                let _ = start;
                Ok([(Monomial::one(), c)].into_iter().collect())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.ring.names().iter().position(|n| n == name) {
                    return Ok([(Monomial::var(i), FqElem::ONE)].into_iter().collect());
                }
                if self.gen == Some(name) {
                    return Ok([(Monomial::one(), field.generator())].into_iter().collect());
                }
                Err(self.error_at(start, format!("unknown variable {name:?}")))
            }
            Some(c) => Err(self.error_at(self.pos, format!("unexpected {:?}", c as char))),
            None => Err(self.error_at(self.pos, "unexpected end of input".into())),
        }
    }
}

fn scale_dict(field: &FieldDesc, d: Dict, c: FqElem) -> Dict {
    d.into_iter().map(|(m, x)| (m, field.mul(x, c))).collect()
}

fn mul_dict(field: &FieldDesc, a: &Dict, b: &Dict) -> Dict {
    let mut out = Dict::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let slot = out.entry(ma.mul(mb)).or_insert(FqElem::ZERO);
            *slot = field.add(*slot, field.mul(*ca, *cb));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// A homogeneous ideal with a lazily computed reduced Gröbner basis.
#[derive(Debug)]
pub struct Ideal {
    ring: PolyRing,
    gens: Vec<Poly>,
    gb: OnceLock<GroebnerBasis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Ideal { ring: self.ring.clone(), gens: self.gens.clone(), gb }
    }
}

impl Ideal {
    pub fn new(ring: PolyRing, gens: Vec<Poly>) -> Result<Self> {
        if let Some(k) = gens.iter().position(|g| !ring.is_homogeneous(g)) {
            return Err(Error::InvalidInput(format!("generator {k} is not homogeneous")));
        }
        Ok(Ideal { ring, gens, gb: OnceLock::new() })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Nonzero generators.
    pub fn nonzero_gens(&self) -> Vec<Poly> {
        self.gens.iter().filter(|g| !g.is_zero()).cloned().collect()
    }

    pub fn gb(&self) -> &GroebnerBasis {
        self.gb_with(&Budget::unlimited()).expect("unlimited budget cannot expire")
    }

    /// Publish-once: concurrent callers may both compute, only one result is
    /// stored and both are equal.
    pub fn gb_with(&self, budget: &Budget) -> Result<&GroebnerBasis> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let computed = groebner::reduced_gb(&self.ring, &self.gens, budget)?;
        let _ = self.gb.set(computed);
        Ok(self.gb.get().unwrap())
    }

    pub fn contains(&self, f: &Poly) -> bool {
        groebner::normal_form(&self.ring, f, self.gb()).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.gb().elements().iter().any(|g| g.degree() == Some(0))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    /// `I^{[p^iterate]}`: the generators raised to the `p^iterate`-th power.
    pub fn bracket_power(&self, iterate: u32) -> Ideal {
        let gens = self.gens.iter().map(|g| self.ring.frobenius_power(g, iterate)).collect();
        Ideal { ring: self.ring.clone(), gens, gb: OnceLock::new() }
    }

    pub fn with_ring(&self, ring: PolyRing, gens: Vec<Poly>) -> Result<Ideal> {
        Ideal::new(ring, gens)
    }

    /// The same ideal in `ring`, which may differ by monomial order.
    pub fn reordered(&self, order: MonomialOrder) -> Ideal {
        let ring = self.ring.with_order(order);
        let gens = self.gens.iter().map(|g| ring.normalize(g)).collect();
        Ideal { ring, gens, gb: OnceLock::new() }
    }

    pub fn base_change(&self, emb: &FieldEmbedding) -> Ideal {
        let ring = self.ring.with_field(emb.target.clone());
        let gens = self.gens.iter().map(|g| self.ring.base_change(g, emb, &ring)).collect();
        Ideal { ring, gens, gb: OnceLock::new() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::ideal_equal;

    fn ring(p: u32, e: u32, vars: &[&str]) -> PolyRing {
        PolyRing::new(FieldDesc::new(p, e).unwrap(), vars, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(5, 1, &["x", "y"]);
        let f = r.parse("x + y", None, 0).unwrap();
        let g = r.parse("x - y", None, 0).unwrap();
        assert_eq!(r.mul(&f, &g), r.parse("x^2 - y^2", None, 0).unwrap());
    }

    #[test]
    fn freshman_dream() {
        let r = ring(5, 1, &["x", "y"]);
        let f = r.parse("x + y", None, 0).unwrap();
        assert_eq!(r.pow(&f, 5), r.parse("x^5 + y^5", None, 0).unwrap());
        assert_eq!(r.frobenius(&f), r.pow(&f, 5));
    }

    #[test]
    fn inhomogeneous_sum_is_rejected() {
        let r = ring(5, 1, &["x", "y"]);
        assert!(matches!(r.add(&r.var(0), &r.one()), Err(Error::InhomogeneousSum)));
        let err = r.parse("x^2 + y", None, 3).unwrap_err();
        match err {
            Error::Parse { generator, column, .. } => {
                assert_eq!(generator, 3);
                assert_eq!(column, 7);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parser_handles_powers_parentheses_and_generators() {
        let r = ring(2, 2, &["x", "y"]);
        let f = r.parse("a*x + (a+1)*y", Some("a"), 0).unwrap();
        assert_eq!(f.len(), 2);
        let w = r.field().generator();
        assert_eq!(f.coeff(&Monomial::var(0)), w);
        assert!(r.parse("x + z", None, 0).is_err());
        assert!(r.parse("", None, 0).is_err());
        assert!(r.parse("x +", None, 0).is_err());
        assert_eq!(r.parse("-x - y", None, 0).unwrap(), r.parse("x+y", None, 0).unwrap());
    }

    #[test]
    fn pth_decompose_small() {
        let r = ring(2, 1, &["x", "y"]);
        let f = r.parse("x^2 + x*y", None, 0).unwrap();
        let parts = r.pth_decompose(&f);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&Monomial::one()], r.var(0));
        assert_eq!(parts[&Monomial::from_exponents(&[1, 1])], r.one());
        assert_eq!(r.reassemble(&parts).unwrap(), f);
    }

    #[test]
    fn pth_root_of_constant() {
        let r = ring(3, 2, &["x"]);
        let c = r.field().generator();
        let parts = r.pth_decompose(&r.term(Monomial::one(), c));
        let root = parts[&Monomial::one()].coeff(&Monomial::one());
        assert_eq!(r.field().frob(root, 1), c);
    }

    #[test]
    fn monomial_counts_and_order() {
        let r = ring(5, 1, &["x", "y", "z"]);
        assert_eq!(r.monomials_of_degree(0), vec![Monomial::one()]);
        assert!(r.monomials_of_degree(-3).is_empty());
        assert_eq!(r.monomials_of_degree(1), vec![Monomial::var(0), Monomial::var(1), Monomial::var(2)]);
        for d in 0..7u64 {
            let expected = (d + 1) * (d + 2) / 2;
            assert_eq!(r.monomials_of_degree(d as i64).len() as u64, expected);
        }
        // grevlex: x*z < y^2
        let m = r.monomials_of_degree(2);
        let pos = |e: &[u32]| m.iter().position(|x| *x == Monomial::from_exponents(e)).unwrap();
        assert!(pos(&[0, 2, 0]) < pos(&[1, 0, 1]));
    }

    #[test]
    fn bracket_powers() {
        let r = ring(2, 1, &["x", "y"]);
        let i = Ideal::new(r.clone(), vec![r.var(0), r.var(1)]).unwrap();
        let b = i.bracket_power(1);
        assert_eq!(b.gens()[0], r.parse("x^2", None, 0).unwrap());
        assert_eq!(b.gens()[1], r.parse("y^2", None, 0).unwrap());
        assert!(ideal_equal(&b.bracket_power(1), &i.bracket_power(2)));

        let r3 = ring(3, 1, &["x", "y"]);
        let i = Ideal::new(r3.clone(), vec![r3.parse("x + y", None, 0).unwrap()]).unwrap();
        assert_eq!(i.bracket_power(1).gens()[0], r3.parse("x^3 + y^3", None, 0).unwrap());
    }

    #[test]
    fn bracket_power_is_contained() {
        let r = ring(3, 1, &["x", "y", "z"]);
        let samples = [
            vec!["x^2 + y*z", "x*y"],
            vec!["x + y + z"],
            vec!["x*y - z^2", "y^2 - x*z", "x^2 - y*z"],
            vec!["x^3 + y^3 + z^3"],
            vec!["x*y", "y*z", "x*z"],
        ];
        for gens in samples {
            let gens = gens.iter().map(|s| r.parse(s, None, 0).unwrap()).collect();
            let i = Ideal::new(r.clone(), gens).unwrap();
            for g in i.bracket_power(1).gens() {
                assert!(i.contains(g));
            }
        }
    }
}
