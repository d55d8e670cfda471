//! Polynomials over F_q in the variable T (the ring A = F_q[T]) and a generic
//! univariate polynomial type used for A[X] and K[X].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldDesc};

/// Degree of a polynomial, with a dedicated value for the zero polynomial.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Degree as a signed integer with `None` for minus infinity.
    pub fn as_i64(self) -> Option<i64> {
        self.finite().map(|d| d as i64)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        match (self, o) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// An element of A = F_q[T]; coefficient `i` multiplies T^i and the vector has
/// no trailing zeros.
#[derive(Clone)]
pub struct PolyA {
    field: FieldDesc,
    c: Vec<Elem>,
}

impl PartialEq for PolyA {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && self.field == o.field
    }
}

impl Eq for PolyA {}

impl Hash for PolyA {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.c.hash(h);
    }
}

impl PartialOrd for PolyA {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for PolyA {
    /// By degree, then coefficients from the top down.
    fn cmp(&self, o: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&o.c.len())
            .then_with(|| self.c.iter().rev().cmp(o.c.iter().rev()))
    }
}

impl fmt::Debug for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn trim(c: &mut Vec<Elem>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

impl PolyA {
    pub fn from_coeffs(field: &FieldDesc, mut c: Vec<Elem>) -> PolyA {
        trim(&mut c);
        PolyA {
            field: field.clone(),
            c,
        }
    }

    pub fn zero(field: &FieldDesc) -> PolyA {
        PolyA {
            field: field.clone(),
            c: Vec::new(),
        }
    }

    pub fn one(field: &FieldDesc) -> PolyA {
        Self::constant(field, 1)
    }

    pub fn constant(field: &FieldDesc, a: Elem) -> PolyA {
        Self::from_coeffs(field, vec![a])
    }

    /// a·T^e.
    pub fn monomial(field: &FieldDesc, a: Elem, e: usize) -> PolyA {
        if a == 0 {
            return Self::zero(field);
        }
        let mut c = vec![0; e + 1];
        c[e] = a;
        PolyA {
            field: field.clone(),
            c,
        }
    }

    /// The variable T.
    pub fn t(field: &FieldDesc) -> PolyA {
        Self::monomial(field, 1, 1)
    }

    /// T - x.
    pub fn linear(field: &FieldDesc, x: Elem) -> PolyA {
        Self::from_coeffs(field, vec![field.neg(x), 1])
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Degree {
        if self.c.is_empty() {
            Degree::NegInf
        } else {
            Degree::Finite(self.c.len() - 1)
        }
    }

    /// Degree with the zero polynomial mapped to `None`.
    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    /// Leading coefficient, zero for the zero polynomial.
    pub fn lc(&self) -> Elem {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// True for constants including zero.
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.c.iter().filter(|&&x| x != 0).count()
    }

    pub fn add(&self, o: &PolyA) -> PolyA {
        let f = &self.field;
        let (long, short) = if self.c.len() >= o.c.len() {
            (&self.c, &o.c)
        } else {
            (&o.c, &self.c)
        };
        let mut c = long.clone();
        for (i, &b) in short.iter().enumerate() {
            c[i] = f.add(c[i], b);
        }
        Self::from_coeffs(f, c)
    }

    pub fn add_assign(&mut self, o: &PolyA) {
        let f = self.field.clone();
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), 0);
        }
        for (i, &b) in o.c.iter().enumerate() {
            self.c[i] = f.add(self.c[i], b);
        }
        trim(&mut self.c);
    }

    /// self += a·T^e·o.
    pub fn add_scaled_shifted(&mut self, a: Elem, e: usize, o: &PolyA) {
        if a == 0 || o.is_zero() {
            return;
        }
        let f = self.field.clone();
        let need = o.c.len() + e;
        if self.c.len() < need {
            self.c.resize(need, 0);
        }
        for (i, &b) in o.c.iter().enumerate() {
            if b != 0 {
                self.c[i + e] = f.add(self.c[i + e], f.mul(a, b));
            }
        }
        trim(&mut self.c);
    }

    pub fn neg(&self) -> PolyA {
        let f = &self.field;
        PolyA {
            field: f.clone(),
            c: self.c.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn sub(&self, o: &PolyA) -> PolyA {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Elem) -> PolyA {
        let f = &self.field;
        Self::from_coeffs(f, self.c.iter().map(|&b| f.mul(a, b)).collect())
    }

    /// Multiplication by T^e.
    pub fn shift(&self, e: usize) -> PolyA {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; e];
        c.extend_from_slice(&self.c);
        PolyA {
            field: self.field.clone(),
            c,
        }
    }

    pub fn mul(&self, o: &PolyA) -> PolyA {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let n = self.c.len() + o.c.len() - 1;
        if f.is_prime_field() {
            let p = f.p() as u64;
            // Partial sums stay below 2^63 as long as the shorter operand has
            // fewer than 2^63 / p^2 terms.
            let (a, b) = if self.c.len() <= o.c.len() {
                (&self.c, &o.c)
            } else {
                (&o.c, &self.c)
            };
            let mut acc = vec![0u64; n];
            let limit = (u64::MAX >> 2) / (p * p);
            let mut pending = 0u64;
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as u64;
                for (j, &y) in b.iter().enumerate() {
                    acc[i + j] += x * y as u64;
                }
                pending += 1;
                if pending >= limit {
                    acc.iter_mut().for_each(|v| *v %= p);
                    pending = 0;
                }
            }
            let c = acc.into_iter().map(|v| (v % p) as Elem).collect();
            return Self::from_coeffs(f, c);
        }
        let mut c = vec![0; n];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                if y != 0 {
                    c[i + j] = f.add(c[i + j], f.mul(x, y));
                }
            }
        }
        Self::from_coeffs(f, c)
    }

    pub fn square(&self) -> PolyA {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> PolyA {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    /// Quotient and remainder; errors on division by zero.
    pub fn divrem(&self, g: &PolyA) -> Result<(PolyA, PolyA)> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dg = g.c.len() - 1;
        if self.c.len() <= dg {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv = f.inv(g.lc()).expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        let mut q = vec![0; r.len() - dg];
        for top in (dg..r.len()).rev() {
            let c = f.mul(r[top], inv);
            if c == 0 {
                continue;
            }
            let s = top - dg;
            q[s] = c;
            for (i, &gi) in g.c.iter().enumerate() {
                if gi != 0 {
                    r[s + i] = f.sub(r[s + i], f.mul(c, gi));
                }
            }
        }
        r.truncate(dg);
        Ok((Self::from_coeffs(f, q), Self::from_coeffs(f, r)))
    }

    pub fn rem(&self, g: &PolyA) -> Result<PolyA> {
        Ok(self.divrem(g)?.1)
    }

    /// Exact quotient; errors when g does not divide self.
    pub fn exact_div(&self, g: &PolyA) -> Result<PolyA> {
        let (q, r) = self.divrem(g)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible(format!("{g} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, f: &PolyA) -> bool {
        !self.is_zero() && f.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn make_monic(&self) -> PolyA {
        match self.field.inv(self.lc()) {
            Some(i) => self.scale(i),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &PolyA) -> PolyA {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Returns (g, s, t) with g = s·self + t·o and g monic.
    pub fn xgcd(&self, o: &PolyA) -> (PolyA, PolyA, PolyA) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("r1 is nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match f.inv(r0.lc()) {
            Some(i) => (r0.scale(i), s0.scale(i), t0.scale(i)),
            None => (r0, s0, t0),
        }
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u64, m: &PolyA) -> Result<PolyA> {
        let mut result = Self::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.square().rem(m)?;
            }
        }
        Ok(result)
    }

    /// Evaluation at a point of F_q.
    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluation at a point of an extension field, given the embedding.
    pub fn eval_ext(&self, ext: &crate::gf::Extension, x: Elem) -> Elem {
        let big = ext.field();
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &c| big.add(big.mul(acc, x), ext.embed(c)))
    }

    /// Formal derivative in T.
    pub fn derivative(&self) -> PolyA {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(f.from_int((i as u64 % f.p() as u64) as i64), a))
            .collect();
        Self::from_coeffs(f, c)
    }

    /// Order of vanishing at the prime `w`, `None` for the zero polynomial.
    pub fn valuation(&self, w: &PolyA) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut x = self.clone();
        loop {
            let (q, r) = x.divrem(w).expect("prime is nonzero");
            if !r.is_zero() {
                return Some(v);
            }
            x = q;
            v += 1;
        }
    }

    /// Composition self(g).
    pub fn compose(&self, g: &PolyA) -> PolyA {
        let f = &self.field;
        self.c.iter().rev().fold(Self::zero(f), |acc, &c| {
            acc.mul(g).add(&Self::constant(f, c))
        })
    }

    /// For g with g' = 0, the polynomial h with h^p = g.
    fn pth_root(&self) -> PolyA {
        let f = &self.field;
        let p = f.p() as usize;
        let root_exp = (f.size() / f.p()) as u64;
        let c = self
            .c
            .iter()
            .step_by(p)
            .map(|&a| f.pow(a, root_exp))
            .collect();
        Self::from_coeffs(f, c)
    }

    /// Irreducibility over F_q by the Rabin criterion.
    pub fn is_irreducible(&self) -> bool {
        let d = match self.deg() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let f = &self.field;
        let m = self.make_monic();
        let t = Self::t(f);
        let mut h = t.clone();
        let q = f.size() as u64;
        for _ in 1..=d / 2 {
            h = h.powmod(q, &m).expect("modulus is nonzero");
            if !m.gcd(&h.sub(&t)).is_one() {
                return false;
            }
        }
        true
    }

    /// Squarefree decomposition of a monic polynomial: pairs (a_i, i) with
    /// f = Π a_i^i, each a_i squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(PolyA, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.field.p() as usize;
        let f = self.make_monic();
        let mut out = Vec::new();
        let mut c = f.gcd(&f.derivative());
        let mut w = f.exact_div(&c)?;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.exact_div(&y)?;
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.exact_div(&w)?;
        }
        if !c.is_one() {
            for (g, m) in c.pth_root().squarefree_decomposition()? {
                out.push((g, m * p));
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }

    /// Writes f = D·g² with D squarefree (carrying the leading coefficient)
    /// and g monic. Requires odd characteristic.
    pub fn squarefree_part(&self) -> Result<(PolyA, PolyA)> {
        if self.field.p() == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let f = &self.field;
        let mut d = Self::constant(f, self.lc());
        let mut g = Self::one(f);
        for (a, i) in self.squarefree_decomposition()? {
            if i % 2 == 1 {
                d = d.mul(&a);
            }
            g = g.mul(&a.pow((i / 2) as u64));
        }
        Ok((d, g))
    }

    /// Complete factorization into monic irreducibles, ascending by degree and
    /// then lexicographically. The leading coefficient is dropped.
    pub fn factor_monic(&self) -> Result<Vec<(PolyA, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = &self.field;
        let mut rest = self.make_monic();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.deg().unwrap_or(0) >= 2 * d {
            for pr in monic_irreducibles(f, d).iter() {
                let mut e = 0;
                loop {
                    let (q, r) = rest.divrem(pr)?;
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((pr.clone(), e));
                }
                if rest.deg().unwrap_or(0) < 2 * d {
                    break;
                }
            }
            d += 1;
        }
        if rest.deg().unwrap_or(0) > 0 {
            match out.iter_mut().find(|(g, _)| *g == rest) {
                Some(entry) => entry.1 += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        Ok(out)
    }

    /// The monic prime divisors of self.
    pub fn prime_divisors(&self) -> Result<Vec<PolyA>> {
        Ok(self.factor_monic()?.into_iter().map(|(g, _)| g).collect())
    }

    /// Parses `T^3+2*T+1`, `(x+1)T^2`, etc.
    pub fn parse(field: &FieldDesc, s: &str) -> Result<PolyA> {
        crate::text::parse_poly(field, s)
    }
}

impl fmt::Display for PolyA {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(out, "0");
        }
        let f = &self.field;
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let cs = f.format(a);
            if i == 0 {
                write!(out, "{cs}")?;
                continue;
            }
            if a != 1 {
                if cs.contains('+') {
                    write!(out, "({cs})")?;
                } else {
                    write!(out, "{cs}")?;
                }
            }
            if i == 1 {
                write!(out, "T")?;
            } else {
                write!(out, "T^{i}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a PolyA> for &'a PolyA {
    type Output = PolyA;
    fn add(self, o: &PolyA) -> PolyA {
        PolyA::add(self, o)
    }
}

impl<'a> Sub<&'a PolyA> for &'a PolyA {
    type Output = PolyA;
    fn sub(self, o: &PolyA) -> PolyA {
        PolyA::sub(self, o)
    }
}

impl<'a> Mul<&'a PolyA> for &'a PolyA {
    type Output = PolyA;
    fn mul(self, o: &PolyA) -> PolyA {
        PolyA::mul(self, o)
    }
}

impl Neg for &PolyA {
    type Output = PolyA;
    fn neg(self) -> PolyA {
        PolyA::neg(self)
    }
}

type IrredKey = (u32, Vec<u32>, usize);

fn irreducible_cache() -> &'static Mutex<HashMap<IrredKey, Arc<Vec<PolyA>>>> {
    static CACHE: OnceLock<Mutex<HashMap<IrredKey, Arc<Vec<PolyA>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All monic irreducibles of degree `d`, ascending; cached per field.
pub fn monic_irreducibles(field: &FieldDesc, d: usize) -> Arc<Vec<PolyA>> {
    let key = (field.p(), field.modulus().to_vec(), d);
    if let Some(v) = irreducible_cache().lock().get(&key) {
        return v.clone();
    }
    let v: Vec<PolyA> = monic_of_degree(field, d)
        .filter(|g| g.is_irreducible())
        .collect();
    let v = Arc::new(v);
    irreducible_cache().lock().insert(key, v.clone());
    v
}

/// Monic polynomials of exact degree d in ascending order.
pub fn monic_of_degree(field: &FieldDesc, d: usize) -> impl Iterator<Item = PolyA> + '_ {
    let q = field.size() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |idx| {
        let mut c = digits_base(idx, q, d);
        c.push(1);
        PolyA::from_coeffs(field, c)
    })
}

fn digits_base(mut idx: u64, q: u64, len: usize) -> Vec<Elem> {
    let mut c = Vec::with_capacity(len + 1);
    for _ in 0..len {
        c.push((idx % q) as Elem);
        idx /= q;
    }
    c
}

/// Every polynomial of degree at most `max_deg` (all of them, or only the
/// monic ones) in ascending order. `max_deg = 0` with `monic = false` yields
/// the constants.
pub fn enumerate_polys(
    field: &FieldDesc,
    max_deg: usize,
    monic: bool,
) -> Box<dyn Iterator<Item = PolyA> + '_> {
    let q = field.size() as u64;
    if monic {
        Box::new((0..=max_deg).flat_map(move |d| monic_of_degree(field, d)))
    } else {
        let count = q.pow(max_deg as u32 + 1);
        Box::new((0..count).map(move |idx| {
            PolyA::from_coeffs(field, digits_base(idx, q, max_deg + 1))
        }))
    }
}

/// Operations a coefficient ring needs for [`UPoly`].
pub trait RingElem: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

impl RingElem for PolyA {
    fn zero_like(&self) -> Self {
        PolyA::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        PolyA::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add_ref(&self, o: &Self) -> Self {
        PolyA::add(self, o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        PolyA::sub(self, o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        PolyA::mul(self, o)
    }
    fn neg_ref(&self) -> Self {
        PolyA::neg(self)
    }
}

/// Dense univariate polynomial in X over a ring R, without trailing zeros.
/// A zero element is kept so that operations never need a global zero.
#[derive(Clone, PartialEq)]
pub struct UPoly<R: RingElem> {
    zero: R,
    c: Vec<R>,
}

/// Polynomials in X with coefficients in A.
pub type PolyAX = UPoly<PolyA>;

impl<R: RingElem> UPoly<R> {
    pub fn new(zero: R, mut c: Vec<R>) -> Self {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        UPoly { zero, c }
    }

    pub fn zero(zero: R) -> Self {
        UPoly { zero, c: Vec::new() }
    }

    pub fn constant(a: R) -> Self {
        Self::new(a.zero_like(), vec![a])
    }

    /// The variable X.
    pub fn x(zero: R) -> Self {
        let one = zero.one_like();
        Self::new(zero.clone(), vec![zero, one])
    }

    /// a·X^e.
    pub fn monomial(a: R, e: usize) -> Self {
        let z = a.zero_like();
        let mut c = vec![z.clone(); e];
        c.push(a);
        Self::new(z, c)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn zero_elem(&self) -> &R {
        &self.zero
    }

    pub fn degree(&self) -> Degree {
        if self.c.is_empty() {
            Degree::NegInf
        } else {
            Degree::Finite(self.c.len() - 1)
        }
    }

    pub fn deg(&self) -> Option<usize> {
        self.degree().finite()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lc(&self) -> R {
        self.c.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i).add_ref(&o.coeff(i))).collect();
        Self::new(self.zero.clone(), c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i).sub_ref(&o.coeff(i))).collect();
        Self::new(self.zero.clone(), c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.zero.clone(), self.c.iter().map(|a| a.neg_ref()).collect())
    }

    pub fn scale(&self, a: &R) -> Self {
        Self::new(self.zero.clone(), self.c.iter().map(|x| x.mul_ref(a)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.zero.clone());
        }
        let mut c = vec![self.zero.clone(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Self::new(self.zero.clone(), c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::constant(self.zero.one_like());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Horner evaluation at a ring element.
    pub fn eval(&self, x: &R) -> R {
        self.c
            .iter()
            .rev()
            .fold(self.zero.clone(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    /// Division by a polynomial with leading coefficient one.
    pub fn divrem_monic(&self, g: &Self) -> Result<(Self, Self)> {
        let dg = g.deg().ok_or(Error::DivisionByZero)?;
        if g.lc() != self.zero.one_like() {
            return Err(Error::NotMonic(format!("{:?}", g.lc())));
        }
        let mut r = self.c.clone();
        if r.len() <= dg {
            return Ok((Self::zero(self.zero.clone()), self.clone()));
        }
        let mut q = vec![self.zero.clone(); r.len() - dg];
        for top in (dg..r.len()).rev() {
            let c = r[top].clone();
            if c.is_zero() {
                continue;
            }
            let s = top - dg;
            for (i, gi) in g.c.iter().enumerate() {
                r[s + i] = r[s + i].sub_ref(&c.mul_ref(gi));
            }
            q[s] = c;
        }
        r.truncate(dg);
        Ok((
            Self::new(self.zero.clone(), q),
            Self::new(self.zero.clone(), r),
        ))
    }
}

impl<R: RingElem> fmt::Debug for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.c.iter()).finish()
    }
}

impl PolyAX {
    /// X² − aX + b·w^n.
    pub fn weil(a: &PolyA, b: Elem, wp: &PolyA, n: u32) -> PolyAX {
        let f = a.field();
        let c0 = wp.pow(n as u64).scale(b);
        PolyAX::new(PolyA::zero(f), vec![c0, a.neg(), PolyA::one(f)])
    }

    /// a² − 4·c_0·c_2 for a degree-2 polynomial c_2X² + aX + c_0.
    pub fn discriminant(&self) -> Result<PolyA> {
        if self.deg() != Some(2) {
            return Err(Error::NotDegreeTwo);
        }
        let f = self.zero.field().clone();
        let four = PolyA::constant(&f, f.from_int(4));
        let a = self.coeff(1);
        Ok(a.square().sub(&four.mul(&self.coeff(0)).mul(&self.coeff(2))))
    }

    /// Field of the coefficients.
    pub fn field(&self) -> &FieldDesc {
        self.zero.field()
    }
}

impl fmt::Display for PolyAX {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let s = a.to_string();
            if i == 0 {
                write!(out, "{s}")?;
                continue;
            }
            if !a.is_one() {
                if a.is_constant() && !s.contains('+') {
                    write!(out, "{s}")?;
                } else {
                    write!(out, "({s})")?;
                }
            }
            if i == 1 {
                write!(out, "X")?;
            } else {
                write!(out, "X^{i}")?;
            }
        }
        Ok(())
    }
}
