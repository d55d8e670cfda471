//! Finite fields F_p ⊂ F_q ⊂ F_{q^m}.
//!
//! An element of F_{p^r} is stored as its coefficient vector over F_p with
//! respect to the power basis 1, x, ..., x^{r-1}, packed into a `u32` as the
//! base-p integer `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`. Prime field elements
//! are therefore the integers `0..p`. Multiplication goes through exponent and
//! logarithm tables built once per field; addition is coordinate-wise.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;

use crate::error::{Error, Result};

/// Packed coefficient vector of a field element.
pub type Elem = u32;

/// Largest field order for which tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 512;

/// Dense polynomials over F_p, coefficient `i` at index `i`, used only for
/// field construction.
mod fp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
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

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u64 * inv % p as u64) as u32;
            if c != 0 {
                let shift = top - dm;
                for (i, &mi) in m.iter().enumerate() {
                    let t = (c as u64 * mi as u64 % p as u64) as u32;
                    r[shift + i] = (r[shift + i] + p - t) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let v: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        rem(&v, m, p)
    }

    pub fn powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin-style test: `f` of degree r is irreducible iff it has no
    /// common factor with x^{p^i} - x for 1 <= i <= r/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let r = f.len() - 1;
        if r == 0 {
            return false;
        }
        if r == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 1..=r / 2 {
            h = powmod(&h, p as u64, f, p);
            let g = gcd(f, &sub(&h, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// A finite field F_{p^r} together with its arithmetic tables.
///
/// Cloning is cheap; clones share the same tables.
#[derive(Clone)]
pub struct FieldDesc {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    p: u32,
    r: u32,
    size: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    add: Option<Vec<Elem>>,
    neg: Vec<Elem>,
    towers: Mutex<HashMap<u32, Arc<Extension>>>,
}

/// The field F_{q^m} seen as an extension of a fixed F_q, with the
/// embedding F_q -> F_{q^m}.
pub struct Extension {
    m: u32,
    base_size: u32,
    field: FieldDesc,
    embed: Vec<Elem>,
    restrict: HashMap<Elem, Elem>,
}

impl Extension {
    /// The big field F_{q^m}.
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    /// Degree m of the extension.
    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Image of an element of F_q.
    pub fn embed(&self, x: Elem) -> Elem {
        self.embed[x as usize]
    }

    /// Preimage of an element lying in the image of F_q.
    pub fn restrict(&self, y: Elem) -> Option<Elem> {
        self.restrict.get(&y).copied()
    }

    /// Norm from F_{q^m} down to F_q: λ^{1+q+...+q^{m-1}}.
    pub fn norm_to_base(&self, lambda: Elem) -> Elem {
        let q = self.base_size as u64;
        let big = self.field.size() as u64;
        let e = (big - 1) / (q - 1);
        let y = self.field.pow(lambda, e);
        self.restrict(y)
            .expect("norm lies in the base field by construction")
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}; {})", self.size(), self.modulus_string())
    }
}

impl FieldDesc {
    /// Builds F_{p^r}. Without a modulus the lexicographically smallest monic
    /// irreducible of degree r is used, where polynomials are ordered by the
    /// base-p integer formed from their coefficients.
    pub fn new(p: u32, r: u32, modulus: Option<&[u32]>) -> Result<FieldDesc> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeCharacteristic(p as u64));
        }
        if r == 0 {
            return Err(Error::ModulusDegree { expected: 1, got: 0 });
        }
        let size = (p as u64).checked_pow(r).unwrap_or(u64::MAX);
        if size > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge(size));
        }
        let modulus = match modulus {
            Some(m) => {
                let mut m: Vec<u32> = m.iter().map(|&c| c % p).collect();
                fp::trim(&mut m);
                if m.len() != r as usize + 1 || m[r as usize] != 1 {
                    return Err(Error::ModulusDegree {
                        expected: r,
                        got: m.len() as i64 - 1,
                    });
                }
                if !fp::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(fp_string(&m)));
                }
                m
            }
            None => smallest_irreducible(p, r),
        };
        Ok(Self::build(p, r, size as u32, modulus))
    }

    /// Convenience constructor for q = p^r with the default modulus.
    pub fn from_order(q: u64) -> Result<FieldDesc> {
        let (p, r) = prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
        Self::new(p, r, None)
    }

    fn build(p: u32, r: u32, size: u32, modulus: Vec<u32>) -> FieldDesc {
        let mut pow_p = vec![1u32; r as usize + 1];
        for i in 1..=r as usize {
            pow_p[i] = pow_p[i - 1] * p;
        }
        let pack = |v: &[u32]| -> Elem { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let order = size - 1;
        // Multiplicative generator: smallest packed element of full order.
        let gen: Vec<u32> = if size == 2 {
            vec![1]
        } else {
            let divs = prime_divisors(order as u64);
            let mut found = None;
            for c in 2..size {
                let v = unpack(c, p, r);
                if divs
                    .iter()
                    .all(|&d| fp::powmod(&v, order as u64 / d, &modulus, p) != vec![1])
                {
                    found = Some(v);
                    break;
                }
            }
            found.expect("finite fields have primitive elements")
        };
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = vec![1u32];
        for i in 0..order {
            let e = pack(&cur);
            exp[i as usize] = e;
            exp[(i + order) as usize] = e;
            log[e as usize] = i;
            cur = mul_small(&cur, &gen, &modulus, p);
        }
        let neg: Vec<Elem> = (0..size)
            .map(|a| {
                let d = unpack(a, p, r);
                let n: Vec<u32> = d.iter().map(|&c| (p - c) % p).collect();
                pack(&n)
            })
            .collect();
        let mut inner = FieldInner {
            p,
            r,
            size,
            modulus,
            pow_p,
            exp,
            log,
            add: None,
            neg,
            towers: Mutex::new(HashMap::new()),
        };
        if r > 1 && p != 2 && size <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    t[(a * size + b) as usize] = add_digits(a, b, p);
                }
            }
            inner.add = Some(t);
        }
        FieldDesc {
            inner: Arc::new(inner),
        }
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn r(&self) -> u32 {
        self.inner.r
    }

    /// Field order q = p^r.
    pub fn size(&self) -> u32 {
        self.inner.size
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.r == 1
    }

    /// Defining polynomial over F_p, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn modulus_string(&self) -> String {
        fp_string(&self.inner.modulus)
    }

    /// The class of x, i.e. the generator of the power basis.
    pub fn gen(&self) -> Elem {
        if self.inner.r == 1 {
            // F_p = F_p[x]/(x - c) and x is the root c.
            (self.inner.p - self.inner.modulus[0]) % self.inner.p
        } else {
            self.inner.p
        }
    }

    /// Embeds an integer into the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.inner.p as i64) as Elem
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.inner.size
    }

    /// Coordinate vector of length r.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        unpack(a, self.inner.p, self.inner.r)
    }

    pub fn from_digits(&self, d: &[u32]) -> Elem {
        d.iter()
            .take(self.inner.r as usize)
            .enumerate()
            .map(|(i, &c)| (c % self.inner.p) * self.inner.pow_p[i])
            .sum()
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_prime_field(&self, a: Elem) -> bool {
        a < self.inner.p
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if f.r == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if f.p == 2 {
            a ^ b
        } else if let Some(t) = &f.add {
            t[(a * f.size + b) as usize]
        } else {
            add_digits(a, b, f.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if a == 0 || b == 0 {
            return 0;
        }
        if f.r == 1 {
            return ((a as u64 * b as u64) % f.p as u64) as Elem;
        }
        f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let f = &*self.inner;
        let order = f.size - 1;
        let l = f.log[a as usize];
        Some(f.exp[((order - l) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// a^e for e >= 0, with 0^0 = 1.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.inner;
        let order = (f.size - 1) as u64;
        let l = f.log[a as usize] as u64;
        f.exp[((l * (e % order)) % order) as usize]
    }

    /// a^e for a unit a and any integer e.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Elem {
        assert!(a != 0, "negative powers need a unit");
        let order = (self.inner.size - 1) as i64;
        self.pow(a, e.rem_euclid(order) as u64)
    }

    /// Discrete logarithm with respect to the table generator.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.inner.log[a as usize])
        }
    }

    /// Table generator raised to `i`.
    pub fn exp(&self, i: u64) -> Elem {
        let order = (self.inner.size - 1) as u64;
        self.inner.exp[(i % order) as usize]
    }

    /// Iterator over all elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.inner.size
    }

    /// Iterator over the nonzero elements in packed order.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.inner.size
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.inner.p == 2 || self.inner.log[a as usize] % 2 == 0
    }

    /// A square root when one exists.
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return Some(0);
        }
        let f = &*self.inner;
        let order = f.size - 1;
        let l = f.log[a as usize];
        if f.p == 2 {
            // order is odd, so halving the logarithm is inverting 2 mod order.
            let half = (l as u64 * ((order as u64 + 1) / 2)) % order as u64;
            return Some(f.exp[half as usize]);
        }
        if l % 2 == 1 {
            None
        } else {
            Some(f.exp[(l / 2) as usize])
        }
    }

    /// The quadratic character of a single element: 1, 0 or -1.
    pub fn legendre(&self, a: Elem) -> Result<i8> {
        if self.inner.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Ok(if a == 0 {
            0
        } else if self.is_square(a) {
            1
        } else {
            -1
        })
    }

    /// Returns 1, 0 or -1 according to whether X^2 - αX + β has two distinct
    /// roots, a double root, or no root in the field.
    pub fn quadratic_character(&self, alpha: Elem, beta: Elem) -> Result<i8> {
        if self.inner.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let four = self.from_int(4);
        let d = self.sub(self.mul(alpha, alpha), self.mul(four, beta));
        self.legendre(d)
    }

    /// Absolute trace to F_2 in characteristic 2: x + x^2 + ... + x^{2^{r-1}}.
    pub fn abs_trace2(&self, a: Elem) -> Result<u32> {
        if self.inner.p != 2 {
            return Err(Error::OddCharacteristic);
        }
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.inner.r {
            t ^= x;
            x = self.mul(x, x);
        }
        Ok(t)
    }

    /// F_{q^m} with the embedding of this field; cached per m.
    pub fn extension(&self, m: u32) -> Result<Arc<Extension>> {
        if m == 0 {
            return Err(Error::RangeViolation("extension degree must be positive".into()));
        }
        if let Some(e) = self.inner.towers.lock().get(&m) {
            return Ok(e.clone());
        }
        let ext = Arc::new(self.build_extension(m)?);
        self.inner.towers.lock().insert(m, ext.clone());
        Ok(ext)
    }

    fn build_extension(&self, m: u32) -> Result<Extension> {
        let p = self.inner.p;
        let r = self.inner.r;
        let big = if m == 1 {
            self.clone()
        } else {
            FieldDesc::new(p, r * m, None)?
        };
        // Image of x: the smallest root of our modulus in the big field.
        let theta = if m == 1 {
            self.gen()
        } else {
            big.elements()
                .find(|&t| {
                    let mut acc = 0;
                    for &c in self.inner.modulus.iter().rev() {
                        acc = big.add(big.mul(acc, t), c);
                    }
                    acc == 0
                })
                .expect("a field of degree divisible by r contains F_q")
        };
        let mut embed = Vec::with_capacity(self.inner.size as usize);
        for a in self.elements() {
            let d = self.digits(a);
            let mut acc = 0;
            for &c in d.iter().rev() {
                acc = big.add(big.mul(acc, theta), c);
            }
            embed.push(acc);
        }
        let restrict = embed
            .iter()
            .enumerate()
            .map(|(i, &y)| (y, i as Elem))
            .collect();
        Ok(Extension {
            m,
            base_size: self.inner.size,
            field: big,
            embed,
            restrict,
        })
    }

    /// Norm of an element of F_{q^m} to this field.
    pub fn norm_to_base(&self, ext: &Extension, lambda: Elem) -> Elem {
        ext.norm_to_base(lambda)
    }

    /// Text form: an integer for prime fields, a polynomial in `x` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.inner.r == 1 {
            return a.to_string();
        }
        fp_string(&self.digits(a))
    }

    /// Parses the text form produced by [`FieldDesc::format`]; arbitrary
    /// integer and `x` expressions are accepted.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        let poly = crate::polyring::PolyA::parse(self, s)?;
        if poly.degree().finite().unwrap_or(0) > 0 {
            return Err(Error::Parse(format!("'{s}' is not a field element")));
        }
        Ok(poly.coeff(0))
    }
}

/// Splits q into (p, r) with q = p^r.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut r = 0;
    let mut x = q;
    while x % p == 0 {
        x /= p;
        r += 1;
    }
    (x == 1 && is_prime(p)).then_some((p as u32, r))
}

/// `a * g mod m` for a reduced `a` and a generator `g` of small degree,
/// by Horner's rule in x so each step is a shift plus one reduction.
fn mul_small(a: &[u32], g: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let r = m.len() - 1;
    let mut a_full = a.to_vec();
    a_full.resize(r, 0);
    let mut acc = vec![0u32; r];
    for &d in g.iter().rev() {
        // acc <- acc * x mod m
        let top = acc[r - 1];
        for i in (1..r).rev() {
            acc[i] = acc[i - 1];
        }
        acc[0] = 0;
        if top != 0 {
            for i in 0..r {
                acc[i] = (acc[i] + (p - top) * m[i] % p) % p;
            }
        }
        if d != 0 {
            for i in 0..r {
                acc[i] = (acc[i] + d * a_full[i]) % p;
            }
        }
    }
    fp::trim(&mut acc);
    acc
}

fn unpack(mut a: Elem, p: u32, r: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(r as usize);
    for _ in 0..r {
        v.push(a % p);
        a /= p;
    }
    v
}

fn add_digits(mut a: Elem, mut b: Elem, p: u32) -> Elem {
    let mut res = 0;
    let mut pw = 1;
    while a > 0 || b > 0 {
        res += ((a % p + b % p) % p) * pw;
        pw *= p;
        a /= p;
        b /= p;
    }
    res
}

fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    let count = (p as u64).pow(r);
    for c in 0..count {
        let mut f = unpack(c as Elem, p, r);
        f.push(1);
        if fp::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Renders a polynomial over F_p in the variable `x`, highest degree first.
fn fp_string(c: &[u32]) -> String {
    let mut out = String::new();
    for (i, &ci) in c.iter().enumerate().rev() {
        if ci == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        match (i, ci) {
            (0, _) => out.push_str(&ci.to_string()),
            (1, 1) => out.push('x'),
            (1, _) => out.push_str(&format!("{ci}x")),
            (_, 1) => out.push_str(&format!("x^{i}")),
            _ => out.push_str(&format!("{ci}x^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_modulus_x() {
        let f = FieldDesc::new(2, 1, None).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.modulus_string(), "x");
    }

    #[test]
    fn f9_default_modulus_is_smallest_irreducible() {
        let f = FieldDesc::new(3, 2, None).unwrap();
        // Oracle: scan monic quadratics in packed order, test for roots.
        let mut expected = None;
        'outer: for c in 0..9u32 {
            let (c0, c1) = (c % 3, c / 3);
            for x in 0..3 {
                if (x * x + c1 * x + c0) % 3 == 0 {
                    continue 'outer;
                }
            }
            expected = Some(vec![c0, c1, 1]);
            break;
        }
        assert_eq!(f.modulus(), expected.unwrap().as_slice());
        assert_eq!(f.modulus_string(), "x^2+1");
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(
            FieldDesc::new(3, 2, Some(&[0, 1, 1])),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            FieldDesc::new(3, 1, Some(&[1, 0, 1])),
            Err(Error::ModulusDegree { .. })
        ));
        assert!(matches!(
            FieldDesc::new(4, 1, None),
            Err(Error::NonPrimeCharacteristic(4))
        ));
    }

    #[test]
    fn frobenius_fixes_everything() {
        for (p, r) in [(2, 1), (2, 3), (3, 2), (3, 4), (5, 2), (2, 6), (7, 2)] {
            let f = FieldDesc::new(p, r, None).unwrap();
            let q = f.size() as u64;
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a);
            }
        }
    }

    #[test]
    fn quadratic_character_examples() {
        let f3 = FieldDesc::new(3, 1, None).unwrap();
        assert_eq!(f3.quadratic_character(0, 1).unwrap(), -1);
        assert_eq!(f3.quadratic_character(2, 1).unwrap(), 0);
        let f5 = FieldDesc::new(5, 1, None).unwrap();
        assert_eq!(f5.quadratic_character(0, 4).unwrap(), 1);
        let f2 = FieldDesc::new(2, 1, None).unwrap();
        assert_eq!(f2.quadratic_character(0, 1), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn quadratic_character_matches_root_count() {
        for q in [3u64, 5, 7, 9] {
            let f = FieldDesc::from_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let roots = f
                        .elements()
                        .filter(|&x| f.add(f.sub(f.mul(x, x), f.mul(a, x)), b) == 0)
                        .count();
                    let expected = match roots {
                        2 => 1,
                        1 => 0,
                        _ => -1,
                    };
                    assert_eq!(f.quadratic_character(a, b).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        let f3 = FieldDesc::new(3, 1, None).unwrap();
        let ext = f3.extension(2).unwrap();
        let big = ext.field();
        assert_eq!(ext.norm_to_base(1), 1);
        assert_eq!(ext.norm_to_base(0), 0);
        let g = big.exp(1);
        let n = ext.norm_to_base(g);
        assert_eq!(n, 2, "the norm of a generator of F_9^x generates F_3^x");
    }

    #[test]
    fn norm_is_multiplicative_and_lands_in_base() {
        let f9 = FieldDesc::new(3, 2, None).unwrap();
        let ext = f9.extension(2).unwrap();
        let big = ext.field();
        assert_eq!(big.size(), 81);
        for x in big.elements().step_by(7) {
            for y in big.elements().step_by(5) {
                let lhs = ext.norm_to_base(big.mul(x, y));
                let rhs = f9.mul(ext.norm_to_base(x), ext.norm_to_base(y));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f4 = FieldDesc::new(2, 2, None).unwrap();
        let ext = f4.extension(3).unwrap();
        let big = ext.field();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(ext.embed(f4.add(a, b)), big.add(ext.embed(a), ext.embed(b)));
                assert_eq!(ext.embed(f4.mul(a, b)), big.mul(ext.embed(a), ext.embed(b)));
            }
        }
    }

    #[test]
    fn element_text_round_trip() {
        for q in [3u64, 4, 9, 25, 27] {
            let f = FieldDesc::from_order(q).unwrap();
            for a in f.elements() {
                let s = f.format(a);
                assert_eq!(f.parse(&s).unwrap(), a, "{s}");
            }
        }
        let f9 = FieldDesc::from_order(9).unwrap();
        assert_eq!(f9.format(f9.gen()), "x");
        assert_eq!(f9.parse("x+2").unwrap(), 2 + 3);
    }

    #[test]
    fn sqrt_and_trace() {
        let f8 = FieldDesc::from_order(8).unwrap();
        for a in f8.elements() {
            let s = f8.sqrt(a).unwrap();
            assert_eq!(f8.mul(s, s), a);
        }
        let ones = f8.elements().filter(|&a| f8.abs_trace2(a).unwrap() == 1).count();
        assert_eq!(ones, 4);
        let f25 = FieldDesc::from_order(25).unwrap();
        let squares = f25.units().filter(|&a| f25.sqrt(a).is_some()).count();
        assert_eq!(squares, 12);
    }
}
