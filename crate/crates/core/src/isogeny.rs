//! Weil polynomials of rank-2 Drinfeld modules over F_{p^n}, hyperelliptic
//! models of their splitting fields, point counts, Jacobian orders, Hurwitz
//! class numbers mod p and the isomorphism-class counts #Iso(a,b) mod p.
//!
//! The counts in cases 1 to 3 rely on the endomorphism-ring classification of
//! Kuhn, Kulkarni and Pink together with a forthcoming erratum to their
//! Theorem 5.4; the formulas are implemented as stated there.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldDesc};
use crate::polyring::{enumerate_polys, PolyA, PolyAX};

/// Classification case of a Weil polynomial X² − aX + b℘ⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeilCase {
    /// (a, ℘) = 1 and the splitting field is imaginary.
    Ordinary = 1,
    /// n odd, a = 0, imaginary splitting field.
    ZeroTrace = 2,
    /// n even, deg ℘ odd, a = λ℘^{n/2} with X² − λX + b irreducible.
    SupersingularIrreducible = 3,
    /// n even, c(X) = (X − μ℘^{n/2})².
    SupersingularSquare = 4,
}

impl WeilCase {
    pub fn tag(self) -> u8 {
        self as u8
    }
}

/// The Weil polynomial X² − aX + b℘ⁿ with its case.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilClass {
    pub wp: PolyA,
    pub n: u32,
    pub a: PolyA,
    pub b: Elem,
    pub case: WeilCase,
}

impl WeilClass {
    pub fn char_poly(&self) -> PolyAX {
        PolyAX::weil(&self.a, self.b, &self.wp, self.n)
    }
}

/// Shape of the curve attached to a quadratic extension L/K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// c(X) has a root in K (or a double root); there is no quadratic extension.
    Split,
    /// Characteristic 2 with vanishing linear term.
    Inseparable,
    /// Odd q: the curve Y² = D with D squarefree.
    Odd { d: PolyA },
    /// Even q: the curve X² + rX + s = 0, smooth at all finite places and
    /// normalised at infinity.
    Even { r: PolyA, s: PolyA },
}

/// A model of the splitting field of a monic quadratic c(X) over A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticModel {
    pub kind: ModelKind,
    /// Monic f with A[π] = A + f·O_L.
    pub conductor: PolyA,
    /// Genus of the curve; −1 for a constant field extension.
    pub genus: i32,
    /// Splitting symbol of the infinite place: 1 split, 0 ramified, −1 inert.
    pub chi_inf: i8,
}

impl HyperellipticModel {
    pub fn is_imaginary(&self) -> bool {
        !matches!(self.kind, ModelKind::Split) && self.chi_inf != 1
    }

    /// Kronecker symbol χ_L(℘′) for a monic prime ℘′.
    pub fn chi_at(&self, prime: &PolyA) -> Result<i8> {
        match &self.kind {
            ModelKind::Split => Ok(1),
            ModelKind::Inseparable => Ok(0),
            ModelKind::Odd { d } => {
                let red = d.rem(prime)?;
                if red.is_zero() {
                    return Ok(0);
                }
                let big_q = (prime.field().size() as u64).pow(prime.deg().unwrap_or(0) as u32);
                let leg = red.powmod((big_q - 1) / 2, prime)?;
                Ok(if leg.is_one() { 1 } else { -1 })
            }
            ModelKind::Even { r, s } => {
                let rr = r.rem(prime)?;
                if rr.is_zero() {
                    return Ok(0);
                }
                let (g, inv, _) = rr.square().rem(prime)?.xgcd(prime);
                debug_assert!(g.is_one());
                let z = s.mul(&inv).rem(prime)?;
                let f = prime.field();
                let e = f.r() as usize * prime.deg().unwrap_or(0);
                let mut acc = PolyA::zero(f);
                let mut x = z;
                for _ in 0..e {
                    acc = acc.add(&x);
                    x = x.square().rem(prime)?;
                }
                Ok(if acc.is_zero() { 1 } else { -1 })
            }
        }
    }

    /// Number of points on the smooth projective curve over F_{q^j}.
    pub fn curve_point_count(&self, field: &FieldDesc, j: u32) -> Result<u64> {
        match &self.kind {
            ModelKind::Inseparable | ModelKind::Split => return Err(Error::InseparableModel),
            _ => {}
        }
        if self.genus < 0 {
            return Err(Error::NegativeGenus);
        }
        let ext = field.extension(j)?;
        let big = ext.field();
        let g = self.genus as usize;
        let mut affine = 0u64;
        let at_inf;
        match &self.kind {
            ModelKind::Odd { d } => {
                for alpha in big.elements() {
                    let v = d.eval_ext(&ext, alpha);
                    affine += (1 + big.legendre(v)?) as u64;
                }
                let top = ext.embed(d.coeff(2 * g + 2));
                at_inf = if top == 0 {
                    1
                } else if big.is_square(top) {
                    2
                } else {
                    0
                };
            }
            ModelKind::Even { r, s } => {
                for alpha in big.elements() {
                    let rv = r.eval_ext(&ext, alpha);
                    let sv = s.eval_ext(&ext, alpha);
                    affine += if rv == 0 {
                        1
                    } else {
                        let z = big.div(sv, big.mul(rv, rv)).expect("rv is nonzero");
                        if big.abs_trace2(z)? == 0 {
                            2
                        } else {
                            0
                        }
                    };
                }
                let rho = ext.embed(r.coeff(g + 1));
                let sigma = ext.embed(s.coeff(2 * g + 2));
                at_inf = if rho == 0 {
                    1
                } else {
                    let z = big.div(sigma, big.mul(rho, rho)).expect("rho is nonzero");
                    if big.abs_trace2(z)? == 0 {
                        2
                    } else {
                        0
                    }
                };
            }
            _ => unreachable!(),
        }
        Ok(affine + at_inf)
    }

    /// #J_L(F_q) = ψ_L(1).
    pub fn jacobian_order(&self, field: &FieldDesc) -> Result<u64> {
        if self.genus < 0 {
            return if self.genus == -1 {
                Ok(1)
            } else {
                Err(Error::NegativeGenus)
            };
        }
        let g = self.genus as u32;
        if g == 0 {
            return Ok(1);
        }
        let q = field.size() as i64;
        let mut a = Vec::with_capacity(g as usize);
        for j in 1..=g {
            let n = self.curve_point_count(field, j)? as i64;
            a.push(BigInt::from(q.pow(j) + 1 - n));
        }
        let psi1 = zeta_numerator_at_one(&a, q, g)?;
        psi1.to_u64().filter(|&v| v > 0).ok_or(Error::NonIntegralZeta)
    }
}

/// Partitions of i as multiplicity vectors (m_1, ..., m_i).
fn partitions(i: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max_part: usize, m: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(m.clone());
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            m[part - 1] += 1;
            rec(rest - part, part, m, out);
            m[part - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    let mut m = vec![0; i];
    rec(i, i, &mut m, &mut out);
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// r_{i,λ} = (−1)^{i−ℓ(λ)} / Π_j j^{m_j} m_j!, the coefficient of Π p_j^{m_j}
/// in the elementary symmetric polynomial e_i.
pub fn newton_partition_coefficient(m: &[usize]) -> BigRational {
    let i: usize = m.iter().enumerate().map(|(j, &mj)| (j + 1) * mj).sum();
    let len: usize = m.iter().sum();
    let mut den = BigInt::one();
    for (j, &mj) in m.iter().enumerate() {
        den *= BigInt::from(j + 1).pow(mj as u32) * factorial(mj);
    }
    let sign = if (i - len) % 2 == 0 { 1 } else { -1 };
    BigRational::new(BigInt::from(sign), den)
}

/// Elementary symmetric polynomials e_0..e_g from power sums p_1..p_g through
/// the partition expansion.
pub fn elementary_from_power_sums(p: &[BigInt]) -> Vec<BigRational> {
    let g = p.len();
    let mut e = vec![BigRational::one()];
    for i in 1..=g {
        let mut acc = BigRational::zero();
        for m in partitions(i) {
            let mut term = newton_partition_coefficient(&m);
            for (j, &mj) in m.iter().enumerate() {
                term *= BigRational::from_integer(p[j].pow(mj as u32));
            }
            acc += term;
        }
        e.push(acc);
    }
    e
}

/// ψ(1) = Σ_{i=0}^{2g} (−1)^i e_i with e_{2g−i} = q^{g−i} e_i.
fn zeta_numerator_at_one(a: &[BigInt], q: i64, g: u32) -> Result<BigInt> {
    let e = elementary_from_power_sums(a);
    for ei in &e {
        if !ei.is_integer() {
            return Err(Error::NonIntegralZeta);
        }
    }
    let e: Vec<BigInt> = e.into_iter().map(|x| x.to_integer()).collect();
    let g = g as usize;
    let mut total = BigInt::zero();
    for i in 0..=2 * g {
        let ei = if i <= g {
            e[i].clone()
        } else {
            e[2 * g - i].clone() * BigInt::from(q).pow((i - g) as u32)
        };
        if i % 2 == 0 {
            total += ei;
        } else {
            total -= ei;
        }
    }
    if !total.is_positive() {
        return Err(Error::NonIntegralZeta);
    }
    Ok(total)
}

fn coeffs_of_c(c: &PolyAX) -> Result<(PolyA, PolyA)> {
    if c.deg() != Some(2) || !c.coeff(2).is_one() {
        return Err(Error::NotDegreeTwo);
    }
    Ok((c.coeff(1), c.coeff(0)))
}

/// Builds the model of the splitting field of c(X) = X² + c_1X + c_0 and
/// reports whether it is imaginary.
pub fn is_imaginary(c: &PolyAX) -> Result<(bool, HyperellipticModel)> {
    let model = hyperelliptic_model(c)?;
    Ok((model.is_imaginary(), model))
}

pub fn hyperelliptic_model(c: &PolyAX) -> Result<HyperellipticModel> {
    let (c1, c0) = coeffs_of_c(c)?;
    let field = c1.field().clone();
    if field.p() == 2 {
        even_model(&field, c1, c0)
    } else {
        odd_model(&field, c)
    }
}

fn split_model(field: &FieldDesc) -> HyperellipticModel {
    HyperellipticModel {
        kind: ModelKind::Split,
        conductor: PolyA::one(field),
        genus: -1,
        chi_inf: 1,
    }
}

fn odd_model(field: &FieldDesc, c: &PolyAX) -> Result<HyperellipticModel> {
    let disc = c.discriminant()?;
    if disc.is_zero() {
        return Ok(split_model(field));
    }
    let (d, f) = disc.squarefree_part()?;
    let deg_d = d.deg().expect("nonzero") as i32;
    let lc_square = field.is_square(d.lc());
    if deg_d == 0 && lc_square {
        return Ok(split_model(field));
    }
    let genus = if deg_d == 0 { -1 } else { (deg_d + 1) / 2 - 1 };
    let chi_inf = if deg_d % 2 == 1 {
        0
    } else if lc_square {
        1
    } else {
        -1
    };
    Ok(HyperellipticModel {
        kind: ModelKind::Odd { d },
        conductor: f,
        genus,
        chi_inf,
    })
}

/// Monic divisors of a nonzero polynomial.
fn monic_divisors(s: &PolyA) -> Result<Vec<PolyA>> {
    let mut divs = vec![PolyA::one(s.field())];
    for (pr, e) in s.factor_monic()? {
        let mut next = Vec::new();
        for d in &divs {
            let mut x = d.clone();
            for _ in 0..=e {
                next.push(x.clone());
                x = x.mul(&pr);
            }
        }
        divs = next;
    }
    Ok(divs)
}

fn even_has_root(field: &FieldDesc, r: &PolyA, s: &PolyA) -> Result<bool> {
    if s.is_zero() {
        return Ok(true);
    }
    for d in monic_divisors(s)? {
        for u in field.units() {
            let x = d.scale(u);
            if x.square().add(&r.mul(&x)).add(s).is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn genus_from(r: &PolyA, s: &PolyA) -> i32 {
    let dr = r.deg().map(|d| 2 * d as i32).unwrap_or(i32::MIN);
    let ds = s.deg().map(|d| d as i32).unwrap_or(i32::MIN);
    let m = dr.max(ds);
    // 2g+1 <= m <= 2g+2.
    (m + 1) / 2 - 1
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn even_model(field: &FieldDesc, r0: PolyA, s0: PolyA) -> Result<HyperellipticModel> {
    if r0.is_zero() {
        // L = K(√s); write s = e² + T·o², then O_L = A[√T] and f = o.
        let q = field.size() as u64;
        let half = |coeffs: Vec<Elem>| -> PolyA {
            let c = coeffs.into_iter().map(|x| field.pow(x, q / 2)).collect();
            PolyA::from_coeffs(field, c)
        };
        let odd: Vec<Elem> = s0.coeffs().iter().skip(1).step_by(2).copied().collect();
        let o = half(odd);
        if o.is_zero() {
            return Ok(split_model(field));
        }
        return Ok(HyperellipticModel {
            kind: ModelKind::Inseparable,
            conductor: o.make_monic(),
            genus: -1,
            chi_inf: 0,
        });
    }
    if even_has_root(field, &r0, &s0)? {
        return Ok(split_model(field));
    }
    let q = field.size() as u64;
    let mut r = r0;
    let mut s = s0;
    let mut conductor = PolyA::one(field);
    let mut genus = genus_from(&r, &s);
    loop {
        let ds = s.derivative();
        let dr = r.derivative();
        let fk = r.gcd(&ds.square().add(&s.mul(&dr.square())));
        if fk.deg().unwrap_or(0) == 0 {
            break;
        }
        let primes = fk.prime_divisors()?;
        let fhat = primes.iter().fold(PolyA::one(field), |acc, x| acc.mul(x));
        // x -> x^{q^M/2} is the square root on every residue field A/(℘′)
        // exactly when deg ℘′ divides M, so M is the lcm of the prime degrees.
        let m = primes
            .iter()
            .map(|x| x.deg().unwrap() as u64)
            .fold(1, |acc, d| acc / gcd_u64(acc, d) * d);
        let exp = q
            .checked_pow(m as u32)
            .ok_or_else(|| Error::RangeViolation("square-root exponent overflow".into()))?
            / 2;
        let l = s.powmod(exp, &r)?;
        let r_next = r.exact_div(&fhat)?;
        let s_next = s.add(&r.mul(&l)).add(&l.square()).exact_div(&fhat.square())?;
        let g_next = genus_from(&r_next, &s_next);
        assert!(g_next < genus, "genus must drop in the reduction loop");
        r = r_next;
        s = s_next;
        genus = g_next;
        conductor = conductor.mul(&fhat);
    }
    // Remove an even leading term of s dominating r² by X -> X + u T^{deg s/2};
    // this keeps the model smooth at every finite place.
    loop {
        let dsv = match s.deg() {
            Some(d) => d,
            None => break,
        };
        let dr = r.deg().unwrap_or(0);
        if dsv % 2 == 1 || dsv <= 2 * dr {
            break;
        }
        let u = field.sqrt(s.lc()).expect("char 2 elements are squares");
        let shift = PolyA::monomial(field, u, dsv / 2);
        s = s.add(&r.mul(&shift)).add(&shift.square());
    }
    let genus = genus_from(&r, &s);
    let rho = r.coeff((genus + 1) as usize);
    let sigma = s.coeff((2 * genus + 2) as usize);
    let chi_inf = if rho == 0 {
        0
    } else {
        let z = field.div(sigma, field.mul(rho, rho)).expect("rho is nonzero");
        if field.abs_trace2(z)? == 0 {
            1
        } else {
            -1
        }
    };
    Ok(HyperellipticModel {
        kind: ModelKind::Even { r, s },
        conductor,
        genus,
        chi_inf,
    })
}

/// H(A[π]) mod p for the root π of c(X).
pub fn hurwitz_mod_p(c: &PolyAX) -> Result<Elem> {
    let model = hyperelliptic_model(c)?;
    hurwitz_from_model(c.field(), &model)
}

/// H(O_L) mod p from a model.
pub fn maximal_order_class_number_mod_p(field: &FieldDesc, model: &HyperellipticModel) -> Result<Elem> {
    if !model.is_imaginary() {
        return Err(Error::NotImaginary);
    }
    let p = field.p() as i64;
    Ok(match model.kind {
        ModelKind::Inseparable => 1,
        _ if model.genus == -1 => 1,
        _ => {
            let j = model.jacobian_order(field)? as i64;
            (((1 - model.chi_inf as i64) * j).rem_euclid(p)) as Elem
        }
    })
}

fn hurwitz_from_model(field: &FieldDesc, model: &HyperellipticModel) -> Result<Elem> {
    let h = maximal_order_class_number_mod_p(field, model)?;
    let p = field.p() as i64;
    let mut acc = h as i64;
    if !model.conductor.is_one() {
        for pr in model.conductor.prime_divisors()? {
            acc = acc * (1 - model.chi_at(&pr)? as i64) % p;
        }
    }
    Ok(acc.rem_euclid(p) as Elem)
}

fn check_prime(wp: &PolyA) -> Result<()> {
    if !wp.is_monic() {
        return Err(Error::NotMonic(wp.to_string()));
    }
    if !wp.is_irreducible() {
        return Err(Error::NotIrreducible(wp.to_string()));
    }
    Ok(())
}

/// Classifies X² − aX + b℘ⁿ; `None` when it is not a Weil polynomial.
pub fn classify(a: &PolyA, b: Elem, wp: &PolyA, n: u32) -> Result<Option<WeilCase>> {
    let field = wp.field();
    let d = wp.deg().unwrap_or(0);
    let nd = n as usize * d;
    if b == 0 || a.deg().map(|x| 2 * x > nd).unwrap_or(false) {
        return Ok(None);
    }
    if n % 2 == 0 {
        let half = wp.pow((n / 2) as u64);
        let (quo, rem) = a.divrem(&half)?;
        if rem.is_zero() && quo.is_constant() {
            let lambda = quo.coeff(0);
            let square = if field.p() == 2 {
                lambda == 0
            } else {
                field.quadratic_character(lambda, b)? == 0
            };
            if square {
                return Ok(Some(WeilCase::SupersingularSquare));
            }
            let irreducible = if field.p() == 2 {
                // X² + λX + b with λ ≠ 0 is irreducible iff Tr(b/λ²) = 1.
                field.abs_trace2(field.div(b, field.mul(lambda, lambda)).unwrap())? == 1
            } else {
                field.quadratic_character(lambda, b)? == -1
            };
            if irreducible && d % 2 == 1 {
                return Ok(Some(WeilCase::SupersingularIrreducible));
            }
            return Ok(None);
        }
    }
    let c = PolyAX::weil(a, b, wp, n);
    if a.gcd(wp).is_one() {
        let (imag, _) = is_imaginary(&c)?;
        return Ok(imag.then_some(WeilCase::Ordinary));
    }
    if n % 2 == 1 && a.is_zero() {
        let (imag, _) = is_imaginary(&c)?;
        return Ok(imag.then_some(WeilCase::ZeroTrace));
    }
    Ok(None)
}

/// All Weil polynomials over F_{℘ⁿ}, ordered by case, then deg a, then a,
/// then b.
pub fn enumerate_weil(wp: &PolyA, n: u32) -> Result<Vec<WeilClass>> {
    check_prime(wp)?;
    if n == 0 {
        return Err(Error::RangeViolation("n must be positive".into()));
    }
    let field = wp.field().clone();
    let nd = n as usize * wp.deg().unwrap();
    let a_list: Vec<PolyA> = enumerate_polys(&field, nd / 2, false).collect();
    let per_a: Vec<Result<Vec<WeilClass>>> = a_list
        .par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in field.units() {
                if let Some(case) = classify(a, b, wp, n)? {
                    out.push(WeilClass {
                        wp: wp.clone(),
                        n,
                        a: a.clone(),
                        b,
                        case,
                    });
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for v in per_a {
        all.extend(v?);
    }
    all.sort_by(|x, y| {
        x.case
            .cmp(&y.case)
            .then_with(|| x.a.cmp(&y.a))
            .then_with(|| x.b.cmp(&y.b))
    });
    Ok(all)
}

/// A Weil class with #Iso reduced mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCount {
    pub class: WeilClass,
    pub count_mod_p: Elem,
}

type IsoKey = (u32, Vec<u32>, Vec<Elem>, u32, Vec<Elem>, Elem);

fn iso_cache() -> &'static RwLock<HashMap<IsoKey, Elem>> {
    static CACHE: OnceLock<RwLock<HashMap<IsoKey, Elem>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// #Iso_{℘ⁿ}(a, b) mod p.
pub fn iso_count(w: &WeilClass) -> Result<IsoCount> {
    let field = w.wp.field();
    let key: IsoKey = (
        field.p(),
        field.modulus().to_vec(),
        w.wp.coeffs().to_vec(),
        w.n,
        w.a.coeffs().to_vec(),
        w.b,
    );
    if let Some(&v) = iso_cache().read().get(&key) {
        return Ok(IsoCount {
            class: w.clone(),
            count_mod_p: v,
        });
    }
    let p = field.p() as u64;
    let v = match w.case {
        WeilCase::Ordinary => hurwitz_mod_p(&w.char_poly())?,
        WeilCase::ZeroTrace => {
            if field.p() == 2 {
                1
            } else {
                // K(√(−b℘)) with its maximal order.
                let minus_b = field.neg(w.b);
                let c = PolyAX::weil(&PolyA::zero(field), field.neg(minus_b), &w.wp, 1);
                let model = hyperelliptic_model(&c)?;
                maximal_order_class_number_mod_p(field, &model)?
            }
        }
        WeilCase::SupersingularIrreducible => (2 % p) as Elem,
        WeilCase::SupersingularSquare => {
            let d = w.wp.deg().unwrap() as u32;
            // (q^d − 1)/(q − 1) = 1 + q + ... + q^{d−1}.
            let q = field.size() as u64 % p;
            let mut s = 0u64;
            let mut qi = 1u64;
            for _ in 0..d {
                s = (s + qi) % p;
                qi = qi * q % p;
            }
            s as Elem
        }
    };
    iso_cache().write().insert(key, v);
    Ok(IsoCount {
        class: w.clone(),
        count_mod_p: v,
    })
}

/// The complete list of (Weil class, #Iso mod p) for ℘ⁿ.
#[derive(Clone, Debug)]
pub struct Census {
    pub field: FieldDesc,
    pub wp: PolyA,
    pub n: u32,
    pub entries: Vec<IsoCount>,
}

impl Census {
    /// Entries with nonzero count.
    pub fn nonzero(&self) -> impl Iterator<Item = &IsoCount> {
        self.entries.iter().filter(|e| e.count_mod_p != 0)
    }

    /// #Iso(a, b) mod p, zero when (a, b) is not a Weil pair.
    pub fn count(&self, a: &PolyA, b: Elem) -> Elem {
        self.entries
            .iter()
            .find(|e| e.class.a == *a && e.class.b == b)
            .map(|e| e.count_mod_p)
            .unwrap_or(0)
    }

    /// CSV rows `a,b,case,count_mod_p` in the polynomial text format.
    pub fn to_csv_rows(&self) -> Vec<[String; 4]> {
        self.entries
            .iter()
            .map(|e| {
                [
                    e.class.a.to_string(),
                    self.field.format(e.class.b),
                    e.class.case.tag().to_string(),
                    e.count_mod_p.to_string(),
                ]
            })
            .collect()
    }
}

type CensusKey = (u32, Vec<u32>, Vec<Elem>, u32);

fn census_cache() -> &'static RwLock<HashMap<CensusKey, Arc<Census>>> {
    static CACHE: OnceLock<RwLock<HashMap<CensusKey, Arc<Census>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Census of all Weil classes over F_{℘ⁿ} with their counts; memoized.
pub fn census(wp: &PolyA, n: u32) -> Result<Arc<Census>> {
    let field = wp.field().clone();
    let key: CensusKey = (field.p(), field.modulus().to_vec(), wp.coeffs().to_vec(), n);
    if let Some(c) = census_cache().read().get(&key) {
        return Ok(c.clone());
    }
    let classes = enumerate_weil(wp, n)?;
    let entries: Vec<Result<IsoCount>> = classes.par_iter().map(iso_count).collect();
    let entries = entries.into_iter().collect::<Result<Vec<_>>>()?;
    let c = Arc::new(Census {
        field,
        wp: wp.clone(),
        n,
        entries,
    });
    census_cache().write().insert(key, c.clone());
    Ok(c)
}
