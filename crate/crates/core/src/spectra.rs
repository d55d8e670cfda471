//! Spectral data of T_℘ⁿ recovered from trace sequences: characteristic
//! polynomials, repeated-eigenvalue detection, odd-multiplicity eigenvalues
//! in even characteristic, Newton-polygon slopes, and the scans used to test
//! the Ramanujan-type statements.

use std::fmt;

use num_rational::Ratio;

use crate::combinat::{char2_index_set, dim_cusp, normalize_type, type_admissible};
use crate::error::{Error, Result};
use crate::gf::{Elem, Extension, FieldDesc};
use crate::isogeny::census;
use crate::polyring::{PolyA, PolyAX, RingElem, UPoly};
use crate::traces::{trace_auto, TraceQuery, DEFAULT_CAP};

/// An element num/den of K = F_q(T) with gcd(num, den) = 1 and den monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: PolyA,
    den: PolyA,
}

impl RationalFn {
    pub fn new(num: PolyA, den: PolyA) -> Result<RationalFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = den.field().clone();
        if num.is_zero() {
            return Ok(RationalFn::zero(&f));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.exact_div(&g)?, den.exact_div(&g)?);
        let c = f.inv(d.lc()).expect("nonzero leading coefficient");
        n = n.scale(c);
        d = d.scale(c);
        Ok(RationalFn { num: n, den: d })
    }

    pub fn from_poly(a: PolyA) -> RationalFn {
        let f = a.field().clone();
        RationalFn {
            num: a,
            den: PolyA::one(&f),
        }
    }

    pub fn zero(f: &FieldDesc) -> RationalFn {
        RationalFn::from_poly(PolyA::zero(f))
    }

    pub fn one(f: &FieldDesc) -> RationalFn {
        RationalFn::from_poly(PolyA::one(f))
    }

    pub fn num(&self) -> &PolyA {
        &self.num
    }

    pub fn den(&self) -> &PolyA {
        &self.den
    }

    pub fn field(&self) -> &FieldDesc {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The element as a polynomial when the denominator is 1.
    pub fn to_poly(&self) -> Option<PolyA> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &RationalFn) -> RationalFn {
        if self.den == o.den {
            return RationalFn::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        RationalFn::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RationalFn) -> RationalFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        if self.is_zero() || o.is_zero() {
            return RationalFn::zero(self.field());
        }
        RationalFn::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<RationalFn> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RationalFn) -> Result<RationalFn> {
        Ok(self.mul(&o.inv()?))
    }

    /// v_∞(num/den) = deg den − deg num; `None` for zero.
    pub fn valuation(&self, v: &Valuation) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        match v {
            Valuation::Infinity => {
                Some(self.den.deg().unwrap() as i64 - self.num.deg().unwrap() as i64)
            }
            Valuation::Prime(w) => {
                Some(self.num.valuation(w)? as i64 - self.den.valuation(w)? as i64)
            }
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl RingElem for RationalFn {
    fn zero_like(&self) -> Self {
        RationalFn::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RationalFn::one(self.field())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
}

/// Polynomials in X over K.
pub type PolyKX = UPoly<RationalFn>;

/// A PolyAX viewed over K.
pub fn to_kx(f: &PolyAX) -> PolyKX {
    let fd = f.field().clone();
    UPoly::new(
        RationalFn::zero(&fd),
        f.coeffs().iter().cloned().map(RationalFn::from_poly).collect(),
    )
}

/// Clears a polynomial over K into A[X], failing when a coefficient is not
/// integral.
pub fn to_ax(f: &PolyKX) -> Result<PolyAX> {
    let fd = f.zero_elem().field().clone();
    let mut c = Vec::with_capacity(f.coeffs().len());
    for x in f.coeffs() {
        c.push(
            x.to_poly()
                .ok_or_else(|| Error::NonIntegralCharpoly(x.to_string()))?,
        );
    }
    Ok(UPoly::new(PolyA::zero(&fd), c))
}

/// Monic X^d − e_1X^{d−1} + … ± e_d from the power sums p_1..p_d by Newton's
/// identities i·e_i = Σ_{j<=i} (−1)^{j−1} e_{i−j} p_j. Needs d < p so that
/// 1..d are invertible.
pub fn charpoly_from_traces(field: &FieldDesc, traces: &[PolyA], d: usize) -> Result<PolyAX> {
    let p = field.p();
    if d as u64 >= p as u64 {
        return Err(Error::DimensionAtLeastP { d, p });
    }
    if traces.len() < d {
        return Err(Error::InsufficientTerms {
            needed: d,
            got: traces.len(),
        });
    }
    let mut e = vec![PolyA::one(field)];
    for i in 1..=d {
        let mut s = PolyA::zero(field);
        for j in 1..=i {
            let term = e[i - j].mul(&traces[j - 1]);
            if j % 2 == 1 {
                s.add_assign(&term);
            } else {
                s = s.sub(&term);
            }
        }
        let inv_i = field.inv(field.from_int(i as i64)).expect("i < p");
        e.push(s.scale(inv_i));
    }
    let mut c = vec![PolyA::zero(field); d + 1];
    for (i, ei) in e.into_iter().enumerate() {
        c[d - i] = if i % 2 == 1 { ei.neg() } else { ei };
    }
    Ok(UPoly::new(PolyA::zero(field), c))
}

/// Field operations used by the generic linear-algebra helpers below.
trait FieldOps {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct KOps(FieldDesc);

impl FieldOps for KOps {
    type E = RationalFn;
    fn zero(&self) -> RationalFn {
        RationalFn::zero(&self.0)
    }
    fn one(&self) -> RationalFn {
        RationalFn::one(&self.0)
    }
    fn is_zero(&self, a: &RationalFn) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        a.add(b)
    }
    fn sub(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        a.sub(b)
    }
    fn mul(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        a.mul(b)
    }
    fn inv(&self, a: &RationalFn) -> RationalFn {
        a.inv().expect("nonzero pivot")
    }
}

struct FqOps<'a>(&'a FieldDesc);

impl FieldOps for FqOps<'_> {
    type E = Elem;
    fn zero(&self) -> Elem {
        0
    }
    fn one(&self) -> Elem {
        1
    }
    fn is_zero(&self, a: &Elem) -> bool {
        *a == 0
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.0.add(*a, *b)
    }
    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.0.sub(*a, *b)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.0.mul(*a, *b)
    }
    fn inv(&self, a: &Elem) -> Elem {
        self.0.inv(*a).expect("nonzero pivot")
    }
}

/// Connection polynomial C = 1 + c_1x + … + c_Lx^L of the shortest linear
/// recurrence Σ c_i s_{n−i} = 0 for the whole input.
fn bm_generic<F: FieldOps>(ops: &F, s: &[F::E]) -> Vec<F::E> {
    let mut c = vec![ops.one()];
    let mut b = vec![ops.one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = ops.one();
    for n in 0..s.len() {
        let mut disc = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            disc = ops.add(&disc, &ops.mul(&c[i], &s[n - i]));
        }
        if ops.is_zero(&disc) {
            m += 1;
            continue;
        }
        let coef = ops.mul(&disc, &ops.inv(&bd));
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, ops.zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] = ops.sub(&next[i + m], &ops.mul(&coef, bi));
        }
        if 2 * l <= n {
            b = c;
            l = n + 1 - l;
            bd = disc;
            m = 1;
        } else {
            m += 1;
        }
        c = next;
    }
    c.resize(l + 1, ops.zero());
    c
}

/// Determinant by Gaussian elimination.
fn det_generic<F: FieldOps>(ops: &F, mut a: Vec<Vec<F::E>>) -> F::E {
    let n = a.len();
    let mut det = ops.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !ops.is_zero(&a[r][col])) else {
            return ops.zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = ops.sub(&ops.zero(), &det);
        }
        det = ops.mul(&det, &a[col][col]);
        let inv = ops.inv(&a[col][col]);
        for r in col + 1..n {
            if ops.is_zero(&a[r][col]) {
                continue;
            }
            let f = ops.mul(&a[r][col], &inv);
            for c in col..n {
                let t = ops.mul(&f, &a[col][c]);
                a[r][c] = ops.sub(&a[r][c], &t);
            }
        }
    }
    det
}

/// Minimal polynomial of the sequence s over K (the reversed connection
/// polynomial). Its roots are the eigenvalues whose multiplicity is nonzero
/// mod p when s is a power-sum sequence p_1, p_2, ….
pub fn berlekamp_massey(seq: &[RationalFn], d: usize) -> Result<PolyKX> {
    if seq.len() < 2 * d {
        return Err(Error::InsufficientTerms {
            needed: 2 * d,
            got: seq.len(),
        });
    }
    let Some(first) = seq.first() else {
        return Err(Error::InsufficientTerms { needed: 1, got: 0 });
    };
    let field = first.field().clone();
    let c = bm_generic(&KOps(field.clone()), seq);
    let rev: Vec<RationalFn> = c.into_iter().rev().collect();
    Ok(UPoly::new(RationalFn::zero(&field), rev))
}

/// [`berlekamp_massey`] on a sequence in A, cleared into A[X].
pub fn berlekamp_massey_a(seq: &[PolyA], d: usize) -> Result<PolyAX> {
    let k: Vec<RationalFn> = seq.iter().cloned().map(RationalFn::from_poly).collect();
    to_ax(&berlekamp_massey(&k, d)?)
}

/// Hankel matrix M[i][j] = s_{i+j} with s_0 = dim mod p and s_n = Tr(T^n).
pub fn hankel_matrix(field: &FieldDesc, dim: u64, traces: &[PolyA], d: usize) -> Result<Vec<Vec<PolyA>>> {
    let need = (2 * d).saturating_sub(2);
    if traces.len() < need {
        return Err(Error::InsufficientTerms {
            needed: need,
            got: traces.len(),
        });
    }
    let s0 = PolyA::constant(field, field.from_int((dim % field.p() as u64) as i64));
    let s = |n: usize| if n == 0 { s0.clone() } else { traces[n - 1].clone() };
    Ok((0..d).map(|i| (0..d).map(|j| s(i + j)).collect()).collect())
}

/// Exact determinant over A by fraction-free (Bareiss) elimination.
pub fn det_bareiss(mut a: Vec<Vec<PolyA>>, field: &FieldDesc) -> PolyA {
    let n = a.len();
    if n == 0 {
        return PolyA::one(field);
    }
    let mut sign_neg = false;
    let mut prev = PolyA::one(field);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_neg = !sign_neg;
                }
                None => return PolyA::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_neg {
        d.neg()
    } else {
        d
    }
}

/// Which evidence settled a repeated-eigenvalue verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HankelEvidence {
    /// det M computed exactly over A.
    Exact,
    /// det M(t) ≠ 0 at a point t of an extension of F_q, so det M ≠ 0.
    NonzeroAtPoint,
    /// An explicit recurrence of order < d, verified exactly in A, gives a
    /// nonzero kernel vector of M.
    KernelVector,
}

/// Outcome of [`repeated_eig_detect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelVerdict {
    /// det M when it was computed or certified to vanish.
    pub det: Option<PolyA>,
    pub repeated: bool,
    pub evidence: HankelEvidence,
}

/// Largest d for which det M is always computed exactly.
pub const EXACT_HANKEL_LIMIT: usize = 10;

/// Decides whether the operator with the given trace sequence has a repeated
/// eigenvalue, from the d×d Hankel matrix of power sums.
pub fn repeated_eig_detect(field: &FieldDesc, dim: u64, traces: &[PolyA]) -> Result<HankelVerdict> {
    let d = dim as usize;
    let m = hankel_matrix(field, dim, traces, d)?;
    if d <= EXACT_HANKEL_LIMIT {
        let det = det_bareiss(m, field);
        return Ok(HankelVerdict {
            repeated: det.is_zero(),
            det: Some(det),
            evidence: HankelEvidence::Exact,
        });
    }
    let seq: Vec<PolyA> = (0..2 * d - 1).map(|n| if n == 0 { m[0][0].clone() } else { traces[n - 1].clone() }).collect();
    let sparse: Vec<Vec<(usize, Elem)>> = seq.iter().map(sparse_terms).collect();
    // A nonzero value at any point proves det M ≠ 0.
    let ext = field.extension(extension_degree(field.size() as u64, 64))?;
    let big = ext.field();
    let points: Vec<Elem> = big.elements().filter(|&t| t != 0).take(8).collect();
    for &t in &points {
        let vals = eval_sequence(&ext, &sparse, t);
        let a: Vec<Vec<Elem>> = (0..d).map(|i| (0..d).map(|j| vals[i + j]).collect()).collect();
        if det_generic(&FqOps(big), a) != 0 {
            return Ok(HankelVerdict {
                det: None,
                repeated: false,
                evidence: HankelEvidence::NonzeroAtPoint,
            });
        }
    }
    if let Some(rec) = recurrence_certificate(field, &seq, &sparse)? {
        if rec.len() - 1 < d {
            return Ok(HankelVerdict {
                det: Some(PolyA::zero(field)),
                repeated: true,
                evidence: HankelEvidence::KernelVector,
            });
        }
    }
    let det = det_bareiss(m, field);
    Ok(HankelVerdict {
        repeated: det.is_zero(),
        det: Some(det),
        evidence: HankelEvidence::Exact,
    })
}

fn sparse_terms(a: &PolyA) -> Vec<(usize, Elem)> {
    a.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect()
}

fn eval_sequence(ext: &Extension, sparse: &[Vec<(usize, Elem)>], t: Elem) -> Vec<Elem> {
    let big = ext.field();
    sparse
        .iter()
        .map(|terms| {
            terms.iter().fold(0, |acc, &(e, c)| {
                big.add(acc, big.mul(ext.embed(c), big.pow(t, e as u64)))
            })
        })
        .collect()
}

/// Smallest m with q^m >= need, kept within the table-size limit.
fn extension_degree(q: u64, need: u64) -> u32 {
    let mut m = 1u32;
    let mut size = q;
    while size < need && size.saturating_mul(q) <= 1 << 22 {
        size *= q;
        m += 1;
    }
    m
}

/// Finds the monic minimal recurrence of `seq` over K by evaluating at
/// points of an extension field and interpolating, then checks it exactly
/// in A. Returns [c_0, …, c_L] with c_L = 1, or `None` when no candidate
/// passes the exact check.
fn recurrence_certificate(
    field: &FieldDesc,
    seq: &[PolyA],
    sparse: &[Vec<(usize, Elem)>],
) -> Result<Option<Vec<PolyA>>> {
    let q = field.size() as u64;
    // Eigenvalue degrees are at least the growth rate of the power sums.
    let delta = seq
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(n, s)| s.deg().map(|dg| dg.div_ceil(n)))
        .max()
        .unwrap_or(0);
    let half = seq.len() / 2 + 1;
    let mut bound = (half * delta.max(1)) as u64;
    for _attempt in 0..3 {
        let m = extension_degree(q, 4 * (bound + 1) + 16);
        let ext = field.extension(m)?;
        let big = ext.field();
        if (big.size() as u64) < bound + 2 {
            return Ok(None);
        }
        // Collect (t, recurrence at t) for points with the generic order.
        let mut samples: Vec<(Elem, Vec<Elem>)> = Vec::new();
        let mut order = 0usize;
        for t in big.elements() {
            let vals = eval_sequence(&ext, sparse, t);
            let c = bm_generic(&FqOps(big), &vals);
            let l = c.len() - 1;
            if l > order {
                order = l;
                samples.clear();
            }
            if l == order {
                samples.push((t, c));
            }
            if samples.len() as u64 > bound {
                break;
            }
        }
        if (samples.len() as u64) <= bound {
            bound *= 2;
            continue;
        }
        // Monic reversed coefficients r_i = c_{L−i}/c_0 … with c_0 = 1 the
        // minimal polynomial is Σ_i c_{L−i} X^i; interpolate each c_j.
        let xs: Vec<Elem> = samples.iter().map(|(t, _)| *t).collect();
        let mut coeffs: Vec<PolyA> = Vec::with_capacity(order + 1);
        let mut ok = true;
        for j in 0..=order {
            let ys: Vec<Elem> = samples.iter().map(|(_, c)| c[j]).collect();
            match interpolate_restrict(&ext, field, &xs, &ys) {
                Some(p) => coeffs.push(p),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            // Recurrence Σ_j c_j s_{n−j} = 0 for n >= L.
            if verify_recurrence(field, &coeffs, seq, sparse) {
                let rec: Vec<PolyA> = coeffs.into_iter().rev().collect();
                return Ok(Some(rec));
            }
        }
        bound *= 2;
    }
    Ok(None)
}

/// Interpolates values at the points `xs` by Newton divided differences and
/// restricts the coefficients to F_q; `None` if some coefficient is outside.
fn interpolate_restrict(ext: &Extension, field: &FieldDesc, xs: &[Elem], ys: &[Elem]) -> Option<PolyA> {
    let big = ext.field();
    let n = xs.len();
    let mut dd = ys.to_vec();
    for lvl in 1..n {
        for i in (lvl..n).rev() {
            let num = big.sub(dd[i], dd[i - 1]);
            let den = big.sub(xs[i], xs[i - lvl]);
            dd[i] = big.div(num, den).expect("distinct points");
        }
    }
    // Horner on the Newton form.
    let mut poly: Vec<Elem> = vec![dd[n - 1]];
    for i in (0..n - 1).rev() {
        let mut next = vec![0; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k + 1] = big.add(next[k + 1], c);
            next[k] = big.sub(next[k], big.mul(c, xs[i]));
        }
        next[0] = big.add(next[0], dd[i]);
        poly = next;
    }
    let mut out = Vec::with_capacity(poly.len());
    for c in poly {
        out.push(ext.restrict(c)?);
    }
    Some(PolyA::from_coeffs(field, out))
}

fn verify_recurrence(field: &FieldDesc, c: &[PolyA], seq: &[PolyA], sparse: &[Vec<(usize, Elem)>]) -> bool {
    let l = c.len() - 1;
    for n in l..seq.len() {
        let mut acc = PolyA::zero(field);
        for (j, cj) in c.iter().enumerate() {
            for &(e, a) in &sparse[n - j] {
                acc.add_scaled_shifted(a, e, cj);
            }
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// Discriminant Π_{i<j}(α_i − α_j)² of a monic f as (−1)^{d(d−1)/2}·Res(f, f′).
pub fn discriminant(f: &PolyAX) -> PolyA {
    let field = f.field().clone();
    let d = f.deg().unwrap_or(0);
    if d <= 1 {
        return PolyA::one(&field);
    }
    let fp: Vec<PolyA> = (1..=d)
        .map(|i| f.coeff(i).scale(field.from_int(i as i64)))
        .collect();
    let fp = UPoly::new(PolyA::zero(&field), fp);
    let res = resultant(f, &fp);
    if (d * (d - 1) / 2) % 2 == 1 {
        res.neg()
    } else {
        res
    }
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &PolyAX, g: &PolyAX) -> PolyA {
    let field = f.field().clone();
    let (m, n) = match (f.deg(), g.deg()) {
        (Some(m), Some(n)) => (m, n),
        _ => return PolyA::zero(&field),
    };
    if m + n == 0 {
        return PolyA::one(&field);
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![PolyA::zero(&field); size];
        for k in 0..=m {
            row[i + k] = f.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![PolyA::zero(&field); size];
        for k in 0..=n {
            row[i + k] = g.coeff(n - k);
        }
        rows.push(row);
    }
    det_bareiss(rows, &field)
}

/// Eigenvalues of T_℘ⁿ on S_{k,l} with odd multiplicity for even q:
/// {℘^{nj} : j ∈ P(k,l,q)}.
pub fn char2_odd_mult_eigs(wp: &PolyA, n: u32, k: u64, l: i64) -> Result<Vec<PolyA>> {
    let field = wp.field();
    if field.p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    let q = field.size() as u64;
    if !type_admissible(k as i64, l, q) || dim_cusp(k, l, q) == 0 {
        return Ok(Vec::new());
    }
    let wpn = wp.pow(n as u64);
    Ok(char2_index_set(k, l, q)?
        .into_iter()
        .map(|j| wpn.pow(j))
        .collect())
}

/// A discrete valuation on K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Infinity,
    Prime(PolyA),
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinity => write!(f, "inf"),
            Valuation::Prime(w) => write!(f, "{w}"),
        }
    }
}

/// One edge of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Ratio<i64>,
    pub length: u64,
}

/// Lower convex hull of the points (i, v(c_i)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub valuation: Valuation,
    pub vertices: Vec<(u64, i64)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Valuations w(λ) of the roots with multiplicities: the negated edge
    /// slopes, ascending.
    pub fn root_slopes(&self) -> Vec<(Ratio<i64>, u64)> {
        let mut v: Vec<(Ratio<i64>, u64)> = self.segments.iter().map(|s| (-s.slope, s.length)).collect();
        v.sort();
        v
    }

    pub fn degree(&self) -> u64 {
        self.segments.iter().map(|s| s.length).sum()
    }
}

pub fn newton_polygon(coeffs: &[RationalFn], v: &Valuation) -> Result<NewtonPolygon> {
    let pts: Vec<(u64, i64)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.valuation(v).map(|val| (i as u64, val)))
        .collect();
    if pts.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut hull: Vec<(u64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // Drop the middle point when it is on or above the chord.
            let cross = (x2 as i64 - x1 as i64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as i64 - x1 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment {
            slope: Ratio::new(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64),
            length: w[1].0 - w[0].0,
        })
        .collect();
    Ok(NewtonPolygon {
        valuation: v.clone(),
        vertices: hull,
        segments,
    })
}

/// [`newton_polygon`] for a polynomial with coefficients in A.
pub fn newton_polygon_ax(f: &PolyAX, v: &Valuation) -> Result<NewtonPolygon> {
    newton_polygon(to_kx(f).coeffs(), v)
}

/// Tr(T_℘^{nj} | S_{k,l}) for j = 1..count.
pub fn trace_powers(qy: &TraceQuery, count: usize) -> Result<Vec<PolyA>> {
    (1..=count as u32)
        .map(|j| {
            let sub = TraceQuery {
                n: qy.n * j,
                ..qy.clone()
            };
            Ok(trace_auto(&sub)?.value)
        })
        .collect()
}

/// Options for [`spectrum`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SpectrumOptions {
    /// Use Berlekamp–Massey when d >= p instead of failing.
    pub fallback: bool,
    /// Skip the Hankel computation.
    pub skip_hankel: bool,
}

/// Spectral summary of T_℘ⁿ on S_{k,l}.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub query: TraceQuery,
    pub dim: u64,
    /// Tr(T^1), Tr(T^2), … with T = T_℘ⁿ.
    pub traces: Vec<PolyA>,
    pub charpoly: Option<PolyAX>,
    /// Minimal recurrence of the traces when the charpoly is unavailable.
    pub recurrence: Option<PolyAX>,
    pub note: Option<String>,
    pub hankel: Option<HankelVerdict>,
    /// Root valuations at ∞ and at ℘ from the charpoly, or from the
    /// recurrence when only that is known.
    pub slopes_inf: Vec<(Ratio<i64>, u64)>,
    pub slopes_wp: Vec<(Ratio<i64>, u64)>,
    pub odd_mult_eigs: Option<Vec<PolyA>>,
}

impl SpectrumReport {
    pub fn repeated(&self) -> Option<bool> {
        self.hankel.as_ref().map(|h| h.repeated)
    }
}

pub fn spectrum(qy: &TraceQuery, opts: SpectrumOptions) -> Result<SpectrumReport> {
    let field = qy.field().clone();
    let p = field.p() as usize;
    let q = qy.q();
    let dim = if qy.k >= 2 && qy.admissible() {
        dim_cusp(qy.k, qy.l, q)
    } else {
        0
    };
    let d = dim as usize;
    let odd_mult_eigs = if p == 2 {
        Some(char2_odd_mult_eigs(&qy.wp, qy.n, qy.k, qy.l)?)
    } else {
        None
    };
    let mut report = SpectrumReport {
        query: qy.clone(),
        dim,
        traces: Vec::new(),
        charpoly: None,
        recurrence: None,
        note: None,
        hankel: None,
        slopes_inf: Vec::new(),
        slopes_wp: Vec::new(),
        odd_mult_eigs,
    };
    if d == 0 {
        report.charpoly = Some(PolyAX::constant(PolyA::one(&field)));
        return Ok(report);
    }
    let slopes_of = |f: &PolyAX| -> Result<(Vec<(Ratio<i64>, u64)>, Vec<(Ratio<i64>, u64)>)> {
        Ok((
            newton_polygon_ax(f, &Valuation::Infinity)?.root_slopes(),
            newton_polygon_ax(f, &Valuation::Prime(qy.wp.clone()))?.root_slopes(),
        ))
    };
    if d < p {
        report.traces = trace_powers(qy, d)?;
        let cp = charpoly_from_traces(&field, &report.traces, d)?;
        if !opts.skip_hankel {
            let disc = discriminant(&cp);
            report.hankel = Some(HankelVerdict {
                repeated: disc.is_zero(),
                det: Some(disc),
                evidence: HankelEvidence::Exact,
            });
        }
        let (a, b) = slopes_of(&cp)?;
        report.slopes_inf = a;
        report.slopes_wp = b;
        report.charpoly = Some(cp);
        return Ok(report);
    }
    if !opts.fallback {
        return Err(Error::DimensionAtLeastP { d, p: p as u32 });
    }
    report.traces = trace_powers(qy, 2 * d)?;
    if !opts.skip_hankel {
        report.hankel = Some(repeated_eig_detect(&field, dim, &report.traces)?);
    }
    let rec = berlekamp_massey_a(&report.traces, d)?;
    let (a, b) = slopes_of(&rec)?;
    report.slopes_inf = a;
    report.slopes_wp = b;
    report.recurrence = Some(rec);
    report.note = Some(format!(
        "dim {d} >= p = {p}: the recurrence only sees eigenvalues whose multiplicity is nonzero mod p"
    ));
    Ok(report)
}

/// One nonzero instance found by [`ram_suff_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamViolation {
    pub exponents: Vec<u32>,
    pub t: u32,
    pub value: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamSuffReport {
    pub tuples_checked: u64,
    pub violations: Vec<RamViolation>,
}

/// Evaluates Σ_{(a,b)} #Iso·b^t·Π a_i^{v_i} for every tuple that the
/// sufficient condition for the strong bound requires to vanish:
/// 0 <= v_i <= q−1, 1 <= t <= q−1, 2t ≡ −Σv_i (mod q−1) and
/// 2Σ i·v_i > nd(Σv_i − (q−1)).
pub fn ram_suff_check(wp: &PolyA, n: u32) -> Result<RamSuffReport> {
    let field = wp.field().clone();
    let q = field.size() as u64;
    let nd = n as u64 * wp.deg().unwrap_or(0) as u64;
    let top = (nd / 2) as usize;
    let c = census(wp, n)?;
    let entries: Vec<(Vec<Elem>, Elem, Elem)> = c
        .nonzero()
        .map(|e| {
            let a: Vec<Elem> = (0..=top).map(|i| e.class.a.coeff(i)).collect();
            (a, e.class.b, e.count_mod_p)
        })
        .collect();
    let mut report = RamSuffReport {
        tuples_checked: 0,
        violations: Vec::new(),
    };
    let mut v = vec![0u32; top + 1];
    loop {
        let k: u64 = v.iter().map(|&x| x as u64).sum();
        let weighted: u64 = v.iter().enumerate().map(|(i, &x)| i as u64 * x as u64).sum();
        if 2 * weighted as i64 > nd as i64 * (k as i64 - (q as i64 - 1)) {
            for t in 1..q as u32 {
                if (2 * t as i64 + k as i64).rem_euclid(q as i64 - 1) != 0 {
                    continue;
                }
                report.tuples_checked += 1;
                let mut sum = 0;
                for (a, b, cnt) in &entries {
                    let mut term = field.mul(*cnt, field.pow(*b, t as u64));
                    for (i, &e) in v.iter().enumerate() {
                        term = field.mul(term, field.pow(a[i], e as u64));
                    }
                    sum = field.add(sum, term);
                }
                if sum != 0 {
                    report.violations.push(RamViolation {
                        exponents: v.clone(),
                        t,
                        value: sum,
                    });
                }
            }
        }
        // Next tuple in base q.
        let mut i = 0;
        loop {
            if i > top {
                return Ok(report);
            }
            v[i] += 1;
            if (v[i] as u64) < q {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// n·d·(k − (q+1))/2.
pub fn strong_bound(nd: u32, k: u64, q: u64) -> Ratio<i64> {
    Ratio::new(nd as i64 * (k as i64 - q as i64 - 1), 2)
}

/// k_n = (n−1)q² + (2l−n)q + 1.
pub fn attainment_weight(q: u64, l: u64, n: u64) -> i64 {
    let (q, l, n) = (q as i64, l as i64, n as i64);
    (n - 1) * q * q + (2 * l - n) * q + 1
}

/// d_l(n) = n − 2⌈(n−l)/(q+1)⌉.
pub fn attainment_multiplicity(q: u64, l: u64, n: u64) -> i64 {
    let (q, l, n) = (q as i64, l as i64, n as i64);
    n - 2 * (n - l).div_euclid(q + 1) - if (n - l).rem_euclid(q + 1) != 0 { 2 } else { 0 }
}

/// The index n with k = k_n, if any.
pub fn attainment_index(q: u64, l: u64, k: u64) -> Option<u64> {
    let (qi, li, ki) = (q as i64, l as i64, k as i64);
    let num = ki - 1 + qi * qi - 2 * li * qi;
    let den = qi * qi - qi;
    if num > 0 && num % den == 0 {
        Some((num / den) as u64)
    } else {
        None
    }
}

/// One weight of a conjecture scan.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub k: u64,
    pub dim: u64,
    pub trace_deg: Option<usize>,
    pub strong_bound: Ratio<i64>,
    /// Slopes at ∞ as root valuations, when the spectrum was computed.
    pub slopes_inf: Option<Vec<(Ratio<i64>, u64)>>,
    /// Multiplicity of the slope −(strong bound).
    pub attained: Option<u64>,
    /// (n, d_l(n)) when k = k_n.
    pub predicted: Option<(u64, i64)>,
    /// Whether every slope at ∞ and at ℘ is an integer with residue l−1 or
    /// l−1+(q−1)/2 mod q−1.
    pub residues_ok: Option<bool>,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub q: u64,
    pub wp: PolyA,
    pub l: i64,
    pub rows: Vec<ScanRow>,
    /// Weights where attainment disagrees with the predicted pattern.
    pub attainment_mismatches: Vec<u64>,
    /// Weights with a slope residue outside the predicted classes.
    pub residue_mismatches: Vec<u64>,
    /// Weights with deg Tr above the strong bound.
    pub bound_violations: Vec<u64>,
}

/// Tabulates trace degrees against the strong bound and, where the
/// characteristic polynomial is recoverable, the slope statistics behind
/// the attainment and slope-residue statements. Never asserts.
pub fn conjecture_scans(wp: &PolyA, ks: impl IntoIterator<Item = u64>, l: i64, with_spectra: bool) -> Result<ScanReport> {
    let field = wp.field().clone();
    let q = field.size() as u64;
    let nd = wp.deg().unwrap_or(0) as u32;
    let ln = normalize_type(l, q);
    let mut report = ScanReport {
        q,
        wp: wp.clone(),
        l,
        rows: Vec::new(),
        attainment_mismatches: Vec::new(),
        residue_mismatches: Vec::new(),
        bound_violations: Vec::new(),
    };
    for k in ks {
        let qy = TraceQuery::new(wp, 1, k, l)?;
        if !qy.admissible() || k < 2 {
            continue;
        }
        let dim = dim_cusp(k, l, q);
        let tr = trace_auto(&qy)?.value;
        let bound = strong_bound(nd, k, q);
        if let Some(dg) = tr.deg() {
            if Ratio::from_integer(dg as i64) > bound {
                report.bound_violations.push(k);
            }
        }
        let predicted = attainment_index(q, ln, k).map(|n| (n, attainment_multiplicity(q, ln, n)));
        let mut row = ScanRow {
            k,
            dim,
            trace_deg: tr.deg(),
            strong_bound: bound,
            slopes_inf: None,
            attained: None,
            predicted,
            residues_ok: None,
            note: None,
        };
        if with_spectra && dim > 0 {
            match spectrum(&qy, SpectrumOptions { fallback: false, skip_hankel: true }) {
                Ok(sp) => {
                    let target = -bound;
                    let att = sp.slopes_inf.iter().filter(|(s, _)| *s == target).map(|(_, m)| *m).sum();
                    let expected = predicted.map(|(_, m)| m.max(0) as u64).unwrap_or(0);
                    if att != expected && q % 2 == 1 {
                        report.attainment_mismatches.push(k);
                    }
                    let qm1 = q as i64 - 1;
                    let ok_res = |s: &Ratio<i64>| {
                        s.is_integer() && {
                            let r = (s.to_integer().abs() - (ln as i64 - 1)).rem_euclid(qm1);
                            r == 0 || (qm1 % 2 == 0 && r == qm1 / 2)
                        }
                    };
                    let residues_ok = sp.slopes_inf.iter().chain(sp.slopes_wp.iter()).all(|(s, _)| ok_res(s));
                    if !residues_ok && q % 2 == 1 && nd == 1 {
                        report.residue_mismatches.push(k);
                    }
                    row.attained = Some(att);
                    row.residues_ok = Some(residues_ok);
                    row.slopes_inf = Some(sp.slopes_inf);
                }
                Err(Error::DimensionAtLeastP { d, p }) => {
                    row.note = Some(format!("skipped: dim {d} >= p = {p}"));
                }
                Err(e) => return Err(e),
            }
        }
        report.rows.push(row);
    }
    Ok(report)
}

/// One row of the figure data: deg Tr against the strong bound.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureRow {
    pub k: u64,
    pub deg_trace: usize,
    pub strong_bound: Ratio<i64>,
    /// log_q(1 + bound − deg Tr).
    pub log_distance: f64,
}

/// Figure rows for every admissible k in range with a nonzero trace.
pub fn figure_rows(wp: &PolyA, n: u32, ks: impl IntoIterator<Item = u64>, l: i64) -> Result<Vec<FigureRow>> {
    let q = wp.field().size() as u64;
    let nd = n * wp.deg().unwrap_or(0) as u32;
    let mut out = Vec::new();
    for k in ks {
        let qy = TraceQuery::new(wp, n, k, l)?;
        if k < 2 || !qy.admissible() {
            continue;
        }
        let tr = trace_auto(&qy)?.value;
        let Some(dg) = tr.deg() else { continue };
        let bound = strong_bound(nd, k, q);
        let dist = bound - Ratio::from_integer(dg as i64);
        let x = 1.0 + *dist.numer() as f64 / *dist.denom() as f64;
        out.push(FigureRow {
            k,
            deg_trace: dg,
            strong_bound: bound,
            log_distance: x.ln() / (q as f64).ln(),
        });
    }
    Ok(out)
}

/// Whether ±℘^{(k−2)/2} is an eigenvalue of T_℘ on S_{k,l}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OldNewVerdict {
    pub k: u64,
    pub l: i64,
    pub dim: u64,
    pub occurs: bool,
    /// "charpoly", "recurrence" or "empty".
    pub via: &'static str,
}

impl OldNewVerdict {
    /// The old/new decomposition at level ℘ holds whenever the critical
    /// eigenvalue is absent.
    pub fn decomposition_holds(&self) -> bool {
        !self.occurs
    }
}

pub fn oldnew_criterion(wp: &PolyA, k: u64, l: i64) -> Result<OldNewVerdict> {
    oldnew_criterion_with_cap(wp, k, l, DEFAULT_CAP)
}

/// [`oldnew_criterion`] with an explicit bound on n·deg ℘ for the traces of
/// T_℘^j that the recurrence fallback needs when dim >= p.
pub fn oldnew_criterion_with_cap(wp: &PolyA, k: u64, l: i64, cap: u32) -> Result<OldNewVerdict> {
    let qy = TraceQuery::new(wp, 1, k, l)?.with_cap(cap);
    let sp = spectrum(&qy, SpectrumOptions { fallback: true, skip_hankel: true })?;
    let (poly, via) = match (&sp.charpoly, &sp.recurrence) {
        _ if sp.dim == 0 => {
            return Ok(OldNewVerdict {
                k,
                l,
                dim: 0,
                occurs: false,
                via: "empty",
            })
        }
        (Some(c), _) => (c.clone(), "charpoly"),
        (None, Some(r)) => (r.clone(), "recurrence"),
        (None, None) => unreachable!("spectrum returns one of the two"),
    };
    let field = wp.field();
    let zero = PolyA::zero(field);
    // g = X² − ℘^{k−2}; a common root exists iff f mod g vanishes at a root.
    let g = UPoly::new(zero.clone(), vec![wp.pow(k - 2).neg(), zero.clone(), PolyA::one(field)]);
    let (_, r) = poly.divrem_monic(&g)?;
    let occurs = if r.is_zero() {
        true
    } else if k % 2 == 0 {
        let lam = wp.pow((k - 2) / 2);
        r.eval(&lam).is_zero() || r.eval(&lam.neg()).is_zero()
    } else {
        false
    };
    Ok(OldNewVerdict {
        k,
        l,
        dim: sp.dim,
        occurs,
        via,
    })
}
