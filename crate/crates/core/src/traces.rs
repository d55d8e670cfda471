//! Traces of Hecke operators T_℘ⁿ on S_{k,l} as exact elements of A.
//!
//! Every trace here is in the rescaled normalization T_℘ = ℘^{−1}·T_℘^{A},
//! so it agrees with the published tables; multiply by ℘ⁿ for the other
//! convention. The general path sums over Weil classes with #Iso mod p from
//! [`crate::isogeny`]; the closed forms cover primes of degree 1, even
//! characteristic and n·deg ℘ = 2.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use parking_lot::{Mutex, RwLock};

use crate::combinat::{binom_mod_p, c_kj, type_admissible};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldDesc};
use crate::isogeny::{census, Census};
use crate::polyring::{enumerate_polys, PolyA, PolyAX};

/// Default bound on n·deg ℘ for the general path.
pub const DEFAULT_CAP: u32 = 6;

/// The tuple (q, ℘, n, k, l) indexing Tr(T_℘ⁿ | S_{k,l}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceQuery {
    pub wp: PolyA,
    pub n: u32,
    pub k: u64,
    pub l: i64,
    pub cap: u32,
}

impl TraceQuery {
    /// Validates that ℘ is monic irreducible and n >= 1.
    pub fn new(wp: &PolyA, n: u32, k: u64, l: i64) -> Result<TraceQuery> {
        if !wp.is_monic() {
            return Err(Error::NotMonic(wp.to_string()));
        }
        if !wp.is_irreducible() {
            return Err(Error::NotIrreducible(wp.to_string()));
        }
        if n == 0 {
            return Err(Error::RangeViolation("n must be positive".into()));
        }
        Ok(TraceQuery {
            wp: wp.clone(),
            n,
            k,
            l,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: u32) -> TraceQuery {
        self.cap = cap;
        self
    }

    /// The same query at another weight and type.
    pub fn at(&self, k: u64, l: i64) -> TraceQuery {
        TraceQuery {
            k,
            l,
            ..self.clone()
        }
    }

    pub fn field(&self) -> &FieldDesc {
        self.wp.field()
    }

    pub fn q(&self) -> u64 {
        self.field().size() as u64
    }

    pub fn d(&self) -> u32 {
        self.wp.deg().unwrap_or(0) as u32
    }

    pub fn nd(&self) -> u32 {
        self.n * self.d()
    }

    /// k ≡ 2l (mod q−1).
    pub fn admissible(&self) -> bool {
        type_admissible(self.k as i64, self.l, self.q())
    }

    /// ℘ⁿ.
    pub fn wpn(&self) -> PolyA {
        self.wp.pow(self.n as u64)
    }
}

/// Which formula produced a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    General,
    Deg1Closed,
    Char2Closed,
    Deg2Closed,
    Symmetry,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::General => "general",
            Method::Deg1Closed => "deg1_closed",
            Method::Char2Closed => "char2_closed",
            Method::Deg2Closed => "deg2_closed",
            Method::Symmetry => "symmetry",
        }
    }
}

/// A trace together with its query and the method that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceResult {
    pub query: TraceQuery,
    pub value: PolyA,
    pub method: Method,
}

fn residue(e: i64, m: u64) -> usize {
    e.rem_euclid(m as i64) as usize
}

/// Σ_{0 <= j < (k−2)/2, j ≡ l−1 (mod q−1)} s_j C(k−2−j, j) x^j where s_j is
/// (−1)^j when `signed` and 1 otherwise; zero unless k ≡ 2l (mod q−1).
pub fn simple_series(x: &PolyA, k: u64, l: i64, signed: bool) -> PolyA {
    let field = x.field();
    let q = field.size() as u64;
    let p = field.p();
    if k < 2 || !type_admissible(k as i64, l, q) {
        return PolyA::zero(field);
    }
    let kp = (k - 2) as i64;
    let top = (kp + 1) / 2; // j ranges over 0..top
    let mut acc = PolyA::zero(field);
    for j in (0..top).rev() {
        acc = acc.mul(x);
        if residue(j - (l - 1), q - 1) != 0 {
            continue;
        }
        let c = if signed {
            c_kj(kp, j, p)
        } else {
            binom_mod_p((kp - j) as u64, j as u64, p)
        };
        if c != 0 {
            acc = acc.add(&PolyA::constant(field, c));
        }
    }
    acc
}

/// Tr(T_{T−x} | S_{k,l}) from the degree-one closed form.
pub fn trace_deg1(qy: &TraceQuery) -> Result<TraceResult> {
    if qy.d() != 1 || qy.n != 1 {
        return Err(Error::WrongDegree(format!(
            "degree-one formula needs deg ℘ = 1 and n = 1, got deg {} and n = {}",
            qy.d(),
            qy.n
        )));
    }
    Ok(TraceResult {
        query: qy.clone(),
        value: simple_series(&qy.wp, qy.k, qy.l, true),
        method: Method::Deg1Closed,
    })
}

/// Tr(T_℘ⁿ | S_{k,l}) in even characteristic.
pub fn trace_char2(qy: &TraceQuery) -> Result<TraceResult> {
    if qy.field().p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    Ok(TraceResult {
        query: qy.clone(),
        value: simple_series(&qy.wpn(), qy.k, qy.l, false),
        method: Method::Char2Closed,
    })
}

/// Tr(T_℘ⁿ | S_{k,l}) for odd q and n·deg ℘ = 2: the diagonal series in ℘ⁿ
/// plus the Legendre-weighted multinomial correction.
pub fn trace_deg2(qy: &TraceQuery) -> Result<TraceResult> {
    let field = qy.field().clone();
    if field.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if qy.nd() != 2 {
        return Err(Error::WrongDegree(format!(
            "degree-two formula needs n·deg ℘ = 2, got {}",
            qy.nd()
        )));
    }
    let wpn = qy.wpn();
    let mut value = simple_series(&wpn, qy.k, qy.l, true);
    if qy.k >= 2 && qy.admissible() {
        let q = qy.q() as i64;
        let p = field.p();
        let pp = p as u64;
        let h = (q - 1) / 2;
        let kp = qy.k as i64 - 2;
        let top = (kp + 1) / 2;
        let inv4 = field.inv(field.from_int(4)).expect("p is odd");
        // Coefficient of T^i·℘^{nj}, collected per j and folded by Horner.
        let mut per_j: Vec<Vec<Elem>> = vec![Vec::new(); top.max(0) as usize];
        for m in h..=q - 2 {
            let bc = binom_mod_p(m as u64, h as u64, p);
            if bc == 0 {
                continue;
            }
            let coef_m = field.mul(field.pow(inv4, m as u64), bc);
            for j in 0..top {
                if residue(j - (qy.l - 1 + m), q as u64 - 1) != 0 {
                    continue;
                }
                let outer = binom_mod_p((kp - j) as u64, j as u64, p) as u64;
                if outer == 0 {
                    continue;
                }
                let sign_neg = (j + h) % 2 == 1;
                let len = (kp - 2 * j) as usize;
                let row = &mut per_j[j as usize];
                if row.len() < len {
                    row.resize(len, 0);
                }
                for i in 1..(kp - 2 * j) {
                    if residue(i + 2 * m, q as u64 - 1) != 0 {
                        continue;
                    }
                    let inner = binom_mod_p((kp - 2 * j) as u64, i as u64, p) as u64;
                    let mut c = (outer * inner % pp) as i64;
                    if sign_neg {
                        c = -c;
                    }
                    let term = field.mul(coef_m, field.from_int(c));
                    row[i as usize] = field.add(row[i as usize], term);
                }
            }
        }
        let mut acc = PolyA::zero(&field);
        for row in per_j.into_iter().rev() {
            acc = acc.mul(&wpn).add(&PolyA::from_coeffs(&field, row));
        }
        value = value.add(&acc);
    }
    Ok(TraceResult {
        query: qy.clone(),
        value,
        method: Method::Deg2Closed,
    })
}

/// Cached sums S_t(m) = Σ_{(a,b)} #Iso(a,b)·b^t·a^m over one census.
pub struct TraceEngine {
    census: Arc<Census>,
    wpn: PolyA,
    /// Distinct a with W_t(a) = Σ_b #Iso(a,b)·b^t for t in 0..q−1.
    weights: Vec<(PolyA, Vec<Elem>)>,
    state: Mutex<EngineState>,
}

struct EngineState {
    pows: Vec<PolyA>,
    sums: Vec<Vec<PolyA>>,
}

type EngineKey = (u32, Vec<u32>, Vec<Elem>, u32);

fn engine_cache() -> &'static RwLock<HashMap<EngineKey, Arc<TraceEngine>>> {
    static CACHE: OnceLock<RwLock<HashMap<EngineKey, Arc<TraceEngine>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

impl TraceEngine {
    /// Shared engine for (℘, n); builds the census on first use.
    pub fn get(wp: &PolyA, n: u32) -> Result<Arc<TraceEngine>> {
        let field = wp.field();
        let key: EngineKey = (field.p(), field.modulus().to_vec(), wp.coeffs().to_vec(), n);
        if let Some(e) = engine_cache().read().get(&key) {
            return Ok(e.clone());
        }
        let c = census(wp, n)?;
        let engine = Arc::new(TraceEngine::from_census(c));
        engine_cache().write().insert(key, engine.clone());
        Ok(engine)
    }

    pub fn from_census(c: Arc<Census>) -> TraceEngine {
        let field = c.field.clone();
        let m = field.size() as usize - 1;
        let mut weights: Vec<(PolyA, Vec<Elem>)> = Vec::new();
        let mut index: HashMap<PolyA, usize> = HashMap::new();
        for e in c.nonzero() {
            let slot = *index.entry(e.class.a.clone()).or_insert_with(|| {
                weights.push((e.class.a.clone(), vec![0; m]));
                weights.len() - 1
            });
            let mut bt = 1;
            for t in 0..m {
                let w = &mut weights[slot].1[t];
                *w = field.add(*w, field.mul(e.count_mod_p, bt));
                bt = field.mul(bt, e.class.b);
            }
        }
        let pows = vec![PolyA::one(&field); weights.len()];
        TraceEngine {
            wpn: c.wp.pow(c.n as u64),
            census: c,
            weights,
            state: Mutex::new(EngineState {
                pows,
                sums: Vec::new(),
            }),
        }
    }

    pub fn census(&self) -> &Arc<Census> {
        &self.census
    }

    fn field(&self) -> &FieldDesc {
        &self.census.field
    }

    fn ensure(&self, st: &mut EngineState, m_max: usize) {
        let field = self.field().clone();
        let qm1 = field.size() as usize - 1;
        while st.sums.len() <= m_max {
            let mut row = vec![PolyA::zero(&field); qm1];
            for (i, (a, w)) in self.weights.iter().enumerate() {
                let pw = &st.pows[i];
                for t in 0..qm1 {
                    if w[t] != 0 {
                        row[t].add_assign(&pw.scale(w[t]));
                    }
                }
                st.pows[i] = pw.mul(a);
            }
            st.sums.push(row);
        }
    }

    /// S_t(m) = Σ_{(a,b)} #Iso(a,b)·b^t·a^m with t read modulo q−1.
    pub fn weighted_sum(&self, t: i64, m: usize) -> PolyA {
        let qm1 = self.field().size() as u64 - 1;
        let mut st = self.state.lock();
        self.ensure(&mut st, m);
        st.sums[m][residue(t, qm1)].clone()
    }

    /// Σ_{0 <= j < k'/2} c_{k',j}·S_{j+l−k'−1}(k'−2j)·℘^{nj}, k' = k−2.
    pub fn trace(&self, k: u64, l: i64) -> PolyA {
        let field = self.field().clone();
        if k < 2 {
            return PolyA::zero(&field);
        }
        let p = field.p();
        let qm1 = field.size() as u64 - 1;
        let kp = (k - 2) as i64;
        let top = (kp + 1) / 2;
        let mut st = self.state.lock();
        self.ensure(&mut st, kp as usize);
        let mut acc = PolyA::zero(&field);
        for j in (0..top).rev() {
            acc = acc.mul(&self.wpn);
            let c = c_kj(kp, j, p);
            if c == 0 {
                continue;
            }
            let t = residue(j + l - kp - 1, qm1);
            let s = &st.sums[(kp - 2 * j) as usize][t];
            if !s.is_zero() {
                acc.add_assign(&s.scale(c));
            }
        }
        acc
    }
}

fn check_cap(qy: &TraceQuery) -> Result<()> {
    if qy.nd() > qy.cap {
        return Err(Error::CapExceeded {
            got: qy.nd(),
            cap: qy.cap,
        });
    }
    Ok(())
}

/// Tr(T_℘ⁿ | S_{k,l}) by the general trace formula over all Weil classes.
pub fn trace_general(qy: &TraceQuery) -> Result<TraceResult> {
    check_cap(qy)?;
    let engine = TraceEngine::get(&qy.wp, qy.n)?;
    Ok(TraceResult {
        query: qy.clone(),
        value: engine.trace(qy.k, qy.l),
        method: Method::General,
    })
}

/// Dispatches to the cheapest applicable formula.
pub fn trace_auto(qy: &TraceQuery) -> Result<TraceResult> {
    if qy.field().p() == 2 {
        trace_char2(qy)
    } else if qy.d() == 1 && qy.n == 1 {
        trace_deg1(qy)
    } else if qy.nd() == 2 {
        trace_deg2(qy)
    } else {
        trace_general(qy)
    }
}

/// Tr(T_℘ⁿ | S_k) for q = 2 by the symmetry recursion around weights 2^m+1,
/// O(log k) distinct subproblems.
pub fn trace_symmetry_q2(wp: &PolyA, n: u32, k: u64) -> Result<TraceResult> {
    let qy = TraceQuery::new(wp, n, k, 1)?;
    if qy.q() != 2 {
        return Err(Error::RangeViolation("the symmetry recursion needs q = 2".into()));
    }
    let wpn = qy.wpn();
    let mut memo: HashMap<u64, PolyA> = HashMap::new();
    fn go(w: u64, wpn: &PolyA, memo: &mut HashMap<u64, PolyA>) -> PolyA {
        let f = wpn.field();
        if w <= 2 {
            return PolyA::zero(f);
        }
        if w == 3 {
            return PolyA::one(f);
        }
        if let Some(v) = memo.get(&w) {
            return v.clone();
        }
        let m = 63 - (w - 2).leading_zeros() as u64;
        let pm = 1u64 << m;
        let big_n = w - 1 - pm;
        let lo = go(pm + 1 - big_n, wpn, memo);
        let mid = go(big_n + 1, wpn, memo);
        let mut v = wpn.pow(big_n).mul(&lo).add(&mid);
        if big_n % 2 == 1 {
            v = v.add(&wpn.pow((big_n - 1) / 2));
        }
        memo.insert(w, v.clone());
        v
    }
    let value = go(k, &wpn, &mut memo);
    Ok(TraceResult {
        query: qy,
        value,
        method: Method::Symmetry,
    })
}

/// Tr(S_{p^m+1+N,l}) − ℘^{Nn}·Tr(S_{p^m+1−N,l−N}), checked against the
/// census form of ε and, where they apply, the degree-one and q = 2 forms.
pub fn symmetry_check(qy: &TraceQuery, m: u32, big_n: u64) -> Result<PolyA> {
    let field = qy.field().clone();
    let p = field.p();
    let pm = (p as u64)
        .checked_pow(m)
        .ok_or_else(|| Error::RangeViolation("p^m overflows".into()))?;
    if m == 0 || big_n == 0 || big_n > pm {
        return Err(Error::RangeViolation(format!(
            "need m >= 1 and 1 <= N <= p^m = {pm}, got m = {m}, N = {big_n}"
        )));
    }
    check_cap(qy)?;
    let engine = TraceEngine::get(&qy.wp, qy.n)?;
    let wpn = qy.wpn();
    let l = qy.l;
    let hi = engine.trace(pm + 1 + big_n, l);
    let lo = engine.trace(pm + 1 - big_n, l - big_n as i64);
    let residual = hi.sub(&wpn.pow(big_n).mul(&lo));

    let mismatch = |predicted: &PolyA| Error::SymmetryMismatch {
        residual: residual.to_string(),
        predicted: predicted.to_string(),
    };

    // ε = Σ #Iso (a/b)^{p^m} Σ_{j <= (N−1)/2} c_{N−1,j} a^{N−1−2j} b^{j+l−N} ℘^{nj}.
    let qm1 = field.size() as u64 - 1;
    let nm1 = big_n as i64 - 1;
    let mut predicted = PolyA::zero(&field);
    for e in engine.census().nonzero() {
        let a = &e.class.a;
        let b = e.class.b;
        let apm = a.pow(pm);
        let mut inner = PolyA::zero(&field);
        for j in (0..=nm1 / 2).rev() {
            inner = inner.mul(&wpn);
            let c = c_kj(nm1, j, p);
            if c == 0 {
                continue;
            }
            let t = (j + l - big_n as i64 - pm as i64).rem_euclid(qm1 as i64) as u64;
            let coef = field.mul(field.mul(c, field.pow(b, t)), e.count_mod_p);
            inner = inner.add(&a.pow((nm1 - 2 * j) as u64).scale(coef));
        }
        predicted = predicted.add(&apm.mul(&inner));
    }
    if predicted != residual {
        return Err(mismatch(&predicted));
    }
    let hi_ok = type_admissible((pm + 1 + big_n) as i64, l, qy.q());
    if qy.d() == 1 && qy.n == 1 && hi_ok {
        let mut eps = PolyA::zero(&field);
        for j in (0..=nm1 / 2).rev() {
            eps = eps.mul(&qy.wp);
            if residue(j - (l - 1), qm1) == 0 {
                eps = eps.add(&PolyA::constant(&field, c_kj(nm1, j, p)));
            }
        }
        if eps != residual {
            return Err(mismatch(&eps));
        }
    }
    if qy.q() == 2 {
        let mut eps = engine.trace(big_n + 1, l);
        if big_n % 2 == 1 {
            eps = eps.add(&wpn.pow((big_n - 1) / 2));
        }
        if eps != residual {
            return Err(mismatch(&eps));
        }
    }
    Ok(residual)
}

/// The trace reduced mod ℘^m from ordinary classes only:
/// Σ_{(a,℘)=1} #Iso·a^{k'}·b^{l−k'−1} mod ℘^m.
pub fn trace_mod_pn(qy: &TraceQuery, m: u32) -> Result<PolyA> {
    if m == 0 || m > qy.n {
        return Err(Error::RangeViolation(format!("need 1 <= m <= n = {}, got {m}", qy.n)));
    }
    check_cap(qy)?;
    let field = qy.field().clone();
    let modulus = qy.wp.pow(m as u64);
    if qy.k < 2 {
        return Ok(PolyA::zero(&field));
    }
    let kp = qy.k - 2;
    let qm1 = field.size() as u64 - 1;
    let c = census(&qy.wp, qy.n)?;
    let mut acc = PolyA::zero(&field);
    for e in c.nonzero() {
        if !e.class.a.gcd(&qy.wp).is_one() {
            continue;
        }
        let t = residue(qy.l - kp as i64 - 1, qm1) as u64;
        let coef = field.mul(e.count_mod_p, field.pow(e.class.b, t));
        let ak = e.class.a.rem(&modulus)?.powmod(kp, &modulus)?;
        acc = acc.add(&ak.scale(coef));
    }
    acc.rem(&modulus)
}

/// ℘^{−n}·Σ_{j<m} ℘^{2^{s−1}q^j n}, the trace at k = 2^s q^m, l = 2^{s−1}
/// for q = 2^r and 1 <= s <= r, evaluated with an exact division in A.
pub fn char2_power_weight_trace(wp: &PolyA, n: u32, s: u32, m: u32) -> Result<PolyA> {
    let field = wp.field();
    if field.p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    if s == 0 || s > field.r() {
        return Err(Error::RangeViolation(format!("need 1 <= s <= r, got s = {s}")));
    }
    let q = field.size() as u64;
    let wpn = wp.pow(n as u64);
    let mut sum = PolyA::zero(field);
    for j in 0..m {
        sum = sum.add(&wpn.pow((1u64 << (s - 1)) * q.pow(j)));
    }
    sum.exact_div(&wpn)
}

/// Closed forms of the power sums p_m(π, π̄) and complete homogeneous sums
/// h_m(π, π̄) in terms of a = π + π̄ and e = ππ̄ = b℘ⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymKind {
    Power,
    Homogeneous,
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn sym_poly_eval(kind: SymKind, m: u64, a: &PolyA, e: &PolyA) -> PolyA {
    let field = a.field();
    let p = field.p();
    match kind {
        SymKind::Power => {
            if m == 0 {
                return PolyA::constant(field, field.from_int(2));
            }
            // p_m = m Σ_{r1+2r2=m} (−1)^{r2} (r1+r2−1)!/(r1! r2!) a^{r1} e^{r2}.
            let mut acc = PolyA::zero(field);
            for r2 in 0..=m / 2 {
                let r1 = m - 2 * r2;
                let num = BigUint::from(m) * factorial(r1 + r2 - 1);
                let den = factorial(r1) * factorial(r2);
                let c = ((num / den) % BigUint::from(p)).to_u32().unwrap();
                let c = if r2 % 2 == 1 { field.neg(c) } else { c };
                if c != 0 {
                    acc = acc.add(&a.pow(r1).mul(&e.pow(r2)).scale(c));
                }
            }
            acc
        }
        SymKind::Homogeneous => {
            // h_m = ε_m + Σ_{j <= ⌈m/2⌉−1} (−1)^j C(m−j, j) a^{m−2j} e^j.
            let mut acc = if m % 2 == 0 {
                e.neg().pow(m / 2)
            } else {
                PolyA::zero(field)
            };
            let top = (m as i64 + 1) / 2;
            for j in 0..top {
                let c = c_kj(m as i64, j, p);
                if c != 0 {
                    acc = acc.add(&a.pow(m - 2 * j as u64).mul(&e.pow(j as u64)).scale(c));
                }
            }
            acc
        }
    }
}

/// f_{k,l}(X) with deg f < (k−2)/2 and f(℘ⁿ) = Tr(T_℘ⁿ | S_{k,l}) for every
/// (℘, n) with n·deg ℘ = 2, built from #Iso ≡ 1 − (a⁺,b / q).
pub fn interp_poly_nd2(field: &FieldDesc, k: u64, l: i64) -> Result<PolyAX> {
    if field.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let zero = PolyA::zero(field);
    if k < 2 {
        return Ok(PolyAX::zero(zero));
    }
    let p = field.p();
    let qm1 = field.size() as u64 - 1;
    let kp = (k - 2) as i64;
    let top = ((kp + 1) / 2) as usize;
    // W_t(a) = Σ_b (1 − (a⁺,b / q)) b^t.
    let mut weights: Vec<(PolyA, Vec<Elem>)> = Vec::new();
    for a in enumerate_polys(field, 1, false) {
        let mut w = vec![0; qm1 as usize];
        for b in field.units() {
            let iso = field.from_int(1 - field.quadratic_character(a.coeff(1), b)? as i64);
            if iso == 0 {
                continue;
            }
            let mut bt = 1;
            for slot in w.iter_mut() {
                *slot = field.add(*slot, field.mul(iso, bt));
                bt = field.mul(bt, b);
            }
        }
        weights.push((a, w));
    }
    let mut coeffs = vec![zero.clone(); top];
    let mut pows: Vec<PolyA> = weights.iter().map(|_| PolyA::one(field)).collect();
    // Walk m = k'−2j upward from the parity of k'.
    let mut mcur = 0i64;
    for j in (0..top as i64).rev() {
        let m = kp - 2 * j;
        while mcur < m {
            for (i, (a, _)) in weights.iter().enumerate() {
                pows[i] = pows[i].mul(a);
            }
            mcur += 1;
        }
        let c = c_kj(kp, j, p);
        if c == 0 {
            continue;
        }
        let t = residue(j + l - kp - 1, qm1);
        let mut s = zero.clone();
        for (i, (_, w)) in weights.iter().enumerate() {
            if w[t] != 0 {
                s.add_assign(&pows[i].scale(w[t]));
            }
        }
        coeffs[j as usize] = s.scale(c);
    }
    Ok(PolyAX::new(zero, coeffs))
}

/// g_q(X) = Π_{x ∈ F_q} (X − (T−x)²).
pub fn g_q(field: &FieldDesc) -> PolyAX {
    let zero = PolyA::zero(field);
    let mut acc = PolyAX::constant(PolyA::one(field));
    for x in field.elements() {
        let lin = PolyAX::new(zero.clone(), vec![PolyA::linear(field, x).square().neg(), PolyA::one(field)]);
        acc = acc.mul(&lin);
    }
    acc
}

/// The family of one-dimensional spaces used for the error quotients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorFamily {
    /// l = 0, k = (q+n+1)(q−1), spanned by E^n h^{q−1}.
    Type0,
    /// l = 2, k = 2(q+1) + n(q−1), spanned by E^n h².
    Type2,
}

impl ErrorFamily {
    pub fn weight_type(self, q: u64, n: u64) -> (u64, i64) {
        match self {
            ErrorFamily::Type0 => ((q + n + 1) * (q - 1), 0),
            ErrorFamily::Type2 => (2 * (q + 1) + n * (q - 1), 2),
        }
    }
}

/// ẽ_{k,l} = (f_{k,l} − h_{k,l}) / g_q where h_{k,l}(Q²) is the square of the
/// known T_Q-eigenvalue for every monic Q of degree one.
pub fn error_quotient(field: &FieldDesc, family: ErrorFamily, n: u64) -> Result<PolyAX> {
    let q = field.size() as u64;
    let (k, l) = family.weight_type(q, n);
    let f = interp_poly_nd2(field, k, l)?;
    let zero = PolyA::zero(field);
    let c = |v: i64| PolyA::constant(field, field.from_int(v));
    let n_i = n as i64;
    let terms: Vec<(i64, u64)> = match family {
        ErrorFamily::Type0 => vec![
            ((n_i + 1) * (n_i + 1), (n + 1) * (q - 1) - 1),
            (-2 * n_i * (n_i + 1), (2 * n + 1) * (q - 1) / 2 - 1),
            (n_i * n_i, (n * (q - 1)).wrapping_sub(1)),
        ],
        ErrorFamily::Type2 => vec![
            ((n_i + 1) * (n_i + 1), 1),
            (-2 * n_i * (n_i + 1), (q + 1) / 2),
            (n_i * n_i, q),
        ],
    };
    let mut h = PolyAX::zero(zero.clone());
    for (coef, e) in terms {
        let cc = c(coef);
        if cc.is_zero() {
            continue;
        }
        h = h.add(&PolyAX::monomial(cc, e as usize));
    }
    let (quo, rem) = f.sub(&h).divrem_monic(&g_q(field))?;
    if !rem.is_zero() {
        return Err(Error::NotDivisible(format!(
            "g_q does not divide f − h for n = {n}, remainder {rem}"
        )));
    }
    Ok(quo)
}

/// deg Tr <= nd(k−(q+1))/2, the strong Ramanujan bound, compared as 2·deg.
pub fn within_strong_bound(value: &PolyA, nd: u32, k: u64, q: u64) -> bool {
    match value.deg() {
        None => true,
        Some(d) => 2 * d as i64 <= nd as i64 * (k as i64 - (q as i64 + 1)),
    }
}

/// deg Tr < nd(k−2)/2, the strict Ramanujan bound, compared as 2·deg.
pub fn within_ramanujan_bound(value: &PolyA, nd: u32, k: u64) -> bool {
    match value.deg() {
        None => true,
        Some(d) => (2 * d as i64) < nd as i64 * (k as i64 - 2),
    }
}
