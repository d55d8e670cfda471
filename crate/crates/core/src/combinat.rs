//! Binomial coefficients in characteristic p, the trace-formula coefficients
//! c_{k,j}, dimensions of spaces of cusp forms, the index sets P(k+2,l,q) in
//! characteristic 2 and the Stern–Brocot sequence.

use crate::error::{Error, Result};

/// Weight and type of a space S_{k,l}, keeping the raw type for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightType {
    pub k: u64,
    pub l_raw: i64,
    pub l: u64,
    pub q: u64,
}

impl WeightType {
    pub fn new(k: u64, l: i64, q: u64) -> WeightType {
        WeightType {
            k,
            l_raw: l,
            l: normalize_type(l, q),
            q,
        }
    }

    /// Whether k ≡ 2l (mod q−1), the condition for S_{k,l} to be nonzero.
    pub fn admissible(&self) -> bool {
        type_admissible(self.k as i64, self.l_raw, self.q)
    }
}

/// Representative of l modulo q−1 in 1..=q−1; type 0 and type q−1 agree.
pub fn normalize_type(l: i64, q: u64) -> u64 {
    let m = q as i64 - 1;
    let r = l.rem_euclid(m);
    if r == 0 {
        m as u64
    } else {
        r as u64
    }
}

/// k ≡ 2l (mod q−1).
pub fn type_admissible(k: i64, l: i64, q: u64) -> bool {
    (k - 2 * l).rem_euclid(q as i64 - 1) == 0
}

/// C(x, y) mod p for 0 <= x, y < p from a row of Pascal's triangle mod p.
fn small_binom(x: u64, y: u64, p: u64) -> u64 {
    if y > x {
        return 0;
    }
    // x, y < p so this product never involves p.
    let y = y.min(x - y);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..y {
        num = num * ((x - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// C(x, y) mod p by Lucas's theorem, digit by digit in base p.
pub fn binom_mod_p(mut x: u64, mut y: u64, p: u32) -> u32 {
    let p = p as u64;
    let mut r = 1u64;
    while y > 0 {
        let (xd, yd) = (x % p, y % p);
        if yd > xd {
            return 0;
        }
        r = r * small_binom(xd, yd, p) % p;
        x /= p;
        y /= p;
    }
    r as u32
}

/// C(x, y) mod p for signed arguments, zero when y < 0 or x < y.
pub fn binom_mod_p_signed(x: i64, y: i64, p: u32) -> u32 {
    if y < 0 || x < y {
        return 0;
    }
    binom_mod_p(x as u64, y as u64, p)
}

/// c_{k,j} = (−1)^j C(k−j, j) as an integer in 0..p.
pub fn c_kj(k: i64, j: i64, p: u32) -> u32 {
    if j < 0 {
        return 0;
    }
    let b = binom_mod_p_signed(k - j, j, p);
    if j % 2 == 1 && b != 0 {
        p - b
    } else {
        b
    }
}

/// dim S_{k,l}.
pub fn dim_cusp(k: u64, l: i64, q: u64) -> u64 {
    let l = normalize_type(l, q);
    if !type_admissible(k as i64, l as i64, q) || k < l * (q + 1) {
        return 0;
    }
    1 + (k - l * (q + 1)) / (q * q - 1)
}

/// dim of the double cusp forms in S_{k,l}.
pub fn dim_double_cusp(k: u64, l: i64, q: u64) -> u64 {
    let d = dim_cusp(k, l, q);
    if normalize_type(l, q) == 1 && d > 0 {
        d - 1
    } else {
        d
    }
}

/// P(w, l, q) for weight w = k+2 and q even: the indices 0 <= j < k/2 with
/// j ≡ l−1 (mod q−1) and C(k−j, j) odd, ascending.
pub fn char2_index_set(w: u64, l: i64, q: u64) -> Result<Vec<u64>> {
    if q % 2 != 0 {
        return Err(Error::OddCharacteristic);
    }
    if w < 2 {
        return Ok(Vec::new());
    }
    let k = w - 2;
    let m = q as i64 - 1;
    let mut out = Vec::new();
    let mut j = 0u64;
    while 2 * j < k {
        if (j as i64 - (l - 1)).rem_euclid(m) == 0 && binom_mod_p(k - j, j, 2) == 1 {
            out.push(j);
        }
        j += 1;
    }
    Ok(out)
}

/// N(w, l, q) = #P(w, l, q).
pub fn char2_index_count(w: u64, l: i64, q: u64) -> Result<usize> {
    Ok(char2_index_set(w, l, q)?.len())
}

/// The Stern–Brocot sequence: a_0 = a_1 = 1, a_{2m} = a_m + a_{m−1},
/// a_{2m+1} = a_m.
///
/// Computed by carrying the pair (a_m, a_{m−1}) down the binary digits of k,
/// so no table is needed and the cost is O(log k).
pub fn stern_brocot(k: u64) -> u64 {
    if k <= 1 {
        return 1;
    }
    // (a, b) = (a_m, a_{m−1}) for m = the leading bits of k read so far.
    let (mut a, mut b) = (1u64, 1u64);
    let bits = 64 - k.leading_zeros();
    for i in (0..bits - 1).rev() {
        if (k >> i) & 1 == 0 {
            // m -> 2m: (a_{2m}, a_{2m−1}) = (a_m + a_{m−1}, a_{m−1}).
            a += b;
        } else {
            // m -> 2m+1: (a_{2m+1}, a_{2m}) = (a_m, a_m + a_{m−1}).
            b += a;
        }
    }
    a
}
