use dmf_core::isogeny::{census, Census};
use dmf_core::polyring::monic_irreducibles;
use dmf_core::{FieldDesc, PolyA};

fn fq(q: u64) -> FieldDesc {
    FieldDesc::from_order(q).unwrap()
}

/// (℘, n) pairs with n·deg ℘ <= max_nd, two primes per degree.
fn pairs(f: &FieldDesc, max_nd: usize) -> Vec<(PolyA, u32)> {
    let mut out = Vec::new();
    for d in 1..=max_nd {
        for wp in monic_irreducibles(f, d).iter().take(2) {
            for n in 1..=(max_nd / d) as u32 {
                out.push((wp.clone(), n));
            }
        }
    }
    out
}

/// Σ #Iso(a,b)·w(a)·b^t over the census, in F_q.
fn weighted(f: &FieldDesc, c: &Census, t: u64, w: impl Fn(&PolyA) -> u32) -> u32 {
    c.nonzero().fold(0, |acc, e| {
        let term = f.mul(f.mul(e.count_mod_p, w(&e.class.a)), f.pow(e.class.b, t));
        f.add(acc, term)
    })
}

#[test]
fn constant_coefficient_moments() {
    // Σ #Iso·a_0^k·b^t is 1 when k > 0 and k ≡ t ≡ 0 mod q−1, and 0 otherwise.
    for q in [2u64, 3, 4, 5, 7] {
        let f = fq(q);
        for (wp, n) in pairs(&f, if q <= 4 { 4 } else { 3 }) {
            let c = census(&wp, n).unwrap();
            for k in 0..3 * (q - 1) {
                for t in 0..q - 1 {
                    let got = weighted(&f, &c, t, |a| if k == 0 { 1 } else { f.pow(a.coeff(0), k) });
                    let want = u32::from(k > 0 && k % (q - 1) == 0 && t % (q - 1) == 0);
                    assert_eq!(got, want, "q={q} ℘={wp} n={n} k={k} t={t}");
                }
            }
        }
    }
}

#[test]
fn top_coefficient_moments_vanish() {
    // Σ_{deg a = nd/2} #Iso·(a⁺)^m·b^t = 0 for 1 <= m <= q−1 when nd is even.
    for q in [3u64, 4, 5, 7] {
        let f = fq(q);
        for (wp, n) in pairs(&f, 4) {
            let nd = n as usize * wp.deg().unwrap();
            if nd % 2 == 1 || (q >= 5 && nd > 2) {
                continue;
            }
            let c = census(&wp, n).unwrap();
            for m in 1..q {
                for t in 0..q - 1 {
                    let got = weighted(&f, &c, t, |a| {
                        if a.deg() == Some(nd / 2) {
                            f.pow(a.lc(), m)
                        } else {
                            0
                        }
                    });
                    assert_eq!(got, 0, "q={q} ℘={wp} n={n} m={m} t={t}");
                }
            }
        }
    }
}

#[test]
fn degree_two_counts_follow_the_legendre_symbol() {
    for q in [3u64, 5, 7, 9] {
        let f = fq(q);
        for (wp, n) in pairs(&f, 2).into_iter().filter(|(w, n)| *n as usize * w.deg().unwrap() == 2) {
            let c = census(&wp, n).unwrap();
            for a1 in f.elements() {
                for a0 in f.elements() {
                    let a = PolyA::from_coeffs(&f, vec![a0, a1]);
                    for b in f.units() {
                        let chi = f.quadratic_character(a1, b).unwrap() as i64;
                        assert_eq!(c.count(&a, b), f.from_int(1 - chi), "q={q} ℘={wp} n={n} a={a} b={b}");
                    }
                }
            }
        }
    }
}

#[test]
fn even_characteristic_counts_are_one_exactly_for_constant_a() {
    for q in [2u64, 4, 8] {
        let f = fq(q);
        for (wp, n) in pairs(&f, if q == 8 { 2 } else { 4 }) {
            let c = census(&wp, n).unwrap();
            for e in &c.entries {
                let constant = e.class.a.deg().map_or(true, |d| d == 0);
                assert_eq!(e.count_mod_p, u32::from(constant), "q={q} ℘={wp} n={n} a={} b={}", e.class.a, e.class.b);
            }
            // Every constant a with every b appears with count 1.
            for a in f.elements() {
                for b in f.units() {
                    assert_eq!(c.count(&PolyA::constant(&f, a), b), 1, "q={q} ℘={wp} n={n} a={a} b={b}");
                }
            }
        }
    }
}

#[test]
fn scaling_bijection_on_every_weil_class() {
    for q in [3u64, 4, 5] {
        let f = fq(q);
        for (wp, n) in pairs(&f, 3) {
            let c = census(&wp, n).unwrap();
            for e in &c.entries {
                for s in f.units() {
                    let img = c.count(&e.class.a.scale(s), f.mul(f.mul(s, s), e.class.b));
                    assert_eq!(img, e.count_mod_p, "q={q} ℘={wp} n={n} a={} b={} c={s}", e.class.a, e.class.b);
                }
            }
        }
    }
}

#[test]
fn census_rows_are_sorted_and_deterministic() {
    let f = fq(3);
    let wp = PolyA::parse(&f, "T^2+1").unwrap();
    let rows = census(&wp, 1).unwrap().to_csv_rows();
    let again = census(&wp, 1).unwrap().to_csv_rows();
    assert_eq!(rows, again);
    let cases: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    let mut sorted = cases.clone();
    sorted.sort();
    assert_eq!(cases, sorted);
}
