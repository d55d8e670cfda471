use dmf_core::polyring::monic_irreducibles;
use dmf_core::traces::{char2_power_weight_trace, trace_auto, trace_general, within_strong_bound, TraceQuery};
use dmf_core::{FieldDesc, PolyA};

fn fq(q: u64) -> FieldDesc {
    FieldDesc::from_order(q).unwrap()
}

fn general(wp: &PolyA, n: u32, k: u64, l: i64) -> PolyA {
    let qy = TraceQuery::new(wp, n, k, l).unwrap().with_cap(8);
    let g = trace_general(&qy).unwrap().value;
    assert_eq!(trace_auto(&qy).unwrap().value, g, "℘={wp} n={n} k={k} l={l}");
    g
}

/// (℘, n) with n·deg ℘ <= 2 over F_q.
fn small_pairs(f: &FieldDesc) -> Vec<(PolyA, u32)> {
    let lin = monic_irreducibles(f, 1);
    let quad = monic_irreducibles(f, 2);
    vec![(lin[0].clone(), 1), (lin[1].clone(), 1), (lin[1].clone(), 2), (quad[0].clone(), 1)]
}

/// Σ_{j<m} ℘^{2^{s−1} q^j n}.
fn power_sum(wp: &PolyA, n: u32, q: u64, s: u32, m: u32) -> PolyA {
    (0..m).fold(PolyA::zero(wp.field()), |acc, j| acc.add(&wp.pow((1u64 << (s - 1)) * q.pow(j) * n as u64)))
}

fn delta_q2(f: &FieldDesc, q: u64) -> PolyA {
    if q == 2 {
        PolyA::one(f)
    } else {
        PolyA::zero(f)
    }
}

#[test]
fn two_power_weights_in_even_characteristic() {
    for (q, r, max_m) in [(2u64, 1u32, 4u32), (4, 2, 2), (8, 3, 1)] {
        let f = fq(q);
        let one = PolyA::one(&f);
        let zero = PolyA::zero(&f);
        for (wp, n) in small_pairs(&f) {
            for s in 1..=r {
                let two_s = 1u64 << s;
                for m in 0..=max_m {
                    let qm = q.pow(m);
                    // Weight 2^s q^m + 1 with l = 2^{r−1}·weight.
                    let w = two_s * qm + 1;
                    if w >= 2 {
                        let l = ((1u64 << (r - 1)) * w) as i64;
                        let want = if (l - 1) % (q as i64 - 1) == 0 { one.clone() } else { zero.clone() };
                        assert_eq!(general(&wp, n, w, l), want, "part 1 q={q} ℘={wp} n={n} s={s} m={m}");
                    }
                    // Weight 2^s q^m with l = 2^{s−1}.
                    let w = two_s * qm;
                    if w >= 2 {
                        let want = char2_power_weight_trace(&wp, n, s, m).unwrap();
                        assert_eq!(general(&wp, n, w, 1 << (s - 1)), want, "part 2 q={q} ℘={wp} n={n} s={s} m={m}");
                    }
                    // Weight 2^s q^m + 2 with l = 2^{s−1} + 1.
                    let w = two_s * qm + 2;
                    let want = delta_q2(&f, q).add(&power_sum(&wp, n, q, s, m));
                    assert_eq!(general(&wp, n, w, (1 << (s - 1)) + 1), want, "part 3 q={q} ℘={wp} n={n} s={s} m={m}");
                    // Weight 2^{s+1} q^m + 2^s q^m + 1 with l = 2^{r−1}·weight.
                    let w = 3 * two_s * qm + 1;
                    if w <= 400 {
                        let l = ((1u64 << (r - 1)) * w) as i64;
                        let want = if s == r {
                            delta_q2(&f, q).add(&wp.pow(q.pow(m + 1) * n as u64))
                        } else {
                            zero.clone()
                        };
                        assert_eq!(general(&wp, n, w, l), want, "part 4 q={q} ℘={wp} n={n} s={s} m={m}");
                    }
                }
            }
        }
    }
}

#[test]
fn power_weight_trace_matches_its_scaled_definition() {
    let f = fq(4);
    let wp = PolyA::parse(&f, "T+1").unwrap();
    let t = char2_power_weight_trace(&wp, 2, 1, 3).unwrap();
    assert_eq!(t.mul(&wp.pow(2)), power_sum(&wp, 2, 4, 1, 3));
    assert!(char2_power_weight_trace(&wp, 1, 3, 1).is_err());
    assert!(char2_power_weight_trace(&PolyA::t(&fq(3)), 1, 1, 1).is_err());
}

#[test]
fn strong_bound_first_attained_at_the_critical_weight() {
    for q in [3u64, 4, 5, 7] {
        let f = fq(q);
        for wp in monic_irreducibles(&f, 1).iter().take(2) {
            for l in 1..q as i64 {
                let k0 = q - 1 + 2 * q * (l as u64 - 1);
                let attains = |k: u64| {
                    let qy = TraceQuery::new(wp, 1, k, l).unwrap();
                    if !qy.admissible() {
                        return false;
                    }
                    let tr = trace_auto(&qy).unwrap().value;
                    assert!(within_strong_bound(&tr, 1, k, q), "q={q} ℘={wp} k={k} l={l}");
                    tr.deg().is_some_and(|d| 2 * d as i64 == k as i64 - (q as i64 + 1))
                };
                assert!(attains(k0 + 2), "q={q} ℘={wp} l={l} k0={k0}");
                for k in 2..k0 + 2 {
                    assert!(!attains(k), "q={q} ℘={wp} l={l}: attained early at k={k}");
                }
            }
        }
    }
}

#[test]
fn strong_bound_holds_in_the_known_ranges() {
    // n·deg ℘ <= 3 in odd characteristic.
    for q in [3u64, 5] {
        let f = fq(q);
        let mut cases: Vec<(PolyA, u32)> = Vec::new();
        for d in 1..=3usize {
            let wp = monic_irreducibles(&f, d)[0].clone();
            for n in 1..=(3 / d) as u32 {
                cases.push((wp.clone(), n));
            }
        }
        for (wp, n) in cases {
            let nd = n * wp.deg().unwrap() as u32;
            for k in 2..=6 * q {
                for l in 0..(q - 1) as i64 {
                    let qy = TraceQuery::new(&wp, n, k, l).unwrap();
                    if !qy.admissible() {
                        continue;
                    }
                    let tr = trace_auto(&qy).unwrap().value;
                    assert!(within_strong_bound(&tr, nd, k, q), "q={q} ℘={wp} n={n} k={k} l={l}: {tr}");
                }
            }
        }
    }
    // Any ℘ⁿ in even characteristic.
    for q in [2u64, 4] {
        let f = fq(q);
        for (d, n) in [(1usize, 1u32), (1, 3), (2, 2), (3, 1), (4, 1)] {
            let wp = monic_irreducibles(&f, d)[0].clone();
            if n as usize * d > 4 && q == 4 {
                continue;
            }
            for k in 2..=8 * q {
                for l in 0..(q - 1).max(1) as i64 {
                    let qy = TraceQuery::new(&wp, n, k, l).unwrap();
                    if !qy.admissible() {
                        continue;
                    }
                    let tr = trace_auto(&qy).unwrap().value;
                    assert!(within_strong_bound(&tr, n * d as u32, k, q), "q={q} ℘={wp} n={n} k={k} l={l}: {tr}");
                }
            }
        }
    }
}
