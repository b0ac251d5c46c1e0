//! Acceptance run: one line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use freechi::analytic::*;
use freechi::free_moments::{poly_cumulants, FreeFamily, PolySpec};
use freechi::infdiv::{fid_check, fid_witness_moments};
use freechi::laws::{noncentral_chi_square_oracle, symmetric_bernoulli_moments, to_cumulants, LawSpec};
use freechi::partitions::*;
use freechi::quadratic_forms::*;
use freechi::rational::{format_rational, int, powi, rat, to_f64, Rational};
use freechi::series::{add_free, moments_from_cumulants};
use freechi::CumulantSeq;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

struct Criterion {
    id: usize,
    name: &'static str,
    tolerance: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "semicircle baseline K_r(Q_n) = (n-1)s^2r",
            tolerance: "exact",
            limit: Some(Duration::from_secs(1)),
            run: c1,
        },
        Criterion {
            id: 2,
            name: "sample variance: brute force = iid formula = closed form",
            tolerance: "exact",
            limit: Some(Duration::from_secs(60)),
            run: c2,
        },
        Criterion {
            id: 3,
            name: "odd law gives K_r(Q_n) = n-1",
            tolerance: "exact",
            limit: None,
            run: c3,
        },
        Criterion {
            id: 4,
            name: "K4 / K6 perturbations break the chi-square law",
            tolerance: "exact",
            limit: None,
            run: c4,
        },
        Criterion {
            id: 5,
            name: "c_n anchor values",
            tolerance: "exact",
            limit: None,
            run: c5,
        },
        Criterion {
            id: 6,
            name: "free chi-square model and semigroup",
            tolerance: "exact",
            limit: None,
            run: c6,
        },
        Criterion {
            id: 7,
            name: "partition layer suite",
            tolerance: "exact",
            limit: Some(Duration::from_secs(30)),
            run: c7,
        },
        Criterion {
            id: 8,
            name: "E_D lemmas (i) and (ii)",
            tolerance: "exact",
            limit: None,
            run: c8,
        },
        Criterion {
            id: 9,
            name: "R-cyclicity with negative control",
            tolerance: "exact",
            limit: None,
            run: c9,
        },
        Criterion {
            id: 10,
            name: "compression corollary",
            tolerance: "exact",
            limit: None,
            run: c10,
        },
        Criterion {
            id: 11,
            name: "FID preservation and Hankel checks",
            tolerance: "exact",
            limit: None,
            run: c11,
        },
        Criterion {
            id: 12,
            name: "analytic cross-checks",
            tolerance: "abs/rel 1e-6",
            limit: None,
            run: c12,
        },
    ];
    println!(
        "backend: {} ({} threads)",
        freechi::exec::backend_name(),
        freechi::exec::current_threads()
    );
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let over = c.limit.filter(|&l| elapsed > l);
        let budget = c.limit.map(|l| format!(" < {}s", l.as_secs())).unwrap_or_default();
        let (status, detail) = match (&outcome, over) {
            (Ok(d), None) => ("PASS", d.clone()),
            (Ok(d), Some(l)) => ("FAIL", format!("{d}; over the {}s budget", l.as_secs())),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "{status} C{:<2} {} [tol {}; {:.2}s{budget}] {detail}",
            c.id,
            c.name,
            c.tolerance,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn semicircle(sigma2: Rational, order: usize) -> CumulantSeq {
    to_cumulants(&LawSpec::semicircle(sigma2), order).unwrap()
}

fn c1() -> Check {
    let mut count = 0;
    for n in 2..=4usize {
        for s2 in [int(1), rat(3, 2)] {
            let k = semicircle(s2.clone(), 10);
            for r in 1..=5 {
                let got = sample_variance_cumulant(&k, n, r).map_err(e)?;
                let want = int(n as i64 - 1) * powi(&s2, r as i64);
                ensure(got == want, || format!("n={n} s2={s2} r={r}: {got} != {want}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} identities"))
}

fn c2() -> Check {
    let mut g = rng(1001);
    let mut count = 0;
    for n in 2..=3 {
        for _ in 0..3 {
            let k = rand_even_law(&mut g, 8);
            let q = PolySpec::sample_variance(n).map_err(e)?;
            let brute = poly_cumulants(&q, &FreeFamily::iid(k.clone(), n), 4).map_err(e)?;
            let a = RationalMatrix::sample_variance(n);
            for r in 1..=4 {
                let b = brute.k(r).map_err(e)?.clone();
                let iid = quad_cumulant_iid(&a, &k, r).map_err(e)?;
                let closed = sample_variance_cumulant(&k, n, r).map_err(e)?;
                ensure(b == iid && iid == closed, || {
                    format!("n={n} r={r}: brute {b}, iid {iid}, closed {closed}")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} triples"))
}

fn c3() -> Check {
    let mut g = rng(1003);
    let mut count = 0;
    for n in 2..=3 {
        for _ in 0..2 {
            let odd = [3, 5, 7].into_iter().map(|r| (r, rand_nonzero(&mut g))).collect();
            let k = to_cumulants(&LawSpec::Odd { k2: int(1), odd }, 8).map_err(e)?;
            let q = PolySpec::sample_variance(n).map_err(e)?;
            let brute = poly_cumulants(&q, &FreeFamily::iid(k, n), 4).map_err(e)?;
            for r in 1..=4 {
                let v = brute.k(r).map_err(e)?;
                ensure(*v == int(n as i64 - 1), || format!("n={n} r={r}: {v}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} brute-force cumulants equal n-1"))
}

fn c4() -> Check {
    let mut g = rng(1004);
    let mut count = 0;
    for n in 2..=4usize {
        let nn = int(n as i64);
        let q = PolySpec::sample_variance(n).map_err(e)?;
        let c = rand_nonzero(&mut g);
        let k4 = CumulantSeq::new(vec![int(0), int(1), int(0), c.clone()]).map_err(e)?;
        let brute = poly_cumulants(&q, &FreeFamily::iid(k4, n), 2).map_err(e)?;
        let diff = brute.k(2).map_err(e)? - (&nn - int(1));
        let want = powi(&(&nn - int(1)), 2) / &nn * &c;
        ensure(diff == want && !diff.is_zero(), || {
            format!("K4 n={n}: {diff} != {want}")
        })?;

        let k6 = CumulantSeq::new(vec![int(0), int(1), int(0), int(0), int(0), c.clone()]).map_err(e)?;
        let brute = poly_cumulants(&q, &FreeFamily::iid(k6, n), 3).map_err(e)?;
        let diff = brute.k(3).map_err(e)? - (&nn - int(1));
        let want = powi(&(&nn - int(1)), 3) / (&nn * &nn) * &c;
        ensure(diff == want && !diff.is_zero(), || {
            format!("K6 n={n}: {diff} != {want}")
        })?;
        count += 2;
    }
    Ok(format!("{count} brute-force deviations"))
}

fn c5() -> Check {
    let mut count = 0;
    for r in 1..=4 {
        for n in 1..=4usize {
            let nn = int(n as i64);
            let special = coefficient_cn(&pispecial(r), n).map_err(e)?;
            ensure(special == &nn - int(1), || format!("special r={r} n={n}: {special}"))?;
            let top = coefficient_cn(&Partition::one(2 * r), n).map_err(e)?;
            let want = powi(&(&nn - int(1)), r as i64) / powi(&nn, r as i64 - 1);
            ensure(top == want, || format!("top r={r} n={n}: {top} != {want}"))?;
            count += 2;
        }
    }
    Ok(format!("{count} coefficients"))
}

fn c6() -> Check {
    let cases: Vec<Vec<Rational>> = vec![
        vec![int(0)],
        vec![int(1)],
        vec![rat(-2, 3)],
        vec![int(1), int(0)],
        vec![rat(1, 2), rat(-3, 4)],
        vec![int(2), int(1)],
    ];
    let mut count = 0;
    for shifts in &cases {
        let n = shifts.len();
        let delta: Rational = shifts.iter().map(|m| m * m).sum();
        let oracle = noncentral_chi_square_oracle(n, &int(1), shifts, 3).map_err(e)?;
        let model = to_cumulants(
            &LawSpec::ChiSquare {
                n: n as u32,
                sigma2: int(1),
                delta: delta.clone(),
            },
            3,
        )
        .map_err(e)?;
        for r in 1..=3usize {
            let closed = int(n as i64) + &delta * int(r as i64) * powi(&int(2), r as i64 - 1);
            let (o, m) = (oracle.k(r).map_err(e)?, model.k(r).map_err(e)?);
            ensure(*o == closed && *m == closed, || {
                format!("shifts {shifts:?} r={r}: oracle {o}, model {m}, closed {closed}")
            })?;
            count += 1;
        }
    }
    let mut g = rng(1006);
    for _ in 0..6 {
        let s2 = rand_positive(&mut g);
        let (n1, n2) = (g.random_range(1..=4), g.random_range(1..=4));
        let (d1, d2) = (rand_positive(&mut g), rand_positive(&mut g));
        for order in 1..=8 {
            let chi = |n, d: &Rational| {
                to_cumulants(
                    &LawSpec::ChiSquare {
                        n,
                        sigma2: s2.clone(),
                        delta: d.clone(),
                    },
                    order,
                )
            };
            let sum = add_free(&chi(n1, &d1).map_err(e)?, &chi(n2, &d2).map_err(e)?).map_err(e)?;
            ensure(sum == chi(n1 + n2, &(&d1 + &d2)).map_err(e)?, || {
                format!("semigroup order {order}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} identities"))
}

fn c7() -> Check {
    for n in 1..=10 {
        let count = enumerate_nc(n).map_err(e)?.len() as u128;
        let oracle = nc_oracle(n).len() as u128;
        ensure(count == catalan(n) && oracle == count, || {
            format!("NC({n}) = {count}, oracle {oracle}")
        })?;
    }
    for n in 1..=8 {
        for p in enumerate_nc(n).map_err(e)? {
            let r = kreweras_right(&p).map_err(e)?;
            let l = kreweras_left(&p).map_err(e)?;
            ensure(
                r.num_blocks() == n + 1 - p.num_blocks() && l.num_blocks() == n + 1 - p.num_blocks(),
                || format!("cardinality {p}"),
            )?;
            ensure(kreweras_right(&l).map_err(e)? == p, || format!("inverse {p}"))?;
        }
    }
    for n in 1..=7 {
        for p in enumerate_nc(n).map_err(e)? {
            let last = p.block_of(n).unwrap().to_vec();
            let mut pieces = Vec::new();
            let mut lo = 1;
            for &j in &last {
                let elems: Vec<usize> = (lo..j).collect();
                pieces.push(kreweras_extended(&p.restrict(&elems)).map_err(e)?);
                lo = j + 1;
            }
            ensure(kreweras_left(&p).map_err(e)? == Partition::concat(&pieces), || {
                format!("concatenation {p}")
            })?;
        }
    }
    for r in 1..=5 {
        let mut interval = 0u128;
        let mut pairs = Vec::new();
        for p in enumerate_nc(2 * r).map_err(e)? {
            let joins = joins_to_one(&p, &onetwo(r)).map_err(e)?;
            if r <= 4 && p.is_even() {
                let above = pispecial(r).leq(&p).map_err(e)?;
                ensure(joins == above, || format!("even lemma {p}"))?;
                interval += above as u128;
            }
            if p.is_pairing() && joins {
                pairs.push(p);
            }
        }
        ensure(r > 4 || interval == catalan(r), || {
            format!("interval size r={r}: {interval}")
        })?;
        ensure(pairs == vec![pispecial(r)], || {
            format!("pair partitions r={r}: {pairs:?}")
        })?;
    }
    Ok("Catalan n<=10, Kreweras n<=8, concatenation n<=7, even lemma r<=4, pair corollary r<=5".into())
}

fn c8() -> Check {
    let mut g = rng(1008);
    for t in 0..20 {
        let n = 1 + t % 3;
        let r = 1 + t % 4;
        let mats: Vec<RationalMatrix> = (0..=r).map(|_| rand_matrix(&mut g, n)).collect();
        // (i) Σᵢ EᵢA₁Eᵢ⋯A_rEᵢ = Π E_D(A_m), with explicit unit matrices
        let mut lhs = RationalMatrix::zeros(n);
        for i in 0..n {
            let mut rows = vec![vec![Rational::zero(); n]; n];
            rows[i][i] = Rational::one();
            let unit = RationalMatrix::from_rows(rows).map_err(e)?;
            let mut prod = unit.clone();
            for a in &mats[..r] {
                prod = prod.mul(a).map_err(e)?.mul(&unit).map_err(e)?;
            }
            lhs = RationalMatrix::from_rows(
                (1..=n)
                    .map(|x| (1..=n).map(|y| lhs.get(x, y) + prod.get(x, y)).collect())
                    .collect(),
            )
            .map_err(e)?;
        }
        let mut rhs = RationalMatrix::identity(n);
        for a in &mats[..r] {
            rhs = rhs.mul(&e_d(a).to_matrix()).map_err(e)?;
        }
        ensure(lhs == rhs, || format!("part (i) tuple {t}"))?;
        // (ii) nested E_D against the raw index sum, every π ∈ NC(r)
        for p in enumerate_nc(r).map_err(e)? {
            let nested = e_d_nested(&p, &mats).map_err(e)?;
            ensure(nested.entries() == diag_of(&index_nested(&p, &mats)).as_slice(), || {
                format!("part (ii) tuple {t}, {p}")
            })?;
        }
    }
    Ok("20 tuples, r<=4, n<=3".into())
}

fn c9() -> Check {
    let mut g = rng(1009);
    let mut checked = 0;
    for n in 1..=3 {
        let a = rand_matrix(&mut g, n);
        let k = rand_even_law(&mut g, 6);
        let report = r_cyclicity_check(&a, &k, 3).map_err(e)?;
        ensure(report.cyclic, || format!("n={n}: {:?}", report.violation))?;
        checked += report.checked;
    }
    let a = rand_symmetric(&mut g, 2);
    let mut skew = rand_even_law(&mut g, 6).into_vec();
    skew[2] = rat(1, 2);
    let report = r_cyclicity_check(&a, &CumulantSeq::new(skew).map_err(e)?, 3).map_err(e)?;
    let (tuple, value) = report.violation.ok_or("negative control produced no violation")?;
    Ok(format!(
        "{checked} non-cyclic cumulants vanish; control {tuple:?} = {value}"
    ))
}

fn c10() -> Check {
    let mut g = rng(1010);
    for n in [2, 3, 5] {
        for _ in 0..3 {
            let k = rand_even_law(&mut g, 10);
            ensure(compression_corollary_check(&k, n, 5).map_err(e)?, || format!("n={n}"))?;
        }
    }
    Ok("9 laws, r<=5".into())
}

fn c11() -> Check {
    let mut g = rng(1011);
    for n in 1..=3 {
        let a = rand_symmetric(&mut g, n);
        let lambda = rand_positive(&mut g);
        let kc = to_cumulants(
            &LawSpec::CompoundPoisson {
                lambda,
                jump_moments: symmetric_bernoulli_moments(10),
            },
            10,
        )
        .map_err(e)?;
        let witness = fid_witness_moments(&a, &kc, 5).map_err(e)?;
        let laws = vec![kc.clone(); n];
        for r in 1..=5 {
            let direct = quad_cumulant_even_family(&a, &laws, r).map_err(e)?;
            ensure(direct == witness[r - 1], || format!("witness n={n} r={r}"))?;
        }
        let v = fid_check(&CumulantSeq::new(witness).map_err(e)?).map_err(e)?;
        ensure(v.fid_consistent, || {
            format!("Hankel failed for T_n, n={n}, minor {:?}", v.violating_minor)
        })?;
    }
    let fam = FreeFamily::iid(semicircle(int(1), 12), 2);
    let comm = poly_cumulants(&PolySpec::commutator(), &fam, 6).map_err(e)?;
    let v = fid_check(&comm).map_err(e)?;
    ensure(v.fid_consistent, || "commutator violates".into())?;
    let eps = rat(1, 4);
    let odd = to_cumulants(
        &LawSpec::Odd {
            k2: int(1),
            odd: [(3, eps.clone())].into_iter().collect(),
        },
        6,
    )
    .map_err(e)?;
    let v = fid_check(&odd).map_err(e)?;
    let want = -(&eps * &eps);
    ensure(
        !v.fid_consistent && v.violating_minor == Some(1) && v.minor_value.as_ref() == Some(&want),
        || format!("epsilon law: {v:?}"),
    )?;
    Ok(format!(
        "witness n<=3 r<=5; commutator {}; epsilon minor {}",
        v_label(&comm),
        format_rational(&want)
    ))
}

fn v_label(k: &CumulantSeq) -> String {
    fid_check(k).map(|v| v.label()).unwrap_or_default()
}

fn c12() -> Check {
    let tol = 1e-6;
    let close = |got: f64, want: f64| (got - want).abs() <= tol * want.abs().max(1.0);
    let mut worst = 0f64;
    let mut tables = vec![(semicircle_table(1.0, 4001), semicircle(int(1), 8))];
    for (l, a) in [(int(1), int(1)), (int(2), int(1)), (rat(1, 2), int(3))] {
        let k = to_cumulants(
            &LawSpec::FreePoisson {
                lambda: l.clone(),
                alpha: a.clone(),
            },
            8,
        )
        .map_err(e)?;
        tables.push((mp_table(to_f64(&l), to_f64(&a), 4001), k));
    }
    for (t, k) in &tables {
        let m = moments_from_cumulants(k);
        for j in 0..=8u32 {
            let want = to_f64(&m.m(j as usize).map_err(e)?);
            let got = density_moment_check(t, j);
            worst = worst.max((got - want).abs() / want.abs().max(1.0));
            ensure(close(got, want), || format!("moment {j}: {got} vs {want}"))?;
        }
    }
    let m = moments_from_cumulants(&semicircle(int(1), 40));
    for radius in [3.0, 5.0] {
        for s in 0..12 {
            let z = Complex64::from_polar(radius, 0.05 + s as f64 * std::f64::consts::PI / 6.0);
            let series = cauchy_series_eval(&m, z, 40).map_err(e)?;
            let closed = semicircle_cauchy(z, 1.0);
            let rel = (series - closed).norm() / closed.norm();
            worst = worst.max(rel);
            ensure(rel <= tol, || format!("Cauchy at {z}: rel {rel:e}"))?;
        }
    }
    Ok(format!("worst deviation {worst:.1e}"))
}
