use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use recdioph::bigseq::{growth_bounds_hold, BinaryRecurrence, Family};
use recdioph::certreal::{CertifiedReal, PrecisionPolicy, RealExpr};
use recdioph::contfrac;
use recdioph::linforms::{matveev_coefficient, MatveevInput};
use recdioph::reduction::{omega_bound, ReductionProblem};
use recdioph::solver::{
    self, certify, enumerate_solutions, naive_solutions, CertificationReport, Equation,
    PipelineConfig, StageDetails,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn bits() -> impl Strategy<Value = u32> {
    prop_oneof![Just(24u32), Just(53), Just(128), Just(256)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn arithmetic_contains_exact_result(
        an in -10_000i64..10_000, ad in 1i64..10_000,
        bn in -10_000i64..10_000, bd in 1i64..10_000,
        bits in bits(),
    ) {
        let (a, b) = (rat(an, ad), rat(bn, bd));
        let (x, y) = (CertifiedReal::from_rational(&a, bits), CertifiedReal::from_rational(&b, bits));
        prop_assert!(x.contains_rational(&a));
        prop_assert!(x.add(&y).contains_rational(&(&a + &b)));
        prop_assert!(x.sub(&y).contains_rational(&(&a - &b)));
        prop_assert!(x.mul(&y).contains_rational(&(&a * &b)));
        prop_assert!(x.mul_int(&BigInt::from(bn)).contains_rational(&(&a * BigRational::from_integer(bn.into()))));
        if bn != 0 {
            prop_assert!(x.div(&y).unwrap().contains_rational(&(&a / &b)));
            prop_assert!(y.powi(-3).unwrap().contains_rational(&(b.recip() * b.recip() * b.recip())));
        }
        prop_assert!(x.powi(3).unwrap().contains_rational(&(&a * &a * &a)));
    }

    #[test]
    fn transcendental_enclosures_are_consistent(
        an in 1i64..100_000, ad in 1i64..100_000,
        bn in 1i64..100_000, bd in 1i64..100_000,
        bits in bits(),
    ) {
        let (a, b) = (rat(an, ad), rat(bn, bd));
        let (x, y) = (CertifiedReal::from_rational(&a, bits), CertifiedReal::from_rational(&b, bits));
        // log(ab) = log a + log b
        let lhs = x.mul(&y).ln().unwrap();
        let rhs = x.ln().unwrap().add(&y.ln().unwrap());
        prop_assert!(lhs.overlaps(&rhs));
        // a higher-precision enclosure sits inside or overlaps the lower one
        let fine = CertifiedReal::from_rational(&a, bits * 4).ln().unwrap();
        prop_assert!(fine.overlaps(&x.ln().unwrap()));
        // sqrt(a)^2 contains a
        let s = x.sqrt().unwrap();
        prop_assert!(s.mul(&s).contains_rational(&a));
        // ln agrees with f64 where f64 is meaningful
        let f = (an as f64 / ad as f64).ln();
        let l = x.ln().unwrap();
        prop_assert!((l.to_f64() - f).abs() <= 1e-6 * (1.0 + f.abs()));
    }

    #[test]
    fn nearest_integer_distance_contains_exact(n in -1_000_000i64..1_000_000, d in 1i64..1000, bits in bits()) {
        let r = rat(n, d);
        let x = CertifiedReal::from_rational(&r, bits);
        let fl = r.floor();
        let frac = &r - &fl;
        let dist = if frac > rat(1, 2) { rat(1, 1) - frac } else { frac };
        prop_assert!(x.nearest_integer_distance().contains_rational(&dist));
    }

    #[test]
    fn sqrt_expansion_matches_integer_algorithm(d in 2u64..5000, count in 1usize..40) {
        let r = (d as f64).sqrt().floor() as u64;
        prop_assume!(r * r != d && (r + 1) * (r + 1) != d);
        let x = RealExpr::parse(&format!("sqrt({d})")).unwrap();
        let table = contfrac::expand(&x, count, &PrecisionPolicy::default()).unwrap();
        table.check_invariants().unwrap();
        // periodic expansion of sqrt(d) by exact integer steps
        let (mut m, mut den, mut a) = (0i64, 1i64, r as i64);
        let mut expected = vec![BigInt::from(a)];
        for _ in 0..count {
            m = den * a - m;
            den = (d as i64 - m * m) / den;
            a = (r as i64 + m) / den;
            expected.push(BigInt::from(a));
        }
        prop_assert_eq!(table.quotients(), &expected[..]);
    }

    #[test]
    fn log_ratio_tables_satisfy_invariants(p in 2u32..50, q in 2u32..50, count in 1usize..30) {
        prop_assume!(p != q);
        // p and q multiplicatively independent enough to keep the ratio irrational
        prop_assume!(!(1..6).any(|i| (1..6).any(|j| (p as u64).pow(i) == (q as u64).pow(j))));
        let x = RealExpr::parse(&format!("log({p})/log({q})")).unwrap();
        let table = contfrac::expand(&x, count, &PrecisionPolicy::default()).unwrap();
        table.check_invariants().unwrap();
        for i in 0..table.len() {
            let (pi, qi) = &table.convergents()[i];
            prop_assert_eq!(num_integer::Integer::gcd(pi, qi), BigInt::from(1));
            // a convergent followed by a_{i+1} ≥ 2 has |x − p/q| < 1/(q q') ≤ 1/(2q²)
            if i >= 1 && i + 1 < table.len() && table.quotients()[i + 1] >= BigInt::from(2) {
                let got = contfrac::legendre_is_convergent(pi, qi, &x, &PrecisionPolicy::default()).unwrap();
                prop_assert!(got, "p_{}/q_{} rejected", i, i);
            }
        }
    }

    #[test]
    fn omega_bound_is_antitone_in_epsilon(e1 in 1i64..1_000_000, e2 in 1i64..1_000_000, qn in 7u64..1_000_000_000) {
        let prob = ReductionProblem::new(
            RealExpr::parse("log(phi)/log(2)").unwrap(),
            RealExpr::parse("log(3)/log(2)").unwrap(),
            RealExpr::int(26),
            RealExpr::int(2),
            BigInt::from(1),
        ).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let q = BigInt::from(qn);
        let w_lo = omega_bound(&prob, &q, &CertifiedReal::from_rational(&rat(lo, 1_000_000), 128), 128).unwrap();
        let w_hi = omega_bound(&prob, &q, &CertifiedReal::from_rational(&rat(hi, 1_000_000), 128), 128).unwrap();
        prop_assert!(w_hi <= w_lo);
    }

    #[test]
    fn matveev_is_monotone_in_each_a(a in prop::collection::vec(16u32..500, 3), i in 0usize..3, bump in 1u32..100) {
        let exprs = |v: &[u32]| v.iter().map(|x| RealExpr::ratio(*x, 100)).collect::<Vec<_>>();
        let mut bigger = a.clone();
        bigger[i] += bump;
        let p = PrecisionPolicy::default();
        let c = matveev_coefficient(&MatveevInput::new(3, 2, exprs(&a)), &p).unwrap().c_interval;
        let c2 = matveev_coefficient(&MatveevInput::new(3, 2, exprs(&bigger)), &p).unwrap().c_interval;
        prop_assert_eq!(c.lt(&c2), Some(true));
    }
}

#[test]
fn binet_matches_recurrence_up_to_60() {
    for rec in [BinaryRecurrence::lucas(), BinaryRecurrence::jacobsthal()] {
        for n in 0..=60u32 {
            assert_eq!(
                rec.binet_exact(n),
                BigRational::from_integer(rec.term(n as u64)),
                "{} n={n}",
                rec.name()
            );
        }
    }
}

#[test]
fn jacobsthal_closed_form() {
    let j = BinaryRecurrence::jacobsthal();
    for n in 0..=60u32 {
        let two_n = BigInt::from(1) << n;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(j.term(n as u64), (two_n - sign) / 3);
    }
}

proptest! {
    #[test]
    fn recurrence_holds_at_random_indices(n in 2u64..10_000) {
        for rec in [BinaryRecurrence::lucas(), BinaryRecurrence::jacobsthal()] {
            let t = rec.terms(n);
            let (p, q) = (BigInt::from(rec.p()), BigInt::from(rec.q()));
            let i = n as usize;
            prop_assert_eq!(&t[i], &(&p * &t[i - 1] + &q * &t[i - 2]));
        }
    }
}

#[test]
fn growth_bounds_up_to_500() {
    for f in [Family::Lucas, Family::Jacobsthal] {
        for n in 1..=500 {
            assert!(growth_bounds_hold(f, n).unwrap(), "{f} n={n}");
        }
    }
}

#[test]
fn terms_up_to_value_is_exact() {
    for rec in [BinaryRecurrence::lucas(), BinaryRecurrence::jacobsthal()] {
        for bound in 0..300i64 {
            let b = BigInt::from(bound);
            let got = rec.terms_up_to_value(&b);
            let want: Vec<_> = rec.iter().take(20).filter(|(_, v)| v <= &b).collect();
            assert_eq!(got, want, "{} bound={bound}", rec.name());
        }
    }
}

#[test]
fn search_agrees_with_naive_loop() {
    for eq in [Equation::JjL, Equation::LlJ] {
        let (u, v) = eq.families();
        let (u, v) = (u.recurrence(), v.recurrence());
        for n_max in [0u64, 1, 2, 5, 13, 31, 60] {
            let fast = enumerate_solutions(&u, &v, n_max);
            let mut slow = naive_solutions(&u, &v, n_max, 2 * n_max + 10);
            slow.sort();
            assert_eq!(fast, slow, "{eq} n_max={n_max}");
        }
    }
}

#[test]
fn powers_of_two_in_lucas() {
    let l = BinaryRecurrence::lucas();
    assert_eq!(
        solver::power_of_two_targets(&l, 200),
        vec![(1, 0), (0, 1), (3, 2)]
    );
}

/// Everything in a report that is a conclusion rather than a measurement.
fn conclusions(r: &CertificationReport) -> serde_json::Value {
    let stages: Vec<_> = r
        .stages
        .iter()
        .map(|s| {
            let detail = match &s.details {
                Some(StageDetails::Reduction(x)) => serde_json::json!({
                    "q": x.q, "omega_bound": x.omega_bound, "status": x.status, "ceiling": x.ceiling,
                    "epsilon": x.epsilon.as_ref().map(|e| format!("{:.12}", e.mid_f64())),
                }),
                Some(StageDetails::Sweep(x)) => serde_json::json!({
                    "min_at": x.min_epsilon_at, "worst": x.worst_omega_bound, "n_ceiling": x.n_ceiling,
                    "nonpositive": x.nonpositive,
                    "omegas": x.shifts.iter().map(|s| s.omega_bound).collect::<Vec<_>>(),
                }),
                Some(StageDetails::Matveev(x)) => serde_json::json!({
                    "multiplier": x.multiplier, "c": format!("{:.12e}", x.c.mid_f64()),
                }),
                Some(StageDetails::GlobalBound(x)) => serde_json::json!({ "bound": x.bound, "least": x.least }),
                Some(other) => serde_json::to_value(other).unwrap(),
                None => serde_json::Value::Null,
            };
            serde_json::json!({ "name": s.name, "status": s.status, "detail": detail })
        })
        .collect();
    serde_json::json!({
        "solutions": r.solutions, "ceilings": r.ceilings, "verdict": r.verdict, "stages": stages,
    })
}

#[test]
fn reports_are_deterministic() {
    for eq in [Equation::JjL, Equation::LlJ] {
        let base = PipelineConfig {
            jobs: 1,
            ..PipelineConfig::default()
        };
        let one = certify(eq, &base);
        let four = certify(
            eq,
            &PipelineConfig {
                jobs: 4,
                ..base.clone()
            },
        );
        assert_eq!(
            one.without_timings(),
            four.without_timings(),
            "{eq}: jobs 1 vs 4"
        );
        let again = certify(eq, &base);
        assert_eq!(
            one.without_timings(),
            again.without_timings(),
            "{eq}: repeat"
        );
        let doubled = certify(
            eq,
            &PipelineConfig {
                policy: base.policy.doubled(),
                ..base.clone()
            },
        );
        assert_eq!(
            conclusions(&one),
            conclusions(&doubled),
            "{eq}: doubled precision"
        );
    }
}
