//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wblow::blowup::{check_centre, check_lift, pullback_polyvector, WitnessTag};
use wblow::centre::Centre;
use wblow::classify::normal_form::{verify_normal_form, NormalForm};
use wblow::classify::{classify_surface, detect_duval_point, detect_nonnilpotent_point, milnor_number, Milnor, SingularityClass, DEFAULT_CAP};
use wblow::corpus::{random_centre, random_polyvector, WHITNEY_SIGMA};
use wblow::exec::Exec;
use wblow::invariant::{canonical_numerics, enumerate_valid, lex_compare, max_monomial_centre, validate_invariant, InvariantSeq, Validity};
use wblow::polyvector::lie::{classify_lie, linearize, Lie3Class};
use wblow::polyvector::{jacobian_poisson, schouten, Polyvector};
use wblow::resolve::{curve_corpus, resolve_plane_curve, NodeStatus};
use wblow::ring::linalg::det;
use wblow::ring::univariate::UniPoly;
use wblow::ring::{int, rat, ExtRational, Monomial, Poly, Rational, Vars};

type Q = num_rational::Ratio<i64>;
type Outcome = Result<String, String>;
/// Name, equation, invariant, class, quasi-homogeneous exponents.
type Row = (String, String, Vec<Q>, SingularityClass, Option<Vec<Q>>);
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {t:?}, limit {limit:?}"));
    }
    Ok(())
}

fn xyz() -> Vars {
    Vars::xyz()
}

fn p3(s: &str) -> Poly {
    Poly::parse(s, &xyz()).unwrap()
}

/// Weights `1/a` of a centre string like "x:2 y:3 z:inf", `0` for `∞`.
fn weights(c: &str) -> Vec<Q> {
    c.split_whitespace()
        .map(|t| {
            let e = t.split(':').nth(1).unwrap();
            if e == "inf" {
                return Q::zero();
            }
            let (p, q) = e.split_once('/').map_or((e.parse().unwrap(), 1), |(p, q)| (p.parse().unwrap(), q.parse().unwrap()));
            Q::new(q, p)
        })
        .collect()
}

fn to_q(r: &Rational) -> Q {
    Q::new(r.numer().try_into().unwrap(), r.denom().try_into().unwrap())
}

fn ext(q: Q) -> ExtRational {
    ExtRational::rat(*q.numer(), *q.denom())
}

/// Order of each term of a polyvector from its exponents: `Σ e_k w_k − Σ_{i∈I} w_i`.
fn term_orders(xi: &Polyvector, w: &[Q]) -> Vec<(Vec<usize>, Monomial, Q)> {
    let n = xi.nvars();
    let mut out = Vec::new();
    for (idx, c) in xi.terms() {
        for (m, _) in c.terms() {
            let e = m.exponents(n);
            let o: Q = (0..n).map(|k| w[k] * e[k] as i64).sum::<Q>() - idx.iter().map(|&i| w[i]).sum::<Q>();
            out.push((idx.clone(), *m, o));
        }
    }
    out
}

fn oracle_order_and_lt(xi: &Polyvector, w: &[Q]) -> (Q, Polyvector) {
    let terms = term_orders(xi, w);
    let least = terms.iter().map(|t| t.2).min().unwrap();
    let mut lt = Polyvector::zero(xi.vars(), xi.degree());
    for (idx, m, o) in terms {
        if o == least {
            let c = xi.coeff(&idx).coeff(&m);
            lt = lt.add(&Polyvector::basis(xi.vars(), &idx, Poly::monomial(xi.vars(), m, c))).unwrap();
        }
    }
    (least, lt)
}

fn c1_valuations() -> Outcome {
    let v = xyz();
    let weighted = Centre::parse("x:2 y:3 z:inf", &v).unwrap();
    let unweighted = Centre::parse("x:1 y:1 z:inf", &v).unwrap();
    let cases = [
        (&weighted, "x^5", ExtRational::rat(5, 2), "x^5"),
        (&weighted, "x^2*y^4*z^5", ExtRational::rat(7, 3), "x^2*y^4*z^5"),
        (&weighted, "x^5 + x^2*y^4*z^5", ExtRational::rat(7, 3), "x^2*y^4*z^5"),
        (&unweighted, "x^5", ExtRational::int(5), "x^5"),
        (&unweighted, "x^2*y^4*z^5", ExtRational::int(6), "x^2*y^4*z^5"),
        (&unweighted, "x^5 + x^2*y^4*z^5", ExtRational::int(5), "x^5"),
    ];
    let mut slowest = Duration::ZERO;
    for (c, f, want, witness) in cases {
        let f = p3(f);
        let t = Instant::now();
        let (o, m) = ok(c.ord_poly(&f))?;
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        ensure!(o == want, "ord {f} at ({c}) = {o}, expected {want}");
        let m = Poly::monomial(&v, m.unwrap(), int(1));
        ensure!(m == p3(witness), "witness {m} for {f}, expected {witness}");
        ensure!(dt < Duration::from_millis(1), "ord {f} took {dt:?}");
    }
    Ok(format!("6 orders, slowest {slowest:?}"))
}

fn c2_whitney_orders() -> Outcome {
    let v = xyz();
    let sigma = Polyvector::parse(WHITNEY_SIGMA, &v).unwrap();
    let table = [
        ("x:1 y:1 z:1", Q::from_integer(-1), "2*x*@y^@z"),
        ("x:1 y:1 z:inf", Q::zero(), WHITNEY_SIGMA),
        ("x:2 y:3 z:3", Q::new(-1, 6), WHITNEY_SIGMA),
    ];
    let t = Instant::now();
    let mut d = Vec::new();
    for (c, want, lt) in table {
        let (oo, olt) = oracle_order_and_lt(&sigma, &weights(c));
        let centre = Centre::parse(c, &v).unwrap();
        let (o, _) = ok(centre.ord_polyvector(&sigma))?;
        let l = ok(centre.leading_term_polyvector(&sigma))?;
        let stated = Polyvector::parse(lt, &v).unwrap();
        ensure!(oo == want && olt == stated, "oracle disagrees with the stated row at ({c})");
        ensure!(o == ext(want), "ord at ({c}) = {o}, expected {want}");
        ensure!(l == stated, "lt at ({c}) = {l}, expected {stated}");
        d.push(format!("{o}"));
    }
    within(t, Duration::from_millis(10), "order table")?;
    Ok(format!("orders {}", d.join(" / ")))
}

fn c3_whitney_lifting() -> Outcome {
    let v = xyz();
    let sigma = Polyvector::parse(WHITNEY_SIGMA, &v).unwrap();
    let axis = ok(check_centre(&sigma, &Centre::parse("x:1 y:1 z:inf", &v).unwrap()))?;
    ensure!(axis.conilpotent && axis.codegenerate, "z-axis is not conilpotent");
    for c in ["x:1 y:1 z:1", "x:2 y:3 z:3"] {
        let chk = ok(check_centre(&sigma, &Centre::parse(c, &v).unwrap()))?;
        ensure!(!chk.codegenerate && !chk.lift_ok, "({c}) reported codegenerate");
    }
    // CD2 combination at (2,3,3) by hand: it equals W and has order 1 < κ₃ = 7/6.
    let w = [rat(1, 2), rat(1, 3), rat(1, 3)];
    let b = |i, j| sigma.bracket_coeff(i, j);
    let x = |i| Poly::var(&v, i);
    let combo = &(&(&x(0) * &b(1, 2)).scale(&w[0]) + &(&x(1) * &b(2, 0)).scale(&w[1])) + &(&x(2) * &b(0, 1)).scale(&w[2]);
    ensure!(combo == p3("x^2 - y^2*z"), "CD2 combination is {combo}, not W");
    let centre = Centre::parse("x:2 y:3 z:3", &v).unwrap();
    ensure!(ok(centre.ord(&combo))? == ExtRational::int(1), "ord W at (2,3,3) is not 1");
    let chk = ok(check_centre(&sigma, &centre))?;
    let wit = chk.first(WitnessTag::CD2).ok_or("no CD2 witness at (2,3,3)")?;
    ensure!(wit.order == ExtRational::int(1) && wit.threshold == rat(7, 6), "CD2 witness {} < {}", wit.order, wit.threshold);
    Ok("z-axis conilpotent; (1,1,1), (2,3,3) not codegenerate; CD2 witness W of order 1 < 7/6".into())
}

fn c4_lifting_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let t = Instant::now();
    let count = 240;
    let mut lifts = 0;
    for i in 0..count {
        let n = rng.gen_range(1..=3);
        let v = Vars::new(&["x", "y", "z"][..n]).unwrap();
        let k = rng.gen_range(0..=n);
        let xi = random_polyvector(&mut rng, &v, k, 4);
        let c = random_centre(&mut rng, &v, 4);
        let lc = ok(check_lift(&xi, &c))?;
        let pb = ok(pullback_polyvector(&xi, &c))?;
        ensure!(lc.lifts == pb.regular, "case {i}: {xi} at ({c}) lift {} vs pullback {}", lc.lifts, pb.regular);
        ensure!(lc.exceptional_tangent == pb.exceptional_tangent, "case {i}: tangency disagrees for {xi} at ({c})");
        lifts += lc.lifts as usize;
    }
    within(t, Duration::from_secs(30), "lifting oracle")?;
    Ok(format!("{count}/{count} agree ({lifts} lift) in {:?}", t.elapsed()))
}

/// Exponents of a quasi-homogeneous equation; `μ = Π (a_i − 1)`.
fn milnor_orlik(a: &[Q]) -> usize {
    let m = a.iter().map(|x| x - Q::one()).product::<Q>();
    assert!(m.is_integer());
    *m.numer() as usize
}

fn c5_table() -> Outcome {
    let t = Instant::now();
    let q = |p: i64, r: i64| Q::new(p, r);
    let mut rows: Vec<Row> = vec![
        ("NC".into(), "x*y".into(), vec![q(2, 1), q(2, 1)], SingularityClass::NormalCrossings2, None),
        ("Whitney".into(), "x^2 - y^2*z".into(), vec![q(2, 1), q(3, 1), q(3, 1)], SingularityClass::WhitneyUmbrella, None),
    ];
    for n in 1..=5i64 {
        let e = vec![q(2, 1), q(2, 1), q(n + 1, 1)];
        rows.push((format!("A{n}"), format!("x^2 + y^2 + z^{}", n + 1), e.clone(), SingularityClass::A(n as u32), Some(e)));
    }
    for n in 4..=7i64 {
        let qh = vec![q(2, 1), q(2, 1) + q(2, n - 2), q(n - 1, 1)];
        rows.push((format!("D{n}"), format!("x^2 + y^2*z + z^{}", n - 1), vec![q(2, 1), q(3, 1), q(3, 1)], SingularityClass::D(n as u32), Some(qh)));
    }
    for (name, f, e, class) in [
        ("E6", "x^2 + y^3 + z^4", vec![q(2, 1), q(3, 1), q(4, 1)], SingularityClass::E6),
        ("E7", "x^2 + y^3 + y*z^3", vec![q(2, 1), q(3, 1), q(9, 2)], SingularityClass::E7),
        ("E8", "x^2 + y^3 + z^5", vec![q(2, 1), q(3, 1), q(5, 1)], SingularityClass::E8),
    ] {
        rows.push((name.into(), f.into(), e.clone(), class, Some(e)));
    }
    for (name, f, inv, class, qh) in &rows {
        let f = p3(f);
        let got = ok(max_monomial_centre(&f))?.invariant;
        let want: Vec<ExtRational> = inv.iter().map(|x| ext(*x)).collect();
        ensure!(got.entries() == &want[..], "{name}: invariant {got}");
        let kappa: Q = inv.iter().map(|a| a.recip()).sum();
        ensure!(to_q(&got.kappa(3)) == kappa, "{name}: κ₃ {} expected {kappa}", got.kappa(3));
        let rep = ok(classify_surface(&f, DEFAULT_CAP))?;
        ensure!(&rep.class == class, "{name}: classified as {}", rep.class.tag());
        let mu = ok(milnor_number(&f, DEFAULT_CAP))?;
        match qh {
            Some(a) => ensure!(mu == Milnor::Finite(milnor_orlik(a)), "{name}: μ = {mu:?}, expected {}", milnor_orlik(a)),
            None => ensure!(mu == Milnor::Unbounded, "{name}: μ = {mu:?} for a non-isolated singularity"),
        }
    }
    // Whitney and D4 share (2,3,3); only isolatedness separates them.
    let w = ok(classify_surface(&p3("x^2 - y^2*z"), DEFAULT_CAP))?;
    let d4 = ok(classify_surface(&p3("x^2 + y^2*z + z^3"), DEFAULT_CAP))?;
    ensure!(w.class != d4.class, "Whitney and D4 not separated");
    within(t, Duration::from_secs(10), "table")?;
    Ok(format!("{} equations over 7 rows in {:?}", rows.len(), t.elapsed()))
}

fn c6_trichotomy() -> Outcome {
    let t = Instant::now();
    let mut total = 0;
    let mut ade = 0;
    for len in [2, 3] {
        for a in enumerate_valid(len, 6, 12, Exec::Parallel) {
            ensure!(validate_invariant(&a) == Validity::Valid, "{a} enumerated but invalid");
            let e: Vec<Q> = a.finite().iter().map(to_q).collect();
            if e[0] <= Q::one() {
                continue;
            }
            total += 1;
            let key = |v: &[Q]| -> Vec<Q> {
                let mut k = v.to_vec();
                k.resize(3, Q::from_integer(i64::MAX));
                k
            };
            let below = key(&e) < vec![Q::from_integer(2), Q::from_integer(3), Q::from_integer(6)];
            let kappa: Q = e.iter().map(|x| x.recip()).sum();
            let two = Q::from_integer(2);
            let by_kappa = kappa > Q::one() || e == [two, two];
            let listed = match e.as_slice() {
                [x, y] => *x == two && *y == two,
                [x, y, z] if *x == two && *y == two => z.is_integer(),
                [x, y, z] if *x == two && *y == Q::from_integer(3) => [q(3), q(4), Q::new(9, 2), q(5)].contains(z),
                _ => false,
            };
            ensure!(below == by_kappa && by_kappa == listed, "{a}: below={below} kappa={by_kappa} listed={listed}");
            let lib = ok(canonical_numerics(&a))?;
            ensure!(lib.below_236 == below && lib.in_ade_list == listed, "{a}: library disagrees");
            ade += below as usize;
        }
    }
    within(t, Duration::from_secs(60), "trichotomy")?;
    Ok(format!("{total} sequences agree, {ade} below (2,3,6), {:?}", t.elapsed()))
}

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn c7_constraints() -> Outcome {
    let seq = |v: &[Rational]| InvariantSeq::from_rationals(v).unwrap();
    let cases = [
        (vec![rat(3, 2)], false),
        (vec![rat(5, 2), int(3)], false),
        (vec![int(3), rat(7, 2)], false),
        (vec![int(3), rat(9, 2)], true),
        (vec![int(2), rat(5, 2)], false),
        (vec![int(2), int(2), rat(5, 2)], false),
        (vec![int(2), int(2), int(5)], true),
        (vec![int(2), int(3), rat(11, 2)], false),
        (vec![int(2), int(3), rat(9, 2)], true),
        (vec![int(2), int(3), rat(15, 2)], true),
        (vec![int(2), int(3), rat(13, 3)], false),
    ];
    for (v, valid) in &cases {
        let a = seq(v);
        ensure!((validate_invariant(&a) == Validity::Valid) == *valid, "{a} validity should be {valid}");
    }
    let mut checked = 0;
    for len in [2, 3] {
        for a in enumerate_valid(len, 6, 12, Exec::Parallel) {
            let e = a.finite();
            ensure!(e[0].is_integer(), "{a}: a₁ not an integer");
            let twos = e.iter().take_while(|x| **x == int(2)).count();
            if twos > 0 && twos < e.len() {
                ensure!(e[twos].is_integer(), "{a}: entry after a run of 2s is not an integer");
            }
            if e.len() == 3 && e[0] == int(2) && e[1] == int(3) {
                ensure!(e[2].is_integer() || (&e[2] / rat(3, 2)).is_integer(), "{a}: third entry outside ℤ ∪ (3/2)ℤ");
            }
            checked += 1;
        }
    }
    Ok(format!("{} examples, {checked} enumerated sequences obey the rules", cases.len()))
}

fn c8_power_scaling() -> Outcome {
    let mut d = Vec::new();
    for (name, vars, f) in [("cusp", Vars::xy(), "y^2 - x^3"), ("E6", Vars::xyz(), "x^2 + y^3 + z^4")] {
        let f = Poly::parse(f, &vars).unwrap();
        let base: Vec<Q> = ok(max_monomial_centre(&f))?.invariant.finite().iter().map(to_q).collect();
        for k in 2..=3i64 {
            let inv: Vec<Q> = ok(max_monomial_centre(&f.pow(k as u32)))?.invariant.finite().iter().map(to_q).collect();
            let want: Vec<Q> = base.iter().map(|a| a * k).collect();
            ensure!(inv == want, "{name}^{k}: exponents {inv:?}, expected {want:?}");
        }
        d.push(name);
    }
    Ok(format!("{}: exponents of f^k are k times those of f (weights scale by 1/k)", d.join(", ")))
}

fn c9_curves() -> Outcome {
    let t = Instant::now();
    let mut d = Vec::new();
    for (name, f) in curve_corpus() {
        let f = Poly::parse(f, &Vars::xy()).unwrap();
        let r = ok(resolve_plane_curve(&f, 4, Exec::Sequential))?;
        ensure!(r.complete(), "{name}: incomplete");
        ensure!(r.blowups() <= 4, "{name}: {} blowups", r.blowups());
        for n in &r.nodes {
            ensure!(n.flags.is_empty(), "{name}: node {} flagged {:?}", n.id, n.flags);
            if let (Some(p), Some(i)) = (n.parent, n.parent_point) {
                let before = &r.nodes[p].points[i].invariant;
                ensure!(lex_compare(&n.invariant_here, before).is_lt(), "{name}: {} does not drop below {before}", n.invariant_here);
            }
        }
        for leaf in r.leaves() {
            ensure!(leaf.status == NodeStatus::Smooth, "{name}: leaf {} is {:?}", leaf.id, leaf.status);
        }
        d.push(format!("{name} {}", r.blowups()));
    }
    within(t, Duration::from_secs(5), "curve resolution")?;
    Ok(format!("blowups: {}", d.join(", ")))
}

fn c10_normal_forms() -> Outcome {
    let u = |c: &[i64]| UniPoly::new(c.iter().map(|&a| int(a)).collect());
    let mut forms = Vec::new();
    for k in 1..=3 {
        for lambda in [0, 1] {
            forms.push(NormalForm::SplitLog { k, lambda: int(lambda) });
        }
    }
    for (f, a, b) in [("y^2 + z^2", vec![0, 1], vec![0]), ("y^2 + z^3", vec![0, 1], vec![0, 0, 1]), ("y^2 - z^3", vec![0, 1, 1], vec![0, 0, 0, 1])] {
        forms.push(NormalForm::HeisenbergPencil { f: p3(f), a: u(&a), b: u(&b) });
    }
    forms.push(NormalForm::WhitneyFamily { a: u(&[0, 1]) });
    forms.push(NormalForm::WhitneyFamily { a: u(&[0, 0, 1]) });
    for f in ["x^2 + y^2 + z^2", "x^2 + y^2 + z^3", "x^2 + y^2*z + z^3", "x^2 + y^2*z + z^4", "x^2 + y^3 + z^4", "x^2 + y^3 + y*z^3", "x^2 + y^3 + z^5"] {
        forms.push(NormalForm::DuvalFamily { f: p3(f), g: p3("1 + x - y*z") });
    }
    for nf in &forms {
        let r = ok(verify_normal_form(nf, 9))?;
        ensure!(r.poisson, "{}: not Poisson to cap 9", nf.kind());
        ensure!(r.leading_term, "{}: leading term differs", nf.kind());
        ensure!(r.tangency, "{}: tangency fails", nf.kind());
        ensure!(r.certified(), "{}: {:?}", nf.kind(), r.extra);
    }
    Ok(format!("{} normal forms certified to cap 9", forms.len()))
}

fn random_invertible(rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    loop {
        let m: Vec<Vec<Rational>> = (0..3).map(|_| (0..3).map(|_| int(rng.gen_range(-2..=2))).collect()).collect();
        if !det(&m).is_zero() {
            return m;
        }
    }
}

fn c11_triples() -> Outcome {
    let v = xyz();
    let origin = vec![int(0); 3];
    let curve = [p3("x"), p3("y^2 - z^3")];
    let mut rng = ChaCha8Rng::seed_from_u64(0x7219);
    for (s, class) in [("x*@x^@y", Lie3Class::SplitNonabelian), ("x*@y^@z", Lie3Class::Heisenberg), ("x^2*@y^@z", Lie3Class::Abelian)] {
        let sigma = Polyvector::parse(s, &v).unwrap();
        let rep = ok(detect_nonnilpotent_point(&sigma, &curve, &origin))?;
        let got = rep.lie.ok_or("no linearisation")?.class;
        ensure!(got == class, "{s}: {}", got.name());
        ensure!(rep.nonnilpotent == Some(class == Lie3Class::SplitNonabelian), "{s}: non-nilpotent flag {:?}", rep.nonnilpotent);
        for _ in 0..20 {
            let a = random_invertible(&mut rng);
            let t = ok(sigma.linear_change(&a))?;
            let c = classify_lie(&ok(linearize(&t, &origin))?).class;
            ensure!(c == class, "{s}: class {} after a linear change", c.name());
        }
    }
    let mut surfaces = vec![("x*y".to_string(), false), ("x^2 - y^2*z".to_string(), false)];
    for n in 1..=5 {
        surfaces.push((format!("x^2 + y^2 + z^{}", n + 1), true));
    }
    for n in 4..=7 {
        surfaces.push((format!("x^2 + y^2*z + z^{}", n - 1), true));
    }
    for f in ["x^2 + y^3 + z^4", "x^2 + y^3 + y*z^3", "x^2 + y^3 + z^5"] {
        surfaces.push((f.to_string(), true));
    }
    for (f, duval) in &surfaces {
        let f = p3(f);
        let rep = ok(detect_duval_point(&jacobian_poisson(&f), &f, &origin))?;
        ensure!(rep.duval == Some(*duval), "{f}: Du Val {:?}", rep.duval);
    }
    Ok(format!("3 models over 20 changes of basis each; Du Val test on {} surfaces", surfaces.len()))
}

fn runner() -> TestRunner {
    TestRunner::new(Config { cases: 500, failure_persistence: None, ..Config::default() })
}

fn vars_n(n: usize) -> Vars {
    Vars::new(&["x", "y", "z"][..n]).unwrap()
}

fn poly_s(max_deg: u32, terms: usize) -> impl Strategy<Value = Poly> {
    let e = prop::collection::vec(0..=max_deg, 3).prop_filter("degree", move |e| e.iter().sum::<u32>() <= max_deg);
    prop::collection::vec((e, -3i64..=3), 0..=terms).prop_map(|ts| {
        Poly::from_terms(&vars_n(3), ts.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), int(c))))
    })
}

fn pv_s(k: usize, max_deg: u32) -> impl Strategy<Value = Polyvector> {
    let sets: Vec<Vec<usize>> = (0u32..8).filter(|m| m.count_ones() as usize == k).map(|m| (0..3).filter(|i| m & (1 << i) != 0).collect()).collect();
    let count = sets.len();
    (prop::collection::vec((0..count, poly_s(max_deg, 2)), 1..=2)).prop_map(move |ts| {
        let v = vars_n(3);
        ts.into_iter().fold(Polyvector::zero(&v, k), |acc, (s, c)| acc.add(&Polyvector::basis(&v, &sets[s], c)).unwrap())
    })
}

fn centre_s() -> impl Strategy<Value = Centre> {
    let e = prop_oneof![1 => Just(ExtRational::Infinity), 4 => (1i64..=4).prop_flat_map(|q| (q..=4 * q, Just(q))).prop_map(|(p, q)| ExtRational::rat(p, q))];
    prop::collection::vec(e, 3)
        .prop_filter("nontrivial", |e| e.iter().any(|a| !a.is_infinite()))
        .prop_map(|e| Centre::new(&vars_n(3), e, None).unwrap())
}

fn sign(p: usize, q: usize) -> Rational {
    if ((p + 1) * (q + 1)).is_multiple_of(2) { int(1) } else { int(-1) }
}

fn c12_properties() -> Outcome {
    let t = Instant::now();
    let mut r = runner();
    // Degrees (p, q, r) with p + q + r ≤ 4.
    let degrees = (0usize..=2, 0usize..=2, 0usize..=2).prop_filter("degree sum", |(a, b, c)| a + b + c <= 4);
    let jacobi = degrees.prop_flat_map(|(a, b, c)| (pv_s(a, 1), pv_s(b, 1), pv_s(c, 2)));
    r.run(&jacobi, |(p, q, s)| {
        let (dp, dq, ds) = (p.degree(), q.degree(), s.degree());
        let sc = |xi: Polyvector, c: Rational| xi.map_coefficients(|f| f.scale(&c));
        let t1 = sc(schouten(&p, &schouten(&q, &s).unwrap()).unwrap(), sign(dp, ds));
        let t2 = sc(schouten(&q, &schouten(&s, &p).unwrap()).unwrap(), sign(dq, dp));
        let t3 = sc(schouten(&s, &schouten(&p, &q).unwrap()).unwrap(), sign(ds, dq));
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
        Ok(())
    })
    .map_err(|e| format!("graded Jacobi: {e}"))?;
    r.run(&(poly_s(4, 4), poly_s(4, 4), centre_s()), |(f, g, c)| {
        let (of, og) = (c.ord(&f).unwrap(), c.ord(&g).unwrap());
        prop_assert_eq!(c.ord(&(&f * &g)).unwrap(), of.add(&og));
        let m = of.clone().min(og.clone());
        let os = c.ord(&(&f + &g)).unwrap();
        prop_assert!(os >= m);
        if of != og {
            prop_assert_eq!(os, m);
        }
        Ok(())
    })
    .map_err(|e| format!("valuation axioms: {e}"))?;
    let pair = (0usize..=3, 0usize..=3).prop_flat_map(|(a, b)| (pv_s(a, 2), pv_s(b, 2), centre_s()));
    r.run(&pair, |(p, q, c)| {
        let b = schouten(&p, &q).unwrap();
        let (op, _) = c.ord_polyvector(&p).unwrap();
        let (oq, _) = c.ord_polyvector(&q).unwrap();
        let (ob, _) = c.ord_polyvector(&b).unwrap();
        prop_assert!(ob >= op.add(&oq));
        Ok(())
    })
    .map_err(|e| format!("bracket order additivity: {e}"))?;
    let nz = || poly_s(4, 4).prop_filter("nonzero", |f| !f.is_zero());
    r.run(&(nz(), nz(), centre_s()), |(f, g, c)| {
        let lf = c.leading_term_poly(&f).unwrap();
        let lg = c.leading_term_poly(&g).unwrap();
        prop_assert_eq!(c.leading_term_poly(&(&f * &g)).unwrap(), &lf * &lg);
        Ok(())
    })
    .map_err(|e| format!("leading-term multiplicativity: {e}"))?;
    within(t, Duration::from_secs(60), "property suites")?;
    Ok(format!("4 suites x 500 cases in {:?}", t.elapsed()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("valuations", c1_valuations),
        ("Whitney order table", c2_whitney_orders),
        ("Whitney lifting verdicts", c3_whitney_lifting),
        ("lifting criterion vs pullback", c4_lifting_oracle),
        ("ADE table", c5_table),
        ("invariant trichotomy", c6_trichotomy),
        ("invariant constraints", c7_constraints),
        ("power scaling", c8_power_scaling),
        ("plane-curve resolution", c9_curves),
        ("normal forms", c10_normal_forms),
        ("triple detectors", c11_triples),
        ("property suites", c12_properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match r {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
