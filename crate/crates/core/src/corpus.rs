//! Bundled regression corpora. Each corpus is a list of named cases with an
//! expected outcome; a report counts the mismatches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blowup::{check_centre, check_lift, pullback_polyvector, WitnessTag};
use crate::centre::Centre;
use crate::classify::{
    classify_surface, detect_duval_point, detect_nonnilpotent_point, milnor_number, Milnor, SingularityClass,
    DEFAULT_CAP,
};
use crate::exec::Exec;
use crate::invariant::{canonical_numerics, enumerate_valid, max_monomial_centre, validate_invariant, InvariantSeq, Validity};
use crate::polyvector::lie::Lie3Class;
use crate::polyvector::{jacobian_poisson, Polyvector};
use crate::resolve::{curve_corpus, resolve_plane_curve, triple_corpus};
use crate::ring::{fmt_rational, int, rat, ExtRational, Monomial, Poly, Rational, Vars};
use crate::{Error, Result};

pub const CORPORA: [&str; 6] = ["table-ade", "whitney", "lifting", "invariants", "curves", "triples"];

pub const WHITNEY_SIGMA: &str = "2*x*@y^@z - 2*y*z*@z^@x - y^2*@x^@y";

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub name: String,
    pub cases: Vec<CaseResult>,
}

impl CorpusReport {
    pub fn mismatches(&self) -> usize {
        self.cases.iter().filter(|c| !c.ok).count()
    }

    pub fn passed(&self) -> bool {
        self.mismatches() == 0
    }
}

fn case(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> CaseResult {
    CaseResult { label: label.into(), ok, detail: detail.into() }
}

fn from_result(label: &str, r: Result<(bool, String)>) -> CaseResult {
    match r {
        Ok((ok, d)) => case(label, ok, d),
        Err(e) => case(label, false, format!("error: {e}")),
    }
}

pub fn run_corpus(name: &str, exec: Exec) -> Result<CorpusReport> {
    let cases = match name {
        "table-ade" => table_ade(exec),
        "whitney" => whitney(),
        "lifting" => lifting(240, 0x5eed, exec),
        "invariants" => invariants(exec),
        "curves" => curves(exec),
        "triples" => triples(exec),
        other => return Err(Error::pre(format!("unknown corpus `{other}`; known: {}", CORPORA.join(", ")))),
    };
    Ok(CorpusReport { name: name.to_string(), cases })
}

/// One row of the surface table: name, equation, invariant, `κ₃`.
pub struct TableRow {
    pub name: &'static str,
    pub equations: Vec<(String, SingularityClass, Option<usize>)>,
    pub invariant: Vec<Rational>,
    pub kappa3: Vec<Rational>,
}

pub fn table_rows() -> Vec<TableRow> {
    let mut a = Vec::new();
    let mut ka = Vec::new();
    for n in 1..=5u32 {
        a.push((format!("x^2 + y^2 + z^{}", n + 1), SingularityClass::A(n), Some(n as usize)));
        ka.push(int(1) + rat(1, n as i64 + 1));
    }
    let d: Vec<_> = (4..=7u32).map(|n| (format!("x^2 + y^2*z + z^{}", n - 1), SingularityClass::D(n), Some(n as usize))).collect();
    vec![
        TableRow {
            name: "normal crossings",
            equations: vec![("x*y".into(), SingularityClass::NormalCrossings2, None)],
            invariant: vec![int(2), int(2)],
            kappa3: vec![int(1)],
        },
        TableRow {
            name: "Whitney umbrella",
            equations: vec![("x^2 - y^2*z".into(), SingularityClass::WhitneyUmbrella, None)],
            invariant: vec![int(2), int(3), int(3)],
            kappa3: vec![rat(7, 6)],
        },
        TableRow { name: "A_n", equations: a, invariant: vec![], kappa3: ka },
        TableRow { name: "D_n", equations: d, invariant: vec![int(2), int(3), int(3)], kappa3: vec![rat(7, 6); 4] },
        TableRow {
            name: "E6",
            equations: vec![("x^2 + y^3 + z^4".into(), SingularityClass::E6, Some(6))],
            invariant: vec![int(2), int(3), int(4)],
            kappa3: vec![rat(13, 12)],
        },
        TableRow {
            name: "E7",
            equations: vec![("x^2 + y^3 + y*z^3".into(), SingularityClass::E7, Some(7))],
            invariant: vec![int(2), int(3), rat(9, 2)],
            kappa3: vec![rat(19, 18)],
        },
        TableRow {
            name: "E8",
            equations: vec![("x^2 + y^3 + z^5".into(), SingularityClass::E8, Some(8))],
            invariant: vec![int(2), int(3), int(5)],
            kappa3: vec![rat(31, 30)],
        },
    ]
}

fn table_ade(exec: Exec) -> Vec<CaseResult> {
    let rows = table_rows();
    exec.map(&rows, |row| {
        let r = (|| -> Result<(bool, String)> {
            let v = Vars::xyz();
            let mut ok = true;
            let mut detail = Vec::new();
            for (k, (eq, class, mu)) in row.equations.iter().enumerate() {
                let f = Poly::parse(eq, &v)?;
                let mi = max_monomial_centre(&f)?;
                let want_inv = if row.invariant.is_empty() {
                    // A_n: (2, 2, n + 1).
                    let n = match class {
                        SingularityClass::A(n) => *n as i64,
                        _ => unreachable!("only the A row is parametric"),
                    };
                    vec![int(2), int(2), int(n + 1)]
                } else {
                    row.invariant.clone()
                };
                let inv_ok = mi.invariant.finite() == want_inv;
                let kappa = mi.invariant.kappa(3);
                let kappa_ok = kappa == row.kappa3[k];
                let got = classify_surface(&f, DEFAULT_CAP)?.class;
                let class_ok = got == *class;
                let milnor = milnor_number(&f, DEFAULT_CAP)?;
                let milnor_ok = match mu {
                    Some(m) => milnor == Milnor::Finite(*m),
                    None => milnor == Milnor::Unbounded,
                };
                ok &= inv_ok && kappa_ok && class_ok && milnor_ok;
                detail.push(format!("{eq}: {got} inv={} κ₃={} μ={milnor}", mi.invariant, fmt_rational(&kappa)));
            }
            Ok((ok, detail.join("; ")))
        })();
        from_result(row.name, r)
    })
}

fn whitney() -> Vec<CaseResult> {
    let v = Vars::xyz();
    let sigma = Polyvector::parse(WHITNEY_SIGMA, &v).expect("corpus input parses");
    let mut out = Vec::new();
    let orders = [
        ("x:1 y:1 z:1", ExtRational::int(-1), "2*x*@y^@z"),
        ("x:1 y:1 z:inf", ExtRational::int(0), WHITNEY_SIGMA),
        ("x:2 y:3 z:3", ExtRational::rat(-1, 6), WHITNEY_SIGMA),
    ];
    for (c, ord, lt) in orders {
        let r = (|| -> Result<(bool, String)> {
            let centre = Centre::parse(c, &v)?;
            let (o, _) = centre.ord_polyvector(&sigma)?;
            let l = centre.leading_term_polyvector(&sigma)?;
            let want = Polyvector::parse(lt, &v)?;
            Ok((o == ord && l == want, format!("ord={o} lt={l}")))
        })();
        out.push(from_result(&format!("order at ({c})"), r));
    }
    let verdicts = [("x:1 y:1 z:inf", true, true), ("x:1 y:1 z:1", false, false), ("x:2 y:3 z:3", false, false)];
    for (c, codeg, conil) in verdicts {
        let r = (|| -> Result<(bool, String)> {
            let centre = Centre::parse(c, &v)?;
            let chk = check_centre(&sigma, &centre)?;
            let mut ok = chk.poisson && chk.codegenerate == codeg && chk.conilpotent == conil;
            if c == "x:2 y:3 z:3" {
                let w = chk.first(WitnessTag::CD2);
                ok &= w.is_some_and(|w| w.order == ExtRational::int(1) && w.threshold == rat(7, 6));
            }
            let tags: Vec<String> = chk.witness_tags().iter().map(|t| format!("{t:?}")).collect();
            Ok((ok, format!("codegenerate={} conilpotent={} witnesses=[{}]", chk.codegenerate, chk.conilpotent, tags.join(","))))
        })();
        out.push(from_result(&format!("lifting at ({c})"), r));
    }
    out
}

/// A random polyvector of degree `k` in `vars` with monomials of degree at
/// most `max_deg`.
pub fn random_polyvector(rng: &mut impl Rng, vars: &Vars, k: usize, max_deg: u32) -> Polyvector {
    let n = vars.len();
    let mut xi = Polyvector::zero(vars, k);
    let idx_sets = subsets(n, k);
    let terms = rng.gen_range(1..=4);
    for _ in 0..terms {
        let idx = idx_sets[rng.gen_range(0..idx_sets.len())].clone();
        let mut m = Monomial::one();
        let mut budget = rng.gen_range(0..=max_deg);
        for i in 0..n {
            let e = rng.gen_range(0..=budget);
            m.set(i, e);
            budget -= e;
        }
        let c = int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        xi = xi.add(&Polyvector::basis(vars, &idx, Poly::monomial(vars, m, c))).expect("same variables");
    }
    xi
}

/// A random centre with exponents `p/q`, `q ≤ max_den`, some of them
/// infinite but not all.
pub fn random_centre(rng: &mut impl Rng, vars: &Vars, max_den: i64) -> Centre {
    let n = vars.len();
    loop {
        let e: Vec<ExtRational> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    ExtRational::Infinity
                } else {
                    let q = rng.gen_range(1..=max_den);
                    let p = rng.gen_range(q..=4 * q);
                    ExtRational::rat(p, q)
                }
            })
            .collect();
        if let Ok(c) = Centre::new(vars, e, None) {
            if !c.is_trivial() {
                return c;
            }
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// Agreement of the order criterion with the pole analysis of the chart
/// pullback on random inputs.
pub fn lifting(count: usize, seed: u64, exec: Exec) -> Vec<CaseResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(1..=3usize);
        let vars = Vars::new(&["x", "y", "z"][..n]).expect("valid names");
        let k = rng.gen_range(0..=n);
        let xi = random_polyvector(&mut rng, &vars, k, 4);
        let c = random_centre(&mut rng, &vars, 4);
        inputs.push((xi, c));
    }
    exec.map(&inputs, |(xi, c)| {
        let r = (|| -> Result<(bool, String)> {
            let lc = check_lift(xi, c)?;
            let pb = pullback_polyvector(xi, c)?;
            let ok = lc.lifts == pb.regular && lc.exceptional_tangent == pb.exceptional_tangent;
            Ok((ok, format!("lifts={} tangent={} regular={} pole-free-tangent={}", lc.lifts, lc.exceptional_tangent, pb.regular, pb.exceptional_tangent)))
        })();
        from_result(&format!("{xi} at ({c})"), r)
    })
}

fn seq(xs: &[Rational]) -> InvariantSeq {
    InvariantSeq::from_rationals(xs).expect("increasing")
}

fn invariants(exec: Exec) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for len in [2, 3] {
        let all = enumerate_valid(len, 6, 12, exec);
        let candidates: Vec<&InvariantSeq> = all.iter().filter(|a| a.finite()[0] > int(1)).collect();
        let bad: Vec<String> = candidates
            .iter()
            .filter(|a| canonical_numerics(a).is_err())
            .map(|a| a.to_string())
            .collect();
        out.push(case(
            format!("trichotomy, length {len}"),
            bad.is_empty() && !candidates.is_empty(),
            format!("{} sequences, {} disagreements {}", candidates.len(), bad.len(), bad.join(" ")),
        ));
    }
    let constraints = [
        (vec![rat(3, 2)], false, "a_1 is an integer"),
        (vec![rat(5, 2)], false, "a_1 is an integer"),
        (vec![int(3)], true, "a_1 is an integer"),
        (vec![int(2), int(2), rat(5, 2)], false, "(2,2,·) forces an integer"),
        (vec![int(2), int(2), int(7)], true, "(2,2,·) forces an integer"),
        (vec![int(2), int(2), int(2), rat(7, 2)], false, "(2,2,2,·) forces an integer"),
        (vec![int(2), rat(11, 2)], false, "(2,·) forces an integer"),
        (vec![int(2), int(3), rat(11, 2)], false, "(2,3,·) needs ℤ ∪ (3/2)ℤ"),
        (vec![int(2), int(3), rat(9, 2)], true, "(2,3,·) needs ℤ ∪ (3/2)ℤ"),
        (vec![int(2), int(3), rat(15, 2)], true, "(2,3,·) needs ℤ ∪ (3/2)ℤ"),
    ];
    for (xs, valid, why) in constraints {
        let a = seq(&xs);
        let got = validate_invariant(&a) == Validity::Valid;
        out.push(case(format!("{a} {}", if valid { "valid" } else { "invalid" }), got == valid, why));
    }
    for (name, vars, f) in [("cusp", Vars::xy(), "y^2 - x^3"), ("E6", Vars::xyz(), "x^2 + y^3 + z^4")] {
        let r = (|| -> Result<(bool, String)> {
            let f = Poly::parse(f, &vars)?;
            let base = max_monomial_centre(&f)?.invariant;
            let mut ok = true;
            let mut d = vec![format!("k=1 {base}")];
            for k in 2..=3u32 {
                let inv = max_monomial_centre(&f.pow(k))?.invariant;
                ok &= inv.entries() == base.scale(&int(k as i64)).entries();
                d.push(format!("k={k} {inv}"));
            }
            Ok((ok, d.join(" ")))
        })();
        out.push(from_result(&format!("power scaling, {name}"), r));
    }
    out
}

fn curves(exec: Exec) -> Vec<CaseResult> {
    let corpus = curve_corpus();
    exec.map(&corpus, |(name, f)| {
        let r = (|| -> Result<(bool, String)> {
            let f = Poly::parse(f, &Vars::xy())?;
            let res = resolve_plane_curve(&f, 4, Exec::Sequential)?;
            let flags: usize = res.nodes.iter().map(|n| n.flags.len()).sum();
            let ok = res.complete() && res.blowups() <= 4 && flags == 0;
            Ok((ok, format!("{} blowups, depth {}, {} leaves", res.blowups(), res.depth(), res.leaves().count())))
        })();
        from_result(name, r)
    })
}

fn triples(exec: Exec) -> Vec<CaseResult> {
    let mut out = Vec::new();
    let v = Vars::xyz();
    let y = [Poly::parse("x", &v).expect("parses"), Poly::parse("y^2 - z^3", &v).expect("parses")];
    let origin = vec![int(0); 3];
    for (s, class) in [("x*@x^@y", Lie3Class::SplitNonabelian), ("x*@y^@z", Lie3Class::Heisenberg), ("x^2*@y^@z", Lie3Class::Abelian)] {
        let r = (|| -> Result<(bool, String)> {
            let rep = detect_nonnilpotent_point(&Polyvector::parse(s, &v)?, &y, &origin)?;
            let got = rep.lie.expect("linearised").class;
            Ok((got == class, got.name().to_string()))
        })();
        out.push(from_result(&format!("linearisation of {s}"), r));
    }
    let mut surfaces: Vec<(String, bool)> = Vec::new();
    for row in table_rows() {
        let duval = !matches!(row.name, "normal crossings" | "Whitney umbrella");
        for (eq, _, _) in row.equations {
            surfaces.push((eq, duval));
        }
    }
    out.extend(exec.map(&surfaces, |(eq, duval)| {
        let r = (|| -> Result<(bool, String)> {
            let f = Poly::parse(eq, &v)?;
            let rep = detect_duval_point(&jacobian_poisson(&f), &f, &origin)?;
            Ok((rep.duval == Some(*duval), format!("duval={:?}", rep.duval)))
        })();
        from_result(&format!("Du Val test on {eq}"), r)
    }));
    let cases = triple_corpus();
    out.extend(exec.map(&cases, |c| {
        let r = c.select().map(|sel| {
            let s = &sel[0];
            (s.case == c.expected && s.check.conilpotent, format!("{} centre {}", s.case.name(), s.centre))
        });
        from_result(&format!("centre selection, {}", c.name), r)
    }));
    out
}
