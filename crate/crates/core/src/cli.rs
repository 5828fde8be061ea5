//! The `wblow` command line.
//!
//! Exit codes: 0 for success and true verdicts, 1 for a negative
//! mathematical verdict, 2 for usage and parse errors, 3 for indeterminate
//! results and refusals. `--machine` prints one JSON document with
//! rationals as `"p/q"` strings and infinities as `"inf"`.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::blowup::{chart_function, chart_polyvector, check_centre, check_lift, pullback_function, pullback_polyvector, slice_charts, to_slice_vars, to_slice_vars_pv};
use crate::centre::Centre;
use crate::classify::{
    classify_surface, is_isolated_singularity, milnor_number, verify_normal_form, Isolation, Milnor, NormalForm,
    SingularityClass, DEFAULT_CAP,
};
use crate::corpus::{run_corpus, CORPORA};
use crate::exec::{with_jobs, Exec};
use crate::invariant::{canonical_numerics, max_monomial_centre, plane_curve_invariant, validate_invariant, InvariantSeq, Validity};
use crate::polyvector::{jacobian_poisson, schouten, Polyvector};
use crate::resolve::{certify_blowup_step, resolve_plane_curve, select_centre_31, select_centre_32, CentreSelection, NodeStatus};
use crate::ring::{fmt_rational, parse_rational, ExtRational, Poly, Rational, UniPoly, Vars};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wblow", version, about = "Exact weighted blowups of Poisson structures and singular pairs")]
struct Cli {
    /// Comma-separated coordinate names. Defaults to x,y,z; plane-curve
    /// commands default to x,y, as do milnor and invariant when the input
    /// does not mention z.
    #[arg(long, global = true)]
    vars: Option<String>,
    /// Truncation degree for series and local algebra computations.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u32,
    /// Print a single JSON document.
    #[arg(long, global = true)]
    machine: bool,
    /// Worker threads for corpus and chart batches; 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Target {
    #[arg(long)]
    centre: String,
    /// A polyvector instead of a function.
    #[arg(long)]
    sigma: Option<String>,
    /// A function.
    input: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weighted order of a function or polyvector.
    Order(Target),
    /// Leading term of a function or polyvector.
    Lt(Target),
    /// Schouten bracket of two polyvectors.
    Schouten { p: String, q: String },
    /// Jacobian Poisson structure of a function of three variables.
    Jacobian { f: String },
    /// Poisson, codegenerate and conilpotent verdicts for a bivector.
    CheckCentre {
        #[arg(long)]
        centre: String,
        #[arg(long)]
        sigma: String,
    },
    /// Lifting criterion for a polyvector of any degree.
    Lift {
        #[arg(long)]
        centre: String,
        #[arg(long)]
        sigma: String,
    },
    /// Slice-chart pullbacks of functions and a polyvector.
    Blowup {
        #[arg(long)]
        centre: String,
        #[arg(long)]
        sigma: Option<String>,
        functions: Vec<String>,
    },
    /// Invariant over monomial centres in the given coordinates.
    Invariant { f: String },
    /// Check an invariant sequence such as "(2,3,4.5)".
    ValidateInvariant { seq: String },
    /// Classify a surface singularity at the origin.
    Classify { f: String },
    /// Milnor number at the origin.
    Milnor { f: String },
    /// Embedded resolution of a plane curve.
    ResolveCurve {
        f: String,
        #[arg(long, default_value_t = 8)]
        max_steps: usize,
    },
    /// Centre selection for a Poisson triple.
    SelectCentre {
        #[arg(long)]
        sigma: String,
        /// Generator of a curve ideal; repeat for each generator.
        #[arg(long = "curve")]
        curve: Vec<String>,
        /// Equation of a surface.
        #[arg(long, conflicts_with = "curve")]
        surface: Option<String>,
        /// Comma-separated coordinates of the point; the origin by default.
        #[arg(long)]
        point: Option<String>,
        /// Certify the blowup at each selected centre.
        #[arg(long)]
        certify: bool,
    },
    /// Verify a family of formal normal forms at the truncation cap.
    VerifyNormalForm {
        /// split_log, heisenberg_pencil, whitney_family or duval_family.
        kind: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value = "0")]
        lambda: String,
        /// Pencil function or surface equation.
        #[arg(long)]
        f: Option<String>,
        /// Coefficients of A, constant term first.
        #[arg(long, default_value = "0,1")]
        a: String,
        /// Coefficients of B, constant term first.
        #[arg(long, default_value = "0")]
        b: String,
        /// Unit multiplying the Jacobian structure.
        #[arg(long, default_value = "1")]
        g: String,
    },
    /// Run a bundled regression corpus.
    Corpus { name: String },
}

/// Outcome of one command before rendering.
struct Outcome {
    code: i32,
    human: String,
    machine: Value,
}

impl Outcome {
    fn new(code: i32, human: String, machine: Value) -> Self {
        Outcome { code, human, machine }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Indeterminate(_) | Error::Refused(_) => EXIT_INDETERMINATE,
        Error::Certification(_) => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn q(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

fn ext(e: &ExtRational) -> Value {
    Value::String(e.to_string())
}

fn seq_json(a: &InvariantSeq) -> Value {
    Value::Array(a.entries().iter().map(ext).collect())
}

fn exps_json(c: &Centre) -> Value {
    Value::Array(c.exponents().iter().map(ext).collect())
}

fn centre_json(c: &Centre) -> Value {
    json!({
        "vars": c.vars().names(),
        "exponents": exps_json(c),
        "base": c.base().iter().map(q).collect::<Vec<_>>(),
    })
}

fn mentions(text: &str, name: &str) -> bool {
    text.split(|ch: char| !ch.is_alphanumeric() && ch != '_').any(|t| t == name)
}

fn vars_for(cli_vars: &Option<String>, default: &str) -> Result<Vars, Error> {
    Vars::parse(cli_vars.as_deref().unwrap_or(default))
}

/// Parse the argument vector (program name first) and run.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let machine = cli.machine;
    let jobs = cli.jobs.max(1);
    let out = with_jobs(jobs, || execute(&cli));
    match out {
        Ok(o) => {
            let text = if machine {
                let mut doc = o.machine;
                if let Value::Object(m) = &mut doc {
                    m.insert("exit".into(), json!(o.code));
                }
                serde_json::to_string_pretty(&doc).expect("JSON values serialise") + "\n"
            } else {
                o.human
            };
            (o.code, text)
        }
        Err(e) => {
            let code = exit_code(&e);
            let text = if machine {
                serde_json::to_string_pretty(&json!({"error": e.to_string(), "exit": code})).expect("serialise") + "\n"
            } else {
                format!("error: {e}\n")
            };
            (code, text)
        }
    }
}

fn target_value(t: &Target, vars: &Vars) -> Result<Result<Poly, Polyvector>, Error> {
    match (&t.sigma, &t.input) {
        (Some(s), None) => Ok(Err(Polyvector::parse(s, vars)?)),
        (None, Some(f)) => Ok(Ok(Poly::parse(f, vars)?)),
        _ => Err(Error::pre("give either a function or --sigma")),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let exec = Exec::from_jobs(cli.jobs);
    let v3 = || vars_for(&cli.vars, "x,y,z");
    match &cli.command {
        Command::Order(t) => {
            let vars = v3()?;
            let c = Centre::parse(&t.centre, &vars)?;
            let (ord, witness) = match target_value(t, &vars)? {
                Ok(f) => {
                    let (o, m) = c.ord_poly(&f)?;
                    (o, m.map(|m| m.render(&vars)))
                }
                Err(xi) => {
                    let (o, w) = c.ord_polyvector(&xi)?;
                    (o, w.map(|(idx, m)| {
                        let d: Vec<String> = idx.iter().map(|&i| format!("@{}", vars.name(i))).collect();
                        format!("{}*{}", m.render(&vars), d.join("^"))
                    }))
                }
            };
            Ok(Outcome::new(
                EXIT_OK,
                format!("{ord}\n"),
                json!({"command": "order", "centre": centre_json(&c), "order": ext(&ord), "witness": witness}),
            ))
        }
        Command::Lt(t) => {
            let vars = v3()?;
            let c = Centre::parse(&t.centre, &vars)?;
            let lt = match target_value(t, &vars)? {
                Ok(f) => c.leading_term_poly(&f)?.to_string(),
                Err(xi) => c.leading_term_polyvector(&xi)?.to_string(),
            };
            Ok(Outcome::new(EXIT_OK, format!("{lt}\n"), json!({"command": "lt", "centre": centre_json(&c), "leading_term": lt})))
        }
        Command::Schouten { p, q: qq } => {
            let vars = v3()?;
            let a = Polyvector::parse(p, &vars)?;
            let b = Polyvector::parse(qq, &vars)?;
            let s = schouten(&a, &b)?;
            Ok(Outcome::new(
                EXIT_OK,
                format!("{s}\n"),
                json!({"command": "schouten", "degree": s.degree(), "bracket": s.to_string()}),
            ))
        }
        Command::Jacobian { f } => {
            let vars = v3()?;
            if vars.len() != 3 {
                return Err(Error::pre("the Jacobian structure needs three variables"));
            }
            let s = jacobian_poisson(&Poly::parse(f, &vars)?);
            Ok(Outcome::new(EXIT_OK, format!("{s}\n"), json!({"command": "jacobian", "sigma": s.to_string()})))
        }
        Command::CheckCentre { centre, sigma } => {
            let vars = v3()?;
            let c = Centre::parse(centre, &vars)?;
            let s = Polyvector::parse(sigma, &vars)?;
            let chk = check_centre(&s, &c)?;
            let witnesses: Vec<String> = chk.witnesses.iter().map(|w| w.describe(&c)).collect();
            let mut h = String::new();
            let _ = writeln!(h, "poisson: {}", chk.poisson);
            let _ = writeln!(h, "codegenerate: {}", chk.codegenerate);
            let _ = writeln!(h, "conilpotent: {}", chk.conilpotent);
            let _ = writeln!(h, "lifts: {}", chk.lift_ok);
            let _ = writeln!(h, "order: {}", chk.order);
            for w in &witnesses {
                let _ = writeln!(h, "witness {w}");
            }
            let wj: Vec<Value> = chk
                .witnesses
                .iter()
                .map(|w| {
                    json!({
                        "tag": format!("{:?}", w.tag),
                        "indices": w.indices.iter().map(|&i| vars.name(i)).collect::<Vec<_>>(),
                        "order": ext(&w.order),
                        "required": q(&w.threshold),
                    })
                })
                .collect();
            let code = if chk.conilpotent { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::new(
                code,
                h,
                json!({
                    "command": "check-centre",
                    "centre": centre_json(&c),
                    "poisson": chk.poisson,
                    "codegenerate": chk.codegenerate,
                    "conilpotent": chk.conilpotent,
                    "lifts": chk.lift_ok,
                    "order": ext(&chk.order),
                    "witnesses": wj,
                }),
            ))
        }
        Command::Lift { centre, sigma } => {
            let vars = v3()?;
            let c = Centre::parse(centre, &vars)?;
            let xi = Polyvector::parse(sigma, &vars)?;
            let lc = check_lift(&xi, &c)?;
            let witnesses: Vec<String> = lc.witnesses.iter().map(|w| w.describe(&c)).collect();
            let mut h = format!(
                "lifts: {}\nexceptional_tangent: {}\norder: {}\neuler_order: {}\n",
                lc.lifts, lc.exceptional_tangent, lc.order, lc.euler_order
            );
            for w in &witnesses {
                let _ = writeln!(h, "witness {w}");
            }
            let code = if lc.lifts { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::new(
                code,
                h,
                json!({
                    "command": "lift",
                    "centre": centre_json(&c),
                    "lifts": lc.lifts,
                    "exceptional_tangent": lc.exceptional_tangent,
                    "order": ext(&lc.order),
                    "euler_order": ext(&lc.euler_order),
                    "witnesses": witnesses,
                }),
            ))
        }
        Command::Blowup { centre, sigma, functions } => {
            let vars = v3()?;
            let c = Centre::parse(centre, &vars)?;
            let fs: Vec<Poly> = functions.iter().map(|f| Poly::parse(f, &vars)).collect::<Result<_, _>>()?;
            let xi = sigma.as_ref().map(|s| Polyvector::parse(s, &vars)).transpose()?;
            let fpbs: Vec<_> = fs.iter().map(|f| pullback_function(f, &c)).collect::<Result<_, _>>()?;
            let pb = xi.as_ref().map(|x| pullback_polyvector(x, &c)).transpose()?;
            let charts = slice_charts(&c)?;
            let mut h = String::new();
            if let Some(pb) = &pb {
                let _ = writeln!(h, "regular: {}  exceptional_tangent: {}", pb.regular, pb.exceptional_tangent);
            }
            let mut cj = Vec::new();
            for ch in &charts {
                let i = ch.slice_var;
                let strict: Vec<String> =
                    fpbs.iter().map(|fp| to_slice_vars(&chart_function(fp, ch), fp.t_index, i, &vars).to_string()).collect();
                let eta = match &pb {
                    Some(pb) if pb.regular => Some(to_slice_vars_pv(&chart_polyvector(pb, ch)?, pb.t_index, i, &vars)?.to_string()),
                    _ => None,
                };
                let _ = writeln!(h, "chart {}=1 (order {}):", vars.name(i), ch.residual_order);
                for s in &strict {
                    let _ = writeln!(h, "  {s}");
                }
                if let Some(e) = &eta {
                    let _ = writeln!(h, "  sigma: {e}");
                }
                cj.push(json!({"slice": vars.name(i), "order": ch.residual_order, "strict": strict, "sigma": eta}));
            }
            let code = if pb.as_ref().is_some_and(|p| !p.regular) { EXIT_NEGATIVE } else { EXIT_OK };
            Ok(Outcome::new(
                code,
                h,
                json!({
                    "command": "blowup",
                    "centre": centre_json(&c),
                    "regular": pb.as_ref().map(|p| p.regular),
                    "exceptional_tangent": pb.as_ref().map(|p| p.exceptional_tangent),
                    "charts": cj,
                }),
            ))
        }
        Command::Invariant { f } => {
            let default = if mentions(f, "z") { "x,y,z" } else { "x,y" };
            let vars = vars_for(&cli.vars, default)?;
            let p = Poly::parse(f, &vars)?;
            let mi = max_monomial_centre(&p)?;
            let kappa = mi.invariant.kappa(vars.len());
            let mut h = format!("invariant={} centre={} kappa={}\n", mi.invariant, mi.centre, fmt_rational(&kappa));
            for w in &mi.warnings {
                let _ = writeln!(h, "warning: {w}");
            }
            let mut doc = json!({
                "command": "invariant",
                "invariant": seq_json(&mi.invariant),
                "centre": centre_json(&mi.centre),
                "kappa": q(&kappa),
                "warnings": mi.warnings,
            });
            if vars.len() == 2 {
                let pc = plane_curve_invariant(&p)?;
                let _ = writeln!(h, "plane-curve invariant={}{}", pc.invariant, if pc.exact { "" } else { " (lower bound)" });
                doc["plane_curve"] = json!({"invariant": seq_json(&pc.invariant), "exact": pc.exact, "log": pc.log});
            }
            Ok(Outcome::new(EXIT_OK, h, doc))
        }
        Command::ValidateInvariant { seq } => {
            let a = InvariantSeq::parse(seq)?;
            let validity = validate_invariant(&a);
            let (code, mut h) = match validity {
                Validity::Invalid(j) => (EXIT_NEGATIVE, format!("{a} invalid at entry {j}\n")),
                _ => (EXIT_OK, format!("{a} valid\n")),
            };
            let mut doc = json!({
                "command": "validate-invariant",
                "invariant": seq_json(&a),
                "valid": validity == Validity::Valid,
            });
            if let Validity::Invalid(j) = validity {
                doc["failing_entry"] = json!(j);
            }
            let fin = a.finite();
            if validity == Validity::Valid && (2..=3).contains(&a.len()) && fin[0] > Rational::from_integer(1.into()) {
                let cn = canonical_numerics(&a)?;
                let _ = writeln!(
                    h,
                    "below (2,3,6): {}  kappa3 > 1 or (2,2): {}  in list: {}  kappa3={}",
                    cn.below_236,
                    cn.kappa3_above_1_or_22,
                    cn.in_ade_list,
                    fmt_rational(&cn.kappa3)
                );
                doc["canonical"] = json!({
                    "below_236": cn.below_236,
                    "kappa3_above_1_or_22": cn.kappa3_above_1_or_22,
                    "in_ade_list": cn.in_ade_list,
                    "kappa3": q(&cn.kappa3),
                });
            }
            Ok(Outcome::new(code, h, doc))
        }
        Command::Classify { f } => {
            let vars = v3()?;
            let p = Poly::parse(f, &vars)?;
            let r = classify_surface(&p, cli.cap)?;
            let inv = r.invariant.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "?".into());
            let mut h = format!("{} invariant={inv}\n", r.class);
            if let SingularityClass::Other(d) = &r.class {
                for line in d {
                    let _ = writeln!(h, "  {line}");
                }
            }
            let code = if matches!(r.class, SingularityClass::Other(_)) { EXIT_INDETERMINATE } else { EXIT_OK };
            Ok(Outcome::new(
                code,
                h,
                json!({
                    "command": "classify",
                    "class": r.class.tag(),
                    "invariant": r.invariant.as_ref().map(seq_json),
                    "monomial_bound": r.monomial_bound.as_ref().map(seq_json),
                    "milnor": r.milnor.map(|m| m.to_string()),
                    "diagnostics": r.diagnostics,
                }),
            ))
        }
        Command::Milnor { f } => {
            let default = if mentions(f, "z") { "x,y,z" } else { "x,y" };
            let vars = vars_for(&cli.vars, default)?;
            let p = Poly::parse(f, &vars)?;
            let m = milnor_number(&p, cli.cap)?;
            let (code, note) = match m {
                Milnor::Finite(_) => (EXIT_OK, None),
                Milnor::Unbounded => match is_isolated_singularity(&p, cli.cap, &[])? {
                    Isolation::NonIsolated { .. } => (EXIT_NEGATIVE, Some("non-isolated singularity".to_string())),
                    _ => (EXIT_INDETERMINATE, Some(format!("no stabilisation up to degree {}", cli.cap))),
                },
            };
            let mut h = format!("{m}\n");
            if let Some(n) = &note {
                let _ = writeln!(h, "  {n}");
            }
            Ok(Outcome::new(code, h, json!({"command": "milnor", "milnor": m.to_string(), "note": note})))
        }
        Command::ResolveCurve { f, max_steps } => {
            let vars = vars_for(&cli.vars, "x,y")?;
            let p = Poly::parse(f, &vars)?;
            let res = resolve_plane_curve(&p, *max_steps, exec)?;
            let indeterminate = res.nodes.iter().any(|n| n.status == NodeStatus::Indeterminate);
            let code = if res.complete() {
                EXIT_OK
            } else if indeterminate {
                EXIT_INDETERMINATE
            } else {
                EXIT_NEGATIVE
            };
            let nodes: Vec<Value> = res
                .nodes
                .iter()
                .map(|n| {
                    json!({
                        "id": n.id,
                        "parent": n.parent,
                        "chart": n.chart.as_ref().map(|(v, k)| json!({"slice": v, "order": k})),
                        "equation": n.equation.to_string(),
                        "invariant": seq_json(&n.invariant_here),
                        "status": format!("{:?}", n.status),
                        "points": n.points.iter().map(|s| json!({
                            "point": s.point.iter().map(q).collect::<Vec<_>>(),
                            "invariant": seq_json(&s.invariant),
                            "exact": s.exact,
                            "centre": centre_json(&s.centre),
                        })).collect::<Vec<_>>(),
                        "children": n.children,
                        "flags": n.flags,
                    })
                })
                .collect();
            let mut h = res.transcript();
            let _ = writeln!(h, "blowups: {}  complete: {}", res.blowups(), res.complete());
            Ok(Outcome::new(
                code,
                h,
                json!({"command": "resolve-curve", "complete": res.complete(), "blowups": res.blowups(), "nodes": nodes}),
            ))
        }
        Command::SelectCentre { sigma, curve, surface, point, certify } => {
            let vars = v3()?;
            let s = Polyvector::parse(sigma, &vars)?;
            let p = match point {
                Some(t) => t.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?,
                None => vec![Rational::from_integer(0.into()); vars.len()],
            };
            if p.len() != vars.len() {
                return Err(Error::pre("the point needs one coordinate per variable"));
            }
            let sels: Vec<CentreSelection> = match surface {
                Some(f) => select_centre_32(&s, &Poly::parse(f, &vars)?, &[p])?,
                None if !curve.is_empty() => {
                    let gens: Vec<Poly> = curve.iter().map(|g| Poly::parse(g, &vars)).collect::<Result<_, _>>()?;
                    select_centre_31(&s, &gens, &[p])?
                }
                None => return Err(Error::pre("give --surface or at least one --curve generator")),
            };
            let mut h = String::new();
            let mut sj = Vec::new();
            let mut code = EXIT_OK;
            for sel in &sels {
                let pt: Vec<String> = sel.point.iter().map(fmt_rational).collect();
                let _ = writeln!(
                    h,
                    "case={} point=({}) centre={} conilpotent={}",
                    sel.case.name(),
                    pt.join(","),
                    sel.centre,
                    sel.check.conilpotent
                );
                let _ = writeln!(h, "  {}", sel.rationale);
                if let Some(c) = &sel.coordinates {
                    let cs: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                    let _ = writeln!(h, "  coordinates: {}", cs.join(", "));
                }
                for (what, ok) in &sel.extra {
                    let _ = writeln!(h, "  {what}: {ok}");
                    if !ok {
                        code = EXIT_NEGATIVE;
                    }
                }
                let mut j = json!({
                    "case": sel.case.name(),
                    "point": sel.point.iter().map(q).collect::<Vec<_>>(),
                    "centre": centre_json(&sel.centre),
                    "coordinates": sel.coordinates.as_ref().map(|c| c.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
                    "invariant": sel.invariant.as_ref().map(seq_json),
                    "conilpotent": sel.check.conilpotent,
                    "rationale": sel.rationale,
                    "extra": sel.extra.iter().map(|(w, ok)| json!({"check": w, "ok": ok})).collect::<Vec<_>>(),
                });
                if *certify {
                    let step = certify_blowup_step(Some(&sel.sigma), &sel.objects, sel.ideal, &sel.centre)?;
                    let mut charts = Vec::new();
                    for ch in &step.charts {
                        let _ = writeln!(
                            h,
                            "  chart {}: poisson={} tangent={} exceptional={} invariant={}",
                            ch.slice_var,
                            fmt_opt(ch.poisson),
                            fmt_opt(ch.tangent_strict),
                            fmt_opt(ch.tangent_exceptional),
                            ch.invariant.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "-".into())
                        );
                        charts.push(json!({
                            "slice": ch.slice_var,
                            "poisson": ch.poisson,
                            "tangent": ch.tangent_strict,
                            "exceptional_tangent": ch.tangent_exceptional,
                            "invariant": ch.invariant.as_ref().map(seq_json),
                            "descent": ch.descent,
                        }));
                    }
                    for f in &step.flags {
                        let _ = writeln!(h, "  ! {f}");
                    }
                    if !step.passed() {
                        code = EXIT_NEGATIVE;
                    }
                    j["step"] = json!({"passed": step.passed(), "charts": charts, "flags": step.flags});
                }
                sj.push(j);
            }
            Ok(Outcome::new(code, h, json!({"command": "select-centre", "selections": sj})))
        }
        Command::VerifyNormalForm { kind, k, lambda, f, a, b, g } => {
            let vars = v3()?;
            let coeffs = |t: &str| -> Result<UniPoly, Error> {
                Ok(UniPoly::new(t.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?))
            };
            let need_f = || -> Result<Poly, Error> {
                let t = f.as_deref().ok_or_else(|| Error::pre(format!("{kind} needs --f")))?;
                Poly::parse(t, &vars)
            };
            let nf = match kind.as_str() {
                "split_log" => NormalForm::SplitLog { k: *k, lambda: parse_rational(lambda)? },
                "heisenberg_pencil" => NormalForm::HeisenbergPencil { f: need_f()?, a: coeffs(a)?, b: coeffs(b)? },
                "whitney_family" => NormalForm::WhitneyFamily { a: coeffs(a)? },
                "duval_family" => NormalForm::DuvalFamily { f: need_f()?, g: Poly::parse(g, &vars)? },
                other => return Err(Error::pre(format!("unknown normal form `{other}`"))),
            };
            let r = verify_normal_form(&nf, cli.cap)?;
            let mut h = format!("{} cap {}: sigma = {}\n", r.kind, r.cap, r.sigma);
            let _ = writeln!(h, "  poisson below the cap: {}", r.poisson);
            let _ = writeln!(h, "  leading term: {}", r.leading_term);
            let _ = writeln!(h, "  tangency: {}", r.tangency);
            for (w, ok) in &r.extra {
                let _ = writeln!(h, "  {w}: {ok}");
            }
            let _ = writeln!(h, "certified: {}", r.certified());
            let code = if r.certified() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::new(
                code,
                h,
                json!({
                    "command": "verify-normal-form",
                    "kind": r.kind,
                    "cap": r.cap,
                    "sigma": r.sigma.to_string(),
                    "poisson": r.poisson,
                    "leading_term": r.leading_term,
                    "tangency": r.tangency,
                    "extra": r.extra.iter().map(|(w, ok)| json!({"check": w, "ok": ok})).collect::<Vec<_>>(),
                    "certified": r.certified(),
                }),
            ))
        }
        Command::Corpus { name } => {
            if !CORPORA.contains(&name.as_str()) {
                return Err(Error::pre(format!("unknown corpus `{name}`; known: {}", CORPORA.join(", "))));
            }
            let rep = run_corpus(name, exec)?;
            let mut h = String::new();
            for c in &rep.cases {
                let _ = writeln!(h, "{} {}: {}", if c.ok { "PASS" } else { "FAIL" }, c.label, c.detail);
            }
            let _ = writeln!(h, "{}: {} cases, {} mismatches", rep.name, rep.cases.len(), rep.mismatches());
            let code = if rep.passed() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::new(
                code,
                h,
                json!({"command": "corpus", "name": rep.name, "mismatches": rep.mismatches(), "cases": rep.cases}),
            ))
        }
    }
}

fn fmt_opt(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "-",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> (i32, String) {
        let mut v = vec!["wblow"];
        v.extend_from_slice(args);
        run(v)
    }

    const WHITNEY: &str = "2*x*@y^@z - 2*y*z*@z^@x - y^2*@x^@y";

    #[test]
    fn order_example() {
        assert_eq!(go(&["order", "--centre", "x:2 y:3 z:inf", "x^5 + x^2*y^4*z^5"]), (0, "7/3\n".into()));
        assert_eq!(go(&["order", "--centre", "x:1 y:1 z:1", "--sigma", WHITNEY]).1, "-1\n");
    }

    #[test]
    fn check_centre_example() {
        let (code, out) = go(&["check-centre", "--centre", "x:1 y:1 z:inf", "--sigma", WHITNEY]);
        assert_eq!(code, 0);
        assert!(out.contains("conilpotent: true"));
        let (code, out) = go(&["check-centre", "--centre", "x:2 y:3 z:3", "--sigma", WHITNEY]);
        assert_eq!(code, 1);
        assert!(out.contains("witness CD2[x,y,z]: order 1 < 7/6"), "{out}");
    }

    #[test]
    fn classify_example() {
        assert_eq!(go(&["classify", "x^2 + y^3 + y*z^3"]), (0, "E7 invariant=(2,3,4.5)\n".into()));
        assert_eq!(go(&["classify", "x^3 + y^3 + z^3"]).0, 3);
    }

    #[test]
    fn exit_code_taxonomy() {
        assert_eq!(go(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(go(&["order", "--centre", "x:2 y:3 z:inf", "x^^2"]).0, EXIT_USAGE);
        assert_eq!(go(&["order", "--centre", "x:2 w:3", "x"]).0, EXIT_USAGE);
        assert_eq!(go(&["lift", "--centre", "x:2 y:3 z:3", "--sigma", "@x^@y^@z"]).0, EXIT_NEGATIVE);
        assert_eq!(go(&["validate-invariant", "(2,3,5.5)"]).0, EXIT_NEGATIVE);
        assert_eq!(go(&["validate-invariant", "(2,3,4.5)"]).0, EXIT_OK);
        assert_eq!(go(&["milnor", "x^2 + y^3"]), (0, "2\n".into()));
        assert_eq!(go(&["milnor", "x*y"]).1, "1\n");
        assert_eq!(go(&["milnor", "x^2 - y^2*z"]).0, EXIT_NEGATIVE);
        assert_eq!(go(&["select-centre", "--sigma", "x*@y^@z", "--surface", "x^2 + y^3 + z^4"]).0, EXIT_USAGE);
        assert_eq!(go(&["select-centre", "--sigma", "y*@x^@z", "--curve", "x", "--curve", "y^2 - z^3"]).0, EXIT_USAGE);
        assert_eq!(go(&["corpus", "nope"]).0, EXIT_USAGE);
        assert_eq!(go(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn refusal_exit() {
        // Heisenberg linear part with a coefficient that involves x.
        let (code, out) = go(&["select-centre", "--sigma", "(x + x^2)*@y^@z", "--curve", "x", "--curve", "y^2 - z^3"]);
        assert_eq!(code, EXIT_INDETERMINATE, "{out}");
    }

    #[test]
    fn select_and_certify() {
        let (code, out) = go(&["select-centre", "--sigma", WHITNEY, "--surface", "x^2 - y^2*z", "--certify"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("case=inv_233_surface point=(0,0,0) centre=x:1 y:1 z:inf conilpotent=true"), "{out}");
    }

    #[test]
    fn resolve_and_corpus() {
        let (code, out) = go(&["resolve-curve", "y^2 - x^3"]);
        assert_eq!(code, 0);
        assert!(out.contains("complete: true"));
        let (code, out) = go(&["--jobs", "2", "corpus", "whitney"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.ends_with("whitney: 6 cases, 0 mismatches\n"));
    }

    #[test]
    fn normal_forms() {
        assert_eq!(go(&["verify-normal-form", "split_log", "--k", "2", "--lambda", "1", "--cap", "9"]).0, 0);
        assert_eq!(go(&["verify-normal-form", "duval_family", "--f", "x^2 + y^3 + z^5", "--g", "1 + x"]).0, 0);
        assert_eq!(go(&["verify-normal-form", "heisenberg_pencil", "--f", "y^2 + z^3", "--a", "0,1", "--b", "0,0,1"]).0, 0);
        assert_eq!(go(&["verify-normal-form", "duval_family"]).0, EXIT_USAGE);
    }

    fn machine_docs() -> Vec<Vec<&'static str>> {
        vec![
            vec!["--machine", "order", "--centre", "x:2 y:3 z:inf", "x^5 + x^2*y^4*z^5"],
            vec!["--machine", "lt", "--centre", "x:1 y:1 z:1", "--sigma", WHITNEY],
            vec!["--machine", "check-centre", "--centre", "x:2 y:3 z:3", "--sigma", WHITNEY],
            vec!["--machine", "lift", "--centre", "x:1 y:1 z:inf", "--sigma", WHITNEY],
            vec!["--machine", "blowup", "--centre", "x:1 y:1 z:inf", "--sigma", WHITNEY, "x^2 - y^2*z"],
            vec!["--machine", "invariant", "y^2 - x^3"],
            vec!["--machine", "validate-invariant", "(2,3,4.5)"],
            vec!["--machine", "classify", "x^2 + y^2*z + z^4"],
            vec!["--machine", "milnor", "x^2 + y^3 + z^5"],
            vec!["--machine", "resolve-curve", "y^3 - x^5"],
            vec!["--machine", "schouten", "x*@y", "y*@z"],
            vec!["--machine", "jacobian", "x^2 - y^2*z"],
            vec!["--machine", "select-centre", "--sigma", "x*y*@x^@z", "--surface", "x*y", "--certify"],
            vec!["--machine", "verify-normal-form", "whitney_family", "--a", "0,0,1"],
            vec!["--machine", "corpus", "invariants"],
        ]
    }

    #[test]
    fn machine_output_is_deterministic_and_reparses() {
        for args in machine_docs() {
            let (c1, a) = go(&args);
            let (c2, b) = go(&args);
            assert_eq!((c1, &a), (c2, &b), "{args:?}");
            let v: Value = serde_json::from_str(&a).unwrap_or_else(|e| panic!("{args:?}: {e}"));
            assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", a);
            assert_eq!(v["exit"], json!(c1));
        }
    }

    #[test]
    fn machine_values_round_trip() {
        let (_, out) = go(&["--machine", "order", "--centre", "x:2 y:3 z:inf", "x^5 + x^2*y^4*z^5"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        let ord = ExtRational::parse(v["order"].as_str().unwrap()).unwrap();
        assert_eq!(ord, ExtRational::rat(7, 3));
        let exps: Vec<ExtRational> =
            v["centre"]["exponents"].as_array().unwrap().iter().map(|e| ExtRational::parse(e.as_str().unwrap()).unwrap()).collect();
        assert_eq!(exps, vec![ExtRational::int(2), ExtRational::int(3), ExtRational::Infinity]);

        let (_, out) = go(&["--machine", "jacobian", "x^2 - y^2*z"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        let sigma = Polyvector::parse(v["sigma"].as_str().unwrap(), &Vars::xyz()).unwrap();
        assert_eq!(sigma, Polyvector::parse(WHITNEY, &Vars::xyz()).unwrap());

        let (_, out) = go(&["--machine", "classify", "x^2 + y^3 + y*z^3"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        let inv: Vec<ExtRational> =
            v["invariant"].as_array().unwrap().iter().map(|e| ExtRational::parse(e.as_str().unwrap()).unwrap()).collect();
        assert_eq!(InvariantSeq::new(inv).unwrap().to_string(), "(2,3,4.5)");
    }
}
