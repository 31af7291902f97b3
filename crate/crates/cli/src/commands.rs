use std::fmt::Write as _;
use std::path::Path;

use qgauss::coeff::QCoeff;
use qgauss::gauss::{triangular_projection, verify_matrix_relations, Check, GaussContext, Report, Side};
use qgauss::ncpoly::NormalFormError;
use qgauss::parse::{parse_coeff, EvalError};
use qgauss::presets::{
    gauss_relation_texts, list_presets, preset_source, relation_texts, run_expected_suite, Built, DecompositionDoc,
    Model, Preset, PresetError, PresetFile, Status,
};
use qgauss::rmatrix::RMatrix;
use qgauss::{Budget, Exec, NcPoly};
use serde::Serialize;
use serde_json::json;

use crate::{Basis, Emit, Failure, Format, Suite};

pub struct Ctx {
    pub budget: Budget,
    pub format: Format,
    pub exec: Exec,
}

fn preset_failure(e: PresetError) -> Failure {
    if e.is_budget() {
        return Failure::Budget(e.to_string());
    }
    match e {
        PresetError::Unknown(_) | PresetError::File(_) | PresetError::RMatrix(_) | PresetError::Expression { .. } => {
            Failure::Usage(e.to_string())
        }
        PresetError::YangBaxter(_) | PresetError::Gauss(_) => Failure::Verification(e.to_string()),
    }
}

fn eval_failure(input: &str, e: EvalError) -> Failure {
    match e {
        EvalError::Parse(p) => Failure::Usage(p.render(input)),
        EvalError::Reduction(NormalFormError::BudgetExceeded(n)) => {
            Failure::Budget(format!("rewriting exceeded the budget of {} steps", n))
        }
        other => Failure::Usage(other.to_string()),
    }
}

fn load(ctx: &Ctx, name: &str) -> Result<Preset, Failure> {
    Preset::resolve(name, ctx.budget).map_err(preset_failure)
}

fn build(ctx: &Ctx, name: &str) -> Result<Built, Failure> {
    Built::new(load(ctx, name)?, ctx.budget).map_err(preset_failure)
}

fn json_line<T: Serialize>(out: &mut String, v: &T) {
    out.push_str(&serde_json::to_string_pretty(v).expect("serializable"));
    out.push('\n');
}

pub fn preset_list(ctx: &Ctx, out: &mut String) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for name in list_presets() {
        let spec = PresetFile::from_json_str(preset_source(name).expect("listed")).map_err(preset_failure)?;
        rows.push(spec);
    }
    match ctx.format {
        Format::Text => {
            let w = rows.iter().map(|p| p.name.len()).max().unwrap_or(0);
            for p in &rows {
                let _ = writeln!(out, "{:w$}  v{}  {}", p.name, p.version, p.description);
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|p| json!({"name": p.name, "version": p.version, "description": p.description}))
                .collect();
            json_line(out, &json!({ "presets": v }));
        }
    }
    Ok(())
}

pub fn preset_show(name: &str, out: &mut String) -> Result<(), Failure> {
    let text = preset_source(name).ok_or_else(|| preset_failure(PresetError::Unknown(name.to_string())))?;
    out.push_str(text);
    Ok(())
}

fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Frt => "frt",
        Basis::Gauss => "gauss",
    }
}

pub fn relations(ctx: &Ctx, name: &str, basis: Basis, out: &mut String) -> Result<(), Failure> {
    let p = load(ctx, name)?;
    let rels = match basis {
        Basis::Frt => relation_texts(&p.frt),
        Basis::Gauss => gauss_relation_texts(&p.gauss(ctx.budget).map_err(preset_failure)?),
    };
    match ctx.format {
        Format::Text => {
            for r in &rels {
                let _ = writeln!(out, "{}", r);
            }
        }
        Format::Json => json_line(
            out,
            &json!({"preset": p.name(), "basis": basis_name(basis), "count": rels.len(), "relations": rels}),
        ),
    }
    Ok(())
}

fn write_matrix(out: &mut String, title: &str, m: &[Vec<String>]) {
    let _ = writeln!(out, "{}:", title);
    let widths: Vec<usize> = (0..m.first().map_or(0, |r| r.len()))
        .map(|j| m.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    for row in m {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{:w$}", c)).collect();
        let _ = writeln!(out, "  [ {} ]", cells.join("  ").trim_end());
    }
}

fn status_word(c: &Check) -> &'static str {
    match (c.passed, c.deviation.is_some()) {
        (true, _) => "pass",
        (false, true) => "deviation",
        (false, false) => "FAIL",
    }
}

fn write_report(out: &mut String, r: &Report) {
    for c in &r.checks {
        let _ = write!(out, "  {:9} {}", status_word(c), c.name);
        if let Some(d) = c.detail.as_deref() {
            let _ = write!(out, ": {}", d);
        }
        if let Some(d) = c.deviation.as_deref() {
            let _ = write!(out, " [{}]", d);
        }
        out.push('\n');
    }
}

pub fn decompose(ctx: &Ctx, name: &str, emit: Emit, out: &mut String) -> Result<(), Failure> {
    let b = build(ctx, name)?;
    let factors = matches!(emit, Emit::Factors | Emit::All);
    let relations = matches!(emit, Emit::Relations | Emit::All);
    let doc = DecompositionDoc::new(&b, factors, relations).map_err(preset_failure)?;
    match ctx.format {
        Format::Json => json_line(out, &doc),
        Format::Text => {
            let _ = writeln!(out, "preset {}", doc.preset);
            if let Some(f) = &doc.factors {
                write_matrix(out, "T", &f.t);
                write_matrix(out, "T_L", &f.tl);
                write_matrix(out, "T_D", &f.td);
                write_matrix(out, "T_U", &f.tu);
            }
            if let Some(rels) = &doc.relations {
                let _ = writeln!(out, "relations:");
                for r in rels {
                    let _ = writeln!(out, "  {}", r);
                }
            }
            if !doc.eliminated.is_empty() {
                let _ = writeln!(out, "eliminated:");
                for (k, v) in &doc.eliminated {
                    let _ = writeln!(out, "  {} = {}", k, v);
                }
            }
            let _ = writeln!(
                out,
                "independent generators: {} ({})",
                doc.independent_generators,
                doc.independent.join(", ")
            );
            for (k, v) in &doc.derived {
                let _ = writeln!(out, "derived {} = {}", k, v);
            }
            let _ = writeln!(out, "report:");
            write_report(out, &doc.report);
        }
    }
    if doc.report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(String::new()))
    }
}

#[derive(Serialize)]
struct Line {
    name: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<String>,
}

#[derive(Serialize)]
struct SuiteOut {
    suite: &'static str,
    passed: bool,
    checks: Vec<Line>,
}

fn lines_of(r: &Report) -> Vec<Line> {
    r.checks
        .iter()
        .map(|c| Line {
            name: c.name.clone(),
            status: match status_word(c) {
                "FAIL" => "fail",
                s => s,
            },
            detail: c.detail.clone(),
            deviation: c.deviation.clone(),
        })
        .collect()
}

fn suite_ybe(p: &Preset) -> SuiteOut {
    let mut r = Report::default();
    r.push(if p.r.check_yang_baxter() {
        Check::pass("Yang-Baxter equation")
    } else {
        Check::fail("Yang-Baxter equation", "R12 R13 R23 differs from R23 R13 R12")
    });
    r.push(if p.r.commutes_with_full() {
        Check::pass("[R, R_D] = 0")
    } else {
        Check {
            detail: Some("no: reflection-equation forms not applicable".into()),
            ..Check::pass("[R, R_D] = 0")
        }
    });
    SuiteOut {
        suite: "ybe",
        passed: r.passed(),
        checks: lines_of(&r),
    }
}

fn suite_frt(ctx: &Ctx, b: &Built) -> Result<SuiteOut, Failure> {
    let p = &b.preset;
    let mut r = b.report.clone();
    match p.spec.model {
        Model::Derive => {
            let v = verify_matrix_relations(&b.gauss, &p.r, p.metric.as_ref(), ctx.exec)
                .map_err(|e| preset_failure(e.into()))?;
            r.checks.extend(v.checks);
        }
        Model::Torus => r.push(Check {
            detail: Some("skipped: the Gauss algebra is a torus model with imposed shapes".into()),
            ..Check::pass("matrix relations on the Gauss factors")
        }),
    }
    if p.metric.is_none() && p.spec.model == Model::Derive {
        let rels = p.frt.relations();
        for side in [Side::Upper, Side::Lower] {
            r.push(
                triangular_projection(&p.r, &p.t, &p.frt, &rels, side, ctx.budget)
                    .map_err(|e| preset_failure(e.into()))?,
            );
        }
    }
    r.accept(&p.spec.known_deviations);
    Ok(SuiteOut {
        suite: "frt",
        passed: r.passed(),
        checks: lines_of(&r),
    })
}

fn suite_paper(ctx: &Ctx, b: &Built) -> Result<SuiteOut, Failure> {
    let rep = run_expected_suite(&b.suite_input(), ctx.exec).map_err(preset_failure)?;
    let checks = rep
        .outcomes
        .into_iter()
        .map(|o| Line {
            name: o.name,
            status: match o.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Deviation => "deviation",
            },
            detail: match (o.value, o.detail) {
                (Some(v), Some(d)) => Some(format!("value {}; {}", v, d)),
                (Some(v), None) => Some(format!("value {}", v)),
                (None, d) => d,
            },
            deviation: o.deviation,
        })
        .collect::<Vec<_>>();
    Ok(SuiteOut {
        suite: "paper",
        passed: checks.iter().all(|c| c.status != "fail"),
        checks,
    })
}

pub fn check(ctx: &Ctx, name: &str, suite: Suite, out: &mut String) -> Result<(), Failure> {
    let p = load(ctx, name)?;
    let mut suites = Vec::new();
    if matches!(suite, Suite::Ybe | Suite::All) {
        suites.push(suite_ybe(&p));
    }
    if matches!(suite, Suite::Frt | Suite::Paper | Suite::All) {
        let b = Built::new(p, ctx.budget).map_err(preset_failure)?;
        if matches!(suite, Suite::Frt | Suite::All) {
            suites.push(suite_frt(ctx, &b)?);
        }
        if matches!(suite, Suite::Paper | Suite::All) {
            suites.push(suite_paper(ctx, &b)?);
        }
    }
    let passed = suites.iter().all(|s| s.passed);
    let count = |st: &str| suites.iter().flat_map(|s| &s.checks).filter(|c| c.status == st).count();
    match ctx.format {
        Format::Json => json_line(out, &json!({"preset": name, "passed": passed, "suites": suites})),
        Format::Text => {
            for s in &suites {
                let _ = writeln!(out, "{} {}: {}", name, s.suite, if s.passed { "pass" } else { "FAIL" });
                for c in &s.checks {
                    let st = if c.status == "fail" { "FAIL" } else { c.status };
                    let _ = write!(out, "  {:9} {}", st, c.name);
                    if let Some(d) = &c.detail {
                        let _ = write!(out, ": {}", d);
                    }
                    if let Some(d) = &c.deviation {
                        let _ = write!(out, " [{}]", d);
                    }
                    out.push('\n');
                }
            }
            let _ = writeln!(
                out,
                "result: {} ({} pass, {} fail, {} deviation)",
                if passed { "pass" } else { "FAIL" },
                count("pass"),
                count("fail"),
                count("deviation")
            );
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification(String::new()))
    }
}

fn rational_s(text: &str) -> Result<qgauss::Rational, Failure> {
    let bad = || Failure::Usage(format!("--at-q expects a rational value of s = q^(1/2), got '{}'", text));
    let c = parse_coeff(text).map_err(|_| bad())?;
    if c.is_zero() {
        return Err(bad());
    }
    match c.as_monomial() {
        Some((0, r)) => Ok(r.clone()),
        _ => Err(bad()),
    }
}

pub fn normal_form(ctx: &Ctx, name: &str, expr: &str, basis: Basis, at_q: Option<&str>, out: &mut String) -> Result<(), Failure> {
    let s0 = at_q.map(rational_s).transpose()?;
    let p = load(ctx, name)?;
    let (nf, text) = match basis {
        Basis::Frt => {
            let v = p.alphabet.parse(expr).map_err(|e| eval_failure(expr, e))?;
            let nf = p
                .normal
                .normal_form(&v)
                .map_err(|e| eval_failure(expr, EvalError::Reduction(e)))?;
            let t = nf.display(&p.alphabet).to_string();
            (special(&nf, s0.as_ref(), &p.alphabet)?, t)
        }
        Basis::Gauss => {
            let g = p.gauss(ctx.budget).map_err(preset_failure)?;
            let nf = GaussContext::new(&g, p.t_labels()).eval(expr).map_err(|e| eval_failure(expr, e))?;
            let t = nf.display(g.alphabet()).to_string();
            (special(&nf, s0.as_ref(), g.alphabet())?, t)
        }
    };
    match ctx.format {
        Format::Text => {
            let _ = writeln!(out, "{}", text);
            if let (Some(s), Some(v)) = (&s0, &nf) {
                let _ = writeln!(out, "at s = {}: {}", s, v);
            }
        }
        Format::Json => {
            let mut v = json!({"preset": p.name(), "basis": basis_name(basis), "input": expr, "normal_form": text});
            if let (Some(s), Some(x)) = (&s0, &nf) {
                v["at_s"] = json!({"s": s.to_string(), "value": x});
            }
            json_line(out, &v);
        }
    }
    Ok(())
}

fn special(p: &NcPoly, s0: Option<&qgauss::Rational>, al: &qgauss::Alphabet) -> Result<Option<String>, Failure> {
    let Some(s0) = s0 else { return Ok(None) };
    let coeffs = p
        .eval_coeffs(s0)
        .map_err(|e| Failure::Usage(format!("cannot specialize at s = {}: {}", s0, e)))?;
    let v = NcPoly::from_terms(coeffs.into_iter().map(|(w, c)| (w, QCoeff::from_rational(c))));
    Ok(Some(v.display(al).to_string()))
}

pub fn rmatrix_validate(ctx: &Ctx, file: &Path, out: &mut String) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {}", file.display(), e)))?;
    let r = RMatrix::from_json_str(&text).map_err(|e| Failure::Usage(format!("{}: {}", file.display(), e)))?;
    let ybe = r.check_yang_baxter();
    let commutes = r.commutes_with_full();
    match ctx.format {
        Format::Text => {
            let _ = writeln!(out, "dimension {}", r.dimension());
            let _ = writeln!(out, "parity {:?}", r.parity());
            let _ = writeln!(out, "nonzero entries {}", r.nonzero().len());
            let _ = writeln!(out, "Yang-Baxter equation: {}", if ybe { "pass" } else { "FAIL" });
            let _ = writeln!(out, "[R, R_D] = 0: {}", if commutes { "yes" } else { "no" });
        }
        Format::Json => json_line(
            out,
            &json!({
                "file": file.display().to_string(),
                "dimension": r.dimension(),
                "parity": r.parity(),
                "nonzero": r.nonzero().len(),
                "yang_baxter": ybe,
                "commutes_with_diagonal": commutes,
            }),
        ),
    }
    if ybe {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} fails the Yang-Baxter equation", file.display())))
    }
}
