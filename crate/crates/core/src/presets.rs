//! Named algebras and their expectation suites.
//!
//! A preset file is JSON:
//!
//! ```text
//! {
//!   "name": "soq3", "version": 1, "description": "...",
//!   "r": {"builtin": "glq", "n": 2, "m": 0} | {"file": "x.rmatrix.json"} | {R-matrix object},
//!   "labels": ["a", "b", ...],                 entry names of T, row-major
//!   "gauss_labels": {"A[1]": "A", ...},        names of Gauss generators
//!   "metric": {"dimension": 3, "entries": [[1, 3, "q^(-1/2)"], ...]},
//!   "minor_kind": "quantum" | "symplectic" | "cofactor",
//!   "model": "derive" | "torus",
//!   "impose": [{"symbol": "u[1,3]", "value": "..."}],
//!   "expectations": [{"name", "kind", "lhs", "rhs", "value", "in", "source", "deviation"}]
//! }
//! ```
//!
//! Expectation kinds: `equal` (default), `central`, `independent` (count in
//! `value`), `ratio` (scalar `value` with `lhs = value * rhs`) and
//! `decomposition`. `in` is `gauss` (default) or `frt`.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::QCoeff;
use crate::config::Budget;
use crate::exec::Exec;
use crate::gauss::{determinant_is_diagonal_product, Check, gauss_decompose, GaussAlgebra, GaussContext, GaussError, GaussFactors, GaussNames, MinorKind, Report};
use crate::ncpoly::{complete, Alphabet, NcPoly, NormalFormError, RelationSet, Rule, Sym, Word};
use crate::parse::{parse_coeff, EvalError};
use crate::qlinalg::{centrality_check, QMatrix};
use crate::rmatrix::{symbol_matrix, CMetric, RMatrix, RMatrixError};

const BUILTIN: &[(&str, &str)] = &[
    ("glq2", include_str!("../presets/glq2.preset.json")),
    ("glq3", include_str!("../presets/glq3.preset.json")),
    ("glq4", include_str!("../presets/glq4.preset.json")),
    ("soq3", include_str!("../presets/soq3.preset.json")),
    ("spq2", include_str!("../presets/spq2.preset.json")),
    ("glq11", include_str!("../presets/glq11.preset.json")),
    ("glq21", include_str!("../presets/glq21.preset.json")),
    ("ospq12", include_str!("../presets/ospq12.preset.json")),
];

const DATA: &[(&str, &str)] = &[
    ("soq3.rmatrix.json", include_str!("../presets/soq3.rmatrix.json")),
    ("spq2.rmatrix.json", include_str!("../presets/spq2.rmatrix.json")),
    ("ospq12.rmatrix.json", include_str!("../presets/ospq12.rmatrix.json")),
];

#[derive(Debug, Error)]
pub enum PresetError {
    #[error("unknown preset '{0}'")]
    Unknown(String),
    #[error("preset file: {0}")]
    File(String),
    #[error(transparent)]
    RMatrix(#[from] RMatrixError),
    #[error("R-matrix of '{0}' fails the Yang-Baxter equation")]
    YangBaxter(String),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("in '{expr}': {source}")]
    Expression { expr: String, source: EvalError },
}

impl From<NormalFormError> for PresetError {
    fn from(e: NormalFormError) -> Self {
        PresetError::Gauss(GaussError::Budget(e))
    }
}

impl PresetError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            PresetError::Gauss(GaussError::Budget(NormalFormError::BudgetExceeded(_)))
                | PresetError::Expression {
                    source: EvalError::Reduction(NormalFormError::BudgetExceeded(_)),
                    ..
                }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RSource {
    Builtin {
        builtin: String,
        n: usize,
        #[serde(default)]
        m: usize,
    },
    File {
        file: String,
    },
    Inline(serde_json::Value),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub dimension: usize,
    pub entries: Vec<(usize, usize, String)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[default]
    Derive,
    Torus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Imposition {
    pub symbol: String,
    pub value: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectKind {
    #[default]
    Equal,
    Central,
    Independent,
    Ratio,
    Decomposition,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    #[default]
    Gauss,
    Frt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub name: String,
    #[serde(default)]
    pub kind: ExpectKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(rename = "in", default)]
    pub domain: Domain,
    pub source: String,
    /// For a `ratio`, the name under which the derived scalar is reported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
    /// Set when the printed statement is known not to hold; the reason.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetFile {
    pub name: String,
    pub version: u32,
    #[serde(default)]
    pub description: String,
    pub r: RSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gauss_labels: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    #[serde(default = "default_kind")]
    pub minor_kind: MinorKind,
    #[serde(default)]
    pub model: Model,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub impose: Vec<Imposition>,
    /// Decomposition checks known to fail, by check name, with the reason.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub known_deviations: BTreeMap<String, String>,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
}

fn default_kind() -> MinorKind {
    MinorKind::Quantum
}

pub fn list_presets() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

/// The file text of a shipped preset.
pub fn preset_source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// A built preset: R, optional metric and the FRT algebra of `T`.
#[derive(Debug, Clone)]
pub struct Preset {
    pub spec: PresetFile,
    pub r: RMatrix,
    pub metric: Option<CMetric>,
    pub alphabet: Arc<Alphabet>,
    pub t: QMatrix,
    /// The FRT relations, inter-reduced.
    pub frt: RelationSet,
    /// `frt` completed through degree [`COMPLETION_DEGREE`]; its normal forms
    /// are canonical up to that degree.
    pub normal: RelationSet,
}

pub const COMPLETION_DEGREE: usize = 4;

fn ij(text: &str, name: &str) -> Option<(usize, usize)> {
    let inner = text.strip_prefix(name)?.strip_prefix('[')?.strip_suffix(']')?;
    let (i, j) = inner.split_once(',')?;
    Some((i.trim().parse::<usize>().ok()?.checked_sub(1)?, j.trim().parse::<usize>().ok()?.checked_sub(1)?))
}

fn parse_names(labels: &BTreeMap<String, String>, n: usize) -> Result<GaussNames, PresetError> {
    let mut names = GaussNames::default();
    for (k, v) in labels {
        let ok = |(i, j): (usize, usize)| i < n && j < n;
        if let Some(p) = ij(k, "l").filter(|&(i, j)| ok((i, j)) && i > j) {
            names.l.insert(p, v.clone());
        } else if let Some(p) = ij(k, "u").filter(|&(i, j)| ok((i, j)) && i < j) {
            names.u.insert(p, v.clone());
        } else if let Some(i) = k
            .strip_prefix("A[")
            .and_then(|r| r.strip_suffix(']'))
            .and_then(|r| r.trim().parse::<usize>().ok())
            .filter(|&i| (1..=n).contains(&i))
        {
            names.a.insert(i - 1, v.clone());
        } else {
            return Err(PresetError::File(format!("gauss label key '{}' is not l[i,j], A[i] or u[i,j]", k)));
        }
    }
    Ok(names)
}

impl PresetFile {
    pub fn from_json_str(text: &str) -> Result<Self, PresetError> {
        serde_json::from_str(text).map_err(|e| PresetError::File(e.to_string()))
    }
}

impl Preset {
    /// Builds a shipped preset.
    pub fn builtin(name: &str, budget: Budget) -> Result<Self, PresetError> {
        let text = preset_source(name).ok_or_else(|| PresetError::Unknown(name.to_string()))?;
        Self::from_spec(PresetFile::from_json_str(text)?, None, budget)
    }

    /// Loads a preset file; relative R-matrix paths resolve next to it.
    pub fn from_path(path: &Path, budget: Budget) -> Result<Self, PresetError> {
        let text = std::fs::read_to_string(path).map_err(|e| PresetError::File(format!("{}: {}", path.display(), e)))?;
        Self::from_spec(PresetFile::from_json_str(&text)?, path.parent(), budget)
    }

    /// A shipped preset name, or else a path to a preset file.
    pub fn resolve(name_or_path: &str, budget: Budget) -> Result<Self, PresetError> {
        if preset_source(name_or_path).is_some() {
            return Self::builtin(name_or_path, budget);
        }
        let p = Path::new(name_or_path);
        if p.extension().is_some_and(|e| e == "json") && p.exists() {
            return Self::from_path(p, budget);
        }
        Err(PresetError::Unknown(name_or_path.to_string()))
    }

    pub fn from_spec(spec: PresetFile, dir: Option<&Path>, budget: Budget) -> Result<Self, PresetError> {
        let r = match &spec.r {
            RSource::Builtin { builtin, n, m } => match builtin.as_str() {
                "glq" if *m == 0 => RMatrix::build_glq(*n),
                "glq" => RMatrix::build_glq_super(*n, *m),
                other => return Err(PresetError::File(format!("unknown builtin R-matrix '{}'", other))),
            },
            RSource::File { file } => {
                let text = match (DATA.iter().find(|(n, _)| n == file), dir) {
                    (_, Some(d)) if d.join(file).exists() => std::fs::read_to_string(d.join(file))
                        .map_err(|e| PresetError::File(format!("{}: {}", file, e)))?,
                    (Some((_, t)), _) => t.to_string(),
                    _ => return Err(PresetError::File(format!("R-matrix file '{}' not found", file))),
                };
                RMatrix::from_json_str(&text)?
            }
            RSource::Inline(v) => RMatrix::from_json_str(&v.to_string())?,
        };
        if !r.check_yang_baxter() && spec.model == Model::Derive {
            return Err(PresetError::YangBaxter(spec.name.clone()));
        }
        let n = r.dimension();
        let metric = match &spec.metric {
            Some(m) => {
                if m.dimension != n {
                    return Err(PresetError::File(format!("metric dimension {} does not match R ({})", m.dimension, n)));
                }
                let mut v = vec![QCoeff::zero(); n * n];
                for (i, j, text) in &m.entries {
                    if *i == 0 || *j == 0 || *i > n || *j > n {
                        return Err(PresetError::File(format!("metric entry ({},{}) outside 1..{}", i, j, n)));
                    }
                    v[(i - 1) * n + j - 1] = parse_coeff(text).map_err(|source| PresetError::Expression {
                        expr: text.clone(),
                        source,
                    })?;
                }
                Some(CMetric::new(n, v)?)
            }
            None => None,
        };
        if let Some(l) = &spec.labels {
            if l.len() != n * n {
                return Err(PresetError::File(format!("labels needs {} names", n * n)));
            }
        }
        let (alphabet, t) = symbol_matrix(r.parity(), spec.labels.as_deref());
        let frt = RelationSet::with_budget(alphabet.clone(), r.frt_relations(&t), budget)?;
        let mut base = frt.clone();
        base.set_budget(Budget {
            max_steps: budget.max_steps.max(Budget::default().max_steps),
            ..budget
        });
        let mut normal = complete(&base, COMPLETION_DEGREE, Exec::default())?;
        normal.set_budget(budget);
        Ok(Self {
            spec,
            r,
            metric,
            alphabet,
            t,
            frt,
            normal,
        })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn names(&self) -> Result<GaussNames, PresetError> {
        parse_names(&self.spec.gauss_labels, self.r.dimension())
    }

    /// The Gauss algebra: derived from R (and the metric), or for a
    /// torus-model preset the diagonal relations plus the imposed values.
    pub fn gauss(&self, budget: Budget) -> Result<GaussAlgebra, PresetError> {
        let names = self.names()?;
        let mut g = match self.spec.model {
            Model::Derive => GaussAlgebra::derive(&self.r, self.metric.as_ref(), &names, budget)?,
            Model::Torus => GaussAlgebra::torus_model(&self.r, &names, budget)?,
        };
        for imp in &self.spec.impose {
            let al = g.alphabet().clone();
            let sym = lookup_symbol(&al, &imp.symbol).ok_or_else(|| PresetError::Expression {
                expr: imp.symbol.clone(),
                source: EvalError::UnknownSymbol(imp.symbol.clone()),
            })?;
            let value = al.parse(&imp.value).map_err(|source| PresetError::Expression {
                expr: imp.value.clone(),
                source,
            })?;
            g.impose(sym, g.substitute(&value), budget)?;
        }
        Ok(g)
    }

    pub fn t_labels(&self) -> Option<&[String]> {
        self.spec.labels.as_deref()
    }

    fn parse_frt(&self, text: &str) -> Result<NcPoly, PresetError> {
        self.alphabet.parse(text).map_err(|source| PresetError::Expression {
            expr: text.to_string(),
            source,
        })
    }
}

fn lookup_symbol(al: &Alphabet, label: &str) -> Option<Sym> {
    al.lookup(label).or_else(|| {
        al.alias(label)
            .and_then(|p| p.as_monomial())
            .filter(|(c, w)| c.is_one() && w.len() == 1)
            .map(|(_, w)| w[0])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Fails as printed, for the documented reason.
    Deviation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub name: String,
    pub kind: ExpectKind,
    #[serde(rename = "in")]
    pub domain: Domain,
    pub status: Status,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub preset: String,
    pub outcomes: Vec<Outcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == s).count()
    }
}

struct Verdict {
    ok: bool,
    value: Option<String>,
    detail: Option<String>,
}

impl Verdict {
    fn of(ok: bool, detail: impl FnOnce() -> String) -> Self {
        Self {
            ok,
            value: None,
            detail: (!ok).then(detail),
        }
    }
}

/// Everything the suite needs about one preset.
pub struct SuiteInput<'a> {
    pub preset: &'a Preset,
    pub gauss: &'a GaussAlgebra,
    pub factors: &'a GaussFactors,
    pub decomposition: &'a Report,
}

fn need<'a>(e: &'a Expectation, side: &'a Option<String>, which: &str) -> Result<&'a str, PresetError> {
    side.as_deref()
        .ok_or_else(|| PresetError::File(format!("expectation '{}' needs '{}'", e.name, which)))
}

fn check_one(inp: &SuiteInput<'_>, ctx: &GaussContext<'_>, e: &Expectation) -> Result<Verdict, PresetError> {
    let g = inp.gauss;
    let al = g.alphabet();
    let eval = |text: &str| {
        ctx.eval(text).map_err(|source| PresetError::Expression {
            expr: text.to_string(),
            source,
        })
    };
    Ok(match (e.kind, e.domain) {
        (ExpectKind::Equal, Domain::Gauss) => {
            let d = &eval(need(e, &e.lhs, "lhs")?)? - &eval(need(e, &e.rhs, "rhs")?)?;
            let d = g.relations().normal_form(&d)?;
            Verdict::of(d.is_zero(), || format!("lhs - rhs = {}", d.display(al)))
        }
        (ExpectKind::Equal, Domain::Frt) => {
            let p = &inp.preset.parse_frt(need(e, &e.lhs, "lhs")?)? - &inp.preset.parse_frt(need(e, &e.rhs, "rhs")?)?;
            let d = inp.preset.normal.normal_form(&p)?;
            Verdict::of(d.is_zero(), || format!("lhs - rhs = {}", d.display(&inp.preset.alphabet)))
        }
        (ExpectKind::Central, Domain::Gauss) => {
            let z = eval(need(e, &e.lhs, "lhs")?)?;
            Verdict::of(g.is_central(&z)?, || format!("{} is not central", z.display(al)))
        }
        (ExpectKind::Central, Domain::Frt) => {
            let z = inp.preset.parse_frt(need(e, &e.lhs, "lhs")?)?;
            let ok = centrality_check(&z, &inp.preset.normal, Exec::Sequential)?;
            Verdict::of(ok, || "not central".into())
        }
        (ExpectKind::Independent, _) => {
            let want: usize = need(e, &e.value, "value")?
                .trim()
                .parse()
                .map_err(|_| PresetError::File(format!("expectation '{}': value must be a count", e.name)))?;
            let got = g.independent();
            let names: Vec<&str> = got.iter().map(|&s| al.label(s)).collect();
            Verdict {
                ok: got.len() == want,
                value: Some(got.len().to_string()),
                detail: (got.len() != want).then(|| names.join(", ")),
            }
        }
        (ExpectKind::Ratio, _) => {
            let lhs = eval(need(e, &e.lhs, "lhs")?)?;
            let rhs = eval(need(e, &e.rhs, "rhs")?)?;
            let ratio = rhs.leading().map(|(w, c)| &lhs.coeff(w) / c);
            match ratio.filter(|c| !c.is_zero() && lhs == rhs.scale(c)) {
                Some(c) => {
                    let ok = match &e.value {
                        Some(v) => parse_coeff(v).map_err(|source| PresetError::Expression { expr: v.clone(), source })? == c,
                        None => true,
                    };
                    Verdict {
                        ok,
                        value: Some(c.to_string()),
                        detail: (!ok).then(|| format!("derived scalar {}", c)),
                    }
                }
                None => Verdict::of(false, || format!("{} is not a scalar multiple of {}", lhs.display(al), rhs.display(al))),
            }
        }
        (ExpectKind::Decomposition, _) => {
            let bad: Vec<String> = inp
                .decomposition
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}: {}", c.name, c.detail.as_deref().unwrap_or("")))
                .collect();
            Verdict::of(bad.is_empty(), || bad.join("; "))
        }
    })
}

/// Runs every expectation of the preset. Expectations are independent, so
/// they are evaluated with `exec`; the report keeps file order.
pub fn run_expected_suite(inp: &SuiteInput<'_>, exec: Exec) -> Result<SuiteReport, PresetError> {
    let ctx = GaussContext::new(inp.gauss, inp.preset.t_labels()).with_factors(inp.factors);
    let results = exec.map(&inp.preset.spec.expectations, |e| check_one(inp, &ctx, e));
    let mut outcomes = Vec::new();
    for (e, r) in inp.preset.spec.expectations.iter().zip(results) {
        let v = r?;
        let status = match (v.ok, &e.deviation) {
            (true, _) => Status::Pass,
            (false, Some(_)) => Status::Deviation,
            (false, None) => Status::Fail,
        };
        outcomes.push(Outcome {
            name: e.name.clone(),
            kind: e.kind,
            domain: e.domain,
            status,
            source: e.source.clone(),
            value: v.value,
            detail: v.detail,
            deviation: if status == Status::Deviation { e.deviation.clone() } else { None },
        });
    }
    Ok(SuiteReport {
        preset: inp.preset.name().to_string(),
        outcomes,
    })
}

/// The scalars of the named `ratio` expectations, as derived (not as expected).
pub fn derived_scalars(inp: &SuiteInput<'_>) -> Result<BTreeMap<String, String>, PresetError> {
    let ctx = GaussContext::new(inp.gauss, inp.preset.t_labels()).with_factors(inp.factors);
    let mut out = BTreeMap::new();
    for e in &inp.preset.spec.expectations {
        if let (ExpectKind::Ratio, Some(name)) = (e.kind, &e.scalar) {
            let bare = Expectation { value: None, ..e.clone() };
            if let Some(v) = check_one(inp, &ctx, &bare)?.value {
                out.insert(name.clone(), v);
            }
        }
    }
    Ok(out)
}

/// A rule as text: `x*y = c*y*x` when it is a pure reordering,
/// `y*x - x*y = r` when the reordered word has coefficient one, and
/// `x*y = rhs` otherwise.
pub fn rule_text(rule: &Rule, al: &Alphabet) -> String {
    let lhs = NcPoly::word(rule.lhs.clone());
    let rev = Word::from_slice(&rule.lhs.iter().rev().copied().collect::<Vec<_>>());
    let c = rule.rhs.coeff(&rev);
    if rule.lhs.len() == 2 && rev != rule.lhs && !c.is_zero() {
        let swapped = NcPoly::term(c.clone(), rev.clone());
        let rest = &rule.rhs - &swapped;
        if rest.is_zero() {
            return format!("{} = {}", lhs.display(al), swapped.display(al));
        }
        if c.is_one() {
            return format!("{} - {} = {}", NcPoly::word(rev).display(al), lhs.display(al), (-&rest).display(al));
        }
    }
    format!("{} = {}", lhs.display(al), rule.rhs.display(al))
}

pub fn relation_texts(rel: &RelationSet) -> Vec<String> {
    let al = rel.alphabet();
    let mut rules: Vec<&Rule> = rel.rules().iter().collect();
    rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
    rules.iter().map(|r| rule_text(r, al)).collect()
}

/// The rules of a Gauss algebra without those whose left side involves a
/// formal inverse; these follow from the rules for the symbols themselves.
pub fn gauss_relation_texts(g: &GaussAlgebra) -> Vec<String> {
    let al = g.alphabet();
    let mut rules: Vec<&Rule> = g
        .relations()
        .rules()
        .iter()
        .filter(|r| r.lhs.iter().all(|&s| al.get(s).inverse_of.is_none()))
        .collect();
    rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
    rules.iter().map(|r| rule_text(r, al)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorTexts {
    /// The image of `T`, that is the product `T_L T_D T_U` in normal form.
    #[serde(rename = "T")]
    pub t: Vec<Vec<String>>,
    #[serde(rename = "TL")]
    pub tl: Vec<Vec<String>>,
    #[serde(rename = "TD")]
    pub td: Vec<Vec<String>>,
    #[serde(rename = "TU")]
    pub tu: Vec<Vec<String>>,
}

impl FactorTexts {
    pub fn new(f: &GaussFactors, al: &Alphabet) -> Self {
        Self {
            t: f.t.texts(al),
            tl: f.tl.texts(al),
            td: f.td.texts(al),
            tu: f.tu.texts(al),
        }
    }
}

fn eliminated_texts(g: &GaussAlgebra) -> BTreeMap<String, String> {
    let al = g.alphabet();
    g.eliminated()
        .iter()
        .filter(|e| al.get(e.symbol).inverse_of.is_none())
        .map(|e| (al.label(e.symbol).to_string(), e.value.display(al).to_string()))
        .collect()
}

/// Reference data for a preset, compared against the committed golden file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub preset: String,
    pub version: u32,
    pub frt_relations: Vec<String>,
    pub gauss_relations: Vec<String>,
    pub eliminated: BTreeMap<String, String>,
    pub independent: Vec<String>,
    pub factors: FactorTexts,
}

impl Golden {
    pub fn new(p: &Preset, g: &GaussAlgebra, f: &GaussFactors) -> Self {
        let al = g.alphabet();
        Self {
            preset: p.name().to_string(),
            version: p.spec.version,
            frt_relations: relation_texts(&p.frt),
            gauss_relations: gauss_relation_texts(g),
            eliminated: eliminated_texts(g),
            independent: g.independent().iter().map(|&s| al.label(s).to_string()).collect(),
            factors: FactorTexts::new(f, al),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

/// The decomposition export: factors, relations, eliminations and report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionDoc {
    pub preset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<FactorTexts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
    pub eliminated: BTreeMap<String, String>,
    pub independent_generators: usize,
    pub independent: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub derived: BTreeMap<String, String>,
    pub report: Report,
}

impl DecompositionDoc {
    pub fn new(b: &Built, factors: bool, relations: bool) -> Result<Self, PresetError> {
        let (g, al) = (&b.gauss, b.gauss.alphabet());
        let independent: Vec<String> = g.independent().iter().map(|&s| al.label(s).to_string()).collect();
        Ok(Self {
            preset: b.preset.name().to_string(),
            factors: factors.then(|| FactorTexts::new(&b.factors, al)),
            relations: relations.then(|| gauss_relation_texts(g)),
            eliminated: eliminated_texts(g),
            independent_generators: independent.len(),
            independent,
            derived: derived_scalars(&b.suite_input())?,
            report: b.report.clone(),
        })
    }
}

const DET_CHECK: &str = "determinant is the product of the diagonal factors";

fn evens_first(parity: &[u8]) -> bool {
    parity.windows(2).all(|w| w[0] <= w[1])
}

/// Builds the Gauss algebra and decomposition of a preset in one go.
pub struct Built {
    pub preset: Preset,
    pub gauss: GaussAlgebra,
    pub factors: GaussFactors,
    pub report: Report,
}

impl Built {
    pub fn new(preset: Preset, budget: Budget) -> Result<Self, PresetError> {
        let gauss = preset.gauss(budget)?;
        let (factors, mut report) = gauss_decompose(&gauss, preset.spec.minor_kind)?;
        if evens_first(gauss.parity()) {
            let det = determinant_is_diagonal_product(&gauss, &factors, preset.spec.minor_kind)?;
            report.push(if det {
                Check::pass(DET_CHECK)
            } else {
                Check::fail(DET_CHECK, "differs")
            });
        }
        report.accept(&preset.spec.known_deviations);
        Ok(Self {
            preset,
            gauss,
            factors,
            report,
        })
    }

    pub fn suite_input(&self) -> SuiteInput<'_> {
        SuiteInput {
            preset: &self.preset,
            gauss: &self.gauss,
            factors: &self.factors,
            decomposition: &self.report,
        }
    }

    pub fn golden(&self) -> Golden {
        Golden::new(&self.preset, &self.gauss, &self.factors)
    }
}

/// Gauss-context label lookup for callers that evaluate user text.
pub fn label_map(p: &Preset) -> HashMap<String, (usize, usize)> {
    let n = p.r.dimension();
    p.t_labels()
        .map(|ls| ls.iter().enumerate().map(|(k, l)| (l.clone(), (k / n, k % n))).collect())
        .unwrap_or_default()
}
