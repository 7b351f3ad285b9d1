//! Serializable reports and their human-readable rendering.
//!
//! Every scalar is a [`RenderedNumber`]: an exact `"p/q"` string when the run
//! was exact, plus a decimal. Field order is fixed, so emitting, parsing and
//! re-emitting a report is byte-identical.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exhaustive::{FactorVerdict, RelationCheck};
use crate::field::{format_rational, OrderedField, RenderedNumber};
use crate::graph::{TwoGraphSkeleton, ValidationReport, VertexSubset};
use crate::kms::{
    classify_kms, critical_beta, rationally_independent, y_closed, Classification,
    ColorStatus, DeductionVerdict, Dynamics, ExtremeKind, KmsError, KmsScalar, Rate, Regime,
    StepReason, SubinvarianceMethod, WeightPoint,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsDocument {
    pub rates: Option<[String; 2]>,
    pub beta: Option<RenderedNumber>,
    pub x: [RenderedNumber; 2],
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDocument {
    pub vertices: Vec<String>,
    pub nontrivial: bool,
    /// Spectral radius of the component's blue and red matrices.
    pub radius: [f64; 2],
    /// Per-colour comparison of `x_i rho` with one.
    pub status: [ColorStatus; 2],
    pub critical_beta: Option<String>,
    pub critical_beta_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalDocument {
    pub expression: String,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubinvarianceDocument {
    pub method: String,
    pub values: Vec<RenderedNumber>,
    /// Per-vertex error bound for approximate methods; `null` when unbounded.
    pub error_bound: Option<Vec<Option<f64>>>,
    pub agrees_with_closed_form: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDocument {
    pub base: String,
    pub relation: String,
    pub value: RenderedNumber,
    pub upper_bound_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremeKindName {
    Simplex,
    CriticalSink,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeDocument {
    pub label: String,
    pub kind: ExtremeKindName,
    pub vertex: String,
    /// Values on the vertex projections, in vertex order.
    pub values: Vec<RenderedNumber>,
    pub lifted_through: Vec<String>,
    pub factorization: FactorVerdict,
    pub relations: Vec<RelationDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDocument {
    pub removed: Vec<String>,
    pub within: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeductionDocument {
    pub base: String,
    pub relation: String,
    pub coefficients: Vec<RenderedNumber>,
    pub forced_zero: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmsReport {
    pub skeleton: String,
    pub vertices: Vec<String>,
    pub dynamics: DynamicsDocument,
    pub regime: Regime,
    pub critical_branch: bool,
    pub components: Vec<ComponentDocument>,
    pub critical_beta: Option<CriticalDocument>,
    pub subinvariance: Option<SubinvarianceDocument>,
    pub dimension: Option<usize>,
    pub extremes: Vec<ExtremeDocument>,
    pub quotient_steps: Vec<StepDocument>,
    pub deductions: Vec<DeductionDocument>,
    pub notes: Vec<String>,
}

fn rendered<S: OrderedField>(v: &S) -> RenderedNumber {
    v.to_number().rendered()
}

fn render_rational(q: &BigRational) -> RenderedNumber {
    RenderedNumber {
        exact: Some(format_rational(q)),
        decimal: crate::field::rational_to_f64(q),
    }
}

fn names(g: &TwoGraphSkeleton, set: &VertexSubset) -> Vec<String> {
    g.names_of(set)
}

fn relation_docs<S: OrderedField>(g: &TwoGraphSkeleton, checks: &[RelationCheck<S>]) -> Vec<RelationDocument> {
    checks
        .iter()
        .map(|c| RelationDocument {
            base: g.name(c.base).to_string(),
            relation: c.set.describe(g),
            value: rendered(&c.value),
            upper_bound_only: c.upper_bound_only,
        })
        .collect()
}

fn dynamics_document(d: &Dynamics) -> DynamicsDocument {
    DynamicsDocument {
        rates: d.rates().map(|r| [r[0].to_string(), r[1].to_string()]),
        beta: d.beta().map(render_rational),
        x: d.weight_point().numbers().map(|n| n.rendered()),
        exact: d.weight_point().is_exact(),
    }
}

/// Classifies at the given dynamics and assembles the report. The chosen
/// `y` method is cross-checked against the closed form when `y` converges.
pub fn build_report(
    label: &str,
    g: &TwoGraphSkeleton,
    dynamics: &Dynamics,
    y_method: &dyn SubinvarianceMethod,
) -> Result<KmsReport, KmsError> {
    match dynamics.weight_point() {
        WeightPoint::Exact(x) => assemble(label, g, dynamics, x, y_method),
        WeightPoint::Approx(x) => assemble(label, g, dynamics, x, y_method),
    }
}

fn assemble<S: KmsScalar>(
    label: &str,
    g: &TwoGraphSkeleton,
    dynamics: &Dynamics,
    x: &[S; 2],
    y_method: &dyn SubinvarianceMethod,
) -> Result<KmsReport, KmsError> {
    let c = classify_kms(g, x)?;
    let rates = dynamics.rates().copied();
    let crit = rates.map(|r| critical_beta(g, r.map(Some)));

    let components = c
        .statuses
        .iter()
        .map(|s| {
            let critical = crit.as_ref().and_then(|r| {
                r.components
                    .iter()
                    .find(|cc| cc.vertices == s.component.vertices)
            });
            ComponentDocument {
                vertices: s.component.vertices.iter().map(|&v| g.name(v).to_string()).collect(),
                nontrivial: s.component.nontrivial,
                radius: s.radius,
                status: s.colors,
                critical_beta: critical.map(|cc| cc.expression.clone()),
                critical_beta_value: critical.and_then(|cc| cc.value),
            }
        })
        .collect();

    let subinvariance = match y_closed(g, x) {
        Ok(closed) => Some(subinvariance_document(g, dynamics, &closed, y_method)?),
        Err(KmsError::Divergent(_)) => None,
        Err(e) => return Err(e),
    };

    let extremes = c
        .extremes
        .iter()
        .map(|e| {
            let (kind, vertex) = match e.kind {
                ExtremeKind::Simplex { vertex } => (ExtremeKindName::Simplex, vertex),
                ExtremeKind::CriticalSink { vertex } => (ExtremeKindName::CriticalSink, vertex),
            };
            let values = match &e.exact {
                Some(q) => q.iter().map(render_rational).collect(),
                _ => e.values.iter().map(rendered).collect(),
            };
            ExtremeDocument {
                label: e.label.clone(),
                kind,
                vertex: g.name(vertex).to_string(),
                values,
                lifted_through: names(g, &e.zero_set),
                factorization: e.verdict,
                relations: relation_docs(g, &e.checks),
            }
        })
        .collect();

    let quotient_steps = c
        .steps
        .iter()
        .map(|s| StepDocument {
            removed: names(g, &s.removed),
            within: s.within.iter().map(|&v| g.name(v).to_string()).collect(),
            reason: match &s.reason {
                StepReason::Supercritical { components } => format!(
                    "supercritical: {}",
                    components
                        .iter()
                        .map(|c| format!("{{{}}}", c.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(",")))
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
                StepReason::Deduction { base } => {
                    format!("positivity of the relations at {}", g.name(*base))
                }
                StepReason::CriticalSink { vertex } => {
                    format!("states vanishing on the critical vertex {}", g.name(*vertex))
                }
            },
        })
        .collect();

    let deductions = c
        .deductions
        .iter()
        .map(|d| DeductionDocument {
            base: g.name(d.base).to_string(),
            relation: d.set.describe(g),
            coefficients: d.coefficients.iter().map(rendered).collect(),
            forced_zero: match &d.verdict {
                DeductionVerdict::Forced(f) => Some(names(g, f)),
                DeductionVerdict::Inconclusive => None,
            },
        })
        .collect();

    let notes = notes(g, &c, rates);
    Ok(KmsReport {
        skeleton: label.to_string(),
        vertices: g.vertices().to_vec(),
        dynamics: dynamics_document(dynamics),
        regime: c.regime,
        critical_branch: c.critical_branch,
        components,
        critical_beta: crit.map(|r| CriticalDocument {
            expression: r.expression,
            value: r.value,
        }),
        subinvariance,
        dimension: c.dimension(),
        extremes,
        quotient_steps,
        deductions,
        notes,
    })
}

fn subinvariance_document<S: KmsScalar>(
    g: &TwoGraphSkeleton,
    dynamics: &Dynamics,
    closed: &[S],
    method: &dyn SubinvarianceMethod,
) -> Result<SubinvarianceDocument, KmsError> {
    let computed = method.compute(g, dynamics.weight_point())?;
    let agrees = computed.values.iter().enumerate().all(|(v, value)| {
        let reference = closed[v].to_f64();
        match (&computed.error_bound, value.exact()) {
            (None, Some(q)) if S::is_exact() => closed[v].to_number().exact() == Some(q),
            (Some(bounds), _) => {
                (value.to_f64() - reference).abs() <= bounds[v] + 1e-9 * reference.abs()
            }
            _ => (value.to_f64() - reference).abs() <= 1e-9 * reference.abs().max(1.0),
        }
    });
    Ok(SubinvarianceDocument {
        method: computed.method,
        values: computed.values.iter().map(|n| n.rendered()).collect(),
        error_bound: computed
            .error_bound
            .map(|b| b.into_iter().map(|e| e.is_finite().then_some(e)).collect()),
        agrees_with_closed_form: agrees,
    })
}

fn notes<S>(g: &TwoGraphSkeleton, c: &Classification<S>, rates: Option<[Rate; 2]>) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(sink) = &c.sink {
        notes.push(format!(
            "the state at the critical vertex {} is exhibited, not proved unique, by this computation",
            g.name(sink.vertex)
        ));
    }
    if c.regime == Regime::NoStates {
        notes.push("every vertex is forced to vanish: there are no KMS states".to_string());
    }
    if let Some([Rate::Log(k1), Rate::Log(k2)]) = rates {
        if let Ok(independent) = rationally_independent(k1, k2) {
            notes.push(format!(
                "ln({k1}) and ln({k2}) are rationally {}",
                if independent { "independent" } else { "dependent" }
            ));
        }
    }
    if c.statuses.iter().any(|s| s.colors == [ColorStatus::Critical; 2]) {
        notes.push("a component is critical in both colours at once".to_string());
    }
    notes
}

/// One sample of a sweep over `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: RenderedNumber,
    /// True when the sample is a critical value rather than a grid point.
    pub critical_sample: bool,
    pub regime: Option<Regime>,
    pub dimension: Option<usize>,
    pub survivors: Vec<String>,
    pub error: Option<String>,
}

/// Grid `start, start +- step, ...` up to `end` inclusive, plus every
/// component's critical value inside the range; rows ordered from `start` to `end`.
pub fn sweep(
    g: &TwoGraphSkeleton,
    rates: [Rate; 2],
    start: &BigRational,
    end: &BigRational,
    step: &BigRational,
) -> Result<Vec<SweepRow>, KmsError> {
    if step <= &BigRational::zero() || start == end {
        return Err(KmsError::InvalidArgument(
            "sweep needs distinct endpoints and a positive step".into(),
        ));
    }
    g.ensure_valid()?;
    let descending = start > end;
    let (lo, hi) = if descending { (end, start) } else { (start, end) };
    let mut samples: Vec<(BigRational, bool)> = Vec::new();
    let mut b = start.clone();
    while &b >= lo && &b <= hi {
        if b > BigRational::zero() {
            samples.push((b.clone(), false));
        }
        b = if descending { b - step } else { b + step };
    }
    if samples.last().map(|s| &s.0) != Some(end) && end > &BigRational::zero() {
        samples.push((end.clone(), false));
    }
    let crit = critical_beta(g, rates.map(Some));
    for component in &crit.components {
        let exact = component
            .terms
            .iter()
            .filter(|t| t.value == component.value)
            .find_map(|t| t.exact.clone());
        let value = match (exact, component.value) {
            (Some(q), _) => q,
            (None, Some(v)) if v > 0.0 => match BigRational::from_f64(v) {
                Some(q) => q,
                None => continue,
            },
            _ => continue,
        };
        if &value > lo && &value < hi && !samples.iter().any(|s| s.0 == value) {
            samples.push((value, true));
        }
    }
    samples.sort_by(|a, b| if descending { b.0.cmp(&a.0) } else { a.0.cmp(&b.0) });

    Ok(samples
        .into_iter()
        .map(|(beta, critical_sample)| sweep_row(g, rates, beta, critical_sample))
        .collect())
}

fn sweep_row(g: &TwoGraphSkeleton, rates: [Rate; 2], beta: BigRational, critical_sample: bool) -> SweepRow {
    let rendered_beta = if critical_sample && beta.denom().bits() > 32 {
        RenderedNumber {
            exact: None,
            decimal: crate::field::rational_to_f64(&beta),
        }
    } else {
        render_rational(&beta)
    };
    let outcome = Dynamics::from_rates(rates, beta).and_then(|d| match d.weight_point() {
        WeightPoint::Exact(x) => summarize(g, &classify_kms(g, x)?),
        WeightPoint::Approx(x) => summarize(g, &classify_kms(g, x)?),
    });
    match outcome {
        Ok((regime, dimension, survivors)) => SweepRow {
            beta: rendered_beta,
            critical_sample,
            regime: Some(regime),
            dimension,
            survivors,
            error: None,
        },
        Err(e) => SweepRow {
            beta: rendered_beta,
            critical_sample,
            regime: None,
            dimension: None,
            survivors: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

type Summary = (Regime, Option<usize>, Vec<String>);

fn summarize<S>(g: &TwoGraphSkeleton, c: &Classification<S>) -> Result<Summary, KmsError> {
    let pruned: VertexSubset = c
        .steps
        .iter()
        .filter(|s| matches!(s.reason, StepReason::Supercritical { .. }))
        .flat_map(|s| s.removed.iter().copied())
        .collect();
    let survivors = if c.regime == Regime::NoStates {
        Vec::new()
    } else {
        (0..g.vertex_count())
            .filter(|v| !pruned.contains(v))
            .map(|v| g.name(v).to_string())
            .collect()
    };
    Ok((c.regime, c.dimension(), survivors))
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("beta,beta_exact,critical_sample,regime,dimension,survivors,error\n");
    for r in rows {
        let regime = r
            .regime
            .map(|x| serde_json::to_value(x).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.beta.decimal,
            r.beta.exact.clone().unwrap_or_default(),
            r.critical_sample,
            regime,
            r.dimension.map(|d| d.to_string()).unwrap_or_else(|| "none".into()),
            r.survivors.join(" "),
            r.error.clone().unwrap_or_default().replace(',', ";"),
        );
    }
    out
}

fn show(n: &RenderedNumber) -> String {
    match &n.exact {
        Some(e) => e.clone(),
        None => format!("{:.12}", n.decimal),
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::AboveCritical => "above critical",
        Regime::Critical => "critical",
        Regime::BelowCritical => "below critical",
        Regime::NoStates => "no KMS states",
    }
}

pub fn render_report_table(r: &KmsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "skeleton   {}", r.skeleton);
    if let Some(rates) = &r.dynamics.rates {
        let _ = writeln!(out, "rates      r = ({}, {})", rates[0], rates[1]);
    }
    if let Some(b) = &r.dynamics.beta {
        let _ = writeln!(out, "beta       {}", show(b));
    }
    let _ = writeln!(
        out,
        "x          ({}, {}){}",
        show(&r.dynamics.x[0]),
        show(&r.dynamics.x[1]),
        if r.dynamics.exact { "  [exact]" } else { "  [float]" }
    );
    let _ = writeln!(out, "regime     {}", regime_name(r.regime));
    if let Some(c) = &r.critical_beta {
        let value = c.value.map(|v| format!(" ≈ {v:.6}")).unwrap_or_default();
        let _ = writeln!(out, "beta_c     {}{}", c.expression, value);
    }
    let _ = writeln!(out, "\ncomponents");
    for c in &r.components {
        let status = |s: ColorStatus| match s {
            ColorStatus::Subcritical => "sub",
            ColorStatus::Critical => "crit",
            ColorStatus::Supercritical => "super",
        };
        let _ = writeln!(
            out,
            "  {{{}}}  rho = ({:.6}, {:.6})  blue {}  red {}{}",
            c.vertices.join(","),
            c.radius[0],
            c.radius[1],
            status(c.status[0]),
            status(c.status[1]),
            c.critical_beta
                .as_ref()
                .map(|e| format!("  beta_c = {e}"))
                .unwrap_or_default()
        );
    }
    if let Some(y) = &r.subinvariance {
        let vals: Vec<String> = y.values.iter().map(show).collect();
        let _ = writeln!(
            out,
            "\ny ({})    ({}){}",
            y.method,
            vals.join(", "),
            if y.agrees_with_closed_form { "" } else { "  DISAGREES with closed form" }
        );
    }
    match r.dimension {
        Some(d) => {
            let _ = writeln!(out, "\nsimplex of dimension {d}; extreme points on ({}):", r.vertices.join(", "));
        }
        None => {
            let _ = writeln!(out, "\nno KMS states");
        }
    }
    for e in &r.extremes {
        let vals: Vec<String> = e.values.iter().map(show).collect();
        let verdict = match e.factorization {
            FactorVerdict::Factors => "factors",
            FactorVerdict::DoesNotFactor => "does not factor",
            FactorVerdict::Unknown => "unknown",
        };
        let _ = writeln!(out, "  {:<24} ({})  [{}]", e.label, vals.join(", "), verdict);
        for rel in e.relations.iter().filter(|rel| rel.value.decimal != 0.0) {
            let _ = writeln!(out, "      relation at {}: {} = {}", rel.base, rel.relation, show(&rel.value));
        }
    }
    if !r.quotient_steps.is_empty() {
        let _ = writeln!(out, "\nquotients");
        for s in &r.quotient_steps {
            let _ = writeln!(out, "  remove {{{}}} from {{{}}}: {}", s.removed.join(","), s.within.join(","), s.reason);
        }
    }
    for d in &r.deductions {
        let coeffs: Vec<String> = d.coefficients.iter().map(show).collect();
        let forced = d
            .forced_zero
            .as_ref()
            .map(|f| format!("forces {{{}}}", f.join(",")))
            .unwrap_or_else(|| "inconclusive".into());
        let _ = writeln!(out, "  deduction at {} via {}: c = ({}) {}", d.base, d.relation, coeffs.join(", "), forced);
    }
    if !r.notes.is_empty() {
        let _ = writeln!(out, "\nnotes");
        for n in &r.notes {
            let _ = writeln!(out, "  {n}");
        }
    }
    out
}

pub fn render_validation_table(name: &str, r: &ValidationReport) -> String {
    let mut out = String::new();
    if r.is_valid() {
        let _ = writeln!(out, "{name}: valid 2-graph skeleton");
    } else {
        let _ = writeln!(out, "{name}: INVALID ({} violation(s))", r.violations.len());
        for v in &r.violations {
            let _ = writeln!(out, "  {v}");
        }
    }
    out
}

pub fn render_sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::from("beta            regime           dim   survivors\n");
    for r in rows {
        let regime = r.regime.map(regime_name).unwrap_or("unsupported");
        let dim = r.dimension.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
        let mark = if r.critical_sample { "*" } else { " " };
        let _ = writeln!(
            out,
            "{:<14}{} {:<16} {:<5} {}{}",
            show(&r.beta),
            mark,
            regime,
            dim,
            r.survivors.join(","),
            r.error.as_ref().map(|e| format!("  ({e})")).unwrap_or_default()
        );
    }
    out
}
