//! Full classification at one weight point: prune supercritical components,
//! handle a critical component, and collect the extreme KMS states lifted to
//! the whole graph.

use serde::{Deserialize, Serialize};

use super::critical::{
    component_statuses, names, prune_round, sink_state, vanishing_deduction, ComponentStatus,
    DeductionVerdict, SinkState, VanishingDeduction,
};
use super::simplex::kms_simplex;
use super::{KmsError, KmsScalar};
use crate::exhaustive::{factorization_checks, EdgeClassSet, FactorVerdict, RelationCheck};
use crate::graph::{TwoGraphSkeleton, VertexSubset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Every component is strictly subcritical.
    AboveCritical,
    /// Some component is critical and none supercritical.
    Critical,
    /// Some component is supercritical; states, if any, vanish on it.
    BelowCritical,
    NoStates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum ExtremeKind {
    /// `phi_eps` for `eps` concentrated at `vertex` on the surviving subgraph.
    Simplex { vertex: usize },
    /// The state built from the eigenvector at a critical hereditary vertex.
    CriticalSink { vertex: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremePoint<S> {
    pub kind: ExtremeKind,
    pub label: String,
    /// Values on every vertex projection of the full graph.
    pub values: Vec<S>,
    /// Exact values, when known independently of the scalar type.
    pub exact: Option<Vec<num_rational::BigRational>>,
    /// The hereditary set whose quotient map the state lifts through.
    pub zero_set: VertexSubset,
    pub verdict: FactorVerdict,
    pub checks: Vec<RelationCheck<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepReason {
    /// The removed vertices are the hereditary closure of these supercritical components.
    Supercritical { components: Vec<Vec<usize>> },
    /// Positivity of the relation at `base` forced the state to vanish.
    Deduction { base: usize },
    /// The critical vertex is set aside to classify the states vanishing on it.
    CriticalSink { vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientStep {
    pub removed: VertexSubset,
    pub reason: StepReason,
    /// The surviving vertex set the step was taken in.
    pub within: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification<S> {
    pub regime: Regime,
    /// Component statuses of the full graph.
    pub statuses: Vec<ComponentStatus>,
    pub steps: Vec<QuotientStep>,
    pub extremes: Vec<ExtremePoint<S>>,
    pub deductions: Vec<VanishingDeduction<S>>,
    pub sink: Option<SinkState>,
    /// True when a critical component was met at some stage of the recursion.
    pub critical_branch: bool,
}

impl<S> Classification<S> {
    /// `None` when there are no KMS states.
    pub fn dimension(&self) -> Option<usize> {
        self.extremes.len().checked_sub(1)
    }
}

struct Run<'a, S> {
    g: &'a TwoGraphSkeleton,
    x: &'a [S; 2],
    steps: Vec<QuotientStep>,
    extremes: Vec<ExtremePoint<S>>,
    deductions: Vec<VanishingDeduction<S>>,
    sink: Option<SinkState>,
    critical_branch: bool,
}

/// Classifies the KMS states at `x`. Fails with [`KmsError::Unsupported`] when
/// a critical component is not a single vertex or no deduction applies.
pub fn classify_kms<S: KmsScalar>(
    g: &TwoGraphSkeleton,
    x: &[S; 2],
) -> Result<Classification<S>, KmsError> {
    g.ensure_valid()?;
    let statuses = component_statuses(g, x);
    let mut run = Run {
        g,
        x,
        steps: Vec::new(),
        extremes: Vec::new(),
        deductions: Vec::new(),
        sink: None,
        critical_branch: false,
    };
    run.classify((0..g.vertex_count()).collect())?;
    let regime = if run.extremes.is_empty() {
        Regime::NoStates
    } else if statuses.iter().any(|s| s.is_supercritical()) {
        Regime::BelowCritical
    } else if statuses.iter().any(|s| s.is_critical()) {
        Regime::Critical
    } else {
        Regime::AboveCritical
    };
    Ok(Classification {
        regime,
        statuses,
        steps: run.steps,
        extremes: run.extremes,
        deductions: run.deductions,
        sink: run.sink,
        critical_branch: run.critical_branch,
    })
}

impl<S: KmsScalar> Run<'_, S> {
    fn classify(&mut self, current: Vec<usize>) -> Result<(), KmsError> {
        if current.is_empty() {
            return Ok(());
        }
        let removed = prune_round(self.g, &current, self.x);
        if !removed.is_empty() {
            let sub = self.g.restrict(&current);
            let components = component_statuses(&sub, self.x)
                .into_iter()
                .filter(|s| s.is_supercritical())
                .map(|s| s.component.vertices.iter().map(|&i| current[i]).collect())
                .collect();
            return self.descend(current, removed, StepReason::Supercritical { components });
        }

        let sub = self.g.restrict(&current);
        let critical: Vec<ComponentStatus> = component_statuses(&sub, self.x)
            .into_iter()
            .filter(|s| s.is_critical())
            .collect();
        if critical.is_empty() {
            return self.simplex(&current, &sub);
        }
        self.critical_branch = true;
        let lifted = |vs: &[usize]| -> Vec<String> {
            names(self.g, &vs.iter().map(|&i| current[i]).collect::<Vec<_>>())
        };
        let c = match critical.as_slice() {
            [s] if s.component.vertices.len() == 1 => s.component.vertices[0],
            [s] => {
                return Err(KmsError::Unsupported(format!(
                    "critical component {:?} has more than one vertex",
                    lifted(&s.component.vertices)
                )))
            }
            _ => {
                let all: Vec<Vec<String>> =
                    critical.iter().map(|s| lifted(&s.component.vertices)).collect();
                return Err(KmsError::Unsupported(format!(
                    "several components are critical at once: {all:?}"
                )));
            }
        };

        if sub.is_hereditary(&VertexSubset::from([c])) {
            self.critical_sink(&current, &sub, c)?;
            let vertex = current[c];
            return self.descend(
                current,
                VertexSubset::from([vertex]),
                StepReason::CriticalSink { vertex },
            );
        }

        let forced = self.deduce(&current, &sub, c)?;
        if forced.is_empty() {
            return Err(KmsError::Unsupported(format!(
                "critical vertex {} is not hereditary and no vanishing deduction applies",
                self.g.name(current[c])
            )));
        }
        let closure: VertexSubset = sub
            .hereditary_closure(&forced)
            .into_iter()
            .map(|i| current[i])
            .collect();
        let base = current[c];
        self.descend(current, closure, StepReason::Deduction { base })
    }

    fn descend(
        &mut self,
        current: Vec<usize>,
        removed: VertexSubset,
        reason: StepReason,
    ) -> Result<(), KmsError> {
        let rest = current.iter().copied().filter(|v| !removed.contains(v)).collect();
        self.steps.push(QuotientStep {
            removed,
            reason,
            within: current,
        });
        self.classify(rest)
    }

    fn zero_set(&self, current: &[usize]) -> VertexSubset {
        (0..self.g.vertex_count()).filter(|v| !current.contains(v)).collect()
    }

    fn quotient_label(&self, current: &[usize]) -> String {
        let zero = self.zero_set(current);
        if zero.is_empty() {
            String::new()
        } else {
            format!(" ∘ q_{{{}}}", self.g.names_of(&zero).join(","))
        }
    }

    fn lift(&self, current: &[usize], values: &[S]) -> Vec<S> {
        let mut full = vec![S::zero(); self.g.vertex_count()];
        for (i, v) in current.iter().enumerate() {
            full[*v] = values[i].clone();
        }
        full
    }

    fn push_extreme(
        &mut self,
        kind: ExtremeKind,
        label: String,
        values: Vec<S>,
        exact: Option<Vec<num_rational::BigRational>>,
        current: &[usize],
    ) -> Result<(), KmsError> {
        let (verdict, checks) = factorization_checks(self.g, &values, self.x)?;
        self.extremes.push(ExtremePoint {
            kind,
            label,
            values,
            exact,
            zero_set: self.zero_set(current),
            verdict,
            checks,
        });
        Ok(())
    }

    fn simplex(&mut self, current: &[usize], sub: &TwoGraphSkeleton) -> Result<(), KmsError> {
        let report = kms_simplex(sub, self.x)?;
        let suffix = self.quotient_label(current);
        for e in report.extremes {
            let vertex = current[e.vertex];
            let label = format!("φ_ε[{}]{suffix}", self.g.name(vertex));
            let values = self.lift(current, &e.values);
            self.push_extreme(ExtremeKind::Simplex { vertex }, label, values, None, current)?;
        }
        Ok(())
    }

    fn critical_sink(
        &mut self,
        current: &[usize],
        sub: &TwoGraphSkeleton,
        c: usize,
    ) -> Result<(), KmsError> {
        let mut state = sink_state(sub, c)?;
        let vertex = current[c];
        let exact: Vec<num_rational::BigRational> = {
            let mut full = vec![num_rational::BigRational::from_integer(0.into()); self.g.vertex_count()];
            for (i, v) in current.iter().enumerate() {
                full[*v] = state.values[i].clone();
            }
            full
        };
        let values: Vec<S> = exact.iter().map(S::from_rational).collect();
        let label = format!("ψ[{}]{}", self.g.name(vertex), self.quotient_label(current));
        self.push_extreme(
            ExtremeKind::CriticalSink { vertex },
            label,
            values,
            Some(exact.clone()),
            current,
        )?;
        state.vertex = vertex;
        state.values = exact;
        if self.sink.is_none() {
            self.sink = Some(state);
        }
        Ok(())
    }

    /// Union of the forced sets over the known relations at `c` and the full
    /// edge set `cΛ^1`, in subgraph indices.
    fn deduce(
        &mut self,
        current: &[usize],
        sub: &TwoGraphSkeleton,
        c: usize,
    ) -> Result<VertexSubset, KmsError> {
        let mut candidates: Vec<EdgeClassSet> =
            crate::exhaustive::minimal_exhaustive_set(sub, c)?.relations().to_vec();
        let all = EdgeClassSet::all_edges(sub, c);
        if !candidates.contains(&all) {
            candidates.push(all);
        }
        let mut forced = VertexSubset::new();
        for set in candidates {
            let d = vanishing_deduction(sub, self.x, &set)?;
            if let DeductionVerdict::Forced(f) = &d.verdict {
                forced.extend(f.iter().copied());
            }
            self.deductions.push(self.lift_deduction(current, d)?);
        }
        Ok(forced)
    }

    fn lift_deduction(
        &self,
        current: &[usize],
        d: VanishingDeduction<S>,
    ) -> Result<VanishingDeduction<S>, KmsError> {
        let base = current[d.base];
        let mut set = EdgeClassSet::empty(base);
        for (color, w) in d.set.classes() {
            set.insert(self.g, color, current[w])?;
        }
        let verdict = match d.verdict {
            DeductionVerdict::Forced(f) => {
                DeductionVerdict::Forced(f.into_iter().map(|i| current[i]).collect())
            }
            DeductionVerdict::Inconclusive => DeductionVerdict::Inconclusive,
        };
        Ok(VanishingDeduction {
            base,
            set,
            coefficients: self.lift(current, &d.coefficients),
            verdict,
        })
    }
}
