//! Critical inverse temperatures, the state at a critical hereditary vertex,
//! vanishing deductions and pruning of supercritical components.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::independence::log_ratio;
use super::{KmsError, KmsScalar, Rate};
use crate::exhaustive::{ck_expand, EdgeClassSet};
use crate::field::{format_rational, OrderedField};
use crate::graph::{spectral, Color, Component, TwoGraphSkeleton, VertexSubset};
use crate::linalg::Matrix;

/// How `x_i rho(A_{C,i})` compares with one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColorStatus {
    Subcritical,
    Critical,
    Supercritical,
}

impl From<Ordering> for ColorStatus {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => ColorStatus::Subcritical,
            Ordering::Equal => ColorStatus::Critical,
            Ordering::Greater => ColorStatus::Supercritical,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentStatus {
    pub component: Component,
    pub radius: [f64; 2],
    pub colors: [ColorStatus; 2],
}

impl ComponentStatus {
    pub fn is_supercritical(&self) -> bool {
        self.colors.contains(&ColorStatus::Supercritical)
    }

    /// Critical in some colour and supercritical in none.
    pub fn is_critical(&self) -> bool {
        !self.is_supercritical() && self.colors.contains(&ColorStatus::Critical)
    }
}

/// Status of every strongly connected component at the weight point `x`.
pub fn component_statuses<S: KmsScalar>(g: &TwoGraphSkeleton, x: &[S; 2]) -> Vec<ComponentStatus> {
    g.strongly_connected_components()
        .into_iter()
        .map(|component| {
            let mut radius = [0.0; 2];
            let mut colors = [ColorStatus::Subcritical; 2];
            for color in Color::ALL {
                let m = g.component_matrix(&component, color);
                radius[color.index()] = spectral::matrix_spectral_radius(&m);
                colors[color.index()] = S::radius_cmp(&m, &x[color.index()]).into();
            }
            ComponentStatus {
                component,
                radius,
                colors,
            }
        })
        .collect()
}

/// One candidate `ln rho(A_{C,i}) / r_i` for a component's critical value.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalTerm {
    pub color: Color,
    pub radius: f64,
    /// Set when the ratio is rational.
    pub exact: Option<BigRational>,
    pub expression: String,
    /// `None` when the rate was left symbolic.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentCritical {
    pub vertices: Vec<usize>,
    pub terms: Vec<CriticalTerm>,
    pub expression: String,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalBetaReport {
    pub components: Vec<ComponentCritical>,
    pub expression: String,
    pub value: Option<f64>,
}

fn max_expression(parts: &[String]) -> String {
    match parts.len() {
        0 => "0".to_string(),
        1 => parts[0].clone(),
        _ => format!("max{{{}}}", parts.join(", ")),
    }
}

fn max_value(mut values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    values.try_fold(0.0, |acc: f64, v| Some(acc.max(v?)))
}

fn critical_term(color: Color, m: &crate::graph::CountMatrix, rate: Option<Rate>) -> Option<CriticalTerm> {
    let radius = spectral::matrix_spectral_radius(m);
    // ln rho <= 0 imposes no constraint on a positive beta
    if radius <= 1.0 + 1e-12 {
        return None;
    }
    let k = spectral::integer_radius(m);
    let numerator = match k {
        Some(k) => format!("ln({k})"),
        None => format!("ln({radius:.9})"),
    };
    let (exact, expression, value) = match rate {
        None => (None, format!("{numerator}/r{}", color.number()), None),
        Some(Rate::Log(base)) => {
            let exact = k.and_then(|k| log_ratio(k, base));
            let value = radius.ln() / (base as f64).ln();
            match exact {
                Some(q) => (Some(q.clone()), format_rational(&q), Some(value)),
                None => (None, format!("{numerator}/ln({base})"), Some(value)),
            }
        }
        Some(Rate::Real(r)) => (None, format!("{numerator}/{r}"), Some(radius.ln() / r)),
    };
    Some(CriticalTerm {
        color,
        radius,
        exact,
        expression,
        value,
    })
}

/// `beta_c(C) = max_i ln rho(A_{C,i}) / r_i` for each component, floored at
/// zero, and the global maximum. A rate given as `None` stays symbolic.
pub fn critical_beta(g: &TwoGraphSkeleton, rates: [Option<Rate>; 2]) -> CriticalBetaReport {
    let components: Vec<ComponentCritical> = g
        .strongly_connected_components()
        .into_iter()
        .map(|c| {
            let terms: Vec<CriticalTerm> = Color::ALL
                .iter()
                .filter_map(|&color| {
                    critical_term(color, &g.component_matrix(&c, color), rates[color.index()])
                })
                .collect();
            let expression =
                max_expression(&terms.iter().map(|t| t.expression.clone()).collect::<Vec<_>>());
            let value = max_value(terms.iter().map(|t| t.value));
            ComponentCritical {
                vertices: c.vertices,
                terms,
                expression,
                value,
            }
        })
        .collect();
    let nonzero: Vec<String> = components
        .iter()
        .flat_map(|c| c.terms.iter().map(|t| t.expression.clone()))
        .collect();
    let expression = max_expression(&nonzero);
    let value = max_value(components.iter().map(|c| c.value));
    CriticalBetaReport {
        components,
        expression,
        value,
    }
}

/// The state at a critical hereditary vertex `c`, from the common eigenvector `z = (y, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinkState {
    pub vertex: usize,
    pub loops: [i64; 2],
    /// Each usable colour's solve of `(f_i - E_i) y = B_i`, indexed over `V \ {c}`.
    pub solves: Vec<(Color, Vec<BigRational>)>,
    /// `z`, over all vertices, with `z_c = 1`.
    pub z: Vec<BigRational>,
    /// `z / |z|_1`.
    pub values: Vec<BigRational>,
}

/// Solves for the eigenvector with eigenvalue `f_i = A_i[c][c]` in every colour
/// where `rho` of the rest is below `f_i`, insisting that the solves agree.
pub fn sink_state(g: &TwoGraphSkeleton, c: usize) -> Result<SinkState, KmsError> {
    g.ensure_valid()?;
    let n = g.vertex_count();
    if c >= n {
        return Err(KmsError::InvalidArgument(format!("no vertex #{c}")));
    }
    if !g.is_hereditary(&VertexSubset::from([c])) {
        return Err(KmsError::Unsupported(format!(
            "critical vertex {} receives edges from other vertices",
            g.name(c)
        )));
    }
    let rest: Vec<usize> = (0..n).filter(|&v| v != c).collect();
    let loops = Color::ALL.map(|color| g.matrix(color).get(c, c));
    let mut solves = Vec::new();
    for color in Color::ALL {
        let f = loops[color.index()];
        if f <= 0 {
            continue;
        }
        let e = g.matrix(color).restrict(&rest);
        let t = BigRational::new(1.into(), f.into());
        if spectral::scaled_radius_cmp_exact(&e, &t) != Ordering::Less {
            continue;
        }
        let system: Matrix<BigRational> = Matrix::from_fn(rest.len(), rest.len(), |i, j| {
            let diag = if i == j { BigRational::from_integer(f.into()) } else { BigRational::zero() };
            diag - BigRational::from_integer(e.get(i, j).into())
        });
        let b: Vec<BigRational> = rest
            .iter()
            .map(|&v| BigRational::from_integer(g.matrix(color).get(v, c).into()))
            .collect();
        let y = system.solve(&b).ok_or_else(|| {
            KmsError::Inconsistent(format!("colour-{} block system is singular", color.number()))
        })?;
        solves.push((color, y));
    }
    let Some((_, y)) = solves.first().cloned() else {
        return Err(KmsError::Unsupported(format!(
            "vertex {} has no colour whose loop count dominates the rest of the graph",
            g.name(c)
        )));
    };
    if let Some((color, other)) = solves.iter().skip(1).find(|(_, s)| *s != y) {
        return Err(KmsError::Inconsistent(format!(
            "colour-{} block solve gives ({}) but colour-{} gives ({})",
            solves[0].0.number(),
            join(&y),
            color.number(),
            join(other)
        )));
    }
    let mut z = y;
    z.insert(c, BigRational::one());
    let norm: BigRational = z.iter().cloned().sum();
    let values = z.iter().map(|v| v / &norm).collect();
    Ok(SinkState {
        vertex: c,
        loops,
        solves,
        z,
        values,
    })
}

fn join(v: &[BigRational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

/// The critical-sink state when the graph has exactly the supported shape at
/// `x`: one critical component, a single hereditary vertex, and nothing
/// supercritical.
pub fn kms1_critical_sink<S: KmsScalar>(
    g: &TwoGraphSkeleton,
    x: &[S; 2],
) -> Result<SinkState, KmsError> {
    let statuses = component_statuses(g, x);
    if let Some(s) = statuses.iter().find(|s| s.is_supercritical()) {
        return Err(KmsError::Unsupported(format!(
            "component {:?} is supercritical",
            names(g, &s.component.vertices)
        )));
    }
    let critical: Vec<&ComponentStatus> = statuses.iter().filter(|s| s.is_critical()).collect();
    match critical.as_slice() {
        [s] if s.component.vertices.len() == 1 => sink_state(g, s.component.vertices[0]),
        [s] => Err(KmsError::Unsupported(format!(
            "critical component {:?} has more than one vertex",
            names(g, &s.component.vertices)
        ))),
        [] => Err(KmsError::Unsupported("no component is critical".into())),
        _ => Err(KmsError::Unsupported(
            "more than one component is critical".into(),
        )),
    }
}

pub(crate) fn names(g: &TwoGraphSkeleton, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.name(v).to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeductionVerdict {
    /// Positivity forces the state to vanish on these vertices.
    Forced(VertexSubset),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VanishingDeduction<S> {
    pub base: usize,
    pub set: EdgeClassSet,
    /// `c_w` with `phi(prod_{e in E}(t_u - t_e t_e^*)) = sum_w c_w phi(t_w)`.
    pub coefficients: Vec<S>,
    pub verdict: DeductionVerdict,
}

/// Reads off zeros forced by positivity of the relation at `u`: if the
/// coefficient of `t_u` vanishes and the others are nonpositive, every vertex
/// with a negative coefficient must carry zero.
pub fn vanishing_deduction<S: OrderedField>(
    g: &TwoGraphSkeleton,
    x: &[S; 2],
    set: &EdgeClassSet,
) -> Result<VanishingDeduction<S>, KmsError> {
    let u = set.base();
    let coefficients = ck_expand(g, set)?.coefficients(x);
    let decisive = coefficients[u].sign() == Ordering::Equal
        && coefficients
            .iter()
            .enumerate()
            .all(|(w, c)| w == u || c.sign() != Ordering::Greater);
    let verdict = if decisive {
        DeductionVerdict::Forced(
            coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| c.sign() == Ordering::Less)
                .map(|(w, _)| w)
                .collect(),
        )
    } else {
        DeductionVerdict::Inconclusive
    };
    Ok(VanishingDeduction {
        base: u,
        set: set.clone(),
        coefficients,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceVerdict {
    /// Vertices on which every KMS state vanishes, in the order they were removed.
    pub rounds: Vec<VertexSubset>,
    pub survivors: Vec<usize>,
}

impl ExistenceVerdict {
    pub fn exists(&self) -> bool {
        !self.survivors.is_empty()
    }

    pub fn forced_zero(&self) -> VertexSubset {
        self.rounds.iter().flatten().copied().collect()
    }
}

/// Repeatedly removes the hereditary closure of the supercritical components.
pub fn kms_exists<S: KmsScalar>(
    g: &TwoGraphSkeleton,
    x: &[S; 2],
) -> Result<ExistenceVerdict, KmsError> {
    g.ensure_valid()?;
    let mut survivors: Vec<usize> = (0..g.vertex_count()).collect();
    let mut rounds = Vec::new();
    loop {
        let removed = prune_round(g, &survivors, x);
        if removed.is_empty() {
            break;
        }
        survivors.retain(|v| !removed.contains(v));
        rounds.push(removed);
        if survivors.is_empty() {
            break;
        }
    }
    Ok(ExistenceVerdict { rounds, survivors })
}

/// Vertices of `g` (indexed in the full graph) removed in one pruning round on
/// the subgraph spanned by `current`.
pub(crate) fn prune_round<S: KmsScalar>(
    g: &TwoGraphSkeleton,
    current: &[usize],
    x: &[S; 2],
) -> VertexSubset {
    let sub = g.restrict(current);
    let seed: VertexSubset = component_statuses(&sub, x)
        .into_iter()
        .filter(|s| s.is_supercritical())
        .flat_map(|s| s.component.vertices)
        .collect();
    sub.hereditary_closure(&seed)
        .into_iter()
        .map(|i| current[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::exhaustive::{minimal_exhaustive_set, MinimalExhaustive};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn four_vertex_critical_values() {
        let g = builtins::paper_four_vertex();
        let r = critical_beta(&g, [Some(Rate::Log(8)), Some(Rate::Log(13))]);
        assert_eq!(r.value, Some(1.0));
        let u = r.components.iter().find(|c| c.vertices == vec![0]).unwrap();
        assert_eq!(u.expression, "max{1/3, ln(6)/ln(13)}");
        let sym = critical_beta(&g, [Some(Rate::Log(8)), None]);
        let u = sym.components.iter().find(|c| c.vertices == vec![0]).unwrap();
        assert_eq!(u.expression, "max{1/3, ln(6)/r2}");
        assert_eq!(u.value, None);
        let x = sym.components.iter().find(|c| c.vertices == vec![3]).unwrap();
        assert_eq!(x.terms[0].exact, Some(q(1, 1)));
    }

    #[test]
    fn loopless_vertex_has_no_constraint() {
        let g = TwoGraphSkeleton::new(vec!["a".into()], vec![vec![0]], vec![vec![0]]).unwrap();
        let r = critical_beta(&g, [Some(Rate::Log(2)), Some(Rate::Log(3))]);
        assert_eq!(r.value, Some(0.0));
        assert_eq!(r.expression, "0");
    }

    #[test]
    fn sink_state_on_four_vertex() {
        let s = sink_state(&builtins::paper_four_vertex(), 3).unwrap();
        assert_eq!(s.solves.len(), 2);
        assert_eq!(s.solves[0].1, vec![q(3, 8), q(1, 8), q(3, 2)]);
        assert_eq!(s.solves[0].1, s.solves[1].1);
        assert_eq!(s.values, vec![q(3, 24), q(1, 24), q(12, 24), q(8, 24)]);
        let via_x = kms1_critical_sink(&builtins::paper_four_vertex(), &[q(1, 8), q(1, 13)]).unwrap();
        assert_eq!(via_x, s);
    }

    #[test]
    fn single_looped_vertex() {
        let g = TwoGraphSkeleton::new(vec!["a".into()], vec![vec![3]], vec![vec![5]]).unwrap();
        assert_eq!(sink_state(&g, 0).unwrap().values, vec![q(1, 1)]);
    }

    #[test]
    fn perturbed_sink_is_inconsistent() {
        let mut doc = builtins::paper_four_vertex().to_document();
        doc.red[2][3] = 19;
        doc.blue[2][3] = 12;
        let g = TwoGraphSkeleton::from_document(doc).unwrap();
        // commutation fails, so validation refuses before the solve
        assert!(sink_state(&g, 3).is_err());
    }

    #[test]
    fn deduction_on_two_vertex() {
        let g = builtins::paper_two_vertex();
        let set = EdgeClassSet::all_edges(&g, 0);
        let d = vanishing_deduction(&g, &[q(1, 2), q(1, 100)], &set).unwrap();
        assert_eq!(d.coefficients, vec![q(0, 1), q(-3, 1)]);
        assert_eq!(d.verdict, DeductionVerdict::Forced(VertexSubset::from([1])));
        let d = vanishing_deduction(&g, &[q(1, 8), q(1, 12)], &set).unwrap();
        assert_eq!(d.verdict, DeductionVerdict::Inconclusive);
    }

    #[test]
    fn deduction_on_three_vertex_red_critical() {
        let g = builtins::paper_three_vertex();
        let MinimalExhaustive::Known { relations, .. } = minimal_exhaustive_set(&g, 0).unwrap() else {
            panic!("three-vertex relation should be known");
        };
        let d = vanishing_deduction(&g, &[q(1, 8), q(1, 6)], &relations[0]).unwrap();
        assert_eq!(d.coefficients[0], q(0, 1));
        assert_eq!(d.verdict, DeductionVerdict::Forced(VertexSubset::from([1, 2])));
    }

    #[test]
    fn pruning_on_four_vertex() {
        let g = builtins::paper_four_vertex();
        let x = [8f64.powf(-0.9), 13f64.powf(-0.9)];
        let v = kms_exists(&g, &x).unwrap();
        assert_eq!(v.forced_zero(), VertexSubset::from([3]));
        assert_eq!(v.survivors, vec![0, 1, 2]);
        let cold = [8f64.powf(-0.5), 13f64.powf(-0.5)];
        assert!(!kms_exists(&g, &cold).unwrap().exists());
        let hot = kms_exists(&g, &[q(1, 100), q(1, 100)]).unwrap();
        assert_eq!(hot.survivors.len(), 4);
    }
}
