//! Exhaustive edge sets and the Cuntz–Krieger products they define.
//!
//! Everything here works at the level of edge classes: a class `(i, w)` stands
//! for all colour-`i` edges from `w` into the base vertex `u`. The expansion of
//! `prod_{e in E} (t_u - t_e t_e^*)` is a signed sum of terms of degree `0`,
//! `e1`, `e2` and `e1 + e2`, each recording how many of its paths end at every
//! source vertex.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, OrderedField};
use crate::graph::{Color, Degree, GraphError, TwoGraphSkeleton, VertexSubset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExhaustiveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("there are no {color} edges from `{origin}` to `{base}`")]
    EmptyClass {
        base: String,
        color: Color,
        origin: String,
    },
    #[error(
        "mixed-degree paths from `{origin}` to `{base}` meet the edge set non-uniformly; \
         the expansion needs factorisation data"
    )]
    Undecidable { base: String, origin: String },
}

/// A union of full edge classes at a base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassSet {
    base: usize,
    classes: BTreeSet<(Color, usize)>,
}

impl EdgeClassSet {
    pub fn empty(base: usize) -> Self {
        Self {
            base,
            classes: BTreeSet::new(),
        }
    }

    /// All of `uΛ^1`.
    pub fn all_edges(g: &TwoGraphSkeleton, base: usize) -> Self {
        let mut set = Self::empty(base);
        for color in Color::ALL {
            set.classes.extend(Self::color_edges(g, base, color).classes);
        }
        set
    }

    /// All of `uΛ^{e_i}`.
    pub fn color_edges(g: &TwoGraphSkeleton, base: usize, color: Color) -> Self {
        let classes = (0..g.vertex_count())
            .filter(|&w| g.edges(color, base, w) > 0)
            .map(|w| (color, w))
            .collect();
        Self { base, classes }
    }

    pub fn insert(
        &mut self,
        g: &TwoGraphSkeleton,
        color: Color,
        source: usize,
    ) -> Result<(), ExhaustiveError> {
        if source >= g.vertex_count() {
            return Err(GraphError::UnknownVertex(format!("#{source}")).into());
        }
        if g.edges(color, self.base, source) == 0 {
            return Err(ExhaustiveError::EmptyClass {
                base: g.name(self.base).to_string(),
                color,
                origin: g.name(source).to_string(),
            });
        }
        self.classes.insert((color, source));
        Ok(())
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn contains(&self, color: Color, source: usize) -> bool {
        self.classes.contains(&(color, source))
    }

    pub fn classes(&self) -> impl Iterator<Item = (Color, usize)> + '_ {
        self.classes.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_subset(&self, other: &EdgeClassSet) -> bool {
        self.base == other.base && self.classes.is_subset(&other.classes)
    }

    pub fn has_color(&self, color: Color) -> bool {
        self.classes.iter().any(|(c, _)| *c == color)
    }

    /// Human-readable form such as `uΛ^{e1}{u,w} ∪ uΛ^{e2}{u,v}`.
    pub fn describe(&self, g: &TwoGraphSkeleton) -> String {
        if self.classes.is_empty() {
            return "∅".to_string();
        }
        Color::ALL
            .iter()
            .filter(|&&c| self.has_color(c))
            .map(|&c| {
                let sources: Vec<&str> = self
                    .classes
                    .iter()
                    .filter(|(cc, _)| *cc == c)
                    .map(|(_, w)| g.name(*w))
                    .collect();
                format!(
                    "{}Λ^{{e{}}}{{{}}}",
                    g.name(self.base),
                    c.number(),
                    sources.join(",")
                )
            })
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }

    pub fn to_document(&self, g: &TwoGraphSkeleton) -> EdgeClassSetDocument {
        EdgeClassSetDocument {
            base: g.name(self.base).to_string(),
            classes: self
                .classes
                .iter()
                .map(|&(color, w)| EdgeClassDocument {
                    color,
                    source: g.name(w).to_string(),
                    edges: g.edges(color, self.base, w),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassDocument {
    pub color: Color,
    pub source: String,
    pub edges: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassSetDocument {
    pub base: String,
    pub classes: Vec<EdgeClassDocument>,
}

/// Vertices with a colour-`color` path into `w`, `w` included.
fn color_ancestors(g: &TwoGraphSkeleton, w: usize, color: Color) -> VertexSubset {
    let m = g.matrix(color);
    let mut seen = VertexSubset::from([w]);
    let mut stack = vec![w];
    while let Some(r) = stack.pop() {
        for s in 0..g.vertex_count() {
            if m.get(r, s) > 0 && seen.insert(s) {
                stack.push(s);
            }
        }
    }
    seen
}

/// Classes that every finite exhaustive subset of `uΛ^1` must contain: `(i, w)`
/// is forced when a single-colour path of colour `i` runs from an absolute
/// source into `w`.
pub fn forced_edge_classes(
    g: &TwoGraphSkeleton,
    u: usize,
) -> Result<EdgeClassSet, ExhaustiveError> {
    check_vertex(g, u)?;
    let sources = g.absolute_sources();
    let mut set = EdgeClassSet::empty(u);
    for color in Color::ALL {
        for w in 0..g.vertex_count() {
            if g.edges(color, u, w) == 0 {
                continue;
            }
            if color_ancestors(g, w, color)
                .iter()
                .any(|z| sources.contains(z))
            {
                set.classes.insert((color, w));
            }
        }
    }
    Ok(set)
}

/// Which recognised local picture produced a known exhaustive set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExhaustivePattern {
    /// Every class is forced, so `uΛ^1` is the only finite exhaustive set.
    AllForced,
    /// `u` receives edges of one colour only.
    SingleColor,
    /// The three-vertex ancestor picture with one absolute source.
    SourceTriangle,
    /// No ancestor of `u` is a source of either colour; the relations at `u`
    /// are generated by `uΛ^{e1}` and `uΛ^{e2}`.
    NoSources,
}

impl fmt::Display for ExhaustivePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExhaustivePattern::AllForced => "all classes forced",
            ExhaustivePattern::SingleColor => "single incoming colour",
            ExhaustivePattern::SourceTriangle => "ancestors form the one-source triangle",
            ExhaustivePattern::NoSources => "no sources among ancestors",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalExhaustive {
    /// `u` is an absolute source; there is no relation at `u`.
    NoRelation,
    /// Relations whose Cuntz–Krieger products generate every relation at `u`.
    /// All recognised patterns give a single set except [`ExhaustivePattern::NoSources`].
    Known {
        pattern: ExhaustivePattern,
        relations: Vec<EdgeClassSet>,
    },
    Unknown { forced: EdgeClassSet },
}

impl MinimalExhaustive {
    pub fn relations(&self) -> &[EdgeClassSet] {
        match self {
            MinimalExhaustive::Known { relations, .. } => relations,
            _ => &[],
        }
    }
}

fn check_vertex(g: &TwoGraphSkeleton, u: usize) -> Result<(), ExhaustiveError> {
    if u >= g.vertex_count() {
        return Err(GraphError::UnknownVertex(format!("#{u}")).into());
    }
    Ok(())
}

pub fn minimal_exhaustive_set(
    g: &TwoGraphSkeleton,
    u: usize,
) -> Result<MinimalExhaustive, ExhaustiveError> {
    check_vertex(g, u)?;
    if g.is_absolute_source(u) {
        return Ok(MinimalExhaustive::NoRelation);
    }
    let forced = forced_edge_classes(g, u)?;
    let all = EdgeClassSet::all_edges(g, u);
    let known = |pattern, relations| MinimalExhaustive::Known { pattern, relations };

    if forced == all {
        return Ok(known(ExhaustivePattern::AllForced, vec![all]));
    }
    let received: Vec<Color> = Color::ALL
        .into_iter()
        .filter(|&c| g.in_degree(c, u) > 0)
        .collect();
    if received.len() == 1 {
        return Ok(known(ExhaustivePattern::SingleColor, vec![all]));
    }
    if source_triangle(g, u) {
        return Ok(known(ExhaustivePattern::SourceTriangle, vec![forced]));
    }
    let ancestors = g.ancestors(u);
    let by_color = g.sources_by_color();
    if ancestors
        .iter()
        .all(|a| !by_color[0].contains(a) && !by_color[1].contains(a))
    {
        let relations = Color::ALL
            .iter()
            .map(|&c| EdgeClassSet::color_edges(g, u, c))
            .collect();
        return Ok(known(ExhaustivePattern::NoSources, relations));
    }
    Ok(MinimalExhaustive::Unknown { forced })
}

/// Ancestors of `u` are exactly `{u, v, w}` with blue edges `u<-u`, `u<-v`,
/// `u<-w`, red edges `u<-u`, `u<-v`, `v<-w`, and nothing else among them.
fn source_triangle(g: &TwoGraphSkeleton, u: usize) -> bool {
    let ancestors = g.ancestors(u);
    if ancestors.len() != 3 {
        return false;
    }
    let others: Vec<usize> = ancestors.iter().copied().filter(|&a| a != u).collect();
    [(others[0], others[1]), (others[1], others[0])]
        .into_iter()
        .any(|(v, w)| {
            let blue = BTreeSet::from([(u, u), (u, v), (u, w)]);
            let red = BTreeSet::from([(u, u), (u, v), (v, w)]);
            [(Color::Blue, blue), (Color::Red, red)]
                .into_iter()
                .all(|(color, pattern)| {
                    ancestors.iter().all(|&r| {
                        ancestors
                            .iter()
                            .all(|&s| (g.edges(color, r, s) > 0) == pattern.contains(&(r, s)))
                    })
                })
        })
}

/// One signed term of an expanded product: `sign * sum of t_mu t_mu^*` over
/// the counted paths `mu` of the given degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkTerm {
    pub sign: i8,
    pub degree: Degree,
    /// `counts[w]` is the number of counted paths with source `w`.
    pub counts: Vec<u128>,
}

impl CkTerm {
    pub fn sources(&self) -> VertexSubset {
        (0..self.counts.len())
            .filter(|&w| self.counts[w] > 0)
            .collect()
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkExpansion {
    pub base: usize,
    pub terms: Vec<CkTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CkTermDocument {
    pub sign: i8,
    pub degree: [u32; 2],
    pub sources: Vec<String>,
    pub count: u128,
    pub per_source: Vec<u128>,
}

impl CkExpansion {
    /// Coefficient of `phi(t_w)` in `phi(product)` at weight point `x`.
    pub fn coefficients<S: Field>(&self, x: &[S; 2]) -> Vec<S> {
        let n = self.terms.first().map_or(0, |t| t.counts.len());
        let mut c = vec![S::zero(); n];
        for term in &self.terms {
            let weight = x[0].pow(term.degree.n1) * x[1].pow(term.degree.n2);
            let weight = if term.sign < 0 { -weight } else { weight };
            for (w, &count) in term.counts.iter().enumerate() {
                if count > 0 {
                    c[w] = c[w].clone() + weight.clone() * S::from_i64(count as i64);
                }
            }
        }
        c
    }

    pub fn to_documents(&self, g: &TwoGraphSkeleton) -> Vec<CkTermDocument> {
        self.terms
            .iter()
            .map(|t| {
                let sources = t.sources();
                CkTermDocument {
                    sign: t.sign,
                    degree: [t.degree.n1, t.degree.n2],
                    sources: sources.iter().map(|&w| g.name(w).to_string()).collect(),
                    count: t.total(),
                    per_source: sources.iter().map(|&w| t.counts[w]).collect(),
                }
            })
            .collect()
    }

    /// Text form such as `t_u - Σ_{uΛ^{e1}{u,w}} - Σ_{uΛ^{e2}{u,v}} + Σ_{uΛ^{e1+e2}{u,v}}`.
    pub fn describe(&self, g: &TwoGraphSkeleton) -> String {
        let base = g.name(self.base);
        let mut out = String::new();
        for (k, term) in self.terms.iter().enumerate() {
            let body = if term.degree == Degree::ZERO {
                format!("t_{base}")
            } else {
                let deg = match (term.degree.n1, term.degree.n2) {
                    (1, 0) => "e1".to_string(),
                    (0, 1) => "e2".to_string(),
                    _ => "e1+e2".to_string(),
                };
                let names: Vec<&str> = term.sources().iter().map(|&w| g.name(w)).collect();
                format!("Σ_{{{base}Λ^{{{deg}}}{{{}}}}}", names.join(","))
            };
            let sign = if term.sign < 0 { "-" } else { "+" };
            if k == 0 {
                if term.sign < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&body);
        }
        out
    }
}

/// Expands `prod_{e in E} (t_u - t_e t_e^*)`.
///
/// A mixed path `mu` of degree `e1 + e2` is counted when both its blue-first
/// and red-first initial edges lie in `E`. Per source this is decidable from
/// counts when one of the two conditions holds for all or none of the paths.
pub fn ck_expand(g: &TwoGraphSkeleton, e: &EdgeClassSet) -> Result<CkExpansion, ExhaustiveError> {
    let u = e.base();
    check_vertex(g, u)?;
    for (color, w) in e.classes() {
        if w >= g.vertex_count() || g.edges(color, u, w) == 0 {
            return Err(ExhaustiveError::EmptyClass {
                base: g.name(u).to_string(),
                color,
                origin: g.name(w.min(g.vertex_count() - 1)).to_string(),
            });
        }
    }
    let n = g.vertex_count();
    let mut lead = vec![0u128; n];
    lead[u] = 1;
    let mut terms = vec![CkTerm {
        sign: 1,
        degree: Degree::ZERO,
        counts: lead,
    }];
    for color in Color::ALL {
        if !e.has_color(color) {
            continue;
        }
        let counts = (0..n)
            .map(|w| {
                if e.contains(color, w) {
                    g.edges(color, u, w) as u128
                } else {
                    0
                }
            })
            .collect();
        terms.push(CkTerm {
            sign: -1,
            degree: Degree::unit(color),
            counts,
        });
    }
    if e.has_color(Color::Blue) && e.has_color(Color::Red) {
        let mut counts = vec![0u128; n];
        for (w, slot) in counts.iter_mut().enumerate() {
            let mut total = 0u128;
            let mut blue_first = 0u128;
            let mut red_first = 0u128;
            for z in 0..n {
                let bz = g.edges(Color::Blue, u, z) as u128;
                let rz = g.edges(Color::Red, u, z) as u128;
                let via_blue = bz * g.edges(Color::Red, z, w) as u128;
                let via_red = rz * g.edges(Color::Blue, z, w) as u128;
                total += via_blue;
                if e.contains(Color::Blue, z) {
                    blue_first += via_blue;
                }
                if e.contains(Color::Red, z) {
                    red_first += via_red;
                }
            }
            *slot = if blue_first == total {
                red_first
            } else if red_first == total {
                blue_first
            } else if blue_first == 0 || red_first == 0 {
                0
            } else {
                return Err(ExhaustiveError::Undecidable {
                    base: g.name(u).to_string(),
                    origin: g.name(w).to_string(),
                });
            };
        }
        terms.push(CkTerm {
            sign: 1,
            degree: Degree::E12,
            counts,
        });
    }
    Ok(CkExpansion { base: u, terms })
}

/// `phi(prod)` for a state with vertex values `state`, using
/// `phi(t_mu t_mu^*) = x^{d(mu)} phi(t_{s(mu)})`.
pub fn ck_evaluate<S: Field>(expansion: &CkExpansion, state: &[S], x: &[S; 2]) -> S {
    expansion
        .coefficients(x)
        .into_iter()
        .zip(state)
        .fold(S::zero(), |acc, (c, v)| acc + c * v.clone())
}

/// Outcome of checking one relation against a state.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck<S> {
    pub base: usize,
    pub set: EdgeClassSet,
    pub value: S,
    /// True when the set is only known to contain a generating relation.
    pub upper_bound_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorVerdict {
    /// Every generating relation vanishes.
    Factors,
    /// Some relation is nonzero on the state.
    DoesNotFactor,
    /// Only consequences of unknown generating relations could be tested and they vanish.
    Unknown,
}

/// Decides whether a state given by its vertex values factors through the
/// Cuntz–Krieger quotient by evaluating the relation at every vertex.
pub fn factorization_checks<S: OrderedField>(
    g: &TwoGraphSkeleton,
    state: &[S],
    x: &[S; 2],
) -> Result<(FactorVerdict, Vec<RelationCheck<S>>), ExhaustiveError> {
    let mut checks = Vec::new();
    let mut verdict = FactorVerdict::Factors;
    for u in 0..g.vertex_count() {
        let (sets, upper_bound_only) = match minimal_exhaustive_set(g, u)? {
            MinimalExhaustive::NoRelation => continue,
            MinimalExhaustive::Known { relations, .. } => (relations, false),
            MinimalExhaustive::Unknown { .. } => (vec![EdgeClassSet::all_edges(g, u)], true),
        };
        for set in sets {
            let value = ck_evaluate(&ck_expand(g, &set)?, state, x);
            let vanishes = value.sign() == std::cmp::Ordering::Equal;
            if !vanishes {
                verdict = FactorVerdict::DoesNotFactor;
            } else if upper_bound_only && verdict == FactorVerdict::Factors {
                verdict = FactorVerdict::Unknown;
            }
            checks.push(RelationCheck {
                base: u,
                set,
                value,
                upper_bound_only,
            });
        }
    }
    Ok((verdict, checks))
}
