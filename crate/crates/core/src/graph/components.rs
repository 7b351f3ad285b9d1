//! Connectivity: strongly connected components, hereditary sets, quotients, sources.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::Serialize;

use super::skeleton::{Color, CountMatrix, TwoGraphSkeleton, VertexSubset};
use super::GraphError;

/// A strongly connected component of the union of the blue and red edge relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// Vertex indices in vertex-list order.
    pub vertices: Vec<usize>,
    /// True when the component carries a cycle (possibly a loop).
    pub nontrivial: bool,
}

impl Component {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }
}

impl TwoGraphSkeleton {
    fn has_edge(&self, range: usize, source: usize) -> bool {
        Color::ALL
            .iter()
            .any(|&c| self.matrix(c).get(range, source) > 0)
    }

    /// Components ordered so that each one precedes every component sending
    /// edges into it; with vertices listed in this order the vertex matrices
    /// are block upper triangular. Ties go to the smallest vertex index.
    pub fn strongly_connected_components(&self) -> Vec<Component> {
        let n = self.vertex_count();
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|s| (0..n).filter(|&r| self.has_edge(r, s)).collect())
            .collect();
        let comp_of = scc_labels(&succ);
        let count = comp_of.iter().copied().max().map_or(0, |m| m + 1);

        let mut members = vec![Vec::new(); count];
        for (v, &c) in comp_of.iter().enumerate() {
            members[c].push(v);
        }
        // range component must precede source component
        let mut blockers = vec![BTreeSet::new(); count];
        let mut waits_on = vec![0usize; count];
        for s in 0..n {
            for &r in &succ[s] {
                let (cs, cr) = (comp_of[s], comp_of[r]);
                if cs != cr && blockers[cr].insert(cs) {
                    waits_on[cs] += 1;
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..count)
            .filter(|&c| waits_on[c] == 0)
            .map(|c| Reverse((members[c][0], c)))
            .collect();
        let mut out = Vec::with_capacity(count);
        while let Some(Reverse((_, c))) = ready.pop() {
            for &next in &blockers[c] {
                waits_on[next] -= 1;
                if waits_on[next] == 0 {
                    ready.push(Reverse((members[next][0], next)));
                }
            }
            let vertices = members[c].clone();
            let nontrivial = vertices.len() > 1 || self.has_edge(vertices[0], vertices[0]);
            out.push(Component {
                vertices,
                nontrivial,
            });
        }
        out
    }

    /// `H` is hereditary when every edge with range in `H` has its source in `H`.
    pub fn is_hereditary(&self, h: &VertexSubset) -> bool {
        let n = self.vertex_count();
        h.iter()
            .all(|&r| (0..n).all(|s| h.contains(&s) || !self.has_edge(r, s)))
    }

    /// Smallest hereditary set containing `seed`.
    pub fn hereditary_closure(&self, seed: &VertexSubset) -> VertexSubset {
        let n = self.vertex_count();
        let mut closed = seed.clone();
        let mut stack: Vec<usize> = seed.iter().copied().collect();
        while let Some(r) = stack.pop() {
            for s in 0..n {
                if self.has_edge(r, s) && closed.insert(s) {
                    stack.push(s);
                }
            }
        }
        closed
    }

    /// Vertices `w` with a path from `w` to `u` (sources of paths with range `u`), `u` included.
    pub fn ancestors(&self, u: usize) -> VertexSubset {
        self.hereditary_closure(&VertexSubset::from([u]))
    }

    /// The skeleton of `Λ \ H` on the remaining vertices, in their original order.
    pub fn quotient(&self, h: &VertexSubset) -> Result<TwoGraphSkeleton, GraphError> {
        if let Some(&bad) = h.iter().find(|&&v| v >= self.vertex_count()) {
            return Err(GraphError::UnknownVertex(format!("#{bad}")));
        }
        if !self.is_hereditary(h) {
            return Err(GraphError::NotHereditary(self.names_of(h)));
        }
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|v| !h.contains(v)).collect();
        Ok(self.restrict(&keep))
    }

    /// Full subgraph on `keep`, in the given order.
    pub(crate) fn restrict(&self, keep: &[usize]) -> TwoGraphSkeleton {
        let names = keep.iter().map(|&v| self.name(v).to_string()).collect();
        TwoGraphSkeleton::from_matrices(
            names,
            self.matrix(Color::Blue).restrict(keep),
            self.matrix(Color::Red).restrict(keep),
        )
    }

    /// Vertices receiving no edges of either colour.
    pub fn absolute_sources(&self) -> VertexSubset {
        let by_color = self.sources_by_color();
        by_color[0].intersection(&by_color[1]).copied().collect()
    }

    /// For each colour, the vertices receiving no edges of that colour.
    pub fn sources_by_color(&self) -> [VertexSubset; 2] {
        Color::ALL.map(|c| {
            (0..self.vertex_count())
                .filter(|&v| self.in_degree(c, v) == 0)
                .collect()
        })
    }

    pub fn is_absolute_source(&self, v: usize) -> bool {
        Color::ALL.iter().all(|&c| self.in_degree(c, v) == 0)
    }

    pub fn component_matrix(&self, component: &Component, color: Color) -> CountMatrix {
        self.matrix(color).restrict(&component.vertices)
    }
}

/// Kosaraju labelling; `succ[v]` lists the heads of arcs leaving `v`.
pub(crate) fn scc_labels(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, targets) in succ.iter().enumerate() {
        for &t in targets {
            pred[t].push(v);
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some((v, i)) = stack.pop() {
            if i < succ[v].len() {
                stack.push((v, i + 1));
                let t = succ[v][i];
                if !seen[t] {
                    seen[t] = true;
                    stack.push((t, 0));
                }
            } else {
                order.push(v);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for &root in order.iter().rev() {
        if label[root] != usize::MAX {
            continue;
        }
        label[root] = next;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &p in &pred[v] {
                if label[p] == usize::MAX {
                    label[p] = next;
                    stack.push(p);
                }
            }
        }
        next += 1;
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn names(g: &TwoGraphSkeleton, comps: &[Component]) -> Vec<(Vec<String>, bool)> {
        comps
            .iter()
            .map(|c| {
                (
                    c.vertices.iter().map(|&v| g.name(v).to_string()).collect(),
                    c.nontrivial,
                )
            })
            .collect()
    }

    #[test]
    fn four_vertex_components() {
        let g = builtins::paper_four_vertex();
        let comps = g.strongly_connected_components();
        let expect: Vec<(Vec<String>, bool)> = vec![
            (vec!["u".into()], true),
            (vec!["v".into()], false),
            (vec!["w".into()], false),
            (vec!["x".into()], true),
        ];
        assert_eq!(names(&g, &comps), expect);
    }

    #[test]
    fn two_vertex_components() {
        let g = builtins::paper_two_vertex();
        let comps = g.strongly_connected_components();
        assert_eq!(
            names(&g, &comps),
            vec![(vec!["u".to_string()], true), (vec!["v".to_string()], false)]
        );
    }

    #[test]
    fn lonely_vertex_is_trivial() {
        let g = TwoGraphSkeleton::new(vec!["a".into()], vec![vec![0]], vec![vec![0]]).unwrap();
        let comps = g.strongly_connected_components();
        assert_eq!(comps.len(), 1);
        assert!(!comps[0].nontrivial);
    }

    #[test]
    fn cycle_through_both_colours_is_one_component() {
        let g = TwoGraphSkeleton::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![0, 0]],
            vec![vec![0, 0], vec![1, 0]],
        )
        .unwrap();
        let comps = g.strongly_connected_components();
        assert_eq!(comps.len(), 1);
        assert!(comps[0].nontrivial);
    }

    #[test]
    fn hereditary_sets() {
        let g4 = builtins::paper_four_vertex();
        assert!(g4.is_hereditary(&g4.subset(&["x"]).unwrap()));
        assert!(!g4.is_hereditary(&g4.subset(&["u"]).unwrap()));
        assert!(!g4.is_hereditary(&g4.subset(&["w"]).unwrap()));
        assert!(g4.is_hereditary(&g4.subset(&["w", "x"]).unwrap()));
        let g3 = builtins::paper_three_vertex();
        assert!(g3.is_hereditary(&g3.subset(&["w"]).unwrap()));
        assert!(g3.is_hereditary(&g3.subset(&["v", "w"]).unwrap()));
        assert_eq!(
            g4.hereditary_closure(&g4.subset(&["u"]).unwrap()).len(),
            4
        );
    }

    #[test]
    fn quotients_recover_smaller_instances() {
        let g4 = builtins::paper_four_vertex();
        let q = g4.quotient(&g4.subset(&["x"]).unwrap()).unwrap();
        assert_eq!(q, builtins::paper_three_vertex());
        let q = g4.quotient(&g4.subset(&["w", "x"]).unwrap()).unwrap();
        assert_eq!(q, builtins::paper_two_vertex());
        assert_eq!(g4.quotient(&VertexSubset::new()).unwrap(), g4);
        assert!(matches!(
            g4.quotient(&g4.subset(&["u"]).unwrap()),
            Err(GraphError::NotHereditary(_))
        ));
    }

    #[test]
    fn sources() {
        let g3 = builtins::paper_three_vertex();
        assert_eq!(g3.names_of(&g3.absolute_sources()), vec!["w"]);
        let [blue, red] = g3.sources_by_color();
        let v = g3.index_of("v").unwrap();
        assert!(blue.contains(&v));
        assert!(!red.contains(&v));
        let g2 = builtins::paper_two_vertex();
        assert_eq!(g2.names_of(&g2.absolute_sources()), vec!["v"]);
        assert!(builtins::paper_four_vertex().absolute_sources().is_empty());
    }
}
