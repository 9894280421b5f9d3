use super::{EdgeSubset, MultiHypergraph};
use crate::error::Result;

/// True iff `s` is non-empty and its edges form one component of the edge
/// intersection graph.
pub fn is_connected(g: &MultiHypergraph, s: &EdgeSubset) -> bool {
    !s.is_empty() && connected_components(g, s).len() == 1
}

/// Maximal connected pieces of `s`, ordered by smallest member.
pub fn connected_components(g: &MultiHypergraph, s: &EdgeSubset) -> Vec<EdgeSubset> {
    let members = s.positions();
    let mut seen = vec![false; members.len()];
    let mut out = Vec::new();
    for start in 0..members.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![members[start]];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let ei = g.edge(members[i]);
            for j in 0..members.len() {
                if !seen[j] && ei.intersects(g.edge(members[j])) {
                    seen[j] = true;
                    comp.push(members[j]);
                    stack.push(j);
                }
            }
        }
        out.push(EdgeSubset::new(comp));
    }
    out
}

/// All connected edge subsets with at most `max_size` edges whose vertex set
/// contains `pivot`, each exactly once, in lexicographic order of their
/// sorted labels.
pub fn enumerate_connected_subgraphs(g: &MultiHypergraph, pivot: &str, max_size: usize) -> Result<Vec<EdgeSubset>> {
    let v = g.vertex_index(pivot)?;
    Ok(connected_subgraphs_at(g, v, max_size))
}

pub(crate) fn connected_subgraphs_at(g: &MultiHypergraph, pivot: usize, max_size: usize) -> Vec<EdgeSubset> {
    let mut out = Vec::new();
    if max_size == 0 {
        return out;
    }
    let mut state = Search {
        g,
        max_size,
        current: Vec::with_capacity(max_size),
        in_set: vec![false; g.size()],
        forbidden: vec![false; g.size()],
        queued: vec![false; g.size()],
        out: &mut out,
    };
    let start: Vec<usize> = g.incident_edges(pivot).to_vec();
    for &e in &start {
        state.queued[e] = true;
    }
    state.extend(start);
    out.sort_unstable();
    out
}

struct Search<'a> {
    g: &'a MultiHypergraph,
    max_size: usize,
    current: Vec<usize>,
    in_set: Vec<bool>,
    forbidden: Vec<bool>,
    queued: Vec<bool>,
    out: &'a mut Vec<EdgeSubset>,
}

impl Search<'_> {
    // Classic extension/exclusion search: each candidate is either taken
    // (recursing with its new neighbours queued) or forbidden for the rest of
    // this frame, so every connected set is reached along exactly one path.
    fn extend(&mut self, mut candidates: Vec<usize>) {
        let mut popped = Vec::new();
        while let Some(e) = candidates.pop() {
            self.queued[e] = false;
            self.current.push(e);
            self.in_set[e] = true;
            self.out.push(EdgeSubset::new(self.current.clone()));

            if self.current.len() < self.max_size {
                let mut next = candidates.clone();
                let mut added = Vec::new();
                for &n in self.g.adjacent_edges(e) {
                    if !self.in_set[n] && !self.forbidden[n] && !self.queued[n] {
                        self.queued[n] = true;
                        added.push(n);
                        next.push(n);
                    }
                }
                self.extend(next);
                for n in added {
                    self.queued[n] = false;
                }
                // `extend` clears `queued` for what it consumed; restore the
                // flags for candidates still pending in this frame.
                for &c in &candidates {
                    self.queued[c] = true;
                }
            }

            self.current.pop();
            self.in_set[e] = false;
            self.forbidden[e] = true;
            popped.push(e);
        }
        for e in popped {
            self.forbidden[e] = false;
        }
    }
}
