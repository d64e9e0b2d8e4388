use std::collections::VecDeque;

use super::AnalysisError;
use crate::dendrite::{Tree, TreeMap};

/// Membership mask of `set`, checked to induce a nonempty subtree.
pub(super) fn subtree_mask(tree: &Tree, set: &[usize]) -> Result<Vec<bool>, AnalysisError> {
    let n = tree.len();
    let mut mask = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(AnalysisError::NotASubtree(format!("vertex {v} out of range")));
        }
        mask[v] = true;
    }
    let Some(&root) = set.first() else {
        return Err(AnalysisError::NotASubtree("empty vertex set".to_string()));
    };
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut reached = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in tree.neighbors(v) {
            if mask[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    let size = mask.iter().filter(|&&m| m).count();
    if reached != size {
        return Err(AnalysisError::NotASubtree(format!(
            "{reached} of {size} vertices connected"
        )));
    }
    Ok(mask)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScramblingReport {
    pub holds: bool,
    /// Vertices of the subtree adjacent to vertices outside it.
    pub boundary: Vec<usize>,
    pub violations: Vec<usize>,
    /// Boundary vertices whose image is not stored.
    pub frontier: Vec<usize>,
}

/// Whether the map scrambles the boundary of the subtree `d1`: every non-fixed
/// boundary vertex `e` maps into a component of the tree minus `e` that meets `d1`.
pub fn boundary_scrambling_check<M: TreeMap + ?Sized>(
    d1: &[usize],
    map: &M,
) -> Result<ScramblingReport, AnalysisError> {
    let tree = map.tree();
    let mask = subtree_mask(tree, d1)?;
    let mut boundary = Vec::new();
    let mut violations = Vec::new();
    let mut frontier = Vec::new();
    for e in (0..tree.len()).filter(|&v| mask[v]) {
        if tree.neighbors(e).iter().all(|&w| mask[w]) {
            continue;
        }
        boundary.push(e);
        match map.image(e) {
            None => frontier.push(e),
            Some(fe) if fe == e => {}
            Some(fe) => {
                let w = tree.step_toward(e, fe).expect("distinct vertices");
                // the branch at e through w meets d1 exactly when w is in d1
                if !mask[w] {
                    violations.push(e);
                }
            }
        }
    }
    Ok(ScramblingReport {
        holds: violations.is_empty(),
        boundary,
        violations,
        frontier,
    })
}

/// Whether `a` separates `f(a)` from `b` and `b` separates `f(b)` from `a`.
pub fn is_outward_edge<M: TreeMap + ?Sized>(map: &M, a: usize, b: usize) -> bool {
    let tree = map.tree();
    match (map.image(a), map.image(b)) {
        (Some(fa), Some(fb)) => tree.separates(a, fa, b) && tree.separates(b, fb, a),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedSearch {
    /// A vertex equal to its image. `cutpoint == false` means no fixed cutpoint
    /// is available among the stored vertices.
    Fixed { vertex: usize, cutpoint: bool },
    /// FIXED-POINT-BELOW-DEPTH: the endpoints of this edge map outward, so a fixed
    /// point lies strictly between them, beyond the stored depth.
    BelowDepth { edge: (usize, usize) },
    /// NO-FIXED-POINT-FOUND: the listed vertices of the subtree have no stored
    /// image, which is where the search lost track.
    NotFound { frontier: Vec<usize> },
}

/// Looks for a fixed point of the map in the subtree `d1`: a fixed cutpoint
/// vertex, then an edge whose endpoints map outward, then a fixed endpoint.
pub fn fixed_cutpoint_search<M: TreeMap + ?Sized>(
    d1: &[usize],
    map: &M,
) -> Result<FixedSearch, AnalysisError> {
    let tree = map.tree();
    let mask = subtree_mask(tree, d1)?;
    let members: Vec<usize> = (0..tree.len()).filter(|&v| mask[v]).collect();
    let fixed: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&v| map.image(v) == Some(v))
        .collect();
    if let Some(&v) = fixed.iter().find(|&&v| map.is_cutpoint(v)) {
        return Ok(FixedSearch::Fixed {
            vertex: v,
            cutpoint: true,
        });
    }
    for &a in &members {
        for &b in tree.neighbors(a) {
            if a < b && mask[b] && is_outward_edge(map, a, b) {
                return Ok(FixedSearch::BelowDepth { edge: (a, b) });
            }
        }
    }
    if let Some(&v) = fixed.first() {
        return Ok(FixedSearch::Fixed {
            vertex: v,
            cutpoint: false,
        });
    }
    Ok(FixedSearch::NotFound {
        frontier: members
            .into_iter()
            .filter(|&v| map.image(v).is_none())
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSidedReport {
    /// Interior vertices of the arc from `d` to `b`, ordered from `d`.
    pub interior: Vec<usize>,
    /// No stored periodic cutpoint lies in the component of the tree minus
    /// `{d, b}` containing the open arc.
    pub hypothesis: bool,
    pub b_enters: bool,
    /// `(y, m, f^m(y))` with `f^m(y)` back in the arc but not between `y` and `b`.
    pub violations: Vec<(usize, usize, usize)>,
    pub returns: usize,
}

fn orbit_returns_to<M: TreeMap + ?Sized>(map: &M, v: usize, steps: usize) -> bool {
    let mut cur = v;
    for _ in 0..steps {
        match map.image(cur) {
            Some(w) if w == v => return true,
            Some(w) => cur = w,
            None => return false,
        }
    }
    false
}

/// Tracks returns of stored orbits to the open arc `(d, b)`: under the
/// hypothesis, `b` never enters the arc and each return of a point `y` lands
/// strictly between `y` and `b`.
pub fn one_sided_returns<M: TreeMap + ?Sized>(
    map: &M,
    d: usize,
    b: usize,
    max_steps: usize,
) -> OneSidedReport {
    let tree = map.tree();
    let path = tree.path(d, b);
    let interior: Vec<usize> = path[1..path.len().saturating_sub(1)].to_vec();
    let mut in_arc = vec![false; tree.len()];
    for &v in &interior {
        in_arc[v] = true;
    }
    let mut component = vec![false; tree.len()];
    let mut queue: VecDeque<usize> = interior.iter().copied().collect();
    for &v in &interior {
        component[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in tree.neighbors(v) {
            if w != d && w != b && !component[w] {
                component[w] = true;
                queue.push_back(w);
            }
        }
    }
    let hypothesis = !(0..tree.len())
        .any(|v| component[v] && map.is_cutpoint(v) && orbit_returns_to(map, v, max_steps));
    let mut b_enters = false;
    let mut cur = b;
    for _ in 0..max_steps {
        match map.image(cur) {
            Some(w) => {
                b_enters |= in_arc[w];
                cur = w;
            }
            None => break,
        }
    }
    let mut violations = Vec::new();
    let mut returns = 0;
    for &y in &interior {
        let mut cur = y;
        for m in 1..=max_steps {
            let Some(w) = map.image(cur) else { break };
            cur = w;
            if in_arc[w] {
                returns += 1;
                if !tree.separates(w, y, b) {
                    violations.push((y, m, w));
                }
            }
        }
    }
    OneSidedReport {
        interior,
        hypothesis,
        b_enters,
        violations,
        returns,
    }
}
