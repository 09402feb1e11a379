//! Combinatorial isomorphism by invariant refinement and backtracking.

use std::collections::{BTreeMap, HashSet};

use super::{Face, SimplicialComplex, Vertex};

/// Per-vertex invariant: link f-vector and the sorted degrees of the neighbours.
type Signature = (Vec<usize>, Vec<usize>);

struct Side<'a> {
    complex: &'a SimplicialComplex,
    adjacent: Vec<Vec<bool>>,
    signatures: Vec<Signature>,
    // facets as vertex-index lists
    facets_at: Vec<Vec<Vec<usize>>>,
}

impl<'a> Side<'a> {
    fn new(k: &'a SimplicialComplex) -> Self {
        let vs = k.vertices();
        let n = vs.len();
        let idx = |v: Vertex| vs.binary_search(&v).expect("vertex of complex");
        let mut adjacent = vec![vec![false; n]; n];
        for e in k.faces(1) {
            let (a, b) = (idx(e.vertices()[0]), idx(e.vertices()[1]));
            adjacent[a][b] = true;
            adjacent[b][a] = true;
        }
        let degree: Vec<usize> = adjacent.iter().map(|r| r.iter().filter(|x| **x).count()).collect();
        let signatures = (0..n)
            .map(|i| {
                let lk = k.link(&Face::of(&[vs[i]])).expect("vertex is a face");
                let mut nd: Vec<usize> = (0..n).filter(|&j| adjacent[i][j]).map(|j| degree[j]).collect();
                nd.sort_unstable();
                (lk.f_vector().counts, nd)
            })
            .collect();
        let mut facets_at = vec![Vec::new(); n];
        for f in k.facets() {
            let ix: Vec<usize> = f.vertices().iter().map(|&v| idx(v)).collect();
            for &i in &ix {
                facets_at[i].push(ix.clone());
            }
        }
        Side { complex: k, adjacent, signatures, facets_at }
    }
}

/// Finds a vertex bijection `K -> L` mapping facets onto facets, if one exists.
///
/// The search is deterministic: vertices of `K` are assigned in a fixed
/// breadth-first order and candidates in `L` are tried in increasing order.
pub fn is_isomorphic(k: &SimplicialComplex, l: &SimplicialComplex) -> Option<BTreeMap<Vertex, Vertex>> {
    if k.f_vector() != l.f_vector() || k.facets().len() != l.facets().len() {
        return None;
    }
    let a = Side::new(k);
    let b = Side::new(l);
    let mut sa = a.signatures.clone();
    let mut sb = b.signatures.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let n = k.num_vertices();
    if n == 0 {
        return Some(BTreeMap::new());
    }

    let order = search_order(&a);
    let targets: HashSet<Vec<usize>> = b
        .complex
        .facets()
        .iter()
        .map(|f| f.vertices().iter().map(|v| l.vertices().binary_search(v).unwrap()).collect())
        .collect();
    let mut position = vec![usize::MAX; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(&a, &b, &order, &position, &targets, 0, &mut image, &mut used) {
        Some(
            (0..n)
                .map(|i| (k.vertices()[i], l.vertices()[image[i]]))
                .collect(),
        )
    } else {
        None
    }
}

fn search_order(a: &Side<'_>) -> Vec<usize> {
    let n = a.adjacent.len();
    let mut class_size: BTreeMap<&Signature, usize> = BTreeMap::new();
    for s in &a.signatures {
        *class_size.entry(s).or_default() += 1;
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        // start each component at its rarest signature
        let start = (0..n)
            .filter(|&i| !seen[i])
            .min_by_key(|&i| (class_size[&a.signatures[i]], i))
            .expect("unvisited vertex");
        seen[start] = true;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in 0..n {
                if a.adjacent[v][w] && !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Side<'_>,
    b: &Side<'_>,
    order: &[usize],
    position: &[usize],
    targets: &HashSet<Vec<usize>>,
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..used.len() {
        if used[w] || a.signatures[v] != b.signatures[w] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| a.adjacent[v][u] == b.adjacent[w][image[u]]);
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        // facets completed by this assignment must land on facets
        let facets_ok = a.facets_at[v].iter().all(|f| {
            if f.iter().any(|&x| position[x] > depth) {
                return true;
            }
            let mut mapped: Vec<usize> = f.iter().map(|&x| image[x]).collect();
            mapped.sort_unstable();
            targets.contains(&mapped)
        });
        if facets_ok && extend(a, b, order, position, targets, depth + 1, image, used) {
            return true;
        }
        used[w] = false;
        image[v] = usize::MAX;
    }
    false
}
