//! Minimum-weight spanning arborescence (Chu–Liu/Edmonds with cycle
//! contraction).

use crate::error::{Error, Result};

/// Weighted arc between dense vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub weight: u64,
}

/// Returns the indices (into `arcs`) of a minimum-weight spanning
/// arborescence over `vertex_count` vertices rooted at `root`.
///
/// Among equal-weight incoming arcs the one listed first wins, so callers
/// get lowest-id tie-breaking by passing arcs sorted by `(from, to)`.
/// Fails with the first vertex (by index) that cannot be reached from the
/// root.
pub fn min_arborescence(vertex_count: usize, root: usize, arcs: &[Arc]) -> Result<Vec<usize>> {
    let usable: Vec<(usize, Arc)> = arcs
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, a)| a.from != a.to && a.to != root)
        .collect();
    let level: Vec<Arc> = usable.iter().map(|&(_, a)| a).collect();
    let chosen = contract(vertex_count, root, &level)?;
    let mut picked: Vec<usize> = chosen.into_iter().map(|i| usable[i].0).collect();
    picked.sort_unstable();
    Ok(picked)
}

/// One level of the recursion. Returns indices into `arcs`.
fn contract(vertex_count: usize, root: usize, arcs: &[Arc]) -> Result<Vec<usize>> {
    const NONE: usize = usize::MAX;

    // cheapest incoming arc per vertex, first listed on ties
    let mut best_in = vec![NONE; vertex_count];
    for (i, a) in arcs.iter().enumerate() {
        if a.to == root || a.from == a.to {
            continue;
        }
        let cur = best_in[a.to];
        if cur == NONE || a.weight < arcs[cur].weight {
            best_in[a.to] = i;
        }
    }
    if let Some(v) = (0..vertex_count).find(|&v| v != root && best_in[v] == NONE) {
        return Err(Error::Infeasible(v));
    }

    // cycle detection on the best-in functional graph
    let mut cycle_id = vec![NONE; vertex_count];
    let mut visit = vec![NONE; vertex_count];
    let mut cycles = 0usize;
    for start in 0..vertex_count {
        let mut v = start;
        while v != root && visit[v] == NONE && cycle_id[v] == NONE {
            visit[v] = start;
            v = arcs[best_in[v]].from;
        }
        if v != root && visit[v] == start && cycle_id[v] == NONE {
            let mut x = v;
            loop {
                cycle_id[x] = cycles;
                x = arcs[best_in[x]].from;
                if x == v {
                    break;
                }
            }
            cycles += 1;
        }
    }
    if cycles == 0 {
        return Ok((0..vertex_count)
            .filter(|&v| v != root)
            .map(|v| best_in[v])
            .collect());
    }

    // contracted vertex ids: cycles first, then remaining vertices
    let mut new_id = vec![NONE; vertex_count];
    let mut next = cycles;
    for v in 0..vertex_count {
        new_id[v] = if cycle_id[v] != NONE {
            cycle_id[v]
        } else {
            next += 1;
            next - 1
        };
    }
    let mut reduced = Vec::with_capacity(arcs.len());
    let mut origin = Vec::with_capacity(arcs.len());
    for (i, a) in arcs.iter().enumerate() {
        let (f, t) = (new_id[a.from], new_id[a.to]);
        if f == t {
            continue;
        }
        let weight = if cycle_id[a.to] != NONE {
            a.weight - arcs[best_in[a.to]].weight
        } else {
            a.weight
        };
        reduced.push(Arc {
            from: f,
            to: t,
            weight,
        });
        origin.push(i);
    }
    let inner = match contract(next, new_id[root], &reduced) {
        Ok(inner) => inner,
        // report an original vertex
        Err(Error::Infeasible(c)) => {
            let v = (0..vertex_count).find(|&v| new_id[v] == c).unwrap_or(c);
            return Err(Error::Infeasible(v));
        }
        Err(e) => return Err(e),
    };

    let mut result: Vec<usize> = inner.into_iter().map(|i| origin[i]).collect();
    let mut entered = vec![NONE; cycles];
    for &i in &result {
        let c = cycle_id[arcs[i].to];
        if c != NONE {
            entered[c] = arcs[i].to;
        }
    }
    for v in 0..vertex_count {
        let c = cycle_id[v];
        if c != NONE && entered[c] != v {
            result.push(best_in[v]);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(from: usize, to: usize, weight: u64) -> Arc {
        Arc { from, to, weight }
    }

    fn total(arcs: &[Arc], picked: &[usize]) -> u64 {
        picked.iter().map(|&i| arcs[i].weight).sum()
    }

    /// Enumerates every choice of one incoming arc per non-root vertex and
    /// keeps the cheapest choice that forms a tree.
    fn brute_force(n: usize, root: usize, arcs: &[Arc]) -> Option<u64> {
        let incoming: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                (0..arcs.len())
                    .filter(|&i| arcs[i].to == v && arcs[i].from != v)
                    .collect()
            })
            .collect();
        let others: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        let mut best: Option<u64> = None;
        let mut choice = vec![0usize; others.len()];
        if others.iter().any(|&v| incoming[v].is_empty()) {
            return None;
        }
        loop {
            let mut parent = vec![usize::MAX; n];
            let mut w = 0;
            for (slot, &v) in others.iter().enumerate() {
                let a = arcs[incoming[v][choice[slot]]];
                parent[v] = a.from;
                w += a.weight;
            }
            let acyclic = others.iter().all(|&v| {
                let mut x = v;
                for _ in 0..n {
                    if x == root {
                        return true;
                    }
                    x = parent[x];
                }
                false
            });
            if acyclic {
                best = Some(best.map_or(w, |b: u64| b.min(w)));
            }
            let mut slot = 0;
            loop {
                if slot == others.len() {
                    return best;
                }
                choice[slot] += 1;
                if choice[slot] < incoming[others[slot]].len() {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
        }
    }

    #[test]
    fn unique_optimum() {
        // r=0, a=1, b=2
        let arcs = [arc(0, 1, 1), arc(0, 2, 5), arc(1, 2, 1)];
        let picked = min_arborescence(3, 0, &arcs).unwrap();
        assert_eq!(picked, vec![0, 2]);
        assert_eq!(total(&arcs, &picked), 2);
    }

    #[test]
    fn cycle_is_contracted() {
        let arcs = [arc(0, 1, 10), arc(0, 2, 1), arc(1, 2, 2), arc(2, 1, 2)];
        let picked = min_arborescence(3, 0, &arcs).unwrap();
        assert_eq!(picked, vec![1, 3]);
        assert_eq!(total(&arcs, &picked), 3);
        assert_eq!(brute_force(3, 0, &arcs), Some(3));
    }

    #[test]
    fn star_takes_everything() {
        let arcs: Vec<Arc> = (1..6).map(|v| arc(0, v, v as u64 * 3)).collect();
        let picked = min_arborescence(6, 0, &arcs).unwrap();
        assert_eq!(picked.len(), 5);
        assert_eq!(total(&arcs, &picked), 3 * (1 + 2 + 3 + 4 + 5));
    }

    #[test]
    fn unreachable_vertex() {
        let arcs = [arc(0, 1, 1), arc(2, 1, 1)];
        assert!(matches!(
            min_arborescence(3, 0, &arcs),
            Err(Error::Infeasible(2))
        ));
    }

    #[test]
    fn nested_cycles_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let n = rng.gen_range(2..=6);
            let mut arcs = Vec::new();
            for f in 0..n {
                for t in 0..n {
                    if f != t && t != 0 && rng.gen_bool(0.6) {
                        arcs.push(arc(f, t, rng.gen_range(1..6)));
                    }
                }
            }
            let expected = brute_force(n, 0, &arcs);
            match min_arborescence(n, 0, &arcs) {
                Ok(picked) => {
                    assert_eq!(Some(total(&arcs, &picked)), expected, "{arcs:?}");
                    assert_eq!(picked.len(), n - 1);
                    let mut has_parent = vec![false; n];
                    for &i in &picked {
                        assert!(!has_parent[arcs[i].to]);
                        has_parent[arcs[i].to] = true;
                    }
                }
                Err(Error::Infeasible(_)) => assert_eq!(expected, None, "{arcs:?}"),
                Err(e) => panic!("{e}"),
            }
        }
    }
}
