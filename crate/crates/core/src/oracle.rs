//! Exact combinatorial ground truth for small graphs.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bitset;
use crate::error::{Error, Result};
use crate::graph::{Clique, Graph};

/// Graphs up to this many vertices get an enumeration-backed maximum clique.
pub const ENUMERATION_LIMIT: usize = 64;

/// Every maximal clique exactly once, sorted lexicographically by their
/// ascending vertex lists.
///
/// Bron–Kerbosch with the pivot chosen to maximize `|P ∩ N(u)|` over
/// `u ∈ P ∪ X` (smallest id on ties).
pub fn enumerate_maximal_cliques(g: &Graph) -> Vec<Clique> {
    let mut out = Vec::new();
    let mut p = vec![u64::MAX; g.words()];
    bitset::trim(&mut p, g.n());
    let x = vec![0u64; g.words()];
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, p, x, &mut |c: &[usize]| out.push(c.to_vec()));
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out.into_iter()
        .map(|vertices| Clique::new(g, vertices).expect("enumerated sets are cliques"))
        .collect()
}

fn bron_kerbosch(g: &Graph, r: &mut Vec<usize>, mut p: Vec<u64>, mut x: Vec<u64>, emit: &mut dyn FnMut(&[usize])) {
    if bitset::is_empty(&p) {
        if bitset::is_empty(&x) {
            emit(r);
        }
        return;
    }
    let pivot = bitset::ones(&p)
        .chain(bitset::ones(&x))
        .map(|u| (bitset::and_count(&p, g.row(u)), u))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .map(|(_, u)| u)
        .expect("P is nonempty");
    let branch: Vec<usize> = bitset::ones(&p).filter(|&v| !g.has_edge(pivot, v)).collect();
    for v in branch {
        let row = g.row(v);
        let np: Vec<u64> = p.iter().zip(row).map(|(a, b)| a & b).collect();
        let nx: Vec<u64> = x.iter().zip(row).map(|(a, b)| a & b).collect();
        r.push(v);
        bron_kerbosch(g, r, np, nx, emit);
        r.pop();
        bitset::remove(&mut p, v);
        bitset::insert(&mut x, v);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxCliqueResult {
    pub clique: Clique,
    pub omega: usize,
    /// False when the time budget ran out; `omega` is then a lower bound.
    pub proven: bool,
}

/// A maximum clique and `ω(G)`.
///
/// Up to [`ENUMERATION_LIMIT`] vertices this enumerates maximal cliques and
/// returns the lexicographically first of maximum size. Larger graphs use
/// branch and bound with greedy-coloring bounds; ties there follow search
/// order, and with a `budget` the search may stop early with
/// `proven == false`.
pub fn max_clique_exact(g: &Graph, budget: Option<Duration>) -> MaxCliqueResult {
    if g.n() <= ENUMERATION_LIMIT {
        let all = enumerate_maximal_cliques(g);
        let omega = all.iter().map(Clique::size).max().expect("graphs are nonempty");
        let clique = all.into_iter().find(|c| c.size() == omega).expect("maximum exists");
        return MaxCliqueResult { clique, omega, proven: true };
    }
    let mut search = BranchAndBound {
        g,
        best: greedy_clique(g),
        deadline: budget.map(|b| Instant::now() + b),
        timed_out: false,
        nodes: 0,
    };
    let mut p = vec![u64::MAX; g.words()];
    bitset::trim(&mut p, g.n());
    let mut current = Vec::new();
    search.expand(&mut current, p);
    let clique = Clique::new(g, search.best.clone()).expect("search keeps cliques");
    MaxCliqueResult { omega: clique.size(), clique, proven: !search.timed_out }
}

/// Highest-degree-first greedy clique, used as the initial incumbent.
fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut clique = vec![order[0]];
    let mut cand = g.row(order[0]).to_vec();
    while let Some(v) = bitset::ones(&cand).max_by_key(|&v| (bitset::and_count(&cand, g.row(v)), std::cmp::Reverse(v)))
    {
        clique.push(v);
        bitset::and_assign(&mut cand, g.row(v));
    }
    clique
}

struct BranchAndBound<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    deadline: Option<Instant>,
    timed_out: bool,
    nodes: u64,
}

impl BranchAndBound<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut p: Vec<u64>) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        let (order, colors) = self.color_sort(&p);
        for idx in (0..order.len()).rev() {
            if current.len() + colors[idx] <= self.best.len() || self.timed_out {
                return;
            }
            let v = order[idx];
            current.push(v);
            let np: Vec<u64> = p.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            if bitset::is_empty(&np) {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, np);
            }
            current.pop();
            bitset::remove(&mut p, v);
        }
    }

    /// Greedy sequential coloring; returns vertices in nondecreasing color
    /// order together with their color numbers (1-based).
    fn color_sort(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = p.to_vec();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut color = 0;
        while !bitset::is_empty(&uncolored) {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = bitset::first(&q) {
                bitset::remove(&mut uncolored, v);
                bitset::remove(&mut q, v);
                for (a, b) in q.iter_mut().zip(self.g.row(v)) {
                    *a &= !b;
                }
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }
}

/// Optimal value `1 − 1/ω` of the unregularized program.
pub fn motzkin_straus_value(omega: usize) -> Result<f64> {
    if omega < 1 {
        return Err(Error::InvalidParameter("omega must be at least 1".into()));
    }
    Ok(1.0 - 1.0 / omega as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_force_maximal(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if g.is_clique(&s).unwrap() && g.is_maximal_clique(&s).unwrap() {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    fn vertex_lists(cs: &[Clique]) -> Vec<Vec<usize>> {
        cs.iter().map(|c| c.vertices().to_vec()).collect()
    }

    #[test]
    fn figure1_cliques() {
        let g = Graph::figure1();
        let cs = enumerate_maximal_cliques(&g);
        let one_based: Vec<Vec<usize>> = cs.iter().map(Clique::one_based).collect();
        assert_eq!(one_based, vec![vec![1, 2], vec![1, 3, 4], vec![2, 5], vec![3, 4, 5]]);
        assert_eq!(vertex_lists(&cs), brute_force_maximal(&g));
        let best = max_clique_exact(&g, None);
        assert_eq!(best.omega, 3);
        assert_eq!(best.clique.one_based(), vec![1, 3, 4]);
    }

    #[test]
    fn trivial_graphs() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(vertex_lists(&enumerate_maximal_cliques(&k3)), vec![vec![0, 1, 2]]);
        assert_eq!(max_clique_exact(&k3, None).omega, 3);
        let e4 = Graph::edgeless(4).unwrap();
        assert_eq!(vertex_lists(&enumerate_maximal_cliques(&e4)), vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let n = 3 + trial % 10;
            let p = [0.3, 0.5, 0.7][trial % 3];
            let g = Graph::random(n, p, &mut rng).unwrap();
            assert_eq!(vertex_lists(&enumerate_maximal_cliques(&g)), brute_force_maximal(&g));
        }
    }

    #[test]
    fn branch_and_bound_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for &(n, p) in &[(70usize, 0.5), (80, 0.7), (90, 0.3)] {
            let g = Graph::random(n, p, &mut rng).unwrap();
            let omega_enum = enumerate_maximal_cliques(&g).iter().map(Clique::size).max().unwrap();
            let r = max_clique_exact(&g, None);
            assert!(r.proven);
            assert_eq!(r.omega, omega_enum);
            assert!(g.is_clique(r.clique.vertices()).unwrap());
        }
    }

    #[test]
    fn hamming_clique_number() {
        let g = Graph::hamming(6, 4).unwrap();
        let r = max_clique_exact(&g, Some(Duration::from_secs(30)));
        // the Hamming bound gives A(6,4) = 4
        assert_eq!(r.omega, 4);
    }

    #[test]
    fn ms_value() {
        assert!((motzkin_straus_value(3).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(motzkin_straus_value(1).unwrap(), 0.0);
        assert!((motzkin_straus_value(34).unwrap() - 33.0 / 34.0).abs() < 1e-15);
        assert!(motzkin_straus_value(0).is_err());
    }
}
