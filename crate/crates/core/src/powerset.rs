//! Bounded powerset automaton and minimal-weight merging words.
//!
//! The bounded powerset automaton of order `m` has one node per nonempty
//! subset of at most `m` states and sends a subset to its image under each
//! letter, at the letter's weight. From it, [`compute_words`] derives for
//! every subset of size `2..=m` the lightest word collapsing it to a single
//! state, by one reverse Dijkstra per singleton node.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;

use itertools::Itertools;

use crate::automaton::{Automaton, Letter, Word};
use crate::error::{Error, Result};
use crate::stateset::StateSet;

pub(crate) fn check_m(aut: &Automaton, m: usize) -> Result<()> {
    let n = aut.state_count();
    if m < 2 || m > n {
        return Err(Error::MOutOfRange { m, n });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SubsetAutomaton<'a> {
    origin: &'a Automaton,
    m: usize,
    /// Nodes by increasing cardinality, lexicographic within a cardinality.
    nodes: Vec<StateSet>,
    index: HashMap<StateSet, usize>,
    /// `succ[node * letters + a]`
    succ: Vec<usize>,
}

/// Builds the bounded powerset automaton of order `m` (`2 <= m <= n`).
pub fn build_subset_automaton(aut: &Automaton, m: usize) -> Result<SubsetAutomaton<'_>> {
    check_m(aut, m)?;
    let n = aut.state_count();
    let nodes: Vec<StateSet> = (1..=m)
        .flat_map(|size| (0..n).combinations(size))
        .map(|states| StateSet::from_states(n, states))
        .collect();
    let index: HashMap<StateSet, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let k = aut.letter_count();
    let mut succ = Vec::with_capacity(nodes.len() * k);
    for node in &nodes {
        for a in aut.letters() {
            // images never grow, so the target is always a node
            succ.push(index[&aut.image(node, a)]);
        }
    }
    Ok(SubsetAutomaton {
        origin: aut,
        m,
        nodes,
        index,
        succ,
    })
}

impl<'a> SubsetAutomaton<'a> {
    pub fn origin(&self) -> &'a Automaton {
        self.origin
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[StateSet] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &StateSet {
        &self.nodes[i]
    }

    pub fn index_of(&self, set: &StateSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// Target node of `node` under letter `a`.
    pub fn successor(&self, node: usize, a: Letter) -> usize {
        self.succ[node * self.origin.letter_count() + a as usize]
    }

    pub fn singleton_node(&self, q: usize) -> usize {
        self.index[&StateSet::singleton(self.origin.state_count(), q)]
    }

    fn predecessors(&self) -> Vec<Vec<(usize, Letter)>> {
        let mut pred = vec![Vec::new(); self.nodes.len()];
        for u in 0..self.nodes.len() {
            for a in self.origin.letters() {
                pred[self.successor(u, a)].push((u, a));
            }
        }
        pred
    }

    /// Minimal path costs from every node to `target`, with the first letter of
    /// a witness path per node.
    pub fn reverse_dijkstra(&self, target: usize) -> ShortestPaths {
        self.reverse_dijkstra_with(&self.predecessors(), target)
    }

    fn reverse_dijkstra_with(&self, pred: &[Vec<(usize, Letter)>], target: usize) -> ShortestPaths {
        let aut = self.origin;
        let count = self.nodes.len();
        let mut dist = vec![u64::MAX; count];
        let mut heap = BinaryHeap::new();
        dist[target] = 0;
        heap.push(Reverse((0u64, target)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(u, a) in &pred[v] {
                let nd = d + aut.weight(a);
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        // The witness letter is chosen after distances settle so it does not
        // depend on heap order: the first letter in declaration order that
        // starts an optimal path.
        let next = (0..count)
            .map(|u| {
                if u == target || dist[u] == u64::MAX {
                    return None;
                }
                aut.letters().find(|&a| {
                    let v = self.successor(u, a);
                    dist[v] != u64::MAX && dist[v] + aut.weight(a) == dist[u]
                })
            })
            .collect();
        ShortestPaths { target, dist, next }
    }
}

/// Result of a reverse Dijkstra towards one singleton node.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    target: usize,
    dist: Vec<u64>,
    next: Vec<Option<Letter>>,
}

impl ShortestPaths {
    pub fn target(&self) -> usize {
        self.target
    }

    /// Cost of the cheapest path from `node` to the target, `None` if the
    /// target is unreachable.
    pub fn distance(&self, node: usize) -> Option<u64> {
        (self.dist[node] != u64::MAX).then_some(self.dist[node])
    }

    /// Witness word for [`ShortestPaths::distance`].
    pub fn word(&self, sub: &SubsetAutomaton<'_>, node: usize) -> Option<Word> {
        self.distance(node)?;
        let mut word = Word::empty();
        let mut u = node;
        while let Some(a) = self.next[u] {
            word.push(a);
            u = sub.successor(u, a);
        }
        debug_assert_eq!(u, self.target);
        Some(word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordEntry {
    pub subset: StateSet,
    pub word: Word,
    pub weight: u64,
}

/// For each subset with `2 <= |P| <= m` that some word collapses to a single
/// state, the lightest such word. Entries are kept in canonical subset order.
#[derive(Debug, Clone)]
pub struct WordTable {
    m: usize,
    entries: Vec<WordEntry>,
    index: HashMap<StateSet, usize>,
}

impl WordTable {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[WordEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, subset: &StateSet) -> Option<&WordEntry> {
        self.index.get(subset).map(|&i| &self.entries[i])
    }

    /// One `subset<TAB>word<TAB>weight` line per entry.
    pub fn to_tsv(&self, aut: &Automaton) -> String {
        let mut out = String::new();
        for e in &self.entries {
            writeln!(
                out,
                "{}\t{}\t{}",
                e.subset,
                aut.format_word(&e.word),
                e.weight
            )
            .unwrap();
        }
        out
    }
}

/// Computes the merging-word table of order `m`.
///
/// Runs one reverse Dijkstra per singleton and keeps, per subset, the
/// cheapest word found. Ties between singletons go to the smaller state,
/// then to the lexicographically smaller word.
pub fn compute_words(aut: &Automaton, m: usize) -> Result<WordTable> {
    let sub = build_subset_automaton(aut, m)?;
    Ok(compute_words_from(&sub))
}

pub fn compute_words_from(sub: &SubsetAutomaton<'_>) -> WordTable {
    let aut = sub.origin();
    let pred = sub.predecessors();
    let mut best: Vec<Option<(u64, Word)>> = vec![None; sub.node_count()];
    for q in 0..aut.state_count() {
        let paths = sub.reverse_dijkstra_with(&pred, sub.singleton_node(q));
        for (u, slot) in best.iter_mut().enumerate() {
            if sub.node(u).len() < 2 {
                continue;
            }
            let Some(d) = paths.distance(u) else { continue };
            match slot {
                Some((bd, _)) if *bd < d => {}
                Some((bd, bw)) if *bd == d => {
                    // an earlier singleton already holds this weight; only a
                    // smaller word could displace it
                    let w = paths.word(sub, u).expect("reachable");
                    if w < *bw {
                        *bw = w;
                    }
                }
                _ => *slot = Some((d, paths.word(sub, u).expect("reachable"))),
            }
        }
    }
    let mut entries: Vec<WordEntry> = best
        .into_iter()
        .enumerate()
        .filter_map(|(u, b)| {
            b.map(|(weight, word)| WordEntry {
                subset: sub.node(u).clone(),
                word,
                weight,
            })
        })
        .collect();
    entries.sort_by(|x, y| x.subset.cmp(&y.subset));
    let index = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.subset.clone(), i))
        .collect();
    WordTable {
        m: sub.m(),
        entries,
        index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn node_counts() {
        let a = corpus::paper_automaton_a();
        assert_eq!(build_subset_automaton(&a, 2).unwrap().node_count(), 10);
        // m = n gives every nonempty subset
        assert_eq!(build_subset_automaton(&a, 4).unwrap().node_count(), 15);
        let b = corpus::paper_automaton_b();
        for m in 2..=5 {
            let expected: usize = (1..=m).map(|i| binom(12, i)).sum();
            assert_eq!(
                build_subset_automaton(&b, m).unwrap().node_count(),
                expected
            );
        }
    }

    #[test]
    fn rejects_bad_m() {
        let a = corpus::paper_automaton_a();
        assert_eq!(
            build_subset_automaton(&a, 1).unwrap_err(),
            Error::MOutOfRange { m: 1, n: 4 }
        );
        assert!(build_subset_automaton(&a, 5).is_err());
        assert!(compute_words(&a, 0).is_err());
    }

    #[test]
    fn edges_follow_images() {
        let a = corpus::paper_automaton_a();
        let sub = build_subset_automaton(&a, 3).unwrap();
        for u in 0..sub.node_count() {
            for l in a.letters() {
                let v = sub.successor(u, l);
                assert_eq!(sub.node(v), &a.image(sub.node(u), l));
                assert!(sub.node(v).len() <= sub.node(u).len());
            }
        }
        let s = sub.singleton_node(2);
        assert_eq!(sub.node(sub.successor(s, 2)), &StateSet::singleton(4, 0));
    }

    #[test]
    fn reverse_dijkstra_on_example_a() {
        let a = corpus::paper_automaton_a();
        let sub = build_subset_automaton(&a, 2).unwrap();
        let target = sub.singleton_node(0);
        let paths = sub.reverse_dijkstra(target);
        assert_eq!(paths.distance(target), Some(0));
        assert_eq!(paths.word(&sub, target), Some(Word::empty()));
        let p03 = sub.index_of(&StateSet::from_states(4, [0, 3])).unwrap();
        assert_eq!(paths.distance(p03), Some(1));
        assert_eq!(a.format_word(&paths.word(&sub, p03).unwrap()), "b");
        // triangle inequality along every edge
        for u in 0..sub.node_count() {
            for l in a.letters() {
                let v = sub.successor(u, l);
                if let (Some(du), Some(dv)) = (paths.distance(u), paths.distance(v)) {
                    assert!(du <= dv + a.weight(l));
                }
            }
        }
    }

    #[test]
    fn example_a_pair_words() {
        let a = corpus::paper_automaton_a();
        let table = compute_words(&a, 2).unwrap();
        assert_eq!(table.len(), 6);
        let e = table.get(&StateSet::from_states(4, [0, 3])).unwrap();
        assert_eq!((a.format_word(&e.word).as_str(), e.weight), ("b", 1));
        let e = table.get(&StateSet::from_states(4, [2, 3])).unwrap();
        assert_eq!(e.weight, 2);
        assert_eq!(a.format_word(&e.word), "ab");
        assert!(table.get(&StateSet::singleton(4, 0)).is_none());
    }

    #[test]
    fn permutation_automaton_has_empty_table() {
        let swap = Automaton::new(2, vec![('a', 1)], vec![vec![1, 0]]).unwrap();
        assert!(compute_words(&swap, 2).unwrap().is_empty());
    }

    #[test]
    fn tsv_dump() {
        let a = corpus::paper_automaton_a();
        let tsv = compute_words(&a, 2).unwrap().to_tsv(&a);
        assert_eq!(tsv.lines().count(), 6);
        assert!(tsv.contains("0,3\tb\t1\n"));
    }

    #[test]
    fn entries_collapse_and_respect_bounds() {
        let b = corpus::paper_automaton_b();
        let n = b.state_count() as u64;
        let k = b.max_weight();
        for m in 2..=4 {
            let sub = build_subset_automaton(&b, m).unwrap();
            let table = compute_words_from(&sub);
            let expected: usize = (2..=m).map(|i| binom(12, i)).sum();
            assert_eq!(table.len(), expected);
            for e in table.entries() {
                assert!(b.apply_set(&e.subset, &e.word).is_singleton());
                assert_eq!(b.word_weight(&e.word), e.weight);
                assert!(e.weight <= (e.subset.len() as u64 - 1) * k * n * (n - 1) / 2);
                assert!(e.word.len() <= sub.node_count());
            }
        }
    }
}
