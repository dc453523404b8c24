//! Exact brute-force baselines over the full power automaton.
//!
//! These searches explore every subset reachable from the start set, so they
//! refuse automata above a state-count cap. Witness words are the
//! lexicographically least optimal words under letter declaration order.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::automaton::{Automaton, Word};
use crate::error::{Error, Result};
use crate::stateset::StateSet;

pub const DEFAULT_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub word: Word,
    /// Weight or length of `word`, depending on the query.
    pub value: u64,
    pub optimal: bool,
}

fn check_cap(aut: &Automaton, cap: usize) -> Result<()> {
    let n = aut.state_count();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

/// Cheapest word taking `start` to a singleton, where letter `a` costs
/// `cost(a)`. `None` if no singleton is reachable.
fn cheapest_collapse(
    aut: &Automaton,
    start: &StateSet,
    cost: impl Fn(u8) -> u64,
) -> Option<OracleResult> {
    // Materialize the reachable part of the power automaton.
    let mut nodes = vec![start.clone()];
    let mut index = HashMap::from([(start.clone(), 0usize)]);
    let k = aut.letter_count();
    let mut succ: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        for a in aut.letters() {
            let img = aut.image(&nodes[i], a);
            let next = *index.entry(img.clone()).or_insert_with(|| {
                nodes.push(img);
                nodes.len() - 1
            });
            succ.push(next);
        }
        i += 1;
    }

    // Distances to the nearest singleton, by Dijkstra on reversed edges.
    let mut pred = vec![Vec::new(); nodes.len()];
    for u in 0..nodes.len() {
        for a in aut.letters() {
            pred[succ[u * k + a as usize]].push((u, a));
        }
    }
    let mut dist = vec![u64::MAX; nodes.len()];
    let mut heap = BinaryHeap::new();
    for (u, s) in nodes.iter().enumerate() {
        if s.is_singleton() {
            dist[u] = 0;
            heap.push(Reverse((0u64, u)));
        }
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(u, a) in &pred[v] {
            let nd = d + cost(a);
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(Reverse((nd, u)));
            }
        }
    }
    if dist[0] == u64::MAX {
        return None;
    }

    // Greedy walk: always the first letter that stays on an optimal path.
    let mut word = Word::empty();
    let mut u = 0;
    while dist[u] > 0 {
        let a = aut
            .letters()
            .find(|&a| {
                let v = succ[u * k + a as usize];
                dist[v] != u64::MAX && dist[v] + cost(a) == dist[u]
            })
            .expect("an optimal successor exists");
        word.push(a);
        u = succ[u * k + a as usize];
    }
    Some(OracleResult {
        word,
        value: dist[0],
        optimal: true,
    })
}

/// Minimum weight of a synchronizing word, `None` if the automaton does not
/// synchronize.
pub fn min_weight_sync(aut: &Automaton, cap: usize) -> Result<Option<OracleResult>> {
    check_cap(aut, cap)?;
    Ok(cheapest_collapse(aut, &aut.all_states(), |a| aut.weight(a)))
}

/// Minimum length of a synchronizing word.
pub fn min_length_sync(aut: &Automaton, cap: usize) -> Result<Option<OracleResult>> {
    check_cap(aut, cap)?;
    Ok(cheapest_collapse(aut, &aut.all_states(), |_| 1))
}

/// Minimum weight of a word collapsing `subset` (at least two states) to a
/// single state, `None` when unreachable.
pub fn exhaustive_merge_weight(
    aut: &Automaton,
    subset: &StateSet,
    cap: usize,
) -> Result<Option<u64>> {
    check_cap(aut, cap)?;
    if subset.len() < 2 {
        return Err(Error::SubsetTooSmall);
    }
    Ok(cheapest_collapse(aut, subset, |a| aut.weight(a)).map(|r| r.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    /// Every word over the alphabet with weight at most `budget`.
    fn words_up_to_weight(aut: &Automaton, budget: u64) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut frontier = vec![(Word::empty(), 0u64)];
        while let Some((w, c)) = frontier.pop() {
            for a in aut.letters() {
                let nc = c + aut.weight(a);
                if nc <= budget {
                    let mut nw = w.clone();
                    nw.push(a);
                    out.push(nw.clone());
                    frontier.push((nw, nc));
                }
            }
        }
        out
    }

    #[test]
    fn example_a_optima() {
        let a = corpus::paper_automaton_a();
        let w = min_weight_sync(&a, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(w.value, 9);
        assert!(w.optimal);
        assert!(a.verify_sync_word(&w.word).is_some());
        assert_eq!(a.word_weight(&w.word), 9);
        let l = min_length_sync(&a, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(l.value, 5);
        assert_eq!(l.word.len(), 5);
        assert!(a
            .verify_sync_word(&a.parse_word("baacb").unwrap())
            .is_some());
        // baabc also synchronizes and precedes baacb
        assert_eq!(a.format_word(&l.word), "baabc");
    }

    #[test]
    fn example_a_weight_witness_is_lexicographically_least() {
        let a = corpus::paper_automaton_a();
        let w = min_weight_sync(&a, DEFAULT_CAP).unwrap().unwrap();
        let least = words_up_to_weight(&a, 9)
            .into_iter()
            .filter(|x| a.word_weight(x) == 9 && a.verify_sync_word(x).is_some())
            .min()
            .unwrap();
        assert_eq!(w.word, least);
        assert_eq!(a.format_word(&least), "baaabaaab");
    }

    #[test]
    fn single_state() {
        let one = Automaton::new(1, vec![('a', 5)], vec![vec![0]]).unwrap();
        let r = min_weight_sync(&one, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!((r.value, r.word.len()), (0, 0));
        assert_eq!(
            min_length_sync(&one, DEFAULT_CAP).unwrap().unwrap().value,
            0
        );
    }

    #[test]
    fn example_b_optima() {
        let b = corpus::paper_automaton_b();
        let w = min_weight_sync(&b, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(w.value, 77);
        assert_eq!(w.word.len(), 23);
        assert_eq!(min_length_sync(&b, DEFAULT_CAP).unwrap().unwrap().value, 19);
    }

    #[test]
    fn merge_weight_matches_enumeration() {
        let a = corpus::paper_automaton_a();
        let p = StateSet::from_states(4, [0, 3]);
        assert_eq!(
            exhaustive_merge_weight(&a, &p, DEFAULT_CAP).unwrap(),
            Some(1)
        );
        assert!(words_up_to_weight(&a, 1)
            .iter()
            .any(|w| a.apply_set(&p, w).is_singleton()));
        assert!(!words_up_to_weight(&a, 0)
            .iter()
            .any(|w| a.apply_set(&p, w).is_singleton()));
        assert_eq!(
            exhaustive_merge_weight(&a, &StateSet::singleton(4, 1), DEFAULT_CAP),
            Err(Error::SubsetTooSmall)
        );
        let perm = corpus::permutation_automaton(5, 2).unwrap();
        assert_eq!(
            exhaustive_merge_weight(&perm, &StateSet::from_states(5, [0, 1]), DEFAULT_CAP).unwrap(),
            None
        );
        assert_eq!(min_weight_sync(&perm, DEFAULT_CAP).unwrap(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let c = corpus::cerny(17, (1, 1)).unwrap();
        assert_eq!(
            min_weight_sync(&c, DEFAULT_CAP).unwrap_err(),
            Error::CapExceeded { n: 17, cap: 16 }
        );
        assert!(min_length_sync(&c, 17).unwrap().is_some());
    }

    #[test]
    fn cerny_lengths() {
        assert_eq!(
            min_length_sync(&corpus::cerny(2, (1, 1)).unwrap(), 16)
                .unwrap()
                .unwrap()
                .value,
            1
        );
        for n in 2..=8 {
            let c = corpus::cerny(n, (1, 1)).unwrap();
            let expected = ((n - 1) * (n - 1)) as u64;
            assert_eq!(min_length_sync(&c, 16).unwrap().unwrap().value, expected);
        }
    }
}
