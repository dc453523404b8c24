//! Built-in automata and instance generators.

use std::fmt;
use std::str::FromStr;

use crate::automaton::Automaton;
use crate::error::{Error, Result};

pub const PAPER_A_WFA: &str = include_str!("../data/paper_A.wfa");
pub const PAPER_B_WFA: &str = include_str!("../data/paper_B.wfa");
pub const REFERENCE_TSV: &str = include_str!("../data/reference.tsv");

/// Four-state, three-letter automaton where the shortest synchronizing word
/// (`baacb`, weight 10) is not the lightest one (`baaabaaab`, weight 9).
///
/// `a` rotates `0→1→2→3→0`, `b` fixes everything but `3→0`, `c` fixes
/// everything but `2→0`; weights are `a=1, b=1, c=6`.
pub fn paper_automaton_a() -> Automaton {
    Automaton::new(
        4,
        vec![('a', 1), ('b', 1), ('c', 6)],
        vec![vec![1, 2, 3, 0], vec![0, 1, 2, 0], vec![0, 1, 0, 3]],
    )
    .expect("static automaton")
}

/// Twelve-state, four-letter automaton with weights `a=1, b=6, c=2, d=7`.
///
/// `a` rotates the cycle `0→1→…→11→0`; `b` fixes everything but `11→0`;
/// `c` fixes everything but `0→1`; `d` fixes everything but `4→3`.
pub fn paper_automaton_b() -> Automaton {
    let n = 12;
    let rotate: Vec<usize> = (0..n).map(|q| (q + 1) % n).collect();
    let fix_except = |from: usize, to: usize| -> Vec<usize> {
        (0..n).map(|q| if q == from { to } else { q }).collect()
    };
    Automaton::new(
        n,
        vec![('a', 1), ('b', 6), ('c', 2), ('d', 7)],
        vec![
            rotate,
            fix_except(11, 0),
            fix_except(0, 1),
            fix_except(4, 3),
        ],
    )
    .expect("static automaton")
}

/// The Černý automaton on `n` states: `a` is the cyclic shift `q → q+1 mod n`,
/// `b` fixes everything but `n−1 → 0`. `weights` are for `(a, b)`.
pub fn cerny(n: usize, weights: (u64, u64)) -> Result<Automaton> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("cerny needs n >= 2, got {n}")));
    }
    let a = (0..n).map(|q| (q + 1) % n).collect();
    let b = (0..n).map(|q| if q == n - 1 { 0 } else { q }).collect();
    Automaton::new(n, vec![('a', weights.0), ('b', weights.1)], vec![a, b])
}

/// Keeps the states, letters and transitions of `dfa` and gives every letter
/// weight `k`. Minimum synchronizing weight of the result is `k` times the
/// minimum synchronizing length of `dfa`.
pub fn lift_uniform(dfa: &Automaton, k: u64) -> Result<Automaton> {
    if k < 1 {
        return Err(Error::InvalidSpec(
            "uniform weight must be at least 1".into(),
        ));
    }
    Automaton::new(
        dfa.state_count(),
        dfa.symbols().iter().map(|&s| (s, k)).collect(),
        dfa.letters().map(|a| dfa.transitions(a).to_vec()).collect(),
    )
}

/// SplitMix64 (Steele, Lea and Flood). Chosen because it is a few lines in
/// any language, so seeds stay portable across reimplementations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..bound` by rejection: draws below
    /// `2^64 mod bound` are discarded, the rest are reduced modulo `bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Random,
    Cerny,
    PaperA,
    PaperB,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Family::Random),
            "cerny" => Ok(Family::Cerny),
            "paper_A" | "paper:A" => Ok(Family::PaperA),
            "paper_B" | "paper:B" => Ok(Family::PaperB),
            other => Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Random => "random",
            Family::Cerny => "cerny",
            Family::PaperA => "paper_A",
            Family::PaperB => "paper_B",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub letters: usize,
    pub max_weight: u64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn random(n: usize, letters: usize, max_weight: u64, seed: u64) -> Self {
        GeneratorSpec {
            family: Family::Random,
            n,
            letters,
            max_weight,
            seed,
        }
    }
}

/// Builds an automaton from `spec`.
///
/// For the random family the draw order is fixed: for each letter in order
/// `a, b, …`, first its weight `1 + below(max_weight)`, then its targets
/// `below(n)` for states `0..n`. Cerny instances use weight 1 for both
/// letters; the `letters`, `max_weight` and `seed` fields are ignored by the
/// non-random families.
pub fn generate(spec: &GeneratorSpec) -> Result<Automaton> {
    match spec.family {
        Family::PaperA => Ok(paper_automaton_a()),
        Family::PaperB => Ok(paper_automaton_b()),
        Family::Cerny => cerny(spec.n, (1, 1)),
        Family::Random => random_automaton(spec),
    }
}

pub fn random_automaton(spec: &GeneratorSpec) -> Result<Automaton> {
    if spec.n == 0 {
        return Err(Error::InvalidSpec("n must be at least 1".into()));
    }
    if spec.letters == 0 || spec.letters > 26 {
        return Err(Error::InvalidSpec("letter count must be in 1..=26".into()));
    }
    if spec.max_weight == 0 {
        return Err(Error::InvalidSpec("max weight must be at least 1".into()));
    }
    let mut rng = SplitMix64::new(spec.seed);
    let mut letters = Vec::with_capacity(spec.letters);
    let mut transitions = Vec::with_capacity(spec.letters);
    for sym in ('a'..='z').take(spec.letters) {
        let weight = 1 + rng.below(spec.max_weight);
        letters.push((sym, weight));
        transitions.push(
            (0..spec.n)
                .map(|_| rng.below(spec.n as u64) as usize)
                .collect(),
        );
    }
    Automaton::new(spec.n, letters, transitions)
}

/// A non-synchronizing automaton: letter `i` rotates the `n` states by
/// `i + 1`, so every letter is a permutation.
pub fn permutation_automaton(n: usize, letters: usize) -> Result<Automaton> {
    if letters == 0 || letters > 26 {
        return Err(Error::InvalidSpec("letter count must be in 1..=26".into()));
    }
    let syms = ('a'..='z').take(letters);
    Automaton::new(
        n,
        syms.map(|s| (s, 1)).collect(),
        (0..letters)
            .map(|i| (0..n).map(|q| (q + i + 1) % n).collect())
            .collect(),
    )
}

/// One row of the reference results table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceRow {
    pub m: usize,
    pub heuristic: String,
    pub word: String,
    pub length: usize,
    pub weight: u64,
}

/// Parses a TSV with header `m heuristic word length weight`.
pub fn parse_reference_table(text: &str) -> Result<Vec<ReferenceRow>> {
    let bad = |line: usize| Error::InvalidSpec(format!("reference table line {line} is malformed"));
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 5 {
            return Err(bad(i + 1));
        }
        rows.push(ReferenceRow {
            m: cols[0].parse().map_err(|_| bad(i + 1))?,
            heuristic: cols[1].to_string(),
            word: cols[2].to_string(),
            length: cols[3].parse().map_err(|_| bad(i + 1))?,
            weight: cols[4].parse().map_err(|_| bad(i + 1))?,
        });
    }
    Ok(rows)
}

pub fn reference_table() -> Vec<ReferenceRow> {
    parse_reference_table(REFERENCE_TSV).expect("bundled table is well-formed")
}
