//! Greedy synthesis of low-weight synchronizing words.
//!
//! Starting from the full state set `T`, each iteration picks an entry
//! `(P, w)` of the merging-word table that is admissible for `T` and has the
//! smallest score, appends `w` to the result and replaces `T` by `T.w`. The
//! four [`HeuristicKind`]s differ in which entries are admissible and how they
//! are scored.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::automaton::{Automaton, Word};
use crate::error::Result;
use crate::powerset::{self, WordEntry, WordTable};
use crate::stateset::StateSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum HeuristicKind {
    /// `P ⊆ T, |P| > 1`; score `γ(w) / (|P| − |P.w|)`.
    H1,
    /// `P ⊆ T, |P| > 1`; score `γ(w) / (|T| − |T.w|)`.
    H2,
    /// `P ⊆ T, |P| = min(m, |T|)`; score `γ(w)`.
    H3,
    /// `P ⊆ T, |P| > 1`; score `γ(w) / (|T| − |T.w|)²`.
    H4,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 4] = [Self::H1, Self::H2, Self::H3, Self::H4];

    /// Whether `P` may be used while tracking `T`, for table order `m`.
    pub fn admissible(self, m: usize, p: &StateSet, t: &StateSet) -> bool {
        if !p.is_subset(t) {
            return false;
        }
        match self {
            Self::H1 | Self::H2 | Self::H4 => p.len() > 1,
            Self::H3 => p.len() == m.min(t.len()),
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for HeuristicKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "H1" => Ok(Self::H1),
            "H2" => Ok(Self::H2),
            "H3" => Ok(Self::H3),
            "H4" => Ok(Self::H4),
            other => Err(format!("unknown heuristic `{other}` (expected H1..H4)")),
        }
    }
}

/// A nonnegative rational `num / den` with `den > 0`, compared exactly.
#[derive(Debug, Clone, Copy)]
pub struct Score {
    pub num: u64,
    pub den: u64,
}

impl Score {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "score denominator must be positive");
        Score { num, den }
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Score {}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Prints in lowest terms.
impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (mut a, mut b) = (self.num, self.den);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        let (num, den) = (self.num / a, self.den / a);
        if den == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

/// Admissibility and exact score of table entry `(P, w)` against `T`.
/// The score is `None` when the entry is not admissible.
pub fn score(
    kind: HeuristicKind,
    m: usize,
    p: &StateSet,
    t: &StateSet,
    w: &Word,
    aut: &Automaton,
) -> Option<Score> {
    if !kind.admissible(m, p, t) {
        return None;
    }
    let weight = aut.word_weight(w);
    let t_drop = || (t.len() - aut.apply_set(t, w).len()) as u64;
    Some(match kind {
        HeuristicKind::H1 => Score::new(weight, (p.len() - aut.apply_set(p, w).len()) as u64),
        HeuristicKind::H2 => Score::new(weight, t_drop()),
        HeuristicKind::H3 => Score::new(weight, 1),
        HeuristicKind::H4 => {
            let d = t_drop();
            Score::new(weight, d * d)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncStep {
    pub subset: StateSet,
    pub word: Word,
    pub before: StateSet,
    pub after: StateSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncResult {
    pub word: Word,
    pub weight: u64,
    pub length: usize,
    pub steps: Vec<SyncStep>,
    pub synchronized: bool,
}

impl SyncResult {
    fn failed() -> Self {
        SyncResult {
            word: Word::empty(),
            weight: 0,
            length: 0,
            steps: Vec::new(),
            synchronized: false,
        }
    }

    /// Checks that the trace replays: each step's word maps its `before` set
    /// to its `after` set, the sets chain, and the words concatenate to the
    /// result.
    pub fn replays(&self, aut: &Automaton) -> bool {
        let mut t = aut.all_states();
        let mut word = Word::empty();
        for s in &self.steps {
            if s.before != t || aut.apply_set(&s.before, &s.word) != s.after {
                return false;
            }
            t = s.after.clone();
            word.extend_from(&s.word);
        }
        word == self.word
            && self.weight == aut.word_weight(&self.word)
            && self.length == self.word.len()
    }
}

struct Candidate<'t> {
    entry: &'t WordEntry,
    score: Score,
    /// `|T| − |T.w|`, filled lazily for kinds whose score does not need it.
    t_drop: Option<usize>,
}

/// Runs the greedy synthesis with a precomputed table.
pub fn synthesize(aut: &Automaton, table: &WordTable, kind: HeuristicKind) -> SyncResult {
    let m = table.m();
    let mut t = aut.all_states();
    let mut result = SyncResult {
        synchronized: true,
        ..SyncResult::failed()
    };
    while t.len() > 1 {
        let Some(chosen) = choose(aut, table, kind, m, &t) else {
            return SyncResult::failed();
        };
        let after = aut.apply_set(&t, &chosen.word);
        debug_assert!(after.len() < t.len());
        result.word.extend_from(&chosen.word);
        result.steps.push(SyncStep {
            subset: chosen.subset.clone(),
            word: chosen.word.clone(),
            before: std::mem::replace(&mut t, after.clone()),
            after,
        });
    }
    result.weight = aut.word_weight(&result.word);
    result.length = result.word.len();
    result
}

/// Picks the admissible entry with the smallest score. Ties go to the larger
/// `|T| − |T.w|`, then the smaller `γ(w)`, then the smaller subset, then the
/// lexicographically smaller word.
fn choose<'t>(
    aut: &Automaton,
    table: &'t WordTable,
    kind: HeuristicKind,
    m: usize,
    t: &StateSet,
) -> Option<&'t WordEntry> {
    let mut best: Option<Candidate<'t>> = None;
    for entry in table.entries() {
        if !kind.admissible(m, &entry.subset, t) {
            continue;
        }
        let (score, t_drop) = match kind {
            HeuristicKind::H1 => (
                Score::new(entry.weight, entry.subset.len() as u64 - 1),
                None,
            ),
            HeuristicKind::H3 => (Score::new(entry.weight, 1), None),
            HeuristicKind::H2 | HeuristicKind::H4 => {
                let d = t.len() - aut.apply_set(t, &entry.word).len();
                let den = if kind == HeuristicKind::H2 { d } else { d * d };
                (Score::new(entry.weight, den as u64), Some(d))
            }
        };
        let mut cand = Candidate {
            entry,
            score,
            t_drop,
        };
        let replace = match &mut best {
            None => true,
            Some(cur) => match cand.score.cmp(&cur.score) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => tie_break(aut, t, &mut cand, cur) == Ordering::Less,
            },
        };
        if replace {
            best = Some(cand);
        }
    }
    best.map(|b| b.entry)
}

fn tie_break(
    aut: &Automaton,
    t: &StateSet,
    a: &mut Candidate<'_>,
    b: &mut Candidate<'_>,
) -> Ordering {
    let drop = |c: &mut Candidate<'_>| {
        *c.t_drop
            .get_or_insert_with(|| t.len() - aut.apply_set(t, &c.entry.word).len())
    };
    let (da, db) = (drop(a), drop(b));
    db.cmp(&da)
        .then(a.entry.weight.cmp(&b.entry.weight))
        .then_with(|| a.entry.subset.cmp(&b.entry.subset))
        .then_with(|| a.entry.word.cmp(&b.entry.word))
}

/// Computes the order-`m` table and runs the greedy synthesis with `kind`.
/// Returns the empty word with `synchronized = false` when no word exists.
pub fn approximate_weight_synch(
    aut: &Automaton,
    m: usize,
    kind: HeuristicKind,
) -> Result<SyncResult> {
    let table = powerset::compute_words(aut, m)?;
    Ok(synthesize(aut, &table, kind))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRow {
    pub m: usize,
    pub kind: HeuristicKind,
    pub result: SyncResult,
}

/// One synthesis per `(kind, m)` pair, ordered by kind then `m`. Each table is
/// computed once and shared by all kinds.
pub fn run_grid(
    aut: &Automaton,
    m_values: &[usize],
    kinds: &[HeuristicKind],
) -> Result<Vec<GridRow>> {
    for &m in m_values {
        powerset::check_m(aut, m)?;
    }
    if kinds.is_empty() {
        return Ok(Vec::new());
    }
    let tables = m_values
        .iter()
        .map(|&m| powerset::compute_words(aut, m))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(kinds.len() * m_values.len());
    for &kind in kinds {
        for (&m, table) in m_values.iter().zip(&tables) {
            rows.push(GridRow {
                m,
                kind,
                result: synthesize(aut, table, kind),
            });
        }
    }
    Ok(rows)
}

/// Parses `2..6`, `2..=6` (both inclusive) or a comma list like `2,3,5`.
pub fn parse_m_range(text: &str) -> std::result::Result<Vec<usize>, String> {
    let bad = || format!("invalid m range `{text}`");
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        text.split(',').map(num).collect()
    }
}
