//! Weighted deterministic finite automata.
//!
//! An [`Automaton`] has states `0..n`, an ordered alphabet of single lowercase
//! ASCII letters, a total transition table and a positive integer weight per
//! letter. The weight of a word is the sum of its letters' weights. A word is
//! synchronizing when it sends every state to one common state.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::stateset::StateSet;

/// Index of a letter in the automaton's declaration order.
pub type Letter = u8;

/// A word as a sequence of letter indices. Comparing two words compares them
/// lexicographically under the declaration order of the alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    n: usize,
    symbols: Vec<char>,
    weights: Vec<u64>,
    /// `delta[a][q]` is the target of state `q` under letter `a`.
    delta: Vec<Vec<usize>>,
}

impl Automaton {
    /// Validates and builds an automaton. `letters` lists `(symbol, weight)`
    /// in declaration order; `transitions[a]` has one target per state.
    pub fn new(n: usize, letters: Vec<(char, u64)>, transitions: Vec<Vec<usize>>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidAutomaton(msg));
        if n == 0 {
            return invalid("at least one state is required".into());
        }
        if letters.is_empty() {
            return invalid("at least one letter is required".into());
        }
        if letters.len() > 26 {
            return invalid("at most 26 letters are supported".into());
        }
        if transitions.len() != letters.len() {
            return invalid(format!(
                "{} letters but {} transition rows",
                letters.len(),
                transitions.len()
            ));
        }
        let mut symbols = Vec::with_capacity(letters.len());
        let mut weights = Vec::with_capacity(letters.len());
        for (sym, weight) in letters {
            if !sym.is_ascii_lowercase() {
                return invalid(format!("letter `{sym}` is not a lowercase ASCII character"));
            }
            if symbols.contains(&sym) {
                return invalid(format!("duplicate letter `{sym}`"));
            }
            if weight == 0 {
                return invalid(format!("letter `{sym}` has weight 0"));
            }
            symbols.push(sym);
            weights.push(weight);
        }
        for (row, sym) in transitions.iter().zip(&symbols) {
            if row.len() != n {
                return invalid(format!(
                    "letter `{sym}` has {} targets, expected {n}",
                    row.len()
                ));
            }
            if let Some(t) = row.iter().find(|&&t| t >= n) {
                return invalid(format!("letter `{sym}` has target {t} out of range"));
            }
        }
        Ok(Automaton {
            n,
            symbols,
            weights,
            delta: transitions,
        })
    }

    pub fn state_count(&self) -> usize {
        self.n
    }

    pub fn letter_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }

    pub fn symbol(&self, a: Letter) -> char {
        self.symbols[a as usize]
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn letter_of(&self, sym: char) -> Option<Letter> {
        self.symbols
            .iter()
            .position(|&s| s == sym)
            .map(|i| i as Letter)
    }

    pub fn weight(&self, a: Letter) -> u64 {
        self.weights[a as usize]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// The largest letter weight (`k`).
    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn transitions(&self, a: Letter) -> &[usize] {
        &self.delta[a as usize]
    }

    pub fn step(&self, q: usize, a: Letter) -> usize {
        self.delta[a as usize][q]
    }

    /// `q.w`, applying letters left to right.
    pub fn apply(&self, q: usize, w: &Word) -> usize {
        w.letters().iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn image(&self, set: &StateSet, a: Letter) -> StateSet {
        let row = &self.delta[a as usize];
        let mut out = StateSet::empty(self.n);
        for q in set.iter() {
            out.insert(row[q]);
        }
        out
    }

    /// `T.w`.
    pub fn apply_set(&self, set: &StateSet, w: &Word) -> StateSet {
        let mut cur = set.clone();
        for &a in w.letters() {
            cur = self.image(&cur, a);
        }
        cur
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.n)
    }

    /// `γ(w)`.
    pub fn word_weight(&self, w: &Word) -> u64 {
        w.letters().iter().map(|&a| self.weight(a)).sum()
    }

    /// Returns the common target state if `w` synchronizes the automaton.
    /// The whole word is consumed even if a prefix already synchronizes.
    pub fn verify_sync_word(&self, w: &Word) -> Option<usize> {
        self.apply_set(&self.all_states(), w).single_member()
    }

    /// Length of the shortest prefix of `w` that already synchronizes, if any.
    pub fn earliest_sync_prefix(&self, w: &Word) -> Option<usize> {
        let mut cur = self.all_states();
        if cur.is_singleton() {
            return Some(0);
        }
        for (i, &a) in w.letters().iter().enumerate() {
            cur = self.image(&cur, a);
            if cur.is_singleton() {
                return Some(i + 1);
            }
        }
        None
    }

    /// Decides whether some word synchronizes the automaton, by checking that
    /// every pair of states can be merged. Runs a backward search on the pair
    /// automaton starting from the pairs that some letter merges directly.
    pub fn is_synchronizing(&self) -> bool {
        let n = self.n;
        if n == 1 {
            return true;
        }
        let pair_index = |p: usize, q: usize| {
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            hi * (hi - 1) / 2 + lo
        };
        let pair_count = n * (n - 1) / 2;

        // preimage[a][t] = states sent to t by a
        let preimage: Vec<Vec<Vec<usize>>> = self
            .delta
            .iter()
            .map(|row| {
                let mut pre = vec![Vec::new(); n];
                for (q, &t) in row.iter().enumerate() {
                    pre[t].push(q);
                }
                pre
            })
            .collect();

        let mut mergeable = vec![false; pair_count];
        let mut queue = VecDeque::new();
        let mut found = 0usize;
        let mut mark = |p: usize, q: usize, queue: &mut VecDeque<(usize, usize)>| {
            let i = pair_index(p, q);
            if !mergeable[i] {
                mergeable[i] = true;
                found += 1;
                queue.push_back((p, q));
            }
        };

        for pre in &preimage {
            for sources in pre {
                for (i, &p) in sources.iter().enumerate() {
                    for &q in &sources[i + 1..] {
                        mark(p, q, &mut queue);
                    }
                }
            }
        }
        while let Some((x, y)) = queue.pop_front() {
            for pre in &preimage {
                for &p in &pre[x] {
                    for &q in &pre[y] {
                        if p != q {
                            mark(p, q, &mut queue);
                        }
                    }
                }
            }
        }
        found == pair_count
    }

    /// `k · (n − 1) · C(n, 2)`, the guaranteed upper bound on the weight of
    /// the word produced by the greedy synthesis, for any `m` and heuristic.
    pub fn sync_weight_bound(&self) -> u64 {
        let n = self.n as u64;
        self.max_weight() * n.saturating_sub(1) * (n * n.saturating_sub(1) / 2)
    }

    /// Parses a word given as concatenated symbols; `-` and the empty string
    /// denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "-" {
            return Ok(Word::empty());
        }
        text.chars()
            .map(|c| self.letter_of(c).ok_or(Error::UnknownSymbol(c)))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.letters().iter().map(|&a| self.symbol(a)).collect()
    }

    /// Canonical text form; the inverse of [`Automaton::parse`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "states {}", self.n).unwrap();
        writeln!(out, "letters {}", self.symbols.len()).unwrap();
        for (sym, w) in self.symbols.iter().zip(&self.weights) {
            writeln!(out, "letter {sym} {w}").unwrap();
        }
        for (sym, row) in self.symbols.iter().zip(&self.delta) {
            write!(out, "trans {sym}").unwrap();
            for t in row {
                write!(out, " {t}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Graphviz rendering, one edge per (state, letter) labelled `sym/weight`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph wfa {\n  rankdir=LR;\n  node [shape=circle];\n");
        for q in 0..self.n {
            writeln!(out, "  {q};").unwrap();
        }
        for a in self.letters() {
            for q in 0..self.n {
                writeln!(
                    out,
                    "  {q} -> {} [label=\"{}/{}\"];",
                    self.step(q, a),
                    self.symbol(a),
                    self.weight(a)
                )
                .unwrap();
            }
        }
        out.push_str("}\n");
        out
    }

    /// Parses the line-oriented automaton format:
    ///
    /// ```text
    /// states <n>
    /// letters <k>
    /// letter <sym> <weight>              (k lines)
    /// trans <sym> <t0> ... <t(n-1)>      (k lines)
    /// ```
    ///
    /// Lines starting with `#` and blank lines are ignored, as is anything
    /// after a `#` on a content line.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line, kind| ParseError { line, kind };

        let mut header = |key: &'static str| -> Result<(usize, usize), ParseError> {
            let (line, content) = lines
                .next()
                .ok_or(err(0, ParseErrorKind::MissingHeader(key)))?;
            let mut parts = content.split_whitespace();
            if parts.next() != Some(key) {
                return Err(err(line, ParseErrorKind::MissingHeader(key)));
            }
            let value = parts
                .next()
                .and_then(|v| v.parse::<usize>().ok())
                .filter(|&v| v > 0);
            match (value, parts.next()) {
                (Some(v), None) => Ok((line, v)),
                _ => Err(err(
                    line,
                    ParseErrorKind::MalformedHeader(content.to_string()),
                )),
            }
        };
        let (_, n) = header("states")?;
        let (letters_line, k) = header("letters")?;
        if k > 26 {
            return Err(err(
                letters_line,
                ParseErrorKind::MalformedHeader(format!("letters {k}: at most 26 supported")),
            ));
        }

        let parse_symbol = |line, s: Option<&str>| -> Result<char, ParseError> {
            let s = s.unwrap_or("");
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => Ok(c),
                _ => Err(err(line, ParseErrorKind::BadSymbol(s.to_string()))),
            }
        };

        let mut letters: Vec<(char, u64)> = Vec::with_capacity(k);
        for _ in 0..k {
            let (line, content) = lines
                .next()
                .ok_or(err(0, ParseErrorKind::MissingHeader("letter")))?;
            let mut parts = content.split_whitespace();
            if parts.next() != Some("letter") {
                return Err(err(line, ParseErrorKind::MissingHeader("letter")));
            }
            let sym = parse_symbol(line, parts.next())?;
            if letters.iter().any(|&(s, _)| s == sym) {
                return Err(err(line, ParseErrorKind::DuplicateLetter(sym)));
            }
            let raw = parts.next().unwrap_or("");
            let weight = raw
                .parse::<u64>()
                .ok()
                .filter(|&w| w >= 1)
                .ok_or_else(|| err(line, ParseErrorKind::BadWeight(raw.to_string())))?;
            if let Some(extra) = parts.next() {
                return Err(err(line, ParseErrorKind::Unexpected(extra.to_string())));
            }
            letters.push((sym, weight));
        }

        let mut rows: Vec<Option<Vec<usize>>> = vec![None; k];
        for _ in 0..k {
            let (line, content) = lines
                .next()
                .ok_or(err(0, ParseErrorKind::MissingHeader("trans")))?;
            let mut parts = content.split_whitespace();
            if parts.next() != Some("trans") {
                return Err(err(line, ParseErrorKind::MissingHeader("trans")));
            }
            let sym = parse_symbol(line, parts.next())?;
            let idx = letters
                .iter()
                .position(|&(s, _)| s == sym)
                .ok_or(err(line, ParseErrorKind::UnknownLetter(sym)))?;
            if rows[idx].is_some() {
                return Err(err(line, ParseErrorKind::DuplicateTransitions(sym)));
            }
            let raw: Vec<&str> = parts.collect();
            if raw.len() != n {
                return Err(err(
                    line,
                    ParseErrorKind::WrongArity {
                        sym,
                        expected: n,
                        got: raw.len(),
                    },
                ));
            }
            let targets =
                raw.iter()
                    .map(|t| {
                        t.parse::<usize>().ok().filter(|&t| t < n).ok_or_else(|| {
                            err(line, ParseErrorKind::TargetOutOfRange(t.to_string()))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            rows[idx] = Some(targets);
        }
        if let Some((line, content)) = lines.next() {
            return Err(err(line, ParseErrorKind::Unexpected(content.to_string())));
        }

        // k distinct declared letters and k trans lines without duplicates
        // means every row is filled.
        let transitions: Vec<Vec<usize>> = rows.into_iter().map(|r| r.unwrap()).collect();
        Ok(Automaton::new(n, letters, transitions).expect("validated while parsing"))
    }
}

impl FromStr for Automaton {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Automaton::parse(s)
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}
