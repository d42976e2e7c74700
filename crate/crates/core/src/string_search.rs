//! Repeated string search: the universe is the set of candidate match
//! positions.
//!
//! Match indices are 1-based, `j ∈ [1, n - m + 1]`. Index `j` is stored in a
//! [`PrunedSet`] as universe id `j - 1`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::pruning::{Allowed, DomainOracle, Output, PrunedSet, Solved, UniverseId};
use crate::{Error, Result};

/// A text/pattern pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchInstance {
    text: Vec<u8>,
    pattern: Vec<u8>,
}

impl SearchInstance {
    pub fn new(text: impl Into<Vec<u8>>, pattern: impl Into<Vec<u8>>) -> Result<Self> {
        let (text, pattern) = (text.into(), pattern.into());
        if pattern.is_empty() {
            return Err(Error::MalformedInstance("empty pattern".into()));
        }
        if pattern.len() > text.len() {
            return Err(Error::MalformedInstance(format!(
                "pattern length {} exceeds text length {}",
                pattern.len(),
                text.len()
            )));
        }
        Ok(SearchInstance { text, pattern })
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    /// `n - m + 1`, the number of candidate positions.
    pub fn positions(&self) -> usize {
        self.text.len() - self.pattern.len() + 1
    }

    fn matches_at(&self, j: usize) -> bool {
        let start = j - 1;
        self.text[start..start + self.pattern.len()] == self.pattern[..]
    }
}

/// Universe id of 1-based match index `j`.
pub fn index_to_id(j: usize) -> UniverseId {
    assert!(j >= 1, "match indices are 1-based");
    UniverseId(j - 1)
}

/// 1-based match index of a universe id.
pub fn id_to_index(id: UniverseId) -> usize {
    id.0 + 1
}

/// Builds a candidate set from 1-based match indices.
pub fn candidates(positions: usize, indices: &[usize]) -> Result<PrunedSet> {
    let mut s = PrunedSet::empty(positions);
    for &j in indices {
        if j == 0 || j > positions {
            return Err(Error::MalformedInstance(format!("candidate index {j} outside [1, {positions}]")));
        }
        s.insert(index_to_id(j))?;
    }
    Ok(s)
}

/// Smallest allowed 1-based `j` with `text[j..j+m-1] == pattern`.
///
/// `work` is the number of candidate positions examined, not symbol
/// comparisons.
pub fn match_restricted(instance: &SearchInstance, allowed: Allowed<'_>) -> Result<Solved<usize>> {
    let positions = instance.positions();
    let mut work = 0;
    let mut check = |j: usize| {
        work += 1;
        instance.matches_at(j)
    };
    let found = match allowed {
        Allowed::All => (1..=positions).find(|&j| check(j)),
        Allowed::Only(set) => {
            if set.universe_size() != positions {
                return Err(Error::MalformedInstance(format!(
                    "candidate set over {} positions for an instance with {positions}",
                    set.universe_size()
                )));
            }
            set.iter().map(id_to_index).find(|&j| check(j))
        }
    };
    Ok(Solved { output: found.into(), work })
}

/// `{j}` for a match at `j`.
pub fn search_witness(positions: usize, result: &Output<usize>) -> Result<PrunedSet> {
    match result {
        Output::Bot => Err(Error::BotWitness),
        Output::Value(j) => candidates(positions, &[*j]),
    }
}

/// Fixed text and pattern lengths; instances vary per round.
///
/// A no-match round has an empty witness: exploring it teaches nothing, and
/// every restriction also reports no match.
#[derive(Debug, Clone, Copy)]
pub struct StringSearchOracle {
    text_len: usize,
    pattern_len: usize,
}

impl StringSearchOracle {
    pub fn new(text_len: usize, pattern_len: usize) -> Result<Self> {
        if pattern_len == 0 || pattern_len > text_len {
            return Err(Error::MalformedInstance(format!(
                "need 1 <= m <= n, got n = {text_len}, m = {pattern_len}"
            )));
        }
        Ok(StringSearchOracle { text_len, pattern_len })
    }

    pub fn positions(&self) -> usize {
        self.text_len - self.pattern_len + 1
    }

    fn check(&self, instance: &SearchInstance) -> Result<()> {
        if instance.text.len() != self.text_len || instance.pattern.len() != self.pattern_len {
            return Err(Error::MalformedInstance(format!(
                "expected lengths ({}, {}), got ({}, {})",
                self.text_len,
                self.pattern_len,
                instance.text.len(),
                instance.pattern.len()
            )));
        }
        Ok(())
    }
}

impl DomainOracle for StringSearchOracle {
    type Instance = SearchInstance;
    type Solution = usize;

    fn universe_size(&self) -> usize {
        self.positions()
    }

    fn solve(&self, instance: &SearchInstance, allowed: Allowed<'_>) -> Result<Solved<usize>> {
        self.check(instance)?;
        match_restricted(instance, allowed)
    }

    fn witness(&self, _instance: &SearchInstance, solution: &Output<usize>) -> Result<PrunedSet> {
        match solution {
            Output::Bot => Ok(PrunedSet::empty(self.positions())),
            value => search_witness(self.positions(), value),
        }
    }

    fn same(&self, a: &Output<usize>, b: &Output<usize>) -> bool {
        a == b
    }
}

/// A stream of instances over a declared alphabet.
///
/// Text form: a line `alphabet <symbols>`, then alternating `text` and
/// `pattern` lines. Match indices reported for these instances are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceStream {
    pub alphabet: BTreeSet<u8>,
    pub instances: Vec<SearchInstance>,
}

impl InstanceStream {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing alphabet line"))?;
        let symbols = header
            .strip_prefix("alphabet ")
            .ok_or_else(|| Error::parse(hline, "first line must be `alphabet <symbols>`"))?;
        let alphabet: BTreeSet<u8> = symbols.trim().bytes().collect();
        if alphabet.is_empty() {
            return Err(Error::parse(hline, "empty alphabet"));
        }
        let mut instances = Vec::new();
        let mut shape = None;
        while let Some((tline, text)) = lines.next() {
            let (pline, pattern) = lines.next().ok_or_else(|| Error::parse(tline, "text without a pattern"))?;
            for (lineno, s) in [(tline, text), (pline, pattern)] {
                if let Some(c) = s.bytes().find(|c| !alphabet.contains(c)) {
                    return Err(Error::parse(lineno, format!("symbol `{}` not in alphabet", c as char)));
                }
            }
            let inst = SearchInstance::new(text, pattern).map_err(|e| Error::parse(pline, e.to_string()))?;
            let dims = (inst.text.len(), inst.pattern.len());
            if *shape.get_or_insert(dims) != dims {
                return Err(Error::parse(tline, "all instances must share text and pattern lengths"));
            }
            instances.push(inst);
        }
        Ok(InstanceStream { alphabet, instances })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("alphabet ");
        s.extend(self.alphabet.iter().map(|&c| c as char));
        s.push('\n');
        for inst in &self.instances {
            writeln!(s, "{}", String::from_utf8_lossy(&inst.text)).unwrap();
            writeln!(s, "{}", String::from_utf8_lossy(&inst.pattern)).unwrap();
        }
        s
    }
}
