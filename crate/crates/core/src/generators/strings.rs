use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::string_search::SearchInstance;
use crate::{Error, Result};

/// Random texts over a fixed alphabet in which the pattern, when planted,
/// always lands at one of a few fixed "hotspot" offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchWorkload {
    pub text_len: usize,
    pub pattern_len: usize,
    pub alphabet: Vec<u8>,
    /// 1-based match indices where patterns get planted.
    pub hotspots: Vec<usize>,
    /// Chance that a round's pattern is planted at a hotspot.
    pub plant_prob: f64,
}

impl SearchWorkload {
    /// Picks `hotspot_count` distinct hotspots uniformly.
    pub fn random<R: Rng + ?Sized>(
        text_len: usize,
        pattern_len: usize,
        alphabet: Vec<u8>,
        hotspot_count: usize,
        plant_prob: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if pattern_len == 0 || pattern_len > text_len {
            return Err(Error::domain(format!("need 1 <= pattern length <= text length, got {pattern_len} > {text_len}")));
        }
        let positions = text_len - pattern_len + 1;
        if hotspot_count == 0 || hotspot_count > positions {
            return Err(Error::domain(format!("hotspot count must be in 1..={positions}")));
        }
        let mut hotspots: Vec<_> = rand::seq::index::sample(rng, positions, hotspot_count).into_iter().map(|i| i + 1).collect();
        hotspots.sort_unstable();
        let w = SearchWorkload { text_len, pattern_len, alphabet, hotspots, plant_prob };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pattern_len == 0 || self.pattern_len > self.text_len {
            return Err(Error::domain("need 1 <= pattern length <= text length"));
        }
        let mut sorted = self.alphabet.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() || sorted.len() != self.alphabet.len() || sorted.iter().any(|c| c.is_ascii_whitespace()) {
            return Err(Error::domain("alphabet must be non-empty distinct non-whitespace symbols"));
        }
        let positions = self.text_len - self.pattern_len + 1;
        if self.hotspots.is_empty() || self.hotspots.iter().any(|&h| h == 0 || h > positions) {
            return Err(Error::domain(format!("hotspots must lie in 1..={positions}")));
        }
        if !(0.0..=1.0).contains(&self.plant_prob) {
            return Err(Error::domain("plant probability must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// `horizon` instances: uniform random text and pattern, then with
/// probability `plant_prob` the pattern is copied into the text at a
/// uniformly chosen hotspot.
pub fn synth_search_sequence<R: Rng + ?Sized>(
    workload: &SearchWorkload,
    horizon: usize,
    rng: &mut R,
) -> Result<Vec<SearchInstance>> {
    workload.validate()?;
    let sigma = &workload.alphabet;
    let draw = |len: usize, rng: &mut R| -> Vec<u8> { (0..len).map(|_| sigma[rng.random_range(0..sigma.len())]).collect() };
    (0..horizon)
        .map(|_| {
            let mut text = draw(workload.text_len, rng);
            let pattern = draw(workload.pattern_len, rng);
            if rng.random_bool(workload.plant_prob) {
                let at = workload.hotspots[rng.random_range(0..workload.hotspots.len())] - 1;
                text[at..at + pattern.len()].copy_from_slice(&pattern);
            }
            SearchInstance::new(text, pattern)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Purpose};

    #[test]
    fn planted_patterns_match_at_a_hotspot_or_earlier() {
        let mut rng = stream(0, 0, Purpose::BaseProblem);
        let w = SearchWorkload::random(40, 4, b"ab".to_vec(), 3, 1.0, &mut rng).unwrap();
        let seq = synth_search_sequence(&w, 200, &mut stream(0, 0, Purpose::Instances)).unwrap();
        for inst in &seq {
            let hit = (0..inst.positions()).find(|&i| inst.text()[i..i + 4] == *inst.pattern()).map(|i| i + 1);
            let first = hit.expect("planted pattern must match");
            assert!(first <= *w.hotspots.last().unwrap());
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let w = SearchWorkload { text_len: 10, pattern_len: 3, alphabet: b"xyz".to_vec(), hotspots: vec![2, 8], plant_prob: 0.5 };
        let a = synth_search_sequence(&w, 30, &mut stream(3, 1, Purpose::Instances)).unwrap();
        let b = synth_search_sequence(&w, 30, &mut stream(3, 1, Purpose::Instances)).unwrap();
        assert_eq!(a, b);
        assert!(SearchWorkload { hotspots: vec![9], ..w.clone() }.validate().is_err());
        assert!(SearchWorkload { alphabet: b"xx".to_vec(), ..w.clone() }.validate().is_err());
        assert!(SearchWorkload { pattern_len: 11, ..w }.validate().is_err());
    }
}
