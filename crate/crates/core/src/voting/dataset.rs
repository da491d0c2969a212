//! Complete-ranking datasets.
//!
//! Plain format: one ranking per line, whitespace-separated object ids,
//! most-preferred first. Blank lines and lines starting with `#` are skipped.
//!
//! The Sushi `.order` files carry a header line and two leading count fields
//! on every ranking line; pass `skip_tokens = 2` to drop them (the header then
//! becomes empty and is ignored).

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::IndexedRandom;

use crate::error::{Error, Result};
use crate::stream::{self, tag};

/// Parsed rankings with ids remapped to `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingSet {
    /// Original ids; `labels[x]` is the id of object `x`.
    pub labels: Vec<String>,
    pub rankings: Vec<Vec<usize>>,
}

impl RankingSet {
    pub fn objects(&self) -> usize {
        self.labels.len()
    }

    pub fn len(&self) -> usize {
        self.rankings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rankings.is_empty()
    }

    /// Plain-format text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rankings {
            let line: Vec<&str> = r.iter().map(|&x| self.labels[x].as_str()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parses ranking text. `path` is used only in error messages.
pub fn parse_rankings(text: &str, skip_tokens: usize, path: &Path) -> Result<RankingSet> {
    let err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let mut raw: Vec<(usize, Vec<&str>)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().skip(skip_tokens).collect();
        if tokens.is_empty() {
            continue;
        }
        raw.push((idx + 1, tokens));
    }
    let Some((first_line, first)) = raw.first() else {
        return Err(err(0, "no rankings found".into()));
    };

    let ids: BTreeSet<&str> = first.iter().copied().collect();
    if ids.len() != first.len() {
        return Err(err(*first_line, "ranking repeats an object".into()));
    }
    // numeric ids sort numerically, anything else lexicographically
    let mut labels: Vec<&str> = ids.iter().copied().collect();
    if labels.iter().all(|s| s.parse::<u64>().is_ok()) {
        labels.sort_by_key(|s| s.parse::<u64>().unwrap());
    }
    let index_of = |s: &str| labels.iter().position(|&l| l == s);

    let mut rankings = Vec::with_capacity(raw.len());
    for (line, tokens) in &raw {
        if tokens.len() != labels.len() {
            return Err(err(*line, format!("expected {} objects, found {}", labels.len(), tokens.len())));
        }
        let mut seen = vec![false; labels.len()];
        let mut ranking = Vec::with_capacity(tokens.len());
        for tok in tokens {
            let x = index_of(tok).ok_or_else(|| err(*line, format!("unknown object id '{tok}'")))?;
            if std::mem::replace(&mut seen[x], true) {
                return Err(err(*line, format!("object id '{tok}' repeated")));
            }
            ranking.push(x);
        }
        rankings.push(ranking);
    }
    Ok(RankingSet { labels: labels.into_iter().map(String::from).collect(), rankings })
}

pub fn load_rankings(path: &Path, skip_tokens: usize) -> Result<RankingSet> {
    let text = std::fs::read_to_string(path)?;
    parse_rankings(&text, skip_tokens, path)
}

const BUNDLED: &str = include_str!("../../data/pl_rankings_10x5000.txt");

/// The bundled stand-in corpus: 5000 Plackett–Luce rankings of 10 objects.
pub fn bundled_corpus() -> RankingSet {
    parse_rankings(BUNDLED, 0, Path::new("data/pl_rankings_10x5000.txt")).expect("bundled corpus parses")
}

/// Plackett–Luce sample of `voters` complete rankings over `scores.len()` objects:
/// each position is filled by drawing a remaining object with probability
/// proportional to its score. Used as a stand-in corpus when no real dataset is available.
pub fn plackett_luce_corpus(scores: &[f64], voters: usize, seed: u64) -> RankingSet {
    let m = scores.len();
    let mut rankings = Vec::with_capacity(voters);
    for v in 0..voters {
        let mut rng = stream::rng(seed, &[tag::CORPUS, v as u64]);
        let mut remaining: Vec<usize> = (0..m).collect();
        let mut ranking = Vec::with_capacity(m);
        while !remaining.is_empty() {
            let pick = *remaining
                .choose_weighted(&mut rng, |&x| scores[x])
                .expect("positive scores");
            remaining.retain(|&x| x != pick);
            ranking.push(pick);
        }
        rankings.push(ranking);
    }
    RankingSet { labels: (0..m).map(|x| x.to_string()).collect(), rankings }
}
