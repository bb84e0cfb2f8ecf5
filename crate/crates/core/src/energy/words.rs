//! Reduced words over the free group `F_k` and the exact distribution of
//! its standard random walk.
//!
//! A generator is a nonzero `i8`: `+g` is the g-th generator, `-g` its
//! inverse (`g ∈ 1..=k`). Words are stored fully reduced.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type Word = Vec<i8>;

/// Append one letter with free cancellation.
pub fn push_reduced(w: &mut Word, s: i8) {
    debug_assert!(s != 0);
    if w.last() == Some(&-s) {
        w.pop();
    } else {
        w.push(s);
    }
}

/// Concatenate and reduce.
pub fn concat_reduced(w: &Word, v: &Word) -> Word {
    let mut out = w.clone();
    for &s in v {
        push_reduced(&mut out, s);
    }
    out
}

pub fn inverse(w: &Word) -> Word {
    w.iter().rev().map(|&s| -s).collect()
}

/// The signed generators `s_1, …, s_k, s_1⁻¹, …, s_k⁻¹`.
pub fn signed_generators(k: usize) -> Vec<i8> {
    let mut out: Vec<i8> = (1..=k as i8).collect();
    out.extend((1..=k as i8).map(|g| -g));
    out
}

/// Text form of a word: space-separated signed generator indices, the
/// identity rendered as `e` (so `[1, -2]` becomes `"1 -2"`).
pub fn word_to_string(w: &Word) -> String {
    if w.is_empty() {
        return "e".to_string();
    }
    w.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn word_from_string(s: &str) -> Result<Word> {
    if s == "e" {
        return Ok(Word::new());
    }
    let mut out = Word::new();
    for tok in s.split_whitespace() {
        let v: i8 = tok
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad word letter `{tok}`")))?;
        if v == 0 {
            return Err(Error::InvalidParameter("word letters are nonzero".into()));
        }
        out.push(v);
    }
    Ok(out)
}

/// Exact distribution over reduced words of the `n`-step standard walk on
/// `F_k` (step distribution `1/2k` on each signed generator).
#[derive(Clone, Debug)]
pub struct FreeWalkDistribution {
    pub rank: usize,
    pub steps: usize,
    table: BTreeMap<Word, f64>,
}

/// Support ceiling for the walk table; `2k(2k-1)^{n-1}` grows fast.
const SUPPORT_CAP: u64 = 20_000_000;

pub fn free_walk_distribution(k: usize, n: usize) -> Result<FreeWalkDistribution> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "free group rank must be >= 1".into(),
        ));
    }
    if n == 0 || n > 12 {
        return Err(Error::SizeLimit(format!(
            "walk length n = {n} outside the supported range 1..=12"
        )));
    }
    let mut est: u64 = 2 * k as u64;
    for _ in 1..n {
        est = est.saturating_mul((2 * k - 1).max(1) as u64);
        if est > SUPPORT_CAP {
            return Err(Error::SizeLimit(format!(
                "support of the {n}-step walk on F_{k} exceeds the cap"
            )));
        }
    }
    let gens = signed_generators(k);
    let step = 1.0 / (2 * k) as f64;
    let mut table: BTreeMap<Word, f64> = BTreeMap::from([(Word::new(), 1.0)]);
    for _ in 0..n {
        let mut next: BTreeMap<Word, f64> = BTreeMap::new();
        for (w, p) in &table {
            for &s in &gens {
                let mut nw = w.clone();
                push_reduced(&mut nw, s);
                *next.entry(nw).or_insert(0.0) += p * step;
            }
        }
        table = next;
    }
    Ok(FreeWalkDistribution {
        rank: k,
        steps: n,
        table,
    })
}

impl FreeWalkDistribution {
    pub fn mass(&self, w: &Word) -> f64 {
        self.table.get(w).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.table.iter().map(|(w, &p)| (w, p))
    }

    pub fn support_len(&self) -> usize {
        self.table.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.table.values().sum()
    }
}
