use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Local randomizer applied to a user's datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MechanismKind {
    RandomizedResponse,
    BitFlipping,
    Gaussian,
    Laplace,
}

impl MechanismKind {
    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::RandomizedResponse => "randomized_response",
            MechanismKind::BitFlipping => "bit_flipping",
            MechanismKind::Gaussian => "gaussian",
            MechanismKind::Laplace => "laplace",
        }
    }
}

/// The mechanism and budget a batch of users is about to be queried with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MechanismUse {
    pub kind: MechanismKind,
    pub epsilon: f64,
    pub delta: f64,
}

impl MechanismUse {
    pub fn new(kind: MechanismKind, epsilon: f64, delta: f64) -> Self {
        Self { kind, epsilon, delta }
    }
}

/// One line of the exported audit log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub user_index: usize,
    pub mechanism_name: String,
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
struct AuditSpan {
    start: usize,
    end: usize,
    usage: MechanismUse,
}

/// Per-user record of which mechanism touched which user, kept as runs of
/// consecutive indices and expanded on export.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditLog {
    spans: Vec<AuditSpan>,
}

impl AuditLog {
    fn push(&mut self, index: usize, usage: MechanismUse) {
        if let Some(last) = self.spans.last_mut() {
            if last.end == index && last.usage == usage {
                last.end += 1;
                return;
            }
        }
        self.spans.push(AuditSpan { start: index, end: index + 1, usage });
    }

    /// Number of per-user records.
    pub fn len(&self) -> usize {
        self.spans.iter().map(|s| s.end - s.start).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Records in consumption order.
    pub fn records(&self) -> impl Iterator<Item = AuditRecord> + '_ {
        self.spans.iter().flat_map(|span| {
            (span.start..span.end).map(move |user_index| AuditRecord {
                user_index,
                mechanism_name: span.usage.kind.name().to_string(),
                epsilon: span.usage.epsilon,
                delta: span.usage.delta,
            })
        })
    }

    /// Number of users queried by each mechanism kind, in first-use order.
    pub fn users_by_mechanism(&self) -> Vec<(MechanismKind, usize)> {
        let mut out: Vec<(MechanismKind, usize)> = Vec::new();
        for span in &self.spans {
            let n = span.end - span.start;
            match out.iter_mut().find(|(k, _)| *k == span.usage.kind) {
                Some((_, count)) => *count += n,
                None => out.push((span.usage.kind, n)),
            }
        }
        out
    }

    /// Largest (ε, δ) any single user was charged. Under one-shot access this
    /// is the budget of the whole protocol.
    pub fn max_user_budget(&self) -> (f64, f64) {
        self.spans.iter().fold((0.0, 0.0), |(e, d), s| (f64::max(e, s.usage.epsilon), f64::max(d, s.usage.delta)))
    }

    /// Checks that no user index appears in more than one record.
    pub fn verify_one_shot(&self) -> Result<()> {
        let mut ranges: Vec<(usize, usize)> = self.spans.iter().map(|s| (s.start, s.end)).collect();
        ranges.sort_unstable();
        for pair in ranges.windows(2) {
            if pair[1].0 < pair[0].1 {
                return Err(Error::AlreadyConsumed { index: pair[1].0 });
            }
        }
        Ok(())
    }

    /// Writes one JSON object per user: `{user_index, mechanism_name, epsilon, delta}`.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> io::Result<()> {
        for record in self.records() {
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Users' data under one-shot local access: every user may be handed to at
/// most one local randomizer over the pool's lifetime.
#[derive(Clone, Debug)]
pub struct UserPool {
    values: Vec<f64>,
    consumed: Vec<bool>,
    cursor: usize,
    remaining: usize,
    discarded: usize,
    audit: AuditLog,
}

impl UserPool {
    pub fn new(values: Vec<f64>) -> Self {
        let n = values.len();
        Self {
            values,
            consumed: vec![false; n],
            cursor: 0,
            remaining: n,
            discarded: 0,
            audit: AuditLog::default(),
        }
    }

    /// Total number of users, consumed or not.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    /// Users skipped without being queried (budgeted but unused).
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    pub fn is_consumed(&self, index: usize) -> bool {
        self.consumed.get(index).copied().unwrap_or(false)
    }

    pub fn audit(&self) -> &AuditLog {
        &self.audit
    }

    /// Hands the next `k` unconsumed users, in index order, to `usage`.
    pub fn take(&mut self, k: usize, usage: MechanismUse) -> Result<Vec<f64>> {
        let indices = self.claim(k)?;
        let mut out = Vec::with_capacity(k);
        for i in indices {
            self.audit.push(i, usage);
            out.push(self.values[i]);
        }
        Ok(out)
    }

    /// Hands one specific user to `usage`. Fails if that user was already consumed.
    pub fn take_user(&mut self, index: usize, usage: MechanismUse) -> Result<f64> {
        if index >= self.values.len() {
            return Err(Error::PoolExhausted { requested: index + 1, remaining: self.remaining });
        }
        if self.consumed[index] {
            return Err(Error::AlreadyConsumed { index });
        }
        self.consumed[index] = true;
        self.remaining -= 1;
        self.audit.push(index, usage);
        Ok(self.values[index])
    }

    /// Retires the next `k` unconsumed users without querying them.
    pub fn discard(&mut self, k: usize) -> Result<()> {
        self.claim(k)?;
        self.discarded += k;
        Ok(())
    }

    fn claim(&mut self, k: usize) -> Result<Vec<usize>> {
        if k > self.remaining {
            return Err(Error::PoolExhausted { requested: k, remaining: self.remaining });
        }
        let mut indices = Vec::with_capacity(k);
        while indices.len() < k {
            let i = self.cursor;
            self.cursor += 1;
            if !self.consumed[i] {
                self.consumed[i] = true;
                indices.push(i);
            }
        }
        self.remaining -= k;
        Ok(indices)
    }
}
