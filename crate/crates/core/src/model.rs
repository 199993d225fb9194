//! The delta-system data model: entities with absolute and relative gain over
//! one time window, and the snapshots those gains are derived from.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque entity identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for EntityId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

impl std::borrow::Borrow<str> for EntityId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// One entity's change over the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityGain {
    pub id: EntityId,
    /// 1-based ordinal, 1 = highest score.
    pub rank: usize,
    /// Score at the start of the window, when known.
    pub score: Option<f64>,
    /// Absolute gain.
    pub gain: f64,
    /// Relative gain as a dimensionless fraction.
    pub relative_gain: f64,
}

impl EntityGain {
    /// True iff `other` strictly exceeds `self` in both gains.
    pub fn is_dominated_by(&self, other: &EntityGain) -> bool {
        dominates(other, self)
    }
}

/// True iff `winner` strictly exceeds `loser` in both absolute and relative
/// gain. A tie in either coordinate makes the pair incomparable.
#[inline]
pub fn dominates(winner: &EntityGain, loser: &EntityGain) -> bool {
    winner.gain > loser.gain && winner.relative_gain > loser.relative_gain
}

/// Unranked input row for [`DeltaSystem::build`].
#[derive(Debug, Clone, PartialEq)]
pub struct GainRecord {
    pub id: EntityId,
    pub score: Option<f64>,
    pub gain: f64,
    pub relative_gain: f64,
}

impl GainRecord {
    pub fn new(id: impl Into<EntityId>, score: Option<f64>, gain: f64, relative_gain: f64) -> Self {
        Self {
            id: id.into(),
            score,
            gain,
            relative_gain,
        }
    }
}

/// A ranked set of entities and their gains over one window.
///
/// Entities are stored in rank order, so `entities()[i].rank == i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSystem {
    entities: Vec<EntityGain>,
    window: String,
    total_score: Option<f64>,
    index: HashMap<EntityId, usize>,
}

impl DeltaSystem {
    /// Ranks `records` and builds the system.
    ///
    /// When every record carries a score, entities are ranked by descending
    /// score with ties broken by ascending id. If any score is missing the
    /// input order defines the ranks and weighting is unavailable.
    pub fn build(records: Vec<GainRecord>, window: impl Into<String>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(records.len());
        for (position, record) in records.iter().enumerate() {
            if record.id.as_str().is_empty() {
                return Err(Error::EmptyId);
            }
            if seen.insert(record.id.clone(), position).is_some() {
                return Err(Error::DuplicateId(record.id.to_string()));
            }
            if let Some(score) = record.score {
                if !score.is_finite() {
                    return Err(Error::NonFinite {
                        id: record.id.to_string(),
                        field: "score",
                    });
                }
                if score < 0.0 {
                    return Err(Error::NegativeScore {
                        id: record.id.to_string(),
                        score,
                    });
                }
            }
            if !record.gain.is_finite() {
                return Err(Error::NonFinite {
                    id: record.id.to_string(),
                    field: "absolute gain",
                });
            }
            if !record.relative_gain.is_finite() {
                return Err(Error::NonFinite {
                    id: record.id.to_string(),
                    field: "relative gain",
                });
            }
        }

        let mut records = records;
        if records.iter().all(|r| r.score.is_some()) {
            records.sort_by(|a, b| {
                let (sa, sb) = (a.score.unwrap_or(0.0), b.score.unwrap_or(0.0));
                sb.total_cmp(&sa).then_with(|| a.id.cmp(&b.id))
            });
        }
        Ok(Self::assemble(records, window.into()))
    }

    /// Assigns ranks in the given order.
    fn assemble(records: Vec<GainRecord>, window: String) -> Self {
        let total_score = records
            .iter()
            .map(|r| r.score)
            .sum::<Option<f64>>();
        let entities: Vec<EntityGain> = records
            .into_iter()
            .enumerate()
            .map(|(i, r)| EntityGain {
                id: r.id,
                rank: i + 1,
                score: r.score,
                gain: r.gain,
                relative_gain: r.relative_gain,
            })
            .collect();
        let index = entities
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        Self {
            entities,
            window,
            total_score,
            index,
        }
    }

    pub fn entities(&self) -> &[EntityGain] {
        &self.entities
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn window(&self) -> &str {
        &self.window
    }

    /// Sum of all scores, or `None` when some score is missing.
    pub fn total_score(&self) -> Option<f64> {
        self.total_score
    }

    pub fn has_scores(&self) -> bool {
        self.total_score.is_some()
    }

    /// Position of `id` in rank order (rank - 1).
    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Option<&EntityGain> {
        self.position(id).map(|i| &self.entities[i])
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize> {
        self.position(id)
            .ok_or_else(|| Error::UnknownEntity(id.to_owned()))
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.entities.is_empty() {
            Err(Error::EmptySystem)
        } else {
            Ok(())
        }
    }
}

/// Scores of all entities at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub timestamp: String,
    scores: BTreeMap<EntityId, f64>,
}

impl Snapshot {
    /// Builds a snapshot, rejecting duplicate ids and negative or non-finite
    /// scores.
    pub fn new<I, S>(timestamp: impl Into<String>, scores: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<EntityId>,
    {
        let mut map = BTreeMap::new();
        for (id, score) in scores {
            let id = id.into();
            if id.as_str().is_empty() {
                return Err(Error::EmptyId);
            }
            if !score.is_finite() {
                return Err(Error::NonFinite {
                    id: id.to_string(),
                    field: "score",
                });
            }
            if score < 0.0 {
                return Err(Error::NegativeScore {
                    id: id.to_string(),
                    score,
                });
            }
            if map.contains_key(&id) {
                return Err(Error::DuplicateId(id.to_string()));
            }
            map.insert(id, score);
        }
        Ok(Self {
            timestamp: timestamp.into(),
            scores: map,
        })
    }

    pub fn scores(&self) -> &BTreeMap<EntityId, f64> {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.scores.values().sum()
    }
}

/// How relative gain is computed from a snapshot pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RelativeGainMode {
    /// `(after - before) / before`
    #[default]
    Ratio,
    /// Change of the entity's share of the total score.
    ShareDelta,
}

/// A delta system derived from two snapshots, plus the entities that had to
/// be left out.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub system: DeltaSystem,
    pub warnings: Vec<String>,
}

/// Diffs two snapshots into a delta system.
///
/// Only ids present in both snapshots are kept. In ratio mode an entity with a
/// zero starting score has no defined relative gain and is excluded. Each
/// exclusion is reported in `warnings`.
pub fn derive_from_snapshots(
    before: &Snapshot,
    after: &Snapshot,
    mode: RelativeGainMode,
) -> Result<Derivation> {
    if before.is_empty() || after.is_empty() {
        return Err(Error::EmptySystem);
    }
    let total_before = before.total();
    let total_after = after.total();
    if mode == RelativeGainMode::ShareDelta && (total_before == 0.0 || total_after == 0.0) {
        return Err(Error::ZeroTotalScore);
    }

    let mut warnings = Vec::new();
    let mut records = Vec::new();
    for (id, &old) in before.scores() {
        let Some(&new) = after.scores().get(id) else {
            warnings.push(format!("`{id}` is missing from the later snapshot; excluded"));
            continue;
        };
        let gain = new - old;
        let relative_gain = match mode {
            RelativeGainMode::Ratio => {
                if old == 0.0 {
                    warnings.push(format!(
                        "`{id}` has zero starting score; relative gain undefined; excluded"
                    ));
                    continue;
                }
                gain / old
            }
            RelativeGainMode::ShareDelta => new / total_after - old / total_before,
        };
        records.push(GainRecord::new(id.clone(), Some(old), gain, relative_gain));
    }
    for id in after.scores().keys() {
        if !before.scores().contains_key(id) {
            warnings.push(format!("`{id}` is missing from the earlier snapshot; excluded"));
        }
    }

    let window = format!("{}..{}", before.timestamp, after.timestamp);
    let system = DeltaSystem::build(records, window)?;
    Ok(Derivation { system, warnings })
}
