//! Linear ordering of leaders by the normalized weight of what they dominate,
//! and the momentousness of a whole system.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontier::{dominated_positions, frontier_sortscan};
use crate::model::{dominates, DeltaSystem, EntityId};

/// `score / total_score` for every entity.
pub fn normalized_weights(ds: &DeltaSystem) -> Result<BTreeMap<EntityId, f64>> {
    let weights = weight_vector(ds)?;
    Ok(ds
        .entities()
        .iter()
        .zip(weights)
        .map(|(e, w)| (e.id.clone(), w))
        .collect())
}

/// Normalized weights in rank order.
fn weight_vector(ds: &DeltaSystem) -> Result<Vec<f64>> {
    let total = ds.total_score().ok_or(Error::ScoresUnavailable)?;
    if total <= 0.0 {
        return Err(Error::ZeroTotalScore);
    }
    Ok(ds
        .entities()
        .iter()
        .map(|e| e.score.unwrap_or(0.0) / total)
        .collect())
}

/// `w(m)`: sum of normalized weights over the entities `id` dominates.
pub fn leader_weight(ds: &DeltaSystem, id: &str) -> Result<f64> {
    let position = ds.require(id)?;
    let m = &ds.entities()[position];
    if ds.entities().iter().any(|e| dominates(e, m)) {
        return Err(Error::NotALeader(id.to_owned()));
    }
    let weights = weight_vector(ds)?;
    Ok(dominated_weight(ds, position, &weights))
}

fn dominated_weight(ds: &DeltaSystem, position: usize, weights: &[f64]) -> f64 {
    dominated_positions(ds, position)
        .into_iter()
        .map(|i| weights[i])
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedLeader {
    pub id: EntityId,
    pub rank: usize,
    pub weight: f64,
    pub relative_gain: f64,
}

/// Leaders sorted by weight descending, then relative gain descending, then id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderRanking {
    pub leaders: Vec<RankedLeader>,
    pub requires_scores: bool,
}

pub fn rank_leaders(ds: &DeltaSystem) -> Result<LeaderRanking> {
    let weights = weight_vector(ds)?;
    let frontier = frontier_sortscan(ds)?;
    let mut leaders: Vec<RankedLeader> = frontier
        .leaders
        .into_iter()
        .map(|l| RankedLeader {
            weight: dominated_weight(ds, l.rank - 1, &weights),
            id: l.id,
            rank: l.rank,
            relative_gain: l.relative_gain,
        })
        .collect();
    leaders.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then(b.relative_gain.total_cmp(&a.relative_gain))
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(LeaderRanking {
        leaders,
        requires_scores: true,
    })
}

/// One leader's contribution `r(m) * w(m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumTerm {
    pub leader: String,
    pub relative_gain: f64,
    pub weight: f64,
    pub product: f64,
}

impl MomentumTerm {
    pub fn new(leader: impl Into<String>, relative_gain: f64, weight: f64) -> Self {
        Self {
            leader: leader.into(),
            relative_gain,
            weight,
            product: relative_gain * weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentousnessScore {
    pub value: f64,
    pub terms: Vec<MomentumTerm>,
}

impl MomentousnessScore {
    /// Scores a pre-computed leader list.
    pub fn from_terms(terms: Vec<MomentumTerm>) -> Self {
        let value = terms.iter().map(|t| t.product).sum();
        Self { value, terms }
    }
}

/// `Σ r(m)·w(m)` over the leaders of `ds`, in rank order of the leaders.
pub fn momentousness(ds: &DeltaSystem) -> Result<MomentousnessScore> {
    let weights = weight_vector(ds)?;
    let frontier = frontier_sortscan(ds)?;
    let terms = frontier
        .leaders
        .iter()
        .map(|l| {
            MomentumTerm::new(
                l.id.as_str(),
                l.relative_gain,
                dominated_weight(ds, l.rank - 1, &weights),
            )
        })
        .collect();
    Ok(MomentousnessScore::from_terms(terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoreMomentous {
    A,
    B,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemComparison {
    pub a: MomentousnessScore,
    pub b: MomentousnessScore,
    pub more_momentous: MoreMomentous,
}

impl SystemComparison {
    pub fn new(a: MomentousnessScore, b: MomentousnessScore) -> Self {
        let more_momentous = match a.value.total_cmp(&b.value) {
            Ordering::Greater => MoreMomentous::A,
            Ordering::Less => MoreMomentous::B,
            Ordering::Equal => MoreMomentous::Equal,
        };
        Self {
            a,
            b,
            more_momentous,
        }
    }
}

pub fn compare_systems(a: &DeltaSystem, b: &DeltaSystem) -> Result<SystemComparison> {
    Ok(SystemComparison::new(momentousness(a)?, momentousness(b)?))
}
