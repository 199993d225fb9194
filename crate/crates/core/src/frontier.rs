//! Momentum leaders: the maximal elements of the strict two-coordinate
//! dominance order over ⟨absolute gain, relative gain⟩.
//!
//! Two routes compute the same set. [`frontier_bruteforce`] tests every
//! ordered pair and is kept as the reference. [`frontier_sortscan`] sorts by
//! absolute gain and keeps a running maximum of relative gain, which is the
//! staircase scan for two-dimensional maxima.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{dominates, DeltaSystem, EntityGain, EntityId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bruteforce,
    Sortscan,
}

/// A momentum leader and its coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leader {
    pub id: EntityId,
    pub rank: usize,
    pub gain: f64,
    pub relative_gain: f64,
}

impl From<&EntityGain> for Leader {
    fn from(e: &EntityGain) -> Self {
        Self {
            id: e.id.clone(),
            rank: e.rank,
            gain: e.gain,
            relative_gain: e.relative_gain,
        }
    }
}

/// Inclusive rank range `[low, high]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankInterval {
    pub low: usize,
    pub high: usize,
}

impl RankInterval {
    pub fn contains(&self, rank: usize) -> bool {
        self.low <= rank && rank <= self.high
    }
}

/// The Pareto frontier of a delta system. Leaders are listed in rank order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierResult {
    pub algorithm: Algorithm,
    pub leaders: Vec<Leader>,
}

impl FrontierResult {
    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.leaders.iter().map(|l| l.rank).collect()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.leaders.iter().map(|l| l.id.as_str()).collect()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.leaders.iter().any(|l| l.id.as_str() == id)
    }

    /// Materializes the dominated set and interval of every leader.
    /// Costs O(n) per leader.
    pub fn details(&self, ds: &DeltaSystem) -> Vec<LeaderDetail> {
        self.leaders
            .iter()
            .map(|leader| {
                let position = leader.rank - 1;
                let dominated = dominated_positions(ds, position)
                    .into_iter()
                    .map(|i| ds.entities()[i].id.clone())
                    .collect();
                LeaderDetail {
                    leader: leader.clone(),
                    dominated,
                    interval: interval_at(ds, position),
                }
            })
            .collect()
    }
}

/// A leader with its dominated set `D(m)` and interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderDetail {
    #[serde(flatten)]
    pub leader: Leader,
    pub dominated: Vec<EntityId>,
    pub interval: RankInterval,
}

/// All-pairs frontier. O(n²).
pub fn frontier_bruteforce(ds: &DeltaSystem) -> Result<FrontierResult> {
    ds.require_non_empty()?;
    let entities = ds.entities();
    // An entity is dominated iff it appears as the lower element of some pair.
    let mut dominated = vec![false; entities.len()];
    for upper in entities {
        for (j, lower) in entities.iter().enumerate() {
            if dominates(upper, lower) {
                dominated[j] = true;
            }
        }
    }
    let leaders = entities
        .iter()
        .zip(&dominated)
        .filter(|(_, &d)| !d)
        .map(|(e, _)| Leader::from(e))
        .collect();
    Ok(FrontierResult {
        algorithm: Algorithm::Bruteforce,
        leaders,
    })
}

/// Sort-and-scan frontier. O(n log n).
pub fn frontier_sortscan(ds: &DeltaSystem) -> Result<FrontierResult> {
    ds.require_non_empty()?;
    let positions = scan_leaders(ds.entities());
    Ok(FrontierResult {
        algorithm: Algorithm::Sortscan,
        leaders: positions
            .into_iter()
            .map(|i| Leader::from(&ds.entities()[i]))
            .collect(),
    })
}

/// Positions (ascending) of the maximal elements of `entities`.
///
/// Entities sharing an absolute gain are tested as one group against the
/// running maximum of relative gain over strictly larger gains only; the
/// group's own maximum is folded in afterwards, since equal gains never
/// dominate each other.
pub(crate) fn scan_leaders(entities: &[EntityGain]) -> Vec<usize> {
    scan_points(
        entities
            .iter()
            .enumerate()
            .map(|(i, e)| (e.gain, e.relative_gain, i))
            .collect(),
    )
}

/// Scans `(gain, relative_gain, position)` triples; returns leader positions
/// in ascending order.
pub(crate) fn scan_points(mut points: Vec<(f64, f64, usize)>) -> Vec<usize> {
    points.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));

    let mut leaders = Vec::new();
    let mut running_max = f64::NEG_INFINITY;
    for group in points.chunk_by(|a, b| a.0 == b.0) {
        let mut group_max = f64::NEG_INFINITY;
        for &(_, r, position) in group {
            if r >= running_max {
                leaders.push(position);
            }
            group_max = group_max.max(r);
        }
        running_max = running_max.max(group_max);
    }
    leaders.sort_unstable();
    leaders
}

/// Entities strictly below `id` in both gains, in rank order.
pub fn dominated_set(ds: &DeltaSystem, id: &str) -> Result<Vec<EntityId>> {
    let position = ds.require(id)?;
    Ok(dominated_positions(ds, position)
        .into_iter()
        .map(|i| ds.entities()[i].id.clone())
        .collect())
}

pub(crate) fn dominated_positions(ds: &DeltaSystem, position: usize) -> Vec<usize> {
    let m = &ds.entities()[position];
    ds.entities()
        .iter()
        .enumerate()
        .filter(|(_, e)| dominates(m, e))
        .map(|(i, _)| i)
        .collect()
}

/// The maximal contiguous rank range around `id` whose other members are all
/// dominated by it.
pub fn interval(ds: &DeltaSystem, id: &str) -> Result<RankInterval> {
    let position = ds.require(id)?;
    Ok(interval_at(ds, position))
}

fn interval_at(ds: &DeltaSystem, position: usize) -> RankInterval {
    let entities = ds.entities();
    let m = &entities[position];
    let mut high = position;
    while high + 1 < entities.len() && dominates(m, &entities[high + 1]) {
        high += 1;
    }
    let mut low = position;
    while low > 0 && dominates(m, &entities[low - 1]) {
        low -= 1;
    }
    RankInterval {
        low: low + 1,
        high: high + 1,
    }
}

/// Positions where a sequence reaches a new strict maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovingMaxima {
    /// 1-based, strictly increasing.
    pub indices: Vec<usize>,
}

impl MovingMaxima {
    pub fn count(&self) -> usize {
        self.indices.len()
    }
}

pub fn moving_maxima(values: &[f64]) -> MovingMaxima {
    let mut best = f64::NEG_INFINITY;
    let mut indices = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if i == 0 || v > best {
            indices.push(i + 1);
            best = v;
        }
    }
    MovingMaxima { indices }
}

/// Frontier size against the number of relative-gain records when entities
/// are read in descending absolute gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub frontier_size: usize,
    pub moving_maxima_count: usize,
    pub holds: bool,
    pub distinct_gains: bool,
    /// The bound is guaranteed only when both coordinates are pairwise
    /// distinct, and then the two counts are equal. A repeated relative gain
    /// is not a new strict maximum but can still belong to a leader.
    pub distinct_relative_gains: bool,
}

/// Relative gains read in descending absolute gain. Equal gains are ordered
/// by ascending relative gain, then rank.
pub fn relative_gains_by_gain(ds: &DeltaSystem) -> Vec<f64> {
    let entities = ds.entities();
    let mut order: Vec<usize> = (0..entities.len()).collect();
    order.sort_by(|&a, &b| {
        entities[b]
            .gain
            .total_cmp(&entities[a].gain)
            .then(entities[a].relative_gain.total_cmp(&entities[b].relative_gain))
            .then(a.cmp(&b))
    });
    order.into_iter().map(|i| entities[i].relative_gain).collect()
}

pub fn verify_bound(ds: &DeltaSystem) -> BoundCheck {
    let frontier_size = scan_leaders(ds.entities()).len();
    let moving_maxima_count = moving_maxima(&relative_gains_by_gain(ds)).count();
    BoundCheck {
        frontier_size,
        moving_maxima_count,
        holds: frontier_size <= moving_maxima_count,
        distinct_gains: all_distinct(ds.entities().iter().map(|e| e.gain)),
        distinct_relative_gains: all_distinct(ds.entities().iter().map(|e| e.relative_gain)),
    }
}

fn all_distinct(values: impl Iterator<Item = f64>) -> bool {
    let mut values: Vec<f64> = values.collect();
    values.sort_by(f64::total_cmp);
    values.windows(2).all(|w| w[0] != w[1])
}

/// Successive frontiers: layer 1 is the frontier, layer k the frontier after
/// removing layers 1..k-1. Ranks refer to the original system.
pub fn runners_up(ds: &DeltaSystem, layers: usize) -> Result<Vec<Vec<Leader>>> {
    ds.require_non_empty()?;
    let mut remaining: Vec<usize> = (0..ds.len()).collect();
    let mut out = Vec::new();
    while out.len() < layers && !remaining.is_empty() {
        let subset: Vec<EntityGain> = remaining.iter().map(|&i| ds.entities()[i].clone()).collect();
        let layer = scan_leaders(&subset);
        out.push(
            layer
                .iter()
                .map(|&j| Leader::from(&ds.entities()[remaining[j]]))
                .collect(),
        );
        let mut keep = vec![true; remaining.len()];
        for &j in &layer {
            keep[j] = false;
        }
        remaining = remaining
            .into_iter()
            .zip(keep)
            .filter_map(|(i, k)| k.then_some(i))
            .collect();
    }
    Ok(out)
}
