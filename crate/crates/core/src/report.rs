//! Deterministic rendering of results as JSON, CSV or markdown.

use std::fmt::Write as _;

use serde::Serialize;

use crate::frontier::{BoundCheck, FrontierResult, Leader, RankInterval};
use crate::model::DeltaSystem;
use crate::ranking::{LeaderRanking, MomentousnessScore, MoreMomentous, SystemComparison};
use crate::simulation::{BoundValue, PercentileSummary, StudyConfig, StudyResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// One leader's row in a frontier report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaderRow {
    pub id: String,
    pub rank: usize,
    pub g: f64,
    pub r: f64,
    /// `None` when the system carries no scores.
    pub w: Option<f64>,
    pub interval: RankInterval,
    pub dominated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierReport {
    pub window: String,
    pub entities: usize,
    pub algorithm: crate::frontier::Algorithm,
    pub leaders: Vec<LeaderRow>,
    /// Layers after the first, when requested.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub runners_up: Vec<Vec<Leader>>,
}

impl FrontierReport {
    pub fn new(ds: &DeltaSystem, frontier: &FrontierResult) -> Self {
        let weights = crate::ranking::normalized_weights(ds).ok();
        let leaders = frontier
            .details(ds)
            .into_iter()
            .map(|d| LeaderRow {
                w: weights
                    .as_ref()
                    .map(|w| d.dominated.iter().map(|id| w[id]).sum()),
                id: d.leader.id.to_string(),
                rank: d.leader.rank,
                g: d.leader.gain,
                r: d.leader.relative_gain,
                interval: d.interval,
                dominated: d.dominated.len(),
            })
            .collect();
        Self {
            window: ds.window().to_owned(),
            entities: ds.len(),
            algorithm: frontier.algorithm,
            leaders,
            runners_up: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct StudySummary<'a> {
    config: &'a StudyConfig,
    percentiles: &'a [PercentileSummary],
    bounds: &'a [BoundValue],
}

/// Anything the CLI can print.
#[derive(Debug, Clone)]
pub enum Report {
    Frontier(FrontierReport),
    Ranking(LeaderRanking),
    Momentousness(MomentousnessScore),
    Comparison(SystemComparison),
    Study(StudyResult),
    Bound(BoundCheck),
}

pub fn write_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
        Format::Markdown => to_markdown(report),
    }
}

fn to_json(report: &Report) -> String {
    let value = match report {
        Report::Frontier(r) => serde_json::to_value(r),
        Report::Ranking(r) => serde_json::to_value(r),
        Report::Momentousness(r) => serde_json::to_value(r),
        Report::Comparison(r) => serde_json::to_value(r),
        Report::Study(r) => serde_json::to_value(StudySummary {
            config: &r.config,
            percentiles: &r.percentiles,
            bounds: &r.bounds,
        }),
        Report::Bound(r) => serde_json::to_value(r),
    }
    .expect("report types serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("json value serializes");
    out.push('\n');
    out
}

/// Rounds for display: at most six decimals, at least two.
pub fn display_value(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0');
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let out = format!("{int}.{frac:0<2}");
    if out == "-0.00" {
        "0.00".into()
    } else {
        out
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(display_value).unwrap_or_else(|| "-".into())
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    wtr.write_record(header).expect("in-memory write");
    for row in rows {
        wtr.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

fn to_csv(report: &Report) -> String {
    match report {
        Report::Frontier(r) => {
            let first = r.leaders.iter().map(|l| {
                vec![
                    "1".into(),
                    l.id.clone(),
                    l.rank.to_string(),
                    l.g.to_string(),
                    l.r.to_string(),
                    l.w.map(|w| w.to_string()).unwrap_or_default(),
                    l.interval.low.to_string(),
                    l.interval.high.to_string(),
                    l.dominated.to_string(),
                ]
            });
            let rest = r.runners_up.iter().enumerate().flat_map(|(k, layer)| {
                layer.iter().map(move |l| {
                    let mut row = vec![
                        (k + 2).to_string(),
                        l.id.to_string(),
                        l.rank.to_string(),
                        l.gain.to_string(),
                        l.relative_gain.to_string(),
                    ];
                    row.resize(9, String::new());
                    row
                })
            });
            csv_rows(
                &["layer", "id", "rank", "g", "r", "w", "interval_low", "interval_high", "dominated"],
                first.chain(rest),
            )
        }
        Report::Ranking(r) => csv_rows(
            &["position", "id", "rank", "w", "r"],
            r.leaders.iter().enumerate().map(|(i, l)| {
                vec![
                    (i + 1).to_string(),
                    l.id.to_string(),
                    l.rank.to_string(),
                    l.weight.to_string(),
                    l.relative_gain.to_string(),
                ]
            }),
        ),
        Report::Momentousness(m) => csv_rows(&["leader", "r", "w", "product"], term_rows(m)),
        Report::Comparison(c) => csv_rows(
            &["system", "momentousness", "more_momentous"],
            [("a", &c.a), ("b", &c.b)].into_iter().map(|(name, s)| {
                vec![name.into(), s.value.to_string(), comparison_word(c.more_momentous).into()]
            }),
        ),
        Report::Study(s) => csv_rows(
            &["trial", "size"],
            s.sizes
                .iter()
                .enumerate()
                .map(|(i, size)| vec![i.to_string(), size.to_string()]),
        ),
        Report::Bound(b) => csv_rows(
            &["frontier_size", "moving_maxima_count", "holds", "distinct_gains", "distinct_relative_gains"],
            [vec![
                b.frontier_size.to_string(),
                b.moving_maxima_count.to_string(),
                b.holds.to_string(),
                b.distinct_gains.to_string(),
                b.distinct_relative_gains.to_string(),
            ]],
        ),
    }
}

fn term_rows(m: &MomentousnessScore) -> impl Iterator<Item = Vec<String>> + '_ {
    m.terms.iter().map(|t| {
        vec![
            t.leader.clone(),
            t.relative_gain.to_string(),
            t.weight.to_string(),
            t.product.to_string(),
        ]
    })
}

fn comparison_word(m: MoreMomentous) -> &'static str {
    match m {
        MoreMomentous::A => "a",
        MoreMomentous::B => "b",
        MoreMomentous::Equal => "equal",
    }
}

/// Cells may contain `|`; escape it so the table stays intact.
fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn to_markdown(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Frontier(r) => {
            let _ = writeln!(
                out,
                "## Momentum leaders ({} of {} entities, window `{}`)\n",
                r.leaders.len(),
                r.entities,
                r.window
            );
            out.push_str("| id | rank | g | r | w | interval | \\|D(m)\\| |\n");
            out.push_str("|---|---:|---:|---:|---:|---|---:|\n");
            for l in &r.leaders {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | [{}, {}] | {} |",
                    cell(&l.id),
                    l.rank,
                    l.g,
                    l.r,
                    opt(l.w),
                    l.interval.low,
                    l.interval.high,
                    l.dominated
                );
            }
            for (k, layer) in r.runners_up.iter().enumerate() {
                let _ = writeln!(out, "\n### Layer {}\n", k + 2);
                out.push_str("| id | rank | g | r |\n|---|---:|---:|---:|\n");
                for l in layer {
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} |",
                        cell(l.id.as_str()),
                        l.rank,
                        l.gain,
                        l.relative_gain
                    );
                }
            }
        }
        Report::Ranking(r) => {
            out.push_str("## Leaders by dominated weight\n\n");
            out.push_str("| # | id | rank | w | r |\n|---:|---|---:|---:|---:|\n");
            for (i, l) in r.leaders.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    i + 1,
                    cell(l.id.as_str()),
                    l.rank,
                    display_value(l.weight),
                    l.relative_gain
                );
            }
        }
        Report::Momentousness(m) => {
            markdown_terms(&mut out, m);
            let _ = writeln!(out, "\nmomentousness: {}", display_value(m.value));
        }
        Report::Comparison(c) => {
            out.push_str("## System A\n\n");
            markdown_terms(&mut out, &c.a);
            out.push_str("\n## System B\n\n");
            markdown_terms(&mut out, &c.b);
            out.push('\n');
            out.push_str(&comparison_line(c));
            out.push('\n');
        }
        Report::Study(s) => {
            let _ = writeln!(
                out,
                "## Frontier size over {} trials (n = {}, alpha = {}, seed = {})\n",
                s.config.trials, s.config.n, s.config.alpha, s.config.seed
            );
            out.push_str("| percentile | frontier size | fitted c |\n|---:|---:|---:|\n");
            for p in &s.percentiles {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} |",
                    p.percentile,
                    p.value,
                    display_value(p.fitted_c)
                );
            }
            out.push_str("\n| c | c·(log10 n + 1)² |\n|---:|---:|\n");
            for b in &s.bounds {
                let _ = writeln!(out, "| {} | {:.2} |", display_value(b.c), b.value);
            }
        }
        Report::Bound(b) => {
            let _ = writeln!(out, "frontier size: {}", b.frontier_size);
            let _ = writeln!(out, "moving maxima: {}", b.moving_maxima_count);
            let _ = writeln!(out, "bound holds: {}", b.holds);
            if !b.distinct_gains {
                out.push_str("note: absolute gains contain ties\n");
            }
        }
    }
    out
}

fn markdown_terms(out: &mut String, m: &MomentousnessScore) {
    out.push_str("| leader | r | w | r·w |\n|---|---:|---:|---:|\n");
    for t in &m.terms {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            cell(&t.leader),
            t.relative_gain,
            t.weight,
            display_value(t.product)
        );
    }
}

/// `B more momentous (2.125 > 0.50)`
pub fn comparison_line(c: &SystemComparison) -> String {
    let (a, b) = (display_value(c.a.value), display_value(c.b.value));
    match c.more_momentous {
        MoreMomentous::A => format!("A more momentous ({a} > {b})"),
        MoreMomentous::B => format!("B more momentous ({b} > {a})"),
        MoreMomentous::Equal => format!("equally momentous ({a} = {b})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::frontier_sortscan;
    use crate::model::GainRecord;
    use crate::ranking::MomentumTerm;

    fn abcd() -> DeltaSystem {
        DeltaSystem::build(
            vec![
                GainRecord::new("A", Some(100.0), 10.0, 0.1),
                GainRecord::new("B", Some(50.0), 5.0, 0.2),
                GainRecord::new("C", Some(10.0), 2.0, 0.5),
                GainRecord::new("D", Some(40.0), 1.0, 0.05),
            ],
            "abcd",
        )
        .unwrap()
    }

    #[test]
    fn display_rounding() {
        assert_eq!(display_value(0.5000000000000001), "0.50");
        assert_eq!(display_value(2.125), "2.125");
        assert_eq!(display_value(3.0), "3.00");
        assert_eq!(display_value(1.0 / 3.0), "0.333333");
        assert_eq!(display_value(-0.0), "0.00");
    }

    #[test]
    fn markdown_frontier_rows_in_rank_order() {
        let ds = abcd();
        let report = Report::Frontier(FrontierReport::new(&ds, &frontier_sortscan(&ds).unwrap()));
        let md = write_report(&report, Format::Markdown);
        let rows: Vec<_> = md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| id")).collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].starts_with("| A | 1 |"));
        assert!(rows[1].starts_with("| B | 2 |"));
        assert!(rows[2].starts_with("| C | 4 |"));
        assert!(rows[1].contains("[2, 3]"));
        assert_eq!(md, write_report(&report, Format::Markdown));
    }

    #[test]
    fn json_is_stable() {
        let ds = abcd();
        let report = Report::Frontier(FrontierReport::new(&ds, &frontier_sortscan(&ds).unwrap()));
        let a = write_report(&report, Format::Json);
        assert_eq!(a, write_report(&report, Format::Json));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["leaders"][2]["id"], "C");
        assert_eq!(v["leaders"][2]["w"], 0.2);
    }

    #[test]
    fn comparison_wording() {
        let e = MomentousnessScore::from_terms(vec![
            MomentumTerm::new("k1", 0.2, 0.1),
            MomentumTerm::new("k2", 0.4, 0.6),
            MomentumTerm::new("k3", 0.8, 0.3),
        ]);
        let f = MomentousnessScore::from_terms(vec![
            MomentumTerm::new("l1", 0.05, 0.1),
            MomentumTerm::new("l2", 0.1, 0.3),
            MomentumTerm::new("l3", 0.2, 0.2),
            MomentumTerm::new("l4", 0.5, 0.1),
            MomentumTerm::new("l5", 10.0, 0.2),
        ]);
        assert_eq!(
            comparison_line(&SystemComparison::new(e, f)),
            "B more momentous (2.125 > 0.50)"
        );
    }
}
