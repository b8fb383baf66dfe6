//! Regret, hypervolume, ranks, consensus and Friedman reports over the
//! rows of a result directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::Result;
use hpobench_core::analysis::{
    anytime_scores, friedman_test, hv_trajectory, kemeny_consensus, kendall_distance, mean_ranks, nemenyi_cd,
    normalized_regret, order_by_rank, HvContext, RegretCurve,
};
use hpobench_core::Mode;
use serde::{Deserialize, Serialize};

use crate::runner::{Manifest, ResultRow};

/// Performance curve of one run, `(cumulative_budget, value)`. The value is
/// normalized regret for single-objective cells and normalized
/// hypervolume for multi-objective ones.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    pub instance: String,
    pub mode: Mode,
    pub optimizer: String,
    pub replication: usize,
    pub cumulative_budget: f64,
    pub metric: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub mode: Mode,
    pub instance: String,
    pub optimizer: String,
    pub mean_rank: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeConsensus {
    pub mode: Mode,
    pub benchmarks: usize,
    pub order: Vec<String>,
    /// Sum of Kendall distances from `order` to the per-benchmark orders.
    pub total_distance: usize,
    /// Discordant pairs between `order` and the reference mode's order.
    pub distance_to_reference: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsensusReport {
    pub reference: Option<Mode>,
    pub distance: String,
    pub modes: Vec<ModeConsensus>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FriedmanReport {
    pub mode: Mode,
    pub benchmarks: usize,
    pub optimizers: Vec<String>,
    pub mean_ranks: Vec<f64>,
    pub statistic: f64,
    pub p_value: f64,
    pub critical_difference: Option<f64>,
    pub alpha: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Analysis {
    pub curves: Vec<CurveRow>,
    pub ranks: Vec<RankRow>,
    pub consensus: Option<ConsensusReport>,
    pub friedman: Vec<FriedmanReport>,
    /// Cells skipped, with the reason.
    pub skipped: Vec<String>,
}

type Run = Vec<(f64, bool, Vec<f64>)>;

/// `(instance, mode) -> optimizer -> replication -> run`.
type Grouped = BTreeMap<(String, Mode), BTreeMap<String, BTreeMap<usize, Run>>>;

fn group(rows: &[ResultRow]) -> Grouped {
    let mut g: Grouped = BTreeMap::new();
    for r in rows {
        g.entry((r.instance.clone(), r.mode))
            .or_default()
            .entry(r.optimizer.clone())
            .or_default()
            .entry(r.replication)
            .or_default()
            .push((r.cumulative_budget, r.full_fidelity, r.values()));
    }
    g
}

/// Per optimizer, per replication performance curves where lower is
/// better: regret, or one minus normalized hypervolume.
fn cell_curves(
    optimizers: &BTreeMap<String, BTreeMap<usize, Run>>,
) -> Result<(&'static str, BTreeMap<String, Vec<RegretCurve>>), String> {
    let m = optimizers.values().flat_map(|reps| reps.values()).flatten().map(|p| p.2.len()).max().unwrap_or(0);
    let runs: Vec<(&String, Vec<&Run>)> = optimizers.iter().map(|(o, reps)| (o, reps.values().collect())).collect();
    let mut out = BTreeMap::new();
    if m == 1 {
        let flat: Vec<Vec<(f64, Option<f64>)>> = runs
            .iter()
            .flat_map(|(_, reps)| reps.iter())
            .map(|run| run.iter().map(|(b, full, v)| (*b, full.then_some(v[0]))).collect())
            .collect();
        let curves = normalized_regret(&flat).map_err(|e| e.to_string())?;
        let mut it = curves.into_iter();
        for (o, reps) in &runs {
            out.insert((*o).clone(), it.by_ref().take(reps.len()).collect());
        }
        return Ok(("regret", out));
    }
    let pooled: Vec<&Vec<f64>> = runs.iter().flat_map(|(_, r)| r.iter()).flat_map(|run| run.iter()).filter(|p| p.1).map(|p| &p.2).collect();
    let ctx = HvContext::from_points(pooled).ok_or("no full-fidelity evaluations")?;
    for (o, reps) in &runs {
        let curves = reps
            .iter()
            .map(|run| {
                let pts: Vec<(f64, Option<Vec<f64>>)> =
                    run.iter().map(|(b, full, v)| (*b, full.then(|| v.clone()))).collect();
                let trace = hv_trajectory(&pts, &ctx);
                RegretCurve { points: trace.points.iter().map(|(b, hv)| (*b, 1.0 - hv)).collect() }
            })
            .collect();
        out.insert((*o).clone(), curves);
    }
    Ok(("hypervolume", out))
}

/// Optimizer names and their mean ranks on one benchmark.
type RankedCell = (Vec<String>, Vec<f64>);

/// Analyzes result rows. `budgets` maps `(instance, mode)` to the
/// protocol budget used for anytime comparison points. With a reference
/// mode, consensus orders of all modes are compared against it.
pub fn analyze(
    rows: &[ResultRow],
    budgets: &BTreeMap<(String, Mode), f64>,
    reference: Option<Mode>,
    alpha: f64,
) -> Analysis {
    let mut analysis = Analysis::default();
    // mode -> instance -> (optimizers, ranks)
    let mut by_mode: BTreeMap<Mode, BTreeMap<String, RankedCell>> = BTreeMap::new();
    for ((instance, mode), optimizers) in group(rows) {
        let key = format!("{instance}/{mode}");
        let Some(&budget) = budgets.get(&(instance.clone(), mode)) else {
            analysis.skipped.push(format!("{key}: unknown budget"));
            continue;
        };
        let (metric, curves) = match cell_curves(&optimizers) {
            Ok(c) => c,
            Err(e) => {
                analysis.skipped.push(format!("{key}: {e}"));
                continue;
            }
        };
        for (o, reps) in &curves {
            for (rep, c) in optimizers[o].keys().zip(reps) {
                for (b, v) in &c.points {
                    let value = if metric == "regret" { *v } else { 1.0 - v };
                    analysis.curves.push(CurveRow {
                        instance: instance.clone(),
                        mode,
                        optimizer: o.clone(),
                        replication: *rep,
                        cumulative_budget: *b,
                        metric,
                        value,
                    });
                }
            }
        }
        let names: Vec<String> = curves.keys().cloned().collect();
        let table: Vec<Vec<RegretCurve>> = curves.into_values().collect();
        let reps = table.iter().map(Vec::len).min().unwrap_or(0);
        if table.iter().any(|t| t.len() != reps) {
            log::warn!("{key}: unequal replication counts, ranking the first {reps}");
        }
        let ranks = mean_ranks(&anytime_scores(&table, budget));
        for (o, r) in names.iter().zip(&ranks) {
            analysis.ranks.push(RankRow { mode, instance: instance.clone(), optimizer: o.clone(), mean_rank: *r });
        }
        by_mode.entry(mode).or_default().insert(instance, (names, ranks));
    }

    let mut consensus = Vec::new();
    for (mode, benches) in &by_mode {
        let optimizers = &benches.values().next().expect("nonempty").0;
        let usable: Vec<&Vec<f64>> = benches.values().filter(|(o, _)| o == optimizers).map(|(_, r)| r).collect();
        if usable.len() != benches.len() {
            analysis.skipped.push(format!("{mode}: benchmarks with differing optimizer sets left out of tests"));
        }
        let table: Vec<Vec<f64>> = usable.iter().map(|r| r.to_vec()).collect();
        if let Ok(f) = friedman_test(&table) {
            let mean: Vec<f64> =
                (0..optimizers.len()).map(|j| table.iter().map(|r| r[j]).sum::<f64>() / table.len() as f64).collect();
            analysis.friedman.push(FriedmanReport {
                mode: *mode,
                benchmarks: table.len(),
                optimizers: optimizers.clone(),
                mean_ranks: mean,
                statistic: f.statistic,
                p_value: f.p_value,
                critical_difference: nemenyi_cd(optimizers.len(), table.len(), alpha).ok(),
                alpha,
            });
        }
        let orders: Vec<Vec<String>> =
            benches.values().filter(|(o, _)| o == optimizers).map(|(o, r)| order_by_rank(o, r)).collect();
        match kemeny_consensus(&orders) {
            Ok(c) => consensus.push(ModeConsensus {
                mode: *mode,
                benchmarks: orders.len(),
                order: c.order,
                total_distance: c.total_distance,
                distance_to_reference: None,
            }),
            Err(e) => analysis.skipped.push(format!("{mode}: consensus: {e}")),
        }
    }
    if !consensus.is_empty() {
        if let Some(r) = reference {
            if let Some(ref_order) = consensus.iter().find(|c| c.mode == r).map(|c| c.order.clone()) {
                for c in &mut consensus {
                    c.distance_to_reference = kendall_distance(&c.order, &ref_order).ok();
                }
            } else {
                analysis.skipped.push(format!("reference mode {r} has no consensus"));
            }
        }
        analysis.consensus = Some(ConsensusReport {
            reference,
            distance: "kendall (discordant pairs)".to_string(),
            modes: consensus,
        });
    }
    analysis
}

/// Budgets recorded per cell in a manifest.
pub fn manifest_budgets(manifest: &Manifest) -> BTreeMap<(String, Mode), f64> {
    manifest.cells.iter().filter_map(|c| c.budget.map(|b| ((c.instance.clone(), c.mode), b))).collect()
}

/// Writes `curves.csv`, `ranks.csv`, `consensus.json` and `friedman.json`.
pub fn write_reports(analysis: &Analysis, out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    let mut w = csv::Writer::from_path(out.join("curves.csv"))?;
    for r in &analysis.curves {
        w.serialize(r)?;
    }
    w.flush()?;
    let mut w = csv::Writer::from_path(out.join("ranks.csv"))?;
    for r in &analysis.ranks {
        w.serialize(r)?;
    }
    w.flush()?;
    if let Some(c) = &analysis.consensus {
        fs::write(out.join("consensus.json"), serde_json::to_string_pretty(c)?)?;
    }
    fs::write(out.join("friedman.json"), serde_json::to_string_pretty(&analysis.friedman)?)?;
    Ok(())
}
