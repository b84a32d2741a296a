//! Completion-time analysis: shifted-exponential worker delays, the
//! order-statistic closed form, a Monte-Carlo harness, a timed pipeline with
//! straggler cancellation, and threshold/load trade-off sweeps.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gpd::{
    self, encode_shares, naive_threshold, recovery_threshold, SecureCodePlan, TradeoffPoint,
    WorkerResult,
};
use crate::maps::Family;
use crate::matrix::FieldMatrix;
use crate::partition::PartitionSpec;
use crate::psgpd::psgpd_threshold;

/// How worker downloads share the master's link. The reference model
/// serializes all downloads over one shared link; `ParallelLinks` instead
/// overlaps them on dedicated links and is offered as an alternative only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize, Default)]
pub enum CommTopology {
    #[default]
    SharedLink,
    ParallelLinks,
}

/// Shifted-exponential delay model: a worker performing `w` multiplications
/// finishes after `t_min_comp + Exp(mu * w)`, and results stream back at
/// `r_comm` symbols per second.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct LatencyModel {
    pub t_min_comp: f64,
    pub mu: f64,
    pub r_comm: f64,
    #[serde(default)]
    pub topology: CommTopology,
}

impl LatencyModel {
    pub fn new(t_min_comp: f64, mu: f64, r_comm: f64) -> Result<Self> {
        if !(t_min_comp >= 0.0) || !(mu > 0.0) || !(r_comm > 0.0) {
            return Err(Error::InvalidParameter(
                "latency model parameters must be positive".into(),
            ));
        }
        Ok(Self {
            t_min_comp,
            mu,
            r_comm,
            topology: CommTopology::SharedLink,
        })
    }

    pub fn with_r_comm(mut self, r_comm: f64) -> Self {
        self.r_comm = r_comm;
        self
    }

    fn rate(&self, work: f64) -> f64 {
        self.mu * work
    }

    fn comm_time(&self, p_r: usize, per_worker_symbols: f64) -> f64 {
        match self.topology {
            CommTopology::SharedLink => p_r as f64 * per_worker_symbols / self.r_comm,
            CommTopology::ParallelLinks => per_worker_symbols / self.r_comm,
        }
    }

    /// One delay draw; `mu = +inf` collapses the excess to zero.
    fn sample_delay<R: Rng>(&self, work: f64, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let rate = self.rate(work);
        let excess = if rate.is_infinite() {
            0.0
        } else {
            -(1.0 - u).ln() / rate
        };
        self.t_min_comp + excess
    }
}

/// Partial harmonic sum `H_hi - H_lo = sum_{i=lo+1}^{hi} 1/i`.
pub fn harmonic_diff(lo: usize, hi: usize) -> f64 {
    (lo + 1..=hi).map(|i| 1.0 / i as f64).sum()
}

fn analytic_from_parts(
    model: &LatencyModel,
    work: f64,
    per_worker_symbols: f64,
    p: usize,
    p_r: usize,
) -> Result<f64> {
    if p_r == 0 || p_r > p {
        return Err(Error::InvalidParameter(format!(
            "threshold {p_r} incompatible with {p} workers"
        )));
    }
    let rate = model.rate(work);
    let excess = if rate.is_infinite() {
        0.0
    } else {
        harmonic_diff(p - p_r, p) / rate
    };
    Ok(model.t_min_comp + excess + model.comm_time(p_r, per_worker_symbols))
}

/// Expected completion time when decoding from the fastest `p_r` of `p`
/// workers: minimum time, the `p_r`-th order statistic of the exponential
/// excess via harmonic numbers, and the download time.
pub fn analytic_completion_time(
    model: &LatencyModel,
    spec: &PartitionSpec,
    p: usize,
    p_r: usize,
) -> Result<f64> {
    analytic_from_parts(
        model,
        spec.worker_multiplications() as f64,
        spec.result_symbols() as f64,
        p,
        p_r,
    )
}

/// Summary of a Monte-Carlo run.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SimSummary {
    pub trials: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

/// Simulates `trials` pipeline executions: draw `p` i.i.d. shifted
/// exponential delays, keep the `p_r`-th smallest, add the download time.
pub fn simulate_completion(
    model: &LatencyModel,
    spec: &PartitionSpec,
    p: usize,
    p_r: usize,
    trials: usize,
    seed: u64,
) -> Result<SimSummary> {
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "at least one trial required".into(),
        ));
    }
    if p_r == 0 || p_r > p {
        return Err(Error::InvalidParameter(format!(
            "threshold {p_r} incompatible with {p} workers"
        )));
    }
    let work = spec.worker_multiplications() as f64;
    let comm = model.comm_time(p_r, spec.result_symbols() as f64);
    let mut rng = crate::field::seeded_rng(seed, 5);
    let mut delays = vec![0.0f64; p];
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..trials {
        for slot in delays.iter_mut() {
            *slot = model.sample_delay(work, &mut rng);
        }
        let (_, kth, _) = delays.select_nth_unstable_by(p_r - 1, |x, y| x.total_cmp(y));
        let completion = *kth + comm;
        sum += completion;
        sum_sq += completion * completion;
        min = min.min(completion);
        max = max.max(completion);
    }
    let mean = sum / trials as f64;
    let variance = (sum_sq / trials as f64 - mean * mean).max(0.0);
    Ok(SimSummary {
        trials,
        mean,
        std_dev: variance.sqrt(),
        min,
        max,
    })
}

/// Outcome of one timed pipeline execution.
#[derive(Debug, Clone)]
pub struct TimedRun {
    pub product: FieldMatrix,
    pub completion_seconds: f64,
    /// The workers whose results were decoded, fastest first.
    pub workers_used: Vec<usize>,
    pub straggler_count: usize,
}

/// Runs all workers concurrently with injected delays, decodes from the
/// first `recovery_threshold` simulated completions, and cancels the rest.
/// Workers poll a cancellation flag between output rows, so stragglers stop
/// early once the decoder has enough results.
pub fn run_pipeline_timed(
    code: &SecureCodePlan,
    a: &FieldMatrix,
    b: &FieldMatrix,
    model: &LatencyModel,
    seed: u64,
) -> Result<TimedRun> {
    let p = code.workers();
    let threshold = code.recovery_threshold();
    if p < threshold {
        return Err(Error::InsufficientShares {
            needed: threshold,
            got: p,
        });
    }
    let shares = encode_shares(a, b, code, seed)?;
    let work = code.spec.worker_multiplications() as f64;
    let mut delay_rng = crate::field::seeded_rng(seed, 6);
    let delays: Vec<f64> = (0..p)
        .map(|_| model.sample_delay(work, &mut delay_rng))
        .collect();

    // Simulated arrival order decides the winners; ties break on worker id.
    let mut arrival: Vec<usize> = (0..p).collect();
    arrival.sort_by(|&x, &y| delays[x].total_cmp(&delays[y]).then(x.cmp(&y)));
    let winners: std::collections::HashSet<usize> = arrival[..threshold].iter().copied().collect();

    let cancel = AtomicBool::new(false);
    let mut slots: Vec<Option<WorkerResult>> = vec![None; p];
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, Option<WorkerResult>)>();
        for share in &shares {
            let tx = tx.clone();
            let cancel = &cancel;
            scope.spawn(move || {
                let result = gpd::worker_multiply_cancellable(share, cancel);
                let _ = tx.send((share.worker_id, result));
            });
        }
        drop(tx);
        let mut winner_results = 0usize;
        for (worker_id, result) in rx {
            if let Some(mut r) = result {
                r.completion_time = Some(delays[worker_id]);
                slots[worker_id] = Some(r);
                if winners.contains(&worker_id) {
                    winner_results += 1;
                    if winner_results == threshold {
                        cancel.store(true, Ordering::Relaxed);
                    }
                }
            }
        }
    });

    let results: Vec<WorkerResult> = arrival[..threshold]
        .iter()
        .map(|&id| slots[id].take().expect("winner result missing"))
        .collect();
    let product = gpd::decode_product(&results, code)?;
    let completion = delays[arrival[threshold - 1]]
        + model.comm_time(threshold, code.spec.result_symbols() as f64);
    Ok(TimedRun {
        product,
        completion_seconds: completion,
        workers_used: arrival[..threshold].to_vec(),
        straggler_count: p - threshold,
    })
}

/// One row of a sweep artifact.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub point: TradeoffPoint,
    pub expected_time: Option<f64>,
}

/// Sweep output; serializes to CSV with the stable header
/// `family,t,s,d,P_C,P_R,C_L,E_T`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,t,s,d,P_C,P_R,C_L,E_T\n");
        for row in &self.rows {
            let p = &row.point;
            let e_t = row.expected_time.map_or(String::new(), |v| v.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.family, p.t, p.s, p.d, p.p_c, p.p_r, p.c_l, e_t
            ));
        }
        out
    }
}

/// Enumerates every split `(t, s, d)` with `ts = m`, `sd = n` and emits the
/// threshold/load pair per family and collusion level; dimension
/// divisibility is deferred to the caller (the load must still come out an
/// integer). Supplying a model adds the analytic completion time for `p`
/// workers where feasible.
pub fn tradeoff_sweep(
    m: usize,
    n: usize,
    dims: (usize, usize, usize),
    p: usize,
    p_c_list: &[usize],
    families: &[Family],
    model: Option<&LatencyModel>,
) -> Result<SweepResult> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    let (rows, inner, cols) = dims;
    let mut out = Vec::new();
    for &family in families {
        let p_cs: Vec<usize> = match family {
            Family::Gpd => vec![0],
            Family::Sgpd => p_c_list.to_vec(),
            Family::Psgpd => vec![1],
        };
        for p_c in p_cs {
            for s in 1..=m.min(n) {
                if m % s != 0 || n % s != 0 {
                    continue;
                }
                let (t, d) = (m / s, n / s);
                let (p_r, naive_p_r) = match family {
                    Family::Psgpd => {
                        let p_r = psgpd_threshold(t, s, d)?;
                        (p_r, p_r)
                    }
                    _ => {
                        let report = recovery_threshold(t, s, d, p_c)?;
                        (report.symbolic, report.naive)
                    }
                };
                let c_l = exact_div(
                    p_r as u128 * rows as u128 * cols as u128,
                    t as u128 * d as u128,
                    "communication load",
                )? as u64;
                let expected_time = match model {
                    Some(model) if p_r <= p => {
                        let work = (rows * inner * cols) as f64 / (t * s * d) as f64;
                        let symbols = (rows * cols) as f64 / (t * d) as f64;
                        Some(analytic_from_parts(model, work, symbols, p, p_r)?)
                    }
                    _ => None,
                };
                out.push(SweepRow {
                    family: if p_c == 0 && family != Family::Psgpd {
                        Family::Gpd
                    } else {
                        family
                    },
                    point: TradeoffPoint {
                        t,
                        s,
                        d,
                        p_c,
                        p_r,
                        c_l,
                        naive_p_r,
                    },
                    expected_time,
                });
            }
        }
    }
    Ok(SweepResult { rows: out })
}

fn exact_div(num: u128, den: u128, what: &str) -> Result<u128> {
    if num % den != 0 {
        return Err(Error::InvalidParameter(format!(
            "{what} {num}/{den} is not an integer; choose dividing dimensions"
        )));
    }
    Ok(num / den)
}

/// A sweep row evaluated at one download rate.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CurvePoint {
    pub r_comm: f64,
    pub row: SweepRow,
}

/// Analytic completion time of chosen splits across a download-rate grid.
/// CSV header: `rcomm,family,t,s,d,P_C,P_R,C_L,E_T`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LatencyCurve {
    pub points: Vec<CurvePoint>,
}

impl LatencyCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rcomm,family,t,s,d,P_C,P_R,C_L,E_T\n");
        for pt in &self.points {
            let p = &pt.row.point;
            let e_t = pt
                .row
                .expected_time
                .map_or(String::new(), |v| v.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                pt.r_comm, pt.row.family, p.t, p.s, p.d, p.p_c, p.p_r, p.c_l, e_t
            ));
        }
        out
    }
}

/// Evaluates the analytic completion time for each split over the rate grid.
pub fn latency_curve(
    model: &LatencyModel,
    dims: (usize, usize, usize),
    p: usize,
    p_c: usize,
    family: Family,
    splits: &[(usize, usize, usize)],
    r_comm_grid: &[f64],
) -> Result<LatencyCurve> {
    let (rows, inner, cols) = dims;
    let mut points = Vec::new();
    for &r in r_comm_grid {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(
                "download rates must be positive".into(),
            ));
        }
        let at_rate = model.with_r_comm(r);
        for &(t, s, d) in splits {
            // The private family pins the protection level to one worker.
            let (p_r, row_p_c) = match family {
                Family::Psgpd => (psgpd_threshold(t, s, d)?, 1),
                _ => (recovery_threshold(t, s, d, p_c)?.symbolic, p_c),
            };
            let c_l = exact_div(
                p_r as u128 * rows as u128 * cols as u128,
                t as u128 * d as u128,
                "communication load",
            )? as u64;
            let work = (rows * inner * cols) as f64 / (t * s * d) as f64;
            let symbols = (rows * cols) as f64 / (t * d) as f64;
            let expected_time = analytic_from_parts(&at_rate, work, symbols, p, p_r)?;
            points.push(CurvePoint {
                r_comm: r,
                row: SweepRow {
                    family,
                    point: TradeoffPoint {
                        t,
                        s,
                        d,
                        p_c: row_p_c,
                        p_r,
                        c_l,
                        naive_p_r: naive_threshold(t, s, d, row_p_c),
                    },
                    expected_time: Some(expected_time),
                },
            });
        }
    }
    Ok(LatencyCurve { points })
}
