//! End-to-end encoder, worker computation and decoder for the plain and
//! secure code families, plus the threshold and communication-load
//! calculators.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};
use crate::field::{sample_distinct_points, EvalPointSet, PrimeField};
use crate::maps::{sgpd_maps, EncoderMaps, Source};
use crate::matrix::FieldMatrix;
use crate::partition::{split_blocks, AugmentationPlan, BlockGrid, KeyMaterial, PartitionSpec};
use crate::polynomial::interpolate;

/// A fully specified code instance: field, split geometry, collusion level,
/// worker count and their evaluation points.
#[derive(Debug, Clone)]
pub struct SecureCodePlan {
    pub field: PrimeField,
    pub spec: PartitionSpec,
    pub plan: AugmentationPlan,
    pub maps: EncoderMaps,
    pub points: EvalPointSet,
}

impl SecureCodePlan {
    /// Builds a plan with `workers` points drawn under `seed`. Logs a warning
    /// when the pool of workers cannot meet the recovery threshold.
    pub fn new(
        field: PrimeField,
        spec: PartitionSpec,
        p_c: usize,
        workers: usize,
        seed: u64,
    ) -> Result<Self> {
        let points = sample_distinct_points(&field, workers, seed)?;
        Self::with_points(field, spec, p_c, points)
    }

    pub fn with_points(
        field: PrimeField,
        spec: PartitionSpec,
        p_c: usize,
        points: EvalPointSet,
    ) -> Result<Self> {
        let plan = AugmentationPlan::new(spec.t, spec.s, spec.d, p_c)?;
        let maps = sgpd_maps(&plan)?;
        let threshold = maps.product_degree + 1;
        if points.len() < threshold {
            log::warn!(
                "only {} workers for recovery threshold {threshold}; decoding will fail",
                points.len()
            );
        }
        Ok(Self {
            field,
            spec,
            plan,
            maps,
            points,
        })
    }

    pub fn workers(&self) -> usize {
        self.points.len()
    }

    /// Recovery threshold the decoder enforces (symbolic product degree + 1).
    pub fn recovery_threshold(&self) -> usize {
        self.maps.product_degree + 1
    }
}

/// The two encoded matrices sent to one worker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Share {
    pub worker_id: usize,
    pub point: u64,
    pub a_part: FieldMatrix,
    pub b_part: FieldMatrix,
}

/// A worker's product, optionally tagged with its simulated completion time.
#[derive(Debug, Clone)]
pub struct WorkerResult {
    pub worker_id: usize,
    pub point: u64,
    pub product: FieldMatrix,
    pub completion_time: Option<f64>,
}

/// Encodes both inputs for every worker, drawing fresh key material under
/// `seed`.
pub fn encode_shares(
    a: &FieldMatrix,
    b: &FieldMatrix,
    code: &SecureCodePlan,
    seed: u64,
) -> Result<Vec<Share>> {
    let mut rng = crate::field::seeded_rng(seed, 1);
    let keys = KeyMaterial::sample(code.field, &code.spec, &code.plan, &mut rng)?;
    encode_shares_with_keys(a, b, code, &keys)
}

/// Encoding with caller-supplied key material; the audits enumerate keys
/// through this entry point.
pub fn encode_shares_with_keys(
    a: &FieldMatrix,
    b: &FieldMatrix,
    code: &SecureCodePlan,
    keys: &KeyMaterial,
) -> Result<Vec<Share>> {
    let spec = &code.spec;
    if a.field() != code.field || b.field() != code.field {
        return Err(Error::FieldMismatch(
            a.field().modulus(),
            code.field.modulus(),
        ));
    }
    if a.rows() != spec.rows || a.cols() != spec.inner {
        return Err(Error::DimensionMismatch(format!(
            "left input {}x{}, expected {}x{}",
            a.rows(),
            a.cols(),
            spec.rows,
            spec.inner
        )));
    }
    if b.rows() != spec.inner || b.cols() != spec.cols {
        return Err(Error::DimensionMismatch(format!(
            "right input {}x{}, expected {}x{}",
            b.rows(),
            b.cols(),
            spec.inner,
            spec.cols
        )));
    }
    if (keys.r.rows(), keys.r.cols()) != code.plan.key_shape_a()
        || (keys.r_prime.rows(), keys.r_prime.cols()) != code.plan.key_shape_b()
    {
        return Err(Error::DimensionMismatch(
            "key material does not fit the augmentation plan".into(),
        ));
    }
    let a_grid = split_blocks(a, spec.t, spec.s)?;
    let b_grid = split_blocks(b, spec.s, spec.d)?;

    let mut shares = Vec::with_capacity(code.points.len());
    for (worker_id, &z) in code.points.as_slice().iter().enumerate() {
        let a_part = eval_map(code, &code.maps.a_map, &a_grid, &keys.r, z, true)?;
        let b_part = eval_map(code, &code.maps.b_map, &b_grid, &keys.r_prime, z, false)?;
        shares.push(Share {
            worker_id,
            point: z,
            a_part,
            b_part,
        });
    }
    Ok(shares)
}

fn eval_map(
    code: &SecureCodePlan,
    map: &crate::maps::ExponentMap,
    data: &BlockGrid,
    keys: &BlockGrid,
    z: u64,
    left: bool,
) -> Result<FieldMatrix> {
    let spec = &code.spec;
    let (rows, cols) = if left {
        (spec.block_rows(), spec.block_inner())
    } else {
        (spec.block_inner(), spec.block_cols())
    };
    let mut acc = FieldMatrix::zero(code.field, rows, cols);
    for term in &map.terms {
        let block = match term.source {
            Source::Data => data.at(term.row, term.col),
            Source::Random => keys.at(term.row, term.col),
            Source::Zero => continue,
        };
        acc.add_scaled(block, code.field.pow(z, term.exponent as u64))?;
    }
    Ok(acc)
}

/// The worker's entire job: multiply its two encoded matrices.
pub fn worker_multiply(share: &Share) -> Result<WorkerResult> {
    Ok(WorkerResult {
        worker_id: share.worker_id,
        point: share.point,
        product: share.a_part.mul(&share.b_part)?,
        completion_time: None,
    })
}

/// Cooperative variant used by the timed pipeline: the product is built one
/// block row at a time, abandoning the work once `cancel` is raised.
pub fn worker_multiply_cancellable(share: &Share, cancel: &AtomicBool) -> Option<WorkerResult> {
    let a = &share.a_part;
    let b = &share.b_part;
    let field = a.field();
    let mut product = FieldMatrix::zero(field, a.rows(), b.cols());
    for i in 0..a.rows() {
        if cancel.load(Ordering::Relaxed) {
            return None;
        }
        for j in 0..b.cols() {
            let mut acc = 0u64;
            for k in 0..a.cols() {
                acc = field.add(acc, field.mul(a.get(i, k), b.get(k, j)));
            }
            product.set(i, j, acc);
        }
    }
    Some(WorkerResult {
        worker_id: share.worker_id,
        point: share.point,
        product,
        completion_time: None,
    })
}

/// Deterministic result ordering: fastest first, worker id as tie-break.
/// Untimed results sort after timed ones.
pub fn order_results(results: &[WorkerResult]) -> Vec<&WorkerResult> {
    let mut ordered: Vec<&WorkerResult> = results.iter().collect();
    ordered.sort_by(|x, y| {
        let tx = x.completion_time.unwrap_or(f64::INFINITY);
        let ty = y.completion_time.unwrap_or(f64::INFINITY);
        tx.partial_cmp(&ty)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.worker_id.cmp(&y.worker_id))
    });
    ordered
}

/// Recovers the full product from at least `recovery_threshold` worker
/// results: interpolates the product polynomial and reads the output blocks
/// at their readout exponents.
pub fn decode_product(results: &[WorkerResult], code: &SecureCodePlan) -> Result<FieldMatrix> {
    let threshold = code.recovery_threshold();
    if results.len() < threshold {
        return Err(Error::InsufficientShares {
            needed: threshold,
            got: results.len(),
        });
    }
    let chosen = order_results(results);
    let picked: Vec<(u64, FieldMatrix)> = chosen[..threshold]
        .iter()
        .map(|r| (r.point, r.product.clone()))
        .collect();
    {
        let mut seen = std::collections::HashSet::with_capacity(threshold);
        for (z, _) in &picked {
            if !seen.insert(*z) {
                return Err(Error::DuplicatePoint(*z));
            }
        }
    }
    // TODO: solve a reduced system for only the readout coefficients once
    // large decodes matter; this interpolates the full product polynomial.
    let coeffs = interpolate(&picked, code.maps.product_degree)?;
    let spec = &code.spec;
    let mut out = FieldMatrix::zero(code.field, spec.rows, spec.cols);
    let (br, bc) = (spec.block_rows(), spec.block_cols());
    for i in 0..spec.t {
        for l in 0..spec.d {
            let block = &coeffs[code.maps.readout.position(i, l)];
            out.place(i * br, l * bc, block)?;
        }
    }
    Ok(out)
}

/// The three threshold views of one parameter point: the symbolic product
/// degree plus one (what the decoder enforces), the closed-form value, and
/// the threshold of the unoptimized construction on augmented inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdReport {
    pub symbolic: usize,
    pub closed_form: usize,
    pub naive: usize,
}

/// Computes all three threshold views for `(t, s, d, p_c)`. Disagreement
/// between the symbolic and closed-form values is reported, not hidden.
pub fn recovery_threshold(t: usize, s: usize, d: usize, p_c: usize) -> Result<ThresholdReport> {
    let plan = AugmentationPlan::new(t, s, d, p_c)?;
    let maps = sgpd_maps(&plan)?;
    let symbolic = maps.product_degree + 1;
    let closed_form = closed_form_threshold(&plan);
    let naive = naive_threshold(t, s, d, p_c);
    if symbolic != closed_form {
        log::warn!(
            "threshold mismatch at (t,s,d,p_c)=({t},{s},{d},{p_c}): symbolic {symbolic}, closed form {closed_form}; decoder uses symbolic"
        );
    }
    Ok(ThresholdReport {
        symbolic,
        closed_form,
        naive,
    })
}

/// Closed-form recovery threshold per regime.
pub fn closed_form_threshold(plan: &AugmentationPlan) -> usize {
    let (t, s, d, p_c) = (plan.t, plan.s, plan.d, plan.p_c);
    if p_c == 0 {
        return t * s * d + s - 1;
    }
    match plan.regime {
        crate::partition::Regime::SLessT => {
            let t_star = plan.t_star;
            if plan.delta * s == p_c {
                t_star * s * (d + 1) + s * plan.delta - 1
            } else {
                t_star * s * (d + 1) - s * plan.delta + 2 * p_c - 1
            }
        }
        crate::partition::Regime::SGeqT => t * (plan.s_star * d - plan.delta) + t * s + 2 * p_c - 1,
    }
}

/// Threshold of the baseline construction: augment both inputs and run the
/// plain code unchanged, zero tail included.
pub fn naive_threshold(t: usize, s: usize, d: usize, p_c: usize) -> usize {
    if p_c == 0 {
        return t * s * d + s - 1;
    }
    let delta = p_c.div_ceil(s);
    let (t_star, d_star) = (t + delta, d + delta);
    t_star * s * d_star + s - 1 - 2 * (s * delta - p_c)
}

/// Total symbols downloaded from the fastest `p_r` workers.
pub fn communication_load(p_r: usize, spec: &PartitionSpec) -> u64 {
    (p_r as u128 * spec.result_symbols()) as u64
}

/// Which cost is being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Worker,
    MasterEncode,
    MasterDecode,
}

/// Multiplication-count estimates per role. The decode estimate uses the
/// usual interpolation cost model and is a real-valued approximation.
pub fn complexity_estimate(
    spec: &PartitionSpec,
    p_c: usize,
    workers: usize,
    p_r: usize,
    role: Role,
) -> f64 {
    let (big_t, big_s, big_d) = (spec.rows as f64, spec.inner as f64, spec.cols as f64);
    let (t, s, d) = (spec.t as f64, spec.s as f64, spec.d as f64);
    match role {
        Role::Worker => big_t * big_s * big_d / (t * s * d),
        Role::MasterEncode => {
            let mask = p_c as f64 * (big_t * big_s / (t * s) + big_s * big_d / (s * d));
            workers as f64 * (mask + big_t * big_s + big_s * big_d)
        }
        Role::MasterDecode => {
            if p_r <= 1 {
                return 0.0;
            }
            let n = (p_r - 1) as f64;
            n * n.ln().powi(2) * big_t * big_d / (t * d)
        }
    }
}

/// One row of the threshold/load trade-off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct TradeoffPoint {
    pub t: usize,
    pub s: usize,
    pub d: usize,
    pub p_c: usize,
    pub p_r: usize,
    pub c_l: u64,
    pub naive_p_r: usize,
}
