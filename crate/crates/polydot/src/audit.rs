//! Brute-force empirical verification of the secrecy, privacy and
//! decodability guarantees on tiny fields.
//!
//! For uniform keys, zero information leakage is equivalent to the observed
//! share distribution being identical across inputs, and that is decidable
//! by exhaustive counting. The audits therefore enumerate the entire key
//! space and compare exact distribution tables; no statistical tolerance is
//! involved. Sabotage policies deliberately break the construction so tests
//! can confirm the audits catch real leaks.

use std::collections::HashMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{EvalPointSet, PrimeField};
use crate::gpd::{
    decode_product, encode_shares, encode_shares_with_keys, worker_multiply, SecureCodePlan,
};
use crate::matrix::FieldMatrix;
use crate::partition::{KeyMaterial, PartitionSpec};
use crate::psgpd::{
    encode_a_masked_with, psgpd_decode, psgpd_worker, worker_encode_library, PsgpdCode,
    PublicLibrary, QueryVector,
};

/// Largest modulus the exhaustive audits accept.
pub const MAX_AUDIT_MODULUS: u64 = 11;

/// Default enumeration budget.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Parameters of an exhaustive audit.
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub field: PrimeField,
    pub spec: PartitionSpec,
    pub p_c: usize,
    /// 0-based ids of the colluding workers whose joint view is tabulated.
    pub colluders: Vec<usize>,
    pub budget: u64,
}

impl AuditConfig {
    pub fn new(
        field: PrimeField,
        spec: PartitionSpec,
        p_c: usize,
        colluders: Vec<usize>,
        budget: u64,
    ) -> Result<Self> {
        if field.modulus() > MAX_AUDIT_MODULUS {
            return Err(Error::InvalidParameter(format!(
                "exhaustive audits need a tiny field (p <= {MAX_AUDIT_MODULUS}), got {}",
                field.modulus()
            )));
        }
        if colluders.len() > p_c {
            return Err(Error::InvalidParameter(format!(
                "{} colluders exceed the protection level p_c = {p_c}",
                colluders.len()
            )));
        }
        Ok(Self {
            field,
            spec,
            p_c,
            colluders,
            budget,
        })
    }
}

/// Outcome of one audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

/// Key handling during a secrecy audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyPolicy {
    /// Enumerate the full key space (the real construction).
    Enumerate,
    /// Force every key block to zero; a correct audit must then FAIL.
    SabotageZero,
}

/// Query handling during a privacy audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryPolicy {
    /// Target and decoy entries all uniform nonzero (the real construction).
    Standard,
    /// Pin the target entry to a public constant; the audit must then FAIL.
    SabotageFixedTarget,
}

/// Exact distribution of observed view tuples over the enumerated space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DistributionTable {
    counts: HashMap<Vec<u64>, u64>,
}

impl DistributionTable {
    pub fn record(&mut self, view: Vec<u64>) {
        *self.counts.entry(view).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: DistributionTable) {
        for (view, count) in other.counts {
            *self.counts.entry(view).or_insert(0) += count;
        }
    }

    /// Total observations; must equal the enumerated space size.
    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    /// Order-independent content hash.
    pub fn digest(&self) -> String {
        let mut entries: Vec<(&Vec<u64>, &u64)> = self.counts.iter().collect();
        entries.sort();
        let mut hasher = Sha256::new();
        for (view, count) in entries {
            for v in view {
                hasher.update(v.to_le_bytes());
            }
            hasher.update([0xff]);
            hasher.update(count.to_le_bytes());
        }
        format!("{:x}", hasher.finalize())
    }
}

/// Machine-readable audit outcome.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub audit: String,
    pub config: serde_json::Value,
    pub verdict: Verdict,
    pub table_hashes: Vec<String>,
    pub detail: String,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("audit report serializes")
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Decodes `index` into mixed-radix digits (little-endian).
fn decode_index(mut index: u128, radices: &[u64], digits: &mut [u64]) {
    for (slot, &radix) in digits.iter_mut().zip(radices) {
        *slot = (index % radix as u128) as u64;
        index /= radix as u128;
    }
}

/// Enumerates the whole space, partitioned across threads, and tabulates the
/// view of every assignment. Merging is associative, so the result does not
/// depend on the partitioning.
fn enumerate_table<F>(radices: &[u64], view_of: F) -> DistributionTable
where
    F: Fn(&[u64]) -> Vec<u64> + Sync,
{
    let total: u128 = radices.iter().map(|&r| r as u128).product();
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8)
        .max(1) as u128;
    let chunk = total.div_ceil(threads);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for worker in 0..threads {
            let lo = worker * chunk;
            let hi = ((worker + 1) * chunk).min(total);
            if lo >= hi {
                break;
            }
            let view_of = &view_of;
            handles.push(scope.spawn(move || {
                let mut local = DistributionTable::default();
                let mut digits = vec![0u64; radices.len()];
                for index in lo..hi {
                    decode_index(index, radices, &mut digits);
                    local.record(view_of(&digits));
                }
                local
            }));
        }
        let mut table = DistributionTable::default();
        for handle in handles {
            table.merge(handle.join().expect("audit worker panicked"));
        }
        // Exhaustiveness: every assignment recorded exactly once.
        assert_eq!(table.total(), total);
        table
    })
}

fn check_budget(total: u128, budget: u64) -> Result<()> {
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    Ok(())
}

/// Joint view of the colluding workers for one key assignment.
fn colluder_view(
    a: &FieldMatrix,
    b: &FieldMatrix,
    code: &SecureCodePlan,
    keys: &KeyMaterial,
    colluders: &[usize],
) -> Vec<u64> {
    let shares = encode_shares_with_keys(a, b, code, keys).expect("audit encoding");
    let mut view = Vec::new();
    for &p in colluders {
        view.extend_from_slice(shares[p].a_part.entries());
        view.extend_from_slice(shares[p].b_part.entries());
    }
    view
}

/// Verifies that the colluders' joint share distribution is identical for
/// two independent input pairs under exhaustive key enumeration, which for
/// uniform keys is equivalent to perfect secrecy of the inputs.
pub fn secrecy_audit(
    config: &AuditConfig,
    inputs_one: (&FieldMatrix, &FieldMatrix),
    inputs_two: (&FieldMatrix, &FieldMatrix),
    policy: KeyPolicy,
) -> Result<AuditReport> {
    let workers = config.colluders.iter().max().map_or(1, |&m| m + 1);
    let points = EvalPointSet::new(&config.field, (1..=workers as u64).collect())?;
    let code = SecureCodePlan::with_points(config.field, config.spec, config.p_c, points)?;

    let table_for = |a: &FieldMatrix, b: &FieldMatrix| -> Result<DistributionTable> {
        match policy {
            KeyPolicy::Enumerate => {
                let free = KeyMaterial::free_scalars(&config.spec, &code.plan);
                let radices = vec![config.field.modulus(); free as usize];
                check_budget(radices.iter().map(|&r| r as u128).product(), config.budget)?;
                Ok(enumerate_table(&radices, |digits| {
                    let keys = KeyMaterial::from_free_values(
                        config.field,
                        &config.spec,
                        &code.plan,
                        digits,
                    )
                    .expect("audit keys");
                    colluder_view(a, b, &code, &keys, &config.colluders)
                }))
            }
            KeyPolicy::SabotageZero => {
                let keys = KeyMaterial::zeroed(config.field, &config.spec, &code.plan)?;
                let mut table = DistributionTable::default();
                table.record(colluder_view(a, b, &code, &keys, &config.colluders));
                Ok(table)
            }
        }
    };

    let one = table_for(inputs_one.0, inputs_one.1)?;
    let two = table_for(inputs_two.0, inputs_two.1)?;
    let verdict = if one == two {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(AuditReport {
        audit: "secrecy".into(),
        config: serde_json::json!({
            "p": config.field.modulus(),
            "t": config.spec.t, "s": config.spec.s, "d": config.spec.d,
            "p_c": config.p_c,
            "colluders": config.colluders,
            "sabotage": policy == KeyPolicy::SabotageZero,
        }),
        verdict,
        table_hashes: vec![one.digest(), two.digest()],
        detail: format!(
            "{} observations per table, {} / {} distinct views",
            one.total(),
            one.support_size(),
            two.support_size()
        ),
    })
}

/// Sampling fallback for parameter points beyond exhaustive reach: draws
/// `samples` random key assignments per input pair, buckets the observed
/// views by a stable hash, and compares the two bucket histograms with a
/// two-sample chi-square test at the 1% significance level. The verdict is
/// statistical evidence, not a proof; the exhaustive audit remains the
/// authority wherever it fits in the budget.
pub fn secrecy_audit_sampled(
    config: &AuditConfig,
    inputs_one: (&FieldMatrix, &FieldMatrix),
    inputs_two: (&FieldMatrix, &FieldMatrix),
    policy: KeyPolicy,
    samples: u64,
    seed: u64,
) -> Result<AuditReport> {
    if samples < 100 {
        return Err(Error::InvalidParameter("need at least 100 samples".into()));
    }
    let workers = config.colluders.iter().max().map_or(1, |&m| m + 1);
    let points = EvalPointSet::new(&config.field, (1..=workers as u64).collect())?;
    let code = SecureCodePlan::with_points(config.field, config.spec, config.p_c, points)?;

    const BUCKETS: usize = 64;
    let histogram_for = |a: &FieldMatrix, b: &FieldMatrix, stream: u64| -> Result<Vec<u64>> {
        let mut rng = crate::field::seeded_rng(seed, 20 + stream);
        let mut histogram = vec![0u64; BUCKETS];
        for _ in 0..samples {
            let keys = match policy {
                KeyPolicy::Enumerate => {
                    KeyMaterial::sample(config.field, &config.spec, &code.plan, &mut rng)?
                }
                KeyPolicy::SabotageZero => {
                    KeyMaterial::zeroed(config.field, &config.spec, &code.plan)?
                }
            };
            let view = colluder_view(a, b, &code, &keys, &config.colluders);
            let mut hasher = Sha256::new();
            for v in &view {
                hasher.update(v.to_le_bytes());
            }
            let digest = hasher.finalize();
            histogram[digest[0] as usize % BUCKETS] += 1;
        }
        Ok(histogram)
    };

    let one = histogram_for(inputs_one.0, inputs_one.1, 0)?;
    let two = histogram_for(inputs_two.0, inputs_two.1, 1)?;

    // Two-sample chi-square with equal sample sizes.
    let mut statistic = 0.0f64;
    let mut occupied = 0usize;
    for (&n1, &n2) in one.iter().zip(&two) {
        if n1 + n2 == 0 {
            continue;
        }
        occupied += 1;
        let diff = n1 as f64 - n2 as f64;
        statistic += diff * diff / (n1 + n2) as f64;
    }
    let df = occupied.saturating_sub(1).max(1);
    let critical = chi_square_critical_99(df);
    let verdict = if statistic <= critical { Verdict::Pass } else { Verdict::Fail };
    Ok(AuditReport {
        audit: "secrecy-sampled".into(),
        config: serde_json::json!({
            "p": config.field.modulus(),
            "t": config.spec.t, "s": config.spec.s, "d": config.spec.d,
            "p_c": config.p_c,
            "colluders": config.colluders,
            "samples": samples,
            "sabotage": policy == KeyPolicy::SabotageZero,
        }),
        verdict,
        table_hashes: vec![],
        detail: format!(
            "statistical evidence, not proof: chi-square {statistic:.2} vs critical {critical:.2} \
             ({df} degrees of freedom, 1% significance)"
        ),
    })
}

/// Upper 99% quantile of the chi-square distribution via the
/// Wilson-Hilferty cube approximation.
fn chi_square_critical_99(df: usize) -> f64 {
    let df = df as f64;
    let z = 2.326_347_874_040_841; // standard normal 99% quantile
    let u = 1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt();
    df * u * u * u
}

/// Single-worker secrecy of the private pipeline: the masked left-input
/// share, jointly with its evaluation point, must be distributed identically
/// for two different inputs.
pub fn psgpd_secrecy_audit(
    field: PrimeField,
    spec: PartitionSpec,
    a_one: &FieldMatrix,
    a_two: &FieldMatrix,
    budget: u64,
    policy: KeyPolicy,
) -> Result<AuditReport> {
    if field.modulus() > MAX_AUDIT_MODULUS {
        return Err(Error::InvalidParameter(format!(
            "exhaustive audits need a tiny field (p <= {MAX_AUDIT_MODULUS})"
        )));
    }
    let code = PsgpdCode::new(field, spec, 1, 1)?;
    let mask_len = spec.block_rows() * spec.block_inner();
    let p = field.modulus();

    let table_for = |a: &FieldMatrix| -> Result<DistributionTable> {
        let radices: Vec<u64> = match policy {
            // Evaluation point (nonzero) plus every mask scalar.
            KeyPolicy::Enumerate => std::iter::once(p - 1)
                .chain(std::iter::repeat(p).take(mask_len))
                .collect(),
            KeyPolicy::SabotageZero => vec![p - 1],
        };
        check_budget(radices.iter().map(|&r| r as u128).product(), budget)?;
        Ok(enumerate_table(&radices, |digits| {
            let z = digits[0] + 1;
            let mask = match policy {
                KeyPolicy::Enumerate => FieldMatrix::new(
                    field,
                    spec.block_rows(),
                    spec.block_inner(),
                    digits[1..].to_vec(),
                )
                .expect("mask digits"),
                KeyPolicy::SabotageZero => {
                    FieldMatrix::zero(field, spec.block_rows(), spec.block_inner())
                }
            };
            let queries = vec![QueryVector {
                worker_id: 0,
                entries: vec![z],
            }];
            let enc = encode_a_masked_with(a, &code, &queries, 1, &mask).expect("audit encoding");
            let mut view = vec![z];
            view.extend_from_slice(enc[0].matrix.entries());
            view
        }))
    };

    let one = table_for(a_one)?;
    let two = table_for(a_two)?;
    let verdict = if one == two {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(AuditReport {
        audit: "secrecy-private".into(),
        config: serde_json::json!({
            "p": field.modulus(),
            "t": spec.t, "s": spec.s, "d": spec.d,
            "sabotage": policy == KeyPolicy::SabotageZero,
        }),
        verdict,
        table_hashes: vec![one.digest(), two.digest()],
        detail: format!("{} observations per table", one.total()),
    })
}

/// Verifies that a single worker's view `(query, masked share)` has exactly
/// the same distribution whichever library entry is the target. The rest of
/// the worker's view (its library encoding and its product) is a
/// deterministic function of the query and the public library, so equality
/// of these tables decides the full joint distribution.
pub fn privacy_audit(
    field: PrimeField,
    spec: PartitionSpec,
    library_size: usize,
    kappa_one: usize,
    kappa_two: usize,
    a: &FieldMatrix,
    budget: u64,
    policy: QueryPolicy,
) -> Result<AuditReport> {
    if field.modulus() > MAX_AUDIT_MODULUS {
        return Err(Error::InvalidParameter(format!(
            "exhaustive audits need a tiny field (p <= {MAX_AUDIT_MODULUS})"
        )));
    }
    for kappa in [kappa_one, kappa_two] {
        if kappa == 0 || kappa > library_size {
            return Err(Error::InvalidParameter(format!(
                "target index {kappa} outside [1, {library_size}]"
            )));
        }
    }
    let code = PsgpdCode::new(field, spec, library_size, 1)?;
    let mask_len = spec.block_rows() * spec.block_inner();
    let p = field.modulus();

    // Digits: decoys (nonzero), then the target point unless pinned by the
    // sabotage policy, then the mask scalars.
    let enumerate_target = policy == QueryPolicy::Standard;
    let mut radices: Vec<u64> = vec![p - 1; library_size - 1];
    if enumerate_target {
        radices.push(p - 1);
    }
    radices.extend(std::iter::repeat(p).take(mask_len));
    check_budget(radices.iter().map(|&r| r as u128).product(), budget)?;

    let table_for = |kappa: usize| -> DistributionTable {
        enumerate_table(&radices, |digits| {
            let decoys = &digits[..library_size - 1];
            let target = if enumerate_target {
                digits[library_size - 1] + 1
            } else {
                1
            };
            let mask_digits = &digits[radices.len() - mask_len..];
            let mask = FieldMatrix::new(
                field,
                spec.block_rows(),
                spec.block_inner(),
                mask_digits.to_vec(),
            )
            .expect("mask digits");
            let mut entries = Vec::with_capacity(library_size);
            entries.extend(decoys[..kappa - 1].iter().map(|&v| v + 1));
            entries.push(target);
            entries.extend(decoys[kappa - 1..].iter().map(|&v| v + 1));
            let queries = vec![QueryVector {
                worker_id: 0,
                entries: entries.clone(),
            }];
            let enc =
                encode_a_masked_with(a, &code, &queries, kappa, &mask).expect("audit encoding");
            entries.extend_from_slice(enc[0].matrix.entries());
            entries
        })
    };

    let one = table_for(kappa_one);
    let two = table_for(kappa_two);
    let verdict = if one == two {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(AuditReport {
        audit: "privacy".into(),
        config: serde_json::json!({
            "p": field.modulus(),
            "t": spec.t, "s": spec.s, "d": spec.d,
            "library_size": library_size,
            "kappa": [kappa_one, kappa_two],
            "sabotage": policy == QueryPolicy::SabotageFixedTarget,
        }),
        verdict,
        table_hashes: vec![one.digest(), two.digest()],
        detail: format!("{} observations per table", one.total()),
    })
}

/// Checks the decoder at the threshold boundary: with `count` results it
/// must succeed exactly when `count` reaches the recovery threshold, and
/// must report the shortfall otherwise.
pub fn threshold_failure_check(
    code: &SecureCodePlan,
    a: &FieldMatrix,
    b: &FieldMatrix,
    count: usize,
    seed: u64,
) -> Result<AuditReport> {
    let threshold = code.recovery_threshold();
    if count + 1 != threshold && count != threshold {
        return Err(Error::InvalidParameter(format!(
            "count must be {} or {}, got {count}",
            threshold - 1,
            threshold
        )));
    }
    if code.workers() < count {
        return Err(Error::InvalidParameter(format!(
            "{count} results requested from {} workers",
            code.workers()
        )));
    }
    let shares = encode_shares(a, b, code, seed)?;
    let results: Vec<_> = shares[..count]
        .iter()
        .map(|s| worker_multiply(s))
        .collect::<Result<_>>()?;
    let outcome = decode_product(&results, code);
    let (verdict, detail) = judge_boundary(outcome, count, threshold, &a.mul(b)?);
    Ok(AuditReport {
        audit: "threshold".into(),
        config: serde_json::json!({
            "p": code.field.modulus(),
            "t": code.spec.t, "s": code.spec.s, "d": code.spec.d,
            "p_c": code.plan.p_c,
            "count": count,
            "threshold": threshold,
        }),
        verdict,
        table_hashes: vec![],
        detail,
    })
}

/// Threshold boundary check for the private pipeline.
pub fn psgpd_threshold_check(
    code: &PsgpdCode,
    a: &FieldMatrix,
    library: &PublicLibrary,
    kappa: usize,
    count: usize,
    seed: u64,
) -> Result<AuditReport> {
    let threshold = code.recovery_threshold();
    if count + 1 != threshold && count != threshold {
        return Err(Error::InvalidParameter(format!(
            "count must be {} or {}, got {count}",
            threshold - 1,
            threshold
        )));
    }
    let queries = crate::psgpd::build_queries(code.field, library.len(), kappa, count, seed)?;
    let (encodings, mask) = crate::psgpd::encode_a_masked(a, code, &queries, kappa, seed)?;
    let results: Vec<_> = encodings
        .iter()
        .zip(&queries)
        .map(|(enc, q)| {
            let b_enc = worker_encode_library(library, q, code)?;
            psgpd_worker(enc, &b_enc)
        })
        .collect::<Result<_>>()?;
    let outcome = psgpd_decode(&results, code, library, &queries, kappa, a, &mask);
    let (verdict, detail) =
        judge_boundary(outcome, count, threshold, &a.mul(library.matrix(kappa))?);
    Ok(AuditReport {
        audit: "threshold-private".into(),
        config: serde_json::json!({
            "p": code.field.modulus(),
            "t": code.spec.t, "s": code.spec.s, "d": code.spec.d,
            "library_size": library.len(),
            "kappa": kappa,
            "count": count,
            "threshold": threshold,
        }),
        verdict,
        table_hashes: vec![],
        detail,
    })
}

fn judge_boundary(
    outcome: Result<FieldMatrix>,
    count: usize,
    threshold: usize,
    expected: &FieldMatrix,
) -> (Verdict, String) {
    if count == threshold {
        match outcome {
            Ok(decoded) if &decoded == expected => (
                Verdict::Pass,
                format!("decoded correctly from {count} results"),
            ),
            Ok(_) => (Verdict::Fail, "decoded to the wrong product".into()),
            Err(e) => (
                Verdict::Fail,
                format!("decode failed at the threshold: {e}"),
            ),
        }
    } else {
        match outcome {
            Err(Error::InsufficientShares { needed, got }) => (
                Verdict::Pass,
                format!("decoder refused {got} results, demanding {needed}"),
            ),
            Err(e) => (Verdict::Fail, format!("wrong error below threshold: {e}")),
            Ok(_) => (Verdict::Fail, "decoded below the threshold".into()),
        }
    }
}
