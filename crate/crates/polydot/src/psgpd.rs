//! Private-and-secure pipeline: the left input is masked with a single
//! random block, the right input is chosen from a public library through
//! per-worker query vectors that hide which library entry is wanted.
//!
//! Collusion level is fixed at one curious worker. Every query entry is a
//! uniform nonzero field point; the decoy entries are shared by all workers
//! while the target entry is pairwise distinct, so a single worker's view
//! carries no information about the target index.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::gpd::WorkerResult;
use crate::maps::{psgpd_maps, EncoderMaps, Source};
use crate::matrix::FieldMatrix;
use crate::partition::{split_blocks, BlockGrid, PartitionSpec};
use crate::polynomial::interpolate;

/// A code instance for the private pipeline.
#[derive(Debug, Clone)]
pub struct PsgpdCode {
    pub field: PrimeField,
    pub spec: PartitionSpec,
    pub maps: EncoderMaps,
    pub library_size: usize,
}

impl PsgpdCode {
    /// `p_c` is accepted for symmetry with the secure pipeline but must be 1;
    /// larger collusion sets are not supported by this construction.
    pub fn new(
        field: PrimeField,
        spec: PartitionSpec,
        library_size: usize,
        p_c: usize,
    ) -> Result<Self> {
        if p_c != 1 {
            return Err(Error::Unsupported(format!(
                "the private pipeline handles exactly one curious worker, got p_c = {p_c}"
            )));
        }
        if library_size == 0 {
            return Err(Error::InvalidParameter(
                "library must hold at least one matrix".into(),
            ));
        }
        let maps = psgpd_maps(spec.t, spec.s, spec.d)?;
        Ok(Self {
            field,
            spec,
            maps,
            library_size,
        })
    }

    /// Recovery threshold enforced by the decoder.
    pub fn recovery_threshold(&self) -> usize {
        self.maps.product_degree + 1
    }
}

/// The public set of candidate right-hand matrices, known to every worker.
#[derive(Debug, Clone)]
pub struct PublicLibrary {
    matrices: Vec<FieldMatrix>,
}

impl PublicLibrary {
    pub fn new(matrices: Vec<FieldMatrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty library".into()))?;
        for m in &matrices {
            if m.rows() != first.rows() || m.cols() != first.cols() || m.field() != first.field() {
                return Err(Error::DimensionMismatch(
                    "library matrices must share shape".into(),
                ));
            }
        }
        Ok(Self { matrices })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// 1-based library access, matching query-vector indexing.
    pub fn matrix(&self, r: usize) -> &FieldMatrix {
        &self.matrices[r - 1]
    }
}

/// A length-L vector of field points: uniform decoys everywhere except a
/// per-worker distinct point at the (hidden) target index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryVector {
    pub worker_id: usize,
    pub entries: Vec<u64>,
}

/// Builds the queries for all `workers`. `kappa` is the 1-based target
/// index. Deterministic under `seed`.
pub fn build_queries(
    field: PrimeField,
    library_size: usize,
    kappa: usize,
    workers: usize,
    seed: u64,
) -> Result<Vec<QueryVector>> {
    if kappa == 0 || kappa > library_size {
        return Err(Error::InvalidParameter(format!(
            "target index {kappa} outside [1, {library_size}]"
        )));
    }
    if workers as u64 >= field.modulus() {
        return Err(Error::InvalidParameter(format!(
            "{workers} workers need distinct nonzero points in F_{}",
            field.modulus()
        )));
    }
    let mut rng = crate::field::seeded_rng(seed, 2);
    let decoys: Vec<u64> = (0..library_size - 1)
        .map(|_| field.sample_nonzero(&mut rng))
        .collect();
    let targets =
        crate::field::sample_distinct_points(&field, workers, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    Ok((0..workers)
        .map(|worker_id| {
            let mut entries = Vec::with_capacity(library_size);
            entries.extend_from_slice(&decoys[..kappa - 1]);
            entries.push(targets.point(worker_id));
            entries.extend_from_slice(&decoys[kappa - 1..]);
            QueryVector { worker_id, entries }
        })
        .collect())
}

/// The masked encoding of the left input for one worker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedEncoding {
    pub worker_id: usize,
    pub matrix: FieldMatrix,
}

/// Encodes the left input at each worker's target point, masked by a fresh
/// uniform random block. Returns the encodings and the mask so the master
/// can remove the library interference during decoding.
pub fn encode_a_masked(
    a: &FieldMatrix,
    code: &PsgpdCode,
    queries: &[QueryVector],
    kappa: usize,
    seed: u64,
) -> Result<(Vec<MaskedEncoding>, FieldMatrix)> {
    let mut rng = crate::field::seeded_rng(seed, 3);
    let mask = FieldMatrix::random(
        code.field,
        code.spec.block_rows(),
        code.spec.block_inner(),
        &mut rng,
    );
    let encodings = encode_a_masked_with(a, code, queries, kappa, &mask)?;
    Ok((encodings, mask))
}

/// Masked encoding with a caller-supplied mask block. Passing a zero mask
/// removes the protection; the audits use that as a sabotage hook.
pub fn encode_a_masked_with(
    a: &FieldMatrix,
    code: &PsgpdCode,
    queries: &[QueryVector],
    kappa: usize,
    mask: &FieldMatrix,
) -> Result<Vec<MaskedEncoding>> {
    if kappa == 0 || kappa > code.library_size {
        return Err(Error::InvalidParameter(format!(
            "target index {kappa} outside [1, {}]",
            code.library_size
        )));
    }
    let spec = &code.spec;
    if a.rows() != spec.rows || a.cols() != spec.inner {
        return Err(Error::DimensionMismatch(format!(
            "left input {}x{}, expected {}x{}",
            a.rows(),
            a.cols(),
            spec.rows,
            spec.inner
        )));
    }
    if mask.rows() != spec.block_rows() || mask.cols() != spec.block_inner() {
        return Err(Error::DimensionMismatch(
            "mask must match the block shape".into(),
        ));
    }
    let grid = split_blocks(a, spec.t, spec.s)?;
    queries
        .iter()
        .map(|q| {
            let z = *q.entries.get(kappa - 1).ok_or_else(|| {
                Error::InvalidParameter(format!("query shorter than target index {kappa}"))
            })?;
            Ok(MaskedEncoding {
                worker_id: q.worker_id,
                matrix: eval_masked(code, &grid, mask, z)?,
            })
        })
        .collect()
}

fn eval_masked(
    code: &PsgpdCode,
    grid: &BlockGrid,
    mask: &FieldMatrix,
    z: u64,
) -> Result<FieldMatrix> {
    let mut acc = FieldMatrix::zero(code.field, code.spec.block_rows(), code.spec.block_inner());
    for term in &code.maps.a_map.terms {
        let block = match term.source {
            Source::Data => grid.at(term.row, term.col),
            Source::Random => mask,
            Source::Zero => continue,
        };
        acc.add_scaled(block, code.field.pow(z, term.exponent as u64))?;
    }
    Ok(acc)
}

/// Worker-side library encoding: evaluates every library matrix's polynomial
/// at the corresponding query entry and sums. The worker never learns which
/// entry mattered.
pub fn worker_encode_library(
    library: &PublicLibrary,
    query: &QueryVector,
    code: &PsgpdCode,
) -> Result<FieldMatrix> {
    if query.entries.len() != library.len() {
        return Err(Error::InvalidParameter(format!(
            "query length {} vs library size {}",
            query.entries.len(),
            library.len()
        )));
    }
    let spec = &code.spec;
    let mut acc = FieldMatrix::zero(code.field, spec.block_inner(), spec.block_cols());
    for (r, &z) in query.entries.iter().enumerate() {
        let grid = split_blocks(library.matrix(r + 1), spec.s, spec.d)?;
        for term in code.maps.b_map.data_terms() {
            acc.add_scaled(
                grid.at(term.row, term.col),
                code.field.pow(z, term.exponent as u64),
            )?;
        }
    }
    Ok(acc)
}

/// The worker's multiplication step.
pub fn psgpd_worker(a_enc: &MaskedEncoding, b_enc: &FieldMatrix) -> Result<WorkerResult> {
    Ok(WorkerResult {
        worker_id: a_enc.worker_id,
        // The worker cannot know which query entry was its evaluation point;
        // the master recovers it from the queries during decoding.
        point: 0,
        product: a_enc.matrix.mul(b_enc)?,
        completion_time: None,
    })
}

/// Decodes `A * B_kappa` from at least `recovery_threshold` worker products.
/// The master knows the left input and the mask, so it first strips the
/// worker-independent library interference from each result, then
/// interpolates and reads out the product blocks.
pub fn psgpd_decode(
    results: &[WorkerResult],
    code: &PsgpdCode,
    library: &PublicLibrary,
    queries: &[QueryVector],
    kappa: usize,
    a: &FieldMatrix,
    mask: &FieldMatrix,
) -> Result<FieldMatrix> {
    let threshold = code.recovery_threshold();
    if results.len() < threshold {
        return Err(Error::InsufficientShares {
            needed: threshold,
            got: results.len(),
        });
    }
    validate_queries(queries, library.len(), kappa)?;

    // Worker-independent interference: the decoy polynomials evaluated at
    // their shared points.
    let spec = &code.spec;
    let mut interference = FieldMatrix::zero(code.field, spec.block_inner(), spec.block_cols());
    let reference = &queries[0];
    for (r, &z) in reference.entries.iter().enumerate() {
        if r + 1 == kappa {
            continue;
        }
        let grid = split_blocks(library.matrix(r + 1), spec.s, spec.d)?;
        for term in code.maps.b_map.data_terms() {
            interference.add_scaled(
                grid.at(term.row, term.col),
                code.field.pow(z, term.exponent as u64),
            )?;
        }
    }

    let a_grid = split_blocks(a, spec.t, spec.s)?;
    let ordered = crate::gpd::order_results(results);
    let mut picked = Vec::with_capacity(threshold);
    let mut seen = std::collections::HashSet::with_capacity(threshold);
    for result in &ordered[..threshold] {
        let query = queries.get(result.worker_id).ok_or_else(|| {
            Error::InvalidParameter(format!("no query for worker {}", result.worker_id))
        })?;
        let z = query.entries[kappa - 1];
        if !seen.insert(z) {
            return Err(Error::DuplicatePoint(z));
        }
        let correction = eval_masked(code, &a_grid, mask, z)?.mul(&interference)?;
        picked.push((z, result.product.sub(&correction)?));
    }

    let mut coeffs = interpolate(&picked, code.maps.product_degree)?;

    // The interpolated polynomial still carries the mask-times-target cross
    // terms; the master knows both factors, so it strips them exactly. For
    // some split shapes these products overlap readout positions.
    let target_grid = split_blocks(library.matrix(kappa), spec.s, spec.d)?;
    for mask_term in code
        .maps
        .a_map
        .terms
        .iter()
        .filter(|x| x.source == Source::Random)
    {
        for data_term in code.maps.b_map.data_terms() {
            let cross = mask.mul(target_grid.at(data_term.row, data_term.col))?;
            let exp = mask_term.exponent + data_term.exponent;
            coeffs[exp] = coeffs[exp].sub(&cross)?;
        }
    }

    let (br, bc) = (spec.block_rows(), spec.block_cols());
    let mut out = FieldMatrix::zero(code.field, spec.rows, spec.cols);
    for i in 0..spec.t {
        for l in 0..spec.d {
            out.place(i * br, l * bc, &coeffs[code.maps.readout.position(i, l)])?;
        }
    }
    Ok(out)
}

fn validate_queries(queries: &[QueryVector], library_size: usize, kappa: usize) -> Result<()> {
    if kappa == 0 || kappa > library_size {
        return Err(Error::InvalidParameter(format!(
            "target index {kappa} outside [1, {library_size}]"
        )));
    }
    let first = queries
        .first()
        .ok_or_else(|| Error::InvalidParameter("no queries".into()))?;
    if first.entries.len() != library_size {
        return Err(Error::InvalidParameter(
            "query length differs from library size".into(),
        ));
    }
    for q in queries {
        if q.entries.len() != library_size {
            return Err(Error::InvalidParameter("ragged query vectors".into()));
        }
        for (r, (&a, &b)) in q.entries.iter().zip(&first.entries).enumerate() {
            if r + 1 != kappa && a != b {
                return Err(Error::InvalidParameter(format!(
                    "decoy entry {} differs between workers",
                    r + 1
                )));
            }
        }
    }
    Ok(())
}

/// Recovery threshold for the private pipeline, derived from the symbolic
/// product degree and cross-checked against the closed form
/// `s(t+1)d` (when `s < t`) or `ts(d+1) - t + 1` (when `s >= t`).
pub fn psgpd_threshold(t: usize, s: usize, d: usize) -> Result<usize> {
    let maps = psgpd_maps(t, s, d)?;
    let symbolic = maps.product_degree + 1;
    let closed = psgpd_closed_form_threshold(t, s, d);
    if symbolic != closed {
        log::warn!(
            "private threshold mismatch at (t,s,d)=({t},{s},{d}): symbolic {symbolic}, closed form {closed}; using symbolic"
        );
    }
    Ok(symbolic)
}

/// The closed-form threshold of the private pipeline.
pub fn psgpd_closed_form_threshold(t: usize, s: usize, d: usize) -> usize {
    if s < t {
        s * (t + 1) * d
    } else {
        t * s * (d + 1) - t + 1
    }
}

/// Runs the whole pipeline for one (library, target) choice; used by demos
/// and tests.
pub fn psgpd_roundtrip(
    a: &FieldMatrix,
    library: &PublicLibrary,
    code: &PsgpdCode,
    kappa: usize,
    workers: usize,
    seed: u64,
) -> Result<FieldMatrix> {
    let queries = build_queries(code.field, library.len(), kappa, workers, seed)?;
    let (encodings, mask) = encode_a_masked(a, code, &queries, kappa, seed)?;
    let results: Vec<WorkerResult> = encodings
        .iter()
        .zip(&queries)
        .map(|(enc, q)| {
            let b_enc = worker_encode_library(library, q, code)?;
            psgpd_worker(enc, &b_enc)
        })
        .collect::<Result<_>>()?;
    psgpd_decode(&results, code, library, &queries, kappa, a, &mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::seeded_rng;

    fn code(
        p: u64,
        dims: (usize, usize, usize),
        splits: (usize, usize, usize),
        l: usize,
    ) -> PsgpdCode {
        let field = PrimeField::new(p).unwrap();
        let spec =
            PartitionSpec::new(dims.0, dims.1, dims.2, splits.0, splits.1, splits.2).unwrap();
        PsgpdCode::new(field, spec, l, 1).unwrap()
    }

    fn random_library(
        field: PrimeField,
        l: usize,
        rows: usize,
        cols: usize,
        seed: u64,
    ) -> PublicLibrary {
        let mut rng = seeded_rng(seed, 4);
        PublicLibrary::new(
            (0..l)
                .map(|_| FieldMatrix::random(field, rows, cols, &mut rng))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn collusion_above_one_is_rejected() {
        let field = PrimeField::new(101).unwrap();
        let spec = PartitionSpec::new(2, 2, 2, 1, 1, 1).unwrap();
        assert!(matches!(
            PsgpdCode::new(field, spec, 2, 2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn query_structure() {
        let field = PrimeField::new(101).unwrap();
        let queries = build_queries(field, 3, 2, 4, 9).unwrap();
        assert_eq!(queries.len(), 4);
        for q in &queries {
            assert_eq!(q.entries.len(), 3);
            assert_eq!(q.entries[0], queries[0].entries[0]);
            assert_eq!(q.entries[2], queries[0].entries[2]);
            assert!(q.entries.iter().all(|&z| z != 0));
        }
        let targets: std::collections::HashSet<u64> =
            queries.iter().map(|q| q.entries[1]).collect();
        assert_eq!(targets.len(), 4);

        // Single-entry library: every query is just the distinct point.
        let solo = build_queries(field, 1, 1, 3, 9).unwrap();
        assert!(solo.iter().all(|q| q.entries.len() == 1));

        assert!(build_queries(field, 3, 4, 4, 9).is_err());
        assert!(build_queries(field, 3, 0, 4, 9).is_err());
    }

    #[test]
    fn query_entries_look_uniform() {
        // Pearson chi-square of every entry against uniform on the nonzero
        // elements of F_7, pooled over 10^4 seeds. Critical value for 5
        // degrees of freedom at the 1% level is 15.086.
        let field = PrimeField::new(7).unwrap();
        let mut counts = [[0u64; 6]; 3];
        let seeds = 10_000u64;
        for seed in 0..seeds {
            let queries = build_queries(field, 3, 2, 1, seed).unwrap();
            for (pos, &v) in queries[0].entries.iter().enumerate() {
                assert!(v >= 1 && v <= 6);
                counts[pos][v as usize - 1] += 1;
            }
        }
        let expected = seeds as f64 / 6.0;
        for (pos, bucket) in counts.iter().enumerate() {
            let chi2: f64 = bucket
                .iter()
                .map(|&c| {
                    let diff = c as f64 - expected;
                    diff * diff / expected
                })
                .sum();
            assert!(chi2 < 15.086, "entry {pos} not uniform: chi2 = {chi2}");
        }
    }

    #[test]
    fn single_block_single_matrix_roundtrip() {
        // t = s = d = 1, L = 1: threshold 2, recovered from two workers.
        let c = code(101, (2, 2, 2), (1, 1, 1), 1);
        assert_eq!(c.recovery_threshold(), 2);
        let mut rng = seeded_rng(61, 0);
        let a = FieldMatrix::random(c.field, 2, 2, &mut rng);
        let lib = random_library(c.field, 1, 2, 2, 63);
        let decoded = psgpd_roundtrip(&a, &lib, &c, 1, 2, 65).unwrap();
        assert_eq!(decoded, a.mul(lib.matrix(1)).unwrap());
    }

    #[test]
    fn masked_encoding_matches_hand_expansion() {
        // t=2, s=1: the encoder is A1 + A2 z + R z^2.
        let field = PrimeField::new(101).unwrap();
        let spec = PartitionSpec::new(2, 1, 1, 2, 1, 1).unwrap();
        let code = PsgpdCode::new(field, spec, 1, 1).unwrap();
        let a = FieldMatrix::new(field, 2, 1, vec![3, 4]).unwrap();
        let mask = FieldMatrix::new(field, 1, 1, vec![7]).unwrap();
        let queries = vec![QueryVector {
            worker_id: 0,
            entries: vec![5],
        }];
        let enc = encode_a_masked_with(&a, &code, &queries, 1, &mask).unwrap();
        // 3 + 4*5 + 7*25 = 198 = 97 mod 101
        assert_eq!(enc[0].matrix.entries(), &[97]);
    }

    #[test]
    fn zero_mask_reduces_to_plain_encoding() {
        let field = PrimeField::new(101).unwrap();
        let spec = PartitionSpec::new(2, 1, 1, 2, 1, 1).unwrap();
        let code = PsgpdCode::new(field, spec, 1, 1).unwrap();
        let a = FieldMatrix::new(field, 2, 1, vec![3, 4]).unwrap();
        let zero = FieldMatrix::zero(field, 1, 1);
        let queries = vec![QueryVector {
            worker_id: 0,
            entries: vec![5],
        }];
        let enc = encode_a_masked_with(&a, &code, &queries, 1, &zero).unwrap();
        assert_eq!(enc[0].matrix.entries(), &[23]); // 3 + 20
    }

    #[test]
    fn library_encoding_degenerate_cases() {
        // L = 1: the encoding is the lone matrix's polynomial at the target.
        let c = code(101, (2, 2, 2), (1, 2, 1), 1);
        let lib = random_library(c.field, 1, 2, 2, 5);
        let queries = build_queries(c.field, 1, 1, 3, 6).unwrap();
        let enc = worker_encode_library(&lib, &queries[0], &c).unwrap();
        let grid = split_blocks(lib.matrix(1), 2, 1).unwrap();
        let z = queries[0].entries[0];
        let mut expected = grid.at(1, 0).scale(1);
        expected.add_scaled(grid.at(0, 0), z).unwrap();
        assert_eq!(enc, expected);

        // s = d = 1 and L = 2: degree-0 polynomials sum to B1 + B2.
        let c = code(101, (2, 2, 2), (1, 1, 1), 2);
        let lib = random_library(c.field, 2, 2, 2, 7);
        let queries = build_queries(c.field, 2, 1, 3, 8).unwrap();
        let enc = worker_encode_library(&lib, &queries[0], &c).unwrap();
        assert_eq!(enc, lib.matrix(1).add(lib.matrix(2)).unwrap());
    }

    #[test]
    fn worker_output_minus_interference_is_the_target_polynomial() {
        let c = code(101, (4, 2, 4), (2, 1, 2), 3);
        let lib = random_library(c.field, 3, 2, 4, 11);
        let kappa = 2;
        let queries = build_queries(c.field, 3, kappa, 6, 13).unwrap();
        let b_enc = worker_encode_library(&lib, &queries[0], &c).unwrap();

        let mut interference = FieldMatrix::zero(c.field, 2, 2);
        for (r, &z) in queries[0].entries.iter().enumerate() {
            if r + 1 == kappa {
                continue;
            }
            let grid = split_blocks(lib.matrix(r + 1), 1, 2).unwrap();
            for term in c.maps.b_map.data_terms() {
                interference
                    .add_scaled(
                        grid.at(term.row, term.col),
                        c.field.pow(z, term.exponent as u64),
                    )
                    .unwrap();
            }
        }
        let target_only = b_enc.sub(&interference).unwrap();
        let grid = split_blocks(lib.matrix(kappa), 1, 2).unwrap();
        let z = queries[0].entries[kappa - 1];
        let mut expected = FieldMatrix::zero(c.field, 2, 2);
        for term in c.maps.b_map.data_terms() {
            expected
                .add_scaled(
                    grid.at(term.row, term.col),
                    c.field.pow(z, term.exponent as u64),
                )
                .unwrap();
        }
        assert_eq!(target_only, expected);
    }

    #[test]
    fn thresholds_match_closed_forms() {
        assert_eq!(psgpd_threshold(1, 1, 1).unwrap(), 2);
        assert_eq!(psgpd_threshold(2, 1, 2).unwrap(), 6);
        assert_eq!(psgpd_threshold(1, 2, 1).unwrap(), 4);
        assert_eq!(psgpd_threshold(6, 6, 6).unwrap(), 247);
        assert_eq!(psgpd_threshold(36, 1, 36).unwrap(), 1332);
        for t in 1..=5 {
            for s in 1..=5 {
                for d in 1..=5 {
                    assert_eq!(
                        psgpd_threshold(t, s, d).unwrap(),
                        psgpd_closed_form_threshold(t, s, d),
                        "({t},{s},{d})"
                    );
                }
            }
        }
    }

    #[test]
    fn end_to_end_both_regimes() {
        for (dims, splits) in [
            ((4usize, 2usize, 4usize), (2usize, 1usize, 2usize)), // s < t
            ((2, 4, 2), (1, 2, 1)),                               // s >= t
        ] {
            let c = code(101, dims, splits, 3);
            let mut rng = seeded_rng(17, 0);
            let a = FieldMatrix::random(c.field, dims.0, dims.1, &mut rng);
            let lib = random_library(c.field, 3, dims.1, dims.2, 19);
            for kappa in 1..=3 {
                let workers = c.recovery_threshold() + 2;
                let decoded = psgpd_roundtrip(&a, &lib, &c, kappa, workers, 23).unwrap();
                assert_eq!(decoded, a.mul(lib.matrix(kappa)).unwrap());
            }
        }
    }

    #[test]
    fn out_of_range_target_index_is_rejected() {
        let c = code(101, (2, 2, 2), (1, 1, 1), 2);
        let a = FieldMatrix::zero(c.field, 2, 2);
        let mask = FieldMatrix::zero(c.field, 2, 2);
        let queries = build_queries(c.field, 2, 1, 3, 1).unwrap();
        for kappa in [0usize, 3] {
            assert!(matches!(
                encode_a_masked_with(&a, &c, &queries, kappa, &mask),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn threshold_guard_fires() {
        let c = code(101, (4, 2, 4), (2, 1, 2), 2);
        let mut rng = seeded_rng(29, 0);
        let a = FieldMatrix::random(c.field, 4, 2, &mut rng);
        let lib = random_library(c.field, 2, 2, 4, 31);
        let queries = build_queries(c.field, 2, 1, 6, 33).unwrap();
        let (encodings, mask) = encode_a_masked(&a, &c, &queries, 1, 35).unwrap();
        let results: Vec<WorkerResult> = encodings
            .iter()
            .zip(&queries)
            .map(|(enc, q)| {
                let b_enc = worker_encode_library(&lib, q, &c).unwrap();
                psgpd_worker(enc, &b_enc).unwrap()
            })
            .collect();
        assert_eq!(c.recovery_threshold(), 6);
        let err = psgpd_decode(&results[..5], &c, &lib, &queries, 1, &a, &mask);
        assert!(matches!(
            err,
            Err(Error::InsufficientShares { needed: 6, got: 5 })
        ));
        let ok = psgpd_decode(&results, &c, &lib, &queries, 1, &a, &mask).unwrap();
        assert_eq!(ok, a.mul(lib.matrix(1)).unwrap());
    }
}
