//! Test oracles: direct block-sequence convolution and schoolbook products,
//! kept independent of the exponent-map machinery they check.
#![allow(dead_code)] // each test target uses a subset of the helpers

use polydot::field::PrimeField;
use polydot::matrix::FieldMatrix;
use polydot::partition::{split_blocks, AugmentationPlan, KeyMaterial, PartitionSpec, Regime};

/// Plain block convolution: `out[e] = sum_{u+v=e} a[u] * b[v]`, with `None`
/// standing for an all-zero block.
pub fn convolve(
    a: &[Option<FieldMatrix>],
    b: &[Option<FieldMatrix>],
    field: PrimeField,
    rows: usize,
    cols: usize,
) -> Vec<FieldMatrix> {
    let mut out = vec![FieldMatrix::zero(field, rows, cols); a.len() + b.len() - 1];
    for (u, block_a) in a.iter().enumerate() {
        let Some(block_a) = block_a else { continue };
        for (v, block_b) in b.iter().enumerate() {
            if let Some(block_b) = block_b {
                let prod = block_a.mul(block_b).unwrap();
                out[u + v] = out[u + v].add(&prod).unwrap();
            }
        }
    }
    out
}

/// The encoder input sequences built straight from the textual construction
/// (concatenated rows, bottom-up columns, zero gaps), not from the exponent
/// maps.
pub fn oracle_sequences(
    a: &FieldMatrix,
    b: &FieldMatrix,
    spec: &PartitionSpec,
    plan: &AugmentationPlan,
    keys: &KeyMaterial,
) -> (Vec<Option<FieldMatrix>>, Vec<Option<FieldMatrix>>) {
    let a_grid = split_blocks(a, spec.t, spec.s).unwrap();
    let b_grid = split_blocks(b, spec.s, spec.d).unwrap();
    let (t, s, d) = (spec.t, spec.s, spec.d);

    if plan.p_c == 0 || plan.regime == Regime::SLessT {
        let key_span = if plan.p_c == 0 { 0 } else { plan.delta };
        // Left sequence: rows of the (augmented) left matrix, left to right,
        // top to bottom.
        let mut seq_a = Vec::new();
        for i in 0..t {
            for j in 0..s {
                seq_a.push(Some(a_grid.at(i, j).clone()));
            }
        }
        for ri in 0..key_span {
            for j in 0..s {
                let block = keys.r.at(ri, j);
                seq_a.push((!block.is_zero()).then(|| block.clone()));
            }
        }
        // Right sequence: each column bottom to top, separated by
        // s*(t_star - 1) zero blocks, then the appended key columns with no
        // separation.
        let mut seq_b = Vec::new();
        for l in 0..d {
            for k in (0..s).rev() {
                seq_b.push(Some(b_grid.at(k, l).clone()));
            }
            seq_b.extend(std::iter::repeat_with(|| None).take(s * (plan.t_star - 1)));
        }
        for cj in 0..key_span {
            for k in (0..s).rev() {
                let block = keys.r_prime.at(k, cj);
                seq_b.push((!block.is_zero()).then(|| block.clone()));
            }
        }
        trim_trailing(&mut seq_a);
        trim_trailing(&mut seq_b);
        (seq_a, seq_b)
    } else {
        // s >= t: the left sequence interleaves the block rows with stride t
        // (column-major read of [A | R]); the right sequence strides its
        // columns by t*s_star and trails the key rows as a packed tail.
        let delta = plan.delta;
        let s_star = plan.s_star;
        let mut seq_a: Vec<Option<FieldMatrix>> = vec![None; t * s_star];
        for i in 0..t {
            for j in 0..s {
                seq_a[i + t * j] = Some(a_grid.at(i, j).clone());
            }
            for cj in 0..delta {
                let block = keys.r.at(i, cj);
                seq_a[i + t * (s + cj)] = (!block.is_zero()).then(|| block.clone());
            }
        }
        let len_b = t * (s_star * d - delta) + d * delta;
        let mut seq_b: Vec<Option<FieldMatrix>> = vec![None; len_b];
        for k in 0..s {
            for l in 0..d {
                seq_b[(s - 1 - k) * t + t * s_star * l] = Some(b_grid.at(k, l).clone());
            }
        }
        for rk in 0..delta {
            for l in 0..d {
                let block = keys.r_prime.at(rk, l);
                seq_b[t * (s_star * d - delta) + d * (delta - 1 - rk) + l] =
                    (!block.is_zero()).then(|| block.clone());
            }
        }
        trim_trailing(&mut seq_a);
        trim_trailing(&mut seq_b);
        (seq_a, seq_b)
    }
}

fn trim_trailing(seq: &mut Vec<Option<FieldMatrix>>) {
    while matches!(seq.last(), Some(None)) {
        seq.pop();
    }
}

/// Random inputs for a spec.
pub fn random_inputs(
    field: PrimeField,
    spec: &PartitionSpec,
    seed: u64,
) -> (FieldMatrix, FieldMatrix) {
    let mut rng = polydot::field::seeded_rng(seed, 8);
    (
        FieldMatrix::random(field, spec.rows, spec.inner, &mut rng),
        FieldMatrix::random(field, spec.inner, spec.cols, &mut rng),
    )
}
