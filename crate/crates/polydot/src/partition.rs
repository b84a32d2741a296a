//! Block partitioning of the input matrices and the secure augmentation:
//! split counts, random key blocks, and the zero-fill rule applied when the
//! collusion level does not divide evenly.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::FieldMatrix;

/// Dimensions of the multiplication `(rows x inner) * (inner x cols)`
/// together with the split counts: the left matrix splits into `t x s`
/// blocks, the right one into `s x d` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PartitionSpec {
    pub rows: usize,
    pub inner: usize,
    pub cols: usize,
    pub t: usize,
    pub s: usize,
    pub d: usize,
}

impl PartitionSpec {
    /// Validates divisibility. Dimensions that do not divide are rejected
    /// rather than silently padded; use [`FieldMatrix::zero_pad`] first if
    /// padding is intended.
    pub fn new(
        rows: usize,
        inner: usize,
        cols: usize,
        t: usize,
        s: usize,
        d: usize,
    ) -> Result<Self> {
        for (name, v) in [
            ("rows", rows),
            ("inner", inner),
            ("cols", cols),
            ("t", t),
            ("s", s),
            ("d", d),
        ] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        if rows % t != 0 || inner % s != 0 || cols % d != 0 {
            return Err(Error::Partition(format!(
                "splits ({t},{s},{d}) do not divide dimensions ({rows},{inner},{cols})"
            )));
        }
        Ok(Self {
            rows,
            inner,
            cols,
            t,
            s,
            d,
        })
    }

    /// Left-matrix fraction denominator, `m = t*s`.
    pub fn m(&self) -> usize {
        self.t * self.s
    }

    /// Right-matrix fraction denominator, `n = s*d`.
    pub fn n(&self) -> usize {
        self.s * self.d
    }

    pub fn block_rows(&self) -> usize {
        self.rows / self.t
    }

    pub fn block_inner(&self) -> usize {
        self.inner / self.s
    }

    pub fn block_cols(&self) -> usize {
        self.cols / self.d
    }

    /// Multiplications performed by one worker, `rows*inner*cols / (t*s*d)`.
    pub fn worker_multiplications(&self) -> u128 {
        (self.rows as u128 * self.inner as u128 * self.cols as u128)
            / (self.t as u128 * self.s as u128 * self.d as u128)
    }

    /// Field symbols in one worker result, `rows*cols / (t*d)`.
    pub fn result_symbols(&self) -> u128 {
        (self.rows as u128 / self.t as u128) * (self.cols as u128 / self.d as u128)
    }
}

/// A rectangular grid of equally shaped blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGrid {
    rows: usize,
    cols: usize,
    blocks: Vec<FieldMatrix>,
}

impl BlockGrid {
    pub fn from_blocks(rows: usize, cols: usize, blocks: Vec<FieldMatrix>) -> Result<Self> {
        if blocks.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks for a {rows}x{cols} grid",
                blocks.len()
            )));
        }
        if let Some(first) = blocks.first() {
            for b in &blocks {
                if b.rows() != first.rows() || b.cols() != first.cols() {
                    return Err(Error::DimensionMismatch("ragged block grid".into()));
                }
            }
        }
        Ok(Self { rows, cols, blocks })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldMatrix {
        &self.blocks[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut FieldMatrix {
        &mut self.blocks[r * self.cols + c]
    }

    pub fn blocks(&self) -> &[FieldMatrix] {
        &self.blocks
    }

    /// Concatenates the blocks back into one matrix; exact inverse of
    /// [`split_blocks`].
    pub fn join(&self) -> Result<FieldMatrix> {
        let first = self
            .blocks
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty grid".into()))?;
        let (br, bc) = (first.rows(), first.cols());
        let mut out = FieldMatrix::zero(first.field(), self.rows * br, self.cols * bc);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.place(r * br, c * bc, self.at(r, c))?;
            }
        }
        Ok(out)
    }
}

/// Splits a matrix into `row_blocks x col_blocks` equally sized blocks.
pub fn split_blocks(m: &FieldMatrix, row_blocks: usize, col_blocks: usize) -> Result<BlockGrid> {
    if row_blocks == 0 || col_blocks == 0 {
        return Err(Error::Partition("split counts must be positive".into()));
    }
    if m.rows() % row_blocks != 0 || m.cols() % col_blocks != 0 {
        return Err(Error::Partition(format!(
            "{}x{} matrix not divisible into {row_blocks}x{col_blocks} blocks",
            m.rows(),
            m.cols()
        )));
    }
    let br = m.rows() / row_blocks;
    let bc = m.cols() / col_blocks;
    let mut blocks = Vec::with_capacity(row_blocks * col_blocks);
    for r in 0..row_blocks {
        for c in 0..col_blocks {
            blocks.push(m.submatrix(r * br, c * bc, br, bc)?);
        }
    }
    BlockGrid::from_blocks(row_blocks, col_blocks, blocks)
}

/// Which augmentation shape applies: extra rows/columns when `s < t`,
/// extra inner blocks when `s >= t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Regime {
    SLessT,
    SGeqT,
}

/// Sizes and zero-fill layout of the secure augmentation for a collusion
/// level `p_c`. With `p_c = 0` the plan degenerates to the plain code.
///
/// Both key grids keep exactly `p_c` uniformly random blocks; the remaining
/// cells are pinned to zero, chosen so that the zeroed cells carry the
/// largest encoder exponents. The cell orderings below (last row right to
/// left, and so on) encode that rule explicitly per regime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationPlan {
    pub t: usize,
    pub s: usize,
    pub d: usize,
    pub p_c: usize,
    pub regime: Regime,
    /// Extra block rows/columns added on each side; 0 when `p_c = 0`.
    pub delta: usize,
    pub t_star: usize,
    pub s_star: usize,
    pub d_star: usize,
    /// Zeroed cells in the left key grid, in the prescribed order.
    pub zero_cells_a: Vec<(usize, usize)>,
    /// Zeroed cells in the right key grid, in the prescribed order.
    pub zero_cells_b: Vec<(usize, usize)>,
}

impl AugmentationPlan {
    pub fn new(t: usize, s: usize, d: usize, p_c: usize) -> Result<Self> {
        if t == 0 || s == 0 || d == 0 {
            return Err(Error::InvalidParameter(
                "split counts must be positive".into(),
            ));
        }
        let regime = if s < t { Regime::SLessT } else { Regime::SGeqT };
        if p_c == 0 {
            return Ok(Self {
                t,
                s,
                d,
                p_c,
                regime,
                delta: 0,
                t_star: t,
                s_star: s,
                d_star: d,
                zero_cells_a: Vec::new(),
                zero_cells_b: Vec::new(),
            });
        }
        match regime {
            Regime::SLessT => {
                let delta = p_c.div_ceil(s);
                let zeros = s * delta - p_c;
                // Last key row, right to left.
                let zero_cells_a = (0..zeros).map(|k| (delta - 1, s - 1 - k)).collect();
                // Last key column, top to bottom.
                let zero_cells_b = (0..zeros).map(|k| (k, delta - 1)).collect();
                Ok(Self {
                    t,
                    s,
                    d,
                    p_c,
                    regime,
                    delta,
                    t_star: t + delta,
                    s_star: s,
                    d_star: d + delta,
                    zero_cells_a,
                    zero_cells_b,
                })
            }
            Regime::SGeqT => {
                let delta = p_c.div_ceil(t.min(d));
                // Left key grid is t x delta: bottom to top, right to left.
                let zeros_a = t * delta - p_c;
                let zero_cells_a = (0..zeros_a)
                    .map(|k| (t - 1 - k % t, delta - 1 - k / t))
                    .collect();
                // Right key grid is delta x d: right to left, top to bottom.
                let zeros_b = d * delta - p_c;
                let zero_cells_b = (0..zeros_b).map(|k| (k / d, d - 1 - k % d)).collect();
                Ok(Self {
                    t,
                    s,
                    d,
                    p_c,
                    regime,
                    delta,
                    t_star: t,
                    s_star: s + delta,
                    d_star: d,
                    zero_cells_a,
                    zero_cells_b,
                })
            }
        }
    }

    /// Shape of the left key grid (block rows, block cols).
    pub fn key_shape_a(&self) -> (usize, usize) {
        match self.regime {
            Regime::SLessT => (self.delta, self.s),
            Regime::SGeqT => (self.t, self.delta),
        }
    }

    /// Shape of the right key grid, in augmented-matrix orientation.
    pub fn key_shape_b(&self) -> (usize, usize) {
        match self.regime {
            Regime::SLessT => (self.s, self.delta),
            Regime::SGeqT => (self.delta, self.d),
        }
    }

    pub fn zero_blocks_a(&self) -> usize {
        self.zero_cells_a.len()
    }

    pub fn zero_blocks_b(&self) -> usize {
        self.zero_cells_b.len()
    }

    /// Random (non-zero) blocks per key grid; `p_c` on each side.
    pub fn random_blocks_per_side(&self) -> usize {
        self.p_c
    }
}

/// The random key blocks for one encoding: a grid appended to each input
/// matrix. Zeroed cells hold explicit zero blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    pub r: BlockGrid,
    pub r_prime: BlockGrid,
}

impl KeyMaterial {
    /// Draws the random blocks i.i.d. uniform, honoring the plan's zero cells.
    pub fn sample<R: Rng>(
        field: PrimeField,
        spec: &PartitionSpec,
        plan: &AugmentationPlan,
        rng: &mut R,
    ) -> Result<Self> {
        let mut keys = Self::zeroed(field, spec, plan)?;
        for (r, c) in free_cells(plan.key_shape_a(), &plan.zero_cells_a) {
            *keys.r.at_mut(r, c) =
                FieldMatrix::random(field, spec.block_rows(), spec.block_inner(), rng);
        }
        for (r, c) in free_cells(plan.key_shape_b(), &plan.zero_cells_b) {
            *keys.r_prime.at_mut(r, c) =
                FieldMatrix::random(field, spec.block_inner(), spec.block_cols(), rng);
        }
        Ok(keys)
    }

    /// All-zero key material. Encoding with it degenerates to the non-secure
    /// code; the audits use this as a sabotage hook.
    pub fn zeroed(
        field: PrimeField,
        spec: &PartitionSpec,
        plan: &AugmentationPlan,
    ) -> Result<Self> {
        let (ar, ac) = plan.key_shape_a();
        let (br, bc) = plan.key_shape_b();
        let r = BlockGrid::from_blocks(
            ar,
            ac,
            vec![FieldMatrix::zero(field, spec.block_rows(), spec.block_inner()); ar * ac],
        )?;
        let r_prime = BlockGrid::from_blocks(
            br,
            bc,
            vec![FieldMatrix::zero(field, spec.block_inner(), spec.block_cols()); br * bc],
        )?;
        Ok(Self { r, r_prime })
    }

    /// Number of scalar degrees of freedom across both key grids.
    pub fn free_scalars(spec: &PartitionSpec, plan: &AugmentationPlan) -> u128 {
        let a_cells = free_cells(plan.key_shape_a(), &plan.zero_cells_a).len() as u128;
        let b_cells = free_cells(plan.key_shape_b(), &plan.zero_cells_b).len() as u128;
        a_cells * (spec.block_rows() * spec.block_inner()) as u128
            + b_cells * (spec.block_inner() * spec.block_cols()) as u128
    }

    /// Builds key material from an explicit assignment of every free scalar,
    /// in a canonical order (left grid row-major, then right grid row-major,
    /// blocks row-major inside). Exhaustive audits enumerate this.
    pub fn from_free_values(
        field: PrimeField,
        spec: &PartitionSpec,
        plan: &AugmentationPlan,
        values: &[u64],
    ) -> Result<Self> {
        if values.len() as u128 != Self::free_scalars(spec, plan) {
            return Err(Error::InvalidParameter(format!(
                "expected {} free key scalars, got {}",
                Self::free_scalars(spec, plan),
                values.len()
            )));
        }
        let mut keys = Self::zeroed(field, spec, plan)?;
        let mut it = values.iter().copied();
        let (abr, abc) = (spec.block_rows(), spec.block_inner());
        for (r, c) in free_cells(plan.key_shape_a(), &plan.zero_cells_a) {
            let data: Vec<u64> = (&mut it).take(abr * abc).collect();
            *keys.r.at_mut(r, c) = FieldMatrix::new(field, abr, abc, data)?;
        }
        let (bbr, bbc) = (spec.block_inner(), spec.block_cols());
        for (r, c) in free_cells(plan.key_shape_b(), &plan.zero_cells_b) {
            let data: Vec<u64> = (&mut it).take(bbr * bbc).collect();
            *keys.r_prime.at_mut(r, c) = FieldMatrix::new(field, bbr, bbc, data)?;
        }
        Ok(keys)
    }
}

/// Grid cells that hold random material, in canonical row-major order.
pub(crate) fn free_cells(shape: (usize, usize), zeroed: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..shape.0 {
        for c in 0..shape.1 {
            if !zeroed.contains(&(r, c)) {
                out.push((r, c));
            }
        }
    }
    out
}

/// Convenience wrapper: plan plus freshly sampled keys under `seed`.
pub fn build_augmentation(
    field: PrimeField,
    spec: &PartitionSpec,
    p_c: usize,
    seed: u64,
) -> Result<(AugmentationPlan, KeyMaterial)> {
    let plan = AugmentationPlan::new(spec.t, spec.s, spec.d, p_c)?;
    let mut rng = crate::field::seeded_rng(seed, 1);
    let keys = KeyMaterial::sample(field, spec, &plan, &mut rng)?;
    Ok((plan, keys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::seeded_rng;

    #[test]
    fn spec_rejects_non_divisible() {
        assert!(PartitionSpec::new(6, 6, 6, 4, 2, 2).is_err());
        assert!(PartitionSpec::new(6, 6, 6, 3, 2, 2).is_ok());
        assert!(PartitionSpec::new(6, 6, 6, 3, 0, 2).is_err());
    }

    #[test]
    fn split_then_join_is_identity() {
        let field = PrimeField::new(7).unwrap();
        let mut rng = seeded_rng(5, 0);
        let m = FieldMatrix::random(field, 6, 6, &mut rng);
        let grid = split_blocks(&m, 3, 2).unwrap();
        assert_eq!(grid.at(0, 0).rows(), 2);
        assert_eq!(grid.at(0, 0).cols(), 3);
        assert_eq!(grid.join().unwrap(), m);

        let two = FieldMatrix::new(field, 2, 2, vec![1, 2, 3, 4]).unwrap();
        let stacked = split_blocks(&two, 2, 1).unwrap();
        assert_eq!(stacked.at(0, 0).entries(), &[1, 2]);
        assert_eq!(stacked.at(1, 0).entries(), &[3, 4]);
        assert_eq!(stacked.join().unwrap(), two);

        let four = split_blocks(&FieldMatrix::random(field, 4, 4, &mut rng), 2, 2).unwrap();
        assert_eq!(four.join().unwrap().rows(), 4);
        assert!(split_blocks(&two, 3, 1).is_err());
    }

    #[test]
    fn plan_s_less_t_exact_division() {
        let plan = AugmentationPlan::new(3, 2, 2, 2).unwrap();
        assert_eq!(plan.regime, Regime::SLessT);
        assert_eq!(plan.delta, 1);
        assert_eq!(plan.t_star, 4);
        assert_eq!(plan.d_star, 3);
        assert_eq!(plan.zero_blocks_a(), 0);
        assert_eq!(plan.zero_blocks_b(), 0);
    }

    #[test]
    fn plan_s_less_t_strict_ceiling() {
        let plan = AugmentationPlan::new(3, 2, 2, 1).unwrap();
        assert_eq!(plan.delta, 1);
        assert_eq!(plan.zero_blocks_a(), 1);
        assert_eq!(plan.zero_blocks_b(), 1);
        // Last key row right-to-left; last key column top-to-bottom.
        assert_eq!(plan.zero_cells_a, vec![(0, 1)]);
        assert_eq!(plan.zero_cells_b, vec![(0, 0)]);
    }

    #[test]
    fn plan_s_geq_t() {
        let plan = AugmentationPlan::new(2, 3, 2, 3).unwrap();
        assert_eq!(plan.regime, Regime::SGeqT);
        assert_eq!(plan.delta, 2);
        assert_eq!(plan.s_star, 5);
        assert_eq!(plan.zero_blocks_a(), 1);
        assert_eq!(plan.zero_blocks_b(), 1);
        assert_eq!(plan.zero_cells_a, vec![(1, 1)]);
        assert_eq!(plan.zero_cells_b, vec![(0, 1)]);
    }

    #[test]
    fn plan_keeps_p_c_random_blocks_per_side() {
        for (t, s, d) in [
            (3, 2, 2),
            (2, 3, 2),
            (1, 2, 1),
            (4, 2, 3),
            (2, 2, 2),
            (5, 5, 1),
        ] {
            for p_c in 0..=4 {
                let plan = AugmentationPlan::new(t, s, d, p_c).unwrap();
                let (ar, ac) = plan.key_shape_a();
                let (br, bc) = plan.key_shape_b();
                assert_eq!(ar * ac - plan.zero_blocks_a(), p_c, "({t},{s},{d},{p_c})");
                assert_eq!(br * bc - plan.zero_blocks_b(), p_c, "({t},{s},{d},{p_c})");
            }
        }
    }

    #[test]
    fn key_material_respects_zero_cells() {
        let field = PrimeField::new(101).unwrap();
        let spec = PartitionSpec::new(6, 6, 6, 3, 2, 2).unwrap();
        let (plan, keys) = build_augmentation(field, &spec, 1, 9).unwrap();
        for &(r, c) in &plan.zero_cells_a {
            assert!(keys.r.at(r, c).is_zero());
        }
        for &(r, c) in &plan.zero_cells_b {
            assert!(keys.r_prime.at(r, c).is_zero());
        }
        let free = free_cells(plan.key_shape_a(), &plan.zero_cells_a);
        assert!(free.iter().all(|&(r, c)| !keys.r.at(r, c).is_zero()));
    }

    #[test]
    fn free_value_enumeration_roundtrip() {
        let field = PrimeField::new(5).unwrap();
        let spec = PartitionSpec::new(2, 2, 2, 2, 1, 1).unwrap();
        let plan = AugmentationPlan::new(2, 1, 1, 1).unwrap();
        let free = KeyMaterial::free_scalars(&spec, &plan);
        // One 1x2 block plus one 2x2 block of scalars.
        assert_eq!(free, 2 + 4);
        let values: Vec<u64> = vec![1, 2, 3, 4, 0, 1];
        let keys = KeyMaterial::from_free_values(field, &spec, &plan, &values).unwrap();
        assert_eq!(keys.r.at(0, 0).entries(), &[1, 2]);
        assert_eq!(keys.r_prime.at(0, 0).entries(), &[3, 4, 0, 1]);
        assert!(KeyMaterial::from_free_values(field, &spec, &plan, &values[1..]).is_err());
    }
}
