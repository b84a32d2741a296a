//! Exponent layouts for the three code families.
//!
//! Each encoder is a matrix polynomial: every block of the (augmented) input
//! occupies one exponent. The product polynomial then contains each output
//! block `C_{i,l}` as the coefficient of a dedicated readout exponent, with
//! all random-block contributions falling elsewhere.
//!
//! The readout positions are always derived from the symbolic product of the
//! two maps, which is the ground truth; closed-form position formulas are
//! cross-checked against it and a diagnostic is emitted if they disagree.

use crate::error::{Error, Result};
use crate::partition::{AugmentationPlan, Regime};

/// What a term of an encoder polynomial carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// A block of the data matrix; `(row, col)` index the data block grid.
    Data,
    /// A random key block; `(row, col)` index the key grid.
    Random,
    /// A key cell pinned to zero by the augmentation plan.
    Zero,
}

/// One `block * z^exponent` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapTerm {
    pub row: usize,
    pub col: usize,
    pub exponent: usize,
    pub source: Source,
}

/// The full exponent layout of one encoder polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMap {
    pub terms: Vec<MapTerm>,
}

impl ExponentMap {
    /// Degree counting only terms that can be nonzero.
    pub fn max_degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.source != Source::Zero)
            .map(|t| t.exponent)
            .max()
            .unwrap_or(0)
    }

    pub fn data_terms(&self) -> impl Iterator<Item = &MapTerm> {
        self.terms.iter().filter(|t| t.source == Source::Data)
    }

    fn data_exponent(&self, row: usize, col: usize) -> Option<usize> {
        self.data_terms()
            .find(|t| t.row == row && t.col == col)
            .map(|t| t.exponent)
    }

    /// Nonzero terms must occupy pairwise distinct exponents.
    pub fn exponents_distinct(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.terms
            .iter()
            .filter(|t| t.source != Source::Zero)
            .all(|t| seen.insert(t.exponent))
    }
}

/// Exponent of the product-polynomial coefficient holding each output block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadoutMap {
    t: usize,
    d: usize,
    positions: Vec<usize>,
}

impl ReadoutMap {
    /// Position of `C_{i,l}` (0-based block indices).
    pub fn position(&self, i: usize, l: usize) -> usize {
        self.positions[i * self.d + l]
    }

    pub fn block_rows(&self) -> usize {
        self.t
    }

    pub fn block_cols(&self) -> usize {
        self.d
    }
}

/// Which construction a pair of maps implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Family {
    /// Plain block code, no security (`p_c = 0`).
    Gpd,
    /// Secure variant masking both inputs against `p_c` colluding workers.
    Sgpd,
    /// Private-and-secure variant: one masked input, library-selected other.
    Psgpd,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Gpd => write!(f, "GPD"),
            Family::Sgpd => write!(f, "SGPD"),
            Family::Psgpd => write!(f, "PSGPD"),
        }
    }
}

/// Both encoder maps plus the verified readout positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderMaps {
    pub family: Family,
    pub a_map: ExponentMap,
    pub b_map: ExponentMap,
    pub readout: ReadoutMap,
    /// Degree of the product polynomial over nonzero terms.
    pub product_degree: usize,
}

/// Builds the maps for the secure family ( plain code when `p_c = 0`).
pub fn sgpd_maps(plan: &AugmentationPlan) -> Result<EncoderMaps> {
    let (t, s, d) = (plan.t, plan.s, plan.d);
    let mut a_terms = Vec::new();
    let mut b_terms = Vec::new();

    if plan.p_c == 0 {
        // Plain layout: left matrix read row-major, right matrix bottom-up
        // with zero gaps sized so convolution centers stay interference-free.
        for i in 0..t {
            for j in 0..s {
                a_terms.push(MapTerm {
                    row: i,
                    col: j,
                    exponent: s * i + j,
                    source: Source::Data,
                });
            }
        }
        for k in 0..s {
            for l in 0..d {
                b_terms.push(MapTerm {
                    row: k,
                    col: l,
                    exponent: (s - 1 - k) + t * s * l,
                    source: Source::Data,
                });
            }
        }
    } else {
        match plan.regime {
            Regime::SLessT => {
                let t_star = plan.t_star;
                let delta = plan.delta;
                for i in 0..t {
                    for j in 0..s {
                        a_terms.push(MapTerm {
                            row: i,
                            col: j,
                            exponent: s * i + j,
                            source: Source::Data,
                        });
                    }
                }
                for ri in 0..delta {
                    for j in 0..s {
                        a_terms.push(MapTerm {
                            row: ri,
                            col: j,
                            exponent: s * (t + ri) + j,
                            source: key_source(plan.zero_cells_a.contains(&(ri, j))),
                        });
                    }
                }
                for k in 0..s {
                    for l in 0..d {
                        b_terms.push(MapTerm {
                            row: k,
                            col: l,
                            exponent: (s - 1 - k) + t_star * s * l,
                            source: Source::Data,
                        });
                    }
                }
                // Appended key columns follow the data columns with no gaps.
                for k in 0..s {
                    for cj in 0..delta {
                        b_terms.push(MapTerm {
                            row: k,
                            col: cj,
                            exponent: t_star * s * d + s * (cj + 1) - (k + 1),
                            source: key_source(plan.zero_cells_b.contains(&(k, cj))),
                        });
                    }
                }
            }
            Regime::SGeqT => {
                let s_star = plan.s_star;
                let delta = plan.delta;
                // Row-interleaved layout: block (i, j) sits at i + t*j, so the
                // t block rows occupy distinct residues mod t.
                for i in 0..t {
                    for j in 0..s {
                        a_terms.push(MapTerm {
                            row: i,
                            col: j,
                            exponent: i + t * j,
                            source: Source::Data,
                        });
                    }
                }
                for i in 0..t {
                    for cj in 0..delta {
                        a_terms.push(MapTerm {
                            row: i,
                            col: cj,
                            exponent: i + t * (s + cj),
                            source: key_source(plan.zero_cells_a.contains(&(i, cj))),
                        });
                    }
                }
                for k in 0..s {
                    for l in 0..d {
                        b_terms.push(MapTerm {
                            row: k,
                            col: l,
                            exponent: (s - 1 - k) * t + t * s_star * l,
                            source: Source::Data,
                        });
                    }
                }
                // Prepended key rows trail the data columns as a packed tail.
                for rk in 0..delta {
                    for l in 0..d {
                        b_terms.push(MapTerm {
                            row: rk,
                            col: l,
                            exponent: t * (s_star * d - delta) + d * (delta - 1 - rk) + l,
                            source: key_source(plan.zero_cells_b.contains(&(rk, l))),
                        });
                    }
                }
            }
        }
    }

    let family = if plan.p_c == 0 {
        Family::Gpd
    } else {
        Family::Sgpd
    };
    finish_maps(family, plan, t, s, d, a_terms, b_terms)
}

/// Builds the maps for the private-and-secure family: the left input gains a
/// single mask block one exponent past its data, the right map leaves that
/// slot free of readouts.
pub fn psgpd_maps(t: usize, s: usize, d: usize) -> Result<EncoderMaps> {
    if t == 0 || s == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "split counts must be positive".into(),
        ));
    }
    let mut a_terms = Vec::new();
    let mut b_terms = Vec::new();
    if s < t {
        for i in 0..t {
            for j in 0..s {
                a_terms.push(MapTerm {
                    row: i,
                    col: j,
                    exponent: s * i + j,
                    source: Source::Data,
                });
            }
        }
        a_terms.push(MapTerm {
            row: 0,
            col: 0,
            exponent: s * t,
            source: Source::Random,
        });
        for k in 0..s {
            for l in 0..d {
                b_terms.push(MapTerm {
                    row: k,
                    col: l,
                    exponent: (s - 1 - k) + s * (t + 1) * l,
                    source: Source::Data,
                });
            }
        }
    } else {
        for i in 0..t {
            for j in 0..s {
                a_terms.push(MapTerm {
                    row: i,
                    col: j,
                    exponent: i + t * j,
                    source: Source::Data,
                });
            }
        }
        a_terms.push(MapTerm {
            row: 0,
            col: 0,
            exponent: t * s,
            source: Source::Random,
        });
        for k in 0..s {
            for l in 0..d {
                b_terms.push(MapTerm {
                    row: k,
                    col: l,
                    exponent: (s - 1 - k) * t + t * s * l,
                    source: Source::Data,
                });
            }
        }
    }
    let plan = AugmentationPlan::new(t, s, d, 0)?;
    finish_maps(Family::Psgpd, &plan, t, s, d, a_terms, b_terms)
}

fn key_source(zeroed: bool) -> Source {
    if zeroed {
        Source::Zero
    } else {
        Source::Random
    }
}

fn finish_maps(
    family: Family,
    plan: &AugmentationPlan,
    t: usize,
    s: usize,
    d: usize,
    a_terms: Vec<MapTerm>,
    b_terms: Vec<MapTerm>,
) -> Result<EncoderMaps> {
    let a_map = ExponentMap { terms: a_terms };
    let b_map = ExponentMap { terms: b_terms };
    if !a_map.exponents_distinct() || !b_map.exponents_distinct() {
        return Err(Error::InvalidParameter(
            "encoder map assigns one exponent twice".into(),
        ));
    }
    let readout = derive_readout(family, &a_map, &b_map, t, s, d)?;
    cross_check_readout(family, plan, &readout);
    let product_degree = a_map.max_degree() + b_map.max_degree();
    Ok(EncoderMaps {
        family,
        a_map,
        b_map,
        readout,
        product_degree,
    })
}

/// Total degree of the product polynomial for a pair of maps.
pub fn max_degree(a_map: &ExponentMap, b_map: &ExponentMap) -> usize {
    a_map.max_degree() + b_map.max_degree()
}

/// Derives readout positions from the symbolic product and verifies them:
/// for every `(i, l)` all `s` contraction pairs land on one exponent, and no
/// uncorrectable term pair touches it. Mask-times-data products are the one
/// exception, and only in the private family: both factors are known to the
/// master (the mask is its own, the library is public), so the decoder
/// subtracts them after interpolation.
fn derive_readout(
    family: Family,
    a_map: &ExponentMap,
    b_map: &ExponentMap,
    t: usize,
    s: usize,
    d: usize,
) -> Result<ReadoutMap> {
    let mut positions = vec![0usize; t * d];
    for i in 0..t {
        for l in 0..d {
            let mut exps = (0..s).map(|j| {
                let ea = a_map.data_exponent(i, j);
                let eb = b_map.data_exponent(j, l);
                match (ea, eb) {
                    (Some(ea), Some(eb)) => Ok(ea + eb),
                    _ => Err(Error::InvalidParameter(format!(
                        "missing data term for contraction ({i},{j},{l})"
                    ))),
                }
            });
            let first = exps.next().unwrap()?;
            for e in exps {
                if e? != first {
                    return Err(Error::InvalidParameter(format!(
                        "contraction terms of C[{i}][{l}] spread over several exponents"
                    )));
                }
            }
            positions[i * d + l] = first;
        }
    }

    let mut owner = std::collections::HashMap::with_capacity(t * d);
    for i in 0..t {
        for l in 0..d {
            if owner.insert(positions[i * d + l], (i, l)).is_some() {
                return Err(Error::InvalidParameter(
                    "two output blocks share a readout exponent".into(),
                ));
            }
        }
    }

    // Interference freedom: any nonzero pair hitting a readout exponent must
    // be a matching Data x Data contraction pair of that block, or a
    // master-correctable mask product in the private family.
    for ta in a_map.terms.iter().filter(|x| x.source != Source::Zero) {
        for tb in b_map.terms.iter().filter(|x| x.source != Source::Zero) {
            if let Some(&(i, l)) = owner.get(&(ta.exponent + tb.exponent)) {
                let legit = ta.source == Source::Data
                    && tb.source == Source::Data
                    && ta.row == i
                    && tb.col == l
                    && ta.col == tb.row;
                let correctable = family == Family::Psgpd
                    && ta.source == Source::Random
                    && tb.source == Source::Data;
                if !legit && !correctable {
                    return Err(Error::InvalidParameter(format!(
                        "interference at exponent {} over C[{i}][{l}]",
                        ta.exponent + tb.exponent
                    )));
                }
            }
        }
    }

    Ok(ReadoutMap { t, d, positions })
}

/// Closed-form readout position for each family/regime, used only as a
/// cross-check against the symbolic derivation.
pub fn closed_form_position(family: Family, plan: &AugmentationPlan, i: usize, l: usize) -> usize {
    match (family, plan.regime) {
        (Family::Psgpd, Regime::SLessT) => plan.s * (i + 1) - 1 + plan.s * (plan.t + 1) * l,
        (Family::Psgpd, Regime::SGeqT) => i + plan.t * (plan.s * (l + 1) - 1),
        (_, Regime::SLessT) => plan.s * (i + 1) - 1 + plan.t_star * plan.s * l,
        (_, Regime::SGeqT) if plan.p_c == 0 => {
            // Plain layout is used whenever p_c = 0, regardless of regime.
            plan.s * (i + 1) - 1 + plan.t * plan.s * l
        }
        (_, Regime::SGeqT) => i + plan.t * (plan.s_star * (l + 1) - 1),
    }
}

fn cross_check_readout(family: Family, plan: &AugmentationPlan, readout: &ReadoutMap) {
    let mut mismatches = Vec::new();
    for i in 0..readout.block_rows() {
        for l in 0..readout.block_cols() {
            let formula = closed_form_position(family, plan, i, l);
            let symbolic = readout.position(i, l);
            if formula != symbolic {
                mismatches.push((i, l, symbolic, formula));
            }
        }
    }
    if !mismatches.is_empty() {
        let (i, l, sym, formula) = mismatches[0];
        log::warn!(
            "{family} readout formula disagrees with symbolic product for \
             (t,s,d,p_c)=({},{},{},{}): {} positions differ, e.g. C[{i}][{l}] \
             symbolic {sym} vs formula {formula}; using symbolic",
            plan.t,
            plan.s,
            plan.d,
            plan.p_c,
            mismatches.len(),
        );
    }
}
