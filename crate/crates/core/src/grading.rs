//! Graded projections, reduced Hamiltonians and compressions.
//!
//! `P_{≥X}` acts on the declarative decomposition, never on assembled
//! matrices: in finite dimensions the compression `Π_{≥X} H Π_{≥X}` keeps
//! contributions of terms with `Z ⊉ X`, so only the stored term list
//! identifies the graded components. Operators without a decomposition
//! support [`restrict`] but not [`project_geq`].

use std::sync::Arc;

use crate::coo::CooMatrix;
use crate::error::{Error, Result};
use crate::hambuild::{assemble, BlockOperator, KineticSpec, KineticSymbol, KineticTable};
use crate::hspace::StateSpace;
use crate::semilattice::{Semilattice, SpaceId};

/// Relative tolerance for the exact-splitting check of tabulated kinetic
/// symbols across a quotient.
const KINETIC_SPLIT_TOL: f64 = 1e-12;

/// The subsystem Hamiltonian `H_{≥X} = K_{≥X} + Σ_{Z ⊇ X} I(Z)` on the
/// filtered sector table. Requires `X ∈ S`.
pub fn project_geq(h: &BlockOperator, x: SpaceId) -> Result<BlockOperator> {
    if !h.space().lattice().contains(x) {
        return Err(Error::NotAMember(h.space().grid().label(x)));
    }
    project_geq_any(h, x)
}

/// Same as [`project_geq`] but `x` need not be a member; keeps sectors and
/// terms above `x`. Composing projections for incomparable members lands
/// here, on the filter intersection.
pub fn project_geq_any(h: &BlockOperator, x: SpaceId) -> Result<BlockOperator> {
    let decomp = h.decomposition().ok_or(Error::MissingDecomposition)?;
    let space = h.space();
    let survivors: Vec<usize> = space
        .sectors()
        .iter()
        .enumerate()
        .filter(|(_, s)| x.is_subset_of(s.space))
        .map(|(i, _)| i)
        .collect();
    let sub_lattice = Semilattice::new(survivors.iter().map(|&i| space.sectors()[i].space));
    let sub_space = Arc::new(StateSpace::new(space.grid().clone(), sub_lattice));
    let kinetic = KineticTable::from_pairs(
        &sub_space,
        survivors
            .iter()
            .map(|&i| (space.sectors()[i].space, decomp.kinetic.spec(i).clone()))
            .collect(),
    )?;
    let terms = decomp
        .terms
        .iter()
        .filter(|t| x.is_subset_of(t.z))
        .cloned()
        .collect();
    assemble(&kinetic, terms, &sub_space)
}

/// Extracts the quotient kinetic spec of `Y/X` from the specs of `Y` and
/// `X`, so that `h_Y + e_Y = (h_X + e_X) ⊕ (h_{Y/X} + e_Y − e_X)` exactly.
fn quotient_kinetic(
    space: &StateSpace,
    spec_y: &KineticSpec,
    spec_x: &KineticSpec,
    y: SpaceId,
    x: SpaceId,
) -> Result<KineticSpec> {
    let n = space.grid().points_per_axis;
    let shift = spec_y.shift - spec_x.shift;
    if let (
        KineticSymbol::DiscreteLaplacian { weights: wy },
        KineticSymbol::DiscreteLaplacian { weights: wx },
    ) = (&spec_y.symbol, &spec_x.symbol)
    {
        // per-axis weights: Y's weights on X's axes must equal X's weights
        let y_axes: Vec<usize> = y.axes().collect();
        let mut deviation = 0.0f64;
        let mut quotient_weights = Vec::new();
        let mut xi = 0usize;
        for (i, &axis) in y_axes.iter().enumerate() {
            if x.contains_axis(axis) {
                deviation = deviation.max((wy[i] - wx[xi]).abs());
                xi += 1;
            } else {
                quotient_weights.push(wy[i]);
            }
        }
        if deviation == 0.0 {
            return Ok(KineticSpec {
                symbol: KineticSymbol::DiscreteLaplacian {
                    weights: quotient_weights,
                },
                shift,
            });
        }
        return Err(Error::NonSeparableKinetic {
            space: space.grid().label(y),
            quotient: space.grid().label(x),
            deviation,
        });
    }
    // general case: extract the quotient symbol from the arrays and verify
    // additivity pointwise
    let hy = spec_y.symbol_array(y, n);
    let hx = spec_x.symbol_array(x, n);
    let split = space.tensor_split(y, x)?;
    let mut g = vec![0.0f64; split.dim_quot];
    for (q, slot) in g.iter_mut().enumerate() {
        *slot = hy[split.merge(0, q)] - hx[0];
    }
    let scale = hy.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
    let mut deviation = 0.0f64;
    for p in 0..split.dim_base {
        for (q, &gq) in g.iter().enumerate() {
            deviation = deviation.max((hy[split.merge(p, q)] - hx[p] - gq).abs());
        }
    }
    if deviation > KINETIC_SPLIT_TOL * scale {
        return Err(Error::NonSeparableKinetic {
            space: space.grid().label(y),
            quotient: space.grid().label(x),
            deviation,
        });
    }
    Ok(KineticSpec {
        symbol: KineticSymbol::Tabulated { values: g },
        shift,
    })
}

/// The reduced Hamiltonian `H_{S/X}` on the quotient sector table, defined
/// by `H_{≥X} = K_X ⊗ 1 + 1 ⊗ H_{S/X}` with `K_X` the model's X-sector
/// kinetic operator (shift included).
pub fn reduced(h: &BlockOperator, x: SpaceId) -> Result<BlockOperator> {
    let decomp = h.decomposition().ok_or(Error::MissingDecomposition)?;
    let space = h.space();
    if !space.lattice().contains(x) {
        return Err(Error::NotAMember(space.grid().label(x)));
    }
    let (quotient_lattice, pairs) = space.lattice().quotient(x)?;
    let q_space = Arc::new(StateSpace::new(space.grid().clone(), quotient_lattice));
    let spec_x = decomp.kinetic.spec(space.sector_position(x)?);
    let mut kinetic_pairs = Vec::with_capacity(pairs.len());
    for &(y, q) in &pairs {
        let spec_y = decomp.kinetic.spec(space.sector_position(y)?);
        kinetic_pairs.push((q, quotient_kinetic(space, spec_y, spec_x, y, x)?));
    }
    let kinetic = KineticTable::from_pairs(&q_space, kinetic_pairs)?;
    let terms = decomp
        .terms
        .iter()
        .filter(|t| x.is_subset_of(t.z))
        .map(|t| t.relabel_quotient(x))
        .collect::<Result<Vec<_>>>()?;
    assemble(&kinetic, terms, &q_space)
}

/// The model's X-sector kinetic operator `K_X` (symbol plus shift) in
/// position space: the left factor of the reconstruction identity.
pub fn kinetic_factor(h: &BlockOperator, x: SpaceId) -> Result<CooMatrix> {
    let decomp = h.decomposition().ok_or(Error::MissingDecomposition)?;
    let position = h.space().sector_position(x)?;
    Ok(decomp
        .kinetic
        .spec(position)
        .position_block(x, h.space().grid().points_per_axis))
}

/// Builds `left ⊗ 1 + 1 ⊗ right` on the filtered space `{Y : Y ⊇ X}` of
/// `full_space`, where `left` acts on `H_X` and `right` on the quotient
/// table `S/X`. Blockwise inverse of the reduction.
pub fn kron_sum(
    left: &CooMatrix,
    x: SpaceId,
    right: &BlockOperator,
    full_space: &Arc<StateSpace>,
) -> Result<BlockOperator> {
    let (quotient_lattice, pairs) = full_space.lattice().quotient(x)?;
    if &quotient_lattice != right.space().lattice() {
        return Err(Error::SectorTableMismatch);
    }
    let filtered = Semilattice::new(pairs.iter().map(|&(y, _)| y));
    let target = Arc::new(StateSpace::new(full_space.grid().clone(), filtered));
    let dim_x = full_space.grid().sector_dim(x);
    if left.nrows() != dim_x || left.ncols() != dim_x {
        return Err(Error::DimensionMismatch {
            expected: dim_x,
            got: left.nrows(),
        });
    }

    let mut out = BlockOperator::zero(&target);
    // 1 ⊗ right: every quotient block lifts to the matching sector pair
    for (&(qa, qb), m) in right.blocks() {
        let q_row = right.space().sectors()[qa].space;
        let q_col = right.space().sectors()[qb].space;
        let y_row = x.union(q_row);
        let y_col = x.union(q_col);
        let split_row = target.tensor_split(y_row, x)?;
        let split_col = target.tensor_split(y_col, x)?;
        let lifted = CooMatrix::identity(dim_x).kron(m).remap(
            target.grid().sector_dim(y_row),
            target.grid().sector_dim(y_col),
            split_row.merge_table(),
            split_col.merge_table(),
        );
        out.insert(
            target.sector_position(y_row)?,
            target.sector_position(y_col)?,
            lifted,
        );
    }
    // left ⊗ 1 on every diagonal
    for (idx, sector) in target.sectors().iter().enumerate() {
        let split = target.tensor_split(sector.space, x)?;
        let lifted = left.kron(&CooMatrix::identity(split.dim_quot)).remap(
            sector.dim,
            sector.dim,
            split.merge_table(),
            split.merge_table(),
        );
        out.insert(idx, idx, lifted);
    }
    Ok(out)
}

/// Compression `Π_T H Π_T`: keeps the blocks with both sectors in `T`.
/// Works on any block operator; the result carries no decomposition.
pub fn restrict(op: &BlockOperator, subset: &[SpaceId]) -> Result<BlockOperator> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let space = op.space();
    for &s in subset {
        if !space.lattice().contains(s) {
            return Err(Error::NotAMember(space.grid().label(s)));
        }
    }
    let sub_lattice = Semilattice::new(subset.iter().copied());
    let sub_space = Arc::new(StateSpace::new(space.grid().clone(), sub_lattice));
    let mut out = BlockOperator::zero(&sub_space);
    for (&(bx, by), m) in op.blocks() {
        let sx = space.sectors()[bx].space;
        let sy = space.sectors()[by].space;
        if let (Ok(ix), Ok(iy)) = (sub_space.sector_position(sx), sub_space.sector_position(sy)) {
            out.insert(ix, iy, m.clone());
        }
    }
    Ok(out)
}

/// Global indices of the `H_{≥X}` coefficients inside the full concatenated
/// vector; used by the localization probe to compress and embed.
pub fn filtered_index_map(full: &StateSpace, sub: &StateSpace) -> Result<Vec<usize>> {
    let mut map = Vec::with_capacity(sub.total_dim());
    for sector in sub.sectors() {
        let original = full.sector(sector.space)?;
        map.extend(original.offset..original.offset + original.dim);
    }
    Ok(map)
}
