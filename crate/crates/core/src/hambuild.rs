//! Construction of block Hamiltonians `H = K + Σ_Z I(Z)`.
//!
//! The kinetic part is block-diagonal with one symbol per sector; each
//! interaction term carries a grading label `Z` and acts as `1_Z ⊗ I^Z`
//! between the sectors above `Z`. Both parts are kept declaratively inside
//! the assembled operator so the graded projections can later filter terms
//! by their label.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::coo::CooMatrix;
use crate::error::{Error, Result};
use crate::hspace::{root_of_unity, symbol_to_circulant_kernel, StateSpace, StateVector};
use crate::semilattice::SpaceId;

/// Kinetic symbol over the dual grid of one sector.
#[derive(Debug, Clone, PartialEq)]
pub enum KineticSymbol {
    /// `h_X(k) = Σ_{i∈X} w_i (2 − 2cos(2πk_i/n))`; one weight per axis of
    /// the space, following global axis order. The empty product (vacuum)
    /// is the zero symbol, realizing `Δ_O = 0`.
    DiscreteLaplacian { weights: Vec<f64> },
    /// Explicit real values over the dual grid, row-major.
    Tabulated { values: Vec<f64> },
}

/// One sector's kinetic prescription: symbol plus constant shift.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticSpec {
    pub symbol: KineticSymbol,
    pub shift: f64,
}

impl KineticSpec {
    pub fn laplacian(weights: Vec<f64>) -> Self {
        KineticSpec {
            symbol: KineticSymbol::DiscreteLaplacian { weights },
            shift: 0.0,
        }
    }

    /// Unit-weight lattice Laplacian for a space of the given rank.
    pub fn laplacian_unit(rank: usize) -> Self {
        Self::laplacian(vec![1.0; rank])
    }

    pub fn tabulated(values: Vec<f64>) -> Self {
        KineticSpec {
            symbol: KineticSymbol::Tabulated { values },
            shift: 0.0,
        }
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    fn check(&self, space: SpaceId, grid_n: usize, label: &str) -> Result<()> {
        match &self.symbol {
            KineticSymbol::DiscreteLaplacian { weights } => {
                if weights.len() != space.rank() {
                    return Err(Error::SymbolLength {
                        space: label.to_string(),
                        expected: space.rank(),
                        got: weights.len(),
                    });
                }
                if weights.iter().any(|&w| w <= 0.0) {
                    return Err(Error::Validation {
                        field: format!("kinetic[{label}].weights"),
                        message: "laplacian weights must be positive".into(),
                    });
                }
            }
            KineticSymbol::Tabulated { values } => {
                let expected = grid_n.pow(space.rank() as u32);
                if values.len() != expected {
                    return Err(Error::SymbolLength {
                        space: label.to_string(),
                        expected,
                        got: values.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Symbol values `h_X(k)` over the dual grid (shift not included).
    pub fn symbol_array(&self, space: SpaceId, n: usize) -> Vec<f64> {
        match &self.symbol {
            KineticSymbol::DiscreteLaplacian { weights } => {
                let rank = space.rank();
                let dim = n.pow(rank as u32);
                let axis_symbol: Vec<f64> = (0..n)
                    .map(|k| 2.0 - 2.0 * root_of_unity(k as i64, n).re)
                    .collect();
                (0..dim)
                    .map(|flat| {
                        let mut rem = flat;
                        let mut total = 0.0;
                        for i in (0..rank).rev() {
                            let k = rem % n;
                            rem /= n;
                            total += weights[i] * axis_symbol[k];
                        }
                        total
                    })
                    .collect()
            }
            KineticSymbol::Tabulated { values } => values.clone(),
        }
    }

    /// Smallest eigenvalue of the sector's kinetic operator, shift included.
    pub fn min_value(&self, space: SpaceId, n: usize) -> f64 {
        self.symbol_array(space, n)
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
            + self.shift
    }

    /// Position-space matrix of the sector's kinetic operator, shift
    /// included. The Laplacian is assembled from exact per-axis circulant
    /// stencils; tabulated symbols go through the inverse DFT.
    pub fn position_block(&self, space: SpaceId, n: usize) -> CooMatrix {
        let rank = space.rank();
        let dim = n.pow(rank as u32);
        let mut block = match &self.symbol {
            KineticSymbol::DiscreteLaplacian { weights } => {
                let mut sum = CooMatrix::zeros(dim, dim);
                for (i, &w) in weights.iter().enumerate() {
                    let stencil = laplacian_stencil(n, w);
                    let before = CooMatrix::identity(n.pow(i as u32));
                    let after = CooMatrix::identity(n.pow((rank - 1 - i) as u32));
                    sum = sum.add(&before.kron(&stencil).kron(&after));
                }
                sum
            }
            KineticSymbol::Tabulated { values } => {
                let kernel = symbol_to_circulant_kernel(values, n, rank);
                let mut entries = Vec::with_capacity(dim * dim);
                for row in 0..dim {
                    for col in 0..dim {
                        let mut diff = 0usize;
                        let (mut r, mut c) = (row, col);
                        // componentwise difference (row − col) mod n, row-major
                        let mut parts = vec![0usize; rank];
                        for i in (0..rank).rev() {
                            parts[i] = (r % n + n - c % n) % n;
                            r /= n;
                            c /= n;
                        }
                        for p in parts {
                            diff = diff * n + p;
                        }
                        let v = kernel[diff];
                        if v.norm() > 1e-16 * values.len() as f64 {
                            entries.push((row as u32, col as u32, v));
                        }
                    }
                }
                CooMatrix::from_entries(dim, dim, entries)
            }
        };
        if self.shift != 0.0 {
            block = block.add(&CooMatrix::scaled_identity(
                dim,
                Complex64::new(self.shift, 0.0),
            ));
        }
        block
    }
}

fn laplacian_stencil(n: usize, w: f64) -> CooMatrix {
    let mut entries = Vec::with_capacity(3 * n);
    for x in 0..n as u32 {
        entries.push((x, x, Complex64::new(2.0 * w, 0.0)));
        entries.push((x, (x + 1) % n as u32, Complex64::new(-w, 0.0)));
        entries.push((x, (x + n as u32 - 1) % n as u32, Complex64::new(-w, 0.0)));
    }
    CooMatrix::from_entries(n, n, entries)
}

/// Kinetic prescriptions for every sector, in sector order.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticTable {
    specs: Vec<KineticSpec>,
}

impl KineticTable {
    pub fn build(space: &StateSpace, f: impl Fn(SpaceId) -> KineticSpec) -> Result<Self> {
        let specs: Vec<KineticSpec> = space.sectors().iter().map(|s| f(s.space)).collect();
        let table = KineticTable { specs };
        table.check(space)?;
        Ok(table)
    }

    pub fn from_pairs(space: &StateSpace, pairs: Vec<(SpaceId, KineticSpec)>) -> Result<Self> {
        let by_space: BTreeMap<SpaceId, KineticSpec> = pairs.into_iter().collect();
        let mut specs = Vec::with_capacity(space.sectors().len());
        for s in space.sectors() {
            let spec = by_space.get(&s.space).cloned().ok_or_else(|| {
                Error::Validation {
                    field: "kinetic".into(),
                    message: format!(
                        "no kinetic spec for sector {}",
                        space.grid().label(s.space)
                    ),
                }
            })?;
            specs.push(spec);
        }
        let table = KineticTable { specs };
        table.check(space)?;
        Ok(table)
    }

    /// Unit-weight Laplacian on every sector, zero shifts.
    pub fn free(space: &StateSpace) -> Self {
        KineticTable {
            specs: space
                .sectors()
                .iter()
                .map(|s| KineticSpec::laplacian_unit(s.space.rank()))
                .collect(),
        }
    }

    fn check(&self, space: &StateSpace) -> Result<()> {
        let n = space.grid().points_per_axis;
        for (spec, sector) in self.specs.iter().zip(space.sectors()) {
            spec.check(sector.space, n, &space.grid().label(sector.space))?;
        }
        Ok(())
    }

    pub fn spec(&self, position: usize) -> &KineticSpec {
        &self.specs[position]
    }

    pub fn specs(&self) -> &[KineticSpec] {
        &self.specs
    }
}

/// Kernel data of one block `I^Z_{XY} : H_{Y/Z} → H_{X/Z}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// Multiplication by a real array over `H_{X/Z}` (requires `X = Y`).
    Potential { values: Vec<f64> },
    /// `u ↦ (B u) ⊗ θ` with `θ ∈ H_{X/Y}` and an optional operator `B` on
    /// `H_{Y/Z}` (identity when absent). Requires `Z ⊆ Y ⊊ X`.
    Creation {
        theta: Vec<Complex64>,
        base: Option<CooMatrix>,
    },
    /// Explicit matrix on the reduced spaces, `dim H_{X/Z} × dim H_{Y/Z}`.
    Dense { matrix: CooMatrix },
    /// Explicit matrix on the full sectors, `dim H_X × dim H_Y`. Accepted
    /// when it commutes with Z-translations; factored into `Dense` when it
    /// is within tolerance of a `1_Z ⊗ I^Z` product, otherwise kept whole
    /// (such a term supports projection but not reduction).
    FullDense { matrix: CooMatrix },
}

/// One declared block of an interaction term.
#[derive(Debug, Clone, PartialEq)]
pub struct TermBlock {
    pub x: SpaceId,
    pub y: SpaceId,
    pub kernel: Kernel,
}

/// An interaction `I(Z) = 1_Z ⊗ I^Z`, stored as a grading label plus the
/// declared blocks. Blocks are stored one-sided; the adjoint side is
/// implied and materialized automatically.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTerm {
    pub z: SpaceId,
    pub blocks: Vec<TermBlock>,
}

/// Validation switches for interaction terms.
#[derive(Debug, Clone, Copy)]
pub struct TermOptions {
    /// Tolerance for the Z-translation-invariance check of full-size dense
    /// kernels, and for their product-form recovery.
    pub z_invariance_tol: f64,
    /// Replace a non-invariant full-size kernel by its average over
    /// Z-translates instead of rejecting it.
    pub symmetrize: bool,
    /// Tolerance for the Hermitian-closure check when both orientations of
    /// a block are declared.
    pub hermitian_tol: f64,
}

impl Default for TermOptions {
    fn default() -> Self {
        TermOptions {
            z_invariance_tol: 1e-10,
            symmetrize: false,
            hermitian_tol: 1e-12,
        }
    }
}

impl InteractionTerm {
    pub fn new(z: SpaceId, blocks: Vec<TermBlock>) -> Self {
        InteractionTerm { z, blocks }
    }

    /// A single potential block: multiplication by `v ∘ π_Z` on sector `X`.
    pub fn potential(z: SpaceId, x: SpaceId, values: Vec<f64>) -> Self {
        InteractionTerm::new(
            z,
            vec![TermBlock {
                x,
                y: x,
                kernel: Kernel::Potential { values },
            }],
        )
    }

    /// A creation coupling `a*(θ) : H_Y → H_X` graded at `Z = Y`.
    pub fn creation(x: SpaceId, y: SpaceId, theta: Vec<Complex64>) -> Self {
        InteractionTerm::new(
            y,
            vec![TermBlock {
                x,
                y,
                kernel: Kernel::Creation { theta, base: None },
            }],
        )
    }

    /// Checks the support rule, block shapes, Hermitian closure and the
    /// invariance of full-size kernels; returns the canonicalized term.
    pub fn validated(mut self, space: &StateSpace, opts: &TermOptions) -> Result<InteractionTerm> {
        let grid = space.grid();
        let z = self.z;
        if !space.lattice().contains(z) {
            return Err(Error::NotAMember(grid.label(z)));
        }
        for block in &mut self.blocks {
            let (x, y) = (block.x, block.y);
            for s in [x, y] {
                if !space.lattice().contains(s) {
                    return Err(Error::NotAMember(grid.label(s)));
                }
            }
            if !z.is_subset_of(x.meet(y)) {
                return Err(Error::SupportViolation {
                    z: grid.label(z),
                    x: grid.label(x),
                    y: grid.label(y),
                });
            }
            block.kernel =
                check_kernel(space, z, x, y, std::mem::replace(&mut block.kernel, Kernel::Potential { values: vec![] }), opts)?;
        }
        // Hermitian closure: duplicate orientations must be adjoint pairs;
        // keep the canonical side only.
        let mut keep: Vec<TermBlock> = Vec::with_capacity(self.blocks.len());
        for block in self.blocks.into_iter() {
            if let Some(previous) = keep
                .iter()
                .find(|b| (b.x, b.y) == (block.y, block.x) && block.x != block.y)
            {
                let a = materialize_reduced(space, z, previous.x, previous.y, &previous.kernel)?;
                let b = materialize_reduced(space, z, block.x, block.y, &block.kernel)?;
                let deviation = a.adjoint().max_abs_diff(&b);
                let scale = a.max_abs().max(1.0);
                if deviation > opts.hermitian_tol * scale {
                    return Err(Error::HermitianClosureViolation {
                        x: grid.label(block.x),
                        y: grid.label(block.y),
                        deviation,
                    });
                }
                continue;
            }
            if keep
                .iter()
                .any(|b| (b.x, b.y) == (block.x, block.y))
            {
                return Err(Error::Validation {
                    field: "interactions.blocks".into(),
                    message: format!(
                        "duplicate block ({},{})",
                        grid.label(block.x),
                        grid.label(block.y)
                    ),
                });
            }
            keep.push(block);
        }
        // Diagonal blocks must be Hermitian on their own.
        for block in &keep {
            if block.x == block.y {
                let m = materialize_reduced(space, z, block.x, block.y, &block.kernel)?;
                let deviation = m.hermitian_deviation();
                if deviation > opts.hermitian_tol * m.max_abs().max(1.0) {
                    return Err(Error::HermitianClosureViolation {
                        x: grid.label(block.x),
                        y: grid.label(block.y),
                        deviation,
                    });
                }
            }
        }
        Ok(InteractionTerm { z, blocks: keep })
    }

    /// Relabels the term through the quotient by `x0 ⊆ z`: the grading label
    /// becomes `Z/X0` and block spaces `X/X0`, `Y/X0`; kernels are untouched
    /// because `(Y/X0)/(Z/X0) = Y/Z` as axis sets.
    pub(crate) fn relabel_quotient(&self, x0: SpaceId) -> Result<InteractionTerm> {
        debug_assert!(x0.is_subset_of(self.z));
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                if matches!(b.kernel, Kernel::FullDense { .. }) {
                    return Err(Error::NonFactorizableTerm {
                        z: format!("{:?}", self.z),
                        x: format!("{:?}", b.x),
                        y: format!("{:?}", b.y),
                        quotient: format!("{x0:?}"),
                    });
                }
                Ok(TermBlock {
                    x: b.x.diff(x0),
                    y: b.y.diff(x0),
                    kernel: b.kernel.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InteractionTerm {
            z: self.z.diff(x0),
            blocks,
        })
    }
}

/// Multiplication operator on `H_X` by `v ∘ π_Z`, i.e. `1_Z ⊗ diag(v)`
/// under the tensor split of `X` over `Z ⊆ X`.
pub fn potential_block(
    space: &StateSpace,
    x: SpaceId,
    z: SpaceId,
    values: &[f64],
) -> Result<CooMatrix> {
    if !z.is_subset_of(x) {
        return Err(Error::NotASubspace(
            space.grid().label(z),
            space.grid().label(x),
        ));
    }
    let split = space.tensor_split(x, z)?;
    if values.len() != split.dim_quot {
        return Err(Error::DimensionMismatch {
            expected: split.dim_quot,
            got: values.len(),
        });
    }
    let diag = CooMatrix::from_real_diag(values);
    let lifted = CooMatrix::identity(split.dim_base).kron(&diag);
    Ok(split.lift(&lifted, &split))
}

/// The creation operator `a*(θ) : H_Y → H_X`, `u ↦ u ⊗ θ` with
/// `θ ∈ H_{X/Y}` and `Y ⊊ X`.
pub fn creation_block(
    space: &StateSpace,
    x: SpaceId,
    y: SpaceId,
    theta: &[Complex64],
) -> Result<CooMatrix> {
    if !y.is_strict_subset_of(x) {
        return Err(Error::NotAStrictSubspace(
            space.grid().label(y),
            space.grid().label(x),
        ));
    }
    let split = space.tensor_split(x, y)?;
    if theta.len() != split.dim_quot {
        return Err(Error::DimensionMismatch {
            expected: split.dim_quot,
            got: theta.len(),
        });
    }
    let mut list = Vec::with_capacity(split.dim_base * theta.len());
    for j in 0..split.dim_base {
        for (t, &v) in theta.iter().enumerate() {
            list.push((split.merge(j, t) as u32, j as u32, v));
        }
    }
    Ok(CooMatrix::from_entries(
        space.grid().sector_dim(x),
        space.grid().sector_dim(y),
        list,
    ))
}

fn check_kernel(
    space: &StateSpace,
    z: SpaceId,
    x: SpaceId,
    y: SpaceId,
    kernel: Kernel,
    opts: &TermOptions,
) -> Result<Kernel> {
    let grid = space.grid();
    let n = grid.points_per_axis;
    let dim = |s: SpaceId| n.pow(s.rank() as u32);
    match kernel {
        Kernel::Potential { values } => {
            if x != y {
                return Err(Error::Validation {
                    field: "interactions.blocks".into(),
                    message: "potential kernels require X = Y".into(),
                });
            }
            let expected = dim(x.diff(z));
            if values.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    got: values.len(),
                });
            }
            Ok(Kernel::Potential { values })
        }
        Kernel::Creation { theta, base } => {
            if !y.is_strict_subset_of(x) {
                return Err(Error::NotAStrictSubspace(grid.label(y), grid.label(x)));
            }
            let expected = dim(x.diff(y));
            if theta.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    got: theta.len(),
                });
            }
            if let Some(b) = &base {
                let want = dim(y.diff(z));
                if b.nrows() != want || b.ncols() != want {
                    return Err(Error::DimensionMismatch {
                        expected: want,
                        got: b.nrows(),
                    });
                }
            }
            Ok(Kernel::Creation { theta, base })
        }
        Kernel::Dense { matrix } => {
            let (rows, cols) = (dim(x.diff(z)), dim(y.diff(z)));
            if matrix.nrows() != rows || matrix.ncols() != cols {
                return Err(Error::DimensionMismatch {
                    expected: rows * cols,
                    got: matrix.nrows() * matrix.ncols(),
                });
            }
            Ok(Kernel::Dense { matrix })
        }
        Kernel::FullDense { matrix } => {
            let (rows, cols) = (dim(x), dim(y));
            if matrix.nrows() != rows || matrix.ncols() != cols {
                return Err(Error::DimensionMismatch {
                    expected: rows * cols,
                    got: matrix.nrows() * matrix.ncols(),
                });
            }
            factor_full_kernel(space, z, x, y, matrix, opts)
        }
    }
}

/// Averages a full-size kernel over Z-translates, enforces invariance and
/// attempts the `1_Z ⊗ I^Z` product recovery.
fn factor_full_kernel(
    space: &StateSpace,
    z: SpaceId,
    x: SpaceId,
    y: SpaceId,
    matrix: CooMatrix,
    opts: &TermOptions,
) -> Result<Kernel> {
    let grid = space.grid();
    let n = grid.points_per_axis;
    let z_axes: Vec<usize> = z.axes().collect();
    let z_points = n.pow(z_axes.len() as u32);

    // average over the Z-translation orbit
    let mut accum = CooMatrix::zeros(matrix.nrows(), matrix.ncols());
    let mut shift = vec![0i64; grid.axes.len()];
    for flat in 0..z_points {
        let mut rem = flat;
        for i in (0..z_axes.len()).rev() {
            shift[z_axes[i]] = (rem % n) as i64;
            rem /= n;
        }
        let ux = space.translate(x, &shift);
        let uy = space.translate(y, &shift);
        // (U_x M U_y^*)[r, c] = M[im_x[r], im_y[c]]
        let (inv_x, inv_y) = match (&ux, &uy) {
            (
                crate::hspace::GridUnitary::Permutation { image: ix },
                crate::hspace::GridUnitary::Permutation { image: iy },
            ) => {
                let mut inv_x = vec![0usize; ix.len()];
                for (r, &c) in ix.iter().enumerate() {
                    inv_x[c] = r;
                }
                let mut inv_y = vec![0usize; iy.len()];
                for (r, &c) in iy.iter().enumerate() {
                    inv_y[c] = r;
                }
                (inv_x, inv_y)
            }
            _ => unreachable!("translations are permutations"),
        };
        accum = accum.add(&matrix.remap(matrix.nrows(), matrix.ncols(), &inv_x, &inv_y));
    }
    let average = accum.scale(Complex64::new(1.0 / z_points as f64, 0.0));
    let deviation = matrix.max_abs_diff(&average);
    let scale = matrix.max_abs().max(1.0);
    let invariant = if deviation <= opts.z_invariance_tol * scale {
        matrix
    } else if opts.symmetrize {
        average
    } else {
        return Err(Error::NotZInvariant {
            z: grid.label(z),
            x: grid.label(x),
            y: grid.label(y),
            deviation,
        });
    };

    // product recovery: I^Z[i,j] = mean over p of M[(p,i),(p,j)]
    let split_x = space.tensor_split(x, z)?;
    let split_y = space.tensor_split(y, z)?;
    let mut reduced = nalgebra::DMatrix::<Complex64>::zeros(split_x.dim_quot, split_y.dim_quot);
    let dense = invariant.to_dense();
    for p in 0..z_points {
        for i in 0..split_x.dim_quot {
            for j in 0..split_y.dim_quot {
                reduced[(i, j)] += dense[(split_x.merge(p, i), split_y.merge(p, j))];
            }
        }
    }
    reduced /= Complex64::new(z_points as f64, 0.0);
    let candidate = CooMatrix::from_dense(&reduced);
    let lifted = lift_reduced(space, z, x, y, &candidate)?;
    if invariant.max_abs_diff(&lifted) <= opts.z_invariance_tol * scale {
        Ok(Kernel::Dense { matrix: candidate })
    } else {
        Ok(Kernel::FullDense { matrix: invariant })
    }
}

/// Materializes the reduced kernel matrix `I^Z_{XY} : H_{Y/Z} → H_{X/Z}`.
fn materialize_reduced(
    space: &StateSpace,
    z: SpaceId,
    x: SpaceId,
    y: SpaceId,
    kernel: &Kernel,
) -> Result<CooMatrix> {
    let grid = space.grid();
    let n = grid.points_per_axis;
    let dim = |s: SpaceId| n.pow(s.rank() as u32);
    match kernel {
        Kernel::Potential { values } => Ok(CooMatrix::from_real_diag(values)),
        Kernel::Creation { theta, base } => {
            // creation on the reduced spaces: H_{Y/Z} → H_{X/Z} = H_{Y/Z} ⊗ H_{X/Y}
            let xz = x.diff(z);
            let yz = y.diff(z);
            let split = crate::hspace::StateSpace::new(
                grid.clone(),
                crate::semilattice::Semilattice::new([xz]),
            )
            .tensor_split(xz, yz)?;
            let mut list = Vec::with_capacity(split.dim_base * theta.len());
            for j in 0..split.dim_base {
                for (t, &v) in theta.iter().enumerate() {
                    list.push((split.merge(j, t) as u32, j as u32, v));
                }
            }
            let raw = CooMatrix::from_entries(dim(xz), dim(yz), list);
            Ok(match base {
                Some(b) => raw.matmul(b),
                None => raw,
            })
        }
        Kernel::Dense { matrix } => Ok(matrix.clone()),
        Kernel::FullDense { .. } => Err(Error::NonFactorizableTerm {
            z: grid.label(z),
            x: grid.label(x),
            y: grid.label(y),
            quotient: grid.label(z),
        }),
    }
}

/// Lifts a reduced kernel to the full sector block `1_Z ⊗ I^Z`.
fn lift_reduced(
    space: &StateSpace,
    z: SpaceId,
    x: SpaceId,
    y: SpaceId,
    reduced: &CooMatrix,
) -> Result<CooMatrix> {
    let split_x = space.tensor_split(x, z)?;
    let split_y = space.tensor_split(y, z)?;
    let kron = CooMatrix::identity(split_x.dim_base).kron(reduced);
    Ok(kron.remap(
        space.grid().sector_dim(x),
        space.grid().sector_dim(y),
        split_x.merge_table(),
        split_y.merge_table(),
    ))
}

/// Materializes the full-space block of one term block, `1_Z ⊗ I^Z_{XY}`.
pub fn term_block_matrix(
    space: &StateSpace,
    z: SpaceId,
    block: &TermBlock,
) -> Result<CooMatrix> {
    match &block.kernel {
        Kernel::FullDense { matrix } => Ok(matrix.clone()),
        _ => {
            let reduced = materialize_reduced(space, z, block.x, block.y, &block.kernel)?;
            lift_reduced(space, z, block.x, block.y, &reduced)
        }
    }
}

/// The declarative decomposition `H = K + Σ_Z I(Z)` carried by assembled
/// operators; the graded projections act on this, never on raw matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub kinetic: KineticTable,
    pub terms: Vec<InteractionTerm>,
}

/// A Hermitian operator on `H_S` stored as a sparse block matrix over the
/// sector table, optionally with its term decomposition.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    space: Arc<StateSpace>,
    blocks: BTreeMap<(usize, usize), CooMatrix>,
    hermitian: bool,
    decomp: Option<Arc<Decomposition>>,
}

impl BlockOperator {
    pub fn zero(space: &Arc<StateSpace>) -> Self {
        BlockOperator {
            space: Arc::clone(space),
            blocks: BTreeMap::new(),
            hermitian: true,
            decomp: None,
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        self.decomp.as_deref()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &CooMatrix)> {
        self.blocks.iter()
    }

    pub fn block(&self, row_sector: usize, col_sector: usize) -> Option<&CooMatrix> {
        self.blocks.get(&(row_sector, col_sector))
    }

    pub fn block_by_space(&self, x: SpaceId, y: SpaceId) -> Option<&CooMatrix> {
        let ix = self.space.sector_position(x).ok()?;
        let iy = self.space.sector_position(y).ok()?;
        self.block(ix, iy)
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub(crate) fn insert(&mut self, row_sector: usize, col_sector: usize, m: CooMatrix) {
        if m.nnz() == 0 {
            return;
        }
        match self.blocks.remove(&(row_sector, col_sector)) {
            Some(old) => {
                let sum = old.add(&m);
                if sum.nnz() > 0 {
                    self.blocks.insert((row_sector, col_sector), sum);
                }
            }
            None => {
                self.blocks.insert((row_sector, col_sector), m);
            }
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.total_dim());
        let sectors = self.space.sectors();
        let mut y = vec![Complex64::new(0.0, 0.0); self.total_dim()];
        for (&(bx, by), m) in &self.blocks {
            let (rx, cy) = (sectors[bx], sectors[by]);
            let src = &x[cy.offset..cy.offset + cy.dim];
            let dst = &mut y[rx.offset..rx.offset + rx.dim];
            m.matvec(src, dst);
        }
        y
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.space().as_ref() != self.space.as_ref() {
            return Err(Error::SectorTableMismatch);
        }
        StateVector::from_coeffs(&self.space, self.matvec(v.coeffs()))
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let sectors = self.space.sectors();
        let mut dense = nalgebra::DMatrix::zeros(self.total_dim(), self.total_dim());
        for (&(bx, by), m) in &self.blocks {
            let (rx, cy) = (sectors[bx], sectors[by]);
            for &(r, c, v) in m.entries() {
                dense[(rx.offset + r as usize, cy.offset + c as usize)] += v;
            }
        }
        dense
    }

    /// Max-norm deviation from Hermitian symmetry across all blocks.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (&(bx, by), m) in &self.blocks {
            let other = match self.blocks.get(&(by, bx)) {
                Some(o) => o.adjoint(),
                None => CooMatrix::zeros(m.nrows(), m.ncols()),
            };
            worst = worst.max(m.max_abs_diff(&other));
        }
        worst
    }

    /// Blockwise max-norm of `self − other`.
    pub fn max_norm_diff(&self, other: &BlockOperator) -> Result<f64> {
        if self.space.as_ref() != other.space.as_ref() {
            return Err(Error::SectorTableMismatch);
        }
        let mut worst = 0.0f64;
        let keys: std::collections::BTreeSet<(usize, usize)> = self
            .blocks
            .keys()
            .chain(other.blocks.keys())
            .copied()
            .collect();
        for key in keys {
            let sectors = self.space.sectors();
            let shape = (sectors[key.0].dim, sectors[key.1].dim);
            let zero = CooMatrix::zeros(shape.0, shape.1);
            let a = self.blocks.get(&key).unwrap_or(&zero);
            let b = other.blocks.get(&key).unwrap_or(&zero);
            worst = worst.max(a.max_abs_diff(b));
        }
        Ok(worst)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.values().map(|m| m.max_abs()).fold(0.0, f64::max)
    }

    /// Entrywise linear combination `self + factor · other`; drops any term
    /// decomposition (the result is a plain matrix).
    pub fn axpy(&self, factor: Complex64, other: &BlockOperator) -> Result<BlockOperator> {
        if self.space.as_ref() != other.space.as_ref() {
            return Err(Error::SectorTableMismatch);
        }
        let mut out = BlockOperator::zero(&self.space);
        out.hermitian = self.hermitian && other.hermitian && factor.im == 0.0;
        for (&k, m) in &self.blocks {
            out.insert(k.0, k.1, m.clone());
        }
        for (&k, m) in &other.blocks {
            out.insert(k.0, k.1, m.scale(factor));
        }
        Ok(out)
    }

    /// COO triplet text dump: `row,col,re,im` lines in canonical order,
    /// using global (concatenated) indices.
    pub fn write_coo_text(&self, out: &mut String) {
        use std::fmt::Write as _;
        let sectors = self.space.sectors();
        let mut triplets = Vec::new();
        for (&(bx, by), m) in &self.blocks {
            for &(r, c, v) in m.entries() {
                triplets.push((
                    sectors[bx].offset + r as usize,
                    sectors[by].offset + c as usize,
                    v,
                ));
            }
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        for (r, c, v) in triplets {
            let _ = writeln!(out, "{r},{c},{:?},{:?}", v.re, v.im);
        }
    }

    pub(crate) fn with_decomposition(mut self, decomp: Decomposition) -> Self {
        self.decomp = Some(Arc::new(decomp));
        self
    }
}

/// The block-diagonal kinetic operator `K = ⊕_X K_X`. Carries a
/// decomposition with no interaction terms, so it supports the graded
/// projections directly.
pub fn kinetic(table: &KineticTable, space: &Arc<StateSpace>) -> Result<BlockOperator> {
    table.check(space)?;
    let n = space.grid().points_per_axis;
    let mut op = BlockOperator::zero(space);
    for (idx, sector) in space.sectors().iter().enumerate() {
        op.insert(idx, idx, table.spec(idx).position_block(sector.space, n));
    }
    Ok(op.with_decomposition(Decomposition {
        kinetic: table.clone(),
        terms: Vec::new(),
    }))
}

/// Materializes one interaction term as a Hermitian block operator.
pub fn interaction(term: &InteractionTerm, space: &Arc<StateSpace>) -> Result<BlockOperator> {
    interaction_with(term, space, &TermOptions::default())
}

pub fn interaction_with(
    term: &InteractionTerm,
    space: &Arc<StateSpace>,
    opts: &TermOptions,
) -> Result<BlockOperator> {
    let term = term.clone().validated(space, opts)?;
    let mut op = BlockOperator::zero(space);
    add_term_blocks(&mut op, &term, space)?;
    Ok(op)
}

fn add_term_blocks(
    op: &mut BlockOperator,
    term: &InteractionTerm,
    space: &Arc<StateSpace>,
) -> Result<()> {
    for block in &term.blocks {
        let m = term_block_matrix(space, term.z, block)?;
        let ix = space.sector_position(block.x)?;
        let iy = space.sector_position(block.y)?;
        if ix == iy {
            op.insert(ix, iy, m);
        } else {
            op.insert(iy, ix, m.adjoint());
            op.insert(ix, iy, m);
        }
    }
    Ok(())
}

/// Assembles `H = K + Σ_Z I(Z)` and stores the decomposition for grading.
pub fn assemble(
    table: &KineticTable,
    terms: Vec<InteractionTerm>,
    space: &Arc<StateSpace>,
) -> Result<BlockOperator> {
    assemble_with(table, terms, space, &TermOptions::default())
}

pub fn assemble_with(
    table: &KineticTable,
    terms: Vec<InteractionTerm>,
    space: &Arc<StateSpace>,
    opts: &TermOptions,
) -> Result<BlockOperator> {
    let mut op = kinetic(table, space)?;
    let mut validated = Vec::with_capacity(terms.len());
    for term in terms {
        let term = term.validated(space, opts)?;
        add_term_blocks(&mut op, &term, space)?;
        validated.push(term);
    }
    Ok(op.with_decomposition(Decomposition {
        kinetic: table.clone(),
        terms: validated,
    }))
}

/// Pauli-Fierz Hamiltonian `K + φ(θ)`: one creation block per comparable
/// pair, adjoints below the diagonal, zero blocks elsewhere. Each creation
/// coupling is graded at `Z = Y` (its maximal support).
pub fn pauli_fierz(
    table: &KineticTable,
    thetas: &[(SpaceId, SpaceId, Vec<Complex64>)],
    space: &Arc<StateSpace>,
) -> Result<BlockOperator> {
    let terms = thetas
        .iter()
        .map(|(x, y, theta)| InteractionTerm::creation(*x, *y, theta.clone()))
        .collect();
    assemble(table, terms, space)
}

/// The bare field operator `φ(θ)` without kinetic part.
pub fn field_operator(
    thetas: &[(SpaceId, SpaceId, Vec<Complex64>)],
    space: &Arc<StateSpace>,
) -> Result<BlockOperator> {
    let mut op = BlockOperator::zero(space);
    for (x, y, theta) in thetas {
        let term = InteractionTerm::creation(*x, *y, theta.clone())
            .validated(space, &TermOptions::default())?;
        add_term_blocks(&mut op, &term, space)?;
    }
    Ok(op)
}

/// Max-norm of `block · (V_k − 1)` per stored block: the gauge-decay
/// diagnostic recorded for small frequencies. Exactly zero at `k = 0`.
pub fn modulation_decay_diagnostic(
    op: &BlockOperator,
    k: &[i64],
) -> Vec<((SpaceId, SpaceId), f64)> {
    let space = op.space().clone();
    let sectors = space.sectors();
    op.blocks()
        .map(|(&(bx, by), m)| {
            let vk = space.modulate(sectors[by].space, k).to_coo();
            let shifted = m.matmul(&vk);
            (
                (sectors[bx].space, sectors[by].space),
                shifted.max_abs_diff(m),
            )
        })
        .collect()
}
