//! Finite meet-semilattices of coordinate subspaces.
//!
//! A [`SpaceId`] is a subset of the global axis universe; the empty set is
//! the trivial space `O` (the vacuum sector's configuration space). A
//! [`Semilattice`] is a finite, meet-closed family of such subsets ordered
//! by inclusion. Meets are axis-set intersections, so meet-closure is a
//! finite check.
//!
//! The cluster lattice of an N-particle system with conserved total mass is
//! exposed as an abstract generator ([`ClusterLattice`]): its elements are
//! partitions of the particle set, ordered so that finer partitions sit
//! higher. It is *not* an axis-subset family (for N = 3 the three pairings
//! would need pairwise-disjoint nonempty axis sets inside a 2-axis top,
//! which is impossible), so it only generates example models through the
//! downset embedding.

use std::fmt;

use crate::error::{Error, Result};

/// A coordinate subspace: a subset of the global axis universe.
///
/// Stored as a bitmask over axis indices, so meets, joins and set
/// differences are single bit operations. The empty set is the trivial
/// space `O`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceId(u64);

/// Maximum number of axes in the universe (bitmask width).
pub const MAX_AXES: usize = 64;

impl SpaceId {
    /// The trivial space `O` (empty axis set).
    pub const VACUUM: SpaceId = SpaceId(0);

    pub fn from_bits(bits: u64) -> Self {
        SpaceId(bits)
    }

    pub fn from_axes<I: IntoIterator<Item = usize>>(axes: I) -> Self {
        let mut bits = 0u64;
        for a in axes {
            assert!(a < MAX_AXES, "axis index {a} out of range");
            bits |= 1 << a;
        }
        SpaceId(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Number of axes (the dimension count of the subspace).
    pub fn rank(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_vacuum(self) -> bool {
        self.0 == 0
    }

    pub fn contains_axis(self, axis: usize) -> bool {
        axis < MAX_AXES && self.0 & (1 << axis) != 0
    }

    pub fn is_subset_of(self, other: SpaceId) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset_of(self, other: SpaceId) -> bool {
        self.is_subset_of(other) && self != other
    }

    /// Greatest lower bound: axis-set intersection.
    pub fn meet(self, other: SpaceId) -> SpaceId {
        SpaceId(self.0 & other.0)
    }

    pub fn union(self, other: SpaceId) -> SpaceId {
        SpaceId(self.0 | other.0)
    }

    /// Set difference; realizes the quotient `self/other` when `other ⊆ self`.
    pub fn diff(self, other: SpaceId) -> SpaceId {
        SpaceId(self.0 & !other.0)
    }

    /// Axis indices in increasing (global) order.
    pub fn axes(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_AXES).filter(move |a| bits & (1 << a) != 0)
    }

    /// Human-readable label using the given axis names.
    pub fn label(self, axis_names: &[String]) -> String {
        if self.is_vacuum() {
            return "O".to_string();
        }
        let parts: Vec<&str> = self
            .axes()
            .map(|a| axis_names.get(a).map(|s| s.as_str()).unwrap_or("?"))
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_vacuum() {
            write!(f, "O")
        } else {
            let idx: Vec<String> = self.axes().map(|a| a.to_string()).collect();
            write!(f, "{{{}}}", idx.join(","))
        }
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Report produced by [`Semilattice::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct SemilatticeReport {
    /// Whether the trivial space `O` is a member.
    pub has_vacuum: bool,
    /// The least element (always present for a valid finite meet-closed family).
    pub least: SpaceId,
    /// Whether every non-minimal member is minorated by an atom. Automatic
    /// for finite families with a least element, reported for completeness.
    pub atomic: bool,
    /// Covers of the least element.
    pub atoms: Vec<SpaceId>,
}

/// A finite meet-closed family of coordinate subspaces, canonically ordered
/// by (rank, bitmask). The order is the sector order of the direct sum.
#[derive(Clone, PartialEq, Eq)]
pub struct Semilattice {
    members: Vec<SpaceId>,
}

impl fmt::Debug for Semilattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

impl Semilattice {
    /// Builds the family from arbitrary members: deduplicates and sorts
    /// canonically. Meet-closure is *not* enforced here; call
    /// [`Semilattice::validate`] for that.
    pub fn new<I: IntoIterator<Item = SpaceId>>(members: I) -> Self {
        let mut members: Vec<SpaceId> = members.into_iter().collect();
        members.sort_by_key(|s| (s.rank(), s.bits()));
        members.dedup();
        Semilattice { members }
    }

    /// Smallest meet-closed family containing `members`.
    pub fn meet_closure<I: IntoIterator<Item = SpaceId>>(members: I) -> Self {
        let mut set: Vec<SpaceId> = members.into_iter().collect();
        set.sort_by_key(|s| (s.rank(), s.bits()));
        set.dedup();
        loop {
            let mut added = false;
            let snapshot = set.clone();
            for (i, &x) in snapshot.iter().enumerate() {
                for &y in &snapshot[i + 1..] {
                    let m = x.meet(y);
                    if !set.contains(&m) {
                        set.push(m);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        Semilattice::new(set)
    }

    pub fn members(&self) -> &[SpaceId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: SpaceId) -> bool {
        self.members.contains(&x)
    }

    pub fn index_of(&self, x: SpaceId) -> Option<usize> {
        self.members.iter().position(|&m| m == x)
    }

    pub fn has_vacuum(&self) -> bool {
        self.contains(SpaceId::VACUUM)
    }

    /// The least element, if one exists. For a meet-closed nonempty family
    /// the meet of everything is a member, so this only fails on families
    /// that are not meet-closed.
    pub fn least(&self) -> Option<SpaceId> {
        let bottom = self
            .members
            .iter()
            .copied()
            .reduce(|a, b| a.meet(b))?;
        self.contains(bottom).then_some(bottom)
    }

    /// Checks meet-closure and reports vacuum membership, the least element
    /// and atomicity.
    pub fn validate(&self) -> Result<SemilatticeReport> {
        self.validate_labeled(None)
    }

    /// Like [`validate`](Self::validate) but error messages use axis names.
    pub fn validate_labeled(&self, axis_names: Option<&[String]>) -> Result<SemilatticeReport> {
        let lbl = |s: SpaceId| match axis_names {
            Some(names) => s.label(names),
            None => format!("{s:?}"),
        };
        if self.members.is_empty() {
            return Err(Error::NoLeastElement);
        }
        for (i, &x) in self.members.iter().enumerate() {
            for &y in &self.members[i + 1..] {
                let m = x.meet(y);
                if !self.contains(m) {
                    return Err(Error::MeetClosureViolation(lbl(x), lbl(y), lbl(m)));
                }
            }
        }
        let least = self.least().ok_or(Error::NoLeastElement)?;
        let atoms = self.covers_of(least);
        // Finite + least element: every x > least lies above some cover of
        // least, so atomicity can only be reported true. Kept as an explicit
        // check anyway.
        let atomic = self
            .members
            .iter()
            .all(|&x| x == least || atoms.iter().any(|&a| a.is_subset_of(x)));
        Ok(SemilatticeReport {
            has_vacuum: self.has_vacuum(),
            least,
            atomic,
            atoms,
        })
    }

    /// The atoms `P(S)`: covers of the least element.
    pub fn atoms(&self) -> Result<Vec<SpaceId>> {
        let least = self.least().ok_or(Error::NoLeastElement)?;
        Ok(self.covers_of(least))
    }

    /// Covers of `x` inside the family: minimal members strictly above `x`.
    pub fn covers_of(&self, x: SpaceId) -> Vec<SpaceId> {
        self.members
            .iter()
            .copied()
            .filter(|&y| {
                x.is_strict_subset_of(y)
                    && !self
                        .members
                        .iter()
                        .any(|&z| x.is_strict_subset_of(z) && z.is_strict_subset_of(y))
            })
            .collect()
    }

    /// The filter `S_{≥X} = {Y ∈ S | Y ⊇ X}`; a sub-semilattice with least
    /// element `X`.
    pub fn filter_geq(&self, x: SpaceId) -> Result<Semilattice> {
        if !self.contains(x) {
            return Err(Error::NotAMember(format!("{x:?}")));
        }
        Ok(Semilattice::new(
            self.members.iter().copied().filter(|y| x.is_subset_of(*y)),
        ))
    }

    /// The quotient `S/X = { Y\X : Y ∈ S_{≥X} }` together with the bijection
    /// `Y ↔ Y/X` (pairs in canonical member order of the quotient).
    ///
    /// `O ∈ S/X` always, as the image of `X` itself.
    pub fn quotient(&self, x: SpaceId) -> Result<(Semilattice, Vec<(SpaceId, SpaceId)>)> {
        let filter = self.filter_geq(x)?;
        let mut pairs: Vec<(SpaceId, SpaceId)> = filter
            .members()
            .iter()
            .map(|&y| (y, y.diff(x)))
            .collect();
        pairs.sort_by_key(|&(_, q)| (q.rank(), q.bits()));
        let quotient = Semilattice::new(pairs.iter().map(|&(_, q)| q));
        debug_assert_eq!(quotient.len(), pairs.len(), "quotient map must be a bijection");
        Ok((quotient, pairs))
    }
}

/// One partition of the particle set `{1..N}`, viewed as a system of
/// composite particles.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition {
    /// Clusters as sorted, disjoint index blocks covering `0..n`.
    pub blocks: Vec<Vec<usize>>,
    /// Total mass of each cluster, `m_a = Σ_{k∈a} m_k`.
    pub cluster_masses: Vec<f64>,
}

impl ClusterPartition {
    /// Number of clusters `|σ|`.
    pub fn cluster_count(&self) -> usize {
        self.blocks.len()
    }

    /// Dimension of the reduced configuration space for particles moving in
    /// `R^d`: `d · (|σ| − 1)`.
    pub fn config_dim(&self, d: usize) -> usize {
        d * (self.cluster_count() - 1)
    }

    fn block_of(&self, particle: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&particle))
            .expect("partition covers all particles")
    }
}

/// The partition lattice of an N-particle system with conserved total mass,
/// ordered by "finer is larger": the single-cluster partition (the vacuum)
/// is the least element and the all-singletons partition is the top.
#[derive(Debug, Clone)]
pub struct ClusterLattice {
    pub masses: Vec<f64>,
    pub partitions: Vec<ClusterPartition>,
}

/// Enumerates the partition lattice for the given particle masses.
pub fn cluster_semilattice(masses: &[f64]) -> Result<ClusterLattice> {
    let n = masses.len();
    if n < 2 {
        return Err(Error::TooFewParticles(n));
    }
    let mut partitions = Vec::new();
    // Restricted-growth strings: rgs[i] = cluster id of particle i, with
    // rgs[i] <= 1 + max(rgs[..i]).
    let mut rgs = vec![0usize; n];
    enumerate_rgs(&mut rgs, 1, 1, &mut |assignment| {
        let k = assignment.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); k];
        for (particle, &cluster) in assignment.iter().enumerate() {
            blocks[cluster].push(particle);
        }
        let cluster_masses = blocks
            .iter()
            .map(|b| b.iter().map(|&p| masses[p]).sum())
            .collect();
        partitions.push(ClusterPartition {
            blocks,
            cluster_masses,
        });
    });
    // Coarser (fewer clusters) first; the single cluster is the minimum.
    partitions.sort_by(|a, b| {
        (a.cluster_count(), &a.blocks).cmp(&(b.cluster_count(), &b.blocks))
    });
    Ok(ClusterLattice {
        masses: masses.to_vec(),
        partitions,
    })
}

fn enumerate_rgs(rgs: &mut Vec<usize>, pos: usize, used: usize, emit: &mut impl FnMut(&[usize])) {
    if pos == rgs.len() {
        emit(rgs);
        return;
    }
    for c in 0..=used {
        rgs[pos] = c;
        enumerate_rgs(rgs, pos + 1, used.max(c + 1), emit);
    }
    rgs[pos] = 0;
}

impl ClusterLattice {
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// `σ ≤ τ` iff `τ` is finer than `σ` (every cluster of `τ` is contained
    /// in a cluster of `σ`).
    pub fn leq(&self, sigma: usize, tau: usize) -> bool {
        let s = &self.partitions[sigma];
        let t = &self.partitions[tau];
        t.blocks.iter().all(|tb| {
            let home = s.block_of(tb[0]);
            tb.iter().all(|&p| s.block_of(p) == home)
        })
    }

    /// Greatest lower bound: the finest common coarsening, computed from the
    /// connected components of the "same cluster in σ or τ" relation.
    pub fn meet(&self, sigma: usize, tau: usize) -> usize {
        let n = self.masses.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for part in [&self.partitions[sigma], &self.partitions[tau]] {
            for block in &part.blocks {
                for w in block.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            match roots.iter().position(|&x| x == r) {
                Some(j) => blocks[j].push(i),
                None => {
                    roots.push(r);
                    blocks.push(vec![i]);
                }
            }
        }
        blocks.sort();
        self.partitions
            .iter()
            .position(|p| p.blocks == blocks)
            .expect("meet of two partitions is a partition")
    }

    /// Index of the least element (single cluster).
    pub fn min_index(&self) -> usize {
        0
    }

    /// Atoms: partitions covering the single-cluster minimum, i.e. the
    /// two-cluster partitions.
    pub fn atoms(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.partitions[i].cluster_count() == 2)
            .collect()
    }

    /// Realizes the lattice as an axis-subset semilattice via the downset
    /// embedding `σ ↦ {τ ≠ min : τ ≤ σ}` (one synthetic axis per non-minimal
    /// partition). Order and meets are preserved exactly; the physical
    /// dimension `d·(|σ|−1)` stays an annotation, not the axis count.
    ///
    /// Returns the axis names, the semilattice and the member corresponding
    /// to each partition (indexed like `self.partitions`).
    pub fn coordinate_realization(&self) -> (Vec<String>, Semilattice, Vec<SpaceId>) {
        let nontrivial: Vec<usize> = (1..self.len()).collect();
        let axis_names: Vec<String> = nontrivial
            .iter()
            .map(|&i| format!("p{i}"))
            .collect();
        let spaces: Vec<SpaceId> = (0..self.len())
            .map(|sigma| {
                SpaceId::from_axes(
                    nontrivial
                        .iter()
                        .enumerate()
                        .filter(|&(_, &tau)| self.leq(tau, sigma))
                        .map(|(axis, _)| axis),
                )
            })
            .collect();
        let lattice = Semilattice::new(spaces.iter().copied());
        (axis_names, lattice, spaces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(axes: &[usize]) -> SpaceId {
        SpaceId::from_axes(axes.iter().copied())
    }

    #[test]
    fn meet_is_intersection() {
        // {x1,x2} ∧ {x2,x3} = {x2}
        assert_eq!(s(&[0, 1]).meet(s(&[1, 2])), s(&[1]));
        // idempotence and the absorbing vacuum
        let x = s(&[0, 2]);
        assert_eq!(x.meet(x), x);
        assert_eq!(x.meet(SpaceId::VACUUM), SpaceId::VACUUM);
    }

    #[test]
    fn validate_reports_atoms() {
        let lat = Semilattice::new([SpaceId::VACUUM, s(&[0]), s(&[1])]);
        let report = lat.validate().unwrap();
        assert!(report.has_vacuum);
        assert!(report.atomic);
        assert_eq!(report.atoms, vec![s(&[0]), s(&[1])]);
    }

    #[test]
    fn validate_catches_missing_meet() {
        let lat = Semilattice::new([s(&[0]), s(&[1])]);
        match lat.validate() {
            Err(Error::MeetClosureViolation(x, y, m)) => {
                assert_eq!(x, "{0}");
                assert_eq!(y, "{1}");
                assert_eq!(m, "O");
            }
            other => panic!("expected MeetClosureViolation, got {other:?}"),
        }
    }

    #[test]
    fn chain_has_single_atom() {
        let lat = Semilattice::new([SpaceId::VACUUM, s(&[0]), s(&[0, 1])]);
        let report = lat.validate().unwrap();
        assert_eq!(report.atoms, vec![s(&[0])]);
    }

    #[test]
    fn atoms_of_square() {
        let lat = Semilattice::new([SpaceId::VACUUM, s(&[0]), s(&[1]), s(&[0, 1])]);
        assert_eq!(lat.atoms().unwrap(), vec![s(&[0]), s(&[1])]);
        let single = Semilattice::new([SpaceId::VACUUM]);
        assert!(single.atoms().unwrap().is_empty());
        let chain = Semilattice::new([SpaceId::VACUUM, s(&[0]), s(&[0, 1]), s(&[0, 1, 2])]);
        assert_eq!(chain.atoms().unwrap(), vec![s(&[0])]);
    }

    #[test]
    fn filter_geq_examples() {
        let lat = Semilattice::new([SpaceId::VACUUM, s(&[0]), s(&[1]), s(&[0, 1])]);
        let f = lat.filter_geq(s(&[0])).unwrap();
        assert_eq!(f.members(), &[s(&[0]), s(&[0, 1])]);
        let top = lat.filter_geq(s(&[0, 1])).unwrap();
        assert_eq!(top.members(), &[s(&[0, 1])]);
        let all = lat.filter_geq(SpaceId::VACUUM).unwrap();
        assert_eq!(all.members(), lat.members());
        assert!(lat.filter_geq(s(&[2])).is_err());
    }

    #[test]
    fn filter_complement_is_downward_closed() {
        let lat = Semilattice::new([SpaceId::VACUUM, s(&[0]), s(&[1]), s(&[0, 1]), s(&[2]), s(&[0, 2])]);
        for &x in lat.members() {
            let filter = lat.filter_geq(x).unwrap();
            // filter is meet-closed and upward closed
            filter.validate().unwrap();
            for &a in filter.members() {
                for &b in lat.members() {
                    if a.is_subset_of(b) {
                        assert!(filter.contains(b), "upward closure fails at {a:?} ⊆ {b:?}");
                    }
                }
            }
            // complement T' = S \ T is an ideal (downward closed)
            for &a in lat.members() {
                if !filter.contains(a) {
                    for &b in lat.members() {
                        if b.is_subset_of(a) {
                            assert!(!filter.contains(b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let lat = Semilattice::new([SpaceId::VACUUM, s(&[0]), s(&[1]), s(&[0, 1])]);
        let (q, map) = lat.quotient(s(&[0])).unwrap();
        assert_eq!(q.members(), &[SpaceId::VACUUM, s(&[1])]);
        assert_eq!(map, vec![(s(&[0]), SpaceId::VACUUM), (s(&[0, 1]), s(&[1]))]);

        // quotient by the maximal element is {O}
        let (qtop, _) = lat.quotient(s(&[0, 1])).unwrap();
        assert_eq!(qtop.members(), &[SpaceId::VACUUM]);

        // quotient by O is S itself
        let (qo, _) = lat.quotient(SpaceId::VACUUM).unwrap();
        assert_eq!(qo.members(), lat.members());
    }

    #[test]
    fn quotient_is_transitive() {
        // (S/X)/(Y/X) = S/Y for X ⊆ Y, as axis-set identity
        let lat = Semilattice::meet_closure([
            SpaceId::VACUUM,
            s(&[0]),
            s(&[0, 1]),
            s(&[0, 1, 2]),
            s(&[0, 2]),
        ]);
        let x = s(&[0]);
        let y = s(&[0, 1]);
        let (sx, _) = lat.quotient(x).unwrap();
        let (sxy, _) = sx.quotient(y.diff(x)).unwrap();
        let (sy, _) = lat.quotient(y).unwrap();
        assert_eq!(sxy.members(), sy.members());
    }

    #[test]
    fn covers_in_filter_are_covers_of_x() {
        let lat = Semilattice::meet_closure([
            SpaceId::VACUUM,
            s(&[0]),
            s(&[1]),
            s(&[0, 1]),
            s(&[0, 1, 2]),
        ]);
        for &x in lat.members() {
            let filter = lat.filter_geq(x).unwrap();
            assert_eq!(filter.atoms().unwrap(), lat.covers_of(x));
        }
    }

    #[test]
    fn cluster_lattice_small() {
        let two = cluster_semilattice(&[1.0, 2.0]).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two.partitions[0].cluster_count(), 1);
        assert!((two.partitions[0].cluster_masses[0] - 3.0).abs() < 1e-15);

        let three = cluster_semilattice(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(three.len(), 5);
        let atoms = three.atoms();
        assert_eq!(atoms.len(), 3);
        for &a in &atoms {
            assert_eq!(three.partitions[a].cluster_count(), 2);
        }
        assert!(cluster_semilattice(&[1.0]).is_err());
    }

    #[test]
    fn cluster_count_matches_brute_force() {
        // Independent count: partitions of {0..n} by exhaustive assignment
        // of cluster labels, canonicalized as restricted-growth strings.
        fn bell_brute(n: usize) -> usize {
            let mut seen = std::collections::BTreeSet::new();
            let total = (n as u32).pow(n as u32);
            for code in 0..total {
                let mut labels = Vec::with_capacity(n);
                let mut c = code;
                for _ in 0..n {
                    labels.push(c % n as u32);
                    c /= n as u32;
                }
                // canonicalize: relabel by first occurrence
                let mut map = std::collections::BTreeMap::new();
                let canon: Vec<u32> = labels
                    .iter()
                    .map(|&l| {
                        let next = map.len() as u32;
                        *map.entry(l).or_insert(next)
                    })
                    .collect();
                seen.insert(canon);
            }
            seen.len()
        }
        for n in 2..=5 {
            let masses = vec![1.0; n];
            assert_eq!(cluster_semilattice(&masses).unwrap().len(), bell_brute(n));
        }
    }

    #[test]
    fn cluster_mass_of_pair() {
        let lat = cluster_semilattice(&[1.0, 1.0]).unwrap();
        let vacuum = &lat.partitions[lat.min_index()];
        assert_eq!(vacuum.blocks, vec![vec![0, 1]]);
        assert!((vacuum.cluster_masses[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cluster_meet_properties() {
        let lat = cluster_semilattice(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        for a in 0..lat.len() {
            assert_eq!(lat.meet(a, a), a);
            for b in 0..lat.len() {
                let m = lat.meet(a, b);
                assert_eq!(m, lat.meet(b, a));
                assert!(lat.leq(m, a) && lat.leq(m, b));
                for c in 0..lat.len() {
                    assert_eq!(lat.meet(lat.meet(a, b), c), lat.meet(a, lat.meet(b, c)));
                }
            }
        }
    }

    #[test]
    fn realization_preserves_order_and_meets() {
        let lat = cluster_semilattice(&[1.0, 1.0, 1.0]).unwrap();
        let (_, axis_lat, spaces) = lat.coordinate_realization();
        axis_lat.validate().unwrap();
        assert_eq!(axis_lat.len(), lat.len());
        for a in 0..lat.len() {
            for b in 0..lat.len() {
                assert_eq!(lat.leq(a, b), spaces[a].is_subset_of(spaces[b]));
                assert_eq!(spaces[lat.meet(a, b)], spaces[a].meet(spaces[b]));
            }
        }
    }
}
