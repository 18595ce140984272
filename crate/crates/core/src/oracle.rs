//! Brute-force ground truth: enumerate every circled-letter array on a small
//! grid and count fixed points and orbits of the D2 action directly.
//!
//! An array is a set partition of the cells (stored as a restricted growth
//! string in row-major order, so relabelling letters never produces a new
//! value) together with a set of circled cells, at most one per block.

use std::env;
use std::fmt;

use crate::egf::GridShape;
use crate::error::{Error, Result};
use crate::exact::Natural;

pub const DEFAULT_ORACLE_LIMIT: usize = 10;

/// Cell limit for the circle-by-circle fixed-point count.
pub const NAIVE_LIMIT: usize = 8;

/// Environment variable overriding [`DEFAULT_ORACLE_LIMIT`].
pub const ORACLE_LIMIT_ENV: &str = "WORDREP_ORACLE_LIMIT";

const MAX_CELLS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimit(usize);

impl OracleLimit {
    pub fn new(cells: usize) -> Result<Self> {
        if cells > MAX_CELLS {
            return Err(Error::OracleLimitTooLarge(cells));
        }
        Ok(OracleLimit(cells))
    }

    /// Reads [`ORACLE_LIMIT_ENV`], falling back to the default when unset.
    pub fn from_env() -> std::result::Result<Self, String> {
        match env::var(ORACLE_LIMIT_ENV) {
            Ok(raw) => {
                let cells: usize = raw
                    .trim()
                    .parse()
                    .map_err(|_| format!("{ORACLE_LIMIT_ENV}={raw:?} is not a cell count"))?;
                OracleLimit::new(cells).map_err(|e| e.to_string())
            }
            Err(_) => Ok(OracleLimit::default()),
        }
    }

    pub fn cells(self) -> usize {
        self.0
    }

    pub fn allows(self, shape: GridShape) -> bool {
        shape.cells() <= self.0
    }

    pub fn check(self, shape: GridShape) -> Result<()> {
        if self.allows(shape) {
            Ok(())
        } else {
            Err(Error::OracleLimit {
                shape,
                cells: shape.cells(),
                limit: self.0,
            })
        }
    }
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit(DEFAULT_ORACLE_LIMIT)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryOp {
    Identity,
    /// `(r, c) -> (m-1-r, c)`
    HorizontalReflect,
    /// `(r, c) -> (r, n-1-c)`
    VerticalReflect,
    Rotate180,
}

impl SymmetryOp {
    pub const ALL: [SymmetryOp; 4] = [
        SymmetryOp::Identity,
        SymmetryOp::HorizontalReflect,
        SymmetryOp::VerticalReflect,
        SymmetryOp::Rotate180,
    ];

    pub const NON_IDENTITY: [SymmetryOp; 3] = [
        SymmetryOp::HorizontalReflect,
        SymmetryOp::VerticalReflect,
        SymmetryOp::Rotate180,
    ];

    fn flips(self) -> (bool, bool) {
        match self {
            SymmetryOp::Identity => (false, false),
            SymmetryOp::HorizontalReflect => (true, false),
            SymmetryOp::VerticalReflect => (false, true),
            SymmetryOp::Rotate180 => (true, true),
        }
    }

    fn from_flips(rows: bool, cols: bool) -> Self {
        match (rows, cols) {
            (false, false) => SymmetryOp::Identity,
            (true, false) => SymmetryOp::HorizontalReflect,
            (false, true) => SymmetryOp::VerticalReflect,
            (true, true) => SymmetryOp::Rotate180,
        }
    }

    pub fn compose(self, other: SymmetryOp) -> SymmetryOp {
        let (a, b) = self.flips();
        let (c, d) = other.flips();
        SymmetryOp::from_flips(a ^ c, b ^ d)
    }

    pub fn apply_cell(self, shape: GridShape, cell: usize) -> usize {
        let (m, n) = (shape.rows(), shape.cols());
        let (mut r, mut c) = (cell / n, cell % n);
        let (flip_rows, flip_cols) = self.flips();
        if flip_rows {
            r = m - 1 - r;
        }
        if flip_cols {
            c = n - 1 - c;
        }
        r * n + c
    }

    /// `map[i]` is the image of cell `i`.
    pub fn cell_map(self, shape: GridShape) -> Vec<usize> {
        (0..shape.cells())
            .map(|i| self.apply_cell(shape, i))
            .collect()
    }
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SymmetryOp::Identity => "identity",
            SymmetryOp::HorizontalReflect => "h",
            SymmetryOp::VerticalReflect => "v",
            SymmetryOp::Rotate180 => "rotate180",
        };
        f.write_str(name)
    }
}

/// The subgroup generated by `ops`, identity first.
pub fn generated_subgroup(ops: &[SymmetryOp]) -> Vec<SymmetryOp> {
    let mut group = vec![SymmetryOp::Identity];
    let mut changed = true;
    while changed {
        changed = false;
        for &g in &group.clone() {
            for &o in ops {
                let h = g.compose(o);
                if !group.contains(&h) {
                    group.push(h);
                    changed = true;
                }
            }
        }
    }
    group
}

/// Relabels so that letters first appear as 0, 1, 2, ... in cell order.
pub fn canonicalize(labels: &[u8]) -> Vec<u8> {
    let mut remap = [u8::MAX; MAX_CELLS];
    let mut next = 0u8;
    labels
        .iter()
        .map(|&l| {
            let slot = &mut remap[l as usize];
            if *slot == u8::MAX {
                *slot = next;
                next += 1;
            }
            *slot
        })
        .collect()
}

fn is_restricted_growth(labels: &[u8]) -> bool {
    let mut bound = 0u8;
    for &l in labels {
        if l > bound {
            return false;
        }
        if l == bound {
            bound += 1;
        }
    }
    true
}

fn block_count(labels: &[u8]) -> usize {
    labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
}

fn blocks_of(labels: &[u8]) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); block_count(labels)];
    for (cell, &l) in labels.iter().enumerate() {
        blocks[l as usize].push(cell);
    }
    blocks
}

fn permute_mask(mask: u64, map: &[usize]) -> u64 {
    let mut out = 0u64;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        out |= 1u64 << map[i];
        rest &= rest - 1;
    }
    out
}

/// Labels of the partition obtained by moving cell `i` to `map[i]`,
/// not yet canonical.
fn moved_labels(labels: &[u8], map: &[usize]) -> Vec<u8> {
    let mut out = vec![0u8; labels.len()];
    for (i, &l) in labels.iter().enumerate() {
        out[map[i]] = l;
    }
    out
}

/// A circled-letter array in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircledPartition {
    shape: GridShape,
    labels: Vec<u8>,
    circled: u64,
}

impl CircledPartition {
    pub fn new(
        shape: GridShape,
        labels: Vec<u8>,
        circled: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if shape.cells() > MAX_CELLS {
            return Err(Error::OracleLimitTooLarge(shape.cells()));
        }
        if labels.len() != shape.cells() || !is_restricted_growth(&labels) {
            return Err(Error::Inconsistent(format!(
                "{labels:?} is not a restricted growth string on {shape}"
            )));
        }
        let mut mask = 0u64;
        let mut used = vec![false; block_count(&labels)];
        for cell in circled {
            if cell >= labels.len() {
                return Err(Error::Inconsistent(format!("cell {cell} outside {shape}")));
            }
            let block = labels[cell] as usize;
            if mask & (1 << cell) == 0 {
                if used[block] {
                    return Err(Error::Inconsistent(format!(
                        "block {block} carries more than one circle"
                    )));
                }
                used[block] = true;
            }
            mask |= 1 << cell;
        }
        Ok(CircledPartition {
            shape,
            labels,
            circled: mask,
        })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn circled_cells(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.circled & (1 << i) != 0)
            .collect()
    }

    pub fn block_count(&self) -> usize {
        block_count(&self.labels)
    }
}

impl fmt::Display for CircledPartition {
    /// Letters `A`, `B`, ... one row per line; circled cells in parentheses.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.shape.cols();
        for (i, &l) in self.labels.iter().enumerate() {
            if i > 0 && i % n == 0 {
                writeln!(f)?;
            }
            let letter = (b'A' + l % 26) as char;
            if self.circled & (1 << i) != 0 {
                write!(f, "({letter})")?;
            } else {
                write!(f, " {letter} ")?;
            }
        }
        Ok(())
    }
}

pub fn act(op: SymmetryOp, a: &CircledPartition) -> CircledPartition {
    let map = op.cell_map(a.shape);
    CircledPartition {
        shape: a.shape,
        labels: canonicalize(&moved_labels(&a.labels, &map)),
        circled: permute_mask(a.circled, &map),
    }
}

/// The least of the four images of `a`.
pub fn canonical_representative(a: &CircledPartition) -> CircledPartition {
    SymmetryOp::ALL
        .iter()
        .map(|&g| act(g, a))
        .min()
        .expect("D2 is non-empty")
}

/// Restricted growth strings of a fixed length in lexicographic order.
#[derive(Debug, Clone)]
pub struct Partitions {
    labels: Vec<u8>,
    started: bool,
    done: bool,
}

impl Partitions {
    fn new(len: usize) -> Self {
        Partitions {
            labels: vec![0; len],
            started: false,
            done: false,
        }
    }
}

impl Iterator for Partitions {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.labels.clone());
        }
        let len = self.labels.len();
        let mut prefix_max = vec![0u8; len];
        for i in 1..len {
            prefix_max[i] = prefix_max[i - 1].max(self.labels[i - 1]);
        }
        for i in (1..len).rev() {
            if self.labels[i] <= prefix_max[i] {
                self.labels[i] += 1;
                for l in &mut self.labels[i + 1..] {
                    *l = 0;
                }
                return Some(self.labels.clone());
            }
        }
        self.done = true;
        None
    }
}

pub fn enumerate_partitions(shape: GridShape, limit: OracleLimit) -> Result<Partitions> {
    limit.check(shape)?;
    Ok(Partitions::new(shape.cells()))
}

/// Number of ways to circle at most one cell per block: the product of
/// `1 + |block|`.
pub fn circled_weight(labels: &[u8]) -> Natural {
    Natural::from(weight(labels))
}

fn weight(labels: &[u8]) -> u64 {
    let mut sizes = [0u64; MAX_CELLS];
    for &l in labels {
        sizes[l as usize] += 1;
    }
    sizes[..block_count(labels)].iter().map(|s| s + 1).product()
}

/// Every admissible circled set for a partition, as cell masks.
fn circle_masks(labels: &[u8]) -> Vec<u64> {
    let mut masks = vec![0u64];
    for block in blocks_of(labels) {
        let mut next = Vec::with_capacity(masks.len() * (block.len() + 1));
        for &m in &masks {
            next.push(m);
            for &cell in &block {
                next.push(m | 1 << cell);
            }
        }
        masks = next;
    }
    masks
}

/// Every circled-letter array on `labels`.
pub fn circled_arrays(
    shape: GridShape,
    labels: &[u8],
) -> impl Iterator<Item = CircledPartition> + '_ {
    circle_masks(labels)
        .into_iter()
        .map(move |circled| CircledPartition {
            shape,
            labels: labels.to_vec(),
            circled,
        })
}

/// Whether moving cells by `map` sends the partition to itself: the induced
/// map on labels must be well defined and injective.
fn partition_fixed(labels: &[u8], map: &[usize]) -> bool {
    let k = block_count(labels);
    let mut image = vec![u8::MAX; k];
    let mut hit = vec![false; k];
    for (i, &l) in labels.iter().enumerate() {
        let target = labels[map[i]];
        let slot = &mut image[l as usize];
        if *slot == u8::MAX {
            if hit[target as usize] {
                return false;
            }
            hit[target as usize] = true;
            *slot = target;
        } else if *slot != target {
            return false;
        }
    }
    true
}

pub fn count_all(shape: GridShape, limit: OracleLimit) -> Result<Natural> {
    let total: u128 = enumerate_partitions(shape, limit)?
        .map(|p| weight(&p) as u128)
        .sum();
    Ok(Natural::from(total))
}

/// Arrays fixed by every op in `ops`, via a product over block orbits of the
/// generated subgroup.
///
/// For a partition fixed by the subgroup, each orbit of blocks is decided by
/// one representative block `B`: its circle, if any, must sit on a cell fixed
/// by every element of the stabilizer of `B`, and the rest of the orbit then
/// follows. So the orbit contributes `1 + #{cells of B fixed by Stab(B)}`,
/// which is `1 + |B|` when the stabilizer is trivial.
pub fn count_fixed(shape: GridShape, ops: &[SymmetryOp], limit: OracleLimit) -> Result<Natural> {
    let group = generated_subgroup(ops);
    let maps: Vec<Vec<usize>> = group.iter().map(|g| g.cell_map(shape)).collect();
    let mut total: u128 = 0;
    for labels in enumerate_partitions(shape, limit)? {
        if !maps.iter().all(|m| partition_fixed(&labels, m)) {
            continue;
        }
        let blocks = blocks_of(&labels);
        let mut seen = vec![false; blocks.len()];
        let mut factor: u128 = 1;
        for (b, cells) in blocks.iter().enumerate() {
            if seen[b] {
                continue;
            }
            let stabilizer: Vec<&Vec<usize>> = maps
                .iter()
                .filter(|m| {
                    let img = labels[m[cells[0]]] as usize;
                    seen[img] = true;
                    img == b
                })
                .collect();
            let free = cells
                .iter()
                .filter(|&&c| stabilizer.iter().all(|m| m[c] == c))
                .count();
            factor *= 1 + free as u128;
        }
        total += factor;
    }
    Ok(Natural::from(total))
}

/// The same count as [`count_fixed`], by listing every circled array and
/// testing it against each op. Refuses shapes above [`NAIVE_LIMIT`] cells.
pub fn count_fixed_naive(shape: GridShape, ops: &[SymmetryOp]) -> Result<Natural> {
    let limit = OracleLimit::new(NAIVE_LIMIT)?;
    let mut total: u64 = 0;
    for labels in enumerate_partitions(shape, limit)? {
        for a in circled_arrays(shape, &labels) {
            if ops.iter().all(|&g| act(g, &a) == a) {
                total += 1;
            }
        }
    }
    Ok(Natural::from(total))
}

/// Number of D2 orbits, counting each array that is the least of its four
/// images.
///
/// Arrays are ordered by labels first, so a partition that is not the least
/// of its own images can be skipped outright; when it is strictly least
/// every circle assignment is a representative.
pub fn count_orbits(shape: GridShape, limit: OracleLimit) -> Result<Natural> {
    let maps: Vec<Vec<usize>> = SymmetryOp::NON_IDENTITY
        .iter()
        .map(|g| g.cell_map(shape))
        .collect();
    let mut total: u128 = 0;
    'partitions: for labels in enumerate_partitions(shape, limit)? {
        let mut ties: Vec<&Vec<usize>> = Vec::new();
        for map in &maps {
            let image = canonicalize(&moved_labels(&labels, map));
            match image.cmp(&labels) {
                std::cmp::Ordering::Less => continue 'partitions,
                std::cmp::Ordering::Equal => ties.push(map),
                std::cmp::Ordering::Greater => {}
            }
        }
        if ties.is_empty() {
            total += weight(&labels) as u128;
        } else {
            total += circle_masks(&labels)
                .into_iter()
                .filter(|&mask| ties.iter().all(|m| mask <= permute_mask(mask, m)))
                .count() as u128;
        }
    }
    Ok(Natural::from(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn shape(m: usize, n: usize) -> GridShape {
        GridShape::new(m, n).unwrap()
    }

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn limit() -> OracleLimit {
        OracleLimit::default()
    }

    use SymmetryOp::*;

    #[test]
    fn partition_counts_are_bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &expected) in bell.iter().enumerate().skip(1) {
            let all: Vec<_> = enumerate_partitions(shape(1, n), limit())
                .unwrap()
                .collect();
            assert_eq!(all.len(), expected, "{n} cells");
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
            assert!(all.iter().all(|p| is_restricted_growth(p)));
        }
    }

    #[test]
    fn enumeration_refuses_above_limit() {
        let err = enumerate_partitions(shape(3, 4), limit()).unwrap_err();
        assert_eq!(
            err,
            Error::OracleLimit {
                shape: shape(3, 4),
                cells: 12,
                limit: 10
            }
        );
        assert!(OracleLimit::new(65).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(circled_weight(&[0, 0]), nat(3));
        assert_eq!(circled_weight(&[0, 1, 2, 3]), nat(16));
        assert_eq!(circled_weight(&[0, 0, 1, 2]), nat(12));
        assert_eq!(circle_masks(&[0, 0, 1, 2]).len(), 12);
    }

    #[test]
    fn cell_maps() {
        let s = shape(2, 3);
        assert_eq!(HorizontalReflect.cell_map(s), vec![3, 4, 5, 0, 1, 2]);
        assert_eq!(VerticalReflect.cell_map(s), vec![2, 1, 0, 5, 4, 3]);
        assert_eq!(Rotate180.cell_map(s), vec![5, 4, 3, 2, 1, 0]);
        assert_eq!(HorizontalReflect.compose(VerticalReflect), Rotate180);
        assert_eq!(
            generated_subgroup(&[HorizontalReflect, VerticalReflect]).len(),
            4
        );
        assert_eq!(generated_subgroup(&[Rotate180]), vec![Identity, Rotate180]);
    }

    #[test]
    fn action_laws() {
        let s = shape(2, 3);
        for labels in enumerate_partitions(s, limit()).unwrap().step_by(7) {
            for a in circled_arrays(s, &labels) {
                assert_eq!(act(Identity, &a), a);
                for g in SymmetryOp::NON_IDENTITY {
                    assert_eq!(act(g, &act(g, &a)), a);
                }
                assert_eq!(
                    act(HorizontalReflect, &act(VerticalReflect, &a)),
                    act(Rotate180, &a)
                );
            }
        }
    }

    #[test]
    fn construction_checks() {
        let s = shape(1, 3);
        assert!(CircledPartition::new(s, vec![0, 0, 1], [0]).is_ok());
        assert!(CircledPartition::new(s, vec![0, 0, 1], [0, 1]).is_err());
        assert!(CircledPartition::new(s, vec![1, 0, 0], []).is_err());
        assert!(CircledPartition::new(s, vec![0, 0], []).is_err());
        let a = CircledPartition::new(s, vec![0, 1, 1], [2]).unwrap();
        assert_eq!(a.circled_cells(), vec![2]);
        assert_eq!(a.block_count(), 2);
        // Reversing 0 1 1 gives 1 1 0, relabelled to 0 0 1.
        let b = act(VerticalReflect, &a);
        assert_eq!(b.labels(), &[0, 0, 1]);
        assert_eq!(b.circled_cells(), vec![0]);
    }

    #[test]
    fn count_all_values() {
        assert_eq!(count_all(shape(1, 1), limit()).unwrap(), nat(2));
        assert_eq!(count_all(shape(2, 1), limit()).unwrap(), nat(7));
        assert_eq!(count_all(shape(2, 3), limit()).unwrap(), nat(5653));
    }

    #[test]
    fn count_fixed_values() {
        assert_eq!(
            count_fixed(shape(2, 1), &[HorizontalReflect], limit()).unwrap(),
            nat(3)
        );
        assert_eq!(
            count_fixed(shape(3, 1), &[Rotate180], limit()).unwrap(),
            nat(8)
        );
        let both = [HorizontalReflect, VerticalReflect];
        assert_eq!(count_fixed(shape(2, 2), &both, limit()).unwrap(), nat(6));
        assert_eq!(count_fixed(shape(2, 3), &both, limit()).unwrap(), nat(23));
    }

    #[test]
    fn fixed_by_two_generators_is_fixed_by_all() {
        let both = [HorizontalReflect, VerticalReflect];
        for s in GridShape::all_up_to(8) {
            assert_eq!(
                count_fixed(s, &both, limit()).unwrap(),
                count_fixed(s, &SymmetryOp::NON_IDENTITY, limit()).unwrap()
            );
        }
    }

    #[test]
    fn product_path_matches_naive_path() {
        let subsets: [&[SymmetryOp]; 5] = [
            &[HorizontalReflect],
            &[VerticalReflect],
            &[Rotate180],
            &[HorizontalReflect, VerticalReflect],
            &[VerticalReflect, Rotate180],
        ];
        for s in GridShape::all_up_to(6) {
            for ops in subsets {
                assert_eq!(
                    count_fixed(s, ops, limit()).unwrap(),
                    count_fixed_naive(s, ops).unwrap(),
                    "{s} {ops:?}"
                );
            }
        }
        assert!(count_fixed_naive(shape(3, 3), &[Rotate180]).is_err());
    }

    #[test]
    fn orbit_values() {
        assert_eq!(count_orbits(shape(3, 1), limit()).unwrap(), nat(19));
        assert_eq!(count_orbits(shape(1, 1), limit()).unwrap(), nat(2));
        assert_eq!(count_orbits(shape(2, 3), limit()).unwrap(), nat(1516));
    }

    #[test]
    fn orbit_count_matches_explicit_representatives() {
        for s in GridShape::all_up_to(6) {
            let mut reps = HashSet::new();
            for labels in enumerate_partitions(s, limit()).unwrap() {
                for a in circled_arrays(s, &labels) {
                    reps.insert(canonical_representative(&a));
                }
            }
            assert_eq!(
                count_orbits(s, limit()).unwrap(),
                nat(reps.len() as u64),
                "{s}"
            );
        }
    }

    #[test]
    fn display_marks_circles() {
        let a = CircledPartition::new(shape(2, 2), vec![0, 1, 1, 0], [1]).unwrap();
        assert_eq!(a.to_string(), " A (B)\n B  A ");
    }
}
