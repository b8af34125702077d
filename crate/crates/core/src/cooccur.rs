//! Gray-level co-occurrence matrices and the homogeneity, contrast and
//! energy statistics computed from them.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ScootError};
use crate::imageio::QuantizedImage;

/// Displacement from a pixel to its neighbour; `dx` moves along columns,
/// `dy` along rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(i32, i32)", into = "(i32, i32)")]
pub struct Offset {
    dx: i32,
    dy: i32,
}

impl Offset {
    pub fn new(dx: i32, dy: i32) -> Result<Self> {
        if dx == 0 && dy == 0 {
            return Err(ScootError::ZeroOffset);
        }
        Ok(Self { dx, dy })
    }

    pub fn dx(self) -> i32 {
        self.dx
    }

    pub fn dy(self) -> i32 {
        self.dy
    }

    pub fn reversed(self) -> Self {
        Self {
            dx: -self.dx,
            dy: -self.dy,
        }
    }
}

impl TryFrom<(i32, i32)> for Offset {
    type Error = ScootError;

    fn try_from((dx, dy): (i32, i32)) -> Result<Self> {
        Offset::new(dx, dy)
    }
}

impl From<Offset> for (i32, i32) {
    fn from(d: Offset) -> Self {
        (d.dx, d.dy)
    }
}

impl std::fmt::Display for Offset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.dx, self.dy)
    }
}

/// Pixel bounds of a block: `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Region {
    pub fn whole(width: usize, height: usize) -> Self {
        Self {
            x0: 0,
            y0: 0,
            x1: width,
            y1: height,
        }
    }

    pub fn width(&self) -> usize {
        self.x1.saturating_sub(self.x0)
    }

    pub fn height(&self) -> usize {
        self.y1.saturating_sub(self.y0)
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    /// Errors unless the region is non-empty and fits a `width x height` raster.
    pub fn check_within(&self, width: usize, height: usize) -> Result<()> {
        if self.x0 < self.x1 && self.y0 < self.y1 && self.x1 <= width && self.y1 <= height {
            Ok(())
        } else {
            Err(ScootError::RegionOutOfBounds {
                x0: self.x0,
                y0: self.y0,
                x1: self.x1,
                y1: self.y1,
                width,
                height,
            })
        }
    }
}

/// `n_levels x n_levels` table of gray-tone pair frequencies.
///
/// Raw matrices hold integer counts; normalized ones sum to one unless no
/// pair was counted, in which case the matrix stays zero and is flagged
/// degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    n_levels: usize,
    cells: Vec<f64>,
    normalized: bool,
    degenerate: bool,
}

impl CooccurrenceMatrix {
    /// Raw matrix from row-major counts.
    pub fn from_counts(n_levels: usize, counts: &[u32]) -> Self {
        assert_eq!(counts.len(), n_levels * n_levels, "count table size");
        Self {
            n_levels,
            cells: counts.iter().map(|&c| f64::from(c)).collect(),
            normalized: false,
            degenerate: false,
        }
    }

    /// Normalized matrix from row-major probabilities; they must be
    /// nonnegative and sum to one within 1e-12.
    pub fn from_probabilities(n_levels: usize, cells: Vec<f64>) -> Result<Self> {
        if cells.len() != n_levels * n_levels {
            return Err(ScootError::InvalidConfig(format!(
                "{} cells for {n_levels} levels",
                cells.len()
            )));
        }
        let sum: f64 = cells.iter().sum();
        if cells.iter().any(|c| !c.is_finite() || *c < 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(ScootError::InvalidConfig(
                "probabilities must be nonnegative and sum to 1".into(),
            ));
        }
        Ok(Self {
            n_levels,
            cells,
            normalized: true,
            degenerate: false,
        })
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.n_levels + j]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// True when normalization found no pairs to count.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n_levels;
        let mut cells = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[j * n + i] = self.cells[i * n + j];
            }
        }
        Self { cells, ..*self }
    }

    fn checked_normalized(&self) -> Result<&Self> {
        if self.normalized {
            Ok(self)
        } else {
            Err(ScootError::Unnormalized)
        }
    }

    fn weighted_sum(&self, weight: impl Fn(usize, usize, f64) -> f64) -> f64 {
        let n = self.n_levels;
        let mut acc = 0.0;
        for i in 0..n {
            for (j, &p) in self.cells[i * n..(i + 1) * n].iter().enumerate() {
                if p != 0.0 {
                    acc += weight(i, j, p);
                }
            }
        }
        acc
    }
}

/// Calls `f(i, j)` for every ordered grade pair `(q(x, y), q(x + dx, y + dy))`
/// with both pixels inside `region`.
fn for_each_pair(q: &QuantizedImage, region: Region, d: Offset, mut f: impl FnMut(u8, u8)) -> Result<()> {
    region.check_within(q.width(), q.height())?;
    let (dx, dy) = (d.dx() as isize, d.dy() as isize);
    // Source positions whose neighbour stays inside the region.
    let xs = region.x0 as isize + (-dx).max(0)..region.x1 as isize - dx.max(0);
    let ys = region.y0 as isize + (-dy).max(0)..region.y1 as isize - dy.max(0);
    if xs.is_empty() || ys.is_empty() {
        return Ok(());
    }
    let w = q.width() as isize;
    let grades = q.grades();
    let span = (xs.end - xs.start) as usize;
    for y in ys {
        let src = (y * w + xs.start) as usize;
        let dst = ((y + dy) * w + xs.start + dx) as usize;
        for (&i, &j) in grades[src..src + span].iter().zip(&grades[dst..dst + span]) {
            f(i, j);
        }
    }
    Ok(())
}

/// Counts ordered grade pairs `(q(x, y), q(x + dx, y + dy))` with both
/// pixels inside `region`. Pairs leaving the region are skipped.
pub fn glcm(q: &QuantizedImage, region: Region, d: Offset) -> Result<CooccurrenceMatrix> {
    let n = q.n_levels();
    let mut counts = vec![0u32; n * n];
    for_each_pair(q, region, d, |i, j| counts[i as usize * n + j as usize] += 1)?;
    Ok(CooccurrenceMatrix::from_counts(n, &counts))
}

/// Nonzero cells of a region's co-occurrence counts in row-major order.
///
/// Holds only the cells that occur, so it stays small when the number of
/// levels is large. Its statistics equal those of the normalized dense
/// matrix bit for bit: both sum the same nonzero terms in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCooccurrence {
    n_levels: usize,
    cells: Vec<(usize, usize, u32)>,
    total: u32,
}

impl SparseCooccurrence {
    pub fn new(q: &QuantizedImage, region: Region, d: Offset) -> Result<Self> {
        let n = q.n_levels();
        let mut codes = Vec::with_capacity(region.area());
        for_each_pair(q, region, d, |i, j| codes.push(i as usize * n + j as usize))?;
        codes.sort_unstable();
        let mut cells: Vec<(usize, usize, u32)> = Vec::new();
        for code in &codes {
            match cells.last_mut() {
                Some(last) if last.0 * n + last.1 == *code => last.2 += 1,
                _ => cells.push((code / n, code % n, 1)),
            }
        }
        Ok(Self {
            n_levels: n,
            cells,
            total: codes.len() as u32,
        })
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    /// No pair fits in the region.
    pub fn is_degenerate(&self) -> bool {
        self.total == 0
    }

    pub fn pair_count(&self) -> u32 {
        self.total
    }

    pub fn to_dense(&self) -> CooccurrenceMatrix {
        let n = self.n_levels;
        let mut counts = vec![0u32; n * n];
        for &(i, j, c) in &self.cells {
            counts[i * n + j] = c;
        }
        CooccurrenceMatrix::from_counts(n, &counts)
    }

    fn weighted_sum(&self, weight: impl Fn(usize, usize, f64) -> f64) -> f64 {
        let total = f64::from(self.total);
        self.cells
            .iter()
            .fold(0.0, |acc, &(i, j, c)| acc + weight(i, j, f64::from(c) / total))
    }

    pub fn homogeneity(&self) -> f64 {
        self.weighted_sum(|i, j, p| p / (1 + i.abs_diff(j)) as f64)
    }

    pub fn contrast(&self) -> f64 {
        self.weighted_sum(|i, j, p| {
            let k = i.abs_diff(j) as f64;
            k * k * p
        })
    }

    pub fn energy(&self) -> f64 {
        self.weighted_sum(|_, _, p| p * p)
    }
}

/// Scales cells to sum to one. A matrix with no counted pairs stays zero
/// and is marked degenerate.
pub fn normalize(m: &CooccurrenceMatrix) -> CooccurrenceMatrix {
    if m.normalized {
        return m.clone();
    }
    let total = m.total();
    if total > 0.0 {
        CooccurrenceMatrix {
            n_levels: m.n_levels,
            cells: m.cells.iter().map(|c| c / total).collect(),
            normalized: true,
            degenerate: false,
        }
    } else {
        CooccurrenceMatrix {
            n_levels: m.n_levels,
            cells: vec![0.0; m.cells.len()],
            normalized: true,
            degenerate: true,
        }
    }
}

/// `sum p(i, j) / (1 + |i - j|)`.
pub fn homogeneity(m: &CooccurrenceMatrix) -> Result<f64> {
    Ok(m
        .checked_normalized()?
        .weighted_sum(|i, j, p| p / (1 + i.abs_diff(j)) as f64))
}

/// `sum |i - j|^2 p(i, j)`; zero for a single gray tone.
pub fn contrast(m: &CooccurrenceMatrix) -> Result<f64> {
    Ok(m.checked_normalized()?.weighted_sum(|i, j, p| {
        let k = i.abs_diff(j) as f64;
        k * k * p
    }))
}

/// `sum p(i, j)^2`; one when a single cell holds all the mass.
pub fn energy(m: &CooccurrenceMatrix) -> Result<f64> {
    Ok(m.checked_normalized()?.weighted_sum(|_, _, p| p * p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imageio::QuantizedImage;
    use proptest::prelude::*;

    fn q(w: usize, h: usize, g: &[u8], n: usize) -> QuantizedImage {
        QuantizedImage::new(w, h, g.to_vec(), n).unwrap()
    }

    fn off(dx: i32, dy: i32) -> Offset {
        Offset::new(dx, dy).unwrap()
    }

    fn point_mass(n: usize, i: usize, j: usize) -> CooccurrenceMatrix {
        let mut c = vec![0.0; n * n];
        c[i * n + j] = 1.0;
        CooccurrenceMatrix::from_probabilities(n, c).unwrap()
    }

    #[test]
    fn vertical_pairs_two_rows() {
        let img = q(2, 2, &[0, 0, 1, 1], 2);
        let m = glcm(&img, Region::whole(2, 2), off(0, 1)).unwrap();
        assert_eq!(m.cells(), &[0.0, 2.0, 0.0, 0.0]);
        assert!(!m.is_normalized());
    }

    #[test]
    fn constant_image_single_diagonal_cell() {
        let img = q(5, 4, &[3; 20], 6);
        for d in [off(1, 0), off(-1, 1), off(2, -2)] {
            let m = glcm(&img, Region::whole(5, 4), d).unwrap();
            let nonzero: Vec<_> = m.cells().iter().enumerate().filter(|(_, &c)| c > 0.0).collect();
            assert_eq!(nonzero.len(), 1);
            assert_eq!(nonzero[0].0, 3 * 6 + 3);
        }
    }

    #[test]
    fn single_pixel_region_has_no_pairs() {
        let img = q(3, 3, &[0, 1, 2, 0, 1, 2, 0, 1, 2], 3);
        let r = Region { x0: 1, y0: 1, x1: 2, y1: 2 };
        let m = glcm(&img, r, off(0, 1)).unwrap();
        assert_eq!(m.total(), 0.0);
        let n = normalize(&m);
        assert!(n.is_normalized() && n.is_degenerate());
        assert_eq!(homogeneity(&n).unwrap(), 0.0);
        assert_eq!(energy(&n).unwrap(), 0.0);
        assert_eq!(contrast(&n).unwrap(), 0.0);
    }

    #[test]
    fn pairs_stay_inside_region() {
        // a neighbour outside the block is never counted
        let img = q(4, 1, &[0, 1, 1, 0], 2);
        let r = Region { x0: 0, y0: 0, x1: 2, y1: 1 };
        let m = glcm(&img, r, off(1, 0)).unwrap();
        assert_eq!(m.cells(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn region_out_of_bounds() {
        let img = q(2, 2, &[0; 4], 2);
        let r = Region { x0: 0, y0: 0, x1: 3, y1: 2 };
        assert!(matches!(glcm(&img, r, off(1, 0)), Err(ScootError::RegionOutOfBounds { .. })));
        let empty = Region { x0: 1, y0: 0, x1: 1, y1: 2 };
        assert!(glcm(&img, empty, off(1, 0)).is_err());
    }

    #[test]
    fn zero_offset_rejected() {
        assert!(matches!(Offset::new(0, 0), Err(ScootError::ZeroOffset)));
        assert!(serde_json::from_str::<Offset>("[0,0]").is_err());
        assert_eq!(serde_json::from_str::<Offset>("[-1,1]").unwrap(), off(-1, 1));
    }

    #[test]
    fn normalize_examples() {
        let raw = CooccurrenceMatrix::from_counts(2, &[0, 2, 0, 0]);
        let n = normalize(&raw);
        assert_eq!(n.cells(), &[0.0, 1.0, 0.0, 0.0]);
        assert!(n.is_normalized() && !n.is_degenerate());
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn statistics_reject_raw_counts() {
        let raw = CooccurrenceMatrix::from_counts(2, &[1, 0, 0, 0]);
        assert!(matches!(homogeneity(&raw), Err(ScootError::Unnormalized)));
        assert!(matches!(contrast(&raw), Err(ScootError::Unnormalized)));
        assert!(matches!(energy(&raw), Err(ScootError::Unnormalized)));
    }

    #[test]
    fn statistic_anchors() {
        let diag = point_mass(6, 2, 2);
        assert_eq!(homogeneity(&diag).unwrap(), 1.0);
        assert_eq!(contrast(&diag).unwrap(), 0.0);
        assert_eq!(energy(&diag).unwrap(), 1.0);

        let off_diag = point_mass(6, 0, 1);
        assert!((homogeneity(&off_diag).unwrap() - 0.5).abs() < 1e-12);
        assert!((contrast(&off_diag).unwrap() - 1.0).abs() < 1e-12);
        assert!((energy(&off_diag).unwrap() - 1.0).abs() < 1e-12);

        assert_eq!(contrast(&point_mass(6, 0, 5)).unwrap(), 25.0);

        let halves = CooccurrenceMatrix::from_probabilities(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(energy(&halves).unwrap(), 0.5);
    }

    #[test]
    fn full_region_mass_conservation() {
        let (w, h) = (7, 5);
        let img = q(w, h, &(0..w * h).map(|k| (k % 4) as u8).collect::<Vec<_>>(), 4);
        let m = glcm(&img, Region::whole(w, h), off(0, 1)).unwrap();
        assert_eq!(m.total(), (w * (h - 1)) as f64);
    }

    fn arb_quantized() -> impl Strategy<Value = QuantizedImage> {
        (1usize..12, 1usize..12, 2usize..9).prop_flat_map(|(w, h, n)| {
            proptest::collection::vec(0..n as u8, w * h)
                .prop_map(move |g| QuantizedImage::new(w, h, g, n).unwrap())
        })
    }

    fn arb_offset() -> impl Strategy<Value = Offset> {
        (-2i32..=2, -2i32..=2)
            .prop_filter("nonzero", |&(x, y)| (x, y) != (0, 0))
            .prop_map(|(x, y)| off(x, y))
    }

    proptest! {
        #[test]
        fn reversal_is_transpose(img in arb_quantized(), d in arb_offset()) {
            let r = Region::whole(img.width(), img.height());
            let fwd = glcm(&img, r, d).unwrap();
            let back = glcm(&img, r, d.reversed()).unwrap();
            let t = fwd.transpose();
            prop_assert_eq!(back.cells(), t.cells());
            let (a, b) = (normalize(&fwd), normalize(&back));
            prop_assert!((contrast(&a).unwrap() - contrast(&b).unwrap()).abs() < 1e-12);
            prop_assert!((energy(&a).unwrap() - energy(&b).unwrap()).abs() < 1e-12);
            prop_assert!((homogeneity(&a).unwrap() - homogeneity(&b).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn statistic_bounds(img in arb_quantized(), d in arb_offset()) {
            let n = img.n_levels();
            let m = normalize(&glcm(&img, Region::whole(img.width(), img.height()), d).unwrap());
            let (h, c, e) = (homogeneity(&m).unwrap(), contrast(&m).unwrap(), energy(&m).unwrap());
            prop_assert!((0.0..=1.0 + 1e-12).contains(&h));
            prop_assert!((0.0..=1.0 + 1e-12).contains(&e));
            prop_assert!(c >= 0.0 && c <= ((n - 1) * (n - 1)) as f64 + 1e-9);
            if !m.is_degenerate() {
                prop_assert!((m.total() - 1.0).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn sparse_statistics_match_dense_bitwise(
            levels in prop_oneof![Just(2usize), Just(6), Just(256)],
            raw in proptest::collection::vec(any::<u8>(), 12 * 10),
            dx in -2i32..=2,
            dy in -2i32..=2,
            x0 in 0usize..6,
            y0 in 0usize..5,
        ) {
            prop_assume!((dx, dy) != (0, 0));
            let grades: Vec<u8> = raw.iter().map(|&v| (v as usize % levels) as u8).collect();
            let img = q(12, 10, &grades, levels);
            let region = Region { x0, y0, x1: 12, y1: 10 };
            let d = off(dx, dy);
            let sparse = SparseCooccurrence::new(&img, region, d).unwrap();
            let dense = glcm(&img, region, d).unwrap();
            prop_assert_eq!(&sparse.to_dense(), &dense);
            let m = normalize(&dense);
            prop_assert_eq!(sparse.is_degenerate(), m.is_degenerate());
            prop_assert_eq!(sparse.homogeneity().to_bits(), homogeneity(&m).unwrap().to_bits());
            prop_assert_eq!(sparse.contrast().to_bits(), contrast(&m).unwrap().to_bits());
            prop_assert_eq!(sparse.energy().to_bits(), energy(&m).unwrap().to_bits());
        }
    }
}
