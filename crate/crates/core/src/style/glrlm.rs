//! Gray-level run-length matrices.

use crate::cooccur::{Offset, Region};
use crate::error::Result;
use crate::imageio::QuantizedImage;

/// `counts[grade][len - 1]`: maximal same-grade runs of each length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLengthMatrix {
    pub n_levels: usize,
    pub max_len: usize,
    counts: Vec<u32>,
    pixels: usize,
}

impl RunLengthMatrix {
    pub fn get(&self, grade: usize, len: usize) -> u32 {
        self.counts[grade * self.max_len + len - 1]
    }

    pub fn total_runs(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// Pixels in the region the runs were counted over.
    pub fn pixels(&self) -> usize {
        self.pixels
    }
}

/// Counts maximal runs along `d` with every step kept inside `region`.
pub fn run_length_matrix(q: &QuantizedImage, region: Region, d: Offset) -> Result<RunLengthMatrix> {
    region.check_within(q.width(), q.height())?;
    let n = q.n_levels();
    let max_len = region.width().max(region.height());
    let mut counts = vec![0u32; n * max_len];
    let (dx, dy) = (d.dx() as isize, d.dy() as isize);
    let inside = |x: isize, y: isize| {
        x >= region.x0 as isize && x < region.x1 as isize && y >= region.y0 as isize && y < region.y1 as isize
    };
    for y in region.y0..region.y1 {
        for x in region.x0..region.x1 {
            let g = q.get(x, y);
            let (px, py) = (x as isize - dx, y as isize - dy);
            if inside(px, py) && q.get(px as usize, py as usize) == g {
                continue; // not the start of a run
            }
            let (mut cx, mut cy, mut len) = (x as isize + dx, y as isize + dy, 1usize);
            while inside(cx, cy) && q.get(cx as usize, cy as usize) == g {
                len += 1;
                cx += dx;
                cy += dy;
            }
            counts[g as usize * max_len + len - 1] += 1;
        }
    }
    Ok(RunLengthMatrix {
        n_levels: n,
        max_len,
        counts,
        pixels: region.area(),
    })
}

/// `[SRE, LRE, GLN, RLN, RP]` with GLN and RLN divided by the run count
/// twice so they stay in `(0, 1]`.
pub fn glrlm_features(q: &QuantizedImage, region: Region, d: Offset) -> Result<[f64; 5]> {
    let m = run_length_matrix(q, region, d)?;
    let runs = m.total_runs() as f64;
    let mut sre = 0.0;
    let mut lre = 0.0;
    let mut per_grade = vec![0.0f64; m.n_levels];
    let mut per_len = vec![0.0f64; m.max_len];
    for (g, grade_total) in per_grade.iter_mut().enumerate() {
        for len in 1..=m.max_len {
            let c = f64::from(m.get(g, len));
            if c == 0.0 {
                continue;
            }
            let l2 = (len * len) as f64;
            sre += c / l2;
            lre += c * l2;
            *grade_total += c;
            per_len[len - 1] += c;
        }
    }
    let gln: f64 = per_grade.iter().map(|s| s * s).sum();
    let rln: f64 = per_len.iter().map(|s| s * s).sum();
    Ok([
        sre / runs,
        lre / runs,
        gln / (runs * runs),
        rln / (runs * runs),
        runs / m.pixels() as f64,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: usize, h: usize, g: &[u8], n: usize) -> QuantizedImage {
        QuantizedImage::new(w, h, g.to_vec(), n).unwrap()
    }

    fn off(dx: i32, dy: i32) -> Offset {
        Offset::new(dx, dy).unwrap()
    }

    #[test]
    fn row_with_two_runs() {
        let img = q(5, 1, &[0, 0, 0, 1, 1], 2);
        let r = Region::whole(5, 1);
        let m = run_length_matrix(&img, r, off(1, 0)).unwrap();
        assert_eq!(m.get(0, 3), 1);
        assert_eq!(m.get(1, 2), 1);
        assert_eq!(m.total_runs(), 2);
        let f = glrlm_features(&img, r, off(1, 0)).unwrap();
        // SRE = (1/9 + 1/4) / 2, LRE = (9 + 4) / 2, GLN = (1 + 1) / 4, RLN = (1 + 1) / 4
        assert!((f[0] - (1.0 / 9.0 + 0.25) / 2.0).abs() < 1e-15);
        assert_eq!(f[1], 6.5);
        assert_eq!(f[2], 0.5);
        assert_eq!(f[3], 0.5);
        assert_eq!(f[4], 0.4);
    }

    #[test]
    fn constant_row_single_run() {
        for n in 1..9usize {
            let img = q(n, 1, &vec![2; n], 3);
            let f = glrlm_features(&img, Region::whole(n, 1), off(1, 0)).unwrap();
            assert_eq!(f[0], 1.0 / (n * n) as f64);
            assert_eq!(f[1], (n * n) as f64);
            assert_eq!(f[2], 1.0);
            assert_eq!(f[3], 1.0);
            assert_eq!(f[4], 1.0 / n as f64);
        }
    }

    #[test]
    fn single_pixel_unit_run() {
        let img = q(3, 3, &[0, 1, 0, 1, 0, 1, 0, 1, 0], 2);
        let r = Region { x0: 1, y0: 1, x1: 2, y1: 2 };
        let f = glrlm_features(&img, r, off(-1, 1)).unwrap();
        assert_eq!(f, [1.0, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn runs_perpendicular_to_direction_are_unit() {
        // vertical runs of a horizontally striped image
        let img = q(3, 2, &[0, 0, 0, 1, 1, 1], 2);
        let m = run_length_matrix(&img, Region::whole(3, 2), off(0, 1)).unwrap();
        assert_eq!(m.total_runs(), 6);
        assert_eq!(m.get(0, 1), 3);
    }

    #[test]
    fn reversed_direction_same_runs() {
        let g: Vec<u8> = (0..64).map(|k| ((k * 7 + k / 8) % 3) as u8).collect();
        let img = q(8, 8, &g, 3);
        for d in [off(1, 0), off(-1, 1), off(0, 1), off(1, 1)] {
            let a = run_length_matrix(&img, Region::whole(8, 8), d).unwrap();
            let b = run_length_matrix(&img, Region::whole(8, 8), d.reversed()).unwrap();
            assert_eq!(a, b);
            // every pixel belongs to exactly one run
            let covered: u64 = (0..3)
                .flat_map(|gr| (1..=a.max_len).map(move |l| (gr, l)))
                .map(|(gr, l)| u64::from(a.get(gr, l)) * l as u64)
                .sum();
            assert_eq!(covered, 64);
        }
    }
}
