use crate::cooccur::Region;
use crate::error::{Result, ScootError};
use crate::imageio::GrayImage;

/// Largest Sobel magnitude reachable with 8-bit input, `255 * sqrt(20)`
/// (horizontal and vertical responses of 1020 and 510).
pub const SOBEL_MAX_MAGNITUDE: f64 = 1140.3946685248927;

/// Mean and population standard deviation of the Sobel gradient magnitude
/// over the interior of `region`, both scaled into `[0, 1]`. Only pixels of
/// the region feed the kernels.
pub fn sobel_features(img: &GrayImage, region: Region) -> Result<[f64; 2]> {
    region.check_within(img.width(), img.height())?;
    if region.width() < 3 || region.height() < 3 {
        return Err(ScootError::RegionTooSmall {
            width: region.width(),
            height: region.height(),
        });
    }
    let p = |x: usize, y: usize| i32::from(img.get(x, y));
    let mut mags = Vec::with_capacity((region.width() - 2) * (region.height() - 2));
    for y in region.y0 + 1..region.y1 - 1 {
        for x in region.x0 + 1..region.x1 - 1 {
            let gx = (p(x + 1, y - 1) + 2 * p(x + 1, y) + p(x + 1, y + 1))
                - (p(x - 1, y - 1) + 2 * p(x - 1, y) + p(x - 1, y + 1));
            let gy = (p(x - 1, y + 1) + 2 * p(x, y + 1) + p(x + 1, y + 1))
                - (p(x - 1, y - 1) + 2 * p(x, y - 1) + p(x + 1, y - 1));
            mags.push(f64::from(gx * gx + gy * gy).sqrt() / SOBEL_MAX_MAGNITUDE);
        }
    }
    let n = mags.len() as f64;
    let mean = mags.iter().sum::<f64>() / n;
    let var = mags.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / n;
    Ok([mean, var.sqrt()])
}
