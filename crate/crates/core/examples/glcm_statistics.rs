//! Co-occurrence matrix of a tiny quantized patch and its statistics.

use scoot::cooccur::{contrast, energy, glcm, homogeneity, normalize, Offset, Region};
use scoot::imageio::{quantize, GrayImage};

fn main() -> scoot::Result<()> {
    // dark vertical strokes on paper
    let img = GrayImage::from_fn(6, 6, |x, _| if x % 3 == 0 { 30 } else { 235 })?;
    let q = quantize(&img, 6)?;
    println!("grades:");
    for y in 0..q.height() {
        let row: Vec<String> = (0..q.width()).map(|x| q.get(x, y).to_string()).collect();
        println!("  {}", row.join(" "));
    }

    for (dx, dy) in [(0, 1), (-1, 0), (-1, -1)] {
        let d = Offset::new(dx, dy)?;
        let counts = glcm(&q, Region::whole(6, 6), d)?;
        let p = normalize(&counts);
        println!("\noffset {d}: {} pairs", counts.total());
        for i in 0..6 {
            let row: Vec<String> = (0..6).map(|j| format!("{:>3}", counts.get(i, j))).collect();
            println!("  {}", row.join(""));
        }
        println!(
            "  homogeneity {:.4}  contrast {:.4}  energy {:.4}",
            homogeneity(&p)?,
            contrast(&p)?,
            energy(&p)?
        );
    }
    Ok(())
}
