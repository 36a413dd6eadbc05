//! Binary L1TV denoising of a noisy disk by minimum cut.
//!
//! Writes the input, the cleaned set and a coloured decomposition to a
//! temporary directory.

use flatnorm::complex::{BinarySet, CubicalComplex};
use flatnorm::mincut::{l1tv_denoise, perimeter, Connectivity, MincutConfig};
use flatnorm::netpbm::Bitmap;
use flatnorm::render::render_decomposition;
use rand::{Rng, SeedableRng};

fn main() -> flatnorm::Result<()> {
    let cx = CubicalComplex::grid2(64, 64)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let noisy = BinarySet::from_fn(&cx, |[x, y, _]| {
        let (dx, dy) = (x as f64 + 0.5 - 32.0, y as f64 + 0.5 - 32.0);
        (dx * dx + dy * dy <= 400.0) ^ rng.gen_bool(0.04)
    });
    println!("noisy pixels: {}, 16-perimeter {:.2}", noisy.len(), perimeter(&noisy, Connectivity::Sixteen)?);

    let dir = std::env::temp_dir().join("flatnorm-denoise-disk");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("noisy.pbm"), Bitmap::from_set(&noisy)?.write())?;

    for lambda in [0.05, 0.3, 1.0] {
        let d = l1tv_denoise(&noisy, &MincutConfig::new(lambda, Connectivity::Sixteen))?;
        let sigma = d.sigma.as_ref().unwrap();
        println!("lambda {lambda}: energy {:.4}, kept {} pixels", d.value, sigma.len());
        std::fs::write(dir.join(format!("sigma_{lambda}.pbm")), Bitmap::from_set(sigma)?.write())?;
        std::fs::write(dir.join(format!("decomposition_{lambda}.ppm")), render_decomposition(&d, 4)?.write())?;
    }
    println!("images in {}", dir.display());
    Ok(())
}
