//! Reading and writing plain PBM images and FLATCHAIN files.

use flatnorm::complex::boundary_of_set;
use flatnorm::complex::format::{read_chain, write_chain};
use flatnorm::netpbm::Bitmap;

const PLUS: &str = "P1
# a plus sign
5 5
0 0 1 0 0
0 0 1 0 0
1 1 1 1 1
0 0 1 0 0
0 0 1 0 0
";

fn main() -> flatnorm::Result<()> {
    let bitmap = Bitmap::parse(PLUS)?;
    let set = bitmap.to_set()?;
    println!("{} pixels on {}", set.len(), set.complex().describe());

    let t = boundary_of_set(&set);
    let text = write_chain(&t)?;
    print!("{text}");
    let back = read_chain(&text)?;
    println!("round trip exact: {}", back.max_abs_diff(&t)? == 0.0);
    print!("{}", Bitmap::from_set(&set)?.write());
    Ok(())
}
