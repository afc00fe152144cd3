//! Finite sums and Milliken-Taylor sums of a finite sequence, and checking
//! them against a coloring.
//!
//!     cargo run --example milliken_taylor

use radokit::search::{fs, mt_sums, verify_mt_monochromatic, Coloring, MTSpec, DEFAULT_MT_CAP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("FS(1,2,4)          = {:?}", fs(&[1, 2, 4], DEFAULT_MT_CAP)?);

    let spec = MTSpec::new(vec![1, 2, 3], vec![2, 1])?;
    println!("MT((1,2,3); 2,1)   = {:?}", mt_sums(&spec, DEFAULT_MT_CAP)?);

    // Color n by the parity of the exponent of 2 in n. All finite sums of
    // 1, 4, 16 have lowest set bit at an even position, so FS is monochromatic.
    let col = Coloring::from_colors((1..=64u64).map(|n| (n.trailing_zeros() % 2) as u8).collect());
    for ground in [vec![1, 4, 16], vec![1, 2, 4]] {
        let spec = MTSpec::new(ground.clone(), vec![1])?;
        match verify_mt_monochromatic(&spec, &col, DEFAULT_MT_CAP)? {
            Some(c) => println!("FS{ground:?} is monochromatic in color {c}"),
            None => println!("FS{ground:?} is not monochromatic"),
        }
    }
    Ok(())
}
