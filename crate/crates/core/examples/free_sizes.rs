//! Prints the sizes of small free algebras of the built-in varieties.

use std::time::Instant;

use exunify::variety::catalog::{builtin, BUILTIN_NAMES};

fn main() {
    for name in BUILTIN_NAMES.iter().filter(|n| **n != "idemsg") {
        let v = builtin(name).unwrap();
        for n in 0..=4 {
            let start = Instant::now();
            match v.free_algebra_n(n) {
                Ok(f) => println!("{name:>9} F({n}) = {:>7} elements  ({:.1?})", f.size(), start.elapsed()),
                Err(e) => {
                    println!("{name:>9} F({n}): {e}");
                    if n > 0 {
                        break;
                    }
                }
            }
        }
    }
}
