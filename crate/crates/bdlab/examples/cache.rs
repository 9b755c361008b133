//! Write a coefficient table to the binary cache and read it back.
//!
//! cargo run --release --example cache

use bdlab::cli::{cache_read, cache_write, CacheError};
use bdlab::forms::coefficients_11a;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("bdlab-example-cache");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("11a.bdlab");

    let table = coefficients_11a(50_000)?;
    cache_write(&table, &path)?;
    println!("wrote {} ({} bytes)", path.display(), std::fs::metadata(&path)?.len());
    assert!(cache_read(&path)? == table);
    println!("read back bit for bit");

    let mut bytes = std::fs::read(&path)?;
    let mid = bytes.len() / 2;
    bytes[mid] ^= 1;
    std::fs::write(&path, bytes)?;
    match cache_read(&path) {
        Err(e @ CacheError::Checksum { .. }) => println!("flipped one bit: {e}"),
        other => println!("unexpected: {other:?}"),
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
