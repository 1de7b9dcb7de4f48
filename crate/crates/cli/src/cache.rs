//! Persistent cache of field moduli, one `n:<hex>` line per degree.
//!
//! Entries that fail to parse or are not irreducible of the stated degree are
//! recomputed, so deleting or corrupting the cache never changes results.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rsweight_core::gf2poly::{format_modulus_cache, min_irreducible, parse_modulus_cache, Gf2Poly};

pub const CACHE_FILE: &str = "moduli.txt";

pub struct ModulusCache {
    path: PathBuf,
    entries: BTreeMap<usize, Gf2Poly>,
}

impl ModulusCache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let entries = fs::read_to_string(&path)
            .ok()
            .and_then(|text| parse_modulus_cache(&text).ok())
            .unwrap_or_default()
            .into_iter()
            .filter(|(n, p)| p.degree() == Some(*n) && p.is_irreducible())
            .collect();
        Ok(ModulusCache { path, entries })
    }

    /// Makes sure degrees `1..=n_max` are present and writes the file.
    pub fn ensure(&mut self, n_max: usize) -> std::io::Result<()> {
        for n in 1..=n_max {
            self.entries.entry(n).or_insert_with(|| min_irreducible(n));
        }
        fs::write(&self.path, format_modulus_cache(&self.entries))
    }
}
