//! Cache layout and atomic file handling. One JSON file per (space, n),
//! named `<space>_<n>.json`, with the surface preset spliced in for Hilbert
//! schemes (`Hilb_<surface>_<n>.json`) since three presets share that space
//! tag. Writes go through a temp file and rename, so a crashed run never
//! leaves a half-written table behind.

use std::fs;
use std::path::{Path, PathBuf};

use betti_core::gallery::SurfaceBetti;
use betti_core::{Error, Result, Space};

/// Precedence: explicit flag, then $BETTI_CACHE_DIR, then ./betti-cache.
pub fn resolve_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("BETTI_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("betti-cache"))
}

pub fn table_file_name(space: Space, surface: Option<&SurfaceBetti>, n: u32) -> String {
    match (space, surface) {
        (Space::Hilb, Some(s)) => format!("Hilb_{}_{}.json", s.name(), n),
        _ => format!("{}_{}.json", space.as_str(), n),
    }
}

/// Parse a cache file name back into its coordinates. Returns the space,
/// the surface preset for Hilbert files, and n.
pub fn parse_file_name(name: &str) -> Result<(Space, Option<SurfaceBetti>, u32)> {
    let stem = name.strip_suffix(".json").ok_or_else(|| {
        Error::Domain(format!("cache file \"{name}\" does not end in .json"))
    })?;
    let bad = || Error::Domain(format!("unrecognized cache file name \"{name}\""));
    let (head, n) = stem.rsplit_once('_').ok_or_else(bad)?;
    let n: u32 = n.parse().map_err(|_| bad())?;
    if let Some(surface) = head.strip_prefix("Hilb_") {
        let s = SurfaceBetti::parse(surface).map_err(|_| bad())?;
        return Ok((Space::Hilb, Some(s), n));
    }
    let space = Space::parse(head).map_err(|_| bad())?;
    Ok((space, None, n))
}

pub fn render_table_json(t: &betti_core::BettiTable) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("table serialization cannot fail");
    s.push('\n');
    s
}

/// Write-temp-then-rename; atomic on any same-filesystem rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
