//! Output directory helper. Every file starts with one comment line naming
//! the config fingerprint and the seed, so a result can always be traced
//! back to the exact inputs that produced it.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

pub struct OutDir {
    dir: PathBuf,
    hash: String,
    seed: u64,
}

impl OutDir {
    pub fn new(dir: &Path, hash: &str, seed: u64) -> io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            hash: hash.to_string(),
            seed,
        })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Opens `name` for writing and stamps the traceability header.
    pub fn create(&self, name: &str) -> io::Result<BufWriter<File>> {
        let mut w = BufWriter::new(File::create(self.dir.join(name))?);
        writeln!(w, "# config_sha256={} seed={}", self.hash, self.seed)?;
        Ok(w)
    }

    /// Plain-text summary; the header repeats the fingerprint and seed in
    /// readable form on top of the stamped comment line.
    pub fn summary(&self, name: &str, title: &str) -> io::Result<BufWriter<File>> {
        let mut w = self.create(name)?;
        writeln!(w, "{title}")?;
        writeln!(w, "config_sha256: {}", self.hash)?;
        writeln!(w, "seed: {}", self.seed)?;
        Ok(w)
    }
}

/// 12 significant digits, enough to make round-trips byte-stable without
/// printing noise from the last couple of ulps.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}
