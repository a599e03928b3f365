//! Content-addressed disk cache.
//!
//! Layout: `<root>/<kind>/<sha256(key) as hex>.bin`. Each file starts with a
//! header (magic, format version, key) so files are self-describing; a file
//! whose version or key does not match is ignored and rewritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

const MAGIC: &[u8; 4] = b"CDC1";

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "CUBICDELTA_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct DiskCache {
    root: PathBuf,
}

impl DiskCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DiskCache { root: root.into() }
    }

    /// Cache rooted at `$CUBICDELTA_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(|d| DiskCache::new(PathBuf::from(d)))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, kind: &str, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.root.join(kind).join(format!("{hex}.bin"))
    }

    pub fn get(&self, kind: &str, key: &str, version: u32) -> Option<Vec<u8>> {
        let bytes = fs::read(self.path_for(kind, key)).ok()?;
        let (v, k, body) = parse_header(&bytes)?;
        (v == version && k == key.as_bytes()).then(|| body.to_vec())
    }

    pub fn put(&self, kind: &str, key: &str, version: u32, payload: &[u8]) -> Result<()> {
        let path = self.path_for(kind, key);
        fs::create_dir_all(path.parent().unwrap())?;
        // write to a temporary name, then rename, so readers never see a torn file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(MAGIC)?;
            f.write_all(&version.to_le_bytes())?;
            f.write_all(&(key.len() as u32).to_le_bytes())?;
            f.write_all(key.as_bytes())?;
            f.write_all(payload)?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }
}

fn parse_header(b: &[u8]) -> Option<(u32, &[u8], &[u8])> {
    if b.len() < 12 || &b[..4] != MAGIC {
        return None;
    }
    let version = u32::from_le_bytes(b[4..8].try_into().ok()?);
    let klen = u32::from_le_bytes(b[8..12].try_into().ok()?) as usize;
    let key = b.get(12..12 + klen)?;
    Some((version, key, &b[12 + klen..]))
}
