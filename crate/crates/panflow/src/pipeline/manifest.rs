//! Content manifest of an output directory and the lock that keeps two
//! runs out of the same directory.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "manifest.json";
pub const LOCK: &str = ".panflow.lock";

/// SHA-256 of every file under the output directory, keyed by its path
/// relative to that directory with `/` separators. Holds no timestamps, so
/// identical runs give identical manifests.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Manifest {
    pub files: BTreeMap<String, String>,
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> io::Result<()> {
    for e in fs::read_dir(dir)? {
        let p = e?.path();
        if p.is_dir() {
            walk(&p, out)?;
        } else {
            out.push(p);
        }
    }
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Manifest {
    pub fn scan(root: &Path) -> io::Result<Manifest> {
        let mut paths = Vec::new();
        walk(root, &mut paths)?;
        let mut files = BTreeMap::new();
        for p in paths {
            let rel = p.strip_prefix(root).expect("walked under root");
            let key = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            if key == MANIFEST || key == LOCK {
                continue;
            }
            files.insert(key, sha256_hex(&fs::read(&p)?));
        }
        Ok(Manifest { files })
    }

    pub fn write(root: &Path) -> io::Result<Manifest> {
        let m = Manifest::scan(root)?;
        let mut text = serde_json::to_string_pretty(&m).expect("plain data serializes");
        text.push('\n');
        fs::write(root.join(MANIFEST), text)?;
        Ok(m)
    }
}

/// Exclusive hold on an output directory, released on drop.
#[derive(Debug)]
pub struct RunLock {
    path: PathBuf,
    _file: File,
}

impl RunLock {
    /// Fails with `AlreadyExists` while another run holds the directory.
    pub fn acquire(root: &Path) -> io::Result<RunLock> {
        fs::create_dir_all(root)?;
        let path = root.join(LOCK);
        let file = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)?;
        Ok(RunLock { path, _file: file })
    }
}

impl Drop for RunLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}
