//! On-disk cache of Laplacian spectra keyed by network identity.
//!
//! File layout: magic, dimension, vector flag, Laplacian hash, little-endian
//! `f64` payload, and a trailing SHA-256 of everything before it.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use sierpinski_walks::spectral::{decompose, SpectralDecomposition};
use sierpinski_walks::{Laplacian, Network, Result};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SIERPINSKI_CACHE_DIR";

const MAGIC: &[u8; 8] = b"SWSPEC01";
const HASH_LEN: usize = 64;

#[derive(Clone, Debug)]
pub struct SpectrumCache {
    dir: Option<PathBuf>,
}

/// Outcome of a lookup, for logging.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheEvent {
    Disabled,
    Hit,
    Miss,
    Corrupt,
}

impl SpectrumCache {
    pub fn disabled() -> Self {
        SpectrumCache { dir: None }
    }

    /// Directory from the explicit option, else from the environment.
    pub fn configure(explicit: Option<&Path>, disabled: bool) -> Self {
        if disabled {
            return Self::disabled();
        }
        let dir = explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        SpectrumCache { dir }
    }

    fn path_for(&self, network: &Network, hash: &str, vectors: bool) -> Option<PathBuf> {
        let suffix = if vectors { "vec" } else { "val" };
        self.dir.as_ref().map(|d| {
            d.join(format!(
                "{}-g{}-{}-{suffix}.bin",
                network.kind().as_str().to_ascii_lowercase(),
                network.generation(),
                &hash[..16]
            ))
        })
    }

    /// Cached decomposition (with vectors if `vectors`), computing and
    /// storing it on a miss. A stored decomposition with vectors also
    /// serves value-only requests.
    pub fn spectrum(
        &self,
        network: &Network,
        laplacian: &Laplacian,
        vectors: bool,
    ) -> Result<(SpectralDecomposition, CacheEvent)> {
        if self.dir.is_none() {
            return Ok((decompose(laplacian, vectors)?, CacheEvent::Disabled));
        }
        let hash = laplacian.content_hash();
        let mut corrupt = false;
        let candidates: &[bool] = if vectors { &[true] } else { &[false, true] };
        for &with_vectors in candidates {
            let path = self.path_for(network, &hash, with_vectors).expect("cache enabled");
            match read_entry(&path, &hash) {
                Ok(Some(spec)) => {
                    let spec = if vectors { spec } else { spec.without_vectors() };
                    return Ok((spec, CacheEvent::Hit));
                }
                Ok(None) => {}
                Err(e) => {
                    eprintln!("warning: ignoring corrupt cache entry {}: {e}", path.display());
                    corrupt = true;
                }
            }
        }
        let spec = decompose(laplacian, vectors)?;
        let path = self.path_for(network, &hash, vectors).expect("cache enabled");
        if let Err(e) = write_entry(&path, &hash, &spec) {
            eprintln!("warning: could not write cache entry {}: {e}", path.display());
        }
        let event = if corrupt { CacheEvent::Corrupt } else { CacheEvent::Miss };
        Ok((spec, event))
    }
}

fn invalid(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

fn read_entry(path: &Path, hash: &str) -> io::Result<Option<SpectralDecomposition>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e),
    };
    let header = MAGIC.len() + 8 + 1 + HASH_LEN;
    if bytes.len() < header + 32 || &bytes[..MAGIC.len()] != MAGIC {
        return Err(invalid("bad header"));
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(invalid("checksum mismatch"));
    }
    let mut at = MAGIC.len();
    let n = u64::from_le_bytes(body[at..at + 8].try_into().expect("8 bytes")) as usize;
    at += 8;
    let has_vectors = body[at] == 1;
    at += 1;
    if &body[at..at + HASH_LEN] != hash.as_bytes() {
        // same file name, different Laplacian: treat as a miss
        return Ok(None);
    }
    at += HASH_LEN;
    let count = n + if has_vectors { n * n } else { 0 };
    if body.len() - at != count * 8 {
        return Err(invalid("truncated payload"));
    }
    let values: Vec<f64> = body[at..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let (eigenvalues, vectors) = values.split_at(n);
    let vectors = has_vectors.then(|| vectors.to_vec());
    SpectralDecomposition::from_parts(eigenvalues.to_vec(), vectors)
        .map(Some)
        .map_err(|e| invalid(&e.to_string()))
}

/// Writes atomically under a lockfile; concurrent writers skip.
fn write_entry(path: &Path, hash: &str, spec: &SpectralDecomposition) -> io::Result<()> {
    let dir = path.parent().expect("cache file has a parent");
    fs::create_dir_all(dir)?;
    let lock = path.with_extension("lock");
    let _guard = match OpenOptions::new().write(true).create_new(true).open(&lock) {
        Ok(_) => LockGuard(lock),
        Err(e) if e.kind() == io::ErrorKind::AlreadyExists => return Ok(()),
        Err(e) => return Err(e),
    };
    let mut body = Vec::with_capacity(MAGIC.len() + 73 + 8 * spec.dim() * (spec.dim() + 1));
    body.extend_from_slice(MAGIC);
    body.extend_from_slice(&(spec.dim() as u64).to_le_bytes());
    body.push(u8::from(spec.has_vectors()));
    body.extend_from_slice(hash.as_bytes());
    for v in spec.eigenvalues() {
        body.extend_from_slice(&v.to_le_bytes());
    }
    if let Ok(vectors) = spec.vectors() {
        for v in vectors {
            body.extend_from_slice(&v.to_le_bytes());
        }
    }
    let digest = Sha256::digest(&body);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = File::create(&tmp)?;
        f.write_all(&body)?;
        f.write_all(&digest)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sierpinski_walks::graph::generate;
    use sierpinski_walks::NetworkKind;

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SpectrumCache::configure(Some(dir.path()), false);
        let net = generate(NetworkKind::Sg, 3).unwrap();
        let lap = net.laplacian();
        let (first, ev) = cache.spectrum(&net, &lap, true).unwrap();
        assert_eq!(ev, CacheEvent::Miss);
        let (second, ev) = cache.spectrum(&net, &lap, true).unwrap();
        assert_eq!(ev, CacheEvent::Hit);
        assert_eq!(first, second);
        // value-only requests are served from the vector entry
        let (values, ev) = cache.spectrum(&net, &lap, false).unwrap();
        assert_eq!(ev, CacheEvent::Hit);
        assert_eq!(values.eigenvalues(), first.eigenvalues());

        let file = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
        let mut bytes = fs::read(&file).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0xff;
        fs::write(&file, bytes).unwrap();
        let (third, ev) = cache.spectrum(&net, &lap, true).unwrap();
        assert_eq!(ev, CacheEvent::Corrupt);
        assert_eq!(third, first);
    }

    #[test]
    fn disabled_cache_matches() {
        let net = generate(NetworkKind::Dsg, 2).unwrap();
        let lap = net.laplacian();
        let (a, ev) = SpectrumCache::disabled().spectrum(&net, &lap, false).unwrap();
        assert_eq!(ev, CacheEvent::Disabled);
        let dir = tempfile::tempdir().unwrap();
        let (b, _) = SpectrumCache::configure(Some(dir.path()), false)
            .spectrum(&net, &lap, false)
            .unwrap();
        assert_eq!(a, b);
    }
}
