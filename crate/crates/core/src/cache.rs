//! On-disk resolution cache, content-addressed by the reduced Gröbner basis.
//!
//! Layout: `DIR/<sha256>/resolution.bin`. Entries are re-validated on load
//! and silently ignored when invalid.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::groebner::Vector;
use crate::homalg::{FreeResolution, ResolutionData};
use crate::polyring::{Ideal, PolyRing};

pub const RESOLUTION_FILE: &str = "resolution.bin";

#[derive(Serialize)]
struct CacheKey<'a> {
    field: crate::ffield::FieldSpec,
    order: crate::polyring::MonomialOrder,
    vars: &'a [String],
    groebner_basis: Vec<String>,
}

/// Hex sha256 of `(field, order, variables, reduced GB)`.
pub fn cache_key(ideal: &Ideal) -> String {
    let ring = ideal.ring();
    let key = CacheKey {
        field: ring.field().spec(),
        order: ring.order(),
        vars: ring.names(),
        groebner_basis: ideal.gb().elements().iter().map(|g| ring.format(g)).collect(),
    };
    sha256_hex(&serde_json::to_vec(&key).expect("key serializes"))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct ResolutionCache {
    root: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    Hit,
    Miss,
    Disabled,
}

impl ResolutionCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ResolutionCache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn entry_path(&self, key: &str) -> PathBuf {
        self.root.join(key).join(RESOLUTION_FILE)
    }

    pub fn load(&self, key: &str, ring: &PolyRing) -> Option<FreeResolution> {
        let bytes = fs::read(self.entry_path(key)).ok()?;
        let data: ResolutionData = bincode::deserialize(&bytes).ok()?;
        let res = FreeResolution::from_data(ring.clone(), data);
        validate(&res).ok().map(|_| res)
    }

    pub fn store(&self, key: &str, res: &FreeResolution) -> Result<()> {
        let path = self.entry_path(key);
        fs::create_dir_all(path.parent().expect("entry has a parent"))?;
        let bytes = bincode::serialize(&res.data()).map_err(|e| Error::Internal(format!("cache encode: {e}")))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, bytes)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// Degrees, `d ∘ d = 0`, and that every lifter element equals the
/// combination of columns its representation claims.
pub fn validate(res: &FreeResolution) -> Result<()> {
    let ring = &res.ring;
    let bad = |m: &str| Err(Error::InvalidInput(format!("cached resolution rejected: {m}")));
    if res.lifters.len() != res.diffs.len() {
        return bad("lifter count");
    }
    for (k, d) in res.diffs.iter().enumerate() {
        d.check_degrees(ring)?;
        if d.target != res.module(k) {
            return bad("module mismatch");
        }
        let g = &res.lifters[k];
        if g.twists != d.target.twists || g.input_twists != d.source.twists {
            return bad("lifter twists");
        }
        for e in &g.elems {
            let Some(rep) = &e.rep else { return bad("untracked lifter") };
            let comps = rep.components(d.ncols());
            let image = d.apply(ring, &comps)?;
            if Vector::from_components(ring, &image) != e.vec {
                return bad("lifter representation");
            }
        }
    }
    if !res.is_complex()? {
        return bad("d∘d ≠ 0");
    }
    Ok(())
}
