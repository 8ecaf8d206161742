//! Catalogs built once per process, optionally persisted as JSON exports.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use graphlet_core::{Catalog, CatalogExport};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;

pub const CACHE_ENV: &str = "GRAPHLET_CATALOG_DIR";

/// On-disk layout shared by `catalog export` and the cache.
#[derive(Serialize)]
pub struct CatalogFile<'a> {
    pub manifest: RunManifest,
    pub catalog: &'a CatalogExport,
}

#[derive(Deserialize)]
struct StoredCatalog {
    catalog: CatalogExport,
}

pub struct CatalogStore {
    dir: Option<PathBuf>,
    loaded: Mutex<HashMap<usize, &'static Catalog>>,
}

impl CatalogStore {
    pub fn new(dir: Option<PathBuf>) -> Self {
        let dir = dir.or_else(|| std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()).map(PathBuf::from));
        CatalogStore {
            dir,
            loaded: Mutex::new(HashMap::new()),
        }
    }

    pub fn path_for(dir: &Path, max_size: usize) -> PathBuf {
        dir.join(format!("catalog-{max_size}.json"))
    }

    pub fn get(&self, max_size: usize, manifest: impl FnOnce() -> RunManifest) -> CliResult<&'static Catalog> {
        let mut loaded = self.loaded.lock().expect("catalog lock");
        if let Some(c) = loaded.get(&max_size) {
            return Ok(c);
        }
        let catalog: &'static Catalog = match &self.dir {
            None => Catalog::shared(max_size)?,
            Some(dir) => Box::leak(Box::new(self.load_or_build(dir, max_size, manifest)?)),
        };
        loaded.insert(max_size, catalog);
        Ok(catalog)
    }

    fn load_or_build(&self, dir: &Path, max_size: usize, manifest: impl FnOnce() -> RunManifest) -> CliResult<Catalog> {
        let path = Self::path_for(dir, max_size);
        if let Ok(text) = fs::read_to_string(&path) {
            let stored: StoredCatalog = serde_json::from_str(&text)
                .map_err(|e| CliError::input(format!("catalog cache {}: {e}", path.display())))?;
            return Catalog::from_export(&stored.catalog)
                .map_err(|e| CliError::input(format!("catalog cache {}: {e}", path.display())));
        }
        let catalog = Catalog::build(max_size)?;
        fs::create_dir_all(dir)?;
        let export = catalog.export();
        let body = serde_json::to_string(&CatalogFile {
            manifest: manifest(),
            catalog: &export,
        })?;
        let tmp = dir.join(format!(".catalog-{max_size}.{}.tmp", std::process::id()));
        fs::write(&tmp, body)?;
        fs::rename(&tmp, &path)?;
        Ok(catalog)
    }
}
