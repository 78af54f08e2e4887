//! Directories of model cards, one `<dataset_id>.json` per card.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::card::{self, ModelCard};

/// A file that could not be loaded. Loading continues past these.
#[derive(Debug)]
pub struct CatalogWarning {
    pub path: PathBuf,
    pub msg: String,
}

#[derive(Debug, Default)]
pub struct Catalog {
    /// Sorted by `dataset_id`.
    pub cards: Vec<ModelCard>,
    pub warnings: Vec<CatalogWarning>,
}

pub fn load_catalog(dir: &Path) -> io::Result<Catalog> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();

    let mut catalog = Catalog::default();
    for path in paths {
        let loaded = fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|text| card::parse(&text).map_err(|e| e.to_string()));
        match loaded {
            Ok(c) => catalog.cards.push(c),
            Err(msg) => catalog.warnings.push(CatalogWarning { path, msg }),
        }
    }
    catalog.cards.sort_by_key(|c| c.dataset_id);
    Ok(catalog)
}

/// Writes `card` as `<dataset_id>.json` inside `dir`.
pub fn store(dir: &Path, card: &ModelCard) -> io::Result<PathBuf> {
    let path = dir.join(format!("{}.json", card.dataset_id));
    fs::write(&path, card::emit(card))?;
    Ok(path)
}
