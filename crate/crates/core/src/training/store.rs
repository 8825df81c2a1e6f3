use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::moldata::{assign_types, load_structure, AtomTypeScheme, Molecule, RadiusTable};

use super::{PoseRecord, TrainError};

/// Typed receptor and ligand of one pose.
#[derive(Debug, Clone)]
pub struct Complex {
    pub receptor: Arc<Molecule>,
    pub ligand: Arc<Molecule>,
}

impl Complex {
    /// Grid center: the ligand centroid.
    pub fn center(&self) -> Result<[f64; 3], TrainError> {
        self.ligand
            .centroid()
            .ok_or_else(|| TrainError::Data(format!("ligand '{}' has no atoms", self.ligand.name)))
    }
}

/// Resolves the structure references of a pose record.
pub trait ComplexSource: Sync {
    fn complex(&self, record: &PoseRecord) -> Result<Complex, TrainError>;
}

/// Structures on disk, paths relative to a base directory, typed under one
/// scheme and cached after first use.
pub struct FileStore {
    base: PathBuf,
    scheme: AtomTypeScheme,
    radii: RadiusTable,
    cache: Mutex<HashMap<String, Arc<Molecule>>>,
}

impl FileStore {
    pub fn new(base: impl Into<PathBuf>, scheme: AtomTypeScheme) -> Self {
        FileStore {
            base: base.into(),
            scheme,
            radii: RadiusTable::default(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_radii(mut self, radii: RadiusTable) -> Self {
        self.radii = radii;
        self
    }

    pub fn base(&self) -> &Path {
        &self.base
    }

    pub fn molecule(&self, reference: &str) -> Result<Arc<Molecule>, TrainError> {
        if let Some(m) = self.cache.lock().unwrap().get(reference) {
            return Ok(m.clone());
        }
        let raw = load_structure(&self.base.join(reference))?;
        let (mut typed, report) = assign_types(&raw, self.scheme);
        if report.unknown > 0 {
            log::warn!("{reference}: {} atoms have no {} channel", report.unknown, self.scheme.name());
        }
        self.radii.apply(&mut typed);
        let typed = Arc::new(typed);
        self.cache
            .lock()
            .unwrap()
            .insert(reference.to_string(), typed.clone());
        Ok(typed)
    }
}

impl ComplexSource for FileStore {
    fn complex(&self, record: &PoseRecord) -> Result<Complex, TrainError> {
        Ok(Complex {
            receptor: self.molecule(&record.receptor)?,
            ligand: self.molecule(&record.ligand)?,
        })
    }
}

/// Typed molecules held in memory, keyed by reference.
#[derive(Debug, Clone, Default)]
pub struct MemoryStore {
    molecules: HashMap<String, Arc<Molecule>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, reference: impl Into<String>, molecule: Molecule) {
        self.molecules.insert(reference.into(), Arc::new(molecule));
    }

    pub fn get(&self, reference: &str) -> Option<&Arc<Molecule>> {
        self.molecules.get(reference)
    }
}

impl ComplexSource for MemoryStore {
    fn complex(&self, record: &PoseRecord) -> Result<Complex, TrainError> {
        let get = |r: &str| {
            self.molecules
                .get(r)
                .cloned()
                .ok_or_else(|| TrainError::Data(format!("no structure named '{r}'")))
        };
        Ok(Complex {
            receptor: get(&record.receptor)?,
            ligand: get(&record.ligand)?,
        })
    }
}
