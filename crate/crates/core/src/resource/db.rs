//! On-disk resource database.
//!
//! Layout under the root directory:
//!
//! ```text
//! index.json                    {"version": 1, "chips": [name, ...]}
//! chips/<name>/qpu.json         {"version": 1, "data": <chip description>}
//! chips/<name>/stdqpu.json      {"version": 1, "data": <lattice embedding>}
//! chips/<name>/vqpus.json       {"version": 1, "data": {"mining": ..., "library": {"<n>": [VQPU, ...]}}}
//! db.lock                       advisory lock file
//! ```
//!
//! Every file is written to a temporary name and renamed into place.
//! Writers hold an exclusive lock on `db.lock`, readers a shared one, so a
//! reader never observes a half-rebuilt chip.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::qpu::{ChipError, Qpu};
use super::stdqpu::{build_stdqpu, StdQpu};
use super::substructure::{find_substructures, MiningConfig};
use super::vqpu::{build_vqpus, Vqpu};
use crate::transpiler::Backend;

pub const DB_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DbError {
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("missing database file {0}")]
    Missing(PathBuf),
    #[error("corrupt document {path}: {msg}")]
    Corrupt { path: PathBuf, msg: String },
    #[error("{path} has version {found}, expected {DB_VERSION}")]
    Version { path: PathBuf, found: u32 },
    #[error(transparent)]
    Chip(#[from] ChipError),
    #[error("mining failed: {0}")]
    Mining(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqpuLibrary {
    pub mining: MiningConfig,
    pub n_max: usize,
    /// Keyed by qubit count; each list sorted by average fidelity.
    pub library: BTreeMap<usize, Vec<Vqpu>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChipRecord {
    pub qpu: Qpu,
    pub stdqpu: StdQpu,
    pub vqpus: VqpuLibrary,
}

impl ChipRecord {
    /// Builds all derived data for a chip.
    pub fn build(qpu: Qpu, mining: &MiningConfig) -> Result<Self, DbError> {
        let stdqpu = build_stdqpu(&qpu);
        let active = qpu.active_qubits();
        let n_max = mining.n_max.unwrap_or(30).min(active.len()).max(1);
        let library = mine(&qpu, mining, n_max)?;
        Ok(ChipRecord { qpu, stdqpu, vqpus: VqpuLibrary { mining: mining.clone(), n_max, library } })
    }

    /// VQPUs with exactly `n` qubits; sizes beyond the stored range are
    /// mined on demand.
    pub fn vqpus_of_size(&self, n: usize) -> Vec<Vqpu> {
        if let Some(v) = self.vqpus.library.get(&n) {
            return v.clone();
        }
        if n <= self.vqpus.n_max || n > self.qpu.active_qubits().len() {
            return Vec::new();
        }
        mine(&self.qpu, &self.vqpus.mining, n).ok().and_then(|mut l| l.remove(&n)).unwrap_or_default()
    }
}

fn mine(qpu: &Qpu, cfg: &MiningConfig, n_max: usize) -> Result<BTreeMap<usize, Vec<Vqpu>>, DbError> {
    let mut allowed = vec![false; qpu.info.qubits_num];
    qpu.active_qubits().into_iter().for_each(|q| allowed[q] = true);
    let subs = find_substructures(&qpu.graph, &allowed, &qpu.info.priority_qubits, cfg, n_max).map_err(DbError::Mining)?;
    Ok(subs.into_iter().map(|(n, s)| (n, build_vqpus(&s, qpu))).collect())
}

/// In-memory database contents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResourceDb {
    pub chips: BTreeMap<String, ChipRecord>,
}

#[derive(Serialize, Deserialize)]
struct Doc<T> {
    version: u32,
    data: T,
}

#[derive(Serialize, Deserialize)]
struct Index {
    version: u32,
    chips: Vec<String>,
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> DbError + '_ {
    move |source| DbError::Io { path: path.to_path_buf(), source }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), DbError> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = File::create(&tmp).map_err(io(&tmp))?;
    f.write_all(text.as_bytes()).map_err(io(&tmp))?;
    f.sync_all().map_err(io(&tmp))?;
    fs::rename(&tmp, path).map_err(io(path))
}

fn write_doc<T: Serialize>(path: &Path, data: &T) -> Result<(), DbError> {
    let text = serde_json::to_string_pretty(&Doc { version: DB_VERSION, data }).expect("document serializes");
    write_atomic(path, &(text + "\n"))
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, DbError> {
    if !path.exists() {
        return Err(DbError::Missing(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(io(path))?;
    let raw: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| DbError::Corrupt { path: path.into(), msg: e.to_string() })?;
    let version = raw.get("version").and_then(|v| v.as_u64()).ok_or_else(|| DbError::Corrupt {
        path: path.into(),
        msg: "missing version".into(),
    })? as u32;
    if version != DB_VERSION {
        return Err(DbError::Version { path: path.into(), found: version });
    }
    let doc: Doc<T> = serde_json::from_value(raw).map_err(|e| DbError::Corrupt { path: path.into(), msg: e.to_string() })?;
    Ok(doc.data)
}

struct LockGuard(File);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = self.0.unlock();
    }
}

fn lock(root: &Path, exclusive: bool) -> Result<LockGuard, DbError> {
    fs::create_dir_all(root).map_err(io(root))?;
    let p = root.join("db.lock");
    let f = OpenOptions::new().create(true).truncate(false).write(true).open(&p).map_err(io(&p))?;
    if exclusive {
        f.lock().map_err(io(&p))?;
    } else {
        f.lock_shared().map_err(io(&p))?;
    }
    Ok(LockGuard(f))
}

fn chip_dir(root: &Path, name: &str) -> PathBuf {
    root.join("chips").join(name)
}

fn save_chip(root: &Path, rec: &ChipRecord) -> Result<(), DbError> {
    let dir = chip_dir(root, rec.qpu.name());
    fs::create_dir_all(&dir).map_err(io(&dir))?;
    write_doc(&dir.join("qpu.json"), &rec.qpu.info)?;
    write_doc(&dir.join("stdqpu.json"), &rec.stdqpu)?;
    write_doc(&dir.join("vqpus.json"), &rec.vqpus)
}

fn save_index(root: &Path, db: &ResourceDb) -> Result<(), DbError> {
    let idx = Index { version: DB_VERSION, chips: db.chips.keys().cloned().collect() };
    write_atomic(&root.join("index.json"), &(serde_json::to_string_pretty(&idx).unwrap() + "\n"))
}

fn load_unlocked(root: &Path) -> Result<ResourceDb, DbError> {
    let ip = root.join("index.json");
    if !ip.exists() {
        return Err(DbError::Missing(ip));
    }
    let text = fs::read_to_string(&ip).map_err(io(&ip))?;
    let idx: Index = serde_json::from_str(&text).map_err(|e| DbError::Corrupt { path: ip.clone(), msg: e.to_string() })?;
    if idx.version != DB_VERSION {
        return Err(DbError::Version { path: ip, found: idx.version });
    }
    let mut db = ResourceDb::default();
    for name in idx.chips {
        let dir = chip_dir(root, &name);
        let info: Backend = read_doc(&dir.join("qpu.json"))?;
        let qpu = Qpu::new(info)?;
        let stdqpu = read_doc(&dir.join("stdqpu.json"))?;
        let vqpus = read_doc(&dir.join("vqpus.json"))?;
        db.chips.insert(name, ChipRecord { qpu, stdqpu, vqpus });
    }
    Ok(db)
}

/// Writes the whole database under `root`.
pub fn save_db(db: &ResourceDb, root: &Path) -> Result<(), DbError> {
    let _g = lock(root, true)?;
    for rec in db.chips.values() {
        save_chip(root, rec)?;
    }
    save_index(root, db)
}

/// Reads the database under `root`.
pub fn load_db(root: &Path) -> Result<ResourceDb, DbError> {
    let _g = lock(root, false)?;
    load_unlocked(root)
}

/// Opens the database at `root`, or an empty one if none exists yet.
pub fn load_or_empty(root: &Path) -> Result<ResourceDb, DbError> {
    match load_db(root) {
        Err(DbError::Missing(p)) if p == root.join("index.json") => Ok(ResourceDb::default()),
        r => r,
    }
}

/// Parses, mines and persists one chip, replacing any previous record.
pub fn register_chip(root: &Path, name: &str, chip_json: &str, mining: &MiningConfig) -> Result<ChipRecord, DbError> {
    let qpu = Qpu::from_json(name, chip_json)?;
    let rec = ChipRecord::build(qpu, mining)?;
    let _g = lock(root, true)?;
    let mut db = match load_unlocked(root) {
        Err(DbError::Missing(p)) if p == root.join("index.json") => ResourceDb::default(),
        r => r?,
    };
    save_chip(root, &rec)?;
    db.chips.insert(name.to_string(), rec.clone());
    save_index(root, &db)?;
    Ok(rec)
}

/// In-process handle: readers get an immutable snapshot, writers swap in a
/// complete new one.
#[derive(Debug, Clone)]
pub struct SharedDb {
    root: PathBuf,
    snapshot: Arc<RwLock<Arc<ResourceDb>>>,
}

impl SharedDb {
    pub fn open(root: &Path) -> Result<Self, DbError> {
        let db = load_or_empty(root)?;
        Ok(SharedDb { root: root.to_path_buf(), snapshot: Arc::new(RwLock::new(Arc::new(db))) })
    }

    pub fn snapshot(&self) -> Arc<ResourceDb> {
        self.snapshot.read().expect("lock poisoned").clone()
    }

    pub fn register_chip(&self, name: &str, chip_json: &str, mining: &MiningConfig) -> Result<ChipRecord, DbError> {
        let mut slot = self.snapshot.write().expect("lock poisoned");
        let rec = register_chip(&self.root, name, chip_json, mining)?;
        let mut db = (**slot).clone();
        db.chips.insert(name.to_string(), rec.clone());
        *slot = Arc::new(db);
        Ok(rec)
    }
}
