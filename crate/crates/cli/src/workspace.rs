//! Loaded groups, transfer systems and Mackey functors, cached by a SHA-256
//! of their canonical serialization.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use mackey_core::group::GroupFile;
use mackey_core::io::{from_json, to_json, GroupRef, LoadedSystem, MackeyFile, TransferSystemFile};
use mackey_core::mackey::MackeyFunctor;
use mackey_core::SubgroupLattice;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub type Hash = [u8; 32];

pub fn hash(bytes: &[u8]) -> Hash {
    Sha256::digest(bytes).into()
}

pub fn hex(h: &Hash) -> String {
    h.iter().map(|b| format!("{b:02x}")).collect()
}

/// Reads `--group`: an existing path is a group file, anything else a built-in name.
pub fn group_ref(arg: &str) -> Result<GroupRef, CliError> {
    if Path::new(arg).is_file() {
        let file: GroupFile = from_json(&std::fs::read_to_string(arg)?)?;
        Ok(GroupRef::Table(file))
    } else {
        Ok(GroupRef::Named(arg.to_string()))
    }
}

pub fn read_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Default)]
pub struct Workspace {
    lattices: HashMap<Hash, Arc<SubgroupLattice>>,
    systems: HashMap<Hash, LoadedSystem>,
    functors: HashMap<Hash, MackeyFunctor>,
    system_names: BTreeMap<String, Hash>,
    functor_names: BTreeMap<String, Hash>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    fn group_key(group: &GroupRef) -> Result<(Hash, mackey_core::FiniteGroup), CliError> {
        let g = group.load()?;
        Ok((hash(to_json(&GroupFile::from(g.clone())).as_bytes()), g))
    }

    /// The lattice of a group; equal multiplication tables share one lattice.
    pub fn lattice(&mut self, group: &GroupRef) -> Result<Arc<SubgroupLattice>, CliError> {
        let (key, g) = Self::group_key(group)?;
        Ok(self
            .lattices
            .entry(key)
            .or_insert_with(|| Arc::new(SubgroupLattice::new(Arc::new(g))))
            .clone())
    }

    fn system_key(&mut self, file: &TransferSystemFile) -> Result<(Hash, Arc<SubgroupLattice>), CliError> {
        let (gkey, _) = Self::group_key(&file.group)?;
        let lat = self.lattice(&file.group)?;
        let mut pairs = file.pairs.clone();
        pairs.sort();
        pairs.dedup();
        let canon = format!("{}\n{}", hex(&gkey), to_json(&pairs));
        Ok((hash(canon.as_bytes()), lat))
    }

    pub fn system(&mut self, name: &str, file: &TransferSystemFile) -> Result<LoadedSystem, CliError> {
        let (key, lat) = self.system_key(file)?;
        let loaded = match self.systems.get(&key) {
            Some(s) => s.clone(),
            None => {
                let s = file.load_in(lat)?;
                self.systems.insert(key, s.clone());
                s
            }
        };
        self.system_names.insert(name.to_string(), key);
        Ok(loaded)
    }

    pub fn functor(&mut self, name: &str, file: &MackeyFile) -> Result<MackeyFunctor, CliError> {
        let (skey, _) = self.system_key(&file.ts)?;
        let ts = self.system(&format!("{name}.ts"), &file.ts)?.ts;
        let body = MackeyFile {
            ts: TransferSystemFile {
                group: GroupRef::Named(hex(&skey)),
                pairs: Vec::new(),
            },
            ..file.clone()
        };
        let key = hash(to_json(&body).as_bytes());
        let m = match self.functors.get(&key) {
            Some(m) => m.clone(),
            None => {
                let m = file.load_over(&ts)?;
                self.functors.insert(key, m.clone());
                m
            }
        };
        self.functor_names.insert(name.to_string(), key);
        Ok(m)
    }

    #[cfg(test)]
    pub fn system_by_name(&self, name: &str) -> Option<&LoadedSystem> {
        self.systems.get(self.system_names.get(name)?)
    }

    #[cfg(test)]
    pub fn functor_by_name(&self, name: &str) -> Option<&MackeyFunctor> {
        self.functors.get(self.functor_names.get(name)?)
    }
}
