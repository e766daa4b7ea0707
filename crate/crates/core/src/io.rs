//! JSON file formats. Subgroups are written by lattice label, group elements
//! by name, rationals as canonical `p/q` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::burnside::BurnsideElement;
use crate::group::{FiniteGroup, GroupError, GroupFile};
use crate::insep::Partition;
use crate::lattice::{SubgroupId, SubgroupLattice};
use crate::linalg::{parse_q, q_to_string, Matrix};
use crate::mackey::{MackeyError, MackeyFunctor};
use crate::named::parse_named;
use crate::transfer::{TransferError, TransferSystem};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Mackey(#[from] MackeyError),
    #[error("unknown subgroup `{0}`")]
    UnknownSubgroup(String),
    #[error("unknown group element `{0}`")]
    UnknownElement(String),
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("bad map key `{0}`")]
    BadKey(String),
    #[error("matrix for `{key}` is {got}, expected {want}")]
    BadShape { key: String, got: String, want: String },
}

/// A group given by built-in name (`cyclic:6`) or by an inline table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Table(GroupFile),
}

impl GroupRef {
    pub fn load(&self) -> Result<FiniteGroup, IoError> {
        Ok(match self {
            GroupRef::Named(s) => parse_named(s)?,
            GroupRef::Table(t) => FiniteGroup::try_from(t.clone())?,
        })
    }

    pub fn lattice(&self) -> Result<Arc<SubgroupLattice>, IoError> {
        Ok(Arc::new(SubgroupLattice::new(Arc::new(self.load()?))))
    }
}

fn subgroup(lat: &SubgroupLattice, s: &str) -> Result<SubgroupId, IoError> {
    lat.parse_subgroup(s).ok_or_else(|| IoError::UnknownSubgroup(s.to_string()))
}

fn rational(s: &str) -> Result<crate::linalg::Q, IoError> {
    parse_q(s).ok_or_else(|| IoError::BadRational(s.to_string()))
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(q_to_string).collect()).collect()
}

fn matrix_from_rows(key: &str, rows: &[Vec<String>], shape: (usize, usize)) -> Result<Matrix, IoError> {
    let bad = || IoError::BadShape {
        key: key.to_string(),
        got: format!("{}x{}", rows.len(), rows.first().map_or(0, Vec::len)),
        want: format!("{}x{}", shape.0, shape.1),
    };
    // an empty row list stands for any matrix with no rows
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(bad());
    }
    let parsed: Vec<Vec<_>> = rows
        .iter()
        .map(|r| r.iter().map(|x| rational(x)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_rows(parsed, shape.1))
}

/// `{"group": ..., "pairs": [[K, H], ...]}` listing non-reflexive generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferSystemFile {
    pub group: GroupRef,
    pub pairs: Vec<(String, String)>,
}

/// A transfer system read from a file, with the pairs that closure added.
#[derive(Clone, Debug)]
pub struct LoadedSystem {
    pub ts: TransferSystem,
    pub added: Vec<(SubgroupId, SubgroupId)>,
}

impl TransferSystemFile {
    /// Writes every non-reflexive pair, in lattice order.
    pub fn from_system(group: GroupRef, ts: &TransferSystem) -> Self {
        let lat = ts.lattice();
        let pairs = ts
            .pairs()
            .into_iter()
            .map(|(k, h)| (lat.label(k).to_string(), lat.label(h).to_string()))
            .collect();
        TransferSystemFile { group, pairs }
    }

    pub fn load(&self) -> Result<LoadedSystem, IoError> {
        self.load_in(self.group.lattice()?)
    }

    /// Loads against an already built lattice of the same group.
    pub fn load_in(&self, lat: Arc<SubgroupLattice>) -> Result<LoadedSystem, IoError> {
        let seeds: Vec<(SubgroupId, SubgroupId)> = self
            .pairs
            .iter()
            .map(|(k, h)| Ok((subgroup(&lat, k)?, subgroup(&lat, h)?)))
            .collect::<Result<_, IoError>>()?;
        let ts = TransferSystem::generate(lat, &seeds)?;
        let added = ts.pairs().into_iter().filter(|p| !seeds.contains(p)).collect();
        Ok(LoadedSystem { ts, added })
    }
}

/// `{"classes": [{"rep": H, "members": [...]}], "hull": {J: H}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub classes: Vec<ClassEntry>,
    pub hull: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub rep: String,
    pub members: Vec<String>,
}

impl PartitionFile {
    pub fn from_partition(lat: &SubgroupLattice, part: &Partition) -> Self {
        let label = |h: SubgroupId| lat.label(h).to_string();
        PartitionFile {
            classes: part
                .classes
                .iter()
                .map(|c| ClassEntry {
                    rep: label(c.rep),
                    members: c.members.iter().map(|&m| label(m)).collect(),
                })
                .collect(),
            hull: lat.ids().map(|j| (label(j), label(part.hull[j.0]))).collect(),
        }
    }
}

/// `{"level": H, "coeffs": {"K": "p/q"}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementFile {
    pub level: String,
    pub coeffs: BTreeMap<String, String>,
}

impl ElementFile {
    pub fn from_element(lat: &SubgroupLattice, x: &BurnsideElement) -> Self {
        ElementFile {
            level: lat.label(x.level).to_string(),
            coeffs: x
                .coeffs
                .iter()
                .map(|(&k, c)| (lat.label(k).to_string(), q_to_string(c)))
                .collect(),
        }
    }

    pub fn to_element(&self, lat: &SubgroupLattice) -> Result<BurnsideElement, IoError> {
        let level = subgroup(lat, &self.level)?;
        let mut x = BurnsideElement::zero(level);
        for (k, c) in &self.coeffs {
            let k = subgroup(lat, k)?;
            if !lat.contains(level, k) {
                return Err(IoError::UnknownSubgroup(format!("{} is not inside {}", lat.label(k), self.level)));
            }
            x.add_orbit(lat, k, rational(c)?);
        }
        Ok(x)
    }
}

/// A Lewis diagram on disk. Identity maps and maps touching zero levels are
/// omitted; conjugations are listed for a generating set of elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MackeyFile {
    pub ts: TransferSystemFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub levels: BTreeMap<String, usize>,
    #[serde(default)]
    pub res: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub tr: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub conj: BTreeMap<String, Vec<Vec<String>>>,
}

impl MackeyFile {
    pub fn from_functor(group: GroupRef, m: &MackeyFunctor) -> Self {
        let ts = m.transfer_system();
        let lat = ts.lattice();
        let g = lat.group();
        let label = |h: SubgroupId| lat.label(h).to_string();
        let live: Vec<SubgroupId> = lat.ids().filter(|&l| m.dim(l) > 0).collect();
        let mut res = BTreeMap::new();
        let mut tr = BTreeMap::new();
        let mut conj = BTreeMap::new();
        for &l in &live {
            for &k in live.iter().filter(|&&k| k != l && lat.contains(l, k)) {
                res.insert(format!("{}>{}", label(l), label(k)), matrix_to_rows(m.res(l, k)));
                if let Some(t) = m.tr(k, l) {
                    tr.insert(format!("{}>{}", label(k), label(l)), matrix_to_rows(t));
                }
            }
            for x in g.generators() {
                conj.insert(format!("{},{}", g.name(x), label(l)), matrix_to_rows(m.conj(x, l)));
            }
        }
        MackeyFile {
            ts: TransferSystemFile::from_system(group, ts),
            family: m.family().map(label),
            levels: lat.ids().map(|l| (label(l), m.dim(l))).collect(),
            res,
            tr,
            conj,
        }
    }

    pub fn load(&self) -> Result<MackeyFunctor, IoError> {
        let ts = self.ts.load()?.ts;
        self.load_over(&ts)
    }

    /// Loads over an already loaded transfer system.
    pub fn load_over(&self, ts: &TransferSystem) -> Result<MackeyFunctor, IoError> {
        let lat = ts.lattice();
        let g = lat.group();
        let mut dims = vec![0; lat.len()];
        for (h, &d) in &self.levels {
            dims[subgroup(lat, h)?.0] = d;
        }
        let family = self.family.as_deref().map(|h| subgroup(lat, h)).transpose()?;
        let pair = |key: &str| -> Result<(SubgroupId, SubgroupId), IoError> {
            let (a, b) = key.split_once('>').ok_or_else(|| IoError::BadKey(key.to_string()))?;
            Ok((subgroup(lat, a)?, subgroup(lat, b)?))
        };
        let mut res = BTreeMap::new();
        for (key, rows) in &self.res {
            let (l, k) = pair(key)?;
            if !lat.contains(l, k) {
                return Err(IoError::BadKey(key.clone()));
            }
            res.insert((l, k), matrix_from_rows(key, rows, (dims[k.0], dims[l.0]))?);
        }
        let mut tr = BTreeMap::new();
        for (key, rows) in &self.tr {
            let (k, l) = pair(key)?;
            if !lat.contains(l, k) {
                return Err(IoError::BadKey(key.clone()));
            }
            tr.insert((k, l), matrix_from_rows(key, rows, (dims[l.0], dims[k.0]))?);
        }
        let mut conj = BTreeMap::new();
        for (key, rows) in &self.conj {
            let (x, l) = key.split_once(',').ok_or_else(|| IoError::BadKey(key.clone()))?;
            let x = g.parse_element(x).ok_or_else(|| IoError::UnknownElement(x.to_string()))?;
            let l = subgroup(lat, l)?;
            let gl = lat.conj(x, l);
            conj.insert((x, l), matrix_from_rows(key, rows, (dims[gl.0], dims[l.0]))?);
        }
        Ok(MackeyFunctor::from_tables(ts, family, dims, res, tr, conj)?)
    }
}

/// Pretty JSON with a trailing newline. Map keys come out sorted.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::idempotents;
    use crate::insep::partition;
    use crate::mackey::{burnside_mackey, represented_mackey};

    fn c6() -> (GroupRef, TransferSystem) {
        let g = GroupRef::Named("cyclic:6".into());
        let file = TransferSystemFile {
            group: g.clone(),
            pairs: vec![("C2".into(), "G".into())],
        };
        (g, file.load().unwrap().ts)
    }

    #[test]
    fn system_loader_reports_closure() {
        let file: TransferSystemFile = from_json(r#"{"group": "cyclic:6", "pairs": [["C2", "C6"]]}"#).unwrap();
        let loaded = file.load().unwrap();
        let lat = loaded.ts.lattice();
        let added: Vec<String> = loaded
            .added
            .iter()
            .map(|&(k, h)| format!("{}>{}", lat.label(k), lat.label(h)))
            .collect();
        assert_eq!(added, vec!["C1>C3"]);
    }

    #[test]
    fn inline_group_table() {
        let text = r#"{"group": {"order": 2, "mul": [[0, 1], [1, 0]]}, "pairs": [["C1", "C2"]]}"#;
        let file: TransferSystemFile = from_json(text).unwrap();
        assert_eq!(file.load().unwrap().ts.pair_count(), 1);
        let bad = r#"{"order": 2, "mul": [[0, 1], [1, 1]]}"#;
        assert!(GroupRef::Table(from_json(bad).unwrap()).load().is_err());
    }

    #[test]
    fn element_round_trip() {
        let (_, ts) = c6();
        let lat = ts.lattice();
        for (_, e) in idempotents(&ts, &partition(&ts)) {
            let f = ElementFile::from_element(lat, &e);
            let back: ElementFile = from_json(&to_json(&f)).unwrap();
            assert_eq!(back.to_element(lat).unwrap(), e);
        }
        let f: ElementFile = from_json(r#"{"level": "C6", "coeffs": {"C2": "2/6"}}"#).unwrap();
        assert!(to_json(&ElementFile::from_element(lat, &f.to_element(lat).unwrap())).contains("\"1/3\""));
    }

    #[test]
    fn mackey_round_trip() {
        let (g, ts) = c6();
        let lat = ts.lattice().clone();
        for m in [burnside_mackey(&ts), represented_mackey(&ts, lat.trivial()), MackeyFunctor::zero(&ts)] {
            let text = to_json(&MackeyFile::from_functor(g.clone(), &m));
            let back = from_json::<MackeyFile>(&text).unwrap().load_over(&ts).unwrap();
            assert_eq!(back, m);
            assert_eq!(to_json(&MackeyFile::from_functor(g.clone(), &back)), text);
        }
        let fam = burnside_mackey(&ts).restrict_to_family(lat.parse_subgroup("C3").unwrap());
        let back = MackeyFile::from_functor(g, &fam).load_over(&ts).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn shape_errors_name_the_map() {
        let (g, ts) = c6();
        let mut f = MackeyFile::from_functor(g, &burnside_mackey(&ts));
        f.res.get_mut("C6>C3").unwrap().pop();
        let err = f.load_over(&ts).unwrap_err().to_string();
        assert!(err.contains("C6>C3"), "{err}");
    }

    #[test]
    fn partition_export() {
        let (_, ts) = c6();
        let f = PartitionFile::from_partition(ts.lattice(), &partition(&ts));
        assert_eq!(f.hull["C1"], "C2");
        assert_eq!(f.classes.len(), 2);
    }
}
