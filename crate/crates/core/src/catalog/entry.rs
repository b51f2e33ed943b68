use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::parse::{parse_radial, ParseError};
use super::CatalogError;
use crate::builders::{IntegralId, PotentialSpec};
use crate::field::Field;
use crate::geomring::{FuncName, GeomScalar};

/// Marker for a potential left as a free function of `r`.
pub const ARBITRARY: &str = "ARBITRARY";

/// Identifier of a catalog entry: a numbered system or a gauge-induced one.
/// Numbered systems sort before gauge systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EntryId {
    Item(u8),
    Gauge(u8),
}

impl EntryId {
    pub const ITEMS: u8 = 30;

    pub fn all() -> impl Iterator<Item = EntryId> {
        (1..=Self::ITEMS).map(EntryId::Item).chain((1..=2).map(EntryId::Gauge))
    }
}

impl fmt::Display for EntryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryId::Item(n) => write!(f, "{n}"),
            EntryId::Gauge(n) => write!(f, "G{n}"),
        }
    }
}

impl FromStr for EntryId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::UnknownId(s.to_string());
        if let Some(rest) = s.strip_prefix('G') {
            return match rest.parse::<u8>() {
                Ok(n @ 1..=2) => Ok(EntryId::Gauge(n)),
                _ => Err(bad()),
            };
        }
        match s.parse::<u8>() {
            Ok(n) if (1..=Self::ITEMS).contains(&n) => Ok(EntryId::Item(n)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for EntryId {
    type Error = CatalogError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<EntryId> for String {
    fn from(id: EntryId) -> String {
        id.to_string()
    }
}

/// A Lie bracket relation `[A_i, B_j] = iħ ε_ijk C_k`, or `[A_i, B_j] = 0`
/// when `result` is `"0"`. Each side is a signed sum of the vector
/// integrals `J`, `S`, `P`, written like `"J-S"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    pub result: String,
}

impl fmt::Display for BracketSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]={}", self.left, self.right, self.result)
    }
}

/// One system of the catalog, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: EntryId,
    pub description: String,
    /// `V0..V5` mapped to mini-language expressions or [`ARBITRARY`].
    pub potentials: BTreeMap<String, String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub integrals: Vec<IntegralId>,
    #[serde(default)]
    pub eps_branches: bool,
    /// Weight functions substituted into a family integral; absent names and
    /// names bound to themselves stay symbolic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_weights: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<BracketSpec>,
    /// Integrals whose failure is an acknowledged open question about the
    /// printed display rather than an engine fault.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flagged: Vec<IntegralId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn potential_index(name: &str) -> Option<usize> {
    match name.parse::<FuncName>() {
        Ok(FuncName::V(n)) if n <= 5 => Some(n as usize),
        _ => None,
    }
}

impl CatalogEntry {
    pub fn from_toml(text: &str) -> Result<Self, CatalogError> {
        let entry: CatalogEntry = toml::from_str(text).map_err(|e| CatalogError::Format(e.to_string()))?;
        entry.validate()?;
        Ok(entry)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("catalog entries always serialize")
    }

    /// Checks names, parses every expression and verifies integral ids.
    pub fn validate(&self) -> Result<(), CatalogError> {
        for name in self.potentials.keys() {
            if potential_index(name).is_none() {
                return Err(self.invalid(format!("unknown potential `{name}`")));
            }
        }
        if self.potentials.len() != 6 {
            return Err(self.invalid("all of V0..V5 must be listed".into()));
        }
        self.potential_spec::<crate::Rational>()?;
        if let Some(weights) = &self.family_weights {
            for (name, expr) in weights {
                match name.parse::<FuncName>() {
                    Ok(FuncName::F(1..=10)) => {}
                    _ => return Err(self.invalid(format!("unknown weight `{name}`"))),
                }
                self.parse::<crate::Rational>(name, expr)?;
            }
        }
        for b in &self.brackets {
            for side in [&b.left, &b.right] {
                super::verify::parse_vector_combo(side).ok_or_else(|| self.invalid(format!("bad bracket side `{side}`")))?;
            }
            if b.result != "0" {
                super::verify::parse_vector_combo(&b.result)
                    .ok_or_else(|| self.invalid(format!("bad bracket result `{}`", b.result)))?;
            }
        }
        if self.integrals.is_empty() && self.brackets.is_empty() {
            return Err(self.invalid("no integrals listed".into()));
        }
        Ok(())
    }

    fn invalid(&self, msg: String) -> CatalogError {
        CatalogError::Invalid { id: self.id.to_string(), msg }
    }

    fn parse<T: Field>(&self, name: &str, expr: &str) -> Result<GeomScalar<T>, CatalogError> {
        parse_radial(expr).map_err(|source: ParseError| CatalogError::Parse {
            id: self.id.to_string(),
            field: name.to_string(),
            source,
        })
    }

    /// The potentials, with ARBITRARY entries as formal function symbols.
    pub fn potential_spec<T: Field>(&self) -> Result<PotentialSpec<T>, CatalogError> {
        let mut spec = PotentialSpec::symbolic();
        for (name, expr) in &self.potentials {
            let idx = potential_index(name).ok_or_else(|| self.invalid(format!("unknown potential `{name}`")))?;
            if expr.trim() != ARBITRARY {
                spec = spec.with(idx, self.parse(name, expr)?);
            }
        }
        Ok(spec)
    }

    /// Names of the potentials kept as free functions.
    pub fn arbitrary_potentials(&self) -> Vec<FuncName> {
        self.potentials
            .iter()
            .filter(|(_, e)| e.trim() == ARBITRARY)
            .filter_map(|(n, _)| n.parse().ok())
            .collect()
    }

    /// Parsed family weights, keyed by function name.
    pub fn weight_bindings<T: Field>(&self) -> Result<BTreeMap<FuncName, GeomScalar<T>>, CatalogError> {
        let mut out = BTreeMap::new();
        if let Some(weights) = &self.family_weights {
            for (name, expr) in weights {
                let f: FuncName = name.parse().map_err(|_| self.invalid(format!("unknown weight `{name}`")))?;
                let value = self.parse(name, expr)?;
                if value != GeomScalar::func_name(f) {
                    out.insert(f, value);
                }
            }
        }
        Ok(out)
    }

    pub fn is_flagged(&self, id: IntegralId) -> bool {
        self.flagged.contains(&id)
    }
}

const EMBEDDED: [(&str, &str); 32] = [
    ("1", include_str!("../../catalog/1.toml")),
    ("2", include_str!("../../catalog/2.toml")),
    ("3", include_str!("../../catalog/3.toml")),
    ("4", include_str!("../../catalog/4.toml")),
    ("5", include_str!("../../catalog/5.toml")),
    ("6", include_str!("../../catalog/6.toml")),
    ("7", include_str!("../../catalog/7.toml")),
    ("8", include_str!("../../catalog/8.toml")),
    ("9", include_str!("../../catalog/9.toml")),
    ("10", include_str!("../../catalog/10.toml")),
    ("11", include_str!("../../catalog/11.toml")),
    ("12", include_str!("../../catalog/12.toml")),
    ("13", include_str!("../../catalog/13.toml")),
    ("14", include_str!("../../catalog/14.toml")),
    ("15", include_str!("../../catalog/15.toml")),
    ("16", include_str!("../../catalog/16.toml")),
    ("17", include_str!("../../catalog/17.toml")),
    ("18", include_str!("../../catalog/18.toml")),
    ("19", include_str!("../../catalog/19.toml")),
    ("20", include_str!("../../catalog/20.toml")),
    ("21", include_str!("../../catalog/21.toml")),
    ("22", include_str!("../../catalog/22.toml")),
    ("23", include_str!("../../catalog/23.toml")),
    ("24", include_str!("../../catalog/24.toml")),
    ("25", include_str!("../../catalog/25.toml")),
    ("26", include_str!("../../catalog/26.toml")),
    ("27", include_str!("../../catalog/27.toml")),
    ("28", include_str!("../../catalog/28.toml")),
    ("29", include_str!("../../catalog/29.toml")),
    ("30", include_str!("../../catalog/30.toml")),
    ("G1", include_str!("../../catalog/G1.toml")),
    ("G2", include_str!("../../catalog/G2.toml")),
];

/// Environment variable naming a directory of override files `<id>.toml`.
pub const CATALOG_DIR_VAR: &str = "SPINCHECK_CATALOG_DIR";

/// The full catalog in id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    entries: BTreeMap<EntryId, CatalogEntry>,
}

impl Catalog {
    /// The catalog compiled into the binary.
    pub fn embedded() -> Result<Self, CatalogError> {
        let mut entries = BTreeMap::new();
        for (name, text) in EMBEDDED {
            let entry = CatalogEntry::from_toml(text)?;
            if entry.id.to_string() != name {
                return Err(CatalogError::Invalid { id: name.into(), msg: format!("file declares id {}", entry.id) });
            }
            entries.insert(entry.id, entry);
        }
        Ok(Catalog { entries })
    }

    /// The embedded catalog with entries replaced by any `<id>.toml` files
    /// found in `dir`.
    pub fn with_overrides(dir: &Path) -> Result<Self, CatalogError> {
        let mut catalog = Self::embedded()?;
        let listing = std::fs::read_dir(dir).map_err(|e| CatalogError::Io(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = listing
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "toml"))
            .collect();
        paths.sort();
        for path in paths {
            let text = std::fs::read_to_string(&path).map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))?;
            let entry = CatalogEntry::from_toml(&text)?;
            catalog.entries.insert(entry.id, entry);
        }
        Ok(catalog)
    }

    /// The embedded catalog, overridden from [`CATALOG_DIR_VAR`] when set.
    pub fn load() -> Result<Self, CatalogError> {
        match std::env::var_os(CATALOG_DIR_VAR) {
            Some(dir) if !dir.is_empty() => Self::with_overrides(Path::new(&dir)),
            _ => Self::embedded(),
        }
    }

    pub fn get(&self, id: EntryId) -> Option<&CatalogEntry> {
        self.entries.get(&id)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
