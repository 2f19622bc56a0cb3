//! The on-disk layout of a generated bundle.
//!
//! ```text
//! manifest.json          theory name, parameter count, orientation, file index
//! theory.gth             the theory, printed
//! presentations/*.json   g0, g1, g1_core, g1_pair, core_pair, E_<A>, EG1_<A>, R_<R>
//! homs/*.json            s, t, e, m, core_*, i, core_inclusion, rho_<A>, theta_<A>
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ClassifierBundle;
use crate::presentation::json::{
    canonical, hom_from_json, hom_to_json, presentation_from_json, presentation_to_json, JsonError,
};
use crate::presentation::{FrameHomSpec, Presentation};
use crate::theory::{parse_theory, print_theory, Theory, TheoryError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub theory: String,
    pub parameters: usize,
    pub orientation: String,
    pub presentations: Vec<String>,
    pub homs: Vec<String>,
}

#[derive(Debug, Error)]
pub enum BundleIoError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: JsonError },
    #[error("theory.gth: {0}")]
    Theory(TheoryError),
}

/// A bundle read back from disk. Homs are unverified.
#[derive(Clone, Debug)]
pub struct LoadedBundle {
    pub manifest: BundleManifest,
    pub theory: Theory,
    pub presentations: BTreeMap<String, Arc<Presentation>>,
    pub homs: Vec<FrameHomSpec>,
}

fn file_name(name: &str) -> String {
    name.replace(':', "_")
}

fn presentations(bundle: &ClassifierBundle) -> Vec<(String, &Arc<Presentation>)> {
    let mut out = vec![
        ("g0".to_string(), &bundle.g0),
        ("g1".to_string(), &bundle.g1),
        ("g1_core".to_string(), &bundle.g1_core),
        ("g1_pair".to_string(), &bundle.g1_pair),
        ("core_pair".to_string(), &bundle.core_pair),
    ];
    for (sort, b) in &bundle.per_sort {
        out.push((format!("E_{sort}"), &b.e));
        out.push((format!("EG1_{sort}"), &b.pullback));
    }
    for (r, sub) in &bundle.rel_subs {
        out.push((format!("R_{r}"), &sub.presentation));
    }
    out
}

fn name_of(named: &[(String, &Arc<Presentation>)], p: &Arc<Presentation>) -> String {
    named
        .iter()
        .find(|(_, q)| Arc::ptr_eq(p, q))
        .map(|(n, _)| n.clone())
        .expect("hom endpoints are bundle presentations")
}

fn write(path: &Path, text: &str) -> Result<(), BundleIoError> {
    fs::write(path, text).map_err(|source| BundleIoError::Io { path: path.display().to_string(), source })
}

fn read(path: &Path) -> Result<String, BundleIoError> {
    fs::read_to_string(path).map_err(|source| BundleIoError::Io { path: path.display().to_string(), source })
}

pub fn write_bundle(bundle: &ClassifierBundle, dir: &Path) -> Result<BundleManifest, BundleIoError> {
    let mkdir =
        |p: &Path| fs::create_dir_all(p).map_err(|source| BundleIoError::Io { path: p.display().to_string(), source });
    mkdir(&dir.join("presentations"))?;
    mkdir(&dir.join("homs"))?;
    let named = presentations(bundle);
    for (name, p) in &named {
        write(&dir.join("presentations").join(format!("{name}.json")), &presentation_to_json(p))?;
    }
    let mut homs = Vec::new();
    for h in bundle.homs() {
        let text = hom_to_json(h, &name_of(&named, &h.source), &name_of(&named, &h.target));
        let name = file_name(&h.name);
        write(&dir.join("homs").join(format!("{name}.json")), &text)?;
        homs.push(name);
    }
    write(&dir.join("theory.gth"), &print_theory(&bundle.theory))?;
    let manifest = BundleManifest {
        theory: bundle.theory.name.clone(),
        parameters: bundle.params.size,
        orientation: match bundle.params.orientation() {
            crate::presentation::Orientation::Open => "open".into(),
            crate::presentation::Orientation::Closed => "closed".into(),
        },
        presentations: named.into_iter().map(|(n, _)| n).collect(),
        homs,
    };
    write(&dir.join("manifest.json"), &canonical(&serde_json::to_value(&manifest).expect("manifest serialises")))?;
    Ok(manifest)
}

pub fn read_bundle(dir: &Path) -> Result<LoadedBundle, BundleIoError> {
    let path = dir.join("manifest.json");
    let manifest: BundleManifest = serde_json::from_str(&read(&path)?)
        .map_err(|e| BundleIoError::Json { path: path.display().to_string(), source: JsonError::from(e) })?;
    let theory = parse_theory(&read(&dir.join("theory.gth"))?).map_err(BundleIoError::Theory)?;
    let mut presentations = BTreeMap::new();
    for name in &manifest.presentations {
        let path = dir.join("presentations").join(format!("{name}.json"));
        let p = presentation_from_json(&read(&path)?)
            .map_err(|source| BundleIoError::Json { path: path.display().to_string(), source })?;
        presentations.insert(name.clone(), Arc::new(p));
    }
    let mut homs = Vec::new();
    for name in &manifest.homs {
        let path = dir.join("homs").join(format!("{name}.json"));
        let h = hom_from_json(&read(&path)?, |n| presentations.get(n).cloned())
            .map_err(|source| BundleIoError::Json { path: path.display().to_string(), source })?;
        homs.push(h);
    }
    Ok(LoadedBundle { manifest, theory, presentations, homs })
}
