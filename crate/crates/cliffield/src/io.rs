//! File formats: mesh JSON, CSV tables and the artifact manifest.

use std::fs;
use std::path::{Path, PathBuf};

use cliffield_core::dynamics::{FieldGrid, SurfaceMesh};
use cliffield_core::ga::blade_grade;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::Artifact;
use crate::RunError;

/// JSON form of a [`SurfaceMesh`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub faces: Vec<[usize; 3]>,
    /// Defaults to the boundary-edge vertices.
    pub fixed: Option<Vec<bool>>,
}

impl From<&SurfaceMesh> for MeshFile {
    fn from(m: &SurfaceMesh) -> Self {
        Self {
            dim: m.dim(),
            vertices: m.vertices().map(<[f64]>::to_vec).collect(),
            faces: m.faces().to_vec(),
            fixed: Some(m.fixed_flags().to_vec()),
        }
    }
}

impl MeshFile {
    pub fn to_mesh(&self) -> Result<SurfaceMesh, RunError> {
        if self.vertices.iter().any(|v| v.len() != self.dim) {
            return Err(RunError::Config("mesh vertices must match dim".into()));
        }
        Ok(SurfaceMesh::new(&self.vertices, self.faces.clone(), self.fixed.clone())?)
    }
}

pub fn read_mesh(path: &Path) -> Result<SurfaceMesh, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    let file: MeshFile = serde_json::from_str(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    file.to_mesh()
}

pub fn mesh_json(mesh: &SurfaceMesh) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(&MeshFile::from(mesh)).expect("mesh serializes");
    s.push(b'\n');
    s
}

/// An in-memory CSV table of floats.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, RunError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.serialize(r).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| RunError::Io(e.into_error()))
    }
}

fn csv_err(e: csv::Error) -> RunError {
    RunError::Io(std::io::Error::other(e))
}

/// `x_k`, `phi_a` and the grade-`D` momentum coefficients `P_<blade>` of
/// every node, blades written as generator bitsets.
pub fn grid_table(grid: &FieldGrid) -> Table {
    let d = grid.spacetime_dim();
    let alg = grid.split().algebra();
    let blades: Vec<usize> = (0..alg.blade_count()).filter(|&b| blade_grade(b) == d).collect();
    let mut header: Vec<String> = (0..d).map(|k| format!("x{k}")).collect();
    header.extend((0..grid.field_dim()).map(|a| format!("phi{a}")));
    header.extend(blades.iter().map(|b| format!("P_{b:0w$b}", w = alg.dim())));
    let mut t = Table::new(header);
    for node in 0..grid.node_count() {
        let mut row = grid.coords(node);
        row.extend_from_slice(grid.phi(node));
        match grid.momentum(node) {
            Some(p) => row.extend(blades.iter().map(|&b| p.coeff(b))),
            None => row.extend(blades.iter().map(|_| f64::NAN)),
        }
        t.push(row);
    }
    t
}

/// Writes artifacts under one directory and keeps the manifest.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    manifest: Vec<Artifact>,
}

impl ArtifactWriter {
    pub fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            manifest: Vec::new(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), RunError> {
        fs::create_dir_all(&self.dir)?;
        fs::write(self.dir.join(name), bytes)?;
        self.manifest.push(Artifact {
            path: name.into(),
            bytes: bytes.len() as u64,
            sha256: Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect(),
        });
        Ok(())
    }

    pub fn table(&mut self, name: &str, t: &Table) -> Result<(), RunError> {
        self.write(name, &t.to_csv()?)
    }

    pub fn is_empty(&self) -> bool {
        self.manifest.is_empty()
    }

    pub fn into_manifest(self) -> Vec<Artifact> {
        self.manifest
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_round_trip() {
        let m = SurfaceMesh::flat_disk(3, 1.0, 3).unwrap();
        let file: MeshFile = serde_json::from_slice(&mesh_json(&m)).unwrap();
        let back = file.to_mesh().unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn table_csv() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![1.0, 0.1]);
        t.push(vec![-2.5e-12, f64::NAN]);
        let s = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(s, "a,b\n1.0,0.1\n-2.5e-12,NaN\n");
    }
}
