//! A mesh together with whatever bundle data accompanies it.

use crate::bundle::ChartAtlas;
use crate::error::{Error, Result};
use crate::fields::{ConnectionField, SectionField, TwoFormField};
use crate::generators::GeneratorSpec;
use crate::mesh::SurfaceMesh;

pub const HBAR_CONVENTION: &str = "hbar=1";

#[derive(Debug, Clone)]
pub struct Instance {
    pub mesh: SurfaceMesh,
    pub section: Option<SectionField>,
    pub connection: Option<ConnectionField>,
    pub twoform: Option<TwoFormField>,
    pub atlas: Option<ChartAtlas>,
    pub generator: Option<GeneratorSpec>,
}

fn check_edges(mesh: &SurfaceMesh, conn: &ConnectionField) -> Result<()> {
    for (a, b, _) in conn.iter() {
        if !mesh.has_edge(a, b) {
            return Err(Error::Document(format!("connection edge ({a}, {b}) is not a mesh edge")));
        }
    }
    Ok(())
}

impl Instance {
    pub fn new(mesh: SurfaceMesh) -> Self {
        Self { mesh, section: None, connection: None, twoform: None, atlas: None, generator: None }
    }

    /// Checks array lengths and edge references against the mesh.
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.section {
            s.check_mesh(&self.mesh)?;
        }
        if let Some(w) = &self.twoform {
            if w.values().len() != self.mesh.num_faces() {
                return Err(Error::LengthMismatch {
                    what: "two-form faces",
                    expected: self.mesh.num_faces(),
                    found: w.values().len(),
                });
            }
        }
        if let Some(c) = &self.connection {
            check_edges(&self.mesh, c)?;
        }
        if let Some(a) = &self.atlas {
            if a.membership.len() != self.mesh.num_faces() {
                return Err(Error::LengthMismatch {
                    what: "atlas face charts",
                    expected: self.mesh.num_faces(),
                    found: a.membership.len(),
                });
            }
            for c in &a.connections {
                check_edges(&self.mesh, c)?;
            }
        }
        Ok(())
    }

    pub fn section(&self) -> Result<&SectionField> {
        self.section.as_ref().ok_or_else(|| Error::Document("instance has no section".into()))
    }

    pub fn twoform(&self) -> Result<&TwoFormField> {
        self.twoform.as_ref().ok_or_else(|| Error::Document("instance has no two-form".into()))
    }

    pub fn connection(&self) -> Result<&ConnectionField> {
        self.connection.as_ref().ok_or_else(|| Error::Document("instance has no connection".into()))
    }

    pub fn atlas(&self) -> Result<&ChartAtlas> {
        self.atlas.as_ref().ok_or_else(|| Error::Document("instance has no atlas".into()))
    }
}
