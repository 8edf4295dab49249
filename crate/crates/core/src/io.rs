//! JSON instance documents and canonical output.
//!
//! Canonical form: object keys sorted, floats written with 17 significant
//! digits (`{:.16e}`), one line plus a trailing newline. Loading and saving
//! a canonical document reproduces it byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bundle::ChartAtlas;
use crate::error::{Error, Result};
use crate::fields::{ConnectionField, SectionField, SectionPatch, TwoFormField};
use crate::generators::GeneratorSpec;
use crate::instance::{Instance, HBAR_CONVENTION};
use crate::mesh::SurfaceMesh;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshDoc {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    #[serde(default)]
    pub corners: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchDoc {
    pub psi: Vec<[f64; 2]>,
    /// Faces that read the patch values.
    pub faces: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionDoc {
    pub psi: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch: Option<PatchDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionDoc {
    /// (tail, head, theta) with theta the integral from tail to head.
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoFormDoc {
    pub faces: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasDoc {
    /// Chart numbers (1, 2) containing each face.
    pub face_charts: Vec<Vec<u8>>,
    pub connections: [ConnectionDoc; 2],
    pub anchors: [usize; 2],
    pub base: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaDoc {
    pub hbar_convention: String,
    #[serde(default)]
    pub generator: Option<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub mesh: MeshDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<SectionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twoform: Option<TwoFormDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atlas: Option<AtlasDoc>,
    pub meta: MetaDoc,
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

fn connection_doc(conn: &ConnectionField) -> ConnectionDoc {
    ConnectionDoc { edges: conn.iter().collect() }
}

fn connection_from_doc(doc: &ConnectionDoc, mesh: &SurfaceMesh) -> Result<ConnectionField> {
    let mut conn = ConnectionField::new();
    let mut seen = BTreeSet::new();
    for &(a, b, theta) in &doc.edges {
        if !mesh.has_edge(a, b) {
            return Err(Error::Document(format!("connection edge ({a}, {b}) is not a mesh edge")));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::Document(format!("connection edge ({a}, {b}) given twice")));
        }
        if !theta.is_finite() {
            return Err(Error::Document(format!("connection edge ({a}, {b}) has value {theta}")));
        }
        conn.set(a, b, theta);
    }
    Ok(conn)
}

impl InstanceDocument {
    pub fn from_instance(inst: &Instance) -> Self {
        let mesh = &inst.mesh;
        let section = inst.section.as_ref().map(|s| SectionDoc {
            psi: pairs(s.values()),
            patch: s.patch().map(|p| PatchDoc {
                psi: pairs(&p.psi),
                faces: (0..p.faces.len()).filter(|&f| p.faces[f]).collect(),
            }),
        });
        let atlas = inst.atlas.as_ref().map(|a| AtlasDoc {
            face_charts: a
                .membership
                .iter()
                .map(|m| [1u8, 2].into_iter().filter(|c| m[*c as usize - 1]).collect())
                .collect(),
            connections: [connection_doc(&a.connections[0]), connection_doc(&a.connections[1])],
            anchors: a.anchors,
            base: a.base,
        });
        Self {
            mesh: MeshDoc {
                vertices: mesh.positions().to_vec(),
                faces: mesh.faces().to_vec(),
                corners: mesh.corner_vertices().iter().copied().collect(),
            },
            section,
            connection: inst.connection.as_ref().map(connection_doc),
            twoform: inst.twoform.as_ref().map(|w| TwoFormDoc { faces: w.values().to_vec() }),
            atlas,
            meta: MetaDoc { hbar_convention: HBAR_CONVENTION.into(), generator: inst.generator.clone() },
        }
    }

    /// Builds and validates the instance. Faces re-oriented by the mesh
    /// builder have their two-form values negated.
    pub fn into_instance(self) -> Result<Instance> {
        if self.meta.hbar_convention != HBAR_CONVENTION {
            return Err(Error::Document(format!(
                "unsupported hbar convention {:?} (expected {HBAR_CONVENTION:?})",
                self.meta.hbar_convention
            )));
        }
        if let Some(v) = self.mesh.vertices.iter().flatten().find(|x| !x.is_finite()) {
            return Err(Error::Document(format!("vertex coordinate {v}")));
        }
        let mesh = SurfaceMesh::build(self.mesh.vertices, self.mesh.faces, self.mesh.corners)?;
        let nf = mesh.num_faces();

        let twoform = match self.twoform {
            Some(t) => {
                if t.faces.len() != nf {
                    return Err(Error::LengthMismatch { what: "two-form faces", expected: nf, found: t.faces.len() });
                }
                let omega =
                    t.faces.iter().enumerate().map(|(f, &w)| if mesh.is_flipped(f) { -w } else { w }).collect();
                Some(TwoFormField::new(omega))
            }
            None => None,
        };

        let section = match self.section {
            Some(s) => Some(match s.patch {
                None => SectionField::new(complexes(&s.psi)),
                Some(p) => {
                    let mut faces = vec![false; nf];
                    for f in p.faces {
                        *faces
                            .get_mut(f)
                            .ok_or_else(|| Error::Document(format!("patch face {f} out of range")))? = true;
                    }
                    SectionField::with_patch(complexes(&s.psi), SectionPatch { psi: complexes(&p.psi), faces })?
                }
            }),
            None => None,
        };

        let connection = self.connection.as_ref().map(|c| connection_from_doc(c, &mesh)).transpose()?;

        let atlas = match self.atlas {
            Some(a) => {
                if a.face_charts.len() != nf {
                    return Err(Error::LengthMismatch {
                        what: "atlas face charts",
                        expected: nf,
                        found: a.face_charts.len(),
                    });
                }
                let mut membership = Vec::with_capacity(nf);
                for (f, charts) in a.face_charts.iter().enumerate() {
                    let mut m = [false; 2];
                    for &c in charts {
                        match c {
                            1 | 2 => m[c as usize - 1] = true,
                            _ => return Err(Error::Document(format!("face {f}: unknown chart {c}"))),
                        }
                    }
                    membership.push(m);
                }
                Some(ChartAtlas {
                    membership,
                    connections: [
                        connection_from_doc(&a.connections[0], &mesh)?,
                        connection_from_doc(&a.connections[1], &mesh)?,
                    ],
                    base: a.base,
                    anchors: a.anchors,
                })
            }
            None => None,
        };

        let inst = Instance { mesh, section, connection, twoform, atlas, generator: self.meta.generator };
        inst.validate()?;
        Ok(inst)
    }
}

/// Writes floats as `{:.16e}`; everything else as compact JSON.
struct CanonicalFormatter;

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Canonical JSON text of any serializable value.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    // going through Value sorts object keys
    let value = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    let file = tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    // temporary files are created owner-only
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        file.set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    #[cfg(not(unix))]
    drop(file);
    Ok(())
}

pub fn instance_to_string(inst: &Instance) -> Result<String> {
    to_canonical_string(&InstanceDocument::from_instance(inst))
}

pub fn instance_from_str(text: &str) -> Result<Instance> {
    let doc: InstanceDocument = serde_json::from_str(text)?;
    doc.into_instance()
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<()> {
    write_atomic(path, instance_to_string(inst)?.as_bytes())
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    instance_from_str(&std::fs::read_to_string(path)?)
}

/// Parsed JSON of any document (reports, transition files).
pub fn load_value(path: &Path) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Sparse map view used by transition documents.
pub fn complex_map_doc(values: &BTreeMap<usize, Complex64>) -> Vec<(usize, f64, f64)> {
    values.iter().map(|(&v, z)| (v, z.re, z.im)).collect()
}
