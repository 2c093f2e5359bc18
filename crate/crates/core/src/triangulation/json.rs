use serde::{Deserialize, Serialize};

use super::{Side, TriangError, Triangle, Triangulation};
use crate::surface::SurfaceSig;

/// Side encoded as `"a:<id>"` or `"b:<id>"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SideDoc(pub Side);

impl TryFrom<String> for SideDoc {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        let (kind, id) = s.split_once(':').ok_or_else(|| format!("bad side `{s}`"))?;
        let id: u32 = id.parse().map_err(|_| format!("bad side id in `{s}`"))?;
        match kind {
            "a" => Ok(SideDoc(Side::Arc(id))),
            "b" => Ok(SideDoc(Side::Bdry(id))),
            _ => Err(format!("side `{s}` must start with a: or b:")),
        }
    }
}

impl From<SideDoc> for String {
    fn from(s: SideDoc) -> String {
        s.0.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfFoldedDoc {
    #[serde(rename = "loop")]
    pub loop_arc: u32,
    pub radius: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TriangleDoc {
    Plain { sides: [SideDoc; 3] },
    SelfFolded { selffolded: SelfFoldedDoc },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationDoc {
    pub format: u32,
    pub arcs: Vec<u32>,
    pub boundary_segs: Vec<u32>,
    pub triangles: Vec<TriangleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_sig: Option<SurfaceSig>,
}

impl Triangulation {
    pub fn to_doc(&self) -> TriangulationDoc {
        TriangulationDoc {
            format: 1,
            arcs: self.arcs.iter().copied().collect(),
            boundary_segs: self.boundary_segs.iter().copied().collect(),
            triangles: self
                .triangles
                .iter()
                .map(|t| match *t {
                    Triangle::Plain(s) => TriangleDoc::Plain { sides: s.map(SideDoc) },
                    Triangle::SelfFolded { loop_arc, radius } => {
                        TriangleDoc::SelfFolded { selffolded: SelfFoldedDoc { loop_arc, radius } }
                    }
                })
                .collect(),
            declared_sig: self.declared_sig.clone(),
        }
    }

    pub fn from_doc(doc: &TriangulationDoc) -> Result<Triangulation, TriangError> {
        if doc.format != 1 {
            return Err(TriangError::Format(format!("unsupported format {}", doc.format)));
        }
        Ok(Triangulation {
            arcs: doc.arcs.iter().copied().collect(),
            boundary_segs: doc.boundary_segs.iter().copied().collect(),
            triangles: doc
                .triangles
                .iter()
                .map(|t| match t {
                    TriangleDoc::Plain { sides } => Triangle::Plain([sides[0].0, sides[1].0, sides[2].0]),
                    TriangleDoc::SelfFolded { selffolded } => Triangle::SelfFolded {
                        loop_arc: selffolded.loop_arc,
                        radius: selffolded.radius,
                    },
                })
                .collect(),
            declared_sig: doc.declared_sig.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("triangulation serialises")
    }

    pub fn from_json(s: &str) -> Result<Triangulation, TriangError> {
        let doc: TriangulationDoc = serde_json::from_str(s).map_err(|e| TriangError::Format(e.to_string()))?;
        Triangulation::from_doc(&doc)
    }
}
