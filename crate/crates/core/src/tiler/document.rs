use serde::{Deserialize, Serialize};

use super::{Pairing, Placement, Stage, TileSpec, TilingRegion, VerificationReport};
use crate::error::{Error, Result};
use crate::group::{BackendDescriptor, Word};
use crate::swinger::CertificateDocument;

/// Seed and budgets a region was produced with.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub strategy: String,
    pub seed: Option<u64>,
    pub search_budget: u64,
    pub ball_budget: usize,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementDocument {
    pub anchor: String,
    /// `"A"` or `"greedy"`.
    pub stage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingDocument {
    pub representatives: Vec<String>,
}

/// JSON form of a [`TilingRegion`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TilingDocument {
    pub backend: BackendDescriptor,
    #[serde(rename = "F")]
    pub f: Vec<String>,
    pub v: Option<String>,
    pub z: Option<String>,
    pub r: Option<usize>,
    #[serde(rename = "R")]
    pub big_r: Option<usize>,
    pub certificate: Option<CertificateDocument>,
    pub core_radius: usize,
    pub work_radius: usize,
    pub placements: Vec<PlacementDocument>,
    pub pairing: PairingDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl TilingDocument {
    pub fn from_region(region: &TilingRegion, provenance: Option<Provenance>) -> Self {
        let g = &region.backend;
        let f = |w: &Word| g.format_word(w);
        let spec = region.spec.as_ref();
        TilingDocument {
            backend: g.descriptor(),
            f: region.f.iter().map(f).collect(),
            v: spec.map(|s| f(&s.v)),
            z: spec.map(|s| f(&s.z)),
            r: spec.map(|s| s.r),
            big_r: spec.map(|s| s.big_r),
            certificate: spec.map(|s| s.certificate.to_document(g)),
            core_radius: region.core_radius,
            work_radius: region.work_radius,
            placements: region
                .placements
                .iter()
                .map(|p| PlacementDocument {
                    anchor: f(&p.anchor),
                    stage: match p.stage {
                        Stage::A => "A".into(),
                        Stage::Greedy { .. } => "greedy".into(),
                    },
                    round: match p.stage {
                        Stage::A => None,
                        Stage::Greedy { round } => Some(round),
                    },
                })
                .collect(),
            pairing: PairingDocument {
                representatives: region.pairing.representatives().map(f).collect(),
            },
            report: region.report.clone(),
            provenance,
        }
    }

    /// Rebuilds the region. The recorded pairing is recomputed from the
    /// representatives; the report is carried along unverified.
    pub fn to_region(&self) -> Result<TilingRegion> {
        let g = self.backend.to_backend()?;
        let parse = |s: &str| g.parse_word(s);
        let f = self.f.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
        let spec = match (&self.z, &self.certificate) {
            (Some(z), Some(cert)) => {
                let spec = TileSpec::new(f.clone(), parse(z)?, cert.to_certificate(&g)?, &g)?;
                let check = |name: &str, ok: bool| {
                    if ok {
                        Ok(())
                    } else {
                        Err(Error::MalformedInput(format!("recorded {name} is inconsistent with F and z")))
                    }
                };
                check("v", self.v.as_deref().map(parse).transpose()?.as_ref() == Some(&spec.v))?;
                check("r", self.r == Some(spec.r))?;
                check("R", self.big_r == Some(spec.big_r))?;
                Some(spec)
            }
            (None, None) => {
                if f != [Word::identity()] {
                    return Err(Error::MalformedInput("a region without z must have F = {1}".into()));
                }
                None
            }
            _ => return Err(Error::MalformedInput("z and certificate must appear together".into())),
        };
        let placements = self
            .placements
            .iter()
            .map(|p| {
                let stage = match (p.stage.as_str(), p.round) {
                    ("A", None) => Stage::A,
                    ("greedy", Some(round)) => Stage::Greedy { round },
                    _ => {
                        return Err(Error::MalformedInput(format!(
                            "bad placement stage {:?} with round {:?}",
                            p.stage, p.round
                        )))
                    }
                };
                Ok(Placement { anchor: parse(&p.anchor)?, stage })
            })
            .collect::<Result<Vec<_>>>()?;
        let pairing = match &spec {
            Some(spec) => {
                let reps = self
                    .pairing
                    .representatives
                    .iter()
                    .map(|s| parse(s))
                    .collect::<Result<Vec<_>>>()?;
                for s in &reps {
                    if !spec.in_c(s, &g) {
                        return Err(Error::MalformedInput(format!("representative {s:?} is not in C")));
                    }
                }
                Pairing::from_representatives(reps, spec, &g)?
            }
            None => Pairing::default(),
        };
        Ok(TilingRegion {
            backend: g,
            f,
            spec,
            core_radius: self.core_radius,
            work_radius: self.work_radius,
            placements,
            pairing,
            report: self.report.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl TilingRegion {
    pub fn to_document(&self, provenance: Option<Provenance>) -> TilingDocument {
        TilingDocument::from_region(self, provenance)
    }
}

/// Loads a region from its JSON document.
pub fn load_region(json: &str) -> Result<TilingRegion> {
    TilingDocument::from_json(json)?.to_region()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupBackend;
    use crate::tiler::{build_tiling, BuildOptions};

    #[test]
    fn region_round_trips_through_json() {
        let g = GroupBackend::free(2).unwrap();
        let f = vec![Word::identity(), g.parse_word("a").unwrap()];
        let region = build_tiling(&f, 3, &BuildOptions::default(), &g).unwrap();
        let json = region.to_document(None).to_json().unwrap();
        let back = load_region(&json).unwrap();
        assert_eq!(back, region);
        assert_eq!(back.to_document(None).to_json().unwrap(), json);
    }

    #[test]
    fn singleton_region_round_trips() {
        let g = GroupBackend::free(2).unwrap();
        let region = build_tiling(&[g.parse_word("b").unwrap()], 2, &BuildOptions::default(), &g).unwrap();
        let json = region.to_document(None).to_json().unwrap();
        assert_eq!(load_region(&json).unwrap(), region);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(matches!(load_region("{"), Err(Error::MalformedInput(_))));
        let g = GroupBackend::free(2).unwrap();
        let f = vec![Word::identity(), g.parse_word("a").unwrap()];
        let region = build_tiling(&f, 2, &BuildOptions::default(), &g).unwrap();
        let mut doc = region.to_document(None);
        doc.r = Some(7);
        assert!(matches!(doc.to_region(), Err(Error::MalformedInput(_))));
        let mut doc = region.to_document(None);
        doc.placements[0].stage = "B".into();
        assert!(matches!(doc.to_region(), Err(Error::MalformedInput(_))));
    }
}
