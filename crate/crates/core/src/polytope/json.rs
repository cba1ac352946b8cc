use serde::{Deserialize, Serialize};

use super::{HalfSpace, Polytope};
use crate::error::{Error, Result};
use crate::rational::{Rat, RatVec};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HalfSpaceJson {
    pub normal: RatVec,
    #[serde(with = "crate::rational::serde_rat")]
    pub offset: Rat,
}

/// Wire form: `{"dim": n, "vertices": [["p/q", ...], ...], "facets": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolytopeJson {
    pub dim: usize,
    #[serde(default)]
    pub vertices: Vec<RatVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<HalfSpaceJson>>,
}

impl From<&Polytope> for PolytopeJson {
    fn from(p: &Polytope) -> Self {
        PolytopeJson {
            dim: p.dim(),
            vertices: p.vertices().to_vec(),
            facets: Some(
                p.facets()
                    .iter()
                    .map(|h| HalfSpaceJson { normal: h.normal.clone(), offset: h.offset.clone() })
                    .collect(),
            ),
        }
    }
}

impl PolytopeJson {
    /// Builds the polytope. When both descriptions are present they must agree.
    pub fn to_polytope(&self) -> Result<Polytope> {
        let from_facets = |fs: &[HalfSpaceJson]| {
            let hs: Vec<HalfSpace> = fs.iter().map(|f| HalfSpace::new(f.normal.clone(), f.offset.clone())).collect();
            Polytope::from_inequalities(self.dim, &hs)
        };
        match (&self.facets, self.vertices.is_empty()) {
            (Some(fs), true) => from_facets(fs),
            (None, true) => Ok(Polytope::empty(self.dim)),
            (facets, false) => {
                let p = Polytope::conv(self.dim, &self.vertices)?;
                if let Some(fs) = facets {
                    if p.is_full_dimensional() && from_facets(fs)? != p {
                        return Err(Error::Parse("facets and vertices describe different polytopes".into()));
                    }
                }
                Ok(p)
            }
        }
    }
}

impl Polytope {
    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson::from(self)
    }

    pub fn from_json_str(s: &str) -> Result<Polytope> {
        let pj: PolytopeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        pj.to_polytope()
    }
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson::from(self).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn round_trip() {
        let sq = Polytope::cube(2, &int(2));
        let s = serde_json::to_string(&sq).unwrap();
        assert!(s.starts_with(r#"{"dim":2,"vertices":[["0/1","0/1"],["0/1","2/1"]"#));
        let back = Polytope::from_json_str(&s).unwrap();
        assert_eq!(back, sq);
    }

    #[test]
    fn accepts_integer_literals_and_facets_only() {
        let p = Polytope::from_json_str(r#"{"dim":2,"vertices":[[0,0],[1,0],["0","1"]]}"#).unwrap();
        assert_eq!(p, Polytope::simplex(2, &int(1)));
        let q = Polytope::from_json_str(
            r#"{"dim":1,"facets":[{"normal":["1"],"offset":"3"},{"normal":["-1"],"offset":"0"}]}"#,
        )
        .unwrap();
        assert_eq!(q, Polytope::cube(1, &int(3)));
    }

    #[test]
    fn inconsistent_descriptions_rejected() {
        let bad = r#"{"dim":1,"vertices":[["0"],["2"]],"facets":[{"normal":["1"],"offset":"3"},{"normal":["-1"],"offset":"0"}]}"#;
        assert!(Polytope::from_json_str(bad).is_err());
    }
}
