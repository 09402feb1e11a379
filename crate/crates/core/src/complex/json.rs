use serde::{Deserialize, Serialize};

use super::{Face, SimplicialComplex, Vertex};
use crate::error::{Error, Result};

/// On-disk form: `{"facets": [[int, ...], ...], "name": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub facets: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl ComplexDocument {
    pub fn from_complex(k: &SimplicialComplex, name: Option<&str>) -> Self {
        ComplexDocument {
            facets: k.facets().iter().map(|f| f.vertices().to_vec()).collect(),
            name: name.map(str::to_owned),
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        let faces = self.facets.iter().map(|f| Face::new(f.iter().copied())).collect::<Result<Vec<_>>>()?;
        SimplicialComplex::from_facets(faces)
    }
}

/// Single-line canonical JSON: facets sorted lexicographically, vertices ascending.
pub fn to_canonical_json(k: &SimplicialComplex, name: Option<&str>) -> String {
    serde_json::to_string(&ComplexDocument::from_complex(k, name)).expect("plain data serialises")
}

pub fn parse_complex_json(text: &str) -> Result<(SimplicialComplex, Option<String>)> {
    let doc: ComplexDocument =
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("invalid complex JSON: {e}")))?;
    Ok((doc.to_complex()?, doc.name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_output() {
        let (k, name) = parse_complex_json(r#"{"facets": [[2,1],[0,1],[0,2],[0,1,2]], "name": "tri"}"#).unwrap();
        assert_eq!(name.as_deref(), Some("tri"));
        assert_eq!(to_canonical_json(&k, None), r#"{"facets":[[0,1,2]]}"#);
        assert_eq!(to_canonical_json(&k, Some("t")), r#"{"facets":[[0,1,2]],"name":"t"}"#);
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "{",
            r#"{"facets": []}"#,
            r#"{"facets": [[0,0]]}"#,
            r#"{"facets": [[-1]]}"#,
            r#"{"faces": [[0]]}"#,
        ] {
            assert!(matches!(parse_complex_json(bad), Err(Error::MalformedInput(_))), "{bad}");
        }
        let (e, _) = parse_complex_json(r#"{"facets": [[]]}"#).unwrap();
        assert_eq!(e, SimplicialComplex::empty());
    }

    proptest! {
        #[test]
        fn reingestion_is_idempotent(fs in proptest::collection::vec(proptest::collection::btree_set(0u32..9, 0..4), 1..7)) {
            let k = SimplicialComplex::from_facets(fs.into_iter().map(|s| Face::new(s).unwrap()).collect::<Vec<_>>()).unwrap();
            let text = to_canonical_json(&k, Some("x"));
            let (back, _) = parse_complex_json(&text).unwrap();
            prop_assert_eq!(&back, &k);
            prop_assert_eq!(to_canonical_json(&back, Some("x")), text);
        }
    }
}
