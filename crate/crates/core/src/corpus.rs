//! The shipped polynomial and isometric-map files.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::jalgebra::IsometricMap;
use crate::poly::HomoPoly;

/// A polynomial together with a point of the cone component used for
/// sampling.
#[derive(Clone, Debug)]
pub struct PolyEntry {
    pub name: String,
    pub poly: HomoPoly,
    pub seed: Vec<f64>,
}

#[derive(Deserialize)]
struct PolyFile {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    seed: Option<Vec<f64>>,
    #[serde(flatten)]
    poly: HomoPoly,
}

impl PolyEntry {
    /// Parses a polynomial file; without a `seed` the all-ones point is used.
    pub fn from_json(text: &str, fallback_name: &str) -> Result<Self> {
        let f: PolyFile = serde_json::from_str(text)?;
        let n = f.poly.n();
        let seed = f.seed.unwrap_or_else(|| vec![1.0; n]);
        if seed.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: seed.len() });
        }
        Ok(PolyEntry { name: f.name.unwrap_or_else(|| fallback_name.to_string()), poly: f.poly, seed })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("poly");
        Self::from_json(&text, stem)
    }
}

const POLYS: [(&str, &str); 7] = [
    ("x1x2", include_str!("../corpus/x1x2.json")),
    ("x1x2x3", include_str!("../corpus/x1x2x3.json")),
    ("x1sq_x2", include_str!("../corpus/x1sq_x2.json")),
    ("hyperboloid", include_str!("../corpus/hyperboloid.json")),
    ("cubic2", include_str!("../corpus/cubic2.json")),
    ("cubic3", include_str!("../corpus/cubic3.json")),
    ("cubic4", include_str!("../corpus/cubic4.json")),
];

const MAPS: [(&str, &str); 5] = [
    ("psi_zero_2_2", include_str!("../corpus/psi_zero_2_2.json")),
    ("psi_real", include_str!("../corpus/psi_real.json")),
    ("psi_complex", include_str!("../corpus/psi_complex.json")),
    ("psi_quaternion", include_str!("../corpus/psi_quaternion.json")),
    ("psi_line_into_plane", include_str!("../corpus/psi_line_into_plane.json")),
];

pub fn polynomials() -> Vec<PolyEntry> {
    POLYS.iter().map(|(name, text)| PolyEntry::from_json(text, name).expect("shipped corpus parses")).collect()
}

pub fn polynomial(name: &str) -> Option<PolyEntry> {
    polynomials().into_iter().find(|e| e.name == name)
}

pub fn isometric_maps() -> Vec<IsometricMap> {
    MAPS.iter().map(|(_, text)| IsometricMap::from_json(text).expect("shipped corpus parses")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_positive_at_seeds() {
        for e in polynomials() {
            assert!(e.poly.eval(&e.seed) > 0.0, "{}", e.name);
        }
        assert_eq!(polynomials().iter().filter(|e| e.poly.degree() == 3).count(), 5);
    }

    #[test]
    fn maps_match_builders() {
        let maps = isometric_maps();
        assert_eq!(maps[3].psi, IsometricMap::composition(4).unwrap().psi);
        assert!(maps[4].check_isometric().is_ok());
        assert!(!maps[4].is_special());
    }
}
