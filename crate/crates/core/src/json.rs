//! Wire formats. Degree keys are decimal strings; matrices use the
//! presentation convention (entry `[i][j]` is the coefficient of target
//! generator `i` in the image of source generator `j`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::matrix::MatrixZn;
use crate::module::{FPModule, ModuleJson};
use crate::morphism::ModuleMorphism;
use crate::ring::RingSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub ring: u64,
    pub lo: i32,
    pub hi: i32,
    pub terms: BTreeMap<String, ModuleJson>,
    #[serde(default)]
    pub differentials: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMapJson {
    pub source: ComplexJson,
    pub target: ComplexJson,
    #[serde(default)]
    pub components: BTreeMap<String, Vec<Vec<i64>>>,
}

fn degree_key(s: &str) -> Result<i32> {
    s.trim()
        .parse::<i32>()
        .map_err(|_| Error::Invalid(format!("degree key {s:?} is not an integer")))
}

fn matrix_of(ring: &RingSpec, rows: &[Vec<i64>], target_gens: usize, source_gens: usize) -> Result<MatrixZn> {
    if rows.is_empty() {
        return Ok(MatrixZn::zeros(target_gens, source_gens));
    }
    if rows.len() != target_gens {
        return Err(Error::Dimension(format!(
            "matrix has {} rows, target has {} generators",
            rows.len(),
            target_gens
        )));
    }
    MatrixZn::from_rows(ring, source_gens, rows)
}

impl ModuleMorphism {
    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            matrix: self.matrix().to_i64_rows(),
        }
    }

    pub fn from_json(source: &FPModule, target: &FPModule, json: &MorphismJson) -> Result<Self> {
        let m = matrix_of(source.ring(), &json.matrix, target.generators(), source.generators())?;
        ModuleMorphism::from_matrix(source, target, &m)
    }
}

impl ChainComplex {
    pub fn to_json(&self) -> ComplexJson {
        let (lo, hi) = self.support().unwrap_or((0, -1));
        let terms = (lo..=hi).map(|m| (m.to_string(), self.term(m).to_json())).collect();
        let differentials = (lo + 1..=hi)
            .map(|m| (m.to_string(), self.diff(m).matrix().to_i64_rows()))
            .collect();
        ComplexJson {
            ring: self.ring().modulus(),
            lo,
            hi,
            terms,
            differentials,
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        let ring = RingSpec::new(json.ring)?;
        let mut terms = BTreeMap::new();
        for (k, m) in &json.terms {
            let d = degree_key(k)?;
            if d < json.lo || d > json.hi {
                return Err(Error::Invalid(format!("term at degree {d} lies outside [{}, {}]", json.lo, json.hi)));
            }
            if m.ring != json.ring {
                return Err(Error::RingMismatch(json.ring, m.ring));
            }
            terms.insert(d, FPModule::from_json(m)?);
        }
        if json.hi < json.lo {
            if !json.differentials.is_empty() {
                return Err(Error::Invalid("empty complex with differentials".into()));
            }
            return Ok(ChainComplex::zero(&ring));
        }
        let term = |d: i32| terms.get(&d).cloned().unwrap_or_else(|| FPModule::zero(&ring));
        let mut diffs = BTreeMap::new();
        for (k, rows) in &json.differentials {
            let d = degree_key(k)?;
            if d <= json.lo || d > json.hi {
                return Err(Error::Invalid(format!("differential at degree {d} lies outside ({}, {}]", json.lo, json.hi)));
            }
            let (s, t) = (term(d), term(d - 1));
            let m = matrix_of(&ring, rows, t.generators(), s.generators())?;
            diffs.insert(d, ModuleMorphism::from_matrix(&s, &t, &m)?);
        }
        let ts: Vec<FPModule> = (json.lo..=json.hi).map(term).collect();
        let ds: Vec<ModuleMorphism> = (json.lo + 1..=json.hi)
            .map(|d| diffs.remove(&d).unwrap_or_else(|| ModuleMorphism::zero(&term(d), &term(d - 1))))
            .collect();
        ChainComplex::new(&ring, json.lo, ts, ds)
    }
}

impl ChainMap {
    pub fn to_json(&self) -> ChainMapJson {
        ChainMapJson {
            source: self.source().to_json(),
            target: self.target().to_json(),
            components: self
                .source()
                .degrees()
                .map(|m| (m.to_string(), self.comp(m).matrix().to_i64_rows()))
                .collect(),
        }
    }

    pub fn from_json(json: &ChainMapJson) -> Result<Self> {
        let s = ChainComplex::from_json(&json.source)?;
        let t = ChainComplex::from_json(&json.target)?;
        Self::from_json_between(&s, &t, &json.components)
    }

    /// Chain map between already loaded complexes.
    pub fn from_json_between(
        s: &ChainComplex,
        t: &ChainComplex,
        components: &BTreeMap<String, Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let mut comps = BTreeMap::new();
        for (k, rows) in components {
            let d = degree_key(k)?;
            let (a, b) = (s.term(d), t.term(d));
            let m = matrix_of(s.ring(), rows, b.generators(), a.generators())?;
            comps.insert(d, ModuleMorphism::from_matrix(&a, &b, &m)?);
        }
        let list = s
            .degrees()
            .map(|d| comps.remove(&d).unwrap_or_else(|| ModuleMorphism::zero(&s.term(d), &t.term(d))))
            .collect();
        if let Some((&d, _)) = comps.iter().find(|(_, c)| !c.is_zero()) {
            return Err(Error::Invalid(format!("nonzero component at degree {d} outside the source support")));
        }
        ChainMap::new(s, t, list)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let r = RingSpec::new(12).unwrap();
        let m = FPModule::from_cyclic_orders(&r, &[4, 6]);
        let c = ChainComplex::disk(1, &m);
        let back = ChainComplex::from_json(&c.to_json()).unwrap();
        assert!(back.same_shape(&c));
        let s = serde_json::to_string(&c.to_json()).unwrap();
        assert_eq!(s, serde_json::to_string(&back.to_json()).unwrap());
        let f = ChainMap::identity(&c);
        let g = ChainMap::from_json(&f.to_json()).unwrap();
        assert!(g.is_iso());
    }

    #[test]
    fn rejects_bad_input() {
        let bad = r#"{"ring": 4, "lo": 0, "hi": 1, "terms": {"0": {"ring": 4, "generators": 1},
            "1": {"ring": 4, "generators": 1}}, "differentials": {"1": [[1]]}, "extra": 3}"#;
        assert!(serde_json::from_str::<ComplexJson>(bad).is_err());
        let dd = r#"{"ring": 4, "lo": 0, "hi": 2, "terms": {"0": {"ring": 4, "generators": 1},
            "1": {"ring": 4, "generators": 1}, "2": {"ring": 4, "generators": 1}},
            "differentials": {"1": [[1]], "2": [[1]]}}"#;
        let j: ComplexJson = serde_json::from_str(dd).unwrap();
        assert!(matches!(ChainComplex::from_json(&j), Err(Error::DeltaSquared { degree: 2 })));
    }
}
