//! JSON class, hypothesis and measure definitions.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::class::{ClassError, FiniteClass, Hypothesis};
use super::family::{ClassFamily, ConceptClass, FamilyError};
use super::measure::{DiscreteMeasure, MeasureError};
use super::point::{Point, Rational};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed definition: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("{0}")]
    Invalid(String),
}

/// `{ "domain": [...], "hypotheses": [[0,1,...], ...] }`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitDef {
    pub domain: Vec<Point>,
    pub hypotheses: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ids: Option<Vec<String>>,
}

impl ExplicitDef {
    pub fn build(&self) -> Result<FiniteClass, ClassError> {
        let class = FiniteClass::from_bits(self.domain.clone(), self.hypotheses.clone())?;
        match &self.ids {
            None => Ok(class),
            Some(ids) => {
                let rows = (0..class.len()).map(|h| class.row(h).to_vec()).collect();
                FiniteClass::new(self.domain.clone(), ids.clone(), rows)
            }
        }
    }

    pub fn from_class(class: &FiniteClass) -> Self {
        Self {
            domain: class.domain().to_vec(),
            hypotheses: (0..class.len())
                .map(|h| class.row(h).iter().map(|&b| u8::from(b)).collect())
                .collect(),
            ids: Some(class.ids().to_vec()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    ExplicitList,
    RationalThresholds,
    NaturalThresholds,
    FiniteSupport,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ExplicitDef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_size: Option<u64>,
}

/// `{ "family": "finite-support", "params": { "domain_size": 12 } }`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDef {
    pub family: FamilyName,
    #[serde(default)]
    pub params: FamilyParams,
}

impl FamilyDef {
    pub fn build(&self) -> Result<ClassFamily, LoadError> {
        let p = &self.params;
        match self.family {
            FamilyName::ExplicitList => {
                let defs = p
                    .components
                    .as_ref()
                    .ok_or_else(|| LoadError::Invalid("explicit-list family needs params.components".into()))?;
                let classes = defs.iter().map(ExplicitDef::build).collect::<Result<Vec<_>, _>>()?;
                Ok(ClassFamily::explicit(classes, p.dims.clone())?)
            }
            FamilyName::RationalThresholds => Ok(ClassFamily::RationalThresholds),
            FamilyName::NaturalThresholds => Ok(ClassFamily::NaturalThresholds),
            FamilyName::FiniteSupport => Ok(ClassFamily::FiniteSupport {
                domain_size: p.domain_size,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolicName {
    FiniteSupport,
    DyadicThresholds,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ones: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<u32>,
}

/// `{ "class": "dyadic-thresholds", "params": { "bits": 80 } }`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicDef {
    pub class: SymbolicName,
    #[serde(default)]
    pub params: SymbolicParams,
}

/// Any class-definition file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassDef {
    Explicit(ExplicitDef),
    Family(FamilyDef),
    Symbolic(SymbolicDef),
}

/// What a class definition resolves to.
#[derive(Clone, Debug)]
pub enum LoadedClass {
    Concept(ConceptClass),
    Family(ClassFamily),
}

impl LoadedClass {
    pub fn into_concept(self) -> Result<ConceptClass, LoadError> {
        match self {
            LoadedClass::Concept(c) => Ok(c),
            LoadedClass::Family(_) => Err(LoadError::Invalid("expected a single class, found a family".into())),
        }
    }

    pub fn into_family(self) -> Result<ClassFamily, LoadError> {
        match self {
            LoadedClass::Family(f) => Ok(f),
            LoadedClass::Concept(_) => Err(LoadError::Invalid("expected a family, found a single class".into())),
        }
    }

    pub fn into_finite(self) -> Result<Arc<FiniteClass>, LoadError> {
        match self.into_concept()? {
            ConceptClass::Finite(c) => Ok(c),
            _ => Err(LoadError::Invalid("expected an explicit finite class".into())),
        }
    }
}

impl ClassDef {
    pub fn build(&self) -> Result<LoadedClass, LoadError> {
        match self {
            ClassDef::Explicit(e) => Ok(LoadedClass::Concept(ConceptClass::Finite(Arc::new(e.build()?)))),
            ClassDef::Family(f) => Ok(LoadedClass::Family(f.build()?)),
            ClassDef::Symbolic(s) => {
                let p = &s.params;
                let concept = match s.class {
                    SymbolicName::FiniteSupport => ConceptClass::FiniteSupport {
                        max_ones: p
                            .max_ones
                            .ok_or_else(|| LoadError::Invalid("finite-support class needs params.max_ones".into()))?,
                        domain_size: p.domain_size,
                    },
                    SymbolicName::DyadicThresholds => {
                        let bits = p
                            .bits
                            .ok_or_else(|| LoadError::Invalid("dyadic-thresholds class needs params.bits".into()))?;
                        if bits == 0 || bits > 4096 {
                            return Err(LoadError::Invalid(format!("bits must be in 1..=4096, got {bits}")));
                        }
                        ConceptClass::DyadicThresholds { bits }
                    }
                };
                Ok(LoadedClass::Concept(concept))
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}

/// A class given inline or as a path to a class file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassSource {
    Path(PathBuf),
    Inline(ClassDef),
}

impl ClassSource {
    pub fn load(&self) -> Result<LoadedClass, LoadError> {
        match self {
            ClassSource::Path(p) => ClassDef::from_file(p)?.build(),
            ClassSource::Inline(d) => d.build(),
        }
    }
}

impl From<ClassDef> for ClassSource {
    fn from(d: ClassDef) -> Self {
        ClassSource::Inline(d)
    }
}

/// `{"constant": 1}`, `{"threshold": "1/3"}` or `{"indicator": [2, 5]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisDef {
    Constant(u8),
    Threshold(Point),
    Indicator(Vec<Point>),
}

impl HypothesisDef {
    pub fn build(&self) -> Result<Hypothesis, LoadError> {
        match self {
            HypothesisDef::Constant(b) if *b <= 1 => Ok(Hypothesis::Constant(*b == 1)),
            HypothesisDef::Constant(b) => Err(ClassError::NotBinary(*b).into()),
            HypothesisDef::Threshold(p) => p
                .value()
                .cloned()
                .map(Hypothesis::Threshold)
                .ok_or_else(|| ClassError::InvalidPoint(p.to_string()).into()),
            HypothesisDef::Indicator(pts) => Ok(Hypothesis::Indicator(pts.iter().cloned().collect::<BTreeSet<_>>())),
        }
    }

    pub fn threshold(cut: &Rational) -> Self {
        HypothesisDef::Threshold(Point::Value(cut.clone()))
    }
}

/// `{ "support": [...], "mass": ["1/2", ...] }` or `{ "geometric": 20 }`
/// (mass `2^-i` on the integers `1..=20`, residual on the last).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureDef {
    Explicit { support: Vec<Point>, mass: Vec<String> },
    Geometric { geometric: u64 },
}

impl MeasureDef {
    pub fn build(&self) -> Result<DiscreteMeasure, LoadError> {
        match self {
            MeasureDef::Explicit { support, mass } => Ok(DiscreteMeasure::parse(support.clone(), mass)?),
            MeasureDef::Geometric { geometric } => {
                let n = i64::try_from(*geometric).map_err(|_| LoadError::Invalid("geometric support too large".into()))?;
                Ok(DiscreteMeasure::geometric((1..=n).map(Point::int).collect())?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_class_file() {
        let def = ClassDef::from_json(r#"{"domain": ["a", "b"], "hypotheses": [[0, 0], [0, 1], [1, 0]]}"#).unwrap();
        let class = def.build().unwrap().into_finite().unwrap();
        assert_eq!(class.len(), 3);
        assert_eq!(class.ids()[2], "h2");
    }

    #[test]
    fn family_files() {
        let fs = ClassDef::from_json(r#"{"family": "finite-support", "params": {"domain_size": 12}}"#).unwrap();
        let fam = fs.build().unwrap().into_family().unwrap();
        assert_eq!(fam.component(3).unwrap().dim, 3);

        let rt = ClassDef::from_json(r#"{"family": "rational-thresholds"}"#).unwrap();
        assert!(rt.build().unwrap().into_family().unwrap().component_count().is_none());

        let el = ClassDef::from_json(
            r#"{"family": "explicit-list", "params": {"components": [
                {"domain": ["a"], "hypotheses": [[0]]},
                {"domain": ["a", "b"], "hypotheses": [[0,0],[0,1],[1,0],[1,1]]}
            ], "dims": [0, 2]}}"#,
        )
        .unwrap();
        assert_eq!(el.build().unwrap().into_family().unwrap().component_count(), Some(2));
    }

    #[test]
    fn wrong_declared_dim_rejected() {
        let el = ClassDef::from_json(
            r#"{"family": "explicit-list", "params": {"components": [
                {"domain": ["a", "b"], "hypotheses": [[0,0],[0,1],[1,0],[1,1]]}
            ], "dims": [1]}}"#,
        )
        .unwrap();
        assert!(matches!(el.build(), Err(LoadError::Family(FamilyError::DimMismatch { .. }))));
    }

    #[test]
    fn symbolic_class() {
        let def = ClassDef::from_json(r#"{"class": "dyadic-thresholds", "params": {"bits": 8}}"#).unwrap();
        assert!(matches!(
            def.build().unwrap().into_concept().unwrap(),
            ConceptClass::DyadicThresholds { bits: 8 }
        ));
        let bad = ClassDef::from_json(r#"{"class": "finite-support"}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn hypothesis_and_measure_defs() {
        let hs: Vec<HypothesisDef> =
            serde_json::from_str(r#"[{"constant": 1}, {"threshold": "1/3"}, {"indicator": [2, 5]}]"#).unwrap();
        let built: Vec<Hypothesis> = hs.iter().map(|h| h.build().unwrap()).collect();
        assert!(built[0].eval(&Point::int(9)).unwrap());
        assert!(built[1].eval(&Point::ratio(1, 2)).unwrap());
        assert!(built[2].eval(&Point::int(5)).unwrap());

        let m: MeasureDef = serde_json::from_str(r#"{"support": ["a", "b"], "mass": ["1/4", "3/4"]}"#).unwrap();
        assert_eq!(m.build().unwrap().support().len(), 2);
        let g: MeasureDef = serde_json::from_str(r#"{"geometric": 20}"#).unwrap();
        assert_eq!(g.build().unwrap().support().len(), 20);
    }
}
