use serde::{Deserialize, Serialize};

use super::{
    Coverage, Cut, FacilityLocation, InterferenceCoverage, Proxy, RestrictedFacilityLocation,
    SetFunction,
};
use crate::error::Result;

/// Every built-in objective family, serializable as a tagged document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveSpec {
    Coverage(Coverage),
    Cut(Cut),
    FacilityLocation(FacilityLocation),
    Proxy(Proxy),
    RestrictedFl(RestrictedFacilityLocation),
    InterferenceCoverage(InterferenceCoverage),
}

impl ObjectiveSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ObjectiveSpec::Coverage(_) => "coverage",
            ObjectiveSpec::Cut(_) => "cut",
            ObjectiveSpec::FacilityLocation(_) => "facility_location",
            ObjectiveSpec::Proxy(_) => "proxy",
            ObjectiveSpec::RestrictedFl(_) => "restricted_fl",
            ObjectiveSpec::InterferenceCoverage(_) => "interference_coverage",
        }
    }

    /// Re-checks every construction invariant; deserialized specs must pass
    /// through here before use.
    pub fn validate(&self) -> Result<()> {
        match self {
            ObjectiveSpec::Coverage(f) => f.validate(),
            ObjectiveSpec::Cut(f) => f.validate(),
            ObjectiveSpec::FacilityLocation(f) => f.validate(),
            ObjectiveSpec::Proxy(f) => f.validate(),
            ObjectiveSpec::RestrictedFl(f) => f.validate(),
            ObjectiveSpec::InterferenceCoverage(f) => f.validate(),
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let spec: ObjectiveSpec = serde_json::from_str(text).map_err(|e| e.to_string())?;
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }

    /// Whether every value is non-negative by construction of the family.
    pub fn nonnegative_by_construction(&self) -> bool {
        !matches!(self, ObjectiveSpec::InterferenceCoverage(_))
    }

    fn inner(&self) -> &dyn SetFunction {
        match self {
            ObjectiveSpec::Coverage(f) => f,
            ObjectiveSpec::Cut(f) => f,
            ObjectiveSpec::FacilityLocation(f) => f,
            ObjectiveSpec::Proxy(f) => f,
            ObjectiveSpec::RestrictedFl(f) => f,
            ObjectiveSpec::InterferenceCoverage(f) => f,
        }
    }
}

impl SetFunction for ObjectiveSpec {
    fn ground_size(&self) -> usize {
        self.inner().ground_size()
    }

    fn value(&self, set: &[usize]) -> f64 {
        self.inner().value(set)
    }

    fn is_integral(&self) -> bool {
        self.inner().is_integral()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::PenaltyCurve;

    #[test]
    fn json_round_trip_preserves_values() {
        let fl = FacilityLocation::new(vec![vec![0.5, 0.1], vec![0.2, 0.7]]).unwrap();
        let specs = vec![
            ObjectiveSpec::Cut(Cut::new(3, vec![(0, 1), (1, 2)], None).unwrap()),
            ObjectiveSpec::Coverage(Coverage::new(3, vec![vec![0, 1], vec![2]], None).unwrap()),
            ObjectiveSpec::Proxy(
                Proxy::new(fl.clone(), PenaltyCurve::linear(2, 0.05).unwrap(), false).unwrap(),
            ),
            ObjectiveSpec::FacilityLocation(fl),
        ];
        for spec in specs {
            let text = serde_json::to_string(&spec).unwrap();
            let back = ObjectiveSpec::from_json(&text).unwrap();
            assert_eq!(back, spec);
            assert_eq!(back.value(&[0]), spec.value(&[0]));
        }
    }

    #[test]
    fn from_json_validates() {
        let text = r#"{"kind":"cut","n":2,"edges":[[0,5]]}"#;
        assert!(ObjectiveSpec::from_json(text).is_err());
        let ok = r#"{"kind":"cut","n":2,"edges":[[0,1]]}"#;
        assert_eq!(ObjectiveSpec::from_json(ok).unwrap().name(), "cut");
    }
}
