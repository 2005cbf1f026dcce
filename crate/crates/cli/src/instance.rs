//! On-disk instance files.

use lambda_abel::{GaugeMatrix, MatrixConnection, ScalarConnection, SpectralCurve, Truncation};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub truncation: Truncation,
    pub curve: SpectralCurve,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixConnection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<ScalarConnection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<GaugeMatrix>,
    #[serde(default, rename = "Phi", skip_serializing_if = "Option::is_none")]
    pub phi: Option<GaugeMatrix>,
}

impl InstanceFile {
    pub fn with_matrix(truncation: Truncation, curve: SpectralCurve, m: MatrixConnection) -> Self {
        let matrix = Some(MatrixConnection {
            curve: Some(curve.clone()),
            ..m
        });
        InstanceFile {
            version: VERSION,
            truncation,
            curve,
            matrix,
            scalar: None,
            witness: None,
            phi: None,
        }
    }

    pub fn with_scalar(truncation: Truncation, s: ScalarConnection) -> Self {
        InstanceFile {
            version: VERSION,
            truncation,
            curve: s.curve.clone(),
            matrix: None,
            scalar: Some(s),
            witness: None,
            phi: None,
        }
    }

    pub fn matrix(&self) -> Result<&MatrixConnection, CliError> {
        self.matrix
            .as_ref()
            .ok_or_else(|| CliError::Input("instance carries no matrix connection".into()))
    }

    pub fn scalar(&self) -> Result<&ScalarConnection, CliError> {
        self.scalar
            .as_ref()
            .ok_or_else(|| CliError::Input("instance carries no scalar connection".into()))
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.version != VERSION {
            return Err(CliError::Input(format!(
                "unsupported instance version {}",
                self.version
            )));
        }
        self.truncation.validate()?;
        if self.matrix.is_some() && self.scalar.is_some() {
            return Err(CliError::Input(
                "instance carries both a matrix and a scalar connection".into(),
            ));
        }
        let l = self.truncation.lambda_order;
        if let Some(m) = &self.matrix {
            if m.curve.as_ref().map_or(false, |c| c != &self.curve) {
                return Err(CliError::Input(
                    "matrix curve differs from the instance curve".into(),
                ));
            }
            if m.lambda_order() != l {
                return Err(CliError::Input(format!(
                    "matrix has λ-order {}, truncation says {l}",
                    m.lambda_order()
                )));
            }
        }
        if let Some(s) = &self.scalar {
            if s.curve != self.curve {
                return Err(CliError::Input(
                    "scalar curve differs from the instance curve".into(),
                ));
            }
            if s.lambda_order() != l {
                return Err(CliError::Input(format!(
                    "scalar has λ-order {}, truncation says {l}",
                    s.lambda_order()
                )));
            }
        }
        Ok(())
    }
}

/// Parses and validates; serde errors keep their line and column.
pub fn parse_instance(text: &str) -> Result<InstanceFile, CliError> {
    let mut inst: InstanceFile =
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    inst.validate()?;
    if let Some(m) = &mut inst.matrix {
        m.curve.get_or_insert_with(|| inst.curve.clone());
    }
    Ok(inst)
}

pub fn to_json(inst: &InstanceFile) -> String {
    serde_json::to_string(inst).expect("instance serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_random, GenConfig, Profile};

    fn sample() -> InstanceFile {
        gen_random(
            2,
            Profile::RamifiedMatrix,
            GenConfig {
                z_order: 5,
                lambda_order: 2,
            },
        )
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let inst = sample();
        assert_eq!(parse_instance(&to_json(&inst)).unwrap(), inst);
    }

    #[test]
    fn rejects_both_payloads() {
        let mut inst = sample();
        let s = gen_random(
            2,
            Profile::RamifiedScalar,
            GenConfig {
                z_order: 5,
                lambda_order: 2,
            },
        )
        .unwrap();
        inst.scalar = s.scalar;
        assert!(matches!(
            parse_instance(&to_json(&inst)),
            Err(CliError::Input(_))
        ));
    }

    #[test]
    fn rejects_lambda_mismatch() {
        let mut inst = sample();
        inst.truncation.lambda_order = 3;
        assert!(matches!(
            parse_instance(&to_json(&inst)),
            Err(CliError::Input(_))
        ));
    }

    #[test]
    fn unknown_field_is_a_parse_error() {
        let mut v = serde_json::to_value(sample()).unwrap();
        v["extra"] = 1.into();
        assert!(matches!(
            parse_instance(&v.to_string()),
            Err(CliError::Parse(_))
        ));
    }
}
