use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::Rational;
use crate::operator::{BoundaryClosure, DualPairOperator, InteriorStencil};

/// On-disk operator description.
///
/// ```json
/// {"name": "drp4", "order": 4,
///  "interior": {"offsets": [-2, …], "coeffs": ["-5/48", …]},
///  "closure": {"s": 4, "q": [["…"]], "h": ["…"]},
///  "minimum_n": 9}
/// ```
///
/// Coefficients are written as `p/q`; decimals are accepted on input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorFile {
    pub name: String,
    pub order: usize,
    pub interior: InteriorSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureSection>,
    #[serde(default)]
    pub minimum_n: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InteriorSection {
    pub offsets: Vec<i64>,
    pub coeffs: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosureSection {
    pub s: usize,
    pub q: Vec<Vec<Rational>>,
    pub h: Vec<Rational>,
}

impl From<&DualPairOperator> for OperatorFile {
    fn from(op: &DualPairOperator) -> Self {
        OperatorFile {
            name: op.name.clone(),
            order: op.order(),
            interior: InteriorSection::from(&op.interior),
            closure: op.closure.as_ref().map(|c| ClosureSection { s: c.s, q: c.q.clone(), h: c.h.clone() }),
            minimum_n: Some(op.minimum_n),
        }
    }
}

impl From<&InteriorStencil> for InteriorSection {
    fn from(st: &InteriorStencil) -> Self {
        InteriorSection { offsets: st.offsets().collect(), coeffs: st.coeffs.clone() }
    }
}

impl InteriorSection {
    pub fn to_stencil(&self, order: usize) -> Result<InteriorStencil> {
        if self.offsets.len() != self.coeffs.len() || self.offsets.is_empty() {
            return Err(Error::Format("offsets and coeffs must have equal, nonzero length".into()));
        }
        if self.offsets.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::Format("offsets must be consecutive integers".into()));
        }
        InteriorStencil::new(self.offsets[0], self.coeffs.clone(), order)
    }
}

impl OperatorFile {
    pub fn to_operator(&self) -> Result<DualPairOperator> {
        let interior = self.interior.to_stencil(self.order)?;
        let closure = self
            .closure
            .as_ref()
            .map(|c| BoundaryClosure { s: c.s, q: c.q.clone(), h: c.h.clone() });
        let op = DualPairOperator::new(self.name.clone(), interior, closure)?;
        if let Some(m) = self.minimum_n {
            if m < op.minimum_n {
                return Err(Error::Format(format!(
                    "minimum_n {m} is below the structural bound {}",
                    op.minimum_n
                )));
            }
            return Ok(DualPairOperator { minimum_n: m, ..op });
        }
        Ok(op)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn load_operator(path: &Path) -> Result<DualPairOperator> {
    let text = std::fs::read_to_string(path)?;
    OperatorFile::from_json(&text)?.to_operator()
}

pub fn save_operator(op: &DualPairOperator, path: &Path) -> Result<()> {
    let mut text = OperatorFile::from(op).to_json()?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::drp_operator;

    #[test]
    fn json_round_trip() {
        let op = drp_operator(5).unwrap();
        let f = OperatorFile::from(&op);
        let text = f.to_json().unwrap();
        assert!(text.contains("\"-127/140\""));
        let back = OperatorFile::from_json(&text).unwrap().to_operator().unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn decimals_accepted() {
        let text = r#"{"name":"t","order":2,"interior":{"offsets":[-1,0,1],"coeffs":["-0.5","0","1/2"]},
            "closure":{"s":1,"q":[["0"]],"h":["0.5"]}}"#;
        let op = OperatorFile::from_json(text).unwrap().to_operator().unwrap();
        assert_eq!(op.minimum_n, 3);
        assert_eq!(op.closure.unwrap().h[0], Rational::new(1, 2));
    }

    #[test]
    fn rejects_bad_files() {
        let gap = r#"{"name":"t","order":2,"interior":{"offsets":[-1,1],"coeffs":["-1/2","1/2"]}}"#;
        assert!(OperatorFile::from_json(gap).unwrap().to_operator().is_err());
        let inconsistent = r#"{"name":"t","order":2,"interior":{"offsets":[0,1],"coeffs":["-1","2"]}}"#;
        assert!(OperatorFile::from_json(inconsistent).unwrap().to_operator().is_err());
        assert!(OperatorFile::from_json("{").is_err());
    }
}
