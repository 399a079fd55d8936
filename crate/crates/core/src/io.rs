//! JSON file formats. Every scalar is an integer or a `"p/q"` string.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::connection::{AnsatzParams, FamilyParams, Torsion3};
use crate::error::{Error, Result};
use crate::fundamental::{ClassData, FundamentalTensor, LeeForms};
use crate::lie::LieAlgebra;
use crate::linmap::LinMap;
use crate::scalar::Scalar;
use crate::structure::{canonical_structure, AcbStructure, StructureParts};
use crate::tensor::Tensor;

pub type Matrix = Vec<Vec<Scalar>>;
pub type Nested3 = Vec<Vec<Vec<Scalar>>>;

pub fn nested_from_tensor3(t: &Tensor) -> Nested3 {
    let d = t.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| t[[i, j, k]].clone()).collect())
                .collect()
        })
        .collect()
}

pub fn tensor3_from_nested(v: &Nested3, what: &str) -> Result<Tensor> {
    let d = v.len();
    let cube = v
        .iter()
        .all(|m| m.len() == d && m.iter().all(|r| r.len() == d));
    if !cube {
        return Err(Error::ShapeMismatch(format!(
            "{what} must be a {d}x{d}x{d} array"
        )));
    }
    Tensor::from_data(3, d, v.iter().flatten().flatten().cloned().collect())
}

fn check_dim(what: &str, got: usize, n: usize) -> Result<()> {
    if got != 2 * n + 1 {
        return Err(Error::ShapeMismatch(format!(
            "{what} has dimension {got}, expected {}",
            2 * n + 1
        )));
    }
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    fs::write(path, to_json(v)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub n: usize,
    pub phi: Matrix,
    pub xi: Vec<Scalar>,
    pub eta: Vec<Scalar>,
    pub g: Matrix,
}

impl StructureFile {
    pub fn from_structure(s: &AcbStructure) -> Self {
        StructureFile {
            n: s.n(),
            phi: s.phi().rows(),
            xi: s.xi().to_vec(),
            eta: s.eta().to_vec(),
            g: s.g().rows(),
        }
    }

    pub fn to_parts(&self) -> Result<StructureParts> {
        Ok(StructureParts {
            n: self.n,
            phi: LinMap::from_rows(self.phi.clone())?,
            xi: self.xi.clone(),
            eta: self.eta.clone(),
            g: LinMap::from_rows(self.g.clone())?,
        })
    }

    pub fn build(&self) -> Result<AcbStructure> {
        AcbStructure::new(self.to_parts()?)
    }
}

/// A structure given inline or as a path relative to the referencing file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureRef {
    Inline(StructureFile),
    Path(PathBuf),
}

/// The referenced structure, or the canonical one in dimension `2n+1`.
pub fn resolve_structure(
    r: Option<&StructureRef>,
    n: usize,
    base: Option<&Path>,
) -> Result<AcbStructure> {
    let s = match r {
        None => canonical_structure(n)?,
        Some(StructureRef::Inline(f)) => f.build()?,
        Some(StructureRef::Path(p)) => {
            let full = match base {
                Some(dir) if p.is_relative() => dir.join(p),
                _ => p.clone(),
            };
            read_json::<StructureFile>(&full)?.build()?
        }
    };
    if s.n() != n {
        return Err(Error::ShapeMismatch(format!(
            "structure has n = {}, file says n = {n}",
            s.n()
        )));
    }
    Ok(s)
}

/// A fundamental tensor, optionally with the class data it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FFile {
    pub n: usize,
    #[serde(rename = "F")]
    pub f: Nested3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<ClassData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureRef>,
}

impl FFile {
    pub fn new(
        f: &FundamentalTensor,
        s: &AcbStructure,
        data: Option<ClassData>,
        embed: bool,
    ) -> Self {
        FFile {
            n: s.n(),
            f: nested_from_tensor3(f.tensor()),
            data,
            structure: embed.then(|| StructureRef::Inline(StructureFile::from_structure(s))),
        }
    }

    pub fn load(&self, base: Option<&Path>) -> Result<(AcbStructure, FundamentalTensor)> {
        let s = resolve_structure(self.structure.as_ref(), self.n, base)?;
        let t = tensor3_from_nested(&self.f, "F")?;
        check_dim("F", t.dim(), self.n)?;
        let f = FundamentalTensor::new(t, &s)?;
        Ok((s, f))
    }
}

/// `θ`, `θ*`, `ω` with the horizontal-trace convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormsFile {
    pub n: usize,
    pub theta: Vec<Scalar>,
    pub theta_star: Vec<Scalar>,
    pub omega: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureRef>,
}

impl FormsFile {
    pub fn from_forms(forms: &LeeForms, s: &AcbStructure, embed: bool) -> Self {
        FormsFile {
            n: s.n(),
            theta: forms.theta_h.clone(),
            theta_star: forms.theta_star_h.clone(),
            omega: forms.omega.clone(),
            structure: embed.then(|| StructureRef::Inline(StructureFile::from_structure(s))),
        }
    }

    /// The structure and the MAIN-class data these forms describe.
    pub fn load(&self, base: Option<&Path>) -> Result<(AcbStructure, ClassData)> {
        let s = resolve_structure(self.structure.as_ref(), self.n, base)?;
        for (name, v) in [
            ("theta", &self.theta),
            ("theta_star", &self.theta_star),
            ("omega", &self.omega),
        ] {
            check_dim(name, v.len(), self.n)?;
        }
        let data = ClassData::Main {
            theta: self.theta.clone(),
            theta_star: self.theta_star.clone(),
            omega: self.omega.clone(),
        };
        data.validate(&s)?;
        Ok((s, data))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionFile {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: Nested3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureRef>,
}

impl TorsionFile {
    pub fn new(t: &Torsion3, s: &AcbStructure, embed: bool) -> Self {
        TorsionFile {
            n: s.n(),
            t: nested_from_tensor3(t.tensor()),
            structure: embed.then(|| StructureRef::Inline(StructureFile::from_structure(s))),
        }
    }

    pub fn load(&self, base: Option<&Path>) -> Result<(AcbStructure, Torsion3)> {
        let s = resolve_structure(self.structure.as_ref(), self.n, base)?;
        let t = tensor3_from_nested(&self.t, "T")?;
        check_dim("T", t.dim(), self.n)?;
        Ok((s, Torsion3::new(t)?))
    }
}

/// Either the four family parameters or the eighteen raw ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[Scalar; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Params {
    Family(FamilyParams),
    Ansatz(AnsatzParams),
}

impl ParamsFile {
    pub fn params(&self) -> Result<Params> {
        match (&self.alpha, &self.lambda) {
            (Some(a), None) => Ok(Params::Family(FamilyParams::new(a.clone()))),
            (None, Some(l)) => {
                let lambda: [Scalar; 18] = l.clone().try_into().map_err(|v: Vec<Scalar>| {
                    Error::ShapeMismatch(format!("lambda needs 18 entries, got {}", v.len()))
                })?;
                Ok(Params::Ansatz(AnsatzParams { lambda }))
            }
            _ => Err(Error::Parse(
                "params need exactly one of \"alpha\" and \"lambda\"".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieFile {
    pub dim: usize,
    pub c: Nested3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureRef>,
}

impl LieFile {
    pub fn new(l: &LieAlgebra) -> Self {
        LieFile {
            dim: l.dim(),
            c: nested_from_tensor3(l.constants()),
            structure: None,
        }
    }

    pub fn load(&self, base: Option<&Path>) -> Result<(AcbStructure, LieAlgebra)> {
        if self.dim % 2 == 0 || self.dim < 3 {
            return Err(Error::BadDimension(format!(
                "Lie algebra dimension {} is not 2n+1 with n >= 1",
                self.dim
            )));
        }
        let n = (self.dim - 1) / 2;
        let s = resolve_structure(self.structure.as_ref(), n, base)?;
        let c = tensor3_from_nested(&self.c, "c")?;
        check_dim("c", c.dim(), n)?;
        Ok((s, LieAlgebra::new(c)?))
    }
}
