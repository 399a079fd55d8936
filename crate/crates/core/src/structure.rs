//! Almost contact B-metric structures `(φ, ξ, η, g)` on a single tangent
//! space, given in an arbitrary (not necessarily adapted) basis.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::connection::PiFamily;
use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::scalar::Scalar;
use crate::taxonomy::SubspaceCache;
use crate::tensor::Tensor;

/// Raw ingredients of a structure, not yet checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureParts {
    pub n: usize,
    pub phi: LinMap,
    /// Contravariant components of ξ.
    pub xi: Vec<Scalar>,
    /// Covariant components of η.
    pub eta: Vec<Scalar>,
    pub g: LinMap,
}

/// Count of negative, positive and zero squares in a diagonal form
/// congruent to a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub negative: usize,
    pub positive: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    /// First index tuple (in storage order) where the identity fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl AxiomCheck {
    fn from_residual(axiom: &str, residual: &Tensor) -> Self {
        let violation = residual.first_nonzero();
        AxiomCheck {
            axiom: axiom.to_string(),
            passed: violation.is_none(),
            violation,
            detail: None,
        }
    }

    fn flag(axiom: &str, ok: bool, detail: Option<String>) -> Self {
        AxiomCheck {
            axiom: axiom.to_string(),
            passed: ok,
            violation: if ok { None } else { Some(vec![]) },
            detail,
        }
    }
}

/// Per-axiom pass/fail listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn into_result(self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(Error::Validation {
                axiom: c.axiom.clone(),
                index: c.violation.clone().unwrap_or_default(),
            }),
        }
    }
}

/// A validated almost contact B-metric structure on a `(2n+1)`-dimensional
/// space.
#[derive(Debug, Clone)]
pub struct AcbStructure {
    n: usize,
    phi: LinMap,
    xi: Vec<Scalar>,
    eta: Vec<Scalar>,
    g: LinMap,
    g_inv: LinMap,
    phi2: LinMap,
    pi: OnceLock<PiFamily>,
    subspaces: Arc<SubspaceCache>,
}

impl PartialEq for AcbStructure {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.phi == other.phi
            && self.xi == other.xi
            && self.eta == other.eta
            && self.g == other.g
    }
}

impl Eq for AcbStructure {}

fn unit(d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); d];
    v[i] = Scalar::one();
    v
}

/// Exact signature of a symmetric matrix by congruence diagonalization.
pub fn signature(m: &LinMap) -> Signature {
    let d = m.dim();
    let mut a = m.rows();
    let mut sig = Signature {
        negative: 0,
        positive: 0,
        zero: 0,
    };
    for k in 0..d {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..d).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..d).find(|&j| !a[k][j].is_zero()) {
                // e_k += e_j makes the new diagonal entry 2·a[k][j]
                for c in 0..d {
                    let v = a[j][c].clone();
                    a[k][c] += &v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[k] += &v;
                }
            }
        }
        let pivot = a[k][k].clone();
        match pivot.signum() {
            std::cmp::Ordering::Equal => {
                sig.zero += 1;
                continue;
            }
            std::cmp::Ordering::Less => sig.negative += 1,
            std::cmp::Ordering::Greater => sig.positive += 1,
        }
        for i in k + 1..d {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in k..d {
                let v = &f * &a[k][c];
                a[i][c] -= &v;
            }
            for row in a.iter_mut().skip(k) {
                let v = &f * &row[k];
                row[i] -= &v;
            }
        }
    }
    sig
}

/// Checks every structure axiom on candidate data.
pub fn validate_structure(p: &StructureParts) -> Result<ValidityReport> {
    let d = 2 * p.n + 1;
    if p.n == 0 {
        return Err(Error::BadDimension("n must be at least 1".into()));
    }
    if p.phi.dim() != d || p.g.dim() != d || p.xi.len() != d || p.eta.len() != d {
        return Err(Error::ShapeMismatch(format!(
            "n = {} needs dimension {d}; got phi {}, g {}, xi {}, eta {}",
            p.n,
            p.phi.dim(),
            p.g.dim(),
            p.xi.len(),
            p.eta.len()
        )));
    }
    let mut checks = Vec::new();
    checks.push(AxiomCheck::from_residual(
        "phi_xi",
        &Tensor::vector(p.phi.apply(&p.xi)),
    ));
    let phi2 = p.phi.compose(&p.phi);
    let phi2_res = Tensor::from_fn(2, d, |ij| {
        let (i, j) = (ij[0], ij[1]);
        let mut want = &p.xi[i] * &p.eta[j];
        if i == j {
            want -= Scalar::one();
        }
        phi2.get(i, j) - &want
    });
    checks.push(AxiomCheck::from_residual("phi_squared", &phi2_res));
    checks.push(AxiomCheck::from_residual(
        "eta_phi",
        &Tensor::vector(p.phi.pull_back(&p.eta)),
    ));
    let eta_xi: Scalar = p.eta.iter().zip(&p.xi).map(|(a, b)| a * b).sum();
    checks.push(AxiomCheck::flag(
        "eta_xi",
        eta_xi.is_one(),
        Some(format!("eta(xi) = {eta_xi}")),
    ));
    let sym = Tensor::from_fn(2, d, |ij| p.g.get(ij[0], ij[1]) - p.g.get(ij[1], ij[0]));
    checks.push(AxiomCheck::from_residual("g_symmetric", &sym));
    let gpp = p.phi.transpose().compose(&p.g).compose(&p.phi);
    let compat = Tensor::from_fn(2, d, |ij| {
        let (i, j) = (ij[0], ij[1]);
        p.g.get(i, j) + gpp.get(i, j) - &p.eta[i] * &p.eta[j]
    });
    checks.push(AxiomCheck::from_residual("g_compatible", &compat));
    let invertible = p.g.invert().is_ok();
    checks.push(AxiomCheck::flag("g_invertible", invertible, None));
    let gxi = p.g.pull_back(&p.xi);
    let gxi_res = Tensor::vector(gxi.iter().zip(&p.eta).map(|(a, b)| a - b).collect());
    checks.push(AxiomCheck::from_residual("g_xi_eta", &gxi_res));
    let sig = signature(&p.g);
    checks.push(AxiomCheck::flag(
        "signature",
        sig.negative == p.n && sig.positive == p.n + 1 && sig.zero == 0,
        Some(format!(
            "(negative, positive, zero) = ({}, {}, {}), want ({}, {}, 0)",
            sig.negative,
            sig.positive,
            sig.zero,
            p.n,
            p.n + 1
        )),
    ));
    Ok(ValidityReport { checks })
}

impl AcbStructure {
    /// Validates `parts`; the error names the first failing axiom. A
    /// singular `g` is reported as [`Error::Singular`].
    pub fn new(parts: StructureParts) -> Result<Self> {
        let report = validate_structure(&parts)?;
        let g_inv = parts.g.invert()?;
        report.into_result()?;
        let phi2 = parts.phi.compose(&parts.phi);
        Ok(AcbStructure {
            n: parts.n,
            phi: parts.phi,
            xi: parts.xi,
            eta: parts.eta,
            g: parts.g,
            g_inv,
            phi2,
            pi: OnceLock::new(),
            subspaces: Arc::default(),
        })
    }

    pub fn to_parts(&self) -> StructureParts {
        StructureParts {
            n: self.n,
            phi: self.phi.clone(),
            xi: self.xi.clone(),
            eta: self.eta.clone(),
            g: self.g.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn phi(&self) -> &LinMap {
        &self.phi
    }

    pub fn phi2(&self) -> &LinMap {
        &self.phi2
    }

    pub fn xi(&self) -> &[Scalar] {
        &self.xi
    }

    pub fn eta(&self) -> &[Scalar] {
        &self.eta
    }

    pub fn g(&self) -> &LinMap {
        &self.g
    }

    pub fn g_inv(&self) -> &LinMap {
        &self.g_inv
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        unit(self.dim(), i)
    }

    /// `1/(2n)`, the normalising constant that appears throughout.
    pub fn inv_2n(&self) -> Scalar {
        Scalar::new(1, 2 * self.n as i64)
    }

    /// `g(v, ·)` for a vector `v`.
    pub fn lower(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.g.pull_back(v)
    }

    /// The vector `a` with `g(·, a) = w`.
    pub fn raise(&self, w: &[Scalar]) -> Vec<Scalar> {
        self.g_inv.apply(w)
    }

    pub fn eval_form(w: &[Scalar], v: &[Scalar]) -> Scalar {
        w.iter()
            .zip(v)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Same `(φ, ξ, η)` with a different metric, validated.
    pub fn with_metric(&self, g: LinMap) -> Result<Self> {
        AcbStructure::new(StructureParts {
            g,
            ..self.to_parts()
        })
    }

    pub(crate) fn pi_cache(&self) -> &OnceLock<PiFamily> {
        &self.pi
    }

    pub(crate) fn subspace_cache(&self) -> &SubspaceCache {
        &self.subspaces
    }
}

/// The adapted structure: `φe_{2k-1} = e_{2k}`, `φe_{2k} = −e_{2k-1}`,
/// `φξ = 0`, `g = diag(1, −1, …, 1, −1, 1)`, with ξ the last basis vector.
pub fn canonical_structure(n: usize) -> Result<AcbStructure> {
    if n < 1 {
        return Err(Error::BadDimension(format!(
            "n must be at least 1, got {n}"
        )));
    }
    let d = 2 * n + 1;
    let mut phi = vec![vec![Scalar::zero(); d]; d];
    for k in 0..n {
        let (a, b) = (2 * k, 2 * k + 1);
        phi[b][a] = Scalar::one();
        phi[a][b] = -Scalar::one();
    }
    let g_diag: Vec<Scalar> = (0..d)
        .map(|i| {
            if i == d - 1 || i % 2 == 0 {
                Scalar::one()
            } else {
                -Scalar::one()
            }
        })
        .collect();
    AcbStructure::new(StructureParts {
        n,
        phi: LinMap::from_rows(phi)?,
        xi: unit(d, d - 1),
        eta: unit(d, d - 1),
        g: LinMap::diag(&g_diag),
    })
}

/// The associated metric `g̃(x,y) = g(x,φy) + η(x)η(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatedMetric {
    pub gt: LinMap,
}

pub fn associated_metric(s: &AcbStructure) -> AssociatedMetric {
    let g_phi = s.g.compose(&s.phi);
    let gt = LinMap::from_fn(s.dim(), |i, j| g_phi.get(i, j) + &s.eta[i] * &s.eta[j]);
    AssociatedMetric { gt }
}

/// A change of basis: the new basis vector `e'_j` has old components in
/// column `j` of `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChange {
    p: LinMap,
    p_inv: LinMap,
}

impl BasisChange {
    pub fn new(p: LinMap) -> Result<Self> {
        let p_inv = p.invert()?;
        Ok(BasisChange { p, p_inv })
    }

    pub fn matrix(&self) -> &LinMap {
        &self.p
    }

    /// Covariant tensors (all slots lower).
    pub fn tensor(&self, t: &Tensor) -> Tensor {
        t.transform_all(&self.p)
    }

    pub fn form(&self, w: &[Scalar]) -> Vec<Scalar> {
        self.p.pull_back(w)
    }

    pub fn vector(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.p_inv.apply(v)
    }

    pub fn endomorphism(&self, m: &LinMap) -> LinMap {
        self.p_inv.compose(m).compose(&self.p)
    }

    pub fn bilinear(&self, m: &LinMap) -> LinMap {
        self.p.transpose().compose(m).compose(&self.p)
    }
}

/// Transports `s` to the basis given by the columns of `p`.
pub fn change_basis(s: &AcbStructure, p: &LinMap) -> Result<AcbStructure> {
    let bc = BasisChange::new(p.clone())?;
    transport_structure(s, &bc)
}

pub fn transport_structure(s: &AcbStructure, bc: &BasisChange) -> Result<AcbStructure> {
    if bc.p.dim() != s.dim() {
        return Err(Error::ShapeMismatch(format!(
            "basis change of dim {} for structure of dim {}",
            bc.p.dim(),
            s.dim()
        )));
    }
    AcbStructure::new(StructureParts {
        n: s.n,
        phi: bc.endomorphism(&s.phi),
        xi: bc.vector(&s.xi),
        eta: bc.form(&s.eta),
        g: bc.bilinear(&s.g),
    })
}
