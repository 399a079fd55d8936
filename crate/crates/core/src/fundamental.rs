//! The fundamental tensor `F(x,y,z) = g((∇ₓφ)y, z)`, its Lee forms, the
//! main classes F₁, F₄, F₅, F₁₁ and their direct sum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::scalar::Scalar;
use crate::structure::{AcbStructure, AxiomCheck, BasisChange, ValidityReport};
use crate::tensor::Tensor;

/// A (0,3) tensor that passed [`validate_f`] against its structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalTensor(Tensor);

impl FundamentalTensor {
    pub fn new(f: Tensor, s: &AcbStructure) -> Result<Self> {
        validate_f(&f, s)?.into_result()?;
        Ok(FundamentalTensor(f))
    }

    pub fn zero(s: &AcbStructure) -> Self {
        FundamentalTensor(Tensor::zeros(3, s.dim()))
    }

    pub fn tensor(&self) -> &Tensor {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor {
        self.0
    }

    /// The same tensor expressed in the basis of `bc`.
    pub fn transport(&self, bc: &BasisChange) -> Self {
        FundamentalTensor(bc.tensor(&self.0))
    }
}

fn check_shape(t: &Tensor, s: &AcbStructure) -> Result<()> {
    if t.rank() != 3 || t.dim() != s.dim() {
        return Err(Error::ShapeMismatch(format!(
            "expected a (0,3) tensor of dim {}, got rank {} dim {}",
            s.dim(),
            t.rank(),
            t.dim()
        )));
    }
    Ok(())
}

/// Checks `F(x,y,z) = F(x,z,y)` and
/// `F(x,y,z) = F(x,φy,φz) + η(y)F(x,ξ,z) + η(z)F(x,y,ξ)` at every triple.
pub fn validate_f(f: &Tensor, s: &AcbStructure) -> Result<ValidityReport> {
    check_shape(f, s)?;
    let sym = f - &f.permute(&[0, 2, 1]);
    let f_pp = f.transform_slot(1, s.phi()).transform_slot(2, s.phi());
    let f_xi_mid = f.insert_vector(1, s.xi());
    let f_xi_last = f.insert_vector(2, s.xi());
    let eta = s.eta();
    let phi_rel = Tensor::from_fn(3, s.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        let rhs = &f_pp[[x, y, z]] + &eta[y] * &f_xi_mid[[x, z]] + &eta[z] * &f_xi_last[[x, y]];
        &f[[x, y, z]] - &rhs
    });
    let mk = |axiom: &str, r: &Tensor| {
        let violation = r.first_nonzero();
        AxiomCheck {
            axiom: axiom.to_string(),
            passed: violation.is_none(),
            violation,
            detail: None,
        }
    };
    Ok(ValidityReport {
        checks: vec![mk("symmetric_yz", &sym), mk("phi_compatible", &phi_rel)],
    })
}

/// The Lee forms of `F` and their metric duals.
///
/// `theta_full` is the trace over the whole basis; `theta_h` drops the
/// `ξξ` term, `theta_h = theta_full − omega`. The class formulas and the
/// torsion family consume the `_h` forms and their duals `a`, `a_star`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeeForms {
    pub theta_full: Vec<Scalar>,
    pub theta_star_full: Vec<Scalar>,
    pub omega: Vec<Scalar>,
    pub theta_h: Vec<Scalar>,
    pub theta_star_h: Vec<Scalar>,
    /// `θ_h = g(·, a)`
    pub a: Vec<Scalar>,
    /// `θ*_h = g(·, a*)`
    pub a_star: Vec<Scalar>,
    /// `ω = g(·, â)`
    pub a_hat: Vec<Scalar>,
}

impl LeeForms {
    /// Assembles the forms directly from `(θ_h, θ*_h, ω)`.
    pub fn from_forms(
        s: &AcbStructure,
        theta_h: Vec<Scalar>,
        theta_star_h: Vec<Scalar>,
        omega: Vec<Scalar>,
    ) -> Self {
        let theta_full = theta_h.iter().zip(&omega).map(|(a, b)| a + b).collect();
        LeeForms {
            theta_full,
            theta_star_full: theta_star_h.clone(),
            a: s.raise(&theta_h),
            a_star: s.raise(&theta_star_h),
            a_hat: s.raise(&omega),
            omega,
            theta_h,
            theta_star_h,
        }
    }

    pub fn zero(s: &AcbStructure) -> Self {
        let z = vec![Scalar::zero(); s.dim()];
        Self::from_forms(s, z.clone(), z.clone(), z)
    }

    pub fn is_zero(&self) -> bool {
        [&self.theta_h, &self.theta_star_h, &self.omega]
            .iter()
            .all(|w| w.iter().all(Scalar::is_zero))
    }

    pub fn transport(&self, bc: &BasisChange, target: &AcbStructure) -> Self {
        Self::from_forms(
            target,
            bc.form(&self.theta_h),
            bc.form(&self.theta_star_h),
            bc.form(&self.omega),
        )
    }
}

pub fn lee_forms(f: &FundamentalTensor, s: &AcbStructure) -> LeeForms {
    let ginv = s.g_inv().to_tensor();
    let t = f.tensor();
    let theta_full = ginv
        .contract(t, &[(0, 0), (1, 1)])
        .expect("shape")
        .into_data();
    let theta_star_full = ginv
        .contract(&t.transform_slot(1, s.phi()), &[(0, 0), (1, 1)])
        .expect("shape")
        .into_data();
    let omega = t
        .insert_vector(0, s.xi())
        .insert_vector(0, s.xi())
        .into_data();
    let theta_h: Vec<Scalar> = theta_full.iter().zip(&omega).map(|(a, b)| a - b).collect();
    LeeForms {
        a: s.raise(&theta_h),
        a_star: s.raise(&theta_star_full),
        a_hat: s.raise(&omega),
        theta_star_h: theta_star_full.clone(),
        theta_full,
        theta_star_full,
        omega,
        theta_h,
    }
}

/// Class selectors for [`is_in_class`]. `Main` is F₁ ⊕ F₄ ⊕ F₅ ⊕ F₁₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FClass {
    F0,
    F1,
    F4,
    F5,
    F11,
    #[serde(rename = "MAIN")]
    Main,
}

impl FClass {
    pub const ALL: [FClass; 6] = [
        FClass::F0,
        FClass::F1,
        FClass::F4,
        FClass::F5,
        FClass::F11,
        FClass::Main,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FClass::F0 => "F0",
            FClass::F1 => "F1",
            FClass::F4 => "F4",
            FClass::F5 => "F5",
            FClass::F11 => "F11",
            FClass::Main => "MAIN",
        }
    }
}

impl fmt::Display for FClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

/// The data each class formula consumes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum ClassData {
    /// θ with θ(ξ) = 0. θ* is then forced to be −θ∘φ.
    F1 {
        theta: Vec<Scalar>,
    },
    F4 {
        theta_xi: Scalar,
    },
    F5 {
        theta_star_xi: Scalar,
    },
    /// ω with ω(ξ) = 0.
    F11 {
        omega: Vec<Scalar>,
    },
    /// The horizontal-trace forms; requires θ*∘φ = −θ∘φ² and ω(ξ) = 0.
    #[serde(rename = "MAIN")]
    Main {
        theta: Vec<Scalar>,
        theta_star: Vec<Scalar>,
        omega: Vec<Scalar>,
    },
}

impl ClassData {
    pub fn class(&self) -> FClass {
        match self {
            ClassData::F1 { .. } => FClass::F1,
            ClassData::F4 { .. } => FClass::F4,
            ClassData::F5 { .. } => FClass::F5,
            ClassData::F11 { .. } => FClass::F11,
            ClassData::Main { .. } => FClass::Main,
        }
    }

    /// The same data as `(θ, θ*, ω)` for the combined formula.
    pub fn main_forms(&self, s: &AcbStructure) -> (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>) {
        let z = vec![Scalar::zero(); s.dim()];
        let times_eta = |c: &Scalar| s.eta().iter().map(|e| e * c).collect::<Vec<_>>();
        match self {
            ClassData::F1 { theta } => {
                let ts = s.phi().pull_back(theta).iter().map(|v| -v).collect();
                (theta.clone(), ts, z)
            }
            ClassData::F4 { theta_xi } => (times_eta(theta_xi), z.clone(), z),
            ClassData::F5 { theta_star_xi } => (z.clone(), times_eta(theta_star_xi), z),
            ClassData::F11 { omega } => (z.clone(), z, omega.clone()),
            ClassData::Main {
                theta,
                theta_star,
                omega,
            } => (theta.clone(), theta_star.clone(), omega.clone()),
        }
    }

    pub fn validate(&self, s: &AcbStructure) -> Result<()> {
        let d = s.dim();
        let len_ok = |name: &str, w: &[Scalar]| {
            if w.len() == d {
                Ok(())
            } else {
                Err(Error::ShapeMismatch(format!(
                    "{name} has {} components, want {d}",
                    w.len()
                )))
            }
        };
        let on_xi = |w: &[Scalar]| AcbStructure::eval_form(w, s.xi());
        match self {
            ClassData::F1 { theta } => {
                len_ok("theta", theta)?;
                if !on_xi(theta).is_zero() {
                    return Err(Error::BadData(format!(
                        "F1 needs theta(xi) = 0, got {}",
                        on_xi(theta)
                    )));
                }
            }
            ClassData::F4 { .. } | ClassData::F5 { .. } => {}
            ClassData::F11 { omega } => {
                len_ok("omega", omega)?;
                if !on_xi(omega).is_zero() {
                    return Err(Error::BadData(format!("omega(xi) = {} != 0", on_xi(omega))));
                }
            }
            ClassData::Main {
                theta,
                theta_star,
                omega,
            } => {
                len_ok("theta", theta)?;
                len_ok("theta_star", theta_star)?;
                len_ok("omega", omega)?;
                if !on_xi(omega).is_zero() {
                    return Err(Error::BadData(format!("omega(xi) = {} != 0", on_xi(omega))));
                }
                let lhs = s.phi().pull_back(theta_star);
                let rhs = s.phi2().pull_back(theta);
                if lhs.iter().zip(&rhs).any(|(a, b)| !(a + b).is_zero()) {
                    return Err(Error::BadData(
                        "theta_star∘phi must equal -theta∘phi^2".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Precomputed `g(x,φy)` and `g(φx,φy)` for the class formulas.
struct Metrics {
    g_phi: LinMap,
    g_phiphi: LinMap,
}

impl Metrics {
    fn new(s: &AcbStructure) -> Self {
        Metrics {
            g_phi: s.g().compose(s.phi()),
            g_phiphi: s.phi().transpose().compose(s.g()).compose(s.phi()),
        }
    }
}

/// `{A(x,y,z)}_(y↔z) = A(x,y,z) + A(x,z,y)`, scaled by `c`.
fn sym_yz(d: usize, c: &Scalar, a: impl Fn(usize, usize, usize) -> Scalar) -> Tensor {
    Tensor::from_fn(3, d, |i| c * &(a(i[0], i[1], i[2]) + a(i[0], i[2], i[1])))
}

fn f1_formula(s: &AcbStructure, m: &Metrics, theta: &[Scalar]) -> Tensor {
    let th_phi = s.phi().pull_back(theta);
    let th_phi2 = s.phi2().pull_back(theta);
    sym_yz(s.dim(), &s.inv_2n(), |x, y, z| {
        m.g_phi.get(x, y) * &th_phi[z] + m.g_phiphi.get(x, y) * &th_phi2[z]
    })
}

fn f4_formula(s: &AcbStructure, m: &Metrics, theta_xi: &Scalar) -> Tensor {
    let c = -(theta_xi * &s.inv_2n());
    let eta = s.eta();
    Tensor::from_fn(3, s.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        &c * &(m.g_phiphi.get(x, y) * &eta[z] + m.g_phiphi.get(x, z) * &eta[y])
    })
}

fn f5_formula(s: &AcbStructure, m: &Metrics, theta_star_xi: &Scalar) -> Tensor {
    let c = -(theta_star_xi * &s.inv_2n());
    let eta = s.eta();
    Tensor::from_fn(3, s.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        &c * &(m.g_phi.get(x, y) * &eta[z] + m.g_phi.get(x, z) * &eta[y])
    })
}

fn f11_formula(s: &AcbStructure, omega: &[Scalar]) -> Tensor {
    let eta = s.eta();
    Tensor::from_fn(3, s.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        &eta[x] * &(&eta[y] * &omega[z] + &eta[z] * &omega[y])
    })
}

fn main_formula(
    s: &AcbStructure,
    m: &Metrics,
    theta: &[Scalar],
    theta_star: &[Scalar],
    omega: &[Scalar],
) -> Tensor {
    let two_n = Scalar::from_int(2 * s.n() as i64);
    let eta = s.eta();
    sym_yz(s.dim(), &-s.inv_2n(), |x, y, z| {
        m.g_phiphi.get(x, y) * &theta[z] + m.g_phi.get(x, y) * &theta_star[z]
            - &two_n * &(&eta[x] * &eta[y] * &omega[z])
    })
}

/// Assembles `F` from the displayed formula of the class of `data`.
pub fn build_class_f(data: &ClassData, s: &AcbStructure) -> Result<FundamentalTensor> {
    data.validate(s)?;
    let m = Metrics::new(s);
    let f = match data {
        ClassData::F1 { theta } => f1_formula(s, &m, theta),
        ClassData::F4 { theta_xi } => f4_formula(s, &m, theta_xi),
        ClassData::F5 { theta_star_xi } => f5_formula(s, &m, theta_star_xi),
        ClassData::F11 { omega } => f11_formula(s, omega),
        ClassData::Main {
            theta,
            theta_star,
            omega,
        } => main_formula(s, &m, theta, theta_star, omega),
    };
    FundamentalTensor::new(f, s)
}

/// Which trace of `F` feeds the class formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceConvention {
    /// `θ_h = θ_full − ω`.
    Horizontal,
    /// The trace over the whole basis, including `ξ`.
    Full,
}

/// Reconstruct-and-compare membership test.
pub fn is_in_class(f: &FundamentalTensor, s: &AcbStructure, class: FClass) -> bool {
    is_in_class_with(f, s, class, TraceConvention::Horizontal)
}

pub fn is_in_class_with(
    f: &FundamentalTensor,
    s: &AcbStructure,
    class: FClass,
    convention: TraceConvention,
) -> bool {
    if class == FClass::F0 {
        return f.tensor().is_zero();
    }
    let forms = lee_forms(f, s);
    let theta = match convention {
        TraceConvention::Horizontal => &forms.theta_h,
        TraceConvention::Full => &forms.theta_full,
    };
    let m = Metrics::new(s);
    let rebuilt = match class {
        FClass::F0 => unreachable!(),
        FClass::F1 => f1_formula(s, &m, theta),
        FClass::F4 => f4_formula(s, &m, &AcbStructure::eval_form(theta, s.xi())),
        FClass::F5 => f5_formula(s, &m, &AcbStructure::eval_form(&forms.theta_star_h, s.xi())),
        FClass::F11 => f11_formula(s, &forms.omega),
        FClass::Main => main_formula(s, &m, theta, &forms.theta_star_h, &forms.omega),
    };
    &rebuilt == f.tensor()
}

/// Membership over every class selector, in [`FClass::ALL`] order.
pub fn classify_f(f: &FundamentalTensor, s: &AcbStructure) -> Vec<(FClass, bool)> {
    FClass::ALL
        .iter()
        .map(|&c| (c, is_in_class(f, s, c)))
        .collect()
}

/// Classes whose verdict differs between the horizontal and the full trace.
pub fn convention_sensitive_classes(f: &FundamentalTensor, s: &AcbStructure) -> Vec<FClass> {
    FClass::ALL
        .into_iter()
        .filter(|&c| {
            is_in_class_with(f, s, c, TraceConvention::Horizontal)
                != is_in_class_with(f, s, c, TraceConvention::Full)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_class_data, random_structure, rng};
    use crate::scalar::{int, q};
    use crate::structure::canonical_structure;

    fn e1() -> Vec<Scalar> {
        vec![int(1), int(0), int(0)]
    }

    fn f11_fixture() -> (AcbStructure, FundamentalTensor) {
        let s = canonical_structure(1).unwrap();
        let f = build_class_f(&ClassData::F11 { omega: e1() }, &s).unwrap();
        (s, f)
    }

    #[test]
    fn zero_is_valid_and_in_every_class() {
        let s = canonical_structure(1).unwrap();
        let f = FundamentalTensor::zero(&s);
        assert!(validate_f(f.tensor(), &s).unwrap().is_valid());
        assert!(lee_forms(&f, &s).is_zero());
        for c in FClass::ALL {
            assert!(is_in_class(&f, &s, c), "{c}");
        }
    }

    #[test]
    fn asymmetric_f_is_rejected() {
        let s = canonical_structure(1).unwrap();
        let mut t = Tensor::zeros(3, 3);
        t[[0, 1, 0]] = int(1);
        let rep = validate_f(&t, &s).unwrap();
        assert!(!rep.check("symmetric_yz").unwrap().passed);
        assert!(FundamentalTensor::new(t, &s).is_err());
        assert!(matches!(
            validate_f(&Tensor::zeros(3, 5), &s),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn f11_entries_and_lee_forms() {
        let (s, f) = f11_fixture();
        let t = f.tensor();
        let nz: Vec<_> = t.indices().filter(|i| !t.get(i).is_zero()).collect();
        assert_eq!(nz, vec![vec![2, 0, 2], vec![2, 2, 0]]);
        assert_eq!(t[[2, 2, 0]], int(1));
        assert_eq!(t[[2, 0, 2]], int(1));
        let lf = lee_forms(&f, &s);
        assert_eq!(lf.theta_full, e1());
        assert!(lf.theta_star_full.iter().all(Scalar::is_zero));
        assert_eq!(lf.omega, e1());
        assert!(lf.theta_h.iter().all(Scalar::is_zero));
        assert_eq!(lf.a_hat, e1());
    }

    #[test]
    fn f4_trace_collapses_to_eta() {
        let s = canonical_structure(1).unwrap();
        let c = q(3, 2);
        let f = build_class_f(
            &ClassData::F4 {
                theta_xi: c.clone(),
            },
            &s,
        )
        .unwrap();
        let lf = lee_forms(&f, &s);
        let want: Vec<Scalar> = s.eta().iter().map(|e| e * &c).collect();
        assert_eq!(lf.theta_full, want);
        assert!(lf.theta_star_full.iter().all(Scalar::is_zero));
        assert!(lf.omega.iter().all(Scalar::is_zero));
    }

    /// Brute-force expansion of the F₅ line over all 27 triples.
    #[test]
    fn f5_brute_force() {
        let s = canonical_structure(1).unwrap();
        let c = int(2);
        let f = build_class_f(
            &ClassData::F5 {
                theta_star_xi: c.clone(),
            },
            &s,
        )
        .unwrap();
        let g = |u: &[Scalar], v: &[Scalar]| s.g().form(u, v);
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    let (ex, ey, ez) = (s.basis_vector(x), s.basis_vector(y), s.basis_vector(z));
                    let py = s.phi().apply(&ey);
                    let pz = s.phi().apply(&ez);
                    let want = -(&c * &s.inv_2n())
                        * (g(&ex, &py) * &s.eta()[z] + g(&ex, &pz) * &s.eta()[y]);
                    assert_eq!(f.tensor()[[x, y, z]], want, "({x},{y},{z})");
                }
            }
        }
        assert_eq!(f.tensor()[[0, 1, 2]], int(1));
        assert_eq!(f.tensor()[[1, 0, 2]], int(1));
        assert_eq!(f.tensor()[[0, 2, 1]], int(1));
        assert_eq!(f.tensor()[[1, 2, 0]], int(1));
    }

    #[test]
    fn f1_zero_data() {
        let s = canonical_structure(1).unwrap();
        let f = build_class_f(
            &ClassData::F1 {
                theta: vec![int(0); 3],
            },
            &s,
        )
        .unwrap();
        assert!(f.tensor().is_zero());
    }

    #[test]
    fn bad_data() {
        let s = canonical_structure(1).unwrap();
        let xi_form = s.eta().to_vec();
        assert!(matches!(
            build_class_f(
                &ClassData::F11 {
                    omega: xi_form.clone()
                },
                &s
            ),
            Err(Error::BadData(_))
        ));
        assert!(matches!(
            build_class_f(
                &ClassData::F1 {
                    theta: xi_form.clone()
                },
                &s
            ),
            Err(Error::BadData(_))
        ));
        let bad_main = ClassData::Main {
            theta: e1(),
            theta_star: e1(),
            omega: vec![int(0); 3],
        };
        assert!(matches!(
            build_class_f(&bad_main, &s),
            Err(Error::BadData(_))
        ));
    }

    #[test]
    fn f11_membership() {
        let (s, f) = f11_fixture();
        let got = classify_f(&f, &s);
        let expect = [
            (FClass::F0, false),
            (FClass::F1, false),
            (FClass::F4, false),
            (FClass::F5, false),
            (FClass::F11, true),
            (FClass::Main, true),
        ];
        assert_eq!(got, expect);
        // the full-trace reading would reject this tensor from MAIN
        assert_eq!(convention_sensitive_classes(&f, &s), vec![FClass::Main]);
    }

    #[test]
    fn f4_plus_f5_is_main_only() {
        let s = canonical_structure(1).unwrap();
        let a = build_class_f(&ClassData::F4 { theta_xi: int(1) }, &s).unwrap();
        let b = build_class_f(
            &ClassData::F5 {
                theta_star_xi: int(1),
            },
            &s,
        )
        .unwrap();
        let f = FundamentalTensor::new(a.tensor() + b.tensor(), &s).unwrap();
        assert!(is_in_class(&f, &s, FClass::Main));
        for c in [FClass::F0, FClass::F1, FClass::F4, FClass::F5, FClass::F11] {
            assert!(!is_in_class(&f, &s, c), "{c}");
        }
    }

    #[test]
    fn round_trip_all_classes() {
        for seed in 0..100u64 {
            let n = 1 + (seed % 3) as usize;
            let mut r = rng(seed);
            let s = random_structure(n, &mut r);
            for class in [
                FClass::F1,
                FClass::F4,
                FClass::F5,
                FClass::F11,
                FClass::Main,
            ] {
                let data = random_class_data(class, &s, &mut r);
                let f = build_class_f(&data, &s).unwrap();
                let lf = lee_forms(&f, &s);
                let (th, ts, om) = data.main_forms(&s);
                assert_eq!(lf.theta_h, th, "seed {seed} {class}");
                assert_eq!(lf.theta_star_h, ts, "seed {seed} {class}");
                assert_eq!(lf.omega, om, "seed {seed} {class}");
                assert!(is_in_class(&f, &s, class));
                assert!(is_in_class(&f, &s, FClass::Main));
                let via_main = build_class_f(
                    &ClassData::Main {
                        theta: th,
                        theta_star: ts,
                        omega: om,
                    },
                    &s,
                )
                .unwrap();
                assert_eq!(via_main, f);
            }
        }
    }

    #[test]
    fn lee_form_identities() {
        for seed in 0..30u64 {
            let n = 1 + (seed % 3) as usize;
            let mut r = rng(seed);
            let s = random_structure(n, &mut r);
            let f = build_class_f(&random_class_data(FClass::Main, &s, &mut r), &s).unwrap();
            let lf = lee_forms(&f, &s);
            assert!(AcbStructure::eval_form(&lf.omega, s.xi()).is_zero());
            // θ*∘φ = −θ∘φ² holds for the horizontal traces only
            let lhs = s.phi().pull_back(&lf.theta_star_h);
            let rhs = s.phi2().pull_back(&lf.theta_h);
            assert!(lhs.iter().zip(&rhs).all(|(a, b)| (a + b).is_zero()));
            let rhs = s.phi2().pull_back(&lf.theta_full);
            assert!(!lf.omega.iter().all(Scalar::is_zero));
            assert!(!lhs.iter().zip(&rhs).all(|(a, b)| (a + b).is_zero()));
            assert!(AcbStructure::eval_form(s.eta(), &lf.a_hat).is_zero());
            // φa* = −φ²a
            let pa = s.phi().apply(&lf.a_star);
            let p2a = s.phi2().apply(&lf.a);
            assert!(pa.iter().zip(&p2a).all(|(a, b)| (a + b).is_zero()));
        }
    }

    #[test]
    fn predicates_are_basis_invariant() {
        use crate::fixtures::random_unimodular;
        for seed in 0..20u64 {
            let mut r = rng(seed);
            let s = canonical_structure(1 + (seed % 2) as usize).unwrap();
            let class = [FClass::F1, FClass::F4, FClass::F5, FClass::F11][seed as usize % 4];
            let f = build_class_f(&random_class_data(class, &s, &mut r), &s).unwrap();
            let bc = BasisChange::new(random_unimodular(s.dim(), &mut r)).unwrap();
            let s2 = crate::structure::transport_structure(&s, &bc).unwrap();
            let f2 = FundamentalTensor::new(bc.tensor(f.tensor()), &s2).unwrap();
            assert_eq!(classify_f(&f, &s), classify_f(&f2, &s2));
            assert_eq!(lee_forms(&f, &s).transport(&bc, &s2), lee_forms(&f2, &s2));
        }
    }

    #[test]
    fn class_names_parse() {
        assert_eq!("main".parse::<FClass>().unwrap(), FClass::Main);
        assert_eq!("F11".parse::<FClass>().unwrap(), FClass::F11);
        assert!(matches!(
            "F2".parse::<FClass>(),
            Err(Error::UnknownClass(_))
        ));
    }
}
