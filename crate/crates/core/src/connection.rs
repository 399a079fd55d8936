//! Natural connections in the main class, represented pointwise by their
//! torsion `T(x,y,z) = g(T(x,y), z)` and their difference tensor
//! `Q(x,y,z) = g(D_x y − ∇_x y, z)` from the Levi-Civita connection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures::{random_class_data, rng};
use crate::fundamental::{build_class_f, lee_forms, FClass, FundamentalTensor, LeeForms};
use crate::linalg::{rank, solve_affine};
use crate::scalar::Scalar;
use crate::structure::{AcbStructure, BasisChange};
use crate::tensor::Tensor;

/// A (0,3) tensor antisymmetric in its first two slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Torsion3(Tensor);

impl Torsion3 {
    pub fn new(t: Tensor) -> Result<Self> {
        if t.rank() != 3 {
            return Err(Error::ShapeMismatch(format!(
                "torsion needs rank 3, got {}",
                t.rank()
            )));
        }
        let defect = &t + &t.permute(&[1, 0, 2]);
        if let Some(index) = defect.first_nonzero() {
            return Err(Error::Validation {
                axiom: "antisymmetric_xy".into(),
                index,
            });
        }
        Ok(Torsion3(t))
    }

    fn from_antisymmetric(t: Tensor) -> Self {
        debug_assert!((&t + &t.permute(&[1, 0, 2])).is_zero());
        Torsion3(t)
    }

    pub fn zero(dim: usize) -> Self {
        Torsion3(Tensor::zeros(3, dim))
    }

    pub fn tensor(&self) -> &Tensor {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor {
        self.0
    }

    pub fn transport(&self, bc: &BasisChange) -> Self {
        Torsion3(bc.tensor(&self.0))
    }

    /// `T(x,y,z) + T(y,z,x) + T(z,x,y)`.
    pub fn cyclic_sum(&self) -> Tensor {
        cyclic_sum(&self.0)
    }
}

pub fn cyclic_sum(t: &Tensor) -> Tensor {
    &(t + &t.permute(&[1, 2, 0])) + &t.permute(&[2, 0, 1])
}

/// `Q(x,y,z) = g(D_x y − ∇_x y, z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionDelta(Tensor);

impl ConnectionDelta {
    pub fn new(q: Tensor) -> Result<Self> {
        if q.rank() != 3 {
            return Err(Error::ShapeMismatch(format!(
                "Q needs rank 3, got {}",
                q.rank()
            )));
        }
        Ok(ConnectionDelta(q))
    }

    pub fn tensor(&self) -> &Tensor {
        &self.0
    }

    /// The torsion `Q(x,y,·) − Q(y,x,·)` of `∇ + Q`.
    pub fn torsion(&self) -> Torsion3 {
        Torsion3::from_antisymmetric(&self.0 - &self.0.permute(&[1, 0, 2]))
    }
}

/// The five curvature-like (0,4) tensors `π_i(x,y,z,w) = g(π_i(x,y)z, w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiFamily {
    pub pi: [Tensor; 5],
}

impl PiFamily {
    /// `π_i(·,·,·,v)`, for `i` in `1..=5`.
    pub fn with_vector(&self, i: usize, v: &[Scalar]) -> Tensor {
        self.pi[i - 1].insert_vector(3, v)
    }

    /// `Σ_i π_i(·,·,·,v)` over the listed indices.
    fn sum_with_vector(&self, indices: &[usize], v: &[Scalar]) -> Tensor {
        let d = self.pi[0].dim();
        indices.iter().fold(Tensor::zeros(3, d), |acc, &i| {
            &acc + &self.with_vector(i, v)
        })
    }
}

/// Builds `π₁ … π₅` from their defining `{…}_[x↔y]` expressions.
pub fn pi_family(s: &AcbStructure) -> PiFamily {
    let d = s.dim();
    let g = s.g();
    let g_phi = g.compose(s.phi()); // g(e_i, φe_j)
    let phi_low = s.phi().transpose().compose(g); // g(φe_i, e_j)
    let xi_low = s.lower(s.xi());
    let eta = s.eta();
    let build = |h: &dyn Fn(usize, usize, usize, usize) -> Scalar| {
        Tensor::from_fn(4, d, |i| {
            let (x, y, z, w) = (i[0], i[1], i[2], i[3]);
            h(x, y, z, w) - h(y, x, z, w)
        })
    };
    // π₁(x,y)z = {g(y,z)x}
    let p1 = build(&|x, y, z, w| g.get(y, z) * g.get(x, w));
    // π₂(x,y)z = {g(y,φz)φx}
    let p2 = build(&|x, y, z, w| g_phi.get(y, z) * phi_low.get(x, w));
    // π₃(x,y)z = −{g(y,z)φx + g(y,φz)x}
    let p3 =
        build(&|x, y, z, w| -(g.get(y, z) * phi_low.get(x, w) + g_phi.get(y, z) * g.get(x, w)));
    // π₄(x,y)z = {η(y)η(z)x + g(y,z)η(x)ξ}
    let p4 =
        build(&|x, y, z, w| &eta[y] * &eta[z] * g.get(x, w) + g.get(y, z) * &eta[x] * &xi_low[w]);
    // π₅(x,y)z = {η(y)η(z)φx + g(y,φz)η(x)ξ}
    let p5 = build(&|x, y, z, w| {
        &eta[y] * &eta[z] * phi_low.get(x, w) + g_phi.get(y, z) * &eta[x] * &xi_low[w]
    });
    PiFamily {
        pi: [p1, p2, p3, p4, p5],
    }
}

/// [`pi_family`] memoised on the structure.
pub fn cached_pi_family(s: &AcbStructure) -> &PiFamily {
    s.pi_cache().get_or_init(|| pi_family(s))
}

/// Residuals of the curvature-like symmetries of a (0,4) tensor: the
/// first index tuple violating antisymmetry in `(x,y)`, in `(z,w)`, or the
/// cyclic sum over `(x,y,z)`.
pub fn curvature_like_violation(p: &Tensor) -> Option<(&'static str, Vec<usize>)> {
    let a = p + &p.permute(&[1, 0, 2, 3]);
    if let Some(i) = a.first_nonzero() {
        return Some(("antisymmetric_xy", i));
    }
    let b = p + &p.permute(&[0, 1, 3, 2]);
    if let Some(i) = b.first_nonzero() {
        return Some(("antisymmetric_zw", i));
    }
    let c = &(p + &p.permute(&[1, 2, 0, 3])) + &p.permute(&[2, 0, 1, 3]);
    c.first_nonzero().map(|i| ("bianchi", i))
}

/// `(α₁, α₂, α₃, α₄)` selecting a member of the natural torsion family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub alpha: [Scalar; 4],
}

impl FamilyParams {
    pub fn new(alpha: [Scalar; 4]) -> Self {
        FamilyParams { alpha }
    }

    /// The φ-canonical connection, `(0, 1/4n, 0, 0)`.
    pub fn canonical(n: usize) -> Self {
        Self::new([
            Scalar::zero(),
            Scalar::new(1, 4 * n as i64),
            Scalar::zero(),
            Scalar::zero(),
        ])
    }

    /// The standard connection, `(0, 0, 0, 0)`.
    pub fn standard() -> Self {
        Self::new(std::array::from_fn(|_| Scalar::zero()))
    }

    /// The connection whose average with the standard one is canonical,
    /// `(0, 1/2n, 0, 0)`.
    pub fn dual(n: usize) -> Self {
        Self::new([
            Scalar::zero(),
            Scalar::new(1, 2 * n as i64),
            Scalar::zero(),
            Scalar::zero(),
        ])
    }
}

/// `(λ₁, …, λ₁₈)` of the raw torsion ansatz; `lambda[0]` is `λ₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnsatzParams {
    pub lambda: [Scalar; 18],
}

impl AnsatzParams {
    pub fn zero() -> Self {
        AnsatzParams {
            lambda: std::array::from_fn(|_| Scalar::zero()),
        }
    }

    pub fn unit(i: usize) -> Self {
        let mut p = Self::zero();
        p.lambda[i] = Scalar::one();
        p
    }

    /// λ₁₈ as `get(18)`.
    pub fn get(&self, one_based: usize) -> &Scalar {
        &self.lambda[one_based - 1]
    }

    /// The solved parameters with the free entries named `α`:
    /// `α₁ = λ₁, α₂ = λ₂, α₃ = λ₅, α₄ = λ₆`.
    pub fn from_family(p: &FamilyParams, n: usize) -> Self {
        let k = Scalar::new(1, 2 * n as i64);
        let [a1, a2, a3, a4] = &p.alpha;
        let mut l = Self::zero().lambda;
        l[0] = a1.clone();
        l[1] = a2.clone();
        l[3] = -&k;
        l[4] = a3.clone();
        l[5] = a4.clone();
        l[6] = a2 - &k;
        l[7] = -a1;
        l[8] = k.clone();
        l[10] = -a4;
        l[11] = a3.clone();
        l[17] = -Scalar::one();
        AnsatzParams { lambda: l }
    }
}

/// The ansatz
/// `T(x,y,z) = {g(φy,φz)ϑ₁(x) + g(y,φz)ϑ₂(x) + η(y)η(z)ϑ₃(x)}_[x↔y]`
/// with each `ϑ_k` a λ-combination of
/// `θ∘φ², θ*∘φ², θ(ξ)η, θ*(ξ)η, ω, ω∘φ` (horizontal-trace forms).
pub fn ansatz_torsion(lambda: &AnsatzParams, forms: &LeeForms, s: &AcbStructure) -> Torsion3 {
    let d = s.dim();
    let th_xi = AcbStructure::eval_form(&forms.theta_h, s.xi());
    let ts_xi = AcbStructure::eval_form(&forms.theta_star_h, s.xi());
    let eta = s.eta();
    let blocks: [Vec<Scalar>; 6] = [
        s.phi2().pull_back(&forms.theta_h),
        s.phi2().pull_back(&forms.theta_star_h),
        eta.iter().map(|e| e * &th_xi).collect(),
        eta.iter().map(|e| e * &ts_xi).collect(),
        forms.omega.clone(),
        s.phi().pull_back(&forms.omega),
    ];
    let vartheta: Vec<Vec<Scalar>> = (0..3)
        .map(|k| {
            (0..d)
                .map(|x| {
                    (0..6)
                        .filter(|&j| !lambda.lambda[6 * k + j].is_zero())
                        .map(|j| &lambda.lambda[6 * k + j] * &blocks[j][x])
                        .sum()
                })
                .collect()
        })
        .collect();
    let g_phi = s.g().compose(s.phi());
    let g_phiphi = s.phi().transpose().compose(s.g()).compose(s.phi());
    let h = |x: usize, y: usize, z: usize| {
        g_phiphi.get(y, z) * &vartheta[0][x]
            + g_phi.get(y, z) * &vartheta[1][x]
            + &eta[y] * &eta[z] * &vartheta[2][x]
    };
    Torsion3::from_antisymmetric(Tensor::from_fn(3, d, |i| {
        h(i[0], i[1], i[2]) - h(i[1], i[0], i[2])
    }))
}

/// The family member
/// `T = (π₃+π₅)(q) + (1/2n)(π₂+π₄)(a*) + (1/2n)π₅(a) − π₅(â)`,
/// `q = α₁φ²a* − α₂φ²a − α₃φâ + α₄â`.
pub fn torsion_family(p: &FamilyParams, forms: &LeeForms, s: &AcbStructure) -> Torsion3 {
    let pi = cached_pi_family(s);
    let [a1, a2, a3, a4] = &p.alpha;
    let p2_as = s.phi2().apply(&forms.a_star);
    let p2_a = s.phi2().apply(&forms.a);
    let p_ah = s.phi().apply(&forms.a_hat);
    let q: Vec<Scalar> = (0..s.dim())
        .map(|i| a1 * &p2_as[i] - a2 * &p2_a[i] - a3 * &p_ah[i] + a4 * &forms.a_hat[i])
        .collect();
    let k = s.inv_2n();
    let t = &(&pi.sum_with_vector(&[3, 5], &q)
        + &pi.sum_with_vector(&[2, 4], &forms.a_star).scale(&k))
        + &(&pi.with_vector(5, &forms.a).scale(&k) - &pi.with_vector(5, &forms.a_hat));
    Torsion3::from_antisymmetric(t)
}

/// `Q(x,y,z) = ½{T(x,y,z) − T(y,z,x) + T(z,x,y)}`.
pub fn hayden_q(t: &Torsion3) -> ConnectionDelta {
    let t = t.tensor();
    let half = Scalar::new(1, 2);
    ConnectionDelta((&(t - &t.permute(&[1, 2, 0])) + &t.permute(&[2, 0, 1])).scale(&half))
}

/// Where, if anywhere, `Q` fails to define a natural connection for `F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    /// First triple where `Q(x,y,φz) − Q(x,φy,z) ≠ F(x,y,z)`.
    pub phi_relation: Option<Vec<usize>>,
    /// First triple where `Q(x,y,z) ≠ −Q(x,z,y)`.
    pub metric_relation: Option<Vec<usize>>,
}

impl NaturalityReport {
    pub fn is_natural(&self) -> bool {
        self.phi_relation.is_none() && self.metric_relation.is_none()
    }
}

fn phi_defect(q: &Tensor, s: &AcbStructure) -> Tensor {
    &q.transform_slot(2, s.phi()) - &q.transform_slot(1, s.phi())
}

pub fn naturality_report(
    q: &ConnectionDelta,
    f: &FundamentalTensor,
    s: &AcbStructure,
) -> NaturalityReport {
    let q = q.tensor();
    NaturalityReport {
        phi_relation: (&phi_defect(q, s) - f.tensor()).first_nonzero(),
        metric_relation: (q + &q.permute(&[0, 2, 1])).first_nonzero(),
    }
}

pub fn naturality_check(q: &ConnectionDelta, f: &FundamentalTensor, s: &AcbStructure) -> bool {
    naturality_report(q, f, s).is_natural()
}

/// `F(x,φy,z)` and `F(x,φy,ξ)`.
fn f_phi_parts(f: &FundamentalTensor, s: &AcbStructure) -> (Tensor, Tensor) {
    let f_phi = f.tensor().transform_slot(1, s.phi());
    let f_phi_xi = f_phi.insert_vector(2, s.xi());
    (f_phi, f_phi_xi)
}

/// `T⁰(x,y,z) = ½{F(x,φy,z) + η(z)F(x,φy,ξ) + 2η(x)F(y,φz,ξ)}_[x↔y]`.
pub fn canonical_torsion_from_f(f: &FundamentalTensor, s: &AcbStructure) -> Torsion3 {
    let (fp, fpx) = f_phi_parts(f, s);
    let eta = s.eta();
    let two = Scalar::from_int(2);
    let a = |x: usize, y: usize, z: usize| {
        &fp[[x, y, z]] + &eta[z] * &fpx[[x, y]] + &two * &eta[x] * &fpx[[y, z]]
    };
    let half = Scalar::new(1, 2);
    Torsion3::from_antisymmetric(Tensor::from_fn(3, s.dim(), |i| {
        &half * &(a(i[0], i[1], i[2]) - a(i[1], i[0], i[2]))
    }))
}

/// `Q⁰(x,y,z) = ½{F(x,φy,z) + η(z)F(x,φy,ξ) − 2η(y)F(x,φz,ξ)}`.
pub fn phi_b_delta(f: &FundamentalTensor, s: &AcbStructure) -> ConnectionDelta {
    let (fp, fpx) = f_phi_parts(f, s);
    let eta = s.eta();
    let two = Scalar::from_int(2);
    let half = Scalar::new(1, 2);
    ConnectionDelta(Tensor::from_fn(3, s.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        &half * &(&fp[[x, y, z]] + &eta[z] * &fpx[[x, y]] - &two * &eta[y] * &fpx[[x, z]])
    }))
}

/// `T⁰ = (1/4n)(π₁+π₂+π₄)(a*) + (1/2n)π₅(a) − π₅(â)`.
pub fn canonical_torsion_closed(forms: &LeeForms, s: &AcbStructure) -> Torsion3 {
    let pi = cached_pi_family(s);
    let k4 = Scalar::new(1, 4 * s.n() as i64);
    let t = &pi.sum_with_vector(&[1, 2, 4], &forms.a_star).scale(&k4) + &pi_tail(pi, forms, s);
    Torsion3::from_antisymmetric(t)
}

/// `(1/2n)π₅(a) − π₅(â)`, common to every closed form.
fn pi_tail(pi: &PiFamily, forms: &LeeForms, s: &AcbStructure) -> Tensor {
    &pi.with_vector(5, &forms.a).scale(&s.inv_2n()) - &pi.with_vector(5, &forms.a_hat)
}

/// `T′ = (1/2n)(π₂+π₄)(a*) + (1/2n)π₅(a) − π₅(â)`.
pub fn standard_torsion(forms: &LeeForms, s: &AcbStructure) -> Torsion3 {
    let pi = cached_pi_family(s);
    let t = &pi
        .sum_with_vector(&[2, 4], &forms.a_star)
        .scale(&s.inv_2n())
        + &pi_tail(pi, forms, s);
    Torsion3::from_antisymmetric(t)
}

/// `T″ = T′ + (1/2n)(π₃+π₅)(a)`.
pub fn dual_torsion(forms: &LeeForms, s: &AcbStructure) -> Torsion3 {
    let pi = cached_pi_family(s);
    let extra = pi.sum_with_vector(&[3, 5], &forms.a).scale(&s.inv_2n());
    Torsion3::from_antisymmetric(standard_torsion(forms, s).tensor() + &extra)
}

/// The left side of the φ-canonical identity, before comparing with zero:
/// `{T(x,y,z) − T(x,φy,φz) − η(x){T(ξ,y,z) − T(ξ,φy,φz)}
///   − η(y){T(x,ξ,z) − T(x,z,ξ) − η(x)T(z,ξ,ξ)}}_[y↔z]`.
pub fn canonical_identity_residual(t: &Torsion3, s: &AcbStructure) -> Tensor {
    let t = t.tensor();
    let xi = s.xi();
    let eta = s.eta();
    let t_pp = t.transform_slot(1, s.phi()).transform_slot(2, s.phi());
    let t_xi = t.insert_vector(0, xi);
    let t_pp_xi = t_pp.insert_vector(0, xi);
    let t_mid_xi = t.insert_vector(1, xi);
    let t_last_xi = t.insert_vector(2, xi);
    let t_hat = t_mid_xi.insert_vector(1, xi);
    let a = |x: usize, y: usize, z: usize| {
        &t[[x, y, z]]
            - &t_pp[[x, y, z]]
            - &eta[x] * &(&t_xi[[y, z]] - &t_pp_xi[[y, z]])
            - &eta[y] * &(&t_mid_xi[[x, z]] - &t_last_xi[[x, z]] - &eta[x] * &t_hat[[z]])
    };
    Tensor::from_fn(3, s.dim(), |i| a(i[0], i[1], i[2]) - a(i[0], i[2], i[1]))
}

pub fn is_canonical_identity(t: &Torsion3, s: &AcbStructure) -> bool {
    canonical_identity_residual(t, s).is_zero()
}

/// A linear relation `Σ coeffs[i]·λ_{i+1} = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaRelation {
    pub coeffs: Vec<Scalar>,
    pub rhs: Scalar,
}

impl std::fmt::Display for LambdaRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = format!("l{}", i + 1);
            terms.push(if c.is_one() {
                name
            } else if *c == -Scalar::one() {
                format!("-{name}")
            } else {
                format!("{c}*{name}")
            });
        }
        write!(
            f,
            "{} = {}",
            terms.join(" + ").replace("+ -", "- "),
            self.rhs
        )
    }
}

/// Affine solution set of the naturality equations in `λ₁ … λ₁₈`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    pub n: usize,
    pub samples: usize,
    /// Rank of the raw system.
    pub raw_rank: usize,
    /// Dimension of the raw solution set, `18 − raw_rank`.
    pub raw_solution_dim: usize,
    /// One-based indices of λ whose ansatz term vanishes identically. They
    /// are pinned to zero in everything below.
    pub inert: Vec<usize>,
    /// Dimension of the solution set after pinning the inert coefficients.
    pub free_parameters: usize,
    pub particular: AnsatzParams,
    pub null_basis: Vec<AnsatzParams>,
    /// The reduced equations describing the pinned solution set.
    pub relations: Vec<LambdaRelation>,
    /// Dimension of the set of torsions the solution set produces on the
    /// first sample.
    pub torsion_rank: usize,
}

impl ConstraintReport {
    /// Whether `Σ coeffs·λ = rhs` holds on the whole solution set.
    pub fn implies(&self, coeffs: &[Scalar; 18], rhs: &Scalar) -> bool {
        let dot =
            |v: &AnsatzParams| -> Scalar { coeffs.iter().zip(&v.lambda).map(|(a, b)| a * b).sum() };
        dot(&self.particular) == *rhs && self.null_basis.iter().all(|v| dot(v).is_zero())
    }

    /// Whether `p` lies in the solution set.
    pub fn contains(&self, p: &AnsatzParams) -> bool {
        self.relations.iter().all(|r| {
            let dot: Scalar = r.coeffs.iter().zip(&p.lambda).map(|(a, b)| a * b).sum();
            dot == r.rhs
        })
    }
}

struct LambdaSample {
    f: FundamentalTensor,
    /// ansatz torsion of each unit λ
    unit_torsions: Vec<Torsion3>,
}

impl LambdaSample {
    fn new(s: &AcbStructure, seed: u64) -> Self {
        let mut r = rng(seed);
        let data = random_class_data(FClass::Main, s, &mut r);
        let f = build_class_f(&data, s).expect("generated MAIN data");
        let forms = lee_forms(&f, s);
        let unit_torsions = (0..18)
            .map(|i| ansatz_torsion(&AnsatzParams::unit(i), &forms, s))
            .collect();
        LambdaSample { f, unit_torsions }
    }

    /// `(row, rhs)` pairs: the φ-relation and the metric relation of
    /// `hayden_q(T(λ))`, one equation per index triple.
    fn equations(&self, s: &AcbStructure) -> Vec<(Vec<Scalar>, Scalar)> {
        let (phi_parts, skew_parts): (Vec<Tensor>, Vec<Tensor>) = self
            .unit_torsions
            .iter()
            .map(|t| {
                let q = hayden_q(t);
                let q = q.tensor();
                (phi_defect(q, s), q + &q.permute(&[0, 2, 1]))
            })
            .unzip();
        let f = self.f.tensor();
        let mut eqs = Vec::with_capacity(2 * f.data().len());
        for (k, rhs) in f.data().iter().enumerate() {
            eqs.push((
                phi_parts.iter().map(|t| t.data()[k].clone()).collect(),
                rhs.clone(),
            ));
            eqs.push((
                skew_parts.iter().map(|t| t.data()[k].clone()).collect(),
                Scalar::zero(),
            ));
        }
        eqs
    }

    fn satisfied_by(&self, s: &AcbStructure, p: &[Scalar], homogeneous: bool) -> bool {
        self.equations(s).iter().all(|(row, rhs)| {
            let lhs: Scalar = row.iter().zip(p).map(|(a, b)| a * b).sum();
            if homogeneous {
                lhs.is_zero()
            } else {
                lhs == *rhs
            }
        })
    }
}

const VERIFY_SEED_OFFSET: u64 = 0x5EED_0000;

/// Substitutes the ansatz into the naturality equations for
/// `sample_count` seeded MAIN-class tensors and solves for λ exactly.
///
/// The answer is cross-checked on two fresh samples; if it does not hold
/// there, the sampled system was not yet rank-saturated and
/// [`Error::InsufficientSamples`] is returned.
pub fn solve_natural_constraints(
    s: &AcbStructure,
    sample_count: usize,
    seed: u64,
) -> Result<ConstraintReport> {
    if sample_count == 0 {
        return Err(Error::InsufficientSamples(
            "need at least one sample".into(),
        ));
    }
    let samples: Vec<LambdaSample> = (0..sample_count as u64)
        .map(|k| LambdaSample::new(s, seed.wrapping_add(k)))
        .collect();
    let equations: Vec<(Vec<Scalar>, Scalar)> =
        samples.iter().flat_map(|smp| smp.equations(s)).collect();
    let raw = solve_affine(equations.clone(), 18)
        .ok_or_else(|| Error::BadData("naturality system is inconsistent".into()))?;
    let inert: Vec<usize> = (0..18)
        .filter(|&i| {
            samples
                .iter()
                .all(|smp| smp.unit_torsions[i].tensor().is_zero())
        })
        .collect();
    let pins = inert
        .iter()
        .map(|&i| (AnsatzParams::unit(i).lambda.to_vec(), Scalar::zero()));
    let pinned = solve_affine(equations.into_iter().chain(pins), 18).ok_or_else(|| {
        Error::BadData("pinning inert coefficients made the system inconsistent".into())
    })?;

    for k in 0..2 {
        let fresh = LambdaSample::new(s, seed.wrapping_add(VERIFY_SEED_OFFSET + k));
        let ok = fresh.satisfied_by(s, &pinned.particular, false)
            && pinned
                .null_basis
                .iter()
                .all(|v| fresh.satisfied_by(s, v, true));
        if !ok {
            return Err(Error::InsufficientSamples(format!(
                "solution from {sample_count} samples fails on a fresh sample"
            )));
        }
    }

    let to_params = |v: &[Scalar]| AnsatzParams {
        lambda: std::array::from_fn(|i| v[i].clone()),
    };
    let first = &samples[0];
    let torsion_of = |v: &[Scalar]| -> Vec<Scalar> {
        let d = first.unit_torsions[0].tensor().dim();
        let mut acc = Tensor::zeros(3, d);
        for (c, t) in v.iter().zip(&first.unit_torsions) {
            if !c.is_zero() {
                acc = &acc + &t.tensor().scale(c);
            }
        }
        acc.into_data()
    };
    let torsion_rows: Vec<Vec<Scalar>> = pinned.null_basis.iter().map(|v| torsion_of(v)).collect();
    let width = torsion_rows.first().map_or(0, Vec::len);
    Ok(ConstraintReport {
        n: s.n(),
        samples: sample_count,
        raw_rank: raw.rank,
        raw_solution_dim: 18 - raw.rank,
        inert: inert.iter().map(|i| i + 1).collect(),
        free_parameters: pinned.null_basis.len(),
        particular: to_params(&pinned.particular),
        null_basis: pinned.null_basis.iter().map(|v| to_params(v)).collect(),
        relations: pinned
            .reduced
            .into_iter()
            .map(|(coeffs, rhs)| LambdaRelation { coeffs, rhs })
            .collect(),
        torsion_rank: rank(&torsion_rows, width),
    })
}
