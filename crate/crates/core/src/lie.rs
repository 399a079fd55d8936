//! Left-invariant structures on Lie algebras: the only place where a
//! connection is actually differentiated.
//!
//! Everything is expressed in a basis of left-invariant vector fields, so
//! the structure tensors are constant and `∇` reduces to the Koszul
//! formula in the structure constants.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::connection::{canonical_torsion_from_f, phi_b_delta, ConnectionDelta, Torsion3};
use crate::error::{Error, Result};
use crate::fixtures::rng;
use crate::fundamental::{classify_f, FClass, FundamentalTensor};
use crate::linmap::LinMap;
use crate::scalar::Scalar;
use crate::structure::{associated_metric, canonical_structure, AcbStructure};
use crate::tensor::Tensor;

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    c: Tensor,
}

impl LieAlgebra {
    /// Checks shape and antisymmetry; the Jacobi identity is left to
    /// [`jacobi_check`].
    pub fn new(c: Tensor) -> Result<Self> {
        if c.rank() != 3 {
            return Err(Error::ShapeMismatch(format!(
                "structure constants need rank 3, got {}",
                c.rank()
            )));
        }
        let defect = &c + &c.permute(&[1, 0, 2]);
        if let Some(index) = defect.first_nonzero() {
            return Err(Error::Validation {
                axiom: "bracket_antisymmetric".into(),
                index,
            });
        }
        Ok(LieAlgebra { c })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            c: Tensor::zeros(3, dim),
        }
    }

    /// Sets `[e_i, e_j]` (and `[e_j, e_i]`) for each listed pair.
    pub fn from_brackets(dim: usize, brackets: &[((usize, usize), Vec<Scalar>)]) -> Result<Self> {
        let mut c = Tensor::zeros(3, dim);
        for ((i, j), v) in brackets {
            if *i >= dim || *j >= dim || i == j || v.len() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "bracket [{i},{j}] in dimension {dim}"
                )));
            }
            for (k, x) in v.iter().enumerate() {
                c[[*i, *j, k]] = x.clone();
                c[[*j, *i, k]] = -x;
            }
        }
        Ok(LieAlgebra { c })
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn constants(&self) -> &Tensor {
        &self.c
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.c.insert_vector(0, x).insert_vector(0, y).into_data()
    }
}

/// First `(i, j, k, m)` where the `m`-component of
/// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]` is nonzero.
pub fn jacobi_violation(l: &LieAlgebra) -> Option<Vec<usize>> {
    let c = &l.c;
    let d = l.dim();
    // cc[i][j][k][m] = Σ_l c[i][j][l] c[l][k][m]
    let cc = c.contract(c, &[(2, 0)]).expect("same dimension");
    let sum = &(&cc + &cc.permute(&[1, 2, 0, 3])) + &cc.permute(&[2, 0, 1, 3]);
    debug_assert_eq!(sum.dim(), d);
    sum.first_nonzero()
}

pub fn jacobi_check(l: &LieAlgebra) -> bool {
    jacobi_violation(l).is_none()
}

/// `gamma[i][j][k]` is the `e_k`-component of `∇_{e_i} e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Christoffel {
    pub gamma: Tensor,
}

impl Christoffel {
    /// `∇_x y` for constant-coefficient `x`, `y`.
    pub fn derive(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.gamma
            .insert_vector(0, x)
            .insert_vector(0, y)
            .into_data()
    }
}

/// `g(∇_{e_i} e_j, e_k)`.
fn lowered(gamma: &Tensor, g: &LinMap) -> Tensor {
    gamma
        .contract(&g.to_tensor(), &[(2, 0)])
        .expect("same dimension")
}

/// Levi-Civita connection of the left-invariant metric `g` from
/// `2g(∇_x y, z) = g([x,y],z) − g([y,z],x) + g([z,x],y)`.
///
/// The result is checked to be metric and torsion-free before it is
/// returned.
pub fn koszul_levi_civita(l: &LieAlgebra, g: &LinMap) -> Result<Christoffel> {
    if g.dim() != l.dim() {
        return Err(Error::ShapeMismatch(format!(
            "metric is {}x{}, algebra has dimension {}",
            g.dim(),
            g.dim(),
            l.dim()
        )));
    }
    if let Some(index) = jacobi_violation(l) {
        return Err(Error::InvalidStructure(format!(
            "Jacobi identity fails at {index:?}"
        )));
    }
    let g_inv = g.invert()?;
    // cg[i][j][k] = g([e_i,e_j], e_k)
    let cg = lowered(&l.c, g);
    let half = Scalar::new(1, 2);
    let low = (&(&cg - &cg.permute(&[1, 2, 0])) + &cg.permute(&[2, 0, 1])).scale(&half);
    let gamma = low
        .contract(&g_inv.to_tensor(), &[(2, 0)])
        .expect("same dimension");
    let nabla = Christoffel { gamma };
    if let Some(i) = metricity_violation(&nabla, g) {
        return Err(Error::InvalidStructure(format!(
            "Koszul connection not metric at {i:?}"
        )));
    }
    if let Some(i) = torsion_violation(&nabla, l, &Tensor::zeros(3, l.dim())) {
        return Err(Error::InvalidStructure(format!(
            "Koszul connection has torsion at {i:?}"
        )));
    }
    Ok(nabla)
}

/// First `(x, y, z)` with `(∇_x g)(y, z) ≠ 0`.
pub fn metricity_violation(nabla: &Christoffel, g: &LinMap) -> Option<Vec<usize>> {
    let low = lowered(&nabla.gamma, g);
    (&low + &low.permute(&[0, 2, 1])).first_nonzero()
}

/// First `(x, y, k)` where `∇_x y − ∇_y x − [x, y]` differs from the
/// expected torsion `expected[x][y][k]` (components, not lowered).
fn torsion_violation(nabla: &Christoffel, l: &LieAlgebra, expected: &Tensor) -> Option<Vec<usize>> {
    let g = &nabla.gamma;
    (&(&(g - &g.permute(&[1, 0, 2])) - &l.c) - expected).first_nonzero()
}

/// `F(x,y,z) = g(∇_x(φy) − φ∇_x y, z)` for the left-invariant structure
/// `s`, also checking `(∇_x η)y = g(∇_x ξ, y) = F(x,φy,ξ)`.
pub fn fundamental_from_nabla(l: &LieAlgebra, s: &AcbStructure) -> Result<FundamentalTensor> {
    let nabla = koszul_levi_civita(l, s.g())?;
    let gamma = &nabla.gamma;
    // ∇_x(φe_j) = Σ_m φ^m_j ∇_x e_m, and φ∇_x e_j
    let nabla_phi = gamma.transform_slot(1, s.phi());
    let phi_nabla = gamma
        .contract(&s.phi().transpose().to_tensor(), &[(2, 0)])
        .expect("same dimension");
    let f = lowered(&(&nabla_phi - &phi_nabla), s.g());
    let f = FundamentalTensor::new(f, s).map_err(|e| {
        Error::InvalidStructure(format!("computed F is not a fundamental tensor: {e}"))
    })?;

    let d = s.dim();
    let nabla_eta = Tensor::from_fn(2, d, |i| {
        // (∇_x η)(y) = −η(∇_x y) since η is constant
        -(0..d)
            .map(|k| &s.eta()[k] * &gamma[[i[0], i[1], k]])
            .sum::<Scalar>()
    });
    let nabla_xi_low = gamma
        .insert_vector(1, s.xi())
        .contract(&s.g().to_tensor(), &[(1, 0)])
        .expect("same dimension");
    let f_phi_xi = f
        .tensor()
        .transform_slot(1, s.phi())
        .insert_vector(2, s.xi());
    if let Some(i) = (&nabla_eta - &f_phi_xi).first_nonzero() {
        return Err(Error::InvalidStructure(format!(
            "(∇η)(y) ≠ F(x,φy,ξ) at {i:?}"
        )));
    }
    if let Some(i) = (&nabla_xi_low - &f_phi_xi).first_nonzero() {
        return Err(Error::InvalidStructure(format!(
            "g(∇ξ, y) ≠ F(x,φy,ξ) at {i:?}"
        )));
    }
    Ok(f)
}

/// Which parallelism conditions `D = ∇ + Q` meets; each entry is the first
/// failing index, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalConnectionReport {
    pub d_phi: Option<Vec<usize>>,
    pub d_xi: Option<Vec<usize>>,
    pub d_eta: Option<Vec<usize>>,
    pub d_g: Option<Vec<usize>>,
    pub d_g_assoc: Option<Vec<usize>>,
    /// Torsion of `D` compared with `Q(x,y,·) − Q(y,x,·)`.
    pub torsion: Option<Vec<usize>>,
}

impl NaturalConnectionReport {
    pub fn all_pass(&self) -> bool {
        [
            &self.d_phi,
            &self.d_xi,
            &self.d_eta,
            &self.d_g,
            &self.d_g_assoc,
            &self.torsion,
        ]
        .iter()
        .all(|c| c.is_none())
    }
}

/// Builds `D = ∇ + Q` on the Lie algebra and checks `Dφ = Dξ = Dη = Dg =
/// Dg̃ = 0` and that its torsion `D_x y − D_y x − [x,y]`, lowered, equals
/// `Q(x,y,·) − Q(y,x,·)`.
pub fn verify_natural_connection(
    l: &LieAlgebra,
    s: &AcbStructure,
    q: &ConnectionDelta,
) -> Result<NaturalConnectionReport> {
    let nabla = koszul_levi_civita(l, s.g())?;
    if q.tensor().dim() != s.dim() {
        return Err(Error::ShapeMismatch(
            "Q and structure dimensions differ".into(),
        ));
    }
    let q_up = q
        .tensor()
        .contract(&s.g_inv().to_tensor(), &[(2, 0)])
        .expect("same dimension");
    let d_conn = Christoffel {
        gamma: &nabla.gamma + &q_up,
    };
    let gamma = &d_conn.gamma;
    let phi_t = s.phi().transpose().to_tensor();
    let d_phi = &gamma.transform_slot(1, s.phi())
        - &gamma.contract(&phi_t, &[(2, 0)]).expect("same dimension");
    // D_x ξ = Σ_m ξ^m D_x e_m, and (D_x η)(y) = −η(D_x y)
    let d_xi = gamma.insert_vector(1, s.xi());
    let d_eta = gamma.insert_vector(2, s.eta());
    let g_assoc = associated_metric(s).gt;
    let t_low = lowered(&(&(gamma - &gamma.permute(&[1, 0, 2])) - &l.c), s.g());
    Ok(NaturalConnectionReport {
        d_phi: d_phi.first_nonzero(),
        d_xi: d_xi.first_nonzero(),
        d_eta: d_eta.first_nonzero(),
        d_g: metricity_violation(&d_conn, s.g()),
        d_g_assoc: metricity_violation(&d_conn, &g_assoc),
        torsion: (&t_low - q.torsion().tensor()).first_nonzero(),
    })
}

/// A frozen left-invariant example on the canonical structure of
/// dimension `2n+1` (`ξ` the last basis vector), with the class
/// memberships recorded when it was found.
#[derive(Debug, Clone)]
pub struct LieFixture {
    pub name: &'static str,
    pub n: usize,
    pub algebra: LieAlgebra,
    /// Classes among [`FClass::ALL`] that the computed `F` belongs to.
    pub classes: Vec<FClass>,
}

impl LieFixture {
    pub fn structure(&self) -> AcbStructure {
        canonical_structure(self.n).expect("n >= 1")
    }
}

fn brackets(d: usize, list: &[((usize, usize), &[i64])]) -> LieAlgebra {
    let v: Vec<((usize, usize), Vec<Scalar>)> = list
        .iter()
        .map(|(ij, c)| (*ij, c.iter().map(|&x| Scalar::from_int(x)).collect()))
        .collect();
    LieAlgebra::from_brackets(d, &v).expect("well-formed brackets")
}

pub fn frozen_fixtures() -> Vec<LieFixture> {
    use FClass::*;
    let fx = |name, n: usize, list: &[((usize, usize), &[i64])], classes: &[FClass]| LieFixture {
        name,
        n,
        algebra: brackets(2 * n + 1, list),
        classes: classes.to_vec(),
    };
    vec![
        fx("abelian", 1, &[], &[F0, F1, F4, F5, F11, Main]),
        // [ξ,e1] = e1, [ξ,e2] = e2
        fx(
            "l1",
            1,
            &[((2, 0), &[1, 0, 0]), ((2, 1), &[0, 1, 0])],
            &[F5, Main],
        ),
        // [e1,e2] = ξ
        fx("heisenberg", 1, &[((0, 1), &[0, 0, 1])], &[]),
        fx("f1", 1, &[((0, 1), &[0, -1, 0])], &[F1, Main]),
        fx(
            "f4",
            1,
            &[((0, 2), &[0, -1, 0]), ((1, 2), &[1, 0, 0])],
            &[F4, Main],
        ),
        fx("f11", 1, &[((1, 2), &[0, 0, -1])], &[F11, Main]),
        fx(
            "f4_f5",
            1,
            &[((0, 2), &[1, 1, 0]), ((1, 2), &[-1, 1, 0])],
            &[Main],
        ),
        fx(
            "f1_f11",
            1,
            &[((0, 1), &[-1, 0, 0]), ((1, 2), &[0, 0, 1])],
            &[Main],
        ),
        // [ξ,x] = x
        fx(
            "f5_dim5",
            2,
            &[
                ((4, 0), &[1, 0, 0, 0, 0]),
                ((4, 1), &[0, 1, 0, 0, 0]),
                ((4, 2), &[0, 0, 1, 0, 0]),
                ((4, 3), &[0, 0, 0, 1, 0]),
            ],
            &[F5, Main],
        ),
        // [ξ,x] = φx
        fx(
            "f4_dim5",
            2,
            &[
                ((4, 0), &[0, 1, 0, 0, 0]),
                ((4, 1), &[-1, 0, 0, 0, 0]),
                ((4, 2), &[0, 0, 0, 1, 0]),
                ((4, 3), &[0, 0, -1, 0, 0]),
            ],
            &[F4, Main],
        ),
        // [e1,x] = x on the horizontal part
        fx(
            "f1_dim5",
            2,
            &[
                ((0, 1), &[0, 1, 0, 0, 0]),
                ((0, 2), &[0, 0, 1, 0, 0]),
                ((0, 3), &[0, 0, 0, 1, 0]),
            ],
            &[F1, Main],
        ),
        // [e1,ξ] = ξ
        fx("f11_dim5", 2, &[((0, 4), &[0, 0, 0, 0, 1])], &[F11, Main]),
    ]
}

fn member_classes(f: &FundamentalTensor, s: &AcbStructure) -> Vec<FClass> {
    classify_f(f, s)
        .into_iter()
        .filter_map(|(c, member)| member.then_some(c))
        .collect()
}

/// Classes among [`FClass::ALL`] containing the `F` of `l` on `s`.
pub fn lie_classes(l: &LieAlgebra, s: &AcbStructure) -> Result<Vec<FClass>> {
    Ok(member_classes(&fundamental_from_nabla(l, s)?, s))
}

/// Everything the end-to-end pipeline computes for one algebra.
#[derive(Debug, Clone)]
pub struct LiePipeline {
    pub f: FundamentalTensor,
    pub classes: Vec<FClass>,
    pub q0: ConnectionDelta,
    pub t0: Torsion3,
    pub report: NaturalConnectionReport,
}

impl LiePipeline {
    /// `D = ∇ + Q⁰` is natural and its torsion equals `T⁰` computed from `F`.
    pub fn passes(&self) -> bool {
        self.report.all_pass() && self.q0.torsion() == self.t0
    }
}

pub fn run_pipeline(l: &LieAlgebra, s: &AcbStructure) -> Result<LiePipeline> {
    let f = fundamental_from_nabla(l, s)?;
    let classes = member_classes(&f, s);
    let q0 = phi_b_delta(&f, s);
    let t0 = canonical_torsion_from_f(&f, s);
    let report = verify_natural_connection(l, s, &q0)?;
    Ok(LiePipeline {
        f,
        classes,
        q0,
        t0,
        report,
    })
}

/// Outcome of a seeded search over sparse structure constants.
#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub trials: usize,
    pub jacobi_passed: usize,
    /// Number of algebras found per membership pattern, e.g. `"F5,MAIN"`.
    pub patterns: BTreeMap<String, usize>,
    /// Which of `F1, F4, F5, F11` were realized as the only basic class of
    /// a non-flat MAIN example.
    pub covered: Vec<FClass>,
    pub uncovered: Vec<FClass>,
}

const SEARCH_ENTRIES: [i64; 6] = [0, 0, 0, 1, -1, 2];

/// The shapes of bracket tried by [`search_fixtures`]. Apart from
/// `Sparse`, each satisfies Jacobi by construction.
#[derive(Debug, Clone, Copy)]
enum Shape {
    /// independent sparse entries
    Sparse,
    /// `[ξ, x] = A x` on the horizontal part
    Semidirect,
    /// `[x, ξ] = a(x) ξ`
    XiIdeal,
    /// `[x, y] = b(x) y − b(y) x` on the horizontal part
    Hyperbolic,
    /// `[ξ, x] = (a + bφ) x`
    Conformal,
}

fn random_brackets(
    s: &AcbStructure,
    shape: Shape,
    r: &mut impl Rng,
) -> Vec<((usize, usize), Vec<Scalar>)> {
    let d = s.dim();
    let xi = d - 1;
    let mut entry = || Scalar::from_int(SEARCH_ENTRIES[r.random_range(0..SEARCH_ENTRIES.len())]);
    let unit = |k: usize, c: Scalar| {
        let mut v = vec![Scalar::zero(); d];
        v[k] = c;
        v
    };
    match shape {
        Shape::Sparse => {
            let mut list = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    let v: Vec<Scalar> = (0..d).map(|_| entry()).collect();
                    if v.iter().any(|x| !x.is_zero()) {
                        list.push(((i, j), v));
                    }
                }
            }
            list
        }
        Shape::Semidirect => (0..xi)
            .map(|i| {
                let mut v: Vec<Scalar> = (0..xi).map(|_| entry()).collect();
                v.push(Scalar::zero());
                ((xi, i), v)
            })
            .collect(),
        Shape::XiIdeal => (0..xi).map(|i| ((i, xi), unit(xi, entry()))).collect(),
        Shape::Hyperbolic => {
            let b: Vec<Scalar> = (0..xi).map(|_| entry()).collect();
            let mut list = Vec::new();
            for i in 0..xi {
                for j in i + 1..xi {
                    let mut v = vec![Scalar::zero(); d];
                    v[j] = b[i].clone();
                    v[i] = -&b[j];
                    list.push(((i, j), v));
                }
            }
            list
        }
        Shape::Conformal => {
            let (a, b) = (entry(), entry());
            (0..xi)
                .map(|i| {
                    let mut v = s.phi().column(i);
                    for x in v.iter_mut() {
                        *x = &*x * &b;
                    }
                    v[i] += a.clone();
                    ((xi, i), v)
                })
                .collect()
        }
    }
}

/// Random brackets on the canonical structure of dimension `2n+1`, drawn
/// from a few shapes in turn, keeping those that satisfy Jacobi.
pub fn search_fixtures(n: usize, trials: usize, seed: u64) -> Result<SearchReport> {
    const SHAPES: [Shape; 5] = [
        Shape::Sparse,
        Shape::Semidirect,
        Shape::XiIdeal,
        Shape::Hyperbolic,
        Shape::Conformal,
    ];
    let s = canonical_structure(n)?;
    let d = s.dim();
    let mut r = rng(seed);
    let mut patterns = BTreeMap::new();
    let mut jacobi_passed = 0;
    for trial in 0..trials {
        let list = random_brackets(&s, SHAPES[trial % SHAPES.len()], &mut r);
        let l = LieAlgebra::from_brackets(d, &list)?;
        if !jacobi_check(&l) {
            continue;
        }
        jacobi_passed += 1;
        let classes = lie_classes(&l, &s)?;
        let key = classes
            .iter()
            .map(|c| c.name())
            .collect::<Vec<_>>()
            .join(",");
        *patterns.entry(key).or_insert(0) += 1;
    }
    let basic = [FClass::F1, FClass::F4, FClass::F5, FClass::F11];
    let (covered, uncovered) = basic
        .into_iter()
        .partition(|c| patterns.contains_key(&format!("{},MAIN", c.name())));
    Ok(SearchReport {
        n,
        trials,
        jacobi_passed,
        patterns,
        covered,
        uncovered,
    })
}
