//! Torsion forms, the eleven basic torsion classes and membership in their
//! direct sums.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::connection::{cyclic_sum, Torsion3};
use crate::error::{Error, Result};
use crate::linalg::{in_span, rank, RowEchelon};
use crate::scalar::Scalar;
use crate::structure::AcbStructure;
use crate::tensor::Tensor;

/// `t(x) = g^{ij}T(x,e_i,e_j)`, `t*(x) = g^{ij}T(x,e_i,φe_j)`,
/// `t̂(x) = T(x,ξ,ξ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionForms {
    pub t: Vec<Scalar>,
    pub t_star: Vec<Scalar>,
    pub t_hat: Vec<Scalar>,
}

pub fn torsion_forms(t: &Torsion3, s: &AcbStructure) -> TorsionForms {
    let t = t.tensor();
    let gi = s.g_inv().to_tensor();
    let trace_with = |m: &Tensor| {
        t.contract(m, &[(1, 0), (2, 1)])
            .expect("matching dimensions")
            .into_data()
    };
    // M[i][k] = g^{ij}φ^k_j
    let gi_phi = s.g_inv().compose(&s.phi().transpose()).to_tensor();
    TorsionForms {
        t: trace_with(&gi),
        t_star: trace_with(&gi_phi),
        t_hat: t
            .insert_vector(1, s.xi())
            .insert_vector(1, s.xi())
            .into_data(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TorsionClass {
    T11,
    T12,
    T13,
    T14,
    T21,
    T22,
    T31,
    T32,
    T33,
    T34,
    T41,
}

impl TorsionClass {
    pub const ALL: [TorsionClass; 11] = [
        TorsionClass::T11,
        TorsionClass::T12,
        TorsionClass::T13,
        TorsionClass::T14,
        TorsionClass::T21,
        TorsionClass::T22,
        TorsionClass::T31,
        TorsionClass::T32,
        TorsionClass::T33,
        TorsionClass::T34,
        TorsionClass::T41,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        [
            "T11", "T12", "T13", "T14", "T21", "T22", "T31", "T32", "T33", "T34", "T41",
        ][self.index()]
    }
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TorsionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        TorsionClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownClass(t.to_string()))
    }
}

/// Parses `"T13,T31,T41"`.
pub fn parse_class_list(s: &str) -> Result<Vec<TorsionClass>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Tensors that vanish exactly when `t` satisfies the defining conditions
/// of `class`. Linear in `t`.
pub fn class_residuals(t: &Tensor, s: &AcbStructure, class: TorsionClass) -> Vec<Tensor> {
    use TorsionClass::*;
    let d = s.dim();
    let phi = s.phi();
    let phi2 = s.phi2();
    let xi = s.xi();
    let eta = s.eta();

    let horizontal = || {
        let lift2 = |m: Tensor| Tensor::from_fn(3, d, |i| m[[i[0], i[1]]].clone());
        vec![lift2(t.insert_vector(0, xi)), lift2(t.insert_vector(2, xi))]
    };
    let flip_xy = || t.transform_slot(0, phi).transform_slot(1, phi);
    let flip_yz = || t.transform_slot(1, phi).transform_slot(2, phi);
    // η(z)·m(x,y)
    let eta_z = |m: &Tensor| Tensor::from_fn(3, d, |i| &eta[i[2]] * &m[[i[0], i[1]]]);
    // T(ξ,·,·) embedded as a rank-3 tensor in the last two slots
    let xi_slice = |m: &Tensor| Tensor::from_fn(3, d, |i| m[[i[1], i[2]]].clone());

    match class {
        T11 | T12 => {
            let mut r = horizontal();
            r.push(t + &flip_xy());
            r.push(if class == T11 {
                t + &flip_yz()
            } else {
                t - &flip_yz()
            });
            r
        }
        T13 | T14 => {
            let mut r = horizontal();
            r.push(t - &flip_xy());
            r.push(if class == T13 {
                cyclic_sum(t)
            } else {
                cyclic_sum(&t.transform_slot(0, phi))
            });
            r
        }
        T21 | T22 => {
            let v = t
                .transform_slot(0, phi2)
                .transform_slot(1, phi2)
                .insert_vector(2, xi);
            let w = flip_xy().insert_vector(2, xi);
            vec![
                t - &eta_z(&v),
                if class == T21 {
                    t + &eta_z(&w)
                } else {
                    t - &eta_z(&w)
                },
            ]
        }
        T31 | T32 | T33 | T34 => {
            let a = t
                .transform_slot(1, phi2)
                .transform_slot(2, phi2)
                .insert_vector(0, xi);
            let shape = Tensor::from_fn(3, d, |i| {
                &eta[i[0]] * &a[[i[1], i[2]]] - &eta[i[1]] * &a[[i[0], i[2]]]
            });
            let b = t.insert_vector(0, xi);
            let bt = b.permute(&[1, 0]);
            let b_pp = flip_yz().insert_vector(0, xi);
            let symmetric = matches!(class, T31 | T33);
            let positive = matches!(class, T33 | T34);
            vec![
                t - &shape,
                xi_slice(&if symmetric { &b - &bt } else { &b + &bt }),
                xi_slice(&if positive { &b - &b_pp } else { &b + &b_pp }),
            ]
        }
        T41 => {
            let hat = t.insert_vector(1, xi).insert_vector(1, xi);
            vec![
                t - &Tensor::from_fn(3, d, |i| {
                    &eta[i[2]] * &(&eta[i[1]] * &hat[[i[0]]] - &eta[i[0]] * &hat[[i[1]]])
                }),
            ]
        }
    }
}

/// Evaluates the defining conditions of `class` at every index tuple.
pub fn class_predicate(t: &Torsion3, s: &AcbStructure, class: TorsionClass) -> bool {
    class_residuals(t.tensor(), s, class)
        .iter()
        .all(Tensor::is_zero)
}

pub fn class_map(t: &Torsion3, s: &AcbStructure) -> Vec<(TorsionClass, bool)> {
    TorsionClass::ALL
        .into_iter()
        .map(|c| (c, class_predicate(t, s, c)))
        .collect()
}

pub(crate) type SubspaceCache = [OnceLock<Vec<Tensor>>; 11];

/// `(x, y, z)` with `x < y`, one per free component of an antisymmetric
/// tensor, in lexicographic order.
fn antisymmetric_slots(d: usize) -> Vec<[usize; 3]> {
    let mut v = Vec::with_capacity(d * d * (d - 1) / 2);
    for x in 0..d {
        for y in x + 1..d {
            for z in 0..d {
                v.push([x, y, z]);
            }
        }
    }
    v
}

fn antisymmetric_unit(d: usize, [x, y, z]: [usize; 3]) -> Tensor {
    let mut t = Tensor::zeros(3, d);
    t[[x, y, z]] = Scalar::one();
    t[[y, x, z]] = -Scalar::one();
    t
}

fn combine(d: usize, slots: &[[usize; 3]], coeffs: &[Scalar]) -> Tensor {
    let mut t = Tensor::zeros(3, d);
    for (&[x, y, z], c) in slots.iter().zip(coeffs) {
        if !c.is_zero() {
            t[[x, y, z]] = c.clone();
            t[[y, x, z]] = -c;
        }
    }
    t
}

/// Linearizes the conditions of the given classes over the antisymmetric
/// components and returns their common solution space.
fn solve_conditions(s: &AcbStructure, classes: &[TorsionClass]) -> Vec<Tensor> {
    let d = s.dim();
    let slots = antisymmetric_slots(d);
    // column k holds every residual entry of the k-th unit torsion
    let columns: Vec<Vec<Scalar>> = slots
        .iter()
        .map(|&slot| {
            let e = antisymmetric_unit(d, slot);
            classes
                .iter()
                .flat_map(|&c| class_residuals(&e, s, c))
                .flat_map(Tensor::into_data)
                .collect()
        })
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    let mut ech = RowEchelon::new(slots.len());
    for r in 0..rows {
        if ech.rank() == slots.len() {
            break;
        }
        let row: Vec<Scalar> = columns.iter().map(|c| c[r].clone()).collect();
        if row.iter().any(|v| !v.is_zero()) {
            ech.insert(row);
        }
    }
    ech.nullspace()
        .iter()
        .map(|v| combine(d, &slots, v))
        .collect()
}

/// Exact basis of the subspace of torsion tensors in `class`, cached on
/// the structure.
pub fn class_subspace_basis(s: &AcbStructure, class: TorsionClass) -> &[Tensor] {
    s.subspace_cache()[class.index()].get_or_init(|| solve_conditions(s, &[class]))
}

/// Dimension of the common solution space of all the listed classes.
pub fn intersection_dim(s: &AcbStructure, classes: &[TorsionClass]) -> usize {
    solve_conditions(s, classes).len()
}

/// Result of testing `T ∈ ⊕ classes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumMembership {
    pub member: bool,
    /// One decomposition `T = Σ T_c`, present when `member`.
    pub decomposition: Option<Vec<(TorsionClass, Torsion3)>>,
    /// Sum of the individual subspace dimensions.
    pub total_dim: usize,
    /// Rank of the concatenated bases; equal to `total_dim` exactly when the
    /// sum is direct.
    pub stacked_rank: usize,
}

impl SumMembership {
    pub fn is_direct(&self) -> bool {
        self.total_dim == self.stacked_rank
    }
}

pub fn sum_membership(t: &Torsion3, s: &AcbStructure, classes: &[TorsionClass]) -> SumMembership {
    let mut classes = classes.to_vec();
    classes.sort();
    classes.dedup();
    let bases: Vec<(TorsionClass, &[Tensor])> = classes
        .iter()
        .map(|&c| (c, class_subspace_basis(s, c)))
        .collect();
    let flat: Vec<Vec<Scalar>> = bases
        .iter()
        .flat_map(|(_, b)| b.iter().map(|v| v.data().to_vec()))
        .collect();
    let width = t.tensor().data().len();
    let decomposition = in_span(t.tensor().data(), &flat).map(|coeffs| {
        let mut k = 0;
        bases
            .iter()
            .map(|(c, b)| {
                let mut part = Tensor::zeros(3, s.dim());
                for v in b.iter() {
                    if !coeffs[k].is_zero() {
                        part = &part + &v.scale(&coeffs[k]);
                    }
                    k += 1;
                }
                (
                    *c,
                    Torsion3::new(part).expect("span of antisymmetric tensors"),
                )
            })
            .collect()
    });
    SumMembership {
        member: decomposition.is_some(),
        decomposition,
        total_dim: flat.len(),
        stacked_rank: rank(&flat, width),
    }
}
