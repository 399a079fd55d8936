//! Seeded generators for structures, class data and MAIN-class fixtures.
//!
//! All randomness goes through `ChaCha8Rng` so that a seed reproduces the
//! same fixture on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fundamental::{
    build_class_f, lee_forms, ClassData, FClass, FundamentalTensor, LeeForms,
};
use crate::linmap::LinMap;
use crate::scalar::Scalar;
use crate::structure::{canonical_structure, change_basis, AcbStructure, BasisChange};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(r: &mut impl Rng) -> Scalar {
    Scalar::from_int(r.random_range(-3..=3))
}

fn nonzero_small(r: &mut impl Rng) -> Scalar {
    let v = r.random_range(1..=3);
    Scalar::from_int(if r.random_bool(0.5) { v } else { -v })
}

/// `L·U` with unit diagonals and off-diagonal entries in `{−1, 0, 1}`;
/// determinant 1, so always invertible.
pub fn random_unimodular(d: usize, r: &mut impl Rng) -> LinMap {
    let mut entry = |on: bool| {
        if on {
            Scalar::from_int(r.random_range(-1..=1))
        } else {
            Scalar::zero()
        }
    };
    let lower = LinMap::from_fn(d, |i, j| if i == j { Scalar::one() } else { entry(j < i) });
    let upper = LinMap::from_fn(d, |i, j| if i == j { Scalar::one() } else { entry(j > i) });
    lower.compose(&upper)
}

/// The canonical structure seen through a random unimodular basis change.
pub fn random_structure(n: usize, r: &mut impl Rng) -> AcbStructure {
    let s = canonical_structure(n).expect("n >= 1");
    let p = random_unimodular(s.dim(), r);
    change_basis(&s, &p).expect("unimodular change of basis")
}

pub fn random_basis_change(d: usize, r: &mut impl Rng) -> BasisChange {
    BasisChange::new(random_unimodular(d, r)).expect("unimodular")
}

/// A random 1-form annihilating ξ, guaranteed nonzero.
pub fn random_horizontal_form(s: &AcbStructure, r: &mut impl Rng) -> Vec<Scalar> {
    loop {
        let w: Vec<Scalar> = (0..s.dim()).map(|_| small(r)).collect();
        let c = AcbStructure::eval_form(&w, s.xi());
        let h: Vec<Scalar> = w.iter().zip(s.eta()).map(|(a, e)| a - &(&c * e)).collect();
        if h.iter().any(|v| !v.is_zero()) {
            return h;
        }
    }
}

/// Random data for one class; every form or coefficient is nonzero.
pub fn random_class_data(class: FClass, s: &AcbStructure, r: &mut impl Rng) -> ClassData {
    match class {
        FClass::F1 => ClassData::F1 {
            theta: random_horizontal_form(s, r),
        },
        FClass::F4 => ClassData::F4 {
            theta_xi: nonzero_small(r),
        },
        FClass::F5 => ClassData::F5 {
            theta_star_xi: nonzero_small(r),
        },
        FClass::F11 => ClassData::F11 {
            omega: random_horizontal_form(s, r),
        },
        FClass::F0 => {
            let z = vec![Scalar::zero(); s.dim()];
            ClassData::Main {
                theta: z.clone(),
                theta_star: z.clone(),
                omega: z,
            }
        }
        FClass::Main => {
            let h = random_horizontal_form(s, r);
            let c = nonzero_small(r);
            let c_star = nonzero_small(r);
            let theta = h.iter().zip(s.eta()).map(|(a, e)| a + &(&c * e)).collect();
            let theta_star = s
                .phi()
                .pull_back(&h)
                .iter()
                .zip(s.eta())
                .map(|(a, e)| &(&c_star * e) - a)
                .collect();
            ClassData::Main {
                theta,
                theta_star,
                omega: random_horizontal_form(s, r),
            }
        }
    }
}

/// A structure, a class-F tensor on it and its Lee forms.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub structure: AcbStructure,
    pub data: ClassData,
    pub f: FundamentalTensor,
    pub forms: LeeForms,
}

impl Fixture {
    pub fn build(structure: AcbStructure, data: ClassData) -> Self {
        let f = build_class_f(&data, &structure).expect("generated data is valid");
        let forms = lee_forms(&f, &structure);
        Fixture {
            structure,
            data,
            f,
            forms,
        }
    }

    /// The same fixture expressed in another basis.
    pub fn transported(&self, bc: &BasisChange) -> Self {
        let structure = crate::structure::transport_structure(&self.structure, bc)
            .expect("transport keeps the axioms");
        let f = FundamentalTensor::new(bc.tensor(self.f.tensor()), &structure)
            .expect("transport keeps F valid");
        let forms = lee_forms(&f, &structure);
        let (theta, theta_star, omega) = (
            forms.theta_h.clone(),
            forms.theta_star_h.clone(),
            forms.omega.clone(),
        );
        Fixture {
            structure,
            data: ClassData::Main {
                theta,
                theta_star,
                omega,
            },
            f,
            forms,
        }
    }
}

/// Fixture number `seed` of the given class in dimension `2n+1`, on the
/// canonical structure.
pub fn class_fixture(class: FClass, n: usize, seed: u64) -> Fixture {
    let s = canonical_structure(n).expect("n >= 1");
    let mut r = rng(seed.wrapping_mul(0x9E37_79B9).wrapping_add(n as u64));
    let data = random_class_data(class, &s, &mut r);
    Fixture::build(s, data)
}

/// A MAIN fixture with every Lee datum nonzero.
pub fn main_fixture(n: usize, seed: u64) -> Fixture {
    class_fixture(FClass::Main, n, seed)
}

/// A random parameter quadruple with small rational entries.
pub fn random_alpha(r: &mut impl Rng) -> [Scalar; 4] {
    std::array::from_fn(|_| {
        let den = r.random_range(1..=4);
        Scalar::new(r.random_range(-4..=4), den)
    })
}
