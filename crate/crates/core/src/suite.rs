//! The invariant suite run by `natcon verify`: every structural identity
//! checked over a batch of seeded fixtures, with pass counts per check.

use serde::Serialize;

use crate::connection::{
    canonical_torsion_closed, canonical_torsion_from_f, curvature_like_violation, dual_torsion,
    hayden_q, is_canonical_identity, naturality_check, phi_b_delta, pi_family,
    solve_natural_constraints, standard_torsion, torsion_family, AnsatzParams, FamilyParams,
};
use crate::error::Result;
use crate::fixtures::{
    class_fixture, main_fixture, random_alpha, random_basis_change, random_structure, rng, Fixture,
};
use crate::fundamental::{is_in_class, FClass};
use crate::lie::{frozen_fixtures, run_pipeline};
use crate::scalar::{q, Scalar};
use crate::structure::{canonical_structure, validate_structure};
use crate::taxonomy::{class_map, sum_membership, torsion_forms, TorsionClass};

const MAX_FAILURES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// The first few failing cases.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub n: usize,
    pub seeds: u64,
    pub suites: Vec<SuiteResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.passed == s.total)
    }

    fn record(&mut self, name: &'static str, ok: bool, case: impl FnOnce() -> String) {
        let entry = match self.suites.iter().position(|s| s.name == name) {
            Some(i) => &mut self.suites[i],
            None => {
                self.suites.push(SuiteResult {
                    name,
                    passed: 0,
                    total: 0,
                    failures: Vec::new(),
                });
                self.suites.last_mut().expect("just pushed")
            }
        };
        entry.total += 1;
        if ok {
            entry.passed += 1;
        } else if entry.failures.len() < MAX_FAILURES {
            entry.failures.push(case());
        }
    }
}

/// What `T⁰` must look like for a fixture of each basic main class.
pub fn correspondence_holds(class: FClass, fx: &Fixture) -> bool {
    let s = &fx.structure;
    let t0 = canonical_torsion_from_f(&fx.f, s);
    let forms = torsion_forms(&t0, s);
    let zero = |v: &[Scalar]| v.iter().all(Scalar::is_zero);
    let only = |c: TorsionClass| class_map(&t0, s).iter().all(|&(k, m)| m == (k == c));
    match class {
        FClass::F1 => only(TorsionClass::T13) && !zero(&forms.t),
        FClass::F4 => only(TorsionClass::T31) && zero(&forms.t) && !zero(&forms.t_star),
        FClass::F5 => only(TorsionClass::T31) && !zero(&forms.t) && zero(&forms.t_star),
        FClass::F11 => only(TorsionClass::T41),
        FClass::F0 | FClass::Main => true,
    }
}

/// Runs every suite for `n` over seeds `0..seeds`.
pub fn run_suites(n: usize, seeds: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport {
        n,
        seeds,
        suites: Vec::new(),
    };
    let canon = canonical_structure(n)?;
    for seed in 0..seeds {
        let tag = format!("n={n} seed={seed}");
        let mut r = rng(seed);

        let s = random_structure(n, &mut r);
        rep.record(
            "structure_axioms",
            validate_structure(&s.to_parts())?.is_valid(),
            || tag.clone(),
        );
        let pi = pi_family(&s);
        let bridge = (&pi.pi[2] + &pi.pi[4]).transform_slot(3, s.phi())
            == &(&pi.pi[0] - &pi.pi[1]) - &pi.pi[3];
        let curvature_like = pi.pi.iter().all(|p| curvature_like_violation(p).is_none());
        rep.record("pi_tensors", bridge && curvature_like, || tag.clone());

        for class in [FClass::F1, FClass::F4, FClass::F5, FClass::F11] {
            let fx = class_fixture(class, n, seed);
            let (th, ts, om) = fx.data.main_forms(&fx.structure);
            let round =
                fx.forms.theta_h == th && fx.forms.theta_star_h == ts && fx.forms.omega == om;
            rep.record(
                "lee_round_trip",
                round && is_in_class(&fx.f, &fx.structure, class),
                || format!("{class} {tag}"),
            );
            rep.record("correspondence", correspondence_holds(class, &fx), || {
                format!("{class} {tag}")
            });
        }

        let fx = main_fixture(n, seed);
        let st = &fx.structure;
        let alpha = FamilyParams::new(random_alpha(&mut r));
        let t = torsion_family(&alpha, &fx.forms, st);
        let qd = hayden_q(&t);
        rep.record("naturality", naturality_check(&qd, &fx.f, st), || {
            tag.clone()
        });
        rep.record("cyclic_sum", t.cyclic_sum().is_zero(), || tag.clone());
        rep.record(
            "hayden_symmetry",
            qd.tensor() == &t.tensor().permute(&[2, 1, 0]),
            || tag.clone(),
        );

        let t0 = canonical_torsion_from_f(&fx.f, st);
        let closed = canonical_torsion_closed(&fx.forms, st);
        let member = torsion_family(&FamilyParams::canonical(n), &fx.forms, st);
        rep.record("canonical_three_way", t0 == closed && t0 == member, || {
            tag.clone()
        });
        rep.record("canonical_identity", is_canonical_identity(&t0, st), || {
            tag.clone()
        });
        let q0 = phi_b_delta(&fx.f, st);
        rep.record(
            "phi_b_coincidence",
            q0.torsion() == t0 && naturality_check(&q0, &fx.f, st),
            || tag.clone(),
        );

        let tp = standard_torsion(&fx.forms, st);
        let tpp = dual_torsion(&fx.forms, st);
        let avg = (tp.tensor() + tpp.tensor()).scale(&q(1, 2));
        rep.record("standard_dual_average", &avg == t0.tensor(), || tag.clone());
        let sum3 = [TorsionClass::T13, TorsionClass::T31, TorsionClass::T41];
        let sum4 = [
            TorsionClass::T11,
            TorsionClass::T13,
            TorsionClass::T31,
            TorsionClass::T41,
        ];
        rep.record(
            "t0_sum_membership",
            sum_membership(&t0, st, &sum3).member,
            || tag.clone(),
        );
        let both = sum_membership(&tp, st, &sum4).member && sum_membership(&tpp, st, &sum4).member;
        rep.record("standard_dual_sum_membership", both, || tag.clone());

        let bc = random_basis_change(st.dim(), &mut r);
        let mv = fx.transported(&bc);
        let sm = &mv.structure;
        let natural =
            naturality_check(&hayden_q(&torsion_family(&alpha, &mv.forms, sm)), &mv.f, sm);
        let t0m = canonical_torsion_from_f(&mv.f, sm);
        let three = t0m == canonical_torsion_closed(&mv.forms, sm)
            && t0m == torsion_family(&FamilyParams::canonical(n), &mv.forms, sm);
        let summed = sum_membership(&t0m, sm, &sum3).member;
        rep.record("basis_invariance", natural && three && summed, || {
            tag.clone()
        });
    }

    let constraints = solve_natural_constraints(&canon, 4, 0);
    let ok = match &constraints {
        Ok(c) => {
            let mut r = rng(n as u64);
            c.free_parameters == 4
                && c.inert == vec![15, 16]
                && (0..5).all(|_| {
                    c.contains(&AnsatzParams::from_family(
                        &FamilyParams::new(random_alpha(&mut r)),
                        n,
                    ))
                })
        }
        Err(_) => false,
    };
    rep.record("lambda_constraints", ok, || {
        format!("n={n}: {constraints:?}")
    });

    for fx in frozen_fixtures().into_iter().filter(|f| f.n == n) {
        let ok = run_pipeline(&fx.algebra, &fx.structure())
            .map(|p| p.passes() && p.classes == fx.classes);
        rep.record("lie_pipeline", ok.unwrap_or(false), || fx.name.to_string());
    }
    Ok(rep)
}
