use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use natcon_core::connection::{
    ansatz_torsion, canonical_identity_residual, canonical_torsion_closed,
    canonical_torsion_from_f, hayden_q, naturality_report, phi_b_delta, torsion_family,
    FamilyParams, Torsion3,
};
use natcon_core::fixtures::{class_fixture, random_basis_change, random_structure, rng, Fixture};
use natcon_core::fundamental::{
    build_class_f, classify_f, convention_sensitive_classes, lee_forms, FClass, FundamentalTensor,
};
use natcon_core::io::{
    nested_from_tensor3, read_json, FFile, FormsFile, LieFile, Nested3, Params, ParamsFile,
    StructureFile, TorsionFile,
};
use natcon_core::lie::{
    frozen_fixtures, jacobi_violation, run_pipeline, verify_natural_connection,
};
use natcon_core::structure::AcbStructure;
use natcon_core::suite::{run_suites, SuiteReport};
use natcon_core::taxonomy::{
    class_map, parse_class_list, sum_membership, torsion_forms, TorsionForms,
};
use natcon_core::{Error, Result, Scalar};

use crate::report::Report;

/// Rendered output plus whether every requested assertion held.
pub struct Output {
    pub text: String,
    pub json: String,
    pub ok: bool,
}

impl<T: Serialize> From<Report<T>> for Output {
    fn from(r: Report<T>) -> Self {
        Output {
            text: r.to_text(),
            json: r.to_json(),
            ok: r.ok,
        }
    }
}

/// A file artifact, printed as JSON whatever the report format.
fn artifact<T: Serialize>(v: &T) -> Output {
    let json = natcon_core::io::to_json(v);
    Output {
        text: json.clone(),
        json,
        ok: true,
    }
}

fn parent(path: &Path) -> Option<&Path> {
    path.parent()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Artifact {
    /// a structure file
    Structure,
    /// an F file with its class data and structure
    Fixture,
    /// a forms file (θ, θ*, ω)
    Forms,
    /// the torsion T⁰ of a class fixture
    Torsion,
    /// a frozen Lie algebra fixture, selected with --name
    Lie,
}

pub struct GenerateArgs {
    pub kind: Artifact,
    pub class: FClass,
    pub n: usize,
    pub seed: u64,
    pub transport: bool,
    pub name: Option<String>,
}

pub fn generate(a: &GenerateArgs) -> Result<Output> {
    if a.n == 0 {
        return Err(Error::BadDimension("n must be at least 1".into()));
    }
    let fixture = || -> Fixture {
        let fx = class_fixture(a.class, a.n, a.seed);
        if a.transport {
            let mut r = rng(a.seed ^ 0xBA5E);
            let bc = random_basis_change(fx.structure.dim(), &mut r);
            fx.transported(&bc)
        } else {
            fx
        }
    };
    Ok(match a.kind {
        Artifact::Structure => {
            let s = if a.transport {
                random_structure(a.n, &mut rng(a.seed))
            } else {
                natcon_core::structure::canonical_structure(a.n)?
            };
            artifact(&StructureFile::from_structure(&s))
        }
        Artifact::Fixture => {
            let fx = fixture();
            artifact(&FFile::new(
                &fx.f,
                &fx.structure,
                Some(fx.data.clone()),
                a.transport,
            ))
        }
        Artifact::Forms => {
            let fx = fixture();
            artifact(&FormsFile::from_forms(
                &fx.forms,
                &fx.structure,
                a.transport,
            ))
        }
        Artifact::Torsion => {
            let fx = fixture();
            let t0 = canonical_torsion_from_f(&fx.f, &fx.structure);
            artifact(&TorsionFile::new(&t0, &fx.structure, a.transport))
        }
        Artifact::Lie => {
            let name = a.name.as_deref().unwrap_or("l1");
            let fx = frozen_fixtures()
                .into_iter()
                .find(|f| f.name == name)
                .ok_or_else(|| Error::Parse(format!("no frozen Lie fixture named `{name}`")))?;
            artifact(&LieFile::new(&fx.algebra))
        }
    })
}

#[derive(Serialize)]
struct Forms {
    theta: Vec<Scalar>,
    theta_star: Vec<Scalar>,
    omega: Vec<Scalar>,
}

fn forms_of(f: &FundamentalTensor, s: &AcbStructure) -> Forms {
    let lf = lee_forms(f, s);
    Forms {
        theta: lf.theta_h,
        theta_star: lf.theta_star_h,
        omega: lf.omega,
    }
}

fn f_class_map(f: &FundamentalTensor, s: &AcbStructure) -> BTreeMap<String, bool> {
    classify_f(f, s)
        .into_iter()
        .map(|(c, m)| (c.name().to_string(), m))
        .collect()
}

#[derive(Serialize)]
struct ClassifyF {
    n: usize,
    classes: BTreeMap<String, bool>,
    forms: Forms,
    /// classes whose verdict changes with the full-basis trace convention
    convention_sensitive: Vec<String>,
}

pub fn classify_f_cmd(input: &Path, expect: &[FClass]) -> Result<Output> {
    let file: FFile = read_json(input)?;
    let (s, f) = file.load(parent(input))?;
    let classes = f_class_map(&f, &s);
    let mut rep = Report::new(
        "classify-f",
        ClassifyF {
            n: s.n(),
            forms: forms_of(&f, &s),
            convention_sensitive: convention_sensitive_classes(&f, &s)
                .into_iter()
                .map(|c| c.name().to_string())
                .collect(),
            classes,
        },
    );
    for c in expect {
        let member = rep.result.classes[c.name()];
        rep.assert(format!("member of {c}"), member, None);
    }
    Ok(rep.into())
}

#[derive(Serialize)]
struct SumResult {
    classes: Vec<String>,
    member: bool,
    direct: bool,
    total_dim: usize,
    stacked_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<BTreeMap<String, Nested3>>,
}

#[derive(Serialize)]
struct ClassifyTorsion {
    n: usize,
    classes: BTreeMap<String, bool>,
    forms: TorsionForms,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum: Option<SumResult>,
}

pub fn classify_torsion_cmd(input: &Path, sum: Option<&str>) -> Result<Output> {
    let requested = sum.map(parse_class_list).transpose()?;
    let file: TorsionFile = read_json(input)?;
    let (s, t) = file.load(parent(input))?;
    let sum = requested.map(|classes| {
        let m = sum_membership(&t, &s, &classes);
        SumResult {
            classes: classes.iter().map(|c| c.name().to_string()).collect(),
            member: m.member,
            direct: m.is_direct(),
            total_dim: m.total_dim,
            stacked_rank: m.stacked_rank,
            decomposition: m.decomposition.map(|parts| {
                parts
                    .into_iter()
                    .map(|(c, p)| (c.name().to_string(), nested_from_tensor3(p.tensor())))
                    .collect()
            }),
        }
    });
    let mut rep = Report::new(
        "classify-torsion",
        ClassifyTorsion {
            n: s.n(),
            classes: class_map(&t, &s)
                .into_iter()
                .map(|(c, m)| (c.name().to_string(), m))
                .collect(),
            forms: torsion_forms(&t, &s),
            sum,
        },
    );
    if let Some(sr) = &rep.result.sum {
        let (name, member) = (format!("member of {}", sr.classes.join("+")), sr.member);
        rep.assert(name, member, None);
    }
    Ok(rep.into())
}

/// The structure and `F` behind a `--forms` or `--f` input.
pub enum Source {
    Forms(PathBuf),
    F(PathBuf),
}

fn load_source(src: &Source, n: Option<usize>) -> Result<(AcbStructure, FundamentalTensor)> {
    let (s, f) = match src {
        Source::Forms(p) => {
            let file: FormsFile = read_json(p)?;
            let (s, data) = file.load(parent(p))?;
            let f = build_class_f(&data, &s)?;
            (s, f)
        }
        Source::F(p) => read_json::<FFile>(p)?.load(parent(p))?,
    };
    if let Some(n) = n {
        if n != s.n() {
            return Err(Error::ShapeMismatch(format!(
                "--n {n} but the input has n = {}",
                s.n()
            )));
        }
    }
    Ok((s, f))
}

fn first_nonzero(t: &natcon_core::Tensor) -> Option<String> {
    t.first_nonzero().map(|i| format!("first nonzero at {i:?}"))
}

#[derive(Serialize)]
struct TorsionResult {
    n: usize,
    params: ParamsFile,
    #[serde(rename = "T")]
    t: Nested3,
    #[serde(rename = "Q")]
    q: Nested3,
    forms: TorsionForms,
}

pub fn torsion_cmd(params: &Path, src: &Source) -> Result<Output> {
    let pf: ParamsFile = read_json(params)?;
    let (s, f) = load_source(src, None)?;
    let lf = lee_forms(&f, &s);
    if !natcon_core::fundamental::is_in_class(&f, &s, FClass::Main) {
        return Err(Error::BadData("F is not in the main class".into()));
    }
    let t = match pf.params()? {
        Params::Family(p) => torsion_family(&p, &lf, &s),
        Params::Ansatz(l) => ansatz_torsion(&l, &lf, &s),
    };
    let q = hayden_q(&t);
    let nat = naturality_report(&q, &f, &s);
    let cyclic = t.cyclic_sum();
    let mut rep = Report::new(
        "torsion",
        TorsionResult {
            n: s.n(),
            params: pf,
            t: nested_from_tensor3(t.tensor()),
            q: nested_from_tensor3(q.tensor()),
            forms: torsion_forms(&t, &s),
        },
    );
    rep.assert(
        "Q(x,y,φz) − Q(x,φy,z) = F",
        nat.phi_relation.is_none(),
        nat.phi_relation.map(|i| format!("fails at {i:?}")),
    );
    rep.assert(
        "Q(x,y,z) = −Q(x,z,y)",
        nat.metric_relation.is_none(),
        nat.metric_relation.map(|i| format!("fails at {i:?}")),
    );
    rep.assert(
        "cyclic sum of T vanishes",
        cyclic.is_zero(),
        first_nonzero(&cyclic),
    );
    Ok(rep.into())
}

#[derive(Serialize)]
struct CanonicalResult {
    n: usize,
    t0_closed_form: Nested3,
    t0_from_f: Nested3,
    diff: Nested3,
}

pub fn canonical_cmd(src: &Source, n: Option<usize>) -> Result<Output> {
    let (s, f) = load_source(src, n)?;
    let lf = lee_forms(&f, &s);
    let closed = canonical_torsion_closed(&lf, &s);
    let from_f = canonical_torsion_from_f(&f, &s);
    let diff = closed.tensor() - from_f.tensor();
    let member = torsion_family(&FamilyParams::canonical(s.n()), &lf, &s);
    let q0 = phi_b_delta(&f, &s);
    let residual = canonical_identity_residual(&from_f, &s);
    let mut rep = Report::new(
        "canonical",
        CanonicalResult {
            n: s.n(),
            t0_closed_form: nested_from_tensor3(closed.tensor()),
            t0_from_f: nested_from_tensor3(from_f.tensor()),
            diff: nested_from_tensor3(&diff),
        },
    );
    rep.assert(
        "closed form equals T0 from F",
        diff.is_zero(),
        first_nonzero(&diff),
    );
    rep.assert(
        "family member (0, 1/4n, 0, 0) equals T0",
        member == from_f,
        None,
    );
    rep.assert(
        "T0 satisfies the canonical identity",
        residual.is_zero(),
        first_nonzero(&residual),
    );
    rep.assert("antisymmetrized Q0 equals T0", q0.torsion() == from_f, None);
    Ok(rep.into())
}

pub fn verify_cmd(n: usize, seeds: u64) -> Result<Output> {
    if n == 0 {
        return Err(Error::BadDimension("n must be at least 1".into()));
    }
    let suites: SuiteReport = run_suites(n, seeds)?;
    let mut rep = Report::new("verify", &suites);
    for s in &suites.suites {
        let detail = (!s.failures.is_empty()).then(|| s.failures.join("; "));
        rep.assert(
            format!("{} {}/{}", s.name, s.passed, s.total),
            s.passed == s.total,
            detail,
        );
    }
    Ok(rep.into())
}

#[derive(Serialize)]
struct LieResult {
    dim: usize,
    classes: BTreeMap<String, bool>,
    forms: Forms,
    #[serde(rename = "F")]
    f: Nested3,
    #[serde(rename = "T0")]
    t0: Nested3,
}

pub fn liegroup_cmd(input: &Path, params: Option<&Path>) -> Result<Output> {
    let file: LieFile = read_json(input)?;
    let (s, l) = file.load(parent(input))?;
    if let Some(i) = jacobi_violation(&l) {
        return Err(Error::InvalidStructure(format!(
            "Jacobi identity fails at {i:?}"
        )));
    }
    let p = run_pipeline(&l, &s)?;
    let mut rep = Report::new(
        "liegroup",
        LieResult {
            dim: s.dim(),
            classes: f_class_map(&p.f, &s),
            forms: forms_of(&p.f, &s),
            f: nested_from_tensor3(p.f.tensor()),
            t0: nested_from_tensor3(p.t0.tensor()),
        },
    );
    let checks = [
        ("Dφ = 0", &p.report.d_phi),
        ("Dξ = 0", &p.report.d_xi),
        ("Dη = 0", &p.report.d_eta),
        ("Dg = 0", &p.report.d_g),
        ("Dg̃ = 0", &p.report.d_g_assoc),
        ("torsion of ∇ + Q0 matches Q0", &p.report.torsion),
    ];
    for (name, v) in checks {
        rep.assert(
            format!("φB connection: {name}"),
            v.is_none(),
            v.as_ref().map(|i| format!("fails at {i:?}")),
        );
    }
    rep.assert("antisymmetrized Q0 equals T0", p.q0.torsion() == p.t0, None);
    if let Some(path) = params {
        let pf: ParamsFile = read_json(path)?;
        let Params::Family(alpha) = pf.params()? else {
            return Err(Error::Parse("liegroup takes \"alpha\" parameters".into()));
        };
        if !rep.result.classes["MAIN"] {
            return Err(Error::BadData("F is not in the main class".into()));
        }
        let t: Torsion3 = torsion_family(&alpha, &lee_forms(&p.f, &s), &s);
        let r = verify_natural_connection(&l, &s, &hayden_q(&t))?;
        rep.assert(
            "family member is natural",
            r.all_pass(),
            (!r.all_pass()).then(|| format!("{r:?}")),
        );
    }
    Ok(rep.into())
}
