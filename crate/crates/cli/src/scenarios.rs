//! Built-in scenarios. Each one runs a list of claims against the library
//! and records what was expected, what was observed and any witnesses.

use std::collections::BTreeMap;
use std::time::Instant;

use mil_core::families::*;
use mil_core::field::{Fe, Field};
use mil_core::group::{is_pseudo_reflection, is_transvection, FieldData};
use mil_core::invariants::*;
use mil_core::linalg::{fixed_space, Matrix, Subspace};
use mil_core::poly::{ideal_graded_piece, orbit_product, Polynomial};
use mil_core::{Error, MatrixGroup};

use crate::report::{Claim, RunReport, ScenarioReport, Status, Witness};

pub struct ScenarioInfo {
    pub name: &'static str,
    /// Where the scenario's claims come from, in words.
    pub anchor: &'static str,
    pub parameters: &'static str,
}

pub const SCENARIOS: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "cst-serre-sanity",
        anchor: "sanity corpus: non-modular and single-hyperplane groups with polynomial invariants, Serre's reflection condition and the degree identities",
        parameters: "",
    },
    ScenarioInfo {
        name: "example-abelian-i",
        anchor: "abelian transvection groups [[I,0],[B,I]] with B anti-hermitian over GF(q^2): differential degree, degree arithmetic, abelian criterion",
        parameters: "q (default 2), n (default 2)",
    },
    ScenarioInfo {
        name: "example-abelian-ii",
        anchor: "abelian transvection groups [[I,0],[B,I]] with B symmetric over GF(q): differential degree q^n - 1, not coregular",
        parameters: "q (default 2), n (default 2)",
    },
    ScenarioInfo {
        name: "example-gu3",
        anchor: "subgroups of GU_3(q) fixing e3, with and without the unitary reflection tau: invariants x1, F, N(x3), the semi-invariant h, hypersurface ring, ideal contraction",
        parameters: "q (default 2), max-degree caps the degree windows",
    },
    ScenarioInfo {
        name: "family-I",
        anchor: "unitary groups: stabilizer of a maximal isotropic subspace, the anti-hermitian block group",
        parameters: "q (default 2), m (default 2)",
    },
    ScenarioInfo {
        name: "family-II",
        anchor: "symplectic groups: stabilizer of a maximal isotropic subspace, the symmetric block group",
        parameters: "q (default 2), m (default 2)",
    },
    ScenarioInfo {
        name: "family-III-a",
        anchor: "orthogonal groups in odd characteristic: alternating block stabilizer and the GO_3 stabilizers, p-groups without pseudo-reflections",
        parameters: "q odd (default 3), m (default 2)",
    },
    ScenarioInfo {
        name: "family-III-b",
        anchor: "orthogonal groups in even characteristic: symmetric block stabilizer with zero diagonal, a p-group without pseudo-reflections",
        parameters: "q even (default 2), m (default 2)",
    },
    ScenarioInfo {
        name: "family-IV",
        anchor: "symmetric groups on the reduced permutation module: the stabilizer of U is generated by sigma with V^sigma = U; the p = 2 reflection count",
        parameters: "p (default: both 3 and 2), m (default 6)",
    },
    ScenarioInfo {
        name: "thm1-inheritance",
        anchor: "inheritance of the direct summand property and coregularity by point stabilizers; factorization of the different",
        parameters: "seed selects the random sample vectors",
    },
];

/// Groups used by the corpus-wide scenarios, as `resolve` specs.
pub const CORPUS: &[&str] = &[
    "s3:q=7",
    "s3:q=5",
    "s3:q=2",
    "s3:q=3",
    "diag:q=7:m=3",
    "diag:q=5:m=4",
    "transvection:q=3",
    "transvection:q=4",
    "transvection:q=5",
    "trivial:q=2:n=2",
    "gu3:q=2",
    "gu3:q=2:sub=Htilde",
    "gu3:q=3",
    "unitary:q=2:n=2",
    "unitary:q=3:n=2",
    "symplectic:q=2:m=2",
    "symplectic:q=3:m=2",
    "orthogonal-odd:q=3:m=2",
    "orthogonal-even:q=2:m=2",
    "go3:q=3",
    "go3:q=3:sub=Hminus",
    "go3:q=5",
    "symmetric:p=2:m=6:sub=H",
    "symmetric:p=3:m=6:sub=sigma",
    "symmetric:p=3:m=6:sub=H",
    "symmetric:p=3:m=6",
    "symmetric:p=2:m=6",
];

#[derive(Clone, Debug, Default)]
pub struct Params {
    pub q: Option<u32>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub p: Option<u32>,
    pub max_degree: Option<u32>,
    /// Largest graded piece handled by dense elimination.
    pub budget: Option<usize>,
    pub seed: u64,
}

impl Params {
    pub fn budget(&self) -> Budget {
        let mut b = Budget { seed: self.seed, ..Budget::default() };
        if let Some(d) = self.max_degree {
            b.max_degree = d;
        }
        if let Some(p) = self.budget {
            b.max_piece = p;
        }
        b
    }

    fn has_family_params(&self) -> bool {
        self.q.is_some() || self.n.is_some() || self.m.is_some() || self.p.is_some()
    }
}

/// Rejected parameters or scenario names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

type ScenarioResult = Result<(), UsageError>;

struct Outcome {
    status: Status,
    observed: String,
    witness: Option<Witness>,
    detail: Option<String>,
}

impl Outcome {
    fn new(pass: bool, observed: impl Into<String>) -> Outcome {
        let status = if pass { Status::Pass } else { Status::Fail };
        Outcome { status, observed: observed.into(), witness: None, detail: None }
    }

    fn inconclusive(observed: impl Into<String>) -> Outcome {
        Outcome { status: Status::Inconclusive, observed: observed.into(), witness: None, detail: None }
    }

    fn witness(mut self, w: Option<Witness>) -> Outcome {
        self.witness = w;
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Outcome {
        self.detail = Some(d.into());
        self
    }
}

struct Recorder {
    claims: Vec<Claim>,
    fields: Vec<FieldData>,
    params: BTreeMap<String, u64>,
    budget: Budget,
}

fn field_data(f: &Field) -> FieldData {
    FieldData { p: f.characteristic(), r: f.degree(), modulus: f.modulus().to_vec() }
}

fn error_status(e: &Error) -> Status {
    match e {
        Error::Budget(_) | Error::CapExceeded { .. } => Status::Inconclusive,
        _ => Status::Fail,
    }
}

impl Recorder {
    fn new(budget: Budget) -> Recorder {
        Recorder { claims: Vec::new(), fields: Vec::new(), params: BTreeMap::new(), budget }
    }

    fn param(&mut self, key: &str, value: u64) {
        self.params.insert(key.to_string(), value);
    }

    fn field(&mut self, f: &Field) {
        let d = field_data(f);
        if !self.fields.contains(&d) {
            self.fields.push(d);
        }
    }

    fn claim(&mut self, id: impl Into<String>, operation: &str, expected: impl Into<String>, run: impl FnOnce() -> mil_core::Result<Outcome>) {
        let (status, observed, witness, detail) = match run() {
            Ok(o) => (o.status, o.observed, o.witness, o.detail),
            Err(e) => (error_status(&e), format!("error: {e}"), None, None),
        };
        self.claims.push(Claim {
            id: id.into(),
            operation: operation.into(),
            expected: expected.into(),
            observed,
            status,
            witness,
            detail,
            recheck: None,
        });
    }

    /// Records a failed construction; returns `None` so callers can bail out.
    fn build<T>(&mut self, id: &str, operation: &str, r: mil_core::Result<T>) -> Result<Option<T>, UsageError> {
        match r {
            Ok(t) => Ok(Some(t)),
            Err(Error::InvalidParameters(m)) | Err(Error::InvalidField(m)) => Err(UsageError(m)),
            Err(e) => {
                self.claim(id, operation, "construction succeeds", || Err(e));
                Ok(None)
            }
        }
    }
}

fn set_str(degrees: &[u32]) -> String {
    let v: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn coregularity_str(c: &CoregularityVerdict) -> String {
    match &c.decision {
        Coregularity::Coregular { degrees, field_order, .. } => {
            format!("coregular {} (parameters over GF({field_order}))", set_str(degrees))
        }
        Coregularity::NotCoregular { obstruction, .. } => format!("not coregular ({obstruction})"),
        Coregularity::Inconclusive { reason } => format!("inconclusive ({reason})"),
    }
}

fn cor_outcome(c: &CoregularityVerdict, ok: bool, observed: String) -> Outcome {
    match c.decision {
        Coregularity::Inconclusive { .. } => Outcome::inconclusive(observed),
        _ => Outcome::new(ok, observed),
    }
}

fn dsp_str(v: &DspVerdict) -> String {
    match (&v.decision, &v.obstruction) {
        (DspDecision::Holds, _) => "holds".into(),
        (DspDecision::Fails, Some(o)) => format!("fails ({})", serde_json::to_value(o).unwrap().as_str().unwrap()),
        (DspDecision::Fails, None) => "fails".into(),
    }
}

fn parameters_witness(g: &MatrixGroup, c: &CoregularityVerdict) -> Option<Witness> {
    match &c.decision {
        Coregularity::Coregular { degrees, witness, field_order } => Some(Witness::Parameters {
            group: g.to_data(),
            field: field_data(&Field::of_order(*field_order).ok()?),
            polynomials: witness.iter().map(|p| p.to_string()).collect(),
            degrees: degrees.clone(),
        }),
        _ => None,
    }
}

fn dsp_witness(g: &MatrixGroup, d: &DifferentData, v: &DspVerdict) -> Option<Witness> {
    v.witness.as_ref().map(|w| Witness::DirectSummand {
        group: g.to_data(),
        theta: d.theta.to_string(),
        witness: w.to_string(),
    })
}

/// Different and DSP verdict through one context.
fn dsp_with(g: &MatrixGroup, b: &Budget) -> mil_core::Result<(DifferentData, DspVerdict)> {
    let ctx = Context::new(g, b.clone());
    let d = different_ctx(&ctx)?;
    let v = dsp_decide_with(&ctx, &d)?;
    Ok((d, v))
}

fn dsp_claim(rec: &mut Recorder, id: &str, g: &MatrixGroup, expect_holds: bool) {
    let b = rec.budget.clone();
    let expected = if expect_holds { "holds, with a witness" } else { "fails" };
    rec.claim(id, "dsp_decide", expected, || {
        let (d, v) = dsp_with(g, &b)?;
        let obs = format!("{} (delta = {}, transfer image dimension {})", dsp_str(&v), d.delta, v.image_dim.unwrap_or(0));
        Ok(Outcome::new(v.holds() == expect_holds, obs).witness(dsp_witness(g, &d, &v)))
    });
}

fn unit(n: usize, i: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; n];
    v[i] = Fe::ONE;
    v
}

fn coordinate_span(f: &Field, n: usize, idx: impl IntoIterator<Item = usize>) -> Subspace {
    Subspace::from_vectors(f, n, idx.into_iter().map(|i| unit(n, i)).collect())
}

fn element_order(g: &Matrix) -> u64 {
    let mut x = g.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = x.mul(g).unwrap();
        k += 1;
    }
    k
}

fn is_prime_power(q: u32) -> bool {
    mil_core::field::prime_power(q).is_some()
}

fn require(cond: bool, msg: impl Into<String>) -> ScenarioResult {
    if cond {
        Ok(())
    } else {
        Err(UsageError(msg.into()))
    }
}

fn invariant_under(g: &MatrixGroup, p: &Polynomial) -> mil_core::Result<bool> {
    for x in g.generators() {
        if &p.act(x)? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

fn gu3(rec: &mut Recorder, p: &Params) -> ScenarioResult {
    let q = p.q.unwrap_or(2);
    require(is_prime_power(q) && q <= 4, format!("example-gu3 needs a prime power q <= 4, got {q}"))?;
    rec.param("q", q as u64);
    let Some(g) = rec.build("gu3.orders", "gu3_stabilizers", gu3_stabilizers(q))? else { return Ok(()) };
    let k = g.field.clone();
    rec.field(&k);
    let (q64, qs) = (q as u64, q as usize);
    let b = rec.budget.clone();

    rec.claim("gu3.orders", "gu3_stabilizers", format!("|H| = (q+1)q^3 = {}, |H~| = q^3 = {}", (q64 + 1) * q64.pow(3), q64.pow(3)), || {
        let ok = g.h.order() == (qs + 1) * qs.pow(3) && g.h_tilde.order() == qs.pow(3) && g.h_tilde.is_subgroup_of(&g.h);
        Ok(Outcome::new(ok, format!("|H| = {}, |H~| = {}", g.h.order(), g.h_tilde.order())))
    });
    rec.claim("gu3.tau", "is_pseudo_reflection", format!("tau is a pseudo-reflection of order {} in H and <H~, tau> = H", q + 1), || {
        let ord = element_order(&g.tau);
        let hm = g.h_m(1)?;
        let ok = is_pseudo_reflection(&g.tau) && !is_transvection(&g.tau) && ord == q64 + 1 && hm.elements() == g.h.elements();
        Ok(Outcome::new(ok, format!("order {ord}, pseudo-reflection {}, <H~, tau> of order {}", is_pseudo_reflection(&g.tau), hm.order())))
    });

    let x1 = Polynomial::var(&k, 3, 0);
    let f = Polynomial::parse(&k, 3, &format!("x1*x3^{q} + x2^{} + x3*x1^{q}", q + 1)).unwrap();
    let n3 = match orbit_product(g.h.elements(), &Polynomial::var(&k, 3, 2)) {
        Ok(n3) => n3,
        Err(e) => {
            rec.claim("gu3.invariants", "orbit_product", "N(x3) is computable", || Err(e));
            return Ok(());
        }
    };
    let q2 = q * q;
    let h = Polynomial::parse(&k, 3, &format!("x2^{q2} - x2*x1^{}", q2 - 1)).unwrap();

    rec.claim(
        "gu3.invariants",
        "invariant_space",
        format!("A^H_1 = span(x1); F and N(x3) are H-invariant of degrees {} and {}", q + 1, q64.pow(3)),
        || {
            let a1 = invariant_space(&g.h, 1)?;
            let ok = a1 == vec![x1.clone()]
                && invariant_under(&g.h, &f)?
                && invariant_under(&g.h, &n3)?
                && f.degree() == Some(q + 1)
                && n3.degree() == Some(q.pow(3));
            Ok(Outcome::new(ok, format!("dim A^H_1 = {}, deg F = {}, deg N(x3) = {}", a1.len(), f.degree().unwrap(), n3.degree().unwrap()))
                .witness(Some(Witness::Invariants {
                    group: g.h.to_data(),
                    polynomials: vec![x1.to_string(), f.to_string(), n3.to_string()],
                })))
        },
    );
    rec.claim(
        "gu3.semi-invariant",
        "semi_invariant_space",
        format!("h is H~-invariant, tau.h = eta h and h lies in the degree-{q2} semi-invariants of H for its character"),
        || {
            let tilde = invariant_under(&g.h_tilde, &h)?;
            let twisted = h.act(&g.tau)? == h.scale(g.eta);
            let chi = Character::of_semi_invariant(&g.h, &h)?;
            let semi = semi_invariant_space(&g.h, &chi, q2)?;
            let len = semi.first().map_or(0, |s| s.to_dense(q2).len());
            let space = Subspace::from_vectors(&k, len.max(1), semi.iter().map(|s| s.to_dense(q2)).collect());
            let inside = len > 0 && space.contains(&h.to_dense(q2));
            Ok(Outcome::new(
                tilde && twisted && inside,
                format!("H~-invariant {tilde}, tau.h = eta h {twisted}, in semi-invariant space of dimension {} {inside}", semi.len()),
            )
            .witness(Some(Witness::Invariants { group: g.h_tilde.to_data(), polynomials: vec![h.to_string()] })))
        },
    );

    let window = 3 * q2;
    rec.claim(
        "gu3.decomposition",
        "hilbert_function",
        format!("dim A^H~_d = sum_{{i=0..{q}}} dim A^H_(d - {q2} i) for d <= {window}"),
        || {
            if window > b.max_degree {
                return Ok(Outcome::inconclusive(format!("window {window} exceeds max degree {}", b.max_degree)));
            }
            let dh = hilbert_function_ctx(&Context::new(&g.h, b.clone()), window)?.dims;
            let dt = hilbert_function_ctx(&Context::new(&g.h_tilde, b.clone()), window)?.dims;
            let step = q2 as usize;
            let bad = (0..=window as usize).find(|&d| {
                let pred: usize = (0..=qs).filter(|i| i * step <= d).map(|i| dh[d - i * step]).sum();
                pred != dt[d]
            });
            let obs = format!("dims A^H~ = {:?}", dt);
            Ok(match bad {
                None => Outcome::new(true, obs),
                Some(d) => Outcome::new(false, obs).detail(format!("first mismatch in degree {d}")),
            })
        },
    );
    let gens4 = vec![x1.clone(), f.clone(), n3.clone(), h.clone()];
    rec.claim(
        "gu3.generation",
        "algebra_generation_check",
        format!("x1, F, N(x3), h generate A^H~ in degrees <= {window}"),
        || {
            let r = algebra_generation_check_ctx(&Context::new(&g.h_tilde, b.clone()), &gens4, window)?;
            Ok(Outcome::new(r.pass, if r.pass { "generated".to_string() } else { format!("fails in degree {:?}", r.first_failure) }))
        },
    );
    rec.claim(
        "gu3.generation-without-h",
        "algebra_generation_check",
        format!("x1, F, N(x3) alone first fail in degree {q2}"),
        || {
            let r = algebra_generation_check_ctx(&Context::new(&g.h_tilde, b.clone()), &gens4[..3], q2)?;
            let obs = match r.first_failure {
                Some(d) => format!("first failure in degree {d}, missing {}", r.witness.as_ref().unwrap()),
                None => "generated".to_string(),
            };
            Ok(Outcome::new(r.first_failure == Some(q2), obs))
        },
    );
    let ideal_window = q.pow(3) + 8;
    rec.claim(
        "gu3.ideal-identity",
        "ideal_graded_piece",
        format!("(x1, F, N(x3), h)A = (x1, x2^{}, x3^{})A = (x1, F, N(x3))A in degrees <= {ideal_window}", q + 1, q.pow(3)),
        || {
            if ideal_window > b.max_degree {
                return Ok(Outcome::inconclusive(format!("window {ideal_window} exceeds max degree {}", b.max_degree)));
            }
            let mid = vec![
                x1.clone(),
                Polynomial::var(&k, 3, 1).pow(q + 1),
                Polynomial::var(&k, 3, 2).pow(q.pow(3)),
            ];
            let ctx = Context::new(&g.h, b.clone());
            for d in 0..=ideal_window {
                ctx.check_piece(d)?;
                let a = ideal_graded_piece(&k, 3, &gens4, d)?;
                if a != ideal_graded_piece(&k, 3, &mid, d)? || a != ideal_graded_piece(&k, 3, &gens4[..3], d)? {
                    return Ok(Outcome::new(false, format!("ideals differ in degree {d}")));
                }
            }
            Ok(Outcome::new(true, format!("equal in every degree <= {ideal_window}")))
        },
    );
    rec.claim(
        "gu3.contraction",
        "ideal_contraction_check",
        format!("J = (x1, F, N(x3)) in A^H~ is not contracted from A: first failure in degree {q2}"),
        || {
            let r = ideal_contraction_check_ctx(&Context::new(&g.h_tilde, b.clone()), &gens4[..3], q2)?;
            let w = r.witness.as_ref().map(|p| Witness::Contraction {
                group: g.h_tilde.to_data(),
                generators: gens4[..3].iter().map(|p| p.to_string()).collect(),
                degree: r.first_failure.unwrap(),
                polynomial: p.to_string(),
            });
            let obs = match (&r.first_failure, &r.witness) {
                (Some(d), Some(p)) => format!("fails in degree {d}: {p} lies in (J A) but not in J"),
                _ => "contraction holds".to_string(),
            };
            Ok(Outcome::new(r.first_failure == Some(q2), obs).witness(w))
        },
    );
    dsp_claim(rec, "gu3.dsp-Htilde", &g.h_tilde, false);
    dsp_claim(rec, "gu3.dsp-H", &g.h, true);
    for m in 2..=q {
        if (q + 1) % m != 0 {
            continue;
        }
        match g.h_m(m) {
            Ok(hm) => dsp_claim(rec, &format!("gu3.dsp-H{m}"), &hm, false),
            Err(e) => rec.claim(format!("gu3.dsp-H{m}"), "dsp_decide", "fails", || Err(e)),
        }
    }
    let b2 = rec.budget.clone();
    rec.claim(
        "gu3.coregular-H",
        "coregularity_decide",
        format!("coregular with degrees {{1,{},{}}}, sum = delta_H + 3", q + 1, q64.pow(3)),
        || {
            let c = coregularity_decide(&g.h, &b2)?;
            let want = vec![1, q + 1, q.pow(3)];
            let delta = c.delta.unwrap_or(0);
            let ok = c.degrees() == Some(&want[..]) && want.iter().sum::<u32>() == delta + 3;
            Ok(cor_outcome(&c, ok, format!("{} with delta_H = {delta}", coregularity_str(&c))).witness(parameters_witness(&g.h, &c)))
        },
    );
    rec.claim("gu3.coregular-Htilde", "coregularity_decide", "not coregular", || {
        let c = coregularity_decide(&g.h_tilde, &b2)?;
        Ok(cor_outcome(&c, c.is_not_coregular(), coregularity_str(&c)))
    });
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BlockKind {
    AntiHermitian,
    Symmetric,
}

fn block_group(kind: BlockKind, q: u32, n: usize) -> mil_core::Result<MatrixGroup> {
    match kind {
        BlockKind::AntiHermitian => Ok(unitary_transvection_family(q, n)?.group),
        BlockKind::Symmetric => symplectic_stabilizer(q, n),
    }
}

/// Point stabilizer of `<e3, .., e2n>` with its trivial summand removed.
fn reduce_to_two(g: &MatrixGroup, n: usize) -> MatrixGroup {
    let u = coordinate_span(g.field(), 2 * n, 2..2 * n);
    g.point_stabilizer(&u).split_trivial_summand().group
}

fn abelian_example(rec: &mut Recorder, p: &Params, kind: BlockKind, prefix: &str) -> ScenarioResult {
    let q = p.q.unwrap_or(2);
    let n = p.n.unwrap_or(2) as usize;
    require(is_prime_power(q) && q <= 16, format!("{prefix}: q must be a prime power <= 16, got {q}"))?;
    require((2..=3).contains(&n), format!("{prefix}: n must be 2 or 3, got {n}"))?;
    rec.param("q", q as u64);
    rec.param("n", n as u64);
    let Some(g) = rec.build(&format!("{prefix}.order"), "unitary_transvection_family", block_group(kind, q, n))? else {
        return Ok(());
    };
    rec.field(g.field());
    let b = rec.budget.clone();
    let qq = q as u64;
    let (order, delta) = match kind {
        BlockKind::AntiHermitian => (qq.pow((n * n) as u32), (qq.pow(2 * n as u32) - 1) / (qq * qq - 1) * (qq - 1)),
        BlockKind::Symmetric => (qq.pow((n * (n + 1) / 2) as u32), qq.pow(n as u32) - 1),
    };
    let op = if kind == BlockKind::AntiHermitian { "unitary_transvection_family" } else { "symplectic_stabilizer" };
    rec.claim(format!("{prefix}.order"), op, format!("abelian of order {order}, generated by its transvections"), || {
        let t = g.transvection_subgroup();
        let ok = g.order() as u64 == order && g.is_abelian() && t.order() == g.order();
        Ok(Outcome::new(ok, format!("order {}, abelian {}, transvection subgroup of order {}", g.order(), g.is_abelian(), t.order())))
    });
    rec.claim(
        format!("{prefix}.hyperplane"),
        "point_stabilizer",
        format!("the stabilizer of <e2, .., e{}> has order {q} and differential degree {}", 2 * n, q - 1),
        || {
            let u = coordinate_span(g.field(), 2 * n, 1..2 * n);
            let h = g.point_stabilizer(&u);
            let d = different_ctx(&Context::new(&h, b.clone()))?;
            Ok(Outcome::new(h.order() == q as usize && d.delta == q - 1, format!("order {}, delta {}", h.order(), d.delta)))
        },
    );
    rec.claim(format!("{prefix}.delta"), "different", format!("delta = {delta}"), || {
        let d = different_ctx(&Context::new(&g, b.clone()))?;
        let cert = match d.certification {
            Certification::Global => "global",
            Certification::Local => "per hyperplane",
        };
        Ok(Outcome::new(d.delta as u64 == delta, format!("delta = {} over {} hyperplanes, certified {cert}", d.delta, d.arrangement.hyperplanes.len())))
    });
    let w = if n == 2 {
        g.clone()
    } else {
        let k = reduce_to_two(&g, n);
        let g2 = block_group(kind, q, 2);
        rec.claim(format!("{prefix}.reduction"), "split_trivial_summand", "the stabilizer of <e3, .., e2n> is G_2 plus a trivial summand", || {
            let g2 = g2?;
            Ok(Outcome::new(k.elements() == g2.elements(), format!("reduced group of order {} in dimension {}", k.order(), k.degree())))
        });
        k
    };
    let label = if n == 2 { "G_2" } else { "the reduced stabilizer" };
    let cor = coregularity_decide(&w, &b);
    rec.claim(
        format!("{prefix}.coregularity"),
        "coregularity_decide",
        format!("{label} is not coregular: every shape (1,1,p^r,p^s) is refuted by the degree sum"),
        || {
            let c = cor.clone()?;
            let shapes: Vec<_> = c.rejections.iter().filter(|r| r.degrees.iter().filter(|&&d| d == 1).count() == 2).collect();
            let ok = c.is_not_coregular() && !shapes.is_empty() && shapes.iter().all(|r| r.filter == "degree-sum");
            let detail = shapes.iter().map(|r| format!("{}: {}", set_str(&r.degrees), r.detail)).collect::<Vec<_>>().join("; ");
            Ok(cor_outcome(&c, ok, coregularity_str(&c)).detail(detail))
        },
    );
    dsp_claim(rec, &format!("{prefix}.dsp"), &w, false);
    rec.claim(format!("{prefix}.abelian-criterion"), "dsp_abelian_criterion", "fails, agreeing with dsp_decide", || {
        let c = cor?;
        let a = dsp_abelian_criterion(&w, &c)?;
        let (_, v) = dsp_with(&w, &b)?;
        Ok(match a {
            Some(a) => Outcome::new(!a.holds() && a.decision == v.decision, format!("criterion {}, direct {}", dsp_str(&a), dsp_str(&v))),
            None => Outcome::inconclusive("criterion gives no conclusion"),
        })
    });
    Ok(())
}

fn census_str(g: &MatrixGroup) -> String {
    let c = g.census();
    format!("{} pseudo-reflections, {} transvections", c.pseudo_reflections, c.transvections)
}

fn transvection_family(rec: &mut Recorder, p: &Params, kind: BlockKind, prefix: &str) -> ScenarioResult {
    let q = p.q.unwrap_or(2);
    let m = p.m.unwrap_or(2) as usize;
    require(is_prime_power(q) && q <= 16, format!("{prefix}: q must be a prime power <= 16, got {q}"))?;
    require((2..=3).contains(&m), format!("{prefix}: m must be 2 or 3, got {m}"))?;
    rec.param("q", q as u64);
    rec.param("m", m as u64);
    let op = if kind == BlockKind::AntiHermitian { "unitary_transvection_family" } else { "symplectic_stabilizer" };
    let Some(g) = rec.build(&format!("{prefix}.order"), op, block_group(kind, q, m))? else { return Ok(()) };
    rec.field(g.field());
    let qq = q as u64;
    let order = match kind {
        BlockKind::AntiHermitian => qq.pow((m * m) as u32),
        BlockKind::Symmetric => qq.pow((m * (m + 1) / 2) as u32),
    };
    rec.claim(format!("{prefix}.order"), op, format!("order {order}"), || {
        Ok(Outcome::new(g.order() as u64 == order, format!("order {}", g.order())))
    });
    rec.claim(format!("{prefix}.census"), "reflection_census", "every pseudo-reflection is a transvection and they generate the group", || {
        let c = g.census();
        let t = g.transvection_subgroup();
        Ok(Outcome::new(c.pseudo_reflections == c.transvections && t.order() == g.order(), census_str(&g)))
    });
    rec.claim(format!("{prefix}.pgroup-criterion"), "dsp_pgroup_criterion", "no conclusion (transvection-generated p-group)", || {
        let v = dsp_pgroup_criterion(&g)?;
        Ok(Outcome::new(v.is_none(), if v.is_none() { "no conclusion" } else { "fails" }))
    });
    if m == 2 {
        dsp_claim(rec, &format!("{prefix}.dsp"), &g, false);
    } else {
        let k = reduce_to_two(&g, m);
        dsp_claim(rec, &format!("{prefix}.dsp-reduced-stabilizer"), &k, false);
    }
    Ok(())
}

fn no_reflection_pgroup(rec: &mut Recorder, id: &str, g: &MatrixGroup, order: u64) {
    let b = rec.budget.clone();
    rec.claim(format!("{id}.order"), "point_stabilizer", format!("order {order}"), || {
        Ok(Outcome::new(g.order() as u64 == order, format!("order {}", g.order())))
    });
    rec.claim(format!("{id}.census"), "reflection_census", "no pseudo-reflections", || {
        Ok(Outcome::new(g.census().pseudo_reflections == 0, census_str(g)))
    });
    rec.claim(format!("{id}.pgroup-criterion"), "dsp_pgroup_criterion", "fails, agreeing with dsp_decide", || {
        let v = dsp_pgroup_criterion(g)?;
        let (_, direct) = dsp_with(g, &b)?;
        Ok(match v {
            Some(v) => Outcome::new(!v.holds() && !direct.holds(), format!("criterion {}, direct {}", dsp_str(&v), dsp_str(&direct))),
            None => Outcome::new(false, format!("criterion gives no conclusion, direct {}", dsp_str(&direct))),
        })
    });
}

fn family_3a(rec: &mut Recorder, p: &Params) -> ScenarioResult {
    let q = p.q.unwrap_or(3);
    let m = p.m.unwrap_or(2) as usize;
    require(is_prime_power(q) && q % 2 == 1 && q <= 9, format!("family-III-a needs an odd prime power q <= 9, got {q}"))?;
    require((2..=3).contains(&m), format!("family-III-a: m must be 2 or 3, got {m}"))?;
    rec.param("q", q as u64);
    rec.param("m", m as u64);
    if let Some(h) = rec.build("iii-a.order", "orthogonal_plus_stabilizer_odd", orthogonal_plus_stabilizer_odd(q, m))? {
        rec.field(h.field());
        no_reflection_pgroup(rec, "iii-a", &h, (q as u64).pow((m * (m - 1) / 2) as u32));
    }
    if let Some(g) = rec.build("go3.orders", "go3_stabilizers", go3_stabilizers(q))? {
        rec.claim("go3.orders", "go3_stabilizers", format!("|H| = {}, |H-| = {q}", 2 * q), || {
            Ok(Outcome::new(g.h.order() == 2 * q as usize && g.h_minus.order() == q as usize, format!("|H| = {}, |H-| = {}", g.h.order(), g.h_minus.order())))
        });
        no_reflection_pgroup(rec, "go3.Hminus", &g.h_minus, q as u64);
    }
    Ok(())
}

fn family_3b(rec: &mut Recorder, p: &Params) -> ScenarioResult {
    let q = p.q.unwrap_or(2);
    let m = p.m.unwrap_or(2) as usize;
    require(is_prime_power(q) && q % 2 == 0 && q <= 8, format!("family-III-b needs q in {{2, 4, 8}}, got {q}"))?;
    require((2..=3).contains(&m), format!("family-III-b: m must be 2 or 3, got {m}"))?;
    rec.param("q", q as u64);
    rec.param("m", m as u64);
    if let Some(h) = rec.build("iii-b.order", "orthogonal_plus_stabilizer_even", orthogonal_plus_stabilizer_even(q, m))? {
        rec.field(h.field());
        no_reflection_pgroup(rec, "iii-b", &h, (q as u64).pow((m * (m - 1) / 2) as u32));
    }
    Ok(())
}

fn family_4(rec: &mut Recorder, p: &Params) -> ScenarioResult {
    let m = p.m.unwrap_or(6) as usize;
    let primes: Vec<u32> = match p.p {
        Some(p) => vec![p],
        None => vec![3, 2],
    };
    for &pr in &primes {
        require(mil_core::field::is_prime(pr) && m >= 5 && m % pr as usize == 0 && m <= 8, format!("family-IV needs a prime p dividing m with 5 <= m <= 8, got p = {pr}, m = {m}"))?;
    }
    if let Some(pr) = p.p {
        rec.param("p", pr as u64);
    }
    rec.param("m", m as u64);
    let b = rec.budget.clone();
    for pr in primes {
        let prefix = format!("iv.p{pr}");
        let Some(fam) = rec.build(&format!("{prefix}.construction"), "symmetric_family", symmetric_family(pr, m))? else { continue };
        rec.field(&fam.field);
        let mp = fam.blocks();
        let fact: usize = (1..=pr as usize).product();
        rec.claim(format!("{prefix}.stabilizer-U1"), "point_stabilizer", format!("the stabilizer of U1 is S_{pr}^{mp} of order {}", fact.pow(mp as u32)), || {
            let s = fam.group.point_stabilizer(&fam.u1);
            Ok(Outcome::new(s.elements() == fam.h.elements() && s.order() == fact.pow(mp as u32), format!("order {}", s.order())))
        });
        if let Some(u) = &fam.u {
            let codim = (pr as usize - 1) * mp - 2;
            rec.claim(
                format!("{prefix}.sigma"),
                "point_stabilizer",
                format!("the stabilizer of U is <sigma> of order {pr}, V^sigma = U of codimension {codim}, sigma not a pseudo-reflection"),
                || {
                    let s = fam.group.point_stabilizer(u);
                    let fs = fixed_space(&fam.sigma)?;
                    let ok = s.order() == pr as usize
                        && s.contains(&fam.sigma)
                        && fs == *u
                        && fs.codim() == codim
                        && codim > 1
                        && !is_pseudo_reflection(&fam.sigma);
                    Ok(Outcome::new(ok, format!("order {}, fixed space of dimension {} and codimension {}", s.order(), fs.dim(), fs.codim())))
                },
            );
            let sigma = fam.group.point_stabilizer(u);
            rec.claim(format!("{prefix}.pgroup-criterion"), "dsp_pgroup_criterion", "fails, agreeing with dsp_decide", || {
                let v = dsp_pgroup_criterion(&sigma)?;
                let (_, direct) = dsp_with(&sigma, &b)?;
                Ok(match v {
                    Some(v) => Outcome::new(!v.holds() && !direct.holds(), format!("criterion {}, direct {}", dsp_str(&v), dsp_str(&direct))),
                    None => Outcome::new(false, "criterion gives no conclusion"),
                })
            });
        }
        if pr == 2 {
            let h = &fam.h;
            let n = fam.dim();
            rec.claim(format!("{prefix}.H"), "symmetric_family", format!("H is elementary abelian of order 2^{mp} with exactly {mp} transvections"), || {
                let elem = h.elements().iter().all(|x| x.mul(x).map(|y| y.is_identity()).unwrap_or(false));
                let c = h.census();
                let ok = h.is_abelian() && elem && h.order() == 1 << mp && c.transvections == mp && c.pseudo_reflections == mp;
                Ok(Outcome::new(ok, format!("order {}, elementary abelian {}, {}", h.order(), h.is_abelian() && elem, census_str(h))))
            });
            rec.claim(format!("{prefix}.fixed"), "fixed_space", "V^H = span(f1, f3, ..) and the H-fixed linear forms are span(y2, y4, ..)", || {
                let f = &fam.field;
                let odd = coordinate_span(f, n, (0..n).step_by(2));
                let even = coordinate_span(f, n, (1..n).step_by(2));
                let (fs, ff) = (h.fixed_space(), h.fixed_linear_forms());
                Ok(Outcome::new(fs == odd && ff == even, format!("dim V^H = {}, dim (V*)^H = {}", fs.dim(), ff.dim())))
            });
            let cor = coregularity_decide(h, &b);
            rec.claim(
                format!("{prefix}.coregularity"),
                "coregularity_decide",
                format!("not coregular: every shape with {} degree-one invariants needs more reflections than the {mp} present", n / 2),
                || {
                    let c = cor.clone()?;
                    let shapes: Vec<_> = c.rejections.iter().filter(|r| r.filter != "linear-count").collect();
                    let ok = c.is_not_coregular() && !shapes.is_empty() && shapes.iter().all(|r| r.filter == "degree-sum") && c.delta == Some(mp as u32);
                    let detail = shapes.iter().map(|r| format!("{}: {}", set_str(&r.degrees), r.detail)).collect::<Vec<_>>().join("; ");
                    Ok(cor_outcome(&c, ok, coregularity_str(&c)).detail(detail))
                },
            );
            rec.claim(format!("{prefix}.dsp"), "dsp_abelian_criterion", "fails by the abelian criterion and by the linear system, in agreement", || {
                let c = cor?;
                let a = dsp_abelian_criterion(h, &c)?;
                let (_, v) = dsp_with(h, &b)?;
                Ok(match a {
                    Some(a) => Outcome::new(!a.holds() && !v.holds(), format!("criterion {}, direct {}", dsp_str(&a), dsp_str(&v))),
                    None => Outcome::inconclusive(format!("criterion gives no conclusion, direct {}", dsp_str(&v))),
                })
            });
        }
    }
    Ok(())
}

fn resolve_corpus() -> Vec<(String, mil_core::Result<MatrixGroup>)> {
    CORPUS.iter().map(|s| (s.to_string(), resolve(s))).collect()
}

fn inheritance(rec: &mut Recorder, p: &Params) -> ScenarioResult {
    require(!p.has_family_params(), "thm1-inheritance runs a fixed corpus and takes no family parameters")?;
    let b = rec.budget.clone();
    for (name, g) in resolve_corpus() {
        let Some(g) = rec.build(&format!("thm1.{name}"), "resolve", g)? else { continue };
        rec.field(g.field());
        rec.claim(format!("thm1.{name}"), "inheritance_suite", "no stabilizer loses the direct summand property or coregularity", || {
            let r = inheritance_suite(&[(name.clone(), g.clone())], &b, 2)?;
            let s = &r.groups.first();
            let verdict = |x: Option<bool>| match x {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "undecided",
            };
            let obs = match s {
                Some(s) => format!(
                    "order {}, dsp {}, coregular {}, {} stabilizers checked, {} violations",
                    s.order,
                    verdict(s.dsp),
                    verdict(s.coregular),
                    s.stabilizers,
                    r.violations
                ),
                None => format!("skipped: {}", r.skipped.join("; ")),
            };
            let mut o = if s.is_none() {
                Outcome::inconclusive(obs)
            } else if r.violations > 0 {
                Outcome::new(false, obs)
            } else if r.skipped.is_empty() {
                Outcome::new(true, obs)
            } else {
                Outcome::inconclusive(obs)
            };
            let bad: Vec<String> = r.checks.iter().filter_map(|c| c.violation.as_ref().map(|v| format!("{v} at {:?}", c.subspace))).collect();
            if !bad.is_empty() || !r.skipped.is_empty() {
                o = o.detail(bad.into_iter().chain(r.skipped.iter().cloned()).collect::<Vec<_>>().join("; "));
            }
            Ok(o)
        });
    }
    let cases: Vec<(&str, usize, Vec<Vec<usize>>)> =
        vec![("gu3:q=2", 3, vec![vec![0], vec![1], vec![0, 1], vec![1, 2]]), ("s3:q=7", 3, vec![vec![0], vec![0, 1]]), ("unitary:q=2:n=2", 4, vec![vec![1, 2, 3], vec![2, 3]])];
    for (spec, n, subspaces) in cases {
        let Some(g) = rec.build(&format!("thm1.factorization.{spec}"), "resolve", resolve(spec))? else { continue };
        rec.claim(
            format!("thm1.factorization.{spec}"),
            "different_factorization",
            "theta_G = theta_H theta_G/H with theta_H intrinsic, theta_G/H nonzero on U and the factors coprime",
            || {
                let arr = arrangement(&g);
                let mut obs = Vec::new();
                let mut ok = true;
                for idx in &subspaces {
                    let u = coordinate_span(g.field(), n, idx.iter().copied());
                    let h = g.point_stabilizer(&u);
                    let fac = different_factorization(&g, &h, &u)?;
                    let mut coprime = true;
                    for hp in &arr.hyperplanes {
                        if fac.theta_h.valuation(&hp.form)? > 0 && fac.theta_quotient.valuation(&hp.form)? > 0 {
                            coprime = false;
                        }
                    }
                    ok &= fac.consistent && fac.quotient_outside && coprime;
                    obs.push(format!("|H| = {}: deg theta_H = {}", h.order(), fac.theta_h.degree().unwrap_or(0)));
                }
                Ok(Outcome::new(ok, obs.join(", ")))
            },
        );
    }
    rec.claim("thm1.criteria-agreement", "dsp_abelian_criterion", "the p-group and abelian criteria never contradict dsp_decide on the corpus", || {
        let mut checked = 0;
        let mut bad = Vec::new();
        for (name, g) in resolve_corpus() {
            let g = g?;
            let direct = match dsp_with(&g, &b) {
                Ok((_, v)) => v,
                Err(Error::Budget(_)) => continue,
                Err(e) => return Err(e),
            };
            if g.is_p_group() {
                if let Some(v) = dsp_pgroup_criterion(&g)? {
                    checked += 1;
                    if v.decision != direct.decision {
                        bad.push(format!("{name}: p-group criterion"));
                    }
                }
            }
            if g.is_abelian() {
                let c = coregularity_decide(&g, &b)?;
                if let Some(v) = dsp_abelian_criterion(&g, &c)? {
                    checked += 1;
                    if v.decision != direct.decision {
                        bad.push(format!("{name}: abelian criterion"));
                    }
                }
            }
        }
        let o = Outcome::new(bad.is_empty(), format!("{checked} criterion verdicts compared, {} disagreements", bad.len()));
        Ok(if bad.is_empty() { o } else { o.detail(bad.join("; ")) })
    });
    Ok(())
}

fn sanity(rec: &mut Recorder, p: &Params) -> ScenarioResult {
    require(!p.has_family_params(), "cst-serre-sanity runs a fixed corpus and takes no family parameters")?;
    let b = rec.budget.clone();
    let Some(s3) = rec.build("cst.s3", "s3_permutation", s3_permutation(7))? else { return Ok(()) };
    rec.field(s3.field());
    rec.claim("cst.s3.coregularity", "coregularity_decide", "coregular with degrees {1,2,3}", || {
        let c = coregularity_decide(&s3, &b)?;
        Ok(cor_outcome(&c, c.degrees() == Some(&[1, 2, 3][..]), coregularity_str(&c)).witness(parameters_witness(&s3, &c)))
    });
    rec.claim("cst.s3.different", "different", "delta = 3 = number of reflections", || {
        let d = different(&s3)?;
        let r = s3.pseudo_reflections().len();
        Ok(Outcome::new(d.delta == 3 && r == 3, format!("delta = {}, theta = {}, {r} reflections", d.delta, d.theta)))
    });
    dsp_claim(rec, "cst.s3.dsp", &s3, true);
    rec.claim("cst.s3.contraction", "ideal_contraction_check", "(e1) is contracted from A in degrees <= 8", || {
        let e1 = Polynomial::parse(s3.field(), 3, "x1 + x2 + x3")?;
        let r = ideal_contraction_check_ctx(&Context::new(&s3, b.clone()), &[e1], 8)?;
        Ok(Outcome::new(r.pass, if r.pass { "passes".to_string() } else { format!("fails in degree {:?}", r.first_failure) }))
    });

    let Some(diag) = rec.build("cst.diag", "diagonal_reflection_group", diagonal_reflection_group(7, 3))? else { return Ok(()) };
    rec.claim("cst.diag", "coregularity_decide", "coregular {1,3}, delta = 2, direct summand property by both the linear system and the abelian criterion", || {
        let c = coregularity_decide(&diag, &b)?;
        let (d, v) = dsp_with(&diag, &b)?;
        let a = dsp_abelian_criterion(&diag, &c)?;
        let ok = c.degrees() == Some(&[1, 3][..]) && d.delta == 2 && v.holds() && a.map(|a| a.holds()) == Some(true);
        Ok(cor_outcome(&c, ok, format!("{}, delta = {}, dsp {}", coregularity_str(&c), d.delta, dsp_str(&v))).witness(dsp_witness(&diag, &d, &v)))
    });
    for q in [3u32, 4, 5] {
        let Some(t) = rec.build(&format!("cst.transvection.q{q}"), "transvection_root_group", transvection_root_group(q))? else { continue };
        rec.field(t.field());
        rec.claim(format!("cst.transvection.q{q}"), "coinvariant_bound", format!("D_cov = {q}, delta = {}, coregular {{1,{q}}}", q - 1), || {
            let ctx = Context::new(&t, b.clone());
            let dc = coinvariant_bound_ctx(&ctx)?;
            let d = different_ctx(&ctx)?;
            let c = coregularity_decide_with(&ctx, Some(&d))?;
            let ok = dc == q && d.delta == q - 1 && c.degrees() == Some(&[1, q][..]);
            Ok(cor_outcome(&c, ok, format!("D_cov = {dc}, delta = {}, {}", d.delta, coregularity_str(&c))))
        });
    }
    let Some(triv) = rec.build("cst.trivial", "trivial_group", trivial_group(2, 2))? else { return Ok(()) };
    rec.claim("cst.trivial", "coinvariant_bound", "D_cov = 1, theta = 1 and the direct summand property holds with witness 1", || {
        let dc = coinvariant_bound(&triv)?;
        let (d, v) = dsp_with(&triv, &b)?;
        let ok = dc == 1 && d.delta == 0 && v.witness.as_ref().map(|w| w.to_string()) == Some("1".into());
        Ok(Outcome::new(ok, format!("D_cov = {dc}, delta = {}, dsp {}", d.delta, dsp_str(&v))))
    });

    for (name, g) in resolve_corpus() {
        let Some(g) = rec.build(&format!("cst.serre.{name}"), "resolve", g)? else { continue };
        rec.field(g.field());
        rec.claim(
            format!("cst.serre.{name}"),
            "serre_check",
            "if coregular: a reflection group with prod d_i = |G|, sum d_i = delta + n, matching Hilbert function and the direct summand property",
            || {
                let ctx = Context::new(&g, b.clone());
                let d = different_ctx(&ctx)?;
                let c = coregularity_decide_with(&ctx, Some(&d))?;
                let serre = serre_check(&g, &c);
                let Some(degs) = c.degrees() else {
                    return Ok(match c.decision {
                        Coregularity::Inconclusive { .. } => Outcome::inconclusive(coregularity_str(&c)),
                        _ => Outcome::new(serre, coregularity_str(&c)),
                    });
                };
                let prod: u64 = degs.iter().map(|&x| x as u64).product();
                let sum: u32 = degs.iter().sum();
                let series = hilbert_series_coefficients(degs, sum);
                let dims = hilbert_function_ctx(&ctx, sum)?.dims;
                let hilbert = series.iter().zip(&dims).all(|(&a, &b)| a == b as u64);
                let v = dsp_decide_with(&ctx, &d)?;
                let ok = serre && prod == g.order() as u64 && sum == d.delta + g.degree() as u32 && hilbert && v.holds();
                Ok(Outcome::new(
                    ok,
                    format!("{}, reflection group {}, delta = {}, Hilbert match {hilbert}, dsp {}", coregularity_str(&c), g.is_reflection_group(), d.delta, dsp_str(&v)),
                )
                .witness(parameters_witness(&g, &c)))
            },
        );
    }
    rec.claim(
        "cst.oracle",
        "different",
        "brute-force exponents equal e - 1 on tame hyperplanes and q - 1 on single-hyperplane transvection groups",
        || {
            let mut compared = 0;
            let mut bad = Vec::new();
            for (name, g) in resolve_corpus() {
                let g = g?;
                let d = match different_ctx(&Context::new(&g, b.clone())) {
                    Ok(d) => d,
                    Err(Error::Budget(_)) => continue,
                    Err(e) => return Err(e),
                };
                let single = d.arrangement.hyperplanes.len() == 1;
                for (h, &e) in d.arrangement.hyperplanes.iter().zip(&d.exponents) {
                    if h.q == 1 {
                        compared += 1;
                        if e as usize != h.e - 1 {
                            bad.push(format!("{name}: tame exponent {e}, e = {}", h.e));
                        }
                    } else if h.e == 1 && single {
                        compared += 1;
                        if e as usize != h.q - 1 {
                            bad.push(format!("{name}: transvection exponent {e}, q = {}", h.q));
                        }
                    }
                }
            }
            let o = Outcome::new(bad.is_empty() && compared > 0, format!("{compared} hyperplanes compared, {} disagreements", bad.len()));
            Ok(if bad.is_empty() { o } else { o.detail(bad.join("; ")) })
        },
    );
    Ok(())
}

pub fn scenario_names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.name).collect()
}

/// Runs one named scenario (not `all`).
pub fn run_scenario(name: &str, params: &Params, timings: bool) -> Result<ScenarioReport, UsageError> {
    let info = SCENARIOS.iter().find(|s| s.name == name).ok_or_else(|| UsageError(format!("unknown scenario {name:?}")))?;
    let mut rec = Recorder::new(params.budget());
    let start = Instant::now();
    match name {
        "example-gu3" => gu3(&mut rec, params)?,
        "example-abelian-i" => abelian_example(&mut rec, params, BlockKind::AntiHermitian, "abelian-i")?,
        "example-abelian-ii" => abelian_example(&mut rec, params, BlockKind::Symmetric, "abelian-ii")?,
        "family-I" => transvection_family(&mut rec, params, BlockKind::AntiHermitian, "family-i")?,
        "family-II" => transvection_family(&mut rec, params, BlockKind::Symmetric, "family-ii")?,
        "family-III-a" => family_3a(&mut rec, params)?,
        "family-III-b" => family_3b(&mut rec, params)?,
        "family-IV" => family_4(&mut rec, params)?,
        "thm1-inheritance" => inheritance(&mut rec, params)?,
        "cst-serre-sanity" => sanity(&mut rec, params)?,
        _ => unreachable!(),
    }
    if let Some(d) = params.max_degree {
        rec.param("max-degree", d as u64);
    }
    if let Some(p) = params.budget {
        rec.param("budget", p as u64);
    }
    let status = Status::combine(rec.claims.iter().map(|c| &c.status));
    Ok(ScenarioReport {
        scenario: name.to_string(),
        anchor: info.anchor.to_string(),
        parameters: rec.params,
        seed: params.seed,
        status,
        fields: rec.fields,
        claims: rec.claims,
        elapsed_ms: timings.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Runs a scenario or `all`, using up to `jobs` threads; scenarios are
/// reported in name order.
pub fn run(name: &str, params: &Params, jobs: usize, timings: bool) -> Result<RunReport, UsageError> {
    let names: Vec<&str> = if name == "all" {
        if params.has_family_params() {
            return Err(UsageError("--q, --n, --m and --p apply to a single scenario, not to all".into()));
        }
        scenario_names()
    } else {
        vec![name]
    };
    for n in &names {
        if !SCENARIOS.iter().any(|s| s.name == *n) {
            return Err(UsageError(format!("unknown scenario {n:?}; try `mil list`")));
        }
    }
    let jobs = jobs.max(1);
    let mut results: Vec<Option<Result<ScenarioReport, UsageError>>> = (0..names.len()).map(|_| None).collect();
    for chunk in names.iter().enumerate().collect::<Vec<_>>().chunks(jobs) {
        let done: Vec<(usize, Result<ScenarioReport, UsageError>)> = std::thread::scope(|s| {
            let handles: Vec<_> =
                chunk.iter().map(|&(i, n)| (i, s.spawn(move || run_scenario(n, params, timings)))).collect();
            handles.into_iter().map(|(i, h)| (i, h.join().expect("scenario thread panicked"))).collect()
        });
        for (i, r) in done {
            results[i] = Some(r);
        }
    }
    let mut reports = Vec::new();
    for r in results {
        reports.push(r.unwrap()?);
    }
    reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    Ok(RunReport::new(reports))
}
