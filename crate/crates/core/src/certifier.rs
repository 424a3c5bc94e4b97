//! Routing, system assembly, certificate emission and re-verification.
//!
//! A certificate records multipliers `x_j >= 0` for catalog classes `C_j`
//! such that `K - sum x_j C_j` is nonnegative on the five critical
//! generators with a strictly positive psi entry. The audit then checks the
//! same residual on every generator of the space.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CatalogError, ClassParams, Divisor, DivisorName, RkParams, WParams};
use crate::feasibility::{self, FeasibilityError, Inequality, InequalitySystem, Verdict};
use crate::known::mg2n_threshold;
use crate::numeric::{is_prime, Rational};
use crate::picard::{enumerate_generators, profile_representatives, CriticalVector, Generator, SpaceParams};

pub const TOOL_VERSION: &str = concat!("nodal ", env!("CARGO_PKG_VERSION"));

/// Genus from which the quotient is known to be of general type.
pub const KNOWN_GENERAL_TYPE_GENUS: u32 = 24;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error("malformed certificate: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    KnownGeneralType,
    /// `2n <= g - 2`
    CaseILe,
    /// `2n = g - 1`
    CaseIEq,
    /// `2n >= g`
    CaseII,
    OutOfScope,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::KnownGeneralType => "KNOWN_GENERAL_TYPE",
            Regime::CaseILe => "CASE_I_2N_LE_G_MINUS_2",
            Regime::CaseIEq => "CASE_I_2N_EQ_G_MINUS_1",
            Regime::CaseII => "CASE_II_2N_GE_G",
            Regime::OutOfScope => "OUT_OF_SCOPE",
        }
    }

    fn parse(s: &str) -> Option<Regime> {
        [Regime::KnownGeneralType, Regime::CaseILe, Regime::CaseIEq, Regime::CaseII, Regime::OutOfScope]
            .into_iter()
            .find(|r| r.as_str() == s)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub g: u32,
    pub n: u32,
    pub regime: Regime,
    pub bn_side: DivisorName,
    pub glue_side: Option<DivisorName>,
    /// W first, then U (odd g) or V (even g) when `(r, k)` exists.
    pub thirds: Vec<DivisorName>,
    pub specials: Vec<DivisorName>,
}

impl Route {
    /// Every class name a decomposition on this route may use.
    pub fn permitted(&self) -> Vec<DivisorName> {
        let mut out = vec![self.bn_side];
        out.extend(self.glue_side);
        out.extend(self.thirds.iter().copied());
        out.extend(self.specials.iter().copied());
        out
    }
}

pub fn route(g: u32, n: u32) -> Result<Route, CertifyError> {
    let space = SpaceParams::new(g, n).map_err(|e| CertifyError::Input(e.to_string()))?;
    let regime = if g >= KNOWN_GENERAL_TYPE_GENUS {
        Regime::KnownGeneralType
    } else if mg2n_threshold(g).map_or(true, |t| n < t) {
        Regime::OutOfScope
    } else if 2 * n + 2 <= g {
        Regime::CaseILe
    } else if 2 * n + 1 == g {
        Regime::CaseIEq
    } else {
        Regime::CaseII
    };
    let bn_side = if is_prime(g as u64 + 1) { DivisorName::E } else { DivisorName::B };
    let glue_side = if is_prime((g + n + 1) as u64) {
        // g + n + 1 prime and > 2 forces g + n even
        ((g + n) % 2 == 0).then_some(DivisorName::F)
    } else {
        Some(DivisorName::D)
    };
    let mut thirds = vec![DivisorName::W];
    if catalog::solve_rk(space).is_some() {
        thirds.push(if g % 2 == 1 { DivisorName::U } else { DivisorName::V });
    }
    let specials = catalog::special_registry()
        .into_iter()
        .filter(|e| e.applies_to(g, n))
        .map(|e| e.name)
        .collect();
    Ok(Route { g, n, regime, bn_side, glue_side, thirds, specials })
}

/// Which divisor sets a certification run may try.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pipeline {
    /// `{B|E, D|F, W}` only.
    Weierstrass,
    /// Also `{B|E, D|F, U|V}`.
    Improved,
    /// Also the registered one-off classes.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttemptKind {
    Special,
    Augmented,
    Standard,
    EffectivityOnly,
    UserSet,
}

impl AttemptKind {
    fn as_str(&self) -> &'static str {
        match self {
            AttemptKind::Special => "special",
            AttemptKind::Augmented => "augmented",
            AttemptKind::Standard => "standard",
            AttemptKind::EffectivityOnly => "effectivity-only",
            AttemptKind::UserSet => "user",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// `x = 2/b_0`, `z = 3/w_2` for `2n <= g - 2`.
    ClosedFormBw,
    /// `x = 2/b_0`, `y = 2e/d_0`, `z = (1 - 3e)/w_psi` for `2n = g - 1`.
    ClosedFormBdw,
    /// `x = 2/b_0`, `y = 3e/f_0`, `z = (1 - 4e)/w_psi` for `2n = g - 1`.
    ClosedFormBfw,
    JointSolve,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedFormBw => "closed_form_bw",
            Method::ClosedFormBdw => "closed_form_bdw",
            Method::ClosedFormBfw => "closed_form_bfw",
            Method::JointSolve => "joint_solve",
        }
    }

    fn parse(s: &str) -> Option<Method> {
        [Method::ClosedFormBw, Method::ClosedFormBdw, Method::ClosedFormBfw, Method::JointSolve]
            .into_iter()
            .find(|m| m.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptVerdict {
    Certified,
    Infeasible,
    AuditFail(Generator),
    Unavailable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub set: Vec<DivisorName>,
    pub kind: AttemptKind,
    pub method: Option<Method>,
    pub verdict: AttemptVerdict,
}

impl fmt::Display for Attempt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{{}}}: ", self.kind.as_str(), join_names(&self.set))?;
        match &self.verdict {
            AttemptVerdict::Certified => write!(f, "feasible ({})", self.method.map_or("-", |m| m.as_str())),
            AttemptVerdict::Infeasible => f.write_str("infeasible"),
            AttemptVerdict::AuditFail(g) => write!(f, "rejected, audit fails at {g}"),
            AttemptVerdict::Unavailable(why) => write!(f, "unavailable ({why})"),
        }
    }
}

fn join_names(names: &[DivisorName]) -> String {
    names.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    GeneralType,
    EffectiveOnly,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::GeneralType => "GENERAL_TYPE_CERTIFIED",
            Status::EffectiveOnly => "EFFECTIVE_ONLY",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditVerdict {
    Pass,
    /// Profile representatives whose residual is only bounded and the bound
    /// is negative.
    Inconclusive(Vec<Generator>),
    Fail(Generator),
}

impl AuditVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            AuditVerdict::Pass => "PASS",
            AuditVerdict::Inconclusive(_) => "INCONCLUSIVE",
            AuditVerdict::Fail(_) => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: DivisorName,
    pub params: ClassParams,
    pub critical: CriticalVector,
    pub multiplier: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub g: u32,
    pub n: u32,
    pub status: Status,
    pub route: Route,
    pub method: Method,
    pub columns: Vec<Column>,
    pub epsilon: Rational,
    pub residual_critical: CriticalVector,
    pub audit: AuditVerdict,
    pub notes: Vec<String>,
    pub tool_version: String,
}

impl Certificate {
    pub fn space(&self) -> SpaceParams {
        SpaceParams::new(self.g, self.n).expect("certificate space was validated")
    }

    pub fn multiplier(&self, name: DivisorName) -> Option<&Rational> {
        self.columns.iter().find(|c| c.name == name).map(|c| &c.multiplier)
    }
}

/// Result of a certification run, including every attempt made.
#[derive(Debug, Clone)]
pub struct CertifyOutcome {
    pub route: Route,
    pub attempts: Vec<Attempt>,
    pub certificate: Option<Certificate>,
}

impl CertifyOutcome {
    pub fn is_general_type(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.status == Status::GeneralType)
    }
}

/// The five residual conditions of `K - sum x_j C_j` on the critical
/// generators, one nonnegative variable per column. The psi row is strict
/// when `bigness` is set.
pub fn build_system(space: SpaceParams, columns: &[Divisor], bigness: bool) -> Result<InequalitySystem, CertifyError> {
    for c in columns {
        if c.space() != space {
            return Err(CertifyError::Input(format!("class {} lives on {}, not {space}", c.name(), c.space())));
        }
    }
    let k = catalog::canonical_k(space);
    let names: Vec<String> = columns.iter().map(|c| c.name().to_string()).collect();
    let mut sys = InequalitySystem::nonnegative(names)?;
    let gens = CriticalVector::generators(space).map_err(CatalogError::from)?;
    for (j, gen) in gens.into_iter().enumerate() {
        let coeffs: Vec<Rational> = columns.iter().map(|c| c.critical().entries()[j].clone()).collect();
        let bound = k.critical().entries()[j].clone();
        let row = if j == 1 && bigness { Inequality::lt(coeffs, bound) } else { Inequality::le(coeffs, bound) };
        sys.push(row, Some(gen))?;
    }
    Ok(sys)
}

fn residual(space: SpaceParams, columns: &[(Divisor, Rational)]) -> CriticalVector {
    let mut res = catalog::canonical_k(space).critical().clone();
    for (d, x) in columns {
        res = res.sub(&d.critical().scaled(x));
    }
    res
}

/// Audit the residual on every generator, one representative per
/// coefficient profile.
pub fn audit_columns(space: SpaceParams, columns: &[(Divisor, Rational)]) -> AuditVerdict {
    let gens: Vec<Generator> = profile_representatives(space).into_iter().map(|(g, _)| g).collect();
    audit_generators(space, columns, &gens)
}

/// Audit generator by generator over the whole space. Same verdict as
/// [`audit_columns`]; used to cross-check it on small spaces.
pub fn audit_per_generator(space: SpaceParams, columns: &[(Divisor, Rational)]) -> AuditVerdict {
    let verdict = audit_generators(space, columns, &enumerate_generators(space));
    // report with profile representatives so both audits list the same names
    match verdict {
        AuditVerdict::Inconclusive(_) => audit_columns(space, columns),
        other => other,
    }
}

fn audit_generators(space: SpaceParams, columns: &[(Divisor, Rational)], gens: &[Generator]) -> AuditVerdict {
    let k = catalog::canonical_k(space);
    let mut inconclusive = Vec::new();
    let mut failed = None;
    for gen in gens {
        let mut bound = k.coeff(gen).value().clone();
        let mut exact = true;
        for (d, x) in columns {
            if x.is_zero() {
                continue;
            }
            let c = d.coeff(gen);
            exact &= c.is_exact();
            bound -= &(x * c.value());
        }
        if bound.is_negative() {
            if exact {
                failed.get_or_insert(*gen);
            } else {
                inconclusive.push(*gen);
            }
        }
    }
    match failed {
        Some(g) => AuditVerdict::Fail(g),
        None if inconclusive.is_empty() => AuditVerdict::Pass,
        None => {
            let mut reps: Vec<Generator> = inconclusive
                .iter()
                .map(|g| representative(space, g))
                .collect();
            reps.sort();
            reps.dedup();
            AuditVerdict::Inconclusive(reps)
        }
    }
}

fn representative(space: SpaceParams, gen: &Generator) -> Generator {
    match gen.profile() {
        None => *gen,
        Some(p) => profile_representatives(space)
            .into_iter()
            .map(|(g, _)| g)
            .find(|g| g.profile() == Some(p))
            .unwrap_or(*gen),
    }
}

/// Registered decompositions for the one-off cells: the set as published,
/// fallbacks with extra classes, and sets that can only show effectivity.
struct SpecialPlan {
    printed: Vec<Vec<DivisorName>>,
    augmented: Vec<Vec<DivisorName>>,
    effectivity: Vec<Vec<DivisorName>>,
}

fn special_plan(g: u32, n: u32) -> Option<SpecialPlan> {
    use DivisorName::*;
    let plan = |printed: Vec<Vec<DivisorName>>, augmented, effectivity| SpecialPlan { printed, augmented, effectivity };
    Some(match (g, n) {
        (10, 6) => plan(vec![vec![Z10, F, W]], vec![], vec![]),
        (10, 7) => plan(vec![vec![Z10, D, W]], vec![], vec![]),
        (21, 2) => plan(vec![vec![Z21, W]], vec![vec![Z21, W, D]], vec![]),
        (16, 5) => plan(vec![vec![Z16, W]], vec![vec![Z16, W, D]], vec![]),
        (12, 6) => plan(vec![vec![D12, F, W]], vec![], vec![]),
        (22, 2) => plan(vec![vec![L224, E, W]], vec![vec![L224, E, W, D]], vec![vec![L224]]),
        (22, 3) => plan(vec![vec![L226, W]], vec![vec![L226, W, D], vec![L226, W, E]], vec![vec![L226]]),
        (14, 5) => plan(vec![vec![B, NF14]], vec![vec![B, NF14, D]], vec![]),
        (18, 5) => plan(vec![vec![LIN18, W]], vec![vec![LIN18, D, W]], vec![]),
        _ => return None,
    })
}

fn cell_notes(g: u32, n: u32, columns: &[DivisorName]) -> Vec<String> {
    let mut notes = Vec::new();
    match (g, n) {
        (10, 7) => notes.push(
            "the published text states this decomposition a second time under n=6; read as n=7, where g+n+1=18 is composite and D replaces F".into(),
        ),
        (14, 5) => notes.push(
            "the n-fold divisor is published with a subscript for 12 points; its coefficients are applied on the 10-point space".into(),
        ),
        (16, 5) | (21, 2) => notes.push(
            "the published slope reuses the genus-10 symbol Z_{10,0}; the entry is named after its genus".into(),
        ),
        _ => {}
    }
    if columns.iter().any(|c| matches!(c, DivisorName::U | DivisorName::V)) {
        notes.push(
            "lambda coefficient of the marked-series class uses 6r^2+6r+1; the published 6r^2+6r+r contradicts the published table".into(),
        );
    }
    notes
}

enum Candidate {
    Found(Certificate),
    Infeasible,
    AuditFail(Generator),
}

fn closed_form(route: &Route, cols: &[Divisor], sys: &InequalitySystem) -> Option<(Method, Vec<Rational>)> {
    if cols.len() != 3 || cols[2].name() != DivisorName::W {
        return None;
    }
    let two = Rational::from_int(2);
    let x = &two / &(-&cols[0].critical().dirr);
    let w = cols[2].critical();
    let glue0 = &cols[1].critical().psi;
    match route.regime {
        Regime::CaseILe => {
            let point = vec![x, Rational::zero(), Rational::from_int(3) / (-&w.d010)];
            sys.check(&point).then_some((Method::ClosedFormBw, point))
        }
        Regime::CaseIEq => {
            let (method, factor, drop) = match cols[1].name() {
                DivisorName::D => (Method::ClosedFormBdw, 2, 3),
                DivisorName::F => (Method::ClosedFormBfw, 3, 4),
                _ => return None,
            };
            let mut eps = Rational::new(1, 2);
            for _ in 0..64 {
                let y = Rational::from_int(factor) * &eps / glue0;
                let z = (Rational::one() - Rational::from_int(drop) * &eps) / &w.psi;
                let point = vec![x.clone(), y, z];
                if sys.check(&point) {
                    return Some((method, point));
                }
                eps = eps * Rational::new(1, 2);
            }
            None
        }
        _ => None,
    }
}

fn try_set(
    route: &Route,
    names: &[DivisorName],
    bigness: bool,
    allow_closed_form: bool,
) -> Result<Candidate, CertifyError> {
    let space = SpaceParams::new(route.g, route.n).map_err(|e| CertifyError::Input(e.to_string()))?;
    let cols: Vec<Divisor> = names.iter().map(|n| catalog::build(space, *n)).collect::<Result<_, _>>()?;
    let sys = build_system(space, &cols, bigness)?;
    let fast = if allow_closed_form && bigness { closed_form(route, &cols, &sys) } else { None };
    let (method, values) = match fast {
        Some(found) => found,
        None => match feasibility::solve(&sys)? {
            Verdict::Feasible(w) => (Method::JointSolve, w.values),
            Verdict::Infeasible(_) => return Ok(Candidate::Infeasible),
        },
    };
    let pairs: Vec<(Divisor, Rational)> = cols.into_iter().zip(values).collect();
    let res = residual(space, &pairs);
    let audit = audit_columns(space, &pairs);
    if let AuditVerdict::Fail(g) = audit {
        return Ok(Candidate::AuditFail(g));
    }
    let status = if bigness { Status::GeneralType } else { Status::EffectiveOnly };
    Ok(Candidate::Found(Certificate {
        g: route.g,
        n: route.n,
        status,
        route: route.clone(),
        method,
        columns: pairs
            .iter()
            .map(|(d, x)| Column { name: d.name(), params: d.params(), critical: d.critical().clone(), multiplier: x.clone() })
            .collect(),
        epsilon: res.psi.clone(),
        residual_critical: res,
        audit,
        notes: cell_notes(route.g, route.n, names),
        tool_version: TOOL_VERSION.to_string(),
    }))
}

fn run_attempts(route: Route, plan: Vec<(Vec<DivisorName>, AttemptKind)>) -> Result<CertifyOutcome, CertifyError> {
    let mut attempts = Vec::new();
    let mut certificate = None;
    for (set, kind) in plan {
        let bigness = kind != AttemptKind::EffectivityOnly;
        let allow_closed = kind == AttemptKind::Standard;
        let (verdict, method, cert) = match try_set(&route, &set, bigness, allow_closed) {
            Ok(Candidate::Found(c)) => (AttemptVerdict::Certified, Some(c.method), Some(c)),
            Ok(Candidate::Infeasible) => (AttemptVerdict::Infeasible, None, None),
            Ok(Candidate::AuditFail(g)) => (AttemptVerdict::AuditFail(g), None, None),
            Err(CertifyError::Catalog(e)) => (AttemptVerdict::Unavailable(e.to_string()), None, None),
            Err(e) => return Err(e),
        };
        attempts.push(Attempt { set, kind, method, verdict });
        if let Some(mut c) = cert {
            if attempts.iter().any(|a| matches!(a.kind, AttemptKind::Special | AttemptKind::EffectivityOnly)) {
                c.notes.extend(attempts.iter().map(|a| format!("attempt {a}")));
            }
            certificate = Some(c);
            break;
        }
    }
    if let Some(c) = certificate.as_mut() {
        c.notes.dedup();
    }
    Ok(CertifyOutcome { route, attempts, certificate })
}

/// Try the route's divisor sets in priority order and certify with the
/// first one that works.
pub fn certify(g: u32, n: u32, pipeline: Pipeline) -> Result<CertifyOutcome, CertifyError> {
    let route = route(g, n)?;
    if matches!(route.regime, Regime::KnownGeneralType | Regime::OutOfScope) {
        return Ok(CertifyOutcome { route, attempts: Vec::new(), certificate: None });
    }
    let mut plan = Vec::new();
    let special = if pipeline == Pipeline::Full { special_plan(g, n) } else { None };
    if let Some(sp) = &special {
        plan.extend(sp.printed.iter().cloned().map(|s| (s, AttemptKind::Special)));
        plan.extend(sp.augmented.iter().cloned().map(|s| (s, AttemptKind::Augmented)));
    }
    if let Some(glue) = route.glue_side {
        plan.push((vec![route.bn_side, glue, DivisorName::W], AttemptKind::Standard));
        if pipeline != Pipeline::Weierstrass {
            for third in route.thirds.iter().filter(|t| **t != DivisorName::W) {
                plan.push((vec![route.bn_side, glue, *third], AttemptKind::Standard));
            }
        }
    }
    if let Some(sp) = &special {
        plan.extend(sp.effectivity.iter().cloned().map(|s| (s, AttemptKind::EffectivityOnly)));
    }
    run_attempts(route, plan)
}

/// Certify with one caller-chosen set. Any classes are accepted as long as
/// the catalog can build them on this space.
pub fn certify_set(g: u32, n: u32, names: &[DivisorName], bigness: bool) -> Result<CertifyOutcome, CertifyError> {
    let route = route(g, n)?;
    if names.is_empty() || names.len() > feasibility::MAX_VARIABLES {
        return Err(CertifyError::Input(format!("a set needs 1..={} classes", feasibility::MAX_VARIABLES)));
    }
    let kind = if bigness { AttemptKind::UserSet } else { AttemptKind::EffectivityOnly };
    run_attempts(route, vec![(names.to_vec(), kind)])
}

/// Rebuild every column from the catalog and audit the residual.
pub fn audit_full(cert: &Certificate) -> Result<AuditVerdict, CertifyError> {
    let space = SpaceParams::new(cert.g, cert.n).map_err(|e| CertifyError::Input(e.to_string()))?;
    let pairs = cert
        .columns
        .iter()
        .map(|c| Ok((catalog::rebuild(space, c.name, c.params)?, c.multiplier.clone())))
        .collect::<Result<Vec<_>, CertifyError>>()?;
    Ok(audit_columns(space, &pairs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub problems: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Independent re-check of a certificate. Stored coefficients are never
/// trusted: every class is rebuilt from its name and parameter block.
pub fn verify(cert: &Certificate) -> VerifyReport {
    let mut problems = Vec::new();
    let space = match SpaceParams::new(cert.g, cert.n) {
        Ok(s) => s,
        Err(e) => return VerifyReport { problems: vec![e.to_string()] },
    };
    match route(cert.g, cert.n) {
        Ok(expected) => {
            if expected != cert.route {
                problems.push(format!("route {:?} differs from the recomputed {:?}", cert.route, expected));
            }
            if matches!(expected.regime, Regime::KnownGeneralType | Regime::OutOfScope) {
                problems.push(format!("regime {} admits no certificate", expected.regime));
            }
            let permitted = expected.permitted();
            for c in &cert.columns {
                if !permitted.contains(&c.name) {
                    problems.push(format!("class {} is not permitted on this route", c.name));
                }
            }
        }
        Err(e) => problems.push(e.to_string()),
    }
    if cert.columns.is_empty() {
        problems.push("no columns".into());
    }
    let mut pairs = Vec::new();
    for c in &cert.columns {
        if c.multiplier.is_negative() {
            problems.push(format!("multiplier of {} is negative", c.name));
        }
        match catalog::rebuild(space, c.name, c.params) {
            Ok(d) => {
                if d.critical() != &c.critical {
                    problems.push(format!("stored critical vector of {} differs from the catalog", c.name));
                }
                pairs.push((d, c.multiplier.clone()));
            }
            Err(e) => problems.push(format!("class {}: {e}", c.name)),
        }
    }
    if pairs.len() == cert.columns.len() && !pairs.is_empty() {
        let res = residual(space, &pairs);
        if res != cert.residual_critical {
            problems.push(format!("stored residual {} differs from the recomputed {res}", cert.residual_critical));
        }
        if !res.is_nonnegative() {
            problems.push(format!("residual {res} has a negative entry"));
        }
        if res.psi != cert.epsilon {
            problems.push(format!("epsilon {} differs from the psi residual {}", cert.epsilon, res.psi));
        }
        if cert.status == Status::GeneralType && !res.psi.is_positive() {
            problems.push("general type needs a positive psi residual".into());
        }
        let audit = audit_columns(space, &pairs);
        if audit != cert.audit {
            problems.push(format!("audit {} differs from the recomputed {}", cert.audit.label(), audit.label()));
        }
        if let AuditVerdict::Fail(g) = audit {
            problems.push(format!("audit fails at {g}"));
        }
    }
    VerifyReport { problems }
}

// Certificate file format

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertFile {
    g: u32,
    n: u32,
    status: String,
    route: RouteFile,
    columns: Vec<ColumnFile>,
    epsilon: Rational,
    residual_critical: [Rational; 5],
    audit: AuditFile,
    notes: Vec<String>,
    tool_version: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RouteFile {
    regime: String,
    bn_side: String,
    glue_side: Option<String>,
    thirds: Vec<String>,
    specials: Vec<String>,
    method: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColumnFile {
    name: String,
    params: BTreeMap<String, u32>,
    critical: [Rational; 5],
    multiplier: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuditFile {
    verdict: String,
    #[serde(default)]
    generators: Vec<String>,
}

fn params_to_map(p: ClassParams) -> BTreeMap<String, u32> {
    match p {
        ClassParams::None => BTreeMap::new(),
        ClassParams::W(w) => [("m", w.m), ("k", w.k), ("r", w.r)].into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        ClassParams::Rk(rk) => [("r", rk.r), ("k", rk.k)].into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    }
}

fn params_from_map(name: DivisorName, map: &BTreeMap<String, u32>) -> Result<ClassParams, CertifyError> {
    let keys: Vec<&str> = map.keys().map(String::as_str).collect();
    let bad = || CertifyError::Format(format!("parameter block {map:?} does not fit class {name}"));
    match name {
        DivisorName::W if keys == ["k", "m", "r"] => Ok(ClassParams::W(WParams { m: map["m"], k: map["k"], r: map["r"] })),
        DivisorName::U | DivisorName::V if keys == ["k", "r"] => Ok(ClassParams::Rk(RkParams { r: map["r"], k: map["k"] })),
        DivisorName::W | DivisorName::U | DivisorName::V => Err(bad()),
        _ if keys.is_empty() => Ok(ClassParams::None),
        _ => Err(bad()),
    }
}

fn names_to_strings(names: &[DivisorName]) -> Vec<String> {
    names.iter().map(|n| n.to_string()).collect()
}

fn parse_name(s: &str) -> Result<DivisorName, CertifyError> {
    s.parse().map_err(|e: CatalogError| CertifyError::Format(e.to_string()))
}

impl Certificate {
    /// Pretty JSON with sorted keys and canonical rational strings.
    pub fn to_json(&self) -> String {
        let file = CertFile {
            g: self.g,
            n: self.n,
            status: self.status.as_str().to_string(),
            route: RouteFile {
                regime: self.route.regime.as_str().to_string(),
                bn_side: self.route.bn_side.to_string(),
                glue_side: self.route.glue_side.map(|d| d.to_string()),
                thirds: names_to_strings(&self.route.thirds),
                specials: names_to_strings(&self.route.specials),
                method: self.method.as_str().to_string(),
            },
            columns: self
                .columns
                .iter()
                .map(|c| ColumnFile {
                    name: c.name.to_string(),
                    params: params_to_map(c.params),
                    critical: c.critical.to_array(),
                    multiplier: c.multiplier.clone(),
                })
                .collect(),
            epsilon: self.epsilon.clone(),
            residual_critical: self.residual_critical.to_array(),
            audit: AuditFile {
                verdict: self.audit.label().to_string(),
                generators: match &self.audit {
                    AuditVerdict::Pass => Vec::new(),
                    AuditVerdict::Inconclusive(gs) => gs.iter().map(|g| g.to_string()).collect(),
                    AuditVerdict::Fail(g) => vec![g.to_string()],
                },
            },
            notes: self.notes.clone(),
            tool_version: self.tool_version.clone(),
        };
        // serde_json's map keeps keys sorted, so going through a value
        // yields a byte-stable key order
        let value = serde_json::to_value(&file).expect("certificate serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertifyError> {
        let file: CertFile = serde_json::from_str(text).map_err(|e| CertifyError::Format(e.to_string()))?;
        let status = match file.status.as_str() {
            "GENERAL_TYPE_CERTIFIED" => Status::GeneralType,
            "EFFECTIVE_ONLY" => Status::EffectiveOnly,
            other => return Err(CertifyError::Format(format!("unknown status `{other}`"))),
        };
        let regime = Regime::parse(&file.route.regime)
            .ok_or_else(|| CertifyError::Format(format!("unknown regime `{}`", file.route.regime)))?;
        let method = Method::parse(&file.route.method)
            .ok_or_else(|| CertifyError::Format(format!("unknown method `{}`", file.route.method)))?;
        let route = Route {
            g: file.g,
            n: file.n,
            regime,
            bn_side: parse_name(&file.route.bn_side)?,
            glue_side: file.route.glue_side.as_deref().map(parse_name).transpose()?,
            thirds: file.route.thirds.iter().map(|s| parse_name(s)).collect::<Result<_, _>>()?,
            specials: file.route.specials.iter().map(|s| parse_name(s)).collect::<Result<_, _>>()?,
        };
        let columns = file
            .columns
            .into_iter()
            .map(|c| {
                let name = parse_name(&c.name)?;
                Ok(Column {
                    name,
                    params: params_from_map(name, &c.params)?,
                    critical: CriticalVector::new(c.critical),
                    multiplier: c.multiplier,
                })
            })
            .collect::<Result<Vec<_>, CertifyError>>()?;
        let gens = file
            .audit
            .generators
            .iter()
            .map(|s| s.parse::<Generator>().map_err(|e| CertifyError::Format(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let audit = match (file.audit.verdict.as_str(), gens.as_slice()) {
            ("PASS", []) => AuditVerdict::Pass,
            ("INCONCLUSIVE", gs) if !gs.is_empty() => AuditVerdict::Inconclusive(gs.to_vec()),
            ("FAIL", [g]) => AuditVerdict::Fail(*g),
            (v, _) => return Err(CertifyError::Format(format!("malformed audit `{v}`"))),
        };
        Ok(Certificate {
            g: file.g,
            n: file.n,
            status,
            route,
            method,
            columns,
            epsilon: file.epsilon,
            residual_critical: CriticalVector::new(file.residual_critical),
            audit,
            notes: file.notes,
            tool_version: file.tool_version,
        })
    }
}
