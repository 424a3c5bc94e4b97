//! Effective divisor classes used in the decompositions of the canonical
//! class: the canonical class itself, the Brill-Noether and Gieseker-Petri
//! classes `B, D, E, F`, the Weierstrass class `W`, the classes `U, V` built
//! from curves with a marked linear series, and a registry of one-off
//! classes for a handful of individual cells.
//!
//! Coefficients are produced on demand per generator, so that large spaces
//! never need to be materialized. [`Divisor::to_class`] builds the full
//! [`DivisorClass`] when it is wanted.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{binom, binom_int, is_prime, Rational};
use crate::picard::{enumerate_generators, Coeff, CriticalVector, DivisorClass, Generator, PicardError, SpaceParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{class} needs {what} = {value} composite, but it is prime")]
    PrimeInput { class: DivisorName, what: &'static str, value: u32 },
    #[error("{class} needs {what} even, got {value}")]
    ParityError { class: DivisorName, what: &'static str, value: u32 },
    #[error("W needs m = min(2n, g) >= 2, got m = {0}")]
    DegenerateInput(u32),
    #[error("no admissible (r, k) exists for g={g}, n={n}")]
    NotApplicable { g: u32, n: u32 },
    #[error("(r={r}, k={k}) does not satisfy the defining equation for g={g}, n={n}")]
    RkMismatch { g: u32, n: u32, r: u32, k: u32 },
    #[error("parameters {given} do not match the expected {expected} for {class}")]
    ParamsMismatch { class: DivisorName, given: ClassParams, expected: ClassParams },
    #[error("special class {name} is not registered for g={g}, n={n}")]
    NotRegistered { name: DivisorName, g: u32, n: u32 },
    #[error("unknown class name `{0}`")]
    UnknownName(String),
    #[error("malformed pullback input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Picard(#[from] PicardError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisorName {
    K,
    B,
    D,
    E,
    F,
    W,
    U,
    V,
    Z10,
    Z21,
    Z16,
    D12,
    L224,
    L226,
    NF14,
    LIN18,
}

impl DivisorName {
    pub const ALL: [DivisorName; 16] = [
        DivisorName::K,
        DivisorName::B,
        DivisorName::D,
        DivisorName::E,
        DivisorName::F,
        DivisorName::W,
        DivisorName::U,
        DivisorName::V,
        DivisorName::Z10,
        DivisorName::Z21,
        DivisorName::Z16,
        DivisorName::D12,
        DivisorName::L224,
        DivisorName::L226,
        DivisorName::NF14,
        DivisorName::LIN18,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DivisorName::K => "K",
            DivisorName::B => "B",
            DivisorName::D => "D",
            DivisorName::E => "E",
            DivisorName::F => "F",
            DivisorName::W => "W",
            DivisorName::U => "U",
            DivisorName::V => "V",
            DivisorName::Z10 => "Z10",
            DivisorName::Z21 => "Z21",
            DivisorName::Z16 => "Z16",
            DivisorName::D12 => "D12",
            DivisorName::L224 => "L224",
            DivisorName::L226 => "L226",
            DivisorName::NF14 => "NF14",
            DivisorName::LIN18 => "LIN18",
        }
    }

    pub fn is_special(&self) -> bool {
        special_entry(*self).is_some()
    }
}

impl fmt::Display for DivisorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DivisorName {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DivisorName::ALL
            .iter()
            .find(|d| d.as_str() == s)
            .copied()
            .ok_or_else(|| CatalogError::UnknownName(s.to_string()))
    }
}

/// `g = m*k + r` with `m = min(2n, g)` Weierstrass points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WParams {
    pub m: u32,
    pub k: u32,
    pub r: u32,
}

impl WParams {
    pub fn for_space(params: SpaceParams) -> Result<WParams, CatalogError> {
        let m = (2 * params.n()).min(params.g());
        if m < 2 {
            return Err(CatalogError::DegenerateInput(m));
        }
        Ok(WParams { m, k: params.g() / m, r: params.g() % m })
    }
}

/// Solution of `(2r+1)(g-1) - 2k = M` with `r >= 1`, `0 <= k <= g-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RkParams {
    pub r: u32,
    pub k: u32,
}

/// Right-hand side of the `(r, k)` equation: `2n` for odd `g` (class U),
/// `2n - 1` for even `g` (class V).
fn rk_target(params: SpaceParams) -> i64 {
    let two_n = 2 * params.n() as i64;
    if params.g() % 2 == 1 {
        two_n
    } else {
        two_n - 1
    }
}

/// The unique admissible `(r, k)` for the space, or `None`.
pub fn solve_rk(params: SpaceParams) -> Option<RkParams> {
    let g = params.g() as i64;
    if g < 3 {
        return None;
    }
    let target = rk_target(params);
    let mut r = 1i64;
    loop {
        let twice_k = (2 * r + 1) * (g - 1) - target;
        if twice_k > 2 * (g - 2) {
            return None;
        }
        if twice_k >= 0 && twice_k % 2 == 0 {
            return Some(RkParams { r: r as u32, k: (twice_k / 2) as u32 });
        }
        r += 1;
    }
}

fn check_rk(params: SpaceParams, rk: RkParams) -> Result<(), CatalogError> {
    let g = params.g() as i64;
    let lhs = (2 * rk.r as i64 + 1) * (g - 1) - 2 * rk.k as i64;
    if rk.r < 1 || rk.k as i64 > g - 2 || lhs != rk_target(params) {
        return Err(CatalogError::RkMismatch { g: params.g(), n: params.n(), r: rk.r, k: rk.k });
    }
    Ok(())
}

/// Parameter block recorded next to each class in a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassParams {
    None,
    W(WParams),
    Rk(RkParams),
}

impl fmt::Display for ClassParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassParams::None => f.write_str("{}"),
            ClassParams::W(w) => write!(f, "{{m={}, k={}, r={}}}", w.m, w.k, w.r),
            ClassParams::Rk(rk) => write!(f, "{{r={}, k={}}}", rk.r, rk.k),
        }
    }
}

/// Numbers shared by the W coefficient formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WCoefficients {
    pub w_lambda: Rational,
    pub w_psi: Rational,
    pub w2: Rational,
}

pub fn w_coefficients(params: SpaceParams, w: WParams) -> WCoefficients {
    let big_n = 2 * params.n() as i64;
    let (m, k, r) = (w.m as i64, w.k as i64, w.r as i64);
    let c = binom_int;
    let w_lambda = Rational::from_bigint(c(big_n, r) * c(big_n - r, m - r));
    let kq = Rational::from_int(k);
    let k1 = Rational::from_int(k + 1);
    let k2 = Rational::from_int(k + 2);
    let half = Rational::new(1, 2);
    let w_psi = binom(big_n - 1, r - 1) * binom(big_n - r, m - r) * &k1 * &k2 * &half
        + binom(big_n - 1, r) * binom(big_n - r - 1, m - r - 1) * &kq * &k1 * &half;
    let w2 = Rational::from_int(2) * &w_psi
        + binom(big_n - 2, r - 2) * binom(big_n - r, m - r) * &k1 * &k1
        + Rational::from_int(2) * binom(big_n - 2, r - 1) * binom(big_n - r - 1, m - r - 1) * &kq * &k1
        + binom(big_n - 2, r) * binom(big_n - r - 2, m - r - 2) * &kq * &kq;
    WCoefficients { w_lambda, w_psi, w2 }
}

/// Coefficients of the class built from a marked linear series, shared by
/// U and V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RkCoefficients {
    pub a_lambda: Rational,
    pub a_psi: Rational,
    pub a_irr: Rational,
    g: i64,
    r: i64,
    k: i64,
}

impl RkCoefficients {
    pub fn new(g: u32, rk: RkParams) -> RkCoefficients {
        let (g, r, k) = (g as i64, rk.r as i64, rk.k as i64);
        let a_lambda = Rational::new(
            (g - 1) * (g - 2) * (6 * r * r + 6 * r + 1) + k * (24 * r + 10 * k + 10 - 10 * g - 12 * r * g),
            g - 2,
        );
        let a_psi = Rational::from_int(r * g + g - k - r - 1);
        let a_irr = Rational::new(
            (r + 1) * r / 2 * (g - 1) * (g - 2) + k * (k + 1 + 2 * r - r * g - g),
            g - 2,
        );
        RkCoefficients { a_lambda, a_psi, a_irr, g, r, k }
    }

    /// `a_{0,s}`, the subtracted weight of a genus-0 boundary with `s` points.
    pub fn a0(&self, s: u32) -> Rational {
        let s = s as i64;
        Rational::from_int((s + 1) * s / 2 * (self.g - 1) + s * (self.r * self.g - self.r - self.k))
    }

    /// `v_{0,2}` for the pair-symmetrized class on `2n` points.
    pub fn v02(&self, n: u32) -> Rational {
        let two_n = 2 * n as i64;
        let (g, r, k) = (self.g, self.r, self.k);
        Rational::from_int(2) * &self.a_psi
            + Rational::from_int((two_n - 2) * (3 * g - 3 + 2 * r * g - 2 * r - 2 * k))
    }
}

/// A one-off class attached to specific cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialEntry {
    pub name: DivisorName,
    pub applicable: &'static [(u32, u32)],
    pub critical: CriticalVector,
    /// Subtracted weights known on `delta[i;*,*]` for a given split genus.
    pub audit_bounds: Vec<(u32, Rational)>,
    /// Pulled back from the unpointed moduli space: no psi and no
    /// genus-0 boundary terms.
    pub from_unpointed: bool,
    pub source_note: &'static str,
}

impl SpecialEntry {
    pub fn applies_to(&self, g: u32, n: u32) -> bool {
        self.applicable.contains(&(g, n))
    }
}

/// Sum of the pullbacks of a class along the `P+1` maps forgetting one
/// point of a `(P+1)`-pointed space. Uses `psi_j -> psi_j - delta_{0,{i,j}}`
/// and `delta_{0,S} -> delta_{0,S} + delta_{0,S+i}`.
pub fn forgetful_pullback_sum(critical: &CriticalVector, source_points: u32) -> Result<CriticalVector, CatalogError> {
    if source_points < 2 {
        return Err(CatalogError::Malformed(format!("need at least 2 source points, got {source_points}")));
    }
    if critical.d010 != critical.d002 {
        return Err(CatalogError::Malformed(format!(
            "two-point boundary entries differ: {} vs {}",
            critical.d010, critical.d002
        )));
    }
    let p = Rational::from_int(source_points as i64);
    let p1 = Rational::from_int(source_points as i64 + 1);
    let pm = Rational::from_int(source_points as i64 - 1);
    let two_pt = &pm * &critical.d010 - Rational::from_int(2) * &critical.psi;
    Ok(CriticalVector::new([
        &p1 * &critical.lam,
        &p * &critical.psi,
        &p1 * &critical.dirr,
        two_pt.clone(),
        two_pt,
    ]))
}

/// All registered one-off classes.
pub fn special_registry() -> Vec<SpecialEntry> {
    let q = Rational::from_int;
    let unpointed = |name, cells, lam: i64, dirr: i64, note| SpecialEntry {
        name,
        applicable: cells,
        critical: CriticalVector::from_ints([lam, 0, dirr, 0, 0]),
        audit_bounds: Vec::new(),
        from_unpointed: true,
        source_note: note,
    };
    let mut d12 = unpointed(
        DivisorName::D12,
        &[(12, 6)],
        13245,
        -1926,
        "divisor of slope 13245/1926 on the genus-12 moduli space, delta_1 weight 9867",
    );
    d12.audit_bounds.push((1, q(9867)));
    let lin18_base = CriticalVector::from_ints([290, 24, -45, -82, -82]);
    let lin18 = forgetful_pullback_sum(&lin18_base, 9).expect("registry input is well formed");
    vec![
        unpointed(DivisorName::Z10, &[(10, 6), (10, 7)], 7, -1, "slope 7 divisor on the genus-10 moduli space"),
        unpointed(DivisorName::Z21, &[(21, 2)], 2459, -377, "slope 2459/377 divisor on the genus-21 moduli space"),
        unpointed(DivisorName::Z16, &[(16, 5)], 407, -61, "slope 407/61 divisor on the genus-16 moduli space"),
        d12,
        SpecialEntry {
            name: DivisorName::L224,
            applicable: &[(22, 2)],
            critical: CriticalVector::new([q(13), q(1), q(-2), Rational::new(-10, 3), Rational::new(-10, 3)]),
            audit_bounds: Vec::new(),
            from_unpointed: false,
            source_note: "pullback of a genus-23 Brill-Noether class to 4 pointed genus-22 curves",
        },
        SpecialEntry {
            name: DivisorName::L226,
            applicable: &[(22, 3)],
            critical: CriticalVector::new([
                q(13),
                Rational::new(2, 3),
                q(-2),
                Rational::new(-56, 30),
                Rational::new(-56, 30),
            ]),
            audit_bounds: Vec::new(),
            from_unpointed: false,
            source_note: "pullback of a genus-23 Brill-Noether class to 6 pointed genus-22 curves",
        },
        SpecialEntry {
            name: DivisorName::NF14,
            applicable: &[(14, 5)],
            critical: CriticalVector::from_ints([35, 54, -10, -173, -173]),
            audit_bounds: Vec::new(),
            from_unpointed: false,
            source_note: "pointed n-fold divisor; printed coefficients applied on 10 points",
        },
        SpecialEntry {
            name: DivisorName::LIN18,
            applicable: &[(18, 5)],
            critical: lin18,
            audit_bounds: Vec::new(),
            from_unpointed: false,
            source_note: "sum of the forgetful pullbacks of a 9-pointed genus-18 class",
        },
    ]
}

pub fn special_entry(name: DivisorName) -> Option<SpecialEntry> {
    special_registry().into_iter().find(|e| e.name == name)
}

/// Per-generator coefficient data for one class.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Recipe {
    K,
    B { g: i64 },
    D { gn: i64, d0: Rational },
    E { e1: Rational },
    F { f0: Rational, f1: Rational },
    W { coeffs: WCoefficients },
    U { coeffs: RkCoefficients },
    V { v02: Rational },
    Special { entry: SpecialEntry },
}

/// A catalog class on a specific space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    name: DivisorName,
    space: SpaceParams,
    params: ClassParams,
    critical: CriticalVector,
    recipe: Recipe,
}

fn require_composite(class: DivisorName, what: &'static str, value: u32) -> Result<(), CatalogError> {
    if is_prime(value as u64) {
        return Err(CatalogError::PrimeInput { class, what, value });
    }
    Ok(())
}

fn require_even(class: DivisorName, what: &'static str, value: u32) -> Result<(), CatalogError> {
    if value % 2 != 0 {
        return Err(CatalogError::ParityError { class, what, value });
    }
    Ok(())
}

/// `6(h+1)^2 + h - 5` and `(h+1)h` for the Gieseker-Petri classes.
fn petri_lambda_and_zero(h: i64) -> (Rational, Rational) {
    (Rational::from_int(6 * (h + 1) * (h + 1) + h - 5), Rational::from_int((h + 1) * h))
}

pub fn canonical_k(space: SpaceParams) -> Divisor {
    Divisor {
        name: DivisorName::K,
        space,
        params: ClassParams::None,
        critical: CriticalVector::from_ints([13, 1, -2, -3, -2]),
        recipe: Recipe::K,
    }
}

pub fn class_b(space: SpaceParams) -> Result<Divisor, CatalogError> {
    let g = space.g();
    require_composite(DivisorName::B, "g+1", g + 1)?;
    let b0 = Rational::new(g as i64 + 1, 6);
    Ok(Divisor {
        name: DivisorName::B,
        space,
        params: ClassParams::None,
        critical: CriticalVector::new([Rational::from_int(g as i64 + 3), Rational::zero(), -b0, Rational::zero(), Rational::zero()]),
        recipe: Recipe::B { g: g as i64 },
    })
}

pub fn class_d(space: SpaceParams) -> Result<Divisor, CatalogError> {
    let gn = space.g() + space.n();
    require_composite(DivisorName::D, "g+n+1", gn + 1)?;
    let d0 = Rational::new(gn as i64 + 1, 6);
    let d1 = Rational::from_int(gn as i64 - 1);
    Ok(Divisor {
        name: DivisorName::D,
        space,
        params: ClassParams::None,
        critical: CriticalVector::new([Rational::from_int(gn as i64 + 3), d0.clone(), -&d0, -d1, -&d0]),
        recipe: Recipe::D { gn: gn as i64, d0 },
    })
}

pub fn class_e(space: SpaceParams) -> Result<Divisor, CatalogError> {
    let g = space.g();
    require_even(DivisorName::E, "g", g)?;
    let h = g as i64 / 2;
    let (e_lambda, e0) = petri_lambda_and_zero(h);
    let e1 = Rational::from_int((g as i64 - 1) * (3 * h + 1));
    Ok(Divisor {
        name: DivisorName::E,
        space,
        params: ClassParams::None,
        critical: CriticalVector::new([e_lambda, Rational::zero(), -e0, Rational::zero(), Rational::zero()]),
        recipe: Recipe::E { e1 },
    })
}

pub fn class_f(space: SpaceParams) -> Result<Divisor, CatalogError> {
    let gn = space.g() + space.n();
    require_even(DivisorName::F, "g+n", gn)?;
    let h = gn as i64 / 2;
    let (f_lambda, f0) = petri_lambda_and_zero(h);
    let f1 = Rational::from_int((gn as i64 - 1) * (3 * h + 1));
    Ok(Divisor {
        name: DivisorName::F,
        space,
        params: ClassParams::None,
        critical: CriticalVector::new([f_lambda, f0.clone(), -&f0, -&f1, -&f0]),
        recipe: Recipe::F { f0, f1 },
    })
}

pub fn class_w(space: SpaceParams) -> Result<Divisor, CatalogError> {
    let w = WParams::for_space(space)?;
    let coeffs = w_coefficients(space, w);
    Ok(Divisor {
        name: DivisorName::W,
        space,
        params: ClassParams::W(w),
        critical: CriticalVector::new([
            -&coeffs.w_lambda,
            coeffs.w_psi.clone(),
            Rational::zero(),
            -&coeffs.w2,
            -&coeffs.w2,
        ]),
        recipe: Recipe::W { coeffs },
    })
}

pub fn class_u(space: SpaceParams, rk: RkParams) -> Result<Divisor, CatalogError> {
    if space.g() % 2 != 1 {
        return Err(CatalogError::ParityError { class: DivisorName::U, what: "g+1", value: space.g() + 1 });
    }
    check_rk(space, rk)?;
    let coeffs = RkCoefficients::new(space.g(), rk);
    let a02 = coeffs.a0(2);
    Ok(Divisor {
        name: DivisorName::U,
        space,
        params: ClassParams::Rk(rk),
        critical: CriticalVector::new([
            -&coeffs.a_lambda,
            coeffs.a_psi.clone(),
            coeffs.a_irr.clone(),
            -&a02,
            -&a02,
        ]),
        recipe: Recipe::U { coeffs },
    })
}

pub fn class_v(space: SpaceParams, rk: RkParams) -> Result<Divisor, CatalogError> {
    require_even(DivisorName::V, "g", space.g())?;
    check_rk(space, rk)?;
    let coeffs = RkCoefficients::new(space.g(), rk);
    let two_n = Rational::from_int(2 * space.n() as i64);
    let two_n_minus_1 = Rational::from_int(2 * space.n() as i64 - 1);
    let v02 = coeffs.v02(space.n());
    Ok(Divisor {
        name: DivisorName::V,
        space,
        params: ClassParams::Rk(rk),
        critical: CriticalVector::new([
            -(&two_n * &coeffs.a_lambda),
            &two_n_minus_1 * &coeffs.a_psi,
            &two_n * &coeffs.a_irr,
            -&v02,
            -&v02,
        ]),
        recipe: Recipe::V { v02 },
    })
}

pub fn special_class(space: SpaceParams, name: DivisorName) -> Result<Divisor, CatalogError> {
    let entry = special_entry(name).ok_or(CatalogError::UnknownName(name.to_string()))?;
    if !entry.applies_to(space.g(), space.n()) {
        return Err(CatalogError::NotRegistered { name, g: space.g(), n: space.n() });
    }
    Ok(Divisor {
        name,
        space,
        params: ClassParams::None,
        critical: entry.critical.clone(),
        recipe: Recipe::Special { entry },
    })
}

/// Build a class from its name alone, deriving any parameter block.
pub fn build(space: SpaceParams, name: DivisorName) -> Result<Divisor, CatalogError> {
    match name {
        DivisorName::K => Ok(canonical_k(space)),
        DivisorName::B => class_b(space),
        DivisorName::D => class_d(space),
        DivisorName::E => class_e(space),
        DivisorName::F => class_f(space),
        DivisorName::W => class_w(space),
        DivisorName::U => {
            let rk = solve_rk(space).ok_or(CatalogError::NotApplicable { g: space.g(), n: space.n() })?;
            class_u(space, rk)
        }
        DivisorName::V => {
            let rk = solve_rk(space).ok_or(CatalogError::NotApplicable { g: space.g(), n: space.n() })?;
            class_v(space, rk)
        }
        _ => special_class(space, name),
    }
}

/// Rebuild a class from a stored name and parameter block, rejecting a
/// block that differs from the one the catalog derives.
pub fn rebuild(space: SpaceParams, name: DivisorName, params: ClassParams) -> Result<Divisor, CatalogError> {
    let divisor = match (name, params) {
        (DivisorName::U, ClassParams::Rk(rk)) => class_u(space, rk)?,
        (DivisorName::V, ClassParams::Rk(rk)) => class_v(space, rk)?,
        _ => build(space, name)?,
    };
    if divisor.params != params {
        return Err(CatalogError::ParamsMismatch { class: name, given: params, expected: divisor.params });
    }
    Ok(divisor)
}

impl Divisor {
    pub fn name(&self) -> DivisorName {
        self.name
    }

    pub fn space(&self) -> SpaceParams {
        self.space
    }

    pub fn params(&self) -> ClassParams {
        self.params
    }

    pub fn critical(&self) -> &CriticalVector {
        &self.critical
    }

    /// Coefficient on one generator. Critical generators always come back
    /// exact and agree with [`Divisor::critical`].
    pub fn coeff(&self, gen: &Generator) -> Coeff {
        match *gen {
            Generator::Lambda => return Coeff::Exact(self.critical.lam.clone()),
            Generator::Psi => return Coeff::Exact(self.critical.psi.clone()),
            Generator::DeltaIrr => return Coeff::Exact(self.critical.dirr.clone()),
            Generator::Delta { i: 0, a: 1, b: 0 } => return Coeff::Exact(self.critical.d010.clone()),
            Generator::Delta { i: 0, a: 0, b: 2 } => return Coeff::Exact(self.critical.d002.clone()),
            Generator::Delta { .. } => {}
        }
        let Generator::Delta { i, a, b } = *gen else { unreachable!() };
        let s = 2 * a + b;
        let exact = |v: i64| Coeff::Exact(Rational::from_int(v));
        let neg = |q: &Rational| Coeff::Exact(-q);
        let at_most = |q: &Rational| Coeff::AtMost(-q);
        match &self.recipe {
            Recipe::K => {
                if (i, a, b) == (1, 0, 0) {
                    exact(-3)
                } else {
                    exact(-2)
                }
            }
            Recipe::B { g } => exact(-(i as i64) * (g - i as i64)),
            Recipe::D { gn, d0 } => {
                if b != 0 {
                    neg(d0)
                } else {
                    let t = (i + a) as i64;
                    exact(-t * (gn - t))
                }
            }
            Recipe::E { e1 } => match i {
                0 => exact(0),
                1 => neg(e1),
                _ => at_most(e1),
            },
            Recipe::F { f0, f1 } => {
                if b != 0 {
                    neg(f0)
                } else if i + a >= 2 {
                    at_most(f1)
                } else {
                    neg(f1)
                }
            }
            Recipe::W { coeffs } => {
                if i == 0 {
                    at_most(&(Rational::from_int(s as i64) * &coeffs.w_psi))
                } else {
                    Coeff::AtMost(Rational::zero())
                }
            }
            Recipe::U { coeffs } => {
                let weight = coeffs.a0(s);
                if i == 0 {
                    neg(&weight)
                } else {
                    at_most(&weight)
                }
            }
            Recipe::V { v02 } => at_most(v02),
            Recipe::Special { entry } => {
                if let Some((_, w)) = entry.audit_bounds.iter().find(|(gi, _)| *gi == i) {
                    at_most(w)
                } else if entry.from_unpointed && i == 0 {
                    exact(0)
                } else {
                    Coeff::AtMost(Rational::zero())
                }
            }
        }
    }

    /// Full class over every generator of the space.
    pub fn to_class(&self) -> Result<DivisorClass, PicardError> {
        let mut class = DivisorClass::zero(self.space);
        for gen in enumerate_generators(self.space) {
            class.set(gen, self.coeff(&gen))?;
        }
        Ok(class)
    }
}
