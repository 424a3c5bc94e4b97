//! Exact feasibility of small systems of linear inequalities by
//! Fourier-Motzkin elimination, plus closed-form cutoff polynomials used as
//! independent cross-checks of the solver.
//!
//! Every row is normalized to `sum c_v x_v  (<= | <)  bound`. Elimination
//! tracks, for every derived row, the nonnegative combination of input rows
//! that produced it, so an infeasible verdict comes with a checkable
//! contradiction.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::catalog::{solve_rk, w_coefficients, RkCoefficients, RkParams, WParams};
use crate::numeric::{binom, isqrt, Rational};
use crate::picard::{Generator, SpaceParams};

pub const MAX_VARIABLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("system has {0} variables; at most {MAX_VARIABLES} are supported")]
    TooManyVariables(usize),
    #[error("row {row} has {got} coefficients but {expected} variables are declared")]
    RowArity { row: usize, got: usize, expected: usize },
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("unknown variable index {0}")]
    UnknownVariable(usize),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{0} is outside the domain of this formula")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Le,
    Lt,
}

impl Sense {
    fn join(self, other: Sense) -> Sense {
        if self == Sense::Lt || other == Sense::Lt {
            Sense::Lt
        } else {
            Sense::Le
        }
    }

    /// Whether `lhs sense rhs` holds.
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Lt => lhs < rhs,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Lt => "<",
        })
    }
}

/// `sum coeffs[v] * x_v  sense  bound`, dense over the system's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
    pub sense: Sense,
}

impl Inequality {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, bound: Rational) -> Self {
        Inequality { coeffs, bound, sense }
    }

    pub fn le(coeffs: Vec<Rational>, bound: Rational) -> Self {
        Inequality::new(coeffs, Sense::Le, bound)
    }

    pub fn lt(coeffs: Vec<Rational>, bound: Rational) -> Self {
        Inequality::new(coeffs, Sense::Lt, bound)
    }

    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        self.sense.holds(&self.lhs(point), &self.bound)
    }

    /// `bound - lhs`; positive slack means the row holds with room.
    pub fn slack(&self, point: &[Rational]) -> Rational {
        &self.bound - self.lhs(point)
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| format!("{c}*x{v}"))
            .collect();
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{lhs} {} {}", self.sense, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalitySystem {
    variables: Vec<String>,
    nonneg: Vec<bool>,
    rows: Vec<Inequality>,
    provenance: Vec<Option<Generator>>,
}

impl InequalitySystem {
    pub fn new(variables: Vec<String>, nonneg: Vec<bool>) -> Result<Self, FeasibilityError> {
        let mut seen = std::collections::HashSet::new();
        for v in &variables {
            if !seen.insert(v) {
                return Err(FeasibilityError::DuplicateVariable(v.clone()));
            }
        }
        if nonneg.len() != variables.len() {
            return Err(FeasibilityError::RowArity { row: 0, got: nonneg.len(), expected: variables.len() });
        }
        Ok(InequalitySystem { variables, nonneg, rows: Vec::new(), provenance: Vec::new() })
    }

    /// All variables nonnegative.
    pub fn nonnegative(variables: Vec<String>) -> Result<Self, FeasibilityError> {
        let n = variables.len();
        InequalitySystem::new(variables, vec![true; n])
    }

    pub fn push(&mut self, row: Inequality, source: Option<Generator>) -> Result<(), FeasibilityError> {
        if row.coeffs.len() != self.variables.len() {
            return Err(FeasibilityError::RowArity {
                row: self.rows.len(),
                got: row.coeffs.len(),
                expected: self.variables.len(),
            });
        }
        self.rows.push(row);
        self.provenance.push(source);
        Ok(())
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn is_nonnegative(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn provenance(&self, row: usize) -> Option<Generator> {
        self.provenance.get(row).copied().flatten()
    }

    /// Whether `point` satisfies every row and every sign constraint.
    pub fn check(&self, point: &[Rational]) -> bool {
        point.len() == self.variables.len()
            && self.rows.iter().all(|r| r.is_satisfied(point))
            && point.iter().zip(&self.nonneg).all(|(x, nn)| !nn || !x.is_negative())
    }

    /// The rows with sign constraints written out as `-x_v <= 0`.
    fn materialized(&self) -> Vec<Inequality> {
        let nv = self.variables.len();
        let mut rows = self.rows.clone();
        for v in (0..nv).filter(|v| self.nonneg[*v]) {
            let mut coeffs = vec![Rational::zero(); nv];
            coeffs[v] = -Rational::one();
            rows.push(Inequality::le(coeffs, Rational::zero()));
        }
        rows
    }

    fn row_origin(&self, idx: usize) -> RowRef {
        if idx < self.rows.len() {
            RowRef::Row(idx)
        } else {
            let sign_vars: Vec<usize> = (0..self.variables.len()).filter(|v| self.nonneg[*v]).collect();
            RowRef::NonNegative(sign_vars[idx - self.rows.len()])
        }
    }
}

/// An input row of a system: one of its explicit rows or the sign
/// constraint of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowRef {
    Row(usize),
    NonNegative(usize),
}

#[derive(Debug, Clone)]
struct Tracked {
    row: Inequality,
    mult: BTreeMap<usize, Rational>,
}

impl Tracked {
    fn scaled(&self, c: &Rational) -> Tracked {
        Tracked {
            row: Inequality {
                coeffs: self.row.coeffs.iter().map(|x| x * c).collect(),
                bound: &self.row.bound * c,
                sense: self.row.sense,
            },
            mult: self.mult.iter().map(|(k, m)| (*k, m * c)).collect(),
        }
    }

    /// Divide by the magnitude of the first nonzero coefficient.
    fn normalized(self) -> Tracked {
        match self.row.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => {
                let s = lead.abs().recip();
                self.scaled(&s)
            }
            None => self,
        }
    }

    fn combine(&self, other: &Tracked) -> Tracked {
        let mut mult = self.mult.clone();
        for (k, m) in &other.mult {
            *mult.entry(*k).or_insert_with(Rational::zero) += m;
        }
        Tracked {
            row: Inequality {
                coeffs: self.row.coeffs.iter().zip(&other.row.coeffs).map(|(a, b)| a + b).collect(),
                bound: &self.row.bound + &other.row.bound,
                sense: self.row.sense.join(other.row.sense),
            },
            mult,
        }
    }

    /// Constant row `0 sense bound` that is false.
    fn is_contradiction(&self) -> bool {
        self.row.is_constant() && !self.row.sense.holds(&Rational::zero(), &self.row.bound)
    }
}

/// Remove duplicates by coefficient vector, keeping the tightest bound
/// (a strict row wins a tie). Constant rows that hold are dropped.
fn dedupe(rows: Vec<Tracked>) -> Vec<Tracked> {
    let mut best: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut out: Vec<Tracked> = Vec::new();
    for t in rows {
        if t.row.is_constant() && !t.is_contradiction() {
            continue;
        }
        match best.get(&t.row.coeffs) {
            Some(&idx) => {
                let cur = &out[idx].row;
                let tighter = t.row.bound < cur.bound || (t.row.bound == cur.bound && t.row.sense == Sense::Lt && cur.sense == Sense::Le);
                if tighter {
                    out[idx] = t;
                }
            }
            None => {
                best.insert(t.row.coeffs.clone(), out.len());
                out.push(t);
            }
        }
    }
    out
}

fn eliminate_tracked(rows: &[Tracked], var: usize) -> Vec<Tracked> {
    let mut out = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for t in rows {
        let c = &t.row.coeffs[var];
        if c.is_positive() {
            upper.push(t.scaled(&c.recip()));
        } else if c.is_negative() {
            lower.push(t.scaled(&(-c).recip()));
        } else {
            out.push(t.clone());
        }
    }
    for u in &upper {
        for l in &lower {
            let mut combined = u.combine(l);
            combined.row.coeffs[var] = Rational::zero();
            out.push(combined.normalized());
        }
    }
    dedupe(out)
}

/// Fourier-Motzkin elimination of one variable. Sign constraints are
/// written out as rows first, so the result declares the same variables
/// with no sign constraints and no coefficient on `var`.
pub fn eliminate(system: &InequalitySystem, var: usize) -> Result<InequalitySystem, FeasibilityError> {
    if var >= system.variables.len() {
        return Err(FeasibilityError::UnknownVariable(var));
    }
    let rows: Vec<Tracked> = system
        .materialized()
        .into_iter()
        .map(|row| Tracked { row, mult: BTreeMap::new() })
        .collect();
    let mut out = InequalitySystem::new(system.variables.clone(), vec![false; system.variables.len()])?;
    for t in eliminate_tracked(&rows, var) {
        out.push(t.row, None)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub values: Vec<Rational>,
}

/// A nonnegative combination of input rows summing to a false constant row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityTrace {
    pub order: Vec<String>,
    pub multipliers: Vec<(RowRef, Rational)>,
    pub contradiction: Inequality,
}

impl InfeasibilityTrace {
    /// Recombine the input rows and confirm the stated contradiction.
    pub fn recombines(&self, system: &InequalitySystem) -> bool {
        let nv = system.variables.len();
        let mut coeffs = vec![Rational::zero(); nv];
        let mut bound = Rational::zero();
        let mut sense = Sense::Le;
        for (r, m) in &self.multipliers {
            if m.is_negative() {
                return false;
            }
            let row = match *r {
                RowRef::Row(i) => match system.rows.get(i) {
                    Some(row) => row.clone(),
                    None => return false,
                },
                RowRef::NonNegative(v) => {
                    if v >= nv || !system.nonneg[v] {
                        return false;
                    }
                    let mut c = vec![Rational::zero(); nv];
                    c[v] = -Rational::one();
                    Inequality::le(c, Rational::zero())
                }
            };
            for (acc, c) in coeffs.iter_mut().zip(&row.coeffs) {
                *acc += &(c * m);
            }
            bound += &(&row.bound * m);
            if m.is_positive() {
                sense = sense.join(row.sense);
            }
        }
        let combined = Inequality { coeffs, bound, sense };
        combined == self.contradiction
            && combined.is_constant()
            && !combined.sense.holds(&Rational::zero(), &combined.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible(Witness),
    Infeasible(InfeasibilityTrace),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }
}

struct Interval {
    lo: Option<(Rational, bool)>,
    hi: Option<(Rational, bool)>,
}

impl Interval {
    fn tighten_lo(&mut self, v: Rational, strict: bool) {
        let replace = match &self.lo {
            None => true,
            Some((cur, cs)) => v > *cur || (v == *cur && strict && !cs),
        };
        if replace {
            self.lo = Some((v, strict));
        }
    }

    fn tighten_hi(&mut self, v: Rational, strict: bool) {
        let replace = match &self.hi {
            None => true,
            Some((cur, cs)) => v < *cur || (v == *cur && strict && !cs),
        };
        if replace {
            self.hi = Some((v, strict));
        }
    }

    fn pick(&self) -> Rational {
        match (&self.lo, &self.hi) {
            (Some((lo, _)), Some((hi, _))) if lo == hi => lo.clone(),
            (Some((lo, _)), Some((hi, _))) => lo.midpoint(hi),
            (Some((lo, _)), None) => lo + Rational::one(),
            (None, Some((hi, _))) => hi - Rational::one(),
            (None, None) => Rational::zero(),
        }
    }
}

/// Decide feasibility. Variables are eliminated in declared order and the
/// witness is rebuilt from the last variable back: each coordinate takes
/// the midpoint of its admissible interval, or the single point of a
/// degenerate closed interval, or one unit inside a half-line, or zero.
pub fn solve(system: &InequalitySystem) -> Result<Verdict, FeasibilityError> {
    let nv = system.variables.len();
    if nv > MAX_VARIABLES {
        return Err(FeasibilityError::TooManyVariables(nv));
    }
    let mut rows: Vec<Tracked> = system
        .materialized()
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let mut mult = BTreeMap::new();
            mult.insert(i, Rational::one());
            Tracked { row, mult }
        })
        .collect();

    let mut stages: Vec<Vec<Tracked>> = Vec::with_capacity(nv);
    for var in 0..=nv {
        if let Some(bad) = rows.iter().find(|t| t.is_contradiction()) {
            let trace = InfeasibilityTrace {
                order: system.variables[..var].to_vec(),
                multipliers: bad
                    .mult
                    .iter()
                    .filter(|(_, m)| !m.is_zero())
                    .map(|(i, m)| (system.row_origin(*i), m.clone()))
                    .collect(),
                contradiction: bad.row.clone(),
            };
            if !trace.recombines(system) {
                return Err(FeasibilityError::Internal("infeasibility trace does not recombine".into()));
            }
            return Ok(Verdict::Infeasible(trace));
        }
        if var == nv {
            break;
        }
        let next = eliminate_tracked(&rows, var);
        stages.push(rows);
        rows = next;
    }

    let mut point = vec![Rational::zero(); nv];
    for var in (0..nv).rev() {
        let mut interval = Interval { lo: None, hi: None };
        for t in &stages[var] {
            let c = &t.row.coeffs[var];
            if c.is_zero() {
                continue;
            }
            let rest: Rational = t
                .row
                .coeffs
                .iter()
                .zip(&point)
                .enumerate()
                .filter(|(v, _)| *v > var)
                .map(|(_, (c, x))| c * x)
                .sum();
            let limit = (&t.row.bound - rest) / c;
            let strict = t.row.sense == Sense::Lt;
            if c.is_positive() {
                interval.tighten_hi(limit, strict);
            } else {
                interval.tighten_lo(limit, strict);
            }
        }
        point[var] = interval.pick();
    }

    if !system.check(&point) {
        return Err(FeasibilityError::Internal(format!(
            "witness {:?} fails substitution",
            point.iter().map(|q| q.to_string()).collect::<Vec<_>>()
        )));
    }
    Ok(Verdict::Feasible(Witness { values: point }))
}

fn case_two_domain(g: u32, n: u32) -> Result<SpaceParams, FeasibilityError> {
    if g < 5 || 2 * n < g {
        return Err(FeasibilityError::Domain(format!("(g={g}, n={n}) with 2n >= g >= 5 required")));
    }
    SpaceParams::new(g, n).map_err(|e| FeasibilityError::Domain(e.to_string()))
}

/// The cutoff for the `{B, D, W}` route in the range `2n >= g`, evaluated
/// from its definition in terms of the class coefficients.
pub fn cutoff_pg(g: u32, n: u32) -> Result<Rational, FeasibilityError> {
    let space = case_two_domain(g, n)?;
    let w = w_coefficients(space, WParams::for_space(space).map_err(|e| FeasibilityError::Domain(e.to_string()))?);
    let d0 = Rational::new((g + n + 1) as i64, 6);
    let d1 = Rational::from_int((g + n) as i64 - 1);
    let three = Rational::from_int(3);
    let core = (&d1 - &three * &d0) * (&w.w2 - &w.w_psi) - (&d1 * &w.w_psi - &d0 * &w.w2);
    Ok(Rational::from_int(6 * (2 * n as i64 - 1)) * core / binom(2 * n as i64 - 1, g as i64 - 1))
}

/// Closed form that the definition of [`cutoff_pg`] reduces to.
pub fn pg_closed_form(g: u32, n: u32) -> Rational {
    let (g, n) = (g as i64, n as i64);
    Rational::from_int(-2 * n * n + (2 * g - 5) * n + 4 * g * g - 11 * g + 9)
}

/// The published expansion, whose constant term carries `g^2` instead of
/// `4g^2`. Kept only to detect and report the disagreement.
pub fn pg_printed_form(g: u32, n: u32) -> Rational {
    let (g, n) = (g as i64, n as i64);
    Rational::from_int(-2 * n * n + (2 * g - 5) * n + g * g - 11 * g + 9)
}

/// The discriminant `36g^2 - 108g + 97` of the cutoff quadratic in `n`.
pub fn pg_discriminant(g: u32) -> BigInt {
    let g = BigInt::from(g);
    BigInt::from(36) * &g * &g - BigInt::from(108) * &g + BigInt::from(97)
}

/// Integer parts of the two roots `(2g - 5 -+ sqrt(disc)) / 4`, computed with
/// an exact integer square root. The smaller root is negative for `g >= 2`,
/// so only the floor of the larger one matters for scans.
pub fn pg_root_floors(g: u32) -> (BigInt, BigInt) {
    let s = isqrt(&pg_discriminant(g));
    let b = BigInt::from(2 * g as i64 - 5);
    // disc = (6g-9)^2 + 16 is a square only for g <= 2, so for larger g floor((b + sqrt)/4) = floor((b + isqrt)/4)
    let hi = (&b + &s).div_floor_i(4);
    let lo = (&b - &s - BigInt::from(1)).div_floor_i(4);
    (lo, hi)
}

trait DivFloor {
    fn div_floor_i(&self, d: i64) -> BigInt;
}

impl DivFloor for BigInt {
    fn div_floor_i(&self, d: i64) -> BigInt {
        num_integer::Integer::div_floor(self, &BigInt::from(d))
    }
}

/// The three rows in `(y, z)` that bound `n` on the `{B, D, W}` route for
/// `2n >= g`: psi, `delta[0;1,0]` and `delta[0;0,2]`.
pub fn pg_subsystem(g: u32, n: u32) -> Result<InequalitySystem, FeasibilityError> {
    let space = case_two_domain(g, n)?;
    let w = w_coefficients(space, WParams::for_space(space).map_err(|e| FeasibilityError::Domain(e.to_string()))?);
    let d0 = Rational::new((g + n + 1) as i64, 6);
    let d1 = Rational::from_int((g + n) as i64 - 1);
    let mut sys = InequalitySystem::nonnegative(vec!["y".into(), "z".into()])?;
    sys.push(Inequality::lt(vec![d0.clone(), w.w_psi.clone()], Rational::one()), Some(Generator::Psi))?;
    let d010 = Generator::Delta { i: 0, a: 1, b: 0 };
    let d002 = Generator::Delta { i: 0, a: 0, b: 2 };
    sys.push(Inequality::le(vec![-d1, -&w.w2], Rational::from_int(-3)), Some(d010))?;
    sys.push(Inequality::le(vec![-d0, -&w.w2], Rational::from_int(-2)), Some(d002))?;
    Ok(sys)
}

/// Cutoff for the `{B, D, U}` route, from its definition.
pub fn cutoff_pgrk(g: u32, n: u32, r: u32, k: u32) -> Result<Rational, FeasibilityError> {
    if g % 2 == 0 {
        return Err(FeasibilityError::Domain(format!("g={g} must be odd")));
    }
    let space = SpaceParams::new(g, n).map_err(|e| FeasibilityError::Domain(e.to_string()))?;
    if solve_rk(space) != Some(RkParams { r, k }) {
        return Err(FeasibilityError::Domain(format!("(r={r}, k={k}) is not admissible for (g={g}, n={n})")));
    }
    let c = RkCoefficients::new(g, RkParams { r, k });
    let (u_psi, u02) = (c.a_psi.clone(), c.a0(2));
    let d0 = Rational::new((g + n + 1) as i64, 6);
    let d1 = Rational::from_int((g + n) as i64 - 1);
    let three = Rational::from_int(3);
    let core = (&d1 - &three * &d0) * (&u02 - &u_psi) - (&d1 * &u_psi - &d0 * &u02);
    Ok(Rational::from_int(6) * core)
}

/// The published polynomial form of [`cutoff_pgrk`].
pub fn pgrk_printed(g: u32, n: u32, r: u32, k: u32) -> Rational {
    let (g, n, r, k) = (g as i64, n as i64, r as i64, k as i64);
    Rational::from_int(
        9 - 12 * g + 3 * g * g + k + g * k - 3 * n + 3 * g * n + k * n + r - g * g * r + n * r - g * n * r,
    )
}

/// Predicted largest `n` for genus `g >= 5`. For even `g` this is the floor
/// of `7(g-1)/2 - 3`. For odd `g` the value `7(g-1)/2 - 3` itself is kept
/// when `g + n + 1` is composite there and reduced by one otherwise.
pub fn nmax_formula(g: u32) -> u32 {
    let seven = 7 * (g - 1);
    if seven % 2 == 1 {
        return (seven - 1) / 2 - 3;
    }
    let candidate = seven / 2 - 3;
    if crate::numeric::is_prime((g + candidate + 1) as u64) {
        candidate - 1
    } else {
        candidate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|x| q(*x)).collect()
    }

    fn free(names: &[&str]) -> InequalitySystem {
        let vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let n = vars.len();
        InequalitySystem::new(vars, vec![false; n]).unwrap()
    }

    #[test]
    fn single_pairing() {
        let mut sys = free(&["y", "z"]);
        sys.push(Inequality::lt(qs(&[1, 1]), q(1)), None).unwrap();
        sys.push(Inequality::le(qs(&[0, -1]), q(-3)), None).unwrap();
        let out = eliminate(&sys, 1).unwrap();
        assert_eq!(out.rows(), &[Inequality::lt(qs(&[1, 0]), q(-2))]);
    }

    #[test]
    fn unbounded_direction_drops_rows() {
        let mut sys = free(&["x", "y"]);
        sys.push(Inequality::le(qs(&[1, 1]), q(4)), None).unwrap();
        sys.push(Inequality::le(qs(&[2, -1]), q(1)), None).unwrap();
        let out = eliminate(&sys, 0).unwrap();
        assert!(out.rows().is_empty());
    }

    #[test]
    fn contradictory_bounds_give_trace() {
        let mut sys = free(&["x"]);
        sys.push(Inequality::le(qs(&[1]), q(1)), None).unwrap();
        sys.push(Inequality::le(qs(&[-1]), q(-2)), None).unwrap();
        match solve(&sys).unwrap() {
            Verdict::Infeasible(trace) => {
                assert!(trace.recombines(&sys));
                assert_eq!(trace.contradiction, Inequality::le(qs(&[0]), q(-1)));
            }
            Verdict::Feasible(w) => panic!("unexpected witness {:?}", w),
        }
    }

    #[test]
    fn strict_equality_is_infeasible_closed_is_point() {
        let mut sys = free(&["x"]);
        sys.push(Inequality::lt(qs(&[1]), q(2)), None).unwrap();
        sys.push(Inequality::le(qs(&[-1]), q(-2)), None).unwrap();
        assert!(!solve(&sys).unwrap().is_feasible());

        let mut sys = free(&["x"]);
        sys.push(Inequality::le(qs(&[1]), q(2)), None).unwrap();
        sys.push(Inequality::le(qs(&[-1]), q(-2)), None).unwrap();
        assert_eq!(solve(&sys).unwrap(), Verdict::Feasible(Witness { values: qs(&[2]) }));
    }

    #[test]
    fn interval_rules() {
        let mut sys = free(&["x"]);
        sys.push(Inequality::le(qs(&[-1]), q(-5)), None).unwrap();
        assert_eq!(solve(&sys).unwrap(), Verdict::Feasible(Witness { values: qs(&[6]) }));
        let mut sys = free(&["x"]);
        sys.push(Inequality::lt(qs(&[1]), q(-5)), None).unwrap();
        assert_eq!(solve(&sys).unwrap(), Verdict::Feasible(Witness { values: qs(&[-6]) }));
        let sys = free(&["x"]);
        assert_eq!(solve(&sys).unwrap(), Verdict::Feasible(Witness { values: qs(&[0]) }));
        let mut sys = InequalitySystem::nonnegative(vec!["x".into()]).unwrap();
        sys.push(Inequality::lt(qs(&[1]), q(1)), None).unwrap();
        assert_eq!(
            solve(&sys).unwrap(),
            Verdict::Feasible(Witness { values: vec![Rational::new(1, 2)] })
        );
    }

    #[test]
    fn sign_constraints_enter_the_trace() {
        let mut sys = InequalitySystem::nonnegative(vec!["x".into(), "y".into()]).unwrap();
        sys.push(Inequality::le(qs(&[1, 1]), q(-1)), None).unwrap();
        let Verdict::Infeasible(trace) = solve(&sys).unwrap() else { panic!("expected infeasible") };
        assert!(trace.recombines(&sys));
        assert!(trace.multipliers.iter().any(|(r, _)| matches!(r, RowRef::NonNegative(_))));
    }

    #[test]
    fn too_many_variables_rejected() {
        let names: Vec<String> = (0..9).map(|i| format!("x{i}")).collect();
        let sys = InequalitySystem::nonnegative(names).unwrap();
        assert_eq!(solve(&sys), Err(FeasibilityError::TooManyVariables(9)));
        assert!(InequalitySystem::nonnegative(vec!["a".into(), "a".into()]).is_err());
        let mut sys = free(&["x"]);
        assert!(sys.push(Inequality::le(qs(&[1, 1]), q(0)), None).is_err());
    }

    #[test]
    fn tampered_trace_does_not_recombine() {
        let mut sys = free(&["x"]);
        sys.push(Inequality::le(qs(&[1]), q(1)), None).unwrap();
        sys.push(Inequality::le(qs(&[-1]), q(-2)), None).unwrap();
        let Verdict::Infeasible(mut trace) = solve(&sys).unwrap() else { panic!() };
        trace.multipliers[0].1 = q(2);
        assert!(!trace.recombines(&sys));
    }

    #[test]
    fn pg_definition_matches_closed_form() {
        for g in 5..=30u32 {
            let mut last = None;
            for two_n in g..=6 * g {
                if two_n % 2 == 1 {
                    continue;
                }
                let n = two_n / 2;
                let v = cutoff_pg(g, n).unwrap();
                assert_eq!(v, pg_closed_form(g, n), "g={g} n={n}");
                if !v.is_negative() {
                    last = Some(n);
                }
            }
            assert_eq!(last, Some(2 * g - 4));
        }
        assert!(!cutoff_pg(23, 42).unwrap().is_negative());
        assert!(cutoff_pg(23, 43).unwrap().is_negative());
        assert!(cutoff_pg(10, 4).is_err());
        assert_ne!(pg_printed_form(10, 6), pg_closed_form(10, 6));
    }

    #[test]
    fn pg_sign_matches_subsystem() {
        for g in 5..=30u32 {
            for two_n in g..=5 * g {
                if two_n % 2 == 1 {
                    continue;
                }
                let n = two_n / 2;
                let feasible = solve(&pg_subsystem(g, n).unwrap()).unwrap().is_feasible();
                assert_eq!(cutoff_pg(g, n).unwrap().is_positive(), feasible, "g={g} n={n}");
            }
        }
    }

    #[test]
    fn pg_roots_bracket_the_cutoff() {
        for g in 5..=30u32 {
            let (lo, hi) = pg_root_floors(g);
            assert!(lo < BigInt::from(0));
            assert_eq!(hi, BigInt::from(2 * g - 4), "g={g}");
            let s = isqrt(&pg_discriminant(g));
            assert_ne!(&s * &s, pg_discriminant(g));
        }
    }

    #[test]
    fn pgrk_examples() {
        assert_eq!(cutoff_pgrk(5, 8, 2, 2).unwrap(), q(36));
        assert_eq!(pgrk_printed(5, 8, 2, 2), q(36));
        assert_eq!(cutoff_pgrk(5, 10, 2, 0).unwrap(), q(16));
        assert!(cutoff_pgrk(6, 9, 2, 4).is_err());
        assert!(cutoff_pgrk(5, 8, 2, 1).is_err());
    }

    #[test]
    fn pgrk_definition_matches_printed_polynomial() {
        let mut count = 0;
        for g in (5..=29u32).step_by(2) {
            for n in 1..=8 * g {
                let Some(rk) = solve_rk(SpaceParams::new(g, n).unwrap()) else { continue };
                assert_eq!(cutoff_pgrk(g, n, rk.r, rk.k).unwrap(), pgrk_printed(g, n, rk.r, rk.k));
                count += 1;
            }
        }
        assert!(count > 200);
    }

    #[test]
    fn nmax_formula_values() {
        let expected = [10, 14, 18, 21, 25, 28, 32, 35, 38, 42, 46, 49, 52, 56, 60, 63, 66, 70, 74];
        for (g, e) in (5..=23).zip(expected) {
            assert_eq!(nmax_formula(g), e, "g={g}");
        }
    }
}
