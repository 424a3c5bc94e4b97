//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::process::{Command, ExitCode};

use nodal_core::catalog::{solve_rk, w_coefficients, WParams};
use nodal_core::certifier::{audit_full, certify_set, AuditVerdict, Method, Status};
use nodal_core::feasibility::{
    cutoff_pg, cutoff_pgrk, pg_closed_form, pg_printed_form, pg_subsystem, pgrk_printed, solve, Inequality,
    InequalitySystem, Sense, Verdict,
};
use nodal_core::known::{known_row, TableKind};
use nodal_core::picard::CriticalVector;
use nodal_core::tables::{gen_table, Table};
use nodal_core::{certify, verify, DivisorName, Pipeline, Rational, SpaceParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn q(v: i64) -> Rational {
    Rational::from_int(v)
}

fn table_matches(table: &Table) -> Vec<String> {
    table
        .rows
        .iter()
        .filter_map(|r| {
            let (min, max) = known_row(table.kind, r.g)?;
            (r.n_min != Some(min) || r.n_max != max)
                .then(|| format!("g={} computed ({:?}, {:?}) expected ({min}, {max:?})", r.g, r.n_min, r.n_max))
        })
        .collect()
}

fn criterion_1(t: &Table) -> Outcome {
    let off = table_matches(t);
    if !off.is_empty() {
        return Err(off.join("; "));
    }
    if let Some(r) = t.rows.iter().find(|r| r.n_max != Some(2 * r.g - 4)) {
        return Err(format!("g={} n_max {:?} is not 2g-4", r.g, r.n_max));
    }
    Ok(format!("{} rows match, n_max = 2g-4 throughout", t.rows.len()))
}

fn criterion_2(t: &Table, thm2: &Table) -> Outcome {
    let off = table_matches(t);
    if !off.is_empty() || !t.report.is_empty() {
        return Err(format!("{}\n{}", off.join("; "), t.report.render()));
    }
    // the report carries attempt logs wherever a cell disagrees
    let g22 = thm2.report.entries.iter().find(|d| d.g == 22).ok_or("no report entry for the g=22 mismatch")?;
    if g22.cells.iter().all(|c| c.attempts.is_empty()) {
        return Err("report entry without attempt log".into());
    }
    Ok(format!(
        "{} rows match, empty report; report mechanism exercised ({} logged cells at g=22 of thm2)",
        t.rows.len(),
        g22.cells.len()
    ))
}

fn criterion_3(t: &Table) -> Outcome {
    let mut notes = Vec::new();
    for r in &t.rows {
        let (min, max) = known_row(t.kind, r.g).ok_or("missing published row")?;
        if r.n_max != max {
            return Err(format!("g={} n_max {:?} expected {max:?}", r.g, r.n_max));
        }
        if r.n_min != Some(min) {
            if r.g == 22 && matches!(r.n_min, Some(2 | 3)) {
                notes.push(format!("g=22 n_min={} (published {min}, open cell)", r.n_min.unwrap()));
            } else {
                return Err(format!("g={} n_min {:?} expected {min}", r.g, r.n_min));
            }
        }
    }
    let eff = certify_set(22, 2, &[DivisorName::L224], false).map_err(|e| e.to_string())?;
    let cert = eff.certificate.ok_or("K - L224 not effective")?;
    let third = Rational::new(1, 3);
    let expected = CriticalVector::new([q(0), q(0), q(0), third, Rational::new(4, 3)]);
    if cert.residual_critical != expected || cert.multiplier(DivisorName::L224) != Some(&q(1)) {
        return Err(format!("(22,2) residual {:?}", cert.residual_critical));
    }
    let verdict = |names: &[DivisorName]| -> Result<&'static str, String> {
        let out = certify_set(22, 2, names, true).map_err(|e| e.to_string())?;
        Ok(if out.is_general_type() { "feasible" } else { "infeasible" })
    };
    use DivisorName::{D, E, L224, W};
    let printed = verdict(&[L224, E, W])?;
    let augmented = verdict(&[L224, E, W, D])?;
    let at_23 = certify(22, 3, Pipeline::Full).map_err(|e| e.to_string())?;
    notes.push(format!(
        "(22,2) K-L224 residual (0,0,0,1/3,4/3); printed system {{L224,E,W}} {printed}; augmented {{L224,E,W,D}} {augmented}; (22,3) {}",
        if at_23.is_general_type() { "certified" } else { "not certified" }
    ));
    Ok(notes.join("; "))
}

fn criterion_4() -> Outcome {
    let (mut cells, mut printed_off) = (0, 0);
    for g in 5..=30u32 {
        let mut last = None;
        for n in (g.div_ceil(2))..=3 * g {
            let def = cutoff_pg(g, n).map_err(|e| e.to_string())?;
            cells += 1;
            if def != pg_closed_form(g, n) {
                return Err(format!("(g,n)=({g},{n}) definition {def} closed form {}", pg_closed_form(g, n)));
            }
            if def != pg_printed_form(g, n) {
                printed_off += 1;
            }
            let sys = pg_subsystem(g, n).map_err(|e| e.to_string())?;
            let feasible = solve(&sys).map_err(|e| e.to_string())?.is_feasible();
            if feasible != def.is_positive() {
                return Err(format!("(g,n)=({g},{n}) cutoff {def} but subsystem feasible={feasible}"));
            }
            if !def.is_negative() {
                last = Some(n);
            }
        }
        if last != Some(2 * g - 4) {
            return Err(format!("g={g}: largest admissible n {last:?}"));
        }
    }
    if printed_off == 0 {
        return Err("printed constant term not detected as different".into());
    }
    Ok(format!(
        "{cells} cells agree with -2n^2+(2g-5)n+4g^2-11g+9, signs match, boundary 2g-4; printed constant g^2 differs at {printed_off} cells (reported)"
    ))
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for g in (5..=29u32).step_by(2) {
        for n in 1..=8 * g {
            let space = SpaceParams::new(g, n).map_err(|e| e.to_string())?;
            let Some(rk) = solve_rk(space) else { continue };
            let def = cutoff_pgrk(g, n, rk.r, rk.k).map_err(|e| e.to_string())?;
            if def != pgrk_printed(g, n, rk.r, rk.k) {
                return Err(format!("(g,n,r,k)=({g},{n},{},{}) differ", rk.r, rk.k));
            }
            count += 1;
        }
    }
    let p = cutoff_pgrk(5, 8, 2, 2).map_err(|e| e.to_string())?;
    if p != q(36) || pgrk_printed(5, 8, 2, 2) != q(36) {
        return Err(format!("p(5,8,2,2) = {p}"));
    }
    Ok(format!("{count} points agree, p(5,8,2,2) = 36"))
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for g in 5..=40u32 {
        for n in 1..=3 * g {
            let space = SpaceParams::new(g, n).map_err(|e| e.to_string())?;
            let w = w_coefficients(space, WParams::for_space(space).map_err(|e| e.to_string())?);
            let diff = &w.w2 - &(q(3) * &w.w_psi);
            let ok = if 2 * n + 2 <= g {
                diff.is_positive()
            } else if 2 * n + 1 == g || 2 * n == g {
                diff.is_zero()
            } else {
                diff.is_negative()
            };
            if !ok {
                return Err(format!("(g,n)=({g},{n}): w2 - 3 w_psi = {diff}"));
            }
            count += 1;
        }
    }
    Ok(format!("sign pattern holds at {count} cells"))
}

fn criterion_7() -> Outcome {
    let c = certify(23, 1, Pipeline::Full).map_err(|e| e.to_string())?.certificate.ok_or("(23,1) not certified")?;
    if c.residual_critical.lam != Rational::new(1, 92) || !verify(&c).ok() {
        return Err(format!("(23,1) lambda slack {}", c.residual_critical.lam));
    }
    let c = certify(11, 6, Pipeline::Full).map_err(|e| e.to_string())?.certificate.ok_or("(11,6) not certified")?;
    if c.method != Method::JointSolve || !verify(&c).ok() {
        return Err(format!("(11,6) method {}", c.method.as_str()));
    }
    let x = c.multiplier(DivisorName::B).map_or("-".to_string(), |m| m.to_string());
    let use_set = [DivisorName::Z10, DivisorName::F, DivisorName::W];
    let z = certify_set(10, 6, &use_set, true).map_err(|e| e.to_string())?;
    let zc = z.certificate.ok_or("(10,6) {Z10,F,W} infeasible")?;
    if zc.status != Status::GeneralType || !verify(&zc).ok() {
        return Err("(10,6) certificate does not verify".into());
    }
    let auto = certify(10, 6, Pipeline::Full).map_err(|e| e.to_string())?.certificate.ok_or("(10,6) auto")?;
    let auto_set: Vec<DivisorName> = auto.columns.iter().map(|c| c.name).collect();
    if auto_set != use_set {
        return Err(format!("(10,6) automatic route uses {auto_set:?}"));
    }
    Ok(format!(
        "(23,1) lambda slack 1/92; (11,6) joint solve over the B, D, W multipliers with epsilon as strict psi slack (x = {x}, epsilon = {}); (10,6) {{Z10, F, W}}",
        c.epsilon
    ))
}

fn criterion_8() -> Outcome {
    let (mut pass, mut inconclusive) = (0, 0);
    for (kind, pipeline) in [
        (TableKind::Prop51, Pipeline::Weierstrass),
        (TableKind::Prop52, Pipeline::Improved),
        (TableKind::Thm2, Pipeline::Full),
    ] {
        for g in kind.genera() {
            for n in 1..=nodal_core::tables::scan_limit(g) {
                let Some(cert) = certify(g, n, pipeline).map_err(|e| e.to_string())?.certificate else { continue };
                if cert.status != Status::GeneralType {
                    continue;
                }
                let special = cert.columns.iter().any(|c| c.name.is_special());
                match audit_full(&cert).map_err(|e| e.to_string())? {
                    AuditVerdict::Pass => pass += 1,
                    AuditVerdict::Inconclusive(_) if special && !cert.notes.is_empty() => inconclusive += 1,
                    other => return Err(format!("({g},{n}) audit {}", other.label())),
                }
            }
        }
    }
    let mut tampered = certify(23, 1, Pipeline::Full).map_err(|e| e.to_string())?.certificate.ok_or("(23,1)")?;
    for c in &mut tampered.columns {
        c.multiplier = &c.multiplier / &q(40);
    }
    let audit = audit_full(&tampered).map_err(|e| e.to_string())?;
    if !matches!(audit, AuditVerdict::Fail(_)) || verify(&tampered).ok() {
        return Err("tampered certificate accepted".into());
    }
    Ok(format!("{pass} PASS, {inconclusive} documented INCONCLUSIVE (special routes); tampered certificate FAILs audit and verify"))
}

fn criterion_9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let (mut feasible, mut infeasible) = (0, 0);
    for case in 0..500 {
        let nonneg = vec![rng.gen_bool(0.6), rng.gen_bool(0.6)];
        let mut sys = InequalitySystem::new(vec!["x".into(), "y".into()], nonneg).map_err(|e| e.to_string())?;
        for _ in 0..rng.gen_range(1..=6) {
            let coeffs = vec![q(rng.gen_range(-20..=20)), q(rng.gen_range(-20..=20))];
            let sense = if rng.gen_bool(0.5) { Sense::Lt } else { Sense::Le };
            sys.push(Inequality::new(coeffs, sense, q(rng.gen_range(-20..=20))), None)
                .map_err(|e| e.to_string())?;
        }
        let expected = oracle::brute_force(&sys);
        match solve(&sys).map_err(|e| e.to_string())? {
            Verdict::Feasible(w) if expected && sys.check(&w.values) => feasible += 1,
            Verdict::Infeasible(t) if !expected && t.recombines(&sys) => infeasible += 1,
            v => return Err(format!("case {case}: solver feasible={} oracle {expected}", v.is_feasible())),
        }
    }
    Ok(format!("500 systems agree ({feasible} feasible with checked witnesses, {infeasible} infeasible with recombining traces)"))
}

fn criterion_10() -> Outcome {
    let run = || -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_nodal"))
            .args(["table", "--which", "thm2"])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("exit {:?}", out.status.code()));
        }
        Ok(out.stdout)
    };
    let (a, b) = (run()?, run()?);
    if a != b {
        return Err("outputs differ".into());
    }
    Ok(format!("two runs byte-identical ({} bytes)", a.len()))
}

mod oracle {
    //! Exact brute force for two-variable systems.

    use nodal_core::feasibility::{Inequality, InequalitySystem, Sense};
    use nodal_core::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn feasible_at(rows: &[Inequality], x: &Rational) -> bool {
        let mut lo: Option<(Rational, bool)> = None;
        let mut hi: Option<(Rational, bool)> = None;
        for row in rows {
            let (a, b) = (&row.coeffs[0], &row.coeffs[1]);
            let rest = &row.bound - &(a * x);
            let strict = row.sense == Sense::Lt;
            if b.is_zero() {
                if !row.sense.holds(&q(0), &rest) {
                    return false;
                }
                continue;
            }
            let t = &rest / b;
            let (slot, upper) = if b.is_positive() { (&mut hi, true) } else { (&mut lo, false) };
            let tighter = match slot {
                None => true,
                Some((v, closed)) => (if upper { t < *v } else { t > *v }) || (t == *v && *closed && strict),
            };
            if tighter {
                *slot = Some((t, !strict));
            }
        }
        match (lo, hi) {
            (Some((l, lc)), Some((h, hc))) => l < h || (l == h && lc && hc),
            _ => true,
        }
    }

    /// Probe every vertex `x`, the midpoints between them and one point
    /// beyond each end; the feasible projection is an interval with ends
    /// among the vertices.
    pub fn brute_force(sys: &InequalitySystem) -> bool {
        let mut rows = sys.rows().to_vec();
        for v in 0..2 {
            if sys.is_nonnegative(v) {
                let mut c = vec![q(0), q(0)];
                c[v] = q(-1);
                rows.push(Inequality::le(c, q(0)));
            }
        }
        let mut xs = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if r.coeffs[1].is_zero() && !r.coeffs[0].is_zero() {
                xs.push(&r.bound / &r.coeffs[0]);
            }
            for s in &rows[i + 1..] {
                let det = &(&r.coeffs[0] * &s.coeffs[1]) - &(&s.coeffs[0] * &r.coeffs[1]);
                if !det.is_zero() {
                    xs.push(&(&(&r.bound * &s.coeffs[1]) - &(&s.bound * &r.coeffs[1])) / &det);
                }
            }
        }
        xs.sort();
        xs.dedup();
        let mut probes = xs.clone();
        probes.extend(xs.windows(2).map(|w| w[0].midpoint(&w[1])));
        match (xs.first(), xs.last()) {
            (Some(f), Some(l)) => {
                probes.push(f - &q(1));
                probes.push(l + &q(1));
            }
            _ => probes.push(q(0)),
        }
        probes.iter().any(|x| feasible_at(&rows, x))
    }
}

fn main() -> ExitCode {
    let load = |kind| gen_table(kind).map_err(|e| e.to_string());
    let tables = (load(TableKind::Prop51), load(TableKind::Prop52), load(TableKind::Thm2));
    let (p51, p52, thm2) = match tables {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (a, b, c) => {
            for e in [a.err(), b.err(), c.err()].into_iter().flatten() {
                println!("table generation failed: {e}");
            }
            return ExitCode::FAILURE;
        }
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("Prop51 table", criterion_1(&p51)),
        ("Prop52 table", criterion_2(&p52, &thm2)),
        ("Thm2 table", criterion_3(&thm2)),
        ("pg cutoff identity", criterion_4()),
        ("pgrk cutoff identity", criterion_5()),
        ("trichotomy", criterion_6()),
        ("spot certificates", criterion_7()),
        ("audit soundness", criterion_8()),
        ("solver oracle", criterion_9()),
        ("determinism", criterion_10()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
