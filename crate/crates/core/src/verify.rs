//! Invariant sweeps at desk scale, grouped by area. Each check reports how
//! many cases it ran and the first counterexample, if any.

use std::fmt;

use crate::bounds::{
    theorem_main_bounds, theorem_main_candidates, Catalog, Column, LensSpace, ReportOptions,
};
use crate::cohomology::{normal_sw_class, spin_by_sw_class, spin_by_wu_class, CohomologyRing};
use crate::derivation::SideCondition;
use crate::dyadic::{alpha, alpha_sym_pow_minus, hurwitz_radon, nu, nu_binom, nu_binom_sym};
use crate::inductive::{milgram_condition, run_rounds_detailed, RoundOptions};
use crate::lifting::{dm2_lifting_check, encaje_gate, feeding_params_with_lambda, lambda_rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Dyadic,
    Cohomology,
    Bounds,
    Rounds,
    Lifting,
    All,
}

impl Scope {
    pub fn parse(s: &str) -> Option<Scope> {
        Some(match s {
            "dyadic" => Scope::Dyadic,
            "cohomology" => Scope::Cohomology,
            "bounds" => Scope::Bounds,
            "rounds" => Scope::Rounds,
            "lifting" => Scope::Lifting,
            "all" => Scope::All,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Range covered, e.g. "e <= 8, ell <= 100".
    pub range: String,
    pub cases: u64,
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "{}: {} cases OK ({})", self.name, self.cases, self.range),
            Some(why) => write!(
                f,
                "{}: FAILED after {} cases ({}): {why}",
                self.name, self.cases, self.range
            ),
        }
    }
}

/// Counts cases and keeps the first failure.
struct Tally {
    name: &'static str,
    range: String,
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, range: impl Into<String>) -> Self {
        Tally { name, range: range.into(), cases: 0, failure: None }
    }

    /// Record one case; returns false once a failure has been seen.
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
        self.failure.is_none()
    }

    fn fail(&mut self, why: String) {
        if self.failure.is_none() {
            self.failure = Some(why);
        }
    }

    fn done(self) -> CheckOutcome {
        CheckOutcome { name: self.name, range: self.range, cases: self.cases, failure: self.failure }
    }
}

fn legendre(n: u64) -> u64 {
    let mut total = 0;
    let mut q = n / 2;
    while q > 0 {
        total += q;
        q /= 2;
    }
    total
}

pub fn dyadic_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    let mut t = Tally::new("kummer-vs-legendre", "0 <= b <= a <= 1024");
    'outer: for a in 0..=1024u64 {
        for b in 0..=a {
            let want = legendre(a) - legendre(b) - legendre(a - b);
            let got = nu_binom(&a, &b);
            if !t.check(got == Ok(want), || format!("nu C({a},{b}) = {got:?}, factorials give {want}")) {
                break 'outer;
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("digit-sum-identity", "1 <= a <= 2^20");
    for a in 1..=(1u64 << 20) {
        let ok = alpha(&(a - 1)) + 1 == alpha(&a) + nu(&a).unwrap_or(u64::MAX);
        if !t.check(ok, || format!("alpha({}) != alpha({a}) - 1 + nu({a})", a - 1)) {
            break;
        }
    }
    out.push(t.done());

    let big = 1u64 << 40;
    let mut t = Tally::new("symbolic-digit-sum", "1 <= a <= 2^16, N = 40");
    for a in 1..=(1u64 << 16) {
        let sym = alpha_sym_pow_minus(&a).map(|s| s.eval(40));
        let want = i128::from(alpha(&(big - a)));
        if !t.check(sym == Ok(want), || format!("alpha(2^N - {a}) at N = 40: {sym:?} vs {want}")) {
            break;
        }
    }
    out.push(t.done());

    let mut t = Tally::new("symbolic-binomial", "1 <= a, b <= 4096, N = 40");
    'outer: for a in 1..=4096u64 {
        for b in 1..=4096u64 {
            let sym = nu_binom_sym(&a, &b).map(|s| s.eval(40));
            let want = nu_binom(&(big - a), &b).map(i128::from);
            if !t.check(sym.is_ok() && sym == want, || {
                format!("nu C(2^N - {a}, {b}) at N = 40: {sym:?} vs {want:?}")
            }) {
                break 'outer;
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("hurwitz-radon", "odd t <= 2^16");
    for t_val in (1..=(1u64 << 16)).step_by(2) {
        let c = nu(&(t_val + 1)).expect("t + 1 > 0");
        let f = hurwitz_radon(&t_val).expect("t odd");
        // F(t) + 1 = 8a + 2^b depends only on nu(t + 1)
        let ok = f + 1 == 8 * (c / 4) + (1 << (c % 4)) && (c > 3 || f >= c);
        if !t.check(ok, || format!("F({t_val}) = {f} with nu(t + 1) = {c}")) {
            break;
        }
    }
    out.push(t.done());
    out
}

pub fn cohomology_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    let mut t = Tally::new("spin-double-derivation", "m <= 512, e in {1, 2, 3}");
    'outer: for m in 0..=512u64 {
        for e in 1..=3u64 {
            let w2 = spin_by_sw_class(m, e);
            let wu = spin_by_wu_class(m, e);
            let expected = m == 0 || m % 2 == 1;
            if !t.check(w2 == expected && wu == expected, || {
                format!("m = {m}, e = {e}: w2 route {w2}, Sq^2 route {wu}, expected {expected}")
            }) {
                break 'outer;
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("normal-class-top-coefficient", "m <= 512 with alpha(m) = 1");
    for m in (0..10).map(|i| 1u64 << i) {
        let ring = CohomologyRing::new(m, 2).expect("m >= 1");
        let ok = normal_sw_class(ring).coefficient(false, (m - 1) as usize);
        if !t.check(ok, || format!("y^{} coefficient of the normal class vanishes for m = {m}", m - 1)) {
            break;
        }
    }
    out.push(t.done());

    let mut t = Tally::new("normal-class-binomials", "n <= 128, all degrees");
    'outer: for n in 1..=128u64 {
        let ring = CohomologyRing::new(n, 3).expect("n >= 1");
        let w = normal_sw_class(ring);
        for j in 0..=n {
            // coefficient of y^j in (1 + y)^{-(n+1)} is C(n + j, j) mod 2
            let want = nu_binom(&(n + j), &j) == Ok(0);
            if !t.check(w.coefficient(false, j as usize) == want, || format!("n = {n}, j = {j}")) {
                break 'outer;
            }
        }
    }
    out.push(t.done());
    out
}

pub fn bounds_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let mut catalog = Catalog::new(ReportOptions::default());

    let mut t = Tally::new("soundness", "m <= 256, e <= 10");
    'outer: for e in 1..=10u64 {
        for m in 0..=256u64 {
            let space = LensSpace::two_primary(m, e).expect("e >= 1");
            let ok = match catalog.report(&space) {
                Ok(r) => r.lower.dim <= r.upper.dim,
                Err(err) => {
                    t.fail(format!("{space}: {err}"));
                    false
                }
            };
            if !t.check(ok, || format!("{space}: lower exceeds upper")) {
                break 'outer;
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("power-of-two-exactness", "m in {0, 1, 2, 4, ..., 256}, e <= 10");
    let ms = [0u64, 1].into_iter().chain((1..=8).map(|i| 1u64 << i));
    'outer: for m in ms {
        let want = match m {
            0 => 2,
            1 => 5,
            _ => 4 * m + 1,
        };
        for e in 1..=10u64 {
            let space = LensSpace::two_primary(m, e).expect("e >= 1");
            let r = catalog.report(&space);
            let ok = matches!(&r, Ok(r) if r.exact && r.upper.dim == want);
            if !t.check(ok, || format!("{space}: expected exact {want}")) {
                break 'outer;
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("gap-law", "ell <= 100, max(3, alpha(m)) <= e <= max(3, alpha(m)) + 2");
    'outer: for column in [Column::RoundOne, Column::RoundOneSharp, Column::RoundTwo, Column::RoundTwoSharp] {
        for ell in 1..=100u64 {
            let m = column.manifold_param(ell);
            let e0 = 3.max(alpha(&m));
            for e in e0..=e0 + 2 {
                let Some(upper) = column.closed_form(ell, e) else { continue };
                let space = LensSpace::two_primary(m, e).expect("e >= 1");
                let lower = theorem_main_bounds(&space).iter().map(|b| b.dim).max();
                let gap = lower.map(|l| upper as i64 - l as i64);
                let want = column.optimality_gap(ell);
                if !t.check(gap.is_some() && gap == want, || {
                    format!("{} at ell = {ell}, e = {e}: gap {gap:?}, law {want:?}", column.label())
                }) {
                    break 'outer;
                }
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("one-dimension-gap", "m = 2^t + 1, 2 <= t <= 7, 2 <= e <= 10");
    'outer: for tt in 2..=7u32 {
        let m = (1u64 << tt) + 1;
        for e in 2..=10u64 {
            let space = LensSpace::two_primary(m, e).expect("e >= 1");
            let r = catalog.report(&space);
            let ok = matches!(&r, Ok(r) if r.lower.dim == 4 * m - 2 && r.upper.dim == 4 * m - 1);
            if !t.check(ok, || format!("{space}: expected lower {} and upper {}", 4 * m - 2, 4 * m - 1)) {
                break 'outer;
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("candidate-scan", "m <= 256, e <= 10");
    'outer: for m in 1..=256u64 {
        for e in 1..=10u64 {
            let brute: Vec<u64> = (1..=m)
                .filter(|&n| n as i64 + (alpha(&n) as i64 - e as i64).max(0) == m as i64)
                .collect();
            if !t.check(theorem_main_candidates(m, e) == brute, || format!("m = {m}, e = {e}")) {
                break 'outer;
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("external-monotone", "e = 1, m <= 256");
    let mut with_external = Catalog::new(ReportOptions { conjectural: false, external: true });
    for m in 0..=256u64 {
        let space = LensSpace::two_primary(m, 1).expect("e >= 1");
        match (catalog.report(&space), with_external.report(&space)) {
            (Ok(plain), Ok(ext)) => {
                if !t.check(ext.upper.dim <= plain.upper.dim, || format!("{space}: external raised the upper bound")) {
                    break;
                }
            }
            (Err(err), _) | (_, Err(err)) => {
                t.fail(format!("{space}: {err}"));
                break;
            }
        }
    }
    out.push(t.done());
    out
}

pub fn rounds_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let mut regen = Tally::new("table-regeneration", "e <= 8, ell <= 100");
    let mut replay = Tally::new("derivation-replay", "e <= 8, ell <= 100");
    let mut audit = Tally::new("radon-gate-audit", "e <= 8, ell <= 100");
    for e in 1..=8u64 {
        let entries = match run_rounds_detailed(e, 4 * 100 + 3, RoundOptions { external: true }) {
            Ok(entries) => entries,
            Err(err) => {
                regen.fail(format!("e = {e}: {err}"));
                break;
            }
        };
        for column in [
            Column::RoundOne,
            Column::RoundOneSharp,
            Column::RoundTwo,
            Column::RoundTwoSharp,
            Column::Special,
            Column::RoundTwoBase,
        ] {
            for ell in 1..=100u64 {
                let expected = column.closed_form(ell, e);
                let produced = entries
                    .iter()
                    .find(|x| x.column == column && x.ell == ell)
                    .map(|x| x.embedding.dim);
                regen.check(produced == expected, || {
                    format!(
                        "{} at m = {}, e = {e}: produced {produced:?}, closed form {expected:?}",
                        column.label(),
                        column.manifold_param(ell)
                    )
                });
            }
        }
        for entry in &entries {
            let node = &entry.embedding.derivation;
            replay.check(node.replay().is_ok(), || {
                format!("m = {}, e = {e}: {}", entry.embedding.m, node.replay().unwrap_err())
            });
            for c in node.all_conditions() {
                if let SideCondition::RadonGate { k, a, b, .. } = c {
                    audit.check(2 * k + 3 <= 8 * a + (1i64 << b), || format!("m = {}, e = {e}: {}", entry.embedding.m, c.describe()));
                }
            }
        }
    }
    out.push(regen.done());
    out.push(replay.done());
    out.push(audit.done());

    let mut t = Tally::new("milgram-low-mu", "mu <= 2, ell <= 2^12");
    'outer: for mu in 1..=2u64 {
        for ell in 1..=4096u64 {
            if !t.check(milgram_condition(mu, ell), || format!("mu = {mu}, ell = {ell}")) {
                break 'outer;
            }
        }
    }
    out.push(t.done());

    // for mu = 3 the condition reads alpha(ell) >= 8; about a fifth of the
    // 13-bit range qualifies, and for mu = 4 nothing below 2^23 does
    let mut t = Tally::new("milgram-density", "mu in {3, 4}, ell <= 2^12, mu = 3 threshold 25%");
    let mut hits = 0usize;
    for ell in 1..=4096u64 {
        let three = milgram_condition(3, ell);
        hits += usize::from(three);
        let ok = three == (alpha(&ell) >= 8) && !milgram_condition(4, ell);
        if !t.check(ok, || format!("ell = {ell}")) {
            break;
        }
    }
    if hits * 4 >= 4096 {
        t.fail(format!("{hits} of 4096 values satisfy the condition for mu = 3"));
    }
    out.push(t.done());
    out
}

pub fn lifting_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    let mut t = Tally::new("carry-lifting-gate", "2 <= ell <= 4096, N = 64 for ell <= 256");
    for ell in 2..=4096u64 {
        let check = match dm2_lifting_check(ell) {
            Ok(c) => c,
            Err(err) => {
                t.fail(format!("ell = {ell}: {err}"));
                break;
            }
        };
        let mut ok = check.ok == (alpha(&ell) >= 2)
            && check.nu1.as_constant() == Some(alpha(&ell) as i64 - 1)
            && check.nu2.as_constant() == Some(alpha(&(ell - 1)) as i64 + 2);
        if ell <= 256 {
            // 2^64 - 4(ell + 1)
            let p = u64::MAX - 4 * (ell + 1) + 1;
            let m = 2 * ell - 3;
            ok &= nu_binom(&p, &(2 * m + 2)).map(i128::from) == Ok(check.nu1.eval(64))
                && nu_binom(&p, &(2 * m + 4)).map(i128::from) == Ok(check.nu2.eval(64));
        }
        if !t.check(ok, || format!("ell = {ell}: {check:?}")) {
            break;
        }
    }
    out.push(t.done());

    let mut t = Tally::new("feeding-gate", "mu in {1, 2}, 2 <= ell <= 256, lambda in {0, lambda(ell)}");
    let mut boundary = 0u64;
    'outer: for mu in 1..=2u64 {
        for ell in 2..=256u64 {
            let mut lambdas = vec![0];
            if lambda_rule(ell) == 1 {
                lambdas.push(1);
            }
            for lambda in lambdas {
                let i = (1u64 << mu) * ell - 1;
                let got = feeding_params_with_lambda(mu, ell, lambda).ok().and_then(|inst| {
                    boundary += u64::from(inst.is_boundary());
                    encaje_gate(&inst)
                });
                if !t.check(got == Some(4 * i + 3 - lambda), || {
                    format!("mu = {mu}, ell = {ell}, lambda = {lambda}: {got:?}")
                }) {
                    break 'outer;
                }
            }
        }
    }
    out.push(t.done());

    // the equality branch is reached exactly by the sharpened instances
    let mut t = Tally::new("equality-branch-audit", "mu in {1, 2}, 2 <= ell <= 256");
    let sharpened = 2 * (2..=256u64).filter(|&ell| lambda_rule(ell) == 1).count() as u64;
    t.cases = boundary;
    if boundary != sharpened {
        t.fail(format!("{boundary} boundary instances, {sharpened} sharpened ones"));
    }
    out.push(t.done());
    out
}

/// Runs the checks for `scope` in a fixed order.
pub fn run(scope: Scope) -> Vec<(&'static str, Vec<CheckOutcome>)> {
    let all = scope == Scope::All;
    let mut out = Vec::new();
    if all || scope == Scope::Dyadic {
        out.push(("dyadic", dyadic_checks()));
    }
    if all || scope == Scope::Cohomology {
        out.push(("cohomology", cohomology_checks()));
    }
    if all || scope == Scope::Bounds {
        out.push(("bounds", bounds_checks()));
    }
    if all || scope == Scope::Rounds {
        out.push(("rounds", rounds_checks()));
    }
    if all || scope == Scope::Lifting {
        out.push(("lifting", lifting_checks()));
    }
    out
}
