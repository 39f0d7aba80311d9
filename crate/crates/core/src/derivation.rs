//! Derivation trees: which rule produced a bound, from which premises, and
//! the integers that satisfied each numeric side condition.
//!
//! Side conditions are typed so a stored tree can be replayed: every
//! condition recomputes its predicate from its own witnesses.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::bounds::{metastable_smoothable, theorem_main_condition, Column};
use crate::cohomology::{is_spin, normal_sw_class, CohomologyRing};
use crate::dyadic::{alpha, nu, radon_pair};
use crate::inductive::{milgram_condition, sigma_table};
use crate::lifting::{dm2_lifting_check, encaje_gate, lambda_rule, EncajeInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SideCondition {
    /// `sigma + beta > 4j + 2`.
    StrictGate { sigma: i64, beta: i64, j: i64 },
    /// `sigma + beta = 4j + 2` and `2k + 3 <= 8a + 2^b` for `nu(2j + 2) = 4a + b`.
    RadonGate { sigma: i64, beta: i64, j: i64, k: i64, a: i64, b: i64 },
    /// The bundle `multiple * eta_j` is `(k + 1) * eta_j` and fits in `R^{sigma + beta}`.
    FeedingFits { multiple: i64, k: i64, ambient: i64, sigma: i64, beta: i64 },
    /// `value = previous + shift`.
    Shift { previous: i64, shift: i64, value: i64 },
    /// `dim = alpha + beta + 1`.
    JoinDimension { alpha: i64, beta: i64, dim: i64 },
    ClosedForm { column: Column, ell: i64, e: i64, dim: i64 },
    SigmaTable { k: i64, e: i64, sigma: i64 },
    /// `m = n + max(0, alpha(n) - e)`.
    TorsionShift { n: i64, e: i64, m: i64 },
    /// `e >= min(alpha(n) - 6, alpha(n) + 1 - 2^nu(n))`.
    MainCondition { n: i64, e: i64 },
    /// `alpha(value) = 1`.
    PowerOfTwo { value: i64 },
    Residue { value: i64, modulus: i64, residue: i64 },
    AtLeast { quantity: String, value: i64, bound: i64 },
    AtMost { quantity: String, value: i64, bound: i64 },
    /// `2 * ambient >= 3 * (manifold_dim + 1)`.
    Metastable { manifold_dim: i64, ambient: i64 },
    /// The numeric embedding gate returns `dim` for `(n, m, d)`.
    Encaje { n: i64, m: i64, d: i64, dim: i64 },
    Lambda { ell: i64, lambda: i64 },
    /// Both carry conditions of the Davis-Mahowald lifting hold.
    Dm2Lifting { ell: i64 },
    /// The `y^j` coefficient of the normal Stiefel-Whitney class of `L^{2n+1}` is 1.
    NormalClassCoefficient { n: i64, j: i64 },
    SpinStructure { m: i64, e: i64 },
    Milgram { mu: i64, ell: i64 },
}

fn unsigned(v: i64) -> Option<u64> {
    u64::try_from(v).ok()
}

impl SideCondition {
    /// Re-evaluate the predicate from the stored witnesses.
    pub fn holds(&self) -> bool {
        self.evaluate().unwrap_or(false)
    }

    fn evaluate(&self) -> Option<bool> {
        use SideCondition::*;
        Some(match self {
            StrictGate { sigma, beta, j } => sigma + beta > 4 * j + 2,
            RadonGate { sigma, beta, j, k, a, b } => {
                let c = nu(&unsigned(2 * j + 2)?).ok()?;
                let (ra, rb) = radon_pair(c);
                (ra, rb) == (unsigned(*a)?, unsigned(*b)?)
                    && sigma + beta == 4 * j + 2
                    && 2 * k + 3 <= 8 * a + (1i64 << b)
            }
            FeedingFits { multiple, k, ambient, sigma, beta } => {
                *multiple == k + 1 && ambient <= &(sigma + beta)
            }
            Shift { previous, shift, value } => *value == previous + shift,
            JoinDimension { alpha, beta, dim } => *dim == alpha + beta + 1,
            ClosedForm { column, ell, e, dim } => {
                column.closed_form(unsigned(*ell)?, unsigned(*e)?) == Some(unsigned(*dim)?)
            }
            SigmaTable { k, e, sigma } => {
                sigma_table(unsigned(*k)?, unsigned(*e)?) == Some(unsigned(*sigma)?)
            }
            TorsionShift { n, e, m } => {
                let a = i64::try_from(alpha(&unsigned(*n)?)).ok()?;
                *m == n + (a - e).max(0)
            }
            MainCondition { n, e } => theorem_main_condition(unsigned(*n)?, unsigned(*e)?),
            PowerOfTwo { value } => alpha(&unsigned(*value)?) == 1,
            Residue { value, modulus, residue } => {
                *modulus > 0 && value.rem_euclid(*modulus) == *residue
            }
            AtLeast { value, bound, .. } => value >= bound,
            AtMost { value, bound, .. } => value <= bound,
            Metastable { manifold_dim, ambient } => {
                metastable_smoothable(unsigned(*manifold_dim)?, unsigned(*ambient)?)
            }
            Encaje { n, m, d, dim } => {
                let inst = EncajeInstance::new(unsigned(*n)?, unsigned(*m)?, unsigned(*d)?).ok()?;
                encaje_gate(&inst) == Some(unsigned(*dim)?)
            }
            Lambda { ell, lambda } => lambda_rule(unsigned(*ell)?) == unsigned(*lambda)?,
            Dm2Lifting { ell } => dm2_lifting_check(unsigned(*ell)?).ok()?.ok,
            NormalClassCoefficient { n, j } => {
                let ring = CohomologyRing::new(unsigned(*n)?, 2).ok()?;
                normal_sw_class(ring).coefficient(false, usize::try_from(*j).ok()?)
            }
            SpinStructure { m, e } => is_spin(unsigned(*m)?, unsigned(*e)?),
            Milgram { mu, ell } => milgram_condition(unsigned(*mu)?, unsigned(*ell)?),
        })
    }

    /// Human-readable predicate with its witnesses substituted.
    pub fn describe(&self) -> String {
        use SideCondition::*;
        match self {
            StrictGate { sigma, beta, j } => {
                format!("sigma + beta > 4j + 2: {sigma} + {beta} > {}", 4 * j + 2)
            }
            RadonGate { sigma, beta, j, k, a, b } => format!(
                "sigma + beta = 4j + 2 and 2k + 3 <= 8a + 2^b: {sigma} + {beta} = {}, {} <= {} (nu({}) = 4*{a} + {b})",
                4 * j + 2,
                2 * k + 3,
                8 * a + (1i64 << (*b).clamp(0, 62)),
                2 * j + 2
            ),
            FeedingFits { multiple, k, ambient, sigma, beta } => format!(
                "bundle multiple {multiple} = k + 1 = {} and R^{ambient} fits in R^{}",
                k + 1,
                sigma + beta
            ),
            Shift { previous, shift, value } => format!("{value} = {previous} + {shift}"),
            JoinDimension { alpha, beta, dim } => format!("{dim} = {alpha} + {beta} + 1"),
            ClosedForm { column, ell, e, dim } => {
                format!("{dim} matches the {} closed form at ell = {ell}, e = {e}", column.label())
            }
            SigmaTable { k, e, sigma } => format!("sigma({k}, {e}) = {sigma}"),
            TorsionShift { n, e, m } => format!("{m} = {n} + max(0, alpha({n}) - {e})"),
            MainCondition { n, e } => {
                format!("e >= min(alpha(n) - 6, alpha(n) + 1 - 2^nu(n)) at n = {n}, e = {e}")
            }
            PowerOfTwo { value } => format!("alpha({value}) = 1"),
            Residue { value, modulus, residue } => format!("{value} = {residue} mod {modulus}"),
            AtLeast { quantity, value, bound } => format!("{quantity} = {value} >= {bound}"),
            AtMost { quantity, value, bound } => format!("{quantity} = {value} <= {bound}"),
            Metastable { manifold_dim, ambient } => format!(
                "metastable range 2*{ambient} >= 3*({manifold_dim} + 1)"
            ),
            Encaje { n, m, d, dim } => {
                format!("embedding gate (n, m, d) = ({n}, {m}, {d}) gives R^{dim}")
            }
            Lambda { ell, lambda } => format!("lambda({ell}) = {lambda}"),
            Dm2Lifting { ell } => format!("Davis-Mahowald carry conditions at ell = {ell}"),
            NormalClassCoefficient { n, j } => {
                format!("normal class of L^{} has y^{j} coefficient 1", 2 * n + 1)
            }
            SpinStructure { m, e } => format!("L^{}(2^{e}) is spin", 2 * m + 1),
            Milgram { mu, ell } => format!("2^(mu+1) - 1 <= alpha(ell) + mu + kappa(mu) at mu = {mu}, ell = {ell}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Premise {
    Derived { node: DerivationNode },
    Axiom { tag: String, statement: String },
}

/// A rule application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationNode {
    pub rule: String,
    pub conclusion: String,
    #[serde(default)]
    pub side_conditions: Vec<SideCondition>,
    #[serde(default)]
    pub premises: Vec<Premise>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayFailure {
    pub rule: String,
    pub conclusion: String,
    pub condition: SideCondition,
}

impl fmt::Display for ReplayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: condition failed: {}",
            self.rule,
            self.conclusion,
            self.condition.describe()
        )
    }
}

impl DerivationNode {
    pub fn new(rule: impl Into<String>, conclusion: impl Into<String>) -> Self {
        DerivationNode {
            rule: rule.into(),
            conclusion: conclusion.into(),
            side_conditions: Vec::new(),
            premises: Vec::new(),
        }
    }

    pub fn with_condition(mut self, condition: SideCondition) -> Self {
        self.side_conditions.push(condition);
        self
    }

    pub fn with_premise(mut self, node: DerivationNode) -> Self {
        self.premises.push(Premise::Derived { node });
        self
    }

    pub fn with_axiom(mut self, tag: impl Into<String>, statement: impl Into<String>) -> Self {
        self.premises.push(Premise::Axiom {
            tag: tag.into(),
            statement: statement.into(),
        });
        self
    }

    /// Children that are themselves derivations.
    pub fn derived_premises(&self) -> impl Iterator<Item = &DerivationNode> {
        self.premises.iter().filter_map(|p| match p {
            Premise::Derived { node } => Some(node),
            Premise::Axiom { .. } => None,
        })
    }

    /// Every side condition in the tree, depth first.
    pub fn all_conditions(&self) -> Vec<&SideCondition> {
        let mut out: Vec<&SideCondition> = self.side_conditions.iter().collect();
        for child in self.derived_premises() {
            out.extend(child.all_conditions());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self.derived_premises().map(DerivationNode::node_count).sum::<usize>()
    }

    /// Re-check every side condition in the tree. Returns how many were checked.
    pub fn replay(&self) -> Result<usize, ReplayFailure> {
        let mut checked = 0;
        for c in &self.side_conditions {
            if !c.holds() {
                return Err(ReplayFailure {
                    rule: self.rule.clone(),
                    conclusion: self.conclusion.clone(),
                    condition: c.clone(),
                });
            }
            checked += 1;
        }
        for child in self.derived_premises() {
            checked += child.replay()?;
        }
        Ok(checked)
    }

    /// Indented line-oriented rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = writeln!(out, "{pad}[{}] {}", self.rule, self.conclusion);
        for c in &self.side_conditions {
            let status = if c.holds() { "ok" } else { "FAILED" };
            let _ = writeln!(out, "{pad}  check: {} ... {status}", c.describe());
        }
        for p in &self.premises {
            match p {
                Premise::Derived { node } => node.render_into(out, depth + 1),
                Premise::Axiom { tag, statement } => {
                    let _ = writeln!(out, "{pad}  axiom [{tag}] {statement}");
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("derivation trees serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
