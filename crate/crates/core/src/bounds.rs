//! The rule catalog: each (non)embedding result becomes a function from a
//! lens space to [`Bound`] records, and [`report`] combines them into the best
//! known interval for the embedding dimension.
//!
//! A lower bound `dim` means "embedding dimension >= dim" (no embedding in
//! `R^{dim-1}`); an upper bound `dim` means an embedding in `R^dim` exists.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derivation::{DerivationNode, SideCondition};
use crate::dyadic::{alpha, nu};
use crate::inductive::{run_rounds, EngineError, RoundOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("lens space needs e >= 1 and an odd cofactor, got e = {e}, k = {odd_factor}")]
    InvalidSpace { e: u64, odd_factor: u64 },
    #[error("the general position embedding needs m >= 1")]
    HhmpNeedsPositive,
    #[error("odd torsion transfer needs an odd cofactor >= 3, got {0}")]
    NotTransferable(u64),
    #[error("internal inconsistency for {space}: lower {lower} > upper {upper}")]
    Inconsistent {
        space: String,
        lower: Box<Bound>,
        upper: Box<Bound>,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// `L^{2m+1}(2^e * odd_factor)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LensSpace {
    m: u64,
    e: u64,
    odd_factor: u64,
}

impl LensSpace {
    pub fn new(m: u64, e: u64, odd_factor: u64) -> Result<Self, BoundsError> {
        if e == 0 || odd_factor.is_multiple_of(2) {
            return Err(BoundsError::InvalidSpace { e, odd_factor });
        }
        Ok(LensSpace { m, e, odd_factor })
    }

    /// `L^{2m+1}(2^e)`.
    pub fn two_primary(m: u64, e: u64) -> Result<Self, BoundsError> {
        LensSpace::new(m, e, 1)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn odd_factor(&self) -> u64 {
        self.odd_factor
    }

    /// Manifold dimension `2m + 1`.
    pub fn dim(&self) -> u64 {
        2 * self.m + 1
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.odd_factor == 1 {
            write!(f, "L^{}(2^{})", self.dim(), self.e)
        } else {
            write!(f, "L^{}(2^{}*{})", self.dim(), self.e, self.odd_factor)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Smooth,
    Topological,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Smooth => "smooth",
            Category::Topological => "topological",
        }
    }
}

/// How much a bound rests on: proved here, conjectured, or imported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Proven,
    Conjectural,
    ExternalInput,
}

pub mod rule {
    pub const CLOSED_MANIFOLD: &str = "closed-manifold";
    pub const EULER_CLASS: &str = "euler-class-nonembedding";
    pub const EULER_CLASS_UNCONDITIONAL: &str = "euler-class-nonembedding-unconditional";
    pub const POWER_OF_TWO: &str = "power-of-two-optimality";
    pub const CODIMENSION_TWO: &str = "codimension-two";
    pub const LOW_DIMENSIONAL: &str = "low-dimensional";
    pub const HHMP: &str = "hhmp";
    pub const SPIN: &str = "spin-embedding";
    pub const PROJECTIVE_ROUND_TWO: &str = "projective-round-two";
    pub const PROJECTIVE_ROUND_TWO_SHARP: &str = "projective-round-two-sharp";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub direction: Direction,
    pub dim: u64,
    pub category: Category,
    pub rule_id: String,
    pub citation: String,
    pub provenance: Provenance,
    /// Carried over from the 2-primary space by the odd torsion transfer.
    pub transferred: bool,
    /// Whether `R^dim` lies in the metastable range for this manifold.
    pub metastable: bool,
    pub derivation: Option<DerivationNode>,
}

impl Bound {
    pub fn new(
        space: &LensSpace,
        direction: Direction,
        dim: u64,
        rule_id: &str,
        citation: &str,
    ) -> Self {
        Bound {
            direction,
            dim,
            category: Category::Smooth,
            rule_id: rule_id.to_string(),
            citation: citation.to_string(),
            provenance: Provenance::Proven,
            transferred: false,
            metastable: metastable_smoothable(space.dim(), dim),
            derivation: None,
        }
    }

    pub fn with_category(mut self, category: Category) -> Self {
        self.category = category;
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn with_derivation(mut self, node: DerivationNode) -> Self {
        self.derivation = Some(node);
        self
    }

    pub fn is_inductive(&self) -> bool {
        self.rule_id.starts_with("induction:")
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            Direction::Lower => write!(f, ">= {} ({})", self.dim, self.rule_id),
            Direction::Upper => {
                write!(f, "<= {} ({}, {})", self.dim, self.rule_id, self.category.as_str())
            }
        }
    }
}

/// `2 * ambient >= 3 * (manifold_dim + 1)`: there, topological and smooth
/// embeddability agree.
pub fn metastable_smoothable(manifold_dim: u64, ambient_dim: u64) -> bool {
    2 * u128::from(ambient_dim) >= 3 * (u128::from(manifold_dim) + 1)
}

/// `delta(e)` in the second-round closed forms.
pub fn delta_e(e: u64) -> u64 {
    match e {
        0 | 1 => 7,
        2 => 9,
        _ => 10,
    }
}

/// The families of embeddings produced by the two inductive rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Column {
    /// `m = 2ell + 1`, `ell >= 1`: `8ell + 3`.
    RoundOne,
    /// `m = 2ell + 1`, even `ell` with `alpha(ell) >= 2`: `8ell + 2`.
    RoundOneSharp,
    /// `m = 4ell + 3`, `ell >= 2`: `16ell + delta(e)`.
    RoundTwo,
    /// `m = 4ell + 3`, even `ell` with `alpha(ell) >= 2`: `16ell + delta(e) - 1`.
    RoundTwoSharp,
    /// `m = 7`, `e <= 2`: `26`.
    Special,
    /// `m = 7`: `17 + delta(e)`, the ground of the second round.
    RoundTwoBase,
}

impl Column {
    pub const TABLE: [Column; 5] = [
        Column::RoundOne,
        Column::RoundOneSharp,
        Column::RoundTwo,
        Column::RoundTwoSharp,
        Column::Special,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Column::RoundOne => "round-one",
            Column::RoundOneSharp => "round-one-sharp",
            Column::RoundTwo => "round-two",
            Column::RoundTwoSharp => "round-two-sharp",
            Column::Special => "round-two-special",
            Column::RoundTwoBase => "round-two-base",
        }
    }

    /// Manifold parameter `m` for the column's `ell`.
    pub fn manifold_param(self, ell: u64) -> u64 {
        match self {
            Column::RoundOne | Column::RoundOneSharp => 2 * ell + 1,
            Column::RoundTwo | Column::RoundTwoSharp | Column::Special | Column::RoundTwoBase => {
                4 * ell + 3
            }
        }
    }

    /// The `ell` with `manifold_param(ell) = m`, if any.
    pub fn ell_for(self, m: u64) -> Option<u64> {
        match self {
            Column::RoundOne | Column::RoundOneSharp => {
                (m >= 3 && m % 2 == 1).then(|| (m - 1) / 2)
            }
            Column::RoundTwo | Column::RoundTwoSharp => (m >= 7 && m % 4 == 3).then(|| (m - 3) / 4),
            Column::Special | Column::RoundTwoBase => (m == 7).then_some(1),
        }
    }

    pub fn applies(self, ell: u64, e: u64) -> bool {
        let sharp = ell.is_multiple_of(2) && alpha(&ell) >= 2;
        match self {
            Column::RoundOne => ell >= 1,
            Column::RoundOneSharp => sharp,
            Column::RoundTwo => ell >= 2,
            Column::RoundTwoSharp => sharp,
            Column::Special => ell == 1 && e <= 2,
            Column::RoundTwoBase => ell == 1,
        }
    }

    pub fn closed_form(self, ell: u64, e: u64) -> Option<u64> {
        if e == 0 || !self.applies(ell, e) {
            return None;
        }
        Some(match self {
            Column::RoundOne => 8 * ell + 3,
            Column::RoundOneSharp => 8 * ell + 2,
            Column::RoundTwo => 16 * ell + delta_e(e),
            Column::RoundTwoSharp => 16 * ell + delta_e(e) - 1,
            Column::Special => 26,
            Column::RoundTwoBase => 17 + delta_e(e),
        })
    }

    /// Distance from the Euler-class lower bound in the high-torsion range.
    pub fn optimality_gap(self, ell: u64) -> Option<i64> {
        let a = alpha(&ell) as i64;
        match self {
            Column::RoundOne => Some(2 * a - 1),
            Column::RoundOneSharp => Some(2 * a - 2),
            Column::RoundTwo => Some(2 * a),
            Column::RoundTwoSharp => Some(2 * a - 1),
            Column::Special | Column::RoundTwoBase => None,
        }
    }

    /// Whether the `e = 1` entries need the PL projective-space input.
    pub fn needs_external_for(self, e: u64) -> bool {
        e == 1 && matches!(self, Column::RoundTwo | Column::RoundTwoSharp | Column::RoundTwoBase)
    }
}

/// `e >= min(alpha(n) - 6, alpha(n) + 1 - 2^nu(n))`, compared as signed integers.
pub fn theorem_main_condition(n: u64, e: u64) -> bool {
    let Ok(v) = nu(&n) else {
        return false;
    };
    let a = i128::from(alpha(&n));
    let power = if v >= 100 { i128::MAX / 2 } else { 1i128 << v };
    i128::from(e) >= (a - 6).min(a + 1 - power)
}

/// All `n` in `[1, m]` with `n + max(0, alpha(n) - e) = m`.
pub fn theorem_main_candidates(m: u64, e: u64) -> Vec<u64> {
    (1..=m)
        .filter(|&n| n + alpha(&n).saturating_sub(e) == m)
        .collect()
}

fn euler_class_bound(space: &LensSpace, n: u64, rule_id: &str) -> Bound {
    let dim = 4 * n - 2 * alpha(&n) + 2;
    let node = DerivationNode::new(
        rule_id,
        format!("{space} does not embed in R^{}", dim - 1),
    )
    .with_condition(SideCondition::TorsionShift {
        n: n as i64,
        e: space.e as i64,
        m: space.m as i64,
    })
    .with_axiom(
        "euler-class",
        format!(
            "the ku/BP Euler class of (2^N - m - 1)eta (x) xi_2k is nonzero for n = {n}"
        ),
    );
    Bound::new(
        space,
        Direction::Lower,
        dim,
        rule_id,
        "Euler class obstruction in ku (high torsion) and BP (low torsion)",
    )
    .with_derivation(node)
}

/// Nonembeddings in `R^{4n - 2alpha(n) + 1}` for every `n` whose torsion shift
/// lands on `space.m` and which satisfies the torsion condition.
pub fn theorem_main_bounds(space: &LensSpace) -> Vec<Bound> {
    if space.odd_factor != 1 || space.m == 0 {
        return Vec::new();
    }
    theorem_main_candidates(space.m, space.e)
        .into_iter()
        .filter(|&n| theorem_main_condition(n, space.e))
        .map(|n| {
            let mut b = euler_class_bound(space, n, rule::EULER_CLASS);
            if let Some(node) = b.derivation.as_mut() {
                node.side_conditions.push(SideCondition::MainCondition {
                    n: n as i64,
                    e: space.e as i64,
                });
            }
            b
        })
        .collect()
}

/// The same nonembeddings with the torsion condition dropped, for candidates
/// that fail it. Only conjectured.
pub fn theorem_main_conjectural(space: &LensSpace) -> Vec<Bound> {
    if space.odd_factor != 1 || space.m == 0 {
        return Vec::new();
    }
    theorem_main_candidates(space.m, space.e)
        .into_iter()
        .filter(|&n| !theorem_main_condition(n, space.e))
        .map(|n| {
            euler_class_bound(space, n, rule::EULER_CLASS_UNCONDITIONAL)
                .with_provenance(Provenance::Conjectural)
        })
        .collect()
}

/// No embedding in `R^{4m}` when `m` is a power of 2.
pub fn theorem_enepot_bound(space: &LensSpace) -> Option<Bound> {
    let m = space.m;
    if space.odd_factor != 1 || m == 0 || alpha(&m) != 1 {
        return None;
    }
    let mut node = DerivationNode::new(
        rule::POWER_OF_TWO,
        format!("{space} does not embed in R^{}", 4 * m),
    )
    .with_condition(SideCondition::PowerOfTwo { value: m as i64 });
    if m == 1 {
        node = node.with_axiom("hantzsche", "no 3-dimensional lens space embeds in R^4");
    } else {
        node = node
            .with_condition(SideCondition::NormalClassCoefficient {
                n: m as i64,
                j: m as i64 - 1,
            })
            .with_axiom(
                "gysin-splitting",
                "a^2 = Sq^{2m-2}(a) has normal component the dual class in degree 2m-2",
            );
    }
    Some(
        Bound::new(
            space,
            Direction::Lower,
            4 * m + 1,
            rule::POWER_OF_TWO,
            "mod 2 Gysin sequence argument: the general position embedding is optimal when alpha(m) = 1",
        )
        .with_derivation(node),
    )
}

/// No codimension-2 embedding once the dimension is at least 5, save the
/// possible exception `P^7`.
pub fn codim2_bound(space: &LensSpace) -> Option<Bound> {
    let m = space.m;
    if space.odd_factor != 1 || m < 2 || (m == 3 && space.e == 1) {
        return None;
    }
    let node = DerivationNode::new(
        rule::CODIMENSION_TWO,
        format!("{space} does not embed in R^{}", 2 * m + 3),
    )
    .with_condition(SideCondition::AtLeast {
        quantity: "manifold dimension".into(),
        value: space.dim() as i64,
        bound: 5,
    })
    .with_axiom(
        "codimension-two",
        "orientable closed manifolds embedded with codimension 2 are stably parallelizable",
    )
    .with_axiom(
        "stable-parallelizability",
        "P^7 is the only stably parallelizable 2-power torsion lens space of dimension >= 5",
    );
    Some(
        Bound::new(
            space,
            Direction::Lower,
            2 * m + 4,
            rule::CODIMENSION_TWO,
            "trivial Euler class of a codimension-2 normal bundle forces stable parallelizability",
        )
        .with_derivation(node),
    )
}

/// Exact values in dimensions 1 and 3.
pub fn low_dim_exact(space: &LensSpace) -> Option<(Bound, Bound)> {
    let (dim, lower_fact, upper_fact) = match space.m {
        0 => (2, "S^1 does not embed in R^1", "S^1 embeds in R^2"),
        1 => (
            5,
            "no 3-dimensional lens space embeds in R^4",
            "every 3-dimensional lens space embeds smoothly in R^5",
        ),
        _ => return None,
    };
    let citation = "circle and 3-dimensional lens spaces";
    let lower = Bound::new(space, Direction::Lower, dim, rule::LOW_DIMENSIONAL, citation)
        .with_derivation(
            DerivationNode::new(rule::LOW_DIMENSIONAL, format!("{space} does not embed in R^{}", dim - 1))
                .with_axiom("low-dimensional", lower_fact),
        );
    let upper = Bound::new(space, Direction::Upper, dim, rule::LOW_DIMENSIONAL, citation)
        .with_derivation(
            DerivationNode::new(rule::LOW_DIMENSIONAL, format!("{space} embeds in R^{dim}"))
                .with_axiom("low-dimensional", upper_fact),
        );
    Some((lower, upper))
}

/// A closed `(2m+1)`-manifold never embeds in `R^{2m+1}`.
pub fn closed_manifold_bound(space: &LensSpace) -> Bound {
    let dim = space.dim() + 1;
    Bound::new(
        space,
        Direction::Lower,
        dim,
        rule::CLOSED_MANIFOLD,
        "a closed manifold does not embed in its own dimension",
    )
    .with_derivation(
        DerivationNode::new(rule::CLOSED_MANIFOLD, format!("{space} does not embed in R^{}", dim - 1))
            .with_axiom("invariance-of-domain", "closed n-manifolds do not embed in R^n"),
    )
}

/// General position embedding in `R^{4m+1}`.
pub fn hhmp_upper(space: &LensSpace) -> Result<Bound, BoundsError> {
    if space.m == 0 {
        return Err(BoundsError::HhmpNeedsPositive);
    }
    let dim = 4 * space.m + 1;
    Ok(Bound::new(
        space,
        Direction::Upper,
        dim,
        rule::HHMP,
        "Haefliger-Hirsch-Massey-Peterson general embedding",
    )
    .with_derivation(
        DerivationNode::new(rule::HHMP, format!("{space} embeds in R^{dim}"))
            .with_axiom("hhmp", "L^{2m+1}(2^e) embeds in R^{4m+1} for all m >= 1 and e"),
    ))
}

/// Spin manifolds of dimension `7 mod 8`, at least 7, embed in codimension
/// `dim - 2`; the lens space is spin for odd `m`.
pub fn spin_upper(space: &LensSpace) -> Option<Bound> {
    let m = space.m;
    if space.odd_factor != 1 || m < 3 || m % 4 != 3 {
        return None;
    }
    let dim = 4 * m;
    let node = DerivationNode::new(rule::SPIN, format!("{space} embeds in R^{dim}"))
        .with_condition(SideCondition::SpinStructure {
            m: m as i64,
            e: space.e as i64,
        })
        .with_condition(SideCondition::Residue {
            value: space.dim() as i64,
            modulus: 8,
            residue: 7,
        })
        .with_condition(SideCondition::AtLeast {
            quantity: "manifold dimension".into(),
            value: space.dim() as i64,
            bound: 7,
        })
        .with_axiom(
            "spin-embedding",
            "spin manifolds M^d with d = 5, 6, 7 mod 8 and d >= 7 embed in R^{2d-2}",
        );
    Some(
        Bound::new(
            space,
            Direction::Upper,
            dim,
            rule::SPIN,
            "spin manifolds of dimension 7 mod 8 embed in R^{2d-2}",
        )
        .with_derivation(node),
    )
}

/// Category for an embedding in `R^dim`: smooth inside the metastable range,
/// except `L^7 ⊂ R^11`, which stays topological.
pub fn embedding_category(space: &LensSpace, dim: u64) -> Category {
    if metastable_smoothable(space.dim(), dim) && !(space.m == 3 && dim == 11) {
        Category::Smooth
    } else {
        Category::Topological
    }
}

/// Closed forms of the inductive construction, one per applicable column.
pub fn table1_uppers(space: &LensSpace) -> Vec<Bound> {
    if space.odd_factor != 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for column in Column::TABLE {
        let Some(ell) = column.ell_for(space.m) else { continue };
        let Some(dim) = column.closed_form(ell, space.e) else { continue };
        let rule_id = format!("table:{}", column.label());
        let provenance = if column.needs_external_for(space.e) {
            Provenance::ExternalInput
        } else {
            Provenance::Proven
        };
        let node = DerivationNode::new(rule_id.clone(), format!("{space} embeds in R^{dim}"))
            .with_condition(SideCondition::ClosedForm {
                column,
                ell: ell as i64,
                e: space.e as i64,
                dim: dim as i64,
            })
            .with_axiom("inductive-closed-form", "closed form of the inductive join construction");
        out.push(
            Bound::new(space, Direction::Upper, dim, &rule_id, "closed form of the inductive rounds")
                .with_category(embedding_category(space, dim))
                .with_provenance(provenance)
                .with_derivation(node),
        );
    }
    out
}

/// Real projective space embeddings from the second round fed with the PL
/// embedding `P^15 ⊂ R^23`: `P^{8j+7} ⊂ R^{16j+7}` for `j >= 2`, and
/// `R^{16j+6}` for even `j` that is not a power of 2.
pub fn e1_extra_uppers(space: &LensSpace) -> Vec<Bound> {
    let m = space.m;
    if space.e != 1 || space.odd_factor != 1 || m < 11 || m % 4 != 3 {
        return Vec::new();
    }
    let j = (m - 3) / 4;
    let mut out = Vec::new();
    let mut push = |dim: u64, rule_id: &str| {
        let node = DerivationNode::new(rule_id, format!("{space} embeds in R^{dim}"))
            .with_condition(SideCondition::AtLeast { quantity: "j".into(), value: j as i64, bound: 2 })
            .with_axiom("rees", "PL embedding P^15 in R^23 fed into the second round");
        out.push(
            Bound::new(
                space,
                Direction::Upper,
                dim,
                rule_id,
                "second round for projective spaces fed with a PL input",
            )
            .with_category(embedding_category(space, dim))
            .with_provenance(Provenance::ExternalInput)
            .with_derivation(node),
        );
    };
    push(16 * j + 7, rule::PROJECTIVE_ROUND_TWO);
    if j.is_multiple_of(2) && alpha(&j) >= 2 {
        push(16 * j + 6, rule::PROJECTIVE_ROUND_TWO_SHARP);
    }
    out
}

/// The 2-primary space whose embeddings pass to `L^{2m+1}(2^e * k)` inside
/// the metastable range.
pub fn odd_torsion_transfer(space: &LensSpace) -> Result<LensSpace, BoundsError> {
    if space.odd_factor < 3 {
        return Err(BoundsError::NotTransferable(space.odd_factor));
    }
    LensSpace::two_primary(space.m, space.e)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// List the unconditional low-torsion nonembeddings (never used as best).
    pub conjectural: bool,
    /// Admit bounds that rest on inputs imported from outside the catalog.
    pub external: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub space: LensSpace,
    pub lower: Bound,
    pub upper: Bound,
    pub all_bounds: Vec<Bound>,
    pub exact: bool,
}

impl Report {
    pub fn gap(&self) -> u64 {
        self.upper.dim - self.lower.dim
    }

    /// `eff` in `M^D ⊂ R^{2D - eff}` for the best upper bound.
    pub fn efficiency(&self) -> i64 {
        2 * self.space.dim() as i64 - self.upper.dim as i64
    }
}

/// Report builder that caches the inductive rounds per torsion exponent.
#[derive(Debug, Default)]
pub struct Catalog {
    options: ReportOptions,
    rounds: HashMap<u64, (u64, std::collections::BTreeMap<u64, Bound>)>,
}

impl Catalog {
    pub fn new(options: ReportOptions) -> Self {
        Catalog { options, rounds: HashMap::new() }
    }

    pub fn options(&self) -> ReportOptions {
        self.options
    }

    fn inductive_bound(&mut self, e: u64, m: u64) -> Result<Option<Bound>, BoundsError> {
        if m < 3 {
            return Ok(None);
        }
        let stale = self.rounds.get(&e).is_none_or(|(horizon, _)| *horizon < m);
        if stale {
            let previous = self.rounds.get(&e).map_or(0, |(h, _)| *h);
            let horizon = m.max(64).max(2 * previous);
            let opts = RoundOptions { external: self.options.external };
            let map = run_rounds(e, horizon, opts)?;
            self.rounds.insert(e, (horizon, map));
        }
        Ok(self.rounds[&e].1.get(&m).cloned())
    }

    pub fn report(&mut self, space: &LensSpace) -> Result<Report, BoundsError> {
        if space.odd_factor == 1 {
            self.two_primary_report(space)
        } else {
            self.transferred_report(space)
        }
    }

    fn two_primary_report(&mut self, space: &LensSpace) -> Result<Report, BoundsError> {
        let opts = self.options;
        let low = low_dim_exact(space);

        let mut lowers = Vec::new();
        if let Some((l, _)) = &low {
            lowers.push(l.clone());
        }
        lowers.extend(theorem_enepot_bound(space));
        lowers.extend(theorem_main_bounds(space));
        lowers.extend(codim2_bound(space));
        lowers.push(closed_manifold_bound(space));

        let mut uppers = Vec::new();
        if let Some((_, u)) = &low {
            uppers.push(u.clone());
        }
        uppers.extend(self.inductive_bound(space.e, space.m)?);
        uppers.extend(table1_uppers(space));
        uppers.extend(spin_upper(space));
        uppers.extend(e1_extra_uppers(space));
        if space.m >= 1 {
            uppers.push(hhmp_upper(space)?);
        }
        if !opts.external {
            uppers.retain(|b| b.provenance != Provenance::ExternalInput);
        }

        let conjectural = if opts.conjectural {
            theorem_main_conjectural(space)
        } else {
            Vec::new()
        };
        assemble(*space, lowers, uppers, conjectural)
    }

    fn transferred_report(&mut self, space: &LensSpace) -> Result<Report, BoundsError> {
        let base = odd_torsion_transfer(space)?;
        let base_report = self.two_primary_report(&base)?;

        let low = low_dim_exact(space);
        let mut lowers = Vec::new();
        if let Some((l, _)) = &low {
            lowers.push(l.clone());
        }
        lowers.push(closed_manifold_bound(space));

        let mut uppers = Vec::new();
        if let Some((_, u)) = &low {
            uppers.push(u.clone());
        }
        for b in base_report
            .all_bounds
            .iter()
            .filter(|b| b.direction == Direction::Upper && b.metastable && b.rule_id != rule::LOW_DIMENSIONAL)
        {
            let mut t = b.clone();
            t.transferred = true;
            t.category = Category::Smooth;
            t.citation = format!("{} (transferred from {base})", b.citation);
            let premise = t.derivation.take();
            let mut node = DerivationNode::new(
                "odd-torsion-transfer",
                format!("{space} embeds in R^{}", b.dim),
            )
            .with_condition(SideCondition::Metastable {
                manifold_dim: space.dim() as i64,
                ambient: b.dim as i64,
            })
            .with_axiom(
                "covering-projection",
                "inside the metastable range embeddings of L(2^e) pass to L(2^e k) for odd k",
            );
            if let Some(p) = premise {
                node = node.with_premise(p);
            }
            t.derivation = Some(node);
            uppers.push(t);
        }
        assemble(*space, lowers, uppers, Vec::new())
    }
}

fn assemble(
    space: LensSpace,
    lowers: Vec<Bound>,
    uppers: Vec<Bound>,
    conjectural: Vec<Bound>,
) -> Result<Report, BoundsError> {
    // Ties keep the earliest entry, so list order encodes preference.
    let lower = lowers
        .iter()
        .fold(None::<&Bound>, |best, b| match best {
            Some(cur) if cur.dim >= b.dim => Some(cur),
            _ => Some(b),
        })
        .cloned()
        .expect("the closed-manifold bound always applies");
    let upper = uppers
        .iter()
        .fold(None::<&Bound>, |best, b| match best {
            Some(cur) if cur.dim <= b.dim => Some(cur),
            _ => Some(b),
        })
        .cloned()
        .expect("every lens space has an upper bound");
    if lower.dim > upper.dim {
        return Err(BoundsError::Inconsistent {
            space: space.to_string(),
            lower: Box::new(lower),
            upper: Box::new(upper),
        });
    }
    let exact = lower.dim == upper.dim;
    let mut all_bounds = lowers;
    all_bounds.extend(conjectural);
    all_bounds.extend(uppers);
    Ok(Report { space, lower, upper, all_bounds, exact })
}

/// Best bounds for one space.
pub fn report(space: &LensSpace, options: ReportOptions) -> Result<Report, BoundsError> {
    Catalog::new(options).report(space)
}
