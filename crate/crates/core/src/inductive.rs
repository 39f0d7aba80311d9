//! The join construction: from `L_k ⊂ R^alpha` with `sigma` normal sections,
//! `L_j ⊂ R^beta` and `(k+1) eta_j ⊂ R^{sigma+beta}`, build
//! `L_{k+j+1} ⊂ R^{alpha+beta+1}`. [`run_rounds`] replays the two rounds
//! (`k = 1` and `k = 3`) and checks each output against its closed form.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bounds::{delta_e, embedding_category, Bound, Category, Column, Direction, LensSpace, Provenance};
use crate::derivation::{DerivationNode, SideCondition};
use crate::dyadic::{alpha, nu, radon_pair};
use crate::lifting::{encaje_gate, feeding_params_with_lambda, lambda_rule, LiftingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("the rounds need max_m >= 3, got {0}")]
    RangeTooSmall(u64),
    #[error("torsion exponent must be at least 1")]
    ZeroTorsion,
    #[error("{column} output at m = {m}, e = {e} is {produced:?}, closed form says {expected:?}")]
    ClosedFormMismatch {
        m: u64,
        e: u64,
        column: &'static str,
        produced: Option<u64>,
        expected: Option<u64>,
    },
    #[error("raised ambient at m = {m}, e = {e} is {beta}, expected previous output + 1 = {expected}")]
    ShiftMismatch { m: u64, e: u64, beta: u64, expected: u64 },
    #[error(transparent)]
    Lifting(#[from] LiftingError),
}

/// Number of everywhere independent normal sections of `L_{k,e} ⊂ R^{4k+2}`.
pub fn sigma_table(k: u64, e: u64) -> Option<u64> {
    match (k, e) {
        (_, 0) => None,
        (1, _) => Some(3),
        (3, 1) => Some(7),
        (3, 2) => Some(5),
        (3, _) => Some(4),
        _ => None,
    }
}

/// `2^{mu+1} - 1 <= alpha(ell) + mu + kappa(mu)` with `kappa(1) = 1` and
/// `kappa(mu) = 4` for `mu >= 2`. False for `mu = 0`.
pub fn milgram_condition(mu: u64, ell: u64) -> bool {
    if mu == 0 {
        return false;
    }
    if mu >= 62 {
        return false;
    }
    let kappa = if mu == 1 { 1 } else { 4 };
    (1u64 << (mu + 1)) - 1 <= alpha(&ell) + mu + kappa
}

/// `L_{k,e} ⊂ R^ambient` with `sigma` independent normal sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionedEmbedding {
    pub k: u64,
    pub e: u64,
    pub ambient: u64,
    pub sigma: u64,
    pub derivation: DerivationNode,
}

/// The tabulated embeddings `L_{k,e} ⊂ R^{4k+2}`.
pub fn igniting_embedding(k: u64, e: u64) -> Option<SectionedEmbedding> {
    let sigma = sigma_table(k, e)?;
    let ambient = 4 * k + 2;
    let derivation = DerivationNode::new(
        "igniting-embedding",
        format!("L_{{{k},{e}}} ⊂ R^{ambient} with {sigma} normal sections"),
    )
    .with_condition(SideCondition::SigmaTable { k: k as i64, e: e as i64, sigma: sigma as i64 })
    .with_axiom("normal-sections", "tabulated section counts of the standard embeddings in R^{4k+2}");
    Some(SectionedEmbedding { k, e, ambient, sigma, derivation })
}

/// `L^3 ⊂ R^5` with trivial normal bundle, the start of the first round.
fn ground_embedding(e: u64) -> SectionedEmbedding {
    let derivation = DerivationNode::new(
        "ground-embedding",
        format!("L_{{1,{e}}} ⊂ R^5 with 2 normal sections"),
    )
    .with_axiom("low-dimensional", "every 3-dimensional lens space embeds smoothly in R^5")
    .with_axiom("trivial-normal-bundle", "an orientable codimension-2 normal bundle with trivial Euler class is trivial");
    SectionedEmbedding { k: 1, e, ambient: 5, sigma: 2, derivation }
}

/// Whitney multiple `multiple * eta_{base_m,e}` with total space in `R^ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleEmbedding {
    pub multiple: u64,
    pub base_m: u64,
    pub e: u64,
    pub ambient: u64,
    pub lambda: u64,
    pub derivation: DerivationNode,
}

/// The `4i + 3` embedding and, for even `ell` with `alpha(ell) >= 2`, the
/// sharpened `4i + 2` one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedingEmbeddings {
    pub standard: BundleEmbedding,
    pub sharpened: Option<BundleEmbedding>,
}

fn lifting_certificate(mu: u64, ell: u64, e: u64, lambda: u64) -> DerivationNode {
    let scale = 1u64 << mu;
    let level = 2 * scale * (ell - 1) - lambda;
    let mut node = DerivationNode::new(
        "normal-bundle-lifting",
        format!(
            "-{}H over L_{{{},{e}}} lifts to BO({level})",
            scale * (ell + 1),
            scale * ell - 1
        ),
    );
    if lambda == 1 {
        node = node.with_condition(SideCondition::Lambda { ell: ell as i64, lambda: 1 });
        if mu == 2 {
            node = node.with_condition(SideCondition::Dm2Lifting { ell: ell as i64 });
        } else {
            node = node.with_axiom(
                "connectivity-lifting",
                "over L_{2ell-1} the first obstruction to a BO(4ell-5) lift vanishes when alpha(ell) >= 2",
            );
        }
        return node;
    }
    if ell == 1 {
        if mu == 2 {
            node = node.with_condition(SideCondition::AtMost {
                quantity: "e".into(),
                value: e as i64,
                bound: 2,
            });
        }
        return node.with_axiom("stable-triviality", "2^{mu+1} eta is stably trivial over L_{2^mu - 1}");
    }
    if alpha(&ell) >= 2 {
        if mu == 2 {
            node = node.with_condition(SideCondition::Dm2Lifting { ell: ell as i64 });
        } else {
            node = node.with_condition(SideCondition::AtLeast {
                quantity: "alpha(ell)".into(),
                value: alpha(&ell) as i64,
                bound: 2,
            });
        }
        return node.with_axiom("carry-lifting", "a lift one level lower also gives the stated level");
    }
    node.with_condition(SideCondition::PowerOfTwo { value: ell as i64 })
        .with_axiom("quaternionic-lifting", "for ell a power of 2 the bundle comes from quaternionic projective space")
}

fn bundle_embedding(mu: u64, ell: u64, e: u64, lambda: u64) -> Result<Option<BundleEmbedding>, EngineError> {
    let inst = feeding_params_with_lambda(mu, ell, lambda)?;
    let Some(dim) = encaje_gate(&inst) else {
        return Ok(None);
    };
    let scale = 1u64 << mu;
    let i = inst.n;
    let derivation = DerivationNode::new(
        "feeding-bundle",
        format!("{scale} eta_{{{i},{e}}} ⊂ R^{dim}"),
    )
    .with_condition(SideCondition::Encaje {
        n: inst.n as i64,
        m: inst.m as i64,
        d: inst.d as i64,
        dim: dim as i64,
    })
    .with_condition(SideCondition::Milgram { mu: mu as i64, ell: ell as i64 })
    .with_premise(lifting_certificate(mu, ell, e, lambda));
    Ok(Some(BundleEmbedding { multiple: scale, base_m: i, e, ambient: dim, lambda, derivation }))
}

/// `2^mu eta_{i,e} ⊂ R^{4i+3}` with `i = 2^mu ell - 1`, plus the sharpened
/// `R^{4i+2}` when `lambda(ell) = 1`. Absent for `mu = 2`, `ell = 1`, `e > 2`.
pub fn feeding_embedding(mu: u64, ell: u64, e: u64) -> Result<Option<FeedingEmbeddings>, EngineError> {
    if e == 0 {
        return Err(EngineError::ZeroTorsion);
    }
    // validates mu and ell
    feeding_params_with_lambda(mu, ell, 0)?;
    if mu == 2 && ell == 1 && e > 2 {
        return Ok(None);
    }
    let Some(standard) = bundle_embedding(mu, ell, e, 0)? else {
        return Ok(None);
    };
    let sharpened = if lambda_rule(ell) == 1 {
        bundle_embedding(mu, ell, e, 1)?
    } else {
        None
    };
    Ok(Some(FeedingEmbeddings { standard, sharpened }))
}

/// `L_{m,e} ⊂ R^dim` together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensEmbedding {
    pub m: u64,
    pub e: u64,
    pub dim: u64,
    pub category: Category,
    /// Rests on an input imported from outside the catalog.
    pub external: bool,
    pub derivation: DerivationNode,
}

impl LensEmbedding {
    /// The same embedding followed by `R^dim ⊂ R^{dim+shift}`.
    pub fn raised(&self, shift: u64) -> LensEmbedding {
        if shift == 0 {
            return self.clone();
        }
        let dim = self.dim + shift;
        let derivation = DerivationNode::new(
            "raise-ambient",
            format!("L_{{{},{}}} ⊂ R^{dim}", self.m, self.e),
        )
        .with_condition(SideCondition::Shift {
            previous: self.dim as i64,
            shift: shift as i64,
            value: dim as i64,
        })
        .with_premise(self.derivation.clone());
        LensEmbedding { dim, derivation, category: Category::Topological, ..self.clone() }
    }
}

/// The gate that lets the join go through, if any.
pub fn step_gate(k: u64, j: u64, sigma: u64, beta: u64) -> Option<SideCondition> {
    let total = sigma + beta;
    let edge = 4 * j + 2;
    if total > edge {
        return Some(SideCondition::StrictGate {
            sigma: sigma as i64,
            beta: beta as i64,
            j: j as i64,
        });
    }
    if total < edge {
        return None;
    }
    let (a, b) = radon_pair(nu(&(2 * j + 2)).expect("2j + 2 > 0"));
    (2 * k + 3 <= 8 * a + (1 << b)).then_some(SideCondition::RadonGate {
        sigma: sigma as i64,
        beta: beta as i64,
        j: j as i64,
        k: k as i64,
        a: a as i64,
        b: b as i64,
    })
}

/// One join from bare witnesses: `L_k ⊂ R^alpha_dim` with `sigma` sections,
/// `L_j ⊂ R^beta_dim`, and `(k+1) eta_j ⊂ R^{sigma+beta_dim}` assumed.
pub fn inductive_step(
    k: u64,
    j: u64,
    e: u64,
    alpha_dim: u64,
    beta_dim: u64,
    sigma: u64,
) -> Option<Bound> {
    let gate = step_gate(k, j, sigma, beta_dim)?;
    let m = k + j + 1;
    let space = LensSpace::two_primary(m, e).ok()?;
    let dim = alpha_dim + beta_dim + 1;
    let node = DerivationNode::new("join-step", format!("{space} embeds in R^{dim}"))
        .with_condition(gate)
        .with_condition(SideCondition::JoinDimension {
            alpha: alpha_dim as i64,
            beta: beta_dim as i64,
            dim: dim as i64,
        })
        .with_axiom("witness", format!("L_{{{k},{e}}} ⊂ R^{alpha_dim} with {sigma} normal sections"))
        .with_axiom("witness", format!("L_{{{j},{e}}} ⊂ R^{beta_dim}"))
        .with_axiom("witness", format!("{} eta_{{{j},{e}}} ⊂ R^{}", k + 1, sigma + beta_dim));
    Some(
        Bound::new(&space, Direction::Upper, dim, "join-step", "join of two lens space embeddings")
            .with_category(Category::Topological)
            .with_derivation(node),
    )
}

/// The join with every premise checked, including that the feeding bundle
/// fits.
pub fn join(
    ignition: &SectionedEmbedding,
    beta: &LensEmbedding,
    feeding: &BundleEmbedding,
) -> Option<LensEmbedding> {
    let (k, j, e) = (ignition.k, beta.m, beta.e);
    if ignition.e != e || feeding.e != e || feeding.base_m != j {
        return None;
    }
    let fits = SideCondition::FeedingFits {
        multiple: feeding.multiple as i64,
        k: k as i64,
        ambient: feeding.ambient as i64,
        sigma: ignition.sigma as i64,
        beta: beta.dim as i64,
    };
    if !fits.holds() {
        return None;
    }
    let gate = step_gate(k, j, ignition.sigma, beta.dim)?;
    let m = k + j + 1;
    let dim = ignition.ambient + beta.dim + 1;
    let derivation = DerivationNode::new("join-step", format!("L_{{{m},{e}}} ⊂ R^{dim}"))
        .with_condition(gate)
        .with_condition(fits)
        .with_condition(SideCondition::JoinDimension {
            alpha: ignition.ambient as i64,
            beta: beta.dim as i64,
            dim: dim as i64,
        })
        .with_premise(ignition.derivation.clone())
        .with_premise(beta.derivation.clone())
        .with_premise(feeding.derivation.clone());
    Some(LensEmbedding {
        m,
        e,
        dim,
        category: Category::Topological,
        external: beta.external,
        derivation,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoundOptions {
    /// Run the `e = 1` second round from the PL input `P^15 ⊂ R^23`.
    pub external: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundEntry {
    pub column: Column,
    pub ell: u64,
    pub embedding: LensEmbedding,
}

impl RoundEntry {
    pub fn to_bound(&self) -> Bound {
        let emb = &self.embedding;
        let space = LensSpace::two_primary(emb.m, emb.e).expect("e >= 1 in every round");
        let round = match self.column {
            Column::RoundOne | Column::RoundOneSharp => "first round, k = 1",
            _ => "second round, k = 3",
        };
        let provenance = if emb.external { Provenance::ExternalInput } else { Provenance::Proven };
        let mut bound = Bound::new(
            &space,
            Direction::Upper,
            emb.dim,
            &format!("induction:{}", self.column.label()),
            &format!("inductive join construction ({round})"),
        )
        .with_category(emb.category)
        .with_provenance(provenance)
        .with_derivation(emb.derivation.clone());
        bound.transferred = false;
        bound
    }
}

struct Runner {
    e: u64,
    horizon: u64,
    entries: Vec<RoundEntry>,
}

impl Runner {
    fn record(&mut self, column: Column, ell: u64, mut emb: LensEmbedding) -> Result<LensEmbedding, EngineError> {
        let expected = column.closed_form(ell, self.e);
        if expected != Some(emb.dim) || emb.m != column.manifold_param(ell) {
            return Err(EngineError::ClosedFormMismatch {
                m: column.manifold_param(ell),
                e: self.e,
                column: column.label(),
                produced: Some(emb.dim),
                expected,
            });
        }
        let space = LensSpace::two_primary(emb.m, self.e).expect("e >= 1");
        emb.category = embedding_category(&space, emb.dim);
        emb.derivation.side_conditions.push(SideCondition::ClosedForm {
            column,
            ell: ell as i64,
            e: self.e as i64,
            dim: emb.dim as i64,
        });
        if emb.category == Category::Smooth {
            emb.derivation.side_conditions.push(SideCondition::Metastable {
                manifold_dim: space.dim() as i64,
                ambient: emb.dim as i64,
            });
        }
        self.entries.push(RoundEntry { column, ell, embedding: emb.clone() });
        Ok(emb)
    }

    fn missing(&self, column: Column, ell: u64) -> EngineError {
        EngineError::ClosedFormMismatch {
            m: column.manifold_param(ell),
            e: self.e,
            column: column.label(),
            produced: None,
            expected: column.closed_form(ell, self.e),
        }
    }

    fn check_shift(&self, beta: &LensEmbedding, expected: u64) -> Result<(), EngineError> {
        if beta.dim != expected {
            return Err(EngineError::ShiftMismatch { m: beta.m, e: self.e, beta: beta.dim, expected });
        }
        Ok(())
    }

    /// `L_{2ell+1} ⊂ R^{8ell+3}` and the sharpened `R^{8ell+2}`.
    fn round_one(&mut self) -> Result<Vec<LensEmbedding>, EngineError> {
        let e = self.e;
        let mut col2: Vec<LensEmbedding> = Vec::new();
        let ground = ground_embedding(e);
        let low = LensEmbedding {
            m: 1,
            e,
            dim: 5,
            category: Category::Smooth,
            external: false,
            derivation: DerivationNode::new("low-dimensional", format!("L_{{1,{e}}} ⊂ R^5"))
                .with_axiom("low-dimensional", "every 3-dimensional lens space embeds smoothly in R^5"),
        };
        let feed = feeding_embedding(1, 1, e)?.ok_or_else(|| self.missing(Column::RoundOne, 1))?;
        let base = join(&ground, &low, &feed.standard).ok_or_else(|| self.missing(Column::RoundOne, 1))?;
        col2.push(self.record(Column::RoundOne, 1, base)?);

        let ignition = igniting_embedding(1, e).expect("sigma(1, e) is tabulated");
        let mut ell = 2;
        while Column::RoundOne.manifold_param(ell) <= self.horizon {
            let prev = &col2[(ell - 2) as usize];
            let feed = feeding_embedding(1, ell, e)?.ok_or_else(|| self.missing(Column::RoundOne, ell))?;

            let beta = prev.raised(1);
            self.check_shift(&beta, Column::RoundOne.closed_form(ell - 1, e).unwrap() + 1)?;
            let next = join(&ignition, &beta, &feed.standard).ok_or_else(|| self.missing(Column::RoundOne, ell))?;
            let next = self.record(Column::RoundOne, ell, next)?;

            if Column::RoundOneSharp.applies(ell, e) {
                let sharp_feed = feed.sharpened.as_ref().ok_or_else(|| self.missing(Column::RoundOneSharp, ell))?;
                let sharp = join(&ignition, prev, sharp_feed)
                    .ok_or_else(|| self.missing(Column::RoundOneSharp, ell))?;
                self.record(Column::RoundOneSharp, ell, sharp)?;
            }
            col2.push(next);
            ell += 1;
        }
        Ok(col2)
    }

    /// The special `L_7 ⊂ R^26` for `e <= 2`.
    fn special(&mut self, col2: &[LensEmbedding]) -> Result<Option<LensEmbedding>, EngineError> {
        let e = self.e;
        if e > 2 {
            return Ok(None);
        }
        let ignition = igniting_embedding(3, e).expect("sigma(3, e) is tabulated");
        let feed = feeding_embedding(2, 1, e)?.ok_or_else(|| self.missing(Column::Special, 1))?;
        let out = join(&ignition, &col2[0], &feed.standard).ok_or_else(|| self.missing(Column::Special, 1))?;
        Ok(Some(self.record(Column::Special, 1, out)?))
    }

    /// `L_7 ⊂ R^{17 + delta(e)}`.
    fn round_two_base(
        &mut self,
        col2: &[LensEmbedding],
        special: Option<&LensEmbedding>,
        external: bool,
    ) -> Result<Option<LensEmbedding>, EngineError> {
        let e = self.e;
        let base = match e {
            1 => {
                if !external {
                    return Ok(None);
                }
                let pl = LensEmbedding {
                    m: 7,
                    e,
                    dim: 23,
                    category: Category::Topological,
                    external: true,
                    derivation: DerivationNode::new("projective-pl-input", "L_{7,1} ⊂ R^23")
                        .with_axiom("rees", "P^15 admits a PL embedding in R^23"),
                };
                pl.raised(1)
            }
            2 => special.cloned().ok_or_else(|| self.missing(Column::RoundTwoBase, 1))?,
            _ => col2.get(2).cloned().ok_or_else(|| self.missing(Column::RoundTwoBase, 1))?,
        };
        let mut base = self.record(Column::RoundTwoBase, 1, base)?;
        base.external |= e == 1;
        Ok(Some(base))
    }

    /// `L_{4ell+3} ⊂ R^{16ell + delta(e)}` and the sharpened `R^{16ell + delta(e) - 1}`.
    fn round_two(&mut self, base: LensEmbedding) -> Result<(), EngineError> {
        let e = self.e;
        let ignition = igniting_embedding(3, e).expect("sigma(3, e) is tabulated");
        debug_assert_eq!(ignition.sigma + delta_e(e), 14);
        let mut prev = base;
        let mut ell = 2;
        while Column::RoundTwo.manifold_param(ell) <= self.horizon {
            let feed = feeding_embedding(2, ell, e)?.ok_or_else(|| self.missing(Column::RoundTwo, ell))?;
            let beta = if ell == 2 {
                prev.clone()
            } else {
                let raised = prev.raised(1);
                self.check_shift(&raised, Column::RoundTwo.closed_form(ell - 1, e).unwrap() + 1)?;
                raised
            };
            let next = join(&ignition, &beta, &feed.standard).ok_or_else(|| self.missing(Column::RoundTwo, ell))?;
            let next = self.record(Column::RoundTwo, ell, next)?;

            if Column::RoundTwoSharp.applies(ell, e) {
                let sharp_feed = feed.sharpened.as_ref().ok_or_else(|| self.missing(Column::RoundTwoSharp, ell))?;
                let sharp = join(&ignition, &prev, sharp_feed)
                    .ok_or_else(|| self.missing(Column::RoundTwoSharp, ell))?;
                self.record(Column::RoundTwoSharp, ell, sharp)?;
            }
            prev = next;
            ell += 1;
        }
        Ok(())
    }
}

/// Every embedding produced by the rounds for `m <= max_m`, in production
/// order, including the ground `L_7 ⊂ R^{17 + delta(e)}` of the second round.
pub fn run_rounds_detailed(e: u64, max_m: u64, opts: RoundOptions) -> Result<Vec<RoundEntry>, EngineError> {
    if e == 0 {
        return Err(EngineError::ZeroTorsion);
    }
    if max_m < 3 {
        return Err(EngineError::RangeTooSmall(max_m));
    }
    let mut runner = Runner { e, horizon: max_m.max(7), entries: Vec::new() };
    let col2 = runner.round_one()?;
    let special = runner.special(&col2)?;
    if let Some(base) = runner.round_two_base(&col2, special.as_ref(), opts.external)? {
        runner.round_two(base)?;
    }
    let mut entries = runner.entries;
    entries.retain(|entry| entry.embedding.m <= max_m);
    Ok(entries)
}

/// Best inductive upper bound per `m <= max_m`.
pub fn run_rounds(e: u64, max_m: u64, opts: RoundOptions) -> Result<BTreeMap<u64, Bound>, EngineError> {
    let mut out: BTreeMap<u64, Bound> = BTreeMap::new();
    for entry in run_rounds_detailed(e, max_m, opts)? {
        // the ground of the second round is an input, not a new bound
        if entry.column == Column::RoundTwoBase {
            continue;
        }
        let bound = entry.to_bound();
        match out.get(&entry.embedding.m) {
            Some(cur) if cur.dim <= bound.dim => {}
            _ => {
                out.insert(entry.embedding.m, bound);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_table(3, 2), Some(5));
        assert_eq!(sigma_table(1, 9), Some(3));
        assert_eq!(sigma_table(7, 2), None);
        assert_eq!(sigma_table(3, 1), Some(7));
        assert_eq!(sigma_table(3, 8), Some(4));
    }

    #[test]
    fn milgram_examples() {
        assert!(milgram_condition(1, 5));
        assert!(milgram_condition(2, 1));
        assert!(!milgram_condition(3, 7));
        assert!(!milgram_condition(0, 7));
    }

    #[test]
    fn step_examples() {
        let b = inductive_step(1, 1, 4, 5, 5, 2).unwrap();
        assert_eq!(b.dim, 11);
        let node = b.derivation.unwrap();
        assert!(matches!(node.side_conditions[0], SideCondition::StrictGate { .. }));
        assert!(node.replay().is_ok());

        let b = inductive_step(3, 3, 2, 14, 11, 5).unwrap();
        assert_eq!(b.dim, 26);

        // sigma + beta = 4j + 2 with nu(2j + 2) = 3: (a, b) = (0, 3), bound 8
        let j = 3;
        assert!(inductive_step(2, j, 1, 10, 9, 5).is_some());
        assert!(inductive_step(3, j, 1, 14, 9, 5).is_none());
        assert!(inductive_step(1, j, 1, 6, 8, 5).is_none());
    }

    #[test]
    fn feeding_examples() {
        let f = feeding_embedding(1, 1, 3).unwrap().unwrap();
        assert_eq!((f.standard.multiple, f.standard.base_m, f.standard.ambient), (2, 1, 7));
        assert!(f.sharpened.is_none());
        assert!(feeding_embedding(2, 1, 3).unwrap().is_none());
        assert!(feeding_embedding(2, 1, 2).unwrap().is_some());
        let f = feeding_embedding(2, 6, 2).unwrap().unwrap();
        assert_eq!(f.standard.ambient, 95);
        assert_eq!(f.sharpened.as_ref().unwrap().ambient, 94);
        assert!(f.sharpened.unwrap().derivation.replay().is_ok());
        assert!(feeding_embedding(3, 2, 2).is_err());
    }

    #[test]
    fn round_examples() {
        let r3 = run_rounds(3, 11, RoundOptions::default()).unwrap();
        assert_eq!(r3[&11].dim, 42);
        assert_eq!(r3[&7].dim, 27);
        let r2 = run_rounds(2, 7, RoundOptions::default()).unwrap();
        assert_eq!(r2[&7].dim, 26);
        let r1 = run_rounds(1, 5, RoundOptions::default()).unwrap();
        assert_eq!(r1[&5].dim, 19);
        assert_eq!(r1[&3].category, Category::Topological);
        assert!(run_rounds(1, 2, RoundOptions::default()).is_err());
    }

    #[test]
    fn projective_round_two_needs_external() {
        let plain = run_rounds(1, 40, RoundOptions::default()).unwrap();
        assert_eq!(plain[&11].dim, 43);
        let ext = run_rounds(1, 40, RoundOptions { external: true }).unwrap();
        assert_eq!(ext[&11].dim, 39);
        assert_eq!(ext[&11].provenance, Provenance::ExternalInput);
        assert_eq!(ext[&27].dim, 102);
    }

    #[test]
    fn rounds_match_closed_forms() {
        for e in 1..=8 {
            let entries = run_rounds_detailed(e, 403, RoundOptions { external: true }).unwrap();
            for entry in &entries {
                assert_eq!(Some(entry.embedding.dim), entry.column.closed_form(entry.ell, e));
                assert!(entry.embedding.derivation.replay().is_ok());
            }
            let count = |c: Column| entries.iter().filter(|x| x.column == c).count();
            assert_eq!(count(Column::RoundOne), 201);
            assert_eq!(count(Column::RoundTwo), 99);
            assert_eq!(count(Column::Special), usize::from(e <= 2));
            assert_eq!(count(Column::RoundTwoBase), 1);
        }
    }
}
