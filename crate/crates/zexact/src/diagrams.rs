//! Commutative-diagram infrastructure: canonical pullbacks with mediator
//! construction, pullback recognition, kernel transport along pullback
//! squares, and pointwise commutativity checking for named diagrams.
//!
//! Pullback carriers are canonical pair-subsets of the product in
//! lexicographic order, so "unique up to iso" objects compare structurally.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::json;

use crate::algebra::{induced_subalgebra, product, AlgebraError, Element, FiniteAlgebra};
use crate::hom::{corestrict, HomError, Homomorphism};
use crate::verdict::{Clause, Verdict};
use crate::zcore::{z_map, zkernel};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("arrows do not share a codomain")]
    CodomainMismatch,
    #[error("square does not commute at element {element}")]
    NotCommuting { element: Element },
    #[error("mediator legs do not share a domain")]
    DomainMismatch,
    #[error("square endpoints do not match")]
    Endpoints,
    #[error("unknown object `{0}` in diagram")]
    UnknownObject(String),
    #[error("unknown arrow `{0}` in diagram")]
    UnknownArrow(String),
    #[error("arrow `{name}` does not match its declared endpoints")]
    ArrowEndpoints { name: String },
    #[error("relation {relation}: paths do not compose")]
    PathComposition { relation: usize },
    #[error("relation {relation}: both sides are empty, endpoints cannot be inferred")]
    EmptyRelation { relation: usize },
    #[error("relation {relation}: identity path needs equal endpoints")]
    IdentityEndpoints { relation: usize },
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A commuting square, oriented
///
/// ```text
///         f
///     A -----> B
///   h |        | l
///     v        v
///     C -----> D
///         g
/// ```
#[derive(Debug, Clone)]
pub struct Square {
    f: Homomorphism,
    l: Homomorphism,
    h: Homomorphism,
    g: Homomorphism,
}

impl Square {
    pub fn new(
        f: Homomorphism,
        l: Homomorphism,
        h: Homomorphism,
        g: Homomorphism,
    ) -> Result<Self, DiagramError> {
        if f.source() != h.source()
            || f.target() != l.source()
            || h.target() != g.source()
            || l.target() != g.target()
        {
            return Err(DiagramError::Endpoints);
        }
        for e in 0..f.source().size() {
            if l.apply(f.apply(e)) != g.apply(h.apply(e)) {
                return Err(DiagramError::NotCommuting { element: e });
            }
        }
        Ok(Square { f, l, h, g })
    }

    pub fn f(&self) -> &Homomorphism {
        &self.f
    }

    pub fn l(&self) -> &Homomorphism {
        &self.l
    }

    pub fn h(&self) -> &Homomorphism {
        &self.h
    }

    pub fn g(&self) -> &Homomorphism {
        &self.g
    }
}

/// Pairs `(c, b)` with `g(c) = l(b)`, in lexicographic order.
pub fn pullback_pairs(
    g: &Homomorphism,
    l: &Homomorphism,
) -> Result<Vec<(Element, Element)>, DiagramError> {
    if g.target() != l.target() {
        return Err(DiagramError::CodomainMismatch);
    }
    let mut pairs = Vec::new();
    for c in 0..g.source().size() {
        for b in 0..l.source().size() {
            if g.apply(c) == l.apply(b) {
                pairs.push((c, b));
            }
        }
    }
    Ok(pairs)
}

/// A canonical pullback of a cospan `g: C -> D <- B : l`, realized as the
/// agreement subalgebra of `C × B`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub object: Arc<FiniteAlgebra>,
    /// Projection to the domain of `g`.
    pub proj_g: Homomorphism,
    /// Projection to the domain of `l`.
    pub proj_l: Homomorphism,
    pairs: Vec<(Element, Element)>,
    g: Homomorphism,
    l: Homomorphism,
}

impl Pullback {
    pub fn pairs(&self) -> &[(Element, Element)] {
        &self.pairs
    }

    /// The unique mediating arrow `<x, y>` for a commuting outer square
    /// `g ∘ x = l ∘ y`.
    pub fn mediate(
        &self,
        x: &Homomorphism,
        y: &Homomorphism,
    ) -> Result<Homomorphism, DiagramError> {
        if x.source() != y.source() {
            return Err(DiagramError::DomainMismatch);
        }
        if x.target() != self.g.source() || y.target() != self.l.source() {
            return Err(DiagramError::Endpoints);
        }
        for e in 0..x.source().size() {
            if self.g.apply(x.apply(e)) != self.l.apply(y.apply(e)) {
                return Err(DiagramError::NotCommuting { element: e });
            }
        }
        let map: Vec<Element> = (0..x.source().size())
            .map(|e| {
                self.pairs
                    .binary_search(&(x.apply(e), y.apply(e)))
                    .expect("commuting pair lies in the pullback carrier")
            })
            .collect();
        Ok(
            Homomorphism::new(x.source().clone(), self.object.clone(), map)
                .expect("mediator into a pullback is a homomorphism"),
        )
    }
}

pub fn pullback(g: &Homomorphism, l: &Homomorphism) -> Result<Pullback, DiagramError> {
    let pairs = pullback_pairs(g, l)?;
    let prod = product(g.source(), l.source())?;
    let nb = l.source().size();
    let subset: Vec<Element> = pairs.iter().map(|&(c, b)| c * nb + b).collect();
    let sub = induced_subalgebra(&prod.algebra, &subset)
        .expect("the agreement subset of a cospan is a subalgebra");
    let proj_g = corestrict(&sub.inclusion.then(&prod.proj_left).unwrap(), &full_sub(g.source()))
        .expect("projection lands in the whole algebra");
    let proj_l = corestrict(&sub.inclusion.then(&prod.proj_right).unwrap(), &full_sub(l.source()))
        .expect("projection lands in the whole algebra");
    Ok(Pullback {
        object: sub.algebra,
        proj_g,
        proj_l,
        pairs,
        g: g.clone(),
        l: l.clone(),
    })
}

fn full_sub(a: &Arc<FiniteAlgebra>) -> crate::algebra::SubAlgebra {
    crate::algebra::SubAlgebra {
        algebra: a.clone(),
        inclusion: Homomorphism::identity(a),
    }
}

/// Why a square fails to be a pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PullbackWitness {
    /// A compatible pair not reached by the comparison map.
    Missed { pair: (Element, Element) },
    /// Two apex elements with the same comparison image.
    Collision { first: Element, second: Element },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackCheck {
    pub is_pullback: bool,
    pub witness: Option<PullbackWitness>,
}

/// Is the apex of `s` the pullback of its cospan? Decided by checking the
/// canonical comparison `A -> C ×_D B` for bijectivity.
pub fn is_pullback(s: &Square) -> PullbackCheck {
    let pairs = pullback_pairs(s.g(), s.l()).expect("square shares a codomain");
    let apex = s.f().source().size();
    let mut seen = vec![None; pairs.len()];
    for a in 0..apex {
        let key = (s.h().apply(a), s.f().apply(a));
        let slot = pairs
            .binary_search(&key)
            .expect("square commutes, so the image is a compatible pair");
        if let Some(first) = seen[slot] {
            return PullbackCheck {
                is_pullback: false,
                witness: Some(PullbackWitness::Collision { first, second: a }),
            };
        }
        seen[slot] = Some(a);
    }
    if let Some(slot) = seen.iter().position(Option::is_none) {
        return PullbackCheck {
            is_pullback: false,
            witness: Some(PullbackWitness::Missed { pair: pairs[slot] }),
        };
    }
    PullbackCheck {
        is_pullback: true,
        witness: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSquareMode {
    /// Pullback square with `Z(l)` invertible: the Z-kernels of the
    /// parallel horizontal arrows are isomorphic.
    Forward,
    /// `f` surjective, `Z(l)` invertible and kernels canonically
    /// isomorphic: the square is a pullback.
    Converse,
}

/// The canonical comparison `Zker(f) -> Zker(g)` over a commuting square,
/// given by restricting the left leg `h`.
pub fn induced_kernel_map(s: &Square) -> Homomorphism {
    let kf = zkernel(s.f());
    let kg = zkernel(s.g());
    corestrict(
        &kf.k().then(s.h()).expect("kernel inclusion composes"),
        kg.sub(),
    )
    .expect("commuting squares send the kernel into the kernel")
}

/// Transport of Z-kernels along a square, in both directions of the
/// statement; three-valued.
pub fn kernels_along_pullback(s: &Square, mode: KernelSquareMode) -> Verdict {
    let zl_bijective = z_map(s.l()).classify().bijective;
    let phi = induced_kernel_map(s);
    let phi_witness = json!({
        "map": phi.map(),
        "kernel_f": zkernel(s.f()).carrier(),
        "kernel_g": zkernel(s.g()).carrier(),
    });
    match mode {
        KernelSquareMode::Forward => {
            let pb = is_pullback(s);
            let hypotheses = vec![
                Clause::new("square-is-pullback", pb.is_pullback),
                Clause::new("z-map-of-right-leg-bijective", zl_bijective),
            ];
            let conclusions = vec![Clause::with_witness(
                "induced-kernel-map-bijective",
                phi.classify().bijective,
                phi_witness,
            )];
            Verdict::from_clauses("kernels-along-pullback-forward", hypotheses, conclusions)
        }
        KernelSquareMode::Converse => {
            let hypotheses = vec![
                Clause::new("top-arrow-surjective", s.f().classify().surjective),
                Clause::new("z-map-of-right-leg-bijective", zl_bijective),
                Clause::with_witness(
                    "induced-kernel-map-bijective",
                    phi.classify().bijective,
                    phi_witness,
                ),
            ];
            let pb = is_pullback(s);
            let conclusions = vec![Clause::with_witness(
                "square-is-pullback",
                pb.is_pullback,
                json!({ "witness": format!("{:?}", pb.witness) }),
            )];
            Verdict::from_clauses("kernels-along-pullback-converse", hypotheses, conclusions)
        }
    }
}

/// A named arrow of a diagram, with endpoints given by object names.
#[derive(Debug, Clone)]
pub struct DiagramArrow {
    pub hom: Homomorphism,
    pub source: String,
    pub target: String,
}

/// A relation asserts two composites equal; paths list arrow names in
/// target-to-source order, the empty path denoting an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

/// Named objects and arrows with asserted path equalities. Construction
/// validates endpoints and composability; `check_commutes` evaluates the
/// relations pointwise.
#[derive(Debug, Clone)]
pub struct Diagram {
    objects: BTreeMap<String, Arc<FiniteAlgebra>>,
    arrows: BTreeMap<String, DiagramArrow>,
    relations: Vec<Relation>,
}

impl Diagram {
    pub fn new(
        objects: BTreeMap<String, Arc<FiniteAlgebra>>,
        arrows: BTreeMap<String, DiagramArrow>,
        relations: Vec<Relation>,
    ) -> Result<Self, DiagramError> {
        for (name, arrow) in &arrows {
            let src = objects
                .get(&arrow.source)
                .ok_or_else(|| DiagramError::UnknownObject(arrow.source.clone()))?;
            let dst = objects
                .get(&arrow.target)
                .ok_or_else(|| DiagramError::UnknownObject(arrow.target.clone()))?;
            if arrow.hom.source() != src || arrow.hom.target() != dst {
                return Err(DiagramError::ArrowEndpoints { name: name.clone() });
            }
        }
        let diagram = Diagram {
            objects,
            arrows,
            relations,
        };
        for (i, rel) in diagram.relations.iter().enumerate() {
            diagram.relation_sides(i, rel)?;
        }
        Ok(diagram)
    }

    pub fn objects(&self) -> &BTreeMap<String, Arc<FiniteAlgebra>> {
        &self.objects
    }

    pub fn arrows(&self) -> &BTreeMap<String, DiagramArrow> {
        &self.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    fn compose_path(&self, relation: usize, path: &[String]) -> Result<Homomorphism, DiagramError> {
        let mut hom: Option<Homomorphism> = None;
        // target-to-source order: the last name acts first
        for name in path.iter().rev() {
            let arrow = self
                .arrows
                .get(name)
                .ok_or_else(|| DiagramError::UnknownArrow(name.clone()))?;
            hom = Some(match hom {
                None => arrow.hom.clone(),
                Some(prev) => prev
                    .then(&arrow.hom)
                    .map_err(|_| DiagramError::PathComposition { relation })?,
            });
        }
        hom.ok_or(DiagramError::EmptyRelation { relation })
    }

    /// Both sides of a relation as homs, resolving an empty side to the
    /// identity at the other side's endpoints.
    fn relation_sides(
        &self,
        index: usize,
        rel: &Relation,
    ) -> Result<(Homomorphism, Homomorphism), DiagramError> {
        match (rel.lhs.is_empty(), rel.rhs.is_empty()) {
            (true, true) => Err(DiagramError::EmptyRelation { relation: index }),
            (false, true) => {
                let lhs = self.compose_path(index, &rel.lhs)?;
                if lhs.source() != lhs.target() {
                    return Err(DiagramError::IdentityEndpoints { relation: index });
                }
                let id = Homomorphism::identity(lhs.source());
                Ok((lhs, id))
            }
            (true, false) => {
                let rhs = self.compose_path(index, &rel.rhs)?;
                if rhs.source() != rhs.target() {
                    return Err(DiagramError::IdentityEndpoints { relation: index });
                }
                let id = Homomorphism::identity(rhs.source());
                Ok((id, rhs))
            }
            (false, false) => {
                let lhs = self.compose_path(index, &rel.lhs)?;
                let rhs = self.compose_path(index, &rel.rhs)?;
                if lhs.source() != rhs.source() || lhs.target() != rhs.target() {
                    return Err(DiagramError::PathComposition { relation: index });
                }
                Ok((lhs, rhs))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommuteReport {
    pub commutes: bool,
    /// Failing relation index and element, if any.
    pub failure: Option<(usize, Element)>,
}

/// Evaluate every asserted path pair on every element.
pub fn check_commutes(d: &Diagram) -> Result<CommuteReport, DiagramError> {
    for (i, rel) in d.relations().iter().enumerate() {
        let (lhs, rhs) = d.relation_sides(i, rel)?;
        for e in 0..lhs.source().size() {
            if lhs.apply(e) != rhs.apply(e) {
                return Ok(CommuteReport {
                    commutes: false,
                    failure: Some((i, e)),
                });
            }
        }
    }
    Ok(CommuteReport {
        commutes: true,
        failure: None,
    })
}
