//! Zero parts, the ideal of trivially-factoring morphisms, Z-kernels,
//! short Z-exact sequences, bounded Z-cokernel search and the
//! context-verification suite.
//!
//! The zero part `Z(A)` is the constant-generated subalgebra with its
//! inclusion `ε_A`. An arrow lies in the ideal `N_Z` exactly when its image
//! sits inside the zero part of its codomain. The Z-kernel of `f: A -> B`
//! is the preimage of `Z(B)`, which realizes the pullback of `ε_B` along
//! `f` in canonical form.

use std::sync::Arc;

use serde_json::json;

use crate::algebra::{
    enumerate_congruences, generate_subalgebra, product_many, quotient, AlgebraError, Congruence,
    Element, FiniteAlgebra, SubAlgebra,
};
use crate::hom::{corestrict, enumerate_homs, find_iso, HomError, Homomorphism};
use crate::verdict::{Clause, Verdict};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ZcoreError {
    #[error("kernel arrow and epi arrow do not share the middle object")]
    Endpoints,
    #[error("cokernel search bound must be at least 1")]
    BadBound,
    #[error("probe {index} is not an arrow out of the codomain")]
    ProbeDomain { index: usize },
    #[error("candidate cokernel is not an arrow out of the codomain")]
    CandidateDomain,
    #[error("candidate cokernel is not surjective")]
    CandidateNotSurjective,
    #[error("zlist must be nonempty")]
    EmptyZList,
    #[error("`{0}` is not constant-generated")]
    NotConstantGenerated(String),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The constant-generated subalgebra `Z(A)` with its embedding `ε_A`.
#[derive(Debug, Clone)]
pub struct ZeroPart {
    pub owner: Arc<FiniteAlgebra>,
    pub zero: Arc<FiniteAlgebra>,
    pub embedding: Homomorphism,
}

impl ZeroPart {
    pub fn carrier(&self) -> &[Element] {
        self.embedding.map()
    }

    pub fn sub(&self) -> SubAlgebra {
        SubAlgebra {
            algebra: self.zero.clone(),
            inclusion: self.embedding.clone(),
        }
    }
}

/// Compute `Z(A)` as the closure of the constants; idempotent.
pub fn zero_part(a: &Arc<FiniteAlgebra>) -> ZeroPart {
    let sub = generate_subalgebra(a, &[]).expect("closure of constants");
    ZeroPart {
        owner: a.clone(),
        zero: sub.algebra,
        embedding: sub.inclusion,
    }
}

/// Is the algebra a trivial object, i.e. equal to its own zero part?
pub fn is_trivial(a: &FiniteAlgebra) -> bool {
    a.constant_generated()
}

/// The restriction `Z(f): Z(A) -> Z(B)`, satisfying
/// `ε_B ∘ Z(f) = f ∘ ε_A`.
pub fn z_map(f: &Homomorphism) -> Homomorphism {
    let za = zero_part(f.source());
    let zb = zero_part(f.target());
    corestrict(
        &za.embedding.then(f).expect("embedding composes"),
        &zb.sub(),
    )
    .expect("a homomorphism maps the constant closure into the constant closure")
}

/// The isomorphism `Z(x) ≅ Z(y)` between two zero parts, if any.
///
/// Zero parts are constant-generated, so `find_iso` decides this with the
/// posetal two-way unique-hom check.
pub fn z_iso(
    x: &Arc<FiniteAlgebra>,
    y: &Arc<FiniteAlgebra>,
) -> Result<Option<Homomorphism>, HomError> {
    find_iso(&zero_part(x).zero, &zero_part(y).zero)
}

/// Membership certificate for the ideal `N_Z`: a factorization
/// `f = ε_B ∘ chi` through the zero part of the codomain.
#[derive(Debug, Clone)]
pub struct NZWitness {
    pub arrow: Homomorphism,
    pub chi: Homomorphism,
}

/// `f ∈ N_Z` iff the image of `f` lands in `Z(B)`; the factoring `chi` is
/// unique because `ε_B` is injective.
pub fn nz_membership(f: &Homomorphism) -> Option<NZWitness> {
    let zb = zero_part(f.target());
    let chi = corestrict(f, &zb.sub()).ok()?;
    debug_assert_eq!(chi.then(&zb.embedding).unwrap(), *f);
    Some(NZWitness {
        arrow: f.clone(),
        chi,
    })
}

/// The Z-kernel of `f: A -> B`: the preimage subalgebra `f⁻¹(Z(B))` with
/// its inclusion `k` and corner map `chi: K -> Z(B)`.
#[derive(Debug, Clone)]
pub struct ZKernel {
    pub arrow: Homomorphism,
    sub: SubAlgebra,
    chi: Homomorphism,
}

impl ZKernel {
    pub fn kernel(&self) -> &Arc<FiniteAlgebra> {
        &self.sub.algebra
    }

    /// The inclusion `k: K -> A`.
    pub fn k(&self) -> &Homomorphism {
        &self.sub.inclusion
    }

    pub fn chi(&self) -> &Homomorphism {
        &self.chi
    }

    pub fn sub(&self) -> &SubAlgebra {
        &self.sub
    }

    /// The kernel carrier as a sorted subset of the domain of `f`.
    pub fn carrier(&self) -> &[Element] {
        self.sub.inclusion.map()
    }
}

/// Carrier of the Z-kernel without building the subalgebra.
pub fn zkernel_carrier(f: &Homomorphism) -> Vec<Element> {
    let zb = zero_part(f.target());
    (0..f.source().size())
        .filter(|&a| zb.sub().contains(f.apply(a)))
        .collect()
}

pub fn zkernel(f: &Homomorphism) -> ZKernel {
    let zb = zero_part(f.target());
    let carrier = zkernel_carrier(f);
    let sub = crate::algebra::induced_subalgebra(f.source(), &carrier)
        .expect("preimage of a subalgebra is a subalgebra");
    let chi = corestrict(&sub.inclusion.then(f).expect("inclusion composes"), &zb.sub())
        .expect("kernel maps into the zero part by definition");
    ZKernel {
        arrow: f.clone(),
        sub,
        chi,
    }
}

/// Why a pair `(k, f)` fails to be short Z-exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZExactClause {
    EpiNotSurjective,
    KernelNotInjective,
    KernelMismatch {
        expected: Vec<Element>,
        image: Vec<Element>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZExactness {
    pub exact: bool,
    pub failed: Option<ZExactClause>,
}

/// `(k, f)` is short Z-exact iff `f` is surjective, `k` injective, and the
/// image of `k` is exactly the Z-kernel carrier of `f`.
pub fn is_zexact(k: &Homomorphism, f: &Homomorphism) -> Result<ZExactness, ZcoreError> {
    if k.target() != f.source() {
        return Err(ZcoreError::Endpoints);
    }
    if !f.classify().surjective {
        return Ok(ZExactness {
            exact: false,
            failed: Some(ZExactClause::EpiNotSurjective),
        });
    }
    if !k.classify().injective {
        return Ok(ZExactness {
            exact: false,
            failed: Some(ZExactClause::KernelNotInjective),
        });
    }
    let expected = zkernel_carrier(f);
    let image = k.image_set();
    if expected != image {
        return Ok(ZExactness {
            exact: false,
            failed: Some(ZExactClause::KernelMismatch { expected, image }),
        });
    }
    Ok(ZExactness {
        exact: true,
        failed: None,
    })
}

/// A validated short Z-exact sequence `K -> A -> B`.
#[derive(Debug, Clone)]
pub struct ExactSequence {
    k: Homomorphism,
    f: Homomorphism,
}

impl ExactSequence {
    pub fn new(k: Homomorphism, f: Homomorphism) -> Result<Self, ZcoreError> {
        let report = is_zexact(&k, &f)?;
        if !report.exact {
            return Err(ZcoreError::Endpoints);
        }
        Ok(ExactSequence { k, f })
    }

    pub fn k(&self) -> &Homomorphism {
        &self.k
    }

    pub fn f(&self) -> &Homomorphism {
        &self.f
    }
}

/// Why a quotient candidate is not a Z-cokernel of `f` (relative to the
/// probe set).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateFailure {
    /// `q ∘ f` does not factor through the zero part of the quotient.
    CompositeNotInNz,
    /// A qualifying probe `g` cannot factor through `q`: the candidate
    /// collapses two elements that `g` separates.
    ProbeObstruction {
        probe: usize,
        collapsed: (Element, Element),
    },
}

#[derive(Debug, Clone)]
pub enum CandidateCheck {
    Satisfies {
        mediators: Vec<(usize, Homomorphism)>,
    },
    Fails(CandidateFailure),
}

/// Test one surjection `q` out of `B` for the Z-cokernel universal
/// property of `f: A -> B` against the probes.
pub fn zcokernel_candidate_check(
    f: &Homomorphism,
    q: &Homomorphism,
    probes: &[Homomorphism],
) -> Result<CandidateCheck, ZcoreError> {
    if q.source() != f.target() {
        return Err(ZcoreError::CandidateDomain);
    }
    if !q.classify().surjective {
        return Err(ZcoreError::CandidateNotSurjective);
    }
    for (i, g) in probes.iter().enumerate() {
        if g.source() != f.target() {
            return Err(ZcoreError::ProbeDomain { index: i });
        }
    }
    let qf = f.then(q).expect("shared middle object");
    if nz_membership(&qf).is_none() {
        return Ok(CandidateCheck::Fails(CandidateFailure::CompositeNotInNz));
    }
    let b_size = f.target().size();
    let mut mediators = Vec::new();
    for (i, g) in probes.iter().enumerate() {
        let gf = f.then(g).expect("shared middle object");
        if nz_membership(&gf).is_none() {
            continue; // probe imposes no condition
        }
        // a factoring through q exists iff g is constant on q's fibers;
        // it is then unique because q is surjective
        for x in 0..b_size {
            for y in (x + 1)..b_size {
                if q.apply(x) == q.apply(y) && g.apply(x) != g.apply(y) {
                    return Ok(CandidateCheck::Fails(CandidateFailure::ProbeObstruction {
                        probe: i,
                        collapsed: (x, y),
                    }));
                }
            }
        }
        let mut map = vec![0; q.target().size()];
        for x in 0..b_size {
            map[q.apply(x)] = g.apply(x);
        }
        let mediator = Homomorphism::new(q.target().clone(), g.target().clone(), map)
            .expect("a map factoring a homomorphism through a surjection is a homomorphism");
        mediators.push((i, mediator));
    }
    Ok(CandidateCheck::Satisfies { mediators })
}

#[derive(Debug, Clone)]
pub struct CandidateRefutation {
    pub congruence: Congruence,
    pub quotient_size: usize,
    pub failure: CandidateFailure,
}

#[derive(Debug, Clone)]
pub enum ZCokernelOutcome {
    /// First quotient candidate (in canonical congruence order) satisfying
    /// the universal property against every qualifying probe.
    Found {
        q: Homomorphism,
        congruence: Congruence,
        mediators: Vec<(usize, Homomorphism)>,
    },
    /// No quotient-shaped candidate works; one refutation per candidate.
    ///
    /// This is sound for refutation only relative to the probe set and the
    /// quotient-shaped candidate space: it rules out regular quotients of
    /// the codomain against the given probes, not every conceivable
    /// cokernel object.
    NotFound { refutations: Vec<CandidateRefutation> },
}

/// Bounded semi-decision procedure for Z-cokernels: candidates are the
/// canonical surjections `B -> B/θ` with at most `bound` blocks.
pub fn zcokernel_search(
    f: &Homomorphism,
    bound: usize,
    probes: &[Homomorphism],
) -> Result<ZCokernelOutcome, ZcoreError> {
    if bound == 0 {
        return Err(ZcoreError::BadBound);
    }
    let b = f.target();
    let mut refutations = Vec::new();
    for theta in enumerate_congruences(b)? {
        if theta.num_blocks() > bound {
            continue;
        }
        let q = quotient(b, &theta);
        match zcokernel_candidate_check(f, &q.surjection, probes)? {
            CandidateCheck::Satisfies { mediators } => {
                return Ok(ZCokernelOutcome::Found {
                    q: q.surjection,
                    congruence: theta,
                    mediators,
                });
            }
            CandidateCheck::Fails(failure) => refutations.push(CandidateRefutation {
                quotient_size: theta.num_blocks(),
                congruence: theta,
                failure,
            }),
        }
    }
    Ok(ZCokernelOutcome::NotFound { refutations })
}

/// Report of the three defining conditions of the zero-structure context
/// over a catalog: (i) monos from trivial objects land on the zero part
/// and are unique up to isomorphism, (ii) hom-sets out of trivial objects
/// are posetal, (iii) arrows from trivial objects factor uniquely through
/// trivial subobjects.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ContextReport {
    pub holds: bool,
    pub clauses: Vec<Clause>,
}

pub fn verify_zero_context(catalog: &[Arc<FiniteAlgebra>]) -> Result<ContextReport, ZcoreError> {
    if let Some(first) = catalog.first() {
        if catalog.iter().any(|a| a.signature() != first.signature()) {
            return Err(ZcoreError::Algebra(AlgebraError::SignatureMismatch));
        }
    }
    let trivial: Vec<&Arc<FiniteAlgebra>> = catalog
        .iter()
        .filter(|a| a.constant_generated())
        .collect();

    // (i) every injective hom from a trivial object has image = Z(A)
    let mut mono_image = Clause::new("mono-image-is-zero-part", true);
    'outer_i: for z in &trivial {
        for a in catalog {
            for h in enumerate_homs(z, a)? {
                if h.classify().injective && h.image_set() != zero_part(a).carrier() {
                    mono_image = Clause::with_witness(
                        "mono-image-is-zero-part",
                        false,
                        json!({
                            "trivial": z.id(),
                            "object": a.id(),
                            "map": h.map(),
                            "zero_part": zero_part(a).carrier(),
                        }),
                    );
                    break 'outer_i;
                }
            }
        }
    }

    // (ii) Hom(Z, A) has at most one element
    let mut posetal = Clause::new("hom-sets-posetal", true);
    'outer_ii: for z in &trivial {
        for a in catalog {
            let homs = enumerate_homs(z, a)?;
            if homs.len() > 1 {
                posetal = Clause::with_witness(
                    "hom-sets-posetal",
                    false,
                    json!({
                        "trivial": z.id(),
                        "object": a.id(),
                        "first": homs[0].map(),
                        "second": homs[1].map(),
                    }),
                );
                break 'outer_ii;
            }
        }
    }

    // (iii) every arrow from a trivial object factors uniquely through
    // every trivial mono into the same codomain
    let mut factoring = Clause::new("unique-factorization-through-monos", true);
    'outer_iii: for a in catalog {
        for z in &trivial {
            for mono in enumerate_homs(z, a)? {
                if !mono.classify().injective {
                    continue;
                }
                for zp in &trivial {
                    for arrow in enumerate_homs(zp, a)? {
                        let factorings: Vec<_> = enumerate_homs(zp, z)?
                            .into_iter()
                            .filter(|phi| phi.then(&mono).unwrap() == arrow)
                            .collect();
                        if factorings.len() != 1 {
                            factoring = Clause::with_witness(
                                "unique-factorization-through-monos",
                                false,
                                json!({
                                    "mono": { "from": z.id(), "to": a.id(), "map": mono.map() },
                                    "arrow": { "from": zp.id(), "to": a.id(), "map": arrow.map() },
                                    "factorings": factorings.len(),
                                }),
                            );
                            break 'outer_iii;
                        }
                    }
                }
            }
        }
    }

    let clauses = vec![mono_image, posetal, factoring];
    Ok(ContextReport {
        holds: clauses.iter().all(|c| c.ok),
        clauses,
    })
}

#[derive(Debug, Clone)]
pub enum InitialOutcome {
    /// `Z(∏ zlist)` together with the unique arrow into every target.
    Initial {
        object: Arc<FiniteAlgebra>,
        certificates: Vec<Homomorphism>,
    },
    NotInitial {
        target: String,
        hom_count: usize,
    },
}

/// Construct a candidate initial object as the zero part of the product
/// of the given trivial objects and certify unique arrows into every
/// target.
pub fn initial_from_catalog(
    zlist: &[Arc<FiniteAlgebra>],
    targets: &[Arc<FiniteAlgebra>],
) -> Result<InitialOutcome, ZcoreError> {
    if zlist.is_empty() {
        return Err(ZcoreError::EmptyZList);
    }
    for z in zlist {
        if !z.constant_generated() {
            return Err(ZcoreError::NotConstantGenerated(z.id().to_string()));
        }
    }
    let prod = product_many(zlist)?;
    let zp = zero_part(&prod.algebra);
    let mut certificates = Vec::new();
    for t in targets {
        let homs = enumerate_homs(&zp.zero, t)?;
        if homs.len() != 1 {
            return Ok(InitialOutcome::NotInitial {
                target: t.id().to_string(),
                hom_count: homs.len(),
            });
        }
        certificates.push(homs.into_iter().next().unwrap());
    }
    Ok(InitialOutcome::Initial {
        object: zp.zero,
        certificates,
    })
}

/// For arrows inverted by Z: `f` is injective iff its Z-kernel is the
/// zero part of the domain.
pub fn mono_characterization(f: &Homomorphism) -> Verdict {
    let zf_bijective = z_map(f).classify().bijective;
    let hypotheses = vec![Clause::new("z-map-bijective", zf_bijective)];
    let kernel = zkernel_carrier(f);
    let zpart = zero_part(f.source());
    let kernel_is_zero_part = kernel == zpart.carrier();
    let injective = f.classify().injective;
    let conclusions = vec![Clause::with_witness(
        "injective-iff-kernel-is-zero-part",
        injective == kernel_is_zero_part,
        json!({
            "injective": injective,
            "kernel": kernel,
            "zero_part": zpart.carrier(),
        }),
    )];
    Verdict::from_clauses("mono-characterization", hypotheses, conclusions)
}
