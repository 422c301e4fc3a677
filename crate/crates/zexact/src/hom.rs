//! Homomorphisms between finite algebras: validation, exhaustive
//! enumeration, classification, image factorization, isomorphism search.
//!
//! Enumeration is backtracking with constraint propagation: constants are
//! forced first, every element generated from assigned ones is forced next,
//! and only then does the search branch. Output is in lexicographic map
//! order, which makes every downstream choice reproducible.

use std::sync::Arc;

use crate::algebra::{decode_tuple, induced_subalgebra, Element, FiniteAlgebra, SubAlgebra};

/// Raw search-space cap for hom enumeration (`|B|^|A|`).
pub const DEFAULT_HOM_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum HomError {
    #[error("map has {got} entries, source has {expected} elements")]
    LengthMismatch { got: usize, expected: usize },
    #[error("map entry {entry} out of range (target size {size})")]
    EntryOutOfRange { entry: Element, size: usize },
    #[error("source and target have different signatures")]
    SignatureMismatch,
    #[error("map does not preserve `{symbol}` at {args:?}")]
    NotPreserved { symbol: String, args: Vec<Element> },
    #[error("homomorphisms are not composable: target of the first differs from source of the second")]
    NotComposable,
    #[error("raw search space {raw} exceeds budget {budget}")]
    BudgetExceeded { raw: u128, budget: u128 },
    #[error("image escapes the subalgebra at element {element}")]
    ImageEscapes { element: Element },
    #[error("homomorphism is not bijective")]
    NotBijective,
}

/// A total map between carriers that preserves every operation table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    map: Vec<Element>,
}

/// Injectivity/surjectivity flags from a direct scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomFlags {
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
}

impl Homomorphism {
    pub fn new(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        map: Vec<Element>,
    ) -> Result<Self, HomError> {
        check_map(&source, &target, &map)?;
        Ok(Homomorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(algebra: &Arc<FiniteAlgebra>) -> Self {
        Homomorphism {
            source: algebra.clone(),
            target: algebra.clone(),
            map: (0..algebra.size()).collect(),
        }
    }

    pub fn source(&self) -> &Arc<FiniteAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &[Element] {
        &self.map
    }

    pub fn apply(&self, e: Element) -> Element {
        self.map[e]
    }

    /// Diagrammatic composition: `self.then(g) = g ∘ self`.
    pub fn then(&self, g: &Homomorphism) -> Result<Homomorphism, HomError> {
        if self.target != g.source {
            return Err(HomError::NotComposable);
        }
        Ok(Homomorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            map: self.map.iter().map(|&e| g.map[e]).collect(),
        })
    }

    pub fn classify(&self) -> HomFlags {
        let mut hit = vec![false; self.target.size()];
        let mut injective = true;
        for &v in &self.map {
            if hit[v] {
                injective = false;
            }
            hit[v] = true;
        }
        let surjective = hit.iter().all(|&h| h);
        HomFlags {
            injective,
            surjective,
            bijective: injective && surjective,
        }
    }

    /// Sorted, deduplicated image as a target subset.
    pub fn image_set(&self) -> Vec<Element> {
        let mut hit = vec![false; self.target.size()];
        for &v in &self.map {
            hit[v] = true;
        }
        (0..self.target.size()).filter(|&i| hit[i]).collect()
    }

    /// Inverse of a bijective homomorphism.
    pub fn invert(&self) -> Result<Homomorphism, HomError> {
        if !self.classify().bijective {
            return Err(HomError::NotBijective);
        }
        let mut map = vec![0; self.target.size()];
        for (e, &v) in self.map.iter().enumerate() {
            map[v] = e;
        }
        Ok(Homomorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            map,
        })
    }
}

/// Does `map` define a homomorphism? Reports the first violating
/// operation and argument tuple in table order.
pub fn check_map(
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    map: &[Element],
) -> Result<(), HomError> {
    if source.signature() != target.signature() {
        return Err(HomError::SignatureMismatch);
    }
    if map.len() != source.size() {
        return Err(HomError::LengthMismatch {
            got: map.len(),
            expected: source.size(),
        });
    }
    if let Some(&entry) = map.iter().find(|&&e| e >= target.size()) {
        return Err(HomError::EntryOutOfRange {
            entry,
            size: target.size(),
        });
    }
    // constants first so a broken constant is always the reported witness
    let ops = source.signature().operations();
    let order = ops
        .iter()
        .enumerate()
        .filter(|(_, s)| s.arity == 0)
        .chain(ops.iter().enumerate().filter(|(_, s)| s.arity > 0));
    for (op, sym) in order {
        let count = source.size().pow(sym.arity as u32);
        let mut args = vec![0; sym.arity];
        for idx in 0..count {
            decode_tuple(idx, source.size(), &mut args);
            let mapped: Vec<Element> = args.iter().map(|&a| map[a]).collect();
            if map[source.eval(op, &args)] != target.eval(op, &mapped) {
                return Err(HomError::NotPreserved {
                    symbol: sym.symbol.clone(),
                    args,
                });
            }
        }
    }
    Ok(())
}

const UNASSIGNED: Element = Element::MAX;

/// Force assignments implied by the current partial map: constants and
/// every operation result whose arguments are all assigned. Returns false
/// on contradiction.
fn propagate(a: &FiniteAlgebra, b: &FiniteAlgebra, partial: &mut [Element]) -> bool {
    loop {
        let mut changed = false;
        for (op, sym) in a.signature().operations().iter().enumerate() {
            let count = a.size().pow(sym.arity as u32);
            let mut args = vec![0; sym.arity];
            for idx in 0..count {
                decode_tuple(idx, a.size(), &mut args);
                if args.iter().any(|&x| partial[x] == UNASSIGNED) {
                    continue;
                }
                let mapped: Vec<Element> = args.iter().map(|&x| partial[x]).collect();
                let src = a.eval(op, &args);
                let dst = b.eval(op, &mapped);
                if partial[src] == UNASSIGNED {
                    partial[src] = dst;
                    changed = true;
                } else if partial[src] != dst {
                    return false;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, partial: &[Element], out: &mut Vec<Homomorphism>) {
    match partial.iter().position(|&v| v == UNASSIGNED) {
        None => {
            debug_assert!(check_map(a, b, partial).is_ok());
            out.push(Homomorphism {
                source: a.clone(),
                target: b.clone(),
                map: partial.to_vec(),
            });
        }
        Some(free) => {
            for v in 0..b.size() {
                let mut next = partial.to_vec();
                next[free] = v;
                if propagate(a, b, &mut next) {
                    search(a, b, &next, out);
                }
            }
        }
    }
}

/// All homomorphisms `a -> b` in lexicographic map order.
pub fn enumerate_homs(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
) -> Result<Vec<Homomorphism>, HomError> {
    enumerate_homs_budget(a, b, DEFAULT_HOM_BUDGET)
}

pub fn enumerate_homs_budget(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    budget: u128,
) -> Result<Vec<Homomorphism>, HomError> {
    if a.signature() != b.signature() {
        return Err(HomError::SignatureMismatch);
    }
    let raw = (b.size() as u128)
        .checked_pow(a.size() as u32)
        .unwrap_or(u128::MAX);
    if raw > budget {
        return Err(HomError::BudgetExceeded { raw, budget });
    }
    let mut partial = vec![UNASSIGNED; a.size()];
    let mut out = Vec::new();
    if propagate(a, b, &mut partial) {
        search(a, b, &partial, &mut out);
    }
    Ok(out)
}

/// Regular epi-mono factorization through the image subalgebra.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub epi: Homomorphism,
    pub mono: Homomorphism,
    pub middle: Arc<FiniteAlgebra>,
}

/// The image of a homomorphism is automatically a subalgebra; factor
/// through it.
pub fn image_factorize(h: &Homomorphism) -> Factorization {
    let image = h.image_set();
    let sub = induced_subalgebra(h.target(), &image)
        .expect("the image of a homomorphism is closed under every operation");
    let epi_map: Vec<Element> = h
        .map()
        .iter()
        .map(|&v| sub.local(v).expect("image element"))
        .collect();
    let epi = Homomorphism {
        source: h.source().clone(),
        target: sub.algebra.clone(),
        map: epi_map,
    };
    debug_assert!(check_map(epi.source(), epi.target(), epi.map()).is_ok());
    Factorization {
        epi,
        mono: sub.inclusion,
        middle: sub.algebra,
    }
}

/// Corestrict `h` to a subalgebra of its target; errors if the image
/// escapes the subalgebra carrier.
pub fn corestrict(h: &Homomorphism, sub: &SubAlgebra) -> Result<Homomorphism, HomError> {
    debug_assert_eq!(sub.inclusion.target(), h.target());
    let mut map = Vec::with_capacity(h.map().len());
    for (e, &v) in h.map().iter().enumerate() {
        match sub.local(v) {
            Some(l) => map.push(l),
            None => return Err(HomError::ImageEscapes { element: e }),
        }
    }
    let out = Homomorphism {
        source: h.source().clone(),
        target: sub.algebra.clone(),
        map,
    };
    debug_assert!(check_map(out.source(), out.target(), out.map()).is_ok());
    Ok(out)
}

/// A bijective homomorphism if one exists, first in enumeration order.
///
/// When both algebras are constant-generated, hom sets have at most one
/// element, so a unique-hom check in both directions decides isomorphism
/// without a search.
pub fn find_iso(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
) -> Result<Option<Homomorphism>, HomError> {
    if a.signature() != b.signature() {
        return Err(HomError::SignatureMismatch);
    }
    if a.size() != b.size() {
        return Ok(None);
    }
    if a.constant_generated() && b.constant_generated() {
        let forward = enumerate_homs(a, b)?;
        let backward = enumerate_homs(b, a)?;
        if let (Some(f), true) = (forward.first(), !backward.is_empty()) {
            if f.classify().bijective {
                return Ok(Some(f.clone()));
            }
        }
        return Ok(None);
    }
    Ok(enumerate_homs(a, b)?
        .into_iter()
        .find(|h| h.classify().bijective))
}

/// Transport an algebra along a carrier permutation; returns the copy
/// together with the isomorphism `copy -> algebra` given by the
/// permutation itself.
pub fn conjugate_by_permutation(
    algebra: &Arc<FiniteAlgebra>,
    perm: &[Element],
) -> (Arc<FiniteAlgebra>, Homomorphism) {
    assert_eq!(perm.len(), algebra.size());
    let n = algebra.size();
    let mut inverse = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let mut tables = Vec::with_capacity(algebra.signature().operations().len());
    for (op, sym) in algebra.signature().operations().iter().enumerate() {
        let count = n.pow(sym.arity as u32);
        let mut entries = Vec::with_capacity(count);
        let mut args = vec![0; sym.arity];
        for idx in 0..count {
            decode_tuple(idx, n, &mut args);
            let mapped: Vec<Element> = args.iter().map(|&x| perm[x]).collect();
            entries.push(inverse[algebra.eval(op, &mapped)]);
        }
        tables.push(crate::algebra::OpTable::new(sym.arity, entries));
    }
    let id = format!(
        "{}~p{}",
        algebra.id(),
        perm.iter().map(|p| format!("{p:x}")).collect::<String>()
    );
    let copy = FiniteAlgebra::new(id, algebra.signature().clone(), n, tables)
        .expect("conjugated tables are well-formed");
    let iso = Homomorphism::new(copy.clone(), algebra.clone(), perm.to_vec())
        .expect("carrier permutation transports the structure");
    (copy, iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::product;
    use crate::catalog;

    fn z(n: usize) -> Arc<FiniteAlgebra> {
        catalog::cyclic_ring(n)
    }

    #[test]
    fn projection_is_a_hom() {
        let p = product(&z(2), &z(2)).unwrap();
        assert!(check_map(&p.algebra, &z(2), p.proj_left.map()).is_ok());
    }

    #[test]
    fn constant_breaking_map_reports_the_constant() {
        // 1 -> 0 on Z2 breaks the unit constant
        let err = check_map(&z(2), &z(2), &[0, 0]).unwrap_err();
        assert_eq!(
            err,
            HomError::NotPreserved {
                symbol: "one".into(),
                args: vec![],
            }
        );
    }

    #[test]
    fn boolean_complement_breaks_bottom() {
        let b2 = catalog::boolean_algebra(1);
        let err = check_map(&b2, &b2, &[1, 0]).unwrap_err();
        assert!(matches!(err, HomError::NotPreserved { symbol, .. } if symbol == "bot"));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            check_map(&z(2), &z(2), &[0]),
            Err(HomError::LengthMismatch { .. })
        ));
        assert!(matches!(
            check_map(&z(2), &z(2), &[0, 5]),
            Err(HomError::EntryOutOfRange { .. })
        ));
    }

    #[test]
    fn homs_from_f2_squared_to_f2_are_the_projections() {
        let p = product(&z(2), &z(2)).unwrap();
        let homs = enumerate_homs(&p.algebra, &z(2)).unwrap();
        assert_eq!(homs.len(), 2);
        assert!(homs.contains(&p.proj_left));
        assert!(homs.contains(&p.proj_right));
    }

    #[test]
    fn boolean_square_has_two_homs_to_two() {
        let b4 = catalog::boolean_algebra(2);
        let b2 = catalog::boolean_algebra(1);
        let homs = enumerate_homs(&b4, &b2).unwrap();
        assert_eq!(homs.len(), 2);
    }

    #[test]
    fn no_hom_from_terminal_to_f2() {
        let homs = enumerate_homs(&z(1), &z(2)).unwrap();
        assert!(homs.is_empty());
    }

    #[test]
    fn enumeration_is_lexicographic_and_all_maps_are_homs() {
        let b8 = catalog::boolean_algebra(3);
        let homs = enumerate_homs(&b8, &b8).unwrap();
        assert_eq!(homs.len(), 27); // functions on three atoms
        for w in homs.windows(2) {
            assert!(w[0].map() < w[1].map());
        }
        for h in &homs {
            assert!(check_map(h.source(), h.target(), h.map()).is_ok());
        }
    }

    #[test]
    fn budget_is_a_hard_error() {
        let b8 = catalog::boolean_algebra(3);
        let err = enumerate_homs_budget(&b8, &b8, 100).unwrap_err();
        assert!(matches!(err, HomError::BudgetExceeded { .. }));
    }

    #[test]
    fn classify_flags() {
        let p = product(&z(2), &z(2)).unwrap();
        let flags = p.proj_left.classify();
        assert!(flags.surjective && !flags.injective);

        let diag = Homomorphism::new(z(2), p.algebra.clone(), vec![0, 3]).unwrap();
        let flags = diag.classify();
        assert!(flags.injective && !flags.surjective);

        assert!(Homomorphism::identity(&z(4)).classify().bijective);
    }

    #[test]
    fn image_factorization_through_diagonal() {
        let p = product(&z(2), &z(2)).unwrap();
        let diag = Homomorphism::new(z(2), p.algebra.clone(), vec![0, 3]).unwrap();
        let collapse = p.proj_left.then(&diag).unwrap();
        let fact = image_factorize(&collapse);
        assert_eq!(fact.middle.size(), 2);
        assert_eq!(fact.epi.then(&fact.mono).unwrap(), collapse);
        assert!(fact.epi.classify().surjective);
        assert!(fact.mono.classify().injective);
    }

    #[test]
    fn factorization_degenerate_cases() {
        let p = product(&z(2), &z(2)).unwrap();
        let surj = &p.proj_left;
        assert!(image_factorize(surj).mono.classify().bijective);
        let inj = Homomorphism::new(z(2), p.algebra.clone(), vec![0, 3]).unwrap();
        assert!(image_factorize(&inj).epi.classify().bijective);
    }

    #[test]
    fn iso_between_f2_and_diagonal() {
        let p = product(&z(2), &z(2)).unwrap();
        let sub = crate::algebra::generate_subalgebra(&p.algebra, &[]).unwrap();
        assert!(find_iso(&z(2), &sub.algebra).unwrap().is_some());
    }

    #[test]
    fn z4_is_not_isomorphic_to_f2_squared() {
        let p = product(&z(2), &z(2)).unwrap();
        assert!(find_iso(&z(4), &p.algebra).unwrap().is_none());
    }

    #[test]
    fn identity_is_an_iso() {
        let a = z(4);
        let iso = find_iso(&a, &a).unwrap().unwrap();
        assert_eq!(iso, Homomorphism::identity(&a));
    }

    #[test]
    fn conjugation_produces_an_isomorphic_copy() {
        let a = catalog::boolean_algebra(2);
        let (copy, iso) = conjugate_by_permutation(&a, &[2, 0, 3, 1]);
        assert!(iso.classify().bijective);
        assert_eq!(iso.source(), &copy);
        assert_eq!(iso.target(), &a);
    }
}
