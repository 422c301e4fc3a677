//! Verifiers for the short five lemma (iso, regular-epi and mono modes),
//! the pullback-iff-mono lemma, the regular-epi transfer lemma and the
//! nine lemma, plus the constructive 3x3-grid generator.
//!
//! Every verifier is three-valued: hypotheses are rechecked definitionally
//! even when an input was produced by a generator that guarantees them.

use std::sync::Arc;

use serde_json::json;

use crate::algebra::{
    congruence_join, induced_quotient_map, quotient, Congruence, FiniteAlgebra,
};
use crate::diagrams::{is_pullback, Square};
use crate::hom::{corestrict, HomError, Homomorphism};
use crate::verdict::{Clause, Verdict};
use crate::zcore::{is_zexact, nz_membership, z_iso, zkernel, ZExactness};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LemmaError {
    #[error("ladder endpoints do not line up")]
    LadderEndpoints,
    #[error("ladder square over `{0}` does not commute")]
    LadderSquare(&'static str),
    #[error("grid endpoints do not line up at `{0}`")]
    GridEndpoints(&'static str),
    #[error("grid square `{0}` does not commute")]
    GridSquare(&'static str),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Which property of the outer rungs is assumed and transferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShortFiveMode {
    Iso,
    RegEpi,
    Mono,
}

impl ShortFiveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ShortFiveMode::Iso => "iso",
            ShortFiveMode::RegEpi => "regepi",
            ShortFiveMode::Mono => "mono",
        }
    }
}

/// Two rows `K -> A -> B` and `K' -> A' -> B'` joined by rungs
/// `u: K -> K'`, `a: A -> A'`, `b: B -> B'`.
///
/// Construction validates endpoints and commutativity of both squares;
/// row exactness is a verifier hypothesis, not a construction invariant,
/// so that inapplicable inputs produce `HypothesesUnmet` rather than an
/// error.
#[derive(Debug, Clone)]
pub struct LadderDiagram {
    pub k: Homomorphism,
    pub f: Homomorphism,
    pub kp: Homomorphism,
    pub fp: Homomorphism,
    pub u: Homomorphism,
    pub a: Homomorphism,
    pub b: Homomorphism,
}

impl LadderDiagram {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k: Homomorphism,
        f: Homomorphism,
        kp: Homomorphism,
        fp: Homomorphism,
        u: Homomorphism,
        a: Homomorphism,
        b: Homomorphism,
    ) -> Result<Self, LemmaError> {
        let ok = k.target() == f.source()
            && kp.target() == fp.source()
            && u.source() == k.source()
            && u.target() == kp.source()
            && a.source() == f.source()
            && a.target() == fp.source()
            && b.source() == f.target()
            && b.target() == fp.target();
        if !ok {
            return Err(LemmaError::LadderEndpoints);
        }
        let left_lhs = k.then(&a).expect("endpoints checked");
        let left_rhs = u.then(&kp).expect("endpoints checked");
        if left_lhs != left_rhs {
            return Err(LemmaError::LadderSquare("k"));
        }
        let right_lhs = f.then(&b).expect("endpoints checked");
        let right_rhs = a.then(&fp).expect("endpoints checked");
        if right_lhs != right_rhs {
            return Err(LemmaError::LadderSquare("f"));
        }
        Ok(LadderDiagram {
            k,
            f,
            kp,
            fp,
            u,
            a,
            b,
        })
    }
}

fn exactness_clause(name: &str, report: &ZExactness) -> Clause {
    match &report.failed {
        None => Clause::new(name, true),
        Some(reason) => {
            Clause::with_witness(name, false, json!({ "reason": format!("{reason:?}") }))
        }
    }
}

fn mode_clause(name: &str, h: &Homomorphism, mode: ShortFiveMode) -> Clause {
    let flags = h.classify();
    let ok = match mode {
        ShortFiveMode::Iso => flags.bijective,
        ShortFiveMode::RegEpi => flags.surjective,
        ShortFiveMode::Mono => flags.injective,
    };
    Clause::new(format!("{name}-{}", mode.as_str()), ok)
}

/// Short five lemma: with Z-exact rows, if `u` and `b` are both
/// iso/regular-epi/mono then so is `a`.
pub fn verify_short_five(d: &LadderDiagram, mode: ShortFiveMode) -> Verdict {
    let hypotheses = vec![
        exactness_clause(
            "top-row-exact",
            &is_zexact(&d.k, &d.f).expect("ladder endpoints"),
        ),
        exactness_clause(
            "bottom-row-exact",
            &is_zexact(&d.kp, &d.fp).expect("ladder endpoints"),
        ),
        mode_clause("u", &d.u, mode),
        mode_clause("b", &d.b, mode),
    ];
    let conclusions = vec![Clause::with_witness(
        format!("a-{}", mode.as_str()),
        match mode {
            ShortFiveMode::Iso => d.a.classify().bijective,
            ShortFiveMode::RegEpi => d.a.classify().surjective,
            ShortFiveMode::Mono => d.a.classify().injective,
        },
        json!({ "map": d.a.map() }),
    )];
    Verdict::from_clauses(
        format!("short-five-{}", mode.as_str()),
        hypotheses,
        conclusions,
    )
}

/// With the top row exact, `k' = Zker(f')` and `Z(B) ≅ Z(B')`: the left
/// square is a pullback iff `b` is a monomorphism. Both directions are
/// asserted.
pub fn verify_pb_iff_mono(d: &LadderDiagram) -> Verdict {
    let kernel_only = {
        let ker = zkernel(&d.fp);
        d.kp.classify().injective && d.kp.image_set() == ker.carrier()
    };
    let zmatch = z_iso(d.f.target(), d.fp.target()).expect("zero parts are within budget");
    let hypotheses = vec![
        exactness_clause(
            "top-row-exact",
            &is_zexact(&d.k, &d.f).expect("ladder endpoints"),
        ),
        Clause::new("bottom-kernel-matches", kernel_only),
        Clause::new("zero-parts-of-b-agree", zmatch.is_some()),
    ];
    let left = Square::new(d.k.clone(), d.a.clone(), d.u.clone(), d.kp.clone())
        .expect("ladder squares commute");
    let pb = is_pullback(&left).is_pullback;
    let mono = d.b.classify().injective;
    let conclusions = vec![Clause::with_witness(
        "left-square-pullback-iff-b-mono",
        pb == mono,
        json!({ "left_square_pullback": pb, "b_injective": mono }),
    )];
    Verdict::from_clauses("pb-iff-mono", hypotheses, conclusions)
}

/// A commutative 3x3 grid:
///
/// ```text
///     K  --u-->  K' --u'--> K''
///     |k         |k'        |k''
///     v          v          v
///     A  --a-->  A' --a'--> A''
///     |f         |f'        |f''
///     v          v          v
///     B  --b-->  B' --b'--> B''
/// ```
///
/// Objects are implied by arrow endpoints; construction checks their
/// consistency and that all six squares (four elementary plus the two
/// row-spanning rectangles) commute.
#[derive(Debug, Clone)]
pub struct Grid3x3 {
    pub u: Homomorphism,
    pub up: Homomorphism,
    pub a: Homomorphism,
    pub ap: Homomorphism,
    pub b: Homomorphism,
    pub bp: Homomorphism,
    pub k: Homomorphism,
    pub f: Homomorphism,
    pub kp: Homomorphism,
    pub fp: Homomorphism,
    pub kpp: Homomorphism,
    pub fpp: Homomorphism,
}

impl Grid3x3 {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        u: Homomorphism,
        up: Homomorphism,
        a: Homomorphism,
        ap: Homomorphism,
        b: Homomorphism,
        bp: Homomorphism,
        k: Homomorphism,
        f: Homomorphism,
        kp: Homomorphism,
        fp: Homomorphism,
        kpp: Homomorphism,
        fpp: Homomorphism,
    ) -> Result<Self, LemmaError> {
        let grid = Grid3x3 {
            u,
            up,
            a,
            ap,
            b,
            bp,
            k,
            f,
            kp,
            fp,
            kpp,
            fpp,
        };
        grid.check_endpoints()?;
        for (name, lhs, rhs) in grid.square_equations() {
            if lhs != rhs {
                return Err(LemmaError::GridSquare(name));
            }
        }
        Ok(grid)
    }

    fn check_endpoints(&self) -> Result<(), LemmaError> {
        let checks: [(&'static str, bool); 10] = [
            ("u/u'", self.u.target() == self.up.source()),
            ("a/a'", self.a.target() == self.ap.source()),
            ("b/b'", self.b.target() == self.bp.source()),
            ("k/f", self.k.target() == self.f.source()),
            ("k'/f'", self.kp.target() == self.fp.source()),
            ("k''/f''", self.kpp.target() == self.fpp.source()),
            ("K-row", self.k.source() == self.u.source() && self.kp.source() == self.up.source() && self.kpp.source() == self.up.target()),
            ("A-row", self.f.source() == self.a.source() && self.fp.source() == self.ap.source() && self.fpp.source() == self.ap.target()),
            ("B-row", self.f.target() == self.b.source() && self.fp.target() == self.bp.source() && self.fpp.target() == self.bp.target()),
            ("K'-col", self.kp.source() == self.u.target()),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(LemmaError::GridEndpoints(name));
            }
        }
        Ok(())
    }

    /// The six commuting squares as composite pairs: four elementary
    /// squares and the two row-spanning rectangles.
    pub fn square_equations(&self) -> Vec<(&'static str, Homomorphism, Homomorphism)> {
        let uu = self.u.then(&self.up).expect("endpoints");
        let aa = self.a.then(&self.ap).expect("endpoints");
        let bb = self.b.then(&self.bp).expect("endpoints");
        vec![
            (
                "top-left",
                self.k.then(&self.a).expect("endpoints"),
                self.u.then(&self.kp).expect("endpoints"),
            ),
            (
                "top-right",
                self.kp.then(&self.ap).expect("endpoints"),
                self.up.then(&self.kpp).expect("endpoints"),
            ),
            (
                "bottom-left",
                self.f.then(&self.b).expect("endpoints"),
                self.a.then(&self.fp).expect("endpoints"),
            ),
            (
                "bottom-right",
                self.fp.then(&self.bp).expect("endpoints"),
                self.ap.then(&self.fpp).expect("endpoints"),
            ),
            (
                "top-rectangle",
                self.k.then(&aa).expect("endpoints"),
                uu.then(&self.kpp).expect("endpoints"),
            ),
            (
                "bottom-rectangle",
                self.f.then(&bb).expect("endpoints"),
                aa.then(&self.fpp).expect("endpoints"),
            ),
        ]
    }

    pub fn objects(&self) -> [(&'static str, &Arc<FiniteAlgebra>); 9] {
        [
            ("K", self.u.source()),
            ("K'", self.up.source()),
            ("K''", self.up.target()),
            ("A", self.a.source()),
            ("A'", self.ap.source()),
            ("A''", self.ap.target()),
            ("B", self.b.source()),
            ("B'", self.bp.source()),
            ("B''", self.bp.target()),
        ]
    }

    pub fn object_sizes(&self) -> [usize; 9] {
        let objs = self.objects();
        std::array::from_fn(|i| objs[i].1.size())
    }

    pub fn lower_two_thirds(&self) -> GridLowerTwoThirds {
        GridLowerTwoThirds {
            f: self.f.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            u: self.up.clone(),
            kp: self.kp.clone(),
            fp: self.fp.clone(),
            kpp: self.kpp.clone(),
            fpp: self.fpp.clone(),
            ap: self.ap.clone(),
            bp: self.bp.clone(),
        }
    }
}

/// The input shape of the regular-epi transfer lemma: a 3x3 grid without
/// the top-left object and its two arrows.
///
/// ```text
///                A  --f-->  B
///                |a         |b
///                v          v
///     K' --k'-> A' --f'--> B'
///     |u        |a'        |b'
///     v          v          v
///     K'' -k''-> A'' -f''-> B''
/// ```
#[derive(Debug, Clone)]
pub struct GridLowerTwoThirds {
    pub f: Homomorphism,
    pub a: Homomorphism,
    pub b: Homomorphism,
    /// `K' -> K''`, the arrow whose regular-epiness transfers to `f`.
    pub u: Homomorphism,
    pub kp: Homomorphism,
    pub fp: Homomorphism,
    pub kpp: Homomorphism,
    pub fpp: Homomorphism,
    pub ap: Homomorphism,
    pub bp: Homomorphism,
}

impl GridLowerTwoThirds {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        f: Homomorphism,
        a: Homomorphism,
        b: Homomorphism,
        u: Homomorphism,
        kp: Homomorphism,
        fp: Homomorphism,
        kpp: Homomorphism,
        fpp: Homomorphism,
        ap: Homomorphism,
        bp: Homomorphism,
    ) -> Result<Self, LemmaError> {
        let ok = f.source() == a.source()
            && f.target() == b.source()
            && a.target() == fp.source()
            && b.target() == fp.target()
            && kp.target() == fp.source()
            && kpp.target() == fpp.source()
            && u.source() == kp.source()
            && u.target() == kpp.source()
            && ap.source() == fp.source()
            && ap.target() == fpp.source()
            && bp.source() == fp.target()
            && bp.target() == fpp.target();
        if !ok {
            return Err(LemmaError::GridEndpoints("lower-two-thirds"));
        }
        let squares = [
            (
                "upper",
                f.then(&b).expect("endpoints"),
                a.then(&fp).expect("endpoints"),
            ),
            (
                "kernel",
                kp.then(&ap).expect("endpoints"),
                u.then(&kpp).expect("endpoints"),
            ),
            (
                "lower",
                fp.then(&bp).expect("endpoints"),
                ap.then(&fpp).expect("endpoints"),
            ),
        ];
        for (name, lhs, rhs) in squares {
            if lhs != rhs {
                return Err(LemmaError::GridSquare(name));
            }
        }
        Ok(GridLowerTwoThirds {
            f,
            a,
            b,
            u,
            kp,
            fp,
            kpp,
            fpp,
            ap,
            bp,
        })
    }
}

/// Regular-epi transfer: with exact middle/right rows and exact columns,
/// matching zero parts and `u` surjective, `f` is surjective.
pub fn verify_regepi_transfer(p: &GridLowerTwoThirds) -> Verdict {
    let z_bp_bpp = z_iso(p.fp.target(), p.fpp.target()).expect("within budget");
    let z_bpp_app = z_iso(p.fpp.target(), p.fpp.source()).expect("within budget");
    let hypotheses = vec![
        exactness_clause(
            "middle-row-exact",
            &is_zexact(&p.kp, &p.fp).expect("endpoints"),
        ),
        exactness_clause(
            "last-row-exact",
            &is_zexact(&p.kpp, &p.fpp).expect("endpoints"),
        ),
        exactness_clause(
            "a-column-exact",
            &is_zexact(&p.a, &p.ap).expect("endpoints"),
        ),
        exactness_clause(
            "b-column-exact",
            &is_zexact(&p.b, &p.bp).expect("endpoints"),
        ),
        Clause::new("zero-parts-bp-bpp-agree", z_bp_bpp.is_some()),
        Clause::new("zero-parts-bpp-app-agree", z_bpp_app.is_some()),
        Clause::new("u-surjective", p.u.classify().surjective),
    ];
    let conclusions = vec![Clause::with_witness(
        "f-surjective",
        p.f.classify().surjective,
        json!({ "map": p.f.map() }),
    )];
    Verdict::from_clauses("regepi-transfer", hypotheses, conclusions)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NineVariant {
    A,
    B,
    C,
}

impl NineVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            NineVariant::A => "a",
            NineVariant::B => "b",
            NineVariant::C => "c",
        }
    }
}

/// Nine lemma over a commutative 3x3 grid with Z-exact columns and
/// `Z(B') ≅ Z(B'') ≅ Z(A'')`:
/// (a) with `Z(B) ≅ Z(B')` and rows 1, 2 exact, row 3 is exact;
/// (b) with rows 2, 3 exact, row 1 is exact;
/// (c) with `a'∘a ∈ N_Z` and rows 1, 3 exact, row 2 is exact.
pub fn verify_nine(g: &Grid3x3, variant: NineVariant) -> Verdict {
    let mut hypotheses = vec![
        exactness_clause(
            "column-1-exact",
            &is_zexact(&g.k, &g.f).expect("grid endpoints"),
        ),
        exactness_clause(
            "column-2-exact",
            &is_zexact(&g.kp, &g.fp).expect("grid endpoints"),
        ),
        exactness_clause(
            "column-3-exact",
            &is_zexact(&g.kpp, &g.fpp).expect("grid endpoints"),
        ),
        Clause::new(
            "zero-parts-bp-bpp-agree",
            z_iso(g.bp.source(), g.bp.target())
                .expect("within budget")
                .is_some(),
        ),
        Clause::new(
            "zero-parts-bpp-app-agree",
            z_iso(g.bp.target(), g.ap.target())
                .expect("within budget")
                .is_some(),
        ),
    ];
    let row1 = || exactness_clause("row-1-exact", &is_zexact(&g.u, &g.up).expect("endpoints"));
    let row2 = || exactness_clause("row-2-exact", &is_zexact(&g.a, &g.ap).expect("endpoints"));
    let row3 = || exactness_clause("row-3-exact", &is_zexact(&g.b, &g.bp).expect("endpoints"));
    let conclusions = match variant {
        NineVariant::A => {
            hypotheses.push(Clause::new(
                "zero-parts-b-bp-agree",
                z_iso(g.b.source(), g.b.target())
                    .expect("within budget")
                    .is_some(),
            ));
            hypotheses.push(row1());
            hypotheses.push(row2());
            vec![row3()]
        }
        NineVariant::B => {
            hypotheses.push(row2());
            hypotheses.push(row3());
            vec![row1()]
        }
        NineVariant::C => {
            let aa = g.a.then(&g.ap).expect("endpoints");
            hypotheses.push(Clause::new(
                "middle-composite-factors-trivially",
                nz_membership(&aa).is_some(),
            ));
            hypotheses.push(row1());
            hypotheses.push(row3());
            vec![row2()]
        }
    };
    Verdict::from_clauses(
        format!("nine-lemma-{}", variant.as_str()),
        hypotheses,
        conclusions,
    )
}

/// Why the grid generator rejected a congruence pair.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GridRejection {
    #[error("square `{0}` does not commute")]
    SquareNotCommuting(&'static str),
    #[error("column {0} is not Z-exact")]
    ColumnNotExact(&'static str),
    #[error("row {0} is not Z-exact")]
    RowNotExact(&'static str),
    #[error("zero parts `{0}` do not agree")]
    ZeroPartMismatch(&'static str),
    #[error("restriction arrow `{0}` escapes its target subalgebra")]
    RestrictionEscape(&'static str),
}

impl GridRejection {
    pub fn key(&self) -> &'static str {
        match self {
            GridRejection::SquareNotCommuting(_) => "square-not-commuting",
            GridRejection::ColumnNotExact(_) => "column-not-exact",
            GridRejection::RowNotExact(_) => "row-not-exact",
            GridRejection::ZeroPartMismatch(_) => "zero-part-mismatch",
            GridRejection::RestrictionEscape(_) => "restriction-escape",
        }
    }
}

/// Build the raw quotient grid for `(A', θ, ψ)`:
/// `A'' = A'/θ`, `B' = A'/ψ`, `B'' = A'/(θ∨ψ)`, middle/bottom rows by
/// Z-kernels of the induced maps, left column and kernel row by
/// restriction. No acceptance filters are applied.
pub fn build_quotient_grid(
    aprime: &Arc<FiniteAlgebra>,
    theta: &Congruence,
    psi: &Congruence,
) -> Result<Grid3x3, GridRejection> {
    assert_eq!(theta.algebra(), aprime, "theta lives on A'");
    assert_eq!(psi.algebra(), aprime, "psi lives on A'");
    let join = congruence_join(theta, psi).expect("same algebra");
    let q_theta = quotient(aprime, theta); // a' : A' -> A''
    let q_psi = quotient(aprime, psi); // f' : A' -> B'
    let q_join = quotient(aprime, &join);
    let ap = q_theta.surjection.clone();
    let fp = q_psi.surjection.clone();
    let bp = induced_quotient_map(&q_psi, psi, &q_join, &join).expect("psi refines the join");
    let fpp = induced_quotient_map(&q_theta, theta, &q_join, &join).expect("theta refines");

    // middle and bottom rows: kernels of a' and b'
    let ker_ap = zkernel(&ap);
    let a = ker_ap.k().clone(); // A -> A'
    let ker_bp = zkernel(&bp);
    let b = ker_bp.k().clone(); // B -> B'

    // f : A -> B is f' restricted along the kernel inclusions
    let f = corestrict(&a.then(&fp).expect("endpoints"), ker_bp.sub())
        .map_err(|_| GridRejection::RestrictionEscape("f"))?;

    // columns: kernels of f, f', f''
    let ker_f = zkernel(&f);
    let k = ker_f.k().clone();
    let ker_fp = zkernel(&fp);
    let kp = ker_fp.k().clone();
    let ker_fpp = zkernel(&fpp);
    let kpp = ker_fpp.k().clone();

    // kernel row by restriction
    let u = corestrict(&k.then(&a).expect("endpoints"), ker_fp.sub())
        .map_err(|_| GridRejection::RestrictionEscape("u"))?;
    let up = corestrict(&kp.then(&ap).expect("endpoints"), ker_fpp.sub())
        .map_err(|_| GridRejection::RestrictionEscape("u'"))?;

    Grid3x3::new(u, up, a, ap, b, bp, k, f, kp, fp, kpp, fpp)
        .map_err(|e| match e {
            LemmaError::GridSquare(name) => GridRejection::SquareNotCommuting(name),
            _ => GridRejection::SquareNotCommuting("endpoints"),
        })
}

/// The acceptance filters for a generated grid: all squares commute,
/// columns exact, rows 2 and 3 exact, zero-part side conditions hold.
pub fn grid_acceptance(g: &Grid3x3) -> Result<(), GridRejection> {
    for (name, lhs, rhs) in g.square_equations() {
        if lhs != rhs {
            return Err(GridRejection::SquareNotCommuting(name));
        }
    }
    for (name, kk, ff) in [
        ("1", &g.k, &g.f),
        ("2", &g.kp, &g.fp),
        ("3", &g.kpp, &g.fpp),
    ] {
        if !is_zexact(kk, ff).expect("grid endpoints").exact {
            return Err(GridRejection::ColumnNotExact(name));
        }
    }
    for (name, kk, ff) in [("2", &g.a, &g.ap), ("3", &g.b, &g.bp)] {
        if !is_zexact(kk, ff).expect("grid endpoints").exact {
            return Err(GridRejection::RowNotExact(name));
        }
    }
    if z_iso(g.bp.source(), g.bp.target())
        .expect("within budget")
        .is_none()
    {
        return Err(GridRejection::ZeroPartMismatch("B'/B''"));
    }
    if z_iso(g.bp.target(), g.ap.target())
        .expect("within budget")
        .is_none()
    {
        return Err(GridRejection::ZeroPartMismatch("B''/A''"));
    }
    Ok(())
}

/// Constructive-then-filter grid generation; rejection is a value, not an
/// error.
pub fn generate_grid(
    aprime: &Arc<FiniteAlgebra>,
    theta: &Congruence,
    psi: &Congruence,
) -> Result<Grid3x3, GridRejection> {
    let grid = build_quotient_grid(aprime, theta, psi)?;
    grid_acceptance(&grid)?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate_congruences, product};
    use crate::catalog;
    use crate::verdict::VerdictKind;
    use crate::zcore::zero_part;

    fn z(n: usize) -> Arc<FiniteAlgebra> {
        catalog::cyclic_ring(n)
    }

    fn identity_ladder(a: &Arc<FiniteAlgebra>) -> LadderDiagram {
        let ker = zkernel(&Homomorphism::identity(a));
        LadderDiagram::new(
            ker.k().clone(),
            Homomorphism::identity(a),
            ker.k().clone(),
            Homomorphism::identity(a),
            Homomorphism::identity(ker.kernel()),
            Homomorphism::identity(a),
            Homomorphism::identity(a),
        )
        .unwrap()
    }

    #[test]
    fn short_five_on_identity_ladder() {
        let d = identity_ladder(&product(&z(2), &z(2)).unwrap().algebra);
        for mode in [ShortFiveMode::Iso, ShortFiveMode::RegEpi, ShortFiveMode::Mono] {
            let v = verify_short_five(&d, mode);
            assert_eq!(v.kind, VerdictKind::Holds, "mode {mode:?}");
        }
    }

    #[test]
    fn pb_iff_mono_on_identity_ladder() {
        let d = identity_ladder(&z(4));
        let v = verify_pb_iff_mono(&d);
        assert_eq!(v.kind, VerdictKind::Holds);
    }

    /// The essentiality example: rows Z2 = Z2 = Z2 over 1 = 1 = 1.
    fn collapse_ladder() -> LadderDiagram {
        let two = z(2);
        let one = z(1);
        let bang = Homomorphism::new(two.clone(), one.clone(), vec![0, 0]).unwrap();
        LadderDiagram::new(
            Homomorphism::identity(&two),
            Homomorphism::identity(&two),
            Homomorphism::identity(&one),
            Homomorphism::identity(&one),
            bang.clone(),
            bang.clone(),
            bang,
        )
        .unwrap()
    }

    #[test]
    fn pb_iff_mono_zero_part_hypothesis_is_essential() {
        let d = collapse_ladder();
        let v = verify_pb_iff_mono(&d);
        assert_eq!(v.kind, VerdictKind::HypothesesUnmet);
        // the biconditional genuinely fails: the left square is a pullback
        // but b is not injective
        assert_eq!(v.exploratory, Some(false));
        let left = Square::new(d.k.clone(), d.a.clone(), d.u.clone(), d.kp.clone()).unwrap();
        assert!(is_pullback(&left).is_pullback);
        assert!(!d.b.classify().injective);
    }

    fn bool_cube_grid() -> Grid3x3 {
        // A' = 2³, θ = kernel of the projection to bits {0,1},
        // ψ = kernel of the projection to bits {1,2}
        let b8 = catalog::boolean_algebra(3);
        let theta =
            Congruence::from_partition(b8.clone(), (0..8).map(|x| x & 0b011).collect()).unwrap();
        let psi =
            Congruence::from_partition(b8.clone(), (0..8).map(|x| x & 0b110).collect()).unwrap();
        generate_grid(&b8, &theta, &psi).expect("the cube grid is accepted")
    }

    #[test]
    fn boolean_cube_grid_sizes() {
        let g = bool_cube_grid();
        assert_eq!(g.object_sizes(), [2, 4, 4, 4, 8, 4, 4, 4, 2]);
    }

    #[test]
    fn nine_lemma_on_boolean_cube_grid() {
        let g = bool_cube_grid();
        for variant in [NineVariant::A, NineVariant::B, NineVariant::C] {
            let v = verify_nine(&g, variant);
            assert_eq!(v.kind, VerdictKind::Holds, "variant {variant:?}");
        }
        // variant (b) content: the top row is exact
        assert!(is_zexact(&g.u, &g.up).unwrap().exact);
        assert!(g.up.classify().surjective);
    }

    #[test]
    fn identity_congruences_give_trivial_kernel_column() {
        for alg in [z(4), catalog::boolean_algebra(2)] {
            let id = Congruence::identity(alg.clone());
            let g = generate_grid(&alg, &id, &id).expect("identity pair accepted");
            // the left column objects are the zero parts
            let zsize = zero_part(&alg).zero.size();
            assert_eq!(g.f.source().size(), zsize);
            assert_eq!(g.b.source().size(), zsize);
        }
    }

    #[test]
    fn factor_congruence_grid_on_f2_squared() {
        // decision recorded by the filters either way
        let p = product(&z(2), &z(2)).unwrap().algebra;
        let theta = Congruence::from_partition(p.clone(), vec![0, 0, 1, 1]).unwrap();
        let psi = Congruence::from_partition(p.clone(), vec![0, 1, 0, 1]).unwrap();
        match generate_grid(&p, &theta, &psi) {
            Ok(g) => {
                for variant in [NineVariant::A, NineVariant::B, NineVariant::C] {
                    assert_eq!(verify_nine(&g, variant).kind, VerdictKind::Holds);
                }
            }
            Err(reason) => {
                // must be a zero-part filter, never a structural failure
                assert!(matches!(reason, GridRejection::ZeroPartMismatch(_)));
            }
        }
    }

    #[test]
    fn regepi_transfer_on_boolean_cube_portion() {
        let g = bool_cube_grid();
        let portion = g.lower_two_thirds();
        let v = verify_regepi_transfer(&portion);
        assert_eq!(v.kind, VerdictKind::Holds);
        assert!(portion.u.classify().surjective);
        assert!(portion.f.classify().surjective);
    }

    #[test]
    fn regepi_transfer_trivial_portion() {
        // all B-row objects trivial: grid from the full congruence
        let alg = catalog::boolean_algebra(2);
        let full = Congruence::full(alg.clone());
        let g = build_quotient_grid(&alg, &full, &full).unwrap();
        let v = verify_regepi_transfer(&g.lower_two_thirds());
        assert_eq!(v.kind, VerdictKind::Holds);
    }

    #[test]
    fn generated_grids_are_fully_exact() {
        // for every accepted grid all three variants hold on the same data
        let b4 = catalog::boolean_algebra(2);
        for theta in enumerate_congruences(&b4).unwrap() {
            for psi in enumerate_congruences(&b4).unwrap() {
                if let Ok(g) = generate_grid(&b4, &theta, &psi) {
                    for variant in [NineVariant::A, NineVariant::B, NineVariant::C] {
                        assert_eq!(
                            verify_nine(&g, variant).kind,
                            VerdictKind::Holds,
                            "theta {:?} psi {:?} variant {:?}",
                            theta.blocks(),
                            psi.blocks(),
                            variant
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn malformed_ladder_is_an_error() {
        let two = z(2);
        let four = z(4);
        let err = LadderDiagram::new(
            Homomorphism::identity(&two),
            Homomorphism::identity(&four),
            Homomorphism::identity(&two),
            Homomorphism::identity(&two),
            Homomorphism::identity(&two),
            Homomorphism::identity(&two),
            Homomorphism::identity(&two),
        )
        .unwrap_err();
        assert_eq!(err, LemmaError::LadderEndpoints);
    }
}
