//! Acceptance suite: one test per release criterion, each printing a
//! PASS line. Expected values are re-derived here by independent oracles
//! (set-level scans, bitmask arithmetic) before being asserted against
//! the engine.

use std::collections::HashSet;
use std::sync::Arc;

use zexact::algebra::{product, Congruence, Element, FiniteAlgebra};
use zexact::campaign::{run_campaign, CampaignConfig, LemmaSelector};
use zexact::catalog::{build_catalog, cyclic_ring};
use zexact::diagrams::{is_pullback, kernels_along_pullback, KernelSquareMode, Square};
use zexact::hom::{enumerate_homs, Homomorphism};
use zexact::lemmas::{
    generate_grid, verify_pb_iff_mono, LadderDiagram, NineVariant, ShortFiveMode,
};
use zexact::verdict::VerdictKind;
use zexact::zcore::{
    mono_characterization, nz_membership, verify_zero_context, z_iso, z_map, zcokernel_search,
    zero_part, zkernel, zkernel_carrier, CandidateCheck, CandidateFailure, InitialOutcome,
    ZCokernelOutcome,
};

fn pass(n: usize, name: &str) {
    println!("ACCEPTANCE {n} ({name}): PASS");
}

#[test]
fn criterion_1_context_suite() {
    for (preset, bound) in [("bool", 8), ("ring1", 8), ("heyting", 5), ("mv", 5)] {
        let cat = build_catalog(preset, bound).unwrap();
        let report = verify_zero_context(&cat.algebras).unwrap();
        assert!(
            report.holds,
            "context conditions fail on {preset}: {:?}",
            report.clauses
        );
        assert_eq!(report.clauses.len(), 3);
        assert!(report.clauses.iter().all(|c| c.ok));
    }
    pass(1, "context suite");
}

/// Additive order of the unit, read off the ring tables.
fn ring_characteristic(a: &FiniteAlgebra) -> usize {
    let add = a.signature().op_index("add").unwrap();
    let one = a.eval(a.signature().op_index("one").unwrap(), &[]);
    let zero = a.eval(a.signature().op_index("zero").unwrap(), &[]);
    let mut acc = one;
    let mut n = 1;
    while acc != zero {
        acc = a.eval(add, &[acc, one]);
        n += 1;
    }
    n
}

#[test]
fn criterion_2_zero_part_facts() {
    let bool_cat = build_catalog("bool", 8).unwrap();
    for k in 1..=3u32 {
        let alg = bool_cat.get(&format!("B{}", 1usize << k)).unwrap();
        assert_eq!(zero_part(alg).zero.size(), 2, "Z(2^{k})");
    }
    let ring_cat = build_catalog("ring1", 8).unwrap();
    for n in 2..=8 {
        let alg = ring_cat.get(&format!("Z{n}")).unwrap();
        assert_eq!(zero_part(alg).zero.size(), n, "Z(Z{n}) must be all of it");
    }
    // zero parts isomorphic iff equal characteristic, over the whole catalog
    for a in &ring_cat.algebras {
        for b in &ring_cat.algebras {
            assert_eq!(
                z_iso(a, b).unwrap().is_some(),
                ring_characteristic(a) == ring_characteristic(b),
                "characteristic law fails for {} vs {}",
                a.id(),
                b.id()
            );
        }
    }
    pass(2, "zero-part facts");
}

/// Independent constant-closure oracle: worklist over a hash set, distinct
/// from the membership-vector fixpoint in the engine.
fn closure_oracle(a: &FiniteAlgebra) -> HashSet<Element> {
    let mut known: HashSet<Element> = HashSet::new();
    for c in a.signature().constants() {
        known.insert(a.eval(c, &[]));
    }
    loop {
        let snapshot: Vec<Element> = known.iter().copied().collect();
        let before = known.len();
        for (op, sym) in a.signature().operations().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            let mut idx = vec![0usize; sym.arity];
            loop {
                let args: Vec<Element> = idx.iter().map(|&i| snapshot[i]).collect();
                known.insert(a.eval(op, &args));
                // advance the mixed-radix counter over snapshot indices
                let mut pos = sym.arity;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < snapshot.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        if known.len() == before {
            return known;
        }
    }
}

#[test]
fn criterion_3_zkernel_oracle_equivalence() {
    for (preset, bound) in [("bool", 8), ("ring1", 8)] {
        let cat = build_catalog(preset, bound).unwrap();
        let algebras = &cat.algebras;
        for src in algebras {
            for dst in algebras {
                for f in enumerate_homs(src, dst).unwrap() {
                    // oracle: direct preimage scan against an independently
                    // computed constant closure
                    let closure = closure_oracle(dst);
                    let expected: Vec<Element> = (0..src.size())
                        .filter(|&x| closure.contains(&f.apply(x)))
                        .collect();
                    let ker = zkernel(&f);
                    assert_eq!(ker.carrier(), &expected[..]);

                    // universal property against every catalog probe
                    for probe_src in algebras {
                        for e in enumerate_homs(probe_src, src).unwrap() {
                            let factors = nz_membership(&e.then(&f).unwrap()).is_some();
                            let lands =
                                e.map().iter().all(|v| expected.binary_search(v).is_ok());
                            assert_eq!(factors, lands);
                            if factors {
                                // the unique mediating arrow: corestriction
                                let phi = zexact::hom::corestrict(&e, ker.sub()).unwrap();
                                assert_eq!(phi.then(ker.k()).unwrap(), e);
                            }
                        }
                    }
                }
            }
        }
    }
    pass(3, "Z-kernel oracle equivalence and universal property");
}

fn campaign(preset: &str, bound: usize, variant: LemmaSelector, count: usize) -> CampaignConfig {
    let cat = build_catalog(preset, bound).unwrap();
    CampaignConfig {
        seed: 42,
        preset: cat.preset.clone(),
        catalog: cat.algebras.clone(),
        count,
        variant,
    }
}

#[test]
fn criterion_4_short_five_campaigns() {
    let targets = [
        (ShortFiveMode::Iso, 200),
        (ShortFiveMode::RegEpi, 100),
        (ShortFiveMode::Mono, 100),
    ];
    for preset in ["bool", "ring1"] {
        for (mode, count) in targets {
            let cfg = campaign(preset, 8, LemmaSelector::ShortFive(mode), count);
            let first = run_campaign(&cfg).unwrap();
            assert_eq!(first.counters.failed, 0, "{preset} {mode:?}");
            assert!(first.counters.accepted >= count as u64);
            assert_eq!(first.counters.held, first.counters.accepted);
            // deterministic report bytes across two runs
            let second = run_campaign(&cfg).unwrap();
            assert_eq!(
                serde_json::to_vec(&first).unwrap(),
                serde_json::to_vec(&second).unwrap()
            );
        }
    }
    pass(4, "short five campaigns, seed 42, deterministic");
}

#[test]
fn criterion_5_nine_lemma_campaigns_and_pinned_grid() {
    for preset in ["bool", "ring1"] {
        for variant in [NineVariant::A, NineVariant::B, NineVariant::C] {
            let cfg = campaign(preset, 8, LemmaSelector::Nine(variant), 100);
            let report = run_campaign(&cfg).unwrap();
            assert_eq!(report.counters.failed, 0, "{preset} {variant:?}");
            assert!(report.counters.accepted >= 100);
        }
    }

    // pinned grid: A' = 2^3, θ = kernel of the projection to bits {0,1},
    // ψ = kernel of the projection to bits {1,2}
    let b8 = build_catalog("bool", 8).unwrap().get("B8").unwrap().clone();
    let theta =
        Congruence::from_partition(b8.clone(), (0..8).map(|x| x & 0b011).collect()).unwrap();
    let psi =
        Congruence::from_partition(b8.clone(), (0..8).map(|x| x & 0b110).collect()).unwrap();

    // oracle: re-derive all nine object sizes by bitmask preimage scans
    let masks: Vec<usize> = (0..8).collect();
    let quotient_size = |m: usize| masks.iter().map(|x| x & m).collect::<HashSet<_>>().len();
    let app = quotient_size(0b011); // A'' = A'/θ
    let bp = quotient_size(0b110); // B' = A'/ψ
    let bpp = quotient_size(0b010); // B'' = A'/(θ∨ψ)
    // A = a'-preimage of Z(A'') = {x : x&011 ∈ {000, 011}}
    let a_carrier: Vec<usize> = masks
        .iter()
        .copied()
        .filter(|x| [0b000, 0b011].contains(&(x & 0b011)))
        .collect();
    // B = b'-preimage of Z(B''); B'' is two-element, hence trivial, so all
    // of B' qualifies
    let b_size = bp;
    // K' = f'-preimage of Z(B') = {x : x&110 ∈ {000, 110}}
    let kp_carrier: Vec<usize> = masks
        .iter()
        .copied()
        .filter(|x| [0b000, 0b110].contains(&(x & 0b110)))
        .collect();
    // K'' = f''-preimage of Z(B''): all of A'' since B'' is trivial
    let kpp_size = app;
    // K: inside A, f is x -> x&110 landing in B = B' with Z(B) = {000, 110}
    let k_carrier: Vec<usize> = a_carrier
        .iter()
        .copied()
        .filter(|x| [0b000, 0b110].contains(&(x & 0b110)))
        .collect();
    let expected = [
        k_carrier.len(),
        kp_carrier.len(),
        kpp_size,
        a_carrier.len(),
        8,
        app,
        b_size,
        bp,
        bpp,
    ];
    assert_eq!(expected, [2, 4, 4, 4, 8, 4, 4, 4, 2]);

    let grid = generate_grid(&b8, &theta, &psi).expect("pinned grid is accepted");
    assert_eq!(grid.object_sizes(), expected);
    pass(5, "nine lemma campaigns and pinned 2^3 grid");
}

#[test]
fn criterion_6_counterexample_regressions() {
    // (i) identity rows over Z4 -> Z2: a pullback square whose horizontal
    // Z-kernels have sizes 4 vs 2
    let z4 = cyclic_ring(4);
    let z2 = cyclic_ring(2);
    let p = Homomorphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
    let square = Square::new(
        Homomorphism::identity(&z4),
        p.clone(),
        p.clone(),
        Homomorphism::identity(&z2),
    )
    .unwrap();
    assert!(is_pullback(&square).is_pullback);
    assert_eq!(zkernel_carrier(&Homomorphism::identity(&z4)).len(), 4);
    assert_eq!(zkernel_carrier(&Homomorphism::identity(&z2)).len(), 2);
    let verdict = kernels_along_pullback(&square, KernelSquareMode::Forward);
    assert_eq!(verdict.kind, VerdictKind::HypothesesUnmet);
    assert_eq!(verdict.exploratory, Some(false)); // conclusion genuinely fails

    // (ii) the identity on Z2×Z2 has no Z-cokernel among quotient
    // candidates against the projections
    let prod = product(&z2, &z2).unwrap();
    let id = Homomorphism::identity(&prod.algebra);
    let probes = vec![prod.proj_left.clone(), prod.proj_right.clone()];
    match zcokernel_search(&id, 16, &probes).unwrap() {
        ZCokernelOutcome::NotFound { refutations } => {
            assert_eq!(refutations.len(), 4);
            for r in &refutations {
                assert!(matches!(
                    r.failure,
                    CandidateFailure::CompositeNotInNz
                        | CandidateFailure::ProbeObstruction { .. }
                ));
            }
        }
        ZCokernelOutcome::Found { .. } => panic!("must not find a Z-cokernel"),
    }

    // (iii) π₁ is not a Z-cokernel: probe π₂ cannot factor through it
    let cat = build_catalog("ring1", 8).unwrap();
    let mut tested = 0;
    for c in &cat.algebras {
        for f in enumerate_homs(c, &prod.algebra).unwrap() {
            tested += 1;
            match zexact::zcore::zcokernel_candidate_check(
                &f,
                &prod.proj_left,
                &[prod.proj_right.clone()],
            )
            .unwrap()
            {
                CandidateCheck::Fails(CandidateFailure::ProbeObstruction {
                    probe: 0, ..
                }) => {}
                other => panic!("π₁ must fail against π₂, got {other:?}"),
            }
        }
    }
    assert!(tested >= 4);

    // (iv) the Z2-over-1 ladder: hypotheses unmet, biconditional fails
    let one = cyclic_ring(1);
    let bang = Homomorphism::new(z2.clone(), one.clone(), vec![0, 0]).unwrap();
    let ladder = LadderDiagram::new(
        Homomorphism::identity(&z2),
        Homomorphism::identity(&z2),
        Homomorphism::identity(&one),
        Homomorphism::identity(&one),
        bang.clone(),
        bang.clone(),
        bang,
    )
    .unwrap();
    let verdict = verify_pb_iff_mono(&ladder);
    assert_eq!(verdict.kind, VerdictKind::HypothesesUnmet);
    assert_eq!(verdict.exploratory, Some(false));
    pass(6, "counterexample regressions");
}

#[test]
fn criterion_7_mono_characterization() {
    let mut applicable = 0;
    for (preset, bound) in [("bool", 8), ("ring1", 8)] {
        let cat = build_catalog(preset, bound).unwrap();
        for src in &cat.algebras {
            for dst in &cat.algebras {
                for f in enumerate_homs(src, dst).unwrap() {
                    let verdict = mono_characterization(&f);
                    assert_ne!(
                        verdict.kind,
                        VerdictKind::Fails,
                        "mono characterization refuted at {} -> {}",
                        src.id(),
                        dst.id()
                    );
                    if verdict.kind == VerdictKind::Holds {
                        applicable += 1;
                    }
                }
            }
        }
    }
    assert!(applicable > 0);

    // Z4 -> Z2: kernel inclusion bijective, map not injective, z_map not
    // bijective
    let p = Homomorphism::new(cyclic_ring(4), cyclic_ring(2), vec![0, 1, 0, 1]).unwrap();
    assert!(zkernel(&p).k().classify().bijective);
    assert!(!p.classify().injective);
    assert!(!z_map(&p).classify().bijective);
    assert_eq!(mono_characterization(&p).kind, VerdictKind::HypothesesUnmet);
    pass(7, "mono characterization");
}

#[test]
fn criterion_8_initiality() {
    let cat = build_catalog("bool", 8).unwrap();
    let zlist: Vec<Arc<FiniteAlgebra>> = vec![
        cat.get("B1").unwrap().clone(),
        cat.get("B2").unwrap().clone(),
    ];
    match zexact::zcore::initial_from_catalog(&zlist, &cat.algebras).unwrap() {
        InitialOutcome::Initial {
            object,
            certificates,
        } => {
            assert_eq!(object.size(), 2);
            assert_eq!(certificates.len(), cat.algebras.len());
            for (cert, target) in certificates.iter().zip(&cat.algebras) {
                assert_eq!(cert.source(), &object);
                assert_eq!(cert.target(), target);
                // uniqueness re-checked directly
                assert_eq!(enumerate_homs(&object, target).unwrap().len(), 1);
            }
        }
        InitialOutcome::NotInitial { target, .. } => {
            panic!("bool must have an initial object; failed at {target}")
        }
    }
    pass(8, "initial object from the catalog");
}
