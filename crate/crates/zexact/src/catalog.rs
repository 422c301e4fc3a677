//! Builtin variety presets and their finite-model catalogs.
//!
//! `ring1` is unitary rings, `bool` Boolean algebras, `heyt` Heyting
//! algebras (as bounded chains here) and `mv` MV-algebras (Łukasiewicz
//! chains). Every builtin algebra is validated against its preset when a
//! catalog is built.

use std::path::PathBuf;
use std::sync::Arc;

use crate::algebra::{
    check_model, product, AlgebraError, Equation, FiniteAlgebra, OpTable, Signature, Term,
    VarietyPreset,
};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown preset `{0}` (expected ring1, bool, heyting or mv)")]
    UnknownPreset(String),
    #[error("catalog bound must be at least 1")]
    BadBound,
    #[error("algebra `{id}` violates the {preset} axioms")]
    ModelViolation { id: String, preset: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn var(i: usize) -> Term {
    Term::var(i)
}

fn app(symbol: &str, args: Vec<Term>) -> Term {
    Term::app(symbol, args)
}

fn eq(lhs: Term, rhs: Term) -> Equation {
    Equation { lhs, rhs }
}

/// Unitary rings: (add, neg, mul, zero, one).
pub fn ring1() -> VarietyPreset {
    let sig = Signature::new(
        "ring1",
        vec![
            ("add", 2),
            ("neg", 1),
            ("mul", 2),
            ("zero", 0),
            ("one", 0),
        ],
    )
    .expect("ring1 signature");
    let x = || var(0);
    let y = || var(1);
    let z = || var(2);
    let axioms = vec![
        eq(
            app("add", vec![app("add", vec![x(), y()]), z()]),
            app("add", vec![x(), app("add", vec![y(), z()])]),
        ),
        eq(app("add", vec![x(), y()]), app("add", vec![y(), x()])),
        eq(app("add", vec![x(), app("zero", vec![])]), x()),
        eq(
            app("add", vec![x(), app("neg", vec![x()])]),
            app("zero", vec![]),
        ),
        eq(
            app("mul", vec![app("mul", vec![x(), y()]), z()]),
            app("mul", vec![x(), app("mul", vec![y(), z()])]),
        ),
        eq(
            app("mul", vec![x(), app("add", vec![y(), z()])]),
            app("add", vec![app("mul", vec![x(), y()]), app("mul", vec![x(), z()])]),
        ),
        eq(
            app("mul", vec![app("add", vec![x(), y()]), z()]),
            app("add", vec![app("mul", vec![x(), z()]), app("mul", vec![y(), z()])]),
        ),
        eq(app("mul", vec![app("one", vec![]), x()]), x()),
        eq(app("mul", vec![x(), app("one", vec![])]), x()),
    ];
    VarietyPreset::new(sig, axioms).expect("ring1 axioms")
}

/// Boolean algebras: (meet, join, not, bot, top).
pub fn bool_preset() -> VarietyPreset {
    let sig = Signature::new(
        "bool",
        vec![("meet", 2), ("join", 2), ("not", 1), ("bot", 0), ("top", 0)],
    )
    .expect("bool signature");
    let x = || var(0);
    let y = || var(1);
    let z = || var(2);
    let axioms = vec![
        eq(app("meet", vec![x(), y()]), app("meet", vec![y(), x()])),
        eq(app("join", vec![x(), y()]), app("join", vec![y(), x()])),
        eq(
            app("meet", vec![app("meet", vec![x(), y()]), z()]),
            app("meet", vec![x(), app("meet", vec![y(), z()])]),
        ),
        eq(
            app("join", vec![app("join", vec![x(), y()]), z()]),
            app("join", vec![x(), app("join", vec![y(), z()])]),
        ),
        eq(app("meet", vec![x(), app("join", vec![x(), y()])]), x()),
        eq(app("join", vec![x(), app("meet", vec![x(), y()])]), x()),
        eq(
            app("meet", vec![x(), app("join", vec![y(), z()])]),
            app(
                "join",
                vec![app("meet", vec![x(), y()]), app("meet", vec![x(), z()])],
            ),
        ),
        eq(app("join", vec![x(), app("bot", vec![])]), x()),
        eq(app("meet", vec![x(), app("top", vec![])]), x()),
        eq(
            app("meet", vec![x(), app("not", vec![x()])]),
            app("bot", vec![]),
        ),
        eq(
            app("join", vec![x(), app("not", vec![x()])]),
            app("top", vec![]),
        ),
    ];
    VarietyPreset::new(sig, axioms).expect("bool axioms")
}

/// Heyting algebras: (meet, join, imp, bot, top).
pub fn heyting_preset() -> VarietyPreset {
    let sig = Signature::new(
        "heyting",
        vec![("meet", 2), ("join", 2), ("imp", 2), ("bot", 0), ("top", 0)],
    )
    .expect("heyting signature");
    let x = || var(0);
    let y = || var(1);
    let z = || var(2);
    let axioms = vec![
        eq(app("meet", vec![x(), y()]), app("meet", vec![y(), x()])),
        eq(app("join", vec![x(), y()]), app("join", vec![y(), x()])),
        eq(
            app("meet", vec![app("meet", vec![x(), y()]), z()]),
            app("meet", vec![x(), app("meet", vec![y(), z()])]),
        ),
        eq(
            app("join", vec![app("join", vec![x(), y()]), z()]),
            app("join", vec![x(), app("join", vec![y(), z()])]),
        ),
        eq(app("meet", vec![x(), app("join", vec![x(), y()])]), x()),
        eq(app("join", vec![x(), app("meet", vec![x(), y()])]), x()),
        eq(app("join", vec![x(), app("bot", vec![])]), x()),
        eq(app("meet", vec![x(), app("top", vec![])]), x()),
        eq(app("meet", vec![x(), app("bot", vec![])]), app("bot", vec![])),
        eq(app("join", vec![x(), app("top", vec![])]), app("top", vec![])),
        eq(app("imp", vec![x(), x()]), app("top", vec![])),
        eq(
            app("meet", vec![x(), app("imp", vec![x(), y()])]),
            app("meet", vec![x(), y()]),
        ),
        eq(app("meet", vec![y(), app("imp", vec![x(), y()])]), y()),
        eq(
            app("imp", vec![x(), app("meet", vec![y(), z()])]),
            app(
                "meet",
                vec![app("imp", vec![x(), y()]), app("imp", vec![x(), z()])],
            ),
        ),
    ];
    VarietyPreset::new(sig, axioms).expect("heyting axioms")
}

/// MV-algebras: (oplus, neg, zero, one) with one = ¬zero.
pub fn mv_preset() -> VarietyPreset {
    let sig = Signature::new(
        "mv",
        vec![("oplus", 2), ("neg", 1), ("zero", 0), ("one", 0)],
    )
    .expect("mv signature");
    let x = || var(0);
    let y = || var(1);
    let z = || var(2);
    let axioms = vec![
        eq(
            app("oplus", vec![app("oplus", vec![x(), y()]), z()]),
            app("oplus", vec![x(), app("oplus", vec![y(), z()])]),
        ),
        eq(app("oplus", vec![x(), y()]), app("oplus", vec![y(), x()])),
        eq(app("oplus", vec![x(), app("zero", vec![])]), x()),
        eq(app("neg", vec![app("neg", vec![x()])]), x()),
        eq(
            app("oplus", vec![x(), app("one", vec![])]),
            app("one", vec![]),
        ),
        eq(app("neg", vec![app("zero", vec![])]), app("one", vec![])),
        eq(
            app(
                "oplus",
                vec![app("neg", vec![app("oplus", vec![app("neg", vec![x()]), y()])]), y()],
            ),
            app(
                "oplus",
                vec![app("neg", vec![app("oplus", vec![app("neg", vec![y()]), x()])]), x()],
            ),
        ),
    ];
    VarietyPreset::new(sig, axioms).expect("mv axioms")
}

pub fn preset(name: &str) -> Option<VarietyPreset> {
    match name {
        "ring1" => Some(ring1()),
        "bool" => Some(bool_preset()),
        "heyting" => Some(heyting_preset()),
        "mv" => Some(mv_preset()),
        _ => None,
    }
}

/// The ring Z/n; n = 1 is the terminal one-element ring.
pub fn cyclic_ring(n: usize) -> Arc<FiniteAlgebra> {
    assert!(n >= 1);
    let sig = ring1().signature().clone();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            add.push((a + b) % n);
            mul.push((a * b) % n);
        }
    }
    let neg = (0..n).map(|a| (n - a) % n).collect();
    FiniteAlgebra::new(
        format!("Z{n}"),
        sig,
        n,
        vec![
            OpTable::new(2, add),
            OpTable::new(1, neg),
            OpTable::new(2, mul),
            OpTable::constant(0),
            OpTable::constant(1 % n),
        ],
    )
    .expect("cyclic ring tables")
}

/// The Boolean algebra with 2^exponent elements, carrier = bitmasks.
pub fn boolean_algebra(exponent: u32) -> Arc<FiniteAlgebra> {
    let n = 1usize << exponent;
    let full = n - 1;
    let sig = bool_preset().signature().clone();
    let mut meet = Vec::with_capacity(n * n);
    let mut join = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            meet.push(a & b);
            join.push(a | b);
        }
    }
    let not = (0..n).map(|a| a ^ full).collect();
    FiniteAlgebra::new(
        format!("B{n}"),
        sig,
        n,
        vec![
            OpTable::new(2, meet),
            OpTable::new(2, join),
            OpTable::new(1, not),
            OpTable::constant(0),
            OpTable::constant(full),
        ],
    )
    .expect("boolean tables")
}

/// The n-element Heyting chain 0 < 1 < ... < n-1.
pub fn heyting_chain(n: usize) -> Arc<FiniteAlgebra> {
    assert!(n >= 1);
    let top = n - 1;
    let sig = heyting_preset().signature().clone();
    let mut meet = Vec::with_capacity(n * n);
    let mut join = Vec::with_capacity(n * n);
    let mut imp = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            meet.push(a.min(b));
            join.push(a.max(b));
            imp.push(if a <= b { top } else { b });
        }
    }
    FiniteAlgebra::new(
        format!("C{n}"),
        sig,
        n,
        vec![
            OpTable::new(2, meet),
            OpTable::new(2, join),
            OpTable::new(2, imp),
            OpTable::constant(0),
            OpTable::constant(top),
        ],
    )
    .expect("heyting chain tables")
}

/// The n-element Łukasiewicz chain; element k stands for k/(n-1).
pub fn lukasiewicz_chain(n: usize) -> Arc<FiniteAlgebra> {
    assert!(n >= 1);
    let top = n - 1;
    let sig = mv_preset().signature().clone();
    let mut oplus = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            oplus.push((a + b).min(top));
        }
    }
    let neg = (0..n).map(|a| top - a).collect();
    FiniteAlgebra::new(
        format!("L{n}"),
        sig,
        n,
        vec![
            OpTable::new(2, oplus),
            OpTable::new(1, neg),
            OpTable::constant(0),
            OpTable::constant(top),
        ],
    )
    .expect("lukasiewicz tables")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Builtin,
    Files(Vec<PathBuf>),
}

/// A validated list of models of one preset.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub preset: VarietyPreset,
    pub algebras: Vec<Arc<FiniteAlgebra>>,
    pub provenance: Provenance,
}

impl Catalog {
    pub fn new(
        preset: VarietyPreset,
        algebras: Vec<Arc<FiniteAlgebra>>,
        provenance: Provenance,
    ) -> Result<Self, CatalogError> {
        for a in &algebras {
            if !check_model(a, &preset)?.is_valid() {
                return Err(CatalogError::ModelViolation {
                    id: a.id().to_string(),
                    preset: preset.name().to_string(),
                });
            }
        }
        Ok(Catalog {
            preset,
            algebras,
            provenance,
        })
    }

    pub fn get(&self, id: &str) -> Option<&Arc<FiniteAlgebra>> {
        self.algebras.iter().find(|a| a.id() == id)
    }
}

/// Deterministic builtin catalog for a preset, capped by carrier size.
pub fn build_catalog(preset_name: &str, bound: usize) -> Result<Catalog, CatalogError> {
    if bound < 1 {
        return Err(CatalogError::BadBound);
    }
    let preset = preset(preset_name)
        .ok_or_else(|| CatalogError::UnknownPreset(preset_name.to_string()))?;
    let mut algebras: Vec<Arc<FiniteAlgebra>> = Vec::new();
    match preset_name {
        "ring1" => {
            algebras.push(cyclic_ring(1));
            for n in 2..=bound {
                algebras.push(cyclic_ring(n));
            }
            for m in 2..=bound {
                for n in m..=bound {
                    if m * n <= bound {
                        algebras.push(product(&cyclic_ring(m), &cyclic_ring(n))?.algebra);
                    }
                }
            }
        }
        "bool" => {
            algebras.push(boolean_algebra(0));
            let mut k = 1;
            while 1usize << k <= bound {
                algebras.push(boolean_algebra(k as u32));
                k += 1;
            }
        }
        "heyting" => {
            for n in 1..=bound {
                algebras.push(heyting_chain(n));
            }
        }
        "mv" => {
            for n in 1..=bound {
                algebras.push(lukasiewicz_chain(n));
            }
        }
        _ => unreachable!("preset resolved above"),
    }
    Catalog::new(preset, algebras, Provenance::Builtin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::find_iso;

    #[test]
    fn builtin_catalogs_validate() {
        for (name, bound) in [("ring1", 8), ("bool", 8), ("heyting", 5), ("mv", 5)] {
            let cat = build_catalog(name, bound).unwrap();
            assert!(!cat.algebras.is_empty());
            for a in &cat.algebras {
                assert!(
                    check_model(a, &cat.preset).unwrap().is_valid(),
                    "{} fails {}",
                    a.id(),
                    name
                );
            }
        }
    }

    #[test]
    fn bool_catalog_contents() {
        let cat = build_catalog("bool", 8).unwrap();
        let ids: Vec<&str> = cat.algebras.iter().map(|a| a.id()).collect();
        assert_eq!(ids, vec!["B1", "B2", "B4", "B8"]);
    }

    #[test]
    fn ring_catalog_contains_crt_pair() {
        let cat = build_catalog("ring1", 6).unwrap();
        let z6 = cat.get("Z6").unwrap();
        let z2xz3 = cat.get("Z2xZ3").unwrap();
        assert!(find_iso(z6, z2xz3).unwrap().is_some());
    }

    #[test]
    fn mv_catalog_contents() {
        let cat = build_catalog("mv", 3).unwrap();
        let ids: Vec<&str> = cat.algebras.iter().map(|a| a.id()).collect();
        assert_eq!(ids, vec!["L1", "L2", "L3"]);
        assert_eq!(cat.get("L3").unwrap().size(), 3);
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(matches!(
            build_catalog("groups", 4),
            Err(CatalogError::UnknownPreset(_))
        ));
    }
}
