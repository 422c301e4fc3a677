//! Three-valued verdicts shared by every lemma verifier.
//!
//! `HypothesesUnmet` is distinct from `Fails`: an inapplicable statement is
//! not a refuted one. Even when hypotheses fail, verifiers record whether
//! the conclusion happened to hold (`exploratory`), for statistics only;
//! it never counts as success.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Holds,
    Fails,
    HypothesesUnmet,
}

/// One named boolean clause, optionally with a witness or certificate
/// (element indices, map arrays) that makes it recomputable from raw
/// tables.
#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl Clause {
    pub fn new(name: impl Into<String>, ok: bool) -> Clause {
        Clause {
            name: name.into(),
            ok,
            witness: None,
        }
    }

    pub fn with_witness(
        name: impl Into<String>,
        ok: bool,
        witness: serde_json::Value,
    ) -> Clause {
        Clause {
            name: name.into(),
            ok,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub kind: VerdictKind,
    pub hypotheses: Vec<Clause>,
    pub conclusions: Vec<Clause>,
    /// When hypotheses fail: did the conclusion hold anyway?
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exploratory: Option<bool>,
}

impl Verdict {
    /// Classify from clause lists: any failed hypothesis wins, then any
    /// failed conclusion.
    pub fn from_clauses(
        check: impl Into<String>,
        hypotheses: Vec<Clause>,
        conclusions: Vec<Clause>,
    ) -> Verdict {
        let hyp_ok = hypotheses.iter().all(|c| c.ok);
        let concl_ok = conclusions.iter().all(|c| c.ok);
        let kind = if !hyp_ok {
            VerdictKind::HypothesesUnmet
        } else if concl_ok {
            VerdictKind::Holds
        } else {
            VerdictKind::Fails
        };
        Verdict {
            check: check.into(),
            kind,
            exploratory: (!hyp_ok).then_some(concl_ok),
            hypotheses,
            conclusions,
        }
    }

    pub fn holds(&self) -> bool {
        self.kind == VerdictKind::Holds
    }
}
