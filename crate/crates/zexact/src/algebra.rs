//! Finite algebras over arbitrary signatures with constants.
//!
//! Carriers are index sets `0..size`; all structure lives in operation
//! tables, so the same machinery serves rings, Boolean algebras, Heyting
//! algebras and MV-algebras. Variety axioms are data (equations over
//! terms), not code.

use std::collections::HashSet;
use std::sync::Arc;

use crate::hom::Homomorphism;

/// Carrier elements are plain indices below the algebra size.
pub type Element = usize;

/// Default cap for congruence-lattice enumeration.
pub const CONGRUENCE_SIZE_BOUND: usize = 16;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("signature must declare at least one constant")]
    NoConstant,
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` used with arity {used}, declared {declared}")]
    ArityMismatch {
        symbol: String,
        used: usize,
        declared: usize,
    },
    #[error("carrier must be nonempty")]
    EmptyCarrier,
    #[error("table for `{symbol}` has {got} entries, expected {expected}")]
    TableSize {
        symbol: String,
        got: usize,
        expected: usize,
    },
    #[error("table entry {entry} for `{symbol}` out of range (size {size})")]
    TableEntry {
        symbol: String,
        entry: Element,
        size: usize,
    },
    #[error("algebras have different signatures")]
    SignatureMismatch,
    #[error("seed element {0} out of range")]
    SeedOutOfRange(Element),
    #[error("subset is not closed: `{symbol}` at {args:?} yields {result}")]
    NotClosed {
        symbol: String,
        args: Vec<Element>,
        result: Element,
    },
    #[error("block map has {got} entries, expected {expected}")]
    PartitionSize { got: usize, expected: usize },
    #[error("partition is not compatible: `{symbol}` sends {left:?} and {right:?} to different blocks")]
    NotACongruence {
        symbol: String,
        left: Vec<Element>,
        right: Vec<Element>,
    },
    #[error("congruences live on different algebras")]
    CongruenceMismatch,
    #[error("algebra size {size} exceeds congruence enumeration bound {bound}")]
    CongruenceBound { size: usize, bound: usize },
    #[error("partition of `{finer}` does not refine the target partition of `{coarser}`")]
    NotARefinement { finer: String, coarser: String },
    #[error("cannot form an empty product")]
    EmptyProduct,
}

/// An operation symbol with its arity; arity 0 means a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSymbol {
    pub symbol: String,
    pub arity: usize,
}

/// A finite similarity type with at least one constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    name: String,
    operations: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(
        name: impl Into<String>,
        operations: Vec<(impl Into<String>, usize)>,
    ) -> Result<Arc<Self>, AlgebraError> {
        let operations: Vec<OpSymbol> = operations
            .into_iter()
            .map(|(symbol, arity)| OpSymbol {
                symbol: symbol.into(),
                arity,
            })
            .collect();
        let mut seen = HashSet::new();
        for op in &operations {
            if !seen.insert(op.symbol.clone()) {
                return Err(AlgebraError::DuplicateSymbol(op.symbol.clone()));
            }
        }
        if !operations.iter().any(|op| op.arity == 0) {
            return Err(AlgebraError::NoConstant);
        }
        Ok(Arc::new(Signature {
            name: name.into(),
            operations,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn operations(&self) -> &[OpSymbol] {
        &self.operations
    }

    pub fn op_index(&self, symbol: &str) -> Option<usize> {
        self.operations.iter().position(|op| op.symbol == symbol)
    }

    /// Indices of the arity-0 operations.
    pub fn constants(&self) -> impl Iterator<Item = usize> + '_ {
        self.operations
            .iter()
            .enumerate()
            .filter(|(_, op)| op.arity == 0)
            .map(|(i, _)| i)
    }
}

/// A term over a signature; variables are numbered `x0, x1, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    App { symbol: String, args: Vec<Term> },
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App {
            symbol: symbol.into(),
            args,
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::App { args, .. } => args.iter().filter_map(Term::max_var).max(),
        }
    }

    fn validate(&self, signature: &Signature) -> Result<(), AlgebraError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App { symbol, args } => {
                let idx = signature
                    .op_index(symbol)
                    .ok_or_else(|| AlgebraError::UnknownSymbol(symbol.clone()))?;
                let declared = signature.operations()[idx].arity;
                if declared != args.len() {
                    return Err(AlgebraError::ArityMismatch {
                        symbol: symbol.clone(),
                        used: args.len(),
                        declared,
                    });
                }
                args.iter().try_for_each(|arg| arg.validate(signature))
            }
        }
    }

    pub fn eval(&self, algebra: &FiniteAlgebra, env: &[Element]) -> Element {
        match self {
            Term::Var(i) => env[*i],
            Term::App { symbol, args } => {
                let op = algebra
                    .signature()
                    .op_index(symbol)
                    .expect("term validated against signature");
                let vals: Vec<Element> = args.iter().map(|t| t.eval(algebra, env)).collect();
                algebra.eval(op, &vals)
            }
        }
    }
}

/// An equational axiom `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn var_count(&self) -> usize {
        self.lhs
            .max_var()
            .into_iter()
            .chain(self.rhs.max_var())
            .max()
            .map_or(0, |m| m + 1)
    }
}

/// A signature together with its defining equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyPreset {
    signature: Arc<Signature>,
    axioms: Vec<Equation>,
}

impl VarietyPreset {
    pub fn new(signature: Arc<Signature>, axioms: Vec<Equation>) -> Result<Self, AlgebraError> {
        for eq in &axioms {
            eq.lhs.validate(&signature)?;
            eq.rhs.validate(&signature)?;
        }
        Ok(VarietyPreset { signature, axioms })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn axioms(&self) -> &[Equation] {
        &self.axioms
    }

    pub fn name(&self) -> &str {
        self.signature.name()
    }
}

/// Row-major operation table; `entries.len() == size^arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpTable {
    arity: usize,
    entries: Vec<Element>,
}

impl OpTable {
    pub fn new(arity: usize, entries: Vec<Element>) -> OpTable {
        OpTable { arity, entries }
    }

    pub fn constant(value: Element) -> OpTable {
        OpTable {
            arity: 0,
            entries: vec![value],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    fn eval(&self, size: usize, args: &[Element]) -> Element {
        debug_assert_eq!(args.len(), self.arity);
        let idx = args.iter().fold(0, |acc, &a| acc * size + a);
        self.entries[idx]
    }
}

/// A finite algebra: carrier `0..size` plus one total table per operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    id: String,
    signature: Arc<Signature>,
    size: usize,
    tables: Vec<OpTable>,
}

impl FiniteAlgebra {
    pub fn new(
        id: impl Into<String>,
        signature: Arc<Signature>,
        size: usize,
        tables: Vec<OpTable>,
    ) -> Result<Arc<Self>, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyCarrier);
        }
        if tables.len() != signature.operations().len() {
            return Err(AlgebraError::TableSize {
                symbol: "<tables>".into(),
                got: tables.len(),
                expected: signature.operations().len(),
            });
        }
        for (op, table) in signature.operations().iter().zip(&tables) {
            let expected =
                size.checked_pow(op.arity as u32)
                    .ok_or_else(|| AlgebraError::TableSize {
                        symbol: op.symbol.clone(),
                        got: table.entries.len(),
                        expected: usize::MAX,
                    })?;
            if table.arity != op.arity || table.entries.len() != expected {
                return Err(AlgebraError::TableSize {
                    symbol: op.symbol.clone(),
                    got: table.entries.len(),
                    expected,
                });
            }
            if let Some(&entry) = table.entries.iter().find(|&&e| e >= size) {
                return Err(AlgebraError::TableEntry {
                    symbol: op.symbol.clone(),
                    entry,
                    size,
                });
            }
        }
        Ok(Arc::new(FiniteAlgebra {
            id: id.into(),
            signature,
            size,
            tables,
        }))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tables(&self) -> &[OpTable] {
        &self.tables
    }

    pub fn eval(&self, op: usize, args: &[Element]) -> Element {
        self.tables[op].eval(self.size, args)
    }

    /// Structural comparison ignoring the id.
    pub fn same_shape(&self, other: &FiniteAlgebra) -> bool {
        self.signature == other.signature && self.size == other.size && self.tables == other.tables
    }

    /// The closure of the constants (plus `seeds`) under all operations,
    /// as a sorted carrier subset.
    pub fn closure(&self, seeds: &[Element]) -> Result<Vec<Element>, AlgebraError> {
        let mut member = vec![false; self.size];
        for &s in seeds {
            if s >= self.size {
                return Err(AlgebraError::SeedOutOfRange(s));
            }
            member[s] = true;
        }
        for c in self.signature.constants() {
            member[self.eval(c, &[])] = true;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for (op, sym) in self.signature.operations().iter().enumerate() {
                if sym.arity == 0 {
                    continue;
                }
                let mut args = vec![0; sym.arity];
                for idx in 0..self.size.pow(sym.arity as u32) {
                    decode_tuple(idx, self.size, &mut args);
                    if args.iter().all(|&a| member[a]) {
                        let r = self.eval(op, &args);
                        if !member[r] {
                            member[r] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        Ok((0..self.size).filter(|&i| member[i]).collect())
    }

    /// Whether the whole carrier is generated by the constants, i.e.
    /// whether the algebra is a trivial object.
    pub fn constant_generated(&self) -> bool {
        self.closure(&[]).expect("no seeds").len() == self.size
    }
}

/// Decode a row-major tuple index into `args`.
pub fn decode_tuple(mut idx: usize, size: usize, args: &mut [Element]) {
    for slot in args.iter_mut().rev() {
        *slot = idx % size;
        idx /= size;
    }
}

/// Outcome of checking an algebra against a variety's axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelReport {
    Valid,
    Violation {
        axiom: usize,
        equation: Equation,
        assignment: Vec<Element>,
    },
}

impl ModelReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, ModelReport::Valid)
    }
}

/// Check every axiom under every assignment of carrier elements to
/// variables; on failure report the first violating assignment.
pub fn check_model(
    algebra: &FiniteAlgebra,
    variety: &VarietyPreset,
) -> Result<ModelReport, AlgebraError> {
    if algebra.signature() != variety.signature() {
        return Err(AlgebraError::SignatureMismatch);
    }
    for (axiom, eq) in variety.axioms().iter().enumerate() {
        let nvars = eq.var_count();
        let mut env = vec![0; nvars];
        for idx in 0..algebra.size().pow(nvars as u32) {
            decode_tuple(idx, algebra.size(), &mut env);
            if eq.lhs.eval(algebra, &env) != eq.rhs.eval(algebra, &env) {
                return Ok(ModelReport::Violation {
                    axiom,
                    equation: eq.clone(),
                    assignment: env,
                });
            }
        }
    }
    Ok(ModelReport::Valid)
}

/// A subalgebra together with its inclusion into the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubAlgebra {
    pub algebra: Arc<FiniteAlgebra>,
    pub inclusion: Homomorphism,
}

impl SubAlgebra {
    /// The carrier as a sorted subset of the parent.
    pub fn carrier(&self) -> &[Element] {
        self.inclusion.map()
    }

    pub fn contains(&self, parent_element: Element) -> bool {
        self.carrier().binary_search(&parent_element).is_ok()
    }

    /// Parent index -> local index.
    pub fn local(&self, parent_element: Element) -> Option<Element> {
        self.carrier().binary_search(&parent_element).ok()
    }
}

/// The induced algebra on a sorted subset that is already closed under
/// every operation.
pub fn induced_subalgebra(
    parent: &Arc<FiniteAlgebra>,
    carrier: &[Element],
) -> Result<SubAlgebra, AlgebraError> {
    debug_assert!(carrier.windows(2).all(|w| w[0] < w[1]));
    let mut local = vec![None; parent.size()];
    for (i, &e) in carrier.iter().enumerate() {
        local[e] = Some(i);
    }
    let n = carrier.len();
    let mut tables = Vec::with_capacity(parent.signature().operations().len());
    for (op, sym) in parent.signature().operations().iter().enumerate() {
        let count = n.pow(sym.arity as u32);
        let mut entries = Vec::with_capacity(count);
        let mut args = vec![0; sym.arity];
        for idx in 0..count {
            decode_tuple(idx, n, &mut args);
            let parent_args: Vec<Element> = args.iter().map(|&a| carrier[a]).collect();
            let r = parent.eval(op, &parent_args);
            match local[r] {
                Some(l) => entries.push(l),
                None => {
                    return Err(AlgebraError::NotClosed {
                        symbol: sym.symbol.clone(),
                        args: parent_args,
                        result: r,
                    })
                }
            }
        }
        tables.push(OpTable::new(sym.arity, entries));
    }
    let id = format!(
        "{}[{}]",
        parent.id(),
        carrier
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let algebra = FiniteAlgebra::new(id, parent.signature().clone(), n, tables)?;
    let inclusion = Homomorphism::new(algebra.clone(), parent.clone(), carrier.to_vec())
        .expect("inclusion of an induced subalgebra is a homomorphism");
    Ok(SubAlgebra { algebra, inclusion })
}

/// Smallest subalgebra containing `seeds` and all constants.
pub fn generate_subalgebra(
    algebra: &Arc<FiniteAlgebra>,
    seeds: &[Element],
) -> Result<SubAlgebra, AlgebraError> {
    let carrier = algebra.closure(seeds)?;
    induced_subalgebra(algebra, &carrier)
}

/// A binary product with its projections.
#[derive(Debug, Clone)]
pub struct Product {
    pub algebra: Arc<FiniteAlgebra>,
    pub proj_left: Homomorphism,
    pub proj_right: Homomorphism,
}

pub fn product(
    left: &Arc<FiniteAlgebra>,
    right: &Arc<FiniteAlgebra>,
) -> Result<Product, AlgebraError> {
    let many = product_many(&[left.clone(), right.clone()])?;
    let mut projections = many.projections.into_iter();
    Ok(Product {
        algebra: many.algebra,
        proj_left: projections.next().unwrap(),
        proj_right: projections.next().unwrap(),
    })
}

/// An n-ary product with one projection per factor.
#[derive(Debug, Clone)]
pub struct ProductMany {
    pub algebra: Arc<FiniteAlgebra>,
    pub projections: Vec<Homomorphism>,
}

/// Carrier = mixed-radix tuples, last factor varying fastest; tables act
/// componentwise.
pub fn product_many(factors: &[Arc<FiniteAlgebra>]) -> Result<ProductMany, AlgebraError> {
    let first = factors.first().ok_or(AlgebraError::EmptyProduct)?;
    if factors.iter().any(|f| f.signature() != first.signature()) {
        return Err(AlgebraError::SignatureMismatch);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let total: usize = sizes.iter().product();
    let decode = |mut idx: usize| -> Vec<Element> {
        let mut coords = vec![0; sizes.len()];
        for (slot, &s) in coords.iter_mut().zip(&sizes).rev() {
            *slot = idx % s;
            idx /= s;
        }
        coords
    };
    let encode = |coords: &[Element]| -> usize {
        coords
            .iter()
            .zip(&sizes)
            .fold(0, |acc, (&c, &s)| acc * s + c)
    };
    let signature = first.signature().clone();
    let mut tables = Vec::with_capacity(signature.operations().len());
    for (op, sym) in signature.operations().iter().enumerate() {
        let count = total.pow(sym.arity as u32);
        let mut entries = Vec::with_capacity(count);
        let mut args = vec![0; sym.arity];
        for idx in 0..count {
            decode_tuple(idx, total, &mut args);
            let arg_coords: Vec<Vec<Element>> = args.iter().map(|&a| decode(a)).collect();
            let result: Vec<Element> = factors
                .iter()
                .enumerate()
                .map(|(fi, f)| {
                    let local_args: Vec<Element> =
                        arg_coords.iter().map(|c| c[fi]).collect();
                    f.eval(op, &local_args)
                })
                .collect();
            entries.push(encode(&result));
        }
        tables.push(OpTable::new(sym.arity, entries));
    }
    let id = factors
        .iter()
        .map(|f| f.id().to_string())
        .collect::<Vec<_>>()
        .join("x");
    let algebra = FiniteAlgebra::new(id, signature, total, tables)?;
    let projections = factors
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let map: Vec<Element> = (0..total).map(|p| decode(p)[fi]).collect();
            Homomorphism::new(algebra.clone(), f.clone(), map)
                .expect("product projection is a homomorphism")
        })
        .collect();
    Ok(ProductMany {
        algebra,
        projections,
    })
}

/// A compatible partition of a carrier, stored as a block-index map with
/// blocks numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    algebra: Arc<FiniteAlgebra>,
    block_of: Vec<usize>,
    num_blocks: usize,
}

impl Congruence {
    /// Canonicalize a block map and check compatibility with every table.
    pub fn from_partition(
        algebra: Arc<FiniteAlgebra>,
        block_of: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        if block_of.len() != algebra.size() {
            return Err(AlgebraError::PartitionSize {
                got: block_of.len(),
                expected: algebra.size(),
            });
        }
        let (block_of, num_blocks) = canonicalize_blocks(&block_of);
        let candidate = Congruence {
            algebra,
            block_of,
            num_blocks,
        };
        candidate.check_compatible()?;
        Ok(candidate)
    }

    pub fn identity(algebra: Arc<FiniteAlgebra>) -> Self {
        let n = algebra.size();
        Congruence {
            algebra,
            block_of: (0..n).collect(),
            num_blocks: n,
        }
    }

    pub fn full(algebra: Arc<FiniteAlgebra>) -> Self {
        let n = algebra.size();
        Congruence {
            algebra,
            block_of: vec![0; n],
            num_blocks: 1,
        }
    }

    /// Smallest congruence relating every listed pair: union-find followed
    /// by closure under all unary translations of the operations.
    pub fn generated_by(algebra: Arc<FiniteAlgebra>, pairs: &[(Element, Element)]) -> Self {
        let n = algebra.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        fn union(parent: &mut [usize], a: usize, b: usize) -> bool {
            let (ra, rb) = (root(parent, a), root(parent, b));
            if ra == rb {
                return false;
            }
            parent[ra.max(rb)] = ra.min(rb);
            true
        }
        for &(a, b) in pairs {
            union(&mut parent, a, b);
        }
        // A partition is a congruence iff it is closed under every
        // translation (one argument varies, the others are fixed).
        let mut changed = true;
        while changed {
            changed = false;
            for (op, sym) in algebra.signature().operations().iter().enumerate() {
                if sym.arity == 0 {
                    continue;
                }
                for pos in 0..sym.arity {
                    for a in 0..n {
                        for b in (a + 1)..n {
                            if root(&mut parent, a) != root(&mut parent, b) {
                                continue;
                            }
                            let ctx_arity = sym.arity - 1;
                            let mut ctx = vec![0; ctx_arity];
                            for idx in 0..n.pow(ctx_arity as u32) {
                                decode_tuple(idx, n, &mut ctx);
                                let mut left = Vec::with_capacity(sym.arity);
                                let mut right = Vec::with_capacity(sym.arity);
                                left.extend_from_slice(&ctx[..pos]);
                                left.push(a);
                                left.extend_from_slice(&ctx[pos..]);
                                right.extend_from_slice(&ctx[..pos]);
                                right.push(b);
                                right.extend_from_slice(&ctx[pos..]);
                                let ra = algebra.eval(op, &left);
                                let rb = algebra.eval(op, &right);
                                if union(&mut parent, ra, rb) {
                                    changed = true;
                                }
                            }
                        }
                    }
                }
            }
        }
        let raw: Vec<usize> = (0..n).map(|x| root(&mut parent, x)).collect();
        let (block_of, num_blocks) = canonicalize_blocks(&raw);
        Congruence {
            algebra,
            block_of,
            num_blocks,
        }
    }

    fn check_compatible(&self) -> Result<(), AlgebraError> {
        let n = self.algebra.size();
        for (op, sym) in self.algebra.signature().operations().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            let count = n.pow(sym.arity as u32);
            let mut left = vec![0; sym.arity];
            let mut right = vec![0; sym.arity];
            for li in 0..count {
                decode_tuple(li, n, &mut left);
                for ri in 0..count {
                    decode_tuple(ri, n, &mut right);
                    let related = left
                        .iter()
                        .zip(&right)
                        .all(|(&a, &b)| self.block_of[a] == self.block_of[b]);
                    if related
                        && self.block_of[self.algebra.eval(op, &left)]
                            != self.block_of[self.algebra.eval(op, &right)]
                    {
                        return Err(AlgebraError::NotACongruence {
                            symbol: sym.symbol.clone(),
                            left,
                            right,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn block_of(&self, e: Element) -> usize {
        self.block_of[e]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.block_of
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn related(&self, a: Element, b: Element) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks == self.algebra.size()
    }

    /// First element of each block, in block order.
    pub fn representatives(&self) -> Vec<Element> {
        let mut reps = vec![Element::MAX; self.num_blocks];
        for (e, &b) in self.block_of.iter().enumerate() {
            if reps[b] == Element::MAX {
                reps[b] = e;
            }
        }
        reps
    }

    pub fn refines(&self, coarser: &Congruence) -> bool {
        self.algebra == coarser.algebra
            && self
                .block_of
                .iter()
                .enumerate()
                .all(|(e, _)| coarser.block_of[e] == coarser.block_of[self.representative_of(e)])
    }

    fn representative_of(&self, e: Element) -> Element {
        // first element of e's block
        self.block_of
            .iter()
            .position(|&b| b == self.block_of[e])
            .expect("block is inhabited")
    }
}

fn canonicalize_blocks(raw: &[usize]) -> (Vec<usize>, usize) {
    let mut relabel: Vec<Option<usize>> = vec![None; raw.len()];
    let mut next = 0;
    let mut out = Vec::with_capacity(raw.len());
    for &b in raw {
        let label = match relabel[b] {
            Some(l) => l,
            None => {
                relabel[b] = Some(next);
                next += 1;
                next - 1
            }
        };
        out.push(label);
    }
    (out, next)
}

/// Smallest congruence containing both arguments.
pub fn congruence_join(theta: &Congruence, psi: &Congruence) -> Result<Congruence, AlgebraError> {
    if theta.algebra != psi.algebra {
        return Err(AlgebraError::CongruenceMismatch);
    }
    let n = theta.algebra.size();
    let mut pairs = Vec::new();
    for e in 1..n {
        // relate each element to the first member of its block, in both inputs
        for c in [theta, psi] {
            let rep = c
                .block_of
                .iter()
                .position(|&b| b == c.block_of[e])
                .expect("block inhabited");
            if rep != e {
                pairs.push((rep, e));
            }
        }
    }
    Ok(Congruence::generated_by(theta.algebra.clone(), &pairs))
}

/// A quotient algebra with its canonical surjection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: Arc<FiniteAlgebra>,
    pub surjection: Homomorphism,
}

/// Carrier = blocks in canonical order; tables evaluate on representatives.
pub fn quotient(algebra: &Arc<FiniteAlgebra>, theta: &Congruence) -> Quotient {
    assert_eq!(
        theta.algebra(),
        algebra,
        "congruence belongs to a different algebra"
    );
    let reps = theta.representatives();
    let n = theta.num_blocks();
    let mut tables = Vec::with_capacity(algebra.signature().operations().len());
    for (op, sym) in algebra.signature().operations().iter().enumerate() {
        let count = n.pow(sym.arity as u32);
        let mut entries = Vec::with_capacity(count);
        let mut args = vec![0; sym.arity];
        for idx in 0..count {
            decode_tuple(idx, n, &mut args);
            let parent_args: Vec<Element> = args.iter().map(|&a| reps[a]).collect();
            entries.push(theta.block_of(algebra.eval(op, &parent_args)));
        }
        tables.push(OpTable::new(sym.arity, entries));
    }
    let id = format!(
        "{}/q{}",
        algebra.id(),
        theta
            .blocks()
            .iter()
            .map(|b| format!("{b:x}"))
            .collect::<String>()
    );
    let quotient_algebra = FiniteAlgebra::new(id, algebra.signature().clone(), n, tables)
        .expect("quotient tables are well-formed");
    let surjection = Homomorphism::new(
        algebra.clone(),
        quotient_algebra.clone(),
        theta.blocks().to_vec(),
    )
    .expect("canonical surjection is a homomorphism");
    Quotient {
        algebra: quotient_algebra,
        surjection,
    }
}

/// The canonical map `A/finer -> A/coarser` between two quotients of the
/// same algebra.
pub fn induced_quotient_map(
    finer: &Quotient,
    finer_congruence: &Congruence,
    coarser: &Quotient,
    coarser_congruence: &Congruence,
) -> Result<Homomorphism, AlgebraError> {
    if !finer_congruence.refines(coarser_congruence) {
        return Err(AlgebraError::NotARefinement {
            finer: finer.algebra.id().to_string(),
            coarser: coarser.algebra.id().to_string(),
        });
    }
    let map: Vec<Element> = finer_congruence
        .representatives()
        .iter()
        .map(|&rep| coarser_congruence.block_of(rep))
        .collect();
    Ok(
        Homomorphism::new(finer.algebra.clone(), coarser.algebra.clone(), map)
            .expect("induced quotient map is a homomorphism"),
    )
}

/// All congruences of `algebra`, canonically ordered by block count and
/// then lexicographically on the block map.
///
/// Computed as the join closure of the principal congruences; every
/// congruence is the join of the principal congruences it contains.
pub fn enumerate_congruences(algebra: &Arc<FiniteAlgebra>) -> Result<Vec<Congruence>, AlgebraError> {
    enumerate_congruences_bounded(algebra, CONGRUENCE_SIZE_BOUND)
}

pub fn enumerate_congruences_bounded(
    algebra: &Arc<FiniteAlgebra>,
    bound: usize,
) -> Result<Vec<Congruence>, AlgebraError> {
    if algebra.size() > bound {
        return Err(AlgebraError::CongruenceBound {
            size: algebra.size(),
            bound,
        });
    }
    let n = algebra.size();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut found: Vec<Congruence> = Vec::new();
    let push = |c: Congruence, found: &mut Vec<Congruence>, seen: &mut HashSet<Vec<usize>>| {
        if seen.insert(c.blocks().to_vec()) {
            found.push(c);
        }
    };
    push(Congruence::identity(algebra.clone()), &mut found, &mut seen);
    for a in 0..n {
        for b in (a + 1)..n {
            push(
                Congruence::generated_by(algebra.clone(), &[(a, b)]),
                &mut found,
                &mut seen,
            );
        }
    }
    // close under binary joins
    let mut frontier: Vec<Congruence> = found.clone();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for new in &frontier {
            for old in found.clone() {
                let j = congruence_join(new, &old).expect("same algebra");
                if seen.insert(j.blocks().to_vec()) {
                    found.push(j.clone());
                    fresh.push(j);
                }
            }
        }
        frontier = fresh;
    }
    // finest first: identity congruence, then coarser ones
    found.sort_by(|x, y| {
        y.num_blocks()
            .cmp(&x.num_blocks())
            .then_with(|| x.blocks().cmp(y.blocks()))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn z(n: usize) -> Arc<FiniteAlgebra> {
        catalog::cyclic_ring(n)
    }

    #[test]
    fn signature_requires_constant() {
        let err = Signature::new("bad", vec![("f", 1)]).unwrap_err();
        assert_eq!(err, AlgebraError::NoConstant);
    }

    #[test]
    fn signature_rejects_duplicates() {
        let err = Signature::new("bad", vec![("c", 0), ("c", 2)]).unwrap_err();
        assert!(matches!(err, AlgebraError::DuplicateSymbol(_)));
    }

    #[test]
    fn check_model_accepts_z2_and_flags_broken_unit() {
        let ring1 = catalog::ring1();
        assert!(check_model(&z(2), &ring1).unwrap().is_valid());

        // redefine multiplication so 1*1 = 0
        let sig = ring1.signature().clone();
        let mul = sig.op_index("mul").unwrap();
        let mut tables = z(2).tables().to_vec();
        tables[mul] = OpTable::new(2, vec![0, 0, 0, 0]);
        let broken = FiniteAlgebra::new("Z2broken", sig, 2, tables).unwrap();
        match check_model(&broken, &ring1).unwrap() {
            ModelReport::Violation { assignment, .. } => {
                assert!(assignment.contains(&1));
            }
            ModelReport::Valid => panic!("expected a violation"),
        }
    }

    #[test]
    fn check_model_accepts_boolean_square() {
        let bool_preset = catalog::bool_preset();
        let b4 = catalog::boolean_algebra(2);
        assert!(check_model(&b4, &bool_preset).unwrap().is_valid());
    }

    #[test]
    fn constants_generate_diagonal_of_f2_squared() {
        let p = product(&z(2), &z(2)).unwrap();
        let sub = generate_subalgebra(&p.algebra, &[]).unwrap();
        assert_eq!(sub.algebra.size(), 2);
        assert_eq!(sub.carrier(), &[0, 3]); // (0,0) and (1,1)
    }

    #[test]
    fn one_generates_z6() {
        let sub = generate_subalgebra(&z(6), &[]).unwrap();
        assert_eq!(sub.algebra.size(), 6);
    }

    #[test]
    fn boolean_constants_generate_bounds() {
        let b4 = catalog::boolean_algebra(2);
        let sub = generate_subalgebra(&b4, &[]).unwrap();
        assert_eq!(sub.carrier(), &[0, 3]);
    }

    #[test]
    fn closure_output_is_closed() {
        // re-scan: every table entry over the closure stays inside it
        for alg in [z(4), z(6), catalog::boolean_algebra(3)] {
            let sub = generate_subalgebra(&alg, &[]).unwrap();
            let carrier = sub.carrier();
            for (op, sym) in alg.signature().operations().iter().enumerate() {
                let mut args = vec![0; sym.arity];
                for idx in 0..carrier.len().pow(sym.arity as u32) {
                    decode_tuple(idx, carrier.len(), &mut args);
                    let parent_args: Vec<Element> =
                        args.iter().map(|&a| carrier[a]).collect();
                    let r = alg.eval(op, &parent_args);
                    assert!(carrier.binary_search(&r).is_ok());
                }
            }
        }
    }

    #[test]
    fn product_projections_recover_components() {
        let p = product(&z(2), &z(3)).unwrap();
        assert_eq!(p.algebra.size(), 6);
        for e in 0..p.algebra.size() {
            let l = p.proj_left.apply(e);
            let r = p.proj_right.apply(e);
            assert_eq!(e, l * 3 + r);
        }
        assert!(p.proj_left.classify().surjective);
        assert!(p.proj_right.classify().surjective);
    }

    #[test]
    fn product_with_terminal_is_isomorphic() {
        let a = z(4);
        let p = product(&a, &z(1)).unwrap();
        assert_eq!(p.algebra.size(), 4);
        assert!(crate::hom::find_iso(&p.algebra, &a).unwrap().is_some());
    }

    #[test]
    fn square_of_two_element_boolean_is_boolean_square() {
        let b2 = catalog::boolean_algebra(1);
        let b4 = catalog::boolean_algebra(2);
        let p = product(&b2, &b2).unwrap();
        assert!(crate::hom::find_iso(&p.algebra, &b4).unwrap().is_some());
    }

    #[test]
    fn quotient_of_z4_by_even_odd_is_z2() {
        let a = z(4);
        let theta = Congruence::from_partition(a.clone(), vec![0, 1, 0, 1]).unwrap();
        let q = quotient(&a, &theta);
        assert_eq!(q.algebra.size(), 2);
        assert!(crate::hom::find_iso(&q.algebra, &z(2)).unwrap().is_some());
        assert!(q.surjection.classify().surjective);
    }

    #[test]
    fn quotient_by_identity_is_isomorphic() {
        let a = z(6);
        let q = quotient(&a, &Congruence::identity(a.clone()));
        assert!(a.same_shape(&q.algebra));
    }

    #[test]
    fn quotient_by_full_is_terminal() {
        let a = z(6);
        let q = quotient(&a, &Congruence::full(a.clone()));
        assert_eq!(q.algebra.size(), 1);
    }

    #[test]
    fn incompatible_partition_is_rejected() {
        let a = z(4);
        let err = Congruence::from_partition(a, vec![0, 0, 1, 1]).unwrap_err();
        assert!(matches!(err, AlgebraError::NotACongruence { .. }));
    }

    #[test]
    fn kernel_pair_of_canonical_surjection_recovers_congruence() {
        let a = z(4);
        for theta in enumerate_congruences(&a).unwrap() {
            let q = quotient(&a, &theta);
            for x in 0..a.size() {
                for y in 0..a.size() {
                    assert_eq!(
                        q.surjection.apply(x) == q.surjection.apply(y),
                        theta.related(x, y)
                    );
                }
            }
        }
    }

    #[test]
    fn z4_has_three_congruences() {
        let found = enumerate_congruences(&z(4)).unwrap();
        assert_eq!(found.len(), 3);
        // ideals 0, (2), (1) in order
        let block_counts: Vec<usize> = found.iter().map(|c| c.num_blocks()).collect();
        assert_eq!(block_counts, vec![4, 2, 1]);
    }

    #[test]
    fn f2_squared_has_four_congruences() {
        let p = product(&z(2), &z(2)).unwrap();
        let found = enumerate_congruences(&p.algebra).unwrap();
        assert_eq!(found.len(), 4);
    }

    #[test]
    fn one_element_algebra_has_one_congruence() {
        let found = enumerate_congruences(&z(1)).unwrap();
        assert_eq!(found.len(), 1);
    }

    #[test]
    fn enumeration_respects_bound() {
        let err = enumerate_congruences_bounded(&z(4), 3).unwrap_err();
        assert!(matches!(err, AlgebraError::CongruenceBound { .. }));
    }

    /// Independent oracle: all partitions (restricted growth strings)
    /// filtered by the compatibility predicate.
    fn congruences_by_partition_scan(a: &Arc<FiniteAlgebra>) -> Vec<Vec<usize>> {
        let n = a.size();
        let mut out = Vec::new();
        let mut rgs = vec![0usize; n];
        loop {
            if Congruence::from_partition(a.clone(), rgs.clone()).is_ok() {
                out.push(rgs.clone());
            }
            // next restricted growth string
            let mut i = n;
            loop {
                if i == 1 {
                    return out;
                }
                i -= 1;
                let cap = rgs[..i].iter().copied().max().unwrap_or(0) + 1;
                if rgs[i] < cap {
                    rgs[i] += 1;
                    rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                    break;
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_partition_scan_oracle() {
        for alg in [
            z(1),
            z(4),
            z(6),
            catalog::boolean_algebra(2),
            catalog::heyting_chain(4),
            catalog::lukasiewicz_chain(4),
        ] {
            let fast: HashSet<Vec<usize>> = enumerate_congruences(&alg)
                .unwrap()
                .iter()
                .map(|c| c.blocks().to_vec())
                .collect();
            let slow: HashSet<Vec<usize>> =
                congruences_by_partition_scan(&alg).into_iter().collect();
            assert_eq!(fast, slow, "congruence lattice mismatch for {}", alg.id());
        }
    }

    #[test]
    fn join_of_factor_congruences_is_full() {
        let p = product(&z(2), &z(2)).unwrap();
        let a = &p.algebra;
        let first = Congruence::from_partition(a.clone(), vec![0, 0, 1, 1]).unwrap();
        let second = Congruence::from_partition(a.clone(), vec![0, 1, 0, 1]).unwrap();
        let join = congruence_join(&first, &second).unwrap();
        assert_eq!(join.num_blocks(), 1);
    }

    #[test]
    fn join_identities() {
        let a = z(4);
        let theta = Congruence::from_partition(a.clone(), vec![0, 1, 0, 1]).unwrap();
        let id = Congruence::identity(a.clone());
        assert_eq!(congruence_join(&theta, &id).unwrap(), theta);
        assert_eq!(congruence_join(&theta, &theta).unwrap(), theta);
    }
}
