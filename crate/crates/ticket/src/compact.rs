//! Compactness of inhabitants and the term transformations behind it: extraction
//! chains, non-uniform renaming of free variables, vertical term compression, shrinking.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::blueprint::{
    blueprint_of, extract_at, extraction_steps, f_of, up_closure, Blueprint, BlueprintError,
};
use crate::formula::{subformulas, Formula};
use crate::term::{free_vars, type_of, Address, Term, TermError, VarRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompactError {
    #[error("invalid extraction chain: {0}")]
    ChainInvalid(String),
    #[error("target type mismatch: {0}")]
    TypeMismatch(String),
    #[error("invalid targets: {0}")]
    InvalidTargets(String),
    #[error("the blueprint is not a vertical compression of the term's blueprint")]
    NotACompression,
    #[error("address {0} is not in the term")]
    AddressOutOfRange(Address),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Blueprint(#[from] BlueprintError),
}

/// One extraction block: a formula extracted at the listed addresses, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub formula: Formula,
    pub order: Vec<Address>,
}

/// A full extraction of a blueprint, blocks in extraction order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtractionChain {
    pub blocks: Vec<Block>,
}

impl ExtractionChain {
    /// The extracted sequence, last-extracted block first.
    pub fn sequence(&self) -> Vec<Formula> {
        self.blocks
            .iter()
            .rev()
            .map(|b| b.formula.clone())
            .collect()
    }

    /// Replays every step; returns the final blueprint.
    pub fn replay(&self, b: &Blueprint) -> Result<Blueprint, CompactError> {
        let mut cur = b.clone();
        for block in &self.blocks {
            if block.order.is_empty() {
                return Err(CompactError::ChainInvalid("empty block".into()));
            }
            for a in &block.order {
                cur = extract_at(&cur, a, &block.formula)
                    .map_err(|e| CompactError::ChainInvalid(e.to_string()))?;
            }
        }
        Ok(cur)
    }
}

/// Binders strictly above `a`, outermost first.
pub fn lambda_prefix(m: &Term, a: &Address) -> Result<Vec<VarRef>, CompactError> {
    if m.subterm(a).is_none() {
        return Err(CompactError::AddressOutOfRange(a.clone()));
    }
    let mut out = Vec::new();
    for p in a.strict_prefixes() {
        if let Some(Term::Lam(x, _)) = m.subterm(&p) {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Addresses of the occurrences of the variable with this rank.
pub fn occurrences(m: &Term, rank: u32) -> Vec<Address> {
    m.addresses()
        .into_iter()
        .filter(|a| matches!(m.subterm(a), Some(Term::Var(v)) if v.rank == rank))
        .collect()
}

/// Extracts `phi` at every address of `addrs`, always taking the first extractable one.
fn greedy_order(
    b: &Blueprint,
    addrs: &[Address],
    phi: &Formula,
) -> Option<(Vec<Address>, Blueprint)> {
    let mut rest: Vec<Address> = addrs.to_vec();
    let mut order = Vec::new();
    let mut cur = b.clone();
    while !rest.is_empty() {
        let i = rest.iter().position(|a| extract_at(&cur, a, phi).is_ok())?;
        let a = rest.remove(i);
        cur = extract_at(&cur, &a, phi).ok()?;
        order.push(a);
    }
    Some((order, cur))
}

/// Extracts the types of `Free(m)` at their occurrences, greatest variable first.
pub fn abstract_extract_chain(m: &Term) -> Result<ExtractionChain, CompactError> {
    let mut cur = blueprint_of(m);
    let mut blocks = Vec::new();
    for x in free_vars(m).iter().rev() {
        let occ = occurrences(m, x.rank);
        let (order, next) = greedy_order(&cur, &occ, &x.ty).ok_or_else(|| {
            CompactError::ChainInvalid(format!(
                "occurrences of rank {} cannot be extracted",
                x.rank
            ))
        })?;
        blocks.push(Block {
            formula: x.ty.clone(),
            order,
        });
        cur = next;
    }
    if !cur.is_empty() {
        return Err(CompactError::ChainInvalid("blueprint not exhausted".into()));
    }
    Ok(ExtractionChain { blocks })
}

/// Renames the free variables of `m` so that the i-th target occurs exactly at the
/// addresses of the chain block producing the i-th formula of its sequence.
pub fn switch_var(
    m: &Term,
    chain: &ExtractionChain,
    targets: &[VarRef],
) -> Result<Term, CompactError> {
    let seq = chain.sequence();
    if seq.len() != targets.len() {
        return Err(CompactError::InvalidTargets(format!(
            "{} targets for {} blocks",
            targets.len(),
            seq.len()
        )));
    }
    for (i, (y, w)) in targets.iter().zip(&seq).enumerate() {
        if y.ty != *w {
            return Err(CompactError::TypeMismatch(format!(
                "target {} has type {}, expected {}",
                i + 1,
                y.ty,
                w
            )));
        }
    }
    if targets.windows(2).any(|w| w[0].rank >= w[1].rank) {
        return Err(CompactError::InvalidTargets(
            "ranks must be strictly increasing".into(),
        ));
    }
    if !chain.replay(&blueprint_of(m))?.is_empty() {
        return Err(CompactError::ChainInvalid(
            "chain does not reach the empty blueprint".into(),
        ));
    }
    let k = targets.len();
    let blocks: Vec<(VarRef, Vec<Address>)> = (0..k)
        .map(|i| (targets[i].clone(), chain.blocks[k - 1 - i].order.clone()))
        .collect();
    let top = targets.iter().map(|v| v.rank).max().unwrap_or(0);
    let mut next = m.max_rank().max(top) + 1;
    rebuild(m, &blocks, &mut next)
}

fn rebuild(
    m: &Term,
    blocks: &[(VarRef, Vec<Address>)],
    next: &mut u32,
) -> Result<Term, CompactError> {
    let invalid = |s: &str| CompactError::ChainInvalid(s.to_string());
    match m {
        Term::Var(_) => match blocks {
            [(y, addrs)] if addrs.len() == 1 && addrs[0].is_root() => Ok(Term::Var(y.clone())),
            _ => Err(invalid("a variable must be covered by exactly one block")),
        },
        Term::App(l, r) => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (y, addrs) in blocks {
                let mut la = Vec::new();
                let mut ra = Vec::new();
                for a in addrs {
                    match a.0.first() {
                        Some(1) => la.push(Address(a.0[1..].to_vec())),
                        Some(2) => ra.push(Address(a.0[1..].to_vec())),
                        _ => return Err(invalid("block address is not below the application")),
                    }
                }
                if !la.is_empty() {
                    left.push((y.clone(), la));
                }
                if !ra.is_empty() {
                    right.push((y.clone(), ra));
                }
            }
            let l2 = rebuild(l, &left, next)?;
            let r2 = rebuild(r, &right, next)?;
            Ok(Term::app(l2, r2))
        }
        Term::Lam(x, body) => {
            let y = VarRef::new(*next, x.ty.clone());
            *next += 1;
            let occ = occurrences(body, x.rank);
            let (order, _) = greedy_order(&blueprint_of(body), &occ, &x.ty)
                .ok_or_else(|| invalid("bound occurrences cannot be extracted"))?;
            let mut inner = Vec::with_capacity(blocks.len() + 1);
            for (v, addrs) in blocks {
                let stripped = addrs
                    .iter()
                    .map(|a| match a.0.first() {
                        Some(1) => Ok(Address(a.0[1..].to_vec())),
                        _ => Err(invalid("block address is not below the abstraction")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                inner.push((v.clone(), stripped));
            }
            inner.push((y.clone(), order));
            Ok(Term::Lam(y, Box::new(rebuild(body, &inner, next)?)))
        }
    }
}

/// Pairs `(a, c)` with `a < c`, equal labels, and the grafted result.
fn graft_moves(b: &Blueprint) -> Vec<(Address, Address, Blueprint)> {
    let mut out = Vec::new();
    for (a, la) in b.map() {
        for (c, lc) in b.map().range(a.clone()..) {
            if a.is_strict_prefix_of(c) && la == lc {
                out.push((a.clone(), c.clone(), b.graft(a, &b.restrict(c))));
            }
        }
    }
    out
}

/// Renames every variable (free and bound) of `t` to consecutive ranks from `start`, keeping order.
fn rerank_all(t: &Term, start: u32) -> Term {
    let mut ranks: BTreeSet<u32> = t.bound_vars().iter().map(|v| v.rank).collect();
    ranks.extend(free_vars(t).iter().map(|v| v.rank));
    let map: BTreeMap<u32, u32> = ranks
        .into_iter()
        .enumerate()
        .map(|(i, r)| (r, start + i as u32))
        .collect();
    t.rename(&map)
}

/// One graft `a <- c` of the term's blueprint realized on the term.
fn compress_step(m: &Term, a: &Address, c: &Address) -> Result<Term, CompactError> {
    if a.is_root() {
        return m
            .subterm(c)
            .cloned()
            .ok_or_else(|| CompactError::AddressOutOfRange(c.clone()));
    }
    let tail = |x: &Address| Address(x.0[1..].to_vec());
    match m {
        Term::App(l, r) => {
            let (l2, r2) = if a.0[0] == 1 {
                (compress_step(l, &tail(a), &tail(c))?, (**r).clone())
            } else {
                ((**l).clone(), compress_step(r, &tail(a), &tail(c))?)
            };
            let r3 = rerank_all(&r2, l2.max_rank() + 1);
            Ok(Term::app(l2, r3))
        }
        Term::Lam(x, body) => {
            let occ = occurrences(body, x.rank);
            let body2 = compress_step(body, &tail(a), &tail(c))?;
            let alpha1 = blueprint_of(&body2);
            let (order, mut cur) = greedy_order(&alpha1, &occ, &x.ty).ok_or_else(|| {
                CompactError::ChainInvalid("bound occurrences cannot be extracted".into())
            })?;
            let mut blocks = vec![Block {
                formula: x.ty.clone(),
                order,
            }];
            while !cur.is_empty() {
                let (addr, phi, next) = extraction_steps(&cur)
                    .into_iter()
                    .next()
                    .ok_or_else(|| CompactError::ChainInvalid("stuck extraction".into()))?;
                blocks.push(Block {
                    formula: phi,
                    order: vec![addr],
                });
                cur = next;
            }
            let chain = ExtractionChain { blocks };
            let start = body2.max_rank() + 1;
            let targets: Vec<VarRef> = chain
                .sequence()
                .into_iter()
                .enumerate()
                .map(|(i, f)| VarRef::new(start + i as u32, f))
                .collect();
            let n1 = switch_var(&body2, &chain, &targets)?;
            let y = targets.last().cloned().expect("the bound block is present");
            Ok(Term::Lam(y, Box::new(n1)))
        }
        Term::Var(_) => Err(CompactError::NotACompression),
    }
}

/// A term of the same kind and type as `m`, of blueprint `alpha`, and no larger.
pub fn compress_term(m: &Term, alpha: &Blueprint) -> Result<Term, CompactError> {
    let beta = blueprint_of(m);
    if *alpha == beta {
        return Ok(m.clone());
    }
    let mut parent: HashMap<Blueprint, (Blueprint, Address, Address)> = HashMap::new();
    let mut queue = VecDeque::from([beta.clone()]);
    let mut found = false;
    'search: while let Some(cur) = queue.pop_front() {
        for (a, c, next) in graft_moves(&cur) {
            if next == beta || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), (cur.clone(), a, c));
            if next == *alpha {
                found = true;
                break 'search;
            }
            queue.push_back(next);
        }
    }
    if !found {
        return Err(CompactError::NotACompression);
    }
    let mut path = Vec::new();
    let mut cur = alpha.clone();
    while cur != beta {
        let (prev, a, c) = parent[&cur].clone();
        path.push((a, c, cur));
        cur = prev;
    }
    path.reverse();
    let mut t = m.clone();
    for (a, c, expect) in path {
        t = compress_step(&t, &a, &c)?;
        if blueprint_of(&t) != expect {
            return Err(CompactError::ChainInvalid(format!(
                "graft {a} <- {c} produced blueprint {:?}, expected {:?}",
                blueprint_of(&t),
                expect
            )));
        }
    }
    Ok(t)
}

pub fn is_locally_compact(m: &Term, phi: &Formula) -> bool {
    let n = subformulas(phi).len();
    m.addresses().iter().all(|a| {
        let sub = m.subterm(a).expect("own address");
        let k = lambda_prefix(m, a).map(|p| p.len()).unwrap_or(0);
        blueprint_of(sub).relative_depth() <= k * n
    })
}

/// A non-compactness witness: `a < b`, same kind and type, and a vertical compression
/// of the blueprint at `b` from which the free-variable types at `a` can be extracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub a: Address,
    pub b: Address,
    pub compression: Blueprint,
}

fn free_types(t: &Term) -> Vec<Formula> {
    free_vars(t).into_iter().map(|v| v.ty).collect()
}

/// Up-closure sorted smallest domain first.
fn sorted_up_closure(b: &Blueprint) -> Vec<Blueprint> {
    let mut v: Vec<Blueprint> = up_closure(b).into_iter().collect();
    v.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    v
}

/// First witness in lexicographic `(a, b)` order, smallest compression first.
pub fn find_witness(m: &Term) -> Option<Witness> {
    let addrs = m.addresses();
    let info: Vec<(&Term, Option<Formula>)> = addrs
        .iter()
        .map(|a| {
            let t = m.subterm(a).expect("own address");
            (t, type_of(t).ok())
        })
        .collect();
    let mut closures: HashMap<usize, Vec<(Blueprint, crate::blueprint::SeqSet)>> = HashMap::new();
    let mut order: Vec<usize> = (0..addrs.len()).collect();
    order.sort_by(|&i, &j| addrs[i].cmp(&addrs[j]));
    for &i in &order {
        for &j in &order {
            if !addrs[i].is_strict_prefix_of(&addrs[j]) {
                continue;
            }
            let (ta, tya) = &info[i];
            let (tb, tyb) = &info[j];
            if ta.kind() != tb.kind() || tya != tyb || tya.is_none() {
                continue;
            }
            let chi = free_types(ta);
            let cands = closures.entry(j).or_insert_with(|| {
                sorted_up_closure(&blueprint_of(tb))
                    .into_iter()
                    .map(|g| {
                        let f = f_of(&g);
                        (g, f)
                    })
                    .collect()
            });
            if let Some((g, _)) = cands.iter().find(|(_, f)| f.contains(&chi)) {
                return Some(Witness {
                    a: addrs[i].clone(),
                    b: addrs[j].clone(),
                    compression: g.clone(),
                });
            }
        }
    }
    None
}

pub fn is_compact(m: &Term) -> bool {
    find_witness(m).is_none()
}

/// An extraction chain of `b` whose sequence is `seq`, if one exists.
pub fn chain_for_sequence(b: &Blueprint, seq: &[Formula]) -> Option<ExtractionChain> {
    // state: blueprint, number of formulas of `seq` still to start, whether the current block is open
    fn go(
        b: &Blueprint,
        k: usize,
        open: bool,
        seq: &[Formula],
        blocks: &mut Vec<Block>,
        dead: &mut BTreeSet<(Blueprint, usize, bool)>,
    ) -> bool {
        if b.is_empty() {
            return k == 0;
        }
        if dead.contains(&(b.clone(), k, open)) {
            return false;
        }
        if open {
            let phi = blocks.last().expect("open block").formula.clone();
            for (a, f, next) in extraction_steps(b) {
                if f == phi {
                    blocks.last_mut().expect("open block").order.push(a);
                    if go(&next, k, true, seq, blocks, dead) {
                        return true;
                    }
                    blocks.last_mut().expect("open block").order.pop();
                }
            }
        }
        if k > 0 {
            let phi = seq[k - 1].clone();
            for (a, f, next) in extraction_steps(b) {
                if f == phi {
                    blocks.push(Block {
                        formula: phi.clone(),
                        order: vec![a],
                    });
                    if go(&next, k - 1, true, seq, blocks, dead) {
                        return true;
                    }
                    blocks.pop();
                }
            }
        }
        dead.insert((b.clone(), k, open));
        false
    }
    let mut blocks = Vec::new();
    go(b, seq.len(), false, seq, &mut blocks, &mut BTreeSet::new())
        .then_some(ExtractionChain { blocks })
}

/// Replaces the outer subterm of the first non-compactness witness by a smaller one.
pub fn shrink(m: &Term, _phi: &Formula) -> Result<Option<Term>, CompactError> {
    let Some(w) = find_witness(m) else {
        return Ok(None);
    };
    let at_a = m
        .subterm(&w.a)
        .ok_or_else(|| CompactError::AddressOutOfRange(w.a.clone()))?;
    let at_b = m
        .subterm(&w.b)
        .ok_or_else(|| CompactError::AddressOutOfRange(w.b.clone()))?;
    let n = compress_term(at_b, &w.compression)?;
    let targets = free_vars(at_a);
    let chi: Vec<Formula> = targets.iter().map(|v| v.ty.clone()).collect();
    let chain = chain_for_sequence(&w.compression, &chi).ok_or_else(|| {
        CompactError::ChainInvalid("no chain realizes the witness sequence".into())
    })?;
    let p = switch_var(&n, &chain, &targets)?;
    let p = p.shift_bound(m.max_rank().max(p.max_rank()) + 1);
    Ok(Some(m.replace_at(&w.a, p)?))
}

/// Shrinks until compact.
pub fn shrink_to_fixpoint(m: &Term, phi: &Formula) -> Result<Term, CompactError> {
    let mut cur = m.clone();
    while let Some(next) = shrink(&cur, phi)? {
        cur = next;
    }
    Ok(cur)
}
