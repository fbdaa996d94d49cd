//! HRM lambda terms: free variables, typing, HRM-preserving substitution and normalization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// A tree address. Terms only use the steps 1 and 2; blueprints may use any positive step.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Address(pub Vec<u32>);

impl Address {
    pub fn root() -> Address {
        Address(Vec::new())
    }

    pub fn from_steps(steps: &[u32]) -> Address {
        Address(steps.to_vec())
    }

    pub fn child(&self, i: u32) -> Address {
        let mut v = self.0.clone();
        v.push(i);
        Address(v)
    }

    pub fn concat(&self, other: &Address) -> Address {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Address(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self <= other` in the prefix order.
    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_strict_prefix_of(&self, other: &Address) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    pub fn comparable(&self, other: &Address) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The suffix `c` with `self · c = other`, if `self` is a prefix of `other`.
    pub fn strip_prefix(&self, other: &Address) -> Option<Address> {
        if self.is_prefix_of(other) {
            Some(Address(other.0[self.0.len()..].to_vec()))
        } else {
            None
        }
    }

    pub fn parent(&self) -> Option<Address> {
        if self.0.is_empty() {
            None
        } else {
            Some(Address(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// All strict prefixes, shortest first.
    pub fn strict_prefixes(&self) -> impl Iterator<Item = Address> + '_ {
        (0..self.0.len()).map(move |n| Address(self.0[..n].to_vec()))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A variable: its rank realizes the variable order, `ty` its declared type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarRef {
    pub rank: u32,
    pub ty: Formula,
}

impl VarRef {
    pub fn new(rank: u32, ty: Formula) -> VarRef {
        VarRef { rank, ty }
    }
}

impl fmt::Debug for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", var_name(self.rank), self.ty)
    }
}

pub fn var_name(rank: u32) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    match rank {
        1..=6 => NAMES[rank as usize - 1].to_string(),
        _ => format!("x{rank}"),
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(VarRef),
    Lam(VarRef, Box<Term>),
    App(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Var,
    Lam,
    App,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("term is not hereditarily right-maximal: {0}")]
    NotHRM(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("ill-formed term: {0}")]
    IllFormed(String),
    #[error("address {0} is not in the term")]
    BadAddress(Address),
}

impl Term {
    pub fn var(rank: u32, ty: Formula) -> Term {
        Term::Var(VarRef::new(rank, ty))
    }

    pub fn lam(rank: u32, ty: Formula, body: Term) -> Term {
        Term::Lam(VarRef::new(rank, ty), Box::new(body))
    }

    pub fn app(l: Term, r: Term) -> Term {
        Term::App(Box::new(l), Box::new(r))
    }

    pub fn kind(&self) -> Kind {
        match self {
            Term::Var(_) => Kind::Var,
            Term::Lam(..) => Kind::Lam,
            Term::App(..) => Kind::App,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn subterm(&self, a: &Address) -> Option<&Term> {
        let mut cur = self;
        for &s in &a.0 {
            cur = match (cur, s) {
                (Term::Lam(_, b), 1) => b,
                (Term::App(l, _), 1) => l,
                (Term::App(_, r), 2) => r,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// All addresses in preorder.
    pub fn addresses(&self) -> Vec<Address> {
        let mut out = Vec::new();
        fn go(t: &Term, a: Address, out: &mut Vec<Address>) {
            out.push(a.clone());
            match t {
                Term::Var(_) => {}
                Term::Lam(_, b) => go(b, a.child(1), out),
                Term::App(l, r) => {
                    go(l, a.child(1), out);
                    go(r, a.child(2), out);
                }
            }
        }
        go(self, Address::root(), &mut out);
        out
    }

    /// `self[a <- replacement]`.
    pub fn replace_at(&self, a: &Address, replacement: Term) -> Result<Term, TermError> {
        fn go(t: &Term, steps: &[u32], rep: Term, full: &Address) -> Result<Term, TermError> {
            let Some((&s, rest)) = steps.split_first() else {
                return Ok(rep);
            };
            match (t, s) {
                (Term::Lam(x, b), 1) => Ok(Term::Lam(x.clone(), Box::new(go(b, rest, rep, full)?))),
                (Term::App(l, r), 1) => Ok(Term::App(Box::new(go(l, rest, rep, full)?), r.clone())),
                (Term::App(l, r), 2) => Ok(Term::App(l.clone(), Box::new(go(r, rest, rep, full)?))),
                _ => Err(TermError::BadAddress(full.clone())),
            }
        }
        go(self, &a.0, replacement, a)
    }

    pub fn max_rank(&self) -> u32 {
        match self {
            Term::Var(x) => x.rank,
            Term::Lam(x, b) => x.rank.max(b.max_rank()),
            Term::App(l, r) => l.max_rank().max(r.max_rank()),
        }
    }

    pub fn bound_vars(&self) -> Vec<VarRef> {
        let mut out = Vec::new();
        fn go(t: &Term, out: &mut Vec<VarRef>) {
            match t {
                Term::Var(_) => {}
                Term::Lam(x, b) => {
                    out.push(x.clone());
                    go(b, out);
                }
                Term::App(l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// Renames variables by rank. Ranks not in the map are kept.
    pub fn rename(&self, map: &BTreeMap<u32, u32>) -> Term {
        let r = |x: &VarRef| VarRef::new(*map.get(&x.rank).unwrap_or(&x.rank), x.ty.clone());
        match self {
            Term::Var(x) => Term::Var(r(x)),
            Term::Lam(x, b) => Term::Lam(r(x), Box::new(b.rename(map))),
            Term::App(l, u) => Term::App(Box::new(l.rename(map)), Box::new(u.rename(map))),
        }
    }

    /// Moves every bound variable to a fresh rank starting at `start`, preserving their order.
    pub fn shift_bound(&self, start: u32) -> Term {
        let mut ranks: Vec<u32> = self.bound_vars().iter().map(|x| x.rank).collect();
        ranks.sort_unstable();
        ranks.dedup();
        let map = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, start + i as u32))
            .collect();
        self.rename(&map)
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{}", var_name(x.rank)),
            Term::Lam(x, b) => write!(f, "\\{}:{}. {}", var_name(x.rank), x.ty, b),
            Term::App(l, r) => {
                match **l {
                    Term::Lam(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                match **r {
                    Term::Var(_) => write!(f, " {r}"),
                    _ => write!(f, " ({r})"),
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{}#{}", var_name(x.rank), x.rank),
            Term::Lam(x, b) => write!(f, "\\{}#{}:{}. {:?}", var_name(x.rank), x.rank, x.ty, b),
            Term::App(l, r) => write!(f, "({l:?} {r:?})"),
        }
    }
}

fn free_map(t: &Term) -> BTreeMap<u32, Formula> {
    match t {
        Term::Var(x) => BTreeMap::from([(x.rank, x.ty.clone())]),
        Term::Lam(x, b) => {
            let mut m = free_map(b);
            m.remove(&x.rank);
            m
        }
        Term::App(l, r) => {
            let mut m = free_map(l);
            m.extend(free_map(r));
            m
        }
    }
}

/// Free variables, strictly increasing by rank.
pub fn free_vars(m: &Term) -> Vec<VarRef> {
    free_map(m)
        .into_iter()
        .map(|(rank, ty)| VarRef { rank, ty })
        .collect()
}

/// Checks the bound-variable convention and that each rank carries a single type.
pub fn check_well_formed(m: &Term) -> Result<(), TermError> {
    let mut types: BTreeMap<u32, Formula> = BTreeMap::new();
    let mut binders: BTreeSet<u32> = BTreeSet::new();
    fn go(
        t: &Term,
        types: &mut BTreeMap<u32, Formula>,
        binders: &mut BTreeSet<u32>,
    ) -> Result<(), TermError> {
        let mut note = |x: &VarRef| -> Result<(), TermError> {
            match types.get(&x.rank) {
                Some(ty) if *ty != x.ty => Err(TermError::IllFormed(format!(
                    "rank {} used with types {} and {}",
                    x.rank, ty, x.ty
                ))),
                _ => {
                    types.insert(x.rank, x.ty.clone());
                    Ok(())
                }
            }
        };
        match t {
            Term::Var(x) => note(x),
            Term::Lam(x, b) => {
                note(x)?;
                if !binders.insert(x.rank) {
                    return Err(TermError::IllFormed(format!("rank {} bound twice", x.rank)));
                }
                go(b, types, binders)
            }
            Term::App(l, r) => {
                go(l, types, binders)?;
                go(r, types, binders)
            }
        }
    }
    go(m, &mut types, &mut binders)?;
    for x in free_vars(m) {
        if binders.contains(&x.rank) {
            return Err(TermError::IllFormed(format!(
                "rank {} is both free and bound",
                x.rank
            )));
        }
    }
    Ok(())
}

fn hrm_free(t: &Term) -> Option<BTreeSet<u32>> {
    match t {
        Term::Var(x) => Some(BTreeSet::from([x.rank])),
        Term::Lam(x, b) => {
            let mut fb = hrm_free(b)?;
            if fb.last() != Some(&x.rank) {
                return None;
            }
            fb.remove(&x.rank);
            Some(fb)
        }
        Term::App(l, r) => {
            let fl = hrm_free(l)?;
            let fr = hrm_free(r)?;
            if let Some(ml) = fl.last() {
                match fr.last() {
                    Some(mr) if ml <= mr => {}
                    _ => return None,
                }
            }
            let mut u = fl;
            u.extend(fr);
            Some(u)
        }
    }
}

pub fn is_hrm(m: &Term) -> bool {
    hrm_free(m).is_some()
}

pub fn type_of(m: &Term) -> Result<Formula, TermError> {
    check_well_formed(m)?;
    type_rec(m).map(|(ty, _)| ty)
}

fn type_rec(t: &Term) -> Result<(Formula, BTreeSet<u32>), TermError> {
    match t {
        Term::Var(x) => Ok((x.ty.clone(), BTreeSet::from([x.rank]))),
        Term::Lam(x, b) => {
            let (tb, mut fb) = type_rec(b)?;
            if fb.last() != Some(&x.rank) {
                return Err(TermError::NotHRM(format!(
                    "binder {} is not the greatest free variable of its body",
                    var_name(x.rank)
                )));
            }
            fb.remove(&x.rank);
            Ok((Formula::imp(x.ty.clone(), tb), fb))
        }
        Term::App(l, r) => {
            let (tl, fl) = type_rec(l)?;
            let (tr, fr) = type_rec(r)?;
            match tl.as_imp() {
                Some((a, b)) if *a == tr => {
                    if let Some(ml) = fl.last() {
                        match fr.last() {
                            Some(mr) if ml <= mr => {}
                            _ => {
                                return Err(TermError::NotHRM(
                                    "a free variable of the function exceeds every free variable of the argument"
                                        .into(),
                                ))
                            }
                        }
                    }
                    let b = b.clone();
                    let mut u = fl;
                    u.extend(fr);
                    Ok((b, u))
                }
                _ => Err(TermError::TypeMismatch(format!(
                    "cannot apply a term of type {tl} to a term of type {tr}"
                ))),
            }
        }
    }
}

pub fn is_normal(m: &Term) -> bool {
    match m {
        Term::Var(_) => true,
        Term::Lam(_, b) => is_normal(b),
        Term::App(l, r) => !matches!(**l, Term::Lam(..)) && is_normal(l) && is_normal(r),
    }
}

pub fn is_nf_inhabitant(m: &Term, phi: &Formula) -> bool {
    m.is_closed() && is_normal(m) && type_of(m).map(|t| t == *phi).unwrap_or(false)
}

fn violated(msg: &str) -> TermError {
    TermError::PreconditionViolated(msg.to_string())
}

/// `p<x <- q>` under the side conditions that keep the result HRM and typed.
pub fn hrm_substitute(p: &Term, x: &VarRef, q: &Term) -> Result<Term, TermError> {
    type_of(p)?;
    let tq = type_of(q)?;
    if tq != x.ty {
        return Err(violated("x and q have different types"));
    }
    let fp: Vec<u32> = free_vars(p).iter().map(|v| v.rank).collect();
    let fq = free_vars(q);
    let x_free = fp.contains(&x.rank);
    match fq.last() {
        None => {
            if x_free && fp.first() != Some(&x.rank) {
                return Err(violated(
                    "q is closed but x is not the least free variable of p",
                ));
            }
        }
        Some(mq) => {
            for &z in &fp {
                if z < x.rank && z > mq.rank {
                    return Err(violated("a free variable of p below x exceeds max Free(q)"));
                }
                if z > x.rank && mq.rank >= z {
                    return Err(violated(
                        "a free variable of p above x is not above max Free(q)",
                    ));
                }
            }
            if p.bound_vars().iter().any(|z| z.rank <= mq.rank) {
                return Err(violated("a bound variable of p is not above max Free(q)"));
            }
        }
    }
    let p_ranks: BTreeSet<u32> = all_ranks(p);
    let q_bound: BTreeSet<u32> = q.bound_vars().iter().map(|v| v.rank).collect();
    let mut next = p.max_rank().max(q.max_rank()) + 1;
    let mut copies = 0usize;
    fn go(
        t: &Term,
        x: u32,
        q: &Term,
        keep_first: bool,
        copies: &mut usize,
        next: &mut u32,
    ) -> Term {
        match t {
            Term::Var(v) if v.rank == x => {
                *copies += 1;
                if *copies == 1 && keep_first {
                    q.clone()
                } else {
                    let n = q.bound_vars().len() as u32;
                    let c = q.shift_bound(*next);
                    *next += n;
                    c
                }
            }
            Term::Var(_) => t.clone(),
            Term::Lam(v, b) => {
                Term::Lam(v.clone(), Box::new(go(b, x, q, keep_first, copies, next)))
            }
            Term::App(l, r) => Term::App(
                Box::new(go(l, x, q, keep_first, copies, next)),
                Box::new(go(r, x, q, keep_first, copies, next)),
            ),
        }
    }
    let keep_first = q_bound.is_disjoint(&p_ranks);
    Ok(go(p, x.rank, q, keep_first, &mut copies, &mut next))
}

fn all_ranks(t: &Term) -> BTreeSet<u32> {
    let mut s: BTreeSet<u32> = t.bound_vars().iter().map(|v| v.rank).collect();
    s.extend(free_vars(t).iter().map(|v| v.rank));
    s
}

/// Address of the leftmost-outermost redex.
fn find_redex(t: &Term, at: Address) -> Option<Address> {
    match t {
        Term::Var(_) => None,
        Term::Lam(_, b) => find_redex(b, at.child(1)),
        Term::App(l, r) => {
            if matches!(**l, Term::Lam(..)) {
                return Some(at);
            }
            find_redex(l, at.child(1)).or_else(|| find_redex(r, at.child(2)))
        }
    }
}

/// Normalizes a typed term, renaming the redex body's bound variables above
/// everything in use before each contraction.
pub fn hrm_normalize(m: &Term) -> Result<Term, TermError> {
    type_of(m)?;
    let mut cur = m.clone();
    while let Some(a) = find_redex(&cur, Address::root()) {
        let redex = cur
            .subterm(&a)
            .ok_or_else(|| TermError::BadAddress(a.clone()))?;
        let Term::App(l, q) = redex else {
            unreachable!("find_redex returns applications")
        };
        let Term::Lam(x, body) = &**l else {
            unreachable!("find_redex returns redexes")
        };
        let body = body.shift_bound(cur.max_rank() + 1);
        let contracted = hrm_substitute(&body, x, q)?;
        cur = cur.replace_at(&a, contracted)?;
    }
    Ok(cur)
}

/// Re-ranks bound variables to consecutive ranks just above the free ones, in preorder.
pub fn alpha_canonical(m: &Term) -> Term {
    let start = free_vars(m).last().map_or(1, |v| v.rank + 1);
    let mut map = BTreeMap::new();
    let mut next = start;
    fn go(t: &Term, map: &mut BTreeMap<u32, u32>, next: &mut u32) {
        match t {
            Term::Var(_) => {}
            Term::Lam(x, b) => {
                map.insert(x.rank, *next);
                *next += 1;
                go(b, map, next);
            }
            Term::App(l, r) => {
                go(l, map, next);
                go(r, map, next);
            }
        }
    }
    go(m, &mut map, &mut next);
    m.rename(&map)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::formula::parse_formula;

    pub fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    pub fn b_term() -> Term {
        // \f g x. f (g x)  with f:x->y, g:p->x, x:p
        Term::lam(
            1,
            f("x->y"),
            Term::lam(
                2,
                f("p->x"),
                Term::lam(
                    3,
                    f("p"),
                    Term::app(
                        Term::var(1, f("x->y")),
                        Term::app(Term::var(2, f("p->x")), Term::var(3, f("p"))),
                    ),
                ),
            ),
        )
    }

    pub fn w_term() -> Term {
        let h = f("p->p->c");
        Term::lam(
            1,
            h.clone(),
            Term::lam(
                2,
                f("p"),
                Term::app(
                    Term::app(Term::var(1, h), Term::var(2, f("p"))),
                    Term::var(2, f("p")),
                ),
            ),
        )
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(free_vars(&Term::var(4, f("a"))).len(), 1);
        assert!(free_vars(&Term::lam(1, f("a"), Term::var(1, f("a")))).is_empty());
        let t = Term::app(
            Term::var(1, f("x->y")),
            Term::app(Term::var(2, f("p->x")), Term::var(3, f("p"))),
        );
        let ranks: Vec<u32> = free_vars(&t).iter().map(|v| v.rank).collect();
        assert_eq!(ranks, vec![1, 2, 3]);
    }

    #[test]
    fn hrm_examples() {
        assert!(is_hrm(&b_term()));
        assert!(is_hrm(&w_term()));
        for (ry, rz) in [(1, 2), (2, 1)] {
            let t = Term::lam(
                ry,
                f("b"),
                Term::lam(
                    rz,
                    f("b->c"),
                    Term::app(Term::var(rz, f("b->c")), Term::var(ry, f("b"))),
                ),
            );
            assert!(!is_hrm(&t));
        }
        for ry in [1, 3] {
            let t = Term::lam(
                2,
                f("a->b"),
                Term::app(Term::var(2, f("a->b")), Term::var(ry, f("a"))),
            );
            assert!(!is_hrm(&t));
        }
    }

    #[test]
    fn typing_examples() {
        let id = Term::lam(1, f("a"), Term::var(1, f("a")));
        assert_eq!(type_of(&id).unwrap(), f("a->a"));
        assert_eq!(type_of(&b_term()).unwrap(), f("(x->y)->(p->x)->p->y"));
        let bad = Term::app(Term::var(1, f("a")), Term::var(2, f("b")));
        assert!(matches!(type_of(&bad), Err(TermError::TypeMismatch(_))));
        let not_hrm = Term::app(Term::var(2, f("a->b")), Term::var(1, f("a")));
        assert!(matches!(type_of(&not_hrm), Err(TermError::NotHRM(_))));
    }

    #[test]
    fn normal_and_inhabitant() {
        let id = Term::lam(1, f("a"), Term::var(1, f("a")));
        assert!(is_normal(&id));
        assert!(!is_normal(&Term::app(id.clone(), Term::var(2, f("a")))));
        assert!(is_normal(&w_term()));
        assert!(is_nf_inhabitant(&id, &f("a->a")));
        assert!(!is_nf_inhabitant(&id, &f("a->b")));
        assert!(is_nf_inhabitant(&w_term(), &f("(p->p->c)->p->c")));
    }

    #[test]
    fn substitute_examples() {
        let x = VarRef::new(1, f("a->b"));
        let q = Term::var(7, f("a->b"));
        assert_eq!(hrm_substitute(&Term::Var(x.clone()), &x, &q).unwrap(), q);

        let p = Term::app(Term::var(2, f("a->b")), Term::var(3, f("a")));
        let xv = VarRef::new(2, f("a->b"));
        let z = Term::var(1, f("a->b"));
        let r = hrm_substitute(&p, &xv, &z).unwrap();
        assert_eq!(r, Term::app(Term::var(1, f("a->b")), Term::var(3, f("a"))));
        assert!(is_hrm(&r));
        assert_eq!(type_of(&r).unwrap(), type_of(&p).unwrap());

        // bound rank of p below max Free(q)
        let p = Term::lam(
            2,
            f("a"),
            Term::app(Term::var(1, f("a->b")), Term::var(2, f("a"))),
        );
        let q = Term::var(3, f("a->b"));
        let xv = VarRef::new(1, f("a->b"));
        assert!(matches!(
            hrm_substitute(&p, &xv, &q),
            Err(TermError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn normalize_examples() {
        let id1 = Term::lam(1, f("a"), Term::var(1, f("a")));
        assert_eq!(hrm_normalize(&id1).unwrap(), id1);
        let ii = Term::app(
            Term::lam(1, f("a->a"), Term::var(1, f("a->a"))),
            Term::lam(2, f("a"), Term::var(2, f("a"))),
        );
        let n = hrm_normalize(&ii).unwrap();
        assert_eq!(alpha_canonical(&n), id1);

        // B I at f:a->a, g:p->a, x:p
        let b = Term::lam(
            1,
            f("a->a"),
            Term::lam(
                2,
                f("p->a"),
                Term::lam(
                    3,
                    f("p"),
                    Term::app(
                        Term::var(1, f("a->a")),
                        Term::app(Term::var(2, f("p->a")), Term::var(3, f("p"))),
                    ),
                ),
            ),
        );
        let bi = Term::app(b, Term::lam(4, f("a"), Term::var(4, f("a"))));
        let n = hrm_normalize(&bi).unwrap();
        assert!(is_normal(&n));
        assert_eq!(type_of(&n).unwrap(), f("(p->a)->p->a"));
        let expect = Term::lam(
            1,
            f("p->a"),
            Term::lam(
                2,
                f("p"),
                Term::app(Term::var(1, f("p->a")), Term::var(2, f("p"))),
            ),
        );
        assert_eq!(alpha_canonical(&n), expect);
    }

    #[test]
    fn canonical_examples() {
        let a = Term::lam(9, f("a"), Term::var(9, f("a")));
        assert_eq!(
            alpha_canonical(&a),
            Term::lam(1, f("a"), Term::var(1, f("a")))
        );
        let w2 = w_term().rename(&BTreeMap::from([(1, 10), (2, 40)]));
        assert_eq!(alpha_canonical(&w2), alpha_canonical(&w_term()));
        assert_eq!(alpha_canonical(&w_term()), w_term());
    }

    #[test]
    fn printing() {
        assert_eq!(
            Term::lam(1, f("a"), Term::var(1, f("a"))).to_string(),
            "\\x:a. x"
        );
        assert_eq!(w_term().to_string(), "\\x:p->p->c. \\y:p. x y y");
        assert_eq!(b_term().to_string(), "\\x:x->y. \\y:p->x. \\z:p. x (y z)");
    }

    #[test]
    fn well_formedness() {
        let dup = Term::app(
            Term::lam(1, f("a"), Term::var(1, f("a"))),
            Term::lam(1, f("a"), Term::var(1, f("a"))),
        );
        assert!(check_well_formed(&dup).is_err());
        let clash = Term::app(
            Term::var(1, f("a->a")),
            Term::lam(1, f("a"), Term::var(1, f("a"))),
        );
        assert!(check_well_formed(&clash).is_err());
    }
}
