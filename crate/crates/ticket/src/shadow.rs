//! Shadows of inhabitants, their compact enumeration, and the decision procedure.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use crate::blueprint::{
    admits_sequence, blueprint_of, canonicalize, compress_to_max, contractions, f_of, width,
    Blueprint,
};
use crate::combinator::{check_derivation, extract_combinator, CombDerivation};
use crate::compact::lambda_prefix;
use crate::formula::{subformulas, Formula};
use crate::oracle::{bounded_decide, OracleVerdict, SearchBound};
use crate::term::{free_vars, is_nf_inhabitant, type_of, Address, Term, VarRef};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShadowLabel {
    pub chi: Vec<Formula>,
    pub gamma: Blueprint,
    pub psi: Formula,
}

/// A finite tree of labels, arity at most two, children at `a·1` and `a·2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shadow {
    pub nodes: BTreeMap<Address, ShadowLabel>,
}

impl Shadow {
    pub fn root(phi: &Formula) -> Shadow {
        let label = ShadowLabel {
            chi: Vec::new(),
            gamma: Blueprint::empty(),
            psi: phi.clone(),
        };
        Shadow {
            nodes: BTreeMap::from([(Address::root(), label)]),
        }
    }

    pub fn domain(&self) -> BTreeSet<Address> {
        self.nodes.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn arity(&self, a: &Address) -> usize {
        [1, 2]
            .iter()
            .filter(|&&i| self.nodes.contains_key(&a.child(i)))
            .count()
    }

    /// Number of unary strict ancestors.
    pub fn unary_depth(&self, a: &Address) -> usize {
        a.strict_prefixes().filter(|p| self.arity(p) == 1).count()
    }
}

pub fn shadow_of(m: &Term, phi: &Formula) -> Shadow {
    let mut nodes = BTreeMap::new();
    for a in m.addresses() {
        let sub = m.subterm(&a).expect("own address");
        let k = lambda_prefix(m, &a).map(|p| p.len()).unwrap_or(0);
        let label = ShadowLabel {
            chi: free_vars(sub).into_iter().map(|v| v.ty).collect(),
            gamma: compress_to_max(&blueprint_of(sub), k),
            psi: type_of(sub).unwrap_or_else(|_| phi.clone()),
        };
        nodes.insert(a, label);
    }
    Shadow { nodes }
}

fn labels_within(b: &Blueprint, sub: &BTreeSet<Formula>) -> bool {
    b.labels().all(|l| sub.contains(l.formula()))
}

pub fn is_phi_shadow(x: &Shadow, phi: &Formula) -> bool {
    if x.nodes.get(&Address::root()) != Shadow::root(phi).nodes.get(&Address::root()) {
        return false;
    }
    let sub = subformulas(phi);
    let n = sub.len();
    for (a, l) in &x.nodes {
        if let Some(p) = a.parent() {
            if !x.nodes.contains_key(&p) {
                return false;
            }
        }
        match a.0.last() {
            None | Some(1) => {}
            Some(2) => {
                let sib = a.parent().expect("non-root").child(1);
                if !x.nodes.contains_key(&sib) {
                    return false;
                }
            }
            Some(_) => return false,
        }
        let k = x.unary_depth(a);
        let in_range = l.gamma == canonicalize(&l.gamma)
            && width(&l.gamma) <= k
            && l.gamma.relative_depth() <= k * n
            && labels_within(&l.gamma, &sub);
        if l.chi.len() > k
            || !l.chi.iter().all(|c| sub.contains(c))
            || !in_range
            || !f_of(&l.gamma).contains(&l.chi)
            || !sub.contains(&l.psi)
        {
            return false;
        }
    }
    true
}

pub fn is_compact_shadow(x: &Shadow) -> bool {
    for (a, la) in &x.nodes {
        let ra = x.arity(a);
        for (b, lb) in x.nodes.range(a.clone()..) {
            if a.is_strict_prefix_of(b)
                && x.arity(b) == ra
                && la.psi == lb.psi
                && admits_sequence(&lb.gamma, &la.chi)
            {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Node bound for the bounded engine.
    pub max_nodes: usize,
    /// Node bound for a single shadow.
    pub max_shadow_nodes: usize,
    pub max_shadows: usize,
    pub max_candidates: usize,
    pub time_budget: Option<Duration>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_nodes: 10,
            max_shadow_nodes: 48,
            max_shadows: 200_000,
            max_candidates: 256,
            time_budget: Some(Duration::from_secs(60)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub shadows_generated: usize,
    pub domains_searched: usize,
    pub nodes_expanded: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowSet {
    pub shadows: Vec<Shadow>,
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShadowError {
    #[error("resource exhausted: {reason}")]
    ResourceExhausted {
        reason: String,
        stats: Stats,
        partial: Vec<Shadow>,
    },
}

// A shadow node together with the typing data that generated it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct TNode {
    // indices into the binders above, increasing
    free: Vec<usize>,
    psi: Formula,
    in_head: bool,
    arity: u8,
    binder: Option<Formula>,
    gamma: Blueprint,
}

type TState = BTreeMap<Address, TNode>;

fn binders(s: &TState, a: &Address) -> Vec<Formula> {
    a.strict_prefixes()
        .filter_map(|p| s.get(&p).and_then(|n| n.binder.clone()))
        .collect()
}

fn chi_of(node: &TNode, binders: &[Formula]) -> Vec<Formula> {
    node.free.iter().map(|&i| binders[i].clone()).collect()
}

/// `@t(..@t(@t(c1, c2), c3).., cn)` with tags drawn from `tags` by the given indices.
fn chain_blueprint(chi: &[Formula], tags: &[Formula], choice: &[usize]) -> Blueprint {
    match chi {
        [] => Blueprint::empty(),
        [c] => Blueprint::leaf(c.clone()),
        [c1, rest @ ..] => {
            let mut acc = Blueprint::leaf(c1.clone());
            for (i, c) in rest.iter().enumerate() {
                acc = Blueprint::app(tags[choice[i]].clone(), &acc, &Blueprint::leaf(c.clone()));
            }
            acc
        }
    }
}

/// Tag choices for a chain of `len` applications: distinct first when possible, then lexicographic.
fn tag_choices(len: usize, ntags: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if len <= ntags {
        out.push((0..len).collect());
    } else {
        out.push((0..len).map(|i| i % ntags).collect());
    }
    let mut cur = vec![0usize; len];
    while out.len() < limit {
        if !out.contains(&cur) {
            out.push(cur.clone());
        }
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < ntags {
                break;
            }
            cur[i] = 0;
        }
    }
    out
}

struct Closure<'a> {
    sub: Vec<Formula>,
    caps: &'a Caps,
    start: Instant,
    tripped: Option<String>,
    stats: Stats,
}

impl Closure<'_> {
    fn trip(&mut self, reason: &str) {
        if self.tripped.is_none() {
            self.tripped = Some(reason.to_string());
        }
    }

    /// A blueprint for a node of sequence `chi` that avoids every forbidden sequence.
    fn choose_gamma(&mut self, chi: &[Formula], forbidden: &[Vec<Formula>]) -> Option<Blueprint> {
        // F is closed under contraction, so these are forced for every choice
        let forced = contractions(chi);
        if forbidden.iter().any(|f| forced.contains(f)) {
            return None;
        }
        if chi.len() <= 1 {
            return Some(chain_blueprint(chi, &self.sub, &[]));
        }
        for choice in tag_choices(chi.len() - 1, self.sub.len(), self.caps.max_candidates) {
            let g = chain_blueprint(chi, &self.sub, &choice);
            if !forbidden.iter().any(|f| admits_sequence(&g, f)) {
                return Some(g);
            }
        }
        if forbidden.is_empty() {
            return None;
        }
        self.trip("label candidates");
        None
    }

    fn leaf(
        &mut self,
        s: &TState,
        a: &Address,
        free: Vec<usize>,
        psi: Formula,
        in_head: bool,
    ) -> TNode {
        let bs = binders(s, a);
        let chi: Vec<Formula> = free.iter().map(|&i| bs[i].clone()).collect();
        let gamma = self.choose_gamma(&chi, &[]).unwrap_or_default();
        TNode {
            free,
            psi,
            in_head,
            arity: 0,
            binder: None,
            gamma,
        }
    }

    /// Every step-continuation of `s` at leaf `a`.
    fn expansions(&mut self, s: &TState, a: &Address) -> Vec<TState> {
        let node = s[a].clone();
        let bs = binders(s, a);
        let chi = chi_of(&node, &bs);
        let mut out = Vec::new();
        for arity in [1u8, 2] {
            let forbidden: Vec<Vec<Formula>> = a
                .strict_prefixes()
                .filter_map(|p| {
                    let n = &s[&p];
                    (n.arity == arity && n.psi == node.psi).then(|| chi_of(n, &binders(s, &p)))
                })
                .collect();
            let gamma = match self.choose_gamma(&chi, &forbidden) {
                Some(g) => g,
                None => continue,
            };
            if arity == 1 {
                let Some((dom, cod)) = node.psi.as_imp() else {
                    continue;
                };
                if node.in_head {
                    continue;
                }
                let mut t = s.clone();
                let mut free = node.free.clone();
                free.push(bs.len());
                {
                    let n = t.get_mut(a).expect("leaf present");
                    n.arity = 1;
                    n.binder = Some(dom.clone());
                    n.gamma = gamma.clone();
                }
                let child = self.leaf(&t, &a.child(1), free, cod.clone(), false);
                t.insert(a.child(1), child);
                out.push(t);
            } else {
                for sigma in self.sub.clone() {
                    let head = Formula::imp(sigma.clone(), node.psi.clone());
                    if !self.sub.contains(&head) {
                        continue;
                    }
                    for (f1, f2) in free_splits(&node.free) {
                        let mut t = s.clone();
                        {
                            let n = t.get_mut(a).expect("leaf present");
                            n.arity = 2;
                            n.gamma = gamma.clone();
                        }
                        let l = self.leaf(&t, &a.child(1), f1, head.clone(), true);
                        let r = self.leaf(&t, &a.child(2), f2, sigma.clone(), false);
                        t.insert(a.child(1), l);
                        t.insert(a.child(2), r);
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

/// Pairs `(f1, f2)` covering `free` with `max f1 <= max f2` whenever `f1` is nonempty.
fn free_splits(free: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = free.len();
    let mut out = Vec::new();
    for mask1 in 0u32..(1 << n) {
        for mask2 in 0u32..(1 << n) {
            if mask1 | mask2 != (1 << n) - 1 {
                continue;
            }
            let pick = |m: u32| -> Vec<usize> {
                (0..n)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| free[i])
                    .collect()
            };
            let (f1, f2) = (pick(mask1), pick(mask2));
            let ok = match (f1.last(), f2.last()) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(x), Some(y)) => x <= y,
            };
            if ok {
                out.push((f1, f2));
            }
        }
    }
    out
}

fn to_shadow(s: &TState) -> Shadow {
    let nodes = s
        .iter()
        .map(|(a, n)| {
            let label = ShadowLabel {
                chi: chi_of(n, &binders(s, a)),
                gamma: n.gamma.clone(),
                psi: n.psi.clone(),
            };
            (a.clone(), label)
        })
        .collect();
    Shadow { nodes }
}

/// Whether a leaf can hold a variable: one free binder, of the leaf's own type.
fn var_capable(s: &TState, a: &Address) -> bool {
    let n = &s[a];
    n.free.len() == 1 && binders(s, a)[n.free[0]] == n.psi
}

/// The root-only shadow and every compact shadow reachable from it by typed
/// step-continuations whose leaves all hold variables.
///
/// Leaves are settled in preorder: kept as a variable or expanded once.
pub fn enumerate_compact_shadows(phi: &Formula, caps: &Caps) -> Result<ShadowSet, ShadowError> {
    let mut cl = Closure {
        sub: subformulas(phi).into_iter().collect(),
        caps,
        start: Instant::now(),
        tripped: None,
        stats: Stats::default(),
    };
    let root: TState = BTreeMap::from([(
        Address::root(),
        TNode {
            free: Vec::new(),
            psi: phi.clone(),
            in_head: false,
            arity: 0,
            binder: None,
            gamma: Blueprint::empty(),
        },
    )]);
    let mut out: BTreeSet<Shadow> = BTreeSet::new();
    // each entry: a partial shadow and its unsettled leaves, first to settle last
    let mut stack: Vec<(TState, Vec<Address>)> = Vec::new();
    if caps.max_shadows == 0 || caps.max_shadow_nodes == 0 {
        cl.trip("shadow count");
    } else {
        out.insert(to_shadow(&root));
        stack.push((root, vec![Address::root()]));
    }
    let mut visited = 0usize;
    while let Some((s, mut pending)) = stack.pop() {
        visited += 1;
        if visited > caps.max_shadows {
            cl.trip("shadow count");
            break;
        }
        if cl.caps.time_budget.is_some_and(|t| cl.start.elapsed() > t) {
            cl.trip("time budget");
            break;
        }
        let Some(a) = pending.pop() else {
            out.insert(to_shadow(&s));
            continue;
        };
        cl.stats.nodes_expanded += 1;
        let mut children = Vec::new();
        for t in cl.expansions(&s, &a) {
            if t.len() > caps.max_shadow_nodes {
                cl.trip("shadow size");
                continue;
            }
            let mut p = pending.clone();
            if t.contains_key(&a.child(2)) {
                p.push(a.child(2));
            }
            p.push(a.child(1));
            children.push((t, p));
        }
        // pushed in reverse so that keeping the variable is explored first
        for c in children.into_iter().rev() {
            stack.push(c);
        }
        if var_capable(&s, &a) {
            stack.push((s, pending));
        }
    }
    cl.stats.shadows_generated = out.len();
    cl.stats.wall_time = cl.start.elapsed();
    let shadows: Vec<Shadow> = out.into_iter().collect();
    match cl.tripped {
        None => Ok(ShadowSet {
            shadows,
            stats: cl.stats,
        }),
        Some(reason) => Err(ShadowError::ResourceExhausted {
            reason,
            stats: cl.stats,
            partial: shadows,
        }),
    }
}

/// A closed normal inhabitant whose tree domain and subterm types match the shadow.
pub fn inhabitant_with_domain(phi: &Formula, x: &Shadow) -> Option<Term> {
    let root = x.nodes.get(&Address::root())?;
    if root.psi != *phi {
        return None;
    }
    let mut next = 1;
    let mut v = build(x, &Address::root(), phi, &[], &mut next, false);
    v.retain(|t| free_vars(t).is_empty() && is_nf_inhabitant(t, phi));
    v.sort_by_cached_key(|t| t.to_string());
    v.into_iter().next()
}

fn build(
    x: &Shadow,
    a: &Address,
    ty: &Formula,
    ctx: &[VarRef],
    next: &mut u32,
    in_head: bool,
) -> Vec<Term> {
    let Some(l) = x.nodes.get(a) else {
        return Vec::new();
    };
    if l.psi != *ty {
        return Vec::new();
    }
    match x.arity(a) {
        0 => ctx
            .iter()
            .filter(|v| v.ty == *ty)
            .map(|v| Term::Var(v.clone()))
            .collect(),
        1 => {
            let Some((dom, cod)) = ty.as_imp() else {
                return Vec::new();
            };
            if in_head || !x.nodes.contains_key(&a.child(1)) {
                return Vec::new();
            }
            let xv = VarRef::new(*next, dom.clone());
            *next += 1;
            let mut inner = ctx.to_vec();
            inner.push(xv.clone());
            build(x, &a.child(1), cod, &inner, next, false)
                .into_iter()
                .filter(|b| free_vars(b).last().map(|v| v.rank) == Some(xv.rank))
                .map(|b| Term::Lam(xv.clone(), Box::new(b)))
                .collect()
        }
        _ => {
            let Some(rl) = x.nodes.get(&a.child(2)) else {
                return Vec::new();
            };
            let sigma = rl.psi.clone();
            let lefts = build(
                x,
                &a.child(1),
                &Formula::imp(sigma.clone(), ty.clone()),
                ctx,
                next,
                true,
            );
            let rights = build(x, &a.child(2), &sigma, ctx, next, false);
            let mut out = Vec::new();
            for l in &lefts {
                for r in &rights {
                    let lm = free_vars(l).last().map(|v| v.rank);
                    let rm = free_vars(r).last().map(|v| v.rank);
                    let ok = match (lm, rm) {
                        (None, _) => true,
                        (Some(_), None) => false,
                        (Some(p), Some(q)) => p <= q,
                    };
                    if ok {
                        out.push(Term::app(l.clone(), r.clone()));
                    }
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Auto,
    Bounded,
    Shadow,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::Bounded => "bounded",
            Engine::Shadow => "shadow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Inhabited,
    Empty,
    ResourceExhausted,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Inhabited => "Inhabited",
            Verdict::Empty => "Empty",
            Verdict::ResourceExhausted => "ResourceExhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub formula: Formula,
    pub verdict: Verdict,
    pub witness_lambda: Option<Term>,
    pub witness_combinator: Option<CombDerivation>,
    pub stats: Stats,
    /// Set when a cap tripped or a witness failed to certify.
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideConfig {
    pub engine: Engine,
    pub caps: Caps,
    /// `auto` skips the shadow engine above this many subformulas.
    pub auto_shadow_max_sub: usize,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            engine: Engine::Auto,
            caps: Caps::default(),
            auto_shadow_max_sub: 10,
        }
    }
}

fn certify(phi: &Formula, t: Term, mut stats: Stats) -> Decision {
    let cert = extract_combinator(&t, phi);
    match cert {
        Ok(d) if check_derivation(&d).as_ref() == Ok(phi) && is_nf_inhabitant(&t, phi) => {
            Decision {
                formula: phi.clone(),
                verdict: Verdict::Inhabited,
                witness_lambda: Some(t),
                witness_combinator: Some(d),
                stats: std::mem::take(&mut stats),
                note: None,
            }
        }
        other => Decision {
            formula: phi.clone(),
            verdict: Verdict::ResourceExhausted,
            witness_lambda: None,
            witness_combinator: None,
            stats,
            note: Some(format!("witness {t} failed to certify: {other:?}")),
        },
    }
}

fn decide_bounded(phi: &Formula, caps: &Caps, stats: Stats) -> Decision {
    match bounded_decide(phi, &SearchBound::nodes(caps.max_nodes)) {
        OracleVerdict::Inhabited(t) => certify(phi, t, stats),
        OracleVerdict::Unknown => Decision {
            formula: phi.clone(),
            verdict: Verdict::ResourceExhausted,
            witness_lambda: None,
            witness_combinator: None,
            stats,
            note: Some(format!(
                "no inhabitant with at most {} nodes",
                caps.max_nodes
            )),
        },
    }
}

/// Whether every leaf can be a variable: its free sequence is its own type.
fn leaves_are_variables(x: &Shadow) -> bool {
    x.nodes
        .iter()
        .filter(|(a, _)| x.arity(a) == 0)
        .all(|(_, l)| l.chi.len() == 1 && l.chi[0] == l.psi)
}

fn decide_shadow(phi: &Formula, caps: &Caps) -> Decision {
    let (shadows, mut stats, tripped) = match enumerate_compact_shadows(phi, caps) {
        Ok(s) => (s.shadows, s.stats, None),
        Err(ShadowError::ResourceExhausted {
            reason,
            stats,
            partial,
        }) => (partial, stats, Some(reason)),
    };
    let start = Instant::now();
    // one search per domain and type pinning
    let mut keys: BTreeSet<(usize, Vec<(Address, Formula)>)> = BTreeSet::new();
    let mut reps: Vec<&Shadow> = Vec::new();
    for x in shadows.iter().filter(|x| leaves_are_variables(x)) {
        let key = (
            x.len(),
            x.nodes
                .iter()
                .map(|(a, l)| (a.clone(), l.psi.clone()))
                .collect(),
        );
        if keys.insert(key) {
            reps.push(x);
        }
    }
    reps.sort_by(|p, q| {
        p.len()
            .cmp(&q.len())
            .then_with(|| p.domain().cmp(&q.domain()))
    });
    for x in reps {
        stats.domains_searched += 1;
        if let Some(t) = inhabitant_with_domain(phi, x) {
            stats.wall_time += start.elapsed();
            return certify(phi, t, stats);
        }
    }
    stats.wall_time += start.elapsed();
    match tripped {
        None => Decision {
            formula: phi.clone(),
            verdict: Verdict::Empty,
            witness_lambda: None,
            witness_combinator: None,
            stats,
            note: None,
        },
        Some(reason) => Decision {
            formula: phi.clone(),
            verdict: Verdict::ResourceExhausted,
            witness_lambda: None,
            witness_combinator: None,
            stats,
            note: Some(format!("cap tripped: {reason}")),
        },
    }
}

pub fn decide(phi: &Formula, config: &DecideConfig) -> Decision {
    let start = Instant::now();
    let mut d = match config.engine {
        Engine::Bounded => decide_bounded(phi, &config.caps, Stats::default()),
        Engine::Shadow => decide_shadow(phi, &config.caps),
        Engine::Auto => {
            let b = decide_bounded(phi, &config.caps, Stats::default());
            if b.verdict == Verdict::Inhabited {
                b
            } else if subformulas(phi).len() > config.auto_shadow_max_sub {
                Decision {
                    note: Some(format!(
                        "shadow engine skipped above {} subformulas",
                        config.auto_shadow_max_sub
                    )),
                    ..b
                }
            } else {
                decide_shadow(phi, &config.caps)
            }
        }
    };
    d.stats.wall_time = start.elapsed();
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::tests::lf;
    use crate::compact::is_compact;
    use crate::oracle::minimal_inhabitants;
    use crate::term::alpha_canonical;
    use crate::term::tests::{f, w_term};

    fn id() -> Term {
        Term::lam(1, f("a"), Term::var(1, f("a")))
    }

    #[test]
    fn shadow_of_identity() {
        let x = shadow_of(&id(), &f("a->a"));
        assert_eq!(x.len(), 2);
        assert_eq!(
            x.nodes[&Address::root()],
            Shadow::root(&f("a->a")).nodes[&Address::root()]
        );
        let n = &x.nodes[&Address::from_steps(&[1])];
        assert_eq!(n.chi, vec![f("a")]);
        assert_eq!(n.gamma, lf("a"));
        assert_eq!(n.psi, f("a"));
        assert!(is_phi_shadow(&x, &f("a->a")));
        assert!(is_compact_shadow(&x));
    }

    #[test]
    fn shadow_of_w() {
        let phi = f("(p->p->c)->p->c");
        let x = shadow_of(&w_term(), &phi);
        assert_eq!(x.len(), 7);
        let n = &x.nodes[&Address::from_steps(&[1, 1, 1])];
        assert_eq!(n.chi, vec![f("p->p->c"), f("p")]);
        assert_eq!(n.psi, f("p->c"));
        assert!(is_phi_shadow(&x, &phi));
        assert!(is_compact_shadow(&x));
    }

    #[test]
    fn phi_shadow_rejections() {
        let phi = f("a->a");
        assert!(is_phi_shadow(&Shadow::root(&phi), &phi));
        assert!(is_compact_shadow(&Shadow::root(&phi)));
        let mut x = shadow_of(&id(), &phi);
        x.nodes.get_mut(&Address::from_steps(&[1])).unwrap().psi = f("b");
        assert!(!is_phi_shadow(&x, &phi));
        assert!(!is_phi_shadow(&Shadow::root(&f("b")), &phi));
    }

    #[test]
    fn duplicated_label_is_not_compact() {
        // a unary node copied onto a unary descendant
        let l = ShadowLabel {
            chi: vec![f("a")],
            gamma: lf("a"),
            psi: f("a->a"),
        };
        let mut x = Shadow::root(&f("a->a->a"));
        x.nodes.insert(Address::from_steps(&[1]), l.clone());
        x.nodes.insert(Address::from_steps(&[1, 1]), l.clone());
        x.nodes.insert(Address::from_steps(&[1, 1, 1]), l);
        assert!(!is_compact_shadow(&x));
    }

    #[test]
    fn enumeration_examples() {
        let caps = Caps::default();
        let s = enumerate_compact_shadows(&f("a"), &caps).unwrap();
        assert!(s.shadows.contains(&Shadow::root(&f("a"))));
        assert_eq!(
            decide(
                &f("a"),
                &DecideConfig {
                    engine: Engine::Shadow,
                    caps,
                    ..DecideConfig::default()
                }
            )
            .verdict,
            Verdict::Empty
        );

        let s = enumerate_compact_shadows(&f("a->a"), &caps).unwrap();
        let target = shadow_of(&id(), &f("a->a")).domain();
        assert!(s.shadows.iter().any(|x| x.domain() == target));
        for x in &s.shadows {
            assert!(is_phi_shadow(x, &f("a->a")), "{x:?}");
            assert!(is_compact_shadow(x), "{x:?}");
        }

        let zero = Caps {
            max_shadows: 0,
            ..caps
        };
        assert!(enumerate_compact_shadows(&f("a->a"), &zero).is_err());
    }

    #[test]
    fn inhabitant_search_examples() {
        let phi = f("a->a");
        assert_eq!(
            inhabitant_with_domain(&phi, &shadow_of(&id(), &phi)),
            Some(id())
        );
        assert_eq!(inhabitant_with_domain(&phi, &Shadow::root(&phi)), None);
        let w = f("(p->p->c)->p->c");
        assert_eq!(
            inhabitant_with_domain(&w, &shadow_of(&w_term(), &w)),
            Some(alpha_canonical(&w_term()))
        );
    }

    #[test]
    fn decide_examples() {
        let d = decide(&f("a->a"), &DecideConfig::default());
        assert_eq!(d.verdict, Verdict::Inhabited);
        assert_eq!(d.witness_lambda, Some(id()));
        assert_eq!(d.witness_combinator.unwrap().to_string(), "I");
        let cfg = DecideConfig {
            engine: Engine::Shadow,
            ..DecideConfig::default()
        };
        for s in ["a->b->a", "((a->b)->a)->a", "a->a->a"] {
            let d = decide(&f(s), &cfg);
            assert_eq!(d.verdict, Verdict::Empty, "{s}: {:?}", d.note);
        }
        for s in ["a->a", "(p->p->c)->p->c", "(x->y)->(p->x)->p->y"] {
            let d = decide(&f(s), &cfg);
            assert_eq!(d.verdict, Verdict::Inhabited, "{s}: {:?}", d.note);
        }
    }

    #[test]
    fn shadows_of_minimal_inhabitants() {
        for s in ["a->a", "(a->b)->a->b", "(p->p->c)->p->c"] {
            let phi = f(s);
            for m in minimal_inhabitants(&phi, &SearchBound::nodes(8)) {
                assert!(is_compact(&m));
                let x = shadow_of(&m, &phi);
                assert!(is_phi_shadow(&x, &phi), "{m}");
                assert!(is_compact_shadow(&x), "{m}");
            }
        }
    }
}
