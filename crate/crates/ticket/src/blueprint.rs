//! Blueprints: stable parts of terms, extraction, extractible sequences,
//! equivalence, vertical and transversal compressions, and selectors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Signature};
use crate::term::{free_vars, type_of, Address, Term};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Leaf(Formula),
    AppTag(Formula),
}

impl Label {
    pub fn formula(&self) -> &Formula {
        match self {
            Label::Leaf(f) | Label::AppTag(f) => f,
        }
    }
}

/// A finite partial tree over formulas (arity 0) and application tags (arity 2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Blueprint {
    map: BTreeMap<Address, Label>,
}

pub type Seq = Vec<Formula>;
pub type SeqSet = BTreeSet<Seq>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlueprintError {
    #[error("cannot extract {formula} at {address}")]
    NotExtractable { address: Address, formula: Formula },
    #[error("right shuffle of an empty sequence")]
    EmptySequence,
    #[error("selector exceeds the limit of {limit} elements")]
    ResourceLimit { limit: usize },
    #[error("invalid blueprint: {0}")]
    Invalid(String),
}

impl Blueprint {
    pub fn empty() -> Blueprint {
        Blueprint::default()
    }

    pub fn from_map(map: BTreeMap<Address, Label>) -> Blueprint {
        Blueprint { map }
    }

    pub fn leaf(f: Formula) -> Blueprint {
        Blueprint::from_map(BTreeMap::from([(Address::root(), Label::Leaf(f))]))
    }

    /// `@tag(left, right)`; both children should be nonempty.
    pub fn app(tag: Formula, left: &Blueprint, right: &Blueprint) -> Blueprint {
        let mut map = BTreeMap::from([(Address::root(), Label::AppTag(tag))]);
        map.extend(left.prefixed(&Address::from_steps(&[1])).map);
        map.extend(right.prefixed(&Address::from_steps(&[2])).map);
        Blueprint { map }
    }

    /// Places the i-th child at address `(i+1)`.
    pub fn star(children: &[Blueprint]) -> Blueprint {
        let addrs: Vec<Address> = (1..=children.len() as u32)
            .map(|i| Address::from_steps(&[i]))
            .collect();
        Blueprint::star_at(&addrs, children).expect("consecutive addresses are incomparable")
    }

    pub fn star_at(addrs: &[Address], children: &[Blueprint]) -> Result<Blueprint, BlueprintError> {
        if addrs.len() != children.len() {
            return Err(BlueprintError::Invalid(
                "address/child count mismatch".into(),
            ));
        }
        for (i, a) in addrs.iter().enumerate() {
            for b in &addrs[i + 1..] {
                if a.comparable(b) {
                    return Err(BlueprintError::Invalid(format!(
                        "{a} and {b} are comparable"
                    )));
                }
            }
        }
        let mut map = BTreeMap::new();
        for (a, c) in addrs.iter().zip(children) {
            map.extend(c.prefixed(a).map);
        }
        Ok(Blueprint { map })
    }

    fn prefixed(&self, p: &Address) -> Blueprint {
        Blueprint {
            map: self
                .map
                .iter()
                .map(|(a, l)| (p.concat(a), l.clone()))
                .collect(),
        }
    }

    pub fn map(&self) -> &BTreeMap<Address, Label> {
        &self.map
    }

    pub fn get(&self, a: &Address) -> Option<&Label> {
        self.map.get(a)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_rooted(&self) -> bool {
        self.map.contains_key(&Address::root())
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.map.values()
    }

    /// `self↓a`.
    pub fn restrict(&self, a: &Address) -> Blueprint {
        Blueprint {
            map: self
                .map
                .range(a.clone()..)
                .take_while(|(b, _)| a.is_prefix_of(b))
                .map(|(b, l)| (a.strip_prefix(b).expect("prefix checked"), l.clone()))
                .collect(),
        }
    }

    /// `self[a <- sub]`.
    pub fn graft(&self, a: &Address, sub: &Blueprint) -> Blueprint {
        let mut map: BTreeMap<Address, Label> = self
            .map
            .iter()
            .filter(|(b, _)| !a.is_prefix_of(b))
            .map(|(b, l)| (b.clone(), l.clone()))
            .collect();
        map.extend(sub.prefixed(a).map);
        Blueprint { map }
    }

    /// Domain addresses with no strict prefix in the domain.
    pub fn minimal_addresses(&self) -> Vec<Address> {
        let mut out: Vec<Address> = Vec::new();
        for a in self.map.keys() {
            if !out.iter().any(|m| m.is_prefix_of(a)) {
                out.push(a.clone());
            }
        }
        out
    }

    pub fn relative_depth(&self) -> usize {
        self.map
            .keys()
            .map(|a| {
                a.strict_prefixes()
                    .filter(|p| self.map.contains_key(p))
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// Checks positive steps, nonempty application children and leaf maximality.
    pub fn validate(&self) -> Result<(), BlueprintError> {
        for (a, l) in &self.map {
            if a.0.contains(&0) {
                return Err(BlueprintError::Invalid(format!(
                    "address {a} has a zero step"
                )));
            }
            let below = |i: u32| self.restrict(&a.child(i)).is_empty();
            match l {
                Label::AppTag(_) => {
                    if below(1) || below(2) {
                        return Err(BlueprintError::Invalid(format!(
                            "application at {a} has an empty child"
                        )));
                    }
                    if self
                        .restrict(a)
                        .map
                        .keys()
                        .any(|c| !c.is_root() && c.0[0] > 2)
                    {
                        return Err(BlueprintError::Invalid(format!(
                            "application at {a} has a child beyond position 2"
                        )));
                    }
                }
                Label::Leaf(_) => {
                    if self.restrict(a).len() > 1 {
                        return Err(BlueprintError::Invalid(format!(
                            "leaf at {a} is not maximal"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A rooted blueprint up to equivalence; groups are sorted multisets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Shape {
    Leaf(Formula),
    App(Formula, Vec<Shape>, Vec<Shape>),
}

impl Shape {
    pub fn size(&self) -> usize {
        match self {
            Shape::Leaf(_) => 1,
            Shape::App(_, l, r) => 1 + group_size(l) + group_size(r),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Shape::Leaf(_) => 0,
            Shape::App(_, l, r) => 1 + group_depth(l).max(group_depth(r)),
        }
    }
}

fn group_size(g: &[Shape]) -> usize {
    g.iter().map(Shape::size).sum()
}

fn group_depth(g: &[Shape]) -> usize {
    g.iter().map(Shape::depth).max().unwrap_or(0)
}

fn shape_rooted(b: &Blueprint) -> Shape {
    match b.get(&Address::root()) {
        Some(Label::Leaf(f)) => Shape::Leaf(f.clone()),
        Some(Label::AppTag(f)) => Shape::App(
            f.clone(),
            shape_group(&b.restrict(&Address::from_steps(&[1]))),
            shape_group(&b.restrict(&Address::from_steps(&[2]))),
        ),
        None => unreachable!("shape_rooted needs a rooted blueprint"),
    }
}

/// The sorted multiset of rooted components.
pub fn shape_group(b: &Blueprint) -> Vec<Shape> {
    let mut g: Vec<Shape> = b
        .minimal_addresses()
        .iter()
        .map(|a| shape_rooted(&b.restrict(a)))
        .collect();
    g.sort();
    g
}

fn from_shape(s: &Shape) -> Blueprint {
    match s {
        Shape::Leaf(f) => Blueprint::leaf(f.clone()),
        Shape::App(f, l, r) => Blueprint::app(f.clone(), &from_group(l), &from_group(r)),
    }
}

/// Canonical layout: one component at the root, several at `(1)..(k)`.
pub fn from_group(g: &[Shape]) -> Blueprint {
    match g {
        [] => Blueprint::empty(),
        [s] => from_shape(s),
        _ => Blueprint::star(&g.iter().map(from_shape).collect::<Vec<_>>()),
    }
}

pub fn canonicalize(b: &Blueprint) -> Blueprint {
    from_group(&shape_group(b))
}

pub fn equivalent(a: &Blueprint, b: &Blueprint) -> bool {
    shape_group(a) == shape_group(b)
}

fn fmt_shape(s: &Shape, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match s {
        Shape::Leaf(x) => write!(f, "{x}"),
        Shape::App(t, l, r) => {
            if t.is_atom() {
                write!(f, "@{t}(")?;
            } else {
                write!(f, "@({t})(")?;
            }
            fmt_group(l, f)?;
            write!(f, ",")?;
            fmt_group(r, f)?;
            write!(f, ")")
        }
    }
}

fn fmt_group(g: &[Shape], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match g {
        [] => write!(f, "."),
        [s] => fmt_shape(s, f),
        _ => {
            write!(f, "*(")?;
            for (i, s) in g.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                fmt_shape(s, f)?;
            }
            write!(f, ")")
        }
    }
}

/// Prints the equivalence class: `.` for empty, `*(..)` for several components, `@tag(l,r)`.
impl fmt::Display for Blueprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_group(&shape_group(self), f)
    }
}

impl fmt::Debug for Blueprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, l)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match l {
                Label::Leaf(x) => write!(f, "{a}:{x}")?,
                Label::AppTag(x) => write!(f, "{a}:@{x}")?,
            }
        }
        write!(f, "}}")
    }
}

/// The blueprint of a normal term: its stable part labelled by subterm types.
pub fn blueprint_of(m: &Term) -> Blueprint {
    let top: BTreeSet<u32> = free_vars(m).iter().map(|v| v.rank).collect();
    let mut map = BTreeMap::new();
    for a in m.addresses() {
        let sub = m.subterm(&a).expect("address from the term");
        let stable = match sub {
            Term::Lam(..) => false,
            _ => free_vars(sub).iter().all(|v| top.contains(&v.rank)),
        };
        if !stable {
            continue;
        }
        let Ok(ty) = type_of(sub) else { continue };
        let label = match sub {
            Term::Var(_) => Label::Leaf(ty),
            _ => Label::AppTag(ty),
        };
        map.insert(a, label);
    }
    Blueprint { map }
}

/// Single extraction step: removes the leaf at `a` and every application tag above it.
pub fn extract_at(b: &Blueprint, a: &Address, phi: &Formula) -> Result<Blueprint, BlueprintError> {
    let fail = || BlueprintError::NotExtractable {
        address: a.clone(),
        formula: phi.clone(),
    };
    match b.get(a) {
        Some(Label::Leaf(f)) if f == phi => {}
        _ => return Err(fail()),
    }
    let mut map = b.map.clone();
    map.remove(a);
    for p in a.strict_prefixes() {
        match b.get(&p) {
            None => {}
            Some(Label::AppTag(_)) if a.0[p.len()] == 2 => {
                map.remove(&p);
            }
            Some(_) => return Err(fail()),
        }
    }
    Ok(Blueprint { map })
}

/// All single extraction steps `(address, formula, result)`.
pub fn extraction_steps(b: &Blueprint) -> Vec<(Address, Formula, Blueprint)> {
    b.map
        .iter()
        .filter_map(|(a, l)| match l {
            Label::Leaf(f) => extract_at(b, a, f).ok().map(|r| (a.clone(), f.clone(), r)),
            Label::AppTag(_) => None,
        })
        .collect()
}

/// Extractible sequences by exhaustive search over extraction chains.
pub fn extraction_sequences_closure(b: &Blueprint) -> SeqSet {
    let mut memo: HashMap<Blueprint, SeqSet> = HashMap::new();
    fn go(b: &Blueprint, memo: &mut HashMap<Blueprint, SeqSet>) -> SeqSet {
        if b.is_empty() {
            return SeqSet::from([Vec::new()]);
        }
        if let Some(s) = memo.get(b) {
            return s.clone();
        }
        let mut out = SeqSet::new();
        for (_, phi, rest) in extraction_steps(b) {
            for t in go(&rest, memo) {
                if t.last() == Some(&phi) {
                    out.insert(t.clone());
                }
                let mut t = t;
                t.push(phi.clone());
                out.insert(t);
            }
        }
        memo.insert(b.clone(), out.clone());
        out
    }
    go(b, &mut memo)
}

/// All sequences obtained by collapsing adjacent duplicates.
pub fn contractions(s: &[Formula]) -> SeqSet {
    let mut runs: Vec<(&Formula, usize)> = Vec::new();
    for f in s {
        match runs.last_mut() {
            Some((g, n)) if *g == f => *n += 1,
            _ => runs.push((f, 1)),
        }
    }
    let mut out: Vec<Seq> = vec![Vec::new()];
    for (f, n) in runs {
        let mut next = Vec::with_capacity(out.len() * n);
        for prefix in &out {
            for k in 1..=n {
                let mut p = prefix.clone();
                p.extend(std::iter::repeat_n(f.clone(), k));
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().collect()
}

pub fn contraction_closure(set: &SeqSet) -> SeqSet {
    set.iter().flat_map(|s| contractions(s)).collect()
}

/// Order-preserving merges of `a` and `b`; with `right_last` only those ending in `b`.
fn interleavings(a: &[Formula], b: &[Formula], right_last: bool, out: &mut SeqSet) {
    fn go(a: &[Formula], b: &[Formula], cur: &mut Seq, right_last: bool, out: &mut SeqSet) {
        if a.is_empty() && b.is_empty() {
            out.insert(cur.clone());
            return;
        }
        if let Some((x, rest)) = a.split_first() {
            if !(right_last && b.is_empty()) {
                cur.push(x.clone());
                go(rest, b, cur, right_last, out);
                cur.pop();
            }
        }
        if let Some((y, rest)) = b.split_first() {
            cur.push(y.clone());
            go(a, rest, cur, right_last, out);
            cur.pop();
        }
    }
    go(a, b, &mut Vec::new(), right_last, out);
}

/// Shuffles of one pick per set, closed under contraction.
pub fn shuffle_closure(fs: &[SeqSet]) -> SeqSet {
    let mut acc = SeqSet::from([Vec::new()]);
    for f in fs {
        let mut next = SeqSet::new();
        for a in &acc {
            for b in f {
                interleavings(a, b, false, &mut next);
            }
        }
        acc = contraction_closure(&next);
    }
    acc
}

/// Right shuffles (merges ending inside the second stream), closed under contraction.
pub fn right_shuffle_closure(f1: &SeqSet, f2: &SeqSet) -> Result<SeqSet, BlueprintError> {
    if f1.iter().chain(f2).any(|s| s.is_empty()) {
        return Err(BlueprintError::EmptySequence);
    }
    let mut out = SeqSet::new();
    for a in f1 {
        for b in f2 {
            interleavings(a, b, true, &mut out);
        }
    }
    Ok(contraction_closure(&out))
}

fn f_shape(s: &Shape, memo: &mut HashMap<Shape, SeqSet>) -> SeqSet {
    if let Some(r) = memo.get(s) {
        return r.clone();
    }
    let r = match s {
        Shape::Leaf(f) => SeqSet::from([vec![f.clone()]]),
        Shape::App(_, l, r) => right_shuffle_closure(&f_group(l, memo), &f_group(r, memo))
            .expect("application children are nonempty"),
    };
    memo.insert(s.clone(), r.clone());
    r
}

fn f_group(g: &[Shape], memo: &mut HashMap<Shape, SeqSet>) -> SeqSet {
    let parts: Vec<SeqSet> = g.iter().map(|s| f_shape(s, memo)).collect();
    shuffle_closure(&parts)
}

/// Extractible sequences computed structurally from the component decomposition.
pub fn f_of(b: &Blueprint) -> SeqSet {
    f_group(&shape_group(b), &mut HashMap::new())
}

pub fn f_of_group(g: &[Shape]) -> SeqSet {
    f_group(g, &mut HashMap::new())
}

/// All vertical compressions of `b` (reflexive-transitive closure of single grafts).
pub fn up_closure(b: &Blueprint) -> BTreeSet<Blueprint> {
    let mut seen = BTreeSet::from([b.clone()]);
    let mut todo = vec![b.clone()];
    while let Some(cur) = todo.pop() {
        for g in single_grafts(&cur) {
            if seen.insert(g.clone()) {
                todo.push(g);
            }
        }
    }
    seen
}

/// `b[a <- b↓c]` for every `a < c` with equal labels.
pub fn single_grafts(b: &Blueprint) -> Vec<Blueprint> {
    let mut out = Vec::new();
    for (a, la) in &b.map {
        for (c, lc) in b.map.range(a.clone()..) {
            if a.is_strict_prefix_of(c) && la == lc {
                out.push(b.graft(a, &b.restrict(c)));
            }
        }
    }
    out
}

pub fn admits_sequence(b: &Blueprint, chi: &[Formula]) -> bool {
    up_closure(b).iter().any(|g| f_of(g).contains(chi))
}

fn drop_one_steps(g: &[Shape], m: usize, nested: bool, out: &mut Vec<Vec<Shape>>) {
    let mut i = 0;
    while i < g.len() {
        let mut j = i;
        while j < g.len() && g[j] == g[i] {
            j += 1;
        }
        if j - i > m {
            let mut h = g.to_vec();
            h.remove(i);
            if !(nested && h.is_empty()) {
                out.push(h);
            }
        }
        i = j;
    }
    for (k, s) in g.iter().enumerate() {
        if let Shape::App(t, l, r) = s {
            let mut sub = Vec::new();
            drop_one_steps(l, m, true, &mut sub);
            for l2 in sub.drain(..) {
                let mut h = g.to_vec();
                h[k] = Shape::App(t.clone(), l2, r.clone());
                h.sort();
                out.push(h);
            }
            drop_one_steps(r, m, true, &mut sub);
            for r2 in sub {
                let mut h = g.to_vec();
                h[k] = Shape::App(t.clone(), l.clone(), r2);
                h.sort();
                out.push(h);
            }
        }
    }
}

/// Canonical results of one m-compression step.
pub fn one_step_compressions(b: &Blueprint, m: usize) -> Vec<Blueprint> {
    if m == 0 {
        return if b.is_empty() {
            Vec::new()
        } else {
            vec![Blueprint::empty()]
        };
    }
    let mut out = Vec::new();
    drop_one_steps(&shape_group(b), m, false, &mut out);
    let set: BTreeSet<Blueprint> = out.iter().map(|g| from_group(g)).collect();
    set.into_iter().collect()
}

/// Least m admitting no m-compression.
pub fn width(b: &Blueprint) -> usize {
    (0..)
        .find(|&m| one_step_compressions(b, m).is_empty())
        .expect("width is finite")
}

/// Largest multiplicity of a component class in any group; equals the width.
pub fn max_multiplicity(b: &Blueprint) -> usize {
    fn go(g: &[Shape]) -> usize {
        let mut best = 0;
        let mut i = 0;
        while i < g.len() {
            let j = (i..g.len()).find(|&j| g[j] != g[i]).unwrap_or(g.len());
            best = best.max(j - i);
            i = j;
        }
        for s in g {
            if let Shape::App(_, l, r) = s {
                best = best.max(go(l)).max(go(r));
            }
        }
        best
    }
    go(&shape_group(b))
}

fn cap_group(g: &[Shape], m: usize) -> Vec<Shape> {
    let mut h: Vec<Shape> = g.iter().map(|s| cap_shape(s, m)).collect();
    h.sort();
    let mut out: Vec<Shape> = Vec::with_capacity(h.len());
    let mut run = 0;
    for s in h {
        if out.last() == Some(&s) {
            run += 1;
        } else {
            run = 1;
        }
        if run <= m {
            out.push(s);
        }
    }
    out
}

fn cap_shape(s: &Shape, m: usize) -> Shape {
    match s {
        Shape::Leaf(_) => s.clone(),
        Shape::App(t, l, r) => Shape::App(t.clone(), cap_group(l, m), cap_group(r, m)),
    }
}

/// A maximal m-compression: children first, then every class capped at m copies.
pub fn compress_to_max(b: &Blueprint, m: usize) -> Blueprint {
    if m == 0 {
        return Blueprint::empty();
    }
    from_group(&cap_group(&shape_group(b), m))
}

/// Canonical representatives of the blueprints over `s` of relative depth at most `d`
/// and width at most `m`.
pub fn enumerate_selector(
    s: &Signature,
    d: usize,
    m: usize,
    limit: usize,
) -> Result<BTreeSet<Blueprint>, BlueprintError> {
    let groups = selector_groups(s, d, m, limit)?;
    Ok(groups.iter().map(|g| from_group(g)).collect())
}

fn multisets(items: &[Shape], m: usize, limit: usize) -> Result<Vec<Vec<Shape>>, BlueprintError> {
    let count = (m as f64 + 1.0).powi(items.len() as i32);
    if count > limit as f64 {
        return Err(BlueprintError::ResourceLimit { limit });
    }
    let mut out: Vec<Vec<Shape>> = vec![Vec::new()];
    for it in items {
        let mut next = Vec::with_capacity(out.len() * (m + 1));
        for g in &out {
            for k in 0..=m {
                let mut h = g.clone();
                h.extend(std::iter::repeat_n(it.clone(), k));
                next.push(h);
            }
        }
        out = next;
    }
    for g in &mut out {
        g.sort();
    }
    Ok(out)
}

fn selector_groups(
    s: &Signature,
    d: usize,
    m: usize,
    limit: usize,
) -> Result<Vec<Vec<Shape>>, BlueprintError> {
    let leaves: Vec<Shape> = if m == 0 {
        Vec::new()
    } else {
        s.leaf_formulas.iter().cloned().map(Shape::Leaf).collect()
    };
    let mut rooted = leaves.clone();
    for _ in 0..d {
        let groups = multisets(&rooted, m, limit)?;
        let nonempty: Vec<&Vec<Shape>> = groups.iter().filter(|g| !g.is_empty()).collect();
        let mut next = leaves.clone();
        if nonempty
            .len()
            .saturating_mul(nonempty.len())
            .saturating_mul(s.app_tags.len())
            > limit
        {
            return Err(BlueprintError::ResourceLimit { limit });
        }
        for t in &s.app_tags {
            for l in &nonempty {
                for r in &nonempty {
                    next.push(Shape::App(t.clone(), (*l).clone(), (*r).clone()));
                }
            }
        }
        next.sort();
        next.dedup();
        rooted = next;
    }
    multisets(&rooted, m, limit)
}

/// Structural membership in the selector range: canonical, labels in `s`, bounded depth and width.
pub fn in_selector_range(b: &Blueprint, s: &Signature, d: usize, m: usize) -> bool {
    if *b != canonicalize(b) || b.relative_depth() > d || max_multiplicity(b) > m {
        return false;
    }
    b.labels().all(|l| match l {
        Label::Leaf(f) => s.leaf_formulas.contains(f),
        Label::AppTag(f) => s.app_tags.contains(f),
    })
}

/// Relative depth computed on the canonical structure.
pub fn shape_depth(g: &[Shape]) -> usize {
    group_depth(g)
}
