//! Generators and property checks shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ticket::blueprint::{
    blueprint_of, canonicalize, extract_at, extraction_sequences_closure, extraction_steps, f_of,
    from_group, one_step_compressions, up_closure, Blueprint, Shape,
};
use ticket::combinator::{
    b_prime_type, b_type, check_derivation, comb_to_lambda, extract_combinator, i_type, w_type,
    AxiomKind, CombDerivation,
};
use ticket::compact::{abstract_extract_chain, compress_term, switch_var, Block, ExtractionChain};
use ticket::formula::{parse_formula, Formula};
use ticket::oracle::{enumerate_inhabitants, SearchBound};
use ticket::term::{
    free_vars, hrm_normalize, is_hrm, is_normal, is_nf_inhabitant, type_of, Term, VarRef,
};

pub fn f(s: &str) -> Formula {
    parse_formula(s).expect("test formula")
}

/// Seed from `TICKET_SEED`, or a fixed default.
pub fn seed() -> u64 {
    std::env::var("TICKET_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5EED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// All implicational formulas over the given atoms with exactly `n` arrows.
pub fn formulas_with_arrows(atoms: &[&str], n: usize) -> Vec<Formula> {
    if n == 0 {
        return atoms.iter().map(|a| Formula::atom(a)).collect();
    }
    let mut out = Vec::new();
    for k in 0..n {
        for l in formulas_with_arrows(atoms, k) {
            for r in formulas_with_arrows(atoms, n - 1 - k) {
                out.push(Formula::imp(l.clone(), r));
            }
        }
    }
    out
}

/// Every formula over `{a, b}` with at most four arrows.
pub fn corpus() -> Vec<Formula> {
    (0..=4).flat_map(|n| formulas_with_arrows(&["a", "b"], n)).collect()
}

const POOL_FORMULAS: &[&str] = &[
    "a->a",
    "(a->b)->a->b",
    "(a->a)->a->a",
    "(b->c)->(a->b)->a->c",
    "(a->b)->(b->c)->a->c",
    "(a->a->b)->a->b",
    "(a->b->c)->b->a->c",
    "(a->b)->(a->b->c)->a->c",
    "((a->a)->b)->b",
    "(a->b)->((a->b)->c)->c",
    "(a->a->a)->a->a",
    "((a->b)->a->b)->(a->b)->a->b",
];

/// Closed inhabitants of a fixed list of formulas, computed once.
pub fn term_pool() -> &'static [(Formula, Term)] {
    static POOL: OnceLock<Vec<(Formula, Term)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for s in POOL_FORMULAS {
            let phi = f(s);
            for t in enumerate_inhabitants(&phi, &SearchBound::nodes(11)).into_iter().take(400) {
                out.push((phi.clone(), t));
            }
        }
        out
    })
}

pub fn random_inhabitant(r: &mut impl Rng) -> (Formula, Term) {
    term_pool().choose(r).expect("nonempty pool").clone()
}

/// A random subterm of a random pool inhabitant; open in general.
pub fn random_term(r: &mut impl Rng) -> Term {
    let (_, t) = random_inhabitant(r);
    let addrs = t.addresses();
    let a = addrs.choose(r).expect("nonempty term");
    t.subterm(a).expect("own address").clone()
}

pub fn random_shape(r: &mut impl Rng, size: usize, leaves: &[Formula], tags: &[Formula]) -> Shape {
    if size <= 2 || tags.is_empty() {
        return Shape::Leaf(leaves.choose(r).expect("leaves").clone());
    }
    let rest = size - 1;
    let left = r.random_range(1..rest);
    let g1 = random_group(r, left, leaves, tags);
    let g2 = random_group(r, rest - left, leaves, tags);
    Shape::App(tags.choose(r).expect("tags").clone(), g1, g2)
}

pub fn random_group(r: &mut impl Rng, size: usize, leaves: &[Formula], tags: &[Formula]) -> Vec<Shape> {
    let mut out = Vec::new();
    let mut left = size.max(1);
    while left > 0 {
        let s = r.random_range(1..=left);
        out.push(random_shape(r, s, leaves, tags));
        left -= s;
    }
    out.sort();
    out
}

pub fn random_blueprint(r: &mut impl Rng, size: usize, leaves: &[Formula], tags: &[Formula]) -> Blueprint {
    from_group(&random_group(r, size, leaves, tags))
}

/// All shape groups of total node count exactly `n`.
pub fn groups_of_size(n: usize, leaves: &[Formula], tags: &[Formula]) -> Vec<Vec<Shape>> {
    fn shapes(n: usize, leaves: &[Formula], tags: &[Formula]) -> Vec<Shape> {
        if n == 1 {
            return leaves.iter().cloned().map(Shape::Leaf).collect();
        }
        let mut out = Vec::new();
        for k in 1..n - 1 {
            for g1 in groups(k, leaves, tags) {
                for g2 in groups(n - 1 - k, leaves, tags) {
                    for t in tags {
                        out.push(Shape::App(t.clone(), g1.clone(), g2.clone()));
                    }
                }
            }
        }
        out
    }
    // multisets as sorted vectors
    fn groups(n: usize, leaves: &[Formula], tags: &[Formula]) -> Vec<Vec<Shape>> {
        let mut out = BTreeSet::new();
        fn go(n: usize, min: Option<&Shape>, cur: &mut Vec<Shape>, leaves: &[Formula], tags: &[Formula], out: &mut BTreeSet<Vec<Shape>>) {
            if n == 0 {
                out.insert(cur.clone());
                return;
            }
            for k in 1..=n {
                for s in shapes(k, leaves, tags) {
                    if min.is_some_and(|m| s < *m) {
                        continue;
                    }
                    cur.push(s.clone());
                    go(n - k, Some(&s), cur, leaves, tags, out);
                    cur.pop();
                }
            }
        }
        go(n, None, &mut Vec::new(), leaves, tags, &mut out);
        out.into_iter().collect()
    }
    groups(n, leaves, tags)
}

pub fn check_f_dual(b: &Blueprint) -> Result<(), String> {
    let x = f_of(b);
    let y = extraction_sequences_closure(b);
    if x == y {
        Ok(())
    } else {
        Err(format!("{b}: structural {x:?} vs chains {y:?}"))
    }
}

pub fn check_abstract_extract(m: &Term) -> Result<(), String> {
    let chi: Vec<Formula> = free_vars(m).into_iter().map(|v| v.ty).collect();
    if f_of(&blueprint_of(m)).contains(&chi) {
        Ok(())
    } else {
        Err(format!("{m}: {chi:?} not extractible from {}", blueprint_of(m)))
    }
}

pub fn check_her_stable(m: &Term) -> Result<(), String> {
    let alpha = blueprint_of(m);
    for b in alpha.map().keys() {
        let sub = m.subterm(b).ok_or_else(|| format!("{m}: blueprint address {b} not in term"))?;
        if alpha.restrict(b) != blueprint_of(sub) {
            return Err(format!("{m}: restriction at {b} differs"));
        }
    }
    Ok(())
}

/// Extracts `phi` at the addresses in a random valid order; `None` if stuck.
fn random_extraction(r: &mut impl Rng, b: &Blueprint, addrs: &[ticket::term::Address], phi: &Formula) -> Option<Blueprint> {
    let mut rest = addrs.to_vec();
    let mut cur = b.clone();
    while !rest.is_empty() {
        rest.shuffle(r);
        let i = rest.iter().position(|a| extract_at(&cur, a, phi).is_ok())?;
        let a = rest.remove(i);
        cur = extract_at(&cur, &a, phi).ok()?;
    }
    Some(cur)
}

pub fn check_confluence(r: &mut impl Rng, b: &Blueprint) -> Result<(), String> {
    let leaves: Vec<(ticket::term::Address, Formula)> = b
        .map()
        .iter()
        .filter_map(|(a, l)| match l {
            ticket::blueprint::Label::Leaf(phi) => Some((a.clone(), phi.clone())),
            _ => None,
        })
        .collect();
    let Some((_, phi)) = leaves.choose(r).cloned() else { return Ok(()) };
    let mut set: Vec<_> = leaves.iter().filter(|(_, p)| *p == phi).map(|(a, _)| a.clone()).collect();
    set.retain(|_| r.random_bool(0.8));
    let x = random_extraction(r, b, &set, &phi);
    let y = random_extraction(r, b, &set, &phi);
    match (x, y) {
        (Some(x), Some(y)) if x != y => Err(format!("{b}: two orders give {x:?} and {y:?}")),
        _ => Ok(()),
    }
}

/// A random `alpha` with `alpha` below `b` for the m-compression order.
pub fn random_compression(r: &mut impl Rng, b: &Blueprint, m: usize) -> Blueprint {
    let mut cur = canonicalize(b);
    for _ in 0..r.random_range(0..4) {
        let next = one_step_compressions(&cur, m);
        match next.choose(r) {
            Some(n) => cur = n.clone(),
            None => break,
        }
    }
    cur
}

pub fn check_preserve(r: &mut impl Rng, b: &Blueprint) -> Result<(), String> {
    let fb = f_of(b);
    let a1 = random_compression(r, b, 1);
    let fa1 = f_of(&a1);
    if !fa1.is_subset(&fb) {
        return Err(format!("{a1} below {b} for m=1 but its sequences are not included"));
    }
    let m = r.random_range(1..=3);
    let am = random_compression(r, b, m);
    let fam = f_of(&am);
    if let Some(s) = fb.iter().find(|s| s.len() <= m && !fam.contains(*s)) {
        return Err(format!("{am} below {b} for m={m} misses {s:?}"));
    }
    Ok(())
}

/// A random full extraction of `b`, blocks split at random.
pub fn random_chain(r: &mut impl Rng, b: &Blueprint) -> ExtractionChain {
    let mut cur = b.clone();
    let mut blocks: Vec<Block> = Vec::new();
    while !cur.is_empty() {
        let steps = extraction_steps(&cur);
        let (a, phi, next) = steps.choose(r).expect("nonempty blueprint extracts").clone();
        match blocks.last_mut() {
            Some(bl) if bl.formula == phi && r.random_bool(0.7) => bl.order.push(a),
            _ => blocks.push(Block { formula: phi, order: vec![a] }),
        }
        cur = next;
    }
    ExtractionChain { blocks }
}

pub fn check_switch_var(r: &mut impl Rng, m: &Term) -> Result<(), String> {
    let beta = blueprint_of(m);
    let chain = if r.random_bool(0.3) {
        abstract_extract_chain(m).map_err(|e| format!("{m}: {e}"))?
    } else {
        random_chain(r, &beta)
    };
    let mut rank = m.max_rank() + r.random_range(0..3);
    let targets: Vec<VarRef> = chain
        .sequence()
        .into_iter()
        .map(|phi| {
            rank += r.random_range(1..3);
            VarRef::new(rank, phi)
        })
        .collect();
    let n = switch_var(m, &chain, &targets).map_err(|e| format!("{m}: {e}"))?;
    let ok = free_vars(&n) == targets
        && blueprint_of(&n) == beta
        && type_of(&n).ok() == type_of(m).ok()
        && n.addresses() == m.addresses()
        && is_hrm(&n)
        && is_normal(&n);
    if ok {
        Ok(())
    } else {
        Err(format!("switch_var({m}) = {n} breaks its post"))
    }
}

pub fn check_compress(r: &mut impl Rng, m: &Term) -> Result<(), String> {
    let beta = blueprint_of(m);
    let ups: Vec<Blueprint> = up_closure(&beta).into_iter().collect();
    let alpha = ups.choose(r).expect("reflexive").clone();
    let n = compress_term(m, &alpha).map_err(|e| format!("{m}: {e}"))?;
    let ok = blueprint_of(&n) == alpha
        && n.kind() == m.kind()
        && type_of(&n).ok() == type_of(m).ok()
        && n.size() <= m.size()
        && is_hrm(&n)
        && is_normal(&n);
    if ok {
        Ok(())
    } else {
        Err(format!("compress_term({m}, {alpha}) = {n} breaks its post"))
    }
}

const SMALL: &[&str] = &["a", "b", "c", "a->b", "b->a", "a->a", "(a->b)->c"];

fn small(r: &mut impl Rng) -> Formula {
    f(SMALL.choose(r).expect("small formulas"))
}

fn random_axiom(r: &mut impl Rng) -> CombDerivation {
    match r.random_range(0..4) {
        0 => CombDerivation::axiom(AxiomKind::B, b_type(&small(r), &small(r), &small(r))),
        1 => CombDerivation::axiom(AxiomKind::BPrime, b_prime_type(&small(r), &small(r), &small(r))),
        2 => CombDerivation::axiom(AxiomKind::I, i_type(&small(r))),
        _ => CombDerivation::axiom(AxiomKind::W, w_type(&small(r), &small(r))),
    }
}

/// A random well-formed derivation built by composing axiom instances.
pub fn random_derivation(r: &mut impl Rng, steps: usize) -> CombDerivation {
    let mut d = random_axiom(r);
    for _ in 0..steps {
        let ty = d.ty().clone();
        let Some((x, y)) = ty.as_imp() else { break };
        let (x, y) = (x.clone(), y.clone());
        let next = match r.random_range(0..4) {
            0 => CombDerivation::mp(CombDerivation::axiom(AxiomKind::B, b_type(&x, &y, &small(r))), d.clone()),
            1 => CombDerivation::mp(CombDerivation::axiom(AxiomKind::BPrime, b_prime_type(&y, &small(r), &x)), d.clone()),
            2 => match y.as_imp() {
                Some((x2, z)) if *x2 == x => {
                    CombDerivation::mp(CombDerivation::axiom(AxiomKind::W, w_type(z, &x)), d.clone())
                }
                _ => continue,
            },
            _ => match x.as_imp() {
                Some((p, q)) if p == q => CombDerivation::mp(d.clone(), CombDerivation::axiom(AxiomKind::I, i_type(p))),
                _ => continue,
            },
        };
        d = next.expect("well-typed by construction");
    }
    d
}

pub fn check_normalize(d: &CombDerivation) -> Result<(), String> {
    let ty = check_derivation(d).map_err(|e| format!("{d}: {e}"))?;
    let t = comb_to_lambda(d).map_err(|e| format!("{d}: {e}"))?;
    let n = hrm_normalize(&t).map_err(|e| format!("{d}: {e}"))?;
    let ok = is_normal(&n)
        && type_of(&t).ok().as_ref() == Some(&ty)
        && type_of(&n).ok().as_ref() == Some(&ty)
        && free_vars(&n) == free_vars(&t)
        && is_hrm(&n);
    if ok {
        Ok(())
    } else {
        Err(format!("{d}: {t} normalizes to {n}"))
    }
}

pub fn check_extract(phi: &Formula, m: &Term) -> Result<(), String> {
    if !is_nf_inhabitant(m, phi) {
        return Err(format!("{m} is not an inhabitant of {phi}"));
    }
    let d = extract_combinator(m, phi).map_err(|e| format!("{m}: {e}"))?;
    match check_derivation(&d) {
        Ok(ty) if ty == *phi => Ok(()),
        other => Err(format!("{m}: certificate {d} checks to {other:?}")),
    }
}
