//! Brute-force enumeration of closed normal inhabitants, used as ground truth.

use crate::formula::Formula;
use crate::term::{free_vars, Term, VarRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBound {
    pub max_nodes: usize,
    /// Upper bound on the number of binders in a term.
    pub max_var_rank_span: usize,
}

impl SearchBound {
    pub fn nodes(max_nodes: usize) -> SearchBound {
        SearchBound {
            max_nodes,
            max_var_rank_span: max_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Inhabited(Term),
    Unknown,
}

fn max_free_rank(t: &Term) -> Option<u32> {
    free_vars(t).last().map(|v| v.rank)
}

/// `App(l, r)` is allowed when `l` is closed or its greatest free variable is at most that of `r`.
fn app_ok(l: &Term, r: &Term) -> bool {
    match (max_free_rank(l), max_free_rank(r)) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a <= b,
    }
}

struct Gen {
    span: u32,
}

impl Gen {
    /// Normal HRM terms of type `ty` with exactly `size` nodes, binders numbered in preorder from `next`.
    fn terms(
        &self,
        ty: &Formula,
        size: usize,
        ctx: &[VarRef],
        next: u32,
        allow_lam: bool,
    ) -> Vec<(Term, u32)> {
        let mut out = Vec::new();
        if size == 0 {
            return out;
        }
        if allow_lam && size >= 2 && next <= self.span {
            if let Some((a, b)) = ty.as_imp() {
                let x = VarRef::new(next, a.clone());
                let mut inner = ctx.to_vec();
                inner.push(x.clone());
                for (body, n) in self.terms(b, size - 1, &inner, next + 1, true) {
                    if max_free_rank(&body) == Some(x.rank) {
                        out.push((Term::Lam(x.clone(), Box::new(body)), n));
                    }
                }
            }
        }
        for h in ctx {
            // `h N1 .. Nk` has 1 + 2k nodes at least
            let mut k = 0;
            while 2 * k < size {
                let Some((args, res)) = h.ty.uncurry(k) else {
                    break;
                };
                if res == *ty {
                    let spine = vec![(Term::Var(h.clone()), next)];
                    for (t, n) in self.spine(spine, &args, size - 1 - k, ctx) {
                        out.push((t, n));
                    }
                }
                k += 1;
            }
        }
        out
    }

    /// Applies each partial spine to arguments of the given types using exactly `budget` nodes.
    fn spine(
        &self,
        heads: Vec<(Term, u32)>,
        args: &[Formula],
        budget: usize,
        ctx: &[VarRef],
    ) -> Vec<(Term, u32)> {
        let Some((first, rest)) = args.split_first() else {
            return if budget == 0 { heads } else { Vec::new() };
        };
        let reserve = rest.len();
        let mut out = Vec::new();
        for (head, next) in heads {
            for s in 1..=budget.saturating_sub(reserve) {
                let applied: Vec<(Term, u32)> = self
                    .terms(first, s, ctx, next, true)
                    .into_iter()
                    .filter(|(arg, _)| app_ok(&head, arg))
                    .map(|(arg, n)| (Term::app(head.clone(), arg), n))
                    .collect();
                if !applied.is_empty() {
                    out.extend(self.spine(applied, rest, budget - s, ctx));
                }
            }
        }
        out
    }
}

/// Closed normal HRM inhabitants of exactly `size` nodes, sorted by printed form.
pub fn inhabitants_of_size(phi: &Formula, size: usize, bound: &SearchBound) -> Vec<Term> {
    let g = Gen {
        span: bound.max_var_rank_span as u32,
    };
    let mut v: Vec<Term> = g
        .terms(phi, size, &[], 1, true)
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    v.sort_by_cached_key(|t| t.to_string());
    v
}

/// All closed normal HRM inhabitants up to the node bound, by size then printed form.
pub fn enumerate_inhabitants(phi: &Formula, bound: &SearchBound) -> Vec<Term> {
    (1..=bound.max_nodes)
        .flat_map(|n| inhabitants_of_size(phi, n, bound))
        .collect()
}

pub fn bounded_decide(phi: &Formula, bound: &SearchBound) -> OracleVerdict {
    for n in 1..=bound.max_nodes {
        if let Some(t) = inhabitants_of_size(phi, n, bound).into_iter().next() {
            return OracleVerdict::Inhabited(t);
        }
    }
    OracleVerdict::Unknown
}

/// Inhabitants of the least size that has any, within the bound.
pub fn minimal_inhabitants(phi: &Formula, bound: &SearchBound) -> Vec<Term> {
    for n in 1..=bound.max_nodes {
        let v = inhabitants_of_size(phi, n, bound);
        if !v.is_empty() {
            return v;
        }
    }
    Vec::new()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::tests::{b_term, f, w_term};
    use crate::term::{alpha_canonical, is_nf_inhabitant};

    #[test]
    fn identity_is_the_only_small_inhabitant() {
        let v = enumerate_inhabitants(&f("a->a"), &SearchBound::nodes(3));
        assert_eq!(v, vec![Term::lam(1, f("a"), Term::var(1, f("a")))]);
    }

    #[test]
    fn atoms_are_empty() {
        assert!(enumerate_inhabitants(&f("a"), &SearchBound::nodes(9)).is_empty());
    }

    #[test]
    fn axiom_witnesses() {
        let w = f("(p->p->c)->p->c");
        let v = enumerate_inhabitants(&w, &SearchBound::nodes(7));
        assert!(v.contains(&alpha_canonical(&w_term())));
        let b = f("(x->y)->(p->x)->p->y");
        assert_eq!(
            bounded_decide(&b, &SearchBound::nodes(8)),
            OracleVerdict::Inhabited(alpha_canonical(&b_term()))
        );
        for t in &v {
            assert!(is_nf_inhabitant(t, &w), "{t}");
        }
    }

    #[test]
    fn relevance_rejections() {
        for s in ["a->b->a", "((a->b)->a)->a", "a->a->a"] {
            assert_eq!(
                bounded_decide(&f(s), &SearchBound::nodes(12)),
                OracleVerdict::Unknown,
                "{s}"
            );
        }
    }

    #[test]
    fn sizes_are_exact_and_sorted() {
        let phi = f("(a->a)->a->a");
        let v = enumerate_inhabitants(&phi, &SearchBound::nodes(9));
        assert!(v.windows(2).all(|w| w[0].size() <= w[1].size()));
        assert!(v.iter().all(|t| is_nf_inhabitant(t, &phi) && t.size() <= 9));
        // \f. f, \f x. f x, \f x. f (f x), \f x. f (f (f x))
        assert_eq!(v.len(), 4);
    }
}
