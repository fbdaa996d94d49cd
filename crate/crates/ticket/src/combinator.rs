//! Typed BB'IW combinator derivations: checking, translation to terms, and
//! extraction of a derivation from a normal inhabitant.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::{parse_formula, Formula};
use crate::term::{free_vars, hrm_normalize, type_of, Address, Term, TermError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomKind {
    B,
    BPrime,
    I,
    W,
}

impl AxiomKind {
    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::B => "B",
            AxiomKind::BPrime => "B'",
            AxiomKind::I => "I",
            AxiomKind::W => "W",
        }
    }

    pub fn from_name(s: &str) -> Option<AxiomKind> {
        match s {
            "B" => Some(AxiomKind::B),
            "B'" => Some(AxiomKind::BPrime),
            "I" => Some(AxiomKind::I),
            "W" => Some(AxiomKind::W),
            _ => None,
        }
    }
}

/// A derivation tree: axiom instances at the leaves, modus ponens at inner nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CombDerivation {
    Axiom {
        kind: AxiomKind,
        ty: Formula,
    },
    Mp {
        left: Box<CombDerivation>,
        right: Box<CombDerivation>,
        ty: Formula,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombError {
    #[error("axiom at {0} is not an instance of its scheme")]
    BadAxiomInstance(Address),
    #[error("modus ponens at {0} does not match")]
    BadModusPonens(Address),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::imp(a.clone(), b.clone())
}

/// `(chi->psi)->(phi->chi)->phi->psi`
pub fn b_type(chi: &Formula, psi: &Formula, phi: &Formula) -> Formula {
    imp(&imp(chi, psi), &imp(&imp(phi, chi), &imp(phi, psi)))
}

/// `(phi->chi)->(chi->psi)->phi->psi`
pub fn b_prime_type(chi: &Formula, psi: &Formula, phi: &Formula) -> Formula {
    imp(&imp(phi, chi), &imp(&imp(chi, psi), &imp(phi, psi)))
}

pub fn i_type(phi: &Formula) -> Formula {
    imp(phi, phi)
}

/// `(phi->phi->chi)->phi->chi`
pub fn w_type(chi: &Formula, phi: &Formula) -> Formula {
    imp(&imp(phi, &imp(phi, chi)), &imp(phi, chi))
}

fn split(f: &Formula) -> Option<(&Formula, &Formula)> {
    f.as_imp()
}

/// Recovers `(chi, psi, phi)` when `f` is a B instance.
fn match_b(f: &Formula) -> Option<(Formula, Formula, Formula)> {
    let (l, r) = split(f)?;
    let (chi, psi) = split(l)?;
    let (l2, r2) = split(r)?;
    let (phi, chi2) = split(l2)?;
    let (phi2, psi2) = split(r2)?;
    (chi == chi2 && psi == psi2 && phi == phi2).then(|| (chi.clone(), psi.clone(), phi.clone()))
}

fn match_b_prime(f: &Formula) -> Option<(Formula, Formula, Formula)> {
    let (l, r) = split(f)?;
    let (phi, chi) = split(l)?;
    let (l2, r2) = split(r)?;
    let (chi2, psi) = split(l2)?;
    let (phi2, psi2) = split(r2)?;
    (chi == chi2 && psi == psi2 && phi == phi2).then(|| (chi.clone(), psi.clone(), phi.clone()))
}

fn match_i(f: &Formula) -> Option<Formula> {
    let (a, b) = split(f)?;
    (a == b).then(|| a.clone())
}

fn match_w(f: &Formula) -> Option<(Formula, Formula)> {
    let (l, r) = split(f)?;
    let (phi, l2) = split(l)?;
    let (phi2, chi) = split(l2)?;
    let (phi3, chi2) = split(r)?;
    (phi == phi2 && phi == phi3 && chi == chi2).then(|| (chi.clone(), phi.clone()))
}

pub fn is_instance(kind: AxiomKind, f: &Formula) -> bool {
    match kind {
        AxiomKind::B => match_b(f).is_some(),
        AxiomKind::BPrime => match_b_prime(f).is_some(),
        AxiomKind::I => match_i(f).is_some(),
        AxiomKind::W => match_w(f).is_some(),
    }
}

impl CombDerivation {
    pub fn axiom(kind: AxiomKind, ty: Formula) -> CombDerivation {
        CombDerivation::Axiom { kind, ty }
    }

    /// Modus ponens; the result type is read off the left premise.
    pub fn mp(left: CombDerivation, right: CombDerivation) -> Result<CombDerivation, CombError> {
        let ty = match left.ty().as_imp() {
            Some((a, b)) if a == right.ty() => b.clone(),
            _ => {
                return Err(CombError::PreconditionViolated(format!(
                    "cannot apply {} to {}",
                    left.ty(),
                    right.ty()
                )))
            }
        };
        Ok(CombDerivation::Mp {
            left: Box::new(left),
            right: Box::new(right),
            ty,
        })
    }

    pub fn ty(&self) -> &Formula {
        match self {
            CombDerivation::Axiom { ty, .. } | CombDerivation::Mp { ty, .. } => ty,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            CombDerivation::Axiom { .. } => 1,
            CombDerivation::Mp { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn contains_axiom(&self, k: AxiomKind) -> bool {
        match self {
            CombDerivation::Axiom { kind, .. } => *kind == k,
            CombDerivation::Mp { left, right, .. } => {
                left.contains_axiom(k) || right.contains_axiom(k)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CombDerivation::Axiom { kind, ty } => {
                json!({"kind": kind.name(), "type": ty.to_string()})
            }
            CombDerivation::Mp { left, right, ty } => json!({
                "kind": "mp",
                "type": ty.to_string(),
                "children": [left.to_json(), right.to_json()],
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<CombDerivation, CombError> {
        let bad = |m: &str| CombError::Malformed(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing kind"))?;
        let ty_text = obj
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing type"))?;
        let ty = parse_formula(ty_text).map_err(|e| CombError::Malformed(e.to_string()))?;
        if kind == "mp" {
            let children = obj
                .get("children")
                .and_then(Value::as_array)
                .filter(|c| c.len() == 2)
                .ok_or_else(|| bad("mp needs two children"))?;
            Ok(CombDerivation::Mp {
                left: Box::new(CombDerivation::from_json(&children[0])?),
                right: Box::new(CombDerivation::from_json(&children[1])?),
                ty,
            })
        } else {
            let kind = AxiomKind::from_name(kind).ok_or_else(|| bad("unknown axiom kind"))?;
            Ok(CombDerivation::Axiom { kind, ty })
        }
    }
}

/// Combinator text with left-associative application, e.g. `B' (B I) W`.
impl fmt::Display for CombDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombDerivation::Axiom { kind, .. } => write!(f, "{}", kind.name()),
            CombDerivation::Mp { left, right, .. } => match **right {
                CombDerivation::Axiom { .. } => write!(f, "{left} {right}"),
                CombDerivation::Mp { .. } => write!(f, "{left} ({right})"),
            },
        }
    }
}

pub fn check_derivation(d: &CombDerivation) -> Result<Formula, CombError> {
    fn go(d: &CombDerivation, at: Address) -> Result<Formula, CombError> {
        match d {
            CombDerivation::Axiom { kind, ty } => {
                if is_instance(*kind, ty) {
                    Ok(ty.clone())
                } else {
                    Err(CombError::BadAxiomInstance(at))
                }
            }
            CombDerivation::Mp { left, right, ty } => {
                let l = go(left, at.child(1))?;
                let r = go(right, at.child(2))?;
                if l == Formula::imp(r, ty.clone()) {
                    Ok(ty.clone())
                } else {
                    Err(CombError::BadModusPonens(at))
                }
            }
        }
    }
    go(d, Address::root())
}

/// Translates axioms to their lambda counterparts and normalizes.
pub fn comb_to_lambda(d: &CombDerivation) -> Result<Term, CombError> {
    check_derivation(d)?;
    let mut next = 1u32;
    fn fresh(next: &mut u32) -> u32 {
        *next += 1;
        *next - 1
    }
    fn go(d: &CombDerivation, next: &mut u32) -> Term {
        match d {
            CombDerivation::Mp { left, right, .. } => Term::app(go(left, next), go(right, next)),
            CombDerivation::Axiom { kind, ty } => match kind {
                AxiomKind::I => {
                    let phi = match_i(ty).expect("checked");
                    let x = fresh(next);
                    Term::lam(x, phi.clone(), Term::var(x, phi))
                }
                AxiomKind::B => {
                    let (chi, psi, phi) = match_b(ty).expect("checked");
                    let (f, g, x) = (fresh(next), fresh(next), fresh(next));
                    let (tf, tg) = (imp(&chi, &psi), imp(&phi, &chi));
                    Term::lam(
                        f,
                        tf.clone(),
                        Term::lam(
                            g,
                            tg.clone(),
                            Term::lam(
                                x,
                                phi.clone(),
                                Term::app(
                                    Term::var(f, tf),
                                    Term::app(Term::var(g, tg), Term::var(x, phi)),
                                ),
                            ),
                        ),
                    )
                }
                AxiomKind::BPrime => {
                    let (chi, psi, phi) = match_b_prime(ty).expect("checked");
                    let (f, g, x) = (fresh(next), fresh(next), fresh(next));
                    let (tf, tg) = (imp(&phi, &chi), imp(&chi, &psi));
                    Term::lam(
                        f,
                        tf.clone(),
                        Term::lam(
                            g,
                            tg.clone(),
                            Term::lam(
                                x,
                                phi.clone(),
                                Term::app(
                                    Term::var(g, tg),
                                    Term::app(Term::var(f, tf), Term::var(x, phi)),
                                ),
                            ),
                        ),
                    )
                }
                AxiomKind::W => {
                    let (chi, phi) = match_w(ty).expect("checked");
                    let (h, x) = (fresh(next), fresh(next));
                    let th = imp(&phi, &imp(&phi, &chi));
                    Term::lam(
                        h,
                        th.clone(),
                        Term::lam(
                            x,
                            phi.clone(),
                            Term::app(
                                Term::app(Term::var(h, th), Term::var(x, phi.clone())),
                                Term::var(x, phi),
                            ),
                        ),
                    )
                }
            },
        }
    }
    let t = go(d, &mut next);
    Ok(hrm_normalize(&t)?)
}

/// From a proof of `chi->psi`, a proof of `(p1..pn->chi)->(p1..pn->psi)` by left applications of B.
pub fn extend_derivation(
    d: &CombDerivation,
    prefix: &[Formula],
) -> Result<CombDerivation, CombError> {
    let Some((first, rest)) = prefix.split_first() else {
        return Ok(d.clone());
    };
    let inner = extend_derivation(d, rest)?;
    let (x, y) = inner.ty().as_imp().ok_or_else(|| {
        CombError::PreconditionViolated("derivation does not prove an implication".into())
    })?;
    let b = CombDerivation::axiom(AxiomKind::B, b_type(x, y, first));
    CombDerivation::mp(b, inner)
}

type Indexed = Vec<(u32, Formula)>;

fn merge(a: &Indexed, b: &Indexed) -> Result<Indexed, CombError> {
    let mut out: Indexed = a.clone();
    for (i, f) in b {
        match out.iter().find(|(j, _)| j == i) {
            Some((_, g)) if g != f => {
                return Err(CombError::PreconditionViolated(format!(
                    "index {i} carries two different formulas"
                )))
            }
            Some(_) => {}
            None => out.push((*i, f.clone())),
        }
    }
    out.sort_by_key(|(i, _)| *i);
    Ok(out)
}

fn formulas(ix: &[(u32, Formula)]) -> Vec<Formula> {
    ix.iter().map(|(_, f)| f.clone()).collect()
}

/// d1 proves `w_i -> (chi -> psi)`, d2 proves `w_j -> chi`; returns a proof of `w_k -> psi`.
fn combine(
    d1: CombDerivation,
    iw: &Indexed,
    d2: CombDerivation,
    jw: &Indexed,
    chi: &Formula,
    psi: &Formula,
) -> Result<CombDerivation, CombError> {
    let (n, m) = (iw.len(), jw.len());
    if n == 0 && m == 0 {
        return CombDerivation::mp(d1, d2);
    }
    let (jm, wjm) = jw.last().cloned().ok_or_else(|| {
        CombError::PreconditionViolated("the argument proof has no antecedents".into())
    })?;
    let jhead: Indexed = jw[..m - 1].to_vec();
    if n == 0 {
        let b = CombDerivation::axiom(AxiomKind::B, b_type(chi, psi, &wjm));
        let ii = CombDerivation::mp(b, d1)?;
        if m == 1 {
            return CombDerivation::mp(ii, d2);
        }
        return combine(
            ii,
            &Vec::new(),
            d2,
            &jhead,
            &imp(&wjm, chi),
            &imp(&wjm, psi),
        );
    }
    let in_ = iw[n - 1].0;
    if m > 1 && in_ <= jhead[m - 2].0 {
        let b = CombDerivation::axiom(AxiomKind::B, b_type(chi, psi, &wjm));
        let iv = extend_derivation(&b, &formulas(iw))?;
        let v = CombDerivation::mp(iv, d1)?;
        return combine(v, iw, d2, &jhead, &imp(&wjm, chi), &imp(&wjm, psi));
    }
    let vi = CombDerivation::axiom(AxiomKind::BPrime, b_prime_type(chi, psi, &wjm));
    let vii = extend_derivation(&vi, &formulas(&jhead))?;
    let viii = CombDerivation::mp(vii, d2)?;
    let ix = combine(viii, &jhead, d1, iw, &imp(chi, psi), &imp(&wjm, psi))?;
    if jm > in_ {
        return Ok(ix);
    }
    let kw = merge(&jhead, iw)?;
    let w = CombDerivation::axiom(AxiomKind::W, w_type(psi, &wjm));
    let xii = extend_derivation(&w, &formulas(&kw[..kw.len() - 1]))?;
    CombDerivation::mp(xii, ix)
}

fn strictly_increasing(s: &[u32]) -> bool {
    s.windows(2).all(|w| w[0] < w[1])
}

/// Combines proofs of `w_i -> (chi -> psi)` and `w_j -> chi` into a proof of `w_k -> psi`.
pub fn apply_combine(
    d1: &CombDerivation,
    d2: &CombDerivation,
    i_seq: &[u32],
    j_seq: &[u32],
    k_seq: &[u32],
) -> Result<CombDerivation, CombError> {
    let violated = |m: &str| Err(CombError::PreconditionViolated(m.to_string()));
    if !strictly_increasing(i_seq) || !strictly_increasing(j_seq) || !strictly_increasing(k_seq) {
        return violated("index sequences must be strictly increasing");
    }
    let mut union: Vec<u32> = i_seq.iter().chain(j_seq).copied().collect();
    union.sort_unstable();
    union.dedup();
    if union != k_seq {
        return violated("k must be the union of i and j");
    }
    if let (Some(i_n), Some(j_m)) = (i_seq.last(), j_seq.last()) {
        if i_n > j_m {
            return violated("the last index of i exceeds the last index of j");
        }
    } else if !i_seq.is_empty() {
        return violated("j must be nonempty when i is");
    }
    let t1 = check_derivation(d1)?;
    let t2 = check_derivation(d2)?;
    let (w1, rest1) = t1.uncurry(i_seq.len()).ok_or_else(|| {
        CombError::PreconditionViolated("first proof has too few antecedents".into())
    })?;
    let (chi, psi) = rest1.as_imp().ok_or_else(|| {
        CombError::PreconditionViolated("first proof does not end in an implication".into())
    })?;
    let (w2, chi2) = t2.uncurry(j_seq.len()).ok_or_else(|| {
        CombError::PreconditionViolated("second proof has too few antecedents".into())
    })?;
    if chi2 != *chi {
        return violated("second proof does not prove the antecedent");
    }
    let iw: Indexed = i_seq.iter().copied().zip(w1).collect();
    let jw: Indexed = j_seq.iter().copied().zip(w2).collect();
    merge(&iw, &jw)?;
    combine(d1.clone(), &iw, d2.clone(), &jw, chi, psi)
}

/// A derivation of `t1 -> .. -> tn -> ty(m)` for `Free(m) = (x1..xn)` with `xi : ti`.
pub fn extract_open(m: &Term) -> Result<CombDerivation, CombError> {
    type_of(m)?;
    fn go(m: &Term) -> Result<CombDerivation, CombError> {
        match m {
            Term::Var(x) => Ok(CombDerivation::axiom(AxiomKind::I, i_type(&x.ty))),
            Term::Lam(_, body) => go(body),
            Term::App(l, r) => {
                let all: Vec<u32> = free_vars(m).iter().map(|v| v.rank).collect();
                let pos = |t: &Term| -> Vec<u32> {
                    free_vars(t)
                        .iter()
                        .map(|v| {
                            all.iter()
                                .position(|r| *r == v.rank)
                                .expect("subterm variable") as u32
                                + 1
                        })
                        .collect()
                };
                let (i, j) = (pos(l), pos(r));
                let k: Vec<u32> = (1..=all.len() as u32).collect();
                apply_combine(&go(l)?, &go(r)?, &i, &j, &k)
            }
        }
    }
    go(m)
}

/// A certificate for a closed inhabitant.
pub fn extract_combinator(m: &Term, phi: &Formula) -> Result<CombDerivation, CombError> {
    if !m.is_closed() {
        return Err(CombError::PreconditionViolated("term is not closed".into()));
    }
    let ty = type_of(m)?;
    if ty != *phi {
        return Err(CombError::PreconditionViolated(format!(
            "term has type {ty}, not {phi}"
        )));
    }
    extract_open(m)
}
