//! Spatial Coste contexts: which models count as local, which homomorphisms
//! are admissible, and the étale semilattice `𝒱_A` of a model with its
//! coverings.
//!
//! Every étale arrow of the six supported contexts is a surjection, so an
//! element of `𝒱_A` is stored as a congruence on `A` (canonical class
//! labels) and its codomain is the canonical quotient. The order of `𝒱_A`
//! is inclusion of congruences and the join is the generated congruence.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::finmodel::{
    congruence, congruence_join, congruence_leq, filter_quotient, idempotents, localize_at,
    quotient, radical_leq, is_unit, Hom, Model, Sort,
};
use crate::Error;

/// The supported contexts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextId {
    Trivial,
    Zariski,
    Dl,
    Pierce,
    Field,
    Domain,
}

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ContextId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ContextId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown context {s:?}")))
    }
}

impl ContextId {
    pub const ALL: [ContextId; 6] = [
        ContextId::Trivial,
        ContextId::Zariski,
        ContextId::Dl,
        ContextId::Pierce,
        ContextId::Field,
        ContextId::Domain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ContextId::Trivial => "trivial",
            ContextId::Zariski => "zariski",
            ContextId::Dl => "dl",
            ContextId::Pierce => "pierce",
            ContextId::Field => "field",
            ContextId::Domain => "domain",
        }
    }

    /// The sort of models, or `None` for the trivial context which accepts
    /// both.
    pub fn sort(self) -> Option<Sort> {
        match self {
            ContextId::Trivial => None,
            ContextId::Dl => Some(Sort::Lattice),
            _ => Some(Sort::Ring),
        }
    }

    pub fn accepts(self, sort: Sort) -> bool {
        self.sort().is_none_or(|s| s == sort)
    }

    fn check(self, m: &Model) -> Result<(), Error> {
        if self.accepts(m.sort()) {
            Ok(())
        } else {
            Err(Error::SortMismatch)
        }
    }
}

/// Whether `m` satisfies the context's extra axioms.
pub fn is_t_model(ctx: ContextId, m: &Model) -> Result<bool, Error> {
    ctx.check(m)?;
    if ctx == ContextId::Trivial {
        return Ok(true);
    }
    if m.is_trivial() {
        return Ok(false);
    }
    Ok(match ctx {
        ContextId::Trivial => true,
        ContextId::Zariski => m
            .elements()
            .all(|u| is_unit(m, u) || is_unit(m, m.sub(m.one(), u))),
        ContextId::Dl => m.elements().all(|u| {
            m.elements()
                .all(|v| m.join(u, v) != m.top() || u == m.top() || v == m.top())
        }),
        ContextId::Pierce => idempotents(m)
            .into_iter()
            .all(|e| e == m.zero() || e == m.one()),
        ContextId::Field => m.elements().all(|u| u == m.zero() || is_unit(m, u)),
        ContextId::Domain => m.elements().all(|u| {
            m.elements()
                .all(|v| m.mul(u, v) != m.zero() || u == m.zero() || v == m.zero())
        }),
    })
}

/// One generating pair `(φ(u), ψ(u, v))` of étale formulas.
pub struct EtalePair {
    pub name: &'static str,
    pub arity_u: usize,
    pub arity_v: usize,
    pub phi: fn(&Model, &[usize]) -> bool,
    pub psi: fn(&Model, &[usize], &[usize]) -> bool,
}

/// The generating pairs of the context.
pub fn lambda(ctx: ContextId) -> Vec<EtalePair> {
    let any = |_: &Model, _: &[usize]| true;
    match ctx {
        ContextId::Trivial => vec![],
        ContextId::Zariski => vec![
            EtalePair {
                name: "(u=u, uv=1)",
                arity_u: 1,
                arity_v: 1,
                phi: any,
                psi: |m, u, v| m.mul(u[0], v[0]) == m.one(),
            },
            EtalePair {
                name: "(u=u, (1-u)v=1)",
                arity_u: 1,
                arity_v: 1,
                phi: any,
                psi: |m, u, v| m.mul(m.sub(m.one(), u[0]), v[0]) == m.one(),
            },
        ],
        ContextId::Dl => vec![
            EtalePair {
                name: "(sup(u,u')=1, u=1)",
                arity_u: 2,
                arity_v: 0,
                phi: |m, u| m.join(u[0], u[1]) == m.top(),
                psi: |m, u, _| u[0] == m.top(),
            },
            EtalePair {
                name: "(sup(u,u')=1, u'=1)",
                arity_u: 2,
                arity_v: 0,
                phi: |m, u| m.join(u[0], u[1]) == m.top(),
                psi: |m, u, _| u[1] == m.top(),
            },
        ],
        ContextId::Pierce => vec![
            EtalePair {
                name: "(u^2=u, u=0)",
                arity_u: 1,
                arity_v: 0,
                phi: |m, u| m.mul(u[0], u[0]) == u[0],
                psi: |m, u, _| u[0] == m.zero(),
            },
            EtalePair {
                name: "(u^2=u, u=1)",
                arity_u: 1,
                arity_v: 0,
                phi: |m, u| m.mul(u[0], u[0]) == u[0],
                psi: |m, u, _| u[0] == m.one(),
            },
        ],
        ContextId::Field => vec![
            EtalePair {
                name: "(u=u, u=0)",
                arity_u: 1,
                arity_v: 0,
                phi: any,
                psi: |m, u, _| u[0] == m.zero(),
            },
            EtalePair {
                name: "(u=u, uv=1)",
                arity_u: 1,
                arity_v: 1,
                phi: any,
                psi: |m, u, v| m.mul(u[0], v[0]) == m.one(),
            },
        ],
        ContextId::Domain => vec![
            EtalePair {
                name: "(uu'=0, u=0)",
                arity_u: 2,
                arity_v: 0,
                phi: |m, u| m.mul(u[0], u[1]) == m.zero(),
                psi: |m, u, _| u[0] == m.zero(),
            },
            EtalePair {
                name: "(uu'=0, u'=0)",
                arity_u: 2,
                arity_v: 0,
                phi: |m, u| m.mul(u[0], u[1]) == m.zero(),
                psi: |m, u, _| u[1] == m.zero(),
            },
        ],
    }
}

fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).map(move |mut c| {
        (0..k)
            .map(|_| {
                let x = c % n;
                c /= n;
                x
            })
            .collect()
    })
}

/// The unique-lifting condition against every generating pair, checked
/// literally.
pub fn is_admissible_raw(ctx: ContextId, h: &Hom) -> bool {
    let (a, b) = (&h.source, &h.target);
    lambda(ctx).iter().all(|p| {
        tuples(a.size(), p.arity_u).filter(|u| (p.phi)(a, u)).all(|u| {
            let hu: Vec<usize> = u.iter().map(|&x| h.apply(x)).collect();
            tuples(b.size(), p.arity_v)
                .filter(|v| (p.psi)(b, &hu, v))
                .all(|v| {
                    tuples(a.size(), p.arity_v)
                        .filter(|w| {
                            (p.psi)(a, &u, w) && w.iter().zip(&v).all(|(&x, &y)| h.apply(x) == y)
                        })
                        .count()
                        == 1
                })
        })
    })
}

/// Admissibility in closed form.
pub fn is_admissible(ctx: ContextId, h: &Hom) -> Result<bool, Error> {
    ctx.check(&h.source)?;
    ctx.check(&h.target)?;
    let (a, b) = (&h.source, &h.target);
    let reflects_units = || {
        a.elements()
            .all(|x| !is_unit(b, h.apply(x)) || is_unit(a, x))
    };
    let closed = match ctx {
        ContextId::Trivial => true,
        ContextId::Zariski => reflects_units(),
        ContextId::Dl => a.elements().all(|x| h.apply(x) != b.top() || x == a.top()),
        ContextId::Pierce => {
            let es = idempotents(a);
            es.iter()
                .all(|&e| es.iter().all(|&f| e == f || h.apply(e) != h.apply(f)))
        }
        ContextId::Field => h.is_injective() && reflects_units(),
        ContextId::Domain => h.is_injective(),
    };
    if cfg!(debug_assertions) && a.size() * a.size() * b.size() <= 4096 {
        debug_assert_eq!(closed, is_admissible_raw(ctx, h), "{ctx} {h:?}");
    }
    Ok(closed)
}

/// Canonical key of an étale arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    /// The identity arrow.
    Id,
    /// Zariski: invert the element; DL and Pierce: force the element to be 1.
    Elem(usize),
    /// Field and domain contexts: the kernel that is killed and the elements
    /// that become invertible.
    Pair { kill: Vec<usize>, invert: Vec<usize> },
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Id => f.write_str("id"),
            Tag::Elem(a) => write!(f, "[{a}]"),
            Tag::Pair { kill, invert } => write!(f, "kill{kill:?}/inv{invert:?}"),
        }
    }
}

/// An element `λ: A → A_λ` of `𝒱_A`.
#[derive(Clone, Debug)]
pub struct EtaleArrow {
    pub tag: Tag,
    /// Kernel congruence, labelled by least class members.
    pub kernel: Vec<usize>,
    /// The quotient map `A → A_λ`.
    pub hom: Hom,
    /// For each element of `A_λ`, its least preimage.
    pub reps: Vec<usize>,
}

impl EtaleArrow {
    fn new(source: &Model, tag: Tag, kernel: Vec<usize>) -> EtaleArrow {
        let hom = quotient(source, &kernel);
        let reps = source.elements().filter(|&x| kernel[x] == x).collect();
        EtaleArrow {
            tag,
            kernel,
            hom,
            reps,
        }
    }

    pub fn codomain(&self) -> &Model {
        &self.hom.target
    }
}

/// A covering family `{λ → μᵢ}` coming from one instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringFamily {
    pub base: usize,
    pub covers: Vec<usize>,
    pub axiom: &'static str,
    /// The elements of `A_λ` the axiom was instantiated at.
    pub witness: Vec<usize>,
}

/// The étale semilattice `𝒱_A`. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct EtaleSemilattice {
    pub ctx: ContextId,
    pub source: Model,
    pub elements: Vec<EtaleArrow>,
    pub leq: Vec<Vec<bool>>,
    pub join: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl EtaleSemilattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    /// Index of the arrow with the given kernel.
    pub fn lookup(&self, kernel: &[usize]) -> Option<usize> {
        self.index.get(kernel).copied()
    }

    pub fn codomain(&self, i: usize) -> &Model {
        self.elements[i].codomain()
    }

    /// The unique map `A_λ → A_μ` under `A`, for `λ ≤ μ`.
    pub fn transition(&self, i: usize, j: usize) -> Hom {
        assert!(self.leq[i][j], "no map between incomparable étale arrows");
        let (l, m) = (&self.elements[i], &self.elements[j]);
        Hom {
            source: l.codomain().clone(),
            target: m.codomain().clone(),
            map: l.reps.iter().map(|&x| m.hom.apply(x)).collect(),
        }
    }

    /// Kernel of `A → A_λ → C` where `θ` is a congruence on `A_λ`.
    fn compose_kernel(&self, i: usize, theta: &[usize]) -> Vec<usize> {
        let h = &self.elements[i].hom;
        let mut labels: Vec<usize> = self.source.elements().map(|x| theta[h.apply(x)]).collect();
        crate::finmodel::canonicalize(&mut labels);
        labels
    }

    /// Covering families at `λ`, one per axiom instance, without repeats.
    pub fn covering_families(&self, i: usize) -> Vec<CoveringFamily> {
        let c = self.codomain(i).clone();
        let mut out: Vec<CoveringFamily> = Vec::new();
        for (axiom, witness, moves) in axiom_instances(self.ctx, &c) {
            let mut covers: Vec<usize> = moves
                .iter()
                .map(|theta| {
                    let k = self.compose_kernel(i, theta);
                    self.lookup(&k).expect("covers lie in the étale semilattice")
                })
                .collect();
            covers.sort_unstable();
            covers.dedup();
            if out.iter().all(|f| f.covers != covers) {
                out.push(CoveringFamily {
                    base: i,
                    covers,
                    axiom,
                    witness,
                });
            }
        }
        out
    }

    /// Indices `μ` whose codomain is a model of the theory.
    pub fn t_model_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| is_t_model(self.ctx, self.codomain(i)).expect("sort checked"))
            .collect()
    }

    fn from_arrows(ctx: ContextId, source: &Model, mut arrows: Vec<EtaleArrow>) -> Self {
        arrows.sort_by(|x, y| {
            let id = |a: &EtaleArrow| a.tag != Tag::Id;
            (id(x), std::cmp::Reverse(x.codomain().size()), &x.tag).cmp(&(
                id(y),
                std::cmp::Reverse(y.codomain().size()),
                &y.tag,
            ))
        });
        let n = arrows.len();
        let index: HashMap<Vec<usize>, usize> = arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.kernel.clone(), i))
            .collect();
        assert_eq!(index.len(), n, "étale arrows must have distinct kernels");
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| congruence_leq(&arrows[i].kernel, &arrows[j].kernel))
                    .collect()
            })
            .collect();
        let join: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let k = congruence_join(source, &arrows[i].kernel, &arrows[j].kernel);
                        *index.get(&k).expect("𝒱_A is closed under joins")
                    })
                    .collect()
            })
            .collect();
        EtaleSemilattice {
            ctx,
            source: source.clone(),
            elements: arrows,
            leq,
            join,
            index,
        }
    }
}

fn identity_kernel(m: &Model) -> Vec<usize> {
    m.elements().collect()
}

fn invert(c: &Model, x: usize) -> Vec<usize> {
    localize_at(c, x).kernel()
}

fn kill(c: &Model, x: usize) -> Vec<usize> {
    congruence(c, &[(x, c.constant(0))])
}

fn force_one(c: &Model, x: usize) -> Vec<usize> {
    congruence(c, &[(x, c.constant(1))])
}

/// Single generator pushouts available in `c`.
pub fn moves(ctx: ContextId, c: &Model) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for x in c.elements() {
        match ctx {
            ContextId::Trivial => {}
            ContextId::Zariski => out.push(invert(c, x)),
            ContextId::Dl => out.push(force_one(c, x)),
            ContextId::Pierce => {
                if c.mul(x, x) == x {
                    out.push(kill(c, x));
                    out.push(force_one(c, x));
                }
            }
            ContextId::Field => {
                out.push(kill(c, x));
                out.push(invert(c, x));
            }
            ContextId::Domain => out.push(kill(c, x)),
        }
    }
    out.sort();
    out.dedup();
    out
}

type Instance = (&'static str, Vec<usize>, Vec<Vec<usize>>);

fn axiom_instances(ctx: ContextId, c: &Model) -> Vec<Instance> {
    let mut out: Vec<Instance> = Vec::new();
    if ctx == ContextId::Trivial {
        return out;
    }
    if c.is_trivial() {
        out.push(("0=1 ⊢ ⊥", vec![], vec![]));
    }
    for u in c.elements() {
        match ctx {
            ContextId::Trivial => {}
            ContextId::Zariski => out.push((
                "u=u ⊢ ∃v uv=1 ∨ ∃v (1-u)v=1",
                vec![u],
                vec![invert(c, u), invert(c, c.sub(c.one(), u))],
            )),
            ContextId::Dl => {
                for v in c.elements() {
                    if c.join(u, v) == c.top() {
                        out.push((
                            "sup(u,u')=1 ⊢ u=1 ∨ u'=1",
                            vec![u, v],
                            vec![force_one(c, u), force_one(c, v)],
                        ));
                    }
                }
            }
            ContextId::Pierce => {
                if c.mul(u, u) == u {
                    out.push((
                        "u²=u ⊢ u=0 ∨ u=1",
                        vec![u],
                        vec![kill(c, u), force_one(c, u)],
                    ));
                }
            }
            ContextId::Field => out.push((
                "u=u ⊢ u=0 ∨ ∃v uv=1",
                vec![u],
                vec![kill(c, u), invert(c, u)],
            )),
            ContextId::Domain => {
                for v in c.elements() {
                    if c.mul(u, v) == c.zero() {
                        out.push((
                            "uu'=0 ⊢ u=0 ∨ u'=0",
                            vec![u, v],
                            vec![kill(c, u), kill(c, v)],
                        ));
                    }
                }
            }
        }
    }
    out
}

/// `𝒱_A` from the context's closed form.
pub fn etale_semilattice(ctx: ContextId, a: &Model) -> Result<EtaleSemilattice, Error> {
    ctx.check(a)?;
    let id = EtaleArrow::new(a, Tag::Id, identity_kernel(a));
    let mut arrows = vec![id];
    let mut push = |tag: Tag, kernel: Vec<usize>| {
        if arrows.iter().all(|x| x.kernel != kernel) {
            arrows.push(EtaleArrow::new(a, tag, kernel));
        }
    };
    match ctx {
        ContextId::Trivial => {}
        ContextId::Zariski => {
            for x in a.elements() {
                let rep = a
                    .elements()
                    .find(|&y| radical_leq(a, x, y) && radical_leq(a, y, x))
                    .expect("x is equivalent to itself");
                if rep == x && !is_unit(a, x) {
                    push(Tag::Elem(x), localize_at(a, x).kernel());
                }
            }
        }
        ContextId::Dl => {
            for x in a.elements().filter(|&x| x != a.top()) {
                push(Tag::Elem(x), filter_quotient(a, x).1.kernel());
            }
        }
        ContextId::Pierce => {
            for e in idempotents(a).into_iter().filter(|&e| e != a.one()) {
                push(Tag::Elem(e), localize_at(a, e).kernel());
            }
        }
        ContextId::Field | ContextId::Domain => {
            let mut seen: Vec<Vec<usize>> = vec![identity_kernel(a)];
            let mut i = 0;
            while i < seen.len() {
                let k = seen[i].clone();
                let h = quotient(a, &k);
                for theta in moves(ctx, &h.target) {
                    let mut labels: Vec<usize> =
                        a.elements().map(|x| theta[h.apply(x)]).collect();
                    crate::finmodel::canonicalize(&mut labels);
                    if !seen.contains(&labels) {
                        seen.push(labels);
                    }
                }
                i += 1;
            }
            for k in seen.into_iter().skip(1) {
                let h = quotient(a, &k);
                let kill: Vec<usize> = a.elements().filter(|&x| k[x] == k[a.zero()]).collect();
                let invert: Vec<usize> = a
                    .elements()
                    .filter(|&x| is_unit(&h.target, h.apply(x)))
                    .collect();
                push(Tag::Pair { kill, invert }, k);
            }
        }
    }
    Ok(EtaleSemilattice::from_arrows(ctx, a, arrows))
}

/// The pushout `α_*(λ)` computed by transporting the tag along `α`.
pub fn pushforward(
    alpha: &Hom,
    va: &EtaleSemilattice,
    lambda: usize,
    vb: &EtaleSemilattice,
) -> usize {
    let b = &alpha.target;
    let kernel = match &va.elements[lambda].tag {
        Tag::Id => return 0,
        Tag::Elem(x) => {
            let y = alpha.apply(*x);
            match va.ctx {
                ContextId::Zariski | ContextId::Pierce => localize_at(b, y).kernel(),
                ContextId::Dl => filter_quotient(b, y).1.kernel(),
                _ => unreachable!("element tags only occur in Zariski, DL and Pierce"),
            }
        }
        Tag::Pair { kill, .. } => {
            let pairs: Vec<(usize, usize)> =
                kill.iter().map(|&x| (alpha.apply(x), b.zero())).collect();
            congruence(b, &pairs)
        }
    };
    vb.lookup(&kernel)
        .expect("the pushout of an étale arrow is étale")
}

/// The pushout computed generically: the congruence on the target
/// generated by the image of the kernel.
pub fn pushforward_generic(
    alpha: &Hom,
    va: &EtaleSemilattice,
    lambda: usize,
    vb: &EtaleSemilattice,
) -> Option<usize> {
    let k = &va.elements[lambda].kernel;
    let pairs: Vec<(usize, usize)> = alpha
        .source
        .elements()
        .map(|x| (alpha.apply(x), alpha.apply(k[x])))
        .collect();
    vb.lookup(&congruence(&alpha.target, &pairs))
}
