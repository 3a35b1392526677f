//! Spectra of finite models: points, specialization order, structure sheaf,
//! global sections, induced maps, the unit, standardness and the spatial
//! factorization of a homomorphism into a local model.

mod modelled;
mod poset;

use serde::Serialize;

pub use modelled::{ModelledMap, ModelledSpace, Sections};
pub use poset::{preorder_closure, Poset, UP_SET_LIMIT};

use crate::context::{
    etale_semilattice, is_admissible, is_t_model, pushforward, ContextId, EtaleSemilattice,
};
use crate::finmodel::{congruence_leq, lattice_from_leq, Hom, Model};
use crate::semilattice::spec_points;
use crate::Error;

/// `Spec(A)` together with the data it was computed from.
#[derive(Clone, Debug)]
pub struct SpecSpace {
    pub ctx: ContextId,
    pub model: Model,
    pub v: EtaleSemilattice,
    /// Point `i` of the space is the étale arrow `v.elements[points[i]]`.
    pub points: Vec<usize>,
    pub space: ModelledSpace,
    /// `D_λ` for every `λ` in `𝒱_A`, as a set of points.
    pub basic_opens: Vec<Vec<bool>>,
    /// Finite unions of basic opens, smallest first.
    pub compact_opens: Vec<Vec<bool>>,
    /// `compact_opens` ordered by inclusion.
    pub compact_lattice: Model,
}

impl SpecSpace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The point whose étale arrow is `nu`, if `nu` is a point.
    pub fn point_of(&self, nu: usize) -> Option<usize> {
        self.points.iter().position(|&p| p == nu)
    }

    /// The stalk map `A → A_ν` at point `p`.
    pub fn localization(&self, p: usize) -> &Hom {
        &self.v.elements[self.points[p]].hom
    }

    /// `A_λ → S(D_λ)`, sending `a` to its germs.
    pub fn local_representation(&self, lambda: usize) -> (Sections, Hom) {
        let s = self
            .space
            .sections(&self.basic_opens[lambda])
            .expect("basic opens are open");
        let a = self.v.codomain(lambda).clone();
        let map = a
            .elements()
            .map(|c| {
                let t: Vec<usize> = s
                    .points
                    .iter()
                    .map(|&p| self.v.transition(lambda, self.points[p]).apply(c))
                    .collect();
                s.lookup(&t).expect("germs of an element are compatible")
            })
            .collect();
        let h = Hom {
            source: a,
            target: s.model.clone(),
            map,
        };
        (s, h)
    }

    /// Sections over `open` by the local-agreement definition: families
    /// `(s_I)` such that every `I` has a basic `D_λ ∋ I` inside the open and
    /// some `a ∈ A_λ` with `s_J = a_J` on all of `D_λ`.
    pub fn sections_local(&self, open: &[bool]) -> Result<Sections, Error> {
        if !self.space.poset().is_up_set(open) {
            return Err(Error::Precondition("sections need an open (up-)set".into()));
        }
        let points: Vec<usize> = (0..self.len()).filter(|&p| open[p]).collect();
        // germs: partial families on some D_λ ⊆ open
        let mut germs: Vec<Vec<Option<usize>>> = Vec::new();
        for l in 0..self.v.len() {
            let d = &self.basic_opens[l];
            if (0..self.len()).any(|p| d[p] && !open[p]) {
                continue;
            }
            for c in self.v.codomain(l).elements() {
                germs.push(
                    points
                        .iter()
                        .map(|&p| d[p].then(|| self.v.transition(l, self.points[p]).apply(c)))
                        .collect(),
                );
            }
        }
        germs.sort();
        germs.dedup();
        let mut out = amalgamate(&germs, points.len());
        out.sort();
        out.dedup();
        Ok(Sections::new(&self.space, open.to_vec(), points, out))
    }
}

/// Total families obtained by gluing partial families (`germs`) so that
/// every position is covered by some germ agreeing with the result.
pub fn amalgamate(germs: &[Vec<Option<usize>>], n: usize) -> Vec<Vec<usize>> {
    fn go(
        i: usize,
        germs: &[Vec<Option<usize>>],
        cur: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == cur.len() {
            out.push(cur.iter().map(|v| v.expect("every point is covered")).collect());
            return;
        }
        let snapshot = cur.clone();
        for g in germs.iter().filter(|g| g[i].is_some() && agrees(g, &snapshot)) {
            fill(g, cur);
            go(i + 1, germs, cur, out);
            cur.clone_from(&snapshot);
        }
    }
    fn agrees(g: &[Option<usize>], cur: &[Option<usize>]) -> bool {
        g.iter().zip(cur).all(|(a, b)| match (a, b) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        })
    }
    fn fill(g: &[Option<usize>], cur: &mut [Option<usize>]) {
        for (c, v) in cur.iter_mut().zip(g) {
            if v.is_some() {
                *c = *v;
            }
        }
    }
    let mut out = Vec::new();
    go(0, germs, &mut vec![None; n], &mut out);
    out
}

/// Computes `Spec(A)`. Points are found twice, by the local-model test and
/// by the covering criterion, and the two must agree.
pub fn spec(ctx: ContextId, a: &Model) -> Result<SpecSpace, Error> {
    let v = etale_semilattice(ctx, a)?;
    spec_from(v)
}

fn spec_from(v: EtaleSemilattice) -> Result<SpecSpace, Error> {
    let ctx = v.ctx;
    let direct = v.t_model_elements();
    let covering = spec_points(&v);
    if direct != covering {
        return Err(Error::Verification(format!(
            "point criteria disagree: local codomains {direct:?}, covering criterion {covering:?}"
        )));
    }
    let points = direct;
    let poset = Poset::new(
        points
            .iter()
            .map(|&i| points.iter().map(|&j| v.leq[i][j]).collect())
            .collect(),
    )?;
    let stalks: Vec<Model> = points.iter().map(|&i| v.codomain(i).clone()).collect();
    let space = ModelledSpace::new(v.source.sort(), poset, stalks, |p, q| {
        v.transition(points[p], points[q])
    })?
    .with_labels(points.iter().map(|&i| v.elements[i].tag.to_string()).collect());
    let basic_opens: Vec<Vec<bool>> = (0..v.len())
        .map(|l| points.iter().map(|&nu| v.leq[l][nu]).collect())
        .collect();
    let mut compact_opens: Vec<Vec<bool>> = vec![vec![false; points.len()]];
    for d in &basic_opens {
        if !compact_opens.contains(d) {
            compact_opens.push(d.clone());
        }
    }
    let mut i = 0;
    while i < compact_opens.len() {
        for j in 0..i {
            let u: Vec<bool> = compact_opens[i]
                .iter()
                .zip(&compact_opens[j])
                .map(|(a, b)| *a || *b)
                .collect();
            if !compact_opens.contains(&u) {
                compact_opens.push(u);
            }
        }
        i += 1;
    }
    compact_opens.sort_by_key(|s| {
        let members: Vec<usize> = (0..s.len()).filter(|&p| s[p]).collect();
        (members.len(), members)
    });
    let leq: Vec<Vec<bool>> = compact_opens
        .iter()
        .map(|a| {
            compact_opens
                .iter()
                .map(|b| a.iter().zip(b).all(|(x, y)| !x || *y))
                .collect()
        })
        .collect();
    let compact_lattice = lattice_from_leq(&leq)?;
    Ok(SpecSpace {
        ctx,
        model: v.source.clone(),
        v,
        points,
        space,
        basic_opens,
        compact_opens,
        compact_lattice,
    })
}

/// Global sections of a modelled space.
pub fn gamma(x: &ModelledSpace) -> Model {
    x.gamma().model
}

/// `η_A: A → Γ(Spec A)`.
pub fn unit_eta(s: &SpecSpace) -> Hom {
    let g = s.space.gamma();
    let map = s
        .model
        .elements()
        .map(|a| {
            let t: Vec<usize> = (0..s.len()).map(|p| s.localization(p).apply(a)).collect();
            g.lookup(&t).expect("images of an element form a compatible family")
        })
        .collect();
    Hom {
        source: s.model.clone(),
        target: g.model,
        map,
    }
}

/// `Spec(α): Spec(B) → Spec(A)` for `α: A → B`.
pub fn spec_of_hom(alpha: &Hom, sa: &SpecSpace, sb: &SpecSpace) -> Result<ModelledMap, Error> {
    if alpha.source != sa.model || alpha.target != sb.model || sa.ctx != sb.ctx {
        return Err(Error::Precondition("hom does not match the spectra".into()));
    }
    let (va, vb) = (&sa.v, &sb.v);
    let pushed: Vec<usize> = (0..va.len()).map(|l| pushforward(alpha, va, l, vb)).collect();
    let mut points = Vec::new();
    let mut flat = Vec::new();
    for (q, &nu) in sb.points.iter().enumerate() {
        let mu = (0..va.len())
            .filter(|&l| vb.leq[pushed[l]][nu])
            .fold(va.bottom(), |m, l| va.join[m][l]);
        let p = sa.point_of(mu).ok_or_else(|| {
            Error::Verification(format!("preimage of point {q} is not a point"))
        })?;
        let (src, tgt) = (va.codomain(mu), vb.codomain(nu));
        let map = va.elements[mu]
            .reps
            .iter()
            .map(|&x| vb.elements[nu].hom.apply(alpha.apply(x)))
            .collect();
        let h = Hom::new(src.clone(), tgt.clone(), map)?;
        if !is_admissible(sa.ctx, &h)? {
            return Err(Error::Verification(format!("comparison at point {q} is not admissible")));
        }
        points.push(p);
        flat.push(h);
    }
    ModelledMap::new(sb.space.clone(), sa.space.clone(), points, flat)
}

/// Instance-level standardness checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardnessReport {
    /// `A_λ → S(D_λ)` is an isomorphism, per `λ` in `𝒱_A` order.
    pub local_representation: Vec<bool>,
    pub eta_iso: bool,
    /// Compatible families over each covering family amalgamate uniquely.
    pub sheaf_condition: bool,
}

impl StandardnessReport {
    pub fn all_pass(&self) -> bool {
        self.eta_iso && self.sheaf_condition && self.local_representation.iter().all(|&b| b)
    }
}

pub fn standardness_witness(s: &SpecSpace) -> StandardnessReport {
    let local_representation = (0..s.v.len())
        .map(|l| s.local_representation(l).1.is_iso())
        .collect();
    let eta_iso = unit_eta(s).is_iso();
    let sheaf_condition = (0..s.v.len()).all(|l| {
        s.v.covering_families(l)
            .iter()
            .all(|f| unique_amalgamation(&s.v, l, &f.covers))
    });
    StandardnessReport {
        local_representation,
        eta_iso,
        sheaf_condition,
    }
}

/// Whether every family `(s_i ∈ A_{μ_i})` agreeing on each `A_{μ_i ∨ μ_j}`
/// comes from exactly one element of `A_λ`.
fn unique_amalgamation(v: &EtaleSemilattice, l: usize, covers: &[usize]) -> bool {
    let a = v.codomain(l);
    let to: Vec<Hom> = covers.iter().map(|&m| v.transition(l, m)).collect();
    let mut count = std::collections::HashMap::<Vec<usize>, usize>::new();
    for x in a.elements() {
        *count.entry(to.iter().map(|h| h.apply(x)).collect()).or_default() += 1;
    }
    let mut family: Vec<Vec<usize>> = vec![vec![]];
    for &m in covers {
        family = family
            .into_iter()
            .flat_map(|t| {
                v.codomain(m).elements().filter_map(move |y| {
                    let ok = t.iter().enumerate().all(|(j, &x)| {
                        let k = v.join[covers[j]][m];
                        v.transition(covers[j], k).apply(x) == v.transition(m, k).apply(y)
                    });
                    ok.then(|| {
                        let mut u = t.clone();
                        u.push(y);
                        u
                    })
                })
            })
            .collect();
    }
    family.iter().all(|t| count.get(t) == Some(&1))
}

/// `A → A_μ → B` with `μ` the largest étale arrow whose pushout along `α`
/// is trivial.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub middle: usize,
    pub first: Hom,
    pub second: Hom,
}

pub fn factorize(ctx: ContextId, alpha: &Hom) -> Result<(EtaleSemilattice, Factorization), Error> {
    if !is_t_model(ctx, &alpha.target)? {
        return Err(Error::Precondition("the target is not a local model".into()));
    }
    let va = etale_semilattice(ctx, &alpha.source)?;
    let vb = etale_semilattice(ctx, &alpha.target)?;
    let mu = (0..va.len())
        .filter(|&l| pushforward(alpha, &va, l, &vb) == vb.bottom())
        .fold(va.bottom(), |m, l| va.join[m][l]);
    let first = va.elements[mu].hom.clone();
    let second = Hom::new(
        va.codomain(mu).clone(),
        alpha.target.clone(),
        va.elements[mu].reps.iter().map(|&x| alpha.apply(x)).collect(),
    )?;
    if !is_admissible(ctx, &second)? {
        return Err(Error::Verification("second leg is not admissible".into()));
    }
    Ok((va, Factorization { middle: mu, first, second }))
}

/// Checks the factorization is initial: every `λ` through which `α`
/// factors maps uniquely to `A_μ` under `A` and over `B`, and the only
/// competitor with an admissible second leg is `μ` itself.
pub fn factorization_is_initial(
    ctx: ContextId,
    alpha: &Hom,
    va: &EtaleSemilattice,
    f: &Factorization,
) -> Result<bool, Error> {
    let kernel = alpha.kernel();
    for l in 0..va.len() {
        if !congruence_leq(&va.elements[l].kernel, &kernel) {
            continue;
        }
        let leg = Hom::new(
            va.codomain(l).clone(),
            alpha.target.clone(),
            va.elements[l].reps.iter().map(|&x| alpha.apply(x)).collect(),
        )?;
        let mediating = crate::finmodel::enumerate_homs(va.codomain(l), va.codomain(f.middle))
            .into_iter()
            .filter(|k| va.elements[l].hom.then(k) == f.first && k.then(&f.second) == leg)
            .count();
        if mediating != 1 {
            return Ok(false);
        }
        if is_admissible(ctx, &leg)? && l != f.middle {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The counit `X → Spec(Γ X)` at a T-modelled space: `x` goes to the
/// largest étale arrow through which evaluation at `x` factors.
pub fn counit(ctx: ContextId, x: &ModelledSpace) -> Result<(SpecSpace, ModelledMap), Error> {
    if !x.is_t_modelled(ctx)? {
        return Err(Error::Precondition("the space is not T-modelled".into()));
    }
    let g = x.gamma();
    let s = spec(ctx, &g.model)?;
    let mut points = Vec::new();
    let mut flat = Vec::new();
    for p in 0..x.len() {
        let ev = g.to_stalk(x, p);
        let kernel = ev.kernel();
        let j = (0..s.v.len())
            .filter(|&l| congruence_leq(&s.v.elements[l].kernel, &kernel))
            .fold(s.v.bottom(), |m, l| s.v.join[m][l]);
        let q = s
            .point_of(j)
            .ok_or_else(|| Error::Verification(format!("counit at {p} misses the spectrum")))?;
        let h = Hom::new(
            s.v.codomain(j).clone(),
            x.stalk(p).clone(),
            s.v.elements[j].reps.iter().map(|&c| ev.apply(c)).collect(),
        )?;
        points.push(q);
        flat.push(h);
    }
    let e = ModelledMap::new(x.clone(), s.space.clone(), points, flat)?;
    Ok((s, e))
}
