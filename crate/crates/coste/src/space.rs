//! Colimits and limits of finite modelled spaces, admissibility of modelled
//! maps, and exhaustive checks of universal properties.

use std::collections::HashMap;

use crate::context::{is_admissible, ContextId};
use crate::finmodel::{
    chain, congruence, copair_many, coproduct_of, enumerate_homs, quotient, subalgebra, Hom, Model,
    Sort,
};
use crate::spectrum::{preorder_closure, ModelledMap, ModelledSpace, Poset, Sections};
use crate::Error;

/// A colimit: the apex and one leg per object of the diagram.
#[derive(Clone, Debug)]
pub struct Cocone {
    pub apex: ModelledSpace,
    pub legs: Vec<ModelledMap>,
}

/// A limit: the apex and one leg per object of the diagram.
#[derive(Clone, Debug)]
pub struct Cone {
    pub apex: ModelledSpace,
    pub legs: Vec<ModelledMap>,
}

pub fn is_admissible_map(ctx: ContextId, f: &ModelledMap) -> Result<bool, Error> {
    f.is_admissible(ctx)
}

pub fn is_t_modelled(ctx: ContextId, x: &ModelledSpace) -> Result<bool, Error> {
    x.is_t_modelled(ctx)
}

/// Every modelled map `x → y`, optionally only the admissible ones.
pub fn enumerate_maps(
    x: &ModelledSpace,
    y: &ModelledSpace,
    admissible: Option<ContextId>,
) -> Result<Vec<ModelledMap>, Error> {
    if x.sort() != y.sort() {
        return Err(Error::SortMismatch);
    }
    let (n, m) = (x.len(), y.len());
    let mut cache: HashMap<(usize, usize), Vec<Hom>> = HashMap::new();
    let mut out = Vec::new();
    let total = (m as u64).checked_pow(n as u32).ok_or_else(|| {
        Error::Precondition("too many point maps to enumerate".into())
    })?;
    for code in 0..total {
        let mut c = code;
        let points: Vec<usize> = (0..n)
            .map(|_| {
                let v = (c % m as u64) as usize;
                c /= m as u64;
                v
            })
            .collect();
        if !x.poset().is_monotone(y.poset(), &points) {
            continue;
        }
        let mut choices: Vec<Vec<Hom>> = Vec::with_capacity(n);
        for p in 0..n {
            let key = (points[p], p);
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
                let mut hs = enumerate_homs(y.stalk(points[p]), x.stalk(p));
                if let Some(ctx) = admissible {
                    let mut keep = Vec::new();
                    for h in hs {
                        if is_admissible(ctx, &h)? {
                            keep.push(h);
                        }
                    }
                    hs = keep;
                }
                e.insert(hs);
            }
            choices.push(cache[&key].clone());
        }
        let mut flat: Vec<Hom> = Vec::with_capacity(n);
        extend_flats(x, y, &points, &choices, &mut flat, &mut out);
    }
    Ok(out)
}

fn extend_flats(
    x: &ModelledSpace,
    y: &ModelledSpace,
    points: &[usize],
    choices: &[Vec<Hom>],
    flat: &mut Vec<Hom>,
    out: &mut Vec<ModelledMap>,
) {
    let p = flat.len();
    if p == x.len() {
        out.push(ModelledMap::new_unchecked(
            x.clone(),
            y.clone(),
            points.to_vec(),
            flat.clone(),
        ));
        return;
    }
    for h in &choices[p] {
        let natural = (0..p).all(|q| {
            let square = |a: usize, b: usize, fa: &Hom, fb: &Hom| {
                y.transition(points[a], points[b]).then(fb) == fa.then(x.transition(a, b))
            };
            (!x.poset().leq(q, p) || square(q, p, &flat[q], h))
                && (!x.poset().leq(p, q) || square(p, q, h, &flat[q]))
        });
        if natural {
            flat.push(h.clone());
            extend_flats(x, y, points, choices, flat, out);
            flat.pop();
        }
    }
}

/// Disjoint union with the stalks unchanged.
pub fn coproduct_spaces(sort: Sort, xs: &[ModelledSpace]) -> Result<Cocone, Error> {
    if xs.iter().any(|x| x.sort() != sort) {
        return Err(Error::SortMismatch);
    }
    let posets: Vec<Poset> = xs.iter().map(|x| x.poset().clone()).collect();
    let (poset, offsets) = Poset::sum(&posets);
    let owner: Vec<(usize, usize)> = xs
        .iter()
        .enumerate()
        .flat_map(|(i, x)| (0..x.len()).map(move |p| (i, p)))
        .collect();
    let stalks: Vec<Model> = owner.iter().map(|&(i, p)| xs[i].stalk(p).clone()).collect();
    let apex = ModelledSpace::new(sort, poset, stalks, |a, b| {
        let ((i, p), (_, q)) = (owner[a], owner[b]);
        xs[i].transition(p, q).clone()
    })?
    .with_labels(
        owner
            .iter()
            .map(|&(i, p)| format!("{i}:{}", xs[i].labels()[p]))
            .collect(),
    );
    let legs = xs
        .iter()
        .zip(&offsets)
        .map(|(x, &o)| {
            ModelledMap::new(
                x.clone(),
                apex.clone(),
                (0..x.len()).map(|p| o + p).collect(),
                x.stalks().iter().map(Hom::identity).collect(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Cocone { apex, legs })
}

/// Collapses the preorder generated by `order` and the identifications to a
/// poset. Returns the poset and the class of each point.
pub fn t0_quotient(
    n: usize,
    order: &[(usize, usize)],
    identify: &[(usize, usize)],
) -> (Poset, Vec<usize>) {
    let pairs: Vec<(usize, usize)> = order
        .iter()
        .copied()
        .chain(identify.iter().flat_map(|&(a, b)| [(a, b), (b, a)]))
        .collect();
    let r = preorder_closure(n, &pairs);
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for a in 0..n {
        if class[a] == usize::MAX {
            for b in a..n {
                if r[a][b] && r[b][a] {
                    class[b] = reps.len();
                }
            }
            reps.push(a);
        }
    }
    let leq = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| r[a][b]).collect())
        .collect();
    (Poset::new(leq).expect("a collapsed preorder is a poset"), class)
}

/// The stalks of a coequalizer as equalizers of sections over preimages of
/// minimal opens, together with their inclusions into `Q(p⁻¹↑z)`.
struct CoeqStalk {
    sections: Sections,
    incl: Hom,
}

/// Coequalizer of `f, g: (X,P) ⇉ (Y,Q)`. The point set is the T₀ quotient of
/// `Y` and `R(W) = eq(Q(p⁻¹W) ⇉ P(h⁻¹W))`, evaluated on minimal opens.
pub fn coequalizer_spaces(f: &ModelledMap, g: &ModelledMap) -> Result<(ModelledSpace, ModelledMap), Error> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::Precondition("maps must be parallel".into()));
    }
    let y = &f.target;
    let order: Vec<(usize, usize)> = y
        .poset()
        .covers()
        .into_iter()
        .collect();
    let identify: Vec<(usize, usize)> = (0..f.source.len())
        .map(|x| (f.points[x], g.points[x]))
        .collect();
    let (poset, class) = t0_quotient(y.len(), &order, &identify);
    let k = poset.len();
    let mut stalks_data: Vec<CoeqStalk> = Vec::with_capacity(k);
    for z in 0..k {
        let up = poset.up(z);
        let w: Vec<bool> = (0..y.len()).map(|p| up[class[p]]).collect();
        let (qw, _, fw) = f.on_sections(&w)?;
        let (_, _, gw) = g.on_sections(&w)?;
        let members: Vec<bool> = qw.model.elements().map(|s| fw.apply(s) == gw.apply(s)).collect();
        let incl = subalgebra(&qw.model, &members);
        stalks_data.push(CoeqStalk { sections: qw, incl });
    }
    let stalks: Vec<Model> = stalks_data.iter().map(|d| d.incl.source.clone()).collect();
    let apex = ModelledSpace::new(y.sort(), poset, stalks, |a, b| {
        let (da, db) = (&stalks_data[a], &stalks_data[b]);
        let res = da.sections.restrict_to(&db.sections);
        let pos: HashMap<usize, usize> = db.incl.map.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Hom {
            source: da.incl.source.clone(),
            target: db.incl.source.clone(),
            map: da.incl.map.iter().map(|&s| pos[&res.apply(s)]).collect(),
        }
    })?;
    let flat: Vec<Hom> = (0..y.len())
        .map(|p| {
            let d = &stalks_data[class[p]];
            Hom {
                source: d.incl.source.clone(),
                target: y.stalk(p).clone(),
                map: d.incl.map.iter().map(|&s| d.sections.component(s, p)).collect(),
            }
        })
        .collect();
    let p = ModelledMap::new(y.clone(), apex.clone(), class, flat)?;
    Ok((apex, p))
}

/// Product with stalk `∐ᵢ (Pᵢ)_{zᵢ}` at `z`. The empty product of lattice
/// spaces is the point with stalk 2; for rings it is refused because the
/// initial ring is infinite.
pub fn product_spaces(sort: Sort, xs: &[ModelledSpace]) -> Result<Cone, Error> {
    if xs.iter().any(|x| x.sort() != sort) {
        return Err(Error::SortMismatch);
    }
    if xs.is_empty() && sort == Sort::Ring {
        return Err(Error::Precondition(
            "the terminal ring-modelled space needs the initial ring ℤ, which is infinite".into(),
        ));
    }
    let posets: Vec<Poset> = xs.iter().map(|x| x.poset().clone()).collect();
    let (poset, coords) = Poset::product(&posets);
    let mut stalks = Vec::new();
    let mut legs_at: Vec<Vec<Hom>> = Vec::new();
    for c in &coords {
        let factors: Vec<Model> = c.iter().enumerate().map(|(i, &p)| xs[i].stalk(p).clone()).collect();
        let (m, legs) = coproduct_of(sort, &factors)?;
        stalks.push(m);
        legs_at.push(legs);
    }
    let apex = ModelledSpace::new(sort, poset, stalks.clone(), |a, b| {
        let maps: Vec<Hom> = (0..xs.len())
            .map(|i| xs[i].transition(coords[a][i], coords[b][i]).then(&legs_at[b][i]))
            .collect();
        copair_many(&stalks[a], &legs_at[a], &maps, &stalks[b]).expect("coprojections generate")
    })?
    .with_labels(
        coords
            .iter()
            .map(|c| {
                let parts: Vec<&str> = c.iter().enumerate().map(|(i, &p)| xs[i].labels()[p].as_str()).collect();
                format!("({})", parts.join(","))
            })
            .collect(),
    );
    let legs = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            ModelledMap::new(
                apex.clone(),
                x.clone(),
                coords.iter().map(|c| c[i]).collect(),
                legs_at.iter().map(|l| l[i].clone()).collect(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Cone { apex, legs })
}

/// The terminal lattice-modelled space.
pub fn terminal_lattice_space() -> ModelledSpace {
    ModelledSpace::point(&chain(2))
}

/// Equalizer of `f, g: (Y,Q) ⇉ (X,P)`: the points with `f y = g y`, with
/// stalk `Q_y` modulo `f♭_y(s) ∼ g♭_y(s)`.
pub fn equalizer_spaces(f: &ModelledMap, g: &ModelledMap) -> Result<(ModelledSpace, ModelledMap), Error> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::Precondition("maps must be parallel".into()));
    }
    let y = &f.source;
    let members: Vec<usize> = (0..y.len()).filter(|&p| f.points[p] == g.points[p]).collect();
    let poset = y.poset().restrict(&members);
    let quotients: Vec<Hom> = members
        .iter()
        .map(|&p| {
            let q = y.stalk(p);
            let pairs: Vec<(usize, usize)> = f.flat[p]
                .source
                .elements()
                .map(|s| (f.flat[p].apply(s), g.flat[p].apply(s)))
                .collect();
            quotient(q, &congruence(q, &pairs))
        })
        .collect();
    let stalks: Vec<Model> = quotients.iter().map(|h| h.target.clone()).collect();
    let apex = ModelledSpace::new(y.sort(), poset, stalks, |a, b| {
        let t = y.transition(members[a], members[b]);
        let (qa, qb) = (&quotients[a], &quotients[b]);
        let reps: Vec<usize> = (0..qa.target.size())
            .map(|c| qa.map.iter().position(|&v| v == c).expect("quotients are onto"))
            .collect();
        Hom {
            source: qa.target.clone(),
            target: qb.target.clone(),
            map: reps.iter().map(|&r| qb.apply(t.apply(r))).collect(),
        }
    })?
    .with_labels(members.iter().map(|&p| y.labels()[p].clone()).collect());
    let e = ModelledMap::new(apex.clone(), y.clone(), members, quotients)?;
    Ok((apex, e))
}

/// Pullback of `f: (Y,Q) → (X,P)` and `g: (Z,R) → (X,P)` as the equalizer
/// of `f π₁` and `g π₂` on the product.
pub fn pullback_spaces(f: &ModelledMap, g: &ModelledMap) -> Result<Cone, Error> {
    if f.target != g.target {
        return Err(Error::Precondition("maps must share a target".into()));
    }
    let prod = product_spaces(f.source.sort(), &[f.source.clone(), g.source.clone()])?;
    let a = prod.legs[0].then(f);
    let b = prod.legs[1].then(g);
    let (apex, e) = equalizer_spaces(&a, &b)?;
    let legs = vec![e.then(&prod.legs[0]), e.then(&prod.legs[1])];
    Ok(Cone { apex, legs })
}

fn distinct<T: PartialEq>(xs: &[T]) -> bool {
    xs.iter().enumerate().all(|(i, a)| xs[..i].iter().all(|b| a != b))
}

/// `Hom(∐Xᵢ, W) → ∏ Hom(Xᵢ, W)` is a bijection for every probe `W`.
pub fn verify_coproduct(
    c: &Cocone,
    xs: &[ModelledSpace],
    probes: &[ModelledSpace],
    admissible: Option<ContextId>,
) -> Result<bool, Error> {
    for w in probes {
        let out = enumerate_maps(&c.apex, w, admissible)?;
        let restricted: Vec<Vec<ModelledMap>> = out
            .iter()
            .map(|h| c.legs.iter().map(|l| l.then(h)).collect())
            .collect();
        let mut expected = 1usize;
        for x in xs {
            expected *= enumerate_maps(x, w, admissible)?.len();
        }
        if !distinct(&restricted) || restricted.len() != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Hom(Z, W) → {k : k f = k g}` via `h ↦ h p` is a bijection for every
/// probe `W`.
pub fn verify_coequalizer(
    f: &ModelledMap,
    g: &ModelledMap,
    z: &ModelledSpace,
    p: &ModelledMap,
    probes: &[ModelledSpace],
    admissible: Option<ContextId>,
) -> Result<bool, Error> {
    for w in probes {
        let through: Vec<ModelledMap> = enumerate_maps(z, w, admissible)?
            .iter()
            .map(|h| p.then(h))
            .collect();
        let cocones = enumerate_maps(&f.target, w, admissible)?
            .into_iter()
            .filter(|k| f.then(k) == g.then(k))
            .count();
        if !distinct(&through) || through.len() != cocones {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Hom(W, ∏Xᵢ) → ∏ Hom(W, Xᵢ)` is a bijection for every probe `W`.
pub fn verify_product(
    c: &Cone,
    xs: &[ModelledSpace],
    probes: &[ModelledSpace],
    admissible: Option<ContextId>,
) -> Result<bool, Error> {
    for w in probes {
        let into = enumerate_maps(w, &c.apex, admissible)?;
        let split: Vec<Vec<ModelledMap>> = into
            .iter()
            .map(|h| c.legs.iter().map(|l| h.then(l)).collect())
            .collect();
        let mut expected = 1usize;
        for x in xs {
            expected *= enumerate_maps(w, x, admissible)?.len();
        }
        if !distinct(&split) || split.len() != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Hom(W, E) → {k : f k = g k}` via `h ↦ e h` is a bijection for every
/// probe `W`.
pub fn verify_equalizer(
    f: &ModelledMap,
    g: &ModelledMap,
    e_space: &ModelledSpace,
    e: &ModelledMap,
    probes: &[ModelledSpace],
    admissible: Option<ContextId>,
) -> Result<bool, Error> {
    for w in probes {
        let through: Vec<ModelledMap> = enumerate_maps(w, e_space, admissible)?
            .iter()
            .map(|h| h.then(e))
            .collect();
        let cones = enumerate_maps(w, &f.source, admissible)?
            .into_iter()
            .filter(|k| k.then(f) == k.then(g))
            .count();
        if !distinct(&through) || through.len() != cones {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Hom(W, P) → {(a, b) : f a = g b}` is a bijection for every probe `W`.
pub fn verify_pullback(
    f: &ModelledMap,
    g: &ModelledMap,
    c: &Cone,
    probes: &[ModelledSpace],
    admissible: Option<ContextId>,
) -> Result<bool, Error> {
    for w in probes {
        let split: Vec<(ModelledMap, ModelledMap)> = enumerate_maps(w, &c.apex, admissible)?
            .iter()
            .map(|h| (h.then(&c.legs[0]), h.then(&c.legs[1])))
            .collect();
        let left = enumerate_maps(w, &f.source, admissible)?;
        let right = enumerate_maps(w, &g.source, admissible)?;
        let squares = left
            .iter()
            .map(|a| right.iter().filter(|b| a.then(f) == b.then(g)).count())
            .sum::<usize>();
        if !distinct(&split) || split.len() != squares {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An isomorphism `a → b` of modelled spaces: an order isomorphism of
/// points with every comparison an isomorphism.
pub fn find_space_iso(a: &ModelledSpace, b: &ModelledSpace) -> Option<ModelledMap> {
    if a.sort() != b.sort() || a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    find_perm(a, b, &mut perm, &mut used)
}

fn find_perm(
    a: &ModelledSpace,
    b: &ModelledSpace,
    perm: &mut Vec<usize>,
    used: &mut [bool],
) -> Option<ModelledMap> {
    let p = perm.len();
    if p == a.len() {
        let choices: Vec<Vec<Hom>> = (0..p)
            .map(|x| {
                enumerate_homs(b.stalk(perm[x]), a.stalk(x))
                    .into_iter()
                    .filter(|h| h.is_iso())
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        extend_flats(a, b, perm, &choices, &mut Vec::new(), &mut out);
        return out.into_iter().next();
    }
    for q in 0..b.len() {
        if used[q]
            || b.stalk(q).size() != a.stalk(p).size()
            || (0..p).any(|x| {
                a.poset().leq(x, p) != b.poset().leq(perm[x], q)
                    || a.poset().leq(p, x) != b.poset().leq(q, perm[x])
            })
        {
            continue;
        }
        used[q] = true;
        perm.push(q);
        if let Some(m) = find_perm(a, b, perm, used) {
            return Some(m);
        }
        perm.pop();
        used[q] = false;
    }
    None
}

/// Small T-modelled probe spaces with at most three points.
pub fn standard_probes(ctx: ContextId) -> Vec<ModelledSpace> {
    let candidates: Vec<ModelledSpace> = match ctx.sort() {
        Some(Sort::Lattice) => {
            let mut v = vec![
                ModelledSpace::empty(Sort::Lattice),
                ModelledSpace::point(&chain(2)),
                ModelledSpace::point(&chain(3)),
            ];
            for l in [crate::finmodel::diamond(), chain(3), crate::finmodel::boolean_lattice(2)] {
                if let Ok(s) = crate::spectrum::spec(ctx, &l) {
                    v.push(s.space);
                }
            }
            v
        }
        _ => {
            let z = |n| crate::finmodel::make_zmod(n).expect("positive modulus");
            let mut v = vec![
                ModelledSpace::empty(Sort::Ring),
                ModelledSpace::point(&z(2)),
                ModelledSpace::point(&z(3)),
                ModelledSpace::point(&z(4)),
                ModelledSpace::point(&crate::finmodel::dual_numbers()),
            ];
            for a in [z(6), z(12), z(30)] {
                if let Ok(s) = crate::spectrum::spec(ctx, &a) {
                    v.push(s.space);
                }
            }
            v
        }
    };
    candidates
        .into_iter()
        .filter(|x| x.len() <= 3 && x.is_t_modelled(ctx).unwrap_or(false))
        .collect()
}

/// A coequalizer in the lattice-modelled spaces whose comparisons are not
/// admissible and whose result is not a local-lattice-modelled space: two
/// maps from `(pt, 2)` to two copies of `(pt, 3)` sending the middle element
/// to 1.
pub fn non_admissible_coequalizer() -> (ModelledMap, ModelledMap, ModelledSpace, ModelledMap) {
    let (c2, c3) = (chain(2), chain(3));
    let x = ModelledSpace::point(&c2);
    let y = ModelledSpace::new(Sort::Lattice, Poset::discrete(2), vec![c3.clone(), c3.clone()], |_, _| {
        Hom::identity(&c3)
    })
    .expect("two discrete points");
    let squash = Hom::new(c3.clone(), c2.clone(), vec![0, 1, 1]).expect("0, m, 1 ↦ 0, 1, 1");
    let f = ModelledMap::new(x.clone(), y.clone(), vec![0], vec![squash.clone()]).expect("a map");
    let g = ModelledMap::new(x, y, vec![1], vec![squash]).expect("a map");
    let (z, p) = coequalizer_spaces(&f, &g).expect("coequalizers exist");
    (f, g, z, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmodel::{diamond, is_isomorphic, make_zmod, model_coproduct, ring_product};
    use crate::spectrum::spec;

    fn z(n: usize) -> Model {
        make_zmod(n).unwrap()
    }

    fn discrete(stalks: &[Model]) -> ModelledSpace {
        let s = stalks.to_vec();
        ModelledSpace::new(stalks[0].sort(), Poset::discrete(s.len()), s.clone(), |p, _| {
            Hom::identity(&s[p])
        })
        .unwrap()
    }

    fn ring_probes() -> Vec<ModelledSpace> {
        vec![
            ModelledSpace::empty(Sort::Ring),
            ModelledSpace::point(&z(2)),
            ModelledSpace::point(&z(3)),
            ModelledSpace::point(&z(4)),
            spec(ContextId::Zariski, &z(6)).unwrap().space,
            spec(ContextId::Zariski, &z(12)).unwrap().space,
            discrete(&[z(2), z(2), z(3)]),
        ]
    }

    fn lattice_probes() -> Vec<ModelledSpace> {
        vec![
            ModelledSpace::empty(Sort::Lattice),
            ModelledSpace::point(&chain(2)),
            ModelledSpace::point(&chain(3)),
            spec(ContextId::Dl, &diamond()).unwrap().space,
            spec(ContextId::Dl, &chain(3)).unwrap().space,
        ]
    }

    #[test]
    fn enumerate_maps_small() {
        let pt4 = ModelledSpace::point(&z(4));
        let pt2 = ModelledSpace::point(&z(2));
        // comparisons ℤ/2 → ℤ/4: none
        assert!(enumerate_maps(&pt4, &pt2, None).unwrap().is_empty());
        assert_eq!(enumerate_maps(&pt2, &pt4, None).unwrap().len(), 1);
        let s6 = spec(ContextId::Zariski, &z(6)).unwrap().space;
        // two points into one: each needs ℤ/6 → stalk; one map each way
        assert_eq!(enumerate_maps(&s6, &ModelledSpace::point(&z(6)), None).unwrap().len(), 1);
        let e = ModelledSpace::empty(Sort::Ring);
        assert_eq!(enumerate_maps(&e, &s6, None).unwrap().len(), 1);
        assert!(enumerate_maps(&s6, &e, None).unwrap().is_empty());
    }

    #[test]
    fn coproduct_examples() {
        let e = coproduct_spaces(Sort::Ring, &[]).unwrap();
        assert!(e.apex.is_empty());
        let pts = [ModelledSpace::point(&z(4)), ModelledSpace::point(&z(9))];
        let c = coproduct_spaces(Sort::Ring, &pts).unwrap();
        assert_eq!(c.apex.len(), 2);
        assert!(is_isomorphic(&c.apex.gamma().model, &ring_product(&[4, 9])));
        assert!(c.apex.is_t_modelled(ContextId::Zariski).unwrap());
        assert!(verify_coproduct(&c, &pts, &ring_probes(), None).unwrap());
        assert!(verify_coproduct(&c, &pts, &ring_probes(), Some(ContextId::Zariski)).unwrap());
        let one = coproduct_spaces(Sort::Ring, &pts[..1]).unwrap();
        assert_eq!(one.apex, pts[0]);
        assert!(verify_coproduct(&e, &[], &ring_probes(), None).unwrap());
    }

    #[test]
    fn coequalizer_of_diagonal() {
        let x = ModelledSpace::point(&z(3));
        let y = discrete(&[z(3), z(3)]);
        let f = ModelledMap::new(x.clone(), y.clone(), vec![0], vec![Hom::identity(&z(3))]).unwrap();
        let g = ModelledMap::new(x, y.clone(), vec![1], vec![Hom::identity(&z(3))]).unwrap();
        let (zs, p) = coequalizer_spaces(&f, &g).unwrap();
        assert_eq!(zs.len(), 1);
        assert!(is_isomorphic(zs.stalk(0), &z(3)));
        assert!(zs.is_t_modelled(ContextId::Zariski).unwrap());
        assert!(p.is_admissible(ContextId::Zariski).unwrap());
        assert!(verify_coequalizer(&f, &g, &zs, &p, &ring_probes(), None).unwrap());
        assert!(verify_coequalizer(&f, &g, &zs, &p, &ring_probes(), Some(ContextId::Zariski)).unwrap());
        let (same, q) = coequalizer_spaces(&f, &f).unwrap();
        assert_eq!(same.len(), 2);
        assert!(q.flat.iter().all(|h| h.is_iso()));
    }

    /// Coequalizer sections over every open agree with the equalizer of
    /// sections upstairs.
    #[test]
    fn coequalizer_sections_on_all_opens() {
        let s12 = spec(ContextId::Zariski, &z(12)).unwrap().space;
        let pt = ModelledSpace::point(&z(12));
        let maps = enumerate_maps(&s12, &pt, None).unwrap();
        let f = &maps[0];
        let y = discrete(&[z(12), z(12)]);
        let i0 = ModelledMap::new(pt.clone(), y.clone(), vec![0], vec![Hom::identity(&z(12))]).unwrap();
        let i1 = ModelledMap::new(pt, y.clone(), vec![1], vec![Hom::identity(&z(12))]).unwrap();
        let (a, b) = (f.then(&i0), f.then(&i1));
        let (zs, p) = coequalizer_spaces(&a, &b).unwrap();
        for w in zs.poset().up_sets() {
            let r = zs.sections(&w).unwrap();
            let pre = p.preimage(&w);
            let (qw, _, fw) = a.on_sections(&pre).unwrap();
            let (_, _, gw) = b.on_sections(&pre).unwrap();
            let eq: Vec<Vec<usize>> = qw
                .model
                .elements()
                .filter(|&s| fw.apply(s) == gw.apply(s))
                .map(|s| qw.tuples[s].clone())
                .collect();
            let (_, _, pw) = p.on_sections(&w).unwrap();
            let image: Vec<Vec<usize>> = r.model.elements().map(|s| qw.tuples[pw.apply(s)].clone()).collect();
            let mut sorted = image.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), image.len());
            let mut eq_sorted = eq.clone();
            eq_sorted.sort();
            assert_eq!(sorted, eq_sorted);
        }
    }

    #[test]
    fn non_admissible_analogue() {
        let (f, g, zs, _) = non_admissible_coequalizer();
        assert!(!f.is_admissible(ContextId::Dl).unwrap());
        assert!(!g.is_admissible(ContextId::Dl).unwrap());
        assert_eq!(zs.len(), 1);
        assert_eq!(zs.stalk(0).size(), 5);
        assert!(!zs.is_t_modelled(ContextId::Dl).unwrap());
        assert!(f.source.is_t_modelled(ContextId::Dl).unwrap());
        assert!(f.target.is_t_modelled(ContextId::Dl).unwrap());
    }

    #[test]
    fn product_examples() {
        let p4 = ModelledSpace::point(&z(4));
        let p9 = ModelledSpace::point(&z(9));
        let c = product_spaces(Sort::Ring, &[p4.clone(), p9]).unwrap();
        assert_eq!(c.apex.len(), 1);
        // ℤ/4 ⊗ ℤ/9 = 0
        assert!(c.apex.stalk(0).is_trivial());
        let s6 = spec(ContextId::Zariski, &z(6)).unwrap().space;
        let c = product_spaces(Sort::Ring, &[p4.clone(), s6.clone()]).unwrap();
        let mut sizes: Vec<usize> = c.apex.stalks().iter().map(|m| m.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
        assert!(verify_product(&c, &[p4.clone(), s6], &ring_probes()[..5], None).unwrap());
        assert!(product_spaces(Sort::Ring, &[]).is_err());
        let t = product_spaces(Sort::Lattice, &[]).unwrap();
        assert_eq!(t.apex, terminal_lattice_space());
        let d = spec(ContextId::Dl, &diamond()).unwrap().space;
        let c = product_spaces(Sort::Lattice, &[d.clone(), terminal_lattice_space()]).unwrap();
        assert_eq!(c.apex.len(), d.len());
        for p in 0..d.len() {
            assert!(is_isomorphic(c.apex.stalk(p), d.stalk(p)));
        }
        assert!(verify_product(&c, &[d.clone(), terminal_lattice_space()], &lattice_probes(), None).unwrap());
    }

    /// Product stalks agree with coproducts of sections over the minimal
    /// basic opens `↑z₁ × ↑z₂`.
    #[test]
    fn product_stalks_from_opens() {
        let a = spec(ContextId::Dl, &diamond()).unwrap().space;
        let b = spec(ContextId::Dl, &chain(3)).unwrap().space;
        let c = product_spaces(Sort::Lattice, &[a.clone(), b.clone()]).unwrap();
        for zp in 0..c.apex.len() {
            let (i, j) = (c.legs[0].points[zp], c.legs[1].points[zp]);
            let sa = a.sections(&a.poset().up(i)).unwrap().model;
            let sb = b.sections(&b.poset().up(j)).unwrap().model;
            let co = model_coproduct(&sa, &sb).unwrap().model;
            let here = c.apex.sections(&c.apex.poset().up(zp)).unwrap().model;
            assert!(is_isomorphic(&co, &here));
        }
    }

    #[test]
    fn equalizer_examples() {
        let m = diamond();
        let c3 = chain(3);
        let x = ModelledSpace::point(&m);
        let y = ModelledSpace::point(&c3);
        let homs = enumerate_homs(&c3, &m);
        assert!(homs.len() >= 2);
        for a in &homs {
            for b in &homs {
                let f = ModelledMap::new(x.clone(), y.clone(), vec![0], vec![a.clone()]).unwrap();
                let g = ModelledMap::new(x.clone(), y.clone(), vec![0], vec![b.clone()]).unwrap();
                let (e, inc) = equalizer_spaces(&f, &g).unwrap();
                if a == b {
                    assert_eq!(e.stalk(0), &m);
                } else {
                    assert!(e.stalk(0).size() < m.size());
                }
                assert!(verify_equalizer(&f, &g, &e, &inc, &lattice_probes(), None).unwrap());
            }
        }
        // projections of a product onto equal factors: equalizer is the diagonal
        let s = spec(ContextId::Dl, &chain(3)).unwrap().space;
        let c = product_spaces(Sort::Lattice, &[s.clone(), s.clone()]).unwrap();
        let (e, inc) = equalizer_spaces(&c.legs[0], &c.legs[1]).unwrap();
        assert_eq!(e.len(), s.len());
        assert!(verify_equalizer(&c.legs[0], &c.legs[1], &e, &inc, &lattice_probes(), None).unwrap());
    }

    #[test]
    fn pullback_example() {
        let base = ModelledSpace::point(&chain(2));
        let d = spec(ContextId::Dl, &diamond()).unwrap().space;
        let c = spec(ContextId::Dl, &chain(3)).unwrap().space;
        let f = &enumerate_maps(&d, &base, None).unwrap()[0];
        let g = &enumerate_maps(&c, &base, None).unwrap()[0];
        let pb = pullback_spaces(f, g).unwrap();
        assert_eq!(pb.apex.len(), d.len() * c.len());
        assert!(verify_pullback(f, g, &pb, &lattice_probes()[..4], None).unwrap());
    }
}
