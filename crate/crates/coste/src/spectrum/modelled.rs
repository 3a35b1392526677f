use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::Poset;
use crate::context::{is_admissible, is_t_model, ContextId};
use crate::finmodel::{hom_from_json, model_from_json, model_on_tuples, model_to_json, Hom, Model, Sort};
use crate::Error;

struct Inner {
    sort: Sort,
    poset: Poset,
    stalks: Vec<Model>,
    labels: Vec<String>,
    trans: Vec<Vec<Option<Hom>>>,
}

/// A finite T₀-modelled space: a poset of points with a stalk at each point
/// and a transition homomorphism `P_x → P_y` for each `x ≤ y`. On a finite
/// space this is the same as a sheaf of models; sections over an open are
/// computed as limits.
#[derive(Clone)]
pub struct ModelledSpace(Arc<Inner>);

impl PartialEq for ModelledSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.sort == other.0.sort
                && self.0.poset == other.0.poset
                && self.0.stalks == other.0.stalks
                && self.0.trans == other.0.trans)
    }
}

impl fmt::Debug for ModelledSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<usize> = self.stalks().iter().map(|m| m.size()).collect();
        write!(f, "ModelledSpace({} points, stalk sizes {:?})", self.len(), sizes)
    }
}

impl ModelledSpace {
    /// Builds a space from a transition for every pair `p ≤ q` and checks
    /// functoriality.
    pub fn new(
        sort: Sort,
        poset: Poset,
        stalks: Vec<Model>,
        mut trans: impl FnMut(usize, usize) -> Hom,
    ) -> Result<ModelledSpace, Error> {
        let n = poset.len();
        if stalks.len() != n {
            return Err(Error::Invalid("one stalk per point is required".into()));
        }
        if stalks.iter().any(|m| m.sort() != sort) {
            return Err(Error::SortMismatch);
        }
        let table: Vec<Vec<Option<Hom>>> = (0..n)
            .map(|p| {
                (0..n)
                    .map(|q| poset.leq(p, q).then(|| trans(p, q)))
                    .collect()
            })
            .collect();
        let space = ModelledSpace(Arc::new(Inner {
            sort,
            labels: (0..n).map(|i| i.to_string()).collect(),
            poset,
            stalks,
            trans: table,
        }));
        space.validate()?;
        Ok(space)
    }

    /// Builds a space from transitions along covering pairs only; the rest
    /// are composites, which must not depend on the path.
    pub fn from_covers(
        sort: Sort,
        poset: Poset,
        stalks: Vec<Model>,
        edges: &[(usize, usize, Hom)],
    ) -> Result<ModelledSpace, Error> {
        let n = poset.len();
        let covers = poset.covers();
        for &(p, q) in &covers {
            if !edges.iter().any(|e| e.0 == p && e.1 == q) {
                return Err(Error::Input(format!("missing transition {p} -> {q}")));
            }
        }
        if edges.iter().any(|e| !covers.contains(&(e.0, e.1))) {
            return Err(Error::Input("transitions must be given along covering pairs".into()));
        }
        for (p, q, h) in edges {
            if stalks.get(*p) != Some(&h.source) || stalks.get(*q) != Some(&h.target) {
                return Err(Error::Invalid(format!("transition {p} -> {q} has the wrong ends")));
            }
        }
        let mut memo: Vec<Vec<Option<Hom>>> = vec![vec![None; n]; n];
        fn path(
            p: usize,
            q: usize,
            poset: &Poset,
            stalks: &[Model],
            edges: &[(usize, usize, Hom)],
            memo: &mut Vec<Vec<Option<Hom>>>,
        ) -> Hom {
            if let Some(h) = &memo[p][q] {
                return h.clone();
            }
            let h = if p == q {
                Hom::identity(&stalks[p])
            } else {
                let (_, c, e) = edges
                    .iter()
                    .find(|(a, c, _)| *a == p && poset.leq(*c, q))
                    .expect("some cover of p lies below q");
                e.then(&path(*c, q, poset, stalks, edges, memo))
            };
            memo[p][q] = Some(h.clone());
            h
        }
        let poset2 = poset.clone();
        let stalks2 = stalks.clone();
        ModelledSpace::new(sort, poset, stalks, |p, q| {
            path(p, q, &poset2, &stalks2, edges, &mut memo)
        })
    }

    pub fn point(m: &Model) -> ModelledSpace {
        ModelledSpace::new(m.sort(), Poset::discrete(1), vec![m.clone()], |_, _| {
            Hom::identity(m)
        })
        .expect("a one-point space is valid")
    }

    pub fn empty(sort: Sort) -> ModelledSpace {
        ModelledSpace::new(sort, Poset::discrete(0), vec![], |_, _| unreachable!())
            .expect("the empty space is valid")
    }

    pub fn with_labels(self, labels: Vec<String>) -> ModelledSpace {
        assert_eq!(labels.len(), self.len());
        let inner = &*self.0;
        ModelledSpace(Arc::new(Inner {
            sort: inner.sort,
            poset: inner.poset.clone(),
            stalks: inner.stalks.clone(),
            labels,
            trans: inner.trans.clone(),
        }))
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.len();
        for p in 0..n {
            for q in 0..n {
                let Some(h) = &self.0.trans[p][q] else { continue };
                if h.source != self.0.stalks[p] || h.target != self.0.stalks[q] {
                    return Err(Error::Invalid(format!("transition {p} -> {q} has the wrong ends")));
                }
                if !h.preserves_structure() {
                    return Err(Error::Invalid(format!("transition {p} -> {q} is not a homomorphism")));
                }
                if p == q && *h != Hom::identity(&self.0.stalks[p]) {
                    return Err(Error::Invalid(format!("transition at {p} is not the identity")));
                }
                for r in 0..n {
                    if let Some(k) = &self.0.trans[q][r] {
                        if Some(h.then(k)) != self.0.trans[p][r] {
                            return Err(Error::Invalid(format!(
                                "transitions {p} -> {q} -> {r} do not compose"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn sort(&self) -> Sort {
        self.0.sort
    }

    pub fn poset(&self) -> &Poset {
        &self.0.poset
    }

    pub fn len(&self) -> usize {
        self.0.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stalks(&self) -> &[Model] {
        &self.0.stalks
    }

    pub fn stalk(&self, p: usize) -> &Model {
        &self.0.stalks[p]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    /// The transition `P_p → P_q`; panics unless `p ≤ q`.
    pub fn transition(&self, p: usize, q: usize) -> &Hom {
        self.0.trans[p][q].as_ref().expect("transition needs p ≤ q")
    }

    pub fn whole(&self) -> Vec<bool> {
        vec![true; self.len()]
    }

    pub fn is_t_modelled(&self, ctx: ContextId) -> Result<bool, Error> {
        for m in self.stalks() {
            if !is_t_model(ctx, m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Compatible families over the up-set `open`.
    pub fn sections(&self, open: &[bool]) -> Result<Sections, Error> {
        if !self.poset().is_up_set(open) {
            return Err(Error::Precondition("sections need an open (up-)set".into()));
        }
        let points: Vec<usize> = (0..self.len()).filter(|&p| open[p]).collect();
        let pos: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let minimal = self.poset().minimal(open);
        let mut tuples = Vec::new();
        let mut cur: Vec<Option<usize>> = vec![None; points.len()];
        self.extend(&minimal, 0, &points, &pos, &mut cur, &mut tuples);
        tuples.sort();
        Ok(Sections::new(self, open.to_vec(), points, tuples))
    }

    fn extend(
        &self,
        minimal: &[usize],
        k: usize,
        points: &[usize],
        pos: &HashMap<usize, usize>,
        cur: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(&m) = minimal.get(k) else {
            out.push(cur.iter().map(|v| v.expect("every point lies over a minimal one")).collect());
            return;
        };
        for s in self.stalk(m).elements() {
            let mut set = Vec::new();
            let mut ok = true;
            for &q in points.iter().filter(|&&q| self.poset().leq(m, q)) {
                let v = self.transition(m, q).apply(s);
                let i = pos[&q];
                match cur[i] {
                    Some(w) if w != v => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        cur[i] = Some(v);
                        set.push(i);
                    }
                }
            }
            if ok {
                self.extend(minimal, k + 1, points, pos, cur, out);
            }
            for i in set {
                cur[i] = None;
            }
        }
    }

    pub fn gamma(&self) -> Sections {
        self.sections(&self.whole()).expect("the whole space is open")
    }

    pub fn to_json(&self) -> Value {
        let transitions: Vec<Value> = self
            .poset()
            .covers()
            .into_iter()
            .map(|(p, q)| json!({"from": p, "to": q, "map": self.transition(p, q).map}))
            .collect();
        json!({
            "sort": self.sort(),
            "labels": self.labels(),
            "order": self.poset().matrix(),
            "stalks": self.stalks().iter().map(model_to_json).collect::<Vec<_>>(),
            "transitions": transitions,
        })
    }

    /// Parses `{"stalks":[…], "order":[[…]] | "covers":[[p,q],…],
    /// "transitions":[{"from":p,"to":q,"map":[…]}], "sort":…, "labels":[…]}`.
    /// The order defaults to discrete and transitions are given along covering
    /// pairs.
    pub fn from_json(v: &Value) -> Result<ModelledSpace, Error> {
        let bad = |m: &str| Error::Input(m.to_string());
        let stalks = v["stalks"]
            .as_array()
            .ok_or_else(|| bad("a space needs a stalks array"))?
            .iter()
            .map(model_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        let n = stalks.len();
        let sort = match v.get("sort") {
            Some(s) => serde_json::from_value(s.clone()).map_err(|e| bad(&e.to_string()))?,
            None => stalks
                .first()
                .map(|m| m.sort())
                .ok_or_else(|| bad("an empty space needs an explicit sort"))?,
        };
        let poset = if let Some(o) = v.get("order") {
            let leq: Vec<Vec<bool>> = serde_json::from_value(o.clone()).map_err(|e| bad(&e.to_string()))?;
            Poset::new(leq)?
        } else if let Some(c) = v.get("covers") {
            let pairs: Vec<(usize, usize)> =
                serde_json::from_value(c.clone()).map_err(|e| bad(&e.to_string()))?;
            if pairs.iter().any(|&(a, b)| a >= n || b >= n) {
                return Err(bad("cover pair outside the point set"));
            }
            Poset::from_relation(n, &pairs)?
        } else {
            Poset::discrete(n)
        };
        if poset.len() != n {
            return Err(bad("order size differs from the number of stalks"));
        }
        let mut edges = Vec::new();
        if let Some(ts) = v.get("transitions") {
            for t in ts.as_array().ok_or_else(|| bad("transitions must be an array"))? {
                let p = t["from"].as_u64().ok_or_else(|| bad("transition needs from"))? as usize;
                let q = t["to"].as_u64().ok_or_else(|| bad("transition needs to"))? as usize;
                if p >= n || q >= n {
                    return Err(bad("transition outside the point set"));
                }
                edges.push((p, q, hom_from_json(t, &stalks[p], &stalks[q])?));
            }
        }
        let space = ModelledSpace::from_covers(sort, poset, stalks, &edges)?;
        match v.get("labels") {
            Some(l) => {
                let labels: Vec<String> = serde_json::from_value(l.clone()).map_err(|e| bad(&e.to_string()))?;
                if labels.len() != n {
                    return Err(bad("one label per point"));
                }
                Ok(space.with_labels(labels))
            }
            None => Ok(space),
        }
    }
}

/// The model of sections over an open, as tuples indexed by the open's
/// points in increasing order.
#[derive(Clone, Debug)]
pub struct Sections {
    pub open: Vec<bool>,
    pub points: Vec<usize>,
    pub tuples: Vec<Vec<usize>>,
    pub model: Model,
    index: HashMap<Vec<usize>, usize>,
}

impl PartialEq for Sections {
    fn eq(&self, other: &Self) -> bool {
        self.open == other.open && self.tuples == other.tuples && self.model == other.model
    }
}

impl Sections {
    pub(crate) fn new(
        space: &ModelledSpace,
        open: Vec<bool>,
        points: Vec<usize>,
        tuples: Vec<Vec<usize>>,
    ) -> Sections {
        let factors: Vec<Model> = points.iter().map(|&p| space.stalk(p).clone()).collect();
        let model = model_on_tuples(space.sort(), &factors, &tuples);
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Sections {
            open,
            points,
            tuples,
            model,
            index,
        }
    }

    pub fn lookup(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// The value of section `s` at point `p` of the space.
    pub fn component(&self, s: usize, p: usize) -> usize {
        let i = self.points.iter().position(|&q| q == p).expect("point lies in the open");
        self.tuples[s][i]
    }

    /// Evaluation at a point of the open.
    pub fn to_stalk(&self, space: &ModelledSpace, p: usize) -> Hom {
        let i = self.points.iter().position(|&q| q == p).expect("point lies in the open");
        Hom {
            source: self.model.clone(),
            target: space.stalk(p).clone(),
            map: self.tuples.iter().map(|t| t[i]).collect(),
        }
    }

    /// Restriction to the sections over a smaller open.
    pub fn restrict_to(&self, smaller: &Sections) -> Hom {
        let idx: Vec<usize> = smaller
            .points
            .iter()
            .map(|p| self.points.iter().position(|q| q == p).expect("opens are nested"))
            .collect();
        Hom {
            source: self.model.clone(),
            target: smaller.model.clone(),
            map: self
                .tuples
                .iter()
                .map(|t| {
                    let u: Vec<usize> = idx.iter().map(|&i| t[i]).collect();
                    smaller.lookup(&u).expect("restrictions of sections are sections")
                })
                .collect(),
        }
    }
}

/// A morphism `(f, f♭): (X,P) → (Y,Q)`: a monotone point map and, for each
/// `x`, a comparison `f♭_x: Q_{f x} → P_x` natural in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelledMap {
    pub source: ModelledSpace,
    pub target: ModelledSpace,
    pub points: Vec<usize>,
    pub flat: Vec<Hom>,
}

impl ModelledMap {
    pub fn new(
        source: ModelledSpace,
        target: ModelledSpace,
        points: Vec<usize>,
        flat: Vec<Hom>,
    ) -> Result<ModelledMap, Error> {
        if source.sort() != target.sort() {
            return Err(Error::SortMismatch);
        }
        if !source.poset().is_monotone(target.poset(), &points) {
            return Err(Error::Invalid("point map is not monotone".into()));
        }
        if flat.len() != source.len() {
            return Err(Error::Invalid("one comparison per source point".into()));
        }
        for x in 0..source.len() {
            let h = &flat[x];
            if h.source != *target.stalk(points[x]) || h.target != *source.stalk(x) {
                return Err(Error::Invalid(format!("comparison at {x} has the wrong ends")));
            }
            if !h.preserves_structure() {
                return Err(Error::Invalid(format!("comparison at {x} is not a homomorphism")));
            }
        }
        let f = ModelledMap {
            source,
            target,
            points,
            flat,
        };
        if !f.is_natural() {
            return Err(Error::Invalid("comparisons are not natural".into()));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: ModelledSpace,
        target: ModelledSpace,
        points: Vec<usize>,
        flat: Vec<Hom>,
    ) -> ModelledMap {
        let f = ModelledMap {
            source,
            target,
            points,
            flat,
        };
        debug_assert!(f.is_natural());
        f
    }

    fn is_natural(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        (0..s.len()).all(|x| {
            (0..s.len()).filter(|&y| s.poset().leq(x, y)).all(|y| {
                let (fx, fy) = (self.points[x], self.points[y]);
                t.transition(fx, fy).then(&self.flat[y]) == self.flat[x].then(s.transition(x, y))
            })
        })
    }

    pub fn identity(x: &ModelledSpace) -> ModelledMap {
        ModelledMap {
            source: x.clone(),
            target: x.clone(),
            points: (0..x.len()).collect(),
            flat: x.stalks().iter().map(Hom::identity).collect(),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ModelledMap) -> ModelledMap {
        assert!(self.target == next.source, "composing non-matching maps");
        ModelledMap {
            source: self.source.clone(),
            target: next.target.clone(),
            points: self.points.iter().map(|&y| next.points[y]).collect(),
            flat: (0..self.source.len())
                .map(|x| next.flat[self.points[x]].then(&self.flat[x]))
                .collect(),
        }
    }

    pub fn preimage(&self, open: &[bool]) -> Vec<bool> {
        self.points.iter().map(|&y| open[y]).collect()
    }

    /// `Q(W) → P(f⁻¹W)`.
    pub fn on_sections(&self, open: &[bool]) -> Result<(Sections, Sections, Hom), Error> {
        let qw = self.target.sections(open)?;
        let pw = self.source.sections(&self.preimage(open))?;
        let map = qw
            .tuples
            .iter()
            .map(|t| {
                let u: Vec<usize> = pw
                    .points
                    .iter()
                    .map(|&x| {
                        let y = self.points[x];
                        let i = qw.points.iter().position(|&q| q == y).expect("f x lies in W");
                        self.flat[x].apply(t[i])
                    })
                    .collect();
                pw.lookup(&u).expect("images of sections are sections")
            })
            .collect();
        let h = Hom {
            source: qw.model.clone(),
            target: pw.model.clone(),
            map,
        };
        Ok((qw, pw, h))
    }

    /// `Γ(f): Γ(Y,Q) → Γ(X,P)`.
    pub fn gamma(&self) -> Hom {
        self.on_sections(&self.target.whole())
            .expect("the whole space is open")
            .2
    }

    /// Whether every comparison is admissible.
    pub fn is_admissible(&self, ctx: ContextId) -> Result<bool, Error> {
        for h in &self.flat {
            if !is_admissible(ctx, h)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points,
            "flat": self.flat.iter().map(|h| &h.map).collect::<Vec<_>>(),
        })
    }

    /// Parses `{"points":[…], "flat":[[…],…]}` between the given spaces.
    pub fn from_json(v: &Value, source: &ModelledSpace, target: &ModelledSpace) -> Result<ModelledMap, Error> {
        let bad = |m: &str| Error::Input(m.to_string());
        let points: Vec<usize> =
            serde_json::from_value(v["points"].clone()).map_err(|e| bad(&e.to_string()))?;
        let maps: Vec<Vec<usize>> =
            serde_json::from_value(v["flat"].clone()).map_err(|e| bad(&e.to_string()))?;
        if points.len() != source.len() || maps.len() != source.len() {
            return Err(bad("a map needs one point and one comparison per source point"));
        }
        if points.iter().any(|&y| y >= target.len()) {
            return Err(bad("point map leaves the target"));
        }
        let flat = maps
            .into_iter()
            .enumerate()
            .map(|(x, m)| {
                Hom::new(target.stalk(points[x]).clone(), source.stalk(x).clone(), m)
                    .map_err(|e| bad(&format!("comparison at {x}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ModelledMap::new(source.clone(), target.clone(), points, flat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmodel::{chain, enumerate_homs, is_isomorphic, make_zmod, Sort};

    fn two_chain_space() -> ModelledSpace {
        // 3-chain ≤ 2-chain via the surjection 0,1,1
        let c3 = chain(3);
        let c2 = chain(2);
        let h = Hom::new(c3.clone(), c2.clone(), vec![0, 1, 1]).unwrap();
        ModelledSpace::from_covers(Sort::Lattice, Poset::chain(2), vec![c3, c2], &[(0, 1, h)]).unwrap()
    }

    #[test]
    fn sections_of_small_spaces() {
        let x = two_chain_space();
        let g = x.gamma();
        assert_eq!(g.model.size(), 3);
        assert_eq!(x.sections(&[false, true]).unwrap().model.size(), 2);
        assert!(x.sections(&[true, false]).is_err());
        let empty = x.sections(&[false, false]).unwrap();
        assert!(empty.model.is_trivial());
        let z = ModelledSpace::new(
            Sort::Ring,
            Poset::discrete(2),
            vec![make_zmod(4).unwrap(), make_zmod(3).unwrap()],
            |p, _| Hom::identity(&[make_zmod(4).unwrap(), make_zmod(3).unwrap()][p]),
        )
        .unwrap();
        assert!(is_isomorphic(&z.gamma().model, &make_zmod(12).unwrap()));
    }

    /// Sections by brute force over all tuples of stalk elements.
    #[test]
    fn sections_match_brute_force() {
        let x = two_chain_space();
        for open in x.poset().up_sets() {
            let pts: Vec<usize> = (0..x.len()).filter(|&p| open[p]).collect();
            let mut all: Vec<Vec<usize>> = vec![vec![]];
            for &p in &pts {
                all = all
                    .into_iter()
                    .flat_map(|t| {
                        x.stalk(p).elements().map(move |v| {
                            let mut u = t.clone();
                            u.push(v);
                            u
                        })
                    })
                    .collect();
            }
            let want: Vec<Vec<usize>> = all
                .into_iter()
                .filter(|t| {
                    pts.iter().enumerate().all(|(i, &p)| {
                        pts.iter()
                            .enumerate()
                            .all(|(j, &q)| !x.poset().leq(p, q) || x.transition(p, q).apply(t[i]) == t[j])
                    })
                })
                .collect();
            assert_eq!(x.sections(&open).unwrap().tuples, want);
        }
    }

    #[test]
    fn rejects_bad_transitions() {
        let c3 = chain(3);
        let c2 = chain(2);
        let h = Hom::new(c3.clone(), c2.clone(), vec![0, 1, 1]).unwrap();
        assert!(ModelledSpace::from_covers(Sort::Lattice, Poset::chain(2), vec![c3, c2], &[]).is_err());
        assert!(ModelledSpace::from_covers(
            Sort::Lattice,
            Poset::discrete(2),
            vec![chain(3), chain(2)],
            &[(0, 1, h)]
        )
        .is_err());
    }

    #[test]
    fn maps_compose_and_act_on_sections() {
        let x = two_chain_space();
        let pt = ModelledSpace::point(&chain(2));
        // collapse onto a point with stalk 2: comparisons 2 → 3-chain and 2 → 2
        let f2 = |m: &Model| enumerate_homs(&chain(2), m);
        for a in f2(x.stalk(0)) {
            for b in f2(x.stalk(1)) {
                let f = ModelledMap::new(x.clone(), pt.clone(), vec![0, 0], vec![a.clone(), b.clone()]);
                let natural = a.then(x.transition(0, 1)) == b;
                assert_eq!(f.is_ok(), natural);
                if let Ok(f) = f {
                    let id = ModelledMap::identity(&x);
                    assert_eq!(id.then(&f), f);
                    let g = f.gamma();
                    assert_eq!(g.source.size(), 2);
                    assert_eq!(g.target.size(), 3);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let x = two_chain_space();
        let back = ModelledSpace::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
        let f = ModelledMap::identity(&x);
        assert_eq!(ModelledMap::from_json(&f.to_json(), &x, &x).unwrap(), f);
        let e = ModelledSpace::empty(Sort::Ring);
        assert_eq!(ModelledSpace::from_json(&e.to_json()).unwrap(), e);
    }
}
