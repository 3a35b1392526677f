//! Relative spectra of modelled spaces over a T-modelled base, the counit,
//! transposition across the adjunction, and limits in the admissible
//! category.

use std::collections::HashMap;

use serde::Serialize;

use crate::context::{etale_semilattice, is_admissible, pushforward, ContextId, EtaleSemilattice};
use crate::finmodel::{congruence_leq, Hom, Model, Sort};
use crate::space::{
    enumerate_maps, equalizer_spaces, product_spaces, pullback_spaces, verify_pullback, Cone,
};
use crate::spectrum::{amalgamate, spec, ModelledMap, ModelledSpace, Poset, Sections, SpecSpace, UP_SET_LIMIT};
use crate::Error;

/// Above this many opens of the total space only the minimal opens `↑y`
/// contribute basic opens.
pub const OPEN_LIMIT: usize = 64;

/// `D(V, λ)` for an open `V` of the total space and `λ ∈ 𝒱_{QV}`.
#[derive(Clone, Debug)]
pub struct RelBasicOpen {
    /// Index into [`RelSpec::opens`].
    pub open: usize,
    pub lambda: usize,
    pub members: Vec<bool>,
}

/// Sections `QV` over an open of the total space with their semilattice.
#[derive(Clone, Debug)]
pub struct OpenData {
    pub sections: Sections,
    pub v: EtaleSemilattice,
}

/// `Spec(Y,Q)` over zero or more legs `(Y,Q) → (Xᵢ,Pᵢ)`.
#[derive(Clone, Debug)]
pub struct RelSpec {
    pub ctx: ContextId,
    pub total: ModelledSpace,
    pub legs: Vec<ModelledMap>,
    /// `Spec(Q_y)` for each point `y`.
    pub local: Vec<SpecSpace>,
    /// `(y, I)` with `I` an index into `local[y].v`.
    pub points: Vec<(usize, usize)>,
    pub space: ModelledSpace,
    /// `g: Spec(Y,Q) → (Y,Q)`.
    pub counit: ModelledMap,
    /// `g` followed by each leg.
    pub structure: Vec<ModelledMap>,
    pub opens: Vec<OpenData>,
    pub basic_opens: Vec<RelBasicOpen>,
}

/// The relative spectrum of `f: (Y,Q) → (X,P)`.
pub fn relative_spec(ctx: ContextId, f: &ModelledMap) -> Result<RelSpec, Error> {
    cone_spec(ctx, &f.source, std::slice::from_ref(f))
}

/// `Spec(Y,Q)` with no base.
pub fn unbased_spec(ctx: ContextId, y: &ModelledSpace) -> Result<RelSpec, Error> {
    cone_spec(ctx, y, &[])
}

/// The spectrum of a cone: points `(y, I)` whose ideal pulls back to
/// `{id}` along every leg.
pub fn cone_spec(ctx: ContextId, y: &ModelledSpace, legs: &[ModelledMap]) -> Result<RelSpec, Error> {
    if !ctx.accepts(y.sort()) {
        return Err(Error::SortMismatch);
    }
    for leg in legs {
        if leg.source != *y {
            return Err(Error::Precondition("every leg must start at the total space".into()));
        }
        if !leg.target.is_t_modelled(ctx)? {
            return Err(Error::Precondition("the base is not T-modelled".into()));
        }
    }
    let local = y
        .stalks()
        .iter()
        .map(|q| spec(ctx, q))
        .collect::<Result<Vec<_>, _>>()?;
    let mut base_v: HashMap<(usize, usize), EtaleSemilattice> = HashMap::new();
    let mut points = Vec::new();
    for p in 0..y.len() {
        let vq = &local[p].v;
        for &ideal in &local[p].points {
            let mut ok = true;
            for (i, leg) in legs.iter().enumerate() {
                let x = leg.points[p];
                if let std::collections::hash_map::Entry::Vacant(e) = base_v.entry((i, x)) {
                    e.insert(etale_semilattice(ctx, leg.target.stalk(x))?);
                }
                let vp = &base_v[&(i, x)];
                ok &= (1..vp.len()).all(|l| !vq.leq[pushforward(&leg.flat[p], vp, l, vq)][ideal]);
            }
            if ok {
                points.push((p, ideal));
            }
        }
    }

    let opens_list: Vec<Vec<bool>> = if y.len() <= UP_SET_LIMIT && y.poset().up_sets().len() <= OPEN_LIMIT {
        y.poset().up_sets()
    } else {
        let mut v: Vec<Vec<bool>> = (0..y.len()).map(|p| y.poset().up(p)).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut opens = Vec::new();
    let mut basic_opens = Vec::new();
    for (k, w) in opens_list.iter().enumerate() {
        let sections = y.sections(w)?;
        let v = etale_semilattice(ctx, &sections.model)?;
        let restrictions: HashMap<usize, Hom> = sections
            .points
            .iter()
            .map(|&p| (p, sections.to_stalk(y, p)))
            .collect();
        for lambda in 0..v.len() {
            let members = points
                .iter()
                .map(|&(p, ideal)| {
                    w[p] && {
                        let vq = &local[p].v;
                        vq.leq[pushforward(&restrictions[&p], &v, lambda, vq)][ideal]
                    }
                })
                .collect();
            basic_opens.push(RelBasicOpen { open: k, lambda, members });
        }
        opens.push(OpenData { sections, v });
    }

    let n = points.len();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| basic_opens.iter().all(|d| !d.members[a] || d.members[b]))
                .collect()
        })
        .collect();
    for a in 0..n {
        for b in 0..n {
            let ((p, i), (q, j)) = (points[a], points[b]);
            let closed = y.poset().leq(p, q)
                && local[q].v.leq[pushforward(y.transition(p, q), &local[p].v, i, &local[q].v)][j];
            if closed != leq[a][b] {
                return Err(Error::Verification(format!(
                    "specialization from the basis disagrees with the transported ideals at {a}, {b}"
                )));
            }
        }
    }
    let poset = Poset::new(leq)?;
    let arrow = |a: usize| &local[points[a].0].v.elements[points[a].1];
    let stalks: Vec<Model> = (0..n).map(|a| arrow(a).codomain().clone()).collect();
    let space = ModelledSpace::new(y.sort(), poset, stalks, |a, b| {
        let t = y.transition(points[a].0, points[b].0);
        Hom {
            source: arrow(a).codomain().clone(),
            target: arrow(b).codomain().clone(),
            map: arrow(a).reps.iter().map(|&c| arrow(b).hom.apply(t.apply(c))).collect(),
        }
    })?
    .with_labels(
        points
            .iter()
            .map(|&(p, i)| format!("{}|{}", y.labels()[p], local[p].v.elements[i].tag))
            .collect(),
    );
    let counit = ModelledMap::new(
        space.clone(),
        y.clone(),
        points.iter().map(|&(p, _)| p).collect(),
        (0..n).map(|a| arrow(a).hom.clone()).collect(),
    )?;
    let structure: Vec<ModelledMap> = legs.iter().map(|l| counit.then(l)).collect();
    for s in &structure {
        if !s.is_admissible(ctx)? {
            return Err(Error::Verification("the structure map is not admissible".into()));
        }
    }
    Ok(RelSpec {
        ctx,
        total: y.clone(),
        legs: legs.to_vec(),
        local,
        points,
        space,
        counit,
        structure,
        opens,
        basic_opens,
    })
}

impl RelSpec {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_of(&self, y: usize, ideal: usize) -> Option<usize> {
        self.points.iter().position(|&p| p == (y, ideal))
    }

    /// Sections over `w` by the local-agreement formula over the basic
    /// opens `D(V, λ) ⊆ w`.
    pub fn sections_formula(&self, w: &[bool]) -> Result<Sections, Error> {
        if !self.space.poset().is_up_set(w) {
            return Err(Error::Precondition("sections need an open (up-)set".into()));
        }
        let members: Vec<usize> = (0..self.len()).filter(|&a| w[a]).collect();
        let mut germs: Vec<Vec<Option<usize>>> = Vec::new();
        for d in &self.basic_opens {
            if (0..self.len()).any(|a| d.members[a] && !w[a]) {
                continue;
            }
            let od = &self.opens[d.open];
            for &t in &od.v.elements[d.lambda].reps {
                germs.push(
                    members
                        .iter()
                        .map(|&a| {
                            d.members[a].then(|| {
                                let (z, j) = self.points[a];
                                let qz = od.sections.component(t, z);
                                self.local[z].v.elements[j].hom.apply(qz)
                            })
                        })
                        .collect(),
                );
            }
        }
        germs.sort();
        germs.dedup();
        let mut out = amalgamate(&germs, members.len());
        out.sort();
        out.dedup();
        Ok(Sections::new(&self.space, w.to_vec(), members, out))
    }

    /// The transpose `h̄: (Z,R) → Spec(Y,Q)` of `h: (Z,R) → (Y,Q)`, with
    /// `h̄(z) = (h z, J_z)` and `J_z` the largest étale arrow through which
    /// `h♭_z` factors.
    pub fn transpose(&self, h: &ModelledMap) -> Result<ModelledMap, Error> {
        if h.target != self.total {
            return Err(Error::Precondition("the map must land in the total space".into()));
        }
        if !h.source.is_t_modelled(self.ctx)? {
            return Err(Error::Precondition("the source is not T-modelled".into()));
        }
        for leg in &self.legs {
            if !h.then(leg).is_admissible(self.ctx)? {
                return Err(Error::Precondition("the composite to the base is not admissible".into()));
            }
        }
        let mut points = Vec::new();
        let mut flat = Vec::new();
        for z in 0..h.source.len() {
            let y = h.points[z];
            let v = &self.local[y].v;
            let kernel = h.flat[z].kernel();
            let j = (0..v.len())
                .filter(|&l| congruence_leq(&v.elements[l].kernel, &kernel))
                .fold(v.bottom(), |m, l| v.join[m][l]);
            let a = self.point_of(y, j).ok_or_else(|| {
                Error::Verification(format!("the transpose at {z} misses the relative spectrum"))
            })?;
            let comparison = Hom::new(
                v.codomain(j).clone(),
                h.source.stalk(z).clone(),
                v.elements[j].reps.iter().map(|&c| h.flat[z].apply(c)).collect(),
            )?;
            if !is_admissible(self.ctx, &comparison)? {
                return Err(Error::Verification(format!("the comparison at {z} is not admissible")));
            }
            points.push(a);
            flat.push(comparison);
        }
        ModelledMap::new(h.source.clone(), self.space.clone(), points, flat)
    }
}

/// One triangle of the adjunction census.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleCount {
    pub probe_points: usize,
    /// Maps `(Z,R) → (Y,Q)` over the base.
    pub left: usize,
    /// Admissible maps `(Z,R) → Spec(Y,Q)` over the base.
    pub right: usize,
    pub bijective: bool,
}

/// Compares `Hom_{T₀/(X,P)}((Z,R),(Y,Q))` and
/// `Hom_{𝔸/(X,P)}((Z,R), Spec(Y,Q))` for every admissible `k: Z → X`.
pub fn adjunction_census(rs: &RelSpec, z: &ModelledSpace) -> Result<Vec<TriangleCount>, Error> {
    let f = rs
        .legs
        .first()
        .ok_or_else(|| Error::Precondition("the census needs a base".into()))?;
    let lhs = enumerate_maps(z, &rs.total, None)?;
    let rhs = enumerate_maps(z, &rs.space, Some(rs.ctx))?;
    let mut out = Vec::new();
    for k in enumerate_maps(z, &f.target, Some(rs.ctx))? {
        let left: Vec<&ModelledMap> = lhs.iter().filter(|h| h.then(f) == k).collect();
        let right: Vec<&ModelledMap> = rhs.iter().filter(|m| m.then(&rs.structure[0]) == k).collect();
        let mut bijective = left.len() == right.len();
        for h in &left {
            let t = rs.transpose(h)?;
            bijective &= t.then(&rs.counit) == **h && right.contains(&&t);
        }
        for m in &right {
            bijective &= rs.transpose(&m.then(&rs.counit))? == **m;
        }
        out.push(TriangleCount {
            probe_points: z.len(),
            left: left.len(),
            right: right.len(),
            bijective,
        });
    }
    Ok(out)
}

/// `transpose(g) = id`.
pub fn counit_transposes_to_identity(rs: &RelSpec) -> Result<bool, Error> {
    Ok(rs.transpose(&rs.counit)? == ModelledMap::identity(&rs.space))
}

/// The product in the admissible category: the spectrum of the product
/// cone in the category of modelled spaces.
pub fn admissible_product(ctx: ContextId, xs: &[ModelledSpace]) -> Result<(RelSpec, Cone), Error> {
    let sort = ctx
        .sort()
        .or_else(|| xs.first().map(|x| x.sort()))
        .unwrap_or(Sort::Lattice);
    let cone = product_spaces(sort, xs)?;
    let rs = cone_spec(ctx, &cone.apex, &cone.legs)?;
    let legs = rs.structure.clone();
    let apex = rs.space.clone();
    Ok((rs, Cone { apex, legs }))
}

/// The equalizer in the admissible category of `f, g: (Y,Q) ⇉ (X,P)`.
pub fn admissible_equalizer(
    ctx: ContextId,
    f: &ModelledMap,
    g: &ModelledMap,
) -> Result<(RelSpec, ModelledMap), Error> {
    let (e_space, e) = equalizer_spaces(f, g)?;
    let rs = cone_spec(ctx, &e_space, &[e.clone(), e.then(f)])?;
    let leg = rs.structure[0].clone();
    Ok((rs, leg))
}

/// The pullback in the admissible category of `f: (Y,Q) → (X,P)` and
/// `g: (Z,R) → (X,P)`.
pub fn admissible_pullback(ctx: ContextId, f: &ModelledMap, g: &ModelledMap) -> Result<(RelSpec, Cone), Error> {
    let pb = pullback_spaces(f, g)?;
    let to_base = pb.legs[0].then(f);
    let rs = cone_spec(ctx, &pb.apex, &[pb.legs[0].clone(), pb.legs[1].clone(), to_base])?;
    let cone = Cone {
        apex: rs.space.clone(),
        legs: rs.structure[..2].to_vec(),
    };
    Ok((rs, cone))
}

/// Outcome of the pullback-of-spectra check.
#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub pullback_points: usize,
    pub spec_h_points: usize,
    pub spec_f_points: usize,
    pub commutes: bool,
    pub universal: bool,
}

impl PullbackReport {
    pub fn passes(&self) -> bool {
        self.commutes && self.universal
    }
}

/// For `g: (Z,R) → (X,P)` admissible and `f: (Y,Q) → (X,P)`, pulls `f`
/// back along `g` to `h: (W,S) → (Z,R)` and checks that `Spec(h)` is the
/// pullback of `Spec(f)` along `g` in the admissible category.
pub fn pullback_spectra_check(
    ctx: ContextId,
    g: &ModelledMap,
    f: &ModelledMap,
    probes: &[ModelledSpace],
) -> Result<PullbackReport, Error> {
    if !g.source.is_t_modelled(ctx)? || !g.target.is_t_modelled(ctx)? {
        return Err(Error::Precondition("g must join T-modelled spaces".into()));
    }
    if !g.is_admissible(ctx)? {
        return Err(Error::Precondition("g must be admissible".into()));
    }
    let pb = pullback_spaces(g, f)?;
    let (h, w) = (&pb.legs[0], &pb.legs[1]);
    let sh = relative_spec(ctx, h)?;
    let sf = relative_spec(ctx, f)?;
    let top = sf.transpose(&sh.counit.then(w))?;
    let left = sh.structure[0].clone();
    let commutes = left.then(g) == top.then(&sf.structure[0]);
    let cone = Cone {
        apex: sh.space.clone(),
        legs: vec![left, top],
    };
    let universal = verify_pullback(g, &sf.structure[0], &cone, probes, Some(ctx))?;
    Ok(PullbackReport {
        pullback_points: pb.apex.len(),
        spec_h_points: sh.len(),
        spec_f_points: sf.len(),
        commutes,
        universal,
    })
}
