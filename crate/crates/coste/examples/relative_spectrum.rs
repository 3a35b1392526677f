//! The spectrum of a modelled space over a base, its counit, and the
//! adjunction census against small probes.

use coste::finmodel::{make_zmod, ring_product, Hom, Model};
use coste::relspec::{adjunction_census, counit_transposes_to_identity, relative_spec};
use coste::space::standard_probes;
use coste::spectrum::{ModelledMap, ModelledSpace};
use coste::ContextId;

fn point_map(a: &Model, b: &Model, map: Vec<usize>) -> Result<ModelledMap, coste::Error> {
    let h = Hom::new(b.clone(), a.clone(), map)?;
    ModelledMap::new(ModelledSpace::point(a), ModelledSpace::point(b), vec![0], vec![h])
}

fn main() -> Result<(), coste::Error> {
    let ctx = ContextId::Zariski;
    // ℤ/4 → ℤ/2 × ℤ/2, x ↦ (x, x) mod 2
    let f = point_map(&ring_product(&[2, 2]), &make_zmod(4)?, vec![0, 3, 0, 3])?;
    let rs = relative_spec(ctx, &f)?;
    println!("relative spectrum: {} points", rs.len());
    for (i, &(y, _)) in rs.points.iter().enumerate() {
        println!("  point {i} over {y}, stalk of order {}", rs.space.stalk(i).size());
    }
    println!("transpose of the counit is the identity: {}", counit_transposes_to_identity(&rs)?);
    for z in standard_probes(ctx).iter().filter(|z| z.len() <= 2) {
        for row in adjunction_census(&rs, z)? {
            println!("  probe of {} points: {} ↔ {}", row.probe_points, row.left, row.right);
        }
    }
    Ok(())
}
