//! Two more ring contexts. The Pierce spectrum splits a ring along its
//! idempotents; the field context is not standard.

use coste::finmodel::{make_zmod, ring_product};
use coste::spectrum::{spec, standardness_witness};
use coste::ContextId;

fn main() -> Result<(), coste::Error> {
    for a in [make_zmod(12)?, make_zmod(30)?, ring_product(&[4, 3, 2])] {
        let s = spec(ContextId::Pierce, &a)?;
        let stalks: Vec<usize> = s.space.stalks().iter().map(|m| m.size()).collect();
        println!("Pierce spectrum of a ring of order {}: stalks {stalks:?}", a.size());
    }

    let s = spec(ContextId::Field, &make_zmod(12)?)?;
    let w = standardness_witness(&s);
    println!("field spectrum of ℤ/12: {} points", s.len());
    println!("  Γ has {} elements, η iso: {}", s.space.gamma().model.size(), w.eta_iso);
    Ok(())
}
