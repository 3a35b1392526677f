//! Prime spectra of ℤ/n: points, specialization order, stalks, and the
//! check that global sections give back the ring.

use coste::finmodel::{is_unit, make_zmod};
use coste::spectrum::{spec, standardness_witness};
use coste::ContextId;

fn main() -> Result<(), coste::Error> {
    for n in [6, 12, 30, 36] {
        let a = make_zmod(n)?;
        let s = spec(ContextId::Zariski, &a)?;
        println!("Spec ℤ/{n}: {} points", s.len());
        for p in 0..s.len() {
            let h = s.localization(p);
            let prime: Vec<usize> = a.elements().filter(|&x| !is_unit(&h.target, h.apply(x))).collect();
            let gens: Vec<usize> = prime.iter().copied().filter(|&x| x > 0 && n % x == 0).collect();
            println!("  point {p}: prime generated by {:?}, stalk of order {}", &gens[..1], s.space.stalk(p).size());
        }
        let w = standardness_witness(&s);
        println!("  Γ ≅ ℤ/{n}: {}", w.eta_iso);
    }
    Ok(())
}
