use tropic::arrangement::{build_atoms, build_poset, count_regions_poset};
use tropic::budget::Budget;
use tropic::construct::construct_shallow_optimal_nobias;

fn main() {
    let layer = construct_shallow_optimal_nobias(3, &[3, 3, 2], 2).unwrap();
    let budget = Budget::default();
    let poset = build_poset(&build_atoms(&layer, &budget).unwrap(), &budget).unwrap();
    println!("{} elements, {} cover relations", poset.len(), poset.covers().len());
    for (e, mu) in poset.elements.iter().zip(&poset.mobius) {
        println!("dim {} psi {:>2} mu {:>3} atoms {:?}", e.dim, e.psi, mu, e.atoms);
    }
    println!("regions: {}", count_regions_poset(&poset));
}
