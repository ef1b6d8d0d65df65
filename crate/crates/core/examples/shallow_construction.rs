use tropic::arrangement::count_regions_bruteforce;
use tropic::bounds::{shallow_formula, ShallowQuery};
use tropic::budget::Budget;
use tropic::construct::{construct_shallow_optimal, construct_shallow_optimal_nobias};
use tropic::network::{serialize_network, BiasMode, Network};

fn main() {
    let ranks = [3, 3, 2];
    let budget = Budget::default();
    for mode in [BiasMode::Bias, BiasMode::NoBias] {
        let layer = match mode {
            BiasMode::Bias => construct_shallow_optimal(2, &ranks, 1),
            BiasMode::NoBias => construct_shallow_optimal_nobias(2, &ranks, 1),
        }
        .unwrap();
        let got = count_regions_bruteforce(&layer, &budget).unwrap().regions;
        let want = shallow_formula(&ShallowQuery::new(2, &ranks, mode));
        println!("{}: {got} regions, formula {want}", mode.as_str());
        if mode == BiasMode::Bias {
            println!("{}", serialize_network(&Network::single(layer)));
        }
    }
}
