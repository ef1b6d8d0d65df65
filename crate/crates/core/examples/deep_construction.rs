use tropic::bounds::{deep_lower, deep_upper, DeepQuery};
use tropic::construct::{construct_deep_lower, count_regions_on_line};
use tropic::network::BiasMode;
use tropic::rational::int;

fn main() {
    for (widths, k) in [(vec![2, 1], 2), (vec![4, 2, 3], 3)] {
        let net = construct_deep_lower(1, &widths, k, 0).unwrap();
        let regions = count_regions_on_line(&net, &[int(0)], &[int(1)]).unwrap();
        let lo = deep_lower(1, &widths, k, BiasMode::Bias).unwrap().value;
        let up = deep_upper(&DeepQuery::uniform(1, &widths, k, BiasMode::Bias));
        println!("widths {widths:?}, rank {k}: {lo} <= {regions} <= {up}");
    }
}
