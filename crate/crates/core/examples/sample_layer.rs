use tropic::arrangement::count_regions_bruteforce;
use tropic::budget::Budget;
use tropic::construct::{sample_generic, SampleOptions};
use tropic::network::BiasMode;

fn main() {
    let opts = SampleOptions { certify_lift: true, ..SampleOptions::default() };
    for seed in 0..5 {
        let s = sample_generic(2, &[3, 2, 2], BiasMode::Bias, seed, &opts).unwrap();
        let r = count_regions_bruteforce(&s.layer, &Budget::default()).unwrap();
        println!("seed {seed}: {} regions, {} bounded, {} draws rejected", r.regions, r.bounded_regions, s.rejected);
    }
}
