use tropic::bounds::{deep_lower, deep_upper, prior_bounds, shallow_formula, DeepQuery, ShallowQuery};
use tropic::network::BiasMode;

fn main() {
    for mode in [BiasMode::Bias, BiasMode::NoBias] {
        let q = ShallowQuery::new(2, &[2, 2, 2], mode);
        println!("shallow n=2 ranks=2,2,2 {}: {}", mode.as_str(), shallow_formula(&q));
    }
    let up = deep_upper(&DeepQuery::uniform(2, &[2, 2], 3, BiasMode::Bias));
    let lo = deep_lower(2, &[2, 2], 3, BiasMode::Bias).unwrap();
    println!("deep n0=2 widths=2,2 k=3: {} <= max regions <= {up} (n={})", lo.value, lo.n);
    let p = prior_bounds(2, 3, 3);
    println!("earlier bounds for 3 units of rank 3 on 2 inputs: {} .. {}", p.lower, p.upper);
}
