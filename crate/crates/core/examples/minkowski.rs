use tropic::budget::Budget;
use tropic::minkowski::{classify_vertices, minkowski_sum, LabeledPointSet};
use tropic::rational::int;

fn set(label: &str, pts: &[[i64; 3]]) -> LabeledPointSet {
    LabeledPointSet::new(3, pts.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect(), label).unwrap()
}

fn main() {
    let segment = set("max(0, 2x+2y)", &[[0, 0, 0], [2, 2, 0]]);
    let triangle = set("max(x+1, y+1, x+y)", &[[1, 0, 1], [0, 1, 1], [1, 1, 0]]);
    let sum = minkowski_sum(&[segment, triangle]).unwrap();
    let c = classify_vertices(&sum, &Budget::default()).unwrap();
    for (p, k) in sum.points.iter().zip(&c.points) {
        let p: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        println!("({}) vertex={} upper={}", p.join(","), k.is_vertex, k.is_upper_vertex);
    }
    println!("{} vertices, {} upper", c.vertices(), c.upper());
}
