use tropic::geometry::{affine_dimension, euler_characteristic, recession_profile, ConstraintSystem};
use tropic::rational::int;

fn main() {
    let square = ConstraintSystem::new(2)
        .with_ge(vec![int(1), int(0)], int(0))
        .with_ge(vec![int(-1), int(0)], int(-1))
        .with_ge(vec![int(0), int(1)], int(0))
        .with_ge(vec![int(0), int(-1)], int(-1));
    let strip = ConstraintSystem::new(2).with_ge(vec![int(1), int(0)], int(0)).with_ge(vec![int(-1), int(0)], int(-1));
    let half = ConstraintSystem::new(2).with_ge(vec![int(1), int(0)], int(0));
    for (name, p) in [("square", square), ("strip", strip), ("half-plane", half)] {
        let r = recession_profile(&p).unwrap();
        println!(
            "{name}: dim {:?}, lineality {}, euler {}",
            affine_dimension(&p).unwrap(),
            r.lineality_dim,
            euler_characteristic(&p).unwrap()
        );
    }
}
