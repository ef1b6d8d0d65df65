use tropic::budget::Budget;
use tropic::verify::run_all;

fn main() {
    for r in run_all(10, 2024, &Budget::default()).unwrap() {
        println!("{:<20} {}/{}", r.name, r.passed, r.trials);
    }
}
