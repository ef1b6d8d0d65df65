use tropic::arrangement::{build_atoms, build_poset, count_faces_poset, face_counts_bruteforce, is_simple};
use tropic::budget::Budget;
use tropic::network::{parse_network, BiasMode};

const NETWORK: &str = r#"{"input_dim": 2, "layers": [{"bias_mode": "bias", "units": [
    {"weights": [[0, 2], [1, 1], [0, 0]], "biases": [0, 1, 2]},
    {"weights": [[0, 0], [3, 2], [5, 1]], "biases": [0, 0, 0]}]}]}"#;

fn main() {
    let net = parse_network(NETWORK).unwrap();
    let layer = &net.layers[0];
    assert_eq!(layer.bias_mode, BiasMode::Bias);
    let budget = Budget::default();
    let arr = build_atoms(layer, &budget).unwrap();
    println!("atoms: {}, simple: {}", arr.atoms.len(), is_simple(&arr, &budget).unwrap().simple);
    let poset = build_poset(&arr, &budget).unwrap();
    let enumerated = face_counts_bruteforce(layer, &budget).unwrap();
    for s in 0..=2 {
        println!("f_{s}: enumerated {}, poset {}", enumerated[s], count_faces_poset(&poset, s).unwrap());
    }
}
